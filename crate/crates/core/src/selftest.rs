//! Built-in fixture suite: the reference « à » judgments and genitive
//! classifications, run against the bundled lexicon and scene.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::parser::{parse, Ast};
use crate::scene::Scene;
use crate::semantics::{judge_a, judge_genitive, Reason, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseResult {
    pub suite: &'static str,
    pub input: &'static str,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub cases: Vec<CaseResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.passed)
    }

    pub fn suite_passed(&self, suite: &str) -> bool {
        self.cases.iter().filter(|c| c.suite == suite).all(|c| c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cases {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            writeln!(f, "{mark} [{}] {} => {}", c.suite, c.input, c.actual)?;
            if !c.passed {
                writeln!(f, "       expected {}", c.expected)?;
            }
        }
        let n = self.cases.iter().filter(|c| c.passed).count();
        write!(f, "{n}/{} passed", self.cases.len())
    }
}

pub const LOCATIVE: &str = "locative";
pub const PART_WHOLE: &str = "part-whole";

const LOCATIVE_CASES: [(&str, Verdict, &[Reason]); 7] = [
    ("Max est à Toulouse", Verdict::Accept, &[]),
    ("Max est au jardin public", Verdict::Accept, &[]),
    ("Max est à l'extrémité de la table", Verdict::Accept, &[]),
    ("Max est au rocher", Verdict::Reject, &[Reason::NoSpacePortion]),
    ("La mouche est au verre", Verdict::Reject, &[Reason::NotFixed]),
    ("La mouche est au couteau", Verdict::Reject, &[Reason::NotFixed, Reason::NoSpacePortion]),
    ("Max est à un jardin public", Verdict::Reject, &[Reason::NotSpecified]),
];

const GENITIVE_CASES: [(&str, &str); 8] = [
    ("une brebis du troupeau", "MemberCollection"),
    ("le couple Dupont des heureux gagnants", "SubcollectionCollection"),
    ("une part de gâteau", "PortionWhole"),
    ("la farine du gâteau", "SubstanceWhole"),
    ("un morceau de la tasse", "PieceWhole"),
    ("la main de Jean", "ComponentWhole"),
    ("la poignée de la maison", "ComponentWhole"),
    ("la chute de la table", "HomogeneityViolation"),
];

fn describe_judgment(verdict: Verdict, reasons: &BTreeSet<Reason>) -> String {
    if reasons.is_empty() {
        format!("{verdict:?}")
    } else {
        let r: Vec<String> = reasons.iter().map(|r| format!("{r:?}")).collect();
        format!("{verdict:?} {{{}}}", r.join(", "))
    }
}

fn error_name(e: &Error) -> String {
    match e {
        Error::HomogeneityViolation { .. } => "HomogeneityViolation".into(),
        other => format!("error: {other}"),
    }
}

pub fn run(lexicon: &Lexicon, scene: &Scene) -> Report {
    let mut cases = Vec::new();
    for (input, verdict, reasons) in LOCATIVE_CASES {
        let want: BTreeSet<Reason> = reasons.iter().copied().collect();
        let expected = describe_judgment(verdict, &want);
        let actual = match parse(input, lexicon).and_then(|ast| judge_a(&ast, lexicon, None)) {
            Ok(j) => describe_judgment(j.verdict, &j.reasons),
            Err(e) => format!("error: {e}"),
        };
        cases.push(CaseResult { suite: LOCATIVE, input, passed: actual == expected, expected, actual });
    }
    for (input, want) in GENITIVE_CASES {
        let actual = match parse(input, lexicon) {
            Ok(Ast::NounPhrase { np }) => match judge_genitive(&np, scene, lexicon) {
                Ok(c) => c.relation.name().to_owned(),
                Err(e) => error_name(&e),
            },
            Ok(_) => "not a noun phrase".to_owned(),
            Err(e) => format!("error: {e}"),
        };
        cases.push(CaseResult {
            suite: PART_WHOLE,
            input,
            passed: actual == want,
            expected: want.to_owned(),
            actual,
        });
    }
    Report { cases }
}

/// Run against the bundled lexicon and scene.
pub fn run_bundled() -> Result<Report> {
    let lexicon = Lexicon::starter();
    let scene = Scene::starter(&lexicon)?;
    Ok(run(&lexicon, &scene))
}
