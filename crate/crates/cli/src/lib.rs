//! Command-line driver. [`run`] takes the argument list and output streams
//! and returns the process exit code:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | accepted / found |
//! | 1 | rejected, no relation, no orientation, empty zone |
//! | 2 | usage or parse error, unknown entity or lemma |
//! | 3 | unreadable or invalid lexicon or scene |

use std::ffi::OsString;
use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lokatif_core::lexicon::Lexicon;
use lokatif_core::meronomy::{explain, explain_chain, transitive_parts_explained};
use lokatif_core::ontology::{assign_frontal_orientation, GeometryParams};
use lokatif_core::parser::{parse, Ast, Preposition};
use lokatif_core::scene::{EntityId, Scene};
use lokatif_core::selftest;
use lokatif_core::semantics::{check_route, judge_a_with, judge_genitive, resolve_nli, RouteCheck, Verdict};
use lokatif_core::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "lokatif", version, about = "Judge French locative phrases against a lexicon and a voxel scene")]
pub struct Cli {
    /// Lexicon file (JSON).
    #[arg(long, env = "LOKATIF_LEXICON", global = true)]
    pub lexicon: Option<PathBuf>,
    /// Scene file (JSON); the bundled fixture scene is used when absent.
    #[arg(long, global = true)]
    pub scene: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    /// Also check fixity of « à » sites against the scene.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Time step for extents.
    #[arg(long, default_value_t = 0, global = true)]
    pub time: u32,
    /// Column height above geographic places.
    #[arg(long, global = true)]
    pub height: Option<u32>,
    /// Dilation radius for space portions.
    #[arg(long, global = true)]
    pub radius: Option<u32>,
    #[arg(long, global = true)]
    pub third_divisor: Option<u32>,
    #[arg(long, global = true)]
    pub end_divisor: Option<u32>,
    #[arg(long, global = true)]
    pub shell_depth: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Judge a sentence: « à » clauses, route prepositions or genitive phrases.
    Check { sentence: String },
    /// Classify the relation between two entities (ids or lemmas).
    Partwhole { part: String, whole: String },
    /// All direct and inferred parts of an entity.
    Infer { whole: String },
    /// Explain whether part / middle / whole composes.
    Chain { part: String, middle: String, whole: String },
    /// Material zone and adjacent space of an internal localization noun.
    Nli { whole: String, lemma: String },
    /// Frontal orientation of an entity.
    Orient { entity: String },
    /// Views and features of a lemma.
    Classify { lemma: String },
    /// Run the built-in fixture suite.
    Selftest,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;

/// Failure that stops a command before it produces a result.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Display) -> Self {
        Failure { code: EXIT_USAGE, message: message.to_string() }
    }

    fn data(message: impl Display) -> Self {
        Failure { code: EXIT_DATA, message: message.to_string() }
    }
}

/// Exit code for a core error raised while answering a query.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoRelation { .. }
        | Error::HomogeneityViolation { .. }
        | Error::NoDependence(..)
        | Error::MissingOrientation(_)
        | Error::MissingExtent { .. }
        | Error::EmptyZone(_) => EXIT_NEGATIVE,
        Error::LexiconParse { .. }
        | Error::DuplicateLemma(_)
        | Error::InvalidEntry { .. }
        | Error::SceneParse { .. }
        | Error::InvalidScene(_)
        | Error::CycleDetected(_) => EXIT_DATA,
        _ => EXIT_USAGE,
    }
}

struct Context {
    format: Format,
    strict: bool,
    time: u32,
    params: GeometryParams,
    lexicon: Lexicon,
    scene: Option<Scene>,
    scene_path: Option<PathBuf>,
}

impl Context {
    fn scene(&mut self) -> Result<&Scene, Failure> {
        if self.scene.is_none() {
            let scene = match &self.scene_path {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| Failure::data(format!("cannot read scene {}: {e}", path.display())))?;
                    Scene::from_json(&text, &self.lexicon)
                        .map_err(|e| Failure::data(format!("{}: {e}", path.display())))?
                }
                None => Scene::starter(&self.lexicon).map_err(|e| Failure::data(format!("bundled scene: {e}")))?,
            };
            self.scene = Some(scene);
        }
        Ok(self.scene.as_ref().expect("loaded above"))
    }

    fn entity(&mut self, name: &str) -> Result<EntityId, Failure> {
        let scene = self.scene()?;
        if let Some(e) = scene.get(name) {
            return Ok(e.id.clone());
        }
        let lower = name.to_lowercase();
        let found = scene.with_lemma(&lower).next().map(|e| e.id.clone());
        found.ok_or_else(|| Failure::usage(Error::UnknownEntity(EntityId::from(name))))
    }
}

fn load_lexicon(path: &Path) -> Result<Lexicon, Failure> {
    let file = std::fs::File::open(path)
        .map_err(|e| Failure::data(format!("cannot read lexicon {}: {e}", path.display())))?;
    Lexicon::load(std::io::BufReader::new(file)).map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}

fn params(cli: &Cli) -> GeometryParams {
    let mut p = GeometryParams::default();
    if let Some(h) = cli.height {
        p.column_height = h;
    }
    if let Some(r) = cli.radius {
        p.portion_radius = r;
    }
    if let Some(d) = cli.third_divisor {
        p.third_divisor = d.max(1);
    }
    if let Some(d) = cli.end_divisor {
        p.end_divisor = d.max(1);
    }
    if let Some(d) = cli.shell_depth {
        p.shell_depth = d;
    }
    p
}

/// Parse `args` (including the program name) and execute the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    if let Command::Selftest = cli.command {
        let report = selftest::run_bundled().map_err(Failure::data)?;
        emit(out, cli.format, &report, |w| writeln!(w, "{report}"))?;
        return Ok(if report.passed() { EXIT_OK } else { EXIT_NEGATIVE });
    }
    let Some(path) = cli.lexicon.clone() else {
        return Err(Failure::usage(
            "no lexicon given; pass --lexicon <file> or set LOKATIF_LEXICON",
        ));
    };
    let mut ctx = Context {
        format: cli.format,
        strict: cli.strict,
        time: cli.time,
        params: params(&cli),
        lexicon: load_lexicon(&path)?,
        scene: None,
        scene_path: cli.scene.clone(),
    };
    match cli.command {
        Command::Check { sentence } => check(&mut ctx, &sentence, out),
        Command::Partwhole { part, whole } => partwhole(&mut ctx, &part, &whole, out),
        Command::Infer { whole } => infer(&mut ctx, &whole, out),
        Command::Chain { part, middle, whole } => chain(&mut ctx, [&part, &middle, &whole], out),
        Command::Nli { whole, lemma } => nli(&mut ctx, &whole, &lemma, out),
        Command::Orient { entity } => orient(&mut ctx, &entity, out),
        Command::Classify { lemma } => classify_lemma(&ctx, &lemma, out),
        Command::Selftest => unreachable!("handled above"),
    }
}

fn io(e: std::io::Error) -> Failure {
    Failure { code: EXIT_DATA, message: format!("write failed: {e}") }
}

fn emit<T: Serialize>(
    out: &mut dyn Write,
    format: Format,
    doc: &T,
    text: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> Result<(), Failure> {
    match format {
        Format::Json => {
            let s = serde_json::to_string_pretty(doc).expect("documents serialize");
            writeln!(out, "{s}").map_err(io)
        }
        Format::Text => text(out).map_err(io),
    }
}

/// Error message with a caret under the offending byte.
fn positioned(input: &str, e: &Error) -> String {
    let position = match e {
        Error::Syntax { position, .. } | Error::UnknownWord { position, .. } => Some(*position),
        _ => None,
    };
    match position {
        Some(p) => {
            let col = input.get(..p).map_or(p, |s| s.chars().count());
            format!("{e}\n  {input}\n  {}^", " ".repeat(col))
        }
        None => e.to_string(),
    }
}

#[derive(Serialize)]
struct RouteDoc<'a> {
    input: &'a str,
    verdict: Verdict,
    route: RouteCheck,
}

#[derive(Serialize)]
struct RelationDoc<'a, F: Serialize> {
    part: &'a str,
    whole: &'a str,
    relation: Option<String>,
    trace: F,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn check(ctx: &mut Context, sentence: &str, out: &mut dyn Write) -> Result<i32, Failure> {
    let ast = parse(sentence, &ctx.lexicon).map_err(|e| Failure::usage(positioned(sentence, &e)))?;
    match &ast {
        Ast::Locative { prep: Preposition::A, .. } => {
            let scene = if ctx.strict { Some(ctx.scene()?.clone()) } else { None };
            let j = judge_a_with(&ast, &ctx.lexicon, scene.as_ref(), &ctx.params)
                .map_err(|e| Failure { code: exit_code(&e), message: e.to_string() })?;
            #[derive(Serialize)]
            struct Doc<'a> {
                input: &'a str,
                #[serde(flatten)]
                judgment: &'a lokatif_core::semantics::Judgment,
            }
            emit(out, ctx.format, &Doc { input: sentence, judgment: &j }, |w| {
                let reasons: Vec<String> = j.reasons.iter().map(|r| format!("{r:?}")).collect();
                match j.verdict {
                    Verdict::Accept => writeln!(w, "Accept")?,
                    Verdict::Reject => writeln!(w, "Reject: {}", reasons.join(", "))?,
                }
                for step in &j.trace {
                    writeln!(w, "  {step}")?;
                }
                Ok(())
            })?;
            Ok(if j.verdict == Verdict::Accept { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Ast::Locative { prep: prep @ (Preposition::Par | Preposition::ATravers), site, .. } => {
            let route = check_route(*prep, &site.head, &ctx.lexicon).map_err(|e| Failure::usage(e))?;
            let verdict = match route {
                RouteCheck::Ok(_) => Verdict::Accept,
                RouteCheck::Mismatch => Verdict::Reject,
            };
            emit(out, ctx.format, &RouteDoc { input: sentence, verdict, route }, |w| match route {
                RouteCheck::Ok(tag) => writeln!(w, "Accept: « {} » is a {tag:?}", site.head),
                RouteCheck::Mismatch => writeln!(w, "Reject: « {} » is neither a conduit nor a path", site.head),
            })?;
            Ok(if verdict == Verdict::Accept { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Ast::Locative { prep, .. } => Err(Failure::usage(format!(
            "no judgment is defined for « {} »; use « à », « par » or « à travers »",
            prep.surface()
        ))),
        Ast::NounPhrase { np } if np.complement.is_some() => {
            let scene = ctx.scene()?.clone();
            let whole = np.complement.as_ref().map(|c| c.head.as_str()).unwrap_or_default();
            match judge_genitive(np, &scene, &ctx.lexicon) {
                Ok(c) => {
                    let doc = RelationDoc {
                        part: c.part.as_str(),
                        whole: c.whole.as_str(),
                        relation: Some(c.relation.to_string()),
                        trace: &c.facts,
                        error: None,
                    };
                    emit(out, ctx.format, &doc, |w| write!(w, "{c}"))?;
                    Ok(EXIT_OK)
                }
                Err(e) => negative(ctx, out, &np.head, whole, e),
            }
        }
        Ast::NounPhrase { .. } => Err(Failure::usage(
            "nothing to judge: give a clause with « est » or a phrase with a genitive complement",
        )),
    }
}

/// Report a negative classification as a result, or fail on other errors.
fn negative(ctx: &Context, out: &mut dyn Write, part: &str, whole: &str, e: Error) -> Result<i32, Failure> {
    let code = exit_code(&e);
    if code != EXIT_NEGATIVE {
        return Err(Failure { code, message: e.to_string() });
    }
    let doc = RelationDoc { part, whole, relation: None, trace: Vec::<()>::new(), error: Some(e.to_string()) };
    emit(out, ctx.format, &doc, |w| writeln!(w, "{e}"))?;
    Ok(code)
}

fn partwhole(ctx: &mut Context, part: &str, whole: &str, out: &mut dyn Write) -> Result<i32, Failure> {
    let (p, w) = (ctx.entity(part)?, ctx.entity(whole)?);
    let scene = ctx.scene()?.clone();
    match explain(&p, &w, &scene) {
        Ok(c) => {
            let doc = RelationDoc {
                part: p.as_str(),
                whole: w.as_str(),
                relation: Some(c.relation.to_string()),
                trace: &c.facts,
                error: None,
            };
            emit(out, ctx.format, &doc, |w| write!(w, "{c}"))?;
            Ok(EXIT_OK)
        }
        Err(e) => negative(ctx, out, p.as_str(), w.as_str(), e),
    }
}

fn infer(ctx: &mut Context, whole: &str, out: &mut dyn Write) -> Result<i32, Failure> {
    let w = ctx.entity(whole)?;
    let scene = ctx.scene()?;
    let parts = transitive_parts_explained(&w, scene)
        .map_err(|e| Failure { code: exit_code(&e), message: e.to_string() })?;
    #[derive(Serialize)]
    struct Doc<'a> {
        whole: &'a str,
        parts: &'a [lokatif_core::meronomy::InferredPart],
    }
    emit(out, ctx.format, &Doc { whole: w.as_str(), parts: &parts }, |o| {
        if parts.is_empty() {
            writeln!(o, "{w} has no parts in this scene")?;
        }
        for p in &parts {
            writeln!(o, "{p}")?;
        }
        Ok(())
    })?;
    Ok(EXIT_OK)
}

fn chain(ctx: &mut Context, names: [&String; 3], out: &mut dyn Write) -> Result<i32, Failure> {
    let [a, b, c] = names.map(|n| ctx.entity(n));
    let (a, b, c) = (a?, b?, c?);
    let scene = ctx.scene()?;
    let ex = explain_chain(&a, &b, &c, scene);
    emit(out, ctx.format, &ex, |w| write!(w, "{ex}"))?;
    Ok(if ex.composed.is_some() { EXIT_OK } else { EXIT_NEGATIVE })
}

fn nli(ctx: &mut Context, whole: &str, lemma: &str, out: &mut dyn Write) -> Result<i32, Failure> {
    let w = ctx.entity(whole)?;
    let (time, params) = (ctx.time, ctx.params);
    let scene = ctx.scene()?.clone();
    match resolve_nli(&w, lemma, &scene, &ctx.lexicon, time, &params) {
        Ok(z) => {
            emit(out, ctx.format, &z, |o| {
                writeln!(o, "{} of {} ({:?})", z.lemma, z.whole, z.rule)?;
                writeln!(o, "material zone ({} voxels): {}", z.material_zone.len(), z.material_zone)?;
                writeln!(o, "space portion ({} voxels): {}", z.space_portion.len(), z.space_portion)
            })?;
            Ok(EXIT_OK)
        }
        Err(e) => negative(ctx, out, lemma, w.as_str(), e),
    }
}

fn orient(ctx: &mut Context, entity: &str, out: &mut dyn Write) -> Result<i32, Failure> {
    let id = ctx.entity(entity)?;
    let scene = ctx.scene()?;
    let record = scene.entity(&id).map_err(Failure::usage)?;
    let o = assign_frontal_orientation(record);
    #[derive(Serialize)]
    struct Doc<'a> {
        entity: &'a str,
        orientation: Option<lokatif_core::ontology::FrontalOrientation>,
    }
    emit(out, ctx.format, &Doc { entity: id.as_str(), orientation: o }, |w| match o {
        Some(o) => writeln!(
            w,
            "{id}: front {} from {:?} ({})",
            o.front,
            o.factor,
            if o.intrinsic { "intrinsic" } else { "contextual" }
        ),
        None => writeln!(w, "{id}: no frontal orientation"),
    })?;
    Ok(if o.is_some() { EXIT_OK } else { EXIT_NEGATIVE })
}

fn classify_lemma(ctx: &Context, lemma: &str, out: &mut dyn Write) -> Result<i32, Failure> {
    let lemma = lemma.to_lowercase();
    let Some(entry) = ctx.lexicon.get(&lemma) else {
        return Err(Failure::usage(Error::UnknownLemma(lemma)));
    };
    #[derive(Serialize)]
    struct Doc<'a> {
        lemma: &'a str,
        proper: bool,
        views: &'a [lokatif_core::View],
        nli_rule: Option<lokatif_core::NliRule>,
        component_function: Option<&'a str>,
    }
    let doc = Doc {
        lemma: &entry.lemma,
        proper: entry.proper,
        views: &entry.views,
        nli_rule: entry.nli_rule,
        component_function: entry.component_function.as_deref(),
    };
    emit(out, ctx.format, &doc, |w| {
        writeln!(w, "{}{}", entry.lemma, if entry.proper { " (proper)" } else { "" })?;
        for (i, v) in entry.views.iter().enumerate() {
            writeln!(w, "  view {i}: {v}")?;
        }
        if let Some(rule) = entry.nli_rule {
            writeln!(w, "  internal localization noun: {rule:?}")?;
        }
        if let Some(f) = &entry.component_function {
            writeln!(w, "  component noun: {f}")?;
        }
        Ok(())
    })?;
    Ok(EXIT_OK)
}
