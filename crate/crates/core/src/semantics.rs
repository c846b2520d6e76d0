//! Judgments over parsed phrases: acceptability of « à » clauses,
//! genitive part-whole classification, internal-localization zones and
//! route prepositions.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lexicon::{Lexicon, NliRule};
use crate::meronomy::{explain, spatial_inclusion_holds, Classification};
use crate::ontology::{
    assign_frontal_orientation, build_frame, effective_features, AxisDirection, Definiteness,
    FeatureSet, GeometryParams, RouteSub, View,
};
use crate::parser::{Ast, NounPhrase, Preposition};
use crate::scene::{EntityId, Scene};
use crate::substrate::{connected, dilate, union_all, Axis, Period, Region};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    Accept,
    Reject,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Reason {
    NotFixed,
    NoSpacePortion,
    NotSpecified,
    UnknownLemma,
}

/// A scene-level condition checked in strict mode, or the presence of a
/// genitive whole for internal-localization nouns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum Check {
    GenitiveWhole,
    SiteStatic { entity: EntityId },
    NliInFrame { whole: EntityId, part: Option<EntityId> },
}

impl Check {
    fn failure(&self) -> Reason {
        match self {
            Check::GenitiveWhole => Reason::NotSpecified,
            Check::SiteStatic { .. } | Check::NliInFrame { .. } => Reason::NotFixed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum TraceStep {
    Site { lemma: String, definiteness: Definiteness },
    UnknownSite { lemma: String },
    NliHead { rule: NliRule, whole: Option<String> },
    Checked { check: Check, holds: bool },
    ViewTried { index: usize, view: View, features: FeatureSet },
    Selected { index: Option<usize>, verdict: Verdict },
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceStep::Site { lemma, definiteness } => write!(f, "site « {lemma} » ({definiteness:?})"),
            TraceStep::UnknownSite { lemma } => write!(f, "« {lemma} » is not in the lexicon"),
            TraceStep::NliHead { rule, whole } => match whole {
                Some(w) => write!(f, "internal localization noun ({rule:?}) of « {w} »"),
                None => write!(f, "internal localization noun ({rule:?}) without a whole"),
            },
            TraceStep::Checked { check, holds } => {
                let what = match check {
                    Check::GenitiveWhole => "genitive whole present".to_owned(),
                    Check::SiteStatic { entity } => format!("`{entity}` static over the scene"),
                    Check::NliInFrame { whole, part: Some(p) } => {
                        format!("`{p}` in the frame of `{whole}`")
                    }
                    Check::NliInFrame { whole, part: None } => {
                        format!("zone anchored to `{whole}`")
                    }
                };
                write!(f, "{what}: {}", if *holds { "yes" } else { "no" })
            }
            TraceStep::ViewTried { index, view, features } => write!(
                f,
                "view {index}: {view}, effective {}fix {}esp {}spc",
                sign(features.fix),
                sign(features.esp),
                sign(features.spc)
            ),
            TraceStep::Selected { index: Some(i), verdict } => write!(f, "{verdict:?} with view {i}"),
            TraceStep::Selected { index: None, verdict } => write!(f, "{verdict:?}"),
        }
    }
}

fn sign(b: bool) -> char {
    if b {
        '+'
    } else {
        '-'
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Judgment {
    pub verdict: Verdict,
    pub reasons: BTreeSet<Reason>,
    pub chosen_view: Option<View>,
    pub trace: Vec<TraceStep>,
}

impl Judgment {
    /// Recompute the verdict from the recorded trace alone.
    pub fn replay(&self) -> (Verdict, BTreeSet<Reason>) {
        let (verdict, reasons, _) = decide(&self.trace);
        (verdict, reasons)
    }
}

pub fn feature_failures(features: &FeatureSet) -> BTreeSet<Reason> {
    let mut out = BTreeSet::new();
    if !features.fix {
        out.insert(Reason::NotFixed);
    }
    if !features.esp {
        out.insert(Reason::NoSpacePortion);
    }
    if !features.spc {
        out.insert(Reason::NotSpecified);
    }
    out
}

/// First satisfying view, else the view with fewest failures (first on ties).
fn decide(trace: &[TraceStep]) -> (Verdict, BTreeSet<Reason>, Option<usize>) {
    if trace.iter().any(|s| matches!(s, TraceStep::UnknownSite { .. })) {
        return (Verdict::Reject, BTreeSet::from([Reason::UnknownLemma]), None);
    }
    let extra: BTreeSet<Reason> = trace
        .iter()
        .filter_map(|s| match s {
            TraceStep::Checked { check, holds: false } => Some(check.failure()),
            _ => None,
        })
        .collect();
    let mut best: Option<(usize, BTreeSet<Reason>)> = None;
    for step in trace {
        let TraceStep::ViewTried { index, features, .. } = step else { continue };
        let failures: BTreeSet<Reason> = feature_failures(features).union(&extra).copied().collect();
        if failures.is_empty() {
            return (Verdict::Accept, failures, Some(*index));
        }
        if best.as_ref().is_none_or(|(_, b)| failures.len() < b.len()) {
            best = Some((*index, failures));
        }
    }
    match best {
        Some((i, failures)) => (Verdict::Reject, failures, Some(i)),
        None => (Verdict::Reject, extra, None),
    }
}

pub fn judge_a(ast: &Ast, lexicon: &Lexicon, scene: Option<&Scene>) -> Result<Judgment> {
    judge_a_with(ast, lexicon, scene, &GeometryParams::default())
}

/// Judge a clause `X est à Y`. With a scene, fixity is also checked
/// against the scene's extents (strict mode).
pub fn judge_a_with(
    ast: &Ast,
    lexicon: &Lexicon,
    scene: Option<&Scene>,
    params: &GeometryParams,
) -> Result<Judgment> {
    let site = match ast {
        Ast::Locative { prep: Preposition::A, site, .. } => site,
        _ => return Err(Error::NotLocativeA),
    };
    let mut trace =
        vec![TraceStep::Site { lemma: site.head.clone(), definiteness: site.definiteness }];
    let Some(entry) = lexicon.get(&site.head) else {
        trace.push(TraceStep::UnknownSite { lemma: site.head.clone() });
        return Ok(finish(trace, &[]));
    };

    let views: Vec<(usize, View)> = match entry.nli_rule {
        Some(rule) => {
            let whole = site.complement.as_ref().map(|c| c.head.clone());
            trace.push(TraceStep::NliHead { rule, whole: whole.clone() });
            trace.push(TraceStep::Checked { check: Check::GenitiveWhole, holds: whole.is_some() });
            if let (Some(scene), Some(whole)) = (scene, &whole) {
                if let Some(step) = nli_frame_check(&site.head, whole, scene, params)? {
                    trace.push(step);
                }
            }
            entry.views.iter().copied().enumerate().filter(|(_, v)| Some(v) == entry.place_view()).collect()
        }
        None => {
            if let Some(scene) = scene {
                if let Some(e) = scene.with_lemma(&site.head).next() {
                    let mut extents = e.extent.values();
                    let first = extents.next();
                    let holds = extents.all(|r| Some(r) == first);
                    trace.push(TraceStep::Checked {
                        check: Check::SiteStatic { entity: e.id.clone() },
                        holds,
                    });
                }
            }
            entry.views.iter().copied().enumerate().collect()
        }
    };
    for &(index, view) in &views {
        let features = effective_features(&view, site.definiteness);
        trace.push(TraceStep::ViewTried { index, view, features });
    }
    Ok(finish(trace, &entry.views))
}

fn finish(mut trace: Vec<TraceStep>, views: &[View]) -> Judgment {
    let (verdict, reasons, index) = decide(&trace);
    trace.push(TraceStep::Selected { index, verdict });
    let chosen_view = match verdict {
        Verdict::Accept => index.and_then(|i| views.get(i).copied()),
        Verdict::Reject => None,
    };
    Judgment { verdict, reasons, chosen_view, trace }
}

fn scene_period(scene: &Scene) -> Option<Period> {
    let times = scene.times();
    Period::new(*times.first()?, *times.last()?).ok()
}

/// In strict mode an internal-localization noun must pick out something
/// fixed relative to its whole: an entity with that lemma inside the whole
/// and in the whole's frame. Without such an entity the zone is derived
/// from the whole's own extent and is fixed by construction.
fn nli_frame_check(
    lemma: &str,
    whole_lemma: &str,
    scene: &Scene,
    params: &GeometryParams,
) -> Result<Option<TraceStep>> {
    let Some(whole) = scene.with_lemma(whole_lemma).next() else { return Ok(None) };
    let Some(period) = scene_period(scene) else { return Ok(None) };
    let candidates: Vec<&EntityId> = scene
        .with_lemma(lemma)
        .filter(|e| spatial_inclusion_holds(&e.id, &whole.id, scene).unwrap_or(false))
        .map(|e| &e.id)
        .collect();
    let whole_id = whole.id.clone();
    if candidates.is_empty() {
        return Ok(Some(TraceStep::Checked {
            check: Check::NliInFrame { whole: whole_id, part: None },
            holds: true,
        }));
    }
    let frame = build_frame(&whole.id, period, scene, params)?;
    let inside = candidates.iter().find(|id| frame.contains(id));
    Ok(Some(TraceStep::Checked {
        check: Check::NliInFrame {
            whole: whole_id,
            part: Some((*inside.unwrap_or(&candidates[0])).clone()),
        },
        holds: inside.is_some(),
    }))
}

/// Classify a genitive phrase `part de whole` against the scene by lemma.
/// Each entity pair is tried in id order; the first that classifies wins.
pub fn judge_genitive(np: &NounPhrase, scene: &Scene, lexicon: &Lexicon) -> Result<Classification> {
    let whole = np.complement.as_deref().ok_or(Error::NoGenitive)?;
    for lemma in [&np.head, &whole.head] {
        if lexicon.get(lemma).is_none() {
            return Err(Error::UnknownLemma(lemma.clone()));
        }
    }
    let ids = |lemma: &str| -> Result<Vec<EntityId>> {
        let v: Vec<EntityId> = scene.with_lemma(lemma).map(|e| e.id.clone()).collect();
        if v.is_empty() {
            return Err(Error::UnknownEntity(EntityId::from(lemma)));
        }
        Ok(v)
    };
    let (parts, wholes) = (ids(&np.head)?, ids(&whole.head)?);
    let mut first_err = None;
    for p in &parts {
        for w in &wholes {
            match explain(p, w, scene) {
                Ok(c) => return Ok(c),
                Err(e) => {
                    first_err.get_or_insert(e);
                }
            }
        }
    }
    Err(first_err.expect("both candidate lists are non-empty"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NliZone {
    pub whole: EntityId,
    pub lemma: String,
    pub rule: NliRule,
    pub material_zone: Region,
    pub space_portion: Region,
}

fn ceil_div(n: i32, d: u32) -> i32 {
    let d = d.max(1) as i32;
    (n + d - 1) / d
}

/// Voxels within the outer `1/divisor` of the extent in direction `dir`.
fn slab(extent: &Region, dir: AxisDirection, divisor: u32) -> Option<Region> {
    let b = extent.bounds();
    let k = ceil_div(b.len(dir.axis), divisor);
    let (lo, hi) = (b.lo(dir.axis), b.hi(dir.axis));
    extent.filter(|v| {
        let c = v.coord(dir.axis);
        if dir.positive {
            c > hi - k
        } else {
            c < lo + k
        }
    })
}

/// Axes ordered by extent length, longest first; ties keep x, y, z order.
fn axes_by_length(extent: &Region) -> [Axis; 3] {
    let b = extent.bounds();
    let mut axes = Axis::ALL;
    axes.sort_by_key(|a| std::cmp::Reverse(b.len(*a)));
    axes
}

/// Left of a horizontal front, looking along it with z up.
fn left_of(front: AxisDirection) -> Option<AxisDirection> {
    let (axis, positive) = match (front.axis, front.positive) {
        (Axis::X, p) => (Axis::Y, p),
        (Axis::Y, p) => (Axis::X, !p),
        (Axis::Z, _) => return None,
    };
    Some(AxisDirection::new(axis, positive))
}

fn rule_name(rule: NliRule) -> &'static str {
    match rule {
        NliRule::Top => "top",
        NliRule::Bottom => "bottom",
        NliRule::Front => "front",
        NliRule::Back => "back",
        NliRule::Left => "left",
        NliRule::Right => "right",
        NliRule::Corner => "corner",
        NliRule::End => "end",
        NliRule::Interior => "interior",
    }
}

/// Material part of `extent` selected by `rule`. Directional rules need a
/// frontal orientation.
pub fn material_zone(
    extent: &Region,
    rule: NliRule,
    front: Option<AxisDirection>,
    params: &GeometryParams,
) -> Result<Option<Region>, ()> {
    let third = params.third_divisor;
    let up = AxisDirection::new(Axis::Z, true);
    let lateral = |f: AxisDirection| left_of(f).ok_or(());
    Ok(match rule {
        NliRule::Top => slab(extent, up, third),
        NliRule::Bottom => slab(extent, up.reversed(), third),
        NliRule::End => {
            let major = axes_by_length(extent)[0];
            slab(extent, AxisDirection::new(major, true), params.end_divisor)
        }
        NliRule::Corner => {
            let [a, b, _] = axes_by_length(extent);
            let first = slab(extent, AxisDirection::new(a, true), third);
            let second = slab(extent, AxisDirection::new(b, true), third);
            first.zip(second).and_then(|(x, y)| x.intersection(&y))
        }
        NliRule::Interior => extent.erode(params.shell_depth),
        NliRule::Front => slab(extent, front.ok_or(())?, third),
        NliRule::Back => slab(extent, front.ok_or(())?.reversed(), third),
        NliRule::Left => slab(extent, lateral(front.ok_or(())?)?, third),
        NliRule::Right => slab(extent, lateral(front.ok_or(())?)?.reversed(), third),
    })
}

/// Zone of `whole` named by the internal-localization noun `lemma`, with
/// the free space next to it.
pub fn resolve_nli(
    whole: &EntityId,
    lemma: &str,
    scene: &Scene,
    lexicon: &Lexicon,
    t: u32,
    params: &GeometryParams,
) -> Result<NliZone> {
    let entry = lexicon.get(lemma).ok_or_else(|| Error::UnknownLemma(lemma.to_owned()))?;
    let rule = entry.nli_rule.ok_or_else(|| Error::NotAnNli(lemma.to_owned()))?;
    let record = scene.entity(whole)?;
    let extent = scene.extent_at(whole, t)?;
    let front = assign_frontal_orientation(record).map(|o| o.front);
    let zone = material_zone(extent, rule, front, params)
        .map_err(|()| Error::MissingOrientation(whole.clone()))?
        .ok_or(Error::EmptyZone(rule_name(rule)))?;

    let dilated = dilate(&zone, params.portion_radius);
    let free = match scene.material_extents_at(t, &[]) {
        Some(m) => dilated.difference(&m),
        None => Some(dilated),
    };
    let adjacent: Vec<Region> = free
        .map(|f| f.components().into_iter().filter(|c| connected(c, &zone)).collect())
        .unwrap_or_default();
    let space_portion = union_all(&adjacent).ok_or(Error::EmptyZone("space portion"))?;
    Ok(NliZone { whole: whole.clone(), lemma: lemma.to_owned(), rule, material_zone: zone, space_portion })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RouteCheck {
    Ok(RouteSub),
    Mismatch,
}

pub fn check_route_prep(prep: Preposition, views: &[View]) -> Result<RouteCheck> {
    if !matches!(prep, Preposition::Par | Preposition::ATravers) {
        return Err(Error::NotRoutePreposition);
    }
    Ok(views
        .iter()
        .find_map(|v| v.category.route_sub())
        .map_or(RouteCheck::Mismatch, RouteCheck::Ok))
}

pub fn check_route(prep: Preposition, lemma: &str, lexicon: &Lexicon) -> Result<RouteCheck> {
    let entry = lexicon.get(lemma).ok_or_else(|| Error::UnknownLemma(lemma.to_owned()))?;
    check_route_prep(prep, &entry.views)
}
