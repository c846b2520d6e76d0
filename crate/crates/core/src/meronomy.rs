//! Part-whole relations.
//!
//! Five relations follow from category and structural facts (membership,
//! declared portions, constitution). Component-whole relations are
//! grounded in functional dependence and come in four variants, one per
//! combination of dependence direction and directness; the variants are
//! what explains why chains of component relations sometimes compose and
//! sometimes do not.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ontology::{Genericity, TopCategory};
use crate::scene::{EntityId, PortionMode, Scene};
use crate::substrate::part_of;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    PartDependsOnWhole,
    WholeDependsOnPart,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Directness {
    Direct,
    Indirect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PartWholeRelation {
    MemberCollection,
    SubcollectionCollection,
    PortionWhole,
    SubstanceWhole,
    PieceWhole,
    ComponentWhole { direction: Direction, directness: Directness },
}

impl PartWholeRelation {
    pub fn component(direction: Direction, directness: Directness) -> Self {
        PartWholeRelation::ComponentWhole { direction, directness }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PartWholeRelation::MemberCollection => "MemberCollection",
            PartWholeRelation::SubcollectionCollection => "SubcollectionCollection",
            PartWholeRelation::PortionWhole => "PortionWhole",
            PartWholeRelation::SubstanceWhole => "SubstanceWhole",
            PartWholeRelation::PieceWhole => "PieceWhole",
            PartWholeRelation::ComponentWhole { .. } => "ComponentWhole",
        }
    }

    /// All ten relation values.
    pub fn all() -> Vec<PartWholeRelation> {
        use PartWholeRelation::*;
        let mut out = vec![MemberCollection, SubcollectionCollection, PortionWhole, SubstanceWhole, PieceWhole];
        for direction in [Direction::PartDependsOnWhole, Direction::WholeDependsOnPart] {
            for directness in [Directness::Direct, Directness::Indirect] {
                out.push(ComponentWhole { direction, directness });
            }
        }
        out
    }
}

impl fmt::Display for PartWholeRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartWholeRelation::ComponentWhole { direction, directness } => {
                write!(f, "ComponentWhole({direction:?}, {directness:?})")
            }
            other => f.write_str(other.name()),
        }
    }
}

/// A shortest functional-dependence path between a part and its whole.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DependencePath {
    pub direction: Direction,
    pub directness: Directness,
    /// From dependent to dependee.
    pub path: Vec<EntityId>,
    pub genericity: Vec<Genericity>,
}

/// A fact the classifier relied on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "fact", rename_all = "snake_case")]
pub enum Fact {
    Member { collection: EntityId },
    Subcollection { part_members: usize, whole_members: usize },
    Portion { mode: PortionMode },
    Constitution { substance: EntityId, constituted: EntityId },
    Dependence(DependencePath),
    SpatialInclusion { verified: bool },
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fact::Member { collection } => write!(f, "listed as a member of collection `{collection}`"),
            Fact::Subcollection { part_members, whole_members } => write!(
                f,
                "all {part_members} members are among the whole's {whole_members} members"
            ),
            Fact::Portion { mode } => write!(f, "declared {mode:?} fact"),
            Fact::Constitution { substance, constituted } => {
                write!(f, "`{constituted}` is made of `{substance}`")
            }
            Fact::Dependence(p) => {
                let chain: Vec<&str> = p.path.iter().map(EntityId::as_str).collect();
                write!(
                    f,
                    "functional dependence {} ({:?}, {:?}; {})",
                    chain.join(" -> "),
                    p.direction,
                    p.directness,
                    p.genericity.iter().map(|g| format!("{g:?}")).collect::<Vec<_>>().join(", ")
                )
            }
            Fact::SpatialInclusion { verified: true } => f.write_str("part lies inside whole at every shared time"),
            Fact::SpatialInclusion { verified: false } => f.write_str("no shared extents; inclusion not checked"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub part: EntityId,
    pub whole: EntityId,
    pub relation: PartWholeRelation,
    pub facts: Vec<Fact>,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} / {}: {}", self.part, self.whole, self.relation)?;
        for fact in &self.facts {
            writeln!(f, "  - {fact}")?;
        }
        Ok(())
    }
}

pub fn classify(part: &EntityId, whole: &EntityId, scene: &Scene) -> Result<PartWholeRelation> {
    explain(part, whole, scene).map(|c| c.relation)
}

/// Run the classification ladder and report the facts that decided it.
pub fn explain(part: &EntityId, whole: &EntityId, scene: &Scene) -> Result<Classification> {
    let p = scene.entity(part)?;
    let w = scene.entity(whole)?;
    let no_relation = || Error::NoRelation { part: part.clone(), whole: whole.clone() };
    if part == whole {
        return Err(no_relation());
    }
    let mut facts = Vec::new();

    let relation = if p.top() != w.top() {
        // constitution is the only bridge across top categories
        match constitution(part, whole, scene) {
            Some(fact) if p.top() == TopCategory::Substance && w.top() == TopCategory::Material => {
                facts.push(fact);
                PartWholeRelation::SubstanceWhole
            }
            _ => {
                return Err(Error::HomogeneityViolation { part: part.clone(), whole: whole.clone() })
            }
        }
    } else if w.is_collection()
        && !p.is_collection()
        && w.members.as_ref().is_some_and(|m| m.contains(part))
    {
        facts.push(Fact::Member { collection: whole.clone() });
        PartWholeRelation::MemberCollection
    } else if let Some(fact) = subcollection(part, whole, scene) {
        facts.push(fact);
        PartWholeRelation::SubcollectionCollection
    } else if scene.portion_mode(part, whole) == Some(PortionMode::ConventionalPortion) {
        facts.push(Fact::Portion { mode: PortionMode::ConventionalPortion });
        PartWholeRelation::PortionWhole
    } else if let Some(fact) =
        constitution(part, whole, scene).filter(|_| p.top() == TopCategory::Substance)
    {
        facts.push(fact);
        PartWholeRelation::SubstanceWhole
    } else if scene.portion_mode(part, whole) == Some(PortionMode::ArbitraryPiece) {
        facts.push(Fact::Portion { mode: PortionMode::ArbitraryPiece });
        PartWholeRelation::PieceWhole
    } else {
        match dependence_path(part, whole, scene) {
            Ok(path) => {
                let rel = PartWholeRelation::component(path.direction, path.directness);
                facts.push(Fact::Dependence(path));
                rel
            }
            Err(Error::NoDependence(..)) => return Err(no_relation()),
            Err(e) => return Err(e),
        }
    };

    match spatial_inclusion_holds(part, whole, scene) {
        Ok(true) => facts.push(Fact::SpatialInclusion { verified: true }),
        Ok(false) => return Err(no_relation()),
        Err(Error::MissingExtent { .. }) => facts.push(Fact::SpatialInclusion { verified: false }),
        Err(e) => return Err(e),
    }
    Ok(Classification { part: part.clone(), whole: whole.clone(), relation, facts })
}

fn subcollection(part: &EntityId, whole: &EntityId, scene: &Scene) -> Option<Fact> {
    let (p, w) = (scene.get(part.as_str())?, scene.get(whole.as_str())?);
    if !(p.is_collection() && w.is_collection()) {
        return None;
    }
    let (pa, wa) = (scene.atoms(part), scene.atoms(whole));
    pa.is_subset(&wa)
        .then(|| Fact::Subcollection { part_members: pa.len(), whole_members: wa.len() })
}

/// `whole` is made of `substance`, or contains something made of it, or
/// is a declared portion or piece of something made of it.
fn constitution(substance: &EntityId, whole: &EntityId, scene: &Scene) -> Option<Fact> {
    let w = scene.get(whole.as_str())?;
    if w.made_of.as_ref() == Some(substance) {
        return Some(Fact::Constitution { substance: substance.clone(), constituted: whole.clone() });
    }
    scene
        .entities()
        .filter(|x| x.id != *whole && x.made_of.as_ref() == Some(substance))
        .find(|x| {
            spatial_inclusion_holds(&x.id, whole, scene).unwrap_or(false)
                || scene.portion_mode(whole, &x.id).is_some()
        })
        .map(|x| Fact::Constitution { substance: substance.clone(), constituted: x.id.clone() })
}

fn shortest_path(from: &EntityId, to: &EntityId, scene: &Scene) -> Option<Vec<(EntityId, Genericity)>> {
    let mut prev: HashMap<&EntityId, (&EntityId, Genericity)> = HashMap::new();
    let mut queue = VecDeque::from([from]);
    let mut seen = BTreeSet::from([from]);
    while let Some(cur) = queue.pop_front() {
        if cur == to {
            let mut out = Vec::new();
            let mut node = cur;
            while let Some(&(p, g)) = prev.get(node) {
                out.push((node.clone(), g));
                node = p;
            }
            out.reverse();
            return Some(out);
        }
        // edges in declaration order keep the chosen path deterministic
        for d in scene.functional_edges().filter(|d| &d.dependent == cur) {
            if seen.insert(&d.dependee) {
                prev.insert(&d.dependee, (cur, d.genericity));
                queue.push_back(&d.dependee);
            }
        }
    }
    None
}

pub fn dependence_path(part: &EntityId, whole: &EntityId, scene: &Scene) -> Result<DependencePath> {
    scene.entity(part)?;
    scene.entity(whole)?;
    let found = shortest_path(part, whole, scene)
        .map(|steps| (Direction::PartDependsOnWhole, part, steps))
        .or_else(|| {
            shortest_path(whole, part, scene).map(|steps| (Direction::WholeDependsOnPart, whole, steps))
        });
    let Some((direction, start, steps)) = found.filter(|(_, _, s)| !s.is_empty()) else {
        return Err(Error::NoDependence(part.clone(), whole.clone()));
    };
    let directness = if steps.len() == 1 { Directness::Direct } else { Directness::Indirect };
    let mut path = vec![start.clone()];
    let mut genericity = Vec::with_capacity(steps.len());
    for (id, g) in steps {
        path.push(id);
        genericity.push(g);
    }
    Ok(DependencePath { direction, directness, path, genericity })
}

pub fn dependence_kind(
    part: &EntityId,
    whole: &EntityId,
    scene: &Scene,
) -> Result<(Direction, Directness)> {
    dependence_path(part, whole, scene).map(|p| (p.direction, p.directness))
}

/// Relation between `a` and `c` given `r1` for `(a, b)` and `r2` for `(b, c)`.
/// `None` means no standard relation follows.
pub fn compose(r1: PartWholeRelation, r2: PartWholeRelation) -> Option<PartWholeRelation> {
    compose_explained(r1, r2).0
}

pub fn compose_explained(
    r1: PartWholeRelation,
    r2: PartWholeRelation,
) -> (Option<PartWholeRelation>, &'static str) {
    use PartWholeRelation::*;
    match (r1, r2) {
        (MemberCollection, SubcollectionCollection) => {
            (Some(MemberCollection), "a member of a subcollection is a member of the collection")
        }
        (SubcollectionCollection, SubcollectionCollection) => {
            (Some(SubcollectionCollection), "subcollection is transitive")
        }
        (PieceWhole, PieceWhole) => (Some(PieceWhole), "a piece of a piece is a piece"),
        (PortionWhole, PortionWhole) => {
            (None, "a portion of a portion is not a conventional portion of the whole")
        }
        (SubstanceWhole, PieceWhole | PortionWhole | ComponentWhole { .. }) => {
            (Some(SubstanceWhole), "the substance of a part is a substance of the whole")
        }
        (
            ComponentWhole { direction: d1, .. },
            ComponentWhole { direction: d2, .. },
        ) if d1 == d2 => (
            Some(PartWholeRelation::component(d1, Directness::Indirect)),
            "dependence in a single direction chains through the intermediate component",
        ),
        (ComponentWhole { .. }, ComponentWhole { .. }) => (
            None,
            "dependence runs in opposite directions, so the outer part is not functionally tied to the whole",
        ),
        _ => (None, "no composition rule relates these relations"),
    }
}

/// How a part was reached by [`transitive_parts_explained`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "by", rename_all = "snake_case")]
pub enum Derivation {
    Direct,
    Composed { via: EntityId, first: PartWholeRelation, second: PartWholeRelation },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InferredPart {
    pub part: EntityId,
    pub relation: PartWholeRelation,
    pub derivation: Derivation,
}

impl fmt::Display for InferredPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.part, self.relation)?;
        if let Derivation::Composed { via, first, second } = &self.derivation {
            write!(f, "  [via {via}: {first} then {second}]")?;
        }
        Ok(())
    }
}

pub fn transitive_parts(
    whole: &EntityId,
    scene: &Scene,
) -> Result<BTreeSet<(EntityId, PartWholeRelation)>> {
    Ok(transitive_parts_explained(whole, scene)?
        .into_iter()
        .map(|p| (p.part, p.relation))
        .collect())
}

/// Least fixed point of direct classification closed under [`compose`].
pub fn transitive_parts_explained(whole: &EntityId, scene: &Scene) -> Result<Vec<InferredPart>> {
    scene.entity(whole)?;
    if let Some(id) = scene.functional_cycle() {
        return Err(Error::CycleDetected(id));
    }
    let mut direct_cache: BTreeMap<EntityId, Vec<(EntityId, PartWholeRelation)>> = BTreeMap::new();
    let mut direct_parts = |of: &EntityId| -> Result<Vec<(EntityId, PartWholeRelation)>> {
        if let Some(v) = direct_cache.get(of) {
            return Ok(v.clone());
        }
        let mut v = Vec::new();
        for e in scene.entities() {
            match classify(&e.id, of, scene) {
                Ok(r) => v.push((e.id.clone(), r)),
                Err(Error::NoRelation { .. } | Error::HomogeneityViolation { .. }) => {}
                Err(err) => return Err(err),
            }
        }
        direct_cache.insert(of.clone(), v.clone());
        Ok(v)
    };

    let mut found: BTreeMap<(EntityId, PartWholeRelation), Derivation> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for (p, r) in direct_parts(whole)? {
        if found.insert((p.clone(), r), Derivation::Direct).is_none() {
            queue.push_back((p, r));
        }
    }
    while let Some((b, r2)) = queue.pop_front() {
        for (a, r1) in direct_parts(&b)? {
            let Some(r) = compose(r1, r2) else { continue };
            if &a == whole {
                continue;
            }
            let key = (a.clone(), r);
            if !found.contains_key(&key) {
                found.insert(key, Derivation::Composed { via: b.clone(), first: r1, second: r2 });
                queue.push_back((a, r));
            }
        }
    }
    Ok(found
        .into_iter()
        .filter(|((p, _), _)| p != whole)
        .map(|((part, relation), derivation)| InferredPart { part, relation, derivation })
        .collect())
}

/// Whether `part` lies inside `whole` at every time both have an extent.
///
/// Collection extents are the union of their members' extents, so
/// membership and subcollection are checked against that union.
pub fn spatial_inclusion_holds(part: &EntityId, whole: &EntityId, scene: &Scene) -> Result<bool> {
    let p = scene.entity(part)?;
    let w = scene.entity(whole)?;
    let missing = |entity: &EntityId, time: Option<&u32>| Error::MissingExtent {
        entity: entity.clone(),
        time: time.copied().unwrap_or(0),
    };
    if p.extent.is_empty() {
        return Err(missing(part, w.extent.keys().next()));
    }
    let mut shared = false;
    for (t, region) in &p.extent {
        if let Some(outer) = w.extent.get(t) {
            shared = true;
            if !part_of(region, outer) {
                return Ok(false);
            }
        }
    }
    if shared {
        Ok(true)
    } else {
        Err(missing(whole, p.extent.keys().next()))
    }
}

/// Step-by-step account of a two-link chain `a / b / c`.
#[derive(Debug, Clone, Serialize)]
pub struct ChainExplanation {
    pub first: Option<Classification>,
    pub second: Option<Classification>,
    pub composed: Option<PartWholeRelation>,
    pub direct: Option<PartWholeRelation>,
    pub reason: String,
}

impl fmt::Display for ChainExplanation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in [&self.first, &self.second].into_iter().flatten() {
            write!(f, "{c}")?;
        }
        match self.composed {
            Some(r) => writeln!(f, "composed: {r}")?,
            None => writeln!(f, "composed: none")?,
        }
        writeln!(f, "reason: {}", self.reason)
    }
}

pub fn explain_chain(a: &EntityId, b: &EntityId, c: &EntityId, scene: &Scene) -> ChainExplanation {
    let first = explain(a, b, scene).ok();
    let second = explain(b, c, scene).ok();
    let direct = classify(a, c, scene).ok();
    let (composed, reason) = match (&first, &second) {
        (Some(x), Some(y)) => compose_explained(x.relation, y.relation),
        (None, _) => (None, "the first link is not a part-whole relation"),
        (_, None) => (None, "the second link is not a part-whole relation"),
    };
    ChainExplanation { first, second, composed, direct, reason: reason.to_owned() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::{Category, DependenceEdge, MaterialSub, View};
    use crate::scene::{EntityRecord, PortionFact};
    use crate::substrate::{Region, Voxel};
    use PartWholeRelation::*;

    fn obj() -> Vec<View> {
        vec![View::new(Category::material(MaterialSub::Object), false, false).unwrap()]
    }

    fn boxed(x0: i32, x1: i32) -> Region {
        Region::cuboid(Voxel::new(x0, 0, 0), Voxel::new(x1, 1, 1))
    }

    fn id(s: &str) -> EntityId {
        EntityId::from(s)
    }

    /// house depends on door, door depends on handle; hand depends on jean.
    fn house() -> Scene {
        Scene::new(
            vec![
                EntityRecord::new("maison", "maison", obj()).with_extent(0, boxed(0, 20)),
                EntityRecord::new("porte", "porte", obj()).with_extent(0, boxed(2, 5)),
                EntityRecord::new("poignee", "poignée", obj()).with_extent(0, boxed(3, 3)),
                EntityRecord::new("jean", "jean", obj()).with_extent(0, boxed(30, 34)),
                EntityRecord::new("main", "main", obj()).with_extent(0, boxed(30, 30)),
            ],
            vec![
                DependenceEdge::functional("maison", "porte", Genericity::Generic),
                DependenceEdge::functional("porte", "poignee", Genericity::Generic),
                DependenceEdge::functional("main", "jean", Genericity::Individual),
            ],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn dependence_kind_examples() {
        let s = house();
        assert_eq!(
            dependence_kind(&id("main"), &id("jean"), &s).unwrap(),
            (Direction::PartDependsOnWhole, Directness::Direct)
        );
        assert_eq!(
            dependence_kind(&id("poignee"), &id("maison"), &s).unwrap(),
            (Direction::WholeDependsOnPart, Directness::Indirect)
        );
        assert_eq!(
            dependence_kind(&id("main"), &id("porte"), &s),
            Err(Error::NoDependence(id("main"), id("porte")))
        );
    }

    /// Brute-force shortest path length over all simple paths.
    fn all_paths_min(from: &str, to: &str, s: &Scene) -> Option<usize> {
        fn go(cur: &str, to: &str, s: &Scene, seen: &mut Vec<String>, best: &mut Option<usize>) {
            if cur == to {
                let len = seen.len() - 1;
                *best = Some(best.map_or(len, |b| b.min(len)));
                return;
            }
            for d in s.functional_edges().filter(|d| d.dependent.as_str() == cur) {
                let next = d.dependee.as_str().to_owned();
                if !seen.contains(&next) {
                    seen.push(next.clone());
                    go(&next, to, s, seen, best);
                    seen.pop();
                }
            }
        }
        let mut best = None;
        go(from, to, s, &mut vec![from.to_owned()], &mut best);
        best.filter(|&b| b > 0)
    }

    #[test]
    fn directness_matches_path_oracle() {
        let s = house();
        for a in s.entities() {
            for b in s.entities() {
                let oracle = all_paths_min(a.id.as_str(), b.id.as_str(), &s)
                    .map(|n| (Direction::PartDependsOnWhole, n))
                    .or_else(|| {
                        all_paths_min(b.id.as_str(), a.id.as_str(), &s)
                            .map(|n| (Direction::WholeDependsOnPart, n))
                    });
                match (dependence_path(&a.id, &b.id, &s), oracle) {
                    (Ok(p), Some((dir, n))) => {
                        assert_eq!(p.direction, dir);
                        assert_eq!(p.path.len() - 1, n);
                        assert_eq!(p.directness == Directness::Direct, n == 1);
                    }
                    (Err(_), None) => {}
                    (got, want) => panic!("{} {}: {got:?} vs {want:?}", a.id, b.id),
                }
            }
        }
    }

    #[test]
    fn component_classification_requires_inclusion() {
        let s = house();
        assert_eq!(
            classify(&id("poignee"), &id("porte"), &s).unwrap(),
            component_rel(Direction::WholeDependsOnPart, Directness::Direct)
        );
        // the house depends on the door but is not inside it
        assert!(matches!(
            classify(&id("maison"), &id("porte"), &s),
            Err(Error::NoRelation { .. })
        ));
        assert!(matches!(classify(&id("maison"), &id("maison"), &s), Err(Error::NoRelation { .. })));
        assert!(matches!(classify(&id("nope"), &id("maison"), &s), Err(Error::UnknownEntity(_))));
    }

    fn component_rel(d: Direction, n: Directness) -> PartWholeRelation {
        PartWholeRelation::component(d, n)
    }

    #[test]
    fn composition_table() {
        let wdp = |n| component_rel(Direction::WholeDependsOnPart, n);
        let pdw = |n| component_rel(Direction::PartDependsOnWhole, n);
        assert_eq!(compose(MemberCollection, SubcollectionCollection), Some(MemberCollection));
        assert_eq!(compose(SubcollectionCollection, SubcollectionCollection), Some(SubcollectionCollection));
        assert_eq!(compose(PieceWhole, PieceWhole), Some(PieceWhole));
        assert_eq!(compose(PortionWhole, PortionWhole), None);
        assert_eq!(compose(PortionWhole, MemberCollection), None);
        for r2 in [PieceWhole, PortionWhole, wdp(Directness::Direct), pdw(Directness::Indirect)] {
            assert_eq!(compose(SubstanceWhole, r2), Some(SubstanceWhole));
        }
        assert_eq!(
            compose(wdp(Directness::Direct), wdp(Directness::Direct)),
            Some(wdp(Directness::Indirect))
        );
        assert_eq!(compose(pdw(Directness::Indirect), pdw(Directness::Direct)), Some(pdw(Directness::Indirect)));
        assert_eq!(compose(wdp(Directness::Direct), pdw(Directness::Direct)), None);
        // every defined component composition is indirect
        for r1 in PartWholeRelation::all() {
            for r2 in PartWholeRelation::all() {
                if let Some(ComponentWhole { directness, .. }) = compose(r1, r2) {
                    assert_eq!(directness, Directness::Indirect);
                }
            }
        }
    }

    #[test]
    fn membership_composes_through_subcollections() {
        // set-membership oracle: a sheep is a member of every collection whose
        // flattened members include it
        let s = Scene::new(
            vec![
                EntityRecord::new("b1", "brebis", obj()).with_extent(0, boxed(0, 0)),
                EntityRecord::new("b2", "brebis", obj()).with_extent(0, boxed(2, 2)),
                EntityRecord::new("b3", "brebis", obj()).with_extent(0, boxed(9, 9)),
                EntityRecord::new("t1", "troupeau", obj()).collection(["b1", "b2"]),
                EntityRecord::new("t2", "troupeau", obj()).collection(["b3"]),
                EntityRecord::new("ferme", "cheptel", obj()).collection(["t1", "t2"]),
            ],
            vec![],
            vec![],
        )
        .unwrap();
        assert_eq!(classify(&id("b1"), &id("t1"), &s).unwrap(), MemberCollection);
        assert_eq!(classify(&id("t1"), &id("ferme"), &s).unwrap(), SubcollectionCollection);
        let parts = transitive_parts(&id("ferme"), &s).unwrap();
        for sheep in ["b1", "b2", "b3"] {
            let oracle = s.atoms(&id("ferme")).contains(&id(sheep));
            assert_eq!(parts.contains(&(id(sheep), MemberCollection)), oracle);
        }
        assert!(parts.contains(&(id("t2"), SubcollectionCollection)));
    }

    #[test]
    fn transitive_parts_of_component_chain() {
        let s = house();
        let parts = transitive_parts(&id("maison"), &s).unwrap();
        let expected: BTreeSet<_> = [
            (id("porte"), component_rel(Direction::WholeDependsOnPart, Directness::Direct)),
            (id("poignee"), component_rel(Direction::WholeDependsOnPart, Directness::Indirect)),
        ]
        .into();
        assert_eq!(parts, expected);
    }

    #[test]
    fn empty_kb_has_no_parts() {
        let s = Scene::new(
            vec![EntityRecord::new("solo", "x", obj()).with_extent(0, boxed(0, 0))],
            vec![],
            vec![],
        )
        .unwrap();
        assert!(transitive_parts(&id("solo"), &s).unwrap().is_empty());
    }

    #[test]
    fn portion_piece_and_substance() {
        let flour = View::new(Category::other(TopCategory::Substance), false, false).unwrap();
        let s = Scene::new(
            vec![
                EntityRecord::new("gateau", "gâteau", obj()).with_extent(0, boxed(0, 9)).made_of("farine"),
                EntityRecord::new("part", "part", obj()).with_extent(0, boxed(0, 2)),
                EntityRecord::new("miette", "morceau", obj()).with_extent(0, boxed(0, 0)),
                EntityRecord::new("farine", "farine", vec![flour]),
            ],
            vec![],
            vec![
                PortionFact::new("part", "gateau", PortionMode::ConventionalPortion),
                PortionFact::new("miette", "part", PortionMode::ArbitraryPiece),
            ],
        )
        .unwrap();
        assert_eq!(classify(&id("part"), &id("gateau"), &s).unwrap(), PortionWhole);
        assert_eq!(classify(&id("farine"), &id("gateau"), &s).unwrap(), SubstanceWhole);
        assert_eq!(classify(&id("miette"), &id("part"), &s).unwrap(), PieceWhole);
        // a declared portion shares the substance of its whole
        assert!(matches!(classify(&id("farine"), &id("part"), &s), Ok(SubstanceWhole)));
        let c = explain(&id("farine"), &id("gateau"), &s).unwrap();
        assert!(c.facts.contains(&Fact::SpatialInclusion { verified: false }));
    }

    #[test]
    fn cycle_is_reported_by_closure() {
        let mut s = house();
        s = {
            // bypass validation to exercise the closure's own guard
            let mut raw = s.clone();
            raw.push_edge_unchecked(DependenceEdge::functional("poignee", "maison", Genericity::Generic));
            raw
        };
        assert!(matches!(transitive_parts(&id("maison"), &s), Err(Error::CycleDetected(_))));
    }

    #[test]
    fn mixed_direction_chain_does_not_compose() {
        let s = Scene::new(
            vec![
                EntityRecord::new("maison", "maison", obj()).with_extent(0, boxed(0, 20)),
                EntityRecord::new("porte", "porte", obj()).with_extent(0, boxed(2, 5)),
                EntityRecord::new("poignee", "poignée", obj()).with_extent(0, boxed(3, 3)),
            ],
            vec![
                DependenceEdge::functional("maison", "porte", Genericity::Generic),
                DependenceEdge::functional("poignee", "porte", Genericity::Individual),
            ],
            vec![],
        )
        .unwrap();
        let chain = explain_chain(&id("poignee"), &id("porte"), &id("maison"), &s);
        assert_eq!(chain.composed, None);
        assert_eq!(chain.direct, None);
        assert!(chain.reason.contains("opposite"));
        let parts = transitive_parts(&id("maison"), &s).unwrap();
        assert!(!parts.iter().any(|(p, _)| p == &id("poignee")));
    }
}
