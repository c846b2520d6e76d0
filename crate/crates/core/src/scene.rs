//! Scene and knowledge base: entity records with extents over time,
//! dependence edges and declared portion facts.
//!
//! The file format is a JSON array of entity objects. Views are not stored
//! in the scene; they are resolved from the lexicon through each entity's
//! lemma at load time.

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::ontology::{
    DependenceEdge, DependenceKind, Genericity, OrientationAttrs, Plurality, TopCategory, View,
};
use crate::substrate::{union_all, Region};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EntityId(String);

impl EntityId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for EntityId {
    fn from(s: &str) -> Self {
        EntityId(s.to_owned())
    }
}

impl From<String> for EntityId {
    fn from(s: String) -> Self {
        EntityId(s)
    }
}

impl Borrow<str> for EntityId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntityRecord {
    pub id: EntityId,
    pub lemma: String,
    pub views: Vec<View>,
    pub plurality: Plurality,
    pub extent: BTreeMap<u32, Region>,
    pub members: Option<BTreeSet<EntityId>>,
    pub made_of: Option<EntityId>,
    pub orientation: OrientationAttrs,
}

impl EntityRecord {
    pub fn new(id: &str, lemma: &str, views: Vec<View>) -> Self {
        EntityRecord {
            id: id.into(),
            lemma: lemma.to_owned(),
            views,
            plurality: Plurality::Singular,
            extent: BTreeMap::new(),
            members: None,
            made_of: None,
            orientation: OrientationAttrs::default(),
        }
    }

    pub fn with_extent(mut self, t: u32, region: Region) -> Self {
        self.extent.insert(t, region);
        self
    }

    pub fn collection<I: IntoIterator<Item = S>, S: Into<EntityId>>(mut self, members: I) -> Self {
        self.plurality = Plurality::Collection;
        self.members = Some(members.into_iter().map(Into::into).collect());
        self
    }

    pub fn plural(mut self) -> Self {
        self.plurality = Plurality::Plural;
        self
    }

    pub fn made_of(mut self, substance: &str) -> Self {
        self.made_of = Some(substance.into());
        self
    }

    pub fn oriented(mut self, orientation: OrientationAttrs) -> Self {
        self.orientation = orientation;
        self
    }

    /// Top category of the primary (first) view.
    pub fn top(&self) -> TopCategory {
        self.views[0].category.top()
    }

    pub fn is_collection(&self) -> bool {
        self.plurality == Plurality::Collection
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PortionMode {
    /// A conventional, measured portion (« une part de gâteau »).
    ConventionalPortion,
    /// An arbitrary piece (« un morceau de la tasse »).
    ArbitraryPiece,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PortionFact {
    pub part: EntityId,
    pub whole: EntityId,
    pub mode: PortionMode,
}

impl PortionFact {
    pub fn new(part: &str, whole: &str, mode: PortionMode) -> Self {
        PortionFact { part: part.into(), whole: whole.into(), mode }
    }
}

/// Validated, immutable scene.
pub const STARTER_SCENE: &str = include_str!("../../../data/scene.json");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scene {
    entities: BTreeMap<EntityId, EntityRecord>,
    dependence: Vec<DependenceEdge>,
    portions: Vec<PortionFact>,
    times: BTreeSet<u32>,
}

impl Scene {
    /// Validate records and facts. Collection extents are derived from
    /// their members and may not be declared.
    pub fn new(
        records: Vec<EntityRecord>,
        dependence: Vec<DependenceEdge>,
        portions: Vec<PortionFact>,
    ) -> Result<Self> {
        let mut entities = BTreeMap::new();
        for r in records {
            if r.views.is_empty() {
                return Err(Error::InvalidScene(format!("entity `{}` has no views", r.id)));
            }
            let id = r.id.clone();
            if entities.insert(id.clone(), r).is_some() {
                return Err(Error::InvalidScene(format!("duplicate entity id `{id}`")));
            }
        }
        let mut scene = Scene { entities, dependence, portions, times: BTreeSet::new() };
        scene.validate_records()?;
        scene.derive_collection_extents()?;
        scene.validate_facts()?;
        scene.check_functional_acyclic()?;
        scene.times = scene.entities.values().flat_map(|e| e.extent.keys().copied()).collect();
        for e in scene.entities.values() {
            if e.top() == TopCategory::Material && e.extent.is_empty() {
                return Err(Error::InvalidScene(format!(
                    "material entity `{}` has no extent",
                    e.id
                )));
            }
        }
        Ok(scene)
    }

    fn invalid<T>(msg: String) -> Result<T> {
        Err(Error::InvalidScene(msg))
    }

    fn validate_records(&self) -> Result<()> {
        for e in self.entities.values() {
            match (&e.members, e.plurality) {
                (Some(_), Plurality::Collection) | (None, Plurality::Singular | Plurality::Plural) => {}
                (None, Plurality::Collection) => {
                    return Self::invalid(format!("collection `{}` lists no members", e.id))
                }
                (Some(_), _) => {
                    return Self::invalid(format!("`{}` has members but is not a collection", e.id))
                }
            }
            if let Some(members) = &e.members {
                if members.is_empty() {
                    return Self::invalid(format!("collection `{}` is empty", e.id));
                }
                for m in members {
                    if m == &e.id {
                        return Self::invalid(format!("collection `{}` contains itself", e.id));
                    }
                    if !self.entities.contains_key(m) {
                        return Self::invalid(format!("`{}` lists unknown member `{m}`", e.id));
                    }
                }
                if !e.extent.is_empty() {
                    return Self::invalid(format!(
                        "collection `{}` declares an extent; collection extents are derived",
                        e.id
                    ));
                }
            }
            if let Some(s) = &e.made_of {
                match self.entities.get(s) {
                    None => return Self::invalid(format!("`{}` is made of unknown `{s}`", e.id)),
                    Some(sub) if sub.top() != TopCategory::Substance => {
                        return Self::invalid(format!("`{}` is made of non-substance `{s}`", e.id))
                    }
                    Some(_) => {}
                }
            }
        }
        Ok(())
    }

    fn derive_collection_extents(&mut self) -> Result<()> {
        // topological order over the membership graph
        let mut order = Vec::new();
        let mut state: BTreeMap<EntityId, bool> = BTreeMap::new();
        fn visit(
            id: &EntityId,
            entities: &BTreeMap<EntityId, EntityRecord>,
            state: &mut BTreeMap<EntityId, bool>,
            order: &mut Vec<EntityId>,
        ) -> Result<()> {
            match state.get(id) {
                Some(true) => return Ok(()),
                Some(false) => {
                    return Err(Error::InvalidScene(format!("membership cycle through `{id}`")))
                }
                None => {}
            }
            state.insert(id.clone(), false);
            if let Some(members) = &entities[id].members {
                for m in members {
                    visit(m, entities, state, order)?;
                }
            }
            state.insert(id.clone(), true);
            order.push(id.clone());
            Ok(())
        }
        let ids: Vec<EntityId> = self.entities.keys().cloned().collect();
        for id in &ids {
            visit(id, &self.entities, &mut state, &mut order)?;
        }
        for id in order {
            let Some(members) = self.entities[&id].members.clone() else { continue };
            let times: BTreeSet<u32> = members
                .iter()
                .flat_map(|m| self.entities[m].extent.keys().copied())
                .collect();
            let mut extent = BTreeMap::new();
            for t in times {
                let regions = members.iter().filter_map(|m| self.entities[m].extent.get(&t));
                if let Some(r) = union_all(regions) {
                    extent.insert(t, r);
                }
            }
            self.entities.get_mut(&id).expect("known id").extent = extent;
        }
        Ok(())
    }

    fn validate_facts(&self) -> Result<()> {
        for d in &self.dependence {
            for end in [&d.dependent, &d.dependee] {
                if !self.entities.contains_key(end) {
                    return Self::invalid(format!("dependence on unknown entity `{end}`"));
                }
            }
            if d.dependent == d.dependee {
                return Self::invalid(format!("`{}` depends on itself", d.dependent));
            }
        }
        for p in &self.portions {
            for end in [&p.part, &p.whole] {
                match self.entities.get(end) {
                    None => return Self::invalid(format!("portion fact on unknown `{end}`")),
                    Some(e) if e.top() != TopCategory::Material => {
                        return Self::invalid(format!("portion fact on non-material `{end}`"))
                    }
                    Some(_) => {}
                }
            }
            if p.part == p.whole {
                return Self::invalid(format!("`{}` is declared a portion of itself", p.part));
            }
        }
        Ok(())
    }

    fn check_functional_acyclic(&self) -> Result<()> {
        match self.functional_cycle() {
            Some(id) => Err(Error::CycleDetected(id)),
            None => Ok(()),
        }
    }

    /// Some entity on a cycle of functional dependence, if one exists.
    pub(crate) fn functional_cycle(&self) -> Option<EntityId> {
        // Kahn's algorithm; whatever is left over lies on or behind a cycle
        let mut indegree: BTreeMap<&EntityId, usize> =
            self.entities.keys().map(|k| (k, 0)).collect();
        for d in self.functional_edges() {
            *indegree.get_mut(&d.dependee).expect("validated endpoint") += 1;
        }
        let mut queue: VecDeque<&EntityId> =
            indegree.iter().filter(|(_, &n)| n == 0).map(|(k, _)| *k).collect();
        let mut removed = 0;
        while let Some(id) = queue.pop_front() {
            removed += 1;
            for d in self.functional_edges().filter(|d| &d.dependent == id) {
                let n = indegree.get_mut(&d.dependee).expect("validated endpoint");
                *n -= 1;
                if *n == 0 {
                    queue.push_back(&d.dependee);
                }
            }
        }
        if removed == indegree.len() {
            None
        } else {
            indegree.into_iter().find(|(_, n)| *n > 0).map(|(k, _)| k.clone())
        }
    }

    #[cfg(test)]
    pub(crate) fn push_edge_unchecked(&mut self, edge: DependenceEdge) {
        self.dependence.push(edge);
    }

    pub fn entity(&self, id: &EntityId) -> Result<&EntityRecord> {
        self.entities.get(id).ok_or_else(|| Error::UnknownEntity(id.clone()))
    }

    pub fn get(&self, id: &str) -> Option<&EntityRecord> {
        self.entities.get(id)
    }

    /// Entities in id order.
    pub fn entities(&self) -> impl Iterator<Item = &EntityRecord> + '_ {
        self.entities.values()
    }

    pub fn len(&self) -> usize {
        self.entities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }

    pub fn with_lemma<'a>(&'a self, lemma: &'a str) -> impl Iterator<Item = &'a EntityRecord> + 'a {
        self.entities.values().filter(move |e| e.lemma == lemma)
    }

    pub fn dependence(&self) -> &[DependenceEdge] {
        &self.dependence
    }

    pub fn functional_edges(&self) -> impl Iterator<Item = &DependenceEdge> + '_ {
        self.dependence.iter().filter(|d| d.kind == DependenceKind::Functional)
    }

    pub fn portions(&self) -> &[PortionFact] {
        &self.portions
    }

    pub fn portion_mode(&self, part: &EntityId, whole: &EntityId) -> Option<PortionMode> {
        self.portions.iter().find(|p| &p.part == part && &p.whole == whole).map(|p| p.mode)
    }

    pub fn times(&self) -> &BTreeSet<u32> {
        &self.times
    }

    pub fn extent_at(&self, id: &EntityId, t: u32) -> Result<&Region> {
        self.entity(id)?
            .extent
            .get(&t)
            .ok_or_else(|| Error::MissingExtent { entity: id.clone(), time: t })
    }

    /// Union of every material extent at `t`, skipping collections (whose
    /// extent is derived from their members) and the `ignored` entities.
    pub fn material_extents_at(&self, t: u32, ignored: &[&EntityId]) -> Option<Region> {
        let regions: Vec<&Region> = self
            .entities
            .values()
            .filter(|e| e.top() == TopCategory::Material && !e.is_collection())
            .filter(|e| !ignored.contains(&&e.id))
            .filter_map(|e| e.extent.get(&t))
            .collect();
        union_all(regions)
    }

    /// Members of a collection, flattened through nested collections.
    pub fn atoms(&self, id: &EntityId) -> BTreeSet<EntityId> {
        let mut out = BTreeSet::new();
        let mut stack = vec![id.clone()];
        while let Some(cur) = stack.pop() {
            match self.entities.get(&cur).and_then(|e| e.members.as_ref()) {
                Some(members) => stack.extend(members.iter().cloned()),
                None if &cur != id => {
                    out.insert(cur);
                }
                None => {}
            }
        }
        out
    }

    /// Same scene shifted rigidly in space.
    pub fn translated(&self, dx: i32, dy: i32, dz: i32) -> Scene {
        let mut out = self.clone();
        for e in out.entities.values_mut() {
            for r in e.extent.values_mut() {
                *r = r.translate(dx, dy, dz);
            }
        }
        out
    }

    /// The bundled fixture scene, resolved against `lexicon`.
    pub fn starter(lexicon: &Lexicon) -> Result<Self> {
        Scene::from_json(STARTER_SCENE, lexicon)
    }

    pub fn from_json(text: &str, lexicon: &Lexicon) -> Result<Self> {
        let raw: Vec<RawEntity> = serde_json::from_str(text).map_err(|e| Error::SceneParse {
            line: e.line(),
            message: e.to_string(),
        })?;
        let mut records = Vec::with_capacity(raw.len());
        let mut dependence = Vec::new();
        let mut portions = Vec::new();
        for r in raw {
            let entry = lexicon.get(&r.lemma).ok_or_else(|| {
                Error::InvalidScene(format!("entity `{}` has unknown lemma `{}`", r.id, r.lemma))
            })?;
            let id = EntityId::from(r.id);
            for d in r.dependence {
                dependence.push(DependenceEdge {
                    dependent: id.clone(),
                    dependee: d.on.into(),
                    genericity: d.genericity,
                    kind: d.kind,
                });
            }
            for p in r.portions {
                portions.push(PortionFact { part: id.clone(), whole: p.whole.into(), mode: p.mode });
            }
            records.push(EntityRecord {
                id,
                lemma: r.lemma,
                views: entry.views.clone(),
                plurality: r.plurality,
                extent: r.extent,
                members: r.members.map(|m| m.into_iter().map(EntityId::from).collect()),
                made_of: r.made_of.map(EntityId::from),
                orientation: r.orientation,
            });
        }
        Scene::new(records, dependence, portions)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntity {
    id: String,
    lemma: String,
    #[serde(default)]
    plurality: Plurality,
    #[serde(default)]
    members: Option<Vec<String>>,
    #[serde(default)]
    made_of: Option<String>,
    #[serde(default)]
    extent: BTreeMap<u32, Region>,
    #[serde(default)]
    orientation: OrientationAttrs,
    #[serde(default)]
    dependence: Vec<RawDependence>,
    #[serde(default)]
    portions: Vec<RawPortion>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDependence {
    on: String,
    #[serde(default)]
    genericity: Genericity,
    #[serde(default)]
    kind: DependenceKind,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPortion {
    whole: String,
    mode: PortionMode,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::{Category, MaterialSub};
    use crate::substrate::Voxel;

    fn obj() -> Vec<View> {
        vec![View::new(Category::material(MaterialSub::Object), false, false).unwrap()]
    }

    fn at(x: i32) -> Region {
        Region::singleton(Voxel::new(x, 0, 0))
    }

    #[test]
    fn collection_extent_is_union_of_members() {
        let scene = Scene::new(
            vec![
                EntityRecord::new("a", "brebis", obj()).with_extent(0, at(0)),
                EntityRecord::new("b", "brebis", obj()).with_extent(0, at(3)),
                EntityRecord::new("f", "troupeau", obj()).collection(["a", "b"]),
                EntityRecord::new("farm", "ferme", obj()).collection(["f"]),
            ],
            vec![],
            vec![],
        )
        .unwrap();
        assert_eq!(scene.extent_at(&"f".into(), 0).unwrap(), &at(0).union(&at(3)));
        assert_eq!(scene.extent_at(&"farm".into(), 0).unwrap().len(), 2);
        assert_eq!(scene.atoms(&"farm".into()), ["a", "b"].map(EntityId::from).into());
    }

    #[test]
    fn rejects_inconsistent_records() {
        let bad = |records: Vec<EntityRecord>| Scene::new(records, vec![], vec![]).unwrap_err();
        assert!(matches!(
            bad(vec![EntityRecord::new("a", "x", obj())]),
            Error::InvalidScene(_)
        ));
        assert!(matches!(
            bad(vec![
                EntityRecord::new("a", "x", obj()).with_extent(0, at(0)),
                EntityRecord::new("a", "x", obj()).with_extent(0, at(0)),
            ]),
            Error::InvalidScene(_)
        ));
        let mut c = EntityRecord::new("c", "x", obj()).collection(["a"]);
        c.extent.insert(0, at(1));
        assert!(matches!(
            bad(vec![EntityRecord::new("a", "x", obj()).with_extent(0, at(0)), c]),
            Error::InvalidScene(_)
        ));
        assert!(matches!(
            bad(vec![EntityRecord::new("c", "x", obj()).collection(["c"])]),
            Error::InvalidScene(_)
        ));
    }

    #[test]
    fn functional_cycles_are_rejected() {
        let records = vec![
            EntityRecord::new("a", "x", obj()).with_extent(0, at(0)),
            EntityRecord::new("b", "x", obj()).with_extent(0, at(1)),
            EntityRecord::new("c", "x", obj()).with_extent(0, at(2)),
        ];
        let edges = vec![
            DependenceEdge::functional("a", "b", Genericity::Individual),
            DependenceEdge::functional("b", "c", Genericity::Individual),
            DependenceEdge::functional("c", "a", Genericity::Generic),
        ];
        assert!(matches!(
            Scene::new(records.clone(), edges.clone(), vec![]),
            Err(Error::CycleDetected(_))
        ));
        // the same cycle through a non-functional edge is allowed
        let mut relaxed = edges;
        relaxed[2].kind = DependenceKind::Participation;
        assert!(Scene::new(records, relaxed, vec![]).is_ok());
    }
}
