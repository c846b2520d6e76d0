//! Entity layer: categories, the `(fix, esp, spc)` feature system,
//! frames of reference, dependence edges and frontal orientation.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scene::{EntityId, EntityRecord, Scene};
use crate::substrate::{dilate, Axis, Period, Region, Voxel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TopCategory {
    Material,
    Eventuality,
    Substance,
    SpacePortion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaterialSub {
    Object,
    MatterPortion,
    Place,
    /// Buildings: a place-like view and an object-like view on one referent.
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RouteSub {
    Conduit,
    Path,
}

/// Ontological category of a view.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Category {
    top: TopCategory,
    material_sub: Option<MaterialSub>,
    route_sub: Option<RouteSub>,
}

impl Category {
    pub fn new(
        top: TopCategory,
        material_sub: Option<MaterialSub>,
        route_sub: Option<RouteSub>,
    ) -> Result<Self, String> {
        match (top, material_sub) {
            (TopCategory::Material, None) => {
                return Err("material views need a material sub-category".into())
            }
            (TopCategory::Material, Some(_)) => {}
            (_, Some(_)) => return Err("only material views carry a sub-category".into()),
            (_, None) => {}
        }
        match (route_sub, material_sub) {
            (None, _) => {}
            (Some(RouteSub::Conduit), Some(MaterialSub::Object)) => {}
            (Some(RouteSub::Path), Some(MaterialSub::Place)) => {}
            (Some(RouteSub::Conduit), _) => return Err("conduits must be objects".into()),
            (Some(RouteSub::Path), _) => return Err("paths must be places".into()),
        }
        Ok(Category { top, material_sub, route_sub })
    }

    pub fn material(sub: MaterialSub) -> Self {
        Category { top: TopCategory::Material, material_sub: Some(sub), route_sub: None }
    }

    pub fn other(top: TopCategory) -> Self {
        assert!(top != TopCategory::Material, "material categories need a sub-category");
        Category { top, material_sub: None, route_sub: None }
    }

    pub fn with_route(self, route: RouteSub) -> Result<Self, String> {
        Category::new(self.top, self.material_sub, Some(route))
    }

    pub fn top(&self) -> TopCategory {
        self.top
    }

    pub fn material_sub(&self) -> Option<MaterialSub> {
        self.material_sub
    }

    pub fn route_sub(&self) -> Option<RouteSub> {
        self.route_sub
    }

    pub fn is(&self, sub: MaterialSub) -> bool {
        self.material_sub == Some(sub)
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.top)?;
        if let Some(sub) = self.material_sub {
            write!(f, "/{sub:?}")?;
        }
        if let Some(route) = self.route_sub {
            write!(f, "+{route:?}")?;
        }
        Ok(())
    }
}

/// One way the language may conceptualize a referent.
///
/// Specification (`spc`) is not stored: it comes from the determiner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct View {
    pub category: Category,
    pub fix: bool,
    pub esp: bool,
}

impl View {
    pub fn new(category: Category, fix: bool, esp: bool) -> Result<Self, String> {
        match category.material_sub() {
            Some(MaterialSub::Place) if !(fix && esp) => {
                Err("place views must be +fix and +esp".into())
            }
            Some(MaterialSub::Mixed) if !(fix && esp) => {
                Err("mixed-entity place views must be +fix and +esp".into())
            }
            Some(MaterialSub::Object) if fix && esp => {
                Err("object views cannot be both +fix and +esp".into())
            }
            _ => Ok(View { category, fix, esp }),
        }
    }

    /// Place or the place aspect of a mixed entity.
    pub fn is_place_like(&self) -> bool {
        self.category.is(MaterialSub::Place) || self.category.is(MaterialSub::Mixed)
    }
}

impl fmt::Display for View {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = |b: bool| if b { '+' } else { '-' };
        write!(f, "{} ({}fix,{}esp)", self.category, sign(self.fix), sign(self.esp))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FeatureSet {
    pub fix: bool,
    pub esp: bool,
    pub spc: bool,
}

impl FeatureSet {
    pub fn is_specified_place(&self) -> bool {
        self.fix && self.esp && self.spc
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Definiteness {
    Proper,
    Definite,
    Indefinite,
}

impl Definiteness {
    pub const ALL: [Definiteness; 3] =
        [Definiteness::Proper, Definiteness::Definite, Definiteness::Indefinite];
}

/// Phrase-level features: `fix`/`esp` from the view, `spc` from the determiner.
pub fn effective_features(view: &View, definiteness: Definiteness) -> FeatureSet {
    FeatureSet {
        fix: view.fix,
        esp: view.esp,
        spc: matches!(definiteness, Definiteness::Proper | Definiteness::Definite),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Plurality {
    #[default]
    Singular,
    Plural,
    Collection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Genericity {
    Generic,
    #[default]
    Individual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DependenceKind {
    #[default]
    Functional,
    Constitution,
    Participation,
    Quantity,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DependenceEdge {
    pub dependent: EntityId,
    pub dependee: EntityId,
    pub genericity: Genericity,
    pub kind: DependenceKind,
}

impl DependenceEdge {
    pub fn functional(dependent: &str, dependee: &str, genericity: Genericity) -> Self {
        DependenceEdge {
            dependent: dependent.into(),
            dependee: dependee.into(),
            genericity,
            kind: DependenceKind::Functional,
        }
    }
}

/// Signed axis, written `+x`, `-z`, ...
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct AxisDirection {
    pub axis: Axis,
    pub positive: bool,
}

impl AxisDirection {
    pub fn new(axis: Axis, positive: bool) -> Self {
        AxisDirection { axis, positive }
    }

    pub fn reversed(self) -> Self {
        AxisDirection { positive: !self.positive, ..self }
    }
}

impl fmt::Display for AxisDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.positive { '+' } else { '-' }, self.axis)
    }
}

impl TryFrom<String> for AxisDirection {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        let (positive, rest) = match s.as_bytes().first() {
            Some(b'+') => (true, &s[1..]),
            Some(b'-') => (false, &s[1..]),
            _ => return Err(format!("axis direction `{s}` must start with + or -")),
        };
        let axis = match rest {
            "x" => Axis::X,
            "y" => Axis::Y,
            "z" => Axis::Z,
            _ => return Err(format!("unknown axis in `{s}`")),
        };
        Ok(AxisDirection { axis, positive })
    }
}

impl From<AxisDirection> for String {
    fn from(d: AxisDirection) -> String {
        d.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrientationAttrs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub motion_front: Option<AxisDirection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function_front: Option<AxisDirection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elongation_axis: Option<Axis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aerodynamic_front: Option<AxisDirection>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrientationFactor {
    Motion,
    Function,
    Elongation,
    Aerodynamics,
}

impl OrientationFactor {
    /// Motion and function are properties of the entity itself; salience
    /// and aerodynamics depend on context.
    pub fn is_intrinsic(self) -> bool {
        matches!(self, OrientationFactor::Motion | OrientationFactor::Function)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FrontalOrientation {
    pub front: AxisDirection,
    pub factor: OrientationFactor,
    pub intrinsic: bool,
}

pub fn frontal_orientation(attrs: &OrientationAttrs) -> Option<FrontalOrientation> {
    let pick = |front, factor: OrientationFactor| FrontalOrientation {
        front,
        factor,
        intrinsic: factor.is_intrinsic(),
    };
    if let Some(front) = attrs.motion_front {
        return Some(pick(front, OrientationFactor::Motion));
    }
    if let Some(front) = attrs.function_front {
        return Some(pick(front, OrientationFactor::Function));
    }
    if let Some(axis) = attrs.elongation_axis {
        // aerodynamics only picks which end of the long axis is the front
        let positive = match attrs.aerodynamic_front {
            Some(d) if d.axis == axis => d.positive,
            _ => true,
        };
        return Some(pick(AxisDirection::new(axis, positive), OrientationFactor::Elongation));
    }
    attrs.aerodynamic_front.map(|front| pick(front, OrientationFactor::Aerodynamics))
}

pub fn assign_frontal_orientation(e: &EntityRecord) -> Option<FrontalOrientation> {
    frontal_orientation(&e.orientation)
}

/// Tunable geometry for space portions and internal-localization zones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometryParams {
    /// Height of the column above a geographic place.
    pub column_height: u32,
    /// Dilation radius for object-bound space portions.
    pub portion_radius: u32,
    /// Divisor for top/bottom/corner/directional zones.
    pub third_divisor: u32,
    /// Divisor for end zones along the major axis.
    pub end_divisor: u32,
    pub shell_depth: u32,
    /// z coordinate of the ground plane.
    pub ground_z: i32,
}

impl Default for GeometryParams {
    fn default() -> Self {
        GeometryParams {
            column_height: 5,
            portion_radius: 2,
            third_divisor: 3,
            end_divisor: 4,
            shell_depth: 1,
            ground_z: 0,
        }
    }
}

fn refpoint(scene: &Scene, id: &EntityId, t: u32) -> Result<Voxel> {
    Ok(scene.extent_at(id, t)?.min_voxel())
}

/// Whether `e` keeps its position relative to `anchor` over `period`.
pub fn is_fixed(e: &EntityId, anchor: &EntityId, period: Period, scene: &Scene) -> Result<bool> {
    let t0 = period.start();
    let base = scene.extent_at(e, t0)?;
    let anchor0 = refpoint(scene, anchor, t0)?;
    let mut fixed = true;
    for t in period.steps() {
        let ext = scene.extent_at(e, t)?;
        let a = refpoint(scene, anchor, t)?;
        if fixed {
            let moved = ext.translate(anchor0.x - a.x, anchor0.y - a.y, anchor0.z - a.z);
            fixed = &moved == base;
        }
    }
    Ok(fixed)
}

/// Space portion determined by `e` at time `t`, taking its first `+esp`
/// view. Disjoint from every material extent in the scene.
pub fn space_portion_of(
    e: &EntityId,
    scene: &Scene,
    t: u32,
    params: &GeometryParams,
) -> Result<Option<Region>> {
    space_portion_ignoring(e, scene, t, params, &[])
}

/// As [`space_portion_of`], but the extents of `ignored` entities are not
/// carved out. Used to ask whether a located target lies in the portion.
pub fn space_portion_ignoring(
    e: &EntityId,
    scene: &Scene,
    t: u32,
    params: &GeometryParams,
    ignored: &[&EntityId],
) -> Result<Option<Region>> {
    let record = scene.entity(e)?;
    let extent = scene.extent_at(e, t)?;
    let Some(view) = record.views.iter().find(|v| v.esp) else {
        return Ok(None);
    };
    let touches_ground = extent.iter().any(|v| v.z == params.ground_z);
    let candidate = if view.category.is(MaterialSub::Place) && touches_ground {
        ground_column(extent, params.column_height)
    } else {
        dilate(extent, params.portion_radius)
    };
    let material = scene.material_extents_at(t, ignored);
    Ok(match material {
        Some(m) => candidate.difference(&m),
        None => Some(candidate),
    })
}

fn ground_column(extent: &Region, height: u32) -> Region {
    let mut tops = std::collections::BTreeMap::new();
    for v in extent.iter() {
        let top = tops.entry((v.x, v.y)).or_insert(v.z);
        *top = (*top).max(v.z);
    }
    let height = height as i32;
    let cells = tops
        .into_iter()
        .flat_map(|((x, y), top)| (1..=height).map(move |dz| Voxel::new(x, y, top + dz)));
    Region::new(cells).unwrap_or_else(|_| extent.clone())
}

/// Anchor-relative frame of reference: entities fixed with respect to the
/// anchor over a period, each determining a space portion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Frame {
    pub anchor: EntityId,
    pub period: Period,
    pub places: BTreeSet<EntityId>,
}

impl Frame {
    pub fn contains(&self, id: &EntityId) -> bool {
        self.places.contains(id)
    }
}

pub fn build_frame(
    anchor: &EntityId,
    period: Period,
    scene: &Scene,
    params: &GeometryParams,
) -> Result<Frame> {
    for t in period.steps() {
        scene.extent_at(anchor, t)?;
    }
    let mut places = BTreeSet::from([anchor.clone()]);
    for id in scene.entities().map(|e| &e.id) {
        if id == anchor {
            continue;
        }
        // entities without extents over the whole period cannot be fixed
        match is_fixed(id, anchor, period, scene) {
            Ok(true) => {}
            Ok(false) | Err(Error::MissingExtent { .. }) => continue,
            Err(e) => return Err(e),
        }
        if space_portion_of(id, scene, period.start(), params)?.is_some() {
            places.insert(id.clone());
        }
    }
    Ok(Frame { anchor: anchor.clone(), period, places })
}
