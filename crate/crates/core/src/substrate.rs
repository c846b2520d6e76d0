//! Discrete spatio-temporal substrate.
//!
//! Regions are finite, non-empty sets of grid voxels. Parthood is set
//! inclusion and contact is face adjacency (6-neighbourhood), which keeps
//! every mereotopological predicate decidable by enumeration.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A grid cell. Ordering is lexicographic on `(x, y, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[i32; 3]", into = "[i32; 3]")]
pub struct Voxel {
    pub x: i32,
    pub y: i32,
    pub z: i32,
}

impl Voxel {
    pub const fn new(x: i32, y: i32, z: i32) -> Self {
        Voxel { x, y, z }
    }

    pub fn offset(self, dx: i32, dy: i32, dz: i32) -> Self {
        Voxel::new(self.x + dx, self.y + dy, self.z + dz)
    }

    pub fn coord(self, axis: Axis) -> i32 {
        match axis {
            Axis::X => self.x,
            Axis::Y => self.y,
            Axis::Z => self.z,
        }
    }

    /// The six face-adjacent neighbours.
    pub fn face_neighbours(self) -> [Voxel; 6] {
        [
            self.offset(1, 0, 0),
            self.offset(-1, 0, 0),
            self.offset(0, 1, 0),
            self.offset(0, -1, 0),
            self.offset(0, 0, 1),
            self.offset(0, 0, -1),
        ]
    }
}

impl From<[i32; 3]> for Voxel {
    fn from([x, y, z]: [i32; 3]) -> Self {
        Voxel::new(x, y, z)
    }
}

impl From<Voxel> for [i32; 3] {
    fn from(v: Voxel) -> Self {
        [v.x, v.y, v.z]
    }
}

impl fmt::Display for Voxel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

/// Inclusive axis-aligned bounds of a region.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub min: Voxel,
    pub max: Voxel,
}

impl Bounds {
    pub fn lo(&self, axis: Axis) -> i32 {
        self.min.coord(axis)
    }

    pub fn hi(&self, axis: Axis) -> i32 {
        self.max.coord(axis)
    }

    /// Number of voxel layers spanned along `axis`.
    pub fn len(&self, axis: Axis) -> i32 {
        self.hi(axis) - self.lo(axis) + 1
    }
}

/// A non-empty finite set of voxels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Region(BTreeSet<Voxel>);

impl<'de> Deserialize<'de> for Region {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let voxels = BTreeSet::<Voxel>::deserialize(d)?;
        Region::from_set(voxels).map_err(serde::de::Error::custom)
    }
}

impl Region {
    pub fn new<I: IntoIterator<Item = Voxel>>(voxels: I) -> Result<Self> {
        Self::from_set(voxels.into_iter().collect())
    }

    pub fn from_set(voxels: BTreeSet<Voxel>) -> Result<Self> {
        if voxels.is_empty() {
            Err(Error::EmptyRegion)
        } else {
            Ok(Region(voxels))
        }
    }

    pub fn singleton(v: Voxel) -> Self {
        Region(BTreeSet::from([v]))
    }

    /// Axis-aligned box with inclusive corners.
    pub fn cuboid(a: Voxel, b: Voxel) -> Self {
        let (lo, hi) = (
            Voxel::new(a.x.min(b.x), a.y.min(b.y), a.z.min(b.z)),
            Voxel::new(a.x.max(b.x), a.y.max(b.y), a.z.max(b.z)),
        );
        let mut set = BTreeSet::new();
        for x in lo.x..=hi.x {
            for y in lo.y..=hi.y {
                for z in lo.z..=hi.z {
                    set.insert(Voxel::new(x, y, z));
                }
            }
        }
        Region(set)
    }

    pub fn voxels(&self) -> &BTreeSet<Voxel> {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &Voxel> + '_ {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, v: &Voxel) -> bool {
        self.0.contains(v)
    }

    /// Lexicographically minimal voxel, used as a reference point.
    pub fn min_voxel(&self) -> Voxel {
        *self.0.first().expect("regions are non-empty")
    }

    pub fn bounds(&self) -> Bounds {
        let first = self.min_voxel();
        let (mut min, mut max) = (first, first);
        for v in &self.0 {
            min = Voxel::new(min.x.min(v.x), min.y.min(v.y), min.z.min(v.z));
            max = Voxel::new(max.x.max(v.x), max.y.max(v.y), max.z.max(v.z));
        }
        Bounds { min, max }
    }

    pub fn translate(&self, dx: i32, dy: i32, dz: i32) -> Region {
        Region(self.0.iter().map(|v| v.offset(dx, dy, dz)).collect())
    }

    pub fn union(&self, other: &Region) -> Region {
        Region(self.0.union(&other.0).copied().collect())
    }

    /// `self` minus `other`, or `None` when nothing is left.
    pub fn difference(&self, other: &Region) -> Option<Region> {
        Region::from_set(self.0.difference(&other.0).copied().collect()).ok()
    }

    pub fn intersection(&self, other: &Region) -> Option<Region> {
        Region::from_set(self.0.intersection(&other.0).copied().collect()).ok()
    }

    /// Keep voxels matching `pred`, or `None` when nothing is kept.
    pub fn filter(&self, pred: impl Fn(&Voxel) -> bool) -> Option<Region> {
        Region::from_set(self.0.iter().copied().filter(|v| pred(v)).collect()).ok()
    }

    /// Face-connected components, in order of their minimal voxel.
    pub fn components(&self) -> Vec<Region> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in &self.0 {
            if seen.contains(&start) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut queue = VecDeque::from([start]);
            seen.insert(start);
            while let Some(v) = queue.pop_front() {
                comp.insert(v);
                for n in v.face_neighbours() {
                    if self.0.contains(&n) && seen.insert(n) {
                        queue.push_back(n);
                    }
                }
            }
            out.push(Region(comp));
        }
        out
    }

    /// Remove `depth` layers of boundary voxels (those with a face
    /// neighbour outside the region).
    pub fn erode(&self, depth: u32) -> Option<Region> {
        let mut cur = self.0.clone();
        for _ in 0..depth {
            let next: BTreeSet<Voxel> = cur
                .iter()
                .copied()
                .filter(|v| v.face_neighbours().iter().all(|n| cur.contains(n)))
                .collect();
            cur = next;
        }
        Region::from_set(cur).ok()
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

/// Union of a non-empty collection of regions.
pub fn union_all<'a, I: IntoIterator<Item = &'a Region>>(regions: I) -> Option<Region> {
    let set: BTreeSet<Voxel> = regions.into_iter().flat_map(|r| r.0.iter().copied()).collect();
    Region::from_set(set).ok()
}

/// Discrete time interval `[t0, t1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Period {
    t0: u32,
    t1: u32,
}

impl Period {
    pub fn new(t0: u32, t1: u32) -> Result<Self> {
        if t0 > t1 {
            return Err(Error::InvalidPeriod { t0, t1 });
        }
        Ok(Period { t0, t1 })
    }

    pub fn instant(t: u32) -> Self {
        Period { t0: t, t1: t }
    }

    pub fn start(&self) -> u32 {
        self.t0
    }

    pub fn end(&self) -> u32 {
        self.t1
    }

    pub fn steps(&self) -> impl Iterator<Item = u32> {
        self.t0..=self.t1
    }
}

pub fn part_of(a: &Region, b: &Region) -> bool {
    a.0.is_subset(&b.0)
}

pub fn overlaps(a: &Region, b: &Region) -> bool {
    !a.0.is_disjoint(&b.0)
}

/// Shared voxel or a face-adjacent pair.
pub fn connected(a: &Region, b: &Region) -> bool {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    small.0.iter().any(|v| {
        large.0.contains(v) || v.face_neighbours().iter().any(|n| large.0.contains(n))
    })
}

pub fn externally_connected(a: &Region, b: &Region) -> bool {
    connected(a, b) && !overlaps(a, b)
}

pub fn self_connected(a: &Region) -> bool {
    a.components().len() == 1
}

/// All voxels within Chebyshev distance `r` of `a`.
pub fn dilate(a: &Region, r: u32) -> Region {
    if r == 0 {
        return a.clone();
    }
    let r = r as i32;
    let mut set = BTreeSet::new();
    for v in &a.0 {
        for dx in -r..=r {
            for dy in -r..=r {
                for dz in -r..=r {
                    set.insert(v.offset(dx, dy, dz));
                }
            }
        }
    }
    Region(set)
}
