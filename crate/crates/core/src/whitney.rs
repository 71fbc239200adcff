//! Lazy dyadic Whitney decomposition of a [`Domain`].
//!
//! A dyadic cube `Q` of side `l = 2^k` is selected when
//! `dist(Q, complement) >= sqrt(n) * l` while its dyadic parent fails the same
//! test. Failure propagates to every ancestor, so each dyadic ancestor chain
//! contains exactly one selected cube, which yields a cover by cubes with
//! disjoint interiors and `sqrt(n) l <= dist(Q, complement) < 4 sqrt(n) l`.
//! Neighbouring selected cubes then have side ratios within `[1/4, 4]`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use serde::Serialize;

use crate::domain::{dist_point_to_box, euclidean, Domain, ShortcutPoint};
use crate::error::{Error, Result};

pub const MIN_GENERATION: i32 = -1000;
pub const MAX_GENERATION: i32 = 1000;
/// Generations walked up or down by a single search before giving up.
pub const SEARCH_LIMIT: usize = 128;
/// Corner coordinates beyond this are not exactly representable in `f64`.
const MAX_CORNER: i64 = 1 << 53;
/// Cap on the number of cubes produced by [`WhitneyDecomposition::cubes_in_box`].
pub const EXPORT_LIMIT: usize = 1_000_000;

/// The closed cube `prod_i [c_i 2^k, (c_i + 1) 2^k]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DyadicCube {
    #[serde(rename = "k")]
    generation: i32,
    corner: Vec<i64>,
}

fn exp2(k: i32) -> f64 {
    2f64.powi(k)
}

impl DyadicCube {
    pub fn new(generation: i32, corner: Vec<i64>) -> Result<Self> {
        if !(MIN_GENERATION..=MAX_GENERATION).contains(&generation) {
            return Err(Error::WhitneySearch(format!(
                "generation {generation} outside [{MIN_GENERATION}, {MAX_GENERATION}]"
            )));
        }
        if corner.is_empty() {
            return Err(Error::WhitneySearch("cube of dimension 0".into()));
        }
        if corner.iter().any(|c| c.unsigned_abs() >= MAX_CORNER as u64) {
            return Err(Error::WhitneySearch(format!(
                "corner {corner:?} is not exactly representable"
            )));
        }
        Ok(Self { generation, corner })
    }

    /// All cubes of the given generation whose closure contains `x`.
    pub fn containing(x: &[f64], generation: i32) -> Result<Vec<Self>> {
        let scale = exp2(-generation);
        let mut per_axis = Vec::with_capacity(x.len());
        for &v in x {
            let s = v * scale;
            if !s.is_finite() || s.abs() >= MAX_CORNER as f64 {
                return Err(Error::WhitneySearch(format!(
                    "coordinate {v} out of range at generation {generation}"
                )));
            }
            let f = s.floor();
            let c = f as i64;
            per_axis.push(if s == f { vec![c - 1, c] } else { vec![c] });
        }
        cartesian(&per_axis)
            .into_iter()
            .map(|corner| Self::new(generation, corner))
            .collect()
    }

    pub fn generation(&self) -> i32 {
        self.generation
    }

    pub fn corner(&self) -> &[i64] {
        &self.corner
    }

    pub fn dim(&self) -> usize {
        self.corner.len()
    }

    pub fn side(&self) -> f64 {
        exp2(self.generation)
    }

    pub fn lower(&self) -> Vec<f64> {
        let s = self.side();
        self.corner.iter().map(|&c| c as f64 * s).collect()
    }

    pub fn upper(&self) -> Vec<f64> {
        let s = self.side();
        self.corner.iter().map(|&c| (c + 1) as f64 * s).collect()
    }

    pub fn center(&self) -> Vec<f64> {
        let s = self.side();
        self.corner.iter().map(|&c| (c as f64 + 0.5) * s).collect()
    }

    pub fn diameter(&self) -> f64 {
        (self.dim() as f64).sqrt() * self.side()
    }

    pub fn parent(&self) -> Result<Self> {
        Self::new(
            self.generation + 1,
            self.corner.iter().map(|c| c.div_euclid(2)).collect(),
        )
    }

    pub fn children(&self) -> Result<Vec<Self>> {
        let axes: Vec<Vec<i64>> = self.corner.iter().map(|&c| vec![2 * c, 2 * c + 1]).collect();
        cartesian(&axes)
            .into_iter()
            .map(|corner| Self::new(self.generation - 1, corner))
            .collect()
    }

    /// Euclidean distance from `x` to the closed cube.
    pub fn dist_to_point(&self, x: &[f64]) -> f64 {
        dist_point_to_box(x, &self.lower(), &self.upper())
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        let (lo, hi) = (self.lower(), self.upper());
        x.iter().zip(lo.iter().zip(&hi)).all(|(v, (l, h))| l <= v && v <= h)
    }

    /// Whether the closed cubes meet.
    pub fn intersects(&self, other: &Self) -> bool {
        let (a0, a1, b0, b1) = (self.lower(), self.upper(), other.lower(), other.upper());
        (0..self.dim()).all(|i| a0[i] <= b1[i] && b0[i] <= a1[i])
    }

    /// Whether the open interiors meet.
    pub fn interiors_overlap(&self, other: &Self) -> bool {
        let (a0, a1, b0, b1) = (self.lower(), self.upper(), other.lower(), other.upper());
        (0..self.dim()).all(|i| a0[i] < b1[i] && b0[i] < a1[i])
    }

    fn intersects_box(&self, lo: &[f64], hi: &[f64]) -> bool {
        let (a0, a1) = (self.lower(), self.upper());
        (0..self.dim()).all(|i| a0[i] <= hi[i] && lo[i] <= a1[i])
    }
}

/// `k,c_1,...,c_n`
impl fmt::Display for DyadicCube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.generation)?;
        for c in &self.corner {
            write!(f, ",{c}")?;
        }
        Ok(())
    }
}

impl FromStr for DyadicCube {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(',');
        let parse_err = || Error::Parse(format!("bad cube key {s:?}"));
        let generation = parts
            .next()
            .and_then(|p| p.trim().parse::<i32>().ok())
            .ok_or_else(parse_err)?;
        let corner = parts
            .map(|p| p.trim().parse::<i64>().map_err(|_| parse_err()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(generation, corner)
    }
}

fn cartesian(axes: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::with_capacity(axes.len())];
    for axis in axes {
        let mut next = Vec::with_capacity(out.len() * axis.len());
        for prefix in &out {
            for &c in axis {
                let mut v = prefix.clone();
                v.push(c);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// The Whitney decomposition of a domain, evaluated on demand.
///
/// Selection results and neighbour lists are memoized behind read-write locks,
/// so a decomposition can be shared across threads.
#[derive(Debug)]
pub struct WhitneyDecomposition {
    domain: Domain,
    sqrt_n: f64,
    selected: RwLock<HashMap<DyadicCube, bool>>,
    adjacency: RwLock<HashMap<DyadicCube, Arc<Vec<DyadicCube>>>>,
}

impl WhitneyDecomposition {
    pub fn new(domain: Domain) -> Self {
        let sqrt_n = (domain.dim() as f64).sqrt();
        Self {
            domain,
            sqrt_n,
            selected: RwLock::new(HashMap::new()),
            adjacency: RwLock::new(HashMap::new()),
        }
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn dist_cube_to_complement(&self, q: &DyadicCube) -> f64 {
        self.domain
            .dist_cube_to_complement(&q.lower(), &q.upper())
            .expect("cube dimension checked by caller")
    }

    /// `dist(Q, complement) >= sqrt(n) l(Q)`.
    fn has_margin(&self, q: &DyadicCube) -> bool {
        self.dist_cube_to_complement(q) >= self.sqrt_n * q.side()
    }

    fn check_dim(&self, q: &DyadicCube) -> Result<()> {
        if q.dim() != self.domain.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.domain.dim(),
                got: q.dim(),
            });
        }
        Ok(())
    }

    pub fn is_whitney_cube(&self, q: &DyadicCube) -> bool {
        if q.dim() != self.domain.dim() {
            return false;
        }
        if let Some(&v) = self.selected.read().expect("lock poisoned").get(q) {
            return v;
        }
        let v = self.has_margin(q) && q.parent().is_ok_and(|p| !self.has_margin(&p));
        self.selected
            .write()
            .expect("lock poisoned")
            .insert(q.clone(), v);
        v
    }

    /// Climbs from a cube with margin to the selected cube of its chain.
    fn selected_ancestor(&self, start: DyadicCube) -> Result<DyadicCube> {
        let mut q = start;
        for _ in 0..=SEARCH_LIMIT {
            let p = q.parent()?;
            if !self.has_margin(&p) {
                return Ok(q);
            }
            q = p;
        }
        Err(Error::WhitneySearch(format!(
            "no selected ancestor within {SEARCH_LIMIT} generations"
        )))
    }

    /// The selected cube containing `x`; on shared faces the largest cube
    /// wins, then the lexicographically smallest corner.
    pub fn cube_containing(&self, x: &[f64]) -> Result<DyadicCube> {
        let d = self.domain.interior_dist(x)?;
        let start = (d / (2.0 * self.sqrt_n)).log2().floor();
        if !start.is_finite() {
            return Err(Error::WhitneySearch(format!("cannot place {x:?}")));
        }
        let mut k = (start as i64).clamp(MIN_GENERATION as i64, MAX_GENERATION as i64) as i32;
        for _ in 0..SEARCH_LIMIT {
            let candidates = DyadicCube::containing(x, k)?;
            if candidates.iter().all(|c| self.has_margin(c)) {
                let mut best: Option<DyadicCube> = None;
                for c in candidates {
                    let s = self.selected_ancestor(c)?;
                    let better = match &best {
                        None => true,
                        Some(b) => {
                            s.generation > b.generation
                                || (s.generation == b.generation && s.corner < b.corner)
                        }
                    };
                    if better {
                        best = Some(s);
                    }
                }
                return Ok(best.expect("at least one candidate"));
            }
            k -= 1;
            if k < MIN_GENERATION {
                break;
            }
        }
        Err(Error::WhitneySearch(format!(
            "no cube with margin found below {x:?}"
        )))
    }

    /// All selected cubes meeting `q` (including `q`), sorted.
    pub fn neighbors(&self, q: &DyadicCube) -> Result<Arc<Vec<DyadicCube>>> {
        self.check_dim(q)?;
        if !self.is_whitney_cube(q) {
            return Err(Error::NotSelected(q.to_string()));
        }
        if let Some(v) = self.adjacency.read().expect("lock poisoned").get(q) {
            return Ok(Arc::clone(v));
        }
        let (lo, hi) = (q.lower(), q.upper());
        let mut out = Vec::new();
        for j in q.generation - 2..=q.generation + 2 {
            if !(MIN_GENERATION..=MAX_GENERATION).contains(&j) {
                continue;
            }
            let scale = exp2(-j);
            let axes: Vec<Vec<i64>> = lo
                .iter()
                .zip(&hi)
                .map(|(a, b)| {
                    let first = (a * scale).floor() as i64 - 1;
                    let last = (b * scale).floor() as i64;
                    (first..=last).collect()
                })
                .collect();
            for corner in cartesian(&axes) {
                let Ok(c) = DyadicCube::new(j, corner) else {
                    continue;
                };
                if c.intersects(q) && self.is_whitney_cube(&c) {
                    out.push(c);
                }
            }
        }
        out.sort();
        let out = Arc::new(out);
        self.adjacency
            .write()
            .expect("lock poisoned")
            .insert(q.clone(), Arc::clone(&out));
        Ok(out)
    }

    /// Checks the four decomposition properties locally around `q`.
    pub fn check_cube(&self, q: &DyadicCube) -> Result<CubeReport> {
        let nbrs = self.neighbors(q)?;
        let l = q.side();
        let dist = self.dist_cube_to_complement(q);
        let n = self.domain.dim();
        let separation = self.sqrt_n * l <= dist && dist <= 4.0 * self.sqrt_n * l;
        let inside = dist > 0.0;
        let ratios_ok = nbrs.iter().all(|r| {
            let ratio = l / r.side();
            (0.25..=4.0).contains(&ratio)
        });
        let count_ok = nbrs.len() as f64 <= 12f64.powi(n as i32);
        let mut disjoint = true;
        for (i, a) in nbrs.iter().enumerate() {
            for b in &nbrs[i + 1..] {
                if a.interiors_overlap(b) {
                    disjoint = false;
                }
            }
        }
        Ok(CubeReport {
            cube: q.clone(),
            dist_to_complement: dist,
            neighbor_count: nbrs.len(),
            inside,
            separation,
            ratios_ok,
            count_ok,
            disjoint,
        })
    }

    /// Locates `x` and `y`, then evaluates the distance estimates that hold
    /// between points of Whitney cubes.
    pub fn check_delta_estimates(&self, x: &[f64], y: &[f64]) -> Result<DeltaReport> {
        let qx = self.cube_containing(x)?;
        let qy = self.cube_containing(y)?;
        let (lx, ly) = (qx.side(), qy.side());
        let dx = self.domain.dist_to_complement(x)?;
        let dy = self.domain.dist_to_complement(y)?;
        let euclid = euclidean(x, y);
        let delta = self.domain.shortcut_distance(
            &ShortcutPoint::Interior(x.to_vec()),
            &ShortcutPoint::Interior(y.to_vec()),
        )?;
        let neighbors = qx.intersects(&qy);
        let s = self.sqrt_n;
        let mut checks = vec![
            ("length_dist_boundary_x", s * lx <= dx && dx <= 5.0 * s * lx),
            ("length_dist_boundary_y", s * ly <= dy && dy <= 5.0 * s * ly),
        ];
        if neighbors {
            checks.push(("neighbour_isometry", delta == euclid));
        } else {
            let sum = lx + ly;
            checks.push(("non_neighbour_bounds", sum / 8.0 <= delta && delta <= 5.0 * s * sum));
        }
        Ok(DeltaReport {
            cube_x: qx,
            cube_y: qy,
            neighbors,
            dist_x: dx,
            dist_y: dy,
            euclidean: euclid,
            delta,
            checks,
        })
    }

    /// Every selected cube meeting the box `[lo, hi]` with generation at least
    /// `min_generation`, sorted.
    pub fn cubes_in_box(
        &self,
        lo: &[f64],
        hi: &[f64],
        min_generation: i32,
    ) -> Result<Vec<DyadicCube>> {
        let n = self.domain.dim();
        if lo.len() != n || hi.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: lo.len().min(hi.len()),
            });
        }
        if lo.iter().zip(hi).any(|(a, b)| !a.is_finite() || !b.is_finite() || a > b) {
            return Err(Error::Parse("invalid bounding box".into()));
        }
        let extent = lo.iter().zip(hi).map(|(a, b)| b - a).fold(0.0, f64::max);
        let top = if extent > 0.0 {
            extent.log2().ceil() as i32
        } else {
            min_generation
        }
        .clamp(MIN_GENERATION, MAX_GENERATION);
        let scale = exp2(-top);
        let axes: Vec<Vec<i64>> = lo
            .iter()
            .zip(hi)
            .map(|(a, b)| ((a * scale).floor() as i64..=(b * scale).floor() as i64).collect())
            .collect();
        let mut found = BTreeSet::new();
        let mut stack = cartesian(&axes)
            .into_iter()
            .map(|c| DyadicCube::new(top, c))
            .collect::<Result<Vec<_>>>()?;
        while let Some(q) = stack.pop() {
            if !q.intersects_box(lo, hi) {
                continue;
            }
            if self.has_margin(&q) {
                found.insert(self.selected_ancestor(q)?);
                if found.len() > EXPORT_LIMIT {
                    return Err(Error::WhitneySearch("export limit exceeded".into()));
                }
            } else if q.generation > min_generation {
                stack.extend(q.children()?);
            }
        }
        Ok(found
            .into_iter()
            .filter(|q| q.generation >= min_generation && q.intersects_box(lo, hi))
            .collect())
    }
}

#[derive(Clone, Debug)]
pub struct CubeReport {
    pub cube: DyadicCube,
    pub dist_to_complement: f64,
    pub neighbor_count: usize,
    /// The cube lies inside the domain.
    pub inside: bool,
    /// `sqrt(n) l <= dist(Q, complement) <= 4 sqrt(n) l`.
    pub separation: bool,
    /// Neighbour side ratios within `[1/4, 4]`.
    pub ratios_ok: bool,
    /// At most `12^n` neighbours.
    pub count_ok: bool,
    /// Neighbours (and the cube) have pairwise disjoint interiors.
    pub disjoint: bool,
}

impl CubeReport {
    pub fn passed(&self) -> bool {
        self.inside && self.separation && self.ratios_ok && self.count_ok && self.disjoint
    }
}

#[derive(Clone, Debug)]
pub struct DeltaReport {
    pub cube_x: DyadicCube,
    pub cube_y: DyadicCube,
    pub neighbors: bool,
    pub dist_x: f64,
    pub dist_y: f64,
    pub euclidean: f64,
    pub delta: f64,
    pub checks: Vec<(&'static str, bool)>,
}

impl DeltaReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interval() -> WhitneyDecomposition {
        WhitneyDecomposition::new(Domain::open_box(vec![0.0], vec![1.0]).unwrap())
    }

    fn cube(k: i32, c: &[i64]) -> DyadicCube {
        DyadicCube::new(k, c.to_vec()).unwrap()
    }

    #[test]
    fn selection_rule_on_the_interval() {
        let w = interval();
        assert!(w.is_whitney_cube(&cube(-2, &[1]))); // [1/4, 1/2]
        assert!(!w.is_whitney_cube(&cube(-1, &[0]))); // [0, 1/2]
        assert!(w.is_whitney_cube(&cube(-3, &[1]))); // [1/8, 1/4]
        assert!(!w.is_whitney_cube(&cube(-3, &[2]))); // inside [1/4, 1/2]
    }

    #[test]
    fn containing_cube() {
        let w = interval();
        assert_eq!(w.cube_containing(&[0.375]).unwrap(), cube(-2, &[1]));
        assert_eq!(w.cube_containing(&[0.6]).unwrap(), cube(-2, &[2]));
        // 1/4 is shared by [1/8, 1/4] and [1/4, 1/2]; the larger wins
        assert_eq!(w.cube_containing(&[0.25]).unwrap(), cube(-2, &[1]));
        // 1/2 is shared by two cubes of equal size; smaller corner wins
        assert_eq!(w.cube_containing(&[0.5]).unwrap(), cube(-2, &[1]));
        assert_eq!(w.cube_containing(&[0.5]).unwrap(), w.cube_containing(&[0.5]).unwrap());
        assert!(w.cube_containing(&[1.5]).is_err());
    }

    #[test]
    fn neighbours_on_the_interval() {
        let w = interval();
        let q = cube(-2, &[1]);
        let n = w.neighbors(&q).unwrap();
        assert_eq!(*n, vec![cube(-3, &[1]), cube(-2, &[1]), cube(-2, &[2])]);
        assert!(w.neighbors(&cube(-1, &[0])).is_err());
    }

    #[test]
    fn key_round_trip() {
        let q = cube(-3, &[5, -2]);
        assert_eq!(q.to_string(), "-3,5,-2");
        assert_eq!("-3,5,-2".parse::<DyadicCube>().unwrap(), q);
        assert!("x,1".parse::<DyadicCube>().is_err());
        assert!("3".parse::<DyadicCube>().is_err());
    }

    #[test]
    fn estimates_in_one_cube() {
        let w = WhitneyDecomposition::new(Domain::open_box(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap());
        let r = w.check_delta_estimates(&[0.5, 0.5], &[0.52, 0.49]).unwrap();
        assert!(r.neighbors);
        assert_eq!(r.delta, r.euclidean);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn export_covers_box() {
        let w = interval();
        let cubes = w.cubes_in_box(&[0.0], &[1.0], -6).unwrap();
        assert!(cubes.contains(&cube(-2, &[1])));
        assert!(cubes.contains(&cube(-6, &[1])));
        assert!(cubes.iter().all(|c| w.is_whitney_cube(c)));
        // a symmetric family down to generation -6: two per generation from -6 to -2
        assert_eq!(cubes.len(), 10);
    }
}
