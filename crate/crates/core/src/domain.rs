//! Open domains in `R^n` with exact distance-to-complement oracles, and the
//! shortcut metric on the domain completed by a single boundary point.
//!
//! Every variant admits closed forms for the distance to the complement, the
//! infimum of that distance over an axis-aligned box, and a nearest point of
//! the complement. Whitney cube selection relies on these being exact.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Euclidean norm of `a - b`.
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Euclidean distance from `x` to the closed box `[lo, hi]`.
pub fn dist_point_to_box(x: &[f64], lo: &[f64], hi: &[f64]) -> f64 {
    x.iter()
        .zip(lo.iter().zip(hi))
        .map(|(&v, (&l, &h))| {
            let g = if v < l {
                l - v
            } else if v > h {
                v - h
            } else {
                0.0
            };
            g * g
        })
        .sum::<f64>()
        .sqrt()
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

/// The variants of open domain this crate understands.
#[derive(Clone, Debug, PartialEq)]
pub enum DomainKind {
    /// `prod_i (low_i, high_i)`.
    OpenBox { low: Vec<f64>, high: Vec<f64> },
    /// `{(x, y) : y > x}` in the plane; the home of persistence diagrams.
    UpperDiagonal,
    /// `R^n` minus finitely many points (stored sorted and deduplicated).
    Punctured { points: Vec<Vec<f64>> },
    /// `R^n` minus the closed box `prod_i [low_i, high_i]`.
    ComplementBox { low: Vec<f64>, high: Vec<f64> },
}

/// A validated open, non-empty, proper subset of `R^n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDomain", into = "RawDomain")]
pub struct Domain {
    dim: usize,
    kind: DomainKind,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum RawDomain {
    OpenBox { low: Vec<f64>, high: Vec<f64> },
    UpperDiagonal,
    Punctured { points: Vec<Vec<f64>> },
    ComplementBox { low: Vec<f64>, high: Vec<f64> },
}

impl TryFrom<RawDomain> for Domain {
    type Error = Error;

    fn try_from(raw: RawDomain) -> Result<Self> {
        match raw {
            RawDomain::OpenBox { low, high } => Domain::open_box(low, high),
            RawDomain::UpperDiagonal => Ok(Domain::upper_diagonal()),
            RawDomain::Punctured { points } => Domain::punctured(points),
            RawDomain::ComplementBox { low, high } => Domain::complement_box(low, high),
        }
    }
}

impl From<Domain> for RawDomain {
    fn from(d: Domain) -> Self {
        match d.kind {
            DomainKind::OpenBox { low, high } => RawDomain::OpenBox { low, high },
            DomainKind::UpperDiagonal => RawDomain::UpperDiagonal,
            DomainKind::Punctured { points } => RawDomain::Punctured { points },
            DomainKind::ComplementBox { low, high } => RawDomain::ComplementBox { low, high },
        }
    }
}

fn check_box(low: &[f64], high: &[f64]) -> Result<()> {
    if low.is_empty() {
        return Err(Error::InvalidDomain("box of dimension 0".into()));
    }
    if low.len() != high.len() {
        return Err(Error::DimensionMismatch {
            expected: low.len(),
            got: high.len(),
        });
    }
    for (i, (l, h)) in low.iter().zip(high).enumerate() {
        if !l.is_finite() || !h.is_finite() {
            return Err(Error::InvalidDomain(format!("non-finite corner in axis {i}")));
        }
        if l >= h {
            return Err(Error::InvalidDomain(format!(
                "degenerate box: low[{i}] = {l} >= high[{i}] = {h}"
            )));
        }
    }
    Ok(())
}

impl Domain {
    pub fn open_box(low: Vec<f64>, high: Vec<f64>) -> Result<Self> {
        check_box(&low, &high)?;
        Ok(Self {
            dim: low.len(),
            kind: DomainKind::OpenBox { low, high },
        })
    }

    pub fn upper_diagonal() -> Self {
        Self {
            dim: 2,
            kind: DomainKind::UpperDiagonal,
        }
    }

    pub fn punctured(mut points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = match points.first() {
            Some(p) if !p.is_empty() => p.len(),
            Some(_) => return Err(Error::InvalidDomain("puncture of dimension 0".into())),
            None => {
                return Err(Error::InvalidDomain(
                    "punctured space needs at least one removed point".into(),
                ))
            }
        };
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
            if p.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidDomain("non-finite removed point".into()));
            }
        }
        points.sort_by(|a, b| lex_cmp(a, b));
        points.dedup();
        Ok(Self {
            dim,
            kind: DomainKind::Punctured { points },
        })
    }

    pub fn complement_box(low: Vec<f64>, high: Vec<f64>) -> Result<Self> {
        check_box(&low, &high)?;
        Ok(Self {
            dim: low.len(),
            kind: DomainKind::ComplementBox { low, high },
        })
    }

    /// Parse a descriptor from its JSON form.
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("domain serialization is infallible")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        self.check_dim(x)?;
        if x.iter().any(|v| !v.is_finite()) {
            return Ok(false);
        }
        Ok(match &self.kind {
            DomainKind::OpenBox { low, high } => x
                .iter()
                .zip(low.iter().zip(high))
                .all(|(v, (l, h))| l < v && v < h),
            DomainKind::UpperDiagonal => x[1] > x[0],
            DomainKind::Punctured { points } => points.iter().all(|p| p.as_slice() != x),
            DomainKind::ComplementBox { low, high } => x
                .iter()
                .zip(low.iter().zip(high))
                .any(|(v, (l, h))| v < l || v > h),
        })
    }

    /// Distance from `x` to `R^n \ Omega`; zero outside the domain.
    pub fn dist_to_complement(&self, x: &[f64]) -> Result<f64> {
        if !self.contains(x)? {
            return Ok(0.0);
        }
        Ok(match &self.kind {
            DomainKind::OpenBox { low, high } => x
                .iter()
                .zip(low.iter().zip(high))
                .map(|(v, (l, h))| (v - l).min(h - v))
                .fold(f64::INFINITY, f64::min),
            DomainKind::UpperDiagonal => (x[1] - x[0]) / std::f64::consts::SQRT_2,
            DomainKind::Punctured { points } => points
                .iter()
                .map(|p| euclidean(x, p))
                .fold(f64::INFINITY, f64::min),
            DomainKind::ComplementBox { low, high } => dist_point_to_box(x, low, high),
        })
    }

    /// Infimum of [`Domain::dist_to_complement`] over the closed box `[lo, hi]`.
    pub fn dist_cube_to_complement(&self, lo: &[f64], hi: &[f64]) -> Result<f64> {
        self.check_dim(lo)?;
        self.check_dim(hi)?;
        Ok(match &self.kind {
            DomainKind::OpenBox { low, high } => lo
                .iter()
                .zip(hi)
                .zip(low.iter().zip(high))
                .map(|((a, b), (l, h))| (a - l).min(h - b))
                .fold(f64::INFINITY, f64::min)
                .max(0.0),
            // min of y - x over the box is attained at (hi_x, lo_y)
            DomainKind::UpperDiagonal => ((lo[1] - hi[0]) / std::f64::consts::SQRT_2).max(0.0),
            DomainKind::Punctured { points } => points
                .iter()
                .map(|p| dist_point_to_box(p, lo, hi))
                .fold(f64::INFINITY, f64::min),
            DomainKind::ComplementBox { low, high } => lo
                .iter()
                .zip(hi)
                .zip(low.iter().zip(high))
                .map(|((a, b), (l, h))| {
                    let g = (a - h).max(l - b).max(0.0);
                    g * g
                })
                .sum::<f64>()
                .sqrt(),
        })
    }

    /// A point of the complement realizing the distance from `x`.
    ///
    /// Ties are broken towards the lexicographically smallest candidate.
    pub fn nearest_complement_point(&self, x: &[f64]) -> Result<Vec<f64>> {
        if !self.contains(x)? {
            return Err(Error::NotInDomain(x.to_vec()));
        }
        Ok(match &self.kind {
            DomainKind::OpenBox { low, high } => {
                let d = self.dist_to_complement(x)?;
                let mut best: Option<Vec<f64>> = None;
                for i in 0..self.dim {
                    for (face, gap) in [(low[i], x[i] - low[i]), (high[i], high[i] - x[i])] {
                        if gap != d {
                            continue;
                        }
                        let mut c = x.to_vec();
                        c[i] = face;
                        if best.as_ref().is_none_or(|b| lex_cmp(&c, b) == Ordering::Less) {
                            best = Some(c);
                        }
                    }
                }
                best.expect("some face realizes the minimum")
            }
            DomainKind::UpperDiagonal => {
                let m = 0.5 * (x[0] + x[1]);
                vec![m, m]
            }
            DomainKind::Punctured { points } => {
                // points are sorted, so the first minimizer is the lexicographic one
                let mut best = &points[0];
                let mut best_d = euclidean(x, best);
                for p in &points[1..] {
                    let d = euclidean(x, p);
                    if d < best_d {
                        best = p;
                        best_d = d;
                    }
                }
                best.clone()
            }
            DomainKind::ComplementBox { low, high } => x
                .iter()
                .zip(low.iter().zip(high))
                .map(|(v, (l, h))| v.clamp(*l, *h))
                .collect(),
        })
    }

    /// The shortcut metric on the completed domain.
    pub fn shortcut_distance(&self, a: &ShortcutPoint, b: &ShortcutPoint) -> Result<f64> {
        match (a, b) {
            (ShortcutPoint::Boundary, ShortcutPoint::Boundary) => Ok(0.0),
            (ShortcutPoint::Interior(x), ShortcutPoint::Boundary)
            | (ShortcutPoint::Boundary, ShortcutPoint::Interior(x)) => self.interior_dist(x),
            (ShortcutPoint::Interior(x), ShortcutPoint::Interior(y)) => {
                let dx = self.interior_dist(x)?;
                let dy = self.interior_dist(y)?;
                Ok(euclidean(x, y).min(dx + dy))
            }
        }
    }

    /// Distance to the complement, erroring for points outside the domain.
    pub fn interior_dist(&self, x: &[f64]) -> Result<f64> {
        if !self.contains(x)? {
            return Err(Error::NotInDomain(x.to_vec()));
        }
        self.dist_to_complement(x)
    }

    /// Axis-aligned box used when drawing random points from the domain.
    pub fn sampling_box(&self) -> (Vec<f64>, Vec<f64>) {
        match &self.kind {
            DomainKind::OpenBox { low, high } => (low.clone(), high.clone()),
            DomainKind::UpperDiagonal => (vec![-1.0, -1.0], vec![1.0, 1.0]),
            DomainKind::Punctured { points } => {
                let mut lo = points[0].clone();
                let mut hi = points[0].clone();
                for p in points {
                    for i in 0..self.dim {
                        lo[i] = lo[i].min(p[i]);
                        hi[i] = hi[i].max(p[i]);
                    }
                }
                (
                    lo.iter().map(|v| v - 1.0).collect(),
                    hi.iter().map(|v| v + 1.0).collect(),
                )
            }
            DomainKind::ComplementBox { low, high } => {
                let pad: Vec<f64> = low.iter().zip(high).map(|(l, h)| (h - l).max(1.0)).collect();
                (
                    low.iter().zip(&pad).map(|(v, p)| v - p).collect(),
                    high.iter().zip(&pad).map(|(v, p)| v + p).collect(),
                )
            }
        }
    }
}

/// A point of the completed domain: either an interior point or the glued
/// boundary point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ShortcutPoint {
    Interior(Vec<f64>),
    Boundary,
}

impl ShortcutPoint {
    pub fn is_boundary(&self) -> bool {
        matches!(self, ShortcutPoint::Boundary)
    }

    pub fn coords(&self) -> Option<&[f64]> {
        match self {
            ShortcutPoint::Interior(x) => Some(x),
            ShortcutPoint::Boundary => None,
        }
    }
}

impl Eq for ShortcutPoint {}

impl PartialOrd for ShortcutPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Interior points first (lexicographic by `total_cmp`), the boundary last.
impl Ord for ShortcutPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ShortcutPoint::Interior(a), ShortcutPoint::Interior(b)) => lex_cmp(a, b),
            (ShortcutPoint::Interior(_), ShortcutPoint::Boundary) => Ordering::Less,
            (ShortcutPoint::Boundary, ShortcutPoint::Interior(_)) => Ordering::Greater,
            (ShortcutPoint::Boundary, ShortcutPoint::Boundary) => Ordering::Equal,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> Domain {
        Domain::open_box(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap()
    }

    fn pt(v: &[f64]) -> ShortcutPoint {
        ShortcutPoint::Interior(v.to_vec())
    }

    #[test]
    fn contains_examples() {
        let d = unit_square();
        assert!(d.contains(&[0.5, 0.5]).unwrap());
        assert!(!d.contains(&[0.0, 0.5]).unwrap());
        assert!(Domain::upper_diagonal().contains(&[1.0, 2.0]).unwrap());
        assert!(matches!(
            d.contains(&[0.5]),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn dist_examples() {
        assert_eq!(unit_square().dist_to_complement(&[0.3, 0.5]).unwrap(), 0.3);
        let (b, dd) = (0.25, 1.75);
        let got = Domain::upper_diagonal().dist_to_complement(&[b, dd]).unwrap();
        assert!((got - (dd - b) / 2f64.sqrt()).abs() < 1e-15);
        let p = Domain::punctured(vec![vec![0.0, 0.0]]).unwrap();
        assert_eq!(p.dist_to_complement(&[3.0, 4.0]).unwrap(), 5.0);
        assert_eq!(unit_square().dist_to_complement(&[2.0, 0.5]).unwrap(), 0.0);
    }

    #[test]
    fn nearest_examples() {
        assert_eq!(
            unit_square().nearest_complement_point(&[0.3, 0.5]).unwrap(),
            vec![0.0, 0.5]
        );
        assert_eq!(
            Domain::upper_diagonal()
                .nearest_complement_point(&[0.5, 1.5])
                .unwrap(),
            vec![1.0, 1.0]
        );
        let p = Domain::punctured(vec![vec![0.0, 0.0]]).unwrap();
        assert_eq!(p.nearest_complement_point(&[3.0, 4.0]).unwrap(), vec![0.0, 0.0]);
        // centre of the square: four faces tie, lexicographically smallest wins
        assert_eq!(
            unit_square().nearest_complement_point(&[0.5, 0.5]).unwrap(),
            vec![0.0, 0.5]
        );
        assert!(unit_square().nearest_complement_point(&[1.5, 0.5]).is_err());
    }

    #[test]
    fn shortcut_examples() {
        let d = unit_square();
        let v = d.shortcut_distance(&pt(&[0.1, 0.5]), &pt(&[0.9, 0.5])).unwrap();
        assert!((v - 0.2).abs() < 1e-15);
        let v = d.shortcut_distance(&pt(&[0.4, 0.5]), &pt(&[0.6, 0.5])).unwrap();
        assert!((v - 0.2).abs() < 1e-15);
        assert_eq!(
            d.shortcut_distance(&ShortcutPoint::Boundary, &ShortcutPoint::Boundary)
                .unwrap(),
            0.0
        );
        assert!(d
            .shortcut_distance(&pt(&[1.5, 0.5]), &ShortcutPoint::Boundary)
            .is_err());
    }

    #[test]
    fn complement_box_oracles() {
        let d = Domain::complement_box(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        assert!(!d.contains(&[0.5, 1.0]).unwrap());
        assert!(d.contains(&[0.5, 1.5]).unwrap());
        assert_eq!(d.dist_to_complement(&[4.0, 5.0]).unwrap(), 5.0);
        assert_eq!(d.nearest_complement_point(&[4.0, 5.0]).unwrap(), vec![1.0, 1.0]);
        assert_eq!(
            d.dist_cube_to_complement(&[2.0, -1.0], &[3.0, 0.5]).unwrap(),
            1.0
        );
    }

    #[test]
    fn degenerate_descriptors_rejected() {
        assert!(Domain::open_box(vec![0.0, 1.0], vec![1.0, 1.0]).is_err());
        assert!(Domain::open_box(vec![], vec![]).is_err());
        assert!(Domain::complement_box(vec![2.0], vec![1.0]).is_err());
        assert!(Domain::punctured(vec![]).is_err());
        assert!(Domain::punctured(vec![vec![0.0], vec![0.0, 1.0]]).is_err());
    }

    #[test]
    fn json_forms() {
        for s in [
            r#"{"type":"open_box","low":[0.0,0.0],"high":[1.0,1.0]}"#,
            r#"{"type":"upper_diagonal"}"#,
            r#"{"type":"punctured","points":[[0.0,0.0],[1.0,2.0]]}"#,
            r#"{"type":"complement_box","low":[0.0],"high":[1.0]}"#,
        ] {
            let d = Domain::from_json(s).unwrap();
            assert_eq!(Domain::from_json(&d.to_json()).unwrap(), d);
        }
        assert!(Domain::from_json(r#"{"type":"open_box","low":[1.0],"high":[0.0]}"#).is_err());
        assert!(Domain::from_json(r#"{"type":"sphere"}"#).is_err());
    }

    #[test]
    fn cube_distance_matches_grid_minimum() {
        let domains = [
            unit_square(),
            Domain::upper_diagonal(),
            Domain::punctured(vec![vec![0.0, 0.0], vec![0.3, -0.2]]).unwrap(),
            Domain::complement_box(vec![-0.2, -0.2], vec![0.1, 0.3]).unwrap(),
        ];
        let boxes = [
            ([0.25, 0.5], [0.5, 0.75]),
            ([-0.5, 0.25], [-0.25, 0.5]),
            ([0.5, 0.5], [0.625, 0.625]),
            ([0.0, -1.0], [0.5, -0.5]),
        ];
        let steps = 64;
        for d in &domains {
            for (lo, hi) in &boxes {
                let exact = d.dist_cube_to_complement(lo, hi).unwrap();
                let mut grid = f64::INFINITY;
                for i in 0..=steps {
                    for j in 0..=steps {
                        let x = [
                            lo[0] + (hi[0] - lo[0]) * i as f64 / steps as f64,
                            lo[1] + (hi[1] - lo[1]) * j as f64 / steps as f64,
                        ];
                        grid = grid.min(d.dist_to_complement(&x).unwrap());
                    }
                }
                let h = (hi[0] - lo[0]) / steps as f64 * 2f64.sqrt();
                assert!(exact <= grid + 1e-12, "{d:?} {lo:?}: {exact} > {grid}");
                assert!(grid <= exact + h, "{d:?} {lo:?}: {grid} vs {exact}");
            }
        }
    }
}
