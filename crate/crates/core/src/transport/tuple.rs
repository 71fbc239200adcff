use crate::domain::{euclidean, Domain, ShortcutPoint};
use crate::error::{Error, Result};

use super::assignment::{assignment_solve, Assignment, CostMatrix, Label};

/// A multiset of points of the completed domain, stored in canonical order
/// (interior points lexicographically, then copies of the boundary point).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnorderedTuple {
    points: Vec<ShortcutPoint>,
}

impl UnorderedTuple {
    /// Validates interior points against `domain` and sorts.
    pub fn new(domain: &Domain, mut points: Vec<ShortcutPoint>) -> Result<Self> {
        for p in &points {
            if let ShortcutPoint::Interior(x) = p {
                if !domain.contains(x)? {
                    return Err(Error::NotInDomain(x.clone()));
                }
            }
        }
        points.sort();
        Ok(Self { points })
    }

    pub fn from_interior(domain: &Domain, points: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(domain, points.into_iter().map(ShortcutPoint::Interior).collect())
    }

    /// A tuple of plain Euclidean points (no domain, no boundary point).
    pub fn euclidean(points: Vec<Vec<f64>>) -> Result<Self> {
        if let Some(first) = points.first() {
            if let Some(bad) = points.iter().find(|p| p.len() != first.len()) {
                return Err(Error::DimensionMismatch {
                    expected: first.len(),
                    got: bad.len(),
                });
            }
        }
        let mut points: Vec<ShortcutPoint> =
            points.into_iter().map(ShortcutPoint::Interior).collect();
        points.sort();
        Ok(Self { points })
    }

    pub fn empty() -> Self {
        Self { points: Vec::new() }
    }

    pub fn points(&self) -> &[ShortcutPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn boundary_count(&self) -> usize {
        self.points.iter().filter(|p| p.is_boundary()).count()
    }

    pub fn interior(&self) -> impl Iterator<Item = &[f64]> {
        self.points.iter().filter_map(ShortcutPoint::coords)
    }

    /// Appends `count` copies of the boundary point.
    pub fn with_boundary(&self, count: usize) -> Self {
        let mut points = self.points.clone();
        points.extend(std::iter::repeat_n(ShortcutPoint::Boundary, count));
        Self { points }
    }

    /// The interior points alone.
    pub fn without_boundary(&self) -> Self {
        Self {
            points: self.points.iter().filter(|p| !p.is_boundary()).cloned().collect(),
        }
    }

    /// Pads a tuple of at most `m` points to exactly `2m` points with copies
    /// of the boundary point.
    pub fn iota_pad(&self, m: usize) -> Result<Self> {
        if self.len() > m {
            return Err(Error::TooManyPoints {
                size: self.len(),
                bound: m,
            });
        }
        Ok(self.with_boundary(2 * m - self.len()))
    }
}

/// The ground distance used to compare tuple entries.
#[derive(Clone, Copy, Debug)]
pub enum Ground<'a> {
    /// The shortcut metric of a domain.
    Shortcut(&'a Domain),
    /// Plain Euclidean distance; boundary entries are rejected.
    Euclidean,
}

impl Ground<'_> {
    pub fn distance(&self, a: &ShortcutPoint, b: &ShortcutPoint) -> Result<f64> {
        match self {
            Ground::Shortcut(d) => d.shortcut_distance(a, b),
            Ground::Euclidean => match (a, b) {
                (ShortcutPoint::Interior(x), ShortcutPoint::Interior(y)) => {
                    if x.len() != y.len() {
                        return Err(Error::DimensionMismatch {
                            expected: x.len(),
                            got: y.len(),
                        });
                    }
                    Ok(euclidean(x, y))
                }
                _ => Err(Error::Parse(
                    "boundary point in a tuple compared with the Euclidean ground metric".into(),
                )),
            },
        }
    }
}

pub(crate) fn check_exponent(exponent: f64) -> Result<()> {
    if !exponent.is_finite() || exponent < 1.0 {
        return Err(Error::InvalidExponent(exponent));
    }
    Ok(())
}

pub(crate) fn pow_cost(d: f64, exponent: f64) -> f64 {
    if exponent == 2.0 {
        d * d
    } else if exponent == 1.0 {
        d
    } else {
        d.powf(exponent)
    }
}

pub(crate) fn root_cost(c: f64, exponent: f64) -> f64 {
    if exponent == 2.0 {
        c.sqrt()
    } else if exponent == 1.0 {
        c
    } else {
        c.powf(exponent.recip())
    }
}

/// `(min_sigma sum_i d(p_i, q_sigma(i))^exponent)^(1/exponent)` for tuples of
/// equal size.
pub fn w2_tuples(
    ground: Ground<'_>,
    p: &UnorderedTuple,
    q: &UnorderedTuple,
    exponent: f64,
) -> Result<f64> {
    check_exponent(exponent)?;
    if p.len() != q.len() {
        return Err(Error::SizeMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    let n = p.len();
    let mut data = Vec::with_capacity(n * n);
    for a in p.points() {
        for b in q.points() {
            data.push(pow_cost(ground.distance(a, b)?, exponent));
        }
    }
    let a = assignment_solve(&CostMatrix::new(n, data)?);
    Ok(root_cost(a.total_cost, exponent))
}

/// The padded `(k1 + k2)`-square matrix of `delta^exponent` whose assignment
/// value is the partial-transport cost between `p` and `q`.
pub fn wb_cost_matrix(
    domain: &Domain,
    p: &UnorderedTuple,
    q: &UnorderedTuple,
    exponent: f64,
) -> Result<CostMatrix> {
    check_exponent(exponent)?;
    let (k1, k2) = (p.len(), q.len());
    let size = k1 + k2;
    let boundary = ShortcutPoint::Boundary;
    let rows: Vec<&ShortcutPoint> = p
        .points()
        .iter()
        .chain(std::iter::repeat_n(&boundary, k2))
        .collect();
    let cols: Vec<&ShortcutPoint> = q
        .points()
        .iter()
        .chain(std::iter::repeat_n(&boundary, k1))
        .collect();
    let mut data = Vec::with_capacity(size * size);
    for r in &rows {
        for c in &cols {
            data.push(pow_cost(domain.shortcut_distance(r, c)?, exponent));
        }
    }
    let row_labels = (0..size)
        .map(|i| if i < k1 { Label::Original(i) } else { Label::Padded })
        .collect();
    let col_labels = (0..size)
        .map(|j| if j < k2 { Label::Original(j) } else { Label::Padded })
        .collect();
    CostMatrix::with_labels(size, data, row_labels, col_labels)
}

/// Partial-transport distance between tuples of arbitrary sizes, computed as
/// an assignment over the completed domain.
pub fn wb_tuples(
    domain: &Domain,
    p: &UnorderedTuple,
    q: &UnorderedTuple,
    exponent: f64,
) -> Result<f64> {
    let (_, a) = wb_assignment(domain, p, q, exponent)?;
    Ok(root_cost(a.total_cost, exponent))
}

/// Like [`wb_tuples`] but also returns the matrix and optimal assignment.
pub fn wb_assignment(
    domain: &Domain,
    p: &UnorderedTuple,
    q: &UnorderedTuple,
    exponent: f64,
) -> Result<(CostMatrix, Assignment)> {
    let c = wb_cost_matrix(domain, p, q, exponent)?;
    let a = assignment_solve(&c);
    Ok((c, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interval() -> Domain {
        Domain::open_box(vec![0.0], vec![1.0]).unwrap()
    }

    fn tuple1(d: &Domain, xs: &[f64]) -> UnorderedTuple {
        UnorderedTuple::from_interior(d, xs.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    #[test]
    fn canonical_order() {
        let d = interval();
        let a = UnorderedTuple::new(
            &d,
            vec![
                ShortcutPoint::Boundary,
                ShortcutPoint::Interior(vec![0.7]),
                ShortcutPoint::Interior(vec![0.2]),
            ],
        )
        .unwrap();
        let b = UnorderedTuple::new(
            &d,
            vec![
                ShortcutPoint::Interior(vec![0.2]),
                ShortcutPoint::Boundary,
                ShortcutPoint::Interior(vec![0.7]),
            ],
        )
        .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.points()[2], ShortcutPoint::Boundary);
        assert!(UnorderedTuple::from_interior(&d, vec![vec![1.5]]).is_err());
    }

    #[test]
    fn w2_examples() {
        let d = interval();
        let p = tuple1(&d, &[0.2, 0.6]);
        assert_eq!(w2_tuples(Ground::Shortcut(&d), &p, &p, 2.0).unwrap(), 0.0);

        // identity pairing costs 0.25 + 0.25; the swap costs 2.25 + 0.25
        let p = UnorderedTuple::euclidean(vec![vec![0.0], vec![1.0]]).unwrap();
        let q = UnorderedTuple::euclidean(vec![vec![0.5], vec![1.5]]).unwrap();
        let got = w2_tuples(Ground::Euclidean, &p, &q, 2.0).unwrap();
        assert!((got - 0.5f64.sqrt()).abs() < 1e-15);

        let sq = Domain::open_box(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        let p = UnorderedTuple::from_interior(&sq, vec![vec![0.1, 0.5]]).unwrap();
        let q = UnorderedTuple::from_interior(&sq, vec![vec![0.9, 0.5]]).unwrap();
        let got = w2_tuples(Ground::Shortcut(&sq), &p, &q, 2.0).unwrap();
        assert!((got - 0.2).abs() < 1e-15);

        assert!(matches!(
            w2_tuples(Ground::Shortcut(&d), &tuple1(&d, &[0.1]), &UnorderedTuple::empty(), 2.0),
            Err(Error::SizeMismatch { .. })
        ));
        assert!(w2_tuples(Ground::Shortcut(&d), &p, &p, 0.5).is_err());
    }

    #[test]
    fn wb_examples() {
        let d = interval();
        let e = UnorderedTuple::empty();
        assert_eq!(wb_tuples(&d, &tuple1(&d, &[0.5]), &e, 2.0).unwrap(), 0.5);
        assert_eq!(wb_tuples(&d, &e, &e, 2.0).unwrap(), 0.0);
        let got = wb_tuples(&d, &tuple1(&d, &[0.1]), &tuple1(&d, &[0.9]), 2.0).unwrap();
        // both points to the boundary (0.1^2 + 0.1^2) beats the direct 0.8^2
        assert!((got - 0.02f64.sqrt()).abs() < 1e-12);
        let brute =
            crate::transport::wb_bruteforce(&d, &tuple1(&d, &[0.1]), &tuple1(&d, &[0.9]), 2.0).unwrap();
        assert!((got - brute).abs() < 1e-12);
        // frozen from the partial-matching enumeration: match 0.2<->0.5 (0.09),
        // send 0.8 to the boundary (0.04); total 0.13
        let got = wb_tuples(&d, &tuple1(&d, &[0.2, 0.8]), &tuple1(&d, &[0.5]), 2.0).unwrap();
        assert!((got - 0.13f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn padding() {
        let d = interval();
        let p = tuple1(&d, &[0.3, 0.4]);
        let padded = p.iota_pad(2).unwrap();
        assert_eq!(padded.len(), 4);
        assert_eq!(padded.boundary_count(), 2);
        assert_eq!(UnorderedTuple::empty().iota_pad(2).unwrap().boundary_count(), 4);
        assert!(matches!(p.iota_pad(1), Err(Error::TooManyPoints { size: 2, bound: 1 })));
    }

    #[test]
    fn matrix_labels() {
        let d = interval();
        let c = wb_cost_matrix(&d, &tuple1(&d, &[0.2, 0.8]), &tuple1(&d, &[0.5]), 2.0).unwrap();
        assert_eq!(c.size(), 3);
        assert_eq!(c.row_labels()[2], Label::Padded);
        assert_eq!(c.col_labels()[0], Label::Original(0));
        assert_eq!(c.get(2, 1), 0.0);
    }
}
