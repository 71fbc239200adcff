use std::collections::{BTreeMap, BTreeSet};

use crate::domain::{euclidean, ShortcutPoint};
use crate::error::{Error, Result};
use crate::transport::{assignment_solve, Assignment, CostMatrix, UnorderedTuple};
use crate::whitney::{DyadicCube, WhitneyDecomposition};

use super::local::LocalMap;

/// Squared Euclidean Wasserstein distance between equal-size tuples of
/// vectors, with the optimal assignment (`sigma[i] = j` pairs `a_i` with `b_j`).
pub fn w2_sq_vectors(a: &[Vec<f64>], b: &[Vec<f64>]) -> Result<(f64, Assignment)> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let c = CostMatrix::from_fn(a.len(), |i, j| {
        let d = euclidean(&a[i], &b[j]);
        d * d
    })?;
    let s = assignment_solve(&c);
    Ok((s.total_cost, s))
}

/// A finitely supported element of the ell_2-sum of per-cube tuple spaces.
/// Absent cubes carry the all-zeros tuple.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseT {
    tuple_size: usize,
    entries: BTreeMap<DyadicCube, Vec<Vec<f64>>>,
}

impl SparseT {
    pub fn tuple_size(&self) -> usize {
        self.tuple_size
    }

    pub fn entries(&self) -> &BTreeMap<DyadicCube, Vec<Vec<f64>>> {
        &self.entries
    }

    pub fn support(&self) -> impl Iterator<Item = &DyadicCube> {
        self.entries.keys()
    }
}

/// Cubes whose localization map can be non-zero on some point of `p`.
pub(crate) fn candidate_cubes(
    w: &WhitneyDecomposition,
    points: &[ShortcutPoint],
) -> Result<BTreeSet<DyadicCube>> {
    let mut out = BTreeSet::new();
    for x in points.iter().filter_map(ShortcutPoint::coords) {
        let q = w.cube_containing(x)?;
        out.extend(w.neighbors(&q)?.iter().cloned());
    }
    Ok(out)
}

/// Sum over Whitney cubes of the per-cube pushforwards, keeping non-zero
/// entries only.
pub fn phi_star(w: &WhitneyDecomposition, p: &UnorderedTuple) -> Result<SparseT> {
    let mut entries = BTreeMap::new();
    for q in candidate_cubes(w, p.points())? {
        let image = LocalMap::new(&q).phi_star(p.points());
        if image.iter().any(|v| v.iter().any(|&c| c != 0.0)) {
            entries.insert(q, image);
        }
    }
    Ok(SparseT {
        tuple_size: p.len(),
        entries,
    })
}

/// Squared distance in the ell_2-sum together with each cube's contribution.
pub fn t_distance_terms(a: &SparseT, b: &SparseT) -> Result<BTreeMap<DyadicCube, f64>> {
    if a.tuple_size != b.tuple_size {
        return Err(Error::SizeMismatch {
            left: a.tuple_size,
            right: b.tuple_size,
        });
    }
    let keys: BTreeSet<&DyadicCube> = a.entries.keys().chain(b.entries.keys()).collect();
    let mut out = BTreeMap::new();
    for q in keys {
        let zeros = || vec![vec![0.0; q.dim() + 1]; a.tuple_size];
        let ta = a.entries.get(q).cloned().unwrap_or_else(zeros);
        let tb = b.entries.get(q).cloned().unwrap_or_else(zeros);
        out.insert(q.clone(), w2_sq_vectors(&ta, &tb)?.0);
    }
    Ok(out)
}

pub fn t_distance(a: &SparseT, b: &SparseT) -> Result<f64> {
    Ok(t_distance_terms(a, b)?.values().sum::<f64>().sqrt())
}
