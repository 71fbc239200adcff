//! Square assignment problems solved with the Hungarian method (shortest
//! augmenting paths with dual potentials, `O(n^3)`).

use crate::error::{Error, Result};

/// Where a row or column of a padded cost matrix came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Label {
    Original(usize),
    Padded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CostMatrix {
    size: usize,
    data: Vec<f64>,
    row_labels: Vec<Label>,
    col_labels: Vec<Label>,
}

impl CostMatrix {
    /// Builds a matrix from row-major entries. Entries must be finite and
    /// non-negative.
    pub fn new(size: usize, data: Vec<f64>) -> Result<Self> {
        let labels = (0..size).map(Label::Original).collect::<Vec<_>>();
        Self::with_labels(size, data, labels.clone(), labels)
    }

    pub fn with_labels(
        size: usize,
        data: Vec<f64>,
        row_labels: Vec<Label>,
        col_labels: Vec<Label>,
    ) -> Result<Self> {
        if data.len() != size * size {
            return Err(Error::InvalidCostMatrix(format!(
                "expected {} entries for a {size}x{size} matrix, got {}",
                size * size,
                data.len()
            )));
        }
        if row_labels.len() != size || col_labels.len() != size {
            return Err(Error::InvalidCostMatrix("label count mismatch".into()));
        }
        if let Some(bad) = data.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidCostMatrix(format!("entry {bad} is negative or non-finite")));
        }
        Ok(Self {
            size,
            data,
            row_labels,
            col_labels,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let size = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != size) {
            return Err(Error::InvalidCostMatrix(format!(
                "matrix is not square: row of length {} in a {size}-row matrix",
                r.len()
            )));
        }
        Self::new(size, rows.concat())
    }

    /// Builds the matrix `cost(i, j)` for `i, j < size`.
    pub fn from_fn(size: usize, mut cost: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                data.push(cost(i, j));
            }
        }
        Self::new(size, data)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.size + col]
    }

    pub fn row_labels(&self) -> &[Label] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[Label] {
        &self.col_labels
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Assignment {
    /// `permutation[row] = column`.
    pub permutation: Vec<usize>,
    /// Sum of the selected original entries.
    pub total_cost: f64,
}

/// Minimum-cost perfect matching of a square cost matrix.
///
/// Rows are inserted in index order and every scan keeps the first strict
/// minimum, so the output is a deterministic function of the matrix.
pub fn assignment_solve(c: &CostMatrix) -> Assignment {
    let n = c.size;
    if n == 0 {
        return Assignment {
            permutation: Vec::new(),
            total_cost: 0.0,
        };
    }
    // 1-based with a virtual column 0, following the classic formulation.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut minv = vec![0.0f64; n + 1];
    let mut used = vec![false; n + 1];

    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0usize;
        minv.iter_mut().for_each(|m| *m = f64::INFINITY);
        used.iter_mut().for_each(|b| *b = false);
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = c.get(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            debug_assert!(j1 != 0, "finite costs always leave a free column");
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut permutation = vec![0usize; n];
    for j in 1..=n {
        permutation[owner[j] - 1] = j - 1;
    }
    let total_cost = permutation
        .iter()
        .enumerate()
        .map(|(i, &j)| c.get(i, j))
        .sum();
    Assignment {
        permutation,
        total_cost,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Exhaustive minimum over all permutations (Heap's algorithm).
    fn brute_force(c: &CostMatrix) -> f64 {
        let n = c.size();
        let mut perm: Vec<usize> = (0..n).collect();
        let cost = |p: &[usize]| p.iter().enumerate().map(|(i, &j)| c.get(i, j)).sum::<f64>();
        let mut best = cost(&perm);
        let mut stack = vec![0usize; n];
        let mut i = 1;
        while i < n {
            if stack[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(stack[i], i);
                }
                best = best.min(cost(&perm));
                stack[i] += 1;
                i = 1;
            } else {
                stack[i] = 0;
                i += 1;
            }
        }
        best
    }

    #[test]
    fn small_examples() {
        let c = CostMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let a = assignment_solve(&c);
        assert_eq!(a.permutation, vec![0, 1]);
        assert_eq!(a.total_cost, 0.0);

        let c = CostMatrix::from_rows(&[vec![5.0]]).unwrap();
        let a = assignment_solve(&c);
        assert_eq!(a.permutation, vec![0]);
        assert_eq!(a.total_cost, 5.0);

        let a = assignment_solve(&CostMatrix::new(0, vec![]).unwrap());
        assert!(a.permutation.is_empty());
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(CostMatrix::from_rows(&[vec![1.0, 2.0], vec![1.0]]).is_err());
        assert!(CostMatrix::from_rows(&[vec![-1.0]]).is_err());
        assert!(CostMatrix::from_rows(&[vec![f64::NAN]]).is_err());
        assert!(CostMatrix::new(2, vec![1.0; 3]).is_err());
    }

    #[test]
    fn matches_exhaustive_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for size in 1..=7 {
            for _ in 0..40 {
                let c = CostMatrix::from_fn(size, |_, _| rng.gen_range(0.0..10.0)).unwrap();
                let a = assignment_solve(&c);
                let mut seen = a.permutation.clone();
                seen.sort_unstable();
                assert_eq!(seen, (0..size).collect::<Vec<_>>());
                let bf = brute_force(&c);
                assert!((a.total_cost - bf).abs() < 1e-9, "{} vs {bf}", a.total_cost);
            }
        }
    }

    #[test]
    fn integer_ties_are_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let c = CostMatrix::from_fn(6, |_, _| rng.gen_range(0..3) as f64).unwrap();
            let a = assignment_solve(&c);
            assert_eq!(a, assignment_solve(&c));
            assert_eq!(a.total_cost, brute_force(&c));
        }
    }
}
