use crate::domain::{euclidean, Domain};
use crate::error::{Error, Result};

use super::tuple::{check_exponent, pow_cost, root_cost, UnorderedTuple};

/// Largest `k1 + k2` accepted by [`wb_bruteforce`].
pub const BRUTE_FORCE_LIMIT: usize = 12;

/// Partial-transport distance by exhaustive enumeration of partial
/// injections from the points of `p` to the points of `q`.
///
/// Matched pairs pay the Euclidean distance, unmatched points pay their
/// distance to the complement. Neither the shortcut metric nor padding is
/// involved, which keeps this independent of [`super::wb_tuples`]. Copies of
/// the boundary point carry no mass and are ignored.
pub fn wb_bruteforce(
    domain: &Domain,
    p: &UnorderedTuple,
    q: &UnorderedTuple,
    exponent: f64,
) -> Result<f64> {
    check_exponent(exponent)?;
    let total = p.len() + q.len();
    if total > BRUTE_FORCE_LIMIT {
        return Err(Error::BudgetExceeded {
            total,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let ps: Vec<&[f64]> = p.interior().collect();
    let qs: Vec<&[f64]> = q.interior().collect();
    let p_out = ps
        .iter()
        .map(|x| domain.interior_dist(x).map(|d| pow_cost(d, exponent)))
        .collect::<Result<Vec<_>>>()?;
    let q_out = qs
        .iter()
        .map(|y| domain.interior_dist(y).map(|d| pow_cost(d, exponent)))
        .collect::<Result<Vec<_>>>()?;
    let pair: Vec<Vec<f64>> = ps
        .iter()
        .map(|x| qs.iter().map(|y| pow_cost(euclidean(x, y), exponent)).collect())
        .collect();

    struct Search<'a> {
        pair: &'a [Vec<f64>],
        p_out: &'a [f64],
        q_out: &'a [f64],
        best: f64,
    }

    impl Search<'_> {
        fn go(&mut self, i: usize, used: u32, acc: f64) {
            if i == self.p_out.len() {
                let rest: f64 = (0..self.q_out.len())
                    .filter(|j| used & (1 << j) == 0)
                    .map(|j| self.q_out[j])
                    .sum();
                self.best = self.best.min(acc + rest);
                return;
            }
            self.go(i + 1, used, acc + self.p_out[i]);
            for j in 0..self.q_out.len() {
                if used & (1 << j) == 0 {
                    self.go(i + 1, used | (1 << j), acc + self.pair[i][j]);
                }
            }
        }
    }

    let mut s = Search {
        pair: &pair,
        p_out: &p_out,
        q_out: &q_out,
        best: f64::INFINITY,
    };
    s.go(0, 0, 0.0);
    Ok(root_cost(s.best, exponent))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::ShortcutPoint;

    fn interval() -> Domain {
        Domain::open_box(vec![0.0], vec![1.0]).unwrap()
    }

    fn tuple1(d: &Domain, xs: &[f64]) -> UnorderedTuple {
        UnorderedTuple::from_interior(d, xs.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    #[test]
    fn examples() {
        let d = interval();
        let p = tuple1(&d, &[0.2, 0.8]);
        assert_eq!(wb_bruteforce(&d, &p, &p, 2.0).unwrap(), 0.0);
        let got = wb_bruteforce(&d, &p, &tuple1(&d, &[0.5]), 2.0).unwrap();
        assert!((got - 0.13f64.sqrt()).abs() < 1e-12);
        let got = wb_bruteforce(&d, &tuple1(&d, &[0.5]), &UnorderedTuple::empty(), 1.0).unwrap();
        assert_eq!(got, 0.5);
    }

    #[test]
    fn boundary_entries_ignored() {
        let d = interval();
        let p = tuple1(&d, &[0.3]);
        let q = tuple1(&d, &[0.4]);
        let a = wb_bruteforce(&d, &p, &q, 2.0).unwrap();
        let b = wb_bruteforce(&d, &p.with_boundary(3), &q.with_boundary(1), 2.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn budget() {
        let d = interval();
        let xs: Vec<f64> = (1..=7).map(|i| i as f64 / 8.0).collect();
        let p = tuple1(&d, &xs);
        assert!(matches!(
            wb_bruteforce(&d, &p, &p, 2.0),
            Err(Error::BudgetExceeded { total: 14, .. })
        ));
        let bad = UnorderedTuple::new(
            &Domain::open_box(vec![0.0], vec![2.0]).unwrap(),
            vec![ShortcutPoint::Interior(vec![1.5])],
        )
        .unwrap();
        assert!(wb_bruteforce(&d, &bad, &UnorderedTuple::empty(), 2.0).is_err());
    }
}
