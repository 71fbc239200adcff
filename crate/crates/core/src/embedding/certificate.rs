//! Explicit reconstruction of the lower Lipschitz bound for the per-cube
//! embedding: for concrete tuples it builds every intermediate object of the
//! argument and checks each inequality numerically.

use crate::domain::{euclidean, ShortcutPoint};
use crate::error::{Error, Result};
use crate::transport::{w2_tuples, Ground, UnorderedTuple};
use crate::whitney::{DyadicCube, WhitneyDecomposition};

use super::local::LocalMap;
use super::sparse::{candidate_cubes, w2_sq_vectors};
use super::Constants;

const ISOMETRY_TOL: f64 = 1e-12;
const CHAIN_TOL: f64 = 1e-9;

/// What the checker derived for one cube in the joint support.
#[derive(Clone, Debug, PartialEq)]
pub struct CubeCertificate {
    pub cube: DyadicCube,
    /// Optimal pairing of the localized tuples, `sigma[k]` indexes `q`.
    pub sigma: Vec<usize>,
    /// `W_2^2` between the localized tuples.
    pub w2_sq: f64,
    /// Index of the first annulus free of points of `p` and `sigma q`.
    pub annulus: usize,
    /// Radius of the inflated cube: `annulus * l / (24 M)`.
    pub hat_radius: f64,
    /// Whether the cube satisfies the close-match threshold.
    pub close: bool,
    /// Indices `k` with `p_k` in the inflated cube.
    pub hat_indices: Vec<usize>,
}

/// The values chained together in the lower bound.
#[derive(Clone, Debug, PartialEq)]
pub struct InequalityChain {
    /// `sum_Q W_2^2` over all cubes.
    pub total: f64,
    pub sum_close: f64,
    pub sum_far: f64,
    /// `sum_{k in p^-1(E)} |p_k - q_tau(k)|^2`.
    pub euclid_on_e: f64,
    /// `sum_{k not in p^-1(E)} (d(p_k) + d(q_tau(k)))^2`, with `d(boundary) = 0`.
    pub boundary_part: f64,
    /// `sum_k delta(p_k, q_tau(k))^2`.
    pub tau_delta_sq: f64,
    /// `W_2^2(p, q)` over the shortcut metric.
    pub w2_delta_sq: f64,
    /// `c_2 * M^3`.
    pub c2_m3: f64,
}

impl InequalityChain {
    /// The certified lower bound `W_2^2 / (c_2 M^3)` for [`Self::total`].
    pub fn lower_bound(&self) -> f64 {
        self.w2_delta_sq / self.c2_m3
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LowerBoundCertificate {
    pub tuple_size: usize,
    pub cubes: Vec<CubeCertificate>,
    /// Close cubes with at least one point in their inflated cube, by
    /// decreasing side length.
    pub ordered_close: Vec<DyadicCube>,
    /// Indices of `p` landing in the region `E`.
    pub e_indices: Vec<usize>,
    /// A permutation of `0..M`.
    pub tau: Vec<usize>,
    pub chain: InequalityChain,
}

fn fail(step: &'static str, detail: String) -> Error {
    Error::Certificate { step, detail }
}

fn check_le(step: &'static str, lhs: f64, rhs: f64) -> Result<()> {
    if lhs <= rhs + CHAIN_TOL * lhs.abs().max(rhs.abs()) {
        Ok(())
    } else {
        Err(fail(step, format!("{lhs:e} > {rhs:e}")))
    }
}

/// Builds and checks the certificate for two tuples of equal size `M`.
pub fn lower_bound_certificate(
    w: &WhitneyDecomposition,
    consts: &Constants,
    p: &UnorderedTuple,
    q: &UnorderedTuple,
) -> Result<LowerBoundCertificate> {
    let big_m = p.len();
    if q.len() != big_m {
        return Err(Error::SizeMismatch {
            left: big_m,
            right: q.len(),
        });
    }
    let domain = w.domain();
    let (pp, qq) = (p.points(), q.points());
    let mut all = pp.to_vec();
    all.extend_from_slice(qq);
    let support = candidate_cubes(w, &all)?;

    let mf = big_m.max(1) as f64;
    let mut cubes = Vec::new();
    for cube in support {
        let map = LocalMap::new(&cube);
        let lp: Vec<Vec<f64>> = pp.iter().map(|a| map.lambda(a)).collect();
        let lq: Vec<Vec<f64>> = qq.iter().map(|a| map.lambda(a)).collect();
        let zero = |t: &[Vec<f64>]| t.iter().all(|v| v.iter().all(|&c| c == 0.0));
        if zero(&lp) && zero(&lq) {
            continue;
        }
        let (w2_sq, a) = w2_sq_vectors(&lp, &lq)?;
        let sigma = a.permutation;

        let l = cube.side();
        let width = l / (24.0 * mf);
        let dist = |z: &ShortcutPoint| z.coords().map(|x| map.dist_to_cube(x));
        let dp: Vec<Option<f64>> = pp.iter().map(dist).collect();
        let dq: Vec<Option<f64>> = qq.iter().map(dist).collect();
        let in_annulus = |d: &Option<f64>, r: usize| {
            d.is_some_and(|d| r as f64 * width < d && d <= (r + 1) as f64 * width)
        };
        let annulus = (0..=2 * big_m)
            .find(|&r| !dp.iter().chain(&dq).any(|d| in_annulus(d, r)))
            .ok_or_else(|| fail("empty_annulus", format!("no empty annulus around {cube}")))?;
        let hat_radius = annulus as f64 * width;
        let in_hat = |d: &Option<f64>| d.is_some_and(|d| d <= hat_radius);

        let close = w2_sq.sqrt() < consts.c1 * l / mf;
        let hat_indices: Vec<usize> = (0..big_m).filter(|&k| in_hat(&dp[k])).collect();
        if close {
            let matched: Vec<usize> = (0..big_m).filter(|&k| in_hat(&dq[sigma[k]])).collect();
            if matched != hat_indices {
                return Err(fail(
                    "annulus_bijection",
                    format!("{cube}: p-indices {hat_indices:?}, matched q-indices {matched:?}"),
                ));
            }
            for &k in &hat_indices {
                let (x, y) = (pp[k].coords().unwrap(), qq[sigma[k]].coords().unwrap());
                let direct = euclidean(x, y);
                let local = euclidean(&lp[k], &lq[sigma[k]]);
                if (direct - local).abs() > ISOMETRY_TOL {
                    return Err(fail(
                        "inner_isometry",
                        format!("{cube}: index {k}: {direct:e} vs {local:e}"),
                    ));
                }
            }
        }
        cubes.push(CubeCertificate {
            cube,
            sigma,
            w2_sq,
            annulus,
            hat_radius,
            close,
            hat_indices,
        });
    }

    // Close cubes that capture a point, largest first.
    let mut order: Vec<&CubeCertificate> = cubes
        .iter()
        .filter(|c| c.close && !c.hat_indices.is_empty())
        .collect();
    order.sort_by(|a, b| b.cube.side().total_cmp(&a.cube.side()).then(a.cube.cmp(&b.cube)));

    let hat_of = |c: &CubeCertificate, z: &ShortcutPoint| {
        z.coords()
            .is_some_and(|x| LocalMap::new(&c.cube).dist_to_cube(x) <= c.hat_radius)
    };
    let mut tau: Vec<Option<usize>> = vec![None; big_m];
    let mut used = vec![false; big_m];
    for (i, c) in order.iter().enumerate() {
        let earlier = &order[..i];
        for k in 0..big_m {
            if tau[k].is_some() || !hat_of(c, &pp[k]) || earlier.iter().any(|e| hat_of(e, &pp[k])) {
                continue;
            }
            let j = c.sigma[k];
            if !hat_of(c, &qq[j]) || earlier.iter().any(|e| hat_of(e, &qq[j])) || used[j] {
                return Err(fail(
                    "partition",
                    format!("{}: index {k} maps to {j} outside its piece", c.cube),
                ));
            }
            tau[k] = Some(j);
            used[j] = true;
        }
    }
    let e_indices: Vec<usize> = (0..big_m).filter(|&k| tau[k].is_some()).collect();
    let q_in_e: Vec<usize> = (0..big_m)
        .filter(|&j| order.iter().any(|c| hat_of(c, &qq[j])))
        .collect();
    let mut image: Vec<usize> = e_indices.iter().map(|&k| tau[k].unwrap()).collect();
    image.sort_unstable();
    if image != q_in_e {
        return Err(fail(
            "tau_image",
            format!("image {image:?} differs from q^-1(E) = {q_in_e:?}"),
        ));
    }
    let mut free = (0..big_m).filter(|&j| !used[j]);
    let tau: Vec<usize> = tau
        .into_iter()
        .map(|t| t.unwrap_or_else(|| free.next().expect("counts agree")))
        .collect();

    let sum_close: f64 = cubes.iter().filter(|c| c.close).map(|c| c.w2_sq).sum();
    let sum_far: f64 = cubes.iter().filter(|c| !c.close).map(|c| c.w2_sq).sum();
    let total = sum_close + sum_far;
    let in_e: Vec<bool> = (0..big_m).map(|k| e_indices.binary_search(&k).is_ok()).collect();
    let mut euclid_on_e = 0.0;
    let mut boundary_part = 0.0;
    let mut tau_delta_sq = 0.0;
    let d = |z: &ShortcutPoint| match z {
        ShortcutPoint::Interior(x) => domain.dist_to_complement(x),
        ShortcutPoint::Boundary => Ok(0.0),
    };
    for k in 0..big_m {
        let (a, b) = (&pp[k], &qq[tau[k]]);
        if in_e[k] {
            let e = euclidean(a.coords().unwrap(), b.coords().unwrap());
            euclid_on_e += e * e;
        } else {
            let s = d(a)? + d(b)?;
            boundary_part += s * s;
        }
        let s = domain.shortcut_distance(a, b)?;
        tau_delta_sq += s * s;
    }
    let w2 = w2_tuples(Ground::Shortcut(domain), p, q, 2.0)?;
    let chain = InequalityChain {
        total,
        sum_close,
        sum_far,
        euclid_on_e,
        boundary_part,
        tau_delta_sq,
        w2_delta_sq: w2 * w2,
        c2_m3: consts.c2 * mf.powi(3),
    };
    check_le("euclidean_bound", chain.euclid_on_e, chain.sum_close)?;
    check_le("boundary_bound", chain.boundary_part, chain.c2_m3 * chain.sum_far)?;
    check_le("shortcut_bound", chain.tau_delta_sq, chain.euclid_on_e + chain.boundary_part)?;
    check_le("optimality", chain.w2_delta_sq, chain.tau_delta_sq)?;
    check_le("lower_bound", chain.lower_bound(), chain.total)?;

    Ok(LowerBoundCertificate {
        tuple_size: big_m,
        ordered_close: order.iter().map(|c| c.cube.clone()).collect(),
        cubes,
        e_indices,
        tau,
        chain,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Domain;

    fn setup() -> (Domain, WhitneyDecomposition, Constants) {
        let d = Domain::open_box(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        (d.clone(), WhitneyDecomposition::new(d), Constants::for_dim(2))
    }

    #[test]
    fn identical_tuples() {
        let (d, w, c) = setup();
        let p = UnorderedTuple::from_interior(&d, vec![vec![0.3, 0.4], vec![0.7, 0.2]])
            .unwrap()
            .with_boundary(2);
        let cert = lower_bound_certificate(&w, &c, &p, &p).unwrap();
        assert_eq!(cert.chain.total, 0.0);
        assert_eq!(cert.chain.w2_delta_sq, 0.0);
        assert_eq!(cert.chain.tau_delta_sq, 0.0);
        let mut t = cert.tau.clone();
        t.sort_unstable();
        assert_eq!(t, vec![0, 1, 2, 3]);
    }

    #[test]
    fn perturbation_inside_one_cube() {
        let (d, w, c) = setup();
        let x = vec![0.375, 0.375];
        let home = w.cube_containing(&x).unwrap();
        let mut y = home.center();
        y[0] += 1e-4;
        let p = UnorderedTuple::from_interior(&d, vec![home.center()]).unwrap();
        let q = UnorderedTuple::from_interior(&d, vec![y]).unwrap();
        let cert = lower_bound_certificate(&w, &c, &p, &q).unwrap();
        assert!(cert.ordered_close.contains(&home));
        assert_eq!(cert.e_indices, vec![0]);
        assert_eq!(cert.tau, vec![0]);
        assert!((cert.chain.euclid_on_e - 1e-8).abs() < 1e-18);
        assert!(cert.chain.sum_close >= cert.chain.euclid_on_e);
    }

    #[test]
    fn size_mismatch() {
        let (d, w, c) = setup();
        let p = UnorderedTuple::from_interior(&d, vec![vec![0.3, 0.4]]).unwrap();
        assert!(lower_bound_certificate(&w, &c, &p, &p.with_boundary(1)).is_err());
    }
}
