//! Equidistant configurations in the shortcut metric: `N` points that sit
//! `eps / 2` from the complement and at least `eps` apart, so every pair is at
//! shortcut distance exactly `eps`.

use crate::domain::{euclidean, Domain, DomainKind, ShortcutPoint};
use crate::error::{Error, Result};

const BISECTION_STEPS: usize = 200;
const TARGET_TOL: f64 = 1e-12;
const DELTA_TOL: f64 = 1e-9;

/// Exterior point, sphere radius and the points on the sphere.
fn anchors(domain: &Domain, count: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = domain.dim();
    if n < 2 {
        return Err(Error::Witness("the construction needs dimension at least 2".into()));
    }
    if count == 0 {
        return Err(Error::Witness("at least one point is required".into()));
    }
    let spread = |lo: f64, hi: f64, i: usize| {
        if count == 1 {
            (lo + hi) / 2.0
        } else {
            lo + (hi - lo) * i as f64 / (count - 1) as f64
        }
    };
    let on_circle = |x: &[f64], r: f64, theta: f64| {
        let mut y = x.to_vec();
        y[0] += r * theta.cos();
        y[1] += r * theta.sin();
        y
    };
    match domain.kind() {
        DomainKind::OpenBox { low, high } => {
            let w0 = high[0] - low[0];
            let h1 = high[1] - low[1];
            let mut x: Vec<f64> = low.iter().zip(high).map(|(a, b)| (a + b) / 2.0).collect();
            x[0] = low[0] - w0;
            let r = 1.5 * w0;
            let tmax = 0.9 * ((h1 / 2.0 / r).min(1.0).asin()).min((2.0f64 / 3.0).acos());
            let ys = (0..count).map(|i| on_circle(&x, r, spread(-tmax, tmax, i))).collect();
            Ok((x, ys))
        }
        DomainKind::UpperDiagonal => {
            let x = vec![1.0, -1.0];
            let c = 0.75 * std::f64::consts::PI;
            let half = std::f64::consts::PI / 6.0;
            let ys = (0..count).map(|i| on_circle(&x, 3.0, spread(c - half, c + half, i))).collect();
            Ok((x, ys))
        }
        DomainKind::ComplementBox { low, high } => {
            let x: Vec<f64> = low.iter().zip(high).map(|(a, b)| (a + b) / 2.0).collect();
            let r = euclidean(low, high);
            let step = std::f64::consts::TAU / count as f64;
            let ys = (0..count).map(|i| on_circle(&x, r, step * i as f64)).collect();
            Ok((x, ys))
        }
        DomainKind::Punctured { .. } => Err(Error::Witness(
            "the complement of the closure is empty for a punctured space".into(),
        )),
    }
}

/// Largest `t` in `[0, 1]` keeping `y + t (x - y)` inside, with `y` inside
/// and `x` outside.
fn exit_parameter(domain: &Domain, y: &[f64], x: &[f64]) -> Result<f64> {
    let at = |t: f64| -> Vec<f64> { y.iter().zip(x).map(|(a, b)| a + t * (b - a)).collect() };
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if domain.contains(&at(mid))? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Point on the segment from `y` towards `x` with distance `target` to the
/// complement.
fn point_at_distance(domain: &Domain, y: &[f64], x: &[f64], target: f64) -> Result<Vec<f64>> {
    let at = |t: f64| -> Vec<f64> { y.iter().zip(x).map(|(a, b)| a + t * (b - a)).collect() };
    if domain.dist_to_complement(y)? <= target {
        return Err(Error::Witness(format!(
            "epsilon too large: anchor {y:?} is within {target} of the complement"
        )));
    }
    let (mut lo, mut hi) = (0.0, exit_parameter(domain, y, x)?);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if domain.dist_to_complement(&at(mid))? > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo == 0.0 {
            break;
        }
    }
    let z = at(lo);
    let d = domain.dist_to_complement(&z)?;
    if (d - target).abs() > TARGET_TOL {
        return Err(Error::Witness(format!(
            "bisection did not converge: distance {d} for target {target}"
        )));
    }
    Ok(z)
}

/// `count` points of the domain at pairwise shortcut distance `eps`.
pub fn nondoubling_witness(domain: &Domain, count: usize, eps: f64) -> Result<Vec<Vec<f64>>> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::Witness(format!("epsilon must be positive, got {eps}")));
    }
    let (x, ys) = anchors(domain, count)?;
    let zs = ys
        .iter()
        .map(|y| point_at_distance(domain, y, &x, eps / 2.0))
        .collect::<Result<Vec<_>>>()?;
    for i in 0..zs.len() {
        for j in i + 1..zs.len() {
            if euclidean(&zs[i], &zs[j]) < eps {
                return Err(Error::Witness(format!(
                    "epsilon too large: points {i} and {j} are closer than {eps}"
                )));
            }
            let d = domain.shortcut_distance(
                &ShortcutPoint::Interior(zs[i].clone()),
                &ShortcutPoint::Interior(zs[j].clone()),
            )?;
            if (d - eps).abs() > DELTA_TOL {
                return Err(Error::Witness(format!(
                    "points {i} and {j} are at shortcut distance {d}, not {eps}"
                )));
            }
        }
    }
    Ok(zs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_three_points() {
        let d = Domain::open_box(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        let zs = nondoubling_witness(&d, 3, 0.01).unwrap();
        assert_eq!(zs.len(), 3);
        for z in &zs {
            assert!((d.dist_to_complement(z).unwrap() - 0.005).abs() <= 1e-12);
        }
    }

    #[test]
    fn other_domains() {
        assert_eq!(nondoubling_witness(&Domain::upper_diagonal(), 12, 0.02).unwrap().len(), 12);
        let c = Domain::complement_box(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        assert_eq!(nondoubling_witness(&c, 8, 0.05).unwrap().len(), 8);
    }

    #[test]
    fn rejections() {
        let d = Domain::open_box(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        assert!(matches!(nondoubling_witness(&d, 20, 0.5), Err(Error::Witness(_))));
        assert!(nondoubling_witness(&d, 3, 0.0).is_err());
        let line = Domain::open_box(vec![0.0], vec![1.0]).unwrap();
        assert!(nondoubling_witness(&line, 3, 0.01).is_err());
        let p = Domain::punctured(vec![vec![0.0, 0.0]]).unwrap();
        assert!(nondoubling_witness(&p, 3, 0.01).is_err());
    }
}
