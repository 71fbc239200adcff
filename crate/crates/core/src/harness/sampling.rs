use rand::Rng;

use crate::domain::{Domain, ShortcutPoint};
use crate::error::{Error, Result};
use crate::transport::{CouplingPair, DiscreteCoupling, Endpoint, UnorderedTuple};

/// Probability that a tuple slot holds the boundary point.
pub const BOUNDARY_PROBABILITY: f64 = 0.2;

const REJECTION_LIMIT: usize = 100_000;

/// Uniform point of the axis-aligned box `[lo, hi)`.
pub fn sample_in_box(rng: &mut impl Rng, lo: &[f64], hi: &[f64]) -> Vec<f64> {
    lo.iter().zip(hi).map(|(a, b)| a + (b - a) * rng.gen::<f64>()).collect()
}

/// Uniform point of the domain's sampling box, conditioned on the domain.
pub fn sample_point(rng: &mut impl Rng, domain: &Domain) -> Result<Vec<f64>> {
    let (lo, hi) = domain.sampling_box();
    for _ in 0..REJECTION_LIMIT {
        let x = sample_in_box(rng, &lo, &hi);
        if domain.contains(&x)? {
            return Ok(x);
        }
    }
    Err(Error::InvalidDomain("rejection sampling found no interior point".into()))
}

/// `slots` entries, each the boundary point with probability
/// [`BOUNDARY_PROBABILITY`] and otherwise a sampled interior point.
pub fn sample_tuple(rng: &mut impl Rng, domain: &Domain, slots: usize) -> Result<UnorderedTuple> {
    let mut pts = Vec::with_capacity(slots);
    for _ in 0..slots {
        if rng.gen_bool(BOUNDARY_PROBABILITY) {
            pts.push(ShortcutPoint::Boundary);
        } else {
            pts.push(ShortcutPoint::Interior(sample_point(rng, domain)?));
        }
    }
    UnorderedTuple::new(domain, pts)
}

/// Interior points only, with a uniformly drawn size in `0..=max_size`.
pub fn sample_interior_tuple(
    rng: &mut impl Rng,
    domain: &Domain,
    max_size: usize,
) -> Result<UnorderedTuple> {
    let k = rng.gen_range(0..=max_size);
    let pts = (0..k)
        .map(|_| sample_point(rng, domain))
        .collect::<Result<Vec<_>>>()?;
    UnorderedTuple::from_interior(domain, pts)
}

/// Ambient coupling whose endpoints are drawn from a box twice the size of
/// the sampling box, so that some of them fall outside the domain.
pub fn sample_ambient_coupling(
    rng: &mut impl Rng,
    domain: &Domain,
    pairs: usize,
) -> Result<DiscreteCoupling> {
    let (lo, hi) = domain.sampling_box();
    let (lo, hi): (Vec<f64>, Vec<f64>) = lo
        .iter()
        .zip(&hi)
        .map(|(a, b)| {
            let pad = (b - a) / 2.0;
            (a - pad, b + pad)
        })
        .unzip();
    let out = (0..pairs)
        .map(|_| CouplingPair {
            src: Endpoint::Point(sample_in_box(rng, &lo, &hi)),
            dst: Endpoint::Point(sample_in_box(rng, &lo, &hi)),
            mass: rng.gen_range(0.05..=1.0),
        })
        .collect();
    DiscreteCoupling::new(out)
}

/// Coupling over the completed domain: endpoints are interior points or,
/// with [`BOUNDARY_PROBABILITY`], the boundary point.
pub fn sample_shortcut_coupling(
    rng: &mut impl Rng,
    domain: &Domain,
    pairs: usize,
) -> Result<DiscreteCoupling> {
    fn end(rng: &mut impl Rng, domain: &Domain) -> Result<Endpoint> {
        Ok(if rng.gen_bool(BOUNDARY_PROBABILITY) {
            Endpoint::Boundary
        } else {
            Endpoint::Point(sample_point(rng, domain)?)
        })
    }
    let mut out = Vec::with_capacity(pairs);
    for _ in 0..pairs {
        out.push(CouplingPair {
            src: end(rng, domain)?,
            dst: end(rng, domain)?,
            mass: rng.gen_range(0.05..=1.0),
        });
    }
    DiscreteCoupling::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_stay_inside() {
        let d = Domain::upper_diagonal();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let x = sample_point(&mut rng, &d).unwrap();
            assert!(d.contains(&x).unwrap());
        }
        let t = sample_tuple(&mut rng, &d, 50).unwrap();
        assert_eq!(t.len(), 50);
        assert!(t.boundary_count() > 0);
    }

    #[test]
    fn seeded_runs_repeat() {
        let d = Domain::open_box(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        let a = sample_tuple(&mut ChaCha8Rng::seed_from_u64(9), &d, 6).unwrap();
        let b = sample_tuple(&mut ChaCha8Rng::seed_from_u64(9), &d, 6).unwrap();
        assert_eq!(a, b);
    }
}
