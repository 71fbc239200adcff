//! Localization on Whitney cubes and the Hilbert-space embedding of tuples.

mod certificate;
mod local;
mod sparse;
mod xi;

pub use certificate::{lower_bound_certificate, CubeCertificate, InequalityChain, LowerBoundCertificate};
pub use local::LocalMap;
pub use sparse::{phi_star, t_distance, t_distance_terms, w2_sq_vectors, SparseT};
pub use xi::{almgren_xi, zeta, DirectionFamily, SparseEmbeddingVector};

/// Dimension-dependent constants of the two-sided estimate
/// `W_2^2 / (c2 M^3) <= |phi* p - phi* q|^2 <= c0 W_2^2`.
///
/// Fields are public so that experiments can run with deliberately wrong
/// values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constants {
    pub dim: usize,
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl Constants {
    pub fn for_dim(n: usize) -> Self {
        let nf = n as f64;
        let c0 = 2.0 * 81.0 * 12f64.powi(n as i32) * (nf + 1.0);
        let c1 = (48.0 * nf.sqrt()).recip();
        let c2 = 4.0 * 25.0 * nf / (c1 * c1);
        Self {
            dim: n,
            c0,
            c1,
            c2,
            c3: c0.max(c2),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_in_the_plane() {
        let c = Constants::for_dim(2);
        assert_eq!(c.c0, 2.0 * 81.0 * 144.0 * 3.0);
        assert!((c.c2 - 100.0 * 2.0 * 48.0 * 48.0 * 2.0).abs() < 1e-6);
        assert_eq!(c.c3, c.c0.max(c.c2));
        assert!(c.c1 < 1.0 && c.c0 >= 1.0 && c.c2 >= 1.0);
    }
}
