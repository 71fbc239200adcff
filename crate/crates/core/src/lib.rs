//! Partial optimal transport between unordered point tuples on open domains
//! of `R^n`, and a bi-Lipschitz embedding of those tuples into a sparse
//! Hilbert-space vector.
//!
//! The pipeline:
//!
//! 1. [`domain`]: the open set, its complement-distance oracles and the
//!    shortcut metric `delta(x, y) = min(|x - y|, d(x) + d(y))` on the domain
//!    completed by one boundary point.
//! 2. [`transport`]: the partial-transport distance between tuples of
//!    different sizes, computed as an assignment after padding with the
//!    boundary point, plus a brute-force oracle and the coupling transforms
//!    that prove the two agree.
//! 3. [`whitney`]: a lazily evaluated dyadic Whitney decomposition.
//! 4. [`embedding`]: localization maps per Whitney cube, the ell_2-sum of
//!    per-cube Wasserstein spaces, sorted-projection sketches, and a checker
//!    that reconstructs the lower-bound argument for concrete inputs.
//! 5. [`harness`]: file formats, sampling, experiments and the invariant
//!    suites behind the `wbembed` command line tool.

pub mod domain;
pub mod embedding;
pub mod error;
pub mod harness;
pub mod transport;
pub mod whitney;

pub use domain::{Domain, DomainKind, ShortcutPoint};
pub use error::{Error, Result};
pub use transport::{wb_bruteforce, wb_tuples, UnorderedTuple};
pub use whitney::{DyadicCube, WhitneyDecomposition};
