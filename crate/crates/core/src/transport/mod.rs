//! Wasserstein distances between unordered tuples and the partial-transport
//! distance obtained by padding with the boundary point.

mod assignment;
mod bruteforce;
mod coupling;
mod tuple;

pub use assignment::{assignment_solve, Assignment, CostMatrix, Label};
pub use bruteforce::{wb_bruteforce, BRUTE_FORCE_LIMIT};
pub use coupling::{
    coupling_from_shortcut, coupling_to_shortcut, CouplingPair, DiscreteCoupling, Endpoint,
};
pub use tuple::{
    w2_tuples, wb_assignment, wb_cost_matrix, wb_tuples, Ground, UnorderedTuple,
};
