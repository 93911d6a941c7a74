//! Arithmetic kernel: forward jet propagation along orbits of `p_c` and the
//! exact combinatorics of periodic points.

mod counting;
mod jet;

pub use counting::{euler_phi, n_pi, nu, upper_bound, CountingTable, MAX_COUNTING_PERIOD};
pub use jet::{dlambda_dc_jet, dlambda_dc_product, iterate, multiplier, orbit_jet, z_prime, Jet3, PARABOLIC_TOL};
