//! Critical points of the multiplier map of periodic orbits in the quadratic
//! family `p_c(z) = z^2 + c`.
//!
//! The crate is layered bottom-up:
//!
//! * [`dynamics`]: order-3 jets of `p_c^n`, multiplier derivatives and the
//!   exact counting formulas (`nu`, Euler's totient, the critical-point bound).
//! * [`periodic`]: all `2^n` periodic points for a fixed `c`, minimal periods
//!   and orbit grouping, producing initial guesses for the solver.
//! * [`solver`]: the three-equation Newton system in `(c, z, z')`, solution
//!   verification, the conjugation-closed result set and the randomized search.
//! * [`analysis`]: Mandelbrot membership, summary statistics and the exact
//!   analysis of the critical points sitting at `c = 0`.
//! * [`io`]: JSON/CSV documents, document verification, SVG plots and the
//!   command implementations used by the `multcrit` binary.

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod io;
pub mod periodic;
pub mod solver;

pub use error::{Error, Result};

/// A point of the complex plane: parameters `c`, orbit points `z`, `z'`,
/// multipliers and residuals all share this type.
pub type ComplexValue = num_complex::Complex64;

/// `|a - b| / max(1, |a|, |b|)`.
pub fn rel_err(a: ComplexValue, b: ComplexValue) -> f64 {
    (a - b).norm() / 1f64.max(a.norm()).max(b.norm())
}

pub(crate) fn is_finite(z: ComplexValue) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
