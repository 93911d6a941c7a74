//! The critical-point system in the unknowns `(c, z, z')` and the randomized
//! search that collects its solutions.

mod newton;
mod record;
mod search;
mod set;
mod system;

pub use newton::{newton_solve, NewtonFailure, NewtonOutcome, SearchConfig, CONDITION_LIMIT, DIVERGENCE_RADIUS};
pub use record::{conjugate, recheck_record, verify_solution, CriticalPointRecord, Rejection, RECORD_PARABOLIC_TOL};
pub use search::{search, search_from, SearchStats};
pub use set::{dedup_insert, is_duplicate, ResultSet};
pub use system::{evaluate, jacobian, residual, solve3, sup_norm, Matrix3, SystemState};
