use thiserror::Error;

use super::system::{evaluate, residual, solve3, sup_norm, Matrix3, SystemState};
use crate::periodic::RootConfig;
use crate::ComplexValue;
use crate::Error;

/// Jacobians whose row-scaled condition number exceeds this are rejected.
pub const CONDITION_LIMIT: f64 = 1e12;
/// Iterates with `|c|` beyond this are abandoned.
pub const DIVERGENCE_RADIUS: f64 = 100.0;
const MAX_HALVINGS: usize = 8;

/// Tunables of the critical-point search.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    /// Newton stops once `sup |F| < tol (1 + |c| + |z|)`.
    pub tol: f64,
    pub max_newton_iters: usize,
    /// Number of random parameters `c` that may be sampled.
    pub budget: usize,
    pub seed: u64,
    /// Distance below which two solutions are the same critical point.
    pub dedup_delta: f64,
    /// `c` is drawn uniformly from the disc of this radius.
    pub sample_radius: f64,
    /// Parameter samples processed per parallel batch. Results depend on it,
    /// not on the thread count.
    pub batch_size: usize,
    pub roots: RootConfig,
}

impl SearchConfig {
    /// Defaults for period `n`, with a budget of `10000 n` samples.
    pub fn for_period(n: usize) -> Self {
        Self {
            tol: 1e-10,
            max_newton_iters: 50,
            budget: 10_000 * n.max(1),
            seed: 0,
            dedup_delta: 1e-6,
            sample_radius: 2.0,
            batch_size: 16,
            roots: RootConfig::default(),
        }
    }

    pub fn validate(&self) -> crate::Result<()> {
        if !(self.tol > 0.0) || self.max_newton_iters == 0 || self.budget == 0 || self.batch_size == 0 {
            return Err(Error::Domain("need tol > 0, max_newton_iters >= 1, budget >= 1 and batch_size >= 1".into()));
        }
        if !(self.dedup_delta > 0.0) || !(self.sample_radius > 0.0) {
            return Err(Error::Domain("dedup_delta and sample_radius must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum NewtonFailure {
    #[error("no convergence")]
    NoConvergence,
    #[error("singular or ill-conditioned Jacobian")]
    SingularJacobian,
    #[error("iterate left the disc |c| <= 100")]
    Divergence,
    #[error("non-finite values while evaluating the system")]
    Overflow,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOutcome {
    pub state: SystemState,
    pub iterations: usize,
    pub residual: f64,
}

/// Newton's method on the three-equation system, with step halving when a
/// full step increases the residual sup-norm.
// One extra full step once inside tolerance; kept only if it does not hurt.
fn polish(s: SystemState, r: f64, jac: &Matrix3, f: &[ComplexValue; 3], iterations: usize, n: usize) -> NewtonOutcome {
    let keep = NewtonOutcome { state: s, iterations, residual: r };
    let Some((delta, _)) = solve3(jac, f) else { return keep };
    let next = SystemState { c: s.c - delta[0], z: s.z - delta[1], zp: s.zp - delta[2] };
    match residual(&next, n) {
        Ok(g) if next.is_finite() && sup_norm(&g) <= r => {
            NewtonOutcome { state: next, iterations: iterations + 1, residual: sup_norm(&g) }
        }
        _ => keep,
    }
}

pub fn newton_solve(s0: SystemState, n: usize, cfg: &SearchConfig) -> Result<NewtonOutcome, NewtonFailure> {
    if !s0.is_finite() {
        return Err(NewtonFailure::Overflow);
    }
    let mut s = s0;
    for iterations in 0..=cfg.max_newton_iters {
        let (f, jac) = evaluate(&s, n).map_err(|_| NewtonFailure::Overflow)?;
        let r = sup_norm(&f);
        if r < cfg.tol * s.scale() {
            return Ok(polish(s, r, &jac, &f, iterations, n));
        }
        if iterations == cfg.max_newton_iters {
            break;
        }
        let (delta, cond) = solve3(&jac, &f).ok_or(NewtonFailure::SingularJacobian)?;
        if !(cond <= CONDITION_LIMIT) {
            return Err(NewtonFailure::SingularJacobian);
        }
        let mut t = 1.0;
        let mut next = s;
        for _ in 0..=MAX_HALVINGS {
            next = SystemState { c: s.c - t * delta[0], z: s.z - t * delta[1], zp: s.zp - t * delta[2] };
            match residual(&next, n) {
                Ok(g) if sup_norm(&g) < r => break,
                _ => t *= 0.5,
            }
        }
        if !next.is_finite() {
            return Err(NewtonFailure::Overflow);
        }
        if next.c.norm() > DIVERGENCE_RADIUS {
            return Err(NewtonFailure::Divergence);
        }
        s = next;
    }
    Err(NewtonFailure::NoConvergence)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::z_prime;
    use std::f64::consts::PI;

    #[test]
    fn exact_solution_converges_immediately() {
        let c = ComplexValue::new(0.0, 0.0);
        let z = ComplexValue::from_polar(1.0, 2.0 * PI / 9.0);
        let zp = z_prime(c, z, 6).unwrap();
        let out = newton_solve(SystemState::new(c, z, zp), 6, &SearchConfig::for_period(6)).unwrap();
        assert!(out.iterations <= 2);
        assert!(out.state.c.norm() < 1e-12);
    }

    #[test]
    fn far_start_fails_cleanly() {
        let cfg = SearchConfig::for_period(5);
        for (c, z, zp) in [(50.0, 30.0, -10.0), (1e3, 1e3, 1e3), (90.0, -0.1, 1e5)] {
            let s = SystemState::new(ComplexValue::new(c, 1.0), ComplexValue::new(z, 0.5), ComplexValue::new(zp, 0.0));
            if let Ok(out) = newton_solve(s, 5, &cfg) {
                assert!(out.state.is_finite());
            }
        }
        let nan = SystemState::new(
            ComplexValue::new(f64::NAN, 0.0),
            ComplexValue::new(0.0, 0.0),
            ComplexValue::new(0.0, 0.0),
        );
        assert_eq!(newton_solve(nan, 3, &cfg), Err(NewtonFailure::Overflow));
    }

    #[test]
    fn config_validation() {
        let mut cfg = SearchConfig::for_period(3);
        assert!(cfg.validate().is_ok());
        assert_eq!(cfg.budget, 30_000);
        cfg.tol = 0.0;
        assert!(cfg.validate().is_err());
    }
}
