use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::newton::{newton_solve, SearchConfig};
use super::system::{residual, sup_norm, SystemState};
use crate::analysis::mandelbrot_member;
use crate::dynamics::{multiplier, z_prime};
use crate::periodic::{minimal_period, Orbit};
use crate::ComplexValue;

/// Solutions whose multiplier is this close to 1 are rejected as parabolic.
pub const RECORD_PARABOLIC_TOL: f64 = 1e-6;

/// A verified critical point of the period-`n` multiplier map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalPointRecord {
    pub period: usize,
    pub c: ComplexValue,
    pub z: ComplexValue,
    pub zp: ComplexValue,
    pub lambda: ComplexValue,
    pub lambda_abs: f64,
    /// Sup-norm of the three residuals at `(c, z, zp)`.
    pub residual: f64,
    pub orbit: Orbit,
    pub inside_mandelbrot: bool,
    pub is_real: bool,
    /// Index of the conjugate record in its result set.
    pub conjugate_partner: Option<usize>,
}

impl CriticalPointRecord {
    pub fn state(&self) -> SystemState {
        SystemState::new(self.c, self.z, self.zp)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum Rejection {
    #[error("minimal period is {found:?}, not {expected}")]
    WrongPeriod { expected: usize, found: Option<usize> },
    #[error("multiplier is within 1e-6 of 1")]
    Parabolic,
    #[error("residual exceeds tolerance")]
    ResidualTooLarge,
    #[error("stored orbit does not match the orbit of z")]
    OrbitMismatch,
}

fn build(s: &SystemState, n: usize, cfg: &SearchConfig) -> Result<CriticalPointRecord, Rejection> {
    let f = residual(s, n).map_err(|_| Rejection::ResidualTooLarge)?;
    let res = sup_norm(&f);
    if !(res <= cfg.tol * s.scale()) {
        return Err(Rejection::ResidualTooLarge);
    }
    match minimal_period(s.c, s.z, n) {
        Ok(m) if m == n => {}
        Ok(m) => return Err(Rejection::WrongPeriod { expected: n, found: Some(m) }),
        Err(_) => return Err(Rejection::WrongPeriod { expected: n, found: None }),
    }
    let lambda = multiplier(s.c, s.z, n).map_err(|_| Rejection::ResidualTooLarge)?;
    if (lambda - 1.0).norm() <= RECORD_PARABOLIC_TOL {
        return Err(Rejection::Parabolic);
    }
    Ok(CriticalPointRecord {
        period: n,
        c: s.c,
        z: s.z,
        zp: s.zp,
        lambda,
        lambda_abs: lambda.norm(),
        residual: res,
        orbit: Orbit::from_point(s.c, s.z, n),
        inside_mandelbrot: mandelbrot_member(s.c, crate::analysis::DEFAULT_MAX_ITER).inside,
        is_real: s.c.im.abs() < cfg.dedup_delta,
        conjugate_partner: None,
    })
}

/// Checks a converged state and turns it into a record anchored at the
/// orbit representative.
///
/// The state is moved to the representative of its cycle, `z'` is recomputed
/// there and the result is re-polished by Newton before the final checks.
pub fn verify_solution(s: &SystemState, n: usize, cfg: &SearchConfig) -> Result<CriticalPointRecord, Rejection> {
    let record = build(s, n, cfg)?;
    let rep = record.orbit.representative;
    if rep == s.z {
        return Ok(record);
    }
    let zp = z_prime(s.c, rep, n).map_err(|_| Rejection::Parabolic)?;
    let moved = newton_solve(SystemState::new(s.c, rep, zp), n, cfg).map_err(|_| Rejection::ResidualTooLarge)?;
    let canonical = build(&moved.state, n, cfg)?;
    // polishing at a different cycle point must not land on another cycle
    if canonical.orbit.representative == moved.state.z {
        Ok(canonical)
    } else {
        Ok(record)
    }
}

/// The mirror image of a record under complex conjugation.
pub fn conjugate(r: &CriticalPointRecord) -> CriticalPointRecord {
    CriticalPointRecord {
        period: r.period,
        c: r.c.conj(),
        z: r.z.conj(),
        zp: r.zp.conj(),
        lambda: r.lambda.conj(),
        lambda_abs: r.lambda_abs,
        residual: r.residual,
        orbit: r.orbit.conj(),
        inside_mandelbrot: r.inside_mandelbrot,
        is_real: r.is_real,
        conjugate_partner: None,
    }
}

/// Re-runs the acceptance checks on a stored record without moving it.
pub fn recheck_record(r: &CriticalPointRecord, cfg: &SearchConfig) -> Result<(), Rejection> {
    let fresh = build(&r.state(), r.period, cfg)?;
    if r.orbit.period != r.period
        || r.orbit.points.len() != r.period
        || fresh.orbit.distance(&r.orbit) > cfg.dedup_delta
    {
        return Err(Rejection::OrbitMismatch);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::periodic::{find_all_roots, group_into_orbits, RootConfig};
    use std::f64::consts::PI;

    fn cx(re: f64, im: f64) -> ComplexValue {
        ComplexValue::new(re, im)
    }

    /// Critical point of lambda_3 from the elimination oracle
    /// Q(c, l) = 64c^3 + 128c^2 - 8cl + 64c + l^2 - 16l + 64, Q = Q_c = 0.
    fn period_three_state() -> SystemState {
        let c = cx(-11.0 / 9.0, 5f64.sqrt() / 9.0);
        let roots = find_all_roots(c, 3, &RootConfig::default()).unwrap();
        let orbits = group_into_orbits(c, &roots, 3).unwrap();
        let best = orbits
            .iter()
            .map(|o| {
                let zp = z_prime(c, o.representative, 3).unwrap();
                let d = crate::dynamics::dlambda_dc_jet(c, o.representative, zp, 3).unwrap();
                (SystemState::new(c, o.representative, zp), d.norm())
            })
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        assert!(best.1 < 1e-12, "oracle point is not critical: {}", best.1);
        best.0
    }

    #[test]
    fn c_zero_period_six_accepted_as_real() {
        let z = ComplexValue::from_polar(1.0, 2.0 * PI / 9.0);
        let zp = z_prime(cx(0.0, 0.0), z, 6).unwrap();
        let r = verify_solution(&SystemState::new(cx(0.0, 0.0), z, zp), 6, &SearchConfig::for_period(6)).unwrap();
        assert!(r.is_real);
        assert!(r.inside_mandelbrot);
        assert_eq!(r.z, r.orbit.representative);
        assert!(r.c.norm() < 1e-12);
        let again = residual(&r.state(), 6).unwrap();
        assert!(sup_norm(&again) < 1e-10 * r.state().scale());
    }

    #[test]
    fn lower_period_root_rejected() {
        // at c = -1, the superattracting 2-cycle solves the period-4 system:
        // lambda_4 = lambda_2^2 has vanishing derivative where lambda_2 = 0
        let (c, z) = (cx(-1.0, 0.0), cx(0.0, 0.0));
        let zp = z_prime(c, z, 4).unwrap();
        let s = SystemState::new(c, z, zp);
        assert!(sup_norm(&residual(&s, 4).unwrap()) < 1e-12);
        assert_eq!(
            verify_solution(&s, 4, &SearchConfig::for_period(4)),
            Err(Rejection::WrongPeriod { expected: 4, found: Some(2) })
        );
    }

    #[test]
    fn off_solution_state_rejected() {
        let s = period_three_state();
        let bad = SystemState { c: s.c + 1e-3, ..s };
        assert_eq!(verify_solution(&bad, 3, &SearchConfig::for_period(3)), Err(Rejection::ResidualTooLarge));
    }

    #[test]
    fn newton_recovers_oracle_points() {
        let cfg = SearchConfig::for_period(3);
        let exact = period_three_state();
        for target in [exact, exact.conj()] {
            for (dc, dz, dzp) in [(1e-3, 0.0, 0.0), (0.0, -1e-3, 0.0), (7e-4, 7e-4, -7e-4)] {
                let start =
                    SystemState { c: target.c + cx(dc, -dc), z: target.z + cx(dz, 0.0), zp: target.zp + cx(0.0, dzp) };
                let out = newton_solve(start, 3, &cfg).unwrap();
                assert!((out.state.c - target.c).norm() < 1e-9);
                let rec = verify_solution(&out.state, 3, &cfg).unwrap();
                assert!((rec.lambda_abs - 7.383665655927178).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn conjugation_is_an_involution() {
        let cfg = SearchConfig::for_period(3);
        let r = verify_solution(&period_three_state(), 3, &cfg).unwrap();
        let back = conjugate(&conjugate(&r));
        assert_eq!(back, r);
        let m = conjugate(&r);
        assert_eq!(m.c, r.c.conj());
        assert_eq!(m.orbit.representative, m.orbit.points[0]);
        let f = sup_norm(&residual(&m.state(), 3).unwrap());
        assert!((f - r.residual).abs() < 1e-14);
        assert!(recheck_record(&m, &cfg).is_ok());
    }

    #[test]
    fn recheck_detects_perturbation() {
        let cfg = SearchConfig::for_period(3);
        let mut r = verify_solution(&period_three_state(), 3, &cfg).unwrap();
        assert!(recheck_record(&r, &cfg).is_ok());
        r.z += 1e-3;
        assert!(recheck_record(&r, &cfg).is_err());
    }
}
