use serde::{Deserialize, Serialize};

use crate::dynamics::{orbit_jet, Jet3};
use crate::periodic::Guess;
use crate::{is_finite, ComplexValue, Error, Result};

pub type Matrix3 = [[ComplexValue; 3]; 3];

/// The three unknowns of the critical-point system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemState {
    pub c: ComplexValue,
    pub z: ComplexValue,
    pub zp: ComplexValue,
}

impl SystemState {
    pub fn new(c: ComplexValue, z: ComplexValue, zp: ComplexValue) -> Self {
        Self { c, z, zp }
    }

    pub fn is_finite(&self) -> bool {
        is_finite(self.c) && is_finite(self.z) && is_finite(self.zp)
    }

    /// `1 + |c| + |z|`, the scale of the convergence test.
    pub fn scale(&self) -> f64 {
        1.0 + self.c.norm() + self.z.norm()
    }

    pub fn conj(&self) -> Self {
        Self { c: self.c.conj(), z: self.z.conj(), zp: self.zp.conj() }
    }
}

impl From<Guess> for SystemState {
    fn from(g: Guess) -> Self {
        Self { c: g.c, z: g.z, zp: g.zp }
    }
}

pub fn sup_norm(f: &[ComplexValue; 3]) -> f64 {
    f.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

fn jet_at(s: &SystemState, n: usize) -> Result<Jet3> {
    if !s.is_finite() {
        return Err(Error::Domain(format!("non-finite state {s:?}")));
    }
    orbit_jet(s.c, s.z, n)
}

fn residual_from(s: &SystemState, j: &Jet3) -> [ComplexValue; 3] {
    [j.v - s.z, s.zp * (1.0 - j.d_z) - j.d_c, j.d_zz * s.zp + j.d_zc]
}

fn jacobian_from(s: &SystemState, j: &Jet3) -> Matrix3 {
    let zero = ComplexValue::new(0.0, 0.0);
    let zp = s.zp;
    [
        [j.d_c, j.d_z - 1.0, zero],
        [-(zp * j.d_zc + j.d_cc), -(zp * j.d_zz + j.d_zc), 1.0 - j.d_z],
        [j.d_zcc + zp * j.d_zzc, j.d_zzc + zp * j.d_zzz, j.d_zz],
    ]
}

fn check_finite(xs: impl IntoIterator<Item = ComplexValue>, n: usize) -> Result<()> {
    if xs.into_iter().all(is_finite) {
        Ok(())
    } else {
        Err(Error::Overflow { step: n })
    }
}

/// `(F1, F2, F3)`: the periodicity equation, the cleared branch-derivative
/// equation `z' (1 - d_z p^n) - d_c p^n`, and `d lambda / dc`.
pub fn residual(s: &SystemState, n: usize) -> Result<[ComplexValue; 3]> {
    let j = jet_at(s, n)?;
    let f = residual_from(s, &j);
    check_finite(f, n)?;
    Ok(f)
}

/// Analytic partials of the residual with respect to `(c, z, z')`; row `i`
/// holds `dF_i`.
pub fn jacobian(s: &SystemState, n: usize) -> Result<Matrix3> {
    let j = jet_at(s, n)?;
    let m = jacobian_from(s, &j);
    check_finite(m.iter().flatten().copied(), n)?;
    Ok(m)
}

/// Residual and Jacobian from a single jet evaluation.
pub fn evaluate(s: &SystemState, n: usize) -> Result<([ComplexValue; 3], Matrix3)> {
    let j = jet_at(s, n)?;
    let f = residual_from(s, &j);
    let m = jacobian_from(s, &j);
    check_finite(f.iter().chain(m.iter().flatten()).copied(), n)?;
    Ok((f, m))
}

fn inverse3(m: &Matrix3) -> Option<Matrix3> {
    let cof = |r0: usize, r1: usize, c0: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    let adj = [
        [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
        [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
        [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
    ];
    let det = m[0][0] * adj[0][0] + m[0][1] * adj[1][0] + m[0][2] * adj[2][0];
    if det.norm() == 0.0 || !is_finite(det) {
        return None;
    }
    let mut inv = adj;
    for row in inv.iter_mut() {
        for x in row.iter_mut() {
            *x /= det;
        }
    }
    Some(inv)
}

fn inf_norm(m: &Matrix3) -> f64 {
    m.iter().map(|row| row.iter().map(|x| x.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// Solves `m x = b` after scaling every row of `m` to unit max-modulus.
///
/// Returns the solution and the infinity-norm condition number of the
/// row-scaled matrix; `None` if the matrix is singular.
pub fn solve3(m: &Matrix3, b: &[ComplexValue; 3]) -> Option<([ComplexValue; 3], f64)> {
    let mut a = *m;
    let mut rhs = *b;
    for (row, r) in a.iter_mut().zip(rhs.iter_mut()) {
        let s = row.iter().map(|x| x.norm()).fold(0.0, f64::max);
        if s == 0.0 || !s.is_finite() {
            return None;
        }
        for x in row.iter_mut() {
            *x /= s;
        }
        *r /= s;
    }
    let inv = inverse3(&a)?;
    let cond = inf_norm(&a) * inf_norm(&inv);
    // Gaussian elimination with partial pivoting for the solve itself
    let mut aug = [[ComplexValue::new(0.0, 0.0); 4]; 3];
    for i in 0..3 {
        aug[i][..3].copy_from_slice(&a[i]);
        aug[i][3] = rhs[i];
    }
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| aug[i][col].norm().total_cmp(&aug[j][col].norm()))?;
        aug.swap(col, pivot);
        let p = aug[col][col];
        if p.norm() == 0.0 {
            return None;
        }
        for row in col + 1..3 {
            let f = aug[row][col] / p;
            for k in col..4 {
                let t = aug[col][k];
                aug[row][k] -= f * t;
            }
        }
    }
    let mut x = [ComplexValue::new(0.0, 0.0); 3];
    for i in (0..3).rev() {
        let mut acc = aug[i][3];
        for k in i + 1..3 {
            acc -= aug[i][k] * x[k];
        }
        x[i] = acc / aug[i][i];
    }
    x.iter().all(|&v| is_finite(v)).then_some((x, cond))
}
