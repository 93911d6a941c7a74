//! Order-3 forward jets of `p_c^n(z)` in the two variables `(z, c)`.

use crate::{is_finite, ComplexValue, Error, Result};

/// Threshold on `|1 - lambda|` below which the implicit branch `z(c)` is
/// treated as unavailable.
pub const PARABOLIC_TOL: f64 = 1e-9;

/// Value of `p_c^k` at `(c, z)` together with every partial derivative in
/// `(z, c)` of total order at most three.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet3 {
    pub v: ComplexValue,
    pub d_z: ComplexValue,
    pub d_c: ComplexValue,
    pub d_zz: ComplexValue,
    pub d_zc: ComplexValue,
    pub d_cc: ComplexValue,
    pub d_zzz: ComplexValue,
    pub d_zzc: ComplexValue,
    pub d_zcc: ComplexValue,
    pub d_ccc: ComplexValue,
}

impl Jet3 {
    /// The jet of `(c, z) -> z`.
    pub fn identity(z: ComplexValue) -> Self {
        let zero = ComplexValue::new(0.0, 0.0);
        Self {
            v: z,
            d_z: ComplexValue::new(1.0, 0.0),
            d_c: zero,
            d_zz: zero,
            d_zc: zero,
            d_cc: zero,
            d_zzz: zero,
            d_zzc: zero,
            d_zcc: zero,
            d_ccc: zero,
        }
    }

    /// Composes with one more application of `w -> w^2 + c`.
    #[inline]
    pub fn step(&self, c: ComplexValue) -> Self {
        let Self { v, d_z, d_c, d_zz, d_zc, d_cc, d_zzz, d_zzc, d_zcc, d_ccc } = *self;
        Self {
            v: v * v + c,
            d_z: 2.0 * v * d_z,
            d_c: 2.0 * v * d_c + 1.0,
            d_zz: 2.0 * (d_z * d_z + v * d_zz),
            d_zc: 2.0 * (d_z * d_c + v * d_zc),
            d_cc: 2.0 * (d_c * d_c + v * d_cc),
            d_zzz: 2.0 * (3.0 * d_z * d_zz + v * d_zzz),
            d_zzc: 2.0 * (d_zz * d_c + 2.0 * d_zc * d_z + v * d_zzc),
            d_zcc: 2.0 * (d_cc * d_z + 2.0 * d_zc * d_c + v * d_zcc),
            d_ccc: 2.0 * (3.0 * d_cc * d_c + v * d_ccc),
        }
    }

    pub fn entries(&self) -> [ComplexValue; 10] {
        [self.v, self.d_z, self.d_c, self.d_zz, self.d_zc, self.d_cc, self.d_zzz, self.d_zzc, self.d_zcc, self.d_ccc]
    }

    fn is_finite(&self) -> bool {
        self.entries().iter().all(|&e| is_finite(e))
    }
}

fn check_inputs(c: ComplexValue, z: ComplexValue, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("period must be positive".into()));
    }
    if !is_finite(c) || !is_finite(z) {
        return Err(Error::Domain(format!("non-finite input c = {c}, z = {z}")));
    }
    Ok(())
}

/// The order-3 jet of `p_c^n` at `(c, z)`.
pub fn orbit_jet(c: ComplexValue, z: ComplexValue, n: usize) -> Result<Jet3> {
    check_inputs(c, z, n)?;
    let mut jet = Jet3::identity(z);
    for step in 1..=n {
        jet = jet.step(c);
        if !jet.is_finite() {
            return Err(Error::Overflow { step });
        }
    }
    Ok(jet)
}

/// `p_c^m(z)`.
pub fn iterate(c: ComplexValue, z: ComplexValue, m: usize) -> ComplexValue {
    (0..m).fold(z, |w, _| w * w + c)
}

/// `2^n` times the product of the orbit points `z, p_c(z), ..., p_c^{n-1}(z)`.
///
/// This is `d/dz p_c^n(z)` for any `z`; on a period-`n` cycle it is the
/// multiplier of the cycle.
pub fn multiplier(c: ComplexValue, z: ComplexValue, n: usize) -> Result<ComplexValue> {
    check_inputs(c, z, n)?;
    let mut w = z;
    let mut prod = ComplexValue::new(1.0, 0.0);
    for step in 1..=n {
        prod *= 2.0 * w;
        w = w * w + c;
        if !is_finite(prod) || !is_finite(w) {
            return Err(Error::Overflow { step });
        }
    }
    Ok(prod)
}

/// Derivative `z'(c)` of the periodic point along the implicit branch through
/// `(c, z)`: `d_c p^n / (1 - d_z p^n)`.
pub fn z_prime(c: ComplexValue, z: ComplexValue, n: usize) -> Result<ComplexValue> {
    let jet = orbit_jet(c, z, n)?;
    let denom = 1.0 - jet.d_z;
    if denom.norm() < PARABOLIC_TOL {
        return Err(Error::ParabolicChart { lambda: jet.d_z, tol: PARABOLIC_TOL });
    }
    Ok(jet.d_c / denom)
}

/// `d lambda / dc` by the product rule over the orbit.
///
/// With `w_k = p_c^k(z)` and total derivatives `u_0 = z'`,
/// `u_{k+1} = 2 w_k u_k + 1`, the derivative of `2^n w_0 ... w_{n-1}` is
/// `2^n sum_i u_i prod_{j != i} w_j`.
pub fn dlambda_dc_product(c: ComplexValue, z: ComplexValue, zp: ComplexValue, n: usize) -> Result<ComplexValue> {
    check_inputs(c, z, n)?;
    if !is_finite(zp) {
        return Err(Error::Domain(format!("non-finite z' = {zp}")));
    }
    let mut w = Vec::with_capacity(n);
    let mut u = Vec::with_capacity(n);
    let (mut wk, mut uk) = (z, zp);
    for step in 1..=n {
        w.push(wk);
        u.push(uk);
        uk = 2.0 * wk * uk + 1.0;
        wk = wk * wk + c;
        if !is_finite(wk) || !is_finite(uk) {
            return Err(Error::Overflow { step });
        }
    }
    // suffix[i] = prod_{j >= i} w_j
    let one = ComplexValue::new(1.0, 0.0);
    let mut suffix = vec![one; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1] * w[i];
    }
    let mut prefix = one;
    let mut sum = ComplexValue::new(0.0, 0.0);
    for i in 0..n {
        sum += u[i] * prefix * suffix[i + 1];
        prefix *= w[i];
    }
    let out = sum * 2f64.powi(n as i32);
    if !is_finite(out) {
        return Err(Error::Overflow { step: n });
    }
    Ok(out)
}

/// `d lambda / dc` by the chain rule on `lambda(c) = d_z p^n(c, z(c))`:
/// `d_zz z' + d_zc`.
pub fn dlambda_dc_jet(c: ComplexValue, z: ComplexValue, zp: ComplexValue, n: usize) -> Result<ComplexValue> {
    let jet = orbit_jet(c, z, n)?;
    let out = jet.d_zz * zp + jet.d_zc;
    if !is_finite(out) {
        return Err(Error::Overflow { step: n });
    }
    Ok(out)
}
