//! Exact counts of periodic points and of critical points of the multiplier.
//!
//! All arithmetic is in `u128`, which holds `2^n` for every supported period.

use crate::{Error, Result};

/// Largest period accepted by the counting functions.
pub const MAX_COUNTING_PERIOD: u32 = 64;

fn check_period(n: u32) -> Result<()> {
    if n == 0 || n > MAX_COUNTING_PERIOD {
        return Err(Error::Domain(format!("period must be in 1..={MAX_COUNTING_PERIOD}, got {n}")));
    }
    Ok(())
}

fn proper_divisors(n: u32) -> impl Iterator<Item = u32> {
    (1..n).filter(move |m| n.is_multiple_of(*m))
}

/// `nu(1..=n_max)`, built bottom-up from `nu(n) = 2^n - sum_{m | n, m < n} nu(m)`.
fn nu_table(n_max: u32) -> Vec<u128> {
    let mut table: Vec<u128> = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let lower: u128 = proper_divisors(n).map(|m| table[m as usize - 1]).sum();
        table.push((1u128 << n) - lower);
    }
    table
}

/// Number of points of exact period `n` of `z^2 + c` for generic `c`.
pub fn nu(n: u32) -> Result<u128> {
    check_period(n)?;
    Ok(nu_table(n)[n as usize - 1])
}

/// Euler's totient.
pub fn euler_phi(r: u64) -> Result<u64> {
    if r == 0 {
        return Err(Error::Domain("euler_phi(0) is undefined".into()));
    }
    let mut rest = r;
    let mut phi = r;
    let mut p = 2u64;
    while p.saturating_mul(p) <= rest {
        if rest.is_multiple_of(p) {
            while rest.is_multiple_of(p) {
                rest /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if rest > 1 {
        phi -= phi / rest;
    }
    Ok(phi)
}

/// `sum_{n = r p, p < n} nu(p) * phi(r)`.
fn divisor_sum(n: u32, table: &[u128]) -> Result<u128> {
    let mut sum = 0u128;
    for p in proper_divisors(n) {
        let r = n / p;
        sum += table[p as usize - 1] * euler_phi(r as u64)? as u128;
    }
    Ok(sum)
}

fn exact_half(x: u128, what: &str) -> Result<u128> {
    if !x.is_multiple_of(2) {
        return Err(Error::Invariant(format!("{what} = {x} is odd")));
    }
    Ok(x / 2)
}

/// Number of critical points of the projection `(c, O) -> c` on the
/// period-`n` curve: `deg lambda_n - sum_{n = r p, p < n} deg lambda_p * phi(r)`
/// with `deg lambda_k = nu(k) / 2`.
pub fn n_pi(n: u32) -> Result<u128> {
    check_period(n)?;
    let table = nu_table(n);
    let deg_lambda = exact_half(table[n as usize - 1], "nu(n)")?;
    let mut sum = 0u128;
    for p in proper_divisors(n) {
        let deg_p = exact_half(table[p as usize - 1], "nu(p)")?;
        sum += deg_p * euler_phi((n / p) as u64)? as u128;
    }
    deg_lambda.checked_sub(sum).ok_or_else(|| Error::Invariant(format!("negative N_pi for n = {n}")))
}

/// Upper bound on the number of critical points of the multiplier map
/// `lambda_n`: `nu(n) - nu(n)/n - (1/2) sum_{n = r p, p < n} nu(p) phi(r)`.
pub fn upper_bound(n: u32) -> Result<u128> {
    check_period(n)?;
    let table = nu_table(n);
    let nu_n = table[n as usize - 1];
    if !nu_n.is_multiple_of(n as u128) {
        return Err(Error::Invariant(format!("nu({n}) = {nu_n} is not divisible by {n}")));
    }
    let orbits = nu_n / n as u128;
    let half_sum = exact_half(divisor_sum(n, &table)?, "divisor sum")?;
    nu_n.checked_sub(orbits)
        .and_then(|x| x.checked_sub(half_sum))
        .ok_or_else(|| Error::Invariant(format!("negative bound for n = {n}")))
}

/// `nu` and `phi` tabulated for `1..=n_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountingTable {
    pub n_max: u32,
    pub nu: Vec<u128>,
    pub phi: Vec<u64>,
}

impl CountingTable {
    pub fn new(n_max: u32) -> Result<Self> {
        check_period(n_max)?;
        let phi = (1..=n_max as u64).map(euler_phi).collect::<Result<Vec<_>>>()?;
        Ok(Self { n_max, nu: nu_table(n_max), phi })
    }

    pub fn nu(&self, m: u32) -> u128 {
        self.nu[m as usize - 1]
    }
}
