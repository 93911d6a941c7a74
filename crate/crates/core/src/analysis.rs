//! Post-processing of result sets and the exact analysis of `c = 0`.
//!
//! At `c = 0` the periodic points of `z^2` on the unit circle are
//! `exp(2 pi i k / (2^n - 1))`; doubling the angle rotates the `n`-bit binary
//! word of `k`, so each cycle is a binary necklace and its smallest angle is
//! the Lyndon word of that necklace.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::solver::ResultSet;
use crate::{ComplexValue, Error, Result};

pub const DEFAULT_MAX_ITER: usize = 5000;
/// Largest period handled by the `c = 0` analysis.
pub const MAX_C0_PERIOD: usize = 30;
/// Default zero threshold of [`c0_scan`], applied to `|d lambda/dc| / 2^n`.
pub const C0_TOL: f64 = 1e-9;
/// Angles with `tol <= |d lambda/dc| / 2^n < MARGINAL_FACTOR * tol` are reported
/// as marginal instead of critical.
pub const MARGINAL_FACTOR: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MandelbrotVerdict {
    pub inside: bool,
    pub iterations_used: usize,
}

/// Escape-time membership test: iterates `z -> z^2 + c` from 0 and reports
/// `inside = false` at the first `|z| > 2`.
pub fn mandelbrot_member(c: ComplexValue, max_iter: usize) -> MandelbrotVerdict {
    let mut z = ComplexValue::new(0.0, 0.0);
    for i in 1..=max_iter {
        z = z * z + c;
        if z.norm_sqr() > 4.0 {
            return MandelbrotVerdict { inside: false, iterations_used: i };
        }
    }
    MandelbrotVerdict { inside: true, iterations_used: max_iter }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `num / den` in lowest terms, standing for the point `exp(2 pi i num/den)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RationalAngle {
    pub num: u64,
    pub den: u64,
}

impl RationalAngle {
    /// Reduces `num / den`; `den` must be odd and positive, `num < den`.
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || den.is_multiple_of(2) || num >= den {
            return Err(Error::Domain(format!("{num}/{den} is not a reduced angle with odd denominator")));
        }
        let g = gcd(num, den);
        Ok(Self { num: num / g, den: den / g })
    }

    pub fn point(&self) -> ComplexValue {
        ComplexValue::from_polar(1.0, 2.0 * PI * self.num as f64 / self.den as f64)
    }

    /// Length of the orbit under `a -> 2a mod 1`.
    pub fn doubling_period(&self) -> usize {
        if self.den == 1 {
            return 1;
        }
        let mut k = 1;
        let mut x = 2 % self.den;
        while x != 1 {
            x = x * 2 % self.den;
            k += 1;
        }
        k
    }
}

impl fmt::Display for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Binary Lyndon words of length exactly `n`, as integers with the first
/// letter in the most significant bit, in increasing order.
struct LyndonWords {
    n: usize,
    word: Vec<u8>,
    done: bool,
}

impl LyndonWords {
    fn new(n: usize) -> Self {
        Self { n, word: Vec::with_capacity(n), done: n == 0 }
    }
}

impl Iterator for LyndonWords {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        // Fredricksen-Kessler-Maiorana: each visited prefix is a Lyndon word
        while !self.done {
            if self.word.is_empty() {
                self.word.push(0);
            } else {
                let m = self.word.len();
                while self.word.len() < self.n {
                    let letter = self.word[self.word.len() - m];
                    self.word.push(letter);
                }
                while self.word.last() == Some(&1) {
                    self.word.pop();
                }
                match self.word.last_mut() {
                    Some(last) => *last = 1,
                    None => {
                        self.done = true;
                        return None;
                    }
                }
            }
            if self.word.len() == self.n {
                return Some(self.word.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64));
            }
        }
        None
    }
}

/// Numerators `k` of the smallest angle `k / (2^n - 1)` of every cycle of
/// exact period `n` of the doubling map.
fn necklace_minima(n: usize) -> impl Iterator<Item = u64> {
    let modulus = (1u64 << n) - 1;
    LyndonWords::new(n).filter(move |&k| k < modulus.max(1))
}

fn check_c0_period(n: usize) -> Result<()> {
    if n == 0 || n > MAX_C0_PERIOD {
        return Err(Error::Domain(format!("c = 0 analysis supports 1 <= n <= {MAX_C0_PERIOD}, got {n}")));
    }
    Ok(())
}

/// The smallest angle of each period-`n` cycle of `z^2` on the unit circle.
///
/// For `n >= 2` there are `nu(n) / n` of them; for `n = 1` only the angle 0
/// (the fixed point 1), since the other fixed point 0 is not on the circle.
pub fn c0_periodic_angles(n: usize) -> Result<Vec<RationalAngle>> {
    check_c0_period(n)?;
    let modulus = (1u64 << n) - 1;
    necklace_minima(n).map(|k| RationalAngle::new(k, modulus.max(1))).collect()
}

/// `d lambda_n / dc` at `c = 0` and `z_0 = exp(2 pi i a)`:
/// `-2^n sum_{j=0}^{n-1} z_0^{-2^{j+1}}`, with every exponent reduced exactly
/// modulo the denominator.
pub fn c0_derivative(n: usize, a: RationalAngle) -> ComplexValue {
    let den = a.den as u128;
    let mut pow = 2u128 % den;
    let mut sum = ComplexValue::new(0.0, 0.0);
    for _ in 0..n {
        let e = (a.num as u128 * pow) % den;
        sum += ComplexValue::from_polar(1.0, -2.0 * PI * e as f64 / den as f64);
        pow = pow * 2 % den;
    }
    -sum * 2f64.powi(n as i32)
}

/// `exp(-2 pi i r / (2^n - 1))` for `r < 2^n` from two half-width tables.
struct UnitTable {
    shift: usize,
    low: Vec<ComplexValue>,
    high: Vec<ComplexValue>,
}

impl UnitTable {
    fn new(n: usize) -> Self {
        let modulus = ((1u64 << n) - 1).max(1) as f64;
        let shift = n.div_ceil(2);
        let at = |r: u64| ComplexValue::from_polar(1.0, -2.0 * PI * r as f64 / modulus);
        let low = (0..1u64 << shift).map(at).collect();
        let high = (0..1u64 << (n - shift)).map(|h| at(h << shift)).collect();
        Self { shift, low, high }
    }

    #[inline]
    fn get(&self, r: u64) -> ComplexValue {
        self.high[(r >> self.shift) as usize] * self.low[(r & ((1 << self.shift) - 1)) as usize]
    }
}

/// `|sum_j z_0^{-2^{j+1}}|` for `z_0 = exp(2 pi i k / (2^n - 1))`; the
/// exponents are the bit rotations of `k`.
fn rotation_sum(k: u64, n: usize, table: &UnitTable) -> f64 {
    let mask = (1u64 << n) - 1;
    let mut r = k;
    let mut sum = ComplexValue::new(0.0, 0.0);
    for _ in 0..n {
        r = ((r << 1) | (r >> (n - 1))) & mask;
        sum += table.get(r);
    }
    sum.norm()
}

/// Critical cycles of `lambda_n` at `c = 0` for every `n <= max_n`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct C0Scan {
    /// Periods with at least one angle where `|d lambda/dc| < tol 2^n`.
    pub critical: BTreeMap<usize, Vec<RationalAngle>>,
    /// Angles just above the threshold, kept apart from the verdict.
    pub marginal: BTreeMap<usize, Vec<RationalAngle>>,
    pub tol: f64,
}

impl C0Scan {
    pub fn periods(&self) -> Vec<usize> {
        self.critical.keys().copied().collect()
    }
}

/// Scans all periodic cycles of `z^2` on the unit circle with period up to
/// `max_n` for zeros of `d lambda_n / dc`.
pub fn c0_scan(max_n: usize, tol: f64) -> Result<C0Scan> {
    if max_n > MAX_C0_PERIOD {
        return Err(Error::Domain(format!("c = 0 scan supports max_n <= {MAX_C0_PERIOD}, got {max_n}")));
    }
    let mut out = C0Scan { tol, ..Default::default() };
    for n in 1..=max_n {
        let table = UnitTable::new(n);
        let modulus = ((1u64 << n) - 1).max(1);
        let mut crit = Vec::new();
        let mut marginal = Vec::new();
        for k in necklace_minima(n) {
            let s = rotation_sum(k, n, &table);
            if s < MARGINAL_FACTOR * tol {
                let a = RationalAngle::new(k, modulus)?;
                // confirm with the exact-exponent evaluation
                let exact = c0_derivative(n, a).norm() / 2f64.powi(n as i32);
                if exact < tol {
                    crit.push(a);
                } else if exact < MARGINAL_FACTOR * tol {
                    marginal.push(a);
                }
            }
        }
        crit.sort();
        marginal.sort();
        if !crit.is_empty() {
            out.critical.insert(n, crit);
        }
        if !marginal.is_empty() {
            out.marginal.insert(n, marginal);
        }
    }
    Ok(out)
}

/// Summary of one result set, as in the per-period tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsRow {
    pub period: usize,
    pub count: usize,
    pub bound: usize,
    pub inside_count: usize,
    pub outside_count: usize,
    pub inside_pct: f64,
    pub outside_pct: f64,
    pub min_lambda_abs: f64,
}

impl fmt::Display for StatsRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} count={}/{} inside={} ({:.1}%) outside={} ({:.1}%) min|lambda|={:.4}",
            self.period,
            self.count,
            self.bound,
            self.inside_count,
            self.inside_pct,
            self.outside_count,
            self.outside_pct,
            self.min_lambda_abs
        )
    }
}

/// Counts, Mandelbrot membership split and smallest critical value modulus.
pub fn stats(set: &ResultSet) -> Result<StatsRow> {
    if set.records.is_empty() {
        return Err(Error::Domain("statistics need a non-empty result set".into()));
    }
    let count = set.records.len();
    let inside_count = set.records.iter().filter(|r| mandelbrot_member(r.c, DEFAULT_MAX_ITER).inside).count();
    let outside_count = count - inside_count;
    let min_lambda_abs = set.records.iter().map(|r| r.lambda_abs).fold(f64::INFINITY, f64::min);
    Ok(StatsRow {
        period: set.period,
        count,
        bound: set.bound,
        inside_count,
        outside_count,
        inside_pct: 100.0 * inside_count as f64 / count as f64,
        outside_pct: 100.0 * outside_count as f64 / count as f64,
        min_lambda_abs,
    })
}
