//! All periodic points of `p_c` for a fixed parameter: Newton's method on the
//! iterated map from a circle of starting points, minimal periods, and orbit
//! grouping with canonical representatives.

use std::cmp::Ordering;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{self, iterate, nu};
use crate::{is_finite, ComplexValue, Error, Result};

/// Parameters of [`find_all_roots`].
#[derive(Debug, Clone, PartialEq)]
pub struct RootConfig {
    /// A root is accepted when `|p^n(z) - z| < tol * (1 + |z|)`.
    pub tol: f64,
    /// Roots closer than `separation * (1 + |z|)` are merged.
    pub separation: f64,
    /// Number of start sets tried; each round doubles the number of starts.
    pub max_rounds: usize,
    /// Newton iterations allowed per start, per unit of degree `2^n`.
    pub iters_per_degree: usize,
}

impl Default for RootConfig {
    fn default() -> Self {
        Self { tol: 1e-8, separation: 1e-9, max_rounds: 4, iters_per_degree: 16 }
    }
}

/// Tolerance of the minimal-period test, relative to `1 + |z|`.
pub const PERIOD_TOL: f64 = 1e-8;
/// Radius used to follow an orbit from one root to the next, relative to `1 + |z|`.
pub const MATCH_TOL: f64 = 1e-7;
/// Orbits with `|lambda - 1|` below this are not used as initial guesses.
pub const GUESS_PARABOLIC_TOL: f64 = 1e-6;

/// Lexicographic order on `(re, im)`.
pub fn lex_cmp(a: &ComplexValue, b: &ComplexValue) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Real parts closer than this (relative to `1 + |re|`) count as equal when
/// choosing an orbit representative.
pub const REPRESENTATIVE_TIE_TOL: f64 = 1e-9;

// Real cycles come in conjugate pairs with equal real parts up to rounding,
// so those are ordered by the imaginary part.
fn smallest_point(points: &[ComplexValue]) -> usize {
    let mut best = 0;
    for (i, p) in points.iter().enumerate().skip(1) {
        let q = points[best];
        let tie = (p.re - q.re).abs() <= REPRESENTATIVE_TIE_TOL * (1.0 + q.re.abs());
        if (!tie && p.re < q.re) || (tie && p.im < q.im) {
            best = i;
        }
    }
    best
}

/// A cycle of exact period `period` of `p_c`, listed in dynamical order
/// starting from its lexicographically smallest point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Orbit {
    pub c: ComplexValue,
    pub period: usize,
    pub points: Vec<ComplexValue>,
    pub representative: ComplexValue,
}

impl Orbit {
    /// Builds the orbit of `z` by forward iteration, rotated so that it starts
    /// at its smallest point.
    pub fn from_point(c: ComplexValue, z: ComplexValue, period: usize) -> Self {
        let mut points = Vec::with_capacity(period);
        let mut w = z;
        for _ in 0..period {
            points.push(w);
            w = w * w + c;
        }
        let start = smallest_point(&points);
        points.rotate_left(start);
        let representative = points[0];
        Self { c, period, points, representative }
    }

    /// Largest distance from a point of `self` to the nearest point of `other`.
    pub fn distance(&self, other: &Orbit) -> f64 {
        self.points
            .iter()
            .map(|p| other.points.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    }

    pub fn conj(&self) -> Self {
        let mut points: Vec<_> = self.points.iter().map(|p| p.conj()).collect();
        let start = smallest_point(&points);
        points.rotate_left(start);
        let representative = points.first().copied().unwrap_or(self.representative.conj());
        Self { c: self.c.conj(), period: self.period, points, representative }
    }

    /// Checks the closure of the cycle under `p_c`.
    pub fn is_closed(&self, tol: f64) -> bool {
        let k = self.points.len();
        (0..k).all(|i| {
            let p = self.points[i];
            let next = self.points[(i + 1) % k];
            (p * p + self.c - next).norm() < tol * (1.0 + p.norm_sqr())
        })
    }
}

/// Radius outside of which every orbit of `p_c` escapes.
pub fn escape_radius(c: ComplexValue) -> f64 {
    0.5 * (1.0 + (1.0 + 4.0 * c.norm()).sqrt())
}

/// Number of Newton starts on the first round for degree `d`.
pub fn start_count(d: usize) -> usize {
    let d = d as f64;
    256usize.max((4.0 * d * d.ln()).ceil() as usize)
}

fn newton_root(c: ComplexValue, n: usize, mut z: ComplexValue, max_iter: usize, tol: f64) -> Option<ComplexValue> {
    const HUGE: f64 = 1e40;
    let mut settled = 0;
    for _ in 0..max_iter {
        let mut v = z;
        let mut d = ComplexValue::new(1.0, 0.0);
        let mut escaped = None;
        for k in 0..n {
            d = 2.0 * v * d;
            v = v * v + c;
            if v.norm() > HUGE {
                escaped = Some(k + 1);
                break;
            }
        }
        let step = match escaped {
            // far out the remaining squarings halve v / d at each step
            Some(k) => (v / d) / 2f64.powi((n - k) as i32),
            None => (v - z) / (d - 1.0),
        };
        if !is_finite(step) {
            return None;
        }
        z -= step;
        if step.norm() <= 1e-14 * (1.0 + z.norm()) {
            settled += 1;
            if settled >= 2 {
                break;
            }
        }
    }
    let residual = (iterate(c, z, n) - z).norm();
    (is_finite(z) && residual < tol * (1.0 + z.norm())).then_some(z)
}

/// Sorts by `(re, im)` and drops points within `separation * (1 + |z|)` of an
/// already kept point.
fn dedup_sorted(mut pts: Vec<ComplexValue>, separation: f64) -> Vec<ComplexValue> {
    pts.sort_by(lex_cmp);
    let mut kept: Vec<ComplexValue> = Vec::with_capacity(pts.len());
    for p in pts {
        let radius = separation * (1.0 + p.norm());
        let dup = kept.iter().rev().take_while(|q| q.re >= p.re - radius).any(|q| (p - q).norm() < radius);
        if !dup {
            kept.push(p);
        }
    }
    kept
}

/// All `2^n` solutions of `p_c^n(z) = z`, sorted by `(re, im)`.
pub fn find_all_roots(c: ComplexValue, n: usize, cfg: &RootConfig) -> Result<Vec<ComplexValue>> {
    if n == 0 || n > 12 {
        return Err(Error::Domain(format!("root finding supports 1 <= n <= 12, got {n}")));
    }
    if !is_finite(c) {
        return Err(Error::Domain(format!("non-finite parameter {c}")));
    }
    let degree = 1usize << n;
    let radius = escape_radius(c) + 0.5;
    let max_iter = 50 + cfg.iters_per_degree * degree;
    let mut roots: Vec<ComplexValue> = Vec::new();
    let mut count = start_count(degree);
    for round in 0..cfg.max_rounds.max(1) {
        // later rounds interleave with the earlier start sets
        let offset = if round == 0 { 0.0 } else { 0.5 };
        let found: Vec<ComplexValue> = (0..count)
            .into_par_iter()
            .filter_map(|k| {
                let theta = 2.0 * PI * (k as f64 + offset) / count as f64;
                newton_root(c, n, ComplexValue::from_polar(radius, theta), max_iter, cfg.tol)
            })
            .collect();
        roots.extend(found);
        roots = dedup_sorted(roots, cfg.separation);
        match roots.len().cmp(&degree) {
            Ordering::Equal => return Ok(roots),
            Ordering::Greater => {
                return Err(Error::Invariant(format!("{} distinct roots exceed degree {degree}", roots.len())))
            }
            Ordering::Less => count *= 2,
        }
    }
    Err(Error::IncompleteRoots { found: roots.len(), expected: degree, rounds: cfg.max_rounds.max(1) })
}

fn divisors(n: usize) -> impl Iterator<Item = usize> {
    (1..=n).filter(move |m| n.is_multiple_of(*m))
}

/// Smallest divisor `m` of `n` with `|p_c^m(z) - z| < 1e-8 (1 + |z|)`.
pub fn minimal_period(c: ComplexValue, z: ComplexValue, n: usize) -> Result<usize> {
    let tol = PERIOD_TOL * (1.0 + z.norm());
    let mut w = z;
    let mut done = 0;
    for m in divisors(n) {
        w = (done..m).fold(w, |w, _| w * w + c);
        done = m;
        if (w - z).norm() < tol {
            return Ok(m);
        }
    }
    Err(Error::InconsistentRoot { z, n })
}

/// Number of roots of each exact period, indexed by divisor of `n`.
pub fn period_partition(c: ComplexValue, roots: &[ComplexValue], n: usize) -> Result<Vec<(usize, usize)>> {
    let mut counts: Vec<(usize, usize)> = divisors(n).map(|m| (m, 0)).collect();
    for &z in roots {
        let m = minimal_period(c, z, n)?;
        if let Some(slot) = counts.iter_mut().find(|(d, _)| *d == m) {
            slot.1 += 1;
        }
    }
    Ok(counts)
}

/// Groups the exact-period-`n` roots into cycles.
pub fn group_into_orbits(c: ComplexValue, roots: &[ComplexValue], n: usize) -> Result<Vec<Orbit>> {
    let mut exact: Vec<ComplexValue> = Vec::new();
    for &z in roots {
        if minimal_period(c, z, n)? == n {
            exact.push(z);
        }
    }
    exact.sort_by(lex_cmp);
    let mut assigned = vec![false; exact.len()];
    let mut orbits = Vec::new();
    for start in 0..exact.len() {
        if assigned[start] {
            continue;
        }
        let mut points = vec![exact[start]];
        assigned[start] = true;
        let mut current = exact[start];
        for step in 1..=n {
            let image = current * current + c;
            let radius = MATCH_TOL * (1.0 + image.norm());
            let nearest = exact
                .iter()
                .enumerate()
                .map(|(i, q)| (i, (q - image).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .filter(|&(_, dist)| dist < radius)
                .map(|(i, _)| i);
            match nearest {
                Some(i) if step == n && i == start => {}
                Some(i) if step < n && !assigned[i] => {
                    assigned[i] = true;
                    points.push(exact[i]);
                    current = exact[i];
                }
                _ => return Err(Error::Grouping { z: exact[start] }),
            }
        }
        orbits.push(Orbit { c, period: n, representative: points[0], points });
    }
    let expected = (nu(n as u32)? / n as u128) as usize;
    if orbits.len() != expected {
        return Err(Error::NonGenericParameter { n, found: orbits.len(), expected });
    }
    Ok(orbits)
}

/// Starting triple `(c, z, z')` for the critical-point Newton system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Guess {
    pub c: ComplexValue,
    pub z: ComplexValue,
    pub zp: ComplexValue,
}

/// One guess per period-`n` cycle of `p_c`, taken at the cycle representative.
pub fn initial_guesses(c: ComplexValue, n: usize, cfg: &RootConfig) -> Result<Vec<Guess>> {
    let roots = find_all_roots(c, n, cfg)?;
    let orbits = group_into_orbits(c, &roots, n)?;
    let mut guesses = Vec::with_capacity(orbits.len());
    for orbit in orbits {
        let z = orbit.representative;
        let lambda = dynamics::multiplier(c, z, n)?;
        if (lambda - 1.0).norm() < GUESS_PARABOLIC_TOL {
            continue;
        }
        match dynamics::z_prime(c, z, n) {
            Ok(zp) => guesses.push(Guess { c, z, zp }),
            Err(Error::ParabolicChart { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(guesses)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn representative_stable_under_rounding() {
        // 4/9 and 5/9 have equal real parts; the lower half-plane point wins
        let c = ComplexValue::new(0.0, 0.0);
        let z = ComplexValue::from_polar(1.0, 2.0 * std::f64::consts::PI / 9.0);
        let o = Orbit::from_point(c, z, 6);
        assert!(o.representative.im < 0.0);
        assert!((o.representative.re - (8.0 * std::f64::consts::PI / 9.0).cos()).abs() < 1e-12);
        for nudge in [1e-15, -1e-15] {
            let again = Orbit::from_point(c, o.representative + nudge, 6);
            assert!((again.representative - o.representative).norm() < 1e-14);
        }
        assert!(o.conj().representative.im < 0.0);
    }

    fn cx(re: f64, im: f64) -> ComplexValue {
        ComplexValue::new(re, im)
    }

    fn contains(roots: &[ComplexValue], z: ComplexValue) -> bool {
        roots.iter().any(|r| (r - z).norm() < 1e-10)
    }

    #[test]
    fn roots_of_z4_minus_z() {
        let roots = find_all_roots(cx(0.0, 0.0), 2, &RootConfig::default()).unwrap();
        assert_eq!(roots.len(), 4);
        for z in [
            cx(0.0, 0.0),
            cx(1.0, 0.0),
            ComplexValue::from_polar(1.0, 2.0 * PI / 3.0),
            ComplexValue::from_polar(1.0, 4.0 * PI / 3.0),
        ] {
            assert!(contains(&roots, z), "missing {z}");
        }
    }

    #[test]
    fn basilica_two_cycle() {
        let roots = find_all_roots(cx(-1.0, 0.0), 2, &RootConfig::default()).unwrap();
        assert!(contains(&roots, cx(0.0, 0.0)));
        assert!(contains(&roots, cx(-1.0, 0.0)));
        let orbits = group_into_orbits(cx(-1.0, 0.0), &roots, 2).unwrap();
        assert_eq!(orbits.len(), 1);
        assert_eq!(orbits[0].representative, orbits[0].points[0]);
        assert!((orbits[0].representative - cx(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn orbit_of_cube_roots() {
        let roots = find_all_roots(cx(0.0, 0.0), 2, &RootConfig::default()).unwrap();
        let orbits = group_into_orbits(cx(0.0, 0.0), &roots, 2).unwrap();
        assert_eq!(orbits.len(), 1);
        let rep = ComplexValue::from_polar(1.0, 4.0 * PI / 3.0);
        assert!((orbits[0].representative - rep).norm() < 1e-12);
        assert!(orbits[0].is_closed(1e-8));
    }

    #[test]
    fn minimal_period_examples() {
        assert_eq!(minimal_period(cx(0.0, 0.0), cx(0.0, 0.0), 4).unwrap(), 1);
        let w = ComplexValue::from_polar(1.0, 2.0 * PI / 3.0);
        assert_eq!(minimal_period(cx(0.0, 0.0), w, 4).unwrap(), 2);
        assert_eq!(minimal_period(cx(-1.0, 0.0), cx(0.0, 0.0), 6).unwrap(), 2);
        assert!(matches!(minimal_period(cx(0.0, 0.0), cx(0.5, 0.0), 3), Err(Error::InconsistentRoot { .. })));
    }

    #[test]
    fn six_cycles_generic_parameter() {
        let c = cx(-0.2, 0.55);
        let roots = find_all_roots(c, 6, &RootConfig::default()).unwrap();
        assert_eq!(roots.len(), 64);
        let orbits = group_into_orbits(c, &roots, 6).unwrap();
        assert_eq!(orbits.len(), 9);
        for o in &orbits {
            assert!(o.is_closed(1e-8));
            let back = iterate(c, o.representative, 6);
            assert!((back - o.representative).norm() < 1e-7 * (1.0 + o.representative.norm()));
        }
    }

    #[test]
    fn partition_matches_nu() {
        let c = cx(0.31, -0.77);
        let roots = find_all_roots(c, 6, &RootConfig::default()).unwrap();
        let parts = period_partition(c, &roots, 6).unwrap();
        assert_eq!(parts, vec![(1, 2), (2, 2), (3, 6), (6, 54)]);
    }

    #[test]
    fn guesses_counts() {
        let c = cx(0.13, 0.41);
        assert_eq!(initial_guesses(c, 3, &RootConfig::default()).unwrap().len(), 2);
        assert_eq!(initial_guesses(c, 1, &RootConfig::default()).unwrap().len(), 2);
        // the parabolic fixed point of z^2 + 1/4 is a double root
        let g = initial_guesses(cx(0.25, 0.0), 1, &RootConfig { max_rounds: 1, ..Default::default() });
        assert!(g.map(|g| g.len() < 2).unwrap_or(true));
    }

    #[test]
    fn guesses_carry_branch_derivative() {
        let c = cx(-0.6, 0.2);
        for g in initial_guesses(c, 4, &RootConfig::default()).unwrap() {
            let zp = dynamics::z_prime(c, g.z, 4).unwrap();
            assert_eq!(zp, g.zp);
        }
    }

    #[test]
    fn deterministic_roots() {
        let c = cx(0.4, 0.3);
        let a = find_all_roots(c, 7, &RootConfig::default()).unwrap();
        let b = find_all_roots(c, 7, &RootConfig::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_large_periods() {
        assert!(matches!(find_all_roots(cx(0.0, 0.0), 13, &RootConfig::default()), Err(Error::Domain(_))));
    }

    #[test]
    fn conj_orbit_is_closed() {
        let c = cx(-0.1, 0.7);
        let roots = find_all_roots(c, 3, &RootConfig::default()).unwrap();
        for o in group_into_orbits(c, &roots, 3).unwrap() {
            let k = o.conj();
            assert!(k.is_closed(1e-8));
            assert_eq!(k.representative, k.points[0]);
            assert!(o.distance(&k.conj()) < 1e-15);
        }
    }
}
