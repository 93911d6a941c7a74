//! Randomized driver: sample `c`, seed Newton from every cycle of `p_c`,
//! verify, and merge into a conjugation-closed set until the counting bound
//! is reached or the sample budget runs out.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::newton::{newton_solve, NewtonFailure, SearchConfig};
use super::record::{conjugate, verify_solution, CriticalPointRecord, Rejection};
use super::set::{dedup_insert, is_duplicate, ResultSet};
use super::system::SystemState;
use crate::dynamics::upper_bound;
use crate::periodic::initial_guesses;
use crate::{ComplexValue, Error, Result};

/// Failure and success counters of a search.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub samples: usize,
    pub guesses: usize,
    pub accepted: usize,
    pub duplicates: usize,
    pub no_convergence: usize,
    pub singular_jacobian: usize,
    pub divergence: usize,
    pub overflow: usize,
    pub wrong_period: usize,
    pub parabolic: usize,
    pub residual_too_large: usize,
    pub incomplete_roots: usize,
    pub non_generic: usize,
    pub bound_overflow: usize,
}

enum Candidate {
    Record(Box<CriticalPointRecord>),
    Newton(NewtonFailure),
    Rejected(Rejection),
}

enum SampleOutcome {
    Candidates(Vec<Candidate>),
    IncompleteRoots,
    NonGeneric,
}

fn sample_disc(rng: &mut ChaCha8Rng, radius: f64) -> ComplexValue {
    let r = radius * rng.gen::<f64>().sqrt();
    let theta = 2.0 * PI * rng.gen::<f64>();
    ComplexValue::from_polar(r, theta)
}

fn process_sample(c: ComplexValue, n: usize, cfg: &SearchConfig) -> SampleOutcome {
    let guesses = match initial_guesses(c, n, &cfg.roots) {
        Ok(g) => g,
        Err(Error::NonGenericParameter { .. }) | Err(Error::Grouping { .. }) => return SampleOutcome::NonGeneric,
        Err(_) => return SampleOutcome::IncompleteRoots,
    };
    let candidates = guesses
        .into_iter()
        .map(|g| match newton_solve(SystemState::from(g), n, cfg) {
            Err(f) => Candidate::Newton(f),
            Ok(out) => match verify_solution(&out.state, n, cfg) {
                Ok(r) => Candidate::Record(Box::new(r)),
                Err(rej) => Candidate::Rejected(rej),
            },
        })
        .collect();
    SampleOutcome::Candidates(candidates)
}

/// Adds `r` and its mirror image. Returns `false` if it was already known.
fn merge_record(set: &mut ResultSet, r: CriticalPointRecord) -> bool {
    if set.find(&r).is_some() {
        set.stats.duplicates += 1;
        return false;
    }
    let mirror = conjugate(&r);
    let self_conjugate = is_duplicate(&r, &mirror, set.dedup_delta);
    let needed = if self_conjugate || set.find(&mirror).is_some() { 1 } else { 2 };
    if set.len() + needed > set.bound {
        set.stats.bound_overflow += 1;
        return false;
    }
    set.stats.accepted += 1;
    // both inserts are within the bound checked above
    let _ = dedup_insert(set, r);
    if !self_conjugate {
        let _ = dedup_insert(set, mirror);
    }
    true
}

/// Runs the search for period `n` from scratch.
pub fn search(n: usize, cfg: &SearchConfig) -> Result<ResultSet> {
    let bound = bound_for(n)?;
    search_from(ResultSet::new(n, bound, cfg.dedup_delta), n, cfg, &mut |_| {})
}

fn bound_for(n: usize) -> Result<usize> {
    if !(3..=12).contains(&n) {
        return Err(Error::Domain(format!("search supports 3 <= n <= 12, got {n}")));
    }
    Ok(upper_bound(n as u32)? as usize)
}

/// Continues a search from an existing set, calling `progress` after every
/// batch of samples.
pub fn search_from(
    mut set: ResultSet,
    n: usize,
    cfg: &SearchConfig,
    progress: &mut dyn FnMut(&ResultSet),
) -> Result<ResultSet> {
    cfg.validate()?;
    let bound = bound_for(n)?;
    if set.period != n || set.bound != bound {
        return Err(Error::Domain(format!(
            "result set is for period {} with bound {}, expected period {n} with bound {bound}",
            set.period, set.bound
        )));
    }
    set.dedup_delta = cfg.dedup_delta;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut consumed = 0;
    'outer: while consumed < cfg.budget && set.len() < set.bound {
        let batch = cfg.batch_size.min(cfg.budget - consumed);
        let params: Vec<ComplexValue> = (0..batch).map(|_| sample_disc(&mut rng, cfg.sample_radius)).collect();
        let outcomes: Vec<SampleOutcome> = params.par_iter().map(|&c| process_sample(c, n, cfg)).collect();
        for outcome in outcomes {
            consumed += 1;
            set.guesses_used += 1;
            set.stats.samples += 1;
            match outcome {
                SampleOutcome::IncompleteRoots => set.stats.incomplete_roots += 1,
                SampleOutcome::NonGeneric => set.stats.non_generic += 1,
                SampleOutcome::Candidates(cands) => {
                    for cand in cands {
                        set.stats.guesses += 1;
                        match cand {
                            Candidate::Record(r) => {
                                merge_record(&mut set, *r);
                            }
                            Candidate::Newton(f) => match f {
                                NewtonFailure::NoConvergence => set.stats.no_convergence += 1,
                                NewtonFailure::SingularJacobian => set.stats.singular_jacobian += 1,
                                NewtonFailure::Divergence => set.stats.divergence += 1,
                                NewtonFailure::Overflow => set.stats.overflow += 1,
                            },
                            Candidate::Rejected(rej) => match rej {
                                Rejection::WrongPeriod { .. } => set.stats.wrong_period += 1,
                                Rejection::Parabolic => set.stats.parabolic += 1,
                                Rejection::ResidualTooLarge | Rejection::OrbitMismatch => {
                                    set.stats.residual_too_large += 1
                                }
                            },
                        }
                    }
                }
            }
            if set.len() >= set.bound {
                break 'outer;
            }
        }
        progress(&set);
    }
    set.finalize();
    progress(&set);
    Ok(set)
}
