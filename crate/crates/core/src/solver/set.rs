use serde::{Deserialize, Serialize};

use super::record::CriticalPointRecord;
use super::search::SearchStats;
use crate::periodic::lex_cmp;
use crate::{Error, Result};

/// The collected critical points of one period, sorted by `(c, z)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultSet {
    pub period: usize,
    pub records: Vec<CriticalPointRecord>,
    pub bound: usize,
    pub complete: bool,
    /// Parameter samples consumed by the search.
    pub guesses_used: usize,
    pub dedup_delta: f64,
    pub stats: SearchStats,
}

impl ResultSet {
    pub fn new(period: usize, bound: usize, dedup_delta: f64) -> Self {
        Self {
            period,
            records: Vec::new(),
            bound,
            complete: bound == 0,
            guesses_used: 0,
            dedup_delta,
            stats: SearchStats::default(),
        }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Index of a stored record matching `r` under the dedup metric.
    pub fn find(&self, r: &CriticalPointRecord) -> Option<usize> {
        self.records.iter().position(|q| is_duplicate(q, r, self.dedup_delta))
    }

    /// Recomputes `complete` and the conjugate partner links.
    pub fn finalize(&mut self) {
        self.complete = self.records.len() == self.bound;
        let partners: Vec<Option<usize>> =
            self.records.iter().map(|r| self.find(&super::record::conjugate(r))).collect();
        for (r, p) in self.records.iter_mut().zip(partners) {
            r.conjugate_partner = p;
        }
    }
}

/// Same critical point: `|dc| < delta` and every orbit point of `b` lies
/// within `delta` of the orbit of `a`.
pub fn is_duplicate(a: &CriticalPointRecord, b: &CriticalPointRecord, delta: f64) -> bool {
    (a.c - b.c).norm() < delta && b.orbit.distance(&a.orbit) < delta
}

fn sort_key_cmp(a: &CriticalPointRecord, b: &CriticalPointRecord) -> std::cmp::Ordering {
    lex_cmp(&a.c, &b.c).then(lex_cmp(&a.z, &b.z))
}

/// Inserts `r` unless it duplicates a stored record, keeping the set sorted.
pub fn dedup_insert(set: &mut ResultSet, r: CriticalPointRecord) -> Result<bool> {
    if set.find(&r).is_some() {
        return Ok(false);
    }
    if set.records.len() >= set.bound {
        return Err(Error::BoundExceeded { bound: set.bound });
    }
    let at = set.records.partition_point(|q| sort_key_cmp(q, &r).is_lt());
    set.records.insert(at, r);
    Ok(true)
}
