use std::fmt;

use super::document::ResultDocument;
use crate::dynamics::upper_bound;
use crate::periodic::lex_cmp;
use crate::solver::{conjugate, is_duplicate, recheck_record, Rejection};

/// Outcome of checking a stored document against the set invariants.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub records: usize,
    /// `(index, reason)` for every record failing re-verification.
    pub record_failures: Vec<(usize, Rejection)>,
    pub period_mismatches: Vec<usize>,
    /// Records whose mirror image is missing.
    pub closure_failures: Vec<usize>,
    pub duplicate_pairs: Vec<(usize, usize)>,
    /// Header problems: wrong bound, count above bound, inconsistent flag.
    pub header_failures: Vec<String>,
    pub unsorted: bool,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.record_failures.is_empty()
            && self.period_mismatches.is_empty()
            && self.closure_failures.is_empty()
            && self.duplicate_pairs.is_empty()
            && self.header_failures.is_empty()
            && !self.unsorted
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "records: {}", self.records)?;
        for h in &self.header_failures {
            writeln!(f, "header: {h}")?;
        }
        for (i, why) in &self.record_failures {
            writeln!(f, "record {i}: {why}")?;
        }
        for i in &self.period_mismatches {
            writeln!(f, "record {i}: period differs from document period")?;
        }
        for i in &self.closure_failures {
            writeln!(f, "record {i}: closure failure, conjugate record missing")?;
        }
        for (i, j) in &self.duplicate_pairs {
            writeln!(f, "records {i} and {j}: duplicates")?;
        }
        if self.unsorted {
            writeln!(f, "records are not in canonical (c, z) order")?;
        }
        write!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Re-verifies every record and checks conjugation closure, duplicates, the
/// bound ceiling and the canonical order.
pub fn verify_document(doc: &ResultDocument) -> VerifyReport {
    let cfg = doc.search_config();
    let mut report = VerifyReport { records: doc.records.len(), ..Default::default() };

    match upper_bound(doc.period as u32) {
        Ok(b) if b as usize == doc.bound => {}
        Ok(b) => report.header_failures.push(format!("bound {} differs from the counting bound {b}", doc.bound)),
        Err(e) => report.header_failures.push(format!("period {}: {e}", doc.period)),
    }
    if doc.records.len() > doc.bound {
        report.header_failures.push(format!("{} records exceed the bound {}", doc.records.len(), doc.bound));
    }
    if doc.complete != (doc.records.len() == doc.bound) {
        report.header_failures.push(format!("complete = {} is inconsistent with the record count", doc.complete));
    }

    for (i, r) in doc.records.iter().enumerate() {
        if r.period != doc.period {
            report.period_mismatches.push(i);
            continue;
        }
        if let Err(why) = recheck_record(r, &cfg) {
            report.record_failures.push((i, why));
        }
        let mirror = conjugate(r);
        if !doc.records.iter().any(|q| is_duplicate(q, &mirror, cfg.dedup_delta)) {
            report.closure_failures.push(i);
        }
    }
    for i in 0..doc.records.len() {
        for j in i + 1..doc.records.len() {
            if is_duplicate(&doc.records[i], &doc.records[j], cfg.dedup_delta) {
                report.duplicate_pairs.push((i, j));
            }
        }
    }
    report.unsorted = doc.records.windows(2).any(|w| lex_cmp(&w[0].c, &w[1].c).then(lex_cmp(&w[0].z, &w[1].z)).is_gt());
    report
}
