//! Setpartitions of sequences, certificates for the two structure theorems,
//! and the recursive construction that produces them.

mod certificate;
mod hypotheses;
mod pipeline;
mod solve;
mod split;

pub use certificate::{CaseTag, Certificate, Theorem, VerifyReport};
pub use hypotheses::{hypothesis_check, hypothesis_check_in, Condition, HypothesisReport, Mode};
pub use pipeline::{
    main_pipeline, main_verify, main_verify_in, ROUTE_GREEDY_PREFIX, ROUTE_PREFIX_IS_H, ROUTE_RECURSION,
    ROUTE_SOLVED_PREFIX, ROUTE_SPAN_COSET,
};
pub use solve::{partition_solve, partition_solve_with, partition_verify, SolveConfig};
pub use split::{complete_split, extend_split, greedy_capped};

use crate::error::{Error, Result};
use crate::group::{GroupSpec, GroupSubset};
use crate::sequence::GSequence;

/// An ordered list of nonempty subsets `A_1, ..., A_n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SetPartition {
    group: GroupSpec,
    parts: Vec<GroupSubset>,
}

impl SetPartition {
    pub fn new(group: &GroupSpec, parts: Vec<GroupSubset>) -> Result<SetPartition> {
        if let Some(i) = parts.iter().position(|p| p.is_empty()) {
            return Err(Error::Precondition(format!("part {} is empty", i + 1)));
        }
        if parts.iter().any(|p| p.group() != group) {
            return Err(Error::MismatchedGroups { left: group.to_string(), right: "part".into() });
        }
        Ok(SetPartition { group: group.clone(), parts })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> &[GroupSubset] {
        &self.parts
    }

    /// `S(A)`, each part contributing one copy of each of its elements.
    pub fn underlying(&self) -> GSequence {
        let mut s = GSequence::empty(&self.group);
        for p in &self.parts {
            for x in p.iter() {
                s.push(x, 1);
            }
        }
        s
    }

    /// `A_1 + ... + A_m`; the empty prefix sums to `{0}`.
    pub fn prefix_sum(&self, m: usize) -> GroupSubset {
        let mut acc = GroupSubset::singleton(&self.group, 0);
        for p in &self.parts[..m] {
            acc = acc.sum_with(p);
        }
        acc
    }

    pub fn sum(&self) -> GroupSubset {
        self.prefix_sum(self.parts.len())
    }

    pub fn translate(&self, t: usize) -> SetPartition {
        SetPartition { group: self.group.clone(), parts: self.parts.iter().map(|p| p.translate(t)).collect() }
    }
}

/// Checks `h(S) <= n <= |S|`, naming the inequality that fails.
pub(crate) fn check_partitionable(s: &GSequence, n: usize, what: &str) -> Result<()> {
    if n == 0 {
        return Err(Error::Precondition(format!("n must be at least 1 for {what}")));
    }
    if s.height() as usize > n {
        return Err(Error::Precondition(format!("h({what}) = {} exceeds n = {n}", s.height())));
    }
    if n > s.len() {
        return Err(Error::Precondition(format!("n = {n} exceeds |{what}| = {}", s.len())));
    }
    Ok(())
}

/// An `n`-setpartition with underlying sequence exactly `S`.
///
/// Copies are listed by ascending element and dealt to parts round-robin
/// with one global pointer, so equal terms always land in distinct parts.
pub fn make_setpartition(s: &GSequence, n: usize) -> Result<SetPartition> {
    check_partitionable(s, n, "S")?;
    let mut parts = vec![GroupSubset::empty(s.group()); n];
    for (t, x) in s.terms().enumerate() {
        parts[t % n].insert(x);
    }
    SetPartition::new(s.group(), parts)
}
