//! Extremal examples, corpus audits and the unique-expression hunt.

mod audit;
mod examples;
mod hunt;

pub use audit::{
    run_audit, Aggregate, AuditConfig, AuditReport, AuditScope, Checker, Failure, Tally, AUDIT_ORDER_CAP,
    EXHAUSTIVE_SEQUENCE_CAP,
};
pub use examples::{
    clause_b_holds, gen_example, two_cosets_subgroups, ExampleInstance, ExampleKind, ExampleParams, Expected,
};
pub use hunt::{hunt_unique_expression, hunt_unique_expression_with, HuntConfig, HuntReport};

use crate::error::Result;
use crate::group::GroupSpec;

/// Every abelian group of order at most `max`, the trivial group first,
/// ordered by order and then by invariant factors.
pub fn abelian_groups_up_to(max: usize) -> Result<Vec<GroupSpec>> {
    fn chains(prev: usize, room: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        // the next factor is a multiple of the previous one
        let mut m = prev;
        while m <= room {
            cur.push(m);
            chains(m, room / m, cur, out);
            cur.pop();
            m += prev;
        }
    }
    let mut all = Vec::new();
    if max >= 1 {
        all.push(vec![1]);
    }
    for first in 2..=max {
        let mut cur = vec![first];
        chains(first, max / first, &mut cur, &mut all);
    }
    let mut specs = all
        .iter()
        .map(|f| GroupSpec::from_invariant_factors(f))
        .collect::<Result<Vec<_>>>()?;
    specs.sort_by(|a, b| (a.order(), a.factors()).cmp(&(b.order(), b.factors())));
    Ok(specs)
}
