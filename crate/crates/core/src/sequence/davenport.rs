use crate::error::{Error, Result};
use crate::group::{GroupSpec, GroupSubset};

pub const DAVENPORT_ORDER_CAP: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DavenportResult {
    pub value: usize,
    /// `d*(G) + 1`.
    pub lower: usize,
    /// `|G|`.
    pub upper: usize,
    /// A longest zero-sum free sequence, as element indices.
    pub witness: Vec<usize>,
}

impl DavenportResult {
    pub fn within_bounds(&self) -> bool {
        self.lower <= self.value && self.value <= self.upper
    }
}

/// `D(G)` by exhaustive search over zero-sum free sequences.
///
/// Sequences are extended in nondecreasing index order and only while they
/// stay zero-sum free, so every multiset is visited once. The running set of
/// nonempty subsums makes each extension `O(|G|)`.
pub fn davenport_bruteforce(g: &GroupSpec, cap: usize) -> Result<DavenportResult> {
    if g.order() > cap {
        return Err(Error::CapExceeded { order: g.order(), cap });
    }
    let mut best: Vec<usize> = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    search(g, 1, &GroupSubset::empty(g), &mut cur, &mut best);
    let value = best.len() + 1;
    Ok(DavenportResult { value, lower: g.d_star() + 1, upper: g.order(), witness: best })
}

fn search(g: &GroupSpec, lo: usize, sums: &GroupSubset, cur: &mut Vec<usize>, best: &mut Vec<usize>) {
    if cur.len() > best.len() {
        *best = cur.clone();
    }
    for x in lo.max(1)..g.order() {
        // new subsums: old ones, old + x, and x itself
        let mut next = sums.clone();
        sums.translate_into(x, &mut next);
        next.insert(x);
        if next.contains(0) {
            continue;
        }
        cur.push(x);
        search(g, x, &next, cur, best);
        cur.pop();
    }
}
