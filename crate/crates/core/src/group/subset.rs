use std::fmt;
use std::hash::{Hash, Hasher};

use super::GroupSpec;
use crate::error::{Error, Result};

/// A subset of a finite abelian group as a dense bit vector over element indices.
#[derive(Clone)]
pub struct GroupSubset {
    group: GroupSpec,
    words: Vec<u64>,
    len: usize,
}

impl GroupSubset {
    pub fn empty(group: &GroupSpec) -> GroupSubset {
        GroupSubset {
            group: group.clone(),
            words: vec![0; group.order().div_ceil(64)],
            len: 0,
        }
    }

    pub fn full(group: &GroupSpec) -> GroupSubset {
        let mut s = GroupSubset::empty(group);
        for x in group.elements() {
            s.insert(x);
        }
        s
    }

    pub fn singleton(group: &GroupSpec, x: usize) -> GroupSubset {
        let mut s = GroupSubset::empty(group);
        s.insert(x);
        s
    }

    pub fn from_indices(group: &GroupSpec, items: impl IntoIterator<Item = usize>) -> GroupSubset {
        let mut s = GroupSubset::empty(group);
        for x in items {
            s.insert(x);
        }
        s
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_full(&self) -> bool {
        self.len == self.group.order()
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        x < self.group.order() && self.words[x >> 6] >> (x & 63) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, x: usize) -> bool {
        assert!(x < self.group.order(), "element {x} outside group {}", self.group);
        let w = &mut self.words[x >> 6];
        let bit = 1u64 << (x & 63);
        let fresh = *w & bit == 0;
        *w |= bit;
        self.len += fresh as usize;
        fresh
    }

    pub fn remove(&mut self, x: usize) -> bool {
        if !self.contains(x) {
            return false;
        }
        self.words[x >> 6] &= !(1u64 << (x & 63));
        self.len -= 1;
        true
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + t)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn min_element(&self) -> Option<usize> {
        self.iter().next()
    }

    fn recount(&mut self) {
        self.len = self.words.iter().map(|w| w.count_ones() as usize).sum();
    }

    fn check_same(&self, other: &GroupSubset) -> Result<()> {
        if self.group != other.group {
            return Err(Error::MismatchedGroups {
                left: self.group.to_string(),
                right: other.group.to_string(),
            });
        }
        Ok(())
    }

    pub fn union_with(&mut self, other: &GroupSubset) {
        debug_assert_eq!(self.group, other.group);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
        self.recount();
    }

    pub fn intersect_with(&mut self, other: &GroupSubset) {
        debug_assert_eq!(self.group, other.group);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
        self.recount();
    }

    pub fn difference_with(&mut self, other: &GroupSubset) {
        debug_assert_eq!(self.group, other.group);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
        self.recount();
    }

    pub fn union(&self, other: &GroupSubset) -> GroupSubset {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &GroupSubset) -> GroupSubset {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &GroupSubset) -> GroupSubset {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn is_subset(&self, other: &GroupSubset) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &GroupSubset) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// ORs `self + g` into `dst`.
    pub(crate) fn translate_into(&self, g: usize, dst: &mut GroupSubset) {
        let q = self.group.order();
        match self.group.add_table() {
            Some(t) => {
                let row = &t[..];
                for x in self.iter() {
                    let y = row[x * q + g] as usize;
                    dst.words[y >> 6] |= 1u64 << (y & 63);
                }
            }
            None => {
                for x in self.iter() {
                    let y = self.group.add(x, g);
                    dst.words[y >> 6] |= 1u64 << (y & 63);
                }
            }
        }
        dst.recount();
    }

    /// `g + A`.
    pub fn translate(&self, g: usize) -> GroupSubset {
        let mut out = GroupSubset::empty(&self.group);
        self.translate_into(g, &mut out);
        out
    }

    /// `-A`.
    pub fn negate(&self) -> GroupSubset {
        GroupSubset::from_indices(&self.group, self.iter().map(|x| self.group.neg(x)))
    }

    /// `A + B`, with empty operands producing the empty set.
    pub(crate) fn sum_with(&self, other: &GroupSubset) -> GroupSubset {
        let (small, large) = if self.len <= other.len { (self, other) } else { (other, self) };
        let mut out = GroupSubset::empty(&self.group);
        for a in small.iter() {
            large.translate_into(a, &mut out);
            if out.is_full() {
                break;
            }
        }
        out
    }

    /// `A + H == A`, i.e. `A` is a union of `H`-cosets.
    pub fn is_periodic_under(&self, h: &GroupSubset) -> bool {
        h.iter().all(|d| self.iter().all(|a| self.contains(self.group.add(a, d))))
    }
}

impl PartialEq for GroupSubset {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.words == other.words
    }
}

impl Eq for GroupSubset {}

impl Hash for GroupSubset {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.words.hash(state);
    }
}

impl PartialOrd for GroupSubset {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by size, then lexicographically by the ascending element list.
impl Ord for GroupSubset {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len
            .cmp(&other.len)
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl fmt::Debug for GroupSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// The sumset `A + B = {a + b}`.
pub fn sumset(a: &GroupSubset, b: &GroupSubset) -> Result<GroupSubset> {
    a.check_same(b)?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty("sumset operand"));
    }
    Ok(a.sum_with(b))
}

/// The `n`-fold sumset `nA`, with `0A = {0}`.
///
/// Stops early once `iA` fills a whole coset of the affine span of `A`;
/// from then on `jA = j*a0 + <A>_*`.
pub fn iterated_sumset(a: &GroupSubset, n: usize) -> Result<GroupSubset> {
    let g = a.group();
    if n == 0 {
        return Ok(GroupSubset::singleton(g, 0));
    }
    if a.is_empty() {
        return Err(Error::Empty("iterated sumset operand"));
    }
    let span = super::affine_span(a)?;
    let a0 = a.min_element().expect("nonempty");
    let mut cur = a.clone();
    for i in 1..n {
        if cur.len() == span.order() {
            return Ok(span.carrier().translate(g.mul(n, a0)));
        }
        let _ = i;
        cur = cur.sum_with(a);
    }
    Ok(cur)
}

/// `r_{A1+...+An}(x)` for every `x`, by convolving count vectors.
pub fn representation_counts(summands: &[GroupSubset]) -> Result<Vec<u64>> {
    let first = summands.first().ok_or(Error::Empty("summand list"))?;
    let g = first.group().clone();
    for s in summands {
        first.check_same(s)?;
    }
    let mut counts = vec![0u64; g.order()];
    counts[0] = 1;
    for s in summands {
        let mut next = vec![0u64; g.order()];
        for (x, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for a in s.iter() {
                let y = g.add(x, a);
                next[y] = next[y].saturating_add(c);
            }
        }
        counts = next;
    }
    Ok(counts)
}

/// Number of tuples `(a1, ..., an)` in `A1 x ... x An` summing to `x`.
pub fn representation_count(summands: &[GroupSubset], x: usize) -> Result<u64> {
    let counts = representation_counts(summands)?;
    counts.get(x).copied().ok_or(Error::OutOfRange {
        what: "element",
        value: x as i64,
        lo: 0,
        hi: counts.len() as i64 - 1,
    })
}
