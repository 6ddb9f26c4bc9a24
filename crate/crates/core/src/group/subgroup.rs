use std::collections::HashSet;

use super::{GroupSpec, GroupSubset};
use crate::error::{Error, Result};

/// A subgroup, stored by its carrier set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    carrier: GroupSubset,
}

impl Subgroup {
    /// Wraps `carrier` after a full closure scan.
    pub fn new(carrier: GroupSubset) -> Result<Subgroup> {
        let g = carrier.group().clone();
        if !carrier.contains(0) {
            return Err(Error::NotSubgroup(format!("{carrier:?} misses 0")));
        }
        for a in carrier.iter() {
            if !carrier.contains(g.neg(a)) {
                return Err(Error::NotSubgroup(format!("{carrier:?} not closed under negation")));
            }
            for b in carrier.iter() {
                if b > a {
                    break;
                }
                if !carrier.contains(g.add(a, b)) {
                    return Err(Error::NotSubgroup(format!("{carrier:?} not closed under addition")));
                }
            }
        }
        Ok(Subgroup { carrier })
    }

    pub(crate) fn from_closed(carrier: GroupSubset) -> Subgroup {
        debug_assert!(carrier.contains(0));
        Subgroup { carrier }
    }

    pub fn trivial(g: &GroupSpec) -> Subgroup {
        Subgroup::from_closed(GroupSubset::singleton(g, 0))
    }

    pub fn full(g: &GroupSpec) -> Subgroup {
        Subgroup::from_closed(GroupSubset::full(g))
    }

    pub fn group(&self) -> &GroupSpec {
        self.carrier.group()
    }

    pub fn carrier(&self) -> &GroupSubset {
        &self.carrier
    }

    pub fn order(&self) -> usize {
        self.carrier.len()
    }

    pub fn index_in_group(&self) -> usize {
        self.group().order() / self.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_full(&self) -> bool {
        self.carrier.is_full()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.carrier.contains(x)
    }

    /// The coset `x + H`.
    pub fn coset(&self, x: usize) -> GroupSubset {
        self.carrier.translate(x)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.carrier.is_subset(&other.carrier)
    }

    /// `A + H`.
    pub fn saturate(&self, a: &GroupSubset) -> GroupSubset {
        a.sum_with(&self.carrier)
    }

    /// Exponent of the subgroup.
    pub fn exponent(&self) -> usize {
        let g = self.group();
        self.carrier.iter().fold(1, |acc, x| super::lcm(acc, g.element_order(x)))
    }
}

impl std::fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subgroup{:?}", self.carrier)
    }
}

/// `H(A) = {x : x + A = A}`.
pub fn stabilizer(a: &GroupSubset) -> Result<Subgroup> {
    let g = a.group();
    let a0 = a.min_element().ok_or(Error::Empty("stabilizer operand"))?;
    if a.is_full() {
        return Ok(Subgroup::full(g));
    }
    let mut h = GroupSubset::singleton(g, 0);
    // every period d satisfies a0 + d in A
    for x in a.iter().skip(1) {
        let d = g.sub(x, a0);
        if h.contains(d) {
            continue;
        }
        if a.iter().all(|y| a.contains(g.add(y, d))) {
            h.insert(d);
        }
    }
    Ok(Subgroup::from_closed(h))
}

/// `<A>_* = <A - a0>`, the smallest subgroup with `A` inside one of its cosets.
pub fn affine_span(a: &GroupSubset) -> Result<Subgroup> {
    let g = a.group();
    let a0 = a.min_element().ok_or(Error::Empty("affine span operand"))?;
    Ok(subgroup_generated(&GroupSubset::from_indices(
        g,
        a.iter().map(|x| g.sub(x, a0)),
    )))
}

/// The subgroup generated by `s`; `<∅> = {0}`.
pub fn subgroup_generated(s: &GroupSubset) -> Subgroup {
    let g = s.group();
    let mut h = GroupSubset::singleton(g, 0);
    for x in s.iter() {
        if h.contains(x) {
            continue;
        }
        let mut next = h.clone();
        let mut y = x;
        while !h.contains(y) {
            h.translate_into(y, &mut next);
            y = g.add(y, x);
        }
        h = next;
    }
    Subgroup::from_closed(h)
}

/// `H + K`.
pub fn join(h: &Subgroup, k: &Subgroup) -> Subgroup {
    Subgroup::from_closed(h.carrier.sum_with(&k.carrier))
}

/// All subgroups of `g`, sorted by size then lexicographically.
pub fn enumerate_subgroups(g: &GroupSpec, cap: usize) -> Result<Vec<Subgroup>> {
    if g.order() > cap {
        return Err(Error::CapExceeded { order: g.order(), cap });
    }
    let mut cyclic: Vec<Subgroup> = Vec::new();
    let mut seen: HashSet<Subgroup> = HashSet::new();
    for x in g.elements() {
        let c = subgroup_generated(&GroupSubset::singleton(g, x));
        if seen.insert(c.clone()) {
            cyclic.push(c);
        }
    }
    let mut all = cyclic.clone();
    let mut i = 0;
    while i < all.len() {
        let base = all[i].clone();
        for c in &cyclic {
            if c.is_subgroup_of(&base) {
                continue;
            }
            let j = join(&base, c);
            if seen.insert(j.clone()) {
                all.push(j);
            }
        }
        i += 1;
    }
    all.sort();
    Ok(all)
}

/// `(d*(G), exp(G))`.
pub fn group_params(g: &GroupSpec) -> (usize, usize) {
    (g.d_star(), g.exponent())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{make_group, sumset};

    fn set(g: &GroupSpec, xs: &[usize]) -> GroupSubset {
        GroupSubset::from_indices(g, xs.iter().copied())
    }

    #[test]
    fn stabilizer_examples() {
        let c6 = make_group(&[6]).unwrap();
        assert!(stabilizer(&set(&c6, &[0])).unwrap().is_trivial());
        assert!(stabilizer(&GroupSubset::full(&c6)).unwrap().is_full());
        assert_eq!(stabilizer(&set(&c6, &[0, 2, 4])).unwrap().carrier().to_vec(), vec![0, 2, 4]);
        assert_eq!(stabilizer(&set(&c6, &[1, 4, 2, 5])).unwrap().carrier().to_vec(), vec![0, 3]);
        assert!(stabilizer(&set(&c6, &[])).is_err());
    }

    #[test]
    fn span_examples() {
        let c6 = make_group(&[6]).unwrap();
        assert!(affine_span(&set(&c6, &[4])).unwrap().is_trivial());
        assert!(affine_span(&set(&c6, &[0, 1])).unwrap().is_full());
        let c8 = make_group(&[8]).unwrap();
        assert_eq!(affine_span(&set(&c8, &[1, 3])).unwrap().carrier().to_vec(), vec![0, 2, 4, 6]);
    }

    #[test]
    fn generated_examples() {
        let c8 = make_group(&[8]).unwrap();
        assert!(subgroup_generated(&set(&c8, &[])).is_trivial());
        assert_eq!(subgroup_generated(&set(&c8, &[2])).carrier().to_vec(), vec![0, 2, 4, 6]);
        let v4 = make_group(&[2, 2]).unwrap();
        assert!(subgroup_generated(&set(&v4, &[1, 2])).is_full());
        let g = make_group(&[2, 4]).unwrap();
        let h = subgroup_generated(&set(&g, &[1, 2]));
        assert!(Subgroup::new(h.carrier().clone()).is_ok());
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate_subgroups(&make_group(&[1]).unwrap(), 4096).unwrap().len(), 1);
        let c4 = make_group(&[4]).unwrap();
        let subs: Vec<Vec<usize>> = enumerate_subgroups(&c4, 4096)
            .unwrap()
            .iter()
            .map(|h| h.carrier().to_vec())
            .collect();
        assert_eq!(subs, vec![vec![0], vec![0, 2], vec![0, 1, 2, 3]]);
        assert_eq!(enumerate_subgroups(&make_group(&[2, 2]).unwrap(), 4096).unwrap().len(), 5);
        // C2^3 has 16 subgroups, C2xC4 has 8, C12 has 6, C3xC3 has 6
        assert_eq!(enumerate_subgroups(&make_group(&[2, 2, 2]).unwrap(), 4096).unwrap().len(), 16);
        assert_eq!(enumerate_subgroups(&make_group(&[2, 4]).unwrap(), 4096).unwrap().len(), 8);
        assert_eq!(enumerate_subgroups(&make_group(&[12]).unwrap(), 4096).unwrap().len(), 6);
        assert_eq!(enumerate_subgroups(&make_group(&[3, 3]).unwrap(), 4096).unwrap().len(), 6);
        assert!(matches!(
            enumerate_subgroups(&make_group(&[32]).unwrap(), 16),
            Err(Error::CapExceeded { .. })
        ));
    }

    // Oracle: a subset is a subgroup iff it passes the closure scan.
    #[test]
    fn enumerate_matches_bruteforce_closure() {
        for f in [vec![6i64], vec![2, 2], vec![8], vec![2, 4]] {
            let g = make_group(&f).unwrap();
            let q = g.order();
            let brute = (0u32..1 << q)
                .filter(|mask| mask & 1 == 1)
                .filter(|&mask| {
                    let s = GroupSubset::from_indices(&g, (0..q).filter(|i| mask >> i & 1 == 1));
                    Subgroup::new(s).is_ok()
                })
                .count();
            assert_eq!(enumerate_subgroups(&g, 4096).unwrap().len(), brute, "{g}");
        }
    }

    #[test]
    fn stabilizer_is_translation_invariant_and_periodic() {
        let g = make_group(&[2, 6]).unwrap();
        for mask in (1u32..1 << 12).step_by(7) {
            let a = GroupSubset::from_indices(&g, (0..12).filter(|i| mask >> i & 1 == 1));
            let h = stabilizer(&a).unwrap();
            assert!(Subgroup::new(h.carrier().clone()).is_ok());
            assert_eq!(sumset(&a, h.carrier()).unwrap(), a);
            for x in g.elements() {
                assert_eq!(stabilizer(&a.translate(x)).unwrap(), h);
            }
            let span = affine_span(&a).unwrap();
            let a0 = a.min_element().unwrap();
            assert!(a.is_subset(&span.coset(a0)));
        }
    }
}
