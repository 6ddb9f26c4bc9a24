//! Sequences over a group, stored as multiplicity vectors, and their subsum sets.

mod davenport;
mod profile;

pub use davenport::{davenport_bruteforce, DavenportResult, DAVENPORT_ORDER_CAP};
pub use profile::{build_s_star, subsum_profile, SubsumProfile};
pub(crate) use profile::profile_from_sums;

use std::fmt;

use crate::error::{Error, Result};
use crate::group::{GroupSpec, GroupSubset, QuotientStructure};

/// A finite multiset of group elements.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GSequence {
    group: GroupSpec,
    mult: Vec<u32>,
    len: usize,
}

impl GSequence {
    pub fn empty(group: &GroupSpec) -> GSequence {
        GSequence { group: group.clone(), mult: vec![0; group.order()], len: 0 }
    }

    pub fn from_mults(group: &GroupSpec, mult: Vec<u32>) -> Result<GSequence> {
        if mult.len() != group.order() {
            return Err(Error::Precondition(format!(
                "multiplicity vector has length {}, group has order {}",
                mult.len(),
                group.order()
            )));
        }
        let len = mult.iter().map(|&v| v as usize).sum();
        Ok(GSequence { group: group.clone(), mult, len })
    }

    pub fn from_terms(group: &GroupSpec, terms: impl IntoIterator<Item = usize>) -> GSequence {
        let mut s = GSequence::empty(group);
        for x in terms {
            s.push(x, 1);
        }
        s
    }

    /// `g^[k]`.
    pub fn repeated(group: &GroupSpec, g: usize, k: u32) -> GSequence {
        let mut s = GSequence::empty(group);
        s.push(g, k);
        s
    }

    pub fn push(&mut self, x: usize, k: u32) {
        self.mult[x] += k;
        self.len += k as usize;
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

    /// `v_x(S)`.
    pub fn mult(&self, x: usize) -> u32 {
        self.mult[x]
    }

    pub fn mults(&self) -> &[u32] {
        &self.mult
    }

    /// Distinct terms with their multiplicities, ascending.
    pub fn distinct(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.mult.iter().enumerate().filter(|(_, &v)| v > 0).map(|(x, &v)| (x, v))
    }

    /// All terms with repetition, ascending.
    pub fn terms(&self) -> impl Iterator<Item = usize> + '_ {
        self.distinct().flat_map(|(x, v)| std::iter::repeat_n(x, v as usize))
    }

    pub fn support(&self) -> GroupSubset {
        GroupSubset::from_indices(&self.group, self.distinct().map(|(x, _)| x))
    }

    /// `h(S)`, 0 for the empty sequence.
    pub fn height(&self) -> u32 {
        self.mult.iter().copied().max().unwrap_or(0)
    }

    /// `σ(S)`.
    pub fn sigma(&self) -> usize {
        self.distinct().fold(0, |acc, (x, v)| self.group.add(acc, self.group.mul(v as usize, x)))
    }

    /// `T | S`.
    pub fn divides(&self, other: &GSequence) -> bool {
        self.group == other.group && self.mult.iter().zip(&other.mult).all(|(a, b)| a <= b)
    }

    /// `T^[-1] S` with `self = T` and `other = S`.
    pub fn remove_from(&self, other: &GSequence) -> Result<GSequence> {
        if !self.divides(other) {
            return Err(Error::Precondition("subsequence does not divide the sequence".into()));
        }
        let mult = other.mult.iter().zip(&self.mult).map(|(b, a)| b - a).collect();
        GSequence::from_mults(&self.group, mult)
    }

    pub fn concat(&self, other: &GSequence) -> GSequence {
        debug_assert_eq!(self.group, other.group);
        let mult: Vec<u32> = self.mult.iter().zip(&other.mult).map(|(a, b)| a + b).collect();
        GSequence { group: self.group.clone(), mult, len: self.len + other.len }
    }

    /// Every term shifted by `g`.
    pub fn translate(&self, g: usize) -> GSequence {
        let mut s = GSequence::empty(&self.group);
        for (x, v) in self.distinct() {
            s.push(self.group.add(x, g), v);
        }
        s
    }

    /// The subsequence of terms lying in `set`.
    pub fn restrict(&self, set: &GroupSubset) -> GSequence {
        let mut s = GSequence::empty(&self.group);
        for (x, v) in self.distinct().filter(|&(x, _)| set.contains(x)) {
            s.push(x, v);
        }
        s
    }

    /// Number of terms lying outside `set`.
    pub fn count_outside(&self, set: &GroupSubset) -> usize {
        self.distinct().filter(|&(x, _)| !set.contains(x)).map(|(_, v)| v as usize).sum()
    }
}

impl fmt::Debug for GSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .distinct()
            .map(|(x, v)| if v == 1 { x.to_string() } else { format!("{x}^{v}") })
            .collect();
        write!(f, "[{}]", parts.join(";"))
    }
}

/// `(σ(S), h(S), supp(S))`.
pub fn seq_stats(s: &GSequence) -> (usize, u32, GroupSubset) {
    (s.sigma(), s.height(), s.support())
}

/// `Σ_0(S), ..., Σ_n(S)` in one pass.
///
/// Row `j` holds the sums of `j`-term subsequences of the terms processed so
/// far; each distinct element is a bounded knapsack item with `min(v, n)`
/// copies.
pub fn nterm_subsum_rows(s: &GSequence, n: usize) -> Result<Vec<GroupSubset>> {
    if n > s.len() {
        return Err(Error::OutOfRange { what: "n", value: n as i64, lo: 0, hi: s.len() as i64 });
    }
    let g = s.group();
    let mut rows = vec![GroupSubset::empty(g); n + 1];
    rows[0].insert(0);
    let mut seen = 0usize;
    for (x, v) in s.distinct() {
        seen += v as usize;
        let top = n.min(seen);
        for j in (1..=top).rev() {
            let mut acc = rows[j].clone();
            let mut shift = 0;
            for t in 1..=(v as usize).min(j) {
                shift = g.add(shift, x);
                if acc.is_full() {
                    break;
                }
                rows[j - t].translate_into(shift, &mut acc);
            }
            rows[j] = acc;
        }
    }
    Ok(rows)
}

/// `Σ_n(S)`, the sums of all `n`-term subsequences.
pub fn nterm_subsums(s: &GSequence, n: usize) -> Result<GroupSubset> {
    Ok(nterm_subsum_rows(s, n)?.pop().expect("n + 1 rows"))
}

/// `Σ(S)`, the sums of all nonempty subsequences.
pub fn all_subsums(s: &GSequence) -> Result<GroupSubset> {
    if s.is_empty() {
        return Err(Error::Empty("sequence"));
    }
    let rows = nterm_subsum_rows(s, s.len())?;
    let mut out = GroupSubset::empty(s.group());
    for r in &rows[1..] {
        out.union_with(r);
    }
    Ok(out)
}

/// `φ_H(S)` as a sequence over `G/H`.
pub fn push_forward(s: &GSequence, q: &QuotientStructure) -> Result<GSequence> {
    if s.group() != &q.parent {
        return Err(Error::MismatchedGroups { left: s.group().to_string(), right: q.parent.to_string() });
    }
    let mut out = GSequence::empty(&q.quotient_spec);
    for (x, v) in s.distinct() {
        out.push(q.project(x), v);
    }
    Ok(out)
}


#[cfg(test)]
mod tests {
    use super::oracle::brute_nterm;
    use super::*;
    use crate::group::{make_group, quotient_decompose, subgroup_generated, Subgroup};
    use proptest::prelude::*;

    fn seq(g: &GroupSpec, items: &[(usize, u32)]) -> GSequence {
        let mut s = GSequence::empty(g);
        for &(x, v) in items {
            s.push(x, v);
        }
        s
    }

    #[test]
    fn stats() {
        let c3 = make_group(&[3]).unwrap();
        let (sigma, h, supp) = seq_stats(&GSequence::empty(&c3));
        assert_eq!((sigma, h, supp.len()), (0, 0, 0));
        let s = seq(&c3, &[(1, 3)]);
        let (sigma, h, supp) = seq_stats(&s);
        assert_eq!((sigma, h, supp.to_vec()), (0, 3, vec![1]));
        let c7 = make_group(&[7]).unwrap();
        assert_eq!(GSequence::repeated(&c7, 3, 5).sigma(), 1);
    }

    #[test]
    fn nterm_examples() {
        let c8 = make_group(&[8]).unwrap();
        assert_eq!(nterm_subsums(&seq(&c8, &[(0, 4)]), 4).unwrap().to_vec(), vec![0]);
        let s = seq(&c8, &[(0, 2), (4, 2), (1, 2), (5, 2)]);
        assert_eq!(nterm_subsums(&s, 2).unwrap().to_vec(), vec![0, 1, 2, 4, 5, 6]);
        let c5 = make_group(&[5]).unwrap();
        assert_eq!(nterm_subsums(&seq(&c5, &[(1, 2), (2, 1)]), 2).unwrap().to_vec(), vec![2, 3]);
        assert!(nterm_subsums(&seq(&c5, &[(1, 2)]), 3).is_err());
        assert_eq!(nterm_subsums(&GSequence::empty(&c5), 0).unwrap().to_vec(), vec![0]);
    }

    #[test]
    fn all_subsums_examples() {
        let c4 = make_group(&[4]).unwrap();
        assert_eq!(all_subsums(&seq(&c4, &[(0, 3)])).unwrap().to_vec(), vec![0]);
        assert_eq!(all_subsums(&seq(&c4, &[(1, 1), (2, 1)])).unwrap().to_vec(), vec![1, 2, 3]);
        let c2 = make_group(&[2]).unwrap();
        assert_eq!(all_subsums(&seq(&c2, &[(1, 2)])).unwrap().to_vec(), vec![0, 1]);
        assert!(all_subsums(&GSequence::empty(&c2)).is_err());
    }

    #[test]
    fn push_forward_examples() {
        let c8 = make_group(&[8]).unwrap();
        let s = seq(&c8, &[(0, 2), (4, 2)]);
        let q = quotient_decompose(&c8, &Subgroup::trivial(&c8)).unwrap();
        assert_eq!(push_forward(&s, &q).unwrap().mults(), s.mults());
        let h = subgroup_generated(&GroupSubset::singleton(&c8, 4));
        let q = quotient_decompose(&c8, &h).unwrap();
        let p = push_forward(&s, &q).unwrap();
        assert_eq!((p.len(), p.mult(0)), (4, 4));
        let c4 = make_group(&[4]).unwrap();
        let h = subgroup_generated(&GroupSubset::singleton(&c4, 2));
        let q = quotient_decompose(&c4, &h).unwrap();
        let p = push_forward(&seq(&c4, &[(1, 1), (2, 1), (3, 1)]), &q).unwrap();
        assert_eq!((p.mult(1), p.mult(0)), (2, 1));
    }

    #[test]
    fn divides_and_remove() {
        let c4 = make_group(&[4]).unwrap();
        let s = seq(&c4, &[(0, 3), (1, 1)]);
        let t = seq(&c4, &[(0, 2)]);
        assert!(t.divides(&s) && !s.divides(&t));
        let r = t.remove_from(&s).unwrap();
        assert_eq!(r, seq(&c4, &[(0, 1), (1, 1)]));
        assert!(s.remove_from(&t).is_err());
    }

    // every multiset of length <= 6 over C6 and C2xC2
    #[test]
    fn dp_matches_bruteforce_small_exhaustive() {
        for f in [vec![6i64], vec![2, 2], vec![5]] {
            let g = make_group(&f).unwrap();
            let q = g.order();
            let mut stack = vec![(GSequence::empty(&g), 0usize)];
            while let Some((s, lo)) = stack.pop() {
                for n in 0..=s.len() {
                    assert_eq!(nterm_subsums(&s, n).unwrap(), brute_nterm(&s, n), "{s:?} n={n}");
                }
                if s.len() < 6 {
                    for x in lo..q {
                        let mut t = s.clone();
                        t.push(x, 1);
                        stack.push((t, x));
                    }
                }
            }
        }
    }

    fn arb_instance() -> impl Strategy<Value = (Vec<i64>, Vec<u32>)> {
        prop_oneof![
            (2i64..=12).prop_map(|m| vec![m]),
            Just(vec![2, 2]),
            Just(vec![2, 4]),
            Just(vec![3, 3]),
            Just(vec![2, 6]),
        ]
        .prop_flat_map(|f| {
            let q: usize = f.iter().product::<i64>() as usize;
            (Just(f), proptest::collection::vec(0u32..=3, q))
        })
    }

    proptest! {
        #[test]
        fn complement_symmetry((f, mult) in arb_instance()) {
            let g = make_group(&f).unwrap();
            let s = GSequence::from_mults(&g, mult).unwrap();
            let rows = nterm_subsum_rows(&s, s.len()).unwrap();
            let sigma = s.sigma();
            for n in 0..=s.len() {
                let other = &rows[s.len() - n];
                let mirrored = GroupSubset::from_indices(&g, other.iter().map(|x| g.sub(sigma, x)));
                prop_assert_eq!(&rows[n], &mirrored);
            }
        }

        #[test]
        fn dp_matches_bruteforce((f, mult) in arb_instance(), n in 0usize..8) {
            let g = make_group(&f).unwrap();
            let s = GSequence::from_mults(&g, mult).unwrap();
            let n = n.min(s.len());
            prop_assert_eq!(nterm_subsums(&s, n).unwrap(), brute_nterm(&s, n));
        }

        #[test]
        fn push_forward_preserves_length_and_support((f, mult) in arb_instance(), pick in 0usize..64) {
            let g = make_group(&f).unwrap();
            let s = GSequence::from_mults(&g, mult).unwrap();
            let subs = crate::group::enumerate_subgroups(&g, 4096).unwrap();
            let h = &subs[pick % subs.len()];
            let q = quotient_decompose(&g, h).unwrap();
            let p = push_forward(&s, &q).unwrap();
            prop_assert_eq!(p.len(), s.len());
            prop_assert_eq!(p.support(), q.project_set(&s.support()));
        }
    }
}
