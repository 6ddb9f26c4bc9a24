use super::{lcm, GroupSpec, GroupSubset, Subgroup};
use crate::error::{Error, Result};

// Quotients up to this order get the full Cayley-table homomorphism check.
const FULL_TABLE_CHECK_MAX: usize = 64;

/// `G/H` with an explicit coset table and an isomorphism onto a normalized spec.
#[derive(Clone, Debug)]
pub struct QuotientStructure {
    pub parent: GroupSpec,
    pub subgroup: Subgroup,
    /// Coset index of each element; cosets are numbered by their least element.
    pub coset_of: Vec<usize>,
    /// Least element of each coset.
    pub representatives: Vec<usize>,
    pub quotient_spec: GroupSpec,
    /// Coset index to element index of `quotient_spec`.
    pub iso: Vec<usize>,
    inverse: Vec<usize>,
}

impl QuotientStructure {
    /// `φ_H(x)` as an element of `quotient_spec`.
    pub fn project(&self, x: usize) -> usize {
        self.iso[self.coset_of[x]]
    }

    pub fn project_set(&self, a: &GroupSubset) -> GroupSubset {
        GroupSubset::from_indices(&self.quotient_spec, a.iter().map(|x| self.project(x)))
    }

    /// The least element of the coset mapped to `y`.
    pub fn lift(&self, y: usize) -> usize {
        self.representatives[self.inverse[y]]
    }

    /// `φ_H^{-1}(X)`.
    pub fn preimage(&self, x: &GroupSubset) -> GroupSubset {
        let mut out = GroupSubset::empty(&self.parent);
        for y in x.iter() {
            self.subgroup.carrier().translate_into(self.lift(y), &mut out);
        }
        out
    }

    pub fn index(&self) -> usize {
        self.quotient_spec.order()
    }
}

/// Invariant factors of an abstract abelian group on `[0, q)` with identity
/// `zero`, plus the isomorphism onto the normalized spec.
///
/// Repeatedly takes an element of maximal order modulo the span `U` of the
/// generators chosen so far and replaces it with a lift of the same true
/// order, so the generators form a basis with decreasing orders.
pub(crate) fn decompose_blackbox(
    q: usize,
    zero: usize,
    add: impl Fn(usize, usize) -> usize,
) -> Result<(GroupSpec, Vec<usize>)> {
    let mul = |k: usize, x: usize| (0..k).fold(zero, |acc, _| add(acc, x));
    let mut in_u = vec![false; q];
    in_u[zero] = true;
    let mut u_elems = vec![zero];
    let mut gens: Vec<(usize, usize)> = Vec::new();
    while u_elems.len() < q {
        let mut best = (0, zero);
        for x in 0..q {
            let mut k = 1;
            let mut y = x;
            while !in_u[y] {
                y = add(y, x);
                k += 1;
            }
            if k > best.0 {
                best = (k, x);
            }
        }
        let (m, x) = best;
        let lifted = u_elems
            .iter()
            .map(|&u| add(x, u))
            .find(|&y| mul(m, y) == zero)
            .ok_or_else(|| Error::internal("quotient_decompose", "no order-preserving lift"))?;
        // U <- U + <lifted>
        let mut next = Vec::with_capacity(u_elems.len() * m);
        let mut step = zero;
        for _ in 0..m {
            for &u in &u_elems {
                let y = add(u, step);
                if !in_u[y] {
                    next.push(y);
                }
            }
            step = add(step, lifted);
        }
        for &y in &next {
            in_u[y] = true;
        }
        u_elems.extend(next);
        gens.push((m, lifted));
    }
    gens.reverse();
    let factors: Vec<usize> = if gens.is_empty() { vec![1] } else { gens.iter().map(|g| g.0).collect() };
    let spec = GroupSpec::from_invariant_factors(&factors)
        .map_err(|e| Error::internal("quotient_decompose", e.to_string()))?;
    // iso: abstract element -> spec index, by walking coefficient tuples
    let mut iso = vec![usize::MAX; q];
    let mut abstract_of = vec![zero; spec.order()];
    for idx in 1..spec.order() {
        // build from the predecessor that differs in the lowest nonzero digit
        let coords = spec.coords(idx);
        let j = coords.iter().position(|&c| c != 0).expect("nonzero index");
        let stride: usize = spec.factors()[..j].iter().product();
        abstract_of[idx] = add(abstract_of[idx - stride], gens[j].1);
    }
    for (idx, &x) in abstract_of.iter().enumerate() {
        if iso[x] != usize::MAX {
            return Err(Error::internal("quotient_decompose", "generators are not independent"));
        }
        iso[x] = idx;
    }
    if q <= FULL_TABLE_CHECK_MAX {
        for a in 0..q {
            for b in 0..q {
                if iso[add(a, b)] != spec.add(iso[a], iso[b]) {
                    return Err(Error::internal("quotient_decompose", "iso is not a homomorphism"));
                }
            }
        }
    }
    Ok((spec, iso))
}

fn cosets(within: &GroupSubset, h: &Subgroup) -> (Vec<usize>, Vec<usize>) {
    let g = within.group();
    let mut coset_of = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in within.iter() {
        if coset_of[x] != usize::MAX {
            continue;
        }
        for d in h.carrier().iter() {
            coset_of[g.add(x, d)] = reps.len();
        }
        reps.push(x);
    }
    (coset_of, reps)
}

/// Coset table and invariant factors of `G/H`.
pub fn quotient_decompose(g: &GroupSpec, h: &Subgroup) -> Result<QuotientStructure> {
    if h.group() != g {
        return Err(Error::MismatchedGroups { left: g.to_string(), right: h.group().to_string() });
    }
    let (coset_of, representatives) = cosets(&GroupSubset::full(g), h);
    let (quotient_spec, iso) = decompose_blackbox(representatives.len(), 0, |a, b| {
        coset_of[g.add(representatives[a], representatives[b])]
    })?;
    let mut inverse = vec![0; iso.len()];
    for (c, &y) in iso.iter().enumerate() {
        inverse[y] = c;
    }
    Ok(QuotientStructure {
        parent: g.clone(),
        subgroup: h.clone(),
        coset_of,
        representatives,
        quotient_spec,
        iso,
        inverse,
    })
}

/// The normalized spec of `L/H` for subgroups `H <= L`.
pub fn section_spec(l: &Subgroup, h: &Subgroup) -> Result<GroupSpec> {
    if !h.is_subgroup_of(l) {
        return Err(Error::NotSubgroup(format!("{h:?} is not inside {l:?}")));
    }
    let g = l.group();
    let (coset_of, reps) = cosets(l.carrier(), h);
    let (spec, _) = decompose_blackbox(reps.len(), 0, |a, b| coset_of[g.add(reps[a], reps[b])])?;
    debug_assert_eq!(spec.exponent(), reps.iter().fold(1, |acc, &x| {
        let mut k = 1;
        let mut y = x;
        while !h.contains(y) {
            y = g.add(y, x);
            k += 1;
        }
        lcm(acc, k)
    }));
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{enumerate_subgroups, make_group, subgroup_generated};

    #[test]
    fn examples() {
        let c4 = make_group(&[4]).unwrap();
        let q = quotient_decompose(&c4, &Subgroup::trivial(&c4)).unwrap();
        assert_eq!(q.quotient_spec.factors(), &[4]);
        let h = subgroup_generated(&GroupSubset::singleton(&c4, 2));
        assert_eq!(quotient_decompose(&c4, &h).unwrap().quotient_spec.factors(), &[2]);
        let g = make_group(&[2, 4]).unwrap();
        let h = subgroup_generated(&GroupSubset::singleton(&g, g.index_of(&[0, 2]).unwrap()));
        assert_eq!(quotient_decompose(&g, &h).unwrap().quotient_spec.factors(), &[2, 2]);
        let full = quotient_decompose(&g, &Subgroup::full(&g)).unwrap();
        assert_eq!(full.quotient_spec.factors(), &[1]);
    }

    // The quotient's element-order histogram, computed on cosets directly,
    // must match the spec we produced.
    #[test]
    fn all_quotients_of_small_groups() {
        for f in [vec![12i64], vec![2, 6], vec![2, 2, 2], vec![4, 4], vec![3, 9], vec![2, 2, 4]] {
            let g = make_group(&f).unwrap();
            for h in enumerate_subgroups(&g, 4096).unwrap() {
                let q = quotient_decompose(&g, &h).unwrap();
                assert_eq!(q.quotient_spec.order() * h.order(), g.order());
                let mut hist_cosets = std::collections::BTreeMap::new();
                for &r in &q.representatives {
                    let mut k = 1;
                    let mut y = r;
                    while !h.contains(y) {
                        y = g.add(y, r);
                        k += 1;
                    }
                    *hist_cosets.entry(k).or_insert(0) += 1;
                }
                let spec = &q.quotient_spec;
                let mut hist_spec = std::collections::BTreeMap::new();
                for y in spec.elements() {
                    *hist_spec.entry(spec.element_order(y)).or_insert(0) += 1;
                }
                assert_eq!(hist_cosets, hist_spec, "{g} / {h:?}");
                for x in g.elements() {
                    for y in g.elements() {
                        assert_eq!(q.project(g.add(x, y)), spec.add(q.project(x), q.project(y)));
                    }
                    assert!(h.contains(g.sub(x, q.lift(q.project(x)))));
                }
                assert_eq!(section_spec(&Subgroup::full(&g), &h).unwrap(), *spec);
            }
        }
    }

    #[test]
    fn preimage_of_projection() {
        let g = make_group(&[8]).unwrap();
        let h = subgroup_generated(&GroupSubset::singleton(&g, 4));
        let q = quotient_decompose(&g, &h).unwrap();
        let a = GroupSubset::from_indices(&g, [1, 2]);
        assert_eq!(q.preimage(&q.project_set(&a)).to_vec(), vec![1, 2, 5, 6]);
    }

    #[test]
    fn section_inside_subgroup() {
        let g = make_group(&[2, 8]).unwrap();
        let l = subgroup_generated(&GroupSubset::from_indices(&g, [1, 2 * 2]));
        let h = subgroup_generated(&GroupSubset::singleton(&g, 2 * 4));
        // L = C2 x <2> = C2 x C4, H = <(0,4)>: L/H = C2 x C2
        assert_eq!(section_spec(&l, &h).unwrap().factors(), &[2, 2]);
        assert!(section_spec(&h, &l).is_err());
    }
}
