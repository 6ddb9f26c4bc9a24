use super::{nterm_subsum_rows, push_forward, GSequence};
use crate::error::{Error, Result};
use crate::group::{quotient_decompose, stabilizer, GroupSubset, QuotientStructure, Subgroup};

/// Coset bookkeeping for `Σ_n(S)` relative to its stabilizer `H`.
#[derive(Clone, Debug)]
pub struct SubsumProfile {
    pub n: usize,
    pub ref_len: usize,
    pub sums: GroupSubset,
    /// `H = H(Σ_n(S))`.
    pub stabilizer: Subgroup,
    pub quotient: QuotientStructure,
    /// Cosets holding at least `n` terms of `S`, as a subset of `G/H`.
    pub heavy_cosets: GroupSubset,
    /// Union of the heavy cosets, as a subset of `G`.
    pub heavy_preimage: GroupSubset,
    /// Number of terms of `S` outside the heavy cosets.
    pub outside: usize,
    /// `|X||H|n + e - ref_len`.
    pub holes: i64,
    /// `((N-1)n + e + 1)|H|`.
    pub bound_cosets: i64,
    /// `(Σ_x min(n, v_x(φ_H(S))) - n + 1)|H|`.
    pub bound_min: i64,
}

impl SubsumProfile {
    pub fn heavy_count(&self) -> usize {
        self.heavy_cosets.len()
    }

    /// `(|S| - n + 1) - (n - e - 1)(|H| - 1) + ρ`, the Kneser-style form of the bound.
    pub fn bound_kneser(&self, seq_len: usize) -> i64 {
        let n = self.n as i64;
        let e = self.outside as i64;
        let h = self.stabilizer.order() as i64;
        (seq_len as i64 - n + 1) - (n - e - 1) * (h - 1) + self.holes
    }
}

/// Computes `H`, the heavy cosets and the hole count for `(S, n)`.
///
/// `ref_len` is the length the hole count is measured against: `|S|` for the
/// plain subsum bound, `|S'|` when a shorter subsequence is being partitioned.
pub fn subsum_profile(s: &GSequence, n: usize, ref_len: usize) -> Result<SubsumProfile> {
    if n == 0 || n > s.len() {
        return Err(Error::OutOfRange { what: "n", value: n as i64, lo: 1, hi: s.len() as i64 });
    }
    let rows = nterm_subsum_rows(s, n)?;
    let sums = rows.into_iter().next_back().expect("rows");
    profile_from_sums(s, n, ref_len, sums)
}

pub(crate) fn profile_from_sums(s: &GSequence, n: usize, ref_len: usize, sums: GroupSubset) -> Result<SubsumProfile> {
    let g = s.group();
    let h = stabilizer(&sums)?;
    let quotient = quotient_decompose(g, &h)?;
    let image = push_forward(s, &quotient)?;
    let qspec = &quotient.quotient_spec;
    let heavy_cosets =
        GroupSubset::from_indices(qspec, image.distinct().filter(|&(_, v)| v as usize >= n).map(|(x, _)| x));
    let heavy_preimage = quotient.preimage(&heavy_cosets);
    let outside = s.count_outside(&heavy_preimage);
    let big_n = heavy_cosets.len() as i64;
    let hsize = h.order() as i64;
    let ni = n as i64;
    let e = outside as i64;
    let holes = big_n * hsize * ni + e - ref_len as i64;
    let bound_cosets = ((big_n - 1) * ni + e + 1) * hsize;
    let min_sum: i64 = image.distinct().map(|(_, v)| (v as i64).min(ni)).sum();
    let bound_min = (min_sum - ni + 1) * hsize;
    Ok(SubsumProfile {
        n,
        ref_len,
        sums,
        stabilizer: h,
        quotient,
        heavy_cosets,
        heavy_preimage,
        outside,
        holes,
        bound_cosets,
        bound_min,
    })
}

/// `S*`: every term in a heavy coset raised to multiplicity exactly `n`.
///
/// Requires a profile of `(S, n)` with `ref_len = |S|` and `h(S) <= n`.
/// Checks `S | S*`, `|S*| = |S| + ρ` and `Σ_n(S*) = Σ_n(S)` before returning.
pub fn build_s_star(s: &GSequence, profile: &SubsumProfile, n: usize) -> Result<GSequence> {
    if profile.n != n || profile.ref_len != s.len() || profile.sums.group() != s.group() {
        return Err(Error::Precondition("profile does not belong to this sequence".into()));
    }
    if profile.outside != s.count_outside(&profile.heavy_preimage) {
        return Err(Error::Precondition("profile does not belong to this sequence".into()));
    }
    if s.height() as usize > n {
        return Err(Error::Precondition(format!("h(S) = {} exceeds n = {n}", s.height())));
    }
    let mut mult = s.mults().to_vec();
    for z in profile.heavy_preimage.iter() {
        mult[z] = n as u32;
    }
    let star = GSequence::from_mults(s.group(), mult)?;
    if !s.divides(&star) {
        return Err(Error::internal("build_s_star", "S does not divide S*"));
    }
    if star.len() as i64 != s.len() as i64 + profile.holes {
        return Err(Error::internal(
            "build_s_star",
            format!("|S*| = {} but |S| + rho = {}", star.len(), s.len() as i64 + profile.holes),
        ));
    }
    if super::nterm_subsums(&star, n)? != profile.sums {
        return Err(Error::internal("build_s_star", "Σ_n(S*) differs from Σ_n(S)"));
    }
    Ok(star)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_group;
    use crate::sequence::oracle::brute_nterm;

    fn seq(g: &crate::group::GroupSpec, items: &[(usize, u32)]) -> GSequence {
        let mut s = GSequence::empty(g);
        for &(x, v) in items {
            s.push(x, v);
        }
        s
    }

    #[test]
    fn example_a_in_c8() {
        let c8 = make_group(&[8]).unwrap();
        let s = seq(&c8, &[(0, 2), (4, 2), (1, 2), (5, 2)]);
        let p = subsum_profile(&s, 2, 8).unwrap();
        assert_eq!(p.stabilizer.carrier().to_vec(), vec![0, 4]);
        assert_eq!((p.heavy_count(), p.outside, p.holes), (2, 0, 0));
        assert_eq!((p.bound_cosets, p.bound_min), (6, 6));
        assert_eq!(p.bound_kneser(8), 6);
        assert_eq!(build_s_star(&s, &p, 2).unwrap(), s);
    }

    #[test]
    fn constant_sequence() {
        let c5 = make_group(&[5]).unwrap();
        let s = seq(&c5, &[(0, 3)]);
        let p = subsum_profile(&s, 3, 3).unwrap();
        assert!(p.stabilizer.is_trivial());
        assert_eq!(p.heavy_preimage.to_vec(), vec![0]);
        assert_eq!((p.outside, p.holes), (0, 0));
    }

    #[test]
    fn c4_subgroup_sequence() {
        let c4 = make_group(&[4]).unwrap();
        let s = seq(&c4, &[(0, 5), (2, 5)]);
        let p = subsum_profile(&s, 5, 10).unwrap();
        assert_eq!(p.stabilizer.carrier().to_vec(), vec![0, 2]);
        assert_eq!((p.heavy_count(), p.outside, p.holes), (1, 0, 0));
    }

    #[test]
    fn s_star_raises_multiplicity() {
        let c4 = make_group(&[4]).unwrap();
        let s = seq(&c4, &[(0, 3), (2, 5)]);
        let p = subsum_profile(&s, 5, 8).unwrap();
        let star = build_s_star(&s, &p, 5).unwrap();
        assert_eq!(star.mult(0), 5);
        assert_eq!(star.len() as i64, 8 + p.holes);
        assert_eq!(brute_nterm(&star, 5), brute_nterm(&s, 5));
    }

    #[test]
    fn s_star_rejects_mismatch() {
        let c4 = make_group(&[4]).unwrap();
        let s = seq(&c4, &[(0, 3), (2, 5)]);
        let p = subsum_profile(&s, 5, 8).unwrap();
        assert!(build_s_star(&s, &p, 4).is_err());
        let other = seq(&c4, &[(1, 3), (2, 5)]);
        assert!(build_s_star(&other, &p, 5).is_err());
        let tall = seq(&c4, &[(0, 7), (1, 1)]);
        let p = subsum_profile(&tall, 5, 8).unwrap();
        assert!(matches!(build_s_star(&tall, &p, 5), Err(Error::Precondition(_))));
    }

    #[test]
    fn out_of_range() {
        let c4 = make_group(&[4]).unwrap();
        let s = seq(&c4, &[(0, 3)]);
        assert!(subsum_profile(&s, 0, 3).is_err());
        assert!(subsum_profile(&s, 4, 3).is_err());
    }
}
