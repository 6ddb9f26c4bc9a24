use super::check_partitionable;
use crate::error::{Error, Result};
use crate::sequence::GSequence;

/// Greedy subsequence of `s`: ascending elements, each capped at `cap`
/// copies, stopping at `len_cap` terms. It has maximum length among
/// subsequences with height `<= cap` and length `<= len_cap`.
pub fn greedy_capped(s: &GSequence, cap: u32, len_cap: usize) -> GSequence {
    let mut out = GSequence::empty(s.group());
    let mut left = len_cap;
    for (x, v) in s.distinct() {
        if left == 0 {
            break;
        }
        let take = v.min(cap).min(left as u32);
        out.push(x, take);
        left -= take as usize;
    }
    out
}

/// Splits a length-`|S'|` budget into a `k`-partitionable `T | S` and an
/// `(n-k)`-partitionable `T' | T^[-1] S` with `|T| + |T'| = |S'|`.
///
/// `T` is a longest subsequence with `h(T) <= k <= |T|` and
/// `|T| <= |S'| - (n - k)`, found greedily.
pub fn complete_split(s: &GSequence, s_prime: &GSequence, n: usize, k: usize) -> Result<(GSequence, GSequence)> {
    if !s_prime.divides(s) {
        return Err(Error::Precondition("S' does not divide S".into()));
    }
    check_partitionable(s_prime, n, "S'")?;
    if k == 0 || k > n {
        return Err(Error::OutOfRange { what: "k", value: k as i64, lo: 1, hi: n as i64 });
    }
    let t = greedy_capped(s, k as u32, s_prime.len() - (n - k));
    let t_prime = extend_split(s, s_prime.len(), n, k, &t)?;
    Ok((t, t_prime))
}

/// Given any longest admissible `T` (as in [`complete_split`]), returns the
/// matching `T'`.
///
/// When `T` hits the length cap, `T'` is the first `n - k` remaining terms;
/// otherwise it is a greedy height-`(n-k)` subsequence of the remainder with
/// its highest terms trimmed to length `|S'| - |T|`.
pub fn extend_split(s: &GSequence, s_prime_len: usize, n: usize, k: usize, t: &GSequence) -> Result<GSequence> {
    let fail = |what: String| Error::internal("extend_split", what);
    let rest = t.remove_from(s)?;
    let len_cap = s_prime_len - (n - k);
    let t_prime = if t.len() == len_cap {
        greedy_capped(&rest, u32::MAX, n - k)
    } else {
        let want = s_prime_len - t.len();
        let mut r = greedy_capped(&rest, (n - k) as u32, usize::MAX);
        if r.len() < want {
            return Err(fail(format!("remainder supports only {} of {want} terms", r.len())));
        }
        let mut mult = r.mults().to_vec();
        let mut excess = r.len() - want;
        for v in mult.iter_mut().rev() {
            let d = (*v as usize).min(excess);
            *v -= d as u32;
            excess -= d;
        }
        r = GSequence::from_mults(s.group(), mult)?;
        r
    };
    if t.height() as usize > k || t.len() < k || t.len() > len_cap {
        return Err(fail(format!("T has height {} and length {}", t.height(), t.len())));
    }
    if t.len() + t_prime.len() != s_prime_len {
        return Err(fail(format!("|T| + |T'| = {} != {s_prime_len}", t.len() + t_prime.len())));
    }
    if t_prime.height() as usize > n - k || t_prime.len() < n - k {
        return Err(fail(format!("T' has height {} and length {}", t_prime.height(), t_prime.len())));
    }
    if !t_prime.divides(&rest) {
        return Err(fail("T' does not divide T^[-1] S".into()));
    }
    Ok(t_prime)
}
