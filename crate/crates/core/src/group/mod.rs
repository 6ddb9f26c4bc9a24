//! Finite abelian groups `C_{m1} x ... x C_{mr}` with `m1 | ... | mr`.
//!
//! Elements are addressed by a dense mixed-radix index in `[0, |G|)`:
//! coordinate `c1` is the least significant digit. Every subset, sequence
//! and quotient in the crate is built on top of this encoding.

mod quotient;
mod subgroup;
mod subset;

pub use quotient::{quotient_decompose, section_spec, QuotientStructure};
pub use subgroup::{
    affine_span, enumerate_subgroups, group_params, join, stabilizer, subgroup_generated,
    Subgroup,
};
pub use subset::{iterated_sumset, representation_count, representation_counts, sumset, GroupSubset};

pub(crate) use quotient::decompose_blackbox;

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Default cap on `|G|` for the quadratic-or-worse algorithms.
pub const DEFAULT_ORDER_CAP: usize = 4096;

const ADD_TABLE_MAX: usize = 256;

/// A finite abelian group given by its list of cyclic factors.
///
/// Values built by [`make_group`] are normalized to invariant factors. The
/// crate also builds raw products (any list of moduli) internally, e.g. to
/// interpret user coordinates on a non-chain presentation.
#[derive(Clone)]
pub struct GroupSpec(Arc<Inner>);

struct Inner {
    factors: Vec<usize>,
    order: usize,
    exponent: usize,
    table: OnceLock<Vec<u16>>,
}

impl GroupSpec {
    pub(crate) fn product(factors: &[usize]) -> GroupSpec {
        debug_assert!(!factors.is_empty() && factors.iter().all(|&m| m >= 1));
        let order = factors.iter().product();
        let exponent = factors.iter().fold(1, |acc, &m| lcm(acc, m));
        GroupSpec(Arc::new(Inner {
            factors: factors.to_vec(),
            order,
            exponent,
            table: OnceLock::new(),
        }))
    }

    /// The cyclic group `C_m`.
    pub fn cyclic(m: usize) -> GroupSpec {
        GroupSpec::product(&[m.max(1)])
    }

    /// Builds a group from an explicit invariant-factor chain.
    pub fn from_invariant_factors(factors: &[usize]) -> Result<GroupSpec> {
        if factors.is_empty() {
            return Err(Error::EmptyFactors);
        }
        if let Some(&bad) = factors.iter().find(|&&m| m == 0) {
            return Err(Error::InvalidFactor(bad as i64));
        }
        let chain = factors.windows(2).all(|w| w[1] % w[0] == 0);
        let no_ones = factors.len() == 1 || factors.iter().all(|&m| m > 1);
        if !chain || !no_ones {
            return Err(Error::Precondition(format!(
                "{factors:?} is not an invariant-factor chain"
            )));
        }
        Ok(GroupSpec::product(factors))
    }

    pub fn factors(&self) -> &[usize] {
        &self.0.factors
    }

    pub fn order(&self) -> usize {
        self.0.order
    }

    pub fn exponent(&self) -> usize {
        self.0.exponent
    }

    pub fn rank(&self) -> usize {
        self.0.factors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.0.order == 1
    }

    /// True when the factor list is an invariant-factor chain.
    pub fn is_normalized(&self) -> bool {
        let f = &self.0.factors;
        f.windows(2).all(|w| w[1] % w[0] == 0) && (f.len() == 1 || f.iter().all(|&m| m > 1))
    }

    pub fn is_cyclic(&self) -> bool {
        // any product of pairwise coprime factors is cyclic
        self.0.exponent == self.0.order
    }

    /// `d*(G) = sum (m_i - 1)`; only meaningful on a normalized spec.
    pub fn d_star(&self) -> usize {
        if self.is_trivial() {
            return 0;
        }
        self.0.factors.iter().map(|m| m - 1).sum()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.0.order
    }

    pub fn zero(&self) -> usize {
        0
    }

    pub fn coords(&self, mut index: usize) -> Vec<usize> {
        debug_assert!(index < self.0.order);
        self.0
            .factors
            .iter()
            .map(|&m| {
                let c = index % m;
                index /= m;
                c
            })
            .collect()
    }

    pub fn index_of(&self, coords: &[usize]) -> Result<usize> {
        if coords.len() != self.rank() {
            return Err(Error::Parse(format!(
                "element has {} coordinates, group has rank {}",
                coords.len(),
                self.rank()
            )));
        }
        let mut index = 0;
        let mut stride = 1;
        for (&c, &m) in coords.iter().zip(&self.0.factors) {
            if c >= m {
                return Err(Error::OutOfRange {
                    what: "coordinate",
                    value: c as i64,
                    lo: 0,
                    hi: m as i64 - 1,
                });
            }
            index += c * stride;
            stride *= m;
        }
        Ok(index)
    }

    pub(crate) fn add_table(&self) -> Option<&[u16]> {
        if self.0.order > ADD_TABLE_MAX {
            return None;
        }
        Some(self.0.table.get_or_init(|| {
            let q = self.0.order;
            let mut t = Vec::with_capacity(q * q);
            for a in 0..q {
                for b in 0..q {
                    t.push(self.add_digits(a, b) as u16);
                }
            }
            t
        }))
    }

    fn add_digits(&self, mut a: usize, mut b: usize) -> usize {
        if let [m] = self.0.factors[..] {
            let s = a + b;
            return if s >= m { s - m } else { s };
        }
        let mut out = 0;
        let mut stride = 1;
        for &m in &self.0.factors {
            let mut d = a % m + b % m;
            if d >= m {
                d -= m;
            }
            out += d * stride;
            stride *= m;
            a /= m;
            b /= m;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        match self.add_table() {
            Some(t) => t[a * self.0.order + b] as usize,
            None => self.add_digits(a, b),
        }
    }

    pub fn neg(&self, mut a: usize) -> usize {
        let mut out = 0;
        let mut stride = 1;
        for &m in &self.0.factors {
            let d = a % m;
            out += ((m - d) % m) * stride;
            stride *= m;
            a /= m;
        }
        out
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// `k * a`.
    pub fn mul(&self, k: usize, mut a: usize) -> usize {
        let mut out = 0;
        let mut stride = 1;
        for &m in &self.0.factors {
            let d = a % m;
            out += ((k % m) * d % m) * stride;
            stride *= m;
            a /= m;
        }
        out
    }

    pub fn element_order(&self, a: usize) -> usize {
        self.coords(a)
            .iter()
            .zip(&self.0.factors)
            .fold(1, |acc, (&c, &m)| lcm(acc, m / gcd(c, m)))
    }
}

impl PartialEq for GroupSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.factors == other.0.factors
    }
}

impl Eq for GroupSpec {}

impl std::hash::Hash for GroupSpec {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.factors.hash(state);
    }
}

impl fmt::Debug for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupSpec({})", self)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.factors.iter().map(|m| m.to_string()).collect();
        f.write_str(&parts.join("x"))
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.factors.serialize(serializer)
    }
}

pub(crate) fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

pub(crate) fn prime_factors(mut m: usize) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

pub fn is_prime(m: usize) -> bool {
    m >= 2 && prime_factors(m) == [(m, 1)]
}

pub fn smallest_prime_divisor(m: usize) -> Option<usize> {
    prime_factors(m).first().map(|&(p, _)| p)
}

/// Invariant factors of `C_{f1} x ... x C_{fk}` via the elementary-divisor
/// merge: the largest prime powers of every prime multiply into `m_r`, the
/// next largest into `m_{r-1}`, and so on.
///
/// Every list of positive integers normalizes, so the only failures are an
/// empty list or a factor `<= 0`.
pub fn normalize_factors(factors: &[i64]) -> Result<Vec<usize>> {
    if factors.is_empty() {
        return Err(Error::EmptyFactors);
    }
    if let Some(&bad) = factors.iter().find(|&&m| m <= 0) {
        return Err(Error::InvalidFactor(bad));
    }
    let mut per_prime: std::collections::BTreeMap<usize, Vec<u32>> = Default::default();
    for &m in factors {
        for (p, e) in prime_factors(m as usize) {
            per_prime.entry(p).or_default().push(e);
        }
    }
    let rank = per_prime.values().map(Vec::len).max().unwrap_or(0);
    if rank == 0 {
        return Ok(vec![1]);
    }
    let mut out = vec![1usize; rank];
    for (p, mut exps) in per_prime {
        exps.sort_unstable_by(|a, b| b.cmp(a));
        for (slot, e) in exps.into_iter().enumerate() {
            out[rank - 1 - slot] *= p.pow(e);
        }
    }
    Ok(out)
}

/// Builds the normalized group `C_{f1} x ... x C_{fk}`.
///
/// Non-chain lists such as `[4, 2]` are normalized to invariant factors
/// (`[2, 4]`); trivial factors are dropped unless the group is trivial.
pub fn make_group(factors: &[i64]) -> Result<GroupSpec> {
    let normalized = normalize_factors(factors)?;
    GroupSpec::from_invariant_factors(&normalized)
}
