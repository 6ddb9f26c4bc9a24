use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::group::{is_prime, section_spec, smallest_prime_divisor, GroupSpec, Subgroup};

/// Which structure theorem the pipeline targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Conclusion `|ΣA_i| >= min(|G|, |S'| - n + 1)` or the periodic case.
    Standard,
    /// Long `S'` (`|S'| >= n + |G| - 1`), conclusion `Σ_n(S) = G` or the periodic case.
    FullGroup,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Standard => "standard",
            Mode::FullGroup => "full-group",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "standard" => Ok(Mode::Standard),
            "full-group" | "fullgroup" | "full" => Ok(Mode::FullGroup),
            _ => Err(Error::Parse(format!("unknown mode {s:?} (expected standard or full-group)"))),
        }
    }
}

/// One named sufficient condition and whether it holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub name: &'static str,
    pub holds: bool,
}

fn cond(name: &'static str, holds: bool) -> Condition {
    Condition { name, holds }
}

#[derive(Clone, Debug)]
pub struct HypothesisReport {
    pub mode: Mode,
    pub n: usize,
    pub subgroup: Subgroup,
    /// `L/H`, where `L` is the ambient subgroup (usually all of `G`).
    pub quotient: GroupSpec,
    pub ambient: GroupSpec,
    /// Conditions on `(n, L/H)`, in order.
    pub items: Vec<Condition>,
    /// Conditions on `(n, L)` alone, each of which should force some item.
    pub globals: Vec<Condition>,
}

impl HypothesisReport {
    pub fn trivial_h(&self) -> bool {
        self.subgroup.is_trivial()
    }

    pub fn full_h(&self) -> bool {
        self.quotient.is_trivial()
    }

    /// `trivial-H`, `full-H`, the first item that holds, or `None`.
    pub fn item_satisfied(&self) -> Option<&'static str> {
        if self.full_h() {
            Some("full-H")
        } else if self.trivial_h() {
            Some("trivial-H")
        } else {
            self.items.iter().find(|c| c.holds).map(|c| c.name)
        }
    }

    pub fn global_item(&self) -> Option<&'static str> {
        self.globals.iter().find(|c| c.holds).map(|c| c.name)
    }

    pub fn satisfied(&self) -> bool {
        self.item_satisfied().is_some()
    }

    /// False exactly when some global condition holds, `H` is proper and
    /// nontrivial, and yet no item holds.
    pub fn global_implies_item(&self) -> bool {
        self.trivial_h() || self.full_h() || self.global_item().is_none() || self.item_satisfied().is_some()
    }
}

/// Evaluates the hypotheses for `H <= G`.
pub fn hypothesis_check(g: &GroupSpec, h: &Subgroup, n: usize, mode: Mode) -> Result<HypothesisReport> {
    hypothesis_check_in(&Subgroup::full(g), h, n, mode)
}

/// As [`hypothesis_check`], with the subgroup `L` playing the role of the group.
pub fn hypothesis_check_in(l: &Subgroup, h: &Subgroup, n: usize, mode: Mode) -> Result<HypothesisReport> {
    let quotient = section_spec(l, h)?;
    let ambient = section_spec(l, &Subgroup::trivial(l.group()))?;
    let items = match mode {
        Mode::Standard => standard_items(&quotient, h.order(), n),
        Mode::FullGroup => full_group_items(&quotient, n),
    };
    let globals = match mode {
        Mode::Standard => standard_globals(&ambient, n),
        Mode::FullGroup => full_group_globals(&ambient, n),
    };
    Ok(HypothesisReport { mode, n, subgroup: h.clone(), quotient, ambient, items, globals })
}

fn standard_items(q: &GroupSpec, h_order: usize, n: usize) -> Vec<Condition> {
    let e = q.exponent();
    let two_by_cyclic = q.factors().len() == 2 && q.factors()[0] == 2;
    vec![
        cond("n>=exp(G/H)+1", n > e),
        cond("n>=exp(G/H)>|H|", n >= e && e > h_order),
        cond("n>=exp(G/H),G/H=C2xCexp", n >= e && two_by_cyclic),
        cond("n>=exp(G/H)-1,G/H cyclic", n + 1 >= e && q.is_cyclic()),
    ]
}

fn full_group_items(q: &GroupSpec, n: usize) -> Vec<Condition> {
    let e = q.exponent();
    let small = e <= 3 || q.factors() == [4];
    vec![
        cond("n>=exp(G/H)", n >= e),
        cond("n>=exp(G/H)-1,G/H cyclic or exp prime", n + 1 >= e && (q.is_cyclic() || is_prime(e))),
        cond("exp(G/H)<=3 or G/H=C4", n >= 1 && small),
    ]
}

/// Smallest divisor `p >= 3` of `m`, if any.
fn smallest_divisor_from_three(m: usize) -> Option<usize> {
    (3..=m).find(|d| m % d == 0)
}

fn standard_globals(g: &GroupSpec, n: usize) -> Vec<Condition> {
    let e = g.exponent();
    let order = g.order();
    let co = order / e;
    // with no divisor >= 3 of |G|/exp(G) the bound is read as vacuous
    let below_square = match smallest_divisor_from_three(co) {
        Some(p) => order < e * e * p,
        None => true,
    };
    let prime_by_cyclic = g.factors().len() == 2 && is_prime(g.factors()[0]);
    let cyclic_large = match smallest_prime_divisor(order) {
        Some(p) => g.is_cyclic() && n + 1 >= order / p,
        None => false,
    };
    vec![
        cond("n>=exp(G)+1", n > e),
        cond("n>=exp(G),|G|<exp(G)^2 p", n >= e && below_square),
        cond("n>=exp(G)-1,G=CpxCexp", n + 1 >= e && prime_by_cyclic),
        cond("n>=|G|/p-1,G cyclic", cyclic_large),
    ]
}

fn full_group_globals(g: &GroupSpec, n: usize) -> Vec<Condition> {
    let e = g.exponent();
    let order = g.order();
    let cyclic_large = match smallest_prime_divisor(order) {
        Some(p) => g.is_cyclic() && n + 1 >= order / p,
        None => false,
    };
    vec![
        cond("n>=exp(G)", n >= e),
        cond("n>=exp(G)-1,exp(G) or |G|/exp(G) prime", n + 1 >= e && (is_prime(e) || is_prime(order / e))),
        cond("n>=|G|/p-1,G cyclic", cyclic_large),
        cond("exp(G)<=3 or |G|<10", n >= 1 && (e <= 3 || order < 10)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{enumerate_subgroups, make_group, GroupSubset};

    fn sub(g: &GroupSpec, xs: &[usize]) -> Subgroup {
        Subgroup::new(GroupSubset::from_indices(g, xs.iter().copied())).unwrap()
    }

    #[test]
    fn examples() {
        let c8 = make_group(&[8]).unwrap();
        let h = sub(&c8, &[0, 4]);
        let r = hypothesis_check(&c8, &h, 5, Mode::Standard).unwrap();
        assert_eq!(r.item_satisfied(), Some("n>=exp(G/H)+1"));
        let r = hypothesis_check(&c8, &h, 2, Mode::Standard).unwrap();
        assert_eq!(r.item_satisfied(), None);
        let r = hypothesis_check(&c8, &Subgroup::full(&c8), 1, Mode::Standard).unwrap();
        assert_eq!(r.item_satisfied(), Some("full-H"));
        let r = hypothesis_check(&c8, &Subgroup::trivial(&c8), 1, Mode::Standard).unwrap();
        assert_eq!(r.item_satisfied(), Some("trivial-H"));
    }

    #[test]
    fn full_group_small_quotient() {
        let c8 = make_group(&[8]).unwrap();
        let h = sub(&c8, &[0, 2, 4, 6]);
        let r = hypothesis_check(&c8, &h, 1, Mode::FullGroup).unwrap();
        assert!(r.satisfied());
        let c16 = make_group(&[16]).unwrap();
        let h = sub(&c16, &[0, 8]);
        let r = hypothesis_check(&c16, &h, 5, Mode::FullGroup).unwrap();
        assert!(!r.satisfied());
        assert!(hypothesis_check(&c16, &h, 7, Mode::FullGroup).unwrap().satisfied());
    }

    #[test]
    fn inner_ambient() {
        let c8 = make_group(&[8]).unwrap();
        let l = sub(&c8, &[0, 2, 4, 6]);
        let h = sub(&c8, &[0, 4]);
        let r = hypothesis_check_in(&l, &h, 3, Mode::Standard).unwrap();
        assert_eq!(r.quotient.order(), 2);
        assert_eq!(r.ambient.order(), 4);
        assert!(hypothesis_check_in(&h, &l, 3, Mode::Standard).is_err());
    }

    // every global condition forces some item, for all small groups
    #[test]
    fn globals_imply_items() {
        let groups: &[&[i64]] = &[
            &[2], &[3], &[4], &[5], &[6], &[7], &[8], &[9], &[10], &[12], &[16], &[18], &[24], &[27], &[32],
            &[2, 2], &[2, 4], &[3, 3], &[2, 6], &[4, 4], &[2, 8], &[3, 6], &[2, 2, 2], &[2, 2, 4], &[2, 12],
            &[4, 8], &[2, 2, 2, 2], &[2, 16], &[2, 2, 8],
        ];
        for f in groups {
            let g = make_group(f).unwrap();
            for h in enumerate_subgroups(&g, 64).unwrap() {
                for n in 1..=2 * g.order() {
                    for mode in [Mode::Standard, Mode::FullGroup] {
                        let r = hypothesis_check(&g, &h, n, mode).unwrap();
                        assert!(r.global_implies_item(), "{g} {h:?} n={n} {mode}: {:?}", r.global_item());
                    }
                }
            }
        }
    }
}
