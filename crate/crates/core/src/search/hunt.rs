//! Search for `n` two-element sets whose sum is aperiodic yet has no element
//! with a unique representation.
//!
//! Translating a summand translates the sum, which keeps periods and
//! representation counts, so each `{a, b}` is reduced to `{0, d}` with `d`
//! the smaller of `b - a` and `a - b`. The tuple of differences is sorted.
//! In cyclic groups the tuple is further reduced to its least image under
//! multiplication by units. Both steps only merge tuples with identical
//! answers, so every class keeps a representative.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{gcd, representation_counts, stabilizer, GroupSpec, GroupSubset};

#[derive(Clone, Debug)]
pub struct HuntConfig {
    pub canonicalize: bool,
    /// Upper bound on tuples examined; beyond it the report is partial.
    pub budget: u64,
    /// How many hits to keep in the report.
    pub keep_hits: usize,
}

impl Default for HuntConfig {
    fn default() -> HuntConfig {
        HuntConfig { canonicalize: true, budget: 50_000_000, keep_hits: 32 }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct HuntReport {
    pub group: Vec<usize>,
    pub n: usize,
    pub canonicalized: bool,
    /// Tuples generated by the enumeration.
    pub tuples_examined: u64,
    /// Tuples whose sum was evaluated (distinct canonical forms when canonicalizing).
    pub evaluated: u64,
    pub aperiodic: u64,
    pub hit_count: u64,
    /// Hits as lists of two-element summands, by element index.
    pub hits: Vec<Vec<[usize; 2]>>,
    /// Least, over aperiodic sums, of the smallest representation count.
    pub min_unique_floor: Option<u64>,
    pub exhaustive: bool,
}

impl HuntReport {
    pub fn found(&self) -> bool {
        self.hit_count > 0
    }
}

pub fn hunt_unique_expression(g: &GroupSpec, n: usize) -> Result<HuntReport> {
    hunt_unique_expression_with(g, n, &HuntConfig::default())
}

pub fn hunt_unique_expression_with(g: &GroupSpec, n: usize, cfg: &HuntConfig) -> Result<HuntReport> {
    if n == 0 {
        return Err(Error::OutOfRange { what: "n", value: 0, lo: 1, hi: i64::MAX });
    }
    let mut report = HuntReport {
        group: g.factors().to_vec(),
        n,
        canonicalized: cfg.canonicalize,
        tuples_examined: 0,
        evaluated: 0,
        aperiodic: 0,
        hit_count: 0,
        hits: Vec::new(),
        min_unique_floor: None,
        exhaustive: true,
    };
    if g.order() < 2 {
        return Ok(report);
    }
    let eval = |summands: Vec<[usize; 2]>, report: &mut HuntReport| -> Result<()> {
        report.evaluated += 1;
        let sets: Vec<GroupSubset> =
            summands.iter().map(|p| GroupSubset::from_indices(g, p.iter().copied())).collect();
        let counts = representation_counts(&sets)?;
        let sum = GroupSubset::from_indices(g, g.elements().filter(|&x| counts[x] > 0));
        if !stabilizer(&sum)?.is_trivial() {
            return Ok(());
        }
        report.aperiodic += 1;
        let floor = sum.iter().map(|x| counts[x]).min().unwrap_or(0);
        report.min_unique_floor = Some(report.min_unique_floor.map_or(floor, |m| m.min(floor)));
        if floor >= 2 {
            report.hit_count += 1;
            if report.hits.len() < cfg.keep_hits {
                report.hits.push(summands);
            }
        }
        Ok(())
    };

    if cfg.canonicalize {
        let reps: Vec<usize> = g.elements().filter(|&d| d != 0 && d <= g.neg(d)).collect();
        let units: Vec<usize> = if g.is_cyclic() {
            (1..g.order()).filter(|&u| gcd(u, g.order()) == 1).collect()
        } else {
            vec![1]
        };
        let mut idx = vec![0usize; n];
        'outer: loop {
            if report.tuples_examined >= cfg.budget {
                report.exhaustive = false;
                break;
            }
            report.tuples_examined += 1;
            let tuple: Vec<usize> = idx.iter().map(|&i| reps[i]).collect();
            let canon = units
                .iter()
                .map(|&u| {
                    let mut t: Vec<usize> = tuple
                        .iter()
                        .map(|&d| {
                            let x = g.mul(u, d);
                            x.min(g.neg(x))
                        })
                        .collect();
                    t.sort_unstable();
                    t
                })
                .min()
                .expect("units are nonempty");
            if canon == tuple {
                eval(tuple.iter().map(|&d| [0, d]).collect(), &mut report)?;
            }
            // next nondecreasing index tuple
            let mut i = n;
            loop {
                if i == 0 {
                    break 'outer;
                }
                i -= 1;
                if idx[i] + 1 < reps.len() {
                    let v = idx[i] + 1;
                    for j in &mut idx[i..] {
                        *j = v;
                    }
                    break;
                }
            }
        }
    } else {
        let pairs: Vec<[usize; 2]> =
            g.elements().flat_map(|a| ((a + 1)..g.order()).map(move |b| [a, b])).collect();
        let mut idx = vec![0usize; n];
        'raw: loop {
            if report.tuples_examined >= cfg.budget {
                report.exhaustive = false;
                break;
            }
            report.tuples_examined += 1;
            eval(idx.iter().map(|&i| pairs[i]).collect(), &mut report)?;
            let mut i = n;
            loop {
                if i == 0 {
                    break 'raw;
                }
                i -= 1;
                idx[i] += 1;
                if idx[i] < pairs.len() {
                    break;
                }
                idx[i] = 0;
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_group;

    #[test]
    fn c2_has_no_aperiodic_sums() {
        let g = make_group(&[2]).unwrap();
        let r = hunt_unique_expression(&g, 1).unwrap();
        assert_eq!(r.aperiodic, 0);
        assert!(!r.found());
        assert!(r.exhaustive);
    }

    #[test]
    fn single_summand_is_all_unique() {
        let g = make_group(&[3]).unwrap();
        let r = hunt_unique_expression(&g, 1).unwrap();
        assert!(r.aperiodic > 0);
        assert_eq!(r.min_unique_floor, Some(1));
        assert!(!r.found());
        assert!(r.exhaustive);
    }

    #[test]
    fn canonical_and_raw_agree_on_small_cyclic_groups() {
        for m in 2..=5 {
            let g = make_group(&[m as i64]).unwrap();
            for n in 1..=2 {
                let c = hunt_unique_expression(&g, n).unwrap();
                let raw = HuntConfig { canonicalize: false, ..HuntConfig::default() };
                let r = hunt_unique_expression_with(&g, n, &raw).unwrap();
                assert_eq!(c.found(), r.found(), "C{m}, n = {n}");
                assert_eq!(c.min_unique_floor, r.min_unique_floor, "C{m}, n = {n}");
                assert_eq!(c.aperiodic > 0, r.aperiodic > 0);
                assert!(c.evaluated <= r.evaluated);
            }
        }
    }

    #[test]
    fn budget_marks_partial() {
        let g = make_group(&[7]).unwrap();
        let cfg = HuntConfig { budget: 3, ..HuntConfig::default() };
        let r = hunt_unique_expression_with(&g, 3, &cfg).unwrap();
        assert!(!r.exhaustive);
        assert_eq!(r.tuples_examined, 3);
    }
}
