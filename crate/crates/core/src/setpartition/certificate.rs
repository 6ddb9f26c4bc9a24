use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use super::SetPartition;
use crate::error::{Error, Result};
use crate::group::{GroupSubset, Subgroup};
use crate::literal::Presentation;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theorem {
    /// Partition-level statement: bound case or heavy-coset case.
    Partition,
    /// Structure statement: large sumset or concentration on one coset.
    Main,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseTag {
    I,
    II,
}

/// A claim about one instance, checked by [`super::partition_verify`] or
/// [`super::main_verify`]; nothing in it is trusted.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub theorem: Theorem,
    pub case: CaseTag,
    pub partition: SetPartition,
    pub h: Option<Subgroup>,
    pub k: Option<Subgroup>,
    pub alpha: Option<usize>,
    pub e_h: Option<usize>,
    pub e_k: Option<usize>,
    /// Number of leading parts inside `alpha + K`.
    pub prefix_len: Option<usize>,
    pub bounds: BTreeMap<String, i64>,
}

impl Certificate {
    pub(crate) fn bare(theorem: Theorem, case: CaseTag, partition: SetPartition) -> Certificate {
        Certificate {
            theorem,
            case,
            partition,
            h: None,
            k: None,
            alpha: None,
            e_h: None,
            e_k: None,
            prefix_len: None,
            bounds: BTreeMap::new(),
        }
    }

    /// Moves the certificate along by `t`: parts and `alpha` shift, subgroups stay.
    pub fn translate(&self, t: usize) -> Certificate {
        let g = self.partition.group();
        Certificate {
            partition: self.partition.translate(t),
            alpha: self.alpha.map(|a| g.add(a, t)),
            ..self.clone()
        }
    }

    pub fn case_label(&self) -> &'static str {
        match (self.theorem, self.case) {
            (Theorem::Partition, CaseTag::I) => "1",
            (Theorem::Partition, CaseTag::II) => "2",
            (Theorem::Main, CaseTag::I) => "i",
            (Theorem::Main, CaseTag::II) => "ii",
        }
    }

    pub fn to_json(&self, p: &Presentation, verified: bool) -> Value {
        let sub = |h: &Option<Subgroup>| h.as_ref().map_or(Value::Null, |h| p.set_json(h.carrier()));
        let opt = |v: Option<usize>| v.map_or(Value::Null, |v| json!(v));
        json!({
            "theorem": match self.theorem { Theorem::Partition => "partition", Theorem::Main => "main" },
            "case": self.case_label(),
            "parts": self.partition.parts().iter().map(|a| p.set_json(a)).collect::<Vec<_>>(),
            "H": sub(&self.h),
            "K": sub(&self.k),
            "alpha": self.alpha.map_or(Value::Null, |a| p.element_json(a)),
            "e_H": opt(self.e_h),
            "e_K": opt(self.e_k),
            "k": opt(self.prefix_len),
            "bounds": self.bounds,
            "verified": verified,
        })
    }

    pub fn from_json(p: &Presentation, v: &Value) -> Result<Certificate> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("certificate must be a JSON object".into()))?;
        let g = p.group();
        let (theorem, case) = match field(obj, "case")?.as_str() {
            Some("1") => (Theorem::Partition, CaseTag::I),
            Some("2") => (Theorem::Partition, CaseTag::II),
            Some("i") | Some("I") => (Theorem::Main, CaseTag::I),
            Some("ii") | Some("II") => (Theorem::Main, CaseTag::II),
            _ => return Err(Error::Parse("case must be one of 1, 2, i, ii".into())),
        };
        let parts = field(obj, "parts")?
            .as_array()
            .ok_or_else(|| Error::Parse("parts must be a list".into()))?
            .iter()
            .map(|a| p.set_from_json(a))
            .collect::<Result<Vec<GroupSubset>>>()?;
        let partition = SetPartition::new(g, parts)?;
        let sub = |key: &str| -> Result<Option<Subgroup>> {
            match obj.get(key) {
                None | Some(Value::Null) => Ok(None),
                Some(v) => Ok(Some(Subgroup::new(p.set_from_json(v)?)?)),
            }
        };
        let num = |key: &str| -> Result<Option<usize>> {
            match obj.get(key) {
                None | Some(Value::Null) => Ok(None),
                Some(v) => v
                    .as_u64()
                    .map(|x| Some(x as usize))
                    .ok_or_else(|| Error::Parse(format!("{key} must be a nonnegative integer"))),
            }
        };
        let alpha = match obj.get("alpha") {
            None | Some(Value::Null) => None,
            Some(v) => Some(p.element_from_json(v)?),
        };
        let mut bounds = BTreeMap::new();
        if let Some(Value::Object(b)) = obj.get("bounds") {
            for (key, val) in b {
                if let Some(x) = val.as_i64() {
                    bounds.insert(key.clone(), x);
                }
            }
        }
        Ok(Certificate {
            theorem,
            case,
            partition,
            h: sub("H")?,
            k: sub("K")?,
            alpha,
            e_h: num("e_H")?,
            e_k: num("e_K")?,
            prefix_len: num("k")?,
            bounds,
        })
    }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::Parse(format!("certificate is missing {key:?}")))
}

/// Outcome of a verifier: the named clauses that failed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub violations: Vec<String>,
}

impl VerifyReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    pub(crate) fn check(&mut self, ok: bool, name: &str, detail: impl FnOnce() -> String) {
        if !ok {
            self.violations.push(format!("{name}: {}", detail()));
        }
    }

    /// True when some violation carries this clause name.
    pub fn has(&self, name: &str) -> bool {
        self.violations.iter().any(|v| v.split(':').next() == Some(name))
    }
}
