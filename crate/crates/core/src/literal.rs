//! Text and JSON forms of groups, elements, sets and sequences.
//!
//! Users may write a group as any product `m1 x ... x mk`; elements are then
//! read and printed in those coordinates while every computation runs on the
//! normalized invariant-factor group. A [`Presentation`] holds the two index
//! maps between the raw product and the normalized group.

use serde_json::Value;

use crate::error::{Error, Result};
use crate::group::{decompose_blackbox, make_group, GroupSpec, GroupSubset};
use crate::sequence::GSequence;

#[derive(Clone, Debug)]
pub struct Presentation {
    raw: GroupSpec,
    group: GroupSpec,
    // raw index -> normalized index and back; None when the two coincide
    maps: Option<(Vec<usize>, Vec<usize>)>,
}

impl Presentation {
    /// The identity presentation of a normalized group.
    pub fn normalized(group: &GroupSpec) -> Presentation {
        Presentation { raw: group.clone(), group: group.clone(), maps: None }
    }

    pub fn from_factors(factors: &[i64]) -> Result<Presentation> {
        let group = make_group(factors)?;
        let raw_factors: Vec<usize> = factors.iter().map(|&m| m as usize).collect();
        if raw_factors == group.factors() {
            return Ok(Presentation::normalized(&group));
        }
        let raw = GroupSpec::product(&raw_factors);
        let (spec, to_norm) = decompose_blackbox(raw.order(), 0, |a, b| raw.add(a, b))?;
        if spec != group {
            return Err(Error::internal("presentation", format!("{raw} decomposed to {spec}, expected {group}")));
        }
        let mut from_norm = vec![0; to_norm.len()];
        for (r, &y) in to_norm.iter().enumerate() {
            from_norm[y] = r;
        }
        Ok(Presentation { raw, group, maps: Some((to_norm, from_norm)) })
    }

    /// The normalized group all computations use.
    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    /// The product the user wrote.
    pub fn raw(&self) -> &GroupSpec {
        &self.raw
    }

    /// True when the user's factors were not already an invariant-factor chain.
    pub fn was_normalized(&self) -> bool {
        self.maps.is_some()
    }

    pub fn to_norm(&self, raw_index: usize) -> usize {
        match &self.maps {
            Some((to, _)) => to[raw_index],
            None => raw_index,
        }
    }

    pub fn from_norm(&self, index: usize) -> usize {
        match &self.maps {
            Some((_, from)) => from[index],
            None => index,
        }
    }

    fn raw_coords(&self, x: usize) -> Vec<usize> {
        self.raw.coords(self.from_norm(x))
    }

    fn index_from_ints(&self, ints: &[i64]) -> Result<usize> {
        if ints.len() != self.raw.rank() {
            return Err(Error::Parse(format!(
                "element has {} coordinates, group {} has rank {}",
                ints.len(),
                self.raw,
                self.raw.rank()
            )));
        }
        let coords: Vec<usize> = ints
            .iter()
            .zip(self.raw.factors())
            .map(|(&c, &m)| c.rem_euclid(m as i64) as usize)
            .collect();
        Ok(self.to_norm(self.raw.index_of(&coords)?))
    }

    /// Parses `int` (rank 1) or `(c1,...,cr)`; coordinates are read modulo
    /// their factor, so `-1` is accepted.
    pub fn parse_element(&self, text: &str) -> Result<usize> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let ints = if let Some(inner) = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
            inner.split(',').map(parse_int).collect::<Result<Vec<_>>>()?
        } else {
            vec![parse_int(&t)?]
        };
        self.index_from_ints(&ints)
    }

    pub fn format_element(&self, x: usize) -> String {
        let c = self.raw_coords(x);
        if c.len() == 1 {
            c[0].to_string()
        } else {
            let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
            format!("({})", parts.join(","))
        }
    }

    pub fn element_json(&self, x: usize) -> Value {
        let c = self.raw_coords(x);
        if c.len() == 1 {
            Value::from(c[0])
        } else {
            Value::from(c)
        }
    }

    pub fn element_from_json(&self, v: &Value) -> Result<usize> {
        let ints = match v {
            Value::Number(n) => vec![n.as_i64().ok_or_else(|| Error::Parse(format!("bad element {v}")))?],
            Value::Array(a) => a
                .iter()
                .map(|c| c.as_i64().ok_or_else(|| Error::Parse(format!("bad coordinate {c}"))))
                .collect::<Result<Vec<_>>>()?,
            _ => return Err(Error::Parse(format!("bad element {v}"))),
        };
        self.index_from_ints(&ints)
    }

    /// `seq := term (';' term)*`, `term := elem ('^' uint)?`; empty text is the empty sequence.
    pub fn parse_sequence(&self, text: &str) -> Result<GSequence> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut s = GSequence::empty(&self.group);
        if t.is_empty() {
            return Ok(s);
        }
        for term in t.split(';') {
            let (elem, count) = match term.rsplit_once('^') {
                Some((e, c)) => (e, c.parse::<u32>().map_err(|_| Error::Parse(format!("bad multiplicity in {term:?}")))?),
                None => (term, 1),
            };
            s.push(self.parse_element(elem)?, count);
        }
        Ok(s)
    }

    /// Terms sorted by their printed coordinates.
    pub fn format_sequence(&self, s: &GSequence) -> String {
        let mut items: Vec<(Vec<usize>, usize, u32)> =
            s.distinct().map(|(x, v)| (self.raw_coords(x), x, v)).collect();
        items.sort();
        items
            .iter()
            .map(|(_, x, v)| {
                if *v == 1 {
                    self.format_element(*x)
                } else {
                    format!("{}^{}", self.format_element(*x), v)
                }
            })
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn sequence_json(&self, s: &GSequence) -> Value {
        let mut items: Vec<(Vec<usize>, usize, u32)> =
            s.distinct().map(|(x, v)| (self.raw_coords(x), x, v)).collect();
        items.sort();
        Value::from(
            items
                .iter()
                .map(|(_, x, v)| serde_json::json!([self.element_json(*x), v]))
                .collect::<Vec<_>>(),
        )
    }

    pub fn sequence_from_json(&self, v: &Value) -> Result<GSequence> {
        let mut s = GSequence::empty(&self.group);
        let arr = v.as_array().ok_or_else(|| Error::Parse("sequence must be an array".into()))?;
        for item in arr {
            let pair = item.as_array().filter(|p| p.len() == 2).ok_or_else(|| Error::Parse(format!("bad term {item}")))?;
            let count = pair[1].as_u64().ok_or_else(|| Error::Parse(format!("bad multiplicity {}", pair[1])))?;
            s.push(self.element_from_json(&pair[0])?, count as u32);
        }
        Ok(s)
    }

    /// `set := elem (';' elem)*`.
    pub fn parse_set(&self, text: &str) -> Result<GroupSubset> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut out = GroupSubset::empty(&self.group);
        if t.is_empty() {
            return Ok(out);
        }
        for e in t.split(';') {
            out.insert(self.parse_element(e)?);
        }
        Ok(out)
    }

    fn sorted_members(&self, a: &GroupSubset) -> Vec<usize> {
        let mut m: Vec<(Vec<usize>, usize)> = a.iter().map(|x| (self.raw_coords(x), x)).collect();
        m.sort();
        m.into_iter().map(|(_, x)| x).collect()
    }

    pub fn format_set(&self, a: &GroupSubset) -> String {
        let parts: Vec<String> = self.sorted_members(a).into_iter().map(|x| self.format_element(x)).collect();
        format!("{{{}}}", parts.join(","))
    }

    pub fn set_json(&self, a: &GroupSubset) -> Value {
        Value::from(self.sorted_members(a).into_iter().map(|x| self.element_json(x)).collect::<Vec<_>>())
    }

    pub fn set_from_json(&self, v: &Value) -> Result<GroupSubset> {
        let arr = v.as_array().ok_or_else(|| Error::Parse("set must be an array".into()))?;
        let mut out = GroupSubset::empty(&self.group);
        for e in arr {
            out.insert(self.element_from_json(e)?);
        }
        Ok(out)
    }
}

fn parse_int(t: &str) -> Result<i64> {
    t.parse::<i64>().map_err(|_| Error::Parse(format!("expected an integer, found {t:?}")))
}

/// `spec := uint ('x' uint)*`, e.g. `2x4x8`.
pub fn parse_group_factors(text: &str) -> Result<Vec<i64>> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(Error::Parse("empty group literal".into()));
    }
    t.split(['x', 'X'])
        .map(|f| f.parse::<i64>().map_err(|_| Error::Parse(format!("bad group factor {f:?}"))))
        .collect()
}

pub fn parse_group(text: &str) -> Result<Presentation> {
    Presentation::from_factors(&parse_group_factors(text)?)
}
