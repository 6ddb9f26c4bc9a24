use std::fs;
use std::str::FromStr;
use std::time::Instant;

use serde_json::{json, Value};
use subsum_core::group::{enumerate_subgroups, iterated_sumset, stabilizer, GroupSubset, Subgroup};
use subsum_core::literal::{parse_group, Presentation};
use subsum_core::search::{
    gen_example, hunt_unique_expression_with, run_audit, AuditConfig, Checker, ExampleKind, ExampleParams,
    HuntConfig,
};
use subsum_core::sequence::{build_s_star, davenport_bruteforce, nterm_subsums, subsum_profile, GSequence, DAVENPORT_ORDER_CAP};
use subsum_core::setpartition::{
    hypothesis_check, main_pipeline, main_verify, partition_solve, partition_verify, Certificate, Mode,
    Theorem,
};
use subsum_core::verifiers::{check_kneser, check_subsum_kneser};
use subsum_core::Error;

use crate::report::{render, write, Report};
use crate::{Cli, GroupAction, PartitionArgs, SeqArgs, Verb};

const DEFAULT_DUMP: &str = "subsum-lab-dump.json";
/// Largest group whose subgroup lattice `group` will list.
const SUBGROUP_LIST_CAP: usize = 1024;

enum Failure {
    Core(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Core(e)
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

pub fn run(cli: &Cli) -> u8 {
    let started = Instant::now();
    let outcome = dispatch(&cli.verb);
    let (report, extra_code) = match outcome {
        Ok(r) => (r, None),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return 2;
        }
        Err(Failure::Core(e)) => match e {
            Error::Internal { .. } => {
                let path = cli.dump.clone().unwrap_or_else(|| DEFAULT_DUMP.to_string());
                let dump = dump_json(&cli.verb, &e);
                match fs::write(&path, serde_json::to_string_pretty(&dump).expect("JSON serializes")) {
                    Ok(()) => eprintln!("internal error: {e}\nreproduction dump written to {path}"),
                    Err(io) => eprintln!("internal error: {e}\ncould not write dump to {path}: {io}"),
                }
                return 3;
            }
            Error::HypothesesUnmet(ref msg) => {
                let r = unmet_report(&cli.verb, msg);
                (r, Some(1))
            }
            other => {
                eprintln!("error: {other}");
                return 2;
            }
        },
    };
    let env = report.envelope(started);
    if let Err(e) = write(&render(&env, cli.format), cli.out.as_deref()) {
        eprintln!("error: cannot write report: {e}");
        return 2;
    }
    extra_code.unwrap_or(report.code)
}

fn dump_json(verb: &Verb, e: &Error) -> Value {
    let (step, detail, instance) = match e {
        Error::Internal { step, detail, instance } => (step.clone(), detail.clone(), instance.clone()),
        _ => (String::new(), e.to_string(), None),
    };
    json!({
        "schema": crate::report::SCHEMA,
        "command": verb_name(verb),
        "error": e.to_string(),
        "step": step,
        "detail": detail,
        "instance": instance.map(|d| serde_json::to_value(*d).expect("dump serializes")),
        "arguments": format!("{verb:?}"),
    })
}

fn verb_name(v: &Verb) -> &'static str {
    match v {
        Verb::Group { .. } => "group",
        Verb::Sumset { .. } => "sumset",
        Verb::Subsums { .. } => "subsums",
        Verb::Partition { .. } => "partition",
        Verb::Maincert { .. } => "maincert",
        Verb::Verify { .. } => "verify",
        Verb::Example { .. } => "example",
        Verb::Audit { .. } => "audit",
        Verb::Hunt { .. } => "hunt",
        Verb::Davenport { .. } => "davenport",
    }
}

fn dispatch(verb: &Verb) -> Res<Report> {
    match verb {
        Verb::Group { action, spec, group } => {
            let text = spec.as_ref().or(group.as_ref()).ok_or_else(|| usage("group needs a group literal"))?;
            cmd_group(*action, text)
        }
        Verb::Sumset { group, sets, n } => cmd_sumset(group, sets, *n),
        Verb::Subsums { inst, ref_len } => cmd_subsums(inst, *ref_len),
        Verb::Partition { inst } => cmd_partition(inst),
        Verb::Maincert { inst, mode } => cmd_maincert(inst, parse_mode(mode)?),
        Verb::Verify { file, cert, group, seq, sprime, n, mode } => {
            let path = file.as_ref().or(cert.as_ref()).ok_or_else(|| usage("verify needs a report file"))?;
            cmd_verify(path, group.as_deref(), seq.as_deref(), sprime.as_deref(), *n, mode.as_deref())
        }
        Verb::Example { kind, group, subgroup, block, generator } => {
            cmd_example(kind, group, subgroup, block.as_deref(), generator.as_deref())
        }
        Verb::Audit {
            max_order,
            exhaustive_max_order,
            len_cap,
            samples,
            seed,
            jobs,
            checkers,
            support_cap,
            mult_cap,
        } => {
            let checkers = match checkers {
                None => Checker::ALL.to_vec(),
                Some(list) => list
                    .split(',')
                    .filter(|t| !t.trim().is_empty())
                    .map(Checker::from_str)
                    .collect::<Result<Vec<_>, _>>()?,
            };
            let cfg = AuditConfig {
                max_group_order: *max_order,
                exhaustive_len_cap: *len_cap,
                random_samples: *samples,
                seed: *seed,
                jobs: *jobs,
                checkers,
                exhaustive_max_order: *exhaustive_max_order,
                random_support_cap: *support_cap,
                random_mult_cap: *mult_cap,
            };
            cmd_audit(&cfg)
        }
        Verb::Hunt { group, n, no_canon, budget } => cmd_hunt(group, *n, !*no_canon, *budget),
        Verb::Davenport { group } => cmd_davenport(group),
    }
}

fn parse_mode(text: &str) -> Res<Mode> {
    Mode::from_str(text).map_err(|_| usage(format!("unknown mode {text:?} (expected standard or fullgroup)")))
}

fn group_json(text: &str, p: &Presentation) -> Value {
    json!({
        "literal": text.trim(),
        "factors": p.raw().factors(),
        "invariant_factors": p.group().factors(),
    })
}

fn cmd_group(action: GroupAction, text: &str) -> Res<Report> {
    let p = parse_group(text)?;
    let g = p.group();
    let result = match action {
        GroupAction::Info => {
            let subgroups = if g.order() <= SUBGROUP_LIST_CAP {
                json!(enumerate_subgroups(g, SUBGROUP_LIST_CAP)?.len())
            } else {
                Value::Null
            };
            json!({
                "order": g.order(),
                "exponent": g.exponent(),
                "rank": g.rank(),
                "d_star": g.d_star(),
                "cyclic": g.is_cyclic(),
                "subgroups": subgroups,
            })
        }
        GroupAction::Subgroups => {
            let list: Vec<Value> = enumerate_subgroups(g, SUBGROUP_LIST_CAP)?
                .iter()
                .map(|h| json!({"order": h.order(), "elements": p.set_json(h.carrier())}))
                .collect();
            json!({"count": list.len(), "subgroups": list})
        }
    };
    Ok(Report::new("group", group_json(text, &p), json!({"action": format!("{action:?}").to_lowercase()}), result))
}

fn cmd_sumset(group: &str, sets: &[String], n: Option<usize>) -> Res<Report> {
    let p = parse_group(group)?;
    let parsed: Vec<GroupSubset> = sets.iter().map(|s| p.parse_set(s)).collect::<Result<_, _>>()?;
    if parsed.iter().any(|a| a.is_empty()) {
        return Err(usage("summands must be nonempty"));
    }
    let summands: Vec<GroupSubset> = match n {
        Some(k) if parsed.len() == 1 => {
            if k == 0 {
                return Err(usage("-n must be at least 1"));
            }
            vec![parsed[0].clone(); k]
        }
        Some(_) => return Err(usage("-n applies to a single set")),
        None => parsed,
    };
    let sum = match n {
        Some(k) => iterated_sumset(&summands[0], k)?,
        None => {
            let mut acc = summands[0].clone();
            for a in &summands[1..] {
                acc = subsum_core::group::sumset(&acc, a)?;
            }
            acc
        }
    };
    let h = stabilizer(&sum)?;
    let kneser = check_kneser(&summands)?;
    let result = json!({
        "sum": p.set_json(&sum),
        "size": sum.len(),
        "stabilizer": p.set_json(h.carrier()),
        "stabilizer_order": h.order(),
        "kneser_lower_bound": kneser.rhs,
    });
    let inputs = json!({"sets": sets, "n": n});
    let ok = kneser.holds();
    Ok(Report::new("sumset", group_json(group, &p), inputs, result).verified(ok, kneser.violations))
}

fn parse_seq(p: &Presentation, text: &str) -> Res<GSequence> {
    Ok(p.parse_sequence(text)?)
}

fn cmd_subsums(a: &SeqArgs, ref_len: Option<usize>) -> Res<Report> {
    let p = parse_group(&a.group)?;
    let s = parse_seq(&p, &a.seq)?;
    if a.n == 0 || a.n > s.len() {
        return Err(usage(format!("need 1 <= n <= |S| = {}", s.len())));
    }
    let prof = subsum_profile(&s, a.n, ref_len.unwrap_or(s.len()))?;
    let h_ok = s.height() as usize <= a.n;
    let s_star = if h_ok { Some(p.format_sequence(&build_s_star(&s, &prof, a.n)?)) } else { None };
    let result = json!({
        "sums": p.set_json(&prof.sums),
        "size": prof.sums.len(),
        "stabilizer": p.set_json(prof.stabilizer.carrier()),
        "stabilizer_order": prof.stabilizer.order(),
        "heavy_cosets": prof.heavy_count(),
        "heavy_preimage": p.set_json(&prof.heavy_preimage),
        "outside_terms": prof.outside,
        "holes": prof.holes,
        "bound_cosets": prof.bound_cosets,
        "bound_min": prof.bound_min,
        "bound_kneser": prof.bound_kneser(prof.ref_len),
        "s_star": s_star,
    });
    let inputs = json!({"seq": p.format_sequence(&s), "n": a.n, "ref_len": prof.ref_len});
    let report = Report::new("subsums", group_json(&a.group, &p), inputs, result);
    if h_ok && ref_len.is_none() {
        let c = check_subsum_kneser(&s, a.n)?;
        Ok(report.verified(c.holds(), c.violations))
    } else {
        Ok(report)
    }
}

fn cap_height(s: &GSequence, n: usize) -> GSequence {
    let mut out = GSequence::empty(s.group());
    for (x, v) in s.distinct() {
        out.push(x, v.min(n as u32));
    }
    out
}

fn instance(a: &PartitionArgs) -> Res<(Presentation, GSequence, GSequence)> {
    let p = parse_group(&a.group)?;
    let s = parse_seq(&p, &a.seq)?;
    let sp = match &a.sprime {
        Some(t) => parse_seq(&p, t)?,
        None => cap_height(&s, a.n),
    };
    Ok((p, s, sp))
}

fn instance_inputs(p: &Presentation, s: &GSequence, sp: &GSequence, n: usize, mode: Option<Mode>) -> Value {
    json!({
        "seq": p.format_sequence(s),
        "sprime": p.format_sequence(sp),
        "n": n,
        "mode": mode.map(|m| m.as_str()),
    })
}

fn cmd_partition(a: &PartitionArgs) -> Res<Report> {
    let (p, s, sp) = instance(a)?;
    let cert = partition_solve(&s, &sp, a.n)?;
    let v = partition_verify(&cert, &s, &sp, a.n);
    let result = cert.to_json(&p, v.holds());
    let inputs = instance_inputs(&p, &s, &sp, a.n, None);
    Ok(Report::new("partition", group_json(&a.group, &p), inputs, result).verified(v.holds(), v.violations))
}

fn cmd_maincert(a: &PartitionArgs, mode: Mode) -> Res<Report> {
    let (p, s, sp) = instance(a)?;
    let cert = main_pipeline(&s, &sp, a.n, mode)?;
    let v = main_verify(&cert, &s, &sp, a.n, mode);
    let mut result = cert.to_json(&p, v.holds());
    let h = stabilizer(&nterm_subsums(&s, a.n)?)?;
    let hyp = hypothesis_check(s.group(), &h, a.n, mode)?;
    result["hypothesis"] = json!(hyp.item_satisfied());
    let inputs = instance_inputs(&p, &s, &sp, a.n, Some(mode));
    Ok(Report::new("maincert", group_json(&a.group, &p), inputs, result).verified(v.holds(), v.violations))
}

/// The report for an instance whose hypotheses fail: which items were checked.
fn unmet_report(verb: &Verb, msg: &str) -> Report {
    let Verb::Maincert { inst, mode } = verb else {
        return Report::new(verb_name(verb), Value::Null, Value::Null, json!({"hypotheses_met": false}))
            .verified(false, vec![format!("hypotheses unmet: {msg}")]);
    };
    let mode = Mode::from_str(mode).unwrap_or(Mode::Standard);
    let detail = instance(inst).ok().and_then(|(p, s, sp)| {
        let h = stabilizer(&nterm_subsums(&s, inst.n).ok()?).ok()?;
        let hyp = hypothesis_check(s.group(), &h, inst.n, mode).ok()?;
        let items: serde_json::Map<String, Value> =
            hyp.items.iter().map(|c| (c.name.to_string(), json!(c.holds))).collect();
        Some((
            group_json(&inst.group, &p),
            instance_inputs(&p, &s, &sp, inst.n, Some(mode)),
            json!({
                "hypotheses_met": false,
                "H": p.set_json(h.carrier()),
                "quotient_invariant_factors": hyp.quotient.factors(),
                "items": items,
            }),
        ))
    });
    let (group, inputs, result) = detail.unwrap_or((Value::Null, Value::Null, json!({"hypotheses_met": false})));
    Report::new("maincert", group, inputs, result).verified(false, vec![format!("hypotheses unmet: {msg}")])
}

fn cmd_verify(
    path: &str,
    group: Option<&str>,
    seq: Option<&str>,
    sprime: Option<&str>,
    n: Option<usize>,
    mode: Option<&str>,
) -> Res<Report> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| usage(format!("{path} is not JSON: {e}")))?;
    let enveloped = doc.get("schema").is_some();
    let field = |key: &str| -> Option<String> {
        doc.get("inputs").and_then(|i| i.get(key)).and_then(|v| v.as_str()).map(str::to_string)
    };
    let group_text = group
        .map(str::to_string)
        .or_else(|| doc.get("group").and_then(|g| g.get("literal")).and_then(|v| v.as_str()).map(str::to_string))
        .ok_or_else(|| usage("no group: pass -g or a report with a group"))?;
    let p = parse_group(&group_text)?;
    let seq_text = seq.map(str::to_string).or_else(|| field("seq")).ok_or_else(|| usage("no sequence: pass -s"))?;
    let s = parse_seq(&p, &seq_text)?;
    let n = n
        .or_else(|| doc.get("inputs").and_then(|i| i.get("n")).and_then(|v| v.as_u64()).map(|v| v as usize))
        .ok_or_else(|| usage("no n: pass -n"))?;
    let sp = match sprime.map(str::to_string).or_else(|| field("sprime")) {
        Some(t) => parse_seq(&p, &t)?,
        None => cap_height(&s, n),
    };
    let mode = match mode.map(str::to_string).or_else(|| field("mode")) {
        Some(m) => parse_mode(&m)?,
        None => Mode::Standard,
    };
    let cert_json = if enveloped { doc.get("result").cloned().unwrap_or(Value::Null) } else { doc.clone() };
    let cert = Certificate::from_json(&p, &cert_json)?;
    let v = match cert.theorem {
        Theorem::Partition => partition_verify(&cert, &s, &sp, n),
        Theorem::Main => main_verify(&cert, &s, &sp, n, mode),
    };
    let result = json!({
        "theorem": match cert.theorem { Theorem::Partition => "partition", Theorem::Main => "main" },
        "case": cert.case_label(),
        "holds": v.holds(),
    });
    let inputs = json!({"report": path, "seq": p.format_sequence(&s), "sprime": p.format_sequence(&sp), "n": n, "mode": mode.as_str()});
    Ok(Report::new("verify", group_json(&group_text, &p), inputs, result).verified(v.holds(), v.violations))
}

fn cmd_example(kind: &str, group: &str, subgroup: &str, block: Option<&str>, generator: Option<&str>) -> Res<Report> {
    let kind = ExampleKind::from_str(kind)?;
    let p = parse_group(group)?;
    let g = p.group();
    let h = Subgroup::new(p.parse_set(subgroup)?)?;
    let mut params = ExampleParams::new(g, h);
    if let Some(k) = block {
        params.k = Some(Subgroup::new(p.parse_set(k)?)?);
    }
    if let Some(x) = generator {
        params.g = Some(p.parse_element(x)?);
    }
    let ex = gen_example(kind, &params)?;
    let result = json!({
        "kind": kind.as_str(),
        "n": ex.n,
        "H": p.set_json(ex.h.carrier()),
        "K": ex.k.as_ref().map(|k| p.set_json(k.carrier())),
        "g": p.element_json(ex.g),
        "support": p.set_json(&ex.support),
        "seq": p.format_sequence(&ex.s),
        "seq_len": ex.s.len(),
        "sums": p.set_json(&ex.sigma),
        "sums_size": ex.sigma.len(),
        "stabilizer": p.set_json(ex.expected.stabilizer.carrier()),
        "clause_b_fails": ex.expected.clause_b_fails,
        "bound": ex.s.len() as i64 - ex.n as i64 + 1,
    });
    let inputs = json!({"kind": kind.as_str(), "subgroup": subgroup, "block": block, "gen": generator});
    Ok(Report::new("example", group_json(group, &p), inputs, result).verified(true, Vec::new()))
}

fn cmd_audit(cfg: &AuditConfig) -> Res<Report> {
    let report = run_audit(cfg)?;
    let internal: u64 = report.totals.checkers.values().map(|t| t.internal_errors).sum();
    let violations: Vec<String> = report
        .totals
        .failures
        .iter()
        .map(|f| format!("{}: {} [{}]", f.checker, f.detail, f.replay))
        .collect();
    let result = serde_json::to_value(&report).expect("report serializes");
    let inputs = json!({"jobs": cfg.jobs});
    if internal > 0 {
        return Err(Failure::Core(Error::Internal {
            step: "audit".into(),
            detail: format!("{internal} internal errors; first failures: {violations:?}"),
            instance: None,
        }));
    }
    Ok(Report::new("audit", Value::Null, inputs, result).verified(report.clean(), violations))
}

fn cmd_hunt(group: &str, n: usize, canonicalize: bool, budget: u64) -> Res<Report> {
    let p = parse_group(group)?;
    let cfg = HuntConfig { canonicalize, budget, ..HuntConfig::default() };
    let r = hunt_unique_expression_with(p.group(), n, &cfg)?;
    let mut result = serde_json::to_value(&r).expect("report serializes");
    result["hits"] = Value::from(
        r.hits
            .iter()
            .map(|tuple| Value::from(tuple.iter().map(|pair| p.set_json(&GroupSubset::from_indices(p.group(), pair.iter().copied()))).collect::<Vec<_>>()))
            .collect::<Vec<_>>(),
    );
    result["outcome"] = json!(if r.found() { "hit" } else { "no hit" });
    let inputs = json!({"n": n, "canonicalize": canonicalize, "budget": budget});
    Ok(Report::new("hunt", group_json(group, &p), inputs, result))
}

fn cmd_davenport(group: &str) -> Res<Report> {
    let p = parse_group(group)?;
    let d = davenport_bruteforce(p.group(), DAVENPORT_ORDER_CAP)?;
    let witness = GSequence::from_terms(p.group(), d.witness.iter().copied());
    let result = json!({
        "value": d.value,
        "lower": d.lower,
        "upper": d.upper,
        "within_bounds": d.within_bounds(),
        "witness": p.format_sequence(&witness),
    });
    let mut report = Report::new("davenport", group_json(group, &p), json!({}), result);
    report.verified = Some(d.within_bounds());
    if !d.within_bounds() {
        // outside the classical sandwich: reported, not fatal
        report.violations.push(format!("warning: D = {} outside [{}, {}]", d.value, d.lower, d.upper));
        eprintln!("warning: D(G) = {} lies outside [d*(G)+1, |G|] = [{}, {}]", d.value, d.lower, d.upper);
    }
    Ok(report)
}
