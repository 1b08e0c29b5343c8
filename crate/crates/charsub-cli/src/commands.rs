//! One runner per subcommand. Each runner resolves its inputs from the spec
//! file, calls the library, re-verifies whatever certificate comes back, and
//! returns a JSON result plus the exit code: 0 verified, 1 property violated
//! or excluded, 2 undecided, 3 (via `SpecError`) unusable input.

use crate::literal::{
    parse_bigint, parse_char_list, parse_element_coords, parse_group, parse_point,
    parse_point_list, parse_rational, parse_seqspec, parse_tinf, parse_u32, parse_u64,
    parse_u64_list, LitError,
};
use crate::report::{big, intervalv, pointv, ratv, subgroupv};
use crate::spec::{Binding, SpecError, SpecFile};
use charsub_core::circle::{reduce_mod1, CirclePoint};
use charsub_core::dioph::{
    integer_relation, kronecker_char_search, l1_word_check, KroneckerOutcome, RelationOutcome,
};
use charsub_core::graph::{
    annihilator_generators, enumerate_akm_chars, enumerate_akm_int, neighborhood_member,
    separate_point, NeighborhoodVerdict,
};
use charsub_core::membership::{
    member_su_circle, member_su_finite_point, radical_profile, su_finite, InReason,
    StructuralFamily, TriBool, Verdict,
};
use charsub_core::polish::{
    escape_witness, gclosure_blocks, BlockSum, GClosureOutcome, OmegaFamily, OmegaRule,
};
use charsub_core::seq::{FinPerSeq, SeqSpec};
use charsub_core::{int, Rat};
use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

pub struct Outcome {
    pub result: Value,
    pub exit_code: i32,
    pub asserted: Vec<String>,
}

impl Outcome {
    fn ok(result: Value) -> Outcome {
        Outcome { result, exit_code: 0, asserted: Vec::new() }
    }
}

type CResult = Result<Outcome, SpecError>;

fn lit(b: &Binding, e: LitError) -> SpecError {
    b.error_at(e.offset, e.msg)
}

/// Library failures on structurally valid input still mean the spec asked
/// for something the tool cannot do; they share the input-error exit.
fn lib(key: &str, e: charsub_core::Error) -> SpecError {
    SpecError { line: 0, col: 0, msg: format!("{}: {}", key, e) }
}

fn get_seq(spec: &SpecFile) -> Result<SeqSpec, SpecError> {
    let b = spec.require("sequence")?;
    parse_seqspec(&b.raw).map_err(|e| lit(b, e))
}

fn get_u64(spec: &SpecFile, key: &str, default: u64) -> Result<u64, SpecError> {
    match spec.get(key) {
        Some(b) => parse_u64(&b.raw).map_err(|e| lit(b, e)),
        None => Ok(default),
    }
}

fn get_u32(spec: &SpecFile, key: &str, default: u32) -> Result<u32, SpecError> {
    match spec.get(key) {
        Some(b) => parse_u32(&b.raw).map_err(|e| lit(b, e)),
        None => Ok(default),
    }
}

fn get_rat(spec: &SpecFile, key: &str) -> Result<Option<Rat>, SpecError> {
    match spec.get(key) {
        Some(b) => Ok(Some(parse_rational(&b.raw).map_err(|e| lit(b, e))?)),
        None => Ok(None),
    }
}

/// The topology-existence claim behind circle-side sequences is taken on
/// trust; reports say so explicitly.
fn t_sequence_flag() -> Vec<String> {
    vec!["t_sequence: asserted".into()]
}

fn reason_str(r: &InReason) -> &'static str {
    match r {
        InReason::ZeroPoint => "zero_point",
        InReason::TrivialTail => "trivial_tail",
        InReason::ResidueCycleVanishes => "residue_cycle_vanishes",
        InReason::PeriodAnnihilates => "period_annihilates",
    }
}

fn verdict_json(v: &Verdict) -> (Value, i32) {
    match v {
        Verdict::In(c) => (
            json!({ "verdict": "in", "cutoff": c.cutoff, "reason": reason_str(&c.reason) }),
            0,
        ),
        Verdict::NotIn(w) => (
            json!({
                "verdict": "not_in",
                "delta": ratv(&w.delta),
                "cycle": w.cycle.iter().map(big).collect::<Vec<_>>(),
                "modulus": big(&w.modulus),
                "preperiod": w.preperiod,
                "witness_index": w.witness_index,
            }),
            1,
        ),
        Verdict::Unknown { depth } => (json!({ "verdict": "unknown", "depth": depth }), 2),
    }
}

/// Re-derive a circle verdict's evidence from term evaluation alone.
fn reverify_circle(u: &SeqSpec, x: &Rat, v: &Verdict) -> Option<bool> {
    match v {
        Verdict::In(c) => {
            let ok = (c.cutoff..c.cutoff + 8).all(|n| match u.eval_int(n) {
                Ok(t) => reduce_mod1(&(Rat::from_integer(t) * x)).is_zero(),
                Err(_) => false,
            });
            Some(ok)
        }
        Verdict::NotIn(w) => {
            let n = w.preperiod + w.witness_index;
            let Ok(t) = u.eval_int(n) else { return Some(false) };
            let f = reduce_mod1(&(Rat::from_integer(t) * x));
            let norm = f.clone().min(Rat::from_integer(int(1)) - &f);
            Some(norm == w.delta)
        }
        Verdict::Unknown { .. } => None,
    }
}

fn run_membership(spec: &SpecFile) -> CResult {
    let u = get_seq(spec)?;
    if let SeqSpec::FinPer(f) = &u {
        let b = spec.require("point")?;
        let coords = parse_element_coords(&b.raw, &f.group).map_err(|e| lit(b, e))?;
        let x = f.group.reduce(&coords).map_err(|e| lib("point", e))?;
        let v = member_su_finite_point(f, &f.group, &x).map_err(|e| lib("membership", e))?;
        let (vj, code) = verdict_json(&v);
        let result = json!({ "points": [{ "point": coords, "verdict": vj }] });
        return Ok(Outcome { result, exit_code: code, asserted: Vec::new() });
    }

    let points: Vec<CirclePoint> = if let Some(b) = spec.get("points") {
        parse_point_list(&b.raw).map_err(|e| lit(b, e))?
    } else {
        let b = spec.require("point")?;
        vec![parse_point(&b.raw).map_err(|e| lit(b, e))?]
    };
    let depth = get_u64(spec, "depth", 64)?;

    let mut rows = Vec::new();
    let mut code = 0;
    for p in &points {
        let v = member_su_circle(&u, p, depth).map_err(|e| lib("membership", e))?;
        let (mut vj, c) = verdict_json(&v);
        if let Some(r) = p.as_rat() {
            if let Some(ok) = reverify_circle(&u, r, &v) {
                vj["reverified"] = json!(ok);
            }
        }
        // undecided dominates excluded dominates verified
        code = match (code, c) {
            (2, _) | (_, 2) => 2,
            (1, _) | (_, 1) => 1,
            _ => 0,
        };
        rows.push(json!({ "point": pointv(p), "verdict": vj }));
    }
    Ok(Outcome { result: json!({ "points": rows }), exit_code: code, asserted: t_sequence_flag() })
}

/// Accept either `sequence = finper(...)` or `group` plus `period` (and an
/// optional `prefix`) of character coordinate lists.
fn get_finper(spec: &SpecFile) -> Result<FinPerSeq, SpecError> {
    if let Some(b) = spec.get("sequence") {
        let s = parse_seqspec(&b.raw).map_err(|e| lit(b, e))?;
        return match s {
            SeqSpec::FinPer(f) => Ok(f),
            _ => Err(b.error_at(0, "this command needs a finper(...) sequence")),
        };
    }
    let gb = spec.require("group")?;
    let g = parse_group(&gb.raw).map_err(|e| lit(gb, e))?;
    let pb = spec.require("period")?;
    let period = parse_char_list(&pb.raw, &g).map_err(|e| lit(pb, e))?;
    let prefix = match spec.get("prefix") {
        Some(b) => parse_char_list(&b.raw, &g).map_err(|e| lit(b, e))?,
        None => Vec::new(),
    };
    FinPerSeq::new(g, prefix, period).map_err(|e| lib("period", e))
}

fn run_su_finite(spec: &SpecFile) -> CResult {
    let u = get_finper(spec)?;
    let g = u.group.clone();
    let su = su_finite(&g, &u).map_err(|e| lib("su-finite", e))?;
    // round trip: the pointwise verdict must agree with the subgroup on
    // every element
    let mut reverified = true;
    for x in g.elements().map_err(|e| lib("group", e))? {
        let v = member_su_finite_point(&u, &g, &x).map_err(|e| lib("su-finite", e))?;
        reverified &= v.is_in() == su.contains(&x);
    }
    let result = json!({
        "subgroup": subgroupv(&su),
        "is_full": su.is_full(),
        "reverified": reverified,
    });
    Ok(Outcome { result, exit_code: if reverified { 0 } else { 1 }, asserted: Vec::new() })
}

fn tribool(t: &TriBool) -> Value {
    match t {
        TriBool::True => json!(true),
        TriBool::False => json!(false),
        TriBool::Unknown => json!("unknown"),
    }
}

fn run_radical(spec: &SpecFile) -> CResult {
    let u = get_seq(spec)?;
    let q_max = get_u64(spec, "q_max", 50)?;
    let p = radical_profile(&u, q_max).map_err(|e| lib("radical", e))?;
    let family = p.structural_family.as_ref().map(|f| match f {
        StructuralFamily::AllModuli => json!({ "kind": "all_moduli" }),
        StructuralFamily::PowerTower { base } => {
            json!({ "kind": "power_tower", "base": big(base) })
        }
    });
    let result = json!({
        "superset_modulus": big(&p.superset_modulus),
        "subset_modulus": big(&p.subset_modulus),
        "members": p.members.iter().map(ratv).collect::<Vec<_>>(),
        "map_flag": tribool(&p.map_flag),
        "minap_flag": tribool(&p.minap_flag),
        "structural_family": family,
        "probe_bound": p.probe_bound,
    });
    Ok(Outcome { result, exit_code: 0, asserted: t_sequence_flag() })
}

fn run_separate(spec: &SpecFile) -> CResult {
    let u = get_finper(spec)?;
    let g = u.group.clone();
    let pb = spec.require("point")?;
    let coords = parse_element_coords(&pb.raw, &g).map_err(|e| lit(pb, e))?;
    let x = g.reduce(&coords).map_err(|e| lib("point", e))?;
    let cb = spec.require("claim")?;
    let claim = parse_point_list(&cb.raw).map_err(|e| lit(cb, e))?;

    let sep = separate_point(&g, &u, &x, &claim).map_err(|e| lib("separate", e))?;
    // recompute the value at the claimed point from the certificate parts;
    // an irrational entry keeps the library's symbolic value authoritative
    let all_rational = claim.iter().take(sep.depth as usize).all(|z| z.as_rat().is_some());
    let verified = if all_rational {
        let mut acc = g.pair(&sep.base_char, &x).map_err(|e| lib("separate", e))?;
        for (k, z) in claim.iter().take(sep.depth as usize).enumerate() {
            let t = sep.tail.coef_at(k as u128 + 1);
            let r = z.as_rat().expect("all entries checked rational");
            acc = reduce_mod1(&(acc + Rat::new(t, int(1)) * r));
        }
        sep.value_at_point.as_rat() == Some(&acc) && !acc.is_zero()
    } else {
        sep.annihilated > 0
    };
    let tail: Vec<Value> = sep
        .tail
        .entries()
        .map_err(|e| lib("separate", e))?
        .into_iter()
        .map(|(pos, c)| json!({ "position": pos.to_string(), "coefficient": big(&c) }))
        .collect();
    let result = json!({
        "base_char": sep.base_char.coords,
        "tail": tail,
        "depth": sep.depth,
        "annihilated": sep.annihilated,
        "value_at_point": pointv(&sep.value_at_point),
        "verified": verified,
    });
    Ok(Outcome { result, exit_code: if verified { 0 } else { 1 }, asserted: Vec::new() })
}

fn run_gu_perp(spec: &SpecFile) -> CResult {
    let u = get_finper(spec)?;
    let g = u.group.clone();
    let depth = get_u64(spec, "depth", 4)?;
    let gens = annihilator_generators(&g, &u, depth).map_err(|e| lib("gu-perp", e))?;
    let list: Vec<Value> = gens
        .generators
        .iter()
        .map(|(chi, tail)| {
            let entries: Vec<Value> = tail
                .entries()
                .expect("depth-bounded tails materialize")
                .into_iter()
                .map(|(pos, c)| json!({ "position": pos.to_string(), "coefficient": big(&c) }))
                .collect();
            json!({ "base_char": chi.coords, "tail": entries })
        })
        .collect();
    let result = json!({
        "generators": list,
        "pairs_checked": gens.pairs_checked,
        "relation_verified": gens.relation_verified,
    });
    let code = if gens.relation_verified { 0 } else { 1 };
    Ok(Outcome { result, exit_code: code, asserted: Vec::new() })
}

fn run_akm(spec: &SpecFile) -> CResult {
    let u = get_seq(spec)?;
    let k = get_u32(spec, "k", 1)?;
    let lo = get_u64(spec, "lo", 0)?;
    let hi = get_u64(spec, "hi", 4)?;
    let result = match &u {
        SeqSpec::FinPer(f) => {
            let chars =
                enumerate_akm_chars(&f.group, f, k, lo, hi).map_err(|e| lib("akm", e))?;
            json!({
                "kind": "characters",
                "values": chars.iter().map(|c| json!(c.coords)).collect::<Vec<_>>(),
            })
        }
        _ => {
            let ints = enumerate_akm_int(&u, k, lo, hi).map_err(|e| lib("akm", e))?;
            json!({
                "kind": "integers",
                "values": ints.iter().map(big).collect::<Vec<_>>(),
            })
        }
    };
    Ok(Outcome::ok(result))
}

fn run_neighborhood(spec: &SpecFile) -> CResult {
    let u = get_seq(spec)?;
    let cb = spec.require("cutoffs")?;
    let cutoffs = parse_u64_list(&cb.raw).map_err(|e| lit(cb, e))?;
    let yb = spec.require("y")?;
    let y = parse_bigint(&yb.raw).map_err(|e| lit(yb, e))?;
    let depth = get_u64(spec, "depth", 6)?;
    let budget = get_u64(spec, "budget", 1_000_000)?;

    let v = neighborhood_member(&u, &cutoffs, &y, depth, budget)
        .map_err(|e| lib("neighborhood", e))?;
    let (result, code) = match v {
        NeighborhoodVerdict::In { decomposition } => {
            // re-sum the decomposition exactly
            let mut total = BigInt::zero();
            let mut terms = Vec::new();
            for t in &decomposition {
                let term = u.eval_int(t.index).map_err(|e| lib("neighborhood", e))?;
                total += int(t.sign as i64) * &term;
                terms.push(json!({
                    "slot": t.slot,
                    "index": t.index,
                    "sign": t.sign,
                    "term": big(&term),
                }));
            }
            let resummed = total == y;
            (
                json!({ "verdict": "in", "decomposition": terms, "resummed": resummed }),
                if resummed { 0 } else { 1 },
            )
        }
        NeighborhoodVerdict::NotIn { modulus } => {
            // modulus 0 certifies that only 0 is decomposable
            let consistent = if modulus.is_zero() {
                !y.is_zero()
            } else {
                !(&y % &modulus).is_zero()
            };
            (
                json!({ "verdict": "not_in", "modulus": big(&modulus), "reverified": consistent }),
                1,
            )
        }
        NeighborhoodVerdict::Unknown { searched_to } => {
            (json!({ "verdict": "unknown", "searched_to": searched_to }), 2)
        }
    };
    Ok(Outcome { result, exit_code: code, asserted: t_sequence_flag() })
}

fn omega_rule(spec: &SpecFile) -> Result<OmegaRule, SpecError> {
    match spec.get("rule") {
        None => Ok(OmegaRule::UnitDiagonal),
        Some(b) => match b.raw.as_str() {
            "unit" => Ok(OmegaRule::UnitDiagonal),
            "scaled" => Ok(OmegaRule::ScaledDiagonal),
            "pinned" => Ok(OmegaRule::PinnedFirst),
            other => Err(b.error_at(0, format!("unknown family rule {:?}", other))),
        },
    }
}

fn run_witness_exa1(spec: &SpecFile) -> CResult {
    let fam = OmegaFamily::ruled(omega_rule(spec)?);
    let levels = get_u64(spec, "levels", 100)?;
    let target = get_rat(spec, "target")?.unwrap_or_else(|| Rat::from_integer(int(10)));
    let rep = escape_witness(&fam, levels, &target).map_err(|e| lib("witness-exa1", e))?;
    let traces: Vec<Value> = rep
        .trace
        .iter()
        .map(|t| {
            json!({
                "t": t.t,
                "norm_upper": ratv(&t.norm_upper),
                "bound": ratv(&t.bound),
                "ok": t.ok,
            })
        })
        .collect();
    let all_ok = rep.trace.iter().all(|t| t.ok);
    let diverged = rep.divergence.partial_lower >= target;
    let result = json!({
        "bound_c": rep.bound_c,
        "cutoffs": rep.cutoffs,
        "positions": rep.positions.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "trace": traces,
        "divergence": {
            "target": ratv(&rep.divergence.target),
            "partial_lower": ratv(&rep.divergence.partial_lower),
            "through_index": rep.divergence.through_index.to_string(),
        },
        "verified": all_ok && diverged,
    });
    let code = if all_ok && diverged { 0 } else { 1 };
    Ok(Outcome { result, exit_code: code, asserted: Vec::new() })
}

fn run_gclosure(spec: &SpecFile) -> CResult {
    let eb = spec.require("element")?;
    let z = parse_tinf(&eb.raw).map_err(|e| lit(eb, e))?;
    let blocks = get_u32(spec, "blocks", 20)?;
    let start = match spec.get("start") {
        Some(b) => Some(parse_u64(&b.raw).map_err(|e| lit(b, e))? as u128),
        None => None,
    };
    let bits = get_u32(spec, "bits", 128)?;
    let out = gclosure_blocks(&z, blocks, start, bits).map_err(|e| lib("gclosure", e))?;
    let result = match out {
        GClosureOutcome::Blocks(p) => {
            let rows: Vec<Value> = p
                .blocks
                .iter()
                .map(|b| {
                    let sum = match &b.sum {
                        BlockSum::Exact(r) => json!({ "exact": ratv(r) }),
                        BlockSum::Certified(i) => intervalv(i),
                    };
                    json!({
                        "start": b.start.to_string(),
                        "end": b.end.to_string(),
                        "sum": sum,
                        "chord_lower": ratv(&b.chord_lower),
                    })
                })
                .collect();
            json!({
                "outcome": "blocks",
                "blocks": rows,
                "chord_floor": ratv(&p.chord_floor),
            })
        }
        GClosureOutcome::CoordinateSeparator { from, norm } => json!({
            "outcome": "coordinate_separator",
            "from": from.to_string(),
            "norm": ratv(&norm),
        }),
    };
    Ok(Outcome::ok(result))
}

fn run_kronecker(spec: &SpecFile) -> CResult {
    let ib = spec.require("inputs")?;
    let inputs = parse_point_list(&ib.raw).map_err(|e| lit(ib, e))?;
    let tb = spec.require("targets")?;
    let targets = parse_point_list(&tb.raw).map_err(|e| lit(tb, e))?;
    let eps = get_rat(spec, "eps")?
        .ok_or_else(|| SpecError { line: 0, col: 0, msg: "missing required key \"eps\"".into() })?;
    let scan_max = get_u64(spec, "scan_max", 1_000_000)?;

    let out = kronecker_char_search(&inputs, &targets, &eps, scan_max)
        .map_err(|e| lib("kronecker", e))?;
    let (result, code) = match out {
        KroneckerOutcome::Solution(sol) => {
            let achieved: Vec<Value> = sol.achieved.iter().map(intervalv).collect();
            let verified = sol.achieved.iter().all(|i| i.hi < eps);
            (
                json!({ "outcome": "solution", "n": sol.n, "achieved": achieved, "verified": verified }),
                if verified { 0 } else { 1 },
            )
        }
        KroneckerOutcome::NotFoundWithin { n_max } => {
            (json!({ "outcome": "not_found_within", "n_max": n_max }), 2)
        }
        KroneckerOutcome::DependentInputs(cert) => (
            json!({
                "outcome": "dependent_inputs",
                "coefficients": cert.coefficients.iter().map(big).collect::<Vec<_>>(),
                "height": cert.height,
            }),
            1,
        ),
    };
    let asserted = vec!["kronecker_set: asserted (independence certified only up to the screening height)".into()];
    Ok(Outcome { result, exit_code: code, asserted })
}

fn run_relation(spec: &SpecFile) -> CResult {
    let ib = spec.require("inputs")?;
    let inputs = parse_point_list(&ib.raw).map_err(|e| lit(ib, e))?;
    let height = get_u64(spec, "height", 1000)?;
    let out = integer_relation(&inputs, height).map_err(|e| lib("relation", e))?;
    let (result, code) = match out {
        RelationOutcome::Found(cert) => (
            json!({
                "outcome": "found",
                "coefficients": cert.coefficients.iter().map(big).collect::<Vec<_>>(),
                "height": cert.height,
                "verified": cert.verified,
            }),
            if cert.verified { 0 } else { 1 },
        ),
        RelationOutcome::NoneFound { height, structural } => (
            json!({ "outcome": "none_found", "height": height, "structural": structural }),
            1,
        ),
    };
    Ok(Outcome { result, exit_code: code, asserted: Vec::new() })
}

fn run_wordcheck(spec: &SpecFile) -> CResult {
    let rank = get_u32(spec, "rank", 3)?;
    let n0 = get_u32(spec, "n0", 4)?;
    let rep = l1_word_check(rank, n0).map_err(|e| lib("wordcheck", e))?;
    let pass = rep.only_zero_passes && rep.delannoy_match && rep.symbolic_holds;
    let result = json!({
        "rank": rep.rank,
        "n0": rep.n0,
        "vectors_enumerated": rep.vectors_enumerated,
        "only_zero_passes": rep.only_zero_passes,
        "counts": rep.counts,
        "delannoy_match": rep.delannoy_match,
        "symbolic_holds": rep.symbolic_holds,
    });
    Ok(Outcome { result, exit_code: if pass { 0 } else { 1 }, asserted: Vec::new() })
}

pub fn run(command: &str, spec: &SpecFile) -> CResult {
    match command {
        "membership" => run_membership(spec),
        "su-finite" => run_su_finite(spec),
        "radical" => run_radical(spec),
        "separate" => run_separate(spec),
        "gu-perp" => run_gu_perp(spec),
        "akm" => run_akm(spec),
        "neighborhood" => run_neighborhood(spec),
        "witness-exa1" => run_witness_exa1(spec),
        "gclosure" => run_gclosure(spec),
        "kronecker" => run_kronecker(spec),
        "relation" => run_relation(spec),
        "wordcheck" => run_wordcheck(spec),
        other => Err(SpecError { line: 0, col: 0, msg: format!("unknown command {:?}", other) }),
    }
}
