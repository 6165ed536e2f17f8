//! Subcommands and the JSON report they produce.

use serde::Serialize;
use serde_json::{json, Value};

use quasint_core::analysis::{
    check_algebraic_dependence, check_bracket_bridge, check_commutation, check_integrable_set,
    check_necessary_dependence_condition, check_regular_correlation, poisson_bracket, poisson_semibracket,
    quasi_independence, NecessaryVerdict, PhaseSample, PhaseSampler, VariableMap,
};
use quasint_core::catalog::System;
use quasint_core::diffop::{compose_by_normalization, Symbol};
use quasint_core::homog::{build_quasi_integrable_lift, lifted_momentum_name, phi_embed};
use quasint_core::ncpoly::NCPolynomial;
use quasint_core::oracle::{check_exponential_identity, operator_equal};
use quasint_core::{Config, DiffOperator, Error};

use crate::error::{CliError, Result};

pub const SCHEMA: &str = "quasint.report.v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Normalize,
    Symbol,
    Mainpart,
    Commute,
    Poisson,
    Rank,
    CheckIntegrable,
    CheckCorrelation,
    CheckDependence,
    CheckNec,
    Homogenize,
    Verify,
}

impl Command {
    pub const ALL: [Command; 12] = [
        Command::Normalize,
        Command::Symbol,
        Command::Mainpart,
        Command::Commute,
        Command::Poisson,
        Command::Rank,
        Command::CheckIntegrable,
        Command::CheckCorrelation,
        Command::CheckDependence,
        Command::CheckNec,
        Command::Homogenize,
        Command::Verify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Normalize => "normalize",
            Command::Symbol => "symbol",
            Command::Mainpart => "mainpart",
            Command::Commute => "commute",
            Command::Poisson => "poisson",
            Command::Rank => "rank",
            Command::CheckIntegrable => "check-integrable",
            Command::CheckCorrelation => "check-correlation",
            Command::CheckDependence => "check-dependence",
            Command::CheckNec => "check-nec",
            Command::Homogenize => "homogenize",
            Command::Verify => "verify",
        }
    }
}

/// Which operators, sets, witnesses and point a command works on.
#[derive(Clone, Debug, Default)]
pub struct Selection {
    pub ops: Vec<String>,
    pub set: Option<String>,
    pub central: Option<usize>,
    pub w: Vec<String>,
    pub y: Vec<String>,
    pub witnesses: Vec<String>,
    pub x: Option<Vec<f64>>,
    pub p: Option<Vec<f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Info,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: &'static str,
    pub system: String,
    pub config: Config,
    pub verdict: Verdict,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<Value>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Pass | Verdict::Info => 0,
            Verdict::Fail => 1,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

fn pass_if(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

struct Ctx<'a> {
    sys: &'a System,
    sel: &'a Selection,
    cfg: &'a Config,
}

impl Ctx<'_> {
    fn var(&self, i: usize) -> String {
        self.sys.vars[i].clone()
    }

    fn terms_json(&self, s: &Symbol) -> Value {
        let vars = |i: usize| self.var(i);
        Value::Array(
            s.sorted_terms()
                .into_iter()
                .map(|(alpha, c)| json!({ "alpha": alpha.as_slice(), "coeff": c.display_with(&vars).to_string() }))
                .collect(),
        )
    }

    fn operator_json(&self, op: &DiffOperator) -> Value {
        json!({
            "order": op.order(),
            "text": crate::format::operator_text(self.sys, op),
            "terms": self.terms_json(op.symbol()),
        })
    }

    fn symbol_text(&self, s: &Symbol) -> String {
        let vars = |i: usize| self.var(i);
        let momenta = |i: usize| format!("p{}", i + 1);
        s.display_with(&vars, &momenta).to_string()
    }

    fn lookup(&self, names: &[String]) -> Result<Vec<DiffOperator>> {
        Ok(self.sys.resolve(names)?)
    }

    /// `--ops`, else the members of `--set`, else every operator.
    fn selected(&self) -> Result<(Vec<String>, Vec<DiffOperator>)> {
        let names: Vec<String> = if !self.sel.ops.is_empty() {
            self.sel.ops.clone()
        } else if let Some(set) = &self.sel.set {
            self.sys
                .set(set)
                .ok_or_else(|| usage(format!("unknown set '{set}'")))?
                .members
                .clone()
        } else {
            self.sys.operators.iter().map(|(n, _)| n.clone()).collect()
        };
        if names.is_empty() {
            return Err(usage("no operators selected"));
        }
        let ops = self.lookup(&names)?;
        Ok((names, ops))
    }

    /// Members of `--set` (or the first set) with their central count.
    fn selected_set(&self) -> Result<(String, Vec<String>, Vec<DiffOperator>, usize)> {
        if !self.sel.ops.is_empty() {
            let central = self.sel.central.ok_or_else(|| usage("--ops needs --central"))?;
            let ops = self.lookup(&self.sel.ops)?;
            return Ok((String::new(), self.sel.ops.clone(), ops, central));
        }
        let set = match &self.sel.set {
            Some(name) => self
                .sys
                .set(name)
                .ok_or_else(|| usage(format!("unknown set '{name}'")))?,
            None => self
                .sys
                .sets
                .first()
                .ok_or_else(|| usage("the system defines no set"))?,
        };
        let ops = self.lookup(&set.members)?;
        Ok((
            set.name.clone(),
            set.members.clone(),
            ops,
            self.sel.central.unwrap_or(set.central),
        ))
    }

    fn given_point(&self) -> Result<Option<PhaseSample>> {
        match (&self.sel.x, &self.sel.p) {
            (None, None) => Ok(None),
            (Some(x), Some(p)) => Ok(Some(PhaseSample::new(x.clone(), p.clone(), &self.sys.domain)?)),
            _ => Err(usage("--x and --p must be given together")),
        }
    }

    /// The given point, or the first sampled point at which `f` succeeds.
    fn at_point<T>(&self, mut f: impl FnMut(&PhaseSample) -> quasint_core::Result<T>) -> Result<(PhaseSample, T)> {
        if let Some(pt) = self.given_point()? {
            let v = f(&pt)?;
            return Ok((pt, v));
        }
        let mut sampler = PhaseSampler::new(&self.sys.domain, self.cfg.seed);
        let limit = quasint_core::expr::MAX_ATTEMPTS;
        while sampler.drawn() < limit {
            let pt = sampler.draw()?;
            match f(&pt) {
                Ok(v) => return Ok((pt, v)),
                Err(Error::Singular(_)) | Err(Error::Domain(_)) => continue,
                Err(e) => return Err(e.into()),
            }
        }
        Err(Error::SamplingExhausted { attempts: limit }.into())
    }
}

/// Runs a command on a parsed system. With `verify`, the operators involved
/// are also checked against their action on exponentials.
pub fn run(cmd: Command, sys: &System, sel: &Selection, cfg: &Config, verify: bool) -> Result<Report> {
    let ctx = Ctx { sys, sel, cfg };
    let (verdict, result, involved) = match cmd {
        Command::Normalize => normalize(&ctx)?,
        Command::Symbol => symbol(&ctx)?,
        Command::Mainpart => mainpart(&ctx)?,
        Command::Commute => commute(&ctx)?,
        Command::Poisson => poisson(&ctx)?,
        Command::Rank => rank(&ctx)?,
        Command::CheckIntegrable => check_integrable(&ctx)?,
        Command::CheckCorrelation => check_correlation(&ctx)?,
        Command::CheckDependence => check_dependence(&ctx)?,
        Command::CheckNec => check_nec(&ctx)?,
        Command::Homogenize => homogenize(&ctx)?,
        Command::Verify => verify_ops(&ctx)?,
    };
    let (verdict, verification) = if verify {
        let (ok, v) = oracle_checks(&ctx, &involved)?;
        (if ok { verdict } else { Verdict::Fail }, Some(v))
    } else {
        (verdict, None)
    };
    Ok(Report {
        schema: SCHEMA,
        command: cmd.name(),
        system: sys.name.clone(),
        config: cfg.clone(),
        verdict,
        result,
        verification,
    })
}

type Outcome = (Verdict, Value, Vec<String>);

fn normalize(ctx: &Ctx) -> Result<Outcome> {
    let (names, ops) = ctx.selected()?;
    let out: Vec<Value> = names
        .iter()
        .zip(&ops)
        .map(|(n, op)| {
            let mut v = ctx.operator_json(op);
            v["name"] = json!(n);
            v
        })
        .collect();
    Ok((Verdict::Info, json!({ "operators": out }), names))
}

fn symbol(ctx: &Ctx) -> Result<Outcome> {
    let (names, ops) = ctx.selected()?;
    let point = ctx.given_point()?;
    let mut out = Vec::new();
    for (n, op) in names.iter().zip(&ops) {
        let s = op.symbol();
        let mut v = json!({
            "name": n,
            "degree": s.degree(),
            "text": ctx.symbol_text(s),
            "terms": ctx.terms_json(s),
        });
        if let Some(pt) = &point {
            v["value"] = json!(s.eval_with(&pt.x, &pt.p, &ctx.sys.domain.params, ctx.cfg.singular_tol)?);
        }
        out.push(v);
    }
    let mut result = json!({ "symbols": out });
    if let Some(pt) = point {
        result["point"] = to_value(&pt);
    }
    Ok((Verdict::Info, result, names))
}

fn mainpart(ctx: &Ctx) -> Result<Outcome> {
    let (names, ops) = ctx.selected()?;
    let mut out = Vec::new();
    for (n, op) in names.iter().zip(&ops) {
        let op = op.prune(&ctx.sys.domain, ctx.cfg)?;
        out.push(json!({
            "name": n,
            "order": op.order(),
            "main": ctx.operator_json(&op.main_part()),
            "second_main": ctx.operator_json(&op.second_main_part()),
        }));
    }
    Ok((Verdict::Info, json!({ "operators": out }), names))
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

fn commute(ctx: &Ctx) -> Result<Outcome> {
    let (names, ops) = ctx.selected()?;
    if ops.len() < 2 {
        return Err(usage("commute needs at least two operators"));
    }
    let k = match (&ctx.sel.set, ctx.sel.central) {
        (_, Some(k)) => k,
        (Some(set), None) => ctx.sys.set(set).map_or(0, |s| s.central),
        (None, None) => 0,
    };
    let k = if k == 0 { ops.len() } else { k };
    let matrix = check_commutation(&ops, k, &ctx.sys.domain, ctx.cfg)?;
    let mut out = Vec::new();
    for e in &matrix.entries {
        let c = ops[e.i].commutator(&ops[e.j])?.prune(&ctx.sys.domain, ctx.cfg)?;
        out.push(json!({
            "a": names[e.i],
            "b": names[e.j],
            "commutator": ctx.operator_json(&c),
            "verdict": to_value(&e.verdict),
        }));
    }
    Ok((
        pass_if(matrix.all_zero),
        json!({ "central": k, "pairs": out, "all_zero": matrix.all_zero }),
        names,
    ))
}

fn poisson(ctx: &Ctx) -> Result<Outcome> {
    let (names, ops) = ctx.selected()?;
    if ops.len() < 2 {
        return Err(usage("poisson needs at least two operators"));
    }
    let domain = &ctx.sys.domain;
    let mains: Vec<Symbol> = ops
        .iter()
        .map(|op| Ok(op.prune(domain, ctx.cfg)?.main_part().into_symbol()))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    let mut ok = true;
    for (i, j) in pairs(ops.len()) {
        let bracket = poisson_bracket(&mains[i], &mains[j])?;
        let semi = poisson_semibracket(&mains[i], &mains[j])?;
        let bridge = check_bracket_bridge(&ops[i], &ops[j], domain, ctx.cfg)?;
        ok &= bridge.passes();
        out.push(json!({
            "a": names[i],
            "b": names[j],
            "bracket": ctx.symbol_text(&bracket),
            "semibracket": ctx.symbol_text(&semi),
            "bridge": to_value(&bridge),
        }));
    }
    Ok((pass_if(ok), json!({ "pairs": out }), names))
}

fn rank(ctx: &Ctx) -> Result<Outcome> {
    let (names, ops) = ctx.selected()?;
    let report = quasi_independence(&ops, &ctx.sys.domain, ctx.cfg)?;
    Ok((
        pass_if(report.is_quasi_independent()),
        json!({ "operators": names, "report": to_value(&report) }),
        names,
    ))
}

fn check_integrable(ctx: &Ctx) -> Result<Outcome> {
    let (set, names, ops, k) = ctx.selected_set()?;
    let report = check_integrable_set(&ops, k, &ctx.sys.domain, ctx.cfg)?;
    Ok((
        pass_if(report.passes()),
        json!({ "set": set, "operators": names, "report": to_value(&report) }),
        names,
    ))
}

fn witness_ops(ctx: &Ctx, name: Option<&String>) -> Result<(String, NCPolynomial, Vec<String>, Vec<String>)> {
    let w = match name {
        Some(n) => ctx
            .sys
            .witness(n)
            .ok_or_else(|| usage(format!("unknown witness '{n}'")))?,
        None => ctx
            .sys
            .witnesses
            .first()
            .ok_or_else(|| usage("the system defines no witness"))?,
    };
    Ok((w.name.clone(), w.poly.clone(), w.g.clone(), w.f.clone()))
}

fn check_correlation(ctx: &Ctx) -> Result<Outcome> {
    if ctx.sel.witnesses.len() > 1 {
        return Err(usage("check-correlation takes one witness"));
    }
    let (name, poly, g, f) = witness_ops(ctx, ctx.sel.witnesses.first())?;
    let g_ops = ctx.lookup(&g)?;
    let f_ops = ctx.lookup(&f)?;
    let (pt, report) =
        ctx.at_point(|pt| check_regular_correlation(&poly, &g_ops, &f_ops, pt, &ctx.sys.domain, ctx.cfg))?;
    let involved: Vec<String> = g.iter().chain(&f).cloned().collect();
    Ok((
        pass_if(report.passes()),
        json!({ "witness": name, "point": to_value(&pt), "report": to_value(&report) }),
        involved,
    ))
}

fn check_dependence(ctx: &Ctx) -> Result<Outcome> {
    let sel = ctx.sel;
    if sel.w.is_empty() || sel.witnesses.is_empty() {
        return Err(usage("check-dependence needs --w and --witnesses"));
    }
    let mut polys = Vec::new();
    let mut binding: Option<(Vec<String>, Vec<String>)> = None;
    for n in &sel.witnesses {
        let (_, poly, g, f) = witness_ops(ctx, Some(n))?;
        match &binding {
            None => binding = Some((g, f)),
            Some(b) if *b == (g.clone(), f.clone()) => {}
            Some(_) => return Err(usage("the witnesses must bind the same operators")),
        }
        polys.push(poly);
    }
    let (g, f) = binding.expect("at least one witness");
    let all: Vec<String> = sel.w.iter().chain(&sel.y).cloned().collect();
    let index = |n: &String| -> Result<usize> {
        all.iter()
            .position(|m| m == n)
            .ok_or_else(|| usage(format!("witness operator '{n}' is in neither --w nor --y")))
    };
    let map = VariableMap {
        g: g.iter().map(index).collect::<Result<_>>()?,
        f: f.iter().map(index).collect::<Result<_>>()?,
    };
    let w = ctx.lookup(&sel.w)?;
    let y = ctx.lookup(&sel.y)?;
    let (pt, report) =
        ctx.at_point(|pt| check_algebraic_dependence(&polys, &map, &w, &y, pt, &ctx.sys.domain, ctx.cfg))?;
    Ok((
        pass_if(report.passes()),
        json!({
            "w": sel.w,
            "y": sel.y,
            "witnesses": sel.witnesses,
            "map": to_value(&map),
            "point": to_value(&pt),
            "report": to_value(&report),
        }),
        all,
    ))
}

fn check_nec(ctx: &Ctx) -> Result<Outcome> {
    let (names, ops) = ctx.selected()?;
    let domain = &ctx.sys.domain;
    let mut points = Vec::new();
    let mut record = |pt: PhaseSample, r: quasint_core::analysis::NecessaryReport| {
        points.push((pt, r));
    };
    if let Some(pt) = ctx.given_point()? {
        let r = check_necessary_dependence_condition(&ops, &pt, domain, ctx.cfg)?;
        record(pt, r);
    } else {
        let mut sampler = PhaseSampler::new(domain, ctx.cfg.seed);
        let limit = quasint_core::expr::MAX_ATTEMPTS * ctx.cfg.samples.max(1);
        let mut taken = 0;
        while taken < ctx.cfg.samples {
            if sampler.drawn() >= limit {
                return Err(Error::SamplingExhausted { attempts: limit }.into());
            }
            let pt = sampler.draw()?;
            match check_necessary_dependence_condition(&ops, &pt, domain, ctx.cfg) {
                Ok(r) => {
                    record(pt, r);
                    taken += 1;
                }
                Err(Error::Singular(_)) | Err(Error::Domain(_)) => continue,
                Err(e) => return Err(e.into()),
            }
        }
    }
    let violations = points
        .iter()
        .filter(|(_, r)| matches!(r.verdict, NecessaryVerdict::ViolatesNecessaryCondition { .. }))
        .count();
    let not_applicable = points
        .iter()
        .filter(|(_, r)| matches!(r.verdict, NecessaryVerdict::NotApplicable { .. }))
        .count();
    let summary = if violations > 0 {
        "ViolatesNecessaryCondition"
    } else if not_applicable == points.len() {
        "NotApplicable"
    } else {
        "PassesNecessaryCondition"
    };
    let verdict = match summary {
        "ViolatesNecessaryCondition" => Verdict::Fail,
        "NotApplicable" => Verdict::Info,
        _ => Verdict::Pass,
    };
    let records: Vec<Value> = points
        .iter()
        .map(|(pt, r)| json!({ "point": to_value(pt), "report": to_value(r) }))
        .collect();
    Ok((
        verdict,
        json!({
            "operators": names,
            "summary": summary,
            "violations": violations,
            "not_applicable": not_applicable,
            "points": records,
        }),
        names,
    ))
}

fn lifted_json(ctx: &Ctx, op: &DiffOperator) -> Value {
    let vars = |i: usize| if i == 0 { "x0".to_string() } else { ctx.var(i - 1) };
    let momenta = |i: usize| lifted_momentum_name(i);
    let vars_c = |i: usize| vars(i);
    json!({
        "order": op.order(),
        "text": op.display_with(&vars, &momenta).to_string(),
        "terms": Value::Array(
            op.symbol()
                .sorted_terms()
                .into_iter()
                .map(|(a, c)| json!({ "alpha": a.as_slice(), "coeff": c.display_with(&vars_c).to_string() }))
                .collect(),
        ),
    })
}

fn homogenize(ctx: &Ctx) -> Result<Outcome> {
    let domain = &ctx.sys.domain;
    if ctx.sel.set.is_some() || ctx.sel.central.is_some() {
        let (set, names, ops, k) = ctx.selected_set()?;
        let report = build_quasi_integrable_lift(&ops, k, domain, ctx.cfg)?;
        let lifted: Vec<Value> = report.operators.iter().map(|op| lifted_json(ctx, op)).collect();
        return Ok((
            pass_if(report.passes()),
            json!({
                "set": set,
                "operators": names,
                "lifted": lifted,
                "verdict": to_value(&report.verdict),
                "commutation": to_value(&report.commutation),
                "symbol_rank": to_value(&report.symbol_rank),
                "main_rank": to_value(&report.main_rank),
                "lifted_report": to_value(&report.lifted),
            }),
            names,
        ));
    }
    let (names, ops) = ctx.selected()?;
    let mut out = Vec::new();
    for (n, op) in names.iter().zip(&ops) {
        let lifted = phi_embed(&op.prune(domain, ctx.cfg)?)?;
        let mut v = lifted_json(ctx, &lifted);
        v["name"] = json!(n);
        out.push(v);
    }
    Ok((Verdict::Info, json!({ "operators": out }), names))
}

fn verify_ops(ctx: &Ctx) -> Result<Outcome> {
    let (names, ops) = ctx.selected()?;
    let (ok, v) = oracle_checks(ctx, &names)?;
    let domain = &ctx.sys.domain;
    let mut compositions = Vec::new();
    let mut all = ok;
    for (i, pair) in ops.windows(2).enumerate() {
        let by_symbol = pair[0].compose(&pair[1])?;
        let by_normal_order = compose_by_normalization(&pair[0], &pair[1])?;
        let exact = by_symbol == by_normal_order;
        let oracle = operator_equal(&by_symbol, &by_normal_order, domain, ctx.cfg)?;
        all &= exact && oracle.equal;
        compositions.push(json!({
            "a": names[i],
            "b": names[i + 1],
            "exact": exact,
            "oracle": to_value(&oracle),
        }));
    }
    Ok((
        pass_if(all),
        json!({ "exponential": v["exponential"], "compositions": compositions }),
        Vec::new(),
    ))
}

/// `A e^{λx} = σ_A(x, λ) e^{λx}` for every named operator.
fn oracle_checks(ctx: &Ctx, names: &[String]) -> Result<(bool, Value)> {
    let mut seen: Vec<&String> = Vec::new();
    for n in names {
        if !seen.contains(&n) {
            seen.push(n);
        }
    }
    let mut ok = true;
    let mut out = Vec::new();
    for n in seen {
        let op = ctx.lookup(std::slice::from_ref(n))?.remove(0);
        let check = check_exponential_identity(&op, &ctx.sys.domain, ctx.cfg)?;
        ok &= check.passes;
        out.push(json!({ "name": n, "check": to_value(&check) }));
    }
    Ok((ok, json!({ "exponential": out, "passes": ok })))
}
