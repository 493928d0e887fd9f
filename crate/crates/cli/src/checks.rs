//! Named checks: parameter parsing and execution.

use projlab::apostol::{apostol_phi, check_beta_bound, check_composition_bounds, check_modulus_chain, omega, Variant};
use projlab::classes::{closure_report, d_radius_interval, halperin_constant, wprime_defect, HalperinEstimate};
use projlab::dynamics::{check_decay_bound, check_range_formula, ergodic_projection, iterate, ANGLE_TOL};
use projlab::linalg::{induced_norm, intersect_subspaces, projector_onto, DEFAULT_RANK_TOL};
use projlab::spaces::{beta_modulus_with, default_t_grid, delta_modulus_with, hermitian_defect, is_orthoprojection};
use projlab::spectral::{check_amplitude_omega, spectral_report, Amplitude, DEFAULT_BAND};
use projlab::{ComplexMatrix, Exponent, SamplingConfig, SemigroupExpr, SpaceDescriptor, Verdict};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::{CheckSpec, RunConfig};
use crate::CliError;

pub const CHECK_NAMES: &[&str] = &[
    "orthoprojection",
    "hermitian-defect",
    "iterate",
    "range-formula",
    "decay-bound",
    "modulus-chain",
    "composition-bounds",
    "beta-bound",
    "amplitude-omega",
    "closure",
    "halperin",
    "d-radius",
    "wprime",
    "spectral",
    "omega",
    "phi",
    "delta-modulus",
    "beta-modulus",
];

/// Distance below which a power limit counts as the expected projection.
const LIMIT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    /// 0-based index into `expressions`.
    Expr(usize),
    /// 1-based generator index.
    Generator(usize),
}

impl Target {
    fn label(self) -> String {
        match self {
            Target::Expr(i) => format!("expr[{i}]"),
            Target::Generator(k) => format!("P{k}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Expect {
    pub min: Option<f64>,
    pub max: Option<f64>,
}

impl Expect {
    fn verdict(self, value: f64) -> Verdict {
        let lo = self.min.is_none_or(|m| value >= m);
        let hi = self.max.is_none_or(|m| value <= m);
        Verdict::from_bool(lo && hi)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Plan {
    Orthoprojection { targets: Vec<Target> },
    HermitianDefect { target: Target, hermitian: bool, tol: f64 },
    Iterate { target: Target, n_max: usize, tol: f64, converge: bool },
    RangeFormula { expr: usize, tol: f64 },
    DecayBound { target: Target, n_max: usize, with_omega: bool },
    ModulusChain { target: Target, epsilon: f64 },
    CompositionBounds { targets: Vec<Target>, weights: Vec<f64>, epsilon: f64 },
    BetaBound { target: Target, epsilon: f64 },
    AmplitudeOmega { target: Target },
    Closure { a: Target, b: Target, alpha: f64 },
    Halperin { target: Target, expect: Expect },
    DRadius { target: Target, contains: Option<f64> },
    WPrime { target: Target, expect: Expect },
    Spectral { target: Target, band: f64, primitive: Option<bool>, amplitude: Option<f64> },
    Omega { target: Target, expect: Expect },
    Phi { target: Target, epsilon: f64, variant: Variant, expect: Expect },
    DeltaModulus { epsilon: f64, expect: Expect },
    BetaModulus { epsilon: f64, expect: Expect },
}

/// A check ready to run: its plan and sampling configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct PlannedCheck {
    pub name: String,
    pub plan: Plan,
    pub cfg: SamplingConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub instance: String,
    pub verdict: Verdict,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub slack: Option<f64>,
    pub seed: u64,
    pub details: Value,
    /// Extra files as (extension, contents), e.g. the CSV of an iteration.
    #[serde(skip)]
    pub attachments: Vec<(String, String)>,
}

struct Params<'a> {
    check: &'a str,
    map: &'a Map<String, Value>,
    config: &'a RunConfig,
}

impl Params<'_> {
    fn err(&self, msg: impl std::fmt::Display) -> CliError {
        CliError::Config(format!("check {:?}: {msg}", self.check))
    }

    fn f64_or(&self, key: &str, default: f64) -> Result<f64, CliError> {
        match self.map.get(key) {
            None => Ok(default),
            Some(v) => v.as_f64().ok_or_else(|| self.err(format!("{key} must be a number"))),
        }
    }

    fn opt_f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.map.get(key).map(|v| v.as_f64().ok_or_else(|| self.err(format!("{key} must be a number")))).transpose()
    }

    fn usize_or(&self, key: &str, default: usize) -> Result<usize, CliError> {
        match self.map.get(key) {
            None => Ok(default),
            Some(v) => v
                .as_u64()
                .map(|n| n as usize)
                .ok_or_else(|| self.err(format!("{key} must be a nonnegative integer"))),
        }
    }

    fn str_or<'s>(&'s self, key: &str, default: &'s str) -> Result<&'s str, CliError> {
        match self.map.get(key) {
            None => Ok(default),
            Some(v) => v.as_str().ok_or_else(|| self.err(format!("{key} must be a string"))),
        }
    }

    fn expect(&self) -> Result<Expect, CliError> {
        Ok(Expect { min: self.opt_f64("expect_min")?, max: self.opt_f64("expect_max")? })
    }

    fn expr_index(&self, i: usize) -> Result<Target, CliError> {
        if i >= self.config.expressions.len() {
            return Err(self.err(format!("expression index {i} out of range")));
        }
        Ok(Target::Expr(i))
    }

    fn generator_index(&self, k: usize) -> Result<Target, CliError> {
        if k == 0 || k > self.config.generators.len() {
            return Err(self.err(format!("generator index {k} outside 1..={}", self.config.generators.len())));
        }
        Ok(Target::Generator(k))
    }

    fn index_list(&self, key: &str) -> Result<Option<Vec<usize>>, CliError> {
        let Some(v) = self.map.get(key) else { return Ok(None) };
        let list = v.as_array().ok_or_else(|| self.err(format!("{key} must be a list")))?;
        list.iter()
            .map(|x| x.as_u64().map(|n| n as usize).ok_or_else(|| self.err(format!("{key} must hold integers"))))
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }

    /// `expr` (0-based) or `generator` (1-based); defaults to the first
    /// expression, then the first generator.
    fn target(&self) -> Result<Target, CliError> {
        if self.map.contains_key("expr") {
            return self.expr_index(self.usize_or("expr", 0)?);
        }
        if self.map.contains_key("generator") {
            return self.generator_index(self.usize_or("generator", 0)?);
        }
        if !self.config.expressions.is_empty() {
            Ok(Target::Expr(0))
        } else if !self.config.generators.is_empty() {
            Ok(Target::Generator(1))
        } else {
            Err(self.err("no operator to check"))
        }
    }

    /// `generators` (1-based) or `exprs` (0-based) lists.
    fn targets(&self) -> Result<Option<Vec<Target>>, CliError> {
        if let Some(list) = self.index_list("generators")? {
            return list.into_iter().map(|k| self.generator_index(k)).collect::<Result<_, _>>().map(Some);
        }
        if let Some(list) = self.index_list("exprs")? {
            return list.into_iter().map(|i| self.expr_index(i)).collect::<Result<_, _>>().map(Some);
        }
        Ok(None)
    }

    fn epsilon(&self, default: f64) -> Result<f64, CliError> {
        let e = self.f64_or("epsilon", default)?;
        if !(e > 0.0 && e <= 1.0) {
            return Err(self.err(format!("epsilon must lie in (0, 1], got {e}")));
        }
        Ok(e)
    }
}

fn plan(spec: &CheckSpec, config: &RunConfig) -> Result<Plan, CliError> {
    let p = Params { check: &spec.name, map: &spec.params, config };
    Ok(match spec.name.as_str() {
        "orthoprojection" => {
            let targets = match p.targets()? {
                Some(t) => t,
                None if p.map.contains_key("generator") || p.map.contains_key("expr") => vec![p.target()?],
                None => (1..=config.generators.len()).map(Target::Generator).collect(),
            };
            Plan::Orthoprojection { targets }
        }
        "hermitian-defect" => Plan::HermitianDefect {
            target: p.target()?,
            hermitian: match p.str_or("expect", "hermitian")? {
                "hermitian" => true,
                "not-hermitian" => false,
                other => return Err(p.err(format!("expect must be hermitian or not-hermitian, got {other:?}"))),
            },
            tol: p.f64_or("tol", 1e-8)?,
        },
        "iterate" => Plan::Iterate {
            target: p.target()?,
            n_max: p.usize_or("n_max", projlab::dynamics::DEFAULT_N_MAX)?.max(1),
            tol: p.f64_or("tol", 1e-12)?,
            converge: match p.str_or("expect", "converge")? {
                "converge" => true,
                "diverge" => false,
                other => return Err(p.err(format!("expect must be converge or diverge, got {other:?}"))),
            },
        },
        "range-formula" => {
            let Target::Expr(expr) = p.target()? else {
                return Err(p.err("range-formula needs an expression"));
            };
            Plan::RangeFormula { expr, tol: p.f64_or("tol", ANGLE_TOL)? }
        }
        "decay-bound" => Plan::DecayBound {
            target: p.target()?,
            n_max: p.usize_or("n_max", 1000)?.max(2),
            with_omega: p.map.get("omega").and_then(Value::as_bool).unwrap_or(false),
        },
        "modulus-chain" => Plan::ModulusChain { target: p.target()?, epsilon: p.epsilon(0.1)? },
        "composition-bounds" => {
            let targets = p.targets()?.ok_or_else(|| p.err("needs a generators or exprs list"))?;
            if targets.len() < 2 {
                return Err(p.err("needs at least two operators"));
            }
            let weights = match p.map.get("weights") {
                None => vec![1.0 / targets.len() as f64; targets.len()],
                Some(v) => serde_json::from_value::<Vec<f64>>(v.clone()).map_err(|e| p.err(e))?,
            };
            if weights.len() != targets.len() {
                return Err(p.err("weights and operators differ in length"));
            }
            Plan::CompositionBounds { targets, weights, epsilon: p.epsilon(0.05)? }
        }
        "beta-bound" => Plan::BetaBound { target: p.target()?, epsilon: p.epsilon(0.1)? },
        "amplitude-omega" => Plan::AmplitudeOmega { target: p.target()? },
        "closure" => {
            let targets = p.targets()?.ok_or_else(|| p.err("needs a generators or exprs list"))?;
            let [a, b] = targets[..] else {
                return Err(p.err("needs exactly two operators"));
            };
            let alpha = p.f64_or("alpha", 0.5)?;
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(p.err(format!("alpha must lie in (0, 1), got {alpha}")));
            }
            Plan::Closure { a, b, alpha }
        }
        "halperin" => Plan::Halperin { target: p.target()?, expect: p.expect()? },
        "d-radius" => Plan::DRadius { target: p.target()?, contains: p.opt_f64("contains")? },
        "wprime" => Plan::WPrime { target: p.target()?, expect: p.expect()? },
        "spectral" => Plan::Spectral {
            target: p.target()?,
            band: p.f64_or("band", DEFAULT_BAND)?,
            primitive: p.map.get("primitive").and_then(Value::as_bool),
            amplitude: p.opt_f64("amplitude")?,
        },
        "omega" => Plan::Omega { target: p.target()?, expect: p.expect()? },
        "phi" => Plan::Phi {
            target: p.target()?,
            epsilon: p.epsilon(0.1)?,
            variant: match p.str_or("variant", "phi")? {
                "phi" => Variant::Phi,
                "phi-tilde" => Variant::PhiTilde,
                other => return Err(p.err(format!("variant must be phi or phi-tilde, got {other:?}"))),
            },
            expect: p.expect()?,
        },
        "delta-modulus" => Plan::DeltaModulus { epsilon: p.f64_or("epsilon", 1.0)?, expect: p.expect()? },
        "beta-modulus" => Plan::BetaModulus { epsilon: p.f64_or("epsilon", 0.1)?, expect: p.expect()? },
        other => return Err(CliError::Config(format!("unknown check {other:?}; known: {}", CHECK_NAMES.join(", ")))),
    })
}

/// Parse every check; the i-th check samples from substream i + 1 of the
/// config seed, with optional `samples` and `slack` overrides.
pub fn plan_all(config: &RunConfig) -> Result<Vec<PlannedCheck>, CliError> {
    config
        .checks
        .iter()
        .enumerate()
        .map(|(i, spec)| {
            let p = Params { check: &spec.name, map: &spec.params, config };
            let mut cfg = SamplingConfig::with_seed(config.seed).substream(i as u64 + 1);
            cfg.samples = p.usize_or("samples", cfg.samples)?;
            cfg.slack = p.f64_or("slack", cfg.slack)?;
            Ok(PlannedCheck { name: spec.name.clone(), plan: plan(spec, config)?, cfg })
        })
        .collect()
}

pub struct Context<'a> {
    pub space: SpaceDescriptor,
    pub generators: &'a [ComplexMatrix],
    pub expressions: &'a [SemigroupExpr],
}

impl Context<'_> {
    fn operator(&self, t: Target) -> projlab::Result<ComplexMatrix> {
        match t {
            Target::Expr(i) => self.expressions[i].evaluate(self.generators),
            Target::Generator(k) => Ok(self.generators[k - 1].clone()),
        }
    }

    /// Orthoprojection onto ∩ Ran(P_k) over the generators of an
    /// expression (Euclidean spaces only).
    fn intersection_projection(&self, t: Target) -> projlab::Result<Option<ComplexMatrix>> {
        let Target::Expr(i) = t else { return Ok(None) };
        if self.space.p != Exponent::TWO {
            return Ok(None);
        }
        let complements: Vec<ComplexMatrix> =
            self.expressions[i].index_set().iter().map(|&k| self.generators[k - 1].complement()).collect();
        let basis = intersect_subspaces(self.space.dim, &complements, DEFAULT_RANK_TOL)?;
        if basis.is_empty() {
            return Ok(Some(ComplexMatrix::zeros(self.space.dim, self.space.dim)));
        }
        projector_onto(self.space.dim, &basis).map(Some)
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn amplitude_value(a: Amplitude) -> Option<f64> {
    a.value()
}

struct Outcome {
    verdict: Verdict,
    lhs: Option<f64>,
    rhs: Option<f64>,
    slack: Option<f64>,
    details: Value,
    attachments: Vec<(String, String)>,
}

impl Outcome {
    fn new(verdict: Verdict, lhs: Option<f64>, rhs: Option<f64>, slack: Option<f64>, details: Value) -> Self {
        Outcome { verdict, lhs, rhs, slack, details, attachments: Vec::new() }
    }

    fn estimate(value: f64, expect: Expect, details: Value) -> Self {
        let rhs = expect.max.or(expect.min);
        Outcome::new(expect.verdict(value), Some(value), rhs, None, details)
    }
}

fn instance_label(plan: &Plan) -> String {
    let list = |ts: &[Target]| ts.iter().map(|t| t.label()).collect::<Vec<_>>().join(",");
    match plan {
        Plan::Orthoprojection { targets } => list(targets),
        Plan::CompositionBounds { targets, .. } => list(targets),
        Plan::Closure { a, b, .. } => list(&[*a, *b]),
        Plan::RangeFormula { expr, .. } => Target::Expr(*expr).label(),
        Plan::DeltaModulus { epsilon, .. } | Plan::BetaModulus { epsilon, .. } => format!("epsilon={epsilon}"),
        Plan::HermitianDefect { target, .. }
        | Plan::Iterate { target, .. }
        | Plan::DecayBound { target, .. }
        | Plan::ModulusChain { target, .. }
        | Plan::BetaBound { target, .. }
        | Plan::AmplitudeOmega { target }
        | Plan::Halperin { target, .. }
        | Plan::DRadius { target, .. }
        | Plan::WPrime { target, .. }
        | Plan::Spectral { target, .. }
        | Plan::Omega { target, .. }
        | Plan::Phi { target, .. } => target.label(),
    }
}

/// Run one planned check. Numerical errors (failed preconditions, no
/// convergence) become a failing result carrying the message.
pub fn execute(check: &PlannedCheck, ctx: &Context) -> CheckResult {
    let outcome = run_plan(&check.plan, &check.cfg, ctx).unwrap_or_else(|e| {
        Outcome::new(Verdict::Fail, None, None, None, json!({ "error": e.to_string() }))
    });
    CheckResult {
        check: check.name.clone(),
        instance: instance_label(&check.plan),
        verdict: outcome.verdict,
        lhs: outcome.lhs,
        rhs: outcome.rhs,
        slack: outcome.slack,
        seed: check.cfg.seed,
        details: outcome.details,
        attachments: outcome.attachments,
    }
}

fn run_plan(plan: &Plan, cfg: &SamplingConfig, ctx: &Context) -> projlab::Result<Outcome> {
    let space = &ctx.space;
    Ok(match plan {
        Plan::Orthoprojection { targets } => {
            let mut verdict = Verdict::NotApplicable;
            let mut reports = Vec::new();
            let mut worst: f64 = 0.0;
            for &t in targets {
                let r = is_orthoprojection(&ctx.operator(t)?, space)?;
                verdict = verdict.and(Verdict::from_bool(r.is_orthoprojection));
                worst = worst.max(r.norm.value);
                reports.push(json!({ "operator": t.label(), "report": to_value(&r) }));
            }
            Outcome::new(verdict, Some(worst), Some(1.0), None, json!({ "operators": reports }))
        }
        Plan::HermitianDefect { target, hermitian, tol } => {
            let d = hermitian_defect(&ctx.operator(*target)?, space, &default_t_grid())?;
            let ok = (d <= *tol) == *hermitian;
            Outcome::new(Verdict::from_bool(ok), Some(d), Some(*tol), None, json!({ "defect": d, "expect_hermitian": hermitian }))
        }
        Plan::Iterate { target, n_max, tol, converge } => {
            let t = ctx.operator(*target)?;
            let rep = iterate(&t, space, *n_max, *tol)?;
            let ergodic = ergodic_projection(&t, DEFAULT_RANK_TOL).ok();
            let intersection = ctx.intersection_projection(*target)?;
            let dist = |m: &Option<ComplexMatrix>| -> Option<f64> {
                match (&rep.limit, m) {
                    (Some(l), Some(e)) => Some(induced_norm(&(l - e), space.p)),
                    _ => None,
                }
            };
            let (d_erg, d_int) = (dist(&ergodic), dist(&intersection));
            let (verdict, lhs, rhs) = if *converge {
                let worst = d_erg.into_iter().chain(d_int).fold(0.0, f64::max);
                (Verdict::from_bool(rep.converged && ergodic.is_some() && worst <= LIMIT_TOL), Some(worst), Some(LIMIT_TOL))
            } else {
                (Verdict::from_bool(!rep.converged), rep.diffs.last().copied(), None)
            };
            let head: Vec<f64> = rep.diffs.iter().take(64).copied().collect();
            let details = json!({
                "converged": rep.converged,
                "reason": rep.reason,
                "n_stop": rep.n_stop,
                "norm_kind": to_value(&rep.norm_kind),
                "diffs_head": head,
                "diff_last": rep.diffs.last(),
                "limit": to_value(&rep.limit),
                "limit_residual": rep.limit_residual,
                "limit_idempotence": rep.limit_idempotence,
                "limit_norm": rep.limit_norm,
                "ergodic_projection": to_value(&ergodic),
                "distance_to_ergodic": d_erg,
                "intersection_projection": to_value(&intersection),
                "distance_to_intersection": d_int,
                "cesaro_limit": to_value(&rep.cesaro_limit),
                "audit_drift": rep.audit_drift,
                "decay_bound_check": to_value(&rep.decay_bound_check),
            });
            let mut out = Outcome::new(verdict, lhs, rhs, None, details);
            out.attachments.push(("csv".into(), rep.csv()));
            out
        }
        Plan::RangeFormula { expr, tol } => {
            let chk = check_range_formula(&ctx.expressions[*expr], ctx.generators, space, *tol, cfg)?;
            let max_angle = chk.angles.iter().copied().fold(0.0, f64::max);
            Outcome::new(chk.verdict, Some(max_angle), Some(*tol), None, to_value(&chk))
        }
        Plan::DecayBound { target, n_max, with_omega } => {
            let chk = check_decay_bound(&ctx.operator(*target)?, space, *n_max, with_omega.then_some(cfg))?;
            Outcome::new(chk.verdict, Some(chk.tail_max), chk.bound, Some(1e-6), to_value(&chk))
        }
        Plan::ModulusChain { target, epsilon } => {
            let chk = check_modulus_chain(&ctx.operator(*target)?, space, *epsilon, cfg)?;
            Outcome::new(chk.verdict, Some(chk.phi), Some(chk.complement_norm), None, to_value(&chk))
        }
        Plan::CompositionBounds { targets, weights, epsilon } => {
            let ops = targets.iter().map(|&t| ctx.operator(t)).collect::<projlab::Result<Vec<_>>>()?;
            let chk = check_composition_bounds(&ops, weights, space, *epsilon, cfg)?;
            let margin = |b: &projlab::apostol::BoundCheck| b.rhs + b.slack - b.lhs;
            let (lhs, rhs) = if margin(&chk.product) <= margin(&chk.convex) {
                (chk.product.lhs, chk.product.rhs)
            } else {
                (chk.convex.lhs, chk.convex.rhs)
            };
            Outcome::new(chk.verdict, Some(lhs), Some(rhs), Some(cfg.slack), to_value(&chk))
        }
        Plan::BetaBound { target, epsilon } => {
            let chk = check_beta_bound(&ctx.operator(*target)?, space, *epsilon, cfg)?;
            Outcome::new(chk.verdict, Some(chk.lhs), Some(chk.rhs), Some(chk.slack), to_value(&chk))
        }
        Plan::AmplitudeOmega { target } => {
            let chk = check_amplitude_omega(&ctx.operator(*target)?, space, cfg)?;
            Outcome::new(chk.verdict, amplitude_value(chk.amplitude), Some(chk.omega), Some(chk.slack), to_value(&chk))
        }
        Plan::Closure { a, b, alpha } => {
            let rep = closure_report(&ctx.operator(*a)?, &ctx.operator(*b)?, *alpha, space, cfg)?;
            Outcome::new(rep.verdict, rep.halperin.k_product, rep.halperin.rhs, Some(cfg.slack), to_value(&rep))
        }
        Plan::Halperin { target, expect } => {
            let est = halperin_constant(&ctx.operator(*target)?, space, cfg)?;
            match est {
                HalperinEstimate::Bounded { value, .. } => Outcome::estimate(value, *expect, to_value(&est)),
                HalperinEstimate::UnboundedEvidence { .. } => {
                    let verdict = if expect.max.is_some() { Verdict::Fail } else { Verdict::Pass };
                    Outcome::new(verdict, None, expect.max, None, to_value(&est))
                }
            }
        }
        Plan::DRadius { target, contains } => {
            let r = d_radius_interval(&ctx.operator(*target)?, space)?;
            let verdict = match contains {
                Some(x) => Verdict::from_bool(r.contains(*x)),
                None => Verdict::Pass,
            };
            let hi = r.interval.map(|i| i.1);
            Outcome::new(verdict, hi, *contains, None, to_value(&r))
        }
        Plan::WPrime { target, expect } => {
            let d = wprime_defect(&ctx.operator(*target)?, space, cfg)?;
            Outcome::estimate(d.value, *expect, to_value(&d))
        }
        Plan::Spectral { target, band, primitive, amplitude } => {
            let rep = spectral_report(&ctx.operator(*target)?, *band)?;
            let a = amplitude_value(rep.amplitude);
            let mut ok = primitive.is_none_or(|p| p == rep.primitive);
            if let Some(want) = amplitude {
                ok &= a.is_some_and(|a| (a - want).abs() <= 1e-9);
            }
            Outcome::new(Verdict::from_bool(ok), a, *amplitude, None, to_value(&rep))
        }
        Plan::Omega { target, expect } => {
            let est = omega(&ctx.operator(*target)?, space, cfg)?;
            Outcome::estimate(est.extrapolated, *expect, to_value(&est))
        }
        Plan::Phi { target, epsilon, variant, expect } => {
            let est = apostol_phi(&ctx.operator(*target)?, space, *epsilon, *variant, cfg)?;
            Outcome::estimate(est.value, *expect, to_value(&est))
        }
        Plan::DeltaModulus { epsilon, expect } => {
            let est = delta_modulus_with(space, *epsilon, cfg)?;
            Outcome::estimate(est.value, *expect, to_value(&est))
        }
        Plan::BetaModulus { epsilon, expect } => {
            let est = beta_modulus_with(space, *epsilon, cfg)?;
            Outcome::estimate(est.value, *expect, to_value(&est))
        }
    })
}
