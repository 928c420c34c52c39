//! Numerical checks of the integral identities and estimates satisfied by
//! best balls of radial functions.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::averages::{
    ball_average, gradient_axial_component, gradient_radial_moment, sphere_average,
    weighted_gradient_average, GradientWeight,
};
use crate::best_ball::{BestBallResult, SearchConfig};
use crate::error::{Error, Result};
use crate::geometry::{AxisBall, ContactKind};
use crate::maximal::maximal_profile;
use crate::params::AmbientParams;
use crate::profile::RadialProfile;
use crate::quadrature::QuadratureConfig;

/// Tolerance of identities that only involve quadrature.
pub const QUADRATURE_TOL: f64 = 1e-6;
/// Tolerance of identities that hold at best balls only.
pub const BEST_BALL_TOL: f64 = 1e-3;
/// Relative slack of the inequality checks.
pub const INEQUALITY_SLACK: f64 = 1e-6;
/// Near-zero pairs are compared with `NEAR_ZERO * max F`, in value units.
pub const NEAR_ZERO: f64 = 1e-9;
/// Left-hand side below which the key-lemma check is vacuous.
pub const KEY_LEMMA_LHS_FLOOR: f64 = 1e-8;

const REL_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
    Informational,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "FAIL",
            Verdict::NotApplicable => "n/a",
            Verdict::Informational => "info",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub name: String,
    pub inputs: String,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub fn relative_residual(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(REL_FLOOR)
}

impl IdentityReport {
    fn build(name: &str, inputs: String, lhs: f64, rhs: f64, tolerance: f64, verdict: Verdict) -> Self {
        Self {
            name: name.to_string(),
            inputs,
            lhs,
            rhs,
            abs_residual: (lhs - rhs).abs(),
            rel_residual: relative_residual(lhs, rhs),
            tolerance,
            verdict,
            passed: verdict != Verdict::Fail,
            ratio: None,
            note: None,
        }
    }

    /// `lhs = rhs` up to `tolerance` relative, or `abs_floor` absolute.
    pub fn equality(name: &str, inputs: String, lhs: f64, rhs: f64, tolerance: f64, abs_floor: f64) -> Self {
        let ok = relative_residual(lhs, rhs) <= tolerance || (lhs - rhs).abs() <= abs_floor;
        Self::build(name, inputs, lhs, rhs, tolerance, verdict(ok))
    }

    /// `lhs <= rhs` up to `slack` relative to `|rhs|`, or `abs_floor`.
    pub fn upper_bound(name: &str, inputs: String, lhs: f64, rhs: f64, slack: f64, abs_floor: f64) -> Self {
        let ok = lhs <= rhs + slack * rhs.abs() + abs_floor;
        let mut r = Self::build(name, inputs, lhs, rhs, slack, verdict(ok));
        r.abs_residual = (lhs - rhs).max(0.0);
        r.rel_residual = r.abs_residual / lhs.abs().max(rhs.abs()).max(REL_FLOOR);
        r
    }

    pub fn not_applicable(name: &str, inputs: String, reason: &str) -> Self {
        let mut r = Self::build(name, inputs, f64::NAN, f64::NAN, 0.0, Verdict::NotApplicable);
        r.abs_residual = 0.0;
        r.rel_residual = 0.0;
        r.note = Some(reason.to_string());
        r
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    fn informational(mut self) -> Self {
        self.verdict = Verdict::Informational;
        self.passed = true;
        self
    }
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn ball_inputs(ball: &AxisBall) -> String {
    format!("d={:.6e} r={:.6e}", ball.d, ball.r)
}

fn result_inputs(res: &BestBallResult) -> String {
    format!(
        "s={:.6e} d={:.6e} r={:.6e} {}",
        res.s,
        res.ball.d,
        res.ball.r,
        res.contact.kind.as_str()
    )
}

/// `d ⨍_B Df·e - ⨍_B Df·y = n (⨍_B f - ⨍_∂B f)` for any ball.
pub fn check_divergence(
    profile: &RadialProfile,
    ball: &AxisBall,
    params: &AmbientParams,
    qcfg: &QuadratureConfig,
) -> Result<IdentityReport> {
    let gac = gradient_axial_component(profile, ball, params, qcfg)?;
    let grm = gradient_radial_moment(profile, ball, params, qcfg)?;
    let avg = ball_average(profile, ball, params, qcfg)?;
    let sph = sphere_average(profile, ball, params, qcfg)?;
    Ok(IdentityReport::equality(
        "divergence",
        ball_inputs(ball),
        ball.d * gac - grm,
        params.dim() * (avg - sph),
        QUADRATURE_TOL,
        NEAR_ZERO * profile.max_value(),
    ))
}

/// The result with its radius scaled by `factor`, contact type kept.
pub fn perturb_radius(result: &BestBallResult, factor: f64) -> BestBallResult {
    let r = result.ball.r * factor;
    let d = match result.contact.kind {
        ContactKind::Interior => result.ball.d,
        ContactKind::BoundaryInner => (result.s - r).abs(),
        ContactKind::BoundaryOuter => result.s + r,
    };
    let mut out = *result;
    out.ball = AxisBall { d, r };
    out.value = f64::NAN;
    out
}

/// `⨍_B f = -(1/beta) ⨍_B Df·(y - x)` at a best ball.
pub fn check_stationarity(
    profile: &RadialProfile,
    result: &BestBallResult,
    params: &AmbientParams,
    qcfg: &QuadratureConfig,
) -> Result<IdentityReport> {
    let (s, ball) = (result.s, &result.ball);
    let gac = gradient_axial_component(profile, ball, params, qcfg)?;
    let grm = gradient_radial_moment(profile, ball, params, qcfg)?;
    let avg = ball_average(profile, ball, params, qcfg)?;
    let rhs = -(grm - s * gac) / params.beta;
    let report = IdentityReport::equality(
        "stationarity",
        result_inputs(result),
        avg,
        rhs,
        BEST_BALL_TOL,
        NEAR_ZERO * profile.max_value(),
    );
    Ok(if s == 0.0 {
        report.informational().with_note("evaluation point at the origin")
    } else {
        report
    })
}

/// Similarity maps `L_h(y) = y + h (lambda (y - x) + mu e)`. They keep
/// axis balls axis balls: `d -> d + h (lambda (d - s) + mu)`,
/// `r -> (1 + h lambda) r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineFamily {
    pub lambda: f64,
    pub mu: f64,
}

impl AffineFamily {
    /// Dilation about the evaluation point.
    pub fn scaling() -> Self {
        Self { lambda: 1.0, mu: 0.0 }
    }

    fn image(&self, s: f64, ball: &AxisBall, h: f64) -> (f64, f64) {
        (
            ball.d + h * (self.lambda * (ball.d - s) + self.mu),
            (1.0 + h * self.lambda) * ball.r,
        )
    }
}

const AFFINE_STEPS: [f64; 3] = [1e-3, 1e-4, 1e-5];

/// Compares a Richardson-extrapolated finite difference of
/// `h -> r_h^beta ⨍_{L_h B} f` at `h = 0` with
/// `r^beta [lambda ⨍_B Df·(y - x) + mu ⨍_B Df·e + beta lambda ⨍_B f]`.
///
/// With `at_best` both must also vanish. Families that push the point out
/// of the image ball on one side get a one-sided difference.
pub fn check_affine_family(
    profile: &RadialProfile,
    s: f64,
    ball: &AxisBall,
    family: &AffineFamily,
    at_best: bool,
    params: &AmbientParams,
    qcfg: &QuadratureConfig,
) -> Result<IdentityReport> {
    let inputs = format!("s={s:.6e} {} lambda={} mu={}", ball_inputs(ball), family.lambda, family.mu);
    let tight = QuadratureConfig::tight();
    let value_at = |h: f64| -> Result<Option<f64>> {
        let (d, r) = family.image(s, ball, h);
        let slack = 1e-12 * (s + r);
        if r <= 0.0 || (d - s).abs() > r + slack {
            return Ok(None);
        }
        let b = AxisBall { d: d.abs(), r };
        Ok(Some(r.powf(params.beta) * ball_average(profile, &b, params, &tight)?))
    };
    let v0 = value_at(0.0)?.ok_or(Error::InfeasibleBall { s, d: ball.d, r: ball.r })?;

    // D(h) for each step, central when both sides are feasible.
    let mut diffs = Vec::with_capacity(AFFINE_STEPS.len());
    let mut kind = "central";
    for &h in &AFFINE_STEPS {
        let (p1, m1) = (value_at(h)?, value_at(-h)?);
        let d = match (p1, m1) {
            (Some(p), Some(m)) if kind == "central" => (p - m) / (2.0 * h),
            _ => {
                let (p2, m2) = (value_at(2.0 * h)?, value_at(-2.0 * h)?);
                match (p1, p2, m1, m2) {
                    (Some(a), Some(b), _, _) if kind != "backward" => {
                        kind = "forward";
                        (-3.0 * v0 + 4.0 * a - b) / (2.0 * h)
                    }
                    (_, _, Some(a), Some(b)) => {
                        kind = "backward";
                        (3.0 * v0 - 4.0 * a + b) / (2.0 * h)
                    }
                    _ => {
                        return Ok(IdentityReport::not_applicable(
                            "affine_family",
                            inputs,
                            "family leaves the admissible balls on both sides",
                        ))
                    }
                }
            }
        };
        diffs.push(d);
    }
    if kind != "central" {
        // a switch mid-sweep would mix schemes; redo everything one-sided
        diffs.clear();
        for &h in &AFFINE_STEPS {
            let sign = if kind == "forward" { 1.0 } else { -1.0 };
            let a = value_at(sign * h)?.expect("checked above");
            let b = value_at(sign * 2.0 * h)?.expect("checked above");
            diffs.push(sign * (-3.0 * v0 + 4.0 * a - b) / (2.0 * h));
        }
    }
    let rich = |coarse: f64, fine: f64| (100.0 * fine - coarse) / 99.0;
    let r1 = rich(diffs[0], diffs[1]);
    let r2 = rich(diffs[1], diffs[2]);
    let fd = r2;

    let gac = gradient_axial_component(profile, ball, params, qcfg)?;
    let grm = gradient_radial_moment(profile, ball, params, qcfg)?;
    let avg = ball_average(profile, ball, params, qcfg)?;
    let analytic = ball.r.powf(params.beta)
        * (family.lambda * (grm - s * gac) + family.mu * gac + params.beta * family.lambda * avg);

    let scale = params.beta * v0;
    let rel = (fd - analytic).abs() / fd.abs().max(analytic.abs()).max(scale).max(REL_FLOOR);
    let consistent = (r1 - r2).abs() <= BEST_BALL_TOL * fd.abs().max(analytic.abs()).max(scale);
    let vanish = !at_best || fd.abs().max(analytic.abs()) <= BEST_BALL_TOL * scale;
    let mut report = IdentityReport::build(
        "affine_family",
        inputs,
        fd,
        analytic,
        BEST_BALL_TOL,
        verdict(rel <= BEST_BALL_TOL && consistent && vanish),
    );
    report.rel_residual = rel;
    let mut notes = vec![format!("{kind} difference")];
    if !consistent {
        notes.push(format!("step sweep inconsistent ({r1:.3e} vs {r2:.3e})"));
    }
    if !vanish {
        notes.push("derivative does not vanish at the best ball".into());
    }
    Ok(report.with_note(notes.join("; ")))
}

fn boundary_parts(
    profile: &RadialProfile,
    ball: &AxisBall,
    params: &AmbientParams,
    qcfg: &QuadratureConfig,
) -> Result<(f64, f64)> {
    let gac = gradient_axial_component(profile, ball, params, qcfg)?;
    let avg = ball_average(profile, ball, params, qcfg)?;
    let sph = sphere_average(profile, ball, params, qcfg)?;
    let rhs = params.dim() / ball.r * ((1.0 - params.beta / params.dim()) * avg - sph);
    Ok((gac.abs(), rhs))
}

/// `|⨍_B Df| = (n/r) [(1 - beta/n) ⨍_B f - ⨍_∂B f]` at a best ball touching
/// the evaluation point.
pub fn check_boundary_formula(
    profile: &RadialProfile,
    result: &BestBallResult,
    params: &AmbientParams,
    qcfg: &QuadratureConfig,
) -> Result<IdentityReport> {
    const NAME: &str = "boundary_formula";
    if !result.contact.kind.is_boundary() || result.s == 0.0 {
        return Ok(IdentityReport::not_applicable(NAME, result_inputs(result), "interior contact"));
    }
    let (lhs, rhs) = boundary_parts(profile, &result.ball, params, qcfg)?;
    let report = IdentityReport::equality(
        NAME,
        result_inputs(result),
        lhs,
        rhs,
        BEST_BALL_TOL,
        NEAR_ZERO * profile.max_value() / result.ball.r,
    );
    Ok(if rhs < -NEAR_ZERO * profile.max_value() / result.ball.r {
        report.with_note("negative right-hand side")
    } else {
        report
    })
}

/// `|⨍_B Df| <= ⨍_B |Df| |y| / s` for a boundary best ball inside `B(0, s)`.
pub fn check_inner_bound(
    profile: &RadialProfile,
    result: &BestBallResult,
    params: &AmbientParams,
    qcfg: &QuadratureConfig,
) -> Result<IdentityReport> {
    const NAME: &str = "inner_bound";
    let (s, ball) = (result.s, &result.ball);
    let inputs = result_inputs(result);
    if !result.contact.kind.is_boundary() || s == 0.0 {
        return Ok(IdentityReport::not_applicable(NAME, inputs, "interior contact"));
    }
    if ball.d + ball.r > s * (1.0 + 1e-9) {
        return Ok(IdentityReport::not_applicable(NAME, inputs, "ball not inside B(0, s)"));
    }
    let lhs = gradient_axial_component(profile, ball, params, qcfg)?.abs();
    let rhs = weighted_gradient_average(profile, ball, params, &GradientWeight::RadialRatio { s }, qcfg)?;
    Ok(IdentityReport::upper_bound(
        NAME,
        inputs,
        lhs,
        rhs,
        INEQUALITY_SLACK,
        NEAR_ZERO * profile.max_value() / ball.r,
    ))
}

/// `|⨍_B Df| <= C ⨍_{2B} |Df| χ_E` with `E = {|f|_B / 2 <= f <= 2 |f|_B}`
/// for boundary best balls with `r <= s/4`. The constant is not explicit:
/// the check asserts a positive right-hand side and reports the ratio.
pub fn check_key_lemma(
    profile: &RadialProfile,
    result: &BestBallResult,
    params: &AmbientParams,
    qcfg: &QuadratureConfig,
) -> Result<IdentityReport> {
    const NAME: &str = "key_lemma";
    let (s, ball) = (result.s, &result.ball);
    let inputs = result_inputs(result);
    if !result.contact.kind.is_boundary() || s == 0.0 {
        return Ok(IdentityReport::not_applicable(NAME, inputs, "interior contact"));
    }
    if ball.r > 0.25 * s {
        return Ok(IdentityReport::not_applicable(NAME, inputs, "r > s/4"));
    }
    let lhs = gradient_axial_component(profile, ball, params, qcfg)?.abs();
    let avg = ball_average(profile, ball, params, qcfg)?;
    let doubled = AxisBall { d: ball.d, r: 2.0 * ball.r };
    let window = ((ball.d - 2.0 * ball.r).max(0.0), ball.d + 2.0 * ball.r);
    let level = profile.level_intervals(0.5 * avg, 2.0 * avg, window);
    let rhs = weighted_gradient_average(profile, &doubled, params, &GradientWeight::LevelSet(level), qcfg)?;
    let ok = lhs <= KEY_LEMMA_LHS_FLOOR || rhs > 0.0;
    let mut report = IdentityReport::build(NAME, inputs, lhs, rhs, KEY_LEMMA_LHS_FLOOR, verdict(ok));
    report.abs_residual = 0.0;
    report.rel_residual = 0.0;
    report.ratio = (rhs > 0.0).then(|| lhs / rhs);
    Ok(report)
}

/// `|f|_{B2} >= 2^-n (r1/r2)^beta |f|_{B1}` for best balls with
/// `B2 ⊂ B(z1, 2 r1)`.
pub fn check_ball_comparison(
    profile: &RadialProfile,
    a: &BestBallResult,
    b: &BestBallResult,
    params: &AmbientParams,
    qcfg: &QuadratureConfig,
) -> Result<IdentityReport> {
    const NAME: &str = "ball_comparison";
    let (b1, b2) = (&a.ball, &b.ball);
    let inputs = format!("s1={:.6e} s2={:.6e} {} | {}", a.s, b.s, ball_inputs(b1), ball_inputs(b2));
    if (b2.d - b1.d).abs() + b2.r > 2.0 * b1.r {
        return Ok(IdentityReport::not_applicable(NAME, inputs, "B2 not inside 2 B1"));
    }
    let avg1 = ball_average(profile, b1, params, qcfg)?;
    let avg2 = ball_average(profile, b2, params, qcfg)?;
    let bound = (b1.r / b2.r).powf(params.beta) * avg1 / 2f64.powi(params.n as i32);
    // lower bound: avg2 >= bound, i.e. -avg2 <= -bound
    let mut report = IdentityReport::upper_bound(
        NAME,
        inputs,
        -avg2,
        -bound,
        INEQUALITY_SLACK,
        NEAR_ZERO * profile.max_value(),
    );
    report.lhs = avg2;
    report.rhs = bound;
    report.ratio = (bound > 0.0).then(|| avg2 / bound);
    Ok(report)
}

/// Largest relative change between `(s, ratio)` samples of two sweeps at
/// the evaluation points they share. `None` without shared points.
pub fn ratio_drift(base: &[(f64, f64)], refined: &[(f64, f64)]) -> Option<f64> {
    base.iter()
        .filter_map(|&(s, a)| {
            refined
                .iter()
                .find(|&&(t, _)| (t - s).abs() <= 1e-12 * s.abs().max(1.0))
                .map(|&(_, b)| relative_residual(a, b))
        })
        .reduce(f64::max)
}

/// Ratio `(⨍_{[d-r, d+r]} F) / (⨍_{B(d, 2r)} f)` for balls in the annulus
/// `r <= d/2`. The ratio is bounded by a dimensional constant that is not
/// explicit; the report checks only that it is finite and stable under
/// tighter quadrature.
pub fn check_annulus_average(
    profile: &RadialProfile,
    ball: &AxisBall,
    params: &AmbientParams,
    qcfg: &QuadratureConfig,
) -> Result<IdentityReport> {
    const NAME: &str = "annulus_average";
    let inputs = ball_inputs(ball);
    if ball.r > 0.5 * ball.d {
        return Ok(IdentityReport::not_applicable(NAME, inputs, "r > d/2"));
    }
    let line = profile.integral(ball.d - ball.r, ball.d + ball.r) / (2.0 * ball.r);
    let doubled = AxisBall { d: ball.d, r: 2.0 * ball.r };
    let avg = ball_average(profile, &doubled, params, qcfg)?;
    let avg_tight = ball_average(profile, &doubled, params, &QuadratureConfig::tight())?;
    let ratio = line / avg;
    let ratio_tight = line / avg_tight;
    let finite = avg > 0.0 && ratio.is_finite() || line == 0.0;
    let stable = !(ratio.is_finite() && ratio_tight.is_finite())
        || relative_residual(ratio, ratio_tight) <= QUADRATURE_TOL;
    let mut report = IdentityReport::build(NAME, inputs, line, avg, QUADRATURE_TOL, verdict(finite && stable));
    report.abs_residual = 0.0;
    report.rel_residual = if ratio.is_finite() && ratio_tight.is_finite() {
        relative_residual(ratio, ratio_tight)
    } else {
        0.0
    };
    report.ratio = (avg > 0.0).then_some(ratio);
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    All,
    Divergence,
    Stationarity,
    Boundary,
    Affine,
    Inner,
    KeyLemma,
    Comparison,
    Annulus,
}

impl Suite {
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "all" => Suite::All,
            "divergence" => Suite::Divergence,
            "stationarity" => Suite::Stationarity,
            "boundary" => Suite::Boundary,
            "affine" => Suite::Affine,
            "inner" => Suite::Inner,
            "keylemma" => Suite::KeyLemma,
            "comparison" => Suite::Comparison,
            "annulus" => Suite::Annulus,
            other => return Err(Error::Input(format!("unknown suite {other:?}"))),
        })
    }

    fn includes(&self, other: Suite) -> bool {
        *self == Suite::All || *self == other
    }

    fn needs_sweep(&self) -> bool {
        !matches!(self, Suite::Divergence | Suite::Annulus)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictCounts {
    pub pass: usize,
    pub fail: usize,
    pub not_applicable: usize,
    pub informational: usize,
}

impl VerdictCounts {
    pub fn tally(reports: &[IdentityReport]) -> Self {
        let mut c = Self::default();
        for r in reports {
            match r.verdict {
                Verdict::Pass => c.pass += 1,
                Verdict::Fail => c.fail += 1,
                Verdict::NotApplicable => c.not_applicable += 1,
                Verdict::Informational => c.informational += 1,
            }
        }
        c
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub counts: VerdictCounts,
    pub reports: Vec<IdentityReport>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.counts.fail == 0
    }
}

/// Inputs of [`run_suite`] besides the profile.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random balls for the divergence and annulus checks.
    pub random_balls: usize,
    /// Radii of the best-ball sweep.
    pub grid: Vec<f64>,
    pub search: SearchConfig,
    pub quadrature: QuadratureConfig,
}

/// Seeded balls with `d in [0, 1.5 T]`, `r in [0.05 T, 1.5 T]`.
pub fn random_balls(t_sup: f64, count: usize, seed: u64) -> Vec<AxisBall> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| AxisBall {
            d: rng.random_range(0.0..1.5 * t_sup),
            r: rng.random_range(0.05 * t_sup..1.5 * t_sup),
        })
        .collect()
}

/// Seeded balls with `r <= d/2`.
pub fn random_annulus_balls(t_sup: f64, count: usize, seed: u64) -> Vec<AxisBall> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x05ee_da22_u64);
    (0..count)
        .map(|_| {
            let d = rng.random_range(0.05 * t_sup..1.2 * t_sup);
            AxisBall {
                d,
                r: d * rng.random_range(0.02..0.5),
            }
        })
        .collect()
}

/// Runs the requested checks: random balls for the pure identities, a
/// best-ball sweep over `cfg.grid` for the rest.
pub fn run_suite(
    profile: &RadialProfile,
    params: &AmbientParams,
    suite: Suite,
    cfg: &SuiteConfig,
) -> Result<SuiteReport> {
    let q = &cfg.quadrature;
    let t_sup = profile.support_radius();
    let mut reports = Vec::new();
    if suite.includes(Suite::Divergence) {
        for ball in random_balls(t_sup, cfg.random_balls, cfg.seed) {
            reports.push(check_divergence(profile, &ball, params, q)?);
        }
    }
    if suite.includes(Suite::Annulus) {
        for ball in random_annulus_balls(t_sup, cfg.random_balls, cfg.seed) {
            reports.push(check_annulus_average(profile, &ball, params, q)?);
        }
    }
    if suite.needs_sweep() {
        let mp = maximal_profile(profile, &cfg.grid, params, &cfg.search, q)?;
        let results: Vec<BestBallResult> = mp.points.iter().map(|p| p.result).collect();
        for res in results.iter().filter(|r| r.converged) {
            if suite.includes(Suite::Stationarity) {
                reports.push(check_stationarity(profile, res, params, q)?);
            }
            if suite.includes(Suite::Boundary) {
                reports.push(check_boundary_formula(profile, res, params, q)?);
            }
            if suite.includes(Suite::Affine) {
                reports.push(check_affine_family(
                    profile,
                    res.s,
                    &res.ball,
                    &AffineFamily::scaling(),
                    true,
                    params,
                    q,
                )?);
            }
            if suite.includes(Suite::Inner) {
                reports.push(check_inner_bound(profile, res, params, q)?);
            }
            if suite.includes(Suite::KeyLemma) {
                reports.push(check_key_lemma(profile, res, params, q)?);
            }
        }
        if suite.includes(Suite::Comparison) {
            for a in results.iter().filter(|r| r.converged) {
                for b in results.iter().filter(|r| r.converged) {
                    if a.s != b.s {
                        reports.push(check_ball_comparison(profile, a, b, params, q)?);
                    }
                }
            }
        }
    }
    Ok(SuiteReport {
        seed: cfg.seed,
        counts: VerdictCounts::tally(&reports),
        reports,
    })
}

/// Aligned text table, one report per line.
pub fn render_text(reports: &[IdentityReport]) -> String {
    let name_w = reports.iter().map(|r| r.name.len()).max().unwrap_or(4).max(4);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<name_w$}  {:<7}  {:>14}  {:>14}  {:>10}  {:>8}  {:>10}  inputs",
        "name", "verdict", "lhs", "rhs", "rel_resid", "tol", "ratio"
    );
    for r in reports {
        let ratio = r.ratio.map(|x| format!("{x:.4e}")).unwrap_or_else(|| "-".into());
        let _ = write!(
            out,
            "{:<name_w$}  {:<7}  {:>14.7e}  {:>14.7e}  {:>10.3e}  {:>8.1e}  {:>10}  {}",
            r.name,
            r.verdict.as_str(),
            r.lhs,
            r.rhs,
            r.rel_residual,
            r.tolerance,
            ratio,
            r.inputs
        );
        if let Some(note) = &r.note {
            let _ = write!(out, "  [{note}]");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::best_ball::search;
    use crate::profile::load_profile;
    use approx::assert_relative_eq;

    fn tent() -> RadialProfile {
        load_profile(&[(0.0, 1.0), (1.0, 0.0)]).unwrap()
    }

    #[test]
    fn divergence_tent_closed_form() {
        let params = AmbientParams::new(2, 0.5).unwrap();
        let rep = check_divergence(&tent(), &AxisBall::new(0.0, 1.0), &params, &QuadratureConfig::identity())
            .unwrap();
        assert_relative_eq!(rep.lhs, 2.0 / 3.0, max_relative = 1e-9);
        assert_relative_eq!(rep.rhs, 2.0 / 3.0, max_relative = 1e-9);
        assert!(rep.passed);
    }

    #[test]
    fn divergence_on_constant_region_is_zero() {
        let p = load_profile(&[(0.0, 2.0), (3.0, 2.0), (4.0, 0.0)]).unwrap();
        let params = AmbientParams::new(3, 1.0).unwrap();
        let rep = check_divergence(&p, &AxisBall::new(1.0, 0.5), &params, &QuadratureConfig::identity()).unwrap();
        assert!(rep.lhs.abs() < 1e-12 && rep.rhs.abs() < 1e-12);
        assert!(rep.passed);
    }

    #[test]
    fn stationarity_at_origin_is_informational() {
        let p = load_profile(&[(0.0, 1.0), (1.0, 1.0)]).unwrap();
        let params = AmbientParams::new(2, 0.5).unwrap();
        let q = QuadratureConfig::identity();
        let res = search(&p, 0.0, &params, &SearchConfig::default(), &q).unwrap();
        let rep = check_stationarity(&p, &res, &params, &q).unwrap();
        assert_eq!(rep.verdict, Verdict::Informational);
    }

    #[test]
    fn best_ball_checks_and_negative_controls() {
        let p = tent();
        let params = AmbientParams::new(2, 0.5).unwrap();
        let q = QuadratureConfig::identity();
        let res = search(&p, 1.5, &params, &SearchConfig::default(), &q).unwrap();
        assert!(res.contact.kind.is_boundary());
        assert!(check_stationarity(&p, &res, &params, &q).unwrap().passed);
        assert!(check_boundary_formula(&p, &res, &params, &q).unwrap().passed);
        let aff = check_affine_family(&p, res.s, &res.ball, &AffineFamily::scaling(), true, &params, &q).unwrap();
        assert!(aff.passed, "{aff:?}");

        let off = perturb_radius(&res, 1.05);
        assert!(!check_stationarity(&p, &off, &params, &q).unwrap().passed);
        assert!(!check_boundary_formula(&p, &off, &params, &q).unwrap().passed);
        let aff = check_affine_family(&p, off.s, &off.ball, &AffineFamily::scaling(), false, &params, &q).unwrap();
        assert!(aff.passed, "finite difference must still match the formula: {aff:?}");
        let aff = check_affine_family(&p, off.s, &off.ball, &AffineFamily::scaling(), true, &params, &q).unwrap();
        assert!(!aff.passed);
    }

    #[test]
    fn affine_constant_region_derivative_is_beta_value() {
        let p = load_profile(&[(0.0, 2.0), (3.0, 2.0), (4.0, 0.0)]).unwrap();
        let params = AmbientParams::new(2, 0.7).unwrap();
        let q = QuadratureConfig::identity();
        let ball = AxisBall::new(1.0, 0.5);
        let rep = check_affine_family(&p, 1.2, &ball, &AffineFamily::scaling(), false, &params, &q).unwrap();
        let value = 0.5f64.powf(0.7) * 2.0;
        assert_relative_eq!(rep.rhs, 0.7 * value, max_relative = 1e-12);
        assert!(rep.passed);
    }

    #[test]
    fn one_sided_family() {
        // translation towards the point from a ball touching it from outside
        let p = tent();
        let params = AmbientParams::new(2, 0.5).unwrap();
        let q = QuadratureConfig::identity();
        let ball = AxisBall::new(0.8, 0.3);
        let fam = AffineFamily { lambda: 0.0, mu: -1.0 };
        let rep = check_affine_family(&p, 0.5, &ball, &fam, false, &params, &q).unwrap();
        assert!(rep.note.as_deref().unwrap().contains("forward"), "{rep:?}");
        assert!(rep.passed, "{rep:?}");
    }

    #[test]
    fn ball_comparison_same_ball() {
        let p = tent();
        let params = AmbientParams::new(2, 0.5).unwrap();
        let q = QuadratureConfig::identity();
        let res = search(&p, 0.7, &params, &SearchConfig::default(), &q).unwrap();
        let rep = check_ball_comparison(&p, &res, &res, &params, &q).unwrap();
        assert!(rep.passed);
        assert_relative_eq!(rep.ratio.unwrap(), 4.0, max_relative = 1e-12);
    }

    #[test]
    fn annulus_ratio_on_constant_stretch_is_one() {
        let p = load_profile(&[(0.0, 1.0), (5.0, 1.0), (6.0, 0.0)]).unwrap();
        let params = AmbientParams::new(2, 0.5).unwrap();
        let rep =
            check_annulus_average(&p, &AxisBall::new(2.0, 0.5), &params, &QuadratureConfig::identity()).unwrap();
        assert_relative_eq!(rep.ratio.unwrap(), 1.0, max_relative = 1e-12);
        assert!(rep.passed);
        let na = check_annulus_average(&p, &AxisBall::new(2.0, 1.5), &params, &QuadratureConfig::identity())
            .unwrap();
        assert_eq!(na.verdict, Verdict::NotApplicable);
    }

    #[test]
    fn inner_bound_centered_ball() {
        let p = tent();
        let params = AmbientParams::new(2, 0.5).unwrap();
        let q = QuadratureConfig::identity();
        let mut res = search(&p, 1.5, &params, &SearchConfig::default(), &q).unwrap();
        res.ball = AxisBall { d: 0.0, r: 1.5 };
        res.contact.kind = ContactKind::BoundaryInner;
        let rep = check_inner_bound(&p, &res, &params, &q).unwrap();
        assert!(rep.lhs.abs() < 1e-12);
        assert!(rep.passed);
    }

    #[test]
    fn text_rendering_has_one_line_per_report() {
        let params = AmbientParams::new(2, 0.5).unwrap();
        let q = QuadratureConfig::identity();
        let reps: Vec<_> = random_balls(1.0, 5, 3)
            .iter()
            .map(|b| check_divergence(&tent(), b, &params, &q).unwrap())
            .collect();
        assert_eq!(render_text(&reps).lines().count(), 6);
    }
}
