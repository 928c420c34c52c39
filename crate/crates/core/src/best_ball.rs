//! Global search for the ball maximizing `r^beta |f|_B` among balls that
//! contain the evaluation point.

use std::cell::{Cell, RefCell};

use serde::{Deserialize, Serialize};

use crate::averages::{ball_average, gradient_axial_component, sphere_average};
use crate::error::{Error, Result};
use crate::geometry::{classify_contact, AxisBall, Contact, ContactKind};
use crate::optimize::{golden_max, nelder_mead_max, NelderMeadOptions};
use crate::params::AmbientParams;
use crate::profile::RadialProfile;
use crate::quadrature::QuadratureConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    #[serde(rename = "zero_derivative")]
    ZeroDerivative,
    E1,
    E2,
    E3,
}

impl Region {
    pub fn as_str(&self) -> &'static str {
        match self {
            Region::ZeroDerivative => "zero_derivative",
            Region::E1 => "E1",
            Region::E2 => "E2",
            Region::E3 => "E3",
        }
    }

    pub fn of(contact: &Contact) -> Self {
        if !contact.kind.is_boundary() {
            Region::ZeroDerivative
        } else if contact.c > 1.25 {
            Region::E1
        } else if contact.c < 0.75 {
            Region::E2
        } else {
            Region::E3
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    /// Coarse grid rows per decade of `r`.
    pub r_per_decade: usize,
    /// Coarse grid points in `d` per row.
    pub d_per_row: usize,
    /// Samples per decade along each boundary family.
    pub boundary_per_decade: usize,
    pub multistarts: usize,
    /// Relative stopping size of the local refinement.
    pub local_tol: f64,
    pub max_local_iter: usize,
    pub tie_tol: f64,
    /// `r_min` as a fraction of the support radius.
    pub r_min_fraction: f64,
    /// Relative distance to the sphere below which contact counts as boundary.
    pub contact_tol: f64,
    pub warm_start: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            r_per_decade: 24,
            d_per_row: 48,
            boundary_per_decade: 96,
            multistarts: 8,
            local_tol: 1e-9,
            max_local_iter: 600,
            tie_tol: 1e-9,
            r_min_fraction: 1e-4,
            contact_tol: 1e-7,
            warm_start: true,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let counts = [
            self.r_per_decade,
            self.d_per_row,
            self.boundary_per_decade,
            self.multistarts,
            self.max_local_iter,
        ];
        let ok = counts.iter().all(|&c| c > 0)
            && self.d_per_row >= 2
            && self.local_tol > 0.0
            && self.tie_tol > 0.0
            && self.contact_tol > 0.0
            && self.r_min_fraction > 0.0
            && self.r_min_fraction < 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!("invalid search config {self:?}")))
        }
    }

    fn contact_abs_tol(&self, s: f64, r: f64) -> f64 {
        self.contact_tol * (s + r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BestBallResult {
    pub s: f64,
    pub value: f64,
    pub ball: AxisBall,
    pub contact: Contact,
    pub region: Region,
    pub objective_evals: usize,
    pub converged: bool,
}

fn feasibility_slack(s: f64, ball: &AxisBall) -> f64 {
    1e-12 * (s + ball.r + ball.d).max(f64::MIN_POSITIVE)
}

/// `r^beta |f|_B` for a ball containing `s e`.
pub fn objective(
    profile: &RadialProfile,
    s: f64,
    ball: &AxisBall,
    params: &AmbientParams,
    qcfg: &QuadratureConfig,
) -> Result<f64> {
    if !(ball.r > 0.0 && ball.d >= 0.0) || !ball.contains_point(s, feasibility_slack(s, ball)) {
        return Err(Error::InfeasibleBall {
            s,
            d: ball.d,
            r: ball.r,
        });
    }
    Ok(ball.r.powf(params.beta) * ball_average(profile, ball, params, qcfg)?)
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    ball: AxisBall,
    value: f64,
    converged: bool,
}

#[derive(Debug, Clone, Copy)]
enum Side {
    Inner,
    Outer,
}

/// Objective wrapper that counts evaluations and parks the first error.
struct Evaluator<'a> {
    profile: &'a RadialProfile,
    params: &'a AmbientParams,
    s: f64,
    coarse: QuadratureConfig,
    fine: QuadratureConfig,
    evals: Cell<usize>,
    error: RefCell<Option<Error>>,
}

impl Evaluator<'_> {
    fn eval(&self, d: f64, r: f64, cfg: &QuadratureConfig) -> f64 {
        self.evals.set(self.evals.get() + 1);
        match objective(self.profile, self.s, &AxisBall { d, r }, self.params, cfg) {
            Ok(v) => v,
            Err(e) => {
                self.error.borrow_mut().get_or_insert(e);
                f64::NEG_INFINITY
            }
        }
    }

    fn take_error(&self) -> Result<()> {
        match self.error.borrow_mut().take() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

/// Search box in `(d, ln r)`.
#[derive(Debug, Clone, Copy)]
struct Box2 {
    s: f64,
    ln_r_min: f64,
    ln_r_max: f64,
}

impl Box2 {
    fn project(&self, x: [f64; 2]) -> [f64; 2] {
        let r_max = self.ln_r_max.exp();
        let d = x[0].clamp(0.0, self.s + r_max);
        let mut lr = x[1].clamp(self.ln_r_min, self.ln_r_max);
        let gap = (d - self.s).abs();
        if gap > lr.exp() {
            lr = gap.ln().clamp(self.ln_r_min, self.ln_r_max);
        }
        [d, lr]
    }

    fn ball(&self, x: [f64; 2]) -> AxisBall {
        let r = x[1].exp();
        // snap onto the sphere when the projection put us there
        let d = if (x[0] - self.s).abs() > r {
            if x[0] > self.s {
                self.s + r
            } else {
                self.s - r
            }
        } else {
            x[0]
        };
        AxisBall { d, r }
    }
}

fn log_grid(lo: f64, hi: f64, per_decade: usize, min_points: usize) -> Vec<f64> {
    if hi <= lo {
        return vec![lo];
    }
    let decades = (hi / lo).log10();
    let m = ((per_decade as f64 * decades).ceil() as usize + 1).max(min_points);
    let (a, b) = (lo.ln(), hi.ln());
    (0..m)
        .map(|i| {
            if i + 1 == m {
                hi
            } else {
                (a + (b - a) * i as f64 / (m - 1) as f64).exp()
            }
        })
        .collect()
}

/// Best ball for the evaluation point `s e`.
pub fn search(
    profile: &RadialProfile,
    s: f64,
    params: &AmbientParams,
    scfg: &SearchConfig,
    qcfg: &QuadratureConfig,
) -> Result<BestBallResult> {
    search_with_hints(profile, s, params, scfg, qcfg, &[])
}

/// [`search`] with extra local refinements started from `hints`.
///
/// Hints only add candidates; the global grid stage always runs.
pub fn search_with_hints(
    profile: &RadialProfile,
    s: f64,
    params: &AmbientParams,
    scfg: &SearchConfig,
    qcfg: &QuadratureConfig,
    hints: &[AxisBall],
) -> Result<BestBallResult> {
    scfg.validate()?;
    if !(s >= 0.0 && s.is_finite()) {
        return Err(Error::InvalidParams(format!("evaluation radius {s} must be >= 0")));
    }
    if profile.max_value() <= 0.0 {
        return Err(Error::InvalidProfile("profile is identically zero".into()));
    }
    let t_sup = profile.support_radius();
    let r_min = scfg.r_min_fraction * t_sup;
    let r_max = s + t_sup;
    let bx = Box2 {
        s,
        ln_r_min: r_min.ln(),
        ln_r_max: r_max.ln(),
    };
    let ev = Evaluator {
        profile,
        params,
        s,
        coarse: QuadratureConfig {
            rel_tol: qcfg.rel_tol.max(1e-6),
            ..*qcfg
        },
        fine: *qcfg,
        evals: Cell::new(0),
        error: RefCell::new(None),
    };

    let mut candidates: Vec<Candidate> = Vec::new();

    // Coarse grid: log rows in r, linear d across the feasible segment.
    let rows = log_grid(r_min, r_max, scfg.r_per_decade, 2);
    let m = scfg.d_per_row;
    let mut grid = vec![f64::NEG_INFINITY; rows.len() * m];
    for (i, &r) in rows.iter().enumerate() {
        let (lo, hi) = ((s - r).max(0.0), s + r);
        for j in 0..m {
            let d = lo + (hi - lo) * j as f64 / (m - 1) as f64;
            grid[i * m + j] = ev.eval(d, r, &ev.coarse);
        }
    }
    ev.take_error()?;
    let d_of = |i: usize, j: usize| {
        let r = rows[i];
        let (lo, hi) = ((s - r).max(0.0), s + r);
        lo + (hi - lo) * j as f64 / (m - 1) as f64
    };

    let nm_opts = NelderMeadOptions {
        xtol: [scfg.local_tol * (s + t_sup), scfg.local_tol],
        max_iter: scfg.max_local_iter,
    };
    let row_step = if rows.len() > 1 {
        (rows[1] / rows[0]).ln()
    } else {
        std::f64::consts::LN_10 / scfg.r_per_decade as f64
    };
    let refine_nm = |start: [f64; 2], step: [f64; 2]| -> Candidate {
        let res = nelder_mead_max(
            |x| {
                let b = bx.ball(x);
                ev.eval(b.d, b.r, &ev.fine)
            },
            |x| bx.project(x),
            start,
            step,
            &nm_opts,
        );
        Candidate {
            ball: bx.ball(res.x),
            value: res.value,
            converged: res.converged,
        }
    };

    // Multistarts from the best separated grid cells.
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|&a, &b| grid[b].total_cmp(&grid[a]));
    let mut picked: Vec<(usize, usize)> = Vec::new();
    for &k in &order {
        if picked.len() >= scfg.multistarts {
            break;
        }
        let (i, j) = (k / m, k % m);
        if picked.iter().any(|&(pi, pj)| pi.abs_diff(i) <= 1 && pj.abs_diff(j) <= 1) {
            continue;
        }
        picked.push((i, j));
        let r = rows[i];
        let d_step = 2.0 * r / (m - 1) as f64;
        candidates.push(refine_nm([d_of(i, j), r.ln()], [d_step, row_step]));
    }
    ev.take_error()?;

    // Boundary families: the evaluation point on the sphere of the ball.
    let mut sides = vec![(Side::Outer, r_min, r_max)];
    if s > r_min {
        sides.push((Side::Inner, r_min, s));
    }
    let on_side = |side: Side, r: f64| match side {
        Side::Inner => AxisBall { d: (s - r).max(0.0), r },
        Side::Outer => AxisBall { d: s + r, r },
    };
    let refine_side = |side: Side, lo: f64, hi: f64| -> Candidate {
        let res = golden_max(
            |lr| {
                let b = on_side(side, lr.exp());
                ev.eval(b.d, b.r, &ev.fine)
            },
            lo.ln(),
            hi.ln(),
            scfg.local_tol,
            scfg.max_local_iter,
        );
        Candidate {
            ball: on_side(side, res.x.exp()),
            value: res.value,
            converged: res.converged,
        }
    };
    let per_side = scfg.multistarts.div_ceil(2).max(1);
    for &(side, lo, hi) in &sides {
        let rs = log_grid(lo, hi, scfg.boundary_per_decade, 8);
        let vals: Vec<f64> = rs
            .iter()
            .map(|&r| {
                let b = on_side(side, r);
                ev.eval(b.d, b.r, &ev.coarse)
            })
            .collect();
        ev.take_error()?;
        let mut peaks: Vec<usize> = (0..vals.len())
            .filter(|&k| {
                (k == 0 || vals[k] >= vals[k - 1]) && (k + 1 == vals.len() || vals[k] >= vals[k + 1])
            })
            .collect();
        peaks.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
        for &k in peaks.iter().take(per_side) {
            let a = rs[k.saturating_sub(1)];
            let b = rs[(k + 1).min(rs.len() - 1)];
            candidates.push(refine_side(side, a, b));
        }
    }
    ev.take_error()?;

    // Hints: local refinement in the interior and along the nearer side.
    for h in hints {
        if !(h.r > 0.0 && h.d >= 0.0 && h.r.is_finite() && h.d.is_finite()) {
            continue;
        }
        let x = bx.project([h.d, h.r.ln()]);
        let b = bx.ball(x);
        let step = [0.25 * 2.0 * b.r / (m - 1) as f64, 0.25 * row_step];
        candidates.push(refine_nm(x, step));
        let side = if b.d >= s { Side::Outer } else { Side::Inner };
        let hi_side = match side {
            Side::Inner => s,
            Side::Outer => r_max,
        };
        if hi_side > r_min {
            let lo = (b.r * (-row_step).exp()).clamp(r_min, hi_side);
            let hi = (b.r * row_step.exp()).clamp(r_min, hi_side);
            if hi > lo {
                candidates.push(refine_side(side, lo, hi));
            }
        }
    }
    ev.take_error()?;

    let mut best = select(&candidates, scfg.tie_tol)
        .ok_or_else(|| Error::Unconverged(vec![s]))?;
    let contact = classify_contact(&best.ball, s, scfg.contact_abs_tol(s, best.ball.r))?;
    let polished = if !contact.kind.is_boundary() {
        polish_interior(profile, best.ball, params)?
    } else if s > 0.0 {
        let side = if contact.kind == ContactKind::BoundaryOuter {
            Side::Outer
        } else {
            Side::Inner
        };
        polish_on_side(profile, s, side, best.ball.r, params)?.map(|r| on_side(side, r))
    } else {
        None
    };
    if let Some(ball) = polished {
        let value = ev.eval(ball.d, ball.r, &ev.fine);
        ev.take_error()?;
        let same = classify_contact(&ball, s, scfg.contact_abs_tol(s, ball.r))
            .is_ok_and(|c| c.kind == contact.kind);
        if same && value >= best.value - scfg.tie_tol * best.value.abs() {
            best = Candidate { ball, value, ..best };
        }
    }
    let contact = classify_contact(&best.ball, s, scfg.contact_abs_tol(s, best.ball.r))?;
    let region = if s == 0.0 {
        Region::ZeroDerivative
    } else {
        Region::of(&contact)
    };
    Ok(BestBallResult {
        s,
        value: best.value,
        ball: best.ball,
        contact,
        region,
        objective_evals: ev.evals.get(),
        converged: best.converged && best.value.is_finite(),
    })
}

/// `d/dr [r^beta ⨍_B f] / r^beta` along a boundary family, from
/// `∂_d ⨍_B f = ⨍_B Df·e` and `∂_r ⨍_B f = (n/r)(⨍_∂B f - ⨍_B f)`.
fn side_slope(profile: &RadialProfile, s: f64, side: Side, r: f64, params: &AmbientParams) -> Result<f64> {
    let q = QuadratureConfig::tight();
    let (ball, sign) = match side {
        Side::Inner => (AxisBall { d: s - r, r }, -1.0),
        Side::Outer => (AxisBall { d: s + r, r }, 1.0),
    };
    let avg = ball_average(profile, &ball, params, &q)?;
    let sph = sphere_average(profile, &ball, params, &q)?;
    let gac = gradient_axial_component(profile, &ball, params, &q)?;
    Ok((params.beta * avg + params.dim() * (sph - avg)) / r + sign * gac)
}

/// Relative half-width of the bracket searched around a boundary optimum.
const POLISH_BRACKET: f64 = 1e-6;

/// Root of the first-order condition along a boundary family near `r0`,
/// by Illinois regula falsi. `None` when no sign change brackets `r0`.
fn polish_on_side(
    profile: &RadialProfile,
    s: f64,
    side: Side,
    r0: f64,
    params: &AmbientParams,
) -> Result<Option<f64>> {
    let (a, b) = (r0 * (1.0 - POLISH_BRACKET), r0 * (1.0 + POLISH_BRACKET));
    if matches!(side, Side::Inner) && b > s {
        return Ok(None);
    }
    illinois(|r| side_slope(profile, s, side, r, params), a, b)
}

/// Root of a decreasing `g` in `[a, b]` by Illinois regula falsi; `None`
/// unless `g(a) > 0 > g(b)`.
fn illinois<G: FnMut(f64) -> Result<f64>>(mut g: G, mut a: f64, mut b: f64) -> Result<Option<f64>> {
    let (mut ga, mut gb) = (g(a)?, g(b)?);
    if !(ga > 0.0 && gb < 0.0) {
        return Ok(None);
    }
    let mut last = 0i8;
    for _ in 0..100 {
        if b - a <= 4.0 * f64::EPSILON * b.abs().max(f64::MIN_POSITIVE) {
            break;
        }
        let c = (a * gb - b * ga) / (gb - ga);
        let c = if c > a && c < b { c } else { 0.5 * (a + b) };
        let gc = g(c)?;
        if gc == 0.0 {
            return Ok(Some(c));
        }
        if gc > 0.0 {
            a = c;
            ga = gc;
            if last == 1 {
                gb *= 0.5;
            }
            last = 1;
        } else {
            b = c;
            gb = gc;
            if last == -1 {
                ga *= 0.5;
            }
            last = -1;
        }
    }
    Ok(Some(if ga.abs() < gb.abs() { a } else { b }))
}

/// `(∂_d, ∂_r) [r^beta ⨍_B f] / r^beta` for a free ball.
fn free_gradient(profile: &RadialProfile, ball: &AxisBall, params: &AmbientParams) -> Result<[f64; 2]> {
    let q = QuadratureConfig::tight();
    let avg = ball_average(profile, ball, params, &q)?;
    let sph = sphere_average(profile, ball, params, &q)?;
    let gac = if ball.d == 0.0 {
        0.0
    } else {
        gradient_axial_component(profile, ball, params, &q)?
    };
    Ok([gac, (params.beta * avg + params.dim() * (sph - avg)) / ball.r])
}

/// Interior best ball refined to a zero of the gradient. Centred balls
/// stay centred and are refined in `r` only.
fn polish_interior(profile: &RadialProfile, ball: AxisBall, params: &AmbientParams) -> Result<Option<AxisBall>> {
    let r0 = ball.r;
    if ball.d <= POLISH_BRACKET * r0 {
        let slope = |r: f64| Ok(free_gradient(profile, &AxisBall { d: 0.0, r }, params)?[1]);
        let r = illinois(slope, r0 * (1.0 - POLISH_BRACKET), r0 * (1.0 + POLISH_BRACKET))?;
        return Ok(r.map(|r| AxisBall { d: 0.0, r }));
    }
    let mut x = [ball.d, ball.r];
    for _ in 0..8 {
        let b = AxisBall { d: x[0], r: x[1] };
        let g = free_gradient(profile, &b, params)?;
        let h = 1e-6 * x[1];
        let mut jac = [[0.0; 2]; 2];
        for k in 0..2 {
            let (mut lo, mut hi) = (x, x);
            lo[k] -= h;
            hi[k] += h;
            let gl = free_gradient(profile, &AxisBall { d: lo[0], r: lo[1] }, params)?;
            let gh = free_gradient(profile, &AxisBall { d: hi[0], r: hi[1] }, params)?;
            for i in 0..2 {
                jac[i][k] = (gh[i] - gl[i]) / (2.0 * h);
            }
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if !(det.is_finite() && det != 0.0) {
            return Ok(None);
        }
        let step = [
            (g[0] * jac[1][1] - g[1] * jac[0][1]) / det,
            (g[1] * jac[0][0] - g[0] * jac[1][0]) / det,
        ];
        x = [x[0] - step[0], x[1] - step[1]];
        if (x[0] - ball.d).abs() > POLISH_BRACKET * r0 || (x[1] - r0).abs() > POLISH_BRACKET * r0 || x[0] < 0.0 {
            return Ok(None);
        }
        if step[0].abs().max(step[1].abs()) <= 4.0 * f64::EPSILON * x[1] {
            break;
        }
    }
    Ok(Some(AxisBall { d: x[0], r: x[1] }))
}

/// Largest value; within the tie tolerance the smallest radius, then the
/// smallest centre distance.
fn select(candidates: &[Candidate], tie_tol: f64) -> Option<Candidate> {
    let vmax = candidates
        .iter()
        .map(|c| c.value)
        .filter(|v| v.is_finite())
        .fold(f64::NEG_INFINITY, f64::max);
    if !vmax.is_finite() {
        return None;
    }
    let floor = vmax - tie_tol * vmax.abs();
    candidates
        .iter()
        .filter(|c| c.value >= floor)
        .min_by(|a, b| {
            a.ball
                .r
                .total_cmp(&b.ball.r)
                .then(a.ball.d.total_cmp(&b.ball.d))
        })
        .copied()
}

/// Signed radial derivative `m'(s) = r^beta e.⨍_B Df`; exactly zero for
/// interior contact.
pub fn derivative_by_formula(
    profile: &RadialProfile,
    result: &BestBallResult,
    params: &AmbientParams,
    qcfg: &QuadratureConfig,
) -> Result<f64> {
    if result.contact.kind == ContactKind::Interior || result.s == 0.0 {
        return Ok(0.0);
    }
    let ball = &result.ball;
    Ok(ball.r.powf(params.beta) * gradient_axial_component(profile, ball, params, qcfg)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn indicator() -> RadialProfile {
        crate::profile::load_profile(&[(0.0, 1.0), (1.0, 1.0)]).unwrap()
    }

    fn tent() -> RadialProfile {
        crate::profile::load_profile(&[(0.0, 1.0), (1.0, 0.0)]).unwrap()
    }

    #[test]
    fn indicator_at_origin() {
        let p = indicator();
        for n in 1..=3 {
            let params = AmbientParams::new(n, 0.5).unwrap();
            let res = search(&p, 0.0, &params, &SearchConfig::default(), &QuadratureConfig::identity())
                .unwrap();
            assert_relative_eq!(res.value, 1.0, max_relative = 1e-9);
            assert_relative_eq!(res.ball.r, 1.0, max_relative = 1e-6);
            assert!(res.ball.d < 1e-6);
            assert_eq!(res.region, Region::ZeroDerivative);
        }
    }

    #[test]
    fn covering_ball_value() {
        let p = tent();
        let params = AmbientParams::new(2, 0.5).unwrap();
        let ball = AxisBall::new(0.0, 3.0);
        let v = objective(&p, 1.0, &ball, &params, &QuadratureConfig::identity()).unwrap();
        let mass = p.l1_norm(&params);
        assert_relative_eq!(v, 3f64.powf(0.5 - 2.0) * mass / params.omega_n, max_relative = 1e-10);
    }

    #[test]
    fn infeasible_ball_rejected() {
        let p = tent();
        let params = AmbientParams::new(2, 0.5).unwrap();
        let res = objective(&p, 1.0, &AxisBall::new(0.0, 0.5), &params, &QuadratureConfig::identity());
        assert!(matches!(res, Err(Error::InfeasibleBall { .. })));
    }

    #[test]
    fn zero_profile_rejected() {
        let p = crate::profile::load_profile(&[(0.0, 0.0), (1.0, 0.0)]);
        if let Ok(p) = p {
            let params = AmbientParams::new(2, 0.5).unwrap();
            assert!(search(&p, 0.5, &params, &SearchConfig::default(), &QuadratureConfig::identity())
                .is_err());
        }
    }

    #[test]
    fn tie_break_prefers_small_radius_then_small_d() {
        let c = |d, r, value| Candidate {
            ball: AxisBall { d, r },
            value,
            converged: true,
        };
        let best = select(&[c(0.5, 2.0, 1.0), c(0.3, 1.0, 1.0 - 1e-12), c(0.1, 1.0, 1.0)], 1e-9)
            .unwrap();
        assert_eq!(best.ball, AxisBall { d: 0.1, r: 1.0 });
        let best = select(&[c(0.5, 2.0, 1.0), c(0.1, 1.0, 0.9)], 1e-9).unwrap();
        assert_eq!(best.ball.r, 2.0);
    }

    #[test]
    fn regions_partition_by_c() {
        let b = |c| Contact {
            kind: ContactKind::BoundaryOuter,
            c,
        };
        assert_eq!(Region::of(&b(1.3)), Region::E1);
        assert_eq!(Region::of(&b(1.25)), Region::E3);
        assert_eq!(Region::of(&b(0.75)), Region::E3);
        assert_eq!(Region::of(&b(0.7)), Region::E2);
        let i = Contact {
            kind: ContactKind::Interior,
            c: 1.0,
        };
        assert_eq!(Region::of(&i), Region::ZeroDerivative);
    }
}
