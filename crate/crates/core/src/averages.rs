//! Ball and sphere averages of a radial profile and of its gradient.
//!
//! For `n >= 2` every quantity is a one-dimensional integral in `t = |y|`
//! against a cap kernel, split at the profile knots and the cap regime
//! radii `|r - d|`, `d + r`. For `n = 1` the ball is the interval
//! `[d - r, d + r]` and all integrals are exact piecewise.
//!
//! The gradient is the distributional one: piecewise-constant slopes plus
//! atoms at jumps of the profile.

use crate::error::Result;
use crate::geometry::{AxisBall, CapKernel};
use crate::params::{unit_sphere_measure, AmbientParams};
use crate::profile::{Interval, RadialProfile};
use crate::quadrature::{breakpoints_within, integrate, QuadratureConfig};

/// Weight `w(|y|)` multiplying `|Df|` in [`weighted_gradient_average`].
#[derive(Debug, Clone, PartialEq)]
pub enum GradientWeight {
    Unit,
    /// `w(t) = t / s`.
    RadialRatio { s: f64 },
    /// Indicator of a union of radius intervals.
    LevelSet(Vec<Interval>),
}

impl GradientWeight {
    fn at(&self, t: f64) -> f64 {
        match self {
            GradientWeight::Unit => 1.0,
            GradientWeight::RadialRatio { s } => t / s,
            GradientWeight::LevelSet(ivs) => {
                if ivs.iter().any(|iv| iv.contains(t)) {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        match self {
            GradientWeight::LevelSet(ivs) => ivs.iter().flat_map(|iv| [iv.lo, iv.hi]).collect(),
            _ => Vec::new(),
        }
    }
}

/// Radius window and breakpoints for the `t`-integrals of a ball.
fn radial_pieces(profile: &RadialProfile, ball: &AxisBall, extra: &[f64]) -> Option<Vec<f64>> {
    let lo = (ball.d - ball.r).max(0.0);
    let hi = (ball.d + ball.r).min(profile.support_radius());
    if hi <= lo {
        return None;
    }
    let regime = (ball.r - ball.d).abs();
    Some(breakpoints_within(
        lo,
        hi,
        profile
            .breakpoints()
            .chain(std::iter::once(regime))
            .chain(extra.iter().copied()),
    ))
}

fn scaled_cfg(cfg: &QuadratureConfig, scale: f64) -> QuadratureConfig {
    QuadratureConfig {
        abs_tol: cfg.abs_tol * scale.max(f64::MIN_POSITIVE),
        ..*cfg
    }
}

/// `|f|_B`, the integral average of `f` over `B(d e, r)`.
pub fn ball_average(
    profile: &RadialProfile,
    ball: &AxisBall,
    params: &AmbientParams,
    qcfg: &QuadratureConfig,
) -> Result<f64> {
    if params.n == 1 {
        return Ok(line::integral(profile, ball, &[], |_, f, _| f) / (2.0 * ball.r));
    }
    let Some(pts) = radial_pieces(profile, ball, &[]) else {
        return Ok(0.0);
    };
    let volume = params.ball_volume(ball.r);
    let k = CapKernel::new(params);
    let (d, r) = (ball.d, ball.r);
    let cfg = scaled_cfg(qcfg, profile.max_value() * volume);
    let est = integrate(|t| profile.value(t) * k.area(t, d, r), &pts, &cfg)?;
    Ok(est.value / volume)
}

/// Average of `f` over the sphere `∂B(d e, r)`.
pub fn sphere_average(
    profile: &RadialProfile,
    ball: &AxisBall,
    params: &AmbientParams,
    qcfg: &QuadratureConfig,
) -> Result<f64> {
    let (d, r) = (ball.d, ball.r);
    if params.n == 1 {
        return Ok(0.5 * (profile.value((d - r).abs()) + profile.value(d + r)));
    }
    if d == 0.0 {
        return Ok(profile.value(r));
    }
    let n = params.n;
    // |y|^2 = (d - r)^2 + 4 d r cos^2(phi / 2) for y = d e + r w, w.e = cos(phi)
    let rho = |phi: f64| {
        let c = (0.5 * phi).cos();
        ((d - r) * (d - r) + 4.0 * d * r * c * c).sqrt()
    };
    let knot_angles = profile.breakpoints().filter_map(|t| {
        let c = (t * t - d * d - r * r) / (2.0 * d * r);
        (c > -1.0 && c < 1.0).then(|| c.acos())
    });
    let pts = breakpoints_within(0.0, std::f64::consts::PI, knot_angles);
    let cfg = scaled_cfg(qcfg, profile.max_value());
    let est = integrate(
        |phi| profile.value(rho(phi)) * phi.sin().powi(n as i32 - 2),
        &pts,
        &cfg,
    )?;
    Ok(unit_sphere_measure(n - 1) / unit_sphere_measure(n) * est.value)
}

/// `e`-component of `⨍_B Df`; the other components vanish by symmetry.
pub fn gradient_axial_component(
    profile: &RadialProfile,
    ball: &AxisBall,
    params: &AmbientParams,
    qcfg: &QuadratureConfig,
) -> Result<f64> {
    if params.n == 1 {
        let smooth = line::integral(profile, ball, &[], |_, _, df| df);
        let atoms: f64 = line::atoms(profile, ball).iter().map(|&(_, j)| j).sum();
        return Ok((smooth + atoms) / (2.0 * ball.r));
    }
    let Some(pts) = radial_pieces(profile, ball, &[]) else {
        return Ok(0.0);
    };
    let volume = params.ball_volume(ball.r);
    let k = CapKernel::new(params);
    let (d, r) = (ball.d, ball.r);
    let cfg = scaled_cfg(qcfg, profile.max_value() * volume / r);
    let est = integrate(|t| profile.slope(t) * k.first_moment(t, d, r), &pts, &cfg)?;
    let atoms: f64 = in_range_jumps(profile, ball)
        .map(|(t, delta)| delta * k.first_moment(t, d, r))
        .sum();
    Ok((est.value + atoms) / volume)
}

/// `⨍_B Df(y) · y dy`.
pub fn gradient_radial_moment(
    profile: &RadialProfile,
    ball: &AxisBall,
    params: &AmbientParams,
    qcfg: &QuadratureConfig,
) -> Result<f64> {
    if params.n == 1 {
        let smooth = line::integral(profile, ball, &[], |u, _, df| df * u);
        let atoms: f64 = line::atoms(profile, ball).iter().map(|&(u, j)| j * u).sum();
        return Ok((smooth + atoms) / (2.0 * ball.r));
    }
    let Some(pts) = radial_pieces(profile, ball, &[]) else {
        return Ok(0.0);
    };
    let volume = params.ball_volume(ball.r);
    let k = CapKernel::new(params);
    let (d, r) = (ball.d, ball.r);
    let cfg = scaled_cfg(qcfg, profile.max_value() * volume);
    let est = integrate(|t| profile.slope(t) * t * k.area(t, d, r), &pts, &cfg)?;
    let atoms: f64 = in_range_jumps(profile, ball)
        .map(|(t, delta)| delta * t * k.area(t, d, r))
        .sum();
    Ok((est.value + atoms) / volume)
}

/// `⨍_B |Df(y)| w(|y|) dy`.
pub fn weighted_gradient_average(
    profile: &RadialProfile,
    ball: &AxisBall,
    params: &AmbientParams,
    weight: &GradientWeight,
    qcfg: &QuadratureConfig,
) -> Result<f64> {
    let extra = weight.breakpoints();
    if params.n == 1 {
        let mirrored: Vec<f64> = extra.iter().flat_map(|&t| [t, -t]).collect();
        let smooth = line::integral(profile, ball, &mirrored, |u, _, df| df.abs() * weight.at(u.abs()));
        let atoms: f64 = line::atoms(profile, ball)
            .iter()
            .map(|&(u, j)| j.abs() * weight.at(u.abs()))
            .sum();
        return Ok((smooth + atoms) / (2.0 * ball.r));
    }
    let Some(pts) = radial_pieces(profile, ball, &extra) else {
        return Ok(0.0);
    };
    let volume = params.ball_volume(ball.r);
    let k = CapKernel::new(params);
    let (d, r) = (ball.d, ball.r);
    let cfg = scaled_cfg(qcfg, profile.max_value() * volume / r);
    let est = integrate(
        |t| profile.slope(t).abs() * weight.at(t) * k.area(t, d, r),
        &pts,
        &cfg,
    )?;
    let atoms: f64 = in_range_jumps(profile, ball)
        .map(|(t, delta)| delta.abs() * weight.at(t) * k.area(t, d, r))
        .sum();
    Ok((est.value + atoms) / volume)
}

fn in_range_jumps<'a>(
    profile: &'a RadialProfile,
    ball: &AxisBall,
) -> impl Iterator<Item = (f64, f64)> + 'a {
    let (lo, hi) = ball.radial_range();
    profile
        .jumps()
        .iter()
        .filter(move |j| j.t > lo && j.t < hi)
        .map(|j| (j.t, j.delta))
}

/// Exact integration along the line for `n = 1`, where `f(u) = F(|u|)`.
mod line {
    use super::*;

    const GL3_X: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
    const GL3_W: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];

    /// `∫_{d-r}^{d+r} g(u, f(u), f'(u)) du`, exact when `g` is a polynomial
    /// of degree at most 5 on each piece.
    pub(super) fn integral<G>(profile: &RadialProfile, ball: &AxisBall, extra: &[f64], g: G) -> f64
    where
        G: Fn(f64, f64, f64) -> f64,
    {
        let (a, b) = (ball.d - ball.r, ball.d + ball.r);
        let cuts = profile
            .breakpoints()
            .flat_map(|t| [t, -t])
            .chain(std::iter::once(0.0))
            .chain(extra.iter().copied());
        let pts = breakpoints_within(a, b, cuts);
        let mut acc = 0.0;
        for w in pts.windows(2) {
            let (u0, u1) = (w[0], w[1]);
            let mid = 0.5 * (u0 + u1);
            let half = 0.5 * (u1 - u0);
            for (x, wt) in GL3_X.iter().zip(GL3_W) {
                let u = mid + half * x;
                let f = profile.value(u.abs());
                let df = u.signum() * profile.slope(u.abs());
                acc += wt * half * g(u, f, df);
            }
        }
        acc
    }

    /// Jumps of `f` strictly inside the interval, as `(u, f(u+) - f(u-))`.
    pub(super) fn atoms(profile: &RadialProfile, ball: &AxisBall) -> Vec<(f64, f64)> {
        let (a, b) = (ball.d - ball.r, ball.d + ball.r);
        let mut out = Vec::new();
        for j in profile.jumps() {
            if j.t > a && j.t < b {
                out.push((j.t, j.delta));
            }
            if -j.t > a && -j.t < b {
                out.push((-j.t, -j.delta));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::load_profile;
    use approx::assert_relative_eq;

    fn tent() -> RadialProfile {
        load_profile(&[(0.0, 1.0), (1.0, 0.0)]).unwrap()
    }

    fn chi() -> RadialProfile {
        load_profile(&[(0.0, 1.0), (1.0, 1.0), (1.0, 0.0)]).unwrap()
    }

    fn q() -> QuadratureConfig {
        QuadratureConfig::identity()
    }

    #[test]
    fn indicator_volume_ratio() {
        for n in 1..=6 {
            let p = AmbientParams::new(n, 0.5).unwrap();
            let avg = ball_average(&chi(), &AxisBall::new(0.0, 2.0), &p, &q()).unwrap();
            assert_relative_eq!(avg, 0.5f64.powi(n as i32), max_relative = 1e-12);
        }
    }

    #[test]
    fn constant_region_averages() {
        let plateau = load_profile(&[(0.0, 2.0), (3.0, 2.0), (4.0, 0.0)]).unwrap();
        for n in 1..=5 {
            let p = AmbientParams::new(n, 0.5).unwrap();
            let b = AxisBall::new(1.2, 0.9);
            assert_relative_eq!(ball_average(&plateau, &b, &p, &q()).unwrap(), 2.0, max_relative = 1e-12);
            assert_relative_eq!(sphere_average(&plateau, &b, &p, &q()).unwrap(), 2.0, max_relative = 1e-12);
            assert!(gradient_axial_component(&plateau, &b, &p, &q()).unwrap().abs() < 1e-14);
            assert!(gradient_radial_moment(&plateau, &b, &p, &q()).unwrap().abs() < 1e-14);
        }
    }

    #[test]
    fn tent_closed_forms() {
        let p = AmbientParams::new(2, 0.5).unwrap();
        let b = AxisBall::new(0.0, 1.0);
        assert_relative_eq!(ball_average(&tent(), &b, &p, &q()).unwrap(), 1.0 / 3.0, max_relative = 1e-12);
        assert_relative_eq!(
            gradient_radial_moment(&tent(), &b, &p, &q()).unwrap(),
            -2.0 / 3.0,
            max_relative = 1e-12
        );
        assert_eq!(gradient_axial_component(&tent(), &b, &p, &q()).unwrap(), 0.0);
        assert_eq!(sphere_average(&tent(), &AxisBall::new(0.0, 0.4), &p, &q()).unwrap(), 0.6);
    }

    #[test]
    fn one_dimensional_paths() {
        let p = AmbientParams::new(1, 0.5).unwrap();
        let b = AxisBall::new(0.5, 0.75);
        // f(u) = 1 - |u| on [-0.25, 1.25]: ∫ = 0.21875 + 0.5
        assert_relative_eq!(ball_average(&tent(), &b, &p, &q()).unwrap(), 0.71875 / 1.5, max_relative = 1e-14);
        let gac = gradient_axial_component(&tent(), &b, &p, &q()).unwrap();
        assert_relative_eq!(gac, (0.0 - 0.75) / 1.5, max_relative = 1e-14);
        let sph = sphere_average(&tent(), &b, &p, &q()).unwrap();
        assert_relative_eq!(sph, 0.375, max_relative = 1e-14);
        // jump contributions: chi over [0.5, 1.5] has a single atom at u = 1
        let b = AxisBall::new(1.0, 0.5);
        let gac = gradient_axial_component(&chi(), &b, &p, &q()).unwrap();
        assert_relative_eq!(gac, -1.0, max_relative = 1e-14);
        let grm = gradient_radial_moment(&chi(), &b, &p, &q()).unwrap();
        assert_relative_eq!(grm, -1.0, max_relative = 1e-14);
    }

    #[test]
    fn weighted_average_cases() {
        let p = AmbientParams::new(2, 0.5).unwrap();
        let b = AxisBall::new(0.5, 0.25);
        let unit = weighted_gradient_average(&tent(), &b, &p, &GradientWeight::Unit, &q()).unwrap();
        let gac = gradient_axial_component(&tent(), &b, &p, &q()).unwrap();
        // |F'| = 1 on the ball, so the unit-weight average is 1
        assert_relative_eq!(unit, 1.0, max_relative = 1e-12);
        assert!(gac.abs() <= unit);
        let empty = weighted_gradient_average(&tent(), &b, &p, &GradientWeight::LevelSet(vec![]), &q()).unwrap();
        assert_eq!(empty, 0.0);
    }

    #[test]
    fn ball_outside_support() {
        let p = AmbientParams::new(3, 0.5).unwrap();
        let b = AxisBall::new(3.0, 1.0);
        assert_eq!(ball_average(&tent(), &b, &p, &q()).unwrap(), 0.0);
        assert_eq!(gradient_axial_component(&tent(), &b, &p, &q()).unwrap(), 0.0);
    }
}
