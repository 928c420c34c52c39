//! Axis balls and spherical-cap kernels.
//!
//! For a ball `B(d e, r)` and the sphere `{|y| = t}` the intersection is a
//! cap of half-angle `theta*` about `e`. Its measure and its first moment in
//! the `e` direction reduce every ball integral of a radial function to a
//! one-dimensional integral in `t`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{unit_ball_volume, AmbientParams};

/// Ball `B(d e, r)` with centre on the ray through the evaluation point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisBall {
    pub d: f64,
    pub r: f64,
}

impl AxisBall {
    pub fn new(d: f64, r: f64) -> Self {
        debug_assert!(d >= 0.0 && r > 0.0, "axis ball needs d >= 0, r > 0");
        Self { d, r }
    }

    /// Whether `s e` lies in the closed ball, up to `tol`.
    pub fn contains_point(&self, s: f64, tol: f64) -> bool {
        (self.d - s).abs() <= self.r + tol
    }

    /// Same centre, radius scaled by `k`.
    pub fn scaled_radius(&self, k: f64) -> Self {
        Self { d: self.d, r: self.r * k }
    }

    /// Smallest and largest `|y|` over the ball.
    pub fn radial_range(&self) -> (f64, f64) {
        ((self.d - self.r).max(0.0), self.d + self.r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContactKind {
    Interior,
    BoundaryInner,
    BoundaryOuter,
}

impl ContactKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ContactKind::Interior => "interior",
            ContactKind::BoundaryInner => "boundary_inner",
            ContactKind::BoundaryOuter => "boundary_outer",
        }
    }

    pub fn is_boundary(&self) -> bool {
        !matches!(self, ContactKind::Interior)
    }
}

/// How the evaluation point sits relative to its ball; `c = d / s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Contact {
    pub kind: ContactKind,
    pub c: f64,
}

/// Classifies the position of `s e` against `ball`. `tol` is absolute.
pub fn classify_contact(ball: &AxisBall, s: f64, tol: f64) -> Result<Contact> {
    let gap = (ball.d - s).abs();
    if gap > ball.r + tol {
        return Err(Error::InfeasibleBall {
            s,
            d: ball.d,
            r: ball.r,
        });
    }
    let c = if s > 0.0 { ball.d / s } else { 0.0 };
    let kind = if s == 0.0 || gap < ball.r - tol {
        ContactKind::Interior
    } else if ball.d < s {
        ContactKind::BoundaryInner
    } else {
        ContactKind::BoundaryOuter
    };
    Ok(Contact { kind, c })
}

/// Cap half-angle with its cosine and sine. A sphere inside the ball has
/// angle pi, a sphere missing it angle 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapAngle {
    pub theta: f64,
    pub cos: f64,
    pub sin: f64,
    /// `1 - cos`, computed without cancellation.
    pub versin: f64,
}

impl CapAngle {
    const FULL: CapAngle = CapAngle {
        theta: PI,
        cos: -1.0,
        sin: 0.0,
        versin: 2.0,
    };
    const EMPTY: CapAngle = CapAngle {
        theta: 0.0,
        cos: 1.0,
        sin: 0.0,
        versin: 0.0,
    };
}

/// Half-angle of `{|y| = t} ∩ B(d e, r)` seen from the origin.
///
/// The degenerate cases `t = 0` and `d = 0` go through containment tests.
/// Otherwise the sine comes from the factored form
/// `(r-t+d)(r+t-d)(t+d-r)(t+d+r) = (2td sin)^2`, which stays accurate near
/// the tangency radii where the arccos form loses half its digits.
pub fn cap_angle_full(t: f64, d: f64, r: f64) -> CapAngle {
    if t + d <= r {
        return CapAngle::FULL;
    }
    if t >= d + r || t <= d - r || t <= 0.0 || d <= 0.0 {
        return CapAngle::EMPTY;
    }
    let a = r - t + d;
    let b = r + t - d;
    let two_td = 2.0 * t * d;
    let sin = ((a * b) * ((t + d - r) * (t + d + r))).sqrt() / two_td;
    let versin = a * b / two_td;
    let cos = (t * t + d * d - r * r) / two_td;
    CapAngle {
        theta: sin.atan2(cos),
        cos,
        sin,
        versin,
    }
}

/// Cap half-angle in `[0, pi]`.
pub fn cap_angle(t: f64, d: f64, r: f64) -> f64 {
    cap_angle_full(t, d, r).theta
}

/// `∫_0^theta sin^k(phi) dphi` from the cap angle data.
fn sin_power_integral(k: usize, ang: &CapAngle) -> f64 {
    match k {
        0 => ang.theta,
        1 => ang.versin,
        _ => {
            // I_k = -sin^{k-1} cos / k + (k-1)/k I_{k-2}
            let mut lower = if k.is_multiple_of(2) { ang.theta } else { ang.versin };
            let mut j = if k.is_multiple_of(2) { 2 } else { 3 };
            while j <= k {
                let jf = j as f64;
                lower = -ang.sin.powi(j as i32 - 1) * ang.cos / jf + (jf - 1.0) / jf * lower;
                j += 2;
            }
            lower
        }
    }
}

/// Cap kernels for a fixed dimension `n >= 2`.
#[derive(Debug, Clone, Copy)]
pub struct CapKernel {
    n: usize,
    sigma_n: f64,
    sigma_lower: f64,
    omega_lower: f64,
}

impl CapKernel {
    pub fn new(params: &AmbientParams) -> Self {
        debug_assert!(params.n >= 2);
        Self {
            n: params.n,
            sigma_n: params.sigma_n,
            sigma_lower: params.sigma_lower(),
            omega_lower: unit_ball_volume(params.n - 1),
        }
    }

    /// Measure of `{|y| = t} ∩ B(d e, r)`.
    pub fn area(&self, t: f64, d: f64, r: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let ang = cap_angle_full(t, d, r);
        if ang.theta == 0.0 {
            return 0.0;
        }
        let tn = t.powi(self.n as i32 - 1);
        if ang.theta == PI {
            return self.sigma_n * tn;
        }
        self.sigma_lower * tn * sin_power_integral(self.n - 2, &ang)
    }

    /// `∫_{cap} cos(theta) dH^{n-1}`.
    pub fn first_moment(&self, t: f64, d: f64, r: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let ang = cap_angle_full(t, d, r);
        if ang.sin == 0.0 {
            return 0.0;
        }
        // sigma_{n-1} / (n-1) = omega_{n-1}
        self.omega_lower * (t * ang.sin).powi(self.n as i32 - 1)
    }
}

/// Measure of `{|y| = t} ∩ B(d e, r)` for `n >= 2`: `sigma_{n-1} t^{n-1}
/// ∫_0^theta* sin^{n-2}`, with `sigma_{n-1}` the measure of the unit sphere
/// of `R^{n-1}`.
pub fn cap_area(t: f64, d: f64, r: f64, params: &AmbientParams) -> f64 {
    CapKernel::new(params).area(t, d, r)
}

/// `∫_{cap} cos(theta) dH^{n-1} = sigma_{n-1} t^{n-1} sin^{n-1}(theta*) / (n-1)`
/// for `n >= 2`.
pub fn cap_first_moment(t: f64, d: f64, r: f64, params: &AmbientParams) -> f64 {
    CapKernel::new(params).first_moment(t, d, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn params(n: usize) -> AmbientParams {
        AmbientParams::new(n, 0.5).unwrap()
    }

    #[test]
    fn angle_examples() {
        assert_eq!(cap_angle(0.5, 3.0, 1.0), 0.0);
        assert_eq!(cap_angle(0.5, 0.1, 1.0), PI);
        assert_relative_eq!(cap_angle(1.0, 1.0, 1.0), PI / 3.0, max_relative = 1e-15);
    }

    #[test]
    fn area_examples() {
        assert_relative_eq!(cap_area(0.5, 0.0, 1.0, &params(3)), PI, max_relative = 1e-15);
        assert_eq!(cap_area(2.0, 0.5, 1.0, &params(2)), 0.0);
        assert_relative_eq!(cap_area(1.0, 1.0, 1.0, &params(3)), PI, max_relative = 1e-14);
        assert_relative_eq!(
            cap_first_moment(1.0, 1.0, 1.0, &params(3)),
            3.0 * PI / 4.0,
            max_relative = 1e-14
        );
        assert_eq!(cap_first_moment(0.5, 0.1, 1.0, &params(3)), 0.0);
        assert_eq!(cap_first_moment(0.5, 3.0, 1.0, &params(3)), 0.0);
    }

    /// Uniform points on the sphere of radius t; fraction in the ball and
    /// mean of cos * indicator.
    fn mc_cap(n: usize, t: f64, d: f64, r: f64, samples: usize, seed: u64) -> [(f64, f64); 2] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut v = vec![0.0; n];
        let (mut s_in, mut s_in2, mut s_cos, mut s_cos2) = (0.0, 0.0, 0.0, 0.0);
        for _ in 0..samples {
            for x in v.iter_mut() {
                *x = rng.sample(StandardNormal);
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            let cos = v[0] / norm;
            let dist2 = (t * cos - d).powi(2) + t * t * (1.0 - cos * cos);
            if dist2 < r * r {
                s_in += 1.0;
                s_in2 += 1.0;
                s_cos += cos;
                s_cos2 += cos * cos;
            }
        }
        let m = samples as f64;
        let full = params(n).sigma_n * t.powi(n as i32 - 1);
        let stats = |s: f64, s2: f64| {
            let mean = s / m;
            let var = (s2 / m - mean * mean).max(0.0);
            (full * mean, full * (var / m).sqrt())
        };
        [stats(s_in, s_in2), stats(s_cos, s_cos2)]
    }

    #[test]
    fn monte_carlo_cap_kernels() {
        let cases = [(3, 1.0, 1.0, 1.0), (2, 0.8, 0.5, 0.6), (4, 1.2, 1.0, 0.5), (5, 0.7, 0.3, 0.6)];
        for (i, &(n, t, d, r)) in cases.iter().enumerate() {
            let [(area, area_se), (mom, mom_se)] = mc_cap(n, t, d, r, 1_000_000, 11 + i as u64);
            let p = params(n);
            let a = cap_area(t, d, r, &p);
            let m = cap_first_moment(t, d, r, &p);
            assert!((a - area).abs() <= 3.0 * area_se + 1e-12, "n={n}: {a} vs {area} ± {area_se}");
            assert!((m - mom).abs() <= 3.0 * mom_se + 1e-12, "n={n}: {m} vs {mom} ± {mom_se}");
        }
    }

    #[test]
    fn full_and_empty_limits() {
        for n in 2..=10 {
            let p = params(n);
            let full = p.sigma_n * 0.3f64.powi(n as i32 - 1);
            assert_relative_eq!(cap_area(0.3, 0.2, 0.6, &p), full, max_relative = 1e-15);
            // just inside the tangency the kernel approaches the full sphere
            let near = cap_area(0.4 - 1e-9, 0.2, 0.6, &p);
            assert!((near - p.sigma_n * 0.4f64.powi(n as i32 - 1)).abs() < 1e-3);
            assert_eq!(cap_area(0.9, 0.2, 0.6, &p), 0.0);
        }
    }

    #[test]
    fn angle_is_continuous_across_clamps() {
        let (d, r) = (0.7, 0.4);
        for &edge in &[d - r, d + r] {
            for &eps in &[1e-10, 1e-12] {
                let lo = cap_angle(edge - eps, d, r);
                let hi = cap_angle(edge + eps, d, r);
                assert!((lo - hi).abs() <= 1e-4, "edge {edge}: {lo} vs {hi}");
            }
        }
        // the unclamped formula meets the clamped values at the edges
        let raw = |t: f64, d: f64, r: f64| {
            let a = (r - t + d) * (r + t - d);
            let s = (a * ((t + d - r) * (t + d + r))).max(0.0).sqrt();
            s.atan2(t * t + d * d - r * r)
        };
        for &(t, d, r) in &[(0.3, 0.7, 0.4), (1.1, 0.7, 0.4), (0.4, 0.2, 0.6)] {
            assert!((raw(t, d, r) - cap_angle(t, d, r)).abs() <= 1e-8);
        }
        let (d, r) = (0.2, 0.6);
        let edge = r - d;
        let lo = cap_angle(edge - 1e-14, d, r);
        let hi = cap_angle(edge + 1e-14, d, r);
        assert!((lo - hi).abs() <= 1e-6);
        // dense sweep: no jumps beyond the local modulus of continuity
        let mut prev = cap_angle(1e-6, 0.5, 0.3);
        for i in 1..=100_000 {
            let t = 1e-6 + 1.2 * i as f64 / 100_000.0;
            let cur = cap_angle(t, 0.5, 0.3);
            assert!((cur - prev).abs() < 0.05, "t = {t}");
            prev = cur;
        }
    }

    #[test]
    fn classify_examples() {
        let c = classify_contact(&AxisBall::new(0.0, 1.0), 0.5, 1e-12).unwrap();
        assert_eq!(c.kind, ContactKind::Interior);
        let c = classify_contact(&AxisBall::new(1.5, 0.5), 1.0, 1e-12).unwrap();
        assert_eq!(c.kind, ContactKind::BoundaryOuter);
        assert_eq!(c.c, 1.5);
        let c = classify_contact(&AxisBall::new(0.5, 0.5), 1.0, 1e-12).unwrap();
        assert_eq!(c.kind, ContactKind::BoundaryInner);
        assert_eq!(c.c, 0.5);
        assert!(classify_contact(&AxisBall::new(3.0, 0.5), 1.0, 1e-12).is_err());
    }
}
