//! Ambient dimension, fractional order and the constants derived from them.

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest dimension the cap kernels are validated for.
pub const MAX_DIMENSION: usize = 10;

/// Dimension `n`, fractional order `beta` and the derived quantities.
///
/// `q = n / (n - beta)` is the Lebesgue exponent on the left of the
/// variation bound, `omega_n` the volume of the unit ball and `sigma_n`
/// the surface measure of the unit sphere `S^{n-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmbientParams {
    pub n: usize,
    pub beta: f64,
    pub q: f64,
    pub omega_n: f64,
    pub sigma_n: f64,
}

impl AmbientParams {
    pub fn new(n: usize, beta: f64) -> Result<Self> {
        if n == 0 || n > MAX_DIMENSION {
            return Err(Error::InvalidParams(format!(
                "dimension n = {n} outside 1..={MAX_DIMENSION}"
            )));
        }
        if !beta.is_finite() || beta <= 0.0 || beta >= n as f64 {
            return Err(Error::InvalidParams(format!(
                "fractional order beta = {beta} must satisfy 0 < beta < n = {n}"
            )));
        }
        let nf = n as f64;
        let omega_n = unit_ball_volume(n);
        Ok(Self {
            n,
            beta,
            q: nf / (nf - beta),
            omega_n,
            sigma_n: nf * omega_n,
        })
    }

    pub fn dim(&self) -> f64 {
        self.n as f64
    }

    /// Measure of `S^{n-2}`, the unit sphere of `R^{n-1}` (2 when `n = 2`).
    pub fn sigma_lower(&self) -> f64 {
        unit_sphere_measure(self.n - 1)
    }

    /// Volume of the ball of radius `r`.
    pub fn ball_volume(&self, r: f64) -> f64 {
        self.omega_n * r.powi(self.n as i32)
    }

    /// `q * beta - n * (q - 1)`; zero up to rounding.
    pub fn exponent_identity_residual(&self) -> f64 {
        self.q * self.beta - self.dim() * (self.q - 1.0)
    }
}

/// Volume of the unit ball in `R^k`, via `omega_k = 2 pi / k * omega_{k-2}`.
pub fn unit_ball_volume(k: usize) -> f64 {
    match k {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * std::f64::consts::PI / k as f64 * unit_ball_volume(k - 2),
    }
}

/// Surface measure of the unit sphere `S^{k-1}` in `R^k`.
pub fn unit_sphere_measure(k: usize) -> f64 {
    k as f64 * unit_ball_volume(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn volumes_match_closed_forms() {
        assert_relative_eq!(unit_ball_volume(2), PI, max_relative = 1e-15);
        assert_relative_eq!(unit_ball_volume(3), 4.0 * PI / 3.0, max_relative = 1e-15);
        assert_relative_eq!(unit_ball_volume(4), PI * PI / 2.0, max_relative = 1e-15);
        assert_relative_eq!(unit_sphere_measure(1), 2.0);
        assert_relative_eq!(unit_sphere_measure(3), 4.0 * PI, max_relative = 1e-15);
    }

    #[test]
    fn derived_exponent() {
        for n in 1..=MAX_DIMENSION {
            for &frac in &[0.01, 0.25, 0.5, 0.99] {
                let p = AmbientParams::new(n, frac * n as f64).unwrap();
                assert!(p.exponent_identity_residual().abs() <= 1e-12 * p.q * p.beta);
                assert_relative_eq!(p.sigma_n, p.dim() * p.omega_n);
            }
        }
    }

    #[test]
    fn rejects_out_of_range_beta() {
        assert!(AmbientParams::new(2, 2.5).is_err());
        assert!(AmbientParams::new(2, 2.0).is_err());
        assert!(AmbientParams::new(2, 0.0).is_err());
        assert!(AmbientParams::new(0, 0.5).is_err());
        assert!(AmbientParams::new(11, 0.5).is_err());
    }
}
