//! Globally adaptive 21-point Gauss-Kronrod quadrature over a list of
//! breakpoints.
//!
//! Each initial piece `[a, b]` is mapped through
//! `t = (a + b)/2 - (b - a)/2 cos(phi)`, `phi in [0, pi]`. Square-root
//! endpoint behaviour, which the cap kernels have at the tangency radii,
//! becomes analytic in `phi`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl QuadratureConfig {
    /// Tolerances used by the identity checks.
    pub fn identity() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-14,
            max_subdivisions: 2000,
        }
    }

    /// Tolerances used inside the coarse stage of the best-ball search.
    pub fn search() -> Self {
        Self {
            rel_tol: 1e-6,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
        }
    }

    /// Tight tolerances for finite differences of the objective.
    pub fn tight() -> Self {
        Self {
            rel_tol: 1e-13,
            abs_tol: 1e-16,
            max_subdivisions: 4000,
        }
    }

    pub fn validate(&self, knot_count: usize) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::InvalidParams("quadrature tolerances must be positive".into()));
        }
        if self.max_subdivisions < knot_count {
            return Err(Error::InvalidParams(format!(
                "max_subdivisions {} below knot count {knot_count}",
                self.max_subdivisions
            )));
        }
        Ok(())
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self::identity()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub abs_error: f64,
    pub intervals: usize,
}

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208836320780,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
    res_abs: f64,
}

/// One 21-point Gauss-Kronrod panel; returns (kronrod, error, |f| integral).
fn gk21<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64) -> (f64, f64, f64) {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut res_k = WGK[10] * fc;
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let scale = half.abs();
    let res_k_s = res_k * half;
    res_abs *= scale;
    res_asc *= scale;
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (res_k_s, err, res_abs)
}

/// Integrates `f` over `[breakpoints[0], breakpoints.last()]`.
///
/// `breakpoints` must be sorted; zero-length pieces are skipped. The
/// integrand is only ever sampled strictly inside a piece.
pub fn integrate<F>(mut f: F, breakpoints: &[f64], cfg: &QuadratureConfig) -> Result<Estimate>
where
    F: FnMut(f64) -> f64,
{
    // Pieces live in phi-space; each remembers its t-range.
    struct Piece {
        mid: f64,
        half: f64,
    }
    let pieces: Vec<Piece> = breakpoints
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| Piece {
            mid: 0.5 * (w[0] + w[1]),
            half: 0.5 * (w[1] - w[0]),
        })
        .collect();
    if pieces.is_empty() {
        return Ok(Estimate {
            value: 0.0,
            abs_error: 0.0,
            intervals: 0,
        });
    }

    let mut panels: Vec<(usize, Panel)> = Vec::with_capacity(pieces.len() * 4);
    for (k, p) in pieces.iter().enumerate() {
        let mut g = |phi: f64| {
            let (s, c) = phi.sin_cos();
            f(p.mid - p.half * c) * p.half * s
        };
        let (value, error, res_abs) = gk21(&mut g, 0.0, std::f64::consts::PI);
        panels.push((
            k,
            Panel {
                lo: 0.0,
                hi: std::f64::consts::PI,
                value,
                error,
                res_abs,
            },
        ));
    }

    loop {
        let total: f64 = panels.iter().map(|(_, p)| p.value).sum();
        let err: f64 = panels.iter().map(|(_, p)| p.error).sum();
        let res_abs: f64 = panels.iter().map(|(_, p)| p.res_abs).sum();
        let tol = cfg.abs_tol.max(cfg.rel_tol * total.abs());
        let roundoff = 100.0 * f64::EPSILON * res_abs;
        if err <= tol || err <= roundoff {
            return Ok(Estimate {
                value: total,
                abs_error: err,
                intervals: panels.len(),
            });
        }
        if panels.len() >= cfg.max_subdivisions {
            return Err(Error::Quadrature {
                estimate: err,
                subdivisions: panels.len(),
            });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .1.error.total_cmp(&b.1 .1.error))
            .expect("non-empty");
        let (k, panel) = panels.swap_remove(worst);
        let p = &pieces[k];
        let mut g = |phi: f64| {
            let (s, c) = phi.sin_cos();
            f(p.mid - p.half * c) * p.half * s
        };
        let mid = 0.5 * (panel.lo + panel.hi);
        if !(mid > panel.lo && mid < panel.hi) {
            return Err(Error::Quadrature {
                estimate: err,
                subdivisions: panels.len() + 1,
            });
        }
        for (lo, hi) in [(panel.lo, mid), (mid, panel.hi)] {
            let (value, error, res_abs) = gk21(&mut g, lo, hi);
            panels.push((
                k,
                Panel {
                    lo,
                    hi,
                    value,
                    error,
                    res_abs,
                },
            ));
        }
    }
}

/// Sorts, clips to `[lo, hi]` and deduplicates candidate breakpoints.
pub fn breakpoints_within(lo: f64, hi: f64, extra: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut pts: Vec<f64> = vec![lo, hi];
    pts.extend(extra.into_iter().filter(|&t| t > lo && t < hi));
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rule_is_exact_for_high_degree_polynomials() {
        let mut f = |x: f64| x.powi(30) + 3.0 * x.powi(7) - 1.0;
        let (k, _, _) = gk21(&mut f, -1.0, 1.0);
        assert_relative_eq!(k, 2.0 / 31.0 - 2.0, max_relative = 1e-14);
        let mut g = |x: f64| x.powi(19);
        let (k, err, _) = gk21(&mut g, 0.0, 1.0);
        assert_relative_eq!(k, 1.0 / 20.0, max_relative = 1e-14);
        assert!(err < 1e-12);
    }

    #[test]
    fn square_root_endpoints_converge_fast() {
        let cfg = QuadratureConfig::tight();
        let est = integrate(|t: f64| (t * (1.0 - t)).sqrt(), &[0.0, 1.0], &cfg).unwrap();
        assert_relative_eq!(est.value, std::f64::consts::PI / 8.0, max_relative = 1e-13);
        assert!(est.intervals <= 4);
    }

    #[test]
    fn kinks_at_breakpoints() {
        let cfg = QuadratureConfig::identity();
        let est = integrate(|t: f64| (t - 0.3).abs(), &[0.0, 0.3, 1.0], &cfg).unwrap();
        assert_relative_eq!(est.value, 0.045 + 0.245, max_relative = 1e-13);
    }

    #[test]
    fn reports_non_convergence() {
        let cfg = QuadratureConfig {
            rel_tol: 1e-14,
            abs_tol: 1e-300,
            max_subdivisions: 3,
        };
        let res = integrate(|t: f64| (50.0 * t).sin().abs(), &[0.0, 1.0], &cfg);
        assert!(matches!(res, Err(Error::Quadrature { .. })));
    }

    #[test]
    fn breakpoint_helper() {
        let b = breakpoints_within(0.0, 1.0, [0.5, 0.5, 2.0, -1.0, 0.25]);
        assert_eq!(b, vec![0.0, 0.25, 0.5, 1.0]);
    }
}
