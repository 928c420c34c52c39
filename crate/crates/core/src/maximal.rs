//! Maximal profile `m(s) = M_beta f(s e)` on a grid of radii, with the
//! finite-difference and formula derivative channels.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::best_ball::{derivative_by_formula, objective, search, search_with_hints, BestBallResult, SearchConfig};
use crate::error::{Error, Result};
use crate::geometry::AxisBall;
use crate::params::AmbientParams;
use crate::profile::RadialProfile;
use crate::quadrature::QuadratureConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Log,
    Lin,
}

/// `count` radii from `lo` to `hi`, both included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl GridSpec {
    pub fn new(lo: f64, hi: f64, count: usize, spacing: Spacing) -> Result<Self> {
        let g = Self {
            lo,
            hi,
            count,
            spacing,
        };
        g.validate()?;
        Ok(g)
    }

    /// Log grid on `[1e-2 T, 8 T]` for a profile supported in `[0, T]`.
    pub fn for_support(t_sup: f64, count: usize) -> Result<Self> {
        Self::new(1e-2 * t_sup, 8.0 * t_sup, count, Spacing::Log)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo > 0.0 && self.hi > self.lo && self.hi.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "need 0 < lo < hi, got lo={} hi={}",
                self.lo, self.hi
            )));
        }
        if self.count < 3 {
            return Err(Error::InvalidGrid(format!("need at least 3 points, got {}", self.count)));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let m = self.count;
        (0..m)
            .map(|i| {
                if i == 0 {
                    return self.lo;
                }
                if i + 1 == m {
                    return self.hi;
                }
                let u = i as f64 / (m - 1) as f64;
                match self.spacing {
                    Spacing::Lin => self.lo + (self.hi - self.lo) * u,
                    Spacing::Log => (self.lo.ln() + (self.hi / self.lo).ln() * u).exp(),
                }
            })
            .collect()
    }

    /// Twice as dense; contains every point of `self`.
    pub fn refined(&self) -> Self {
        Self {
            count: 2 * self.count - 1,
            ..*self
        }
    }

    /// Grid for the dilated profile `F(lambda t)`.
    pub fn dilated(&self, lambda: f64) -> Self {
        Self {
            lo: self.lo / lambda,
            hi: self.hi / lambda,
            ..*self
        }
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    /// Parses `lo:hi:count:log|lin`.
    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::InvalidGrid(format!("expected lo:hi:count:log|lin, got {text:?}"));
        let parts: Vec<&str> = text.trim().split(':').collect();
        if parts.len() != 4 {
            return Err(bad());
        }
        let lo: f64 = parts[0].parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].parse().map_err(|_| bad())?;
        let count: usize = parts[2].parse().map_err(|_| bad())?;
        let spacing = match parts[3] {
            "log" => Spacing::Log,
            "lin" => Spacing::Lin,
            _ => return Err(bad()),
        };
        Self::new(lo, hi, count, spacing)
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sp = match self.spacing {
            Spacing::Log => "log",
            Spacing::Lin => "lin",
        };
        write!(f, "{}:{}:{}:{}", self.lo, self.hi, self.count, sp)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub result: BestBallResult,
    pub dmdr_fd: f64,
    pub dmdr_formula: f64,
    pub corner: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximalProfile {
    pub points: Vec<SweepPoint>,
}

impl MaximalProfile {
    pub fn grid(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.result.s).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.result.value).collect()
    }

    pub fn unconverged(&self) -> Vec<f64> {
        self.points
            .iter()
            .filter(|p| !p.result.converged)
            .map(|p| p.result.s)
            .collect()
    }

    pub fn corner_count(&self) -> usize {
        self.points.iter().filter(|p| p.corner).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdEstimate {
    pub slope: f64,
    pub corner: bool,
    /// The estimate could not use a smooth central stencil.
    pub rough: bool,
}

/// Relative parameter change between neighbours treated as a ball jump.
const JUMP_FRACTION: f64 = 0.1;

fn ball_jumps(a: &BestBallResult, b: &BestBallResult) -> bool {
    if a.contact.kind != b.contact.kind {
        return true;
    }
    // Smooth stretches move the ball at most about as fast as s itself.
    let allowance = JUMP_FRACTION * a.ball.r.max(b.ball.r) + 2.0 * (b.s - a.s).abs();
    (a.ball.d - b.ball.d).abs() > allowance || (a.ball.r - b.ball.r).abs() > allowance
}

/// Whether a ball edge, `d + r` or `d - r`, passes `±knot` between two
/// neighbouring results. `m` is `C^1` but not `C^2` across such a gap.
fn edge_crosses_knot(a: &BestBallResult, b: &BestBallResult, knots: &[f64]) -> bool {
    let between = |x: f64, y: f64, t: f64| (x - t) * (y - t) < 0.0;
    let (far_a, far_b) = (a.ball.d + a.ball.r, b.ball.d + b.ball.r);
    let (near_a, near_b) = (a.ball.d - a.ball.r, b.ball.d - b.ball.r);
    between(near_a, near_b, 0.0)
        || knots.iter().any(|&t| {
            between(far_a, far_b, t) || between(near_a, near_b, t) || between(near_a, near_b, -t)
        })
}

/// Three-point finite differences of `m` on a non-uniform grid.
///
/// A grid gap is rough when the best ball jumps across it, the contact type
/// changes, or a ball edge crosses one of `knots`. Each point uses the
/// central stencil when it avoids rough gaps and otherwise a one-sided
/// stencil that does. Points within one gap of a rough gap, and the two
/// ends, are marked `rough`.
/// Points next to a jump or contact change, and points with no smooth
/// stencil, are flagged as corners.
pub fn derivative_by_fd(results: &[BestBallResult], knots: &[f64]) -> Result<Vec<FdEstimate>> {
    let n = results.len();
    if n < 3 {
        return Err(Error::InvalidGrid(format!("need at least 3 points, got {n}")));
    }
    let s: Vec<f64> = results.iter().map(|r| r.s).collect();
    let m: Vec<f64> = results.iter().map(|r| r.value).collect();
    let jump: Vec<bool> = results.windows(2).map(|w| ball_jumps(&w[0], &w[1])).collect();
    let rough: Vec<bool> = results
        .windows(2)
        .zip(&jump)
        .map(|(w, &j)| j || edge_crosses_knot(&w[0], &w[1], knots))
        .collect();
    // divided differences of the quadratic through a, a+1, a+2
    let first = |a: usize| (m[a + 1] - m[a]) / (s[a + 1] - s[a]);
    let second = |a: usize| (first(a + 1) - first(a)) / (s[a + 2] - s[a]);
    let slope_at = |a: usize, i: usize| first(a) + second(a) * ((s[i] - s[a]) + (s[i] - s[a + 1]));

    Ok((0..n)
        .map(|i| {
            let central = i.clamp(1, n - 2) - 1;
            let smooth = |a: usize| !rough[a] && !rough[a + 1];
            let one_sided = (i.saturating_sub(2)..=i.min(n - 3))
                .filter(|&a| smooth(a))
                .min_by_key(|&a| a.abs_diff(central));
            let chosen = if smooth(central) { Some(central) } else { one_sided };
            let adjacent = (i > 0 && jump[i - 1]) || (i + 1 < n && jump[i]);
            FdEstimate {
                slope: slope_at(chosen.unwrap_or(central), i),
                corner: adjacent || chosen.is_none(),
                rough: i == 0 || i + 1 == n || rough[i.saturating_sub(2)..(i + 2).min(n - 1)].contains(&true),
            }
        })
        .collect())
}

/// Relative step of the local difference used at rough grid points.
const LOCAL_STEP: f64 = 1e-4;

/// Central difference of `m` from two extra searches at `s (1 ± 1e-4)`.
/// The values are recomputed with tight quadrature at the balls found,
/// since the difference divides their error by the step.
fn local_slope(
    profile: &RadialProfile,
    at: &BestBallResult,
    params: &AmbientParams,
    scfg: &SearchConfig,
    qcfg: &QuadratureConfig,
) -> Result<f64> {
    let h = LOCAL_STEP * at.s;
    let hint = [at.ball];
    let hi = search_with_hints(profile, at.s + h, params, scfg, qcfg, &hint)?;
    let lo = search_with_hints(profile, at.s - h, params, scfg, qcfg, &hint)?;
    let tight = QuadratureConfig::tight();
    let v_hi = objective(profile, hi.s, &hi.ball, params, &tight)?;
    let v_lo = objective(profile, lo.s, &lo.ball, params, &tight)?;
    Ok((v_hi - v_lo) / (2.0 * h))
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 3 {
        return Err(Error::InvalidGrid(format!("need at least 3 points, got {}", grid.len())));
    }
    if !grid.iter().all(|&s| s > 0.0 && s.is_finite()) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid("grid must be positive and strictly increasing".into()));
    }
    Ok(())
}

/// Best balls on `grid`, then both derivative channels.
///
/// With `scfg.warm_start` each point is searched again with its
/// neighbours' balls as extra starting points; a hint result replaces the
/// first pass only when it is strictly better beyond the tie tolerance.
/// Rough points of the finite-difference channel are re-estimated by a
/// local central difference with step `1e-4 s`.
pub fn maximal_profile(
    profile: &RadialProfile,
    grid: &[f64],
    params: &AmbientParams,
    scfg: &SearchConfig,
    qcfg: &QuadratureConfig,
) -> Result<MaximalProfile> {
    validate_grid(grid)?;
    let first: Vec<BestBallResult> = grid
        .par_iter()
        .map(|&s| search(profile, s, params, scfg, qcfg))
        .collect::<Result<_>>()?;

    let results: Vec<BestBallResult> = if scfg.warm_start {
        (0..first.len())
            .into_par_iter()
            .map(|i| {
                let s = first[i].s;
                let mut hints: Vec<AxisBall> = Vec::new();
                for j in [i.wrapping_sub(1), i + 1] {
                    if let Some(nb) = first.get(j) {
                        let k = s / nb.s;
                        hints.push(nb.ball);
                        hints.push(AxisBall {
                            d: nb.ball.d * k,
                            r: nb.ball.r * k,
                        });
                    }
                }
                let own = first[i];
                let retry = search_with_hints(profile, s, params, scfg, qcfg, &hints)?;
                let better = retry.value > own.value + scfg.tie_tol * own.value.abs();
                Ok(if better { retry } else { own })
            })
            .collect::<Result<_>>()?
    } else {
        first
    };

    let knots: Vec<f64> = profile.breakpoints().collect();
    let fd = derivative_by_fd(&results, &knots)?;
    let points = results
        .into_par_iter()
        .zip(fd)
        .map(|(result, fd)| {
            let dmdr_fd = if fd.rough {
                local_slope(profile, &result, params, scfg, qcfg)?
            } else {
                fd.slope
            };
            Ok(SweepPoint {
                dmdr_formula: derivative_by_formula(profile, &result, params, qcfg)?,
                result,
                dmdr_fd,
                corner: fd.corner,
            })
        })
        .collect::<Result<_>>()?;
    Ok(MaximalProfile { points })
}
