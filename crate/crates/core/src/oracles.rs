//! Slow reference implementations. They share no integration or search
//! code with the rest of the crate: only the knot list is read from the
//! profile.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::AxisBall;
use crate::params::AmbientParams;
use crate::profile::RadialProfile;

/// `F` as a plain knot table with its own evaluation and antiderivative.
#[derive(Debug, Clone)]
struct KnotTable {
    t: Vec<f64>,
    v: Vec<f64>,
}

impl KnotTable {
    fn new(profile: &RadialProfile) -> Self {
        let (t, v) = profile.knot_pairs().into_iter().unzip();
        Self { t, v }
    }

    /// `F(|u|)`, right-continuous in `|u|` at jumps.
    fn value(&self, u: f64) -> f64 {
        let u = u.abs();
        let k = self.t.partition_point(|&t| t <= u);
        if k == 0 {
            return self.v[0];
        }
        if k == self.t.len() {
            return 0.0;
        }
        let (t0, t1) = (self.t[k - 1], self.t[k]);
        let (v0, v1) = (self.v[k - 1], self.v[k]);
        v0 + (u - t0) * (v1 - v0) / (t1 - t0)
    }

    /// `∫_0^u F(t) dt` for `u >= 0`.
    fn primitive_pos(&self, u: f64) -> f64 {
        let mut acc = 0.0;
        for k in 1..self.t.len() {
            let (t0, t1) = (self.t[k - 1], self.t[k]);
            if t1 <= t0 || t0 >= u {
                continue;
            }
            let hi = t1.min(u);
            let slope = (self.v[k] - self.v[k - 1]) / (t1 - t0);
            let fhi = self.v[k - 1] + slope * (hi - t0);
            acc += 0.5 * (self.v[k - 1] + fhi) * (hi - t0);
        }
        acc
    }

    /// `∫_0^u F(|t|) dt`, odd in `u`.
    fn primitive(&self, u: f64) -> f64 {
        u.signum() * self.primitive_pos(u.abs())
    }
}

/// `M_beta f(x)` in one dimension by brute force over interval endpoints.
///
/// Every interval `[a, b] ∋ x` with endpoints on a uniform grid of
/// `resolution` points over `[-(|x| + T), |x| + T]` (plus `x` itself) is
/// scored exactly; the best one is refined by alternating ternary
/// searches in `a` and `b`.
pub fn oracle_1d_maximal(profile: &RadialProfile, x: f64, beta: f64, resolution: usize) -> Result<f64> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::InvalidParams(format!("one-dimensional beta = {beta} must lie in (0, 1)")));
    }
    if resolution < 2 {
        return Err(Error::InvalidParams("oracle resolution must be at least 2".into()));
    }
    let table = KnotTable::new(profile);
    let half = x.abs() + profile.support_radius();
    let score = |a: f64, b: f64| -> f64 {
        if b <= a {
            return 0.0;
        }
        let len = b - a;
        (0.5 * len).powf(beta) * (table.primitive(b) - table.primitive(a)) / len
    };

    let mut pts: Vec<f64> = (0..resolution)
        .map(|i| -half + 2.0 * half * i as f64 / (resolution - 1) as f64)
        .collect();
    pts.push(x);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let prim: Vec<f64> = pts.iter().map(|&u| table.primitive(u)).collect();
    let split = pts.partition_point(|&u| u < x);

    let (ia, ib, _) = (0..=split)
        .into_par_iter()
        .map(|i| {
            let mut best = (i, split, f64::NEG_INFINITY);
            for j in split.max(i + 1)..pts.len() {
                let len = pts[j] - pts[i];
                let v = (0.5 * len).powf(beta) * (prim[j] - prim[i]) / len;
                if v > best.2 {
                    best = (i, j, v);
                }
            }
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((0, 0, f64::NEG_INFINITY), |p, q| if q.2 > p.2 { q } else { p });

    let step = 2.0 * half / (resolution - 1) as f64;
    let (mut a, mut b) = (pts[ia], pts[ib]);
    let mut best = score(a, b);
    for _ in 0..40 {
        let (ua, va) = ternary_max(|u| score(u, b), (a - step).max(-half), (a + step).min(x));
        if va > best {
            a = ua;
            best = va;
        }
        let (ub, vb) = ternary_max(|u| score(a, u), (b - step).max(x), (b + step).min(half));
        if vb > best {
            b = ub;
            best = vb;
        }
    }
    Ok(best)
}

/// Ternary search for the maximum of a unimodal `f` on `[lo, hi]`.
fn ternary_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> (f64, f64) {
    if !(hi > lo) {
        return (lo, f(lo));
    }
    for _ in 0..200 {
        if hi - lo <= 1e-15 * hi.abs().max(lo.abs()).max(1e-300) {
            break;
        }
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) < f(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Samples per independent generator stream.
const MC_CHUNK: usize = 1 << 16;

/// Monte-Carlo `⨍_B f` with its standard error. Points are
/// `c + r U^{1/n} g/|g|` with `g` Gaussian; chunk `k` draws from stream `k`
/// of a generator seeded with `seed`, so the result does not depend on
/// the thread count.
pub fn oracle_mc_ball_average(
    profile: &RadialProfile,
    ball: &AxisBall,
    params: &AmbientParams,
    samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if samples == 0 {
        return Err(Error::InvalidParams("Monte-Carlo needs at least one sample".into()));
    }
    let table = KnotTable::new(profile);
    let n = params.n;
    let chunks = samples.div_ceil(MC_CHUNK);
    // (count, mean, sum of squared deviations) per chunk
    let parts: Vec<(f64, f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let count = MC_CHUNK.min(samples - k * MC_CHUNK);
            let mut g = vec![0.0f64; n];
            let values: Vec<f64> = (0..count)
                .map(|_| {
                    let mut norm2: f64 = 0.0;
                    for x in g.iter_mut() {
                        *x = rng.sample(StandardNormal);
                        norm2 += *x * *x;
                    }
                    let rad = ball.r * rng.random::<f64>().powf(1.0 / n as f64) / norm2.sqrt();
                    let y0 = ball.d + rad * g[0];
                    let rest: f64 = g[1..].iter().map(|x| (rad * x).powi(2)).sum();
                    table.value((y0 * y0 + rest).sqrt())
                })
                .collect();
            let c = count as f64;
            let mean = values.iter().sum::<f64>() / c;
            let m2 = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>();
            (c, mean, m2)
        })
        .collect();
    let (mut c, mut mean, mut m2) = (0.0, 0.0, 0.0);
    for (cb, mb, m2b) in parts {
        let total = c + cb;
        let delta = mb - mean;
        mean += delta * cb / total;
        m2 += m2b + delta * delta * c * cb / total;
        c = total;
    }
    let var = if c > 1.0 { m2 / (c - 1.0) } else { 0.0 };
    Ok((mean, (var / c).sqrt()))
}

/// `⨍_B f` for `n = 2` by the midpoint rule in polar coordinates about the
/// ball centre, `resolution` cells in each of radius and angle.
pub fn oracle_dense_average_2d(profile: &RadialProfile, ball: &AxisBall, resolution: usize) -> Result<f64> {
    if resolution == 0 {
        return Err(Error::InvalidParams("oracle resolution must be positive".into()));
    }
    let table = KnotTable::new(profile);
    let m = resolution;
    let h_rho = ball.r / m as f64;
    let h_phi = std::f64::consts::TAU / m as f64;
    // rows in parallel, summed in a fixed order
    let rows: Vec<f64> = (0..m)
        .into_par_iter()
        .map(|i| {
            let rho = (i as f64 + 0.5) * h_rho;
            let ring: f64 = (0..m)
                .map(|j| {
                    let phi = (j as f64 + 0.5) * h_phi;
                    let (y0, y1) = (ball.d + rho * phi.cos(), rho * phi.sin());
                    table.value(y0.hypot(y1))
                })
                .sum();
            ring * rho
        })
        .collect();
    let total: f64 = rows.iter().sum();
    Ok(total * h_rho * h_phi / (std::f64::consts::PI * ball.r * ball.r))
}
