//! Piecewise-linear radial profiles `F` with `f(x) = F(|x|)`.
//!
//! Profiles are stored as `|F|`: nonnegative, compactly supported and linear
//! between knots. Two knots may share a radius, which encodes a jump; the
//! distributional derivative then carries an atom on that sphere.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::AmbientParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Knot {
    pub t: f64,
    pub value: f64,
}

/// A linear piece of the profile on `[t0, t1]` with `t0 < t1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub t0: f64,
    pub t1: f64,
    pub f0: f64,
    pub f1: f64,
}

impl Segment {
    pub fn slope(&self) -> f64 {
        (self.f1 - self.f0) / (self.t1 - self.t0)
    }

    pub fn value_at(&self, t: f64) -> f64 {
        let w = (t - self.t0) / (self.t1 - self.t0);
        self.f0 + w * (self.f1 - self.f0)
    }
}

/// A jump of the profile at radius `t`: `delta = F(t+) - F(t-)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jump {
    pub t: f64,
    pub delta: f64,
}

/// Closed radius interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, t: f64) -> bool {
        self.lo <= t && t <= self.hi
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    knots: Vec<Knot>,
    segments: Vec<Segment>,
    jumps: Vec<Jump>,
    support_radius: f64,
    max_value: f64,
}

#[derive(Deserialize)]
struct ProfileFile {
    knots: Vec<[f64; 2]>,
}

/// Validates a knot list and stores `|F|`.
///
/// Radii must be nonnegative and non-decreasing. Sign changes between knots
/// get an inserted zero crossing before the absolute value is taken, repeated
/// identical knots collapse, and a profile that does not end at zero gets a
/// closing jump to zero. A first knot beyond the origin is extended
/// constantly down to `t = 0`.
pub fn load_profile(knot_list: &[(f64, f64)]) -> Result<RadialProfile> {
    if knot_list.is_empty() {
        return Err(Error::InvalidProfile("empty knot list".into()));
    }
    for (i, &(t, v)) in knot_list.iter().enumerate() {
        if !t.is_finite() || !v.is_finite() {
            return Err(Error::InvalidProfile(format!("knot {i} is not finite")));
        }
        if t < 0.0 {
            return Err(Error::InvalidProfile(format!("knot {i} has negative radius {t}")));
        }
    }
    if let Some(i) = knot_list.windows(2).position(|w| w[1].0 < w[0].0) {
        return Err(Error::InvalidProfile(format!(
            "radii decrease between knots {i} and {}",
            i + 1
        )));
    }

    let mut signed: Vec<(f64, f64)> = Vec::with_capacity(knot_list.len() + 2);
    if knot_list[0].0 > 0.0 {
        signed.push((0.0, knot_list[0].1));
    }
    for &(t, v) in knot_list {
        if let Some(&(tp, vp)) = signed.last() {
            if t > tp && vp * v < 0.0 {
                let tc = tp + (t - tp) * (vp / (vp - v));
                signed.push((tc, 0.0));
            }
        }
        signed.push((t, v));
    }

    let mut knots: Vec<Knot> = Vec::with_capacity(signed.len() + 1);
    for (t, v) in signed {
        let k = Knot { t, value: v.abs() };
        if knots.last() == Some(&k) {
            continue;
        }
        // Keep only the outermost two knots of a run sharing one radius.
        let n = knots.len();
        if n >= 2 && knots[n - 1].t == t && knots[n - 2].t == t {
            knots[n - 1] = k;
            continue;
        }
        knots.push(k);
    }
    // The value at the origin itself carries no mass.
    if knots.len() >= 2 && knots[0].t == 0.0 && knots[1].t == 0.0 {
        knots.remove(0);
    }
    let last = *knots.last().expect("non-empty");
    if last.value != 0.0 {
        knots.push(Knot { t: last.t, value: 0.0 });
    }
    // Trailing zero stretch: the support ends at the first knot of it.
    while knots.len() >= 2 && knots[knots.len() - 2].value == 0.0 {
        knots.pop();
    }

    RadialProfile::from_knots(knots)
}

/// Reads `{"knots": [[t, F], ...]}` JSON or a two-column CSV.
pub fn load_profile_file(path: impl AsRef<Path>) -> Result<RadialProfile> {
    let text = std::fs::read_to_string(path.as_ref())?;
    parse_profile_text(&text)
}

pub fn parse_profile_text(text: &str) -> Result<RadialProfile> {
    if text.trim_start().starts_with('{') {
        let file: ProfileFile = serde_json::from_str(text)?;
        let knots: Vec<(f64, f64)> = file.knots.iter().map(|k| (k[0], k[1])).collect();
        return load_profile(&knots);
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut knots = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() != 2 {
            return Err(Error::InvalidProfile(format!(
                "csv row {line} has {} columns, expected 2",
                record.len()
            )));
        }
        match (record[0].parse::<f64>(), record[1].parse::<f64>()) {
            (Ok(t), Ok(v)) => knots.push((t, v)),
            // a header row
            _ if line == 0 => continue,
            _ => {
                return Err(Error::InvalidProfile(format!(
                    "csv row {line} is not numeric"
                )))
            }
        }
    }
    load_profile(&knots)
}

impl RadialProfile {
    fn from_knots(knots: Vec<Knot>) -> Result<Self> {
        let mut segments = Vec::new();
        let mut jumps = Vec::new();
        for w in knots.windows(2) {
            if w[1].t > w[0].t {
                segments.push(Segment {
                    t0: w[0].t,
                    t1: w[1].t,
                    f0: w[0].value,
                    f1: w[1].value,
                });
            } else if w[1].value != w[0].value {
                jumps.push(Jump {
                    t: w[0].t,
                    delta: w[1].value - w[0].value,
                });
            }
        }
        let has_mass = segments.iter().any(|s| s.f0 > 0.0 || s.f1 > 0.0);
        if !has_mass {
            return Err(Error::InvalidProfile(
                "profile vanishes almost everywhere".into(),
            ));
        }
        let support_radius = knots.last().map(|k| k.t).unwrap_or(0.0);
        let max_value = knots.iter().map(|k| k.value).fold(0.0, f64::max);
        Ok(Self {
            knots,
            segments,
            jumps,
            support_radius,
            max_value,
        })
    }

    pub fn knots(&self) -> &[Knot] {
        &self.knots
    }

    pub fn knot_pairs(&self) -> Vec<(f64, f64)> {
        self.knots.iter().map(|k| (k.t, k.value)).collect()
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn jumps(&self) -> &[Jump] {
        &self.jumps
    }

    /// `T`: the profile vanishes beyond this radius.
    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    pub fn max_value(&self) -> f64 {
        self.max_value
    }

    /// Radii of all knots, deduplicated.
    pub fn breakpoints(&self) -> impl Iterator<Item = f64> + '_ {
        let mut prev = f64::NAN;
        self.knots.iter().filter_map(move |k| {
            if k.t == prev {
                None
            } else {
                prev = k.t;
                Some(k.t)
            }
        })
    }

    /// `F(t)`; at a jump the left limit is returned.
    pub fn value(&self, t: f64) -> f64 {
        let t = t.abs();
        let i = self.knots.partition_point(|k| k.t < t);
        if i == self.knots.len() {
            return 0.0;
        }
        let right = self.knots[i];
        if right.t == t || i == 0 {
            return right.value;
        }
        let left = self.knots[i - 1];
        left.value + (t - left.t) / (right.t - left.t) * (right.value - left.value)
    }

    /// `F'(t)` away from knots; zero beyond the support.
    pub fn slope(&self, t: f64) -> f64 {
        let i = self.knots.partition_point(|k| k.t <= t);
        if i == 0 || i == self.knots.len() {
            return 0.0;
        }
        let (a, b) = (self.knots[i - 1], self.knots[i]);
        if b.t > a.t {
            (b.value - a.value) / (b.t - a.t)
        } else {
            0.0
        }
    }

    /// The profile of `a * f`, `a > 0`.
    pub fn scaled(&self, a: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidProfile(format!("scale factor {a} must be positive")));
        }
        Self::from_knots(
            self.knots
                .iter()
                .map(|k| Knot { t: k.t, value: a * k.value })
                .collect(),
        )
    }

    /// The profile of `x -> f(lambda x)`, `lambda > 0`.
    pub fn dilated(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidProfile(format!(
                "dilation factor {lambda} must be positive"
            )));
        }
        Self::from_knots(
            self.knots
                .iter()
                .map(|k| Knot { t: k.t / lambda, value: k.value })
                .collect(),
        )
    }

    /// `∫_a^b F(t) dt` in closed form, `0 <= a <= b`.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        self.segments
            .iter()
            .map(|s| {
                let (lo, hi) = (a.max(s.t0), b.min(s.t1));
                if hi > lo {
                    0.5 * (s.value_at(lo) + s.value_at(hi)) * (hi - lo)
                } else {
                    0.0
                }
            })
            .sum()
    }

    /// `||f||_{L^1(R^n)}` in closed form.
    pub fn l1_norm(&self, params: &AmbientParams) -> f64 {
        let n = params.n as i32;
        let nf = params.dim();
        let total: f64 = self
            .segments
            .iter()
            .map(|s| {
                let b = s.slope();
                let a = s.f0 - b * s.t0;
                a * (s.t1.powi(n) - s.t0.powi(n)) / nf
                    + b * (s.t1.powi(n + 1) - s.t0.powi(n + 1)) / (nf + 1.0)
            })
            .sum();
        params.sigma_n * total
    }

    /// `||Df||_{L^1(R^n)}` in closed form, including jump atoms.
    pub fn gradient_l1_norm(&self, params: &AmbientParams) -> f64 {
        let n = params.n as i32;
        let nf = params.dim();
        let smooth: f64 = self
            .segments
            .iter()
            .map(|s| s.slope().abs() * (s.t1.powi(n) - s.t0.powi(n)) / nf)
            .sum();
        let atoms: f64 = self
            .jumps
            .iter()
            .map(|j| j.delta.abs() * j.t.powi(n - 1))
            .sum();
        params.sigma_n * (smooth + atoms)
    }

    /// Sorted, disjoint closed intervals where `lo <= F(t) <= hi`, clipped to
    /// `window`. Zero-length pieces are dropped.
    pub fn level_intervals(&self, lo: f64, hi: f64, window: (f64, f64)) -> Vec<Interval> {
        let (w0, w1) = (window.0.max(0.0), window.1);
        let mut raw: Vec<Interval> = Vec::new();
        for s in &self.segments {
            let m = s.slope();
            let (a, b) = if m == 0.0 {
                if lo <= s.f0 && s.f0 <= hi {
                    (s.t0, s.t1)
                } else {
                    continue;
                }
            } else {
                let ta = s.t0 + (lo - s.f0) / m;
                let tb = s.t0 + (hi - s.f0) / m;
                let (ta, tb) = if ta <= tb { (ta, tb) } else { (tb, ta) };
                (ta.max(s.t0), tb.min(s.t1))
            };
            if a <= b {
                raw.push(Interval { lo: a, hi: b });
            }
        }
        if lo <= 0.0 && 0.0 <= hi {
            raw.push(Interval {
                lo: self.support_radius,
                hi: f64::INFINITY,
            });
        }
        raw.sort_by(|x, y| x.lo.total_cmp(&y.lo));

        let mut merged: Vec<Interval> = Vec::new();
        for iv in raw {
            match merged.last_mut() {
                Some(last) if iv.lo <= last.hi => last.hi = last.hi.max(iv.hi),
                _ => merged.push(iv),
            }
        }
        merged
            .into_iter()
            .filter_map(|iv| {
                let a = iv.lo.max(w0);
                let b = iv.hi.min(w1);
                (b > a).then_some(Interval { lo: a, hi: b })
            })
            .collect()
    }
}
