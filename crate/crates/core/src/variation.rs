//! `||D M_beta f||_{L^q}`, `||Df||_{L^1}` and their ratio, with the
//! refinement, dilation and family studies around it.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::best_ball::{Region, SearchConfig};
use crate::error::{Error, Result};
use crate::maximal::{maximal_profile, GridSpec, MaximalProfile, SweepPoint};
use crate::params::AmbientParams;
use crate::profile::{load_profile, RadialProfile};
use crate::quadrature::QuadratureConfig;

/// The derivative used for norms: the finite-difference channel, or at
/// corners whichever channel is larger in magnitude.
pub fn integrated_slope(p: &SweepPoint) -> f64 {
    if p.corner && p.dmdr_formula.abs() > p.dmdr_fd.abs() {
        p.dmdr_formula
    } else {
        p.dmdr_fd
    }
}

/// `(sigma_n ∫ |m'(s)|^q s^{n-1} ds)^{1/q}` by the trapezoid rule on the
/// sweep grid.
pub fn lq_norm_derivative(mp: &MaximalProfile, params: &AmbientParams) -> Result<f64> {
    let bad = mp.unconverged();
    if !bad.is_empty() {
        return Err(Error::Unconverged(bad));
    }
    if mp.points.len() < 2 {
        return Err(Error::InvalidGrid("need at least 2 sweep points".into()));
    }
    let n = params.n as i32;
    let density: Vec<(f64, f64)> = mp
        .points
        .iter()
        .map(|p| {
            let s = p.result.s;
            (s, integrated_slope(p).abs().powf(params.q) * s.powi(n - 1))
        })
        .collect();
    let integral: f64 = density
        .windows(2)
        .map(|w| 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0))
        .sum();
    Ok((params.sigma_n * integral).powf(1.0 / params.q))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionHistogram {
    pub zero_derivative: usize,
    #[serde(rename = "E1")]
    pub e1: usize,
    #[serde(rename = "E2")]
    pub e2: usize,
    #[serde(rename = "E3")]
    pub e3: usize,
}

impl RegionHistogram {
    pub fn of(mp: &MaximalProfile) -> Self {
        let mut h = Self::default();
        for p in &mp.points {
            match p.result.region {
                Region::ZeroDerivative => h.zero_derivative += 1,
                Region::E1 => h.e1 += 1,
                Region::E2 => h.e2 += 1,
                Region::E3 => h.e3 += 1,
            }
        }
        h
    }

    pub fn total(&self) -> usize {
        self.zero_derivative + self.e1 + self.e2 + self.e3
    }
}

/// Which extra runs [`variation_report`] performs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Study {
    /// Rerun on the grid with doubled density.
    pub refine: bool,
    /// Rerun on `F(lambda t)` with the grid divided by `lambda`.
    pub dilate: Option<f64>,
}

impl Default for Study {
    fn default() -> Self {
        Self {
            refine: true,
            dilate: Some(2.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariationReport {
    pub n: usize,
    pub beta: f64,
    pub q: f64,
    pub lq_norm_dm: f64,
    pub l1_norm_df: f64,
    pub ratio: f64,
    pub grid: GridSpec,
    pub corner_count: usize,
    pub region_histogram: RegionHistogram,
    /// Bound on `m` at the outer grid end, `(s + T)^(beta - n) ||f||_1 / omega_n`.
    pub tail_bound: f64,
    pub exponent_identity_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refined_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refinement_deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dilation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dilated_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dilation_deviation: Option<f64>,
}

/// The ratio `||D M_beta f||_q / ||Df||_1` from an existing sweep.
pub fn ratio_of(profile: &RadialProfile, mp: &MaximalProfile, params: &AmbientParams) -> Result<(f64, f64, f64)> {
    let lq = lq_norm_derivative(mp, params)?;
    let l1 = profile.gradient_l1_norm(params);
    Ok((lq, l1, lq / l1))
}

fn deviation(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(f64::MIN_POSITIVE)
}

/// Sweep, derivatives, norms and ratio on `grid`, plus the studies
/// requested in `study`.
pub fn variation_report(
    profile: &RadialProfile,
    params: &AmbientParams,
    grid: &GridSpec,
    study: &Study,
    scfg: &SearchConfig,
    qcfg: &QuadratureConfig,
) -> Result<VariationReport> {
    grid.validate()?;
    let mp = maximal_profile(profile, &grid.points(), params, scfg, qcfg)?;
    let (lq, l1, ratio) = ratio_of(profile, &mp, params)?;
    let t_sup = profile.support_radius();
    let tail_bound =
        (grid.hi + t_sup).powf(params.beta - params.dim()) * profile.l1_norm(params) / params.omega_n;

    let mut report = VariationReport {
        n: params.n,
        beta: params.beta,
        q: params.q,
        lq_norm_dm: lq,
        l1_norm_df: l1,
        ratio,
        grid: *grid,
        corner_count: mp.corner_count(),
        region_histogram: RegionHistogram::of(&mp),
        tail_bound,
        exponent_identity_residual: params.exponent_identity_residual(),
        refined_ratio: None,
        refinement_deviation: None,
        dilation: None,
        dilated_ratio: None,
        dilation_deviation: None,
    };
    if study.refine {
        let fine = maximal_profile(profile, &grid.refined().points(), params, scfg, qcfg)?;
        let r = ratio_of(profile, &fine, params)?.2;
        report.refined_ratio = Some(r);
        report.refinement_deviation = Some(deviation(ratio, r));
    }
    if let Some(lambda) = study.dilate {
        let dilated = profile.dilated(lambda)?;
        let g = grid.dilated(lambda);
        let dm = maximal_profile(&dilated, &g.points(), params, scfg, qcfg)?;
        let r = ratio_of(&dilated, &dm, params)?.2;
        report.dilation = Some(lambda);
        report.dilated_ratio = Some(r);
        report.dilation_deviation = Some(deviation(ratio, r));
    }
    Ok(report)
}

/// Piecewise-linear profile with `pieces` segments of random length in
/// `[0.2, 1]` and knot values in `[0, 1]`, ending at zero.
pub fn random_profile<R: Rng>(rng: &mut R, pieces: usize) -> Result<RadialProfile> {
    let pieces = pieces.max(1);
    let mut t = 0.0;
    let mut knots = Vec::with_capacity(pieces + 1);
    for i in 0..=pieces {
        let v = if i == pieces { 0.0 } else { rng.random_range(0.0..1.0) };
        knots.push((t, v));
        t += rng.random_range(0.2..1.0);
    }
    // keep the profile away from the degenerate all-zero case
    if knots.iter().all(|k| k.1 < 0.05) {
        knots[0].1 = 1.0;
    }
    load_profile(&knots)
}

/// `count` seeded random profiles, named `random-<i>`.
pub fn random_family(seed: u64, count: usize, pieces: usize) -> Result<Vec<(String, RadialProfile)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| Ok((format!("random-{i}"), random_profile(&mut rng, pieces)?)))
        .collect()
}

/// Tent, annular bump and two-bump profiles.
pub fn standard_family() -> Vec<(String, RadialProfile)> {
    let specs: [(&str, &[(f64, f64)]); 3] = [
        ("tent", &[(0.0, 1.0), (1.0, 0.0)]),
        ("annular", &[(0.0, 0.0), (1.0, 0.0), (2.0, 1.0), (3.0, 0.0)]),
        (
            "two-bump",
            &[(0.0, 0.0), (0.5, 1.0), (1.0, 0.0), (2.0, 0.0), (2.5, 0.5), (3.0, 0.0)],
        ),
    ];
    specs
        .iter()
        .map(|(name, k)| (name.to_string(), load_profile(k).expect("valid built-in profile")))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedProfile {
    pub name: String,
    pub knots: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomMembers {
    pub count: usize,
    #[serde(default = "default_pieces")]
    pub pieces: usize,
}

fn default_pieces() -> usize {
    4
}

/// Family run description, read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    #[serde(default)]
    pub standard: bool,
    #[serde(default)]
    pub profiles: Vec<NamedProfile>,
    #[serde(default)]
    pub random: Option<RandomMembers>,
    pub n: Vec<usize>,
    pub beta: Vec<f64>,
    #[serde(default = "default_grid_count")]
    pub grid_count: usize,
    #[serde(default = "no_study")]
    pub study: Study,
}

fn default_grid_count() -> usize {
    96
}

fn no_study() -> Study {
    Study {
        refine: false,
        dilate: None,
    }
}

impl FamilySpec {
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    /// All members, in order: standard, listed, random.
    pub fn members(&self, seed: u64) -> Result<Vec<(String, RadialProfile)>> {
        let mut out = if self.standard { standard_family() } else { Vec::new() };
        for p in &self.profiles {
            let knots: Vec<(f64, f64)> = p.knots.iter().map(|k| (k[0], k[1])).collect();
            out.push((p.name.clone(), load_profile(&knots)?));
        }
        if let Some(r) = self.random {
            out.extend(random_family(seed, r.count, r.pieces)?);
        }
        if out.is_empty() {
            return Err(Error::Input("family has no members".into()));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyRow {
    pub profile: String,
    pub n: usize,
    pub beta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<VariationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyMax {
    pub n: usize,
    pub beta: f64,
    pub max_ratio: f64,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyTable {
    pub seed: u64,
    pub rows: Vec<FamilyRow>,
    pub maxima: Vec<FamilyMax>,
}

/// Variation reports for every member and `(n, beta)` pair. Failures are
/// recorded per row; the table itself fails only on invalid input.
pub fn family_sweep(
    spec: &FamilySpec,
    seed: u64,
    scfg: &SearchConfig,
    qcfg: &QuadratureConfig,
) -> Result<FamilyTable> {
    let members = spec.members(seed)?;
    let mut cells = Vec::new();
    for &n in &spec.n {
        for &beta in &spec.beta {
            let params = AmbientParams::new(n, beta)?;
            for (name, profile) in &members {
                cells.push((name.clone(), profile, params));
            }
        }
    }
    let rows: Vec<FamilyRow> = cells
        .into_par_iter()
        .map(|(name, profile, params)| {
            let run = GridSpec::for_support(profile.support_radius(), spec.grid_count)
                .and_then(|g| variation_report(profile, &params, &g, &spec.study, scfg, qcfg));
            let (report, error) = match run {
                Ok(r) => (Some(r), None),
                Err(e) => (None, Some(e.to_string())),
            };
            FamilyRow {
                profile: name,
                n: params.n,
                beta: params.beta,
                report,
                error,
            }
        })
        .collect();

    let mut maxima = Vec::new();
    for &n in &spec.n {
        for &beta in &spec.beta {
            let cell = rows.iter().filter(|r| r.n == n && r.beta == beta);
            maxima.push(FamilyMax {
                n,
                beta,
                max_ratio: cell
                    .clone()
                    .filter_map(|r| r.report.as_ref().map(|x| x.ratio))
                    .fold(f64::NAN, f64::max),
                failures: cell.filter(|r| r.error.is_some()).count(),
            });
        }
    }
    Ok(FamilyTable { seed, rows, maxima })
}
