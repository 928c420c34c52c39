//! Command-line front end.
//!
//! Exit status: 0 on success, 1 when a requested assertion fails, 2 for
//! usage and input errors, 3 when a search or quadrature does not converge.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::averages::ball_average;
use crate::best_ball::{search, BestBallResult, SearchConfig};
use crate::error::{Error, Result};
use crate::geometry::AxisBall;
use crate::identities::{render_text, run_suite, Suite, SuiteConfig};
use crate::maximal::{maximal_profile, GridSpec, MaximalProfile};
use crate::oracles::{oracle_1d_maximal, oracle_dense_average_2d, oracle_mc_ball_average};
use crate::params::AmbientParams;
use crate::profile::{load_profile_file, RadialProfile};
use crate::quadrature::QuadratureConfig;
use crate::variation::{family_sweep, variation_report, FamilySpec, Study, VariationReport};

pub const EXIT_ASSERTION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;

/// Relative tolerance of the one-dimensional oracle cross-check.
const ORACLE_1D_TOL: f64 = 1e-3;
/// Absolute tolerance of the dense 2-D cross-check, in units of `max F`.
const ORACLE_DENSE_TOL: f64 = 1e-6;
const DEFAULT_GRID_COUNT: usize = 96;

#[derive(Parser, Debug)]
#[command(name = "maxvar", version, about = "Fractional maximal operator of radial functions")]
pub struct Cli {
    /// JSON file supplying defaults for flags, plus "search" and
    /// "quadrature" settings.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
struct Common {
    /// Ambient dimension.
    #[arg(long)]
    n: Option<usize>,
    /// Fractional order, 0 < beta < n.
    #[arg(long)]
    beta: Option<f64>,
    /// Profile as JSON {"knots": [[t, F], ...]} or two-column CSV.
    #[arg(long)]
    profile: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    All,
    Divergence,
    Stationarity,
    Boundary,
    Affine,
    Inner,
    Keylemma,
    Comparison,
    Annulus,
}

impl SuiteArg {
    fn suite(self) -> Suite {
        match self {
            SuiteArg::All => Suite::All,
            SuiteArg::Divergence => Suite::Divergence,
            SuiteArg::Stationarity => Suite::Stationarity,
            SuiteArg::Boundary => Suite::Boundary,
            SuiteArg::Affine => Suite::Affine,
            SuiteArg::Inner => Suite::Inner,
            SuiteArg::Keylemma => Suite::KeyLemma,
            SuiteArg::Comparison => Suite::Comparison,
            SuiteArg::Annulus => Suite::Annulus,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OracleMode {
    #[value(name = "1d")]
    OneD,
    Mc,
    #[value(name = "dense2d")]
    Dense2d,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Best ball and M_beta f at the given radii.
    Eval {
        #[command(flatten)]
        common: Common,
        /// Evaluation radii, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        s: Vec<f64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Maximal profile, both derivative channels and regions on a grid.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// lo:hi:count:log|lin; defaults to a log grid on [T/100, 8T].
        #[arg(long)]
        grid: Option<GridSpec>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Identity and inequality checks.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long)]
        seed: Option<u64>,
        /// Random balls for the divergence and annulus checks.
        #[arg(long, default_value_t = 100)]
        random_balls: usize,
        #[arg(long)]
        grid: Option<GridSpec>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// ||D M_beta f||_q / ||Df||_1 with optional refinement and dilation runs.
    Ratio {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        grid: Option<GridSpec>,
        /// Rerun on the grid with doubled density.
        #[arg(long)]
        refine: bool,
        /// Rerun on F(L t).
        #[arg(long)]
        dilate: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Cross-checks against the slow reference implementations.
    Oracle {
        #[arg(long, value_enum)]
        mode: OracleMode,
        #[command(flatten)]
        common: Common,
        /// Evaluation radii for 1d mode.
        #[arg(long, value_delimiter = ',')]
        s: Vec<f64>,
        /// Ball centre distance for mc and dense2d modes.
        #[arg(long)]
        d: Option<f64>,
        /// Ball radius for mc and dense2d modes.
        #[arg(long)]
        r: Option<f64>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 2000)]
        resolution: usize,
    },
    /// Variation reports over a family of profiles.
    Family {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    n: Option<usize>,
    beta: Option<f64>,
    profile: Option<PathBuf>,
    grid: Option<String>,
    seed: Option<u64>,
    search: Option<SearchConfig>,
    quadrature: Option<QuadratureConfig>,
}

/// Flags merged over the config file.
struct Context {
    file: FileConfig,
    search: SearchConfig,
    quadrature: QuadratureConfig,
}

impl Context {
    fn load(path: Option<&Path>) -> Result<Self> {
        let file: FileConfig = match path {
            Some(p) => serde_json::from_str(&std::fs::read_to_string(p)?)?,
            None => FileConfig::default(),
        };
        let search = file.search.unwrap_or_default();
        search.validate()?;
        let quadrature = file.quadrature.unwrap_or_else(QuadratureConfig::identity);
        Ok(Self {
            file,
            search,
            quadrature,
        })
    }

    fn params(&self, c: &Common) -> Result<AmbientParams> {
        let n = c.n.or(self.file.n).ok_or_else(|| missing("--n"))?;
        let beta = c.beta.or(self.file.beta).ok_or_else(|| missing("--beta"))?;
        AmbientParams::new(n, beta)
    }

    fn profile_path(&self, c: &Common) -> Result<PathBuf> {
        c.profile
            .clone()
            .or_else(|| self.file.profile.clone())
            .ok_or_else(|| missing("--profile"))
    }

    fn profile(&self, c: &Common) -> Result<(PathBuf, RadialProfile)> {
        let path = self.profile_path(c)?;
        let profile = load_profile_file(&path)?;
        Ok((path, profile))
    }

    fn grid(&self, flag: Option<GridSpec>, profile: &RadialProfile) -> Result<GridSpec> {
        match (flag, &self.file.grid) {
            (Some(g), _) => Ok(g),
            (None, Some(text)) => text.parse(),
            (None, None) => GridSpec::for_support(profile.support_radius(), DEFAULT_GRID_COUNT),
        }
    }

    fn seed(&self, flag: Option<u64>) -> u64 {
        flag.or(self.file.seed).unwrap_or(0)
    }

    fn header(&self, out: &mut dyn Write, command: &str, lines: &[String]) -> io::Result<()> {
        writeln!(out, "# maxvar {command} {}", env!("CARGO_PKG_VERSION"))?;
        for l in lines {
            writeln!(out, "# {l}")?;
        }
        writeln!(out, "# search={}", serde_json::to_string(&self.search).unwrap_or_default())?;
        writeln!(out, "# quadrature={}", serde_json::to_string(&self.quadrature).unwrap_or_default())
    }
}

fn missing(flag: &str) -> Error {
    Error::Input(format!("missing required {flag} (flag or config key)"))
}

/// Plain decimal for moderate magnitudes, exponent form otherwise.
fn num(x: f64) -> String {
    if x != 0.0 && !(1e-4..1e7).contains(&x.abs()) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

fn params_line(p: &AmbientParams) -> String {
    format!("n={} beta={} q={}", p.n, p.beta, p.q)
}

fn open_output(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn check_format(format: Format, allowed: &[Format], command: &str) -> Result<()> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(Error::Input(format!("format {format:?} is not available for {command}")))
    }
}

/// One line of `sweep` output.
#[derive(Debug, Serialize)]
struct SweepRow {
    s: f64,
    value: f64,
    d: f64,
    r: f64,
    contact: &'static str,
    c: f64,
    region: &'static str,
    dmdr_fd: f64,
    dmdr_formula: f64,
    corner_flag: bool,
}

fn sweep_rows(mp: &MaximalProfile) -> Vec<SweepRow> {
    mp.points
        .iter()
        .map(|p| SweepRow {
            s: p.result.s,
            value: p.result.value,
            d: p.result.ball.d,
            r: p.result.ball.r,
            contact: p.result.contact.kind.as_str(),
            c: p.result.contact.c,
            region: p.result.region.as_str(),
            dmdr_fd: p.dmdr_fd,
            dmdr_formula: p.dmdr_formula,
            corner_flag: p.corner,
        })
        .collect()
}

fn write_csv<T: Serialize>(out: &mut dyn Write, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct EvalRow {
    s: f64,
    value: f64,
    d: f64,
    r: f64,
    contact: &'static str,
    c: f64,
    region: &'static str,
    converged: bool,
}

impl From<&BestBallResult> for EvalRow {
    fn from(r: &BestBallResult) -> Self {
        Self {
            s: r.s,
            value: r.value,
            d: r.ball.d,
            r: r.ball.r,
            contact: r.contact.kind.as_str(),
            c: r.contact.c,
            region: r.region.as_str(),
            converged: r.converged,
        }
    }
}

fn cmd_eval(ctx: &Context, common: &Common, s: &[f64], format: Format) -> Result<i32> {
    check_format(format, &[Format::Text, Format::Csv, Format::Json], "eval")?;
    let params = ctx.params(common)?;
    let (path, profile) = ctx.profile(common)?;
    let results: Vec<BestBallResult> = s
        .iter()
        .map(|&x| search(&profile, x, &params, &ctx.search, &ctx.quadrature))
        .collect::<Result<_>>()?;
    let rows: Vec<EvalRow> = results.iter().map(EvalRow::from).collect();
    let mut out = open_output(None)?;
    match format {
        Format::Json => write_json(&mut out, &rows)?,
        Format::Csv => {
            ctx.header(&mut out, "eval", &[params_line(&params), format!("profile={}", path.display())])?;
            write_csv(&mut out, &rows)?;
        }
        Format::Text => {
            for r in &rows {
                writeln!(
                    out,
                    "s={} value={} d={} r={} contact={} c={} region={}",
                    num(r.s),
                    num(r.value),
                    num(r.d),
                    num(r.r),
                    r.contact,
                    num(r.c),
                    r.region
                )?;
            }
        }
    }
    out.flush()?;
    Ok(if results.iter().all(|r| r.converged) { 0 } else { EXIT_NONCONVERGENCE })
}

#[derive(Serialize)]
struct SweepDoc<'a> {
    n: usize,
    beta: f64,
    q: f64,
    grid: String,
    profile: String,
    points: &'a [SweepRow],
}

fn cmd_sweep(ctx: &Context, common: &Common, grid: Option<GridSpec>, out: Option<&Path>, format: Format) -> Result<i32> {
    check_format(format, &[Format::Csv, Format::Json], "sweep")?;
    let params = ctx.params(common)?;
    let (path, profile) = ctx.profile(common)?;
    let grid = ctx.grid(grid, &profile)?;
    let mp = maximal_profile(&profile, &grid.points(), &params, &ctx.search, &ctx.quadrature)?;
    let rows = sweep_rows(&mp);
    let mut w = open_output(out)?;
    match format {
        Format::Json => write_json(
            &mut w,
            &SweepDoc {
                n: params.n,
                beta: params.beta,
                q: params.q,
                grid: grid.to_string(),
                profile: path.display().to_string(),
                points: &rows,
            },
        )?,
        _ => {
            ctx.header(
                &mut w,
                "sweep",
                &[
                    params_line(&params),
                    format!("profile={}", path.display()),
                    format!("grid={grid}"),
                    "columns: s,value,d,r,contact,c,region,dmdr_fd,dmdr_formula,corner_flag".into(),
                ],
            )?;
            write_csv(&mut w, &rows)?;
        }
    }
    w.flush()?;
    Ok(if mp.unconverged().is_empty() { 0 } else { EXIT_NONCONVERGENCE })
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    ctx: &Context,
    common: &Common,
    suite: SuiteArg,
    seed: Option<u64>,
    random_balls: usize,
    grid: Option<GridSpec>,
    out: Option<&Path>,
    format: Format,
) -> Result<i32> {
    check_format(format, &[Format::Text, Format::Json], "verify")?;
    let params = ctx.params(common)?;
    let (path, profile) = ctx.profile(common)?;
    let grid = ctx.grid(grid, &profile)?;
    let seed = ctx.seed(seed);
    let cfg = SuiteConfig {
        seed,
        random_balls,
        grid: grid.points(),
        search: ctx.search,
        quadrature: ctx.quadrature,
    };
    let report = run_suite(&profile, &params, suite.suite(), &cfg)?;
    let mut w = open_output(out)?;
    match format {
        Format::Json => write_json(&mut w, &report)?,
        _ => {
            ctx.header(
                &mut w,
                "verify",
                &[
                    params_line(&params),
                    format!("profile={}", path.display()),
                    format!("grid={grid}"),
                    format!("suite={suite:?} seed={seed} random_balls={random_balls}").to_lowercase(),
                ],
            )?;
            w.write_all(render_text(&report.reports).as_bytes())?;
            let c = report.counts;
            writeln!(
                w,
                "# pass={} fail={} not_applicable={} informational={}",
                c.pass, c.fail, c.not_applicable, c.informational
            )?;
        }
    }
    w.flush()?;
    Ok(if report.all_passed() { 0 } else { EXIT_ASSERTION })
}

fn render_variation(r: &VariationReport) -> String {
    let value = serde_json::to_value(r).unwrap_or_default();
    let mut s = String::new();
    if let Some(map) = value.as_object() {
        for (k, v) in map {
            s.push_str(&format!("{k}: {v}\n"));
        }
    }
    s
}

fn cmd_ratio(
    ctx: &Context,
    common: &Common,
    grid: Option<GridSpec>,
    study: Study,
    out: Option<&Path>,
    format: Format,
) -> Result<i32> {
    check_format(format, &[Format::Text, Format::Json], "ratio")?;
    let params = ctx.params(common)?;
    let (path, profile) = ctx.profile(common)?;
    let grid = ctx.grid(grid, &profile)?;
    let report = variation_report(&profile, &params, &grid, &study, &ctx.search, &ctx.quadrature)?;
    let mut w = open_output(out)?;
    match format {
        Format::Json => write_json(&mut w, &report)?,
        _ => {
            ctx.header(&mut w, "ratio", &[params_line(&params), format!("profile={}", path.display())])?;
            w.write_all(render_variation(&report).as_bytes())?;
        }
    }
    w.flush()?;
    Ok(0)
}

#[derive(Serialize)]
struct OneDRow {
    s: f64,
    oracle: f64,
    search: f64,
    rel_diff: f64,
    passed: bool,
}

#[derive(Serialize)]
struct McRow {
    mean: f64,
    stderr: f64,
    ball_average: f64,
    z: f64,
    passed: bool,
}

#[derive(Serialize)]
struct DenseRow {
    dense: f64,
    ball_average: f64,
    abs_diff: f64,
    passed: bool,
}

#[allow(clippy::too_many_arguments)]
fn cmd_oracle(
    ctx: &Context,
    mode: OracleMode,
    common: &Common,
    s: &[f64],
    d: Option<f64>,
    r: Option<f64>,
    samples: usize,
    seed: Option<u64>,
    resolution: usize,
) -> Result<i32> {
    let (_, profile) = ctx.profile(common)?;
    let mut w = open_output(None)?;
    let mut ok = true;
    match mode {
        OracleMode::OneD => {
            let n = common.n.or(ctx.file.n).unwrap_or(1);
            if n != 1 {
                return Err(Error::Input("1d oracle mode needs n = 1".into()));
            }
            let params = ctx.params(&Common {
                n: Some(1),
                ..common.clone()
            })?;
            if s.is_empty() {
                return Err(missing("--s"));
            }
            writeln!(w, "# oracle 1d beta={} resolution={resolution} tolerance={ORACLE_1D_TOL}", params.beta)?;
            let mut rows = Vec::with_capacity(s.len());
            for &x in s {
                let oracle = oracle_1d_maximal(&profile, x, params.beta, resolution)?;
                let fast = search(&profile, x, &params, &ctx.search, &ctx.quadrature)?.value;
                let rel_diff = (oracle - fast).abs() / oracle.abs().max(fast.abs()).max(1e-300);
                let passed = rel_diff <= ORACLE_1D_TOL;
                ok &= passed;
                rows.push(OneDRow {
                    s: x,
                    oracle,
                    search: fast,
                    rel_diff,
                    passed,
                });
            }
            write_csv(&mut w, &rows)?;
        }
        OracleMode::Mc | OracleMode::Dense2d => {
            let ball = AxisBall {
                d: d.ok_or_else(|| missing("--d"))?,
                r: r.ok_or_else(|| missing("--r"))?,
            };
            if !(ball.d >= 0.0 && ball.r > 0.0) {
                return Err(Error::Input("need d >= 0 and r > 0".into()));
            }
            let n = common.n.or(ctx.file.n).ok_or_else(|| missing("--n"))?;
            // beta plays no role in averages
            let beta = common.beta.or(ctx.file.beta).unwrap_or(0.5 * n as f64);
            let params = AmbientParams::new(n, beta)?;
            let fast = ball_average(&profile, &ball, &params, &ctx.quadrature)?;
            if mode == OracleMode::Mc {
                let seed = ctx.seed(seed);
                let (mean, se) = oracle_mc_ball_average(&profile, &ball, &params, samples, seed)?;
                let z = if se > 0.0 { (fast - mean).abs() / se } else { 0.0 };
                let pass = if se > 0.0 { z <= 3.0 } else { (fast - mean).abs() <= 1e-12 };
                ok &= pass;
                writeln!(w, "# oracle mc n={n} d={} r={} samples={samples} seed={seed}", ball.d, ball.r)?;
                write_csv(
                    &mut w,
                    &[McRow {
                        mean,
                        stderr: se,
                        ball_average: fast,
                        z,
                        passed: pass,
                    }],
                )?;
            } else {
                if n != 2 {
                    return Err(Error::Input("dense2d oracle mode needs n = 2".into()));
                }
                let dense = oracle_dense_average_2d(&profile, &ball, resolution)?;
                let diff = (fast - dense).abs();
                let pass = diff <= ORACLE_DENSE_TOL * profile.max_value();
                ok &= pass;
                writeln!(w, "# oracle dense2d d={} r={} resolution={resolution}", ball.d, ball.r)?;
                write_csv(
                    &mut w,
                    &[DenseRow {
                        dense,
                        ball_average: fast,
                        abs_diff: diff,
                        passed: pass,
                    }],
                )?;
            }
        }
    }
    w.flush()?;
    Ok(if ok { 0 } else { EXIT_ASSERTION })
}

#[derive(Serialize)]
struct FamilyCsvRow<'a> {
    profile: &'a str,
    n: usize,
    beta: f64,
    q: Option<f64>,
    lq_norm_dm: Option<f64>,
    l1_norm_df: Option<f64>,
    ratio: Option<f64>,
    corners: Option<usize>,
    zero_derivative: Option<usize>,
    e1: Option<usize>,
    e2: Option<usize>,
    e3: Option<usize>,
    refinement_deviation: Option<f64>,
    dilation_deviation: Option<f64>,
    error: Option<&'a str>,
}

fn cmd_family(ctx: &Context, spec_path: &Path, seed: Option<u64>, out: Option<&Path>, format: Format) -> Result<i32> {
    check_format(format, &[Format::Csv, Format::Json], "family")?;
    let spec = FamilySpec::from_file(spec_path)?;
    let seed = ctx.seed(seed);
    let table = family_sweep(&spec, seed, &ctx.search, &ctx.quadrature)?;
    let mut w = open_output(out)?;
    match format {
        Format::Json => write_json(&mut w, &table)?,
        _ => {
            ctx.header(&mut w, "family", &[format!("spec={} seed={seed}", spec_path.display())])?;
            for m in &table.maxima {
                writeln!(w, "# max ratio n={} beta={}: {} ({} failures)", m.n, m.beta, m.max_ratio, m.failures)?;
            }
            let rows: Vec<FamilyCsvRow> = table
                .rows
                .iter()
                .map(|r| {
                    let rep = r.report.as_ref();
                    FamilyCsvRow {
                        profile: &r.profile,
                        n: r.n,
                        beta: r.beta,
                        q: rep.map(|x| x.q),
                        lq_norm_dm: rep.map(|x| x.lq_norm_dm),
                        l1_norm_df: rep.map(|x| x.l1_norm_df),
                        ratio: rep.map(|x| x.ratio),
                        corners: rep.map(|x| x.corner_count),
                        zero_derivative: rep.map(|x| x.region_histogram.zero_derivative),
                        e1: rep.map(|x| x.region_histogram.e1),
                        e2: rep.map(|x| x.region_histogram.e2),
                        e3: rep.map(|x| x.region_histogram.e3),
                        refinement_deviation: rep.and_then(|x| x.refinement_deviation),
                        dilation_deviation: rep.and_then(|x| x.dilation_deviation),
                        error: r.error.as_deref(),
                    }
                })
                .collect();
            write_csv(&mut w, &rows)?;
        }
    }
    w.flush()?;
    let failed = table.rows.iter().any(|r| r.error.is_some());
    Ok(if failed { EXIT_NONCONVERGENCE } else { 0 })
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Unconverged(_) | Error::Quadrature { .. } => EXIT_NONCONVERGENCE,
        _ => EXIT_USAGE,
    }
}

fn configure_threads() -> Result<()> {
    let Ok(text) = std::env::var("MAXVAR_THREADS") else {
        return Ok(());
    };
    let threads: usize = text
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Error::Input(format!("MAXVAR_THREADS must be a positive integer, got {text:?}")))?;
    // a pool built earlier in the process stays in place
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

fn dispatch(cli: Cli) -> Result<i32> {
    configure_threads()?;
    let ctx = Context::load(cli.config.as_deref())?;
    match cli.command {
        Command::Eval { common, s, format } => cmd_eval(&ctx, &common, &s, format),
        Command::Sweep {
            common,
            grid,
            out,
            format,
        } => cmd_sweep(&ctx, &common, grid, out.as_deref(), format),
        Command::Verify {
            common,
            suite,
            seed,
            random_balls,
            grid,
            out,
            format,
        } => cmd_verify(&ctx, &common, suite, seed, random_balls, grid, out.as_deref(), format),
        Command::Ratio {
            common,
            grid,
            refine,
            dilate,
            out,
            format,
        } => cmd_ratio(&ctx, &common, grid, Study { refine, dilate }, out.as_deref(), format),
        Command::Oracle {
            mode,
            common,
            s,
            d,
            r,
            samples,
            seed,
            resolution,
        } => cmd_oracle(&ctx, mode, &common, &s, d, r, samples, seed, resolution),
        Command::Family {
            spec,
            seed,
            out,
            format,
        } => cmd_family(&ctx, &spec, seed, out.as_deref(), format),
    }
}

/// Parses `args` and runs the command; returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("maxvar: {e}");
            exit_code(&e)
        }
    }
}
