//! Config parsing, command dispatch and bit-stable CSV/SVG serialization.
//!
//! The config is a single flat JSON object of numeric keys mirroring the
//! physical symbols (`V1a`, `gamma_c1`, ...) plus optional `solver`, `sweep`
//! and `output` sub-objects. Every output artifact embeds the fully resolved
//! config, so any result file is sufficient to re-run the computation.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::analysis::{
    fano_asymmetry, port_coefficients, sweep_1d, sweep_2d, transfer_window, Axis,
    Solver, SweepResult, SweepSpec, FIELD_NAMES,
};
use crate::closed_form::{closed_form_amplitudes, Variant};
use crate::model::{NetworkConfig, PhotonInput, ResonatorSpec};
use crate::oracle::compare_with_closed_form;
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_TOLERANCE: i32 = 4;

/// Raw JSON schema. Unknown keys are rejected; all numeric values must be
/// finite.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    omega_c1: Option<f64>,
    omega_c2: Option<f64>,
    gamma_c1: Option<f64>,
    gamma_c2: Option<f64>,
    h1: Option<f64>,
    h2: Option<f64>,
    #[serde(rename = "V1a")]
    v1a: Option<f64>,
    #[serde(rename = "V1b")]
    v1b: Option<f64>,
    #[serde(rename = "V2a")]
    v2a: Option<f64>,
    #[serde(rename = "V2b")]
    v2b: Option<f64>,
    d: Option<f64>,
    v_g: Option<f64>,
    d_unit_factor: Option<f64>,
    delta_omega: Option<f64>,
    solver: Option<String>,
    sweep: Option<RawSweep>,
    output: Option<RawOutput>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    axis1: Option<RawAxis>,
    axis2: Option<RawAxis>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAxis {
    name: String,
    from: f64,
    to: f64,
    points: usize,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    csv: Option<String>,
    svg: Option<String>,
    precision: Option<usize>,
}

/// Fully resolved run configuration, defaults applied.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub network: NetworkConfig,
    pub input: PhotonInput,
    pub solver: Solver,
    pub axis_1: Option<Axis>,
    pub axis_2: Option<Axis>,
    pub csv_path: Option<String>,
    pub svg_path: Option<String>,
    pub precision: usize,
}

/// Configuration-layer errors, kept separate from the numerical ones so the
/// CLI can map them to distinct exit codes.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("config parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(#[from] Error),
    #[error("unknown solver `{0}` (expected closed, oracle or verbatim)")]
    UnknownSolver(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

fn solver_from_name(name: &str) -> std::result::Result<Solver, ConfigError> {
    match name {
        "closed" | "closed_corrected" => Ok(Solver::ClosedCorrected),
        "verbatim" | "closed_verbatim" => Ok(Solver::ClosedVerbatim),
        "oracle" => Ok(Solver::Oracle),
        other => Err(ConfigError::UnknownSolver(other.to_string())),
    }
}

/// Parses and validates the JSON run configuration, applying defaults
/// (omega_c1 = 1, v_g = 1, d_unit_factor = 1, gamma = 0, precision = 12).
pub fn parse_config(text: &str) -> std::result::Result<RunConfig, ConfigError> {
    let raw: RawConfig = serde_json::from_str(text)?;

    let finite = |key: &str, v: Option<f64>| -> std::result::Result<Option<f64>, ConfigError> {
        match v {
            Some(x) if !x.is_finite() => Err(ConfigError::Invalid(Error::InvalidParameter {
                key: key.into(),
                message: "must be finite".into(),
            })),
            other => Ok(other),
        }
    };
    let nonneg = |key: &str, v: f64| -> std::result::Result<f64, ConfigError> {
        if v < 0.0 {
            Err(ConfigError::Invalid(Error::InvalidParameter {
                key: key.into(),
                message: "must be >= 0".into(),
            }))
        } else {
            Ok(v)
        }
    };

    let omega_c1 = finite("omega_c1", raw.omega_c1)?.unwrap_or(1.0);
    let omega_c2 = finite("omega_c2", raw.omega_c2)?.unwrap_or(omega_c1);
    let network = NetworkConfig {
        resonator_1: ResonatorSpec {
            omega_c: omega_c1,
            gamma_c: nonneg("gamma_c1", finite("gamma_c1", raw.gamma_c1)?.unwrap_or(0.0))?,
            h: finite("h1", raw.h1)?.unwrap_or(0.0),
            v_a: nonneg("V1a", finite("V1a", raw.v1a)?.unwrap_or(0.0))?,
            v_b: nonneg("V1b", finite("V1b", raw.v1b)?.unwrap_or(0.0))?,
        },
        resonator_2: ResonatorSpec {
            omega_c: omega_c2,
            gamma_c: nonneg("gamma_c2", finite("gamma_c2", raw.gamma_c2)?.unwrap_or(0.0))?,
            h: finite("h2", raw.h2)?.unwrap_or(0.0),
            v_a: nonneg("V2a", finite("V2a", raw.v2a)?.unwrap_or(0.0))?,
            v_b: nonneg("V2b", finite("V2b", raw.v2b)?.unwrap_or(0.0))?,
        },
        d: nonneg("d", finite("d", raw.d)?.unwrap_or(0.0))?,
        v_g: finite("v_g", raw.v_g)?.unwrap_or(1.0),
        d_unit_factor: finite("d_unit_factor", raw.d_unit_factor)?.unwrap_or(1.0),
    };
    network.validate()?;

    let input = PhotonInput::new(finite("delta_omega", raw.delta_omega)?.unwrap_or(0.0));
    let solver = match &raw.solver {
        Some(name) => solver_from_name(name)?,
        None => Solver::ClosedCorrected,
    };

    let to_axis = |ra: &RawAxis| Axis {
        name: ra.name.clone(),
        from: ra.from,
        to: ra.to,
        points: ra.points,
    };
    let sweep = raw.sweep.unwrap_or_default();
    let axis_1 = sweep.axis1.as_ref().map(to_axis);
    let axis_2 = sweep.axis2.as_ref().map(to_axis);
    if let Some(a) = &axis_1 {
        a.validate()?;
    }
    if let Some(a) = &axis_2 {
        a.validate()?;
    }

    let output = raw.output.unwrap_or_default();
    Ok(RunConfig {
        network,
        input,
        solver,
        axis_1,
        axis_2,
        csv_path: output.csv,
        svg_path: output.svg,
        precision: output.precision.unwrap_or(12),
    })
}

/// Canonical single-line JSON echo of a fully resolved configuration. Key
/// order is fixed; floats use the shortest round-trip representation, so the
/// echo is byte-stable.
pub fn config_echo(
    cfg: &NetworkConfig,
    input: &PhotonInput,
    solver: Solver,
    axis_1: Option<&Axis>,
    axis_2: Option<&Axis>,
) -> String {
    let mut s = String::from("{");
    let _ = write!(
        s,
        "\"omega_c1\":{},\"omega_c2\":{},\"gamma_c1\":{},\"gamma_c2\":{},\"h1\":{},\"h2\":{},\
         \"V1a\":{},\"V1b\":{},\"V2a\":{},\"V2b\":{},\"d\":{},\"v_g\":{},\"d_unit_factor\":{},\
         \"delta_omega\":{},\"solver\":\"{}\"",
        cfg.resonator_1.omega_c,
        cfg.resonator_2.omega_c,
        cfg.resonator_1.gamma_c,
        cfg.resonator_2.gamma_c,
        cfg.resonator_1.h,
        cfg.resonator_2.h,
        cfg.resonator_1.v_a,
        cfg.resonator_1.v_b,
        cfg.resonator_2.v_a,
        cfg.resonator_2.v_b,
        cfg.d,
        cfg.v_g,
        cfg.d_unit_factor,
        input.delta_omega,
        solver.name(),
    );
    let mut axis_json = |label: &str, axis: Option<&Axis>| {
        if let Some(a) = axis {
            let _ = write!(
                s,
                ",\"{label}\":{{\"name\":\"{}\",\"from\":{},\"to\":{},\"points\":{}}}",
                a.name, a.from, a.to, a.points
            );
        }
    };
    axis_json("axis1", axis_1);
    axis_json("axis2", axis_2);
    s.push('}');
    s
}

/// Serializes a sweep to CSV: a `# config:` echo line, a column header, then
/// one row per grid point in fixed decimal notation with `precision` digits.
/// LF line endings; byte-identical across runs for identical inputs.
pub fn emit_csv(result: &SweepResult, precision: usize) -> String {
    let echo = config_echo(
        &result.base_config,
        &result.base_input,
        result.solver,
        Some(&result.axis_1),
        result.axis_2.as_ref(),
    );
    let mut out = String::new();
    let _ = writeln!(out, "# config: {echo}");
    match &result.axis_2 {
        Some(a2) => {
            let _ = writeln!(
                out,
                "{},{},T_a,R_a,T_b,R_b,P_a,P_b,L,residual,flag",
                result.axis_1.name, a2.name
            );
        }
        None => {
            let _ = writeln!(out, "{},T_a,R_a,T_b,R_b,P_a,P_b,L,residual,flag", result.axis_1.name);
        }
    }
    for (coord, row) in result.coords.iter().zip(&result.rows) {
        let c = &row.coeffs;
        let _ = write!(out, "{:.precision$}", coord.0);
        if let Some(c2) = coord.1 {
            let _ = write!(out, ",{c2:.precision$}");
        }
        for v in [c.t_a, c.r_a, c.t_b, c.r_b, c.p_a, c.p_b, c.loss, row.residual] {
            let mut s = format!("{v:.precision$}");
            // A value rounding to zero prints without a sign, so solvers that
            // differ only below the printed precision emit identical bytes.
            if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
                s.remove(0);
            }
            let _ = write!(out, ",{s}");
        }
        let flag = row.error.as_deref().unwrap_or("ok");
        let _ = writeln!(out, ",{flag}");
    }
    out
}

// ---------------------------------------------------------------------------
// SVG rendering (presentational only; no acceptance test reads pixels).

const SVG_W: f64 = 720.0;
const SVG_H: f64 = 480.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 130.0;
const MARGIN_T: f64 = 30.0;
const MARGIN_B: f64 = 50.0;

const LINE_COLORS: [&str; 7] =
    ["#c8a400", "#00a0a0", "#202020", "#109030", "#2040c0", "#c03020", "#808080"];

/// Renders a sweep as a standalone SVG: a line plot per field for 1-D
/// results, a color map of the first field for 2-D results. The resolved
/// config echo is embedded as a metadata comment.
pub fn emit_svg(result: &SweepResult, fields: &[&str]) -> Result<String> {
    if fields.is_empty() {
        return Err(Error::InvalidParameter {
            key: "fields".into(),
            message: "at least one field must be plotted".into(),
        });
    }
    for f in fields {
        if !FIELD_NAMES.contains(f) {
            return Err(Error::UnknownField((*f).to_string()));
        }
    }
    let echo = config_echo(
        &result.base_config,
        &result.base_input,
        result.solver,
        Some(&result.axis_1),
        result.axis_2.as_ref(),
    );
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_W}\" height=\"{SVG_H}\" \
         viewBox=\"0 0 {SVG_W} {SVG_H}\">"
    );
    let _ = writeln!(s, "<!-- config: {echo} -->");
    let _ = writeln!(s, "<rect width=\"{SVG_W}\" height=\"{SVG_H}\" fill=\"white\"/>");
    match &result.axis_2 {
        None => render_lines(&mut s, result, fields)?,
        Some(_) => render_map(&mut s, result, fields[0])?,
    }
    let _ = writeln!(s, "</svg>");
    Ok(s)
}

fn plot_frame(s: &mut String, x_label: &str, y_label: &str) {
    let (x0, y0) = (MARGIN_L, SVG_H - MARGIN_B);
    let (x1, y1) = (SVG_W - MARGIN_R, MARGIN_T);
    let _ = writeln!(
        s,
        "<rect x=\"{x0}\" y=\"{y1}\" width=\"{:.3}\" height=\"{:.3}\" fill=\"none\" \
         stroke=\"black\"/>",
        x1 - x0,
        y0 - y1
    );
    let _ = writeln!(
        s,
        "<text x=\"{:.3}\" y=\"{:.3}\" text-anchor=\"middle\" font-size=\"14\">{x_label}</text>",
        (x0 + x1) / 2.0,
        SVG_H - 10.0
    );
    let _ = writeln!(
        s,
        "<text x=\"18\" y=\"{:.3}\" text-anchor=\"middle\" font-size=\"14\" \
         transform=\"rotate(-90 18 {:.3})\">{y_label}</text>",
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );
}

fn render_lines(s: &mut String, result: &SweepResult, fields: &[&str]) -> Result<()> {
    let axis = &result.axis_1;
    let (x0, y0) = (MARGIN_L, SVG_H - MARGIN_B);
    let (x1, y1) = (SVG_W - MARGIN_R, MARGIN_T);
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    let mut series: Vec<Vec<f64>> = Vec::new();
    for field in fields {
        let vals: Vec<f64> = result
            .rows
            .iter()
            .map(|r| crate::analysis::field_value(&r.coeffs, field))
            .collect::<Result<_>>()?;
        for &v in &vals {
            y_min = y_min.min(v);
            y_max = y_max.max(v);
        }
        series.push(vals);
    }
    if !(y_max > y_min) {
        y_max = y_min + 1.0;
    }
    let pad = 0.05 * (y_max - y_min);
    let (lo, hi) = (y_min - pad, y_max + pad);
    let sx = |x: f64| x0 + (x - axis.from) / (axis.to - axis.from) * (x1 - x0);
    let sy = |y: f64| y0 - (y - lo) / (hi - lo) * (y0 - y1);

    plot_frame(s, &axis.name, "coefficient");
    // Min/max tick labels.
    let _ = writeln!(
        s,
        "<text x=\"{x0:.3}\" y=\"{:.3}\" text-anchor=\"middle\" font-size=\"12\">{:.3}</text>",
        y0 + 18.0,
        axis.from
    );
    let _ = writeln!(
        s,
        "<text x=\"{x1:.3}\" y=\"{:.3}\" text-anchor=\"middle\" font-size=\"12\">{:.3}</text>",
        y0 + 18.0,
        axis.to
    );
    let _ = writeln!(
        s,
        "<text x=\"{:.3}\" y=\"{:.3}\" text-anchor=\"end\" font-size=\"12\">{lo:.3}</text>",
        x0 - 6.0,
        y0 + 4.0
    );
    let _ = writeln!(
        s,
        "<text x=\"{:.3}\" y=\"{:.3}\" text-anchor=\"end\" font-size=\"12\">{hi:.3}</text>",
        x0 - 6.0,
        y1 + 4.0
    );

    for (si, (field, vals)) in fields.iter().zip(&series).enumerate() {
        let color = LINE_COLORS[si % LINE_COLORS.len()];
        let mut path = String::new();
        for (i, &v) in vals.iter().enumerate() {
            let cmd = if i == 0 { 'M' } else { 'L' };
            let _ = write!(path, "{cmd}{:.3} {:.3} ", sx(result.coords[i].0), sy(v));
        }
        let _ = writeln!(
            s,
            "<path d=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
            path.trim_end()
        );
        let ly = MARGIN_T + 18.0 * (si as f64 + 1.0);
        let lx = SVG_W - MARGIN_R + 12.0;
        let _ = writeln!(
            s,
            "<line x1=\"{lx}\" y1=\"{ly}\" x2=\"{:.3}\" y2=\"{ly}\" stroke=\"{color}\" \
             stroke-width=\"2\"/>",
            lx + 22.0
        );
        let _ = writeln!(
            s,
            "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"12\">{field}</text>",
            lx + 28.0,
            ly + 4.0
        );
    }
    Ok(())
}

/// Three-stop blue-white-red map over [0, 1].
fn heat_color(v: f64) -> String {
    let v = v.clamp(0.0, 1.0);
    let (r, g, b) = if v < 0.5 {
        let t = v / 0.5;
        (
            (40.0 + t * (245.0 - 40.0)) as u8,
            (60.0 + t * (245.0 - 60.0)) as u8,
            (160.0 + t * (245.0 - 160.0)) as u8,
        )
    } else {
        let t = (v - 0.5) / 0.5;
        (
            (245.0 - t * (245.0 - 190.0)) as u8,
            (245.0 - t * (245.0 - 30.0)) as u8,
            (245.0 - t * (245.0 - 40.0)) as u8,
        )
    };
    format!("#{r:02x}{g:02x}{b:02x}")
}

fn render_map(s: &mut String, result: &SweepResult, field: &str) -> Result<()> {
    let a1 = &result.axis_1;
    let a2 = result.axis_2.as_ref().expect("2-D result");
    let (x0, y0) = (MARGIN_L, SVG_H - MARGIN_B);
    let (x1, y1) = (SVG_W - MARGIN_R, MARGIN_T);
    plot_frame(s, &a1.name, &a2.name);
    let cell_w = (x1 - x0) / a1.points as f64;
    let cell_h = (y0 - y1) / a2.points as f64;
    for i1 in 0..a1.points {
        for i2 in 0..a2.points {
            let row = &result.rows[i1 * a2.points + i2];
            let v = crate::analysis::field_value(&row.coeffs, field)?;
            let x = x0 + i1 as f64 * cell_w;
            let y = y0 - (i2 + 1) as f64 * cell_h;
            let _ = writeln!(
                s,
                "<rect x=\"{x:.3}\" y=\"{y:.3}\" width=\"{:.3}\" height=\"{:.3}\" fill=\"{}\"/>",
                cell_w + 0.05,
                cell_h + 0.05,
                heat_color(v)
            );
        }
    }
    let _ = writeln!(
        s,
        "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"13\">{field} in [0,1], blue = 0, red = 1\
         </text>",
        SVG_W - MARGIN_R + 10.0,
        MARGIN_T + 16.0
    );
    // Corner tick labels.
    let _ = writeln!(
        s,
        "<text x=\"{x0:.3}\" y=\"{:.3}\" text-anchor=\"middle\" font-size=\"12\">{:.3}</text>",
        y0 + 18.0,
        a1.from
    );
    let _ = writeln!(
        s,
        "<text x=\"{x1:.3}\" y=\"{:.3}\" text-anchor=\"middle\" font-size=\"12\">{:.3}</text>",
        y0 + 18.0,
        a1.to
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// Command-line interface.

#[derive(Parser, Debug)]
#[command(
    name = "router",
    about = "Single-photon routing through two waveguides coupled to two whispering-gallery \
             resonators",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct CommonArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Sweep axis parameter name (overrides the config's axis1).
    #[arg(long)]
    axis: Option<String>,
    /// Axis start.
    #[arg(long, allow_negative_numbers = true)]
    from: Option<f64>,
    /// Axis end.
    #[arg(long, allow_negative_numbers = true)]
    to: Option<f64>,
    /// Axis point count.
    #[arg(long)]
    points: Option<usize>,
    /// CSV output path (defaults to the config's output.csv, else stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// SVG output path.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Solver: closed | oracle | verbatim.
    #[arg(long)]
    solver: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the four outer amplitudes and port coefficients for one point.
    Amplitudes(CommonArgs),
    /// 1-D parameter sweep to CSV (and optionally SVG).
    Sweep(CommonArgs),
    /// 2-D parameter sweep to CSV (and optionally SVG).
    Sweep2d(CommonArgs),
    /// Closed-form vs oracle comparison over seeded random draws.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of random draws.
        #[arg(long, default_value_t = 1000)]
        draws: usize,
        /// RNG seed.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Maximum allowed relative deviation.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Fano asymmetry metric of a detuning spectrum (field P_b).
    Fano(CommonArgs),
    /// Transfer-window threshold h* with P_b > 0.5, by bisection.
    Window(CommonArgs),
}

fn load_config(common: &CommonArgs) -> std::result::Result<RunConfig, ConfigError> {
    let mut run = match &common.config {
        Some(path) => parse_config(&std::fs::read_to_string(path)?)?,
        None => parse_config("{}")?,
    };
    if let Some(solver) = &common.solver {
        run.solver = solver_from_name(solver)?;
    }
    if let Some(name) = &common.axis {
        let axis = Axis {
            name: name.clone(),
            from: common.from.unwrap_or(0.0),
            to: common.to.unwrap_or(1.0),
            points: common.points.unwrap_or(101),
        };
        axis.validate()?;
        run.axis_1 = Some(axis);
    } else if let (Some(axis), Some(from), Some(to)) = (&run.axis_1, common.from, common.to) {
        let mut axis = axis.clone();
        axis.from = from;
        axis.to = to;
        if let Some(points) = common.points {
            axis.points = points;
        }
        axis.validate()?;
        run.axis_1 = Some(axis);
    }
    if let Some(out) = &common.out {
        run.csv_path = Some(out.display().to_string());
    }
    if let Some(svg) = &common.svg {
        run.svg_path = Some(svg.display().to_string());
    }
    Ok(run)
}

fn numerical_exit(e: &Error) -> i32 {
    match e {
        Error::DegenerateDenominator { .. }
        | Error::SingularMatrix { .. }
        | Error::ResidualTooLarge { .. } => EXIT_NUMERICAL,
        _ => EXIT_CONFIG,
    }
}

fn write_artifact(path: Option<&str>, bytes: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes),
        None => {
            print!("{bytes}");
            Ok(())
        }
    }
}

fn variant_of(solver: Solver) -> Variant {
    match solver {
        Solver::ClosedVerbatim => Variant::Verbatim,
        _ => Variant::Corrected,
    }
}

/// Runs the CLI. Exit codes: 0 success, 1 usage, 2 invalid config,
/// 3 numerical failure, 4 verification tolerance exceeded.
pub fn run_command<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap's rendered help/version output goes to stdout with code 0.
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(CliFailure::Config(e)) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
        Err(CliFailure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            EXIT_USAGE
        }
        Err(CliFailure::Numerical(e)) => {
            eprintln!("error: {e}");
            numerical_exit(&e)
        }
        Err(CliFailure::Io(e)) => {
            eprintln!("io error: {e}");
            EXIT_CONFIG
        }
    }
}

enum CliFailure {
    Config(ConfigError),
    Usage(String),
    Numerical(Error),
    Io(std::io::Error),
}

impl From<ConfigError> for CliFailure {
    fn from(e: ConfigError) -> Self {
        CliFailure::Config(e)
    }
}

impl From<Error> for CliFailure {
    fn from(e: Error) -> Self {
        CliFailure::Numerical(e)
    }
}

impl From<std::io::Error> for CliFailure {
    fn from(e: std::io::Error) -> Self {
        CliFailure::Io(e)
    }
}

fn dispatch(command: Command) -> std::result::Result<i32, CliFailure> {
    match command {
        Command::Amplitudes(common) => {
            let run = load_config(&common)?;
            let amps =
                closed_form_amplitudes(&run.network, &run.input, variant_of(run.solver))?;
            let c = port_coefficients(&amps);
            let p = run.precision;
            println!("# config: {}", config_echo(&run.network, &run.input, run.solver, None, None));
            println!(
                "t_a_re,t_a_im,r_a_re,r_a_im,t_b_re,t_b_im,r_b_re,r_b_im,T_a,R_a,T_b,R_b,P_a,P_b,L"
            );
            println!(
                "{:.p$},{:.p$},{:.p$},{:.p$},{:.p$},{:.p$},{:.p$},{:.p$},{:.p$},{:.p$},{:.p$},{:.p$},{:.p$},{:.p$},{:.p$}",
                amps.t_a.re,
                amps.t_a.im,
                amps.r_a.re,
                amps.r_a.im,
                amps.t_b.re,
                amps.t_b.im,
                amps.r_b.re,
                amps.r_b.im,
                c.t_a,
                c.r_a,
                c.t_b,
                c.r_b,
                c.p_a,
                c.p_b,
                c.loss,
            );
            Ok(EXIT_OK)
        }
        Command::Sweep(common) => {
            let run = load_config(&common)?;
            let axis = run.axis_1.clone().ok_or_else(|| {
                CliFailure::Usage("sweep needs an axis (--axis or config sweep.axis1)".into())
            })?;
            let spec = SweepSpec {
                axis_1: axis,
                axis_2: None,
                solver: run.solver,
                base_config: run.network,
                base_input: run.input,
            };
            let result = sweep_1d(&spec)?;
            write_artifact(run.csv_path.as_deref(), &emit_csv(&result, run.precision))?;
            if let Some(svg) = &run.svg_path {
                let fields = ["T_a", "R_a", "T_b", "R_b", "P_a", "P_b"];
                write_artifact(Some(svg), &emit_svg(&result, &fields)?)?;
            }
            Ok(EXIT_OK)
        }
        Command::Sweep2d(common) => {
            let run = load_config(&common)?;
            let axis_1 = run.axis_1.clone().ok_or_else(|| {
                CliFailure::Usage("sweep2d needs axis1 (--axis or config sweep.axis1)".into())
            })?;
            let axis_2 = run.axis_2.clone().ok_or_else(|| {
                CliFailure::Usage("sweep2d needs a second axis (config sweep.axis2)".into())
            })?;
            let spec = SweepSpec {
                axis_1,
                axis_2: Some(axis_2),
                solver: run.solver,
                base_config: run.network,
                base_input: run.input,
            };
            let result = sweep_2d(&spec)?;
            write_artifact(run.csv_path.as_deref(), &emit_csv(&result, run.precision))?;
            if let Some(svg) = &run.svg_path {
                write_artifact(Some(svg), &emit_svg(&result, &["P_b"])?)?;
            }
            Ok(EXIT_OK)
        }
        Command::Verify { common, draws, seed, tol } => {
            let run = load_config(&common)?;
            let variant = variant_of(run.solver);
            let max_dev = verify_draws(draws, seed, variant)?;
            println!("max_relative_deviation = {max_dev:e} over {draws} draws (seed {seed})");
            if max_dev <= tol {
                Ok(EXIT_OK)
            } else {
                eprintln!("deviation exceeds tolerance {tol:e}");
                Ok(EXIT_TOLERANCE)
            }
        }
        Command::Fano(common) => {
            let run = load_config(&common)?;
            let axis = run.axis_1.clone().ok_or_else(|| {
                CliFailure::Usage("fano needs a delta_omega axis symmetric about 0".into())
            })?;
            let spec = SweepSpec {
                axis_1: axis,
                axis_2: None,
                solver: run.solver,
                base_config: run.network,
                base_input: run.input,
            };
            let result = sweep_1d(&spec)?;
            let a = fano_asymmetry(&result, "P_b")?;
            println!("fano_asymmetry = {a:e}");
            Ok(EXIT_OK)
        }
        Command::Window(common) => {
            let run = load_config(&common)?;
            let axis = run.axis_1.clone().ok_or_else(|| {
                CliFailure::Usage("window needs an h axis giving the search range".into())
            })?;
            let w = transfer_window(&run.network, &run.input, run.solver, (axis.from, axis.to))?;
            println!(
                "h_star = {:.6} ({})",
                w.h_star,
                if w.crossed { "crossing found" } else { "no crossing in range" }
            );
            Ok(EXIT_OK)
        }
    }
}

/// Random-draw comparison between the closed form and the oracle.
///
/// Draw distribution (fixed): V1a, V1b, V2a, V2b ~ U[0,3]; h1, h2 ~ U[0,3];
/// d ~ U[0,25]; delta_omega ~ U[-5,5]; gamma_c1, gamma_c2 ~ U[0,0.3];
/// omega_c1 = omega_c2 = 1, v_g = 1, d_unit_factor = 1.
pub fn verify_draws(draws: usize, seed: u64, variant: Variant) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_dev: f64 = 0.0;
    for _ in 0..draws {
        let cfg = NetworkConfig {
            resonator_1: ResonatorSpec {
                omega_c: 1.0,
                gamma_c: rng.random_range(0.0..0.3),
                h: rng.random_range(0.0..3.0),
                v_a: rng.random_range(0.0..3.0),
                v_b: rng.random_range(0.0..3.0),
            },
            resonator_2: ResonatorSpec {
                omega_c: 1.0,
                gamma_c: rng.random_range(0.0..0.3),
                h: rng.random_range(0.0..3.0),
                v_a: rng.random_range(0.0..3.0),
                v_b: rng.random_range(0.0..3.0),
            },
            d: rng.random_range(0.0..25.0),
            v_g: 1.0,
            d_unit_factor: 1.0,
        };
        let input = PhotonInput::new(rng.random_range(-5.0..5.0));
        max_dev = max_dev.max(compare_with_closed_form(&cfg, &input, variant)?);
    }
    Ok(max_dev)
}

/// Re-serializes a resolved config in the input schema so that
/// parse -> serialize -> parse round-trips.
pub fn serialize_config(run: &RunConfig) -> String {
    let mut s = config_echo(&run.network, &run.input, run.solver, None, None);
    // Splice in sweep/output sub-objects before the closing brace.
    s.pop();
    if run.axis_1.is_some() || run.axis_2.is_some() {
        s.push_str(",\"sweep\":{");
        let mut first = true;
        for (label, axis) in [("axis1", &run.axis_1), ("axis2", &run.axis_2)] {
            if let Some(a) = axis {
                if !first {
                    s.push(',');
                }
                let _ = write!(
                    s,
                    "\"{label}\":{{\"name\":\"{}\",\"from\":{},\"to\":{},\"points\":{}}}",
                    a.name, a.from, a.to, a.points
                );
                first = false;
            }
        }
        s.push('}');
    }
    let _ = write!(s, ",\"output\":{{\"precision\":{}", run.precision);
    if let Some(csv) = &run.csv_path {
        let _ = write!(s, ",\"csv\":{}", serde_json::to_string(csv).unwrap());
    }
    if let Some(svg) = &run.svg_path {
        let _ = write!(s, ",\"svg\":{}", serde_json::to_string(svg).unwrap());
    }
    s.push_str("}}");
    s
}
