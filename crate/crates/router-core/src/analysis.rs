//! Port coefficients and parameter studies: 1-D/2-D sweeps, argmax with
//! quadratic refinement, transfer-window bisection and the Fano asymmetry
//! metric.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_form::{closed_form_with_phase, Variant};
use crate::model::{
    phase_shift, NetworkConfig, OuterAmplitudes, PhotonInput, PortCoefficients,
};
use crate::oracle::solve_with_phase;
use crate::{Error, Result};

/// Which amplitude route a sweep evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Solver {
    #[default]
    ClosedCorrected,
    ClosedVerbatim,
    Oracle,
}

impl Solver {
    pub fn name(&self) -> &'static str {
        match self {
            Solver::ClosedCorrected => "closed_corrected",
            Solver::ClosedVerbatim => "closed_verbatim",
            Solver::Oracle => "oracle",
        }
    }
}

/// One sweep axis: a parameter name plus a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

impl Axis {
    pub fn value_at(&self, i: usize) -> f64 {
        if self.points == 1 {
            return self.from;
        }
        self.from + (self.to - self.from) * (i as f64) / ((self.points - 1) as f64)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(Error::InvalidParameter {
                key: format!("axis `{}`.points", self.name),
                message: "point count must be >= 2".into(),
            });
        }
        if !(self.from.is_finite() && self.to.is_finite()) {
            return Err(Error::InvalidParameter {
                key: format!("axis `{}`", self.name),
                message: "range must be finite".into(),
            });
        }
        parameter_kind(&self.name)?;
        Ok(())
    }
}

/// A full sweep request.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub axis_1: Axis,
    pub axis_2: Option<Axis>,
    pub solver: Solver,
    pub base_config: NetworkConfig,
    pub base_input: PhotonInput,
}

/// One evaluated grid point.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub coeffs: PortCoefficients,
    /// |1 - (T_a + R_a + T_b + R_b)| for lossless points, 0 otherwise
    /// (conservation is not expected once dissipation is on).
    pub residual: f64,
    /// Solver failure at this point, if any; the coefficients are then zero.
    pub error: Option<String>,
}

/// Sweep output: row-major over (axis_1, axis_2).
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub axis_1: Axis,
    pub axis_2: Option<Axis>,
    pub solver: Solver,
    pub base_config: NetworkConfig,
    pub base_input: PhotonInput,
    /// Grid coordinates, one entry per row.
    pub coords: Vec<(f64, Option<f64>)>,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn field(&self, row: &SweepRow, name: &str) -> Result<f64> {
        field_value(&row.coeffs, name)
    }
}

/// Squared magnitudes of the outer amplitudes plus the per-waveguide totals
/// and the loss.
pub fn port_coefficients(amps: &OuterAmplitudes) -> PortCoefficients {
    let t_a = amps.t_a.norm_sqr();
    let r_a = amps.r_a.norm_sqr();
    let t_b = amps.t_b.norm_sqr();
    let r_b = amps.r_b.norm_sqr();
    let p_a = t_a + r_a;
    let p_b = t_b + r_b;
    PortCoefficients { t_a, r_a, t_b, r_b, p_a, p_b, loss: 1.0 - p_a - p_b }
}

pub const FIELD_NAMES: [&str; 7] = ["T_a", "R_a", "T_b", "R_b", "P_a", "P_b", "L"];

pub fn field_value(c: &PortCoefficients, name: &str) -> Result<f64> {
    Ok(match name {
        "T_a" => c.t_a,
        "R_a" => c.r_a,
        "T_b" => c.t_b,
        "R_b" => c.r_b,
        "P_a" => c.p_a,
        "P_b" => c.p_b,
        "L" => c.loss,
        other => return Err(Error::UnknownField(other.to_string())),
    })
}

enum ParamKind {
    DeltaOmega,
    Phi,
    Config(fn(&mut NetworkConfig, f64)),
}

/// Published sweep-axis vocabulary: every flat config key plus the
/// convenience aggregates `h`, `V`, `Va`, `Vb`, `gamma`, the detuning
/// `delta_omega` and the direct phase override `phi`.
fn parameter_kind(name: &str) -> Result<ParamKind> {
    Ok(match name {
        "delta_omega" => ParamKind::DeltaOmega,
        "phi" => ParamKind::Phi,
        "omega_c1" => ParamKind::Config(|c, v| c.resonator_1.omega_c = v),
        "omega_c2" => ParamKind::Config(|c, v| c.resonator_2.omega_c = v),
        "gamma_c1" => ParamKind::Config(|c, v| c.resonator_1.gamma_c = v),
        "gamma_c2" => ParamKind::Config(|c, v| c.resonator_2.gamma_c = v),
        "gamma" => ParamKind::Config(|c, v| {
            c.resonator_1.gamma_c = v;
            c.resonator_2.gamma_c = v;
        }),
        "h1" => ParamKind::Config(|c, v| c.resonator_1.h = v),
        "h2" => ParamKind::Config(|c, v| c.resonator_2.h = v),
        "h" => ParamKind::Config(|c, v| {
            c.resonator_1.h = v;
            c.resonator_2.h = v;
        }),
        "V1a" => ParamKind::Config(|c, v| c.resonator_1.v_a = v),
        "V1b" => ParamKind::Config(|c, v| c.resonator_1.v_b = v),
        "V2a" => ParamKind::Config(|c, v| c.resonator_2.v_a = v),
        "V2b" => ParamKind::Config(|c, v| c.resonator_2.v_b = v),
        "Va" => ParamKind::Config(|c, v| {
            c.resonator_1.v_a = v;
            c.resonator_2.v_a = v;
        }),
        "Vb" => ParamKind::Config(|c, v| {
            c.resonator_1.v_b = v;
            c.resonator_2.v_b = v;
        }),
        "V" => ParamKind::Config(|c, v| {
            c.resonator_1.v_a = v;
            c.resonator_1.v_b = v;
            c.resonator_2.v_a = v;
            c.resonator_2.v_b = v;
        }),
        "d" => ParamKind::Config(|c, v| c.d = v),
        "v_g" => ParamKind::Config(|c, v| c.v_g = v),
        "d_unit_factor" => ParamKind::Config(|c, v| c.d_unit_factor = v),
        other => return Err(Error::UnknownParameter(other.to_string())),
    })
}

struct PointSetup {
    cfg: NetworkConfig,
    input: PhotonInput,
    /// Direct phase override, when a `phi` axis is present.
    phi: Option<f64>,
}

fn apply_axis(setup: &mut PointSetup, name: &str, value: f64) -> Result<()> {
    match parameter_kind(name)? {
        ParamKind::DeltaOmega => setup.input.delta_omega = value,
        ParamKind::Phi => setup.phi = Some(value),
        ParamKind::Config(set) => set(&mut setup.cfg, value),
    }
    Ok(())
}

/// Evaluates one grid point. Solver failures become flagged rows.
fn evaluate_point(spec: &SweepSpec, assignments: &[(&str, f64)]) -> SweepRow {
    let mut setup = PointSetup {
        cfg: spec.base_config,
        input: spec.base_input,
        phi: None,
    };
    for (name, value) in assignments {
        if let Err(e) = apply_axis(&mut setup, name, *value) {
            return error_row(e);
        }
    }
    let phi = setup.phi.unwrap_or_else(|| phase_shift(&setup.cfg, &setup.input));
    let amps = match spec.solver {
        Solver::ClosedCorrected => {
            closed_form_with_phase(&setup.cfg, &setup.input, phi, Variant::Corrected)
        }
        Solver::ClosedVerbatim => {
            closed_form_with_phase(&setup.cfg, &setup.input, phi, Variant::Verbatim)
        }
        Solver::Oracle => solve_with_phase(&setup.cfg, &setup.input, phi).map(|s| s.outer()),
    };
    match amps {
        Ok(amps) => {
            let coeffs = port_coefficients(&amps);
            let lossless =
                setup.cfg.resonator_1.gamma_c == 0.0 && setup.cfg.resonator_2.gamma_c == 0.0;
            let residual = if lossless {
                (1.0 - (coeffs.t_a + coeffs.r_a + coeffs.t_b + coeffs.r_b)).abs()
            } else {
                0.0
            };
            SweepRow { coeffs, residual, error: None }
        }
        Err(e) => error_row(e),
    }
}

fn error_row(e: Error) -> SweepRow {
    let zero = PortCoefficients {
        t_a: 0.0,
        r_a: 0.0,
        t_b: 0.0,
        r_b: 0.0,
        p_a: 0.0,
        p_b: 0.0,
        loss: 0.0,
    };
    SweepRow { coeffs: zero, residual: 0.0, error: Some(compact_error(&e)) }
}

/// Short single-token error tag for the CSV flag column.
fn compact_error(e: &Error) -> String {
    match e {
        Error::DegenerateDenominator { .. } => "degenerate".into(),
        Error::SingularMatrix { .. } => "singular".into(),
        Error::ResidualTooLarge { .. } => "residual".into(),
        _ => "error".into(),
    }
}

/// Runs closures over 0..n, possibly in parallel, but always emitting
/// results in index order. `ROUTER_THREADS` caps the worker count.
fn run_grid<F>(n: usize, eval: F) -> Vec<SweepRow>
where
    F: Fn(usize) -> SweepRow + Sync,
{
    let threads = std::env::var("ROUTER_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&t| t >= 1);
    match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .expect("thread pool")
            .install(|| (0..n).into_par_iter().map(&eval).collect()),
        None => (0..n).into_par_iter().map(&eval).collect(),
    }
}

/// Evaluates the solver over a single axis.
pub fn sweep_1d(spec: &SweepSpec) -> Result<SweepResult> {
    spec.axis_1.validate()?;
    spec.base_config.validate()?;
    let axis = &spec.axis_1;
    let coords: Vec<(f64, Option<f64>)> =
        (0..axis.points).map(|i| (axis.value_at(i), None)).collect();
    let rows = run_grid(axis.points, |i| {
        evaluate_point(spec, &[(axis.name.as_str(), axis.value_at(i))])
    });
    Ok(SweepResult {
        axis_1: spec.axis_1.clone(),
        axis_2: None,
        solver: spec.solver,
        base_config: spec.base_config,
        base_input: spec.base_input,
        coords,
        rows,
    })
}

/// Evaluates the solver over a row-major 2-D grid.
pub fn sweep_2d(spec: &SweepSpec) -> Result<SweepResult> {
    let axis_2 = spec.axis_2.as_ref().ok_or_else(|| Error::InvalidParameter {
        key: "axis_2".into(),
        message: "a 2-D sweep needs a second axis".into(),
    })?;
    spec.axis_1.validate()?;
    axis_2.validate()?;
    spec.base_config.validate()?;
    let (a1, a2) = (&spec.axis_1, axis_2);
    let n = a1.points * a2.points;
    let coords: Vec<(f64, Option<f64>)> = (0..n)
        .map(|i| (a1.value_at(i / a2.points), Some(a2.value_at(i % a2.points))))
        .collect();
    let rows = run_grid(n, |i| {
        let v1 = a1.value_at(i / a2.points);
        let v2 = a2.value_at(i % a2.points);
        evaluate_point(spec, &[(a1.name.as_str(), v1), (a2.name.as_str(), v2)])
    });
    Ok(SweepResult {
        axis_1: a1.clone(),
        axis_2: Some(a2.clone()),
        solver: spec.solver,
        base_config: spec.base_config,
        base_input: spec.base_input,
        coords,
        rows,
    })
}

/// Grid argmax of `field` plus one quadratic refinement step on the
/// surrounding stencil. Ties break toward the smallest coordinates in axis
/// order (strict improvement required while scanning row-major).
pub fn find_max(result: &SweepResult, field: &str) -> Result<((f64, Option<f64>), f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, row) in result.rows.iter().enumerate() {
        if row.error.is_some() {
            continue;
        }
        let v = field_value(&row.coeffs, field)?;
        if best.map_or(true, |(_, bv)| v > bv) {
            best = Some((i, v));
        }
    }
    let (idx, value) = best.ok_or_else(|| Error::UnknownField("empty result".into()))?;

    let get = |i: usize| field_value(&result.rows[i].coeffs, field).unwrap_or(f64::NAN);
    match &result.axis_2 {
        None => {
            let a = &result.axis_1;
            let (coord, val) = refine_1d(idx, a, |i| get(i), value, &result.rows);
            Ok(((coord, None), val))
        }
        Some(a2) => {
            let a1 = &result.axis_1;
            let (i1, i2) = (idx / a2.points, idx % a2.points);
            // Separable refinement through the stencil center.
            let step2 = a2.points;
            let row_ok = |i: usize| result.rows[i].error.is_none();
            let (c1, v1) = if i1 > 0
                && i1 + 1 < a1.points
                && row_ok(idx - step2)
                && row_ok(idx + step2)
            {
                parabola(
                    a1.value_at(i1),
                    a1.value_at(1) - a1.value_at(0),
                    get(idx - step2),
                    value,
                    get(idx + step2),
                )
            } else {
                (a1.value_at(i1), value)
            };
            let (c2, v2) = if i2 > 0 && i2 + 1 < a2.points && row_ok(idx - 1) && row_ok(idx + 1)
            {
                parabola(
                    a2.value_at(i2),
                    a2.value_at(1) - a2.value_at(0),
                    get(idx - 1),
                    value,
                    get(idx + 1),
                )
            } else {
                (a2.value_at(i2), value)
            };
            Ok(((c1, Some(c2)), v1.max(v2)))
        }
    }
}

fn refine_1d(
    idx: usize,
    axis: &Axis,
    get: impl Fn(usize) -> f64,
    value: f64,
    rows: &[SweepRow],
) -> (f64, f64) {
    if idx == 0 || idx + 1 >= axis.points {
        return (axis.value_at(idx), value);
    }
    if rows[idx - 1].error.is_some() || rows[idx + 1].error.is_some() {
        return (axis.value_at(idx), value);
    }
    parabola(
        axis.value_at(idx),
        axis.value_at(1) - axis.value_at(0),
        get(idx - 1),
        value,
        get(idx + 1),
    )
}

/// Vertex of the parabola through three equally spaced samples; falls back to
/// the center when the fit is degenerate or the vertex leaves the stencil.
fn parabola(x0: f64, step: f64, fm: f64, f0: f64, fp: f64) -> (f64, f64) {
    let denom = fm - 2.0 * f0 + fp;
    if denom >= 0.0 || !denom.is_finite() {
        return (x0, f0);
    }
    let offset = 0.5 * (fm - fp) / denom;
    if offset.abs() > 1.0 {
        return (x0, f0);
    }
    let value = f0 - 0.25 * (fm - fp) * offset;
    (x0 + offset * step, value)
}

/// Transfer-window result: the backscattering strength below which
/// P_b > 0.5, plus whether a crossing was actually bracketed in range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferWindow {
    pub h_star: f64,
    pub crossed: bool,
}

/// Finds the supremum h* below which P_b(h) > 0.5 by bisection on
/// g(h) = P_b(h) - 0.5 (h applied to both resonators), to |dh| <= 1e-6.
/// Without a sign change the relevant range endpoint is returned with
/// `crossed = false`.
pub fn transfer_window(
    cfg: &NetworkConfig,
    input: &PhotonInput,
    solver: Solver,
    h_range: (f64, f64),
) -> Result<TransferWindow> {
    let g = |h: f64| -> Result<f64> {
        let mut c = *cfg;
        c.resonator_1.h = h;
        c.resonator_2.h = h;
        let phi = phase_shift(&c, input);
        let amps = match solver {
            Solver::ClosedCorrected => closed_form_with_phase(&c, input, phi, Variant::Corrected)?,
            Solver::ClosedVerbatim => closed_form_with_phase(&c, input, phi, Variant::Verbatim)?,
            Solver::Oracle => solve_with_phase(&c, input, phi)?.outer(),
        };
        let coeffs = port_coefficients(&amps);
        Ok(coeffs.p_b - 0.5)
    };

    let (mut lo, mut hi) = h_range;
    let g_lo = g(lo)?;
    let g_hi = g(hi)?;
    if g_lo <= 0.0 {
        // No window at all in range.
        return Ok(TransferWindow { h_star: lo, crossed: false });
    }
    if g_hi > 0.0 {
        // Window extends past the range.
        return Ok(TransferWindow { h_star: hi, crossed: false });
    }
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if g(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(TransferWindow { h_star: 0.5 * (lo + hi), crossed: true })
}

/// Integrated odd/even ratio of a spectrum over a detuning grid symmetric
/// about zero: sum |f(x) - f(-x)| w / sum |f(x) + f(-x)| w with trapezoid
/// weights. Zero for even spectra, invariant under uniform scaling.
pub fn fano_asymmetry(spectrum: &SweepResult, field: &str) -> Result<f64> {
    if spectrum.axis_2.is_some() {
        return Err(Error::NonSymmetricGrid("expected a 1-D spectrum".into()));
    }
    let axis = &spectrum.axis_1;
    let n = axis.points;
    let scale = axis.from.abs().max(axis.to.abs()).max(1e-300);
    for i in 0..n {
        let x = axis.value_at(i);
        let mirrored = axis.value_at(n - 1 - i);
        if (x + mirrored).abs() > 1e-9 * scale {
            return Err(Error::NonSymmetricGrid(format!(
                "grid point {x} has no mirror (found {mirrored})"
            )));
        }
    }
    let f: Vec<f64> = spectrum
        .rows
        .iter()
        .map(|row| field_value(&row.coeffs, field))
        .collect::<Result<_>>()?;
    let weight = |i: usize| if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..n {
        let w = weight(i);
        num += w * (f[i] - f[n - 1 - i]).abs();
        den += w * (f[i] + f[n - 1 - i]).abs();
    }
    if den == 0.0 {
        return Ok(0.0);
    }
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::reduce_to_single_wgr;
    use crate::model::ResonatorSpec;
    use num_complex::Complex64;

    fn network(v: f64, h: f64, d: f64) -> NetworkConfig {
        let res = ResonatorSpec { omega_c: 1.0, gamma_c: 0.0, h, v_a: v, v_b: v };
        NetworkConfig { resonator_1: res, resonator_2: res, d, v_g: 1.0, d_unit_factor: 1.0 }
    }

    fn spec_1d(cfg: NetworkConfig, axis: Axis) -> SweepSpec {
        SweepSpec {
            axis_1: axis,
            axis_2: None,
            solver: Solver::ClosedCorrected,
            base_config: cfg,
            base_input: PhotonInput::new(0.0),
        }
    }

    #[test]
    fn port_coefficients_examples() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let c = port_coefficients(&OuterAmplitudes { t_a: one, r_a: zero, t_b: zero, r_b: zero });
        assert_eq!((c.t_a, c.p_a, c.p_b, c.loss), (1.0, 1.0, 0.0, 0.0));
        let r_b = Complex64::from_polar(1.0, 0.77);
        let c = port_coefficients(&OuterAmplitudes { t_a: zero, r_a: zero, t_b: zero, r_b });
        assert!((c.r_b - 1.0).abs() < 1e-15);
        assert!((c.p_b - 1.0).abs() < 1e-15);
        assert!(c.loss.abs() < 1e-15);
    }

    #[test]
    fn dissipation_produces_loss() {
        let mut cfg = network(1.0, 0.5, 1.0);
        cfg.resonator_1.gamma_c = 0.1;
        cfg.resonator_2.gamma_c = 0.1;
        let sol = crate::oracle::solve(&cfg, &PhotonInput::new(0.0)).unwrap();
        let c = port_coefficients(&sol.outer());
        assert!(c.loss > 0.0);
    }

    #[test]
    fn single_wgr_spectrum_peaks_at_resonance() {
        let cfg = reduce_to_single_wgr(&network(1.0, 0.0, 0.0));
        let axis = Axis { name: "delta_omega".into(), from: -3.0, to: 3.0, points: 301 };
        let result = sweep_1d(&spec_1d(cfg, axis)).unwrap();
        let ((coord, _), value) = find_max(&result, "R_b").unwrap();
        assert!(coord.abs() < 1e-9, "peak at {coord}");
        assert!((value - 1.0).abs() < 1e-9, "peak value {value}");
        for row in &result.rows {
            assert!(row.residual <= 1e-12);
        }
    }

    #[test]
    fn sweep_2d_decoupled_edge() {
        let cfg = network(1.0, 0.5, 1.0);
        let spec = SweepSpec {
            axis_1: Axis { name: "Va".into(), from: 0.0, to: 2.0, points: 5 },
            axis_2: Some(Axis { name: "Vb".into(), from: 0.0, to: 2.0, points: 5 }),
            solver: Solver::Oracle,
            base_config: cfg,
            base_input: PhotonInput::new(0.42),
        };
        let result = sweep_2d(&spec).unwrap();
        assert_eq!(result.rows.len(), 25);
        // Va = Vb = 0 corner: fully decoupled, photon stays in waveguide-a.
        let corner = &result.rows[0];
        assert!((corner.coeffs.p_a - 1.0).abs() < 1e-12);
        assert!(corner.coeffs.p_b.abs() < 1e-12);
    }

    #[test]
    fn find_max_tie_breaks_toward_first_point() {
        let cfg = network(0.0, 0.0, 0.0);
        // Fully decoupled: T_a = 1 everywhere, a constant field.
        let axis = Axis { name: "delta_omega".into(), from: -1.0, to: 1.0, points: 11 };
        let result = sweep_1d(&spec_1d(cfg, axis)).unwrap();
        let ((coord, _), value) = find_max(&result, "T_a").unwrap();
        assert_eq!(coord, -1.0);
        assert!((value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn transfer_window_no_crossing_flags() {
        // Decoupled network: P_b = 0 for every h.
        let cfg = network(0.0, 0.0, 0.0);
        let w = transfer_window(
            &cfg,
            &PhotonInput::new(0.5),
            Solver::ClosedCorrected,
            (0.0, 3.0),
        )
        .unwrap();
        assert!(!w.crossed);
        assert_eq!(w.h_star, 0.0);
    }

    #[test]
    fn transfer_window_single_wgr_near_one() {
        let cfg = reduce_to_single_wgr(&network(1.0, 0.0, 0.0));
        let w = transfer_window(
            &cfg,
            &PhotonInput::new(0.1),
            Solver::ClosedCorrected,
            (0.0, 3.0),
        )
        .unwrap();
        assert!(w.crossed);
        assert!((w.h_star - 1.0).abs() < 0.15, "h* = {}", w.h_star);
    }

    #[test]
    fn fano_asymmetry_zero_for_even_spectrum() {
        // d = 0 spectra are even in the detuning.
        let cfg = network(1.0, 0.5, 0.0);
        let axis = Axis { name: "delta_omega".into(), from: -3.0, to: 3.0, points: 401 };
        let result = sweep_1d(&spec_1d(cfg, axis)).unwrap();
        let a = fano_asymmetry(&result, "P_b").unwrap();
        assert!(a <= 1e-10, "A = {a}");
    }

    #[test]
    fn fano_asymmetry_rejects_asymmetric_grid() {
        let cfg = network(1.0, 0.5, 1.0);
        let axis = Axis { name: "delta_omega".into(), from: -1.0, to: 2.0, points: 31 };
        let result = sweep_1d(&spec_1d(cfg, axis)).unwrap();
        assert!(matches!(
            fano_asymmetry(&result, "P_b"),
            Err(Error::NonSymmetricGrid(_))
        ));
    }

    #[test]
    fn unknown_axis_rejected() {
        let cfg = network(1.0, 0.0, 0.0);
        let axis = Axis { name: "bogus".into(), from: 0.0, to: 1.0, points: 3 };
        assert!(matches!(
            sweep_1d(&spec_1d(cfg, axis)),
            Err(Error::UnknownParameter(_))
        ));
    }

    #[test]
    fn phi_axis_overrides_distance() {
        let mut cfg = network(1.0, 1.0, 7.0);
        cfg.d = 7.0;
        let spec = SweepSpec {
            axis_1: Axis { name: "phi".into(), from: 0.0, to: 2.0, points: 5 },
            axis_2: None,
            solver: Solver::ClosedCorrected,
            base_config: cfg,
            base_input: PhotonInput::new(0.42),
        };
        let result = sweep_1d(&spec).unwrap();
        // Same phi grid with a very different base distance: identical rows.
        let mut cfg2 = cfg;
        cfg2.d = 0.3;
        let spec2 = SweepSpec { base_config: cfg2, ..spec.clone() };
        let result2 = sweep_1d(&spec2).unwrap();
        for (a, b) in result.rows.iter().zip(&result2.rows) {
            assert_eq!(a.coeffs.p_b, b.coeffs.p_b);
        }
    }
}
