//! Python bindings for the whispering-gallery photon router.
//!
//! ```python
//! import router_py as rp
//! net = rp.Network(V1a=1, V1b=1, V2a=1, V2b=1, h1=0.5, h2=0.5, d=1)
//! t_a, r_a, t_b, r_b = net.amplitudes(0.42)
//! net.coefficients(0.42)["P_b"]
//! ```

use std::collections::HashMap;

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use router_core::analysis::{port_coefficients, transfer_window, Solver};
use router_core::cli_io::verify_draws;
use router_core::closed_form::{closed_form_amplitudes, reduce_to_single_wgr, Variant};
use router_core::oracle::{compare_with_closed_form, solve};
use router_core::{Error, NetworkConfig, PhotonInput, PortCoefficients, ResonatorSpec};

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::InvalidParameter { .. } | Error::UnknownField(_) | Error::UnknownParameter(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn parse_variant(name: &str) -> PyResult<Variant> {
    match name {
        "corrected" => Ok(Variant::Corrected),
        "verbatim" => Ok(Variant::Verbatim),
        other => Err(PyValueError::new_err(format!(
            "unknown variant `{other}` (expected corrected or verbatim)"
        ))),
    }
}

fn coeffs_map(c: &PortCoefficients) -> HashMap<String, f64> {
    HashMap::from([
        ("T_a".to_string(), c.t_a),
        ("R_a".to_string(), c.r_a),
        ("T_b".to_string(), c.t_b),
        ("R_b".to_string(), c.r_b),
        ("P_a".to_string(), c.p_a),
        ("P_b".to_string(), c.p_b),
        ("L".to_string(), c.loss),
    ])
}

/// The two-resonator, two-waveguide network.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Network {
    cfg: NetworkConfig,
}

#[pymethods]
impl Network {
    #[new]
    #[pyo3(signature = (*, omega_c1=1.0, omega_c2=None, gamma_c1=0.0, gamma_c2=0.0,
                        h1=0.0, h2=0.0, V1a=0.0, V1b=0.0, V2a=0.0, V2b=0.0,
                        d=0.0, v_g=1.0, d_unit_factor=1.0))]
    #[allow(non_snake_case, clippy::too_many_arguments)]
    fn new(
        omega_c1: f64,
        omega_c2: Option<f64>,
        gamma_c1: f64,
        gamma_c2: f64,
        h1: f64,
        h2: f64,
        V1a: f64,
        V1b: f64,
        V2a: f64,
        V2b: f64,
        d: f64,
        v_g: f64,
        d_unit_factor: f64,
    ) -> PyResult<Self> {
        let cfg = NetworkConfig {
            resonator_1: ResonatorSpec {
                omega_c: omega_c1,
                gamma_c: gamma_c1,
                h: h1,
                v_a: V1a,
                v_b: V1b,
            },
            resonator_2: ResonatorSpec {
                omega_c: omega_c2.unwrap_or(omega_c1),
                gamma_c: gamma_c2,
                h: h2,
                v_a: V2a,
                v_b: V2b,
            },
            d,
            v_g,
            d_unit_factor,
        };
        cfg.validate().map_err(to_py_err)?;
        Ok(Network { cfg })
    }

    /// Closed-form outer amplitudes (t_a, r_a, t_b, r_b) at a detuning.
    #[pyo3(signature = (delta_omega, variant="corrected"))]
    fn amplitudes(
        &self,
        delta_omega: f64,
        variant: &str,
    ) -> PyResult<(Complex64, Complex64, Complex64, Complex64)> {
        let amps = closed_form_amplitudes(
            &self.cfg,
            &PhotonInput::new(delta_omega),
            parse_variant(variant)?,
        )
        .map_err(to_py_err)?;
        Ok((amps.t_a, amps.r_a, amps.t_b, amps.r_b))
    }

    /// Full 12-amplitude solution from the linear-system oracle.
    fn oracle(&self, delta_omega: f64) -> PyResult<HashMap<String, Complex64>> {
        let s = solve(&self.cfg, &PhotonInput::new(delta_omega)).map_err(to_py_err)?;
        Ok(HashMap::from([
            ("t12_a".to_string(), s.t12_a),
            ("t_a".to_string(), s.t_a),
            ("r_a".to_string(), s.r_a),
            ("r12_a".to_string(), s.r12_a),
            ("t12_b".to_string(), s.t12_b),
            ("t_b".to_string(), s.t_b),
            ("r_b".to_string(), s.r_b),
            ("r12_b".to_string(), s.r12_b),
            ("xi_1".to_string(), s.xi_1),
            ("xi_2".to_string(), s.xi_2),
            ("xi_3".to_string(), s.xi_3),
            ("xi_4".to_string(), s.xi_4),
        ]))
    }

    /// Port coefficients T/R/P/L at a detuning.
    #[pyo3(signature = (delta_omega, solver="closed"))]
    fn coefficients(&self, delta_omega: f64, solver: &str) -> PyResult<HashMap<String, f64>> {
        let input = PhotonInput::new(delta_omega);
        let amps = match solver {
            "closed" | "closed_corrected" => {
                closed_form_amplitudes(&self.cfg, &input, Variant::Corrected)
            }
            "verbatim" | "closed_verbatim" => {
                closed_form_amplitudes(&self.cfg, &input, Variant::Verbatim)
            }
            "oracle" => solve(&self.cfg, &input).map(|s| s.outer()),
            other => return Err(PyValueError::new_err(format!("unknown solver `{other}`"))),
        }
        .map_err(to_py_err)?;
        Ok(coeffs_map(&port_coefficients(&amps)))
    }

    /// Max relative closed-form vs oracle deviation at a detuning.
    #[pyo3(signature = (delta_omega, variant="corrected"))]
    fn compare(&self, delta_omega: f64, variant: &str) -> PyResult<f64> {
        compare_with_closed_form(
            &self.cfg,
            &PhotonInput::new(delta_omega),
            parse_variant(variant)?,
        )
        .map_err(to_py_err)
    }

    /// Supremum h below which P_b > 0.5, by bisection over `h_range`.
    #[pyo3(signature = (delta_omega, h_range, solver="closed"))]
    fn transfer_window(
        &self,
        delta_omega: f64,
        h_range: (f64, f64),
        solver: &str,
    ) -> PyResult<(f64, bool)> {
        let solver = match solver {
            "closed" | "closed_corrected" => Solver::ClosedCorrected,
            "verbatim" | "closed_verbatim" => Solver::ClosedVerbatim,
            "oracle" => Solver::Oracle,
            other => return Err(PyValueError::new_err(format!("unknown solver `{other}`"))),
        };
        let w = transfer_window(&self.cfg, &PhotonInput::new(delta_omega), solver, h_range)
            .map_err(to_py_err)?;
        Ok((w.h_star, w.crossed))
    }

    /// A copy with resonator 2 decoupled (single-WGR network).
    fn reduced_to_single_wgr(&self) -> Network {
        Network { cfg: reduce_to_single_wgr(&self.cfg) }
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.cfg)
    }
}

/// Seeded random-draw verification of the closed form against the oracle;
/// returns the max relative deviation.
#[pyfunction]
#[pyo3(signature = (draws=1000, seed=42, variant="corrected"))]
fn verify(draws: usize, seed: u64, variant: &str) -> PyResult<f64> {
    verify_draws(draws, seed, parse_variant(variant)?).map_err(to_py_err)
}

#[pymodule]
fn router_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Network>()?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
