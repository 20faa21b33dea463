//! Parameter model and the auxiliary quantities shared by the closed form
//! and the oracle.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Magnitudes below this are treated as a vanished denominator.
pub const DEGENERACY_THRESHOLD: f64 = 1e-300;

/// One whispering-gallery resonator: its frequency, dissipation, intermode
/// backscattering and the couplings to the two waveguides.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonatorSpec {
    /// Resonance frequency of the degenerate mode pair (units of omega_c1).
    pub omega_c: f64,
    /// Dissipation rate, >= 0.
    pub gamma_c: f64,
    /// Backscattering strength between the clockwise and counterclockwise
    /// modes.
    pub h: f64,
    /// Coupling to waveguide-a, >= 0 (Gamma = V^2 / v_g).
    pub v_a: f64,
    /// Coupling to waveguide-b, >= 0.
    pub v_b: f64,
}

impl ResonatorSpec {
    pub fn validate(&self, label: &str) -> Result<()> {
        let check = |key: &str, ok: bool, msg: &str| -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    key: format!("{label}.{key}"),
                    message: msg.to_string(),
                })
            }
        };
        check("omega_c", self.omega_c.is_finite() && self.omega_c > 0.0, "must be > 0")?;
        check("gamma_c", self.gamma_c.is_finite() && self.gamma_c >= 0.0, "must be >= 0")?;
        check("h", self.h.is_finite(), "must be finite")?;
        check("v_a", self.v_a.is_finite() && self.v_a >= 0.0, "must be >= 0")?;
        check("v_b", self.v_b.is_finite() && self.v_b >= 0.0, "must be >= 0")?;
        Ok(())
    }
}

/// The full two-resonator, two-waveguide network.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkConfig {
    pub resonator_1: ResonatorSpec,
    pub resonator_2: ResonatorSpec,
    /// Inter-resonator distance, >= 0 (units of v_g/omega_c1).
    pub d: f64,
    /// Group velocity, > 0.
    pub v_g: f64,
    /// Multiplier applied to `d` before the propagation phase is computed.
    pub d_unit_factor: f64,
}

impl NetworkConfig {
    pub fn validate(&self) -> Result<()> {
        self.resonator_1.validate("resonator_1")?;
        self.resonator_2.validate("resonator_2")?;
        let check = |key: &str, ok: bool, msg: &str| -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidParameter { key: key.to_string(), message: msg.to_string() })
            }
        };
        check("d", self.d.is_finite() && self.d >= 0.0, "must be >= 0")?;
        check("v_g", self.v_g.is_finite() && self.v_g > 0.0, "must be > 0")?;
        check(
            "d_unit_factor",
            self.d_unit_factor.is_finite() && self.d_unit_factor > 0.0,
            "must be > 0",
        )?;
        Ok(())
    }

    /// Distance actually entering the propagation phase.
    pub fn effective_distance(&self) -> f64 {
        self.d * self.d_unit_factor
    }
}

impl Default for NetworkConfig {
    fn default() -> Self {
        let res = ResonatorSpec { omega_c: 1.0, gamma_c: 0.0, h: 0.0, v_a: 0.0, v_b: 0.0 };
        NetworkConfig {
            resonator_1: res,
            resonator_2: res,
            d: 0.0,
            v_g: 1.0,
            d_unit_factor: 1.0,
        }
    }
}

/// Incident photon, specified by its detuning from resonator 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotonInput {
    /// Detuning: E_k - omega_c1.
    pub delta_omega: f64,
}

impl PhotonInput {
    pub fn new(delta_omega: f64) -> Self {
        PhotonInput { delta_omega }
    }

    /// Photon energy E_k = omega_c1 + delta_omega.
    pub fn energy(&self, cfg: &NetworkConfig) -> f64 {
        cfg.resonator_1.omega_c + self.delta_omega
    }

    /// Wavenumber k = E_k / v_g.
    pub fn wavenumber(&self, cfg: &NetworkConfig) -> f64 {
        self.energy(cfg) / cfg.v_g
    }
}

/// The four outer scattering amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuterAmplitudes {
    pub t_a: Complex64,
    pub r_a: Complex64,
    pub t_b: Complex64,
    pub r_b: Complex64,
}

/// All twelve amplitudes of the scattering eigenstate: eight plane-wave
/// segments and four resonator-mode excitations.
///
/// `xi_1`/`xi_3` are the clockwise modes of resonator 1/2, `xi_2`/`xi_4` the
/// counterclockwise ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullSolution {
    pub t12_a: Complex64,
    pub t_a: Complex64,
    pub r_a: Complex64,
    pub r12_a: Complex64,
    pub t12_b: Complex64,
    pub t_b: Complex64,
    pub r_b: Complex64,
    pub r12_b: Complex64,
    pub xi_1: Complex64,
    pub xi_2: Complex64,
    pub xi_3: Complex64,
    pub xi_4: Complex64,
}

impl FullSolution {
    pub fn outer(&self) -> OuterAmplitudes {
        OuterAmplitudes { t_a: self.t_a, r_a: self.r_a, t_b: self.t_b, r_b: self.r_b }
    }
}

/// Real port coefficients derived from the outer amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PortCoefficients {
    pub t_a: f64,
    pub r_a: f64,
    pub t_b: f64,
    pub r_b: f64,
    /// Probability of exiting through waveguide-a: T_a + R_a.
    pub p_a: f64,
    /// Probability of exiting through waveguide-b: T_b + R_b.
    pub p_b: f64,
    /// Loss: 1 - P_a - P_b.
    pub loss: f64,
}

/// Auxiliary quantities entering the closed-form amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxQuantities {
    pub e_k1: Complex64,
    pub e_k2: Complex64,
    pub gamma_1a: f64,
    pub gamma_1b: f64,
    pub gamma_2a: f64,
    pub gamma_2b: f64,
    pub a_1: Complex64,
    pub a_2: Complex64,
    pub b_a: f64,
    pub b_b: f64,
    pub c_1: f64,
    pub c_2: f64,
    pub d_1: f64,
    pub d_2: f64,
    pub phi: f64,
    pub m: Complex64,
    pub s_1: Complex64,
    pub s_2: Complex64,
    pub q_1: Complex64,
    pub q_2: Complex64,
    pub u_1: Complex64,
    pub u_2: Complex64,
}

/// Round-trip propagation phase phi = 2 k d_eff.
pub fn phase_shift(cfg: &NetworkConfig, input: &PhotonInput) -> f64 {
    2.0 * input.wavenumber(cfg) * cfg.effective_distance()
}

/// Computes every auxiliary quantity. `M` uses the exp(i*phi) convention (see
/// the closed-form module for the verbatim alternative).
pub fn aux_quantities(cfg: &NetworkConfig, input: &PhotonInput) -> Result<AuxQuantities> {
    let phi = phase_shift(cfg, input);
    aux_quantities_with_phase(cfg, input, phi)
}

/// Same as [`aux_quantities`] but with the propagation phase supplied
/// directly, bypassing the distance. Used by phase-axis sweeps.
pub fn aux_quantities_with_phase(
    cfg: &NetworkConfig,
    input: &PhotonInput,
    phi: f64,
) -> Result<AuxQuantities> {
    let e_k = input.energy(cfg);
    let r1 = &cfg.resonator_1;
    let r2 = &cfg.resonator_2;

    let e_k1 = Complex64::new(e_k - r1.omega_c, r1.gamma_c / 2.0);
    let e_k2 = Complex64::new(e_k - r2.omega_c, r2.gamma_c / 2.0);

    let gamma_1a = r1.v_a * r1.v_a / cfg.v_g;
    let gamma_1b = r1.v_b * r1.v_b / cfg.v_g;
    let gamma_2a = r2.v_a * r2.v_a / cfg.v_g;
    let gamma_2b = r2.v_b * r2.v_b / cfg.v_g;

    let a_1 = e_k1 + Complex64::new(0.0, (gamma_1a + gamma_1b) / 2.0);
    let a_2 = e_k2 + Complex64::new(0.0, (gamma_2a + gamma_2b) / 2.0);

    let b_a = (gamma_1a * gamma_2a).sqrt();
    let b_b = (gamma_1b * gamma_2b).sqrt();
    let c_1 = (gamma_1a * gamma_1b).sqrt();
    let c_2 = (gamma_2a * gamma_2b).sqrt();
    let d_1 = (gamma_1a * gamma_2b).sqrt();
    let d_2 = (gamma_2a * gamma_1b).sqrt();

    let e_iphi = Complex64::new(0.0, phi).exp();
    let m = a_1 * a_2 + b_a * b_b * e_iphi;
    if m.norm() < DEGENERACY_THRESHOLD {
        return Err(Error::DegenerateDenominator { quantity: "M", magnitude: m.norm() });
    }
    let s_1 = r1.h / m;
    let s_2 = r2.h / m;
    let q_1 = a_1 - a_2 * r1.h * s_1;
    let q_2 = a_2 - a_1 * r2.h * s_2;
    let u_1 = b_b + b_a * r1.h * s_2;
    let u_2 = b_a + b_b * r2.h * s_1;

    Ok(AuxQuantities {
        e_k1,
        e_k2,
        gamma_1a,
        gamma_1b,
        gamma_2a,
        gamma_2b,
        a_1,
        a_2,
        b_a,
        b_b,
        c_1,
        c_2,
        d_1,
        d_2,
        phi,
        m,
        s_1,
        s_2,
        q_1,
        q_2,
        u_1,
        u_2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(v: f64, h: f64, d: f64) -> NetworkConfig {
        let res = ResonatorSpec { omega_c: 1.0, gamma_c: 0.0, h, v_a: v, v_b: v };
        NetworkConfig { resonator_1: res, resonator_2: res, d, v_g: 1.0, d_unit_factor: 1.0 }
    }

    #[test]
    fn gamma_is_v_squared_over_vg() {
        let aux = aux_quantities(&cfg(1.0, 0.0, 0.0), &PhotonInput::new(0.3)).unwrap();
        assert_eq!(aux.gamma_1a, 1.0);
        let mut c = cfg(2.0, 0.0, 0.0);
        c.v_g = 4.0;
        let aux = aux_quantities(&c, &PhotonInput::new(0.3)).unwrap();
        assert_eq!(aux.gamma_1a, 1.0);
    }

    #[test]
    fn resonance_zero() {
        // Detune resonator 2 so M stays away from zero at resonance.
        let mut c = cfg(1.0, 0.0, 0.0);
        c.resonator_2.omega_c = 2.0;
        let aux = aux_quantities(&c, &PhotonInput::new(0.0)).unwrap();
        assert_eq!(aux.e_k1, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn zero_backscattering_collapses_definitions() {
        let aux = aux_quantities(&cfg(1.3, 0.0, 2.0), &PhotonInput::new(0.7)).unwrap();
        assert_eq!(aux.s_1, Complex64::new(0.0, 0.0));
        assert_eq!(aux.s_2, Complex64::new(0.0, 0.0));
        assert_eq!(aux.q_1, aux.a_1);
        assert_eq!(aux.q_2, aux.a_2);
        assert_eq!(aux.u_1, Complex64::from(aux.b_b));
        assert_eq!(aux.u_2, Complex64::from(aux.b_a));
    }

    #[test]
    fn phase_examples() {
        let mut c = cfg(1.0, 0.0, 0.0);
        assert_eq!(phase_shift(&c, &PhotonInput::new(0.0)), 0.0);
        c.d = std::f64::consts::PI;
        // E_k = 1, v_g = 1, d = pi -> phi = 2 pi
        let phi = phase_shift(&c, &PhotonInput::new(0.0));
        assert!((phi - 2.0 * std::f64::consts::PI).abs() < 1e-15);
        c.d = 1.0;
        c.d_unit_factor = 1.6e-9;
        let phi = phase_shift(&c, &PhotonInput::new(0.0));
        assert!((phi - 2.0 * 1.6e-9).abs() < 1e-24);
    }

    #[test]
    fn invalid_parameters_are_named() {
        let mut c = cfg(1.0, 0.0, 0.0);
        c.resonator_1.gamma_c = -0.1;
        match c.validate() {
            Err(Error::InvalidParameter { key, .. }) => assert_eq!(key, "resonator_1.gamma_c"),
            other => panic!("expected invalid-parameter error, got {other:?}"),
        }
        c.resonator_1.gamma_c = 0.0;
        c.v_g = 0.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn gamma_invariant_under_coupling_velocity_rescale() {
        for scale in [0.5, 2.0, 7.0] {
            let base = cfg(1.2, 0.0, 0.0);
            let mut scaled = base;
            scaled.resonator_1.v_a *= scale;
            scaled.resonator_1.v_b *= scale;
            scaled.resonator_2.v_a *= scale;
            scaled.resonator_2.v_b *= scale;
            scaled.v_g *= scale * scale;
            let input = PhotonInput::new(0.4);
            let a = aux_quantities(&base, &input).unwrap();
            let b = aux_quantities(&scaled, &input).unwrap();
            assert!((a.gamma_1a - b.gamma_1a).abs() < 1e-12);
            assert!((a.gamma_2b - b.gamma_2b).abs() < 1e-12);
        }
    }
}
