//! Analytic four-port scattering amplitudes.
//!
//! Two variants are provided. `Verbatim` transcribes the published
//! expressions literally, including the denominator combination
//! M = A1*A2 + B_a*B_b*exp(phi) whose exponent lacks the imaginary unit.
//! `Corrected` uses M = A1*A2 + B_a*B_b*exp(i*phi), which is the variant that
//! agrees with the independent linear-system oracle to machine precision (see
//! `docs/discrepancies.md`); it is the default everywhere. No other term
//! required correction.

use num_complex::Complex64;

use crate::model::{
    aux_quantities_with_phase, phase_shift, AuxQuantities, NetworkConfig, OuterAmplitudes,
    PhotonInput, DEGENERACY_THRESHOLD,
};
use crate::{Error, Result};

/// Which reading of the analytic expressions to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Variant {
    /// Literal transcription: M uses exp(phi).
    Verbatim,
    /// M uses exp(i*phi); matches the oracle.
    #[default]
    Corrected,
}

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Four-port amplitudes for a photon incident from the left of waveguide-a.
pub fn closed_form_amplitudes(
    cfg: &NetworkConfig,
    input: &PhotonInput,
    variant: Variant,
) -> Result<OuterAmplitudes> {
    closed_form_with_phase(cfg, input, phase_shift(cfg, input), variant)
}

/// Same, but with the propagation phase supplied directly.
pub fn closed_form_with_phase(
    cfg: &NetworkConfig,
    input: &PhotonInput,
    phi: f64,
    variant: Variant,
) -> Result<OuterAmplitudes> {
    let mut aux = aux_quantities_with_phase(cfg, input, phi)?;
    if variant == Variant::Verbatim {
        rebuild_aux_verbatim(cfg, &mut aux)?;
    }
    amplitudes_from_aux(&aux)
}

/// Recomputes the M-dependent quantities with the literally printed
/// exponent exp(phi).
fn rebuild_aux_verbatim(cfg: &NetworkConfig, aux: &mut AuxQuantities) -> Result<()> {
    let m = aux.a_1 * aux.a_2 + aux.b_a * aux.b_b * aux.phi.exp();
    if m.norm() < DEGENERACY_THRESHOLD {
        return Err(Error::DegenerateDenominator { quantity: "M", magnitude: m.norm() });
    }
    let h_1 = cfg.resonator_1.h;
    let h_2 = cfg.resonator_2.h;
    aux.m = m;
    aux.s_1 = h_1 / m;
    aux.s_2 = h_2 / m;
    aux.q_1 = aux.a_1 - aux.a_2 * h_1 * aux.s_1;
    aux.q_2 = aux.a_2 - aux.a_1 * h_2 * aux.s_2;
    aux.u_1 = aux.b_b + aux.b_a * h_1 * aux.s_2;
    aux.u_2 = aux.b_a + aux.b_b * h_2 * aux.s_1;
    Ok(())
}

fn amplitudes_from_aux(aux: &AuxQuantities) -> Result<OuterAmplitudes> {
    let AuxQuantities {
        gamma_1a,
        gamma_2a,
        a_1,
        a_2,
        b_a,
        b_b,
        c_1,
        c_2,
        d_1,
        d_2,
        phi,
        s_1,
        s_2,
        q_1,
        q_2,
        u_1,
        u_2,
        ..
    } = *aux;

    let e_iphi = Complex64::new(0.0, phi).exp();
    let den = I * (q_1 * q_2 + u_1 * u_2 * e_iphi);
    if den.norm() < DEGENERACY_THRESHOLD {
        return Err(Error::DegenerateDenominator {
            quantity: "Q1*Q2 + u1*u2*exp(i*phi)",
            magnitude: den.norm(),
        });
    }

    let t_a = 1.0 + (gamma_1a * q_2 + gamma_2a * q_1 - I * b_a * (u_1 * e_iphi + u_2)) / den;

    let r_a = (-I * b_b * s_1 * e_iphi * (b_a * q_2 - I * u_1 * gamma_2a * e_iphi)
        + a_1 * s_2 * e_iphi * (gamma_2a * q_1 - I * b_a * u_2)
        - I * b_a * s_2 * e_iphi * (b_a * q_1 - I * u_2 * gamma_1a)
        + a_2 * s_1 * (gamma_1a * q_2 - I * b_a * u_1 * e_iphi))
        / den;

    let t_b = (-I * b_b * s_1 * (q_2 * d_1 - I * u_1 * c_2 * e_iphi)
        + a_1 * s_2 * (q_1 * c_2 - I * u_2 * d_1)
        - I * b_a * s_2 * e_iphi * (q_1 * d_2 - I * u_2 * c_1)
        + a_2 * s_1 * (q_2 * c_1 - I * u_1 * d_2 * e_iphi))
        / den;

    let r_b = (q_1 * c_2 * e_iphi + q_2 * c_1 - I * e_iphi * (u_2 * d_1 + u_1 * d_2)) / den;

    Ok(OuterAmplitudes { t_a, r_a, t_b, r_b })
}

/// Sentinel detuning applied to the decoupled resonator: omega_c2 is pushed
/// far off resonance so that A_2 stays away from zero and the two-resonator
/// expressions remain well conditioned.
pub const SINGLE_WGR_DETUNE_FACTOR: f64 = 1e6;

/// Decouples resonator 2 (V_2a = V_2b = 0, h_2 = 0) so the network reduces to
/// a single WGR on two waveguides. The decoupled resonator is additionally
/// detuned by [`SINGLE_WGR_DETUNE_FACTOR`] to keep A_2 nonzero at resonance.
pub fn reduce_to_single_wgr(cfg: &NetworkConfig) -> NetworkConfig {
    let mut out = *cfg;
    out.resonator_2.v_a = 0.0;
    out.resonator_2.v_b = 0.0;
    out.resonator_2.h = 0.0;
    out.resonator_2.omega_c = cfg.resonator_1.omega_c * SINGLE_WGR_DETUNE_FACTOR;
    out
}
