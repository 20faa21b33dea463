//! Single-photon routing through a network of two waveguides coupled to two
//! whispering-gallery resonators (WGRs).
//!
//! The crate computes the four-port scattering amplitudes of a photon
//! incident from the left of waveguide-a along two independent routes:
//!
//! * [`closed_form`] evaluates the analytic amplitude expressions, and
//! * [`oracle`] assembles and solves the 12x12 complex linear system that the
//!   real-space eigenvalue problem imposes on the segment and resonator
//!   amplitudes.
//!
//! The two routes share no code beyond the parameter model, so their
//! agreement (see [`oracle::compare_with_closed_form`]) is a genuine
//! cross-check. [`analysis`] turns amplitudes into port coefficients and runs
//! parameter sweeps; [`cli_io`] provides the JSON config schema, the CSV/SVG
//! emitters and the `router` command-line tool.
//!
//! All frequencies, couplings and rates are dimensionless, in units of the
//! first resonator frequency (omega_c1 = 1, v_g = 1 by convention). Distance
//! is in units of v_g/omega_c1, optionally rescaled by `d_unit_factor`.

pub mod analysis;
pub mod cli_io;
pub mod closed_form;
pub mod model;
pub mod oracle;

pub use model::{
    AuxQuantities, FullSolution, NetworkConfig, OuterAmplitudes, PhotonInput, PortCoefficients,
    ResonatorSpec,
};

use thiserror::Error;

/// Errors shared by the numerical modules.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A parameter violates a type invariant; carries the offending key.
    #[error("invalid parameter `{key}`: {message}")]
    InvalidParameter { key: String, message: String },

    /// A closed-form denominator vanished; the oracle remains usable.
    #[error("degenerate denominator: |{quantity}| = {magnitude:.3e} below threshold")]
    DegenerateDenominator { quantity: &'static str, magnitude: f64 },

    /// The oracle's system matrix is singular (spectral singularity or a
    /// decoupled-unknown degeneracy).
    #[error("singular system matrix at pivot {pivot_index} (params: {params})")]
    SingularMatrix { pivot_index: usize, params: String },

    /// Solution failed the residual bound check.
    #[error("linear solve residual {residual:.3e} exceeds bound {bound:.3e}")]
    ResidualTooLarge { residual: f64, bound: f64 },

    /// An unknown field name was requested from a sweep result.
    #[error("unknown field `{0}`")]
    UnknownField(String),

    /// An unknown sweep axis parameter name.
    #[error("unknown sweep parameter `{0}`")]
    UnknownParameter(String),

    /// The spectrum grid handed to the asymmetry metric is not symmetric
    /// about zero.
    #[error("spectrum grid is not symmetric about zero: {0}")]
    NonSymmetricGrid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
