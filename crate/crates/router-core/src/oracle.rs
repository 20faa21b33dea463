//! Independent linear-system route to the scattering amplitudes.
//!
//! Integrating the first-order field equations of the eigenvalue problem
//! across each delta coupling gives eight jump conditions (one per
//! propagation direction, waveguide and coupling point), and the four
//! resonator-mode stationary equations close the system. On-site field
//! values use the theta(0) = 1/2 convention, i.e. the arithmetic mean of the
//! adjacent segment amplitudes including their plane-wave phases. The
//! resulting 12x12 complex system is solved by Gaussian elimination with
//! partial pivoting.
//!
//! Nothing here touches the closed-form expressions, so agreement between
//! the two routes validates both.

use num_complex::Complex64;

use crate::closed_form::{closed_form_with_phase, Variant};
use crate::model::{phase_shift, FullSolution, NetworkConfig, PhotonInput};
use crate::{Error, Result};

pub const SYSTEM_SIZE: usize = 12;

/// Canonical unknown ordering, used for matrix columns and solution vectors.
pub const UNKNOWN_ORDER: [&str; SYSTEM_SIZE] = [
    "t12_a", "t_a", "r_a", "r12_a", "t12_b", "t_b", "r_b", "r12_b", "xi_1", "xi_2", "xi_3",
    "xi_4",
];

// Column indices matching UNKNOWN_ORDER.
const T12A: usize = 0;
const TA: usize = 1;
const RA: usize = 2;
const R12A: usize = 3;
const T12B: usize = 4;
const TB: usize = 5;
const RB: usize = 6;
const R12B: usize = 7;
const XI1: usize = 8;
const XI2: usize = 9;
const XI3: usize = 10;
const XI4: usize = 11;

/// Assembled scattering problem: `matrix * x = rhs` with `x` ordered per
/// [`UNKNOWN_ORDER`].
#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub matrix: [[Complex64; SYSTEM_SIZE]; SYSTEM_SIZE],
    pub rhs: [Complex64; SYSTEM_SIZE],
    /// Parameter echo for diagnostics on singular systems.
    params: String,
    /// Unknowns eliminated up front because their resonator is fully
    /// decoupled (V_a = V_b = 0, h = 0); their amplitudes are exactly zero.
    decoupled: Vec<usize>,
}

/// Builds the 12x12 system from the network parameters.
pub fn build_linear_system(cfg: &NetworkConfig, input: &PhotonInput) -> LinearSystem {
    build_linear_system_with_phase(cfg, input, phase_shift(cfg, input))
}

/// Same, with the round-trip phase phi = 2 k d supplied directly; the
/// one-way propagation factor used in the matrix is exp(i*phi/2).
pub fn build_linear_system_with_phase(
    cfg: &NetworkConfig,
    input: &PhotonInput,
    phi: f64,
) -> LinearSystem {
    let zero = Complex64::new(0.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let mut a = [[zero; SYSTEM_SIZE]; SYSTEM_SIZE];
    let mut b = [zero; SYSTEM_SIZE];

    let vg = cfg.v_g;
    let e_k = input.energy(cfg);
    let r1 = &cfg.resonator_1;
    let r2 = &cfg.resonator_2;
    // One-way propagation factor exp(i k d_eff).
    let p = Complex64::new(0.0, phi / 2.0).exp();
    // E_kn = E_k - (omega_cn - i gamma_cn / 2)
    let e1 = Complex64::new(e_k - r1.omega_c, r1.gamma_c / 2.0);
    let e2 = Complex64::new(e_k - r2.omega_c, r2.gamma_c / 2.0);

    // Waveguide-a, right-movers: jumps at x = 0 (couples xi_1, the clockwise
    // mode of WGR-1) and at x = d (xi_3).
    a[0][T12A] = -i * vg;
    a[0][XI1] = r1.v_a.into();
    b[0] = -i * vg;

    a[1][TA] = -i * vg * p;
    a[1][T12A] = i * vg * p;
    a[1][XI3] = r2.v_a.into();

    // Waveguide-a, left-movers (couple the counterclockwise modes).
    a[2][R12A] = i * vg;
    a[2][RA] = -i * vg;
    a[2][XI2] = r1.v_a.into();

    a[3][R12A] = -i * vg / p;
    a[3][XI4] = r2.v_a.into();

    // Waveguide-b, right-movers (counterclockwise modes).
    a[4][T12B] = -i * vg;
    a[4][XI2] = r1.v_b.into();

    a[5][TB] = -i * vg * p;
    a[5][T12B] = i * vg * p;
    a[5][XI4] = r2.v_b.into();

    // Waveguide-b, left-movers (clockwise modes).
    a[6][R12B] = i * vg;
    a[6][RB] = -i * vg;
    a[6][XI1] = r1.v_b.into();

    a[7][R12B] = -i * vg / p;
    a[7][XI3] = r2.v_b.into();

    // Resonator stationary equations with theta(0) = 1/2 on-site averages.
    // WGR-1 clockwise: E_k1 xi_1 = h_1 xi_2 + V_1a <phi_Ra(0)> + V_1b <phi_Lb(0)>
    a[8][XI1] = e1;
    a[8][XI2] = (-r1.h).into();
    a[8][T12A] = (-r1.v_a / 2.0).into();
    a[8][RB] = (-r1.v_b / 2.0).into();
    a[8][R12B] = (-r1.v_b / 2.0).into();
    b[8] = (r1.v_a / 2.0).into();

    // WGR-1 counterclockwise.
    a[9][XI2] = e1;
    a[9][XI1] = (-r1.h).into();
    a[9][RA] = (-r1.v_a / 2.0).into();
    a[9][R12A] = (-r1.v_a / 2.0).into();
    a[9][T12B] = (-r1.v_b / 2.0).into();

    // WGR-2 clockwise; on-site fields at x = d carry exp(+/- i k d).
    a[10][XI3] = e2;
    a[10][XI4] = (-r2.h).into();
    a[10][T12A] = -r2.v_a / 2.0 * p;
    a[10][TA] = -r2.v_a / 2.0 * p;
    a[10][R12B] = -r2.v_b / 2.0 / p;

    // WGR-2 counterclockwise.
    a[11][XI4] = e2;
    a[11][XI3] = (-r2.h).into();
    a[11][R12A] = -r2.v_a / 2.0 / p;
    a[11][T12B] = -r2.v_b / 2.0 * p;
    a[11][TB] = -r2.v_b / 2.0 * p;

    let mut decoupled = Vec::new();
    if r1.v_a == 0.0 && r1.v_b == 0.0 && r1.h == 0.0 {
        decoupled.extend([XI1, XI2]);
    }
    if r2.v_a == 0.0 && r2.v_b == 0.0 && r2.h == 0.0 {
        decoupled.extend([XI3, XI4]);
    }

    let params = format!(
        "omega_c=({},{}) gamma_c=({},{}) h=({},{}) V=({},{},{},{}) d_eff={} v_g={} dw={}",
        r1.omega_c,
        r2.omega_c,
        r1.gamma_c,
        r2.gamma_c,
        r1.h,
        r2.h,
        r1.v_a,
        r1.v_b,
        r2.v_a,
        r2.v_b,
        cfg.effective_distance(),
        vg,
        input.delta_omega
    );

    LinearSystem { matrix: a, rhs: b, params, decoupled }
}

/// Relative pivot threshold below which the matrix is declared singular.
const PIVOT_THRESHOLD: f64 = 1e-13;

/// Solves the assembled system by dense elimination with partial pivoting
/// and maps the solution vector to a [`FullSolution`].
///
/// A fully decoupled resonator's unknowns are eliminated before the solve
/// and restored as exact zeros, so that E_k = omega_cn of an inert resonator
/// does not produce a spuriously singular matrix.
pub fn solve_full_system(sys: &LinearSystem) -> Result<FullSolution> {
    // Active rows/columns after dropping decoupled unknowns. A decoupled
    // unknown's column is zero everywhere except its own stationary row, so
    // dropping that row with the column keeps the system square.
    let active: Vec<usize> =
        (0..SYSTEM_SIZE).filter(|k| !sys.decoupled.contains(k)).collect();
    let n = active.len();

    let mut a: Vec<Vec<Complex64>> = active
        .iter()
        .map(|&r| active.iter().map(|&c| sys.matrix[r][c]).collect())
        .collect();
    let mut b: Vec<Complex64> = active.iter().map(|&r| sys.rhs[r]).collect();

    // Largest initial magnitude per column, for the relative pivot test.
    let col_scale: Vec<f64> = (0..n)
        .map(|j| (0..n).map(|i| a[i][j].norm()).fold(0.0, f64::max))
        .collect();

    for j in 0..n {
        let (pivot_row, pivot_mag) = (j..n)
            .map(|i| (i, a[i][j].norm()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if pivot_mag < PIVOT_THRESHOLD * col_scale[j].max(f64::MIN_POSITIVE) {
            return Err(Error::SingularMatrix {
                pivot_index: active[j],
                params: sys.params.clone(),
            });
        }
        a.swap(j, pivot_row);
        b.swap(j, pivot_row);
        let pivot = a[j][j];
        for i in (j + 1)..n {
            let factor = a[i][j] / pivot;
            if factor.norm() == 0.0 {
                continue;
            }
            for k in j..n {
                let ajk = a[j][k];
                a[i][k] -= factor * ajk;
            }
            let bj = b[j];
            b[i] -= factor * bj;
        }
    }

    // Back substitution.
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for j in (0..n).rev() {
        let mut acc = b[j];
        for k in (j + 1)..n {
            acc -= a[j][k] * x[k];
        }
        x[j] = acc / a[j][j];
    }

    // Scatter back to the full 12-vector, zeros on decoupled unknowns.
    let mut full = [Complex64::new(0.0, 0.0); SYSTEM_SIZE];
    for (slot, &idx) in active.iter().enumerate() {
        full[idx] = x[slot];
    }

    // Residual check against the original (full) system.
    let mut residual: f64 = 0.0;
    let mut rhs_norm: f64 = 0.0;
    for i in 0..SYSTEM_SIZE {
        if sys.decoupled.contains(&i) {
            continue;
        }
        let mut row = -sys.rhs[i];
        for j in 0..SYSTEM_SIZE {
            row += sys.matrix[i][j] * full[j];
        }
        residual = residual.max(row.norm());
        rhs_norm = rhs_norm.max(sys.rhs[i].norm());
    }
    let bound = 1e-10 * (1.0 + rhs_norm);
    if residual > bound {
        return Err(Error::ResidualTooLarge { residual, bound });
    }

    Ok(FullSolution {
        t12_a: full[T12A],
        t_a: full[TA],
        r_a: full[RA],
        r12_a: full[R12A],
        t12_b: full[T12B],
        t_b: full[TB],
        r_b: full[RB],
        r12_b: full[R12B],
        xi_1: full[XI1],
        xi_2: full[XI2],
        xi_3: full[XI3],
        xi_4: full[XI4],
    })
}

/// Convenience: assemble and solve in one step.
pub fn solve(cfg: &NetworkConfig, input: &PhotonInput) -> Result<FullSolution> {
    solve_full_system(&build_linear_system(cfg, input))
}

/// Assemble and solve with the propagation phase supplied directly.
pub fn solve_with_phase(cfg: &NetworkConfig, input: &PhotonInput, phi: f64) -> Result<FullSolution> {
    solve_full_system(&build_linear_system_with_phase(cfg, input, phi))
}

/// Max relative deviation between the closed form and the oracle over the
/// four outer amplitudes: max |closed - oracle| / max(1, |oracle|).
pub fn compare_with_closed_form(
    cfg: &NetworkConfig,
    input: &PhotonInput,
    variant: Variant,
) -> Result<f64> {
    let phi = phase_shift(cfg, input);
    let closed = closed_form_with_phase(cfg, input, phi, variant)?;
    let oracle = solve_with_phase(cfg, input, phi)?.outer();
    let pairs = [
        (closed.t_a, oracle.t_a),
        (closed.r_a, oracle.r_a),
        (closed.t_b, oracle.t_b),
        (closed.r_b, oracle.r_b),
    ];
    Ok(pairs
        .iter()
        .map(|(c, o)| (c - o).norm() / (o.norm().max(1.0)))
        .fold(0.0, f64::max))
}
