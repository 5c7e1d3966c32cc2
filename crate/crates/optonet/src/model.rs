//! Network parameters and assembly of the linearized drift/diffusion matrices.
//!
//! The state vector collects the quadrature fluctuations of the two mechanical
//! modes, the auxiliary cavity, and the coupling cavity in the fixed order
//! (X_b1, Y_b1, X_b2, Y_b2, X_as, Y_as, X_a, Y_a); with the auxiliary cavity
//! masked out the (X_as, Y_as) block is absent and the matrices are 6x6.
//! All frequencies, decay rates, detunings and couplings are expressed in
//! units of the first mechanical frequency (omega1 = 1 by convention).

use std::fmt;
use std::str::FromStr;

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Symbolic mode names. All block indexing goes through [`ModeLayout`];
/// downstream code never hard-codes row numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Mode {
    /// First mechanical mode.
    B1,
    /// Second mechanical mode.
    B2,
    /// Auxiliary cavity mode.
    As,
    /// Coupling cavity mode.
    A,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::B1, Mode::B2, Mode::As, Mode::A];

    pub fn label(self) -> &'static str {
        match self {
            Mode::B1 => "b1",
            Mode::B2 => "b2",
            Mode::As => "as",
            Mode::A => "a",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "b1" => Ok(Mode::B1),
            "b2" => Ok(Mode::B2),
            "as" => Ok(Mode::As),
            "a" => Ok(Mode::A),
            other => Err(Error::UnknownMode(other.to_string())),
        }
    }
}

/// Quadrature ordering of a system, i.e. which modes are present and where
/// each mode's (X, Y) pair sits in the state vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeLayout {
    aux_present: bool,
}

impl ModeLayout {
    pub fn new(aux_present: bool) -> Self {
        Self { aux_present }
    }

    pub fn aux_present(&self) -> bool {
        self.aux_present
    }

    /// Modes in state-vector order.
    pub fn modes(&self) -> &'static [Mode] {
        if self.aux_present {
            &[Mode::B1, Mode::B2, Mode::As, Mode::A]
        } else {
            &[Mode::B1, Mode::B2, Mode::A]
        }
    }

    pub fn n_modes(&self) -> usize {
        self.modes().len()
    }

    /// Dimension of the quadrature state vector (2 per mode).
    pub fn dim(&self) -> usize {
        2 * self.n_modes()
    }

    pub fn contains(&self, mode: Mode) -> bool {
        self.modes().contains(&mode)
    }

    /// Block position of a mode, if present.
    pub fn block_of(&self, mode: Mode) -> Result<usize> {
        self.modes()
            .iter()
            .position(|&m| m == mode)
            .ok_or(Error::ModeAbsent(mode.label()))
    }

    /// Row/column of a mode's X quadrature.
    pub fn x_index(&self, mode: Mode) -> Result<usize> {
        Ok(2 * self.block_of(mode)?)
    }

    /// Row/column of a mode's Y quadrature.
    pub fn y_index(&self, mode: Mode) -> Result<usize> {
        Ok(2 * self.block_of(mode)? + 1)
    }
}

/// All scaled physical parameters of the network, see the field list for the
/// config-file key names. `delta_s` plays the role of the auxiliary-cavity
/// detuning in both the chain and the full network couplings; it occupies the
/// same matrix slot either way.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkParams {
    /// Mechanical resonance frequency of b1 (1 by convention).
    pub omega1: f64,
    /// Mechanical resonance frequency of b2.
    pub omega2: f64,
    /// Mechanical decay rate of b1.
    pub gamma1: f64,
    /// Mechanical decay rate of b2.
    pub gamma2: f64,
    /// Decay rate of the coupling cavity a.
    pub kappa: f64,
    /// Decay rate of the auxiliary cavity a_s.
    pub kappa_s: f64,
    /// Normalized driving detuning of cavity a.
    pub delta_c: f64,
    /// Normalized driving detuning of cavity a_s.
    pub delta_s: f64,
    /// Linearized coupling between a and b1.
    pub g1: f64,
    /// Linearized coupling between a and b2.
    pub g2: f64,
    /// Linearized coupling between a_s and b1.
    pub gs1: f64,
    /// Linearized coupling between a_s and b2.
    pub gs2: f64,
    /// Photon-hopping strength between a and a_s.
    pub j_hop: f64,
    /// Phonon-hopping strength between b1 and b2.
    pub eta_hop: f64,
    /// Thermal phonon occupation of the b1 bath.
    pub nbar1: f64,
    /// Thermal phonon occupation of the b2 bath.
    pub nbar2: f64,
    /// Whether the auxiliary cavity is physically present (four- vs three-mode system).
    pub aux_present: bool,
}

impl Default for NetworkParams {
    /// A neutral, stable, fully decoupled system: unit mechanical frequencies,
    /// red-sideband detunings, zero couplings, zero-temperature baths.
    fn default() -> Self {
        Self {
            omega1: 1.0,
            omega2: 1.0,
            gamma1: 1e-2,
            gamma2: 1e-2,
            kappa: 0.1,
            kappa_s: 0.1,
            delta_c: 1.0,
            delta_s: 1.0,
            g1: 0.0,
            g2: 0.0,
            gs1: 0.0,
            gs2: 0.0,
            j_hop: 0.0,
            eta_hop: 0.0,
            nbar1: 0.0,
            nbar2: 0.0,
            aux_present: true,
        }
    }
}

impl NetworkParams {
    pub fn layout(&self) -> ModeLayout {
        ModeLayout::new(self.aux_present)
    }

    /// Check every parameter invariant; errors name the offending field.
    pub fn validate(&self) -> Result<()> {
        fn finite(field: &'static str, v: f64) -> Result<()> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParam {
                    field,
                    reason: format!("must be finite, got {v}"),
                })
            }
        }
        fn positive(field: &'static str, v: f64) -> Result<()> {
            finite(field, v)?;
            if v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParam {
                    field,
                    reason: format!("must be > 0, got {v}"),
                })
            }
        }
        fn nonnegative(field: &'static str, v: f64) -> Result<()> {
            finite(field, v)?;
            if v >= 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParam {
                    field,
                    reason: format!("must be >= 0, got {v}"),
                })
            }
        }

        positive("omega1", self.omega1)?;
        positive("omega2", self.omega2)?;
        positive("gamma1", self.gamma1)?;
        positive("gamma2", self.gamma2)?;
        positive("kappa", self.kappa)?;
        positive("kappa_s", self.kappa_s)?;
        finite("delta_c", self.delta_c)?;
        finite("delta_s", self.delta_s)?;
        finite("g1", self.g1)?;
        finite("g2", self.g2)?;
        finite("gs1", self.gs1)?;
        finite("gs2", self.gs2)?;
        finite("j_hop", self.j_hop)?;
        finite("eta_hop", self.eta_hop)?;
        nonnegative("nbar1", self.nbar1)?;
        nonnegative("nbar2", self.nbar2)?;

        if !self.aux_present {
            for (field, v) in [("gs1", self.gs1), ("gs2", self.gs2), ("j_hop", self.j_hop)] {
                if v != 0.0 {
                    return Err(Error::InvalidParam {
                        field,
                        reason: format!(
                            "must be 0 when aux_present = false (auxiliary cavity absent), got {v}"
                        ),
                    });
                }
            }
        }
        Ok(())
    }
}

/// The pair (A, Q): drift matrix of the linearized Langevin equation and the
/// diagonal diffusion matrix, in the layout's quadrature ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftDiffusion {
    pub drift: DMatrix<f64>,
    pub diffusion: DMatrix<f64>,
    pub layout: ModeLayout,
}

impl DriftDiffusion {
    pub fn dim(&self) -> usize {
        self.layout.dim()
    }
}

/// Assemble the drift matrix A and diffusion matrix Q from the parameters.
///
/// Every nonzero entry of A is one of: a mode's own damped-rotation block, a
/// -2G position-position optomechanical coupling, or a beam-splitter hopping
/// coupling (J between the cavities, eta between the mechanics).
pub fn build_drift_diffusion(params: &NetworkParams) -> Result<DriftDiffusion> {
    params.validate()?;
    let layout = params.layout();
    let n = layout.dim();
    let mut a = DMatrix::<f64>::zeros(n, n);

    // Diagonal blocks: dX = w Y - damp X, dY = -w X - damp Y.
    let mut diag_block = |mode: Mode, freq: f64, damp: f64| -> Result<()> {
        let x = layout.x_index(mode)?;
        let y = layout.y_index(mode)?;
        a[(x, x)] = -damp;
        a[(x, y)] = freq;
        a[(y, x)] = -freq;
        a[(y, y)] = -damp;
        Ok(())
    };
    diag_block(Mode::B1, params.omega1, params.gamma1)?;
    diag_block(Mode::B2, params.omega2, params.gamma2)?;
    if layout.aux_present() {
        diag_block(Mode::As, params.delta_s, params.kappa_s)?;
    }
    diag_block(Mode::A, params.delta_c, params.kappa)?;

    // Position-position couplings 2G X_cav X_mech: dY_mech -= 2G X_cav, dY_cav -= 2G X_mech.
    let mut optomech = |cav: Mode, mech: Mode, g: f64| -> Result<()> {
        if g == 0.0 && !(layout.contains(cav) && layout.contains(mech)) {
            return Ok(());
        }
        let (xc, yc) = (layout.x_index(cav)?, layout.y_index(cav)?);
        let (xm, ym) = (layout.x_index(mech)?, layout.y_index(mech)?);
        a[(ym, xc)] -= 2.0 * g;
        a[(yc, xm)] -= 2.0 * g;
        Ok(())
    };
    optomech(Mode::A, Mode::B1, params.g1)?;
    optomech(Mode::A, Mode::B2, params.g2)?;
    if layout.aux_present() {
        optomech(Mode::As, Mode::B1, params.gs1)?;
        optomech(Mode::As, Mode::B2, params.gs2)?;
    }

    // Beam-splitter hopping s (X1 X2 + Y1 Y2): dX1 += s Y2, dY1 -= s X2 and 1<->2.
    let mut hopping = |m1: Mode, m2: Mode, s: f64| -> Result<()> {
        let (x1, y1) = (layout.x_index(m1)?, layout.y_index(m1)?);
        let (x2, y2) = (layout.x_index(m2)?, layout.y_index(m2)?);
        a[(x1, y2)] += s;
        a[(y1, x2)] -= s;
        a[(x2, y1)] += s;
        a[(y2, x1)] -= s;
        Ok(())
    };
    hopping(Mode::B1, Mode::B2, params.eta_hop)?;
    if layout.aux_present() {
        hopping(Mode::As, Mode::A, params.j_hop)?;
    }

    // Diffusion: (2 nbar + 1) gamma on each mechanical quadrature, bare decay
    // on the cavity quadratures (vacuum inputs).
    let mut q_diag = vec![0.0; n];
    let mut noise = |mode: Mode, value: f64| -> Result<()> {
        q_diag[layout.x_index(mode)?] = value;
        q_diag[layout.y_index(mode)?] = value;
        Ok(())
    };
    noise(Mode::B1, (2.0 * params.nbar1 + 1.0) * params.gamma1)?;
    noise(Mode::B2, (2.0 * params.nbar2 + 1.0) * params.gamma2)?;
    if layout.aux_present() {
        noise(Mode::As, params.kappa_s)?;
    }
    noise(Mode::A, params.kappa)?;
    let q = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(q_diag));

    Ok(DriftDiffusion {
        drift: a,
        diffusion: q,
        layout,
    })
}

/// Stability classification of a drift matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StabilityClass {
    Stable,
    Marginal,
    Unstable,
}

impl fmt::Display for StabilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StabilityClass::Stable => "stable",
            StabilityClass::Marginal => "marginal",
            StabilityClass::Unstable => "unstable",
        };
        f.write_str(s)
    }
}

/// Outcome of the eigenvalue stability test, with the spectrum kept for
/// diagnostics.
#[derive(Debug, Clone)]
pub struct StabilityVerdict {
    pub class: StabilityClass,
    /// Largest real part over the spectrum of A.
    pub max_re: f64,
    /// Full spectrum, sorted by descending real part (ties by imaginary part).
    pub spectrum: Vec<Complex<f64>>,
}

impl StabilityVerdict {
    pub fn is_stable(&self) -> bool {
        self.class == StabilityClass::Stable
    }
}

/// Default stability margin: well below every decay rate used in practice,
/// above double-precision eigenvalue noise at this matrix size.
pub const DEFAULT_STABILITY_MARGIN: f64 = 1e-9;

/// Classify stability of the drift matrix: stable iff max Re(eig A) < -margin,
/// marginal iff |max Re| <= margin.
pub fn check_stability(dd: &DriftDiffusion, margin: f64) -> Result<StabilityVerdict> {
    let spectrum = drift_spectrum(&dd.drift)?;
    let max_re = spectrum
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let class = if max_re < -margin {
        StabilityClass::Stable
    } else if max_re.abs() <= margin {
        StabilityClass::Marginal
    } else {
        StabilityClass::Unstable
    };
    Ok(StabilityVerdict {
        class,
        max_re,
        spectrum,
    })
}

/// Eigenvalues of a real square matrix via its Schur form, sorted by
/// descending real part.
pub fn drift_spectrum(a: &DMatrix<f64>) -> Result<Vec<Complex<f64>>> {
    let schur =
        nalgebra::linalg::Schur::try_new(a.clone(), f64::EPSILON, 100_000).ok_or_else(|| {
            Error::Numerical(format!(
                "eigenvalue iteration failed to converge for drift matrix:\n{a:.6e}"
            ))
        })?;
    let eigs = schur.complex_eigenvalues();
    let mut spectrum: Vec<Complex<f64>> = eigs.iter().copied().collect();
    spectrum.sort_by(|p, q| {
        q.re.partial_cmp(&p.re)
            .unwrap()
            .then(q.im.partial_cmp(&p.im).unwrap())
    });
    Ok(spectrum)
}
