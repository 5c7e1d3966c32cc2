//! Analytic dark-mode diagnostics.
//!
//! A hybrid mechanical mode decouples from both cavities exactly when
//! M1 = (omega1 - omega2) G1 G2 + eta (G2^2 - G1^2) and
//! M2 = G_s1 G2 - G_s2 G1 both vanish. This module evaluates the conditions,
//! builds the bright/dark hybrid-mode weights, enumerates the coupling
//! switch-off taxonomy, and carries out the center-of-mass/relative
//! coordinate analysis of the undriven two-oscillator sector.

use std::fmt;

use nalgebra::{Matrix4, Vector4};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::NetworkParams;

/// Default relative tolerance for the dark-mode verdicts. The conditions are
/// exact algebra; the tolerance only absorbs input rounding.
pub const DEFAULT_DARK_MODE_TOL: f64 = 1e-9;

/// Evaluation of the dark-mode existence conditions plus the hybrid-mode
/// decomposition.
#[derive(Debug, Clone, Serialize)]
pub struct DarkModeReport {
    /// (omega1 - omega2) G1 G2 + eta (G2^2 - G1^2).
    pub m1: f64,
    /// G_s1 G2 - G_s2 G1.
    pub m2: f64,
    /// True iff both conditions vanish within the scale-aware tolerance.
    pub dark_mode_exists: bool,
    /// Coefficients of (b1, b2) in the bright hybrid mode B+.
    pub bright_weights: [f64; 2],
    /// Coefficients of (b1, b2) in the dark hybrid mode B-.
    pub dark_weights: [f64; 2],
}

/// Evaluate M1, M2 and the hybrid-mode weights for the given parameters.
pub fn dark_mode_conditions(params: &NetworkParams, tol: f64) -> Result<DarkModeReport> {
    let (g1, g2) = (params.g1, params.g2);
    if g1 == 0.0 && g2 == 0.0 {
        return Err(Error::DegenerateConfiguration(
            "G1 = G2 = 0: hybrid modes B+/B- are undefined".into(),
        ));
    }
    let m1 = (params.omega1 - params.omega2) * g1 * g2 + params.eta_hop * (g2 * g2 - g1 * g1);
    let m2 = params.gs1 * g2 - params.gs2 * g1;

    // scale-aware thresholds: |M1| ~ freq * G^2, |M2| ~ G * Gs
    let g_max = g1.abs().max(g2.abs());
    let m1_scale = g_max * g_max * params.omega1.abs().max(params.omega2.abs()).max(1.0);
    let m2_scale = g_max * params.gs1.abs().max(params.gs2.abs()).max(g_max);
    let dark_mode_exists = m1.abs() <= tol * m1_scale && m2.abs() <= tol * m2_scale;

    let norm = (g1 * g1 + g2 * g2).sqrt();
    Ok(DarkModeReport {
        m1,
        m2,
        dark_mode_exists,
        bright_weights: [g1 / norm, g2 / norm],
        dark_weights: [g2 / norm, -g1 / norm],
    })
}

/// The four switchable coupling channels of the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Coupling {
    J,
    Eta,
    Gs1,
    Gs2,
}

impl Coupling {
    pub const ALL: [Coupling; 4] = [Coupling::J, Coupling::Eta, Coupling::Gs1, Coupling::Gs2];

    pub fn label(self) -> &'static str {
        match self {
            Coupling::J => "J",
            Coupling::Eta => "eta",
            Coupling::Gs1 => "Gs1",
            Coupling::Gs2 => "Gs2",
        }
    }
}

impl fmt::Display for Coupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Verdict for one switch-off configuration.
#[derive(Debug, Clone, Serialize)]
pub struct ConfigurationVerdict {
    /// Canonical label like "J=eta=0".
    pub label: String,
    pub switched_off: Vec<Coupling>,
    pub m1: f64,
    pub m2: f64,
    pub dark_mode_exists: bool,
}

/// All fourteen one-, two- and three-channel switch-off cases, in a fixed
/// order (by count, then lexicographic in channel order J, eta, Gs1, Gs2).
pub fn all_switch_off_cases() -> Vec<Vec<Coupling>> {
    use Coupling::*;
    vec![
        vec![J],
        vec![Eta],
        vec![Gs1],
        vec![Gs2],
        vec![J, Eta],
        vec![J, Gs1],
        vec![J, Gs2],
        vec![Eta, Gs1],
        vec![Eta, Gs2],
        vec![Gs1, Gs2],
        vec![J, Eta, Gs1],
        vec![J, Eta, Gs2],
        vec![J, Gs1, Gs2],
        vec![Eta, Gs1, Gs2],
    ]
}

fn config_label(switched_off: &[Coupling]) -> String {
    let mut sorted = switched_off.to_vec();
    sorted.sort();
    sorted.dedup();
    let names: Vec<&str> = sorted.iter().map(|c| c.label()).collect();
    format!("{}=0", names.join("="))
}

/// Classify one switch-off configuration of the degenerate-mechanics network:
/// zero the listed channels, demand the remaining channels are genuinely
/// active, and evaluate the dark-mode conditions.
///
/// Follows the taxonomy conventions: G1 and G2 stay on, the mechanical modes
/// are degenerate, and when both G_s channels are active they must be equal.
pub fn classify_configuration(
    switched_off: &[Coupling],
    params: &NetworkParams,
    tol: f64,
) -> Result<ConfigurationVerdict> {
    if params.g1 == 0.0 || params.g2 == 0.0 {
        return Err(Error::UnsupportedConfiguration(
            "G1 and G2 must stay switched on (nonzero) in the configuration taxonomy".into(),
        ));
    }
    if params.omega1 != params.omega2 {
        return Err(Error::UnsupportedConfiguration(format!(
            "the taxonomy assumes degenerate mechanical modes; got omega1 = {}, omega2 = {}",
            params.omega1, params.omega2
        )));
    }
    let mut sorted = switched_off.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.is_empty() || sorted.len() >= 4 {
        return Err(Error::UnsupportedConfiguration(format!(
            "the taxonomy covers one, two or three switched-off channels, got {}",
            sorted.len()
        )));
    }

    let mut p = *params;
    for c in &sorted {
        match c {
            Coupling::J => p.j_hop = 0.0,
            Coupling::Eta => p.eta_hop = 0.0,
            Coupling::Gs1 => p.gs1 = 0.0,
            Coupling::Gs2 => p.gs2 = 0.0,
        }
    }
    for c in Coupling::ALL {
        if sorted.contains(&c) {
            continue;
        }
        let v = match c {
            Coupling::J => p.j_hop,
            Coupling::Eta => p.eta_hop,
            Coupling::Gs1 => p.gs1,
            Coupling::Gs2 => p.gs2,
        };
        if v == 0.0 {
            return Err(Error::UnsupportedConfiguration(format!(
                "channel {c} is zero but not listed as switched off"
            )));
        }
    }
    if p.gs1 != 0.0 && p.gs2 != 0.0 && p.gs1 != p.gs2 {
        return Err(Error::UnsupportedConfiguration(format!(
            "the taxonomy assumes G_s1 = G_s2 when both are active; got {} and {}",
            p.gs1, p.gs2
        )));
    }

    let report = dark_mode_conditions(&p, tol)?;
    Ok(ConfigurationVerdict {
        label: config_label(&sorted),
        switched_off: sorted,
        m1: report.m1,
        m2: report.m2,
        dark_mode_exists: report.dark_mode_exists,
    })
}

/// Which collective mechanical coordinate decouples in the signed-coupling
/// analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WhichIsDark {
    Relative,
    CenterOfMass,
    None,
}

impl fmt::Display for WhichIsDark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            WhichIsDark::Relative => "relative",
            WhichIsDark::CenterOfMass => "center_of_mass",
            WhichIsDark::None => "none",
        };
        f.write_str(s)
    }
}

/// Center-of-mass/relative coordinate analysis of the two-oscillator sector
/// with signed position couplings g1, g2 to the main cavity and gs1 (to
/// oscillator 1) from the auxiliary cavity.
#[derive(Debug, Clone, Serialize)]
pub struct CmRelReport {
    /// Effective frequency of the coupling-weighted center-of-mass coordinate.
    pub omega_cm: f64,
    /// Effective frequency of the coupling-weighted relative coordinate.
    pub omega_r: f64,
    /// Coefficient of the (p_cm p_r + q_cm q_r) cross term:
    /// (omega2 - omega1) g1 g2 / (g1^2 + g2^2).
    pub cross_coupling: f64,
    /// Coefficient of a'a q_cm as printed in the rewritten Hamiltonian:
    /// -sqrt(g1^2 + g2^2). The magnitude is what the direct rewrite produces;
    /// the sign is a q_cm gauge choice.
    pub cm_cavity_coupling: f64,
    /// Coefficient of a_s'a_s q_r: -g2 gs1 / sqrt(g1^2 + g2^2). This is the
    /// channel that keeps the would-be dark coordinate addressable.
    pub rel_aux_coupling: f64,
    pub which_is_dark: WhichIsDark,
}

/// Run the collective-coordinate analysis. The dark verdict requires the
/// weighted relative coordinate to decouple both from the center of mass
/// (zero cross term) and from the auxiliary cavity (zero rel_aux coupling);
/// the label then follows the sign structure of (g1, g2): same signs make it
/// the relative coordinate, opposite signs the center of mass.
pub fn cm_rel_analysis(
    g1: f64,
    g2: f64,
    gs1: f64,
    omega1: f64,
    omega2: f64,
    tol: f64,
) -> Result<CmRelReport> {
    let norm_sq = g1 * g1 + g2 * g2;
    if norm_sq == 0.0 {
        return Err(Error::DegenerateConfiguration(
            "g1 = g2 = 0: collective coordinates are undefined".into(),
        ));
    }
    let norm = norm_sq.sqrt();
    let omega_cm = (omega1 * g1 * g1 + omega2 * g2 * g2) / norm_sq;
    let omega_r = (omega1 * g2 * g2 + omega2 * g1 * g1) / norm_sq;
    let cross_coupling = (omega2 - omega1) * g1 * g2 / norm_sq;
    let cm_cavity_coupling = -norm;
    let rel_aux_coupling = -g2 * gs1 / norm;

    let cross_zero = cross_coupling.abs() <= tol * omega1.abs().max(omega2.abs());
    let aux_zero = rel_aux_coupling.abs() <= tol * gs1.abs().max(norm);
    let which_is_dark = if cross_zero && aux_zero {
        if g1 * g2 > 0.0 {
            WhichIsDark::Relative
        } else if g1 * g2 < 0.0 {
            WhichIsDark::CenterOfMass
        } else {
            // one bare oscillator decouples; it is not a collective coordinate
            WhichIsDark::None
        }
    } else {
        WhichIsDark::None
    };

    Ok(CmRelReport {
        omega_cm,
        omega_r,
        cross_coupling,
        cm_cavity_coupling,
        rel_aux_coupling,
        which_is_dark,
    })
}

/// Orthogonal transform mapping (q1, p1, q2, p2) to (q_cm, p_cm, q_r, p_r)
/// with the coupling-weighted collective coordinates.
pub fn cm_rel_transform(g1: f64, g2: f64) -> Result<Matrix4<f64>> {
    let norm_sq = g1 * g1 + g2 * g2;
    if norm_sq == 0.0 {
        return Err(Error::DegenerateConfiguration(
            "g1 = g2 = 0: collective coordinates are undefined".into(),
        ));
    }
    let n = norm_sq.sqrt();
    let (a, b) = (g1 / n, g2 / n);
    #[rustfmt::skip]
    let t = Matrix4::new(
        a,   0.0, b,   0.0,
        0.0, a,   0.0, b,
        -b,  0.0, a,   0.0,
        0.0, -b,  0.0, a,
    );
    Ok(t)
}

/// Quadratic-form matrix of the bare two-oscillator sector in
/// (q1, p1, q2, p2): H = 1/2 x^T M x with M = diag(w1, w1, w2, w2).
pub fn oscillator_quadratic_form(omega1: f64, omega2: f64) -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(omega1, omega1, omega2, omega2))
}
