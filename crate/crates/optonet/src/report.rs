//! Single-point solve reports: the stability -> Lyapunov -> negativity
//! pipeline packaged for the CLI and the C API.

use serde::Serialize;

use crate::darkmode::{self, DEFAULT_DARK_MODE_TOL};
use crate::entanglement::{self, DISCRIMINANT_CLAMP_TOL};
use crate::error::Result;
use crate::lyapunov::{self, RESIDUAL_RTOL};
use crate::model::{self, NetworkParams, StabilityClass, DEFAULT_STABILITY_MARGIN};
use crate::sweep::fmt_g17;

/// The adjustable numerical tolerances, bundled.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Tolerances {
    /// Stability margin on max Re eig(A).
    pub stability_margin: f64,
    /// Lyapunov residual bound relative to ||Q||_max.
    pub residual_rtol: f64,
    /// Relative tolerance of the dark-mode verdicts.
    pub dark_mode_tol: f64,
    /// Clamp tolerance for the negativity discriminant.
    pub clamp_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            stability_margin: DEFAULT_STABILITY_MARGIN,
            residual_rtol: RESIDUAL_RTOL,
            dark_mode_tol: DEFAULT_DARK_MODE_TOL,
            clamp_tol: DISCRIMINANT_CLAMP_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ComplexEntry {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityInfo {
    pub class: StabilityClass,
    pub max_re: f64,
    pub spectrum: Vec<ComplexEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairSummary {
    pub pair: String,
    pub sigma_minus: f64,
    pub log_neg: f64,
}

/// Everything a single solve produces. `covariance`, `residual` and `pairs`
/// stay empty when no steady state exists; the spectrum is always reported.
#[derive(Debug, Clone, Serialize)]
pub struct PointReport {
    pub params: NetworkParams,
    pub stability: StabilityInfo,
    /// Quadrature labels of the covariance rows/columns.
    pub ordering: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub covariance: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    pub pairs: Vec<PairSummary>,
}

impl PointReport {
    pub fn is_stable(&self) -> bool {
        self.stability.class == StabilityClass::Stable
    }
}

fn ordering_labels(params: &NetworkParams) -> Vec<String> {
    params
        .layout()
        .modes()
        .iter()
        .flat_map(|m| [format!("x_{m}"), format!("y_{m}")])
        .collect()
}

/// Run the full pipeline on one parameter point.
pub fn solve_point(params: &NetworkParams, tol: &Tolerances) -> Result<PointReport> {
    let dd = model::build_drift_diffusion(params)?;
    let verdict = model::check_stability(&dd, tol.stability_margin)?;
    let stability = StabilityInfo {
        class: verdict.class,
        max_re: verdict.max_re,
        spectrum: verdict
            .spectrum
            .iter()
            .map(|z| ComplexEntry { re: z.re, im: z.im })
            .collect(),
    };

    if verdict.class != StabilityClass::Stable {
        return Ok(PointReport {
            params: *params,
            stability,
            ordering: ordering_labels(params),
            covariance: None,
            residual: None,
            pairs: Vec::new(),
        });
    }

    let cov = lyapunov::solve_lyapunov_with(&dd, tol.stability_margin, tol.residual_rtol)?;
    let residual = lyapunov::lyapunov_residual(&dd, &cov)?;
    let n = cov.dim();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| cov.v[(i, j)]).collect())
        .collect();

    let mut pairs = Vec::new();
    for pair in pair_list(params) {
        let rep = entanglement::pair_report_with_tol(&cov, pair, tol.clamp_tol)?;
        pairs.push(PairSummary {
            pair: rep.pair.label(),
            sigma_minus: rep.sigma_minus,
            log_neg: rep.log_neg,
        });
    }

    Ok(PointReport {
        params: *params,
        stability,
        ordering: ordering_labels(params),
        covariance: Some(rows),
        residual: Some(residual),
        pairs,
    })
}

fn pair_list(params: &NetworkParams) -> Vec<entanglement::ModePair> {
    use crate::model::Mode;
    let mut pairs = vec![
        entanglement::ModePair::new(Mode::A, Mode::B1).unwrap(),
        entanglement::ModePair::new(Mode::A, Mode::B2).unwrap(),
        entanglement::ModePair::new(Mode::B1, Mode::B2).unwrap(),
    ];
    if params.aux_present {
        pairs.push(entanglement::ModePair::new(Mode::As, Mode::B1).unwrap());
        pairs.push(entanglement::ModePair::new(Mode::As, Mode::B2).unwrap());
        pairs.push(entanglement::ModePair::new(Mode::A, Mode::As).unwrap());
    }
    pairs
}

/// Combined dark-mode diagnostics for one parameter point.
#[derive(Debug, Clone, Serialize)]
pub struct DarkModeDiagnostics {
    pub params: NetworkParams,
    pub dark_mode: darkmode::DarkModeReport,
    pub cm_rel: darkmode::CmRelReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub taxonomy: Option<Vec<darkmode::ConfigurationVerdict>>,
}

/// Evaluate the dark-mode conditions and the collective-coordinate analysis;
/// optionally classify all fourteen switch-off configurations.
pub fn darkmode_diagnostics(
    params: &NetworkParams,
    tol: &Tolerances,
    taxonomy: bool,
) -> Result<DarkModeDiagnostics> {
    let dark_mode = darkmode::dark_mode_conditions(params, tol.dark_mode_tol)?;
    let cm_rel = darkmode::cm_rel_analysis(
        params.g1,
        params.g2,
        params.gs1,
        params.omega1,
        params.omega2,
        tol.dark_mode_tol,
    )?;
    let taxonomy = if taxonomy {
        let mut verdicts = Vec::new();
        for case in darkmode::all_switch_off_cases() {
            verdicts.push(darkmode::classify_configuration(
                &case,
                params,
                tol.dark_mode_tol,
            )?);
        }
        Some(verdicts)
    } else {
        None
    };
    Ok(DarkModeDiagnostics {
        params: *params,
        dark_mode,
        cm_rel,
        taxonomy,
    })
}

/// Pretty JSON with a trailing newline (deterministic field order).
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization");
    s.push('\n');
    s
}

/// Flat CSV form of a point report: the per-pair table. The full covariance
/// matrix is only representable in the JSON format.
pub fn report_to_csv(report: &PointReport) -> String {
    let mut out = String::from("pair,sigma_minus,log_neg\n");
    for p in &report.pairs {
        out.push_str(&format!(
            "{},{},{}\n",
            p.pair,
            fmt_g17(p.sigma_minus),
            fmt_g17(p.log_neg)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fig2() -> NetworkParams {
        NetworkParams {
            gamma1: 1e-5,
            gamma2: 1e-5,
            g1: 0.15,
            g2: 0.15,
            gs1: 0.1,
            nbar1: 100.0,
            nbar2: 100.0,
            ..NetworkParams::default()
        }
    }

    #[test]
    fn stable_point_report_is_complete() {
        let report = solve_point(&fig2(), &Tolerances::default()).unwrap();
        assert!(report.is_stable());
        assert_eq!(report.ordering.len(), 8);
        assert_eq!(report.ordering[0], "x_b1");
        assert_eq!(report.ordering[7], "y_a");
        assert_eq!(report.covariance.as_ref().unwrap().len(), 8);
        assert_eq!(report.pairs.len(), 6);
        assert_relative_eq!(
            report.pairs[0].log_neg,
            0.097560108644840,
            max_relative = 1e-9
        );
        assert!(report.residual.unwrap() <= RESIDUAL_RTOL * 0.1);
    }

    #[test]
    fn unstable_point_report_has_spectrum_but_no_covariance() {
        let params = NetworkParams {
            delta_c: -1.0,
            g1: 0.5,
            ..fig2()
        };
        let report = solve_point(&params, &Tolerances::default()).unwrap();
        assert!(!report.is_stable());
        assert!(report.covariance.is_none());
        assert!(report.pairs.is_empty());
        assert_eq!(report.stability.spectrum.len(), 8);
        assert!(report.stability.max_re > 0.0);
    }

    #[test]
    fn json_round_trips_params_exactly() {
        let report = solve_point(&fig2(), &Tolerances::default()).unwrap();
        let json = to_json(&report);
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        let echo = &parsed["params"];
        // shortest-round-trip float serialization: re-parsing must reproduce
        // the exact input bits
        assert_eq!(
            echo["gamma1"].as_f64().unwrap().to_bits(),
            1e-5f64.to_bits()
        );
        assert_eq!(echo["gs1"].as_f64().unwrap().to_bits(), 0.1f64.to_bits());
        assert!(echo["aux_present"].as_bool().unwrap());
        // every config key is present in the echo
        for key in crate::config::FIELD_NAMES {
            assert!(echo.get(key).is_some(), "missing key {key}");
        }
    }

    #[test]
    fn darkmode_diagnostics_bundle() {
        let diag = darkmode_diagnostics(&fig2(), &Tolerances::default(), false).unwrap();
        assert!(!diag.dark_mode.dark_mode_exists); // gs1 breaks it
        assert!(diag.taxonomy.is_none());

        let mut params = fig2();
        params.gs1 = 0.1;
        params.gs2 = 0.1;
        params.j_hop = 0.05;
        params.eta_hop = 0.05;
        let diag = darkmode_diagnostics(&params, &Tolerances::default(), true).unwrap();
        let tax = diag.taxonomy.unwrap();
        assert_eq!(tax.len(), 14);
        assert_eq!(tax.iter().filter(|v| v.dark_mode_exists).count(), 6);
    }

    #[test]
    fn csv_report_lists_all_pairs() {
        let report = solve_point(&fig2(), &Tolerances::default()).unwrap();
        let csv = report_to_csv(&report);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 7);
        assert_eq!(lines[0], "pair,sigma_minus,log_neg");
        assert!(lines[1].starts_with("a_b1,"));
    }
}
