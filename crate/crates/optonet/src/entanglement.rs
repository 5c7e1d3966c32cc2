//! Two-mode reduced covariances and the logarithmic negativity
//! E_N = max(0, -ln 2 sigma-), with sigma- the smallest symplectic eigenvalue
//! of the partially transposed two-mode covariance.
//!
//! Quadrature convention: X = (o' + o)/sqrt(2), Y = i(o' - o)/sqrt(2), vacuum
//! variance 1/2. Entanglement exists iff sigma- < 1/2; mixing this up with
//! the vacuum-variance-1 convention silently halves/doubles the threshold, so
//! the convention is pinned here and tested.

use nalgebra::{DMatrix, Matrix2, Matrix4};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lyapunov::CovarianceMatrix;
use crate::model::Mode;

/// Tolerance for clamping the discriminant Sigma^2 - 4 det V at the branch
/// point; near-separable states sit numerically right on it.
pub const DISCRIMINANT_CLAMP_TOL: f64 = 1e-12;

/// An ordered pair of distinct modes. The first mode's block lands in the
/// upper-left of the reduced covariance; E_N is symmetric under swapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ModePair {
    pub first: Mode,
    pub second: Mode,
}

impl ModePair {
    pub fn new(first: Mode, second: Mode) -> Result<Self> {
        if first == second {
            return Err(Error::Contract(format!(
                "mode pair must name two distinct modes, got ({first}, {second})"
            )));
        }
        Ok(Self { first, second })
    }

    pub fn label(&self) -> String {
        format!("{}_{}", self.first, self.second)
    }
}

/// Per-pair entanglement summary: the 2x2 blocks of the reduced covariance,
/// the smallest partially-transposed symplectic eigenvalue, and E_N.
#[derive(Debug, Clone, Serialize)]
pub struct EntanglementReport {
    pub pair: ModePair,
    pub sigma_minus: f64,
    pub log_neg: f64,
    pub block_a: Matrix2<f64>,
    pub block_b: Matrix2<f64>,
    pub block_ab: Matrix2<f64>,
}

/// Extract the 4x4 reduced covariance of a mode pair, arranged as
/// [[V_A, V_AB], [V_AB^T, V_B]] with A = `pair.first`.
pub fn reduce_covariance(cov: &CovarianceMatrix, pair: ModePair) -> Result<Matrix4<f64>> {
    let layout = &cov.layout;
    let rows = [
        layout.x_index(pair.first)?,
        layout.y_index(pair.first)?,
        layout.x_index(pair.second)?,
        layout.y_index(pair.second)?,
    ];
    Ok(Matrix4::from_fn(|i, j| cov.v[(rows[i], rows[j])]))
}

/// Evaluate sigma- and E_N for a 4x4 reduced covariance.
///
/// sigma- = sqrt([Sigma - sqrt(Sigma^2 - 4 det V)]/2) with
/// Sigma = det V_A + det V_B - 2 det V_AB; E_N = max(0, -ln 2 sigma-).
pub fn log_negativity(v_red: &Matrix4<f64>) -> Result<(f64, f64)> {
    log_negativity_with_tol(v_red, DISCRIMINANT_CLAMP_TOL)
}

/// [`log_negativity`] with an explicit discriminant clamp tolerance.
pub fn log_negativity_with_tol(v_red: &Matrix4<f64>, clamp_tol: f64) -> Result<(f64, f64)> {
    let asym = (v_red - v_red.transpose()).abs().max();
    if asym > 1e-9 {
        return Err(Error::UnphysicalCovariance(format!(
            "reduced covariance is not symmetric (max asymmetry {asym:.3e})"
        )));
    }
    let va = v_red.fixed_view::<2, 2>(0, 0).into_owned();
    let vb = v_red.fixed_view::<2, 2>(2, 2).into_owned();
    let vab = v_red.fixed_view::<2, 2>(0, 2).into_owned();

    let sigma = va.determinant() + vb.determinant() - 2.0 * vab.determinant();
    let det_v = v_red.determinant();
    let mut disc = sigma * sigma - 4.0 * det_v;
    if disc < 0.0 {
        if disc < -clamp_tol {
            return Err(Error::UnphysicalCovariance(format!(
                "discriminant Sigma^2 - 4 det V = {disc:.3e} below -{clamp_tol:.1e}; \
                 not a valid two-mode covariance"
            )));
        }
        disc = 0.0;
    }
    // (Sigma - sqrt(disc))/2 cancels badly for strongly squeezed states;
    // the conjugate form 2 det V / (Sigma + sqrt(disc)) is exact and stable.
    let root = disc.sqrt();
    let mut inner = if sigma + root > 0.0 {
        2.0 * det_v / (sigma + root)
    } else {
        (sigma - root) / 2.0
    };
    if inner < 0.0 {
        if inner < -clamp_tol {
            return Err(Error::UnphysicalCovariance(format!(
                "sigma-^2 = {inner:.3e} is negative; not a valid two-mode covariance"
            )));
        }
        inner = 0.0;
    }
    let sigma_minus = inner.sqrt();
    if sigma_minus.is_nan() || sigma_minus <= 0.0 {
        return Err(Error::UnphysicalCovariance(format!(
            "sigma- = {sigma_minus} is not a positive real"
        )));
    }
    let log_neg = (-(2.0 * sigma_minus).ln()).max(0.0);
    Ok((sigma_minus, log_neg))
}

/// Full report for one pair.
pub fn pair_report(cov: &CovarianceMatrix, pair: ModePair) -> Result<EntanglementReport> {
    pair_report_with_tol(cov, pair, DISCRIMINANT_CLAMP_TOL)
}

pub fn pair_report_with_tol(
    cov: &CovarianceMatrix,
    pair: ModePair,
    clamp_tol: f64,
) -> Result<EntanglementReport> {
    let v_red = reduce_covariance(cov, pair)?;
    let (sigma_minus, log_neg) = log_negativity_with_tol(&v_red, clamp_tol)?;
    Ok(EntanglementReport {
        pair,
        sigma_minus,
        log_neg,
        block_a: v_red.fixed_view::<2, 2>(0, 0).into_owned(),
        block_b: v_red.fixed_view::<2, 2>(2, 2).into_owned(),
        block_ab: v_red.fixed_view::<2, 2>(0, 2).into_owned(),
    })
}

/// Reports for every mode pair of the system, in a fixed deterministic order:
/// (a,b1), (a,b2), (b1,b2), then when the auxiliary cavity is present
/// (as,b1), (as,b2), (a,as).
pub fn all_pair_report(cov: &CovarianceMatrix) -> Result<Vec<EntanglementReport>> {
    let mut pairs = vec![
        ModePair::new(Mode::A, Mode::B1)?,
        ModePair::new(Mode::A, Mode::B2)?,
        ModePair::new(Mode::B1, Mode::B2)?,
    ];
    if cov.layout.aux_present() {
        pairs.push(ModePair::new(Mode::As, Mode::B1)?);
        pairs.push(ModePair::new(Mode::As, Mode::B2)?);
        pairs.push(ModePair::new(Mode::A, Mode::As)?);
    }
    pairs
        .into_iter()
        .map(|pair| pair_report(cov, pair))
        .collect()
}

/// Independent entanglement test: smallest symplectic eigenvalue of the
/// partially transposed covariance, computed from the spectrum of Omega*V
/// instead of the closed-form invariants. Used to cross-check
/// [`log_negativity`]; kept public for the verification suites.
pub fn ppt_min_symplectic_eigenvalue(v_red: &Matrix4<f64>) -> Result<f64> {
    // partial transpose on mode B = sign flip of Y_B
    let p = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, 1.0, 1.0, -1.0));
    let vt = p * v_red * p;
    let omega = crate::lyapunov::symplectic_form(4);
    let m = DMatrix::from_fn(4, 4, |i, j| {
        (0..4).map(|k| omega[(i, k)] * vt[(k, j)]).sum::<f64>()
    });
    let spectrum = crate::model::drift_spectrum(&m)?;
    // eigenvalues of Omega*V come in +-(i nu) pairs; nu = |imag part|
    spectrum
        .iter()
        .map(|z| z.im.abs().max(z.re.abs()))
        .fold(None, |acc: Option<f64>, nu| {
            Some(acc.map_or(nu, |a| a.min(nu)))
        })
        .ok_or_else(|| Error::Numerical("empty symplectic spectrum".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lyapunov::solve_lyapunov;
    use crate::model::{build_drift_diffusion, ModeLayout, NetworkParams};
    use approx::assert_relative_eq;
    use nalgebra::Matrix4;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fig2_params() -> NetworkParams {
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

    /// Two-mode squeezed covariance: V_A = V_B = cosh(2r)/2 I,
    /// V_AB = sinh(2r)/2 diag(1,-1). Analytically sigma- = e^{-2r}/2,
    /// E_N = 2r.
    fn two_mode_squeezed(r: f64) -> Matrix4<f64> {
        let c = (2.0 * r).cosh() / 2.0;
        let s = (2.0 * r).sinh() / 2.0;
        Matrix4::new(
            c, 0.0, s, 0.0, //
            0.0, c, 0.0, -s, //
            s, 0.0, c, 0.0, //
            0.0, -s, 0.0, c,
        )
    }

    #[test]
    fn vacuum_saturates_the_criterion() {
        let v = Matrix4::identity() * 0.5;
        let (sigma, en) = log_negativity(&v).unwrap();
        assert_relative_eq!(sigma, 0.5, max_relative = 1e-14);
        assert_eq!(en, 0.0);
    }

    #[test]
    fn two_mode_squeezed_matches_analytic_negativity() {
        for r in [0.1, 0.5, 1.0, 1.7] {
            let v = two_mode_squeezed(r);
            let (sigma, en) = log_negativity(&v).unwrap();
            assert_relative_eq!(sigma, (-2.0 * r).exp() / 2.0, max_relative = 1e-12);
            assert_relative_eq!(en, 2.0 * r, max_relative = 1e-12);
        }
        // frozen point from the contract: r = 0.5 gives E_N = 1.0
        let (_, en) = log_negativity(&two_mode_squeezed(0.5)).unwrap();
        assert_relative_eq!(en, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn decoupled_product_state_marginals() {
        let params = NetworkParams {
            nbar1: 3.0,
            ..NetworkParams::default()
        };
        let dd = build_drift_diffusion(&params).unwrap();
        let cov = solve_lyapunov(&dd).unwrap();

        let v_b1_a = reduce_covariance(&cov, ModePair::new(Mode::B1, Mode::A).unwrap()).unwrap();
        let expect = Matrix4::from_diagonal(&nalgebra::Vector4::new(3.5, 3.5, 0.5, 0.5));
        assert!((v_b1_a - expect).abs().max() < 1e-12);

        let v_a_b1 = reduce_covariance(&cov, ModePair::new(Mode::A, Mode::B1).unwrap()).unwrap();
        let expect = Matrix4::from_diagonal(&nalgebra::Vector4::new(0.5, 0.5, 3.5, 3.5));
        assert!((v_a_b1 - expect).abs().max() < 1e-12);

        for report in all_pair_report(&cov).unwrap() {
            assert_eq!(report.log_neg, 0.0, "pair {}", report.pair.label());
            assert!(report.block_ab.abs().max() < 1e-12);
        }
    }

    #[test]
    fn pair_order_swap_exchanges_blocks_and_preserves_negativity() {
        let dd = build_drift_diffusion(&fig2_params()).unwrap();
        let cov = solve_lyapunov(&dd).unwrap();
        let fwd = pair_report(&cov, ModePair::new(Mode::A, Mode::B1).unwrap()).unwrap();
        let rev = pair_report(&cov, ModePair::new(Mode::B1, Mode::A).unwrap()).unwrap();
        assert_eq!(fwd.block_a, rev.block_b);
        assert_eq!(fwd.block_b, rev.block_a);
        assert_eq!(fwd.block_ab, rev.block_ab.transpose());
        assert_relative_eq!(fwd.log_neg, rev.log_neg, max_relative = 1e-13);
    }

    #[test]
    fn fig2_point_reproduces_reported_negativities() {
        // cross-implementation frozen values for the red-sideband point
        // (delta_s = 1, gs1 = 0.1) of the standard parameter set
        let dd = build_drift_diffusion(&fig2_params()).unwrap();
        let cov = solve_lyapunov(&dd).unwrap();
        let reports = all_pair_report(&cov).unwrap();
        let en1 = &reports[0];
        let en2 = &reports[1];
        let enm = &reports[2];
        assert_relative_eq!(en1.log_neg, 0.097560108644840, max_relative = 1e-9);
        assert_relative_eq!(en1.sigma_minus, 0.453523909250995, max_relative = 1e-9);
        assert_relative_eq!(en2.log_neg, 0.096367331528583, max_relative = 1e-9);
        assert_eq!(enm.log_neg, 0.0);
        assert_relative_eq!(enm.sigma_minus, 0.527221218955212, max_relative = 1e-9);
    }

    #[test]
    fn reduction_agrees_with_brute_force_index_bookkeeping() {
        let dd = build_drift_diffusion(&fig2_params()).unwrap();
        let cov = solve_lyapunov(&dd).unwrap();
        // frozen ordering: (X_b1, Y_b1, X_b2, Y_b2, X_as, Y_as, X_a, Y_a)
        let idx = [6usize, 7, 2, 3]; // (a, b2)
        let manual = Matrix4::from_fn(|i, j| cov.v[(idx[i], idx[j])]);
        let reduced = reduce_covariance(&cov, ModePair::new(Mode::A, Mode::B2).unwrap()).unwrap();
        assert_eq!(manual, reduced);
    }

    #[test]
    fn unknown_or_absent_modes_are_errors() {
        let params = NetworkParams {
            aux_present: false,
            ..NetworkParams::default()
        };
        let dd = build_drift_diffusion(&params).unwrap();
        let cov = solve_lyapunov(&dd).unwrap();
        match reduce_covariance(&cov, ModePair::new(Mode::A, Mode::As).unwrap()) {
            Err(Error::ModeAbsent(m)) => assert_eq!(m, "as"),
            other => panic!("expected mode-absent error, got {other:?}"),
        }
        assert!(ModePair::new(Mode::A, Mode::A).is_err());
    }

    #[test]
    fn invalid_covariance_is_rejected() {
        // frozen search result with Sigma^2 - 4 det V = -0.26995
        let v = Matrix4::new(
            -0.157, -0.150, 0.456, -0.138, //
            -0.150, -0.568, 0.192, 0.183, //
            0.456, 0.192, 0.086, 0.199, //
            -0.138, 0.183, 0.199, 0.450,
        );
        match log_negativity(&v) {
            Err(Error::UnphysicalCovariance(_)) => {}
            other => panic!("expected unphysical-covariance error, got {other:?}"),
        }
        // asymmetric input is a contract violation as well
        let mut w = Matrix4::identity() * 0.5;
        w[(0, 1)] = 0.3;
        assert!(log_negativity(&w).is_err());
    }

    fn random_rotation(rng: &mut impl Rng) -> nalgebra::Matrix2<f64> {
        let th: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        nalgebra::Matrix2::new(th.cos(), th.sin(), -th.sin(), th.cos())
    }

    /// Random physical two-mode covariance: a two-mode squeezed core with
    /// random local squeezers/rotations and a dash of thermal noise.
    fn random_physical_covariance(rng: &mut impl Rng) -> Matrix4<f64> {
        let r = rng.random_range(0.0..1.2);
        let mut v = two_mode_squeezed(r);
        let mut s_local = Matrix4::zeros();
        for b in 0..2 {
            let rot = random_rotation(rng);
            let z = rng.random_range(-0.4..0.4f64);
            let sq = nalgebra::Matrix2::new(z.exp(), 0.0, 0.0, (-z).exp());
            let block = rot * sq;
            s_local.view_mut((2 * b, 2 * b), (2, 2)).copy_from(&block);
        }
        v = s_local * v * s_local.transpose();
        // extra classical (thermal) noise keeps the state physical and
        // pushes a fraction of the samples across the separability line
        let t = rng.random_range(0.0..0.8);
        v + Matrix4::identity() * t
    }

    #[test]
    fn closed_form_agrees_with_ppt_symplectic_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x22bb_0001);
        let mut entangled = 0usize;
        for _ in 0..1000 {
            let v = random_physical_covariance(&mut rng);
            let (sigma, en) = log_negativity(&v).unwrap();
            let nu = ppt_min_symplectic_eigenvalue(&v).unwrap();
            assert_relative_eq!(sigma, nu, max_relative = 1e-8);
            assert_eq!(en > 0.0, nu < 0.5 - 1e-12, "criterion sign mismatch");
            if en > 0.0 {
                entangled += 1;
            }
        }
        // the sample must actually exercise both sides of the criterion
        assert!(entangled > 100, "only {entangled} entangled samples");
        assert!(
            entangled < 900,
            "only {} separable samples",
            1000 - entangled
        );
    }

    #[test]
    fn negativity_invariant_under_local_rotations() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x22bb_0002);
        for _ in 0..200 {
            let v = random_physical_covariance(&mut rng);
            let (_, en) = log_negativity(&v).unwrap();
            let mut s = Matrix4::zeros();
            s.view_mut((0, 0), (2, 2))
                .copy_from(&random_rotation(&mut rng));
            s.view_mut((2, 2), (2, 2))
                .copy_from(&random_rotation(&mut rng));
            let v_rot = s * v * s.transpose();
            let (_, en_rot) = log_negativity(&v_rot).unwrap();
            assert!(
                (en - en_rot).abs() <= 1e-10,
                "E_N changed under local rotation: {en} vs {en_rot}"
            );
        }
    }

    #[test]
    fn negativity_is_continuous_along_parameter_lines() {
        // a line through the entangled region and across the E_N = 0 kink
        let mut params = fig2_params();
        let mut prev: Option<f64> = None;
        let h = 2e-3;
        let mut max_step = 0f64;
        for k in 0..=200 {
            params.delta_s = 0.8 + h * k as f64;
            let dd = build_drift_diffusion(&params).unwrap();
            let cov = solve_lyapunov(&dd).unwrap();
            let en = pair_report(&cov, ModePair::new(Mode::A, Mode::B1).unwrap())
                .unwrap()
                .log_neg;
            if let Some(p) = prev {
                max_step = max_step.max((en - p).abs());
            }
            prev = Some(en);
        }
        assert!(
            max_step < 0.01,
            "E_N jumped by {max_step} over a {h} step in delta_s"
        );
    }

    #[test]
    fn mechanical_entanglement_gone_at_moderate_occupation() {
        // heavier-damping mechanical set at nbar = 0.01: the b1-b2 pair is
        // separable in both the dark-mode-intact and -broken variants
        for gs1 in [0.0, 0.05] {
            let params = NetworkParams {
                gamma1: 0.1,
                gamma2: 0.1,
                g1: 0.15,
                g2: 0.15,
                gs1,
                delta_c: 3.0,
                delta_s: 5.0,
                nbar1: 0.01,
                nbar2: 0.01,
                ..NetworkParams::default()
            };
            let dd = build_drift_diffusion(&params).unwrap();
            let cov = solve_lyapunov(&dd).unwrap();
            let rep = pair_report(&cov, ModePair::new(Mode::B1, Mode::B2).unwrap()).unwrap();
            assert_eq!(rep.log_neg, 0.0, "gs1 = {gs1}");
        }
    }

    #[test]
    fn optomechanical_entanglement_survives_hot_baths_when_dark_mode_broken() {
        let params = NetworkParams {
            nbar1: 400.0,
            nbar2: 400.0,
            ..fig2_params()
        };
        let dd = build_drift_diffusion(&params).unwrap();
        let cov = solve_lyapunov(&dd).unwrap();
        let rep = pair_report(&cov, ModePair::new(Mode::A, Mode::B1).unwrap()).unwrap();
        assert!(rep.log_neg > 0.0, "E_N1 = {}", rep.log_neg);
    }

    #[test]
    fn all_pair_report_order_is_deterministic() {
        let dd = build_drift_diffusion(&fig2_params()).unwrap();
        let cov = solve_lyapunov(&dd).unwrap();
        let labels: Vec<String> = all_pair_report(&cov)
            .unwrap()
            .iter()
            .map(|r| r.pair.label())
            .collect();
        assert_eq!(labels, ["a_b1", "a_b2", "b1_b2", "as_b1", "as_b2", "a_as"]);

        let params = NetworkParams {
            aux_present: false,
            ..NetworkParams::default()
        };
        let dd = build_drift_diffusion(&params).unwrap();
        let cov = solve_lyapunov(&dd).unwrap();
        let labels: Vec<String> = all_pair_report(&cov)
            .unwrap()
            .iter()
            .map(|r| r.pair.label())
            .collect();
        assert_eq!(labels, ["a_b1", "a_b2", "b1_b2"]);
    }

    #[test]
    fn layout_mismatch_is_detected_via_mode_lookup() {
        // a covariance matrix built under the three-mode layout cannot be
        // asked about the auxiliary cavity
        let v = nalgebra::DMatrix::identity(6, 6) * 0.5;
        let cov = CovarianceMatrix::new(v, ModeLayout::new(false));
        assert!(reduce_covariance(&cov, ModePair::new(Mode::As, Mode::B1).unwrap()).is_err());
    }
}
