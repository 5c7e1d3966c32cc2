//! Property tests for the algebraic invariants that hold for *any* valid
//! input, not just the reference parameter sets.

use nalgebra::Matrix4;
use proptest::prelude::*;

use optonet::darkmode::{
    cm_rel_analysis, cm_rel_transform, dark_mode_conditions, DEFAULT_DARK_MODE_TOL,
};
use optonet::entanglement::log_negativity;
use optonet::model::NetworkParams;
use optonet::sweep::GridSpec;

/// Two-mode squeezed covariance with local rotations and added thermal
/// noise; physical for every (r, theta1, theta2, t >= 0).
fn covariance(r: f64, th1: f64, th2: f64, t: f64) -> Matrix4<f64> {
    let c = (2.0 * r).cosh() / 2.0;
    let s = (2.0 * r).sinh() / 2.0;
    let core = Matrix4::new(
        c, 0.0, s, 0.0, //
        0.0, c, 0.0, -s, //
        s, 0.0, c, 0.0, //
        0.0, -s, 0.0, c,
    );
    let mut local = Matrix4::zeros();
    for (b, th) in [(0usize, th1), (1, th2)] {
        let rot = nalgebra::Matrix2::new(th.cos(), th.sin(), -th.sin(), th.cos());
        local.view_mut((2 * b, 2 * b), (2, 2)).copy_from(&rot);
    }
    local * core * local.transpose() + Matrix4::identity() * t
}

fn swap_modes(v: &Matrix4<f64>) -> Matrix4<f64> {
    let mut p = Matrix4::zeros();
    p[(0, 2)] = 1.0;
    p[(1, 3)] = 1.0;
    p[(2, 0)] = 1.0;
    p[(3, 1)] = 1.0;
    p * v * p.transpose()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    /// E_N is symmetric under exchanging the two modes.
    #[test]
    fn negativity_is_pair_order_invariant(
        r in 0.0..1.5f64,
        th1 in 0.0..std::f64::consts::TAU,
        th2 in 0.0..std::f64::consts::TAU,
        t in 0.0..1.0f64,
    ) {
        let v = covariance(r, th1, th2, t);
        let (s_fwd, en_fwd) = log_negativity(&v).unwrap();
        let (s_rev, en_rev) = log_negativity(&swap_modes(&v)).unwrap();
        prop_assert!((s_fwd - s_rev).abs() <= 1e-12 * s_fwd.max(1.0));
        prop_assert!((en_fwd - en_rev).abs() <= 1e-10);
    }

    /// E_N never goes negative and vanishes exactly at or above the
    /// separability threshold.
    #[test]
    fn negativity_clamps_at_zero(
        r in 0.0..1.5f64,
        t in 0.0..2.0f64,
    ) {
        let v = covariance(r, 0.0, 0.0, t);
        let (sigma, en) = log_negativity(&v).unwrap();
        prop_assert!(en >= 0.0);
        prop_assert_eq!(en > 0.0, sigma < 0.5);
    }

    /// The dark-mode verdict is invariant under a global rescaling of all
    /// coupling channels.
    #[test]
    fn dark_mode_verdict_is_scale_invariant(
        g1 in 0.01..0.3f64,
        g2 in 0.01..0.3f64,
        gs1 in 0.0..0.3f64,
        gs2 in 0.0..0.3f64,
        eta in -0.1..0.1f64,
        lambda in 1e-3..1e3f64,
    ) {
        let base = NetworkParams { g1, g2, gs1, gs2, eta_hop: eta, ..NetworkParams::default() };
        let scaled = NetworkParams {
            g1: lambda * g1,
            g2: lambda * g2,
            gs1: lambda * gs1,
            gs2: lambda * gs2,
            eta_hop: lambda * eta,
            ..base
        };
        let v0 = dark_mode_conditions(&base, DEFAULT_DARK_MODE_TOL).unwrap();
        let v1 = dark_mode_conditions(&scaled, DEFAULT_DARK_MODE_TOL).unwrap();
        prop_assert_eq!(v0.dark_mode_exists, v1.dark_mode_exists);
    }

    /// The collective-coordinate transform is orthogonal and preserves the
    /// oscillator trace for any signed couplings.
    #[test]
    fn collective_transform_is_orthogonal(
        g1 in -0.5..0.5f64,
        g2 in 0.01..0.5f64,
        w1 in 0.5..2.0f64,
        w2 in 0.5..2.0f64,
    ) {
        let t = cm_rel_transform(g1, g2).unwrap();
        let err = (t.transpose() * t - Matrix4::identity()).abs().max();
        prop_assert!(err <= 4.0 * f64::EPSILON);
        let rep = cm_rel_analysis(g1, g2, 0.0, w1, w2, DEFAULT_DARK_MODE_TOL).unwrap();
        prop_assert!((rep.omega_cm + rep.omega_r - w1 - w2).abs() <= 1e-12 * (w1 + w2));
    }

    /// Linear grids hit both endpoints exactly and are strictly monotone.
    #[test]
    fn linear_grids_are_well_formed(
        start in -10.0..10.0f64,
        width in 0.1..10.0f64,
        count in 2..500usize,
    ) {
        let stop = start + width;
        let values = GridSpec::Linear { start, stop, count }.values().unwrap();
        prop_assert_eq!(values.len(), count);
        prop_assert_eq!(values[0], start);
        prop_assert!((values[count - 1] - stop).abs() <= 1e-12 * stop.abs().max(1.0));
        prop_assert!(values.windows(2).all(|w| w[1] > w[0]));
    }
}
