//! Steady-state covariance from the continuous-time Lyapunov equation
//! A V + V A^T = -Q.
//!
//! At this system size (2N <= 8) the dense Kronecker vectorization
//! (I (x) A + A (x) I) vec(V) = -vec(Q) is exact, simple and fast, so it is
//! the primary solve; a couple of iterative-refinement passes push the
//! residual down to the solver tolerance even for stiff parameter sets
//! (gamma ~ 1e-5 next to kappa ~ 0.1).

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::model::{check_stability, DriftDiffusion, ModeLayout, StabilityClass};

/// Relative residual tolerance of the solver: the accepted solution satisfies
/// ||A V + V A^T + Q||_max <= RESIDUAL_RTOL * ||Q||_max.
pub const RESIDUAL_RTOL: f64 = 1e-10;

/// Symmetric positive-semidefinite steady-state covariance matrix, in the
/// layout's quadrature ordering. Explicitly symmetrized on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    pub v: DMatrix<f64>,
    pub layout: ModeLayout,
}

impl CovarianceMatrix {
    /// Wrap a raw matrix, symmetrizing it: V <- (V + V^T)/2.
    pub fn new(v: DMatrix<f64>, layout: ModeLayout) -> Self {
        let sym = (&v + v.transpose()) * 0.5;
        Self { v: sym, layout }
    }

    pub fn dim(&self) -> usize {
        self.v.nrows()
    }

    /// Smallest eigenvalue of the Hermitian matrix V + (i/2) Omega, where
    /// Omega is the symplectic form for the [X, Y] = i convention. Physical
    /// states have this >= 0 (up to numerical noise).
    ///
    /// Computed through the real symmetric embedding [[V, -Omega/2],
    /// [Omega/2, V]], which carries the same spectrum (doubled).
    pub fn physicality_floor(&self) -> f64 {
        let n = self.dim();
        let omega = symplectic_form(n);
        let mut emb = DMatrix::<f64>::zeros(2 * n, 2 * n);
        emb.view_mut((0, 0), (n, n)).copy_from(&self.v);
        emb.view_mut((n, n), (n, n)).copy_from(&self.v);
        emb.view_mut((0, n), (n, n)).copy_from(&(-0.5 * &omega));
        emb.view_mut((n, 0), (n, n)).copy_from(&(0.5 * &omega));
        emb.symmetric_eigenvalues()
            .iter()
            .fold(f64::INFINITY, |acc, &e| acc.min(e))
    }
}

/// The standard symplectic form for the (X_1, Y_1, ..., X_N, Y_N) ordering:
/// block-diagonal copies of [[0, 1], [-1, 0]].
pub fn symplectic_form(dim: usize) -> DMatrix<f64> {
    assert!(
        dim.is_multiple_of(2),
        "symplectic form needs an even dimension"
    );
    let mut omega = DMatrix::<f64>::zeros(dim, dim);
    for b in 0..dim / 2 {
        omega[(2 * b, 2 * b + 1)] = 1.0;
        omega[(2 * b + 1, 2 * b)] = -1.0;
    }
    omega
}

/// Solve A V + V A^T = -Q for the steady-state covariance.
///
/// Requires a strictly stable drift (marginal stability is rejected: the
/// equation has no unique solution there).
pub fn solve_lyapunov(dd: &DriftDiffusion) -> Result<CovarianceMatrix> {
    solve_lyapunov_with_margin(dd, crate::model::DEFAULT_STABILITY_MARGIN)
}

/// [`solve_lyapunov`] with an explicit stability margin.
pub fn solve_lyapunov_with_margin(dd: &DriftDiffusion, margin: f64) -> Result<CovarianceMatrix> {
    solve_lyapunov_with(dd, margin, RESIDUAL_RTOL)
}

/// [`solve_lyapunov`] with explicit stability margin and relative residual
/// tolerance.
pub fn solve_lyapunov_with(
    dd: &DriftDiffusion,
    margin: f64,
    residual_rtol: f64,
) -> Result<CovarianceMatrix> {
    let verdict = check_stability(dd, margin)?;
    match verdict.class {
        StabilityClass::Stable => {}
        StabilityClass::Marginal => {
            return Err(Error::Marginal {
                max_re: verdict.max_re,
                margin,
            })
        }
        StabilityClass::Unstable => {
            return Err(Error::Unstable {
                max_re: verdict.max_re,
            })
        }
    }

    let n = dd.dim();
    let a = &dd.drift;
    let q = &dd.diffusion;

    // (I (x) A + A (x) I) vec(V) = -vec(Q), column-major stacking.
    let eye = DMatrix::<f64>::identity(n, n);
    let m = eye.kronecker(a) + a.kronecker(&eye);
    let lu = m.lu();

    let vec_of = |mat: &DMatrix<f64>| DVector::from_column_slice(mat.as_slice());
    let rhs = -vec_of(q);
    let mut x = lu
        .solve(&rhs)
        .ok_or_else(|| Error::Numerical("singular Kronecker system in Lyapunov solve".into()))?;

    let q_max = q.abs().max();
    let tol = residual_rtol * q_max;
    let mut v = DMatrix::from_column_slice(n, n, x.as_slice());

    // Iterative refinement with the cached factorization.
    for _ in 0..3 {
        let res = a * &v + &v * a.transpose() + q;
        if res.abs().max() <= tol {
            break;
        }
        let delta = lu.solve(&(-vec_of(&res))).ok_or_else(|| {
            Error::Numerical("singular Kronecker system in Lyapunov refinement".into())
        })?;
        x += delta;
        v = DMatrix::from_column_slice(n, n, x.as_slice());
    }

    let cov = CovarianceMatrix::new(v, dd.layout);
    let residual = lyapunov_residual(dd, &cov)?;
    if residual > tol {
        return Err(Error::Numerical(format!(
            "Lyapunov residual {residual:.3e} exceeds tolerance {tol:.3e}"
        )));
    }
    Ok(cov)
}

/// Max-norm residual ||A V + V A^T + Q||_max of a candidate covariance.
pub fn lyapunov_residual(dd: &DriftDiffusion, cov: &CovarianceMatrix) -> Result<f64> {
    let n = dd.dim();
    if cov.dim() != n {
        return Err(Error::Contract(format!(
            "shape mismatch: drift is {n}x{n} but covariance is {0}x{0}",
            cov.dim()
        )));
    }
    let res = &dd.drift * &cov.v + &cov.v * dd.drift.transpose() + &dd.diffusion;
    Ok(res.abs().max())
}
