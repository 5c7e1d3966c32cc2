//! Steady-state Gaussian entanglement in a driven four-mode optomechanical
//! network: drift/diffusion assembly, Lyapunov steady-state covariance,
//! logarithmic negativity, dark-mode diagnostics, and figure-style parameter
//! sweeps.

pub mod config;
pub mod darkmode;
pub mod entanglement;
pub mod error;
pub mod lyapunov;
pub mod model;
pub mod presets;
pub mod report;
pub mod sweep;

pub use error::{Error, Result};
pub use model::{
    build_drift_diffusion, check_stability, DriftDiffusion, Mode, ModeLayout, NetworkParams,
    StabilityClass, StabilityVerdict, DEFAULT_STABILITY_MARGIN,
};
