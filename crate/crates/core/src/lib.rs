//! Simulation and chaos diagnostics for three acoustically driven,
//! shell-encapsulated gas bubbles coupled by Bjerknes forces.
//!
//! The crate integrates the coupled oscillator system with an adaptive
//! embedded Runge–Kutta pair, computes Lyapunov spectra by tangent-frame
//! renormalization, classifies dynamical regimes from the exponent signs,
//! maps synchronization structure on stroboscopic sections, and scans the
//! `(d/R0, a)` control plane with attractor continuation.

pub mod config;
pub mod error;
pub mod fmt;
pub mod harness;
pub mod integrator;
pub mod lyapunov;
pub mod model;
pub mod poincare;
pub mod raster;
pub mod sweep;
pub mod sync;

pub use config::RunConfig;
pub use error::{Error, Result};
pub use integrator::{Flow, IntegratorConfig, Propagator, TangentFrame};
pub use lyapunov::{
    benettin_spectrum, classify, conditional_spectra, Classification, LyapunovSpectrum,
    RegimeClass,
};
pub use model::{natural_frequency, BubbleSystem, DerivedScales, PhysicalParams, State};
pub use poincare::{count_components, detect_period, sample_section, SectionCloud, SyncTag};
pub use sweep::{
    run_chart, run_path, BubbleFamily, ChartResult, ChartSpec, InitialStatePolicy, PathSample,
    PathSpec,
};
pub use sync::{dwell_fractions, membership, reduced_synchronous_field, SyncFlags, SyncFractions};
