use thiserror::Error;

/// Errors shared across the simulation and diagnostics layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("natural-frequency bracket is non-positive ({bracket:.6e} Pa): unphysical parameter set")]
    NonPositiveFrequency { bracket: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("bubble {index} radius r = {r:.6e} fell below r_min = {r_min:.2e} at tau = {tau:.6}")]
    RadiusUnderflow {
        index: usize,
        r: f64,
        r_min: f64,
        tau: f64,
    },

    #[error(
        "mass matrix numerically singular (|det| = {det:.3e}) at tau = {tau:.6}, \
         d/R0 = {d_over_r0:.4}, a = {a:.4e}, state = {state:?}"
    )]
    SingularMassMatrix {
        det: f64,
        tau: f64,
        d_over_r0: f64,
        a: f64,
        state: [f64; 6],
    },

    #[error("non-finite state component encountered at tau = {tau:.6}")]
    NonFiniteState { tau: f64 },

    #[error("step budget of {max_steps} exhausted at tau = {tau:.6} while integrating to {target:.6}")]
    StepBudgetExceeded {
        max_steps: usize,
        tau: f64,
        target: f64,
    },

    #[error("step size underflow (h = {h:.3e}) at tau = {tau:.6}")]
    StepUnderflow { h: f64, tau: f64 },

    #[error("{path}:{line}: {msg}")]
    Config {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("cannot read {path}: {source}")]
    ConfigIo {
        path: String,
        source: std::io::Error,
    },

    #[error("invalid sweep specification: {0}")]
    InvalidSpec(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl Error {
    /// True for failures that terminate a trajectory (the caller maps these
    /// to the escape/rupture sentinel class).
    pub fn is_rupture(&self) -> bool {
        matches!(
            self,
            Error::RadiusUnderflow { .. }
                | Error::NonFiniteState { .. }
                | Error::SingularMassMatrix { .. }
        )
    }

    /// Rupture time, when the error carries one.
    pub fn rupture_tau(&self) -> Option<f64> {
        match self {
            Error::RadiusUnderflow { tau, .. }
            | Error::NonFiniteState { tau }
            | Error::SingularMassMatrix { tau, .. } => Some(*tau),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
