//! Validation vector fields for certifying the spectrum machinery
//! independently of the bubble physics.

use crate::error::Result;
use crate::integrator::Flow;

/// Decoupled linear field `y_i' = rate_i * y_i`; its Lyapunov spectrum is the
/// rate vector, exactly.
#[derive(Debug, Clone, Copy)]
pub struct LinearField<const N: usize> {
    pub rates: [f64; N],
}

impl<const N: usize> LinearField<N> {
    pub fn new(rates: [f64; N]) -> Self {
        LinearField { rates }
    }
}

impl<const N: usize> Flow<N> for LinearField<N> {
    fn eval(&self, _tau: f64, y: &[f64; N]) -> Result<[f64; N]> {
        let mut dy = [0.0; N];
        for i in 0..N {
            dy[i] = self.rates[i] * y[i];
        }
        Ok(dy)
    }

    fn jacobian(&self, _tau: f64, _y: &[f64; N]) -> Result<[[f64; N]; N]> {
        let mut jac = [[0.0; N]; N];
        for (i, row) in jac.iter_mut().enumerate() {
            row[i] = self.rates[i];
        }
        Ok(jac)
    }
}

/// The classical Lorenz system.
#[derive(Debug, Clone, Copy)]
pub struct LorenzField {
    pub sigma: f64,
    pub r: f64,
    pub b: f64,
}

impl LorenzField {
    pub fn classic() -> Self {
        LorenzField {
            sigma: 10.0,
            r: 28.0,
            b: 8.0 / 3.0,
        }
    }
}

/// Published long-run spectrum of the classic Lorenz attractor, used as the
/// certification target for the spectrum accumulator.
pub const LORENZ_CLASSIC_SPECTRUM: [f64; 3] = [0.906, 0.0, -14.572];

impl Flow<3> for LorenzField {
    fn eval(&self, _tau: f64, y: &[f64; 3]) -> Result<[f64; 3]> {
        Ok([
            self.sigma * (y[1] - y[0]),
            y[0] * (self.r - y[2]) - y[1],
            y[0] * y[1] - self.b * y[2],
        ])
    }

    fn jacobian(&self, _tau: f64, y: &[f64; 3]) -> Result<[[f64; 3]; 3]> {
        Ok([
            [-self.sigma, self.sigma, 0.0],
            [self.r - y[2], -1.0, -y[0]],
            [y[1], y[0], -self.b],
        ])
    }
}
