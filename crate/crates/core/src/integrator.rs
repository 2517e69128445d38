//! Adaptive Dormand–Prince 5(4) propagation with optional tangent-space
//! co-integration.
//!
//! The embedded pair controls the local error of the state only; the six
//! tangent vectors ride the accepted step sequence under the linearized flow
//! `v' = J(tau, y(tau)) v`. Giving the tangents their own error control would
//! desynchronize them from the state, which is exactly what a spectrum
//! accumulator must avoid. Targets are landed on exactly: the final step is
//! truncated and the returned time is the requested one, bit for bit.

use crate::error::{Error, Result};

/// Right-hand side of a nonautonomous ODE with an analytic Jacobian
/// (with respect to the state, at fixed time).
pub trait Flow<const N: usize> {
    fn eval(&self, tau: f64, y: &[f64; N]) -> Result<[f64; N]>;

    fn jacobian(&self, tau: f64, y: &[f64; N]) -> Result<[[f64; N]; N]>;

    /// Fused evaluation; implementations override this when the field and
    /// its Jacobian share expensive subexpressions.
    fn eval_with_jacobian(&self, tau: f64, y: &[f64; N]) -> Result<([f64; N], [[f64; N]; N])> {
        Ok((self.eval(tau, y)?, self.jacobian(tau, y)?))
    }
}

/// Step-control settings for the embedded pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Initial step in nondimensional time.
    pub h_init: f64,
    /// Maximum step magnitude.
    pub h_max: f64,
    /// Step budget per `advance` call.
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            h_init: 1e-4,
            h_max: 0.5,
            max_steps: 10_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("rel_tol", self.rel_tol), ("abs_tol", self.abs_tol)] {
            if !(v > 0.0 && v < 1e-2) {
                return Err(Error::InvalidParams(format!(
                    "{name} must lie in (0, 1e-2), got {v}"
                )));
            }
        }
        for (name, v) in [("h_init", self.h_init), ("h_max", self.h_max)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParams(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidParams("max_steps must be positive".into()));
        }
        Ok(())
    }
}

/// Orthonormal-by-convention basis of the tangent space with per-vector
/// accumulated log-stretches.
#[derive(Debug, Clone)]
pub struct TangentFrame<const N: usize> {
    /// `vectors[i]` is the i-th basis vector.
    pub vectors: [[f64; N]; N],
    pub log_norms: [f64; N],
}

impl<const N: usize> TangentFrame<N> {
    pub fn identity() -> Self {
        let mut vectors = [[0.0; N]; N];
        for (i, v) in vectors.iter_mut().enumerate() {
            v[i] = 1.0;
        }
        TangentFrame {
            vectors,
            log_norms: [0.0; N],
        }
    }

    /// Random orthonormal frame: Gaussian entries followed by one
    /// orthonormalization pass (the accumulated norms are reset).
    pub fn random(rng: &mut impl rand::Rng) -> Self {
        let mut frame = TangentFrame {
            vectors: [[0.0; N]; N],
            log_norms: [0.0; N],
        };
        for v in frame.vectors.iter_mut() {
            for x in v.iter_mut() {
                // Box-Muller from two uniforms; avoids an extra dependency.
                let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
                let u2: f64 = rng.gen();
                *x = (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
            }
        }
        frame.orthonormalize();
        frame.log_norms = [0.0; N];
        frame
    }

    /// Modified Gram–Schmidt pass. Returns the pre-normalization norms
    /// (the diagonal stretches) and adds their logs to `log_norms`.
    pub fn orthonormalize(&mut self) -> [f64; N] {
        let mut stretches = [0.0; N];
        for i in 0..N {
            let mut v = self.vectors[i];
            for j in 0..i {
                let q = &self.vectors[j];
                let mut proj = 0.0;
                for k in 0..N {
                    proj += q[k] * v[k];
                }
                for k in 0..N {
                    v[k] -= proj * q[k];
                }
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            let inv = 1.0 / norm;
            for x in v.iter_mut() {
                *x *= inv;
            }
            self.vectors[i] = v;
            self.log_norms[i] += norm.ln();
            stretches[i] = norm;
        }
        stretches
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..N {
            for j in 0..=i {
                let mut dot = 0.0;
                for k in 0..N {
                    dot += self.vectors[i][k] * self.vectors[j][k];
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

// Dormand–Prince 5(4) tableau (FSAL; 7 stages, 6 fresh evaluations/step).
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const B: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
// Difference between the 5th- and 4th-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const BETA: f64 = 0.04;
const EXPO: f64 = 0.2 - BETA * 0.75;
const H_UNDERFLOW: f64 = 1e-14;

/// Reusable stepper: keeps the adapted step size and the PI-controller
/// memory across repeated targets (stroboscopic landings).
pub struct Propagator<'f, F: Flow<N>, const N: usize> {
    flow: &'f F,
    cfg: IntegratorConfig,
    h: f64,
    err_old: f64,
}

impl<'f, F: Flow<N>, const N: usize> Propagator<'f, F, N> {
    pub fn new(flow: &'f F, cfg: &IntegratorConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Propagator {
            flow,
            cfg: *cfg,
            h: cfg.h_init,
            err_old: 1e-4,
        })
    }

    pub fn flow(&self) -> &F {
        self.flow
    }

    /// Advances the state to exactly `target` (forward or backward).
    pub fn advance(&mut self, tau: &mut f64, y: &mut [f64; N], target: f64) -> Result<()> {
        self.advance_inner(tau, y, None, target, None)
    }

    /// Advances state and tangent frame together on one accepted-step
    /// sequence. When `divergence` is given, accumulates the quadrature of
    /// `trace J` along the trajectory into it (an independent route to the
    /// phase-space contraction rate).
    pub fn advance_with_tangents(
        &mut self,
        tau: &mut f64,
        y: &mut [f64; N],
        frame: &mut TangentFrame<N>,
        target: f64,
        divergence: Option<&mut f64>,
    ) -> Result<()> {
        self.advance_inner(tau, y, Some(&mut frame.vectors), target, divergence)
    }

    fn advance_inner(
        &mut self,
        tau: &mut f64,
        y: &mut [f64; N],
        mut tangents: Option<&mut [[f64; N]; N]>,
        target: f64,
        mut divergence: Option<&mut f64>,
    ) -> Result<()> {
        if target == *tau {
            return Ok(());
        }
        let dir = if target > *tau { 1.0 } else { -1.0 };
        let mut steps = 0usize;

        // Stage storage. k[s] is the state derivative at stage s; kt[s] the
        // tangent-matrix derivative J(stage) * V(stage).
        let mut k = [[0.0; N]; 7];
        let mut kt = [[[0.0; N]; N]; 7];
        let mut tr = [0.0; 7];

        let with_tangents = tangents.is_some();
        let (k0, kt0, tr0) = self.stage_eval(*tau, y, tangents.as_deref(), with_tangents)?;
        k[0] = k0;
        if with_tangents {
            kt[0] = kt0;
            tr[0] = tr0;
        }

        loop {
            let remaining = target - *tau;
            if remaining == 0.0 || remaining * dir <= 0.0 {
                return Ok(());
            }
            if steps >= self.cfg.max_steps {
                return Err(Error::StepBudgetExceeded {
                    max_steps: self.cfg.max_steps,
                    tau: *tau,
                    target,
                });
            }
            steps += 1;

            let mut h = self.h.abs().min(self.cfg.h_max) * dir;
            let mut lands = false;
            if remaining.abs() <= h.abs() {
                h = remaining;
                lands = true;
            }
            if h.abs() < H_UNDERFLOW || *tau + h == *tau {
                return Err(Error::StepUnderflow { h, tau: *tau });
            }

            // Stages 1..6 plus the FSAL stage 7 at (tau + h, y5).
            let mut y_stage = [0.0; N];
            let mut v_stage = [[0.0; N]; N];
            for s in 1..7 {
                for i in 0..N {
                    let mut acc = 0.0;
                    for (l, kl) in k.iter().enumerate().take(s) {
                        acc += A[s][l] * kl[i];
                    }
                    y_stage[i] = y[i] + h * acc;
                }
                let stage_tangents = if with_tangents {
                    let base = tangents.as_deref().unwrap();
                    for vi in 0..N {
                        for i in 0..N {
                            let mut acc = 0.0;
                            for (l, ktl) in kt.iter().enumerate().take(s) {
                                acc += A[s][l] * ktl[vi][i];
                            }
                            v_stage[vi][i] = base[vi][i] + h * acc;
                        }
                    }
                    Some(&v_stage)
                } else {
                    None
                };
                let (ks, kts, trs) =
                    self.stage_eval(*tau + C[s] * h, &y_stage, stage_tangents, with_tangents)?;
                k[s] = ks;
                if with_tangents {
                    kt[s] = kts;
                    tr[s] = trs;
                }
            }

            // 5th-order solution and embedded error estimate.
            let mut y_new = [0.0; N];
            let mut err_terms = [0.0; N];
            for i in 0..N {
                let mut acc = 0.0;
                let mut eacc = 0.0;
                for l in 0..7 {
                    acc += B[l] * k[l][i];
                    eacc += E[l] * k[l][i];
                }
                y_new[i] = y[i] + h * acc;
                let scale = self.cfg.abs_tol + self.cfg.rel_tol * y[i].abs().max(y_new[i].abs());
                let q = h * eacc / scale;
                err_terms[i] = q * q;
            }
            let err = (canonical_sum(&mut err_terms) / N as f64).sqrt();

            if err.is_finite() && err <= 1.0 {
                // accept
                *tau = if lands { target } else { *tau + h };
                *y = y_new;
                if let Some(v) = tangents.as_deref_mut() {
                    for vi in 0..N {
                        for i in 0..N {
                            let mut acc = 0.0;
                            for l in 0..7 {
                                acc += B[l] * kt[l][vi][i];
                            }
                            v[vi][i] += h * acc;
                        }
                    }
                }
                if let Some(div) = divergence.as_deref_mut() {
                    let mut acc = 0.0;
                    for l in 0..7 {
                        acc += B[l] * tr[l];
                    }
                    *div += h * acc;
                }

                let err_floor = err.max(1e-10);
                let fac = err_floor.powf(EXPO) / self.err_old.powf(BETA) / SAFETY;
                let fac = fac.clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
                self.h = (h / fac).abs().min(self.cfg.h_max);
                self.err_old = err_floor;

                if lands {
                    return Ok(());
                }
                // FSAL: stage 7 was evaluated at (tau + h, y_new).
                k[0] = k[6];
                if with_tangents {
                    kt[0] = kt[6];
                    tr[0] = tr[6];
                }
            } else {
                // reject and shrink
                let fac = if err.is_finite() {
                    (err.powf(EXPO) / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN)
                } else {
                    1.0 / FAC_MIN
                };
                self.h = (h / fac).abs();
                if self.h < H_UNDERFLOW {
                    return Err(Error::StepUnderflow { h: self.h, tau: *tau });
                }
            }
        }
    }

    #[allow(clippy::type_complexity)]
    fn stage_eval(
        &self,
        tau: f64,
        y: &[f64; N],
        tangents: Option<&[[f64; N]; N]>,
        with_tangents: bool,
    ) -> Result<([f64; N], [[f64; N]; N], f64)> {
        if !with_tangents {
            return Ok((self.flow.eval(tau, y)?, [[0.0; N]; N], 0.0));
        }
        let (dy, jac) = self.flow.eval_with_jacobian(tau, y)?;
        let v = tangents.unwrap();
        let mut kv = [[0.0; N]; N];
        for vi in 0..N {
            for i in 0..N {
                let mut acc = 0.0;
                for (j, row_j) in v[vi].iter().enumerate() {
                    acc += jac[i][j] * row_j;
                }
                kv[vi][i] = acc;
            }
        }
        let mut trace = 0.0;
        for (i, row) in jac.iter().enumerate() {
            trace += row[i];
        }
        Ok((dy, kv, trace))
    }
}

/// Sum in canonical (sorted) order so the reduction is invariant under any
/// permutation of the addends. Used for the step-error norm: it keeps the
/// accepted-step sequence identical when the state components are permuted.
fn canonical_sum(terms: &mut [f64]) -> f64 {
    terms.sort_unstable_by(f64::total_cmp);
    terms.iter().sum()
}

/// One-shot convenience: integrate `y` from `tau` to exactly `tau_target`.
pub fn step_to<F: Flow<N>, const N: usize>(
    flow: &F,
    cfg: &IntegratorConfig,
    tau: f64,
    y: [f64; N],
    tau_target: f64,
) -> Result<(f64, [f64; N])> {
    let mut prop = Propagator::new(flow, cfg)?;
    let mut t = tau;
    let mut state = y;
    prop.advance(&mut t, &mut state, tau_target)?;
    Ok((t, state))
}

/// One-shot variant advancing a tangent frame along with the state.
pub fn step_with_tangents<F: Flow<N>, const N: usize>(
    flow: &F,
    cfg: &IntegratorConfig,
    tau: f64,
    y: [f64; N],
    frame: &mut TangentFrame<N>,
    tau_target: f64,
) -> Result<(f64, [f64; N])> {
    let mut prop = Propagator::new(flow, cfg)?;
    let mut t = tau;
    let mut state = y;
    prop.advance_with_tangents(&mut t, &mut state, frame, tau_target, None)?;
    Ok((t, state))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::LinearField;

    fn cfg() -> IntegratorConfig {
        IntegratorConfig::default()
    }

    #[test]
    fn exponential_decay_matches_analytic_solution() {
        let flow = LinearField::new([-1.0]);
        let (tau, y) = step_to(&flow, &cfg(), 0.0, [1.0], 1.0).unwrap();
        assert_eq!(tau, 1.0);
        let expected = (-1.0_f64).exp();
        assert!(
            ((y[0] - expected) / expected).abs() < 1e-10,
            "y = {}, expected {expected}",
            y[0]
        );
    }

    #[test]
    fn landing_is_exact() {
        let flow = LinearField::new([-0.3, 0.2]);
        let target = 7.062527086162295; // deliberately not a round number
        let (tau, _) = step_to(&flow, &cfg(), 0.0, [1.0, 1.0], target).unwrap();
        assert_eq!(tau, target);
    }

    #[test]
    fn backward_integration_returns_to_start() {
        let flow = LinearField::new([-1.0, -2.0, 0.5]);
        let y0 = [1.0, 0.5, -0.25];
        let span = 0.4;
        let (t1, y1) = step_to(&flow, &cfg(), 0.0, y0, span).unwrap();
        let (t2, y2) = step_to(&flow, &cfg(), t1, y1, 0.0).unwrap();
        assert_eq!(t2, 0.0);
        for i in 0..3 {
            assert!(
                (y2[i] - y0[i]).abs() < 1e3 * cfg().abs_tol,
                "component {i}: {} vs {}",
                y2[i],
                y0[i]
            );
        }
    }

    #[test]
    fn step_budget_is_enforced() {
        let flow = LinearField::new([-1.0]);
        let tight = IntegratorConfig {
            max_steps: 3,
            h_max: 1e-3,
            ..cfg()
        };
        match step_to(&flow, &tight, 0.0, [1.0], 10.0) {
            Err(Error::StepBudgetExceeded { max_steps: 3, .. }) => {}
            other => panic!("expected StepBudgetExceeded, got {other:?}"),
        }
    }

    #[test]
    fn non_finite_field_underflows_step() {
        struct NanField;
        impl Flow<1> for NanField {
            fn eval(&self, _tau: f64, _y: &[f64; 1]) -> crate::error::Result<[f64; 1]> {
                Ok([f64::NAN])
            }
            fn jacobian(&self, _tau: f64, _y: &[f64; 1]) -> crate::error::Result<[[f64; 1]; 1]> {
                Ok([[f64::NAN]])
            }
        }
        match step_to(&NanField, &cfg(), 0.0, [1.0], 1.0) {
            Err(Error::StepUnderflow { .. }) => {}
            other => panic!("expected StepUnderflow, got {other:?}"),
        }
    }

    #[test]
    fn zero_tangent_stays_zero() {
        let flow = LinearField::new([-1.0, -2.0]);
        let mut frame = TangentFrame::<2>::identity();
        frame.vectors[1] = [0.0, 0.0];
        step_with_tangents(&flow, &cfg(), 0.0, [1.0, 1.0], &mut frame, 2.0).unwrap();
        assert_eq!(frame.vectors[1], [0.0, 0.0]);
    }

    #[test]
    fn tangent_propagation_is_linear() {
        // image of (alpha v + beta w) = alpha image(v) + beta image(w)
        let flow = LinearField::new([-0.7, 0.3]);
        let v = [0.6, -0.8];
        let w = [0.5, 0.5];
        let (alpha, beta) = (1.7, -0.4);
        let run = |vec: [f64; 2]| {
            let mut frame = TangentFrame::<2>::identity();
            frame.vectors[0] = vec;
            step_with_tangents(&flow, &cfg(), 0.0, [1.0, 1.0], &mut frame, 1.5).unwrap();
            frame.vectors[0]
        };
        let combo = run([alpha * v[0] + beta * w[0], alpha * v[1] + beta * w[1]]);
        let iv = run(v);
        let iw = run(w);
        for i in 0..2 {
            let lin = alpha * iv[i] + beta * iw[i];
            assert!(
                ((combo[i] - lin) / lin.abs().max(1e-30)).abs() < 1e-10,
                "component {i}: {} vs {}",
                combo[i],
                lin
            );
        }
    }

    #[test]
    fn tangent_scaling_is_exact_under_doubling() {
        // scaling by a power of two commutes with every operation bit for bit
        let flow = LinearField::new([-0.7, 0.3]);
        let run = |vec: [f64; 2]| {
            let mut frame = TangentFrame::<2>::identity();
            frame.vectors[0] = vec;
            step_with_tangents(&flow, &cfg(), 0.0, [1.0, 1.0], &mut frame, 1.5).unwrap();
            frame.vectors[0]
        };
        let base = run([0.3, -0.9]);
        let doubled = run([0.6, -1.8]);
        assert_eq!(doubled, [2.0 * base[0], 2.0 * base[1]]);
    }

    #[test]
    fn diagonal_tangent_norms_decay_analytically() {
        let flow = LinearField::new([-1.0, -2.0]);
        let mut frame = TangentFrame::<2>::identity();
        let span = 3.0;
        step_with_tangents(&flow, &cfg(), 0.0, [1.0, 1.0], &mut frame, span).unwrap();
        for (i, rate) in [-1.0, -2.0].iter().enumerate() {
            let norm = frame.vectors[i].iter().map(|x| x * x).sum::<f64>().sqrt();
            let expected = (rate * span).exp();
            assert!(
                ((norm - expected) / expected).abs() < 1e-9,
                "vector {i}: norm {norm}, expected {expected}"
            );
        }
    }

    #[test]
    fn orthonormalization_defect_is_tiny() {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(42);
        for _ in 0..20 {
            let mut frame = TangentFrame::<6>::random(&mut rng);
            // shear it, then re-orthonormalize
            for i in 1..6 {
                for k in 0..6 {
                    frame.vectors[i][k] += 0.9 * frame.vectors[i - 1][k];
                }
            }
            frame.orthonormalize();
            assert!(frame.orthonormality_defect() < 1e-12);
        }
    }

    #[test]
    fn config_validation_rejects_bad_tolerances() {
        let mut c = cfg();
        c.rel_tol = 0.5;
        assert!(c.validate().is_err());
        let mut c = cfg();
        c.abs_tol = 0.0;
        assert!(c.validate().is_err());
        let mut c = cfg();
        c.h_max = -1.0;
        assert!(c.validate().is_err());
    }
}
