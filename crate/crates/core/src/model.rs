//! Three coupled encapsulated-bubble oscillators in a periodically driven
//! liquid.
//!
//! Each bubble obeys a Rayleigh–Plesset-type balance with a de Jong shell
//! (elasticity `4 chi (1/R0 - 1/R)`, shell friction `4 kappa_s R_t / R^2`)
//! and a first-order sound-radiation correction on the gas term. The bubbles
//! sit at the vertices of an equilateral triangle with side `d` and interact
//! pairwise through the Bjerknes term
//!
//! ```text
//! rho (R_i R_i'' + 3/2 R_i'^2) = P_i - rho * sum_{j != i} d/dt(R_j^2 R_j' / d)
//! ```
//!
//! Everything past this module is nondimensional: radii are scaled by the
//! common equilibrium radius `R0` and time by the linear eigenfrequency
//! `omega0`, so the integrator never sees the raw SI magnitudes (radii of
//! order 1e-6 m against pressures of order 1e5 Pa condition the system
//! badly). Expanding the coupling derivative leaves the accelerations
//! implicit; they are recovered per evaluation from the 3x3 linear system
//! `M(r) w = F(r, u, tau)` with `M_ii = r_i` and `M_ij = (R0/d) r_j^2`,
//! solved by direct elimination (Cramer on the structured matrix).
//!
//! The three-fold exchange symmetry of the system is preserved down to the
//! last bit: every reduction over the three bubbles is evaluated in a
//! canonical (sorted) operand order, so permuting bubble indices permutes
//! the vector field exactly.

use crate::error::{Error, Result};
use crate::integrator::Flow;

/// Nondimensional rupture sentinel: the shell model has lost validity long
/// before the radius reaches a hundredth of its rest value, and the gas term
/// is singular at zero.
pub const R_MIN: f64 = 0.01;

/// Threshold on |det M| below which the acceleration solve is rejected.
pub const SINGULAR_DET_TOL: f64 = 1e-12;

/// Dimensional constants of the three-bubble model, SI units throughout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    /// Liquid density, kg/m^3.
    pub rho: f64,
    /// Surface tension, N/m.
    pub sigma: f64,
    /// Liquid dynamic viscosity, Pa*s.
    pub mu: f64,
    /// Speed of sound in the liquid, m/s.
    pub c: f64,
    /// Polytropic exponent of the gas core (dimensionless).
    pub kappa: f64,
    /// Shell elasticity, N/m.
    pub chi: f64,
    /// Shell viscosity, kg/s.
    pub kappa_s: f64,
    /// Ambient pressure `P_stat - P_v`, Pa.
    pub p0: f64,
    /// Common equilibrium radius, m.
    pub r0: f64,
    /// Acoustic drive amplitude, Pa.
    pub a: f64,
    /// Acoustic cyclic frequency, rad/s.
    pub omega: f64,
    /// Interbubble distance (equilateral configuration), m.
    pub d: f64,
}

impl PhysicalParams {
    /// Water at ambient conditions with a thin lipid shell. Only the drive
    /// frequency is pinned by the measurement convention (omega = 2.87e7 1/s);
    /// the remaining constants are a reference set for this agent family and
    /// should be adjusted through the config file when a specific agent is
    /// modeled.
    pub fn reference() -> Self {
        let r0 = 1.72e-6;
        PhysicalParams {
            rho: 998.0,
            sigma: 0.0725,
            mu: 0.001,
            c: 1500.0,
            kappa: 1.07,
            chi: 0.22,
            kappa_s: 2.4e-9,
            p0: 99_297.0,
            r0,
            a: 1.5e6,
            omega: 2.87e7,
            d: 36.5 * r0,
        }
    }

    /// Interbubble distance in units of the rest radius.
    pub fn d_over_r0(&self) -> f64 {
        self.d / self.r0
    }

    /// Returns a copy with the two control parameters replaced.
    pub fn with_controls(&self, d_over_r0: f64, a: f64) -> Self {
        PhysicalParams {
            d: d_over_r0 * self.r0,
            a,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("rho", self.rho),
            ("sigma", self.sigma),
            ("mu", self.mu),
            ("c", self.c),
            ("kappa", self.kappa),
            ("chi", self.chi),
            ("kappa_s", self.kappa_s),
            ("p0", self.p0),
            ("r0", self.r0),
            ("a", self.a),
            ("omega", self.omega),
            ("d", self.d),
        ];
        for (name, v) in fields {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParams(format!(
                    "{name} must be strictly positive and finite, got {v}"
                )));
            }
        }
        if self.kappa < 1.0 {
            return Err(Error::InvalidParams(format!(
                "kappa must be >= 1, got {}",
                self.kappa
            )));
        }
        if self.d <= 2.0 * self.r0 {
            return Err(Error::InvalidParams(format!(
                "bubbles overlap at rest: d = {} <= 2 r0 = {}",
                self.d,
                2.0 * self.r0
            )));
        }
        Ok(())
    }
}

/// Scales derived from the linearized single-bubble eigenfrequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedScales {
    /// Natural frequency omega0, rad/s.
    pub omega0: f64,
    /// 1/omega0, s.
    pub time_scale: f64,
    /// Stroboscopic interval 2*pi*omega0/omega in nondimensional time.
    pub period_tau: f64,
}

/// Linear eigenfrequency of an encapsulated bubble,
/// `omega0^2 = [3 kappa P0 + 2 (3 kappa - 1) sigma / R0 + 4 chi / R0] / (rho R0^2)`,
/// which reduces to the Minnaert frequency for a clean free bubble
/// (`chi = sigma = 0`).
pub fn natural_frequency(p: &PhysicalParams) -> Result<DerivedScales> {
    let bracket =
        3.0 * p.kappa * p.p0 + 2.0 * (3.0 * p.kappa - 1.0) * p.sigma / p.r0 + 4.0 * p.chi / p.r0;
    if !(bracket > 0.0) {
        return Err(Error::NonPositiveFrequency { bracket });
    }
    let omega0 = (bracket / (p.rho * p.r0 * p.r0)).sqrt();
    Ok(DerivedScales {
        omega0,
        time_scale: 1.0 / omega0,
        period_tau: 2.0 * std::f64::consts::PI * omega0 / p.omega,
    })
}

/// Nondimensional phase point: radii `r_i = R_i / R0`, wall velocities
/// `u_i = R_i' / (R0 omega0)`, and time `tau = omega0 t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub r: [f64; 3],
    pub u: [f64; 3],
    pub tau: f64,
}

impl State {
    pub fn new(r: [f64; 3], u: [f64; 3], tau: f64) -> Self {
        State { r, u, tau }
    }

    /// Rest state of the undriven system.
    pub fn equilibrium() -> Self {
        State {
            r: [1.0; 3],
            u: [0.0; 3],
            tau: 0.0,
        }
    }

    /// Equilibrium with the third radius nudged by 1e-3, used to seed sweeps
    /// without locking onto the synchronization hyperplanes.
    pub fn perturbed_equilibrium() -> Self {
        State {
            r: [1.0, 1.0, 1.0 + 1e-3],
            u: [0.0; 3],
            tau: 0.0,
        }
    }

    pub fn to_y(&self) -> [f64; 6] {
        [
            self.r[0], self.r[1], self.r[2], self.u[0], self.u[1], self.u[2],
        ]
    }

    pub fn from_y(y: &[f64; 6], tau: f64) -> Self {
        State {
            r: [y[0], y[1], y[2]],
            u: [y[3], y[4], y[5]],
            tau,
        }
    }

    /// Applies an index permutation to the bubbles: bubble `i` of the result
    /// is bubble `perm[i]` of `self`.
    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        State {
            r: [self.r[perm[0]], self.r[perm[1]], self.r[perm[2]]],
            u: [self.u[perm[0]], self.u[perm[1]], self.u[perm[2]]],
            tau: self.tau,
        }
    }
}

/// The model with its nondimensional coefficient groups precomputed.
///
/// All pressures below are in units of `rho R0^2 omega0^2`; this scale equals
/// the eigenfrequency bracket, so the nondimensional drive amplitude is of
/// order one for megapascal forcing.
#[derive(Debug, Clone, Copy)]
pub struct BubbleSystem {
    params: PhysicalParams,
    scales: DerivedScales,
    /// (P0 + 2 sigma/R0) / ps — equilibrium gas pressure.
    gas: f64,
    /// 3 kappa — polytropic exponent of the nondimensional gas term.
    exp3k: f64,
    /// 3 kappa R0 omega0 / c — sound-radiation correction on the gas term.
    comp: f64,
    /// 4 mu omega0 / ps — liquid viscosity.
    visc: f64,
    /// 2 sigma / (R0 ps) — surface tension.
    tension: f64,
    /// P0 / ps — static pressure.
    p_stat: f64,
    /// a / ps — drive amplitude.
    amp: f64,
    /// omega / omega0 — drive frequency in nondimensional time.
    freq: f64,
    /// 4 chi / (R0 ps) — shell elasticity.
    shell_e: f64,
    /// 4 kappa_s omega0 / (R0 ps) — shell viscosity.
    shell_v: f64,
    /// R0 / d — Bjerknes coupling strength.
    coupling: f64,
}

impl BubbleSystem {
    pub fn new(params: &PhysicalParams) -> Result<Self> {
        params.validate()?;
        let scales = natural_frequency(params)?;
        let ps = params.rho * params.r0 * params.r0 * scales.omega0 * scales.omega0;
        Ok(BubbleSystem {
            params: *params,
            scales,
            gas: (params.p0 + 2.0 * params.sigma / params.r0) / ps,
            exp3k: 3.0 * params.kappa,
            comp: 3.0 * params.kappa * params.r0 * scales.omega0 / params.c,
            visc: 4.0 * params.mu * scales.omega0 / ps,
            tension: 2.0 * params.sigma / (params.r0 * ps),
            p_stat: params.p0 / ps,
            amp: params.a / ps,
            freq: params.omega / scales.omega0,
            shell_e: 4.0 * params.chi / (params.r0 * ps),
            shell_v: 4.0 * params.kappa_s * scales.omega0 / (params.r0 * ps),
            coupling: params.r0 / params.d,
        })
    }

    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    pub fn scales(&self) -> &DerivedScales {
        &self.scales
    }

    /// Nondimensional forcing period (the stroboscopic sampling interval).
    pub fn period_tau(&self) -> f64 {
        self.scales.period_tau
    }

    /// Bjerknes coupling strength `R0 / d`.
    pub fn coupling_strength(&self) -> f64 {
        self.coupling
    }

    /// Pressure-balance partials at `(r, u)`, for callers outside the fused
    /// Jacobian path.
    pub(crate) fn pressure_derivs_at(&self, r: f64, u: f64) -> (f64, f64) {
        self.pressure_derivs(r, u, r.powf(-self.exp3k))
    }

    /// Instantaneous drive term `-(a/ps) sin(omega t)` at nondimensional
    /// time `tau`.
    fn drive(&self, tau: f64) -> f64 {
        self.amp * (self.freq * tau).sin()
    }

    /// Nondimensional per-bubble pressure balance: gas core with the
    /// sound-radiation factor, liquid viscosity, surface tension, static
    /// pressure, acoustic drive, and the two shell terms. Vanishes at the
    /// rest state of the undriven system. Requires `r > 0`.
    pub fn pressure(&self, r: f64, u: f64, tau: f64) -> f64 {
        self.pressure_with_drive(r, u, r.powf(-self.exp3k), self.drive(tau))
    }

    #[inline]
    fn pressure_with_drive(&self, r: f64, u: f64, r_pow: f64, drive: f64) -> f64 {
        self.gas * r_pow * (1.0 - self.comp * u)
            - self.visc * u / r
            - self.tension / r
            - self.p_stat
            - drive
            - self.shell_e * (1.0 - 1.0 / r)
            - self.shell_v * u / (r * r)
    }

    /// Partial derivatives of the pressure balance with respect to `r` and
    /// `u`, given `r_pow = r^(-3 kappa)`.
    #[inline]
    fn pressure_derivs(&self, r: f64, u: f64, r_pow: f64) -> (f64, f64) {
        let inv_r = 1.0 / r;
        let inv_r2 = inv_r * inv_r;
        let dp_dr = -self.exp3k * self.gas * r_pow * inv_r * (1.0 - self.comp * u)
            + self.visc * u * inv_r2
            + self.tension * inv_r2
            - self.shell_e * inv_r2
            + 2.0 * self.shell_v * u * inv_r2 * inv_r;
        let dp_du = -self.comp * self.gas * r_pow - self.visc * inv_r - self.shell_v * inv_r2;
        (dp_dr, dp_du)
    }

    fn check_radii(&self, tau: f64, y: &[f64; 6]) -> Result<()> {
        for v in y {
            if !v.is_finite() {
                return Err(Error::NonFiniteState { tau });
            }
        }
        for (i, &r) in y[..3].iter().enumerate() {
            if r < R_MIN {
                return Err(Error::RadiusUnderflow {
                    index: i,
                    r,
                    r_min: R_MIN,
                    tau,
                });
            }
        }
        Ok(())
    }

    /// Solves `M(r) w = f` for the accelerations, where `M_ii = r_i` and
    /// `M_ij = (R0/d) r_j^2`. Direct cofactor elimination; the reductions
    /// over all three bubbles go through canonical-order sums/products so
    /// the result is exactly permutation-equivariant.
    fn accel_solve(&self, tau: f64, y: &[f64; 6], f: &[f64; 3]) -> Result<[f64; 3]> {
        let g = self.coupling;
        let r = [y[0], y[1], y[2]];
        let c = [g * r[0] * r[0], g * r[1] * r[1], g * r[2] * r[2]];
        let det = mass_det(&r, &c);
        if det.abs() < SINGULAR_DET_TOL {
            return Err(Error::SingularMassMatrix {
                det,
                tau,
                d_over_r0: self.params.d_over_r0(),
                a: self.params.a,
                state: *y,
            });
        }
        Ok(mass_apply(&r, &c, det, f))
    }

    /// Full right-hand side `(dr/dtau, du/dtau)` at `s`.
    pub fn vector_field(&self, s: &State) -> Result<[f64; 6]> {
        self.eval(s.tau, &s.to_y())
    }

    /// 6x6 derivative of the vector field with respect to `(r, u)` at fixed
    /// `tau`.
    pub fn jacobian_at(&self, s: &State) -> Result<[[f64; 6]; 6]> {
        self.jacobian(s.tau, &s.to_y())
    }

    fn rhs_parts(&self, tau: f64, y: &[f64; 6]) -> ([f64; 3], [f64; 3], [f64; 3]) {
        let g = self.coupling;
        let r = [y[0], y[1], y[2]];
        let u = [y[3], y[4], y[5]];
        let drive = self.drive(tau);
        let r_pow = [
            r[0].powf(-self.exp3k),
            r[1].powf(-self.exp3k),
            r[2].powf(-self.exp3k),
        ];
        let mut f = [0.0; 3];
        for i in 0..3 {
            let j = (i + 1) % 3;
            let k = (i + 2) % 3;
            let p = self.pressure_with_drive(r[i], u[i], r_pow[i], drive);
            // F_i = P_i - 3/2 u_i^2 - (R0/d) * sum_{j != i} 2 r_j u_j^2
            f[i] = p
                - 1.5 * u[i] * u[i]
                - g * (2.0 * r[j] * u[j] * u[j] + 2.0 * r[k] * u[k] * u[k]);
        }
        (f, r_pow, u)
    }
}

impl Flow<6> for BubbleSystem {
    fn eval(&self, tau: f64, y: &[f64; 6]) -> Result<[f64; 6]> {
        self.check_radii(tau, y)?;
        let (f, _, u) = self.rhs_parts(tau, y);
        let w = self.accel_solve(tau, y, &f)?;
        Ok([u[0], u[1], u[2], w[0], w[1], w[2]])
    }

    fn jacobian(&self, tau: f64, y: &[f64; 6]) -> Result<[[f64; 6]; 6]> {
        Ok(self.eval_with_jacobian(tau, y)?.1)
    }

    fn eval_with_jacobian(&self, tau: f64, y: &[f64; 6]) -> Result<([f64; 6], [[f64; 6]; 6])> {
        self.check_radii(tau, y)?;
        let g = self.coupling;
        let r = [y[0], y[1], y[2]];
        let u = [y[3], y[4], y[5]];
        let (f, r_pow, _) = self.rhs_parts(tau, y);
        let c = [g * r[0] * r[0], g * r[1] * r[1], g * r[2] * r[2]];
        let det = mass_det(&r, &c);
        if det.abs() < SINGULAR_DET_TOL {
            return Err(Error::SingularMassMatrix {
                det,
                tau,
                d_over_r0: self.params.d_over_r0(),
                a: self.params.a,
                state: *y,
            });
        }
        let w = mass_apply(&r, &c, det, &f);

        let mut dp_dr = [0.0; 3];
        let mut dp_du = [0.0; 3];
        for i in 0..3 {
            let (pr, pu) = self.pressure_derivs(r[i], u[i], r_pow[i]);
            dp_dr[i] = pr;
            dp_du[i] = pu;
        }

        let mut jac = [[0.0; 6]; 6];
        for i in 0..3 {
            jac[i][3 + i] = 1.0;
        }
        // Acceleration rows: d w / d x_k = M^{-1} (dF/dx_k - (dM/dx_k) w).
        for k in 0..3 {
            let mut rhs = [0.0; 3];
            for i in 0..3 {
                rhs[i] = if i == k {
                    dp_dr[k] - w[k]
                } else {
                    -2.0 * g * u[k] * u[k] - 2.0 * g * r[k] * w[k]
                };
            }
            let col = mass_apply(&r, &c, det, &rhs);
            for i in 0..3 {
                jac[3 + i][k] = col[i];
            }
        }
        for k in 0..3 {
            let mut rhs = [0.0; 3];
            for i in 0..3 {
                rhs[i] = if i == k {
                    dp_du[k] - 3.0 * u[k]
                } else {
                    -4.0 * g * r[k] * u[k]
                };
            }
            let col = mass_apply(&r, &c, det, &rhs);
            for i in 0..3 {
                jac[3 + i][3 + k] = col[i];
            }
        }

        let dy = [u[0], u[1], u[2], w[0], w[1], w[2]];
        Ok((dy, jac))
    }
}

/// det M for the structured mass matrix:
/// `r1 r2 r3 - sum_i r_i c_j c_k + 2 c1 c2 c3` with `c_j = (R0/d) r_j^2`.
#[inline]
fn mass_det(r: &[f64; 3], c: &[f64; 3]) -> f64 {
    sym_prod3(r[0], r[1], r[2])
        - sym_sum3(r[0] * (c[1] * c[2]), r[1] * (c[0] * c[2]), r[2] * (c[0] * c[1]))
        + 2.0 * sym_prod3(c[0], c[1], c[2])
}

/// Applies M^{-1} to `f` by cofactor expansion, given the precomputed
/// determinant. Each component has the same expression shape with the other
/// two indices entering through a commutative two-term sum, which keeps the
/// solve exactly permutation-equivariant.
#[inline]
fn mass_apply(r: &[f64; 3], c: &[f64; 3], det: f64, f: &[f64; 3]) -> [f64; 3] {
    let minor = |i: usize, j: usize, k: usize| {
        f[i] * (r[j] * r[k] - c[j] * c[k])
            - (f[j] * c[j] * (r[k] - c[k]) + f[k] * c[k] * (r[j] - c[j]))
    };
    [
        minor(0, 1, 2) / det,
        minor(1, 0, 2) / det,
        minor(2, 0, 1) / det,
    ]
}

/// Three-term sum in canonical (sorted) operand order: invariant under any
/// permutation of the arguments, including at the bit level.
#[inline]
pub fn sym_sum3(a: f64, b: f64, c: f64) -> f64 {
    let (lo, mid, hi) = sort3(a, b, c);
    (lo + mid) + hi
}

/// Three-term product in canonical (sorted) operand order.
#[inline]
pub fn sym_prod3(a: f64, b: f64, c: f64) -> f64 {
    let (lo, mid, hi) = sort3(a, b, c);
    (lo * mid) * hi
}

#[inline]
fn sort3(mut a: f64, mut b: f64, mut c: f64) -> (f64, f64, f64) {
    use std::cmp::Ordering::Greater;
    if a.total_cmp(&b) == Greater {
        std::mem::swap(&mut a, &mut b);
    }
    if b.total_cmp(&c) == Greater {
        std::mem::swap(&mut b, &mut c);
    }
    if a.total_cmp(&b) == Greater {
        std::mem::swap(&mut a, &mut b);
    }
    (a, b, c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_system() -> BubbleSystem {
        BubbleSystem::new(&PhysicalParams::reference()).unwrap()
    }

    #[test]
    fn natural_frequency_reference_value() {
        // Frozen from an independent arbitrary-precision evaluation of the
        // closed-form eigenfrequency at the reference constants.
        let scales = natural_frequency(&PhysicalParams::reference()).unwrap();
        let expected = 1.8556595368853628e7;
        assert!(
            (scales.omega0 - expected).abs() / expected < 1e-13,
            "omega0 = {}",
            scales.omega0
        );
        let period = 4.062527086162295;
        assert!((scales.period_tau - period).abs() < 1e-12);
        assert!((scales.time_scale * scales.omega0 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn natural_frequency_minnaert_limit() {
        // With chi = sigma = 0 only the leading gas term survives.
        let mut p = PhysicalParams::reference();
        p.chi = 0.0;
        p.sigma = 0.0;
        let scales = natural_frequency(&p).unwrap();
        let expected = (3.0 * p.kappa * p.p0 / (p.rho * p.r0 * p.r0)).sqrt();
        assert_eq!(scales.omega0, expected);
    }

    #[test]
    fn natural_frequency_sqrt_homogeneity() {
        let mut p = PhysicalParams::reference();
        p.chi = 0.0;
        p.sigma = 0.0;
        let base = natural_frequency(&p).unwrap().omega0;
        p.p0 *= 4.0;
        let scaled = natural_frequency(&p).unwrap().omega0;
        assert!((scaled / base - 2.0).abs() < 1e-14);
    }

    #[test]
    fn natural_frequency_rejects_nonpositive_bracket() {
        let mut p = PhysicalParams::reference();
        p.p0 = -1e6;
        p.sigma = 0.0;
        p.chi = 0.0;
        match natural_frequency(&p) {
            Err(Error::NonPositiveFrequency { bracket }) => assert!(bracket <= 0.0),
            other => panic!("expected NonPositiveFrequency, got {other:?}"),
        }
    }

    #[test]
    fn params_validation() {
        let mut p = PhysicalParams::reference();
        p.kappa = 0.9;
        assert!(p.validate().is_err());
        let mut p = PhysicalParams::reference();
        p.d = 1.5 * p.r0;
        assert!(p.validate().is_err());
        let mut p = PhysicalParams::reference();
        p.mu = 0.0;
        assert!(p.validate().is_err());
        assert!(PhysicalParams::reference().validate().is_ok());
    }

    #[test]
    fn pressure_vanishes_at_rest_without_drive() {
        let mut p = PhysicalParams::reference();
        p.a = 1e-300; // validation requires a > 0; the drive term is negligible
        let sys = BubbleSystem::new(&p).unwrap();
        let val = sys.pressure(1.0, 0.0, 0.0);
        assert!(val.abs() < 1e-14, "pressure at rest = {val}");
    }

    #[test]
    fn pressure_is_pure_drive_at_rest() {
        let sys = reference_system();
        // tau chosen so sin(omega t) = 1.
        let tau = std::f64::consts::FRAC_PI_2 / (sys.freq);
        let val = sys.pressure(1.0, 0.0, tau);
        let expected = -sys.amp;
        assert!(
            (val - expected).abs() < 1e-12 * sys.amp.abs(),
            "val = {val}, expected {expected}"
        );
    }

    #[test]
    fn pressure_matches_arbitrary_precision_oracle() {
        // Frozen values from an independent evaluation of the dimensional
        // pressure balance followed by division by rho R0^2 omega0^2.
        let sys = reference_system();
        let cases = [
            ((0.83, -0.41, 2.9), 1.777303736048682733758_f64),
            ((1.95, 0.77, 0.31), -1.095347587175103066296_f64),
        ];
        for ((r, u, tau), expected) in cases {
            let got = sys.pressure(r, u, tau);
            assert!(
                ((got - expected) / expected).abs() < 1e-12,
                "pressure({r},{u},{tau}) = {got:.18}, expected {expected:.18}"
            );
        }
    }

    #[test]
    fn vector_field_matches_arbitrary_precision_oracle() {
        // Dimensional 3x3 solve performed independently in high precision.
        let p = PhysicalParams::reference().with_controls(36.5, 1.5e6);
        let sys = BubbleSystem::new(&p).unwrap();
        let s = State::new([1.13, 0.71, 1.02], [0.24, -0.36, 0.05], 1.37);
        let dy = sys.vector_field(&s).unwrap();
        let expected = [
            -1.279433505281791018617,
            -1.016299287945661523083,
            -1.216932561922297968599,
        ];
        for i in 0..3 {
            assert_eq!(dy[i], s.u[i]);
            assert!(
                ((dy[3 + i] - expected[i]) / expected[i]).abs() < 1e-12,
                "du{} = {:.18}, expected {:.18}",
                i + 1,
                dy[3 + i],
                expected[i]
            );
        }
    }

    #[test]
    fn equilibrium_is_fixed_point_without_drive() {
        let mut p = PhysicalParams::reference();
        p.a = 1e-300;
        let sys = BubbleSystem::new(&p).unwrap();
        let dy = sys.vector_field(&State::equilibrium()).unwrap();
        for v in dy {
            assert!(v.abs() < 1e-14, "residual {v}");
        }
    }

    #[test]
    fn symmetric_states_have_equal_accelerations() {
        let sys = reference_system();
        let s = State::new([0.9, 0.9, 0.9], [0.3, 0.3, 0.3], 0.7);
        let dy = sys.vector_field(&s).unwrap();
        assert_eq!(dy[3], dy[4]);
        assert_eq!(dy[4], dy[5]);
    }

    #[test]
    fn far_field_limit_matches_single_bubble() {
        // d = 1e6 R0 decouples the bubbles: accelerations must match the
        // isolated balance du = (P - 1.5 u^2) / r evaluated independently.
        // The state is chosen with accelerations of order one.
        let p = PhysicalParams::reference().with_controls(1e6, 1.5e6);
        let sys = BubbleSystem::new(&p).unwrap();
        let s = State::new([1.13, 0.71, 1.02], [0.24, -0.36, 0.05], 1.37);
        let dy = sys.vector_field(&s).unwrap();
        for i in 0..3 {
            let p_i = sys.pressure(s.r[i], s.u[i], s.tau);
            let single = (p_i - 1.5 * s.u[i] * s.u[i]) / s.r[i];
            assert!(
                ((dy[3 + i] - single) / single).abs() < 1e-5,
                "bubble {i}: coupled {} vs single {}",
                dy[3 + i],
                single
            );
        }
    }

    #[test]
    fn permutation_equivariance_is_bitwise() {
        let sys = reference_system();
        let s = State::new([1.31, 0.62, 1.07], [0.45, -0.22, 0.11], 3.3);
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let base = sys.vector_field(&s).unwrap();
        for perm in perms {
            let dy = sys.vector_field(&s.permuted(perm)).unwrap();
            for i in 0..3 {
                assert_eq!(dy[i], base[perm[i]], "dr mismatch under {perm:?}");
                assert_eq!(dy[3 + i], base[3 + perm[i]], "du mismatch under {perm:?}");
            }
        }
    }

    #[test]
    fn sync_manifold_tangency_is_exact() {
        // Equal bubbles 1 and 2 stay equal through one evaluation.
        let sys = reference_system();
        let s = State::new([1.17, 1.17, 0.84], [-0.35, -0.35, 0.6], 5.9);
        let dy = sys.vector_field(&s).unwrap();
        assert_eq!(dy[0], dy[1]);
        assert_eq!(dy[3], dy[4]);
    }

    #[test]
    fn radius_underflow_is_reported() {
        let sys = reference_system();
        let s = State::new([0.009, 1.0, 1.0], [0.0; 3], 0.4);
        match sys.vector_field(&s) {
            Err(Error::RadiusUnderflow { index: 0, tau, .. }) => assert_eq!(tau, 0.4),
            other => panic!("expected RadiusUnderflow, got {other:?}"),
        }
    }

    #[test]
    fn non_finite_state_is_reported() {
        let sys = reference_system();
        let s = State::new([1.0, f64::NAN, 1.0], [0.0; 3], 0.0);
        assert!(matches!(
            sys.vector_field(&s),
            Err(Error::NonFiniteState { .. })
        ));
    }

    #[test]
    fn singular_mass_matrix_is_reported() {
        // r_i = d/R0 makes the diagonal cancel against the rank-one part.
        let mut p = PhysicalParams::reference();
        p.d = 3.0 * p.r0;
        let sys = BubbleSystem::new(&p).unwrap();
        // det M = r^3 (1 - g r)^2 (1 + 2 g r); at g r = 1 it vanishes.
        let s = State::new([3.0, 3.0, 3.0], [0.1, 0.1, 0.1], 0.0);
        match sys.vector_field(&s) {
            Err(Error::SingularMassMatrix { det, .. }) => assert!(det.abs() < 1e-12),
            other => panic!("expected SingularMassMatrix, got {other:?}"),
        }
    }

    #[test]
    fn jacobian_structure_blocks() {
        let sys = reference_system();
        let s = State::new([1.1, 0.8, 1.3], [0.2, -0.1, 0.4], 1.9);
        let jac = sys.jacobian_at(&s).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(jac[i][j], 0.0);
                let expected = if i == j { 1.0 } else { 0.0 };
                assert_eq!(jac[i][3 + j], expected);
            }
        }
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let sys = reference_system();
        let mut rng_state = 0x9e3779b97f4a7c15_u64;
        let mut next = move || {
            // xorshift is plenty for sampling test states
            rng_state ^= rng_state << 13;
            rng_state ^= rng_state >> 7;
            rng_state ^= rng_state << 17;
            (rng_state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..100 {
            let y = [
                0.5 + next(),
                0.5 + next(),
                0.5 + next(),
                (next() - 0.5) * 2.0,
                (next() - 0.5) * 2.0,
                (next() - 0.5) * 2.0,
            ];
            let tau = next() * 10.0;
            let jac = sys.jacobian(tau, &y).unwrap();
            let fd = finite_difference_jacobian(&sys, tau, &y);
            let scale = jac
                .iter()
                .flatten()
                .fold(0.0_f64, |m, v| m.max(v.abs()))
                .max(1.0);
            for i in 0..6 {
                for j in 0..6 {
                    let err = (jac[i][j] - fd[i][j]).abs() / scale;
                    assert!(
                        err < 1e-5,
                        "J[{i}][{j}] analytic {} vs fd {} (state {y:?})",
                        jac[i][j],
                        fd[i][j]
                    );
                }
            }
        }
    }

    #[test]
    fn jacobian_permutation_conjugation() {
        let sys = reference_system();
        let s = State::new([1.4, 0.75, 1.05], [0.3, -0.15, 0.2], 2.6);
        let perm = [2, 0, 1];
        let base = sys.jacobian_at(&s).unwrap();
        let permuted = sys.jacobian_at(&s.permuted(perm)).unwrap();
        // Row/column i of the permuted Jacobian corresponds to perm[i] of the
        // original, independently in the r and u blocks.
        let map = |i: usize| if i < 3 { perm[i] } else { 3 + perm[i - 3] };
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(
                    permuted[i][j],
                    base[map(i)][map(j)],
                    "conjugation mismatch at ({i},{j})"
                );
            }
        }
    }

    /// Central finite differences with relative step 1e-7, used only as a
    /// test oracle for the analytic Jacobian.
    fn finite_difference_jacobian(sys: &BubbleSystem, tau: f64, y: &[f64; 6]) -> [[f64; 6]; 6] {
        let mut jac = [[0.0; 6]; 6];
        for j in 0..6 {
            let h = 1e-7 * y[j].abs().max(1.0);
            let mut yp = *y;
            let mut ym = *y;
            yp[j] += h;
            ym[j] -= h;
            let fp = sys.eval(tau, &yp).unwrap();
            let fm = sys.eval(tau, &ym).unwrap();
            for i in 0..6 {
                jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        jac
    }
}
