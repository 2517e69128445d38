//! Synchronization-manifold membership and the reduced synchronous system.
//!
//! The exchange symmetry of the three-bubble system leaves three partial
//! hyperplanes `S_ij: r_i = r_j, u_i = u_j` and the complete-synchronization
//! diagonal `S` invariant. A point belongs to `S_ij` when its L1 distance
//! `|r_i - r_j| + |u_i - u_j|` falls below the membership tolerance, and to
//! `S` when at least two pairwise criteria hold — near-equality is transitive
//! to within twice the tolerance, which also means the pairwise flags are
//! closed under `S` (a point in `S` reports all three).

use crate::error::{Error, Result};
use crate::integrator::Flow;
use crate::model::{BubbleSystem, State, R_MIN};
use crate::poincare::{SectionCloud, SyncTag};

/// L1 distance below which a point counts as lying on a hyperplane.
pub const MEMBERSHIP_EPS: f64 = 1e-6;

/// Membership flags for the three pairwise manifolds and the diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SyncFlags {
    pub s12: bool,
    pub s13: bool,
    pub s23: bool,
    pub s: bool,
}

impl SyncFlags {
    /// Partial-but-not-complete membership `S*_ij = S_ij \ S`.
    pub fn star(&self, pair: (usize, usize)) -> bool {
        let p = match pair {
            (0, 1) | (1, 0) => self.s12,
            (0, 2) | (2, 0) => self.s13,
            (1, 2) | (2, 1) => self.s23,
            _ => false,
        };
        p && !self.s
    }

    /// The most specific tag for section clouds: `S` dominates, otherwise at
    /// most one pairwise flag can hold.
    pub fn tag(&self) -> SyncTag {
        if self.s {
            SyncTag::S
        } else if self.s12 {
            SyncTag::S12
        } else if self.s13 {
            SyncTag::S13
        } else if self.s23 {
            SyncTag::S23
        } else {
            SyncTag::None
        }
    }
}

pub fn membership(s: &State, eps: f64) -> SyncFlags {
    membership_y(&s.to_y(), eps)
}

/// Membership on a packed `(r1, r2, r3, u1, u2, u3)` point.
pub fn membership_y(y: &[f64; 6], eps: f64) -> SyncFlags {
    let pair = |i: usize, j: usize| (y[i] - y[j]).abs() + (y[3 + i] - y[3 + j]).abs() < eps;
    let p12 = pair(0, 1);
    let p13 = pair(0, 2);
    let p23 = pair(1, 2);
    let s = (p12 as u8 + p13 as u8 + p23 as u8) >= 2;
    if s {
        SyncFlags {
            s12: true,
            s13: true,
            s23: true,
            s: true,
        }
    } else {
        SyncFlags {
            s12: p12,
            s13: p13,
            s23: p23,
            s,
        }
    }
}

/// Sample tallies over the five-way partition {S, S*_12, S*_13, S*_23, none}.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SyncCounts {
    pub total: usize,
    pub full: usize,
    pub star12: usize,
    pub star13: usize,
    pub star23: usize,
    pub asynchronous: usize,
}

impl SyncCounts {
    pub fn record(&mut self, flags: &SyncFlags) {
        self.total += 1;
        if flags.s {
            self.full += 1;
        } else if flags.s12 {
            self.star12 += 1;
        } else if flags.s13 {
            self.star13 += 1;
        } else if flags.s23 {
            self.star23 += 1;
        } else {
            self.asynchronous += 1;
        }
    }

    pub fn fractions(&self) -> SyncFractions {
        SyncFractions::from_counts(*self)
    }
}

/// Time fractions of the synchronous, partially synchronous, and completely
/// asynchronous phases, measured as stroboscopic sample-count ratios.
///
/// The three headline fractions partition unity *exactly in floating point*:
/// the asynchronous fraction is defined as the complement of the other two,
/// and `frac_s + frac_partial` never rounds above one (each addend carries at
/// most half an ulp of error against a true sum at most one).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyncFractions {
    pub counts: SyncCounts,
    /// T^S / T.
    pub frac_s: f64,
    /// T^{S_P*} / T = (T^{S*_12} + T^{S*_13} + T^{S*_23}) / T.
    pub frac_partial: f64,
    /// T^{S-bar*} / T, the complement of the two above.
    pub frac_async: f64,
    pub frac_s12: f64,
    pub frac_s13: f64,
    pub frac_s23: f64,
}

impl SyncFractions {
    pub fn from_counts(counts: SyncCounts) -> Self {
        let n = counts.total as f64;
        let frac_s = counts.full as f64 / n;
        let frac_partial = (counts.star12 + counts.star13 + counts.star23) as f64 / n;
        let frac_async = 1.0 - (frac_s + frac_partial);
        SyncFractions {
            counts,
            frac_s,
            frac_partial,
            frac_async,
            frac_s12: counts.star12 as f64 / n,
            frac_s13: counts.star13 as f64 / n,
            frac_s23: counts.star23 as f64 / n,
        }
    }

    /// Placeholder for samples with no data (fractions are NaN).
    pub fn empty() -> Self {
        Self::from_counts(SyncCounts::default())
    }
}

/// Dwell fractions of a stroboscopic cloud, from its stored tags.
pub fn dwell_fractions(cloud: &SectionCloud) -> SyncFractions {
    let mut counts = SyncCounts::default();
    for tag in &cloud.tags {
        counts.total += 1;
        match tag {
            SyncTag::S => counts.full += 1,
            SyncTag::S12 => counts.star12 += 1,
            SyncTag::S13 => counts.star13 += 1,
            SyncTag::S23 => counts.star23 += 1,
            SyncTag::None => counts.asynchronous += 1,
        }
    }
    counts.fractions()
}

/// Scalar field of completely synchronous motion: substituting
/// `r_1 = r_2 = r_3` into the full system collapses the acceleration solve to
/// a division by `r + 2 (R0/d) r^2`.
pub fn reduced_synchronous_field(
    sys: &BubbleSystem,
    r: f64,
    u: f64,
    tau: f64,
) -> Result<(f64, f64)> {
    if !r.is_finite() || !u.is_finite() {
        return Err(Error::NonFiniteState { tau });
    }
    if r < R_MIN {
        return Err(Error::RadiusUnderflow {
            index: 0,
            r,
            r_min: R_MIN,
            tau,
        });
    }
    let g = sys.coupling_strength();
    let p = sys.pressure(r, u, tau);
    let du = (p - 1.5 * u * u - 4.0 * g * r * u * u) / (r + 2.0 * g * r * r);
    Ok((u, du))
}

/// The reduced synchronous dynamics as a 2-dimensional flow `(r, u)`.
#[derive(Debug, Clone, Copy)]
pub struct ReducedSyncFlow<'a> {
    sys: &'a BubbleSystem,
}

impl<'a> ReducedSyncFlow<'a> {
    pub fn new(sys: &'a BubbleSystem) -> Self {
        ReducedSyncFlow { sys }
    }
}

impl Flow<2> for ReducedSyncFlow<'_> {
    fn eval(&self, tau: f64, y: &[f64; 2]) -> Result<[f64; 2]> {
        let (dr, du) = reduced_synchronous_field(self.sys, y[0], y[1], tau)?;
        Ok([dr, du])
    }

    fn jacobian(&self, tau: f64, y: &[f64; 2]) -> Result<[[f64; 2]; 2]> {
        let (r, u) = (y[0], y[1]);
        if r < R_MIN {
            return Err(Error::RadiusUnderflow {
                index: 0,
                r,
                r_min: R_MIN,
                tau,
            });
        }
        let g = self.sys.coupling_strength();
        let p = self.sys.pressure(r, u, tau);
        let (dp_dr, dp_du) = self.sys.pressure_derivs_at(r, u);
        let num = p - 1.5 * u * u - 4.0 * g * r * u * u;
        let den = r + 2.0 * g * r * r;
        let dnum_dr = dp_dr - 4.0 * g * u * u;
        let dnum_du = dp_du - 3.0 * u - 8.0 * g * r * u;
        let dden_dr = 1.0 + 4.0 * g * r;
        Ok([
            [0.0, 1.0],
            [
                (dnum_dr * den - num * dden_dr) / (den * den),
                dnum_du / den,
            ],
        ])
    }
}

/// Fractions CSV row along a path: `param_value, frac_S, frac_partial,
/// frac_async, frac_S12, frac_S13, frac_S23`.
pub fn fractions_csv_header() -> &'static str {
    "param_value,frac_S,frac_partial,frac_async,frac_S12,frac_S13,frac_S23"
}

pub fn fractions_csv_row(param_value: f64, fr: &SyncFractions) -> String {
    use crate::fmt::float;
    format!(
        "{},{},{},{},{},{},{}",
        float(param_value),
        float(fr.frac_s),
        float(fr.frac_partial),
        float(fr.frac_async),
        float(fr.frac_s12),
        float(fr.frac_s13),
        float(fr.frac_s23)
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_single_pair() {
        let s = State::new([1.0, 1.0, 1.5], [0.0, 0.0, 0.2], 0.0);
        let flags = membership(&s, MEMBERSHIP_EPS);
        assert!(flags.s12);
        assert!(!flags.s13);
        assert!(!flags.s23);
        assert!(!flags.s);
        assert!(flags.star((0, 1)));
        assert_eq!(flags.tag(), SyncTag::S12);
    }

    #[test]
    fn membership_full_diagonal() {
        let s = State::new([1.0; 3], [0.0; 3], 0.0);
        let flags = membership(&s, MEMBERSHIP_EPS);
        assert!(flags.s12 && flags.s13 && flags.s23 && flags.s);
        assert!(!flags.star((0, 1)));
        assert_eq!(flags.tag(), SyncTag::S);
    }

    #[test]
    fn membership_threshold_arithmetic() {
        // |dr| + |du| = 4e-7 < 1e-6
        let s = State::new([1.0, 1.0 + 2e-7, 2.0], [0.0, 2e-7, 1.0], 0.0);
        let flags = membership(&s, MEMBERSHIP_EPS);
        assert!(flags.s12);
        assert!(!flags.s);
        // exactly at the tolerance is outside (strict inequality)
        let s = State::new([1.0, 1.0 + 5e-7, 2.0], [0.0, 5e-7, 1.0], 0.0);
        assert!(!membership(&s, MEMBERSHIP_EPS).s12);
    }

    #[test]
    fn two_pairwise_flags_close_to_all() {
        // r2 and r3 differ by 1.8 eps yet both pair with r1: the diagonal
        // flag closes the third pairwise flag.
        let eps = MEMBERSHIP_EPS;
        let s = State::new([1.0, 1.0 + 0.9 * eps, 1.0 - 0.9 * eps], [0.0; 3], 0.0);
        let flags = membership(&s, eps);
        assert!(flags.s);
        assert!(flags.s12 && flags.s13 && flags.s23);
    }

    #[test]
    fn fractions_partition_exactly() {
        for (full, star, asynchronous) in
            [(7usize, 3usize, 5usize), (1, 1, 1), (0, 0, 4), (4, 0, 0), (3, 17, 23)]
        {
            let mut counts = SyncCounts::default();
            counts.total = full + star + asynchronous;
            counts.full = full;
            counts.star12 = star;
            counts.asynchronous = asynchronous;
            let fr = counts.fractions();
            let sum = fr.frac_s + fr.frac_partial + fr.frac_async;
            assert_eq!(sum, 1.0, "counts ({full},{star},{asynchronous})");
            assert!(fr.frac_s >= 0.0 && fr.frac_s <= 1.0);
            assert!(fr.frac_async >= 0.0 && fr.frac_async <= 1.0);
        }
    }

    #[test]
    fn all_sync_cloud_gives_unit_fraction() {
        let mut counts = SyncCounts::default();
        for _ in 0..100 {
            counts.record(&membership(&State::new([1.0; 3], [0.0; 3], 0.0), 1e-6));
        }
        let fr = counts.fractions();
        assert_eq!(fr.frac_s, 1.0);
        assert_eq!(fr.frac_partial, 0.0);
        assert_eq!(fr.frac_async, 0.0);
    }

    #[test]
    fn half_partial_half_async() {
        let mut counts = SyncCounts::default();
        let partial = State::new([1.0, 1.0, 1.5], [0.0, 0.0, 0.3], 0.0);
        let asynchronous = State::new([1.0, 1.3, 1.6], [0.0, 0.1, 0.2], 0.0);
        for _ in 0..50 {
            counts.record(&membership(&partial, 1e-6));
            counts.record(&membership(&asynchronous, 1e-6));
        }
        let fr = counts.fractions();
        assert_eq!(fr.frac_s, 0.0);
        assert_eq!(fr.frac_partial, 0.5);
        assert_eq!(fr.frac_async, 0.5);
        assert_eq!(fr.frac_s12, 0.5);
    }

    #[test]
    fn reduced_field_matches_symmetric_lift() {
        use crate::model::PhysicalParams;
        let sys = BubbleSystem::new(&PhysicalParams::reference()).unwrap();
        for (r, u, tau) in [(1.0, 0.0, 0.0), (0.8, 0.4, 1.3), (1.6, -0.7, 2.9)] {
            let (dr, du) = reduced_synchronous_field(&sys, r, u, tau).unwrap();
            let full = sys
                .vector_field(&State::new([r; 3], [u; 3], tau))
                .unwrap();
            assert_eq!(dr, u);
            let rel = ((du - full[3]) / full[3].abs().max(1e-30)).abs();
            assert!(rel < 1e-12, "du {} vs full {}", du, full[3]);
        }
    }

    #[test]
    fn reduced_field_equilibrium() {
        use crate::model::PhysicalParams;
        let mut p = PhysicalParams::reference();
        p.a = 1e-300;
        let sys = BubbleSystem::new(&p).unwrap();
        let (dr, du) = reduced_synchronous_field(&sys, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(dr, 0.0);
        assert!(du.abs() < 1e-14);
    }

    #[test]
    fn reduced_jacobian_matches_finite_differences() {
        use crate::model::PhysicalParams;
        let sys = BubbleSystem::new(&PhysicalParams::reference()).unwrap();
        let flow = ReducedSyncFlow::new(&sys);
        let y = [1.2, -0.5];
        let tau = 0.9;
        let jac = flow.jacobian(tau, &y).unwrap();
        for j in 0..2 {
            let h = 1e-7 * y[j].abs().max(1.0);
            let mut yp = y;
            let mut ym = y;
            yp[j] += h;
            ym[j] -= h;
            let fp = flow.eval(tau, &yp).unwrap();
            let fm = flow.eval(tau, &ym).unwrap();
            for i in 0..2 {
                let fd = (fp[i] - fm[i]) / (2.0 * h);
                let scale = jac[i][j].abs().max(1.0);
                assert!(
                    ((jac[i][j] - fd) / scale).abs() < 1e-6,
                    "J[{i}][{j}] {} vs {}",
                    jac[i][j],
                    fd
                );
            }
        }
    }
}
