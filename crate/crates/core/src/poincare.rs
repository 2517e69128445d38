//! Stroboscopic Poincaré sections and the map-level attractor diagnostics:
//! period detection and component counting.
//!
//! The section samples the flow at integer multiples of the forcing period,
//! `tau_k = k * period_tau`; each stored point carries a synchronization tag.
//! Distances in this module are L-infinity over the packed 6-vector, both
//! for map periodicity and for single-linkage clustering, so a detected
//! period `n` always bounds the component count at the same tolerance.

use crate::error::Result;
use crate::integrator::{IntegratorConfig, Propagator};
use crate::model::{BubbleSystem, PhysicalParams, State};
use crate::sync;

/// Default link threshold for component counting (nondimensional units;
/// component separations on the section are of order 1e-1).
pub const DEFAULT_CLUSTER_EPS: f64 = 1e-3;

/// Default L-infinity tolerance for map periodicity, limited by integrator
/// accuracy rather than attractor geometry.
pub const DEFAULT_PERIOD_EPS: f64 = 1e-6;

/// Default number of stored section points.
pub const DEFAULT_KEEP_POINTS: usize = 4096;

/// Synchronization tag of a section point; `S` dominates the pairwise tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyncTag {
    S,
    S12,
    S13,
    S23,
    None,
}

impl std::fmt::Display for SyncTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SyncTag::S => "S",
            SyncTag::S12 => "S12",
            SyncTag::S13 => "S13",
            SyncTag::S23 => "S23",
            SyncTag::None => "none",
        })
    }
}

/// Ordered stroboscopic samples with tags and a snapshot of the parameters
/// that produced them.
#[derive(Debug, Clone)]
pub struct SectionCloud {
    /// Packed `(r1, r2, r3, u1, u2, u3)` points.
    pub points: Vec<[f64; 6]>,
    pub tags: Vec<SyncTag>,
    /// Stroboscopic index of `points[0]`; point `i` was sampled at
    /// `tau = (start_k + i) * period_tau`.
    pub start_k: usize,
    pub period_tau: f64,
    pub params: PhysicalParams,
}

impl SectionCloud {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Sampling time of point `i`.
    pub fn tau_of(&self, i: usize) -> f64 {
        (self.start_k + i) as f64 * self.period_tau
    }

    pub fn state_of(&self, i: usize) -> State {
        State::from_y(&self.points[i], self.tau_of(i))
    }
}

/// Integrates through `skip_periods` and records the next `keep_points`
/// stroboscopic samples with synchronization tags.
pub fn sample_section(
    sys: &BubbleSystem,
    cfg: &IntegratorConfig,
    s0: &State,
    skip_periods: usize,
    keep_points: usize,
) -> Result<SectionCloud> {
    let period = sys.period_tau();
    let mut prop = Propagator::new(sys, cfg)?;
    let mut tau = s0.tau;
    let mut y = s0.to_y();
    let tau0 = s0.tau;
    for k in 1..=skip_periods {
        prop.advance(&mut tau, &mut y, tau0 + k as f64 * period)?;
    }
    let mut cloud = SectionCloud {
        points: Vec::with_capacity(keep_points),
        tags: Vec::with_capacity(keep_points),
        start_k: skip_periods,
        period_tau: period,
        params: *sys.params(),
    };
    if keep_points == 0 {
        return Ok(cloud);
    }
    // the state at the end of the transient is the first kept sample
    cloud.points.push(y);
    cloud
        .tags
        .push(sync::membership_y(&y, sync::MEMBERSHIP_EPS).tag());
    for k in 1..keep_points {
        let target = tau0 + (skip_periods + k) as f64 * period;
        prop.advance(&mut tau, &mut y, target)?;
        cloud.points.push(y);
        cloud
            .tags
            .push(sync::membership_y(&y, sync::MEMBERSHIP_EPS).tag());
    }
    Ok(cloud)
}

#[inline]
fn linf(a: &[f64; 6], b: &[f64; 6]) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..6 {
        worst = worst.max((a[i] - b[i]).abs());
    }
    worst
}

/// Smallest `n <= max_period` such that every point lies within `eps`
/// (L-infinity) of the point `n` samples later; `None` when the cloud is not
/// periodic at any tested order.
pub fn detect_period(cloud: &SectionCloud, max_period: usize, eps: f64) -> Option<usize> {
    detect_period_points(&cloud.points, max_period, eps)
}

/// [`detect_period`] on a bare point sequence.
pub fn detect_period_points(points: &[[f64; 6]], max_period: usize, eps: f64) -> Option<usize> {
    let n_points = points.len();
    if n_points < 2 {
        return None;
    }
    'candidate: for n in 1..=max_period {
        if n >= n_points {
            return None;
        }
        for i in 0..n_points - n {
            if linf(&points[i], &points[i + n]) > eps {
                continue 'candidate;
            }
        }
        return Some(n);
    }
    None
}

/// Number of connected components of the graph linking points closer than
/// `cluster_eps` (single linkage, L-infinity).
pub fn count_components(cloud: &SectionCloud, cluster_eps: f64) -> usize {
    count_components_points(&cloud.points, cluster_eps)
}

/// [`count_components`] on a bare point sequence.
pub fn count_components_points(points: &[[f64; 6]], cluster_eps: f64) -> usize {
    let n = points.len();
    if n == 0 {
        return 0;
    }
    let mut dsu = DisjointSet::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if linf(&points[i], &points[j]) < cluster_eps {
                dsu.union(i, j);
            }
        }
    }
    dsu.component_count()
}

struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            // deterministic: smaller root wins
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    fn component_count(&mut self) -> usize {
        let n = self.parent.len();
        (0..n).filter(|&i| self.find(i) == i).count()
    }
}

/// Cloud CSV schema: `k, r1, u1, r2, u2, r3, u3, tag`.
pub fn cloud_csv_header() -> &'static str {
    "k,r1,u1,r2,u2,r3,u3,tag"
}

pub fn cloud_csv_row(cloud: &SectionCloud, i: usize) -> String {
    use crate::fmt::float;
    let p = &cloud.points[i];
    format!(
        "{},{},{},{},{},{},{},{}",
        cloud.start_k + i,
        float(p[0]),
        float(p[3]),
        float(p[1]),
        float(p[4]),
        float(p[2]),
        float(p[5]),
        cloud.tags[i]
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic_cloud(points: Vec<[f64; 6]>) -> SectionCloud {
        let tags = points
            .iter()
            .map(|p| sync::membership_y(p, sync::MEMBERSHIP_EPS).tag())
            .collect();
        SectionCloud {
            points,
            tags,
            start_k: 0,
            period_tau: 1.0,
            params: PhysicalParams::reference(),
        }
    }

    #[test]
    fn constant_cloud_has_period_one() {
        let p = [1.0, 1.1, 0.9, 0.0, 0.1, -0.1];
        let cloud = synthetic_cloud(vec![p; 300]);
        assert_eq!(detect_period(&cloud, 64, 1e-9), Some(1));
        assert_eq!(count_components(&cloud, 1e-3), 1);
    }

    #[test]
    fn alternating_cloud_has_period_two() {
        let a = [1.0, 1.0, 1.0, 0.0, 0.0, 0.0];
        let b = [2.0, 2.0, 2.0, 0.5, 0.5, 0.5];
        let points: Vec<_> = (0..300).map(|i| if i % 2 == 0 { a } else { b }).collect();
        let cloud = synthetic_cloud(points);
        assert_eq!(detect_period(&cloud, 64, 1e-9), Some(2));
        assert_eq!(count_components(&cloud, 1e-3), 2);
    }

    #[test]
    fn aperiodic_cloud_detects_nothing() {
        let points: Vec<_> = (0..400)
            .map(|i| {
                let t = i as f64;
                // incommensurate pair of rotations: never exactly periodic
                [
                    (0.61803398875 * t).sin(),
                    (1.41421356 * t).cos(),
                    0.0,
                    0.0,
                    0.0,
                    0.0,
                ]
            })
            .collect();
        let cloud = synthetic_cloud(points);
        assert_eq!(detect_period(&cloud, 64, 1e-6), None);
    }

    #[test]
    fn two_separated_clusters() {
        let eps = 1e-3;
        let mut points = Vec::new();
        for i in 0..50 {
            let jitter = i as f64 * 1e-5;
            points.push([jitter, 0.0, 0.0, 0.0, 0.0, 0.0]);
            points.push([100.0 * eps + jitter, 0.0, 0.0, 0.0, 0.0, 0.0]);
        }
        let cloud = synthetic_cloud(points);
        assert_eq!(count_components(&cloud, eps), 2);
        // all points inside one ball
        assert_eq!(count_components(&cloud, 200.0 * eps), 1);
    }

    #[test]
    fn component_count_monotone_in_eps() {
        let points: Vec<_> = (0..120)
            .map(|i| {
                let x = (i % 12) as f64 * 0.02;
                [x, (i as f64 * 0.37).sin() * 0.001, 0.0, 0.0, 0.0, 0.0]
            })
            .collect();
        let cloud = synthetic_cloud(points);
        let mut last = usize::MAX;
        for eps in [1e-4, 1e-3, 1e-2, 1e-1] {
            let n = count_components(&cloud, eps);
            assert!(n <= last, "components grew from {last} to {n} at eps {eps}");
            last = n;
        }
    }

    #[test]
    fn detected_period_bounds_component_count() {
        let eps = 1e-6;
        let base = [
            [1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
        ];
        let points: Vec<_> = (0..320).map(|i| base[i % 4]).collect();
        let cloud = synthetic_cloud(points);
        let n = detect_period(&cloud, 64, eps).unwrap();
        assert_eq!(n, 4);
        assert!(count_components(&cloud, eps) <= n);
    }

    #[test]
    fn permuting_bubble_indices_preserves_component_count() {
        let points: Vec<[f64; 6]> = (0..200)
            .map(|i| {
                let t = i as f64 * 0.11;
                [
                    t.sin(),
                    (1.3 * t).cos(),
                    (0.7 * t).sin(),
                    t.cos(),
                    (1.3 * t).sin(),
                    (0.7 * t).cos(),
                ]
            })
            .collect();
        let permuted: Vec<[f64; 6]> = points
            .iter()
            .map(|p| [p[2], p[0], p[1], p[5], p[3], p[4]])
            .collect();
        let c1 = count_components(&synthetic_cloud(points), 0.3);
        let c2 = count_components(&synthetic_cloud(permuted), 0.3);
        assert_eq!(c1, c2);
    }
}
