//! Two-parameter regime charts and one-parameter path scans with attractor
//! continuation.
//!
//! The dynamics is multistable over much of the `(d/R0, a)` plane, so the
//! chart does not seed pixels independently. One attractor is settled at the
//! seed point on the far column, the column is continued in both amplitude
//! directions (each pixel's final state starting the next), and every row is
//! then continued toward decreasing `d/R0` from its column pixel. After the
//! column pass the rows are independent, so they run in parallel; results
//! are assembled in a fixed order and are identical for any worker count.

use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::integrator::{Flow, IntegratorConfig, Propagator, TangentFrame};
use crate::lyapunov::{
    benettin_observed, classify, BenettinSettings, LyapunovSpectrum, RegimeClass, ZERO_TOL,
};
use crate::model::{BubbleSystem, PhysicalParams, State};
use crate::poincare::{count_components_points, detect_period_points};
use crate::sync::{self, SyncCounts, SyncFractions};

/// A parametrized family of flows over the `(d/R0, a)` control plane.
pub trait FlowFamily: Sync {
    type F: Flow<6>;

    fn flow_at(&self, d_over_r0: f64, a: f64) -> Result<Self::F>;

    /// Stroboscopic sampling / renormalization interval.
    fn interval(&self) -> f64;

    /// State used to start the very first settle.
    fn seed_state(&self) -> [f64; 6];
}

/// The physical three-bubble family: `d` and `a` vary, everything else is
/// fixed. The forcing period does not depend on the control parameters.
pub struct BubbleFamily {
    base: PhysicalParams,
    period_tau: f64,
}

impl BubbleFamily {
    pub fn new(base: PhysicalParams) -> Result<Self> {
        let sys = BubbleSystem::new(&base)?;
        Ok(BubbleFamily {
            base,
            period_tau: sys.period_tau(),
        })
    }

    pub fn base(&self) -> &PhysicalParams {
        &self.base
    }
}

impl FlowFamily for BubbleFamily {
    type F = BubbleSystem;

    fn flow_at(&self, d_over_r0: f64, a: f64) -> Result<BubbleSystem> {
        BubbleSystem::new(&self.base.with_controls(d_over_r0, a))
    }

    fn interval(&self) -> f64 {
        self.period_tau
    }

    fn seed_state(&self) -> [f64; 6] {
        State::perturbed_equilibrium().to_y()
    }
}

/// Control-parameter-independent harness family, used to certify the sweep
/// machinery separately from the physics.
pub struct FixedFamily<F: Flow<6> + Clone + Sync> {
    pub flow: F,
    pub interval: f64,
}

impl<F: Flow<6> + Clone + Sync> FlowFamily for FixedFamily<F> {
    type F = F;

    fn flow_at(&self, _d_over_r0: f64, _a: f64) -> Result<F> {
        Ok(self.flow.clone())
    }

    fn interval(&self) -> f64 {
        self.interval
    }

    fn seed_state(&self) -> [f64; 6] {
        [1.0; 6]
    }
}

/// Deterministic per-task initial frame: `seed` picks the run, `stream` the
/// pixel or sample.
pub fn frame_for(seed: u64, stream: u64) -> TangentFrame<6> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    TangentFrame::random(&mut rng)
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                lo + (hi - lo) * (i as f64 / (n - 1) as f64)
            }
        })
        .collect()
}

/// Grid and per-pixel settings of the two-parameter chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartSpec {
    pub d_lo: f64,
    pub d_hi: f64,
    pub n_d: usize,
    pub a_lo: f64,
    pub a_hi: f64,
    pub n_a: usize,
    /// Settled first, on the `d = d_hi` column.
    pub seed_point: (f64, f64),
    pub seed_settle_periods: usize,
    pub transient_periods: usize,
    pub accumulate_periods: usize,
    pub frame_seed: u64,
}

impl ChartSpec {
    /// The studied region: `20 <= d/R0 <= 47`, `1.3e6 <= a <= 1.7e6`,
    /// seeded from the quasiperiodic attractor at `(47, 1.48e6)`.
    pub fn studied_region(config: &RunConfig) -> Self {
        ChartSpec {
            d_lo: 20.0,
            d_hi: 47.0,
            n_d: 200,
            a_lo: 1.3e6,
            a_hi: 1.7e6,
            n_a: 200,
            seed_point: (47.0, 1.48e6),
            seed_settle_periods: config.chart.seed_settle_periods,
            transient_periods: config.chart.transient_periods,
            accumulate_periods: config.chart.accumulate_periods,
            frame_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.d_lo < self.d_hi) || !(self.a_lo < self.a_hi) {
            return Err(Error::InvalidSpec(format!(
                "degenerate chart ranges d [{}, {}], a [{}, {}]",
                self.d_lo, self.d_hi, self.a_lo, self.a_hi
            )));
        }
        if self.n_d < 2 || self.n_a < 2 {
            return Err(Error::InvalidSpec(format!(
                "chart needs at least 2x2 pixels, got {}x{}",
                self.n_d, self.n_a
            )));
        }
        let (sd, sa) = self.seed_point;
        if !(self.d_lo <= sd && sd <= self.d_hi && self.a_lo <= sa && sa <= self.a_hi) {
            return Err(Error::InvalidSpec(format!(
                "seed point ({sd}, {sa}) lies outside the grid"
            )));
        }
        if self.accumulate_periods == 0 {
            return Err(Error::InvalidSpec("accumulate_periods must be > 0".into()));
        }
        Ok(())
    }

    pub fn d_values(&self) -> Vec<f64> {
        linspace(self.d_lo, self.d_hi, self.n_d)
    }

    pub fn a_values(&self) -> Vec<f64> {
        linspace(self.a_lo, self.a_hi, self.n_a)
    }
}

/// One grid cell of a chart.
#[derive(Debug, Clone)]
pub struct ChartPixel {
    pub d_over_r0: f64,
    pub a: f64,
    /// None when the trajectory left the model's domain.
    pub spectrum: Option<LyapunovSpectrum>,
    pub class: RegimeClass,
}

/// Chart pixels stored row-major by ascending amplitude index, ascending
/// distance index inside a row. Emission (CSV and raster) runs top-down from
/// the highest amplitude.
#[derive(Debug, Clone)]
pub struct ChartResult {
    pub spec: ChartSpec,
    pub d_values: Vec<f64>,
    pub a_values: Vec<f64>,
    pixels: Vec<ChartPixel>,
}

impl ChartResult {
    pub fn pixel(&self, ia: usize, id: usize) -> &ChartPixel {
        &self.pixels[ia * self.spec.n_d + id]
    }

    /// Pixels in emission order: amplitude descending, distance ascending.
    pub fn emission_order(&self) -> impl Iterator<Item = &ChartPixel> {
        (0..self.spec.n_a)
            .rev()
            .flat_map(move |ia| (0..self.spec.n_d).map(move |id| self.pixel(ia, id)))
    }

    /// Fraction of pixels that ended in the escape/rupture sentinel.
    pub fn rupture_fraction(&self) -> f64 {
        let ruptured = self
            .pixels
            .iter()
            .filter(|p| p.class == RegimeClass::EscapeRupture)
            .count();
        ruptured as f64 / self.pixels.len() as f64
    }
}

fn settle<F: Flow<6>>(
    flow: &F,
    cfg: &IntegratorConfig,
    y0: [f64; 6],
    interval: f64,
    periods: usize,
) -> Result<[f64; 6]> {
    let mut prop = Propagator::new(flow, cfg)?;
    let mut tau = 0.0;
    let mut y = y0;
    for k in 1..=periods {
        prop.advance(&mut tau, &mut y, k as f64 * interval)?;
    }
    Ok(y)
}

/// Computes one pixel; on trajectory failure returns the rupture sentinel
/// and passes the inherited state through to keep the continuation alive.
#[allow(clippy::too_many_arguments)]
fn chart_pixel<Fam: FlowFamily>(
    family: &Fam,
    cfg: &IntegratorConfig,
    spec: &ChartSpec,
    d: f64,
    a: f64,
    state_in: [f64; 6],
    frame: TangentFrame<6>,
) -> (ChartPixel, [f64; 6]) {
    let settings = BenettinSettings {
        transient_intervals: spec.transient_periods,
        accumulate_intervals: spec.accumulate_periods,
        interval: family.interval(),
        renorm_every: 1,
    };
    let outcome = family
        .flow_at(d, a)
        .and_then(|flow| benettin_observed(&flow, cfg, state_in, 0.0, &settings, frame, |_, _, _, _| {}));
    match outcome {
        Ok(out) => {
            let spectrum = LyapunovSpectrum {
                lambda: out.lambda,
                n_periods: out.intervals,
                transient_periods: spec.transient_periods,
                converged: out.converged,
                avg_divergence: out.avg_divergence,
            };
            let class = classify(&spectrum, ZERO_TOL).class;
            (
                ChartPixel {
                    d_over_r0: d,
                    a,
                    spectrum: Some(spectrum),
                    class,
                },
                out.final_y,
            )
        }
        Err(_) => (
            ChartPixel {
                d_over_r0: d,
                a,
                spectrum: None,
                class: RegimeClass::EscapeRupture,
            },
            state_in,
        ),
    }
}

/// Runs the chart with the multistability-aware seeding order. Rows execute
/// on `workers` threads (0 = all cores); the output is identical for any
/// worker count.
pub fn run_chart<Fam: FlowFamily>(
    family: &Fam,
    cfg: &IntegratorConfig,
    spec: &ChartSpec,
    workers: usize,
) -> Result<ChartResult> {
    spec.validate()?;
    cfg.validate()?;
    let d_values = spec.d_values();
    let a_values = spec.a_values();
    let col = spec.n_d - 1;
    // one initial frame for the whole run, selected by the seed
    let frame0 = frame_for(spec.frame_seed, 0);

    // 1. settle the seed attractor at the exact seed point
    let (seed_d, seed_a) = spec.seed_point;
    let seed_state = match family.flow_at(seed_d, seed_a).and_then(|flow| {
        settle(
            &flow,
            cfg,
            family.seed_state(),
            family.interval(),
            spec.seed_settle_periods,
        )
    }) {
        Ok(y) => y,
        // a failed settle leaves the raw seed; the pixels record their own fate
        Err(_) => family.seed_state(),
    };

    // 2. continue along the far column in both amplitude directions
    let ia0 = a_values
        .iter()
        .enumerate()
        .min_by(|(_, x), (_, y)| (**x - seed_a).abs().total_cmp(&(**y - seed_a).abs()))
        .map(|(i, _)| i)
        .unwrap();
    let mut column: Vec<Option<(ChartPixel, [f64; 6])>> = vec![None; spec.n_a];
    let mut state = seed_state;
    for ia in ia0..spec.n_a {
        let (pixel, out) = chart_pixel(
            family,
            cfg,
            spec,
            d_values[col],
            a_values[ia],
            state,
            frame0.clone(),
        );
        state = out;
        column[ia] = Some((pixel, out));
    }
    state = seed_state;
    for ia in (0..ia0).rev() {
        let (pixel, out) = chart_pixel(
            family,
            cfg,
            spec,
            d_values[col],
            a_values[ia],
            state,
            frame0.clone(),
        );
        state = out;
        column[ia] = Some((pixel, out));
    }

    // 3. rows toward decreasing d, independent and parallel
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidSpec(format!("cannot build worker pool: {e}")))?;
    let rows: Vec<Vec<ChartPixel>> = pool.install(|| {
        column
            .par_iter()
            .enumerate()
            .map(|(ia, col_entry)| {
                let (_, col_state) = col_entry.as_ref().unwrap();
                let mut state = *col_state;
                let mut row: Vec<ChartPixel> = Vec::with_capacity(spec.n_d - 1);
                for id in (0..col).rev() {
                    let (pixel, out) = chart_pixel(
                        family,
                        cfg,
                        spec,
                        d_values[id],
                        a_values[ia],
                        state,
                        frame0.clone(),
                    );
                    state = out;
                    row.push(pixel);
                }
                row
            })
            .collect()
    });

    let mut pixels = Vec::with_capacity(spec.n_a * spec.n_d);
    for (ia, row) in rows.into_iter().enumerate() {
        // row holds ids col-1 .. 0; reverse into ascending order
        for pixel in row.into_iter().rev() {
            pixels.push(pixel);
        }
        pixels.push(column[ia].as_ref().unwrap().0.clone());
    }

    Ok(ChartResult {
        spec: *spec,
        d_values,
        a_values,
        pixels,
    })
}

/// Starting-state policy for path scans. Continuation follows one attractor
/// branch; a fixed state re-seeds every sample (for following a coexisting
/// branch from a known basin — the state is the caller's to supply).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialStatePolicy {
    Continuation,
    Fixed([f64; 6]),
}

/// One-parameter segment scan in the `(d/R0, a)` plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSpec {
    pub from: (f64, f64),
    pub to: (f64, f64),
    pub samples: usize,
    /// Traverse from `to` back to `from`.
    pub reverse: bool,
    pub policy: InitialStatePolicy,
    pub settle_periods: usize,
    pub transient_periods: usize,
    pub accumulate_periods: usize,
    /// Cap on stored stroboscopic points per sample (the most recent are
    /// kept) for the map diagnostics.
    pub keep_points: usize,
    pub cluster_eps: f64,
    pub period_eps: f64,
    pub max_period: usize,
    pub membership_eps: f64,
    pub frame_seed: u64,
}

impl PathSpec {
    pub fn new(from: (f64, f64), to: (f64, f64), samples: usize, config: &RunConfig) -> Self {
        PathSpec {
            from,
            to,
            samples,
            reverse: false,
            policy: InitialStatePolicy::Continuation,
            settle_periods: config.path.settle_periods,
            transient_periods: config.path.transient_periods,
            accumulate_periods: config.path.accumulate_periods,
            keep_points: config.poincare.keep_points,
            cluster_eps: config.poincare.cluster_eps,
            period_eps: config.poincare.period_eps,
            max_period: 64,
            membership_eps: sync::MEMBERSHIP_EPS,
            frame_seed: 0,
        }
    }

    /// Route presets of the studied region.
    pub fn preset(name: &str, samples: usize, config: &RunConfig) -> Result<Self> {
        let (from, to) = match name {
            "ab" => ((36.5, 1.4e6), (36.5, 1.52e6)),
            "cd" => ((35.0, 1.1416e6), (46.5, 1.56e6)),
            "ef" => ((26.0, 1.3e6), (16.5, 1.3e6)),
            "gh" => ((16.5, 1.4e6), (22.0, 1.4e6)),
            other => {
                return Err(Error::InvalidSpec(format!(
                    "unknown path preset {other:?} (expected ab, cd, ef, or gh)"
                )))
            }
        };
        Ok(Self::new(from, to, samples, config))
    }

    pub fn validate(&self) -> Result<()> {
        if self.from == self.to {
            return Err(Error::InvalidSpec("path endpoints coincide".into()));
        }
        if self.samples < 2 {
            return Err(Error::InvalidSpec(format!(
                "a path needs at least 2 samples, got {}",
                self.samples
            )));
        }
        if self.accumulate_periods == 0 {
            return Err(Error::InvalidSpec("accumulate_periods must be > 0".into()));
        }
        Ok(())
    }
}

/// Scan output at one parameter sample.
#[derive(Debug, Clone)]
pub struct PathSample {
    /// The varying coordinate (`d/R0` or `a`), or the segment parameter in
    /// [0, 1] when both vary.
    pub param: f64,
    pub d_over_r0: f64,
    pub a: f64,
    pub spectrum: Option<LyapunovSpectrum>,
    pub class: RegimeClass,
    pub fractions: SyncFractions,
    pub components: usize,
    pub period: Option<usize>,
}

/// Runs a path scan; samples are returned in traversal order.
pub fn run_path<Fam: FlowFamily>(
    family: &Fam,
    cfg: &IntegratorConfig,
    spec: &PathSpec,
) -> Result<Vec<PathSample>> {
    spec.validate()?;
    cfg.validate()?;
    let n = spec.samples;
    let interval = family.interval();
    let vary_d = spec.from.0 != spec.to.0;
    let vary_a = spec.from.1 != spec.to.1;

    let coords: Vec<(f64, f64, f64)> = (0..n)
        .map(|i| {
            let idx = if spec.reverse { n - 1 - i } else { i };
            let t = idx as f64 / (n - 1) as f64;
            let d = if idx == n - 1 {
                spec.to.0
            } else {
                spec.from.0 + (spec.to.0 - spec.from.0) * t
            };
            let a = if idx == n - 1 {
                spec.to.1
            } else {
                spec.from.1 + (spec.to.1 - spec.from.1) * t
            };
            (t, d, a)
        })
        .collect();

    let mut state = match spec.policy {
        InitialStatePolicy::Fixed(y0) => y0,
        InitialStatePolicy::Continuation => {
            let (_, d0, a0) = coords[0];
            match family.flow_at(d0, a0).and_then(|flow| {
                settle(&flow, cfg, family.seed_state(), interval, spec.settle_periods)
            }) {
                Ok(y) => y,
                Err(_) => family.seed_state(),
            }
        }
    };

    let frame0 = frame_for(spec.frame_seed, 0);
    let mut out = Vec::with_capacity(n);
    for &(t, d, a) in coords.iter() {
        let start = match spec.policy {
            InitialStatePolicy::Fixed(y0) => y0,
            InitialStatePolicy::Continuation => state,
        };
        let settings = BenettinSettings {
            transient_intervals: spec.transient_periods,
            accumulate_intervals: spec.accumulate_periods,
            interval,
            renorm_every: 1,
        };
        let frame = frame0.clone();
        let keep = spec.keep_points.max(1);
        let mut ring: Vec<[f64; 6]> = Vec::with_capacity(keep.min(spec.accumulate_periods));
        let mut ring_next = 0usize;
        let mut counts = SyncCounts::default();
        let result = family.flow_at(d, a).and_then(|flow| {
            benettin_observed(&flow, cfg, start, 0.0, &settings, frame, |_, _, y, _| {
                counts.record(&sync::membership_y(y, spec.membership_eps));
                if ring.len() < keep {
                    ring.push(*y);
                } else {
                    ring[ring_next] = *y;
                    ring_next = (ring_next + 1) % keep;
                }
            })
        });
        let param = match (vary_d, vary_a) {
            (true, false) => d,
            (false, true) => a,
            _ => t,
        };
        match result {
            Ok(outcome) => {
                // restore chronological order of the retained points
                let mut points = ring.split_off(ring_next);
                points.extend_from_slice(&ring);
                let spectrum = LyapunovSpectrum {
                    lambda: outcome.lambda,
                    n_periods: outcome.intervals,
                    transient_periods: spec.transient_periods,
                    converged: outcome.converged,
                    avg_divergence: outcome.avg_divergence,
                };
                let class = classify(&spectrum, ZERO_TOL).class;
                out.push(PathSample {
                    param,
                    d_over_r0: d,
                    a,
                    spectrum: Some(spectrum),
                    class,
                    fractions: counts.fractions(),
                    components: count_components_points(&points, spec.cluster_eps),
                    period: detect_period_points(&points, spec.max_period, spec.period_eps),
                });
                state = outcome.final_y;
            }
            Err(_) => {
                out.push(PathSample {
                    param,
                    d_over_r0: d,
                    a,
                    spectrum: None,
                    class: RegimeClass::EscapeRupture,
                    fractions: SyncFractions::empty(),
                    components: 0,
                    period: None,
                });
                // continuation state passes through unchanged
            }
        }
    }
    Ok(out)
}

fn lambda_fields(spectrum: &Option<LyapunovSpectrum>) -> ([f64; 6], bool, usize) {
    match spectrum {
        Some(s) => (s.lambda, s.converged, s.n_periods),
        None => ([f64::NAN; 6], false, 0),
    }
}

/// Chart CSV: `d_over_r0, a, lambda1..lambda6, regime`, one row per pixel,
/// amplitude descending then distance ascending (the raster order).
pub fn chart_csv(result: &ChartResult) -> String {
    use crate::fmt::float;
    let mut out = String::from("d_over_r0,a,lambda1,lambda2,lambda3,lambda4,lambda5,lambda6,regime\n");
    for pixel in result.emission_order() {
        let (lambda, _, _) = lambda_fields(&pixel.spectrum);
        out.push_str(&float(pixel.d_over_r0));
        out.push(',');
        out.push_str(&float(pixel.a));
        for l in lambda {
            out.push(',');
            out.push_str(&float(l));
        }
        out.push(',');
        out.push_str(&pixel.class.to_string());
        out.push('\n');
    }
    out
}

/// Chart raster (binary P6), one pixel per cell, top scanline at the
/// highest amplitude.
pub fn chart_raster(result: &ChartResult) -> Vec<u8> {
    let classes: Vec<RegimeClass> = result.emission_order().map(|p| p.class).collect();
    crate::raster::render_p6(&classes, result.spec.n_d, result.spec.n_a)
}

/// Path CSV: the per-sample scan tuple.
pub fn path_csv(samples: &[PathSample]) -> String {
    use crate::fmt::float;
    let mut out = String::from(
        "param_value,d_over_r0,a,lambda1,lambda2,lambda3,lambda4,lambda5,lambda6,regime,\
         converged,frac_S,frac_partial,frac_async,frac_S12,frac_S13,frac_S23,components,period\n",
    );
    for s in samples {
        let (lambda, converged, _) = lambda_fields(&s.spectrum);
        out.push_str(&float(s.param));
        out.push(',');
        out.push_str(&float(s.d_over_r0));
        out.push(',');
        out.push_str(&float(s.a));
        for l in lambda {
            out.push(',');
            out.push_str(&float(l));
        }
        out.push(',');
        out.push_str(&s.class.to_string());
        out.push(',');
        out.push_str(if converged { "true" } else { "false" });
        for f in [
            s.fractions.frac_s,
            s.fractions.frac_partial,
            s.fractions.frac_async,
            s.fractions.frac_s12,
            s.fractions.frac_s13,
            s.fractions.frac_s23,
        ] {
            out.push(',');
            out.push_str(&float(f));
        }
        out.push(',');
        out.push_str(&s.components.to_string());
        out.push(',');
        out.push_str(&s.period.unwrap_or(0).to_string());
        out.push('\n');
    }
    out
}

/// Synchronization-fraction CSV along a path (`param_value, frac_S,
/// frac_partial, frac_async, frac_S12, frac_S13, frac_S23`).
pub fn path_fractions_csv(samples: &[PathSample]) -> String {
    let mut out = String::from(sync::fractions_csv_header());
    out.push('\n');
    for s in samples {
        out.push_str(&sync::fractions_csv_row(s.param, &s.fractions));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::LinearField;

    fn linear_family() -> FixedFamily<LinearField<6>> {
        FixedFamily {
            flow: LinearField::new([-1.0, -2.0, -3.0, -4.0, -5.0, -6.0]),
            interval: 1.0,
        }
    }

    /// Tangents ride the state's accepted steps; once the harness state has
    /// decayed the controller opens the step up, so certification against
    /// stiff contraction rates needs an explicit step cap.
    fn harness_cfg() -> IntegratorConfig {
        IntegratorConfig {
            h_max: 0.01,
            ..IntegratorConfig::default()
        }
    }

    fn tiny_chart_spec() -> ChartSpec {
        ChartSpec {
            d_lo: 20.0,
            d_hi: 47.0,
            n_d: 3,
            a_lo: 1.3e6,
            a_hi: 1.7e6,
            n_a: 3,
            seed_point: (47.0, 1.48e6),
            seed_settle_periods: 3,
            transient_periods: 2,
            accumulate_periods: 30,
            frame_seed: 7,
        }
    }

    #[test]
    fn linear_chart_is_all_periodic() {
        let result = run_chart(&linear_family(), &harness_cfg(), &tiny_chart_spec(), 1).unwrap();
        // every pixel runs the same field from the same frame: identical output
        let first = result.pixel(0, 0).spectrum.as_ref().unwrap().lambda;
        for pixel in result.emission_order() {
            assert_eq!(pixel.class, RegimeClass::Periodic);
            let spec = pixel.spectrum.as_ref().unwrap();
            assert_eq!(spec.lambda, first);
            // random-frame alignment over a short run blurs the exponents a
            // little; the signs and ordering are what the chart consumes
            for (l, expected) in spec.lambda.iter().zip([-1.0, -2.0, -3.0, -4.0, -5.0, -6.0]) {
                assert!((l - expected).abs() < 0.3, "lambda {l} vs {expected}");
            }
        }
        assert_eq!(result.rupture_fraction(), 0.0);
    }

    #[test]
    fn chart_grid_covers_ranges_exactly() {
        let spec = tiny_chart_spec();
        let d = spec.d_values();
        let a = spec.a_values();
        assert_eq!(d.first().copied(), Some(20.0));
        assert_eq!(d.last().copied(), Some(47.0));
        assert_eq!(a.first().copied(), Some(1.3e6));
        assert_eq!(a.last().copied(), Some(1.7e6));
    }

    #[test]
    fn chart_csv_shape() {
        let result = run_chart(&linear_family(), &harness_cfg(), &tiny_chart_spec(), 1).unwrap();
        let csv = chart_csv(&result);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 1 + 9);
        assert!(lines[0].starts_with("d_over_r0,a,lambda1"));
        // first data row is the top-left pixel: lowest d, highest a
        assert!(lines[1].starts_with("2.0000000000000000e1,1.7000000000000000e6"));
        let raster = chart_raster(&result);
        assert!(raster.starts_with(b"P6\n3 3\n255\n"));
        assert_eq!(raster.len(), b"P6\n3 3\n255\n".len() + 27);
    }

    #[test]
    fn chart_determinism_across_worker_counts() {
        let base = run_chart(&linear_family(), &harness_cfg(), &tiny_chart_spec(), 1).unwrap();
        let base_csv = chart_csv(&base);
        for workers in [2, 8] {
            let other = run_chart(&linear_family(), &harness_cfg(), &tiny_chart_spec(), workers)
                .unwrap();
            assert_eq!(base_csv, chart_csv(&other), "workers = {workers}");
        }
    }

    #[test]
    fn chart_spec_validation() {
        let mut spec = tiny_chart_spec();
        spec.n_d = 1;
        assert!(spec.validate().is_err());
        let mut spec = tiny_chart_spec();
        spec.seed_point = (5.0, 1.48e6);
        assert!(spec.validate().is_err());
        let mut spec = tiny_chart_spec();
        spec.d_lo = spec.d_hi;
        assert!(spec.validate().is_err());
    }

    #[test]
    fn linear_path_is_parameter_independent() {
        let config = RunConfig::default();
        let mut spec = PathSpec::new((30.0, 1.4e6), (20.0, 1.4e6), 5, &config);
        spec.settle_periods = 2;
        // long enough that the kept section points have collapsed onto the
        // fixed point well inside cluster_eps and period_eps
        spec.transient_periods = 16;
        spec.accumulate_periods = 40;
        spec.keep_points = 40;
        let samples = run_path(&linear_family(), &harness_cfg(), &spec).unwrap();
        assert_eq!(samples.len(), 5);
        let first = samples[0].spectrum.as_ref().unwrap().lambda;
        for s in &samples {
            assert_eq!(s.class, RegimeClass::Periodic);
            let lambda = s.spectrum.as_ref().unwrap().lambda;
            for (x, y) in lambda.iter().zip(first.iter()) {
                assert!((x - y).abs() < 1e-9);
            }
            // a contracting linear flow pins the section to the origin
            assert_eq!(s.components, 1);
            assert_eq!(s.period, Some(1));
            // param column carries the varying coordinate
            assert!(s.param <= 30.0 && s.param >= 20.0);
        }
        let sum = samples[0].fractions.frac_s
            + samples[0].fractions.frac_partial
            + samples[0].fractions.frac_async;
        assert_eq!(sum, 1.0);
    }

    #[test]
    fn path_preset_endpoints() {
        let config = RunConfig::default();
        let ef = PathSpec::preset("ef", 10, &config).unwrap();
        assert_eq!(ef.from, (26.0, 1.3e6));
        assert_eq!(ef.to, (16.5, 1.3e6));
        let gh = PathSpec::preset("gh", 10, &config).unwrap();
        assert_eq!(gh.from, (16.5, 1.4e6));
        assert_eq!(gh.to, (22.0, 1.4e6));
        assert!(PathSpec::preset("zz", 10, &config).is_err());
    }

    #[test]
    fn reverse_traversal_flips_sample_order() {
        let config = RunConfig::default();
        let mut spec = PathSpec::new((30.0, 1.4e6), (20.0, 1.4e6), 4, &config);
        spec.settle_periods = 1;
        spec.transient_periods = 1;
        spec.accumulate_periods = 5;
        spec.keep_points = 5;
        let forward = run_path(&linear_family(), &harness_cfg(), &spec).unwrap();
        spec.reverse = true;
        let backward = run_path(&linear_family(), &harness_cfg(), &spec).unwrap();
        let f: Vec<f64> = forward.iter().map(|s| s.param).collect();
        let b: Vec<f64> = backward.iter().map(|s| s.param).collect();
        let mut rev = b.clone();
        rev.reverse();
        assert_eq!(f, rev);
    }
}
