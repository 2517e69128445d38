//! Lyapunov spectra by tangent-frame renormalization and the regime
//! taxonomy built on the signs of the exponents.
//!
//! An orthonormal 6-frame is propagated under the linearized flow alongside
//! the trajectory; once per forcing period (at the stroboscopic times) the
//! frame is re-orthonormalized by modified Gram–Schmidt and the logs of the
//! diagonal stretches are accumulated. Exponents are accumulated logs over
//! accumulated time, in units of inverse nondimensional time. The time
//! direction is excluded by construction — the frame spans the 6-dimensional
//! `(r, u)` space with time entering the Jacobian explicitly — so the
//! always-zero exponent of the autonomous extension never appears among the
//! computed six; the taxonomy prepends it for display only.

use crate::error::{Error, Result};
use crate::integrator::{Flow, IntegratorConfig, Propagator, TangentFrame};
use crate::model::{BubbleSystem, State};
use crate::sync::{self, SyncCounts, SyncFractions};

/// An exponent counts as zero when its magnitude is below this.
pub const ZERO_TOL: f64 = 1e-4;

/// Convergence flag threshold: largest drift of any exponent estimate over
/// the last 10% of the accumulation.
pub const CONVERGENCE_TOL: f64 = 1e-4;

/// Partial spectra are reported only above this dwell fraction.
pub const MIN_DWELL_FRACTION: f64 = 0.01;

/// Generic accumulator settings. `interval` is the landing/sampling interval
/// in nondimensional time; renormalization happens every `renorm_every`
/// landings (and always at the final one).
#[derive(Debug, Clone, Copy)]
pub struct BenettinSettings {
    pub transient_intervals: usize,
    pub accumulate_intervals: usize,
    pub interval: f64,
    pub renorm_every: usize,
}

/// Raw outcome of a spectrum accumulation over any flow dimension.
#[derive(Debug, Clone)]
pub struct BenettinOutcome<const N: usize> {
    /// Exponents sorted descending, 1/(nondimensional time).
    pub lambda: [f64; N],
    pub intervals: usize,
    pub converged: bool,
    /// Time average of `trace J` along the trajectory — an independent
    /// quadrature of the phase-space contraction rate.
    pub avg_divergence: f64,
    pub final_tau: f64,
    pub final_y: [f64; N],
}

/// Benettin accumulation with a per-renormalization observer. The observer
/// receives `(landing index, tau, state, stretches)` after each
/// re-orthonormalization; landing indices count from the start of the
/// accumulation phase.
pub fn benettin_observed<F: Flow<N>, const N: usize>(
    flow: &F,
    cfg: &IntegratorConfig,
    y0: [f64; N],
    tau0: f64,
    settings: &BenettinSettings,
    frame0: TangentFrame<N>,
    mut on_renorm: impl FnMut(usize, f64, &[f64; N], &[f64; N]),
) -> Result<BenettinOutcome<N>> {
    if settings.accumulate_intervals == 0 {
        return Err(Error::InvalidParams(
            "accumulate_intervals must be positive".into(),
        ));
    }
    if !(settings.interval > 0.0) {
        return Err(Error::InvalidParams(format!(
            "interval must be positive, got {}",
            settings.interval
        )));
    }
    let renorm_every = settings.renorm_every.max(1);

    let mut prop = Propagator::new(flow, cfg)?;
    let mut tau = tau0;
    let mut y = y0;

    for j in 1..=settings.transient_intervals {
        let target = tau0 + j as f64 * settings.interval;
        prop.advance(&mut tau, &mut y, target)?;
    }
    let accum_start = tau;

    let mut frame = frame0;
    frame.log_norms = [0.0; N];
    let mut divergence = 0.0;

    let total = settings.accumulate_intervals;
    let window_start = total - (total / 10).max(1).min(total);
    let mut est_lo = [f64::INFINITY; N];
    let mut est_hi = [f64::NEG_INFINITY; N];

    for j in 1..=total {
        let target = accum_start + j as f64 * settings.interval;
        prop.advance_with_tangents(&mut tau, &mut y, &mut frame, target, Some(&mut divergence))?;
        if j % renorm_every == 0 || j == total {
            let stretches = frame.orthonormalize();
            on_renorm(j, tau, &y, &stretches);
            if j > window_start {
                let elapsed = j as f64 * settings.interval;
                for i in 0..N {
                    let est = frame.log_norms[i] / elapsed;
                    est_lo[i] = est_lo[i].min(est);
                    est_hi[i] = est_hi[i].max(est);
                }
            }
        }
    }

    let total_time = total as f64 * settings.interval;
    let mut lambda = frame.log_norms;
    for l in lambda.iter_mut() {
        *l /= total_time;
    }
    lambda.sort_unstable_by(|a, b| b.total_cmp(a));

    let converged = (0..N).all(|i| {
        est_lo[i].is_finite() && est_hi[i].is_finite() && est_hi[i] - est_lo[i] < CONVERGENCE_TOL
    });

    Ok(BenettinOutcome {
        lambda,
        intervals: total,
        converged,
        avg_divergence: divergence / total_time,
        final_tau: tau,
        final_y: y,
    })
}

/// Plain spectrum accumulation (no observer).
pub fn benettin<F: Flow<N>, const N: usize>(
    flow: &F,
    cfg: &IntegratorConfig,
    y0: [f64; N],
    tau0: f64,
    settings: &BenettinSettings,
    frame0: TangentFrame<N>,
) -> Result<BenettinOutcome<N>> {
    benettin_observed(flow, cfg, y0, tau0, settings, frame0, |_, _, _, _| {})
}

/// Six ordered exponents of the bubble system with accumulation metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovSpectrum {
    /// Sorted descending, units 1/(nondimensional time).
    pub lambda: [f64; 6],
    pub n_periods: usize,
    pub transient_periods: usize,
    pub converged: bool,
    /// Time-averaged trace of the Jacobian over the accumulation.
    pub avg_divergence: f64,
}

/// Spectrum of the full three-bubble flow: one forcing period of transient
/// landing grid, renormalization once per period. The initial frame is the
/// canonical basis; see [`benettin_spectrum_seeded`] for randomized frames.
pub fn benettin_spectrum(
    sys: &BubbleSystem,
    cfg: &IntegratorConfig,
    s0: &State,
    transient_periods: usize,
    accumulate_periods: usize,
) -> Result<LyapunovSpectrum> {
    benettin_spectrum_framed(
        sys,
        cfg,
        s0,
        transient_periods,
        accumulate_periods,
        TangentFrame::identity(),
    )
    .map(|(spec, _)| spec)
}

/// As [`benettin_spectrum`], with an explicit initial frame; also returns the
/// final stroboscopic state (its `tau` reset to zero — the drive phase at a
/// period boundary equals the phase at zero), which makes attractor
/// continuation across parameter steps a plain state handoff.
pub fn benettin_spectrum_framed(
    sys: &BubbleSystem,
    cfg: &IntegratorConfig,
    s0: &State,
    transient_periods: usize,
    accumulate_periods: usize,
    frame: TangentFrame<6>,
) -> Result<(LyapunovSpectrum, State)> {
    let settings = BenettinSettings {
        transient_intervals: transient_periods,
        accumulate_intervals: accumulate_periods,
        interval: sys.period_tau(),
        renorm_every: 1,
    };
    let out = benettin(sys, cfg, s0.to_y(), s0.tau, &settings, frame)?;
    Ok((
        LyapunovSpectrum {
            lambda: out.lambda,
            n_periods: out.intervals,
            transient_periods,
            converged: out.converged,
            avg_divergence: out.avg_divergence,
        },
        State::from_y(&out.final_y, 0.0),
    ))
}

/// Spectrum restricted to one synchronization phase of the trajectory.
#[derive(Debug, Clone)]
pub struct PhaseSpectrum {
    /// Sorted descending; NaN when the phase was never visited.
    pub lambda: [f64; 6],
    pub dwell_fraction: f64,
    pub renorms: usize,
    /// Dwell fraction exceeded [`MIN_DWELL_FRACTION`].
    pub sufficient: bool,
}

/// Full spectrum plus the synchronous/asynchronous split and dwell
/// statistics.
#[derive(Debug, Clone)]
pub struct ConditionalReport {
    pub full: LyapunovSpectrum,
    pub sync: PhaseSpectrum,
    pub asynchronous: PhaseSpectrum,
    pub fractions: SyncFractions,
    pub final_state: State,
}

/// Splits the per-period log-stretches by whether the stroboscopic point
/// lies on the complete-synchronization manifold; each partial spectrum is
/// its own log sum over its own dwell time.
pub fn conditional_spectra(
    sys: &BubbleSystem,
    cfg: &IntegratorConfig,
    s0: &State,
    transient_periods: usize,
    accumulate_periods: usize,
    membership_eps: f64,
) -> Result<ConditionalReport> {
    let settings = BenettinSettings {
        transient_intervals: transient_periods,
        accumulate_intervals: accumulate_periods,
        interval: sys.period_tau(),
        renorm_every: 1,
    };
    let mut sync_logs = [0.0_f64; 6];
    let mut async_logs = [0.0_f64; 6];
    let mut sync_renorms = 0usize;
    let mut async_renorms = 0usize;
    let mut counts = SyncCounts::default();

    let out = benettin_observed(
        sys,
        cfg,
        s0.to_y(),
        s0.tau,
        &settings,
        TangentFrame::identity(),
        |_, _, y, stretches| {
            let flags = sync::membership_y(y, membership_eps);
            counts.record(&flags);
            if flags.s {
                sync_renorms += 1;
                for i in 0..6 {
                    sync_logs[i] += stretches[i].ln();
                }
            } else {
                async_renorms += 1;
                for i in 0..6 {
                    async_logs[i] += stretches[i].ln();
                }
            }
        },
    )?;

    let period = sys.period_tau();
    let make_phase = |logs: [f64; 6], renorms: usize| {
        let dwell_time = renorms as f64 * period;
        let mut lambda = logs;
        for l in lambda.iter_mut() {
            *l /= dwell_time; // NaN when the phase was never visited
        }
        lambda.sort_unstable_by(|a, b| b.total_cmp(a));
        let dwell_fraction = renorms as f64 / accumulate_periods as f64;
        PhaseSpectrum {
            lambda,
            dwell_fraction,
            renorms,
            sufficient: dwell_fraction > MIN_DWELL_FRACTION,
        }
    };

    Ok(ConditionalReport {
        full: LyapunovSpectrum {
            lambda: out.lambda,
            n_periods: out.intervals,
            transient_periods,
            converged: out.converged,
            avg_divergence: out.avg_divergence,
        },
        sync: make_phase(sync_logs, sync_renorms),
        asynchronous: make_phase(async_logs, async_renorms),
        fractions: counts.fractions(),
        final_state: State::from_y(&out.final_y, 0.0),
    })
}

/// Seven-way taxonomy over the signs of the six computed exponents, plus the
/// escape/rupture sentinel for trajectories that left the model's domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegimeClass {
    Periodic,
    Quasiperiodic,
    Chaotic,
    ChaoticExtraZero,
    Hyperchaotic2,
    Hyperchaotic2ExtraZero,
    Hyperchaotic3,
    EscapeRupture,
}

impl RegimeClass {
    pub const ALL: [RegimeClass; 8] = [
        RegimeClass::Periodic,
        RegimeClass::Quasiperiodic,
        RegimeClass::Chaotic,
        RegimeClass::ChaoticExtraZero,
        RegimeClass::Hyperchaotic2,
        RegimeClass::Hyperchaotic2ExtraZero,
        RegimeClass::Hyperchaotic3,
        RegimeClass::EscapeRupture,
    ];

    /// Sign signature with the trivial flow-direction zero prepended
    /// (display convention only; that exponent is never computed).
    pub fn signature(&self) -> Option<&'static str> {
        match self {
            RegimeClass::Periodic => Some("<0, -, -, ...>"),
            RegimeClass::Quasiperiodic => Some("<0, 0, -, -, ...>"),
            RegimeClass::Chaotic => Some("<+, 0, -, ...>"),
            RegimeClass::ChaoticExtraZero => Some("<+, 0, 0, -, ...>"),
            RegimeClass::Hyperchaotic2 => Some("<+, +, 0, -, ...>"),
            RegimeClass::Hyperchaotic2ExtraZero => Some("<+, +, 0, 0, -, ...>"),
            RegimeClass::Hyperchaotic3 => Some("<+, +, +, 0, -, ...>"),
            RegimeClass::EscapeRupture => None,
        }
    }

    /// Chart palette (0..255 RGB).
    pub fn rgb(&self) -> [u8; 3] {
        match self {
            RegimeClass::Hyperchaotic3 => [255, 0, 0],            // red
            RegimeClass::Hyperchaotic2ExtraZero => [0, 255, 255], // cyan
            RegimeClass::Hyperchaotic2 => [0, 128, 128],          // teal
            RegimeClass::Chaotic => [255, 255, 0],                // yellow
            RegimeClass::ChaoticExtraZero => [255, 0, 255],       // magenta
            RegimeClass::Quasiperiodic => [0, 204, 0],            // green
            RegimeClass::Periodic => [0, 0, 255],                 // blue
            RegimeClass::EscapeRupture => [0, 0, 0],              // black
        }
    }
}

impl std::fmt::Display for RegimeClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            RegimeClass::Periodic => "Periodic",
            RegimeClass::Quasiperiodic => "Quasiperiodic",
            RegimeClass::Chaotic => "Chaotic",
            RegimeClass::ChaoticExtraZero => "ChaoticExtraZero",
            RegimeClass::Hyperchaotic2 => "Hyperchaotic2",
            RegimeClass::Hyperchaotic2ExtraZero => "Hyperchaotic2ExtraZero",
            RegimeClass::Hyperchaotic3 => "Hyperchaotic3",
            RegimeClass::EscapeRupture => "EscapeRupture",
        };
        f.write_str(name)
    }
}

impl std::str::FromStr for RegimeClass {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        RegimeClass::ALL
            .iter()
            .copied()
            .find(|c| c.to_string() == s)
            .ok_or_else(|| format!("unknown regime class {s:?}"))
    }
}

/// Classification with degenerate sign patterns flagged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub class: RegimeClass,
    /// The (positive, zero) counts fell outside the canonical table and the
    /// class was assigned from the positive count alone.
    pub ambiguous: bool,
}

/// Maps the counts of positive (`lambda > zero_tol`) and numerically zero
/// (`|lambda| <= zero_tol`) exponents onto the regime taxonomy.
pub fn classify(spectrum: &LyapunovSpectrum, zero_tol: f64) -> Classification {
    let mut positive = 0usize;
    let mut zero = 0usize;
    for &l in &spectrum.lambda {
        if l > zero_tol {
            positive += 1;
        } else if l.abs() <= zero_tol {
            zero += 1;
        }
    }
    let (class, ambiguous) = match (positive, zero) {
        (0, 0) => (RegimeClass::Periodic, false),
        (0, 1) => (RegimeClass::Quasiperiodic, false),
        (1, 0) => (RegimeClass::Chaotic, false),
        (1, 1) => (RegimeClass::ChaoticExtraZero, false),
        (2, 0) => (RegimeClass::Hyperchaotic2, false),
        (2, 1) => (RegimeClass::Hyperchaotic2ExtraZero, false),
        (p, _) if p >= 3 => (RegimeClass::Hyperchaotic3, false),
        (0, _) => (RegimeClass::Periodic, true),
        (1, _) => (RegimeClass::Chaotic, true),
        (2, _) => (RegimeClass::Hyperchaotic2, true),
        _ => unreachable!(),
    };
    Classification { class, ambiguous }
}

/// Spectrum CSV row: `d_over_r0, a, lambda1..lambda6, regime, converged,
/// n_periods`.
pub fn spectrum_csv_header() -> &'static str {
    "d_over_r0,a,lambda1,lambda2,lambda3,lambda4,lambda5,lambda6,regime,converged,n_periods"
}

pub fn spectrum_csv_row(
    d_over_r0: f64,
    a: f64,
    spectrum: &LyapunovSpectrum,
    class: RegimeClass,
) -> String {
    use crate::fmt::float;
    let l = &spectrum.lambda;
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        float(d_over_r0),
        float(a),
        float(l[0]),
        float(l[1]),
        float(l[2]),
        float(l[3]),
        float(l[4]),
        float(l[5]),
        class,
        spectrum.converged,
        spectrum.n_periods
    )
}
