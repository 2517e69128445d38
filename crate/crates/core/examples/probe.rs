use bubble3_core::lyapunov::{benettin, BenettinSettings, classify, LyapunovSpectrum, ZERO_TOL};
use bubble3_core::integrator::TangentFrame;
use bubble3_core::*;
use std::time::Instant;

fn spectrum_at(d: f64, a: f64, y0: [f64; 6], transient: usize, accum: usize) -> (LyapunovSpectrum, [f64; 6]) {
    let p = PhysicalParams::reference().with_controls(d, a);
    let sys = BubbleSystem::new(&p).unwrap();
    let cfg = IntegratorConfig::default();
    let settings = BenettinSettings {
        transient_intervals: transient,
        accumulate_intervals: accum,
        interval: sys.period_tau(),
        renorm_every: 1,
    };
    let out = benettin(&sys, &cfg, y0, 0.0, &settings, TangentFrame::identity()).unwrap();
    (
        LyapunovSpectrum {
            lambda: out.lambda,
            n_periods: out.intervals,
            transient_periods: transient,
            converged: out.converged,
            avg_divergence: out.avg_divergence,
        },
        out.final_y,
    )
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let transient: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(10_000);
    let accum: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(30_000);
    let points = [
        (36.5, 1.4667e6, "torus16?"),
        (36.5, 1.484e6, "HC2?"),
        (36.5, 1.52e6, "HC3?"),
        (22.6, 1.3e6, "chaotic+0?"),
        (20.15, 1.4e6, "HC2+0?"),
        (47.0, 1.48e6, "seed QP?"),
    ];
    let y0 = State::perturbed_equilibrium().to_y();
    for (d, a, label) in points {
        let t0 = Instant::now();
        let (spec, yf) = spectrum_at(d, a, y0, transient, accum);
        let cls = classify(&spec, ZERO_TOL);
        println!(
            "({d}, {:.4}e6) {label}: {} (ambig {}) conv {} in {:.1}s\n   lambda {:?}\n   sum {:.6} vs div {:.6}; final r {:?}",
            a / 1e6,
            cls.class,
            cls.ambiguous,
            spec.converged,
            t0.elapsed().as_secs_f64(),
            spec.lambda,
            spec.lambda.iter().sum::<f64>(),
            spec.avg_divergence,
            &yf[..3],
        );
    }
}
