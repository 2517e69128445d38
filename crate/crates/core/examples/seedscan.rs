use bubble3_core::lyapunov::{benettin, BenettinSettings, classify, LyapunovSpectrum, ZERO_TOL};
use bubble3_core::integrator::TangentFrame;
use bubble3_core::*;

fn run(d: f64, a: f64, y0: [f64; 6]) -> Option<(LyapunovSpectrum, [f64;6])> {
    let p = PhysicalParams::reference().with_controls(d, a);
    let sys = BubbleSystem::new(&p).unwrap();
    let cfg = IntegratorConfig::default();
    let settings = BenettinSettings { transient_intervals: 3000, accumulate_intervals: 8000, interval: sys.period_tau(), renorm_every: 1 };
    benettin(&sys, &cfg, y0, 0.0, &settings, TangentFrame::identity()).ok().map(|o| (LyapunovSpectrum {
        lambda: o.lambda, n_periods: o.intervals, transient_periods: 3000, converged: o.converged, avg_divergence: o.avg_divergence,
    }, o.final_y))
}

fn main() {
    let seed = [1.1, 0.9, 1.05, 0.0, 0.0, 0.0];
    for (d, a, label) in [
        (47.0, 1.48e6, "seed-point"),
        (36.5, 1.4e6, "A"),
        (36.5, 1.4667e6, "AB torus16"),
        (36.5, 1.484e6, "AB HC2"),
        (36.5, 1.52e6, "B HC3"),
        (26.0, 1.3e6, "E"),
        (22.6, 1.3e6, "EF chaotic+0"),
        (16.5, 1.4e6, "G"),
        (20.15, 1.4e6, "GH HC2+0"),
    ] {
        match run(d, a, seed) {
            Some((spec, yf)) => {
                let c = classify(&spec, ZERO_TOL);
                let pairsync = |i: usize, j: usize| (yf[i]-yf[j]).abs() + (yf[3+i]-yf[3+j]).abs() < 1e-6;
                println!("({d:>5}, {:>6.4}e6) {label:<14} {:<22} l = {:+.5} {:+.5} {:+.5} {:+.5} s12={} s13={} s23={}",
                    a/1e6, c.class.to_string(), spec.lambda[0], spec.lambda[1], spec.lambda[2], spec.lambda[3],
                    pairsync(0,1), pairsync(0,2), pairsync(1,2));
            }
            None => println!("({d}, {a}) {label}: rupture"),
        }
    }
}
