use bubble3_core::lyapunov::{benettin, BenettinSettings, classify, LyapunovSpectrum, ZERO_TOL};
use bubble3_core::integrator::TangentFrame;
use bubble3_core::*;

fn spectrum_at(d: f64, a: f64, y0: [f64; 6], transient: usize, accum: usize) -> Option<(LyapunovSpectrum, [f64;6])> {
    let p = PhysicalParams::reference().with_controls(d, a);
    let sys = BubbleSystem::new(&p).unwrap();
    let cfg = IntegratorConfig::default();
    let settings = BenettinSettings { transient_intervals: transient, accumulate_intervals: accum, interval: sys.period_tau(), renorm_every: 1 };
    benettin(&sys, &cfg, y0, 0.0, &settings, TangentFrame::identity()).ok().map(|out| (LyapunovSpectrum {
        lambda: out.lambda, n_periods: out.intervals, transient_periods: transient,
        converged: out.converged, avg_divergence: out.avg_divergence,
    }, out.final_y))
}

fn main() {
    let d = 47.0; let a = 1.48e6;
    let ics: Vec<[f64;6]> = vec![
        [1.0, 1.0, 1.001, 0.0, 0.0, 0.0],
        [1.2, 0.8, 1.0, 0.0, 0.0, 0.0],
        [1.5, 0.7, 1.1, 0.3, -0.4, 0.2],
        [0.9, 1.4, 0.6, -0.5, 0.8, 0.1],
        [1.1, 1.0, 0.9, 1.0, -1.0, 0.5],
        [2.0, 0.5, 1.2, 0.0, 0.5, -0.8],
        [0.6, 0.7, 0.8, 0.2, 0.1, -0.3],
        [1.3, 1.31, 1.29, 0.01, -0.02, 0.03],
    ];
    for (i, y0) in ics.iter().enumerate() {
        match spectrum_at(d, a, *y0, 3000, 8000) {
            Some((spec, yf)) => {
                let c = classify(&spec, ZERO_TOL);
                let sync = (yf[0]-yf[1]).abs() + (yf[3]-yf[4]).abs() < 1e-6 && (yf[0]-yf[2]).abs() + (yf[3]-yf[5]).abs() < 1e-6;
                println!("IC{i}: {} l1..3 = {:.5} {:.5} {:.5} sync={sync}", c.class, spec.lambda[0], spec.lambda[1], spec.lambda[2]);
            }
            None => println!("IC{i}: rupture"),
        }
    }
}
