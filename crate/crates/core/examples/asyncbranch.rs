use bubble3_core::lyapunov::{benettin, BenettinSettings, classify, LyapunovSpectrum, ZERO_TOL};
use bubble3_core::integrator::TangentFrame;
use bubble3_core::*;

fn run(d: f64, a: f64, y0: [f64; 6], tr: usize, acc: usize) -> Option<(LyapunovSpectrum, [f64;6])> {
    let p = PhysicalParams::reference().with_controls(d, a);
    let sys = BubbleSystem::new(&p).unwrap();
    let cfg = IntegratorConfig::default();
    let settings = BenettinSettings { transient_intervals: tr, accumulate_intervals: acc, interval: sys.period_tau(), renorm_every: 1 };
    benettin(&sys, &cfg, y0, 0.0, &settings, TangentFrame::identity()).ok().map(|o| (LyapunovSpectrum {
        lambda: o.lambda, n_periods: o.intervals, transient_periods: tr, converged: o.converged, avg_divergence: o.avg_divergence,
    }, o.final_y))
}

fn main() {
    // reach the asynchronous branch at the seed point with a hard kick
    let kick = [1.5, 0.7, 1.1, 0.3, -0.4, 0.2];
    let (_, mut state) = run(47.0, 1.48e6, kick, 4000, 1000).unwrap();
    println!("== along a at d/R0 = 47 (continuation up) ==");
    let mut s_up = state;
    for i in 0..=10 {
        let a = 1.48e6 + i as f64 * 0.022e6;
        match run(47.0, a, s_up, 500, 2500) {
            Some((spec, yf)) => {
                s_up = yf;
                let c = classify(&spec, ZERO_TOL);
                let sync = (yf[0]-yf[1]).abs() + (yf[3]-yf[4]).abs() < 1e-6;
                println!("a = {:.4}e6: {:<22} l = {:+.5} {:+.5} {:+.5} s12~{}", a/1e6, c.class.to_string(), spec.lambda[0], spec.lambda[1], spec.lambda[2], sync);
            }
            None => { println!("a = {:.4}e6: rupture", a/1e6); }
        }
    }
    println!("== along a at d/R0 = 47 (continuation down) ==");
    let mut s_dn = state;
    for i in 1..=8 {
        let a = 1.48e6 - i as f64 * 0.0225e6;
        match run(47.0, a, s_dn, 500, 2500) {
            Some((spec, yf)) => {
                s_dn = yf;
                let c = classify(&spec, ZERO_TOL);
                println!("a = {:.4}e6: {:<22} l = {:+.5} {:+.5} {:+.5}", a/1e6, c.class.to_string(), spec.lambda[0], spec.lambda[1], spec.lambda[2]);
            }
            None => { println!("a = {:.4}e6: rupture", a/1e6); }
        }
    }
    println!("== down d at a = 1.52e6 from (47, async) ==");
    let (_, mut s) = run(47.0, 1.52e6, s_up, 1000, 500).map(|(sp, y)| (sp, y)).unwrap();
    state = s;
    for i in 1..=13 {
        let d = 47.0 - i as f64 * 2.0;
        match run(d, 1.52e6, state, 500, 2500) {
            Some((spec, yf)) => {
                state = yf;
                let c = classify(&spec, ZERO_TOL);
                println!("d = {d:>5.1}: {:<22} l = {:+.5} {:+.5} {:+.5} {:+.5}", c.class.to_string(), spec.lambda[0], spec.lambda[1], spec.lambda[2], spec.lambda[3]);
            }
            None => { println!("d = {d}: rupture"); break; }
        }
    }
    let _ = s;
}
