use bubble3_core::lyapunov::{benettin, BenettinSettings, classify, ZERO_TOL, LyapunovSpectrum};
use bubble3_core::integrator::TangentFrame;
use bubble3_core::*;

fn run(p: &PhysicalParams, y0: [f64; 6], tr: usize, acc: usize) -> Option<(LyapunovSpectrum, [f64;6])> {
    let sys = BubbleSystem::new(p).ok()?;
    let cfg = IntegratorConfig::default();
    let settings = BenettinSettings { transient_intervals: tr, accumulate_intervals: acc, interval: sys.period_tau(), renorm_every: 1 };
    benettin(&sys, &cfg, y0, 0.0, &settings, TangentFrame::identity()).ok().map(|o| (LyapunovSpectrum {
        lambda: o.lambda, n_periods: o.intervals, transient_periods: tr, converged: o.converged, avg_divergence: o.avg_divergence,
    }, o.final_y))
}

fn probe(label: &str, p: PhysicalParams) {
    let kick = [1.5, 0.7, 1.1, 0.3, -0.4, 0.2];
    match run(&p, kick, 4000, 6000) {
        Some((spec, _)) => {
            let c = classify(&spec, ZERO_TOL);
            println!("{label:<34} {:<18} l = {:+.5} {:+.5} {:+.5}", c.class.to_string(), spec.lambda[0], spec.lambda[1], spec.lambda[2]);
        }
        None => println!("{label:<34} rupture/escape"),
    }
}

fn main() {
    let base = PhysicalParams::reference();
    probe("reference (36.5, 1.52e6)", base.with_controls(36.5, 1.52e6));
    let mut p = base.with_controls(36.5, 1.52e6); p.kappa_s = 1.2e-9;
    probe("kappa_s/2", p);
    let mut p = base.with_controls(36.5, 1.52e6); p.kappa_s = 6e-10;
    probe("kappa_s/4", p);
    let mut p = base.with_controls(36.5, 1.52e6); p.mu = 5e-4;
    probe("mu/2", p);
    let mut p = base.with_controls(36.5, 1.52e6); p.kappa_s = 1.2e-9; p.mu = 5e-4;
    probe("kappa_s/2 + mu/2", p);
    probe("higher drive (36.5, 2.2e6)", base.with_controls(36.5, 2.2e6));
    probe("higher drive (36.5, 2.6e6)", base.with_controls(36.5, 2.6e6));
    probe("closer (10, 1.52e6)", base.with_controls(10.0, 1.52e6));
    probe("closer (6, 1.52e6)", base.with_controls(6.0, 1.52e6));
    probe("closer+drive (8, 2.0e6)", base.with_controls(8.0, 2.0e6));
}
