use bubble3_core::*;
use bubble3_core::lyapunov::{benettin, BenettinSettings};
use bubble3_core::integrator::TangentFrame;
use std::time::Instant;

fn main() {
    let p = PhysicalParams::reference().with_controls(36.5, 1.45e6);
    let sys = BubbleSystem::new(&p).unwrap();
    let cfg = IntegratorConfig::default();
    println!("period_tau = {}", sys.period_tau());

    // plain state integration speed
    let t0 = Instant::now();
    let s0 = State::perturbed_equilibrium();
    let mut prop = Propagator::new(&sys, &cfg).unwrap();
    let mut tau = 0.0;
    let mut y = s0.to_y();
    let periods = 200usize;
    for k in 1..=periods {
        prop.advance(&mut tau, &mut y, k as f64 * sys.period_tau()).unwrap();
    }
    let dt = t0.elapsed().as_secs_f64();
    println!("state-only: {periods} periods in {dt:.3} s -> {:.1} periods/s; state {:?}", periods as f64 / dt, y);

    // with tangents
    let settings = BenettinSettings { transient_intervals: 100, accumulate_intervals: 200, interval: sys.period_tau(), renorm_every: 1 };
    let t0 = Instant::now();
    let out = benettin(&sys, &cfg, y, 0.0, &settings, TangentFrame::identity()).unwrap();
    let dt = t0.elapsed().as_secs_f64();
    println!("tangents: 300 periods in {dt:.3} s -> {:.1} periods/s", 300.0 / dt);
    println!("lambda = {:?}", out.lambda);
    println!("avg_div = {}, sum = {}", out.avg_divergence, out.lambda.iter().sum::<f64>());
}
