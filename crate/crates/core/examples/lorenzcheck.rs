use bubble3_core::harness::{LorenzField, LinearField, LORENZ_CLASSIC_SPECTRUM};
use bubble3_core::lyapunov::{benettin, BenettinSettings};
use bubble3_core::integrator::TangentFrame;
use bubble3_core::IntegratorConfig;
use std::time::Instant;

fn main() {
    let cfg = IntegratorConfig { h_max: 0.05, ..IntegratorConfig::default() };
    let t0 = Instant::now();
    let settings = BenettinSettings { transient_intervals: 200, accumulate_intervals: 40_000, interval: 0.5, renorm_every: 1 };
    let out = benettin(&LorenzField::classic(), &cfg, [1.0, 1.0, 1.0], 0.0, &settings, TangentFrame::identity()).unwrap();
    println!("Lorenz T=20000: lambda = {:?} in {:.2}s, converged {}", out.lambda, t0.elapsed().as_secs_f64(), out.converged);
    println!("  vs classic {:?}; rel err l1 = {:.4}, |l2| = {:.2e}", LORENZ_CLASSIC_SPECTRUM,
        (out.lambda[0] - LORENZ_CLASSIC_SPECTRUM[0]).abs() / LORENZ_CLASSIC_SPECTRUM[0], out.lambda[1].abs());
    println!("  sum {:.6} vs div {:.6} (expect -13.6667)", out.lambda.iter().sum::<f64>(), out.avg_divergence);

    // linear diagonal, identity frame: exactness
    let t0 = Instant::now();
    let cfg_lin = IntegratorConfig { h_max: 0.01, ..IntegratorConfig::default() };
    let settings = BenettinSettings { transient_intervals: 5, accumulate_intervals: 2000, interval: 1.0, renorm_every: 1 };
    let flow = LinearField::new([-1.0, -2.0, -3.0, -4.0, -5.0, -6.0]);
    let out = benettin(&flow, &cfg_lin, [1.0; 6], 0.0, &settings, TangentFrame::identity()).unwrap();
    let max_err = out.lambda.iter().zip([-1.0f64, -2.0, -3.0, -4.0, -5.0, -6.0]).map(|(l, e)| (l - e).abs()).fold(0.0f64, f64::max);
    println!("linear identity-frame max err = {:.2e} in {:.2}s", max_err, t0.elapsed().as_secs_f64());

    // with a RANDOM frame, long run: alignment error decays as 1/T
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(1);
    let frame = TangentFrame::random(&mut rng);
    let settings = BenettinSettings { transient_intervals: 5, accumulate_intervals: 20000, interval: 1.0, renorm_every: 1 };
    let out = benettin(&flow, &cfg_lin, [1.0; 6], 0.0, &settings, frame).unwrap();
    let max_err = out.lambda.iter().zip([-1.0f64, -2.0, -3.0, -4.0, -5.0, -6.0]).map(|(l, e)| (l - e).abs()).fold(0.0f64, f64::max);
    println!("linear random-frame T=20000 max err = {:.2e}", max_err);
}
