use bubble3_core::*;

fn main() {
    let p = PhysicalParams::reference().with_controls(36.5, 1.5e6);
    let sys = BubbleSystem::new(&p).unwrap();
    let cfg = IntegratorConfig::default();
    let period = sys.period_tau();
    let mut prop = Propagator::new(&sys, &cfg).unwrap();
    let mut tau = 0.0;
    let mut y = State::perturbed_equilibrium().to_y();
    // settle 500 periods
    for k in 1..=500 {
        prop.advance(&mut tau, &mut y, k as f64 * period).unwrap();
    }
    // sample finely over 3 periods
    let (mut rmin, mut rmax, mut umin, mut umax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    let steps = 3000;
    let t0 = tau;
    for k in 1..=steps {
        let target = t0 + 3.0 * period * k as f64 / steps as f64;
        prop.advance(&mut tau, &mut y, target).unwrap();
        rmin = rmin.min(y[0]); rmax = rmax.max(y[0]);
        umin = umin.min(y[3]); umax = umax.max(y[3]);
    }
    println!("r range over 3 periods: [{rmin:.4}, {rmax:.4}], u range [{umin:.4}, {umax:.4}]");
    println!("nondim drive amplitude = {:.4}, static = {:.4}", 1.5e6/1016679.4165116279, 99297.0/1016679.4165116279);
}
