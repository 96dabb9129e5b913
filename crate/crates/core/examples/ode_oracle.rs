//! Spatially homogeneous ODE blow-up times against closed forms.

use exterior_blowup::exponents::ExponentVector;
use exterior_blowup::oracle::{integrate_adaptive, solve_first_order_exact, OdeSystem};

fn main() -> exterior_blowup::Result<()> {
    for p in [1.5, 2.0, 3.0] {
        for y0 in [0.01, 0.1, 1.0] {
            let sys = OdeSystem::first_order(ExponentVector::new(vec![p])?, vec![y0])?;
            let est = integrate_adaptive(&sys, 1e12)?;
            let exact = solve_first_order_exact(p, y0);
            println!(
                "p={p} y0={y0:<5} T={:.10} exact={exact:.10} rel={:.1e} +-{:.1e}",
                est.t_blow,
                (est.t_blow - exact).abs() / exact,
                est.uncertainty
            );
        }
    }
    let damped = OdeSystem::damped(ExponentVector::new(vec![1.4, 1.4])?, 0.5)?;
    let est = integrate_adaptive(&damped, 1e12)?;
    println!(
        "damped (1.4, 1.4), eps=0.5: T={:.6} +-{:.1e}",
        est.t_blow, est.uncertainty
    );
    Ok(())
}
