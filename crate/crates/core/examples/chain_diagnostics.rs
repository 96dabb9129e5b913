//! Both sides of each Hölder link evaluated on a stored run.

use exterior_blowup::exponents::{BoundaryCondition, ExponentVector};
use exterior_blowup::quadrature::{chain_check, ChainInputs};
use exterior_blowup::solver::{run, RunConfig};

fn main() -> exterior_blowup::Result<()> {
    let eps = 0.2;
    let mut config = RunConfig::new(&[1.4, 1.4], 3, 4000, 60.0, eps);
    config.time.history_stride = Some(4);
    config.time.history_r_max = Some(18.0);
    let record = run(&config)?;
    let history = record.history.as_ref().expect("history requested");
    let p = ExponentVector::new(vec![1.4, 1.4])?;
    let c0 = record.positivity;
    let report = chain_check(&ChainInputs {
        history,
        p: &p,
        bc: BoundaryCondition::dirichlet(),
        radii: &[4.0, 8.0, 16.0],
        epsilon: eps,
        data_constants: &[c0, c0],
        lambda: p.lambda_floor(),
    })?;
    println!(
        "t_final={:.3} gamma_max={}",
        history.t_final, report.gamma_max
    );
    for row in &report.rows {
        let link = &row.links[1];
        println!(
            "R={:<4} inside={} nonlinear+data={:.4} pairing={:.4} link={:?} composed={:?} final={:.3}",
            row.radius, row.within_lifespan, link.left, link.weak_pairing, link.ratio, row.composed_ratio, row.final_ratio
        );
    }
    Ok(())
}
