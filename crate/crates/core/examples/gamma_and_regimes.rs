//! γ vectors and lifespan branches for a few coupled systems.

use exterior_blowup::exponents::{
    classify_regime, compute_gamma, gamma_cyclic_closed_form, BoundaryCondition, ExponentVector,
    DEFAULT_TOL_CRIT,
};

fn main() -> exterior_blowup::Result<()> {
    let robin = BoundaryCondition::robin(1.0, 1.0)?;
    let cases: [(&[f64], u32, BoundaryCondition); 6] = [
        (&[1.4, 1.4], 3, BoundaryCondition::dirichlet()),
        (&[2.0, 2.0], 2, BoundaryCondition::neumann()),
        (&[2.0, 2.0], 2, robin),
        (&[1.5, 3.0], 3, BoundaryCondition::dirichlet()),
        (&[1.2, 1.5, 2.0], 4, BoundaryCondition::dirichlet()),
        (&[3.0, 3.0], 3, BoundaryCondition::neumann()),
    ];
    for (p, d, bc) in cases {
        let pv = ExponentVector::new(p.to_vec())?;
        let g = compute_gamma(&pv, d)?;
        let closed = gamma_cyclic_closed_form(&pv, g.argmax + 1)?;
        let bound = classify_regime(&pv, d, &bc, DEFAULT_TOL_CRIT)
            .map(|b| b.describe())
            .unwrap_or_else(|e| e.to_string());
        println!(
            "p={p:?} d={d} {:<9} gamma_max={:.6} (closed form {:.6}) Gamma={:+.6}  {bound}",
            bc.kind().to_string(),
            g.gamma_max,
            closed,
            g.gamma_excess
        );
    }
    Ok(())
}
