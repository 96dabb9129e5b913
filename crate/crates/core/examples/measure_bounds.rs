//! Ψ-weighted measure of the outer shell Q*_R against its growth law.

use exterior_blowup::exponents::BoundaryCondition;
use exterior_blowup::quadrature::measure_qrstar_psi;

fn main() -> exterior_blowup::Result<()> {
    let cases = [
        (2, BoundaryCondition::dirichlet()),
        (2, BoundaryCondition::neumann()),
        (3, BoundaryCondition::dirichlet()),
        (3, BoundaryCondition::neumann()),
    ];
    for (d, bc) in cases {
        let mut line = format!("d={d} {:<9}", bc.kind().to_string());
        for radius in [4.0f64, 8.0, 16.0, 32.0] {
            let m = measure_qrstar_psi(radius, d, &bc, radius * radius)?;
            let scale = if d == 2 && bc.beta_nonzero() {
                radius.powi(4) * radius.ln()
            } else {
                radius.powi(d as i32 + 2)
            };
            line.push_str(&format!("  R={radius:<4} {:.4}", m / scale));
        }
        println!("{line}");
    }
    Ok(())
}
