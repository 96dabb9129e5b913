//! Harmonic weights Ψ for each boundary kind, with their residuals.

use exterior_blowup::exponents::BoundaryCondition;
use exterior_blowup::testfn::HarmonicWeight;

fn main() -> exterior_blowup::Result<()> {
    let bcs = [(0.0, 1.0), (1.0, 0.0), (1.0, 1.0), (2.0, 1.0)];
    for d in 1..=4 {
        for (alpha, beta) in bcs {
            let w = HarmonicWeight::new(d, BoundaryCondition::new(alpha, beta)?)?;
            let worst = (0..=99)
                .map(|i| 1.0 + i as f64)
                .map(|r| w.radial_laplacian(r).map(f64::abs))
                .collect::<exterior_blowup::Result<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            println!(
                "d={d} (alpha,beta)=({alpha},{beta})  Psi(1)={:.4} Psi(10)={:.4} max|Lap Psi|={worst:.1e} boundary={:.1e}",
                w.value(1.0)?,
                w.value(10.0)?,
                w.boundary_residual()
            );
        }
    }
    Ok(())
}
