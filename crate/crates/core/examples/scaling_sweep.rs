//! ε-sweep with artifacts, fit and one-sided constants.

use exterior_blowup::harness::{geometric_eps, report, sweep, write_sweep_artifacts, SweepSpec};
use exterior_blowup::solver::RunConfig;

fn main() -> exterior_blowup::Result<()> {
    let base = RunConfig::new(&[1.4, 1.4], 3, 2000, 60.0, 0.8);
    let spec = SweepSpec::new(base, geometric_eps(0.8, 0.2, 5)?);
    let result = sweep(&spec)?;
    let dir = std::env::temp_dir().join("blowup-lab-scaling-sweep");
    let paths = write_sweep_artifacts(&dir, &result)?;
    let summary = report(&dir)?;
    for p in &summary.points {
        println!("eps={:.4} T={:.4}", p.epsilon, p.t_blow);
    }
    if let Some(fit) = &summary.fit {
        println!("fitted b={:.4} vs theory {:?}", fit.b, fit.b_theory);
    }
    if let Some(c) = &summary.one_sided {
        println!("C={:.4} spread={:.3}", c.c, c.spread);
    }
    println!(
        "artifacts in {}",
        paths.csv.parent().unwrap_or(&dir).display()
    );
    Ok(())
}
