//! Sup-ratio batch for the cutoff estimates, plus a mutation that must fail.

use exterior_blowup::harness::lemma::mutation_r3;
use exterior_blowup::harness::{verify_lemma_batch, LemmaBatchSpec};

fn main() -> exterior_blowup::Result<()> {
    let mut spec = LemmaBatchSpec::default();
    spec.sampling.nt = 256;
    spec.sampling.nr = 256;
    let rep = verify_lemma_batch(&spec)?;
    for row in &rep.rows {
        println!(
            "d={} {:<9} lambda={:.3} band={:.3?} {}",
            row.dim,
            row.bc.kind().to_string(),
            row.lambda.lambda,
            row.band,
            if row.pass { "ok" } else { "FAIL" }
        );
    }
    spec.adjust = Some(mutation_r3);
    let mutated = verify_lemma_batch(&spec)?;
    let growth = mutated
        .rows
        .iter()
        .map(|r| r.growth[0])
        .fold(f64::INFINITY, f64::min);
    println!(
        "standard: {}  R^-3 mutation: {} (min growth {growth:.2})",
        rep.pass, mutated.pass
    );
    Ok(())
}
