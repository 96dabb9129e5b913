//! One subcritical run, its threshold sensitivity and peak growth.

use exterior_blowup::solver::{run, threshold_sensitivity, RunConfig};

fn main() -> exterior_blowup::Result<()> {
    let config = RunConfig::new(&[1.4, 1.4], 3, 2000, 60.0, 0.5);
    let record = run(&config)?;
    println!("verdict {:?}", record.verdict);
    println!(
        "dr={:.4e} dt={:.4e} steps={} t_cross={:?}",
        record.dr, record.dt, record.steps, record.t_cross
    );
    for s in record.peak_history.iter().rev().step_by(50).take(5) {
        println!("  {s:?}");
    }
    for (m, t) in threshold_sensitivity(&config, &[1e6, 1e8, 1e10])? {
        println!("M={m:.0e}  t_blow={t:?}");
    }
    Ok(())
}
