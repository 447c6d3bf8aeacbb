//! Sign changes of `T'` near the outer boundary on a 3 x 3 parameter grid
//! around one power-family and one Loud anchor (coarse resolution).

use periodlab::experiments::{run, Experiment, ExperimentConfig};

fn main() -> periodlab::Result<()> {
    for (experiment, text) in [(Experiment::ScanPower, "q = 0\np = 2"), (Experiment::ScanLoud, "d = -1\nf = 2")] {
        let mut config = ExperimentConfig::new(experiment);
        config.apply_text(text)?;
        config.resolution = 60;
        let report = run(&config)?;
        println!("{experiment}");
        for row in &report.rows {
            println!("  {}", row[..5].join("  "));
        }
        for line in &report.summary {
            println!("  {line}");
        }
    }
    Ok(())
}
