//! Runs a scenario programmatically and prints its results table.

use rqte::scenario::{run_scenario, ParamValue, ScenarioConfig, ScenarioKind};

fn main() -> rqte::Result<()> {
    let out = std::env::temp_dir().join("rqte-example");
    let cfg = ScenarioConfig::new(ScenarioKind::Harmonic)
        .with_param("omega", ParamValue::Float(2.0))
        .with_param("n-max", ParamValue::Int(5))
        .with_output(&out);
    let run = run_scenario(&cfg)?;
    print!("{}", run.table.to_csv());
    println!("wrote {} and {}", run.results.display(), run.manifest.display());
    Ok(())
}
