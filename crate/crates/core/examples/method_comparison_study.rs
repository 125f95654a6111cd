//! A reduced Monte Carlo comparison of the three methods. The bundled plans
//! in `plans/` run the full-size studies through the `replicate` subcommand.

use biproximal::experiments::{run_method_comparison, StudyPlan};
use biproximal::NoiseScenario;

fn main() -> biproximal::Result<()> {
    let plan = StudyPlan {
        replications: 40,
        sample_sizes: vec![1000, 5000],
        scenarios: vec![NoiseScenario::ANormal, NoiseScenario::CRademacher],
        master_seed: 1,
        ..StudyPlan::default()
    };
    let cells = run_method_comparison(&plan)?;
    println!("{:<8} {:<7} {:<13} {:>5} {:>8} {:>7} {:>7}", "method", "dir", "scenario", "n", "mean", "bias", "sd");
    for c in &cells {
        let k = &c.key;
        println!(
            "{:<8} {:<7} {:<13} {:>5} {:>8.3} {:>7.3} {:>7.3}",
            k.method.as_str(),
            k.direction.as_str(),
            k.scenario.as_str(),
            k.n,
            c.mean,
            c.bias,
            c.sd
        );
    }
    Ok(())
}
