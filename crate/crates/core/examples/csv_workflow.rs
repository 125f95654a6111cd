//! File-based workflow: write a CSV with custom column names, map the roles,
//! and produce the JSON results document the `estimate` subcommand writes.

use std::fmt::Write as _;

use biproximal::commands::{cmd_estimate, RunConfig};
use biproximal::io::{ColumnMapping, NaPolicy};
use biproximal::simulation::generate;
use biproximal::ScenarioConfig;

fn main() -> biproximal::Result<()> {
    let sample = generate(&ScenarioConfig::paper_defaults(3000, 5))?;
    let d = &sample.data;
    let mut text = String::from("year,outcome_a,outcome_b,proxy_a,proxy_b,income\n");
    for i in 0..d.n() {
        // a few incomplete rows
        let b = if i % 500 == 7 { "NA".to_string() } else { d.y()[i].to_string() };
        writeln!(text, "{},{},{b},{},{},{}", 1990 + i % 30, d.x()[i], d.z()[i], d.w()[i], d.v()[0][i]).unwrap();
    }
    let dir = tempfile::tempdir().map_err(|e| biproximal::Error::io("tempdir", e))?;
    let path = dir.path().join("panel.csv");
    std::fs::write(&path, text).map_err(|e| biproximal::Error::io(&path, e))?;

    let cfg = RunConfig {
        mapping: ColumnMapping {
            x_col: "outcome_a".into(),
            y_col: "outcome_b".into(),
            z_col: "proxy_a".into(),
            w_col: "proxy_b".into(),
            v_cols: vec!["income".into()],
            na_policy: NaPolicy::DropRows,
        },
        ..RunConfig::default()
    };
    let report = cmd_estimate(&cfg, &path)?;
    println!("rows read {}, dropped {}", report.data.rows_read, report.data.rows_dropped);
    for r in &report.results {
        println!(
            "{:<8} {}: {:7.3}  [{:7.3}, {:7.3}]",
            r.method.as_str(),
            r.direction,
            r.estimate,
            r.ci_lower,
            r.ci_upper
        );
    }
    Ok(())
}
