//! Percentile bootstrap intervals for both effects and the weak-basis check.

use biproximal::estimators::bi_tsls_direction;
use biproximal::inference::{bootstrap_pair, weak_basis_check};
use biproximal::simulation::generate;
use biproximal::{BasisSpec, BootstrapConfig, Direction, ScenarioConfig};

fn main() -> biproximal::Result<()> {
    let sample = generate(&ScenarioConfig::paper_defaults(5000, 3))?;
    let basis = BasisSpec::ProductInteraction;
    let cfg = BootstrapConfig::with_seed(42);

    let (xy, yx) = bootstrap_pair(
        &sample.data,
        |d| {
            Ok((
                bi_tsls_direction(d, &basis, Direction::XToY)?.estimate,
                bi_tsls_direction(d, &basis, Direction::YToX)?.estimate,
            ))
        },
        &cfg,
    )?;
    for (name, r) in [("x -> y", &xy), ("y -> x", &yx)] {
        println!(
            "{name}: {:.3} (se {:.3}), 95% CI [{:.3}, {:.3}], {} failed replicates",
            r.point, r.se, r.ci_lower, r.ci_upper, r.n_failed_replicates
        );
    }

    for d in Direction::BOTH {
        let report = weak_basis_check(&sample.data, &basis, d, &cfg)?;
        println!(
            "basis {d}: max |z| = {:.1} vs critical {:.2} -> {}",
            report.max_abs_z,
            report.critical_value,
            if report.weak { "weak" } else { "ok" }
        );
    }
    Ok(())
}
