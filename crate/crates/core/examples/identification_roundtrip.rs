//! Structural coefficients -> reduced form -> causal ratios, with and without
//! direct proxy effects.

use biproximal::model::{causal_ratios, reduced_form_from_structural, sensitivity_adjust};
use biproximal::StructuralParams;

fn main() -> biproximal::Result<()> {
    let s = StructuralParams::paper_defaults();
    let rf = reduced_form_from_structural(&s)?;
    println!("iota = {}", s.iota());
    println!(
        "theta_z = {:.4}, mu_z = {:.4}, theta_w = {:.4}, mu_w = {:.4}",
        rf.theta_z, rf.mu_z, rf.theta_w, rf.mu_w
    );
    let (bxy, byx) = causal_ratios(&rf)?;
    println!("recovered beta_xy = {bxy}, beta_yx = {byx}");

    // Z also affects Y and W also affects X: the plain ratios are off.
    let (r_w, r_z) = (0.3, 0.2);
    let violated = s.with_sensitivity(r_w, r_z);
    let (s_xy, s_yx) = causal_ratios(&reduced_form_from_structural(&violated)?)?;
    println!("\nwith r_w = {r_w}, r_z = {r_z}: ratios S_xy = {s_xy:.5}, S_yx = {s_yx:.5}");
    let (axy, ayx) = sensitivity_adjust(s_xy, s_yx, r_w, r_z)?;
    println!("adjusted beta_xy = {axy:.10}, beta_yx = {ayx:.10}");

    // Outside the stable region construction fails.
    let unstable = StructuralParams::paper_defaults().with_effects(1.5, 0.8);
    println!("\nbeta_xy * beta_yx = 1.2: {}", reduced_form_from_structural(&unstable).unwrap_err());
    Ok(())
}
