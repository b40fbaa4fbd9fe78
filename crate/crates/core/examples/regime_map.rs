//! Regime classification over arrival period and network size.
//!
//! cargo run --example regime_map -- [out_dir]

use std::path::PathBuf;

use opinion_cusp::io::csv_string;
use opinion_cusp::plot::{emit_plot, regime_map_plot};
use opinion_cusp::polarization::{
    boundary_tau_hours, classify_regime, critical_p1, critical_p2, log_space, log_space_int,
    polarization_number, regime_map,
};
use opinion_cusp::{PsychParams, SocialParams};

fn main() -> opinion_cusp::Result<()> {
    let out_dir = std::env::args()
        .nth(1)
        .map_or_else(std::env::temp_dir, PathBuf::from);
    let params = PsychParams::default();

    for (tau_h, n) in [(5.0, 500), (6.0, 100), (100.0, 100), (24.0, 10)] {
        let p = polarization_number(&SocialParams::from_hours(tau_h, n)?);
        println!(
            "tau = {tau_h:>5} h, N = {n:>4}: P = {:>9.4} -> {}",
            p.value(),
            classify_regime(p, &params).regime
        );
    }
    let p1 = critical_p1(&params)
        .finite()
        .expect("defaults have a finite P1");
    let p2 = critical_p2(&params);
    for n in [10, 100, 1000] {
        println!(
            "N = {n:>4}: polarized below tau = {:.2} h, non-polarized above {:.2} h",
            boundary_tau_hours(p2, n),
            boundary_tau_hours(p1, n)
        );
    }

    let cells = regime_map(
        &log_space(0.1, 1000.0, 41)?,
        &log_space_int(2, 1000, 41)?,
        &params,
    )?;
    let csv_path = out_dir.join("regime_map.csv");
    let svg_path = out_dir.join("regime_map.svg");
    std::fs::write(&csv_path, csv_string(&cells)?)?;
    emit_plot(&regime_map_plot(&cells, &params), &svg_path)?;
    println!(
        "wrote {} cells to {} and {}",
        cells.len(),
        csv_path.display(),
        svg_path.display()
    );
    Ok(())
}
