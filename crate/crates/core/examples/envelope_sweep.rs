//! Upper and lower attention bounds over a sweep of the polarization number,
//! written as CSV and as an SVG plot.
//!
//! cargo run --example envelope_sweep -- [out_dir]

use std::path::PathBuf;

use opinion_cusp::attention::envelope_of_p;
use opinion_cusp::io::{csv_string, EnvelopeRow};
use opinion_cusp::plot::{emit_plot, envelope_plot};
use opinion_cusp::polarization::log_space;
use opinion_cusp::PsychParams;

fn main() -> opinion_cusp::Result<()> {
    let out_dir = std::env::args()
        .nth(1)
        .map_or_else(std::env::temp_dir, PathBuf::from);
    let params = PsychParams::default();
    let rows = log_space(0.01, 100.0, 81)?
        .into_iter()
        .map(|p| {
            let e = envelope_of_p(&params, p)?;
            Ok(EnvelopeRow {
                p,
                a_upper: e.a_upper,
                a_lower: e.a_lower,
            })
        })
        .collect::<opinion_cusp::Result<Vec<_>>>()?;

    for row in rows.iter().step_by(10) {
        println!(
            "P = {:>9.4}  A_UP = {:.5}  A_LP = {:.5}",
            row.p, row.a_upper, row.a_lower
        );
    }
    let csv_path = out_dir.join("envelope.csv");
    let svg_path = out_dir.join("envelope.svg");
    std::fs::write(&csv_path, csv_string(&rows)?)?;
    emit_plot(&envelope_plot(&rows, &params), &svg_path)?;
    println!("wrote {} and {}", csv_path.display(), svg_path.display());
    Ok(())
}
