//! Critical polarization numbers for a few parameter choices, with the
//! envelope value at each crossing.
//!
//! cargo run --example critical_numbers

use opinion_cusp::attention::envelope_of_p;
use opinion_cusp::polarization::{critical_p1, critical_p2, CriticalP1};
use opinion_cusp::PsychParams;

fn main() -> opinion_cusp::Result<()> {
    for (k, a_max, a_crit) in [
        (0.2, 2.0, 0.5),
        (0.1, 2.0, 0.5),
        (0.25, 2.0, 0.5),
        (0.2, 3.0, 1.0),
    ] {
        let params = PsychParams::new(k, a_max, a_crit)?;
        let p2 = critical_p2(&params);
        print!("k = {k}, A_max = {a_max}, A_crit = {a_crit}: P2 = {p2:.6}");
        print!(" (A_LP = {:.9})", envelope_of_p(&params, p2)?.a_lower);
        match critical_p1(&params) {
            CriticalP1::Finite(p1) => {
                println!(
                    ", P1 = {p1:.6} (A_UP = {:.9})",
                    envelope_of_p(&params, p1)?.a_upper
                )
            }
            CriticalP1::Unbounded => println!(", P1 unbounded since k A_max >= A_crit"),
        }
    }
    Ok(())
}
