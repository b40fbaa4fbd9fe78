//! Steady states of the opinion cubic: one slice below the critical attention
//! and one inside the fold, then the fold boundary.
//!
//! cargo run --example cusp_surface

use opinion_cusp::cusp::{
    compute_scale_factor, fold_boundary, saddle_node, sample_surface, GridSpec,
};
use opinion_cusp::PsychParams;

fn main() -> opinion_cusp::Result<()> {
    let params = PsychParams::default();
    let scale = compute_scale_factor(&params);
    println!("max |O| = {:.7}, scale factor = {scale:.7}", 1.0 / scale);

    let surface = sample_surface(&params, GridSpec { n_a: 21, n_i: 9 })?;
    for ia in [3, 18] {
        let slice = surface.slice(ia);
        println!("\nA = {:.2}", slice[0].a);
        for pt in slice {
            let roots: Vec<String> = pt
                .states
                .iter()
                .map(|s| format!("{:+.4} ({})", s.o * scale, s.stability.as_str()))
                .collect();
            println!("  I = {:+.2}: {}", pt.i, roots.join(", "));
        }
    }

    let sn = saddle_node(1.8, &params).expect("A = 1.8 is above A_crit");
    println!(
        "\nsaddle node at A = 1.8: o_sn = {:.5}, i_sn = {:.5}",
        sn.o_sn, sn.i_sn
    );
    println!("\nfold boundary");
    for row in fold_boundary(&params, scale, 7) {
        println!(
            "  A = {:.3}  I_sn = {:.5}  E_P = {:.5}",
            row.a, row.i_sn, row.e_p
        );
    }
    Ok(())
}
