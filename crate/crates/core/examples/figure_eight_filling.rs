// The figure-eight knot: presentation, parabolic representation, cusp
// shape and the holonomy of a few hyperbolic Dehn fillings.

use std::error::Error;

use twobridge::holonomy::{cusp_parameter, geometric_rep, riley_polynomial, solve_fillings, two_bridge_presentation};
use twobridge::words::FREE_ALPHABET;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let knot = two_bridge_presentation(5, 3)?;
    println!("{}: relator {}", knot.name(), knot.relator.format_in(FREE_ALPHABET));
    println!("longitude {}", knot.longitude.format_in(FREE_ALPHABET));
    println!("Riley polynomial {}", riley_polynomial(&knot));

    let rep = geometric_rep(&knot)?;
    let tau0 = cusp_parameter(&rep, &knot)?;
    println!("geometric root c = {:.6}, cusp shape τ = {:.10}", rep.c, tau0);

    for fr in solve_fillings(&knot, &[10, 20, 40], &rep)? {
        println!(
            "n = {:>3}: u = {:.6}, v = {:.6}, τ − τ0 = {:.2e}, relator residual {:.1e}",
            fr.n,
            fr.u,
            fr.v,
            (fr.tau - tau0).norm(),
            fr.relator_residual
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
