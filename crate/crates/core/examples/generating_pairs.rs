// Generating pairs `(a, w⁻¹ l^N)` of the filled figure-eight group: their
// commutators agree up to conjugacy, trace scans tell the pairs apart and
// positive words in them are long.

use std::error::Error;

use twobridge::holonomy::{cusp_parameter, geometric_rep, solve_fillings, two_bridge_presentation, CuspData};
use twobridge::pairs::{
    commutator_check, conjugacy_trace_scan, gamma_audit_at_least_n, make_pair, positive_word_length, PositiveWordSpec,
    GAMMA_BETA, GAMMA_T0,
};
use twobridge::words::FREE_ALPHABET;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let knot = two_bridge_presentation(5, 3)?;
    let rep = geometric_rep(&knot)?;
    let tau0 = cusp_parameter(&rep, &knot)?;
    let fillings = solve_fillings(&knot, &[40, 80], &rep)?;
    let (fr40, fr80) = (&fillings[0], &fillings[1]);

    let pair = make_pair(&knot, 2);
    println!("N = 2 pair: ({}, {})", pair.first.format_in(FREE_ALPHABET), pair.second.format_in(FREE_ALPHABET));

    let comm = commutator_check(fr40, &knot, &[0, 1, 2, 3]);
    println!("commutator traces agree to {:.1e}: {}", comm.max_diff, comm.passed);

    let scan = conjugacy_trace_scan(fr40, &knot, None, 3, 5, &[-2, -1, 0, 1, 2]);
    println!("trace margin between N = 3 and N' = 5 + kn: {:.4}", scan.min_margin);

    let spec = PositiveWordSpec::new(vec![1, 2])?;
    let long = positive_word_length(fr80, &knot, 20, &spec)?;
    println!("positive word of length {}: translation length {:.4} vs meridian {:.4}", spec.s(), long.length.a, long.meridian_length);

    let cusp = CuspData::new(GAMMA_T0, tau0);
    let (big_n, audits) = gamma_audit_at_least_n(fr80, &knot, &cusp, &[spec], GAMMA_BETA, 200, 10)?;
    let a = &audits[0];
    println!(
        "least clearing N = {big_n}; path with B = {:.3}, α = {:.3}, ξ = {:.4}; length {:.3} ≥ {:.3}: {}",
        a.b_meas, a.alpha_meas, a.xi_meas, a.translation_length, a.projection_bound, a.passed
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
