// Tube radii and translation lengths of the filled figure-eight holonomy
// converge to their cusp limits as the filling slope grows.

use std::error::Error;

use twobridge::holonomy::{
    asymptotics_check, cusp_parameter, geometric_rep, prop42_table, solve_fillings, tube_separation,
    two_bridge_presentation, CuspData, DEFAULT_T0,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let knot = two_bridge_presentation(5, 3)?;
    let rep = geometric_rep(&knot)?;
    let cusp = CuspData::new(DEFAULT_T0, cusp_parameter(&rep, &knot)?);
    let fillings = solve_fillings(&knot, &[10, 20, 40, 80], &rep)?;

    println!("{:>4} {:>3} {:>10} {:>10} {:>9}", "n", "k", "length", "limit", "rel err");
    for row in prop42_table(&fillings, &cusp, &[1], &[-1, 0, 1]) {
        println!("{:>4} {:>3} {:>10.6} {:>10.6} {:>8.3}%", row.n, row.k, row.length, row.limit, 100.0 * row.rel_err);
    }

    let asym = asymptotics_check(&fillings, &cusp);
    for row in &asym.rows {
        println!("n = {:>3}: |v| cosh r = {:.5} (limit {:.5})", row.n, row.v_cosh_r, asym.v_cosh_r_limit);
    }

    let sep = tube_separation(&fillings[1], &knot, &cusp, 6, 1.0)?;
    println!(
        "n = {}: over {} words, closest translate of the core at distance {:.4} (tube radius {:.4})",
        sep.n, sep.considered, sep.min_distance, sep.r_n
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
