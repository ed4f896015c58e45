// Random piecewise geodesics with long segments and wide angles stay close
// to their chord.

use std::error::Error;
use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use twobridge::pwgeo::{chord_hausdorff, chord_projections, empirical_constants_with, random_path, validate};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let path = random_path(&mut rng, 20, 10.0, 5.0 * PI / 6.0);
    assert!(validate(&path, 10.0, 5.0 * PI / 6.0));
    let xi = chord_hausdorff(&path, 64)?;
    let proj = chord_projections(&path)?;
    println!("one path: Hausdorff distance to chord {xi:.4}, chord length {:.2}", proj.total);

    let rep = empirical_constants_with(0.5, &[2.0, 10.0, 100.0], &[PI / 2.0, 5.0 * PI / 6.0, PI], 50, 7, 20, 32)?;
    println!("{:>6} {:>7} {:>10} {:>10}", "B", "α/π", "max", "mean");
    for c in &rep.cells {
        println!("{:>6} {:>7.3} {:>10.4} {:>10.4}{}", c.b, c.alpha / PI, c.max_hausdorff, c.mean_hausdorff, if c.passed { "  ok" } else { "" });
    }
    for c in &rep.pareto {
        println!("least passing cell: B = {}, α = {:.3}π", c.b, c.alpha / PI);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
