// Isometries of upper half-space, tubes around an axis and the chord
// angle guarantee.

use std::error::Error;
use std::f64::consts::PI;

use num_complex::Complex64;
use twobridge::h3::{
    beta_constants, chord_angle, classify_and_length, dist, geodesic_through, project_to_geodesic,
    tube_boundary_translation, HypIsometry, UHPoint,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let g = HypIsometry::diagonal(Complex64::new(1.2, 0.7));
    let (class, len) = classify_and_length(&g)?;
    println!("{class:?} with complex length {:.4} + {:.4}i", len.a, len.b);

    // closed form against a direct sample on the tube of radius 1
    let r = 1.0;
    let closed = tube_boundary_translation(len, r);
    let sampled = (0..360)
        .map(|i| {
            let y = UHPoint::new(Complex64::from_polar(r.sinh(), i as f64 * PI / 180.0), 1.0);
            dist(&y, &g.apply(&y))
        })
        .fold(f64::INFINITY, f64::min);
    println!("translation on the tube: closed form {closed:.6}, sampled {sampled:.6}");
    assert!((closed - sampled).abs() < 1e-6);

    let p = UHPoint::new(Complex64::new(0.3, -0.4), 0.5);
    let q = UHPoint::new(Complex64::new(-1.0, 2.0), 3.0);
    let line = geodesic_through(&p, &q)?;
    let foot = project_to_geodesic(&UHPoint::on_axis(1.0), &line)?;
    println!("foot of o on the line through p and q: {foot:?}");

    let c = beta_constants(PI / 4.0);
    println!("β = π/4: R = {:.4}, κ = {:.4}", c.r, c.kappa);
    let angle = chord_angle(c.r + 0.5, c.kappa + 1.0, 0.3);
    println!("chord angle at R + 0.5, d = κ + 1: {angle:.4} ≥ {:.4}", c.beta);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
