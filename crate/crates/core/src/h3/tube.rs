use num_complex::Complex64;
use serde::Serialize;

use super::{ComplexLength, Geodesic};

/// Safety margin added to `artanh(sin β)` in [`beta_constants`].
pub const BETA_MARGIN: f64 = 0.1;

/// The closed `r`-neighborhood of a geodesic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tube {
    pub core: Geodesic,
    pub r: f64,
}

/// `|cosh(a + ib) − 1| − (cosh a − cos b)`, which vanishes identically.
pub fn eq1_residual(a: f64, b: f64) -> f64 {
    let lhs = (Complex64::new(a, b).cosh() - 1.0).norm();
    lhs - (a.cosh() - b.cos())
}

/// Translation length, measured on the boundary of the radius-`r` tube
/// about its axis, of a loxodromic element with complex length `len`:
/// `cosh d = cosh a + sinh² r (cosh a − cos b)`.
pub fn tube_boundary_translation(len: ComplexLength, r: f64) -> f64 {
    let (a, b) = (len.a, len.b);
    debug_assert!(
        eq1_residual(a, b).abs() <= 1e-12 * a.cosh().max(1.0),
        "|cosh(a+ib) − 1| identity failed at a={a}, b={b}"
    );
    // cosh a − 1 + sinh² r (cosh a − cos b), kept away from cancellation
    let excess = 2.0 * (a / 2.0).sinh().powi(2) + r.sinh().powi(2) * (a.cosh() - b.cos());
    2.0 * (excess / 2.0).sqrt().asinh()
}

/// Translation length of `z ↦ z + τ` on the horosphere at height `t0`,
/// i.e. `arcosh(1 + |τ|²/(2 t0²))`.
pub fn horosphere_translation(tau: Complex64, t0: f64) -> f64 {
    2.0 * (tau.norm() / (2.0 * t0)).asinh()
}

/// Angle between a chord of length `d` joining two points of the boundary
/// of a radius-`r` tube, whose endpoints differ by twist `φ`, and the
/// boundary at its endpoint.
pub fn chord_angle(r: f64, d: f64, phi: f64) -> f64 {
    let s = r.tanh() * (d.cosh() - phi.cos()) / d.sinh();
    s.clamp(0.0, 1.0).asin()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BetaConstants {
    pub beta: f64,
    pub margin: f64,
    pub r: f64,
    pub q: f64,
    pub kappa: f64,
}

/// Tube radius and chord length above which every chord meets the tube
/// boundary at angle at least `β`.
pub fn beta_constants(beta: f64) -> BetaConstants {
    assert!(beta > 0.0 && beta < std::f64::consts::FRAC_PI_2, "β must lie in (0, π/2)");
    let sb = beta.sin();
    let r = sb.atanh() + BETA_MARGIN;
    let q = sb / r.tanh();
    let kappa = 2.0 * q.atanh();
    BetaConstants { beta, margin: BETA_MARGIN, r, q, kappa }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::h3::{dist, project_to_geodesic, vertex_angle, HypIsometry, UHPoint};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn boundary_point(r: f64, theta: f64, t: f64) -> UHPoint {
        UHPoint::new(Complex64::from_polar(r.sinh() * t, theta), t)
    }

    #[test]
    fn translation_examples() {
        let len = ComplexLength::new(0.7, 1.2);
        assert!((tube_boundary_translation(len, 0.0) - 0.7).abs() < 1e-15);
        let a = 0.1f64;
        let expected = (a.cosh() + 1f64.sinh().powi(2) * (a.cosh() + 1.0)).acosh();
        assert!((tube_boundary_translation(ComplexLength::new(a, PI), 1.0) - expected).abs() < 1e-13);
        assert_eq!(horosphere_translation(Complex64::new(0.0, 0.0), 3.0), 0.0);
        assert!((horosphere_translation(Complex64::new(0.0, 2.0), 2.0) - 1.5f64.acosh()).abs() < 1e-15);
    }

    #[test]
    fn tube_formula_matches_sampling() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..100 {
            let (a, b, r) = (rng.gen_range(0.01..2.0), rng.gen_range(-PI..PI), rng.gen_range(0.0..3.0));
            let g = HypIsometry::diagonal(Complex64::new(a, b));
            let mut best = f64::INFINITY;
            for k in 0..100 {
                let y = boundary_point(r, 2.0 * PI * k as f64 / 100.0, 1.0 + 0.01 * k as f64);
                best = best.min(dist(&y, &g.apply(&y)));
            }
            let closed = tube_boundary_translation(ComplexLength::new(a, b), r);
            assert!((best - closed).abs() / closed < 1e-10);
        }
    }

    #[test]
    fn horosphere_matches_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let tau = Complex64::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            let t0 = rng.gen_range(0.5..20.0);
            let d = dist(&UHPoint::on_axis(t0), &UHPoint::new(tau, t0));
            assert!((horosphere_translation(tau, t0) - d).abs() < 1e-12);
        }
    }

    /// Angle measured on explicit points: `x` on the tube boundary,
    /// `y = M x` for the loxodromic `M` with length `δ + iφ`.
    fn measured_chord_angle(r: f64, delta: f64, phi: f64) -> f64 {
        let x = boundary_point(r, 0.3, 1.0);
        let y = HypIsometry::diagonal(Complex64::new(delta, phi)).apply(&x);
        let foot = project_to_geodesic(&y, &crate::h3::Geodesic::vertical()).unwrap();
        PI / 2.0 - vertex_angle(&x, &y, &foot).unwrap()
    }

    #[test]
    fn chord_angle_matches_construction() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..1000 {
            let (r, delta, phi): (f64, f64, f64) = (rng.gen_range(0.1..3.0), rng.gen_range(0.05..4.0), rng.gen_range(-PI..PI));
            let cd = delta.cosh() * r.cosh().powi(2) - phi.cos() * r.sinh().powi(2);
            let d = cd.acosh();
            let x = boundary_point(r, 0.3, 1.0);
            let y = HypIsometry::diagonal(Complex64::new(delta, phi)).apply(&x);
            assert!((dist(&x, &y) - d).abs() < 1e-9 * d.max(1.0));
            let m = measured_chord_angle(r, delta, phi);
            assert!((chord_angle(r, d, phi) - m).abs() < 1e-7, "r={r} δ={delta} φ={phi}");
        }
    }

    #[test]
    fn chord_angle_examples() {
        let (r, d) = (0.8f64, 1.3f64);
        assert!((chord_angle(r, d, 0.0) - (r.tanh() * (d / 2.0).tanh()).asin()).abs() < 1e-14);
        assert!((chord_angle(r, 40.0, 0.0) - r.tanh().asin()).abs() < 1e-12);
    }

    #[test]
    fn beta_constant_examples() {
        let small = beta_constants(1e-6);
        assert!((small.r - BETA_MARGIN).abs() < 1e-5 && small.kappa < 1e-4);
        for beta in [0.1, PI / 6.0, PI / 4.0, PI / 3.0, 1.5] {
            let k = beta_constants(beta);
            assert!(k.q < 1.0);
            assert!((k.q - (k.kappa / 2.0).tanh()).abs() < 1e-12);
        }
    }

    #[test]
    fn monotonicity() {
        let len = ComplexLength::new(0.3, 0.4);
        let mut prev = 0.0;
        for i in 0..50 {
            let v = tube_boundary_translation(len, i as f64 * 0.1);
            assert!(v > prev);
            prev = v;
        }
        for i in 1..50 {
            let x = i as f64 * 0.1;
            assert!(chord_angle(x + 0.1, 1.0, 0.0) > chord_angle(x, 1.0, 0.0));
            assert!(chord_angle(1.0, x + 0.1, 0.0) > chord_angle(1.0, x, 0.0));
        }
    }
}
