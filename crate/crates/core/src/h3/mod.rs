//! Hyperbolic 3-space: the upper half-space and hyperboloid models,
//! isometries in PSL(2, ℂ), geodesics, tubes and horospheres.

mod geodesic;
mod mobius;
mod tube;

pub use geodesic::{
    common_perpendicular, geodesic_distance, geodesic_through, project_to_geodesic, standardizing_map,
    vertex_angle, BoundaryPoint, Geodesic, Perpendicular,
};
pub use mobius::{
    axis_endpoints, classify_and_length, classify_with_tol, mobius_apply, translation_along_axis,
    ComplexLength, HypIsometry, IsometryClass, CLASSIFY_TOL,
};
pub use tube::{
    beta_constants, chord_angle, eq1_residual, horosphere_translation,
    tube_boundary_translation, BetaConstants, Tube, BETA_MARGIN,
};

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum H3Error {
    #[error("determinant {0} deviates from 1")]
    DegenerateMatrix(Complex64),
    #[error("isometry is not loxodromic")]
    NotLoxodromic,
    #[error("coincident points")]
    CoincidentPoints,
    #[error("geodesic endpoints coincide")]
    DegenerateGeodesic,
    #[error("geodesics share an endpoint or intersect")]
    NoCommonPerpendicular,
}

/// A point `(z, t)` of upper half-space, `t > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UHPoint {
    pub z: Complex64,
    pub t: f64,
}

impl UHPoint {
    pub fn new(z: Complex64, t: f64) -> UHPoint {
        debug_assert!(t > 0.0, "height must be positive, got {t}");
        UHPoint { z, t }
    }

    pub fn on_axis(t: f64) -> UHPoint {
        UHPoint::new(Complex64::new(0.0, 0.0), t)
    }

    pub fn to_hyperboloid(self) -> MinkowskiPoint {
        let r2 = self.z.norm_sqr();
        let t = self.t;
        MinkowskiPoint {
            x: [
                (t * t + r2 + 1.0) / (2.0 * t),
                self.z.re / t,
                self.z.im / t,
                (t * t + r2 - 1.0) / (2.0 * t),
            ],
        }
    }
}

/// A point on the hyperboloid `−x0² + x1² + x2² + x3² = −1`, `x0 > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MinkowskiPoint {
    pub x: [f64; 4],
}

/// The Minkowski form of signature (−, +, +, +).
pub fn minkowski_inner(u: &[f64; 4], v: &[f64; 4]) -> f64 {
    -u[0] * v[0] + u[1] * v[1] + u[2] * v[2] + u[3] * v[3]
}

impl MinkowskiPoint {
    pub fn to_upper_half_space(self) -> UHPoint {
        let [x0, x1, x2, x3] = self.x;
        let t = 1.0 / (x0 - x3);
        UHPoint::new(Complex64::new(x1 * t, x2 * t), t)
    }

    /// Deviation from the hyperboloid equation.
    pub fn residual(&self) -> f64 {
        (minkowski_inner(&self.x, &self.x) + 1.0).abs()
    }

    /// `cosh d = −⟨p, q⟩`, evaluated as `2 asinh(‖p − q‖/2)` to keep
    /// precision for nearby points.
    pub fn dist(&self, other: &MinkowskiPoint) -> f64 {
        let d: [f64; 4] = std::array::from_fn(|i| self.x[i] - other.x[i]);
        2.0 * (minkowski_inner(&d, &d).max(0.0).sqrt() / 2.0).asinh()
    }
}

/// Hyperbolic distance in upper half-space.
pub fn dist(p: &UHPoint, q: &UHPoint) -> f64 {
    let s = (p.z - q.z).norm().hypot(p.t - q.t) / (2.0 * p.t.sqrt() * q.t.sqrt());
    2.0 * s.asinh()
}
