use num_complex::Complex64;
use serde::Serialize;

use super::{FilledRep, HolonomyError, TwoBridgeKnot};
use crate::h3::{BoundaryPoint, HypIsometry};
use crate::words::Word;

pub const DEFAULT_T0: f64 = 10.0;

const NORMALIZATION_TOL: f64 = 1e-8;

/// A horoball `{t ≥ t0}` at ∞ together with the cusp parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CuspData {
    pub t0: f64,
    pub tau0: Complex64,
}

impl CuspData {
    pub fn new(t0: f64, tau0: Complex64) -> CuspData {
        assert!(t0 > 0.0, "horoball height must be positive");
        assert!(tau0.im != 0.0, "cusp parameter must be nonreal");
        CuspData { t0, tau0 }
    }
}

/// `W(z) = e^u z + τ(e^u − 1)/(e^v − 1)`.
pub fn w_closed_form(u: Complex64, v: Complex64, tau: Complex64) -> HypIsometry {
    HypIsometry::affine(u.exp(), tau * (u.exp() - 1.0) / (v.exp() - 1.0))
}

/// `V^k(z) = e^{kv} z + (e^{kv} − 1)/(e^v − 1)·τ`.
pub fn v_power_closed_form(v: Complex64, tau: Complex64, k: i64) -> HypIsometry {
    let ekv = (v * k as f64).exp();
    HypIsometry::affine(ekv, (ekv - 1.0) / (v.exp() - 1.0) * tau)
}

/// Meridian and longitude images conjugated into closed form, and the
/// translation `A_n` used in the last step.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Peripheral {
    pub w: HypIsometry,
    pub v: HypIsometry,
    /// `A_n(z) = z + τ/(1 − e^v) − 1/(1 − e^u)`.
    pub a_n: HypIsometry,
    /// Full conjugator `A_n ∘ (z ↦ z/s)`.
    pub conjugator: HypIsometry,
    pub residual: f64,
}

impl Peripheral {
    /// Translation part of `A_n`.
    pub fn a_n_shift(&self) -> Complex64 {
        self.a_n.b / self.a_n.d
    }
}

fn rel_dist(x: &HypIsometry, y: &HypIsometry) -> f64 {
    x.dist_psl(y) / y.max_abs_entry().max(1.0)
}

pub fn normalize_peripheral(fr: &FilledRep, knot: &TwoBridgeKnot) -> Result<Peripheral, HolonomyError> {
    let one = Complex64::new(1.0, 0.0);
    let (u, v, tau) = (fr.u, fr.v, fr.tau);
    let scale = HypIsometry::affine(1.0 / fr.s, Complex64::new(0.0, 0.0));
    let fixed = tau / (one - v.exp());
    let a_n = HypIsometry::translation(fixed - one / (one - u.exp()));
    let conjugator = a_n * scale;
    let w = fr.eval(&Word::a()).conjugate_by(&conjugator);
    let l = fr.eval(&knot.longitude).conjugate_by(&conjugator);
    let mut residual = rel_dist(&w, &w_closed_form(u, v, tau)).max(rel_dist(&l, &v_power_closed_form(v, tau, 1)));
    // V fixes ∞ and τ/(1 − e^v)
    if let BoundaryPoint::Finite(z) = l.apply_boundary(BoundaryPoint::Infinity) {
        residual = residual.max(1.0 / z.norm());
    }
    if let BoundaryPoint::Finite(z) = l.apply_boundary(BoundaryPoint::Finite(fixed)) {
        residual = residual.max((z - fixed).norm() / fixed.norm().max(1.0));
    }
    if !(residual <= NORMALIZATION_TOL) {
        return Err(HolonomyError::NormalizationFailed(residual));
    }
    Ok(Peripheral { w, v: l, a_n, conjugator, residual })
}
