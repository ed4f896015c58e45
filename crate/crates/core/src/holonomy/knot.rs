use num_integer::Integer;
use serde::Serialize;

use super::rep::{parabolic_matrices, riley_polynomial};
use super::{eval_word, HolonomyError};
use crate::words::{Letter, Word};

/// Tolerance for the construction-time commuting check.
const LONGITUDE_TOL: f64 = 1e-8;

/// A 2-bridge knot `p/q` with group `⟨a, b | a·w = w·b⟩`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwoBridgeKnot {
    pub p: i64,
    pub q: i64,
    /// The word `w` of the relation.
    pub w: Word,
    /// `a·w·b⁻¹·w⁻¹`.
    pub relator: Word,
    pub longitude: Word,
    /// Exponent sum of `w`.
    pub e: i64,
}

impl TwoBridgeKnot {
    /// The conjugator `g = w⁻¹` with `b = g·a·g⁻¹`.
    pub fn conjugator(&self) -> Word {
        self.w.inverse()
    }

    pub fn name(&self) -> String {
        format!("{}/{}", self.p, self.q)
    }
}

fn schubert_word(p: i64, q: i64) -> Word {
    let letters: Vec<Letter> = (1..p)
        .map(|i| {
            let sign = if Integer::div_floor(&(i * q), &p) % 2 == 0 { 1 } else { -1 };
            let generator = if i % 2 == 1 { 1 } else { 0 };
            Letter::from_parts(generator, sign)
        })
        .collect();
    Word::from_letters(&letters)
}

pub fn two_bridge_presentation(p: i64, q: i64) -> Result<TwoBridgeKnot, HolonomyError> {
    if p <= 0 || p % 2 == 0 {
        return Err(HolonomyError::InvalidNormalForm(format!("p = {p} must be odd and positive")));
    }
    if q <= 0 || q >= p {
        return Err(HolonomyError::InvalidNormalForm(format!("q = {q} must lie in (0, {p})")));
    }
    if p.gcd(&q) != 1 {
        return Err(HolonomyError::InvalidNormalForm(format!("gcd({p}, {q}) ≠ 1")));
    }
    let w = schubert_word(p, q);
    let e: i64 = w.letters().iter().map(|l| l.sign()).sum();
    let relator = Word::a().mul(&w).mul(&Word::b().inverse()).mul(&w.inverse());
    let longitude = w.mul(&w.reversed()).mul(&Word::a().pow(-2 * e));
    let knot = TwoBridgeKnot { p, q, w, relator, longitude, e };
    knot.check_invariants()?;
    Ok(knot)
}

impl TwoBridgeKnot {
    /// Null-homology of the longitude in `H₁ = ℤ`, and commuting with the
    /// meridian at every root of the Riley polynomial.
    fn check_invariants(&self) -> Result<(), HolonomyError> {
        let ab = self.longitude.abelianize();
        if ab.na + ab.nb != 0 {
            return Err(HolonomyError::InvalidNormalForm(format!(
                "longitude {} is not null-homologous",
                self.longitude
            )));
        }
        for c in riley_polynomial(self).roots() {
            let (ma, mb) = parabolic_matrices(c);
            let l = eval_word(&self.longitude, &ma, &mb);
            let comm = ma * l * ma.inverse() * l.inverse();
            let scale = l.max_abs_entry().powi(2).max(1.0);
            if comm.identity_residual() > LONGITUDE_TOL * scale {
                return Err(HolonomyError::InvalidNormalForm(format!(
                    "longitude does not commute with a at c = {c}"
                )));
            }
        }
        Ok(())
    }
}
