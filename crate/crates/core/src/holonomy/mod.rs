//! Holonomy of 2-bridge knot groups and of their (1, n) Dehn fillings.

mod knot;
mod peripheral;
mod tubes;
mod rep;

pub use knot::{two_bridge_presentation, TwoBridgeKnot};
pub use peripheral::{
    normalize_peripheral, v_power_closed_form, w_closed_form, CuspData, Peripheral, DEFAULT_T0,
};
pub use tubes::{
    asymptotics_check, core_axis, prop42_row, prop42_table, tube_radius, tube_separation, AsymptoticsReport,
    AsymptoticsRow, Prop42Row, SeparationReport,
};
pub use rep::{
    cusp_parameter, geometric_rep, riley_polynomial, solve_filling, solve_fillings, solve_parabolic, FilledRep,
    ParabolicRep,
};

use num_complex::Complex64;
use thiserror::Error;

use crate::h3::{H3Error, HypIsometry};
use crate::words::{Letter, Word};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HolonomyError {
    #[error("invalid 2-bridge normal form: {0}")]
    InvalidNormalForm(String),
    #[error("no nonreal root: the knot is not hyperbolic")]
    NoNonrealRoot,
    #[error("longitude is not parabolic fixing ∞ (residual {0:e})")]
    LongitudeNotParabolic(f64),
    #[error("continuation lost the root near s = {0}")]
    ContinuationLost(Complex64),
    #[error("Newton iteration diverged (residual {0:e})")]
    NewtonDiverged(f64),
    #[error("peripheral normalization failed (residual {0:e})")]
    NormalizationFailed(f64),
    #[error(transparent)]
    Geometry(#[from] H3Error),
}

/// Image of a word under `a ↦ ma`, `b ↦ mb`, both of determinant 1.
pub fn eval_word(w: &Word, ma: &HypIsometry, mb: &HypIsometry) -> HypIsometry {
    let (ia, ib) = (ma.inverse(), mb.inverse());
    w.letters().iter().fold(HypIsometry::identity(), |acc, l| {
        acc * match l {
            Letter::A => *ma,
            Letter::AInv => ia,
            Letter::B => *mb,
            Letter::BInv => ib,
        }
    })
}
