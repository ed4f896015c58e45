use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{eval_word, HolonomyError, TwoBridgeKnot};
use crate::h3::HypIsometry;
use crate::poly::{poly_gcd, IntPoly, PolyMat2};
use crate::words::{Letter, Word};

const ROOT_POLISH_ITERS: usize = 8;
const RELATOR_TOL: f64 = 1e-10;
const NONREAL_TOL: f64 = 1e-9;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `a ↦ [[1, 1], [0, 1]]`, `b ↦ [[1, 0], [−c, 1]]`.
pub(crate) fn parabolic_matrices(c: Complex64) -> (HypIsometry, HypIsometry) {
    let (one, zero) = (cx(1.0, 0.0), cx(0.0, 0.0));
    (HypIsometry::new(one, one, zero, one), HypIsometry::new(one, zero, -c, one))
}

/// `a ↦ [[s, 1], [0, 1/s]]`, `b ↦ [[s, 0], [−c, 1/s]]`.
pub(crate) fn filled_matrices(s: Complex64, c: Complex64) -> (HypIsometry, HypIsometry) {
    let zero = cx(0.0, 0.0);
    (
        HypIsometry::new(s, cx(1.0, 0.0), zero, 1.0 / s),
        HypIsometry::new(s, zero, -c, 1.0 / s),
    )
}

fn poly_word(w: &Word) -> PolyMat2 {
    let a = PolyMat2::from_i64([[&[1], &[1]], [&[], &[1]]]);
    let ai = PolyMat2::from_i64([[&[1], &[-1]], [&[], &[1]]]);
    let b = PolyMat2::from_i64([[&[1], &[]], [&[0, -1], &[1]]]);
    let bi = PolyMat2::from_i64([[&[1], &[]], [&[0, 1], &[1]]]);
    w.letters().iter().fold(PolyMat2::identity(), |acc, l| {
        acc.mul(match l {
            Letter::A => &a,
            Letter::AInv => &ai,
            Letter::B => &b,
            Letter::BInv => &bi,
        })
    })
}

/// Defining polynomial of parabolic representations: the gcd of the
/// entries of `ρ(relator) − I` as polynomials in `c`.
pub fn riley_polynomial(knot: &TwoBridgeKnot) -> IntPoly {
    let r = poly_word(&knot.relator).minus_identity();
    r.entries().into_iter().fold(IntPoly::zero(), |g, e| poly_gcd(&g, e))
}

fn polish_root(p: &IntPoly, mut z: Complex64) -> Complex64 {
    let dp = p.derivative();
    for _ in 0..ROOT_POLISH_ITERS {
        let step = p.eval(z) / dp.eval(z);
        if !step.is_finite() || step.norm() == 0.0 {
            break;
        }
        z -= step;
    }
    z
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParabolicRep {
    pub c: Complex64,
    /// Nonreal root; a candidate for the holonomy of the complete structure.
    pub geometric: bool,
    pub relator_residual: f64,
}

impl ParabolicRep {
    pub fn matrices(&self) -> (HypIsometry, HypIsometry) {
        parabolic_matrices(self.c)
    }

    pub fn eval(&self, w: &Word) -> HypIsometry {
        let (a, b) = self.matrices();
        eval_word(w, &a, &b)
    }
}

/// One representation per root of the Riley polynomial, sorted with the
/// geometric candidates first (largest imaginary part first).
pub fn solve_parabolic(knot: &TwoBridgeKnot) -> Result<Vec<ParabolicRep>, HolonomyError> {
    let poly = riley_polynomial(knot);
    let mut reps: Vec<ParabolicRep> = poly
        .roots()
        .into_iter()
        .map(|z| {
            let c = polish_root(&poly, z);
            let (a, b) = parabolic_matrices(c);
            let relator_residual = eval_word(&knot.relator, &a, &b).identity_residual();
            let geometric = c.im.abs() > NONREAL_TOL;
            ParabolicRep { c, geometric, relator_residual }
        })
        .collect();
    reps.sort_by(|x, y| y.c.im.partial_cmp(&x.c.im).unwrap_or(std::cmp::Ordering::Equal));
    if !reps.iter().any(|r| r.geometric && r.relator_residual < RELATOR_TOL) {
        return Err(HolonomyError::NoNonrealRoot);
    }
    Ok(reps)
}

/// The geometric candidate with `Im c > 0`.
pub fn geometric_rep(knot: &TwoBridgeKnot) -> Result<ParabolicRep, HolonomyError> {
    solve_parabolic(knot)?.into_iter().find(|r| r.geometric && r.c.im > 0.0).ok_or(HolonomyError::NoNonrealRoot)
}

/// Translation of the longitude once the meridian is `z ↦ z + 1`.
pub fn cusp_parameter(rep: &ParabolicRep, knot: &TwoBridgeKnot) -> Result<Complex64, HolonomyError> {
    cusp_parameter_of(&rep.eval(&knot.longitude))
}

pub(crate) fn cusp_parameter_of(l: &HypIsometry) -> Result<Complex64, HolonomyError> {
    let sign = if l.a.re >= 0.0 { 1.0 } else { -1.0 };
    let (a, b, c, d) = (l.a * sign, l.b * sign, l.c * sign, l.d * sign);
    let defect = c.norm().max((a - 1.0).norm()).max((d - 1.0).norm());
    if defect > 1e-8 * b.norm().max(1.0) {
        return Err(HolonomyError::LongitudeNotParabolic(defect));
    }
    Ok(b / d)
}

/// Value and partial derivatives in `(s, c)`.
#[derive(Clone, Copy, Debug)]
struct Jet {
    v: Complex64,
    ds: Complex64,
    dc: Complex64,
}

impl Jet {
    fn constant(v: Complex64) -> Jet {
        Jet { v, ds: cx(0.0, 0.0), dc: cx(0.0, 0.0) }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, r: Jet) -> Jet {
        Jet { v: self.v + r.v, ds: self.ds + r.ds, dc: self.dc + r.dc }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, r: Jet) -> Jet {
        Jet { v: self.v - r.v, ds: self.ds - r.ds, dc: self.dc - r.dc }
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet { v: -self.v, ds: -self.ds, dc: -self.dc }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, r: Jet) -> Jet {
        Jet { v: self.v * r.v, ds: self.ds * r.v + self.v * r.ds, dc: self.dc * r.v + self.v * r.dc }
    }
}

type JetMat = [[Jet; 2]; 2];

fn jet_mul(x: &JetMat, y: &JetMat) -> JetMat {
    let e = |i: usize, j: usize| x[i][0] * y[0][j] + x[i][1] * y[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn jet_word(w: &Word, s: Complex64, c: Complex64) -> JetMat {
    let zero = Jet::constant(cx(0.0, 0.0));
    let one = Jet::constant(cx(1.0, 0.0));
    let sj = Jet { v: s, ds: cx(1.0, 0.0), dc: cx(0.0, 0.0) };
    let inv = Jet { v: 1.0 / s, ds: -1.0 / (s * s), dc: cx(0.0, 0.0) };
    let cj = Jet { v: c, ds: cx(0.0, 0.0), dc: cx(1.0, 0.0) };
    let a = [[sj, one], [zero, inv]];
    let ai = [[inv, -one], [zero, sj]];
    let b = [[sj, zero], [-cj, inv]];
    let bi = [[inv, zero], [cj, sj]];
    w.letters().iter().fold([[one, zero], [zero, one]], |acc, l| {
        jet_mul(
            &acc,
            match l {
                Letter::A => &a,
                Letter::AInv => &ai,
                Letter::B => &b,
                Letter::BInv => &bi,
            },
        )
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FilledRep {
    pub knot: String,
    pub n: i64,
    /// Meridian eigenvalue.
    pub s: Complex64,
    /// Continued Riley parameter.
    pub c: Complex64,
    /// Complex length of the meridian, `2 log s` continued along the path.
    pub u: Complex64,
    /// Complex length of the longitude, continued along the path.
    pub v: Complex64,
    pub tau: Complex64,
    pub relator_residual: f64,
    pub filling_residual: f64,
    pub continuation_steps: usize,
}

impl FilledRep {
    pub fn matrices(&self) -> (HypIsometry, HypIsometry) {
        filled_matrices(self.s, self.c)
    }

    pub fn eval(&self, w: &Word) -> HypIsometry {
        let (a, b) = self.matrices();
        eval_word(w, &a, &b)
    }
}

/// State carried along the continuation.
#[derive(Clone, Copy, Debug)]
struct Track {
    s: Complex64,
    c: Complex64,
    u: Complex64,
    v: Complex64,
    /// Leading entry of the longitude matrix, squared.
    l2: Complex64,
}

const NEWTON_TOL: f64 = 1e-14;
const NEWTON_MAX: usize = 40;
const MIN_STEP: f64 = 1e-7;

/// Upper-right entry of `ρ(a)ρ(w) − ρ(w)ρ(b)`: `w₂₂ + (s − 1/s)·w₁₂`.
/// The other entries vanish with it.
fn riley_condition(w: &JetMat, s: Complex64) -> Jet {
    let gap = Jet { v: s - 1.0 / s, ds: 1.0 + 1.0 / (s * s), dc: cx(0.0, 0.0) };
    w[1][1] + gap * w[0][1]
}

/// Newton in `c` on the Riley condition at fixed `s`.
fn correct_c(knot: &TwoBridgeKnot, s: Complex64, mut c: Complex64) -> Option<Complex64> {
    for _ in 0..NEWTON_MAX {
        let f = riley_condition(&jet_word(&knot.w, s, c), s);
        if f.dc.norm() == 0.0 {
            return None;
        }
        let step = f.v / f.dc;
        c -= step;
        if !c.is_finite() {
            return None;
        }
        if step.norm() <= NEWTON_TOL * c.norm().max(1.0) {
            return Some(c);
        }
    }
    None
}

fn longitude_l2(knot: &TwoBridgeKnot, s: Complex64, c: Complex64) -> Complex64 {
    let (a, b) = filled_matrices(s, c);
    let l = eval_word(&knot.longitude, &a, &b);
    l.a * l.a
}

fn advance(prev: &Track, s: Complex64, c: Complex64, l2: Complex64) -> Track {
    Track {
        s,
        c,
        u: prev.u + 2.0 * (s / prev.s).ln(),
        v: prev.v + (l2 / prev.l2).ln(),
        l2,
    }
}

/// Solve `u + n·v = 2πi` together with the relation, by continuation in
/// `s` from the parabolic seed and a final joint Newton step.
pub fn solve_filling(knot: &TwoBridgeKnot, n: i64, seed: &ParabolicRep) -> Result<FilledRep, HolonomyError> {
    let tau0 = cusp_parameter(seed, knot)?;
    let two_pi_i = cx(0.0, 2.0 * PI);
    let target_u = two_pi_i / (1.0 + tau0 * n as f64);
    let start = Track { s: cx(1.0, 0.0), c: seed.c, u: cx(0.0, 0.0), v: cx(0.0, 0.0), l2: longitude_l2(knot, cx(1.0, 0.0), seed.c) };

    // the Riley root c(s) along s = exp(λ·u*/2), λ ∈ [0, 1]
    let (mut lambda, mut h) = (0.0f64, 1.0 / 16.0);
    let mut cur = start;
    let mut prev_c = seed.c;
    let mut steps = 0usize;
    while lambda < 1.0 {
        let next = (lambda + h).min(1.0);
        let s = (target_u * (next / 2.0)).exp();
        let predicted = if steps == 0 { cur.c } else { cur.c + (cur.c - prev_c) * ((next - lambda) / h.max(1e-300)) };
        let ok = correct_c(knot, s, predicted).filter(|c| {
            // a jump far beyond the predictor means the path switched roots
            (c - predicted).norm() <= 0.1 * (1.0 + cur.c.norm())
        });
        match ok {
            Some(c) => {
                prev_c = cur.c;
                let l2 = longitude_l2(knot, s, c);
                cur = advance(&cur, s, c, l2);
                h = (next - lambda).min(h * 2.0).max(h);
                lambda = next;
                steps += 1;
            }
            None => {
                h /= 2.0;
                if h < MIN_STEP {
                    return Err(HolonomyError::ContinuationLost(s));
                }
            }
        }
    }

    // joint Newton on (s, c)
    let nf = n as f64;
    let mut last_res = f64::INFINITY;
    for _ in 0..NEWTON_MAX {
        let w = jet_word(&knot.w, cur.s, cur.c);
        let l = jet_word(&knot.longitude, cur.s, cur.c);
        let f1 = riley_condition(&w, cur.s);
        let l00 = l[0][0];
        // v = v_cur + 2 log(L00/L00_cur), u = u_cur + 2 log(s/s_cur)
        let f2 = cur.u + nf * cur.v - two_pi_i;
        let g_s = 2.0 / cur.s + nf * 2.0 * l00.ds / l00.v;
        let g_c = nf * 2.0 * l00.dc / l00.v;
        let det = f1.ds * g_c - f1.dc * g_s;
        if det.norm() == 0.0 || !det.is_finite() {
            return Err(HolonomyError::NewtonDiverged(last_res));
        }
        let ds = (f1.v * g_c - f1.dc * f2) / det;
        let dc = (f1.ds * f2 - f1.v * g_s) / det;
        let (s, c) = (cur.s - ds, cur.c - dc);
        cur = advance(&cur, s, c, longitude_l2(knot, s, c));
        last_res = (cur.u + nf * cur.v - two_pi_i).norm();
        if ds.norm() + dc.norm() < 1e-15 * (1.0 + cur.c.norm()) {
            break;
        }
    }
    // polish c on the relation alone, then re-measure
    let c = correct_c(knot, cur.s, cur.c).ok_or(HolonomyError::NewtonDiverged(last_res))?;
    cur = advance(&cur, cur.s, c, longitude_l2(knot, cur.s, c));
    let filling_residual = (cur.u + nf * cur.v - two_pi_i).norm();
    if !filling_residual.is_finite() || filling_residual > 1e-9 {
        return Err(HolonomyError::NewtonDiverged(filling_residual));
    }
    let (a, b) = filled_matrices(cur.s, cur.c);
    let relator_residual = eval_word(&knot.relator, &a, &b).identity_residual();
    Ok(FilledRep {
        knot: knot.name(),
        n,
        s: cur.s,
        c: cur.c,
        u: cur.u,
        v: cur.v,
        tau: cur.v / cur.u,
        relator_residual,
        filling_residual,
        continuation_steps: steps,
    })
}

/// Independent fillings solved in parallel, in the order of `ns`.
pub fn solve_fillings(knot: &TwoBridgeKnot, ns: &[i64], seed: &ParabolicRep) -> Result<Vec<FilledRep>, HolonomyError> {
    ns.par_iter().map(|&n| solve_filling(knot, n, seed)).collect()
}
