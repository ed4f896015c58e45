//! The HNN extension G = ⟨x, y | y x y⁻¹ = x²⟩ realized exactly through its
//! faithful affine action t ↦ 2^k t + q on the dyadic rationals.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::nielsen::{self, NielsenMove, Pair, PairElement};
use crate::words::{self, Letter, Word, WordError};

pub const HNN_ALPHABET: [char; 4] = ['x', 'X', 'y', 'Y'];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HnnError {
    #[error("first component {0} is not elliptic (height {1})")]
    NotElliptic(String, i64),
    #[error("invalid letter {0:?}; expected one of x, X, y, Y")]
    InvalidLetter(char),
}

/// An exact dyadic rational `num / 2^exp` in lowest terms (`exp ≥ 0`, and
/// `num` odd whenever `exp > 0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigInt,
    exp: u64,
}

impl Dyadic {
    pub fn zero() -> Dyadic {
        Dyadic { num: BigInt::zero(), exp: 0 }
    }

    pub fn from_int(n: i64) -> Dyadic {
        Dyadic { num: BigInt::from(n), exp: 0 }
    }

    /// `num / 2^exp`, normalized.
    pub fn new(num: BigInt, exp: i64) -> Dyadic {
        if exp < 0 {
            return Dyadic { num: num << (-exp) as usize, exp: 0 };
        }
        let mut d = Dyadic { num, exp: exp as u64 };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.num.trailing_zeros().unwrap_or(0).min(self.exp);
        self.num >>= tz as usize;
        self.exp -= tz;
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn exponent(&self) -> u64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Multiplication by `2^k`.
    pub fn shl(&self, k: i64) -> Dyadic {
        Dyadic::new(self.num.clone(), self.exp as i64 - k)
    }

    pub fn to_f64(&self) -> f64 {
        self.num.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-(self.exp as i32))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exp.max(rhs.exp);
        let a = &self.num << (e - self.exp) as usize;
        let b = &rhs.num << (e - rhs.exp) as usize;
        Dyadic::new(a + b, e as i64)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;

    fn neg(self) -> Dyadic {
        Dyadic { num: -&self.num, exp: self.exp }
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;

    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            let den = BigInt::one() << self.exp as usize;
            write!(f, "{}/{}", self.num, den)
        }
    }
}

impl Serialize for Dyadic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The affine map `t ↦ 2^k t + q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AffineElem {
    pub k: i64,
    pub q: Dyadic,
}

impl AffineElem {
    pub fn identity() -> AffineElem {
        AffineElem { k: 0, q: Dyadic::zero() }
    }

    pub fn x() -> AffineElem {
        AffineElem { k: 0, q: Dyadic::from_int(1) }
    }

    pub fn y() -> AffineElem {
        AffineElem { k: 1, q: Dyadic::zero() }
    }

    pub fn new(k: i64, q: Dyadic) -> AffineElem {
        AffineElem { k, q }
    }

    pub fn apply(&self, t: &Dyadic) -> Dyadic {
        &t.shl(self.k) + &self.q
    }
}

impl PairElement for AffineElem {
    fn compose(&self, rhs: &Self) -> Self {
        AffineElem { k: self.k + rhs.k, q: &rhs.q.shl(self.k) + &self.q }
    }

    fn inverse(&self) -> Self {
        AffineElem { k: -self.k, q: -&self.q.shl(-self.k) }
    }
}

impl fmt::Display for AffineElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.k, self.q)
    }
}

/// A freely reduced word in x, y. Group relations enter only through
/// [`eval_affine`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HnnWord(pub Word);

impl HnnWord {
    pub fn x() -> HnnWord {
        HnnWord(Word::letter(Letter::A))
    }

    pub fn y() -> HnnWord {
        HnnWord(Word::letter(Letter::B))
    }

    pub fn identity() -> HnnWord {
        HnnWord(Word::identity())
    }

    pub fn mul(&self, rhs: &HnnWord) -> HnnWord {
        HnnWord(self.0.mul(&rhs.0))
    }

    pub fn inverse(&self) -> HnnWord {
        HnnWord(self.0.inverse())
    }

    pub fn pow(&self, n: i64) -> HnnWord {
        HnnWord(self.0.pow(n))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for HnnWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.format_in(HNN_ALPHABET))
    }
}

impl FromStr for HnnWord {
    type Err = HnnError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Word::parse_in(s, HNN_ALPHABET).map(HnnWord).map_err(|e| match e {
            WordError::InvalidLetter(c) => HnnError::InvalidLetter(c),
            _ => unreachable!("parsing only fails on letters"),
        })
    }
}

impl Serialize for HnnWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub fn eval_affine(w: &HnnWord) -> AffineElem {
    let x = AffineElem::x();
    let y = AffineElem::y();
    let (xi, yi) = (x.inverse(), y.inverse());
    w.0.letters().iter().fold(AffineElem::identity(), |acc, l| {
        let g = match l {
            Letter::A => &x,
            Letter::AInv => &xi,
            Letter::B => &y,
            Letter::BInv => &yi,
        };
        acc.compose(g)
    })
}

/// The height homomorphism G → ℤ killing x.
pub fn pi_height(e: &AffineElem) -> i64 {
    e.k
}

/// Conjugate into the vertex group ⟨x⟩. In this group that is exactly the
/// kernel of the height.
pub fn is_elliptic(e: &AffineElem) -> bool {
    e.k == 0
}

/// Checks `x' = g x^ε g⁻¹` and `y' = g y^η x^k g⁻¹` in G.
pub fn criterion_check(
    x_new: &HnnWord,
    y_new: &HnnWord,
    g: &HnnWord,
    k: i64,
    eps: i8,
    eta: i8,
) -> bool {
    criterion_check_for(
        &Pair::new(HnnWord::x(), HnnWord::y()),
        &Pair::new(x_new.clone(), y_new.clone()),
        g,
        k,
        eps,
        eta,
    )
}

/// The same check with an arbitrary base pair in place of (x, y).
pub fn criterion_check_for(
    base: &Pair<HnnWord>,
    target: &Pair<HnnWord>,
    g: &HnnWord,
    k: i64,
    eps: i8,
    eta: i8,
) -> bool {
    let (x_img, y_img) = criterion_images(base, g, k, eps, eta);
    eval_affine(&target.first) == x_img && eval_affine(&target.second) == y_img
}

fn criterion_images(
    base: &Pair<HnnWord>,
    g: &HnnWord,
    k: i64,
    eps: i8,
    eta: i8,
) -> (AffineElem, AffineElem) {
    let ge = eval_affine(g);
    let gi = ge.inverse();
    let x = eval_affine(&base.first);
    let y = eval_affine(&base.second);
    let x_img = ge.compose(&x.power(eps as i64)).compose(&gi);
    let y_img = ge.compose(&y.power(eta as i64)).compose(&x.power(k)).compose(&gi);
    (x_img, y_img)
}

/// Parameters `(g, k, ε, η)` satisfying the criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HnnWitness {
    pub g: HnnWord,
    pub k: i64,
    pub eps: i8,
    pub eta: i8,
}

impl HnnWitness {
    /// The pair `(g x^ε g⁻¹, g y^η x^k g⁻¹)` built from a base pair.
    pub fn image_of(&self, base: &Pair<HnnWord>) -> Pair<HnnWord> {
        let gi = self.g.inverse();
        let x = self.g.mul(&base.first.pow(self.eps as i64)).mul(&gi);
        let y = self
            .g
            .mul(&base.second.pow(self.eta as i64))
            .mul(&base.first.pow(self.k))
            .mul(&gi);
        Pair::new(x, y)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum HnnVerdict {
    Equivalent(HnnWitness),
    /// Heights of the second components differ in absolute value, which no
    /// witness can repair.
    HeightObstruction { height: i64, height_target: i64 },
    NoWitnessInBounds,
}

impl HnnVerdict {
    pub fn is_conclusive(&self) -> bool {
        !matches!(self, HnnVerdict::NoWitnessInBounds)
    }
}

/// All reduced HnnWords of length ≤ `radius`, shortest first, then
/// lexicographic in the order x < X < y < Y.
pub fn conjugator_candidates(radius: usize) -> Vec<HnnWord> {
    words::words_up_to(radius).into_iter().map(HnnWord).collect()
}

/// Bounded search for a witness of Nielsen equivalence between `p1` and `p2`.
pub fn decide_equivalent(
    p1: &Pair<HnnWord>,
    p2: &Pair<HnnWord>,
    conj_radius: usize,
    k_bound: i64,
) -> Result<HnnVerdict, HnnError> {
    for pw in [&p1.first, &p2.first] {
        let h = pi_height(&eval_affine(pw));
        if h != 0 {
            return Err(HnnError::NotElliptic(pw.to_string(), h));
        }
    }
    let height = pi_height(&eval_affine(&p1.second));
    let height_target = pi_height(&eval_affine(&p2.second));
    if height.abs() != height_target.abs() {
        return Ok(HnnVerdict::HeightObstruction { height, height_target });
    }
    let tx = eval_affine(&p2.first);
    let ty = eval_affine(&p2.second);
    let ks: Vec<i64> = std::iter::once(0)
        .chain((1..=k_bound).flat_map(|k| [k, -k]))
        .collect();
    let found = conjugator_candidates(conj_radius).into_par_iter().find_map_first(|g| {
        for eps in [1i8, -1] {
            for eta in [1i8, -1] {
                for &k in &ks {
                    let (xi, yi) = criterion_images(p1, &g, k, eps, eta);
                    if xi == tx && yi == ty {
                        return Some(HnnWitness { g: g.clone(), k, eps, eta });
                    }
                }
            }
        }
        None
    });
    Ok(found.map_or(HnnVerdict::NoWitnessInBounds, HnnVerdict::Equivalent))
}

/// Searches for an explicit Nielsen path of extended moves between the
/// exact images of two pairs; the result expands to elementary moves.
pub fn nielsen_path(
    from: &Pair<HnnWord>,
    to: &Pair<HnnWord>,
    radius: usize,
) -> Option<Vec<NielsenMove>> {
    let a = from.map(eval_affine);
    let b = to.map(eval_affine);
    nielsen::bidirectional_search(&a, &b, radius, &NielsenMove::extended(), 2_000_000)
}
