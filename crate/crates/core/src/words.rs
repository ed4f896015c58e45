//! Exact arithmetic in the free group F(a, b).
//!
//! Words are stored freely reduced. The textual encoding is `a`, `A`
//! (= a⁻¹), `b`, `B`, with `1` for the empty word.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::nielsen::{self, NielsenMove, Pair, PairElement, Slot};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("invalid letter {0:?}; expected one of a, A, b, B")]
    InvalidLetter(char),
    #[error("abelian image ({na}, {nb}) is not primitive: gcd is not 1")]
    NotCoprime { na: i64, nb: i64 },
}

/// A generator or inverse generator. The derived order is the global
/// letter order a < a⁻¹ < b < b⁻¹.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    A,
    AInv,
    B,
    BInv,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::A, Letter::AInv, Letter::B, Letter::BInv];

    pub fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::AInv,
            Letter::AInv => Letter::A,
            Letter::B => Letter::BInv,
            Letter::BInv => Letter::B,
        }
    }

    /// 0 for a, 1 for b.
    pub fn generator(self) -> usize {
        match self {
            Letter::A | Letter::AInv => 0,
            Letter::B | Letter::BInv => 1,
        }
    }

    pub fn sign(self) -> i64 {
        match self {
            Letter::A | Letter::B => 1,
            Letter::AInv | Letter::BInv => -1,
        }
    }

    pub fn from_parts(generator: usize, sign: i64) -> Letter {
        match (generator, sign >= 0) {
            (0, true) => Letter::A,
            (0, false) => Letter::AInv,
            (_, true) => Letter::B,
            (_, false) => Letter::BInv,
        }
    }

    /// Character in an alphabet given as `[g0, g0⁻¹, g1, g1⁻¹]`.
    pub fn to_char_in(self, alphabet: [char; 4]) -> char {
        alphabet[self as usize]
    }

    pub fn from_char_in(c: char, alphabet: [char; 4]) -> Option<Letter> {
        alphabet.iter().position(|&x| x == c).map(|i| Letter::ALL[i])
    }
}

pub const FREE_ALPHABET: [char; 4] = ['a', 'A', 'b', 'B'];

/// A freely reduced word in F(a, b).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

/// Exponent sums of a and b.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianImage {
    pub na: i64,
    pub nb: i64,
}

impl AbelianImage {
    pub fn new(na: i64, nb: i64) -> Self {
        AbelianImage { na, nb }
    }
}

/// Free reduction of an arbitrary letter sequence.
pub fn reduce(raw: &[Letter]) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(raw.len());
    for &l in raw {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word { letters: out }
}

impl Word {
    pub fn identity() -> Word {
        Word::default()
    }

    pub fn letter(l: Letter) -> Word {
        Word { letters: vec![l] }
    }

    pub fn a() -> Word {
        Word::letter(Letter::A)
    }

    pub fn b() -> Word {
        Word::letter(Letter::B)
    }

    pub fn from_letters(raw: &[Letter]) -> Word {
        reduce(raw)
    }

    pub fn parse_in(s: &str, alphabet: [char; 4]) -> Result<Word, WordError> {
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(Word::identity());
        }
        let raw = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '*' && *c != '.')
            .map(|c| Letter::from_char_in(c, alphabet).ok_or(WordError::InvalidLetter(c)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(reduce(&raw))
    }

    pub fn format_in(&self, alphabet: [char; 4]) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        self.letters.iter().map(|l| l.to_char_in(alphabet)).collect()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn mul(&self, rhs: &Word) -> Word {
        let mut raw = self.letters.clone();
        raw.extend_from_slice(&rhs.letters);
        reduce(&raw)
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    pub fn pow(&self, n: i64) -> Word {
        PairElement::power(self, n)
    }

    /// The letters in reverse order (not the inverse).
    pub fn reversed(&self) -> Word {
        let raw: Vec<Letter> = self.letters.iter().rev().copied().collect();
        reduce(&raw)
    }

    pub fn conjugate_by(&self, g: &Word) -> Word {
        g.mul(self).mul(&g.inverse())
    }

    pub fn abelianize(&self) -> AbelianImage {
        let mut img = AbelianImage::default();
        for l in &self.letters {
            match l.generator() {
                0 => img.na += l.sign(),
                _ => img.nb += l.sign(),
            }
        }
        img
    }

    /// Splits `w = c · core · c⁻¹` with `core` cyclically reduced; returns
    /// `(c, core)`.
    pub fn cyclic_reduction(&self) -> (Word, Word) {
        let l = &self.letters;
        let mut i = 0;
        while i < l.len() / 2 && l[i] == l[l.len() - 1 - i].inverse() {
            i += 1;
        }
        (
            Word { letters: l[..i].to_vec() },
            Word { letters: l[i..l.len() - i].to_vec() },
        )
    }

    pub fn cyclically_reduced(&self) -> Word {
        self.cyclic_reduction().1
    }

    /// The lexicographically least cyclic rotation (Booth's algorithm).
    fn least_rotation(&self) -> Vec<Letter> {
        let w = &self.letters;
        let n = w.len();
        if n == 0 {
            return Vec::new();
        }
        let at = |i: usize| w[i % n];
        let mut fail = vec![usize::MAX; 2 * n];
        let mut k = 0usize;
        for j in 1..2 * n {
            let c = at(j);
            let mut i = fail[j - k - 1];
            while i != usize::MAX && c != at(k + i + 1) {
                if c < at(k + i + 1) {
                    k = j - i - 1;
                }
                i = fail[i];
            }
            if i == usize::MAX && c != at(k) {
                if c < at(k) {
                    k = j;
                }
                fail[j - k] = usize::MAX;
            } else {
                fail[j - k] = if i == usize::MAX { 0 } else { i + 1 };
            }
        }
        (0..n).map(|i| at(k + i)).collect()
    }

    /// True iff every letter is `a^ε` or `b^η`.
    pub fn is_positive_in(&self, eps: i64, eta: i64) -> bool {
        self.letters.iter().all(|l| match l.generator() {
            0 => l.sign() == eps,
            _ => l.sign() == eta,
        })
    }

    /// Substitutes a ↦ a^ε and b ↦ b^η.
    pub fn substitute_signs(&self, eps: i64, eta: i64) -> Word {
        let raw: Vec<Letter> = self
            .letters
            .iter()
            .map(|l| {
                let s = if l.generator() == 0 { eps } else { eta };
                Letter::from_parts(l.generator(), l.sign() * s)
            })
            .collect();
        reduce(&raw)
    }
}

impl PairElement for Word {
    fn compose(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }

    fn inverse(&self) -> Self {
        Word::inverse(self)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_in(FREE_ALPHABET))
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Word::parse_in(s, FREE_ALPHABET)
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub type PairF2 = Pair<Word>;

/// Parses `"x,y"` (optionally parenthesized) into a pair.
pub fn parse_pair(s: &str) -> Result<PairF2, WordError> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    let (x, y) = s.split_once(',').unwrap_or((s, "1"));
    Ok(Pair::new(x.parse()?, y.parse()?))
}

pub fn apply_move(pair: &PairF2, mv: NielsenMove) -> PairF2 {
    nielsen::apply_move(pair, mv)
}

pub fn apply_moves(pair: &PairF2, moves: &[NielsenMove]) -> PairF2 {
    nielsen::apply_moves(pair, moves)
}

/// `[x, y] = x y x⁻¹ y⁻¹`.
pub fn commutator(x: &Word, y: &Word) -> Word {
    x.mul(y).mul(&x.inverse()).mul(&y.inverse())
}

/// Lexicographically least rotation of `w` or of `w⁻¹`, after cyclic
/// reduction. Two words get the same value iff they are conjugate up to
/// inversion.
pub fn cyclic_canonical(w: &Word) -> Word {
    let core = w.cyclically_reduced();
    let inv = core.inverse();
    Word { letters: core.least_rotation().min(inv.least_rotation()) }
}

pub fn commutator_class(pair: &PairF2) -> Word {
    cyclic_canonical(&commutator(&pair.first, &pair.second))
}

/// Conjugacy in F(a, b): equality of cyclic words.
pub fn are_conjugate(u: &Word, v: &Word) -> bool {
    let cu = u.cyclically_reduced();
    let cv = v.cyclically_reduced();
    if cu.len() != cv.len() {
        return false;
    }
    if cu.is_empty() {
        return true;
    }
    let doubled: Vec<Letter> = cu.letters.iter().chain(cu.letters.iter()).copied().collect();
    doubled.windows(cv.len()).any(|win| win == cv.letters.as_slice())
}

pub fn abelianize(w: &Word) -> AbelianImage {
    w.abelianize()
}

/// A positive word in `a^ε, b^η` lifting a primitive homology class.
///
/// The nonnegative vector `(|na|, |nb|)` is completed to a unimodular pair,
/// which is reduced to the standard basis by subtractive steps; the inverse
/// steps replayed on `(a, b)` build the lift in the first slot. Returns
/// `(ε, η, word)`.
pub fn canonical_primitive_lift(img: AbelianImage) -> Result<(i8, i8, Word), WordError> {
    let p = img.na.abs();
    let q = img.nb.abs();
    if p.gcd(&q) != 1 {
        return Err(WordError::NotCoprime { na: img.na, nb: img.nb });
    }
    let eps: i8 = if img.na < 0 { -1 } else { 1 };
    let eta: i8 = if img.nb < 0 { -1 } else { 1 };

    // p·s − q·r = 1 with r, s ≥ 0.
    let (r, s) = if q == 0 {
        (0, 1)
    } else if p == 0 {
        (1, 0)
    } else {
        let eg = p.extended_gcd(&q);
        let (x, y) = (eg.x, eg.y);
        // general solution s = x + kq, r = −y + kp
        let k = [Integer::div_ceil(&-x, &q), Integer::div_ceil(&y, &p)].into_iter().max().unwrap_or(0);
        (-y + k * p, x + k * q)
    };

    let mut v1 = (p, q);
    let mut v2 = (r, s);
    let mut moves = Vec::new();
    loop {
        match (v1, v2) {
            ((1, 0), (0, 1)) => break,
            ((0, 1), (1, 0)) => {
                moves.push(NielsenMove::Swap);
                break;
            }
            _ => {}
        }
        let dominates = |u: (i64, i64), v: (i64, i64)| u.0 >= v.0 && u.1 >= v.1;
        let first = if dominates(v1, v2) && dominates(v2, v1) {
            v1.0 + v1.1 >= v2.0 + v2.1
        } else {
            dominates(v1, v2)
        };
        if first {
            v1 = (v1.0 - v2.0, v1.1 - v2.1);
            moves.push(NielsenMove::RightMultiply { target: Slot::First, eps: -1 });
        } else {
            v2 = (v2.0 - v1.0, v2.1 - v1.1);
            moves.push(NielsenMove::RightMultiply { target: Slot::Second, eps: -1 });
        }
    }
    let replay: Vec<NielsenMove> = moves.iter().rev().map(|m| m.inverse()).collect();
    let lifted = apply_moves(&Pair::new(Word::a(), Word::b()), &replay);
    let word = lifted.first.substitute_signs(eps as i64, eta as i64);
    Ok((eps, eta, word))
}

/// True iff `w` belongs to some basis of F(a, b).
pub fn is_primitive(w: &Word) -> bool {
    match canonical_primitive_lift(w.abelianize()) {
        Ok((_, _, lift)) => are_conjugate(w, &lift),
        Err(_) => false,
    }
}

fn is_standard_basis(pair: &PairF2) -> bool {
    pair.first.len() == 1
        && pair.second.len() == 1
        && pair.first.letters[0].generator() != pair.second.letters[0].generator()
}

fn total_len(pair: &PairF2) -> usize {
    pair.first.len() + pair.second.len()
}

/// Neighbors used by the reduction: one-sided multiplications of either
/// entry by the other, and simultaneous conjugation by a single letter.
fn reduction_neighbors(pair: &PairF2) -> Vec<PairF2> {
    let mut out = Vec::with_capacity(12);
    for target in [Slot::First, Slot::Second] {
        for eps in [1, -1] {
            out.push(apply_move(pair, NielsenMove::RightMultiply { target, eps }));
            out.push(apply_move(pair, NielsenMove::LeftMultiply { target, eps }));
        }
    }
    for l in Letter::ALL {
        let g = Word::letter(l);
        out.push(Pair::new(pair.first.conjugate_by(&g), pair.second.conjugate_by(&g)));
    }
    out
}

const PLATEAU_LIMIT: usize = 20_000;

/// True iff the pair is Nielsen equivalent to (a, b).
///
/// Length-reducing moves are applied greedily; when none exists the search
/// explores the set of equal-length neighbors for a state that admits one.
pub fn is_basis(pair: &PairF2) -> bool {
    let (x, y) = (pair.first.abelianize(), pair.second.abelianize());
    let det = x.na * y.nb - x.nb * y.na;
    if det.abs() != 1 {
        return false;
    }
    let mut cur = pair.clone();
    loop {
        if is_standard_basis(&cur) {
            return true;
        }
        let len = total_len(&cur);
        match descend(&cur, len) {
            Some(next) => cur = next,
            None => return false,
        }
    }
}

fn descend(start: &PairF2, len: usize) -> Option<PairF2> {
    let mut seen: HashSet<PairF2> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start.clone());
    while let Some(state) = queue.pop_front() {
        for nb in reduction_neighbors(&state) {
            let l = total_len(&nb);
            if l < len {
                return Some(nb);
            }
            if l == len && seen.len() < PLATEAU_LIMIT && seen.insert(nb.clone()) {
                queue.push_back(nb);
            }
        }
    }
    None
}

/// Breadth-first search for at most `radius` elementary moves taking `p1`
/// to `p2`. The witness is a shortest one and deterministic.
pub fn ball_search(p1: &PairF2, p2: &PairF2, radius: usize) -> Option<Vec<NielsenMove>> {
    nielsen::bidirectional_search(p1, p2, radius, &NielsenMove::elementary(), usize::MAX)
}

/// Every reduced word of length exactly `len`, in lexicographic order.
pub fn words_of_length(len: usize) -> Vec<Word> {
    let mut out = vec![Vec::<Letter>::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * 3);
        for w in &out {
            for l in Letter::ALL {
                if w.last() != Some(&l.inverse()) {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        out = next;
    }
    out.into_iter().map(|letters| Word { letters }).collect()
}

/// Every reduced word of length at most `max_len`.
pub fn words_up_to(max_len: usize) -> Vec<Word> {
    (0..=max_len).flat_map(words_of_length).collect()
}
