//! Nielsen moves on pairs of group elements and bounded searches for
//! Nielsen paths between two pairs.
//!
//! Everything here is generic over [`PairElement`], so the same search runs
//! on free-group words and on exact elements of the HNN group.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

/// A group element that can be multiplied and inverted exactly.
pub trait PairElement: Clone + Eq + Hash {
    fn compose(&self, rhs: &Self) -> Self;
    fn inverse(&self) -> Self;

    fn power(&self, exponent: i64) -> Self
    where
        Self: Sized,
    {
        let base = if exponent < 0 { self.inverse() } else { self.clone() };
        let mut acc = self.compose(&self.inverse());
        for _ in 0..exponent.unsigned_abs() {
            acc = acc.compose(&base);
        }
        acc
    }
}

/// Position inside a pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Slot {
    First,
    Second,
}

impl Slot {
    pub fn other(self) -> Slot {
        match self {
            Slot::First => Slot::Second,
            Slot::Second => Slot::First,
        }
    }

    /// 1-based index, as in `h_i = g_i g_j^ε`.
    pub fn index(self) -> usize {
        match self {
            Slot::First => 1,
            Slot::Second => 2,
        }
    }

    pub fn from_index(i: usize) -> Option<Slot> {
        match i {
            1 => Some(Slot::First),
            2 => Some(Slot::Second),
            _ => None,
        }
    }
}

/// An ordered pair `(first, second)` of group elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pair<T> {
    pub first: T,
    pub second: T,
}

impl<T> Pair<T> {
    pub fn new(first: T, second: T) -> Self {
        Pair { first, second }
    }

    pub fn get(&self, slot: Slot) -> &T {
        match slot {
            Slot::First => &self.first,
            Slot::Second => &self.second,
        }
    }

    fn set(&mut self, slot: Slot, value: T) {
        match slot {
            Slot::First => self.first = value,
            Slot::Second => self.second = value,
        }
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Pair<U> {
        Pair::new(f(&self.first), f(&self.second))
    }
}

impl<T: fmt::Display> fmt::Display for Pair<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.first, self.second)
    }
}

/// Elementary (and a few composite) Nielsen moves on a pair.
///
/// `Swap`, `Invert` and `RightMultiply` are the elementary moves. The other
/// two variants are fixed compositions of elementary moves; [`expand`]
/// rewrites them.
///
/// [`expand`]: NielsenMove::expand
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NielsenMove {
    Swap,
    Invert(Slot),
    /// `g_i ← g_i g_j^ε` with `j` the other slot.
    RightMultiply { target: Slot, eps: i8 },
    /// `g_i ← g_j^ε g_i`.
    LeftMultiply { target: Slot, eps: i8 },
    /// Simultaneous conjugation of both entries by `g_by^ε`.
    Conjugate { by: Slot, eps: i8 },
}

impl NielsenMove {
    /// `RightMultiply(i, j, ε)` with 1-based slot indices. Returns `None` unless `i ≠ j`, both in `{1, 2}` and
    /// `ε ∈ {−1, 1}`.
    pub fn right_multiply(i: usize, j: usize, eps: i8) -> Option<NielsenMove> {
        let target = Slot::from_index(i)?;
        let other = Slot::from_index(j)?;
        if target == other || (eps != 1 && eps != -1) {
            return None;
        }
        Some(NielsenMove::RightMultiply { target, eps })
    }

    /// The seven elementary moves, in the fixed expansion order used by all
    /// searches.
    pub fn elementary() -> Vec<NielsenMove> {
        use NielsenMove::*;
        vec![
            Swap,
            Invert(Slot::First),
            Invert(Slot::Second),
            RightMultiply { target: Slot::First, eps: 1 },
            RightMultiply { target: Slot::First, eps: -1 },
            RightMultiply { target: Slot::Second, eps: 1 },
            RightMultiply { target: Slot::Second, eps: -1 },
        ]
    }

    /// Elementary moves plus left multiplications and simultaneous
    /// conjugations.
    pub fn extended() -> Vec<NielsenMove> {
        use NielsenMove::*;
        let mut moves = Self::elementary();
        for target in [Slot::First, Slot::Second] {
            for eps in [1, -1] {
                moves.push(LeftMultiply { target, eps });
            }
        }
        for by in [Slot::First, Slot::Second] {
            for eps in [1, -1] {
                moves.push(Conjugate { by, eps });
            }
        }
        moves
    }

    pub fn inverse(self) -> NielsenMove {
        use NielsenMove::*;
        match self {
            Swap | Invert(_) => self,
            RightMultiply { target, eps } => RightMultiply { target, eps: -eps },
            LeftMultiply { target, eps } => LeftMultiply { target, eps: -eps },
            Conjugate { by, eps } => Conjugate { by, eps: -eps },
        }
    }

    pub fn is_elementary(self) -> bool {
        matches!(
            self,
            NielsenMove::Swap | NielsenMove::Invert(_) | NielsenMove::RightMultiply { .. }
        )
    }

    /// Rewrites the move as a sequence of elementary moves with the same
    /// effect on every pair.
    pub fn expand(self) -> Vec<NielsenMove> {
        use NielsenMove::*;
        match self {
            Swap | Invert(_) | RightMultiply { .. } => vec![self],
            // x ↦ x⁻¹ ↦ x⁻¹ y^{−ε} ↦ y^ε x
            LeftMultiply { target, eps } => vec![
                Invert(target),
                RightMultiply { target, eps: -eps },
                Invert(target),
            ],
            // y ↦ x^ε y x^{−ε}
            Conjugate { by, eps } => {
                let target = by.other();
                let mut seq = LeftMultiply { target, eps }.expand();
                seq.push(RightMultiply { target, eps: -eps });
                seq
            }
        }
    }
}

impl fmt::Display for NielsenMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use NielsenMove::*;
        match *self {
            Swap => write!(f, "Swap"),
            Invert(s) => write!(f, "Invert({})", s.index()),
            RightMultiply { target, eps } => write!(
                f,
                "RightMultiply({},{},{:+})",
                target.index(),
                target.other().index(),
                eps
            ),
            LeftMultiply { target, eps } => write!(
                f,
                "LeftMultiply({},{},{:+})",
                target.index(),
                target.other().index(),
                eps
            ),
            Conjugate { by, eps } => write!(f, "Conjugate({},{:+})", by.index(), eps),
        }
    }
}

fn signed_power<T: PairElement>(x: &T, eps: i8) -> T {
    if eps < 0 {
        x.inverse()
    } else {
        x.clone()
    }
}

pub fn apply_move<T: PairElement>(pair: &Pair<T>, mv: NielsenMove) -> Pair<T> {
    use NielsenMove::*;
    match mv {
        Swap => Pair::new(pair.second.clone(), pair.first.clone()),
        Invert(slot) => {
            let mut out = pair.clone();
            out.set(slot, pair.get(slot).inverse());
            out
        }
        RightMultiply { target, eps } => {
            let mut out = pair.clone();
            let factor = signed_power(pair.get(target.other()), eps);
            out.set(target, pair.get(target).compose(&factor));
            out
        }
        LeftMultiply { target, eps } => {
            let mut out = pair.clone();
            let factor = signed_power(pair.get(target.other()), eps);
            out.set(target, factor.compose(pair.get(target)));
            out
        }
        Conjugate { by, eps } => {
            let target = by.other();
            let g = signed_power(pair.get(by), eps);
            let mut out = pair.clone();
            out.set(target, g.compose(pair.get(target)).compose(&g.inverse()));
            out
        }
    }
}

pub fn apply_moves<T: PairElement>(pair: &Pair<T>, moves: &[NielsenMove]) -> Pair<T> {
    moves.iter().fold(pair.clone(), |p, &m| apply_move(&p, m))
}

/// Rewrites a move sequence into elementary moves only.
pub fn expand_moves(moves: &[NielsenMove]) -> Vec<NielsenMove> {
    moves.iter().flat_map(|m| m.expand()).collect()
}

struct Side<T> {
    // state -> (parent, move applied to parent)
    seen: HashMap<Pair<T>, Option<(Pair<T>, NielsenMove)>>,
    frontier: Vec<Pair<T>>,
    depth: usize,
}

impl<T: PairElement> Side<T> {
    fn new(root: Pair<T>) -> Self {
        let mut seen = HashMap::new();
        seen.insert(root.clone(), None);
        Side { seen, frontier: vec![root], depth: 0 }
    }

    fn path_to(&self, state: &Pair<T>) -> Vec<NielsenMove> {
        let mut moves = Vec::new();
        let mut cur = state.clone();
        while let Some(Some((parent, mv))) = self.seen.get(&cur) {
            moves.push(*mv);
            cur = parent.clone();
        }
        moves.reverse();
        moves
    }
}

/// Bidirectional breadth-first search for a sequence of at most `radius`
/// moves (drawn from `moves`) turning `from` into `to`.
///
/// Levels are expanded completely and in the fixed order of `moves`, so the
/// returned witness is a shortest one and is the same on every run.
/// `max_states` caps the number of stored states per side.
pub fn bidirectional_search<T: PairElement>(
    from: &Pair<T>,
    to: &Pair<T>,
    radius: usize,
    moves: &[NielsenMove],
    max_states: usize,
) -> Option<Vec<NielsenMove>> {
    if from == to {
        return Some(Vec::new());
    }
    let inverse_moves: Vec<NielsenMove> = moves.iter().map(|m| m.inverse()).collect();
    let mut fwd = Side::new(from.clone());
    let mut bwd = Side::new(to.clone());

    while fwd.depth + bwd.depth < radius {
        let expand_forward = fwd.frontier.len() <= bwd.frontier.len();
        let (side, other, move_set) = if expand_forward {
            (&mut fwd, &bwd, moves)
        } else {
            (&mut bwd, &fwd, inverse_moves.as_slice())
        };
        if side.frontier.is_empty() {
            return None;
        }
        let mut next = Vec::new();
        let mut meet: Option<Pair<T>> = None;
        'level: for state in std::mem::take(&mut side.frontier) {
            for &mv in move_set {
                let child = apply_move(&state, mv);
                if side.seen.contains_key(&child) {
                    continue;
                }
                side.seen.insert(child.clone(), Some((state.clone(), mv)));
                if other.seen.contains_key(&child) {
                    meet = Some(child);
                    break 'level;
                }
                next.push(child);
            }
        }
        side.depth += 1;
        side.frontier = next;

        if let Some(m) = meet {
            let head = fwd.path_to(&m);
            // The backward tree stores moves applied from `to`; walking it
            // back to `to` needs each move inverted, in reverse order.
            let mut tail: Vec<NielsenMove> = bwd.path_to(&m);
            tail.reverse();
            let tail = tail.into_iter().map(|mv| {
                // `mv` was recorded as an inverse-set move from the `to` side;
                // undoing it means applying its inverse.
                mv.inverse()
            });
            let mut path = head;
            path.extend(tail);
            return Some(path);
        }
        if fwd.seen.len() > max_states || bwd.seen.len() > max_states {
            return None;
        }
    }
    None
}

/// All states reachable from `start` in at most `radius` moves, filtered by
/// `keep` (states failing it are not expanded further).
pub fn ball<T: PairElement>(
    start: &Pair<T>,
    radius: usize,
    moves: &[NielsenMove],
    mut keep: impl FnMut(&Pair<T>) -> bool,
) -> HashMap<Pair<T>, usize> {
    let mut seen = HashMap::new();
    seen.insert(start.clone(), 0usize);
    let mut frontier = vec![start.clone()];
    for depth in 1..=radius {
        let mut next = Vec::new();
        for state in &frontier {
            for &mv in moves {
                let child = apply_move(state, mv);
                if seen.contains_key(&child) || !keep(&child) {
                    continue;
                }
                seen.insert(child.clone(), depth);
                next.push(child);
            }
        }
        frontier = next;
    }
    seen
}
