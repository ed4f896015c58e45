use proptest::prelude::*;

use twobridge::hnn::{eval_affine, pi_height, AffineElem, Dyadic, HnnWord};
use twobridge::nielsen::PairElement;
use twobridge::words::{reduce, Letter};

const LETTERS: [Letter; 4] = [Letter::A, Letter::AInv, Letter::B, Letter::BInv];

fn hnn_word(max: usize) -> impl Strategy<Value = HnnWord> {
    prop::collection::vec(0..4usize, 0..max)
        .prop_map(|v| HnnWord(reduce(&v.into_iter().map(|i| LETTERS[i]).collect::<Vec<_>>())))
}

/// Acts letter by letter, rightmost first: x is t+1, y is 2t.
fn act(w: &HnnWord, t: &Dyadic) -> Dyadic {
    w.0.letters().iter().rev().fold(t.clone(), |t, l| match l {
        Letter::A => &t + &Dyadic::from_int(1),
        Letter::AInv => &t - &Dyadic::from_int(1),
        Letter::B => t.shl(1),
        Letter::BInv => t.shl(-1),
    })
}

proptest! {
    #[test]
    fn evaluation_is_a_homomorphism(u in hnn_word(16), v in hnn_word(16)) {
        let (eu, ev) = (eval_affine(&u), eval_affine(&v));
        prop_assert_eq!(eval_affine(&u.mul(&v)), eu.compose(&ev));
        prop_assert_eq!(eval_affine(&u.inverse()), eu.inverse());
        prop_assert_eq!(pi_height(&eval_affine(&u.mul(&v))), pi_height(&eu) + pi_height(&ev));
        prop_assert_eq!(eu.compose(&eu.inverse()), AffineElem::identity());
    }

    #[test]
    fn matches_pointwise_action(w in hnn_word(20), t in -50i64..50) {
        let t = Dyadic::from_int(t);
        prop_assert_eq!(eval_affine(&w).apply(&t), act(&w, &t));
    }
}

#[test]
fn defining_relation() {
    let lhs: HnnWord = "yxY".parse().unwrap();
    let rhs: HnnWord = "xx".parse().unwrap();
    assert_eq!(eval_affine(&lhs), eval_affine(&rhs));
    assert_eq!(eval_affine(&"y".parse().unwrap()), AffineElem::y());
    assert_eq!(pi_height(&eval_affine(&"yyXy".parse().unwrap())), 3);
}
