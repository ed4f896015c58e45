// Nielsen equivalence of generating pairs in the solvable group
// `⟨x, y | y x y⁻¹ = x²⟩`, realized by affine maps of the dyadic rationals.

use std::error::Error;

use twobridge::hnn::{
    criterion_check, decide_equivalent, eval_affine, nielsen_path, pi_height, HnnVerdict, HnnWitness, HnnWord,
    HNN_ALPHABET,
};
use twobridge::nielsen::Pair;
use twobridge::words::Word;

fn hw(s: &str) -> Result<HnnWord, Box<dyn Error>> {
    Ok(HnnWord(Word::parse_in(s, HNN_ALPHABET)?))
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let base = Pair::new(HnnWord::x(), HnnWord::y());

    // the defining relation holds in the affine model
    assert_eq!(eval_affine(&hw("yxY")?), eval_affine(&hw("xx")?));
    println!("y has height {}, x is {}", pi_height(&eval_affine(&HnnWord::y())), eval_affine(&HnnWord::x()));

    let wit = HnnWitness { g: hw("xy")?, k: 2, eps: 1, eta: -1 };
    let target = wit.image_of(&base);
    println!("witness image: ({}, {})", target.first, target.second);
    assert!(criterion_check(&target.first, &target.second, &wit.g, wit.k, wit.eps, wit.eta));

    let path = nielsen_path(&base, &target, 10).ok_or("no Nielsen path found")?;
    println!("Nielsen path of {} moves", path.len());

    match decide_equivalent(&base, &target, 3, 3)? {
        HnnVerdict::Equivalent(w) => println!("equivalent via g = {}, k = {}", w.g, w.k),
        other => return Err(format!("unexpected verdict {other:?}").into()),
    }

    let squared = Pair::new(HnnWord::x(), HnnWord::y().pow(2));
    let verdict = decide_equivalent(&base, &squared, 3, 3)?;
    println!("(x, y) vs (x, y²): {verdict:?}");
    assert!(matches!(verdict, HnnVerdict::HeightObstruction { .. }));
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
