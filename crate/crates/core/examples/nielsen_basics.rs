// Primitive elements and bases of the free group on `a, b`.

use std::error::Error;

use twobridge::nielsen::NielsenMove;
use twobridge::words::{
    apply_moves, ball_search, canonical_primitive_lift, commutator_class, is_basis, is_primitive, parse_pair, AbelianImage,
    Word, FREE_ALPHABET,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for s in ["aab", "abAB", "abaab", "aabb"] {
        let w = Word::parse_in(s, FREE_ALPHABET)?;
        println!("{s:>6}  primitive: {}", is_primitive(&w));
    }

    let (_, _, lift) = canonical_primitive_lift(AbelianImage::new(5, 3))?;
    println!("primitive lift of a^5 b^3: {}", lift.format_in(FREE_ALPHABET));
    assert!(is_primitive(&lift));

    let start = parse_pair("(a, b)")?;
    let moves: Vec<NielsenMove> = NielsenMove::elementary().into_iter().take(3).collect();
    let image = apply_moves(&start, &moves);
    println!("after {} moves: {}", moves.len(), image);
    assert!(is_basis(&image));
    assert_eq!(commutator_class(&image), commutator_class(&start));

    let path = ball_search(&start, &image, 6).ok_or("no path within radius 6")?;
    println!("recovered a path of {} moves", path.len());
    assert_eq!(apply_moves(&start, &path), image);

    let not_basis = parse_pair("(a, bab)")?;
    println!("{not_basis} is a basis: {}", is_basis(&not_basis));
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
