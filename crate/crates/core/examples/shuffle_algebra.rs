//! Shuffle products, the antipode and the deconcatenation coproduct on
//! words of non-negative integers.

use emzv::index;
use emzv::word::{antipode, antipode_split, coproduct, shuffle, shuffle_power};

fn main() {
    let v = index![1, 2];
    let w = index![3];

    println!("{v} ш {w} = {}", shuffle(&v, &w));
    println!("({v})^ш3 = {}", shuffle_power(&v, 3));

    let u = index![0, 1, 2];
    let (sign, rev) = antipode(&u);
    println!("S({u}) = {sign} * {rev}");

    for (a, b) in coproduct(&u) {
        println!("  Δ term: ({a}) ⊗ ({b})");
    }

    // m(S ⊗ id)Δ vanishes on non-empty words
    println!("antipode identity residual: {}", antipode_split(&u));
}
