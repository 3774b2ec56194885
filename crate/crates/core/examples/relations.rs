//! Exact relations between iterated integrals, printed as identities.

use emzv::index;
use emzv::relations::{
    fay_identity, parity_split, prop_mat_identity, reflection_identity, shuffle_identity, trailing_ones,
};

fn main() -> emzv::Result<()> {
    println!("{}", shuffle_identity(&index![2], &index![0, 1]));
    println!("{}", reflection_identity(&index![1, 0, 3]));
    println!("{}", fay_identity(&index![1, 2])?);
    println!("{}", prop_mat_identity(2, 3)?);
    println!("{}", parity_split(&index![1, 1])?);
    println!("{}", trailing_ones(&index![3, 1, 1])?);
    Ok(())
}
