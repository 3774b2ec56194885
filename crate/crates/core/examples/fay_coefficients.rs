use emzv::fay::{c_coeff, enumerate_support, p_poly};
use emzv::index;

fn main() -> emzv::Result<()> {
    for l in [index![2], index![1, 1], index![0, 3], index![2, 0, 1]] {
        println!("u·P({l}) = {}", p_poly(&l)?);
    }

    let k = index![1, 2, 1];
    println!("\nnon-zero c<l|{k}>:");
    for (l, c) in enumerate_support(&k)?.iter() {
        println!("  l = {l:<8} c = {c}");
    }

    // a single coefficient, computed directly
    let c = c_coeff(&index![0, 4], &index![2, 2])?;
    println!("\nc<0,4|2,2> = {c}");
    Ok(())
}
