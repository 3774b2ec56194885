use emzv::numerics::{f_n_checked, Kronecker, NumericsConfig, Tau};
use emzv::verify::kronecker_checks;
use num_complex::Complex64;

fn main() -> emzv::Result<()> {
    let tau = Tau::new(0.1, 1.2)?;
    let k = Kronecker::new(tau, &NumericsConfig::default())?;

    let z = Complex64::new(0.3, 0.05);
    println!("θ({z}) = {}", k.theta(z)?);
    println!("θ'(0) = {}", k.theta_prime0());
    for n in 0..5 {
        println!("f^({n})({z}) = {}", f_n_checked(&k, n, z)?);
    }

    // antisymmetry, periodicity, quasi-periodicity, Fay, q-series of f^(1)
    let mut worst = 0.0f64;
    for (name, lhs, rhs) in kronecker_checks(&k, 10, 1)? {
        let rel = (lhs - rhs).norm() / lhs.norm().max(1.0);
        worst = worst.max(rel);
        if name.ends_with("#0") {
            println!("{name:<22} {rel:.1e}");
        }
    }
    println!("worst relative residual over 50 checks: {worst:.1e}");
    Ok(())
}
