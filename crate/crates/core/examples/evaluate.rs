use emzv::index;
use emzv::numerics::{Evaluator, NumericsConfig, Tau};
use emzv::verify::verify_reduction_with;

fn main() -> emzv::Result<()> {
    let tau = Tau::new(0.2, 0.9)?;
    let ev = Evaluator::new(tau, NumericsConfig::default())?;

    for k in [index![2], index![0, 2], index![2, 3], index![1, 0, 2], index![2, 1]] {
        let v = ev.emzv(&k)?;
        println!("I({k}; {tau}) = {:.15} (± {:.1e})", v.value, v.error);
    }

    // the reduced form evaluates to the same number
    let rep = verify_reduction_with(&ev, &index![2, 2, 1], 1e-8, 10_000)?;
    println!("\nreduction of 2,2,1: residual {:.2e}, pass = {}", rep.residual.unwrap_or(f64::NAN), rep.pass);
    Ok(())
}
