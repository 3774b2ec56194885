//! Riemann zeta values at the integers the evaluator needs.

use crate::error::{Error, Result};

/// `B_{2k} / (2k)!` for `k = 1..=7`.
const BERNOULLI_OVER_FACT: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
];

/// `ζ(0) = -1/2` and `ζ(s)` for integers `s >= 2`, by direct summation with
/// an Euler–Maclaurin tail.
pub fn zeta(s: i64) -> Result<f64> {
    if s == 0 {
        return Ok(-0.5);
    }
    if s < 2 {
        return Err(Error::Argument(format!("zeta({s}) is not supported")));
    }
    let sf = s as f64;
    let n = 20u32;
    let nf = n as f64;
    let mut sum: f64 = (1..n).rev().map(|k| (k as f64).powf(-sf)).sum();
    sum += nf.powf(1.0 - sf) / (sf - 1.0) + 0.5 * nf.powf(-sf);
    // rising factorial s(s+1)...(s+2k-2)
    let mut rising = sf;
    for (k, b) in BERNOULLI_OVER_FACT.iter().enumerate() {
        let j = (2 * k + 1) as f64;
        sum += b * rising * nf.powf(-sf - j);
        rising *= (sf + j) * (sf + j + 1.0);
    }
    Ok(sum)
}
