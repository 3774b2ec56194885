//! Endpoint expansions of iterated integrals.
//!
//! Near `z = 0` a regularized iterated integral of Kronecker coefficients is
//! a finite sum `Σ_j Λ^j P_j(z)` with `Λ = log(-2πiz)` and power series
//! `P_j`. Integrating one more letter keeps that shape, and dropping the
//! `ε`-dependent part amounts to evaluating the logarithmic terms at the
//! regularized base point, which is exactly what the expansion does.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::kronecker::Kronecker;
use crate::error::{Error, Result};

/// Laurent data of one `f^(n)` at the origin: the residue and `c_0..c_N`.
#[derive(Clone, Debug)]
pub struct Laurent {
    pub residue: Complex64,
    pub coeffs: Vec<Complex64>,
}

impl Laurent {
    /// The truncated expansion at a real point `x != 0`.
    pub fn eval(&self, x: f64) -> Complex64 {
        let mut h = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            h = h * x + c;
        }
        h + self.residue / x
    }

    /// Laurent data of `z ↦ f(-z)`.
    pub fn reflected(&self) -> Laurent {
        Laurent {
            residue: -self.residue,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(m, c)| if m % 2 == 0 { *c } else { -c })
                .collect(),
        }
    }
}

/// Laurent coefficients of `f^(0), ..., f^(nmax)` from samples on the circle
/// `|z| = radius`, which must stay inside the punctured lattice disc.
pub fn laurent_table(
    kron: &Kronecker,
    nmax: usize,
    radius: f64,
    samples: usize,
    terms: usize,
) -> Result<Vec<Laurent>> {
    if samples < 2 * (terms + 2) {
        return Err(Error::Config("too few Laurent samples for the requested terms".into()));
    }
    let values: Vec<Vec<Complex64>> = (0..samples)
        .map(|j| {
            let z = Complex64::from_polar(radius, 2.0 * PI * j as f64 / samples as f64);
            kron.f_all(z, nmax)
        })
        .collect::<Result<_>>()?;
    let coeff = |n: usize, m: i64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, row) in values.iter().enumerate() {
            let phase = -2.0 * PI * (j as i64 * m).rem_euclid(samples as i64) as f64 / samples as f64;
            acc += row[n] * Complex64::from_polar(1.0, phase);
        }
        acc / samples as f64 / radius.powi(m as i32)
    };
    Ok((0..=nmax)
        .map(|n| Laurent {
            residue: coeff(n, -1),
            coeffs: (0..=terms as i64).map(|m| coeff(n, m)).collect(),
        })
        .collect())
}

/// `Σ_j Λ^j P_j(z)`, with `parts[j]` the coefficients of `P_j`.
#[derive(Clone, Debug)]
pub struct LogSeries {
    parts: Vec<Vec<Complex64>>,
}

impl LogSeries {
    /// The constant 1, truncated at `z^terms`.
    pub fn one(terms: usize) -> Self {
        let mut p = vec![Complex64::new(0.0, 0.0); terms + 1];
        p[0] = Complex64::new(1.0, 0.0);
        LogSeries { parts: vec![p] }
    }

    pub fn log_degree(&self) -> usize {
        self.parts.len() - 1
    }

    /// Regularized `∫_0^z G(t) f(t) dt` for the letter with Laurent data `l`.
    pub fn integrate(&self, l: &Laurent) -> LogSeries {
        let n = self.parts[0].len() - 1;
        let jmax = self.parts.len();
        let zero = Complex64::new(0.0, 0.0);
        let mut out = vec![vec![zero; n + 1]; jmax + 1];
        for (j, p) in self.parts.iter().enumerate() {
            // the residue times P_j(0) integrates to a pure power of Λ
            out[j + 1][0] += l.residue * p[0] / (j + 1) as f64;
            for m in 0..n {
                let mut b = l.residue * p[m + 1];
                for i in 0..=m {
                    b += p[i] * l.coeffs[m - i];
                }
                if b == zero {
                    continue;
                }
                // ∫_0^z Λ^j t^m dt = Σ_i (-1)^i j!/(j-i)! z^{m+1} Λ^{j-i} / (m+1)^{i+1}
                let mut fall = 1.0;
                let mut den = (m + 1) as f64;
                for i in 0..=j {
                    let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                    out[j - i][m + 1] += b * (sign * fall / den);
                    fall *= (j - i) as f64;
                    den *= (m + 1) as f64;
                }
            }
        }
        while out.len() > 1 && out.last().is_some_and(|p| p.iter().all(|c| *c == zero)) {
            out.pop();
        }
        LogSeries { parts: out }
    }

    /// Value at a real point `0 < z < 1`.
    pub fn eval(&self, z: f64) -> Complex64 {
        let lam = Complex64::new((2.0 * PI * z).ln(), -PI / 2.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for p in self.parts.iter().rev() {
            let mut h = Complex64::new(0.0, 0.0);
            for c in p.iter().rev() {
                h = h * z + c;
            }
            acc = acc * lam + h;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::config::{NumericsConfig, Tau};

    #[test]
    fn log_integrals() {
        // a letter 1/z: iterating gives Λ^j / j!
        let l = Laurent {
            residue: Complex64::new(1.0, 0.0),
            coeffs: vec![Complex64::new(0.0, 0.0); 9],
        };
        let g = LogSeries::one(8).integrate(&l).integrate(&l);
        let lam = Complex64::new((2.0 * PI * 0.3f64).ln(), -PI / 2.0);
        assert!((g.eval(0.3) - lam * lam / 2.0).norm() < 1e-15);
        // a constant letter then 1/z: z Λ - z
        let c = Laurent {
            residue: Complex64::new(0.0, 0.0),
            coeffs: {
                let mut v = vec![Complex64::new(0.0, 0.0); 9];
                v[0] = Complex64::new(1.0, 0.0);
                v
            },
        };
        let h = LogSeries::one(8).integrate(&l).integrate(&c);
        assert!((h.eval(0.3) - (0.3 * lam - 0.3)).norm() < 1e-15);
    }

    #[test]
    fn kronecker_laurent_data() {
        let tau = Tau::imaginary(1.0).unwrap();
        let k = Kronecker::new(tau, &NumericsConfig::default()).unwrap();
        let t = laurent_table(&k, 4, 0.75, 256, 64).unwrap();
        assert!((t[0].coeffs[0] - 1.0).norm() < 1e-13);
        assert!((t[1].residue - 1.0).norm() < 1e-13);
        // f^(1) is odd and f^(2) has no pole
        assert!(t[1].coeffs[0].norm() < 1e-13);
        assert!(t[2].residue.norm() < 1e-13);
    }
}
