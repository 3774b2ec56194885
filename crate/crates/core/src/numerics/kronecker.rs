//! The odd theta function, the Kronecker function `F(α, z)` and its
//! α-Laurent coefficients `f^(n)(z)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::config::{NumericsConfig, Tau};
use crate::error::{Error, Result};

/// Arguments closer than this to a lattice point count as poles.
pub const POLE_GUARD: f64 = 1e-8;

/// Relative size below which a theta term ends the series.
const THETA_REL_TOL: f64 = 1e-17;

/// Theta-series data and the α-circle used for Laurent extraction.
#[derive(Clone, Debug)]
pub struct Kronecker {
    tau: Tau,
    /// `(-1)^n q^{(2n+1)^2/8}` for `n < theta_terms`.
    coef: Vec<Complex64>,
    theta_prime0: Complex64,
    rho: f64,
    alphas: Vec<Complex64>,
    /// `θ'(0) / θ(α_j)` on the α-circle.
    alpha_factor: Vec<Complex64>,
    /// `e^{-2πit/M}`.
    roots: Vec<Complex64>,
}

fn check_finite(v: Complex64, what: &str) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

impl Kronecker {
    pub fn new(tau: Tau, cfg: &NumericsConfig) -> Result<Self> {
        cfg.validate()?;
        let rho = cfg.radius_for(&tau)?;
        Self::with_circle(tau, cfg.theta_terms, rho, cfg.cauchy_samples)
    }

    pub fn with_circle(tau: Tau, theta_terms: usize, rho: f64, samples: usize) -> Result<Self> {
        let t = tau.value();
        let coef: Vec<Complex64> = (0..theta_terms)
            .map(|n| {
                let m = (2 * n + 1) as f64;
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                sign * (Complex64::i() * PI * t * (m * m / 4.0)).exp()
            })
            .collect();
        let mut k = Kronecker {
            tau,
            coef,
            theta_prime0: Complex64::new(0.0, 0.0),
            rho,
            alphas: Vec::new(),
            alpha_factor: Vec::new(),
            roots: (0..samples)
                .map(|t| Complex64::from_polar(1.0, -2.0 * PI * t as f64 / samples as f64))
                .collect(),
        };
        k.theta_prime0 = k.compute_theta_prime0()?;
        k.alphas = (0..samples)
            .map(|j| Complex64::from_polar(rho, 2.0 * PI * j as f64 / samples as f64))
            .collect();
        k.alpha_factor = k
            .alphas
            .iter()
            .map(|&a| Ok(k.theta_prime0 / k.theta(a)?))
            .collect::<Result<_>>()?;
        Ok(k)
    }

    pub fn tau(&self) -> Tau {
        self.tau
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn samples(&self) -> usize {
        self.alphas.len()
    }

    /// `θ(z) = 2i Σ_{n>=0} (-1)^n q^{(2n+1)^2/8} sin((2n+1)πz)`.
    pub fn theta(&self, z: Complex64) -> Result<Complex64> {
        if z == Complex64::new(0.0, 0.0) {
            return Ok(z);
        }
        let mut sum = Complex64::new(0.0, 0.0);
        let mut prev = f64::INFINITY;
        for (n, c) in self.coef.iter().enumerate() {
            let m = (2 * n + 1) as f64;
            // |sin(x + iy)| <= cosh(y)
            let bound = c.norm() * (m * PI * z.im).cosh();
            if bound <= THETA_REL_TOL * sum.norm() && bound < prev {
                return check_finite(sum * Complex64::new(0.0, 2.0), "theta");
            }
            if bound == 0.0 && n > 0 {
                return check_finite(sum * Complex64::new(0.0, 2.0), "theta");
            }
            prev = bound;
            sum += c * (m * PI * z).sin();
        }
        Err(Error::NonConvergence(format!(
            "theta series at z = {z} needs more than {} terms",
            self.coef.len()
        )))
    }

    pub fn theta_prime0(&self) -> Complex64 {
        self.theta_prime0
    }

    fn compute_theta_prime0(&self) -> Result<Complex64> {
        let mut sum = Complex64::new(0.0, 0.0);
        for (n, c) in self.coef.iter().enumerate() {
            let m = (2 * n + 1) as f64;
            let term = c * m;
            if term.norm() <= THETA_REL_TOL * sum.norm() {
                return check_finite(sum * Complex64::new(0.0, 2.0 * PI), "theta'(0)");
            }
            sum += term;
        }
        Err(Error::NonConvergence("theta'(0) series did not converge".into()))
    }

    fn guard(&self, x: Complex64, name: &str) -> Result<()> {
        let d = self.tau.lattice_distance(x);
        if d < POLE_GUARD {
            return Err(Error::Pole(format!("{name} = {x} lies within {d:e} of the lattice")));
        }
        Ok(())
    }

    /// `F(α, z) = θ(z + α) θ'(0) / (θ(z) θ(α))`.
    pub fn kronecker_f(&self, alpha: Complex64, z: Complex64) -> Result<Complex64> {
        self.guard(alpha, "alpha")?;
        self.guard(z, "z")?;
        let v = self.theta(z + alpha)? * self.theta_prime0 / (self.theta(z)? * self.theta(alpha)?);
        check_finite(v, "F(alpha, z)")
    }

    /// `f^(n)(z)` for `n = 0..=nmax` from one pass over the α-circle.
    pub fn f_all(&self, z: Complex64, nmax: usize) -> Result<Vec<Complex64>> {
        self.guard(z, "z")?;
        let inv = 1.0 / self.theta(z)?;
        let m = self.alphas.len();
        let values: Vec<Complex64> = self
            .alphas
            .iter()
            .zip(&self.alpha_factor)
            .map(|(&a, &fac)| Ok(self.theta(z + a)? * fac * inv))
            .collect::<Result<_>>()?;
        let mut out = Vec::with_capacity(nmax + 1);
        for n in 0..=nmax {
            // f^(n) = ρ^{1-n}/M Σ_j F(α_j, z) e^{-2πij(n-1)/M}
            let k = n as i64 - 1;
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, v) in values.iter().enumerate() {
                acc += v * self.roots[(j as i64 * k).rem_euclid(m as i64) as usize];
            }
            out.push(check_finite(acc * self.rho.powi(1 - n as i32) / m as f64, "f^(n)")?);
        }
        Ok(out)
    }
}

/// Threshold on the change of `f^(n)` when the α-sample count doubles.
pub const ALIAS_TOL: f64 = 1e-9;

/// `f^(n)(z)` with an aliasing check against twice as many α-samples.
pub fn f_n_checked(k: &Kronecker, n: usize, z: Complex64) -> Result<Complex64> {
    let v = k.f_all(z, n)?[n];
    let fine = Kronecker::with_circle(k.tau(), k.coef.len(), k.rho(), 2 * k.samples())?;
    let w = fine.f_all(z, n)?[n];
    let diff = (v - w).norm();
    if diff > ALIAS_TOL * v.norm().max(1.0) {
        return Err(Error::Alias(format!(
            "f^({n})({z}) moved by {diff:e} when doubling the sample count"
        )));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kr(im: f64) -> Kronecker {
        Kronecker::new(Tau::imaginary(im).unwrap(), &NumericsConfig::default()).unwrap()
    }

    #[test]
    fn theta_symmetries() {
        let k = kr(1.0);
        assert_eq!(k.theta(Complex64::new(0.0, 0.0)).unwrap().norm(), 0.0);
        for z in [Complex64::new(0.3, 0.1), Complex64::new(-0.7, 0.4), Complex64::new(0.11, -0.2)] {
            let t = k.theta(z).unwrap();
            assert!((k.theta(z + 1.0).unwrap() + t).norm() < 1e-13);
            assert!((k.theta(-z).unwrap() + t).norm() < 1e-13);
        }
    }

    #[test]
    fn theta_derivative() {
        let k = kr(1.0);
        let tp = k.theta_prime0();
        assert!(tp.norm() > 0.1);
        let z = Complex64::new(1e-4, 0.0);
        assert!((k.theta(z).unwrap() / (tp * z) - 1.0).norm() < 1e-6);
        let h = 1e-5;
        let fd = (k.theta(Complex64::new(h, 0.0)).unwrap() - k.theta(Complex64::new(-h, 0.0)).unwrap())
            / (2.0 * h);
        assert!((fd - tp).norm() < 1e-8);
    }

    #[test]
    fn poles_are_rejected() {
        let k = kr(1.0);
        let z = Complex64::new(0.3, 0.0);
        assert!(matches!(k.kronecker_f(Complex64::new(1.0, 1.0), z), Err(Error::Pole(_))));
        assert!(matches!(k.f_all(Complex64::new(2.0, 0.0), 3), Err(Error::Pole(_))));
    }

    #[test]
    fn f_zero_is_one() {
        let k = kr(1.0);
        for z in [Complex64::new(0.25, 0.0), Complex64::new(0.6, 0.2)] {
            let v = f_n_checked(&k, 0, z).unwrap();
            assert!((v - 1.0).norm() < 1e-12);
        }
    }
}
