//! Evaluation parameters and the point `τ` of the upper half-plane.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the upper half-plane, with nome `q = e^{2πiτ}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tau {
    re: f64,
    im: f64,
}

impl Tau {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !(re.is_finite() && im.is_finite()) || im <= 0.0 {
            return Err(Error::TauParse(format!("{re}+{im}i")));
        }
        Ok(Tau { re, im })
    }

    /// `τ = i·im`.
    pub fn imaginary(im: f64) -> Result<Self> {
        Self::new(0.0, im)
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn q(&self) -> Complex64 {
        (Complex64::i() * 2.0 * std::f64::consts::PI * self.value()).exp()
    }

    /// Length of the shortest nonzero vector of `Z + τZ`.
    pub fn lattice_radius(&self) -> f64 {
        let mut best = 1.0f64;
        let nmax = (1.0 / self.im).ceil() as i64 + 1;
        for n in 1..=nmax {
            let x = n as f64 * self.re;
            let y = n as f64 * self.im;
            let m = x.round();
            for mm in [m - 1.0, m, m + 1.0] {
                best = best.min((x - mm).hypot(y));
            }
        }
        best
    }

    /// Distance from `z` to the nearest point of `Z + τZ`.
    pub fn lattice_distance(&self, z: Complex64) -> f64 {
        let n0 = (z.im / self.im).round();
        let mut best = f64::INFINITY;
        for n in [n0 - 1.0, n0, n0 + 1.0] {
            let y = z - n * self.value();
            let m = y.re.round();
            best = best.min((y - m).norm());
        }
        best
    }
}

impl fmt::Display for Tau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}i", self.re, self.im)
    }
}

impl FromStr for Tau {
    type Err = Error;

    /// `a+bi` with decimal `a` and `b > 0`, e.g. `0+1i` or `-0.5+2i`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::TauParse(s.to_string());
        let t = s.trim();
        let body = t.strip_suffix('i').ok_or_else(bad)?;
        // the sign separating the parts is the last one not opening an exponent
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&j| {
                (bytes[j] == b'+' || bytes[j] == b'-')
                    && !matches!(bytes[j - 1], b'e' | b'E')
            })
            .ok_or_else(bad)?;
        let re: f64 = body[..split].parse().map_err(|_| bad())?;
        let im_str = &body[split..];
        let im: f64 = match im_str {
            "+" => 1.0,
            "-" => -1.0,
            _ => im_str.parse().map_err(|_| bad())?,
        };
        Tau::new(re, im).map_err(|_| bad())
    }
}

/// How regularized values are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegMethod {
    /// Log-series expansion at the endpoints with exact regularization.
    Series,
    /// Least-squares fit of the truncated integral in `log(-2πiε)`.
    EpsFit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericsConfig {
    /// Upper bound on theta-series terms.
    pub theta_terms: usize,
    /// Radius of the α-circle for Laurent extraction; `None` picks
    /// `min(1, Im τ) / 2`.
    pub cauchy_radius: Option<f64>,
    pub cauchy_samples: usize,
    /// Largest letter `f^(n)` the evaluator prepares.
    pub max_letter: usize,
    pub quad_order: usize,
    /// Geometric grading levels toward each endpoint.
    pub quad_levels: usize,
    /// Extra order used for the refinement check.
    pub quad_check_extra: usize,
    pub laurent_samples: usize,
    pub laurent_terms: usize,
    pub reg_method: RegMethod,
    pub eps0: f64,
    /// Extra fit points beyond the `r + 1` unknowns.
    pub fit_extra_points: usize,
    pub fit_refine: f64,
    pub tolerance: f64,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        NumericsConfig {
            theta_terms: 64,
            cauchy_radius: None,
            cauchy_samples: 64,
            max_letter: 16,
            quad_order: 20,
            quad_levels: 48,
            quad_check_extra: 8,
            laurent_samples: 256,
            laurent_terms: 64,
            reg_method: RegMethod::Series,
            eps0: 1e-3,
            fit_extra_points: 2,
            fit_refine: 2.0,
            tolerance: 1e-9,
        }
    }
}

impl NumericsConfig {
    /// Parse flat `key = value` text; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = NumericsConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            cfg.set(key.trim(), value.trim())
                .map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        fn num<T: FromStr>(key: &str, v: &str) -> std::result::Result<T, String> {
            v.parse().map_err(|_| format!("bad value `{v}` for {key}"))
        }
        match key {
            "theta_terms" => self.theta_terms = num(key, value)?,
            "cauchy_radius" => {
                self.cauchy_radius = if value == "auto" {
                    None
                } else {
                    Some(num(key, value)?)
                }
            }
            "cauchy_samples" => self.cauchy_samples = num(key, value)?,
            "max_letter" => self.max_letter = num(key, value)?,
            "quad_order" => self.quad_order = num(key, value)?,
            "quad_levels" => self.quad_levels = num(key, value)?,
            "quad_check_extra" => self.quad_check_extra = num(key, value)?,
            "laurent_samples" => self.laurent_samples = num(key, value)?,
            "laurent_terms" => self.laurent_terms = num(key, value)?,
            "reg_method" => {
                self.reg_method = match value {
                    "series" => RegMethod::Series,
                    "eps-fit" => RegMethod::EpsFit,
                    _ => return Err(format!("unknown reg_method `{value}`")),
                }
            }
            "eps0" => self.eps0 = num(key, value)?,
            "fit_extra_points" => self.fit_extra_points = num(key, value)?,
            "fit_refine" => self.fit_refine = num(key, value)?,
            "tolerance" => self.tolerance = num(key, value)?,
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    /// Checks that do not depend on `τ`.
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.theta_terms < 1 {
            return fail("theta_terms must be at least 1".into());
        }
        if self.cauchy_samples < 2 * self.max_letter + 8 {
            return fail(format!(
                "cauchy_samples {} must be at least 2*max_letter+8 = {}",
                self.cauchy_samples,
                2 * self.max_letter + 8
            ));
        }
        if self.quad_order < 2 || self.quad_levels < 1 {
            return fail("quad_order must be >= 2 and quad_levels >= 1".into());
        }
        if self.laurent_samples < 2 * (self.laurent_terms + 2) {
            return fail("laurent_samples must exceed twice laurent_terms".into());
        }
        if !(self.eps0 > 0.0 && self.eps0 < 0.1) {
            return fail(format!("eps0 {} must lie in (0, 0.1)", self.eps0));
        }
        if self.fit_refine <= 1.0 {
            return fail("fit_refine must exceed 1".into());
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return fail("tolerance must be positive".into());
        }
        Ok(())
    }

    /// The α-circle radius for this `τ`, checked against `min(1, Im τ)`.
    pub fn radius_for(&self, tau: &Tau) -> Result<f64> {
        let bound = tau.im().min(1.0);
        let rho = self.cauchy_radius.unwrap_or(0.5 * bound);
        if !(rho > 0.0 && rho < bound) {
            return Err(Error::Config(format!(
                "cauchy_radius {rho} must lie in (0, min(1, Im tau) = {bound})"
            )));
        }
        Ok(rho)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_parsing() {
        assert_eq!("0+1i".parse::<Tau>().unwrap(), Tau::new(0.0, 1.0).unwrap());
        assert_eq!("-0.5+2i".parse::<Tau>().unwrap(), Tau::new(-0.5, 2.0).unwrap());
        assert_eq!("0.1+1e-1i".parse::<Tau>().unwrap(), Tau::new(0.1, 0.1).unwrap());
        assert!("0-1i".parse::<Tau>().is_err());
        assert!("1i".parse::<Tau>().is_err());
        assert!("abc".parse::<Tau>().is_err());
    }

    #[test]
    fn lattice_geometry() {
        let t = Tau::imaginary(1.0).unwrap();
        assert!((t.lattice_radius() - 1.0).abs() < 1e-15);
        assert!((t.q().norm() - (-2.0 * std::f64::consts::PI).exp()).abs() < 1e-18);
        let t = Tau::new(0.5, 0.5).unwrap();
        assert!((t.lattice_radius() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(t.lattice_distance(Complex64::new(1.5, 0.5)) < 1e-15);
    }

    #[test]
    fn config_file() {
        let cfg = NumericsConfig::parse("# comment\nquad_order = 24\nreg_method = eps-fit\n").unwrap();
        assert_eq!(cfg.quad_order, 24);
        assert_eq!(cfg.reg_method, RegMethod::EpsFit);
        assert!(NumericsConfig::parse("bogus = 1").is_err());
        assert!(NumericsConfig::parse("eps0 = 0.5").is_err());
        assert!(NumericsConfig::parse("cauchy_samples = 10").is_err());
        let t = Tau::imaginary(0.4).unwrap();
        assert!((NumericsConfig::default().radius_for(&t).unwrap() - 0.2).abs() < 1e-15);
        let cfg = NumericsConfig::parse("cauchy_radius = 0.45").unwrap();
        assert!(cfg.radius_for(&t).is_err());
    }
}
