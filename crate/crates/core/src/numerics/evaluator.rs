//! Values of `I(k; τ)` and of expressions in them at a fixed `τ`.
//!
//! Admissible indices are integrated directly on a graded grid over `[0, 1]`.
//! Regularized values split `[0, 1]` at `a` and `1 - a`: the end pieces come
//! from the log-series expansion (exactly regularized), the middle piece
//! from quadrature, and the pieces are glued by the path-composition formula.
//! The ε-fit of the truncated integral is available as a cross-check.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use parking_lot::RwLock;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{NumericsConfig, RegMethod, Tau};
use super::kronecker::Kronecker;
use super::quadrature::Grid;
use super::series::{laurent_table, Laurent, LogSeries};
use crate::error::{Error, Result};
use crate::expr::Expression;
use crate::index::Index;

/// A value with an error estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
}

impl Estimate {
    pub fn exact(value: Complex64) -> Self {
        Estimate { value, error: 0.0 }
    }
}

/// Ratio of the split point to the lattice radius.
const SPLIT_FRACTION: f64 = 0.55;
/// Ratio of the Laurent sampling circle to the lattice radius.
const LAURENT_FRACTION: f64 = 0.75;
/// Below this fraction of the lattice radius, letters are summed from their
/// Laurent expansions instead of the α-circle.
const NEAR_ZERO_FRACTION: f64 = 0.25;
/// Second split point, relative to the first, for the error estimate.
const SPLIT_SHRINK: f64 = 0.8;

struct GridValues {
    grid: Grid,
    /// `f^(0..=nmax)` at every node, in grid order.
    f: Vec<Vec<Complex64>>,
}

struct Laurents {
    left: Vec<Laurent>,
    right: Vec<Laurent>,
}

type Slot<T> = RwLock<Option<Arc<T>>>;

fn cached<T>(slot: &Slot<T>, make: impl FnOnce() -> Result<T>) -> Result<Arc<T>> {
    if let Some(v) = slot.read().as_ref() {
        return Ok(Arc::clone(v));
    }
    let mut w = slot.write();
    if let Some(v) = w.as_ref() {
        return Ok(Arc::clone(v));
    }
    let v = Arc::new(make()?);
    *w = Some(Arc::clone(&v));
    Ok(v)
}

/// Evaluates indices and expressions at one `τ`, caching grids, series data
/// and atom values. Safe to share across threads.
pub struct Evaluator {
    cfg: NumericsConfig,
    kron: Kronecker,
    admissible_grids: [Slot<GridValues>; 2],
    middle_grids: [Slot<GridValues>; 2],
    laurent: Slot<Laurents>,
    atoms: RwLock<HashMap<Index, Estimate>>,
}

impl Evaluator {
    pub fn new(tau: Tau, cfg: NumericsConfig) -> Result<Self> {
        let kron = Kronecker::new(tau, &cfg)?;
        Ok(Evaluator {
            cfg,
            kron,
            admissible_grids: Default::default(),
            middle_grids: Default::default(),
            laurent: RwLock::new(None),
            atoms: RwLock::new(HashMap::new()),
        })
    }

    pub fn tau(&self) -> Tau {
        self.kron.tau()
    }

    pub fn config(&self) -> &NumericsConfig {
        &self.cfg
    }

    pub fn kronecker(&self) -> &Kronecker {
        &self.kron
    }

    fn check_letters(&self, k: &Index) -> Result<()> {
        if let Some(&n) = k.entries().iter().find(|&&n| n as usize > self.cfg.max_letter) {
            return Err(Error::Argument(format!(
                "entry {n} of {k} exceeds max_letter = {}",
                self.cfg.max_letter
            )));
        }
        Ok(())
    }

    fn grid_values(&self, grid: Grid) -> Result<GridValues> {
        let pts: Vec<f64> = grid.points().map(|p| p.eval_at).collect();
        let nmax = self.cfg.max_letter;
        let near = NEAR_ZERO_FRACTION * self.tau().lattice_radius();
        let lau = if pts.iter().any(|x| x.abs() < near) {
            Some(self.laurents()?)
        } else {
            None
        };
        let f = pts
            .par_iter()
            .map(|&x| match &lau {
                Some(l) if x.abs() < near => Ok(l.left.iter().map(|c| c.eval(x)).collect()),
                _ => self.kron.f_all(Complex64::new(x, 0.0), nmax),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GridValues { grid, f })
    }

    /// `∫_{start < z_1 < ... < z_r < end} Π f^(k_i)(z_i)` over a whole grid.
    fn iterate(gv: &GridValues, letters: &[u32]) -> Complex64 {
        let mut g = vec![Complex64::new(1.0, 0.0); gv.grid.len()];
        let mut total = Complex64::new(1.0, 0.0);
        for &n in letters {
            let vals: Vec<Complex64> = g.iter().zip(&gv.f).map(|(gi, fi)| gi * fi[n as usize]).collect();
            let (next, t) = gv.grid.cumulative(&vals);
            g = next;
            total = t;
        }
        total
    }

    /// `I(k)` for admissible `k` by direct quadrature, checked against a
    /// higher-order rule.
    pub fn emzv_admissible(&self, k: &Index) -> Result<Estimate> {
        if !k.is_admissible() {
            return Err(Error::Precondition(format!("{k} is not admissible")));
        }
        if k.is_empty() {
            return Ok(Estimate::exact(Complex64::new(1.0, 0.0)));
        }
        self.check_letters(k)?;
        let c = &self.cfg;
        let base = cached(&self.admissible_grids[0], || {
            self.grid_values(Grid::unit(c.quad_order, c.quad_levels))
        })?;
        let fine = cached(&self.admissible_grids[1], || {
            self.grid_values(Grid::unit(c.quad_order + c.quad_check_extra, c.quad_levels))
        })?;
        let v0 = Self::iterate(&base, k.entries());
        let v1 = Self::iterate(&fine, k.entries());
        let error = (v1 - v0).norm();
        if error > c.tolerance * v1.norm().max(1.0) {
            return Err(Error::Tolerance(format!(
                "I({k}) changed by {error:e} under grid refinement"
            )));
        }
        Ok(Estimate { value: v1, error })
    }

    fn split_point(&self) -> f64 {
        (SPLIT_FRACTION * self.tau().lattice_radius()).min(0.5)
    }

    fn laurents(&self) -> Result<Arc<Laurents>> {
        cached(&self.laurent, || {
            let c = &self.cfg;
            let radius = LAURENT_FRACTION * self.tau().lattice_radius();
            let left = laurent_table(&self.kron, c.max_letter, radius, c.laurent_samples, c.laurent_terms)?;
            let right = left.iter().map(Laurent::reflected).collect();
            Ok(Laurents { left, right })
        })
    }

    /// Regularized value from the endpoint expansions with split point
    /// `splits[which]`.
    fn series_value(&self, k: &Index, which: usize) -> Result<Complex64> {
        let a = self.split_point() * if which == 0 { 1.0 } else { SPLIT_SHRINK };
        let lau = self.laurents()?;
        let e = k.entries();
        let r = e.len();
        let mut left = Vec::with_capacity(r + 1);
        let mut g = LogSeries::one(self.cfg.laurent_terms);
        left.push(Complex64::new(1.0, 0.0));
        for &n in e {
            g = g.integrate(&lau.left[n as usize]);
            left.push(g.eval(a));
        }
        // right[j] integrates the letters k_{j+1}, ..., k_r near z = 1
        let mut right = vec![Complex64::new(1.0, 0.0); r + 1];
        let mut h = LogSeries::one(self.cfg.laurent_terms);
        for j in (0..r).rev() {
            h = h.integrate(&lau.right[e[j] as usize]);
            right[j] = h.eval(a);
        }
        let mut total = Complex64::new(0.0, 0.0);
        if 1.0 - 2.0 * a <= 1e-12 {
            for i in 0..=r {
                total += left[i] * right[i];
            }
            return Ok(total);
        }
        let gv = cached(&self.middle_grids[which], || {
            // panels no longer than a/2 keep the singularities at 0, 1 far away
            let panels = ((1.0 - 2.0 * a) / (0.5 * a)).ceil() as usize;
            self.grid_values(Grid::uniform(self.cfg.quad_order, a, 1.0 - a, panels))
        })?;
        for i in 0..=r {
            let mut g = vec![Complex64::new(1.0, 0.0); gv.grid.len()];
            total += left[i] * right[i];
            for j in i + 1..=r {
                let vals: Vec<Complex64> =
                    g.iter().zip(&gv.f).map(|(gi, fi)| gi * fi[e[j - 1] as usize]).collect();
                let (next, t) = gv.grid.cumulative(&vals);
                g = next;
                total += left[i] * t * right[j];
            }
        }
        Ok(total)
    }

    /// `I(k)` through the endpoint expansions, with the change under a
    /// different split point as error estimate.
    pub fn emzv_series(&self, k: &Index) -> Result<Estimate> {
        if k.is_empty() {
            return Ok(Estimate::exact(Complex64::new(1.0, 0.0)));
        }
        self.check_letters(k)?;
        let v0 = self.series_value(k, 0)?;
        let v1 = self.series_value(k, 1)?;
        let v = Estimate {
            value: v0,
            error: (v1 - v0).norm(),
        };
        if !(v.value.re.is_finite() && v.value.im.is_finite()) {
            return Err(Error::NonFinite(format!("I({k})")));
        }
        if v.error > self.cfg.tolerance * v.value.norm().max(1.0) {
            return Err(Error::Tolerance(format!(
                "I({k}) changed by {:e} when moving the split point",
                v.error
            )));
        }
        Ok(v)
    }

    /// The truncated integral over `[eps, 1 - eps]`.
    pub fn truncated(&self, k: &Index, eps: f64) -> Result<Complex64> {
        self.check_letters(k)?;
        let gv = self.grid_values(Grid::truncated(self.cfg.quad_order, eps))?;
        Ok(Self::iterate(&gv, k.entries()))
    }

    /// Least-squares fit of `T(ε_j)` in powers of `L(ε) = log(2πε) - iπ/2`
    /// over `ε_j = eps0 2^{-j}`; returns the constant term.
    fn fit_constant(&self, k: &Index, eps0: f64) -> Result<Complex64> {
        let r = k.len();
        let npts = r + 1 + self.cfg.fit_extra_points;
        let eps: Vec<f64> = (0..npts).map(|j| eps0 * 0.5f64.powi(j as i32)).collect();
        let t = eps
            .iter()
            .map(|&e| self.truncated(k, e))
            .collect::<Result<Vec<_>>>()?;
        let a = DMatrix::from_fn(npts, r + 1, |i, n| {
            Complex64::new((2.0 * PI * eps[i]).ln(), -PI / 2.0).powu(n as u32)
        });
        let b = DVector::from_vec(t);
        let sol = a
            .svd(true, true)
            .solve(&b, 1e-14)
            .map_err(|e| Error::Fit(format!("least squares for {k}: {e}")))?;
        Ok(sol[0])
    }

    /// `I(k)` by fitting the truncated integral at two base points `eps0`
    /// and `eps0 / fit_refine` and extrapolating the two constants.
    pub fn emzv_eps_fit(&self, k: &Index) -> Result<Estimate> {
        if k.is_empty() {
            return Ok(Estimate::exact(Complex64::new(1.0, 0.0)));
        }
        let f = self.cfg.fit_refine;
        let c0 = self.fit_constant(k, self.cfg.eps0)?;
        let c1 = self.fit_constant(k, self.cfg.eps0 / f)?;
        let error = (c1 - c0).norm();
        if error > 10.0 * self.cfg.tolerance {
            return Err(Error::Fit(format!(
                "fits for I({k}) at eps0 and eps0/{f} differ by {error:e}"
            )));
        }
        Ok(Estimate {
            value: (c1 * f - c0) / (f - 1.0),
            error,
        })
    }

    /// Regularized `I(k)` by the configured method.
    pub fn emzv_regularized(&self, k: &Index) -> Result<Estimate> {
        match self.cfg.reg_method {
            RegMethod::Series => self.emzv_series(k),
            RegMethod::EpsFit => self.emzv_eps_fit(k),
        }
    }

    /// `I(k)`, dispatched on admissibility and cached.
    pub fn emzv(&self, k: &Index) -> Result<Estimate> {
        if let Some(v) = self.atoms.read().get(k) {
            return Ok(*v);
        }
        let v = if k.is_admissible() {
            self.emzv_admissible(k)?
        } else {
            self.emzv_regularized(k)?
        };
        self.atoms.write().insert(k.clone(), v);
        Ok(v)
    }

    /// `Σ coef Π I(atom)`, with first-order error propagation.
    pub fn eval_expression(&self, e: &Expression) -> Result<Estimate> {
        let mut value = Complex64::new(0.0, 0.0);
        let mut error = 0.0;
        for (mono, coef) in e.iter() {
            let c = coef
                .to_f64()
                .ok_or_else(|| Error::NonFinite(format!("coefficient {coef}")))?;
            let vals = mono
                .atoms()
                .iter()
                .map(|a| self.emzv(a))
                .collect::<Result<Vec<_>>>()?;
            let prod: Complex64 = vals.iter().map(|v| v.value).product();
            value += prod * c;
            for (i, v) in vals.iter().enumerate() {
                let others: f64 = vals
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, w)| w.value.norm())
                    .product();
                error += c.abs() * v.error * others;
            }
        }
        Ok(Estimate { value, error })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index;

    fn ev(im: f64) -> Evaluator {
        Evaluator::new(Tau::imaginary(im).unwrap(), NumericsConfig::default()).unwrap()
    }

    #[test]
    fn length_one_values() {
        let e = ev(1.0);
        let v = e.emzv_admissible(&index![2]).unwrap().value;
        assert!((v + PI * PI / 3.0).norm() < 1e-12, "{v}");
        assert!(e.emzv_admissible(&index![3]).unwrap().value.norm() < 1e-12);
        assert!(matches!(e.emzv_admissible(&index![1, 2]), Err(Error::Precondition(_))));
    }

    #[test]
    fn series_agrees_with_quadrature() {
        let e = ev(1.0);
        for k in [index![2], index![0, 0], index![2, 0], index![0, 3, 2], index![2, 1, 0]] {
            let a = e.emzv_admissible(&k).unwrap().value;
            let s = e.emzv_series(&k).unwrap().value;
            assert!((a - s).norm() < 1e-11, "{k}: {a} vs {s}");
        }
    }

    #[test]
    fn regularized_small_values() {
        let e = ev(1.0);
        assert!(e.emzv_series(&index![1]).unwrap().value.norm() < 1e-12);
        assert!(e.emzv_series(&index![1, 1]).unwrap().value.norm() < 1e-12);
        let v = e.emzv_series(&index![0]).unwrap().value;
        assert!((v - 1.0).norm() < 1e-13);
    }

    #[test]
    fn skewed_tau_split() {
        // small lattice radius forces a middle segment
        let e = Evaluator::new(Tau::new(0.3, 0.6).unwrap(), NumericsConfig::default()).unwrap();
        for k in [index![2], index![0, 2, 0]] {
            let a = e.emzv_admissible(&k).unwrap().value;
            let s = e.emzv_series(&k).unwrap().value;
            assert!((a - s).norm() < 1e-10, "{k}: {a} vs {s}");
        }
    }
}
