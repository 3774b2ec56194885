//! Batch checks of relation families, reduction tables and their JSON-lines
//! reports.

use std::f64::consts::PI;
use std::io::Write;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::Expression;
use crate::index::{indices_up_to, Index, Parity};
use crate::numerics::{Estimate, Evaluator, Kronecker, Tau};
use crate::reduction::{is_terminal, reduce};
use crate::relations::{
    fay_identity, fay_sum, parity_split, prop_mat_identity, reflection_identity, shuffle_identity,
    trailing_ones, Identity,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Shuffle,
    Reflection,
    Fay,
    PropMat,
    Parity,
    TrailingOnes,
    Reduction,
    Kronecker,
}

impl Family {
    /// Families checked symbolically, without a `τ`.
    pub fn is_exact(self) -> bool {
        matches!(self, Family::PropMat)
    }
}

/// One checked instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub family: Family,
    pub instance: String,
    pub tau: Option<Tau>,
    pub lhs: Option<Estimate>,
    pub rhs: Option<Estimate>,
    /// `None` when the instance could not be evaluated.
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub wall_time: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl VerifyReport {
    fn new(family: Family, instance: String, tau: Option<Tau>, tolerance: f64) -> Self {
        VerifyReport {
            family,
            instance,
            tau,
            lhs: None,
            rhs: None,
            residual: None,
            tolerance,
            pass: false,
            wall_time: 0.0,
            error: None,
        }
    }

    fn finish(mut self, outcome: Result<(Option<Estimate>, Option<Estimate>, f64)>, start: Instant) -> Self {
        match outcome {
            Ok((lhs, rhs, residual)) => {
                self.lhs = lhs;
                self.rhs = rhs;
                self.residual = Some(residual);
                self.pass = residual <= self.tolerance;
            }
            Err(e) => self.error = Some(e.to_string()),
        }
        self.wall_time = start.elapsed().as_secs_f64();
        self
    }
}

/// Bounds and tolerance of a sweep.
#[derive(Clone, Copy, Debug)]
pub struct Sweep {
    pub family: Family,
    pub max_weight: u32,
    pub max_length: usize,
    pub tolerance: f64,
    pub fuel: usize,
}

/// `(value of lhs, value of rhs, |lhs - rhs|)`.
pub fn check_identity(ev: &Evaluator, id: &Identity) -> Result<(Estimate, Estimate, f64)> {
    let lhs = ev.eval_expression(&id.lhs)?;
    let rhs = ev.eval_expression(&id.rhs)?;
    Ok((lhs, rhs, (lhs.value - rhs.value).norm()))
}

/// Compares `I(k)`, evaluated directly as a regularized value, with its
/// reduction.
pub fn verify_reduction_with(ev: &Evaluator, k: &Index, tol: f64, fuel: usize) -> Result<VerifyReport> {
    let start = Instant::now();
    let (expr, _) = reduce(k, fuel)?;
    let lhs = ev.emzv_regularized(k)?;
    let rhs = ev.eval_expression(&expr)?;
    let residual = (lhs.value - rhs.value).norm();
    let report = VerifyReport::new(Family::Reduction, k.to_string(), Some(ev.tau()), tol);
    Ok(report.finish(Ok((Some(lhs), Some(rhs), residual)), start))
}

/// [`verify_reduction_with`] on a fresh evaluator with default settings.
pub fn verify_reduction(k: &Index, tau: Tau, tol: f64) -> Result<VerifyReport> {
    let ev = Evaluator::new(tau, Default::default())?;
    verify_reduction_with(&ev, k, tol, crate::reduction::DEFAULT_FUEL)
}

/// A single Kronecker-function check: name and the two sides.
pub type KroneckerCheck = (String, Complex64, Complex64);

/// `F` symmetries and the Fay identity at `count` seeded points, plus the
/// `f^(1)` q-series formula.
pub fn kronecker_checks(k: &Kronecker, count: usize, seed: u64) -> Result<Vec<KroneckerCheck>> {
    let tau = k.tau();
    let t = tau.value();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // points inside the fundamental cell, kept away from the lattice
    let point = |rng: &mut ChaCha8Rng| loop {
        let z = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.45..0.45) * tau.im());
        if tau.lattice_distance(z) > 0.1 {
            return z;
        }
    };
    let mut out = Vec::new();
    for j in 0..count {
        let (a1, a2, z1, z2) = loop {
            let p = (point(&mut rng), point(&mut rng), point(&mut rng), point(&mut rng));
            let regular = [p.0 + p.1, p.2 - p.3]
                .iter()
                .all(|&x| tau.lattice_distance(x) > 0.1);
            if regular {
                break p;
            }
        };
        let f = |a: Complex64, z: Complex64| k.kronecker_f(a, z);
        out.push((format!("antisymmetry#{j}"), f(-a1, -z1)?, -f(a1, z1)?));
        out.push((format!("periodicity#{j}"), f(a1, z1 + 1.0)?, f(a1, z1)?));
        out.push((
            format!("quasi-periodicity#{j}"),
            f(a1, z1 + t)?,
            (Complex64::new(0.0, -2.0 * PI) * a1).exp() * f(a1, z1)?,
        ));
        out.push((
            format!("fay#{j}"),
            f(a1, z1)? * f(a2, z2)?,
            f(a1 + a2, z1)? * f(a2, z2 - z1)? + f(a1 + a2, z2)? * f(a1, z1 - z2)?,
        ));
        let x = Complex64::new(z1.re.rem_euclid(1.0).clamp(0.05, 0.95), 0.2 * z1.im);
        out.push((format!("f1-series#{j}"), k.f_all(x, 1)?[1], f1_q_series(tau, x)?));
    }
    Ok(out)
}

/// `π cot(πz) + 4π Σ_{k>=1} sin(2πkz) q^k / (1 - q^k)`.
pub fn f1_q_series(tau: Tau, z: Complex64) -> Result<Complex64> {
    let q = tau.q();
    let mut sum = (PI * z).cos() / (PI * z).sin() * PI;
    let mut qk = Complex64::new(1.0, 0.0);
    for kk in 1..10_000 {
        qk *= q;
        let growth = (2.0 * PI * kk as f64 * z.im).abs().exp();
        let term = (2.0 * PI * kk as f64 * z).sin() * qk / (1.0 - qk) * (4.0 * PI);
        sum += term;
        if qk.norm() * growth < 1e-18 {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence(format!("q-series for f^(1) at {z}")))
}

fn nonempty(max_weight: u32, max_length: usize) -> Vec<Index> {
    indices_up_to(max_weight, max_length)
        .into_iter()
        .filter(|k| !k.is_empty())
        .collect()
}

/// Instances of a family, in a fixed order.
enum Instance {
    Identity(String, Result<Identity>),
    Reduction(Index),
    PropMat(u32, u32),
}

fn instances(s: &Sweep) -> Vec<Instance> {
    let ks = nonempty(s.max_weight, s.max_length);
    let id = |k: &Index, r: Result<Identity>| Instance::Identity(k.to_string(), r);
    match s.family {
        Family::Shuffle => {
            let mut out = Vec::new();
            for (i, v) in ks.iter().enumerate() {
                for w in &ks[i..] {
                    if v.len() + w.len() <= s.max_length && v.weight() + w.weight() <= s.max_weight as u64 {
                        out.push(Instance::Identity(format!("{v} x {w}"), Ok(shuffle_identity(v, w))));
                    }
                }
            }
            out
        }
        Family::Reflection => ks.iter().map(|k| id(k, Ok(reflection_identity(k)))).collect(),
        Family::Fay => ks
            .iter()
            .filter(|k| k.len() == 1 || k.last() != Some(1))
            .map(|k| id(k, fay_identity(k)))
            .collect(),
        Family::Parity => ks
            .iter()
            .filter(|k| k.len() >= 2 && k.parity() == Parity::Even)
            .map(|k| id(k, parity_split(k)))
            .collect(),
        Family::TrailingOnes => ks
            .iter()
            .filter(|k| k.trailing_ones() > 0 && !k.entries().iter().all(|&e| e == 1))
            .map(|k| id(k, trailing_ones(k)))
            .collect(),
        Family::Reduction => ks.into_iter().map(Instance::Reduction).collect(),
        Family::PropMat => {
            let mut out = Vec::new();
            for w in 0..=s.max_weight {
                for r in 0..=w {
                    if (r, w - r) != (1, 1) {
                        out.push(Instance::PropMat(r, w - r));
                    }
                }
            }
            out
        }
        Family::Kronecker => Vec::new(),
    }
}

/// Symbolic check that the closed length-2 formula and the Fay coefficient
/// map agree; the residual counts disagreeing monomials.
fn check_prop_mat(r: u32, s: u32) -> Result<f64> {
    let closed = prop_mat_identity(r, s)?;
    let general = fay_sum(&Index::from_entries(vec![r, s]))?;
    let diff: Expression = &closed.rhs - &general;
    Ok(diff.len() as f64)
}

/// Number of seeded points in the Kronecker family.
pub const KRONECKER_POINTS: usize = 20;
const KRONECKER_SEED: u64 = 0x5eed;

/// Runs a sweep. Numeric families need an evaluator; reports come back in
/// instance order whatever the completion order.
pub fn run_sweep(s: &Sweep, ev: Option<&Evaluator>) -> Result<Vec<VerifyReport>> {
    let need_ev = || {
        ev.ok_or_else(|| Error::Argument(format!("family {:?} needs a tau", s.family)))
    };
    if s.family == Family::Kronecker {
        let ev = need_ev()?;
        let start = Instant::now();
        let checks = kronecker_checks(ev.kronecker(), KRONECKER_POINTS, KRONECKER_SEED)?;
        let elapsed = start.elapsed().as_secs_f64() / checks.len().max(1) as f64;
        return Ok(checks
            .into_iter()
            .map(|(name, l, r)| {
                let mut rep = VerifyReport::new(Family::Kronecker, name, Some(ev.tau()), s.tolerance);
                let residual = (l - r).norm() / l.norm().max(1.0);
                rep.lhs = Some(Estimate::exact(l));
                rep.rhs = Some(Estimate::exact(r));
                rep.residual = Some(residual);
                rep.pass = residual <= s.tolerance;
                rep.wall_time = elapsed;
                rep
            })
            .collect());
    }
    let ev = if s.family.is_exact() { None } else { Some(need_ev()?) };
    let tau = ev.map(|e| e.tau());
    let reports = instances(s)
        .into_par_iter()
        .map(|inst| {
            let start = Instant::now();
            match inst {
                Instance::PropMat(r, q) => {
                    let rep = VerifyReport::new(Family::PropMat, format!("{r},{q}"), None, s.tolerance);
                    rep.finish(check_prop_mat(r, q).map(|d| (None, None, d)), start)
                }
                Instance::Reduction(k) => {
                    let ev = ev.expect("numeric family has an evaluator");
                    match verify_reduction_with(ev, &k, s.tolerance, s.fuel) {
                        Ok(rep) => rep,
                        Err(e) => VerifyReport::new(s.family, k.to_string(), tau, s.tolerance)
                            .finish(Err(e), start),
                    }
                }
                Instance::Identity(name, id) => {
                    let ev = ev.expect("numeric family has an evaluator");
                    let outcome = id
                        .and_then(|id| check_identity(ev, &id))
                        .map(|(l, r, d)| (Some(l), Some(r), d));
                    VerifyReport::new(s.family, name, tau, s.tolerance).finish(outcome, start)
                }
            }
        })
        .collect();
    Ok(reports)
}

pub fn write_reports<W: Write>(reports: &[VerifyReport], out: &mut W) -> Result<()> {
    for r in reports {
        serde_json::to_writer(&mut *out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// One line of a reduction table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub index: Index,
    pub terminal: bool,
    pub expression: Expression,
    pub trace_len: usize,
}

/// Reductions of every nonempty index within the bounds, in canonical
/// index order.
pub fn reduction_table(max_weight: u32, max_length: usize, fuel: usize) -> Result<Vec<TableRow>> {
    nonempty(max_weight, max_length)
        .into_par_iter()
        .map(|k| {
            let (expression, trace) = reduce(&k, fuel)?;
            Ok(TableRow {
                terminal: is_terminal(&k),
                index: k,
                expression,
                trace_len: trace.len(),
            })
        })
        .collect()
}

pub fn write_table<W: Write>(rows: &[TableRow], out: &mut W) -> Result<()> {
    for r in rows {
        serde_json::to_writer(&mut *out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index;

    #[test]
    fn prop_mat_sweep_is_exact() {
        let s = Sweep {
            family: Family::PropMat,
            max_weight: 6,
            max_length: 2,
            tolerance: 0.0,
            fuel: 100,
        };
        let reps = run_sweep(&s, None).unwrap();
        assert!(!reps.is_empty());
        assert!(reps.iter().all(|r| r.pass), "{reps:?}");
    }

    #[test]
    fn numeric_family_needs_tau() {
        let s = Sweep {
            family: Family::Fay,
            max_weight: 2,
            max_length: 2,
            tolerance: 1e-6,
            fuel: 100,
        };
        assert!(run_sweep(&s, None).is_err());
    }

    #[test]
    fn kronecker_suite() {
        let ev = Evaluator::new(Tau::imaginary(1.0).unwrap(), Default::default()).unwrap();
        for (name, l, r) in kronecker_checks(ev.kronecker(), 5, 1).unwrap() {
            assert!((l - r).norm() <= 1e-10 * l.norm().max(1.0), "{name}: {l} vs {r}");
        }
    }

    #[test]
    fn reduction_report() {
        let rep = verify_reduction(&index![2, 1], Tau::imaginary(1.0).unwrap(), 1e-6).unwrap();
        assert!(rep.pass, "{rep:?}");
        let line = serde_json::to_string(&rep).unwrap();
        let back: VerifyReport = serde_json::from_str(&line).unwrap();
        assert_eq!(back, rep);
    }

    #[test]
    fn table_rows() {
        let rows = reduction_table(2, 2, 1000).unwrap();
        let row = rows.iter().find(|r| r.index == index![0, 2]).unwrap();
        assert!(row.terminal);
        assert_eq!(row.trace_len, 0);
    }
}
