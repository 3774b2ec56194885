//! Exact sparse polynomials in `u_1, ..., u_r` with integer coefficients, and
//! quotients of them by products of the partial sums `u_m + ... + u_r`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Integer polynomial in a fixed number of variables.
///
/// Terms are keyed by exponent vector. The map's lexicographic order on
/// exponent vectors is the lex monomial order with `u_1 > u_2 > ...`, so the
/// last entry is the leading term.
#[derive(Clone, PartialEq, Eq)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigInt::one())
    }

    pub fn monomial(exps: Vec<u32>, c: BigInt) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    /// The variable `u_{i+1}` (zero-based `i`).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, BigInt::one())
    }

    /// `u_{m+1} + ... + u_r` for zero-based `m`.
    pub fn tail_sum(nvars: usize, m: usize) -> Self {
        let mut p = Self::zero(nvars);
        for i in m..nvars {
            let mut e = vec![0; nvars];
            e[i] = 1;
            p.add_term(e, BigInt::one());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: BigInt) {
        assert_eq!(exps.len(), self.nvars, "exponent vector length mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    /// `Some(d)` if every term has total degree `d`; the zero polynomial
    /// is homogeneous of any degree and reports `None`.
    pub fn homogeneous_degree(&self) -> Option<u64> {
        let mut degs = self
            .terms
            .keys()
            .map(|e| e.iter().map(|&x| x as u64).sum::<u64>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self, degree: u64) -> bool {
        self.is_zero() || self.homogeneous_degree() == Some(degree)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    /// Rename variables: `u_{i+1}` of `self` becomes `u_{map[i]+1}` in a ring
    /// with `nvars` variables.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.nvars);
        let mut out = Self::zero(nvars);
        for (e, v) in &self.terms {
            let mut ne = vec![0; nvars];
            for (i, &x) in e.iter().enumerate() {
                ne[map[i]] += x;
            }
            out.add_term(ne, v.clone());
        }
        out
    }

    fn leading(&self) -> Option<(&Vec<u32>, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient by `divisor`, failing with `NonPolynomial` if the
    /// division leaves a remainder.
    ///
    /// The divisor's leading coefficient must be a unit (here always ±1).
    pub fn div_exact(&self, divisor: &SparsePoly) -> Result<SparsePoly> {
        assert_eq!(self.nvars, divisor.nvars);
        let (lead_e, lead_c) = divisor
            .leading()
            .map(|(e, c)| (e.clone(), c.clone()))
            .ok_or_else(|| Error::NonPolynomial("division by zero polynomial".into()))?;
        if lead_c.abs() != BigInt::one() {
            return Err(Error::NonPolynomial(format!(
                "divisor leading coefficient {lead_c} is not a unit"
            )));
        }
        let mut rem = self.clone();
        let mut quot = SparsePoly::zero(self.nvars);
        while let Some((e, c)) = rem.leading().map(|(e, c)| (e.clone(), c.clone())) {
            if e.iter().zip(&lead_e).any(|(a, b)| a < b) {
                return Err(Error::NonPolynomial(format!(
                    "term with exponents {e:?} not divisible by {divisor}"
                )));
            }
            let qe: Vec<u32> = e.iter().zip(&lead_e).map(|(a, b)| a - b).collect();
            let qc = &c * &lead_c;
            let t = SparsePoly::monomial(qe, qc);
            rem = &rem - &(&t * divisor);
            quot = &quot + &t;
        }
        Ok(quot)
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        self + &(-rhs)
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        SparsePoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = SparsePoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            if n > 0 {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            let mag = c.abs();
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| {
                    if x == 1 {
                        format!("u{}", i + 1)
                    } else {
                        format!("u{}^{x}", i + 1)
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `numerator / Π_m (u_{m+1} + ... + u_r)^{den[m]}`.
#[derive(Clone, Debug)]
pub struct RatFunc {
    pub numerator: SparsePoly,
    pub denominator: BTreeMap<usize, u32>,
}

impl RatFunc {
    pub fn zero(nvars: usize) -> Self {
        Self::from_poly(SparsePoly::zero(nvars))
    }

    pub fn from_poly(p: SparsePoly) -> Self {
        RatFunc {
            numerator: p,
            denominator: BTreeMap::new(),
        }
    }

    /// `p * Π_m S_m^{e_m}` where `S_m = u_{m+1} + ... + u_r` and exponents may
    /// be negative.
    pub fn with_tail_sums(p: SparsePoly, factors: &[(usize, i64)]) -> Self {
        let nvars = p.nvars();
        let mut num = p;
        let mut den = BTreeMap::new();
        for &(m, e) in factors {
            if e >= 0 {
                num = &num * &SparsePoly::tail_sum(nvars, m).pow(e as u32);
            } else {
                *den.entry(m).or_insert(0) += (-e) as u32;
            }
        }
        RatFunc {
            numerator: num,
            denominator: den,
        }
    }

    pub fn nvars(&self) -> usize {
        self.numerator.nvars()
    }

    fn lift(&self, den: &BTreeMap<usize, u32>) -> SparsePoly {
        let nvars = self.nvars();
        let mut num = self.numerator.clone();
        for (&m, &e) in den {
            let have = self.denominator.get(&m).copied().unwrap_or(0);
            if e > have {
                num = &num * &SparsePoly::tail_sum(nvars, m).pow(e - have);
            }
        }
        num
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        let mut den = self.denominator.clone();
        for (&m, &e) in &other.denominator {
            let slot = den.entry(m).or_insert(0);
            *slot = (*slot).max(e);
        }
        let num = &self.lift(&den) + &other.lift(&den);
        RatFunc {
            numerator: num,
            denominator: den,
        }
    }

    pub fn mul_poly(&self, p: &SparsePoly) -> RatFunc {
        RatFunc {
            numerator: &self.numerator * p,
            denominator: self.denominator.clone(),
        }
    }

    /// Divide out the denominator exactly.
    pub fn into_poly(self) -> Result<SparsePoly> {
        let nvars = self.nvars();
        let mut num = self.numerator;
        for (m, e) in self.denominator {
            let s = SparsePoly::tail_sum(nvars, m);
            for _ in 0..e {
                num = num.div_exact(&s)?;
            }
        }
        Ok(num)
    }
}
