//! Exact identities among the symbols `I(k)`.
//!
//! Every constructor returns an [`Identity`] asserting `lhs = rhs`. Identities
//! are emitted verbatim; no atom normalization happens here.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::Expression;
use crate::fay::enumerate_support;
use crate::index::{Index, Parity};
use crate::word::{rat, rat_frac, reflection_sign, shuffle, shuffle_combo, sign_pow, Rational, WordCombo};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Shuffle,
    Reflection,
    Fay,
    PropMat,
    ParitySplit,
    TrailingOnes,
    ReductionStep,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Shuffle => "shuffle",
            Provenance::Reflection => "reflection",
            Provenance::Fay => "fay",
            Provenance::PropMat => "prop_mat",
            Provenance::ParitySplit => "parity_split",
            Provenance::TrailingOnes => "trailing_ones",
            Provenance::ReductionStep => "reduction_step",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Identity {
    pub lhs: Expression,
    pub rhs: Expression,
    pub provenance: Provenance,
}

impl Identity {
    pub fn new(lhs: Expression, rhs: Expression, provenance: Provenance) -> Self {
        Identity {
            lhs,
            rhs,
            provenance,
        }
    }

    /// `lhs - rhs`, the object asserted to vanish.
    pub fn residual(&self) -> Expression {
        &self.lhs - &self.rhs
    }

    pub fn is_homogeneous(&self) -> bool {
        let r = self.residual();
        r.is_zero() || r.homogeneous_weight().is_some()
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {} = {}", self.provenance, self.lhs, self.rhs)
    }
}

/// `σ_i(k) = (-1)^{k_{i+1} + ... + k_r + r - i}`, the sign of the `i`-th
/// split in the antipode identity (`i` counts prefix length).
pub fn split_sign(k: &Index, i: usize) -> Rational {
    let tail: u64 = k.entries()[i..].iter().map(|&e| e as u64).sum();
    sign_pow(tail + (k.len() - i) as u64)
}

/// `I(v) I(w) = Σ I(u)` over the shuffles `u` of `v` and `w`.
pub fn shuffle_identity(v: &Index, w: &Index) -> Identity {
    Identity::new(
        Expression::product(vec![v.clone(), w.clone()], Rational::one()),
        Expression::from_words(&shuffle(v, w)),
        Provenance::Shuffle,
    )
}

/// `I(reverse k) = (-1)^{weight k} I(k)`.
pub fn reflection_identity(k: &Index) -> Identity {
    Identity::new(
        Expression::atom(k.reversed()),
        Expression::atom(k.clone()).scale(&reflection_sign(k)),
        Provenance::Reflection,
    )
}

/// The general Fay relation `I(k) = -Σ_l c<l|k> I(l)`, valid for length 1 or
/// last entry different from 1.
pub fn fay_identity(k: &Index) -> Result<Identity> {
    let r = k.len();
    if r == 0 {
        return Err(Error::Precondition("fay_identity needs a nonempty index".into()));
    }
    if r > 1 && k.last() == Some(1) {
        return Err(Error::Precondition(format!(
            "fay_identity({k}): last entry must differ from 1"
        )));
    }
    // The zeta-value part carries δ_{1,k_1} ... δ_{1,k_{i-1}} δ_{1,k_r}; the
    // precondition makes every term vanish.
    let e = k.entries();
    let zeta_terms: Vec<usize> = (2..=r)
        .filter(|&i| e[..i - 1].iter().all(|&x| x == 1) && e[r - 1] == 1)
        .collect();
    if !zeta_terms.is_empty() {
        return Err(Error::Precondition(format!(
            "fay_identity({k}): unexpected zeta terms at {zeta_terms:?}"
        )));
    }
    Ok(Identity::new(Expression::atom(k.clone()), fay_sum(k)?, Provenance::Fay))
}

/// `-Σ_l c<l|k> I(l)` for any nonempty `k`, without the precondition.
pub fn fay_sum(k: &Index) -> Result<Expression> {
    let mut rhs = Expression::zero();
    for (l, c) in enumerate_support(k)?.iter() {
        rhs = &rhs - &Expression::atom(l.clone()).scale(c);
    }
    Ok(rhs)
}

/// Binomial coefficient with `C(-1, -1) = 1` and zero outside `0 <= b <= a`.
pub fn binom_ext(a: i64, b: i64) -> BigInt {
    if a == -1 && b == -1 {
        return BigInt::one();
    }
    if b < 0 || a < b {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for j in 0..b {
        acc = acc * BigInt::from(a - j) / BigInt::from(j + 1);
    }
    acc
}

/// The closed-form length-2 Fay relation for `I(r, s)`, `(r, s) != (1, 1)`.
pub fn prop_mat_identity(r: u32, s: u32) -> Result<Identity> {
    if (r, s) == (1, 1) {
        return Err(Error::Precondition("prop_mat_identity excludes (1,1)".into()));
    }
    let (ri, si) = (r as i64, s as i64);
    let pair = |a: u32, b: u32| Index::from_entries(vec![a, b]);
    let mut rhs = Expression::atom(pair(0, r + s)).scale(&-sign_pow(s as u64));
    for n in 0..=s {
        let c = sign_pow((s - n) as u64) * BigRational::from_integer(binom_ext(ri - 1 + n as i64, ri - 1));
        rhs = &rhs + &Expression::atom(pair(r + n, s - n)).scale(&c);
    }
    for n in 0..=r {
        let c = sign_pow((s + n) as u64) * BigRational::from_integer(binom_ext(si - 1 + n as i64, si - 1));
        rhs = &rhs + &Expression::atom(pair(s + n, r - n)).scale(&c);
    }
    Ok(Identity::new(
        Expression::atom(pair(r, s)),
        rhs,
        Provenance::PropMat,
    ))
}

/// The antipode split of an even-parity index into products of shorter ones:
/// `I(k) = -1/2 Σ_{i=1}^{r-1} σ_i(k) I(k_{≤i}) I(k_{>i})`.
pub fn parity_split(k: &Index) -> Result<Identity> {
    if k.parity() != Parity::Even {
        return Err(Error::Precondition(format!("parity_split({k}): odd parity")));
    }
    if k.len() < 2 {
        return Err(Error::Degenerate(format!(
            "parity_split({k}): length {} has no proper splits",
            k.len()
        )));
    }
    let half = rat_frac(-1, 2);
    let mut rhs = Expression::zero();
    for i in 1..k.len() {
        let c = &half * split_sign(k, i);
        rhs = &rhs + &Expression::product(vec![k.prefix(i), k.suffix(i)], c);
    }
    Ok(Identity::new(
        Expression::atom(k.clone()),
        rhs,
        Provenance::ParitySplit,
    ))
}

/// Move `m` trailing ones into the body:
/// `I(k_1..k_n, 1^m) = ((-1)^m / m!) I((1^{⧢m} ⧢ (k_1..k_{n-1})), k_n)`.
pub fn trailing_ones(k: &Index) -> Result<Identity> {
    let m = k.trailing_ones();
    if m == 0 {
        return Err(Error::Precondition(format!("trailing_ones({k}): no trailing 1")));
    }
    if m == k.len() {
        return Err(Error::Precondition(format!("trailing_ones({k}): all entries are 1")));
    }
    let n = k.len() - m;
    let kn = k.entries()[n - 1];
    let ones = Index::from_entries(vec![1; m]);
    // 1 ⧢ 1 ⧢ ... ⧢ 1 with m factors is m! (1,...,1)
    let mut fact = BigInt::one();
    for j in 2..=m {
        fact *= BigInt::from(j);
    }
    let ones_pow = WordCombo::term(ones, BigRational::from_integer(fact.clone()));
    let body = shuffle_combo(&ones_pow, &WordCombo::word(k.prefix(n - 1)));
    let words = body.map_words(|w| w.push(kn));
    let coef = sign_pow(m as u64) / BigRational::from_integer(fact);
    Ok(Identity::new(
        Expression::atom(k.clone()),
        Expression::from_words(&words).scale(&coef),
        Provenance::TrailingOnes,
    ))
}

/// `I(v) I(w)` for use when assembling product sums.
pub(crate) fn pair_product(v: Index, w: Index, c: Rational) -> Expression {
    Expression::product(vec![v, w], c)
}

/// `true` for a single odd entry, whose value vanishes by reflection.
pub fn is_odd_singleton(k: &Index) -> bool {
    k.len() == 1 && k.entries()[0] % 2 == 1
}

/// Identity for odd-parity `k = (1, k_2, ..., k_r)` with `k_r` outside
/// `{0, 1}`, assembled from the Fay relations for `k` and for
/// `k' = (1, k_2, ..., k_{r-1}, 0, k_r)` and the antipode splits of `k'` and of
/// every `(s, 0)` in the support. `I(0) = 1` is substituted and products
/// containing an odd single-entry factor are dropped.
pub fn odd_parity_identity(k: &Index) -> Result<Identity> {
    let r = k.len();
    if r < 2 || k.first() != Some(1) || k.parity() != Parity::Odd {
        return Err(Error::Precondition(format!(
            "odd_parity_identity({k}): needs odd parity, length >= 2 and first entry 1"
        )));
    }
    let kr = k.last().unwrap_or(0);
    if kr <= 1 {
        return Err(Error::Precondition(format!(
            "odd_parity_identity({k}): last entry must lie outside {{0,1}}"
        )));
    }
    let kp = k.prefix(r - 1).push(0).push(kr);
    let mut rhs = Expression::zero();
    for i in 1..=r {
        let c = -split_sign(&kp, i);
        rhs = &rhs + &pair_product(kp.prefix(i), kp.suffix(i), c);
    }
    for (s, cs) in enumerate_support(k)?.iter() {
        let s0 = s.push(0);
        for i in 1..r {
            let c = -(cs * split_sign(&s0, i));
            rhs = &rhs + &pair_product(s.prefix(i), s0.suffix(i), c);
        }
    }
    let rhs = rhs
        .substitute(|a| (a == &Index::from_entries(vec![0])).then(Expression::one))
        .drop_monomials_with(is_odd_singleton);
    Ok(Identity::new(
        Expression::atom(k.clone()),
        rhs,
        Provenance::ReductionStep,
    ))
}

/// Identity for odd-parity `k = (1, ..., 0)`: with `m = (0, k)`,
/// `I(k) = 2 I(m) + Σ_{i=2}^{r} σ_i(m) I(m_{≤i}) I(m_{>i})`, where `m` is
/// admissible and the products involve shorter indices.
pub fn prepend_zero_identity(k: &Index) -> Result<Identity> {
    let r = k.len();
    if r < 2 || k.first() != Some(1) || k.last() != Some(0) || k.parity() != Parity::Odd {
        return Err(Error::Precondition(format!(
            "prepend_zero_identity({k}): needs odd parity, first entry 1 and last entry 0"
        )));
    }
    let m = k.prepend(0);
    let mut rhs = Expression::atom(m.clone()).scale(&rat(2));
    for i in 2..=r {
        rhs = &rhs + &pair_product(m.prefix(i), m.suffix(i), split_sign(&m, i));
    }
    let rhs = rhs.drop_monomials_with(is_odd_singleton);
    Ok(Identity::new(
        Expression::atom(k.clone()),
        rhs,
        Provenance::ReductionStep,
    ))
}
