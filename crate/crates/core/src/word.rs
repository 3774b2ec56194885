//! The shuffle Hopf algebra on words over the letters `e_k`, `k >= 0`.
//!
//! Words are keyed directly by [`Index`]; a [`WordCombo`] is a finite
//! rational linear combination of them.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::index::Index;

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `(-1)^n` as a rational.
pub fn sign_pow(n: u64) -> Rational {
    if n % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Rational linear combination of words. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct WordCombo {
    terms: BTreeMap<Index, Rational>,
}

impl WordCombo {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The empty word with coefficient 1.
    pub fn one() -> Self {
        Self::word(Index::empty())
    }

    pub fn word(w: Index) -> Self {
        Self::term(w, Rational::one())
    }

    pub fn term(w: Index, c: Rational) -> Self {
        let mut out = Self::zero();
        out.add_term(w, c);
        out
    }

    pub fn add_term(&mut self, w: Index, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
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

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Index) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in canonical word order.
    pub fn iter(&self) -> impl Iterator<Item = (&Index, &Rational)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    /// Apply `f` to every word, keeping coefficients.
    pub fn map_words(&self, mut f: impl FnMut(&Index) -> Index) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(f(w), c.clone());
        }
        out
    }
}

impl Add for &WordCombo {
    type Output = WordCombo;
    fn add(self, rhs: &WordCombo) -> WordCombo {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Sub for &WordCombo {
    type Output = WordCombo;
    fn sub(self, rhs: &WordCombo) -> WordCombo {
        self + &(-rhs)
    }
}

impl Neg for &WordCombo {
    type Output = WordCombo;
    fn neg(self) -> WordCombo {
        self.scale(&-Rational::one())
    }
}

impl Mul for &WordCombo {
    type Output = WordCombo;
    /// Shuffle product.
    fn mul(self, rhs: &WordCombo) -> WordCombo {
        shuffle_combo(self, rhs)
    }
}

impl fmt::Display for WordCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
                write!(f, "{}*e({w})", c.abs())?;
            } else {
                write!(f, "{c}*e({w})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for WordCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Shuffle product of two words, as integer multiplicities.
fn shuffle_counts(v: &[u32], w: &[u32]) -> BTreeMap<Vec<u32>, u64> {
    // table[i][j] holds the shuffle of the suffixes v[i..] and w[j..]
    let (n, m) = (v.len(), w.len());
    let mut table: Vec<Vec<BTreeMap<Vec<u32>, u64>>> = vec![vec![BTreeMap::new(); m + 1]; n + 1];
    for i in (0..=n).rev() {
        for j in (0..=m).rev() {
            let mut cell = BTreeMap::new();
            if i == n {
                cell.insert(w[j..].to_vec(), 1);
            } else if j == m {
                cell.insert(v[i..].to_vec(), 1);
            } else {
                for (tail, c) in &table[i + 1][j] {
                    let mut word = Vec::with_capacity(tail.len() + 1);
                    word.push(v[i]);
                    word.extend_from_slice(tail);
                    *cell.entry(word).or_insert(0) += c;
                }
                for (tail, c) in &table[i][j + 1] {
                    let mut word = Vec::with_capacity(tail.len() + 1);
                    word.push(w[j]);
                    word.extend_from_slice(tail);
                    *cell.entry(word).or_insert(0) += c;
                }
            }
            table[i][j] = cell;
        }
    }
    std::mem::take(&mut table[0][0])
}

/// `v ⧢ w`: the sum over all interleavings that keep each word's letter order.
pub fn shuffle(v: &Index, w: &Index) -> WordCombo {
    let mut out = WordCombo::zero();
    for (word, c) in shuffle_counts(v.entries(), w.entries()) {
        out.add_term(Index::from_entries(word), rat(c as i64));
    }
    out
}

/// Bilinear extension of [`shuffle`].
pub fn shuffle_combo(a: &WordCombo, b: &WordCombo) -> WordCombo {
    let mut out = WordCombo::zero();
    for (v, cv) in a.iter() {
        for (w, cw) in b.iter() {
            let prod = cv * cw;
            for (word, c) in shuffle_counts(v.entries(), w.entries()) {
                out.add_term(Index::from_entries(word), &prod * rat(c as i64));
            }
        }
    }
    out
}

/// `S(e_{i_1} ... e_{i_n}) = (-1)^n e_{i_n} ... e_{i_1}`.
pub fn antipode(w: &Index) -> (Rational, Index) {
    (sign_pow(w.len() as u64), w.reversed())
}

/// Antipode extended linearly.
pub fn antipode_combo(a: &WordCombo) -> WordCombo {
    let mut out = WordCombo::zero();
    for (w, c) in a.iter() {
        let (s, r) = antipode(w);
        out.add_term(r, c * s);
    }
    out
}

/// Deconcatenation: all `len + 1` splits `(prefix, suffix)` in order.
pub fn coproduct(w: &Index) -> Vec<(Index, Index)> {
    (0..=w.len()).map(|j| (w.prefix(j), w.suffix(j))).collect()
}

/// `(-1)^{weight(k)}`, the factor relating an index to its reversal.
pub fn reflection_sign(k: &Index) -> Rational {
    sign_pow(k.weight())
}

/// `Σ_j w_{≤j} ⧢ S(w_{>j})`, which vanishes for every nonempty word.
pub fn antipode_split(w: &Index) -> WordCombo {
    let mut out = WordCombo::zero();
    for (p, s) in coproduct(w) {
        let (sign, rev) = antipode(&s);
        out = &out + &shuffle(&p, &rev).scale(&sign);
    }
    out
}

/// Shuffle power `w ⧢ w ⧢ ... ⧢ w` with `m` factors; `m = 0` gives the unit.
pub fn shuffle_power(w: &Index, m: usize) -> WordCombo {
    let base = WordCombo::word(w.clone());
    let mut acc = WordCombo::one();
    for _ in 0..m {
        acc = shuffle_combo(&acc, &base);
    }
    acc
}
