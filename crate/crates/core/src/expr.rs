//! Formal polynomials in the symbols `I(k)`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::index::Index;
use crate::word::{Rational, WordCombo};

/// A product of atoms `I(k_1) I(k_2) ...`, kept sorted. The empty index is
/// never stored since `I(∅) = 1`; the empty monomial is the unit.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<Index>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut atoms: Vec<Index>) -> Self {
        atoms.retain(|a| !a.is_empty());
        atoms.sort();
        Monomial(atoms)
    }

    pub fn atoms(&self) -> &[Index] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> u64 {
        self.0.iter().map(Index::weight).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut atoms = self.0.clone();
        atoms.extend(other.0.iter().cloned());
        Monomial::new(atoms)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "I({a})")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Rational linear combination of monomials.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Expression {
    terms: BTreeMap<Monomial, Rational>,
}

impl Expression {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut e = Self::zero();
        e.add_term(Monomial::unit(), c);
        e
    }

    /// The single symbol `I(k)`; `I(∅)` is the unit.
    pub fn atom(k: Index) -> Self {
        Self::product(vec![k], Rational::one())
    }

    pub fn product(atoms: Vec<Index>, c: Rational) -> Self {
        let mut e = Self::zero();
        e.add_term(Monomial::new(atoms), c);
        e
    }

    /// Each word of the combination read as a single atom.
    pub fn from_words(w: &WordCombo) -> Self {
        let mut e = Self::zero();
        for (k, c) in w.iter() {
            e.add_term(Monomial::new(vec![k.clone()]), c.clone());
        }
        e
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Distinct atoms in canonical order.
    pub fn atoms(&self) -> Vec<Index> {
        let mut v: Vec<Index> = self
            .terms
            .keys()
            .flat_map(|m| m.0.iter().cloned())
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// `Some(w)` if every monomial has weight `w`; `None` for zero or mixed.
    pub fn homogeneous_weight(&self) -> Option<u64> {
        let mut ws = self.terms.keys().map(Monomial::weight);
        let first = ws.next()?;
        ws.all(|w| w == first).then_some(first)
    }

    pub fn is_homogeneous(&self, weight: u64) -> bool {
        self.is_zero() || self.homogeneous_weight() == Some(weight)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Expression {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Replace atoms for which `f` returns an expression; other atoms stay.
    pub fn substitute(&self, mut f: impl FnMut(&Index) -> Option<Expression>) -> Expression {
        let mut out = Expression::zero();
        for (m, c) in &self.terms {
            let mut prod = Expression::constant(c.clone());
            for a in &m.0 {
                let factor = f(a).unwrap_or_else(|| Expression::atom(a.clone()));
                prod = &prod * &factor;
            }
            out = &out + &prod;
        }
        out
    }

    /// Drop every monomial for which `pred` holds on some atom.
    pub fn drop_monomials_with(&self, mut pred: impl FnMut(&Index) -> bool) -> Expression {
        Expression {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| !m.0.iter().any(&mut pred))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }
}

impl Add for &Expression {
    type Output = Expression;
    fn add(self, rhs: &Expression) -> Expression {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Expression {
    type Output = Expression;
    fn sub(self, rhs: &Expression) -> Expression {
        self + &(-rhs)
    }
}

impl Neg for &Expression {
    type Output = Expression;
    fn neg(self) -> Expression {
        Expression {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Expression {
    type Output = Expression;
    fn mul(self, rhs: &Expression) -> Expression {
        let mut out = Expression::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for Expression {
    /// `c * I(a)*I(b)` terms joined by ` + `; the zero expression prints `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c} * {m}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    coef: String,
    atoms: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct ExprRepr {
    terms: Vec<TermRepr>,
}

impl Serialize for Expression {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let repr = ExprRepr {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermRepr {
                    coef: c.to_string(),
                    atoms: m.0.iter().map(|a| a.entries().to_vec()).collect(),
                })
                .collect(),
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Expression {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = ExprRepr::deserialize(d)?;
        let mut out = Expression::zero();
        for t in repr.terms {
            let c: Rational = t
                .coef
                .parse()
                .map_err(|_| D::Error::custom(format!("bad coefficient `{}`", t.coef)))?;
            let atoms = t
                .atoms
                .into_iter()
                .map(|a| {
                    Index::new(a.into_iter().map(u64::from).collect())
                        .map_err(|e| D::Error::custom(e.to_string()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            out.add_term(Monomial::new(atoms), c);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index;
    use crate::word::{rat, rat_frac};

    #[test]
    fn text_form() {
        let e = Expression::product(vec![index![1, 2], index![0]], rat_frac(-1, 2));
        assert_eq!(e.to_string(), "-1/2 * I(0)*I(1,2)");
        assert_eq!(Expression::atom(index![0, 2]).to_string(), "1 * I(0,2)");
        assert_eq!(Expression::zero().to_string(), "0");
        assert_eq!(Expression::atom(Index::empty()), Expression::one());
    }

    #[test]
    fn json_round_trip() {
        let e = &Expression::product(vec![index![1, 2], index![0]], rat_frac(-1, 2))
            + &Expression::constant(rat(3));
        let s = serde_json::to_string(&e).unwrap();
        assert_eq!(
            s,
            r#"{"terms":[{"coef":"3","atoms":[]},{"coef":"-1/2","atoms":[[0],[1,2]]}]}"#
        );
        let back: Expression = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn algebra() {
        let a = Expression::atom(index![2]);
        let b = Expression::atom(index![0]);
        let s = &a + &b;
        let sq = s.pow(2);
        assert_eq!(sq.coeff(&Monomial::new(vec![index![0], index![2]])), rat(2));
        assert!((&s - &s).is_zero());
        assert_eq!(a.homogeneous_weight(), Some(2));
        assert_eq!(s.homogeneous_weight(), None);

        let sub = sq.substitute(|k| (k == &index![0]).then(Expression::one));
        // (I(2) + 1)^2
        assert_eq!(sub.coeff(&Monomial::unit()), rat(1));
        assert_eq!(sub.coeff(&Monomial::new(vec![index![2]])), rat(2));
    }
}
