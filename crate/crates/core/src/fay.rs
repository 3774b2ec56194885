//! The polynomials `u_1 ... u_r P_l(u_1, ..., u_r)` and their coefficients
//! `c<l|k>`, the structure constants of the general Fay relation.
//!
//! `P_l` is a sum of `r` terms. Term `i` (for `i = 0..r-1`) is
//!
//! ```text
//! u_1^{l_1-1} ... u_{i-1}^{l_{i-1}-1} (u_i + ... + u_r)^{l_i-1}
//!     (-u_{i+1} - ... - u_r)^{l_{i+1}-1} u_{i+1}^{l_{i+2}-1} ... u_{r-1}^{l_r-1}
//! ```
//!
//! where the factor `(u_i + ... + u_r)^{l_i-1}` is absent for `i = 0`. Single
//! terms are rational when some `l_j = 0`; only the full sum, multiplied by
//! `u_1 ... u_r`, is a polynomial.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use parking_lot::RwLock;

use crate::error::{Error, Result};
use crate::index::{compositions, Index};
use crate::poly::{RatFunc, SparsePoly};
use crate::word::Rational;

static P_MEMO: LazyLock<RwLock<HashMap<Index, Arc<SparsePoly>>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

static SUPPORT_MEMO: LazyLock<RwLock<HashMap<Index, Arc<Vec<(Index, Rational)>>>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

/// Term `i` of `u_1 ... u_r P_l` as a rational function.
fn p_term(l: &[u32], i: usize) -> RatFunc {
    let r = l.len();
    // exponents after absorbing u_1 ... u_r into the monomial factors
    let mut exps = vec![0u32; r];
    for v in 1..=r {
        exps[v - 1] = if v < i {
            l[v - 1]
        } else if v == i || v == r {
            1
        } else {
            l[v]
        };
    }
    let mut factors: Vec<(usize, i64)> = Vec::with_capacity(2);
    if i >= 1 {
        factors.push((i - 1, l[i - 1] as i64 - 1));
    }
    let e = l[i] as i64 - 1;
    factors.push((i, e));
    // (-S)^e = (-1)^e S^e, also for e = -1
    let sign = if e.rem_euclid(2) == 0 { 1 } else { -1 };
    RatFunc::with_tail_sums(SparsePoly::monomial(exps, BigInt::from(sign)), &factors)
}

fn compute_p_poly(l: &Index) -> Result<SparsePoly> {
    let r = l.len();
    let entries = l.entries();
    let mut acc = RatFunc::zero(r);
    for i in 0..r {
        acc = acc.add(&p_term(entries, i));
    }
    let poly = acc.into_poly().map_err(|e| match e {
        Error::NonPolynomial(msg) => Error::NonPolynomial(format!("p_poly({l}): {msg}")),
        other => other,
    })?;
    if !poly.is_homogeneous(l.weight()) {
        return Err(Error::NonPolynomial(format!(
            "p_poly({l}) is not homogeneous of degree {}",
            l.weight()
        )));
    }
    Ok(poly)
}

/// `u_1 ... u_r P_l` as an integer polynomial. Results are memoized.
pub fn p_poly(l: &Index) -> Result<Arc<SparsePoly>> {
    if l.is_empty() {
        return Err(Error::Argument("p_poly needs a nonempty index".into()));
    }
    if let Some(p) = P_MEMO.read().get(l) {
        return Ok(Arc::clone(p));
    }
    let p = Arc::new(compute_p_poly(l)?);
    P_MEMO.write().insert(l.clone(), Arc::clone(&p));
    Ok(p)
}

/// Coefficient of `u_1^{k_1} ... u_r^{k_r}` in `u_1 ... u_r P_l`.
pub fn c_coeff(l: &Index, k: &Index) -> Result<Rational> {
    if l.len() != k.len() {
        return Err(Error::Argument(format!(
            "c<{l}|{k}>: lengths {} and {} differ",
            l.len(),
            k.len()
        )));
    }
    if l.weight() != k.weight() {
        // only reachable for nonempty l; p_poly rejects the empty index
        if l.is_empty() {
            return Err(Error::Argument("c_coeff needs nonempty indices".into()));
        }
        return Ok(Rational::zero());
    }
    let p = p_poly(l)?;
    Ok(BigRational::from_integer(p.coeff(k.entries())))
}

/// Every `l` with `c<l|k> != 0`, in lexicographic order of `l`.
pub fn enumerate_support(k: &Index) -> Result<Arc<Vec<(Index, Rational)>>> {
    if k.is_empty() {
        return Err(Error::Argument("enumerate_support needs a nonempty index".into()));
    }
    if let Some(s) = SUPPORT_MEMO.read().get(k) {
        return Ok(Arc::clone(s));
    }
    let w = u32::try_from(k.weight())
        .map_err(|_| Error::Argument(format!("weight of {k} too large")))?;
    let mut out = Vec::new();
    for l in compositions(w, k.len()) {
        let c = c_coeff(&l, k)?;
        if !c.is_zero() {
            out.push((l, c));
        }
    }
    let out = Arc::new(out);
    SUPPORT_MEMO.write().insert(k.clone(), Arc::clone(&out));
    Ok(out)
}

/// Right-hand side of the one-step recursion for `u_1 ... u_r P_l`, `r >= 2`:
/// the shifted polynomial for `(l_2, ..., l_r)` plus the two correction terms.
pub fn p_poly_by_recursion(l: &Index) -> Result<SparsePoly> {
    let r = l.len();
    if r < 2 {
        return Err(Error::Argument("recursion needs length at least 2".into()));
    }
    let e = l.entries();
    let shifted = p_poly(&l.suffix(1))?.embed(r, &(1..r).collect::<Vec<_>>());
    let mut lead = vec![0; r];
    lead[0] = e[0];
    let head = &SparsePoly::monomial(lead, BigInt::one()) * &shifted;

    // M = u_2^{l_3} ... u_{r-1}^{l_r} * u_r
    let mut m_exps = vec![0u32; r];
    m_exps[1..r - 1].copy_from_slice(&e[2..r]);
    m_exps[r - 1] += 1;
    let m = SparsePoly::monomial(m_exps, BigInt::one());
    let u1 = SparsePoly::var(r, 0);
    let u1_pow = |n: u32| SparsePoly::monomial(
        {
            let mut x = vec![0; r];
            x[0] = n;
            x
        },
        BigInt::one(),
    );
    let sign = |ex: i64| BigInt::from(if ex.rem_euclid(2) == 0 { 1 } else { -1 });

    let e1 = e[0] as i64 - 1;
    let e2 = e[1] as i64 - 1;
    // u_1 S_1^{l_1-1} (-S_2)^{l_2-1}
    let a = RatFunc::with_tail_sums((&u1 * &m).scale(&sign(e2)), &[(0, e1), (1, e2)]);
    // -u_1^{l_1} (-S_2)^{l_2-1}
    let b = RatFunc::with_tail_sums((&u1_pow(e[0]) * &m).scale(&-sign(e2)), &[(1, e2)]);
    // (-S_1)^{l_1-1} u_1^{l_2}
    let c = RatFunc::with_tail_sums((&u1_pow(e[1]) * &m).scale(&sign(e1)), &[(0, e1)]);
    let corr = a.add(&b).add(&c).into_poly()?;
    Ok(&head + &corr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index;
    use crate::word::rat;

    #[test]
    fn small_polynomials() {
        assert_eq!(p_poly(&index![3]).unwrap().to_string(), "u1^3");
        assert_eq!(p_poly(&index![2]).unwrap().to_string(), "-u1^2");
        // the correction terms cancel but the i = 0 term leaves -1
        assert_eq!(p_poly(&index![0, 0]).unwrap().to_string(), "-1");
        assert!(p_poly(&index![2, 1]).unwrap().is_zero());
        assert!(p_poly(&Index::empty()).is_err());
    }

    #[test]
    fn length_one_coefficients() {
        for l in 0..8u32 {
            for k in 0..8u32 {
                let c = c_coeff(&index![l], &index![k]).unwrap();
                let want = if l == k {
                    if l % 2 == 1 { rat(1) } else { rat(-1) }
                } else {
                    rat(0)
                };
                assert_eq!(c, want, "c<{l}|{k}>");
            }
        }
    }

    #[test]
    fn zero_first_entry() {
        // c<(0,w)|(k1,k2)> = (-1)^{k2} needs k1, k2 >= 1; otherwise it vanishes
        for w in 2..8u32 {
            for k1 in 0..=w {
                let k2 = w - k1;
                if k2 == 1 {
                    continue;
                }
                let c = c_coeff(&index![0, w], &index![k1, k2]).unwrap();
                let want = if k1 == 0 || k2 == 0 {
                    rat(0)
                } else if k2 % 2 == 0 {
                    rat(1)
                } else {
                    rat(-1)
                };
                assert_eq!(c, want, "c<0,{w}|{k1},{k2}>");
            }
        }
    }

    #[test]
    fn c_coeff_vanishing_patterns() {
        assert_eq!(c_coeff(&index![2, 1], &index![1, 2]).unwrap(), rat(0));
        assert!(c_coeff(&index![2], &index![1, 1]).is_err());
    }

    #[test]
    fn supports() {
        assert_eq!(*enumerate_support(&index![3]).unwrap(), vec![(index![3], rat(1))]);
        assert_eq!(*enumerate_support(&index![0]).unwrap(), vec![(index![0], rat(-1))]);
        for (l, _) in enumerate_support(&index![2, 0, 3]).unwrap().iter() {
            assert_eq!(l.weight(), 5);
            assert_eq!(l.len(), 3);
        }
    }

    #[test]
    fn recursion_matches() {
        for r in 2..=4usize {
            for w in 0..=5u32 {
                for l in compositions(w, r) {
                    let direct = p_poly(&l).unwrap();
                    let rec = p_poly_by_recursion(&l).unwrap();
                    assert_eq!(*direct, rec, "l = {l}");
                }
            }
        }
    }
}
