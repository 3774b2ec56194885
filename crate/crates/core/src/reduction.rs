//! Rewriting an arbitrary `I(k)` into a polynomial in admissible and
//! `{0,1}`-index atoms.
//!
//! Rules, tried in order on a non-terminal index `k = (k_1, ..., k_r)`:
//!
//! | rule | condition | identity |
//! |------|-----------|----------|
//! | reflect | `k_1` outside `{0,1}`, `k_r = 1` | [`reflection_identity`] |
//! | trailing ones | `k_r = 1` | [`trailing_ones`] |
//! | even parity | parity even | [`parity_split`] |
//! | odd parity | `k_1 = 1`, `k_r >= 2` | [`odd_parity_identity`] |
//! | prepend zero | `k_1 = 1`, `k_r = 0` | [`prepend_zero_identity`] |
//!
//! Every non-terminal atom on a right-hand side must be strictly smaller than
//! `k` under [`measure`]; otherwise reduction stops with `FuelExhausted`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::Expression;
use crate::index::{Index, Parity};
use crate::relations::{
    is_odd_singleton, odd_parity_identity, parity_split, prepend_zero_identity,
    reflection_identity, trailing_ones, Identity,
};

pub const DEFAULT_FUEL: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    Reflect,
    TrailingOnes,
    EvenParity,
    OddParity,
    PrependZero,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Reflect => "reflect",
            Rule::TrailingOnes => "trailing_ones",
            Rule::EvenParity => "even_parity",
            Rule::OddParity => "odd_parity",
            Rule::PrependZero => "prepend_zero",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub rule: Rule,
    pub input: Index,
    pub identity: Identity,
}

/// The identities applied during one reduction, one per distinct rewritten
/// index, in the order they were first applied.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub root: Index,
    pub steps: Vec<TraceStep>,
    #[serde(rename = "final")]
    pub final_expr: Expression,
}

impl ReductionTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Rewrite `I(root)` with the recorded identities until no recorded input
    /// remains.
    pub fn replay(&self) -> Expression {
        let rules: HashMap<&Index, &Expression> = self
            .steps
            .iter()
            .map(|s| (&s.input, &s.identity.rhs))
            .collect();
        let mut expr = Expression::atom(self.root.clone());
        // each pass strictly lowers the measure of every rewritten atom
        for _ in 0..=self.steps.len() {
            if !expr.atoms().iter().any(|a| rules.contains_key(a)) {
                break;
            }
            expr = expr.substitute(|a| rules.get(a).map(|e| (*e).clone()));
        }
        expr
    }

    pub fn replays(&self) -> bool {
        self.replay() == self.final_expr
    }
}

/// Terminal atoms: admissible or with all entries in `{0,1}`.
pub fn is_terminal(k: &Index) -> bool {
    k.is_admissible() || k.is_zero_one()
}

/// `(length, #entries outside {0,1}, #entries right of the last entry outside
/// {0,1}, #trailing ones)`, compared lexicographically.
pub fn measure(k: &Index) -> (usize, usize, usize, usize) {
    let e = k.entries();
    let big = e.iter().filter(|&&x| x > 1).count();
    let right = match e.iter().rposition(|&x| x > 1) {
        Some(p) => e.len() - 1 - p,
        None => e.len(),
    };
    (k.len(), big, right, k.trailing_ones())
}

/// Which rule fires on a non-terminal index.
pub fn select_rule(k: &Index) -> Rule {
    let first = k.first().unwrap_or(0);
    let last = k.last().unwrap_or(0);
    if last == 1 && first > 1 {
        Rule::Reflect
    } else if last == 1 {
        Rule::TrailingOnes
    } else if k.parity() == Parity::Even {
        Rule::EvenParity
    } else if last == 0 {
        Rule::PrependZero
    } else {
        Rule::OddParity
    }
}

fn apply_rule(rule: Rule, k: &Index) -> Result<Identity> {
    match rule {
        // reads I(k) = (-1)^{weight} I(reverse k)
        Rule::Reflect => Ok(reflection_identity(&k.reversed())),
        Rule::TrailingOnes => trailing_ones(k),
        Rule::EvenParity => parity_split(k),
        Rule::OddParity => odd_parity_identity(k),
        Rule::PrependZero => prepend_zero_identity(k),
    }
}

struct Reducer {
    fuel: usize,
    used: usize,
    memo: HashMap<Index, Expression>,
    steps: Vec<TraceStep>,
    root: Index,
}

impl Reducer {
    fn exhausted(&self, reason: String) -> Error {
        Error::FuelExhausted {
            reason,
            trace: Box::new(ReductionTrace {
                root: self.root.clone(),
                steps: self.steps.clone(),
                final_expr: Expression::zero(),
            }),
        }
    }

    fn reduce_atom(&mut self, k: &Index) -> Result<Expression> {
        if is_terminal(k) {
            return Ok(Expression::atom(k.clone()));
        }
        if let Some(e) = self.memo.get(k) {
            return Ok(e.clone());
        }
        if self.used >= self.fuel {
            return Err(self.exhausted(format!("fuel {} spent at {k}", self.fuel)));
        }
        self.used += 1;
        let rule = select_rule(k);
        let identity = apply_rule(rule, k)?;
        debug_assert_eq!(identity.lhs, Expression::atom(k.clone()));
        let mk = measure(k);
        let pending: Vec<Index> = identity
            .rhs
            .atoms()
            .into_iter()
            .filter(|a| !is_terminal(a))
            .collect();
        for a in &pending {
            if measure(a) >= mk {
                let reason = format!(
                    "rule {rule} on {k} produced {a} with measure {:?} >= {:?}",
                    measure(a),
                    mk
                );
                self.steps.push(TraceStep {
                    rule,
                    input: k.clone(),
                    identity,
                });
                return Err(self.exhausted(reason));
            }
        }
        let rhs = identity.rhs.clone();
        self.steps.push(TraceStep {
            rule,
            input: k.clone(),
            identity,
        });
        // canonical atom order visits shorter atoms first
        let mut reduced = HashMap::new();
        for a in pending {
            let e = self.reduce_atom(&a)?;
            reduced.insert(a, e);
        }
        let out = rhs.substitute(|a| reduced.get(a).cloned());
        self.memo.insert(k.clone(), out.clone());
        Ok(out)
    }
}

/// Reduce `I(k)` to admissible and `{0,1}` atoms, spending at most `fuel`
/// rule applications.
pub fn reduce(k: &Index, fuel: usize) -> Result<(Expression, ReductionTrace)> {
    if fuel == 0 {
        return Err(Error::Argument("fuel must be positive".into()));
    }
    let mut r = Reducer {
        fuel,
        used: 0,
        memo: HashMap::new(),
        steps: Vec::new(),
        root: k.clone(),
    };
    let expr = r.reduce_atom(k)?;
    let trace = ReductionTrace {
        root: k.clone(),
        steps: r.steps,
        final_expr: expr.clone(),
    };
    Ok((expr, trace))
}

/// Optional post-pass on `{0,1}` atoms: `I(0) = 1`, `I(1) = 0`, and
/// even-parity atoms are split into shorter products.
pub fn simplify_zero_one(e: &Expression) -> Expression {
    let zero = Index::from_entries(vec![0]);
    let mut cur = e.clone();
    loop {
        let next = cur
            .drop_monomials_with(|a| a.is_zero_one() && is_odd_singleton(a))
            .substitute(|a| {
                if !a.is_zero_one() {
                    None
                } else if a == &zero {
                    Some(Expression::one())
                } else if a.len() >= 2 && a.parity() == Parity::Even {
                    parity_split(a).ok().map(|id| id.rhs)
                } else {
                    None
                }
            });
        if next == cur {
            return cur;
        }
        cur = next;
    }
}
