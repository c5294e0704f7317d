//! Formal differentiation and structural conjugation.
//!
//! Conjugate-paired variables are independent symbols: `d z1 / d zb1 = 0`.
//! Both passes memoize on node identity so shared subtrees are processed
//! once per call.

use std::collections::HashMap;

use super::{Expr, Node, Var};

/// Partial derivative of `e` with respect to `x`.
pub fn differentiate(e: &Expr, x: Var) -> Expr {
    let mut memo: HashMap<usize, Expr> = HashMap::new();
    d(e, x, &mut memo)
}

fn d(e: &Expr, x: Var, memo: &mut HashMap<usize, Expr>) -> Expr {
    if let Some(hit) = memo.get(&e.key()) {
        return hit.clone();
    }
    let result = match e.node() {
        Node::Const(_) => Expr::zero(),
        Node::Var(v) => {
            if *v == x {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Node::Sum(terms) => Expr::sum(terms.iter().map(|t| d(t, x, memo)).collect()),
        Node::Product(factors) => {
            let mut terms = Vec::with_capacity(factors.len());
            for (i, f) in factors.iter().enumerate() {
                let df = d(f, x, memo);
                if df.is_zero_const() {
                    continue;
                }
                let mut rest: Vec<Expr> = Vec::with_capacity(factors.len());
                rest.extend(factors[..i].iter().cloned());
                rest.push(df);
                rest.extend(factors[i + 1..].iter().cloned());
                terms.push(Expr::product(rest));
            }
            Expr::sum(terms)
        }
        Node::Pow(base, n) => {
            let db = d(base, x, memo);
            if db.is_zero_const() {
                Expr::zero()
            } else if *n == 1 {
                db
            } else {
                Expr::product(vec![Expr::int(*n as i64), Expr::pow(base.clone(), n - 1), db])
            }
        }
        Node::Neg(inner) => Expr::neg(d(inner, x, memo)),
    };
    memo.insert(e.key(), result.clone());
    result
}

/// Structural conjugation: every variable is swapped with its partner and
/// every constant is complex-conjugated. An involution.
pub fn conjugate(e: &Expr) -> Expr {
    let mut memo: HashMap<usize, Expr> = HashMap::new();
    cj(e, &mut memo)
}

fn cj(e: &Expr, memo: &mut HashMap<usize, Expr>) -> Expr {
    if let Some(hit) = memo.get(&e.key()) {
        return hit.clone();
    }
    let result = match e.node() {
        Node::Const(c) => Expr::constant(c.conj()),
        Node::Var(v) => Expr::var(v.partner()),
        Node::Sum(terms) => Expr::sum(terms.iter().map(|t| cj(t, memo)).collect()),
        Node::Product(factors) => Expr::product(factors.iter().map(|f| cj(f, memo)).collect()),
        Node::Pow(base, n) => Expr::pow(cj(base, memo), *n),
        Node::Neg(inner) => Expr::neg(cj(inner, memo)),
    };
    memo.insert(e.key(), result.clone());
    result
}
