//! Exact and floating evaluation with per-node caching.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use super::sample::Point;
use super::{Expr, Node, Var};
use crate::scalar::{GaussRat, MpComplex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("no value assigned to variable {0}")]
    Missing(&'static str),
    #[error("division by zero while evaluating {0}")]
    DivisionByZero(String),
}

/// Exact evaluation at a rational point.
pub fn eval_exact(e: &Expr, p: &Point) -> Result<GaussRat, EvalError> {
    let mut memo: HashMap<usize, GaussRat> = HashMap::new();
    go_exact(e, p, &mut memo)
}

fn go_exact(
    e: &Expr,
    p: &Point,
    memo: &mut HashMap<usize, GaussRat>,
) -> Result<GaussRat, EvalError> {
    if let Some(hit) = memo.get(&e.key()) {
        return Ok(hit.clone());
    }
    let result = match e.node() {
        Node::Const(c) => c.clone(),
        Node::Var(v) => p.get(*v).ok_or(EvalError::Missing(v.name()))?.clone(),
        Node::Sum(terms) => {
            let mut acc = GaussRat::zero();
            for t in terms {
                acc = &acc + &go_exact(t, p, memo)?;
            }
            acc
        }
        Node::Product(factors) => {
            // every factor is evaluated so an undefined factor surfaces even
            // when an earlier factor is zero
            let mut acc = GaussRat::one();
            for f in factors {
                acc = &acc * &go_exact(f, p, memo)?;
            }
            acc
        }
        Node::Pow(base, n) => {
            let b = go_exact(base, p, memo)?;
            b.pow(*n)
                .ok_or_else(|| EvalError::DivisionByZero(format!("{base}")))?
        }
        Node::Neg(inner) => -&go_exact(inner, p, memo)?,
    };
    memo.insert(e.key(), result.clone());
    Ok(result)
}

/// Floating-point variable assignment for float-mode evaluation.
#[derive(Clone, Debug, Default)]
pub struct FloatAssignment {
    pub map: BTreeMap<Var, MpComplex>,
}

impl FloatAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, v: Var, value: MpComplex) {
        self.map.insert(v, value);
    }

    pub fn get(&self, v: Var) -> Option<&MpComplex> {
        self.map.get(&v)
    }
}

/// Floating evaluation at the given precision (significant bits).
pub fn eval_float(e: &Expr, p: &FloatAssignment, prec: u32) -> Result<MpComplex, EvalError> {
    let mut memo: HashMap<usize, MpComplex> = HashMap::new();
    go_float(e, p, prec, &mut memo)
}

fn go_float(
    e: &Expr,
    p: &FloatAssignment,
    prec: u32,
    memo: &mut HashMap<usize, MpComplex>,
) -> Result<MpComplex, EvalError> {
    if let Some(hit) = memo.get(&e.key()) {
        return Ok(hit.clone());
    }
    let result = match e.node() {
        Node::Const(c) => c.to_mp(prec),
        Node::Var(v) => p.get(*v).ok_or(EvalError::Missing(v.name()))?.clone(),
        Node::Sum(terms) => {
            let mut acc = MpComplex::zero();
            for t in terms {
                acc = acc.add(&go_float(t, p, prec, memo)?, prec);
            }
            acc
        }
        Node::Product(factors) => {
            let mut acc = MpComplex::from_int(1);
            for f in factors {
                acc = acc.mul(&go_float(f, p, prec, memo)?, prec);
            }
            acc
        }
        Node::Pow(base, n) => {
            let b = go_float(base, p, prec, memo)?;
            b.pow(*n, prec)
                .ok_or_else(|| EvalError::DivisionByZero(format!("{base}")))?
        }
        Node::Neg(inner) => go_float(inner, p, prec, memo)?.neg(),
    };
    memo.insert(e.key(), result.clone());
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::DEFAULT_FLOAT_PREC;

    #[test]
    fn evaluates_product_of_conjugates() {
        // z1*zb1 at z1 = 1+i gives |z1|^2 = 2
        let e = Expr::mul(Expr::var(Var::Z1), Expr::var(Var::Zb1));
        let mut p = Point::new();
        p.set_conj_pair(Var::Z1, GaussRat::from_pair(1, 1, 1, 1));
        let v = eval_exact(&e, &p).unwrap();
        assert_eq!(v, GaussRat::from_int(2));
    }

    #[test]
    fn division_by_zero_reports_subtree() {
        // 1/(1 - z2*zb2) at z2 = 1
        let den = Expr::sub(Expr::one(), Expr::mul(Expr::var(Var::Z2), Expr::var(Var::Zb2)));
        let e = Expr::inv(den);
        let mut p = Point::new();
        p.set_conj_pair(Var::Z2, GaussRat::from_int(1));
        match eval_exact(&e, &p) {
            Err(EvalError::DivisionByZero(s)) => assert!(s.contains("z2"), "{s}"),
            other => panic!("expected division by zero, got {other:?}"),
        }
    }

    #[test]
    fn missing_assignment_reported() {
        let e = Expr::var(Var::V);
        let p = Point::new();
        assert_eq!(eval_exact(&e, &p), Err(EvalError::Missing("v")));
    }

    #[test]
    fn float_matches_exact_on_rationals() {
        let e = Expr::add(
            Expr::pow(Expr::var(Var::Z1), 3),
            Expr::inv(Expr::sub(Expr::var(Var::Z2), Expr::int(2))),
        );
        let mut p = Point::new();
        p.set_conj_pair(Var::Z1, GaussRat::from_pair(1, 3, -2, 5));
        p.set_conj_pair(Var::Z2, GaussRat::from_pair(1, 7, 1, 2));
        let exact = eval_exact(&e, &p).unwrap();
        let fa = p.to_float(DEFAULT_FLOAT_PREC);
        let float = eval_float(&e, &fa, DEFAULT_FLOAT_PREC).unwrap();
        assert!(float.approx_eq(&exact.to_mp(DEFAULT_FLOAT_PREC), 1e-20, DEFAULT_FLOAT_PREC));
    }
}
