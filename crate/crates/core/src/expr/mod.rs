//! Immutable expression trees over a fixed set of paired-conjugate variables.
//!
//! Trees are reference-counted and shared aggressively: differentiation,
//! conjugation and substitution all memoize on node identity, and
//! evaluation caches per node, so the engine works on DAGs rather than
//! exponentially unrolled trees.
//!
//! Construction goes through smart constructors which perform basic
//! normalization only: flattening, constant folding, zero/one elimination
//! and sign extraction. No distribution and no rational-function
//! canonicalization happens here; identity checking is delegated to
//! exact evaluation at sampled points (see [`sample`]).

mod diff;
mod eval;
mod parse;
mod print;
pub mod sample;
mod subst;

pub use diff::{conjugate, differentiate};
pub use eval::{eval_exact, eval_float, EvalError, FloatAssignment};
pub use parse::{parse_expr, ParseError};
pub use sample::{
    is_zero_on_samples, nonzero_on_samples, sample_point, zero_test_with, Point, SampleError,
    SampleSpec, ZeroTest, DEFAULT_SEED,
};
pub use subst::substitute;

use std::collections::HashSet;
use std::fmt;
use std::rc::Rc;

use crate::scalar::GaussRat;

/// The variable set. Conjugation pairs `z1<->zb1`, `z2<->zb2`, `w<->wb`,
/// `c<->cb`, `e<->eb`; `v` and `t` are real. `E`/`Eb` are internal formal
/// parameters for exponential flows and are not part of the surface DSL.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Var {
    Z1,
    Z2,
    Zb1,
    Zb2,
    V,
    W,
    Wb,
    C,
    Cb,
    T,
    E,
    Eb,
}

impl Var {
    pub const ALL: [Var; 12] = [
        Var::Z1,
        Var::Z2,
        Var::Zb1,
        Var::Zb2,
        Var::V,
        Var::W,
        Var::Wb,
        Var::C,
        Var::Cb,
        Var::T,
        Var::E,
        Var::Eb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Var::Z1 => "z1",
            Var::Z2 => "z2",
            Var::Zb1 => "zb1",
            Var::Zb2 => "zb2",
            Var::V => "v",
            Var::W => "w",
            Var::Wb => "wb",
            Var::C => "c",
            Var::Cb => "cb",
            Var::T => "t",
            Var::E => "E",
            Var::Eb => "Eb",
        }
    }

    /// Conjugation partner; an involution. Real variables are self-paired.
    pub fn partner(self) -> Var {
        match self {
            Var::Z1 => Var::Zb1,
            Var::Zb1 => Var::Z1,
            Var::Z2 => Var::Zb2,
            Var::Zb2 => Var::Z2,
            Var::V => Var::V,
            Var::W => Var::Wb,
            Var::Wb => Var::W,
            Var::C => Var::Cb,
            Var::Cb => Var::C,
            Var::T => Var::T,
            Var::E => Var::Eb,
            Var::Eb => Var::E,
        }
    }

    pub fn is_real(self) -> bool {
        self == self.partner()
    }

    /// Identifiers accepted by the surface DSL.
    pub fn from_dsl_name(s: &str) -> Option<Var> {
        match s {
            "z1" => Some(Var::Z1),
            "z2" => Some(Var::Z2),
            "zb1" => Some(Var::Zb1),
            "zb2" => Some(Var::Zb2),
            "v" => Some(Var::V),
            "w" => Some(Var::W),
            "wb" => Some(Var::Wb),
            "c" => Some(Var::C),
            "cb" => Some(Var::Cb),
            "t" => Some(Var::T),
            _ => None,
        }
    }
}

#[derive(Debug)]
pub enum Node {
    Const(GaussRat),
    Var(Var),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    /// Integer power with nonzero exponent; negative exponents encode division.
    Pow(Expr, i32),
    Neg(Expr),
}

/// Shared immutable expression.
#[derive(Clone)]
pub struct Expr(Rc<Node>);

impl Expr {
    pub fn node(&self) -> &Node {
        &self.0
    }

    /// Node identity, used as memoization key. Only valid while the tree is alive.
    pub(crate) fn key(&self) -> usize {
        Rc::as_ptr(&self.0) as usize
    }

    pub fn constant(c: GaussRat) -> Expr {
        Expr(Rc::new(Node::Const(c)))
    }

    pub fn int(n: i64) -> Expr {
        Expr::constant(GaussRat::from_int(n))
    }

    pub fn rational(num: i64, den: i64) -> Expr {
        Expr::constant(GaussRat::from_pair(num, den, 0, 1))
    }

    pub fn i() -> Expr {
        Expr::constant(GaussRat::i())
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn var(v: Var) -> Expr {
        Expr(Rc::new(Node::Var(v)))
    }

    pub fn is_const(&self) -> Option<&GaussRat> {
        match self.node() {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero_const(&self) -> bool {
        matches!(self.node(), Node::Const(c) if c.is_zero())
    }

    pub fn is_one_const(&self) -> bool {
        matches!(self.node(), Node::Const(c) if c.is_one())
    }

    /// n-ary sum with flattening, constant folding and zero elimination.
    /// `Neg` distributes over sums at construction, so `Sum` children are
    /// never `Neg(Sum(..))` nodes.
    pub fn sum(terms: Vec<Expr>) -> Expr {
        fn push_term(e: &Expr, acc: &mut GaussRat, out: &mut Vec<Expr>) {
            match e.node() {
                Node::Const(c) => *acc = &*acc + c,
                Node::Sum(children) => {
                    for ch in children {
                        push_term(ch, acc, out);
                    }
                }
                _ => out.push(e.clone()),
            }
        }
        let mut acc = GaussRat::zero();
        let mut out: Vec<Expr> = Vec::with_capacity(terms.len());
        for t in &terms {
            push_term(t, &mut acc, &mut out);
        }
        if !acc.is_zero() {
            out.insert(0, Expr::constant(acc));
        }
        match out.len() {
            0 => Expr::zero(),
            1 => out.pop().unwrap(),
            _ => Expr(Rc::new(Node::Sum(out))),
        }
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::sum(vec![a, b])
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::sum(vec![a, Expr::neg(b)])
    }

    /// n-ary product with flattening, constant/sign folding, zero annihilation
    /// and one elimination. Negations fold into the constant prefactor, so
    /// `Product` children are never `Neg` nodes and any constant sits first.
    /// A lone `-1` prefactor over a single factor becomes a `Neg` node.
    pub fn product(factors: Vec<Expr>) -> Expr {
        let mut acc = GaussRat::one();
        let mut out: Vec<Expr> = Vec::with_capacity(factors.len());
        fn push(e: &Expr, acc: &mut GaussRat, out: &mut Vec<Expr>) {
            match e.node() {
                Node::Const(c) => *acc = &*acc * c,
                Node::Neg(inner) => {
                    *acc = -&*acc;
                    push(inner, acc, out);
                }
                Node::Product(children) => {
                    for ch in children {
                        push(ch, acc, out);
                    }
                }
                _ => out.push(e.clone()),
            }
        }
        for f in &factors {
            push(f, &mut acc, &mut out);
        }
        if acc.is_zero() {
            return Expr::zero();
        }
        let minus_one = GaussRat::from_int(-1);
        if acc == minus_one && out.len() == 1 {
            return Expr::neg(out.pop().unwrap());
        }
        if !acc.is_one() {
            out.insert(0, Expr::constant(acc));
        }
        match out.len() {
            0 => Expr::one(),
            1 => out.pop().unwrap(),
            _ => Expr(Rc::new(Node::Product(out))),
        }
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::product(vec![a, b])
    }

    /// Integer power. Exponent 1 collapses; nested powers merge; powers of
    /// constants fold when the base is invertible; `Neg` bases resolve by
    /// exponent parity. Exponent 0 yields 1 (only reachable internally).
    pub fn pow(base: Expr, n: i32) -> Expr {
        if n == 0 {
            return Expr::one();
        }
        if n == 1 {
            return base;
        }
        match base.node() {
            Node::Const(c) => {
                if let Some(f) = c.pow(n) {
                    return Expr::constant(f);
                }
                // 0 with negative exponent: keep the node; evaluation reports it
                Expr(Rc::new(Node::Pow(base.clone(), n)))
            }
            Node::Pow(inner, m) => Expr::pow(inner.clone(), n.checked_mul(*m).expect("exponent overflow")),
            Node::Neg(inner) => {
                let p = Expr::pow(inner.clone(), n);
                if n % 2 == 0 {
                    p
                } else {
                    Expr::neg(p)
                }
            }
            _ => Expr(Rc::new(Node::Pow(base, n))),
        }
    }

    pub fn inv(base: Expr) -> Expr {
        Expr::pow(base, -1)
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::mul(a, Expr::inv(b))
    }

    pub fn neg(e: Expr) -> Expr {
        match e.node() {
            Node::Const(c) => Expr::constant(-c),
            Node::Neg(inner) => inner.clone(),
            // fold the sign into the product's constant prefactor
            Node::Product(_) => Expr::product(vec![Expr::int(-1), e]),
            // distribute over sums so `Neg` only ever wraps variables and powers
            Node::Sum(children) => {
                Expr::sum(children.iter().map(|c| Expr::neg(c.clone())).collect())
            }
            _ => Expr(Rc::new(Node::Neg(e))),
        }
    }

    /// The set of variables occurring in the tree.
    pub fn variables(&self) -> Vec<Var> {
        let mut seen: HashSet<Var> = HashSet::new();
        let mut visited: HashSet<usize> = HashSet::new();
        fn go(e: &Expr, seen: &mut HashSet<Var>, visited: &mut HashSet<usize>) {
            if !visited.insert(e.key()) {
                return;
            }
            match e.node() {
                Node::Const(_) => {}
                Node::Var(v) => {
                    seen.insert(*v);
                }
                Node::Sum(ch) | Node::Product(ch) => ch.iter().for_each(|c| go(c, seen, visited)),
                Node::Pow(b, _) => go(b, seen, visited),
                Node::Neg(b) => go(b, seen, visited),
            }
        }
        go(self, &mut seen, &mut visited);
        let mut vars: Vec<Var> = seen.into_iter().collect();
        vars.sort();
        vars
    }

    pub fn depends_on(&self, v: Var) -> bool {
        self.variables().contains(&v)
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Structural equality, memoized on node-pair identity so shared DAGs
/// compare in time linear in their node count.
pub fn expr_eq(a: &Expr, b: &Expr) -> bool {
    use std::collections::HashMap;
    fn go(a: &Expr, b: &Expr, memo: &mut HashMap<(usize, usize), bool>) -> bool {
        if Rc::ptr_eq(&a.0, &b.0) {
            return true;
        }
        let key = (a.key(), b.key());
        if let Some(&hit) = memo.get(&key) {
            return hit;
        }
        let result = match (a.node(), b.node()) {
            (Node::Const(x), Node::Const(y)) => x == y,
            (Node::Var(x), Node::Var(y)) => x == y,
            (Node::Sum(x), Node::Sum(y)) | (Node::Product(x), Node::Product(y)) => {
                x.len() == y.len() && x.iter().zip(y).all(|(p, q)| go(p, q, memo))
            }
            (Node::Pow(x, n), Node::Pow(y, m)) => n == m && go(x, y, memo),
            (Node::Neg(x), Node::Neg(y)) => go(x, y, memo),
            _ => false,
        };
        memo.insert(key, result);
        result
    }
    go(a, b, &mut HashMap::new())
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        expr_eq(self, other)
    }
}

impl Eq for Expr {}

/// Deterministic total order on expressions, used to canonicalize the
/// children order of collected sums and products. Any fixed order works;
/// this one ranks node kinds and then compares structurally.
pub fn expr_cmp(a: &Expr, b: &Expr) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    if Rc::ptr_eq(&a.0, &b.0) {
        return Ordering::Equal;
    }
    fn rank(n: &Node) -> u8 {
        match n {
            Node::Const(_) => 0,
            Node::Var(_) => 1,
            Node::Pow(_, _) => 2,
            Node::Neg(_) => 3,
            Node::Product(_) => 4,
            Node::Sum(_) => 5,
        }
    }
    let (ra, rb) = (rank(a.node()), rank(b.node()));
    if ra != rb {
        return ra.cmp(&rb);
    }
    match (a.node(), b.node()) {
        (Node::Const(x), Node::Const(y)) => (x.re.numer(), x.re.denom(), x.im.numer(), x.im.denom())
            .cmp(&(y.re.numer(), y.re.denom(), y.im.numer(), y.im.denom())),
        (Node::Var(x), Node::Var(y)) => x.cmp(y),
        (Node::Pow(x, n), Node::Pow(y, m)) => expr_cmp(x, y).then(n.cmp(m)),
        (Node::Neg(x), Node::Neg(y)) => expr_cmp(x, y),
        (Node::Product(x), Node::Product(y)) | (Node::Sum(x), Node::Sum(y)) => {
            for (p, q) in x.iter().zip(y.iter()) {
                let c = expr_cmp(p, q);
                if c != std::cmp::Ordering::Equal {
                    return c;
                }
            }
            x.len().cmp(&y.len())
        }
        _ => unreachable!("ranks matched"),
    }
}

/// Basic semantics-preserving simplification: rebuilds the tree through the
/// smart constructors and additionally collects structurally equal summands
/// (`k - k -> 0`, `2*x + x -> 3*x`) and merges equal factors into powers
/// (`z1*z1 -> z1^2`, `q*q^-1 -> 1`). Collected children are emitted in the
/// canonical [`expr_cmp`] order, making collection insensitive to the
/// construction order of the input.
pub fn simplify_basic(e: &Expr) -> Expr {
    let mut memo: std::collections::HashMap<usize, Expr> = std::collections::HashMap::new();
    fn go(e: &Expr, memo: &mut std::collections::HashMap<usize, Expr>) -> Expr {
        if let Some(hit) = memo.get(&e.key()) {
            return hit.clone();
        }
        let result = match e.node() {
            Node::Const(_) | Node::Var(_) => e.clone(),
            Node::Neg(x) => Expr::neg(go(x, memo)),
            Node::Pow(b, n) => Expr::pow(go(b, memo), *n),
            Node::Sum(children) => {
                let simplified: Vec<Expr> = children.iter().map(|c| go(c, memo)).collect();
                collect_sum(simplified)
            }
            Node::Product(children) => {
                let simplified: Vec<Expr> = children.iter().map(|c| go(c, memo)).collect();
                collect_product(simplified)
            }
        };
        memo.insert(e.key(), result.clone());
        result
    }
    go(e, &mut memo)
}

/// Split a term into (coefficient, core) with core free of leading constants and signs.
fn term_parts(e: &Expr) -> (GaussRat, Expr) {
    match e.node() {
        Node::Neg(x) => {
            let (c, core) = term_parts(x);
            (-&c, core)
        }
        Node::Product(ch) => {
            if let Node::Const(c) = ch[0].node() {
                let rest: Vec<Expr> = ch[1..].to_vec();
                (c.clone(), Expr::product(rest))
            } else {
                (GaussRat::one(), e.clone())
            }
        }
        Node::Const(c) => (c.clone(), Expr::one()),
        _ => (GaussRat::one(), e.clone()),
    }
}

fn collect_sum(terms: Vec<Expr>) -> Expr {
    let flat = Expr::sum(terms);
    let children: Vec<Expr> = match flat.node() {
        Node::Sum(ch) => ch.clone(),
        _ => return flat,
    };
    let mut cores: Vec<Expr> = Vec::new();
    let mut coeffs: Vec<GaussRat> = Vec::new();
    for t in &children {
        let (c, core) = term_parts(t);
        if let Some(idx) = cores.iter().position(|k| expr_eq(k, &core)) {
            coeffs[idx] = &coeffs[idx] + &c;
        } else {
            cores.push(core);
            coeffs.push(c);
        }
    }
    let mut grouped: Vec<(Expr, GaussRat)> = cores.into_iter().zip(coeffs).collect();
    grouped.sort_by(|(a, _), (b, _)| expr_cmp(a, b));
    let mut out: Vec<Expr> = Vec::new();
    for (core, coeff) in grouped {
        if coeff.is_zero() {
            continue;
        }
        out.push(Expr::mul(Expr::constant(coeff), core));
    }
    Expr::sum(out)
}

fn factor_parts(e: &Expr) -> (Expr, i32) {
    match e.node() {
        Node::Pow(b, n) => (b.clone(), *n),
        _ => (e.clone(), 1),
    }
}

fn collect_product(factors: Vec<Expr>) -> Expr {
    let flat = Expr::product(factors);
    let children: Vec<Expr> = match flat.node() {
        Node::Product(ch) => ch.clone(),
        _ => return flat,
    };
    let mut consts: Vec<Expr> = Vec::new();
    let mut bases: Vec<Expr> = Vec::new();
    let mut exps: Vec<i32> = Vec::new();
    for f in &children {
        if f.is_const().is_some() {
            consts.push(f.clone());
            continue;
        }
        let (base, n) = factor_parts(f);
        if let Some(idx) = bases.iter().position(|b| expr_eq(b, &base)) {
            exps[idx] += n;
        } else {
            bases.push(base);
            exps.push(n);
        }
    }
    let mut grouped: Vec<(Expr, i32)> = bases.into_iter().zip(exps).collect();
    grouped.sort_by(|(a, _), (b, _)| expr_cmp(a, b));
    let mut out: Vec<Expr> = consts;
    for (base, n) in grouped {
        if n == 0 {
            continue; // q * q^-1: domain shrinks only at excluded points
        }
        out.push(Expr::pow(base, n));
    }
    Expr::product(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_normalize() {
        let z1 = Expr::var(Var::Z1);
        assert!(Expr::sum(vec![Expr::zero(), z1.clone()]) == z1);
        assert!(Expr::mul(Expr::one(), z1.clone()) == z1);
        assert!(Expr::mul(Expr::zero(), z1.clone()).is_zero_const());
        assert!(Expr::neg(Expr::neg(z1.clone())) == z1);
        assert_eq!(Expr::pow(Expr::int(2), -3), Expr::rational(1, 8));
    }

    #[test]
    fn product_pulls_negation_into_constant() {
        let z1 = Expr::var(Var::Z1);
        let z2 = Expr::var(Var::Z2);
        let p = Expr::mul(Expr::neg(z1.clone()), z2.clone());
        match p.node() {
            Node::Product(ch) => {
                assert_eq!(ch.len(), 3);
                assert_eq!(ch[0].is_const(), Some(&GaussRat::from_int(-1)));
            }
            _ => panic!("expected product, got {p:?}"),
        }
        // lone -1 over a single factor folds back to a negation
        let n = Expr::mul(Expr::int(-1), z1.clone());
        assert!(matches!(n.node(), Node::Neg(_)));
        assert!(Expr::neg(n) == z1);
    }

    #[test]
    fn nested_pow_merges() {
        let z1 = Expr::var(Var::Z1);
        let p = Expr::pow(Expr::pow(z1.clone(), 2), -1);
        match p.node() {
            Node::Pow(b, n) => {
                assert!(*b == z1);
                assert_eq!(*n, -2);
            }
            _ => panic!("expected pow"),
        }
    }

    #[test]
    fn simplify_merges_equal_factors() {
        let z1 = Expr::var(Var::Z1);
        let sq = simplify_basic(&Expr::mul(z1.clone(), z1.clone()));
        assert!(sq == Expr::pow(z1.clone(), 2));
        let one = simplify_basic(&Expr::mul(z1.clone(), Expr::inv(z1.clone())));
        assert!(one.is_one_const());
    }

    #[test]
    fn simplify_collects_terms() {
        let k = Expr::mul(Expr::var(Var::Z1), Expr::var(Var::Zb2));
        let diff = simplify_basic(&Expr::sub(k.clone(), k.clone()));
        assert!(diff.is_zero_const());
        let two = simplify_basic(&Expr::add(k.clone(), k.clone()));
        assert!(two == Expr::mul(Expr::int(2), k));
    }

    #[test]
    fn zero_times_anything_is_zero() {
        let q = Expr::inv(Expr::var(Var::Z1));
        assert!(Expr::mul(Expr::zero(), q).is_zero_const());
        assert!(Expr::sum(vec![]).is_zero_const());
        assert!(Expr::product(vec![]).is_one_const());
    }

    #[test]
    fn variables_found() {
        let e = Expr::add(
            Expr::mul(Expr::var(Var::Z1), Expr::var(Var::Zb1)),
            Expr::var(Var::V),
        );
        assert_eq!(e.variables(), vec![Var::Z1, Var::Zb1, Var::V]);
    }
}
