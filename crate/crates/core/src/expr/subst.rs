//! Variable substitution, memoized on node identity.

use std::collections::{BTreeMap, HashMap};

use super::{Expr, Node, Var};

/// Replace each occurrence of a mapped variable by its image expression.
/// Unmapped variables are left alone. The images are not re-substituted.
pub fn substitute(e: &Expr, map: &BTreeMap<Var, Expr>) -> Expr {
    let mut memo: HashMap<usize, Expr> = HashMap::new();
    go(e, map, &mut memo)
}

fn go(e: &Expr, map: &BTreeMap<Var, Expr>, memo: &mut HashMap<usize, Expr>) -> Expr {
    if let Some(hit) = memo.get(&e.key()) {
        return hit.clone();
    }
    let result = match e.node() {
        Node::Const(_) => e.clone(),
        Node::Var(v) => match map.get(v) {
            Some(image) => image.clone(),
            None => e.clone(),
        },
        Node::Sum(terms) => Expr::sum(terms.iter().map(|t| go(t, map, memo)).collect()),
        Node::Product(factors) => Expr::product(factors.iter().map(|f| go(f, map, memo)).collect()),
        Node::Pow(base, n) => Expr::pow(go(base, map, memo), *n),
        Node::Neg(inner) => Expr::neg(go(inner, map, memo)),
    };
    memo.insert(e.key(), result.clone());
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::expr_eq;

    #[test]
    fn substitutes_and_normalizes() {
        // z1 + z2 with z1 -> 0 collapses to z2
        let e = Expr::add(Expr::var(Var::Z1), Expr::var(Var::Z2));
        let mut m = BTreeMap::new();
        m.insert(Var::Z1, Expr::zero());
        assert!(expr_eq(&substitute(&e, &m), &Expr::var(Var::Z2)));
    }

    #[test]
    fn composite_image() {
        // z1^2 with z1 -> z1 - z2^2
        let e = Expr::pow(Expr::var(Var::Z1), 2);
        let image = Expr::sub(Expr::var(Var::Z1), Expr::pow(Expr::var(Var::Z2), 2));
        let mut m = BTreeMap::new();
        m.insert(Var::Z1, image.clone());
        assert!(expr_eq(&substitute(&e, &m), &Expr::pow(image, 2)));
    }
}
