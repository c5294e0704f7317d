//! The ten holomorphic infinitesimal automorphisms of the light-cone
//! model, their commutator table, and tangency of their real parts.

use crate::expr::{
    conjugate, eval_exact, simplify_basic, substitute, zero_test_with, Expr, Point, SampleSpec,
    Var,
};
use crate::report::{Check, Suite};
use crate::scalar::GaussRat;
use std::collections::BTreeMap;

/// A holomorphic ambient vector field with polynomial coefficients on
/// `d/dz1, d/dz2, d/dw`; the associated real field is `X + conj(X)`.
#[derive(Clone, Debug)]
pub struct AmbientField {
    pub z1: Expr,
    pub z2: Expr,
    pub w: Expr,
}

impl AmbientField {
    pub fn components(&self) -> [&Expr; 3] {
        [&self.z1, &self.z2, &self.w]
    }

    /// `[X, Y]` over the holomorphic coordinate ring.
    pub fn bracket(&self, other: &AmbientField) -> AmbientField {
        let vars = [Var::Z1, Var::Z2, Var::W];
        let apply = |f: &AmbientField, e: &Expr| -> Expr {
            let mut terms = Vec::new();
            for (coeff, var) in f.components().into_iter().zip(vars) {
                let d = crate::expr::differentiate(e, var);
                if !d.is_zero_const() {
                    terms.push(Expr::mul(coeff.clone(), d));
                }
            }
            Expr::sum(terms)
        };
        AmbientField {
            z1: Expr::sub(apply(self, &other.z1), apply(other, &self.z1)),
            z2: Expr::sub(apply(self, &other.z2), apply(other, &self.z2)),
            w: Expr::sub(apply(self, &other.w), apply(other, &self.w)),
        }
    }

    pub fn scale_int(&self, n: i64) -> AmbientField {
        let c = Expr::int(n);
        AmbientField {
            z1: Expr::mul(c.clone(), self.z1.clone()),
            z2: Expr::mul(c.clone(), self.z2.clone()),
            w: Expr::mul(c, self.w.clone()),
        }
    }

    pub fn add(&self, other: &AmbientField) -> AmbientField {
        AmbientField {
            z1: Expr::add(self.z1.clone(), other.z1.clone()),
            z2: Expr::add(self.z2.clone(), other.z2.clone()),
            w: Expr::add(self.w.clone(), other.w.clone()),
        }
    }

    pub fn zero() -> AmbientField {
        AmbientField { z1: Expr::zero(), z2: Expr::zero(), w: Expr::zero() }
    }
}

/// Monomial map of a polynomial in `(z1, z2, w)`; exact coefficients.
pub type Poly3 = BTreeMap<(u32, u32, u32), GaussRat>;

/// Expand a polynomial expression over `(z1, z2, w)` into its monomial
/// coefficients. Errors on negative powers or foreign variables.
pub fn as_polynomial(e: &Expr) -> Result<Poly3, String> {
    use crate::expr::Node;
    fn mul_poly(a: &Poly3, b: &Poly3) -> Poly3 {
        let mut out = Poly3::new();
        for ((i1, j1, k1), c1) in a {
            for ((i2, j2, k2), c2) in b {
                let key = (i1 + i2, j1 + j2, k1 + k2);
                let add = c1 * c2;
                let cur = out.remove(&key).unwrap_or_else(GaussRat::zero);
                let merged = &cur + &add;
                if !merged.is_zero() {
                    out.insert(key, merged);
                }
            }
        }
        out
    }
    fn add_poly(a: &mut Poly3, b: Poly3) {
        for (key, c) in b {
            let cur = a.remove(&key).unwrap_or_else(GaussRat::zero);
            let merged = &cur + &c;
            if !merged.is_zero() {
                a.insert(key, merged);
            }
        }
    }
    fn go(e: &Expr) -> Result<Poly3, String> {
        let mut out = Poly3::new();
        match e.node() {
            Node::Const(c) => {
                if !c.is_zero() {
                    out.insert((0, 0, 0), c.clone());
                }
            }
            Node::Var(v) => {
                let key = match v {
                    Var::Z1 => (1, 0, 0),
                    Var::Z2 => (0, 1, 0),
                    Var::W => (0, 0, 1),
                    other => return Err(format!("non-polynomial variable {}", other.name())),
                };
                out.insert(key, GaussRat::one());
            }
            Node::Sum(terms) => {
                for t in terms {
                    add_poly(&mut out, go(t)?);
                }
            }
            Node::Product(factors) => {
                out.insert((0, 0, 0), GaussRat::one());
                for f in factors {
                    out = mul_poly(&out, &go(f)?);
                }
            }
            Node::Pow(base, n) => {
                if *n < 0 {
                    return Err("negative power in polynomial context".into());
                }
                let b = go(base)?;
                out.insert((0, 0, 0), GaussRat::one());
                for _ in 0..*n {
                    out = mul_poly(&out, &b);
                }
            }
            Node::Neg(inner) => {
                for (key, c) in go(inner)? {
                    out.insert(key, -&c);
                }
            }
        }
        Ok(out)
    }
    go(e)
}

fn ef(z1: &str, z2: &str, w: &str) -> AmbientField {
    let parse = |s: &str| -> Expr {
        if s == "0" {
            Expr::zero()
        } else {
            crate::expr::parse_expr(s).expect("builtin field coefficient parses")
        }
    };
    AmbientField { z1: parse(z1), z2: parse(z2), w: parse(w) }
}

/// The ten generators, with exact polynomial coefficients.
pub fn infinitesimal_fields() -> [AmbientField; 10] {
    [
        ef("0", "0", "i"),
        ef("z1", "0", "2*w"),
        ef("i*z1", "2*i*z2", "0"),
        ef("z2 - 1", "0", "-2*z1"),
        ef("i + i*z2", "0", "-2*i*z1"),
        ef("z1*z2", "z2^2 - 1", "-z1^2"),
        ef("i*z1*z2", "i*z2^2 + i", "-i*z1^2"),
        ef("i*w*z1", "-i*z1^2", "i*w^2"),
        ef("z1^2 - w*z2 - w", "2*z1*z2 + 2*z1", "2*w*z1"),
        ef("-i*z1^2 + i*w*z2 - i*w", "-2*i*z1*z2 + 2*i*z1", "-2*i*w*z1"),
    ]
}

/// One cell of the expected commutator table: `sum coeff * X_idx`
/// with 1-based indices.
pub type TableCell = Vec<(i64, usize)>;

/// Expected commutator table, upper triangle (row < col), 1-based indices.
pub fn expected_table() -> Vec<((usize, usize), TableCell)> {
    vec![
        ((1, 2), vec![(2, 1)]),
        ((1, 3), vec![]),
        ((1, 4), vec![]),
        ((1, 5), vec![]),
        ((1, 6), vec![]),
        ((1, 7), vec![]),
        ((1, 8), vec![(-1, 2)]),
        ((1, 9), vec![(-1, 5)]),
        ((1, 10), vec![(-1, 4)]),
        ((2, 3), vec![]),
        ((2, 4), vec![(-1, 4)]),
        ((2, 5), vec![(-1, 5)]),
        ((2, 6), vec![]),
        ((2, 7), vec![]),
        ((2, 8), vec![(2, 8)]),
        ((2, 9), vec![(1, 9)]),
        ((2, 10), vec![(1, 10)]),
        ((3, 4), vec![(1, 5)]),
        ((3, 5), vec![(-1, 4)]),
        ((3, 6), vec![(2, 7)]),
        ((3, 7), vec![(-2, 6)]),
        ((3, 8), vec![]),
        ((3, 9), vec![(-1, 10)]),
        ((3, 10), vec![(1, 9)]),
        ((4, 5), vec![(4, 1)]),
        ((4, 6), vec![(-1, 4)]),
        ((4, 7), vec![(-1, 5)]),
        ((4, 8), vec![(1, 10)]),
        ((4, 9), vec![(2, 6), (-2, 2)]),
        ((4, 10), vec![(-2, 7), (2, 3)]),
        ((5, 6), vec![(1, 5)]),
        ((5, 7), vec![(-1, 4)]),
        ((5, 8), vec![(1, 9)]),
        ((5, 9), vec![(2, 7), (2, 3)]),
        ((5, 10), vec![(2, 6), (2, 2)]),
        ((6, 7), vec![(-2, 3)]),
        ((6, 8), vec![]),
        ((6, 9), vec![(-1, 9)]),
        ((6, 10), vec![(1, 10)]),
        ((7, 8), vec![]),
        ((7, 9), vec![(1, 10)]),
        ((7, 10), vec![(1, 9)]),
        ((8, 9), vec![]),
        ((8, 10), vec![]),
        ((9, 10), vec![(4, 8)]),
    ]
}

fn cell_to_field(cell: &TableCell, basis: &[AmbientField; 10]) -> AmbientField {
    let mut acc = AmbientField::zero();
    for (coeff, idx) in cell {
        acc = acc.add(&basis[idx - 1].scale_int(*coeff));
    }
    acc
}

/// Exact structural match of every commutator against the table: each
/// component is expanded into monomials and compared coefficientwise,
/// with zero tolerance.
pub fn commutator_table_check() -> Suite {
    let mut suite = Suite::new("commutator_table");
    let basis = infinitesimal_fields();
    for ((i, j), cell) in expected_table() {
        let computed = basis[i - 1].bracket(&basis[j - 1]);
        let expected = cell_to_field(&cell, &basis);
        let name = format!("[X{i},X{j}]");
        let mut failure = None;
        for (c, e) in computed.components().into_iter().zip(expected.components()) {
            match (as_polynomial(c), as_polynomial(e)) {
                (Ok(pc), Ok(pe)) => {
                    if pc != pe {
                        failure = Some(format!("component mismatch: {c} vs {e}"));
                        break;
                    }
                }
                (Err(msg), _) | (_, Err(msg)) => {
                    failure = Some(msg);
                    break;
                }
            }
        }
        match failure {
            None => suite.push(Check::pass(name)),
            Some(d) => suite.push(Check::fail(name, d)),
        }
    }
    for i in 1..=10usize {
        let b = basis[i - 1].bracket(&basis[i - 1]);
        let zero = b.components().into_iter().all(|c| simplify_basic(c).is_zero_const());
        suite.push(if zero {
            Check::pass(format!("[X{i},X{i}] = 0"))
        } else {
            Check::fail(format!("[X{i},X{i}] = 0"), "nonzero self-commutator")
        });
    }
    suite
}

/// Structure constants of the subalgebra spanned by the first seven
/// fields, from the (checked) table.
pub fn rigid_subalgebra_constants() -> Vec<((usize, usize), TableCell)> {
    expected_table().into_iter().filter(|((i, j), _)| *i <= 7 && *j <= 7).collect()
}

/// Closure check: brackets among the first seven fields stay inside the
/// span of the first seven.
pub fn rigid_closure_check() -> Suite {
    let mut suite = Suite::new("rigid_closure");
    for ((i, j), cell) in rigid_subalgebra_constants() {
        let outside = cell.iter().any(|(_, idx)| *idx > 7);
        suite.push(if outside {
            Check::fail(format!("[X{i},X{j}] stays in span(X1..X7)"), "leaves the span")
        } else {
            Check::pass(format!("[X{i},X{j}] stays in span(X1..X7)"))
        });
    }
    suite
}

/// Sample an on-surface point of the graph `u = F`: rational `(z1, z2)`
/// admissible for `F`, rational `v`, then `w = F + iv`, `wb = F - iv`.
pub fn on_surface_point(
    f_graph: &Expr,
    rng: &mut rand_chacha::ChaCha8Rng,
    spec: &SampleSpec,
) -> Result<Point, crate::expr::SampleError> {
    use crate::expr::sample::{rand_gauss, rand_rat};
    loop {
        let mut p = Point::new();
        p.set_conj_pair(Var::Z1, rand_gauss(rng, spec.num_bound, spec.den_bound));
        p.set_conj_pair(Var::Z2, rand_gauss(rng, spec.num_bound, spec.den_bound));
        p.set_conj_pair(Var::V, GaussRat::from_rat(rand_rat(rng, spec.num_bound, spec.den_bound)));
        match eval_exact(f_graph, &p) {
            Ok(u) => {
                let v = p.get(Var::V).unwrap().clone();
                let iv = &GaussRat::i() * &v;
                p.set_raw(Var::W, &u + &iv);
                p.set_raw(Var::Wb, &u - &iv);
                return Ok(p);
            }
            Err(_) => continue, // excluded locus of F; redraw
        }
    }
}

/// Tangency of `X + conj(X)` to the graph of `F`: the derivative of the
/// defining function `(w + wb)/2 - F` along the real field vanishes
/// exactly at sampled on-surface points.
pub fn tangency_check(index: usize, f_graph: &Expr, spec: &SampleSpec) -> Check {
    let x = &infinitesimal_fields()[index - 1];
    let r_z1 = Expr::neg(crate::expr::differentiate(f_graph, Var::Z1));
    let r_z2 = Expr::neg(crate::expr::differentiate(f_graph, Var::Z2));
    let half = Expr::rational(1, 2);
    let mut terms = vec![
        Expr::mul(x.z1.clone(), r_z1),
        Expr::mul(x.z2.clone(), r_z2),
        Expr::mul(x.w.clone(), half.clone()),
    ];
    let xb = [conjugate(&x.z1), conjugate(&x.z2), conjugate(&x.w)];
    let rb_zb1 = Expr::neg(crate::expr::differentiate(f_graph, Var::Zb1));
    let rb_zb2 = Expr::neg(crate::expr::differentiate(f_graph, Var::Zb2));
    terms.push(Expr::mul(xb[0].clone(), rb_zb1));
    terms.push(Expr::mul(xb[1].clone(), rb_zb2));
    terms.push(Expr::mul(xb[2].clone(), half));
    let residual = Expr::sum(terms);

    let name = format!("X{index} + conj tangent");
    match zero_test_with(&residual, spec, |rng| on_surface_point(f_graph, rng, spec)) {
        Ok(zt) => Check::from_zero_test(name, &zt),
        Err(e) => Check::fail(name, e.to_string()),
    }
}

/// Substitute ambient coordinates into an expression (composition of a
/// field coefficient with a holomorphic map).
pub fn subst_ambient(e: &Expr, z1: &Expr, z2: &Expr, w: &Expr) -> Expr {
    let mut m = BTreeMap::new();
    m.insert(Var::Z1, z1.clone());
    m.insert(Var::Z2, z2.clone());
    m.insert(Var::W, w.clone());
    substitute(e, &m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_cells_spot_checked() {
        let basis = infinitesimal_fields();
        // [X4,X5] = 4 X1
        let b45 = basis[3].bracket(&basis[4]);
        assert_eq!(
            as_polynomial(&b45.w).unwrap(),
            as_polynomial(&Expr::mul(Expr::int(4), Expr::i())).unwrap()
        );
        assert!(as_polynomial(&b45.z1).unwrap().is_empty());
        // [X9,X10] = 4 X8
        let b910 = basis[8].bracket(&basis[9]);
        let x8 = &basis[7];
        for (c, e) in b910.components().into_iter().zip(x8.components()) {
            let scaled = Expr::mul(Expr::int(4), e.clone());
            assert_eq!(as_polynomial(c).unwrap(), as_polynomial(&scaled).unwrap());
        }
    }

    #[test]
    fn full_table_matches() {
        let suite = commutator_table_check();
        assert!(suite.all_pass(), "{:?}", suite.failures());
    }

    #[test]
    fn rigid_part_closes() {
        assert!(rigid_closure_check().all_pass());
    }

    #[test]
    fn tangency_of_all_ten() {
        let spec = SampleSpec { count: 10, ..Default::default() };
        let f = crate::expr::parse_expr(
            "(z1*zb1 + (1/2)*z1^2*zb2 + (1/2)*zb1^2*z2) / (1 - z2*zb2)",
        )
        .unwrap();
        for i in 1..=10 {
            let c = tangency_check(i, &f, &spec);
            assert!(c.pass, "{c:?}");
        }
    }

    #[test]
    fn polynomial_conversion_rejects_quotients() {
        let e = Expr::inv(Expr::var(Var::Z1));
        assert!(as_polynomial(&e).is_err());
    }
}
