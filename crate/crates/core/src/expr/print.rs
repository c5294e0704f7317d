//! Canonical printer. Emits the same grammar the parser accepts, and
//! `parse(print(e)) == e` structurally for every tree built through the
//! smart constructors.

use std::fmt;

use num_traits::{Signed, Zero};

use super::{Expr, Node};
use crate::scalar::GaussRat;

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print_expr(self))
    }
}

pub fn print_expr(e: &Expr) -> String {
    match e.node() {
        Node::Sum(terms) => {
            let mut out = String::new();
            for (idx, t) in terms.iter().enumerate() {
                let (negative, body) = print_term_signed(t);
                if idx == 0 {
                    if negative {
                        out.push('-');
                    }
                } else {
                    out.push_str(if negative { " - " } else { " + " });
                }
                out.push_str(&body);
            }
            out
        }
        _ => {
            let (negative, body) = print_term_signed(e);
            if negative {
                format!("-{body}")
            } else {
                body
            }
        }
    }
}

/// Split a sum term into a displayed sign and its unsigned body.
fn print_term_signed(e: &Expr) -> (bool, String) {
    match e.node() {
        Node::Neg(inner) => (true, print_factor_level(inner)),
        Node::Const(c) => {
            if let Some(pos) = negated_const(c) {
                (true, const_body(&pos))
            } else {
                (false, const_body(c))
            }
        }
        Node::Product(children) => {
            if let Node::Const(c) = children[0].node() {
                if let Some(pos) = negated_const(c) {
                    let rest: Vec<Expr> = children[1..].to_vec();
                    let flipped = if pos.is_one() {
                        Expr::product(rest)
                    } else {
                        Expr::product(
                            std::iter::once(Expr::constant(pos)).chain(rest).collect(),
                        )
                    };
                    return (true, print_factor_level(&flipped));
                }
            }
            (false, print_factor_level(e))
        }
        _ => (false, print_factor_level(e)),
    }
}

/// `Some(-c)` when `c` displays with a leading minus (negative real, or
/// purely imaginary with negative imaginary part).
fn negated_const(c: &GaussRat) -> Option<GaussRat> {
    let neg_real = c.im.is_zero() && c.re.is_negative();
    let neg_imag = c.re.is_zero() && c.im.is_negative();
    if neg_real || neg_imag {
        Some(-c)
    } else {
        None
    }
}

fn const_body(c: &GaussRat) -> String {
    format!("{c}")
}

fn print_factor_level(e: &Expr) -> String {
    match e.node() {
        Node::Product(children) => children
            .iter()
            .map(print_product_factor)
            .collect::<Vec<_>>()
            .join("*"),
        _ => print_product_factor(e),
    }
}

fn print_product_factor(e: &Expr) -> String {
    match e.node() {
        Node::Const(c) => const_body(c),
        Node::Var(v) => v.name().to_string(),
        Node::Pow(base, n) => {
            let b = match base.node() {
                Node::Var(v) => v.name().to_string(),
                Node::Const(c) if c.im.is_zero() && !c.re.is_negative() && c.re.denom() == &num_bigint::BigInt::from(1) => {
                    const_body(c)
                }
                _ => format!("({})", print_expr(base)),
            };
            format!("{b}^{n}")
        }
        Node::Sum(_) | Node::Neg(_) => format!("({})", print_expr(e)),
        Node::Product(_) => format!("({})", print_factor_level(e)),
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse_expr, Expr, Var};

    fn round_trip(src: &str) {
        let e = parse_expr(src).unwrap();
        let printed = e.to_string();
        let back = parse_expr(&printed).unwrap();
        assert!(e == back, "not a fixed point: {src:?} -> {printed:?} -> {back:?}");
        // printing a reparse is bit-stable
        assert_eq!(printed, back.to_string());
    }

    #[test]
    fn printer_round_trips_representative_forms() {
        for src in [
            "z1*zb1",
            "1 - z2*zb2",
            "(z1*zb1 + (1/2)*z1^2*zb2 + (1/2)*zb1^2*z2)/(1 - z2*zb2)",
            "-z1",
            "-(z1 + z2)",
            "z1^-2",
            "3/4*z1 - 2*z2",
            "i*z1 - i*zb1",
            "(1 - 2/3*i)*v",
            "-i",
            "c*cb*t",
            "(z2 + 1)^-1*(z2 - 1)",
        ] {
            round_trip(src);
        }
    }

    #[test]
    fn constructed_trees_print_parse_stably() {
        let den = Expr::sub(Expr::one(), Expr::mul(Expr::var(Var::Z2), Expr::var(Var::Zb2)));
        let e = Expr::div(
            Expr::add(Expr::mul(Expr::var(Var::Z1), Expr::var(Var::Zb1)), Expr::i()),
            den,
        );
        let printed = e.to_string();
        let back = parse_expr(&printed).unwrap();
        assert!(e == back, "{printed}");
    }
}
