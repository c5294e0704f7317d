//! Finite-dimensional Lie algebras over Gaussian rationals, given by
//! structure constants: the constant-coefficient dual algebra of the
//! model's invariant coframe, the automorphism algebra of the model, the
//! basis change identifying the two, Killing form and center.

use crate::linalg::Mat;
use crate::report::{Check, Suite};
use crate::scalar::GaussRat;

/// A Lie algebra by structure constants; `sc[j][k]` is the coefficient
/// vector of `[e_j, e_k]` in the basis.
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    pub labels: Vec<String>,
    sc: Vec<Vec<Vec<GaussRat>>>,
}

impl LieAlgebra {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Builds from upper-triangle brackets `((j, k), coeffs)` with `j < k`
    /// (0-based), antisymmetry filling the rest.
    pub fn from_upper_brackets(
        labels: Vec<String>,
        brackets: &[((usize, usize), Vec<(GaussRat, usize)>)],
    ) -> Self {
        let n = labels.len();
        let mut sc = vec![vec![vec![GaussRat::zero(); n]; n]; n];
        for ((j, k), cell) in brackets {
            assert!(j < k, "upper triangle expected");
            for (coeff, target) in cell {
                sc[*j][*k][*target] = &sc[*j][*k][*target] + coeff;
            }
        }
        for j in 0..n {
            for k in 0..j {
                for i in 0..n {
                    sc[j][k][i] = -&sc[k][j][i].clone();
                }
            }
        }
        LieAlgebra { labels, sc }
    }

    pub fn bracket_basis(&self, j: usize, k: usize) -> &Vec<GaussRat> {
        &self.sc[j][k]
    }

    /// `[x, y]` for coefficient vectors.
    pub fn bracket_vec(&self, x: &[GaussRat], y: &[GaussRat]) -> Vec<GaussRat> {
        let n = self.dim();
        let mut out = vec![GaussRat::zero(); n];
        for j in 0..n {
            if x[j].is_zero() {
                continue;
            }
            for k in 0..n {
                if y[k].is_zero() {
                    continue;
                }
                let scale = &x[j] * &y[k];
                for i in 0..n {
                    if !self.sc[j][k][i].is_zero() {
                        out[i] = &out[i] + &(&scale * &self.sc[j][k][i]);
                    }
                }
            }
        }
        out
    }

    pub fn antisymmetry_check(&self) -> Suite {
        let mut suite = Suite::new("antisymmetry");
        let n = self.dim();
        let mut ok = true;
        for j in 0..n {
            for k in 0..n {
                for i in 0..n {
                    if &self.sc[j][k][i] + &self.sc[k][j][i] != GaussRat::zero() {
                        ok = false;
                    }
                }
            }
        }
        suite.push(if ok {
            Check::pass("bracket antisymmetric")
        } else {
            Check::fail("bracket antisymmetric", "violated")
        });
        suite
    }

    /// Exact Jacobi identity over all basis triples.
    pub fn jacobi_check(&self) -> Suite {
        let mut suite = Suite::new("jacobi");
        let n = self.dim();
        let basis = |i: usize| -> Vec<GaussRat> {
            let mut v = vec![GaussRat::zero(); n];
            v[i] = GaussRat::one();
            v
        };
        let mut failures = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                for c in (b + 1)..n {
                    let (ea, eb, ec) = (basis(a), basis(b), basis(c));
                    let t1 = self.bracket_vec(&ea, &self.bracket_vec(&eb, &ec));
                    let t2 = self.bracket_vec(&eb, &self.bracket_vec(&ec, &ea));
                    let t3 = self.bracket_vec(&ec, &self.bracket_vec(&ea, &eb));
                    let sum: Vec<GaussRat> =
                        (0..n).map(|i| &(&t1[i] + &t2[i]) + &t3[i]).collect();
                    if sum.iter().any(|x| !x.is_zero()) {
                        failures.push(format!(
                            "({}, {}, {})",
                            self.labels[a], self.labels[b], self.labels[c]
                        ));
                    }
                }
            }
        }
        suite.push(if failures.is_empty() {
            Check::pass("Jacobi identity on all basis triples")
        } else {
            Check::fail("Jacobi identity on all basis triples", failures.join("; "))
        });
        suite
    }

    /// Adjoint matrix of the basis element `j`.
    pub fn ad(&self, j: usize) -> Mat {
        let n = self.dim();
        let mut m = Mat::zeros(n, n);
        for k in 0..n {
            for i in 0..n {
                m.set(i, k, self.sc[j][k][i].clone());
            }
        }
        m
    }

    /// Killing form `B(e_j, e_k) = trace(ad e_j ad e_k)`.
    pub fn killing_form(&self) -> Mat {
        let n = self.dim();
        let ads: Vec<Mat> = (0..n).map(|j| self.ad(j)).collect();
        let mut out = Mat::zeros(n, n);
        for j in 0..n {
            for k in 0..n {
                out.set(j, k, ads[j].mul(&ads[k]).trace());
            }
        }
        out
    }

    /// Basis of the center `{x : [x, e_k] = 0 for all k}`.
    pub fn center(&self) -> Vec<Vec<GaussRat>> {
        let n = self.dim();
        // rows indexed by (i, k), columns by j: sum_j x_j c^i_{jk} = 0
        let mut rows = Vec::with_capacity(n * n);
        for i in 0..n {
            for k in 0..n {
                let row: Vec<GaussRat> = (0..n).map(|j| self.sc[j][k][i].clone()).collect();
                rows.push(row);
            }
        }
        Mat::from_rows(rows).nullspace()
    }
}

/// An exact linear map between two algebras' coefficient spaces; columns
/// are images of the source basis.
#[derive(Clone, Debug)]
pub struct LinearMap {
    pub m: Mat,
}

impl LinearMap {
    pub fn apply(&self, x: &[GaussRat]) -> Vec<GaussRat> {
        self.m.mul_vec(x)
    }
}

/// Homomorphism and invertibility check of `map : a -> b` on all basis
/// pairs: `map([x, y]) = [map x, map y]`.
pub fn isomorphism_check(a: &LieAlgebra, b: &LieAlgebra, map: &LinearMap) -> Suite {
    let mut suite = Suite::new("isomorphism");
    let n = a.dim();
    if b.dim() != n || map.m.rows != n || map.m.cols != n {
        suite.push(Check::fail("dimensions agree", "mismatched dimensions"));
        return suite;
    }
    suite.push(if map.m.rank() == n {
        Check::pass("map invertible")
    } else {
        Check::fail("map invertible", "rank deficient")
    });
    let basis = |i: usize| -> Vec<GaussRat> {
        let mut v = vec![GaussRat::zero(); n];
        v[i] = GaussRat::one();
        v
    };
    for j in 0..n {
        for k in (j + 1)..n {
            let lhs = map.apply(a.bracket_basis(j, k));
            let rhs = b.bracket_vec(&map.apply(&basis(j)), &map.apply(&basis(k)));
            let name = format!("map([{}, {}])", a.labels[j], a.labels[k]);
            if lhs == rhs {
                suite.push(Check::pass(name));
            } else {
                suite.push(Check::fail(name, "bracket images differ"));
            }
        }
    }
    suite
}

const FORM_ORDER: [&str; 7] = ["rho", "kappa", "zeta", "alpha", "kappa_bar", "zeta_bar", "alpha_bar"];

/// The constant two-form coefficients of the model coframe system:
/// entries `(i, j, k, coeff)` meaning `d theta_i` contains
/// `coeff * theta_j ^ theta_k` with `j < k` in the order
/// `rho < kappa < zeta < alpha < kappa_bar < zeta_bar < alpha_bar`.
pub fn mc_two_form_constants() -> Vec<(usize, usize, usize, GaussRat)> {
    let one = GaussRat::one;
    let m1 = || GaussRat::from_int(-1);
    vec![
        // d rho = (alpha + alpha_bar) ^ rho + i kappa ^ kappa_bar
        (0, 0, 3, m1()),
        (0, 0, 6, m1()),
        (0, 1, 4, GaussRat::i()),
        // d kappa = alpha ^ kappa + zeta ^ kappa_bar
        (1, 1, 3, m1()),
        (1, 2, 4, one()),
        // d zeta = (alpha - alpha_bar) ^ zeta
        (2, 2, 3, m1()),
        (2, 2, 6, one()),
        // d alpha = zeta ^ zeta_bar
        (3, 2, 5, one()),
        // d kappa_bar = alpha_bar ^ kappa_bar + zeta_bar ^ kappa
        (4, 4, 6, m1()),
        (4, 1, 5, m1()),
        // d zeta_bar = (alpha_bar - alpha) ^ zeta_bar
        (5, 5, 6, m1()),
        (5, 3, 5, m1()),
        // d alpha_bar = zeta_bar ^ zeta
        (6, 2, 5, m1()),
    ]
}

/// The dual algebra of the constant-coefficient coframe system by the
/// structure-constant conversion `[d_j, d_k] = - sum_i T^i_jk d_i`.
pub fn dual_algebra_from_mc() -> LieAlgebra {
    let consts = mc_two_form_constants();
    let mut brackets: Vec<((usize, usize), Vec<(GaussRat, usize)>)> = Vec::new();
    for j in 0..7 {
        for k in (j + 1)..7 {
            let mut cell = Vec::new();
            for (i, a, b, coeff) in &consts {
                if *a == j && *b == k {
                    cell.push((-coeff, *i));
                }
            }
            if !cell.is_empty() {
                brackets.push(((j, k), cell));
            }
        }
    }
    LieAlgebra::from_upper_brackets(
        FORM_ORDER.iter().map(|s| format!("d_{s}")).collect(),
        &brackets,
    )
}

/// The expected dual commutator table, upper triangle. The self-conjugate
/// first label makes the `(rho, alpha_bar)` cell land on `d_rho` itself;
/// the Jacobi check validates that reading.
pub fn expected_dual_table() -> Vec<((usize, usize), Vec<(GaussRat, usize)>)> {
    let one = GaussRat::one;
    let m1 = || GaussRat::from_int(-1);
    let mi = || -&GaussRat::i();
    vec![
        ((0, 3), vec![(one(), 0)]),
        ((0, 6), vec![(one(), 0)]),
        ((1, 3), vec![(one(), 1)]),
        ((1, 4), vec![(mi(), 0)]),
        ((1, 5), vec![(one(), 4)]),
        ((2, 3), vec![(one(), 2)]),
        ((2, 4), vec![(m1(), 1)]),
        ((2, 5), vec![(m1(), 3), (one(), 6)]),
        ((2, 6), vec![(m1(), 2)]),
        ((3, 5), vec![(one(), 5)]),
        ((4, 6), vec![(one(), 4)]),
        ((5, 6), vec![(one(), 5)]),
    ]
}

/// Cell-for-cell comparison of the converted dual algebra against the
/// expected table.
pub fn check_dual_table() -> Suite {
    let mut suite = Suite::new("dual_table");
    let algebra = dual_algebra_from_mc();
    let expected = expected_dual_table();
    for j in 0..7 {
        for k in (j + 1)..7 {
            let mut want = vec![GaussRat::zero(); 7];
            if let Some((_, cell)) = expected.iter().find(|((a, b), _)| *a == j && *b == k) {
                for (coeff, idx) in cell {
                    want[*idx] = coeff.clone();
                }
            }
            let got = algebra.bracket_basis(j, k);
            let name = format!("[{}, {}]", algebra.labels[j], algebra.labels[k]);
            if got == &want {
                suite.push(Check::pass(name));
            } else {
                suite.push(Check::fail(name, format!("got {got:?}, want {want:?}")));
            }
        }
    }
    suite
}

/// Consistency of the coframe system under a second exterior derivative:
/// each `d(d theta_i)` expands to a 3-form whose coefficients must all
/// vanish. Validates in particular that adjoining the two parameter-form
/// equations to the base system is consistent.
pub fn check_mc_d_squared() -> Suite {
    let mut suite = Suite::new("coframe_d_squared");
    suite.checks.extend(mc_d_squared_failures(&mc_two_form_constants()).checks);
    suite
}

/// The same consistency check on an arbitrary constant system; used for
/// fault injection by tests.
pub fn mc_d_squared_failures(consts: &[(usize, usize, usize, GaussRat)]) -> Suite {
    let mut suite = Suite::new("d_squared");
    let n = 7usize;
    // two-form coefficients per form index
    let coeff = |i: usize, a: usize, b: usize| -> GaussRat {
        let mut out = GaussRat::zero();
        for (fi, fa, fb, c) in consts {
            if *fi == i {
                if *fa == a && *fb == b {
                    out = &out + c;
                } else if *fa == b && *fb == a {
                    out = &out - c;
                }
            }
        }
        out
    };
    for i in 0..n {
        // d(d theta_i) = sum_{j<k} T^i_jk (d theta_j ^ theta_k - theta_j ^ d theta_k)
        let mut three_form: std::collections::BTreeMap<(usize, usize, usize), GaussRat> =
            std::collections::BTreeMap::new();
        let mut add = |p: usize, q: usize, r: usize, c: GaussRat| {
            // sort (p, q, r) with sign; drop degenerate triples
            let mut idx = [p, q, r];
            let mut sign = 1i64;
            for x in 0..3 {
                for y in 0..2 - x {
                    if idx[y] > idx[y + 1] {
                        idx.swap(y, y + 1);
                        sign = -sign;
                    }
                }
            }
            if idx[0] == idx[1] || idx[1] == idx[2] {
                return;
            }
            let signed = if sign < 0 { -&c } else { c };
            let entry = three_form.entry((idx[0], idx[1], idx[2])).or_insert_with(GaussRat::zero);
            *entry = &*entry + &signed;
        };
        for j in 0..n {
            for k in (j + 1)..n {
                let t = coeff(i, j, k);
                if t.is_zero() {
                    continue;
                }
                // d theta_j ^ theta_k
                for a in 0..n {
                    for b in (a + 1)..n {
                        let tj = coeff(j, a, b);
                        if !tj.is_zero() {
                            add(a, b, k, &t * &tj);
                        }
                    }
                }
                // - theta_j ^ d theta_k
                for a in 0..n {
                    for b in (a + 1)..n {
                        let tk = coeff(k, a, b);
                        if !tk.is_zero() {
                            add(j, a, b, -&(&t * &tk));
                        }
                    }
                }
            }
        }
        let bad: Vec<String> = three_form
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(&(a, b, c3), v)| {
                format!("{}^{}^{}: {v}", FORM_ORDER[a], FORM_ORDER[b], FORM_ORDER[c3])
            })
            .collect();
        let name = format!("d(d {}) = 0", FORM_ORDER[i]);
        suite.push(if bad.is_empty() {
            Check::pass(name)
        } else {
            Check::fail(name, bad.join("; "))
        });
    }
    suite
}

fn to_gauss_cell(cell: &[(i64, usize)]) -> Vec<(GaussRat, usize)> {
    cell.iter().map(|(c, idx)| (GaussRat::from_int(*c), idx - 1)).collect()
}

/// The automorphism algebra of the model restricted to the first seven
/// generators, built from the verified commutator table.
pub fn x_algebra_seven() -> LieAlgebra {
    let brackets: Vec<((usize, usize), Vec<(GaussRat, usize)>)> =
        crate::model::ambient::rigid_subalgebra_constants()
            .into_iter()
            .map(|((i, j), cell)| ((i - 1, j - 1), to_gauss_cell(&cell)))
            .collect();
    LieAlgebra::from_upper_brackets((1..=7).map(|i| format!("X{i}")).collect(), &brackets)
}

/// The full ten-generator algebra.
pub fn x_algebra_ten() -> LieAlgebra {
    let brackets: Vec<((usize, usize), Vec<(GaussRat, usize)>)> =
        crate::model::ambient::expected_table()
            .into_iter()
            .map(|((i, j), cell)| ((i - 1, j - 1), to_gauss_cell(&cell)))
            .collect();
    LieAlgebra::from_upper_brackets((1..=10).map(|i| format!("X{i}")).collect(), &brackets)
}

/// The basis change sending the automorphism generators to combinations
/// of the coframe duals: a 7x7 matrix whose columns are the images.
pub fn w_basis_map() -> LinearMap {
    let mut m = Mat::zeros(7, 7);
    let half_i_neg = {
        let i = GaussRat::i();
        let half = GaussRat::from_pair(1, 2, 0, 1);
        -&(&i * &half)
    };
    // W1 = -(i/2) d_rho
    m.set(0, 0, half_i_neg);
    // W2 = d_alpha + d_alpha_bar
    m.set(3, 1, GaussRat::one());
    m.set(6, 1, GaussRat::one());
    // W3 = d_zeta - d_zeta_bar
    m.set(2, 2, GaussRat::one());
    m.set(5, 2, GaussRat::from_int(-1));
    // W4 = d_kappa - d_kappa_bar
    m.set(1, 3, GaussRat::one());
    m.set(4, 3, GaussRat::from_int(-1));
    // W5 = d_kappa + d_kappa_bar
    m.set(1, 4, GaussRat::one());
    m.set(4, 4, GaussRat::one());
    // W6 = d_zeta + d_zeta_bar
    m.set(2, 5, GaussRat::one());
    m.set(5, 5, GaussRat::one());
    // W7 = -d_alpha + d_alpha_bar
    m.set(3, 6, GaussRat::from_int(-1));
    m.set(6, 6, GaussRat::one());
    LinearMap { m }
}

/// The full algebra suite: dual table, consistency, Jacobi for all three
/// algebras, the isomorphism, Killing-form degeneracy and trivial center.
pub fn liealg_suite() -> Vec<Suite> {
    let mut out = Vec::new();
    out.push(check_dual_table());
    out.push(check_mc_d_squared());
    let dual = dual_algebra_from_mc();
    let seven = x_algebra_seven();
    let ten = x_algebra_ten();
    let mut jac = Suite::new("jacobi_all");
    for (label, alg) in
        [("dual", &dual), ("automorphism(7)", &seven), ("automorphism(10)", &ten)]
    {
        let s = alg.jacobi_check();
        for mut check in s.checks {
            check.name = format!("{label}: {}", check.name);
            jac.push(check);
        }
        let a = alg.antisymmetry_check();
        for mut check in a.checks {
            check.name = format!("{label}: {}", check.name);
            jac.push(check);
        }
    }
    out.push(jac);
    out.push(isomorphism_check(&seven, &dual, &w_basis_map()));

    let mut structure = Suite::new("killing_and_center");
    let killing = seven.killing_form();
    let first_row_zero = (0..7).all(|j| killing.get(0, j).is_zero());
    structure.push(if first_row_zero {
        Check::pass("Killing form row of X1 vanishes")
    } else {
        Check::fail("Killing form row of X1 vanishes", "nonzero entry")
    });
    let center = seven.center();
    structure.push(if center.is_empty() {
        Check::pass("center is trivial")
    } else {
        Check::fail("center is trivial", format!("dimension {}", center.len()))
    });
    out.push(structure);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_table_matches() {
        let s = check_dual_table();
        assert!(s.all_pass(), "{:?}", s.failures());
    }

    #[test]
    fn dual_algebra_specific_cells() {
        let a = dual_algebra_from_mc();
        // [d_rho, d_kappa] = 0
        assert!(a.bracket_basis(0, 1).iter().all(|c| c.is_zero()));
        // [d_kappa, d_kappa_bar] = -i d_rho
        let b = a.bracket_basis(1, 4);
        assert_eq!(b[0], -&GaussRat::i());
        assert!(b[1..].iter().all(|c| c.is_zero()));
        // [d_zeta, d_zeta_bar] = -d_alpha + d_alpha_bar
        let c = a.bracket_basis(2, 5);
        assert_eq!(c[3], GaussRat::from_int(-1));
        assert_eq!(c[6], GaussRat::one());
    }

    #[test]
    fn d_squared_consistency() {
        let s = check_mc_d_squared();
        assert!(s.all_pass(), "{:?}", s.failures());
    }

    #[test]
    fn d_squared_fault_detected() {
        // drop the alpha_bar half of the zeta pair: inconsistent system
        let mut consts = mc_two_form_constants();
        consts.retain(|(i, a, b, _)| !(*i == 6 && *a == 2 && *b == 5));
        let s = mc_d_squared_failures(&consts);
        assert!(!s.all_pass());
    }

    #[test]
    fn jacobi_everywhere() {
        for alg in [dual_algebra_from_mc(), x_algebra_seven(), x_algebra_ten()] {
            let s = alg.jacobi_check();
            assert!(s.all_pass(), "{}: {:?}", alg.labels.len(), s.failures());
            assert!(alg.antisymmetry_check().all_pass());
        }
    }

    #[test]
    fn jacobi_fault_detected() {
        // perturb [d_zeta, d_zeta_bar] to -d_alpha alone
        let mut brackets = expected_dual_table();
        for ((j, k), cell) in brackets.iter_mut() {
            if *j == 2 && *k == 5 {
                cell.retain(|(_, idx)| *idx != 6);
            }
        }
        let broken = LieAlgebra::from_upper_brackets(
            FORM_ORDER.iter().map(|s| format!("d_{s}")).collect(),
            &brackets,
        );
        assert!(!broken.jacobi_check().all_pass());
    }

    #[test]
    fn w_basis_is_isomorphism() {
        let s = isomorphism_check(&x_algebra_seven(), &dual_algebra_from_mc(), &w_basis_map());
        assert!(s.all_pass(), "{:?}", s.failures());
    }

    #[test]
    fn specific_w_brackets() {
        let dual = dual_algebra_from_mc();
        let map = w_basis_map();
        let e = |i: usize| -> Vec<GaussRat> {
            let mut v = vec![GaussRat::zero(); 7];
            v[i] = GaussRat::one();
            v
        };
        // [W4, W5] = 4 W1
        let w4 = map.apply(&e(3));
        let w5 = map.apply(&e(4));
        let bracket = dual.bracket_vec(&w4, &w5);
        let mut four_w1 = map.apply(&e(0));
        for c in four_w1.iter_mut() {
            *c = &*c * &GaussRat::from_int(4);
        }
        assert_eq!(bracket, four_w1);
        // [W1, W2] = 2 W1
        let w1 = map.apply(&e(0));
        let w2 = map.apply(&e(1));
        let b12 = dual.bracket_vec(&w1, &w2);
        let mut two_w1 = map.apply(&e(0));
        for c in two_w1.iter_mut() {
            *c = &*c * &GaussRat::from_int(2);
        }
        assert_eq!(b12, two_w1);
        // [W1, W3] = 0
        let w3 = map.apply(&e(2));
        assert!(dual.bracket_vec(&w1, &w3).iter().all(|c| c.is_zero()));
    }

    #[test]
    fn sign_flipped_map_fails() {
        let mut map = w_basis_map();
        // flip the sign of the image of X4
        for r in 0..7 {
            let v = -map.m.get(r, 3);
            map.m.set(r, 3, v);
        }
        let s = isomorphism_check(&x_algebra_seven(), &dual_algebra_from_mc(), &map);
        assert!(!s.all_pass());
    }

    #[test]
    fn identity_map_is_isomorphism() {
        let dual = dual_algebra_from_mc();
        let s = isomorphism_check(&dual, &dual, &LinearMap { m: Mat::identity(7) });
        assert!(s.all_pass());
    }

    #[test]
    fn killing_row_and_center() {
        let seven = x_algebra_seven();
        let killing = seven.killing_form();
        for j in 0..7 {
            assert!(killing.get(0, j).is_zero(), "entry {j} nonzero");
        }
        // the form is not identically zero (the algebra is not nilpotent-trivial)
        let mut any_nonzero = false;
        for i in 0..7 {
            for j in 0..7 {
                if !killing.get(i, j).is_zero() {
                    any_nonzero = true;
                }
            }
        }
        assert!(any_nonzero);
        assert!(seven.center().is_empty());
    }

    #[test]
    fn one_dimensional_abelian_killing() {
        let abelian = LieAlgebra::from_upper_brackets(vec!["e".into()], &[]);
        let killing = abelian.killing_form();
        assert!(killing.get(0, 0).is_zero());
        // its center is everything
        assert_eq!(abelian.center().len(), 1);
    }

    #[test]
    fn full_suite_passes() {
        for s in liealg_suite() {
            assert!(s.all_pass(), "{}: {:?}", s.name, s.failures());
        }
    }
}
