//! Everything specific to the light-cone model: its graph, the tube
//! fixtures used by the test corpus, rigid holomorphic maps acting on
//! graphs, the automorphism fields and flows, and the model structure
//! suite.

pub mod ambient;
pub mod flows;

use std::collections::BTreeMap;

use crate::expr::{
    conjugate, is_zero_on_samples, parse_expr, simplify_basic, substitute, Expr, SampleSpec, Var,
};
use crate::fields::{check_structure_table, d_coframe, TwoFormTable};
use crate::hypersurface::{rho_kappa_wedge_coeff, validate, Hypersurface};
use crate::report::{Check, Suite};

/// The light-cone model graph
/// `u = (z1 zb1 + z1^2 zb2 / 2 + zb1^2 z2 / 2) / (1 - z2 zb2)`.
pub fn mlc_graph() -> Expr {
    parse_expr("(z1*zb1 + (1/2)*z1^2*zb2 + (1/2)*zb1^2*z2) / (1 - z2*zb2)").unwrap()
}

/// Tube graph `u = (z1+zb1)^2 / (z2+zb2)`: a differently presented
/// light-cone tube, rigidly equivalent to the model.
pub fn tube_quadratic_graph() -> Expr {
    parse_expr("(z1+zb1)^2 / (z2+zb2)").unwrap()
}

/// Tube graph `u = (z1+zb1)^3 / (z2+zb2)^2`: constant Levi rank 1 and
/// 2-nondegenerate, but not equivalent to the model (one primary torsion
/// is nonzero). The engine's exact positive non-equivalence fixture.
pub fn tube_cubic_graph() -> Expr {
    parse_expr("(z1+zb1)^3 / (z2+zb2)^2").unwrap()
}

/// Builtin surface catalog for the CLI and tests.
pub fn builtin_surface(name: &str) -> Option<Expr> {
    match name {
        "mlc" => Some(mlc_graph()),
        "tube-lc" => Some(tube_quadratic_graph()),
        "tube-cubic" => Some(tube_cubic_graph()),
        _ => None,
    }
}

pub fn builtin_names() -> &'static [&'static str] {
    &["mlc", "tube-lc", "tube-cubic"]
}

/// A rigid holomorphic map
/// `(z1, z2, w) -> (f1(z1,z2), f2(z1,z2), a w + g(z1,z2))`
/// with real `a != 0`, supplied together with the inverse of `(f1, f2)`.
#[derive(Clone, Debug)]
pub struct RigidMap {
    pub name: String,
    pub f1: Expr,
    pub f2: Expr,
    /// real nonzero multiplier of `w`
    pub a: crate::scalar::Rat,
    pub g: Expr,
    pub inv1: Expr,
    pub inv2: Expr,
}

impl RigidMap {
    pub fn identity() -> RigidMap {
        RigidMap {
            name: "identity".into(),
            f1: Expr::var(Var::Z1),
            f2: Expr::var(Var::Z2),
            a: crate::scalar::rat_int(1),
            g: Expr::zero(),
            inv1: Expr::var(Var::Z1),
            inv2: Expr::var(Var::Z2),
        }
    }

    /// `(z1, z2, w) -> (z1 + z2^2, z2, 2w)`, inverse `(z1 - z2^2, z2)`.
    pub fn shear() -> RigidMap {
        RigidMap {
            name: "shear".into(),
            f1: Expr::add(Expr::var(Var::Z1), Expr::pow(Expr::var(Var::Z2), 2)),
            f2: Expr::var(Var::Z2),
            a: crate::scalar::rat_int(2),
            g: Expr::zero(),
            inv1: Expr::sub(Expr::var(Var::Z1), Expr::pow(Expr::var(Var::Z2), 2)),
            inv2: Expr::var(Var::Z2),
        }
    }

    /// `(z1, z2, w) -> (z1, z2, 3w)`.
    pub fn dilation() -> RigidMap {
        RigidMap {
            name: "dilation".into(),
            f1: Expr::var(Var::Z1),
            f2: Expr::var(Var::Z2),
            a: crate::scalar::rat_int(3),
            g: Expr::zero(),
            inv1: Expr::var(Var::Z1),
            inv2: Expr::var(Var::Z2),
        }
    }

    /// `(z1, z2, w) -> (z1, z2 - z1^2/2, w)`: mixes the two directions
    /// quadratically, producing image surfaces with a nonvanishing `P`.
    pub fn quadratic_mix() -> RigidMap {
        RigidMap {
            name: "quadratic-mix".into(),
            f1: Expr::var(Var::Z1),
            f2: Expr::sub(
                Expr::var(Var::Z2),
                Expr::div(Expr::pow(Expr::var(Var::Z1), 2), Expr::int(2)),
            ),
            a: crate::scalar::rat_int(1),
            g: Expr::zero(),
            inv1: Expr::var(Var::Z1),
            inv2: Expr::add(
                Expr::var(Var::Z2),
                Expr::div(Expr::pow(Expr::var(Var::Z1), 2), Expr::int(2)),
            ),
        }
    }

    /// Check that the supplied inverse composes to the identity, sampled.
    pub fn check_inverse(&self, spec: &SampleSpec) -> Result<(), String> {
        let mut m = BTreeMap::new();
        m.insert(Var::Z1, self.inv1.clone());
        m.insert(Var::Z2, self.inv2.clone());
        for (component, target) in
            [(substitute(&self.f1, &m), Var::Z1), (substitute(&self.f2, &m), Var::Z2)]
        {
            let delta = Expr::sub(component, Expr::var(target));
            match is_zero_on_samples(&delta, spec) {
                Ok(zt) if zt.zero => {}
                Ok(zt) => {
                    let (p, v) = zt.witness.unwrap();
                    return Err(format!("inverse mismatch: {v} at {p}"));
                }
                Err(e) => return Err(e.to_string()),
            }
        }
        Ok(())
    }
}

/// Push the graph of a validated surface through a rigid map:
/// `F'(z') = a F(inv(z'), conj) + (g(inv(z')) + conj(g)(conj inv)) / 2`,
/// then validate the image.
pub fn transform_surface(
    h: &Hypersurface,
    map: &RigidMap,
    spec: &SampleSpec,
) -> Result<Hypersurface, String> {
    map.check_inverse(spec)?;
    let inv1_bar = conjugate(&map.inv1);
    let inv2_bar = conjugate(&map.inv2);
    let mut m = BTreeMap::new();
    m.insert(Var::Z1, map.inv1.clone());
    m.insert(Var::Z2, map.inv2.clone());
    m.insert(Var::Zb1, inv1_bar);
    m.insert(Var::Zb2, inv2_bar);
    let pulled = substitute(h.graph(), &m);
    let g_pulled = substitute(&map.g, &m);
    let g_bar_pulled = conjugate(&g_pulled);
    let half = Expr::rational(1, 2);
    let image = simplify_basic(&Expr::sum(vec![
        Expr::mul(Expr::constant(crate::scalar::GaussRat::from_rat(map.a.clone())), pulled),
        Expr::mul(half.clone(), g_pulled),
        Expr::mul(half, g_bar_pulled),
    ]));
    validate(&image, spec).map_err(|report| {
        format!("transformed surface failed validation: {:?}", report.failures())
    })
}

/// Structure tables of the model base coframe and of its rescaled kernel
/// coframe, with every torsion specialized to the model graph.
pub fn model_structure_suite(spec: &SampleSpec) -> Suite {
    let mut suite = Suite::new("model_structure");
    let h = match validate(&mlc_graph(), spec) {
        Ok(h) => h,
        Err(r) => {
            suite.push(Check::fail("model validates", format!("{:?}", r.failures())));
            return suite;
        }
    };
    suite.push(Check::pass("model validates"));

    let den = parse_expr("1 - z2*zb2").unwrap();
    let q = |num: Expr| Expr::div(num, den.clone());

    let d_rho_expected = TwoFormTable::from_entries(vec![
        (1, q(Expr::var(Var::Zb2))),
        (3, q(Expr::var(Var::Z2))),
        (5, rho_kappa_wedge_coeff()),
    ]);
    let d_kappa_expected = TwoFormTable::from_entries(vec![
        (4, q(Expr::var(Var::Zb2))),
        (7, Expr::neg(q(Expr::one()))),
    ]);
    let d_zeta_expected = TwoFormTable::zero();

    for (name, form, expected) in [
        ("model d(rho)", &h.coframe().rho, &d_rho_expected),
        ("model d(kappa)", &h.coframe().kappa, &d_kappa_expected),
        ("model d(zeta)", &h.coframe().zeta, &d_zeta_expected),
    ] {
        let computed = d_coframe(h.frame(), form);
        let s = check_structure_table(name, &computed, expected, spec);
        suite.checks.extend(s.checks);
    }

    // the kernel coframe rescaling specializes to -1/(1 - z2 zb2)
    let scale = Expr::neg(q(Expr::one()));
    let delta = Expr::sub(h.freeman().clone(), scale);
    crate::hypersurface::push_zero(&mut suite, "kernel rescaling = -1/(1 - z2*zb2)", &delta, spec);

    let (hat_frame, hat_cof) = h.zeta_hat_structure();
    let d_rho_hat = TwoFormTable::from_entries(vec![
        (1, Expr::neg(Expr::var(Var::Zb2))),
        (3, Expr::neg(Expr::var(Var::Z2))),
        (5, rho_kappa_wedge_coeff()),
    ]);
    let d_kappa_hat = TwoFormTable::from_entries(vec![
        (4, Expr::neg(Expr::var(Var::Zb2))),
        (7, Expr::one()),
    ]);
    let d_zeta_hat = TwoFormTable::from_entries(vec![(8, Expr::var(Var::Z2))]);
    for (name, form, expected) in [
        ("model d(rho) on rescaled coframe", &hat_cof.rho, &d_rho_hat),
        ("model d(kappa) on rescaled coframe", &hat_cof.kappa, &d_kappa_hat),
        ("model d(zeta_hat)", &hat_cof.zeta, &d_zeta_hat),
    ] {
        let computed = d_coframe(&hat_frame, form);
        let s = check_structure_table(name, &computed, expected, spec);
        suite.checks.extend(s.checks);
    }

    suite
}

/// Run tangency, commutator table, closure, all seven flow suites, the
/// model structure tables and the flow-map graph identities.
pub fn model_suite(spec: &SampleSpec) -> Vec<Suite> {
    let mut out = Vec::new();
    out.push(ambient::commutator_table_check());
    out.push(ambient::rigid_closure_check());
    let f = mlc_graph();
    let mut tangency = Suite::new("tangency");
    let tangency_spec = SampleSpec { count: spec.count.max(10), ..spec.clone() };
    for i in 1..=10 {
        tangency.push(ambient::tangency_check(i, &f, &tangency_spec));
    }
    out.push(tangency);
    for i in 1..=7 {
        out.push(flows::flow_checks(i, &f, spec));
    }
    out.push(model_structure_suite(spec));
    out.push(flow_transform_suite(spec));
    out
}

/// Fixed-time flows are rigid maps; pushing the model graph through them
/// must reproduce the model graph exactly (exact-mode flows only).
pub fn flow_transform_suite(spec: &SampleSpec) -> Suite {
    let mut suite = Suite::new("flow_maps_preserve_model");
    let h = match validate(&mlc_graph(), spec) {
        Ok(h) => h,
        Err(r) => {
            suite.push(Check::fail("model validates", format!("{:?}", r.failures())));
            return suite;
        }
    };

    let cases: Vec<(String, RigidMap)> = vec![
        (
            "vertical translation flow".into(),
            RigidMap {
                name: "flow-1".into(),
                f1: Expr::var(Var::Z1),
                f2: Expr::var(Var::Z2),
                a: crate::scalar::rat_int(1),
                g: Expr::zero(), // an imaginary translation drops out of the graph
                inv1: Expr::var(Var::Z1),
                inv2: Expr::var(Var::Z2),
            },
        ),
        (
            "real-exponential flow at E = 2".into(),
            RigidMap {
                name: "flow-2".into(),
                f1: Expr::mul(Expr::int(2), Expr::var(Var::Z1)),
                f2: Expr::var(Var::Z2),
                a: crate::scalar::rat_int(4),
                g: Expr::zero(),
                inv1: Expr::div(Expr::var(Var::Z1), Expr::int(2)),
                inv2: Expr::var(Var::Z2),
            },
        ),
        ("affine flow at t = 2".into(), {
            let t = Expr::int(2);
            let z2m1 = Expr::sub(Expr::var(Var::Z2), Expr::one());
            RigidMap {
                name: "flow-4".into(),
                f1: Expr::add(Expr::mul(z2m1.clone(), t.clone()), Expr::var(Var::Z1)),
                f2: Expr::var(Var::Z2),
                a: crate::scalar::rat_int(1),
                g: Expr::neg(Expr::add(
                    Expr::mul(z2m1.clone(), Expr::pow(t.clone(), 2)),
                    Expr::product(vec![Expr::int(2), Expr::var(Var::Z1), t.clone()]),
                )),
                inv1: Expr::sub(Expr::var(Var::Z1), Expr::mul(z2m1, t)),
                inv2: Expr::var(Var::Z2),
            }
        }),
    ];

    for (label, map) in cases {
        match transform_surface(&h, &map, spec) {
            Ok(image) => {
                let delta = Expr::sub(image.graph().clone(), h.graph().clone());
                crate::hypersurface::push_zero(
                    &mut suite,
                    format!("{label} maps the model graph to itself"),
                    &delta,
                    spec,
                );
            }
            Err(e) => suite.push(Check::fail(label, e)),
        }
    }
    suite
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_graph_values() {
        let mut p = crate::expr::Point::new();
        p.set_conj_pair(Var::Z1, crate::scalar::GaussRat::from_int(1));
        p.set_conj_pair(Var::Z2, crate::scalar::GaussRat::zero());
        let v = crate::expr::eval_exact(&mlc_graph(), &p).unwrap();
        assert_eq!(v, crate::scalar::GaussRat::from_int(1));
        let spec = SampleSpec::default();
        let delta = Expr::sub(conjugate(&mlc_graph()), mlc_graph());
        assert!(is_zero_on_samples(&delta, &spec).unwrap().zero);
    }

    #[test]
    fn tube_fixtures_validate() {
        let spec = SampleSpec::default();
        assert!(validate(&tube_quadratic_graph(), &spec).is_ok());
        assert!(validate(&tube_cubic_graph(), &spec).is_ok());
    }

    #[test]
    fn identity_map_fixes_graph() {
        let spec = SampleSpec::default();
        let h = validate(&mlc_graph(), &spec).unwrap();
        let image = transform_surface(&h, &RigidMap::identity(), &spec).unwrap();
        let delta = Expr::sub(image.graph().clone(), h.graph().clone());
        assert!(is_zero_on_samples(&delta, &spec).unwrap().zero);
    }

    #[test]
    fn shear_and_dilation_images_validate() {
        let spec = SampleSpec::default();
        let h = validate(&mlc_graph(), &spec).unwrap();
        for map in [RigidMap::shear(), RigidMap::dilation(), RigidMap::quadratic_mix()] {
            let image = transform_surface(&h, &map, &spec)
                .unwrap_or_else(|e| panic!("{} fails: {e}", map.name));
            let brackets = image.check_bracket_identities(&spec);
            assert!(brackets.all_pass(), "{}: {:?}", map.name, brackets.failures());
        }
    }

    #[test]
    fn dilation_scales_graph() {
        let spec = SampleSpec::default();
        let h = validate(&mlc_graph(), &spec).unwrap();
        let image = transform_surface(&h, &RigidMap::dilation(), &spec).unwrap();
        let delta =
            Expr::sub(image.graph().clone(), Expr::mul(Expr::int(3), h.graph().clone()));
        assert!(is_zero_on_samples(&delta, &spec).unwrap().zero);
    }

    #[test]
    fn quadratic_mix_produces_nonzero_p() {
        let spec = SampleSpec::default();
        let h = validate(&mlc_graph(), &spec).unwrap();
        let image = transform_surface(&h, &RigidMap::quadratic_mix(), &spec).unwrap();
        assert!(!is_zero_on_samples(image.p_fun(), &spec).unwrap().zero);
        // P differs from its conjugate there, so bar-placement tests bite
        let delta = Expr::sub(conjugate(image.p_fun()), image.p_fun().clone());
        assert!(!is_zero_on_samples(&delta, &spec).unwrap().zero);
    }

    #[test]
    fn model_structure_tables_match() {
        let spec = SampleSpec::default();
        let s = model_structure_suite(&spec);
        assert!(s.all_pass(), "{:?}", s.failures());
    }

    #[test]
    fn flow_maps_fix_model() {
        let spec = SampleSpec::default();
        let s = flow_transform_suite(&spec);
        assert!(s.all_pass(), "{:?}", s.failures());
    }

    #[test]
    fn bad_inverse_rejected() {
        let mut map = RigidMap::shear();
        map.inv1 = Expr::var(Var::Z1);
        assert!(map.check_inverse(&SampleSpec::default()).is_err());
    }
}
