//! Integration checks across the surface corpus: the model, its rigid
//! transforms, and the two tube fixtures. Every structural suite must
//! pass on every corpus member, and the bar-placement disambiguations
//! must resolve the same way wherever they are discriminating.

use crcartan::expr::{is_zero_on_samples, SampleSpec};
use crcartan::hypersurface::{validate, Hypersurface};
use crcartan::invariants;
use crcartan::model::{
    mlc_graph, transform_surface, tube_cubic_graph, tube_quadratic_graph, RigidMap,
};

fn spec() -> SampleSpec {
    SampleSpec::default()
}

fn corpus() -> Vec<(String, Hypersurface)> {
    let s = spec();
    let model = validate(&mlc_graph(), &s).unwrap();
    let mut out = vec![("mlc".to_string(), model.clone())];
    for map in [RigidMap::shear(), RigidMap::dilation(), RigidMap::quadratic_mix()] {
        let image = transform_surface(&model, &map, &s).unwrap();
        out.push((format!("{}(mlc)", map.name), image));
    }
    out.push(("tube-lc".into(), validate(&tube_quadratic_graph(), &s).unwrap()));
    out.push(("tube-cubic".into(), validate(&tube_cubic_graph(), &s).unwrap()));
    out
}

#[test]
fn bracket_identities_across_corpus() {
    let s = spec();
    for (name, h) in corpus() {
        let suite = h.check_bracket_identities(&s);
        assert!(suite.all_pass(), "{name}: {:?}", suite.failures());
    }
}

#[test]
fn lemma_identities_across_corpus() {
    let s = spec();
    for (name, h) in corpus() {
        let suite = h.check_lemma_identities(&s);
        assert!(suite.all_pass(), "{name}: {:?}", suite.failures());
    }
}

#[test]
fn initial_structure_across_corpus() {
    let s = spec();
    for (name, h) in corpus() {
        let suite = h.check_structure_initial(&s);
        assert!(suite.all_pass(), "{name}: {:?}", suite.failures());
    }
}

#[test]
fn final_structure_across_corpus() {
    let s = spec();
    for (name, h) in corpus() {
        let suite = h.check_structure_final_base(&s);
        assert!(suite.all_pass(), "{name}: {:?}", suite.failures());
        let duality = Hypersurface::check_duality(h.frame(), h.coframe(), &s);
        assert!(duality.all_pass(), "{name} duality: {:?}", duality.failures());
        let (frame, coframe) = h.zeta_prime_structure();
        let duality2 = Hypersurface::check_duality(&frame, &coframe, &s);
        assert!(duality2.all_pass(), "{name} adapted duality: {:?}", duality2.failures());
    }
}

#[test]
fn cross_routes_and_parameter_identities_across_corpus() {
    let s = spec();
    for (name, h) in corpus() {
        let routes = invariants::check_cross_routes(&h, &s);
        assert!(routes.all_pass(), "{name}: {:?}", routes.failures());
        let q0 = invariants::check_q0(&h, &s);
        assert!(q0.all_pass(), "{name}: {:?}", q0.failures());
        let prop = invariants::check_i0_derivative_identity(&h, &s);
        assert!(prop.all_pass(), "{name}: {:?}", prop.failures());
        let lemma = invariants::check_lemma_torsion_identity(&h, &s);
        assert!(lemma.all_pass(), "{name}: {:?}", lemma.failures());
        let lifted = invariants::check_lifted_identity(&h, &s);
        assert!(lifted.all_pass(), "{name}: {:?}", lifted.failures());
    }
}

#[test]
fn vanishing_preserved_by_rigid_transforms() {
    let s = spec();
    let model = validate(&mlc_graph(), &s).unwrap();
    for map in [RigidMap::shear(), RigidMap::dilation(), RigidMap::quadratic_mix()] {
        let image = transform_surface(&model, &map, &s).unwrap();
        assert!(
            is_zero_on_samples(&invariants::i0_expr(&image), &s).unwrap().zero,
            "{}: first invariant",
            map.name
        );
        assert!(
            is_zero_on_samples(&invariants::v0_expr(&image), &s).unwrap().zero,
            "{}: second invariant",
            map.name
        );
    }
}

/// The bar-placement ambiguities must resolve, on a surface where the two
/// candidates differ, to the same variant everywhere: the `K(conj P)`
/// identity carries an unconjugated `P` on its right side, and the
/// `L1(k)` closed form takes the `+quotient` sign.
#[test]
fn bar_placement_disambiguation_on_discriminating_surface() {
    let s = spec();
    let model = validate(&mlc_graph(), &s).unwrap();
    let image = transform_surface(&model, &RigidMap::quadratic_mix(), &s).unwrap();
    let suite = image.check_lemma_identities(&s);
    assert!(suite.all_pass(), "{:?}", suite.failures());
    let note_text = suite.notes.join("\n");
    assert!(
        note_text.contains("K(conj P) identity: resolved to [K(Pb) = -P L1b(k) - L1b(L1(k))]"),
        "missing the expected resolution: {note_text}"
    );
    assert!(
        note_text.contains("L1(k) closed form: resolved to [L1(k) = +quotient]"),
        "missing the sign resolution: {note_text}"
    );
}

/// Cyclic consistency of the structure coefficients: for every coframe
/// element and every frame triple, the alternating sum
/// `w([[fa,fb],fc]) + w([[fb,fc],fa]) + w([[fc,fa],fb])` vanishes.
#[test]
fn structure_tables_satisfy_cyclic_consistency() {
    let s = spec();
    let h = validate(&mlc_graph(), &s).unwrap();
    let fields = h.frame().fields();
    let forms = h.coframe().forms();
    for a in 0..5 {
        for b in (a + 1)..5 {
            for c in (b + 1)..5 {
                let (fa, fb, fc) = (fields[a], fields[b], fields[c]);
                let cyc = fa
                    .lie_bracket(fb)
                    .lie_bracket(fc)
                    .add(&fb.lie_bracket(fc).lie_bracket(fa))
                    .add(&fc.lie_bracket(fa).lie_bracket(fb));
                for (i, form) in forms.iter().enumerate() {
                    let value = form.apply(&cyc);
                    let zt = is_zero_on_samples(&value, &s).unwrap();
                    assert!(zt.zero, "form {i}, triple ({a},{b},{c}): {:?}", zt.witness);
                }
            }
        }
    }
}

/// Verdict-level invariance: classification commutes with rigid maps on
/// both a vanishing and a non-vanishing fixture.
#[test]
fn classification_stable_across_corpus() {
    let s = spec();
    use crcartan::invariants::Verdict;
    for (name, h) in corpus() {
        let expected = if name.contains("tube-cubic") {
            Verdict::NotModelEquivalent
        } else {
            Verdict::ModelEquivalent
        };
        assert_eq!(invariants::classify(&h, &s).verdict, expected, "{name}");
    }
}
