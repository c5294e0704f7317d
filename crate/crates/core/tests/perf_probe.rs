//! Temporary timing probe (removed before finalization).

use crcartan::expr::SampleSpec;
use crcartan::hypersurface::validate;
use crcartan::invariants;
use crcartan::model::{mlc_graph, transform_surface, tube_cubic_graph, RigidMap};

#[test]
#[ignore]
fn probe() {
    let s = SampleSpec::default();
    let model = validate(&mlc_graph(), &s).unwrap();
    let qm = transform_surface(&model, &RigidMap::quadratic_mix(), &s).unwrap();
    let shear = transform_surface(&model, &RigidMap::shear(), &s).unwrap();
    let cubic = validate(&tube_cubic_graph(), &s).unwrap();
    for (name, h) in [("mlc", &model), ("shear", &shear), ("qm", &qm), ("cubic", &cubic)] {
        let t0 = std::time::Instant::now();
        let suite = h.check_structure_final_base(&s);
        assert!(suite.all_pass());
        println!("{name}: final_base {:?}", t0.elapsed());
        let t1 = std::time::Instant::now();
        let routes = invariants::check_cross_routes(h, &s);
        assert!(routes.all_pass());
        println!("{name}: cross_routes {:?}", t1.elapsed());
        let t2 = std::time::Instant::now();
        let lemma = invariants::check_lemma_torsion_identity(h, &s);
        assert!(lemma.all_pass());
        println!("{name}: torsion_identity {:?}", t2.elapsed());
        let t3 = std::time::Instant::now();
        let lifted = invariants::check_lifted_identity(h, &s);
        assert!(lifted.all_pass());
        println!("{name}: lifted {:?}", t3.elapsed());
    }
}
