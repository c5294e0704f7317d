//! One-parameter flows of the first seven automorphism generators, with
//! exact or floating evaluation, flow-equation residual checks, rigid-map
//! shape checks, group law and surface preservation.
//!
//! Time representation. Three of the flows are polynomial in the time
//! `t`; the others are rational in the formal parameter `E` standing for
//! `e^t` (flows 2, 6, 7) or `e^{it}` (flow 3), with the differentiation
//! rules `dE/dt = E` resp. `dE/dt = iE`. In exact mode the caller supplies
//! a rational `t` (polynomial flows), a positive rational `E` (real
//! exponential) or a rational point on the unit circle (imaginary
//! exponential); flows 6 and 7 are evaluated in float mode only, where
//! `E = exp(t)`.

use crate::expr::{
    differentiate, eval_exact, eval_float, simplify_basic, substitute, zero_test_with, Expr,
    FloatAssignment, Point, SampleSpec, Var,
};
use crate::report::{Check, Suite};
use crate::scalar::{GaussRat, MpComplex, MpFloat, Rat};
use std::collections::BTreeMap;

use super::ambient::{infinitesimal_fields, on_surface_point, subst_ambient};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TimeRep {
    /// Closed form polynomial in the real time `t`.
    Poly,
    /// Closed form rational in `E = e^t`.
    ExpReal,
    /// Closed form rational in `E = e^{it}`.
    ExpImag,
}

/// Closed-form flow map of one generator, as expressions in the initial
/// point `(z1, z2, w)` and the time parameter.
#[derive(Clone, Debug)]
pub struct FlowFamily {
    pub index: usize,
    pub gamma: [Expr; 3],
    pub rep: TimeRep,
}

fn v(x: Var) -> Expr {
    Expr::var(x)
}

/// The flow closed forms. For flows 6 and 7 these are the forms that
/// satisfy the flow equation; [`variant_forms`] carries the alternate
/// transcriptions tested by [`flow_checks`].
pub fn family(index: usize) -> FlowFamily {
    let (z1, z2, w, t, e) = (v(Var::Z1), v(Var::Z2), v(Var::W), v(Var::T), v(Var::E));
    match index {
        1 => FlowFamily {
            index,
            gamma: [z1, z2, Expr::add(w, Expr::mul(Expr::i(), t))],
            rep: TimeRep::Poly,
        },
        2 => FlowFamily {
            index,
            gamma: [
                Expr::mul(e.clone(), z1),
                z2,
                Expr::mul(Expr::pow(e, 2), w),
            ],
            rep: TimeRep::ExpReal,
        },
        3 => FlowFamily {
            index,
            gamma: [Expr::mul(e.clone(), z1), Expr::mul(Expr::pow(e, 2), z2), w],
            rep: TimeRep::ExpImag,
        },
        4 => {
            // ((z2-1)t + z1, z2, -(z2-1)t^2 - 2 z1 t + w)
            let z2m1 = Expr::sub(z2.clone(), Expr::one());
            FlowFamily {
                index,
                gamma: [
                    Expr::add(Expr::mul(z2m1.clone(), t.clone()), z1.clone()),
                    z2,
                    Expr::sum(vec![
                        Expr::neg(Expr::mul(z2m1, Expr::pow(t.clone(), 2))),
                        Expr::neg(Expr::product(vec![Expr::int(2), z1, t])),
                        w,
                    ]),
                ],
                rep: TimeRep::Poly,
            }
        }
        5 => {
            // (z1 + i(z2+1)t, z2, w - 2i z1 t + (z2+1)t^2)
            let z2p1 = Expr::add(z2.clone(), Expr::one());
            FlowFamily {
                index,
                gamma: [
                    Expr::add(z1.clone(), Expr::product(vec![Expr::i(), z2p1.clone(), t.clone()])),
                    z2,
                    Expr::sum(vec![
                        w,
                        Expr::neg(Expr::product(vec![Expr::int(2), Expr::i(), z1, t.clone()])),
                        Expr::mul(z2p1, Expr::pow(t, 2)),
                    ]),
                ],
                rep: TimeRep::Poly,
            }
        }
        6 => {
            // A = 1+z2, B = (1-z2) E^2, D = A + B
            let a = Expr::add(Expr::one(), z2.clone());
            let b = Expr::mul(Expr::sub(Expr::one(), z2.clone()), Expr::pow(e.clone(), 2));
            let d = Expr::add(a.clone(), b);
            let one_m_z2 = Expr::sub(Expr::one(), z2.clone());
            FlowFamily {
                index,
                gamma: [
                    // 2 z1 E / D
                    Expr::div(Expr::product(vec![Expr::int(2), z1.clone(), e]), d.clone()),
                    // (A - B') / D with B' = B
                    Expr::div(
                        Expr::sub(
                            Expr::add(Expr::one(), z2.clone()),
                            Expr::mul(Expr::sub(Expr::one(), z2), Expr::pow(v(Var::E), 2)),
                        ),
                        d.clone(),
                    ),
                    // w - z1^2/(1-z2) + 2 z1^2 / ((1-z2) D)
                    Expr::sum(vec![
                        w,
                        Expr::neg(Expr::div(Expr::pow(z1.clone(), 2), one_m_z2.clone())),
                        Expr::div(
                            Expr::mul(Expr::int(2), Expr::pow(z1, 2)),
                            Expr::mul(one_m_z2, d),
                        ),
                    ]),
                ],
                rep: TimeRep::ExpReal,
            }
        }
        7 => {
            // sinh = (E - 1/E)/2, cosh = (E + 1/E)/2, tanh = (E^2-1)/(E^2+1)
            let sinh = Expr::div(Expr::sub(e.clone(), Expr::inv(e.clone())), Expr::int(2));
            let cosh = Expr::div(Expr::add(e.clone(), Expr::inv(e.clone())), Expr::int(2));
            let tanh = Expr::div(
                Expr::sub(Expr::pow(e.clone(), 2), Expr::one()),
                Expr::add(Expr::pow(e, 2), Expr::one()),
            );
            let den = Expr::add(Expr::mul(z2.clone(), sinh.clone()), Expr::mul(Expr::i(), cosh));
            FlowFamily {
                index,
                gamma: [
                    Expr::div(Expr::mul(Expr::i(), z1.clone()), den.clone()),
                    // (z2 + i tanh) / (1 - i z2 tanh)
                    Expr::div(
                        Expr::add(z2.clone(), Expr::mul(Expr::i(), tanh.clone())),
                        Expr::sub(Expr::one(), Expr::product(vec![Expr::i(), z2, tanh])),
                    ),
                    Expr::add(w, Expr::div(Expr::mul(Expr::pow(z1, 2), sinh), den)),
                ],
                rep: TimeRep::ExpReal,
            }
        }
        other => panic!("no flow family for index {other}"),
    }
}

/// Alternate transcriptions of flow components whose source displays are
/// ambiguous. Each entry is `(label, component index, expression)`.
pub fn variant_forms(index: usize) -> Vec<(&'static str, usize, Expr)> {
    let (z1, z2, w, e) = (v(Var::Z1), v(Var::Z2), v(Var::W), v(Var::E));
    match index {
        6 => {
            let a = Expr::add(Expr::one(), z2.clone());
            let b = Expr::mul(Expr::sub(Expr::one(), z2.clone()), Expr::pow(e.clone(), 2));
            let d = Expr::add(a.clone(), b);
            let one_m_z2 = Expr::sub(Expr::one(), z2.clone());
            vec![
                (
                    "z1 component with redundant (1+z2) factor",
                    0,
                    Expr::div(
                        Expr::product(vec![Expr::int(2), z1.clone(), a.clone(), e]),
                        Expr::mul(a, d.clone()),
                    ),
                ),
                (
                    "w component with opposite correction signs",
                    2,
                    Expr::sum(vec![
                        w,
                        Expr::div(Expr::pow(z1.clone(), 2), one_m_z2.clone()),
                        Expr::neg(Expr::div(
                            Expr::mul(Expr::int(2), Expr::pow(z1, 2)),
                            Expr::mul(one_m_z2, d),
                        )),
                    ]),
                ),
            ]
        }
        7 => {
            let tanh = Expr::div(
                Expr::sub(Expr::pow(e.clone(), 2), Expr::one()),
                Expr::add(Expr::pow(e, 2), Expr::one()),
            );
            vec![(
                "z2 component with an extra factor i",
                1,
                Expr::div(
                    Expr::sub(Expr::neg(z2.clone()), Expr::mul(Expr::i(), tanh.clone())),
                    Expr::add(Expr::i(), Expr::mul(z2, tanh)),
                ),
            )]
        }
        _ => vec![],
    }
}

/// `d/dt` through the time representation.
fn d_time(e: &Expr, rep: TimeRep) -> Expr {
    match rep {
        TimeRep::Poly => differentiate(e, Var::T),
        TimeRep::ExpReal => Expr::sum(vec![
            Expr::mul(v(Var::E), differentiate(e, Var::E)),
            Expr::mul(v(Var::Eb), differentiate(e, Var::Eb)),
        ]),
        TimeRep::ExpImag => Expr::sum(vec![
            Expr::product(vec![Expr::i(), v(Var::E), differentiate(e, Var::E)]),
            Expr::neg(Expr::product(vec![Expr::i(), v(Var::Eb), differentiate(e, Var::Eb)])),
        ]),
    }
}

/// Flow-equation residual `d gamma / dt - X(gamma)` for one component set.
pub fn ode_residuals(index: usize, gamma: &[Expr; 3], rep: TimeRep) -> [Expr; 3] {
    let x = &infinitesimal_fields()[index - 1];
    std::array::from_fn(|c| {
        let coeff = [&x.z1, &x.z2, &x.w][c];
        let along = subst_ambient(coeff, &gamma[0], &gamma[1], &gamma[2]);
        Expr::sub(d_time(&gamma[c], rep), along)
    })
}

/// Point generator covering the flow variables; the time parameter is
/// drawn per representation (real `t`, positive `E`, or unit-circle `E`).
fn flow_point_gen(
    rep: TimeRep,
) -> impl FnMut(&mut rand_chacha::ChaCha8Rng) -> Result<Point, crate::expr::SampleError> {
    use crate::expr::sample::{rand_gauss, rand_rat};
    move |rng| {
        let spec = SampleSpec::default();
        let mut p = Point::new();
        p.set_conj_pair(Var::Z1, rand_gauss(rng, spec.num_bound, spec.den_bound));
        p.set_conj_pair(Var::Z2, rand_gauss(rng, spec.num_bound, spec.den_bound));
        p.set_conj_pair(Var::W, rand_gauss(rng, spec.num_bound, spec.den_bound));
        match rep {
            TimeRep::Poly => {
                p.set_conj_pair(Var::T, GaussRat::from_rat(rand_rat(rng, spec.num_bound, spec.den_bound)));
            }
            TimeRep::ExpReal => {
                // positive rational
                let mut r = rand_rat(rng, spec.num_bound, spec.den_bound);
                if r.numer() <= &num_bigint::BigInt::from(0) {
                    r = &Rat::new(1.into(), 2.into()) - &r;
                }
                let e = GaussRat::from_rat(r);
                p.set_raw(Var::E, e.clone());
                p.set_raw(Var::Eb, e);
            }
            TimeRep::ExpImag => {
                // rational unit-circle point ((1-m^2) + 2mi)/(1+m^2)
                let m = GaussRat::from_rat(rand_rat(rng, spec.num_bound, spec.den_bound));
                let m2 = &m * &m;
                let den = (&GaussRat::one() + &m2).inv().expect("1+m^2 > 0");
                let re = &(&GaussRat::one() - &m2) * &den;
                let im = &(&m + &m) * &den;
                let e = &re + &(&GaussRat::i() * &im);
                p.set_raw(Var::Eb, e.conj());
                p.set_raw(Var::E, e);
            }
        }
        Ok(p)
    }
}

/// Exact flow of a point. `param` is the rational time `t` for the
/// polynomial flows, a positive rational `E = e^t` for flow 2, or a
/// rational unit-modulus `E = e^{it}` for flow 3. Flows 6 and 7 are float
/// mode only.
pub fn flow_exact(
    index: usize,
    param: &GaussRat,
    point: &[GaussRat; 3],
) -> Result<[GaussRat; 3], String> {
    if index == 6 || index == 7 {
        return Err(format!("flow {index} is evaluated in float mode only"));
    }
    let fam = family(index);
    let mut p = Point::new();
    p.set_raw(Var::Z1, point[0].clone());
    p.set_raw(Var::Z2, point[1].clone());
    p.set_raw(Var::W, point[2].clone());
    match fam.rep {
        TimeRep::Poly => {
            if !param.is_real() {
                return Err("flow time must be real".into());
            }
            p.set_raw(Var::T, param.clone());
        }
        TimeRep::ExpReal => {
            if !param.is_real() || param.re <= Rat::from_integer(0.into()) {
                return Err("exponential parameter must be a positive rational".into());
            }
            p.set_raw(Var::E, param.clone());
        }
        TimeRep::ExpImag => {
            if param.norm_sq() != Rat::from_integer(1.into()) {
                return Err("parameter must lie on the unit circle".into());
            }
            p.set_raw(Var::E, param.clone());
        }
    }
    let mut out = Vec::with_capacity(3);
    for g in &fam.gamma {
        out.push(eval_exact(g, &p).map_err(|e| e.to_string())?);
    }
    Ok(out.try_into().unwrap())
}

/// Floating flow of a point at real time `t` (any of the seven flows
/// except the imaginary-exponential one).
pub fn flow_float(
    index: usize,
    t: &MpFloat,
    point: &[MpComplex; 3],
    prec: u32,
) -> Result<[MpComplex; 3], String> {
    let fam = family(index);
    let mut fa = FloatAssignment::new();
    fa.set(Var::Z1, point[0].clone());
    fa.set(Var::Z2, point[1].clone());
    fa.set(Var::W, point[2].clone());
    match fam.rep {
        TimeRep::Poly => fa.set(Var::T, MpComplex::from_real(t.clone())),
        TimeRep::ExpReal => {
            let e = t.exp(prec);
            fa.set(Var::E, MpComplex::from_real(e.clone()));
            fa.set(Var::Eb, MpComplex::from_real(e));
        }
        TimeRep::ExpImag => {
            return Err("imaginary-exponential flow has no float mode; use an exact unit-circle parameter".into())
        }
    }
    let mut out = Vec::with_capacity(3);
    for g in &fam.gamma {
        out.push(eval_float(g, &fa, prec).map_err(|e| e.to_string())?);
    }
    Ok(out.try_into().unwrap())
}

fn exact_param_for(rep: TimeRep) -> GaussRat {
    match rep {
        TimeRep::Poly => GaussRat::from_pair(3, 7, 0, 1),
        TimeRep::ExpReal => GaussRat::from_pair(5, 3, 0, 1),
        TimeRep::ExpImag => GaussRat::from_pair(3, 5, 4, 5),
    }
}

fn param_inverse(rep: TimeRep, param: &GaussRat) -> GaussRat {
    match rep {
        TimeRep::Poly => -param,
        _ => param.inv().expect("nonzero parameter"),
    }
}

fn param_compose(rep: TimeRep, a: &GaussRat, b: &GaussRat) -> GaussRat {
    match rep {
        TimeRep::Poly => a + b,
        _ => a * b,
    }
}

const FLOAT_TOL: f64 = 1e-9;
const FLOAT_PREC: u32 = 96;

fn float_times() -> Vec<MpFloat> {
    [(1i64, 4i64), (-1, 4), (1, 2), (-1, 2)]
        .iter()
        .map(|&(n, d)| MpFloat::from_rat(&crate::scalar::rat(n, d), FLOAT_PREC))
        .collect()
}

/// The full residual/shape/group-law/surface suite for one flow.
pub fn flow_checks(index: usize, f_graph: &Expr, spec: &SampleSpec) -> Suite {
    let mut suite = Suite::new(format!("flow_X{index}"));
    let fam = family(index);
    let float_only = matches!(index, 6 | 7);

    // (a) flow-equation residual
    if float_only {
        let residuals = ode_residuals(index, &fam.gamma, fam.rep);
        let mut worst = 0f64;
        let mut ok = true;
        for t in float_times() {
            let mut gen = flow_point_gen(fam.rep);
            let mut rng = spec.rng();
            for _ in 0..5 {
                let p = gen(&mut rng).unwrap();
                let mut fa = p.to_float(FLOAT_PREC);
                let e = t.exp(FLOAT_PREC);
                fa.set(Var::E, MpComplex::from_real(e.clone()));
                fa.set(Var::Eb, MpComplex::from_real(e));
                for r in &residuals {
                    match eval_float(r, &fa, FLOAT_PREC) {
                        Ok(val) => {
                            let mag = val.mag_f64();
                            worst = worst.max(mag);
                            if mag > FLOAT_TOL {
                                ok = false;
                            }
                        }
                        Err(_) => {} // excluded point (vanishing denominator)
                    }
                }
            }
        }
        suite.push(if ok {
            Check::pass_with(
                format!("X{index} flow equation (float)"),
                format!("max residual {worst:.2e}"),
            )
        } else {
            Check::fail(format!("X{index} flow equation (float)"), format!("residual {worst:.2e}"))
        });
    } else {
        let residuals = ode_residuals(index, &fam.gamma, fam.rep);
        for (c, r) in residuals.iter().enumerate() {
            let name = format!("X{index} flow equation, component {c}");
            match zero_test_with(r, spec, flow_point_gen(fam.rep)) {
                Ok(zt) => suite.push(Check::from_zero_test(name, &zt)),
                Err(e) => suite.push(Check::fail(name, e.to_string())),
            }
        }
    }

    // variant transcriptions: record which candidates satisfy the flow
    // equation and the initial condition
    for (label, comp, variant) in variant_forms(index) {
        let mut gamma = fam.gamma.clone();
        gamma[comp] = variant.clone();
        let residual = ode_residuals(index, &gamma, fam.rep)[comp].clone();
        // difference from the adopted form
        let delta = Expr::sub(variant, fam.gamma[comp].clone());
        let delta_zero = matches!(
            zero_test_with(&delta, spec, flow_point_gen(fam.rep)),
            Ok(zt) if zt.zero
        );
        let residual_zero = if float_only {
            let mut gen = flow_point_gen(fam.rep);
            let mut rng = spec.rng();
            let mut ok = true;
            for t in float_times() {
                for _ in 0..3 {
                    let p = gen(&mut rng).unwrap();
                    let mut fa = p.to_float(FLOAT_PREC);
                    let e = t.exp(FLOAT_PREC);
                    fa.set(Var::E, MpComplex::from_real(e.clone()));
                    fa.set(Var::Eb, MpComplex::from_real(e));
                    if let Ok(val) = eval_float(&residual, &fa, FLOAT_PREC) {
                        if val.mag_f64() > FLOAT_TOL {
                            ok = false;
                        }
                    }
                }
            }
            ok
        } else {
            matches!(zero_test_with(&residual, spec, flow_point_gen(fam.rep)), Ok(zt) if zt.zero)
        };
        if delta_zero {
            suite.note(format!(
                "X{index} variant [{label}]: identical to the adopted form as a rational function"
            ));
        } else if residual_zero {
            suite.note(format!(
                "X{index} variant [{label}]: differs from the adopted form yet satisfies the flow equation"
            ));
        } else {
            suite.note(format!(
                "X{index} variant [{label}]: fails the flow equation; the adopted form satisfies it"
            ));
        }
        suite.push(Check::pass_with(format!("X{index} variant [{label}] examined"), if delta_zero { "equal" } else if residual_zero { "alternative solution" } else { "rejected" }));
    }

    // (b) identity at time zero
    {
        let mut m = BTreeMap::new();
        match fam.rep {
            TimeRep::Poly => {
                m.insert(Var::T, Expr::zero());
            }
            _ => {
                m.insert(Var::E, Expr::one());
                m.insert(Var::Eb, Expr::one());
            }
        }
        let targets = [Var::Z1, Var::Z2, Var::W];
        let mut ok = true;
        for (g, tv) in fam.gamma.iter().zip(targets) {
            let at0 = simplify_basic(&substitute(g, &m));
            let delta = Expr::sub(at0, Expr::var(tv));
            match zero_test_with(&delta, spec, flow_point_gen(fam.rep)) {
                Ok(zt) if zt.zero => {}
                _ => ok = false,
            }
        }
        suite.push(if ok {
            Check::pass(format!("X{index} flow at time 0 is the identity"))
        } else {
            Check::fail(format!("X{index} flow at time 0 is the identity"), "mismatch")
        });
    }

    // (c) rigid shape: first two components independent of w; third equals
    // a*w + g with a constant and real
    {
        let dz1_dw = differentiate(&fam.gamma[0], Var::W);
        let dz2_dw = differentiate(&fam.gamma[1], Var::W);
        let a = differentiate(&fam.gamma[2], Var::W);
        let mut ok = dz1_dw.is_zero_const() && dz2_dw.is_zero_const();
        for var in [Var::Z1, Var::Z2, Var::W] {
            if !differentiate(&a, var).is_zero_const() {
                ok = false;
            }
        }
        // reality of the multiplier: conj(a) - a vanishes when the time
        // parameter is real (E real for the real-exponential flows)
        let a_real = Expr::sub(crate::expr::conjugate(&a), a.clone());
        let real_ok = match fam.rep {
            TimeRep::ExpImag => a.is_one_const(),
            _ => matches!(zero_test_with(&a_real, spec, flow_point_gen(fam.rep)), Ok(zt) if zt.zero),
        };
        suite.push(if ok && real_ok {
            Check::pass(format!("X{index} flow has rigid shape (a w + g(z1,z2), a real)"))
        } else {
            Check::fail(format!("X{index} flow has rigid shape (a w + g(z1,z2), a real)"), "shape violated")
        });
    }

    // (d) group law and inverse, (e) surface preservation
    if float_only {
        let mut rng = spec.rng();
        let mut worst = 0f64;
        let mut ok = true;
        let ts = float_times();
        for _ in 0..5 {
            let p = on_surface_point(f_graph, &mut rng, spec).unwrap();
            let triple = [
                p.get(Var::Z1).unwrap().to_mp(FLOAT_PREC),
                p.get(Var::Z2).unwrap().to_mp(FLOAT_PREC),
                p.get(Var::W).unwrap().to_mp(FLOAT_PREC),
            ];
            for s in &ts {
                for t in &ts {
                    let one = match flow_float(index, t, &triple, FLOAT_PREC) {
                        Ok(x) => x,
                        Err(_) => continue,
                    };
                    let two = match flow_float(index, s, &one, FLOAT_PREC) {
                        Ok(x) => x,
                        Err(_) => continue,
                    };
                    let st = s.add(t, FLOAT_PREC);
                    let direct = match flow_float(index, &st, &triple, FLOAT_PREC) {
                        Ok(x) => x,
                        Err(_) => continue,
                    };
                    for (aa, bb) in two.iter().zip(direct.iter()) {
                        let d = aa.sub(bb, FLOAT_PREC).mag_f64();
                        worst = worst.max(d);
                        if d > FLOAT_TOL {
                            ok = false;
                        }
                    }
                }
                // surface preservation: Re(w') = F(z')
                if let Ok(img) = flow_float(index, s, &triple, FLOAT_PREC) {
                    let mut fa = FloatAssignment::new();
                    fa.set(Var::Z1, img[0].clone());
                    fa.set(Var::Z2, img[1].clone());
                    fa.set(Var::Zb1, img[0].conj());
                    fa.set(Var::Zb2, img[1].conj());
                    if let Ok(fval) = eval_float(f_graph, &fa, FLOAT_PREC) {
                        let residual = img[2].re.sub(&fval.re, FLOAT_PREC).to_f64().abs();
                        worst = worst.max(residual);
                        if residual > FLOAT_TOL {
                            ok = false;
                        }
                    }
                }
            }
        }
        suite.push(if ok {
            Check::pass_with(format!("X{index} group law and surface preservation (float)"), format!("max deviation {worst:.2e}"))
        } else {
            Check::fail(format!("X{index} group law and surface preservation (float)"), format!("deviation {worst:.2e}"))
        });
    } else {
        let p0 = exact_param_for(fam.rep);
        let p1 = param_inverse(fam.rep, &p0);
        let both = param_compose(fam.rep, &p0, &p0);
        let mut rng = spec.rng();
        let mut ok = true;
        let mut detail = String::new();
        for _ in 0..5 {
            let p = on_surface_point(f_graph, &mut rng, spec).unwrap();
            let triple = [
                p.get(Var::Z1).unwrap().clone(),
                p.get(Var::Z2).unwrap().clone(),
                p.get(Var::W).unwrap().clone(),
            ];
            let Ok(img) = flow_exact(index, &p0, &triple) else { continue };
            // inverse undoes the flow
            let back = flow_exact(index, &p1, &img);
            if back.as_ref().map(|b| b != &triple).unwrap_or(true) {
                ok = false;
                detail = "inverse does not restore the point".into();
            }
            // group law
            let twice = flow_exact(index, &p0, &img);
            let direct = flow_exact(index, &both, &triple);
            match (twice, direct) {
                (Ok(a), Ok(b)) if a == b => {}
                _ => {
                    ok = false;
                    detail = "group law violated".into();
                }
            }
            // surface preservation exact: Re(w') = F(z')
            let mut q = Point::new();
            q.set_raw(Var::Z1, img[0].clone());
            q.set_raw(Var::Zb1, img[0].conj());
            q.set_raw(Var::Z2, img[1].clone());
            q.set_raw(Var::Zb2, img[1].conj());
            if let Ok(fval) = eval_exact(f_graph, &q) {
                let re_w = GaussRat::from_rat(img[2].re.clone());
                if re_w != fval {
                    ok = false;
                    detail = format!("image off the surface: Re w' = {re_w}, F = {fval}");
                }
            }
        }
        suite.push(if ok {
            Check::pass(format!("X{index} group law, inverse, surface preservation (exact)"))
        } else {
            Check::fail(format!("X{index} group law, inverse, surface preservation (exact)"), detail)
        });
    }

    suite
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mlc() -> Expr {
        crate::expr::parse_expr("(z1*zb1 + (1/2)*z1^2*zb2 + (1/2)*zb1^2*z2) / (1 - z2*zb2)")
            .unwrap()
    }

    #[test]
    fn polynomial_flows_satisfy_equations_exactly() {
        let spec = SampleSpec::default();
        for i in [1, 4, 5] {
            let s = flow_checks(i, &mlc(), &spec);
            assert!(s.all_pass(), "flow {i}: {:?}", s.failures());
        }
    }

    #[test]
    fn exponential_flows_exact_in_formal_parameter() {
        let spec = SampleSpec::default();
        for i in [2, 3] {
            let s = flow_checks(i, &mlc(), &spec);
            assert!(s.all_pass(), "flow {i}: {:?}", s.failures());
        }
    }

    #[test]
    fn transcendental_flows_within_float_tolerance() {
        let spec = SampleSpec::default();
        for i in [6, 7] {
            let s = flow_checks(i, &mlc(), &spec);
            assert!(s.all_pass(), "flow {i}: {:?}", s.failures());
            // the ambiguous transcriptions must have been examined
            assert!(!s.notes.is_empty());
        }
    }

    #[test]
    fn flow1_translates_imaginary_part() {
        let t = GaussRat::from_pair(2, 1, 0, 1);
        let p = [GaussRat::from_int(1), GaussRat::from_int(0), GaussRat::from_int(5)];
        let img = flow_exact(1, &t, &p).unwrap();
        assert_eq!(img[0], p[0]);
        assert_eq!(img[1], p[1]);
        assert_eq!(img[2], &p[2] + &GaussRat::from_pair(0, 1, 2, 1));
    }

    #[test]
    fn flow4_closed_form_values() {
        // ((z2-1)t + z1, z2, -(z2-1)t^2 - 2 z1 t + w)
        let t = GaussRat::from_int(2);
        let p = [GaussRat::from_int(3), GaussRat::from_int(2), GaussRat::from_int(7)];
        let img = flow_exact(4, &t, &p).unwrap();
        assert_eq!(img[0], GaussRat::from_int(5)); // (2-1)*2 + 3
        assert_eq!(img[1], GaussRat::from_int(2));
        assert_eq!(img[2], GaussRat::from_int(-9)); // -(1)*4 - 12 + 7
    }

    #[test]
    fn float_mode_only_flows_reject_exact() {
        let p = [GaussRat::one(), GaussRat::zero(), GaussRat::one()];
        assert!(flow_exact(6, &GaussRat::one(), &p).is_err());
    }
}
