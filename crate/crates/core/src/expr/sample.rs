//! Probabilistic identity testing over exact rational points.
//!
//! Every `identically zero` claim in the engine is decided by exact
//! evaluation at pseudo-random conjugate-consistent rational points. For a
//! nonzero rational function, a sampled point is a zero only when it lies
//! on the vanishing locus of the numerator; by the Schwartz–Zippel bound
//! the chance of that across `count` independent points drawn from a grid
//! of `(2*num_bound+1)*den_bound` values per coordinate is at most
//! `(d / N)^count` for degree `d` and grid size `N`, which at the defaults
//! (20 points, bounds 16) is negligible for every expression tested here.
//! A `true` verdict is therefore "zero at all sampled points", never a
//! certificate; witnesses are exact on failure.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::eval::{eval_exact, EvalError, FloatAssignment};
use super::{Expr, Var};
use crate::scalar::{GaussRat, Rat};

/// Default RNG seed used when none is configured.
pub const DEFAULT_SEED: u64 = 42;

/// Sampling policy for zero tests: point count, coordinate bounds, seed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleSpec {
    pub count: usize,
    pub num_bound: i64,
    pub den_bound: i64,
    pub seed: u64,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec { count: 20, num_bound: 16, den_bound: 16, seed: DEFAULT_SEED }
    }
}

impl SampleSpec {
    pub fn with_seed(seed: u64) -> Self {
        SampleSpec { seed, ..Default::default() }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// A conjugate-consistent rational assignment.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Point {
    map: BTreeMap<Var, GaussRat>,
}

impl Point {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, v: Var) -> Option<&GaussRat> {
        self.map.get(&v)
    }

    /// Assign `value` to `v` and the conjugate value to its partner.
    /// Real variables keep only the real part of `value`.
    pub fn set_conj_pair(&mut self, v: Var, value: GaussRat) {
        if v.is_real() {
            self.map.insert(v, GaussRat::from_rat(value.re));
        } else {
            self.map.insert(v.partner(), value.conj());
            self.map.insert(v, value);
        }
    }

    /// Raw assignment without touching the partner; used for on-surface
    /// constructions where `w` and `wb` are derived quantities.
    pub fn set_raw(&mut self, v: Var, value: GaussRat) {
        self.map.insert(v, value);
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.map.keys().copied()
    }

    /// Conjugate-consistency: value(partner(x)) == conj(value(x)) for all
    /// assigned variables whose partner is also assigned.
    pub fn is_conj_consistent(&self) -> bool {
        self.map.iter().all(|(v, val)| match self.map.get(&v.partner()) {
            Some(pv) => *pv == val.conj(),
            None => !v.is_real() || val.is_real(),
        })
    }

    pub fn to_float(&self, prec: u32) -> FloatAssignment {
        let mut fa = FloatAssignment::new();
        for (v, val) in &self.map {
            fa.set(*v, val.to_mp(prec));
        }
        fa
    }
}

impl std::fmt::Display for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let items: Vec<String> = self.map.iter().map(|(v, val)| format!("{}={}", v.name(), val)).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SampleError {
    #[error("sampling exhausted: {rejected} candidate points rejected while looking for {wanted} admissible ones")]
    Exhausted { rejected: usize, wanted: usize },
    #[error("variable {0} has no generic sampling rule; supply a custom point generator")]
    NoRule(&'static str),
}

/// Result of a sampled zero test.
#[derive(Clone, Debug)]
pub struct ZeroTest {
    pub zero: bool,
    /// Exact nonzero witness, when `zero` is false.
    pub witness: Option<(Point, GaussRat)>,
    pub tested: usize,
    pub rejected: usize,
}

pub(crate) fn rand_rat(rng: &mut ChaCha8Rng, num_bound: i64, den_bound: i64) -> Rat {
    let num = rng.gen_range(-num_bound..=num_bound);
    let den = rng.gen_range(1..=den_bound);
    crate::scalar::rat(num, den)
}

pub(crate) fn rand_gauss(rng: &mut ChaCha8Rng, num_bound: i64, den_bound: i64) -> GaussRat {
    GaussRat::new(rand_rat(rng, num_bound, den_bound), rand_rat(rng, num_bound, den_bound))
}

fn rand_nonzero_gauss(rng: &mut ChaCha8Rng, num_bound: i64, den_bound: i64) -> GaussRat {
    loop {
        let g = rand_gauss(rng, num_bound, den_bound);
        if !g.is_zero() {
            return g;
        }
    }
}

/// Draws a conjugate-consistent point for the given variables. The group
/// parameter `c` is drawn nonzero. The flow parameters `E`/`Eb` carry no
/// generic rule here; flow checks supply their own generator.
pub fn sample_point(
    vars: &[Var],
    rng: &mut ChaCha8Rng,
    spec: &SampleSpec,
) -> Result<Point, SampleError> {
    let mut p = Point::new();
    for &v in vars {
        if p.get(v).is_some() {
            continue;
        }
        match v {
            Var::E | Var::Eb => return Err(SampleError::NoRule(v.name())),
            Var::C | Var::Cb => {
                let val = rand_nonzero_gauss(rng, spec.num_bound, spec.den_bound);
                p.set_conj_pair(Var::C, val);
            }
            _ if v.is_real() => {
                p.set_conj_pair(v, GaussRat::from_rat(rand_rat(rng, spec.num_bound, spec.den_bound)));
            }
            _ => {
                p.set_conj_pair(v, rand_gauss(rng, spec.num_bound, spec.den_bound));
            }
        }
    }
    Ok(p)
}

/// Zero test with a caller-supplied point generator. A generated point is
/// rejected (and redrawn) when evaluation hits a vanishing denominator.
pub fn zero_test_with<G>(
    e: &Expr,
    spec: &SampleSpec,
    mut gen: G,
) -> Result<ZeroTest, SampleError>
where
    G: FnMut(&mut ChaCha8Rng) -> Result<Point, SampleError>,
{
    let mut rng = spec.rng();
    let mut tested = 0usize;
    let mut rejected = 0usize;
    let budget = spec.count.max(1) * 50;
    while tested < spec.count {
        if rejected > budget {
            return Err(SampleError::Exhausted { rejected, wanted: spec.count });
        }
        let p = gen(&mut rng)?;
        match eval_exact(e, &p) {
            Ok(value) => {
                tested += 1;
                if !value.is_zero() {
                    return Ok(ZeroTest { zero: false, witness: Some((p, value)), tested, rejected });
                }
            }
            Err(EvalError::DivisionByZero(_)) => {
                rejected += 1;
            }
            Err(EvalError::Missing(name)) => return Err(SampleError::NoRule(name)),
        }
    }
    Ok(ZeroTest { zero: true, witness: None, tested, rejected })
}

/// `true` iff `e` evaluates to exactly zero at every sampled
/// conjugate-consistent point admissible for its denominators.
pub fn is_zero_on_samples(e: &Expr, spec: &SampleSpec) -> Result<ZeroTest, SampleError> {
    let vars = e.variables();
    zero_test_with(e, spec, |rng| sample_point(&vars, rng, spec))
}

/// Checks that `e` is nonzero at every sampled admissible point. Returns a
/// witness point where `e` vanishes, if any.
pub fn nonzero_on_samples(e: &Expr, spec: &SampleSpec) -> Result<Option<Point>, SampleError> {
    let vars = e.variables();
    let mut rng = spec.rng();
    let mut tested = 0usize;
    let mut rejected = 0usize;
    let budget = spec.count.max(1) * 50;
    while tested < spec.count {
        if rejected > budget {
            return Err(SampleError::Exhausted { rejected, wanted: spec.count });
        }
        let p = sample_point(&vars, &mut rng, spec)?;
        match eval_exact(e, &p) {
            Ok(value) => {
                tested += 1;
                if value.is_zero() {
                    return Ok(Some(p));
                }
            }
            Err(EvalError::DivisionByZero(_)) => rejected += 1,
            Err(EvalError::Missing(name)) => return Err(SampleError::NoRule(name)),
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_zero_and_nonzero() {
        let z1 = Expr::var(Var::Z1);
        let spec = SampleSpec::default();
        let zero = Expr::sub(z1.clone(), z1.clone());
        assert!(is_zero_on_samples(&zero, &spec).unwrap().zero);
        let norm = Expr::mul(z1.clone(), Expr::var(Var::Zb1));
        let t = is_zero_on_samples(&norm, &spec).unwrap();
        assert!(!t.zero);
        let (p, val) = t.witness.unwrap();
        assert!(!val.is_zero());
        assert!(p.is_conj_consistent());
    }

    #[test]
    fn conjugate_consistency_of_samples() {
        let spec = SampleSpec::default();
        let mut rng = spec.rng();
        for _ in 0..10 {
            let p = sample_point(&[Var::Z1, Var::Zb1, Var::V, Var::C, Var::Cb], &mut rng, &spec).unwrap();
            assert!(p.is_conj_consistent());
            assert!(!p.get(Var::C).unwrap().is_zero());
            assert!(p.get(Var::V).unwrap().is_real());
        }
    }

    #[test]
    fn determinism_per_seed() {
        let e = Expr::mul(Expr::var(Var::Z1), Expr::var(Var::Zb1));
        let spec = SampleSpec::with_seed(7);
        let a = is_zero_on_samples(&e, &spec).unwrap();
        let b = is_zero_on_samples(&e, &spec).unwrap();
        assert_eq!(a.witness.as_ref().unwrap().0, b.witness.as_ref().unwrap().0);
    }

    #[test]
    fn exhaustion_on_everywhere_undefined() {
        // (z1 - z1)^-1 evaluates to a division by zero at every point
        let z1 = Expr::var(Var::Z1);
        let bad = Expr::inv(Expr::sub(
            Expr::add(z1.clone(), Expr::var(Var::Z2)),
            Expr::add(z1, Expr::var(Var::Z2)),
        ));
        match is_zero_on_samples(&bad, &SampleSpec::default()) {
            Err(SampleError::Exhausted { .. }) => {}
            other => panic!("expected exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn excluded_locus_is_avoided() {
        // 1/(1 - z2*zb2) is nonzero wherever defined
        let den = Expr::sub(Expr::one(), Expr::mul(Expr::var(Var::Z2), Expr::var(Var::Zb2)));
        let e = Expr::inv(den);
        let spec = SampleSpec { num_bound: 2, den_bound: 2, ..Default::default() };
        assert!(nonzero_on_samples(&e, &spec).unwrap().is_none());
    }
}
