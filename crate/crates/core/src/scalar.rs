//! Exact and floating scalar arithmetic.
//!
//! Two scalar modes back the whole engine. [`GaussRat`] is a Gaussian
//! rational (rational real and imaginary parts) closed under field
//! operations with no rounding; every identity check runs in this mode.
//! [`MpFloat`]/[`MpComplex`] form a small software binary float with
//! configurable precision, used only where transcendentals enter
//! (exponential flows and the finite-difference jet oracle).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

/// Default precision (significant bits) for floating-mode evaluation.
pub const DEFAULT_FLOAT_PREC: u32 = 96;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// A Gaussian rational `re + im*i`.
#[derive(Clone, PartialEq, Eq)]
pub struct GaussRat {
    pub re: Rat,
    pub im: Rat,
}

impl GaussRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussRat { re, im }
    }

    pub fn from_rat(re: Rat) -> Self {
        GaussRat { re, im: Rat::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(rat_int(n))
    }

    pub fn from_pair(num_re: i64, den_re: i64, num_im: i64, den_im: i64) -> Self {
        GaussRat { re: rat(num_re, den_re), im: rat(num_im, den_im) }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        GaussRat { re: Rat::zero(), im: Rat::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat { re: self.re.clone(), im: -self.im.clone() }
    }

    /// |z|^2, a nonnegative rational.
    pub fn norm_sq(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sq();
        Some(GaussRat { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn pow(&self, n: i32) -> Option<Self> {
        if n == 0 {
            return Some(Self::one());
        }
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut acc = GaussRat::one();
        let mut sq = base;
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Some(acc)
    }

    pub fn to_mp(&self, prec: u32) -> MpComplex {
        MpComplex { re: MpFloat::from_rat(&self.re, prec), im: MpFloat::from_rat(&self.im, prec) }
    }
}

impl Add for &GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub for &GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for &GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat { re: -self.re.clone(), im: -self.im.clone() }
    }
}

fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussRat {
    /// Canonical form: real part alone, `b*i`, or `(a + b*i)` / `(a - b*i)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rat(&self.re));
        }
        let im_mag = fmt_rat(&self.im.abs());
        let im_part = if self.im.abs().is_one() { "i".to_string() } else { format!("{im_mag}*i") };
        if self.re.is_zero() {
            if self.im.is_negative() {
                return write!(f, "-{im_part}");
            }
            return write!(f, "{im_part}");
        }
        let sign = if self.im.is_negative() { "-" } else { "+" };
        write!(f, "({} {} {})", fmt_rat(&self.re), sign, im_part)
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Arbitrary-precision binary float: `mant * 2^exp` with `|mant| < 2^prec`.
#[derive(Clone, PartialEq, Eq)]
pub struct MpFloat {
    mant: BigInt,
    exp: i64,
}

impl MpFloat {
    pub fn zero() -> Self {
        MpFloat { mant: BigInt::zero(), exp: 0 }
    }

    pub fn from_int(n: i64) -> Self {
        MpFloat { mant: BigInt::from(n), exp: 0 }
    }

    pub fn from_rat(r: &Rat, prec: u32) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        // scale numerator so the quotient carries prec+2 significant bits
        let nbits = r.numer().bits() as i64;
        let dbits = r.denom().bits() as i64;
        let shift = (prec as i64 + 2) - (nbits - dbits);
        let (num, exp) = if shift > 0 {
            (r.numer() << shift as u64, -shift)
        } else {
            (r.numer().clone(), 0)
        };
        let mant = num / r.denom();
        MpFloat { mant, exp }.rounded(prec)
    }

    fn rounded(mut self, prec: u32) -> Self {
        let bits = self.mant.bits();
        if bits > prec as u64 {
            let drop = bits - prec as u64;
            self.mant >>= drop;
            self.exp += drop as i64;
        }
        if self.mant.is_zero() {
            self.exp = 0;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.sign() == Sign::Minus
    }

    pub fn neg(&self) -> Self {
        MpFloat { mant: -self.mant.clone(), exp: self.exp }
    }

    pub fn abs(&self) -> Self {
        MpFloat { mant: self.mant.abs(), exp: self.exp }
    }

    fn align(a: &Self, b: &Self) -> (BigInt, BigInt, i64) {
        if a.is_zero() {
            return (BigInt::zero(), b.mant.clone(), b.exp);
        }
        if b.is_zero() {
            return (a.mant.clone(), BigInt::zero(), a.exp);
        }
        if a.exp >= b.exp {
            (&a.mant << (a.exp - b.exp) as u64, b.mant.clone(), b.exp)
        } else {
            (a.mant.clone(), &b.mant << (b.exp - a.exp) as u64, a.exp)
        }
    }

    pub fn add(&self, rhs: &Self, prec: u32) -> Self {
        let (x, y, e) = Self::align(self, rhs);
        MpFloat { mant: x + y, exp: e }.rounded(prec)
    }

    pub fn sub(&self, rhs: &Self, prec: u32) -> Self {
        self.add(&rhs.neg(), prec)
    }

    pub fn mul(&self, rhs: &Self, prec: u32) -> Self {
        MpFloat { mant: &self.mant * &rhs.mant, exp: self.exp + rhs.exp }.rounded(prec)
    }

    pub fn div(&self, rhs: &Self, prec: u32) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let shift = prec as i64 + 2 + (rhs.mant.bits() as i64 - self.mant.bits() as i64).max(0);
        let num = &self.mant << shift as u64;
        let mant = num / &rhs.mant;
        Some(MpFloat { mant, exp: self.exp - rhs.exp - shift }.rounded(prec))
    }

    /// Compare absolute values.
    pub fn abs_cmp(&self, rhs: &Self) -> std::cmp::Ordering {
        let (x, y, _) = Self::align(self, rhs);
        x.abs().cmp(&y.abs())
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        // keep 64 top bits in range for the conversion
        if bits > 64 {
            let drop = bits - 64;
            let m = (&self.mant >> drop as u64).to_f64().unwrap_or(f64::NAN);
            m * 2f64.powi((self.exp + drop) as i32)
        } else {
            self.mant.to_f64().unwrap_or(f64::NAN) * 2f64.powi(self.exp as i32)
        }
    }

    /// e^x by argument halving and Taylor summation.
    pub fn exp(&self, prec: u32) -> Self {
        if self.is_zero() {
            return Self::from_int(1);
        }
        // halve until |x| < 1/2
        let half = MpFloat { mant: BigInt::one(), exp: -1 };
        let mut k = 0u32;
        let mut x = self.clone();
        while x.abs_cmp(&half) == std::cmp::Ordering::Greater {
            x = MpFloat { mant: x.mant, exp: x.exp - 1 };
            k += 1;
            if k > 80 {
                break;
            }
        }
        let work = prec + 2 * k + 32;
        let mut sum = MpFloat::from_int(1);
        let mut term = MpFloat::from_int(1);
        let mut n: i64 = 1;
        loop {
            term = term.mul(&x, work).div(&MpFloat::from_int(n), work).unwrap();
            if term.is_zero() || term.mant.bits() as i64 + term.exp < sum.mant.bits() as i64 + sum.exp - work as i64 {
                break;
            }
            sum = sum.add(&term, work);
            n += 1;
        }
        let mut result = sum;
        for _ in 0..k {
            result = result.mul(&result.clone(), work);
        }
        result.rounded(prec)
    }

    pub fn sinh(&self, prec: u32) -> Self {
        let e = self.exp(prec + 8);
        let einv = MpFloat::from_int(1).div(&e, prec + 8).unwrap();
        e.sub(&einv, prec + 8).div(&MpFloat::from_int(2), prec).unwrap()
    }

    pub fn cosh(&self, prec: u32) -> Self {
        let e = self.exp(prec + 8);
        let einv = MpFloat::from_int(1).div(&e, prec + 8).unwrap();
        e.add(&einv, prec + 8).div(&MpFloat::from_int(2), prec).unwrap()
    }
}

impl fmt::Debug for MpFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

/// Complex number over [`MpFloat`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MpComplex {
    pub re: MpFloat,
    pub im: MpFloat,
}

impl MpComplex {
    pub fn zero() -> Self {
        MpComplex { re: MpFloat::zero(), im: MpFloat::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        MpComplex { re: MpFloat::from_int(n), im: MpFloat::zero() }
    }

    pub fn from_real(re: MpFloat) -> Self {
        MpComplex { re, im: MpFloat::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        MpComplex { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn add(&self, rhs: &Self, prec: u32) -> Self {
        MpComplex { re: self.re.add(&rhs.re, prec), im: self.im.add(&rhs.im, prec) }
    }

    pub fn sub(&self, rhs: &Self, prec: u32) -> Self {
        MpComplex { re: self.re.sub(&rhs.re, prec), im: self.im.sub(&rhs.im, prec) }
    }

    pub fn mul(&self, rhs: &Self, prec: u32) -> Self {
        MpComplex {
            re: self.re.mul(&rhs.re, prec).sub(&self.im.mul(&rhs.im, prec), prec),
            im: self.re.mul(&rhs.im, prec).add(&self.im.mul(&rhs.re, prec), prec),
        }
    }

    pub fn neg(&self) -> Self {
        MpComplex { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn inv(&self, prec: u32) -> Option<Self> {
        let n = self.re.mul(&self.re, prec + 8).add(&self.im.mul(&self.im, prec + 8), prec + 8);
        if n.is_zero() {
            return None;
        }
        Some(MpComplex {
            re: self.re.div(&n, prec)?,
            im: self.im.neg().div(&n, prec)?,
        })
    }

    pub fn pow(&self, n: i32, prec: u32) -> Option<Self> {
        if n == 0 {
            return Some(Self::from_int(1));
        }
        let base = if n < 0 { self.inv(prec + 8)? } else { self.clone() };
        let mut acc = MpComplex::from_int(1);
        let mut sq = base;
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq, prec + 8);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq.clone(), prec + 8);
            }
        }
        Some(acc)
    }

    /// max(|re|, |im|) as f64, a cheap magnitude estimate for tolerances.
    pub fn mag_f64(&self) -> f64 {
        self.re.to_f64().abs().max(self.im.to_f64().abs())
    }

    /// |self - rhs| <= tol * max(1, |self|, |rhs|), componentwise in f64.
    pub fn approx_eq(&self, rhs: &Self, tol: f64, prec: u32) -> bool {
        let d = self.sub(rhs, prec);
        let scale = 1f64.max(self.mag_f64()).max(rhs.mag_f64());
        d.mag_f64() <= tol * scale
    }
}

/// A value in one of the two scalar modes.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(GaussRat),
    Float(MpComplex),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(g) => g.is_zero(),
            Scalar::Float(c) => c.is_zero(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(g) => write!(f, "{g}"),
            Scalar::Float(c) => write!(f, "({:e} + {:e}i)", c.re.to_f64(), c.im.to_f64()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_rat_field_ops() {
        let a = GaussRat::from_pair(1, 2, 3, 4);
        let b = GaussRat::from_pair(-2, 1, 1, 3);
        let prod = &a * &b;
        let back = &prod * &b.inv().unwrap();
        assert_eq!(back, a);
        assert_eq!(&a - &a, GaussRat::zero());
    }

    #[test]
    fn gauss_rat_i_squares_to_minus_one() {
        let i = GaussRat::i();
        assert_eq!(&i * &i, GaussRat::from_int(-1));
    }

    #[test]
    fn gauss_rat_conj_involution() {
        let a = GaussRat::from_pair(5, 7, -2, 9);
        assert_eq!(a.conj().conj(), a);
        assert_eq!((&a * &a.conj()).im, Rat::zero());
    }

    #[test]
    fn gauss_rat_pow_negative() {
        let a = GaussRat::from_pair(0, 1, 2, 1); // 2i
        let p = a.pow(-2).unwrap(); // 1/(2i)^2 = -1/4
        assert_eq!(p, GaussRat::from_pair(-1, 4, 0, 1));
        assert!(GaussRat::zero().pow(-1).is_none());
    }

    #[test]
    fn display_forms() {
        assert_eq!(GaussRat::from_pair(1, 2, 0, 1).to_string(), "1/2");
        assert_eq!(GaussRat::i().to_string(), "i");
        assert_eq!(GaussRat::from_pair(0, 1, -1, 1).to_string(), "-i");
        assert_eq!(GaussRat::from_pair(1, 1, -2, 3).to_string(), "(1 - 2/3*i)");
    }

    #[test]
    fn mpfloat_round_trip_rational() {
        let r = rat(1, 3);
        let f = MpFloat::from_rat(&r, 96);
        let approx = f.to_f64();
        assert!((approx - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn mpfloat_exp_matches_f64() {
        for x in [0.5f64, 1.0, -0.25, 2.0, -3.0] {
            let r = Rat::new(BigInt::from((x * 1024.0) as i64), BigInt::from(1024));
            let f = MpFloat::from_rat(&r, 96).exp(96);
            assert!((f.to_f64() - x.exp()).abs() < 1e-12 * x.exp().abs().max(1.0), "exp({x})");
        }
    }

    #[test]
    fn mpfloat_exp_precision_beyond_f64() {
        // e computed at 96 bits should agree with itself computed at 160 bits
        // to ~28 significant decimal digits; compare through subtraction.
        let one = MpFloat::from_int(1);
        let lo = one.exp(96);
        let hi = one.exp(160);
        let diff = lo.sub(&hi, 200).abs();
        let bound = MpFloat::from_rat(&Rat::new(BigInt::one(), BigInt::one() << 90), 64);
        assert_eq!(diff.abs_cmp(&bound), std::cmp::Ordering::Less);
    }

    #[test]
    fn mpcomplex_mul_inv() {
        let prec = 96;
        let a = MpComplex {
            re: MpFloat::from_rat(&rat(3, 7), prec),
            im: MpFloat::from_rat(&rat(-2, 5), prec),
        };
        let inv = a.inv(prec).unwrap();
        let prod = a.mul(&inv, prec);
        assert!(prod.approx_eq(&MpComplex::from_int(1), 1e-25, prec));
    }

    #[test]
    fn mpfloat_sinh_cosh_identity() {
        let prec = 96;
        let x = MpFloat::from_rat(&rat(1, 4), prec);
        let s = x.sinh(prec);
        let c = x.cosh(prec);
        let lhs = c.mul(&c, prec).sub(&s.mul(&s, prec), prec);
        assert!((lhs.to_f64() - 1.0).abs() < 1e-25);
    }
}
