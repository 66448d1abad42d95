//! Scalar layer: the `Real` trait shared by every floating engine, an
//! MPFR-backed multiprecision float, exact coefficient conversion and a few
//! complex helpers that work for non-`Copy` scalars.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};
use std::sync::atomic::{AtomicU32, Ordering};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};
use rug::float::Constant;
use rug::Float;

/// Floating scalar usable by the analytic engines.
pub trait Real:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialOrd
    + Num
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_f64(x: f64) -> Self;
    fn from_bigint(x: &BigInt) -> Self;
    fn to_f64(&self) -> f64;
    fn sqrt(&self) -> Self;
    fn ln(&self) -> Self;
    fn exp(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn atan2(&self, x: &Self) -> Self;
    fn abs(&self) -> Self;
    fn gamma(&self) -> Self;
    fn pi() -> Self;
    /// Mantissa bits currently carried by values of this type.
    fn precision_bits() -> u32;

    fn from_i64(x: i64) -> Self {
        Self::from_bigint(&BigInt::from(x))
    }

    fn from_rational(q: &BigRational) -> Self {
        Self::from_bigint(q.numer()) / Self::from_bigint(q.denom())
    }

    fn powf(&self, e: &Self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        (self.ln() * e.clone()).exp()
    }

    fn powi(&self, e: i32) -> Self {
        let mut base = if e < 0 { Self::one() / self.clone() } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            k >>= 1;
        }
        acc
    }

    /// `2^-bits`.
    fn exp2_neg(bits: u32) -> Self {
        Self::from_f64(0.5).powi(bits as i32)
    }

    fn max_of(a: Self, b: Self) -> Self {
        if a >= b {
            a
        } else {
            b
        }
    }
}

/// Tolerances scaled to the precision of `T`.
#[derive(Clone, Debug)]
pub struct Tolerance<T> {
    /// Criticality residuals and modulus comparisons.
    pub residual: T,
    /// Largest imaginary part tolerated in a folded constant.
    pub imaginary: T,
    /// Threshold below which a computed coefficient is treated as zero.
    pub zero: T,
}

impl<T: Real> Tolerance<T> {
    pub fn for_precision() -> Self {
        let p = T::precision_bits();
        Tolerance {
            residual: T::exp2_neg(p.saturating_sub(32).max(16)),
            imaginary: T::exp2_neg((p * 25 / 48).max(16)),
            zero: T::exp2_neg((p * 3 / 4).max(16)),
        }
    }
}

macro_rules! impl_real_prim {
    ($t:ty, $bits:expr, $gamma:path) => {
        impl Real for $t {
            fn from_f64(x: f64) -> Self {
                x as $t
            }
            fn from_bigint(x: &BigInt) -> Self {
                x.to_f64().unwrap_or(f64::NAN) as $t
            }
            fn from_rational(q: &BigRational) -> Self {
                q.to_f64().unwrap_or(f64::NAN) as $t
            }
            fn to_f64(&self) -> f64 {
                *self as f64
            }
            fn sqrt(&self) -> Self {
                <$t>::sqrt(*self)
            }
            fn ln(&self) -> Self {
                <$t>::ln(*self)
            }
            fn exp(&self) -> Self {
                <$t>::exp(*self)
            }
            fn sin(&self) -> Self {
                <$t>::sin(*self)
            }
            fn cos(&self) -> Self {
                <$t>::cos(*self)
            }
            fn atan2(&self, x: &Self) -> Self {
                <$t>::atan2(*self, *x)
            }
            fn abs(&self) -> Self {
                <$t>::abs(*self)
            }
            fn gamma(&self) -> Self {
                $gamma(*self)
            }
            fn pi() -> Self {
                std::f64::consts::PI as $t
            }
            fn precision_bits() -> u32 {
                $bits
            }
            fn powf(&self, e: &Self) -> Self {
                <$t>::powf(*self, *e)
            }
            fn powi(&self, e: i32) -> Self {
                <$t>::powi(*self, e)
            }
        }
    };
}

impl_real_prim!(f64, 53, libm::tgamma);
impl_real_prim!(f32, 24, libm::tgammaf);

static WORKING_PRECISION: AtomicU32 = AtomicU32::new(192);

/// Multiprecision real backed by MPFR. Every value is created at the
/// process-wide working precision.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct Mp(pub Float);

impl Mp {
    pub fn working_precision() -> u32 {
        WORKING_PRECISION.load(Ordering::Relaxed)
    }

    /// Changes the precision of values created from now on.
    pub fn set_working_precision(bits: u32) {
        WORKING_PRECISION.store(bits.max(64), Ordering::Relaxed);
    }

    fn wrap<V>(v: V) -> Mp
    where
        Float: rug::Assign<V>,
    {
        Mp(Float::with_val(Self::working_precision(), v))
    }

    pub fn inner(&self) -> &Float {
        &self.0
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        self.0.to_string_radix(10, Some(digits.max(1)))
    }
}

impl fmt::Debug for Mp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(30))
    }
}

impl fmt::Display for Mp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(f.precision().unwrap_or(30)))
    }
}

macro_rules! mp_binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for Mp {
            type Output = Mp;
            fn $m(self, rhs: Mp) -> Mp {
                Mp(self.0 $op rhs.0)
            }
        }
        impl<'a> $tr<&'a Mp> for Mp {
            type Output = Mp;
            fn $m(self, rhs: &'a Mp) -> Mp {
                Mp(self.0 $op &rhs.0)
            }
        }
    };
}

mp_binop!(Add, add, +);
mp_binop!(Sub, sub, -);
mp_binop!(Mul, mul, *);
mp_binop!(Div, div, /);
mp_binop!(Rem, rem, %);

impl Neg for Mp {
    type Output = Mp;
    fn neg(self) -> Mp {
        Mp(-self.0)
    }
}

impl Zero for Mp {
    fn zero() -> Self {
        Mp::wrap(0)
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for Mp {
    fn one() -> Self {
        Mp::wrap(1)
    }
}

impl Num for Mp {
    type FromStrRadixErr = rug::float::ParseFloatError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        let parsed = Float::parse_radix(s, radix as i32)?;
        Ok(Mp::wrap(parsed))
    }
}

impl Real for Mp {
    fn from_f64(x: f64) -> Self {
        Mp::wrap(x)
    }
    fn from_bigint(x: &BigInt) -> Self {
        let parsed = Float::parse(x.to_str_radix(10)).expect("integer literal parses");
        Mp::wrap(parsed)
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
    fn sqrt(&self) -> Self {
        Mp(self.0.clone().sqrt())
    }
    fn ln(&self) -> Self {
        Mp(self.0.clone().ln())
    }
    fn exp(&self) -> Self {
        Mp(self.0.clone().exp())
    }
    fn sin(&self) -> Self {
        Mp(self.0.clone().sin())
    }
    fn cos(&self) -> Self {
        Mp(self.0.clone().cos())
    }
    fn atan2(&self, x: &Self) -> Self {
        Mp(self.0.clone().atan2(&x.0))
    }
    fn abs(&self) -> Self {
        Mp(self.0.clone().abs())
    }
    fn gamma(&self) -> Self {
        Mp(self.0.clone().gamma())
    }
    fn pi() -> Self {
        Mp::wrap(Constant::Pi)
    }
    fn precision_bits() -> u32 {
        Mp::working_precision()
    }
    fn powi(&self, e: i32) -> Self {
        Mp(rug::ops::Pow::pow(self.0.clone(), e))
    }
}

/// Exact coefficient ring for Laurent polynomials.
pub trait Coefficient:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialOrd
    + Num
    + Signed
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn to_real<T: Real>(&self) -> T;
    fn from_i64(x: i64) -> Self;
}

impl Coefficient for BigRational {
    fn to_real<T: Real>(&self) -> T {
        T::from_rational(self)
    }
    fn from_i64(x: i64) -> Self {
        BigRational::from_integer(BigInt::from(x))
    }
}

impl Coefficient for BigInt {
    fn to_real<T: Real>(&self) -> T {
        T::from_bigint(self)
    }
    fn from_i64(x: i64) -> Self {
        BigInt::from(x)
    }
}

impl Coefficient for i64 {
    fn to_real<T: Real>(&self) -> T {
        T::from_i64(*self)
    }
    fn from_i64(x: i64) -> Self {
        x
    }
}

pub fn c_real<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

pub fn c_i<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

pub fn c_abs<T: Real>(z: &Complex<T>) -> T {
    (z.re.clone() * z.re.clone() + z.im.clone() * z.im.clone()).sqrt()
}

pub fn c_arg<T: Real>(z: &Complex<T>) -> T {
    z.im.atan2(&z.re)
}

/// Principal square root; a negative real input maps to a positive
/// imaginary output.
pub fn c_sqrt<T: Real>(z: &Complex<T>) -> Complex<T> {
    let r = c_abs(z);
    if r.is_zero() {
        return Complex::zero();
    }
    let two = T::from_i64(2);
    let re = ((r.clone() + z.re.clone()) / two.clone()).sqrt();
    let im = ((r - z.re.clone()) / two).sqrt();
    if z.im < T::zero() {
        Complex::new(re, -im)
    } else {
        Complex::new(re, im)
    }
}

pub fn c_exp<T: Real>(z: &Complex<T>) -> Complex<T> {
    let m = z.re.exp();
    Complex::new(m.clone() * z.im.cos(), m * z.im.sin())
}

pub fn c_ln<T: Real>(z: &Complex<T>) -> Complex<T> {
    Complex::new(c_abs(z).ln(), c_arg(z))
}

pub fn c_powi<T: Real>(z: &Complex<T>, e: i64) -> Complex<T> {
    let mut base = if e < 0 { c_inv(z) } else { z.clone() };
    let mut k = e.unsigned_abs();
    let mut acc = Complex::new(T::one(), T::zero());
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base.clone();
        }
        base = base.clone() * base;
        k >>= 1;
    }
    acc
}

pub fn c_inv<T: Real>(z: &Complex<T>) -> Complex<T> {
    let n = z.re.clone() * z.re.clone() + z.im.clone() * z.im.clone();
    Complex::new(z.re.clone() / n.clone(), -(z.im.clone()) / n)
}

pub fn c_scale<T: Real>(z: &Complex<T>, s: &T) -> Complex<T> {
    Complex::new(z.re.clone() * s.clone(), z.im.clone() * s.clone())
}

pub fn c_from_rational<T: Real>(q: &BigRational) -> Complex<T> {
    c_real(T::from_rational(q))
}

/// Converts a value between scalar types through its decimal expansion
/// (exact enough for seeding a different precision).
pub fn convert<S: Real, T: Real>(x: &S) -> T {
    T::from_f64(x.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mp_constants_carry_working_precision() {
        let two = Mp::from_i64(2);
        let root = two.sqrt();
        assert_eq!(root.0.prec(), Mp::working_precision());
        let sq = root.clone() * root;
        let err = (sq - Mp::from_i64(2)).abs();
        assert!(err < Mp::exp2_neg(185));
    }

    #[test]
    fn gamma_quarter_matches_known_value() {
        let g = Mp::from_f64(0.25).gamma();
        assert!((g.to_f64() - 3.625_609_908_221_908).abs() < 1e-14);
        let gf = Real::gamma(&0.25f64);
        assert!((gf - 3.625_609_908_221_908).abs() < 1e-12);
    }

    #[test]
    fn principal_sqrt_of_negative_is_upper_imaginary() {
        let z = c_sqrt(&Complex::new(-4.0f64, 0.0));
        assert!(z.re.abs() < 1e-15 && (z.im - 2.0).abs() < 1e-15);
        let w = c_sqrt(&Complex::new(0.0f64, -2.0));
        assert!((w.re - 1.0).abs() < 1e-15 && (w.im + 1.0).abs() < 1e-15);
    }

    #[test]
    fn rational_conversion_is_exact_to_working_precision() {
        let q = BigRational::new(BigInt::from(1), BigInt::from(3));
        let x: Mp = Real::from_rational(&q);
        let back = x * Mp::from_i64(3) - Mp::one();
        assert!(back.abs() < Mp::exp2_neg(188));
    }

    #[test]
    fn tolerances_scale_with_precision() {
        let t = Tolerance::<Mp>::for_precision();
        assert!(t.residual <= Mp::exp2_neg(160));
        let f = Tolerance::<f64>::for_precision();
        assert!(f.zero < 1e-11 && f.zero > 1e-14);
    }
}
