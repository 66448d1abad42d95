//! Exact numbers of the form `a + b*sqrt(m)` with rational `a`, `b` and a
//! square-free integer `m` (negative `m` gives imaginary parts).

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Signed, Zero};

use crate::scalar::Real;
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadSurd {
    pub a: Rational,
    pub b: Rational,
    /// Square-free radicand; `1` means the number is rational.
    pub m: BigInt,
}

/// Splits `n` as `k^2 * f` with `f` square-free, keeping the sign on `f`.
pub fn square_free_part(n: &BigInt) -> (BigInt, BigInt) {
    if n.is_zero() {
        return (BigInt::zero(), BigInt::one());
    }
    let sign = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut rest = n.abs();
    let mut k = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let sq = &p * &p;
        while (&rest % &sq).is_zero() {
            rest /= &sq;
            k *= &p;
        }
        p += 1;
    }
    (k, sign * rest)
}

impl QuadSurd {
    pub fn rational(a: Rational) -> Self {
        QuadSurd { a, b: Rational::zero(), m: BigInt::one() }
    }

    /// `sqrt(q)` for rational `q`, principal branch (upper imaginary for
    /// negative `q`).
    pub fn sqrt_of(q: &Rational) -> Self {
        if q.is_zero() {
            return Self::rational(Rational::zero());
        }
        // sqrt(p/r) = sqrt(p*r)/r
        let prod = q.numer() * q.denom();
        let (k, f) = square_free_part(&prod);
        let coeff = Rational::new(k, q.denom().clone());
        if f.is_one() {
            Self::rational(coeff)
        } else {
            QuadSurd { a: Rational::zero(), b: coeff, m: f }
        }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero() || self.m.is_one()
    }

    pub fn is_real(&self) -> bool {
        self.b.is_zero() || self.m.is_positive()
    }

    fn normalized(mut self) -> Self {
        if self.m.is_one() {
            self.a += self.b.clone();
            self.b = Rational::zero();
        }
        if self.b.is_zero() {
            self.m = BigInt::one();
        }
        self
    }

    fn common_radicand(&self, other: &Self) -> Option<BigInt> {
        match (self.b.is_zero(), other.b.is_zero()) {
            (true, true) => Some(BigInt::one()),
            (true, false) => Some(other.m.clone()),
            (false, true) => Some(self.m.clone()),
            (false, false) => (self.m == other.m).then(|| self.m.clone()),
        }
    }

    pub fn add(&self, other: &Self) -> Option<Self> {
        let m = self.common_radicand(other)?;
        Some(QuadSurd { a: &self.a + &other.a, b: &self.b + &other.b, m }.normalized())
    }

    pub fn neg(&self) -> Self {
        QuadSurd { a: -self.a.clone(), b: -self.b.clone(), m: self.m.clone() }
    }

    pub fn sub(&self, other: &Self) -> Option<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Option<Self> {
        let m = self.common_radicand(other)?;
        let mq = Rational::from_integer(m.clone());
        Some(
            QuadSurd {
                a: &self.a * &other.a + &self.b * &other.b * mq,
                b: &self.a * &other.b + &self.b * &other.a,
                m,
            }
            .normalized(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QuadSurd { a: &self.a * c, b: &self.b * c, m: self.m.clone() }.normalized()
    }

    /// `|x|^2`, itself a surd when `x` is real.
    pub fn modulus_squared(&self) -> Self {
        if self.m.is_negative() && !self.b.is_zero() {
            let mq = Rational::from_integer(-self.m.clone());
            Self::rational(&self.a * &self.a + &self.b * &self.b * mq)
        } else {
            self.mul(self).expect("same radicand")
        }
    }

    pub fn to_complex<T: Real>(&self) -> Complex<T> {
        let a = T::from_rational(&self.a);
        if self.b.is_zero() {
            return Complex::new(a, T::zero());
        }
        let b = T::from_rational(&self.b);
        let r = T::from_bigint(&self.m.abs()).sqrt();
        if self.m.is_negative() {
            Complex::new(a, b * r)
        } else {
            Complex::new(a + b * r, T::zero())
        }
    }

    /// Sign of a real surd, exactly.
    pub fn signum(&self) -> i32 {
        assert!(self.is_real(), "sign of a non-real surd");
        let sa = sgn(&self.a);
        let sb = sgn(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return if sa == 0 { sb } else { sa };
        }
        // Opposite signs: compare a^2 with b^2 m.
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * Rational::from_integer(self.m.clone());
        match lhs.cmp(&rhs) {
            std::cmp::Ordering::Greater => sa,
            std::cmp::Ordering::Less => sb,
            std::cmp::Ordering::Equal => 0,
        }
    }
}

fn sgn(q: &Rational) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let radical = |m: &BigInt| -> String {
            let am = m.abs();
            let root = if am.is_one() { String::new() } else { format!("sqrt({am})") };
            match (root.is_empty(), m.is_negative()) {
                (true, true) => "i".to_string(),
                (false, true) => format!("{root}*i"),
                (_, false) => root,
            }
        };
        if self.b.is_zero() {
            return write!(f, "{}", fmt_rational(&self.a));
        }
        let mag = self.b.abs();
        let rad = radical(&self.m);
        let term = if mag.is_one() { rad } else { format!("{}*{}", fmt_rational(&mag), rad) };
        if self.a.is_zero() {
            if self.b.is_negative() {
                write!(f, "-{term}")
            } else {
                write!(f, "{term}")
            }
        } else {
            let op = if self.b.is_negative() { "-" } else { "+" };
            write!(f, "{}{op}{term}", fmt_rational(&self.a))
        }
    }
}
