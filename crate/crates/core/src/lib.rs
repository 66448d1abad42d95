pub mod asympt;
pub mod catalog;
pub mod critical;
pub mod enumerate;
pub mod error;
pub mod expr;
pub mod kernel;
pub mod laurent;
pub mod scalar;
pub mod stepset;
pub mod surd;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{Coefficient, Mp, Real, Tolerance};

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;
/// Working multiprecision real.
pub type Hp = Mp;
/// Working multiprecision complex.
pub type HpComplex = num_complex::Complex<Mp>;
/// Laurent polynomial with rational coefficients.
pub type Poly = laurent::LaurentPoly<Rational>;
/// Jet over the working multiprecision reals.
pub type HpJet = laurent::Jet<Mp>;
