//! Exact Laurent polynomials and truncated Taylor jets.

mod jet;
mod poly;

pub use jet::{Jet, JetIndex};
pub use poly::{Exponent, LaurentPoly};

#[cfg(test)]
mod tests;
