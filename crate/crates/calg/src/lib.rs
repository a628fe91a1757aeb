//! Exact computer algebra over Q: sparse multivariate polynomials, reduced
//! Groebner bases, elimination, univariate factoring, number fields,
//! zero-dimensional solving and quotient-ring arithmetic.

pub mod factor;
pub mod groebner;
pub mod ideal;
pub mod json;
pub mod numfield;
pub mod poly;
pub mod quotient;
pub mod rational;
pub mod scalar;
pub mod solve;
pub mod upoly;

pub use factor::{factor_univariate, is_irreducible, Factorization};
pub use groebner::{groebner, reduce, spoly, Budget, GroebnerBasis};
pub use ideal::PolyIdeal;
pub use numfield::{NfElem, NumberField};
pub use poly::{BaseOrder, Exps, MonomialOrder, MultiPoly, PolyRing};
pub use quotient::{QrElem, QuotientRing};
pub use rational::{format_rational, parse_rational, rat, ratio, Rational};
pub use scalar::Scalar;
pub use solve::{min_poly_in_quotient, solve_zero_dim, AlgebraicPoint, SolveOptions};
pub use upoly::UPoly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CalgError {
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("ideal is not zero-dimensional in {0}")]
    NotZeroDimensional(String),
    #[error("shape position not reached after {0} linear changes")]
    ShapePosition(usize),
    #[error("polynomial {0} is not irreducible")]
    NotIrreducible(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
}
