//! Base arithmetic layer: precision-tagged scalars over `Z/p^N`, total-degree
//! truncated multivariate series, and exact residue polynomials over `F_p`.
//!
//! The truncation model is an honest quotient ring: a series window at degree
//! cap `D` is arithmetic in `(Z/p^N)[T_1..T_n] / (monomials of degree > D)`,
//! so every ring identity holds bit-exactly inside the window. A series that
//! ever discarded a nonzero term beyond the cap carries a `saturated` flag so
//! downstream certificates can demote exactness claims about the untruncated
//! object.

mod fppoly;
mod monomial;
mod scalar;
mod series;

pub use fppoly::FpPoly;
pub use monomial::{MonOrder, Monomial};
pub use scalar::{coeff_inv, ArithError, PrecScalar};
pub use series::{fiber_reduce, series_inv, series_mul, RingSpec, TruncSeries};

pub(crate) use scalar::{inv_mod, mul_mod, p_pow};
