//! Exact arithmetic: integer and rational polynomials, real root isolation,
//! real algebraic numbers and the number field `Q(lambda)`.

pub mod cyclo;
pub mod decimal;
pub mod field;
pub mod poly;
pub mod roots;
pub mod serial;

pub use cyclo::{companion_polynomial, has_cyclotomic_factor, is_reciprocal, strip_cyclotomic};
pub use field::{FieldContext, FieldElement};
pub use poly::{IntPoly, RatPoly};
pub use roots::{cauchy_bound, isolate_real_roots, perron_root, sturm_count, AlgebraicReal};
