//! Exact arithmetic over `Q` and multi-quadratic extensions `Q(√p₁, …, √p_k)`.

mod field;
mod kernel;
mod scalar;
mod vector;

pub use field::{is_square_free, square_free_part, FieldSpec};
pub use kernel::rational_kernel;
pub(crate) use kernel::expanded_equations as kernel_rows;
pub use scalar::{approx_value, sign_of, AlgebraicScalar};
pub use vector::AlgebraicVector;
