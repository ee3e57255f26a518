//! Dense linear algebra and polynomial arithmetic over prime fields.

mod field;
mod matrix;
mod poly;
mod solve;
mod subspace;

pub use field::{is_prime, square_class, Fp, SquareClass};
pub use matrix::{axpy, dot, Matrix};
pub use poly::{crt_idempotents, factor_poly, Poly};
pub use solve::{min_poly, min_poly_by_powers, solve_linear, square_class_in, EchelonBasis, LinearSolution, SpanSolver};
pub use subspace::Subspace;
