//! Bergman kernels of the right half space and of balls in the normed
//! division algebras C, H and O, with the numerical machinery needed to
//! check them: a finite-difference Cauchy-Riemann operator and seeded
//! quadrature over half spaces, balls and spheres.

pub mod algebra;
pub mod analysis;
mod error;
pub mod integrate;
pub mod kernels;

pub use algebra::{associator, build_table, Dim, Element, MultiplicationTable};
pub use analysis::{Decay, FieldFunction, StencilSpec};
pub use error::{Error, Result};
pub use integrate::{Distance, Estimate, Method, QuadratureSpec};
pub use kernels::{
    bergman_ball, bergman_ball_unit, bergman_halfspace, cauchy_e, de_dx0, make_test_function,
    omega, TestFunction,
};
