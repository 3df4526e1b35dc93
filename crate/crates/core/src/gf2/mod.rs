//! Finite fields of characteristic 2, quadratic spaces over them and `N0`.

pub mod disc;
pub mod field;
pub mod linalg;
pub mod quadratic;
