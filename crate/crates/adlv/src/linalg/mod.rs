//! Exact linear algebra over Q and Z: reduced row echelon forms, Smith
//! normal form with unimodular transforms, integral system solving, and
//! rational cone membership by exact phase-1 simplex.

mod cone;
mod ratmat;
mod smith;

pub use cone::in_cone;
pub use ratmat::{rat_solve, RatRref};
pub use smith::{quotient_presentation, smith_normal_form, solve_integral, Presentation, Smith};
