//! Exact exterior calculus on a star-shaped chart.
//!
//! Forms carry polynomial coefficients over the rationals, so every operator
//! identity (`H^2 = 0`, `dH + Hd = I - s*`, `delta h + h delta = I - S`, ...)
//! can be checked with exact equality.

pub mod clifford;
pub mod error;
pub mod exec;
pub mod forms;
pub mod hodge;
pub mod homotopy;
pub mod io;
pub mod linsolve;
pub mod polyring;
pub mod sampling;
pub mod solvers;
pub mod suite;

pub use clifford::{OperatorTag, OscillatorReport};
pub use error::{Error, Result};
pub use forms::{Blade, Form, VectorField};
pub use homotopy::{Decomposition, DecompositionMode, SpaceTag};
pub use polyring::{Context, Multidegree, Poly, Rational};
pub use solvers::{SideCondition, SolveOptions, SolveReport, VacuumDiracClass, VacuumDiracResult};
