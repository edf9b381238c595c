//! Film / bonding-layer stacks and their thin-film limits.
//!
//! The rescaled three-dimensional elasticity problem of a thin film bonded
//! to a rigid substrate through a compliant layer is solved one in-plane
//! Fourier mode at a time, and compared against two limit models: a membrane
//! over an in-plane (shear) elastic foundation and a Kirchhoff-Love plate
//! over a transverse elastic foundation.

pub mod coefficients;
pub mod commands;
pub mod config;
pub mod convergence;
pub mod error;
pub mod linalg;
pub mod load;
pub mod mesh;
pub mod params;
pub mod reduced;
pub mod regime;
pub mod solver3d;

pub use coefficients::{limit_coefficients, LimitCoefficients};
pub use error::{Error, Result};
pub use linalg::C64;
pub use load::Mode;
pub use mesh::ThicknessMesh;
pub use params::{bonding_moduli, lame_from_engineering, Lame, StackParameters};
pub use regime::{classify_regime, derive_exponents, phase_grid, Plane, Exponents, Regime, RegimeWarning};
pub use solver3d::{solve3d, Field3D};
pub use convergence::{run_sweep, SweepOptions, SweepReport};
pub use reduced::{ReducedSolution, Model};
