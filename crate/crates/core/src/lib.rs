//! Laplace eigenfunctions of the unit disk: Bessel evaluation, zero finding,
//! sup norms and their growth along `m = floor(n^gamma)` subsequences.

pub mod bessel;
pub mod commands;
pub mod config;
pub mod error;
pub mod gallery;
pub mod growth;
pub mod modes;
pub mod output;
pub mod quadrature;
pub mod verify;
pub mod zeros;

pub use bessel::{EvalRegime, Order};
pub use config::{OutputFormat, RunConfig};
pub use error::{Error, Result};
pub use modes::{DiskModes, ModeIndex, ModeProfile};
pub use zeros::{BoundaryCondition, BracketSource, Eigenpair, ZeroBracket, ZeroFinder};
