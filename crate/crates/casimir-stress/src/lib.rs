//! Casimir pressure of a planar three-layer cavity under two electromagnetic
//! stress tensors, together with the classical electrostatic stress
//! diagnostics that discriminate between them.
//!
//! The library is organised in layers:
//!
//! * [`constants`]: SI physical constants.
//! * [`materials`]: permittivity models evaluated on the imaginary
//!   frequency axis, and their zero-frequency classification.
//! * [`planar`]: per-frequency building blocks: longitudinal decay
//!   constants, Fresnel coefficients, round-trip mode factors and the
//!   position-dependent cavity kernel.
//! * [`engine`]: Matsubara frequency generation, adaptive transverse
//!   wavenumber quadrature and truncation control.
//! * [`am`]: the Abraham-Minkowski (Lifshitz) cavity pressure.
//! * [`rw`]: the Raabe-Welsch gap stress, its z-profile, cutoff scans and
//!   the near-interface growth diagnostic.
//! * [`classical`]: pointwise stress tensors, static force densities,
//!   surface stress jumps and the dielectric liquid rise height.
//! * [`library`], [`config`], [`presets`], [`cli`]: the file formats and
//!   command-line front end.
//!
//! All quantities are SI. Pressures are in pascal and negative values mean
//! attraction.

pub mod am;
pub mod classical;
pub mod cli;
pub mod config;
pub mod constants;
pub mod engine;
pub mod library;
pub mod materials;
pub mod planar;
pub mod presets;
pub mod rw;

pub use am::{CavitySpec, PressureResult, WallModel};
pub use engine::{ConvergenceReport, QuadratureSpec};
pub use materials::{PermittivityModel, ZeroFrequencyClass};
