//! Quantum mechanics of a particle confined to a twisted cylindrical surface.
//!
//! The crate covers the strain-induced metric and geometric potential of the
//! surface ([`geometry`]), bound-state spectra and eigenfunctions
//! ([`spectrum`]), transmission through a twisted section ([`scattering`]),
//! and the numerical kernels and independent oracles used to check them
//! ([`numeric`], [`validation`]).

pub mod error;
pub mod geometry;
pub mod numeric;
pub mod scattering;
pub mod spectrum;
pub mod validation;

pub use error::{Error, Result};
pub use num_complex::Complex64;
