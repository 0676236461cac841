//! Numerical laboratory for contact geometry on the 3-torus.
//!
//! The model manifold is `T³ = [0, 2π)³` with contact form `η = cos z dx + sin z dy`.

pub mod contact_diffeo;
pub mod contact_model;
pub mod error;
pub mod experiments;
pub mod flowmap;
pub mod folland_stein;
pub mod hodge;
pub mod rumin;
pub mod spectral_grid;

pub use error::{Error, Result};
