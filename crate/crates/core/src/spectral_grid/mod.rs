//! Periodic pseudospectral fields on the 3-torus `[0, 2π)³`.

pub mod dump;
mod fft;
mod field;
mod forms;
mod grid;
mod interp;
mod random;
mod spectrum;

pub use field::{torus_volume, ScalarField};
pub use forms::{curl, divergence, gradient, CoordOneForm, CoordThreeForm, CoordTwoForm, FieldAlgebra};
pub use grid::{unwrap, wrap, Axis, Grid};
pub use interp::{Interpolant, PRUNE_LEVEL};
pub use random::{random_band_limited, ENVELOPE};
pub use spectrum::{Spectrum, ZColumn};
