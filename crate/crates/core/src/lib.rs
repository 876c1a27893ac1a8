//! Exact symbolic engine for torus-fixed perverse coherent systems on the
//! local resolved conifold 4-fold: rational functions, characters,
//! localization contributions, truncated series and stability walls.

#![no_std]

extern crate alloc;

pub mod error;
pub mod exec;
pub mod geom;
pub mod kclass;
pub mod quiver;
pub mod ratfun;
pub mod ring;
pub mod series;

pub use error::{Error, Result};
