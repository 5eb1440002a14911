//! Exact certification of matrix-polynomial charts for curves with a flat
//! degree-k projection to the projective line.

pub mod error;
pub mod exact;
pub mod fibers;
pub mod fixtures;
pub mod io;
pub mod linebundle;
pub mod polymat;
pub mod realform;
pub mod spectral;
pub mod triplecover;

pub use error::{ChartError, Result};
