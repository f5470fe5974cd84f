pub mod boundary_law;
pub mod error;
pub mod exec;
pub mod ggm;
pub mod params;
pub mod periodic;
pub mod polyroot;
pub mod recurrence;
pub mod scan;
pub mod symmetry;

pub use error::{Error, Result};
pub use params::Params;
