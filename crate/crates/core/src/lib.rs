pub mod conditions;
pub mod constants;
pub mod error;
pub mod functionals;
pub mod geometry;
pub mod optimize;
pub mod params;
pub mod sampling;
pub mod specfun;

pub use error::{Error, Result};
pub use params::{derive_params, Mode, Params};
