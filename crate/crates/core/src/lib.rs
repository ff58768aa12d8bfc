pub mod densities;
pub mod diffusion_models;
pub mod error;
pub mod moments;
pub mod montecarlo;
pub mod laplace;
pub mod mgf;
mod numdiff;
pub mod scalar;
pub mod quadrature;
pub mod special_fn;
pub mod verify;

pub use error::{Error, Result};
