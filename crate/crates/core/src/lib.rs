#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod acf;
pub mod error;
pub mod estimate;
pub mod fft;
pub mod fgn;
pub mod linalg;
pub mod poly;
pub mod quad;
pub mod model;
pub mod optim;
pub mod specfun;
pub mod simulate;
pub mod spectrum;
pub mod stats;
pub mod toeplitz;

pub use error::{Error, Result};
