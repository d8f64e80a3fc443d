#![no_std]

extern crate alloc;

pub mod dersub;
pub mod dgl;
pub mod error;
pub mod glie;
pub mod linalg;
pub mod mc;
pub mod models;
pub mod scalar;

pub use error::{Error, Result};
pub use glie::{FreeLie, Generator, GeneratorSet, LieElement, Window};
pub use scalar::Scalar;
