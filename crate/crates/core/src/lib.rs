//! Automatic object removal from photographs.
//!
//! The crate wires together five stages: an object detector adapter that
//! yields bounding boxes, mask construction, a two-stage coarse-to-fine
//! inpainting generator with a contextual-attention branch trained under
//! masked WGAN-GP and spatially discounted L1 losses, a sub-pixel
//! super-resolution model, and final compositing back into the original
//! frame at full resolution.
//!
//! All numeric code is generic over [`scalar::Scalar`]; the pipeline and
//! trainers run on [`Real`] (`f32`), while tests instantiate `f64` for
//! finite-difference oracles and [`scalar::Dual`] for exact second-order
//! terms.

pub mod autodiff;
pub mod critics;
pub mod detection;
mod error;
pub mod generator;
pub mod imagecore;
pub mod pipeline;
pub mod scalar;
pub mod superres;
pub mod training;

pub use error::{Error, Result};
pub use scalar::{Dual, Scalar};

/// Default scalar for training and inference.
pub type Real = f32;

/// Dual over the default scalar (second-order passes at training precision).
pub type DualReal = Dual<Real>;
