//! Finite frames and fusion frames: bounds, redundancy, excess, duals, erasure
//! robustness and fusion frame systems over real or complex coordinate spaces.

pub mod catalog;
pub mod document;
pub mod duality;
pub mod error;
pub mod exec;
pub mod fusion;
pub mod numerics;
pub mod random;
pub mod sampling;
pub mod systems;
pub mod vector_frames;

pub use error::{FrameError, Result};
pub use exec::Execution;
pub use fusion::{FrameBounds, FusionFrame, Subspace};
pub use numerics::{CMatrix, CVector, Field, Tolerance};
pub use vector_frames::VectorFrame;
