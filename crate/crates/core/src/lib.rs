//! Exact angle arithmetic, quadratic lamination combinatorics, tuning,
//! fibers and numerical ray tracing for unicritical polynomials.

pub mod angles;
pub mod combinatorics;
pub mod config;
pub mod error;
pub mod fibers;
pub mod numerics;
pub mod par;
pub mod surgery;
pub mod tuning;

pub use angles::{Angle, Expansion};
pub use combinatorics::{InternalAddress, KneadingSequence, Lamination, RayPair};
pub use config::Config;
pub use error::{Error, Result};
pub use fibers::{ArcSkeleton, FiberReport};
pub use par::Exec;
pub use tuning::{ComponentSignature, Location};
