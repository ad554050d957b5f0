//! Co-inversion of point sources and a rigid obstacle from total-field
//! measurements of two-dimensional time-harmonic elastic waves.
//!
//! The crate simulates measurements of elastic point sources scattering off
//! a rigid obstacle, then inverts them in two phases: a direct-sampling scan
//! recovers each source's location and polarization, and a Newton-type
//! iteration on a star-like boundary representation recovers the obstacle
//! from the approximate scattered fields left after subtracting the
//! recovered sources.

pub mod eigenguard;
pub mod error;
pub mod forward;
pub mod geometry;
pub mod kernels;
pub mod pipeline;
pub mod shaperec;
pub mod specfun;
pub mod srcrec;

pub use error::{Error, Result};
pub use geometry::{ParamCurve, SamplingGrid, StarShape};
pub use kernels::{CVec2, ElasticMedium, Mat2c, Point, SourceSpec, WaveMode};
pub use pipeline::{DatasetManifest, ExperimentConfig, RunReport};
