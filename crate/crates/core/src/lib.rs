//! Capacity-region computations for the discrete memoryless cognitive
//! interference channel with partially cooperating destinations.
//!
//! Source 1 knows both messages, source 2 only its own; destination 1
//! forwards to destination 2 through the relay input `Xr1`. The crate
//! evaluates the outer bound, the inner bound and the two capacity regions
//! (degraded and semideterministic channels), traces their Pareto frontiers,
//! and checks the structural channel conditions they depend on.

pub mod bounds;
pub mod channel;
pub mod conditions;
pub mod distributions;
pub mod error;
pub mod fixtures;
pub mod info;
pub mod oracle;
pub mod region;
mod search;
pub mod table;

pub use error::{Error, Result};
