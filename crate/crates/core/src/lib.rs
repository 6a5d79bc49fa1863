//! Word-metric geometry, Cantor-space flows and finite-horizon recurrence
//! analyzers for zero-dimensional group actions.

pub mod analysis;
pub mod cantor;
pub mod caps;
pub mod error;
pub mod flows;
pub mod group;
pub mod harness;
pub mod verdict;

pub use caps::Caps;
pub use error::{Error, Result};
pub use verdict::{Status, Verdict};
