//! Exact reduction of linear programs to two-commodity flow, with witness
//! construction, solution mapback and error verification at every stage.

pub mod arith;
pub mod cli;
pub mod error;
pub mod io;
pub mod mapback;
pub mod model;
pub mod oracle;
pub mod pipeline;
pub mod reduce;
pub mod verify;
pub mod witness;

pub use error::{Error, Result};
