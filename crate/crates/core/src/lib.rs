pub mod chars;
pub mod cli;
pub mod config;
pub mod error;
pub mod group;
pub mod gspace;
pub mod oracle;
pub mod scenario;
pub mod so_branching;
pub mod spectrum;
pub mod verify;

pub use error::{Error, Result};
