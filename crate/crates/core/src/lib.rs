pub mod cli;
pub mod error;
pub mod families;
pub mod ktree;
pub mod points;
pub mod seqcore;
pub mod verify;

pub use error::{Error, Result};
