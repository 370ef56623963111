pub mod brauer;
pub mod cli;
pub mod error;
pub mod ffield;
pub mod grp;
pub mod linalg;
pub mod mackey;
pub mod projline;
pub mod reps;
pub mod verify;

pub use error::{Error, Result};
