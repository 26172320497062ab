//! Instance files, generators and the commands of the `setmax` binary.

pub mod gen;
pub mod instance;
pub mod parallel;
pub mod run;
pub mod verify;
