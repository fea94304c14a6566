pub mod error;
pub mod finalg;
pub mod kernel;
pub mod limits;
pub mod util;
pub mod variety;
pub mod coalg;
pub mod tallwraith;
pub mod filtration;
pub mod workspace;
pub mod report;
pub mod suite;
pub mod cli;

pub use error::{Error, Result};
