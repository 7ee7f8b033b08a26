pub mod analysis;
pub mod channels;
pub mod checks;
pub mod error;
pub mod interaction;
pub mod io;
pub mod linalg;
pub mod random;
pub mod scenarios;
pub mod states;

pub use error::{Error, Result};
