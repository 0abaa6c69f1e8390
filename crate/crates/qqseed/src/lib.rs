pub mod cfrac;
pub mod cluster;
pub mod closedform;
pub mod error;
pub mod oracle;
pub mod qcoeff;
pub mod qtorus;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
