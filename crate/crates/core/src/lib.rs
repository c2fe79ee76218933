pub mod cli;
pub mod error;
pub mod fan;
pub mod format;
pub mod hull;
pub mod linalg;
pub mod newton;
pub mod oracle;
pub mod pushforward;
pub mod symmetry;

pub use error::Error;
