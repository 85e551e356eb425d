//! Sum-of-squares SDP relaxations of copositive programs.

pub mod apps;
pub mod cones;
pub mod error;
pub mod formats;
pub mod pathology;
pub mod poly;
pub mod relax;
pub mod sdp;

pub use error::{Error, Result};
