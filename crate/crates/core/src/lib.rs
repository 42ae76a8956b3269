pub mod cat;
pub mod cis;
pub mod doc;
pub mod dot;
pub mod error;
pub mod fuzz;
pub mod gallery;
pub mod gf2;
pub mod homology;
pub mod limit;
pub mod pointset;
pub mod space;
mod unionfind;

pub use error::{Error, Result};
pub use pointset::PointSet;
pub use space::{CtsMap, FinSpace};
