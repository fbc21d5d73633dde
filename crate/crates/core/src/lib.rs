//! Homology of finite discrete groupoids with coefficients, and the maps on
//! homology induced by étale correspondences.

pub mod corpus;
pub mod correspondence;
pub mod error;
pub mod gmodule;
pub mod groupoid;
pub mod homology;
pub mod intalg;
pub mod invsemi;
pub mod schema;
pub mod verify;

pub use error::{Error, Result, Violation};
