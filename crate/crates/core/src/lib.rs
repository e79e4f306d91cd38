//! Arithmetic dynamics over Q.

pub mod bipoly;
pub mod error;
pub mod fpoly;
pub mod freeness;
pub mod heights;
pub mod henon;
pub mod homog;
pub mod intersect;
pub mod intfactor;
pub mod mapspec;
pub mod p1dyn;
pub mod padic;
pub mod places;
pub mod poly;
pub mod rational;
pub mod resultant;
pub mod rittlab;
pub mod roots;
pub mod skewprod;
pub mod system;
pub mod zfactor;

pub use error::{Error, Result};
