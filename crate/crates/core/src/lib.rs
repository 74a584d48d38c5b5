//! Pseudoholomorphic discs and boundary limits on wedges.
//!
//! The crate covers almost complex calculus in local coordinates
//! ([`accal`]), integral operators on the unit disc ([`diskops`]), a
//! fixed-point disc solver ([`discsolve`]), disc families attached to
//! totally real edges ([`wedgefam`]) and a boundary-limit harness
//! ([`fatou`]).

pub mod accal;
pub mod discsolve;
pub mod diskops;
pub mod error;
pub mod fatou;
pub mod linalg;
pub mod par;
pub mod poly;
pub mod wedgefam;

pub use error::{Error, Result};
