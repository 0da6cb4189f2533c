//! Entropic correlation measures on finite-dimensional multipartite quantum
//! states, their continuity bounds, channel quantities and recovery maps.
//!
//! All routines are generic over the real scalar type (see [`Real`]); the
//! `f64` aliases below cover the common case.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channels;
pub mod continuity;
pub mod error;
pub mod extension;
pub mod fuzz;
pub mod io;
pub mod linalg;
pub mod measures;
pub mod optim;
pub mod random;
pub mod recovery;
pub mod scalar;
pub mod tensor;
pub mod tolerance;

pub use channels::{ChannelKind, QuantumChannel};
pub use error::{Error, Result};
pub use scalar::Real;
pub use tensor::{MultipartiteState, ProjectorFamily, SubsystemLayout};
pub use tolerance::{set_tolerances, tolerances, Tolerances};

pub type State = MultipartiteState<f64>;
pub type Projectors = ProjectorFamily<f64>;
pub type Channel = QuantumChannel<f64>;
