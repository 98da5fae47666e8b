//! Rate regions of two-user multiple access channels in which one encoder
//! knows the channel state non-causally.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod binary;
pub mod cli;
pub mod dm;
pub mod error;
pub mod figures;
pub mod gaussian;
pub mod geometry;
pub mod info;
pub mod io;
pub mod verify;

pub use dm::{DmChannelSpec, RatePentagon};
pub use error::{Error, Result};
pub use geometry::{RatePoint, RegionPolygon};

/// All rates are in bits.
pub const LOG_BASE: f64 = 2.0;

/// Multiply a rate in bits by this to get nats.
pub const NATS_PER_BIT: f64 = std::f64::consts::LN_2;
