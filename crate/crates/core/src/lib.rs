#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod centers;
pub mod chain;
pub mod error;
pub mod geom;
pub mod invariants;
pub mod locus;
pub mod porism;
pub mod tolerance;
pub mod verify;

pub use chain::{chain_at, classify_regime, regular_preimage, PorismConfig, Regime, RegularPreImage, SteinerChain};
pub use error::{GeomError, PorismError};
pub use geom::*;
pub use tolerance::{Profile, ToleranceSet};
