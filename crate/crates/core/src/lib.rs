//! Finite frames and locales, finite pseudotopological spaces, and lifting
//! machinery for finite preorders, each with exhaustive law checkers.

pub mod bitset;
pub mod error;
pub mod colimits;
pub mod corpus;
pub mod frame;
pub mod json;
pub mod galois;
pub mod labels;
pub mod lifting;
pub mod nucleus;
pub mod pstop;
pub mod poset;
pub mod sober;
pub mod spatial;
pub mod space;
pub mod suites;
pub mod tensor;

pub use bitset::BitSet;
pub use error::{Error, Result};
pub use frame::{FiniteFrame, FrameHom};
pub use labels::Labels;
pub use poset::{DownsetFamily, FinitePoset, MonotoneMap};
pub use space::{ContinuousMap, FiniteSpace};
