pub mod cache;
pub mod conjectures;
pub mod elemset;
pub mod error;
pub mod family;
pub mod gf;
pub mod local;
pub mod network;
pub mod numtheory;
pub mod perm;
pub mod pseudo;
pub mod report;
pub mod ring;
pub mod semilinear;

pub use elemset::ElemSet;
pub use error::{Error, Result};
pub use perm::Perm;
pub use ring::{build_ring, QuotientView, Ring, RingSpec};
