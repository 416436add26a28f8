//! Special functions: Airy `Ai`/`Ai'` on the real line, the log-gamma
//! function, and orthonormal weighted Hermite and Laguerre functions.

mod airy;
mod gamma;
mod orthopoly;
pub(crate) mod series;

pub(crate) use airy::airy_unchecked;
pub use airy::{airy, AiryPair};
pub(crate) use orthopoly::ldexp as ldexp2;
pub use orthopoly::{hermite_weighted, laguerre_weighted, WeightedPolyValue};
pub(crate) use orthopoly::{Family, Tail};
