//! Finite cofibration categories, Reedy diagram theory, subdivision
//! filtrations and truncated quasicategories of frames, checked by
//! exhaustive enumeration on small instances.

pub mod cofcat;
pub mod corpus;
pub mod dconstr;
pub mod fincat;
pub mod frames;
pub mod hocat;
pub mod par;
pub mod quasicat;
pub mod reedy;
pub mod simplicial;
