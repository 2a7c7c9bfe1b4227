//! Persistence modules over the reals with exact arithmetic: filtered
//! complexes, homology, interval decompositions, interleavings and
//! bottleneck distances.

pub mod barcode;
pub mod bottleneck;
pub mod certificate;
pub mod complex;
pub mod decomposition;
pub mod distance;
pub mod experiment;
pub mod field;
pub mod filtration;
pub mod format;
pub mod grid;
pub mod homology;
pub mod interval;
pub mod matrix;
pub mod morphism;
pub mod random;
pub mod scalar;
