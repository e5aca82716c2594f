//! Real solutions of the symmetric form of Painleve IV.

pub mod explorer;
pub mod integrator;
pub mod params;
pub mod rational;
pub mod sequences;
pub mod symmetry;
