//! Exact computations for stable endomorphism rings and universal
//! deformation rings of modules over tame symmetric special biserial
//! algebras with dihedral defect.

pub mod linalg;
pub mod quiver;
pub mod algebra;
pub mod homological;
pub mod rep;
pub mod strings;
pub mod deformation;
pub mod workbench;
