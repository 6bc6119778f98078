//! Classification invariants of simple Morse pseudo-functions and generic
//! coadjoint orbits for area-preserving diffeomorphism groups of
//! non-orientable surfaces, computed from piecewise-linear equivariant Morse
//! data on triangulated orientation double covers.

pub mod rat;
pub mod linalg;
pub mod mesh;
pub mod reeb;
pub mod homology;
pub mod fixtures;
pub mod realize;
pub mod circulation;
pub mod classify;
pub mod io;
