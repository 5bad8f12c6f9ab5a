//! Deformation-theoretic invariants of affine Gorenstein toric varieties,
//! computed in exact arithmetic.
//!
//! The crate covers: lattice/cone geometry with the edge-adjacent dual-ray
//! labeling, semigroup algebras with finite enumeration windows, Hochschild
//! cochains with the Gerstenhaber bracket and the Hodge (shuffle) projectors,
//! the Poisson dgla with Maurer–Cartan and gauge machinery, the degreewise T¹
//! dimension formula in ambient dimension 3, the closed-form classification
//! of nonzero T¹ degrees for 3D Gorenstein cones, and Poisson cohomology of
//! the Gorenstein surfaces A_n.

pub mod classify;
pub mod cli;
pub mod dgla;
pub mod element;
pub mod error;
pub mod finite;
pub mod hochschild;
pub mod linalg;
pub mod report;
pub mod lattice;
pub mod suites;
pub mod surface;
pub mod t1;
pub mod toric;

pub use error::{Error, Result};
