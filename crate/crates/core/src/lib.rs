//! Cellular sheaves of finite-dimensional real vector spaces on graphs and
//! finite posets.
//!
//! The crate is organized bottom-up:
//!
//! * [`poset`]: finite posets of cells ([`Complex`]), with graphs as the
//!   two-level case and chain enumeration for path-independence checks.
//! * [`sheaf`]: stalk dimensions and restriction matrices ([`Sheaf`]), plus
//!   structural and commutativity validation.
//! * [`numerics`]: SVD nullspaces and orthogonal projection with an explicit
//!   tolerance contract.
//! * [`sections`]: sections, the coboundary operator, global sections,
//!   consistency radius, nearest global section and the sheaf Laplacian.
//! * [`interval`]: sampled functions on an open cover of an interval, and
//!   gluing of local data.
//!
//! ```
//! use sheaflab_core::{Complex, Sheaf, global_sections, DEFAULT_REL_TOL};
//!
//! let path = Complex::from_graph(&["a", "b", "c"], &[("ab", "a", "b"), ("bc", "b", "c")])?;
//! let sheaf = Sheaf::constant(path, 2);
//! assert_eq!(global_sections(&sheaf, DEFAULT_REL_TOL)?.dim(), 2);
//! # Ok::<(), sheaflab_core::Error>(())
//! ```

pub mod error;
pub mod interval;
pub mod numerics;
pub mod poset;
pub mod sections;
pub mod sheaf;

pub use error::{Error, Result};
pub use interval::{build_interval_sheaf, GluedSamples, GridCover, IntervalSheaf};
pub use numerics::{
    nullspace_basis, project_onto, symmetric_eigenvalues, TolerancedBasis, DEFAULT_REL_TOL,
};
pub use poset::{Cell, Complex, CoveringRelation};
pub use sections::{
    assemble_coboundary, consistency_radius, extend_to_section, global_sections,
    is_section_consistent, nearest_global_section, sheaf_laplacian, Block, CoboundaryOperator,
    ConsistencyReport, ConsistencyViolation, GlobalSectionBasis, NodeAssignment, Section,
};
pub use sheaf::{
    structural_violations, Location, MapTable, Sheaf, ValidationReport, Violation, ViolationKind,
};
