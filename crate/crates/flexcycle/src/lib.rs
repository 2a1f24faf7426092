//! Exact detection of zero-sum cycles, the combinatorial obstruction to
//! flexibility in triangular polyhedra.
//!
//! The pieces, bottom up:
//! - [`exact`]: rationals, Gaussian rationals, and sums of square roots
//!   with exact zero-testing.
//! - [`mobius`]: the projective quadric compactifying Euclidean 3-space,
//!   with its extended distance and the one-dimensional projection on
//!   tangent sections.
//! - [`polyhedron`]: triangular complexes, realizations, induced edge
//!   lengths, and the dihedral indicator.
//! - [`limit`]: the coloring pipeline that turns a limit configuration of
//!   a flex into a signed cycle certificate.
//! - [`zero_sum`]: chordless-cycle enumeration and the exact signed-sum
//!   solver used to scan for obstructions.
//! - [`butterfly`]: explicit flexes built by rotating the complement of a
//!   separating cycle about an axis.
//! - [`jsonio`]: exact-string JSON formats and OFF export.

pub mod butterfly;
pub mod exact;
pub mod jsonio;
pub mod limit;
pub mod mobius;
pub mod polyhedron;
pub mod zero_sum;

pub use exact::{Radical, Rat, Scalar};
pub use limit::{run_pipeline, LimitConfiguration, SignedCycle};
pub use mobius::{ExtendedDistance, PointClass, ProjectivePoint};
pub use polyhedron::{Edge, EdgeLengths, Polyhedron, Realization, SpineEdge, VertexId};
pub use zero_sum::{scan_all_edges, zero_sum_assignment, ObstructionReport};
