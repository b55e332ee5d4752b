//! Dissection-puzzle engine for pieces built from identical right isosceles
//! triangles ("polyaboloes") on the quarter-cell lattice.
//!
//! The crate models piece and target geometry at quarter-cell resolution so
//! that both diagonal splits of a unit square coexist in one raster, and on
//! top of that provides:
//!
//! * [`lattice`] — cells, regions, the dihedral symmetry group, canonical
//!   forms, and rasterization of 45°-edged convex polygons;
//! * [`targets`] — enumeration of every convex polygon formable by `n` unit
//!   triangles, and the counting function `f(n)`;
//! * [`pieces`] — piece sets, the piece-file format, and built-in puzzles
//!   (tangram and friends);
//! * [`solver`] — exact-cover search deciding, enumerating and counting
//!   tilings of a region by a piece set, plus catalog coverage reports;
//! * [`search`] — exploration of the space of piece sets under a triangle
//!   budget, looking for sets with high catalog coverage.

pub mod lattice;
pub mod pieces;
pub mod search;
pub mod solver;
pub mod targets;

pub use lattice::{apply_transform, is_connected, rasterize_polygon, unit_triangle};
pub use lattice::{Cell, Half, Quadrant, Region, Shape, Transform, D4};
pub use pieces::PieceSet;
pub use solver::{count_solutions, coverage, enumerate_solutions, solve_exists, Solution};
pub use targets::{enumerate_targets, f, ConvexTarget, OctagonSpec};
