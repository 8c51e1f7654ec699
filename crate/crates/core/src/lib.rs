//! Exact combinatorial engine for drawings of hypercubes and folded hypercubes.
//!
//! The crate builds the recursive arc drawing of `Q_n`, counts its crossings and
//! cover counts exactly, assembles the crossing count of the folded-hypercube
//! drawing `D_n`, routes all ordered vertex pairs of `FQ_n` along canonical
//! paths to measure edge congestion, and evaluates every closed-form crossing
//! bound for `FQ_n` and `Q_n` (auditing the two inequalities that fail for odd
//! `n`).
//!
//! Modules:
//!
//! * [`hypercube`]: bit-string vertices, implicit `FQ_n` adjacency, subcubes.
//! * [`arc_diagram`]: the drawing `Γ_n`, crossing and cover counting.
//! * [`folded_upper`]: the `D_3` coordinate drawing and the `D_n` crossing count.
//! * [`routing`]: canonical paths and the all-pairs congestion census.
//! * [`bounds`]: exact and floating evaluators for the crossing bounds.
//! * [`render`]: SVG output for `Γ_n` and `D_3`.
//! * [`verify`]: the one-shot verification suite.

pub mod arc_diagram;
pub mod bounds;
mod error;
pub mod folded_upper;
pub mod hypercube;
pub mod rational;
pub mod render;
pub mod routing;
pub mod verify;

pub use error::{Error, Result};
pub use hypercube::{EdgeRef, VertexLabel};
