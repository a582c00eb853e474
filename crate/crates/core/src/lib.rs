//! Conway circles for triangles and tangential polygons.
//!
//! Extending every side of a triangle beyond each vertex by the length of the
//! opposite side yields six points on a circle centered at the incenter. This
//! crate constructs that circle and its generalizations to odd and even
//! tangential polygons, synthesizes tangential polygons from side data, and
//! verifies every construction against an independent tangent-length oracle.
//!
//! Modules:
//!
//! * [`geom`]: points, circles, incircles, projections and the tolerance policy.
//! * [`tangential`]: tangential polygon construction and validation.
//! * [`conway`]: extension families, iff-condition checks and the circle itself.
//! * [`verify`]: concyclicity checks, the oracle, seeded random polygons and fuzzing.
//!
//! ```
//! use conway_core::conway;
//! use conway_core::tangential::{self, SideLengthSpec};
//! use conway_core::Tolerance;
//!
//! let tri = tangential::polygon_from_sides(&SideLengthSpec::odd(vec![3.0, 4.0, 5.0]))?;
//! let spec = conway::conway_extensions_triangle(&tri)?;
//! let result = conway::conway_circle(&tri, &spec, &Tolerance::default())?;
//! assert!((result.circle.radius - 37f64.sqrt()).abs() < 1e-9);
//! assert!(result.report.passed);
//! # Ok::<(), conway_core::Error>(())
//! ```

pub mod conway;
pub mod error;
pub mod geom;
mod root;
pub mod tangential;
pub mod verify;

pub use conway::{Construction, ConwayCircleResult, End, ExtensionSpec};
pub use error::{Error, Result};
pub use geom::{Circle, Point2, Tolerance};
pub use tangential::{SideLengthSpec, TangentialPolygon};
pub use verify::{CheckReport, FuzzConfig, FuzzSummary, Parity};
