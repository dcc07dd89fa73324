//! Certified crossing-number bounds for links and their ingredients:
//! PD diagrams, Goeritz determinants, bound combination, and a small
//! calculus of root decompositions for 3-manifold pairs.

pub mod bounds;
pub mod corpus;
pub mod diagram;
pub mod families;
pub mod invariants;
pub mod report;
pub mod roots;

pub use bounds::{combine, Bound, BoundError, BoundInterval, BoundKind, BoundStatus};
pub use diagram::{braid_closure, parse_pd, BraidWord, DiagramError, LinkDiagram};
pub use families::FamilySpec;
pub use invariants::{determinant, InvariantError};
pub use report::{report, Report, ReportError, ReportOptions};
