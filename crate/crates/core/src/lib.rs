//! Compile real polynomial maps into planar linkages whose configuration spaces
//! realize them, and check those spaces numerically.

pub mod bounds;
pub mod compiler;
pub mod error;
pub mod expr;
pub mod gadgets;
pub mod json;
pub mod linkage;
pub mod solver;
pub mod svg;

pub use error::{CompileError, GadgetError, LinkageError, ParseError, SchemaError, SolverError};
pub use linkage::{Configuration, Edge, EdgeKind, Linkage, PlanePoint, VertexId};
