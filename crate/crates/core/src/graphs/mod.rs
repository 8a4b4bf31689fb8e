//! Import graph, dependency order and call graph.

pub mod call;
pub mod dot;
pub mod import;

pub use call::{build_call_graph, CallEdge, CallGraph, Resolution};
pub use dot::{call_graph_dot, import_graph_dot};
pub use import::{build_import_graph, dependency_order, ImportGraph, ImportTarget};
