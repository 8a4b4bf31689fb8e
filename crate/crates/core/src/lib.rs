//! Privacy-relevant method detection for JavaScript/TypeScript and Java
//! source trees.
//!
//! The pipeline runs discover → parse → import/call graphs → API closure →
//! personal-data sources → taint → metrics → report. [`pipeline::run_scan`]
//! drives all of it; each stage is also usable on its own.

pub mod catalog;
pub mod closure;
pub mod error;
pub mod frontend;
pub mod graphs;
pub mod method;
pub mod metrics;
pub mod pipeline;
pub mod report;
pub mod sources;
pub mod taint;

pub use error::{Error, Result};
pub use method::MethodRef;
