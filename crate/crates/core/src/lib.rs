//! Core of issuescope: the snapshot model and its on-disk format, issue and
//! file-churn analytics, per-issue graphs with a deterministic force layout,
//! and the JSON/SVG views built on top of them.

pub mod analytics;
pub mod graph;
pub mod model;
pub mod payload;
pub mod store;
pub mod svg;
pub mod theme;
pub mod validate;
