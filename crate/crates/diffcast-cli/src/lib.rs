//! Support library for the `diffcast` binary: delimited-text ingestion, a
//! revalidating download cache, report serialization, and SVG charts. Kept
//! as a library so integration tests can drive each piece directly.

pub mod fetchcache;
pub mod ingest;
pub mod report;
pub mod svg;
