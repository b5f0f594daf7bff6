//! Turns a tabular cultural-heritage collection into a nanopublication
//! knowledge graph, checks it with competency questions and exports JSON
//! bundles for catalog and storytelling front ends.

pub mod citeparse;
pub mod error;
pub mod export;
pub mod graph;
pub mod ingest;
pub mod model;
pub mod normalize;
pub mod pipeline;
pub mod query;
pub mod reconcile;
pub mod vocab;

pub use error::ModelError;
pub use model::{compress, mint_iri, Dataset, Iri, Literal, PrefixMap, Quad, Term};
