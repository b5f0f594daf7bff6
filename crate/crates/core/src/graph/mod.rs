//! Dataset assembly: one shared factual graph plus one nanopublication
//! (head, assertion, provenance, publication info) per interpreted object.

mod build;
pub mod integrity;
pub mod nquads;
mod record;
pub mod trig;

pub use build::{
    BuildOptions, BuildOutput, GraphBuilder, Ids, Nanopublication, APPROACH_LABEL, APPROACH_SLUG,
    CRITERION_LABEL, CRITERION_SLUG, FACTUAL_GRAPH,
};
pub use integrity::{check_integrity, integrity_violations, IntegrityError, Violation, ViolationKind};
pub use nquads::{parse_nquads, serialize_nquads, ParseError};
pub use record::{
    prepare_record, IssueClass, NameOrders, PrepareContext, PreparedRecord, RecordIssue, TypeRef,
};
pub use trig::serialize_trig;
