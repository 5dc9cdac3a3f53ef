//! A knowledge-graph engine for the Event-Model-F event ontology.
//!
//! The crate models events, objects, and the descriptions-and-situations
//! patterns that relate them: participation, mereological composition,
//! causality, correlation, documentation, and interpretation. On top of the
//! typed graph it provides Allen-interval temporal reasoning, closed-world
//! validation with machine-readable findings, structural reasoning
//! (part-whole closure, causal chains, correlation inference, interpretation
//! diffs), and a canonical text interchange format for exchanging event
//! descriptions between systems.

pub mod graph;
pub mod interchange;
pub mod patterns;
pub mod reasoning;
pub mod scenarios;
pub mod spacetime;
pub mod validation;
pub mod vocab;

pub use graph::{
    ConceptKind, Edge, EntityRef, GraphError, Kind, Property, RegionKind, RegionValue, Snapshot,
    Store,
};
pub use patterns::{
    anchors_of_concept, build_causality, build_composition, build_correlation,
    build_documentation, build_interpretation, build_participation, concepts_with_anchor,
    pattern_kind_of, pattern_situations, view_of, CausalitySpec, CompositionSpec,
    CorrelationSpec, DocumentationSpec, InterpretationSpec, Justification, ParticipantSpec,
    ParticipationSpec, PatternDetail, PatternError, PatternKind, PatternView,
};
pub use spacetime::{
    allen_relation, box_contains, check_constraint, AllenRelation, ConstraintResult,
    ConstraintSpec, GeoBox, SpacetimeError, TemporalTarget, TimeInterval, Trajectory,
};
