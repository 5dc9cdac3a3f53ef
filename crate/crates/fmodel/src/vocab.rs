//! The built-in `f:` vocabulary: namespace constants, kind and property
//! names, and the anchor concepts that give pattern instances their identity.

use crate::graph::{ConceptKind, Kind};

/// Namespace behind the reserved `f:` prefix (kinds, properties, anchors).
pub const F_NS: &str = "https://w3id.org/event-model-f#";
/// Namespace behind the reserved `f-inst:` prefix (engine-minted individuals).
pub const F_INST_NS: &str = "https://w3id.org/event-model-f/inst#";

/// Reserved prefix for the vocabulary namespace.
pub const F_PREFIX: &str = "f";
/// Reserved prefix for minted individuals.
pub const F_INST_PREFIX: &str = "f-inst";

/// Literal-valued predicates of the interchange format (not graph properties).
pub const LABEL: &str = "label";
pub const RELATION: &str = "relation";
pub const VALUE: &str = "value";

/// Datatype tags for typed literals.
pub const DT_TIME_INTERVAL: &str = "timeInterval";
pub const DT_GEO_BOX: &str = "geoBox";
pub const DT_TRAJECTORY: &str = "trajectory";

/// Anchor concepts: every concept minted by a pattern builder `specializes`
/// one of these, which is how a description's pattern kind stays recognizable
/// in the flat kind system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Anchor {
    DescribedEvent,
    Participant,
    TimeParameter,
    LocationParameter,
    Composite,
    Component,
    CompositionConstraint,
    ConstraintTarget,
    Cause,
    Effect,
    Correlate,
    DocumentedEvent,
    Documenter,
    Interpretant,
    RelevantSituation,
}

impl Anchor {
    pub const ALL: [Anchor; 15] = [
        Anchor::DescribedEvent,
        Anchor::Participant,
        Anchor::TimeParameter,
        Anchor::LocationParameter,
        Anchor::Composite,
        Anchor::Component,
        Anchor::CompositionConstraint,
        Anchor::ConstraintTarget,
        Anchor::Cause,
        Anchor::Effect,
        Anchor::Correlate,
        Anchor::DocumentedEvent,
        Anchor::Documenter,
        Anchor::Interpretant,
        Anchor::RelevantSituation,
    ];

    /// Local name under [`F_NS`].
    pub fn local(&self) -> &'static str {
        match self {
            Anchor::DescribedEvent => "DescribedEvent",
            Anchor::Participant => "Participant",
            Anchor::TimeParameter => "TimeParameter",
            Anchor::LocationParameter => "LocationParameter",
            Anchor::Composite => "Composite",
            Anchor::Component => "Component",
            Anchor::CompositionConstraint => "EventCompositionConstraint",
            Anchor::ConstraintTarget => "ConstraintTarget",
            Anchor::Cause => "Cause",
            Anchor::Effect => "Effect",
            Anchor::Correlate => "Correlate",
            Anchor::DocumentedEvent => "DocumentedEvent",
            Anchor::Documenter => "Documenter",
            Anchor::Interpretant => "Interpretant",
            Anchor::RelevantSituation => "RelevantSituation",
        }
    }

    /// Qualified name, e.g. `f:Cause`.
    pub fn qname(&self) -> String {
        format!("{}:{}", F_PREFIX, self.local())
    }

    /// Expanded IRI.
    pub fn iri(&self) -> String {
        format!("{}{}", F_NS, self.local())
    }

    /// The concept kind the anchor entity itself carries.
    ///
    /// `Correlate` classifies events and is therefore an `EventType` here even
    /// though it plays a role-like part in its pattern: the classification
    /// table only lets event types classify events.
    pub fn kind(&self) -> Kind {
        match self {
            Anchor::DescribedEvent
            | Anchor::Composite
            | Anchor::Component
            | Anchor::ConstraintTarget
            | Anchor::Cause
            | Anchor::Effect
            | Anchor::Correlate
            | Anchor::DocumentedEvent
            | Anchor::Interpretant => Kind::Concept(ConceptKind::EventType),
            Anchor::Participant | Anchor::Documenter | Anchor::RelevantSituation => {
                Kind::Concept(ConceptKind::Role)
            }
            Anchor::TimeParameter | Anchor::LocationParameter => {
                Kind::Concept(ConceptKind::Parameter)
            }
            Anchor::CompositionConstraint => Kind::Concept(ConceptKind::Parameter),
        }
    }

    /// Reverse lookup by expanded IRI.
    pub fn from_iri(iri: &str) -> Option<Anchor> {
        let local = iri.strip_prefix(F_NS)?;
        Anchor::ALL.iter().copied().find(|a| a.local() == local)
    }
}
