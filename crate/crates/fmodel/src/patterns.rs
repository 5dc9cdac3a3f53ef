//! Builders and typed read-views for the six event patterns: participation,
//! composition, causality, correlation, documentation, and interpretation.
//!
//! Every builder emits a full description-and-situation micro-graph: one
//! Description that `defines` the pattern's concepts, one Situation that
//! `satisfies` it, plus all classification and inclusion edges. Minted
//! individuals live under the `f-inst:` prefix; each minted concept
//! `specializes` one of the built-in anchor concepts, which is what keeps the
//! pattern recognizable when a file is read back.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::graph::{
    ConceptKind, EntityRef, GraphError, Kind, Property, RegionKind, RegionValue, Snapshot, Store,
};
use crate::spacetime::{ConstraintSpec, GeoBox, TemporalTarget, TimeInterval};
use crate::vocab::Anchor;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PatternError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("`{entity}` is {actual}, expected {expected}")]
    KindMismatch {
        entity: String,
        expected: &'static str,
        actual: &'static str,
    },
    #[error("a participation needs at least one participant")]
    EmptyParticipants,
    #[error("role `{0}` appears twice in one participation")]
    DuplicateRole(String),
    #[error("location parameter names role `{0}`, which is not a participant role")]
    UnknownRole(String),
    #[error("a composition needs at least one component")]
    EmptyComponents,
    #[error("component `{0}` is listed twice")]
    DuplicateComponent(String),
    #[error("the composite cannot be one of its own components")]
    CompositeAmongComponents,
    #[error("constraint target `{0}` is not a component of this composition")]
    ConstraintTargetNotAComponent(String),
    #[error("cause and effect must be distinct events")]
    SelfCause,
    #[error("a correlation needs at least two correlates")]
    TooFewCorrelates,
    #[error("an event cannot document itself")]
    SelfDocumentation,
    #[error("a documentation needs at least one documenter")]
    EmptyDocumenters,
    #[error("an interpretation needs at least one relevant situation")]
    EmptySituations,
    #[error("`{0}` is not a situation built by one of the five bundleable patterns")]
    NonPatternSituation(String),
    #[error("`{0}` is not a pattern situation")]
    NotAPatternSituation(String),
    #[error("pattern situation `{situation}` is malformed: {reason}")]
    MalformedPattern { situation: String, reason: String },
}

/// Which of the six patterns a situation instantiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternKind {
    Participation,
    Composition,
    Causality,
    Correlation,
    Documentation,
    Interpretation,
}

impl PatternKind {
    pub fn name(&self) -> &'static str {
        match self {
            PatternKind::Participation => "participation",
            PatternKind::Composition => "composition",
            PatternKind::Causality => "causality",
            PatternKind::Correlation => "correlation",
            PatternKind::Documentation => "documentation",
            PatternKind::Interpretation => "interpretation",
        }
    }
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn pattern_of_anchor(anchor: Anchor) -> PatternKind {
    match anchor {
        Anchor::DescribedEvent
        | Anchor::Participant
        | Anchor::TimeParameter
        | Anchor::LocationParameter => PatternKind::Participation,
        Anchor::Composite
        | Anchor::Component
        | Anchor::CompositionConstraint
        | Anchor::ConstraintTarget => PatternKind::Composition,
        Anchor::Cause | Anchor::Effect => PatternKind::Causality,
        Anchor::Correlate => PatternKind::Correlation,
        Anchor::DocumentedEvent | Anchor::Documenter => PatternKind::Documentation,
        Anchor::Interpretant | Anchor::RelevantSituation => PatternKind::Interpretation,
    }
}

/// Justification backing a causality or correlation claim: an existing
/// Description, or a label from which a fresh Description is minted.
#[derive(Debug, Clone, PartialEq)]
pub enum Justification {
    Existing(EntityRef),
    Text(String),
}

impl From<&str> for Justification {
    fn from(text: &str) -> Self {
        Justification::Text(text.to_string())
    }
}

/// One participant entry: the object, the role-concept IRI it plays, and an
/// optional domain concept the role specializes.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticipantSpec {
    pub object: EntityRef,
    pub role_iri: String,
    pub specializes: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParticipationSpec {
    pub described_event: EntityRef,
    pub participants: Vec<ParticipantSpec>,
    pub time_param: Option<TimeInterval>,
    pub location_params: Vec<(String, GeoBox)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompositionSpec {
    pub composite: EntityRef,
    pub components: Vec<EntityRef>,
    pub constraints: Vec<ConstraintSpec>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CausalitySpec {
    pub cause: EntityRef,
    pub effect: EntityRef,
    pub justification: Justification,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSpec {
    pub correlates: BTreeSet<EntityRef>,
    pub justification: Justification,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DocumentationSpec {
    pub documented_event: EntityRef,
    pub documenters: Vec<EntityRef>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterpretationSpec {
    pub interpreted_event: EntityRef,
    /// IRI of the interpretant concept (created as an event type if absent).
    pub interpretant_iri: String,
    /// Optional domain concept the interpretant specializes.
    pub specializes: Option<String>,
    pub relevant_situations: Vec<EntityRef>,
}

/// A participant as reconstructed from the store.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticipantView {
    pub object: EntityRef,
    pub role: EntityRef,
    pub specializes: Option<EntityRef>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParticipationView {
    pub described_event: EntityRef,
    pub participants: Vec<ParticipantView>,
    pub time_param: Option<TimeInterval>,
    pub location_params: Vec<(EntityRef, GeoBox)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompositionView {
    pub composite: EntityRef,
    pub components: Vec<EntityRef>,
    pub constraints: Vec<ConstraintSpec>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CausalityView {
    pub cause: EntityRef,
    pub effect: EntityRef,
    pub justification: EntityRef,
    pub justification_label: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationView {
    pub correlates: BTreeSet<EntityRef>,
    pub justification: EntityRef,
    pub justification_label: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DocumentationView {
    pub documented_event: EntityRef,
    pub documenters: Vec<EntityRef>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterpretationView {
    pub interpreted_event: EntityRef,
    pub interpretant: EntityRef,
    pub specializes: Option<EntityRef>,
    pub relevant_situations: Vec<EntityRef>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PatternDetail {
    Participation(ParticipationView),
    Composition(CompositionView),
    Causality(CausalityView),
    Correlation(CorrelationView),
    Documentation(DocumentationView),
    Interpretation(InterpretationView),
}

/// Typed read-view of one situation+description pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternView {
    pub situation: EntityRef,
    pub description: EntityRef,
    pub detail: PatternDetail,
}

impl PatternView {
    pub fn kind(&self) -> PatternKind {
        match self.detail {
            PatternDetail::Participation(_) => PatternKind::Participation,
            PatternDetail::Composition(_) => PatternKind::Composition,
            PatternDetail::Causality(_) => PatternKind::Causality,
            PatternDetail::Correlation(_) => PatternKind::Correlation,
            PatternDetail::Documentation(_) => PatternKind::Documentation,
            PatternDetail::Interpretation(_) => PatternKind::Interpretation,
        }
    }
}

fn expect_kind(store: &Store, entity: &EntityRef, kind: Kind) -> Result<(), PatternError> {
    match store.kind_of(entity) {
        Some(k) if k == kind => Ok(()),
        Some(k) => Err(PatternError::KindMismatch {
            entity: entity.iri().to_string(),
            expected: kind.name(),
            actual: k.name(),
        }),
        None => Err(PatternError::Graph(GraphError::UnknownEntity(
            entity.iri().to_string(),
        ))),
    }
}

/// Scaffolding common to all builders: situation, description, `satisfies`.
struct Skeleton {
    situation: EntityRef,
    description: EntityRef,
    stem: String,
}

fn skeleton(store: &mut Store, pattern: PatternKind) -> Result<Skeleton, PatternError> {
    let stem = store.fresh_stem(pattern.name());
    let situation = store.new_entity(&stem, Kind::Situation)?;
    let description = store.new_entity(&format!("{stem}-desc"), Kind::Description)?;
    store.assert_edge(&situation, Property::Satisfies, &description)?;
    Ok(Skeleton {
        situation,
        description,
        stem,
    })
}

/// Mint a concept defined by `description` and anchored at `anchor`.
fn mint_concept(
    store: &mut Store,
    description: &EntityRef,
    iri: &str,
    anchor: Anchor,
) -> Result<EntityRef, PatternError> {
    let anchor_entity = store.ensure_anchor(anchor)?;
    let concept = store.ensure_entity(iri, anchor.kind())?;
    store.assert_edge(&concept, Property::Specializes, &anchor_entity)?;
    store.assert_edge(description, Property::Defines, &concept)?;
    Ok(concept)
}

fn materialize_justification(
    store: &mut Store,
    stem: &str,
    justification: &Justification,
) -> Result<EntityRef, PatternError> {
    match justification {
        Justification::Existing(desc) => {
            expect_kind(store, desc, Kind::Description)?;
            Ok(desc.clone())
        }
        Justification::Text(text) => {
            let desc =
                store.new_entity(&format!("{stem}-justification"), Kind::Description)?;
            store.set_label(&desc, text)?;
            Ok(desc)
        }
    }
}

/// Build a participation: the described event, its participants with their
/// roles, and optional time/location parameters.
pub fn build_participation(
    store: &mut Store,
    spec: &ParticipationSpec,
) -> Result<PatternView, PatternError> {
    if spec.participants.is_empty() {
        return Err(PatternError::EmptyParticipants);
    }
    expect_kind(store, &spec.described_event, Kind::Event)?;
    let mut seen_roles = BTreeSet::new();
    for p in &spec.participants {
        expect_kind(store, &p.object, Kind::Object)?;
        if !seen_roles.insert(p.role_iri.as_str()) {
            return Err(PatternError::DuplicateRole(p.role_iri.clone()));
        }
    }
    for (role_iri, _) in &spec.location_params {
        if !spec.participants.iter().any(|p| &p.role_iri == role_iri) {
            return Err(PatternError::UnknownRole(role_iri.clone()));
        }
    }

    let sk = skeleton(store, PatternKind::Participation)?;
    let described_concept = mint_concept(
        store,
        &sk.description,
        &format!("{}-described-event", sk.stem),
        Anchor::DescribedEvent,
    )?;
    store.assert_edge(&described_concept, Property::Classifies, &spec.described_event)?;
    store.assert_edge(&sk.situation, Property::IncludesEvent, &spec.described_event)?;

    let mut roles: BTreeMap<&str, EntityRef> = BTreeMap::new();
    for p in &spec.participants {
        let role = mint_concept(store, &sk.description, &p.role_iri, Anchor::Participant)?;
        if let Some(domain) = &p.specializes {
            let domain_concept = store.ensure_entity(domain, Kind::Concept(ConceptKind::Role))?;
            store.assert_edge(&role, Property::Specializes, &domain_concept)?;
        }
        store.assert_edge(&role, Property::Classifies, &p.object)?;
        store.assert_edge(&sk.situation, Property::IncludesObject, &p.object)?;
        roles.insert(p.role_iri.as_str(), role);
    }

    if let Some(interval) = &spec.time_param {
        let param = mint_concept(
            store,
            &sk.description,
            &format!("{}-time-param", sk.stem),
            Anchor::TimeParameter,
        )?;
        let region = store.new_entity(
            &format!("{}-time-region", sk.stem),
            Kind::Region(RegionKind::TimeInterval),
        )?;
        store.set_region_value(&region, RegionValue::Time(interval.clone()))?;
        store.assert_edge(&param, Property::Parametrizes, &region)?;
        store.assert_edge(&param, Property::IsParameterFor, &described_concept)?;
    }

    for (i, (role_iri, geo_box)) in spec.location_params.iter().enumerate() {
        let param = mint_concept(
            store,
            &sk.description,
            &format!("{}-loc-param-{}", sk.stem, i + 1),
            Anchor::LocationParameter,
        )?;
        let region = store.new_entity(
            &format!("{}-loc-region-{}", sk.stem, i + 1),
            Kind::Region(RegionKind::SpaceRegion),
        )?;
        store.set_region_value(&region, RegionValue::Space(*geo_box))?;
        store.assert_edge(&param, Property::Parametrizes, &region)?;
        store.assert_edge(&param, Property::IsParameterFor, &roles[role_iri.as_str()])?;
    }

    view_of_built(store, &sk.situation)
}

/// Build a composition: one composite event, its components, and any
/// composition constraints.
pub fn build_composition(
    store: &mut Store,
    spec: &CompositionSpec,
) -> Result<PatternView, PatternError> {
    if spec.components.is_empty() {
        return Err(PatternError::EmptyComponents);
    }
    expect_kind(store, &spec.composite, Kind::Event)?;
    let mut seen = BTreeSet::new();
    for c in &spec.components {
        expect_kind(store, c, Kind::Event)?;
        if c == &spec.composite {
            return Err(PatternError::CompositeAmongComponents);
        }
        if !seen.insert(c.clone()) {
            return Err(PatternError::DuplicateComponent(c.iri().to_string()));
        }
    }
    for constraint in &spec.constraints {
        if let ConstraintSpec::Temporal {
            target: TemporalTarget::ComponentRef(target),
            ..
        } = constraint
        {
            if !spec.components.contains(target) {
                return Err(PatternError::ConstraintTargetNotAComponent(
                    target.iri().to_string(),
                ));
            }
        }
    }

    let sk = skeleton(store, PatternKind::Composition)?;
    let composite_concept = mint_concept(
        store,
        &sk.description,
        &format!("{}-composite", sk.stem),
        Anchor::Composite,
    )?;
    store.assert_edge(&composite_concept, Property::Classifies, &spec.composite)?;
    store.assert_edge(&sk.situation, Property::IncludesEvent, &spec.composite)?;

    let component_concept = mint_concept(
        store,
        &sk.description,
        &format!("{}-component", sk.stem),
        Anchor::Component,
    )?;
    for c in &spec.components {
        store.assert_edge(&component_concept, Property::Classifies, c)?;
        store.assert_edge(&sk.situation, Property::IncludesEvent, c)?;
    }

    for (i, constraint) in spec.constraints.iter().enumerate() {
        let cstem = format!("{}-constraint-{}", sk.stem, i + 1);
        let param = mint_concept(store, &sk.description, &cstem, Anchor::CompositionConstraint)?;
        match constraint {
            ConstraintSpec::Temporal { relation, target } => {
                store.set_relation_tag(&param, *relation)?;
                match target {
                    TemporalTarget::AbsoluteInterval(interval) => {
                        let region = store.new_entity(
                            &format!("{cstem}-region"),
                            Kind::Region(RegionKind::TimeInterval),
                        )?;
                        store.set_region_value(&region, RegionValue::Time(interval.clone()))?;
                        store.assert_edge(&param, Property::Parametrizes, &region)?;
                    }
                    TemporalTarget::Composite => {
                        store.assert_edge(&param, Property::IsParameterFor, &composite_concept)?;
                    }
                    TemporalTarget::ComponentRef(target) => {
                        let ref_concept = mint_concept(
                            store,
                            &sk.description,
                            &format!("{cstem}-target"),
                            Anchor::ConstraintTarget,
                        )?;
                        store.assert_edge(&ref_concept, Property::Classifies, target)?;
                        store.assert_edge(&param, Property::IsParameterFor, &ref_concept)?;
                    }
                }
            }
            ConstraintSpec::SpatialWithin(geo_box) => {
                let region = store.new_entity(
                    &format!("{cstem}-region"),
                    Kind::Region(RegionKind::SpaceRegion),
                )?;
                store.set_region_value(&region, RegionValue::Space(*geo_box))?;
                store.assert_edge(&param, Property::Parametrizes, &region)?;
            }
            ConstraintSpec::SpatioTemporalWithin(trajectory) => {
                let region = store.new_entity(
                    &format!("{cstem}-region"),
                    Kind::Region(RegionKind::SpatioTemporalRegion),
                )?;
                store.set_region_value(&region, RegionValue::SpatioTemporal(trajectory.clone()))?;
                store.assert_edge(&param, Property::Parametrizes, &region)?;
            }
        }
    }

    view_of_built(store, &sk.situation)
}

/// Build a causality: one cause event, one effect event, and a justification.
pub fn build_causality(
    store: &mut Store,
    spec: &CausalitySpec,
) -> Result<PatternView, PatternError> {
    if spec.cause == spec.effect {
        return Err(PatternError::SelfCause);
    }
    expect_kind(store, &spec.cause, Kind::Event)?;
    expect_kind(store, &spec.effect, Kind::Event)?;

    let sk = skeleton(store, PatternKind::Causality)?;
    let cause_concept =
        mint_concept(store, &sk.description, &format!("{}-cause", sk.stem), Anchor::Cause)?;
    store.assert_edge(&cause_concept, Property::Classifies, &spec.cause)?;
    store.assert_edge(&sk.situation, Property::IncludesEvent, &spec.cause)?;

    let effect_concept =
        mint_concept(store, &sk.description, &format!("{}-effect", sk.stem), Anchor::Effect)?;
    store.assert_edge(&effect_concept, Property::Classifies, &spec.effect)?;
    store.assert_edge(&sk.situation, Property::IncludesEvent, &spec.effect)?;

    let justification = materialize_justification(store, &sk.stem, &spec.justification)?;
    store.assert_edge(&sk.description, Property::HasJustification, &justification)?;

    view_of_built(store, &sk.situation)
}

/// Build a correlation over a set of events sharing (presumed) common causes.
pub fn build_correlation(
    store: &mut Store,
    spec: &CorrelationSpec,
) -> Result<PatternView, PatternError> {
    if spec.correlates.len() < 2 {
        return Err(PatternError::TooFewCorrelates);
    }
    for c in &spec.correlates {
        expect_kind(store, c, Kind::Event)?;
    }

    let sk = skeleton(store, PatternKind::Correlation)?;
    let correlate_concept = mint_concept(
        store,
        &sk.description,
        &format!("{}-correlate", sk.stem),
        Anchor::Correlate,
    )?;
    for c in &spec.correlates {
        store.assert_edge(&correlate_concept, Property::Classifies, c)?;
        store.assert_edge(&sk.situation, Property::IncludesEvent, c)?;
    }

    let justification = materialize_justification(store, &sk.stem, &spec.justification)?;
    store.assert_edge(&sk.description, Property::HasJustification, &justification)?;

    view_of_built(store, &sk.situation)
}

/// Build a documentation: evidence (objects or events) for a documented event.
pub fn build_documentation(
    store: &mut Store,
    spec: &DocumentationSpec,
) -> Result<PatternView, PatternError> {
    if spec.documenters.is_empty() {
        return Err(PatternError::EmptyDocumenters);
    }
    expect_kind(store, &spec.documented_event, Kind::Event)?;
    let mut object_documenters = Vec::new();
    let mut event_documenters = Vec::new();
    for d in &spec.documenters {
        if d == &spec.documented_event {
            return Err(PatternError::SelfDocumentation);
        }
        match store.kind_of(d) {
            Some(Kind::Object) => object_documenters.push(d.clone()),
            Some(Kind::Event) => event_documenters.push(d.clone()),
            Some(k) => {
                return Err(PatternError::KindMismatch {
                    entity: d.iri().to_string(),
                    expected: "Object or Event",
                    actual: k.name(),
                })
            }
            None => {
                return Err(PatternError::Graph(GraphError::UnknownEntity(
                    d.iri().to_string(),
                )))
            }
        }
    }

    let sk = skeleton(store, PatternKind::Documentation)?;
    let documented_concept = mint_concept(
        store,
        &sk.description,
        &format!("{}-documented", sk.stem),
        Anchor::DocumentedEvent,
    )?;
    store.assert_edge(&documented_concept, Property::Classifies, &spec.documented_event)?;
    store.assert_edge(&sk.situation, Property::IncludesEvent, &spec.documented_event)?;

    // The classification table splits documenters by kind: a Role concept
    // classifies object evidence, an EventType concept classifies event
    // evidence.
    if !object_documenters.is_empty() {
        let role = mint_concept(
            store,
            &sk.description,
            &format!("{}-documenter-role", sk.stem),
            Anchor::Documenter,
        )?;
        for d in &object_documenters {
            store.assert_edge(&role, Property::Classifies, d)?;
            store.assert_edge(&sk.situation, Property::IncludesObject, d)?;
        }
    }
    if !event_documenters.is_empty() {
        let etype = store.ensure_entity(
            &format!("{}-documenter-type", sk.stem),
            Kind::Concept(ConceptKind::EventType),
        )?;
        let anchor = store.ensure_anchor(Anchor::Documenter)?;
        store.assert_edge(&etype, Property::Specializes, &anchor)?;
        store.assert_edge(&sk.description, Property::Defines, &etype)?;
        for d in &event_documenters {
            store.assert_edge(&etype, Property::Classifies, d)?;
            store.assert_edge(&sk.situation, Property::IncludesEvent, d)?;
        }
    }

    view_of_built(store, &sk.situation)
}

/// Build an interpretation: one contextual point of view bundling situations
/// from the other five patterns under an interpretant concept.
pub fn build_interpretation(
    store: &mut Store,
    spec: &InterpretationSpec,
) -> Result<PatternView, PatternError> {
    if spec.relevant_situations.is_empty() {
        return Err(PatternError::EmptySituations);
    }
    expect_kind(store, &spec.interpreted_event, Kind::Event)?;
    let before = store.snapshot();
    for sit in &spec.relevant_situations {
        match pattern_kind_of(&before, sit) {
            Some((kind, _)) if kind != PatternKind::Interpretation => {}
            _ => {
                return Err(PatternError::NonPatternSituation(
                    sit.iri().to_string(),
                ))
            }
        }
    }

    let sk = skeleton(store, PatternKind::Interpretation)?;
    let interpretant =
        mint_concept(store, &sk.description, &spec.interpretant_iri, Anchor::Interpretant)?;
    if let Some(domain) = &spec.specializes {
        let domain_concept =
            store.ensure_entity(domain, Kind::Concept(ConceptKind::EventType))?;
        store.assert_edge(&interpretant, Property::Specializes, &domain_concept)?;
    }
    store.assert_edge(&interpretant, Property::Classifies, &spec.interpreted_event)?;
    store.assert_edge(&sk.situation, Property::IncludesEvent, &spec.interpreted_event)?;

    let relevant_role = mint_concept(
        store,
        &sk.description,
        &format!("{}-relevant", sk.stem),
        Anchor::RelevantSituation,
    )?;
    for sit in &spec.relevant_situations {
        store.assert_edge(&relevant_role, Property::Classifies, sit)?;
        store.assert_edge(&sk.situation, Property::IncludesSituation, sit)?;
    }

    view_of_built(store, &sk.situation)
}

fn view_of_built(store: &Store, situation: &EntityRef) -> Result<PatternView, PatternError> {
    view_of(&store.snapshot(), situation)
}

/// All concepts defined by `description` that specialize the given anchor.
pub fn concepts_with_anchor(
    snapshot: &Snapshot,
    description: &EntityRef,
    anchor: Anchor,
) -> Vec<EntityRef> {
    let anchor_iri = anchor.iri();
    snapshot
        .objects_of(description, Property::Defines)
        .into_iter()
        .filter(|c| {
            snapshot
                .objects_of(c, Property::Specializes)
                .iter()
                .any(|s| s.iri() == anchor_iri)
        })
        .collect()
}

/// Anchors carried by one concept (via its `specializes` edges).
pub fn anchors_of_concept(snapshot: &Snapshot, concept: &EntityRef) -> Vec<Anchor> {
    snapshot
        .objects_of(concept, Property::Specializes)
        .iter()
        .filter_map(|s| Anchor::from_iri(s.iri()))
        .collect()
}

/// Infer the pattern kind of a situation from the anchors of the concepts its
/// description defines. Returns the description alongside the kind. `None`
/// when the situation satisfies no single description or the anchors do not
/// identify exactly one pattern.
pub fn pattern_kind_of(
    snapshot: &Snapshot,
    situation: &EntityRef,
) -> Option<(PatternKind, EntityRef)> {
    if snapshot.kind_of(situation) != Some(Kind::Situation) {
        return None;
    }
    let descriptions = snapshot.objects_of(situation, Property::Satisfies);
    if descriptions.len() != 1 {
        return None;
    }
    let description = descriptions.into_iter().next().unwrap();
    let mut kinds = BTreeSet::new();
    for concept in snapshot.objects_of(&description, Property::Defines) {
        for anchor in anchors_of_concept(snapshot, &concept) {
            kinds.insert(pattern_of_anchor(anchor));
        }
    }
    if kinds.len() == 1 {
        Some((kinds.into_iter().next().unwrap(), description))
    } else {
        None
    }
}

/// Every pattern situation in the snapshot, sorted by IRI.
pub fn pattern_situations(snapshot: &Snapshot) -> Vec<(EntityRef, PatternKind, EntityRef)> {
    snapshot
        .entities_of_kind(Kind::Situation)
        .into_iter()
        .filter_map(|sit| pattern_kind_of(snapshot, &sit).map(|(k, d)| (sit, k, d)))
        .collect()
}

/// Events classified by any of the given concepts, sorted and deduplicated.
fn classified_events(snapshot: &Snapshot, concepts: &[EntityRef]) -> Vec<EntityRef> {
    let mut out: BTreeSet<EntityRef> = BTreeSet::new();
    for c in concepts {
        out.extend(snapshot.objects_of(c, Property::Classifies));
    }
    out.into_iter().collect()
}

/// Objects participating in `event` through any participation situation in
/// the snapshot, sorted and deduplicated.
pub fn participants_of_event(snapshot: &Snapshot, event: &EntityRef) -> Vec<EntityRef> {
    let mut out: BTreeSet<EntityRef> = BTreeSet::new();
    for (_, kind, description) in pattern_situations(snapshot) {
        if kind != PatternKind::Participation {
            continue;
        }
        let described = classified_events(
            snapshot,
            &concepts_with_anchor(snapshot, &description, Anchor::DescribedEvent),
        );
        if !described.contains(event) {
            continue;
        }
        for role in concepts_with_anchor(snapshot, &description, Anchor::Participant) {
            for obj in snapshot.objects_of(&role, Property::Classifies) {
                if snapshot.kind_of(&obj) == Some(Kind::Object) {
                    out.insert(obj);
                }
            }
        }
    }
    out.into_iter().collect()
}

fn malformed(snapshot: &Snapshot, situation: &EntityRef, reason: impl Into<String>) -> PatternError {
    PatternError::MalformedPattern {
        situation: snapshot.compact(situation),
        reason: reason.into(),
    }
}

fn single<T: Clone>(
    items: &[T],
    snapshot: &Snapshot,
    situation: &EntityRef,
    what: &str,
) -> Result<T, PatternError> {
    match items.len() {
        1 => Ok(items[0].clone()),
        n => Err(malformed(
            snapshot,
            situation,
            format!("expected exactly one {what}, found {n}"),
        )),
    }
}

/// Domain concepts a minted concept specializes, anchors excluded.
fn domain_specializations(snapshot: &Snapshot, concept: &EntityRef) -> Vec<EntityRef> {
    snapshot
        .objects_of(concept, Property::Specializes)
        .into_iter()
        .filter(|s| Anchor::from_iri(s.iri()).is_none())
        .collect()
}

/// Reconstruct the typed view of a pattern situation; the inverse of the
/// builders up to generated IRIs.
pub fn view_of(snapshot: &Snapshot, situation: &EntityRef) -> Result<PatternView, PatternError> {
    if snapshot.kind_of(situation).is_none() {
        return Err(PatternError::Graph(GraphError::UnknownEntity(
            situation.iri().to_string(),
        )));
    }
    let Some((kind, description)) = pattern_kind_of(snapshot, situation) else {
        return Err(PatternError::NotAPatternSituation(
            snapshot.compact(situation),
        ));
    };

    let detail = match kind {
        PatternKind::Participation => {
            let described = classified_events(
                snapshot,
                &concepts_with_anchor(snapshot, &description, Anchor::DescribedEvent),
            );
            let described_event = single(&described, snapshot, situation, "described event")?;

            let mut participants = Vec::new();
            for role in concepts_with_anchor(snapshot, &description, Anchor::Participant) {
                let specializes = domain_specializations(snapshot, &role).first().cloned();
                for object in snapshot.objects_of(&role, Property::Classifies) {
                    participants.push(ParticipantView {
                        object,
                        role: role.clone(),
                        specializes: specializes.clone(),
                    });
                }
            }

            let mut time_param = None;
            for param in concepts_with_anchor(snapshot, &description, Anchor::TimeParameter) {
                for region in snapshot.objects_of(&param, Property::Parametrizes) {
                    if let Some(RegionValue::Time(iv)) = snapshot.region_value(&region) {
                        time_param.get_or_insert(iv.clone());
                    }
                }
            }

            let mut location_params = Vec::new();
            for param in concepts_with_anchor(snapshot, &description, Anchor::LocationParameter) {
                let role = snapshot
                    .objects_of(&param, Property::IsParameterFor)
                    .first()
                    .cloned();
                for region in snapshot.objects_of(&param, Property::Parametrizes) {
                    if let (Some(role), Some(RegionValue::Space(b))) =
                        (role.clone(), snapshot.region_value(&region))
                    {
                        location_params.push((role, *b));
                    }
                }
            }
            location_params.sort_by(|a, b| {
                (a.0.iri(), a.1.lexical()).cmp(&(b.0.iri(), b.1.lexical()))
            });

            PatternDetail::Participation(ParticipationView {
                described_event,
                participants,
                time_param,
                location_params,
            })
        }
        PatternKind::Composition => {
            let composites = classified_events(
                snapshot,
                &concepts_with_anchor(snapshot, &description, Anchor::Composite),
            );
            let composite = single(&composites, snapshot, situation, "composite")?;
            let components = classified_events(
                snapshot,
                &concepts_with_anchor(snapshot, &description, Anchor::Component),
            );
            if components.is_empty() {
                return Err(malformed(snapshot, situation, "no components"));
            }

            let mut constraints = Vec::new();
            for param in
                concepts_with_anchor(snapshot, &description, Anchor::CompositionConstraint)
            {
                constraints.push(decode_constraint(snapshot, situation, &param)?);
            }

            PatternDetail::Composition(CompositionView {
                composite,
                components,
                constraints,
            })
        }
        PatternKind::Causality => {
            let causes = classified_events(
                snapshot,
                &concepts_with_anchor(snapshot, &description, Anchor::Cause),
            );
            let effects = classified_events(
                snapshot,
                &concepts_with_anchor(snapshot, &description, Anchor::Effect),
            );
            let cause = single(&causes, snapshot, situation, "cause")?;
            let effect = single(&effects, snapshot, situation, "effect")?;
            let justification = justification_of(snapshot, situation, &description)?;
            let justification_label = snapshot.label(&justification).map(str::to_string);
            PatternDetail::Causality(CausalityView {
                cause,
                effect,
                justification,
                justification_label,
            })
        }
        PatternKind::Correlation => {
            let correlates: BTreeSet<EntityRef> = classified_events(
                snapshot,
                &concepts_with_anchor(snapshot, &description, Anchor::Correlate),
            )
            .into_iter()
            .collect();
            if correlates.len() < 2 {
                return Err(malformed(snapshot, situation, "fewer than two correlates"));
            }
            let justification = justification_of(snapshot, situation, &description)?;
            let justification_label = snapshot.label(&justification).map(str::to_string);
            PatternDetail::Correlation(CorrelationView {
                correlates,
                justification,
                justification_label,
            })
        }
        PatternKind::Documentation => {
            let documented = classified_events(
                snapshot,
                &concepts_with_anchor(snapshot, &description, Anchor::DocumentedEvent),
            );
            let documented_event = single(&documented, snapshot, situation, "documented event")?;
            let documenters = classified_events(
                snapshot,
                &concepts_with_anchor(snapshot, &description, Anchor::Documenter),
            );
            if documenters.is_empty() {
                return Err(malformed(snapshot, situation, "no documenters"));
            }
            PatternDetail::Documentation(DocumentationView {
                documented_event,
                documenters,
            })
        }
        PatternKind::Interpretation => {
            let interpretants =
                concepts_with_anchor(snapshot, &description, Anchor::Interpretant);
            let interpretant = single(&interpretants, snapshot, situation, "interpretant")?;
            let interpreted = snapshot.objects_of(&interpretant, Property::Classifies);
            let interpreted_event = single(&interpreted, snapshot, situation, "interpreted event")?;
            let relevant_situations = classified_events(
                snapshot,
                &concepts_with_anchor(snapshot, &description, Anchor::RelevantSituation),
            );
            if relevant_situations.is_empty() {
                return Err(malformed(snapshot, situation, "no relevant situations"));
            }
            let specializes = domain_specializations(snapshot, &interpretant).first().cloned();
            PatternDetail::Interpretation(InterpretationView {
                interpreted_event,
                interpretant,
                specializes,
                relevant_situations,
            })
        }
    };

    Ok(PatternView {
        situation: situation.clone(),
        description,
        detail,
    })
}

fn justification_of(
    snapshot: &Snapshot,
    situation: &EntityRef,
    description: &EntityRef,
) -> Result<EntityRef, PatternError> {
    let targets = snapshot.objects_of(description, Property::HasJustification);
    single(&targets, snapshot, situation, "justification")
}

fn decode_constraint(
    snapshot: &Snapshot,
    situation: &EntityRef,
    param: &EntityRef,
) -> Result<ConstraintSpec, PatternError> {
    let regions = snapshot.objects_of(param, Property::Parametrizes);
    let region_value = regions.first().and_then(|r| snapshot.region_value(r));
    match snapshot.relation_tag(param) {
        Some(relation) => {
            if let Some(RegionValue::Time(iv)) = region_value {
                return Ok(ConstraintSpec::Temporal {
                    relation,
                    target: TemporalTarget::AbsoluteInterval(iv.clone()),
                });
            }
            let targets = snapshot.objects_of(param, Property::IsParameterFor);
            let target_concept = single(&targets, snapshot, situation, "constraint target")?;
            let anchors = anchors_of_concept(snapshot, &target_concept);
            if anchors.contains(&Anchor::Composite) {
                Ok(ConstraintSpec::Temporal {
                    relation,
                    target: TemporalTarget::Composite,
                })
            } else if anchors.contains(&Anchor::ConstraintTarget) {
                let referenced = snapshot.objects_of(&target_concept, Property::Classifies);
                let event = single(&referenced, snapshot, situation, "referenced component")?;
                Ok(ConstraintSpec::Temporal {
                    relation,
                    target: TemporalTarget::ComponentRef(event),
                })
            } else {
                Err(malformed(
                    snapshot,
                    situation,
                    format!(
                        "constraint {} targets neither the composite nor a component",
                        snapshot.compact(param)
                    ),
                ))
            }
        }
        None => match region_value {
            Some(RegionValue::Space(b)) => Ok(ConstraintSpec::SpatialWithin(*b)),
            Some(RegionValue::SpatioTemporal(t)) => {
                Ok(ConstraintSpec::SpatioTemporalWithin(t.clone()))
            }
            _ => Err(malformed(
                snapshot,
                situation,
                format!(
                    "constraint {} has neither a relation nor a spatial region",
                    snapshot.compact(param)
                ),
            )),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spacetime::AllenRelation;

    fn base_store() -> (Store, EntityRef, EntityRef, EntityRef, EntityRef) {
        let mut s = Store::new();
        s.declare_prefix("ex", "http://example.org/emergency#").unwrap();
        s.declare_prefix("dom", "http://example.org/domain#").unwrap();
        let outage = s.new_entity("ex:power-outage-1", Kind::Event).unwrap();
        let pole = s.new_entity("ex:snapped-power-pole-1", Kind::Event).unwrap();
        let person = s.new_entity("ex:person-1", Kind::Object).unwrap();
        let house = s.new_entity("ex:house-1", Kind::Object).unwrap();
        (s, outage, pole, person, house)
    }

    fn two_citizen_participation(
        outage: &EntityRef,
        person: &EntityRef,
        house: &EntityRef,
    ) -> ParticipationSpec {
        ParticipationSpec {
            described_event: outage.clone(),
            participants: vec![
                ParticipantSpec {
                    object: person.clone(),
                    role_iri: "ex:citizen-1".into(),
                    specializes: Some("dom:Citizen".into()),
                },
                ParticipantSpec {
                    object: house.clone(),
                    role_iri: "ex:affected-bldg-1".into(),
                    specializes: Some("dom:AffectedBuilding".into()),
                },
            ],
            time_param: None,
            location_params: vec![],
        }
    }

    #[test]
    fn participation_builds_and_round_trips() {
        let (mut s, outage, _, person, house) = base_store();
        let spec = two_citizen_participation(&outage, &person, &house);
        let view = build_participation(&mut s, &spec).unwrap();
        assert_eq!(view.kind(), PatternKind::Participation);
        let PatternDetail::Participation(p) = &view.detail else {
            panic!("wrong detail")
        };
        assert_eq!(p.described_event, outage);
        assert_eq!(p.participants.len(), 2);
        let roles: Vec<&str> = p.participants.iter().map(|x| x.role.iri()).collect();
        assert_eq!(
            roles,
            vec![
                "http://example.org/emergency#affected-bldg-1",
                "http://example.org/emergency#citizen-1"
            ]
        );
        // Reconstruction from the store equals the view the builder returned.
        let again = view_of(&s.snapshot(), &view.situation).unwrap();
        assert_eq!(again, view);
    }

    #[test]
    fn participation_rejects_empty_and_duplicate_roles() {
        let (mut s, outage, _, person, _) = base_store();
        let empty = ParticipationSpec {
            described_event: outage.clone(),
            participants: vec![],
            time_param: None,
            location_params: vec![],
        };
        assert_eq!(
            build_participation(&mut s, &empty).unwrap_err(),
            PatternError::EmptyParticipants
        );

        let dup = ParticipationSpec {
            described_event: outage.clone(),
            participants: vec![
                ParticipantSpec {
                    object: person.clone(),
                    role_iri: "ex:r".into(),
                    specializes: None,
                },
                ParticipantSpec {
                    object: person.clone(),
                    role_iri: "ex:r".into(),
                    specializes: None,
                },
            ],
            time_param: None,
            location_params: vec![],
        };
        assert_eq!(
            build_participation(&mut s, &dup).unwrap_err(),
            PatternError::DuplicateRole("ex:r".into())
        );
    }

    #[test]
    fn participation_location_param_wires_to_role() {
        let (mut s, outage, _, person, _) = base_store();
        let geo = GeoBox::new(50.90, 50.95, 7.05, 7.10).unwrap();
        let spec = ParticipationSpec {
            described_event: outage.clone(),
            participants: vec![ParticipantSpec {
                object: person.clone(),
                role_iri: "ex:citizen-1".into(),
                specializes: Some("dom:Citizen".into()),
            }],
            time_param: None,
            location_params: vec![("ex:citizen-1".into(), geo)],
        };
        let view = build_participation(&mut s, &spec).unwrap();
        let PatternDetail::Participation(p) = &view.detail else {
            panic!("wrong detail")
        };
        assert_eq!(p.location_params.len(), 1);
        assert_eq!(p.location_params[0].0.iri(), "http://example.org/emergency#citizen-1");
        assert_eq!(p.location_params[0].1, geo);

        // The parameter is wired to the participant role via isParameterFor.
        let snap = s.snapshot();
        let role = snap.resolve("ex:citizen-1").unwrap();
        let params = snap.subjects_of(Property::IsParameterFor, &role);
        assert_eq!(params.len(), 1);

        let unknown = ParticipationSpec {
            location_params: vec![("ex:nobody".into(), geo)],
            ..spec
        };
        assert_eq!(
            build_participation(&mut s, &unknown).unwrap_err(),
            PatternError::UnknownRole("ex:nobody".into())
        );
    }

    #[test]
    fn composition_builds_with_constraint() {
        let (mut s, outage, _, _, _) = base_store();
        let flooding = s.new_entity("ex:flooding-1", Kind::Event).unwrap();
        let cellar = s.new_entity("ex:flooded-cellar-1", Kind::Event).unwrap();
        let rescue = s.new_entity("ex:rescue-1", Kind::Event).unwrap();
        let window = TimeInterval::parse("2009-06-08T00:00:00Z/2009-06-14T23:59:59Z").unwrap();
        let spec = CompositionSpec {
            composite: flooding.clone(),
            components: vec![cellar.clone(), outage.clone(), rescue.clone()],
            constraints: vec![ConstraintSpec::Temporal {
                relation: AllenRelation::During,
                target: TemporalTarget::AbsoluteInterval(window.clone()),
            }],
        };
        let view = build_composition(&mut s, &spec).unwrap();
        let PatternDetail::Composition(c) = &view.detail else {
            panic!("wrong detail")
        };
        assert_eq!(c.composite, flooding);
        assert_eq!(c.components.len(), 3);
        assert_eq!(
            c.constraints,
            vec![ConstraintSpec::Temporal {
                relation: AllenRelation::During,
                target: TemporalTarget::AbsoluteInterval(window),
            }]
        );
        assert_eq!(view_of(&s.snapshot(), &view.situation).unwrap(), view);
    }

    #[test]
    fn composition_rejects_self_and_duplicates() {
        let (mut s, outage, pole, _, _) = base_store();
        let err = build_composition(
            &mut s,
            &CompositionSpec {
                composite: outage.clone(),
                components: vec![pole.clone(), outage.clone()],
                constraints: vec![],
            },
        )
        .unwrap_err();
        assert_eq!(err, PatternError::CompositeAmongComponents);

        let err = build_composition(
            &mut s,
            &CompositionSpec {
                composite: outage.clone(),
                components: vec![],
                constraints: vec![],
            },
        )
        .unwrap_err();
        assert_eq!(err, PatternError::EmptyComponents);

        let err = build_composition(
            &mut s,
            &CompositionSpec {
                composite: outage.clone(),
                components: vec![pole.clone(), pole.clone()],
                constraints: vec![],
            },
        )
        .unwrap_err();
        assert!(matches!(err, PatternError::DuplicateComponent(_)));
    }

    #[test]
    fn causality_builds_and_self_cause_is_rejected() {
        let (mut s, outage, pole, _, _) = base_store();
        let view = build_causality(
            &mut s,
            &CausalitySpec {
                cause: pole.clone(),
                effect: outage.clone(),
                justification: "laws of physics".into(),
            },
        )
        .unwrap();
        let PatternDetail::Causality(c) = &view.detail else {
            panic!("wrong detail")
        };
        assert_eq!(c.cause, pole);
        assert_eq!(c.effect, outage);
        assert_eq!(c.justification_label.as_deref(), Some("laws of physics"));

        let err = build_causality(
            &mut s,
            &CausalitySpec {
                cause: outage.clone(),
                effect: outage.clone(),
                justification: "x".into(),
            },
        )
        .unwrap_err();
        assert_eq!(err, PatternError::SelfCause);
    }

    #[test]
    fn two_causalities_may_share_an_effect() {
        let (mut s, outage, pole, _, _) = base_store();
        let plant = s.new_entity("ex:power-plant-problem-1", Kind::Event).unwrap();
        let a = build_causality(
            &mut s,
            &CausalitySpec {
                cause: pole.clone(),
                effect: outage.clone(),
                justification: "laws of physics".into(),
            },
        )
        .unwrap();
        let b = build_causality(
            &mut s,
            &CausalitySpec {
                cause: plant.clone(),
                effect: outage.clone(),
                justification: "grid analysis".into(),
            },
        )
        .unwrap();
        assert_ne!(a.situation, b.situation);
        assert_ne!(a.description, b.description);
    }

    #[test]
    fn causality_footprint_is_exact() {
        let (mut s, outage, pole, _, _) = base_store();
        let just = s.new_entity("ex:physics", Kind::Description).unwrap();
        // Warm-up build so the anchor concepts already exist.
        let other = s.new_entity("ex:warmup-effect", Kind::Event).unwrap();
        build_causality(
            &mut s,
            &CausalitySpec {
                cause: pole.clone(),
                effect: other.clone(),
                justification: Justification::Existing(just.clone()),
            },
        )
        .unwrap();

        let entities_before = s.entity_count();
        let edges_before = s.edge_count();
        let view = build_causality(
            &mut s,
            &CausalitySpec {
                cause: pole.clone(),
                effect: outage.clone(),
                justification: Justification::Existing(just.clone()),
            },
        )
        .unwrap();
        // 1 situation + 1 description + 2 event-type concepts.
        assert_eq!(s.entity_count() - entities_before, 4);
        // 1 satisfies + 2 defines + 2 classifies + 2 includesEvent
        // + 1 hasJustification + 2 specializes (anchor links).
        assert_eq!(s.edge_count() - edges_before, 10);

        let snap = s.snapshot();
        for (property, expected) in [
            (Property::Satisfies, 1),
            (Property::HasJustification, 1),
        ] {
            let n = snap
                .query_edges(None, Some(property), None)
                .iter()
                .filter(|e| e.subject == view.situation || e.subject == view.description)
                .count();
            assert_eq!(n, expected, "{property}");
        }
    }

    /// Closed-form graph footprints: exact entity and edge deltas for each
    /// builder once the anchor and domain concepts already exist.
    #[test]
    fn builder_footprints_are_exact() {
        let (mut s, outage, pole, person, house) = base_store();
        let plant = s.new_entity("ex:power-plant-problem-1", Kind::Event).unwrap();
        let just = s.new_entity("ex:physics", Kind::Description).unwrap();

        // Warm-up builds so anchors and domain concepts exist.
        build_causality(
            &mut s,
            &CausalitySpec {
                cause: plant.clone(),
                effect: outage.clone(),
                justification: Justification::Existing(just.clone()),
            },
        )
        .unwrap();
        let warm_part = build_participation(
            &mut s,
            &two_citizen_participation(&outage, &person, &house),
        )
        .unwrap();
        build_composition(
            &mut s,
            &CompositionSpec {
                composite: outage.clone(),
                components: vec![pole.clone()],
                constraints: vec![],
            },
        )
        .unwrap();
        build_correlation(
            &mut s,
            &CorrelationSpec {
                correlates: [pole.clone(), plant.clone()].into(),
                justification: Justification::Existing(just.clone()),
            },
        )
        .unwrap();
        build_documentation(
            &mut s,
            &DocumentationSpec {
                documented_event: outage.clone(),
                documenters: vec![house.clone()],
            },
        )
        .unwrap();
        build_interpretation(
            &mut s,
            &InterpretationSpec {
                interpreted_event: outage.clone(),
                interpretant_iri: "ex:warm-view".into(),
                specializes: None,
                relevant_situations: vec![warm_part.situation.clone()],
            },
        )
        .unwrap();

        let measure = |s: &mut Store, build: &dyn Fn(&mut Store)| -> (usize, usize) {
            let entities = s.entity_count();
            let edges = s.edge_count();
            build(s);
            (s.entity_count() - entities, s.edge_count() - edges)
        };

        // Causality: situation + description + 2 concepts; satisfies,
        // 2 defines, 2 classifies, 2 includesEvent, justification link,
        // 2 anchor links.
        let deltas = measure(&mut s, &|s| {
            build_causality(
                s,
                &CausalitySpec {
                    cause: pole.clone(),
                    effect: outage.clone(),
                    justification: Justification::Existing(just.clone()),
                },
            )
            .unwrap();
        });
        assert_eq!(deltas, (4, 10), "causality");

        // Participation with two specialized roles: situation, description,
        // described-event concept, 2 fresh role concepts; satisfies,
        // 3 defines, 3 classifies, includesEvent, 2 includesObject,
        // 5 specializes (3 anchors + 2 domain links).
        let deltas = measure(&mut s, &|s| {
            let spec = ParticipationSpec {
                described_event: pole.clone(),
                participants: vec![
                    ParticipantSpec {
                        object: person.clone(),
                        role_iri: "ex:fresh-citizen".into(),
                        specializes: Some("dom:Citizen".into()),
                    },
                    ParticipantSpec {
                        object: house.clone(),
                        role_iri: "ex:fresh-bldg".into(),
                        specializes: Some("dom:AffectedBuilding".into()),
                    },
                ],
                time_param: None,
                location_params: vec![],
            };
            build_participation(s, &spec).unwrap();
        });
        assert_eq!(deltas, (5, 15), "participation");

        // Composition with two components: situation, description,
        // composite + component concepts; satisfies, 2 defines,
        // 3 classifies, 3 includesEvent, 2 anchor links.
        let deltas = measure(&mut s, &|s| {
            build_composition(
                s,
                &CompositionSpec {
                    composite: outage.clone(),
                    components: vec![pole.clone(), plant.clone()],
                    constraints: vec![],
                },
            )
            .unwrap();
        });
        assert_eq!(deltas, (4, 11), "composition");

        // Correlation of two with a text justification: situation,
        // description, correlate concept, justification description;
        // satisfies, defines, 2 classifies, 2 includesEvent, justification
        // link, anchor link.
        let deltas = measure(&mut s, &|s| {
            build_correlation(
                s,
                &CorrelationSpec {
                    correlates: [pole.clone(), plant.clone()].into(),
                    justification: "common cause".into(),
                },
            )
            .unwrap();
        });
        assert_eq!(deltas, (4, 8), "correlation");

        // Documentation by one object: situation, description, documented
        // concept, documenter role; satisfies, 2 defines, 2 classifies,
        // includesEvent, includesObject, 2 anchor links.
        let deltas = measure(&mut s, &|s| {
            build_documentation(
                s,
                &DocumentationSpec {
                    documented_event: pole.clone(),
                    documenters: vec![person.clone()],
                },
            )
            .unwrap();
        });
        assert_eq!(deltas, (4, 9), "documentation");

        // Interpretation over one situation: situation, description,
        // interpretant, relevant-situation role; satisfies, 2 defines,
        // 2 classifies, includesEvent, includesSituation, 2 anchor links.
        let deltas = measure(&mut s, &|s| {
            build_interpretation(
                s,
                &InterpretationSpec {
                    interpreted_event: outage.clone(),
                    interpretant_iri: "ex:fresh-view".into(),
                    specializes: None,
                    relevant_situations: vec![warm_part.situation.clone()],
                },
            )
            .unwrap();
        });
        assert_eq!(deltas, (4, 9), "interpretation");
    }

    #[test]
    fn correlation_is_a_set_and_needs_two() {
        let (mut s, _, _, _, _) = base_store();
        let cellar = s.new_entity("ex:flooded-cellar-1", Kind::Event).unwrap();
        let rescue = s.new_entity("ex:rescue-1", Kind::Event).unwrap();

        let forward: BTreeSet<_> = [cellar.clone(), rescue.clone()].into();
        let backward: BTreeSet<_> = [rescue.clone(), cellar.clone()].into();
        let a = build_correlation(
            &mut s,
            &CorrelationSpec {
                correlates: forward,
                justification: "common cause: flooding".into(),
            },
        )
        .unwrap();
        let b = build_correlation(
            &mut s,
            &CorrelationSpec {
                correlates: backward,
                justification: "common cause: flooding".into(),
            },
        )
        .unwrap();
        let (PatternDetail::Correlation(ca), PatternDetail::Correlation(cb)) =
            (&a.detail, &b.detail)
        else {
            panic!("wrong detail")
        };
        assert_eq!(ca.correlates, cb.correlates);

        let err = build_correlation(
            &mut s,
            &CorrelationSpec {
                correlates: [cellar.clone()].into(),
                justification: "x".into(),
            },
        )
        .unwrap_err();
        assert_eq!(err, PatternError::TooFewCorrelates);
    }

    #[test]
    fn documentation_accepts_objects_and_events() {
        let (mut s, _, _, _, _) = base_store();
        let cellar = s.new_entity("ex:flooded-cellar-1", Kind::Event).unwrap();
        let photo = s.new_entity("ex:photo-1", Kind::Object).unwrap();
        let report = s.new_entity("ex:report-call-1", Kind::Event).unwrap();

        let view = build_documentation(
            &mut s,
            &DocumentationSpec {
                documented_event: cellar.clone(),
                documenters: vec![photo.clone(), report.clone()],
            },
        )
        .unwrap();
        let PatternDetail::Documentation(d) = &view.detail else {
            panic!("wrong detail")
        };
        assert_eq!(d.documented_event, cellar);
        assert_eq!(d.documenters.len(), 2);

        let err = build_documentation(
            &mut s,
            &DocumentationSpec {
                documented_event: cellar.clone(),
                documenters: vec![],
            },
        )
        .unwrap_err();
        assert_eq!(err, PatternError::EmptyDocumenters);

        let err = build_documentation(
            &mut s,
            &DocumentationSpec {
                documented_event: cellar.clone(),
                documenters: vec![cellar.clone()],
            },
        )
        .unwrap_err();
        assert_eq!(err, PatternError::SelfDocumentation);
    }

    #[test]
    fn interpretations_coexist_without_sharing_situations() {
        let (mut s, outage, pole, person, house) = base_store();
        let plant = s.new_entity("ex:power-plant-problem-1", Kind::Event).unwrap();
        let caus_pole = build_causality(
            &mut s,
            &CausalitySpec {
                cause: pole.clone(),
                effect: outage.clone(),
                justification: "laws of physics".into(),
            },
        )
        .unwrap();
        let caus_plant = build_causality(
            &mut s,
            &CausalitySpec {
                cause: plant.clone(),
                effect: outage.clone(),
                justification: "grid analysis".into(),
            },
        )
        .unwrap();
        let part = build_participation(
            &mut s,
            &two_citizen_participation(&outage, &person, &house),
        )
        .unwrap();

        let officer_a = build_interpretation(
            &mut s,
            &InterpretationSpec {
                interpreted_event: outage.clone(),
                interpretant_iri: "ex:officer-A".into(),
                specializes: None,
                relevant_situations: vec![caus_pole.situation.clone(), part.situation.clone()],
            },
        )
        .unwrap();
        let officer_b = build_interpretation(
            &mut s,
            &InterpretationSpec {
                interpreted_event: outage.clone(),
                interpretant_iri: "ex:officer-B".into(),
                specializes: None,
                relevant_situations: vec![caus_plant.situation.clone()],
            },
        )
        .unwrap();

        let (PatternDetail::Interpretation(a), PatternDetail::Interpretation(b)) =
            (&officer_a.detail, &officer_b.detail)
        else {
            panic!("wrong detail")
        };
        assert_eq!(a.interpreted_event, outage);
        assert_eq!(b.interpreted_event, outage);
        assert!(a
            .relevant_situations
            .iter()
            .all(|x| !b.relevant_situations.contains(x)));
    }

    #[test]
    fn interpretation_rejects_bare_and_interpretation_situations() {
        let (mut s, outage, pole, _, _) = base_store();
        let bare = s.new_entity("ex:bare-sit", Kind::Situation).unwrap();
        let err = build_interpretation(
            &mut s,
            &InterpretationSpec {
                interpreted_event: outage.clone(),
                interpretant_iri: "ex:officer-A".into(),
                specializes: None,
                relevant_situations: vec![bare.clone()],
            },
        )
        .unwrap_err();
        assert!(matches!(err, PatternError::NonPatternSituation(_)));

        let caus = build_causality(
            &mut s,
            &CausalitySpec {
                cause: pole.clone(),
                effect: outage.clone(),
                justification: "x".into(),
            },
        )
        .unwrap();
        let first = build_interpretation(
            &mut s,
            &InterpretationSpec {
                interpreted_event: outage.clone(),
                interpretant_iri: "ex:officer-A".into(),
                specializes: None,
                relevant_situations: vec![caus.situation.clone()],
            },
        )
        .unwrap();
        // Interpretations bundle the other five patterns only.
        let err = build_interpretation(
            &mut s,
            &InterpretationSpec {
                interpreted_event: outage.clone(),
                interpretant_iri: "ex:officer-C".into(),
                specializes: None,
                relevant_situations: vec![first.situation.clone()],
            },
        )
        .unwrap_err();
        assert!(matches!(err, PatternError::NonPatternSituation(_)));

        let err = build_interpretation(
            &mut s,
            &InterpretationSpec {
                interpreted_event: outage.clone(),
                interpretant_iri: "ex:officer-D".into(),
                specializes: None,
                relevant_situations: vec![],
            },
        )
        .unwrap_err();
        assert_eq!(err, PatternError::EmptySituations);
    }

    #[test]
    fn view_of_rejects_non_situations() {
        let (mut s, _, _, person, _) = base_store();
        let err = view_of(&s.snapshot(), &person).unwrap_err();
        assert!(matches!(err, PatternError::NotAPatternSituation(_)));
        let bare = s.new_entity("ex:bare", Kind::Situation).unwrap();
        let err = view_of(&s.snapshot(), &bare).unwrap_err();
        assert!(matches!(err, PatternError::NotAPatternSituation(_)));
    }
}
