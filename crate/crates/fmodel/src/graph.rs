//! Typed entity graph: kinds, domain/range-checked property assertions,
//! prefix-qualified IRIs, literal attachments, and immutable snapshots.
//!
//! The store is single-writer. Readers take a [`Snapshot`], which is an
//! immutable copy that can be shared freely across threads; every validation
//! and reasoning operation works on snapshots only.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::spacetime::{AllenRelation, GeoBox, TimeInterval, Trajectory};
use crate::vocab;

/// Subkinds of `Concept`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConceptKind {
    EventType,
    Role,
    Parameter,
}

/// Subkinds of `Region` (the abstract value spaces).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RegionKind {
    TimeInterval,
    SpaceRegion,
    SpatioTemporalRegion,
}

/// The kind of an entity, fixed at creation. Event and Object are disjoint by
/// construction: an entity has exactly one kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Event,
    Object,
    Description,
    Situation,
    Quality,
    Concept(ConceptKind),
    Region(RegionKind),
}

impl Kind {
    pub const ALL: [Kind; 11] = [
        Kind::Event,
        Kind::Object,
        Kind::Description,
        Kind::Situation,
        Kind::Quality,
        Kind::Concept(ConceptKind::EventType),
        Kind::Concept(ConceptKind::Role),
        Kind::Concept(ConceptKind::Parameter),
        Kind::Region(RegionKind::TimeInterval),
        Kind::Region(RegionKind::SpaceRegion),
        Kind::Region(RegionKind::SpatioTemporalRegion),
    ];

    /// Name used by the interchange format (`a f:<name>`).
    pub fn name(&self) -> &'static str {
        match self {
            Kind::Event => "Event",
            Kind::Object => "Object",
            Kind::Description => "Description",
            Kind::Situation => "Situation",
            Kind::Quality => "Quality",
            Kind::Concept(ConceptKind::EventType) => "EventType",
            Kind::Concept(ConceptKind::Role) => "Role",
            Kind::Concept(ConceptKind::Parameter) => "Parameter",
            Kind::Region(RegionKind::TimeInterval) => "TimeInterval",
            Kind::Region(RegionKind::SpaceRegion) => "SpaceRegion",
            Kind::Region(RegionKind::SpatioTemporalRegion) => "SpatioTemporalRegion",
        }
    }

    pub fn from_name(name: &str) -> Option<Kind> {
        Kind::ALL.iter().copied().find(|k| k.name() == name)
    }

    pub fn is_concept(&self) -> bool {
        matches!(self, Kind::Concept(_))
    }

    pub fn is_region(&self) -> bool {
        matches!(self, Kind::Region(_))
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The fixed set of object properties. Declaration order is the canonical
/// property-table order used by the interchange writer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Property {
    Classifies,
    Satisfies,
    Defines,
    IncludesEvent,
    IncludesObject,
    IncludesSituation,
    Parametrizes,
    IsParameterFor,
    HasQuality,
    HasRegion,
    HasJustification,
    Specializes,
}

impl Property {
    pub const ALL: [Property; 12] = [
        Property::Classifies,
        Property::Satisfies,
        Property::Defines,
        Property::IncludesEvent,
        Property::IncludesObject,
        Property::IncludesSituation,
        Property::Parametrizes,
        Property::IsParameterFor,
        Property::HasQuality,
        Property::HasRegion,
        Property::HasJustification,
        Property::Specializes,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Property::Classifies => "classifies",
            Property::Satisfies => "satisfies",
            Property::Defines => "defines",
            Property::IncludesEvent => "includesEvent",
            Property::IncludesObject => "includesObject",
            Property::IncludesSituation => "includesSituation",
            Property::Parametrizes => "parametrizes",
            Property::IsParameterFor => "isParameterFor",
            Property::HasQuality => "hasQuality",
            Property::HasRegion => "hasRegion",
            Property::HasJustification => "hasJustification",
            Property::Specializes => "specializes",
        }
    }

    pub fn from_name(name: &str) -> Option<Property> {
        Property::ALL.iter().copied().find(|p| p.name() == name)
    }

    /// Human-readable description of the allowed subject kinds.
    fn domain_text(&self) -> &'static str {
        match self {
            Property::Classifies => "EventType or Role concept",
            Property::Satisfies => "Situation",
            Property::Defines => "Description",
            Property::IncludesEvent | Property::IncludesObject | Property::IncludesSituation => {
                "Situation"
            }
            Property::Parametrizes | Property::IsParameterFor => "Parameter concept",
            Property::HasQuality => "Event or Object",
            Property::HasRegion => "Quality",
            Property::HasJustification => "Description",
            Property::Specializes => "Concept",
        }
    }

    /// Human-readable description of the allowed object kinds.
    fn range_text(&self) -> &'static str {
        match self {
            Property::Classifies => "Event (for EventType) or Object/Situation (for Role)",
            Property::Satisfies => "Description",
            Property::Defines => "Concept",
            Property::IncludesEvent => "Event",
            Property::IncludesObject => "Object",
            Property::IncludesSituation => "Situation",
            Property::Parametrizes => "Region",
            Property::IsParameterFor => "Concept",
            Property::HasQuality => "Quality",
            Property::HasRegion => "Region",
            Property::HasJustification => "Description",
            Property::Specializes => "Concept",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn domain_ok(property: Property, subject: Kind) -> bool {
    match property {
        Property::Classifies => matches!(
            subject,
            Kind::Concept(ConceptKind::EventType) | Kind::Concept(ConceptKind::Role)
        ),
        Property::Satisfies => subject == Kind::Situation,
        Property::Defines => subject == Kind::Description,
        Property::IncludesEvent | Property::IncludesObject | Property::IncludesSituation => {
            subject == Kind::Situation
        }
        Property::Parametrizes | Property::IsParameterFor => {
            subject == Kind::Concept(ConceptKind::Parameter)
        }
        Property::HasQuality => matches!(subject, Kind::Event | Kind::Object),
        Property::HasRegion => subject == Kind::Quality,
        Property::HasJustification => subject == Kind::Description,
        Property::Specializes => subject.is_concept(),
    }
}

fn range_ok(property: Property, subject: Kind, object: Kind) -> bool {
    match property {
        Property::Classifies => match subject {
            Kind::Concept(ConceptKind::EventType) => object == Kind::Event,
            Kind::Concept(ConceptKind::Role) => {
                matches!(object, Kind::Object | Kind::Situation)
            }
            _ => false,
        },
        Property::Satisfies => object == Kind::Description,
        Property::Defines => object.is_concept(),
        Property::IncludesEvent => object == Kind::Event,
        Property::IncludesObject => object == Kind::Object,
        Property::IncludesSituation => object == Kind::Situation,
        Property::Parametrizes => object.is_region(),
        Property::IsParameterFor => object.is_concept(),
        Property::HasQuality => object == Kind::Quality,
        Property::HasRegion => object.is_region(),
        Property::HasJustification => object == Kind::Description,
        Property::Specializes => object.is_concept(),
    }
}

/// Handle to an entity. Identity is the expanded IRI; two refs are equal iff
/// they denote the same IRI. Cheap to clone.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EntityRef {
    iri: Arc<str>,
}

impl EntityRef {
    pub(crate) fn new(iri: impl Into<Arc<str>>) -> Self {
        EntityRef { iri: iri.into() }
    }

    /// The expanded IRI.
    pub fn iri(&self) -> &str {
        &self.iri
    }
}

impl fmt::Display for EntityRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.iri)
    }
}

impl fmt::Debug for EntityRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EntityRef({})", self.iri)
    }
}

/// A subject-property-object assertion, also used as the assertion handle
/// returned by [`Store::assert_edge`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub subject: EntityRef,
    pub property: Property,
    pub object: EntityRef,
}

/// Concrete value attached to a Region entity.
#[derive(Debug, Clone, PartialEq)]
pub enum RegionValue {
    Time(TimeInterval),
    Space(GeoBox),
    SpatioTemporal(Trajectory),
}

impl RegionValue {
    /// The region kind a value of this variant may attach to.
    pub fn region_kind(&self) -> RegionKind {
        match self {
            RegionValue::Time(_) => RegionKind::TimeInterval,
            RegionValue::Space(_) => RegionKind::SpaceRegion,
            RegionValue::SpatioTemporal(_) => RegionKind::SpatioTemporalRegion,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate IRI `{0}`")]
    DuplicateIri(String),
    #[error("kind conflict for `{iri}`: already declared {existing}, requested {requested}")]
    KindConflict {
        iri: String,
        existing: &'static str,
        requested: &'static str,
    },
    #[error("prefix `{0}` is not declared")]
    UndeclaredPrefix(String),
    #[error("prefix `{0}` is already bound to a different namespace")]
    PrefixConflict(String),
    #[error("invalid qualified name `{0}`")]
    InvalidQName(String),
    #[error("invalid namespace `{0}`")]
    InvalidNamespace(String),
    #[error("unknown entity `{0}`")]
    UnknownEntity(String),
    #[error("domain violation: `{subject}` is {actual}, but {property} requires {expected}")]
    DomainViolation {
        property: Property,
        subject: String,
        actual: &'static str,
        expected: &'static str,
    },
    #[error("range violation: `{object}` is {actual}, but {property} expects {expected}")]
    RangeViolation {
        property: Property,
        object: String,
        actual: &'static str,
        expected: &'static str,
    },
    #[error("`{iri}` is a {kind} region and cannot hold a {value} value")]
    RegionValueMismatch {
        iri: String,
        kind: &'static str,
        value: &'static str,
    },
    #[error("`{0}` is not a region entity")]
    NotARegion(String),
}

/// The shared graph content. `Store` owns a mutable copy, `Snapshot` an
/// immutable one behind an `Arc`.
#[derive(Debug, Clone, PartialEq, Default)]
pub(crate) struct GraphData {
    prefixes: BTreeMap<String, String>,
    entities: BTreeMap<Arc<str>, Kind>,
    edges: BTreeSet<(Arc<str>, Property, Arc<str>)>,
    labels: BTreeMap<Arc<str>, String>,
    region_values: BTreeMap<Arc<str>, RegionValue>,
    relation_tags: BTreeMap<Arc<str>, AllenRelation>,
}

impl GraphData {
    fn expand(&self, qname: &str) -> Result<String, GraphError> {
        let (prefix, local) = split_qname(qname)?;
        let ns = self
            .prefixes
            .get(prefix)
            .ok_or_else(|| GraphError::UndeclaredPrefix(prefix.to_string()))?;
        Ok(format!("{ns}{local}"))
    }

    /// Render an IRI as `prefix:local` using the longest declared namespace
    /// match (ties broken by alphabetically smallest prefix), so the result
    /// depends only on content, never on construction history.
    fn compact(&self, iri: &str) -> String {
        let mut best: Option<(&str, &str)> = None;
        for (prefix, ns) in &self.prefixes {
            if let Some(local) = iri.strip_prefix(ns.as_str()) {
                if !local.is_empty() && is_local_name(local) {
                    let better = match best {
                        None => true,
                        Some((_, bns)) => ns.len() > bns.len(),
                    };
                    if better {
                        best = Some((prefix, ns));
                    }
                }
            }
        }
        match best {
            Some((prefix, ns)) => format!("{prefix}:{}", &iri[ns.len()..]),
            None => iri.to_string(),
        }
    }

    fn entity(&self, iri: &str) -> Option<EntityRef> {
        self.entities
            .get_key_value(iri)
            .map(|(k, _)| EntityRef::new(k.clone()))
    }

    fn kind_of(&self, entity: &EntityRef) -> Option<Kind> {
        self.entities.get(entity.iri()).copied()
    }

    fn query_edges(
        &self,
        subject: Option<&EntityRef>,
        property: Option<Property>,
        object: Option<&EntityRef>,
    ) -> Vec<Edge> {
        let mut out: Vec<Edge> = self
            .edges
            .iter()
            .filter(|(s, p, o)| {
                subject.is_none_or(|e| e.iri() == s.as_ref())
                    && property.is_none_or(|q| q == *p)
                    && object.is_none_or(|e| e.iri() == o.as_ref())
            })
            .map(|(s, p, o)| Edge {
                subject: EntityRef::new(s.clone()),
                property: *p,
                object: EntityRef::new(o.clone()),
            })
            .collect();
        // Lexicographic by subject IRI, property name, object IRI.
        out.sort_by(|a, b| {
            (a.subject.iri(), a.property.name(), a.object.iri()).cmp(&(
                b.subject.iri(),
                b.property.name(),
                b.object.iri(),
            ))
        });
        out
    }

    fn has_edge(&self, subject: &EntityRef, property: Property, object: &EntityRef) -> bool {
        self.edges.contains(&(
            Arc::from(subject.iri()),
            property,
            Arc::from(object.iri()),
        ))
    }
}

fn split_qname(qname: &str) -> Result<(&str, &str), GraphError> {
    let bad = || GraphError::InvalidQName(qname.to_string());
    let (prefix, local) = qname.split_once(':').ok_or_else(bad)?;
    if !is_prefix_name(prefix) || !is_local_name(local) {
        return Err(bad());
    }
    Ok((prefix, local))
}

pub(crate) fn is_prefix_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}

pub(crate) fn is_local_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}

fn namespace_ok(ns: &str) -> bool {
    !ns.is_empty() && ns.chars().all(|c| !c.is_whitespace() && c != '<' && c != '>')
}

/// The mutable, single-writer store.
#[derive(Debug, Default)]
pub struct Store {
    data: GraphData,
    counter: u64,
}

impl Store {
    /// Empty store with the reserved `f:` and `f-inst:` prefixes declared.
    pub fn new() -> Self {
        let mut store = Store::default();
        store
            .data
            .prefixes
            .insert(vocab::F_PREFIX.to_string(), vocab::F_NS.to_string());
        store
            .data
            .prefixes
            .insert(vocab::F_INST_PREFIX.to_string(), vocab::F_INST_NS.to_string());
        store
    }

    /// Declare a prefix. Redeclaring with the same namespace is a no-op;
    /// rebinding to a different namespace is rejected.
    pub fn declare_prefix(&mut self, prefix: &str, namespace: &str) -> Result<(), GraphError> {
        if !is_prefix_name(prefix) {
            return Err(GraphError::InvalidQName(format!("{prefix}:")));
        }
        if !namespace_ok(namespace) {
            return Err(GraphError::InvalidNamespace(namespace.to_string()));
        }
        match self.data.prefixes.get(prefix) {
            Some(existing) if existing == namespace => Ok(()),
            Some(_) => Err(GraphError::PrefixConflict(prefix.to_string())),
            None => {
                self.data
                    .prefixes
                    .insert(prefix.to_string(), namespace.to_string());
                Ok(())
            }
        }
    }

    /// Create a fresh entity under an already-declared prefix.
    pub fn new_entity(&mut self, qname: &str, kind: Kind) -> Result<EntityRef, GraphError> {
        let iri = self.data.expand(qname)?;
        if self.data.entities.contains_key(iri.as_str()) {
            return Err(GraphError::DuplicateIri(qname.to_string()));
        }
        let iri: Arc<str> = Arc::from(iri);
        self.data.entities.insert(iri.clone(), kind);
        Ok(EntityRef::new(iri))
    }

    /// Get-or-create: returns the existing entity when the kind matches,
    /// creates it otherwise. A different existing kind is a conflict.
    pub(crate) fn ensure_entity(&mut self, qname: &str, kind: Kind) -> Result<EntityRef, GraphError> {
        let iri = self.data.expand(qname)?;
        if let Some(existing) = self.data.entities.get(iri.as_str()).copied() {
            if existing == kind {
                return Ok(EntityRef::new(Arc::from(iri)));
            }
            return Err(GraphError::KindConflict {
                iri: qname.to_string(),
                existing: existing.name(),
                requested: kind.name(),
            });
        }
        let iri: Arc<str> = Arc::from(iri);
        self.data.entities.insert(iri.clone(), kind);
        Ok(EntityRef::new(iri))
    }

    /// Ensure one of the built-in anchor concepts exists.
    pub(crate) fn ensure_anchor(&mut self, anchor: vocab::Anchor) -> Result<EntityRef, GraphError> {
        self.ensure_entity(&anchor.qname(), anchor.kind())
    }

    /// Assert an edge. Idempotent; both endpoints must exist and the
    /// domain/range table must admit the combination.
    pub fn assert_edge(
        &mut self,
        subject: &EntityRef,
        property: Property,
        object: &EntityRef,
    ) -> Result<Edge, GraphError> {
        let skind = self
            .data
            .kind_of(subject)
            .ok_or_else(|| GraphError::UnknownEntity(subject.iri().to_string()))?;
        let okind = self
            .data
            .kind_of(object)
            .ok_or_else(|| GraphError::UnknownEntity(object.iri().to_string()))?;
        if !domain_ok(property, skind) {
            return Err(GraphError::DomainViolation {
                property,
                subject: self.data.compact(subject.iri()),
                actual: skind.name(),
                expected: property.domain_text(),
            });
        }
        if !range_ok(property, skind, okind) {
            return Err(GraphError::RangeViolation {
                property,
                object: self.data.compact(object.iri()),
                actual: okind.name(),
                expected: property.range_text(),
            });
        }
        self.data
            .edges
            .insert((Arc::from(subject.iri()), property, Arc::from(object.iri())));
        Ok(Edge {
            subject: subject.clone(),
            property,
            object: object.clone(),
        })
    }

    /// Remove an edge if present. Low-level surface for tests and tooling;
    /// pattern instances are otherwise build-and-read.
    pub fn retract_edge(&mut self, subject: &EntityRef, property: Property, object: &EntityRef) {
        self.data
            .edges
            .remove(&(Arc::from(subject.iri()), property, Arc::from(object.iri())));
    }

    /// Attach (or replace) a plain-text label.
    pub fn set_label(&mut self, entity: &EntityRef, label: &str) -> Result<(), GraphError> {
        let key = self.owned_iri(entity)?;
        self.data.labels.insert(key, label.to_string());
        Ok(())
    }

    /// Attach (or replace) a concrete value on a Region entity of the
    /// matching kind.
    pub fn set_region_value(
        &mut self,
        region: &EntityRef,
        value: RegionValue,
    ) -> Result<(), GraphError> {
        let kind = self
            .data
            .kind_of(region)
            .ok_or_else(|| GraphError::UnknownEntity(region.iri().to_string()))?;
        match kind {
            Kind::Region(rk) if rk == value.region_kind() => {
                let key = self.owned_iri(region)?;
                self.data.region_values.insert(key, value);
                Ok(())
            }
            Kind::Region(rk) => Err(GraphError::RegionValueMismatch {
                iri: self.data.compact(region.iri()),
                kind: Kind::Region(rk).name(),
                value: Kind::Region(value.region_kind()).name(),
            }),
            _ => Err(GraphError::NotARegion(self.data.compact(region.iri()))),
        }
    }

    /// Tag a Parameter concept with an Allen relation (temporal composition
    /// constraints carry their relation this way).
    pub fn set_relation_tag(
        &mut self,
        parameter: &EntityRef,
        relation: AllenRelation,
    ) -> Result<(), GraphError> {
        let kind = self
            .data
            .kind_of(parameter)
            .ok_or_else(|| GraphError::UnknownEntity(parameter.iri().to_string()))?;
        if kind != Kind::Concept(ConceptKind::Parameter) {
            return Err(GraphError::DomainViolation {
                property: Property::Parametrizes,
                subject: self.data.compact(parameter.iri()),
                actual: kind.name(),
                expected: "Parameter concept",
            });
        }
        let key = self.owned_iri(parameter)?;
        self.data.relation_tags.insert(key, relation);
        Ok(())
    }

    fn owned_iri(&self, entity: &EntityRef) -> Result<Arc<str>, GraphError> {
        self.data
            .entities
            .get_key_value(entity.iri())
            .map(|(k, _)| k.clone())
            .ok_or_else(|| GraphError::UnknownEntity(entity.iri().to_string()))
    }

    fn attach_quality(
        &mut self,
        entity: &EntityRef,
        stem_name: &str,
        region_kind: RegionKind,
        value: RegionValue,
    ) -> Result<EntityRef, GraphError> {
        let stem = self.fresh_stem(stem_name);
        let quality = self.new_entity(&stem, Kind::Quality)?;
        let region = self.new_entity(&format!("{stem}-region"), Kind::Region(region_kind))?;
        self.assert_edge(entity, Property::HasQuality, &quality)?;
        self.assert_edge(&quality, Property::HasRegion, &region)?;
        self.set_region_value(&region, value)?;
        Ok(quality)
    }

    /// Give an event or object a time quality (`hasQuality` → `hasRegion` →
    /// time-interval region). Returns the minted quality entity.
    pub fn attach_time(
        &mut self,
        entity: &EntityRef,
        interval: TimeInterval,
    ) -> Result<EntityRef, GraphError> {
        self.attach_quality(
            entity,
            "time-quality",
            RegionKind::TimeInterval,
            RegionValue::Time(interval),
        )
    }

    /// Give an object (or event) a spatial quality backed by a geo box.
    pub fn attach_location(
        &mut self,
        entity: &EntityRef,
        geo_box: GeoBox,
    ) -> Result<EntityRef, GraphError> {
        self.attach_quality(
            entity,
            "space-quality",
            RegionKind::SpaceRegion,
            RegionValue::Space(geo_box),
        )
    }

    /// Give an entity a spatio-temporal quality backed by a trajectory.
    pub fn attach_trajectory(
        &mut self,
        entity: &EntityRef,
        trajectory: Trajectory,
    ) -> Result<EntityRef, GraphError> {
        self.attach_quality(
            entity,
            "st-quality",
            RegionKind::SpatioTemporalRegion,
            RegionValue::SpatioTemporal(trajectory),
        )
    }

    /// Next value of the minting counter (shared by all builders).
    pub(crate) fn bump(&mut self) -> u64 {
        self.counter += 1;
        self.counter
    }

    /// Next counter value whose `f-inst:{pattern}-{n}` IRI is still free.
    /// Keeps minting collision-safe on stores populated by the interchange
    /// loader, where the counter starts over.
    pub(crate) fn fresh_stem(&mut self, pattern: &str) -> String {
        loop {
            let n = self.bump();
            let stem = format!("f-inst:{pattern}-{n}");
            let iri = format!("{}{}-{n}", vocab::F_INST_NS, pattern);
            if !self.data.entities.contains_key(iri.as_str()) {
                return stem;
            }
        }
    }

    /// Immutable copy of the current state, safe to share across threads.
    pub fn snapshot(&self) -> Snapshot {
        Snapshot {
            data: Arc::new(self.data.clone()),
        }
    }

    // Read API, mirrored on `Snapshot`.

    pub fn entity(&self, iri: &str) -> Option<EntityRef> {
        self.data.entity(iri)
    }

    /// Expand a `prefix:local` qualified name against the declared prefixes.
    pub fn expand(&self, qname: &str) -> Result<String, GraphError> {
        self.data.expand(qname)
    }

    /// Resolve a `prefix:local` qualified name to an existing entity.
    pub fn resolve(&self, qname: &str) -> Result<EntityRef, GraphError> {
        let iri = self.data.expand(qname)?;
        self.data
            .entity(&iri)
            .ok_or_else(|| GraphError::UnknownEntity(qname.to_string()))
    }

    pub fn label(&self, entity: &EntityRef) -> Option<&str> {
        self.data.labels.get(entity.iri()).map(String::as_str)
    }

    pub fn region_value(&self, region: &EntityRef) -> Option<&RegionValue> {
        self.data.region_values.get(region.iri())
    }

    pub fn relation_tag(&self, parameter: &EntityRef) -> Option<AllenRelation> {
        self.data.relation_tags.get(parameter.iri()).copied()
    }

    pub fn kind_of(&self, entity: &EntityRef) -> Option<Kind> {
        self.data.kind_of(entity)
    }

    pub fn query_edges(
        &self,
        subject: Option<&EntityRef>,
        property: Option<Property>,
        object: Option<&EntityRef>,
    ) -> Vec<Edge> {
        self.data.query_edges(subject, property, object)
    }

    pub fn compact(&self, entity: &EntityRef) -> String {
        self.data.compact(entity.iri())
    }

    pub fn entity_count(&self) -> usize {
        self.data.entities.len()
    }

    pub fn edge_count(&self) -> usize {
        self.data.edges.len()
    }
}

/// Immutable view of a store at a point in time. Cloning is cheap; all
/// reasoning and validation operate on snapshots.
#[derive(Debug, Clone)]
pub struct Snapshot {
    data: Arc<GraphData>,
}

impl PartialEq for Snapshot {
    fn eq(&self, other: &Self) -> bool {
        self.data == other.data
    }
}

impl Snapshot {
    pub fn entity(&self, iri: &str) -> Option<EntityRef> {
        self.data.entity(iri)
    }

    /// Expand a `prefix:local` qualified name against the declared prefixes.
    pub fn expand(&self, qname: &str) -> Result<String, GraphError> {
        self.data.expand(qname)
    }

    /// Resolve a `prefix:local` qualified name to an existing entity.
    pub fn resolve(&self, qname: &str) -> Result<EntityRef, GraphError> {
        let iri = self.data.expand(qname)?;
        self.data
            .entity(&iri)
            .ok_or_else(|| GraphError::UnknownEntity(qname.to_string()))
    }

    pub fn kind_of(&self, entity: &EntityRef) -> Option<Kind> {
        self.data.kind_of(entity)
    }

    pub fn query_edges(
        &self,
        subject: Option<&EntityRef>,
        property: Option<Property>,
        object: Option<&EntityRef>,
    ) -> Vec<Edge> {
        self.data.query_edges(subject, property, object)
    }

    pub fn has_edge(&self, subject: &EntityRef, property: Property, object: &EntityRef) -> bool {
        self.data.has_edge(subject, property, object)
    }

    /// Objects of `subject --property-->`, sorted by IRI.
    pub fn objects_of(&self, subject: &EntityRef, property: Property) -> Vec<EntityRef> {
        self.query_edges(Some(subject), Some(property), None)
            .into_iter()
            .map(|e| e.object)
            .collect()
    }

    /// Subjects of `--property--> object`, sorted by IRI.
    pub fn subjects_of(&self, property: Property, object: &EntityRef) -> Vec<EntityRef> {
        self.query_edges(None, Some(property), Some(object))
            .into_iter()
            .map(|e| e.subject)
            .collect()
    }

    pub fn label(&self, entity: &EntityRef) -> Option<&str> {
        self.data.labels.get(entity.iri()).map(String::as_str)
    }

    pub fn region_value(&self, region: &EntityRef) -> Option<&RegionValue> {
        self.data.region_values.get(region.iri())
    }

    pub fn relation_tag(&self, parameter: &EntityRef) -> Option<AllenRelation> {
        self.data.relation_tags.get(parameter.iri()).copied()
    }

    /// All entities sorted by IRI.
    pub fn entities(&self) -> impl Iterator<Item = (EntityRef, Kind)> + '_ {
        self.data
            .entities
            .iter()
            .map(|(iri, kind)| (EntityRef::new(iri.clone()), *kind))
    }

    /// All entities of one kind, sorted by IRI.
    pub fn entities_of_kind(&self, kind: Kind) -> Vec<EntityRef> {
        self.entities()
            .filter(|(_, k)| *k == kind)
            .map(|(e, _)| e)
            .collect()
    }

    /// Declared prefixes, sorted by prefix.
    pub fn prefixes(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.data
            .prefixes
            .iter()
            .map(|(p, ns)| (p.as_str(), ns.as_str()))
    }

    pub fn compact(&self, entity: &EntityRef) -> String {
        self.data.compact(entity.iri())
    }

    pub fn compact_iri(&self, iri: &str) -> String {
        self.data.compact(iri)
    }

    pub fn entity_count(&self) -> usize {
        self.data.entities.len()
    }

    pub fn edge_count(&self) -> usize {
        self.data.edges.len()
    }

    /// The first time interval reachable via `hasQuality`/`hasRegion`, if any.
    pub fn time_of(&self, entity: &EntityRef) -> Option<TimeInterval> {
        self.quality_regions(entity).into_iter().find_map(|r| {
            match self.region_value(&r) {
                Some(RegionValue::Time(iv)) => Some(iv.clone()),
                _ => None,
            }
        })
    }

    /// The first geo box reachable via `hasQuality`/`hasRegion`, if any.
    pub fn location_of(&self, entity: &EntityRef) -> Option<GeoBox> {
        self.quality_regions(entity).into_iter().find_map(|r| {
            match self.region_value(&r) {
                Some(RegionValue::Space(b)) => Some(*b),
                _ => None,
            }
        })
    }

    /// The first trajectory reachable via `hasQuality`/`hasRegion`, if any.
    pub fn trajectory_of(&self, entity: &EntityRef) -> Option<Trajectory> {
        self.quality_regions(entity).into_iter().find_map(|r| {
            match self.region_value(&r) {
                Some(RegionValue::SpatioTemporal(t)) => Some(t.clone()),
                _ => None,
            }
        })
    }

    fn quality_regions(&self, entity: &EntityRef) -> Vec<EntityRef> {
        self.objects_of(entity, Property::HasQuality)
            .into_iter()
            .flat_map(|q| self.objects_of(&q, Property::HasRegion))
            .collect()
    }
}
