//! Closed-world well-formedness checks for pattern instances and whole
//! stores.
//!
//! A situation is judged only on the edges present in the snapshot; absence
//! of an assertion is treated as absence, never as an open-world unknown.
//! Structural cardinality violations are errors, semantic-advice findings
//! are warnings. Reports are deterministic: identical snapshots produce
//! byte-identical renderings.

use std::collections::BTreeSet;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::graph::{EntityRef, Kind, Property, RegionValue, Snapshot};
use crate::patterns::{
    concepts_with_anchor, pattern_kind_of, pattern_situations, view_of, PatternDetail,
    PatternKind,
};
use crate::spacetime::{box_contains, check_constraint, ConstraintResult};
use crate::vocab::{Anchor, F_NS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValidationError {
    #[error("unknown entity `{0}`")]
    UnknownEntity(String),
    #[error("`{0}` is not a situation")]
    NotASituation(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
}

impl Severity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Severity::Error => "ERROR",
            Severity::Warning => "WARNING",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Severity {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// The documented rule catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationCode {
    /// Participation without a described-event classification.
    Part001,
    /// Participation with zero participants.
    Part002,
    /// Participant role classifies something that is not an object.
    Part003,
    /// Location parameter region does not contain a participant's region.
    Part004,
    /// More than one time parameter on one participation.
    Part005,
    /// Composite classification count is not exactly one.
    Comp001,
    /// Composition with zero components.
    Comp002,
    /// The composite is also classified as a component.
    Comp003,
    /// A composition constraint is violated.
    Comp004,
    /// Cause classification count is not exactly one.
    Caus001,
    /// Effect classification count is not exactly one.
    Caus002,
    /// Causality description without a justification.
    Caus003,
    /// Correlation with fewer than two correlates.
    Corr001,
    /// Correlation description without a justification.
    Corr002,
    /// A direct causality exists between two correlates.
    Corr003,
    /// Documentation without a documented event.
    Doc001,
    /// Documentation without a documenter.
    Doc002,
    /// Interpretation without an interpretant classification.
    Int001,
    /// A relevant situation is not one of the five bundleable patterns.
    Int002,
    /// A concept individual is shared across situations.
    Xreuse001,
    /// A description no situation satisfies.
    Desc001,
    /// A concept that dangles: defined by nothing, specializing nothing.
    Conc001,
    /// A situation that satisfies no description.
    Sit001,
}

impl ViolationCode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ViolationCode::Part001 => "PART-001",
            ViolationCode::Part002 => "PART-002",
            ViolationCode::Part003 => "PART-003",
            ViolationCode::Part004 => "PART-004",
            ViolationCode::Part005 => "PART-005",
            ViolationCode::Comp001 => "COMP-001",
            ViolationCode::Comp002 => "COMP-002",
            ViolationCode::Comp003 => "COMP-003",
            ViolationCode::Comp004 => "COMP-004",
            ViolationCode::Caus001 => "CAUS-001",
            ViolationCode::Caus002 => "CAUS-002",
            ViolationCode::Caus003 => "CAUS-003",
            ViolationCode::Corr001 => "CORR-001",
            ViolationCode::Corr002 => "CORR-002",
            ViolationCode::Corr003 => "CORR-003",
            ViolationCode::Doc001 => "DOC-001",
            ViolationCode::Doc002 => "DOC-002",
            ViolationCode::Int001 => "INT-001",
            ViolationCode::Int002 => "INT-002",
            ViolationCode::Xreuse001 => "XREUSE-001",
            ViolationCode::Desc001 => "DESC-001",
            ViolationCode::Conc001 => "CONC-001",
            ViolationCode::Sit001 => "SIT-001",
        }
    }

    pub fn severity(&self) -> Severity {
        match self {
            ViolationCode::Part004
            | ViolationCode::Part005
            | ViolationCode::Corr003
            | ViolationCode::Xreuse001
            | ViolationCode::Desc001
            | ViolationCode::Conc001
            | ViolationCode::Sit001 => Severity::Warning,
            _ => Severity::Error,
        }
    }
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for ViolationCode {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// One machine-readable finding. The first entity is the finding's subject
/// (used for report ordering and the rendered line).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub code: ViolationCode,
    pub message: String,
    /// Offending entities; never empty, subject first.
    pub entities: Vec<EntityRef>,
}

impl Violation {
    fn new(code: ViolationCode, message: impl Into<String>, entities: Vec<EntityRef>) -> Self {
        debug_assert!(!entities.is_empty());
        Violation {
            code,
            message: message.into(),
            entities,
        }
    }

    pub fn severity(&self) -> Severity {
        self.code.severity()
    }

    /// `SEVERITY CODE subject-iri message`.
    pub fn render_line(&self, snapshot: &Snapshot) -> String {
        format!(
            "{} {} {} {}",
            self.severity(),
            self.code,
            snapshot.compact(&self.entities[0]),
            self.message
        )
    }
}

impl Serialize for Violation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Violation", 4)?;
        s.serialize_field("severity", &self.severity())?;
        s.serialize_field("code", &self.code)?;
        s.serialize_field("message", &self.message)?;
        let iris: Vec<&str> = self.entities.iter().map(|e| e.iri()).collect();
        s.serialize_field("entities", &iris)?;
        s.end()
    }
}

/// What a report covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReportTarget {
    Situation(EntityRef),
    Store,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    #[serde(skip)]
    pub target: ReportTarget,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn new(target: ReportTarget, mut violations: Vec<Violation>) -> Self {
        violations.sort_by(|a, b| {
            let ka = (a.code.as_str(), &a.entities, &a.message);
            let kb = (b.code.as_str(), &b.entities, &b.message);
            ka.cmp(&kb)
        });
        violations.dedup();
        ValidationReport { target, violations }
    }

    pub fn is_conformant(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has_errors(&self) -> bool {
        self.violations.iter().any(|v| v.severity() == Severity::Error)
    }

    pub fn errors(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(|v| v.severity() == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(|v| v.severity() == Severity::Warning)
    }

    /// Line-oriented rendering, one finding per line.
    pub fn render(&self, snapshot: &Snapshot) -> String {
        let mut out = String::new();
        for v in &self.violations {
            out.push_str(&v.render_line(snapshot));
            out.push('\n');
        }
        out
    }
}

/// Validate one situation against the rule catalog of its pattern kind.
///
/// A situation that satisfies no description (or whose description carries no
/// recognizable anchors) produces an empty report here; store-global checks
/// cover those. Whether a documenter object itself participates in any event
/// is deliberately not checked: objects are documented through the events
/// they participate in, which is guidance rather than a constraint.
pub fn validate_situation(
    snapshot: &Snapshot,
    situation: &EntityRef,
) -> Result<ValidationReport, ValidationError> {
    match snapshot.kind_of(situation) {
        None => {
            return Err(ValidationError::UnknownEntity(
                situation.iri().to_string(),
            ))
        }
        Some(Kind::Situation) => {}
        Some(_) => {
            return Err(ValidationError::NotASituation(
                snapshot.compact(situation),
            ))
        }
    }
    let mut violations = Vec::new();
    situation_rules(snapshot, situation, &mut violations);
    Ok(ValidationReport::new(
        ReportTarget::Situation(situation.clone()),
        violations,
    ))
}

/// Validate every situation plus the store-global checks.
pub fn validate_store(snapshot: &Snapshot) -> ValidationReport {
    let mut violations = Vec::new();
    for situation in snapshot.entities_of_kind(Kind::Situation) {
        situation_rules(snapshot, &situation, &mut violations);
        if snapshot.objects_of(&situation, Property::Satisfies).is_empty() {
            violations.push(Violation::new(
                ViolationCode::Sit001,
                "situation satisfies no description".to_string(),
                vec![situation.clone()],
            ));
        }
    }

    // Descriptions nothing satisfies; justification descriptions are exempt,
    // they back claims instead of situations.
    for description in snapshot.entities_of_kind(Kind::Description) {
        let satisfied = !snapshot.subjects_of(Property::Satisfies, &description).is_empty();
        let is_justification = !snapshot
            .subjects_of(Property::HasJustification, &description)
            .is_empty();
        if !satisfied && !is_justification {
            violations.push(Violation::new(
                ViolationCode::Desc001,
                "description has no satisfying situation".to_string(),
                vec![description.clone()],
            ));
        }
    }

    // Dangling concepts: defined by nothing, no specialization links either
    // way, and not part of the built-in vocabulary.
    for (concept, kind) in snapshot.entities() {
        if !kind.is_concept() || concept.iri().starts_with(F_NS) {
            continue;
        }
        let defined = !snapshot.subjects_of(Property::Defines, &concept).is_empty();
        let specializes = !snapshot.objects_of(&concept, Property::Specializes).is_empty();
        let specialized = !snapshot.subjects_of(Property::Specializes, &concept).is_empty();
        if !defined && !specializes && !specialized {
            violations.push(Violation::new(
                ViolationCode::Conc001,
                "concept is defined by no description and anchors nothing".to_string(),
                vec![concept.clone()],
            ));
        }
    }

    ValidationReport::new(ReportTarget::Store, violations)
}

fn situation_rules(snapshot: &Snapshot, situation: &EntityRef, out: &mut Vec<Violation>) {
    let Some((kind, description)) = pattern_kind_of(snapshot, situation) else {
        return;
    };
    match kind {
        PatternKind::Participation => participation_rules(snapshot, situation, &description, out),
        PatternKind::Composition => composition_rules(snapshot, situation, &description, out),
        PatternKind::Causality => causality_rules(snapshot, situation, &description, out),
        PatternKind::Correlation => correlation_rules(snapshot, situation, &description, out),
        PatternKind::Documentation => documentation_rules(snapshot, situation, &description, out),
        PatternKind::Interpretation => {
            interpretation_rules(snapshot, situation, &description, out)
        }
    }
    concept_reuse_rule(snapshot, situation, &description, out);
}

fn classified_union(snapshot: &Snapshot, concepts: &[EntityRef]) -> BTreeSet<EntityRef> {
    concepts
        .iter()
        .flat_map(|c| snapshot.objects_of(c, Property::Classifies))
        .collect()
}

fn participation_rules(
    snapshot: &Snapshot,
    situation: &EntityRef,
    description: &EntityRef,
    out: &mut Vec<Violation>,
) {
    let described = classified_union(
        snapshot,
        &concepts_with_anchor(snapshot, description, Anchor::DescribedEvent),
    );
    if described.is_empty() {
        out.push(Violation::new(
            ViolationCode::Part001,
            "no event is classified as the described event".to_string(),
            vec![situation.clone()],
        ));
    }

    let roles = concepts_with_anchor(snapshot, description, Anchor::Participant);
    let mut participant_count = 0usize;
    for role in &roles {
        for target in snapshot.objects_of(role, Property::Classifies) {
            match snapshot.kind_of(&target) {
                Some(Kind::Object) => participant_count += 1,
                _ => out.push(Violation::new(
                    ViolationCode::Part003,
                    format!(
                        "participant `{}` classified by `{}` is not an object",
                        snapshot.compact(&target),
                        snapshot.compact(role)
                    ),
                    vec![situation.clone(), target.clone(), role.clone()],
                )),
            }
        }
    }
    if participant_count == 0 {
        out.push(Violation::new(
            ViolationCode::Part002,
            "no object participates in the described event".to_string(),
            vec![situation.clone()],
        ));
    }

    // Location parameters must contain the located participants they
    // generalize over.
    for param in concepts_with_anchor(snapshot, description, Anchor::LocationParameter) {
        let boxes: Vec<_> = snapshot
            .objects_of(&param, Property::Parametrizes)
            .iter()
            .filter_map(|r| match snapshot.region_value(r) {
                Some(RegionValue::Space(b)) => Some(*b),
                _ => None,
            })
            .collect();
        let Some(outer) = boxes.first() else { continue };
        for role in snapshot.objects_of(&param, Property::IsParameterFor) {
            for object in snapshot.objects_of(&role, Property::Classifies) {
                if let Some(inner) = snapshot.location_of(&object) {
                    if !box_contains(outer, &inner) {
                        out.push(Violation::new(
                            ViolationCode::Part004,
                            format!(
                                "location parameter region does not contain the region of `{}`",
                                snapshot.compact(&object)
                            ),
                            vec![situation.clone(), param.clone(), object.clone()],
                        ));
                    }
                }
            }
        }
    }

    let time_params = concepts_with_anchor(snapshot, description, Anchor::TimeParameter);
    if time_params.len() > 1 {
        let mut entities = vec![situation.clone()];
        entities.extend(time_params);
        out.push(Violation::new(
            ViolationCode::Part005,
            "more than one time parameter on one participation".to_string(),
            entities,
        ));
    }
}

fn composition_rules(
    snapshot: &Snapshot,
    situation: &EntityRef,
    description: &EntityRef,
    out: &mut Vec<Violation>,
) {
    let composites = classified_union(
        snapshot,
        &concepts_with_anchor(snapshot, description, Anchor::Composite),
    );
    if composites.len() != 1 {
        out.push(Violation::new(
            ViolationCode::Comp001,
            format!("expected exactly one composite, found {}", composites.len()),
            vec![situation.clone()],
        ));
    }
    let components = classified_union(
        snapshot,
        &concepts_with_anchor(snapshot, description, Anchor::Component),
    );
    if components.is_empty() {
        out.push(Violation::new(
            ViolationCode::Comp002,
            "composition has no components".to_string(),
            vec![situation.clone()],
        ));
    }
    for composite in &composites {
        if components.contains(composite) {
            out.push(Violation::new(
                ViolationCode::Comp003,
                format!(
                    "composite `{}` is classified as its own component",
                    snapshot.compact(composite)
                ),
                vec![situation.clone(), composite.clone()],
            ));
        }
    }

    // Constraint evaluation needs a well-formed view; the structural rules
    // above already cover the malformed cases.
    if let Ok(view) = view_of(snapshot, situation) {
        if let PatternDetail::Composition(c) = &view.detail {
            for constraint in &c.constraints {
                for component in &c.components {
                    if let Ok(ConstraintResult::Violated(detail)) =
                        check_constraint(snapshot, &view, component, constraint)
                    {
                        out.push(Violation::new(
                            ViolationCode::Comp004,
                            format!(
                                "component `{}` violates constraint [{}]: {detail}",
                                snapshot.compact(component),
                                constraint.describe(snapshot)
                            ),
                            vec![situation.clone(), component.clone()],
                        ));
                    }
                }
            }
        }
    }
}

fn causality_rules(
    snapshot: &Snapshot,
    situation: &EntityRef,
    description: &EntityRef,
    out: &mut Vec<Violation>,
) {
    let causes = classified_union(
        snapshot,
        &concepts_with_anchor(snapshot, description, Anchor::Cause),
    );
    if causes.len() != 1 {
        out.push(Violation::new(
            ViolationCode::Caus001,
            format!("expected exactly one cause, found {}", causes.len()),
            vec![situation.clone()],
        ));
    }
    let effects = classified_union(
        snapshot,
        &concepts_with_anchor(snapshot, description, Anchor::Effect),
    );
    if effects.len() != 1 {
        out.push(Violation::new(
            ViolationCode::Caus002,
            format!("expected exactly one effect, found {}", effects.len()),
            vec![situation.clone()],
        ));
    }
    if snapshot
        .objects_of(description, Property::HasJustification)
        .is_empty()
    {
        out.push(Violation::new(
            ViolationCode::Caus003,
            "causality claim has no justification".to_string(),
            vec![situation.clone()],
        ));
    }
}

/// All (cause, effect) pairs asserted by causality situations in the store.
fn direct_causality_pairs(snapshot: &Snapshot) -> BTreeSet<(EntityRef, EntityRef)> {
    let mut pairs = BTreeSet::new();
    for (_, kind, description) in pattern_situations(snapshot) {
        if kind != PatternKind::Causality {
            continue;
        }
        let causes = classified_union(
            snapshot,
            &concepts_with_anchor(snapshot, &description, Anchor::Cause),
        );
        let effects = classified_union(
            snapshot,
            &concepts_with_anchor(snapshot, &description, Anchor::Effect),
        );
        for c in &causes {
            for e in &effects {
                pairs.insert((c.clone(), e.clone()));
            }
        }
    }
    pairs
}

fn correlation_rules(
    snapshot: &Snapshot,
    situation: &EntityRef,
    description: &EntityRef,
    out: &mut Vec<Violation>,
) {
    let correlates = classified_union(
        snapshot,
        &concepts_with_anchor(snapshot, description, Anchor::Correlate),
    );
    if correlates.len() < 2 {
        out.push(Violation::new(
            ViolationCode::Corr001,
            format!("expected at least two correlates, found {}", correlates.len()),
            vec![situation.clone()],
        ));
    }
    if snapshot
        .objects_of(description, Property::HasJustification)
        .is_empty()
    {
        out.push(Violation::new(
            ViolationCode::Corr002,
            "correlation claim has no justification".to_string(),
            vec![situation.clone()],
        ));
    }

    // Correlates share a common cause but must not cause one another
    // directly. Store-contextual: only direct causality counts, chains are a
    // matter for reasoning.
    let direct = direct_causality_pairs(snapshot);
    let list: Vec<_> = correlates.into_iter().collect();
    for (i, a) in list.iter().enumerate() {
        for b in &list[i + 1..] {
            if direct.contains(&(a.clone(), b.clone())) || direct.contains(&(b.clone(), a.clone()))
            {
                out.push(Violation::new(
                    ViolationCode::Corr003,
                    format!(
                        "correlates `{}` and `{}` are linked by a direct causality",
                        snapshot.compact(a),
                        snapshot.compact(b)
                    ),
                    vec![situation.clone(), a.clone(), b.clone()],
                ));
            }
        }
    }
}

fn documentation_rules(
    snapshot: &Snapshot,
    situation: &EntityRef,
    description: &EntityRef,
    out: &mut Vec<Violation>,
) {
    let documented = classified_union(
        snapshot,
        &concepts_with_anchor(snapshot, description, Anchor::DocumentedEvent),
    );
    if documented.is_empty() {
        out.push(Violation::new(
            ViolationCode::Doc001,
            "no event is classified as the documented event".to_string(),
            vec![situation.clone()],
        ));
    }
    let documenters = classified_union(
        snapshot,
        &concepts_with_anchor(snapshot, description, Anchor::Documenter),
    );
    if documenters.is_empty() {
        out.push(Violation::new(
            ViolationCode::Doc002,
            "no documentary evidence is classified as a documenter".to_string(),
            vec![situation.clone()],
        ));
    }
}

fn interpretation_rules(
    snapshot: &Snapshot,
    situation: &EntityRef,
    description: &EntityRef,
    out: &mut Vec<Violation>,
) {
    let interpreted = classified_union(
        snapshot,
        &concepts_with_anchor(snapshot, description, Anchor::Interpretant),
    );
    if interpreted.is_empty() {
        out.push(Violation::new(
            ViolationCode::Int001,
            "no event is classified by an interpretant".to_string(),
            vec![situation.clone()],
        ));
    }
    let relevant = classified_union(
        snapshot,
        &concepts_with_anchor(snapshot, description, Anchor::RelevantSituation),
    );
    for sit in relevant {
        let ok = matches!(
            pattern_kind_of(snapshot, &sit),
            Some((kind, _)) if kind != PatternKind::Interpretation
        );
        if !ok {
            out.push(Violation::new(
                ViolationCode::Int002,
                format!(
                    "relevant situation `{}` is not one of the five bundleable patterns",
                    snapshot.compact(&sit)
                ),
                vec![situation.clone(), sit.clone()],
            ));
        }
    }
}

/// Situations this concept is associated with (defined by a description the
/// situation satisfies).
fn situations_of_concept(snapshot: &Snapshot, concept: &EntityRef) -> BTreeSet<EntityRef> {
    snapshot
        .subjects_of(Property::Defines, concept)
        .iter()
        .flat_map(|d| snapshot.subjects_of(Property::Satisfies, d))
        .collect()
}

fn concept_reuse_rule(
    snapshot: &Snapshot,
    situation: &EntityRef,
    description: &EntityRef,
    out: &mut Vec<Violation>,
) {
    for concept in snapshot.objects_of(description, Property::Defines) {
        let situations = situations_of_concept(snapshot, &concept);
        if situations.len() >= 2 && situations.contains(situation) {
            let others: Vec<String> = situations
                .iter()
                .filter(|s| *s != situation)
                .map(|s| snapshot.compact(s))
                .collect();
            out.push(Violation::new(
                ViolationCode::Xreuse001,
                format!(
                    "concept `{}` is shared with {}",
                    snapshot.compact(&concept),
                    others.join(", ")
                ),
                vec![situation.clone(), concept.clone()],
            ));
        }
    }
}
