//! Structural reasoning over pattern instances: part-whole closure, causal
//! chains, common-cause correlation inference, interpretation diffs, and
//! event queries.
//!
//! Causality is never treated as transitive at the assertion level; chains
//! only ever surface through traversal. All operations are pure over
//! snapshots and deterministic.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::graph::{EntityRef, Kind, Property, Snapshot};
use crate::patterns::{
    concepts_with_anchor, pattern_kind_of, pattern_situations, PatternKind,
};
use crate::spacetime::TimeInterval;
use crate::vocab::Anchor;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReasoningError {
    #[error("unknown entity `{0}`")]
    UnknownEntity(String),
    #[error("`{0}` is not an interpretation situation")]
    NotAnInterpretation(String),
    #[error("interpretations cover different events: `{0}` vs `{1}`")]
    DifferentInterpretedEvents(String, String),
}

/// Visibility scope for reasoning. Unbounded scopes see every situation;
/// a scope bound to an interpretation sees only that interpretation's
/// relevant situations. Situations shared between interpretations are
/// visible in both scopes.
#[derive(Debug, Clone, Default)]
pub struct Scope {
    interpretation: Option<EntityRef>,
}

impl Scope {
    /// See every situation in the snapshot.
    pub fn unbounded() -> Self {
        Scope::default()
    }

    /// See only the situations relevant in the given interpretation.
    pub fn within(interpretation: EntityRef) -> Self {
        Scope {
            interpretation: Some(interpretation),
        }
    }

    pub fn interpretation(&self) -> Option<&EntityRef> {
        self.interpretation.as_ref()
    }

    /// The situations visible under this scope, or `None` for "all".
    fn visible(&self, snapshot: &Snapshot) -> Option<BTreeSet<EntityRef>> {
        self.interpretation
            .as_ref()
            .map(|interp| relevant_situations(snapshot, interp))
    }
}

/// Relevant situations of an interpretation: the union of the situations its
/// relevant-situation role classifies and those it `includesSituation`.
fn relevant_situations(snapshot: &Snapshot, interpretation: &EntityRef) -> BTreeSet<EntityRef> {
    let mut out: BTreeSet<EntityRef> = snapshot
        .objects_of(interpretation, Property::IncludesSituation)
        .into_iter()
        .collect();
    if let Some((PatternKind::Interpretation, description)) =
        pattern_kind_of(snapshot, interpretation)
    {
        for role in concepts_with_anchor(snapshot, &description, Anchor::RelevantSituation) {
            out.extend(snapshot.objects_of(&role, Property::Classifies));
        }
    }
    out
}

fn require_entity(snapshot: &Snapshot, entity: &EntityRef) -> Result<(), ReasoningError> {
    if snapshot.kind_of(entity).is_none() {
        return Err(ReasoningError::UnknownEntity(entity.iri().to_string()));
    }
    Ok(())
}

/// Direction for the mereological closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartsDirection {
    /// From a composite down to its components, transitively.
    Parts,
    /// From a component up to the composites containing it, transitively.
    Wholes,
}

/// Composite-to-components adjacency from every composition situation in
/// scope.
fn composition_edges(
    snapshot: &Snapshot,
    scope: &Scope,
) -> BTreeMap<EntityRef, BTreeSet<EntityRef>> {
    let visible = scope.visible(snapshot);
    let mut edges: BTreeMap<EntityRef, BTreeSet<EntityRef>> = BTreeMap::new();
    for (situation, kind, description) in pattern_situations(snapshot) {
        if kind != PatternKind::Composition {
            continue;
        }
        if let Some(v) = &visible {
            if !v.contains(&situation) {
                continue;
            }
        }
        let composites: Vec<EntityRef> =
            concepts_with_anchor(snapshot, &description, Anchor::Composite)
                .iter()
                .flat_map(|c| snapshot.objects_of(c, Property::Classifies))
                .collect();
        let components: Vec<EntityRef> =
            concepts_with_anchor(snapshot, &description, Anchor::Component)
                .iter()
                .flat_map(|c| snapshot.objects_of(c, Property::Classifies))
                .collect();
        for composite in &composites {
            edges
                .entry(composite.clone())
                .or_default()
                .extend(components.iter().cloned());
        }
    }
    edges
}

/// Transitive closure over composition situations in scope. The seed event is
/// never part of its own closure, and cycles terminate through the visited
/// set.
pub fn parts_closure(
    snapshot: &Snapshot,
    event: &EntityRef,
    scope: &Scope,
    direction: PartsDirection,
) -> Result<BTreeSet<EntityRef>, ReasoningError> {
    require_entity(snapshot, event)?;
    let forward = composition_edges(snapshot, scope);
    let step = |node: &EntityRef| -> Vec<EntityRef> {
        match direction {
            PartsDirection::Parts => forward
                .get(node)
                .map(|s| s.iter().cloned().collect())
                .unwrap_or_default(),
            PartsDirection::Wholes => forward
                .iter()
                .filter(|(_, components)| components.contains(node))
                .map(|(composite, _)| composite.clone())
                .collect(),
        }
    };

    let mut reached = BTreeSet::new();
    let mut queue: VecDeque<EntityRef> = step(event).into();
    while let Some(node) = queue.pop_front() {
        if node != *event && reached.insert(node.clone()) {
            queue.extend(step(&node));
        }
    }
    Ok(reached)
}

/// One asserted cause-effect link with its provenance.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CausalEdge {
    pub cause: EntityRef,
    pub effect: EntityRef,
    /// The justification description, when the claim carries one.
    pub justification: Option<EntityRef>,
    /// The causality situation asserting the link.
    pub situation: EntityRef,
}

/// A causal subgraph, as returned by [`causal_chain`]. Edges correspond
/// one-to-one to the causality situations in scope that the traversal
/// visited.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CausalGraph {
    pub seed: EntityRef,
    pub nodes: BTreeSet<EntityRef>,
    pub edges: Vec<CausalEdge>,
    pub has_cycle: bool,
}

impl CausalGraph {
    /// Every node reached from the seed, the seed itself excluded.
    pub fn reached(&self) -> BTreeSet<EntityRef> {
        self.nodes.iter().filter(|n| **n != self.seed).cloned().collect()
    }
}

/// Traversal direction for causal chains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainDirection {
    Ancestors,
    Descendants,
}

/// Every causal edge asserted by a causality situation in scope.
fn causal_edges(snapshot: &Snapshot, scope: &Scope) -> Vec<CausalEdge> {
    let visible = scope.visible(snapshot);
    let mut out = Vec::new();
    for (situation, kind, description) in pattern_situations(snapshot) {
        if kind != PatternKind::Causality {
            continue;
        }
        if let Some(v) = &visible {
            if !v.contains(&situation) {
                continue;
            }
        }
        let causes: Vec<EntityRef> = concepts_with_anchor(snapshot, &description, Anchor::Cause)
            .iter()
            .flat_map(|c| snapshot.objects_of(c, Property::Classifies))
            .collect();
        let effects: Vec<EntityRef> = concepts_with_anchor(snapshot, &description, Anchor::Effect)
            .iter()
            .flat_map(|c| snapshot.objects_of(c, Property::Classifies))
            .collect();
        let justification = snapshot
            .objects_of(&description, Property::HasJustification)
            .first()
            .cloned();
        for cause in &causes {
            for effect in &effects {
                out.push(CausalEdge {
                    cause: cause.clone(),
                    effect: effect.clone(),
                    justification: justification.clone(),
                    situation: situation.clone(),
                });
            }
        }
    }
    out.sort();
    out
}

/// The causal subgraph reachable from `event` in the given direction.
/// Cycles are reported through [`CausalGraph::has_cycle`], never as errors.
pub fn causal_chain(
    snapshot: &Snapshot,
    event: &EntityRef,
    scope: &Scope,
    direction: ChainDirection,
) -> Result<CausalGraph, ReasoningError> {
    require_entity(snapshot, event)?;
    let all_edges = causal_edges(snapshot, scope);

    let neighbours = |node: &EntityRef| -> Vec<EntityRef> {
        all_edges
            .iter()
            .filter_map(|e| match direction {
                ChainDirection::Ancestors if e.effect == *node => Some(e.cause.clone()),
                ChainDirection::Descendants if e.cause == *node => Some(e.effect.clone()),
                _ => None,
            })
            .collect()
    };

    let mut nodes = BTreeSet::from([event.clone()]);
    let mut queue: VecDeque<EntityRef> = VecDeque::from([event.clone()]);
    while let Some(node) = queue.pop_front() {
        for next in neighbours(&node) {
            if nodes.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }

    let edges: Vec<CausalEdge> = all_edges
        .into_iter()
        .filter(|e| nodes.contains(&e.cause) && nodes.contains(&e.effect))
        .collect();
    let has_cycle = subgraph_has_cycle(&nodes, &edges);
    Ok(CausalGraph {
        seed: event.clone(),
        nodes,
        edges,
        has_cycle,
    })
}

/// Kahn's algorithm on the reached subgraph; leftovers mean a cycle.
fn subgraph_has_cycle(nodes: &BTreeSet<EntityRef>, edges: &[CausalEdge]) -> bool {
    let mut indegree: BTreeMap<&EntityRef, usize> = nodes.iter().map(|n| (n, 0)).collect();
    let unique: BTreeSet<(&EntityRef, &EntityRef)> =
        edges.iter().map(|e| (&e.cause, &e.effect)).collect();
    for (_, effect) in &unique {
        *indegree.get_mut(effect).expect("effect in nodes") += 1;
    }
    let mut queue: VecDeque<&EntityRef> = indegree
        .iter()
        .filter(|(_, d)| **d == 0)
        .map(|(n, _)| *n)
        .collect();
    let mut seen = 0usize;
    while let Some(node) = queue.pop_front() {
        seen += 1;
        for (cause, effect) in &unique {
            if *cause == node {
                let d = indegree.get_mut(effect).expect("effect in nodes");
                *d -= 1;
                if *d == 0 {
                    queue.push_back(effect);
                }
            }
        }
    }
    seen != nodes.len()
}

/// Proper causal ancestors of every event in scope (chain-based).
fn ancestor_sets(edges: &[CausalEdge]) -> BTreeMap<EntityRef, BTreeSet<EntityRef>> {
    let mut parents: BTreeMap<&EntityRef, BTreeSet<&EntityRef>> = BTreeMap::new();
    let mut events: BTreeSet<&EntityRef> = BTreeSet::new();
    for e in edges {
        events.insert(&e.cause);
        events.insert(&e.effect);
        parents.entry(&e.effect).or_default().insert(&e.cause);
    }
    let mut out = BTreeMap::new();
    for event in events {
        let mut reached: BTreeSet<EntityRef> = BTreeSet::new();
        let mut queue: VecDeque<&EntityRef> =
            parents.get(event).map(|ps| ps.iter().copied().collect()).unwrap_or_default();
        while let Some(node) = queue.pop_front() {
            if reached.insert(node.clone()) {
                if let Some(ps) = parents.get(node) {
                    queue.extend(ps.iter().copied());
                }
            }
        }
        out.insert(event.clone(), reached);
    }
    out
}

/// A correlation candidate: two events with at least one common causal
/// ancestor and no direct causality between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrelationFinding {
    /// The pair, ordered by IRI.
    pub events: (EntityRef, EntityRef),
    pub common_causes: BTreeSet<EntityRef>,
    /// Whether some correlation situation in scope already covers the pair.
    pub already_asserted: bool,
}

/// Derive correlation candidates from causality: every unordered pair of
/// distinct events sharing a causal ancestor, excluding pairs linked by a
/// direct causality assertion.
pub fn infer_correlations(snapshot: &Snapshot, scope: &Scope) -> Vec<CorrelationFinding> {
    let edges = causal_edges(snapshot, scope);
    let ancestors = ancestor_sets(&edges);
    let direct: BTreeSet<(EntityRef, EntityRef)> = edges
        .iter()
        .map(|e| (e.cause.clone(), e.effect.clone()))
        .collect();

    // Correlate sets already asserted, for the `already_asserted` flag.
    let visible = scope.visible(snapshot);
    let mut asserted: Vec<BTreeSet<EntityRef>> = Vec::new();
    for (situation, kind, description) in pattern_situations(snapshot) {
        if kind != PatternKind::Correlation {
            continue;
        }
        if let Some(v) = &visible {
            if !v.contains(&situation) {
                continue;
            }
        }
        let correlates: BTreeSet<EntityRef> =
            concepts_with_anchor(snapshot, &description, Anchor::Correlate)
                .iter()
                .flat_map(|c| snapshot.objects_of(c, Property::Classifies))
                .collect();
        asserted.push(correlates);
    }

    let events: Vec<&EntityRef> = ancestors.keys().collect();
    let mut out = Vec::new();
    for (i, a) in events.iter().enumerate() {
        for b in &events[i + 1..] {
            if direct.contains(&((*a).clone(), (*b).clone()))
                || direct.contains(&((*b).clone(), (*a).clone()))
            {
                continue;
            }
            let common: BTreeSet<EntityRef> =
                ancestors[*a].intersection(&ancestors[*b]).cloned().collect();
            if common.is_empty() {
                continue;
            }
            let already_asserted = asserted
                .iter()
                .any(|set| set.contains(*a) && set.contains(*b));
            out.push(CorrelationFinding {
                events: ((*a).clone(), (*b).clone()),
                common_causes: common,
                already_asserted,
            });
        }
    }
    out
}

/// How two interpretations of the same event differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterpretationDiff {
    pub shared: BTreeSet<EntityRef>,
    pub only_a: BTreeSet<EntityRef>,
    pub only_b: BTreeSet<EntityRef>,
    pub conflicts: Vec<CausalityConflict>,
}

/// Two error-free causality situations claiming different causes for the
/// same effect.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CausalityConflict {
    pub effect: EntityRef,
    pub cause_a: EntityRef,
    pub cause_b: EntityRef,
    pub situation_a: EntityRef,
    pub situation_b: EntityRef,
}

fn interpreted_event_of(
    snapshot: &Snapshot,
    interpretation: &EntityRef,
) -> Result<EntityRef, ReasoningError> {
    require_entity(snapshot, interpretation)?;
    let Some((PatternKind::Interpretation, description)) =
        pattern_kind_of(snapshot, interpretation)
    else {
        return Err(ReasoningError::NotAnInterpretation(
            snapshot.compact(interpretation),
        ));
    };
    let events: BTreeSet<EntityRef> =
        concepts_with_anchor(snapshot, &description, Anchor::Interpretant)
            .iter()
            .flat_map(|c| snapshot.objects_of(c, Property::Classifies))
            .collect();
    events
        .into_iter()
        .next()
        .ok_or_else(|| ReasoningError::NotAnInterpretation(snapshot.compact(interpretation)))
}

/// Error-free (cause, effect, situation) triples among the given situations.
fn clean_causal_claims(
    snapshot: &Snapshot,
    situations: &BTreeSet<EntityRef>,
) -> Vec<(EntityRef, EntityRef, EntityRef)> {
    let mut out = Vec::new();
    for situation in situations {
        let Some((PatternKind::Causality, _)) = pattern_kind_of(snapshot, situation) else {
            continue;
        };
        let Ok(report) = crate::validation::validate_situation(snapshot, situation) else {
            continue;
        };
        if report.has_errors() {
            continue;
        }
        if let Ok(view) = crate::patterns::view_of(snapshot, situation) {
            if let crate::patterns::PatternDetail::Causality(c) = view.detail {
                out.push((c.cause, c.effect, situation.clone()));
            }
        }
    }
    out
}

/// Compare two interpretations of the same event: partition their relevant
/// situations and surface conflicting causality claims.
pub fn diff_interpretations(
    snapshot: &Snapshot,
    a: &EntityRef,
    b: &EntityRef,
) -> Result<InterpretationDiff, ReasoningError> {
    let event_a = interpreted_event_of(snapshot, a)?;
    let event_b = interpreted_event_of(snapshot, b)?;
    if event_a != event_b {
        return Err(ReasoningError::DifferentInterpretedEvents(
            snapshot.compact(&event_a),
            snapshot.compact(&event_b),
        ));
    }

    // An interpretation never conflicts with itself: identity diffs share
    // everything.
    if a == b {
        return Ok(InterpretationDiff {
            shared: relevant_situations(snapshot, a),
            only_a: BTreeSet::new(),
            only_b: BTreeSet::new(),
            conflicts: Vec::new(),
        });
    }

    let rel_a = relevant_situations(snapshot, a);
    let rel_b = relevant_situations(snapshot, b);
    let shared: BTreeSet<EntityRef> = rel_a.intersection(&rel_b).cloned().collect();
    let only_a: BTreeSet<EntityRef> = rel_a.difference(&rel_b).cloned().collect();
    let only_b: BTreeSet<EntityRef> = rel_b.difference(&rel_a).cloned().collect();

    let mut conflicts = Vec::new();
    for (cause_a, effect_a, sit_a) in clean_causal_claims(snapshot, &rel_a) {
        for (cause_b, effect_b, sit_b) in clean_causal_claims(snapshot, &rel_b) {
            if effect_a == effect_b && cause_a != cause_b {
                conflicts.push(CausalityConflict {
                    effect: effect_a.clone(),
                    cause_a: cause_a.clone(),
                    cause_b,
                    situation_a: sit_a.clone(),
                    situation_b: sit_b,
                });
            }
        }
    }
    conflicts.sort();
    conflicts.dedup();
    Ok(InterpretationDiff {
        shared,
        only_a,
        only_b,
        conflicts,
    })
}

/// Event queries over the whole snapshot.
#[derive(Debug, Clone, PartialEq)]
pub enum EventQuery {
    /// Events described by a participation the given object takes part in.
    ByParticipant(EntityRef),
    /// Events classified by the given interpretant concept.
    ByInterpretant(EntityRef),
    /// Events documented with the given object or event as evidence.
    ByDocumenter(EntityRef),
    /// Events whose time quality overlaps the interval.
    ByTimeOverlap(TimeInterval),
}

/// Deterministic, duplicate-free listing of the events matching a query.
pub fn find_events(snapshot: &Snapshot, query: &EventQuery) -> Vec<EntityRef> {
    let mut out: BTreeSet<EntityRef> = BTreeSet::new();
    match query {
        EventQuery::ByParticipant(object) => {
            for (_, kind, description) in pattern_situations(snapshot) {
                if kind != PatternKind::Participation {
                    continue;
                }
                let participates = concepts_with_anchor(snapshot, &description, Anchor::Participant)
                    .iter()
                    .any(|role| {
                        snapshot
                            .objects_of(role, Property::Classifies)
                            .contains(object)
                    });
                if participates {
                    for c in concepts_with_anchor(snapshot, &description, Anchor::DescribedEvent) {
                        out.extend(snapshot.objects_of(&c, Property::Classifies));
                    }
                }
            }
        }
        EventQuery::ByInterpretant(concept) => {
            out.extend(
                snapshot
                    .objects_of(concept, Property::Classifies)
                    .into_iter()
                    .filter(|e| snapshot.kind_of(e) == Some(Kind::Event)),
            );
        }
        EventQuery::ByDocumenter(evidence) => {
            for (_, kind, description) in pattern_situations(snapshot) {
                if kind != PatternKind::Documentation {
                    continue;
                }
                let documenters: BTreeSet<EntityRef> =
                    concepts_with_anchor(snapshot, &description, Anchor::Documenter)
                        .iter()
                        .flat_map(|c| snapshot.objects_of(c, Property::Classifies))
                        .collect();
                if documenters.contains(evidence) {
                    for c in concepts_with_anchor(snapshot, &description, Anchor::DocumentedEvent)
                    {
                        out.extend(snapshot.objects_of(&c, Property::Classifies));
                    }
                }
            }
        }
        EventQuery::ByTimeOverlap(window) => {
            for event in snapshot.entities_of_kind(Kind::Event) {
                if let Some(iv) = snapshot.time_of(&event) {
                    if iv.overlaps(window) {
                        out.insert(event);
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}
