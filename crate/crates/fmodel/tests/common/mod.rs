//! Shared fixtures for the integration suites: entity pools, a random-spec
//! generator, spec/view comparison, and the mutation table behind the
//! validation-coverage checks.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::prelude::*;
use rand::rngs::StdRng;

use fmodel::graph::{EntityRef, Kind, Property, Snapshot, Store};
use fmodel::patterns::{
    build_causality, build_composition, build_correlation, build_documentation,
    build_interpretation, build_participation, concepts_with_anchor, view_of, CausalitySpec,
    CompositionSpec, CorrelationSpec, DocumentationSpec, InterpretationSpec, Justification,
    ParticipantSpec, ParticipationSpec, PatternDetail, PatternError, PatternView,
};
use fmodel::spacetime::{AllenRelation, ConstraintSpec, GeoBox, TemporalTarget, TimeInterval, Trajectory};
use fmodel::validation::{validate_situation, ViolationCode};
use fmodel::vocab::Anchor;
use fmodel::RegionValue;

pub const EX: &str = "http://example.org/emergency#";
pub const DOM: &str = "http://example.org/domain#";

/// A store pre-stocked with plain events and objects to build patterns over.
pub struct Pool {
    pub events: Vec<EntityRef>,
    pub objects: Vec<EntityRef>,
    pub justification: EntityRef,
}

pub fn seed_pool(store: &mut Store, n_events: usize, n_objects: usize) -> Pool {
    store.declare_prefix("ex", EX).unwrap();
    store.declare_prefix("dom", DOM).unwrap();
    let events = (0..n_events)
        .map(|i| store.new_entity(&format!("ex:event-{i}"), Kind::Event).unwrap())
        .collect();
    let objects = (0..n_objects)
        .map(|i| store.new_entity(&format!("ex:object-{i}"), Kind::Object).unwrap())
        .collect();
    let justification = store
        .new_entity("ex:shared-theory", Kind::Description)
        .unwrap();
    Pool {
        events,
        objects,
        justification,
    }
}

pub fn interval(start_s: i64, end_s: i64) -> TimeInterval {
    TimeInterval::new(
        chrono::DateTime::from_timestamp(start_s, 0).unwrap(),
        chrono::DateTime::from_timestamp(end_s, 0).unwrap(),
    )
    .unwrap()
}

pub fn random_interval(rng: &mut StdRng) -> TimeInterval {
    let start = rng.gen_range(0..100_000);
    let len = rng.gen_range(1..50_000);
    interval(start, start + len)
}

pub fn random_box(rng: &mut StdRng) -> GeoBox {
    let min_lat = rng.gen_range(-89.0..88.0);
    let min_lon = rng.gen_range(-179.0..178.0);
    let dlat = rng.gen_range(0.1..2.0);
    let dlon = rng.gen_range(0.1..2.0);
    GeoBox::new(min_lat, min_lat + dlat, min_lon, min_lon + dlon).unwrap()
}

fn random_trajectory(rng: &mut StdRng) -> Trajectory {
    let mut legs = Vec::new();
    let mut clock = rng.gen_range(0..10_000);
    for _ in 0..rng.gen_range(1..=3) {
        let len = rng.gen_range(1..5_000);
        legs.push((interval(clock, clock + len), random_box(rng)));
        clock += len + rng.gen_range(0..1_000);
    }
    Trajectory::new(legs).unwrap()
}

fn sample_distinct<T: Clone>(rng: &mut StdRng, pool: &[T], n: usize) -> Vec<T> {
    let mut indices: Vec<usize> = (0..pool.len()).collect();
    indices.shuffle(rng);
    indices.truncate(n);
    indices.into_iter().map(|i| pool[i].clone()).collect()
}

#[derive(Debug, Clone)]
pub enum AnySpec {
    Participation(ParticipationSpec),
    Composition(CompositionSpec),
    Causality(CausalitySpec),
    Correlation(CorrelationSpec),
    Documentation(DocumentationSpec),
    Interpretation(InterpretationSpec),
}

/// A random structurally valid spec. `tag` keeps minted role and interpretant
/// IRIs unique across one run. Interpretations only appear once some
/// situations exist.
pub fn random_spec(
    rng: &mut StdRng,
    pool: &Pool,
    situations: &[EntityRef],
    tag: usize,
) -> AnySpec {
    let max = if situations.is_empty() { 5 } else { 6 };
    match rng.gen_range(0..max) {
        0 => {
            let n = rng.gen_range(1..=3.min(pool.objects.len()));
            let objects = sample_distinct(rng, &pool.objects, n);
            let participants: Vec<ParticipantSpec> = objects
                .into_iter()
                .enumerate()
                .map(|(j, object)| ParticipantSpec {
                    object,
                    role_iri: format!("ex:role-{tag}-{j}"),
                    specializes: if rng.gen_bool(0.5) {
                        Some(format!("dom:Role{}", rng.gen_range(0..4)))
                    } else {
                        None
                    },
                })
                .collect();
            let mut location_params = Vec::new();
            for p in &participants {
                if rng.gen_bool(0.3) {
                    location_params.push((p.role_iri.clone(), random_box(rng)));
                }
            }
            AnySpec::Participation(ParticipationSpec {
                described_event: pool.events.choose(rng).unwrap().clone(),
                participants,
                time_param: rng.gen_bool(0.4).then(|| random_interval(rng)),
                location_params,
            })
        }
        1 => {
            let n = rng.gen_range(2..=4.min(pool.events.len()));
            let mut picked = sample_distinct(rng, &pool.events, n);
            let composite = picked.pop().unwrap();
            let components = picked;
            let mut constraints = Vec::new();
            for _ in 0..rng.gen_range(0..=2) {
                let relation = *AllenRelation::ALL.choose(rng).unwrap();
                constraints.push(match rng.gen_range(0..4) {
                    0 => ConstraintSpec::Temporal {
                        relation,
                        target: TemporalTarget::AbsoluteInterval(random_interval(rng)),
                    },
                    1 => ConstraintSpec::Temporal {
                        relation,
                        target: TemporalTarget::Composite,
                    },
                    2 => ConstraintSpec::Temporal {
                        relation,
                        target: TemporalTarget::ComponentRef(
                            components.choose(rng).unwrap().clone(),
                        ),
                    },
                    _ => ConstraintSpec::SpatialWithin(random_box(rng)),
                });
            }
            if rng.gen_bool(0.2) {
                constraints.push(ConstraintSpec::SpatioTemporalWithin(random_trajectory(rng)));
            }
            AnySpec::Composition(CompositionSpec {
                composite,
                components,
                constraints,
            })
        }
        2 => {
            let picked = sample_distinct(rng, &pool.events, 2);
            AnySpec::Causality(CausalitySpec {
                cause: picked[0].clone(),
                effect: picked[1].clone(),
                justification: if rng.gen_bool(0.5) {
                    Justification::Existing(pool.justification.clone())
                } else {
                    Justification::Text(format!("theory {tag}"))
                },
            })
        }
        3 => {
            let n = rng.gen_range(2..=4.min(pool.events.len()));
            AnySpec::Correlation(CorrelationSpec {
                correlates: sample_distinct(rng, &pool.events, n).into_iter().collect(),
                justification: Justification::Text(format!("observed {tag}")),
            })
        }
        4 => {
            let documented = pool.events.choose(rng).unwrap().clone();
            let mut documenters: Vec<EntityRef> = Vec::new();
            for _ in 0..rng.gen_range(1..=3) {
                if rng.gen_bool(0.6) {
                    documenters.push(pool.objects.choose(rng).unwrap().clone());
                } else {
                    let candidate = pool.events.choose(rng).unwrap().clone();
                    if candidate != documented {
                        documenters.push(candidate);
                    }
                }
            }
            if documenters.is_empty() {
                documenters.push(pool.objects.choose(rng).unwrap().clone());
            }
            documenters.sort();
            documenters.dedup();
            AnySpec::Documentation(DocumentationSpec {
                documented_event: documented,
                documenters,
            })
        }
        _ => {
            let n = rng.gen_range(1..=3.min(situations.len()));
            AnySpec::Interpretation(InterpretationSpec {
                interpreted_event: pool.events.choose(rng).unwrap().clone(),
                interpretant_iri: format!("ex:interpretant-{tag}"),
                specializes: rng
                    .gen_bool(0.3)
                    .then(|| format!("dom:View{}", rng.gen_range(0..3))),
                relevant_situations: sample_distinct(rng, situations, n),
            })
        }
    }
}

pub fn build_any(store: &mut Store, spec: &AnySpec) -> Result<PatternView, PatternError> {
    match spec {
        AnySpec::Participation(s) => build_participation(store, s),
        AnySpec::Composition(s) => build_composition(store, s),
        AnySpec::Causality(s) => build_causality(store, s),
        AnySpec::Correlation(s) => build_correlation(store, s),
        AnySpec::Documentation(s) => build_documentation(store, s),
        AnySpec::Interpretation(s) => build_interpretation(store, s),
    }
}

/// Check that a reconstructed view carries exactly the spec's content,
/// normalizing the orderings the store does not preserve.
pub fn assert_view_matches_spec(snapshot: &Snapshot, spec: &AnySpec, view: &PatternView) {
    let reconstructed = view_of(snapshot, &view.situation).expect("view reconstructs");
    assert_eq!(&reconstructed, view, "builder view equals reconstruction");

    match (spec, &view.detail) {
        (AnySpec::Participation(spec), PatternDetail::Participation(v)) => {
            assert_eq!(v.described_event, spec.described_event);
            let mut expected: Vec<(String, EntityRef, Option<String>)> = spec
                .participants
                .iter()
                .map(|p| {
                    (
                        snapshot.expand(&p.role_iri).unwrap(),
                        p.object.clone(),
                        p.specializes
                            .as_ref()
                            .map(|s| snapshot.expand(s).unwrap()),
                    )
                })
                .collect();
            expected.sort();
            let mut actual: Vec<(String, EntityRef, Option<String>)> = v
                .participants
                .iter()
                .map(|p| {
                    (
                        p.role.iri().to_string(),
                        p.object.clone(),
                        p.specializes.as_ref().map(|s| s.iri().to_string()),
                    )
                })
                .collect();
            actual.sort();
            assert_eq!(actual, expected);
            assert_eq!(v.time_param, spec.time_param);
            let mut expected_locs: Vec<(String, String)> = spec
                .location_params
                .iter()
                .map(|(role, b)| (snapshot.expand(role).unwrap(), b.lexical()))
                .collect();
            expected_locs.sort();
            let mut actual_locs: Vec<(String, String)> = v
                .location_params
                .iter()
                .map(|(role, b)| (role.iri().to_string(), b.lexical()))
                .collect();
            actual_locs.sort();
            assert_eq!(actual_locs, expected_locs);
        }
        (AnySpec::Composition(spec), PatternDetail::Composition(v)) => {
            assert_eq!(v.composite, spec.composite);
            let expected: BTreeSet<_> = spec.components.iter().cloned().collect();
            let actual: BTreeSet<_> = v.components.iter().cloned().collect();
            assert_eq!(actual, expected);
            let mut expected_constraints: Vec<String> =
                spec.constraints.iter().map(|c| format!("{c:?}")).collect();
            expected_constraints.sort();
            let mut actual_constraints: Vec<String> =
                v.constraints.iter().map(|c| format!("{c:?}")).collect();
            actual_constraints.sort();
            assert_eq!(actual_constraints, expected_constraints);
        }
        (AnySpec::Causality(spec), PatternDetail::Causality(v)) => {
            assert_eq!(v.cause, spec.cause);
            assert_eq!(v.effect, spec.effect);
            match &spec.justification {
                Justification::Existing(d) => assert_eq!(&v.justification, d),
                Justification::Text(t) => {
                    assert_eq!(v.justification_label.as_deref(), Some(t.as_str()))
                }
            }
        }
        (AnySpec::Correlation(spec), PatternDetail::Correlation(v)) => {
            assert_eq!(v.correlates, spec.correlates);
        }
        (AnySpec::Documentation(spec), PatternDetail::Documentation(v)) => {
            let expected: BTreeSet<_> = spec.documenters.iter().cloned().collect();
            let actual: BTreeSet<_> = v.documenters.iter().cloned().collect();
            assert_eq!(actual, expected);
            assert_eq!(v.documented_event, spec.documented_event);
        }
        (AnySpec::Interpretation(spec), PatternDetail::Interpretation(v)) => {
            assert_eq!(v.interpreted_event, spec.interpreted_event);
            assert_eq!(
                v.interpretant.iri(),
                snapshot.expand(&spec.interpretant_iri).unwrap()
            );
            let expected: BTreeSet<_> = spec.relevant_situations.iter().cloned().collect();
            let actual: BTreeSet<_> = v.relevant_situations.iter().cloned().collect();
            assert_eq!(actual, expected);
        }
        (spec, detail) => panic!("kind mismatch: {spec:?} vs {detail:?}"),
    }
}

/// The single concept of a description carrying the given anchor.
pub fn concept_of(snapshot: &Snapshot, description: &EntityRef, anchor: Anchor) -> EntityRef {
    let found = concepts_with_anchor(snapshot, description, anchor);
    assert_eq!(found.len(), 1, "expected one {anchor:?} concept");
    found.into_iter().next().unwrap()
}

/// The time-interval region entity behind an event's time quality.
pub fn time_region_of(snapshot: &Snapshot, event: &EntityRef) -> EntityRef {
    for quality in snapshot.objects_of(event, Property::HasQuality) {
        for region in snapshot.objects_of(&quality, Property::HasRegion) {
            if matches!(snapshot.region_value(&region), Some(RegionValue::Time(_))) {
                return region;
            }
        }
    }
    panic!("no time region on {event}");
}

/// One row of the mutation-coverage table: a conformant instance, a single
/// documented mutation, and the one error code it must trigger.
pub struct MutationOutcome {
    pub expected: ViolationCode,
    pub mutation: &'static str,
    pub actual: Vec<ViolationCode>,
}

/// Build each conformant instance, apply its documented single mutation, and
/// validate the target situation.
pub fn run_mutation_table() -> Vec<MutationOutcome> {
    let mut outcomes = Vec::new();
    let mut check = |expected: ViolationCode,
                     mutation: &'static str,
                     run: &dyn Fn(&mut Store, &Pool) -> EntityRef| {
        let mut store = Store::new();
        let pool = seed_pool(&mut store, 6, 4);
        let situation = run(&mut store, &pool);
        let report = validate_situation(&store.snapshot(), &situation).unwrap();
        outcomes.push(MutationOutcome {
            expected,
            mutation,
            actual: report.violations.iter().map(|v| v.code).collect(),
        });
    };

    let participation = |store: &mut Store, pool: &Pool| {
        build_participation(
            store,
            &ParticipationSpec {
                described_event: pool.events[0].clone(),
                participants: vec![ParticipantSpec {
                    object: pool.objects[0].clone(),
                    role_iri: "ex:role-m".into(),
                    specializes: None,
                }],
                time_param: None,
                location_params: vec![],
            },
        )
        .unwrap()
    };
    let causality = |store: &mut Store, pool: &Pool| {
        build_causality(
            store,
            &CausalitySpec {
                cause: pool.events[0].clone(),
                effect: pool.events[1].clone(),
                justification: "theory".into(),
            },
        )
        .unwrap()
    };
    let composition = |store: &mut Store, pool: &Pool| {
        build_composition(
            store,
            &CompositionSpec {
                composite: pool.events[0].clone(),
                components: vec![pool.events[1].clone()],
                constraints: vec![],
            },
        )
        .unwrap()
    };

    check(
        ViolationCode::Part001,
        "delete the described-event classification edge",
        &|store, pool| {
            let view = participation(store, pool);
            let snap = store.snapshot();
            let concept = concept_of(&snap, &view.description, Anchor::DescribedEvent);
            store.retract_edge(&concept, Property::Classifies, &pool.events[0]);
            view.situation
        },
    );
    check(
        ViolationCode::Part002,
        "delete the participant classification edge",
        &|store, pool| {
            let view = participation(store, pool);
            let snap = store.snapshot();
            let role = concept_of(&snap, &view.description, Anchor::Participant);
            store.retract_edge(&role, Property::Classifies, &pool.objects[0]);
            view.situation
        },
    );
    check(
        ViolationCode::Part003,
        "add a classification of a situation by the participant role",
        &|store, pool| {
            let view = participation(store, pool);
            let snap = store.snapshot();
            let role = concept_of(&snap, &view.description, Anchor::Participant);
            let bare = store.new_entity("ex:bare-sit", Kind::Situation).unwrap();
            store.assert_edge(&role, Property::Classifies, &bare).unwrap();
            view.situation
        },
    );
    check(
        ViolationCode::Comp001,
        "delete the composite classification edge",
        &|store, pool| {
            let view = composition(store, pool);
            let snap = store.snapshot();
            let concept = concept_of(&snap, &view.description, Anchor::Composite);
            store.retract_edge(&concept, Property::Classifies, &pool.events[0]);
            view.situation
        },
    );
    check(
        ViolationCode::Comp002,
        "delete the only component classification edge",
        &|store, pool| {
            let view = composition(store, pool);
            let snap = store.snapshot();
            let concept = concept_of(&snap, &view.description, Anchor::Component);
            store.retract_edge(&concept, Property::Classifies, &pool.events[1]);
            view.situation
        },
    );
    check(
        ViolationCode::Comp003,
        "add a component classification of the composite itself",
        &|store, pool| {
            let view = composition(store, pool);
            let snap = store.snapshot();
            let concept = concept_of(&snap, &view.description, Anchor::Component);
            store
                .assert_edge(&concept, Property::Classifies, &pool.events[0])
                .unwrap();
            view.situation
        },
    );
    check(
        ViolationCode::Comp004,
        "rewrite the component's time region to fall outside the constraint window",
        &|store, pool| {
            store.attach_time(&pool.events[1], interval(100, 200)).unwrap();
            let view = build_composition(
                store,
                &CompositionSpec {
                    composite: pool.events[0].clone(),
                    components: vec![pool.events[1].clone()],
                    constraints: vec![ConstraintSpec::Temporal {
                        relation: AllenRelation::During,
                        target: TemporalTarget::AbsoluteInterval(interval(0, 1_000)),
                    }],
                },
            )
            .unwrap();
            let snap = store.snapshot();
            let region = time_region_of(&snap, &pool.events[1]);
            store
                .set_region_value(&region, RegionValue::Time(interval(5_000, 6_000)))
                .unwrap();
            view.situation
        },
    );
    check(
        ViolationCode::Caus001,
        "delete the cause classification edge",
        &|store, pool| {
            let view = causality(store, pool);
            let snap = store.snapshot();
            let concept = concept_of(&snap, &view.description, Anchor::Cause);
            store.retract_edge(&concept, Property::Classifies, &pool.events[0]);
            view.situation
        },
    );
    check(
        ViolationCode::Caus002,
        "delete the effect classification edge",
        &|store, pool| {
            let view = causality(store, pool);
            let snap = store.snapshot();
            let concept = concept_of(&snap, &view.description, Anchor::Effect);
            store.retract_edge(&concept, Property::Classifies, &pool.events[1]);
            view.situation
        },
    );
    check(
        ViolationCode::Caus003,
        "delete the justification edge",
        &|store, pool| {
            let view = causality(store, pool);
            let snap = store.snapshot();
            let just = snap
                .objects_of(&view.description, Property::HasJustification)
                .pop()
                .unwrap();
            store.retract_edge(&view.description, Property::HasJustification, &just);
            view.situation
        },
    );
    check(
        ViolationCode::Corr001,
        "delete one of two correlate classification edges",
        &|store, pool| {
            let view = build_correlation(
                store,
                &CorrelationSpec {
                    correlates: [pool.events[0].clone(), pool.events[1].clone()].into(),
                    justification: "observed".into(),
                },
            )
            .unwrap();
            let snap = store.snapshot();
            let concept = concept_of(&snap, &view.description, Anchor::Correlate);
            store.retract_edge(&concept, Property::Classifies, &pool.events[0]);
            view.situation
        },
    );
    check(
        ViolationCode::Corr002,
        "delete the justification edge",
        &|store, pool| {
            let view = build_correlation(
                store,
                &CorrelationSpec {
                    correlates: [pool.events[0].clone(), pool.events[1].clone()].into(),
                    justification: "observed".into(),
                },
            )
            .unwrap();
            let snap = store.snapshot();
            let just = snap
                .objects_of(&view.description, Property::HasJustification)
                .pop()
                .unwrap();
            store.retract_edge(&view.description, Property::HasJustification, &just);
            view.situation
        },
    );
    check(
        ViolationCode::Doc001,
        "delete the documented-event classification edge",
        &|store, pool| {
            let view = build_documentation(
                store,
                &DocumentationSpec {
                    documented_event: pool.events[0].clone(),
                    documenters: vec![pool.objects[0].clone()],
                },
            )
            .unwrap();
            let snap = store.snapshot();
            let concept = concept_of(&snap, &view.description, Anchor::DocumentedEvent);
            store.retract_edge(&concept, Property::Classifies, &pool.events[0]);
            view.situation
        },
    );
    check(
        ViolationCode::Doc002,
        "delete the documenter classification edge",
        &|store, pool| {
            let view = build_documentation(
                store,
                &DocumentationSpec {
                    documented_event: pool.events[0].clone(),
                    documenters: vec![pool.objects[0].clone()],
                },
            )
            .unwrap();
            let snap = store.snapshot();
            let concept = concept_of(&snap, &view.description, Anchor::Documenter);
            store.retract_edge(&concept, Property::Classifies, &pool.objects[0]);
            view.situation
        },
    );
    check(
        ViolationCode::Int001,
        "delete the interpretant classification edge",
        &|store, pool| {
            let caus = causality(store, pool);
            let view = build_interpretation(
                store,
                &InterpretationSpec {
                    interpreted_event: pool.events[1].clone(),
                    interpretant_iri: "ex:view-1".into(),
                    specializes: None,
                    relevant_situations: vec![caus.situation.clone()],
                },
            )
            .unwrap();
            let snap = store.snapshot();
            let concept = concept_of(&snap, &view.description, Anchor::Interpretant);
            store.retract_edge(&concept, Property::Classifies, &pool.events[1]);
            view.situation
        },
    );
    check(
        ViolationCode::Int002,
        "delete the relevant situation's satisfies edge",
        &|store, pool| {
            let caus = causality(store, pool);
            let view = build_interpretation(
                store,
                &InterpretationSpec {
                    interpreted_event: pool.events[1].clone(),
                    interpretant_iri: "ex:view-1".into(),
                    specializes: None,
                    relevant_situations: vec![caus.situation.clone()],
                },
            )
            .unwrap();
            store.retract_edge(&caus.situation, Property::Satisfies, &caus.description);
            view.situation
        },
    );

    outcomes
}
