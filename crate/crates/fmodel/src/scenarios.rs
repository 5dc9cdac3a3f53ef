//! Ready-made example stores from an emergency-response setting: a heavy
//! storm, a flooding, a power outage, and the descriptions different
//! responders exchange about them.
//!
//! These builders back the example corpus under `corpus/` (regenerate it with
//! `cargo run --example gen_corpus`) and double as fixtures for integration
//! tests. Every scenario validates without errors.

use crate::graph::{EntityRef, Kind, Store};
use crate::patterns::{
    build_causality, build_composition, build_correlation, build_documentation,
    build_interpretation, build_participation, CausalitySpec, CompositionSpec, CorrelationSpec,
    DocumentationSpec, InterpretationSpec, ParticipantSpec, ParticipationSpec, PatternError,
    PatternView,
};
use crate::spacetime::{AllenRelation, ConstraintSpec, GeoBox, TemporalTarget, TimeInterval, Trajectory};

pub const EX_NS: &str = "http://example.org/emergency#";
pub const DOM_NS: &str = "http://example.org/domain#";

fn declare(store: &mut Store) -> Result<(), PatternError> {
    store.declare_prefix("ex", EX_NS)?;
    store.declare_prefix("dom", DOM_NS)?;
    Ok(())
}

fn interval(text: &str) -> TimeInterval {
    TimeInterval::parse(text).expect("scenario interval")
}

fn geo(min_lat: f64, max_lat: f64, min_lon: f64, max_lon: f64) -> GeoBox {
    GeoBox::new(min_lat, max_lat, min_lon, max_lon).expect("scenario box")
}

/// The golden example: a snapped power pole causes a power outage, justified
/// by the laws of physics, and a citizen in an affected building participates
/// in the outage.
pub struct PowerOutageExample {
    pub power_outage: EntityRef,
    pub snapped_power_pole: EntityRef,
    pub person: EntityRef,
    pub house: EntityRef,
    pub causality: PatternView,
    pub participation: PatternView,
}

pub fn power_outage(store: &mut Store) -> Result<PowerOutageExample, PatternError> {
    declare(store)?;
    let power_outage = store.new_entity("ex:power-outage-1", Kind::Event)?;
    let snapped_power_pole = store.new_entity("ex:snapped-power-pole-1", Kind::Event)?;
    let person = store.new_entity("ex:person-1", Kind::Object)?;
    let house = store.new_entity("ex:house-1", Kind::Object)?;

    let causality = build_causality(
        store,
        &CausalitySpec {
            cause: snapped_power_pole.clone(),
            effect: power_outage.clone(),
            justification: "laws of physics".into(),
        },
    )?;
    let participation = build_participation(
        store,
        &ParticipationSpec {
            described_event: power_outage.clone(),
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
        },
    )?;

    Ok(PowerOutageExample {
        power_outage,
        snapped_power_pole,
        person,
        house,
        causality,
        participation,
    })
}

/// The full emergency scenario: one store exercising participation, absolute
/// time and space, mereology, causality, correlation, documentation, and two
/// coexisting interpretations with conflicting causes.
pub struct EmergencyScenario {
    pub storm: EntityRef,
    pub flooding: EntityRef,
    pub power_outage: EntityRef,
    pub flooded_cellar: EntityRef,
    pub rescue: EntityRef,
    pub snapped_power_pole: EntityRef,
    pub power_plant_problem: EntityRef,
    pub hotline_call: EntityRef,
    pub person: EntityRef,
    pub house: EntityRef,
    pub photo: EntityRef,
    pub participation: PatternView,
    pub composition: PatternView,
    pub causality_storm_flooding: PatternView,
    pub causality_flooding_cellar: PatternView,
    pub causality_flooding_rescue: PatternView,
    pub causality_pole_outage: PatternView,
    pub causality_plant_outage: PatternView,
    pub correlation: PatternView,
    pub documentation_photo: PatternView,
    pub documentation_call: PatternView,
    pub officer_a: PatternView,
    pub officer_b: PatternView,
}

pub fn emergency(store: &mut Store) -> Result<EmergencyScenario, PatternError> {
    declare(store)?;
    let storm = store.new_entity("ex:storm-1", Kind::Event)?;
    let flooding = store.new_entity("ex:flooding-1", Kind::Event)?;
    let power_outage = store.new_entity("ex:power-outage-1", Kind::Event)?;
    let flooded_cellar = store.new_entity("ex:flooded-cellar-1", Kind::Event)?;
    let rescue = store.new_entity("ex:rescue-1", Kind::Event)?;
    let snapped_power_pole = store.new_entity("ex:snapped-power-pole-1", Kind::Event)?;
    let power_plant_problem = store.new_entity("ex:power-plant-problem-1", Kind::Event)?;
    let hotline_call = store.new_entity("ex:hotline-call-1", Kind::Event)?;
    let person = store.new_entity("ex:person-1", Kind::Object)?;
    let house = store.new_entity("ex:house-1", Kind::Object)?;
    let photo = store.new_entity("ex:photo-1", Kind::Object)?;

    // Absolute time for the events of the incident week.
    store.attach_time(&storm, interval("2009-06-08T06:00:00Z/2009-06-09T00:00:00Z"))?;
    store.attach_time(&flooding, interval("2009-06-08T18:00:00Z/2009-06-12T00:00:00Z"))?;
    store.attach_time(&power_outage, interval("2009-06-09T08:00:00Z/2009-06-10T18:00:00Z"))?;
    store.attach_time(&flooded_cellar, interval("2009-06-09T10:00:00Z/2009-06-09T12:00:00Z"))?;
    store.attach_time(&rescue, interval("2009-06-10T09:00:00Z/2009-06-10T15:00:00Z"))?;

    // Absolute space for the objects involved.
    store.attach_location(&house, geo(50.93, 50.94, 7.0, 7.01))?;
    store.attach_location(&person, geo(50.93, 50.94, 7.0, 7.01))?;

    let participation = build_participation(
        store,
        &ParticipationSpec {
            described_event: power_outage.clone(),
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
            time_param: Some(interval("2009-06-09T08:00:00Z/2009-06-10T18:00:00Z")),
            location_params: vec![("ex:citizen-1".into(), geo(50.9, 50.95, 6.95, 7.1))],
        },
    )?;

    // The flood is made up of the smaller incidents, all within the week.
    let composition = build_composition(
        store,
        &CompositionSpec {
            composite: flooding.clone(),
            components: vec![flooded_cellar.clone(), power_outage.clone(), rescue.clone()],
            constraints: vec![ConstraintSpec::Temporal {
                relation: AllenRelation::During,
                target: TemporalTarget::AbsoluteInterval(interval(
                    "2009-06-08T00:00:00Z/2009-06-14T23:59:59Z",
                )),
            }],
        },
    )?;

    let causality = |store: &mut Store, cause: &EntityRef, effect: &EntityRef, why: &str| {
        build_causality(
            store,
            &CausalitySpec {
                cause: cause.clone(),
                effect: effect.clone(),
                justification: why.into(),
            },
        )
    };
    let causality_storm_flooding = causality(store, &storm, &flooding, "heavy rainfall")?;
    let causality_flooding_cellar = causality(store, &flooding, &flooded_cellar, "rising water")?;
    let causality_flooding_rescue = causality(store, &flooding, &rescue, "people trapped by water")?;
    let causality_pole_outage =
        causality(store, &snapped_power_pole, &power_outage, "laws of physics")?;
    let causality_plant_outage =
        causality(store, &power_plant_problem, &power_outage, "grid analysis")?;

    let correlation = build_correlation(
        store,
        &CorrelationSpec {
            correlates: [flooded_cellar.clone(), rescue.clone()].into(),
            justification: "common cause: flooding".into(),
        },
    )?;

    let documentation_photo = build_documentation(
        store,
        &DocumentationSpec {
            documented_event: flooded_cellar.clone(),
            documenters: vec![photo.clone()],
        },
    )?;
    let documentation_call = build_documentation(
        store,
        &DocumentationSpec {
            documented_event: power_outage.clone(),
            documenters: vec![hotline_call.clone()],
        },
    )?;

    // Two officers, two hypotheses about the outage.
    let officer_a = build_interpretation(
        store,
        &InterpretationSpec {
            interpreted_event: power_outage.clone(),
            interpretant_iri: "ex:officer-A".into(),
            specializes: Some("dom:EmergencyIncident".into()),
            relevant_situations: vec![
                causality_pole_outage.situation.clone(),
                participation.situation.clone(),
            ],
        },
    )?;
    let officer_b = build_interpretation(
        store,
        &InterpretationSpec {
            interpreted_event: power_outage.clone(),
            interpretant_iri: "ex:officer-B".into(),
            specializes: Some("dom:EmergencyIncident".into()),
            relevant_situations: vec![
                causality_plant_outage.situation.clone(),
                participation.situation.clone(),
            ],
        },
    )?;

    Ok(EmergencyScenario {
        storm,
        flooding,
        power_outage,
        flooded_cellar,
        rescue,
        snapped_power_pole,
        power_plant_problem,
        hotline_call,
        person,
        house,
        photo,
        participation,
        composition,
        causality_storm_flooding,
        causality_flooding_cellar,
        causality_flooding_rescue,
        causality_pole_outage,
        causality_plant_outage,
        correlation,
        documentation_photo,
        documentation_call,
        officer_a,
        officer_b,
    })
}

/// A single participation with a time parameter.
pub fn participation_basic(store: &mut Store) -> Result<PatternView, PatternError> {
    declare(store)?;
    let cellar = store.new_entity("ex:flooded-cellar-1", Kind::Event)?;
    let caller = store.new_entity("ex:caller-1", Kind::Object)?;
    build_participation(
        store,
        &ParticipationSpec {
            described_event: cellar,
            participants: vec![ParticipantSpec {
                object: caller,
                role_iri: "ex:reporting-citizen-1".into(),
                specializes: Some("dom:Citizen".into()),
            }],
            time_param: Some(interval("2009-06-09T10:00:00Z/2009-06-09T12:00:00Z")),
            location_params: vec![],
        },
    )
}

/// A composition carrying all three constraint flavours, satisfiable against
/// the attached qualities.
pub fn composition_constraints(store: &mut Store) -> Result<PatternView, PatternError> {
    declare(store)?;
    let flooding = store.new_entity("ex:flooding-1", Kind::Event)?;
    let cellar = store.new_entity("ex:flooded-cellar-1", Kind::Event)?;
    let rescue = store.new_entity("ex:rescue-1", Kind::Event)?;
    store.attach_time(&flooding, interval("2009-06-08T18:00:00Z/2009-06-12T00:00:00Z"))?;
    store.attach_time(&cellar, interval("2009-06-09T10:00:00Z/2009-06-09T12:00:00Z"))?;
    store.attach_time(&rescue, interval("2009-06-10T09:00:00Z/2009-06-10T15:00:00Z"))?;

    let crew = store.new_entity("ex:pump-crew-1", Kind::Object)?;
    store.attach_location(&crew, geo(50.92, 50.93, 7.02, 7.03))?;
    build_participation(
        store,
        &ParticipationSpec {
            described_event: cellar.clone(),
            participants: vec![ParticipantSpec {
                object: crew,
                role_iri: "ex:pump-operator-1".into(),
                specializes: Some("dom:RescueStaff".into()),
            }],
            time_param: None,
            location_params: vec![],
        },
    )?;

    build_composition(
        store,
        &CompositionSpec {
            composite: flooding,
            components: vec![cellar.clone(), rescue.clone()],
            constraints: vec![
                ConstraintSpec::Temporal {
                    relation: AllenRelation::During,
                    target: TemporalTarget::AbsoluteInterval(interval(
                        "2009-06-08T00:00:00Z/2009-06-14T23:59:59Z",
                    )),
                },
                ConstraintSpec::Temporal {
                    relation: AllenRelation::Before,
                    target: TemporalTarget::ComponentRef(rescue),
                },
                ConstraintSpec::SpatialWithin(geo(50.85, 51.0, 6.9, 7.2)),
            ],
        },
    )
}

/// A three-link causal chain.
pub fn causality_chain(store: &mut Store) -> Result<Vec<PatternView>, PatternError> {
    declare(store)?;
    let storm = store.new_entity("ex:storm-1", Kind::Event)?;
    let flooding = store.new_entity("ex:flooding-1", Kind::Event)?;
    let outage = store.new_entity("ex:power-outage-1", Kind::Event)?;
    let views = vec![
        build_causality(
            store,
            &CausalitySpec {
                cause: storm.clone(),
                effect: flooding.clone(),
                justification: "heavy rainfall".into(),
            },
        )?,
        build_causality(
            store,
            &CausalitySpec {
                cause: flooding,
                effect: outage,
                justification: "water damage to the grid".into(),
            },
        )?,
    ];
    Ok(views)
}

/// Two correlated events plus the causalities that justify the correlation.
pub fn correlation_pair(store: &mut Store) -> Result<PatternView, PatternError> {
    declare(store)?;
    let flooding = store.new_entity("ex:flooding-1", Kind::Event)?;
    let cellar = store.new_entity("ex:flooded-cellar-1", Kind::Event)?;
    let rescue = store.new_entity("ex:rescue-1", Kind::Event)?;
    build_causality(
        store,
        &CausalitySpec {
            cause: flooding.clone(),
            effect: cellar.clone(),
            justification: "rising water".into(),
        },
    )?;
    build_causality(
        store,
        &CausalitySpec {
            cause: flooding,
            effect: rescue.clone(),
            justification: "people trapped by water".into(),
        },
    )?;
    build_correlation(
        store,
        &CorrelationSpec {
            correlates: [cellar, rescue].into(),
            justification: "common cause: flooding".into(),
        },
    )
}

/// Documentary evidence of both flavours: a photo (object) and a hotline
/// call (event).
pub fn documentation_evidence(store: &mut Store) -> Result<Vec<PatternView>, PatternError> {
    declare(store)?;
    let cellar = store.new_entity("ex:flooded-cellar-1", Kind::Event)?;
    let outage = store.new_entity("ex:power-outage-1", Kind::Event)?;
    let photo = store.new_entity("ex:photo-1", Kind::Object)?;
    let call = store.new_entity("ex:hotline-call-1", Kind::Event)?;
    Ok(vec![
        build_documentation(
            store,
            &DocumentationSpec {
                documented_event: cellar,
                documenters: vec![photo],
            },
        )?,
        build_documentation(
            store,
            &DocumentationSpec {
                documented_event: outage,
                documenters: vec![call],
            },
        )?,
    ])
}

/// Two interpretations of the same outage with conflicting causes.
pub fn interpretation_two_views(
    store: &mut Store,
) -> Result<(PatternView, PatternView), PatternError> {
    declare(store)?;
    let outage = store.new_entity("ex:power-outage-1", Kind::Event)?;
    let pole = store.new_entity("ex:snapped-power-pole-1", Kind::Event)?;
    let plant = store.new_entity("ex:power-plant-problem-1", Kind::Event)?;
    let caus_pole = build_causality(
        store,
        &CausalitySpec {
            cause: pole,
            effect: outage.clone(),
            justification: "laws of physics".into(),
        },
    )?;
    let caus_plant = build_causality(
        store,
        &CausalitySpec {
            cause: plant,
            effect: outage.clone(),
            justification: "grid analysis".into(),
        },
    )?;
    let a = build_interpretation(
        store,
        &InterpretationSpec {
            interpreted_event: outage.clone(),
            interpretant_iri: "ex:officer-A".into(),
            specializes: None,
            relevant_situations: vec![caus_pole.situation.clone()],
        },
    )?;
    let b = build_interpretation(
        store,
        &InterpretationSpec {
            interpreted_event: outage,
            interpretant_iri: "ex:officer-B".into(),
            specializes: None,
            relevant_situations: vec![caus_plant.situation.clone()],
        },
    )?;
    Ok((a, b))
}

/// Chained compositions: the incident contains the flooding, the flooding
/// contains the cellar and the rescue.
pub fn mereology_nested(store: &mut Store) -> Result<Vec<PatternView>, PatternError> {
    declare(store)?;
    let incident = store.new_entity("ex:incident-1", Kind::Event)?;
    let flooding = store.new_entity("ex:flooding-1", Kind::Event)?;
    let cellar = store.new_entity("ex:flooded-cellar-1", Kind::Event)?;
    let rescue = store.new_entity("ex:rescue-1", Kind::Event)?;
    Ok(vec![
        build_composition(
            store,
            &CompositionSpec {
                composite: incident,
                components: vec![flooding.clone()],
                constraints: vec![],
            },
        )?,
        build_composition(
            store,
            &CompositionSpec {
                composite: flooding,
                components: vec![cellar, rescue],
                constraints: vec![],
            },
        )?,
    ])
}

/// Events and objects with time, space, and trajectory qualities, plus a
/// trajectory-constrained composition.
pub fn spacetime_qualities(store: &mut Store) -> Result<PatternView, PatternError> {
    declare(store)?;
    let flooding = store.new_entity("ex:flooding-1", Kind::Event)?;
    let surge = store.new_entity("ex:water-surge-1", Kind::Event)?;
    store.attach_time(&flooding, interval("2009-06-08T18:00:00Z/2009-06-12T00:00:00Z"))?;
    store.attach_time(&surge, interval("2009-06-09T00:00:00Z/2009-06-09T18:00:00Z"))?;

    let gauge = store.new_entity("ex:river-gauge-1", Kind::Object)?;
    store.attach_location(&gauge, geo(50.91, 50.92, 7.04, 7.05))?;
    build_participation(
        store,
        &ParticipationSpec {
            described_event: surge.clone(),
            participants: vec![ParticipantSpec {
                object: gauge,
                role_iri: "ex:sensor-1".into(),
                specializes: Some("dom:Sensor".into()),
            }],
            time_param: None,
            location_params: vec![],
        },
    )?;

    // The flood front moves downstream over the week.
    let track = Trajectory::new(vec![
        (
            interval("2009-06-08T18:00:00Z/2009-06-09T23:59:59Z"),
            geo(50.9, 50.95, 7.0, 7.1),
        ),
        (
            interval("2009-06-10T00:00:00Z/2009-06-12T00:00:00Z"),
            geo(50.95, 51.0, 7.1, 7.2),
        ),
    ])
    .expect("scenario trajectory");
    store.attach_trajectory(&flooding, track.clone())?;

    build_composition(
        store,
        &CompositionSpec {
            composite: flooding,
            components: vec![surge],
            constraints: vec![ConstraintSpec::SpatioTemporalWithin(track)],
        },
    )
}

/// One half of an exchange: the hotline system's participation description
/// for the storm.
pub fn exchange_participation(store: &mut Store) -> Result<PatternView, PatternError> {
    declare(store)?;
    let storm = store.new_entity("ex:storm-1", Kind::Event)?;
    let caller = store.new_entity("ex:caller-7", Kind::Object)?;
    build_participation(
        store,
        &ParticipationSpec {
            described_event: storm,
            participants: vec![ParticipantSpec {
                object: caller,
                role_iri: "ex:witness-1".into(),
                specializes: Some("dom:Citizen".into()),
            }],
            time_param: None,
            location_params: vec![],
        },
    )
}

/// The other half of an exchange: the liaison officer's documentation of the
/// same storm.
pub fn exchange_documentation(store: &mut Store) -> Result<PatternView, PatternError> {
    declare(store)?;
    let storm = store.new_entity("ex:storm-1", Kind::Event)?;
    let video = store.new_entity("ex:cctv-clip-4", Kind::Object)?;
    build_documentation(
        store,
        &DocumentationSpec {
            documented_event: storm,
            documenters: vec![video],
        },
    )
}
