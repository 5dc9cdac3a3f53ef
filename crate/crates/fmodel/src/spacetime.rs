//! Concrete region values (time intervals, geo boxes, trajectories), the 13
//! Allen interval relations, and evaluation of composition constraints.
//!
//! Everything here is a pure value-level computation; constraint checking
//! reads from a snapshot and never mutates.

use std::fmt;

use chrono::{DateTime, SecondsFormat, Utc};
use thiserror::Error;

use crate::graph::{EntityRef, Snapshot};
use crate::patterns::{PatternDetail, PatternView};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpacetimeError {
    #[error("invalid time interval: start {start} is after end {end}")]
    InvalidInterval { start: String, end: String },
    #[error("invalid instant `{0}`")]
    InvalidInstant(String),
    #[error("invalid geo box `{0}`")]
    InvalidBox(String),
    #[error("trajectory must have at least one leg")]
    EmptyTrajectory,
    #[error("trajectory legs must be ascending and non-overlapping")]
    UnorderedTrajectory,
    #[error("degenerate interval: the 13-way classification is ambiguous for point intervals")]
    DegenerateInterval,
    #[error("unknown Allen relation `{0}`")]
    UnknownRelation(String),
    #[error("`{0}` is not a component of this composition")]
    NotAComponent(String),
    #[error("bad lexical form `{text}`: {reason}")]
    BadLexical { text: String, reason: String },
}

/// Closed time interval with UTC instants at millisecond precision.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TimeInterval {
    start: DateTime<Utc>,
    end: DateTime<Utc>,
}

impl TimeInterval {
    /// Build an interval; instants are truncated to millisecond precision and
    /// `start <= end` is required. Point intervals (`start == end`) are legal
    /// values but cannot be classified by [`allen_relation`].
    pub fn new(start: DateTime<Utc>, end: DateTime<Utc>) -> Result<Self, SpacetimeError> {
        let start = truncate_millis(start);
        let end = truncate_millis(end);
        if start > end {
            return Err(SpacetimeError::InvalidInterval {
                start: format_instant(start),
                end: format_instant(end),
            });
        }
        Ok(TimeInterval { start, end })
    }

    pub fn start(&self) -> DateTime<Utc> {
        self.start
    }

    pub fn end(&self) -> DateTime<Utc> {
        self.end
    }

    pub fn is_degenerate(&self) -> bool {
        self.start == self.end
    }

    /// Closed-interval overlap test (shared endpoints count as overlap).
    pub fn overlaps(&self, other: &TimeInterval) -> bool {
        self.start <= other.end && other.start <= self.end
    }

    /// Parse the lexical form `start/end` (two ISO-8601 UTC instants).
    pub fn parse(text: &str) -> Result<Self, SpacetimeError> {
        let (a, b) = text.split_once('/').ok_or_else(|| SpacetimeError::BadLexical {
            text: text.to_string(),
            reason: "expected `start/end`".into(),
        })?;
        TimeInterval::new(parse_instant(a)?, parse_instant(b)?)
    }

    /// Canonical lexical form: `start/end`, millisecond digits only when
    /// non-zero.
    pub fn lexical(&self) -> String {
        format!("{}/{}", format_instant(self.start), format_instant(self.end))
    }
}

impl fmt::Display for TimeInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.lexical())
    }
}

fn truncate_millis(t: DateTime<Utc>) -> DateTime<Utc> {
    let millis = t.timestamp_millis();
    DateTime::<Utc>::from_timestamp_millis(millis).expect("timestamp in range")
}

fn parse_instant(text: &str) -> Result<DateTime<Utc>, SpacetimeError> {
    DateTime::parse_from_rfc3339(text)
        .map(|t| t.with_timezone(&Utc))
        .map_err(|_| SpacetimeError::InvalidInstant(text.to_string()))
}

fn format_instant(t: DateTime<Utc>) -> String {
    if t.timestamp_subsec_millis() == 0 {
        t.to_rfc3339_opts(SecondsFormat::Secs, true)
    } else {
        t.to_rfc3339_opts(SecondsFormat::Millis, true)
    }
}

/// Axis-aligned latitude/longitude box with closed bounds. No antimeridian
/// wrapping; plain per-axis comparisons, no great-circle geometry.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct GeoBox {
    pub min_lat: f64,
    pub max_lat: f64,
    pub min_lon: f64,
    pub max_lon: f64,
}

impl GeoBox {
    pub fn new(min_lat: f64, max_lat: f64, min_lon: f64, max_lon: f64) -> Result<Self, SpacetimeError> {
        let all = [min_lat, max_lat, min_lon, max_lon];
        let ok = all.iter().all(|v| v.is_finite())
            && (-90.0..=90.0).contains(&min_lat)
            && (-90.0..=90.0).contains(&max_lat)
            && (-180.0..=180.0).contains(&min_lon)
            && (-180.0..=180.0).contains(&max_lon)
            && min_lat <= max_lat
            && min_lon <= max_lon;
        if !ok {
            return Err(SpacetimeError::InvalidBox(format!(
                "{min_lat},{min_lon};{max_lat},{max_lon}"
            )));
        }
        Ok(GeoBox {
            min_lat,
            max_lat,
            min_lon,
            max_lon,
        })
    }

    /// Parse the lexical form `lat,lon;lat,lon` (min corner; max corner).
    pub fn parse(text: &str) -> Result<Self, SpacetimeError> {
        let bad = |reason: &str| SpacetimeError::BadLexical {
            text: text.to_string(),
            reason: reason.into(),
        };
        let (min, max) = text.split_once(';').ok_or_else(|| bad("expected `min;max`"))?;
        let parse_corner = |s: &str| -> Result<(f64, f64), SpacetimeError> {
            let (lat, lon) = s.split_once(',').ok_or_else(|| bad("expected `lat,lon`"))?;
            let lat: f64 = lat.trim().parse().map_err(|_| bad("bad latitude"))?;
            let lon: f64 = lon.trim().parse().map_err(|_| bad("bad longitude"))?;
            Ok((lat, lon))
        };
        let (min_lat, min_lon) = parse_corner(min)?;
        let (max_lat, max_lon) = parse_corner(max)?;
        GeoBox::new(min_lat, max_lat, min_lon, max_lon)
    }

    /// Canonical lexical form (shortest round-trip float rendering).
    pub fn lexical(&self) -> String {
        format!(
            "{},{};{},{}",
            self.min_lat, self.min_lon, self.max_lat, self.max_lon
        )
    }
}

impl fmt::Display for GeoBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.lexical())
    }
}

/// `true` iff `inner` lies within `outer` on both axes (closed bounds, so a
/// box contains itself).
pub fn box_contains(outer: &GeoBox, inner: &GeoBox) -> bool {
    outer.min_lat <= inner.min_lat
        && inner.max_lat <= outer.max_lat
        && outer.min_lon <= inner.min_lon
        && inner.max_lon <= outer.max_lon
}

/// Spatio-temporal region: ordered legs of (interval, box). Legs may touch at
/// endpoints but their interiors never overlap.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    legs: Vec<(TimeInterval, GeoBox)>,
}

impl Trajectory {
    pub fn new(legs: Vec<(TimeInterval, GeoBox)>) -> Result<Self, SpacetimeError> {
        if legs.is_empty() {
            return Err(SpacetimeError::EmptyTrajectory);
        }
        for w in legs.windows(2) {
            if w[0].0.end() > w[1].0.start() {
                return Err(SpacetimeError::UnorderedTrajectory);
            }
        }
        Ok(Trajectory { legs })
    }

    pub fn legs(&self) -> &[(TimeInterval, GeoBox)] {
        &self.legs
    }

    /// Parse the lexical form `interval@box|interval@box|...`.
    pub fn parse(text: &str) -> Result<Self, SpacetimeError> {
        let mut legs = Vec::new();
        for part in text.split('|') {
            let (iv, bx) = part.split_once('@').ok_or_else(|| SpacetimeError::BadLexical {
                text: part.to_string(),
                reason: "expected `interval@box`".into(),
            })?;
            legs.push((TimeInterval::parse(iv)?, GeoBox::parse(bx)?));
        }
        Trajectory::new(legs)
    }

    pub fn lexical(&self) -> String {
        self.legs
            .iter()
            .map(|(iv, bx)| format!("{}@{}", iv.lexical(), bx.lexical()))
            .collect::<Vec<_>>()
            .join("|")
    }
}

impl fmt::Display for Trajectory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.lexical())
    }
}

/// The 13 Allen relations. Jointly exhaustive and pairwise disjoint over
/// proper (non-degenerate) intervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AllenRelation {
    Before,
    Meets,
    Overlaps,
    Starts,
    During,
    Finishes,
    Equals,
    After,
    MetBy,
    OverlappedBy,
    StartedBy,
    Contains,
    FinishedBy,
}

impl AllenRelation {
    pub const ALL: [AllenRelation; 13] = [
        AllenRelation::Before,
        AllenRelation::Meets,
        AllenRelation::Overlaps,
        AllenRelation::Starts,
        AllenRelation::During,
        AllenRelation::Finishes,
        AllenRelation::Equals,
        AllenRelation::After,
        AllenRelation::MetBy,
        AllenRelation::OverlappedBy,
        AllenRelation::StartedBy,
        AllenRelation::Contains,
        AllenRelation::FinishedBy,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            AllenRelation::Before => "before",
            AllenRelation::Meets => "meets",
            AllenRelation::Overlaps => "overlaps",
            AllenRelation::Starts => "starts",
            AllenRelation::During => "during",
            AllenRelation::Finishes => "finishes",
            AllenRelation::Equals => "equals",
            AllenRelation::After => "after",
            AllenRelation::MetBy => "metBy",
            AllenRelation::OverlappedBy => "overlappedBy",
            AllenRelation::StartedBy => "startedBy",
            AllenRelation::Contains => "contains",
            AllenRelation::FinishedBy => "finishedBy",
        }
    }

    pub fn from_name(name: &str) -> Result<AllenRelation, SpacetimeError> {
        AllenRelation::ALL
            .iter()
            .copied()
            .find(|r| r.name() == name)
            .ok_or_else(|| SpacetimeError::UnknownRelation(name.to_string()))
    }

    /// The converse relation: `allen_relation(a, b) = r` iff
    /// `allen_relation(b, a) = r.inverse()`.
    pub fn inverse(&self) -> AllenRelation {
        match self {
            AllenRelation::Before => AllenRelation::After,
            AllenRelation::Meets => AllenRelation::MetBy,
            AllenRelation::Overlaps => AllenRelation::OverlappedBy,
            AllenRelation::Starts => AllenRelation::StartedBy,
            AllenRelation::During => AllenRelation::Contains,
            AllenRelation::Finishes => AllenRelation::FinishedBy,
            AllenRelation::Equals => AllenRelation::Equals,
            AllenRelation::After => AllenRelation::Before,
            AllenRelation::MetBy => AllenRelation::Meets,
            AllenRelation::OverlappedBy => AllenRelation::Overlaps,
            AllenRelation::StartedBy => AllenRelation::Starts,
            AllenRelation::Contains => AllenRelation::During,
            AllenRelation::FinishedBy => AllenRelation::Finishes,
        }
    }

    fn holds(&self, a: &TimeInterval, b: &TimeInterval) -> bool {
        let (as_, ae, bs, be) = (a.start(), a.end(), b.start(), b.end());
        match self {
            AllenRelation::Before => ae < bs,
            AllenRelation::Meets => ae == bs,
            AllenRelation::Overlaps => as_ < bs && bs < ae && ae < be,
            AllenRelation::Starts => as_ == bs && ae < be,
            AllenRelation::During => bs < as_ && ae < be,
            AllenRelation::Finishes => bs < as_ && ae == be,
            AllenRelation::Equals => as_ == bs && ae == be,
            AllenRelation::After => be < as_,
            AllenRelation::MetBy => be == as_,
            AllenRelation::OverlappedBy => bs < as_ && as_ < be && be < ae,
            AllenRelation::StartedBy => as_ == bs && be < ae,
            AllenRelation::Contains => as_ < bs && be < ae,
            AllenRelation::FinishedBy => as_ < bs && ae == be,
        }
    }
}

impl fmt::Display for AllenRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Classify the relation between two intervals by endpoint comparison.
///
/// For proper intervals exactly one of the 13 relations holds. Point
/// intervals are classified with the same closed-bound comparisons; when that
/// leaves zero or more than one candidate the pair is rejected as
/// [`SpacetimeError::DegenerateInterval`] rather than guessed at.
pub fn allen_relation(a: &TimeInterval, b: &TimeInterval) -> Result<AllenRelation, SpacetimeError> {
    let mut hit = None;
    for rel in AllenRelation::ALL {
        if rel.holds(a, b) {
            if hit.is_some() {
                return Err(SpacetimeError::DegenerateInterval);
            }
            hit = Some(rel);
        }
    }
    hit.ok_or(SpacetimeError::DegenerateInterval)
}

/// Target of a temporal composition constraint.
#[derive(Debug, Clone, PartialEq)]
pub enum TemporalTarget {
    /// Compare against the composite event's time quality.
    Composite,
    /// Compare against another component event's time quality.
    ComponentRef(EntityRef),
    /// Compare against a fixed interval.
    AbsoluteInterval(TimeInterval),
}

/// A constraint attached to a composition description, applied per component.
#[derive(Debug, Clone, PartialEq)]
pub enum ConstraintSpec {
    /// `allen_relation(component_time, target_time) == relation`.
    ///
    /// Argument order is fixed: the relation is read as
    /// `relation(component, target)`.
    Temporal {
        relation: AllenRelation,
        target: TemporalTarget,
    },
    /// Every object participating in the component event lies inside the box.
    SpatialWithin(GeoBox),
    /// For every trajectory leg overlapping the component's interval, the
    /// participating objects lie inside that leg's box.
    SpatioTemporalWithin(Trajectory),
}

impl ConstraintSpec {
    /// Render with qualified names resolved against a snapshot.
    pub fn describe(&self, snapshot: &Snapshot) -> String {
        match self {
            ConstraintSpec::Temporal { relation, target } => match target {
                TemporalTarget::Composite => format!("temporal {relation} composite"),
                TemporalTarget::ComponentRef(e) => {
                    format!("temporal {relation} component {}", snapshot.compact(e))
                }
                TemporalTarget::AbsoluteInterval(iv) => {
                    format!("temporal {relation} interval {iv}")
                }
            },
            ConstraintSpec::SpatialWithin(b) => format!("spatial-within {b}"),
            ConstraintSpec::SpatioTemporalWithin(t) => format!("spatiotemporal-within {t}"),
        }
    }
}

/// Outcome of checking one constraint against one component. Missing data is
/// reported as `Inapplicable`, never silently `Satisfied`.
#[derive(Debug, Clone, PartialEq)]
pub enum ConstraintResult {
    Satisfied,
    Violated(String),
    Inapplicable(String),
}

impl ConstraintResult {
    pub fn is_violated(&self) -> bool {
        matches!(self, ConstraintResult::Violated(_))
    }
}

impl fmt::Display for ConstraintResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintResult::Satisfied => f.write_str("satisfied"),
            ConstraintResult::Violated(why) => write!(f, "violated: {why}"),
            ConstraintResult::Inapplicable(why) => write!(f, "inapplicable: {why}"),
        }
    }
}

/// Evaluate a constraint for one component of a composition.
///
/// Spatial restrictions are expressed through the objects participating in
/// the component event: participants are collected from every participation
/// situation in the snapshot whose described event is the component.
pub fn check_constraint(
    snapshot: &Snapshot,
    composition: &PatternView,
    component: &EntityRef,
    constraint: &ConstraintSpec,
) -> Result<ConstraintResult, SpacetimeError> {
    let comp_view = match &composition.detail {
        PatternDetail::Composition(c) => c,
        _ => return Err(SpacetimeError::NotAComponent(component.iri().to_string())),
    };
    if !comp_view.components.contains(component) {
        return Err(SpacetimeError::NotAComponent(
            snapshot.compact(component),
        ));
    }

    match constraint {
        ConstraintSpec::Temporal { relation, target } => {
            let Some(component_time) = snapshot.time_of(component) else {
                return Ok(ConstraintResult::Inapplicable(format!(
                    "{} has no time quality",
                    snapshot.compact(component)
                )));
            };
            let target_time = match target {
                TemporalTarget::AbsoluteInterval(iv) => iv.clone(),
                TemporalTarget::Composite => {
                    match snapshot.time_of(&comp_view.composite) {
                        Some(iv) => iv,
                        None => {
                            return Ok(ConstraintResult::Inapplicable(format!(
                                "composite {} has no time quality",
                                snapshot.compact(&comp_view.composite)
                            )))
                        }
                    }
                }
                TemporalTarget::ComponentRef(other) => {
                    if other == component {
                        return Ok(ConstraintResult::Inapplicable(
                            "component is the constraint's own target".into(),
                        ));
                    }
                    if !comp_view.components.contains(other) {
                        return Ok(ConstraintResult::Inapplicable(format!(
                            "target {} is not a component of this composition",
                            snapshot.compact(other)
                        )));
                    }
                    match snapshot.time_of(other) {
                        Some(iv) => iv,
                        None => {
                            return Ok(ConstraintResult::Inapplicable(format!(
                                "target {} has no time quality",
                                snapshot.compact(other)
                            )))
                        }
                    }
                }
            };
            match allen_relation(&component_time, &target_time) {
                Ok(actual) if actual == *relation => Ok(ConstraintResult::Satisfied),
                Ok(actual) => Ok(ConstraintResult::Violated(format!(
                    "expected {relation}, found {actual}"
                ))),
                Err(SpacetimeError::DegenerateInterval) => Ok(ConstraintResult::Inapplicable(
                    "degenerate interval cannot be classified".into(),
                )),
                Err(e) => Err(e),
            }
        }
        ConstraintSpec::SpatialWithin(outer) => {
            check_participant_boxes(snapshot, component, |inner| box_contains(outer, inner))
        }
        ConstraintSpec::SpatioTemporalWithin(trajectory) => {
            let Some(component_time) = snapshot.time_of(component) else {
                return Ok(ConstraintResult::Inapplicable(format!(
                    "{} has no time quality",
                    snapshot.compact(component)
                )));
            };
            let active: Vec<&GeoBox> = trajectory
                .legs()
                .iter()
                .filter(|(iv, _)| iv.overlaps(&component_time))
                .map(|(_, b)| b)
                .collect();
            if active.is_empty() {
                return Ok(ConstraintResult::Inapplicable(
                    "no trajectory leg overlaps the component's interval".into(),
                ));
            }
            check_participant_boxes(snapshot, component, |inner| {
                active.iter().all(|outer| box_contains(outer, inner))
            })
        }
    }
}

/// Run a box predicate over the locations of every object participating in
/// the given event. Violations win over missing data; missing data wins over
/// vacuous success.
fn check_participant_boxes(
    snapshot: &Snapshot,
    event: &EntityRef,
    inside: impl Fn(&GeoBox) -> bool,
) -> Result<ConstraintResult, SpacetimeError> {
    let participants = crate::patterns::participants_of_event(snapshot, event);
    if participants.is_empty() {
        return Ok(ConstraintResult::Inapplicable(format!(
            "no objects participate in {}",
            snapshot.compact(event)
        )));
    }
    let mut outside = Vec::new();
    let mut missing = Vec::new();
    for obj in participants {
        match snapshot.location_of(&obj) {
            Some(b) if inside(&b) => {}
            Some(_) => outside.push(snapshot.compact(&obj)),
            None => missing.push(snapshot.compact(&obj)),
        }
    }
    if !outside.is_empty() {
        Ok(ConstraintResult::Violated(format!(
            "outside the region: {}",
            outside.join(", ")
        )))
    } else if !missing.is_empty() {
        Ok(ConstraintResult::Inapplicable(format!(
            "no space quality on: {}",
            missing.join(", ")
        )))
    } else {
        Ok(ConstraintResult::Satisfied)
    }
}
