//! Blow-up schedules for generic fibers, their extension to a special
//! fiber, and the near-pencil check on the family's intersection strata.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::classify::ResidualSingularities;
use crate::diagram::{group_order, residual_report, Center, CenterContext, CenterKind, Diagram, DiagramError};
use crate::exact::{Matrix, Rational};
use crate::forms::ParamArrangement;
use crate::incidence::{
    degenerate_values, generic_profile, local_violations, plane_list, profile, IncidenceError, IncidenceProfile,
    PlaneSet,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResolveError {
    #[error("arrangement violates the octic multiplicity bounds: {0}")]
    NotOctic(String),
    #[error("triple lines {0} and {1} still meet after the fivefold points")]
    IntersectingTripleLines(String, String),
    #[error("explicit order does not match the double lines to blow up: {0}")]
    InvalidOrder(String),
    #[error("generic fiber still singular after the schedule: {0}")]
    NotSmooth(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Incidence(#[from] IncidenceError),
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum OrderPolicy {
    /// Plane pairs first, then pairs involving exceptional components.
    #[default]
    Lexicographic,
    /// Labels such as `L12`, `L1A`; repeated labels are ignored.
    Explicit(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowUpSchedule {
    pub steps: Vec<Center>,
}

impl BlowUpSchedule {
    pub fn labels(&self) -> Vec<String> {
        self.steps.iter().map(|c| c.label.clone()).collect()
    }
}

fn groups_of(planes: &PlaneSet) -> BTreeSet<String> {
    planes.iter().map(|i| (i + 1).to_string()).collect()
}

fn center(kind: CenterKind, groups: BTreeSet<String>, new_group: Option<String>) -> Center {
    Center { label: Center::label_for(kind, &groups), kind, groups, new_group }
}

/// Steps 1-4 of the resolution of a generic fiber.
pub fn schedule(generic: &IncidenceProfile, policy: &OrderPolicy) -> Result<BlowUpSchedule, ResolveError> {
    let bad = local_violations(generic);
    if let Some(v) = bad.first() {
        return Err(ResolveError::NotOctic(format!("{} {:?} of multiplicity {}", v.kind, v.planes, v.multiplicity)));
    }
    let mut letters = (b'A'..=b'Z').map(|c| (c as char).to_string());
    let mut steps = vec![];
    for p in generic.points.iter().filter(|p| p.p() == 5) {
        steps.push(center(CenterKind::FivefoldPoint, groups_of(&p.planes), letters.next()));
    }
    let mut d = Diagram::initial(generic);
    for c in &steps {
        d = d.blow_up(c)?;
    }
    check_disjoint_triples(&d)?;
    let phase2: Vec<Center> = generic
        .triple_lines()
        .map(|l| center(CenterKind::TripleLine, groups_of(&l.planes), letters.next()))
        .collect();
    let phase3: Vec<Center> = generic
        .points
        .iter()
        .filter(|p| p.p() == 4 && p.j == 0)
        .map(|p| center(CenterKind::QuadruplePoint, groups_of(&p.planes), None))
        .collect();
    for c in phase2.iter().chain(&phase3) {
        d = d.blow_up(c)?;
    }
    steps.extend(phase2);
    steps.extend(phase3);

    let mut doubles: Vec<Center> = vec![];
    for c in d.curves.values() {
        let g = d.groups_of(&c.surfaces);
        if g.len() != 2 || c.surfaces.len() != 2 {
            return Err(ResolveError::NotSmooth(format!("curve {} is not a double curve", d.curve_label(c.id))));
        }
        let cen = center(CenterKind::DoubleLine, g, None);
        if !doubles.contains(&cen) {
            doubles.push(cen);
        }
    }
    let key = |c: &Center| {
        let mut g: Vec<_> = c.groups.iter().map(|s| group_order(s)).collect();
        g.sort();
        (g.iter().any(|x| x.0 == 1), g)
    };
    doubles.sort_by_key(key);
    let doubles = match policy {
        OrderPolicy::Lexicographic => doubles,
        OrderPolicy::Explicit(labels) => {
            let mut seen: Vec<String> = vec![];
            for l in labels {
                if !seen.contains(l) {
                    seen.push(l.clone());
                }
            }
            let expected: BTreeSet<String> = doubles.iter().map(|c| c.label.clone()).collect();
            let given: BTreeSet<String> = seen.iter().cloned().collect();
            if expected != given {
                let missing: Vec<_> = expected.difference(&given).cloned().collect();
                let extra: Vec<_> = given.difference(&expected).cloned().collect();
                return Err(ResolveError::InvalidOrder(format!("missing {missing:?}, unknown {extra:?}")));
            }
            seen.iter().map(|l| doubles.iter().find(|c| &c.label == l).unwrap().clone()).collect()
        }
    };
    for c in &doubles {
        d = d.blow_up(c)?;
    }
    if let Some(c) = d.curves.values().next() {
        return Err(ResolveError::NotSmooth(format!("curve {} survives", d.curve_label(c.id))));
    }
    steps.extend(doubles);
    Ok(BlowUpSchedule { steps })
}

fn check_disjoint_triples(d: &Diagram) -> Result<(), ResolveError> {
    for p in d.points.values().filter(|p| p.is_meeting()) {
        let triples: Vec<usize> = p.curves.iter().copied().filter(|c| d.curves[c].surfaces.len() >= 3).collect();
        if triples.len() >= 2 {
            return Err(ResolveError::IntersectingTripleLines(d.curve_label(triples[0]), d.curve_label(triples[1])));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub center: String,
    pub context: CenterContext,
    pub diagram: Diagram,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Trace {
    pub initial: Diagram,
    pub steps: Vec<TraceStep>,
    pub residual: ResidualSingularities,
}

impl Trace {
    pub fn last(&self) -> &Diagram {
        self.steps.last().map_or(&self.initial, |s| &s.diagram)
    }
}

/// Run the schedule on the fiber at `w0`.
pub fn trace_central_fiber(a: &ParamArrangement, w0: &Rational, s: &BlowUpSchedule) -> Result<Trace, ResolveError> {
    let special = profile(&a.specialize(w0).map_err(IncidenceError::from)?)?;
    trace_profile(&special, s)
}

/// Run a schedule on the diagram of an already computed profile.
pub fn trace_profile(special: &IncidenceProfile, s: &BlowUpSchedule) -> Result<Trace, ResolveError> {
    let initial = Diagram::initial(special);
    let mut cur = initial.clone();
    let mut steps = vec![];
    for c in &s.steps {
        let context = cur.center_context(c)?;
        cur = cur.apply_blowup(c, &context)?;
        steps.push(TraceStep { center: c.label.clone(), context, diagram: cur.clone() });
    }
    let residual = residual_report(&cur);
    Ok(Trace { initial, steps, residual })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stratum {
    /// `None` for strata sweeping out the whole family, else the fiber parameter.
    pub w0: Option<Rational>,
    pub planes: Vec<usize>,
    pub dim: usize,
    pub m: usize,
    pub status: StratumStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum StratumStatus {
    NotChecked,
    DimensionIdentity,
    NearPencil { container: Vec<usize>, container_w0: Option<Rational> },
    Fails,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NearPencilReport {
    pub strata: Vec<Stratum>,
    pub observations: Vec<String>,
    /// Components that are not hyperplanes of the total space; these need
    /// the extra first-blow-up argument.
    pub nonlinear_components: Vec<usize>,
    pub excluded_fatal: Vec<Rational>,
    pub passes: bool,
}

/// Fourfold near-pencil condition on every stratum with m >= 3.
pub fn near_pencil_check(a: &ParamArrangement) -> Result<NearPencilReport, ResolveError> {
    const DIM_X: usize = 4;
    let generic = generic_profile(a)?;
    let report = degenerate_values(a)?;
    // (w0, set, dim) for every stratum.
    let mut raw: Vec<(Option<Rational>, PlaneSet, usize)> = vec![];
    for l in &generic.lines {
        raw.push((None, l.planes.clone(), 2));
    }
    for p in &generic.points {
        raw.push((None, p.planes.clone(), 1));
    }
    for v in &report.values {
        for l in v.special.lines.iter().filter(|l| generic.line(&l.planes).is_none()) {
            raw.push((Some(v.w0.clone()), l.planes.clone(), 1));
        }
        for p in v.special.points.iter().filter(|p| generic.point(&p.planes).is_none()) {
            raw.push((Some(v.w0.clone()), p.planes.clone(), 0));
        }
    }
    let rank_at = |w0: &Rational, s: &PlaneSet| -> usize {
        let rows: Vec<Vec<Rational>> = s.iter().map(|&i| a.forms[i].eval(w0).to_vec()).collect();
        Matrix::from_rows(rows).rank()
    };
    let mut strata = vec![];
    let mut observations = vec![];
    for (w0, set, dim) in &raw {
        let m = set.len();
        let status = if m < 3 {
            StratumStatus::NotChecked
        } else if m / 2 + dim + 1 == DIM_X {
            StratumStatus::DimensionIdentity
        } else {
            let container = raw.iter().find(|(w1, s1, d1)| {
                *d1 == dim + 1
                    && s1.len() + 1 == m
                    && s1.is_subset(set)
                    && match (w0, w1) {
                        (_, Some(w1)) => w0.as_ref() == Some(w1),
                        (None, None) => true,
                        // A family stratum contains this fiber stratum only if its planes keep their rank here.
                        (Some(w), None) => rank_at(w, s1) == rank_generic(&generic, s1),
                    }
            });
            match container {
                Some((w1, s1, _)) => {
                    if w0.is_some() {
                        observations.push(format!(
                            "new {} {} at w={} lies on the {} {}{}",
                            stratum_name(m, *dim),
                            crate::incidence::plane_label(set),
                            w0.as_ref().unwrap(),
                            stratum_name(s1.len(), dim + 1),
                            crate::incidence::plane_label(s1),
                            if w1.is_some() { " of the same fiber" } else { " of the family" },
                        ));
                    }
                    StratumStatus::NearPencil { container: plane_list(s1), container_w0: w1.clone() }
                }
                None => StratumStatus::Fails,
            }
        };
        strata.push(Stratum { w0: w0.clone(), planes: plane_list(set), dim: *dim, m, status });
    }
    let passes = strata.iter().all(|s| s.status != StratumStatus::Fails);
    Ok(NearPencilReport {
        strata,
        observations,
        nonlinear_components: a.nonlinear_components().iter().map(|i| i + 1).collect(),
        excluded_fatal: report.fatal.iter().map(|f| f.w0.clone()).collect(),
        passes,
    })
}

fn rank_generic(generic: &IncidenceProfile, s: &PlaneSet) -> usize {
    if generic.line(s).is_some() {
        2
    } else {
        3
    }
}

fn stratum_name(m: usize, dim: usize) -> String {
    let mult = match m {
        2 => "double",
        3 => "triple",
        4 => "quadruple",
        5 => "quintuple",
        _ => "multiple",
    };
    let kind = match dim {
        0 => "point",
        1 => "curve",
        _ => "surface",
    };
    format!("{mult} {kind}")
}
