//! Octic diagrams: a combinatorial model of the central fiber's branch
//! divisor, rewritten by each blow-up of the family.
//!
//! Surfaces belong to groups, one per component of the family's branch
//! divisor (a plane index or an exceptional letter). A curve lies on the
//! surfaces through it, a point records the curves meeting there. Centers
//! are named by groups, so the same schedule drives generic and special
//! fibers alike.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::incidence::{plane_label, IncidenceProfile, PlaneSet};

mod blowup;
mod render;

pub use blowup::CenterContext;
pub use render::render_dot;

pub type SurfaceId = usize;
pub type CurveId = usize;
pub type PointId = usize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagramError {
    #[error("center {0} names a component absent from the diagram")]
    CenterNotInDiagram(String),
    #[error("rule conflict at {center}: {reason}")]
    RuleConflict { center: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SurfaceOrigin {
    Plane(usize),
    Exceptional,
    Split { parent: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Surface {
    pub label: String,
    /// Component of the family this surface belongs to.
    pub group: String,
    pub origin: SurfaceOrigin,
}

/// Where a curve or point sits in the original P^3.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Image {
    Line(Vec<usize>),
    Point(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramCurve {
    pub id: CurveId,
    pub surfaces: BTreeSet<SurfaceId>,
    /// Surfaces on which the curve is exceptional (drawn dashed).
    pub exceptional_on: BTreeSet<SurfaceId>,
    pub image: Image,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Mark {
    Pinch,
    NodeOverThis,
    Separated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramPoint {
    pub id: PointId,
    pub curves: BTreeSet<CurveId>,
    pub marks: BTreeSet<Mark>,
}

impl DiagramPoint {
    /// An honest intersection point, not a pinch or a separation circle.
    pub fn is_meeting(&self) -> bool {
        self.marks.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Event {
    NewExceptionalSurface { surfaces: Vec<String> },
    SplitComponent { parent: String, new: Vec<String> },
    NewPinch { curve: CurveId, label: String, count: usize },
    NewNodePair { surface: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CenterKind {
    FivefoldPoint,
    TripleLine,
    QuadruplePoint,
    DoubleLine,
}

impl CenterKind {
    pub fn is_point(self) -> bool {
        matches!(self, CenterKind::FivefoldPoint | CenterKind::QuadruplePoint)
    }

    pub fn phase(self) -> u8 {
        match self {
            CenterKind::FivefoldPoint => 1,
            CenterKind::TripleLine => 2,
            CenterKind::QuadruplePoint => 3,
            CenterKind::DoubleLine => 4,
        }
    }
}

/// A blow-up center, named by the family components containing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Center {
    pub kind: CenterKind,
    pub label: String,
    pub groups: BTreeSet<String>,
    /// Letter of the exceptional component this blow-up adds to generic fibers.
    pub new_group: Option<String>,
}

impl Center {
    pub fn generic_multiplicity(&self) -> usize {
        self.groups.len()
    }

    /// Label such as `L12`, `L1A` or `P12345`.
    pub fn label_for(kind: CenterKind, groups: &BTreeSet<String>) -> String {
        let mut g: Vec<&String> = groups.iter().collect();
        g.sort_by_key(|s| group_order(s));
        let sep = if g.iter().any(|s| s.len() > 1) { "," } else { "" };
        let body = g.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(sep);
        if kind.is_point() {
            format!("P{body}")
        } else {
            format!("L{body}")
        }
    }
}

/// Planes first in numeric order, then exceptional letters.
pub fn group_order(g: &str) -> (u8, usize, String) {
    match g.parse::<usize>() {
        Ok(n) => (0, n, String::new()),
        Err(_) => (1, 0, g.to_string()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Diagram {
    pub surfaces: Vec<Surface>,
    pub curves: BTreeMap<CurveId, DiagramCurve>,
    pub points: BTreeMap<PointId, DiagramPoint>,
    pub events: Vec<Event>,
    /// Surface marker of each node pair, in creation order.
    pub node_pairs: Vec<String>,
    next_curve: CurveId,
    next_point: PointId,
}

impl Diagram {
    /// One surface per plane, one curve per maximal multiple line, one point per multiple point.
    pub fn initial(profile: &IncidenceProfile) -> Diagram {
        let mut d = Diagram::default();
        for i in 0..profile.n_forms {
            d.surfaces.push(Surface {
                label: format!("P{}", i + 1),
                group: (i + 1).to_string(),
                origin: SurfaceOrigin::Plane(i),
            });
        }
        let mut line_ids: Vec<(PlaneSet, CurveId)> = vec![];
        for l in &profile.lines {
            let id = d.add_curve(l.planes.clone(), BTreeSet::new(), Image::Line(plane_vec(&l.planes)));
            line_ids.push((l.planes.clone(), id));
        }
        for p in &profile.points {
            let curves: BTreeSet<CurveId> =
                line_ids.iter().filter(|(s, _)| s.is_subset(&p.planes)).map(|(_, id)| *id).collect();
            d.add_point(curves, BTreeSet::new());
        }
        d
    }

    pub fn surface_labels(&self, s: &BTreeSet<SurfaceId>) -> Vec<String> {
        s.iter().map(|&i| self.surfaces[i].label.clone()).collect()
    }

    pub fn curve_label(&self, c: CurveId) -> String {
        self.surface_labels(&self.curves[&c].surfaces).join("|")
    }

    pub fn groups_of(&self, s: &BTreeSet<SurfaceId>) -> BTreeSet<String> {
        s.iter().map(|&i| self.surfaces[i].group.clone()).collect()
    }

    pub fn point_surfaces(&self, p: &DiagramPoint) -> BTreeSet<SurfaceId> {
        p.curves.iter().flat_map(|c| self.curves[c].surfaces.iter().copied()).collect()
    }

    pub fn has_group(&self, g: &str) -> bool {
        self.surfaces.iter().any(|s| s.group == g)
    }

    pub fn pinch_count(&self, c: CurveId) -> usize {
        self.points.values().filter(|p| p.marks.contains(&Mark::Pinch) && p.curves.contains(&c)).count()
    }

    fn add_curve(&mut self, surfaces: BTreeSet<SurfaceId>, exceptional_on: BTreeSet<SurfaceId>, image: Image) -> CurveId {
        let id = self.next_curve;
        self.next_curve += 1;
        self.curves.insert(id, DiagramCurve { id, surfaces, exceptional_on, image });
        id
    }

    fn add_point(&mut self, curves: BTreeSet<CurveId>, marks: BTreeSet<Mark>) -> Option<PointId> {
        if curves.len() < 2 && !marks.contains(&Mark::Pinch) {
            return None;
        }
        let id = self.next_point;
        self.next_point += 1;
        self.points.insert(id, DiagramPoint { id, curves, marks });
        Some(id)
    }

    /// Drop a curve and every reference to it.
    fn remove_curve(&mut self, c: CurveId) {
        self.curves.remove(&c);
        let mut dead = vec![];
        for (id, p) in self.points.iter_mut() {
            if p.curves.remove(&c) && (p.curves.is_empty() || (p.curves.len() < 2 && !p.marks.contains(&Mark::Pinch))) {
                dead.push(*id);
            }
        }
        for id in dead {
            self.points.remove(&id);
        }
    }

    /// Check that every reference resolves.
    pub fn check_integrity(&self) -> Result<(), String> {
        for c in self.curves.values() {
            if c.surfaces.len() < 2 {
                return Err(format!("curve {} lies on fewer than two surfaces", c.id));
            }
            if c.surfaces.iter().any(|&s| s >= self.surfaces.len()) || !c.exceptional_on.is_subset(&c.surfaces) {
                return Err(format!("curve {} references a missing surface", c.id));
            }
        }
        for p in self.points.values() {
            if p.curves.iter().any(|c| !self.curves.contains_key(c)) {
                return Err(format!("point {} references a missing curve", p.id));
            }
            if p.marks.contains(&Mark::Separated) && p.marks.len() > 1 {
                return Err(format!("point {} is both separated and marked", p.id));
            }
        }
        let labels: BTreeSet<&String> = self.surfaces.iter().map(|s| &s.label).collect();
        if labels.len() != self.surfaces.len() {
            return Err("duplicate surface labels".into());
        }
        Ok(())
    }
}

fn plane_vec(s: &PlaneSet) -> Vec<usize> {
    s.iter().map(|i| i + 1).collect()
}

/// Label of a plane set as used in center names.
pub fn planes_label(s: &PlaneSet) -> String {
    plane_label(s)
}

mod residual;
pub use residual::residual_report;
