//! The eleven local degeneration types and their residual singularities.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::incidence::{IncidenceKind, IncidenceProfile, NewIncidence, PlaneSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LocalDegenerationType {
    NewL3,
    NewP40,
    P51toP52,
    TwoP41toP52,
    TwoP41toP51,
    P40toP52,
    NewP41,
    P40toP41,
    P40toP51,
    P50toP52,
    P50toP51,
}

impl LocalDegenerationType {
    pub const ALL: [LocalDegenerationType; 11] = [
        Self::NewL3,
        Self::NewP40,
        Self::P51toP52,
        Self::TwoP41toP52,
        Self::TwoP41toP51,
        Self::P40toP52,
        Self::NewP41,
        Self::P40toP41,
        Self::P40toP51,
        Self::P50toP52,
        Self::P50toP51,
    ];

    /// Position in the catalogue, starting at 1.
    pub fn number(self) -> usize {
        Self::ALL.iter().position(|&t| t == self).unwrap() + 1
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.to_string() == s)
    }
}

impl fmt::Display for LocalDegenerationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("unclassifiable degeneration on planes {planes:?}: {reason}")]
    Unclassifiable { planes: Vec<usize>, reason: String },
}

/// Where a residual double curve lies in P^3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Over {
    /// Over a multiple line of the special fiber.
    Line,
    /// Contracted to a multiple point of the special fiber.
    Point,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualCurve {
    pub label: String,
    pub pinch: usize,
    pub over: Over,
}

/// Singularities left in the central fiber once generic fibers are resolved.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ResidualSingularities {
    pub curves: Vec<ResidualCurve>,
    pub nodes: usize,
    pub node_surface: Option<String>,
    /// Triples of curve indices meeting at one point.
    pub triple_meetings: Vec<[usize; 3]>,
    /// Pairs of curve indices that meet.
    pub adjacency: Vec<(usize, usize)>,
}

impl ResidualSingularities {
    pub fn is_empty(&self) -> bool {
        self.curves.is_empty() && self.nodes == 0
    }

    pub fn pinch_multiset(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.curves.iter().map(|c| c.pinch).collect();
        v.sort_unstable();
        v
    }

    /// Same curves up to relabeling: pinch counts, nodes, meetings and
    /// triple points must correspond under one permutation of the curves.
    pub fn same_shape(&self, other: &ResidualSingularities) -> bool {
        if self.curves.len() != other.curves.len()
            || self.nodes != other.nodes
            || self.pinch_multiset() != other.pinch_multiset()
            || self.adjacency.len() != other.adjacency.len()
            || self.triple_meetings.len() != other.triple_meetings.len()
        {
            return false;
        }
        let n = self.curves.len();
        let edges = |r: &ResidualSingularities| -> BTreeSet<(usize, usize)> {
            r.adjacency.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect()
        };
        let triples = |r: &ResidualSingularities, perm: &[usize]| -> BTreeSet<[usize; 3]> {
            r.triple_meetings
                .iter()
                .map(|t| {
                    let mut m = t.map(|i| perm[i]);
                    m.sort_unstable();
                    m
                })
                .collect()
        };
        let ident: Vec<usize> = (0..n).collect();
        let target_edges = edges(other);
        let target_triples = triples(other, &ident);
        let mut perm: Vec<usize> = (0..n).collect();
        permutations(&mut perm, 0, &mut |p| {
            self.curves.iter().enumerate().all(|(i, c)| other.curves[p[i]].pinch == c.pinch)
                && edges(self).iter().map(|&(a, b)| (p[a].min(p[b]), p[a].max(p[b]))).collect::<BTreeSet<_>>()
                    == target_edges
                && triples(self, p) == target_triples
        })
    }

    pub fn to_report(&self) -> Value {
        json!({
            "curves": self.curves.iter().map(|c| json!({"label": c.label, "pinch": c.pinch, "over": c.over})).collect::<Vec<_>>(),
            "nodes": self.nodes,
            "node_surface": self.node_surface,
            "triple_meetings": self.triple_meetings,
            "adjacency": self.adjacency,
        })
    }
}

/// Heap-style enumeration; stops early once `f` returns true.
fn permutations(v: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if k == v.len() {
        return f(v);
    }
    for i in k..v.len() {
        v.swap(k, i);
        if permutations(v, k + 1, f) {
            v.swap(k, i);
            return true;
        }
        v.swap(k, i);
    }
    false
}

fn curve(label: &str, pinch: usize, over: Over) -> ResidualCurve {
    ResidualCurve { label: label.into(), pinch, over }
}

/// The catalogued outcome of each local type.
pub fn residual_outcome(t: LocalDegenerationType) -> ResidualSingularities {
    use LocalDegenerationType::*;
    use Over::*;
    let single = |p: usize, over: Over| ResidualSingularities { curves: vec![curve("c1", p, over)], ..Default::default() };
    match t {
        NewL3 => single(0, Line),
        NewP40 => ResidualSingularities { nodes: 2, node_surface: Some("exceptional".into()), ..Default::default() },
        P51toP52 => single(1, Line),
        TwoP41toP52 => ResidualSingularities {
            curves: vec![curve("c1", 3, Line), curve("c2", 1, Line)],
            ..Default::default()
        },
        TwoP41toP51 => single(4, Point),
        P40toP52 => ResidualSingularities {
            curves: vec![
                curve("55'", 0, Point),
                curve("5'5''", 2, Point),
                curve("5'5'''", 2, Point),
                curve("55''", 0, Line),
                curve("55'''", 0, Line),
            ],
            triple_meetings: vec![[0, 1, 3], [0, 2, 4]],
            adjacency: vec![(0, 1), (0, 2), (0, 3), (0, 4), (1, 3), (2, 4)],
            ..Default::default()
        },
        NewP41 => single(1, Line),
        P40toP41 => single(0, Line),
        P40toP51 => ResidualSingularities {
            curves: vec![curve("c1", 2, Point), curve("c2", 2, Point), curve("c3", 0, Line)],
            triple_meetings: vec![[0, 1, 2]],
            adjacency: vec![(0, 1), (0, 2), (1, 2)],
            ..Default::default()
        },
        P50toP52 => ResidualSingularities {
            curves: vec![curve("c1", 1, Line), curve("c2", 1, Line)],
            ..Default::default()
        },
        P50toP51 => single(1, Line),
    }
}

fn unclassifiable(planes: &PlaneSet, reason: &str) -> ClassifyError {
    ClassifyError::Unclassifiable { planes: planes.iter().map(|i| i + 1).collect(), reason: reason.into() }
}

/// Match one new incidence against the catalogue.
///
/// A new triple line is NewL3 unless it lies inside a changed special
/// point, in which case that point decides the type.
pub fn classify_local(
    change: &NewIncidence,
    generic: &IncidenceProfile,
    special: &IncidenceProfile,
) -> Result<LocalDegenerationType, ClassifyError> {
    use LocalDegenerationType::*;
    let planes = &change.planes;
    let sp_point = || special.point(planes).ok_or_else(|| unclassifiable(planes, "special point missing"));
    match change.kind {
        IncidenceKind::NewTripleLine => {
            let host = crate::incidence::profile_diff(generic, special)
                .into_iter()
                .find(|c| c.kind != IncidenceKind::NewTripleLine && planes.is_subset(&c.planes));
            match host {
                Some(h) => classify_local(&h, generic, special),
                None => Ok(NewL3),
            }
        }
        IncidenceKind::PointOnNewLine => {
            let g = generic.point(planes).ok_or_else(|| unclassifiable(planes, "no generic point"))?;
            match (g.p(), g.j, sp_point()?.j) {
                (4, 0, 1) => Ok(P40toP41),
                (5, 0, 2) => Ok(P50toP52),
                (5, 0, 1) => Ok(P50toP51),
                (5, 1, 2) => Ok(P51toP52),
                _ => Err(unclassifiable(planes, "point gains triple lines in an uncatalogued way")),
            }
        }
        IncidenceKind::NewPoint => {
            let sp = sp_point()?;
            match change.absorbed.as_slice() {
                [] => match (sp.p(), sp.j) {
                    (4, 0) => Ok(NewP40),
                    (4, 1) => Ok(NewP41),
                    _ => Err(unclassifiable(planes, "new point of uncatalogued multiplicity")),
                },
                [g] => {
                    let gp = generic.point(g).ok_or_else(|| unclassifiable(planes, "absorbed point missing"))?;
                    match (gp.p(), gp.j, sp.p(), sp.j) {
                        (4, 0, 5, 2) => Ok(P40toP52),
                        (4, 0, 5, 1) => Ok(P40toP51),
                        _ => Err(unclassifiable(planes, "point grows in an uncatalogued way")),
                    }
                }
                _ => Err(unclassifiable(planes, "unexpected absorbed points")),
            }
        }
        IncidenceKind::PointCollision => {
            let sp = sp_point()?;
            let all_p41 = change.absorbed.len() == 2
                && change.absorbed.iter().all(|g| generic.point(g).is_some_and(|x| x.p() == 4 && x.j == 1));
            match (all_p41, sp.p(), sp.j) {
                (true, 5, 2) => Ok(TwoP41toP52),
                (true, 5, 1) => Ok(TwoP41toP51),
                _ => Err(unclassifiable(planes, "collision of uncatalogued points")),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassifiedChange {
    /// The changed special point or standalone line.
    pub planes: Vec<usize>,
    pub kind: IncidenceKind,
    pub result: Result<LocalDegenerationType, String>,
}

/// Group the changes of one special fiber by locality and classify each group.
///
/// New triple lines inside a changed special point belong to that point.
pub fn classify_changes(
    changes: &[NewIncidence],
    generic: &IncidenceProfile,
    special: &IncidenceProfile,
) -> Vec<ClassifiedChange> {
    let hosts: Vec<&NewIncidence> = changes.iter().filter(|c| c.kind != IncidenceKind::NewTripleLine).collect();
    changes
        .iter()
        .filter(|c| {
            c.kind != IncidenceKind::NewTripleLine || !hosts.iter().any(|h| c.planes.is_subset(&h.planes))
        })
        .map(|c| ClassifiedChange {
            planes: c.planes.iter().map(|i| i + 1).collect(),
            kind: c.kind,
            result: classify_local(c, generic, special).map_err(|e| e.to_string()),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_lookups() {
        assert_eq!(residual_outcome(LocalDegenerationType::NewP40).nodes, 2);
        let r = residual_outcome(LocalDegenerationType::TwoP41toP51);
        assert_eq!(r.pinch_multiset(), vec![4]);
        let r = residual_outcome(LocalDegenerationType::P40toP41);
        assert_eq!(r.pinch_multiset(), vec![0]);
    }

    #[test]
    fn shape_comparison_ignores_labels_and_order() {
        let a = residual_outcome(LocalDegenerationType::P40toP52);
        let mut b = a.clone();
        b.curves.rotate_left(2);
        // Rotate indices so the same graph is described differently.
        let map = |i: usize| (i + 3) % 5;
        b.adjacency = a.adjacency.iter().map(|&(x, y)| (map(x), map(y))).collect();
        b.triple_meetings = a.triple_meetings.iter().map(|t| t.map(map)).collect();
        assert!(a.same_shape(&b));
        b.adjacency.pop();
        b.adjacency.push((1, 2));
        assert!(!a.same_shape(&b));
    }

    #[test]
    fn names_round_trip() {
        for t in LocalDegenerationType::ALL {
            assert_eq!(LocalDegenerationType::from_name(&t.to_string()), Some(t));
        }
        assert_eq!(LocalDegenerationType::P50toP51.number(), 11);
    }
}
