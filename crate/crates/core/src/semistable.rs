//! Components of the semistable central fiber and the Betti numbers of their strata.
//!
//! After the residual singularities are known, each double curve is blown up, the
//! base is changed by `t -> t^2` and the non-reduced exceptional components are
//! replaced by double covers. Nodes are handled by a small resolution. Only the
//! shapes that occur in the worked catalog are supported.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::classify::ResidualSingularities;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SemistableError {
    #[error("unsupported residual configuration: {0}")]
    UnsupportedConfiguration(String),
    #[error("Betti vector of {0} is not palindromic")]
    NotPalindromic(String),
}

/// Geometry of a threefold component of the central fiber.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ComponentGeometry {
    /// The resolved central Calabi-Yau; its Betti numbers are input data.
    ResolvedCY { betti: [usize; 7] },
    /// Quadric bundle over P^1; each split fiber lists its number of components.
    QuadricBundle { split_fibers: Vec<usize>, cone_fibers: usize },
    /// Double cover of a P^2 bundle over P^1 branched along a conic bundle.
    DoubleCoverP2xP1 { pinch_fibers: usize },
    /// Small resolution around nodes lying on one surface.
    NodeResolution { node_count_on_surface: usize },
}

/// Geometry of a surface or curve stratum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum StratumGeometry {
    ConicBundle { split_fibers: Vec<usize> },
    SmoothQuadric,
    BlownP1xP1 { points: usize },
    SmoothConic,
}

impl ComponentGeometry {
    pub fn betti(&self) -> Vec<usize> {
        match self {
            ComponentGeometry::ResolvedCY { betti } => betti.to_vec(),
            ComponentGeometry::QuadricBundle { split_fibers, cone_fibers } => {
                // rulings are exchanged by monodromy around a cone fiber
                let r = if *cone_fibers == 0 { 2 } else { 1 };
                let b2 = 1 + r + split_fibers.iter().map(|c| c.saturating_sub(1)).sum::<usize>();
                vec![1, 0, b2, 0, b2, 0, 1]
            }
            ComponentGeometry::DoubleCoverP2xP1 { pinch_fibers } => {
                vec![1, 0, 2, pinch_fibers.saturating_sub(2), 2, 0, 1]
            }
            ComponentGeometry::NodeResolution { .. } => vec![1, 0, 3, 0, 3, 0, 1],
        }
    }
}

impl StratumGeometry {
    pub fn betti(&self) -> Vec<usize> {
        match self {
            StratumGeometry::ConicBundle { split_fibers } => {
                let b2 = 2 + split_fibers.iter().map(|c| c.saturating_sub(1)).sum::<usize>();
                vec![1, 0, b2, 0, 1]
            }
            StratumGeometry::SmoothQuadric => vec![1, 0, 2, 0, 1],
            StratumGeometry::BlownP1xP1 { points } => vec![1, 0, 2 + points, 0, 1],
            StratumGeometry::SmoothConic => vec![1, 0, 1],
        }
    }
}

/// Euler characteristic of a Betti vector.
pub fn euler(betti: &[usize]) -> i64 {
    betti
        .iter()
        .enumerate()
        .map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) })
        .sum()
}

pub fn is_palindromic(betti: &[usize]) -> bool {
    betti.iter().eq(betti.iter().rev())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub label: String,
    pub geometry: ComponentGeometry,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleStratum {
    pub pair: (usize, usize),
    pub geometry: StratumGeometry,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleStratum {
    pub triple: (usize, usize, usize),
    pub geometry: StratumGeometry,
}

/// Components of the central fiber with their nonempty intersections.
/// Component 0 is always the resolved Calabi-Yau.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrataComplex {
    pub components: Vec<Component>,
    pub double_strata: Vec<DoubleStratum>,
    pub triple_strata: Vec<TripleStratum>,
}

/// One stratum at a fixed depth, labelled and with its Betti vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StratumEntry {
    pub label: String,
    pub vertices: Vec<usize>,
    pub kind: String,
    pub betti: Vec<usize>,
}

impl StrataComplex {
    /// Largest depth with a nonempty stratum.
    pub fn depth(&self) -> usize {
        if !self.triple_strata.is_empty() {
            3
        } else if !self.double_strata.is_empty() {
            2
        } else {
            1
        }
    }

    /// Strata of the given depth, each as its sorted vertex set.
    pub fn strata(&self, depth: usize) -> Vec<StratumEntry> {
        let label = |vs: &[usize]| {
            vs.iter().map(|&v| self.components[v].label.as_str()).collect::<Vec<_>>().join("∩")
        };
        match depth {
            1 => self
                .components
                .iter()
                .enumerate()
                .map(|(i, c)| StratumEntry {
                    label: c.label.clone(),
                    vertices: vec![i],
                    kind: kind_name(&serde_json::to_value(&c.geometry).unwrap()),
                    betti: c.geometry.betti(),
                })
                .collect(),
            2 => self
                .double_strata
                .iter()
                .map(|d| {
                    let vs = vec![d.pair.0, d.pair.1];
                    StratumEntry {
                        label: label(&vs),
                        vertices: vs,
                        kind: kind_name(&serde_json::to_value(&d.geometry).unwrap()),
                        betti: d.geometry.betti(),
                    }
                })
                .collect(),
            3 => self
                .triple_strata
                .iter()
                .map(|t| {
                    let vs = vec![t.triple.0, t.triple.1, t.triple.2];
                    StratumEntry {
                        label: label(&vs),
                        vertices: vs,
                        kind: kind_name(&serde_json::to_value(&t.geometry).unwrap()),
                        betti: t.geometry.betti(),
                    }
                })
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Betti vector of the disjoint union of all strata of one depth.
    pub fn betti_of_depth(&self, depth: usize) -> Vec<usize> {
        let len = 2 * (4 - depth.min(4)) + 1;
        let mut out = vec![0; len];
        for s in self.strata(depth) {
            for (o, b) in out.iter_mut().zip(&s.betti) {
                *o += b;
            }
        }
        out
    }

    /// Checks that strata reference existing faces and all Betti vectors are palindromic.
    pub fn validate(&self) -> Result<(), SemistableError> {
        let n = self.components.len();
        let pairs: BTreeSet<(usize, usize)> = self.double_strata.iter().map(|d| d.pair).collect();
        for d in &self.double_strata {
            if d.pair.0 >= d.pair.1 || d.pair.1 >= n {
                return Err(SemistableError::UnsupportedConfiguration(format!(
                    "bad pair {:?}",
                    d.pair
                )));
            }
        }
        for t in &self.triple_strata {
            let (a, b, c) = t.triple;
            if !(a < b && b < c) || [(a, b), (a, c), (b, c)].iter().any(|p| !pairs.contains(p)) {
                return Err(SemistableError::UnsupportedConfiguration(format!(
                    "triple {:?} is missing a face",
                    t.triple
                )));
            }
        }
        for depth in 1..=3 {
            for s in self.strata(depth) {
                if !is_palindromic(&s.betti) {
                    return Err(SemistableError::NotPalindromic(s.label));
                }
            }
        }
        Ok(())
    }

    /// Report in the shape of the component and intersection lists.
    pub fn to_report(&self) -> serde_json::Value {
        let level = |d: usize| {
            self.strata(d)
                .into_iter()
                .map(|s| serde_json::json!({"label": s.label, "kind": s.kind, "betti": s.betti}))
                .collect::<Vec<_>>()
        };
        serde_json::json!({
            "components": level(1),
            "double_strata": level(2),
            "triple_strata": level(3),
        })
    }
}

fn kind_name(v: &serde_json::Value) -> String {
    v.get("kind").and_then(|k| k.as_str()).unwrap_or("").to_string()
}

fn unsupported<T>(msg: impl Into<String>) -> Result<T, SemistableError> {
    Err(SemistableError::UnsupportedConfiguration(msg.into()))
}

/// Builds the component catalog of the semistable central fiber.
///
/// Curves through triple points are blown up in order of decreasing number of
/// triple points (ties by index). At each triple point the first-blown curve's
/// component gets a fiber with four components, its intersection with `Y` a
/// fiber with three, and it meets the two partner components in smooth quadrics.
pub fn build_components(
    residual: &ResidualSingularities,
    y_betti: [usize; 7],
) -> Result<StrataComplex, SemistableError> {
    if !is_palindromic(&y_betti) {
        return Err(SemistableError::NotPalindromic("Y".into()));
    }
    let mut components =
        vec![Component { label: "Y".into(), geometry: ComponentGeometry::ResolvedCY { betti: y_betti } }];
    let mut double_strata = Vec::new();
    let mut triple_strata = Vec::new();

    if residual.nodes > 0 {
        if !residual.curves.is_empty() {
            return unsupported("nodes together with double curves");
        }
        components.push(Component {
            label: "Q1".into(),
            geometry: ComponentGeometry::NodeResolution { node_count_on_surface: residual.nodes },
        });
        double_strata.push(DoubleStratum {
            pair: (0, 1),
            geometry: StratumGeometry::BlownP1xP1 { points: residual.nodes },
        });
        let s = StrataComplex { components, double_strata, triple_strata };
        s.validate()?;
        return Ok(s);
    }

    let n = residual.curves.len();
    for &t in &residual.triple_meetings {
        if t.iter().any(|&c| c >= n) || t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
            return unsupported(format!("malformed triple meeting {t:?}"));
        }
    }
    let in_triple = |a: usize, b: usize| {
        residual.triple_meetings.iter().any(|t| t.contains(&a) && t.contains(&b))
    };
    if let Some(&(a, b)) = residual.adjacency.iter().find(|&&(a, b)| !in_triple(a, b)) {
        return unsupported(format!("curves {} and {} meet outside a triple point", a + 1, b + 1));
    }

    let triples_through = |c: usize| residual.triple_meetings.iter().filter(|t| t.contains(&c)).count();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&c| (std::cmp::Reverse(triples_through(c)), c));
    let rank: BTreeMap<usize, usize> = order.iter().enumerate().map(|(r, &c)| (c, r)).collect();

    let mut quad_splits: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut conic_splits: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut meets: BTreeSet<(usize, usize)> = BTreeSet::new();
    for t in &residual.triple_meetings {
        let first = *t.iter().min_by_key(|c| rank[c]).unwrap();
        quad_splits[first].push(4);
        conic_splits[first].push(3);
        for &o in t.iter().filter(|&&o| o != first) {
            let pair = (first.min(o), first.max(o));
            if !meets.insert(pair) {
                return unsupported(format!("curves {} and {} share two triple points", pair.0 + 1, pair.1 + 1));
            }
        }
    }

    for (i, curve) in residual.curves.iter().enumerate() {
        let p = curve.pinch;
        let geometry = if triples_through(i) > 0 {
            if p != 0 && p != 2 {
                return unsupported(format!("curve {} through a triple point has {p} pinch points", i + 1));
            }
            ComponentGeometry::QuadricBundle { split_fibers: quad_splits[i].clone(), cone_fibers: p }
        } else if p == 0 {
            ComponentGeometry::QuadricBundle { split_fibers: Vec::new(), cone_fibers: 0 }
        } else if p % 2 == 0 {
            ComponentGeometry::DoubleCoverP2xP1 { pinch_fibers: p }
        } else {
            return unsupported(format!("isolated double curve with {p} pinch points"));
        };
        components.push(Component { label: format!("Q{}", i + 1), geometry });
        let mut splits = conic_splits[i].clone();
        splits.extend(std::iter::repeat_n(2, p));
        double_strata.push(DoubleStratum {
            pair: (0, i + 1),
            geometry: StratumGeometry::ConicBundle { split_fibers: splits },
        });
    }
    for &(a, b) in &meets {
        double_strata.push(DoubleStratum { pair: (a + 1, b + 1), geometry: StratumGeometry::SmoothQuadric });
        triple_strata.push(TripleStratum { triple: (0, a + 1, b + 1), geometry: StratumGeometry::SmoothConic });
    }

    let s = StrataComplex { components, double_strata, triple_strata };
    s.validate()?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{Over, ResidualCurve};

    fn curves(pinches: &[usize]) -> Vec<ResidualCurve> {
        pinches
            .iter()
            .enumerate()
            .map(|(i, &p)| ResidualCurve { label: format!("l{}", i + 1), pinch: p, over: Over::Line })
            .collect()
    }

    #[test]
    fn quadric_bundle_vectors() {
        let q = ComponentGeometry::QuadricBundle { split_fibers: vec![4, 4], cone_fibers: 0 };
        assert_eq!(q.betti(), vec![1, 0, 9, 0, 9, 0, 1]);
        let q = ComponentGeometry::QuadricBundle { split_fibers: vec![], cone_fibers: 2 };
        assert_eq!(q.betti(), vec![1, 0, 2, 0, 2, 0, 1]);
    }

    #[test]
    fn double_cover_euler_matches_branch() {
        for p in [2usize, 4, 6] {
            let q = ComponentGeometry::DoubleCoverP2xP1 { pinch_fibers: p };
            let branch = StratumGeometry::ConicBundle { split_fibers: vec![2; p] };
            // P^2 bundle over P^1 has Euler characteristic 6
            assert_eq!(euler(&q.betti()), 2 * 6 - euler(&branch.betti()));
        }
    }

    #[test]
    fn node_catalog() {
        let r = ResidualSingularities { nodes: 2, node_surface: Some("E(L12)".into()), ..Default::default() };
        let s = build_components(&r, [1, 0, 70, 2, 70, 0, 1]).unwrap();
        assert_eq!((s.components.len(), s.double_strata.len(), s.triple_strata.len()), (2, 1, 0));
        assert_eq!(s.double_strata[0].geometry, StratumGeometry::BlownP1xP1 { points: 2 });
    }

    #[test]
    fn odd_isolated_pinch_count_is_rejected() {
        let r = ResidualSingularities { curves: curves(&[1]), ..Default::default() };
        assert!(build_components(&r, [1, 0, 1, 0, 1, 0, 1]).is_err());
    }
}
