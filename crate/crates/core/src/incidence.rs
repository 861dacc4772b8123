//! Incidence profiles of plane arrangements: maximal multiple lines and
//! points, the octic condition, degenerate parameter values and diffs.

use std::collections::BTreeSet;
use std::fmt::Display;

use serde::Serialize;
use serde_json::{json, Value};

use crate::exact::{poly_det, poly_gcd, rational_roots, Field, Matrix, Poly, Rational, RationalFunction};
use crate::forms::{Arrangement, FormsError, ParamArrangement};

/// Set of 0-based form indices.
pub type PlaneSet = BTreeSet<usize>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IncidenceError {
    #[error("planes {} and {} coincide", .0 + 1, .1 + 1)]
    CoincidentPlanes(usize, usize),
    #[error("expected 8 planes, got {0}")]
    WrongPlaneCount(usize),
    #[error(transparent)]
    Forms(#[from] FormsError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultipleLine {
    pub planes: PlaneSet,
    /// Two points spanning the line, printed coordinate-wise.
    pub basis: [Vec<String>; 2],
}

impl MultipleLine {
    pub fn q(&self) -> usize {
        self.planes.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiplePoint {
    pub planes: PlaneSet,
    pub point: Vec<String>,
    /// Number of lines with q >= 3 through the point.
    pub j: usize,
}

impl MultiplePoint {
    pub fn p(&self) -> usize {
        self.planes.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IncidenceProfile {
    pub n_forms: usize,
    pub lines: Vec<MultipleLine>,
    pub points: Vec<MultiplePoint>,
}

/// 1-based rendering used in every report.
pub fn plane_list(s: &PlaneSet) -> Vec<usize> {
    s.iter().map(|i| i + 1).collect()
}

pub fn plane_label(s: &PlaneSet) -> String {
    let parts: Vec<String> = s.iter().map(|i| (i + 1).to_string()).collect();
    if parts.iter().all(|p| p.len() == 1) {
        parts.concat()
    } else {
        parts.join(",")
    }
}

impl IncidenceProfile {
    pub fn line(&self, planes: &PlaneSet) -> Option<&MultipleLine> {
        self.lines.iter().find(|l| &l.planes == planes)
    }

    pub fn point(&self, planes: &PlaneSet) -> Option<&MultiplePoint> {
        self.points.iter().find(|p| &p.planes == planes)
    }

    pub fn triple_lines(&self) -> impl Iterator<Item = &MultipleLine> {
        self.lines.iter().filter(|l| l.q() >= 3)
    }

    /// The profile as plain labeled combinatorics, without coordinates.
    pub fn combinatorial(&self) -> (Vec<PlaneSet>, Vec<(PlaneSet, usize)>) {
        (
            self.lines.iter().map(|l| l.planes.clone()).collect(),
            self.points.iter().map(|p| (p.planes.clone(), p.j)).collect(),
        )
    }

    pub fn to_report(&self) -> Value {
        json!({
            "n_forms": self.n_forms,
            "lines": self.lines.iter().map(|l| json!({"planes": plane_list(&l.planes), "q": l.q()})).collect::<Vec<_>>(),
            "points": self.points.iter().map(|p| json!({"planes": plane_list(&p.planes), "p": p.p(), "j": p.j, "point": p.point})).collect::<Vec<_>>(),
        })
    }
}

fn rank_of<F: Field>(rows: &[[F; 4]], set: &[usize]) -> usize {
    Matrix::from_rows(set.iter().map(|&i| rows[i].to_vec()).collect()).rank()
}

fn kernel_of<F: Field + Display>(rows: &[[F; 4]], set: &[usize]) -> Vec<Vec<String>> {
    Matrix::from_rows(set.iter().map(|&i| rows[i].to_vec()).collect())
        .rref()
        .kernel
        .iter()
        .map(|v| v.iter().map(|x| x.to_string()).collect())
        .collect()
}

/// Profile of rows over any field: ranks of coefficient submatrices decide coincidences.
pub fn profile_rows<F: Field + Display>(rows: &[[F; 4]]) -> Result<IncidenceProfile, IncidenceError> {
    let n = rows.len();
    for i in 0..n {
        for j in i + 1..n {
            if rank_of(rows, &[i, j]) < 2 {
                return Err(IncidenceError::CoincidentPlanes(i, j));
            }
        }
    }
    let mut line_sets: BTreeSet<PlaneSet> = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            let s: PlaneSet = (0..n).filter(|&k| k == i || k == j || rank_of(rows, &[i, j, k]) == 2).collect();
            line_sets.insert(s);
        }
    }
    let mut point_sets: BTreeSet<PlaneSet> = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if rank_of(rows, &[i, j, k]) != 3 {
                    continue;
                }
                let s: PlaneSet = (0..n)
                    .filter(|&l| [i, j, k].contains(&l) || rank_of(rows, &[i, j, k, l]) == 3)
                    .collect();
                point_sets.insert(s);
            }
        }
    }
    let lines: Vec<MultipleLine> = line_sets
        .into_iter()
        .map(|s| {
            let v: Vec<usize> = s.iter().take(2).copied().collect();
            let k = kernel_of(rows, &v);
            MultipleLine { planes: s, basis: [k[0].clone(), k[1].clone()] }
        })
        .collect();
    let points = point_sets
        .into_iter()
        .map(|s| {
            // Any three independent members cut out the point.
            let v: Vec<usize> = s.iter().copied().collect();
            let mut chosen = vec![];
            for &i in &v {
                chosen.push(i);
                if rank_of(rows, &chosen) < chosen.len() {
                    chosen.pop();
                }
                if chosen.len() == 3 {
                    break;
                }
            }
            let point = kernel_of(rows, &chosen).remove(0);
            let j = lines.iter().filter(|l| l.q() >= 3 && l.planes.is_subset(&s)).count();
            MultiplePoint { planes: s, point, j }
        })
        .collect();
    Ok(IncidenceProfile { n_forms: n, lines, points })
}

pub fn profile(a: &Arrangement) -> Result<IncidenceProfile, IncidenceError> {
    profile_rows(&a.forms)
}

/// Profile over the function field Q(w).
pub fn generic_profile(a: &ParamArrangement) -> Result<IncidenceProfile, IncidenceError> {
    let rows: Vec<[RationalFunction; 4]> = a
        .forms
        .iter()
        .map(|f| f.coeffs.clone().map(RationalFunction::from_poly))
        .collect();
    profile_rows(&rows)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OcticViolation {
    pub planes: Vec<usize>,
    pub kind: String,
    pub multiplicity: usize,
}

/// Octic condition: no q-fold lines with q >= 4, no p-fold points with p >= 6.
pub fn is_octic(p: &IncidenceProfile) -> Result<(bool, Vec<OcticViolation>), IncidenceError> {
    if p.n_forms != 8 {
        return Err(IncidenceError::WrongPlaneCount(p.n_forms));
    }
    let v = local_violations(p);
    Ok((v.is_empty(), v))
}

/// The same multiplicity bounds, applied to any number of planes.
pub fn local_violations(p: &IncidenceProfile) -> Vec<OcticViolation> {
    let mut out = vec![];
    for l in p.lines.iter().filter(|l| l.q() >= 4) {
        out.push(OcticViolation { planes: plane_list(&l.planes), kind: "line".into(), multiplicity: l.q() });
    }
    for pt in p.points.iter().filter(|pt| pt.p() >= 6) {
        out.push(OcticViolation { planes: plane_list(&pt.planes), kind: "point".into(), multiplicity: pt.p() });
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum IncidenceKind {
    NewTripleLine,
    NewPoint,
    PointCollision,
    PointOnNewLine,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NewIncidence {
    pub kind: IncidenceKind,
    /// Plane set of the special line or point.
    pub planes: PlaneSet,
    /// Generic points with at least four planes that end up at this special point.
    pub absorbed: Vec<PlaneSet>,
    /// Triple-line count of the special point (0 for lines).
    pub j: usize,
}

/// Every maximal coincidence of `special` not present in `generic`.
pub fn profile_diff(generic: &IncidenceProfile, special: &IncidenceProfile) -> Vec<NewIncidence> {
    let mut out = vec![];
    for l in special.triple_lines() {
        if generic.line(&l.planes).is_none() {
            out.push(NewIncidence { kind: IncidenceKind::NewTripleLine, planes: l.planes.clone(), absorbed: vec![], j: 0 });
        }
    }
    for p in &special.points {
        if let Some(g) = generic.point(&p.planes) {
            if g.j != p.j {
                out.push(NewIncidence {
                    kind: IncidenceKind::PointOnNewLine,
                    planes: p.planes.clone(),
                    absorbed: vec![g.planes.clone()],
                    j: p.j,
                });
            }
            continue;
        }
        // Generic multiple points (p >= 4) whose planes still meet in a point here.
        let absorbed: Vec<PlaneSet> = generic
            .points
            .iter()
            .filter(|g| g.p() >= 4 && g.planes.is_subset(&p.planes))
            .filter(|g| !special.lines.iter().any(|l| g.planes.is_subset(&l.planes)))
            .map(|g| g.planes.clone())
            .collect();
        let kind = if absorbed.len() >= 2 { IncidenceKind::PointCollision } else { IncidenceKind::NewPoint };
        out.push(NewIncidence { kind, planes: p.planes.clone(), absorbed, j: p.j });
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegenerateValue {
    pub w0: Rational,
    pub special: IncidenceProfile,
    pub changes: Vec<NewIncidence>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FatalDegeneration {
    pub w0: Rational,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegenerateReport {
    pub values: Vec<DegenerateValue>,
    pub fatal: Vec<FatalDegeneration>,
    /// Candidate factors without rational roots, left unclassified.
    pub unresolved: Vec<Poly>,
}

impl DegenerateReport {
    pub fn sigma(&self) -> Vec<Rational> {
        self.values.iter().map(|v| v.w0.clone()).collect()
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    go(0, n, k, &mut vec![], &mut out);
    out
}

/// gcd of all k×k minors of the rows in `set`; zero if they all vanish identically.
fn minor_gcd(a: &ParamArrangement, set: &[usize]) -> Poly {
    let k = set.len();
    let mut g = Poly::zero();
    for cols in subsets(4, k) {
        let m: Vec<Vec<Poly>> = set
            .iter()
            .map(|&i| cols.iter().map(|&c| a.forms[i].coeffs[c].clone()).collect())
            .collect();
        let d = poly_det(&m);
        if !d.is_zero() {
            g = poly_gcd(&g, &d).unwrap();
        }
    }
    g
}

/// Parameter values where the combinatorial type changes.
pub fn degenerate_values(a: &ParamArrangement) -> Result<DegenerateReport, IncidenceError> {
    let generic = generic_profile(a)?;
    let n = a.len();
    let mut candidates: BTreeSet<Rational> = BTreeSet::new();
    let mut unresolved: Vec<Poly> = vec![];
    for k in 1..=4.min(n) {
        for set in subsets(n, k) {
            let g = minor_gcd(a, &set);
            if g.is_zero() || g.is_constant() {
                continue;
            }
            let d = rational_roots(&g).expect("nonzero");
            candidates.extend(d.roots.into_iter().map(|(r, _)| r));
            for (f, _) in d.residual {
                if !unresolved.contains(&f) {
                    unresolved.push(f);
                }
            }
        }
    }
    unresolved.sort_by_key(|p| (p.degree(), p.to_string()));
    let mut values = vec![];
    let mut fatal = vec![];
    for w0 in candidates {
        let special = match a.specialize(&w0) {
            Ok(s) => s,
            Err(e) => {
                fatal.push(FatalDegeneration { w0, reason: e.to_string() });
                continue;
            }
        };
        let sp = match profile(&special) {
            Ok(p) => p,
            Err(e) => {
                fatal.push(FatalDegeneration { w0, reason: e.to_string() });
                continue;
            }
        };
        let changes = profile_diff(&generic, &sp);
        if !changes.is_empty() || generic.combinatorial() != sp.combinatorial() {
            values.push(DegenerateValue { w0, special: sp, changes });
        }
    }
    Ok(DegenerateReport { values, fatal, unresolved })
}
