//! Monodromy weight spectral sequence of a semistable central fiber.
//!
//! Grid positions are `(p, m)` as displayed: column `p`, row `m`, with
//! `E1^{p,m} = ⊕_{j ≥ max(0,p)} H^{m+2p-2j}(S^[2j-p+1])`. The entry contributes
//! to `H^{p+m}` of the limit with weight `m`. The differential runs along rows.

mod cycle;
mod e2;
mod render;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::exact::{Matrix, Rational};
use crate::semistable::StrataComplex;

pub use cycle::{verify_cycle_chain, CycleModel};
pub use e2::{compute_e2, GridDims, LimitReport};
pub use render::{e1_cell, e1_cells, render_e1, render_grid};

pub type Pos = (i32, i32);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpecSeqError {
    #[error("no matrix, annotation or derivation for d1 at (p,m)={map:?}: {detail}")]
    MissingBlock { map: Pos, detail: String },
    #[error("inconsistent ranks: {0}")]
    InconsistentRanks(String),
    #[error("unknown chain label {0}")]
    UnknownLabel(String),
    #[error("malformed cycle model: {0}")]
    BadModel(String),
}

/// Cohomology of all strata of one depth in one degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SummandKey {
    pub depth: usize,
    pub degree: usize,
}

impl SummandKey {
    pub fn name(&self) -> String {
        format!("H^{}(S^[{}])", self.degree, self.depth)
    }

    fn top(&self) -> bool {
        self.degree == 2 * (4 - self.depth)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summand {
    pub key: SummandKey,
    pub twist: usize,
    pub dim: usize,
    /// Dimensions per individual stratum, in stratum order.
    pub parts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct E1Entry {
    pub summands: Vec<Summand>,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct E1Grid {
    pub p_min: i32,
    pub p_max: i32,
    pub entries: BTreeMap<Pos, E1Entry>,
    /// Per depth, per stratum Betti vectors; used to build combinatorial blocks.
    #[serde(skip)]
    strata: Vec<Vec<(Vec<usize>, Vec<usize>)>>,
}

impl E1Grid {
    pub fn dim(&self, pos: Pos) -> usize {
        self.entries.get(&pos).map_or(0, |e| e.dim)
    }

    pub fn columns(&self) -> Vec<i32> {
        (self.p_min..=self.p_max).collect()
    }

    pub(crate) fn strata(&self, depth: usize) -> &[(Vec<usize>, Vec<usize>)] {
        self.strata.get(depth).map_or(&[], |v| v.as_slice())
    }
}

pub fn assemble_e1(s: &StrataComplex) -> E1Grid {
    let depth = s.depth() as i32;
    let mut strata = vec![Vec::new()];
    for a in 1..=3 {
        strata.push(s.strata(a).into_iter().map(|e| (e.vertices, e.betti)).collect::<Vec<_>>());
    }
    let mut entries = BTreeMap::new();
    for p in -(depth - 1)..=(depth - 1) {
        for m in 0..=6 {
            let mut entry = E1Entry::default();
            let mut j = p.max(0);
            while 2 * j - p < depth {
                let a = (2 * j - p + 1) as usize;
                let d = m + 2 * p - 2 * j;
                if d >= 0 && d as usize <= 2 * (4 - a) {
                    let parts: Vec<usize> = strata[a].iter().map(|(_, b)| b[d as usize]).collect();
                    let dim = parts.iter().sum();
                    entry.dim += dim;
                    entry.summands.push(Summand {
                        key: SummandKey { depth: a, degree: d as usize },
                        twist: j as usize,
                        dim,
                        parts,
                    });
                }
                j += 1;
            }
            entries.insert((p, m), entry);
        }
    }
    E1Grid { p_min: -(depth - 1), p_max: depth - 1, entries, strata }
}

/// A rank override with the argument that justifies it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotation {
    pub map: Pos,
    /// Restricts the annotation to one block, given as `[depth, degree]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<[usize; 2]>,
    pub rank: usize,
    pub justification: String,
}

impl Annotation {
    fn block(&self) -> Option<(SummandKey, SummandKey)> {
        let k = |x: [usize; 2]| SummandKey { depth: x[0], degree: x[1] };
        Some((k(self.source?), k(self.target?)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Block {
    Matrix(Matrix<Rational>),
    Rank(usize),
    Zero,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockSlot {
    pub source: SummandKey,
    pub target: SummandKey,
    pub block: Option<Block>,
    pub origin: String,
}

/// The d1 differential leaving one grid position.
#[derive(Debug, Clone, PartialEq)]
pub struct MapDifferential {
    pub source_dim: usize,
    pub target_dim: usize,
    pub blocks: Vec<BlockSlot>,
    /// Full matrix (target × source) when every block is a matrix.
    pub matrix: Option<Matrix<Rational>>,
    pub rank: Option<usize>,
    pub origin: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DifferentialSpec {
    pub maps: BTreeMap<Pos, MapDifferential>,
    pub annotations: Vec<Annotation>,
}

impl DifferentialSpec {
    pub fn rank(&self, pos: Pos) -> usize {
        self.maps.get(&pos).and_then(|m| m.rank).unwrap_or(0)
    }
}

/// Signed coboundary `H^0(S^[a]) -> H^0(S^[a+1])`; components are ordered by index.
fn nerve_coboundary(
    lower: &[(Vec<usize>, Vec<usize>)],
    upper: &[(Vec<usize>, Vec<usize>)],
) -> Matrix<Rational> {
    let mut m = Matrix::zeros(upper.len(), lower.len());
    for (r, (tau, _)) in upper.iter().enumerate() {
        for k in 0..tau.len() {
            let mut face = tau.clone();
            face.remove(k);
            if let Some(c) = lower.iter().position(|(s, _)| *s == face) {
                let sign = if k % 2 == 0 { Rational::one() } else { -Rational::one() };
                m.set(r, c, sign);
            }
        }
    }
    m
}

fn connected(strata: &[(Vec<usize>, Vec<usize>)]) -> bool {
    strata.iter().all(|(_, b)| b.first() == Some(&1) && b.last() == Some(&1))
}

fn automatic_block(e1: &E1Grid, src: SummandKey, tgt: SummandKey) -> Option<(Matrix<Rational>, &'static str)> {
    if tgt.depth == src.depth + 1 && src.degree == 0 {
        let (lo, up) = (e1.strata(src.depth), e1.strata(tgt.depth));
        if connected(lo) && connected(up) {
            return Some((nerve_coboundary(lo, up), "nerve coboundary"));
        }
    }
    if src.depth == tgt.depth + 1 && src.top() && tgt.top() {
        let (lo, up) = (e1.strata(tgt.depth), e1.strata(src.depth));
        if connected(lo) && connected(up) {
            return Some((nerve_coboundary(lo, up).transpose(), "Gysin on top degree, dual to nerve coboundary"));
        }
    }
    None
}

fn block_rank(b: &Block) -> usize {
    match b {
        Block::Matrix(m) => m.rank(),
        Block::Rank(r) => *r,
        Block::Zero => 0,
    }
}

fn assemble(source: &[Summand], target: &[Summand], blocks: &[BlockSlot]) -> Option<Matrix<Rational>> {
    let offsets = |v: &[Summand]| {
        let mut acc = 0;
        v.iter()
            .map(|s| {
                let o = acc;
                acc += s.dim;
                (s.key, o)
            })
            .collect::<BTreeMap<_, _>>()
    };
    let (so, to) = (offsets(source), offsets(target));
    let mut m = Matrix::zeros(target.iter().map(|s| s.dim).sum(), source.iter().map(|s| s.dim).sum());
    for b in blocks {
        match b.block.as_ref()? {
            Block::Matrix(x) => {
                for i in 0..x.rows() {
                    for j in 0..x.cols() {
                        m.set(to[&b.target] + i, so[&b.source] + j, x.get(i, j).clone());
                    }
                }
            }
            Block::Zero => {}
            Block::Rank(_) => return None,
        }
    }
    Some(m)
}

/// Builds d1 from combinatorial blocks, an optional cycle model and rank annotations.
///
/// Maps whose rank cannot be read off directly are resolved by duality
/// `rank(p,m) = rank(-p-1, 6-m)` or by the cycle model, whose left kernel is
/// the cohomology at the model's source position.
pub fn build_d1(
    s: &StrataComplex,
    cm: Option<&CycleModel>,
    annotations: &[Annotation],
) -> Result<DifferentialSpec, SpecSeqError> {
    let e1 = assemble_e1(s);
    let mut maps = BTreeMap::new();
    for (&(p, m), src) in &e1.entries {
        if p == e1.p_max {
            continue;
        }
        let tgt = &e1.entries[&(p + 1, m)];
        let mut md = MapDifferential {
            source_dim: src.dim,
            target_dim: tgt.dim,
            blocks: Vec::new(),
            matrix: None,
            rank: None,
            origin: String::new(),
        };
        if src.dim == 0 || tgt.dim == 0 {
            md.rank = Some(0);
            md.origin = "zero space".into();
            maps.insert((p, m), md);
            continue;
        }
        let ss: Vec<Summand> = src.summands.iter().filter(|x| x.dim > 0).cloned().collect();
        let ts: Vec<Summand> = tgt.summands.iter().filter(|x| x.dim > 0).cloned().collect();
        for a in &ss {
            for b in &ts {
                let (x, y) = (a.key, b.key);
                let restriction = y.depth == x.depth + 1 && y.degree == x.degree;
                let gysin = y.depth + 1 == x.depth && y.degree == x.degree + 2;
                if !restriction && !gysin {
                    continue;
                }
                let mut slot = BlockSlot { source: x, target: y, block: None, origin: String::new() };
                if let Some((mat, why)) = automatic_block(&e1, x, y) {
                    slot.block = Some(Block::Matrix(mat));
                    slot.origin = why.into();
                }
                for an in annotations.iter().filter(|an| an.map == (p, m) && an.block() == Some((x, y))) {
                    match &slot.block {
                        Some(b) if block_rank(b) != an.rank => {
                            return Err(SpecSeqError::InconsistentRanks(format!(
                                "block {} -> {} at {:?}: annotated {} but derived {}",
                                x.name(),
                                y.name(),
                                (p, m),
                                an.rank,
                                block_rank(b)
                            )))
                        }
                        Some(_) => {}
                        None => {
                            slot.block = Some(if an.rank == 0 { Block::Zero } else { Block::Rank(an.rank) });
                            slot.origin = an.justification.clone();
                        }
                    }
                }
                md.blocks.push(slot);
            }
        }
        md.matrix = assemble(&ss, &ts, &md.blocks);
        if let Some(mat) = &md.matrix {
            md.rank = Some(mat.rank());
            md.origin = "matrix".into();
        } else if block_diagonal(&md.blocks) {
            md.rank = Some(md.blocks.iter().map(|b| block_rank(b.block.as_ref().unwrap())).sum());
            md.origin = "blocks".into();
        }
        for an in annotations.iter().filter(|an| an.map == (p, m) && an.source.is_none()) {
            match md.rank {
                Some(r) if r != an.rank => {
                    return Err(SpecSeqError::InconsistentRanks(format!(
                        "map at {:?}: annotated {} but derived {}",
                        (p, m),
                        an.rank,
                        r
                    )))
                }
                Some(_) => {}
                None => {
                    md.rank = Some(an.rank);
                    md.origin = an.justification.clone();
                }
            }
        }
        maps.insert((p, m), md);
    }

    let model = match cm {
        Some(c) => Some((c.map, c.left_kernel_dim()?)),
        None => None,
    };
    loop {
        let mut progress = false;
        let pending: Vec<Pos> = maps.iter().filter(|(_, d)| d.rank.is_none()).map(|(k, _)| *k).collect();
        for (p, m) in pending {
            let dual = (-p - 1, 6 - m);
            if let Some(r) = maps.get(&dual).and_then(|d| d.rank) {
                let md = maps.get_mut(&(p, m)).unwrap();
                md.rank = Some(r);
                md.origin = format!("duality with ({},{})", dual.0, dual.1);
                progress = true;
                continue;
            }
            if let Some((pos, h)) = model {
                if pos == (p, m) {
                    let r_in = if p == e1.p_min { Some(0) } else { maps.get(&(p - 1, m)).and_then(|d| d.rank) };
                    if let Some(r_in) = r_in {
                        let dim = e1.dim((p, m));
                        let r = dim.checked_sub(r_in + h).ok_or_else(|| {
                            SpecSeqError::InconsistentRanks(format!("cycle model kernel {h} too large at {pos:?}"))
                        })?;
                        let md = maps.get_mut(&(p, m)).unwrap();
                        md.rank = Some(r);
                        md.origin = "cycle model kernel".into();
                        progress = true;
                    }
                }
            }
        }
        if !progress {
            break;
        }
    }
    if let Some((&map, md)) = maps.iter().find(|(_, d)| d.rank.is_none()) {
        let missing: Vec<String> = md
            .blocks
            .iter()
            .filter(|b| b.block.is_none())
            .map(|b| format!("{} -> {}", b.source.name(), b.target.name()))
            .collect();
        return Err(SpecSeqError::MissingBlock { map, detail: missing.join(", ") });
    }
    for (&(p, m), md) in &maps {
        let r = md.rank.unwrap();
        if let Some(d) = maps.get(&(-p - 1, 6 - m)) {
            if d.rank != Some(r) {
                return Err(SpecSeqError::InconsistentRanks(format!(
                    "rank {r} at {:?} differs from its dual {:?}",
                    (p, m),
                    d.rank
                )));
            }
        }
    }
    Ok(DifferentialSpec { maps, annotations: annotations.to_vec() })
}

/// True when every block is known and no two blocks share a source or target summand.
fn block_diagonal(blocks: &[BlockSlot]) -> bool {
    let mut srcs = std::collections::BTreeSet::new();
    let mut tgts = std::collections::BTreeSet::new();
    !blocks.is_empty()
        && blocks.iter().all(|b| b.block.is_some() && srcs.insert(b.source) && tgts.insert(b.target))
}
