use std::collections::BTreeMap;

use serde::Serialize;

use super::{Annotation, DifferentialSpec, E1Grid, Pos, SpecSeqError};

/// Dimensions laid out as printed: `rows[0]` is `m = 6`, columns run over `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridDims {
    pub columns: Vec<i32>,
    pub rows: Vec<Vec<usize>>,
}

impl GridDims {
    pub fn from_fn(columns: Vec<i32>, f: impl Fn(Pos) -> usize) -> Self {
        let rows = (0..=6).rev().map(|m| columns.iter().map(|&p| f((p, m))).collect()).collect();
        GridDims { columns, rows }
    }

    pub fn get(&self, (p, m): Pos) -> usize {
        match self.columns.iter().position(|&c| c == p) {
            Some(i) if (0..=6).contains(&m) => self.rows[(6 - m) as usize][i],
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankEntry {
    pub map: Pos,
    pub rank: usize,
    pub origin: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LimitReport {
    pub e1: GridDims,
    pub e2: GridDims,
    pub ranks: Vec<RankEntry>,
    pub betti: [usize; 7],
    /// Weight-graded dimensions of `H^3`, symmetric around weight 3.
    pub h3_weights: Vec<usize>,
    pub pure: bool,
    /// Whether `E2(p,m) = E2(-p, m+2p)` holds everywhere.
    pub weight_symmetric: bool,
    pub euler_e1: i64,
    pub euler_limit: i64,
    pub annotations: Vec<Annotation>,
}

pub fn compute_e2(e1: &E1Grid, d: &DifferentialSpec) -> Result<LimitReport, SpecSeqError> {
    let mut e2 = BTreeMap::new();
    for (&(p, m), entry) in &e1.entries {
        let out = d.rank((p, m));
        let inc = d.rank((p - 1, m));
        let tgt = e1.dim((p + 1, m));
        if out > entry.dim.min(tgt) {
            return Err(SpecSeqError::InconsistentRanks(format!(
                "rank {out} at {:?} exceeds dimensions {} -> {tgt}",
                (p, m),
                entry.dim
            )));
        }
        let dim = entry.dim.checked_sub(out + inc).ok_or_else(|| {
            SpecSeqError::InconsistentRanks(format!(
                "ranks {inc} in and {out} out exceed dim {} at {:?}",
                entry.dim,
                (p, m)
            ))
        })?;
        if let (Some(a), Some(b)) = (
            d.maps.get(&(p - 1, m)).and_then(|x| x.matrix.as_ref()),
            d.maps.get(&(p, m)).and_then(|x| x.matrix.as_ref()),
        ) {
            if !b.mul(a).is_zero() {
                return Err(SpecSeqError::InconsistentRanks(format!("d1∘d1 != 0 through {:?}", (p, m))));
            }
        }
        e2.insert((p, m), dim);
    }

    let mut betti = [0usize; 7];
    let mut euler_e1 = 0i64;
    for (&(p, m), &dim) in &e2 {
        let q = p + m;
        if (0..=6).contains(&q) {
            betti[q as usize] += dim;
        } else if dim != 0 {
            return Err(SpecSeqError::InconsistentRanks(format!("E2 mass outside degrees 0..6 at {:?}", (p, m))));
        }
        let sign = if q.rem_euclid(2) == 0 { 1 } else { -1 };
        euler_e1 += sign * e1.dim((p, m)) as i64;
    }
    let euler_limit = betti.iter().enumerate().map(|(q, &b)| if q % 2 == 0 { b as i64 } else { -(b as i64) }).sum();

    let h3: BTreeMap<i32, usize> = e2.iter().filter(|((p, m), _)| p + m == 3).map(|(&(_, m), &v)| (m, v)).collect();
    let spread = h3.iter().filter(|(_, &v)| v > 0).map(|(&m, _)| (m - 3).abs()).max().unwrap_or(0);
    let h3_weights = (3 - spread..=3 + spread).map(|w| h3.get(&w).copied().unwrap_or(0)).collect();
    let pure = h3.iter().all(|(&m, &v)| m == 3 || v == 0);
    let weight_symmetric = e2.iter().all(|(&(p, m), &v)| e2.get(&(-p, m + 2 * p)).copied().unwrap_or(0) == v);

    let ranks = d
        .maps
        .iter()
        .filter(|(_, md)| md.rank.unwrap_or(0) > 0)
        .map(|(&map, md)| RankEntry { map, rank: md.rank.unwrap(), origin: md.origin.clone() })
        .collect();
    let columns = e1.columns();
    Ok(LimitReport {
        e1: GridDims::from_fn(columns.clone(), |pos| e1.dim(pos)),
        e2: GridDims::from_fn(columns, |pos| e2.get(&pos).copied().unwrap_or(0)),
        ranks,
        betti,
        h3_weights,
        pure,
        weight_symmetric,
        euler_e1,
        euler_limit,
        annotations: d.annotations.clone(),
    })
}
