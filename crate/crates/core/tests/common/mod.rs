//! Independent oracles shared by the property suite and the acceptance run.
#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{rngs::StdRng, Rng};

use octic::exact::{Matrix, Rational};
use octic::forms::Arrangement;
use octic::incidence::{profile, PlaneSet};
use octic::scenario;

/// Rank of integer rows from the largest nonvanishing minor.
pub fn minor_rank(rows: &[[i64; 4]]) -> usize {
    fn det(m: &[Vec<i128>]) -> i128 {
        if m.len() == 1 {
            return m[0][0];
        }
        (0..m.len())
            .map(|c| {
                let sub: Vec<Vec<i128>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &v)| v).collect()).collect();
                let s = if c % 2 == 0 { 1 } else { -1 };
                s * m[0][c] * det(&sub)
            })
            .sum()
    }
    fn choose(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        (0..n).flat_map(|i| choose(i, k - 1).into_iter().map(move |mut v| {
            v.push(i);
            v
        })).collect()
    }
    for k in (1..=rows.len().min(4)).rev() {
        for rs in choose(rows.len(), k) {
            for cs in choose(4, k) {
                let m: Vec<Vec<i128>> = rs.iter().map(|&r| cs.iter().map(|&c| rows[r][c] as i128).collect()).collect();
                if det(&m) != 0 {
                    return k;
                }
            }
        }
    }
    0
}

pub type Oracle = (BTreeSet<PlaneSet>, BTreeSet<(PlaneSet, usize)>);

/// Maximal subsets of rank 2 and rank 3, by exhaustive enumeration.
pub fn brute_force(rows: &[[i64; 4]]) -> Oracle {
    let n = rows.len();
    let rank = |s: &PlaneSet| minor_rank(&s.iter().map(|&i| rows[i]).collect::<Vec<_>>());
    let all: Vec<PlaneSet> = (1u32..(1 << n)).map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect()).collect();
    let maximal = |s: &PlaneSet, r: usize| {
        (0..n).filter(|i| !s.contains(i)).all(|i| {
            let mut t = s.clone();
            t.insert(i);
            rank(&t) > r
        })
    };
    let lines: BTreeSet<PlaneSet> =
        all.iter().filter(|s| s.len() >= 2 && rank(s) == 2 && maximal(s, 2)).cloned().collect();
    let points = all
        .iter()
        .filter(|s| s.len() >= 3 && rank(s) == 3 && maximal(s, 3))
        .map(|s| (s.clone(), lines.iter().filter(|l| l.len() >= 3 && l.is_subset(s)).count()))
        .collect();
    (lines, points)
}

pub fn computed(rows: &[[i64; 4]]) -> Oracle {
    let p = profile(&Arrangement::from_ints(rows)).unwrap();
    let (l, pts) = p.combinatorial();
    (l.into_iter().collect(), pts.into_iter().collect())
}

pub fn distinct(rows: &[[i64; 4]]) -> bool {
    rows.iter().all(|r| r.iter().any(|&x| x != 0))
        && (0..rows.len()).all(|i| (i + 1..rows.len()).all(|j| minor_rank(&[rows[i], rows[j]]) == 2))
}

pub fn arrangement() -> impl Strategy<Value = Vec<[i64; 4]>> {
    prop::collection::vec(prop::array::uniform4(-2i64..=2), 3..=5).prop_filter("distinct planes", |r| distinct(r))
}

/// Integer rows of every bundled scenario fiber with at most five planes.
pub fn corpus() -> Vec<Vec<[i64; 4]>> {
    let mut out = vec![];
    for name in scenario::names() {
        let s = scenario::load(&name).unwrap();
        let Some(eq) = &s.equation else { continue };
        let a = octic::forms::parse_equation(eq).unwrap();
        if a.len() > 5 {
            continue;
        }
        for w in [s.w0(), Rational::from_int(3), Rational::from_int(-5)] {
            let Ok(sp) = a.specialize(&w) else { continue };
            let rows: Option<Vec<[i64; 4]>> = sp
                .forms
                .iter()
                .map(|r| {
                    let mut out = [0i64; 4];
                    for (o, x) in out.iter_mut().zip(r) {
                        if !x.is_integer() {
                            return None;
                        }
                        *o = x.numer().try_into().ok()?;
                    }
                    Some(out)
                })
                .collect();
            if let Some(rows) = rows.filter(|r| distinct(r)) {
                out.push(rows);
            }
        }
    }
    out
}

pub fn random_invertible(rng: &mut StdRng) -> Matrix<Rational> {
    loop {
        let rows: Vec<Vec<Rational>> = (0..4)
            .map(|_| (0..4).map(|_| Rational::new(rng.gen_range(-4..=4), rng.gen_range(1..=3))).collect())
            .collect();
        let m = Matrix::from_rows(rows);
        if m.rank() == 4 {
            return m;
        }
    }
}

