use std::collections::BTreeSet;

use super::{Diagram, Image};
use crate::classify::{Over, ResidualCurve, ResidualSingularities};

/// Curves, pinch points, nodes and meetings left in a fully processed diagram.
pub fn residual_report(d: &Diagram) -> ResidualSingularities {
    let ids: Vec<usize> = d.curves.keys().copied().collect();
    let index = |c: &usize| ids.iter().position(|x| x == c).unwrap();
    let curves = ids
        .iter()
        .map(|&c| ResidualCurve {
            label: d.curve_label(c),
            pinch: d.pinch_count(c),
            over: match d.curves[&c].image {
                Image::Line(_) => Over::Line,
                Image::Point(_) => Over::Point,
            },
        })
        .collect();
    let mut adjacency: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut triple_meetings: BTreeSet<[usize; 3]> = BTreeSet::new();
    for p in d.points.values().filter(|p| p.is_meeting()) {
        let members: Vec<usize> = p.curves.iter().map(index).collect();
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                adjacency.insert((a.min(b), a.max(b)));
            }
        }
        for (i, &a) in members.iter().enumerate() {
            for (j, &b) in members.iter().enumerate().skip(i + 1) {
                for &c in &members[j + 1..] {
                    let mut t = [a, b, c];
                    t.sort_unstable();
                    triple_meetings.insert(t);
                }
            }
        }
    }
    ResidualSingularities {
        curves,
        nodes: 2 * d.node_pairs.len(),
        node_surface: d.node_pairs.first().cloned(),
        triple_meetings: triple_meetings.into_iter().collect(),
        adjacency: adjacency.into_iter().collect(),
    }
}
