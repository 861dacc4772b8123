use std::collections::BTreeMap;

use octic::classify::{Over, ResidualCurve, ResidualSingularities};
use octic::exact::Rational;
use octic::pipeline;
use octic::scenario;
use octic::semistable::{build_components, ComponentGeometry, StratumGeometry};
use octic::specseq::{assemble_e1, build_d1, compute_e2, verify_cycle_chain, Annotation, SpecSeqError};

fn triple_config() -> ResidualSingularities {
    scenario::load("arr273-w1").unwrap().residual.unwrap()
}

#[test]
fn component_betti_regressions() {
    use ComponentGeometry::*;
    use StratumGeometry::*;
    let cases: Vec<(Vec<usize>, Vec<usize>)> = vec![
        (QuadricBundle { split_fibers: vec![4, 4], cone_fibers: 0 }.betti(), vec![1, 0, 9, 0, 9, 0, 1]),
        (QuadricBundle { split_fibers: vec![4], cone_fibers: 0 }.betti(), vec![1, 0, 6, 0, 6, 0, 1]),
        (QuadricBundle { split_fibers: vec![], cone_fibers: 2 }.betti(), vec![1, 0, 2, 0, 2, 0, 1]),
        (DoubleCoverP2xP1 { pinch_fibers: 4 }.betti(), vec![1, 0, 2, 2, 2, 0, 1]),
        (NodeResolution { node_count_on_surface: 2 }.betti(), vec![1, 0, 3, 0, 3, 0, 1]),
        (ConicBundle { split_fibers: vec![3, 3] }.betti(), vec![1, 0, 6, 0, 1]),
        (ConicBundle { split_fibers: vec![3] }.betti(), vec![1, 0, 4, 0, 1]),
        (ConicBundle { split_fibers: vec![2, 2] }.betti(), vec![1, 0, 4, 0, 1]),
        (SmoothQuadric.betti(), vec![1, 0, 2, 0, 1]),
        (BlownP1xP1 { points: 2 }.betti(), vec![1, 0, 4, 0, 1]),
        (SmoothConic.betti(), vec![1, 0, 1]),
    ];
    for (got, want) in cases {
        assert_eq!(got, want);
    }
}

#[test]
fn triple_configuration_inventory() {
    let c = build_components(&triple_config(), [1, 0, 54, 2, 54, 0, 1]).unwrap();
    assert_eq!((c.components.len(), c.double_strata.len(), c.triple_strata.len()), (8, 13, 6));
    let b2 = |d: usize| c.strata(d).iter().map(|s| s.betti[2]).sum::<usize>();
    let b0 = |d: usize| c.strata(d).iter().map(|s| s.betti[0]).sum::<usize>();
    assert_eq!(b2(2), 42);
    assert_eq!(b2(1) + b0(3), 85);
    let q: Vec<Vec<usize>> = c.components.iter().skip(1).map(|x| x.geometry.betti()).collect();
    assert_eq!(q[0], vec![1, 0, 9, 0, 9, 0, 1]);
    assert_eq!(q[1], vec![1, 0, 6, 0, 6, 0, 1]);
    assert!(q[2..].iter().all(|b| *b == vec![1, 0, 2, 0, 2, 0, 1]));
    let pairs: Vec<(usize, usize)> = c.double_strata.iter().map(|d| d.pair).filter(|p| p.0 > 0).collect();
    assert_eq!(pairs, vec![(1, 2), (1, 3), (1, 4), (1, 5), (2, 6), (2, 7)]);
}

#[test]
fn meeting_outside_a_triple_point_is_unsupported() {
    let r = ResidualSingularities {
        curves: (0..2).map(|i| ResidualCurve { label: format!("c{i}"), pinch: 0, over: Over::Line }).collect(),
        adjacency: vec![(0, 1)],
        ..Default::default()
    };
    assert!(build_components(&r, [1, 0, 1, 0, 1, 0, 1]).is_err());
}

#[test]
fn single_smooth_component_is_its_own_cohomology() {
    let c = build_components(&ResidualSingularities::default(), [1, 0, 5, 2, 5, 0, 1]).unwrap();
    let e1 = assemble_e1(&c);
    assert_eq!(e1.columns(), vec![0]);
    let d = build_d1(&c, None, &[]).unwrap();
    let lim = compute_e2(&e1, &d).unwrap();
    assert_eq!(lim.betti, [1, 0, 5, 2, 5, 0, 1]);
    assert!(lim.pure);
}

#[test]
fn e1_entries_of_the_node_example() {
    let s = scenario::load("arr2-w1").unwrap();
    let c = pipeline::strata_complex(&s).unwrap();
    let e1 = assemble_e1(&c);
    assert_eq!(e1.dim((0, 3)), 2);
    assert_eq!(e1.dim((-1, 4)), 4);
    assert_eq!(e1.entries[&(0, 4)].summands[0].parts, vec![70, 3]);
}

#[test]
fn missing_annotations_are_reported() {
    let s = scenario::load("arr2-w1").unwrap();
    let c = pipeline::strata_complex(&s).unwrap();
    assert!(matches!(build_d1(&c, None, &[]), Err(SpecSeqError::MissingBlock { .. })));
}

#[test]
fn contradicting_annotation_is_rejected() {
    let s = scenario::load("arr273-w1").unwrap();
    let c = pipeline::strata_complex(&s).unwrap();
    let mut ann = s.annotations.clone();
    ann.iter_mut().find(|a| a.map == (-1, 6)).unwrap().rank = 8;
    let cm = s.load_cycle_model().unwrap();
    assert!(matches!(build_d1(&c, cm.as_ref(), &ann), Err(SpecSeqError::InconsistentRanks(_))));
    // a rank larger than the space forces a dimension violation
    let bad = [Annotation { map: (-1, 4), source: Some([2, 2]), target: Some([1, 4]), rank: 9, justification: "test".into() }];
    let s1 = scenario::load("arr2-w1").unwrap();
    let c1 = pipeline::strata_complex(&s1).unwrap();
    let mut ann1 = s1.annotations.clone();
    ann1[0] = bad[0].clone();
    let d = build_d1(&c1, None, &ann1).unwrap();
    assert!(matches!(compute_e2(&assemble_e1(&c1), &d), Err(SpecSeqError::InconsistentRanks(_))));
}

#[test]
fn cycle_model_rank_and_kernel() {
    let cm = scenario::load("arr273-w1").unwrap().load_cycle_model().unwrap().unwrap();
    assert_eq!((cm.matrix.rows(), cm.matrix.cols()), (12, 18));
    assert_eq!(cm.rank(), 11);
    let k = cm.left_kernel();
    assert_eq!(k.len(), 1);
    // normalized so the last entry is 1
    let want: Vec<Rational> = [-1, 1, -1, 1, 1, -1, 1, -1, -1, 1, -1, 1].iter().map(|&x| Rational::from_int(x)).collect();
    assert_eq!(k[0], want);
}

#[test]
fn chain_verification() {
    let cm = scenario::load("arr273-w1").unwrap().load_cycle_model().unwrap().unwrap();
    let labels = cm.generators.rows.clone();
    let kernel = cm.left_kernel().remove(0);
    let chain: BTreeMap<String, Rational> = labels.iter().cloned().zip(kernel).collect();
    assert!(verify_cycle_chain(&cm, &chain).unwrap());
    assert!(verify_cycle_chain(&cm, &BTreeMap::new()).unwrap());
    let single = BTreeMap::from([("e12_1".to_string(), Rational::one())]);
    assert!(!verify_cycle_chain(&cm, &single).unwrap());
    let unknown = BTreeMap::from([("e99_1".to_string(), Rational::one())]);
    assert!(matches!(verify_cycle_chain(&cm, &unknown), Err(SpecSeqError::UnknownLabel(_))));
}

#[test]
fn limits_of_the_three_examples() {
    let want = [
        ("arr2-w1", [1, 0, 69, 4, 69, 0, 1], vec![1, 2, 1], false),
        ("arr34-w1", [1, 0, 49, 4, 49, 0, 1], vec![4], true),
        ("arr273-w1", [1, 0, 37, 4, 37, 0, 1], vec![1, 2, 1], false),
    ];
    for (name, betti, weights, pure) in want {
        let (r, _) = pipeline::ss_report(&pipeline::Subject::parse(name).unwrap()).unwrap();
        assert_eq!(r["betti"], serde_json::json!(betti), "{name}");
        assert_eq!(r["h3_weights"], serde_json::json!(weights), "{name}");
        assert_eq!(r["pure"], pure, "{name}");
        assert_eq!(r["weight_symmetric"], true, "{name}");
    }
}
