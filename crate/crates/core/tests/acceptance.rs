//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Expected values are written out here, independently of the scenario
//! goldens. Criteria that cannot hold are listed in `KNOWN` with the reason;
//! they print FAIL but do not fail the run. Any other failure does.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use rand::{rngs::StdRng, Rng, SeedableRng};
use serde_json::{json, Value};

use common::*;
use octic::exact::{Matrix, Rational};
use octic::incidence::profile;
use octic::pipeline::{self, Subject};
use octic::scenario;
use octic::semistable::{is_palindromic, ComponentGeometry, StratumGeometry};
use octic::specseq::{assemble_e1, build_d1, compute_e2, verify_cycle_chain};

const KNOWN: &[(&str, &str)] = &[
    (
        "1b",
        "three sample equations have further degenerate values besides 0 (new incidences at w=1, w=-1, w=1/2); \
         the type at 0 is still correct",
    ),
    (
        "5c",
        "the printed chain is not annihilated by the printed matrix; the kernel is spanned by the chain with the \
         signs of the e14 and e15 pairs flipped",
    ),
];

const TYPES: [(&str, &str, &[usize], usize); 11] = [
    ("new-l3", "NewL3", &[0], 0),
    ("new-p40", "NewP40", &[], 2),
    ("p51-to-p52", "P51toP52", &[1], 0),
    ("two-p41-to-p52", "TwoP41toP52", &[1, 3], 0),
    ("two-p41-to-p51", "TwoP41toP51", &[4], 0),
    ("p40-to-p52", "P40toP52", &[0, 0, 0, 2, 2], 0),
    ("new-p41", "NewP41", &[1], 0),
    ("p40-to-p41", "P40toP41", &[0], 0),
    ("p40-to-p51", "P40toP51", &[0, 2, 2], 0),
    ("p50-to-p52", "P50toP52", &[1, 1], 0),
    ("p50-to-p51", "P50toP51", &[1], 0),
];

struct Outcome {
    id: &'static str,
    title: String,
    ok: bool,
    detail: String,
}

fn subject(n: &str) -> Subject {
    Subject::parse(n).unwrap()
}

fn criterion_1() -> Vec<Outcome> {
    let mut types_ok = 0;
    let mut sigma_ok = 0;
    let mut extra = vec![];
    for (name, ty, _, _) in TYPES {
        let r = pipeline::sigma_report(&subject(name)).unwrap();
        if r["type"] == ty {
            types_ok += 1;
        }
        if r["sigma"] == json!(["0"]) && r["fatal"] == json!([]) {
            sigma_ok += 1;
        } else {
            extra.push(format!("{name}: sigma {} fatal {}", r["sigma"], r["fatal"]));
        }
    }
    vec![
        Outcome {
            id: "1a",
            title: "local type at w=0 for the eleven sample equations".into(),
            ok: types_ok == 11,
            detail: format!("{types_ok}/11"),
        },
        Outcome {
            id: "1b",
            title: "degenerate set is exactly {0}".into(),
            ok: sigma_ok == 11,
            detail: format!("{sigma_ok}/11; {}", extra.join("; ")),
        },
    ]
}

fn criterion_2() -> Outcome {
    let mut good = 0;
    let mut bad = vec![];
    for (name, _, pinch, nodes) in TYPES {
        let t = pipeline::trace(&subject(name), None).unwrap();
        if t.residual.pinch_multiset() == pinch && t.residual.nodes == nodes {
            good += 1;
        } else {
            bad.push(format!("{name}: {:?} nodes {}", t.residual.pinch_multiset(), t.residual.nodes));
        }
    }
    Outcome {
        id: "2",
        title: "residual singularities of all eleven traces".into(),
        ok: good == 11,
        detail: format!("{good}/11 {}", bad.join("; ")),
    }
}

fn cells(rows: &[&[&str]]) -> Value {
    json!(rows)
}

fn example(
    id: &'static str,
    name: &str,
    e1: Value,
    e2: Value,
    betti: [usize; 7],
    pure: bool,
) -> Outcome {
    let (r, _) = pipeline::ss_report(&subject(name)).unwrap();
    let checks = [
        ("E1", r["e1_cells"] == e1),
        ("E2", r["e2"] == e2),
        ("betti", r["betti"] == json!(betti)),
        ("purity", r["pure"] == pure),
    ];
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    Outcome {
        id,
        title: format!("{name}: E1, E2, betti {betti:?}, pure={pure}"),
        ok: failed.is_empty(),
        detail: if failed.is_empty() { "all entries match".into() } else { format!("mismatch in {failed:?}") },
    }
}

fn criterion_5() -> Vec<Outcome> {
    let s = scenario::load("arr273-w1").unwrap();
    let c = pipeline::strata_complex(&s).unwrap();
    let e1 = assemble_e1(&c);
    let got = [
        c.components.len(),
        c.double_strata.len(),
        c.triple_strata.len(),
        e1.dim((-1, 4)),
        e1.dim((0, 4)),
        e1.dim((0, 3)),
        e1.dim((-1, 6)),
    ];
    let cm = s.load_cycle_model().unwrap().unwrap();
    let kernel = cm.left_kernel();
    let printed_chain: BTreeMap<String, Rational> = cm
        .generators
        .rows
        .iter()
        .map(|l| (l.clone(), Rational::from_int(if l.ends_with("_1") { 1 } else { -1 })))
        .collect();
    let chain_ok = verify_cycle_chain(&cm, &printed_chain).unwrap();
    let e2 = json!([
        [0, 0, 1, 0, 0],
        [0, 0, 0, 0, 0],
        [0, 1, 37, 0, 0],
        [0, 0, 2, 0, 0],
        [0, 0, 37, 1, 0],
        [0, 0, 0, 0, 0],
        [0, 0, 1, 0, 0]
    ]);
    let (r, _) = pipeline::ss_report(&subject("arr273-w1")).unwrap();
    vec![
        Outcome {
            id: "5a",
            title: "triple-point example E1 dimensions (8, 13, 6, 42, 85, 2, 13)".into(),
            ok: got == [8, 13, 6, 42, 85, 2, 13],
            detail: format!("{got:?}"),
        },
        Outcome {
            id: "5b",
            title: "12x18 matrix: rank 11, kernel dimension 1".into(),
            ok: cm.rank() == 11 && kernel.len() == 1,
            detail: format!("rank {}, kernel {}", cm.rank(), kernel.len()),
        },
        Outcome {
            id: "5c",
            title: "kernel spanned by the printed chain".into(),
            ok: chain_ok,
            detail: format!(
                "kernel vector {:?}",
                kernel.first().map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>())
            ),
        },
        Outcome {
            id: "5d",
            title: "triple-point example E2, betti (1,0,37,4,37,0,1), not pure".into(),
            ok: r["e2"] == e2 && r["betti"] == json!([1, 0, 37, 4, 37, 0, 1]) && r["pure"] == false,
            detail: format!("betti {}", r["betti"]),
        },
    ]
}

fn criterion_6() -> Outcome {
    use ComponentGeometry::*;
    use StratumGeometry::*;
    let got = [
        QuadricBundle { split_fibers: vec![4, 4], cone_fibers: 0 }.betti(),
        QuadricBundle { split_fibers: vec![4], cone_fibers: 0 }.betti(),
        QuadricBundle { split_fibers: vec![], cone_fibers: 2 }.betti(),
        DoubleCoverP2xP1 { pinch_fibers: 4 }.betti(),
        NodeResolution { node_count_on_surface: 2 }.betti(),
        ConicBundle { split_fibers: vec![3, 3] }.betti(),
        ConicBundle { split_fibers: vec![3] }.betti(),
        SmoothQuadric.betti(),
        SmoothConic.betti(),
    ];
    let want: [&[usize]; 9] = [
        &[1, 0, 9, 0, 9, 0, 1],
        &[1, 0, 6, 0, 6, 0, 1],
        &[1, 0, 2, 0, 2, 0, 1],
        &[1, 0, 2, 2, 2, 0, 1],
        &[1, 0, 3, 0, 3, 0, 1],
        &[1, 0, 6, 0, 1],
        &[1, 0, 4, 0, 1],
        &[1, 0, 2, 0, 1],
        &[1, 0, 1],
    ];
    let good = got.iter().zip(want).filter(|(g, w)| g.as_slice() == *w).count();
    Outcome { id: "6", title: "component Betti regressions".into(), ok: good == 9, detail: format!("{good}/9") }
}

fn criterion_7() -> Vec<Outcome> {
    let mut out = vec![];

    let mut rng = StdRng::seed_from_u64(2024);
    let mut invariant = 0;
    let a = octic::forms::parse_equation("xyz(x+y+z)(x-y+w)").unwrap();
    for _ in 0..100 {
        let m = random_invertible(&mut rng);
        let w0 = Rational::new(rng.gen_range(-2..=2), 1);
        let before = profile(&a.specialize(&w0).unwrap()).unwrap();
        let after = profile(&a.transform(&m).specialize(&w0).unwrap()).unwrap();
        invariant += usize::from(before.combinatorial() == after.combinatorial());
    }
    out.push(Outcome {
        id: "7a",
        title: "projective invariance of profiles".into(),
        ok: invariant == 100,
        detail: format!("{invariant}/100 coordinate changes"),
    });

    let corpus = corpus();
    let agree = corpus.iter().filter(|r| computed(r) == brute_force(r)).count();
    out.push(Outcome {
        id: "7b",
        title: "brute-force incidence oracle on the corpus".into(),
        ok: agree == corpus.len() && !corpus.is_empty(),
        detail: format!("{agree}/{} arrangements", corpus.len()),
    });

    let mut good = 0;
    for _ in 0..500 {
        let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let rows: Vec<Vec<Rational>> =
            (0..r).map(|_| (0..c).map(|_| Rational::new(rng.gen_range(-3..=3), rng.gen_range(1..=3))).collect()).collect();
        let m = Matrix::from_rows(rows);
        let rr = m.rref();
        let ok = rr.rank + rr.kernel.len() == c && rr.kernel.iter().all(|v| m.mul_vec(v).iter().all(|x| x.is_zero()));
        good += usize::from(ok);
    }
    out.push(Outcome { id: "7c", title: "rref kernels".into(), ok: good == 500, detail: format!("{good}/500") });

    let mut dd = (0, 0);
    let mut euler = 0;
    let mut palin = (0, 0);
    for name in ["arr2-w1", "arr34-w1", "arr273-w1"] {
        let s = scenario::load(name).unwrap();
        let c = pipeline::strata_complex(&s).unwrap();
        let e1 = assemble_e1(&c);
        let d = build_d1(&c, s.load_cycle_model().unwrap().as_ref(), &s.annotations).unwrap();
        for (&(p, m), md) in &d.maps {
            if let (Some(b), Some(a)) = (md.matrix.as_ref(), d.maps.get(&(p - 1, m)).and_then(|x| x.matrix.as_ref())) {
                dd.0 += 1;
                dd.1 += usize::from(b.mul(a).is_zero());
            }
        }
        let lim = compute_e2(&e1, &d).unwrap();
        euler += usize::from(lim.euler_e1 == lim.euler_limit);
        let mut vectors: Vec<Vec<usize>> = (1..=3).flat_map(|k| c.strata(k)).map(|s| s.betti).collect();
        vectors.push(lim.betti.to_vec());
        palin.0 += vectors.len();
        palin.1 += vectors.iter().filter(|v| is_palindromic(v)).count();
    }
    out.push(Outcome {
        id: "7d",
        title: "d1 squares to zero on matrix blocks".into(),
        ok: dd.0 > 0 && dd.0 == dd.1,
        detail: format!("{}/{} compositions", dd.1, dd.0),
    });
    out.push(Outcome { id: "7e", title: "Euler characteristic E1 vs limit".into(), ok: euler == 3, detail: format!("{euler}/3") });
    out.push(Outcome {
        id: "7f",
        title: "Betti vectors are palindromic".into(),
        ok: palin.0 == palin.1,
        detail: format!("{}/{}", palin.1, palin.0),
    });
    out
}

/// Every report and DOT artifact of the bundled scenarios, serialized.
fn artifacts() -> Vec<String> {
    let mut out = vec![];
    for n in scenario::names() {
        let s = subject(&n);
        let sc = s.scenario().unwrap();
        if sc.equation.is_some() {
            out.push(serde_json::to_string_pretty(&pipeline::sigma_report(&s).unwrap()).unwrap());
            let (r, dots) = pipeline::resolve_report(&s, None).unwrap();
            out.push(serde_json::to_string_pretty(&r).unwrap());
            out.extend(dots);
        }
        if sc.y_betti.is_some() {
            let (r, text) = pipeline::ss_report(&s).unwrap();
            out.push(serde_json::to_string_pretty(&r).unwrap());
            out.push(text);
        }
    }
    out
}

fn criterion_8() -> Outcome {
    let (a, b) = (artifacts(), artifacts());
    Outcome {
        id: "8",
        title: "two full runs give byte-identical artifacts".into(),
        ok: a == b,
        detail: format!("{} artifacts, {} bytes", a.len(), a.iter().map(|x| x.len()).sum::<usize>()),
    }
}

fn main() -> ExitCode {
    let mut results: Vec<(Outcome, f64)> = vec![];
    let mut timed = |f: &dyn Fn() -> Vec<Outcome>| {
        let t = Instant::now();
        let r = f();
        let secs = t.elapsed().as_secs_f64();
        results.extend(r.into_iter().map(|o| (o, secs)));
    };
    timed(&criterion_1);
    timed(&|| vec![criterion_2()]);
    timed(&|| {
        vec![example(
            "3",
            "arr2-w1",
            cells(&[
                &["1", "1⊕1", "0"],
                &["0", "0", "0"],
                &["4", "70⊕3", "1"],
                &["0", "2", "0"],
                &["1", "70⊕3", "4"],
                &["0", "0", "0"],
                &["0", "1⊕1", "1"],
            ]),
            json!([[0, 1, 0], [0, 0, 0], [1, 69, 0], [0, 2, 0], [0, 69, 1], [0, 0, 0], [0, 1, 0]]),
            [1, 0, 69, 4, 69, 0, 1],
            false,
        )]
    });
    timed(&|| {
        vec![example(
            "4",
            "arr34-w1",
            cells(&[
                &["1", "1⊕1", "0"],
                &["0", "0", "0"],
                &["6", "54⊕2", "1"],
                &["0", "2⊕2", "0"],
                &["1", "54⊕2", "6"],
                &["0", "0", "0"],
                &["0", "1⊕1", "1"],
            ]),
            json!([[0, 1, 0], [0, 0, 0], [0, 49, 0], [0, 4, 0], [0, 49, 0], [0, 0, 0], [0, 1, 0]]),
            [1, 0, 49, 4, 49, 0, 1],
            true,
        )]
    });
    timed(&criterion_5);
    timed(&|| vec![criterion_6()]);
    timed(&criterion_7);
    timed(&|| vec![criterion_8()]);

    let mut unexpected = 0;
    for (o, secs) in &results {
        let known = KNOWN.iter().find(|k| k.0 == o.id);
        let status = if o.ok { "PASS" } else { "FAIL" };
        println!("{status} [{:>2}] {} -- {} ({secs:.2}s)", o.id, o.title, o.detail);
        match (o.ok, known) {
            (false, Some((_, why))) => println!("     known deviation: {why}"),
            (false, None) => unexpected += 1,
            (true, Some(_)) => println!("     listed as a known deviation but passes now"),
            (true, None) => {}
        }
    }
    let passed = results.iter().filter(|r| r.0.ok).count();
    println!("{passed}/{} criteria pass, {unexpected} unexpected failures", results.len());
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
