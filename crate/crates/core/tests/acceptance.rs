//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails or exceeds its time limit.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toughgraph::blocks::{block, case2_graph, complete_bipartite, inflate_triangles, petersen, BlockKind};
use toughgraph::graph::{decode_graph6, encode_graph6};
use toughgraph::oracles::{
    hamiltonian_backtrack, has_hamilton_path, is_hamiltonian, toughness_exact, CutsetWitness, HamiltonLimits,
    Toughness, Verdict,
};
use toughgraph::synth::{check_plan, plan, predicted_toughness, synthesize, CaseId, NonHamiltonicity};
use toughgraph::verify::{
    check_certificate, verify_claim_formula, ClaimGraph, NonHamStatus, ToughnessStatus, VerifyLimits,
};
use toughgraph::{Graph, Rational};

fn r(a: u64, b: u64) -> Rational {
    Rational::of(a, b)
}

fn tau(g: &Graph) -> Toughness {
    toughness_exact(g, 26).expect("within oracle range").value
}

fn claim(c: ClaimGraph, n: usize, value: Rational) {
    let check = verify_claim_formula(c, 26).expect("hypotheses hold");
    assert_eq!(check.n, n, "{c:?}");
    assert_eq!(check.formula, value, "{c:?}");
    assert_eq!(check.oracle, Toughness::Finite(value), "{c:?}");
}

fn criterion_1() {
    let limits = HamiltonLimits::default();
    for kind in BlockKind::ALL {
        let b = block(kind);
        let r = has_hamilton_path(&b.graph, b.x, b.y, &limits).unwrap();
        match kind {
            BlockKind::L4 => assert!(matches!(r.verdict, Verdict::Found(_)), "{kind}"),
            _ => assert_eq!(r.verdict, Verdict::Refuted, "{kind}"),
        }
    }
}

fn criterion_2() {
    assert_eq!(tau(&complete_bipartite(2, 3)), Toughness::Finite(r(2, 3)));
    let g = case2_graph();
    assert_eq!(tau(&g), Toughness::Finite(r(1, 1)));
    assert_eq!(is_hamiltonian(&g, &HamiltonLimits::default()).verdict, Verdict::Refuted);
    assert_eq!(tau(&Graph::cycle(5)), Toughness::Finite(r(1, 1)));
    assert_eq!(tau(&petersen()), Toughness::Finite(r(4, 3)));
    assert_eq!(tau(&Graph::complete(4)), Toughness::Infinite);
}

fn criterion_3() {
    claim(ClaimGraph::L2Join { l: 2, m: 1 }, 9, r(5, 3));
    claim(ClaimGraph::L2Join { l: 3, m: 1 }, 10, r(2, 1));
    claim(ClaimGraph::L2Join { l: 2, m: 2 }, 16, r(8, 5));
}

fn criterion_4() {
    claim(ClaimGraph::L2JoinWithL3 { l: 2, m: 1 }, 11, r(3, 2));
    claim(ClaimGraph::L2JoinWithL3 { l: 3, m: 1 }, 12, r(7, 4));
}

fn criterion_5() {
    claim(ClaimGraph::Mixed { l: 2, m1: 1, m2: 1 }, 17, r(5, 3));
    claim(ClaimGraph::Mixed { l: 2, m1: 1, m2: 0 }, 10, r(2, 1));
    let same = verify_claim_formula(ClaimGraph::L1Join { l: 2, m: 1 }, 26).unwrap();
    assert_eq!(same.formula, r(2, 1));
    assert!(same.passed());
}

fn criterion_6() {
    claim(ClaimGraph::MixedWithL3 { l: 2, m1: 1, m2: 1 }, 19, r(3, 2));
}

fn criterion_7() {
    claim(ClaimGraph::L1JoinWithL4 { l: 2, m: 1 }, 7, r(2, 1));
    claim(ClaimGraph::L1JoinWithL4 { l: 2, m: 2 }, 15, r(2, 1));
}

fn criterion_8() {
    let limits = VerifyLimits::default();
    for (t, n) in [(r(2, 3), 5), (r(1, 1), 7), (r(6, 5), 12), (r(4, 3), 22)] {
        let (g, c) = synthesize(t).unwrap();
        assert_eq!(g.n(), n, "{t}");
        let report = check_certificate(&g, &c, &limits);
        assert!(report.accepted, "{t}: {:?}", report.rejections);
        assert_eq!(report.toughness_status, ToughnessStatus::OracleExact, "{t}");
        assert_eq!(report.oracle_tau, Some(Toughness::Finite(t)));
        assert_ne!(report.nonhamiltonicity_status, NonHamStatus::Failed);
    }
    let c = synthesize(r(4, 3)).unwrap().1;
    assert_eq!((c.case, c.q), (CaseId::ThreePart, 3));
    assert!(matches!(c.nonhamiltonicity, NonHamiltonicity::EdgeCount { lhs, rhs } if lhs > rhs));
}

fn criterion_9() {
    let limits = VerifyLimits::default();
    for (t, n) in [(r(5, 3), 97), (r(7, 4), 60), (r(2, 1), 42), (r(11, 5), 229)] {
        let (g, c) = synthesize(t).unwrap();
        assert_eq!(g.n(), n, "{t}");
        let w = CutsetWitness::evaluate(&g, &c.cutset).expect("cutset separates");
        assert_eq!(w.ratio, t);
        assert_eq!(predicted_toughness(&c.plan()), t);
        let report = check_certificate(&g, &c, &limits);
        assert!(report.accepted, "{t}: {:?}", report.rejections);
        assert_eq!(report.toughness_status, ToughnessStatus::WitnessUpperBoundOnly);
        assert_eq!(report.nonhamiltonicity_status, NonHamStatus::Structural);
        assert!(report.details.iter().any(|d| d.name == "block count" && d.passed));
    }
}

fn criterion_10() {
    let g = inflate_triangles(&petersen()).unwrap();
    assert_eq!(g.n(), 30);
    assert_eq!(hamiltonian_backtrack(&g, u64::MAX).unwrap(), Verdict::Refuted);
    let (h, c) = synthesize(r(3, 2)).unwrap();
    assert_eq!(h, g);
    let w = CutsetWitness::evaluate(&g, &c.cutset).unwrap();
    assert_eq!((w.cutset.len(), w.component_count, w.ratio), (15, 10, r(3, 2)));
    let report = check_certificate(&g, &c, &VerifyLimits::default());
    assert!(report.accepted, "{:?}", report.rejections);
    assert_eq!(report.toughness_status, ToughnessStatus::WitnessUpperBoundOnly);
    assert_eq!(report.nonhamiltonicity_status, NonHamStatus::OracleExhaustive);
}

fn criterion_11() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 1000 {
        let b = rng.gen_range(1..=100u64);
        let a = rng.gen_range(1..=(9 * b) / 4);
        let t = r(a, b);
        if t >= r(9, 4) {
            continue;
        }
        let p = plan(t).unwrap();
        check_plan(&p).unwrap();
        assert_eq!(predicted_toughness(&p), t);
        checked += 1;
    }

    let limits = VerifyLimits::default();
    for t in [r(2, 3), r(1, 1), r(6, 5), r(1, 2)] {
        let (g, c) = synthesize(t).unwrap();
        let mut variants = Vec::new();
        let mut x = c.clone();
        x.cutset.pop();
        variants.push(x);
        let mut x = c.clone();
        x.predicted_tau = r(7, 4);
        variants.push(x);
        let mut x = c.clone();
        x.l += 1;
        variants.push(x);
        let mut x = c.clone();
        x.m += 1;
        variants.push(x);
        let mut x = c.clone();
        x.blocks.push(BlockKind::L1);
        variants.push(x);
        for bad in variants {
            assert!(!check_certificate(&g, &bad, &limits).accepted, "{t}: {bad:?}");
        }
    }

    let mut corpus = vec![petersen(), inflate_triangles(&petersen()).unwrap(), case2_graph()];
    corpus.extend(BlockKind::ALL.iter().map(|&k| block(k).graph));
    for t in [r(1, 3), r(4, 3), r(3, 2), r(5, 3), r(7, 4), r(2, 1), r(11, 5)] {
        corpus.push(synthesize(t).unwrap().0);
    }
    for g in corpus {
        assert_eq!(decode_graph6(&encode_graph6(&g)).unwrap(), g);
    }
}

type Criterion = (u32, &'static str, Duration, fn());

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria: [Criterion; 11] = [
        (1, "block terminal Hamilton paths", secs(1), criterion_1),
        (2, "known toughness values", secs(10), criterion_2),
        (3, "L2 join toughness formula", secs(300), criterion_3),
        (4, "L2 join with L3 toughness formula", secs(60), criterion_4),
        (5, "mixed join toughness formula", secs(1800), criterion_5),
        (6, "mixed join with L3 toughness formula", secs(7200), criterion_6),
        (7, "L1 join with L4 toughness formula", secs(60), criterion_7),
        (8, "end to end, small targets", secs(3600), criterion_8),
        (9, "end to end, structural tier", secs(60), criterion_9),
        (10, "inflated Petersen", secs(300), criterion_10),
        (11, "property suites", secs(600), criterion_11),
    ];
    panic::set_hook(Box::new(|info| eprintln!("  {info}")));
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let ok = panic::catch_unwind(AssertUnwindSafe(run)).is_ok();
        let elapsed = start.elapsed();
        let pass = ok && elapsed <= limit;
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {id:>2} {}: {name} ({:.2}s, limit {}s)",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
