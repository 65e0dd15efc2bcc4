//! Acceptance suite: one test per criterion, each printing a pass line with
//! its runtime. Run with `cargo test -p trifold --test acceptance`.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use trifold::construct::{construct, is_known_nonsimple, Method};
use trifold::decompose::{find_cyclic_sub_sts, find_sub_sts, SearchBudget, SubDesignResult};
use trifold::design::{
    blocks_from_hooked, blocks_from_skolem, check_coverage, check_coverage_blocks,
    check_short_orbits, check_simple, develop, difference_triple, BaseBlock, Design, Provenance,
};
use trifold::lines::{
    brute_force, repeated_block_system, run_all, short_orbit_system, solve_exact,
    ParametricFamily, SolutionSet,
};
use trifold::sequence::{
    are_position_disjoint, extract_pairs, validate, SequenceKind, SkolemTypeSequence, SymbolSlot,
};
use trifold::tables::{build_sequence, cases};

fn report(criterion: &str, elapsed: Duration, limit: Duration) {
    println!(
        "acceptance {criterion}: PASS ({:.2?} < {:.0?})",
        elapsed, limit
    );
    assert!(
        elapsed < limit,
        "{criterion} exceeded its runtime bound: {elapsed:?} >= {limit:?}"
    );
}

fn sweep_orders() -> impl Iterator<Item = u32> {
    (5..=201u32).step_by(2).filter(|&v| v != 9)
}

fn ts3_9_fixture() -> Design {
    let blocks = [
        [0, 1, 2],
        [0, 2, 7],
        [0, 3, 6],
        [0, 3, 6],
        [0, 3, 6],
        [0, 4, 8],
    ];
    Design::new(
        9,
        3,
        blocks.iter().map(|&b| BaseBlock::new(b, 9).unwrap()).collect(),
        Provenance::Custom("cyclic ts3(9) example".into()),
    )
    .unwrap()
}

/// The sixteen distinct base blocks of the order-33 example, short orbit
/// carried three-fold so the developed multiset is the full triple system.
fn ts3_33_fixture() -> Design {
    let mut blocks: Vec<[u32; 3]> = vec![
        [0, 1, 7],
        [0, 1, 10],
        [0, 1, 15],
        [0, 2, 8],
        [0, 2, 15],
        [0, 2, 17],
        [0, 3, 10],
        [0, 3, 12],
        [0, 3, 17],
        [0, 4, 10],
        [0, 4, 17],
        [0, 4, 12],
        [0, 5, 12],
        [0, 5, 13],
        [0, 5, 14],
    ];
    blocks.extend([[0, 11, 22]; 3]);
    Design::new(
        33,
        3,
        blocks
            .iter()
            .map(|&b| BaseBlock::new(b, 33).unwrap())
            .collect(),
        Provenance::Custom("three disjoint hooked sequences of order 5".into()),
    )
    .unwrap()
}

#[test]
fn criterion_1_worked_example_fidelity() {
    let start = Instant::now();
    let (s8, s8_pairs) = build_sequence(8).unwrap();
    assert_eq!(s8.to_string(), "1,1,8,3,5,7,3,4,6,5,8,4,7,2,6,2");
    let (s12, _) = build_sequence(12).unwrap();
    assert_eq!(
        s12.to_string(),
        "1,1,9,11,3,12,4,3,7,10,4,9,8,5,11,7,6,12,5,10,8,2,6,2"
    );
    let (s16, _) = build_sequence(16).unwrap();
    assert_eq!(
        s16.to_string(),
        "1,1,9,6,4,14,15,11,4,6,13,9,16,7,12,10,8,5,11,14,7,15,5,13,8,10,12,3,16,2,3,2"
    );
    let (hs7, hs7_pairs) = build_sequence(7).unwrap();
    assert_eq!(hs7.to_string(), "1,1,6,7,3,4,5,3,6,4,7,5,2,0,2");

    let d17 = blocks_from_skolem(&s8_pairs, 8).unwrap();
    assert_eq!(d17.v, 17);
    let got17: Vec<[u32; 3]> = d17.base_blocks.iter().map(|b| b.elements()).collect();
    assert_eq!(
        got17,
        vec![
            [0, 1, 2],
            [0, 2, 16],
            [0, 3, 7],
            [0, 4, 12],
            [0, 5, 10],
            [0, 6, 15],
            [0, 7, 13],
            [0, 8, 11],
        ]
    );

    let d15 = blocks_from_hooked(&hs7_pairs, 7).unwrap();
    assert_eq!(d15.v, 15);
    let mut got15: Vec<[u32; 3]> = d15.base_blocks.iter().map(|b| b.elements()).collect();
    got15.sort_unstable();
    // {0,2,1} canonicalizes to {0,1,2}.
    assert_eq!(
        got15,
        vec![
            [0, 1, 2],
            [0, 1, 3],
            [0, 3, 9],
            [0, 4, 11],
            [0, 5, 13],
            [0, 6, 10],
            [0, 7, 12],
        ]
    );
    report("1 (worked-example fidelity)", start.elapsed(), Duration::from_secs(1));
}

#[test]
fn criterion_2_construction_soundness_sweep() {
    let start = Instant::now();
    for v in sweep_orders() {
        let design = construct(v, Method::Auto).unwrap();
        let coverage = check_coverage(&design);
        assert!(coverage.passed(), "coverage failed at v = {v}: {coverage:?}");
        let short = check_short_orbits(&design);
        assert!(short.none_found(), "short orbit at v = {v}");
    }
    report("2 (construction soundness sweep)", start.elapsed(), Duration::from_secs(60));
}

#[test]
fn criterion_3_simplicity_dichotomy() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for v in sweep_orders() {
        let design = construct(v, Method::Auto).unwrap();
        let out = check_simple(&design);
        if let Some(w) = &out.witness {
            failures.push(v);
            if v == 105 {
                let d1 = design.base_blocks[w.first.base_index].elements()[1];
                let d2 = design.base_blocks[w.second.base_index].elements()[1];
                let mut ds = [d1, d2];
                ds.sort_unstable();
                assert_eq!(ds, [13, 24], "v=105 witness should join orbits 13 and 24");
            }
        }
    }
    assert_eq!(failures, vec![105, 129, 153, 177, 201]);
    assert!(failures.iter().all(|&v| is_known_nonsimple(v)));

    // Cross-module: the failing orders are exactly the members with
    // v = 3 (mod 6) of the exception families found by the exact solver.
    let mut predicted = Vec::new();
    for case_report in run_all().unwrap() {
        let case = &cases()[case_report.case_index];
        for e in &case_report.exceptions {
            for (_, _, r) in e.solutions.up_to_r((201 - case.v_of_r.c0) / case.v_of_r.cr) {
                let v = case.v_of_r.eval_r(r);
                if v.rem_euclid(6) == 3 && v <= 201 {
                    predicted.push(v as u32);
                }
            }
        }
    }
    predicted.sort_unstable();
    predicted.dedup();
    assert_eq!(predicted, failures);
    report("3 (simplicity dichotomy)", start.elapsed(), Duration::from_secs(60));
}

#[test]
fn criterion_4_indecomposability_at_desk_scale() {
    let start = Instant::now();
    let budget = SearchBudget::new(1_000_000_000);
    for v in [7u32, 13, 15, 19, 21] {
        let per_v = Instant::now();
        let design = construct(v, Method::Auto).unwrap();
        let search = find_sub_sts(&develop(&design), budget);
        assert_eq!(
            search.result,
            SubDesignResult::AbsentExhaustive,
            "v = {v} should be indecomposable"
        );
        let elapsed = per_v.elapsed();
        println!("  v={v}: absence proved, {} nodes, {elapsed:.2?}", search.nodes);
        assert!(elapsed < Duration::from_secs(600), "v = {v} too slow");
    }
    let fixture = ts3_9_fixture();
    let search = find_sub_sts(&develop(&fixture), budget);
    match &search.result {
        SubDesignResult::Found(blocks) => {
            assert_eq!(blocks.len(), 12);
            assert!(
                check_coverage_blocks(9, 1, blocks).passed(),
                "certificate must be an STS(9)"
            );
        }
        other => panic!("ts3(9) fixture should be decomposable, got {other:?}"),
    }
    report("4 (indecomposability at desk scale)", start.elapsed(), Duration::from_secs(3000));
}

#[test]
fn criterion_5_cyclic_indecomposability() {
    let start = Instant::now();
    let search = find_cyclic_sub_sts(&ts3_9_fixture()).unwrap();
    assert_eq!(search.result, SubDesignResult::AbsentExhaustive);
    for v in sweep_orders() {
        let design = construct(v, Method::Auto).unwrap();
        let search = find_cyclic_sub_sts(&design).unwrap();
        assert_eq!(
            search.result,
            SubDesignResult::AbsentExhaustive,
            "v = {v} admits no cyclic sub-STS"
        );
    }
    report("5 (cyclic indecomposability)", start.elapsed(), Duration::from_secs(10));
}

#[test]
fn criterion_6_exception_case_golden() {
    let start = Instant::now();
    let reports = run_all().unwrap();
    assert!(reports.iter().all(|r| r.short_orbit_exceptions.is_empty()));

    let expected: Vec<(&str, usize, usize, SolutionSet)> = vec![
        (
            "4k",
            3,
            1,
            SolutionSet::Parametric(ParametricFamily::from_offset((0, 6, 4), (2, 2, 3), 2)),
        ),
        ("4k", 3, 2, SolutionSet::Finite(vec![(1, 0, 5)])),
        (
            "4k+1",
            3,
            1,
            SolutionSet::Parametric(ParametricFamily::from_offset((0, 3, 2), (2, 2, 3), 1)),
        ),
        (
            "4k+2",
            3,
            1,
            SolutionSet::Parametric(ParametricFamily::from_offset((0, -2, 0), (2, 2, 3), 2)),
        ),
        (
            "4k+3",
            8,
            1,
            SolutionSet::Parametric(ParametricFamily::from_offset((1, -4, -1), (2, 2, 3), 4)),
        ),
        ("4k+3", 9, 1, SolutionSet::Finite(vec![(0, 1, 6)])),
    ];

    let mut got = Vec::new();
    for r in &reports {
        for e in &r.exceptions {
            got.push((r.case_label, e.row1, e.row2, e.solutions.clone()));
        }
    }
    assert_eq!(got.len(), 6);
    for ((gl, g1, g2, gs), (el, e1, e2, es)) in got.iter().zip(expected.iter()) {
        assert_eq!((gl, g1, g2), (el, e1, e2));
        assert!(gs.same_solutions(es), "family mismatch for {el} {e1},{e2}: {gs:?}");
    }
    report("6 (exception-case golden)", start.elapsed(), Duration::from_secs(5));
}

#[test]
fn criterion_7_oracle_equivalence() {
    let start = Instant::now();
    for case in cases() {
        for row1 in case.rows {
            for row2 in case.rows {
                let system = repeated_block_system(case, row1, row2);
                let exact = solve_exact(&system).unwrap().up_to_r(200);
                let brute = brute_force(&system, 200);
                assert_eq!(exact, brute, "case {} rows {}/{}", case.label, row1.label, row2.label);
            }
        }
        for row in case.rows {
            let system = short_orbit_system(case, row);
            let exact = solve_exact(&system).unwrap().up_to_r(200);
            let brute = brute_force(&system, 200);
            assert_eq!(exact, brute, "case {} short orbit {}", case.label, row.label);
        }
    }
    report("7 (oracle equivalence)", start.elapsed(), Duration::from_secs(30));
}

#[test]
fn criterion_8_order_33_fixture() {
    let start = Instant::now();
    // The fixture really is the disjoint-sequence construction: derive the
    // full orbits from the three order-5 sequences.
    let seqs = [
        "1,1,4,1,1,0,4,2,3,2,0,3",
        "2,3,2,3,3,0,3,4,1,1,0,4",
        "4,5,5,5,4,0,5,5,5,2,0,2",
    ];
    let pair_sets: Vec<_> = seqs
        .iter()
        .map(|s| extract_pairs(&s.parse::<SkolemTypeSequence>().unwrap()).unwrap())
        .collect();
    assert!(are_position_disjoint(&pair_sets));
    let mut derived: Vec<[u32; 3]> = pair_sets
        .iter()
        .flat_map(|ps| ps.iter().map(|p| [0, p.difference, p.second + 5]))
        .collect();
    derived.sort_unstable();

    let fixture = ts3_33_fixture();
    let mut full_orbits: Vec<[u32; 3]> = fixture
        .base_blocks
        .iter()
        .filter(|b| !b.is_short_orbit(33))
        .map(|b| b.elements())
        .collect();
    full_orbits.sort_unstable();
    assert_eq!(derived, full_orbits);

    assert!(check_coverage(&fixture).passed());
    assert!(check_simple(&fixture).passed());
    let short = check_short_orbits(&fixture);
    assert_eq!(short.short_blocks.len(), 3);
    assert!(short
        .short_blocks
        .iter()
        .all(|(_, b)| b.elements() == [0, 11, 22]));
    report("8 (order-33 fixture)", start.elapsed(), Duration::from_secs(1));
}

#[test]
fn criterion_9_property_suite() {
    let start = Instant::now();

    // Perturbed valid sequences must be rejected.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut rejected = 0;
    while rejected < 200 {
        let n = rng.random_range(7..=30u32);
        let (seq, _) = build_sequence(n).unwrap();
        let kind = if n % 4 < 2 {
            SequenceKind::Skolem(n)
        } else {
            SequenceKind::HookedSkolem(n)
        };
        let mut entries = seq.entries().to_vec();
        let value_positions: Vec<usize> = entries
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_hole())
            .map(|(k, _)| k)
            .collect();
        match rng.random_range(0..3u8) {
            0 => {
                let p = value_positions[rng.random_range(0..value_positions.len())];
                let old = entries[p].value().unwrap();
                entries[p] = SymbolSlot::Value(old + rng.random_range(1..=3u32));
            }
            1 => {
                let p = value_positions[rng.random_range(0..value_positions.len())];
                entries[p] = SymbolSlot::Hole;
            }
            _ => {
                entries.pop();
            }
        }
        let perturbed = SkolemTypeSequence::new(entries);
        assert!(
            validate(&perturbed, kind).is_err(),
            "perturbation of order {n} was not rejected"
        );
        rejected += 1;
    }

    // Difference multiset over base blocks covers each difference λ times.
    for v in sweep_orders() {
        let design = construct(v, Method::Auto).unwrap();
        let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
        for b in &design.base_blocks {
            for d in difference_triple(b, v) {
                *counts.entry(d).or_insert(0) += 1;
            }
        }
        for d in 1..=(v - 1) / 2 {
            assert_eq!(counts.get(&d), Some(&3), "difference {d} at v = {v}");
        }
    }
    report("9 (property suite)", start.elapsed(), Duration::from_secs(30));
}
