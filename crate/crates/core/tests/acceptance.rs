//! Acceptance suite: one test per criterion, each printing a pass line with
//! the checked counts. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines; any violation fails the corresponding test.

mod common;

use bqo::*;
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Criterion 1: reflexivity and transitivity of every registered
/// quasi-order on 1000 sampled triples each.
#[test]
fn acceptance_01_qo_laws() {
    let registered: Vec<(&str, Qo, u64)> = vec![
        ("2-chain", chain2(), 2),
        ("2-antichain", antichain2(), 2),
        ("3-antichain", antichain3(), 3),
        ("omega", Qo::Omega, 5000),
        ("rado", Qo::Rado, 5000),
        ("rado x omega", Qo::product(Qo::Rado, Qo::Omega), 5000),
        ("level(2-antichain)", next_level(&antichain2(), 1), 5),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut checked = 0u64;
    for (name, qo, range) in &registered {
        for _ in 0..1000 {
            let a = qo.enumerate(rng.gen_range(0..*range)).unwrap();
            let b = qo.enumerate(rng.gen_range(0..*range)).unwrap();
            let c = qo.enumerate(rng.gen_range(0..*range)).unwrap();
            for e in [&a, &b, &c] {
                assert!(qo.leq(e, e).unwrap(), "{name}: {e} not reflexive");
            }
            if qo.leq(&a, &b).unwrap() && qo.leq(&b, &c).unwrap() {
                assert!(
                    qo.leq(&a, &c).unwrap(),
                    "{name}: transitivity fails at {a}, {b}, {c}"
                );
            }
            checked += 1;
        }
    }
    println!("acceptance 01 qo laws: pass ({checked} triples, 0 violations)");
}

fn relation_matrix(qo: &Qo, universe: &[VTerm], starred: bool) -> Vec<Vec<bool>> {
    universe
        .iter()
        .map(|x| universe.iter().map(|y| lesssim(qo, x, y, starred)).collect())
        .collect()
}

/// Criterion 2: the hierarchy comparisons are reflexive, transitive, and
/// the strict one implies the weak one — exhaustively on the depth-2
/// universes, plus 1000 random depth-3 terms.
#[test]
fn acceptance_02_lesssim_laws() {
    let mut exhaustive = 0u64;
    for (name, qo) in small_qos() {
        let universe = vterm_universe(&qo, 2, 3);
        let plain = relation_matrix(&qo, &universe, false);
        let star = relation_matrix(&qo, &universe, true);
        let n = universe.len();
        for i in 0..n {
            assert!(plain[i][i] && star[i][i], "{name}: reflexivity at {i}");
        }
        for i in 0..n {
            for j in 0..n {
                if plain[i][j] {
                    assert!(star[i][j], "{name}: strict without weak at ({i},{j})");
                }
                if !plain[i][j] && !star[i][j] {
                    continue;
                }
                for k in 0..n {
                    if plain[i][j] && plain[j][k] {
                        assert!(plain[i][k], "{name}: transitivity at ({i},{j},{k})");
                    }
                    if star[i][j] && star[j][k] {
                        assert!(star[i][k], "{name}: weak transitivity at ({i},{j},{k})");
                    }
                }
            }
        }
        exhaustive += (n * n) as u64;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut random_checked = 0u64;
    for (name, qo) in small_qos() {
        let atoms = qo.all_elements().unwrap();
        let terms: Vec<VTerm> = (0..1000).map(|_| random_vterm(&mut rng, &atoms, 3)).collect();
        for t in &terms {
            assert!(lesssim(&qo, t, t, false), "{name}: random reflexivity");
            assert!(lesssim(&qo, t, t, true), "{name}: random weak reflexivity");
        }
        for _ in 0..1000 {
            let x = &terms[rng.gen_range(0..terms.len())];
            let y = &terms[rng.gen_range(0..terms.len())];
            let z = &terms[rng.gen_range(0..terms.len())];
            for starred in [false, true] {
                if lesssim(&qo, x, y, starred) && lesssim(&qo, y, z, starred) {
                    assert!(lesssim(&qo, x, z, starred), "{name}: random transitivity");
                }
            }
            if lesssim(&qo, x, y, false) {
                assert!(lesssim(&qo, x, y, true), "{name}: random implication");
            }
            random_checked += 1;
        }
    }
    println!(
        "acceptance 02 lesssim laws: pass ({exhaustive} exhaustive pairs, {random_checked} random triples, 0 violations)"
    );
}

/// Criterion 3: `iota` preserves and reflects both comparisons exactly on
/// the depth-2 universes.
#[test]
fn acceptance_03_iota_preservation_reflection() {
    let mut pairs = 0u64;
    for (name, qo) in small_qos() {
        let universe = vterm_universe(&qo, 2, 3);
        let images: Vec<SeqTerm> = universe.iter().map(|x| iota(&qo, x).unwrap()).collect();
        for starred in [false, true] {
            let matrix = relation_matrix(&qo, &universe, starred);
            for (i, u) in images.iter().enumerate() {
                for (j, v) in images.iter().enumerate() {
                    let emb = embeds_bool(&qo, u, v, starred).unwrap();
                    assert_eq!(
                        matrix[i][j], emb,
                        "{name}: iota mismatch at ({i},{j}) starred={starred}: {:?} vs {:?}",
                        universe[i], universe[j]
                    );
                    pairs += 1;
                }
            }
        }
    }
    println!("acceptance 03 iota preservation/reflection: pass ({pairs} pairs, exact)");
}

/// Criterion 4: the round trip `eta(iota(x))` is equivalent to `x` on the
/// same universes.
#[test]
fn acceptance_04_roundtrip() {
    let mut checked = 0u64;
    for (name, qo) in small_qos() {
        for x in vterm_universe(&qo, 2, 3) {
            for starred in [false, true] {
                assert!(
                    roundtrip_check(&qo, &x, starred).unwrap(),
                    "{name}: roundtrip fails on {x:?} starred={starred}"
                );
                checked += 1;
            }
        }
    }
    println!("acceptance 04 eta/iota round trip: pass ({checked} terms, 0 violations)");
}

/// Criterion 5: the greedy embedding agrees with the dynamic-programming
/// oracle on all pairs of words of length up to 8, and every positive
/// verdict carries a validating witness.
#[test]
fn acceptance_05_word_oracle() {
    let mut pairs = 0u64;
    let mut positives = 0u64;
    for (name, qo) in small_qos() {
        let atoms = qo.all_elements().unwrap();
        let words = index_words_up_to(atoms.len() as u8, 8);
        let terms: Vec<SeqTerm> = words.iter().map(|w| word_term(&atoms, w)).collect();
        let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
        let chunk = words.len().div_ceil(threads);
        let totals: Vec<(u64, u64)> = std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for lo in (0..words.len()).step_by(chunk.max(1)) {
                let hi = (lo + chunk).min(words.len());
                let (qo, words, terms) = (&qo, &words, &terms);
                handles.push(scope.spawn(move || {
                    let mut oracle = WordOracle::new(qo);
                    let mut pairs = 0u64;
                    let mut positives = 0u64;
                    for i in lo..hi {
                        for j in 0..words.len() {
                            for weak in [false, true] {
                                let got = embeds(qo, &terms[i], &terms[j], weak).unwrap();
                                let expect = oracle.embeds(&words[i], &words[j], weak);
                                assert_eq!(
                                    got.holds(),
                                    expect,
                                    "{name}: oracle mismatch weak={weak} u={} v={}",
                                    terms[i], terms[j]
                                );
                                if let EmbedResult::Embeds(w) = &got {
                                    validate_witness(qo, &terms[i], &terms[j], w).unwrap();
                                    positives += 1;
                                }
                                pairs += 1;
                            }
                        }
                    }
                    (pairs, positives)
                }));
            }
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        for (p, q) in totals {
            pairs += p;
            positives += q;
        }
    }
    println!(
        "acceptance 05 embeddability oracle: pass ({pairs} pairs, {positives} witnesses validated)"
    );
}

/// Criterion 6: the level-one Rado downsets are pairwise incomparable in
/// both directions, cross-checked against brute-force membership on a
/// fragment large enough to contain every generator.
#[test]
fn acceptance_06_rado_badness() {
    let sets: Vec<CoUpset> = (1..=15).map(|n| rado_bad_downset(n).unwrap()).collect();
    // Pairs with second coordinate <= 17; all generators of B1..B15 fall in
    // this fragment, which makes the brute-force comparison exact.
    let fragment: Vec<(u64, u64)> = (0..17u64)
        .flat_map(|k| ((k + 1)..=17).map(move |l| (k, l)))
        .collect();
    let mut checks = 0u64;
    for n in 1..=15u64 {
        for m in 1..=15u64 {
            let sub = couset_subset(&sets[(n - 1) as usize], &sets[(m - 1) as usize]).unwrap();
            let brute = fragment
                .iter()
                .all(|&(k, l)| !rado_member_brute(n, k, l) || rado_member_brute(m, k, l));
            assert_eq!(sub, brute, "criterion vs brute force at B{n} <= B{m}");
            if n != m {
                assert!(!sub, "B{n} <= B{m} should fail");
            }
            checks += 1;
        }
        // Membership itself agrees with the closed form on the fragment.
        for &(k, l) in &fragment {
            assert_eq!(
                sets[(n - 1) as usize].member(&Element::pair(k, l)).unwrap(),
                rado_member_brute(n, k, l),
                "membership mismatch for B{n} at ({k},{l})"
            );
        }
    }
    println!("acceptance 06 rado badness: pass ({checks} directed pairs, exact vs brute force)");
}

/// Criterion 7: the descending chain built from the first ten Rado downsets
/// descends strictly at every step, each step certified by a witness.
#[test]
fn acceptance_07_level_two_descent() {
    let prefix: Vec<CoUpset> = (1..=10).map(|n| rado_bad_downset(n).unwrap()).collect();
    let chain = descend_chain(&prefix).unwrap();
    assert_eq!(chain.sets.len(), 10);
    assert_eq!(chain.steps.len(), 10);
    let full = CoUpset::full(chain.sets[0].base.clone());
    for (i, step) in chain.steps.iter().enumerate() {
        let upper = if i == 0 { &full } else { &chain.sets[i - 1] };
        assert!(
            upper.member(&step.witness).unwrap(),
            "step {i}: witness not in the upper set"
        );
        assert!(
            !chain.sets[i].member(&step.witness).unwrap(),
            "step {i}: witness not excluded below"
        );
        // And the chain is nested.
        if i > 0 {
            assert!(couset_subset(&chain.sets[i], &chain.sets[i - 1]).unwrap());
        }
    }
    println!("acceptance 07 level-2 descent: pass (10/10 steps certified)");
}

/// Criterion 8: unwinding the truncated Rado prefix yields an array bad on
/// every step pair of its domain, with first components in the supports.
#[test]
fn acceptance_08_unwinding_badness() {
    let prefix = rado_trunc_prefix(4, 12);
    assert!(check_bad_prefix(&Qo::Rado, &prefix, false));
    let arr = unwind(&Qo::Rado, &prefix, 2, false).unwrap();
    arr.verify_badness().unwrap();
    assert_eq!(arr.domain.len(), 6, "all pairs over four indices land");
    let mut step_pairs = 0u64;
    for sigma in &arr.domain {
        for tau in &arr.domain {
            if triangleleft(sigma, tau).unwrap() {
                let vs = &arr.values[sigma];
                let vt = &arr.values[tau];
                assert!(!arr.qo.leq(vs, vt).unwrap(), "bad pair {sigma:?} {tau:?}");
                step_pairs += 1;
            }
        }
        let Element::Tuple { l, .. } = &arr.values[sigma] else {
            panic!("strict values are pairs");
        };
        assert!(
            supp(&prefix[sigma[0] as usize]).contains(l),
            "first component outside the support at {sigma:?}"
        );
    }
    println!(
        "acceptance 08 unwinding badness: pass ({step_pairs} step pairs bad, supports verified)"
    );
}

/// Criterion 9: winding the identity Rado array recovers the truncated
/// downsets up to equivalence, for the first ten indices.
#[test]
fn acceptance_09_wind_unwind_roundtrip() {
    let arr = TameArray::rado_identity();
    let j_cap = 12u64;
    let bound = j_cap * (j_cap + 1) / 2;
    let mut ok = 0;
    for n in 1..=10u64 {
        let wound = wind(&arr, n, j_cap).unwrap();
        let trunc = truncate_downset(&rado_bad_downset(n).unwrap(), bound).unwrap();
        assert!(
            sim_equiv(&Qo::Rado, &wound, &trunc, true),
            "wind({n}) not weakly equivalent to the truncated downset"
        );
        assert!(
            sim_equiv(&Qo::Rado, &wound, &trunc, false),
            "wind({n}) not equivalent to the truncated downset"
        );
        ok += 1;
    }
    println!("acceptance 09 wind/unwind round trip: pass ({ok}/10)");
}

/// Criterion 10: the truncated homogeneous-set search succeeds on 500
/// random pair colorings at the finite Ramsey bound R(4,4) = 18.
#[test]
fn acceptance_10_truncated_clopen_ramsey() {
    let front = FrontTemplate::uniform(2);
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut found = 0u32;
    for round in 0..500 {
        let mut table = BTreeMap::new();
        for i in 0..18u64 {
            for j in (i + 1)..18 {
                table.insert(format!("{i},{j}"), rng.gen_range(0..2u8));
            }
        }
        let coloring = |sigma: &[u64]| -> u8 { table[&format!("{},{}", sigma[0], sigma[1])] };
        let h = ramsey_homogeneous(&front, &coloring, 4, 18);
        assert!(h.is_some(), "no homogeneous set in round {round}");
        let h = h.unwrap();
        let c0 = coloring(&[h[0], h[1]]);
        for a in 0..4 {
            for b in (a + 1)..4 {
                assert_eq!(coloring(&[h[a], h[b]]), c0, "not homogeneous in round {round}");
            }
        }
        found += 1;
    }
    println!("acceptance 10 truncated clopen ramsey: pass ({found}/500 colorings)");
}

/// Criterion 11: scanning the size-ordered stream of regular terms finds a
/// good pair within the first 200 terms, over both two-element orders.
#[test]
fn acceptance_11_goodness_scan() {
    for (name, qo) in [("2-antichain", antichain2()), ("2-chain", chain2())] {
        let terms = enumerate_terms(&qo, 2, 2, 200).unwrap();
        assert_eq!(terms.len(), 200);
        let mut witness = None;
        'outer: for j in 1..terms.len() {
            for i in 0..j {
                if embeds_bool(&qo, &terms[i], &terms[j], false).unwrap() {
                    witness = Some((i, j));
                    break 'outer;
                }
            }
        }
        let (i, j) = witness.unwrap_or_else(|| panic!("{name}: no good pair in 200 terms"));
        println!(
            "acceptance 11 goodness scan [{name}]: pass (good pair at ({i},{j}): {} embeds into {})",
            terms[i], terms[j]
        );
    }
}

/// Criterion 12: cofinal embeddability against plain embeddability on
/// indecomposables: implied by it on indecomposable right arguments,
/// implying it on indecomposable left arguments, coinciding when both are;
/// with the discriminating example behaving as stated.
#[test]
fn acceptance_12_indecomposability_laws() {
    let mut pairs = 0u64;
    for (name, qo) in [("2-antichain", antichain2()), ("2-chain", chain2())] {
        let terms = enumerate_terms(&qo, 2, 2, 30).unwrap();
        let indec: Vec<bool> = (0..terms.len())
            .map(|i| is_indecomposable(&qo, &terms[i], false).unwrap())
            .collect();
        for (i, u) in terms.iter().enumerate() {
            for (j, v) in terms.iter().enumerate() {
                let emb = embeds_bool(&qo, u, v, false).unwrap();
                let cof = cofembeds(&qo, u, v, false).unwrap();
                let tails = cofembeds_by_tails(&qo, u, v, false).unwrap();
                assert_eq!(cof, tails, "{name}: dual cofinal routes disagree on {u}, {v}");
                if indec[i] && cof {
                    assert!(emb, "{name}: indecomposable left, cof without emb: {u}, {v}");
                }
                if indec[j] && emb {
                    assert!(cof, "{name}: indecomposable right, emb without cof: {u}, {v}");
                }
                if indec[i] && indec[j] {
                    assert_eq!(emb, cof, "{name}: relations differ on indecomposables: {u}, {v}");
                }
                pairs += 1;
            }
        }
    }

    // The discriminating example.
    let qo = antichain2();
    let a = SeqTerm::Atom(Element::name("a0"));
    let b = SeqTerm::Atom(Element::name("a1"));
    let rep_a = SeqTerm::rep(vec![a]).unwrap();
    let u = SeqTerm::cat(vec![b, rep_a.clone()]).unwrap();
    assert!(cofembeds(&qo, &u, &rep_a, false).unwrap());
    assert!(!embeds_bool(&qo, &u, &rep_a, false).unwrap());
    println!("acceptance 12 indecomposability laws: pass ({pairs} pairs, discriminator verified)");
}
