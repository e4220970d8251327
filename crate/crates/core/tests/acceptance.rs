//! End-to-end acceptance criteria, one timed check per criterion.

mod common;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::time::{Duration, Instant};

use common::{random_code, ratios, tree, weights};
use mincode::analysis;
use mincode::huffman::{self, TiePolicy, DEFAULT_ENUMERATION_CAP};
use mincode::oracle::{self, CorpusEntry};
use mincode::rational::{from_int, from_ratio};
use mincode::swaps::{self, Certificate, SwapKind, SwapKinds, DEFAULT_CLOSURE_CAP};
use mincode::sync::{self, DEFAULT_SUBSET_CAP};
use mincode::{CanonicalLabel, CodeTree, Source};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn kinds(k: &[SwapKind]) -> SwapKinds {
    SwapKinds::of(k)
}

fn labels(trees: &[CodeTree]) -> BTreeSet<CanonicalLabel> {
    trees.iter().map(CodeTree::canonical_label).collect()
}

fn small_corpus(max_n: usize) -> Vec<CorpusEntry> {
    oracle::corpus().into_iter().filter(|e| e.source.len() <= max_n).collect()
}

fn ex1_trees() -> (CodeTree, CodeTree) {
    let s = ratios(&[(1, 2), (1, 4), (1, 8), (1, 8)]);
    (
        tree(&s, &[("a", "0"), ("b", "10"), ("c", "110"), ("d", "111")]),
        tree(&s, &[("a", "0"), ("b", "11"), ("c", "100"), ("d", "101")]),
    )
}

fn ac1() -> Check {
    let (h1, h2) = ex1_trees();
    let s1 = sync::shortest_sync_string(&h1, DEFAULT_SUBSET_CAP).map_err(|e| e.to_string())?;
    let s2 = sync::shortest_sync_string(&h2, DEFAULT_SUBSET_CAP).map_err(|e| e.to_string())?;
    let (s1, s2) = (s1.string.map(|w| w.to_string()), s2.string.map(|w| w.to_string()));
    ensure(s1.as_deref() == Some("0") && s2.as_deref() == Some("00"), || format!("got {s1:?} and {s2:?}"))
}

fn ac2() -> Check {
    let s = weights(&[4, 2, 2, 2, 2, 1, 1, 1, 1]);
    let common = [("a", "11"), ("c", "011"), ("d", "100"), ("e", "101"), ("h", "0100"), ("i", "0101")];
    let mut w1 = common.to_vec();
    w1.extend([("b", "000"), ("f", "0010"), ("g", "0011")]);
    let mut w2 = common.to_vec();
    w2.extend([("b", "001"), ("f", "0000"), ("g", "0001")]);
    let (h1, h2) = (tree(&s, &w1), tree(&s, &w2));
    let word: Vec<bool> = "0011".chars().map(|c| c == '1').collect();
    ensure(sync::synchronizes(&h1, &word).unwrap(), || "0011 does not synchronize H1".into())?;
    let r2 = sync::shortest_sync_string(&h2, DEFAULT_SUBSET_CAP).map_err(|e| e.to_string())?;
    ensure(!r2.exists && r2.string.is_none(), || format!("H2 reported {:?}", r2.string))
}

fn ac3() -> Check {
    let s = ratios(&[(3, 8), (3, 8), (1, 8), (1, 8)]);
    let h = tree(&s, &[("a", "1"), ("b", "00"), ("c", "010"), ("d", "011")]);
    let c = tree(&s, &[("a", "00"), ("c", "01"), ("b", "10"), ("d", "11")]);
    ensure(h.expected_length() == from_ratio(15, 8), || format!("H: {}", h.expected_length()))?;
    ensure(c.expected_length() == from_int(2), || format!("C: {}", c.expected_length()))?;
    let code = c.to_code();
    let w = analysis::strong_monotonicity_check(&s, &code).unwrap().ok_or("no witness for C")?;
    ensure(w.a_symbols(&s) == ["c", "d"] && w.b_symbols(&s) == ["a"] && (w.i, w.j) == (1, 2), || format!("{w:?}"))?;
    let better = analysis::improve_from_witness(&s, &code, &w).unwrap();
    let len = better.expected_length(&s).unwrap();
    ensure(len == from_ratio(15, 8), || format!("improved length {len}"))
}

fn ac4() -> Check {
    let s = ratios(&[(1, 3), (1, 3), (1, 6), (1, 6)]);
    let h1 = tree(&s, &[("a", "0"), ("b", "10"), ("c", "110"), ("d", "111")]);
    let h2 = tree(&s, &[("a", "00"), ("b", "01"), ("c", "10"), ("d", "11")]);
    let c = tree(&s, &[("a", "00"), ("c", "01"), ("b", "10"), ("d", "11")]);
    let min = oracle::min_expected_length(&s).unwrap();
    ensure(min == from_int(2), || format!("minimum {min}"))?;

    let pp = kinds(&[SwapKind::SameParent, SwapKind::SameProbability]);
    let moves = swaps::swap_equivalent(&h1, &h2, pp, DEFAULT_CLOSURE_CAP).unwrap().ok_or("H1, H2 not equivalent")?;
    let cert = Certificate::from_moves(&h1, &moves).unwrap();
    let text = cert.to_string();
    let parsed: Certificate = text.parse().map_err(|e: String| e)?;
    let end = parsed.replay(&h1).map_err(|e| e.to_string())?;
    ensure(end.canonical_label() == h2.canonical_label(), || format!("certificate ends at {}", end.canonical_label()))?;

    let row = kinds(&[SwapKind::SameRow]);
    ensure(swaps::swap_equivalent(&h1, &h2, row, DEFAULT_CLOSURE_CAP).unwrap().is_none(), || {
        "H1 and H2 same-row equivalent".into()
    })?;
    ensure(swaps::swap_equivalent(&h2, &c, row, DEFAULT_CLOSURE_CAP).unwrap().is_some(), || {
        "C unreachable from H2".into()
    })?;
    for h in [&h1, &h2] {
        let closure = swaps::swap_closure(h, pp, DEFAULT_CLOSURE_CAP);
        ensure(!closure.contains(&c.canonical_label()), || format!("C in closure of {}", h.canonical_label()))?;
    }
    Ok(())
}

fn ac5() -> Check {
    let s = ratios(&[(1, 3), (1, 3), (1, 9), (1, 9), (1, 9)]);
    let h1 = tree(&s, &[("a", "00"), ("b", "01"), ("c", "11"), ("d", "100"), ("e", "101")]);
    let h2 = tree(&s, &[("d", "0000"), ("c", "0001"), ("e", "001"), ("b", "01"), ("a", "1")]);
    let c = s.index_of("c").unwrap();
    ensure(h1.lengths()[c] == 2, || "c not on row 2 of H1".into())?;
    let closure = swaps::swap_closure(&h1, kinds(&[SwapKind::SameProbability]), DEFAULT_CLOSURE_CAP);
    ensure(!closure.truncated, || "closure truncated".into())?;
    ensure(closure.trees.iter().any(|t| t.lengths()[c] == 4), || "no tree with c on row 4".into())?;
    ensure(closure.contains(&h2.canonical_label()), || "H2 not reached".into())
}

struct Exhaustive {
    name: String,
    source: Source,
    trees: Vec<CodeTree>,
    huffman: Vec<CodeTree>,
}

fn exhaustive(max_n: usize) -> Vec<Exhaustive> {
    small_corpus(max_n)
        .into_iter()
        .map(|e| Exhaustive {
            trees: oracle::enumerate_complete_trees(&e.source).unwrap().iter().collect(),
            huffman: huffman::huffman_enumerate(&e.source, DEFAULT_ENUMERATION_CAP).unwrap(),
            name: e.name,
            source: e.source,
        })
        .collect()
}

fn ac6(data: &[Exhaustive]) -> Check {
    for d in data {
        let huffman_lengths: HashSet<Vec<usize>> = d.huffman.iter().map(CodeTree::lengths).collect();
        let min = d.trees.iter().map(CodeTree::expected_length).min().unwrap();
        for t in &d.trees {
            let code = t.to_code();
            let optimal = analysis::is_optimal(&d.source, &code).unwrap();
            let sm = analysis::is_complete(t) && analysis::strong_monotonicity_check(&d.source, &code).unwrap().is_none();
            let le = huffman_lengths.contains(&t.lengths());
            let brute = t.expected_length() == min;
            ensure(optimal == sm && sm == le && le == brute, || {
                format!("{}: {} optimal={optimal} sm={sm} le={le} brute={brute}", d.name, t.canonical_label())
            })?;
        }
    }
    Ok(())
}

fn ac7(data: &[Exhaustive]) -> Check {
    let pp = kinds(&[SwapKind::SameParent, SwapKind::SameProbability]);
    for d in data {
        let start = huffman::huffman_build(&d.source, TiePolicy::default());
        let closure = swaps::swap_closure(&start, pp, DEFAULT_CLOSURE_CAP);
        let got: BTreeSet<CanonicalLabel> = closure.members.iter().cloned().collect();
        ensure(!closure.truncated && got == labels(&d.huffman), || {
            format!("{}: closure {} vs enumerate {}", d.name, got.len(), d.huffman.len())
        })?;
    }
    Ok(())
}

fn ac8(data: &[Exhaustive]) -> Check {
    let rp = kinds(&[SwapKind::SameRow, SwapKind::SameProbability]);
    let row = kinds(&[SwapKind::SameRow]);
    for d in data {
        let optimal = oracle::optimal_set(&d.source).unwrap();
        let start = huffman::huffman_build(&d.source, TiePolicy::default());
        let closure = swaps::swap_closure(&start, rp, DEFAULT_CLOSURE_CAP);
        let got: BTreeSet<CanonicalLabel> = closure.members.iter().cloned().collect();
        ensure(!closure.truncated && got == optimal, || {
            format!("{}: closure {} vs optimal {}", d.name, got.len(), optimal.len())
        })?;

        // A same-row class is the closure of any member, so one closure covers the class.
        let huffman_labels = labels(&d.huffman);
        let mut covered: HashSet<CanonicalLabel> = HashSet::new();
        for t in closure.trees.iter() {
            let label = t.canonical_label();
            if covered.contains(&label) {
                continue;
            }
            let class = swaps::swap_closure(t, row, DEFAULT_CLOSURE_CAP);
            ensure(class.members.iter().any(|m| huffman_labels.contains(m)), || {
                format!("{}: {} has no Huffman tree in its same-row class", d.name, label)
            })?;
            covered.extend(class.members);
        }
    }
    Ok(())
}

fn ac9(data: &[Exhaustive]) -> Check {
    for d in data.iter().filter(|d| d.source.len() <= 5) {
        let class = oracle::swap_classes(&d.trees, kinds(&[SwapKind::SameRow]));
        let lengths: Vec<Vec<usize>> = d.trees.iter().map(CodeTree::lengths).collect();
        for x in 0..d.trees.len() {
            for y in x + 1..d.trees.len() {
                ensure((lengths[x] == lengths[y]) == (class[x] == class[y]), || {
                    format!("{}: {} vs {}", d.name, d.trees[x].canonical_label(), d.trees[y].canonical_label())
                })?;
            }
        }
    }
    Ok(())
}

/// True when every merge step has a single pair of smallest weights.
fn unique_merges(weights: &[u64]) -> bool {
    let mut w = weights.to_vec();
    while w.len() > 2 {
        w.sort_unstable();
        if w[1] == w[2] {
            return false;
        }
        let merged = w[0] + w[1];
        w.drain(..2);
        w.push(merged);
    }
    true
}

fn ac10() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for n in 2..=7usize {
        let mut sources: Vec<Vec<u64>> = vec![(0..n).map(|k| 1u64 << (n - 1 - k.min(n - 2))).collect()];
        while sources.len() < 4 {
            let w: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=40)).collect();
            if unique_merges(&w) {
                sources.push(w);
            }
        }
        for w in sources {
            ensure(unique_merges(&w), || format!("{w:?} has tied merges"))?;
            let s = weights(&w);
            let start = huffman::huffman_build(&s, TiePolicy::default());
            let closure = swaps::swap_closure(&start, kinds(&[SwapKind::SameParent]), DEFAULT_CLOSURE_CAP);
            let enumerated = huffman::huffman_enumerate(&s, DEFAULT_ENUMERATION_CAP).unwrap();
            ensure(closure.len() == 1 << (n - 1) && enumerated.len() == 1 << (n - 1), || {
                format!("{w:?}: closure {} enumerate {}", closure.len(), enumerated.len())
            })?;
        }
    }
    let expected = [(2, 2), (3, 12), (4, 120), (5, 1680), (6, 30240), (7, 665280)];
    for (n, count) in expected {
        let s = weights(&vec![1; n]);
        let all = oracle::enumerate_complete_trees(&s).unwrap();
        let seen = if n <= 6 {
            all.iter().map(|t| t.canonical_label()).collect::<HashSet<_>>().len()
        } else {
            all.iter().count()
        };
        ensure(seen == count && all.count() == count, || format!("n={n}: {seen} trees, expected {count}"))?;
    }
    Ok(())
}

fn ac11() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let random_source = |rng: &mut ChaCha8Rng| {
        let n = rng.gen_range(2..=8);
        weights(&(0..n).map(|_| rng.gen_range(1..=6)).collect::<Vec<_>>())
    };
    let mut incomplete = 0;
    for _ in 0..1000 {
        let s = random_source(&mut rng);
        let (code, unary) = random_code(&s, &mut rng, 0.15);
        let t = CodeTree::from_code(&s, &code).unwrap();
        incomplete += unary as usize;
        ensure(t.is_complete() == !unary && t.is_complete() == (code.kraft_total() == from_int(1)), || {
            format!("{code}")
        })?;
    }
    ensure(incomplete > 100 && incomplete < 900, || format!("only {incomplete} incomplete samples"))?;

    let all = kinds(&SwapKind::ALL);
    let mut pairs = 0;
    while pairs < 1000 {
        let s = random_source(&mut rng);
        let (code, _) = random_code(&s, &mut rng, 0.0);
        let t = CodeTree::from_code(&s, &code).unwrap();
        let moves = swaps::available_swaps(&t, all);
        if moves.is_empty() {
            continue;
        }
        let mv = moves[rng.gen_range(0..moves.len())];
        let after = swaps::node_swap(&t, mv).unwrap();
        ensure(after.expected_length() == t.expected_length(), || format!("{} {mv:?}", t.canonical_label()))?;
        pairs += 1;
    }

    let prob = kinds(&[SwapKind::SameProbability]);
    let mut by_source: HashMap<String, usize> = HashMap::new();
    for e in small_corpus(7) {
        for h in huffman::huffman_enumerate(&e.source, DEFAULT_ENUMERATION_CAP).unwrap() {
            for mv in swaps::available_swaps(&h, prob) {
                let after = swaps::node_swap(&h, mv).unwrap();
                ensure(huffman::is_huffman(&after), || format!("{}: {} {mv:?}", e.name, h.canonical_label()))?;
                *by_source.entry(e.name.clone()).or_default() += 1;
            }
        }
    }
    ensure(by_source.values().sum::<usize>() > 0, || "no same-probability moves exercised".into())
}

fn main() {
    let mut results: Vec<(usize, Check)> = Vec::new();
    let mut run = |id: usize, what: &'static str, limit: Duration, f: &mut dyn FnMut() -> Check| {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let outcome = outcome.and_then(|()| ensure(took <= limit, || format!("took {took:?}, limit {limit:?}")));
        let verdict = if outcome.is_ok() { "PASS" } else { "FAIL" };
        println!("AC{id:<2} {verdict}  {:>9.3}s (limit {:>4}s)  {what}", took.as_secs_f64(), limit.as_secs());
        if let Err(e) = &outcome {
            println!("      {e}");
        }
        results.push((id, outcome));
    };
    let secs = Duration::from_secs;
    run(1, "ex1 shortest synchronizing strings", secs(1), &mut ac1);
    run(2, "ex2 synchronizing string and its absence", secs(5), &mut ac2);
    run(3, "ex3 lengths, witness and improvement", secs(1), &mut ac3);
    run(4, "ex4 swap equivalences", secs(5), &mut ac4);
    run(5, "ex5 same-probability closure", secs(5), &mut ac5);

    let started = Instant::now();
    let data = exhaustive(6);
    let setup = started.elapsed();
    println!("      corpus enumeration: {} sources in {:.3}s", data.len(), setup.as_secs_f64());
    run(6, "optimal iff complete and strongly monotone iff Huffman lengths", secs(300), &mut || ac6(&data));
    run(7, "same-parent/probability closure equals the Huffman set", secs(300), &mut || ac7(&data));
    run(8, "same-row/probability closure equals the optimal set", secs(300), &mut || ac8(&data));
    run(9, "length equivalence iff same-row equivalence", secs(300), &mut || ac9(&data));
    run(10, "Huffman and tree counts", secs(300), &mut ac10);
    run(11, "randomized invariants", secs(300), &mut ac11);

    let failed: Vec<usize> = results.iter().filter(|r| r.1.is_err()).map(|r| r.0).collect();
    if !failed.is_empty() {
        println!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("all {} acceptance criteria passed", results.len());
}
