//! End-to-end acceptance checks. Runs without the libtest harness and prints
//! one PASS/FAIL line per criterion; all comparisons are exact.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use immersion_core::arborescence::{edmonds_feasible, pack_arborescences};
use immersion_core::connectivity::{lambda_value, strong_edge_connectivity};
use immersion_core::generators::{
    con_counterexample_layout, dk_layout, dk_vertex_count, enumerate_cycles_one_chord, gen_complete, gen_fig3,
    gen_no_k22, gen_random_eulerian_irregular, odd_cycle_layout, FIG3_LABELS,
};
use immersion_core::immersion::{
    brute_force_immersion, has_k22, quadratic_pipeline, solve_small_complete, structural_immersion, BruteOutcome,
};
use immersion_core::splitting::{complete_splittings, split_off, ImmersionTrace};
use immersion_core::{Digraph, EdgeId};
use rand::seq::SliceRandom;
use rand::Rng;

use common::*;

/// Brute-force node budget for the searches below.
const BUDGET: u64 = 10_000_000;
/// Cases per property suite.
const PROPERTY_CASES: u64 = 1000;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn dk_properties() -> Outcome {
    let mut pairs = 0;
    for k in 1..=4 {
        let l = dk_layout(k).map_err(|e| e.to_string())?;
        let g = &l.digraph;
        let n = g.vertex_count();
        ensure(g.vertices().all(|v| g.out_degree(v) == k), || {
            format!("k = {k}: outdegree != k")
        })?;
        for u in 0..n {
            for v in u + 1..n {
                pairs += 1;
                let m = lambda(g, u, v).min(lambda(g, v, u));
                ensure(m <= 1, || format!("k = {k}: min lambda({u}, {v}) = {m}"))?;
            }
        }
        // k disjoint paths from v, one into each level-one vertex
        let level_one = l.level_one();
        for v in 0..n {
            let mut cap = capacities(g, 1);
            let sink = n;
            for &x in &level_one {
                if x == v {
                    // the path of length zero
                    cap[v][sink] += 1;
                } else {
                    cap[x][sink] += 1;
                }
            }
            let f = max_flow(cap, v, sink);
            ensure(f as usize == k, || {
                format!("k = {k}: only {f} paths from {v} to level one")
            })?;
        }
    }
    Ok(format!("k = 1..4, {pairs} pairs"))
}

fn no_k22_family() -> Outcome {
    let mut sizes = Vec::new();
    for k in 1..=3 {
        let g = gen_no_k22(k).map_err(|e| e.to_string())?;
        ensure(g.min_out_degree() >= k && g.min_in_degree() >= k, || {
            format!("k = {k}: degree below k")
        })?;
        ensure(has_k22(&g).is_absent(), || {
            format!("k = {k}: has_k22 does not report absence")
        })?;
        // any K2^2 immersion needs a pair with two disjoint paths each way
        let n = g.vertex_count();
        for u in 0..n {
            for v in u + 1..n {
                ensure(lambda(&g, u, v) < 2 || lambda(&g, v, u) < 2, || {
                    format!("k = {k}: pair ({u}, {v}) has lambda >= 2 both ways")
                })?;
            }
        }
        sizes.push(n);
    }
    Ok(format!("vertex counts {sizes:?}"))
}

fn counterexample_connectivity() -> Outcome {
    let f = con_counterexample_layout(4).map_err(|e| e.to_string())?;
    let g = &f.digraph;
    ensure(f.k == 2, || format!("k = {}", f.k))?;
    let n = g.vertex_count();
    let mut min = usize::MAX;
    for u in 0..n {
        for v in 0..n {
            if u != v {
                min = min.min(lambda(g, u, v));
            }
        }
    }
    ensure(min >= 2, || format!("pairwise minimum {min}"))?;
    let lib = strong_edge_connectivity(g).map_err(|e| e.to_string())?;
    ensure(lib == min, || format!("library says {lib}, oracle {min}"))?;
    Ok(format!("{n} vertices, strong edge-connectivity {min}"))
}

fn counterexample_non_immersion() -> Outcome {
    let f = con_counterexample_layout(4).map_err(|e| e.to_string())?;
    let g = &f.digraph;
    let half = dk_vertex_count(f.k);
    let mut without_matching = g.clone();
    for &e in &f.matching {
        without_matching.remove_edge(e).map_err(|e| e.to_string())?;
    }
    for u in 0..half {
        for v in u + 1..half {
            ensure(
                lambda(&without_matching, u, v) < 2 || lambda(&without_matching, v, u) < 2,
                || format!("pair ({u}, {v}) of the D_k part has lambda >= 2 both ways in F - M"),
            )?;
        }
    }
    let r = brute_force_immersion(g, &gen_complete(4), BUDGET);
    match r.outcome {
        BruteOutcome::Found(c) => Err(format!("K4 immersion returned: terminals {:?}", c.terminals)),
        BruteOutcome::NotFound => Ok(format!(
            "proxy holds; exhaustive search finds no K4 ({} nodes)",
            r.nodes
        )),
        BruteOutcome::BudgetExhausted => Ok(format!("proxy holds; search budget-exhausted at {} nodes", r.nodes)),
    }
}

fn edmonds_packing() -> Outcome {
    let mut rng = rng(5);
    let (mut feasible, mut infeasible) = (0, 0);
    for _ in 0..5000 {
        if feasible >= 50 {
            break;
        }
        let n = rng.gen_range(2..=10);
        let p = rng.gen_range(0.3..0.9);
        let g = random_digraph(n, p, &mut rng);
        let count = rng.gen_range(1..=6);
        let roots: Vec<usize> = (0..count).map(|_| rng.gen_range(0..n)).collect();
        let lib = edmonds_feasible(&g, &roots).map_err(|e| e.to_string())?.is_feasible();
        let oracle = packing_feasible_by_cuts(&g, &roots);
        ensure(lib == oracle, || {
            format!(
                "feasibility disagrees on n = {n}, roots {roots:?}:\n{}",
                g.to_edge_list()
            )
        })?;
        if lib {
            feasible += 1;
            let p = pack_arborescences(&g, &roots).map_err(|e| e.to_string())?;
            p.validate(&g)?;
            packing_ok(&g, &roots, &p)?;
        } else {
            infeasible += 1;
            ensure(pack_arborescences(&g, &roots).is_err(), || {
                "packed an infeasible instance".into()
            })?;
        }
    }
    ensure(feasible == 50, || {
        format!("only {feasible} feasible instances generated")
    })?;
    Ok(format!(
        "{feasible} packings checked, {infeasible} infeasible instances agreed"
    ))
}

fn quadratic() -> Outcome {
    let k8 = gen_complete(8);
    let c = quadratic_pipeline(&k8, 3).map_err(|e| e.to_string())?;
    certificate_ok(&k8, &c)?;
    for i in 0..10u64 {
        let n = 8 + (i as usize % 7);
        let g = gen_random_eulerian_irregular(n, 6, i as usize % 3, 100 + i).map_err(|e| e.to_string())?;
        ensure(g.is_simple() && g.is_eulerian() && g.min_out_degree() >= 6, || {
            "bad instance".into()
        })?;
        let c = quadratic_pipeline(&g, 3).map_err(|e| format!("n = {n}, seed {}: {e}", 100 + i))?;
        certificate_ok(&g, &c).map_err(|e| format!("n = {n}: {e}"))?;
    }
    Ok("K8 and 10 random instances, t = 3".into())
}

fn small_solver() -> Outcome {
    let mut confirmed = 0;
    for i in 0..100u64 {
        let t = 3 + (i % 2) as usize;
        let n = (t + 1 + (i as usize / 2) % (13 - t - 1)).min(12);
        let g = gen_random_eulerian_irregular(n, t - 1, (i % 4) as usize, 200 + i).map_err(|e| e.to_string())?;
        ensure(g.is_simple() && g.is_eulerian() && g.min_out_degree() >= t - 1, || {
            "bad instance".into()
        })?;
        let c = solve_small_complete(&g, t, None).map_err(|e| format!("t = {t}, n = {n}, seed {}: {e}", 200 + i))?;
        ensure(c.pattern == gen_complete(t), || "pattern is not complete".into())?;
        certificate_ok(&g, &c).map_err(|e| format!("t = {t}, n = {n}: {e}"))?;
        if n <= 8 {
            let r = brute_force_immersion(&g, &gen_complete(t), BUDGET);
            match r.outcome {
                BruteOutcome::Found(b) => certificate_ok(&g, &b)?,
                other => return Err(format!("exhaustive search disagrees on n = {n}: {other:?}")),
            }
            confirmed += 1;
        }
    }
    Ok(format!("100 instances, {confirmed} confirmed by exhaustive search"))
}

fn structural() -> Outcome {
    let mut shrunk = 0;
    for r in 2..=3usize {
        let mut instances: Vec<Digraph> = (0..10u64)
            .map(|i| gen_random_eulerian_irregular(r + 3 + i as usize, r, (i % 3) as usize, 300 + i).unwrap())
            .collect();
        let mut seed = 0;
        while instances.len() < 20 {
            seed += 1;
            let sizes = [r + 2 + (seed as usize % 3), r + 3];
            if let Some(g) = linked_blobs(&sizes, r, 1 + seed as usize % r, 400 + seed) {
                instances.push(g);
            }
        }
        for g in &instances {
            let s = structural_immersion(g, r).map_err(|e| e.to_string())?;
            let f = &s.digraph;
            let n = f.vertex_count();
            ensure(n > r, || format!("r = {r}: only {n} vertices"))?;
            ensure(f.is_eulerian(), || "not Eulerian".into())?;
            for u in 0..n {
                for v in 0..n {
                    if u != v {
                        ensure(lambda(f, u, v) >= r, || format!("r = {r}: lambda({u}, {v}) < r"))?;
                    }
                }
            }
            ensure(s.extra_edges.len() < r, || format!("|s| = {}", s.extra_edges.len()))?;
            let mut rest = f.clone();
            for &e in &s.extra_edges {
                rest.remove_edge(e).map_err(|e| e.to_string())?;
            }
            ensure(rest.is_simple(), || "f - s is not simple".into())?;
            ensure(s.trace.replay(g).map_err(|e| e.to_string())? == *f, || {
                "trace does not replay".into()
            })?;
            for (k, x) in s.chain.iter().enumerate() {
                for &a in x {
                    for &b in x {
                        if a != b {
                            ensure(lambda(g, a, b) > k, || format!("lambda({a}, {b}) <= {k} inside X_{k}"))?;
                        }
                    }
                }
            }
            if !s.trace.is_empty() {
                shrunk += 1;
            }
        }
    }
    Ok(format!("40 instances, {shrunk} needed shrinking"))
}

fn odd_cycles() -> Outcome {
    let mut counts = Vec::new();
    for k in 1..=2 {
        let l = odd_cycle_layout(k).map_err(|e| e.to_string())?;
        let g = &l.digraph;
        ensure(g.vertices().all(|v| g.out_degree(v) == k), || {
            format!("k = {k}: outdegree != k")
        })?;
        let cycles = enumerate_cycles_one_chord(g, &l.tree_edges).map_err(|e| e.to_string())?;
        ensure(cycles.iter().all(|c| c.len() % 2 == 1), || {
            format!("k = {k}: an even cycle")
        })?;
        if k == 1 {
            ensure(cycles.len() == 1 && cycles[0].len() == 3, || {
                "k = 1: not a single 3-cycle".into()
            })?;
        }
        let ours: BTreeSet<Vec<EdgeId>> = cycles
            .iter()
            .map(|c| {
                let mut e = c.edges.clone();
                e.sort();
                e
            })
            .collect();
        let oracle = all_cycles(g);
        ensure(ours == oracle, || {
            format!("k = {k}: {} cycles, oracle finds {}", ours.len(), oracle.len())
        })?;
        counts.push(ours.len());
    }
    Ok(format!("cycle counts {counts:?}, all odd"))
}

/// Vertex-disjoint pairs among the nontrivial parallel classes.
fn disjoint_parallel_classes(g: &Digraph) -> bool {
    let classes: Vec<(usize, usize)> = g.parallel_classes().iter().map(|c| (c.tail, c.head)).collect();
    classes.iter().enumerate().any(|(i, &(a, b))| {
        classes[i + 1..]
            .iter()
            .any(|&(c, d)| a != c && a != d && b != c && b != d)
    })
}

fn nine_vertex_configuration() -> Outcome {
    let g = gen_fig3();
    let v0 = FIG3_LABELS.iter().position(|&l| l == "v0").unwrap();
    for v in g.vertices() {
        let (o, i) = (g.out_degree(v), g.in_degree(v));
        let ok = if v == v0 { o == 2 && i == 2 } else { o >= 4 && o == i };
        ensure(ok, || format!("{}: degrees {o}/{i}", FIG3_LABELS[v]))?;
    }
    let mut failing = Vec::new();
    for v in g.vertices() {
        let all = complete_splittings(&g, v).map_err(|e| e.to_string())?;
        let bad = all.iter().filter(|(h, _)| !disjoint_parallel_classes(h)).count();
        let weak = all.iter().filter(|(h, _)| h.parallel_classes().len() < 2).count();
        if bad > 0 {
            failing.push(format!(
                "{}: {bad}/{} splittings lack two disjoint classes ({weak} have fewer than two classes)",
                FIG3_LABELS[v],
                all.len()
            ));
        }
    }
    ensure(failing.is_empty(), || {
        format!("degree profile holds; {}", failing.join("; "))
    })?;
    Ok("degree profile holds; every splitting leaves two disjoint classes".into())
}

fn property_suites() -> Outcome {
    let mut rng = rng(11);

    // splitting preserves balance
    for case in 0..PROPERTY_CASES {
        let n = rng.gen_range(3..=9);
        let d = rng.gen_range(1..=(n - 2).min(3));
        let g = gen_random_eulerian_irregular(n, d, rng.gen_range(0..3), case).map_err(|e| e.to_string())?;
        let v = rng.gen_range(0..n);
        let e_in = *g.in_edges(v).choose(&mut rng).unwrap();
        let e_out = *g.out_edges(v).choose(&mut rng).unwrap();
        let (h, _) = split_off(&g, e_in, e_out).map_err(|e| e.to_string())?;
        ensure(h.is_balanced(), || format!("split case {case} unbalanced"))?;
        // a split that closes a loop also deletes the loop
        let closes_loop = g.endpoints(e_in).unwrap().0 == g.endpoints(e_out).unwrap().1;
        let expected = g.edge_count() - if closes_loop { 2 } else { 1 };
        ensure(h.edge_count() == expected, || {
            format!("split case {case}: edge count {} -> {}", g.edge_count(), h.edge_count())
        })?;
    }

    // random move sequences replay, also after a JSON round trip
    for case in 0..PROPERTY_CASES {
        let n = rng.gen_range(3..=9);
        let g = gen_random_eulerian_irregular(n, rng.gen_range(1..=(n - 2).min(3)), 1, 1000 + case)
            .map_err(|e| e.to_string())?;
        let mut h = g.clone();
        let mut trace = ImmersionTrace::new();
        for _ in 0..rng.gen_range(1..8) {
            let v = rng.gen_range(0..h.vertex_count());
            if rng.gen_bool(0.7) && h.in_degree(v) > 0 && h.out_degree(v) > 0 {
                let a = *h.in_edges(v).choose(&mut rng).unwrap();
                let b = *h.out_edges(v).choose(&mut rng).unwrap();
                if a != b {
                    trace.split(&mut h, a, b).map_err(|e| e.to_string())?;
                }
            } else if let Some(&e) = h.edge_ids().choose(&mut rng) {
                trace.delete_edge(&mut h, e).map_err(|e| e.to_string())?;
            }
        }
        ensure(trace.replay(&g).map_err(|e| e.to_string())? == h, || {
            format!("replay case {case}")
        })?;
        let json = serde_json::to_string(&trace).map_err(|e| e.to_string())?;
        let back: ImmersionTrace = serde_json::from_str(&json).map_err(|e| e.to_string())?;
        ensure(back.replay(&g).map_err(|e| e.to_string())? == h, || {
            format!("JSON replay case {case}")
        })?;
    }

    // Menger: flow value equals the minimum cut, small digraphs
    for case in 0..PROPERTY_CASES {
        let n = rng.gen_range(2..=8);
        let p = rng.gen_range(0.2..0.8);
        let g = random_digraph(n, p, &mut rng);
        let x = rng.gen_range(0..n);
        let y = (x + rng.gen_range(1..n)) % n;
        let flow = lambda_value(&g, x, y).map_err(|e| e.to_string())?;
        let cut = lambda_by_cuts(&g, x, y);
        ensure(flow == cut, || format!("Menger case {case}: flow {flow}, cut {cut}"))?;
    }

    // d is submodular
    for case in 0..PROPERTY_CASES {
        let n = rng.gen_range(2..=10);
        let g = random_digraph(n, rng.gen_range(0.2..0.8), &mut rng);
        let x: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
        let y: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
        let meet: Vec<bool> = x.iter().zip(&y).map(|(&a, &b)| a && b).collect();
        let join: Vec<bool> = x.iter().zip(&y).map(|(&a, &b)| a || b).collect();
        let d = |s: &[bool]| out_cut(&g, s) + in_cut(&g, s);
        ensure(d(&x) + d(&y) >= d(&meet) + d(&join), || {
            format!("submodularity case {case}")
        })?;
        let lib = |s: &[bool]| {
            let set: Vec<usize> = (0..n).filter(|&v| s[v]).collect();
            g.cut_report(&set).map(|c| c.out_degree + c.in_degree)
        };
        if x.iter().any(|&b| b) && !x.iter().all(|&b| b) {
            ensure(lib(&x).map_err(|e| e.to_string())? == d(&x), || {
                format!("cut_report case {case}")
            })?;
        } else {
            ensure(lib(&x).is_err(), || {
                format!("cut_report accepted a trivial set, case {case}")
            })?;
        }
    }
    Ok(format!("4 suites x {PROPERTY_CASES} cases"))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 11] = [
        ("D_k outdegree, pair connectivity and level-one paths", dk_properties),
        ("high-degree digraphs without a K2^2 immersion", no_k22_family),
        (
            "counterexample F is strongly 2-edge-connected",
            counterexample_connectivity,
        ),
        ("counterexample F has no K4 immersion", counterexample_non_immersion),
        ("arborescence packing agrees with cut enumeration", edmonds_packing),
        ("quadratic pipeline certificates verify", quadratic),
        ("small complete immersions by reduction", small_solver),
        ("structural immersion postconditions and chain", structural),
        ("odd-cycle digraphs", odd_cycles),
        ("nine-vertex splitting configuration", nine_vertex_configuration),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let ms = start.elapsed().as_millis();
        match result {
            Ok(detail) => println!("PASS {:>2}  {name:<52} {ms:>7} ms  {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2}  {name:<52} {ms:>7} ms  {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
