//! Acceptance run: one PASS or FAIL line per criterion. Each criterion runs
//! the library check and, where one exists, an oracle written here without
//! the library's algorithms.

use clocklat::corpus;
use clocklat::dual_lattice::{GenusClock, Orientation};
use clocklat::generate::seed_from_env;
use clocklat::multiverse::Multiverse;
use clocklat::planar_lattice::PlanarClock;
use clocklat::spine::{BiGraph, EdgeTag};
use clocklat::suite::{self, SuiteConfig};
use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

/// Time budget per criterion, in seconds.
const BUDGET_SECS: [u64; 10] = [1, 60, 60, 60, 60, 120, 120, 120, 120, 60];
/// Largest spine for the matching oracle.
const ORACLE_MAX_WHITE: usize = 20;

/// Counts perfect matchings by matching white vertices in order against a
/// bitmask of used black vertices.
fn oracle_matching_count(g: &BiGraph) -> u64 {
    fn go(g: &BiGraph, w: usize, used: u64, adj: &[Vec<usize>]) -> u64 {
        if w == g.nw {
            return 1;
        }
        adj[w]
            .iter()
            .filter(|&&b| used >> b & 1 == 0)
            .map(|&b| go(g, w + 1, used | 1 << b, adj))
            .sum()
    }
    if g.nw != g.nb {
        return 0;
    }
    let mut adj = vec![Vec::new(); g.nw];
    for (e, edge) in g.edges.iter().enumerate() {
        if g.alive[e] {
            adj[edge.w].push(edge.b);
        }
    }
    go(g, 0, 0, &adj)
}

/// Classes of mutual reachability by breadth-first search from every vertex.
fn oracle_classes(n: usize, arcs: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut out_adj = vec![Vec::new(); n];
    for &(a, b) in arcs {
        out_adj[a].push(b);
    }
    let reach: Vec<BTreeSet<usize>> = (0..n)
        .map(|s| {
            let mut seen = BTreeSet::from([s]);
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for &y in &out_adj[x] {
                    if seen.insert(y) {
                        stack.push(y);
                    }
                }
            }
            seen
        })
        .collect();
    let mut classes: BTreeSet<Vec<usize>> = BTreeSet::new();
    for a in 0..n {
        classes.insert(
            (0..n)
                .filter(|&b| reach[a].contains(&b) && reach[b].contains(&a))
                .collect(),
        );
    }
    classes.into_iter().collect()
}

/// Checks the lattice and distributive laws on the order generated by
/// `covers`, with meets and joins found by scanning all bounds.
fn oracle_distributive(n: usize, covers: &[(usize, usize)]) -> Result<(), String> {
    let mut le = vec![vec![false; n]; n];
    for (i, row) in le.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in covers {
        le[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if le[i][k] && le[k][j] {
                    le[i][j] = true;
                }
            }
        }
    }
    let bound = |x: usize, y: usize, upper: bool| -> Option<usize> {
        let cands: Vec<usize> = (0..n)
            .filter(|&z| {
                if upper {
                    le[x][z] && le[y][z]
                } else {
                    le[z][x] && le[z][y]
                }
            })
            .collect();
        cands
            .iter()
            .copied()
            .find(|&z| cands.iter().all(|&w| if upper { le[z][w] } else { le[w][z] }))
    };
    for x in 0..n {
        for y in 0..n {
            if x != y && le[x][y] && le[y][x] {
                return Err(format!("{x} and {y} are not antisymmetric"));
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let (Some(yz), Some(xy), Some(xz)) = (bound(y, z, true), bound(x, y, false), bound(x, z, false)) else {
                    return Err(format!("missing bound among {x}, {y}, {z}"));
                };
                if bound(x, yz, false) != bound(xy, xz, true) {
                    return Err(format!("distributive law fails at ({x}, {y}, {z})"));
                }
            }
        }
    }
    Ok(())
}

fn arcs(gc: &GenusClock, r: &Orientation) -> Vec<(usize, usize)> {
    (0..gc.dual.edge_count()).map(|e| gc.dual.directed(r, e)).collect()
}

/// Tags of the edges from the matchings of one circulation class.
fn oracle_tags(edges: usize, class: &[clocklat::spine::Matching]) -> Vec<EdgeTag> {
    (0..edges)
        .map(|e| {
            let k = class.iter().filter(|m| m.contains(e)).count();
            if k == class.len() {
                EdgeTag::Forced
            } else if k == 0 {
                EdgeTag::Forbidden
            } else {
                EdgeTag::Free
            }
        })
        .collect()
}

fn named_corpus() -> Vec<(String, Multiverse)> {
    corpus::all().into_iter().map(|(n, mv)| (n.to_string(), mv)).collect()
}

fn oracle(id: usize, cfg: &SuiteConfig) -> Result<String, String> {
    match id {
        2 => {
            let mut all = named_corpus();
            all.extend(suite::random_instances(cfg.seed, cfg.random_instances));
            let mut checked = 0;
            for (name, mv) in &all {
                if mv.interior.len() > ORACLE_MAX_WHITE {
                    continue;
                }
                let gc = GenusClock::new(mv).map_err(|e| e.to_string())?;
                let by_matching = oracle_matching_count(&gc.spine.graph);
                let by_state = suite::brute_force_state_count(mv) as u64;
                let listed = mv.enumerate_states().len() as u64;
                if by_matching != listed || by_state != listed {
                    return Err(format!(
                        "{name}: {listed} listed, {by_state} by brute force, {by_matching} matchings"
                    ));
                }
                checked += 1;
            }
            Ok(format!("oracle counts agree on {checked}"))
        }
        6 => {
            let small = suite::small_instances(cfg.seed, cfg.small_instances);
            let mut n = 0u64;
            for (name, mv) in &small {
                let gc = GenusClock::new(mv).map_err(|e| e.to_string())?;
                for r in suite::all_orientations(gc.dual.edge_count()) {
                    let want = oracle_classes(gc.dual.vertex_count, &arcs(&gc, &r));
                    if gc.dual.accessibility(&r).blocks() != want {
                        return Err(format!("{name}: accessibility classes differ from reachability"));
                    }
                    n += 1;
                }
            }
            Ok(format!("reachability classes agree on {n} orientations"))
        }
        7 => {
            let small = suite::small_instances(cfg.seed, cfg.small_instances);
            for (name, mv) in &small {
                let gc = GenusClock::new(mv).map_err(|e| e.to_string())?;
                let g = &gc.spine.graph;
                let viable_set = gc.circulation_classes();
                for r in suite::all_orientations(gc.dual.edge_count()) {
                    // prescribed means the reversed edges form a perfect matching
                    let rev: Vec<usize> = (0..r.reversed.len()).filter(|&e| r.reversed[e]).collect();
                    let mut wu = vec![0; g.nw];
                    let mut bu = vec![0; g.nb];
                    for &e in &rev {
                        wu[g.edges[e].w] += 1;
                        bu[g.edges[e].b] += 1;
                    }
                    let is_pm = wu.iter().chain(&bu).all(|&k| k == 1);
                    let viable = viable_set.contains_key(&gc.dual.circulation(&r));
                    if viable != is_pm {
                        return Err(format!("{name}: viable={viable} but perfect matching={is_pm}"));
                    }
                }
            }
            Ok(format!("{} duals", small.len()))
        }
        8 => {
            let mut all = suite::small_instances(cfg.seed, cfg.small_instances);
            all.extend(named_corpus());
            for (name, mv) in &all {
                let gc = GenusClock::new(mv).map_err(|e| e.to_string())?;
                let by_class: BTreeMap<_, _> = gc.circulation_classes();
                for ms in by_class.values() {
                    let want = oracle_tags(gc.dual.edge_count(), ms);
                    for m in ms {
                        let r = gc.dual.prescribed_orientation(m);
                        if gc.dual.c_forced_forbidden(&r) != want {
                            return Err(format!("{name}: tags differ from matching counts"));
                        }
                    }
                }
            }
            Ok(format!("{} multiverses", all.len()))
        }
        3 => {
            let mut n = 0;
            for (name, mv) in corpus::planar() {
                let l = PlanarClock::new(&mv)
                    .map_err(|e| e.to_string())?
                    .lattice()
                    .map_err(|e| e.to_string())?;
                oracle_distributive(l.len(), &l.covers).map_err(|e| format!("{name}: {e}"))?;
                n += 1;
            }
            Ok(format!("oracle distributivity on {n} bundled examples"))
        }
        9 => {
            let mv = corpus::load("torus").unwrap().map_err(|e| e.to_string())?;
            let gc = GenusClock::new(&mv).map_err(|e| e.to_string())?;
            let ls = gc.all_lattices().map_err(|e| e.to_string())?;
            for (i, l) in ls.iter().enumerate() {
                oracle_distributive(l.states.len(), &l.states.covers).map_err(|e| format!("class {i}: {e}"))?;
            }
            Ok(format!("oracle distributivity on {} classes", ls.len()))
        }
        _ => Ok(String::new()),
    }
}

#[test]
fn acceptance() {
    let cfg = SuiteConfig::with_seed(seed_from_env());
    println!("seed={}", cfg.seed);
    let mut failures = Vec::new();
    for &(id, name, _) in suite::CHECKS {
        let start = Instant::now();
        let lib = suite::run_check(id, &cfg).unwrap().result;
        let ora = oracle(id, &cfg);
        let elapsed = start.elapsed();
        let budget = Duration::from_secs(BUDGET_SECS[id - 1]);
        let verdict = match (lib, ora) {
            (Ok(a), Ok(b)) if elapsed <= budget => Ok(if b.is_empty() { a } else { format!("{a}; {b}") }),
            (Ok(_), Ok(_)) => Err(format!("took {elapsed:?}, budget {budget:?}")),
            (Err(e), _) | (_, Err(e)) => Err(e),
        };
        match verdict {
            Ok(s) => println!("PASS {id:>2} {name}: {s} ({:.2}s)", elapsed.as_secs_f64()),
            Err(s) => {
                println!("FAIL {id:>2} {name}: {s}");
                failures.push(id);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
