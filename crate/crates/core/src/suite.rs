//! The property suite run by `clocklat check`: one check per law, each over
//! the bundled examples and seeded random instances. A failing check reports
//! the first violating instance.

use crate::corpus;
use crate::dual_lattice::{brute_force_tags, GenusClock, Orientation};
use crate::generate::{random_curve_universe, random_drawn_multiverse, random_drawn_universe, random_multiverse, rng};
use crate::lattice::{Distributivity, LatticeError};
use crate::multiverse::Multiverse;
use crate::planar_lattice::{escape_counts, verify_kauffman_equivalence, PlanarClock, UnframedMoves};
use rand::Rng;
use std::collections::{BTreeMap, BTreeSet};

/// Largest dual for which every orientation is enumerated.
pub const MAX_ENUMERATED_EDGES: usize = 14;
/// Smallest dual kept among the random enumerated instances.
pub const MIN_RANDOM_SMALL_EDGES: usize = 8;
/// Largest interior vertex count of the random instances.
pub const MAX_RANDOM_VERTICES: usize = 8;
/// Largest crossing count of the random string universes.
pub const MAX_UNIVERSE_CROSSINGS: usize = 6;

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random planar and torus multiverses.
    pub random_instances: usize,
    /// Random string universes.
    pub universes: usize,
    /// Random instances whose dual is small enough to enumerate.
    pub small_instances: usize,
}

impl SuiteConfig {
    pub fn with_seed(seed: u64) -> Self {
        SuiteConfig {
            seed,
            random_instances: 100,
            universes: 20,
            small_instances: 40,
        }
    }
}

/// Outcome of one check: a summary on success, a witness on failure.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub id: usize,
    pub name: &'static str,
    pub result: Result<String, String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.result.is_ok()
    }

    pub fn line(&self) -> String {
        match &self.result {
            Ok(s) => format!("PASS {:>2} {}: {}", self.id, self.name, s),
            Err(s) => format!("FAIL {:>2} {}: {}", self.id, self.name, s),
        }
    }
}

pub type Named = (String, Multiverse);

/// Seeded planar and torus multiverses with at most
/// [`MAX_RANDOM_VERTICES`] interior vertices, alternating surface type.
pub fn random_instances(seed: u64, count: usize) -> Vec<Named> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            let name = format!("random{i}");
            let mv = if i % 2 == 0 {
                random_drawn_multiverse(&mut r, MAX_RANDOM_VERTICES, 1, &name)
            } else {
                random_multiverse(&mut r, 1, MAX_RANDOM_VERTICES, 1, &name)
            };
            (name, mv)
        })
        .collect()
}

/// Seeded string universes with at most [`MAX_UNIVERSE_CROSSINGS`]
/// crossings, drawn from polylines and from smooth curves.
pub fn random_universes(seed: u64, count: usize) -> Vec<Named> {
    let mut r = rng(seed ^ 0x5_7a1e);
    (0..count)
        .map(|i| {
            let name = format!("universe{i}");
            let mv = if i % 2 == 0 {
                random_curve_universe(&mut r, MAX_UNIVERSE_CROSSINGS, &name)
            } else {
                random_drawn_universe(&mut r, MAX_UNIVERSE_CROSSINGS, &name)
            };
            (name, mv)
        })
        .collect()
}

/// Seeded instances whose dual has between [`MIN_RANDOM_SMALL_EDGES`] and
/// [`MAX_ENUMERATED_EDGES`] edges, together with the bundled examples of at
/// most that size.
pub fn small_instances(seed: u64, count: usize) -> Vec<Named> {
    let mut out: Vec<Named> = corpus::all()
        .into_iter()
        .filter(|(_, mv)| dual_edges(mv) <= MAX_ENUMERATED_EDGES)
        .map(|(n, mv)| (n.to_string(), mv))
        .collect();
    let mut r = rng(seed ^ 0x3_11a5);
    let mut i = 0;
    while out.len() < count {
        let name = format!("small{i}");
        i += 1;
        let mv = match r.gen_range(0..3) {
            0 => random_drawn_multiverse(&mut r, 3, 2, &name),
            1 => random_multiverse(&mut r, 0, 4, 2, &name),
            _ => random_multiverse(&mut r, 1, 4, 2, &name),
        };
        if (MIN_RANDOM_SMALL_EDGES..=MAX_ENUMERATED_EDGES).contains(&dual_edges(&mv)) {
            out.push((name, mv));
        }
    }
    out
}

fn dual_edges(mv: &Multiverse) -> usize {
    GenusClock::new(mv).map(|gc| gc.dual.edge_count()).unwrap_or(usize::MAX)
}

/// Every orientation of a dual with `e` edges.
pub fn all_orientations(e: usize) -> impl Iterator<Item = Orientation> {
    (0u64..1 << e).map(move |bits| Orientation {
        reversed: (0..e).map(|i| bits >> i & 1 == 1).collect(),
    })
}

fn corpus_named() -> Vec<Named> {
    corpus::all().into_iter().map(|(n, mv)| (n.to_string(), mv)).collect()
}

/// `F - V_int = N + χ + b` on the bundled left multiverse with its known
/// counts, and `F - V_int = 2` on every universe.
pub fn check_euler(cfg: &SuiteConfig) -> Result<String, String> {
    let left = corpus::load("multiverse_left").unwrap().map_err(|e| e.to_string())?;
    let s = left.stats();
    let e = left.euler_check().map_err(|e| e.to_string())?;
    let got = (s.f, s.v_int, s.n, s.chi, s.b);
    if got != (16, 11, 4, 1, 0) || (e.lhs, e.rhs) != (5, 5) {
        return Err(format!(
            "multiverse_left: (F, V_int, N, χ, b) = {got:?}, lhs {} rhs {}",
            e.lhs, e.rhs
        ));
    }
    let mut universes = random_universes(cfg.seed, cfg.universes);
    universes.extend(corpus_named().into_iter().filter(|(_, mv)| mv.is_string_universe()));
    for (name, mv) in &universes {
        let d = mv.face_count() as i64 - mv.interior.len() as i64;
        if d != 2 {
            return Err(format!("{name}: F - V_int = {d}"));
        }
    }
    for (name, mv) in corpus_named() {
        if let Ok(e) = mv.euler_check() {
            if !e.holds {
                return Err(format!("{name}: {} != {}", e.lhs, e.rhs));
            }
        }
    }
    Ok(format!("16 - 11 = 5 = 4 + 1 + 0; {} universes give 2", universes.len()))
}

/// States, matchings and prescribed orientations are in bijection.
pub fn check_bijections(cfg: &SuiteConfig) -> Result<String, String> {
    let mut all = corpus_named();
    all.extend(random_instances(cfg.seed, cfg.random_instances));
    let mut total = 0;
    for (name, mv) in &all {
        let gc = GenusClock::new(mv).map_err(|e| format!("{name}: {e}"))?;
        let states = mv.enumerate_states();
        let matchings = gc.spine.graph.enumerate_matchings();
        let orientations: BTreeSet<Orientation> = matchings.iter().map(|m| gc.dual.prescribed_orientation(m)).collect();
        if states.len() != matchings.len() || orientations.len() != matchings.len() {
            return Err(format!(
                "{name}: {} states, {} matchings, {} orientations",
                states.len(),
                matchings.len(),
                orientations.len()
            ));
        }
        for s in &states {
            let m = gc.spine.state_to_matching(mv, s).map_err(|e| format!("{name}: {e}"))?;
            let r = gc.dual.prescribed_orientation(&m);
            let m2 = gc
                .dual
                .orientation_to_matching(&gc.spine, &r)
                .map_err(|e| format!("{name}: {e}"))?;
            let s2 = gc.spine.matching_to_state(&m2).map_err(|e| format!("{name}: {e}"))?;
            if m2 != m || &s2 != s || !gc.spine.graph.is_matching(&m) {
                return Err(format!("{name}: round trip fails at state {}", mv.state_label(s)));
            }
        }
        total += states.len();
    }
    Ok(format!("{} multiverses, {} states", all.len(), total))
}

/// The plane transposition order is a distributive lattice whose covers are
/// exactly the single counterclockwise transpositions.
pub fn check_planar_clock(cfg: &SuiteConfig) -> Result<String, String> {
    let mut all = corpus::planar()
        .into_iter()
        .map(|(n, mv)| (n.to_string(), mv))
        .collect::<Vec<_>>();
    all.extend(
        random_instances(cfg.seed, cfg.random_instances)
            .into_iter()
            .filter(|(_, mv)| mv.is_planar()),
    );
    for (name, mv) in &all {
        let pc = PlanarClock::new(mv).map_err(|e| format!("{name}: {e}"))?;
        let l = pc.lattice().map_err(|e| format!("{name}: {e}"))?;
        if l.len() != mv.enumerate_states().len() {
            return Err(format!("{name}: lattice misses states"));
        }
        if !l.covers_match_moves() {
            return Err(format!("{name}: covers differ from single transpositions"));
        }
        match l.distributivity() {
            Ok(Distributivity::Distributive) => {}
            Ok(d) => return Err(format!("{name}: not distributive, witness {d:?}")),
            Err(e) => return Err(format!("{name}: {e}")),
        }
    }
    Ok(format!("{} planar multiverses", all.len()))
}

/// Plane and Kauffman transpositions agree on string universes, and the
/// trefoil is a three-element chain.
pub fn check_kauffman(cfg: &SuiteConfig) -> Result<String, String> {
    let trefoil = corpus::load("trefoil").unwrap().map_err(|e| e.to_string())?;
    let tl = PlanarClock::new(&trefoil)
        .map_err(|e| e.to_string())?
        .lattice()
        .map_err(|e| e.to_string())?;
    let brute = brute_force_state_count(&trefoil);
    if tl.len() != 3 || brute != 3 || tl.covers.len() != 2 || tl.ranks().iter().max() != Some(&2) {
        return Err(format!(
            "trefoil: {} states ({brute} by brute force), {} covers",
            tl.len(),
            tl.covers.len()
        ));
    }
    let mut universes = random_universes(cfg.seed, cfg.universes);
    universes.extend(corpus_named().into_iter().filter(|(_, mv)| mv.is_string_universe()));
    for (name, mv) in &universes {
        let rep = verify_kauffman_equivalence(mv).map_err(|e| format!("{name}: {e}"))?;
        if !rep.holds() {
            return Err(format!("{name}: {rep:?}"));
        }
    }
    Ok(format!("{} universes; trefoil is a 3-chain", universes.len()))
}

/// Counts states by trying every corner at every vertex.
pub fn brute_force_state_count(mv: &Multiverse) -> usize {
    let k = mv.interior.len();
    let mut count = 0;
    for code in 0..4usize.pow(k as u32) {
        let choice = (0..k).map(|i| 4 * i + code / 4usize.pow(i as u32) % 4).collect();
        if mv.is_state(&crate::multiverse::State { choice }) {
            count += 1;
        }
    }
    count
}

/// `E = L + 2` on every vertex-simple alternating cycle of every universe.
pub fn check_escape(cfg: &SuiteConfig) -> Result<String, String> {
    let mut universes: Vec<Named> = corpus_named()
        .into_iter()
        .filter(|(_, mv)| mv.is_string_universe())
        .collect();
    universes.extend(random_universes(cfg.seed, cfg.universes));
    let mut cycles = 0;
    for (name, mv) in &universes {
        for rec in escape_counts(mv).map_err(|e| format!("{name}: {e}"))? {
            if rec.escape != rec.half_length + 2 {
                return Err(format!(
                    "{name}: cycle of half length {} has {} escapes",
                    rec.half_length, rec.escape
                ));
            }
            cycles += 1;
        }
    }
    Ok(format!("{cycles} cycles in {} universes", universes.len()))
}

/// Basic cycle circulations, invariance under pushing and surface twisting,
/// and equal accessibility classes for equal circulations.
pub fn check_circulation(cfg: &SuiteConfig) -> Result<String, String> {
    let mut all = corpus_named();
    all.extend(random_instances(cfg.seed, cfg.random_instances / 4));
    for (name, mv) in &all {
        let gc = GenusClock::new(mv).map_err(|e| format!("{name}: {e}"))?;
        let nw = gc.spine.graph.nw;
        for m in gc.spine.graph.enumerate_matchings() {
            let r = gc.dual.prescribed_orientation(&m);
            let cv = gc.dual.circulation(&r);
            for (v, cyc) in gc.dual.basic_cycles.iter().enumerate() {
                let d = cyc.len() as i64;
                let want = if v < nw { d - 2 } else { 2 - d };
                let got = gc
                    .dual
                    .circulation_direct(&r, cyc)
                    .map_err(|e| format!("{name}: {e}"))?;
                if got != want {
                    return Err(format!(
                        "{name}: basic cycle at {v} has circulation {got}, expected {want}"
                    ));
                }
            }
            for r2 in gc.dual.push_up_moves(&r) {
                if gc.dual.circulation(&r2) != cv {
                    return Err(format!("{name}: pushing changes circulation"));
                }
            }
            let s = gc.spine.matching_to_state(&m).map_err(|e| format!("{name}: {e}"))?;
            for t in gc.surface_transpositions_from(&s) {
                if gc.circulation_of_state(&t.target) != cv {
                    return Err(format!("{name}: surface twisting changes circulation"));
                }
            }
        }
    }
    let small = small_instances(cfg.seed, cfg.small_instances);
    let mut enumerated = 0u64;
    let mut largest = 0;
    for (name, mv) in &small {
        let gc = GenusClock::new(mv).map_err(|e| format!("{name}: {e}"))?;
        largest = largest.max(gc.dual.edge_count());
        let mut seen: BTreeMap<Vec<i64>, Vec<Vec<usize>>> = BTreeMap::new();
        for r in all_orientations(gc.dual.edge_count()) {
            let cv = gc.dual.circulation(&r).values;
            let blocks = gc.dual.accessibility(&r).blocks();
            match seen.get(&cv) {
                Some(b) if *b != blocks => {
                    return Err(format!(
                        "{name}: two orientations with circulation {cv:?} differ in classes"
                    ));
                }
                Some(_) => {}
                None => {
                    seen.insert(cv, blocks);
                }
            }
            enumerated += 1;
        }
    }
    Ok(format!(
        "{} multiverses; {enumerated} orientations of {} duals with up to {largest} edges",
        all.len(),
        small.len()
    ))
}

/// Every orientation with a viable circulation is prescribed.
pub fn check_viability(cfg: &SuiteConfig) -> Result<String, String> {
    let small = small_instances(cfg.seed, cfg.small_instances);
    let mut viable_total = 0;
    for (name, mv) in &small {
        let gc = GenusClock::new(mv).map_err(|e| format!("{name}: {e}"))?;
        let viable: BTreeSet<_> = gc.circulation_classes().into_keys().collect();
        let prescribed: BTreeSet<Orientation> = gc
            .spine
            .graph
            .enumerate_matchings()
            .iter()
            .map(|m| gc.dual.prescribed_orientation(m))
            .collect();
        let mut count = 0;
        for r in all_orientations(gc.dual.edge_count()) {
            if viable.contains(&gc.dual.circulation(&r)) {
                count += 1;
                if !prescribed.contains(&r) {
                    return Err(format!(
                        "{name}: orientation {:?} is viable but not prescribed",
                        r.reversed
                    ));
                }
            }
        }
        if count != prescribed.len() {
            return Err(format!(
                "{name}: {count} viable orientations, {} prescribed",
                prescribed.len()
            ));
        }
        viable_total += count;
    }
    Ok(format!("{} duals, {viable_total} viable orientations", small.len()))
}

/// Tags from accessibility classes equal tags from matchings of the class.
pub fn check_forced_forbidden(cfg: &SuiteConfig) -> Result<String, String> {
    let mut all = small_instances(cfg.seed, cfg.small_instances);
    all.extend(corpus_named());
    all.extend(random_instances(cfg.seed, cfg.random_instances / 4));
    let mut classes = 0;
    for (name, mv) in &all {
        let gc = GenusClock::new(mv).map_err(|e| format!("{name}: {e}"))?;
        let tags = brute_force_tags(&gc);
        for (c, ms) in gc.circulation_classes() {
            let r = gc.dual.prescribed_orientation(&ms[0]);
            if gc.dual.c_forced_forbidden(&r) != tags[&c] {
                return Err(format!("{name}: tags differ in class {:?}", c.values));
            }
            classes += 1;
        }
    }
    Ok(format!("{classes} classes in {} multiverses", all.len()))
}

/// Per-class distributive lattices on the torus example, with covers equal
/// to surface transpositions in all three pictures.
pub fn check_genus_clock(_cfg: &SuiteConfig) -> Result<String, String> {
    let mv = corpus::load("torus").unwrap().map_err(|e| e.to_string())?;
    if mv.surface.genus != 1 {
        return Err("torus example is not of genus 1".into());
    }
    let gc = GenusClock::new(&mv).map_err(|e| e.to_string())?;
    let ls = gc.all_lattices().map_err(|e| e.to_string())?;
    let total: usize = ls.iter().map(|l| l.states.len()).sum();
    if total != mv.enumerate_states().len() {
        return Err(format!("classes hold {total} states"));
    }
    for (i, l) in ls.iter().enumerate() {
        if !l.states.is_distributive() {
            return Err(format!("class {i} is not distributive"));
        }
        if !l.states.covers_match_moves() {
            return Err(format!("class {i}: covers differ from surface transpositions"));
        }
        if !l.pictures_agree(&gc) {
            return Err(format!("class {i}: pictures disagree"));
        }
    }
    Ok(format!("{} classes, {total} states", ls.len()))
}

/// Unframed transpositions on the counterexample form a cycle.
pub fn check_framing_regression(_cfg: &SuiteConfig) -> Result<String, String> {
    let mv = corpus::load("framing_counterexample")
        .unwrap()
        .map_err(|e| e.to_string())?;
    let framed = PlanarClock::new(&mv).map_err(|e| e.to_string())?;
    if let Err(e) = framed.lattice() {
        return Err(format!("framed moves already fail: {e}"));
    }
    let unframed = UnframedMoves::new(&mv).map_err(|e| e.to_string())?;
    match unframed.lattice() {
        Err(LatticeError::CycleDetected { witness }) => Ok(format!("cycle of length {}", witness.len())),
        Err(e) => Err(format!("unexpected error {e}")),
        Ok(_) => Err("unframed moves form a poset".into()),
    }
}

type Check = fn(&SuiteConfig) -> Result<String, String>;

/// Every check with its number and name.
pub const CHECKS: &[(usize, &str, Check)] = &[
    (1, "euler identity", check_euler),
    (2, "state/matching/orientation bijections", check_bijections),
    (3, "planar clock lattice", check_planar_clock),
    (4, "kauffman equivalence", check_kauffman),
    (5, "escape count", check_escape),
    (6, "circulation laws", check_circulation),
    (7, "viability is prescribability", check_viability),
    (8, "c-forced and c-forbidden tags", check_forced_forbidden),
    (9, "genus clock lattices", check_genus_clock),
    (10, "framing regression", check_framing_regression),
];

pub fn run_check(id: usize, cfg: &SuiteConfig) -> Option<CheckOutcome> {
    CHECKS.iter().find(|c| c.0 == id).map(|&(id, name, f)| CheckOutcome {
        id,
        name,
        result: f(cfg),
    })
}

/// Runs the checks in order, stopping at the first failure when asked.
pub fn run_all(cfg: &SuiteConfig, stop_on_failure: bool) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    for &(id, name, f) in CHECKS {
        let o = CheckOutcome {
            id,
            name,
            result: f(cfg),
        };
        let failed = !o.passed();
        out.push(o);
        if failed && stop_on_failure {
            break;
        }
    }
    out
}
