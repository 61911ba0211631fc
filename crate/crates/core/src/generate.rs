//! Seeded random multiverses built by pairing half-edges at random.
//!
//! Interior vertices have four string darts; boundary vertices sit on a
//! single outer circle and carry one string dart each. A random perfect
//! pairing of string darts gives a map whose genus is read off afterwards,
//! so callers filter by genus and shape.

use crate::combmap::{ComponentSpec, UnionFind};
use crate::multiverse::{Multiverse, MultiverseFile};
use crate::sketch::{OpenString, Pt, Sketch};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::f64::consts::TAU;

/// Seed used when `CLOCKLAT_SEED` is unset.
pub const DEFAULT_SEED: u64 = 0x5eed_c10c;

/// Seed from `CLOCKLAT_SEED`, or the default.
pub fn seed_from_env() -> u64 {
    std::env::var("CLOCKLAT_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A one-component map with `k` interior vertices and `2n` boundary
/// vertices on one circle, string darts paired at random.
pub fn random_component(rng: &mut impl Rng, k: usize, n: usize) -> ComponentSpec {
    let mut vertices: Vec<Vec<usize>> = (0..k).map(|i| (4 * i..4 * i + 4).collect()).collect();
    let base = 4 * k;
    let m = 2 * n;
    // boundary vertex j: string dart, arc to j+1, arc from j-1
    let s = |j: usize| base + 3 * j;
    let a = |j: usize| base + 3 * j + 1;
    let b = |j: usize| base + 3 * j + 2;
    for j in 0..m {
        vertices.push(vec![a(j), b(j), s(j)]);
    }
    let mut strings: Vec<usize> = (0..base).chain((0..m).map(s)).collect();
    strings.shuffle(rng);
    let mut edges: Vec<[usize; 2]> = strings.chunks(2).map(|p| [p[0].min(p[1]), p[0].max(p[1])]).collect();
    for j in 0..m {
        edges.push([a(j), b((j + 1) % m)]);
    }
    edges.sort_unstable();
    let boundary = if m > 0 {
        vec![(0..m).map(a).collect()]
    } else {
        Vec::new()
    };
    ComponentSpec {
        vertices,
        edges,
        boundary,
    }
}

/// Number of strings, and whether every string is open. Strings pass
/// straight through interior vertices.
pub fn string_shape(spec: &ComponentSpec, k: usize) -> (usize, bool) {
    let n = spec.vertices.iter().map(|r| r.len()).sum::<usize>();
    let is_arc = |d: usize| d >= 4 * k && !(d - 4 * k).is_multiple_of(3);
    let mut uf = UnionFind::new(n);
    for &[x, y] in &spec.edges {
        uf.union(x, y);
    }
    for d in 0..4 * k {
        uf.union(d, 4 * (d / 4) + (d % 4 + 2) % 4);
    }
    let mut open: BTreeMap<usize, bool> = BTreeMap::new();
    for d in (0..n).filter(|&d| !is_arc(d)) {
        *open.entry(uf.find(d)).or_default() |= d >= 4 * k;
    }
    (open.len(), open.values().all(|&o| o))
}

/// Stars `F - V_int` random faces on the outer circle and validates.
pub fn with_random_stars(rng: &mut impl Rng, spec: ComponentSpec, name: &str) -> Option<Multiverse> {
    let file = MultiverseFile {
        name: Some(name.to_string()),
        components: vec![spec],
        containment: Vec::new(),
        outer: 0,
        starred: Vec::new(),
        framing: Vec::new(),
    };
    let (mv, _) = Multiverse::build_unchecked(file.clone()).ok()?;
    let want = mv.face_count() as i64 - mv.interior.len() as i64;
    let mut candidates: Vec<usize> = mv.outer_adjacent_faces().into_iter().map(|r| mv.face_id(r)).collect();
    if want < 0 || want as usize > candidates.len() {
        return None;
    }
    candidates.shuffle(rng);
    let mut starred: Vec<usize> = candidates[..want as usize].to_vec();
    starred.sort_unstable();
    Multiverse::new(MultiverseFile { starred, ..file }).ok()
}

/// Random connected multiverse of the given genus with at most `max_k`
/// interior vertices and at least `min_states` states.
pub fn random_multiverse(rng: &mut impl Rng, genus: usize, max_k: usize, min_states: usize, name: &str) -> Multiverse {
    loop {
        let k = rng.gen_range(1..=max_k);
        let n = rng.gen_range(1..=3);
        let spec = random_component(rng, k, n);
        let Some(mv) = with_random_stars(rng, spec, name) else {
            continue;
        };
        if mv.surface.genus == genus
            && mv.graph_components().len() == 1
            && mv.enumerate_states().len() >= min_states.max(1)
        {
            return mv;
        }
    }
}

/// Random universe on a disc: one open string with `1..=max_k` crossings.
pub fn random_string_universe(rng: &mut impl Rng, max_k: usize, name: &str) -> Multiverse {
    loop {
        let k = rng.gen_range(1..=max_k);
        let spec = random_component(rng, k, 1);
        if string_shape(&spec, k) != (1, true) {
            continue;
        }
        let Some(mv) = with_random_stars(rng, spec, name) else {
            continue;
        };
        if mv.is_string_universe() {
            return mv;
        }
    }
}

fn random_point(rng: &mut impl Rng, radius: f64) -> Pt {
    loop {
        let p = (rng.gen_range(-radius..radius), rng.gen_range(-radius..radius));
        if p.0.hypot(p.1) < radius {
            return p;
        }
    }
}

fn random_open_string(rng: &mut impl Rng, max_points: usize) -> OpenString {
    let m = rng.gen_range(1..=max_points);
    OpenString {
        start: (0, rng.gen_range(0.0..TAU)),
        points: (0..m).map(|_| random_point(rng, 0.85)).collect(),
        end: (0, rng.gen_range(0.0..TAU)),
    }
}

/// Lays out `sk`, stars random faces on the outer circle and validates.
fn starred_layout(rng: &mut impl Rng, sk: &Sketch, name: &str) -> Option<Multiverse> {
    let mut file = sk.layout().ok()?.file;
    file.name = Some(name.to_string());
    let (mv, _) = Multiverse::build_unchecked(file.clone()).ok()?;
    let want = mv.face_count() as i64 - mv.interior.len() as i64;
    let mut candidates: Vec<usize> = mv.outer_adjacent_faces().into_iter().map(|r| mv.face_id(r)).collect();
    if want < 0 || want as usize > candidates.len() {
        return None;
    }
    candidates.shuffle(rng);
    file.starred = candidates[..want as usize].to_vec();
    file.starred.sort_unstable();
    Multiverse::new(file).ok()
}

/// Random universe on a disc drawn as one polyline, with `1..=max_k`
/// crossings.
pub fn random_drawn_universe(rng: &mut impl Rng, max_k: usize, name: &str) -> Multiverse {
    loop {
        let sk = Sketch {
            open: vec![random_open_string(rng, 6)],
            ..Sketch::default()
        };
        let Ok(l) = sk.layout() else { continue };
        if l.crossing_count == 0 || l.crossing_count > max_k {
            continue;
        }
        if let Some(mv) = starred_layout(rng, &sk, name) {
            if mv.is_string_universe() {
                return mv;
            }
        }
    }
}

/// Random universe on a disc traced from a closed curve with a few random
/// Fourier harmonics, cut open at its lowest point and joined to the unit
/// circle. These have more states than polyline universes of the same size.
pub fn random_curve_universe(rng: &mut impl Rng, max_k: usize, name: &str) -> Multiverse {
    const SAMPLES: usize = 160;
    loop {
        let h = rng.gen_range(2..=4);
        let coef: Vec<[f64; 4]> = (0..h)
            .map(|_| std::array::from_fn(|_| rng.gen_range(-1.0..1.0)))
            .collect();
        let curve = |t: f64| -> Pt {
            coef.iter().enumerate().fold((0.0, 0.0), |(x, y), (j, c)| {
                let w = (j + 1) as f64;
                (
                    x + c[0] * (w * t).cos() + c[1] * (w * t).sin(),
                    y + c[2] * (w * t).cos() + c[3] * (w * t).sin(),
                )
            })
        };
        let pts: Vec<Pt> = (0..SAMPLES).map(|i| curve(TAU * i as f64 / SAMPLES as f64)).collect();
        let scale = pts.iter().map(|p| p.0.hypot(p.1)).fold(0.0, f64::max);
        let pts: Vec<Pt> = pts.iter().map(|p| (0.8 * p.0 / scale, 0.8 * p.1 / scale)).collect();
        let low = (0..SAMPLES)
            .min_by(|&a, &b| pts[a].1.partial_cmp(&pts[b].1).unwrap())
            .unwrap();
        // open the curve at its lowest point; both ends drop to the circle
        let points: Vec<Pt> = (1..SAMPLES).map(|i| pts[(low + i) % SAMPLES]).collect();
        let a = points[0];
        let b = *points.last().unwrap();
        let sk = Sketch {
            open: vec![OpenString {
                start: (0, a.1.atan2(a.0)),
                points,
                end: (0, b.1.atan2(b.0)),
            }],
            ..Sketch::default()
        };
        let Ok(l) = sk.layout() else { continue };
        if l.crossing_count == 0 || l.crossing_count > max_k {
            continue;
        }
        if let Some(mv) = starred_layout(rng, &sk, name) {
            if mv.is_string_universe() {
                return mv;
            }
        }
    }
}

/// Random drawn multiverse on a disc, possibly with a hole and a closed
/// string, with at most `max_k` interior vertices and at least `min_states`
/// states.
pub fn random_drawn_multiverse(rng: &mut impl Rng, max_k: usize, min_states: usize, name: &str) -> Multiverse {
    loop {
        let mut sk = Sketch::default();
        if rng.gen_bool(0.3) {
            let c = random_point(rng, 0.3);
            sk.holes.push((c.0, c.1, 0.12));
        }
        for _ in 0..rng.gen_range(1..=3) {
            sk.open.push(random_open_string(rng, 3));
        }
        if rng.gen_bool(0.3) {
            let c = random_point(rng, 0.3);
            let r = rng.gen_range(0.15..0.45);
            let m = rng.gen_range(3..=5);
            sk.closed.push(
                (0..m)
                    .map(|_| {
                        let p = random_point(rng, r);
                        (c.0 + p.0, c.1 + p.1)
                    })
                    .collect(),
            );
        }
        let Ok(l) = sk.layout() else { continue };
        if l.crossing_count > max_k {
            continue;
        }
        if let Some(mv) = starred_layout(rng, &sk, name) {
            if mv.enumerate_states().len() >= min_states.max(1) {
                return mv;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_shapes() {
        let mut r = rng(7);
        for i in 0..10 {
            let mv = random_multiverse(&mut r, 1, 6, 1, &format!("t{i}"));
            assert_eq!(mv.surface.genus, 1);
            assert!(mv.interior.len() <= 6);
            for u in [
                random_string_universe(&mut r, 5, "u"),
                random_drawn_universe(&mut r, 6, "w"),
            ] {
                assert!(u.is_string_universe());
                assert_eq!(u.face_count() - u.interior.len(), 2);
            }
            let p = random_drawn_multiverse(&mut r, 8, 2, "p");
            assert!(p.is_planar() && p.interior.len() <= 8);
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = random_multiverse(&mut rng(3), 0, 5, 1, "a");
        let b = random_multiverse(&mut rng(3), 0, 5, 1, "a");
        assert_eq!(a.file, b.file);
    }
}
