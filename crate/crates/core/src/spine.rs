//! Tait graphs and spines of a multiverse, perfect matchings of bipartite
//! graphs, edge classification, reduction, alternating cycles and twisting.
//!
//! The spine is embedded by overlaying it on the multiverse map: a Tait edge
//! for corner `c` contributes dart `n + 2c` at the white vertex, inserted
//! right after the corner's first dart, and dart `n + 2c + 1` at the black
//! vertex, where `n` is the number of map darts.

use crate::combmap::{Cells, DartSystem, SubMap, UnionFind, NONE};
use crate::multiverse::{FramingSpec, Multiverse, State};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpineError {
    #[error("not a state of this multiverse")]
    InvalidState,
    #[error("not a matching of this spine")]
    InvalidMatching,
    #[error("cycle is not alternating")]
    NotAlternating,
    #[error("alternating cycle is not vertex-simple")]
    NotVertexSimple,
    #[error("face {face} is not a disc and needs an explicit framing")]
    FramingRequired { face: usize },
    #[error("framing of face {face}: {reason}")]
    Framing { face: usize, reason: String },
}

/// Edge of a bipartite graph between white `w` and black `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BiEdge {
    pub w: usize,
    pub b: usize,
}

/// A finite bipartite graph. Vertex `w` is white, `b` black; in joint
/// numbering whites come first. Dead edges are ignored everywhere, so edge ids
/// are stable under reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiGraph {
    pub nw: usize,
    pub nb: usize,
    pub edges: Vec<BiEdge>,
    pub alive: Vec<bool>,
}

/// A perfect matching, as sorted edge ids.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Matching {
    pub edges: Vec<usize>,
}

impl Matching {
    pub fn contains(&self, e: usize) -> bool {
        self.edges.binary_search(&e).is_ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EdgeTag {
    Forced,
    Forbidden,
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ComponentKind {
    /// A single forced edge between two vertices.
    ForcedEdge,
    /// Every edge lies in some but not all matchings.
    Free,
    /// A lone vertex of a graph with no matchings.
    Isolated,
}

/// Connected component of a reduced graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub whites: Vec<usize>,
    pub blacks: Vec<usize>,
    pub edges: Vec<usize>,
    pub kind: ComponentKind,
}

/// A graph with its forbidden edges removed, split into components.
#[derive(Debug, Clone)]
pub struct Reduced {
    pub graph: BiGraph,
    pub tags: Vec<EdgeTag>,
    pub components: Vec<Component>,
}

/// A directed cycle as steps `(edge, from, to)` in joint vertex numbering.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DirectedCycle {
    pub steps: Vec<(usize, usize, usize)>,
}

impl DirectedCycle {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn edge_set(&self) -> BTreeSet<usize> {
        self.steps.iter().map(|s| s.0).collect()
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.1).collect()
    }

    pub fn is_closed(&self) -> bool {
        !self.steps.is_empty()
            && self.steps.windows(2).all(|w| w[0].2 == w[1].1)
            && self.steps.last().unwrap().2 == self.steps[0].1
    }

    /// No directed edge repeats.
    pub fn is_simple(&self) -> bool {
        let set: BTreeSet<(usize, usize, usize)> = self.steps.iter().copied().collect();
        set.len() == self.steps.len()
    }

    pub fn is_vertex_simple(&self) -> bool {
        let set: BTreeSet<usize> = self.steps.iter().map(|s| s.1).collect();
        set.len() == self.steps.len()
    }

    pub fn reversed(&self) -> DirectedCycle {
        DirectedCycle {
            steps: self.steps.iter().rev().map(|&(e, a, b)| (e, b, a)).collect(),
        }
    }

    /// Rotated to start at the smallest edge id, keeping the direction.
    pub fn rotated_to_min(&self) -> DirectedCycle {
        let k = (0..self.steps.len())
            .min_by_key(|&i| (self.steps[i].0, self.steps[i].1))
            .unwrap_or(0);
        let mut steps = self.steps[k..].to_vec();
        steps.extend_from_slice(&self.steps[..k]);
        DirectedCycle { steps }
    }
}

impl BiGraph {
    pub fn new(nw: usize, nb: usize, edges: Vec<BiEdge>) -> Self {
        let alive = vec![true; edges.len()];
        BiGraph { nw, nb, edges, alive }
    }

    pub fn vertex_count(&self) -> usize {
        self.nw + self.nb
    }

    /// Endpoints of an edge in joint numbering.
    pub fn ends(&self, e: usize) -> (usize, usize) {
        (self.edges[e].w, self.nw + self.edges[e].b)
    }

    pub fn live_edges(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.edges.len()).filter(|&e| self.alive[e])
    }

    pub fn incident(&self, v: usize) -> Vec<usize> {
        self.live_edges()
            .filter(|&e| {
                let (a, b) = self.ends(e);
                a == v || b == v
            })
            .collect()
    }

    /// Is `m` a perfect matching of the live graph?
    pub fn is_matching(&self, m: &Matching) -> bool {
        let mut covered = vec![false; self.vertex_count()];
        for &e in &m.edges {
            if e >= self.edges.len() || !self.alive[e] {
                return false;
            }
            let (a, b) = self.ends(e);
            if covered[a] || covered[b] {
                return false;
            }
            covered[a] = true;
            covered[b] = true;
        }
        m.edges.windows(2).all(|w| w[0] < w[1]) && covered.iter().all(|&c| c)
    }

    /// All perfect matchings, in lexicographic order of sorted edge lists.
    pub fn enumerate_matchings(&self) -> Vec<Matching> {
        let mut out = Vec::new();
        if self.nw != self.nb {
            return out;
        }
        let mut by_white: Vec<Vec<usize>> = vec![Vec::new(); self.nw];
        for e in self.live_edges() {
            by_white[self.edges[e].w].push(e);
        }
        let mut used = vec![false; self.nb];
        let mut chosen = Vec::with_capacity(self.nw);
        self.match_search(0, &by_white, &mut used, &mut chosen, &mut out);
        for m in &mut out {
            m.edges.sort_unstable();
        }
        out.sort();
        out
    }

    fn match_search(
        &self,
        w: usize,
        by_white: &[Vec<usize>],
        used: &mut [bool],
        chosen: &mut Vec<usize>,
        out: &mut Vec<Matching>,
    ) {
        if w == self.nw {
            out.push(Matching { edges: chosen.clone() });
            return;
        }
        for &e in &by_white[w] {
            let b = self.edges[e].b;
            if used[b] {
                continue;
            }
            used[b] = true;
            chosen.push(e);
            self.match_search(w + 1, by_white, used, chosen, out);
            chosen.pop();
            used[b] = false;
        }
    }

    /// Whether a perfect matching exists avoiding the given vertices and edge.
    fn has_matching_without(&self, skip_w: Option<usize>, skip_b: Option<usize>, skip_e: Option<usize>) -> bool {
        let nw = self.nw - skip_w.map_or(0, |_| 1);
        let nb = self.nb - skip_b.map_or(0, |_| 1);
        if nw != nb {
            return false;
        }
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.nw];
        for e in self.live_edges() {
            let BiEdge { w, b } = self.edges[e];
            if Some(e) == skip_e || Some(w) == skip_w || Some(b) == skip_b {
                continue;
            }
            adj[w].push(b);
        }
        let mut owner = vec![NONE; self.nb];
        for w in 0..self.nw {
            if Some(w) == skip_w {
                continue;
            }
            let mut seen = vec![false; self.nb];
            if !augment(w, &adj, &mut owner, &mut seen) {
                return false;
            }
        }
        true
    }

    pub fn has_matching(&self) -> bool {
        self.has_matching_without(None, None, None)
    }

    /// Forced, forbidden or free, by matching-existence queries. When the
    /// graph has no matching every edge is forbidden.
    pub fn classify_edges(&self) -> Vec<EdgeTag> {
        let any = self.has_matching();
        (0..self.edges.len())
            .map(|e| {
                if !any || !self.alive[e] {
                    return EdgeTag::Forbidden;
                }
                let BiEdge { w, b } = self.edges[e];
                if !self.has_matching_without(Some(w), Some(b), None) {
                    EdgeTag::Forbidden
                } else if !self.has_matching_without(None, None, Some(e)) {
                    EdgeTag::Forced
                } else {
                    EdgeTag::Free
                }
            })
            .collect()
    }

    /// Removes forbidden edges and types the components.
    pub fn reduce(&self) -> Reduced {
        let tags = self.classify_edges();
        let mut graph = self.clone();
        for (e, t) in tags.iter().enumerate() {
            if *t == EdgeTag::Forbidden {
                graph.alive[e] = false;
            }
        }
        let mut uf = UnionFind::new(graph.vertex_count());
        for e in graph.live_edges() {
            let (a, b) = graph.ends(e);
            uf.union(a, b);
        }
        let mut groups: BTreeMap<usize, Component> = BTreeMap::new();
        for v in 0..graph.vertex_count() {
            let c = groups.entry(uf.find(v)).or_insert(Component {
                whites: vec![],
                blacks: vec![],
                edges: vec![],
                kind: ComponentKind::Isolated,
            });
            if v < graph.nw {
                c.whites.push(v);
            } else {
                c.blacks.push(v - graph.nw);
            }
        }
        for e in graph.live_edges() {
            let (a, _) = graph.ends(e);
            groups.get_mut(&uf.find(a)).unwrap().edges.push(e);
        }
        let components = groups
            .into_values()
            .map(|mut c| {
                c.kind = match c.edges.as_slice() {
                    [] => ComponentKind::Isolated,
                    [e] if tags[*e] == EdgeTag::Forced => ComponentKind::ForcedEdge,
                    _ => ComponentKind::Free,
                };
                c
            })
            .collect();
        Reduced {
            graph,
            tags,
            components,
        }
    }

    /// Matching edges point white to black, others black to white; returns
    /// the outgoing live edges of joint vertex `v` as `(edge, target)`.
    fn alternating_out(&self, m: &Matching, v: usize) -> Vec<(usize, usize)> {
        self.incident(v)
            .into_iter()
            .filter_map(|e| {
                let (w, b) = self.ends(e);
                let inm = m.contains(e);
                if v == w && inm {
                    Some((e, b))
                } else if v == b && !inm {
                    Some((e, w))
                } else {
                    None
                }
            })
            .collect()
    }

    /// All vertex-simple alternating cycles relative to `m`, one per class
    /// under reversal and cyclic shift. Each is directed so that matching
    /// edges run white to black, and starts at its smallest edge.
    pub fn alternating_cycles(&self, m: &Matching, max_len: Option<usize>) -> Vec<DirectedCycle> {
        let n = self.vertex_count();
        let out_edges: Vec<Vec<(usize, usize)>> = (0..n).map(|v| self.alternating_out(m, v)).collect();
        let mut found = BTreeSet::new();
        for s in 0..n {
            let mut on_path = vec![false; n];
            let mut path = Vec::new();
            on_path[s] = true;
            cycle_dfs(
                s,
                s,
                &out_edges,
                &mut on_path,
                &mut path,
                max_len.unwrap_or(usize::MAX),
                &mut found,
            );
        }
        found.into_iter().collect()
    }

    /// `M + A`, if `A` is a vertex-simple alternating cycle relative to `m`.
    /// In a bipartite graph an alternating cycle that revisits a vertex must
    /// repeat a directed edge.
    pub fn twist(&self, m: &Matching, a: &DirectedCycle) -> Result<Matching, SpineError> {
        if !a.is_closed() || a.len() % 2 == 1 {
            return Err(SpineError::NotAlternating);
        }
        for (i, &(e, x, y)) in a.steps.iter().enumerate() {
            if e >= self.edges.len() || !self.alive[e] {
                return Err(SpineError::NotAlternating);
            }
            let (p, q) = self.ends(e);
            if !((x, y) == (p, q) || (x, y) == (q, p)) {
                return Err(SpineError::NotAlternating);
            }
            let next = a.steps[(i + 1) % a.len()].0;
            if m.contains(e) == m.contains(next) {
                return Err(SpineError::NotAlternating);
            }
        }
        if !a.is_vertex_simple() {
            return Err(SpineError::NotVertexSimple);
        }
        let mut set: BTreeSet<usize> = m.edges.iter().copied().collect();
        for e in a.edge_set() {
            if !set.remove(&e) {
                set.insert(e);
            }
        }
        Ok(Matching {
            edges: set.into_iter().collect(),
        })
    }
}

fn augment(w: usize, adj: &[Vec<usize>], owner: &mut [usize], seen: &mut [bool]) -> bool {
    for &b in &adj[w] {
        if seen[b] {
            continue;
        }
        seen[b] = true;
        if owner[b] == NONE || augment(owner[b], adj, owner, seen) {
            owner[b] = w;
            return true;
        }
    }
    false
}

fn cycle_dfs(
    start: usize,
    v: usize,
    out_edges: &[Vec<(usize, usize)>],
    on_path: &mut [bool],
    path: &mut Vec<(usize, usize, usize)>,
    max_len: usize,
    found: &mut BTreeSet<DirectedCycle>,
) {
    if path.len() >= max_len {
        return;
    }
    for &(e, t) in &out_edges[v] {
        if t == start {
            path.push((e, v, t));
            found.insert(DirectedCycle { steps: path.clone() }.rotated_to_min());
            path.pop();
        } else if t > start && !on_path[t] {
            on_path[t] = true;
            path.push((e, v, t));
            cycle_dfs(start, t, out_edges, on_path, path, max_len, found);
            path.pop();
            on_path[t] = false;
        }
    }
}

/// The spine or Tait graph drawn on the surface together with the map.
#[derive(Debug, Clone)]
pub struct Overlay {
    /// Cells of the map plus all Tait edges, with regions merged where a
    /// face of the overlay is not a disc.
    pub cells: Cells,
    pub map_darts: usize,
    /// Overlay vertex of each black vertex.
    pub black_vertex: Vec<usize>,
    /// Counterclockwise corner order at each black vertex.
    pub black_rotation: Vec<Vec<usize>>,
}

impl Overlay {
    pub fn white_dart(&self, corner: usize) -> usize {
        self.map_darts + 2 * corner
    }

    pub fn black_dart(&self, corner: usize) -> usize {
        self.map_darts + 2 * corner + 1
    }

    /// Corner of a Tait dart.
    pub fn corner_of(&self, d: usize) -> Option<usize> {
        (d >= self.map_darts).then(|| (d - self.map_darts) / 2)
    }

    /// Faces of the drawn graph after deleting the map.
    pub fn graph_faces(&self) -> SubMap {
        let n = self.map_darts;
        self.cells.submap(|d| d >= n)
    }

    /// Faces of the subgraph formed by the given corners' edges.
    pub fn subgraph_faces(&self, keep: &BTreeSet<usize>) -> SubMap {
        let n = self.map_darts;
        self.cells.submap(|d| d >= n && keep.contains(&((d - n) / 2)))
    }
}

/// How to embed black vertices in faces that are not discs.
#[derive(Debug, Clone, Default)]
pub struct FramingOptions {
    /// Overrides taking precedence over the file's own framing entries.
    pub overrides: Vec<FramingSpec>,
    /// Refuse to frame non-disc faces without an explicit entry.
    pub require_explicit: bool,
}

/// Builds the overlay of the Tait edges of the chosen regions.
pub fn build_overlay(mv: &Multiverse, include: &[bool], opts: &FramingOptions) -> Result<Overlay, SpineError> {
    let map = &mv.map;
    let n = map.sys.dart_count();
    let nc = mv.corners.len();
    let nv = map.vertex_count();
    let mut specs: BTreeMap<usize, &FramingSpec> = BTreeMap::new();
    for s in mv.file.framing.iter().chain(&opts.overrides) {
        specs.insert(s.face, s);
    }
    let mut rotations: Vec<Vec<usize>> = Vec::with_capacity(nv);
    for v in 0..nv {
        let mut rot = Vec::new();
        for &d in &map.sys.rotations[v] {
            rot.push(d);
            let c = mv.corner_of_dart[d];
            if c != NONE && include[mv.corners[c].face] {
                rot.push(n + 2 * c);
            }
        }
        rotations.push(rot);
    }
    let mut alpha: Vec<usize> = map.sys.alpha.clone();
    for c in 0..nc {
        alpha.push(n + 2 * c + 1);
        alpha.push(n + 2 * c);
    }
    let mut black_vertex = Vec::new();
    let mut black_rotation = Vec::new();
    // (corner-free walk orbit, corner whose black dart precedes its sector)
    let mut hole_links: Vec<(usize, Option<usize>)> = Vec::new();
    let mut plain_merges: Vec<(usize, usize)> = Vec::new();
    for (r, region) in mv.arr.regions.iter().enumerate() {
        let walk_corners: Vec<Vec<usize>> = region
            .walks
            .iter()
            .map(|&w| {
                mv.arr.orbits[w]
                    .darts
                    .iter()
                    .map(|&d| mv.corner_of_dart[d])
                    .filter(|&c| c != NONE)
                    .collect()
            })
            .collect();
        if !include[r] {
            for &w in &region.walks[1..] {
                plain_merges.push((region.walks[0], w));
            }
            continue;
        }
        let all: Vec<usize> = walk_corners.iter().flatten().copied().collect();
        let (order, holes_after) = match specs.get(&region.id) {
            Some(spec) => {
                let mut order = Vec::new();
                for &d in &spec.rotation {
                    let c = mv.corner_of_dart.get(d).copied().unwrap_or(NONE);
                    if c == NONE || mv.corners[c].face != r {
                        return Err(SpineError::Framing {
                            face: region.id,
                            reason: format!("dart {d} does not start a corner of the face"),
                        });
                    }
                    order.push(c);
                }
                let a: BTreeSet<usize> = order.iter().copied().collect();
                let b: BTreeSet<usize> = all.iter().copied().collect();
                if a != b || a.len() != order.len() {
                    return Err(SpineError::Framing {
                        face: region.id,
                        reason: "rotation must list every corner of the face once".into(),
                    });
                }
                let h = spec.holes_after.unwrap_or(order.len().saturating_sub(1));
                if !order.is_empty() && h >= order.len() {
                    return Err(SpineError::Framing {
                        face: region.id,
                        reason: "hole position out of range".into(),
                    });
                }
                (order, h)
            }
            None => {
                if opts.require_explicit && region.walks.len() > 1 {
                    return Err(SpineError::FramingRequired { face: region.id });
                }
                let h = all.len().saturating_sub(1);
                (all, h)
            }
        };
        let bv = nv + black_vertex.len();
        black_vertex.push(bv);
        rotations.push(order.iter().map(|&c| n + 2 * c + 1).collect());
        for (i, &w) in region.walks.iter().enumerate() {
            if walk_corners[i].is_empty() {
                hole_links.push((w, order.get(holes_after).copied()));
            }
        }
        if order.is_empty() {
            for &w in &region.walks[1..] {
                plain_merges.push((region.walks[0], w));
            }
        }
        black_rotation.push(order);
    }
    let sys = DartSystem::new(rotations, alpha);
    let mut cells = Cells::new(sys);
    for (a, b) in plain_merges {
        let da = mv.arr.orbits[a].darts[0];
        let db = mv.arr.orbits[b].darts[0];
        let (oa, ob) = (cells.orbit_of[da], cells.orbit_of[db]);
        cells.merge(oa, ob);
    }
    for (w, c) in hole_links {
        if let Some(c) = c {
            let dw = mv.arr.orbits[w].darts[0];
            let (oa, ob) = (cells.orbit_of[dw], cells.orbit_of[n + 2 * c + 1]);
            cells.merge(oa, ob);
        }
    }
    let overlay = Overlay {
        cells,
        map_darts: n,
        black_vertex,
        black_rotation,
    };
    check_realizable(mv, &overlay, &specs)?;
    Ok(overlay)
}

/// The overlay must live on the same surface as the map: its total genus
/// equals the genus of the map.
fn check_realizable(mv: &Multiverse, ov: &Overlay, specs: &BTreeMap<usize, &FramingSpec>) -> Result<(), SpineError> {
    let sys = &ov.cells.sys;
    let nv = sys.rotations.len();
    let mut uf = UnionFind::new(nv);
    for d in 0..sys.dart_count() {
        if sys.alive(d) {
            uf.union(sys.vertex[d], sys.vertex[sys.alpha[d]]);
        }
    }
    let mut chi: BTreeMap<usize, i64> = BTreeMap::new();
    for v in 0..nv {
        if !sys.rotations[v].is_empty() {
            *chi.entry(uf.find(v)).or_default() += 1;
        }
    }
    for d in 0..sys.dart_count() {
        if sys.alive(d) && d < sys.alpha[d] {
            *chi.entry(uf.find(sys.vertex[d])).or_default() -= 1;
        }
    }
    for o in &ov.cells.orbits {
        *chi.entry(uf.find(sys.vertex[o[0]])).or_default() += 1;
    }
    let genus: i64 = chi.values().map(|&c| (2 - c) / 2).sum();
    if genus != mv.surface.genus as i64 || chi.values().any(|&c| (2 - c) % 2 != 0) {
        let face = specs.keys().next().copied().unwrap_or(0);
        return Err(SpineError::Framing {
            face,
            reason: "rotation does not embed on the surface".into(),
        });
    }
    Ok(())
}

/// Tait graph: a white vertex per interior vertex, a black vertex per face,
/// an edge per corner. Edge ids are corner ids.
#[derive(Debug, Clone)]
pub struct TaitGraph {
    pub graph: BiGraph,
    pub overlay: Overlay,
}

pub fn build_tait(mv: &Multiverse) -> Result<TaitGraph, SpineError> {
    let include = vec![true; mv.face_count()];
    let overlay = build_overlay(mv, &include, &FramingOptions::default())?;
    let edges = mv
        .corners
        .iter()
        .enumerate()
        .map(|(c, k)| BiEdge { w: c / 4, b: k.face })
        .collect();
    Ok(TaitGraph {
        graph: BiGraph::new(mv.interior.len(), mv.face_count(), edges),
        overlay,
    })
}

/// A framed spine: white vertices are interior vertices, black vertices are
/// unstarred faces, edges are corners in unstarred faces (ordered by corner).
#[derive(Debug, Clone)]
pub struct Spine {
    pub graph: BiGraph,
    pub black_region: Vec<usize>,
    pub black_of_region: Vec<usize>,
    pub edge_corner: Vec<usize>,
    pub edge_of_corner: Vec<usize>,
    pub overlay: Overlay,
    /// Faces of the spine on the surface.
    pub faces: SubMap,
    /// Face of the spine adjacent to the outer boundary circle.
    pub outer_face: usize,
}

impl Spine {
    pub fn new(mv: &Multiverse) -> Result<Self, SpineError> {
        Self::with_framing(mv, &FramingOptions::default())
    }

    pub fn with_framing(mv: &Multiverse, opts: &FramingOptions) -> Result<Self, SpineError> {
        let include: Vec<bool> = mv.starred.iter().map(|s| !s).collect();
        let overlay = build_overlay(mv, &include, opts)?;
        let black_region: Vec<usize> = (0..mv.face_count()).filter(|&r| include[r]).collect();
        let mut black_of_region = vec![NONE; mv.face_count()];
        for (j, &r) in black_region.iter().enumerate() {
            black_of_region[r] = j;
        }
        let mut edges = Vec::new();
        let mut edge_corner = Vec::new();
        let mut edge_of_corner = vec![NONE; mv.corners.len()];
        for (c, k) in mv.corners.iter().enumerate() {
            if include[k.face] {
                edge_of_corner[c] = edges.len();
                edge_corner.push(c);
                edges.push(BiEdge {
                    w: c / 4,
                    b: black_of_region[k.face],
                });
            }
        }
        let graph = BiGraph::new(mv.interior.len(), black_region.len(), edges);
        let faces = overlay.graph_faces();
        let cap = mv.map.boundary_circles[mv.outer][0];
        let outer_face = faces.face_of_cell[overlay.cells.orbit_of[cap]];
        Ok(Spine {
            graph,
            black_region,
            black_of_region,
            edge_corner,
            edge_of_corner,
            overlay,
            faces,
            outer_face,
        })
    }

    /// Dart of edge `e` leaving its white end.
    pub fn white_dart(&self, e: usize) -> usize {
        self.overlay.white_dart(self.edge_corner[e])
    }

    pub fn black_dart(&self, e: usize) -> usize {
        self.overlay.black_dart(self.edge_corner[e])
    }

    /// Spine edge of an overlay Tait dart.
    pub fn edge_of_dart(&self, d: usize) -> Option<usize> {
        self.overlay
            .corner_of(d)
            .map(|c| self.edge_of_corner[c])
            .filter(|&e| e != NONE)
    }

    /// `(edge, from, to)` in joint numbering for a spine dart of the overlay.
    pub fn dart_step(&self, d: usize) -> Option<(usize, usize, usize)> {
        let e = self.edge_of_dart(d)?;
        let (w, b) = self.graph.ends(e);
        Some(if d == self.white_dart(e) { (e, w, b) } else { (e, b, w) })
    }

    /// A closed walk of spine darts as a directed cycle.
    pub fn walk_cycle(&self, walk: &[usize]) -> DirectedCycle {
        DirectedCycle {
            steps: walk.iter().map(|&d| self.dart_step(d).expect("spine dart")).collect(),
        }
    }

    /// Overlay dart of a directed step.
    pub fn step_dart(&self, step: (usize, usize, usize)) -> usize {
        let (e, from, _) = step;
        if from < self.graph.nw {
            self.white_dart(e)
        } else {
            self.black_dart(e)
        }
    }

    pub fn state_to_matching(&self, mv: &Multiverse, s: &State) -> Result<Matching, SpineError> {
        if !mv.is_state(s) {
            return Err(SpineError::InvalidState);
        }
        let mut edges: Vec<usize> = s.choice.iter().map(|&c| self.edge_of_corner[c]).collect();
        edges.sort_unstable();
        Ok(Matching { edges })
    }

    pub fn matching_to_state(&self, m: &Matching) -> Result<State, SpineError> {
        if !self.graph.is_matching(m) {
            return Err(SpineError::InvalidMatching);
        }
        let mut choice = vec![NONE; self.graph.nw];
        for &e in &m.edges {
            choice[self.graph.edges[e].w] = self.edge_corner[e];
        }
        Ok(State { choice })
    }

    /// Graphviz rendering: white and black vertices, forced edges bold,
    /// forbidden edges dashed.
    pub fn export_dot(&self, mv: &Multiverse, reduced: bool) -> String {
        let tags = self.graph.classify_edges();
        let mut s = String::from("graph spine {\n  node [shape=circle, style=filled];\n");
        for w in 0..self.graph.nw {
            let _ = writeln!(s, "  w{w} [fillcolor=white, label=\"v{}\"];", mv.interior[w]);
        }
        for b in 0..self.graph.nb {
            let _ = writeln!(
                s,
                "  b{b} [fillcolor=black, fontcolor=white, label=\"f{}\"];",
                mv.face_id(self.black_region[b])
            );
        }
        for (e, edge) in self.graph.edges.iter().enumerate() {
            let style = match tags[e] {
                EdgeTag::Forced => "style=bold, color=blue",
                EdgeTag::Forbidden if reduced => continue,
                EdgeTag::Forbidden => "style=dashed, color=gray",
                EdgeTag::Free => "color=black",
            };
            let _ = writeln!(
                s,
                "  w{} -- b{} [label=\"c{}\", {style}];",
                edge.w, edge.b, self.edge_corner[e]
            );
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> BiGraph {
        // w0-b0, w0-b1, w1-b0, w1-b1
        BiGraph::new(
            2,
            2,
            vec![
                BiEdge { w: 0, b: 0 },
                BiEdge { w: 0, b: 1 },
                BiEdge { w: 1, b: 0 },
                BiEdge { w: 1, b: 1 },
            ],
        )
    }

    #[test]
    fn small_matchings() {
        let one = BiGraph::new(1, 1, vec![BiEdge { w: 0, b: 0 }]);
        assert_eq!(one.enumerate_matchings().len(), 1);
        assert_eq!(square().enumerate_matchings().len(), 2);
        let iso = BiGraph::new(1, 2, vec![BiEdge { w: 0, b: 0 }]);
        assert!(iso.enumerate_matchings().is_empty());
        assert_eq!(square().classify_edges(), vec![EdgeTag::Free; 4]);
    }

    #[test]
    fn pendant_forces_and_forbids() {
        // b0 has degree 1 via w0; w0's other edge to b1 is forbidden.
        let g = BiGraph::new(
            2,
            2,
            vec![BiEdge { w: 0, b: 0 }, BiEdge { w: 0, b: 1 }, BiEdge { w: 1, b: 1 }],
        );
        let t = g.classify_edges();
        assert_eq!(t, vec![EdgeTag::Forced, EdgeTag::Forbidden, EdgeTag::Forced]);
        let r = g.reduce();
        assert_eq!(r.components.len(), 2);
        assert!(r.components.iter().all(|c| c.kind == ComponentKind::ForcedEdge));
        assert_eq!(r.graph.enumerate_matchings(), g.enumerate_matchings());
        let none = BiGraph::new(1, 2, vec![BiEdge { w: 0, b: 0 }, BiEdge { w: 0, b: 1 }]);
        let r = none.reduce();
        assert_eq!(r.graph.live_edges().count(), 0);
        assert!(r.components.iter().all(|c| c.kind == ComponentKind::Isolated));
    }

    #[test]
    fn twisting_a_square() {
        let g = square();
        let m = Matching { edges: vec![0, 3] };
        let cycles = g.alternating_cycles(&m, None);
        assert_eq!(cycles.len(), 1);
        let m2 = g.twist(&m, &cycles[0]).unwrap();
        assert_eq!(m2.edges, vec![1, 2]);
        assert_eq!(g.twist(&m2, &cycles[0].reversed()).unwrap(), m);
        let bad = DirectedCycle {
            steps: vec![(0, 0, 2), (1, 2, 0)],
        };
        assert_eq!(g.twist(&m, &bad), Err(SpineError::NotAlternating));
    }

    #[test]
    fn repeated_cycle_is_not_vertex_simple() {
        let g = square();
        let m = Matching { edges: vec![0, 3] };
        let a = g.alternating_cycles(&m, None).remove(0);
        let mut twice = a.clone();
        twice.steps.extend(a.steps.iter().copied());
        assert!(!twice.is_vertex_simple());
        assert_eq!(g.twist(&m, &twice), Err(SpineError::NotVertexSimple));
    }

    #[test]
    fn disjoint_squares_have_two_cycles() {
        let e = |w, b| BiEdge { w, b };
        let g = BiGraph::new(
            4,
            4,
            vec![e(0, 0), e(0, 1), e(1, 0), e(1, 1), e(2, 2), e(2, 3), e(3, 2), e(3, 3)],
        );
        let m = Matching {
            edges: vec![0, 3, 4, 7],
        };
        assert_eq!(g.alternating_cycles(&m, None).len(), 2);
    }

    #[test]
    fn trefoil_spine() {
        let mv = Multiverse::new(crate::sketch::trefoil_sketch().layout().unwrap().file).unwrap();
        let t = build_tait(&mv).unwrap();
        assert_eq!((t.graph.nw, t.graph.nb, t.graph.edges.len()), (3, 5, 12));
        let sp = Spine::new(&mv).unwrap();
        assert_eq!((sp.graph.nw, sp.graph.nb), (3, 3));
        let states = mv.enumerate_states();
        let ms = sp.graph.enumerate_matchings();
        assert_eq!(states.len(), ms.len());
        for s in &states {
            let m = sp.state_to_matching(&mv, s).unwrap();
            assert!(ms.contains(&m));
            assert_eq!(&sp.matching_to_state(&m).unwrap(), s);
        }
        // non-outer faces away from the boundary are quadrilaterals
        for (f, face) in sp.faces.faces.iter().enumerate() {
            if f != sp.outer_face && face.walks.len() == 1 {
                assert_eq!(face.walks[0].len(), 4, "face {f}");
            }
        }
    }
}
