//! Dart-based combinatorial maps on compact oriented surfaces with boundary.
//!
//! Rotations list the darts around a vertex counterclockwise. A face walk keeps
//! its face on the left, so the walk successor of a dart `d` is `σ⁻¹(α(d))`.
//! A corner of a vertex is the sector from a dart `d` counterclockwise to
//! `σ(d)`; it lies in the face whose walk contains `d`.
//!
//! Boundary circles are closed walks of boundary arcs. Each listed walk is the
//! walk around the disc that caps the circle, so it lies outside the surface;
//! the partner darts of its arcs face the surface.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

pub(crate) const NONE: usize = usize::MAX;

/// One connected component of a map as written in an input file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    /// Counterclockwise dart rotation of each vertex.
    pub vertices: Vec<Vec<usize>>,
    /// Involution pairs.
    pub edges: Vec<[usize; 2]>,
    /// Boundary circles, each as the cyclic walk of arcs around its cap.
    #[serde(default)]
    pub boundary: Vec<Vec<usize>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("dart {0} has no involution partner")]
    DanglingDart(usize),
    #[error("dart {0} appears in more than one rotation slot")]
    RotationOverlap(usize),
    #[error("boundary circle {0} is not a closed walk of boundary arcs")]
    OpenBoundaryCircle(usize),
    #[error("dart {0} is missing from every rotation")]
    UnknownDart(usize),
    #[error("dart {0} is paired more than once")]
    DuplicatePairing(usize),
    #[error("vertex {0} has no darts")]
    EmptyVertex(usize),
    #[error("component {0} is not connected")]
    DisconnectedComponent(usize),
    #[error("edge {0}-{1} joins two components")]
    CrossComponentEdge(usize, usize),
    #[error("inconsistent Euler characteristic {chi} with {boundary} boundary circles")]
    NonIntegerGenus { chi: i64, boundary: usize },
    #[error("containment is cyclic through component {0}")]
    CyclicContainment(usize),
    #[error("component {component} is placed in unknown face {face}")]
    UnknownParentFace { component: usize, face: usize },
    #[error("component {component} has no face {face} to serve as its outer face")]
    BadOuterFace { component: usize, face: usize },
    #[error("component {0} needs an explicit outer face")]
    MissingOuterFace(usize),
    #[error("component {0} is placed more than once")]
    DuplicatePlacement(usize),
    #[error("components {0:?} have no parent; exactly one root is allowed")]
    RootCount(Vec<usize>),
    #[error("disconnected maps must be planar; component {0} has positive genus")]
    NonPlanarArrangement(usize),
    #[error("unknown component {0}")]
    UnknownComponent(usize),
    #[error("unknown boundary circle {0}")]
    UnknownCircle(usize),
    #[error("the outer circle must lie on the root component")]
    OuterNotRoot,
}

/// A rotation system: darts, their vertices, the edge involution and the
/// counterclockwise successor at each vertex. Darts outside every rotation are
/// dead, which is how submaps are represented.
#[derive(Debug, Clone)]
pub struct DartSystem {
    pub vertex: Vec<usize>,
    pub alpha: Vec<usize>,
    pub next: Vec<usize>,
    pub prev: Vec<usize>,
    pub rotations: Vec<Vec<usize>>,
}

impl DartSystem {
    pub fn new(rotations: Vec<Vec<usize>>, alpha: Vec<usize>) -> Self {
        let n = alpha.len();
        let mut vertex = vec![NONE; n];
        let mut next = vec![NONE; n];
        let mut prev = vec![NONE; n];
        for (v, rot) in rotations.iter().enumerate() {
            for (i, &d) in rot.iter().enumerate() {
                let s = rot[(i + 1) % rot.len()];
                vertex[d] = v;
                next[d] = s;
                prev[s] = d;
            }
        }
        DartSystem {
            vertex,
            alpha,
            next,
            prev,
            rotations,
        }
    }

    pub fn dart_count(&self) -> usize {
        self.alpha.len()
    }

    pub fn alive(&self, d: usize) -> bool {
        self.vertex[d] != NONE
    }

    /// Successor of `d` along the face on its left.
    pub fn face_next(&self, d: usize) -> usize {
        self.prev[self.alpha[d]]
    }

    /// Face orbits of the live darts, each starting at its smallest dart,
    /// sorted by that dart.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = self.dart_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for d in 0..n {
            if seen[d] || !self.alive(d) {
                continue;
            }
            let mut walk = Vec::new();
            let mut x = d;
            while !seen[x] {
                seen[x] = true;
                walk.push(x);
                x = self.face_next(x);
            }
            out.push(walk);
        }
        out
    }

    /// Keeps only darts accepted by `keep`, which must be closed under the
    /// involution. Vertex numbering is preserved.
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> DartSystem {
        let rotations = self
            .rotations
            .iter()
            .map(|rot| rot.iter().copied().filter(|&d| keep(d)).collect())
            .collect();
        DartSystem::new(rotations, self.alpha.clone())
    }

    pub fn live_edge_count(&self) -> usize {
        (0..self.dart_count()).filter(|&d| self.alive(d)).count() / 2
    }
}

/// Union-find over face orbits, used to track regions of a surface while
/// edges are deleted from a map drawn on it.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let p = self.parent[y];
            self.parent[y] = r;
            y = p;
        }
        r
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// A map drawn on a closed surface, together with the partition of the
/// surface into regions. Each orbit is a cell; cells already known to lie in a
/// common region are merged up front.
#[derive(Debug, Clone)]
pub struct Cells {
    pub sys: DartSystem,
    pub orbits: Vec<Vec<usize>>,
    pub orbit_of: Vec<usize>,
    pub regions: UnionFind,
}

/// A face of a submap: its boundary walks and the cells of the full map it
/// contains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubFace {
    pub walks: Vec<Vec<usize>>,
    pub cells: Vec<usize>,
}

/// Faces of a submap, with lookups from darts and from cells of the full map.
#[derive(Debug, Clone)]
pub struct SubMap {
    pub sys: DartSystem,
    pub faces: Vec<SubFace>,
    pub face_of_dart: Vec<usize>,
    pub face_of_cell: Vec<usize>,
}

impl Cells {
    pub fn new(sys: DartSystem) -> Self {
        let orbits = sys.orbits();
        let mut orbit_of = vec![NONE; sys.dart_count()];
        for (i, o) in orbits.iter().enumerate() {
            for &d in o {
                orbit_of[d] = i;
            }
        }
        let regions = UnionFind::new(orbits.len());
        Cells {
            sys,
            orbits,
            orbit_of,
            regions,
        }
    }

    pub fn merge(&mut self, a: usize, b: usize) {
        self.regions.union(a, b);
    }

    /// Faces of the submap formed by the live darts accepted by `keep`
    /// (closed under the involution). Deleting an edge merges the regions on
    /// its two sides.
    pub fn submap(&self, keep: impl Fn(usize) -> bool) -> SubMap {
        let sub = self.sys.restrict(&keep);
        let mut uf = self.regions.clone();
        for d in 0..self.sys.dart_count() {
            if self.sys.alive(d) && !sub.alive(d) {
                uf.union(self.orbit_of[d], self.orbit_of[self.sys.alpha[d]]);
            }
        }
        let walks = sub.orbits();
        let mut root_walks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, w) in walks.iter().enumerate() {
            let r = uf.find(self.orbit_of[w[0]]);
            root_walks.entry(r).or_default().push(i);
        }
        let mut roots: Vec<(usize, usize)> = Vec::new();
        let mut seen = BTreeSet::new();
        for c in 0..self.orbits.len() {
            let r = uf.find(c);
            if seen.insert(r) {
                let key = root_walks
                    .get(&r)
                    .map(|ws| walks[ws[0]][0])
                    .unwrap_or(usize::MAX / 2 + c);
                roots.push((key, r));
            }
        }
        roots.sort();
        let mut face_index = BTreeMap::new();
        for (i, &(_, r)) in roots.iter().enumerate() {
            face_index.insert(r, i);
        }
        let mut faces: Vec<SubFace> = roots
            .iter()
            .map(|&(_, r)| SubFace {
                walks: root_walks
                    .get(&r)
                    .map(|ws| ws.iter().map(|&i| walks[i].clone()).collect())
                    .unwrap_or_default(),
                cells: Vec::new(),
            })
            .collect();
        let mut face_of_cell = vec![0; self.orbits.len()];
        for c in 0..self.orbits.len() {
            let f = face_index[&uf.find(c)];
            face_of_cell[c] = f;
            faces[f].cells.push(c);
        }
        let mut face_of_dart = vec![NONE; sub.dart_count()];
        for (f, face) in faces.iter().enumerate() {
            for w in &face.walks {
                for &d in w {
                    face_of_dart[d] = f;
                }
            }
        }
        SubMap {
            sys: sub,
            faces,
            face_of_dart,
            face_of_cell,
        }
    }
}

/// A validated combinatorial map with boundary circles.
#[derive(Debug, Clone)]
pub struct CombinatorialMap {
    pub sys: DartSystem,
    pub is_boundary_arc: Vec<bool>,
    pub boundary_circles: Vec<Vec<usize>>,
    pub circle_of_dart: Vec<usize>,
    pub vertex_component: Vec<usize>,
    pub component_count: usize,
}

/// A traced face orbit of the map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceWalk {
    pub darts: Vec<usize>,
    /// Boundary circles whose arcs this walk runs along on the surface side.
    pub touches_boundary: Vec<usize>,
    /// The boundary circle this walk caps, if any.
    pub cap_of: Option<usize>,
}

impl CombinatorialMap {
    pub fn build(components: &[ComponentSpec]) -> Result<Self, MapError> {
        let mut rotations = Vec::new();
        let mut vertex_component = Vec::new();
        let mut max = None::<usize>;
        for (c, comp) in components.iter().enumerate() {
            for rot in &comp.vertices {
                if rot.is_empty() {
                    return Err(MapError::EmptyVertex(rotations.len()));
                }
                for &d in rot {
                    max = Some(max.map_or(d, |m: usize| m.max(d)));
                }
                rotations.push(rot.clone());
                vertex_component.push(c);
            }
            for e in &comp.edges {
                for &d in e {
                    max = Some(max.map_or(d, |m: usize| m.max(d)));
                }
            }
        }
        let n = max.map_or(0, |m| m + 1);
        let mut placed = vec![false; n];
        for rot in &rotations {
            for &d in rot {
                if placed[d] {
                    return Err(MapError::RotationOverlap(d));
                }
                placed[d] = true;
            }
        }
        if let Some(d) = placed.iter().position(|p| !p) {
            return Err(MapError::UnknownDart(d));
        }
        let mut alpha = vec![NONE; n];
        for comp in components {
            for &[a, b] in &comp.edges {
                if a == b {
                    return Err(MapError::DanglingDart(a));
                }
                for d in [a, b] {
                    if alpha[d] != NONE {
                        return Err(MapError::DuplicatePairing(d));
                    }
                }
                alpha[a] = b;
                alpha[b] = a;
            }
        }
        if let Some(d) = alpha.iter().position(|&p| p == NONE) {
            return Err(MapError::DanglingDart(d));
        }
        let sys = DartSystem::new(rotations, alpha);
        for d in 0..n {
            let (u, v) = (sys.vertex[d], sys.vertex[sys.alpha[d]]);
            if vertex_component[u] != vertex_component[v] {
                return Err(MapError::CrossComponentEdge(d, sys.alpha[d]));
            }
        }
        let component_count = components.len();
        let mut uf = UnionFind::new(sys.rotations.len());
        for d in 0..n {
            uf.union(sys.vertex[d], sys.vertex[sys.alpha[d]]);
        }
        let mut comp_root = vec![NONE; component_count];
        for v in 0..sys.rotations.len() {
            let c = vertex_component[v];
            let r = uf.find(v);
            if comp_root[c] == NONE {
                comp_root[c] = r;
            } else if comp_root[c] != r {
                return Err(MapError::DisconnectedComponent(c));
            }
        }
        let mut is_boundary_arc = vec![false; n];
        let mut circle_of_dart = vec![NONE; n];
        let mut boundary_circles = Vec::new();
        for comp in components {
            for walk in &comp.boundary {
                let id = boundary_circles.len();
                if walk.is_empty() {
                    return Err(MapError::OpenBoundaryCircle(id));
                }
                for (i, &d) in walk.iter().enumerate() {
                    if d >= n || circle_of_dart[d] != NONE || circle_of_dart[sys.alpha[d]] != NONE {
                        return Err(MapError::OpenBoundaryCircle(id));
                    }
                    if sys.face_next(d) != walk[(i + 1) % walk.len()] {
                        return Err(MapError::OpenBoundaryCircle(id));
                    }
                    circle_of_dart[d] = id;
                }
                if walk
                    .iter()
                    .any(|&d| vertex_component[sys.vertex[d]] != vertex_component[sys.vertex[walk[0]]])
                {
                    return Err(MapError::OpenBoundaryCircle(id));
                }
                for &d in walk {
                    is_boundary_arc[d] = true;
                    is_boundary_arc[sys.alpha[d]] = true;
                }
                boundary_circles.push(walk.clone());
            }
        }
        let map = CombinatorialMap {
            sys,
            is_boundary_arc,
            boundary_circles,
            circle_of_dart,
            vertex_component,
            component_count,
        };
        for c in 0..component_count {
            map.component_genus(c)?;
        }
        Ok(map)
    }

    pub fn vertex_count(&self) -> usize {
        self.sys.rotations.len()
    }

    pub fn edge_count(&self) -> usize {
        self.sys.dart_count() / 2
    }

    pub fn component_of_dart(&self, d: usize) -> usize {
        self.vertex_component[self.sys.vertex[d]]
    }

    /// Number of darts at `v` that are not boundary arcs.
    pub fn graph_degree(&self, v: usize) -> usize {
        self.sys.rotations[v]
            .iter()
            .filter(|&&d| !self.is_boundary_arc[d])
            .count()
    }

    pub fn circle_component(&self, k: usize) -> usize {
        self.component_of_dart(self.boundary_circles[k][0])
    }

    /// Genus of a component, closing each boundary circle with a disc.
    pub fn component_genus(&self, c: usize) -> Result<usize, MapError> {
        let v = (0..self.vertex_count())
            .filter(|&v| self.vertex_component[v] == c)
            .count() as i64;
        let darts: Vec<usize> = (0..self.sys.dart_count())
            .filter(|&d| self.component_of_dart(d) == c)
            .collect();
        let e = darts.len() as i64 / 2;
        let faces = self
            .sys
            .orbits()
            .iter()
            .filter(|o| self.component_of_dart(o[0]) == c)
            .count() as i64;
        let chi = v - e + faces;
        let circles = (0..self.boundary_circles.len())
            .filter(|&k| self.circle_component(k) == c)
            .count();
        if chi > 2 || (2 - chi) % 2 != 0 {
            return Err(MapError::NonIntegerGenus {
                chi: chi - circles as i64,
                boundary: circles,
            });
        }
        Ok(((2 - chi) / 2) as usize)
    }

    /// Traces every face orbit, sorted by smallest dart. Orbit indices are the
    /// face ids used in input files.
    pub fn trace_faces(&self) -> Vec<FaceWalk> {
        self.sys
            .orbits()
            .into_iter()
            .map(|darts| {
                let cap_of = Some(self.circle_of_dart[darts[0]]).filter(|&k| k != NONE);
                let mut touches: BTreeSet<usize> = BTreeSet::new();
                if cap_of.is_none() {
                    for &d in &darts {
                        let k = self.circle_of_dart[self.sys.alpha[d]];
                        if k != NONE {
                            touches.insert(k);
                        }
                    }
                }
                FaceWalk {
                    darts,
                    touches_boundary: touches.into_iter().collect(),
                    cap_of,
                }
            })
            .collect()
    }
}

/// Placement of a component inside a face of its parent. `outer_face` is the
/// face of the child that merges with the parent face.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Placement {
    pub component: usize,
    pub parent: usize,
    pub parent_face: usize,
    pub outer_face: Option<usize>,
}

/// Nesting of the components of a disconnected planar map.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ContainmentForest {
    pub placements: Vec<Placement>,
}

impl ContainmentForest {
    /// Reads `[component, parent, parent_face]` or
    /// `[component, parent, parent_face, outer_face]` rows.
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self, String> {
        let mut placements = Vec::new();
        for row in rows {
            let p = match row.as_slice() {
                [c, p, f] => Placement {
                    component: *c,
                    parent: *p,
                    parent_face: *f,
                    outer_face: None,
                },
                [c, p, f, o] => Placement {
                    component: *c,
                    parent: *p,
                    parent_face: *f,
                    outer_face: Some(*o),
                },
                _ => return Err(format!("containment row {row:?} must have 3 or 4 entries")),
            };
            placements.push(p);
        }
        Ok(ContainmentForest { placements })
    }

    pub fn to_rows(&self) -> Vec<Vec<usize>> {
        self.placements
            .iter()
            .map(|p| {
                let mut r = vec![p.component, p.parent, p.parent_face];
                r.extend(p.outer_face);
                r
            })
            .collect()
    }
}

/// A face of the arranged map on the surface: a union of face orbits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Region {
    /// Smallest orbit id in the region; the public face id.
    pub id: usize,
    pub walks: Vec<usize>,
    pub boundary_circles: Vec<usize>,
    pub is_disc: bool,
}

/// Global face structure of a map after nesting its components.
#[derive(Debug, Clone)]
pub struct Arrangement {
    pub orbits: Vec<FaceWalk>,
    pub orbit_of_dart: Vec<usize>,
    pub region_of_orbit: Vec<Option<usize>>,
    pub regions: Vec<Region>,
    pub root: usize,
    pub outer_circle: Option<usize>,
    pub genus: usize,
    pub forest: ContainmentForest,
}

impl Arrangement {
    pub fn region_of_face_id(&self, id: usize) -> Option<usize> {
        self.region_of_orbit.get(id).copied().flatten()
    }

    pub fn region_of_dart(&self, d: usize) -> Option<usize> {
        self.region_of_orbit[self.orbit_of_dart[d]]
    }

    /// The region adjacent to the outer circle.
    pub fn outer_region(&self, map: &CombinatorialMap) -> Option<usize> {
        let k = self.outer_circle?;
        let d = map.sys.alpha[map.boundary_circles[k][0]];
        self.region_of_dart(d)
    }
}

/// Surface data of an arranged map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SurfaceStats {
    pub v: usize,
    pub e: usize,
    pub f: usize,
    pub chi: i64,
    pub genus: usize,
    pub boundary_count: usize,
    pub outer_boundary: Option<usize>,
}

/// Computes the global faces of the map. Components other than the root must
/// each be placed in a face of a parent component.
pub fn assemble_arrangement(
    map: &CombinatorialMap,
    forest: &ContainmentForest,
    outer_circle: Option<usize>,
) -> Result<Arrangement, MapError> {
    let orbits = map.trace_faces();
    let mut orbit_of_dart = vec![NONE; map.sys.dart_count()];
    for (i, o) in orbits.iter().enumerate() {
        for &d in &o.darts {
            orbit_of_dart[d] = i;
        }
    }
    let orbit_component: Vec<usize> = orbits.iter().map(|o| map.component_of_dart(o.darts[0])).collect();
    let nc = map.component_count;
    if let Some(k) = outer_circle {
        if k >= map.boundary_circles.len() {
            return Err(MapError::UnknownCircle(k));
        }
    }
    let mut parent: Vec<Option<Placement>> = vec![None; nc];
    for p in &forest.placements {
        if p.component >= nc {
            return Err(MapError::UnknownComponent(p.component));
        }
        if p.parent >= nc {
            return Err(MapError::UnknownComponent(p.parent));
        }
        if parent[p.component].is_some() {
            return Err(MapError::DuplicatePlacement(p.component));
        }
        parent[p.component] = Some(*p);
    }
    let roots: Vec<usize> = (0..nc).filter(|&c| parent[c].is_none()).collect();
    if roots.len() != 1 {
        return Err(MapError::RootCount(roots));
    }
    let root = roots[0];
    for c in 0..nc {
        let mut x = c;
        for _ in 0..=nc {
            match parent[x] {
                Some(p) => x = p.parent,
                None => break,
            }
        }
        if parent[x].is_some() {
            return Err(MapError::CyclicContainment(c));
        }
    }
    if let Some(k) = outer_circle {
        if map.circle_component(k) != root {
            return Err(MapError::OuterNotRoot);
        }
    }
    let mut genus = 0;
    for c in 0..nc {
        let g = map.component_genus(c)?;
        if nc > 1 && g > 0 {
            return Err(MapError::NonPlanarArrangement(c));
        }
        genus += g;
    }
    let mut outer_of = vec![None; nc];
    for c in 0..nc {
        let Some(p) = parent[c] else { continue };
        let own: Vec<usize> = (0..orbits.len())
            .filter(|&i| orbit_component[i] == c && orbits[i].cap_of.is_none())
            .collect();
        let o = match p.outer_face {
            Some(o) => o,
            None if own.len() == 1 => own[0],
            None => return Err(MapError::MissingOuterFace(c)),
        };
        if !own.contains(&o) {
            return Err(MapError::BadOuterFace { component: c, face: o });
        }
        outer_of[c] = Some(o);
    }
    let mut uf = UnionFind::new(orbits.len());
    for c in 0..nc {
        let Some(p) = parent[c] else { continue };
        let f = p.parent_face;
        let ok = f < orbits.len()
            && orbit_component[f] == p.parent
            && orbits[f].cap_of.is_none()
            && outer_of[p.parent] != Some(f);
        if !ok {
            return Err(MapError::UnknownParentFace { component: c, face: f });
        }
        uf.union(f, outer_of[c].unwrap());
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, o) in orbits.iter().enumerate() {
        if o.cap_of.is_none() {
            groups.entry(uf.find(i)).or_default().push(i);
        }
    }
    let mut regions: Vec<Region> = groups
        .into_values()
        .map(|walks| {
            let circles: BTreeSet<usize> = walks
                .iter()
                .flat_map(|&w| orbits[w].touches_boundary.iter().copied())
                .collect();
            Region {
                id: walks[0],
                is_disc: walks.len() == 1,
                walks,
                boundary_circles: circles.into_iter().collect(),
            }
        })
        .collect();
    regions.sort_by_key(|r| r.id);
    let mut region_of_orbit = vec![None; orbits.len()];
    for (ri, r) in regions.iter().enumerate() {
        for &w in &r.walks {
            region_of_orbit[w] = Some(ri);
        }
    }
    Ok(Arrangement {
        orbits,
        orbit_of_dart,
        region_of_orbit,
        regions,
        root,
        outer_circle,
        genus,
        forest: forest.clone(),
    })
}

/// Euler characteristic, genus and counts of the arranged surface.
pub fn surface_stats(map: &CombinatorialMap, arr: &Arrangement) -> Result<SurfaceStats, MapError> {
    let b = map.boundary_circles.len();
    let v = map.vertex_count();
    let e = map.edge_count();
    let f = arr.regions.len();
    let chi_closed: i64 = if map.component_count == 1 {
        v as i64 - e as i64 + arr.orbits.len() as i64
    } else {
        2
    };
    if (2 - chi_closed) % 2 != 0 || chi_closed > 2 {
        return Err(MapError::NonIntegerGenus {
            chi: chi_closed - b as i64,
            boundary: b,
        });
    }
    let chi = chi_closed - b as i64;
    let genus = ((2 - chi - b as i64) / 2) as usize;
    Ok(SurfaceStats {
        v,
        e,
        f,
        chi,
        genus,
        boundary_count: b,
        outer_boundary: arr.outer_circle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(vertices: Vec<Vec<usize>>, edges: Vec<[usize; 2]>, boundary: Vec<Vec<usize>>) -> ComponentSpec {
        ComponentSpec {
            vertices,
            edges,
            boundary,
        }
    }

    #[test]
    fn loop_on_sphere_has_two_faces() {
        let m = CombinatorialMap::build(&[comp(vec![vec![0, 1]], vec![[0, 1]], vec![])]).unwrap();
        assert_eq!(m.trace_faces().len(), 2);
        let arr = assemble_arrangement(&m, &ContainmentForest::default(), None).unwrap();
        let s = surface_stats(&m, &arr).unwrap();
        assert_eq!((s.chi, s.genus), (2, 0));
    }

    #[test]
    fn theta_graph() {
        let m = CombinatorialMap::build(&[comp(
            vec![vec![0, 2, 4], vec![1, 5, 3]],
            vec![[0, 1], [2, 3], [4, 5]],
            vec![],
        )])
        .unwrap();
        let arr = assemble_arrangement(&m, &ContainmentForest::default(), None).unwrap();
        let s = surface_stats(&m, &arr).unwrap();
        assert_eq!((s.v, s.e, s.f, s.chi), (2, 3, 3, 2));
    }

    #[test]
    fn self_paired_dart_is_dangling() {
        let err = CombinatorialMap::build(&[comp(vec![vec![0, 1]], vec![[0, 1], [1, 1]], vec![])]).unwrap_err();
        assert!(matches!(err, MapError::DanglingDart(_) | MapError::DuplicatePairing(_)));
        let err = CombinatorialMap::build(&[comp(vec![vec![0, 1, 2, 3, 4, 5]], vec![[0, 1], [2, 3], [5, 5]], vec![])])
            .unwrap_err();
        assert_eq!(err, MapError::DanglingDart(5));
    }

    #[test]
    fn rotation_overlap_rejected() {
        let err = CombinatorialMap::build(&[comp(vec![vec![0, 1], vec![1]], vec![[0, 1]], vec![])]).unwrap_err();
        assert_eq!(err, MapError::RotationOverlap(1));
    }

    #[test]
    fn torus_square() {
        let m = CombinatorialMap::build(&[comp(vec![vec![0, 1, 2, 3]], vec![[0, 2], [1, 3]], vec![])]).unwrap();
        assert_eq!(m.trace_faces().len(), 1);
        let arr = assemble_arrangement(&m, &ContainmentForest::default(), None).unwrap();
        let s = surface_stats(&m, &arr).unwrap();
        assert_eq!((s.chi, s.genus), (0, 1));
    }

    #[test]
    fn empty_disc_and_annulus() {
        let disc = comp(vec![vec![0, 1]], vec![[0, 1]], vec![vec![0]]);
        let m = CombinatorialMap::build(std::slice::from_ref(&disc)).unwrap();
        let arr = assemble_arrangement(&m, &ContainmentForest::default(), Some(0)).unwrap();
        let s = surface_stats(&m, &arr).unwrap();
        assert_eq!((s.f, s.chi, s.genus), (1, 1, 0));

        let hole = comp(vec![vec![2, 3]], vec![[2, 3]], vec![vec![3]]);
        let m = CombinatorialMap::build(&[disc, hole]).unwrap();
        let forest = ContainmentForest::from_rows(&[vec![1, 0, 1]]).unwrap();
        let arr = assemble_arrangement(&m, &forest, Some(0)).unwrap();
        let s = surface_stats(&m, &arr).unwrap();
        assert_eq!((s.f, s.chi, s.genus, s.boundary_count), (1, 0, 0, 2));
        assert!(!arr.regions[0].is_disc);
    }

    #[test]
    fn nesting_loop_in_theta() {
        let theta = comp(vec![vec![0, 2, 4], vec![1, 5, 3]], vec![[0, 1], [2, 3], [4, 5]], vec![]);
        let lp = comp(vec![vec![6, 7]], vec![[6, 7]], vec![]);
        let m = CombinatorialMap::build(&[theta, lp]).unwrap();
        let faces = m.trace_faces();
        assert_eq!(faces.len(), 5);
        let forest = ContainmentForest::from_rows(&[vec![1, 0, 0, 3]]).unwrap();
        let arr = assemble_arrangement(&m, &forest, None).unwrap();
        assert_eq!(arr.regions.len(), 4);
        let bad = ContainmentForest::from_rows(&[vec![1, 0, 9, 3]]).unwrap();
        assert!(matches!(
            assemble_arrangement(&m, &bad, None),
            Err(MapError::UnknownParentFace { .. })
        ));
        let cyc = ContainmentForest::from_rows(&[vec![1, 0, 0, 3], vec![0, 1, 4, 0]]).unwrap();
        assert!(assemble_arrangement(&m, &cyc, None).is_err());
    }
}
