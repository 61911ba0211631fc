//! Multiverses: a graph with vertices of degree 1 and 4 on a surface with a
//! distinguished outer boundary circle, plus starred faces along that circle.
//! Corners, states, Euler counts and the input file format live here.

use crate::combmap::{
    assemble_arrangement, surface_stats, Arrangement, CombinatorialMap, ComponentSpec, ContainmentForest, MapError,
    SurfaceStats, UnionFind, NONE,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// Explicit rotation of the spine vertex inside one face, overriding the
/// default framing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FramingSpec {
    /// Face id.
    pub face: usize,
    /// Corners of the face, named by their first dart, in counterclockwise
    /// order around the spine vertex.
    pub rotation: Vec<usize>,
    /// Position in `rotation` after which boundary walks without corners sit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub holes_after: Option<usize>,
}

/// The on-disk description of a multiverse.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiverseFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub components: Vec<ComponentSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub containment: Vec<Vec<usize>>,
    /// Boundary circle id of the outer boundary.
    pub outer: usize,
    /// Starred face ids.
    pub starred: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub framing: Vec<FramingSpec>,
}

impl MultiverseFile {
    pub fn from_json(text: &str) -> Result<Self, MultiverseError> {
        serde_json::from_str(text).map_err(|e| MultiverseError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).unwrap();
        s.push('\n');
        s
    }
}

/// One violated clause of the multiverse definition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    BadDegree { vertex: usize, degree: usize },
    StarCountMismatch { expected: i64, found: usize },
    StarNotOnOuterBoundary { face: usize },
    UnknownFace { face: usize },
    DuplicateStar { face: usize },
    OddBoundaryVertices { count: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BadDegree { vertex, degree } => {
                write!(f, "BadDegree: vertex {vertex} has degree {degree}")
            }
            Violation::StarCountMismatch { expected, found } => {
                write!(
                    f,
                    "StarCountMismatch: F - V_int = {expected} but {found} faces are starred"
                )
            }
            Violation::StarNotOnOuterBoundary { face } => {
                write!(
                    f,
                    "StarNotOnOuterBoundary: face {face} does not meet the outer boundary"
                )
            }
            Violation::UnknownFace { face } => write!(f, "UnknownFace: {face}"),
            Violation::DuplicateStar { face } => write!(f, "DuplicateStar: {face}"),
            Violation::OddBoundaryVertices { count } => write!(f, "OddBoundaryVertices: {count}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MultiverseError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("invalid multiverse: {}", .0.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(ValidationReport),
    #[error("vertex {0} is not an interior vertex")]
    NotInteriorVertex(usize),
    #[error("Euler identity hypothesis fails at face {0}: not a disc or an annulus on a boundary circle")]
    HypothesisViolated(usize),
    #[error("framing of face {face}: {reason}")]
    Framing { face: usize, reason: String },
}

/// The sector of an interior vertex from `after_dart` counterclockwise to
/// the next dart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Corner {
    pub vertex: usize,
    pub after_dart: usize,
    /// Region index of the face containing the corner.
    pub face: usize,
}

/// A choice of one corner per interior vertex, stored as corner ids indexed
/// by interior vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct State {
    pub choice: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MultiverseStats {
    pub v_int: usize,
    pub v_boundary: usize,
    pub n: usize,
    pub f: usize,
    pub star_count: usize,
    pub b: usize,
    pub chi: i64,
    pub genus: usize,
}

/// Both sides of `F - V_int = N + χ + b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EulerCheck {
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
}

/// A validated multiverse.
#[derive(Debug, Clone)]
pub struct Multiverse {
    pub file: MultiverseFile,
    pub map: CombinatorialMap,
    pub arr: Arrangement,
    pub surface: SurfaceStats,
    pub outer: usize,
    /// Map vertex ids of interior vertices, in increasing order.
    pub interior: Vec<usize>,
    pub interior_index: Vec<usize>,
    pub boundary_vertices: Vec<usize>,
    /// Starred flag per region.
    pub starred: Vec<bool>,
    /// Four corners per interior vertex, in rotation order.
    pub corners: Vec<Corner>,
    pub corner_of_dart: Vec<usize>,
}

impl Multiverse {
    pub fn from_json(text: &str) -> Result<Self, MultiverseError> {
        Self::new(MultiverseFile::from_json(text)?)
    }

    /// Builds the map, arranges it and checks every clause of the definition.
    pub fn new(file: MultiverseFile) -> Result<Self, MultiverseError> {
        let (mv, report) = Self::build_unchecked(file)?;
        if report.is_valid() {
            Ok(mv)
        } else {
            Err(MultiverseError::Invalid(report))
        }
    }

    /// Builds the structure and reports violated clauses without rejecting.
    pub fn build_unchecked(file: MultiverseFile) -> Result<(Self, ValidationReport), MultiverseError> {
        let map = CombinatorialMap::build(&file.components)?;
        let forest = ContainmentForest::from_rows(&file.containment).map_err(MultiverseError::Parse)?;
        let arr = assemble_arrangement(&map, &forest, Some(file.outer))?;
        let surface = surface_stats(&map, &arr)?;
        let mut report = ValidationReport::default();
        let mut interior = Vec::new();
        let mut boundary_vertices = Vec::new();
        for v in 0..map.vertex_count() {
            let deg = map.graph_degree(v);
            let on_circle = map.sys.rotations[v].iter().any(|&d| map.is_boundary_arc[d]);
            match (on_circle, deg) {
                (false, 4) => interior.push(v),
                (true, 1) => boundary_vertices.push(v),
                (true, 0) => {}
                _ => report.violations.push(Violation::BadDegree { vertex: v, degree: deg }),
            }
        }
        if boundary_vertices.len() % 2 == 1 {
            report.violations.push(Violation::OddBoundaryVertices {
                count: boundary_vertices.len(),
            });
        }
        let mut interior_index = vec![NONE; map.vertex_count()];
        for (i, &v) in interior.iter().enumerate() {
            interior_index[v] = i;
        }
        let mut corners = Vec::new();
        let mut corner_of_dart = vec![NONE; map.sys.dart_count()];
        for &v in &interior {
            for &d in &map.sys.rotations[v] {
                corner_of_dart[d] = corners.len();
                corners.push(Corner {
                    vertex: v,
                    after_dart: d,
                    face: arr.region_of_dart(d).expect("corner in a face"),
                });
            }
        }
        let mut starred = vec![false; arr.regions.len()];
        for &id in &file.starred {
            match arr.region_of_face_id(id) {
                None => report.violations.push(Violation::UnknownFace { face: id }),
                Some(r) if starred[r] => report.violations.push(Violation::DuplicateStar { face: id }),
                Some(r) => {
                    starred[r] = true;
                    if !arr.regions[r].boundary_circles.contains(&file.outer) {
                        report.violations.push(Violation::StarNotOnOuterBoundary {
                            face: arr.regions[r].id,
                        });
                    }
                }
            }
        }
        let expected = arr.regions.len() as i64 - interior.len() as i64;
        let found = starred.iter().filter(|&&s| s).count();
        if expected != found as i64 {
            report.violations.push(Violation::StarCountMismatch { expected, found });
        }
        let outer = file.outer;
        let mv = Multiverse {
            file,
            map,
            arr,
            surface,
            outer,
            interior,
            interior_index,
            boundary_vertices,
            starred,
            corners,
            corner_of_dart,
        };
        Ok((mv, report))
    }

    pub fn face_count(&self) -> usize {
        self.arr.regions.len()
    }

    /// Public id of a region.
    pub fn face_id(&self, region: usize) -> usize {
        self.arr.regions[region].id
    }

    pub fn unstarred_faces(&self) -> Vec<usize> {
        (0..self.face_count()).filter(|&r| !self.starred[r]).collect()
    }

    pub fn is_planar(&self) -> bool {
        self.surface.genus == 0
    }

    /// Number of annular faces whose second boundary is a boundary circle
    /// without endpoints.
    fn annular_count(&self) -> Result<usize, MultiverseError> {
        let mut b = 0;
        for (ri, r) in self.arr.regions.iter().enumerate() {
            if r.walks.len() == 1 {
                continue;
            }
            let pure: Vec<bool> = r
                .walks
                .iter()
                .map(|&w| self.arr.orbits[w].darts.iter().all(|&d| self.map.is_boundary_arc[d]))
                .collect();
            if r.walks.len() == 2 && pure.iter().filter(|&&p| p).count() == 1 {
                b += 1;
            } else {
                return Err(MultiverseError::HypothesisViolated(self.arr.regions[ri].id));
            }
        }
        Ok(b)
    }

    pub fn stats(&self) -> MultiverseStats {
        let vb = self.boundary_vertices.len();
        MultiverseStats {
            v_int: self.interior.len(),
            v_boundary: vb,
            n: vb / 2,
            f: self.face_count(),
            star_count: self.starred.iter().filter(|&&s| s).count(),
            b: self.annular_count().unwrap_or(0),
            chi: self.surface.chi,
            genus: self.surface.genus,
        }
    }

    /// Compares `F - V_int` with `N + χ + b` when every face is a disc or a
    /// qualifying annulus.
    pub fn euler_check(&self) -> Result<EulerCheck, MultiverseError> {
        let b = self.annular_count()?;
        let lhs = self.face_count() as i64 - self.interior.len() as i64;
        let rhs = (self.boundary_vertices.len() / 2) as i64 + self.surface.chi + b as i64;
        Ok(EulerCheck {
            lhs,
            rhs,
            holds: lhs == rhs,
        })
    }

    /// The four corners of an interior vertex in counterclockwise order.
    pub fn corners_of(&self, v: usize) -> Result<[Corner; 4], MultiverseError> {
        let i = *self
            .interior_index
            .get(v)
            .ok_or(MultiverseError::NotInteriorVertex(v))?;
        if i == NONE {
            return Err(MultiverseError::NotInteriorVertex(v));
        }
        Ok([
            self.corners[4 * i],
            self.corners[4 * i + 1],
            self.corners[4 * i + 2],
            self.corners[4 * i + 3],
        ])
    }

    /// Checks the defining property of a state.
    pub fn is_state(&self, s: &State) -> bool {
        if s.choice.len() != self.interior.len() {
            return false;
        }
        let mut used = vec![false; self.face_count()];
        for (i, &c) in s.choice.iter().enumerate() {
            if c / 4 != i || c >= self.corners.len() {
                return false;
            }
            let f = self.corners[c].face;
            if self.starred[f] || used[f] {
                return false;
            }
            used[f] = true;
        }
        (0..self.face_count()).all(|f| self.starred[f] || used[f])
    }

    /// All states, by direct search over corners, in lexicographic order.
    pub fn enumerate_states(&self) -> Vec<State> {
        let n = self.interior.len();
        let unstarred = self.unstarred_faces().len();
        let mut out = Vec::new();
        if unstarred != n {
            return out;
        }
        let mut used = vec![false; self.face_count()];
        let mut choice = Vec::with_capacity(n);
        self.search(0, &mut used, &mut choice, &mut out);
        out
    }

    fn search(&self, i: usize, used: &mut Vec<bool>, choice: &mut Vec<usize>, out: &mut Vec<State>) {
        if i == self.interior.len() {
            out.push(State { choice: choice.clone() });
            return;
        }
        for c in 4 * i..4 * i + 4 {
            let f = self.corners[c].face;
            if self.starred[f] || used[f] {
                continue;
            }
            used[f] = true;
            choice.push(c);
            self.search(i + 1, used, choice, out);
            choice.pop();
            used[f] = false;
        }
    }

    /// Components of the map that lie in a disc in the interior of the
    /// surface, each of which forces the set of states to be empty.
    pub fn detect_dead_components(&self) -> Vec<usize> {
        let nc = self.map.component_count;
        let has_circle: Vec<bool> = (0..nc)
            .map(|c| (0..self.map.boundary_circles.len()).any(|k| self.map.circle_component(k) == c))
            .collect();
        let mut parent = vec![None; nc];
        for p in &self.arr.forest.placements {
            parent[p.component] = Some(p.parent);
        }
        let mut inside_circle = vec![false; nc];
        for c in 0..nc {
            if !has_circle[c] {
                continue;
            }
            let mut x = parent[c];
            while let Some(p) = x {
                inside_circle[p] = true;
                x = parent[p];
            }
        }
        (0..nc).filter(|&c| !has_circle[c] && !inside_circle[c]).collect()
    }

    /// Connected components of the graph, as sets of map vertices. Points on
    /// boundary circles without endpoints are not vertices of the graph.
    pub fn graph_components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.map.vertex_count());
        for d in 0..self.map.sys.dart_count() {
            if !self.map.is_boundary_arc[d] {
                uf.union(self.map.sys.vertex[d], self.map.sys.vertex[self.map.sys.alpha[d]]);
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for v in 0..self.map.vertex_count() {
            if self.map.graph_degree(v) > 0 {
                groups.entry(uf.find(v)).or_default().push(v);
            }
        }
        groups.into_values().collect()
    }

    /// A universe on a disc: connected graph, one open string, a disc surface.
    pub fn is_string_universe(&self) -> bool {
        self.surface.genus == 0
            && self.map.boundary_circles.len() == 1
            && self.boundary_vertices.len() == 2
            && self.graph_components().len() == 1
    }

    /// Compact label of a state: the local corner index at each vertex.
    pub fn state_label(&self, s: &State) -> String {
        s.choice.iter().map(|c| char::from(b'0' + (c % 4) as u8)).collect()
    }

    /// Graphviz rendering of the graph: interior vertices as circles,
    /// boundary vertices as points, boundary arcs dashed.
    pub fn export_dot(&self) -> String {
        let sys = &self.map.sys;
        let mut s = String::from("graph multiverse {\n");
        for v in 0..sys.rotations.len() {
            if self.interior_index[v] != NONE {
                s.push_str(&format!("  v{v} [shape=circle, label=\"{v}\"];\n"));
            } else {
                s.push_str(&format!("  v{v} [shape=point];\n"));
            }
        }
        for d in 0..sys.dart_count() {
            let a = sys.alpha[d];
            if !sys.alive(d) || a < d {
                continue;
            }
            let style = if self.map.is_boundary_arc[d] {
                " [style=dashed]"
            } else {
                ""
            };
            s.push_str(&format!("  v{} -- v{}{style};\n", sys.vertex[d], sys.vertex[a]));
        }
        s.push_str("}\n");
        s
    }

    /// Faces of the multiverse adjacent to the outer circle.
    pub fn outer_adjacent_faces(&self) -> BTreeSet<usize> {
        (0..self.face_count())
            .filter(|&r| self.arr.regions[r].boundary_circles.contains(&self.outer))
            .collect()
    }
}
