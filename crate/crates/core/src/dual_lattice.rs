//! The dual of a spine, orientations and their circulations, accessibility
//! classes, pushing, surface twisting, and the per-circulation clock
//! lattices on surfaces of any genus.

use crate::combmap::UnionFind;
use crate::lattice::{Lattice, LatticeError};
use crate::multiverse::{Multiverse, State};
use crate::spine::{DirectedCycle, EdgeTag, FramingOptions, Matching, Spine, SpineError};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DualError {
    #[error("orientation is not prescribed by any matching")]
    NotViable,
    #[error("no prescribed orientation has this circulation")]
    NotViableCirculation,
    #[error("accessibility class {0} is not minimal")]
    NotMinimal(usize),
    #[error("accessibility class {0} is not maximal")]
    NotMaximal(usize),
    #[error("the outer accessibility class cannot be pushed")]
    OuterClassUnpushable,
    #[error("walk is not a closed cycle of the dual")]
    CycleNotInGraph,
    #[error("basic cycles disagree on the standard orientation of edge {0}")]
    ConflictingBasicCycles(usize),
    #[error(transparent)]
    Spine(#[from] SpineError),
}

/// Abstract dual of a spine. Dual edge `e` is indexed like spine edge `e`
/// and is stored in its standard direction.
#[derive(Debug, Clone, Serialize)]
pub struct DualGraph {
    pub vertex_count: usize,
    pub outer_vertex: usize,
    /// `(tail, head)` of each dual edge in the standard orientation.
    pub edges: Vec<(usize, usize)>,
    /// Counterclockwise basic cycle around each spine vertex (joint
    /// numbering) as `(edge, agrees with standard direction)`.
    pub basic_cycles: Vec<Vec<(usize, bool)>>,
    /// Edges of a minimum-id spanning forest.
    pub tree: Vec<usize>,
    /// Non-tree edges, one fundamental cycle each.
    pub chords: Vec<usize>,
    /// Fundamental cycle of each chord as `(edge, agrees with standard)`.
    pub fundamental: Vec<Vec<(usize, bool)>>,
}

/// An orientation as the set of dual edges reversed from the standard one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Orientation {
    pub reversed: Vec<bool>,
}

/// Circulation values on the fundamental cycles of the dual's spanning tree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CirculationVector {
    pub values: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AccessibilityClass {
    pub vertices: Vec<usize>,
    pub minimal: bool,
    pub maximal: bool,
    pub is_outer: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AccessibilityPartition {
    /// Classes sorted by smallest vertex.
    pub classes: Vec<AccessibilityClass>,
    pub class_of: Vec<usize>,
}

impl AccessibilityPartition {
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        self.classes.iter().map(|c| c.vertices.clone()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum SurfaceSign {
    Positive,
    Negative,
}

/// A union of spine faces along which a matching can be twisted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwistingSurface {
    pub faces: Vec<usize>,
    /// Spine boundary cycles, walked with the surface on the left.
    pub boundary: Vec<DirectedCycle>,
    /// Boundary circles of the multiverse surface inside the twisting surface.
    pub circles: Vec<usize>,
    pub sign: SurfaceSign,
}

impl DualGraph {
    pub fn new(spine: &Spine) -> Result<Self, DualError> {
        let g = &spine.graph;
        let fod = &spine.faces.face_of_dart;
        let sys = &spine.faces.sys;
        let mut edges = vec![(0, 0); g.edges.len()];
        for e in g.live_edges() {
            let dw = spine.white_dart(e);
            edges[e] = (fod[sys.alpha[dw]], fod[dw]);
        }
        let mut basic_cycles = vec![Vec::new(); g.vertex_count()];
        for (v, cyc) in basic_cycles.iter_mut().enumerate() {
            let white = v < g.nw;
            let incident = g.incident(v);
            let Some(&e0) = incident.first() else {
                continue;
            };
            let start = if white {
                spine.white_dart(e0)
            } else {
                spine.black_dart(e0)
            };
            let mut d = start;
            loop {
                if let Some(e) = spine.edge_of_dart(d) {
                    // crossing counterclockwise goes from the face before
                    // the dart to the face after it
                    let (from, to) = (fod[sys.prev[d]], fod[d]);
                    let agrees = (from, to) == edges[e];
                    if agrees != white && edges[e].0 != edges[e].1 {
                        return Err(DualError::ConflictingBasicCycles(e));
                    }
                    cyc.push((e, white));
                }
                d = sys.next[d];
                if d == start {
                    break;
                }
            }
        }
        let vertex_count = spine.faces.faces.len();
        let mut uf = UnionFind::new(vertex_count);
        let mut tree = Vec::new();
        let mut chords = Vec::new();
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); vertex_count];
        for e in g.live_edges() {
            let (a, b) = edges[e];
            if uf.find(a) != uf.find(b) {
                uf.union(a, b);
                tree.push(e);
                adj[a].push((e, b));
                adj[b].push((e, a));
            } else {
                chords.push(e);
            }
        }
        let fundamental = chords
            .iter()
            .map(|&f| {
                let (a, b) = edges[f];
                let mut cyc = vec![(f, true)];
                cyc.extend(tree_path(&adj, &edges, b, a));
                cyc
            })
            .collect();
        Ok(DualGraph {
            vertex_count,
            outer_vertex: spine.outer_face,
            edges,
            basic_cycles,
            tree,
            chords,
            fundamental,
        })
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_connected(&self) -> bool {
        let mut uf = UnionFind::new(self.vertex_count);
        for &(a, b) in &self.edges {
            uf.union(a, b);
        }
        (0..self.vertex_count).all(|v| uf.find(v) == uf.find(0))
    }

    pub fn standard_orientation(&self) -> Orientation {
        Orientation {
            reversed: vec![false; self.edges.len()],
        }
    }

    pub fn prescribed_orientation(&self, m: &Matching) -> Orientation {
        let mut r = self.standard_orientation();
        for &e in &m.edges {
            r.reversed[e] = true;
        }
        r
    }

    /// Current `(tail, head)` of dual edge `e`.
    pub fn directed(&self, r: &Orientation, e: usize) -> (usize, usize) {
        let (a, b) = self.edges[e];
        if r.reversed[e] {
            (b, a)
        } else {
            (a, b)
        }
    }

    fn value(&self, r: &Orientation, cycle: &[(usize, bool)]) -> i64 {
        cycle
            .iter()
            .map(|&(e, agrees)| if agrees != r.reversed[e] { 1 } else { -1 })
            .sum()
    }

    pub fn circulation(&self, r: &Orientation) -> CirculationVector {
        CirculationVector {
            values: self.fundamental.iter().map(|c| self.value(r, c)).collect(),
        }
    }

    /// Forward minus backward edges of a closed walk, computed directly.
    pub fn circulation_direct(&self, r: &Orientation, walk: &[(usize, bool)]) -> Result<i64, DualError> {
        self.check_closed(walk)?;
        Ok(self.value(r, walk))
    }

    /// Circulation of a closed walk from the fundamental-cycle values.
    pub fn circulation_on_cycle(&self, cv: &CirculationVector, walk: &[(usize, bool)]) -> Result<i64, DualError> {
        self.check_closed(walk)?;
        let mut coef: BTreeMap<usize, i64> = BTreeMap::new();
        for &(e, agrees) in walk {
            *coef.entry(e).or_default() += if agrees { 1 } else { -1 };
        }
        Ok(self
            .chords
            .iter()
            .zip(&cv.values)
            .map(|(f, v)| coef.get(f).copied().unwrap_or(0) * v)
            .sum())
    }

    fn check_closed(&self, walk: &[(usize, bool)]) -> Result<(), DualError> {
        let step = |&(e, agrees): &(usize, bool)| -> Result<(usize, usize), DualError> {
            let &(a, b) = self.edges.get(e).ok_or(DualError::CycleNotInGraph)?;
            Ok(if agrees { (a, b) } else { (b, a) })
        };
        for i in 0..walk.len() {
            let (_, head) = step(&walk[i])?;
            let (tail, _) = step(&walk[(i + 1) % walk.len()])?;
            if head != tail {
                return Err(DualError::CycleNotInGraph);
            }
        }
        Ok(())
    }

    /// The matching whose prescribed orientation is `r`.
    pub fn orientation_to_matching(&self, spine: &Spine, r: &Orientation) -> Result<Matching, DualError> {
        let m = Matching {
            edges: (0..self.edges.len()).filter(|&e| r.reversed[e]).collect(),
        };
        if spine.graph.is_matching(&m) {
            Ok(m)
        } else {
            Err(DualError::NotViable)
        }
    }

    pub fn accessibility(&self, r: &Orientation) -> AccessibilityPartition {
        let mut dg = DiGraph::<(), ()>::new();
        let nodes: Vec<_> = (0..self.vertex_count).map(|_| dg.add_node(())).collect();
        for e in 0..self.edges.len() {
            let (a, b) = self.directed(r, e);
            dg.add_edge(nodes[a], nodes[b], ());
        }
        let mut blocks: Vec<Vec<usize>> = tarjan_scc(&dg)
            .into_iter()
            .map(|c| {
                let mut v: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
                v.sort_unstable();
                v
            })
            .collect();
        blocks.sort();
        let mut class_of = vec![0; self.vertex_count];
        for (i, b) in blocks.iter().enumerate() {
            for &v in b {
                class_of[v] = i;
            }
        }
        let mut minimal = vec![true; blocks.len()];
        let mut maximal = vec![true; blocks.len()];
        for e in 0..self.edges.len() {
            let (a, b) = self.directed(r, e);
            let (ka, kb) = (class_of[a], class_of[b]);
            if ka != kb {
                maximal[ka] = false;
                minimal[kb] = false;
            }
        }
        let classes = blocks
            .into_iter()
            .enumerate()
            .map(|(i, vertices)| AccessibilityClass {
                is_outer: vertices.contains(&self.outer_vertex),
                vertices,
                minimal: minimal[i],
                maximal: maximal[i],
            })
            .collect();
        AccessibilityPartition { classes, class_of }
    }

    /// Dual edges with exactly one end in `class`.
    pub fn cut(&self, part: &AccessibilityPartition, class: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| {
                let (a, b) = self.edges[e];
                (part.class_of[a] == class) != (part.class_of[b] == class)
            })
            .collect()
    }

    fn push(&self, r: &Orientation, class: usize, up: bool) -> Result<Orientation, DualError> {
        let part = self.accessibility(r);
        let k = &part.classes[class];
        if k.is_outer {
            return Err(DualError::OuterClassUnpushable);
        }
        if up && !k.minimal {
            return Err(DualError::NotMinimal(class));
        }
        if !up && !k.maximal {
            return Err(DualError::NotMaximal(class));
        }
        let mut out = r.clone();
        for e in self.cut(&part, class) {
            out.reversed[e] = !out.reversed[e];
        }
        Ok(out)
    }

    pub fn push_up(&self, r: &Orientation, class: usize) -> Result<Orientation, DualError> {
        self.push(r, class, true)
    }

    pub fn push_down(&self, r: &Orientation, class: usize) -> Result<Orientation, DualError> {
        self.push(r, class, false)
    }

    /// Orientations reached by pushing up on minimal non-outer classes.
    pub fn push_up_moves(&self, r: &Orientation) -> Vec<Orientation> {
        let part = self.accessibility(r);
        (0..part.classes.len())
            .filter(|&i| part.classes[i].minimal && !part.classes[i].is_outer)
            .map(|i| self.push_up(r, i).expect("minimal non-outer"))
            .collect()
    }

    /// Forced, forbidden or free status of each spine edge among matchings
    /// whose prescribed orientation has the circulation of `r`.
    pub fn c_forced_forbidden(&self, r: &Orientation) -> Vec<EdgeTag> {
        let part = self.accessibility(r);
        (0..self.edges.len())
            .map(|e| {
                let (a, b) = self.edges[e];
                if part.class_of[a] != part.class_of[b] {
                    EdgeTag::Free
                } else if r.reversed[e] {
                    EdgeTag::Forced
                } else {
                    EdgeTag::Forbidden
                }
            })
            .collect()
    }
}

/// Tree path from `from` to `to` as `(edge, agrees with standard)`.
fn tree_path(adj: &[Vec<(usize, usize)>], edges: &[(usize, usize)], from: usize, to: usize) -> Vec<(usize, bool)> {
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; adj.len()];
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(v) = stack.pop() {
        for &(e, u) in &adj[v] {
            if !seen[u] {
                seen[u] = true;
                parent[u] = Some((e, v));
                stack.push(u);
            }
        }
    }
    let mut path = Vec::new();
    let mut v = to;
    while v != from {
        let (e, p) = parent[v].expect("same tree");
        path.push((e, edges[e] == (p, v)));
        v = p;
    }
    path.reverse();
    path
}

/// A framed multiverse with its spine and dual.
#[derive(Debug, Clone)]
pub struct GenusClock {
    pub mv: Multiverse,
    pub spine: Spine,
    pub dual: DualGraph,
}

/// One move between states of equal circulation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SurfaceTransposition {
    pub source: State,
    pub target: State,
    /// Corner moves `α → α'` grouped by boundary contour of the surface.
    pub contours: Vec<Vec<(usize, usize)>>,
    pub up: bool,
}

/// The three isomorphic pictures of one circulation class.
#[derive(Debug, Clone)]
pub struct CirculationLattice {
    pub circulation: CirculationVector,
    pub states: Lattice<State>,
    pub matchings: Lattice<Matching>,
    pub orientations: Lattice<Orientation>,
}

impl CirculationLattice {
    /// The three cover graphs coincide under the state, matching and
    /// orientation bijections.
    pub fn pictures_agree(&self, gc: &GenusClock) -> bool {
        let via_m: Vec<State> = self
            .matchings
            .elements
            .iter()
            .map(|m| gc.spine.matching_to_state(m).unwrap())
            .collect();
        let via_r: Vec<State> = self
            .orientations
            .elements
            .iter()
            .map(|r| {
                gc.spine
                    .matching_to_state(&gc.dual.orientation_to_matching(&gc.spine, r).unwrap())
                    .unwrap()
            })
            .collect();
        let relabel = |labels: &[State], covers: &[(usize, usize)]| -> BTreeSet<(State, State)> {
            covers
                .iter()
                .map(|&(a, b)| (labels[a].clone(), labels[b].clone()))
                .collect()
        };
        let base = relabel(&self.states.elements, &self.states.covers);
        base == relabel(&via_m, &self.matchings.covers) && base == relabel(&via_r, &self.orientations.covers)
    }
}

impl GenusClock {
    pub fn new(mv: &Multiverse) -> Result<Self, DualError> {
        Self::with_framing(mv, &FramingOptions::default())
    }

    pub fn with_framing(mv: &Multiverse, opts: &FramingOptions) -> Result<Self, DualError> {
        let spine = Spine::with_framing(mv, opts)?;
        let dual = DualGraph::new(&spine)?;
        Ok(GenusClock {
            mv: mv.clone(),
            spine,
            dual,
        })
    }

    pub fn orientation_of_state(&self, s: &State) -> Orientation {
        self.dual
            .prescribed_orientation(&self.spine.state_to_matching(&self.mv, s).expect("valid state"))
    }

    pub fn circulation_of_state(&self, s: &State) -> CirculationVector {
        self.dual.circulation(&self.orientation_of_state(s))
    }

    /// Matchings grouped by circulation, classes in order of circulation.
    pub fn circulation_classes(&self) -> BTreeMap<CirculationVector, Vec<Matching>> {
        let mut out: BTreeMap<CirculationVector, Vec<Matching>> = BTreeMap::new();
        for m in self.spine.graph.enumerate_matchings() {
            out.entry(self.dual.circulation(&self.dual.prescribed_orientation(&m)))
                .or_default()
                .push(m);
        }
        out
    }

    /// The twisting surface dual to accessibility class `class` of `r`.
    pub fn twisting_surface(&self, m: &Matching, class: usize) -> TwistingSurface {
        let r = self.dual.prescribed_orientation(m);
        let part = self.dual.accessibility(&r);
        let k = &part.classes[class];
        let inside: BTreeSet<usize> = k.vertices.iter().copied().collect();
        let fod = &self.spine.faces.face_of_dart;
        let sys = &self.spine.faces.sys;
        let is_boundary = |d: usize| inside.contains(&fod[d]) && !inside.contains(&fod[sys.alpha[d]]);
        let mut darts: Vec<usize> = Vec::new();
        for e in self.dual.cut(&part, class) {
            for d in [self.spine.white_dart(e), self.spine.black_dart(e)] {
                if is_boundary(d) {
                    darts.push(d);
                }
            }
        }
        darts.sort_unstable();
        let mut used = BTreeSet::new();
        let mut boundary = Vec::new();
        for &d0 in &darts {
            if used.contains(&d0) {
                continue;
            }
            let mut walk = Vec::new();
            let mut d = d0;
            loop {
                used.insert(d);
                walk.push(d);
                let mut x = sys.prev[sys.alpha[d]];
                while !is_boundary(x) {
                    x = sys.prev[x];
                }
                d = x;
                if d == d0 {
                    break;
                }
            }
            boundary.push(self.spine.walk_cycle(&walk).rotated_to_min());
        }
        boundary.sort_by(|a, b| a.steps.cmp(&b.steps));
        let circles = (0..self.mv.map.boundary_circles.len())
            .filter(|&k| {
                let cap = self.mv.map.boundary_circles[k][0];
                inside.contains(&self.spine.faces.face_of_cell[self.spine.overlay.cells.orbit_of[cap]])
            })
            .collect();
        let sign = if k.minimal {
            SurfaceSign::Negative
        } else {
            SurfaceSign::Positive
        };
        TwistingSurface {
            faces: k.vertices.clone(),
            boundary,
            circles,
            sign,
        }
    }

    fn surface_twist(&self, m: &Matching, class: usize, up: bool) -> Result<(Matching, TwistingSurface), DualError> {
        let r = self.dual.prescribed_orientation(m);
        let r2 = if up {
            self.dual.push_up(&r, class)?
        } else {
            self.dual.push_down(&r, class)?
        };
        let delta = self.twisting_surface(m, class);
        let mut flip: BTreeSet<usize> = BTreeSet::new();
        for c in &delta.boundary {
            flip.extend(c.edge_set());
        }
        let mut edges: BTreeSet<usize> = m.edges.iter().copied().collect();
        for e in flip {
            if !edges.remove(&e) {
                edges.insert(e);
            }
        }
        let m2 = Matching {
            edges: edges.into_iter().collect(),
        };
        debug_assert_eq!(self.dual.prescribed_orientation(&m2), r2);
        Ok((m2, delta))
    }

    pub fn surface_twist_up(&self, m: &Matching, class: usize) -> Result<(Matching, TwistingSurface), DualError> {
        self.surface_twist(m, class, true)
    }

    pub fn surface_twist_down(&self, m: &Matching, class: usize) -> Result<(Matching, TwistingSurface), DualError> {
        self.surface_twist(m, class, false)
    }

    /// Surface transpositions from `s` in both directions.
    pub fn surface_transpositions_from(&self, s: &State) -> Vec<SurfaceTransposition> {
        let m = self.spine.state_to_matching(&self.mv, s).expect("valid state");
        let part = self.dual.accessibility(&self.dual.prescribed_orientation(&m));
        let mut out = Vec::new();
        for (i, k) in part.classes.iter().enumerate() {
            if k.is_outer {
                continue;
            }
            for up in [true, false] {
                if (up && !k.minimal) || (!up && !k.maximal) {
                    continue;
                }
                let (m2, delta) = self.surface_twist(&m, i, up).expect("pushable");
                let target = self.spine.matching_to_state(&m2).expect("valid matching");
                let contours = delta
                    .boundary
                    .iter()
                    .map(|c| {
                        let mut moves: Vec<(usize, usize)> = Vec::new();
                        for &(e, from, _) in &c.steps {
                            let w = if from < self.spine.graph.nw {
                                from
                            } else {
                                self.spine.graph.edges[e].w
                            };
                            if s.choice[w] != target.choice[w] && !moves.iter().any(|x| x.0 == s.choice[w]) {
                                moves.push((s.choice[w], target.choice[w]));
                            }
                        }
                        moves
                    })
                    .collect();
                out.push(SurfaceTransposition {
                    source: s.clone(),
                    target,
                    contours,
                    up,
                });
            }
        }
        out.sort();
        out
    }

    /// The clock lattice of circulation class `c` in its three pictures.
    pub fn build_circulation_lattice(&self, c: &CirculationVector) -> Result<CirculationLattice, DualError> {
        let classes = self.circulation_classes();
        let ms = classes.get(c).ok_or(DualError::NotViableCirculation)?;
        let lattice_err = |_: LatticeError<_>| DualError::NotViableCirculation;
        let states: Vec<State> = ms.iter().map(|m| self.spine.matching_to_state(m).unwrap()).collect();
        let sl = Lattice::from_moves(states, |s| {
            self.surface_transpositions_from(s)
                .into_iter()
                .filter(|t| t.up)
                .map(|t| t.target)
                .collect()
        })
        .map_err(lattice_err)?;
        let ml = Lattice::from_moves(ms.clone(), |m| {
            let part = self.dual.accessibility(&self.dual.prescribed_orientation(m));
            (0..part.classes.len())
                .filter(|&i| part.classes[i].minimal && !part.classes[i].is_outer)
                .map(|i| self.surface_twist_up(m, i).unwrap().0)
                .collect()
        })
        .map_err(|_| DualError::NotViableCirculation)?;
        let rs: Vec<Orientation> = ms.iter().map(|m| self.dual.prescribed_orientation(m)).collect();
        let rl =
            Lattice::from_moves(rs, |r| self.dual.push_up_moves(r)).map_err(|_| DualError::NotViableCirculation)?;
        Ok(CirculationLattice {
            circulation: c.clone(),
            states: sl,
            matchings: ml,
            orientations: rl,
        })
    }

    pub fn all_lattices(&self) -> Result<Vec<CirculationLattice>, DualError> {
        self.circulation_classes()
            .keys()
            .map(|c| self.build_circulation_lattice(c))
            .collect()
    }
}

/// Forced, forbidden or free status of each spine edge within each
/// circulation class, by direct inspection of the class's matchings.
pub fn brute_force_tags(gc: &GenusClock) -> BTreeMap<CirculationVector, Vec<EdgeTag>> {
    gc.circulation_classes()
        .into_iter()
        .map(|(c, ms)| {
            let tags = (0..gc.dual.edge_count())
                .map(|e| {
                    let k = ms.iter().filter(|m| m.contains(e)).count();
                    if k == ms.len() {
                        EdgeTag::Forced
                    } else if k == 0 {
                        EdgeTag::Forbidden
                    } else {
                        EdgeTag::Free
                    }
                })
                .collect();
            (c, tags)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sketch::trefoil_sketch;

    fn trefoil() -> Multiverse {
        Multiverse::new(trefoil_sketch().layout().unwrap().file).unwrap()
    }

    #[test]
    fn dual_shape() {
        let gc = GenusClock::new(&trefoil()).unwrap();
        let d = &gc.dual;
        assert!(d.is_connected());
        assert_eq!(d.edge_count(), gc.spine.graph.edges.len());
        let mut count = vec![0; d.edge_count()];
        for c in &d.basic_cycles {
            for &(e, _) in c {
                count[e] += 1;
            }
        }
        assert!(count.iter().all(|&k| k == 2));
    }

    #[test]
    fn basic_cycle_law_and_round_trip() {
        let gc = GenusClock::new(&trefoil()).unwrap();
        let d = &gc.dual;
        for m in gc.spine.graph.enumerate_matchings() {
            let r = d.prescribed_orientation(&m);
            assert_eq!(d.orientation_to_matching(&gc.spine, &r).unwrap(), m);
            let cv = d.circulation(&r);
            for (v, cyc) in d.basic_cycles.iter().enumerate() {
                let deg = cyc.len() as i64;
                let want = if v < gc.spine.graph.nw { deg - 2 } else { 2 - deg };
                assert_eq!(d.circulation_direct(&r, cyc).unwrap(), want);
                assert_eq!(d.circulation_on_cycle(&cv, cyc).unwrap(), want);
            }
        }
        assert_eq!(
            d.orientation_to_matching(&gc.spine, &d.standard_orientation()),
            Err(DualError::NotViable)
        );
    }

    #[test]
    fn planar_trefoil_is_one_chain() {
        let gc = GenusClock::new(&trefoil()).unwrap();
        let ls = gc.all_lattices().unwrap();
        assert_eq!(ls.len(), 1);
        let l = &ls[0];
        assert_eq!(l.states.len(), 3);
        assert!(l.states.is_distributive());
        assert!(l.pictures_agree(&gc));
        let tags = brute_force_tags(&gc);
        for m in gc.spine.graph.enumerate_matchings() {
            let r = gc.dual.prescribed_orientation(&m);
            assert_eq!(gc.dual.c_forced_forbidden(&r), tags[&gc.dual.circulation(&r)]);
        }
    }
}
