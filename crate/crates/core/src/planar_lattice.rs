//! The clock lattice of a planar multiverse: elementary cycles of the
//! reduced spine, their signs, twisting up and down, plane transpositions,
//! and Kauffman transpositions for comparison on string universes.

use crate::combmap::NONE;
use crate::lattice::{Lattice, LatticeError};
use crate::multiverse::{FramingSpec, Multiverse, State};
use crate::spine::{
    build_overlay, build_tait, DirectedCycle, EdgeTag, FramingOptions, Matching, Overlay, Reduced, Spine, SpineError,
    TaitGraph,
};
use serde::Serialize;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlanarError {
    #[error("the multiverse surface has positive genus")]
    NotPlanar,
    #[error("not a universe on a disc")]
    NotStringUniverse,
    #[error("cycle has the wrong sign for this twist")]
    WrongSign,
    #[error("cycle is not alternating for this matching")]
    NotAlternating,
    #[error(transparent)]
    Spine(#[from] SpineError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Positive,
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Rotation {
    Clockwise,
    Counterclockwise,
}

/// Outer boundary cycle of a non-outer face of a component of the reduced
/// spine, walked counterclockwise around the face.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElementaryCycle {
    pub cycle: DirectedCycle,
    pub component: usize,
    pub vertex_simple: bool,
}

/// A move between states, reported in the corner picture.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct PlaneTransposition {
    pub source: State,
    pub target: State,
    /// Map vertices `v_j`.
    pub vertices: Vec<usize>,
    /// Corner moves `α_j → α'_j` as corner ids.
    pub corners: Vec<(usize, usize)>,
    pub direction: Rotation,
    pub n: usize,
}

/// A framed planar multiverse with its reduced spine and elementary cycles.
#[derive(Debug, Clone)]
pub struct PlanarClock {
    pub mv: Multiverse,
    pub spine: Spine,
    pub reduced: Reduced,
    pub cycles: Vec<ElementaryCycle>,
}

impl PlanarClock {
    pub fn new(mv: &Multiverse) -> Result<Self, PlanarError> {
        Self::with_framing(mv, &FramingOptions::default())
    }

    pub fn with_framing(mv: &Multiverse, opts: &FramingOptions) -> Result<Self, PlanarError> {
        if !mv.is_planar() {
            return Err(PlanarError::NotPlanar);
        }
        let spine = Spine::with_framing(mv, opts)?;
        let reduced = spine.graph.reduce();
        let cycles = plane_faces(mv, &spine, &reduced);
        Ok(PlanarClock {
            mv: mv.clone(),
            spine,
            reduced,
            cycles,
        })
    }

    /// Alternating elementary cycles relative to `m`, with their signs.
    pub fn signed_cycles(&self, m: &Matching) -> Vec<(usize, Sign)> {
        let mut out = Vec::new();
        for (i, c) in self.cycles.iter().enumerate() {
            if let Some(sign) = cycle_sign(&self.spine, m, &c.cycle) {
                out.push((i, sign));
            }
        }
        out
    }

    fn twist_with(&self, m: &Matching, i: usize, want: Sign) -> Result<Matching, PlanarError> {
        let c = &self.cycles[i];
        match cycle_sign(&self.spine, m, &c.cycle) {
            None => Err(PlanarError::NotAlternating),
            Some(s) if s != want => Err(PlanarError::WrongSign),
            Some(_) => Ok(self.reduced.graph.twist(m, &c.cycle)?),
        }
    }

    /// Twists at a negative elementary cycle.
    pub fn twist_up(&self, m: &Matching, cycle: usize) -> Result<Matching, PlanarError> {
        self.twist_with(m, cycle, Sign::Negative)
    }

    /// Twists at a positive elementary cycle.
    pub fn twist_down(&self, m: &Matching, cycle: usize) -> Result<Matching, PlanarError> {
        self.twist_with(m, cycle, Sign::Positive)
    }

    pub fn matching(&self, s: &State) -> Matching {
        self.spine.state_to_matching(&self.mv, s).expect("valid state")
    }

    pub fn state(&self, m: &Matching) -> State {
        self.spine.matching_to_state(m).expect("valid matching")
    }

    /// Plane transpositions from `s` in both directions.
    pub fn transpositions_from(&self, s: &State) -> Vec<PlaneTransposition> {
        let m = self.matching(s);
        let mut out = Vec::new();
        for (i, sign) in self.signed_cycles(&m) {
            let m2 = self
                .reduced
                .graph
                .twist(&m, &self.cycles[i].cycle)
                .expect("alternating elementary cycle");
            let direction = if sign == Sign::Negative {
                Rotation::Counterclockwise
            } else {
                Rotation::Clockwise
            };
            out.push(self.describe(s, &self.state(&m2), direction));
        }
        out.sort();
        out
    }

    fn describe(&self, s: &State, t: &State, direction: Rotation) -> PlaneTransposition {
        let mut vertices = Vec::new();
        let mut corners = Vec::new();
        for (i, (&a, &b)) in s.choice.iter().zip(&t.choice).enumerate() {
            if a != b {
                vertices.push(self.mv.interior[i]);
                corners.push((a, b));
            }
        }
        let n = vertices.len();
        PlaneTransposition {
            source: s.clone(),
            target: t.clone(),
            vertices,
            corners,
            direction,
            n,
        }
    }

    /// Targets of counterclockwise plane transpositions from `s`.
    pub fn up_moves(&self, s: &State) -> Vec<State> {
        self.transpositions_from(s)
            .into_iter()
            .filter(|t| t.direction == Rotation::Counterclockwise)
            .map(|t| t.target)
            .collect()
    }

    /// The poset generated by counterclockwise plane transpositions.
    pub fn lattice(&self) -> Result<Lattice<State>, LatticeError<State>> {
        Lattice::from_moves(self.mv.enumerate_states(), |s| self.up_moves(s))
    }

    /// Kauffman transpositions from `s`: twists at alternating 4-cycles of the
    /// spine with no spine edge leaving a white vertex into the cycle's
    /// interior.
    pub fn kauffman_transpositions_from(&self, s: &State) -> Vec<PlaneTransposition> {
        let m = self.matching(s);
        let g = &self.spine.graph;
        let cap = self.mv.map.boundary_circles[self.mv.outer][0];
        let mut out = Vec::new();
        for a in g.alternating_cycles(&m, Some(4)) {
            if a.len() != 4 {
                continue;
            }
            let corners: BTreeSet<usize> = a.edge_set().iter().map(|&e| self.spine.edge_corner[e]).collect();
            let sides = CycleSides::new(&self.spine.overlay, cap, &corners);
            let mut blocked = false;
            let mut direction = None;
            for &(e, from, _) in &a.steps {
                if from >= g.nw {
                    continue;
                }
                let d_in = self.spine.white_dart(e);
                let other = a
                    .steps
                    .iter()
                    .find(|st| st.2 == from)
                    .map(|st| self.spine.white_dart(st.0))
                    .unwrap();
                let inside = sides.interior_sector(&self.spine.overlay, d_in, other);
                if inside.iter().any(|&d| self.spine.edge_of_dart(d).is_some()) {
                    blocked = true;
                }
                // the matching edge leaves the white vertex; the marker turns
                // from it through the interior
                if m.contains(e) {
                    direction = Some(if sides.is_interior_left_of(d_in) {
                        Rotation::Counterclockwise
                    } else {
                        Rotation::Clockwise
                    });
                }
            }
            if blocked {
                continue;
            }
            let m2 = g.twist(&m, &a).expect("vertex-simple");
            out.push(self.describe(s, &self.state(&m2), direction.unwrap()));
        }
        out.sort();
        out.dedup();
        out
    }

    /// The poset generated by counterclockwise Kauffman transpositions.
    pub fn kauffman_lattice(&self) -> Result<Lattice<State>, LatticeError<State>> {
        Lattice::from_moves(self.mv.enumerate_states(), |s| {
            self.kauffman_transpositions_from(s)
                .into_iter()
                .filter(|t| t.direction == Rotation::Counterclockwise)
                .map(|t| t.target)
                .collect()
        })
    }

    /// Rotation of the marker at the white end of matching edge `e` when
    /// twisting along `a`, judged by which side of `a` the turn passes.
    pub fn marker_rotation(&self, a: &DirectedCycle, e: usize) -> Rotation {
        let cap = self.mv.map.boundary_circles[self.mv.outer][0];
        let corners: BTreeSet<usize> = a.edge_set().iter().map(|&x| self.spine.edge_corner[x]).collect();
        let sides = CycleSides::new(&self.spine.overlay, cap, &corners);
        if sides.is_interior_left_of(self.spine.white_dart(e)) {
            Rotation::Counterclockwise
        } else {
            Rotation::Clockwise
        }
    }
}

/// Sign of an elementary cycle relative to `m`, if it is alternating.
fn cycle_sign(spine: &Spine, m: &Matching, c: &DirectedCycle) -> Option<Sign> {
    if !c.vertex_simple_alternating(m) {
        return None;
    }
    let &(_, from, _) = c.steps.iter().find(|st| m.contains(st.0))?;
    // the walk runs counterclockwise; a matching edge walked black to white
    // makes the cycle positive
    Some(if from >= spine.graph.nw {
        Sign::Positive
    } else {
        Sign::Negative
    })
}

impl DirectedCycle {
    /// Vertex-simple and alternating relative to `m`.
    pub fn vertex_simple_alternating(&self, m: &Matching) -> bool {
        let n = self.steps.len();
        n.is_multiple_of(2)
            && self.is_vertex_simple()
            && (0..n).all(|i| m.contains(self.steps[i].0) != m.contains(self.steps[(i + 1) % n].0))
    }
}

/// Elementary cycles of the reduced spine: for each component, the walks
/// of its faces other than the one holding the outer boundary.
pub fn plane_faces(mv: &Multiverse, spine: &Spine, reduced: &Reduced) -> Vec<ElementaryCycle> {
    let ov = &spine.overlay;
    let cap = mv.map.boundary_circles[mv.outer][0];
    let cap_cell = ov.cells.orbit_of[cap];
    let mut out = Vec::new();
    for (ci, comp) in reduced.components.iter().enumerate() {
        if comp.edges.is_empty() {
            continue;
        }
        let corners: BTreeSet<usize> = comp.edges.iter().map(|&e| spine.edge_corner[e]).collect();
        let sub = ov.subgraph_faces(&corners);
        let outer = sub.face_of_cell[cap_cell];
        for (f, face) in sub.faces.iter().enumerate() {
            if f == outer {
                continue;
            }
            for w in &face.walks {
                let cycle = spine.walk_cycle(w);
                let vertex_simple = cycle.is_vertex_simple();
                out.push(ElementaryCycle {
                    cycle: cycle.rotated_to_min(),
                    component: ci,
                    vertex_simple,
                });
            }
        }
    }
    out
}

/// The two sides of a simple closed curve of Tait edges on a planar
/// surface.
pub struct CycleSides {
    pub sub: crate::combmap::SubMap,
    pub interior: usize,
}

impl CycleSides {
    pub fn new(ov: &Overlay, cap_dart: usize, corners: &BTreeSet<usize>) -> Self {
        let sub = ov.subgraph_faces(corners);
        let outside = sub.face_of_cell[ov.cells.orbit_of[cap_dart]];
        let interior = (0..sub.faces.len())
            .find(|&f| f != outside)
            .expect("a closed curve has two sides");
        CycleSides { sub, interior }
    }

    /// Whether the sector counterclockwise after cycle dart `d` is inside.
    pub fn is_interior_left_of(&self, d: usize) -> bool {
        self.sub.face_of_dart[d] == self.interior
    }

    /// Overlay darts strictly inside the cycle at the vertex of cycle darts
    /// `x` and `y`.
    pub fn interior_sector(&self, ov: &Overlay, x: usize, y: usize) -> Vec<usize> {
        let (a, b) = if self.is_interior_left_of(x) { (x, y) } else { (y, x) };
        strictly_between(ov, a, b)
    }

    pub fn exterior_sector(&self, ov: &Overlay, x: usize, y: usize) -> Vec<usize> {
        let (a, b) = if self.is_interior_left_of(x) { (y, x) } else { (x, y) };
        strictly_between(ov, a, b)
    }
}

/// Darts strictly counterclockwise after `a` and before `b` at their vertex.
fn strictly_between(ov: &Overlay, a: usize, b: usize) -> Vec<usize> {
    let sys = &ov.cells.sys;
    let mut out = Vec::new();
    let mut d = sys.next[a];
    while d != b {
        out.push(d);
        d = sys.next[d];
    }
    out
}

/// Escape count of one alternating cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EscapeRecord {
    pub matching: Matching,
    pub cycle: DirectedCycle,
    pub escape: usize,
    pub half_length: usize,
}

/// For every matching and every vertex-simple alternating cycle, counts the
/// Tait edges leaving white vertices of the cycle into its exterior.
pub fn escape_counts(mv: &Multiverse) -> Result<Vec<EscapeRecord>, PlanarError> {
    if !mv.is_string_universe() {
        return Err(PlanarError::NotStringUniverse);
    }
    let spine = Spine::new(mv)?;
    let tait: TaitGraph = build_tait(mv)?;
    let cap = mv.map.boundary_circles[mv.outer][0];
    let mut out = Vec::new();
    for m in spine.graph.enumerate_matchings() {
        for a in spine.graph.alternating_cycles(&m, None) {
            let corners: BTreeSet<usize> = a.edge_set().iter().map(|&e| spine.edge_corner[e]).collect();
            let sides = CycleSides::new(&tait.overlay, cap, &corners);
            let mut escape = 0;
            for &(e, from, _) in &a.steps {
                if from >= spine.graph.nw {
                    continue;
                }
                let x = spine.white_dart(e);
                let y = a
                    .steps
                    .iter()
                    .find(|st| st.2 == from)
                    .map(|st| spine.white_dart(st.0))
                    .unwrap();
                escape += sides
                    .exterior_sector(&tait.overlay, x, y)
                    .iter()
                    .filter(|&&d| tait.overlay.corner_of(d).is_some())
                    .count();
            }
            out.push(EscapeRecord {
                matching: m.clone(),
                half_length: a.len() / 2,
                cycle: a,
                escape,
            });
        }
    }
    Ok(out)
}

/// Comparison of plane and Kauffman transpositions on a string universe.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KauffmanReport {
    pub states: usize,
    pub plane_moves: usize,
    pub kauffman_moves: usize,
    pub all_plane_moves_have_n2: bool,
    pub move_sets_equal: bool,
    pub covers_equal: bool,
    pub isomorphic: bool,
}

impl KauffmanReport {
    pub fn holds(&self) -> bool {
        self.all_plane_moves_have_n2 && self.move_sets_equal && self.covers_equal && self.isomorphic
    }
}

pub fn verify_kauffman_equivalence(mv: &Multiverse) -> Result<KauffmanReport, PlanarError> {
    if !mv.is_string_universe() {
        return Err(PlanarError::NotStringUniverse);
    }
    let pc = PlanarClock::new(mv)?;
    let states = mv.enumerate_states();
    let mut plane = BTreeSet::new();
    let mut kauff = BTreeSet::new();
    for s in &states {
        plane.extend(pc.transpositions_from(s));
        kauff.extend(pc.kauffman_transpositions_from(s));
    }
    let all_n2 = plane.iter().all(|t| t.n == 2);
    let lp = pc.lattice();
    let lk = pc.kauffman_lattice();
    let (covers_equal, isomorphic) = match (&lp, &lk) {
        (Ok(a), Ok(b)) => (
            a.elements == b.elements && a.covers == b.covers,
            a.isomorphism(b).is_some(),
        ),
        _ => (false, false),
    };
    Ok(KauffmanReport {
        states: states.len(),
        plane_moves: plane.len(),
        kauffman_moves: kauff.len(),
        all_plane_moves_have_n2: all_n2,
        move_sets_equal: plane == kauff,
        covers_equal,
        isomorphic,
    })
}

/// Every framing of face `region` that embeds on the surface, listed by
/// choosing an order of its boundary walks and a starting corner on each.
pub fn candidate_framings(mv: &Multiverse, region: usize) -> Vec<FramingSpec> {
    let r = &mv.arr.regions[region];
    let blocks: Vec<Vec<usize>> = r
        .walks
        .iter()
        .map(|&w| {
            mv.arr.orbits[w]
                .darts
                .iter()
                .copied()
                .filter(|&d| mv.corner_of_dart[d] != NONE)
                .collect()
        })
        .filter(|b: &Vec<usize>| !b.is_empty())
        .collect();
    let cornerless = r.walks.len() - blocks.len();
    let mut out = Vec::new();
    if blocks.is_empty() {
        return out;
    }
    // the first block keeps its start so that cyclic rotations are not repeated
    let mut orders: Vec<Vec<usize>> = Vec::new();
    permutations(&(1..blocks.len()).collect::<Vec<_>>(), &mut Vec::new(), &mut orders);
    let mut shifts = vec![0usize; blocks.len()];
    for order in &orders {
        loop {
            let mut rotation: Vec<usize> = blocks[0].clone();
            for &b in order {
                let k = blocks[b].len();
                rotation.extend((0..k).map(|i| blocks[b][(i + shifts[b]) % k]));
            }
            let spots: Vec<Option<usize>> = if cornerless > 0 {
                (0..rotation.len()).map(Some).collect()
            } else {
                vec![None]
            };
            for holes_after in spots {
                let spec = FramingSpec {
                    face: r.id,
                    rotation: rotation.clone(),
                    holes_after,
                };
                let opts = FramingOptions {
                    overrides: vec![spec.clone()],
                    require_explicit: false,
                };
                let include: Vec<bool> = mv.starred.iter().map(|s| !s).collect();
                if build_overlay(mv, &include, &opts).is_ok() {
                    out.push(spec);
                }
            }
            // advance the mixed-radix counter over blocks 1..
            let mut i = 1;
            while i < blocks.len() {
                shifts[i] += 1;
                if shifts[i] < blocks[i].len() {
                    break;
                }
                shifts[i] = 0;
                i += 1;
            }
            if i == blocks.len() {
                break;
            }
        }
    }
    out
}

fn permutations(rest: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if rest.is_empty() {
        out.push(cur.clone());
        return;
    }
    for i in 0..rest.len() {
        cur.push(rest[i]);
        let mut r = rest.to_vec();
        r.remove(i);
        permutations(&r, cur, out);
        cur.pop();
    }
}

/// Unstarred faces that are not discs, whose framing is a real choice.
pub fn framed_faces(mv: &Multiverse) -> Vec<usize> {
    (0..mv.face_count())
        .filter(|&r| !mv.starred[r] && mv.arr.regions[r].walks.len() > 1)
        .collect()
}

/// Counterclockwise moves allowed when no framing is fixed: the union of
/// the plane transpositions of every combination of realizable framings.
pub struct UnframedMoves {
    pub clocks: Vec<PlanarClock>,
}

impl UnframedMoves {
    pub fn new(mv: &Multiverse) -> Result<Self, PlanarError> {
        let mut combos: Vec<Vec<FramingSpec>> = vec![Vec::new()];
        for r in framed_faces(mv) {
            let options = candidate_framings(mv, r);
            combos = combos
                .into_iter()
                .flat_map(|c| {
                    options.iter().map(move |o| {
                        let mut c = c.clone();
                        c.push(o.clone());
                        c
                    })
                })
                .collect();
        }
        let clocks = combos
            .into_iter()
            .filter_map(|overrides| {
                PlanarClock::with_framing(
                    mv,
                    &FramingOptions {
                        overrides,
                        require_explicit: false,
                    },
                )
                .ok()
            })
            .collect::<Vec<_>>();
        if clocks.is_empty() {
            return Err(PlanarError::Spine(SpineError::FramingRequired { face: 0 }));
        }
        Ok(UnframedMoves { clocks })
    }

    pub fn up_moves(&self, s: &State) -> Vec<State> {
        let mut out: BTreeSet<State> = BTreeSet::new();
        for c in &self.clocks {
            out.extend(c.up_moves(s));
        }
        out.into_iter().collect()
    }

    pub fn lattice(&self) -> Result<Lattice<State>, LatticeError<State>> {
        Lattice::from_moves(self.clocks[0].mv.enumerate_states(), |s| self.up_moves(s))
    }
}

/// Forced and forbidden status of each spine edge, indexed by corner.
pub fn corner_tags(spine: &Spine) -> Vec<Option<EdgeTag>> {
    let tags = spine.graph.classify_edges();
    spine
        .edge_of_corner
        .iter()
        .map(|&e| (e != crate::combmap::NONE).then(|| tags[e]))
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
    fn trefoil_is_a_chain_of_three() {
        let mv = trefoil();
        let pc = PlanarClock::new(&mv).unwrap();
        let l = pc.lattice().unwrap();
        assert_eq!(l.len(), 3);
        assert!(l.covers_match_moves());
        assert!(l.is_distributive());
        assert_eq!(l.covers.len(), 2);
        assert_eq!(l.ranks().iter().max(), Some(&2));
    }

    #[test]
    fn signs_flip_and_twists_invert() {
        let mv = trefoil();
        let pc = PlanarClock::new(&mv).unwrap();
        for s in mv.enumerate_states() {
            let m = pc.matching(&s);
            for (i, sign) in pc.signed_cycles(&m) {
                let m2 = match sign {
                    Sign::Negative => {
                        assert_eq!(pc.twist_down(&m, i), Err(PlanarError::WrongSign));
                        pc.twist_up(&m, i).unwrap()
                    }
                    Sign::Positive => pc.twist_down(&m, i).unwrap(),
                };
                let back = pc.signed_cycles(&m2).into_iter().find(|x| x.0 == i).unwrap().1;
                assert_ne!(back, sign);
                let m3 = if back == Sign::Negative {
                    pc.twist_up(&m2, i)
                } else {
                    pc.twist_down(&m2, i)
                };
                assert_eq!(m3.unwrap(), m);
            }
        }
    }

    #[test]
    fn trefoil_kauffman_and_escape() {
        let mv = trefoil();
        let r = verify_kauffman_equivalence(&mv).unwrap();
        assert!(r.holds(), "{r:?}");
        for rec in escape_counts(&mv).unwrap() {
            assert_eq!(rec.escape, rec.half_length + 2);
        }
    }
}
