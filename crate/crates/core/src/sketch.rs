//! Builds multiverse files from straight-line drawings in the unit disc.
//!
//! Strings are polylines. Open strings start and end on a boundary circle;
//! closed strings are cyclic. Crossings are found geometrically, rotations
//! come from edge angles, and nesting of components from winding numbers.

use crate::combmap::{CombinatorialMap, ComponentSpec, DartSystem, UnionFind};
use crate::multiverse::MultiverseFile;
use std::collections::BTreeMap;
use std::f64::consts::TAU;
use thiserror::Error;

pub type Pt = (f64, f64);

const EPS: f64 = 1e-9;
const ARC_SAMPLES: usize = 24;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SketchError {
    #[error("drawing is not in general position")]
    Degenerate,
    #[error("a string leaves the surface")]
    OutsideSurface,
    #[error("closed string {0} has no crossing")]
    BareClosedString(usize),
    #[error("star point {0} is not inside a face")]
    BadStarPoint(usize),
    #[error("map error: {0}")]
    Map(String),
}

/// An open string from `start` to `end`; each end is `(circle, angle)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OpenString {
    pub start: (usize, f64),
    pub points: Vec<Pt>,
    pub end: (usize, f64),
}

/// A drawing: circle 0 is the unit circle, circle `k ≥ 1` is `holes[k-1]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Sketch {
    pub holes: Vec<(f64, f64, f64)>,
    pub open: Vec<OpenString>,
    pub closed: Vec<Vec<Pt>>,
    /// One point inside each starred face.
    pub stars: Vec<Pt>,
}

/// Result of laying out a sketch: the file, vertex positions and the
/// polygon of every face orbit.
#[derive(Debug, Clone)]
pub struct Layout {
    pub file: MultiverseFile,
    pub positions: Vec<Pt>,
    pub orbit_polygons: Vec<Vec<Pt>>,
    pub orbits: Vec<Vec<usize>>,
    pub crossing_count: usize,
}

struct Edge {
    poly: Vec<Pt>,
    ends: (usize, usize),
    arc: bool,
}

impl Sketch {
    fn circle(&self, k: usize) -> (f64, f64, f64) {
        if k == 0 {
            (0.0, 0.0, 1.0)
        } else {
            self.holes[k - 1]
        }
    }

    fn on_circle(&self, k: usize, a: f64) -> Pt {
        let (cx, cy, r) = self.circle(k);
        (cx + r * a.cos(), cy + r * a.sin())
    }

    fn inside_surface(&self, p: Pt) -> bool {
        if p.0 * p.0 + p.1 * p.1 >= 1.0 - 1e-6 {
            return false;
        }
        self.holes
            .iter()
            .all(|&(cx, cy, r)| (p.0 - cx).powi(2) + (p.1 - cy).powi(2) > r * r + 1e-6)
    }

    fn polylines(&self) -> Vec<(Vec<Pt>, bool)> {
        let mut out = Vec::new();
        for s in &self.open {
            let mut p = vec![self.on_circle(s.start.0, s.start.1)];
            p.extend(s.points.iter().copied());
            p.push(self.on_circle(s.end.0, s.end.1));
            out.push((p, false));
        }
        for c in &self.closed {
            out.push((c.clone(), true));
        }
        out
    }

    pub fn layout(&self) -> Result<Layout, SketchError> {
        let lines = self.polylines();
        for (pts, closed) in &lines {
            let inner = if *closed { &pts[..] } else { &pts[1..pts.len() - 1] };
            if inner.iter().any(|&p| !self.inside_surface(p)) {
                return Err(SketchError::OutsideSurface);
            }
        }
        // segments
        let mut segs: Vec<(usize, usize, Pt, Pt)> = Vec::new();
        for (si, (pts, closed)) in lines.iter().enumerate() {
            let m = if *closed { pts.len() } else { pts.len() - 1 };
            for j in 0..m {
                segs.push((si, j, pts[j], pts[(j + 1) % pts.len()]));
            }
        }
        for &(si, j, a, b) in &segs {
            let (_, closed) = &lines[si];
            for k in 0..=self.holes.len() {
                let (cx, cy, r) = self.circle(k);
                let hits = segment_circle_hits(a, b, (cx, cy), r);
                let first = !closed && j == 0;
                let last = !closed && j == segs.iter().filter(|s| s.0 == si).count() - 1;
                for t in hits {
                    let at_end = (first && t < 1e-6) || (last && t > 1.0 - 1e-6);
                    if !at_end {
                        return Err(SketchError::OutsideSurface);
                    }
                }
            }
        }
        // crossings: (string, position) pairs per crossing
        let mut crossings: Vec<Pt> = Vec::new();
        let mut along: Vec<Vec<(f64, usize)>> = vec![Vec::new(); lines.len()];
        for x in 0..segs.len() {
            for y in x + 1..segs.len() {
                let (s1, j1, a1, b1) = segs[x];
                let (s2, j2, a2, b2) = segs[y];
                if s1 == s2 {
                    let n = segs.iter().filter(|s| s.0 == s1).count();
                    let closed = lines[s1].1;
                    let adjacent = j2 == j1 + 1 || (closed && j1 == 0 && j2 == n - 1);
                    if adjacent {
                        if colinear_overlap(a1, b1, a2, b2) {
                            return Err(SketchError::Degenerate);
                        }
                        continue;
                    }
                }
                match segment_intersection(a1, b1, a2, b2) {
                    Hit::None => {}
                    Hit::Degenerate => return Err(SketchError::Degenerate),
                    Hit::Proper(t, u) => {
                        let id = crossings.len();
                        crossings.push((a1.0 + t * (b1.0 - a1.0), a1.1 + t * (b1.1 - a1.1)));
                        along[s1].push((j1 as f64 + t, id));
                        along[s2].push((j2 as f64 + u, id));
                    }
                }
            }
        }
        let nx = crossings.len();
        let mut positions = crossings.clone();
        let mut edges: Vec<Edge> = Vec::new();
        // endpoints per circle: (angle, vertex)
        let mut on_circle: Vec<Vec<(f64, usize)>> = vec![Vec::new(); self.holes.len() + 1];
        for (si, (pts, closed)) in lines.iter().enumerate() {
            let mut marks = along[si].clone();
            marks.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            let point_at = |pos: f64| -> Pt {
                let j = pos.floor() as usize;
                let t = pos - j as f64;
                let a = pts[j % pts.len()];
                let b = pts[(j + 1) % pts.len()];
                (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1))
            };
            let piece = |from: f64, to: f64| -> Vec<Pt> {
                let mut v = vec![point_at(from)];
                let mut k = from.floor() as i64 + 1;
                while (k as f64) < to - 1e-12 {
                    v.push(pts[(k as usize) % pts.len()]);
                    k += 1;
                }
                v.push(point_at(to));
                v
            };
            if *closed {
                if marks.is_empty() {
                    return Err(SketchError::BareClosedString(si - self.open.len()));
                }
                let n = pts.len() as f64;
                for i in 0..marks.len() {
                    let (p0, v0) = marks[i];
                    let (mut p1, v1) = marks[(i + 1) % marks.len()];
                    if i + 1 == marks.len() {
                        p1 += n;
                    }
                    edges.push(Edge {
                        poly: piece(p0, p1),
                        ends: (v0, v1),
                        arc: false,
                    });
                }
            } else {
                let s = &self.open[si];
                let vs = positions.len();
                positions.push(pts[0]);
                let ve = positions.len();
                positions.push(*pts.last().unwrap());
                on_circle[s.start.0].push((s.start.1.rem_euclid(TAU), vs));
                on_circle[s.end.0].push((s.end.1.rem_euclid(TAU), ve));
                let last = (pts.len() - 1) as f64;
                let mut stops = vec![(0.0, vs)];
                stops.extend(marks.iter().copied());
                stops.push((last, ve));
                for w in stops.windows(2) {
                    edges.push(Edge {
                        poly: piece(w[0].0, w[1].0),
                        ends: (w[0].1, w[1].1),
                        arc: false,
                    });
                }
            }
        }
        let mut caps_seed = Vec::new();
        for k in 0..=self.holes.len() {
            let mut pts = on_circle[k].clone();
            if pts.is_empty() {
                let v = positions.len();
                positions.push(self.on_circle(k, 0.0));
                pts.push((0.0, v));
            }
            pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            if pts.windows(2).any(|w| w[1].0 - w[0].0 < 1e-7) {
                return Err(SketchError::Degenerate);
            }
            let first_edge = edges.len();
            for i in 0..pts.len() {
                let (a0, v0) = pts[i];
                let (mut a1, v1) = pts[(i + 1) % pts.len()];
                if a1 <= a0 {
                    a1 += TAU;
                }
                let poly = (0..=ARC_SAMPLES)
                    .map(|s| self.on_circle(k, a0 + (a1 - a0) * s as f64 / ARC_SAMPLES as f64))
                    .collect();
                edges.push(Edge {
                    poly,
                    ends: (v0, v1),
                    arc: true,
                });
            }
            // the cap of the outer circle runs clockwise, a hole's cap counterclockwise
            caps_seed.push(if k == 0 { 2 * first_edge + 1 } else { 2 * first_edge });
        }
        let nv = positions.len();
        let nd = 2 * edges.len();
        let mut at: Vec<Vec<(f64, usize)>> = vec![Vec::new(); nv];
        let mut alpha = vec![0; nd];
        for (e, ed) in edges.iter().enumerate() {
            let p = &ed.poly;
            let n = p.len();
            let d0 = angle(p[0], p[1]);
            let d1 = angle(p[n - 1], p[n - 2]);
            at[ed.ends.0].push((d0, 2 * e));
            at[ed.ends.1].push((d1, 2 * e + 1));
            alpha[2 * e] = 2 * e + 1;
            alpha[2 * e + 1] = 2 * e;
        }
        let mut rotations = Vec::with_capacity(nv);
        for list in &mut at {
            list.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            if list.windows(2).any(|w| (w[1].0 - w[0].0).abs() < 1e-9) {
                return Err(SketchError::Degenerate);
            }
            rotations.push(list.iter().map(|x| x.1).collect::<Vec<_>>());
        }
        let sys = DartSystem::new(rotations.clone(), alpha.clone());
        let orbits = sys.orbits();
        let mut orbit_of = vec![0; nd];
        for (i, o) in orbits.iter().enumerate() {
            for &d in o {
                orbit_of[d] = i;
            }
        }
        let dart_poly = |d: usize| -> Vec<Pt> {
            let e = &edges[d / 2];
            if d.is_multiple_of(2) {
                e.poly.clone()
            } else {
                e.poly.iter().rev().copied().collect()
            }
        };
        let orbit_polygons: Vec<Vec<Pt>> = orbits
            .iter()
            .map(|o| {
                let mut poly = Vec::new();
                for &d in o {
                    let p = dart_poly(d);
                    poly.extend_from_slice(&p[..p.len() - 1]);
                }
                poly
            })
            .collect();
        let cap_walks: Vec<Vec<usize>> = caps_seed.iter().map(|&d| orbits[orbit_of[d]].clone()).collect();
        for w in &cap_walks {
            if w.iter().any(|&d| !edges[d / 2].arc) {
                return Err(SketchError::Degenerate);
            }
        }
        // components
        let mut uf = UnionFind::new(nv);
        for ed in &edges {
            uf.union(ed.ends.0, ed.ends.1);
        }
        let mut comp_of_root = BTreeMap::new();
        let mut comp = vec![0; nv];
        for v in 0..nv {
            let r = uf.find(v);
            let n = comp_of_root.len();
            comp[v] = *comp_of_root.entry(r).or_insert(n);
        }
        let nc = comp_of_root.len();
        let mut specs: Vec<ComponentSpec> = (0..nc)
            .map(|_| ComponentSpec {
                vertices: vec![],
                edges: vec![],
                boundary: vec![],
            })
            .collect();
        for v in 0..nv {
            specs[comp[v]].vertices.push(rotations[v].clone());
        }
        for (e, ed) in edges.iter().enumerate() {
            specs[comp[ed.ends.0]].edges.push([2 * e, 2 * e + 1]);
        }
        // circle ids follow component order, then order within a component
        let mut circle_order: Vec<(usize, usize)> = (0..cap_walks.len())
            .map(|k| (comp[sys.vertex[cap_walks[k][0]]], k))
            .collect();
        circle_order.sort();
        let mut outer = 0;
        for (new_id, &(c, k)) in circle_order.iter().enumerate() {
            specs[c].boundary.push(cap_walks[k].clone());
            if k == 0 {
                outer = new_id;
            }
        }
        let orbit_comp: Vec<usize> = orbits.iter().map(|o| comp[sys.vertex[o[0]]]).collect();
        let cap_orbits: Vec<usize> = cap_walks.iter().map(|w| orbit_of[w[0]]).collect();
        let unbounded: Vec<usize> = (0..nc)
            .map(|c| {
                (0..orbits.len())
                    .filter(|&i| orbit_comp[i] == c && signed_area(&orbit_polygons[i]) < 0.0)
                    .min_by(|&a, &b| {
                        signed_area(&orbit_polygons[a])
                            .partial_cmp(&signed_area(&orbit_polygons[b]))
                            .unwrap()
                    })
                    .unwrap()
            })
            .collect();
        let bounded_face_of = |c: usize, p: Pt| -> Option<usize> {
            (0..orbits.len())
                .filter(|&i| orbit_comp[i] == c && i != unbounded[c])
                .find(|&i| winding(&orbit_polygons[i], p) == 1)
        };
        let sample: Vec<Pt> = (0..nc)
            .map(|c| positions[(0..nv).find(|&v| comp[v] == c).unwrap()])
            .collect();
        let ancestors: Vec<Vec<usize>> = (0..nc)
            .map(|c| {
                (0..nc)
                    .filter(|&d| d != c && bounded_face_of(d, sample[c]).is_some())
                    .collect()
            })
            .collect();
        let root = comp[sys.vertex[cap_walks[0][0]]];
        let mut containment = Vec::new();
        for c in 0..nc {
            if c == root {
                continue;
            }
            let parent = *ancestors[c]
                .iter()
                .max_by_key(|&&d| (ancestors[d].len(), d))
                .ok_or(SketchError::Degenerate)?;
            let pf = bounded_face_of(parent, sample[c]).unwrap();
            containment.push(vec![c, parent, pf, unbounded[c]]);
        }
        let mut starred = Vec::new();
        for (i, &p) in self.stars.iter().enumerate() {
            let deepest = (0..nc)
                .filter(|&d| bounded_face_of(d, p).is_some())
                .max_by_key(|&d| (ancestors[d].len(), d))
                .ok_or(SketchError::BadStarPoint(i))?;
            let f = bounded_face_of(deepest, p).unwrap();
            if cap_orbits.contains(&f) {
                return Err(SketchError::BadStarPoint(i));
            }
            starred.push(f);
        }
        let file = MultiverseFile {
            name: None,
            components: specs,
            containment,
            outer,
            starred,
            framing: vec![],
        };
        CombinatorialMap::build(&file.components).map_err(|e| SketchError::Map(e.to_string()))?;
        Ok(Layout {
            file,
            positions,
            orbit_polygons,
            orbits,
            crossing_count: nx,
        })
    }
}

fn angle(a: Pt, b: Pt) -> f64 {
    (b.1 - a.1).atan2(b.0 - a.0)
}

enum Hit {
    None,
    Proper(f64, f64),
    Degenerate,
}

fn cross(a: Pt, b: Pt) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

fn colinear_overlap(a1: Pt, b1: Pt, a2: Pt, b2: Pt) -> bool {
    let r = (b1.0 - a1.0, b1.1 - a1.1);
    let s = (b2.0 - a2.0, b2.1 - a2.1);
    cross(r, s).abs() < EPS && cross((a2.0 - a1.0, a2.1 - a1.1), r).abs() < EPS && {
        let rr = r.0 * r.0 + r.1 * r.1;
        let t0 = ((a2.0 - a1.0) * r.0 + (a2.1 - a1.1) * r.1) / rr;
        let t1 = ((b2.0 - a1.0) * r.0 + (b2.1 - a1.1) * r.1) / rr;
        let (lo, hi) = if t0 < t1 { (t0, t1) } else { (t1, t0) };
        hi > EPS && lo < 1.0 - EPS && (hi - lo) > EPS
    }
}

fn segment_intersection(a1: Pt, b1: Pt, a2: Pt, b2: Pt) -> Hit {
    let r = (b1.0 - a1.0, b1.1 - a1.1);
    let s = (b2.0 - a2.0, b2.1 - a2.1);
    let q = (a2.0 - a1.0, a2.1 - a1.1);
    let den = cross(r, s);
    if den.abs() < EPS {
        if cross(q, r).abs() < EPS {
            return Hit::Degenerate;
        }
        return Hit::None;
    }
    let t = cross(q, s) / den;
    let u = cross(q, r) / den;
    let tol = 1e-7;
    let inside = |x: f64| x > tol && x < 1.0 - tol;
    let near = |x: f64| x >= -tol && x <= 1.0 + tol;
    if inside(t) && inside(u) {
        Hit::Proper(t, u)
    } else if near(t) && near(u) {
        Hit::Degenerate
    } else {
        Hit::None
    }
}

fn segment_circle_hits(a: Pt, b: Pt, c: Pt, r: f64) -> Vec<f64> {
    let d = (b.0 - a.0, b.1 - a.1);
    let f = (a.0 - c.0, a.1 - c.1);
    let qa = d.0 * d.0 + d.1 * d.1;
    let qb = 2.0 * (f.0 * d.0 + f.1 * d.1);
    let qc = f.0 * f.0 + f.1 * f.1 - r * r;
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return vec![];
    }
    let sq = disc.sqrt();
    [(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)]
        .into_iter()
        .filter(|t| *t >= -1e-9 && *t <= 1.0 + 1e-9)
        .collect()
}

pub fn signed_area(poly: &[Pt]) -> f64 {
    let n = poly.len();
    (0..n).map(|i| cross(poly[i], poly[(i + 1) % n])).sum::<f64>() / 2.0
}

/// Winding number of a closed polygon around `p`.
pub fn winding(poly: &[Pt], p: Pt) -> i64 {
    let n = poly.len();
    let mut total = 0.0;
    for i in 0..n {
        let a = (poly[i].0 - p.0, poly[i].1 - p.1);
        let b = (poly[(i + 1) % n].0 - p.0, poly[(i + 1) % n].1 - p.1);
        total += cross(a, b).atan2(a.0 * b.0 + a.1 * b.1);
    }
    (total / TAU).round() as i64
}

/// A long trefoil: the standard three-crossing curve cut open at its
/// lowest point and joined to the unit circle.
pub fn trefoil_sketch() -> Sketch {
    let samples = 90;
    let delta = 0.35;
    let curve = |t: f64| -> Pt {
        (
            0.28 * (t.sin() + 2.0 * (2.0 * t).sin()),
            0.28 * (t.cos() - 2.0 * (2.0 * t).cos()),
        )
    };
    let t0 = std::f64::consts::PI + delta;
    let t1 = std::f64::consts::PI + TAU - delta;
    let points: Vec<Pt> = (0..=samples)
        .map(|i| curve(t0 + (t1 - t0) * i as f64 / samples as f64))
        .collect();
    let a = points[0];
    let b = *points.last().unwrap();
    Sketch {
        holes: vec![],
        open: vec![OpenString {
            start: (0, a.1.atan2(a.0)),
            points,
            end: (0, b.1.atan2(b.0)),
        }],
        closed: vec![],
        stars: vec![(0.0, -0.95), (0.0, 0.95)],
    }
}

/// A bowtie closed curve whose lobes each hold a hole tied by a string to a
/// hole outside the lobe. The outside face is an annulus with two corners of
/// the bowtie crossing, so unframed contours through it can circle either
/// lobe and their moves form a cycle.
pub fn framing_counterexample_sketch() -> Sketch {
    use std::f64::consts::PI;
    Sketch {
        holes: vec![
            (-0.4, 0.013, 0.05),
            (-0.8, 0.021, 0.05),
            (0.41, -0.017, 0.05),
            (0.79, 0.007, 0.05),
        ],
        open: vec![
            OpenString {
                start: (1, PI + 0.03),
                points: vec![],
                end: (2, 0.05),
            },
            OpenString {
                start: (3, 0.04),
                points: vec![],
                end: (4, PI - 0.02),
            },
        ],
        closed: vec![vec![(-0.61, 0.31), (-0.59, -0.29), (0.6, 0.32), (0.62, -0.3)]],
        stars: vec![],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiverse::Multiverse;

    #[test]
    fn trefoil_counts() {
        let l = trefoil_sketch().layout().unwrap();
        assert_eq!(l.crossing_count, 3);
        let mv = Multiverse::new(l.file).unwrap();
        let s = mv.stats();
        assert_eq!((s.v_int, s.f, s.star_count, s.n), (3, 5, 2, 1));
        assert_eq!(mv.enumerate_states().len(), 3);
        assert!(mv.is_string_universe());
    }

    #[test]
    fn framing_counterexample_counts() {
        let mv = Multiverse::new(framing_counterexample_sketch().layout().unwrap().file).unwrap();
        let s = mv.stats();
        assert_eq!((s.v_int, s.f, s.star_count, s.n, s.b), (3, 3, 0, 2, 1));
        assert_eq!(mv.graph_components().len(), 1);
        assert_eq!(mv.enumerate_states().len(), 16);
        assert!(mv.euler_check().unwrap().holds);
    }

    #[test]
    fn chord_in_annulus_nests() {
        let sk = Sketch {
            holes: vec![(0.0, 0.0, 0.3)],
            open: vec![OpenString {
                start: (0, 0.2),
                points: vec![(0.6, 0.6)],
                end: (0, 1.4),
            }],
            closed: vec![],
            stars: vec![],
        };
        let l = sk.layout().unwrap();
        assert_eq!(l.file.components.len(), 2);
        assert_eq!(l.file.containment.len(), 1);
    }

    #[test]
    fn winding_of_square() {
        let sq = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
        assert_eq!(winding(&sq, (0.5, 0.5)), 1);
        assert_eq!(winding(&sq, (2.0, 0.5)), 0);
        assert!(signed_area(&sq) > 0.0);
    }
}
