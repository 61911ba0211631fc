//! Finite posets and lattices: order closure of move generators, covers,
//! meet and join, distributivity, isomorphism, products and Hasse export.

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde_json::json;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Debug;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError<K: Debug> {
    #[error("moves form a cycle, so the relation is not a partial order: {witness:?}")]
    CycleDetected { witness: Vec<K> },
    #[error("{x:?} and {y:?} have no unique bound")]
    NotALattice { x: K, y: K },
}

/// A fixed-width bit set over element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(n: usize) -> Self {
        BitSet {
            words: vec![0; n.div_ceil(64)],
        }
    }
    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }
    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }
    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }
    pub fn union_with(&mut self, o: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&o.words) {
            *a |= b;
        }
    }
    pub fn intersect(&self, o: &BitSet) -> BitSet {
        BitSet {
            words: self.words.iter().zip(&o.words).map(|(a, b)| a & b).collect(),
        }
    }
    pub fn difference_with(&mut self, o: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&o.words) {
            *a &= !b;
        }
    }
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words
            .iter()
            .enumerate()
            .flat_map(|(i, &w)| (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| i * 64 + b))
    }
}

/// Outcome of the distributivity check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distributivity {
    Distributive,
    /// Lexicographically least `(x, y, z)` with `x∧(y∨z) ≠ (x∧y)∨(x∧z)`.
    Violated(usize, usize, usize),
}

#[derive(Debug, Clone)]
struct Tables {
    meet: Vec<Vec<usize>>,
    join: Vec<Vec<usize>>,
}

/// A finite poset on canonically sorted elements, with its cover relation.
/// When built from moves, the generating move pairs are kept for comparison
/// with the covers.
#[derive(Debug, Clone)]
pub struct Lattice<K> {
    pub elements: Vec<K>,
    up: Vec<BitSet>,
    down: Vec<BitSet>,
    pub covers: Vec<(usize, usize)>,
    pub moves: Vec<(usize, usize)>,
    tables: OnceLock<Result<Tables, (usize, usize)>>,
}

impl<K: Clone + Ord + Debug> Lattice<K> {
    /// Closes `seeds` under `moves` and orders elements by reachability.
    pub fn from_moves<F>(seeds: impl IntoIterator<Item = K>, mut moves: F) -> Result<Self, LatticeError<K>>
    where
        F: FnMut(&K) -> Vec<K>,
    {
        let mut index: BTreeMap<K, usize> = BTreeMap::new();
        let mut found: Vec<K> = Vec::new();
        let mut queue = VecDeque::new();
        for s in seeds {
            if !index.contains_key(&s) {
                index.insert(s.clone(), found.len());
                found.push(s.clone());
                queue.push_back(s);
            }
        }
        let mut raw_moves = Vec::new();
        while let Some(x) = queue.pop_front() {
            let xi = index[&x];
            for y in moves(&x) {
                let yi = match index.get(&y) {
                    Some(&i) => i,
                    None => {
                        let i = found.len();
                        index.insert(y.clone(), i);
                        found.push(y.clone());
                        queue.push_back(y);
                        i
                    }
                };
                raw_moves.push((xi, yi));
            }
        }
        let order: Vec<usize> = {
            let mut o: Vec<usize> = (0..found.len()).collect();
            o.sort_by(|&a, &b| found[a].cmp(&found[b]));
            o
        };
        let mut rank = vec![0; found.len()];
        for (r, &i) in order.iter().enumerate() {
            rank[i] = r;
        }
        let elements: Vec<K> = order.iter().map(|&i| found[i].clone()).collect();
        let mut mv: Vec<(usize, usize)> = raw_moves.iter().map(|&(a, b)| (rank[a], rank[b])).collect();
        mv.sort();
        mv.dedup();
        if let Some(cycle) = find_cycle(elements.len(), &mv) {
            return Err(LatticeError::CycleDetected {
                witness: cycle.into_iter().map(|i| elements[i].clone()).collect(),
            });
        }
        let n = elements.len();
        let mut succ = vec![Vec::new(); n];
        for &(a, b) in &mv {
            succ[a].push(b);
        }
        let topo = topo_order(n, &succ);
        let mut up: Vec<BitSet> = (0..n).map(|_| BitSet::new(n)).collect();
        for &x in topo.iter().rev() {
            let mut s = BitSet::new(n);
            s.insert(x);
            for &y in &succ[x] {
                s.union_with(&up[y]);
            }
            up[x] = s;
        }
        Ok(Self::from_up_sets(elements, up, mv))
    }

    /// Builds a poset from an explicit order predicate, which must be a
    /// partial order on `elements`.
    pub fn from_order(mut elements: Vec<K>, leq: impl Fn(&K, &K) -> bool) -> Self {
        elements.sort();
        elements.dedup();
        let n = elements.len();
        let up = (0..n)
            .map(|i| {
                let mut s = BitSet::new(n);
                for j in 0..n {
                    if leq(&elements[i], &elements[j]) {
                        s.insert(j);
                    }
                }
                s
            })
            .collect();
        Self::from_up_sets(elements, up, Vec::new())
    }

    fn from_up_sets(elements: Vec<K>, up: Vec<BitSet>, moves: Vec<(usize, usize)>) -> Self {
        let n = elements.len();
        let mut down: Vec<BitSet> = (0..n).map(|_| BitSet::new(n)).collect();
        for (x, s) in up.iter().enumerate() {
            for y in s.iter() {
                down[y].insert(x);
            }
        }
        let mut covers = Vec::new();
        for x in 0..n {
            let mut strict = up[x].clone();
            strict.remove(x);
            let mut cand = strict.clone();
            for z in strict.iter() {
                let mut above = up[z].clone();
                above.remove(z);
                cand.difference_with(&above);
            }
            covers.extend(cand.iter().map(|y| (x, y)));
        }
        covers.sort();
        Lattice {
            elements,
            up,
            down,
            covers,
            moves,
            tables: OnceLock::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, k: &K) -> Option<usize> {
        self.elements.binary_search(k).ok()
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    pub fn up_set(&self, x: usize) -> &BitSet {
        &self.up[x]
    }

    /// True when every generator move is a cover and every cover is a move.
    pub fn covers_match_moves(&self) -> bool {
        self.covers == self.moves
    }

    fn tables(&self) -> &Result<Tables, (usize, usize)> {
        self.tables.get_or_init(|| {
            let n = self.len();
            let mut meet = vec![vec![0; n]; n];
            let mut join = vec![vec![0; n]; n];
            for x in 0..n {
                for y in x..n {
                    let ub = self.up[x].intersect(&self.up[y]);
                    let c = ub.len();
                    let Some(j) = ub.iter().find(|&z| self.up[z].len() == c) else {
                        return Err((x, y));
                    };
                    let lb = self.down[x].intersect(&self.down[y]);
                    let c = lb.len();
                    let Some(m) = lb.iter().find(|&z| self.down[z].len() == c) else {
                        return Err((x, y));
                    };
                    join[x][y] = j;
                    join[y][x] = j;
                    meet[x][y] = m;
                    meet[y][x] = m;
                }
            }
            Ok(Tables { meet, join })
        })
    }

    /// `Ok` when every pair has a meet and a join; otherwise the least pair
    /// that fails.
    pub fn check_lattice(&self) -> Result<(), LatticeError<K>> {
        match self.tables() {
            Ok(_) => Ok(()),
            Err((x, y)) => Err(LatticeError::NotALattice {
                x: self.elements[*x].clone(),
                y: self.elements[*y].clone(),
            }),
        }
    }

    pub fn is_lattice(&self) -> bool {
        self.tables().is_ok()
    }

    pub fn meet(&self, x: usize, y: usize) -> Result<usize, LatticeError<K>> {
        self.check_lattice()?;
        Ok(self.tables().as_ref().unwrap().meet[x][y])
    }

    pub fn join(&self, x: usize, y: usize) -> Result<usize, LatticeError<K>> {
        self.check_lattice()?;
        Ok(self.tables().as_ref().unwrap().join[x][y])
    }

    /// Exhaustive check of `x∧(y∨z) = (x∧y)∨(x∧z)` over all triples.
    pub fn distributivity(&self) -> Result<Distributivity, LatticeError<K>> {
        self.check_lattice()?;
        let t = self.tables().as_ref().unwrap();
        let n = self.len();
        for x in 0..n {
            for y in 0..n {
                let mxy = t.meet[x][y];
                for z in 0..n {
                    if t.meet[x][t.join[y][z]] != t.join[mxy][t.meet[x][z]] {
                        return Ok(Distributivity::Violated(x, y, z));
                    }
                }
            }
        }
        Ok(Distributivity::Distributive)
    }

    pub fn is_distributive(&self) -> bool {
        matches!(self.distributivity(), Ok(Distributivity::Distributive))
    }

    /// An order isomorphism onto `other`, as `map[i]` for each element `i`.
    pub fn isomorphism<L: Clone + Ord + Debug>(&self, other: &Lattice<L>) -> Option<Vec<usize>> {
        let n = self.len();
        if n != other.len() || self.covers.len() != other.covers.len() {
            return None;
        }
        let sig_a = |i: usize| {
            let uc = self.covers.iter().filter(|c| c.0 == i).count();
            let dc = self.covers.iter().filter(|c| c.1 == i).count();
            (self.down[i].len(), self.up[i].len(), uc, dc)
        };
        let sig_b = |i: usize| {
            let uc = other.covers.iter().filter(|c| c.0 == i).count();
            let dc = other.covers.iter().filter(|c| c.1 == i).count();
            (other.down[i].len(), other.up[i].len(), uc, dc)
        };
        let sa: Vec<_> = (0..n).map(sig_a).collect();
        let sb: Vec<_> = (0..n).map(sig_b).collect();
        let mut ms: Vec<_> = sa.clone();
        let mut mo: Vec<_> = sb.clone();
        ms.sort();
        mo.sort();
        if ms != mo {
            return None;
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (sa[i].0, i));
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn go<K: Clone + Ord + Debug, L: Clone + Ord + Debug>(
            k: usize,
            order: &[usize],
            a: &Lattice<K>,
            b: &Lattice<L>,
            sa: &[(usize, usize, usize, usize)],
            sb: &[(usize, usize, usize, usize)],
            map: &mut Vec<usize>,
            used: &mut Vec<bool>,
        ) -> bool {
            if k == order.len() {
                return true;
            }
            let x = order[k];
            for y in 0..b.len() {
                if used[y] || sa[x] != sb[y] {
                    continue;
                }
                let ok = order[..k].iter().all(|&p| {
                    let q = map[p];
                    a.leq(p, x) == b.leq(q, y) && a.leq(x, p) == b.leq(y, q)
                });
                if !ok {
                    continue;
                }
                map[x] = y;
                used[y] = true;
                if go(k + 1, order, a, b, sa, sb, map, used) {
                    return true;
                }
                used[y] = false;
                map[x] = usize::MAX;
            }
            false
        }
        if go(0, &order, self, other, &sa, &sb, &mut map, &mut used) {
            Some(map)
        } else {
            None
        }
    }

    /// Deterministic Graphviz rendering of the Hasse diagram.
    pub fn export_dot(&self, label: impl Fn(&K) -> String) -> String {
        let mut s = String::from("digraph lattice {\n");
        if !self.is_empty() {
            s.push_str("  rankdir=BT;\n  node [shape=box];\n");
        }
        for (i, k) in self.elements.iter().enumerate() {
            s.push_str(&format!("  n{} [label=\"{}\"];\n", i, label(k).replace('"', "\\\"")));
        }
        for &(a, b) in &self.covers {
            s.push_str(&format!("  n{a} -> n{b};\n"));
        }
        s.push_str("}\n");
        s
    }

    /// JSON document `{elements, covers, is_lattice, is_distributive, witness}`.
    pub fn export_json_value(&self, label: impl Fn(&K) -> serde_json::Value) -> serde_json::Value {
        let elements: Vec<_> = self.elements.iter().map(label).collect();
        let covers: Vec<_> = self.covers.iter().map(|&(a, b)| json!([a, b])).collect();
        let (is_lattice, is_distributive, witness) = match self.distributivity() {
            Ok(Distributivity::Distributive) => (true, true, serde_json::Value::Null),
            Ok(Distributivity::Violated(x, y, z)) => (true, false, json!([x, y, z])),
            Err(_) => {
                let (x, y) = *self.tables().as_ref().err().unwrap();
                (false, false, json!([x, y]))
            }
        };
        json!({
            "elements": elements,
            "covers": covers,
            "is_lattice": is_lattice,
            "is_distributive": is_distributive,
            "witness": witness,
        })
    }

    pub fn export_json(&self, label: impl Fn(&K) -> serde_json::Value) -> String {
        let mut s = serde_json::to_string_pretty(&self.export_json_value(label)).unwrap();
        s.push('\n');
        s
    }

    /// Length of a longest chain below each element.
    pub fn ranks(&self) -> Vec<usize> {
        let n = self.len();
        let mut r = vec![0; n];
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| self.down[i].len());
        for &x in &order {
            for &(a, b) in &self.covers {
                if b == x {
                    r[x] = r[x].max(r[a] + 1);
                }
            }
        }
        r
    }
}

/// Componentwise order on the cartesian product; elements are index tuples
/// into the factors.
pub fn product<K: Clone + Ord + Debug>(factors: &[&Lattice<K>]) -> Lattice<Vec<usize>> {
    let mut elements: Vec<Vec<usize>> = vec![Vec::new()];
    for f in factors {
        elements = elements
            .into_iter()
            .flat_map(|t| {
                (0..f.len()).map(move |i| {
                    let mut u = t.clone();
                    u.push(i);
                    u
                })
            })
            .collect();
    }
    if factors.iter().any(|f| f.is_empty()) {
        elements.clear();
    }
    Lattice::from_order(elements, |a, b| {
        a.iter().zip(b).zip(factors).all(|((&x, &y), f)| f.leq(x, y))
    })
}

fn find_cycle(n: usize, moves: &[(usize, usize)]) -> Option<Vec<usize>> {
    if let Some(&(a, _)) = moves.iter().find(|(a, b)| a == b) {
        return Some(vec![a]);
    }
    let mut g: DiGraph<(), ()> = DiGraph::new();
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for &(a, b) in moves {
        g.add_edge(nodes[a], nodes[b], ());
    }
    let mut sccs: Vec<Vec<usize>> = tarjan_scc(&g)
        .into_iter()
        .filter(|c| c.len() > 1)
        .map(|c| {
            let mut v: Vec<usize> = c.into_iter().map(|x| x.index()).collect();
            v.sort();
            v
        })
        .collect();
    sccs.sort();
    let comp: BTreeSet<usize> = sccs.first()?.iter().copied().collect();
    let start = *comp.iter().next().unwrap();
    let mut prev = BTreeMap::new();
    let mut q = VecDeque::from([start]);
    while let Some(x) = q.pop_front() {
        for &(a, b) in moves {
            if a != x || !comp.contains(&b) {
                continue;
            }
            if b == start {
                let mut path = vec![x];
                let mut y = x;
                while y != start {
                    y = prev[&y];
                    path.push(y);
                }
                path.reverse();
                return Some(path);
            }
            if let std::collections::btree_map::Entry::Vacant(e) = prev.entry(b) {
                e.insert(x);
                q.push_back(b);
            }
        }
    }
    None
}

fn topo_order(n: usize, succ: &[Vec<usize>]) -> Vec<usize> {
    let mut indeg = vec![0; n];
    for s in succ {
        for &y in s {
            indeg[y] += 1;
        }
    }
    let mut q: VecDeque<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut out = Vec::with_capacity(n);
    while let Some(x) = q.pop_front() {
        out.push(x);
        for &y in &succ[x] {
            indeg[y] -= 1;
            if indeg[y] == 0 {
                q.push_back(y);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: u32) -> Lattice<u32> {
        Lattice::from_moves([0], |&x| if x + 1 < n { vec![x + 1] } else { vec![] }).unwrap()
    }

    #[test]
    fn antichain_from_no_moves() {
        let l = Lattice::from_moves([3, 1, 2], |_| vec![]).unwrap();
        assert_eq!(l.elements, vec![1, 2, 3]);
        assert!(l.covers.is_empty());
        assert!(!l.leq(0, 1));
        assert!(!l.is_lattice());
        assert!(matches!(
            l.check_lattice(),
            Err(LatticeError::NotALattice { x: 1, y: 2 })
        ));
    }

    #[test]
    fn three_chain() {
        let l = chain(3);
        assert_eq!(l.covers, vec![(0, 1), (1, 2)]);
        assert!(l.covers_match_moves());
        assert_eq!(l.meet(0, 2).unwrap(), 0);
        assert_eq!(l.join(0, 2).unwrap(), 2);
        assert!(l.is_distributive());
    }

    #[test]
    fn cycle_is_detected() {
        let err = Lattice::from_moves([0u8], |&x| vec![(x + 1) % 3]).err().unwrap();
        assert_eq!(err, LatticeError::CycleDetected { witness: vec![0, 1, 2] });
    }

    #[test]
    fn diamond_m3_not_distributive() {
        let l = Lattice::from_moves([0u8], |&x| match x {
            0 => vec![1, 2, 3],
            1..=3 => vec![4],
            _ => vec![],
        })
        .unwrap();
        assert!(l.is_lattice());
        assert_eq!(l.distributivity().unwrap(), Distributivity::Violated(1, 2, 3));
    }

    #[test]
    fn product_of_chains() {
        let a = chain(2);
        let b = chain(2);
        let p = product(&[&a, &b]);
        assert_eq!(p.len(), 4);
        assert_eq!(p.covers.len(), 4);
        assert!(p.is_distributive());
        let single = Lattice::from_moves([7u32], |_| vec![]).unwrap();
        let c3 = chain(3);
        let q = product(&[&single, &c3]);
        assert!(q.isomorphism(&c3).is_some());
        let empty: Lattice<u32> = Lattice::from_moves(Vec::<u32>::new(), |_| vec![]).unwrap();
        assert!(product(&[&c3, &empty]).is_empty());
    }

    #[test]
    fn isomorphism_and_exports() {
        let a = chain(3);
        let b = Lattice::from_moves([30u32], |&x| if x > 10 { vec![x - 10] } else { vec![] }).unwrap();
        assert!(a.isomorphism(&b).is_some());
        let anti = Lattice::from_moves([1u32, 2, 3], |_| vec![]).unwrap();
        assert!(a.isomorphism(&anti).is_none());
        let dot = a.export_dot(|k| k.to_string());
        assert_eq!(dot.matches("->").count(), 2);
        assert_eq!(dot, a.export_dot(|k| k.to_string()));
        let empty: Lattice<u32> = Lattice::from_moves(Vec::<u32>::new(), |_| vec![]).unwrap();
        assert_eq!(empty.export_dot(|k| k.to_string()), "digraph lattice {\n}\n");
        let j: serde_json::Value = serde_json::from_str(&a.export_json(|k| json!(k))).unwrap();
        assert_eq!(j["is_distributive"], json!(true));
    }
}
