//! Graphs, symmetric arcs, line digraphs and partitions of the line digraph
//! into disjoint essential cycles.
//!
//! Vertices carry 1-based labels `1..=n`. Every neighbor list is kept in
//! ascending label order, and arcs are indexed lexicographically by
//! `(origin, terminus)`. Arcs leaving the same vertex therefore occupy a
//! contiguous index range, which is what makes coin operators block
//! diagonal.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use itertools::Itertools;
use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ONE, ZERO};

/// Default upper bound on `∏ d_u!` for [`enumerate_partitions`].
pub const DEFAULT_PARTITION_CAP: u128 = 1_000_000;

/// Directed pair `(origin, terminus)` of vertex labels.
pub type Arc = (usize, usize);

/// Simple connected undirected graph on vertices `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
}

impl Graph {
    /// Validates and normalizes an edge list of 1-based pairs.
    pub fn new(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        let mut set = BTreeSet::new();
        for &(u, v) in edges {
            if u == 0 || v == 0 || u > vertex_count || v > vertex_count {
                return Err(Error::InvalidGraph(format!(
                    "edge {{{u},{v}}} references a vertex outside 1..={vertex_count}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidGraph(format!("repeated edge {{{u},{v}}}")));
            }
        }
        if set.is_empty() {
            return Err(Error::InvalidGraph("graph has no edges".into()));
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut neighbors = vec![Vec::new(); vertex_count];
        for &(u, v) in &edges {
            neighbors[u - 1].push(v);
            neighbors[v - 1].push(u);
        }
        neighbors.iter_mut().for_each(|n| n.sort_unstable());

        let g = Graph { vertex_count, edges, neighbors };
        if !g.is_connected() {
            return Err(Error::InvalidGraph("graph is not connected".into()));
        }
        Ok(g)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertex_count];
        let mut queue = VecDeque::from([1usize]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &v in self.neighbors(u) {
                if !seen[v - 1] {
                    seen[v - 1] = true;
                    queue.push_back(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> {
        1..=self.vertex_count
    }

    /// Edges as `(min, max)` pairs in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Position of `{u, v}` in [`Graph::edges`].
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    /// `N(u)` in ascending order.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.neighbors[u - 1]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.neighbors[u - 1].len()
    }

    pub fn is_bipartite(&self) -> bool {
        let mut color = vec![None; self.vertex_count];
        color[0] = Some(false);
        let mut queue = VecDeque::from([1usize]);
        while let Some(u) = queue.pop_front() {
            let cu = color[u - 1].unwrap();
            for &v in self.neighbors(u) {
                match color[v - 1] {
                    None => {
                        color[v - 1] = Some(!cu);
                        queue.push_back(v);
                    }
                    Some(cv) if cv == cu => return false,
                    _ => {}
                }
            }
        }
        true
    }

    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        Graph::new(n, &edges)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..=n).map(|i| (i, i % n + 1)).collect();
        Graph::new(n, &edges)
    }

    /// Star with center 1 and leaves `2..=leaves+1`.
    pub fn star(leaves: usize) -> Result<Self> {
        let edges: Vec<_> = (2..=leaves + 1).map(|i| (1, i)).collect();
        Graph::new(leaves + 1, &edges)
    }

    pub fn complete(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..=n).tuple_combinations().collect();
        Graph::new(n, &edges)
    }
}

/// The symmetric arc set `D(G)` with its canonical indexing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcSpace {
    graph: Graph,
    arcs: Vec<Arc>,
    offsets: Vec<usize>,
}

impl ArcSpace {
    pub fn new(graph: &Graph) -> Self {
        let mut arcs = Vec::with_capacity(2 * graph.edge_count());
        let mut offsets = Vec::with_capacity(graph.vertex_count() + 1);
        for u in graph.vertices() {
            offsets.push(arcs.len());
            arcs.extend(graph.neighbors(u).iter().map(|&v| (u, v)));
        }
        offsets.push(arcs.len());
        ArcSpace { graph: graph.clone(), arcs, offsets }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Arcs sorted by `(origin, terminus)`.
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn arc(&self, index: usize) -> Arc {
        self.arcs[index]
    }

    pub fn index_of(&self, (u, v): Arc) -> Option<usize> {
        if u == 0 || u > self.graph.vertex_count() {
            return None;
        }
        self.graph
            .neighbors(u)
            .binary_search(&v)
            .ok()
            .map(|p| self.offsets[u - 1] + p)
    }

    pub fn try_index(&self, arc: Arc) -> Result<usize> {
        self.index_of(arc).ok_or(Error::UnknownArc(arc.0, arc.1))
    }

    /// Index range of the arcs leaving `u`; the local basis of `H_u`.
    pub fn block(&self, u: usize) -> std::ops::Range<usize> {
        self.offsets[u - 1]..self.offsets[u]
    }

    /// The ordered neighbor list fixing the local basis `|e_v^(u)⟩`.
    pub fn neighbor_order(&self, u: usize) -> &[usize] {
        self.graph.neighbors(u)
    }

    /// Position of `v` in the local basis of `u`.
    pub fn local_position(&self, u: usize, v: usize) -> Option<usize> {
        self.graph.neighbors(u).binary_search(&v).ok()
    }

    pub fn reverse_index(&self, index: usize) -> usize {
        let (u, v) = self.arcs[index];
        self.index_of((v, u)).expect("symmetric arc set")
    }
}

pub fn reverse(arc: Arc) -> Arc {
    (arc.1, arc.0)
}

/// `L⃗G`: vertices are the arcs of `G`, with an arc `(u,v) → (v,w)` for every
/// composable pair, back-turns included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineDigraph {
    pub vertices: Vec<Arc>,
    /// Pairs of vertex indices `(from, to)`.
    pub arcs: Vec<(usize, usize)>,
}

impl LineDigraph {
    pub fn new(space: &ArcSpace) -> Self {
        let mut arcs = Vec::new();
        for (from, &(_, v)) in space.arcs().iter().enumerate() {
            for to in space.block(v) {
                arcs.push((from, to));
            }
        }
        LineDigraph { vertices: space.arcs().to_vec(), arcs }
    }

    pub fn contains(&self, from: usize, to: usize) -> bool {
        self.arcs.binary_search(&(from, to)).is_ok()
    }

    /// `⟨l,m|M|i,j⟩ = δ_{j,l}`, i.e. column `from` has a one in row `to`.
    pub fn adjacency_matrix(&self) -> ComplexMatrix {
        let n = self.vertices.len();
        let mut m = ComplexMatrix::from_element(n, n, ZERO);
        for &(from, to) in &self.arcs {
            m[(to, from)] = ONE;
        }
        m
    }
}

pub fn line_digraph(g: &Graph) -> LineDigraph {
    LineDigraph::new(&ArcSpace::new(g))
}

/// A decomposition of `L⃗G` into disjoint essential cycles, stored both as the
/// cycle list and as the successor map `f_π`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    successor: Vec<usize>,
    cycles: Vec<Vec<usize>>,
}

impl Partition {
    /// Builds a partition from `f_π` given per arc index; each vertex must
    /// receive a bijection `i ↦ f_π(i, j)` on `N(j)`.
    pub fn from_successors(space: &ArcSpace, successor: Vec<usize>) -> Result<Self> {
        if successor.len() != space.len() {
            return Err(Error::InvalidPartition(format!(
                "successor map has {} entries for {} arcs",
                successor.len(),
                space.len()
            )));
        }
        let g = space.graph();
        for j in g.vertices() {
            let mut image: Vec<usize> = g
                .neighbors(j)
                .iter()
                .map(|&i| successor[space.index_of((i, j)).unwrap()])
                .collect();
            image.sort_unstable();
            if image != g.neighbors(j) {
                return Err(Error::InvalidPartition(format!(
                    "successors at vertex {j} are {image:?}, not a bijection onto N({j}) = {:?}",
                    g.neighbors(j)
                )));
            }
        }
        let cycles = trace_cycles(space, &successor);
        let p = Partition { successor, cycles };
        p.validate(space)?;
        Ok(p)
    }

    /// Builds a partition from an explicit `(i,j) ↦ f` map covering every arc.
    pub fn from_map(space: &ArcSpace, map: &BTreeMap<Arc, usize>) -> Result<Self> {
        let mut successor = vec![0; space.len()];
        let mut seen = vec![false; space.len()];
        for (&arc, &f) in map {
            let idx = space.try_index(arc)?;
            successor[idx] = f;
            seen[idx] = true;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            let (u, v) = space.arc(missing);
            return Err(Error::InvalidPartition(format!("no successor given for arc ({u},{v})")));
        }
        Partition::from_successors(space, successor)
    }

    /// Builds a partition from one bijection per vertex; `choice[j-1][p]` is
    /// the position in `N(j)` of `f_π(N(j)[p], j)`.
    fn from_local_bijections(space: &ArcSpace, choice: &[Vec<usize>]) -> Result<Self> {
        let g = space.graph();
        let mut successor = vec![0; space.len()];
        for j in g.vertices() {
            let nbrs = g.neighbors(j);
            for (p, &i) in nbrs.iter().enumerate() {
                successor[space.index_of((i, j)).unwrap()] = nbrs[choice[j - 1][p]];
            }
        }
        Partition::from_successors(space, successor)
    }

    /// `f_π(i, j) = i` for every arc: all cycles are `{e, e⁻¹}`.
    pub fn flip_flop(space: &ArcSpace) -> Self {
        let successor = space.arcs().iter().map(|&(i, _)| i).collect();
        Partition::from_successors(space, successor).expect("flip-flop is always valid")
    }

    /// Uniform sample from `Π_G`: an independent uniform bijection per vertex.
    pub fn random<R: Rng + ?Sized>(space: &ArcSpace, rng: &mut R) -> Self {
        let choice: Vec<Vec<usize>> = space
            .graph()
            .vertices()
            .map(|j| {
                let mut perm: Vec<usize> = (0..space.graph().degree(j)).collect();
                perm.shuffle(rng);
                perm
            })
            .collect();
        Partition::from_local_bijections(space, &choice).expect("local bijections form a partition")
    }

    /// `f_π` indexed by arc index.
    pub fn successors(&self) -> &[usize] {
        &self.successor
    }

    /// Cycles as sequences of arc indices, each starting at its smallest index.
    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    pub fn successor(&self, space: &ArcSpace, arc: Arc) -> Result<usize> {
        Ok(self.successor[space.try_index(arc)?])
    }

    /// Index of the arc `(j, f_π(i,j))` following arc `index`.
    pub fn next_arc(&self, space: &ArcSpace, index: usize) -> usize {
        let (_, j) = space.arc(index);
        space.index_of((j, self.successor[index])).unwrap()
    }

    pub fn is_flip_flop(&self, space: &ArcSpace) -> bool {
        space.arcs().iter().zip(&self.successor).all(|(&(i, _), &f)| f == i)
    }

    /// Checks disjointness, coverage, essentiality and that consecutive cycle
    /// entries are line-digraph arcs agreeing with the successor map.
    pub fn validate(&self, space: &ArcSpace) -> Result<()> {
        let mut owner = vec![usize::MAX; space.len()];
        for (c, cycle) in self.cycles.iter().enumerate() {
            for &a in cycle {
                if owner[a] != usize::MAX {
                    return Err(Error::InvalidPartition(format!(
                        "arc {:?} lies on cycles {} and {c}",
                        space.arc(a),
                        owner[a]
                    )));
                }
                owner[a] = c;
            }
            for (pos, &a) in cycle.iter().enumerate() {
                let b = cycle[(pos + 1) % cycle.len()];
                let (_, v) = space.arc(a);
                let (v2, w) = space.arc(b);
                if v != v2 || self.successor[a] != w {
                    return Err(Error::InvalidPartition(format!(
                        "cycle step {:?} -> {:?} disagrees with the successor map",
                        space.arc(a),
                        space.arc(b)
                    )));
                }
            }
        }
        if let Some(a) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::InvalidPartition(format!("arc {:?} is not covered", space.arc(a))));
        }
        Ok(())
    }
}

fn trace_cycles(space: &ArcSpace, successor: &[usize]) -> Vec<Vec<usize>> {
    let mut visited = vec![false; space.len()];
    let mut cycles = Vec::new();
    for start in 0..space.len() {
        if visited[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut a = start;
        while !visited[a] {
            visited[a] = true;
            cycle.push(a);
            let (_, j) = space.arc(a);
            a = space.index_of((j, successor[a])).unwrap();
        }
        cycles.push(cycle);
    }
    cycles
}

pub fn flip_flop_partition(space: &ArcSpace) -> Partition {
    Partition::flip_flop(space)
}

/// `|Π_G| = ∏_u d_u!`, or `None` on overflow.
pub fn partition_count(g: &Graph) -> Option<u128> {
    g.vertices().try_fold(1u128, |acc, u| {
        (1..=g.degree(u) as u128).try_fold(acc, |a, k| a.checked_mul(k))
    })
}

/// All of `Π_G`, as the product of all bijections at each vertex. Vertex 1's
/// bijection varies slowest; each vertex runs through permutations in
/// lexicographic order.
pub fn enumerate_partitions(space: &ArcSpace, cap: u128) -> Result<Vec<Partition>> {
    let g = space.graph();
    let count = partition_count(g).unwrap_or(u128::MAX);
    if count > cap {
        return Err(Error::CapExceeded { count, cap });
    }
    let local: Vec<Vec<Vec<usize>>> = g
        .vertices()
        .map(|u| {
            let d = g.degree(u);
            (0..d).permutations(d).collect()
        })
        .collect();
    local
        .iter()
        .map(|perms| perms.iter())
        .multi_cartesian_product()
        .map(|choice| {
            let choice: Vec<Vec<usize>> = choice.into_iter().cloned().collect();
            Partition::from_local_bijections(space, &choice)
        })
        .collect()
}

/// The reversed partition `π*`: every cycle traversed backwards on inverse
/// arcs. Its successor map is `g_{π*}`, with `g_{π*}(j,i)` the origin of the
/// arc preceding `(i,j)` in `π`, so that `S_π⁻¹|i,j⟩ = |g_{π*}(j,i), i⟩`.
pub fn reverse_partition(space: &ArcSpace, p: &Partition) -> Partition {
    let mut successor = vec![0; space.len()];
    for (idx, &(i, j)) in space.arcs().iter().enumerate() {
        let next = p.next_arc(space, idx);
        // (i,j) -> (j,w) in π becomes (w,j) -> (j,i) in π*
        let (_, w) = space.arc(next);
        successor[space.index_of((w, j)).unwrap()] = i;
    }
    Partition::from_successors(space, successor).expect("reversal of a partition is a partition")
}

/// True when `g_{π*}(j,i) = j` for all arcs, i.e. `S_π⁻¹` is itself a shift.
pub fn inverse_is_shift(space: &ArcSpace, p: &Partition) -> bool {
    let rev = reverse_partition(space, p);
    space
        .arcs()
        .iter()
        .all(|&(i, j)| rev.successor(space, (j, i)).unwrap() == j)
}

/// `σ^(j)_{π,π′}: f_π(i,j) ↦ f_{π′}(i,j)` on `N(j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationTable {
    pub vertex: usize,
    /// `(from, to)` pairs in ascending `from` order.
    pub mapping: Vec<(usize, usize)>,
}

impl PermutationTable {
    pub fn apply(&self, v: usize) -> Option<usize> {
        self.mapping.iter().find(|&&(a, _)| a == v).map(|&(_, b)| b)
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().all(|&(a, b)| a == b)
    }

    /// `Σ_x |e_{σ(x)}⟩⟨e_x|` in the local basis of `vertex`.
    pub fn matrix(&self, space: &ArcSpace) -> ComplexMatrix {
        let d = space.graph().degree(self.vertex);
        let mut m = ComplexMatrix::from_element(d, d, ZERO);
        for &(from, to) in &self.mapping {
            let c = space.local_position(self.vertex, from).unwrap();
            let r = space.local_position(self.vertex, to).unwrap();
            m[(r, c)] = ONE;
        }
        m
    }

    /// The same permutation as a real 0/1 matrix.
    pub fn real_matrix(&self, space: &ArcSpace) -> DMatrix<f64> {
        self.matrix(space).map(|z| z.re)
    }
}

pub fn partition_permutation(
    space: &ArcSpace,
    p: &Partition,
    p_prime: &Partition,
    j: usize,
) -> PermutationTable {
    let mut mapping: Vec<(usize, usize)> = space
        .neighbor_order(j)
        .iter()
        .map(|&i| {
            let idx = space.index_of((i, j)).unwrap();
            (p.successors()[idx], p_prime.successors()[idx])
        })
        .collect();
    mapping.sort_unstable();
    PermutationTable { vertex: j, mapping }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c4() -> ArcSpace {
        ArcSpace::new(&Graph::cycle(4).unwrap())
    }

    #[test]
    fn rejects_bad_graphs() {
        assert!(matches!(Graph::new(3, &[(1, 2)]), Err(Error::InvalidGraph(_))));
        assert!(matches!(Graph::new(2, &[(1, 1)]), Err(Error::InvalidGraph(_))));
        assert!(matches!(Graph::new(2, &[(1, 2), (2, 1)]), Err(Error::InvalidGraph(_))));
        assert!(matches!(Graph::new(2, &[(1, 3)]), Err(Error::InvalidGraph(_))));
    }

    #[test]
    fn arc_space_examples() {
        let k2 = ArcSpace::new(&Graph::path(2).unwrap());
        assert_eq!(k2.arcs(), &[(1, 2), (2, 1)]);
        assert_eq!(c4().len(), 8);
        let s3 = ArcSpace::new(&Graph::star(3).unwrap());
        assert_eq!(s3.len(), 6);
        assert_eq!(s3.neighbor_order(1), &[2, 3, 4]);
        for (idx, &a) in s3.arcs().iter().enumerate() {
            assert_eq!(s3.index_of(a), Some(idx));
            assert_eq!(s3.arc(s3.reverse_index(idx)), reverse(a));
        }
        assert!(s3.arcs().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn line_digraph_examples() {
        let k2 = line_digraph(&Graph::path(2).unwrap());
        assert_eq!(k2.vertices.len(), 2);
        assert_eq!(k2.arcs, vec![(0, 1), (1, 0)]);

        // out-degree of (u,v) is d_v, counted by direct enumeration
        let c4 = c4();
        let ld = LineDigraph::new(&c4);
        let mut brute = 0;
        for a in c4.arcs() {
            for b in c4.arcs() {
                if a.1 == b.0 {
                    brute += 1;
                }
            }
        }
        assert_eq!(ld.arcs.len(), brute);
        assert_eq!(brute, 16);

        let p3 = ArcSpace::new(&Graph::path(3).unwrap());
        let ld = LineDigraph::new(&p3);
        let from = p3.index_of((1, 2)).unwrap();
        let succ: Vec<Arc> = ld.arcs.iter().filter(|e| e.0 == from).map(|e| p3.arc(e.1)).collect();
        assert_eq!(succ, vec![(2, 1), (2, 3)]);
    }

    #[test]
    fn flip_flop_structure() {
        let k2 = ArcSpace::new(&Graph::path(2).unwrap());
        let ff = flip_flop_partition(&k2);
        assert_eq!(ff.cycles(), &[vec![0, 1]]);

        let c4 = c4();
        let ff = flip_flop_partition(&c4);
        assert_eq!(ff.cycles().len(), 4);
        for c in ff.cycles() {
            assert_eq!(c.len(), 2);
            assert_eq!(c4.arc(c[1]), reverse(c4.arc(c[0])));
        }
        for &(i, j) in c4.arcs() {
            assert_eq!(ff.successor(&c4, (i, j)).unwrap(), i);
        }
    }

    #[test]
    fn partition_counts() {
        let count = |g: Graph| enumerate_partitions(&ArcSpace::new(&g), DEFAULT_PARTITION_CAP).unwrap();
        assert_eq!(count(Graph::cycle(4).unwrap()).len(), 16);
        assert_eq!(count(Graph::path(2).unwrap()).len(), 1);
        assert_eq!(count(Graph::path(3).unwrap()).len(), 2);
        assert_eq!(count(Graph::star(3).unwrap()).len(), 6);
        assert_eq!(count(Graph::complete(4).unwrap()).len(), 6usize.pow(4));
    }

    #[test]
    fn enumeration_is_distinct_and_contains_flip_flop() {
        let space = ArcSpace::new(&Graph::complete(4).unwrap());
        let all = enumerate_partitions(&space, DEFAULT_PARTITION_CAP).unwrap();
        let set: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(set.len(), all.len());
        assert!(set.contains(&flip_flop_partition(&space)));
        for p in &all {
            p.validate(&space).unwrap();
        }
    }

    #[test]
    fn cap_exceeded_reports_count() {
        let space = ArcSpace::new(&Graph::complete(6).unwrap());
        match enumerate_partitions(&space, DEFAULT_PARTITION_CAP) {
            Err(Error::CapExceeded { count, .. }) => assert_eq!(count, 120u128.pow(6)),
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn explicit_maps_are_validated() {
        let space = c4();
        let mut map: BTreeMap<Arc, usize> = space.arcs().iter().map(|&(i, j)| ((i, j), i)).collect();
        assert!(Partition::from_map(&space, &map).unwrap().is_flip_flop(&space));
        // two in-arcs at vertex 2 sent to the same out-neighbor
        map.insert((1, 2), 3);
        assert!(matches!(Partition::from_map(&space, &map), Err(Error::InvalidPartition(_))));
        map.remove(&(1, 2));
        assert!(matches!(Partition::from_map(&space, &map), Err(Error::InvalidPartition(_))));
    }

    #[test]
    fn unknown_arc_is_an_error() {
        let space = c4();
        let ff = flip_flop_partition(&space);
        assert_eq!(ff.successor(&space, (1, 3)), Err(Error::UnknownArc(1, 3)));
    }

    #[test]
    fn reverse_is_an_involution_and_characterizes_flip_flop() {
        for g in [Graph::cycle(4).unwrap(), Graph::path(3).unwrap(), Graph::star(3).unwrap()] {
            let space = ArcSpace::new(&g);
            for p in enumerate_partitions(&space, DEFAULT_PARTITION_CAP).unwrap() {
                let r = reverse_partition(&space, &p);
                assert_eq!(reverse_partition(&space, &r), p);
                assert_eq!(inverse_is_shift(&space, &p), p.is_flip_flop(&space));
            }
        }
    }

    #[test]
    fn permutation_tables() {
        let space = c4();
        let ff = flip_flop_partition(&space);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = Partition::random(&space, &mut rng);
        assert!(partition_permutation(&space, &p, &p, 2).is_identity());
        for j in 1..=4 {
            let t = partition_permutation(&space, &ff, &p, j);
            for &i in space.neighbor_order(j) {
                assert_eq!(t.apply(i), Some(p.successor(&space, (i, j)).unwrap()));
            }
        }
        // flip-flop vs the all-straight partition at vertex 2: 1 <-> 3
        let straight: BTreeMap<Arc, usize> = space
            .arcs()
            .iter()
            .map(|&(i, j)| ((i, j), *space.neighbor_order(j).iter().find(|&&m| m != i).unwrap()))
            .collect();
        let straight = Partition::from_map(&space, &straight).unwrap();
        let t = partition_permutation(&space, &ff, &straight, 2);
        assert_eq!(t.mapping, vec![(1, 3), (3, 1)]);
        let m = t.real_matrix(&space);
        assert_eq!(m, DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
    }
}
