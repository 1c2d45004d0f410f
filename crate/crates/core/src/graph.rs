//! Simple undirected graphs on at most 64 vertices with bitset adjacency.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::vertex_set::{VertexSet, MAX_VERTICES};

/// Distance value used for unreachable vertices.
pub const UNREACHABLE: u32 = u32::MAX;

/// Largest order representable by the short graph6 header.
pub const GRAPH6_MAX_N: usize = 62;

/// An immutable simple undirected graph on vertices `0..n`.
///
/// Adjacency is stored as one [`VertexSet`] per vertex; the constructor
/// guarantees symmetry and irreflexivity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::UnsupportedSize { n, max: MAX_VERTICES });
        }
        Ok(Graph { n, adj: vec![VertexSet::EMPTY; n] })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            g.adj[u].insert(v);
            g.adj[v].insert(u);
        }
        Ok(g)
    }

    /// Builds a graph from raw adjacency rows, symmetrising and dropping loops.
    pub(crate) fn from_rows(rows: Vec<VertexSet>) -> Self {
        let n = rows.len();
        let mut adj = rows;
        for (u, row) in adj.iter_mut().enumerate() {
            *row = row.without(u) & VertexSet::full(n);
        }
        for u in 0..n {
            for v in adj[u] {
                adj[v].insert(u);
            }
        }
        Graph { n, adj }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            (self.adj[u] - VertexSet::full(u + 1)).iter().map(move |v| (u, v))
        })
    }

    /// Number of edges of the subgraph induced by `vs`.
    pub fn induced_edge_count(&self, vs: VertexSet) -> usize {
        vs.iter().map(|v| (self.adj[v] & vs).len()).sum::<usize>() / 2
    }

    /// Degree of `v` inside the subgraph induced by `vs`.
    #[inline]
    pub fn induced_degree(&self, v: usize, vs: VertexSet) -> usize {
        (self.adj[v] & vs).len()
    }

    /// True when at least one edge joins `a` to `b`.
    pub fn has_edge_between(&self, a: VertexSet, b: VertexSet) -> bool {
        a.iter().any(|u| !self.adj[u].is_disjoint(b))
    }

    /// Vertices adjacent to at least one vertex of `vs`.
    pub fn neighborhood_of(&self, vs: VertexSet) -> VertexSet {
        vs.iter().fold(VertexSet::EMPTY, |acc, v| acc | self.adj[v])
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    /// BFS distances from `v`; unreachable vertices get [`UNREACHABLE`].
    pub fn distances_from(&self, v: usize) -> Result<Vec<u32>> {
        self.check_vertex(v)?;
        let mut dist = vec![UNREACHABLE; self.n];
        dist[v] = 0;
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            for w in self.adj[u] {
                if dist[w] == UNREACHABLE {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    /// Vertices reachable from `v` (including `v`).
    pub fn component_of(&self, v: usize) -> VertexSet {
        let mut seen = VertexSet::singleton(v);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let next = self.neighborhood_of(frontier) - seen;
            seen = seen | next;
            frontier = next;
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.component_of(0) == self.vertices()
    }

    pub fn is_complete(&self) -> bool {
        self.edge_count() == self.n * self.n.saturating_sub(1) / 2
    }

    pub fn is_bipartite(&self) -> bool {
        let mut side = vec![u8::MAX; self.n];
        for s in 0..self.n {
            if side[s] != u8::MAX {
                continue;
            }
            side[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for w in self.adj[u] {
                    if side[w] == u8::MAX {
                        side[w] = 1 - side[u];
                        queue.push_back(w);
                    } else if side[w] == side[u] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// True iff some edge of `vs` exists, i.e. `vs` is not independent.
    pub fn has_edge_within(&self, vs: VertexSet) -> bool {
        vs.iter().any(|v| !(self.adj[v] & vs).is_disjoint(vs))
    }

    /// Direct K4 scan: an edge `uv` whose common neighbourhood contains an edge.
    pub fn has_k4(&self) -> bool {
        self.edges().any(|(u, v)| self.has_edge_within(self.adj[u] & self.adj[v]))
    }

    pub fn has_triangle(&self) -> bool {
        self.edges().any(|(u, v)| !(self.adj[u] & self.adj[v]).is_empty())
    }

    /// Size of a maximum clique, by branch and bound with a greedy colouring bound.
    pub fn clique_number(&self) -> usize {
        let mut best = 0;
        self.expand_clique(0, self.vertices(), &mut best);
        best
    }

    fn expand_clique(&self, size: usize, candidates: VertexSet, best: &mut usize) {
        if candidates.is_empty() {
            *best = (*best).max(size);
            return;
        }
        let (order, colors) = self.greedy_coloring(candidates);
        let mut candidates = candidates;
        for (&v, &c) in order.iter().zip(colors.iter()).rev() {
            if size + c <= *best {
                return;
            }
            self.expand_clique(size + 1, candidates & self.adj[v], best);
            candidates.remove(v);
        }
    }

    /// Sequential colouring of `vs`; returns vertices in colour order with their
    /// (1-based) colour classes, so a clique in any prefix is bounded by its colour.
    fn greedy_coloring(&self, vs: VertexSet) -> (Vec<usize>, Vec<usize>) {
        let mut order = Vec::with_capacity(vs.len());
        let mut colors = Vec::with_capacity(vs.len());
        let mut uncolored = vs;
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            let mut available = uncolored;
            while let Some(v) = available.first() {
                available = available - self.adj[v];
                available.remove(v);
                uncolored.remove(v);
                order.push(v);
                colors.push(color);
            }
        }
        (order, colors)
    }

    /// Induced subgraph on `vs`, re-indexed in increasing vertex order.
    pub fn induced_subgraph(&self, vs: VertexSet) -> Graph {
        let map: Vec<usize> = vs.to_vec();
        let rows = map
            .iter()
            .map(|&u| {
                map.iter()
                    .enumerate()
                    .filter(|&(_, &w)| self.adj[u].contains(w))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        Graph::from_rows(rows)
    }

    /// Decodes one graph6 line (short form, `n <= 62`). An optional `>>graph6<<`
    /// header and surrounding whitespace are accepted.
    pub fn from_graph6(text: &str) -> Result<Self> {
        let trimmed = text.trim_end_matches(['\n', '\r', ' ', '\t']);
        let (base, body) = match trimmed.strip_prefix(">>graph6<<") {
            Some(rest) => (10, rest.as_bytes()),
            None => (0, trimmed.as_bytes()),
        };
        let err = |offset: usize, reason: &str| Error::Parse { offset: base + offset, reason: reason.to_string() };

        let Some(&header) = body.first() else {
            return Err(err(0, "empty input"));
        };
        if header == b'~' {
            return Err(Error::UnsupportedSize { n: 63, max: GRAPH6_MAX_N });
        }
        if !(63..=126).contains(&header) {
            return Err(err(0, "header byte outside 63..=126"));
        }
        let n = (header - 63) as usize;
        let bits = n * n.saturating_sub(1) / 2;
        let expected = 1 + bits.div_ceil(6);
        for (i, &b) in body.iter().enumerate().skip(1) {
            if !(63..=126).contains(&b) {
                return Err(err(i, "byte outside 63..=126"));
            }
        }
        if body.len() < expected {
            return Err(err(body.len(), "truncated edge bit vector"));
        }
        if body.len() > expected {
            return Err(err(expected, "trailing bytes after edge bit vector"));
        }

        let mut rows = vec![VertexSet::EMPTY; n];
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                let byte = body[1 + k / 6] - 63;
                if byte >> (5 - k % 6) & 1 == 1 {
                    rows[i].insert(j);
                    rows[j].insert(i);
                }
                k += 1;
            }
        }
        let padding = (6 - bits % 6) % 6;
        if padding > 0 {
            let last = body[expected - 1] - 63;
            if last & ((1u8 << padding) - 1) != 0 {
                return Err(err(expected - 1, "nonzero padding bits"));
            }
        }
        Ok(Graph { n, adj: rows })
    }

    pub fn to_graph6(&self) -> Result<String> {
        if self.n > GRAPH6_MAX_N {
            return Err(Error::UnsupportedSize { n: self.n, max: GRAPH6_MAX_N });
        }
        let mut out = String::with_capacity(1 + self.n * self.n / 12 + 1);
        out.push((self.n as u8 + 63) as char);
        let mut acc = 0u8;
        let mut filled = 0;
        for j in 1..self.n {
            for i in 0..j {
                acc = acc << 1 | self.has_edge(i, j) as u8;
                filled += 1;
                if filled == 6 {
                    out.push((acc + 63) as char);
                    acc = 0;
                    filled = 0;
                }
            }
        }
        if filled > 0 {
            out.push(((acc << (6 - filled)) + 63) as char);
        }
        Ok(out)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<_> = self.edges().collect();
        f.debug_struct("Graph").field("n", &self.n).field("edges", &edges).finish()
    }
}

/// All-pairs BFS distances, computed once and shared by every check on a graph.
#[derive(Clone, Debug)]
pub struct DistanceTable {
    n: usize,
    dist: Vec<u32>,
}

impl DistanceTable {
    pub fn new(g: &Graph) -> Self {
        let n = g.n();
        let mut dist = Vec::with_capacity(n * n);
        for v in 0..n {
            dist.extend(g.distances_from(v).expect("vertex in range"));
        }
        DistanceTable { n, dist }
    }

    /// Fails unless every pair of vertices is at finite distance.
    pub fn connected(g: &Graph) -> Result<Self> {
        let table = DistanceTable::new(g);
        if table.dist.contains(&UNREACHABLE) {
            return Err(Error::Disconnected);
        }
        Ok(table)
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> u32 {
        self.dist[u * self.n + v]
    }

    /// Vertices `w` with `d(u, w) != d(v, w)`; always contains `u` and `v` when `u != v`.
    pub fn distinguishers(&self, u: usize, v: usize) -> VertexSet {
        let ru = &self.dist[u * self.n..(u + 1) * self.n];
        let rv = &self.dist[v * self.n..(v + 1) * self.n];
        ru.iter().zip(rv).enumerate().filter(|(_, (a, b))| a != b).map(|(w, _)| w).collect()
    }

    pub fn distinguishes(&self, w: usize, u: usize, v: usize) -> bool {
        self.get(w, u) != self.get(w, v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::named_graph;

    fn g(name: &str) -> Graph {
        named_graph(name).unwrap()
    }

    #[test]
    fn graph6_hand_decoded_star() {
        // D = 5 vertices; '?' = 000000, '{' = 111100: bits (0,4),(1,4),(2,4),(3,4)
        let star = Graph::from_graph6("D?{").unwrap();
        assert_eq!(star.n(), 5);
        assert_eq!(star.edges().collect::<Vec<_>>(), vec![(0, 4), (1, 4), (2, 4), (3, 4)]);
        assert_eq!(star.to_graph6().unwrap(), "D?{");
    }

    #[test]
    fn graph6_two_vertex_cases() {
        let e = Graph::from_graph6("A?").unwrap();
        assert_eq!((e.n(), e.edge_count()), (2, 0));
        let k2 = Graph::from_graph6("A_").unwrap();
        assert!(k2.has_edge(0, 1));
        assert_eq!(Graph::empty(2).unwrap().to_graph6().unwrap(), "A?");
        assert_eq!(g("K2").to_graph6().unwrap(), "A_");
    }

    #[test]
    fn graph6_errors_name_offsets() {
        match Graph::from_graph6("D?") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("{other:?}"),
        }
        match Graph::from_graph6("D? ") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("{other:?}"),
        }
        match Graph::from_graph6("D?{{") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(Graph::from_graph6(""), Err(Error::Parse { offset: 0, .. })));
        assert!(matches!(Graph::from_graph6("~?@"), Err(Error::UnsupportedSize { .. })));
        // 'D?|' would set a padding bit
        assert!(matches!(Graph::from_graph6("D?|"), Err(Error::Parse { offset: 2, .. })));
        assert!(Graph::from_graph6(">>graph6<<A_\n").unwrap().has_edge(0, 1));
        assert!(matches!(Graph::empty(63).unwrap().to_graph6(), Err(Error::UnsupportedSize { .. })));
    }

    #[test]
    fn distances_on_small_graphs() {
        assert_eq!(g("C5").distances_from(0).unwrap(), vec![0, 1, 2, 2, 1]);
        assert_eq!(g("K4").distances_from(2).unwrap(), vec![1, 1, 0, 1]);
        assert_eq!(g("P4").distances_from(0).unwrap(), vec![0, 1, 2, 3]);
        assert!(matches!(g("P4").distances_from(4), Err(Error::VertexOutOfRange { vertex: 4, n: 4 })));
        let two_k2 = g("2K2");
        assert_eq!(two_k2.distances_from(0).unwrap()[2], UNREACHABLE);
    }

    #[test]
    fn connectivity() {
        assert!(g("C5").is_connected());
        assert!(!g("2K2").is_connected());
        assert!(g("K1").is_connected());
    }

    #[test]
    fn cliques() {
        assert_eq!(g("diamond").clique_number(), 3);
        assert_eq!(g("C5").clique_number(), 2);
        assert_eq!(g("K4").clique_number(), 4);
        assert_eq!(g("K1").clique_number(), 1);
        assert!(g("K4").has_k4());
        assert!(!g("friendship:2").has_k4());
        assert!(!g("C5").has_k4());
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(Graph::from_edges(3, &[(0, 3)]), Err(Error::VertexOutOfRange { .. })));
        assert!(matches!(Graph::from_edges(3, &[(1, 1)]), Err(Error::SelfLoop(1))));
    }

    #[test]
    fn distance_table_distinguishers() {
        let c5 = g("C5");
        let t = DistanceTable::connected(&c5).unwrap();
        // edge 0-1: vertex 3 is at distance 2 from both
        let d = t.distinguishers(0, 1);
        assert!(d.contains(0) && d.contains(1) && !d.contains(3));
        assert!(DistanceTable::connected(&g("2K2")).is_err());
    }
}
