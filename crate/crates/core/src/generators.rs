//! Test graphs: the extremal friendship family, standard named graphs, random
//! K4-free (or triangle-free) graphs, and exhaustive labeled enumeration.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fragments::FragmentClass;
use crate::graph::Graph;
use crate::vertex_set::{VertexSet, MAX_VERTICES};

/// `k` triangles sharing the hub vertex 0; triangle `i` is `{0, 2i-1, 2i}`.
pub fn friendship_graph(k: usize) -> Result<Graph> {
    if k == 0 {
        return Err(Error::InvalidParameter("friendship graph needs k >= 1".into()));
    }
    let n = 2 * k + 1;
    let mut edges = Vec::with_capacity(3 * k);
    for i in 1..=k {
        edges.extend([(0, 2 * i - 1), (0, 2 * i), (2 * i - 1, 2 * i)]);
    }
    Graph::from_edges(n, &edges)
}

/// Random K4-free graph: edges are visited in random order and kept with
/// probability `p` unless they would close a K4; components are then joined by
/// random edges (an edge between components never closes a K4).
///
/// This is an incremental-rejection model, not uniform over K4-free graphs.
pub fn random_k4_free(n: usize, p: f64, seed: u64) -> Result<Graph> {
    random_clique_free(n, p, seed, 4)
}

/// Same model as [`random_k4_free`] with triangles forbidden instead.
pub fn random_triangle_free(n: usize, p: f64, seed: u64) -> Result<Graph> {
    random_clique_free(n, p, seed, 3)
}

fn random_clique_free(n: usize, p: f64, seed: u64, forbidden: usize) -> Result<Graph> {
    if n == 0 || n > MAX_VERTICES {
        return Err(Error::InvalidParameter(format!("n must be in 1..={MAX_VERTICES}, got {n}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("edge probability {p} not in [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = vec![VertexSet::EMPTY; n];
    let closes_clique = |rows: &[VertexSet], u: usize, v: usize| {
        let common = rows[u] & rows[v];
        match forbidden {
            3 => !common.is_empty(),
            _ => common.iter().any(|w| !(rows[w] & common).is_empty()),
        }
    };

    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    pairs.shuffle(&mut rng);
    for (u, v) in pairs {
        if rng.gen_bool(p) && !closes_clique(&rows, u, v) {
            rows[u].insert(v);
            rows[v].insert(u);
        }
    }

    let g = Graph::from_rows(rows.clone());
    let mut components = Vec::new();
    let mut left = g.vertices();
    while let Some(v) = left.first() {
        let c = g.component_of(v);
        components.push(c.to_vec());
        left = left - c;
    }
    for c in components.iter().skip(1) {
        let root = &components[0];
        let u = root[rng.gen_range(0..root.len())];
        let v = c[rng.gen_range(0..c.len())];
        rows[u].insert(v);
        rows[v].insert(u);
    }
    Ok(Graph::from_rows(rows))
}

/// Standard graphs by name: `Kn`, `Cn`, `Pn`, `Ka,b`, `star:k`, `friendship:k`,
/// `diamond`, `paw`, `triangle`, `2K2`, `petersen`, and the catalog classes `F1`..`F10`.
pub fn named_graph(name: &str) -> Result<Graph> {
    let unknown = || Error::UnknownName(name.to_string());
    let num = |s: &str| s.parse::<usize>().map_err(|_| unknown());
    let name = name.trim();

    match name {
        "diamond" => return Ok(FragmentClass::F1.graph()),
        "paw" => return Ok(FragmentClass::F2.graph()),
        "triangle" => return complete(3),
        "2K2" => return Ok(FragmentClass::F7.graph()),
        "petersen" => {
            let mut edges = Vec::new();
            for i in 0..5 {
                edges.extend([(i, (i + 1) % 5), (i, i + 5), (i + 5, (i + 2) % 5 + 5)]);
            }
            return Graph::from_edges(10, &edges);
        }
        _ => {}
    }
    if let Some(k) = name.strip_prefix("friendship:") {
        return friendship_graph(num(k)?);
    }
    if let Some(k) = name.strip_prefix("star:") {
        return complete_bipartite(1, num(k)?);
    }
    if let Some(rest) = name.strip_prefix('F') {
        return FragmentClass::from_id(num(rest)?).map(FragmentClass::graph).ok_or_else(unknown);
    }
    if let Some(rest) = name.strip_prefix('K') {
        return match rest.split_once(',') {
            Some((a, b)) => complete_bipartite(num(a)?, num(b)?),
            None => complete(num(rest)?),
        };
    }
    if let Some(rest) = name.strip_prefix('C') {
        let n = num(rest)?;
        if n < 3 {
            return Err(unknown());
        }
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        return Graph::from_edges(n, &edges);
    }
    if let Some(rest) = name.strip_prefix('P') {
        let n = num(rest)?;
        if n == 0 {
            return Err(unknown());
        }
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        return Graph::from_edges(n, &edges);
    }
    Err(unknown())
}

fn complete(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter("K0 is not a graph here".into()));
    }
    let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    Graph::from_edges(n, &edges)
}

fn complete_bipartite(a: usize, b: usize) -> Result<Graph> {
    if a == 0 || b == 0 {
        return Err(Error::InvalidParameter("complete bipartite parts must be non-empty".into()));
    }
    let edges: Vec<_> = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))).collect();
    Graph::from_edges(a + b, &edges)
}

/// Every labeled graph on `n` vertices, one per subset of the edges of K_n.
///
/// Graph number `m` has edge `k` (in graph6 column order) iff bit `k` of `m` is set.
pub fn labeled_graphs(n: usize) -> impl Iterator<Item = Graph> {
    assert!(n <= 10, "labeled enumeration is limited to n <= 10");
    let pairs: Vec<(usize, usize)> = (1..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    let total = 1u64 << pairs.len();
    (0..total).map(move |mask| labeled_graph(n, &pairs, mask))
}

/// Graph number `mask` in the order of [`labeled_graphs`].
pub fn labeled_graph(n: usize, pairs: &[(usize, usize)], mask: u64) -> Graph {
    let mut rows = vec![VertexSet::EMPTY; n];
    for (k, &(i, j)) in pairs.iter().enumerate() {
        if mask >> k & 1 == 1 {
            rows[i].insert(j);
            rows[j].insert(i);
        }
    }
    Graph::from_rows(rows)
}

/// The vertex pairs of K_n in graph6 column order.
pub fn column_pairs(n: usize) -> Vec<(usize, usize)> {
    (1..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect()
}
