//! Certificate construction for the bound `dim_l(G) <= floor(n/2)` on connected
//! K4-free graphs.
//!
//! The constructor keeps a set `S` of vertices that will *not* be in the local
//! resolving set; the certificate is `W = V(G) - S`. It starts from a per-fragment
//! choice over the local vertex division, which already works when the division
//! has no triangle layer, then runs fifteen fixed-point processes that pull
//! vertices of the `F3` triangles into `S` while trading away vertices of the
//! diamonds, paws and later fragments adjacent to them.
//!
//! Every step is logged in a trace. The result is always re-verified against
//! the distance oracle; if an edge is left unresolved, one endpoint is moved
//! into `W` and the certificate records that a repair was needed.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fragments::{FragmentClass, Placement};
use crate::graph::{DistanceTable, Graph};
use crate::oracle::{EdgeDistinguishers, Verdict};
use crate::packing::{check_contract, check_division_facts, divide, Division, FactReport, DEFAULT_NODE_BUDGET};
use crate::vertex_set::{subsets_of_size, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConstructOptions {
    /// Literal reading of the twelfth process (both indices drawn from `Z1`),
    /// and hard errors instead of fallbacks when a step's chosen vertex does not exist.
    pub strict: bool,
    pub node_budget: u64,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        ConstructOptions { strict: false, node_budget: DEFAULT_NODE_BUDGET }
    }
}

/// One logged change to `S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    /// 0 for the initial selection, 1..=15 for the processes, 16 for post-hoc repair.
    pub process: u8,
    pub step: String,
    /// Vertices that left `S` (and so joined `W`).
    pub consumed: Vec<usize>,
    /// Vertices that joined `S`.
    pub produced: Vec<usize>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

/// A leftover triangle paired with the diamond it touches.
///
/// `h[1]` and `h[3]` are the degree-2 vertices of the diamond, `h[1]` adjacent to
/// `f[1]` and not to `f[0]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DiamondPair {
    pub triangle: usize,
    pub diamond: usize,
    pub f: [usize; 3],
    pub h: [usize; 4],
}

/// A leftover triangle paired with the paw it touches.
///
/// `h[1]` is the degree-3 vertex of the paw, `h[2]` its pendant vertex, and
/// `h[1]` is adjacent to `f[1]` but not to `f[0]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PawPair {
    pub triangle: usize,
    pub paw: usize,
    pub f: [usize; 3],
    pub h: [usize; 4],
}

/// Mutable construction state threaded through the processes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProcessState {
    pub s: VertexSet,
    /// Indices (into the `F3` layer) of triangles absorbed by the first three processes, in order.
    pub absorbed: Vec<usize>,
    pub pairs1: Vec<DiamondPair>,
    pub pairs2: Vec<PawPair>,
    pub z1: BTreeSet<usize>,
    pub z2: BTreeSet<usize>,
    /// `F10` vertices not consumed by the fourth and fourteenth processes.
    pub f10_pool: Vec<usize>,
    pub trace: Vec<TraceStep>,
}

impl ProcessState {
    fn new(s: VertexSet, division: &Division) -> Self {
        ProcessState {
            s,
            absorbed: Vec::new(),
            pairs1: Vec::new(),
            pairs2: Vec::new(),
            z1: BTreeSet::new(),
            z2: BTreeSet::new(),
            f10_pool: division.layer(FragmentClass::F10).iter().map(|p| p.role(0)).collect(),
            trace: Vec::new(),
        }
    }

    /// Replaces `S` and logs the difference.
    fn set_s(&mut self, process: u8, step: &str, next: VertexSet, detail: String) {
        self.trace.push(TraceStep {
            process,
            step: step.to_string(),
            consumed: (self.s - next).to_vec(),
            produced: (next - self.s).to_vec(),
            detail,
        });
        self.s = next;
    }

    fn absorb(&mut self, triangles: &[usize]) {
        self.absorbed.extend_from_slice(triangles);
    }

    fn is_absorbed(&self, t: usize) -> bool {
        self.absorbed.contains(&t)
    }
}

/// The per-fragment starting choice of `S`.
pub fn initial_selection(g: &Graph, d: &Division) -> VertexSet {
    use FragmentClass::*;
    let mut s = VertexSet::EMPTY;
    for cls in FragmentClass::ALL {
        for p in d.layer(cls) {
            match cls {
                F1 | F2 => {
                    s.insert(p.role(1));
                    s.insert(p.role(3));
                }
                F3 => {}
                F4 | F5 | F6 | F7 => {
                    let pair = subsets_of_size(p.vertices(), 2)
                        .find(|pair| !g.has_edge_within(*pair))
                        .expect("F4..F7 always contain a non-adjacent pair");
                    s = s | pair;
                }
                F8 => {
                    s.insert(p.role(0));
                    s.insert(p.role(2));
                }
                F9 | F10 => s.insert(p.role(0)),
            }
        }
    }
    s
}

/// Unabsorbed triangles with at least one edge to `fragment`.
pub fn eta(g: &Graph, d: &Division, fragment: VertexSet, absorbed: &[usize]) -> Vec<usize> {
    d.layer(FragmentClass::F3)
        .iter()
        .enumerate()
        .filter(|(i, f)| !absorbed.contains(i) && g.has_edge_between(fragment, f.vertices()))
        .map(|(i, _)| i)
        .collect()
}

/// For each triangle, the lexicographically first edge whose endpoints some vertex of `u` distinguishes.
///
/// Triangles are independent, so taking one edge per triangle wherever possible is a largest such set.
pub fn distinguished_pairs(dist: &DistanceTable, u: VertexSet, triangles: &[Placement]) -> Vec<(usize, usize)> {
    triangles
        .iter()
        .filter_map(|f| {
            let c = f.vertices().to_vec();
            [(c[0], c[1]), (c[0], c[2]), (c[1], c[2])]
                .into_iter()
                .find(|&(x, y)| u.iter().any(|w| dist.distinguishes(w, x, y)))
        })
        .collect()
}

fn pair_vertices(pairs: &[(usize, usize)]) -> VertexSet {
    pairs.iter().flat_map(|&(x, y)| [x, y]).collect()
}

fn set(vs: &[usize]) -> VertexSet {
    vs.iter().collect()
}

/// Maximum independent subset of a small vertex set, lexicographically first among the maximum ones.
fn max_independent_subset(g: &Graph, x: VertexSet) -> VertexSet {
    (0..=x.len())
        .rev()
        .find_map(|k| subsets_of_size(x, k).find(|s| !g.has_edge_within(*s)))
        .unwrap_or(VertexSet::EMPTY)
}

struct Run<'a> {
    g: &'a Graph,
    d: &'a Division,
    dist: &'a DistanceTable,
    strict: bool,
    st: ProcessState,
}

impl Run<'_> {
    fn triangles(&self) -> &[Placement] {
        self.d.layer(FragmentClass::F3)
    }

    fn triangle_set(&self, idx: &[usize]) -> Vec<Placement> {
        idx.iter().map(|&i| self.triangles()[i]).collect()
    }

    fn union_of(&self, idx: &[usize]) -> VertexSet {
        idx.iter().fold(VertexSet::EMPTY, |a, &i| a | self.triangles()[i].vertices())
    }

    fn invariant(&self, message: String) -> Error {
        Error::ConstructionInvariant { message, trace: self.st.trace.clone() }
    }

    /// The fragment of `layer` with the most adjacent unabsorbed triangles (first on ties).
    fn busiest(&self, cls: FragmentClass) -> Option<(Placement, Vec<usize>)> {
        let mut best: Option<(Placement, Vec<usize>)> = None;
        for h in self.d.layer(cls) {
            let e = eta(self.g, self.d, h.vertices(), &self.st.absorbed);
            if best.as_ref().is_none_or(|(_, b)| e.len() > b.len()) {
                best = Some((*h, e));
            }
        }
        best
    }

    fn process1(&mut self) -> Result<()> {
        while let Some((h, e)) = self.busiest(FragmentClass::F1) {
            if e.len() <= 1 {
                break;
            }
            let hv = h.vertices();
            let tris = self.triangle_set(&e);
            if e.len() >= 4 {
                let d = distinguished_pairs(self.dist, hv, &tris);
                let next = (self.st.s - hv) | pair_vertices(&d);
                self.st.set_s(1, "diamond-spread", next, format!("{h:?} meets {} triangles", e.len()));
            } else {
                let keeper = hv.iter().find(|&x| eta(self.g, self.d, hv.without(x), &self.st.absorbed) == e);
                match keeper {
                    Some(x) => {
                        let d = distinguished_pairs(self.dist, hv.without(x), &tris);
                        let next = (self.st.s - hv) | pair_vertices(&d) | VertexSet::singleton(x);
                        self.st.set_s(1, "diamond-keep", next, format!("{h:?} keeps {x}"));
                    }
                    None if self.strict => {
                        return Err(self.invariant(format!("no vertex of {h:?} can be dropped without losing a triangle")));
                    }
                    None => {
                        let d = distinguished_pairs(self.dist, hv, &tris);
                        let next = (self.st.s - hv) | pair_vertices(&d);
                        self.st.set_s(1, "diamond-keep", next, format!("{h:?}: no vertex preserves its triangles; whole fragment used"));
                    }
                }
            }
            self.st.absorb(&e);
        }
        Ok(())
    }

    fn process2(&mut self) -> Result<()> {
        while let Some((h, e)) = self.busiest(FragmentClass::F2) {
            if e.len() <= 1 {
                break;
            }
            let hv = h.vertices();
            let tris = self.triangle_set(&e);
            let touched = self.union_of(&e);
            let keeper = hv
                .iter()
                .find(|&x| self.g.induced_degree(x, hv) >= 2 && self.g.neighbors(x).is_disjoint(touched));
            match keeper {
                Some(x) => {
                    let d = distinguished_pairs(self.dist, hv.without(x), &tris);
                    let next = (self.st.s - hv) | VertexSet::singleton(x) | pair_vertices(&d);
                    self.st.set_s(2, "paw-keep", next, format!("{h:?} keeps {x}"));
                }
                None if self.strict => {
                    return Err(self.invariant(format!("{h:?} has no degree-2 vertex away from its triangles")));
                }
                None => {
                    let d = distinguished_pairs(self.dist, hv, &tris);
                    let next = (self.st.s - hv) | pair_vertices(&d);
                    self.st.set_s(2, "paw-keep", next, format!("{h:?}: no free vertex of degree >= 2; whole fragment used"));
                }
            }
            self.st.absorb(&e);
        }
        Ok(())
    }

    fn process3(&mut self) {
        for t in 0..self.triangles().len() {
            if self.st.is_absorbed(t) {
                continue;
            }
            let f = self.triangles()[t];
            let fv = f.vertices();
            let g = self.g;
            let touches = |x: usize| !g.neighbors(x).is_disjoint(fv);

            let hub = self
                .d
                .layer(FragmentClass::F1)
                .iter()
                .flat_map(|h| [h.role(0), h.role(2)])
                .filter(|&x| touches(x))
                .min();
            if let Some(x) = hub {
                let d = distinguished_pairs(self.dist, VertexSet::singleton(x), &[f]);
                let next = self.st.s | pair_vertices(&d);
                self.st.set_s(3, "triangle-diamond-hub", next, format!("triangle {fv} via diamond vertex {x}"));
                self.st.absorb(&[t]);
                continue;
            }

            let side = self
                .d
                .layer(FragmentClass::F2)
                .iter()
                .flat_map(|h| {
                    let hv = h.vertices();
                    hv.iter().filter(move |&x| g.induced_degree(x, hv) <= 2).map(move |x| (x, *h))
                })
                .filter(|&(x, _)| touches(x))
                .min_by_key(|&(x, _)| x);
            if let Some((x, h)) = side {
                let hv = h.vertices();
                let centre = h.role(1);
                let other = [h.role(0), h.role(3)].into_iter().filter(|&y| y != x).min().expect("paw has two degree-2 vertices");
                let d = distinguished_pairs(self.dist, VertexSet::singleton(x), &[f]);
                let next = (self.st.s - hv) | set(&[other, centre]) | pair_vertices(&d);
                self.st.set_s(3, "triangle-paw-side", next, format!("triangle {fv} via paw vertex {x}"));
                self.st.absorb(&[t]);
            }
        }
    }

    /// Pairs every remaining triangle with an adjacent diamond or paw and fixes role labels.
    fn pair_up(&mut self) -> Result<()> {
        let g = self.g;
        let mut used1 = BTreeSet::new();
        let mut used2 = BTreeSet::new();
        for t in 0..self.triangles().len() {
            if self.st.is_absorbed(t) {
                continue;
            }
            let f = self.triangles()[t];
            let c = f.roles();
            let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]].map(|p| [c[p[0]], c[p[1]], c[p[2]]]);

            let diamond = self.d.layer(FragmentClass::F1).iter().enumerate().find_map(|(i, h)| {
                if used1.contains(&i) || !g.has_edge_between(h.vertices(), f.vertices()) {
                    return None;
                }
                let (a1, a2, a3, a4) = (h.role(0), h.role(1), h.role(2), h.role(3));
                let mut options = Vec::new();
                for (h1, h3) in [(a1, a3), (a3, a1)] {
                    for (h2, h4) in [(a2, a4), (a4, a2)] {
                        for fp in perms {
                            if !g.has_edge(fp[0], h2) && g.has_edge(fp[1], h2) {
                                options.push(([h1, h2, h3, h4], fp));
                            }
                        }
                    }
                }
                options.into_iter().min().map(|(hh, ff)| DiamondPair { triangle: t, diamond: i, f: ff, h: hh })
            });
            if let Some(pair) = diamond {
                used1.insert(pair.diamond);
                self.st.pairs1.push(pair);
                continue;
            }

            let paw = self.d.layer(FragmentClass::F2).iter().enumerate().find_map(|(i, h)| {
                if used2.contains(&i) || !g.has_edge_between(h.vertices(), f.vertices()) {
                    return None;
                }
                let (b1, b2, b3, b4) = (h.role(0), h.role(1), h.role(2), h.role(3));
                let mut options = Vec::new();
                for (h1, h4) in [(b1, b4), (b4, b1)] {
                    for fp in perms {
                        if !g.has_edge(fp[0], b2) && g.has_edge(fp[1], b2) {
                            options.push(([h1, b2, b3, h4], fp));
                        }
                    }
                }
                options.into_iter().min().map(|(hh, ff)| PawPair { triangle: t, paw: i, f: ff, h: hh })
            });
            match paw {
                Some(pair) => {
                    used2.insert(pair.paw);
                    self.st.pairs2.push(pair);
                }
                None => {
                    return Err(self.invariant(format!("triangle {} has no admissible diamond or paw partner", f.vertices())));
                }
            }
        }
        self.st.z1 = (0..self.st.pairs1.len()).collect();
        self.st.z2 = (0..self.st.pairs2.len()).collect();
        let detail = format!(
            "{} triangle(s) paired with diamonds, {} with paws",
            self.st.pairs1.len(),
            self.st.pairs2.len()
        );
        self.st.trace.push(TraceStep { process: 4, step: "pairing".into(), consumed: vec![], produced: vec![], detail });
        Ok(())
    }

    /// `S - {x, h2} + {h3, f1, f2}` for diamond pair `i`, plus whatever `extra` brings in first.
    fn diamond_trade(&self, i: usize, extra: VertexSet, drop: usize) -> VertexSet {
        let p = &self.st.pairs1[i];
        ((self.st.s | extra) - set(&[drop, p.h[1]])) | set(&[p.h[2], p.f[0], p.f[1]])
    }

    /// First `(i, pool index, vertex)` with `i` in `Z1` and the vertex adjacent to both `h1` and `h4`.
    fn find_hinge(&self, pools: &[VertexSet]) -> Option<(usize, usize, usize)> {
        self.st.z1.iter().find_map(|&i| {
            let p = &self.st.pairs1[i];
            let both = self.g.neighbors(p.h[0]) & self.g.neighbors(p.h[3]);
            pools.iter().enumerate().find_map(|(j, pool)| (*pool & both).first().map(|v| (i, j, v)))
        })
    }

    fn process4(&mut self) {
        loop {
            let pool: Vec<VertexSet> = self.st.f10_pool.iter().map(|&x| VertexSet::singleton(x)).collect();
            let Some((i, j, x)) = self.find_hinge(&pool) else { break };
            let next = self.diamond_trade(i, VertexSet::EMPTY, x);
            self.st.set_s(4, "diamond-isolated", next, format!("diamond pair {i} with isolated vertex {x}"));
            self.st.z1.remove(&i);
            self.st.f10_pool.remove(j);
        }
    }

    /// Processes 5 to 10: trade against vertices of the later fragments.
    fn process_pools(&mut self, process: u8, cls: FragmentClass) {
        let layer = self.d.layer(cls);
        let (mut pools, origin): (Vec<VertexSet>, Vec<Placement>) = match cls {
            FragmentClass::F7 => layer
                .iter()
                .flat_map(|p| [(set(&[p.role(0), p.role(1)]), *p), (set(&[p.role(2), p.role(3)]), *p)])
                .unzip(),
            _ => layer.iter().map(|p| (p.vertices(), *p)).unzip(),
        };
        let step = format!("diamond-{cls}");
        while let Some((i, j, v)) = self.find_hinge(&pools) {
            let extra = match cls {
                FragmentClass::F6 if pools[j].len() > 2 => {
                    let leaves = set(&origin[j].roles()[..3]);
                    pools[j] & leaves
                }
                FragmentClass::F6 | FragmentClass::F7 | FragmentClass::F8 | FragmentClass::F9 => pools[j],
                _ => max_independent_subset(self.g, pools[j].without(v)),
            };
            let next = self.diamond_trade(i, extra, v);
            self.st.set_s(process, &step, next, format!("diamond pair {i} with {cls} vertex {v}"));
            self.st.z1.remove(&i);
            pools[j].remove(v);
        }
    }

    fn process11(&mut self) {
        loop {
            let hit = self.st.z1.iter().find_map(|&i| {
                let p = &self.st.pairs1[i];
                self.st.z2.iter().copied().find(|&j| {
                    let pendant = self.st.pairs2[j].h[2];
                    self.g.has_edge(p.h[0], pendant) && self.g.has_edge(p.h[3], pendant)
                })
                .map(|j| (i, j))
            });
            let Some((i, j)) = hit else { break };
            let (p, q) = (self.st.pairs1[i], self.st.pairs2[j]);
            let next = (self.st.s.without(p.h[1])) | set(&[p.h[2], p.f[0], p.f[1], q.f[0]]);
            self.st.set_s(11, "diamond-paw-pendant", next, format!("diamond pair {i} with paw pair {j} through pendant {}", q.h[2]));
            self.st.z1.remove(&i);
            self.st.z2.remove(&j);
        }
    }

    fn process12(&mut self) {
        loop {
            let candidates: Vec<usize> = if self.strict {
                self.st.z1.iter().copied().filter(|&j| j < self.st.pairs2.len()).collect()
            } else {
                self.st.z2.iter().copied().collect()
            };
            let hit = self.st.z1.iter().find_map(|&i| {
                let p = &self.st.pairs1[i];
                candidates
                    .iter()
                    .copied()
                    .find(|&j| {
                        let h4 = self.st.pairs2[j].h[3];
                        self.g.has_edge(p.h[0], h4) && self.g.has_edge(p.h[3], h4)
                    })
                    .map(|j| (i, j))
            });
            let Some((i, j)) = hit else { break };
            let (p, q) = (self.st.pairs1[i], self.st.pairs2[j]);
            let next = (self.st.s - set(&[p.h[1], q.h[1], q.h[3]])) | set(&[p.h[2], p.f[0], p.f[1], q.h[2], q.f[0], q.f[1]]);
            self.st.set_s(12, "diamond-paw-side", next, format!("diamond pair {i} with paw pair {j} through {}", q.h[3]));
            self.st.z1.remove(&i);
            if self.strict {
                self.st.z1.remove(&j);
            } else {
                self.st.z2.remove(&j);
            }
        }
    }

    fn process13(&mut self) {
        while let Some(i) = self.st.z1.pop_first() {
            let p = self.st.pairs1[i];
            let next = (self.st.s.without(p.h[1])) | set(&[p.h[2], p.f[0], p.f[1]]);
            self.st.set_s(13, "diamond-alone", next, format!("diamond pair {i}"));
        }
    }

    fn process14(&mut self) {
        loop {
            let hit = self.st.z2.iter().find_map(|&i| {
                let q = &self.st.pairs2[i];
                self.st
                    .f10_pool
                    .iter()
                    .position(|&x| self.g.has_edge(x, q.h[1]) && self.g.has_edge(x, q.h[2]))
                    .map(|j| (i, j))
            });
            let Some((i, j)) = hit else { break };
            let q = self.st.pairs2[i];
            let x = self.st.f10_pool.remove(j);
            let next = (self.st.s - set(&[x, q.h[1]])) | set(&[q.h[2], q.f[0], q.f[1]]);
            self.st.set_s(14, "paw-isolated", next, format!("paw pair {i} with isolated vertex {x}"));
            self.st.z2.remove(&i);
        }
    }

    fn process15(&mut self) {
        while let Some(i) = self.st.z2.pop_first() {
            let q = self.st.pairs2[i];
            let next = (self.st.s.without(q.h[1])) | set(&[q.h[2], q.f[0], q.f[1]]);
            self.st.set_s(15, "paw-alone", next, format!("paw pair {i}"));
        }
    }
}

/// Runs the fifteen processes from the initial selection `s0`.
pub fn run_processes(g: &Graph, d: &Division, s0: VertexSet, options: &ConstructOptions) -> Result<ProcessState> {
    use FragmentClass::*;
    let dist = DistanceTable::connected(g)?;
    let mut run = Run { g, d, dist: &dist, strict: options.strict, st: ProcessState::new(s0, d) };
    if d.layer(F3).is_empty() {
        return Ok(run.st);
    }
    run.process1()?;
    run.process2()?;
    run.process3();
    run.pair_up()?;
    run.process4();
    for (process, cls) in [(5, F9), (6, F8), (7, F7), (8, F6), (9, F5), (10, F4)] {
        run.process_pools(process, cls);
    }
    run.process11();
    run.process12();
    run.process13();
    run.process14();
    run.process15();
    Ok(run.st)
}

/// The verified output: `W`, its verdicts, a witness for every edge outside `W`, and the trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub n: usize,
    pub omega: usize,
    #[serde(rename = "W")]
    pub w: VertexSet,
    pub bound: usize,
    pub bound_ok: bool,
    pub resolving_ok: bool,
    pub repair_performed: bool,
    /// `"u-v"` for each edge with both ends outside `W`, mapped to the smallest distinguishing vertex of `W`.
    pub witness: BTreeMap<String, usize>,
    pub trace: Vec<TraceStep>,
}

impl Certificate {
    /// True when the bound holds without any repair.
    pub fn is_clean(&self) -> bool {
        self.bound_ok && self.resolving_ok && !self.repair_performed
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serialises")
    }
}

/// Everything produced on the way to a certificate.
#[derive(Clone, Debug)]
pub struct Construction {
    pub division: Division,
    pub facts: FactReport,
    pub initial: VertexSet,
    pub state: ProcessState,
    pub certificate: Certificate,
}

pub fn construct_certificate(g: &Graph, options: &ConstructOptions) -> Result<Certificate> {
    construct(g, options).map(|c| c.certificate)
}

/// Builds the division, runs the processes and verifies (and if needed repairs) the result.
pub fn construct(g: &Graph, options: &ConstructOptions) -> Result<Construction> {
    check_contract(g)?;
    let division = divide(g, options.node_budget)?;
    let facts = check_division_facts(g, &division);
    if !facts.all_passed() {
        let failed: Vec<String> =
            facts.failures().map(|c| format!("{}: {}", c.name, c.witness.as_deref().unwrap_or(""))).collect();
        return Err(Error::ConstructionInvariant { message: format!("division facts failed: {}", failed.join("; ")), trace: vec![] });
    }
    let initial = initial_selection(g, &division);
    let state = run_processes(g, &division, initial, options)?;

    let mut trace = Vec::with_capacity(state.trace.len() + 1);
    trace.push(TraceStep {
        process: 0,
        step: "initial".into(),
        consumed: vec![],
        produced: initial.to_vec(),
        detail: String::new(),
    });
    trace.extend(state.trace.iter().cloned());

    let checker = EdgeDistinguishers::new(g)?;
    let mut s = state.s;
    let mut repair_performed = false;
    while let Verdict::Fails { u, v } = checker.verdict(g.vertices() - s) {
        s.remove(u);
        repair_performed = true;
        trace.push(TraceStep {
            process: 16,
            step: "repair".into(),
            consumed: vec![u],
            produced: vec![],
            detail: format!("edge {u}-{v} was not distinguished"),
        });
    }
    let w = g.vertices() - s;
    let witness = checker
        .witnesses(w)
        .into_iter()
        .map(|((u, v), by)| (format!("{u}-{v}"), by.expect("verified set distinguishes every edge")))
        .collect();
    let bound = g.n() / 2;
    let certificate = Certificate {
        n: g.n(),
        omega: g.clique_number(),
        w,
        bound,
        bound_ok: w.len() <= bound,
        resolving_ok: true,
        repair_performed,
        witness,
        trace,
    };
    Ok(Construction { division, facts, initial, state, certificate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{friendship_graph, named_graph};
    use crate::oracle::{is_local_resolving, local_metric_dimension};
    use crate::packing::local_vertex_division;

    fn opts() -> ConstructOptions {
        ConstructOptions::default()
    }

    /// Diamond 0..3 (a1=0, a2=1, a3=2, a4=3) with triangle 4,5,6 hanging off a2 through 4.
    fn diamond_with_triangle() -> Graph {
        Graph::from_edges(7, &[(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (4, 5), (5, 6), (4, 6), (1, 4)]).unwrap()
    }

    #[test]
    fn initial_selection_on_diamond() {
        let g = named_graph("diamond").unwrap();
        let d = local_vertex_division(&g, DEFAULT_NODE_BUDGET).unwrap();
        let s = initial_selection(&g, &d);
        assert_eq!(s.to_vec(), vec![1, 3]);
        assert!(is_local_resolving(&g, g.vertices() - s).unwrap().is_ok());
    }

    #[test]
    fn initial_selection_on_c4_takes_a_diagonal() {
        let g = named_graph("C4").unwrap();
        let d = local_vertex_division(&g, DEFAULT_NODE_BUDGET).unwrap();
        let s = initial_selection(&g, &d);
        assert_eq!(s.to_vec(), vec![0, 2]);
    }

    #[test]
    fn initial_selection_p3_endpoints() {
        // P3 survives as an F8 placement next to a C4
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5), (5, 6)]).unwrap();
        let d = local_vertex_division(&g, DEFAULT_NODE_BUDGET).unwrap();
        let p3 = d.layer(FragmentClass::F8);
        let s = initial_selection(&g, &d);
        for p in p3 {
            assert!(s.contains(p.role(0)) && s.contains(p.role(2)) && !s.contains(p.role(1)));
        }
    }

    #[test]
    fn eta_filters_absorbed() {
        // diamond 0..3; triangles {4,5,6} via 1-4 and {7,8,9} via 3-7
        let g = Graph::from_edges(
            10,
            &[(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (4, 5), (5, 6), (4, 6), (7, 8), (8, 9), (7, 9), (1, 4), (3, 7)],
        )
        .unwrap();
        let d = local_vertex_division(&g, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(d.layer(FragmentClass::F3).len(), 2);
        let h = d.layer(FragmentClass::F1)[0].vertices();
        assert_eq!(eta(&g, &d, h, &[]), vec![0, 1]);
        assert_eq!(eta(&g, &d, h, &[0, 1]), Vec::<usize>::new());
        assert!(eta(&g, &d, VertexSet::singleton(5), &[]).len() == 1);
    }

    #[test]
    fn distinguished_pairs_examples() {
        // u=0 adjacent to 1 and 2 of triangle {1,2,3}
        let g = Graph::from_edges(5, &[(0, 1), (0, 2), (1, 2), (2, 3), (1, 3), (3, 4)]).unwrap();
        let dist = DistanceTable::connected(&g).unwrap();
        let tri = crate::fragments::classify_induced(&g, &[1, 2, 3]).unwrap().unwrap();
        assert_eq!(distinguished_pairs(&dist, VertexSet::singleton(0), &[tri]), vec![(1, 3)]);
        assert!(distinguished_pairs(&dist, VertexSet::singleton(0), &[]).is_empty());
        // 4 sees only 3, so both (1,3) and (2,3) qualify and the first is chosen
        assert_eq!(distinguished_pairs(&dist, VertexSet::singleton(4), &[tri]), vec![(1, 3)]);
    }

    #[test]
    fn no_triangles_means_no_processes() {
        let g = named_graph("C5").unwrap();
        let d = local_vertex_division(&g, DEFAULT_NODE_BUDGET).unwrap();
        let s0 = initial_selection(&g, &d);
        let st = run_processes(&g, &d, s0, &opts()).unwrap();
        assert_eq!(st.s, s0);
        assert!(st.trace.is_empty());
    }

    #[test]
    fn diamond_and_triangle_uses_pairing() {
        let g = diamond_with_triangle();
        let c = construct(&g, &opts()).unwrap();
        assert_eq!(c.division.layer(FragmentClass::F3).len(), 1);
        assert_eq!(c.state.pairs1.len(), 1);
        let p = c.state.pairs1[0];
        assert_eq!(p.h, [0, 1, 2, 3]);
        assert_eq!(p.f, [5, 4, 6]);
        assert!(c.certificate.is_clean());
        assert_eq!(c.certificate.w.to_vec(), vec![0, 1, 6]);
        assert!(c.state.trace.iter().any(|t| t.step == "diamond-alone"));
    }

    /// Diamond 0..3 with triangle {4,5,6} on a2, paw 7..10 (b2 = 8, pendant 9) with triangle {11,12,13} on b2.
    fn diamond_and_paw_pairs(extra: &[(usize, usize)]) -> Graph {
        let mut e = vec![
            (0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (4, 5), (5, 6), (4, 6), (1, 5),
            (7, 8), (8, 10), (7, 10), (8, 9), (11, 12), (12, 13), (11, 13), (8, 11),
        ];
        e.extend_from_slice(extra);
        Graph::from_edges(14, &e).unwrap()
    }

    fn steps(c: &Construction) -> Vec<&str> {
        c.certificate.trace.iter().map(|t| t.step.as_str()).collect()
    }

    #[test]
    fn pendant_shared_by_diamond_and_paw() {
        let g = diamond_and_paw_pairs(&[(9, 0), (9, 3)]);
        for strict in [false, true] {
            let c = construct(&g, &ConstructOptions { strict, ..opts() }).unwrap();
            assert_eq!(steps(&c), ["initial", "pairing", "diamond-paw-pendant"]);
            assert_eq!(c.certificate.w.to_vec(), vec![0, 1, 6, 7, 9, 11, 13]);
            assert!(c.certificate.is_clean());
        }
    }

    #[test]
    fn paw_side_vertex_shared_by_diamond() {
        let g = diamond_and_paw_pairs(&[(10, 0), (10, 3)]);
        let c = construct(&g, &opts()).unwrap();
        assert_eq!(steps(&c), ["initial", "pairing", "diamond-paw-side"]);
        assert_eq!(c.certificate.w.to_vec(), vec![0, 1, 6, 7, 8, 10, 13]);
        assert!(c.certificate.is_clean());
        // the literal reading draws the paw index from Z1, so Z2 still reaches the last process
        let c = construct(&g, &ConstructOptions { strict: true, ..opts() }).unwrap();
        assert_eq!(steps(&c), ["initial", "pairing", "diamond-paw-side", "paw-alone"]);
        assert!(c.certificate.is_clean());
    }

    #[test]
    fn isolated_vertex_feeds_a_paw_pair() {
        // found by random search
        let g = Graph::from_graph6("G\\W@GK").unwrap();
        let c = construct(&g, &opts()).unwrap();
        assert!(steps(&c).contains(&"paw-isolated"));
        assert!(c.certificate.is_clean());
    }

    #[test]
    fn trace_replays_to_final_set() {
        for g in [diamond_with_triangle(), diamond_and_paw_pairs(&[(9, 0), (9, 3)]), friendship_graph(5).unwrap()] {
            let c = construct(&g, &opts()).unwrap();
            let mut s = VertexSet::EMPTY;
            for t in &c.certificate.trace {
                assert!(t.consumed.iter().all(|&v| s.contains(v)), "{t:?}");
                assert!(t.produced.iter().all(|&v| !s.contains(v)), "{t:?}");
                s = (s - set(&t.consumed)) | set(&t.produced);
            }
            assert_eq!(g.vertices() - s, c.certificate.w);
        }
    }

    #[test]
    fn friendship_graphs_are_tight() {
        for k in 2..=4 {
            let g = friendship_graph(k).unwrap();
            let cert = construct_certificate(&g, &opts()).unwrap();
            assert!(cert.is_clean(), "k={k}");
            assert_eq!(cert.w.len(), k);
            assert_eq!(local_metric_dimension(&g, 16).unwrap().0, k);
        }
    }

    #[test]
    fn contract_errors() {
        for (name, want) in [("K4", "contains K4"), ("P3", "fewer than 4"), ("2K2", "disconnected")] {
            let err = construct_certificate(&named_graph(name).unwrap(), &opts()).unwrap_err();
            assert!(err.to_string().contains(want), "{name}: {err}");
        }
    }

    #[test]
    fn certificate_json_fields() {
        let g = named_graph("diamond").unwrap();
        let cert = construct_certificate(&g, &opts()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&cert.to_json()).unwrap();
        for key in ["n", "omega", "W", "bound", "bound_ok", "repair_performed", "witness", "trace"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["W"], serde_json::json!([0, 2]));
        assert_eq!(v["bound"], 2);
        assert_eq!(v["witness"]["1-3"], serde_json::Value::Null);
        assert_eq!(v["trace"][0]["step"], "initial");
    }

    #[test]
    fn max_independent_subset_small() {
        let g = named_graph("P4").unwrap();
        assert_eq!(max_independent_subset(&g, set(&[1, 2, 3])).to_vec(), vec![1, 3]);
        assert_eq!(max_independent_subset(&g, set(&[0, 1])).to_vec(), vec![0]);
        assert!(max_independent_subset(&g, VertexSet::EMPTY).is_empty());
    }
}
