//! The local vertex division: maximum vertex-disjoint packings of `F1`, `F2`,
//! ..., `F9`, each taken inside what the previous layers left over, with the
//! remaining isolated vertices as `F10`.

use serde::Serialize;

use crate::error::{ContractViolation, Error, Result};
use crate::fragments::{enumerate_placements, classify_set, FragmentClass, Placement};
use crate::graph::{DistanceTable, Graph};
use crate::vertex_set::VertexSet;

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// A maximum set of pairwise vertex-disjoint induced occurrences of `cls` inside `allowed`.
///
/// Exact branch and bound over the placements in lexicographic order. Among all
/// maximum packings the first one met by the depth-first search is returned, so
/// the answer is a pure function of the input.
pub fn max_disjoint_packing(
    g: &Graph,
    cls: FragmentClass,
    allowed: VertexSet,
    node_budget: u64,
) -> Result<Vec<Placement>> {
    let placements = enumerate_placements(g, cls, allowed);
    let masks: Vec<u64> = placements.iter().map(|p| p.vertices().bits()).collect();
    let k = cls.order() as u32;

    let mut greedy = Vec::new();
    let mut used = 0u64;
    for (i, &m) in masks.iter().enumerate() {
        if m & used == 0 {
            greedy.push(i);
            used |= m;
        }
    }
    let coverable = masks.iter().fold(0u64, |a, &m| a | m);
    let ceiling = (coverable.count_ones() / k) as usize;

    let best = if greedy.len() >= ceiling {
        greedy
    } else {
        let mut search = PackingSearch {
            masks: &masks,
            k,
            best: greedy,
            chosen: Vec::new(),
            nodes: 0,
            budget: node_budget,
            ceiling,
        };
        search.descend(0, 0).map_err(|()| Error::PackingBudget { class: cls.to_string(), budget: node_budget })?;
        search.best
    };
    Ok(best.into_iter().map(|i| placements[i]).collect())
}

struct PackingSearch<'a> {
    masks: &'a [u64],
    k: u32,
    best: Vec<usize>,
    chosen: Vec<usize>,
    nodes: u64,
    budget: u64,
    ceiling: usize,
}

impl PackingSearch<'_> {
    fn descend(&mut self, start: usize, used: u64) -> std::result::Result<(), ()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(());
        }
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        if self.best.len() >= self.ceiling {
            return Ok(());
        }
        let (cover, count) = self.masks[start..]
            .iter()
            .filter(|&&m| m & used == 0)
            .fold((0u64, 0usize), |(c, n), &m| (c | m, n + 1));
        let bound = self.chosen.len() + count.min((cover.count_ones() / self.k) as usize);
        if bound <= self.best.len() {
            return Ok(());
        }
        for i in start..self.masks.len() {
            let m = self.masks[i];
            if m & used != 0 {
                continue;
            }
            self.chosen.push(i);
            let r = self.descend(i + 1, used | m);
            self.chosen.pop();
            r?;
            if self.best.len() >= self.ceiling {
                break;
            }
        }
        Ok(())
    }
}

/// The fixed partition of V(G) into ten layers of placements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Division {
    /// `layers[i]` holds the placements of class `F(i+1)`.
    pub layers: Vec<Vec<Placement>>,
    /// `residuals[i]` is the vertex set of the graph in which layer `i` was packed.
    pub residuals: Vec<VertexSet>,
}

impl Division {
    pub fn layer(&self, cls: FragmentClass) -> &[Placement] {
        &self.layers[cls.id() - 1]
    }

    pub fn residual(&self, cls: FragmentClass) -> VertexSet {
        self.residuals[cls.id() - 1]
    }

    pub fn layer_vertices(&self, cls: FragmentClass) -> VertexSet {
        self.layer(cls).iter().fold(VertexSet::EMPTY, |a, p| a | p.vertices())
    }

    /// The class whose layer contains `v`, if any.
    pub fn class_of(&self, v: usize) -> Option<FragmentClass> {
        FragmentClass::ALL.into_iter().find(|&c| self.layer_vertices(c).contains(v))
    }

    /// One JSON object per placement, in layer order.
    pub fn trace_lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, layer) in self.layers.iter().enumerate() {
            for p in layer {
                let line = serde_json::json!({
                    "layer": i + 1,
                    "class": p.class,
                    "vertices": p.roles(),
                    "roles": p.role_map(),
                });
                out.push(line.to_string());
            }
        }
        out
    }
}

/// Checks the constructor's input contract.
pub fn check_contract(g: &Graph) -> Result<()> {
    if !g.is_connected() {
        return Err(Error::Contract(ContractViolation::Disconnected));
    }
    if g.n() < 4 {
        return Err(Error::Contract(ContractViolation::TooFewVertices));
    }
    if g.has_k4() {
        return Err(Error::Contract(ContractViolation::ContainsK4));
    }
    Ok(())
}

/// Builds the local vertex division of a connected K4-free graph with at least four vertices.
pub fn local_vertex_division(g: &Graph, node_budget: u64) -> Result<Division> {
    check_contract(g)?;
    divide(g, node_budget)
}

pub(crate) fn divide(g: &Graph, node_budget: u64) -> Result<Division> {
    let mut layers = Vec::with_capacity(10);
    let mut residuals = Vec::with_capacity(10);
    let mut residual = g.vertices();
    for cls in &FragmentClass::ALL[..9] {
        residuals.push(residual);
        let layer = max_disjoint_packing(g, *cls, residual, node_budget)?;
        for p in &layer {
            residual = residual - p.vertices();
        }
        layers.push(layer);
    }
    residuals.push(residual);
    layers.push(residual.iter().map(|v| Placement::new(FragmentClass::F10, &[v])).collect());
    Ok(Division { layers, residuals })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactCheck {
    pub name: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// Pass/fail for each structural property of a division.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactReport {
    pub checks: Vec<FactCheck>,
}

/// The nine assertions the construction relies on, in report order.
pub const FACT_NAMES: [&str; 9] =
    ["fact-1", "fact-2", "fact-3", "fact-4", "fact-5", "statement-I", "statement-II", "statement-III", "statement-IV"];

/// Well-formedness checks on the division itself, reported ahead of the facts.
pub const STRUCTURE_NAMES: [&str; 4] = ["partition", "induced", "maximal", "remainder-isolated"];

impl FactReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&FactCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &FactCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn check(name: &'static str, witness: Option<String>) -> FactCheck {
    FactCheck { name, passed: witness.is_none(), witness }
}

/// Evaluates the partition invariants and the nine structural facts on `d`.
pub fn check_division_facts(g: &Graph, d: &Division) -> FactReport {
    use FragmentClass::*;
    let mut checks = Vec::with_capacity(13);

    // partition
    let mut seen = VertexSet::EMPTY;
    let mut witness = None;
    'outer: for layer in &d.layers {
        for p in layer {
            for v in p.roles() {
                if seen.contains(*v) {
                    witness = Some(format!("vertex {v} appears in more than one placement"));
                    break 'outer;
                }
                seen.insert(*v);
            }
        }
    }
    if witness.is_none() {
        if let Some(v) = (g.vertices() - seen).first() {
            witness = Some(format!("vertex {v} is in no placement"));
        } else if let Some(v) = (seen - g.vertices()).first() {
            witness = Some(format!("vertex {v} is not a vertex of the graph"));
        }
    }
    checks.push(check("partition", witness));

    let layers_ok = d.layers.len() == 10 && d.residuals.len() == 10;
    let mut induced = (!layers_ok).then(|| "division must have ten layers and residuals".to_string());
    let mut maximal = None;
    if layers_ok {
        for cls in FragmentClass::ALL {
            let residual = d.residual(cls);
            for p in d.layer(cls) {
                let ok = p.vertices().is_subset(residual)
                    && p.class == cls
                    && classify_set(g, p.vertices()).is_some_and(|q| q.class == cls);
                if !ok && induced.is_none() {
                    induced = Some(format!("{p:?} is not an induced {cls} inside its residual {residual}"));
                }
            }
            if cls != F10 {
                let rest = residual - d.layer_vertices(cls);
                if let Some(extra) = enumerate_placements(g, cls, rest).first() {
                    maximal.get_or_insert_with(|| format!("{extra:?} could be added to layer {cls}"));
                }
            }
        }
    }
    checks.push(check("induced", induced));
    checks.push(check("maximal", maximal));
    if !layers_ok {
        checks.push(check("remainder-isolated", Some("malformed division".into())));
        for name in FACT_NAMES {
            checks.push(check(name, Some("malformed division".into())));
        }
        return FactReport { checks };
    }

    let rem = d.residual(F10);
    let isolated = rem.iter().find(|&v| !(g.neighbors(v) & rem).is_empty());
    checks.push(check("remainder-isolated", isolated.map(|v| format!("vertex {v} has a neighbour among the leftover vertices"))));

    let all = g.vertices();

    // fact 1
    let mut w = None;
    for h in d.layer(F1) {
        let [a1, a2, a3, a4] = [h.role(0), h.role(1), h.role(2), h.role(3)];
        for v in all - h.vertices() {
            let nv = g.neighbors(v);
            if (nv.contains(a2) || nv.contains(a4)) && nv.contains(a1) && nv.contains(a3) {
                w.get_or_insert_with(|| format!("vertex {v} is adjacent to a1={a1}, a3={a3} and a degree-2 vertex of {h:?}"));
            }
        }
    }
    checks.push(check("fact-1", w));

    // fact 2
    let mut w = None;
    for h in d.layer(F2) {
        let tri: VertexSet = [h.role(0), h.role(1), h.role(3)].into_iter().collect();
        for v in d.residual(F2) - h.vertices() {
            if (g.neighbors(v) & tri).len() > 1 {
                w.get_or_insert_with(|| format!("vertex {v} sees two of b1, b2, b4 in {h:?}"));
            }
        }
    }
    checks.push(check("fact-2", w));

    // facts 3 and 4
    for (name, cls, forbidden) in [("fact-3", F4, &[3][..]), ("fact-4", F5, &[3, 4][..])] {
        let mut w = None;
        for h in d.layer(cls) {
            for v in d.residual(cls) - h.vertices() {
                let hv = h.vertices().with(v);
                if (g.neighbors(v) & h.vertices()).len() > 2 {
                    w.get_or_insert_with(|| format!("vertex {v} sees three vertices of {h:?}"));
                }
                for &len in forbidden {
                    if has_cycle(g, hv, len) {
                        w.get_or_insert_with(|| format!("{h:?} plus vertex {v} contains a {len}-cycle"));
                    }
                }
            }
        }
        checks.push(check(name, w));
    }

    // fact 5
    let mut w = None;
    for cls in [F6, F7, F8, F9] {
        for h in d.layer(cls) {
            for v in d.residual(cls) - h.vertices() {
                if (g.neighbors(v) & h.vertices()).len() > 1 {
                    w.get_or_insert_with(|| format!("vertex {v} sees two vertices of {h:?}"));
                }
            }
        }
    }
    checks.push(check("fact-5", w));

    let triangles = d.layer(F3);

    // statement I
    let mut w = None;
    for (i, f) in triangles.iter().enumerate() {
        for f2 in &triangles[i + 1..] {
            if g.has_edge_between(f.vertices(), f2.vertices()) {
                w.get_or_insert_with(|| format!("triangles {f:?} and {f2:?} are joined by an edge"));
            }
        }
    }
    checks.push(check("statement-I", w));

    // statement II
    let v3 = d.layer_vertices(F3);
    let later = FragmentClass::ALL[3..].iter().fold(VertexSet::EMPTY, |a, &c| a | d.layer_vertices(c));
    let w = v3.iter().find_map(|u| {
        (g.neighbors(u) & later).first().map(|v| format!("triangle vertex {u} is adjacent to later-layer vertex {v}"))
    });
    checks.push(check("statement-II", w));

    // statement III
    let mut w = None;
    if !triangles.is_empty() {
        let dist = DistanceTable::new(g);
        let front = d.layer_vertices(F1) | d.layer_vertices(F2);
        for f in triangles {
            let c = f.roles();
            for v in front {
                for i in 0..3 {
                    if !g.has_edge(v, c[i]) {
                        continue;
                    }
                    let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                    if !dist.distinguishes(v, c[i], c[j]) && !dist.distinguishes(v, c[i], c[k]) {
                        w.get_or_insert_with(|| format!("vertex {v} distinguishes no pair through {} in {f:?}", c[i]));
                    }
                }
            }
        }
    }
    checks.push(check("statement-III", w));

    // statement IV
    let mut w = None;
    for h in d.layer(F2) {
        let attach: Vec<VertexSet> = triangles.iter().map(|f| h.vertices() & g.neighborhood_of(f.vertices())).collect();
        for i in 0..attach.len() {
            for j in i + 1..attach.len() {
                if !attach[i].is_empty() && !attach[j].is_empty() && (attach[i] | attach[j]).len() != 1 {
                    w.get_or_insert_with(|| {
                        format!("{h:?} meets {:?} at {} and {:?} at {}", triangles[i], attach[i], triangles[j], attach[j])
                    });
                }
            }
        }
    }
    checks.push(check("statement-IV", w));

    FactReport { checks }
}

/// Whether `g[vs]` contains a cycle of length 3 or 4 as a (not necessarily induced) subgraph.
fn has_cycle(g: &Graph, vs: VertexSet, len: usize) -> bool {
    match len {
        3 => vs.iter().any(|v| g.has_edge_within(g.neighbors(v) & vs)),
        4 => vs.iter().any(|a| {
            vs.iter().filter(|&c| c > a).any(|c| (g.neighbors(a) & g.neighbors(c) & vs).len() >= 2)
        }),
        _ => unimplemented!("only 3- and 4-cycles are checked"),
    }
}
