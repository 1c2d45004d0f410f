//! Exhaustive ground truth: local resolving set verification, exact local
//! metric dimension by subset search, and the known bounds relating it to the
//! order and the clique number.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{DistanceTable, Graph};
use crate::par::Execution;
use crate::vertex_set::{subsets_of_size, VertexSet};

pub const DEFAULT_EXACT_CAP: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum Verdict {
    Ok,
    /// The lexicographically first edge outside `W` that no vertex of `W` distinguishes.
    Fails { u: usize, v: usize },
}

impl Verdict {
    pub fn is_ok(self) -> bool {
        self == Verdict::Ok
    }
}

/// For every edge, the set of vertices that distinguish its endpoints.
///
/// `W` is a local resolving set exactly when it meets every one of these sets,
/// so the search below is a minimum hitting set problem.
#[derive(Clone, Debug)]
pub struct EdgeDistinguishers {
    edges: Vec<(usize, usize)>,
    sets: Vec<VertexSet>,
    dist: DistanceTable,
}

impl EdgeDistinguishers {
    pub fn new(g: &Graph) -> Result<Self> {
        let dist = DistanceTable::connected(g)?;
        let edges: Vec<_> = g.edges().collect();
        let sets = edges.iter().map(|&(u, v)| dist.distinguishers(u, v)).collect();
        Ok(EdgeDistinguishers { edges, sets, dist })
    }

    pub fn distances(&self) -> &DistanceTable {
        &self.dist
    }

    #[inline]
    pub fn resolves(&self, w: VertexSet) -> bool {
        self.sets.iter().all(|s| !s.is_disjoint(w))
    }

    pub fn verdict(&self, w: VertexSet) -> Verdict {
        match self.sets.iter().position(|s| s.is_disjoint(w)) {
            None => Verdict::Ok,
            Some(i) => Verdict::Fails { u: self.edges[i].0, v: self.edges[i].1 },
        }
    }

    /// Smallest vertex of `w` distinguishing the endpoints of every edge lying outside `w`.
    pub fn witnesses(&self, w: VertexSet) -> Vec<((usize, usize), Option<usize>)> {
        self.edges
            .iter()
            .zip(&self.sets)
            .filter(|((u, v), _)| !w.contains(*u) && !w.contains(*v))
            .map(|(&e, s)| (e, (*s & w).first()))
            .collect()
    }
}

/// Checks whether `w` is a local resolving set of the connected graph `g`.
pub fn is_local_resolving(g: &Graph, w: VertexSet) -> Result<Verdict> {
    if let Some(v) = w.iter().find(|&v| v >= g.n()) {
        return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
    }
    Ok(EdgeDistinguishers::new(g)?.verdict(w))
}

/// Exact local metric dimension and the first minimum witness in
/// (size, lexicographic) order.
pub fn local_metric_dimension(g: &Graph, cap: usize) -> Result<(usize, VertexSet)> {
    local_metric_dimension_with(g, cap, Execution::default())
}

pub fn local_metric_dimension_with(g: &Graph, cap: usize, exec: Execution) -> Result<(usize, VertexSet)> {
    if g.n() > cap {
        return Err(Error::OracleCap { n: g.n(), cap });
    }
    let checker = EdgeDistinguishers::new(g)?;
    let n = g.n();
    for k in 0..=n {
        if k == 0 {
            if checker.resolves(VertexSet::EMPTY) {
                return Ok((0, VertexSet::EMPTY));
            }
            continue;
        }
        // subsets whose smallest vertex is `first` form one contiguous block of the lexicographic order
        let found = exec.find_first_map(0..n, |first| {
            let rest = VertexSet::full(n) - VertexSet::full(first + 1);
            subsets_of_size(rest, k - 1).map(|s| s.with(first)).find(|&w| checker.resolves(w))
        });
        if let Some(w) = found {
            return Ok((k, w));
        }
    }
    unreachable!("the full vertex set is always local resolving")
}

/// One evaluated inequality or identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub name: &'static str,
    pub holds: bool,
    /// Numeric value of the bound, where the check is an inequality.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    /// Distance from the bound in the direction that keeps it satisfied.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slack: Option<f64>,
    pub tight: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub omega: usize,
    pub dim_l: usize,
    pub witness: VertexSet,
    pub checks: Vec<BoundCheck>,
}

impl BoundReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn get(&self, name: &str) -> Option<&BoundCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn ceil_log2(x: usize) -> i64 {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as i64
    }
}

/// Computes `dim_l` exactly and evaluates every applicable known bound.
pub fn check_known_bounds(g: &Graph, cap: usize) -> Result<BoundReport> {
    let (dim, witness) = local_metric_dimension(g, cap)?;
    Ok(bounds_for(g, dim, witness))
}

/// Evaluates the bounds for an already known dimension and witness.
pub fn bounds_for(g: &Graph, dim: usize, witness: VertexSet) -> BoundReport {
    let n = g.n();
    let omega = g.clique_number();
    let (ni, di, wi) = (n as i64, dim as i64, omega as i64);
    let mut checks = Vec::new();

    let gap = n - omega;
    let exponential = if gap >= 62 { i64::MIN } else { ni - (1i64 << gap) };
    let lower = ceil_log2(omega).max(exponential);
    checks.push(BoundCheck {
        name: "lower-clique",
        holds: di >= lower,
        bound: Some(lower as f64),
        slack: Some((di - lower) as f64),
        tight: di == lower,
    });

    if omega >= 1 {
        let bound = (wi - 1) as f64 * ni as f64 / wi as f64;
        checks.push(BoundCheck {
            name: "upper-clique",
            holds: di * wi <= (wi - 1) * ni,
            bound: Some(bound),
            slack: Some(bound - di as f64),
            tight: di * wi == (wi - 1) * ni,
        });
    }

    let complete = g.is_complete();
    checks.push(BoundCheck {
        name: "complete-identity",
        holds: (di == ni - 1) == complete,
        bound: None,
        slack: None,
        tight: complete,
    });

    if n >= 2 {
        let bipartite = g.is_bipartite();
        checks.push(BoundCheck {
            name: "bipartite-identity",
            holds: (dim == 1) == bipartite,
            bound: None,
            slack: None,
            tight: bipartite,
        });
    }

    if omega == 2 && n >= 3 {
        let bound = 2.0 * ni as f64 / 5.0;
        checks.push(BoundCheck {
            name: "triangle-free",
            holds: 5 * di <= 2 * ni,
            bound: Some(bound),
            slack: Some(bound - di as f64),
            tight: 5 * di == 2 * ni,
        });
    }

    if n >= 4 && omega <= 3 {
        let half = (n / 2) as i64;
        checks.push(BoundCheck {
            name: "k4-free-half",
            holds: di <= half,
            bound: Some(half as f64),
            slack: Some((half - di) as f64),
            tight: di == half,
        });
    }

    if omega >= 3 && n > omega {
        let bound = (wi - 2) as f64 * ni as f64 / (wi - 1) as f64;
        checks.push(BoundCheck {
            name: "clique-conjecture",
            holds: di * (wi - 1) <= (wi - 2) * ni,
            bound: Some(bound),
            slack: Some(bound - di as f64),
            tight: di * (wi - 1) == (wi - 2) * ni,
        });
    }

    BoundReport { n, omega, dim_l: dim, witness, checks }
}
