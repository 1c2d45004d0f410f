//! The catalog of small pattern graphs used to divide a K4-free graph, and
//! recognition of their induced occurrences.
//!
//! Classes `F1`..`F9` are the graphs on at most four vertices without isolated
//! vertices, excluding K4; `F10` is a single vertex. Each class has named role
//! slots so that later stages can refer to, say, the two degree-3 vertices of a
//! diamond as `a1` and `a3`.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::vertex_set::{subsets_of_size, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FragmentClass {
    /// Diamond: K4 minus an edge.
    F1,
    /// Paw: triangle with a pendant edge.
    F2,
    /// Triangle.
    F3,
    /// 4-cycle.
    F4,
    /// Path on four vertices.
    F5,
    /// Star K1,3.
    F6,
    /// Two disjoint edges.
    F7,
    /// Path on three vertices.
    F8,
    /// Single edge.
    F9,
    /// Single vertex.
    F10,
}

impl FragmentClass {
    pub const ALL: [FragmentClass; 10] = [
        FragmentClass::F1,
        FragmentClass::F2,
        FragmentClass::F3,
        FragmentClass::F4,
        FragmentClass::F5,
        FragmentClass::F6,
        FragmentClass::F7,
        FragmentClass::F8,
        FragmentClass::F9,
        FragmentClass::F10,
    ];

    /// 1-based catalog index.
    pub fn id(self) -> usize {
        self as usize + 1
    }

    pub fn from_id(id: usize) -> Option<Self> {
        Self::ALL.get(id.wrapping_sub(1)).copied()
    }

    pub fn order(self) -> usize {
        self.slot_names().len()
    }

    pub fn slot_names(self) -> &'static [&'static str] {
        use FragmentClass::*;
        match self {
            F1 => &["a1", "a2", "a3", "a4"],
            F2 => &["b1", "b2", "b3", "b4"],
            F3 => &["c1", "c2", "c3"],
            F4 => &["d1", "d2", "d3", "d4"],
            F5 => &["e1", "e2", "e3", "e4"],
            F6 => &["f1", "f2", "f3", "f4"],
            F7 => &["x1", "x2", "y1", "y2"],
            F8 => &["g1", "g2", "g3"],
            F9 => &["k1", "k2"],
            F10 => &["v"],
        }
    }

    /// Canonical edge list over slot indices, each pair written `(i, j)` with `i < j`.
    pub fn edges(self) -> &'static [(usize, usize)] {
        use FragmentClass::*;
        match self {
            F1 => &[(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)],
            F2 => &[(0, 1), (1, 3), (0, 3), (1, 2)],
            F3 => &[(0, 1), (1, 2), (0, 2)],
            F4 => &[(0, 1), (0, 3), (1, 2), (2, 3)],
            F5 => &[(0, 1), (1, 2), (2, 3)],
            F6 => &[(0, 3), (1, 3), (2, 3)],
            F7 => &[(0, 1), (2, 3)],
            F8 => &[(0, 1), (1, 2)],
            F9 => &[(0, 1)],
            F10 => &[],
        }
    }

    /// The class as a standalone graph whose vertex `i` plays slot `i`.
    pub fn graph(self) -> Graph {
        Graph::from_edges(self.order(), self.edges()).expect("catalog edges are valid")
    }
}

impl fmt::Display for FragmentClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}", self.id())
    }
}

impl Serialize for FragmentClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// An induced occurrence of a catalog class, with `roles[i]` the vertex playing slot `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Placement {
    pub class: FragmentClass,
    roles: [usize; 4],
}

impl Placement {
    pub fn new(class: FragmentClass, roles: &[usize]) -> Self {
        assert_eq!(roles.len(), class.order());
        let mut r = [usize::MAX; 4];
        r[..roles.len()].copy_from_slice(roles);
        Placement { class, roles: r }
    }

    pub fn roles(&self) -> &[usize] {
        &self.roles[..self.class.order()]
    }

    /// Vertex playing slot `i` (0-based).
    #[inline]
    pub fn role(&self, i: usize) -> usize {
        self.roles()[i]
    }

    pub fn vertices(&self) -> VertexSet {
        self.roles().iter().collect()
    }

    pub fn role_map(&self) -> BTreeMap<&'static str, usize> {
        self.class.slot_names().iter().copied().zip(self.roles().iter().copied()).collect()
    }
}

impl fmt::Debug for Placement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.class, self.role_map())
    }
}

impl Serialize for Placement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Placement", 3)?;
        st.serialize_field("class", &self.class)?;
        st.serialize_field("vertices", &self.vertices())?;
        st.serialize_field("roles", &self.role_map())?;
        st.end()
    }
}

/// Classifies the subgraph induced by the listed vertices, if it belongs to the catalog.
pub fn classify_induced(g: &Graph, vs: &[usize]) -> Result<Option<Placement>> {
    if vs.is_empty() || vs.len() > 4 {
        return Err(Error::InvalidParameter(format!("expected 1 to 4 vertices, got {}", vs.len())));
    }
    let mut set = VertexSet::EMPTY;
    for &v in vs {
        g.check_vertex(v)?;
        if set.contains(v) {
            return Err(Error::DuplicateVertex(v));
        }
        set.insert(v);
    }
    Ok(classify_set(g, set))
}

/// Classifies `g[vs]` by (order, edge count, degree sequence) and assigns roles.
pub(crate) fn classify_set(g: &Graph, vs: VertexSet) -> Option<Placement> {
    use FragmentClass::*;
    let order = vs.len();
    let deg = |v: usize| g.induced_degree(v, vs);
    let with_deg = |d: usize| -> Vec<usize> { vs.iter().filter(|&v| deg(v) == d).collect() };
    let edges = g.induced_edge_count(vs);
    match (order, edges) {
        (1, 0) => Some(Placement::new(F10, &[vs.first()?])),
        (2, 1) => Some(Placement::new(F9, &vs.to_vec())),
        (3, 3) => Some(Placement::new(F3, &vs.to_vec())),
        (3, 2) => {
            let ends = with_deg(1);
            let mid = with_deg(2);
            Some(Placement::new(F8, &[ends[0], mid[0], ends[1]]))
        }
        (4, 5) => {
            let hi = with_deg(3);
            let lo = with_deg(2);
            Some(Placement::new(F1, &[hi[0], lo[0], hi[1], lo[1]]))
        }
        (4, 4) => {
            let d2 = with_deg(2);
            if d2.len() == 4 {
                // 4-cycle: start at the smallest vertex, go to its smaller neighbour
                let first = d2[0];
                let nb = (g.neighbors(first) & vs).to_vec();
                let opposite = (vs - g.neighbors(first)).without(first).first()?;
                Some(Placement::new(F4, &[first, nb[0], opposite, nb[1]]))
            } else {
                let centre = with_deg(3);
                let pendant = with_deg(1);
                if centre.len() != 1 || pendant.len() != 1 || d2.len() != 2 {
                    return None;
                }
                Some(Placement::new(F2, &[d2[0], centre[0], pendant[0], d2[1]]))
            }
        }
        (4, 3) => {
            let leaves = with_deg(1);
            match leaves.len() {
                3 => {
                    let centre = with_deg(3);
                    (centre.len() == 1).then(|| Placement::new(F6, &[leaves[0], leaves[1], leaves[2], centre[0]]))
                }
                2 if with_deg(2).len() == 2 => {
                    let start = leaves[0];
                    let mut path = vec![start];
                    let mut prev = usize::MAX;
                    let mut cur = start;
                    while path.len() < 4 {
                        let next = (g.neighbors(cur) & vs).without(prev).first()?;
                        prev = cur;
                        cur = next;
                        path.push(cur);
                    }
                    Some(Placement::new(F5, &path))
                }
                _ => None,
            }
        }
        (4, 2) => {
            if with_deg(1).len() != 4 {
                return None;
            }
            let x1 = vs.first()?;
            let x2 = (g.neighbors(x1) & vs).first()?;
            let rest = vs.without(x1).without(x2).to_vec();
            Some(Placement::new(F7, &[x1, x2, rest[0], rest[1]]))
        }
        _ => None,
    }
}

/// All induced occurrences of `cls` inside `allowed`, ordered lexicographically by vertex set.
pub fn enumerate_placements(g: &Graph, cls: FragmentClass, allowed: VertexSet) -> Vec<Placement> {
    let target_edges = cls.edges().len();
    subsets_of_size(allowed & g.vertices(), cls.order())
        .filter(|&vs| g.induced_edge_count(vs) == target_edges)
        .filter_map(|vs| classify_set(g, vs).filter(|p| p.class == cls))
        .collect()
}
