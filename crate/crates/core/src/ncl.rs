//! Nondeterministic constraint logic (NCL) instances and their reduction to
//! balanced recombination with gadget graphs.
//!
//! Each NCL edge is subdivided by a degree-2 *connector* vertex. Every edge of
//! the subdivided instance (a *link*) becomes two light vertices `l+` and `l-`
//! shared by the gadgets of its endpoints; a link points toward the endpoint
//! whose district holds `l+`. Heavy vertices of weight `w` are a vertex with
//! `w - 1` pendant leaves, so any district holding the vertex holds the leaves.

use std::collections::VecDeque;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, GraphError, Vertex, VertexSet};
use crate::partition::{apply_move, enumerate_pair_moves, validate, Partition, PartitionKey, RecombMove, SlackBound};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexKind {
    And,
    Or,
    /// Degree-2 vertex created by subdivision.
    Connector,
}

impl fmt::Display for VertexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VertexKind::And => "AND",
            VertexKind::Or => "OR",
            VertexKind::Connector => "CONNECTOR",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeColor {
    Red,
    Blue,
}

impl fmt::Display for EdgeColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeColor::Red => "red",
            EdgeColor::Blue => "blue",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NclEdge {
    pub u: usize,
    pub v: usize,
    pub color: EdgeColor,
}

/// An NCL constraint graph. An orientation is one bool per edge: `true`
/// means edge `(u, v)` points toward `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NclInstance {
    pub kinds: Vec<VertexKind>,
    pub edges: Vec<NclEdge>,
}

pub type Orientation = Vec<bool>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NclError {
    #[error("vertex {0} has degree {1}, expected {2}")]
    Degree(usize, usize, usize),
    #[error("vertex {0} ({1}) has the wrong edge colors")]
    Colors(usize, VertexKind),
    #[error("edge {0} has an endpoint out of range")]
    EdgeOutOfRange(usize),
    #[error("edge {0} is a loop")]
    Loop(usize),
    #[error("orientation covers {got} edges, instance has {want}")]
    OrientationLength { got: usize, want: usize },
    #[error("orientation {0} violates the constraint at vertex {1}")]
    Unsatisfied(String, usize),
    #[error("input must be an unsubdivided instance of AND/OR vertices")]
    NotOriginal,
    #[error("gadget of vertex {vertex} ({kind}) is split: {detail}")]
    GadgetSplit { vertex: usize, kind: VertexKind, detail: String },
    #[error("light vertices of link {0} are not shared by its two gadgets")]
    LinkOutsideGadgets(usize),
    #[error("graph error: {0}")]
    Graph(#[from] GraphError),
}

impl NclInstance {
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.u == v || e.v == v).count()
    }

    /// Edge ids incident to `v`, ascending.
    pub fn incident(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.edges[e].u == v || self.edges[e].v == v).collect()
    }

    pub fn count(&self, kind: VertexKind) -> usize {
        self.kinds.iter().filter(|&&k| k == kind).count()
    }

    /// Checks degrees and colors: AND/OR vertices have degree 3 (OR: three
    /// blue; AND: two red, one blue), connectors degree 2.
    pub fn check_structure(&self) -> Result<(), NclError> {
        for (id, e) in self.edges.iter().enumerate() {
            if e.u >= self.kinds.len() || e.v >= self.kinds.len() {
                return Err(NclError::EdgeOutOfRange(id));
            }
            if e.u == e.v {
                return Err(NclError::Loop(id));
            }
        }
        for (v, &kind) in self.kinds.iter().enumerate() {
            let inc = self.incident(v);
            let want = if kind == VertexKind::Connector { 2 } else { 3 };
            if inc.len() != want {
                return Err(NclError::Degree(v, inc.len(), want));
            }
            let blue = inc.iter().filter(|&&e| self.edges[e].color == EdgeColor::Blue).count();
            let ok = match kind {
                VertexKind::Or => blue == 3,
                VertexKind::And => blue == 1,
                VertexKind::Connector => true,
            };
            if !ok {
                return Err(NclError::Colors(v, kind));
            }
        }
        Ok(())
    }

    /// Vertex each edge points to under `o`.
    pub fn head(&self, o: &[bool], e: usize) -> usize {
        if o[e] {
            self.edges[e].v
        } else {
            self.edges[e].u
        }
    }

    /// First vertex whose constraint fails under `o`, if any.
    pub fn violated_vertex(&self, o: &[bool]) -> Result<Option<usize>, NclError> {
        if o.len() != self.edges.len() {
            return Err(NclError::OrientationLength { got: o.len(), want: self.edges.len() });
        }
        let mut blue_in = vec![0usize; self.kinds.len()];
        let mut red_in = vec![0usize; self.kinds.len()];
        for (e, edge) in self.edges.iter().enumerate() {
            let h = self.head(o, e);
            match edge.color {
                EdgeColor::Blue => blue_in[h] += 1,
                EdgeColor::Red => red_in[h] += 1,
            }
        }
        Ok((0..self.kinds.len()).find(|&v| match self.kinds[v] {
            VertexKind::Connector => blue_in[v] + red_in[v] == 0,
            VertexKind::And | VertexKind::Or => blue_in[v] == 0 && red_in[v] < 2,
        }))
    }
}

/// Whether `o` satisfies every vertex constraint: an AND/OR vertex needs an
/// incoming blue edge or two incoming red edges; a connector needs an
/// incoming edge.
pub fn check_orientation(ncl: &NclInstance, o: &[bool]) -> Result<bool, NclError> {
    Ok(ncl.violated_vertex(o)?.is_none())
}

/// Replaces edge `e = (u, w)` by connector `|V| + e` and links
/// `2e = (u, x_e)`, `2e + 1 = (w, x_e)` of the same color.
pub fn subdivide_ncl(ncl: &NclInstance) -> NclInstance {
    let nv = ncl.kinds.len();
    let mut kinds = ncl.kinds.clone();
    kinds.extend(std::iter::repeat(VertexKind::Connector).take(ncl.edges.len()));
    let mut edges = Vec::with_capacity(2 * ncl.edges.len());
    for (e, edge) in ncl.edges.iter().enumerate() {
        let x = nv + e;
        edges.push(NclEdge { u: edge.u, v: x, color: edge.color });
        edges.push(NclEdge { u: edge.v, v: x, color: edge.color });
    }
    NclInstance { kinds, edges }
}

/// The orientation of the subdivided instance following each original edge.
pub fn subdivide_orientation(o: &[bool]) -> Orientation {
    o.iter().flat_map(|&toward_v| [toward_v, !toward_v]).collect()
}

/// Original orientation read from a subdivided one, when every edge's two
/// links agree on a direction.
pub fn collapse_orientation(sub: &[bool]) -> Option<Orientation> {
    sub.chunks(2).map(|pair| (pair[0] != pair[1]).then_some(pair[0])).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Heavy {
    pub role: &'static str,
    pub vertex: Vertex,
    pub weight: usize,
    pub leaves: Vec<Vertex>,
}

impl Heavy {
    pub fn members(&self) -> VertexSet {
        std::iter::once(self.vertex).chain(self.leaves.iter().copied()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gadget {
    /// Vertex of the subdivided instance.
    pub ncl_vertex: usize,
    pub kind: VertexKind,
    /// Incident links in role order (`a`, `b`, `c` or `c`, `d`).
    pub links: Vec<usize>,
    /// Heavy vertices; for OR gadgets the last four are the three primes and `v'`.
    pub heavies: Vec<Heavy>,
}

impl Gadget {
    /// Heavy vertices that always share the gadget's main district.
    pub fn core(&self) -> &[Heavy] {
        &self.heavies[..self.links.len()]
    }
}

/// One line of the reduction map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MapRecord {
    pub kind: String,
    pub ncl_id: usize,
    pub graph_vertices: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionOutput {
    pub graph: Graph,
    pub k: usize,
    pub slack: u64,
    pub alpha: usize,
    pub subdivided: NclInstance,
    pub gadgets: Vec<Gadget>,
    /// `(l+, l-)` per link of the subdivided instance.
    pub lights: Vec<(Vertex, Vertex)>,
    pub pa: Partition,
    pub pb: Partition,
}

impl ReductionOutput {
    /// District size `10α` shared by every district.
    pub fn district_size(&self) -> usize {
        10 * self.alpha
    }

    pub fn map_records(&self) -> Vec<MapRecord> {
        let mut out = Vec::new();
        for (l, &(plus, minus)) in self.lights.iter().enumerate() {
            out.push(MapRecord { kind: "edge".into(), ncl_id: l, graph_vertices: vec![plus, minus] });
        }
        for g in &self.gadgets {
            let all: Vec<Vertex> = g.heavies.iter().flat_map(|h| h.members().into_vec()).collect();
            out.push(MapRecord { kind: "gadget".into(), ncl_id: g.ncl_vertex, graph_vertices: all });
            for h in &g.heavies {
                out.push(MapRecord { kind: format!("heavy:{}", h.role), ncl_id: g.ncl_vertex, graph_vertices: h.members().into_vec() });
            }
        }
        out
    }

    /// District labels of the main district of each gadget and, for OR
    /// gadgets, of the district holding `v'`.
    fn gadget_districts(&self, p: &Partition) -> Result<Vec<(usize, Option<usize>)>, NclError> {
        let n = self.graph.n();
        let labels = p.assignment(n).ok_or_else(|| NclError::GadgetSplit {
            vertex: 0,
            kind: VertexKind::Connector,
            detail: "partition does not cover the graph".into(),
        })?;
        let mut out = Vec::with_capacity(self.gadgets.len());
        for g in &self.gadgets {
            let split = |detail: String| NclError::GadgetSplit { vertex: g.ncl_vertex, kind: g.kind, detail };
            for h in &g.heavies {
                if h.leaves.iter().any(|&x| labels[x] != labels[h.vertex]) {
                    return Err(split(format!("leaves of {} separated from it", h.role)));
                }
            }
            let main = labels[g.core()[0].vertex];
            if g.core().iter().any(|h| labels[h.vertex] != main) {
                return Err(split("core heavy vertices in different districts".into()));
            }
            let extra = if g.kind == VertexKind::Or {
                let prime_district = labels[g.heavies[6].vertex];
                let primes = &g.heavies[3..6];
                let with_main = primes.iter().filter(|h| labels[h.vertex] == main).count();
                let with_prime = primes.iter().filter(|h| labels[h.vertex] == prime_district).count();
                if prime_district == main || with_main != 2 || with_prime != 1 {
                    return Err(split("expected two primes with the core and one with v'".into()));
                }
                Some(prime_district)
            } else {
                None
            };
            out.push((main, extra));
        }
        Ok(out)
    }
}

const OR_PRIME_ROLES: [&str; 3] = ["a'", "b'", "c'"];

/// Builds the gadget graph of `ncl` (an AND/OR instance) with `α = 5 + s`,
/// and the partitions representing orientations `a` and `b`.
pub fn reduce_ncl(ncl: &NclInstance, a: &[bool], b: &[bool], s: u64) -> Result<ReductionOutput, NclError> {
    if ncl.kinds.contains(&VertexKind::Connector) {
        return Err(NclError::NotOriginal);
    }
    ncl.check_structure()?;
    let sub = subdivide_ncl(ncl);
    let (sa, sb) = (subdivide_orientation(a), subdivide_orientation(b));
    for (name, o) in [("A", &sa), ("B", &sb)] {
        if let Some(v) = sub.violated_vertex(o)? {
            return Err(NclError::Unsatisfied(name.into(), v));
        }
    }
    let alpha = 5 + s as usize;
    let links = sub.edges.len();
    let lights: Vec<(Vertex, Vertex)> = (0..links).map(|l| (2 * l, 2 * l + 1)).collect();
    let mut next = 2 * links;
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    let mut heavy = |role: &'static str, weight: usize, edges: &mut Vec<(Vertex, Vertex)>| {
        let vertex = next;
        let leaves: Vec<Vertex> = (vertex + 1..vertex + weight).collect();
        for &x in &leaves {
            edges.push((vertex, x));
        }
        next += weight;
        Heavy { role, vertex, weight, leaves }
    };

    let mut gadgets = Vec::with_capacity(sub.kinds.len());
    for (v, &kind) in sub.kinds.iter().enumerate() {
        let inc = sub.incident(v);
        match kind {
            VertexKind::And => {
                let red: Vec<usize> = inc.iter().copied().filter(|&l| sub.edges[l].color == EdgeColor::Red).collect();
                let blue = inc.iter().copied().find(|&l| sub.edges[l].color == EdgeColor::Blue).expect("checked colors");
                let order = vec![red[0], red[1], blue];
                let pa = heavy("a", alpha, &mut edges);
                let pb = heavy("b", alpha, &mut edges);
                let pc = heavy("c", 8 * alpha - 3, &mut edges);
                let (a, b, c) = (lights[order[0]], lights[order[1]], lights[order[2]]);
                edges.extend([(a.0, pa.vertex), (a.0, pc.vertex), (a.1, pa.vertex)]);
                edges.extend([(b.0, pb.vertex), (b.0, pc.vertex), (b.1, pb.vertex)]);
                edges.extend([(c.0, pa.vertex), (c.0, pb.vertex), (c.0, pc.vertex), (c.1, pc.vertex)]);
                gadgets.push(Gadget { ncl_vertex: v, kind, links: order, heavies: vec![pa, pb, pc] });
            }
            VertexKind::Or => {
                let core = [heavy("a", alpha, &mut edges), heavy("b", alpha, &mut edges), heavy("c", 6 * alpha - 3, &mut edges)];
                let primes: Vec<Heavy> = OR_PRIME_ROLES.iter().map(|&r| heavy(r, alpha, &mut edges)).collect();
                let top = heavy("v'", 9 * alpha, &mut edges);
                for (idx, &l) in inc.iter().enumerate() {
                    let (plus, minus) = lights[l];
                    for h in &core {
                        edges.push((plus, h.vertex));
                    }
                    edges.push((minus, core[idx].vertex));
                    edges.push((core[idx].vertex, primes[idx].vertex));
                    edges.push((primes[idx].vertex, top.vertex));
                }
                edges.extend([(primes[0].vertex, primes[1].vertex), (primes[1].vertex, primes[2].vertex), (primes[0].vertex, primes[2].vertex)]);
                let mut heavies = core.to_vec();
                heavies.extend(primes);
                heavies.push(top);
                gadgets.push(Gadget { ncl_vertex: v, kind, links: inc, heavies });
            }
            VertexKind::Connector => {
                let qc = heavy("c", 5 * alpha - 1, &mut edges);
                let qd = heavy("d", 5 * alpha - 1, &mut edges);
                let (c, d) = (lights[inc[0]], lights[inc[1]]);
                edges.extend([(c.0, qc.vertex), (c.1, qc.vertex), (d.0, qd.vertex), (d.1, qd.vertex)]);
                edges.extend([(c.0, qd.vertex), (d.0, qc.vertex)]);
                gadgets.push(Gadget { ncl_vertex: v, kind, links: inc, heavies: vec![qc, qd] });
            }
        }
    }
    let n = next;
    let graph = Graph::new(n, &edges.iter().map(|&(x, y)| (x.min(y), x.max(y))).collect::<Vec<_>>())?;
    let k = sub.kinds.len() + sub.count(VertexKind::Or);
    let mut out = ReductionOutput {
        graph,
        k,
        slack: s,
        alpha,
        subdivided: sub,
        gadgets,
        lights,
        pa: Partition::from_districts(Vec::new()),
        pb: Partition::from_districts(Vec::new()),
    };
    out.pa = orientation_to_partition(&out, &sa);
    out.pb = orientation_to_partition(&out, &sb);
    for p in [&out.pa, &out.pb] {
        let report = validate(&out.graph, p, out.k, SlackBound::Finite(0));
        if !report.is_ok() {
            return Err(NclError::GadgetSplit {
                vertex: 0,
                kind: VertexKind::Connector,
                detail: format!("constructed partition invalid: {report}"),
            });
        }
    }
    Ok(out)
}

/// The representative partition of a satisfying orientation of the
/// subdivided instance: each gadget's core heavies plus, per link, the light
/// vertex saying whether the link points at this gadget; each OR gadget's
/// `v'` district takes the smallest-id prime.
pub fn orientation_to_partition(r: &ReductionOutput, o: &[bool]) -> Partition {
    let sub = &r.subdivided;
    let mut districts = Vec::with_capacity(r.k);
    let mut tops = Vec::new();
    for g in &r.gadgets {
        let mut d: Vec<Vertex> = g.core().iter().flat_map(|h| h.members().into_vec()).collect();
        for &l in &g.links {
            let (plus, minus) = r.lights[l];
            d.push(if sub.head(o, l) == g.ncl_vertex { plus } else { minus });
        }
        if g.kind == VertexKind::Or {
            let primes = &g.heavies[3..6];
            let chosen = primes.iter().min_by_key(|h| h.vertex).expect("three primes");
            for h in primes.iter().filter(|h| h.vertex != chosen.vertex) {
                d.extend(h.members().iter());
            }
            tops.push(chosen.members().union(&g.heavies[6].members()));
        }
        districts.push(VertexSet::from_vec(d));
    }
    districts.extend(tops);
    Partition::from_districts(districts)
}

/// Reads the subdivided orientation off a partition of gadget shape: a link
/// points at the gadget whose main district holds its `l+` vertex.
pub fn partition_to_orientation(r: &ReductionOutput, p: &Partition) -> Result<Orientation, NclError> {
    let districts = r.gadget_districts(p)?;
    let n = r.graph.n();
    let labels = p.assignment(n).expect("checked by gadget_districts");
    let sub = &r.subdivided;
    let mut o = vec![false; sub.edges.len()];
    for (l, edge) in sub.edges.iter().enumerate() {
        let (plus, minus) = r.lights[l];
        let (du, dv) = (districts[edge.u].0, districts[edge.v].0);
        let (lp, lm) = (labels[plus], labels[minus]);
        o[l] = if lp == dv && lm == du {
            true
        } else if lp == du && lm == dv {
            false
        } else {
            return Err(NclError::LinkOutsideGadgets(l));
        };
    }
    Ok(o)
}

/// Searches for at most `depth` recombinations from `start`, using only the
/// districts in `labels`, reaching a partition that reads back to `target`.
pub fn realize_flip(
    r: &ReductionOutput,
    start: &Partition,
    target: &[bool],
    labels: &[usize],
    depth: usize,
    slack: SlackBound,
) -> Option<Vec<RecombMove>> {
    let mut seen: std::collections::HashSet<PartitionKey> = std::collections::HashSet::from([start.key()]);
    let mut queue = VecDeque::from([(start.clone(), Vec::<RecombMove>::new())]);
    while let Some((p, path)) = queue.pop_front() {
        if partition_to_orientation(r, &p).is_ok_and(|o| o == target) {
            return Some(path);
        }
        if path.len() == depth {
            continue;
        }
        for (x, &i) in labels.iter().enumerate() {
            for &j in &labels[x + 1..] {
                for m in enumerate_pair_moves(&r.graph, &p, i.min(j), i.max(j), slack) {
                    let next = apply_move(&r.graph, &p, &m, slack).expect("enumerated moves apply");
                    if seen.insert(next.key()) {
                        let mut longer = path.clone();
                        longer.push(m);
                        queue.push_back((next, longer));
                    }
                }
            }
        }
    }
    None
}

/// District labels touched by reversing link `l`: both endpoint gadgets'
/// main districts and the `v'` district of an OR endpoint.
pub fn flip_districts(r: &ReductionOutput, p: &Partition, l: usize) -> Result<Vec<usize>, NclError> {
    let districts = r.gadget_districts(p)?;
    let edge = r.subdivided.edges[l];
    let mut out = Vec::new();
    for v in [edge.u, edge.v] {
        let (main, extra) = districts[v];
        out.push(main);
        out.extend(extra);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// District labels touched by reversing original edge `e`, which flips both
/// of its links: the gadgets of both endpoints and of its connector.
pub fn edge_flip_districts(r: &ReductionOutput, p: &Partition, e: usize) -> Result<Vec<usize>, NclError> {
    let mut out = flip_districts(r, p, 2 * e)?;
    out.extend(flip_districts(r, p, 2 * e + 1)?);
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// The complete graph on four OR vertices with all edges blue, and two
/// satisfying orientations (the second reverses every edge of the first).
pub fn k4_all_blue() -> (NclInstance, Orientation, Orientation) {
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let edges = pairs.iter().map(|&(u, v)| NclEdge { u, v, color: EdgeColor::Blue }).collect();
    let ncl = NclInstance { kinds: vec![VertexKind::Or; 4], edges };
    // 0->1, 0->2, 3->0, 1->2, 1->3, 2->3
    let a = vec![true, true, false, true, true, true];
    let b = a.iter().map(|&x| !x).collect();
    (ncl, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Triangular prism: AND triangle 0-1-2 joined by red edges, OR triangle
    /// 3-4-5, blue matching 0-3, 1-4, 2-5.
    fn prism() -> NclInstance {
        use EdgeColor::{Blue, Red};
        let pairs = [(0, 1, Red), (0, 2, Red), (1, 2, Red), (3, 4, Blue), (3, 5, Blue), (4, 5, Blue), (0, 3, Blue), (1, 4, Blue), (2, 5, Blue)];
        let edges = pairs.iter().map(|&(u, v, color)| NclEdge { u, v, color }).collect();
        let mut kinds = vec![VertexKind::And; 3];
        kinds.extend([VertexKind::Or; 3]);
        NclInstance { kinds, edges }
    }

    // OR triangle cyclic, matching edges into the AND vertices
    const PRISM_A: [bool; 9] = [true, true, true, true, false, true, false, false, false];
    // vertex 0 fed by both red edges instead of its blue edge
    const PRISM_BOTH_RED: [bool; 9] = [false, false, true, true, false, true, true, false, false];
    const PRISM_ONE_RED: [bool; 9] = [false, true, true, true, false, true, true, false, false];

    #[test]
    fn subdivision_counts() {
        let (ncl, a, _) = k4_all_blue();
        ncl.check_structure().unwrap();
        let sub = subdivide_ncl(&ncl);
        assert_eq!((sub.kinds.len(), sub.edges.len()), (10, 12));
        sub.check_structure().unwrap();
        for v in 4..10 {
            assert_eq!(sub.degree(v), 2);
        }
        // bipartite: every link joins an original vertex to a connector
        for e in &sub.edges {
            assert!(e.u < 4 && e.v >= 4);
        }
        let sa = subdivide_orientation(&a);
        assert!(check_orientation(&sub, &sa).unwrap());
        assert_eq!(collapse_orientation(&sa), Some(a));
    }

    #[test]
    fn orientation_constraints() {
        // a connector with both links pointing away
        let (ncl, a, _) = k4_all_blue();
        let sub = subdivide_ncl(&ncl);
        let mut o = subdivide_orientation(&a);
        o[0] = false;
        o[1] = false;
        assert_eq!(sub.violated_vertex(&o).unwrap(), Some(4));

        let prism = prism();
        prism.check_structure().unwrap();
        assert!(check_orientation(&prism, &PRISM_A).unwrap());
        assert!(check_orientation(&prism, &PRISM_BOTH_RED).unwrap());
        assert_eq!(prism.violated_vertex(&PRISM_ONE_RED).unwrap(), Some(0));
        assert!(check_orientation(&prism, &[true; 3]).is_err());
    }

    #[test]
    fn k4_reduction_structure() {
        let (ncl, a, b) = k4_all_blue();
        let r = reduce_ncl(&ncl, &a, &b, 0).unwrap();
        assert_eq!(r.k, 14);
        assert_eq!(r.district_size(), 50);
        assert_eq!(r.graph.n(), 700);
        for g in &r.gadgets {
            let weights: Vec<usize> = g.heavies.iter().map(|h| h.weight).collect();
            match g.kind {
                VertexKind::Or => assert_eq!(weights, vec![5, 5, 27, 5, 5, 5, 45]),
                VertexKind::Connector => assert_eq!(weights, vec![24, 24]),
                VertexKind::And => unreachable!(),
            }
        }
        for p in [&r.pa, &r.pb] {
            assert!(validate(&r.graph, p, 14, SlackBound::Finite(0)).is_ok());
            assert!(p.districts().iter().all(|d| d.len() == 50));
        }
        assert_eq!(partition_to_orientation(&r, &r.pa).unwrap(), subdivide_orientation(&a));
        assert_eq!(partition_to_orientation(&r, &r.pb).unwrap(), subdivide_orientation(&b));
        let records = r.map_records();
        assert_eq!(records.iter().filter(|x| x.kind == "edge").count(), 12);
        assert_eq!(records.iter().filter(|x| x.kind == "gadget").count(), 10);
    }

    #[test]
    fn and_gadget_weights_and_semantics() {
        let r = reduce_ncl(&prism(), &PRISM_A, &PRISM_BOTH_RED, 1).unwrap();
        assert_eq!((r.alpha, r.k), (6, 18));
        assert_eq!(r.graph.n(), 18 * 60);
        for g in r.gadgets.iter().filter(|g| g.kind == VertexKind::And) {
            assert_eq!(g.heavies.iter().map(|h| h.weight).collect::<Vec<_>>(), vec![6, 6, 45]);
        }
        for p in [&r.pa, &r.pb] {
            assert!(validate(&r.graph, p, r.k, SlackBound::Finite(0)).is_ok());
        }
        assert_eq!(partition_to_orientation(&r, &r.pb).unwrap(), subdivide_orientation(&PRISM_BOTH_RED));
        // a single incoming red edge leaves the AND district disconnected
        let sub = subdivide_orientation(&PRISM_ONE_RED);
        assert!(!check_orientation(&r.subdivided, &sub).unwrap());
        let p = orientation_to_partition(&r, &sub);
        assert!(!validate(&r.graph, &p, r.k, SlackBound::Finite(0)).is_ok());
    }

    #[test]
    fn rejects_bad_inputs() {
        let (ncl, a, _) = k4_all_blue();
        let mut bad = a.clone();
        bad[2] = true; // 0->3: vertex 0 loses its only incoming edge
        assert!(matches!(reduce_ncl(&ncl, &bad, &a, 0), Err(NclError::Unsatisfied(..))));
        let sub = subdivide_ncl(&ncl);
        assert_eq!(reduce_ncl(&sub, &a, &a, 0), Err(NclError::NotOriginal));
        let mut two = ncl.clone();
        two.edges.pop();
        assert!(matches!(two.check_structure(), Err(NclError::Degree(..))));

        let r = reduce_ncl(&ncl, &a, &a, 0).unwrap();
        // swap a core heavy vertex of gadget 0 into another district
        let mut labels = r.pa.assignment(r.graph.n()).unwrap();
        let h = &r.gadgets[0].heavies[2];
        let other = labels[r.gadgets[1].heavies[0].vertex];
        for v in h.members().iter() {
            labels[v] = other;
        }
        let broken = Partition::from_assignment(r.k, &labels).unwrap();
        assert!(matches!(partition_to_orientation(&r, &broken), Err(NclError::GadgetSplit { vertex: 0, .. })));
    }

    #[test]
    fn single_reversals_take_two_moves() {
        let (ncl, a, b) = k4_all_blue();
        let r = reduce_ncl(&ncl, &a, &b, 0).unwrap();
        let mut tried = 0;
        for e in 0..ncl.edges.len() {
            let mut flipped = a.clone();
            flipped[e] = !flipped[e];
            if !check_orientation(&ncl, &flipped).unwrap() {
                continue;
            }
            tried += 1;
            let labels = edge_flip_districts(&r, &r.pa, e).unwrap();
            let target = subdivide_orientation(&flipped);
            let path = realize_flip(&r, &r.pa, &target, &labels, 2, SlackBound::Finite(0)).expect("flip realized");
            assert_eq!(path.len(), 2);
        }
        assert!(tried > 0);
    }
}
