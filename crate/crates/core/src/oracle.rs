//! Exhaustive ground truth on small graphs: enumerate every balanced
//! connected partition, build the recombination graph over them, decide
//! reachability, and run seeded random walks.
//!
//! States are unlabeled: two partitions are the same node when their
//! [`PartitionKey`]s agree.

use std::collections::HashMap;

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::generate::seeded;
use crate::graph::{Graph, GraphError};
use crate::partition::{apply_move, enumerate_moves, validate, Partition, PartitionKey, RecombMove, SlackBound};
use crate::unionfind::DisjointSets;

pub const DEFAULT_VERTEX_CAP: usize = 24;
pub const DEFAULT_NODE_CAP: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance too large: {n} vertices exceeds the cap of {cap}")]
    TooManyVertices { n: usize, cap: usize },
    #[error("instance too large: more than {cap} states")]
    TooManyNodes { cap: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("graph error: {0}")]
    Graph(#[from] GraphError),
}

/// Size guards for exhaustive searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest graph `enumerate_partitions` accepts.
    pub vertex_cap: usize,
    /// Largest number of states any search may hold.
    pub node_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { vertex_cap: DEFAULT_VERTEX_CAP, node_cap: DEFAULT_NODE_CAP }
    }
}

pub fn enumerate_partitions(g: &Graph, k: usize, slack: SlackBound) -> Result<Vec<Partition>, OracleError> {
    enumerate_partitions_with(g, k, slack, Limits::default())
}

/// All connected `k`-partitions of `g` within `slack`, one per unordered
/// partition, sorted by key. Vertices are labeled in id order with labels
/// in first-use order, pruning on district sizes and on whether each district
/// can still become connected through unassigned vertices.
pub fn enumerate_partitions_with(g: &Graph, k: usize, slack: SlackBound, limits: Limits) -> Result<Vec<Partition>, OracleError> {
    let n = g.n();
    if n > limits.vertex_cap || n > 64 {
        return Err(OracleError::TooManyVertices { n, cap: limits.vertex_cap.min(64) });
    }
    if k == 0 || k > n {
        return Ok(Vec::new());
    }
    let (lo, hi) = slack.size_range(n, k);
    let lo = lo.max(1);
    if lo > hi {
        return Ok(Vec::new());
    }
    let adj: Vec<u64> = (0..n).map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | (1 << w))).collect();
    let mut search = Enumeration {
        adj: &adj,
        n,
        k,
        lo,
        hi,
        labels: vec![0; n],
        masks: vec![0; k],
        out: Vec::new(),
        cap: limits.node_cap,
    };
    search.assign(0, 0)?;
    let mut keys = search.out;
    keys.sort();
    Ok(keys.iter().map(PartitionKey::to_partition).collect())
}

struct Enumeration<'a> {
    adj: &'a [u64],
    n: usize,
    k: usize,
    lo: usize,
    hi: usize,
    labels: Vec<usize>,
    masks: Vec<u64>,
    out: Vec<PartitionKey>,
    cap: usize,
}

/// Whether `set` lies in one component of the subgraph induced by `allowed`.
fn connected_within(adj: &[u64], set: u64, allowed: u64) -> bool {
    if set == 0 {
        return true;
    }
    let mut reach = 1u64 << set.trailing_zeros();
    loop {
        let mut next = reach;
        let mut bits = reach;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            next |= adj[v] & allowed;
        }
        if next == reach {
            return set & !reach == 0;
        }
        reach = next;
    }
}

impl Enumeration<'_> {
    fn feasible(&self, v: usize, used: usize) -> bool {
        let remaining = self.n - v;
        let free: u64 = if v >= 64 { 0 } else { !0u64 << v };
        let free = free & if self.n == 64 { !0 } else { (1u64 << self.n) - 1 };
        let mut need = (self.k - used) * self.lo;
        for l in 0..used {
            let size = self.masks[l].count_ones() as usize;
            if size > self.hi {
                return false;
            }
            need += self.lo.saturating_sub(size);
            if !connected_within(self.adj, self.masks[l], self.masks[l] | free) {
                return false;
            }
        }
        need <= remaining && used + remaining >= self.k
    }

    fn assign(&mut self, v: usize, used: usize) -> Result<(), OracleError> {
        if v == self.n {
            if used == self.k {
                if self.out.len() >= self.cap {
                    return Err(OracleError::TooManyNodes { cap: self.cap });
                }
                self.out.push(PartitionKey::from_labels(&self.labels));
            }
            return Ok(());
        }
        let top = (used + 1).min(self.k);
        for l in 0..top {
            self.labels[v] = l;
            self.masks[l] |= 1 << v;
            let now_used = used.max(l + 1);
            if self.feasible(v + 1, now_used) {
                self.assign(v + 1, now_used)?;
            }
            self.masks[l] &= !(1u64 << v);
        }
        Ok(())
    }
}

/// The recombination graph over all balanced connected partitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigGraph {
    /// Sorted node keys.
    pub nodes: Vec<PartitionKey>,
    /// Undirected edges `(a, b)` with `a < b`, sorted.
    pub edges: Vec<(usize, usize)>,
    /// Component id per node, numbered by smallest member.
    pub component: Vec<usize>,
}

impl ConfigGraph {
    fn from_parts(nodes: Vec<PartitionKey>, edges: Vec<(usize, usize)>) -> Self {
        let mut dsu = DisjointSets::new(nodes.len());
        for &(a, b) in &edges {
            dsu.union(a, b);
        }
        let mut ids: HashMap<usize, usize> = HashMap::new();
        let component = (0..nodes.len())
            .map(|v| {
                let root = dsu.find(v);
                let next = ids.len();
                *ids.entry(root).or_insert(next)
            })
            .collect();
        ConfigGraph { nodes, edges, component }
    }

    pub fn index_of(&self, key: &PartitionKey) -> Option<usize> {
        self.nodes.binary_search(key).ok()
    }

    pub fn component_count(&self) -> usize {
        self.component.iter().max().map_or(0, |&c| c + 1)
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Subgraph induced by the nodes satisfying `keep`.
    pub fn induced(&self, keep: impl Fn(&PartitionKey) -> bool) -> ConfigGraph {
        let mut remap = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        for (idx, key) in self.nodes.iter().enumerate() {
            if keep(key) {
                remap[idx] = nodes.len();
                nodes.push(key.clone());
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| remap[a] != usize::MAX && remap[b] != usize::MAX)
            .map(|&(a, b)| (remap[a], remap[b]))
            .collect();
        ConfigGraph::from_parts(nodes, edges)
    }
}

fn neighbor_keys(g: &Graph, key: &PartitionKey, slack: SlackBound) -> Vec<(RecombMove, PartitionKey)> {
    let p = key.to_partition();
    enumerate_moves(g, &p, slack)
        .into_iter()
        .map(|m| {
            let next = apply_move(g, &p, &m, slack).expect("enumerated moves apply");
            let k = next.key();
            (m, k)
        })
        .collect()
}

pub fn build_space(g: &Graph, k: usize, slack: SlackBound) -> Result<ConfigGraph, OracleError> {
    build_space_with(g, k, slack, Limits::default())
}

/// Enumerates every state and its recombination neighbors (in parallel);
/// the result does not depend on the thread count.
pub fn build_space_with(g: &Graph, k: usize, slack: SlackBound, limits: Limits) -> Result<ConfigGraph, OracleError> {
    let nodes: Vec<PartitionKey> = enumerate_partitions_with(g, k, slack, limits)?.iter().map(Partition::key).collect();
    let index: HashMap<&PartitionKey, usize> = nodes.iter().enumerate().map(|(i, key)| (key, i)).collect();
    let mut edges: Vec<(usize, usize)> = nodes
        .par_iter()
        .enumerate()
        .flat_map_iter(|(a, key)| {
            neighbor_keys(g, key, slack)
                .into_iter()
                .map(|(_, next)| index[&next])
                .filter(move |&b| a < b)
                .map(move |b| (a, b))
                .collect::<Vec<_>>()
        })
        .collect();
    edges.sort_unstable();
    edges.dedup();
    Ok(ConfigGraph::from_parts(nodes, edges))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceStats {
    pub nodes: usize,
    pub edges: usize,
    pub components: usize,
    /// Diameter of each component, indexed by component id.
    pub diameters: Vec<usize>,
}

fn eccentricity(adj: &[Vec<usize>], start: usize) -> usize {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[start] = 0;
    let mut queue = std::collections::VecDeque::from([start]);
    let mut far = 0;
    while let Some(u) = queue.pop_front() {
        far = far.max(dist[u]);
        for &w in &adj[u] {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    far
}

/// Exact statistics; diameters by BFS from every node.
pub fn space_stats(cg: &ConfigGraph) -> SpaceStats {
    let adj = cg.adjacency();
    let ecc: Vec<usize> = (0..cg.nodes.len()).into_par_iter().map(|v| eccentricity(&adj, v)).collect();
    let components = cg.component_count();
    let mut diameters = vec![0; components];
    for (v, &e) in ecc.iter().enumerate() {
        let c = cg.component[v];
        diameters[c] = diameters[c].max(e);
    }
    SpaceStats { nodes: cg.nodes.len(), edges: cg.edges.len(), components, diameters }
}

/// Breadth-first layers of the component of `start`, built on the fly;
/// stops after the layer containing `stop`, if given.
struct Layers {
    dist: HashMap<PartitionKey, usize>,
    order: Vec<PartitionKey>,
}

fn explore(g: &Graph, slack: SlackBound, start: &PartitionKey, stop: Option<&PartitionKey>, cap: usize) -> Result<Layers, OracleError> {
    let mut dist = HashMap::from([(start.clone(), 0usize)]);
    let mut order = vec![start.clone()];
    let mut frontier = vec![start.clone()];
    let mut depth = 0;
    while !frontier.is_empty() {
        if stop.is_some_and(|s| dist.contains_key(s)) {
            break;
        }
        let expanded: Vec<Vec<PartitionKey>> = frontier
            .par_iter()
            .map(|key| neighbor_keys(g, key, slack).into_iter().map(|(_, k)| k).collect())
            .collect();
        depth += 1;
        let mut next = Vec::new();
        for keys in expanded {
            for key in keys {
                if !dist.contains_key(&key) {
                    if dist.len() >= cap {
                        return Err(OracleError::TooManyNodes { cap });
                    }
                    dist.insert(key.clone(), depth);
                    order.push(key.clone());
                    next.push(key);
                }
            }
        }
        frontier = next;
    }
    Ok(Layers { dist, order })
}

fn check_endpoint(g: &Graph, p: &Partition, k: usize, slack: SlackBound) -> Result<(), OracleError> {
    let report = validate(g, p, k, slack);
    if report.is_ok() {
        Ok(())
    } else {
        Err(OracleError::InvalidPartition(report.to_string()))
    }
}

/// Every state reachable from `start`, in breadth-first order.
pub fn component_of(g: &Graph, k: usize, slack: SlackBound, start: &Partition, limits: Limits) -> Result<Vec<PartitionKey>, OracleError> {
    check_endpoint(g, start, k, slack)?;
    Ok(explore(g, slack, &start.key(), None, limits.node_cap)?.order)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub reachable: bool,
    /// A shortest move sequence from `pa` when reachable; among shortest
    /// sequences the lexicographically smallest in move order.
    pub path: Option<Vec<RecombMove>>,
}

pub fn decide_br(g: &Graph, k: usize, slack: SlackBound, pa: &Partition, pb: &Partition) -> Result<Decision, OracleError> {
    decide_br_with(g, k, slack, pa, pb, Limits::default())
}

pub fn decide_br_with(
    g: &Graph,
    k: usize,
    slack: SlackBound,
    pa: &Partition,
    pb: &Partition,
    limits: Limits,
) -> Result<Decision, OracleError> {
    check_endpoint(g, pa, k, slack)?;
    check_endpoint(g, pb, k, slack)?;
    let (a, b) = (pa.key(), pb.key());
    let layers = explore(g, slack, &a, Some(&b), limits.node_cap)?;
    let Some(&d) = layers.dist.get(&b) else {
        return Ok(Decision { reachable: false, path: None });
    };
    // on_path[t]: states at distance t from `a` lying on some shortest path to `b`
    let mut on_path: Vec<HashMap<PartitionKey, ()>> = vec![HashMap::new(); d + 1];
    on_path[d].insert(b.clone(), ());
    for t in (1..=d).rev() {
        let layer: Vec<PartitionKey> = on_path[t].keys().cloned().collect();
        for key in layer {
            for (_, prev) in neighbor_keys(g, &key, slack) {
                if layers.dist.get(&prev) == Some(&(t - 1)) {
                    on_path[t - 1].insert(prev, ());
                }
            }
        }
    }
    let mut cur = pa.clone();
    let mut path = Vec::with_capacity(d);
    for t in 1..=d {
        let (m, next) = enumerate_moves(g, &cur, slack)
            .into_iter()
            .map(|m| {
                let next = apply_move(g, &cur, &m, slack).expect("enumerated moves apply");
                (m, next)
            })
            .find(|(_, next)| on_path[t].contains_key(&next.key()))
            .expect("a shortest path continues from every state on it");
        path.push(m);
        cur = next;
    }
    Ok(Decision { reachable: true, path: Some(path) })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkStep {
    /// Index of the chosen move in the sorted list of available moves.
    pub choice: usize,
    pub mv: RecombMove,
    pub key: PartitionKey,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkTrace {
    pub seed: u64,
    pub steps: Vec<WalkStep>,
    /// True when the walk stopped early because no move was available.
    pub halted: bool,
}

/// Random walk choosing uniformly among all available moves at each step,
/// using `SplitMix64` seeded with `seed` and `gen_range` for each draw.
pub fn recom_walk(g: &Graph, k: usize, slack: SlackBound, start: &Partition, steps: usize, seed: u64) -> Result<WalkTrace, OracleError> {
    check_endpoint(g, start, k, slack)?;
    let mut rng = seeded(seed);
    let mut cur = start.clone();
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        let moves = enumerate_moves(g, &cur, slack);
        if moves.is_empty() {
            return Ok(WalkTrace { seed, steps: out, halted: true });
        }
        let choice = rng.gen_range(0..moves.len());
        let mv = moves[choice].clone();
        cur = apply_move(g, &cur, &mv, slack).expect("enumerated moves apply");
        out.push(WalkStep { choice, mv, key: cur.key() });
    }
    Ok(WalkTrace { seed, steps: out, halted: false })
}
