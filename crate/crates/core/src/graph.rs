//! Undirected simple graphs, vertex sets, spanning trees and the block-cut
//! decomposition.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::unionfind::DisjointSets;

pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("empty subset")]
    EmptySubset,
    #[error("graph not connected")]
    NotConnected,
    #[error("induced subgraph not connected")]
    SubsetNotConnected,
    #[error("vertex {0} out of range")]
    VertexOutOfRange(Vertex),
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("edge {0}-{1} not in graph")]
    EdgeNotInGraph(Vertex, Vertex),
    #[error("forest does not span the graph (vertex {0} missing)")]
    ForestNotSpanning(Vertex),
    #[error("forest contains a cycle through edge {0}-{1}")]
    ForestCycle(Vertex, Vertex),
    #[error("tree is empty")]
    EmptyTree,
}

/// Sorted, duplicate-free set of vertex ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(Vec<Vertex>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    /// Builds a set from arbitrary ids, sorting and dropping duplicates.
    pub fn from_vec(mut members: Vec<Vertex>) -> Self {
        members.sort_unstable();
        members.dedup();
        VertexSet(members)
    }

    pub fn singleton(v: Vertex) -> Self {
        VertexSet(vec![v])
    }

    pub fn range(lo: Vertex, hi: Vertex) -> Self {
        VertexSet((lo..hi).collect())
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Smallest member.
    pub fn first(&self) -> Option<Vertex> {
        self.0.first().copied()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.iter().copied()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&x), Some(&&y)) => {
                    if x < y {
                        out.push(x);
                        a.next();
                    } else if y < x {
                        out.push(y);
                        b.next();
                    } else {
                        out.push(x);
                        a.next();
                        b.next();
                    }
                }
                (Some(&&x), None) => {
                    out.push(x);
                    a.next();
                }
                (None, Some(&&y)) => {
                    out.push(y);
                    b.next();
                }
                (None, None) => break,
            }
        }
        VertexSet(out)
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| !other.contains(v)).collect())
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        small.iter().any(|v| large.contains(v))
    }

    pub fn without(&self, v: Vertex) -> VertexSet {
        VertexSet(self.iter().filter(|&u| u != v).collect())
    }

    /// Bitset view over an ambient vertex range `0..n`.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for v in self.iter() {
            mask[v] = true;
        }
        mask
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        VertexSet::from_vec(iter.into_iter().collect())
    }
}

impl From<Vec<Vertex>> for VertexSet {
    fn from(v: Vec<Vertex>) -> Self {
        VertexSet::from_vec(v)
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Undirected simple graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    edges: Vec<(Vertex, Vertex)>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicates and out-of-range ids.
    pub fn new(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        let mut list = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange(u));
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange(v));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        for w in list.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        for &(u, v) in &list {
            adj[u].push(v);
            adj[v].push(u);
        }
        for nbrs in &mut adj {
            nbrs.sort_unstable();
        }
        Ok(Graph { adj, edges: list })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::range(0, self.n())
    }

    /// Subgraph induced by deleting `v`; vertex `u > v` becomes `u - 1`.
    pub fn remove_vertex(&self, v: Vertex) -> Graph {
        let shift = |u: Vertex| if u > v { u - 1 } else { u };
        let edges: Vec<_> = self
            .edges
            .iter()
            .filter(|&&(a, b)| a != v && b != v)
            .map(|&(a, b)| (shift(a), shift(b)))
            .collect();
        Graph::new(self.n() - 1, &edges).expect("subgraph of a simple graph is simple")
    }

    /// Union of two graphs on the same vertex set.
    pub fn union(&self, other: &Graph) -> Graph {
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        edges.sort_unstable();
        edges.dedup();
        Graph::new(self.n().max(other.n()), &edges).expect("union of simple graphs is simple")
    }

    fn check_subset(&self, s: &VertexSet) -> Result<(), GraphError> {
        match s.as_slice().last() {
            Some(&v) if v >= self.n() => Err(GraphError::VertexOutOfRange(v)),
            _ => Ok(()),
        }
    }

    /// Vertices of `s` reachable from `start` inside `G[s]`.
    fn reach_within(&self, mask: &[bool], start: Vertex, seen: &mut [bool]) -> Vec<Vertex> {
        let mut out = vec![start];
        seen[start] = true;
        let mut head = 0;
        while head < out.len() {
            let u = out[head];
            head += 1;
            for &w in &self.adj[u] {
                if mask[w] && !seen[w] {
                    seen[w] = true;
                    out.push(w);
                }
            }
        }
        out
    }

    /// Whether `G[s]` is connected.
    pub fn is_connected(&self, s: &VertexSet) -> Result<bool, GraphError> {
        self.check_subset(s)?;
        let start = s.first().ok_or(GraphError::EmptySubset)?;
        let mask = s.mask(self.n());
        let mut seen = vec![false; self.n()];
        Ok(self.reach_within(&mask, start, &mut seen).len() == s.len())
    }

    pub fn is_connected_graph(&self) -> bool {
        self.n() == 0 || self.is_connected(&self.vertices()).unwrap_or(false)
    }

    /// Maximal connected pieces of `G[s]`, sorted by minimum element.
    pub fn connected_components(&self, s: &VertexSet) -> Result<Vec<VertexSet>, GraphError> {
        self.check_subset(s)?;
        let mask = s.mask(self.n());
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for v in s.iter() {
            if !seen[v] {
                out.push(VertexSet::from_vec(self.reach_within(&mask, v, &mut seen)));
            }
        }
        Ok(out)
    }

    /// Blocks and cut vertices via the DFS lowpoint method.
    pub fn block_cut(&self) -> Result<BlockCutDecomposition, GraphError> {
        let n = self.n();
        if n == 0 || !self.is_connected_graph() {
            return Err(GraphError::NotConnected);
        }
        if n == 1 {
            return Ok(BlockCutDecomposition {
                blocks: vec![VertexSet::singleton(0)],
                cut_vertices: VertexSet::new(),
                block_vertices: VertexSet::singleton(0),
            });
        }

        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut timer = 0;
        let mut blocks = Vec::new();
        let mut is_cut = vec![false; n];
        let mut edge_stack: Vec<(Vertex, Vertex)> = Vec::new();
        // (vertex, parent, next neighbor index)
        let mut stack: Vec<(Vertex, Vertex, usize)> = Vec::new();

        let root = 0;
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        stack.push((root, usize::MAX, 0));
        let mut root_children = 0;

        while let Some(&mut (u, parent, ref mut idx)) = stack.last_mut() {
            if *idx < self.adj[u].len() {
                let w = self.adj[u][*idx];
                *idx += 1;
                if disc[w] == usize::MAX {
                    edge_stack.push((u, w));
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    if u == root {
                        root_children += 1;
                    }
                    stack.push((w, u, 0));
                } else if w != parent && disc[w] < disc[u] {
                    edge_stack.push((u, w));
                    low[u] = low[u].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[u]);
                    if low[u] >= disc[p] {
                        if p != root {
                            is_cut[p] = true;
                        }
                        let mut block = Vec::new();
                        while let Some((a, b)) = edge_stack.pop() {
                            block.push(a);
                            block.push(b);
                            if (a, b) == (p, u) {
                                break;
                            }
                        }
                        blocks.push(VertexSet::from_vec(block));
                    }
                }
            }
        }
        if root_children > 1 {
            is_cut[root] = true;
        }
        blocks.sort();
        let cut_vertices: VertexSet = (0..n).filter(|&v| is_cut[v]).collect();
        let block_vertices: VertexSet = (0..n).filter(|&v| !is_cut[v]).collect();
        Ok(BlockCutDecomposition { blocks, cut_vertices, block_vertices })
    }

    /// Block vertex of minimum degree, smallest id on ties.
    pub fn find_low_degree_block_vertex(&self) -> Result<Vertex, GraphError> {
        let bc = self.block_cut()?;
        bc.block_vertices
            .iter()
            .min_by_key(|&v| (self.degree(v), v))
            .ok_or(GraphError::NotConnected)
    }

    /// BFS tree of `G[s]` rooted at `min(s)`, neighbors visited in ascending order.
    pub fn spanning_tree(&self, s: &VertexSet) -> Result<Tree, GraphError> {
        self.check_subset(s)?;
        let root = s.first().ok_or(GraphError::EmptySubset)?;
        let mask = s.mask(self.n());
        let mut seen = vec![false; self.n()];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        let mut edges = Vec::with_capacity(s.len().saturating_sub(1));
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if mask[w] && !seen[w] {
                    seen[w] = true;
                    edges.push((u, w));
                    queue.push_back(w);
                }
            }
        }
        if edges.len() + 1 != s.len() {
            return Err(GraphError::SubsetNotConnected);
        }
        Ok(Tree::from_parts(s.clone(), edges))
    }

    /// Extends a spanning forest of `g` to a spanning tree with the
    /// lexicographically smallest connecting edge at each union step.
    pub fn augment_forest(&self, forest: &[Tree]) -> Result<Tree, GraphError> {
        let n = self.n();
        let mut covered = vec![false; n];
        let mut dsu = DisjointSets::new(n);
        let mut edges = Vec::with_capacity(n.saturating_sub(1));
        for tree in forest {
            for v in tree.vertices().iter() {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange(v));
                }
                covered[v] = true;
            }
            for &(u, v) in tree.edges() {
                if !self.has_edge(u, v) {
                    return Err(GraphError::EdgeNotInGraph(u, v));
                }
                if !dsu.union(u, v) {
                    return Err(GraphError::ForestCycle(u, v));
                }
                edges.push((u, v));
            }
        }
        if let Some(v) = covered.iter().position(|&c| !c) {
            return Err(GraphError::ForestNotSpanning(v));
        }
        for &(u, v) in &self.edges {
            if dsu.union(u, v) {
                edges.push((u, v));
            }
        }
        if edges.len() + 1 != n {
            return Err(GraphError::NotConnected);
        }
        Ok(Tree::from_parts(self.vertices(), edges))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockCutDecomposition {
    pub blocks: Vec<VertexSet>,
    pub cut_vertices: VertexSet,
    pub block_vertices: VertexSet,
}

/// A tree given by its vertex set and edges, rooted at its smallest vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    vertices: VertexSet,
    edges: Vec<(Vertex, Vertex)>,
    parent: BTreeMap<Vertex, Vertex>,
}

impl Tree {
    fn from_parts(vertices: VertexSet, edges: Vec<(Vertex, Vertex)>) -> Tree {
        let mut edges: Vec<_> = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        edges.sort_unstable();
        let mut tree = Tree { vertices, edges, parent: BTreeMap::new() };
        tree.parent = tree.compute_parents();
        tree
    }

    /// Validates acyclicity, connectivity and edge membership in `g`.
    pub fn new(g: &Graph, vertices: VertexSet, edges: Vec<(Vertex, Vertex)>) -> Result<Tree, GraphError> {
        if vertices.is_empty() {
            return Err(GraphError::EmptyTree);
        }
        for &(u, v) in &edges {
            if !g.has_edge(u, v) {
                return Err(GraphError::EdgeNotInGraph(u, v));
            }
            if !vertices.contains(u) {
                return Err(GraphError::VertexOutOfRange(u));
            }
            if !vertices.contains(v) {
                return Err(GraphError::VertexOutOfRange(v));
            }
        }
        if edges.len() + 1 != vertices.len() {
            return Err(GraphError::SubsetNotConnected);
        }
        let tree = Tree::from_parts(vertices, edges);
        if tree.parent.len() + 1 != tree.vertices.len() {
            return Err(GraphError::SubsetNotConnected);
        }
        Ok(tree)
    }

    pub fn vertices(&self) -> &VertexSet {
        &self.vertices
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn root(&self) -> Vertex {
        self.vertices.first().expect("nonempty tree")
    }

    /// Parent of each non-root vertex.
    pub fn parents(&self) -> &BTreeMap<Vertex, Vertex> {
        &self.parent
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn adjacency(&self) -> BTreeMap<Vertex, Vec<Vertex>> {
        let mut adj: BTreeMap<Vertex, Vec<Vertex>> = self.vertices.iter().map(|v| (v, Vec::new())).collect();
        for &(u, v) in &self.edges {
            adj.entry(u).or_default().push(v);
            adj.entry(v).or_default().push(u);
        }
        for nbrs in adj.values_mut() {
            nbrs.sort_unstable();
        }
        adj
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    fn compute_parents(&self) -> BTreeMap<Vertex, Vertex> {
        let mut parent = BTreeMap::new();
        let Some(root) = self.vertices.first() else { return parent };
        let adj = self.adjacency();
        let mut queue = VecDeque::from([root]);
        let mut seen = BTreeMap::from([(root, ())]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[&u] {
                if seen.insert(w, ()).is_none() {
                    parent.insert(w, u);
                    queue.push_back(w);
                }
            }
        }
        parent
    }

    /// Vertex sets of the components of `T - v`, sorted by minimum element.
    pub fn components_without(&self, v: Vertex) -> Vec<VertexSet> {
        let adj = self.adjacency();
        let mut seen = BTreeMap::from([(v, ())]);
        let mut out = Vec::new();
        for start in self.vertices.iter() {
            if seen.contains_key(&start) {
                continue;
            }
            seen.insert(start, ());
            let mut comp = vec![start];
            let mut head = 0;
            while head < comp.len() {
                let u = comp[head];
                head += 1;
                for &w in &adj[&u] {
                    if seen.insert(w, ()).is_none() {
                        comp.push(w);
                    }
                }
            }
            out.push(VertexSet::from_vec(comp));
        }
        out
    }

    /// The vertex sets on either side of edge `(u, v)`; the first contains `u`.
    pub fn split_at_edge(&self, u: Vertex, v: Vertex) -> (VertexSet, VertexSet) {
        let key = (u.min(v), u.max(v));
        let mut adj = self.adjacency();
        if let Some(list) = adj.get_mut(&key.0) {
            list.retain(|&w| w != key.1);
        }
        if let Some(list) = adj.get_mut(&key.1) {
            list.retain(|&w| w != key.0);
        }
        let mut side = vec![u];
        let mut seen = BTreeMap::from([(u, ())]);
        let mut head = 0;
        while head < side.len() {
            let x = side[head];
            head += 1;
            for &w in &adj[&x] {
                if seen.insert(w, ()).is_none() {
                    side.push(w);
                }
            }
        }
        let side = VertexSet::from_vec(side);
        let rest = self.vertices.difference(&side);
        (side, rest)
    }

    /// A vertex whose removal leaves components of at most half the tree;
    /// the smallest id when two exist.
    pub fn center(&self) -> Result<Vertex, GraphError> {
        let total = self.len();
        if total == 0 {
            return Err(GraphError::EmptyTree);
        }
        // subtree sizes, children processed before parents (reverse BFS order)
        let root = self.root();
        let adj = self.adjacency();
        let mut order = vec![root];
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &w in &adj[&u] {
                if self.parent.get(&u) != Some(&w) {
                    order.push(w);
                }
            }
        }
        let mut size: BTreeMap<Vertex, usize> = BTreeMap::new();
        for &u in order.iter().rev() {
            let s = 1 + adj[&u]
                .iter()
                .filter(|&&w| self.parent.get(&u) != Some(&w))
                .map(|w| size[w])
                .sum::<usize>();
            size.insert(u, s);
        }
        for v in self.vertices.iter() {
            let mut largest = total - size[&v];
            for &w in &adj[&v] {
                if self.parent.get(&v) != Some(&w) {
                    largest = largest.max(size[&w]);
                }
            }
            if 2 * largest <= total {
                return Ok(v);
            }
        }
        unreachable!("every tree has a center")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &edges).unwrap()
    }

    fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::new(n, &edges).unwrap()
    }

    fn set(v: &[usize]) -> VertexSet {
        VertexSet::from_vec(v.to_vec())
    }

    #[test]
    fn connectivity_examples() {
        let c4 = cycle(4);
        assert!(c4.is_connected(&set(&[0, 1])).unwrap());
        assert!(!c4.is_connected(&set(&[0, 2])).unwrap());
        assert!(path(5).is_connected(&set(&[0, 1, 2, 3, 4])).unwrap());
        assert_eq!(c4.is_connected(&VertexSet::new()), Err(GraphError::EmptySubset));
    }

    #[test]
    fn component_examples() {
        let c4 = cycle(4);
        assert_eq!(c4.connected_components(&set(&[0, 2])).unwrap(), vec![set(&[0]), set(&[2])]);
        assert_eq!(c4.connected_components(&set(&[0, 1, 2, 3])).unwrap(), vec![set(&[0, 1, 2, 3])]);
        assert_eq!(path(5).connected_components(&set(&[0, 1, 3, 4])).unwrap(), vec![set(&[0, 1]), set(&[3, 4])]);
        assert!(c4.connected_components(&VertexSet::new()).unwrap().is_empty());
    }

    #[test]
    fn rejects_malformed_edges() {
        assert_eq!(Graph::new(2, &[(0, 0)]), Err(GraphError::SelfLoop(0)));
        assert_eq!(Graph::new(2, &[(0, 1), (1, 0)]), Err(GraphError::DuplicateEdge(0, 1)));
        assert_eq!(Graph::new(2, &[(0, 2)]), Err(GraphError::VertexOutOfRange(2)));
    }

    #[test]
    fn block_cut_examples() {
        let k3 = cycle(3);
        let bc = k3.block_cut().unwrap();
        assert_eq!(bc.blocks, vec![set(&[0, 1, 2])]);
        assert!(bc.cut_vertices.is_empty());

        let p3 = path(3);
        let bc = p3.block_cut().unwrap();
        assert_eq!(bc.blocks, vec![set(&[0, 1]), set(&[1, 2])]);
        assert_eq!(bc.cut_vertices, set(&[1]));
        assert_eq!(bc.block_vertices, set(&[0, 2]));

        let bowtie = Graph::new(5, &[(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)]).unwrap();
        let bc = bowtie.block_cut().unwrap();
        assert_eq!(bc.blocks, vec![set(&[0, 1, 2]), set(&[2, 3, 4])]);
        assert_eq!(bc.cut_vertices, set(&[2]));

        let disconnected = Graph::new(3, &[(0, 1)]).unwrap();
        assert_eq!(disconnected.block_cut(), Err(GraphError::NotConnected));
    }

    #[test]
    fn low_degree_block_vertex_examples() {
        assert_eq!(path(3).find_low_degree_block_vertex().unwrap(), 0);
        assert_eq!(cycle(3).find_low_degree_block_vertex().unwrap(), 0);
        // two edge-disjoint spanning trees of K4: path 0-1-2-3 and star-ish 0-2,0-3,1-3
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (0, 2), (0, 3), (1, 3)]).unwrap();
        let v = g.find_low_degree_block_vertex().unwrap();
        assert!(g.degree(v) <= 3);
    }

    #[test]
    fn spanning_tree_examples() {
        let c4 = cycle(4);
        let t = c4.spanning_tree(&c4.vertices()).unwrap();
        assert_eq!(t.edges(), &[(0, 1), (0, 3), (1, 2)]);
        let single = c4.spanning_tree(&set(&[2])).unwrap();
        assert!(single.edges().is_empty());
        let p5 = path(5);
        let t = p5.spanning_tree(&p5.vertices()).unwrap();
        assert_eq!(t.edges(), p5.edges());
        assert_eq!(c4.spanning_tree(&set(&[0, 2])), Err(GraphError::SubsetNotConnected));
    }

    #[test]
    fn augment_forest_examples() {
        let c4 = cycle(4);
        let whole = c4.spanning_tree(&c4.vertices()).unwrap();
        assert_eq!(c4.augment_forest(std::slice::from_ref(&whole)).unwrap().edges(), whole.edges());

        let f = [c4.spanning_tree(&set(&[0, 1])).unwrap(), c4.spanning_tree(&set(&[2, 3])).unwrap()];
        let t = c4.augment_forest(&f).unwrap();
        assert_eq!(t.edges().len(), 3);
        assert_eq!(t.edges(), &[(0, 1), (0, 3), (2, 3)]);

        let c6 = cycle(6);
        let f: Vec<_> = [[0, 1], [2, 3], [4, 5]].iter().map(|p| c6.spanning_tree(&set(p)).unwrap()).collect();
        let t = c6.augment_forest(&f).unwrap();
        assert_eq!(t.edges().len(), 5);
        assert!(c6.is_connected(&c6.vertices()).unwrap());
        assert_eq!(t.parents().len(), 5);

        let bad = Tree::from_parts(set(&[0, 2]), vec![(0, 2)]);
        assert_eq!(c4.augment_forest(&[bad]), Err(GraphError::EdgeNotInGraph(0, 2)));
    }

    #[test]
    fn tree_center_examples() {
        let k1 = Graph::new(1, &[]).unwrap();
        assert_eq!(k1.spanning_tree(&k1.vertices()).unwrap().center().unwrap(), 0);
        let p3 = path(3);
        assert_eq!(p3.spanning_tree(&p3.vertices()).unwrap().center().unwrap(), 1);
        let p4 = path(4);
        assert_eq!(p4.spanning_tree(&p4.vertices()).unwrap().center().unwrap(), 1);
    }

    #[test]
    fn split_at_edge_sides() {
        let p5 = path(5);
        let t = p5.spanning_tree(&p5.vertices()).unwrap();
        let (a, b) = t.split_at_edge(2, 1);
        assert_eq!(a, set(&[2, 3, 4]));
        assert_eq!(b, set(&[0, 1]));
    }

    fn random_connected(n: usize, extra: &[(usize, usize)], parents: &[usize]) -> Graph {
        let mut edges: Vec<_> = (1..n).map(|v| (parents[v - 1] % v, v)).collect();
        for &(a, b) in extra {
            let (a, b) = (a % n, b % n);
            if a != b {
                edges.push((a.min(b), a.max(b)));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        Graph::new(n, &edges).unwrap()
    }

    fn brute_cut_vertices(g: &Graph) -> VertexSet {
        (0..g.n())
            .filter(|&v| g.n() > 1 && g.connected_components(&g.vertices().without(v)).unwrap().len() >= 2)
            .collect()
    }

    fn brute_center(t: &Tree) -> Vertex {
        let half = t.len();
        t.vertices()
            .iter()
            .find(|&v| t.components_without(v).iter().all(|c| 2 * c.len() <= half))
            .unwrap()
    }

    proptest! {
        #[test]
        fn block_cut_matches_brute_force(
            n in 1usize..=10,
            parents in proptest::collection::vec(0usize..100, 9),
            extra in proptest::collection::vec((0usize..10, 0usize..10), 0..8),
        ) {
            let g = random_connected(n, &extra, &parents);
            let bc = g.block_cut().unwrap();
            prop_assert_eq!(&bc.cut_vertices, &brute_cut_vertices(&g));
            // each vertex in at least one block; cut vertex iff in two or more
            for v in 0..n {
                let count = bc.blocks.iter().filter(|b| b.contains(v)).count();
                prop_assert!(count >= 1);
                prop_assert_eq!(count >= 2, bc.cut_vertices.contains(v));
            }
            let v = g.find_low_degree_block_vertex().unwrap();
            if n > 1 {
                prop_assert!(g.is_connected(&g.vertices().without(v)).unwrap());
            }
        }

        #[test]
        fn two_forest_union_has_block_vertex_of_degree_at_most_three(
            n in 2usize..=10,
            p1 in proptest::collection::vec(0usize..100, 9),
            p2 in proptest::collection::vec(0usize..100, 9),
            perm_seed in 0usize..1000,
        ) {
            let t1: Vec<_> = (1..n).map(|v| (p1[v - 1] % v, v)).collect();
            // second tree on a rotated labelling
            let rot = |x: usize| (x + perm_seed) % n;
            let t2: Vec<_> = (1..n).map(|v| (rot(p2[v - 1] % v), rot(v))).collect();
            let mut edges: Vec<_> = t1.iter().chain(t2.iter()).map(|&(a, b)| (a.min(b), a.max(b))).collect();
            edges.sort_unstable();
            edges.dedup();
            let g = Graph::new(n, &edges).unwrap();
            let v = g.find_low_degree_block_vertex().unwrap();
            prop_assert!(g.degree(v) <= 3);
        }

        #[test]
        fn spanning_trees_and_centers_are_sound(
            n in 1usize..=10,
            parents in proptest::collection::vec(0usize..100, 9),
            extra in proptest::collection::vec((0usize..10, 0usize..10), 0..8),
        ) {
            let g = random_connected(n, &extra, &parents);
            let t = g.spanning_tree(&g.vertices()).unwrap();
            prop_assert_eq!(t.edges().len(), n - 1);
            prop_assert_eq!(t.parents().len(), n - 1);
            for &(u, v) in t.edges() {
                prop_assert!(g.has_edge(u, v));
            }
            prop_assert_eq!(t.center().unwrap(), brute_center(&t));
            let forest: Vec<_> = g
                .connected_components(&g.vertices().difference(&VertexSet::singleton(0)))
                .unwrap()
                .into_iter()
                .chain(std::iter::once(VertexSet::singleton(0)))
                .map(|c| g.spanning_tree(&c).unwrap())
                .collect();
            let aug = g.augment_forest(&forest).unwrap();
            prop_assert_eq!(aug.edges().len(), n - 1);
            prop_assert_eq!(aug.parents().len(), n - 1);
        }
    }
}
