//! Reconfiguration of balanced partitions of a graph with a known Hamilton
//! cycle `C`, for slack `s >= n/k` and `k | n`.
//!
//! A *fragment* is a maximal run of one district's vertices along `C`; a
//! partition is *canonical* when every district is a single arc. The pipeline
//! defragments both partitions to canonical form, then moves between the two
//! canonical partitions through canonical partitions only.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{Graph, GraphError, Tree, Vertex, VertexSet};
use crate::partition::{apply_move, replay, reverse_path, validate, MoveError, Partition, RecombMove, SlackBound};
use crate::unionfind::DisjointSets;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycleError {
    #[error("cycle needs at least 3 vertices, got {0}")]
    TooShort(usize),
    #[error("cycle lists {got} vertices, graph has {n}")]
    WrongLength { got: usize, n: usize },
    #[error("vertex {0} repeated or out of range in cycle")]
    BadVertex(Vertex),
    #[error("consecutive cycle vertices {0} and {1} are not adjacent")]
    MissingEdge(Vertex, Vertex),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HamiltonianError {
    #[error("{0}")]
    Cycle(#[from] CycleError),
    #[error("k = {k} does not divide n = {n}")]
    NotDivisible { n: usize, k: usize },
    #[error("slack {slack} below the average district size n/k = {avg}; need s >= n/k")]
    SlackTooSmall { slack: SlackBound, avg: usize },
    #[error("partitions have different district counts ({0} vs {1})")]
    MismatchedK(usize, usize),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("partition is not canonical")]
    NotCanonical,
    #[error("no singleton district")]
    NoSingleton,
    #[error("no adjacent pair of districts with combined size at most 2n/k")]
    NoPair,
    #[error("districts {0} and {1} are not adjacent along the cycle")]
    NotAdjacent(usize, usize),
    #[error("graph error: {0}")]
    Graph(#[from] GraphError),
    #[error("move error: {0}")]
    Move(#[from] MoveError),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

/// A Hamilton cycle of the ambient graph, as a cyclic vertex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleOrder {
    order: Vec<Vertex>,
    pos: Vec<usize>,
}

impl CycleOrder {
    pub fn new(g: &Graph, order: Vec<Vertex>) -> Result<Self, CycleError> {
        let n = g.n();
        if order.len() != n {
            return Err(CycleError::WrongLength { got: order.len(), n });
        }
        if n < 3 {
            return Err(CycleError::TooShort(n));
        }
        let mut pos = vec![usize::MAX; n];
        for (p, &v) in order.iter().enumerate() {
            if v >= n || pos[v] != usize::MAX {
                return Err(CycleError::BadVertex(v));
            }
            pos[v] = p;
        }
        for p in 0..n {
            let (u, v) = (order[p], order[(p + 1) % n]);
            if !g.has_edge(u, v) {
                return Err(CycleError::MissingEdge(u, v));
            }
        }
        Ok(CycleOrder { order, pos })
    }

    pub fn order(&self) -> &[Vertex] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Vertex at position `p` (taken modulo `n`).
    pub fn at(&self, p: usize) -> Vertex {
        self.order[p % self.order.len()]
    }

    pub fn position(&self, v: Vertex) -> usize {
        self.pos[v]
    }

    pub fn is_cycle_edge(&self, u: Vertex, v: Vertex) -> bool {
        let n = self.len();
        let d = (self.pos[u] + n - self.pos[v]) % n;
        d == 1 || d == n - 1
    }

    /// The cycle itself as a graph.
    pub fn graph(&self) -> Graph {
        let n = self.len();
        let edges: Vec<_> = (0..n).map(|p| (self.order[p], self.order[(p + 1) % n])).collect();
        Graph::new(n, &edges).expect("a cycle order lists distinct vertices")
    }

    /// Vertices at positions `start, start+1, ..., start+len-1` (cyclically).
    pub fn arc(&self, start: usize, len: usize) -> VertexSet {
        (start..start + len).map(|p| self.at(p)).collect()
    }
}

/// A maximal run of one district's vertices along the cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fragment {
    pub district: usize,
    pub start: usize,
    pub len: usize,
}

impl Fragment {
    pub fn vertices(&self, cycle: &CycleOrder) -> VertexSet {
        cycle.arc(self.start, self.len)
    }

    fn contains_position(&self, n: usize, p: usize) -> bool {
        (p + n - self.start) % n < self.len
    }
}

fn labels_of(p: &Partition, n: usize) -> Vec<usize> {
    p.assignment(n).expect("partition covers the cycle")
}

/// All fragments in cyclic order, sorted by start position.
pub fn fragments_of(cycle: &CycleOrder, p: &Partition) -> Vec<Fragment> {
    let n = cycle.len();
    let labels = labels_of(p, n);
    let label_at = |q: usize| labels[cycle.at(q)];
    let starts: Vec<usize> = (0..n).filter(|&q| label_at(q) != label_at(q + n - 1)).collect();
    if starts.is_empty() {
        return vec![Fragment { district: label_at(0), start: 0, len: n }];
    }
    starts
        .iter()
        .enumerate()
        .map(|(idx, &start)| {
            let next = starts[(idx + 1) % starts.len()];
            let len = (next + n - start) % n;
            Fragment { district: label_at(start), start, len: if len == 0 { n } else { len } }
        })
        .collect()
}

/// Number of fragments of each district.
pub fn fragment_counts(cycle: &CycleOrder, p: &Partition) -> Vec<usize> {
    let mut counts = vec![0; p.k()];
    for f in fragments_of(cycle, p) {
        counts[f.district] += 1;
    }
    counts
}

pub fn is_canonical(cycle: &CycleOrder, p: &Partition) -> bool {
    fragments_of(cycle, p).len() == p.k()
}

/// Spanning tree of one district using the fewest chords, with the
/// fragment-level tree rooted at the fragment holding the tree's center.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FragmentTree {
    pub district: usize,
    pub tree: Tree,
    /// Chords of the tree, sorted.
    pub chords: Vec<(Vertex, Vertex)>,
    pub center: Vertex,
    /// Fragments of the district, sorted by start position.
    pub fragments: Vec<Fragment>,
    /// Index into `fragments` of the fragment containing `center`.
    pub heavy: usize,
    pub parent: Vec<Option<usize>>,
    /// Vertices in each fragment plus all its descendants.
    pub subtree_weight: Vec<usize>,
}

impl FragmentTree {
    pub fn fragment_of(&self, cycle: &CycleOrder, v: Vertex) -> Option<usize> {
        let (n, p) = (cycle.len(), cycle.position(v));
        self.fragments.iter().position(|f| f.contains_position(n, p))
    }

    pub fn is_light(&self, idx: usize) -> bool {
        idx != self.heavy
    }

    /// Vertices of fragment `idx` and all its descendant fragments.
    pub fn subtree_vertices(&self, cycle: &CycleOrder, idx: usize) -> VertexSet {
        let mut out = Vec::new();
        for (f, frag) in self.fragments.iter().enumerate() {
            let mut cur = Some(f);
            while let Some(c) = cur {
                if c == idx {
                    out.extend(frag.vertices(cycle).iter());
                    break;
                }
                cur = self.parent[c];
            }
        }
        VertexSet::from_vec(out)
    }
}

pub fn build_fragment_tree(g: &Graph, cycle: &CycleOrder, p: &Partition, i: usize) -> Result<FragmentTree, HamiltonianError> {
    let n = cycle.len();
    let fragments: Vec<Fragment> = fragments_of(cycle, p).into_iter().filter(|f| f.district == i).collect();
    let vertices = p.district(i).clone();
    let mut frag_of: BTreeMap<Vertex, usize> = BTreeMap::new();
    let mut edges = Vec::with_capacity(vertices.len().saturating_sub(1));
    for (idx, f) in fragments.iter().enumerate() {
        for q in 0..f.len {
            frag_of.insert(cycle.at(f.start + q), idx);
            if q + 1 < f.len {
                let (a, b) = (cycle.at(f.start + q), cycle.at(f.start + q + 1));
                edges.push((a.min(b), a.max(b)));
            }
        }
    }
    // join fragments with chords in lexicographic order
    let mut dsu = DisjointSets::new(fragments.len());
    let mut chords = Vec::new();
    let mut frag_adj: Vec<Vec<usize>> = vec![Vec::new(); fragments.len()];
    for &(u, v) in g.edges() {
        if let (Some(&fu), Some(&fv)) = (frag_of.get(&u), frag_of.get(&v)) {
            if fu != fv && dsu.union(fu, fv) {
                chords.push((u, v));
                edges.push((u, v));
                frag_adj[fu].push(fv);
                frag_adj[fv].push(fu);
            }
        }
    }
    if chords.len() + 1 != fragments.len() {
        return Err(HamiltonianError::Graph(GraphError::SubsetNotConnected));
    }
    let tree = Tree::new(g, vertices, edges)?;
    let center = tree.center()?;
    let heavy = fragments
        .iter()
        .position(|f| f.contains_position(n, cycle.position(center)))
        .ok_or_else(|| HamiltonianError::Invariant("center outside its district".into()))?;

    let mut parent = vec![None; fragments.len()];
    let mut order = vec![heavy];
    let mut seen = vec![false; fragments.len()];
    seen[heavy] = true;
    let mut head = 0;
    while head < order.len() {
        let f = order[head];
        head += 1;
        for &c in &frag_adj[f] {
            if !seen[c] {
                seen[c] = true;
                parent[c] = Some(f);
                order.push(c);
            }
        }
    }
    let mut subtree_weight: Vec<usize> = fragments.iter().map(|f| f.len).collect();
    for &f in order.iter().rev() {
        if let Some(par) = parent[f] {
            subtree_weight[par] += subtree_weight[f];
        }
    }
    Ok(FragmentTree { district: i, tree, chords, center, fragments, heavy, parent, subtree_weight })
}

/// Checks the shared preconditions and returns `n/k`.
fn check_regime(g: &Graph, cycle: &CycleOrder, p: &Partition, slack: SlackBound) -> Result<usize, HamiltonianError> {
    let (n, k) = (g.n(), p.k());
    if cycle.len() != n {
        return Err(CycleError::WrongLength { got: cycle.len(), n }.into());
    }
    if k == 0 || n % k != 0 {
        return Err(HamiltonianError::NotDivisible { n, k });
    }
    if !slack.at_least_average(n, k) {
        return Err(HamiltonianError::SlackTooSmall { slack, avg: n / k });
    }
    let report = validate(g, p, k, slack);
    if !report.is_ok() {
        return Err(HamiltonianError::InvalidPartition(report.to_string()));
    }
    Ok(n / k)
}

/// One move moving a light fragment of a large district (and its
/// descendants) into a small district adjacent to it along the cycle.
pub fn step_light(g: &Graph, cycle: &CycleOrder, p: &Partition, slack: SlackBound) -> Result<Option<RecombMove>, HamiltonianError> {
    let avg = check_regime(g, cycle, p, slack)?;
    let n = cycle.len();
    let labels = labels_of(p, n);
    let mut trees: BTreeMap<usize, FragmentTree> = BTreeMap::new();
    for q in 0..n {
        let (x, y) = (cycle.at(q), cycle.at(q + 1));
        for (a, b) in [(x, y), (y, x)] {
            let (la, lb) = (labels[a], labels[b]);
            if la == lb || p.district(la).len() <= avg || p.district(lb).len() > avg {
                continue;
            }
            if !trees.contains_key(&la) {
                trees.insert(la, build_fragment_tree(g, cycle, p, la)?);
            }
            let ft = &trees[&la];
            let fa = ft.fragment_of(cycle, a).expect("vertex lies in a fragment of its district");
            if !ft.is_light(fa) {
                continue;
            }
            let moved = ft.subtree_vertices(cycle, fa);
            let m = RecombMove::new(la, lb, p.district(la).difference(&moved), p.district(lb).union(&moved));
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// First pair of districts adjacent along the cycle (scanning positions from
/// 0) whose combined size is at most `2n/k`.
pub fn find_small_adjacent_pair(cycle: &CycleOrder, p: &Partition) -> Result<(usize, usize), HamiltonianError> {
    let n = cycle.len();
    let k = p.k();
    let labels = labels_of(p, n);
    for q in 0..n {
        let (a, b) = (labels[cycle.at(q)], labels[cycle.at(q + 1)]);
        if a != b && k * (p.district(a).len() + p.district(b).len()) <= 2 * n {
            return Ok((a, b));
        }
    }
    Err(HamiltonianError::NoPair)
}

/// First cycle edge `(v1, v2)` with `v1` in district `i` and `v2` in `j`
/// or the other way round, scanning positions from 0.
fn first_boundary(cycle: &CycleOrder, labels: &[usize], i: usize, j: usize) -> Option<(Vertex, Vertex)> {
    (0..cycle.len()).map(|q| (cycle.at(q), cycle.at(q + 1))).find(|&(x, y)| {
        let (a, b) = (labels[x], labels[y]);
        (a == i && b == j) || (a == j && b == i)
    })
}

/// Recombines two districts adjacent along the cycle: if either tree has a
/// chord, cut the smallest chord of the joined tree (fragments drop);
/// otherwise the union is a chain and its first vertex becomes a singleton.
pub fn step_average(
    g: &Graph,
    cycle: &CycleOrder,
    p: &Partition,
    i: usize,
    j: usize,
    slack: SlackBound,
) -> Result<RecombMove, HamiltonianError> {
    check_regime(g, cycle, p, slack)?;
    let n = cycle.len();
    let labels = labels_of(p, n);
    let (v1, v2) = first_boundary(cycle, &labels, i, j).ok_or(HamiltonianError::NotAdjacent(i, j))?;
    let union = p.district(i).union(p.district(j));
    if !slack.admits(union.len() - 1, n, p.k()) {
        return Err(HamiltonianError::Invariant(format!("districts {i} and {j} too large to recombine")));
    }
    let ti = build_fragment_tree(g, cycle, p, i)?;
    let tj = build_fragment_tree(g, cycle, p, j)?;
    let chord = ti.chords.iter().chain(tj.chords.iter()).min().copied();
    if let Some((a, b)) = chord {
        let mut edges: Vec<_> = ti.tree.edges().iter().chain(tj.tree.edges().iter()).copied().collect();
        edges.push((v1.min(v2), v1.max(v2)));
        let joined = Tree::new(g, union.clone(), edges)?;
        let (side_a, side_b) = joined.split_at_edge(a, b);
        let first = union.first().expect("districts are nonempty");
        let (keep, give) = if side_a.contains(first) { (side_a, side_b) } else { (side_b, side_a) };
        return Ok(RecombMove::new(i.min(j), i.max(j), keep, give));
    }
    // both districts are single arcs forming one chain along the cycle
    let mask = union.mask(n);
    let ends: Vec<Vertex> = union
        .iter()
        .filter(|&v| {
            let q = cycle.position(v);
            !mask[cycle.at(q + n - 1)] || !mask[cycle.at(q + 1)]
        })
        .collect();
    let head = ends
        .iter()
        .copied()
        .min_by_key(|&v| cycle.position(v))
        .ok_or_else(|| HamiltonianError::Invariant("districts cover the whole cycle".into()))?;
    let own = labels[head];
    let other = if own == i { j } else { i };
    if p.district(own).len() == 1 {
        return Err(HamiltonianError::Invariant(format!("district {own} is already the singleton {{{head}}}")));
    }
    Ok(RecombMove::new(own, other, VertexSet::singleton(head), union.without(head)))
}

/// Moves that walk a singleton district clockwise over single-arc districts
/// until it touches a multi-fragment district, then merge it with part of
/// that district; the fragment count drops by at least one.
pub fn steps_singleton(g: &Graph, cycle: &CycleOrder, p: &Partition, slack: SlackBound) -> Result<Vec<RecombMove>, HamiltonianError> {
    check_regime(g, cycle, p, slack)?;
    if is_canonical(cycle, p) {
        return Err(HamiltonianError::NotCanonical);
    }
    let n = cycle.len();
    let mut cur = p.clone();
    let mut single = (0..p.k()).find(|&l| p.district(l).len() == 1).ok_or(HamiltonianError::NoSingleton)?;
    let mut moves = Vec::new();
    for _ in 0..=n {
        let labels = labels_of(&cur, n);
        let counts = fragment_counts(cycle, &cur);
        let v = cur.district(single).first().expect("singleton is nonempty");
        let q = cycle.position(v);
        let next = cycle.at(q + 1);
        let d = labels[next];
        if counts[d] > 1 {
            let td = build_fragment_tree(g, cycle, &cur, d)?;
            let (a, b) = td.chords[0];
            let (side_a, side_b) = td.tree.split_at_edge(a, b);
            let (near, far) = if side_a.contains(next) { (side_a, side_b) } else { (side_b, side_a) };
            let m = RecombMove::new(single, d, near.union(&VertexSet::singleton(v)), far);
            apply_move(g, &cur, &m, slack)?;
            moves.push(m);
            return Ok(moves);
        }
        let len = cur.district(d).len();
        if len > 1 {
            // the arc of d starts right after v: shift v's label onto it
            let m = RecombMove::new(single, d, cycle.arc(q, len), VertexSet::singleton(cycle.at(q + len)));
            cur = apply_move(g, &cur, &m, slack)?;
            moves.push(m);
        }
        single = d;
    }
    Err(HamiltonianError::Invariant("singleton walk did not reach a fragmented district".into()))
}

/// Result of defragmenting a partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canonicalization {
    pub moves: Vec<RecombMove>,
    pub partition: Partition,
    /// Total fragment count before each loop iteration and at the end.
    pub fragment_trace: Vec<usize>,
}

/// Defragments `p` to a canonical partition, each loop iteration spending at
/// most `k` moves and strictly lowering the fragment count.
pub fn canonicalize(g: &Graph, cycle: &CycleOrder, p: &Partition, slack: SlackBound) -> Result<Canonicalization, HamiltonianError> {
    check_regime(g, cycle, p, slack)?;
    let k = p.k();
    let mut cur = p.clone();
    let mut moves = Vec::new();
    let mut trace = Vec::new();
    loop {
        let before = fragments_of(cycle, &cur).len();
        trace.push(before);
        if before <= k {
            break;
        }
        let mut step = Vec::new();
        if let Some(m) = step_light(g, cycle, &cur, slack)? {
            step.push(m);
        } else if (0..k).any(|l| cur.district(l).len() == 1) {
            step = steps_singleton(g, cycle, &cur, slack)?;
        } else {
            let (i, j) = find_small_adjacent_pair(cycle, &cur)?;
            let m = step_average(g, cycle, &cur, i, j, slack)?;
            let next = apply_move(g, &cur, &m, slack)?;
            step.push(m);
            if fragments_of(cycle, &next).len() >= before {
                step.extend(steps_singleton(g, cycle, &next, slack)?);
            }
        }
        let states = replay(g, &cur, &step, slack).map_err(|(_, e)| e)?;
        cur = states.last().cloned().unwrap_or(cur);
        if step.len() > k || fragments_of(cycle, &cur).len() >= before {
            return Err(HamiltonianError::Invariant(format!(
                "iteration used {} moves and left {} fragments (was {before})",
                step.len(),
                fragments_of(cycle, &cur).len()
            )));
        }
        moves.extend(step);
    }
    Ok(Canonicalization { moves, partition: cur, fragment_trace: trace })
}

/// Arcs of a canonical partition as `(label, start, len)` in cyclic order
/// starting from the smallest start position.
fn arcs_of(cycle: &CycleOrder, p: &Partition) -> Result<Vec<(usize, usize, usize)>, HamiltonianError> {
    let frags = fragments_of(cycle, p);
    if frags.len() != p.k() {
        return Err(HamiltonianError::NotCanonical);
    }
    Ok(frags.into_iter().map(|f| (f.district, f.start, f.len)).collect())
}

/// Moves between canonical partitions making every arc exactly `n/k` long,
/// fixing arcs one at a time in cyclic order.
fn balance(cycle: &CycleOrder, ring: &Graph, p: &Partition, slack: SlackBound) -> Result<(Vec<RecombMove>, Partition), HamiltonianError> {
    let avg = cycle.len() / p.k();
    let mut arcs = arcs_of(cycle, p)?;
    let k = arcs.len();
    let mut cur = p.clone();
    let mut moves = Vec::new();
    // recombine arcs t and t+1 so that arc t gets exactly `first_len` vertices
    let mut resplit = |arcs: &mut Vec<(usize, usize, usize)>, cur: &mut Partition, t: usize, first_len: usize| {
        let (la, start, len_a) = arcs[t];
        let (lb, _, len_b) = arcs[t + 1];
        let total = len_a + len_b;
        let m = RecombMove::new(la, lb, cycle.arc(start, first_len), cycle.arc(start + first_len, total - first_len));
        *cur = apply_move(ring, cur, &m, slack)?;
        arcs[t].2 = first_len;
        arcs[t + 1] = (lb, start + first_len, total - first_len);
        moves.push(m);
        Ok::<(), HamiltonianError>(())
    };
    while let Some(m) = (0..k).find(|&t| arcs[t].2 != avg) {
        let below = arcs[m].2 < avg;
        // last arc before the sizes cross the average
        let j = (m + 1..k)
            .find(|&t| if below { arcs[t].2 >= avg } else { arcs[t].2 <= avg })
            .ok_or_else(|| HamiltonianError::Invariant("unbalanced arcs do not average n/k".into()))?
            - 1;
        resplit(&mut arcs, &mut cur, j, avg)?;
        for t in (m + 1..=j).rev() {
            resplit(&mut arcs, &mut cur, t - 1, avg)?;
        }
    }
    Ok((moves, cur))
}

/// Moves from one balanced canonical partition to another (a cyclic shift).
fn shift(cycle: &CycleOrder, ring: &Graph, from: &Partition, to: &Partition, slack: SlackBound) -> Result<Vec<RecombMove>, HamiltonianError> {
    let n = cycle.len();
    let k = from.k();
    let avg = n / k;
    let a = arcs_of(cycle, from)?;
    let b = arcs_of(cycle, to)?;
    let base = a[0].1;
    let delta = (b[0].1 + n - base) % avg;
    if delta == 0 {
        return Ok(Vec::new());
    }
    let label = |t: usize| a[t % k].0;
    let mut moves = Vec::new();
    let mut push = |x: usize, y: usize, vx: VertexSet, vy: VertexSet| moves.push(RecombMove::new(x, y, vx, vy));
    if k == 2 {
        push(label(0), label(1), cycle.arc(base + delta, avg), cycle.arc(base + delta + avg, avg));
    } else {
        push(label(0), label(1), cycle.arc(base, delta), cycle.arc(base + delta, 2 * avg - delta));
        for t in 1..=k - 2 {
            let start = base + (t - 1) * avg + delta;
            push(label(t), label(t + 1), cycle.arc(start, avg), cycle.arc(start + avg, 2 * avg - delta));
        }
        let start = base + (k - 2) * avg + delta;
        push(label(k - 1), label(0), cycle.arc(start, avg), cycle.arc(start + avg, avg));
    }
    replay(ring, from, &moves, slack).map_err(|(_, e)| e)?;
    Ok(moves)
}

/// Moves between two canonical partitions passing only through canonical
/// partitions: balance both, then shift; at most `k^2 + 1` moves.
pub fn canonical_transform(cycle: &CycleOrder, pc1: &Partition, pc2: &Partition, slack: SlackBound) -> Result<Vec<RecombMove>, HamiltonianError> {
    let ring = cycle.graph();
    if pc1.k() != pc2.k() {
        return Err(HamiltonianError::MismatchedK(pc1.k(), pc2.k()));
    }
    if !is_canonical(cycle, pc1) || !is_canonical(cycle, pc2) {
        return Err(HamiltonianError::NotCanonical);
    }
    check_regime(&ring, cycle, pc1, slack)?;
    check_regime(&ring, cycle, pc2, slack)?;
    if pc1.key() == pc2.key() {
        return Ok(Vec::new());
    }
    let (mut moves, b1) = balance(cycle, &ring, pc1, slack)?;
    let (back, b2) = balance(cycle, &ring, pc2, slack)?;
    let shifted = shift(cycle, &ring, &b1, &b2, slack)?;
    let reached = replay(&ring, &b1, &shifted, slack).map_err(|(_, e)| e)?.pop().unwrap_or(b1);
    moves.extend(shifted);
    let back = reverse_path(&ring, pc2, &back, &reached)
        .ok_or_else(|| HamiltonianError::Invariant("balanced partitions differ after the shift".into()))?;
    moves.extend(back);
    let k = pc1.k();
    if moves.len() > k * k + 1 {
        return Err(HamiltonianError::Invariant(format!("{} canonical moves exceed k^2+1", moves.len())));
    }
    Ok(moves)
}

/// Explicit move bound `2k(n-k) + k^2 + 1` for [`transform_hamiltonian`].
pub fn hamiltonian_bound(n: usize, k: usize) -> usize {
    2 * k * n.saturating_sub(k) + k * k + 1
}

/// Moves from `p1` to `p2`: canonicalize both, connect the canonical forms,
/// and retrace the second canonicalization backwards.
pub fn transform_hamiltonian(
    g: &Graph,
    cycle: &CycleOrder,
    p1: &Partition,
    p2: &Partition,
    slack: SlackBound,
) -> Result<Vec<RecombMove>, HamiltonianError> {
    if p1.k() != p2.k() {
        return Err(HamiltonianError::MismatchedK(p1.k(), p2.k()));
    }
    check_regime(g, cycle, p1, slack)?;
    check_regime(g, cycle, p2, slack)?;
    if p1.key() == p2.key() {
        return Ok(Vec::new());
    }
    let c1 = canonicalize(g, cycle, p1, slack)?;
    let c2 = canonicalize(g, cycle, p2, slack)?;
    let mut moves = c1.moves;
    let middle = canonical_transform(cycle, &c1.partition, &c2.partition, slack)?;
    let reached = replay(g, &c1.partition, &middle, slack).map_err(|(_, e)| e)?.pop().unwrap_or(c1.partition);
    moves.extend(middle);
    let back = reverse_path(g, p2, &c2.moves, &reached)
        .ok_or_else(|| HamiltonianError::Invariant("canonical forms do not meet".into()))?;
    moves.extend(back);
    let bound = hamiltonian_bound(g.n(), p1.k());
    if moves.len() > bound {
        return Err(HamiltonianError::Invariant(format!("{} moves exceed the bound {bound}", moves.len())));
    }
    Ok(moves)
}
