//! Instance generators: standard graph families, random partitions, and the
//! four-chord cycle instances built around a non-contiguous split partition.
//!
//! All randomness comes from `SplitMix64` seeded with `seed_from_u64`, and
//! every choice is drawn through `rand` 0.8's `gen_range`/`shuffle`, so a
//! seed fully determines the output.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use thiserror::Error;

use crate::graph::{Graph, GraphError, Vertex, VertexSet};
use crate::hamiltonian::{CycleError, CycleOrder};
use crate::partition::{validate, Partition, SlackBound};
use crate::unionfind::DisjointSets;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("graph error: {0}")]
    Graph(#[from] GraphError),
    #[error("cycle error: {0}")]
    Cycle(#[from] CycleError),
}

pub fn seeded(seed: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed)
}

/// Cycle `0-1-...-(n-1)-0`.
pub fn gen_cycle(n: usize) -> Result<Graph, GenError> {
    if n < 3 {
        return Err(GenError::InvalidParameter(format!("cycle needs n >= 3, got {n}")));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Ok(Graph::new(n, &edges)?)
}

/// Path `0-1-...-(n-1)`.
pub fn gen_path(n: usize) -> Result<Graph, GenError> {
    if n < 1 {
        return Err(GenError::InvalidParameter("path needs n >= 1".into()));
    }
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Ok(Graph::new(n, &edges)?)
}

/// `w x h` grid, vertex `y * w + x`.
pub fn gen_grid(w: usize, h: usize) -> Result<Graph, GenError> {
    if w == 0 || h == 0 {
        return Err(GenError::InvalidParameter(format!("grid needs positive sides, got {w}x{h}")));
    }
    let mut edges = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let v = y * w + x;
            if x + 1 < w {
                edges.push((v, v + 1));
            }
            if y + 1 < h {
                edges.push((v, v + w));
            }
        }
    }
    Ok(Graph::new(w * h, &edges)?)
}

/// Uniform random labeled tree on `n` vertices (Prüfer decoding) plus
/// `m - (n-1)` extra edges chosen uniformly among the remaining pairs.
pub fn gen_random_connected(n: usize, m: usize, seed: u64) -> Result<Graph, GenError> {
    let max = n * n.saturating_sub(1) / 2;
    if n == 0 || m + 1 < n || m > max {
        return Err(GenError::InvalidParameter(format!("need n >= 1 and n-1 <= m <= {max}, got n={n} m={m}")));
    }
    let mut rng = seeded(seed);
    let mut edges = random_tree(n, &mut rng);
    let mut present = vec![vec![false; n]; n];
    for &(u, v) in &edges {
        present[u][v] = true;
        present[v][u] = true;
    }
    let mut spare: Vec<(Vertex, Vertex)> =
        (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).filter(|&(u, v)| !present[u][v]).collect();
    let extra = m + 1 - n;
    let (chosen, _) = spare.partial_shuffle(&mut rng, extra);
    edges.extend_from_slice(chosen);
    Ok(Graph::new(n, &edges)?)
}

fn random_tree(n: usize, rng: &mut SplitMix64) -> Vec<(Vertex, Vertex)> {
    if n <= 1 {
        return Vec::new();
    }
    if n == 2 {
        return vec![(0, 1)];
    }
    let code: Vec<Vertex> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &c in &code {
        degree[c] += 1;
    }
    let mut leaves: std::collections::BTreeSet<Vertex> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &c in &code {
        let leaf = leaves.pop_first().expect("a Prüfer sequence always leaves a leaf");
        edges.push((leaf.min(c), leaf.max(c)));
        degree[c] -= 1;
        if degree[c] == 1 {
            leaves.insert(c);
        }
    }
    let last: Vec<Vertex> = leaves.into_iter().collect();
    edges.push((last[0], last[1]));
    edges
}

/// Cycle `0..n` (in that order) plus `chords` random non-cycle edges.
pub fn gen_hamiltonian(n: usize, chords: usize, seed: u64) -> Result<(Graph, CycleOrder), GenError> {
    let cycle = gen_cycle(n)?;
    let mut rng = seeded(seed);
    let mut spare: Vec<(Vertex, Vertex)> = (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .filter(|&(u, v)| !cycle.has_edge(u, v))
        .collect();
    if chords > spare.len() {
        return Err(GenError::InvalidParameter(format!("at most {} chords fit, asked for {chords}", spare.len())));
    }
    let (chosen, _) = spare.partial_shuffle(&mut rng, chords);
    let mut edges = cycle.edges().to_vec();
    edges.extend_from_slice(chosen);
    let g = Graph::new(n, &edges)?;
    let order = CycleOrder::new(&g, (0..n).collect())?;
    Ok((g, order))
}

/// A random connected `k`-partition satisfying `slack`: cut `k-1` random
/// edges of a random spanning tree, retrying up to `attempts` times.
pub fn random_partition<R: Rng>(g: &Graph, k: usize, slack: SlackBound, rng: &mut R, attempts: usize) -> Option<Partition> {
    let n = g.n();
    if k == 0 || k > n || !g.is_connected_graph() {
        return None;
    }
    for _ in 0..attempts {
        let mut order = g.edges().to_vec();
        order.shuffle(rng);
        let mut dsu = DisjointSets::new(n);
        let mut tree: Vec<(Vertex, Vertex)> = order.into_iter().filter(|&(u, v)| dsu.union(u, v)).collect();
        tree.shuffle(rng);
        tree.truncate(n - k);
        let forest = Graph::new(n, &tree).ok()?;
        let districts = forest.connected_components(&forest.vertices()).ok()?;
        let p = Partition::from_districts(districts);
        if validate(g, &p, k, slack).is_ok() {
            return Some(p);
        }
    }
    None
}

/// The contiguous partition of the cycle `order` into arcs of the given lengths,
/// starting at position `offset`.
pub fn arc_partition(order: &CycleOrder, offset: usize, lengths: &[usize]) -> Partition {
    let mut districts = Vec::with_capacity(lengths.len());
    let mut at = offset;
    for &len in lengths {
        districts.push((at..at + len).map(|p| order.at(p)).collect::<VertexSet>());
        at += len;
    }
    Partition::from_districts(districts)
}

/// A cycle with four chords and two partitions of it: `split`, whose four
/// special districts are each two arcs joined by a chord, and `arcs`, the
/// partition into contiguous arcs of `3s + 2` starting at vertex 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegativeInstance {
    pub graph: Graph,
    pub cycle: CycleOrder,
    /// Chord `i` joins the two arcs of district `i` of `split`.
    pub chords: [(Vertex, Vertex); 4],
    pub split: Partition,
    pub arcs: Partition,
}

/// Arc schedule of the four special districts, clockwise from vertex 0, as
/// `(district, length)`; `w = 3s + 2`.
///
/// | arc | district | length        |
/// |-----|----------|---------------|
/// | A1  | 0        | floor(w/2)    |
/// | D1  | 3        | s + 1         |
/// | A2  | 0        | ceil(w/2)     |
/// | C2  | 2        | 2s + 1        |
/// | D2  | 3        | 2s + 1        |
/// | B1  | 1        | floor(w/2)    |
/// | C1  | 2        | s + 1         |
/// | B2  | 1        | ceil(w/2)     |
///
/// Chords: `A1.first - A2.last`, `B1.first - B2.last`, `C1.last - C2.first`,
/// `D1.last - D2.last`. Extra districts of `w` consecutive vertices sit
/// between C2 and D2.
fn negative_schedule(s: usize) -> [(usize, usize); 8] {
    let w = 3 * s + 2;
    [(0, w / 2), (3, s + 1), (0, w - w / 2), (2, 2 * s + 1), (3, 2 * s + 1), (1, w / 2), (2, s + 1), (1, w - w / 2)]
}

/// Cycle on `k(3s + 2)` vertices plus four chords, with `split` a valid
/// `(k, s)` partition in which every special district needs its chord.
pub fn gen_negative(k: usize, s: u64) -> Result<NegativeInstance, GenError> {
    if k < 4 || s == 0 {
        return Err(GenError::InvalidParameter(format!("need k >= 4 and s >= 1, got k={k} s={s}")));
    }
    let s = usize::try_from(s).map_err(|_| GenError::InvalidParameter("s too large".into()))?;
    let w = 3 * s + 2;
    let n = k * w;
    let schedule = negative_schedule(s);
    let mut districts: Vec<Vec<Vertex>> = vec![Vec::new(); k];
    let mut arcs: Vec<(Vertex, Vertex)> = Vec::with_capacity(8);
    let mut at = 0;
    for (idx, &(d, len)) in schedule.iter().enumerate() {
        if idx == 4 {
            for extra in 4..k {
                districts[extra].extend(at..at + w);
                at += w;
            }
        }
        districts[d].extend(at..at + len);
        arcs.push((at, at + len - 1));
        at += len;
    }
    debug_assert_eq!(at, n);
    let [a1, d1, a2, c2, d2, b1, c1, b2] = [arcs[0], arcs[1], arcs[2], arcs[3], arcs[4], arcs[5], arcs[6], arcs[7]];
    let chords = [(a1.0, a2.1), (b1.0, b2.1), (c2.0, c1.1), (d1.1, d2.1)];
    let mut edges: Vec<(Vertex, Vertex)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    edges.extend_from_slice(&chords);
    let graph = Graph::new(n, &edges)?;
    let cycle = CycleOrder::new(&graph, (0..n).collect())?;
    let split = Partition::from_districts(districts.into_iter().map(VertexSet::from_vec).collect());
    let arcs = arc_partition(&cycle, 0, &vec![w; k]);
    Ok(NegativeInstance { graph, cycle, chords, split, arcs })
}

/// Whether every chord has both ends in one district, that district needs
/// the chord to stay connected, and no two chords share a district.
pub fn chords_split_distinct(g: &Graph, p: &Partition, chords: &[(Vertex, Vertex)]) -> Result<bool, GraphError> {
    let mut used = Vec::with_capacity(chords.len());
    for &(a, b) in chords {
        let Some(label) = p.label_of(a) else { return Ok(false) };
        if !p.district(label).contains(b) || used.contains(&label) {
            return Ok(false);
        }
        used.push(label);
        let (lo, hi) = (a.min(b), a.max(b));
        let rest: Vec<(Vertex, Vertex)> = g.edges().iter().copied().filter(|&e| e != (lo, hi)).collect();
        if Graph::new(g.n(), &rest)?.is_connected(p.district(label))? {
            return Ok(false);
        }
    }
    Ok(true)
}
