//! Transformation between any two connected k-partitions of a connected graph
//! in at most `6(k-1)` recombinations.
//!
//! Each level builds spanning trees `T1`, `T2` of `G` that contain spanning
//! trees of every district plus `k-1` connecting edges. `T1 ∪ T2` is a union
//! of two forests, so it has a block vertex `v` of degree at most 3. Both
//! partitions are reduced to having `{v}` as a singleton district by giving
//! away the (at most three) branches of `v`'s district tree, and the problem
//! recurses on `G - v` with `k-1` districts.

use thiserror::Error;

use crate::graph::{Graph, GraphError, Vertex, VertexSet};
use crate::partition::{apply_move, replay, reverse_path, validate, MoveError, Partition, RecombMove, SlackBound};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("partitions have different district counts ({0} vs {1})")]
    MismatchedK(usize, usize),
    #[error("need at least two districts")]
    TooFewDistricts,
    #[error("graph not connected")]
    Disconnected,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("graph error: {0}")]
    Graph(#[from] GraphError),
    #[error("move error: {0}")]
    Move(#[from] MoveError),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

/// Moves reducing both partitions to a common singleton district `{vertex}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingletonPair {
    pub vertex: Vertex,
    /// Degree of `vertex` in the union of the two augmented spanning trees.
    pub union_degree: usize,
    pub moves1: Vec<RecombMove>,
    pub moves2: Vec<RecombMove>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformPlan {
    /// Applied from the source partition.
    pub moves_forward: Vec<RecombMove>,
    /// Applied from the target partition; retraced in reverse in `moves`.
    pub moves_backward: Vec<RecombMove>,
    /// `(vertex, recursion depth)` of each singleton created, in order.
    pub singleton_order: Vec<(Vertex, usize)>,
    pub union_degrees: Vec<usize>,
    /// The emitted sequence from source to target.
    pub moves: Vec<RecombMove>,
}

fn check_inputs(g: &Graph, p1: &Partition, p2: &Partition) -> Result<(), TransformError> {
    if p1.k() != p2.k() {
        return Err(TransformError::MismatchedK(p1.k(), p2.k()));
    }
    if !g.is_connected_graph() || g.n() == 0 {
        return Err(TransformError::Disconnected);
    }
    for p in [p1, p2] {
        let report = validate(g, p, p.k(), SlackBound::Infinite);
        if !report.is_ok() {
            return Err(TransformError::InvalidPartition(report.to_string()));
        }
    }
    Ok(())
}

/// Spanning tree of `g` extending a BFS tree of every district.
fn district_spanning_tree(g: &Graph, p: &Partition) -> Result<Vec<(Vertex, Vertex)>, GraphError> {
    let forest = p.districts().iter().map(|d| g.spanning_tree(d)).collect::<Result<Vec<_>, _>>()?;
    Ok(g.augment_forest(&forest)?.edges().to_vec())
}

/// Empties `v`'s district except for `v` by handing each branch of its
/// district tree to a neighboring district along an edge of `union`.
fn isolate(g: &Graph, union: &Graph, p: &Partition, v: Vertex) -> Result<Vec<RecombMove>, TransformError> {
    let d = p.label_of(v).ok_or_else(|| TransformError::Invariant(format!("vertex {v} uncovered")))?;
    let tree = g.spanning_tree(p.district(d))?;
    let mut remaining = tree.components_without(v);
    let mut cur = p.clone();
    let mut moves = Vec::new();
    while !remaining.is_empty() {
        let home = cur.district(d).clone();
        let pick = remaining.iter().enumerate().find_map(|(idx, comp)| {
            comp.iter()
                .flat_map(|x| union.neighbors(x).iter().copied())
                .filter(|&y| !home.contains(y))
                .filter_map(|y| cur.label_of(y))
                .min()
                .map(|target| (idx, target))
        });
        let (idx, target) = pick.ok_or_else(|| {
            TransformError::Invariant(format!("no branch of district {d} touches another district"))
        })?;
        let comp = remaining.remove(idx);
        let m = RecombMove::new(d, target, home.difference(&comp), cur.district(target).union(&comp));
        cur = apply_move(g, &cur, &m, SlackBound::Infinite)?;
        moves.push(m);
    }
    Ok(moves)
}

pub fn make_singleton_pair(g: &Graph, p1: &Partition, p2: &Partition) -> Result<SingletonPair, TransformError> {
    check_inputs(g, p1, p2)?;
    if p1.k() < 2 {
        return Err(TransformError::TooFewDistricts);
    }
    let t1 = district_spanning_tree(g, p1)?;
    let t2 = district_spanning_tree(g, p2)?;
    let union = Graph::new(g.n(), &t1)?.union(&Graph::new(g.n(), &t2)?);
    let vertex = union.find_low_degree_block_vertex()?;
    let union_degree = union.degree(vertex);
    if union_degree > 3 {
        return Err(TransformError::Invariant(format!(
            "block vertex {vertex} of a two-forest union has degree {union_degree}"
        )));
    }
    let moves1 = isolate(g, &union, p1, vertex)?;
    let moves2 = isolate(g, &union, p2, vertex)?;
    if moves1.len() > 3 || moves2.len() > 3 {
        return Err(TransformError::Invariant("more than three moves to isolate a vertex".into()));
    }
    Ok(SingletonPair { vertex, union_degree, moves1, moves2 })
}

/// Drops the singleton district `{v}` and renumbers vertices and labels;
/// returns the reduced partition and the map from reduced to original labels.
fn shrink(p: &Partition, v: Vertex) -> (Partition, Vec<usize>) {
    let mut districts = Vec::with_capacity(p.k() - 1);
    let mut labels = Vec::with_capacity(p.k() - 1);
    for (l, d) in p.districts().iter().enumerate() {
        if d.len() == 1 && d.contains(v) {
            continue;
        }
        districts.push(d.iter().map(|u| if u > v { u - 1 } else { u }).collect::<VertexSet>());
        labels.push(l);
    }
    (Partition::from_districts(districts), labels)
}

fn lift(m: &RecombMove, v: Vertex, labels: &[usize]) -> RecombMove {
    let up = |s: &VertexSet| s.iter().map(|u| if u >= v { u + 1 } else { u }).collect::<VertexSet>();
    RecombMove::new(labels[m.i], labels[m.j], up(&m.new_i), up(&m.new_j))
}

struct Halves {
    forward: Vec<RecombMove>,
    backward: Vec<RecombMove>,
    singletons: Vec<(Vertex, usize)>,
    degrees: Vec<usize>,
}

fn plan_level(g: &Graph, p1: &Partition, p2: &Partition, depth: usize, ids: &[Vertex]) -> Result<Halves, TransformError> {
    let mut out = Halves { forward: Vec::new(), backward: Vec::new(), singletons: Vec::new(), degrees: Vec::new() };
    if p1.k() <= 1 || p1.key() == p2.key() {
        return Ok(out);
    }
    let pair = make_singleton_pair(g, p1, p2)?;
    let v = pair.vertex;
    let q1 = replay(g, p1, &pair.moves1, SlackBound::Infinite).map_err(|(_, e)| e)?.pop().unwrap_or_else(|| p1.clone());
    let q2 = replay(g, p2, &pair.moves2, SlackBound::Infinite).map_err(|(_, e)| e)?.pop().unwrap_or_else(|| p2.clone());

    let sub = g.remove_vertex(v);
    let sub_ids: Vec<Vertex> = ids.iter().enumerate().filter(|&(u, _)| u != v).map(|(_, &id)| id).collect();
    let (r1, labels1) = shrink(&q1, v);
    let (r2, labels2) = shrink(&q2, v);
    let inner = plan_level(&sub, &r1, &r2, depth + 1, &sub_ids)?;

    out.singletons.push((ids[v], depth));
    out.degrees.push(pair.union_degree);
    out.forward = pair.moves1;
    out.forward.extend(inner.forward.iter().map(|m| lift(m, v, &labels1)));
    out.backward = pair.moves2;
    out.backward.extend(inner.backward.iter().map(|m| lift(m, v, &labels2)));
    out.singletons.extend(inner.singletons);
    out.degrees.extend(inner.degrees);
    Ok(out)
}

pub fn plan_unbounded(g: &Graph, p1: &Partition, p2: &Partition) -> Result<TransformPlan, TransformError> {
    check_inputs(g, p1, p2)?;
    let ids: Vec<Vertex> = (0..g.n()).collect();
    let halves = plan_level(g, p1, p2, 0, &ids)?;
    let reached = replay(g, p1, &halves.forward, SlackBound::Infinite)
        .map_err(|(_, e)| e)?
        .pop()
        .unwrap_or_else(|| p1.clone());
    let back = reverse_path(g, p2, &halves.backward, &reached)
        .ok_or_else(|| TransformError::Invariant("forward and backward halves do not meet".into()))?;
    let mut moves = halves.forward.clone();
    moves.extend(back);
    let bound = 6 * (p1.k().saturating_sub(1));
    if moves.len() > bound {
        return Err(TransformError::Invariant(format!("{} moves exceed 6(k-1) = {bound}", moves.len())));
    }
    Ok(TransformPlan {
        moves_forward: halves.forward,
        moves_backward: halves.backward,
        singleton_order: halves.singletons,
        union_degrees: halves.degrees,
        moves,
    })
}

/// At most `6(k-1)` moves taking `p1` to `p2` (up to labels), unbounded slack.
pub fn transform_unbounded(g: &Graph, p1: &Partition, p2: &Partition) -> Result<Vec<RecombMove>, TransformError> {
    Ok(plan_unbounded(g, p1, p2)?.moves)
}
