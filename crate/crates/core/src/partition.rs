//! Connected k-partitions, slack bounds and recombination moves.

use std::fmt;

use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet};

/// Allowed deviation of district sizes from `n/k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SlackBound {
    Finite(u64),
    Infinite,
}

impl SlackBound {
    /// `| k*size - n | <= k*s`, evaluated exactly in integers.
    pub fn admits(&self, size: usize, n: usize, k: usize) -> bool {
        match *self {
            SlackBound::Infinite => true,
            SlackBound::Finite(s) => {
                let lhs = (k as i128 * size as i128 - n as i128).abs();
                lhs <= k as i128 * s as i128
            }
        }
    }

    /// Inclusive range of admissible nonempty district sizes.
    pub fn size_range(&self, n: usize, k: usize) -> (usize, usize) {
        match *self {
            SlackBound::Infinite => (1, n.max(1)),
            SlackBound::Finite(s) => {
                let (n, k, s) = (n as i128, k.max(1) as i128, s as i128);
                let low_num = n - k * s;
                let lo = if low_num <= k { 1 } else { (low_num + k - 1) / k };
                let hi = ((n + k * s) / k).min(n);
                (lo as usize, hi.max(0) as usize)
            }
        }
    }

    /// Whether this slack is at least `n/k`.
    pub fn at_least_average(&self, n: usize, k: usize) -> bool {
        match *self {
            SlackBound::Infinite => true,
            SlackBound::Finite(s) => k as u128 * s as u128 >= n as u128,
        }
    }
}

impl fmt::Display for SlackBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlackBound::Finite(s) => write!(f, "{s}"),
            SlackBound::Infinite => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for SlackBound {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "inf" {
            Ok(SlackBound::Infinite)
        } else {
            s.parse::<u64>()
                .map(SlackBound::Finite)
                .map_err(|_| format!("slack must be a nonnegative integer or `inf`, got `{s}`"))
        }
    }
}

/// A labeled list of districts. Well-formedness is checked by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    districts: Vec<VertexSet>,
}

impl Partition {
    pub fn from_districts(districts: Vec<VertexSet>) -> Self {
        Partition { districts }
    }

    /// Builds a partition from a per-vertex label list; labels must be `< k`.
    pub fn from_assignment(k: usize, labels: &[usize]) -> Result<Self, String> {
        let mut districts = vec![Vec::new(); k];
        for (v, &l) in labels.iter().enumerate() {
            if l >= k {
                return Err(format!("vertex {v} has label {l} outside 0..{k}"));
            }
            districts[l].push(v);
        }
        Ok(Partition { districts: districts.into_iter().map(VertexSet::from_vec).collect() })
    }

    pub fn k(&self) -> usize {
        self.districts.len()
    }

    pub fn districts(&self) -> &[VertexSet] {
        &self.districts
    }

    pub fn district(&self, i: usize) -> &VertexSet {
        &self.districts[i]
    }

    /// Total number of vertices covered (with multiplicity).
    pub fn size(&self) -> usize {
        self.districts.iter().map(VertexSet::len).sum()
    }

    pub fn label_of(&self, v: Vertex) -> Option<usize> {
        self.districts.iter().position(|d| d.contains(v))
    }

    /// Per-vertex labels for a well-formed partition of `0..n`.
    pub fn assignment(&self, n: usize) -> Option<Vec<usize>> {
        let mut labels = vec![usize::MAX; n];
        for (i, d) in self.districts.iter().enumerate() {
            for v in d.iter() {
                if v >= n || labels[v] != usize::MAX {
                    return None;
                }
                labels[v] = i;
            }
        }
        labels.iter().all(|&l| l != usize::MAX).then_some(labels)
    }

    pub fn key(&self) -> PartitionKey {
        canonical_key(self)
    }

    /// Labels `i`, `j` adjacent in `g` (some edge joins the two districts).
    pub fn adjacent(&self, g: &Graph, i: usize, j: usize) -> bool {
        let (small, other) = if self.districts[i].len() <= self.districts[j].len() {
            (&self.districts[i], &self.districts[j])
        } else {
            (&self.districts[j], &self.districts[i])
        };
        small.iter().any(|v| g.neighbors(v).iter().any(|&w| other.contains(w)))
    }
}

/// Canonical form of an unlabeled partition: each vertex gets the rank of its
/// district when districts are ordered by minimum element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionKey(Box<[u32]>);

impl PartitionKey {
    /// Canonicalizes an arbitrary labeling.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut remap: Vec<u32> = Vec::new();
        let mut next = 0;
        let mut out = Vec::with_capacity(labels.len());
        for &l in labels {
            if l >= remap.len() {
                remap.resize(l + 1, u32::MAX);
            }
            if remap[l] == u32::MAX {
                remap[l] = next;
                next += 1;
            }
            out.push(remap[l]);
        }
        PartitionKey(out.into_boxed_slice())
    }

    pub fn labels(&self) -> &[u32] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn k(&self) -> usize {
        self.0.iter().max().map_or(0, |&m| m as usize + 1)
    }

    /// Districts sorted by minimum element, each sorted.
    pub fn districts(&self) -> Vec<VertexSet> {
        let mut out = vec![Vec::new(); self.k()];
        for (v, &l) in self.0.iter().enumerate() {
            out[l as usize].push(v);
        }
        out.into_iter().map(VertexSet::from_vec).collect()
    }

    pub fn to_partition(&self) -> Partition {
        Partition::from_districts(self.districts())
    }

    /// 64-bit FNV-1a over the little-endian label words.
    pub fn fnv_hash(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for &l in self.0.iter() {
            for b in l.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
        h
    }
}

impl fmt::Display for PartitionKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in self.districts() {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// Key of a partition whose districts may be listed in any order.
pub fn canonical_key(p: &Partition) -> PartitionKey {
    let mut order: Vec<&VertexSet> = p.districts.iter().filter(|d| !d.is_empty()).collect();
    order.sort_by_key(|d| d.as_slice()[0]);
    let n = p.districts.iter().filter_map(|d| d.as_slice().last()).max().map_or(0, |&m| m + 1);
    let mut labels = vec![u32::MAX; n];
    for (rank, d) in order.iter().enumerate() {
        for v in d.iter() {
            if labels[v] == u32::MAX {
                labels[v] = rank as u32;
            }
        }
    }
    PartitionKey(labels.into_boxed_slice())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DistrictCount { expected: usize, found: usize },
    Empty { district: usize },
    OutOfRange { district: usize, vertex: Vertex },
    Overlap { vertex: Vertex },
    Uncovered { vertex: Vertex },
    Disconnected { district: usize },
    Size { district: usize, size: usize, n: usize, k: usize, ks: u128 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::DistrictCount { expected, found } => {
                write!(f, "expected {expected} districts, found {found}")
            }
            Violation::Empty { district } => write!(f, "district {district} empty"),
            Violation::OutOfRange { district, vertex } => {
                write!(f, "district {district} contains vertex {vertex} outside the graph")
            }
            Violation::Overlap { vertex } => write!(f, "vertex {vertex} in more than one district"),
            Violation::Uncovered { vertex } => write!(f, "vertex {vertex} in no district"),
            Violation::Disconnected { district } => write!(f, "district {district} disconnected"),
            Violation::Size { district, size, n, k, ks } => {
                write!(f, "district {district} size {size}, bound |{k}·{size}−{n}| ≤ {ks} fails")
            }
        }
    }
}

/// Outcome of [`validate`]; empty means the partition is a valid `(k,s)`-BCP.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

pub fn validate(g: &Graph, p: &Partition, k: usize, slack: SlackBound) -> ValidationReport {
    let n = g.n();
    let mut violations = Vec::new();
    if p.k() != k {
        violations.push(Violation::DistrictCount { expected: k, found: p.k() });
    }
    let mut owner = vec![usize::MAX; n];
    for (i, d) in p.districts.iter().enumerate() {
        if d.is_empty() {
            violations.push(Violation::Empty { district: i });
            continue;
        }
        for v in d.iter() {
            if v >= n {
                violations.push(Violation::OutOfRange { district: i, vertex: v });
            } else if owner[v] != usize::MAX {
                violations.push(Violation::Overlap { vertex: v });
            } else {
                owner[v] = i;
            }
        }
    }
    for (v, &o) in owner.iter().enumerate() {
        if o == usize::MAX {
            violations.push(Violation::Uncovered { vertex: v });
        }
    }
    for (i, d) in p.districts.iter().enumerate() {
        if d.is_empty() || d.iter().any(|v| v >= n) {
            continue;
        }
        if !g.is_connected(d).unwrap_or(false) {
            violations.push(Violation::Disconnected { district: i });
        }
        let kk = p.k().max(1);
        if !slack.admits(d.len(), n, kk) {
            let ks = match slack {
                SlackBound::Finite(s) => kk as u128 * s as u128,
                SlackBound::Infinite => u128::MAX,
            };
            violations.push(Violation::Size { district: i, size: d.len(), n, k: kk, ks });
        }
    }
    ValidationReport { violations }
}

/// Replace districts `i` and `j` (`i < j`) by `new_i` and `new_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RecombMove {
    pub i: usize,
    pub j: usize,
    pub new_i: VertexSet,
    pub new_j: VertexSet,
}

impl RecombMove {
    /// Normalizes label order so that `i < j`.
    pub fn new(a: usize, b: usize, new_a: VertexSet, new_b: VertexSet) -> Self {
        if a <= b {
            RecombMove { i: a, j: b, new_i: new_a, new_j: new_b }
        } else {
            RecombMove { i: b, j: a, new_i: new_b, new_j: new_a }
        }
    }

    /// The move undoing `self` when applied after it to the result.
    pub fn inverse(&self, before: &Partition) -> RecombMove {
        RecombMove {
            i: self.i,
            j: self.j,
            new_i: before.districts[self.i].clone(),
            new_j: before.districts[self.j].clone(),
        }
    }

    /// Renames district labels through `map` (old label -> new label).
    pub fn relabel(&self, map: &[usize]) -> RecombMove {
        RecombMove::new(map[self.i], map[self.j], self.new_i.clone(), self.new_j.clone())
    }
}

impl fmt::Display for RecombMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m {} {} |", self.i, self.j)?;
        for v in self.new_i.iter() {
            write!(f, " {v}")?;
        }
        write!(f, " |")?;
        for v in self.new_j.iter() {
            write!(f, " {v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("bad district labels {0}, {1}")]
    BadLabels(usize, usize),
    #[error("union mismatch")]
    UnionMismatch,
    #[error("empty part")]
    EmptyPart,
    #[error("disconnected part")]
    DisconnectedPart,
    #[error("identity move")]
    IdentityMove,
    #[error("slack violation: part of size {size}")]
    SlackViolation { size: usize },
}

pub fn apply_move(g: &Graph, p: &Partition, m: &RecombMove, slack: SlackBound) -> Result<Partition, MoveError> {
    let k = p.k();
    if m.i >= m.j || m.j >= k {
        return Err(MoveError::BadLabels(m.i, m.j));
    }
    let (vi, vj) = (&p.districts[m.i], &p.districts[m.j]);
    let old_union = vi.union(vj);
    if m.new_i.len() + m.new_j.len() != old_union.len() || m.new_i.union(&m.new_j) != old_union {
        return Err(MoveError::UnionMismatch);
    }
    if m.new_i.is_empty() || m.new_j.is_empty() {
        return Err(MoveError::EmptyPart);
    }
    if &m.new_i == vi || &m.new_i == vj {
        return Err(MoveError::IdentityMove);
    }
    for part in [&m.new_i, &m.new_j] {
        if !g.is_connected(part).unwrap_or(false) {
            return Err(MoveError::DisconnectedPart);
        }
    }
    let n = p.size();
    for part in [&m.new_i, &m.new_j] {
        if !slack.admits(part.len(), n, k) {
            return Err(MoveError::SlackViolation { size: part.len() });
        }
    }
    let mut districts = p.districts.clone();
    districts[m.i] = m.new_i.clone();
    districts[m.j] = m.new_j.clone();
    Ok(Partition { districts })
}

/// Applies `moves` in order, returning every intermediate partition
/// (the start is not included).
pub fn replay(g: &Graph, start: &Partition, moves: &[RecombMove], slack: SlackBound) -> Result<Vec<Partition>, (usize, MoveError)> {
    let mut cur = start.clone();
    let mut out = Vec::with_capacity(moves.len());
    for (idx, m) in moves.iter().enumerate() {
        cur = apply_move(g, &cur, m, slack).map_err(|e| (idx, e))?;
        out.push(cur.clone());
    }
    Ok(out)
}

/// Label permutation taking `from`'s labels to `to`'s labels for two
/// partitions equal as unordered families: `to[map[l]] == from[l]`.
pub fn label_map(from: &Partition, to: &Partition) -> Option<Vec<usize>> {
    if from.k() != to.k() {
        return None;
    }
    let mut map = Vec::with_capacity(from.k());
    for d in &from.districts {
        let v = d.first()?;
        let l = to.label_of(v)?;
        if &to.districts[l] != d {
            return None;
        }
        map.push(l);
    }
    Some(map)
}

/// Moves that retrace `path` (a sequence applied to `target`) backwards,
/// expressed against `current`, which must equal the end of `path` up to labels.
pub fn reverse_path(
    g: &Graph,
    target: &Partition,
    path: &[RecombMove],
    current: &Partition,
) -> Option<Vec<RecombMove>> {
    let mut states = vec![target.clone()];
    for m in path {
        let next = apply_move(g, states.last().unwrap(), m, SlackBound::Infinite).ok()?;
        states.push(next);
    }
    let map = label_map(states.last().unwrap(), current)?;
    Some(
        path.iter()
            .enumerate()
            .rev()
            .map(|(idx, m)| m.inverse(&states[idx]).relabel(&map))
            .collect(),
    )
}

/// All recombination moves applicable to `p` under `slack`, sorted.
pub fn enumerate_moves(g: &Graph, p: &Partition, slack: SlackBound) -> Vec<RecombMove> {
    let k = p.k();
    let mut out = Vec::new();
    for i in 0..k {
        for j in (i + 1)..k {
            out.extend(enumerate_pair_moves(g, p, i, j, slack));
        }
    }
    out
}

/// Moves that recombine districts `i < j` only; empty when they are not adjacent.
pub fn enumerate_pair_moves(g: &Graph, p: &Partition, i: usize, j: usize, slack: SlackBound) -> Vec<RecombMove> {
    let (vi, vj) = (&p.districts[i], &p.districts[j]);
    if !p.adjacent(g, i, j) {
        return Vec::new();
    }
    let union = vi.union(vj);
    let (lo, hi) = slack.size_range(p.size(), p.k());
    let min_i = vi.first().expect("nonempty district");
    let mut out: Vec<RecombMove> = two_way_splits(g, &union, lo, hi)
        .into_iter()
        .filter(|(a, _)| a != vi && a != vj)
        .map(|(a, b)| if a.contains(min_i) { RecombMove { i, j, new_i: a, new_j: b } } else { RecombMove { i, j, new_i: b, new_j: a } })
        .collect();
    out.sort();
    out
}

/// Every split of `union` into two connected parts with sizes in `[lo, hi]`,
/// as `(part containing min(union), rest)`.
pub fn two_way_splits(g: &Graph, union: &VertexSet, lo: usize, hi: usize) -> Vec<(VertexSet, VertexSet)> {
    let m = union.len();
    if m < 2 || lo > hi {
        return Vec::new();
    }
    let members = union.as_slice();
    let local = |v: Vertex| members.binary_search(&v).ok();
    let adj: Vec<Vec<usize>> = members
        .iter()
        .map(|&v| g.neighbors(v).iter().filter_map(|&w| local(w)).collect())
        .collect();
    let mut search = SplitSearch {
        adj: &adj,
        m,
        lo: lo.max(1),
        hi: hi.min(m - 1),
        state: vec![State::Free; m],
        queued: vec![false; m],
        inside: 0,
        outside: Vec::new(),
        found: Vec::new(),
        scratch: vec![false; m],
    };
    search.state[0] = State::In;
    search.queued[0] = true;
    search.inside = 1;
    let mut ext: Vec<usize> = Vec::new();
    for &w in &adj[0] {
        search.queued[w] = true;
        ext.push(w);
    }
    search.run(ext);
    search
        .found
        .into_iter()
        .map(|mask| {
            let (a, b): (Vec<_>, Vec<_>) = (0..m).partition(|&x| mask[x]);
            (
                VertexSet::from_vec(a.into_iter().map(|x| members[x]).collect()),
                VertexSet::from_vec(b.into_iter().map(|x| members[x]).collect()),
            )
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Free,
    In,
    Out,
}

/// Enumerates connected sets containing local vertex 0 by the
/// include/exclude rule on an extension list; each set appears once.
struct SplitSearch<'a> {
    adj: &'a [Vec<usize>],
    m: usize,
    lo: usize,
    hi: usize,
    state: Vec<State>,
    queued: Vec<bool>,
    inside: usize,
    outside: Vec<usize>,
    found: Vec<Vec<bool>>,
    scratch: Vec<bool>,
}

impl SplitSearch<'_> {
    /// Size of the component of non-`In` vertices holding all `Out` vertices,
    /// or `None` if the `Out` vertices are already separated.
    fn outside_component(&mut self) -> Option<usize> {
        let start = *self.outside.first()?;
        self.scratch.iter_mut().for_each(|x| *x = false);
        let mut stack = vec![start];
        self.scratch[start] = true;
        let mut count = 0;
        while let Some(u) = stack.pop() {
            count += 1;
            for &w in &self.adj[u] {
                if !self.scratch[w] && self.state[w] != State::In {
                    self.scratch[w] = true;
                    stack.push(w);
                }
            }
        }
        if self.outside.iter().all(|&x| self.scratch[x]) {
            Some(count)
        } else {
            None
        }
    }

    fn viable(&mut self) -> bool {
        if self.inside > self.hi || self.m - self.inside < self.lo {
            return false;
        }
        if self.outside.is_empty() {
            return true;
        }
        match self.outside_component() {
            None => false,
            Some(comp) => comp >= self.lo && self.m - comp <= self.hi,
        }
    }

    fn emit_if_valid(&mut self) {
        let rest = self.m - self.inside;
        if self.inside < self.lo || rest < self.lo || rest > self.hi || rest == 0 {
            return;
        }
        // complement must be connected
        let start = (0..self.m).find(|&x| self.state[x] != State::In).expect("nonempty rest");
        self.scratch.iter_mut().for_each(|x| *x = false);
        let mut stack = vec![start];
        self.scratch[start] = true;
        let mut count = 0;
        while let Some(u) = stack.pop() {
            count += 1;
            for &w in &self.adj[u] {
                if !self.scratch[w] && self.state[w] != State::In {
                    self.scratch[w] = true;
                    stack.push(w);
                }
            }
        }
        if count == rest {
            self.found.push(self.state.iter().map(|&s| s == State::In).collect());
        }
    }

    fn run(&mut self, ext: Vec<usize>) {
        if !self.viable() {
            return;
        }
        let Some((&v, rest)) = ext.split_first() else {
            self.emit_if_valid();
            return;
        };

        // include v
        self.state[v] = State::In;
        self.inside += 1;
        let mut grown = rest.to_vec();
        let mut added = Vec::new();
        for &w in &self.adj[v] {
            if self.state[w] == State::Free && !self.queued[w] {
                self.queued[w] = true;
                added.push(w);
                grown.push(w);
            }
        }
        self.run(grown);
        for w in added {
            self.queued[w] = false;
        }
        self.inside -= 1;

        // exclude v
        self.state[v] = State::Out;
        self.outside.push(v);
        self.run(rest.to_vec());
        self.outside.pop();
        self.state[v] = State::Free;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;
    use num_traits::Signed;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &edges).unwrap()
    }

    fn set(v: &[usize]) -> VertexSet {
        VertexSet::from_vec(v.to_vec())
    }

    fn part(ds: &[&[usize]]) -> Partition {
        Partition::from_districts(ds.iter().map(|d| set(d)).collect())
    }

    #[test]
    fn validate_examples() {
        let c6 = cycle(6);
        assert!(validate(&c6, &part(&[&[0, 1, 2], &[3, 4, 5]]), 2, SlackBound::Finite(0)).is_ok());
        let r = validate(&c6, &part(&[&[0, 1, 2, 3], &[4, 5]]), 2, SlackBound::Finite(0));
        assert_eq!(r.violations[0].to_string(), "district 0 size 4, bound |2·4−6| ≤ 0 fails");
        let c4 = cycle(4);
        let r = validate(&c4, &part(&[&[0, 2], &[1, 3]]), 2, SlackBound::Finite(0));
        let msgs: Vec<_> = r.violations.iter().map(ToString::to_string).collect();
        assert_eq!(msgs, vec!["district 0 disconnected", "district 1 disconnected"]);
    }

    #[test]
    fn validate_reports_structural_problems() {
        let c4 = cycle(4);
        let r = validate(&c4, &part(&[&[0, 1], &[1, 2]]), 3, SlackBound::Infinite);
        assert!(r.violations.contains(&Violation::DistrictCount { expected: 3, found: 2 }));
        assert!(r.violations.contains(&Violation::Overlap { vertex: 1 }));
        assert!(r.violations.contains(&Violation::Uncovered { vertex: 3 }));
        let r = validate(&c4, &part(&[&[0, 1, 2, 3], &[]]), 2, SlackBound::Infinite);
        assert_eq!(r.violations, vec![Violation::Empty { district: 1 }]);
    }

    #[test]
    fn apply_move_examples() {
        let c4 = cycle(4);
        let p = part(&[&[0, 1], &[2, 3]]);
        let m = RecombMove { i: 0, j: 1, new_i: set(&[1, 2]), new_j: set(&[0, 3]) };
        let q = apply_move(&c4, &p, &m, SlackBound::Finite(0)).unwrap();
        assert_eq!(q, part(&[&[1, 2], &[0, 3]]));

        let bad = RecombMove { i: 0, j: 1, new_i: set(&[0, 2]), new_j: set(&[1, 3]) };
        assert_eq!(apply_move(&c4, &p, &bad, SlackBound::Finite(0)), Err(MoveError::DisconnectedPart));

        let same = RecombMove { i: 0, j: 1, new_i: set(&[0, 1]), new_j: set(&[2, 3]) };
        assert_eq!(apply_move(&c4, &p, &same, SlackBound::Finite(0)), Err(MoveError::IdentityMove));
        let swap = RecombMove { i: 0, j: 1, new_i: set(&[2, 3]), new_j: set(&[0, 1]) };
        assert_eq!(apply_move(&c4, &p, &swap, SlackBound::Finite(0)), Err(MoveError::IdentityMove));

        let mismatch = RecombMove { i: 0, j: 1, new_i: set(&[0, 1, 2]), new_j: set(&[2, 3]) };
        assert_eq!(apply_move(&c4, &p, &mismatch, SlackBound::Infinite), Err(MoveError::UnionMismatch));

        let unbalanced = RecombMove { i: 0, j: 1, new_i: set(&[0, 1, 2]), new_j: set(&[3]) };
        assert_eq!(apply_move(&c4, &p, &unbalanced, SlackBound::Finite(0)), Err(MoveError::SlackViolation { size: 3 }));
        assert!(apply_move(&c4, &p, &unbalanced, SlackBound::Infinite).is_ok());
    }

    #[test]
    fn enumerate_examples() {
        let c4 = cycle(4);
        let moves = enumerate_moves(&c4, &part(&[&[0, 1], &[2, 3]]), SlackBound::Finite(0));
        assert_eq!(moves.len(), 1);
        let q = apply_move(&c4, &part(&[&[0, 1], &[2, 3]]), &moves[0], SlackBound::Finite(0)).unwrap();
        assert_eq!(q.key(), part(&[&[1, 2], &[3, 0]]).key());

        let c6 = cycle(6);
        let moves = enumerate_moves(&c6, &part(&[&[0, 1, 2], &[3, 4, 5]]), SlackBound::Finite(1));
        // two arcs of sizes {2,4} (6 ways) or {3,3} (3 ways), minus the start
        assert_eq!(moves.len(), 8);
        for m in &moves {
            assert!((2..=4).contains(&m.new_i.len()));
        }

        let k2 = Graph::new(2, &[(0, 1)]).unwrap();
        assert!(enumerate_moves(&k2, &part(&[&[0], &[1]]), SlackBound::Finite(0)).is_empty());
    }

    #[test]
    fn canonical_key_examples() {
        assert_eq!(part(&[&[2, 3], &[0, 1]]).key(), part(&[&[0, 1], &[2, 3]]).key());
        assert_ne!(part(&[&[0, 1], &[2, 3]]).key(), part(&[&[0, 3], &[1, 2]]).key());
        let k1 = part(&[&[0]]).key();
        assert_eq!(k1.districts(), vec![set(&[0])]);
        assert_eq!(k1.labels(), &[0]);
    }

    #[test]
    fn reverse_path_retraces() {
        let c6 = cycle(6);
        let start = part(&[&[0, 1, 2], &[3, 4, 5]]);
        let m = enumerate_moves(&c6, &start, SlackBound::Infinite);
        let path = vec![m[0].clone(), enumerate_moves(&c6, &apply_move(&c6, &start, &m[0], SlackBound::Infinite).unwrap(), SlackBound::Infinite)[3].clone()];
        let states = replay(&c6, &start, &path, SlackBound::Infinite).unwrap();
        let end = states.last().unwrap();
        // same end, labels swapped
        let swapped = Partition::from_districts(vec![end.district(1).clone(), end.district(0).clone()]);
        let back = reverse_path(&c6, &start, &path, &swapped).unwrap();
        let fin = replay(&c6, &swapped, &back, SlackBound::Infinite).unwrap();
        assert_eq!(fin.last().unwrap().key(), start.key());
    }

    /// Random connected graph on `n <= 8` vertices plus a random partition of it.
    fn instance() -> impl Strategy<Value = (Graph, Partition)> {
        (2usize..=8)
            .prop_flat_map(|n| {
                (
                    Just(n),
                    proptest::collection::vec(0usize..100, n - 1),
                    proptest::collection::vec((0..n, 0..n), 0..n),
                    proptest::collection::vec(0usize..100, n - 1),
                    1usize..=3,
                )
            })
            .prop_map(|(n, parents, extra, cuts, k)| {
                let tree: Vec<_> = (1..n).map(|v| (parents[v - 1] % v, v)).collect();
                let mut edges = tree.clone();
                edges.extend(extra.into_iter().filter(|(a, b)| a != b).map(|(a, b)| (a.min(b), a.max(b))));
                edges.sort_unstable();
                edges.dedup();
                let g = Graph::new(n, &edges).unwrap();
                // cut k-1 distinct tree edges
                let k = k.min(n);
                let mut removed = BTreeSet::new();
                for c in cuts {
                    if removed.len() + 1 >= k {
                        break;
                    }
                    removed.insert(c % (n - 1));
                }
                let kept: Vec<_> = tree.iter().enumerate().filter(|(i, _)| !removed.contains(i)).map(|(_, &e)| e).collect();
                let forest = Graph::new(n, &kept).unwrap();
                let comps = forest.connected_components(&forest.vertices()).unwrap();
                (g, Partition::from_districts(comps))
            })
    }

    fn brute_neighbors(g: &Graph, p: &Partition, slack: SlackBound) -> BTreeSet<PartitionKey> {
        let mut out = BTreeSet::new();
        let k = p.k();
        for i in 0..k {
            for j in (i + 1)..k {
                let u = p.district(i).union(p.district(j));
                let members = u.as_slice();
                for mask in 0u32..(1 << members.len()) {
                    let a: VertexSet = members.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &v)| v).collect();
                    let b = u.difference(&a);
                    let m = RecombMove { i, j, new_i: a, new_j: b };
                    if let Ok(q) = apply_move(g, p, &m, slack) {
                        if validate(g, &q, k, slack).is_ok() {
                            out.insert(q.key());
                        }
                    }
                }
            }
        }
        out
    }

    proptest! {
        #[test]
        fn enumeration_is_sound_and_complete((g, p) in instance(), s in 0u64..4, inf in any::<bool>()) {
            let slack = if inf { SlackBound::Infinite } else { SlackBound::Finite(s) };
            let k = p.k();
            prop_assume!(validate(&g, &p, k, slack).is_ok());
            let moves = enumerate_moves(&g, &p, slack);
            let mut keys = BTreeSet::new();
            for m in &moves {
                let q = apply_move(&g, &p, m, slack).unwrap();
                prop_assert!(validate(&g, &q, k, slack).is_ok());
                prop_assert!(keys.insert(q.key()), "duplicate result");
            }
            {
                prop_assert_eq!(&keys, &brute_neighbors(&g, &p, slack));
                // symmetry: every neighbor can move back
                for m in &moves {
                    let q = apply_move(&g, &p, m, slack).unwrap();
                    let back: BTreeSet<_> = enumerate_moves(&g, &q, slack)
                        .iter()
                        .map(|m2| apply_move(&g, &q, m2, slack).unwrap().key())
                        .collect();
                    prop_assert!(back.contains(&p.key()));
                }
            }
        }

        #[test]
        fn slack_test_matches_rational_comparison(n in 1usize..200, k in 1usize..20, size in 0usize..200, s in 0u64..50) {
            let exact = (Ratio::from_integer(size as i64) - Ratio::new(n as i64, k as i64)).abs() <= Ratio::from_integer(s as i64);
            prop_assert_eq!(SlackBound::Finite(s).admits(size, n, k), exact);
            let (lo, hi) = SlackBound::Finite(s).size_range(n, k);
            if size >= 1 && size <= n {
                prop_assert_eq!(exact, size >= lo && size <= hi);
            }
        }

        #[test]
        fn key_is_label_invariant((_g, p) in instance(), rot in 0usize..3) {
            let mut ds = p.districts().to_vec();
            let len = ds.len();
            ds.rotate_left(rot % len);
            prop_assert_eq!(Partition::from_districts(ds).key(), p.key());
        }
    }
}
