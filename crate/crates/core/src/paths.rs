//! Candidate paths between task locations and the path-combination search.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::time::Instant;

use rayon::prelude::*;

use crate::backend::{BoolVar, Context, LinExpr, Lit, Outcome};
use crate::instance::{Edge, Graph, Instance, NodeId};
use crate::StageResult;

/// A simple path.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    pub nodes: Vec<NodeId>,
    pub edges: Vec<Edge>,
    /// sum of edge lengths
    pub length: i64,
}

impl Path {
    fn from_nodes(graph: &Graph, nodes: Vec<NodeId>) -> Path {
        let edges: Vec<Edge> = nodes
            .windows(2)
            .map(|w| *graph.edge(w[0], w[1]).expect("consecutive nodes are adjacent"))
            .collect();
        let length = edges.iter().map(|e| e.length).sum();
        Path {
            nodes,
            edges,
            length,
        }
    }

    /// Number of nodes on the path.
    pub fn hops(&self) -> i64 {
        self.nodes.len() as i64
    }

    pub fn source(&self) -> NodeId {
        self.nodes[0]
    }

    pub fn sink(&self) -> NodeId {
        *self.nodes.last().expect("non-empty path")
    }

    pub fn is_simple(&self) -> bool {
        let set: BTreeSet<_> = self.nodes.iter().collect();
        set.len() == self.nodes.len()
    }
}

/// Shortest path from `src` to `dst` avoiding `banned_nodes` and
/// `banned_edges`; among shortest paths the lexicographically smallest node
/// sequence.
fn shortest_lex(
    graph: &Graph,
    src: NodeId,
    dst: NodeId,
    banned_nodes: &BTreeSet<NodeId>,
    banned_edges: &BTreeSet<(NodeId, NodeId)>,
) -> Option<Vec<NodeId>> {
    if banned_nodes.contains(&src) || banned_nodes.contains(&dst) {
        return None;
    }
    // distances to dst over reversed edges
    let mut incoming: BTreeMap<NodeId, Vec<&Edge>> = BTreeMap::new();
    for e in graph.edges() {
        incoming.entry(e.sink).or_default().push(e);
    }
    let usable = |e: &Edge| {
        !banned_nodes.contains(&e.source)
            && !banned_nodes.contains(&e.sink)
            && !banned_edges.contains(&(e.source, e.sink))
    };
    let mut dist: BTreeMap<NodeId, i64> = BTreeMap::new();
    let mut heap = BinaryHeap::new();
    dist.insert(dst, 0);
    heap.push(Reverse((0i64, dst)));
    while let Some(Reverse((d, n))) = heap.pop() {
        if dist.get(&n).is_some_and(|&best| d > best) {
            continue;
        }
        for e in incoming.get(&n).into_iter().flatten() {
            if !usable(e) {
                continue;
            }
            let nd = d + e.length;
            if dist.get(&e.source).is_none_or(|&old| nd < old) {
                dist.insert(e.source, nd);
                heap.push(Reverse((nd, e.source)));
            }
        }
    }
    dist.get(&src)?;
    let mut path = vec![src];
    let mut cur = src;
    while cur != dst {
        let here = dist[&cur];
        let next = graph
            .out_edges(cur)
            .filter(|e| usable(e))
            .filter(|e| dist.get(&e.sink).is_some_and(|&d| d + e.length == here))
            .map(|e| e.sink)
            .min()
            .expect("a shortest-path successor exists");
        path.push(next);
        cur = next;
    }
    Some(path)
}

/// The `k` shortest simple paths from `src` to `dst`, ordered by length and
/// then lexicographically by node sequence.
pub fn k_shortest_paths(graph: &Graph, src: NodeId, dst: NodeId, k: usize) -> Vec<Path> {
    if k == 0 {
        return Vec::new();
    }
    let Some(first) = shortest_lex(graph, src, dst, &BTreeSet::new(), &BTreeSet::new()) else {
        return Vec::new();
    };
    let mut accepted: Vec<Path> = vec![Path::from_nodes(graph, first)];
    let mut candidates: BTreeSet<(i64, Vec<NodeId>)> = BTreeSet::new();
    while accepted.len() < k {
        let prev = accepted.last().expect("non-empty").nodes.clone();
        for i in 0..prev.len() - 1 {
            let root = &prev[..=i];
            let spur = prev[i];
            let mut banned_edges = BTreeSet::new();
            for p in &accepted {
                if p.nodes.len() > i + 1 && &p.nodes[..=i] == root {
                    banned_edges.insert((p.nodes[i], p.nodes[i + 1]));
                }
            }
            let banned_nodes: BTreeSet<NodeId> = root[..i].iter().copied().collect();
            if let Some(tail) = shortest_lex(graph, spur, dst, &banned_nodes, &banned_edges) {
                let mut nodes = root[..i].to_vec();
                nodes.extend(tail);
                let p = Path::from_nodes(graph, nodes);
                if !accepted.iter().any(|a| a.nodes == p.nodes) {
                    candidates.insert((p.length, p.nodes));
                }
            }
        }
        match candidates.pop_first() {
            Some((_, nodes)) => accepted.push(Path::from_nodes(graph, nodes)),
            None => break,
        }
    }
    accepted
}

/// Candidate paths for every ordered pair of distinct task locations.
#[derive(Debug, Clone)]
pub struct PathTable {
    pub pairs: Vec<(NodeId, NodeId)>,
    pub candidates: Vec<Vec<Path>>,
    pub max_paths: usize,
}

impl PathTable {
    pub fn enumerate(inst: &Instance, max_paths: usize) -> PathTable {
        let locs = inst.task_locations();
        let pairs: Vec<(NodeId, NodeId)> = locs
            .iter()
            .flat_map(|&a| locs.iter().filter(move |&&b| b != a).map(move |&b| (a, b)))
            .collect();
        let candidates = pairs
            .par_iter()
            .map(|&(a, b)| k_shortest_paths(&inst.graph, a, b, max_paths))
            .collect();
        PathTable {
            pairs,
            candidates,
            max_paths,
        }
    }

    pub fn from_candidates(candidates: Vec<((NodeId, NodeId), Vec<Path>)>, max_paths: usize) -> Self {
        let (pairs, candidates) = candidates.into_iter().unzip();
        PathTable {
            pairs,
            candidates,
            max_paths,
        }
    }

    pub fn pair_index(&self, a: NodeId, b: NodeId) -> Option<usize> {
        self.pairs.iter().position(|&p| p == (a, b))
    }

    /// Number of distinct combinations.
    pub fn combination_count(&self) -> u128 {
        self.candidates
            .iter()
            .map(|c| c.len() as u128)
            .try_fold(1u128, |acc, n| acc.checked_mul(n))
            .unwrap_or(u128::MAX)
    }

    /// Combination picking candidate 0 everywhere.
    pub fn shortest_combination(&self) -> PathCombination {
        self.combination(vec![0; self.pairs.len()])
    }

    /// The shortest combination, if every pair has a candidate.
    pub fn shortest_combination_if_complete(&self) -> Option<PathCombination> {
        self.candidates
            .iter()
            .all(|c| !c.is_empty())
            .then(|| self.shortest_combination())
    }

    pub fn combination(&self, selection: Vec<usize>) -> PathCombination {
        let total_hops = selection
            .iter()
            .zip(&self.candidates)
            .map(|(&r, c)| c[r].hops())
            .sum();
        let paths = self
            .pairs
            .iter()
            .zip(&selection)
            .zip(&self.candidates)
            .map(|((&q, &r), c)| (q, c[r].clone()))
            .collect();
        PathCombination {
            selection,
            total_hops,
            paths,
        }
    }
}

/// One chosen path per pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathCombination {
    /// candidate index per pair, aligned with [`PathTable::pairs`]
    pub selection: Vec<usize>,
    pub total_hops: i64,
    paths: BTreeMap<(NodeId, NodeId), Path>,
}

impl PathCombination {
    pub fn path(&self, a: NodeId, b: NodeId) -> Option<&Path> {
        self.paths.get(&(a, b))
    }

    /// Metric distance along the selected path; 0 when `a == b`.
    pub fn distance(&self, a: NodeId, b: NodeId) -> i64 {
        if a == b {
            0
        } else {
            self.paths
                .get(&(a, b))
                .map(|p| p.length)
                .expect("pair covered by the combination")
        }
    }
}

/// Previously returned combinations.
pub type UsedPaths = Vec<PathCombination>;

/// Incremental path-combination search: every call returns the cheapest
/// combination (by total node count) not returned before.
pub struct PathFinder {
    ctx: Context,
    vars: Vec<Vec<BoolVar>>,
    table: PathTable,
    calls: usize,
}

impl PathFinder {
    pub fn new(table: PathTable) -> Self {
        let mut ctx = Context::new();
        let mut vars = Vec::with_capacity(table.pairs.len());
        let mut objective = LinExpr::default();
        for (q, cands) in table.candidates.iter().enumerate() {
            let (a, b) = table.pairs[q];
            let vs: Vec<BoolVar> = (0..cands.len())
                .map(|r| ctx.new_bool(format!("path_{a}_{b}_{r}")))
                .collect();
            let lits: Vec<Lit> = vs.iter().map(|&v| v.into()).collect();
            if let Ok(c) = Context::exactly_one(&lits) {
                ctx.assert(c);
            } else {
                // no candidate: pair unreachable, so no combination exists
                let f = !ctx.true_lit();
                ctx.assert_lit(f);
            }
            for (r, &v) in vs.iter().enumerate() {
                ctx.set_phase(v, r == 0);
                let hops = cands[r].hops();
                objective = objective + ctx.ite(v.into(), LinExpr::constant(hops), LinExpr::constant(0)).expect("constant branches");
            }
            vars.push(vs);
        }
        ctx.minimize(objective);
        PathFinder {
            ctx,
            vars,
            table,
            calls: 0,
        }
    }

    pub fn table(&self) -> &PathTable {
        &self.table
    }

    pub fn calls(&self) -> usize {
        self.calls
    }

    /// Rules out a combination.
    pub fn block(&mut self, comb: &PathCombination) {
        let clause: Vec<Lit> = comb
            .selection
            .iter()
            .enumerate()
            .map(|(q, &r)| !Lit::from(self.vars[q][r]))
            .collect();
        self.ctx.assert(Context::clause(clause));
    }

    /// Rules out `comb` and every combination whose paths are all at least as
    /// long, pair by pair.
    pub fn block_dominated(&mut self, comb: &PathCombination) {
        let mut clause = Vec::new();
        for (q, &r) in comb.selection.iter().enumerate() {
            let cands = &self.table.candidates[q];
            let len = cands[r].length;
            clause.extend(
                cands
                    .iter()
                    .zip(&self.vars[q])
                    .filter(|(p, _)| p.length < len)
                    .map(|(_, &v)| Lit::from(v)),
            );
        }
        self.ctx.assert(Context::clause(clause));
    }

    pub fn next(&mut self, deadline: Option<Instant>) -> StageResult<PathCombination> {
        self.calls += 1;
        self.ctx.set_deadline(deadline);
        let outcome = self.ctx.check_minimize().expect("pseudo-boolean objective");
        match outcome {
            Outcome::Sat(model) => {
                // blocking only removes combinations, so the optimum never drops
                self.ctx.set_objective_floor(model.objective);
                let selection: Vec<usize> = self
                    .vars
                    .iter()
                    .map(|vs| {
                        vs.iter()
                            .position(|&v| model.bool(v))
                            .expect("exactly one path per pair")
                    })
                    .collect();
                let comb = self.table.combination(selection);
                self.block(&comb);
                StageResult::Feasible(comb)
            }
            Outcome::Unsat => StageResult::Infeasible,
            Outcome::Timeout => StageResult::Timeout,
        }
    }
}

/// One-shot search: the cheapest combination of `table` not in `used`.
pub fn pathfinder(table: &PathTable, used: &UsedPaths) -> StageResult<PathCombination> {
    let mut finder = PathFinder::new(table.clone());
    for comb in used {
        finder.block(comb);
    }
    finder.next(None)
}
