//! Incremental difference-logic consistency over integer variables.
//!
//! An active constraint `x - y <= k` is stored as an edge `y -> x` with weight `k`.
//! The graph keeps a potential `pi` with `pi[t] <= pi[s] + w` for every active
//! edge; adding an edge repairs the potential with a Dijkstra pass over reduced
//! costs and reports the edges of a negative cycle when no repair exists.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::Lit;

#[derive(Debug, Clone, Copy)]
struct Edge {
    source: u32,
    target: u32,
    weight: i64,
    lit: Lit,
    trail_index: usize,
}

#[derive(Debug, Default)]
pub(crate) struct DiffGraph {
    pi: Vec<i64>,
    out: Vec<Vec<u32>>,
    edges: Vec<Edge>,
    // scratch, sized like `pi`
    gamma: Vec<i64>,
    pred: Vec<u32>,
    done: Vec<bool>,
    touched: Vec<u32>,
}

impl DiffGraph {
    pub(crate) fn ensure_nodes(&mut self, n: usize) {
        if self.pi.len() < n {
            self.pi.resize(n, 0);
            self.out.resize_with(n, Vec::new);
            self.gamma.resize(n, 0);
            self.pred.resize(n, u32::MAX);
            self.done.resize(n, false);
        }
    }

    /// Adds `target <= source + weight`. On inconsistency the edge is not kept
    /// and the literals of the negative cycle (including `lit`) are returned.
    pub(crate) fn add(
        &mut self,
        source: u32,
        target: u32,
        weight: i64,
        lit: Lit,
        trail_index: usize,
    ) -> Result<(), Vec<Lit>> {
        let id = self.edges.len() as u32;
        self.edges.push(Edge {
            source,
            target,
            weight,
            lit,
            trail_index,
        });
        self.out[source as usize].push(id);

        let (s, t) = (source as usize, target as usize);
        if self.pi[t] <= self.pi[s] + weight {
            return Ok(());
        }
        if s == t {
            // self loop with negative weight
            self.edges.pop();
            self.out[s].pop();
            return Err(vec![lit]);
        }

        let mut heap = BinaryHeap::new();
        self.gamma[t] = self.pi[s] + weight - self.pi[t];
        self.pred[t] = id;
        self.touched.push(target);
        heap.push(Reverse((self.gamma[t], target)));

        let mut cycle = None;
        'outer: while let Some(Reverse((g, x))) = heap.pop() {
            let xi = x as usize;
            if self.done[xi] || g != self.gamma[xi] {
                continue;
            }
            self.done[xi] = true;
            let new_pi = self.pi[xi] + g;
            for &e in &self.out[xi] {
                let edge = self.edges[e as usize];
                let z = edge.target as usize;
                if self.done[z] {
                    continue;
                }
                let ng = new_pi + edge.weight - self.pi[z];
                if ng < 0 && ng < self.gamma[z] {
                    if self.gamma[z] == 0 {
                        self.touched.push(edge.target);
                    }
                    self.gamma[z] = ng;
                    self.pred[z] = e;
                    if z == s {
                        cycle = Some(());
                        break 'outer;
                    }
                    heap.push(Reverse((ng, edge.target)));
                }
            }
        }

        if cycle.is_some() {
            let mut lits = Vec::new();
            let mut cur = s;
            loop {
                let e = self.pred[cur];
                let edge = self.edges[e as usize];
                lits.push(edge.lit);
                if e == id {
                    break;
                }
                cur = edge.source as usize;
            }
            self.clear_scratch(false);
            self.edges.pop();
            self.out[s].pop();
            return Err(lits);
        }
        self.clear_scratch(true);
        Ok(())
    }

    fn clear_scratch(&mut self, commit: bool) {
        for &x in &self.touched {
            let xi = x as usize;
            if commit && self.done[xi] {
                self.pi[xi] += self.gamma[xi];
            }
            self.gamma[xi] = 0;
            self.done[xi] = false;
            self.pred[xi] = u32::MAX;
        }
        self.touched.clear();
    }

    /// Drops every edge created by a trail entry at or beyond `trail_len`.
    pub(crate) fn backtrack(&mut self, trail_len: usize) {
        while let Some(edge) = self.edges.last() {
            if edge.trail_index < trail_len {
                break;
            }
            self.out[edge.source as usize].pop();
            self.edges.pop();
        }
    }

    /// Pointwise least assignment with `zero` pinned to 0, or `None` for
    /// variables without a lower bound relative to `zero`.
    pub(crate) fn least_solution(&self, zero: usize) -> Vec<Option<i64>> {
        let n = self.pi.len();
        // Reverse every edge and run Bellman-Ford (queue based) from `zero`.
        let mut rev: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
        for e in &self.edges {
            rev[e.target as usize].push((e.source as usize, e.weight));
        }
        let mut dist: Vec<Option<i64>> = vec![None; n];
        let mut in_queue = vec![false; n];
        let mut queue = std::collections::VecDeque::new();
        dist[zero] = Some(0);
        queue.push_back(zero);
        in_queue[zero] = true;
        while let Some(u) = queue.pop_front() {
            in_queue[u] = false;
            let du = dist[u].expect("queued node has a distance");
            for &(v, w) in &rev[u] {
                let cand = du + w;
                if dist[v].is_none_or(|dv| cand < dv) {
                    dist[v] = Some(cand);
                    if !in_queue[v] {
                        in_queue[v] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        dist.into_iter().map(|d| d.map(|d| -d)).collect()
    }

    #[cfg(test)]
    pub(crate) fn active_edges(&self) -> usize {
        self.edges.len()
    }
}
