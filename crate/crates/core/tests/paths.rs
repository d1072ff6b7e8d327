mod common;

use std::collections::BTreeSet;

use comsat::instance::{example_plant, Edge, Graph, NodeId};
use comsat::paths::{k_shortest_paths, pathfinder, PathFinder, PathTable};
use comsat::StageResult;
use proptest::prelude::*;

use common::{all_selections, brute_min_hops, fake_path, hops_of};

fn graph(n: NodeId, edges: &[(NodeId, NodeId, i64)]) -> Graph {
    let es = edges
        .iter()
        .flat_map(|&(u, v, len)| {
            [
                Edge { source: u, sink: v, length: len, capacity: 1 },
                Edge { source: v, sink: u, length: len, capacity: 1 },
            ]
        })
        .collect::<Vec<_>>();
    Graph::new(1..=n, es, 1, Default::default()).unwrap()
}

/// Every simple path from `src` to `dst` as (length, nodes), sorted.
fn brute_simple_paths(g: &Graph, src: NodeId, dst: NodeId) -> Vec<(i64, Vec<NodeId>)> {
    fn go(g: &Graph, at: NodeId, dst: NodeId, path: &mut Vec<NodeId>, len: i64, out: &mut Vec<(i64, Vec<NodeId>)>) {
        if at == dst {
            out.push((len, path.clone()));
            return;
        }
        for e in g.out_edges(at) {
            if !path.contains(&e.sink) {
                path.push(e.sink);
                go(g, e.sink, dst, path, len + e.length, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(g, src, dst, &mut vec![src], 0, &mut out);
    out.sort();
    out
}

#[test]
fn triangle_paths() {
    let g = graph(3, &[(1, 2, 1), (2, 3, 1), (1, 3, 1)]);
    let ps = k_shortest_paths(&g, 1, 2, 5);
    let got: Vec<_> = ps.iter().map(|p| p.nodes.clone()).collect();
    assert_eq!(got, vec![vec![1, 2], vec![1, 3, 2]]);
    assert!(k_shortest_paths(&g, 1, 2, 0).is_empty());
}

#[test]
fn plant_first_path_between_depot_neighbours() {
    let inst = example_plant();
    let ps = k_shortest_paths(&inst.graph, 19, 18, 1);
    assert_eq!(ps.len(), 1);
    assert_eq!(ps[0].nodes, vec![19, 18]);
    assert!(ps[0].is_simple());
}

#[test]
fn plant_table_covers_every_location_pair() {
    let inst = example_plant();
    let locs = inst.task_locations();
    let table = PathTable::enumerate(&inst, 3);
    assert_eq!(table.pairs.len(), locs.len() * (locs.len() - 1));
    for (q, c) in table.candidates.iter().enumerate() {
        let (a, b) = table.pairs[q];
        assert!(!c.is_empty() && c.len() <= 3);
        assert!(c.iter().all(|p| p.source() == a && p.sink() == b && p.is_simple()));
        assert!(c.windows(2).all(|w| w[0].length <= w[1].length));
    }
}

#[test]
fn single_combination_then_infeasible() {
    let table = PathTable::from_candidates(
        vec![((1, 2), vec![fake_path(2, 1)]), ((2, 1), vec![fake_path(2, 1)])],
        1,
    );
    let mut finder = PathFinder::new(table);
    let first = finder.next(None).feasible().unwrap();
    assert_eq!(first.selection, vec![0, 0]);
    assert_eq!(first.total_hops, 4);
    assert!(matches!(finder.next(None), StageResult::Infeasible));
    assert_eq!(finder.calls(), 2);
}

#[test]
fn empty_pair_means_no_combination() {
    let table = PathTable::from_candidates(vec![((1, 2), vec![fake_path(2, 1)]), ((2, 1), vec![])], 2);
    assert!(table.shortest_combination_if_complete().is_none());
    assert!(matches!(pathfinder(&table, &vec![]), StageResult::Infeasible));
}

#[test]
fn used_combinations_are_skipped() {
    let table = PathTable::from_candidates(
        vec![((1, 2), vec![fake_path(2, 1), fake_path(3, 2)]), ((2, 1), vec![fake_path(2, 1), fake_path(4, 3)])],
        2,
    );
    let used = vec![table.shortest_combination()];
    let next = pathfinder(&table, &used).feasible().unwrap();
    assert_eq!(next.selection, vec![1, 0]);
    assert_eq!(next.total_hops, 5);
}

#[test]
fn dominated_combinations_are_skipped() {
    let table = PathTable::from_candidates(
        vec![
            ((1, 2), vec![fake_path(2, 1), fake_path(3, 2)]),
            ((2, 1), vec![fake_path(2, 1), fake_path(3, 2)]),
        ],
        2,
    );
    let mut finder = PathFinder::new(table.clone());
    let first = finder.next(None).feasible().unwrap();
    finder.block_dominated(&first);
    // every combination is at least as long as the shortest one
    assert!(matches!(finder.next(None), StageResult::Infeasible));

    let mut finder = PathFinder::new(table.clone());
    finder.block_dominated(&table.combination(vec![1, 0]));
    let mut seen = BTreeSet::new();
    while let StageResult::Feasible(c) = finder.next(None) {
        seen.insert(c.selection);
    }
    assert_eq!(seen, BTreeSet::from([vec![0, 0], vec![0, 1]]));
}

fn table_strategy() -> impl Strategy<Value = PathTable> {
    prop::collection::vec(prop::collection::vec((2usize..7, 1i64..20), 1..=3), 1..=6).prop_map(|pairs| {
        let cands = pairs
            .into_iter()
            .enumerate()
            .map(|(q, c)| {
                let q = q as NodeId;
                ((q, q + 100), c.into_iter().map(|(h, l)| fake_path(h, l)).collect())
            })
            .collect();
        PathTable::from_candidates(cands, 3)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn finder_is_optimal_and_enumerates_all(table in table_strategy()) {
        let mut finder = PathFinder::new(table.clone());
        let total = all_selections(&table).len();
        let mut seen = BTreeSet::new();
        let mut last = i64::MIN;
        while let StageResult::Feasible(c) = finder.next(None) {
            if seen.is_empty() {
                prop_assert_eq!(c.total_hops, brute_min_hops(&table));
            }
            prop_assert_eq!(c.total_hops, hops_of(&table, &c.selection));
            prop_assert!(c.total_hops >= last);
            // the remaining minimum is what was returned
            let rest = all_selections(&table)
                .into_iter()
                .filter(|s| !seen.contains(s))
                .map(|s| hops_of(&table, &s))
                .min()
                .unwrap();
            prop_assert_eq!(c.total_hops, rest);
            last = c.total_hops;
            prop_assert!(seen.insert(c.selection));
        }
        prop_assert_eq!(seen.len(), total);
    }

    #[test]
    fn yen_matches_brute_enumeration(
        n in 3u32..7,
        extra in prop::collection::vec((1u32..7, 1u32..7, 1i64..5), 0..8),
        k in 1usize..6,
    ) {
        let mut edges: Vec<(NodeId, NodeId, i64)> = (1..n).map(|i| (i, i + 1, 1 + (i as i64 % 3))).collect();
        for (u, v, len) in extra {
            let (u, v) = (u.min(n), v.min(n));
            if u != v && !edges.iter().any(|&(a, b, _)| (a, b) == (u, v) || (a, b) == (v, u)) {
                edges.push((u, v, len));
            }
        }
        let g = graph(n, &edges);
        let brute = brute_simple_paths(&g, 1, n);
        let got: Vec<(i64, Vec<NodeId>)> = k_shortest_paths(&g, 1, n, k)
            .into_iter()
            .map(|p| (p.length, p.nodes))
            .collect();
        prop_assert_eq!(got.len(), k.min(brute.len()));
        let mut distinct = BTreeSet::new();
        for (i, (len, nodes)) in got.iter().enumerate() {
            prop_assert!(distinct.insert(nodes.clone()));
            // the i-th returned length is the i-th smallest simple-path length
            prop_assert_eq!(*len, brute[i].0);
            prop_assert!(brute.contains(&(*len, nodes.clone())));
        }
    }
}
