use super::InteractionGraph;

/// Edges whose removal increases the number of connected components,
/// found with an iterative depth-first low-link pass. Sorted, `(min, max)`.
pub fn find_bridges(g: &InteractionGraph) -> Vec<(usize, usize)> {
    let adj = g.adjacency();
    let n = g.num_nodes();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut timer = 0;
    let mut bridges = Vec::new();

    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        // (node, parent, next neighbour position)
        let mut stack = vec![(root, usize::MAX, 0usize)];
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        while let Some(top) = stack.last_mut() {
            let (u, parent) = (top.0, top.1);
            let next = adj[u].get(top.2).copied();
            top.2 += 1;
            if let Some(v) = next {
                if v == parent {
                    continue;
                }
                if disc[v] == usize::MAX {
                    disc[v] = timer;
                    low[v] = timer;
                    timer += 1;
                    stack.push((v, u, 0));
                } else {
                    low[u] = low[u].min(disc[v]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[u]);
                    if low[u] > disc[parent] {
                        bridges.push((parent.min(u), parent.max(u)));
                    }
                }
            }
        }
    }
    bridges.sort_unstable();
    bridges
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slicing::connected_components;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn remove_and_test(g: &InteractionGraph) -> Vec<(usize, usize)> {
        let base = connected_components(g).len();
        g.edges()
            .iter()
            .copied()
            .filter(|&e| connected_components(&g.without_edges(&BTreeSet::from([e]))).len() > base)
            .collect()
    }

    #[test]
    fn small_cases() {
        let tri = InteractionGraph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(find_bridges(&tri).is_empty());
        let path = InteractionGraph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(find_bridges(&path), vec![(0, 1), (1, 2)]);
    }

    proptest! {
        #[test]
        fn matches_remove_and_test(
            n in 1usize..8,
            raw in proptest::collection::vec((0usize..8, 0usize..8), 0..=12),
        ) {
            let edges: BTreeSet<(usize, usize)> = raw
                .into_iter()
                .map(|(u, v)| (u % n, v % n))
                .filter(|(u, v)| u != v)
                .map(|(u, v)| (u.min(v), u.max(v)))
                .collect();
            let g = InteractionGraph::new(n, edges).unwrap();
            prop_assert_eq!(find_bridges(&g), remove_and_test(&g));
        }
    }
}
