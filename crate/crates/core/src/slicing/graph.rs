use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::model::{Domain, Model, TagId};

/// Undirected simple graph over variables `0..num_nodes`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionGraph {
    num_nodes: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl InteractionGraph {
    /// Edges are normalized to `(min, max)`; self-loops are rejected.
    pub fn new(num_nodes: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::Validation(format!("self-loop on node {u}")));
            }
            if u >= num_nodes || v >= num_nodes {
                return Err(Error::Validation(format!("edge ({u}, {v}) out of range")));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Self {
            num_nodes,
            edges: set,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.num_nodes];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn without_edges(&self, removed: &BTreeSet<(usize, usize)>) -> Self {
        Self {
            num_nodes: self.num_nodes,
            edges: self.edges.difference(removed).copied().collect(),
        }
    }
}

/// Graph of quadratic terms whose tag is not excluded.
pub fn build_interaction_graph<D: Domain>(
    model: &Model<D>,
    excluded_tags: &BTreeSet<TagId>,
) -> Result<InteractionGraph> {
    if let Some(tag) = excluded_tags.iter().find(|t| !model.has_tag(t)) {
        return Err(Error::UnknownTag(tag.clone()));
    }
    InteractionGraph::new(model.num_vars(), model.interacting_pairs(excluded_tags))
}

/// Maximal connected node sets, each sorted, ordered by smallest member.
pub fn connected_components(g: &InteractionGraph) -> Vec<Vec<usize>> {
    let adj = g.adjacency();
    let mut seen = vec![false; g.num_nodes()];
    let mut components = Vec::new();
    for start in 0..g.num_nodes() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut comp = Vec::new();
        while let Some(u) = queue.pop_front() {
            comp.push(u);
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }
    components
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::QuboModel;

    #[test]
    fn components_of_small_graphs() {
        let g = InteractionGraph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(connected_components(&g), vec![vec![0, 1], vec![2, 3]]);
        let g = InteractionGraph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(connected_components(&g), vec![vec![0, 1, 2]]);
        let g = InteractionGraph::new(3, [(0, 2)]).unwrap();
        assert_eq!(connected_components(&g), vec![vec![0, 2], vec![1]]);
    }

    #[test]
    fn empty_model_gives_empty_graph() {
        let m = QuboModel::new(0);
        let g = build_interaction_graph(&m, &BTreeSet::new()).unwrap();
        assert_eq!(g.num_nodes(), 0);
        assert!(g.edges().is_empty());
        assert!(connected_components(&g).is_empty());
    }

    #[test]
    fn unknown_excluded_tag() {
        let m = QuboModel::new(2);
        let excluded = BTreeSet::from([TagId::Coupling]);
        assert!(matches!(
            build_interaction_graph(&m, &excluded),
            Err(Error::UnknownTag(TagId::Coupling))
        ));
    }
}
