//! Interaction graphs and classically separable decompositions.

mod bridges;
mod decompose;
mod graph;

pub use bridges::find_bridges;
pub use decompose::{
    decompose, decompose_by_edge_cut, slices_identical, Slice, SliceDecomposition,
};
pub use graph::{build_interaction_graph, connected_components, InteractionGraph};
