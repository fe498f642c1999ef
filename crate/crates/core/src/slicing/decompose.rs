use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    ising_to_qubo, Assignment, Domain, IsingModel, Model, QuboModel, TagId, TermGroup,
};

use super::{build_interaction_graph, connected_components, InteractionGraph};

/// One classically separable sub-model and its variables in global numbering.
#[derive(Debug, Clone, PartialEq)]
pub struct Slice {
    pub model: QuboModel,
    /// `index_map[local] = global`, strictly increasing.
    pub index_map: Vec<usize>,
}

impl Slice {
    pub fn num_vars(&self) -> usize {
        self.index_map.len()
    }

    /// Restrict a global assignment to this slice.
    pub fn restrict(&self, x: &Assignment) -> Assignment {
        Assignment::from_bits(self.index_map.iter().map(|&g| x.bits()[g]).collect())
    }

    /// Gather this slice's bits from a global basis index.
    pub fn gather(&self, global: u64) -> u64 {
        self.index_map
            .iter()
            .enumerate()
            .fold(0, |z, (k, &g)| z | ((global >> g & 1) << k))
    }

    /// Scatter local bits into global positions.
    pub fn scatter(&self, local: u64) -> u64 {
        self.index_map
            .iter()
            .enumerate()
            .fold(0, |z, (k, &g)| z | ((local >> k & 1) << g))
    }
}

/// Residual term groups plus `k` slices over disjoint variable sets.
///
/// For every assignment `x`,
/// `Σ_a E(slice_a, x|_a) + E(residual, x) = E(source, x)`.
///
/// Serialized as `{source, residual, slices[], index_maps[]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DecompositionFile", into = "DecompositionFile")]
pub struct SliceDecomposition {
    source: QuboModel,
    residual: QuboModel,
    slices: Vec<Slice>,
}

#[derive(Serialize, Deserialize)]
struct DecompositionFile {
    source: QuboModel,
    residual: QuboModel,
    slices: Vec<QuboModel>,
    index_maps: Vec<Vec<usize>>,
}

impl From<SliceDecomposition> for DecompositionFile {
    fn from(d: SliceDecomposition) -> Self {
        let index_maps = d.index_maps();
        DecompositionFile {
            source: d.source,
            residual: d.residual,
            slices: d.slices.into_iter().map(|s| s.model).collect(),
            index_maps,
        }
    }
}

impl TryFrom<DecompositionFile> for SliceDecomposition {
    type Error = Error;

    fn try_from(f: DecompositionFile) -> Result<Self> {
        if f.slices.len() != f.index_maps.len() {
            return Err(Error::Arity {
                expected: f.slices.len(),
                got: f.index_maps.len(),
            });
        }
        let mut seen = vec![false; f.source.num_vars()];
        let mut slices = Vec::with_capacity(f.slices.len());
        for (model, index_map) in f.slices.into_iter().zip(f.index_maps) {
            if model.num_vars() != index_map.len() {
                return Err(Error::Dimension {
                    expected: model.num_vars(),
                    got: index_map.len(),
                });
            }
            for &g in &index_map {
                if g >= seen.len() || std::mem::replace(&mut seen[g], true) {
                    return Err(Error::Validation(format!("index map entry {g} invalid or shared")));
                }
            }
            slices.push(Slice { model, index_map });
        }
        if f.residual.num_vars() != f.source.num_vars() {
            return Err(Error::Dimension {
                expected: f.source.num_vars(),
                got: f.residual.num_vars(),
            });
        }
        Ok(SliceDecomposition {
            source: f.source,
            residual: f.residual,
            slices,
        })
    }
}

impl SliceDecomposition {
    pub fn source(&self) -> &QuboModel {
        &self.source
    }

    /// Full-width model holding only the classically evaluated groups.
    pub fn residual(&self) -> &QuboModel {
        &self.residual
    }

    pub fn slices(&self) -> &[Slice] {
        &self.slices
    }

    pub fn k(&self) -> usize {
        self.slices.len()
    }

    pub fn index_maps(&self) -> Vec<Vec<usize>> {
        self.slices.iter().map(|s| s.index_map.clone()).collect()
    }

    /// `Σ_a E_slice + E_residual`, evaluated part by part.
    pub fn reconstruct_energy(&self, x: &Assignment) -> Result<f64> {
        let mut e = self.residual.evaluate(x)?;
        for s in &self.slices {
            e += s.model.evaluate(&s.restrict(x))?;
        }
        Ok(e)
    }

    /// Largest slice width.
    pub fn max_slice_width(&self) -> usize {
        self.slices.iter().map(Slice::num_vars).max().unwrap_or(0)
    }

    /// For each slice, the permutation that maps slice 0's local variable `j`
    /// to the equivalent local variable of that slice, aligning by labels with
    /// the vehicle index stripped (or by position when unlabeled).
    pub fn alignment(&self) -> Option<Vec<Vec<usize>>> {
        let first = self.slices.first()?;
        let width = first.num_vars();
        let mut out = Vec::with_capacity(self.k());
        for s in &self.slices {
            if s.num_vars() != width {
                return None;
            }
            match (first.model.labels(), s.model.labels()) {
                (Some(l0), Some(la)) => {
                    let pos: BTreeMap<(usize, usize), usize> = la
                        .iter()
                        .enumerate()
                        .map(|(k, l)| ((l.location, l.step), k))
                        .collect();
                    let perm: Option<Vec<usize>> =
                        l0.iter().map(|l| pos.get(&(l.location, l.step)).copied()).collect();
                    out.push(perm?);
                }
                (None, None) => out.push((0..width).collect()),
                _ => return None,
            }
        }
        Some(out)
    }
}

/// Split off `classical_tags` into the residual and cut the rest into
/// connected components.
pub fn decompose(model: &QuboModel, classical_tags: &BTreeSet<TagId>) -> Result<SliceDecomposition> {
    let graph = build_interaction_graph(model, classical_tags)?;
    let mut residual = QuboModel::new(model.num_vars());
    residual.set_labels_unchecked(model.labels().map(<[_]>::to_vec));
    let mut remaining = residual.clone();
    for (tag, group) in model.groups() {
        let target = if classical_tags.contains(tag) {
            &mut residual
        } else {
            &mut remaining
        };
        target.insert_group(tag.clone(), group.clone());
    }
    let slices = slice_components(&remaining, &graph)
        .into_iter()
        .map(|(model, index_map)| Slice { model, index_map })
        .collect();
    Ok(SliceDecomposition {
        source: model.clone(),
        residual,
        slices,
    })
}

/// Slice an Ising model by removing the given couplings; the removed terms
/// (from every group) become the residual.
pub fn decompose_by_edge_cut(
    model: &IsingModel,
    cut_edges: &[(usize, usize)],
) -> Result<SliceDecomposition> {
    let cut: BTreeSet<(usize, usize)> = cut_edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    let full = InteractionGraph::new(model.num_vars(), model.interacting_pairs(&BTreeSet::new()))?;
    if let Some(&(u, v)) = cut.iter().find(|&&(u, v)| !full.has_edge(u, v)) {
        return Err(Error::Validation(format!("cut edge ({u}, {v}) is not a coupling")));
    }
    let before = connected_components(&full).len();
    let cut_graph = full.without_edges(&cut);
    let after = connected_components(&cut_graph).len();
    if after < 2 || (!cut.is_empty() && after == before) {
        return Err(Error::NotSeparable);
    }

    let mut residual_spin = IsingModel::new(model.num_vars());
    let mut remaining_spin = IsingModel::new(model.num_vars());
    for (tag, group) in model.groups() {
        let mut kept = group.clone();
        let mut removed = TermGroup::default();
        for key in &cut {
            if let Some(c) = kept.quadratic.remove(key) {
                removed.quadratic.insert(*key, c);
            }
        }
        residual_spin.insert_group(tag.clone(), removed);
        remaining_spin.insert_group(tag.clone(), kept);
    }
    // Convert per slice so that constants produced by the change of basis
    // stay with the couplings that generated them.
    let slices = slice_components(&remaining_spin, &cut_graph)
        .into_iter()
        .map(|s| Slice {
            model: ising_to_qubo(&s.0),
            index_map: s.1,
        })
        .collect();
    Ok(SliceDecomposition {
        source: ising_to_qubo(model),
        residual: ising_to_qubo(&residual_spin),
        slices,
    })
}

/// Restrict `remaining` to each component of `graph`. Every quadratic term
/// of `remaining` must lie inside one component. A group constant goes to
/// the slice holding the group's smallest variable (slice 0 if it has none).
fn slice_components<D: Domain>(
    remaining: &Model<D>,
    graph: &InteractionGraph,
) -> Vec<(Model<D>, Vec<usize>)> {
    let components = connected_components(graph);
    let mut owner = vec![0usize; remaining.num_vars()];
    for (c, vars) in components.iter().enumerate() {
        for &v in vars {
            owner[v] = c;
        }
    }
    let all_tags: BTreeSet<TagId> = remaining.tags().cloned().collect();
    let mut slices: Vec<(Model<D>, Vec<usize>)> = components
        .iter()
        .map(|vars| (remaining.restrict(vars, &all_tags), vars.clone()))
        .collect();
    for (tag, group) in remaining.groups() {
        if group.offset == 0.0 || slices.is_empty() {
            continue;
        }
        let target = group.variables().first().map_or(0, |&v| owner[v]);
        slices[target]
            .0
            .add_offset(tag.clone(), group.offset)
            .expect("finite offset");
    }
    slices
}

/// True iff all slices carry the same coefficients under label alignment
/// (vehicle index stripped); unlabeled slices are compared positionally.
pub fn slices_identical(d: &SliceDecomposition) -> bool {
    if d.k() <= 1 {
        return true;
    }
    let Some(perms) = d.alignment() else {
        return false;
    };
    let canon: Vec<Vec<(String, Vec<usize>, f64)>> = d
        .slices()
        .iter()
        .zip(&perms)
        .map(|(s, perm)| canonical_terms(&s.model, perm))
        .collect();
    canon.iter().skip(1).all(|c| {
        c.len() == canon[0].len()
            && c.iter().zip(&canon[0]).all(|(a, b)| {
                a.0 == b.0 && a.1 == b.1 && (a.2 - b.2).abs() <= 1e-12 * a.2.abs().max(1.0)
            })
    })
}

/// Terms rewritten in slice-0 coordinates: `perm[j]` is this slice's local
/// index of slice-0 variable `j`.
fn canonical_terms(model: &QuboModel, perm: &[usize]) -> Vec<(String, Vec<usize>, f64)> {
    let mut inverse = vec![0usize; perm.len()];
    for (j, &k) in perm.iter().enumerate() {
        inverse[k] = j;
    }
    let mut out = Vec::new();
    for (tag, g) in model.groups() {
        let kind = tag.kind();
        if g.offset != 0.0 {
            out.push((kind.clone(), Vec::new(), g.offset));
        }
        for (&i, &c) in &g.linear {
            out.push((kind.clone(), vec![inverse[i]], c));
        }
        for (&(i, j), &c) in &g.quadratic {
            let (a, b) = (inverse[i], inverse[j]);
            out.push((kind.clone(), vec![a.min(b), a.max(b)], c));
        }
    }
    out.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    out
}
