use std::collections::BTreeSet;

use crate::error::{Error, Result};

use super::{IsingModel, TagId};

/// Sign of the coupling emitted by [`build_maxcut_ising`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum MaxCutSign {
    /// `+Σ s_i s_j`; its minimum is the maximum cut.
    #[default]
    CutMinimizing,
    /// `−Σ s_i s_j`, the ferromagnetic form.
    Ferromagnetic,
}

/// One unit coupling per edge, tagged `objective`, no fields.
pub fn build_maxcut_ising(
    num_nodes: usize,
    edges: &[(usize, usize)],
    sign: MaxCutSign,
) -> Result<IsingModel> {
    let coupling = match sign {
        MaxCutSign::CutMinimizing => 1.0,
        MaxCutSign::Ferromagnetic => -1.0,
    };
    let mut seen = BTreeSet::new();
    let mut model = IsingModel::new(num_nodes);
    for &(u, v) in edges {
        if u == v {
            return Err(Error::Validation(format!("self-loop on node {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::Validation(format!("duplicate edge ({u}, {v})")));
        }
        model.add_quadratic(TagId::Objective, u, v, coupling)?;
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{brute_force_min, Assignment};

    #[test]
    fn single_edge_prefers_anti_aligned() {
        let m = build_maxcut_ising(2, &[(0, 1)], MaxCutSign::CutMinimizing).unwrap();
        let best = brute_force_min(&m).unwrap();
        assert_eq!(best.energy, -1.0);
        assert_ne!(best.argmin.bit(0), best.argmin.bit(1));
    }

    #[test]
    fn triangle_by_enumeration() {
        let edges = [(0, 1), (1, 2), (0, 2)];
        let m = build_maxcut_ising(3, &edges, MaxCutSign::CutMinimizing).unwrap();
        let mut min = f64::INFINITY;
        let mut best_cut = 0;
        for z in 0..8u64 {
            let x = Assignment::from_index(z, 3);
            let e = m.evaluate(&x).unwrap();
            let cut = edges.iter().filter(|&&(u, v)| x.bit(u) != x.bit(v)).count();
            if e < min {
                min = e;
                best_cut = cut;
            }
        }
        assert_eq!(min, -1.0);
        assert_eq!(best_cut, 2);
    }

    #[test]
    fn ferromagnetic_sign_flips_couplings() {
        let m = build_maxcut_ising(2, &[(0, 1)], MaxCutSign::Ferromagnetic).unwrap();
        assert_eq!(m.group(&TagId::Objective).unwrap().quadratic[&(0, 1)], -1.0);
    }

    #[test]
    fn duplicate_edges_rejected() {
        assert!(build_maxcut_ising(2, &[(0, 1), (1, 0)], MaxCutSign::default()).is_err());
        assert!(build_maxcut_ising(2, &[(1, 1)], MaxCutSign::default()).is_err());
    }
}
