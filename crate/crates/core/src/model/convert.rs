//! Change of basis between binary and spin variables, `s = 1 - 2x`.
//!
//! Conversion is done group by group so tags survive the round trip.

use super::{IsingModel, QuboModel, TermGroup};

/// `x = (1 - s) / 2`.
pub fn qubo_to_ising(model: &QuboModel) -> IsingModel {
    let mut out = IsingModel::new(model.num_vars());
    out.set_labels_unchecked(model.labels().map(<[_]>::to_vec));
    for (tag, group) in model.groups() {
        let mut g = TermGroup {
            offset: group.offset,
            ..TermGroup::default()
        };
        for (&i, &c) in &group.linear {
            g.offset += c / 2.0;
            *g.linear.entry(i).or_insert(0.0) -= c / 2.0;
        }
        for (&(i, j), &c) in &group.quadratic {
            let q = c / 4.0;
            g.offset += q;
            *g.linear.entry(i).or_insert(0.0) -= q;
            *g.linear.entry(j).or_insert(0.0) -= q;
            *g.quadratic.entry((i, j)).or_insert(0.0) += q;
        }
        prune(&mut g);
        out.insert_group(tag.clone(), g);
    }
    out
}

/// `s = 1 - 2x`.
pub fn ising_to_qubo(model: &IsingModel) -> QuboModel {
    let mut out = QuboModel::new(model.num_vars());
    out.set_labels_unchecked(model.labels().map(<[_]>::to_vec));
    for (tag, group) in model.groups() {
        let mut g = TermGroup {
            offset: group.offset,
            ..TermGroup::default()
        };
        for (&i, &h) in &group.linear {
            g.offset += h;
            *g.linear.entry(i).or_insert(0.0) -= 2.0 * h;
        }
        for (&(i, j), &c) in &group.quadratic {
            g.offset += c;
            *g.linear.entry(i).or_insert(0.0) -= 2.0 * c;
            *g.linear.entry(j).or_insert(0.0) -= 2.0 * c;
            *g.quadratic.entry((i, j)).or_insert(0.0) += 4.0 * c;
        }
        prune(&mut g);
        out.insert_group(tag.clone(), g);
    }
    out
}

fn prune(g: &mut TermGroup) {
    g.linear.retain(|_, c| *c != 0.0);
    g.quadratic.retain(|_, c| *c != 0.0);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Assignment, TagId};

    #[test]
    fn single_linear_term() {
        let mut q = QuboModel::new(1);
        q.add_linear(TagId::Objective, 0, 1.0).unwrap();
        let ising = qubo_to_ising(&q);
        let g = ising.group(&TagId::Objective).unwrap();
        assert_eq!(g.linear[&0], -0.5);
        assert_eq!(g.offset, 0.5);
    }

    #[test]
    fn round_trip_is_coefficient_identical() {
        let mut q = QuboModel::new(3);
        q.add_linear(TagId::Objective, 0, 1.5).unwrap();
        q.add_linear(TagId::Coupling, 2, -0.25).unwrap();
        q.add_quadratic(TagId::Objective, 0, 1, 3.0).unwrap();
        q.add_quadratic(TagId::Coupling, 1, 2, -2.0).unwrap();
        q.add_offset(TagId::Coupling, 4.0).unwrap();
        let back = ising_to_qubo(&qubo_to_ising(&q));
        for (tag, g) in q.groups() {
            let h = back.group(tag).unwrap();
            assert!((g.offset - h.offset).abs() < 1e-12);
            for (k, c) in &g.linear {
                assert!((c - h.linear.get(k).copied().unwrap_or(0.0)).abs() < 1e-12);
            }
            for (k, c) in &h.linear {
                assert!((c - g.linear.get(k).copied().unwrap_or(0.0)).abs() < 1e-12);
            }
            assert_eq!(g.quadratic, h.quadratic);
        }
    }

    #[test]
    fn energies_preserved_exhaustively() {
        let mut q = QuboModel::new(3);
        let coeffs = [0.3, -1.2, 0.7, 2.5, -0.4, 1.1];
        q.add_linear(TagId::Objective, 0, coeffs[0]).unwrap();
        q.add_linear(TagId::Objective, 1, coeffs[1]).unwrap();
        q.add_linear(TagId::Objective, 2, coeffs[2]).unwrap();
        q.add_quadratic(TagId::Objective, 0, 1, coeffs[3]).unwrap();
        q.add_quadratic(TagId::Objective, 0, 2, coeffs[4]).unwrap();
        q.add_quadratic(TagId::Objective, 1, 2, coeffs[5]).unwrap();
        let ising = qubo_to_ising(&q);
        for z in 0..8 {
            let x = Assignment::from_index(z, 3);
            let direct: f64 = coeffs[0] * x.bits()[0] as f64
                + coeffs[1] * x.bits()[1] as f64
                + coeffs[2] * x.bits()[2] as f64
                + coeffs[3] * (x.bits()[0] * x.bits()[1]) as f64
                + coeffs[4] * (x.bits()[0] * x.bits()[2]) as f64
                + coeffs[5] * (x.bits()[1] * x.bits()[2]) as f64;
            assert!((q.evaluate(&x).unwrap() - direct).abs() < 1e-12);
            assert!((ising.evaluate(&x).unwrap() - direct).abs() < 1e-12);
        }
    }
}
