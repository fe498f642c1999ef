//! Random dense models for tests and benchmarks.

use rand::Rng;

use super::{Domain, Model, TagId};

/// Dense model with every linear and pairwise coefficient drawn from
/// `U(-1, 1)` and a constant from `U(-1, 1)`, all tagged `objective`.
pub fn random_dense<D: Domain, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Model<D> {
    let mut m = Model::<D>::new(n);
    m.add_offset(TagId::Objective, rng.random_range(-1.0..1.0))
        .expect("finite");
    for i in 0..n {
        m.add_linear(TagId::Objective, i, rng.random_range(-1.0..1.0))
            .expect("in range");
        for j in i + 1..n {
            m.add_quadratic(TagId::Objective, i, j, rng.random_range(-1.0..1.0))
                .expect("in range");
        }
    }
    m
}
