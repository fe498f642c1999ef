use std::collections::BTreeSet;

use proptest::prelude::*;

use qslice::instances::{generate_vrp, GeneratorConfig};
use qslice::model::random::random_dense;
use qslice::model::{build_vrp_qubo, Assignment, QuboModel, TagId};
use qslice::rng::rng_for;
use qslice::sim::{dense_oracle, run_qaoa, AnsatzParams, DiagonalHamiltonian, QaoaParams};
use qslice::slicing::{decompose, slices_identical};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn vrp_slices_reassemble_the_full_energy(
        n in 1usize..=3,
        vehicles in 1usize..=3,
        seed in 0u64..1000,
        draws in prop::collection::vec(any::<u64>(), 10),
    ) {
        let inst = generate_vrp(&GeneratorConfig::new(n, vehicles, seed)).unwrap();
        let model = build_vrp_qubo(&inst).unwrap();
        let d = decompose(&model, &BTreeSet::from([TagId::Coupling])).unwrap();
        prop_assert_eq!(d.k(), vehicles);
        prop_assert!(d.slices().iter().all(|s| s.index_map.len() == (n + 1) * (n + 1)));
        prop_assert!(slices_identical(&d));
        let nv = model.num_vars();
        for z in draws {
            let x = Assignment::from_index(z & ((1u64 << nv) - 1), nv);
            let mut sum = d.residual().evaluate(&x).unwrap();
            for s in d.slices() {
                sum += s.model.evaluate(&s.restrict(&x)).unwrap();
            }
            prop_assert!((sum - model.evaluate(&x).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn statevector_qaoa_matches_dense_oracle(
        n in 1usize..=5,
        seed in any::<u64>(),
        gamma in prop::collection::vec(-3.0f64..3.0, 1..=2),
        beta in prop::collection::vec(-3.0f64..3.0, 2),
    ) {
        let model: QuboModel = random_dense(n, &mut rng_for(seed, &[]));
        let p = gamma.len();
        let params = QaoaParams::new(gamma, beta[..p].to_vec()).unwrap();
        let fast = run_qaoa(&DiagonalHamiltonian::from_model(&model).unwrap(), &params).unwrap();
        let slow = dense_oracle(&model, &AnsatzParams::Qaoa(params)).unwrap();
        prop_assert!((fast.norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert!(fast.fidelity(&slow).unwrap() >= 1.0 - 1e-10);
    }
}
