//! Vehicle routing QUBO.
//!
//! Variables `x_{a,i,s}` say that vehicle `a` is at location `i` during step
//! `s`, with `a < A`, `i ≤ n` (0 is the depot) and `s ≤ n`. The energy is
//!
//! ```text
//! H = Σ_a Σ_{s<n} Σ_{i≠j} w_ij / W · x_{a,i,s} x_{a,j,s+1}     (route:a)
//!   + Σ_a Σ_s (1 − Σ_i x_{a,i,s})²                             (vehicle:a)
//!   + Σ_{i≥1} (1 − Σ_{a,s} x_{a,i,s})²                         (coupling)
//! ```
//!
//! Transitions stop at step `n`; routes do not wrap back to the depot.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{Assignment, QuboModel, TagId, VarLabel};

/// Flat index of `x_{a,i,s}`: vehicle-major, then step, then location.
#[inline]
pub fn vrp_var(vehicle: usize, location: usize, step: usize, n: usize) -> usize {
    let m = n + 1;
    vehicle * m * m + step * m + location
}

/// A routing instance: integer points (index 0 is the depot at the origin)
/// and a fleet size. Distances are Euclidean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "InstanceFile", into = "InstanceFile")]
pub struct VrpInstance {
    coords: Vec<(i64, i64)>,
    vehicles: usize,
    seed: Option<u64>,
    distances: Vec<Vec<f64>>,
    max_distance: f64,
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    coords: Vec<(i64, i64)>,
    #[serde(rename = "A")]
    vehicles: usize,
}

impl TryFrom<InstanceFile> for VrpInstance {
    type Error = Error;

    fn try_from(f: InstanceFile) -> Result<Self> {
        VrpInstance::new(f.coords, f.vehicles, f.seed)
    }
}

impl From<VrpInstance> for InstanceFile {
    fn from(v: VrpInstance) -> Self {
        InstanceFile {
            seed: v.seed,
            coords: v.coords,
            vehicles: v.vehicles,
        }
    }
}

impl VrpInstance {
    pub fn new(coords: Vec<(i64, i64)>, vehicles: usize, seed: Option<u64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidInstance(
                "need a depot and at least one customer".into(),
            ));
        }
        if coords[0] != (0, 0) {
            return Err(Error::InvalidInstance("depot must sit at (0, 0)".into()));
        }
        if vehicles == 0 {
            return Err(Error::InvalidInstance("need at least one vehicle".into()));
        }
        let distances: Vec<Vec<f64>> = coords
            .iter()
            .map(|&(xi, yi)| {
                coords
                    .iter()
                    .map(|&(xj, yj)| ((xi - xj) as f64).hypot((yi - yj) as f64))
                    .collect()
            })
            .collect();
        let max_distance = distances.iter().flatten().copied().fold(0.0, f64::max);
        if max_distance <= 0.0 {
            return Err(Error::InvalidInstance("all locations coincide".into()));
        }
        Ok(Self {
            coords,
            vehicles,
            seed,
            distances,
            max_distance,
        })
    }

    pub fn coords(&self) -> &[(i64, i64)] {
        &self.coords
    }

    /// Number of customer locations (depot excluded).
    pub fn n(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn vehicles(&self) -> usize {
        self.vehicles
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.distances[i][j]
    }

    /// Largest pairwise distance `W`.
    pub fn max_distance(&self) -> f64 {
        self.max_distance
    }

    pub fn num_vars(&self) -> usize {
        self.vehicles * (self.n() + 1).pow(2)
    }

    /// Same points with a different fleet size.
    pub fn with_vehicles(&self, vehicles: usize) -> Result<Self> {
        Self::new(self.coords.clone(), vehicles, self.seed)
    }
}

pub fn build_vrp_qubo(instance: &VrpInstance) -> Result<QuboModel> {
    let n = instance.n();
    let fleet = instance.vehicles();
    if n == 0 || fleet == 0 {
        return Err(Error::InvalidInstance("n and A must be positive".into()));
    }
    let mut labels = Vec::with_capacity(instance.num_vars());
    for vehicle in 0..fleet {
        for step in 0..=n {
            for location in 0..=n {
                labels.push(VarLabel {
                    vehicle,
                    location,
                    step,
                });
            }
        }
    }
    let mut model = QuboModel::new(instance.num_vars()).with_labels(labels)?;
    let w_max = instance.max_distance();

    for a in 0..fleet {
        for s in 0..n {
            for i in 0..=n {
                for j in 0..=n {
                    let w = instance.distance(i, j);
                    if i != j && w != 0.0 {
                        model.add_quadratic(
                            TagId::Route(a),
                            vrp_var(a, i, s, n),
                            vrp_var(a, j, s + 1, n),
                            w / w_max,
                        )?;
                    }
                }
            }
        }
        for s in 0..=n {
            let terms: Vec<_> = (0..=n).map(|i| (vrp_var(a, i, s, n), 1.0)).collect();
            model.add_squared_penalty(TagId::Vehicle(a), &terms, 1.0)?;
        }
    }
    for i in 1..=n {
        let terms: Vec<_> = (0..fleet)
            .flat_map(|a| (0..=n).map(move |s| (vrp_var(a, i, s, n), 1.0)))
            .collect();
        model.add_squared_penalty(TagId::Coupling, &terms, 1.0)?;
    }
    Ok(model)
}

/// A violated penalty of the routing encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConstraintId {
    /// Vehicle is not at exactly one location during the step.
    StepOneHot { vehicle: usize, step: usize },
    /// Customer is not visited exactly once over all vehicles and steps.
    Visit { location: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteSolution {
    /// `routes[a][s]` lists the locations vehicle `a` occupies at step `s`.
    pub routes: Vec<Vec<Vec<usize>>>,
    pub feasible: bool,
    pub violated_constraints: Vec<ConstraintId>,
}

impl RouteSolution {
    /// Location sequence of one vehicle, if it is well defined at every step.
    pub fn path(&self, vehicle: usize) -> Option<Vec<usize>> {
        self.routes[vehicle]
            .iter()
            .map(|locs| (locs.len() == 1).then(|| locs[0]))
            .collect()
    }
}

pub fn decode_vrp(x: &Assignment, instance: &VrpInstance) -> Result<RouteSolution> {
    if x.len() != instance.num_vars() {
        return Err(Error::Dimension {
            expected: instance.num_vars(),
            got: x.len(),
        });
    }
    let n = instance.n();
    let mut routes = vec![vec![Vec::new(); n + 1]; instance.vehicles()];
    let mut visits = vec![0usize; n + 1];
    for (a, route) in routes.iter_mut().enumerate() {
        for (s, locs) in route.iter_mut().enumerate() {
            for i in 0..=n {
                if x.bit(vrp_var(a, i, s, n)) {
                    locs.push(i);
                    visits[i] += 1;
                }
            }
        }
    }
    let mut violated = Vec::new();
    for (a, route) in routes.iter().enumerate() {
        for (s, locs) in route.iter().enumerate() {
            if locs.len() != 1 {
                violated.push(ConstraintId::StepOneHot {
                    vehicle: a,
                    step: s,
                });
            }
        }
    }
    for (i, &count) in visits.iter().enumerate().skip(1) {
        if count != 1 {
            violated.push(ConstraintId::Visit { location: i });
        }
    }
    Ok(RouteSolution {
        routes,
        feasible: violated.is_empty(),
        violated_constraints: violated,
    })
}

/// True iff every penalty-tagged group of the slice vanishes on `x`.
pub fn feasible_for_slice(slice_model: &QuboModel, x: &Assignment) -> Result<bool> {
    slice_model.penalties_satisfied(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::brute_force_min;

    fn instance(coords: Vec<(i64, i64)>, fleet: usize) -> VrpInstance {
        VrpInstance::new(coords, fleet, None).unwrap()
    }

    #[test]
    fn variable_count() {
        let inst = instance(vec![(0, 0), (1, 2), (3, -1), (-2, 4)], 2);
        let m = build_vrp_qubo(&inst).unwrap();
        assert_eq!(m.num_vars(), 32);
    }

    #[test]
    fn all_zero_energy_counts_penalties() {
        let inst = instance(vec![(0, 0), (1, 2), (3, -1), (-2, 4)], 2);
        let m = build_vrp_qubo(&inst).unwrap();
        let e = m.evaluate(&Assignment::zeros(32)).unwrap();
        assert_eq!(e, 11.0);
    }

    #[test]
    fn cross_vehicle_pairs_are_coupling() {
        let inst = instance(vec![(0, 0), (1, 2), (3, -1)], 3);
        let m = build_vrp_qubo(&inst).unwrap();
        let labels = m.labels().unwrap();
        for (tag, g) in m.groups() {
            for &(i, j) in g.quadratic.keys() {
                if labels[i].vehicle != labels[j].vehicle {
                    assert_eq!(tag, &TagId::Coupling);
                }
            }
        }
    }

    #[test]
    fn single_customer_hand_expansion() {
        // Only two points: w(0,1) = W, so the one feasible-looking route costs 1.
        let inst = instance(vec![(0, 0), (3, 4)], 1);
        let m = build_vrp_qubo(&inst).unwrap();
        let mut x = Assignment::zeros(4);
        x.set(vrp_var(0, 0, 0, 1), true);
        x.set(vrp_var(0, 1, 1, 1), true);
        assert_eq!(m.evaluate(&x).unwrap(), 1.0);

        let best = brute_force_min(&m).unwrap();
        assert_eq!(best.energy, 1.0);
        assert!(best.degeneracy >= 2);
    }

    #[test]
    fn decode_examples() {
        let inst = instance(vec![(0, 0), (3, 4)], 1);
        let zero = decode_vrp(&Assignment::zeros(4), &inst).unwrap();
        assert!(!zero.feasible);
        assert_eq!(zero.violated_constraints.len(), 3);

        let mut x = Assignment::zeros(4);
        x.set(vrp_var(0, 0, 0, 1), true);
        x.set(vrp_var(0, 1, 1, 1), true);
        let sol = decode_vrp(&x, &inst).unwrap();
        assert!(sol.feasible);
        assert_eq!(sol.path(0).unwrap(), vec![0, 1]);

        x.set(vrp_var(0, 0, 1, 1), true);
        let sol = decode_vrp(&x, &inst).unwrap();
        assert!(!sol.feasible);
        assert!(sol
            .violated_constraints
            .contains(&ConstraintId::StepOneHot { vehicle: 0, step: 1 }));
    }

    #[test]
    fn rejects_degenerate_instances() {
        assert!(VrpInstance::new(vec![(0, 0)], 1, None).is_err());
        assert!(VrpInstance::new(vec![(0, 0), (1, 1)], 0, None).is_err());
        assert!(VrpInstance::new(vec![(1, 0), (1, 1)], 1, None).is_err());
    }

    #[test]
    fn instance_json_schema() {
        let inst = VrpInstance::new(vec![(0, 0), (3, 4)], 2, Some(9)).unwrap();
        let text = serde_json::to_string(&inst).unwrap();
        assert_eq!(text, r#"{"seed":9,"coords":[[0,0],[3,4]],"A":2}"#);
        let back: VrpInstance = serde_json::from_str(&text).unwrap();
        assert_eq!(back, inst);
    }
}
