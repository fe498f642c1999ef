use rand::seq::IndexedRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{build_vrp_qubo, vrp_var, Assignment, VrpInstance};
use crate::rng::rng_for;

/// Largest customer count accepted by [`route_enum_optimal`].
pub const ROUTE_ENUM_MAX_N: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BaselineMethod {
    #[serde(rename = "route-enum")]
    RouteEnum,
    #[serde(rename = "nn-2opt")]
    Nn2Opt,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineResult {
    pub cost: f64,
    /// `routes[a][s]`: location of vehicle `a` at step `s`.
    pub routes: Vec<Vec<usize>>,
    pub method: BaselineMethod,
    /// Energy of the encoded plan under the routing QUBO.
    pub qubo_energy: f64,
    /// Vehicles serving at least one customer.
    pub vehicles_used: usize,
}

/// `Σ_a Σ_{s<n} w(routes[a][s], routes[a][s+1]) / W`.
pub fn plan_cost(instance: &VrpInstance, routes: &[Vec<usize>]) -> f64 {
    let w = instance.max_distance();
    routes
        .iter()
        .flat_map(|r| r.windows(2))
        .map(|p| instance.distance(p[0], p[1]) / w)
        .sum()
}

/// One-hot encoding of a plan as a QUBO assignment.
pub fn encode_plan(instance: &VrpInstance, routes: &[Vec<usize>]) -> Result<Assignment> {
    let n = instance.n();
    if routes.len() != instance.vehicles() || routes.iter().any(|r| r.len() != n + 1) {
        return Err(Error::Validation("plan shape does not match the instance".into()));
    }
    let mut x = Assignment::zeros(instance.num_vars());
    for (a, route) in routes.iter().enumerate() {
        for (s, &i) in route.iter().enumerate() {
            if i > n {
                return Err(Error::Validation(format!("location {i} out of range")));
            }
            x.set(vrp_var(a, i, s, n), true);
        }
    }
    Ok(x)
}

fn finish(instance: &VrpInstance, routes: Vec<Vec<usize>>, method: BaselineMethod) -> Result<BaselineResult> {
    let x = encode_plan(instance, &routes)?;
    let qubo_energy = build_vrp_qubo(instance)?.evaluate(&x)?;
    Ok(BaselineResult {
        cost: plan_cost(instance, &routes),
        vehicles_used: routes.iter().filter(|r| r.iter().any(|&i| i != 0)).count(),
        routes,
        method,
        qubo_energy,
    })
}

/// Best slot sequence for one vehicle serving exactly the customers in `mask`.
fn best_single_route(instance: &VrpInstance, mask: u32) -> (f64, Vec<usize>) {
    let n = instance.n();
    let customers: Vec<usize> = (1..=n).filter(|&i| mask >> (i - 1) & 1 == 1).collect();
    let mut best = (f64::INFINITY, Vec::new());
    let mut order = customers.clone();
    let mut slots = vec![0usize; n + 1];
    permute(&mut order, 0, &mut |perm| {
        place(perm, 0, 0, &mut slots, &mut |seq| {
            let c = plan_cost(instance, std::slice::from_ref(&seq.to_vec()));
            if c < best.0 {
                best = (c, seq.to_vec());
            }
        });
    });
    best
}

fn permute(items: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Every way to put `perm` into `slots` in order, depot elsewhere.
fn place(perm: &[usize], next: usize, slot: usize, slots: &mut [usize], visit: &mut impl FnMut(&[usize])) {
    if next == perm.len() {
        for s in &mut slots[slot..] {
            *s = 0;
        }
        visit(slots);
        return;
    }
    let left = perm.len() - next;
    for s in slot..=slots.len() - left {
        for d in &mut slots[slot..s] {
            *d = 0;
        }
        slots[s] = perm[next];
        place(perm, next + 1, s + 1, slots, visit);
    }
}

/// Exact optimum by exhaustive search over customer-to-vehicle assignments,
/// visit orders and slot placements.
pub fn route_enum_optimal(instance: &VrpInstance) -> Result<BaselineResult> {
    let n = instance.n();
    if n > ROUTE_ENUM_MAX_N {
        return Err(Error::Size {
            what: "customers for route enumeration",
            size: n,
            cap: ROUTE_ENUM_MAX_N,
        });
    }
    let full = (1u32 << n) - 1;
    let single: Vec<(f64, Vec<usize>)> = (0..=full)
        .map(|mask| {
            if mask == 0 {
                (0.0, vec![0; n + 1])
            } else {
                best_single_route(instance, mask)
            }
        })
        .collect();

    // best[v][mask]: cheapest way for vehicles 0..=v to serve `mask`.
    let fleet = instance.vehicles();
    let mut best: Vec<Vec<(f64, u32)>> = vec![single.iter().enumerate().map(|(m, s)| (s.0, m as u32)).collect()];
    for v in 1..fleet {
        let prev = &best[v - 1];
        let mut layer = Vec::with_capacity(prev.len());
        for mask in 0..=full {
            // Enumerate the subset served by vehicle v, starting from empty.
            let mut choice = (prev[mask as usize].0 + single[0].0, 0u32);
            let mut sub = mask;
            while sub > 0 {
                let c = single[sub as usize].0 + prev[(mask ^ sub) as usize].0;
                if c < choice.0 {
                    choice = (c, sub);
                }
                sub = (sub - 1) & mask;
            }
            layer.push(choice);
        }
        best.push(layer);
    }
    let mut routes = vec![Vec::new(); fleet];
    let mut mask = full;
    for v in (0..fleet).rev() {
        let sub = best[v][mask as usize].1;
        routes[v] = single[sub as usize].1.clone();
        mask ^= sub;
    }
    debug_assert_eq!(mask, 0);
    finish(instance, routes, BaselineMethod::RouteEnum)
}

/// Cost of visiting `order` as a contiguous block with all depot slots on
/// the cheaper side.
fn open_cost(instance: &VrpInstance, order: &[usize]) -> f64 {
    let (Some(&first), Some(&last)) = (order.first(), order.last()) else {
        return 0.0;
    };
    let w = instance.max_distance();
    let inner: f64 = order
        .windows(2)
        .map(|p| instance.distance(p[0], p[1]) / w)
        .sum();
    inner + (instance.distance(0, first) / w).min(instance.distance(last, 0) / w)
}

fn two_opt(instance: &VrpInstance, order: &mut [usize]) {
    loop {
        let mut improved = false;
        let current = open_cost(instance, order);
        'scan: for i in 0..order.len() {
            for j in i + 1..order.len() {
                order[i..=j].reverse();
                if open_cost(instance, order) < current - 1e-12 {
                    improved = true;
                    break 'scan;
                }
                order[i..=j].reverse();
            }
        }
        if !improved {
            return;
        }
    }
}

/// Greedy nearest-neighbour assignment followed by 2-opt on every route.
///
/// Each round extends whichever vehicle is closest to an unvisited customer;
/// exact distance ties are broken by the seeded stream.
pub fn heuristic_baseline(instance: &VrpInstance, seed: u64) -> Result<BaselineResult> {
    let n = instance.n();
    let fleet = instance.vehicles();
    let mut rng = rng_for(seed, &[]);
    let mut orders: Vec<Vec<usize>> = vec![Vec::new(); fleet];
    let mut unvisited: Vec<usize> = (1..=n).collect();
    while !unvisited.is_empty() {
        let mut ties: Vec<(usize, usize)> = Vec::new();
        let mut best = f64::INFINITY;
        for (v, order) in orders.iter().enumerate() {
            let at = order.last().copied().unwrap_or(0);
            for (k, &c) in unvisited.iter().enumerate() {
                let d = instance.distance(at, c);
                if d < best {
                    best = d;
                    ties.clear();
                }
                if d == best {
                    ties.push((v, k));
                }
            }
        }
        let &(v, k) = ties.choose(&mut rng).expect("unvisited customers remain");
        orders[v].push(unvisited.remove(k));
    }
    let routes = orders
        .iter_mut()
        .map(|order| {
            two_opt(instance, order);
            let mut route = vec![0; n + 1];
            if let (Some(&first), Some(&last)) = (order.first(), order.last()) {
                // Depot slots go on whichever end is cheaper.
                let offset = if instance.distance(0, first) <= instance.distance(last, 0) {
                    n + 1 - order.len()
                } else {
                    0
                };
                route[offset..offset + order.len()].copy_from_slice(order);
            }
            route
        })
        .collect();
    finish(instance, routes, BaselineMethod::Nn2Opt)
}

/// `optimal / found`, in `(0, 1]`.
pub fn approximation_ratio(found_energy: f64, optimal_energy: f64) -> Result<f64> {
    if !(optimal_energy > 0.0 && optimal_energy.is_finite()) {
        return Err(Error::Domain(format!(
            "optimal energy {optimal_energy} must be positive"
        )));
    }
    if found_energy <= 0.0 || found_energy < optimal_energy - 1e-9 || !found_energy.is_finite() {
        return Err(Error::Domain(format!(
            "found energy {found_energy} is invalid for optimum {optimal_energy}"
        )));
    }
    Ok((optimal_energy / found_energy).min(1.0))
}
