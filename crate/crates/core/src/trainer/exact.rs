use crate::error::{Error, Result};
use crate::model::QuboModel;

/// `E[H]` of a QUBO under a product of independent slice distributions.
///
/// Each part is `(vars, probs)`: `probs[z]` is the probability of local
/// bitstring `z`, whose bit `j` is global variable `vars[j]`. Parts must
/// cover every variable exactly once.
pub fn product_expectation(model: &QuboModel, parts: &[(Vec<usize>, Vec<f64>)]) -> Result<f64> {
    let n = model.num_vars();
    let mut owner = vec![usize::MAX; n];
    let mut first = vec![0.0; n];
    // Within-part pair moments, keyed by global pair.
    let mut joint = std::collections::HashMap::new();
    for (a, (vars, probs)) in parts.iter().enumerate() {
        if probs.len() != 1usize << vars.len() {
            return Err(Error::Dimension {
                expected: 1 << vars.len(),
                got: probs.len(),
            });
        }
        for &g in vars {
            if g >= n || owner[g] != usize::MAX {
                return Err(Error::Validation(format!("variable {g} invalid or shared")));
            }
            owner[g] = a;
        }
        let w = vars.len();
        let mut m1 = vec![0.0; w];
        let mut m2 = vec![vec![0.0; w]; w];
        for (z, &p) in probs.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            for i in 0..w {
                if z >> i & 1 == 1 {
                    m1[i] += p;
                    for j in i + 1..w {
                        if z >> j & 1 == 1 {
                            m2[i][j] += p;
                        }
                    }
                }
            }
        }
        for i in 0..w {
            first[vars[i]] = m1[i];
            for j in i + 1..w {
                let (u, v) = (vars[i].min(vars[j]), vars[i].max(vars[j]));
                joint.insert((u, v), m2[i][j]);
            }
        }
    }
    if let Some(v) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(Error::Validation(format!("variable {v} has no distribution")));
    }
    let mut e = 0.0;
    for g in model.groups().values() {
        e += g.offset;
        for (&i, &c) in &g.linear {
            e += c * first[i];
        }
        for (&(i, j), &c) in &g.quadratic {
            let m = if owner[i] == owner[j] {
                joint[&(i, j)]
            } else {
                first[i] * first[j]
            };
            e += c * m;
        }
    }
    Ok(e)
}
