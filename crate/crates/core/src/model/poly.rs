use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::marker::PhantomData;

use crate::error::{Error, Result};

use super::{Assignment, TagId, VarLabel};

/// Variable domain of a quadratic model.
pub trait Domain: Copy + Clone + fmt::Debug + Default + PartialEq + Send + Sync + 'static {
    const NAME: &'static str;

    /// Numeric value of a variable whose bit is `bit`.
    fn value(bit: bool) -> f64;

    /// Fold a self-product `c * v_i * v_i` into lower-order terms.
    fn fold_square(group: &mut TermGroup, var: usize, coeff: f64);
}

/// Binary variables `x ∈ {0, 1}`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Binary;

/// Spin variables `s = 1 - 2x ∈ {+1, -1}`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Spin;

impl Domain for Binary {
    const NAME: &'static str = "qubo";

    #[inline]
    fn value(bit: bool) -> f64 {
        if bit {
            1.0
        } else {
            0.0
        }
    }

    fn fold_square(group: &mut TermGroup, var: usize, coeff: f64) {
        group.add_linear(var, coeff);
    }
}

impl Domain for Spin {
    const NAME: &'static str = "ising";

    #[inline]
    fn value(bit: bool) -> f64 {
        if bit {
            -1.0
        } else {
            1.0
        }
    }

    fn fold_square(group: &mut TermGroup, _var: usize, coeff: f64) {
        group.offset += coeff;
    }
}

/// Terms sharing one tag.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TermGroup {
    pub linear: BTreeMap<usize, f64>,
    /// Keys are stored with `i < j`.
    pub quadratic: BTreeMap<(usize, usize), f64>,
    pub offset: f64,
}

impl TermGroup {
    fn add_linear(&mut self, var: usize, coeff: f64) {
        let slot = self.linear.entry(var).or_insert(0.0);
        *slot += coeff;
        if *slot == 0.0 {
            self.linear.remove(&var);
        }
    }

    fn add_pair(&mut self, i: usize, j: usize, coeff: f64) {
        let key = if i < j { (i, j) } else { (j, i) };
        let slot = self.quadratic.entry(key).or_insert(0.0);
        *slot += coeff;
        if *slot == 0.0 {
            self.quadratic.remove(&key);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.linear.is_empty() && self.quadratic.is_empty() && self.offset == 0.0
    }

    /// Evaluate with per-variable values `v`.
    pub fn evaluate_values(&self, v: impl Fn(usize) -> f64) -> f64 {
        let mut e = self.offset;
        for (&i, &c) in &self.linear {
            e += c * v(i);
        }
        for (&(i, j), &c) in &self.quadratic {
            e += c * v(i) * v(j);
        }
        e
    }

    /// Variables touched by any term of this group.
    pub fn variables(&self) -> BTreeSet<usize> {
        let mut vars: BTreeSet<usize> = self.linear.keys().copied().collect();
        for &(i, j) in self.quadratic.keys() {
            vars.insert(i);
            vars.insert(j);
        }
        vars
    }
}

/// Quadratic pseudo-boolean model with tagged term groups.
///
/// Energies are `Σ_groups (offset + Σ c_i v_i + Σ c_ij v_i v_j)` where `v`
/// is the domain value of each variable. The same monomial may appear in
/// several groups; a term is identified by `(tag, monomial)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Model<D: Domain> {
    num_vars: usize,
    labels: Option<Vec<VarLabel>>,
    groups: BTreeMap<TagId, TermGroup>,
    _domain: PhantomData<D>,
}

pub type QuboModel = Model<Binary>;
pub type IsingModel = Model<Spin>;

impl<D: Domain> Model<D> {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            labels: None,
            groups: BTreeMap::new(),
            _domain: PhantomData,
        }
    }

    pub fn with_labels(mut self, labels: Vec<VarLabel>) -> Result<Self> {
        if labels.len() != self.num_vars {
            return Err(Error::Dimension {
                expected: self.num_vars,
                got: labels.len(),
            });
        }
        let distinct: BTreeSet<_> = labels.iter().collect();
        if distinct.len() != labels.len() {
            return Err(Error::Validation("duplicate variable label".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn labels(&self) -> Option<&[VarLabel]> {
        self.labels.as_deref()
    }

    pub fn groups(&self) -> &BTreeMap<TagId, TermGroup> {
        &self.groups
    }

    pub fn group(&self, tag: &TagId) -> Option<&TermGroup> {
        self.groups.get(tag)
    }

    pub fn tags(&self) -> impl Iterator<Item = &TagId> {
        self.groups.keys()
    }

    pub fn has_tag(&self, tag: &TagId) -> bool {
        self.groups.contains_key(tag)
    }

    /// Sum of all group constants.
    pub fn offset(&self) -> f64 {
        self.groups.values().map(|g| g.offset).sum()
    }

    fn check_var(&self, var: usize) -> Result<()> {
        if var >= self.num_vars {
            return Err(Error::Validation(format!(
                "variable {var} out of range 0..{}",
                self.num_vars
            )));
        }
        Ok(())
    }

    fn check_finite(coeff: f64) -> Result<()> {
        if !coeff.is_finite() {
            return Err(Error::Validation(format!("non-finite coefficient {coeff}")));
        }
        Ok(())
    }

    pub fn add_linear(&mut self, tag: TagId, var: usize, coeff: f64) -> Result<()> {
        self.check_var(var)?;
        Self::check_finite(coeff)?;
        self.groups.entry(tag).or_default().add_linear(var, coeff);
        Ok(())
    }

    /// Add `coeff * v_i * v_j`. A self-pair is folded into lower-order terms
    /// according to the domain (`x² = x`, `s² = 1`).
    pub fn add_quadratic(&mut self, tag: TagId, i: usize, j: usize, coeff: f64) -> Result<()> {
        self.check_var(i)?;
        self.check_var(j)?;
        Self::check_finite(coeff)?;
        let group = self.groups.entry(tag).or_default();
        if i == j {
            D::fold_square(group, i, coeff);
        } else {
            group.add_pair(i, j, coeff);
        }
        Ok(())
    }

    pub fn add_offset(&mut self, tag: TagId, value: f64) -> Result<()> {
        Self::check_finite(value)?;
        self.groups.entry(tag).or_default().offset += value;
        Ok(())
    }

    /// Add `(Σ c_k v_k - target)²` expanded into the tag's group.
    pub fn add_squared_penalty(
        &mut self,
        tag: TagId,
        terms: &[(usize, f64)],
        target: f64,
    ) -> Result<()> {
        self.add_offset(tag.clone(), target * target)?;
        for (k, &(vk, ck)) in terms.iter().enumerate() {
            self.add_linear(tag.clone(), vk, -2.0 * target * ck)?;
            self.add_quadratic(tag.clone(), vk, vk, ck * ck)?;
            for &(vl, cl) in &terms[k + 1..] {
                self.add_quadratic(tag.clone(), vk, vl, 2.0 * ck * cl)?;
            }
        }
        Ok(())
    }

    /// Insert a whole group; used by decomposition and conversion.
    pub(crate) fn insert_group(&mut self, tag: TagId, group: TermGroup) {
        if !group.is_empty() {
            self.groups.insert(tag, group);
        }
    }

    fn check_len(&self, x: &Assignment) -> Result<()> {
        if x.len() != self.num_vars {
            return Err(Error::Dimension {
                expected: self.num_vars,
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn evaluate(&self, x: &Assignment) -> Result<f64> {
        self.check_len(x)?;
        let v = |i: usize| D::value(x.bit(i));
        Ok(self.groups.values().map(|g| g.evaluate_values(v)).sum())
    }

    /// Energy of one tag group alone; zero for an absent tag.
    pub fn evaluate_tag(&self, tag: &TagId, x: &Assignment) -> Result<f64> {
        self.check_len(x)?;
        let v = |i: usize| D::value(x.bit(i));
        Ok(self.groups.get(tag).map_or(0.0, |g| g.evaluate_values(v)))
    }

    /// True iff every penalty group evaluates to zero (within `1e-9`).
    pub fn penalties_satisfied(&self, x: &Assignment) -> Result<bool> {
        self.check_len(x)?;
        let v = |i: usize| D::value(x.bit(i));
        Ok(self
            .groups
            .iter()
            .filter(|(t, _)| t.is_penalty())
            .all(|(_, g)| g.evaluate_values(v).abs() <= 1e-9))
    }

    /// All variable pairs that carry a quadratic term in a group not in `excluded`.
    pub fn interacting_pairs(&self, excluded: &BTreeSet<TagId>) -> BTreeSet<(usize, usize)> {
        self.groups
            .iter()
            .filter(|(t, _)| !excluded.contains(t))
            .flat_map(|(_, g)| g.quadratic.keys().copied())
            .collect()
    }

    /// Merge all groups into flat coefficient arrays for fast evaluation.
    pub fn compile(&self) -> CompiledModel {
        let mut linear = vec![0.0; self.num_vars];
        let mut pairs: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        let mut offset = 0.0;
        for g in self.groups.values() {
            offset += g.offset;
            for (&i, &c) in &g.linear {
                linear[i] += c;
            }
            for (&k, &c) in &g.quadratic {
                *pairs.entry(k).or_insert(0.0) += c;
            }
        }
        CompiledModel {
            num_vars: self.num_vars,
            spin: D::value(false) != 0.0,
            linear,
            quadratic: pairs
                .into_iter()
                .filter(|&(_, c)| c != 0.0)
                .map(|((i, j), c)| (i as u32, j as u32, c))
                .collect(),
            offset,
        }
    }

    /// Restrict to a subset of variables, relabelled `0..vars.len()` in the
    /// given order. Terms touching other variables are dropped.
    pub(crate) fn restrict(&self, vars: &[usize], tags: &BTreeSet<TagId>) -> Self {
        let mut local = vec![usize::MAX; self.num_vars];
        for (k, &g) in vars.iter().enumerate() {
            local[g] = k;
        }
        let mut out = Self::new(vars.len());
        if let Some(labels) = &self.labels {
            out.labels = Some(vars.iter().map(|&g| labels[g]).collect());
        }
        for (tag, group) in self.groups.iter().filter(|(t, _)| tags.contains(t)) {
            let mut sub = TermGroup::default();
            for (&i, &c) in &group.linear {
                if local[i] != usize::MAX {
                    sub.linear.insert(local[i], c);
                }
            }
            for (&(i, j), &c) in &group.quadratic {
                if local[i] != usize::MAX && local[j] != usize::MAX {
                    let (a, b) = (local[i], local[j]);
                    sub.quadratic.insert((a.min(b), a.max(b)), c);
                }
            }
            out.insert_group(tag.clone(), sub);
        }
        out
    }

    pub(crate) fn set_labels_unchecked(&mut self, labels: Option<Vec<VarLabel>>) {
        self.labels = labels;
    }
}

/// Flat, merged form of a model, evaluated on basis indices.
#[derive(Debug, Clone)]
pub struct CompiledModel {
    num_vars: usize,
    spin: bool,
    linear: Vec<f64>,
    quadratic: Vec<(u32, u32, f64)>,
    offset: f64,
}

impl CompiledModel {
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Energy of the basis index `z` (bit `k` = variable `k`).
    #[inline]
    pub fn energy(&self, z: u64) -> f64 {
        let mut e = self.offset;
        if self.spin {
            for (k, &h) in self.linear.iter().enumerate() {
                e += if z >> k & 1 == 1 { -h } else { h };
            }
            for &(i, j, c) in &self.quadratic {
                let aligned = (z >> i & 1) == (z >> j & 1);
                e += if aligned { c } else { -c };
            }
        } else {
            for (k, &h) in self.linear.iter().enumerate() {
                if z >> k & 1 == 1 {
                    e += h;
                }
            }
            for &(i, j, c) in &self.quadratic {
                if z >> i & 1 == 1 && z >> j & 1 == 1 {
                    e += c;
                }
            }
        }
        e
    }
}
