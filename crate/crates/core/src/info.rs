//! Entropy and mutual information over labeled finite joint distributions.
//!
//! Every quantity is in bits. Outcomes with zero probability contribute
//! nothing (`0 log 0 = 0`), so conditioning events of probability zero drop
//! out of conditional terms automatically. Entropy differences that come out
//! marginally negative through rounding are clamped to zero; anything below
//! [`NEGATIVE_SLACK`] is an internal-consistency error.
//!
//! [`InfoCalc`] memoizes marginals and entropies of one joint pmf, so the
//! dozen terms of a rate-region bound share their marginalization work.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest negative rounding residue that is silently clamped to zero.
pub const NEGATIVE_SLACK: f64 = 1e-10;

/// Tolerance on the total mass of a joint pmf.
pub const PMF_SUM_TOL: f64 = 1e-12;

/// Random-variable labels of the channel model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VariableId {
    U,
    V,
    T,
    X1,
    X2,
    Xr1,
    Y1,
    Y2,
}

impl VariableId {
    pub const ALL: [VariableId; 8] = [
        VariableId::U,
        VariableId::V,
        VariableId::T,
        VariableId::X1,
        VariableId::X2,
        VariableId::Xr1,
        VariableId::Y1,
        VariableId::Y2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VariableId::U => "U",
            VariableId::V => "V",
            VariableId::T => "T",
            VariableId::X1 => "X1",
            VariableId::X2 => "X2",
            VariableId::Xr1 => "Xr1",
            VariableId::Y1 => "Y1",
            VariableId::Y2 => "Y2",
        }
    }

    pub(crate) const fn bit(self) -> u8 {
        1 << self as u8
    }
}

impl fmt::Display for VariableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A set of variable labels, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct VarSet(u8);

impl VarSet {
    pub const EMPTY: VarSet = VarSet(0);

    pub fn contains(self, var: VariableId) -> bool {
        self.0 & var.bit() != 0
    }

    pub fn with(self, var: VariableId) -> VarSet {
        VarSet(self.0 | var.bit())
    }

    pub fn union(self, other: VarSet) -> VarSet {
        VarSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VarSet) -> VarSet {
        VarSet(self.0 & other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: VarSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: VarSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = VariableId> {
        VariableId::ALL.into_iter().filter(move |v| self.contains(*v))
    }

    pub(crate) fn bits(self) -> usize {
        self.0 as usize
    }
}

impl From<VariableId> for VarSet {
    fn from(var: VariableId) -> Self {
        VarSet(var.bit())
    }
}

impl<const N: usize> From<[VariableId; N]> for VarSet {
    fn from(vars: [VariableId; N]) -> Self {
        vars.into_iter().collect()
    }
}

impl From<&[VariableId]> for VarSet {
    fn from(vars: &[VariableId]) -> Self {
        vars.iter().copied().collect()
    }
}

impl FromIterator<VariableId> for VarSet {
    fn from_iter<I: IntoIterator<Item = VariableId>>(iter: I) -> Self {
        iter.into_iter().fold(VarSet::EMPTY, VarSet::with)
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(v.name())?;
        }
        f.write_str("}")
    }
}

/// One labeled axis of a joint pmf.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Axis {
    pub var: VariableId,
    pub card: usize,
}

impl Axis {
    pub fn new(var: VariableId, card: usize) -> Self {
        Self { var, card }
    }
}

/// Row-major strides for the given cardinalities.
pub(crate) fn strides(cards: &[usize]) -> Vec<usize> {
    let mut out = vec![1; cards.len()];
    for a in (0..cards.len().saturating_sub(1)).rev() {
        out[a] = out[a + 1] * cards[a + 1];
    }
    out
}

/// Dense joint pmf over labeled axes, stored row-major (last axis fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf {
    axes: Vec<Axis>,
    weights: Vec<f64>,
}

impl JointPmf {
    pub fn new(axes: Vec<Axis>, weights: Vec<f64>) -> Result<Self> {
        check_axes(&axes)?;
        let expected: usize = axes.iter().map(|a| a.card).product();
        if weights.len() != expected {
            return Err(Error::DimensionMismatch {
                path: "joint pmf weights".into(),
                expected,
                found: weights.len(),
            });
        }
        if let Some(bad) = weights.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidPmf(format!("weight {bad} is not a probability")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > PMF_SUM_TOL {
            return Err(Error::InvalidPmf(format!("weights sum to {total}")));
        }
        Ok(Self { axes, weights })
    }

    /// Trusted constructor for weights produced by products of valid factors.
    pub(crate) fn from_parts(axes: Vec<Axis>, weights: Vec<f64>) -> Self {
        debug_assert_eq!(weights.len(), axes.iter().map(|a| a.card).product::<usize>());
        Self { axes, weights }
    }

    pub fn uniform(axes: Vec<Axis>) -> Result<Self> {
        check_axes(&axes)?;
        let n: usize = axes.iter().map(|a| a.card).product();
        Self::new(axes, vec![1.0 / n as f64; n])
    }

    pub fn point_mass(axes: Vec<Axis>, index: &[usize]) -> Result<Self> {
        check_axes(&axes)?;
        let n: usize = axes.iter().map(|a| a.card).product();
        let mut weights = vec![0.0; n];
        let flat = flat_index(&axes, index)?;
        weights[flat] = 1.0;
        Self::new(axes, weights)
    }

    /// Builds a pmf from a weight function over multi-indices.
    pub fn from_fn(axes: Vec<Axis>, mut weight: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        check_axes(&axes)?;
        let cards: Vec<usize> = axes.iter().map(|a| a.card).collect();
        let n: usize = cards.iter().product();
        let mut idx = vec![0usize; cards.len()];
        let mut weights = Vec::with_capacity(n);
        for _ in 0..n {
            weights.push(weight(&idx));
            advance(&mut idx, &cards);
        }
        Self::new(axes, weights)
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn vars(&self) -> VarSet {
        self.axes.iter().map(|a| a.var).collect()
    }

    pub fn card(&self, var: VariableId) -> Option<usize> {
        self.axes.iter().find(|a| a.var == var).map(|a| a.card)
    }

    pub fn prob(&self, index: &[usize]) -> Result<f64> {
        Ok(self.weights[flat_index(&self.axes, index)?])
    }

    /// Sums out every axis not in `keep`; kept axes retain their order.
    pub fn marginalize(&self, keep: impl Into<VarSet>) -> Result<JointPmf> {
        let keep = keep.into();
        self.require(keep)?;
        Ok(self.marginal(keep))
    }

    /// Same distribution with axes permuted into `order`.
    pub fn reorder(&self, order: &[VariableId]) -> Result<JointPmf> {
        let target: VarSet = order.into();
        if target != self.vars() || order.len() != self.axes.len() {
            return Err(Error::ShapeMismatch(format!(
                "axis order {:?} is not a permutation of {:?}",
                target,
                self.vars()
            )));
        }
        let src_strides = strides(&self.cards());
        let pos: Vec<usize> = order
            .iter()
            .map(|v| self.axes.iter().position(|a| a.var == *v).unwrap())
            .collect();
        let axes: Vec<Axis> = pos.iter().map(|&p| self.axes[p]).collect();
        let cards: Vec<usize> = axes.iter().map(|a| a.card).collect();
        let mut idx = vec![0usize; cards.len()];
        let mut weights = Vec::with_capacity(self.weights.len());
        for _ in 0..self.weights.len() {
            let src: usize = idx.iter().zip(&pos).map(|(i, &p)| i * src_strides[p]).sum();
            weights.push(self.weights[src]);
            advance(&mut idx, &cards);
        }
        Ok(JointPmf::from_parts(axes, weights))
    }

    pub(crate) fn cards(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.card).collect()
    }

    pub(crate) fn require(&self, vars: VarSet) -> Result<()> {
        let have = self.vars();
        match vars.iter().find(|v| !have.contains(*v)) {
            Some(missing) => Err(Error::MissingAxis(missing)),
            None => Ok(()),
        }
    }

    pub(crate) fn marginal(&self, keep: VarSet) -> JointPmf {
        if keep == self.vars() {
            return self.clone();
        }
        let kept: Vec<Axis> = self
            .axes
            .iter()
            .copied()
            .filter(|a| keep.contains(a.var))
            .collect();
        let kept_strides = strides(&kept.iter().map(|a| a.card).collect::<Vec<_>>());
        let mut out_stride = vec![0usize; self.axes.len()];
        let mut k = 0;
        for (a, axis) in self.axes.iter().enumerate() {
            if keep.contains(axis.var) {
                out_stride[a] = kept_strides[k];
                k += 1;
            }
        }
        let cards = self.cards();
        let mut out = vec![0.0; kept.iter().map(|a| a.card).product()];
        let mut idx = vec![0usize; cards.len()];
        let mut off = 0usize;
        for &w in &self.weights {
            out[off] += w;
            let mut a = cards.len();
            while a > 0 {
                a -= 1;
                idx[a] += 1;
                off += out_stride[a];
                if idx[a] < cards[a] {
                    break;
                }
                off -= out_stride[a] * cards[a];
                idx[a] = 0;
            }
        }
        JointPmf::from_parts(kept, out)
    }
}

fn check_axes(axes: &[Axis]) -> Result<()> {
    let mut seen = VarSet::EMPTY;
    for axis in axes {
        if seen.contains(axis.var) {
            return Err(Error::DuplicateAxis(axis.var));
        }
        if axis.card == 0 {
            return Err(Error::ShapeMismatch(format!("axis {} has cardinality 0", axis.var)));
        }
        seen = seen.with(axis.var);
    }
    Ok(())
}

fn flat_index(axes: &[Axis], index: &[usize]) -> Result<usize> {
    if index.len() != axes.len() || index.iter().zip(axes).any(|(i, a)| *i >= a.card) {
        return Err(Error::ShapeMismatch(format!(
            "index {index:?} out of range for {} axes",
            axes.len()
        )));
    }
    Ok(index.iter().zip(axes).fold(0, |acc, (i, a)| acc * a.card + i))
}

/// For each flat index of a pmf over `axes`, the flat index of its image in
/// the marginal on `keep`.
pub(crate) fn projection(axes: &[Axis], keep: VarSet) -> Vec<usize> {
    let kept_cards: Vec<usize> = axes.iter().filter(|a| keep.contains(a.var)).map(|a| a.card).collect();
    let kept_strides = strides(&kept_cards);
    let mut out_stride = vec![0; axes.len()];
    let mut k = 0;
    for (i, a) in axes.iter().enumerate() {
        if keep.contains(a.var) {
            out_stride[i] = kept_strides[k];
            k += 1;
        }
    }
    let cards: Vec<usize> = axes.iter().map(|a| a.card).collect();
    let total: usize = cards.iter().product();
    let mut idx = vec![0; cards.len()];
    let mut map = Vec::with_capacity(total);
    for _ in 0..total {
        map.push(idx.iter().zip(&out_stride).map(|(i, s)| i * s).sum());
        advance(&mut idx, &cards);
    }
    map
}

/// Odometer step in row-major order.
pub(crate) fn advance(idx: &mut [usize], cards: &[usize]) {
    for a in (0..cards.len()).rev() {
        idx[a] += 1;
        if idx[a] < cards[a] {
            return;
        }
        idx[a] = 0;
    }
}

pub(crate) fn shannon_bits(weights: &[f64]) -> f64 {
    -weights
        .iter()
        .filter(|w| **w > 0.0)
        .map(|w| w * w.log2())
        .sum::<f64>()
}

pub(crate) fn clamp_nonnegative(x: f64) -> Result<f64> {
    if x >= 0.0 {
        Ok(x)
    } else if x >= -NEGATIVE_SLACK {
        Ok(0.0)
    } else {
        Err(Error::NegativeInformation(x))
    }
}

/// Memoizing evaluator for information measures of one joint pmf.
pub struct InfoCalc<'a> {
    joint: &'a JointPmf,
    vars: VarSet,
    marginals: Vec<(VarSet, JointPmf)>,
    entropies: [f64; 256],
}

impl<'a> InfoCalc<'a> {
    pub fn new(joint: &'a JointPmf) -> Self {
        Self {
            joint,
            vars: joint.vars(),
            marginals: Vec::new(),
            entropies: [f64::NAN; 256],
        }
    }

    pub fn joint(&self) -> &JointPmf {
        self.joint
    }

    /// H(vars) in bits.
    pub fn entropy(&mut self, vars: impl Into<VarSet>) -> Result<f64> {
        let vars = vars.into();
        self.joint.require(vars)?;
        Ok(self.raw_entropy(vars))
    }

    /// H(vars | given) = H(vars, given) - H(given).
    pub fn conditional_entropy(
        &mut self,
        vars: impl Into<VarSet>,
        given: impl Into<VarSet>,
    ) -> Result<f64> {
        let (vars, given) = (vars.into(), given.into());
        self.joint.require(vars.union(given))?;
        conditional_entropy_of(self, vars, given)
    }

    /// I(a; b).
    pub fn mutual_information(&mut self, a: impl Into<VarSet>, b: impl Into<VarSet>) -> Result<f64> {
        self.conditional_mutual_information(a, b, VarSet::EMPTY)
    }

    /// I(a; b | given) = H(a,g) + H(b,g) - H(a,b,g) - H(g).
    pub fn conditional_mutual_information(
        &mut self,
        a: impl Into<VarSet>,
        b: impl Into<VarSet>,
        given: impl Into<VarSet>,
    ) -> Result<f64> {
        let (a, b, given) = (a.into(), b.into(), given.into());
        self.joint.require(a.union(b).union(given))?;
        cmi_of(self, a, b, given)
    }

    fn raw_entropy(&mut self, set: VarSet) -> f64 {
        let cached = self.entropies[set.bits()];
        if !cached.is_nan() {
            return cached;
        }
        let h = if set.is_empty() {
            0.0
        } else if set == self.vars {
            shannon_bits(self.joint.weights())
        } else {
            // Marginalize from the smallest already-computed superset.
            let source = self
                .marginals
                .iter()
                .filter(|(vars, _)| set.is_subset(*vars))
                .map(|(_, pmf)| pmf)
                .min_by_key(|pmf| pmf.weights().len())
                .unwrap_or(self.joint);
            let marginal = source.marginal(set);
            let h = shannon_bits(marginal.weights());
            self.marginals.push((set, marginal));
            h
        };
        self.entropies[set.bits()] = h;
        h
    }
}

/// Anything that can report the entropy of a set of variables. Callers are
/// responsible for only asking about variables that exist.
pub(crate) trait EntropySource {
    fn entropy_bits(&mut self, set: VarSet) -> f64;
}

impl EntropySource for InfoCalc<'_> {
    fn entropy_bits(&mut self, set: VarSet) -> f64 {
        self.raw_entropy(set)
    }
}

pub(crate) fn conditional_entropy_of<E: EntropySource>(
    src: &mut E,
    vars: VarSet,
    given: VarSet,
) -> Result<f64> {
    disjoint(&[vars, given])?;
    clamp_nonnegative(src.entropy_bits(vars.union(given)) - src.entropy_bits(given))
}

pub(crate) fn cmi_of<E: EntropySource>(src: &mut E, a: VarSet, b: VarSet, given: VarSet) -> Result<f64> {
    disjoint(&[a, b, given])?;
    if a.is_empty() || b.is_empty() {
        return Ok(0.0);
    }
    let value = src.entropy_bits(a.union(given)) + src.entropy_bits(b.union(given))
        - src.entropy_bits(a.union(b).union(given))
        - src.entropy_bits(given);
    clamp_nonnegative(value)
}

fn disjoint(sets: &[VarSet]) -> Result<()> {
    for (i, a) in sets.iter().enumerate() {
        for b in &sets[i + 1..] {
            if !a.is_disjoint(*b) {
                return Err(Error::OverlappingSets(a.intersection(*b)));
            }
        }
    }
    Ok(())
}

/// H(vars) of `pmf`.
pub fn entropy(pmf: &JointPmf, vars: impl Into<VarSet>) -> Result<f64> {
    InfoCalc::new(pmf).entropy(vars)
}

pub fn conditional_entropy(
    pmf: &JointPmf,
    vars: impl Into<VarSet>,
    given: impl Into<VarSet>,
) -> Result<f64> {
    InfoCalc::new(pmf).conditional_entropy(vars, given)
}

pub fn mutual_information(pmf: &JointPmf, a: impl Into<VarSet>, b: impl Into<VarSet>) -> Result<f64> {
    InfoCalc::new(pmf).mutual_information(a, b)
}

pub fn conditional_mutual_information(
    pmf: &JointPmf,
    a: impl Into<VarSet>,
    b: impl Into<VarSet>,
    given: impl Into<VarSet>,
) -> Result<f64> {
    InfoCalc::new(pmf).conditional_mutual_information(a, b, given)
}

/// Binary entropy function h(p) in bits.
pub fn binary_entropy(p: f64) -> f64 {
    shannon_bits(&[p, 1.0 - p])
}
