//! Joint distributions built from the factorization structures of the rate
//! regions, random witnesses, the logit parameterization used by the
//! optimizer, and a numerical Markov-chain check.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use serde::Serialize;

use crate::channel::{AlphabetSpec, ChannelLaw};
use crate::error::{Error, Result};
use crate::info::{projection, Axis, JointPmf, VarSet, VariableId};
use crate::table::ConditionalTable;

use VariableId::{T, U, V, X1, X2, Xr1, Y1, Y2};

/// Events of probability at most this are skipped by [`verify_markov`].
pub const MARKOV_EVENT_FLOOR: f64 = 1e-12;

/// Cardinalities of the auxiliary variables U, V and T.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct AuxCardinalities {
    pub u: usize,
    pub v: usize,
    pub t: usize,
}

impl AuxCardinalities {
    pub fn new(u: usize, v: usize, t: usize) -> Result<Self> {
        if u == 0 || v == 0 || t == 0 {
            return Err(Error::Config(format!(
                "auxiliary cardinalities must be positive, got ({u}, {v}, {t})"
            )));
        }
        Ok(Self { u, v, t })
    }

    /// min(4, |X1||X2||Xr1|) for each auxiliary.
    pub fn default_for(alphabets: &AlphabetSpec) -> Self {
        let c = alphabets.inputs().min(4);
        Self { u: c, v: c, t: c }
    }
}

/// p(xr1) p(u,x2|xr1) p(v|u,x2,xr1) p(x1|u,v,x2,xr1).
///
/// Row and column orders:
/// - `f_ux2`: row xr1, column `u * |X2| + x2`
/// - `f_v`: row `(u * |X2| + x2) * |Xr1| + xr1`
/// - `f_x1`: row `((u * |V| + v) * |X2| + x2) * |Xr1| + xr1`
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InnerFactorization {
    alphabets: AlphabetSpec,
    card_u: usize,
    card_v: usize,
    f_xr1: ConditionalTable,
    f_ux2: ConditionalTable,
    f_v: ConditionalTable,
    f_x1: ConditionalTable,
}

fn check_shape(name: &str, table: &ConditionalTable, rows: usize, cols: usize) -> Result<()> {
    if table.rows() != rows || table.cols() != cols {
        return Err(Error::ShapeMismatch(format!(
            "{name} is {}x{}, expected {rows}x{cols}",
            table.rows(),
            table.cols()
        )));
    }
    Ok(())
}

impl InnerFactorization {
    pub fn new(
        alphabets: AlphabetSpec,
        card_u: usize,
        card_v: usize,
        f_xr1: ConditionalTable,
        f_ux2: ConditionalTable,
        f_v: ConditionalTable,
        f_x1: ConditionalTable,
    ) -> Result<Self> {
        let a = &alphabets;
        let (cx1, cx2, cr) = (a.card_x1, a.card_x2, a.card_xr1);
        check_shape("p(xr1)", &f_xr1, 1, cr)?;
        check_shape("p(u,x2|xr1)", &f_ux2, cr, card_u * cx2)?;
        check_shape("p(v|u,x2,xr1)", &f_v, card_u * cx2 * cr, card_v)?;
        check_shape("p(x1|u,v,x2,xr1)", &f_x1, card_u * card_v * cx2 * cr, cx1)?;
        Ok(Self {
            alphabets,
            card_u,
            card_v,
            f_xr1,
            f_ux2,
            f_v,
            f_x1,
        })
    }

    pub fn alphabets(&self) -> &AlphabetSpec {
        &self.alphabets
    }

    pub fn card_u(&self) -> usize {
        self.card_u
    }

    pub fn card_v(&self) -> usize {
        self.card_v
    }

    pub fn f_xr1(&self) -> &ConditionalTable {
        &self.f_xr1
    }

    pub fn f_ux2(&self) -> &ConditionalTable {
        &self.f_ux2
    }

    pub fn f_v(&self) -> &ConditionalTable {
        &self.f_v
    }

    pub fn f_x1(&self) -> &ConditionalTable {
        &self.f_x1
    }

    /// p(u, v, x1, x2, xr1) with axes in that order.
    pub fn input_joint(&self) -> JointPmf {
        let a = &self.alphabets;
        let mut w = Vec::new();
        inner_input_weights(
            a,
            self.card_u,
            self.card_v,
            [self.f_xr1.data(), self.f_ux2.data(), self.f_v.data(), self.f_x1.data()],
            &mut w,
        );
        JointPmf::from_parts(
            vec![
                Axis::new(U, self.card_u),
                Axis::new(V, self.card_v),
                Axis::new(X1, a.card_x1),
                Axis::new(X2, a.card_x2),
                Axis::new(Xr1, a.card_xr1),
            ],
            w,
        )
    }

    /// Factors of an arbitrary p(u, v, x1, x2, xr1) (any axis order).
    /// Conditionals on zero-probability events are set uniform.
    pub fn from_input_joint(alphabets: AlphabetSpec, joint: &JointPmf) -> Result<Self> {
        let joint = joint.reorder(&[U, V, X1, X2, Xr1])?;
        let a = &alphabets;
        let (cx1, cx2, cr) = (a.card_x1, a.card_x2, a.card_xr1);
        let (cu, cv) = (joint.card(U).unwrap(), joint.card(V).unwrap());
        if joint.card(X1) != Some(cx1) || joint.card(X2) != Some(cx2) || joint.card(Xr1) != Some(cr) {
            return Err(Error::ShapeMismatch("input axes do not match the alphabets".into()));
        }
        let p = |u: usize, v: usize, x1: usize, x2: usize, xr1: usize| {
            joint.weights()[(((u * cv + v) * cx1 + x1) * cx2 + x2) * cr + xr1]
        };
        let normalize = |mut row: Vec<f64>| {
            let total: f64 = row.iter().sum();
            if total > 0.0 {
                row.iter_mut().for_each(|x| *x /= total);
            } else {
                let n = row.len() as f64;
                row.iter_mut().for_each(|x| *x = 1.0 / n);
            }
            row
        };

        let mut p_uvx2r = vec![0.0; cu * cv * cx2 * cr];
        for u in 0..cu {
            for v in 0..cv {
                for x2 in 0..cx2 {
                    for xr1 in 0..cr {
                        p_uvx2r[((u * cv + v) * cx2 + x2) * cr + xr1] =
                            (0..cx1).map(|x1| p(u, v, x1, x2, xr1)).sum();
                    }
                }
            }
        }
        let p_ux2r = |u: usize, x2: usize, xr1: usize| -> f64 {
            (0..cv).map(|v| p_uvx2r[((u * cv + v) * cx2 + x2) * cr + xr1]).sum()
        };

        let xr1_row = normalize(
            (0..cr)
                .map(|xr1| (0..cu).flat_map(|u| (0..cx2).map(move |x2| (u, x2))).map(|(u, x2)| p_ux2r(u, x2, xr1)).sum())
                .collect(),
        );
        let mut ux2 = Vec::with_capacity(cr * cu * cx2);
        for xr1 in 0..cr {
            ux2.extend(normalize(
                (0..cu).flat_map(|u| (0..cx2).map(move |x2| (u, x2))).map(|(u, x2)| p_ux2r(u, x2, xr1)).collect(),
            ));
        }
        let mut fv = Vec::with_capacity(cu * cx2 * cr * cv);
        for u in 0..cu {
            for x2 in 0..cx2 {
                for xr1 in 0..cr {
                    fv.extend(normalize(
                        (0..cv).map(|v| p_uvx2r[((u * cv + v) * cx2 + x2) * cr + xr1]).collect(),
                    ));
                }
            }
        }
        let mut fx1 = Vec::with_capacity(cu * cv * cx2 * cr * cx1);
        for u in 0..cu {
            for v in 0..cv {
                for x2 in 0..cx2 {
                    for xr1 in 0..cr {
                        fx1.extend(normalize((0..cx1).map(|x1| p(u, v, x1, x2, xr1)).collect()));
                    }
                }
            }
        }
        Self::new(
            alphabets,
            cu,
            cv,
            ConditionalTable::new(1, cr, xr1_row)?,
            ConditionalTable::new(cr, cu * cx2, ux2)?,
            ConditionalTable::new(cu * cx2 * cr, cv, fv)?,
            ConditionalTable::new(cu * cv * cx2 * cr, cx1, fx1)?,
        )
    }
}

/// p(xr1) p(x2|xr1) p(v|x2,xr1) p(t|v,x2,xr1) p(x1|v,t,x2,xr1): a chain-rule
/// parameterization of an arbitrary p(v, t, x1, x2, xr1).
///
/// Row orders: `f_x2` row xr1; `f_v` row `x2 * |Xr1| + xr1`; `f_t` row
/// `(v * |X2| + x2) * |Xr1| + xr1`; `f_x1` row
/// `((v * |T| + t) * |X2| + x2) * |Xr1| + xr1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OuterFactorization {
    alphabets: AlphabetSpec,
    card_v: usize,
    card_t: usize,
    f_xr1: ConditionalTable,
    f_x2: ConditionalTable,
    f_v: ConditionalTable,
    f_t: ConditionalTable,
    f_x1: ConditionalTable,
}

impl OuterFactorization {
    pub fn new(
        alphabets: AlphabetSpec,
        card_v: usize,
        card_t: usize,
        tables: [ConditionalTable; 5],
    ) -> Result<Self> {
        let a = &alphabets;
        let (cx1, cx2, cr) = (a.card_x1, a.card_x2, a.card_xr1);
        let [f_xr1, f_x2, f_v, f_t, f_x1] = tables;
        check_shape("p(xr1)", &f_xr1, 1, cr)?;
        check_shape("p(x2|xr1)", &f_x2, cr, cx2)?;
        check_shape("p(v|x2,xr1)", &f_v, cx2 * cr, card_v)?;
        check_shape("p(t|v,x2,xr1)", &f_t, card_v * cx2 * cr, card_t)?;
        check_shape("p(x1|v,t,x2,xr1)", &f_x1, card_v * card_t * cx2 * cr, cx1)?;
        Ok(Self {
            alphabets,
            card_v,
            card_t,
            f_xr1,
            f_x2,
            f_v,
            f_t,
            f_x1,
        })
    }

    pub fn tables(&self) -> [&ConditionalTable; 5] {
        [&self.f_xr1, &self.f_x2, &self.f_v, &self.f_t, &self.f_x1]
    }

    pub fn witness(&self) -> OuterWitness {
        let a = &self.alphabets;
        let mut w = Vec::new();
        outer_input_weights(
            a,
            self.card_v,
            self.card_t,
            [
                self.f_xr1.data(),
                self.f_x2.data(),
                self.f_v.data(),
                self.f_t.data(),
                self.f_x1.data(),
            ],
            &mut w,
        );
        OuterWitness {
            alphabets: self.alphabets,
            joint: JointPmf::from_parts(
                vec![
                    Axis::new(V, self.card_v),
                    Axis::new(T, self.card_t),
                    Axis::new(X1, a.card_x1),
                    Axis::new(X2, a.card_x2),
                    Axis::new(Xr1, a.card_xr1),
                ],
                w,
            ),
        }
    }
}

/// Visits the cells of p(u, v, x1, x2, xr1) in row-major order, passing the
/// flat index of each inner factor entry the cell multiplies.
pub(crate) fn inner_cell_factors(a: &AlphabetSpec, cu: usize, cv: usize, mut visit: impl FnMut([usize; 4])) {
    let (cx1, cx2, cr) = (a.card_x1, a.card_x2, a.card_xr1);
    for u in 0..cu {
        for v in 0..cv {
            for x1 in 0..cx1 {
                for x2 in 0..cx2 {
                    for xr1 in 0..cr {
                        let ux2_row = (u * cx2 + x2) * cr + xr1;
                        let x1_row = ((u * cv + v) * cx2 + x2) * cr + xr1;
                        visit([xr1, xr1 * cu * cx2 + u * cx2 + x2, ux2_row * cv + v, x1_row * cx1 + x1]);
                    }
                }
            }
        }
    }
}

/// Outer counterpart of [`inner_cell_factors`] over p(v, t, x1, x2, xr1).
pub(crate) fn outer_cell_factors(a: &AlphabetSpec, cv: usize, ct: usize, mut visit: impl FnMut([usize; 5])) {
    let (cx1, cx2, cr) = (a.card_x1, a.card_x2, a.card_xr1);
    for v in 0..cv {
        for t in 0..ct {
            for x1 in 0..cx1 {
                for x2 in 0..cx2 {
                    for xr1 in 0..cr {
                        let v_row = x2 * cr + xr1;
                        let t_row = (v * cx2 + x2) * cr + xr1;
                        let x1_row = ((v * ct + t) * cx2 + x2) * cr + xr1;
                        visit([xr1, xr1 * cx2 + x2, v_row * cv + v, t_row * ct + t, x1_row * cx1 + x1]);
                    }
                }
            }
        }
    }
}

/// Row-major weights of p(u, v, x1, x2, xr1) from the flat data of the four
/// inner factors, written into `out`.
pub(crate) fn inner_input_weights(
    a: &AlphabetSpec,
    cu: usize,
    cv: usize,
    [f_xr1, f_ux2, f_v, f_x1]: [&[f64]; 4],
    out: &mut Vec<f64>,
) {
    out.clear();
    inner_cell_factors(a, cu, cv, |[i, j, k, l]| out.push(f_xr1[i] * f_ux2[j] * f_v[k] * f_x1[l]));
}

/// Row-major weights of p(v, t, x1, x2, xr1) from the flat data of the five
/// outer factors, written into `out`.
pub(crate) fn outer_input_weights(
    a: &AlphabetSpec,
    cv: usize,
    ct: usize,
    [f_xr1, f_x2, f_v, f_t, f_x1]: [&[f64]; 5],
    out: &mut Vec<f64>,
) {
    out.clear();
    outer_cell_factors(a, cv, ct, |[i, j, k, l, m]| {
        out.push(f_xr1[i] * f_x2[j] * f_v[k] * f_t[l] * f_x1[m])
    });
}

/// An arbitrary p(v, t, x1, x2, xr1), axes stored in that order.
#[derive(Debug, Clone, PartialEq)]
pub struct OuterWitness {
    alphabets: AlphabetSpec,
    joint: JointPmf,
}

impl OuterWitness {
    pub fn new(alphabets: AlphabetSpec, joint: &JointPmf) -> Result<Self> {
        let joint = joint.reorder(&[V, T, X1, X2, Xr1])?;
        if joint.card(X1) != Some(alphabets.card_x1)
            || joint.card(X2) != Some(alphabets.card_x2)
            || joint.card(Xr1) != Some(alphabets.card_xr1)
        {
            return Err(Error::ShapeMismatch("input axes do not match the alphabets".into()));
        }
        Ok(Self { alphabets, joint })
    }

    pub fn joint(&self) -> &JointPmf {
        &self.joint
    }

    pub fn alphabets(&self) -> &AlphabetSpec {
        &self.alphabets
    }
}

/// Appends (Y1, Y2) to a pmf whose last three axes are (X1, X2, Xr1).
fn attach_channel(inputs: &JointPmf, law: &ChannelLaw) -> Result<JointPmf> {
    let a = law.alphabets();
    let axes = inputs.axes();
    let n = axes.len();
    let tail_ok = n >= 3
        && axes[n - 3] == Axis::new(X1, a.card_x1)
        && axes[n - 2] == Axis::new(X2, a.card_x2)
        && axes[n - 1] == Axis::new(Xr1, a.card_xr1);
    if !tail_ok {
        return Err(Error::ShapeMismatch(
            "witness inputs do not match the channel alphabets".into(),
        ));
    }
    let mut weights = Vec::new();
    attach_channel_weights(inputs.weights(), law, &mut weights);
    let mut all_axes = axes.to_vec();
    all_axes.push(Axis::new(Y1, a.card_y1));
    all_axes.push(Axis::new(Y2, a.card_y2));
    Ok(JointPmf::from_parts(all_axes, weights))
}

/// Multiplies every input cell by its channel slice. The inputs must be
/// row-major with (x1, x2, xr1) as the fastest axes.
pub(crate) fn attach_channel_weights(inputs: &[f64], law: &ChannelLaw, out: &mut Vec<f64>) {
    let n = law.alphabets().inputs();
    out.clear();
    for block in inputs.chunks_exact(n) {
        for (input, &w) in block.iter().enumerate() {
            out.extend(law.slice(input).iter().map(|p| w * p));
        }
    }
}

/// Joint p(u, v, x1, x2, xr1, y1, y2) of a factorization and a channel.
pub fn build_inner_joint(factors: &InnerFactorization, law: &ChannelLaw) -> Result<JointPmf> {
    if factors.alphabets() != law.alphabets() {
        return Err(Error::ShapeMismatch("factorization and channel alphabets differ".into()));
    }
    attach_channel(&factors.input_joint(), law)
}

/// Joint p(v, t, x1, x2, xr1, y1, y2) of an outer witness and a channel.
pub fn build_outer_joint(witness: &OuterWitness, law: &ChannelLaw) -> Result<JointPmf> {
    if witness.alphabets() != law.alphabets() {
        return Err(Error::ShapeMismatch("witness and channel alphabets differ".into()));
    }
    attach_channel(witness.joint(), law)
}

/// Largest |p(right | mid, left) - p(right | mid)| over events with
/// p(mid, left) above [`MARKOV_EVENT_FLOOR`]; zero iff left -> mid -> right.
pub fn verify_markov(
    pmf: &JointPmf,
    left: impl Into<VarSet>,
    mid: impl Into<VarSet>,
    right: impl Into<VarSet>,
) -> Result<f64> {
    let (left, mid, right) = (left.into(), mid.into(), right.into());
    for (a, b) in [(left, mid), (left, right), (mid, right)] {
        if !a.is_disjoint(b) {
            return Err(Error::OverlappingSets(a.intersection(b)));
        }
    }
    let all = left.union(mid).union(right);
    let lmr = pmf.marginalize(all)?;
    let lm = lmr.marginal(left.union(mid));
    let mr = lmr.marginal(mid.union(right));
    let m = lmr.marginal(mid);
    let to_lm = projection(lmr.axes(), left.union(mid));
    let to_mr = projection(lmr.axes(), mid.union(right));
    let to_m = projection(lmr.axes(), mid);
    let mut worst = 0.0f64;
    for (i, &p) in lmr.weights().iter().enumerate() {
        let p_lm = lm.weights()[to_lm[i]];
        let p_m = m.weights()[to_m[i]];
        if p_lm <= MARKOV_EVENT_FLOOR || p_m <= MARKOV_EVENT_FLOOR {
            continue;
        }
        worst = worst.max((p / p_lm - mr.weights()[to_mr[i]] / p_m).abs());
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WitnessKind {
    Inner,
    Outer,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    Inner(InnerFactorization),
    Outer(OuterWitness),
}

/// Shapes of the row-stochastic tables behind a parameter vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowLayout {
    blocks: Vec<(usize, usize)>,
}

impl RowLayout {
    pub fn inner(alphabets: &AlphabetSpec, aux: &AuxCardinalities) -> Self {
        let (cx1, cx2, cr) = (alphabets.card_x1, alphabets.card_x2, alphabets.card_xr1);
        let (cu, cv) = (aux.u, aux.v);
        Self {
            blocks: vec![
                (1, cr),
                (cr, cu * cx2),
                (cu * cx2 * cr, cv),
                (cu * cv * cx2 * cr, cx1),
            ],
        }
    }

    pub fn outer(alphabets: &AlphabetSpec, aux: &AuxCardinalities) -> Self {
        let (cx1, cx2, cr) = (alphabets.card_x1, alphabets.card_x2, alphabets.card_xr1);
        let (cv, ct) = (aux.v, aux.t);
        Self {
            blocks: vec![
                (1, cr),
                (cr, cx2),
                (cx2 * cr, cv),
                (cv * cx2 * cr, ct),
                (cv * ct * cx2 * cr, cx1),
            ],
        }
    }

    pub fn for_kind(kind: WitnessKind, alphabets: &AlphabetSpec, aux: &AuxCardinalities) -> Self {
        match kind {
            WitnessKind::Inner => Self::inner(alphabets, aux),
            WitnessKind::Outer => Self::outer(alphabets, aux),
        }
    }

    /// (rows, row length) of each table.
    pub fn blocks(&self) -> &[(usize, usize)] {
        &self.blocks
    }

    /// Total parameter count.
    pub fn len(&self) -> usize {
        self.blocks.iter().map(|(r, c)| r * c).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Exponential normalization of every row.
    pub fn decode(&self, theta: &[f64]) -> Result<Vec<ConditionalTable>> {
        let mut flat = Vec::new();
        self.decode_flat(theta, &mut flat)?;
        let mut offset = 0;
        Ok(self
            .blocks
            .iter()
            .map(|&(rows, cols)| {
                let t = ConditionalTable::from_raw(rows, cols, flat[offset..offset + rows * cols].to_vec());
                offset += rows * cols;
                t
            })
            .collect())
    }

    /// Same as [`RowLayout::decode`] into one flat buffer, blocks in order.
    pub(crate) fn decode_flat(&self, theta: &[f64], out: &mut Vec<f64>) -> Result<()> {
        if theta.len() != self.len() {
            return Err(Error::ParamLength {
                expected: self.len(),
                found: theta.len(),
            });
        }
        out.clear();
        out.resize(theta.len(), 0.0);
        let mut offset = 0;
        for &(rows, cols) in &self.blocks {
            for _ in 0..rows {
                softmax_into(&theta[offset..offset + cols], &mut out[offset..offset + cols]);
                offset += cols;
            }
        }
        Ok(())
    }

    /// Incremental [`RowLayout::decode_flat`]: only rows whose logits differ
    /// from `prev` are renormalized. `prev` and `out` must come from earlier
    /// calls (or be empty) and are updated in place. The renormalized rows,
    /// numbered across blocks, go to `changed`; returns true when everything
    /// was decoded from scratch instead.
    pub(crate) fn decode_changed(
        &self,
        theta: &[f64],
        prev: &mut Vec<f64>,
        out: &mut Vec<f64>,
        changed: &mut Vec<usize>,
    ) -> Result<bool> {
        changed.clear();
        if prev.len() != theta.len() || out.len() != theta.len() {
            self.decode_flat(theta, out)?;
            prev.clear();
            prev.extend_from_slice(theta);
            return Ok(true);
        }
        let mut offset = 0;
        let mut row = 0;
        for &(rows, cols) in &self.blocks {
            for _ in 0..rows {
                let range = offset..offset + cols;
                if theta[range.clone()] != prev[range.clone()] {
                    softmax_into(&theta[range.clone()], &mut out[range.clone()]);
                    prev[range.clone()].copy_from_slice(&theta[range]);
                    changed.push(row);
                }
                offset += cols;
                row += 1;
            }
        }
        Ok(false)
    }

}

fn softmax_into(row: &[f64], out: &mut [f64]) {
    let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    for (o, t) in out.iter_mut().zip(row) {
        *o = (t - max).exp();
    }
    let total: f64 = out.iter().sum();
    out.iter_mut().for_each(|p| *p /= total);
}

/// Log-weights of independent Dirichlet(1) rows: each row is a vector of
/// log Exp(1) draws, whose exponential normalization is uniform on the simplex.
pub fn sample_theta(layout: &RowLayout, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..layout.len())
        .map(|_| {
            let e: f64 = Exp1.sample(&mut rng);
            e.max(f64::MIN_POSITIVE).ln()
        })
        .collect()
}

pub fn params_to_factorization(
    theta: &[f64],
    alphabets: &AlphabetSpec,
    aux: &AuxCardinalities,
) -> Result<InnerFactorization> {
    let mut tables = RowLayout::inner(alphabets, aux).decode(theta)?.into_iter();
    let mut next = || tables.next().expect("layout has four blocks");
    InnerFactorization::new(*alphabets, aux.u, aux.v, next(), next(), next(), next())
}

pub fn params_to_outer(
    theta: &[f64],
    alphabets: &AlphabetSpec,
    aux: &AuxCardinalities,
) -> Result<OuterFactorization> {
    let tables: [ConditionalTable; 5] = RowLayout::outer(alphabets, aux)
        .decode(theta)?
        .try_into()
        .expect("layout has five blocks");
    OuterFactorization::new(*alphabets, aux.v, aux.t, tables)
}

/// Random witness with every conditional row drawn from Dirichlet(1).
pub fn sample_witness(
    kind: WitnessKind,
    alphabets: &AlphabetSpec,
    aux: &AuxCardinalities,
    seed: u64,
) -> Witness {
    let theta = sample_theta(&RowLayout::for_kind(kind, alphabets, aux), seed);
    match kind {
        WitnessKind::Inner => Witness::Inner(
            params_to_factorization(&theta, alphabets, aux).expect("layout matches"),
        ),
        WitnessKind::Outer => Witness::Outer(
            params_to_outer(&theta, alphabets, aux)
                .expect("layout matches")
                .witness(),
        ),
    }
}
