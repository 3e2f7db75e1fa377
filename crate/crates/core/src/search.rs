//! Multistart hill climbing over the logit parameterization.
//!
//! Each restart draws its starting point from a seed derived from the base
//! seed and the restart index, and its step sequence from a second seed that
//! also mixes in a caller-chosen salt. Restarts are therefore independent
//! work items: running them in parallel, or running more of them, never
//! changes the outcome of any one, and the merge picks the best value with
//! ties going to the smaller witness seed.

use std::f64::consts::LOG2_E;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{inner_terms, outer_terms, semidet_terms, BoundVector, Theorem};
use crate::channel::{classify_degraded, classify_semideterministic, ChannelLaw, DEFAULT_CLASSIFY_TOL};
use crate::distributions::{
    inner_cell_factors, outer_cell_factors, sample_theta, AuxCardinalities, RowLayout, WitnessKind,
};
use crate::error::{Error, Result};
use crate::info::{projection, shannon_bits, Axis, EntropySource, VarSet, VariableId};

use VariableId::{T, U, V, X1, X2, Xr1, Y1, Y2};

/// Logits are kept in [-LOGIT_BOUND, LOGIT_BOUND]; exp(-80) is far below
/// anything the information measures can resolve.
const LOGIT_BOUND: f64 = 40.0;

/// Multiplicative step decay after a coordinate move fails both ways.
const STEP_DECAY: f64 = 0.98;

/// How many times an accepted move is retried with a doubled step.
const MAX_EXTENSIONS: usize = 6;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of stream `stream` under `base`.
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    splitmix64(base ^ splitmix64(stream))
}

/// Which formulas a problem evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Target {
    Outer,
    Inner,
    Semidet,
    /// Only the joint; the caller supplies its own functional.
    Joint,
}

/// Records which entropies a functional asks for.
#[derive(Default)]
pub(crate) struct Recorder(pub Vec<VarSet>);

impl EntropySource for Recorder {
    fn entropy_bits(&mut self, set: VarSet) -> f64 {
        self.0.push(set);
        0.0
    }
}

/// Full rebuilds happen at least this often so that the running sums of
/// the incremental path cannot drift.
const REFRESH_INTERVAL: u32 = 512;

fn set_len(axes: &[Axis], set: VarSet) -> usize {
    axes.iter().filter(|a| set.contains(a.var)).map(|a| a.card).product()
}

/// -p ln p; slot sums are converted to bits when read.
fn entropy_term(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.ln()
    } else {
        0.0
    }
}

/// One tracked marginal with its entropy terms and their running sum.
struct Slot {
    /// Slot this one is summed out of on a full rebuild; the joint's own
    /// slot (index 0) has no source.
    source: usize,
    source_map: Vec<u32>,
    joint_map: Vec<u32>,
    marginal: Vec<f64>,
    terms: Vec<f64>,
    sum: f64,
    stamp: Vec<u32>,
    touched: Vec<u32>,
    /// Whether the entropy of this slot is asked for; the joint is always
    /// kept, but its terms only when needed.
    tracked: bool,
}

impl Slot {
    fn new(source: usize, source_map: Vec<u32>, joint_map: Vec<u32>, len: usize) -> Self {
        Self {
            source,
            source_map,
            joint_map,
            marginal: vec![0.0; len],
            terms: vec![0.0; len],
            sum: 0.0,
            stamp: vec![0; len],
            touched: Vec::new(),
            tracked: true,
        }
    }
}

/// Entropies of one joint held in reusable buffers.
///
/// Every marginal a functional needs is tracked in a slot. A full rebuild
/// sums each slot out of the smallest larger one; small changes of the
/// joint are pushed into the affected cells of every slot, and only those
/// cells have their entropy terms recomputed. Sets holding all three inputs
/// never need their output axes: given the inputs the outputs follow the
/// channel, so such an entropy is that of the set without outputs plus the
/// input-averaged entropy of the channel outputs. Anything else is computed
/// on demand from the joint.
pub(crate) struct FastEntropy {
    axes: Vec<Axis>,
    all: VarSet,
    slots: Vec<Slot>,
    slot_of: [usize; 256],
    /// For input-complete sets with outputs: slot of the set without
    /// outputs and which output entropies of the channel to add.
    via_channel: [Option<(usize, usize)>; 256],
    inputs_slot: usize,
    witness_slot: usize,
    /// H(Y1|x), H(Y2|x) and H(Y1,Y2|x) per input x, in nats.
    channel_entropies: [Vec<f64>; 3],
    epoch: u32,
    cache: [f64; 256],
    on_demand: Vec<Option<Vec<u32>>>,
}

impl FastEntropy {
    fn new(axes: Vec<Axis>, sets: &[VarSet], law: &ChannelLaw) -> Self {
        let all: VarSet = axes.iter().map(|a| a.var).collect();
        let inputs = VarSet::from([X1, X2, Xr1]);
        let outputs = VarSet::from([Y1, Y2]);
        let without_outputs = |s: VarSet| -> VarSet { s.iter().filter(|v| !outputs.contains(*v)).collect() };
        let by_channel = |s: VarSet| inputs.is_subset(s) && !s.is_disjoint(outputs);

        // Cells of the joint without outputs are a cheap source for every
        // output-free marginal, so they are always kept.
        let witness = without_outputs(all);
        let mut tracked: Vec<VarSet> = vec![inputs, witness];
        for &set in sets {
            if set.is_empty() || set == all {
                continue;
            }
            tracked.push(if by_channel(set) { without_outputs(set) } else { set });
        }
        tracked.sort_by_key(|s| (std::cmp::Reverse(set_len(&axes, *s)), s.bits()));
        tracked.dedup();
        tracked.insert(0, all);

        let to_u32 = |v: Vec<usize>| v.into_iter().map(|i| i as u32).collect::<Vec<u32>>();
        let requested = |set: VarSet| sets.contains(&set);
        let mut slot_of = [usize::MAX; 256];
        let mut slots = Vec::with_capacity(tracked.len());
        for (i, &set) in tracked.iter().enumerate() {
            let len = set_len(&axes, set);
            let joint_map = to_u32(projection(&axes, set));
            let mut slot = if i == 0 {
                Slot::new(0, Vec::new(), joint_map, len)
            } else {
                let source = (0..i)
                    .filter(|&k| set.is_subset(tracked[k]))
                    .min_by_key(|&k| set_len(&axes, tracked[k]))
                    .expect("the joint contains every set");
                let source_axes: Vec<Axis> =
                    axes.iter().copied().filter(|a| tracked[source].contains(a.var)).collect();
                Slot::new(source, to_u32(projection(&source_axes, set)), joint_map, len)
            };
            slot.tracked = set == inputs || requested(set) || sets.iter().any(|s| by_channel(*s) && without_outputs(*s) == set);
            if slot.tracked {
                slot_of[set.bits()] = i;
            }
            slots.push(slot);
        }

        let mut via_channel = [None; 256];
        for &set in sets {
            if set != all && by_channel(set) {
                let which = match (set.contains(Y1), set.contains(Y2)) {
                    (true, false) => 0,
                    (false, true) => 1,
                    _ => 2,
                };
                via_channel[set.bits()] = Some((slot_of[without_outputs(set).bits()], which));
            }
        }

        let a = law.alphabets();
        let mut channel_entropies = [Vec::new(), Vec::new(), Vec::new()];
        for x in 0..a.inputs() {
            let slice = law.slice(x);
            let y1: Vec<f64> = (0..a.card_y1).map(|y| slice[y * a.card_y2..(y + 1) * a.card_y2].iter().sum()).collect();
            let y2: Vec<f64> = (0..a.card_y2).map(|y| (0..a.card_y1).map(|k| slice[k * a.card_y2 + y]).sum()).collect();
            let nats = |p: &[f64]| p.iter().map(|&q| entropy_term(q)).sum::<f64>();
            channel_entropies[0].push(nats(&y1));
            channel_entropies[1].push(nats(&y2));
            channel_entropies[2].push(nats(slice));
        }

        Self {
            axes,
            all,
            slots,
            inputs_slot: slot_of[inputs.bits()],
            witness_slot: tracked.iter().position(|s| *s == witness).expect("always kept"),
            slot_of,
            via_channel,
            channel_entropies,
            epoch: 0,
            cache: [f64::NAN; 256],
            on_demand: vec![None; 256],
        }
    }

    fn joint_mut(&mut self) -> &mut [f64] {
        &mut self.slots[0].marginal
    }

    /// Recomputes every slot from the joint and the witness cells it was
    /// built from.
    fn rebuild(&mut self, witness: &[f64]) {
        self.cache = [f64::NAN; 256];
        for i in 0..self.slots.len() {
            if i == self.witness_slot {
                self.slots[i].marginal.copy_from_slice(witness);
            } else if i > 0 {
                let (done, rest) = self.slots.split_at_mut(i);
                let slot = &mut rest[0];
                let source = &done[slot.source].marginal;
                slot.marginal.iter_mut().for_each(|m| *m = 0.0);
                for (w, &m) in source.iter().zip(&slot.source_map) {
                    slot.marginal[m as usize] += w;
                }
            }
            let slot = &mut self.slots[i];
            if !slot.tracked {
                continue;
            }
            for (t, &p) in slot.terms.iter_mut().zip(&slot.marginal) {
                *t = entropy_term(p);
            }
            slot.sum = slot.terms.iter().sum();
        }
    }

    /// Starts a batch of incremental changes.
    fn begin(&mut self) {
        self.cache = [f64::NAN; 256];
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            for slot in &mut self.slots {
                slot.stamp.iter_mut().for_each(|s| *s = 0);
            }
            self.epoch = 1;
        }
    }

    /// Adds `delta` to joint cell `cell` and to its image in every slot.
    fn add(&mut self, cell: usize, delta: f64) {
        let epoch = self.epoch;
        for slot in &mut self.slots {
            let m = slot.joint_map[cell] as usize;
            slot.marginal[m] += delta;
            if slot.tracked && slot.stamp[m] != epoch {
                slot.stamp[m] = epoch;
                slot.touched.push(m as u32);
            }
        }
    }

    /// Ends a batch: refreshes the entropy terms of every touched cell.
    fn commit(&mut self) {
        for slot in &mut self.slots {
            for &m in &slot.touched {
                let m = m as usize;
                let t = entropy_term(slot.marginal[m]);
                slot.sum += t - slot.terms[m];
                slot.terms[m] = t;
            }
            slot.touched.clear();
        }
    }
}

impl EntropySource for FastEntropy {
    fn entropy_bits(&mut self, set: VarSet) -> f64 {
        let key = set.bits();
        if let Some((base, which)) = self.via_channel[key] {
            let px = &self.slots[self.inputs_slot].marginal;
            let average: f64 = px.iter().zip(&self.channel_entropies[which]).map(|(p, h)| p * h).sum();
            return (self.slots[base].sum + average) * LOG2_E;
        }
        if let Some(slot) = self.slots.get(self.slot_of[key]) {
            return slot.sum * LOG2_E;
        }
        if !self.cache[key].is_nan() {
            return self.cache[key];
        }
        let h = if set.is_empty() {
            0.0
        } else {
            debug_assert!(set.is_subset(self.all));
            let axes = &self.axes;
            let map = self.on_demand[key]
                .get_or_insert_with(|| projection(axes, set).into_iter().map(|i| i as u32).collect());
            let mut out = vec![0.0; set_len(axes, set)];
            for (w, &m) in self.slots[0].marginal.iter().zip(map.iter()) {
                out[m as usize] += w;
            }
            shannon_bits(&out)
        };
        self.cache[key] = h;
        h
    }
}

/// Per-thread scratch space of a [`Problem`].
pub(crate) struct Workspace {
    theta: Vec<f64>,
    probs: Vec<f64>,
    changed: Vec<usize>,
    inputs: Vec<f64>,
    cell_stamp: Vec<u32>,
    epoch: u32,
    since_rebuild: u32,
    pub(crate) info: FastEntropy,
}

/// One channel together with the witness family searched over.
pub(crate) struct Problem<'a> {
    law: &'a ChannelLaw,
    target: Target,
    kind: WitnessKind,
    aux: AuxCardinalities,
    layout: RowLayout,
    sets: Vec<VarSet>,
    /// Flat parameter index of every factor entry of every input cell,
    /// `factors_per_cell` entries per cell.
    cell_factors: Vec<u32>,
    factors_per_cell: usize,
    /// Input cells depending on each parameter row.
    row_cells: Vec<Vec<u32>>,
}

impl<'a> Problem<'a> {
    /// Search problem of a theorem's union. Refuses class-gated theorems on
    /// channels outside the class.
    pub(crate) fn for_theorem(law: &'a ChannelLaw, theorem: Theorem, aux: AuxCardinalities) -> Result<Self> {
        match theorem {
            Theorem::T1 => Ok(Self::new(law, Target::Outer, aux)),
            Theorem::T2 => Ok(Self::new(law, Target::Inner, aux)),
            Theorem::T3 => {
                let verdict = classify_degraded(law, DEFAULT_CLASSIFY_TOL);
                if !verdict.degraded {
                    return Err(Error::NotDegraded {
                        deviation: verdict.max_deviation,
                    });
                }
                Ok(Self::new(law, Target::Inner, aux))
            }
            Theorem::T4 => {
                let verdict = classify_semideterministic(law, DEFAULT_CLASSIFY_TOL);
                if !verdict.semideterministic {
                    return Err(Error::NotSemideterministic {
                        deviation: verdict.max_deviation,
                    });
                }
                Ok(Self::new(law, Target::Semidet, AuxCardinalities { u: 1, ..aux }))
            }
        }
    }

    pub(crate) fn new(law: &'a ChannelLaw, target: Target, aux: AuxCardinalities) -> Self {
        let kind = match target {
            Target::Outer => WitnessKind::Outer,
            _ => WitnessKind::Inner,
        };
        let mut rec = Recorder::default();
        // The recorder returns zeros, which no formula rejects.
        let _ = match target {
            Target::Outer => outer_terms(&mut rec).map(drop),
            Target::Inner => inner_terms(&mut rec).map(drop),
            Target::Semidet => semidet_terms(&mut rec).map(drop),
            Target::Joint => Ok(()),
        };
        let a = law.alphabets();
        let layout = RowLayout::for_kind(kind, a, &aux);

        let mut offsets = Vec::new();
        let mut row_base = Vec::new();
        let (mut offset, mut rows) = (0, 0);
        for &(r, c) in layout.blocks() {
            offsets.push(offset);
            row_base.push(rows);
            offset += r * c;
            rows += r;
        }
        let mut cell_factors = Vec::new();
        let mut push = |local: &[usize]| {
            for (k, &i) in local.iter().enumerate() {
                cell_factors.push((offsets[k] + i) as u32);
            }
        };
        let factors_per_cell = match kind {
            WitnessKind::Inner => {
                inner_cell_factors(a, aux.u, aux.v, |ix| push(&ix));
                4
            }
            WitnessKind::Outer => {
                outer_cell_factors(a, aux.v, aux.t, |ix| push(&ix));
                5
            }
        };
        let mut row_cells = vec![Vec::new(); rows];
        for (cell, factors) in cell_factors.chunks_exact(factors_per_cell).enumerate() {
            for (k, &flat) in factors.iter().enumerate() {
                let cols = layout.blocks()[k].1;
                let row = row_base[k] + (flat as usize - offsets[k]) / cols;
                row_cells[row].push(cell as u32);
            }
        }
        Self {
            law,
            target,
            kind,
            aux,
            layout,
            sets: rec.0,
            cell_factors,
            factors_per_cell,
            row_cells,
        }
    }

    /// Adds the entropies a caller-supplied functional needs to the plan.
    pub(crate) fn with_sets(mut self, sets: &[VarSet]) -> Self {
        self.sets.extend_from_slice(sets);
        self
    }

    pub(crate) fn layout(&self) -> &RowLayout {
        &self.layout
    }

    pub(crate) fn aux(&self) -> AuxCardinalities {
        self.aux
    }

    fn joint_axes(&self) -> Vec<Axis> {
        let a = self.law.alphabets();
        let (first, second) = match self.kind {
            WitnessKind::Inner => (Axis::new(U, self.aux.u), Axis::new(V, self.aux.v)),
            WitnessKind::Outer => (Axis::new(V, self.aux.v), Axis::new(T, self.aux.t)),
        };
        vec![
            first,
            second,
            Axis::new(X1, a.card_x1),
            Axis::new(X2, a.card_x2),
            Axis::new(Xr1, a.card_xr1),
            Axis::new(Y1, a.card_y1),
            Axis::new(Y2, a.card_y2),
        ]
    }

    pub(crate) fn workspace(&self) -> Workspace {
        let cells = self.cell_factors.len() / self.factors_per_cell;
        Workspace {
            theta: Vec::new(),
            probs: Vec::new(),
            changed: Vec::new(),
            inputs: vec![0.0; cells],
            cell_stamp: vec![0; cells],
            epoch: 0,
            since_rebuild: 0,
            info: FastEntropy::new(self.joint_axes(), &self.sets, self.law),
        }
    }

    fn cell_weight(&self, probs: &[f64], cell: usize) -> f64 {
        let k = self.factors_per_cell;
        self.cell_factors[cell * k..(cell + 1) * k]
            .iter()
            .map(|&i| probs[i as usize])
            .product()
    }

    /// Loads the joint of `theta` into `ws`. Only the cells that depend on
    /// changed parameter rows are updated unless a rebuild is due.
    pub(crate) fn load(&self, ws: &mut Workspace, theta: &[f64]) -> Result<()> {
        let fresh = self.layout.decode_changed(theta, &mut ws.theta, &mut ws.probs, &mut ws.changed)?;
        let cells = ws.inputs.len();
        let affected: usize = ws.changed.iter().map(|&r| self.row_cells[r].len()).sum();
        if fresh || affected * 4 > cells || ws.since_rebuild >= REFRESH_INTERVAL {
            self.rebuild(ws);
            return Ok(());
        }
        ws.since_rebuild += 1;
        ws.epoch = ws.epoch.wrapping_add(1);
        if ws.epoch == 0 {
            ws.cell_stamp.iter_mut().for_each(|s| *s = 0);
            ws.epoch = 1;
        }
        let inputs = self.law.alphabets().inputs();
        let outs = self.law.alphabets().outputs();
        ws.info.begin();
        for &row in &ws.changed {
            for &cell in &self.row_cells[row] {
                let cell = cell as usize;
                if ws.cell_stamp[cell] == ws.epoch {
                    continue;
                }
                ws.cell_stamp[cell] = ws.epoch;
                let w = self.cell_weight(&ws.probs, cell);
                let dw = w - ws.inputs[cell];
                ws.inputs[cell] = w;
                if dw == 0.0 {
                    continue;
                }
                let slice = self.law.slice(cell % inputs);
                for (y, &p) in slice.iter().enumerate() {
                    if p != 0.0 {
                        ws.info.add(cell * outs + y, dw * p);
                    }
                }
            }
        }
        ws.info.commit();
        Ok(())
    }

    fn rebuild(&self, ws: &mut Workspace) {
        ws.since_rebuild = 0;
        let inputs = self.law.alphabets().inputs();
        let outs = self.law.alphabets().outputs();
        for cell in 0..ws.inputs.len() {
            ws.inputs[cell] = self.cell_weight(&ws.probs, cell);
        }
        let joint = ws.info.joint_mut();
        for (cell, &w) in ws.inputs.iter().enumerate() {
            let slice = self.law.slice(cell % inputs);
            for (y, &p) in slice.iter().enumerate() {
                joint[cell * outs + y] = w * p;
            }
        }
        ws.info.rebuild(&ws.inputs);
    }

    /// Bound vector of `theta`.
    pub(crate) fn evaluate(&self, ws: &mut Workspace, theta: &[f64]) -> Result<BoundVector> {
        self.load(ws, theta)?;
        self.bounds_of_loaded(ws)
    }

    pub(crate) fn bounds_of_loaded(&self, ws: &mut Workspace) -> Result<BoundVector> {
        Ok(match self.target {
            Target::Outer => BoundVector::Outer(outer_terms(&mut ws.info)?),
            Target::Inner => BoundVector::Inner(inner_terms(&mut ws.info)?),
            Target::Semidet => BoundVector::Semidet(semidet_terms(&mut ws.info)?),
            Target::Joint => {
                return Err(Error::Precondition("problem has no bound formulas".into()))
            }
        })
    }
}

/// Budget of one multistart search.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Budget {
    pub restarts: usize,
    pub local_steps: usize,
    pub step_scale: f64,
    pub seed: u64,
}

/// Best point of one multistart search.
#[derive(Debug, Clone)]
pub(crate) struct Climb {
    pub theta: Vec<f64>,
    pub value: f64,
    pub witness_seed: u64,
}

/// Chance that a step moves every coordinate at once instead of one.
/// Single-coordinate moves stall where two caps of a polytope are active
/// together, since improving one cap alone worsens the other; joint moves
/// get past such kinks.
const JOINT_MOVE_RATE: f64 = 0.4;

/// Hill climbing from `theta`, maximizing `score`.
///
/// Every step draws a direction, either one coordinate with a random sign
/// or, with probability [`JOINT_MOVE_RATE`], a vector uniform on the cube,
/// and tries a move of the current step size along it and then the
/// opposite way. An accepted move is extended by doubling while it keeps
/// improving. A step that fails both ways shrinks the step size.
fn climb(
    theta: &mut [f64],
    steps: usize,
    step_scale: f64,
    rng: &mut ChaCha8Rng,
    score: &mut impl FnMut(&[f64]) -> f64,
) -> f64 {
    let n = theta.len();
    let mut best = score(theta);
    let mut step = step_scale;
    let mut dir: Vec<(usize, f64)> = Vec::with_capacity(n);
    let mut origin: Vec<f64> = Vec::with_capacity(n);
    let place = |theta: &mut [f64], dir: &[(usize, f64)], origin: &[f64], scale: f64| {
        for (&(i, g), &o) in dir.iter().zip(origin) {
            theta[i] = (o + scale * g).clamp(-LOGIT_BOUND, LOGIT_BOUND);
        }
    };
    for _ in 0..steps {
        dir.clear();
        if rng.random::<f64>() < JOINT_MOVE_RATE {
            dir.extend((0..n).map(|i| (i, rng.random_range(-1.0..1.0))));
        } else {
            let i = rng.random_range(0..n);
            dir.push((i, if rng.random::<bool>() { 1.0 } else { -1.0 }));
        }
        origin.clear();
        origin.extend(dir.iter().map(|&(i, _)| theta[i]));
        let mut accepted = false;
        for sign in [1.0, -1.0] {
            let mut stride = sign * step;
            place(theta, &dir, &origin, stride);
            let v = score(theta);
            if v > best {
                best = v;
                accepted = true;
                for _ in 0..MAX_EXTENSIONS {
                    place(theta, &dir, &origin, 2.0 * stride);
                    let v = score(theta);
                    if v > best {
                        best = v;
                        stride *= 2.0;
                    } else {
                        place(theta, &dir, &origin, stride);
                        break;
                    }
                }
                break;
            }
        }
        if !accepted {
            place(theta, &dir, &origin, 0.0);
            step *= STEP_DECAY;
        }
    }
    best
}

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

/// Runs `budget.restarts` independent climbs and merges them
/// deterministically. `salt` separates the step sequences of searches that
/// share a seed but optimize different objectives.
pub(crate) fn multistart<F>(problem: &Problem<'_>, budget: Budget, salt: u64, score: F) -> Climb
where
    F: Fn(&mut Workspace, &[f64]) -> f64 + Sync,
{
    let climbs: Vec<Climb> = (0..budget.restarts as u64)
        .into_par_iter()
        .map(|restart| {
            let witness_seed = derive_seed(budget.seed, restart);
            let mut ws = problem.workspace();
            let mut f = |t: &[f64]| sanitize(score(&mut ws, t));
            let mut theta = sample_theta(problem.layout(), witness_seed);
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(witness_seed, salt));
            let value = climb(&mut theta, budget.local_steps, budget.step_scale, &mut rng, &mut f);
            Climb {
                theta,
                value,
                witness_seed,
            }
        })
        .collect();
    climbs
        .into_iter()
        .reduce(|best, c| {
            if c.value > best.value || (c.value == best.value && c.witness_seed < best.witness_seed) {
                c
            } else {
                best
            }
        })
        .expect("at least one restart")
}
