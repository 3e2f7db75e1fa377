//! Exhaustive grid enumeration of bound values on binary instances, used
//! to certify the optimizer.
//!
//! The grid holds every witness pmf over the auxiliaries and inputs whose
//! cells are multiples of `1 / levels`. Every such pmf is a witness of the
//! theorem, since the factorizations searched by the optimizer reach any
//! pmf on these axes; the grid is just a finite, exactly reproducible
//! subset of the same union.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{caps_of, eval_inner_t2, eval_outer_t1, eval_semidet_t4, BoundVector, Theorem};
use crate::channel::{classify_degraded, classify_semideterministic, ChannelLaw, DEFAULT_CLASSIFY_TOL};
use crate::distributions::AuxCardinalities;
use crate::error::{Error, Result};
use crate::info::{Axis, JointPmf, VariableId};
use crate::region::{
    active_label, compute_frontier, frontier_gap, pareto_filter, vertices, Frontier, Provenance, RatePoint,
    SearchConfig,
};

use VariableId::{T, U, V, X1, X2, Xr1, Y1, Y2};

/// Default bound on the number of grid points.
pub const DEFAULT_GRID_CAP: u64 = 10_000_000;

/// Merge tolerance of the oracle's Pareto filter.
const ORACLE_PARETO_TOL: f64 = 1e-12;

/// Grid points handled between two Pareto compressions of a worker's list.
const COMPRESS_EVERY: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Common denominator of every cell of the witness pmf.
    pub levels: usize,
    /// Auxiliary cardinalities, each 1 or 2.
    pub aux: AuxCardinalities,
    /// Largest grid accepted.
    pub cap: u64,
}

impl GridSpec {
    /// Grid with binary auxiliaries and the default cap.
    pub fn new(levels: usize) -> Self {
        Self {
            levels,
            aux: AuxCardinalities { u: 2, v: 2, t: 2 },
            cap: DEFAULT_GRID_CAP,
        }
    }

    pub fn with_aux(mut self, aux: AuxCardinalities) -> Self {
        self.aux = aux;
        self
    }

    /// Auxiliary axes the witness of `theorem` carries on this grid.
    fn witness_axes(&self, theorem: Theorem) -> [Axis; 2] {
        match theorem {
            Theorem::T1 => [Axis::new(V, self.aux.v), Axis::new(T, self.aux.t)],
            Theorem::T2 | Theorem::T3 => [Axis::new(U, self.aux.u), Axis::new(V, self.aux.v)],
            Theorem::T4 => [Axis::new(U, 1), Axis::new(V, self.aux.v)],
        }
    }

    /// Number of grid points for a witness with `cells` cells.
    pub fn size(&self, cells: usize) -> u128 {
        compositions(self.levels, cells)
    }
}

/// Number of ways to write `n` as an ordered sum of `parts` naturals.
fn compositions(n: usize, parts: usize) -> u128 {
    if parts == 0 {
        return u128::from(n == 0);
    }
    // C(n + parts - 1, parts - 1), accumulated exactly.
    let k = (parts - 1) as u128;
    let mut c: u128 = 1;
    for i in 1..=k {
        c = c * (n as u128 + i) / i;
    }
    c
}

/// Frontier of every grid witness's polytope.
pub fn oracle_frontier(law: &ChannelLaw, theorem: Theorem, grid: &GridSpec) -> Result<Frontier> {
    let a = *law.alphabets();
    if [a.card_x1, a.card_x2, a.card_xr1, a.card_y1, a.card_y2].iter().any(|&c| c > 2) {
        return Err(Error::Precondition("the oracle needs binary alphabets".into()));
    }
    if [grid.aux.u, grid.aux.v, grid.aux.t].iter().any(|&c| c > 2) {
        return Err(Error::Precondition("the oracle needs auxiliary cardinalities of at most 2".into()));
    }
    if grid.levels < 2 {
        return Err(Error::Config("the oracle grid needs at least 2 levels".into()));
    }
    match theorem {
        Theorem::T3 => {
            let verdict = classify_degraded(law, DEFAULT_CLASSIFY_TOL);
            if !verdict.degraded {
                return Err(Error::NotDegraded {
                    deviation: verdict.max_deviation,
                });
            }
        }
        Theorem::T4 => {
            let verdict = classify_semideterministic(law, DEFAULT_CLASSIFY_TOL);
            if !verdict.semideterministic {
                return Err(Error::NotSemideterministic {
                    deviation: verdict.max_deviation,
                });
            }
        }
        _ => {}
    }

    let [first, second] = grid.witness_axes(theorem);
    let inputs = a.inputs();
    let cells = first.card * second.card * inputs;
    let size = grid.size(cells);
    if size > u128::from(grid.cap) {
        return Err(Error::GridTooLarge { size, cap: grid.cap });
    }
    let axes = vec![
        first,
        second,
        Axis::new(X1, a.card_x1),
        Axis::new(X2, a.card_x2),
        Axis::new(Xr1, a.card_xr1),
        Axis::new(Y1, a.card_y1),
        Axis::new(Y2, a.card_y2),
    ];
    let levels = grid.levels;

    // Work is split by the count in the first cell; each worker enumerates
    // the rest of its compositions in a fixed order.
    let parts: Vec<Vec<RatePoint>> = (0..=levels)
        .into_par_iter()
        .map(|head| -> Result<Vec<RatePoint>> {
            let mut points = Vec::new();
            let mut weights = vec![0.0; cells * a.outputs()];
            let mut pending = 0;
            let mut rest = vec![0usize; cells - 1];
            let mut result: Result<()> = Ok(());
            enumerate(levels - head, &mut rest, 0, &mut |tail| {
                if result.is_err() {
                    return;
                }
                for (cell, &k) in std::iter::once(&head).chain(tail.iter()).enumerate() {
                    let w = k as f64 / levels as f64;
                    let slice = law.slice(cell % inputs);
                    for (y, &p) in slice.iter().enumerate() {
                        weights[cell * slice.len() + y] = w * p;
                    }
                }
                match evaluate(theorem, JointPmf::from_parts(axes.clone(), weights.clone())) {
                    Ok(bounds) => {
                        let caps = caps_of(&bounds);
                        for (r1, r2) in vertices(&caps) {
                            points.push(RatePoint {
                                active: active_label(&caps, r1, r2),
                                ..RatePoint::new(r1, r2)
                            });
                        }
                    }
                    Err(e) => result = Err(e),
                }
                pending += 1;
                if pending == COMPRESS_EVERY {
                    points = pareto_filter(std::mem::take(&mut points), ORACLE_PARETO_TOL);
                    pending = 0;
                }
            });
            result?;
            Ok(pareto_filter(points, ORACLE_PARETO_TOL))
        })
        .collect::<Result<_>>()?;

    Ok(Frontier {
        points: pareto_filter(parts.into_iter().flatten().collect(), ORACLE_PARETO_TOL),
        theorem: Some(theorem),
        aux: Some(match theorem {
            Theorem::T4 => AuxCardinalities { u: 1, ..grid.aux },
            _ => grid.aux,
        }),
        mu_grid: Vec::new(),
        hull: false,
        provenance: Provenance::Oracle(grid.clone()),
    })
}

/// Calls `visit` with every composition of `n` into `parts.len()` parts,
/// in lexicographically decreasing order from position `at` on.
fn enumerate(n: usize, parts: &mut [usize], at: usize, visit: &mut impl FnMut(&[usize])) {
    if at + 1 == parts.len() {
        parts[at] = n;
        visit(parts);
        return;
    }
    for k in (0..=n).rev() {
        parts[at] = k;
        enumerate(n - k, parts, at + 1, visit);
    }
}

/// Bound vector of one grid witness. Class gates were checked up front, so
/// the degraded theorem evaluates with the inner formulas directly.
fn evaluate(theorem: Theorem, joint: JointPmf) -> Result<BoundVector> {
    Ok(match theorem {
        Theorem::T1 => BoundVector::Outer(eval_outer_t1(&joint)?),
        Theorem::T2 | Theorem::T3 => BoundVector::Inner(eval_inner_t2(&joint)?),
        Theorem::T4 => BoundVector::Semidet(eval_semidet_t4(&joint)?),
    })
}

/// max over the optimizer's weight grid of support(oracle) minus
/// support(optimizer). At most 0 when the optimizer matches or beats every
/// grid witness; the optimizer uses the grid's auxiliary cardinalities.
pub fn compare_to_oracle(law: &ChannelLaw, theorem: Theorem, cfg: &SearchConfig, grid: &GridSpec) -> Result<f64> {
    let oracle = oracle_frontier(law, theorem, grid)?;
    let cfg = SearchConfig {
        aux: Some(grid.aux),
        ..cfg.clone()
    };
    let optimized = compute_frontier(law, theorem, &cfg)?;
    Ok(frontier_gap(&oracle, &optimized))
}
