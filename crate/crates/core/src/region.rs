//! Pareto frontiers of rate regions.
//!
//! A region is a union of rate polytopes over witness distributions. Its
//! frontier is traced by weighted-sum scalarization: for each weight `mu`
//! the support value max mu R1 + (1 - mu) R2 is maximized over witnesses,
//! and the vertices of the best polytopes are collected and filtered.

use serde::{Deserialize, Serialize};

use crate::bounds::{bounds_to_polytope, caps_of, BoundVector, Caps, RatePolytope, Theorem};
use crate::channel::{AlphabetSpec, ChannelLaw};
use crate::distributions::AuxCardinalities;
use crate::error::{Error, Result};
use crate::oracle::GridSpec;
use crate::search::{multistart, Budget, Climb, Problem};

/// Support values closer than this are ties.
const SUPPORT_TIE_TOL: f64 = 1e-12;

/// Tolerance for reporting a halfspace as active at a vertex.
const ACTIVE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Number of equally spaced weights in [0, 1], endpoints included.
    pub mu_grid_size: usize,
    pub restarts: usize,
    pub local_steps: usize,
    /// Initial coordinate step on the logits.
    pub step_scale: f64,
    pub seed: u64,
    /// Auxiliary cardinalities; `None` means the per-channel default.
    pub aux: Option<AuxCardinalities>,
    pub pareto_tol: f64,
    /// Replace the frontier by its upper concave envelope (time sharing).
    pub hull: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            mu_grid_size: 21,
            restarts: 32,
            local_steps: 400,
            step_scale: 1.0,
            seed: 0,
            aux: None,
            pareto_tol: 1e-9,
            hull: false,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.mu_grid_size < 2 {
            return Err(Error::Config("the mu grid needs at least its two endpoints".into()));
        }
        if self.restarts == 0 || self.local_steps == 0 {
            return Err(Error::Config("restarts and local steps must be positive".into()));
        }
        if !(self.step_scale > 0.0 && self.step_scale.is_finite()) {
            return Err(Error::Config("step scale must be positive".into()));
        }
        if !(self.pareto_tol >= 0.0) {
            return Err(Error::Config("pareto tolerance must be nonnegative".into()));
        }
        if let Some(aux) = self.aux {
            AuxCardinalities::new(aux.u, aux.v, aux.t)?;
        }
        Ok(())
    }

    pub fn mu_grid(&self) -> Vec<f64> {
        mu_grid(self.mu_grid_size)
    }

    pub fn aux_for(&self, alphabets: &AlphabetSpec) -> AuxCardinalities {
        self.aux.unwrap_or_else(|| AuxCardinalities::default_for(alphabets))
    }

    pub(crate) fn budget(&self) -> Budget {
        Budget {
            restarts: self.restarts,
            local_steps: self.local_steps,
            step_scale: self.step_scale,
            seed: self.seed,
        }
    }
}

/// `n` equally spaced weights from 0 to 1.
pub fn mu_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|i| i as f64 / (n - 1) as f64).collect(),
    }
}

/// An achievable (or, for the outer bound, not-excluded) rate pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub r1: f64,
    pub r2: f64,
    /// Weight whose maximization produced the witness, if any.
    pub mu: Option<f64>,
    /// Seed of the restart the witness descends from.
    pub witness_seed: Option<u64>,
    /// Labels of the bound terms tight at this point, joined by `|`.
    pub active: String,
    /// Logits of the witness distribution.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<f64>>,
}

impl RatePoint {
    pub fn new(r1: f64, r2: f64) -> Self {
        Self {
            r1,
            r2,
            mu: None,
            witness_seed: None,
            active: String::new(),
            witness: None,
        }
    }

    pub fn weighted(&self, mu: f64) -> f64 {
        mu * self.r1 + (1.0 - mu) * self.r2
    }
}

/// How a frontier was computed.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum Provenance {
    Optimizer(SearchConfig),
    Oracle(GridSpec),
    Given,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Frontier {
    /// Pareto-maximal points, r1 ascending and r2 strictly descending.
    pub points: Vec<RatePoint>,
    pub theorem: Option<Theorem>,
    pub aux: Option<AuxCardinalities>,
    pub mu_grid: Vec<f64>,
    pub hull: bool,
    pub provenance: Provenance,
}

impl Frontier {
    /// Frontier of explicit points, Pareto-filtered.
    pub fn from_points(points: Vec<RatePoint>, tol: f64) -> Self {
        Self {
            points: pareto_filter(points, tol),
            theorem: None,
            aux: None,
            mu_grid: Vec::new(),
            hull: false,
            provenance: Provenance::Given,
        }
    }

    /// max over points of mu r1 + (1 - mu) r2; -inf for an empty frontier.
    pub fn support(&self, mu: f64) -> f64 {
        self.points
            .iter()
            .map(|p| p.weighted(mu))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Whether some point is at least (r1, r2) in both coordinates, up to `tol`.
    pub fn dominates(&self, r1: f64, r2: f64, tol: f64) -> bool {
        self.points.iter().any(|p| p.r1 >= r1 - tol && p.r2 >= r2 - tol)
    }
}

pub(crate) fn active_label(caps: &Caps, r1: f64, r2: f64) -> String {
    let mut labels = Vec::new();
    if (r1 - caps.r1.0).abs() <= ACTIVE_TOL {
        labels.push(caps.r1.1);
    }
    if (r2 - caps.r2.0).abs() <= ACTIVE_TOL {
        labels.push(caps.r2.1);
    }
    if (r1 + r2 - caps.sum.0).abs() <= ACTIVE_TOL {
        labels.push(caps.sum.1);
    }
    if labels.is_empty() {
        "none".to_string()
    } else {
        labels.join("|")
    }
}

/// Vertices of {R1 <= A, R2 <= B, R1 + R2 <= S, R >= 0}; empty if a cap
/// is negative.
pub(crate) fn vertices(caps: &Caps) -> Vec<(f64, f64)> {
    let (a, b, s) = (caps.r1.0, caps.r2.0, caps.sum.0);
    if a < 0.0 || b < 0.0 || s < 0.0 {
        return Vec::new();
    }
    let (a, b) = (a.min(s), b.min(s));
    vec![
        (0.0, 0.0),
        (a, 0.0),
        (0.0, b),
        (a, b.min(s - a)),
        (a.min(s - b), b),
    ]
}

/// Best vertex for weight `mu`; ties go to larger R1, then larger R2.
fn best_vertex(caps: &Caps, mu: f64) -> Option<(f64, f64, f64)> {
    let mut best: Option<(f64, f64, f64)> = None;
    for (r1, r2) in vertices(caps) {
        let v = mu * r1 + (1.0 - mu) * r2;
        best = match best {
            None => Some((v, r1, r2)),
            Some(b) if v > b.0 + SUPPORT_TIE_TOL => Some((v, r1, r2)),
            Some(b) if (v - b.0).abs() <= SUPPORT_TIE_TOL && (r1, r2) > (b.1, b.2) => Some((v, r1, r2)),
            keep => keep,
        };
    }
    best
}

/// Maximizes mu R1 + (1 - mu) R2 over the polytope by vertex enumeration.
/// An empty polytope has support -inf and no vertex.
pub fn polytope_support(poly: &RatePolytope, mu: f64) -> (f64, Option<RatePoint>) {
    let caps = poly.caps();
    match best_vertex(&caps, mu) {
        None => (f64::NEG_INFINITY, None),
        Some((v, r1, r2)) => {
            let mut p = RatePoint::new(r1, r2);
            p.active = active_label(&caps, r1, r2);
            (v, Some(p))
        }
    }
}

/// Search objective: the support value, or for an empty polytope a value
/// below every support that grows as the most negative cap approaches 0.
pub(crate) fn search_score(vec: &BoundVector, mu: f64) -> f64 {
    let caps = caps_of(vec);
    match best_vertex(&caps, mu) {
        Some((v, _, _)) => v,
        None => -1.0 + caps.r1.0.min(caps.r2.0).min(caps.sum.0),
    }
}

struct Direction {
    climb: Climb,
    bounds: BoundVector,
}

fn optimize_direction(problem: &Problem<'_>, mu: f64, cfg: &SearchConfig) -> Result<Direction> {
    let climb = multistart(problem, cfg.budget(), mu.to_bits(), |ws, theta| {
        problem
            .evaluate(ws, theta)
            .map(|b| search_score(&b, mu))
            .unwrap_or(f64::NEG_INFINITY)
    });
    let bounds = problem.evaluate(&mut problem.workspace(), &climb.theta)?;
    Ok(Direction { climb, bounds })
}

fn point_at(caps: &Caps, r1: f64, r2: f64, mu: f64, climb: &Climb) -> RatePoint {
    RatePoint {
        r1,
        r2,
        mu: Some(mu),
        witness_seed: Some(climb.witness_seed),
        active: active_label(caps, r1, r2),
        witness: Some(climb.theta.clone()),
    }
}

fn problem_for<'a>(law: &'a ChannelLaw, theorem: Theorem, cfg: &SearchConfig) -> Result<Problem<'a>> {
    cfg.validate()?;
    Problem::for_theorem(law, theorem, cfg.aux_for(law.alphabets()))
}

/// Best witness for weight `mu` and the maximizing vertex of its polytope.
/// When every polytope found is empty the origin is returned.
pub fn maximize_direction(law: &ChannelLaw, theorem: Theorem, mu: f64, cfg: &SearchConfig) -> Result<RatePoint> {
    if !(0.0..=1.0).contains(&mu) {
        return Err(Error::Config(format!("mu = {mu} is outside [0, 1]")));
    }
    let problem = problem_for(law, theorem, cfg)?;
    let dir = optimize_direction(&problem, mu, cfg)?;
    let caps = caps_of(&dir.bounds);
    let (_, r1, r2) = best_vertex(&caps, mu).unwrap_or((0.0, 0.0, 0.0));
    Ok(point_at(&caps, r1, r2, mu, &dir.climb))
}

/// Frontier of a theorem's region on `law`.
pub fn compute_frontier(law: &ChannelLaw, theorem: Theorem, cfg: &SearchConfig) -> Result<Frontier> {
    let problem = problem_for(law, theorem, cfg)?;
    let grid = cfg.mu_grid();
    let mut points = Vec::new();
    for &mu in &grid {
        let dir = optimize_direction(&problem, mu, cfg)?;
        let caps = caps_of(&dir.bounds);
        for (r1, r2) in vertices(&caps) {
            points.push(point_at(&caps, r1, r2, mu, &dir.climb));
        }
    }
    let mut points = pareto_filter(points, cfg.pareto_tol);
    if cfg.hull {
        points = upper_hull(points);
    }
    Ok(Frontier {
        points,
        theorem: Some(theorem),
        aux: Some(problem.aux()),
        mu_grid: grid,
        hull: cfg.hull,
        provenance: Provenance::Optimizer(cfg.clone()),
    })
}

/// Bound vector and polytope of the witness behind a frontier point.
pub fn witness_polytope(
    law: &ChannelLaw,
    theorem: Theorem,
    aux: AuxCardinalities,
    theta: &[f64],
) -> Result<(BoundVector, RatePolytope)> {
    let problem = Problem::for_theorem(law, theorem, aux)?;
    let bounds = problem.evaluate(&mut problem.workspace(), theta)?;
    Ok((bounds, bounds_to_polytope(&bounds)))
}

/// Keeps the Pareto-maximal points, sorted by r1 ascending with r2 strictly
/// descending. Points within `tol` in r1 are merged into the one with the
/// larger r2; r2 must improve by more than `tol` to count.
pub fn pareto_filter(mut points: Vec<RatePoint>, tol: f64) -> Vec<RatePoint> {
    points.retain(|p| p.r1.is_finite() && p.r2.is_finite());
    points.sort_by(|a, b| b.r1.total_cmp(&a.r1).then(b.r2.total_cmp(&a.r2)));
    let mut kept: Vec<RatePoint> = Vec::new();
    for p in points {
        let best_r2 = kept.last().map_or(f64::NEG_INFINITY, |k| k.r2);
        if p.r2 > best_r2 + tol {
            while kept.last().is_some_and(|k| k.r1 - p.r1 <= tol) {
                kept.pop();
            }
            kept.push(p);
        }
    }
    kept.reverse();
    kept
}

/// Upper concave envelope of a Pareto-filtered frontier.
pub fn upper_hull(points: Vec<RatePoint>) -> Vec<RatePoint> {
    let mut hull: Vec<RatePoint> = Vec::with_capacity(points.len());
    for p in points {
        while hull.len() >= 2 {
            let (o, a) = (&hull[hull.len() - 2], &hull[hull.len() - 1]);
            let cross = (a.r1 - o.r1) * (p.r2 - o.r2) - (a.r2 - o.r2) * (p.r1 - o.r1);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

/// max over mu of support(inner, mu) - support(outer, mu), evaluated on the
/// union of both frontiers' weight grids (the default grid if both are
/// empty). A value <= 0 means the outer frontier dominates in every
/// direction checked.
pub fn frontier_gap(inner: &Frontier, outer: &Frontier) -> f64 {
    let mut grid: Vec<f64> = inner.mu_grid.iter().chain(&outer.mu_grid).copied().collect();
    if grid.is_empty() {
        grid = SearchConfig::default().mu_grid();
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid.iter()
        .map(|&mu| inner.support(mu) - outer.support(mu))
        .fold(f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{InnerBoundVector, OuterBoundVector};
    use crate::fixtures;

    fn poly(a: f64, b: f64, s: f64) -> RatePolytope {
        bounds_to_polytope(&BoundVector::Inner(InnerBoundVector {
            r1: a,
            r2: b,
            sum: s,
            r2_args: [b, b],
        }))
    }

    fn pts(xs: &[(f64, f64)]) -> Vec<RatePoint> {
        xs.iter().map(|&(a, b)| RatePoint::new(a, b)).collect()
    }

    fn quick(aux: AuxCardinalities) -> SearchConfig {
        SearchConfig {
            mu_grid_size: 5,
            restarts: 4,
            local_steps: 200,
            aux: Some(aux),
            ..SearchConfig::default()
        }
    }

    #[test]
    fn support_of_square_and_triangle() {
        let (v, p) = polytope_support(&poly(1.0, 1.0, 2.0), 0.5);
        assert_eq!(v, 1.0);
        let p = p.unwrap();
        assert_eq!((p.r1, p.r2), (1.0, 1.0));
        assert_eq!(p.active, "r1|r2|sum");

        let (v, p) = polytope_support(&poly(1.0, 1.0, 1.0), 0.5);
        assert_eq!(v, 0.5);
        let p = p.unwrap();
        assert_eq!((p.r1, p.r2), (1.0, 0.0));
        assert!(p.active.contains("sum"));

        let (v, p) = polytope_support(&poly(2.0, 2.0, 3.0), 0.8);
        assert!((v - (0.8 * 2.0 + 0.2 * 1.0)).abs() < 1e-15);
        assert_eq!((p.as_ref().unwrap().r1, p.unwrap().r2), (2.0, 1.0));
    }

    #[test]
    fn empty_polytope_has_no_support() {
        let o = OuterBoundVector {
            a: 1.0,
            b: 1.0,
            c: 1.0,
            d: 2.0,
            e: -0.2,
            f: 2.0,
        };
        let (v, p) = polytope_support(&bounds_to_polytope(&BoundVector::Outer(o)), 0.3);
        assert_eq!(v, f64::NEG_INFINITY);
        assert!(p.is_none());
        assert!((search_score(&BoundVector::Outer(o), 0.3) + 1.2).abs() < 1e-15);
    }

    #[test]
    fn segment_polytope() {
        let (v, p) = polytope_support(&poly(1.0, 0.0, 1.0), 0.0);
        assert_eq!(v, 0.0);
        let p = p.unwrap();
        assert_eq!((p.r1, p.r2), (1.0, 0.0));
    }

    #[test]
    fn pareto_filter_examples() {
        let f = pareto_filter(pts(&[(0.0, 1.0), (0.5, 0.5), (0.2, 0.2), (1.0, 0.0), (0.5, 0.4), (0.0, 0.0)]), 1e-9);
        let got: Vec<(f64, f64)> = f.iter().map(|p| (p.r1, p.r2)).collect();
        assert_eq!(got, vec![(0.0, 1.0), (0.5, 0.5), (1.0, 0.0)]);

        let f = pareto_filter(pts(&[(1.0, 0.0), (1.0 - 1e-12, 0.5)]), 1e-9);
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].r2, 0.5);

        let f = pareto_filter(pts(&[(1.0, 0.5), (0.5, 0.5 + 1e-12)]), 1e-9);
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].r1, 1.0);
    }

    #[test]
    fn upper_hull_drops_concave_dents() {
        let f = pareto_filter(pts(&[(0.0, 1.0), (0.4, 0.5), (1.0, 0.0), (0.5, 0.5)]), 1e-9);
        let h = upper_hull(f);
        let got: Vec<(f64, f64)> = h.iter().map(|p| (p.r1, p.r2)).collect();
        assert_eq!(got, vec![(0.0, 1.0), (1.0, 0.0)]);
        let h = upper_hull(pareto_filter(pts(&[(0.0, 1.0), (0.8, 0.8), (1.0, 0.0)]), 1e-9));
        assert_eq!(h.len(), 3);
    }

    #[test]
    fn gap_examples() {
        let square = Frontier::from_points(pts(&[(1.0, 1.0)]), 1e-9);
        let corner = Frontier::from_points(pts(&[(1.0, 0.0)]), 1e-9);
        assert_eq!(frontier_gap(&square, &square), 0.0);
        assert!(frontier_gap(&corner, &square) <= 0.0);
        assert_eq!(frontier_gap(&square, &corner), 1.0);
    }

    #[test]
    fn config_validation() {
        assert!(SearchConfig::default().validate().is_ok());
        let bad = SearchConfig {
            mu_grid_size: 1,
            ..SearchConfig::default()
        };
        assert!(bad.validate().is_err());
        let g = SearchConfig::default().mu_grid();
        assert_eq!((g.len(), g[0], g[20]), (21, 0.0, 1.0));
    }

    #[test]
    fn noiseless_outer_bound_reaches_full_r1() {
        let cfg = quick(AuxCardinalities::new(1, 2, 2).unwrap());
        let p = maximize_direction(&fixtures::ch_noiseless(), Theorem::T1, 1.0, &cfg).unwrap();
        assert!((p.r1 - 1.0).abs() < 1e-3, "{p:?}");
    }

    #[test]
    fn frontier_is_strictly_monotone_and_deterministic() {
        let law = fixtures::ch_deg();
        let cfg = quick(AuxCardinalities::new(2, 2, 2).unwrap());
        let f = compute_frontier(&law, Theorem::T2, &cfg).unwrap();
        for w in f.points.windows(2) {
            assert!(w[0].r1 < w[1].r1 && w[0].r2 > w[1].r2);
        }
        assert_eq!(f, compute_frontier(&law, Theorem::T2, &cfg).unwrap());
        let again = Frontier::from_points(f.points.clone(), cfg.pareto_tol);
        assert_eq!(again.points, f.points);
    }

    #[test]
    fn hull_frontier_is_concave() {
        let cfg = SearchConfig {
            hull: true,
            ..quick(AuxCardinalities::new(2, 2, 2).unwrap())
        };
        let f = compute_frontier(&fixtures::random_binary_channel(1), Theorem::T1, &cfg).unwrap();
        for w in f.points.windows(3) {
            let cross = (w[1].r1 - w[0].r1) * (w[2].r2 - w[0].r2) - (w[1].r2 - w[0].r2) * (w[2].r1 - w[0].r1);
            assert!(cross < 0.0);
        }
    }

    #[test]
    fn witness_polytope_contains_its_point() {
        let law = fixtures::ch_deg();
        let aux = AuxCardinalities::new(2, 2, 2).unwrap();
        let f = compute_frontier(&law, Theorem::T1, &quick(aux)).unwrap();
        for p in &f.points {
            let (_, poly) = witness_polytope(&law, Theorem::T1, aux, p.witness.as_ref().unwrap()).unwrap();
            assert!(poly.contains(p.r1, p.r2, 1e-12));
        }
    }

    #[test]
    fn mu_outside_unit_interval_is_rejected() {
        let cfg = quick(AuxCardinalities::new(1, 1, 1).unwrap());
        assert!(maximize_direction(&fixtures::ch_deg(), Theorem::T2, 1.5, &cfg).is_err());
    }
}
