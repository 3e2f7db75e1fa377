//! Channel-class conditions checked by bounded search.
//!
//! A condition of the form "g(P) >= 0 for every P" is probed by minimizing
//! g with the multistart search used for regions. A witness with g below
//! `-CONDITION_TOL` proves a violation; when the budget runs out without
//! one, the verdict is "satisfied" for that budget, never a proof.

use serde::Serialize;

use crate::channel::{classify_semideterministic, ChannelLaw, DEFAULT_CLASSIFY_TOL};
use crate::distributions::{build_outer_joint, params_to_factorization, AuxCardinalities, InnerFactorization, OuterWitness};
use crate::error::{Error, Result};
use crate::info::{cmi_of, EntropySource, InfoCalc, JointPmf, VarSet, VariableId};
use crate::region::SearchConfig;
use crate::search::{multistart, Problem, Recorder, Target};

use VariableId::{T, V, X1, X2, Xr1, Y1, Y2};

/// Slack below zero still read as "satisfied".
pub const CONDITION_TOL: f64 = 1e-9;

/// Logit given to the first entry of every row for the point-mass candidate.
const POINT_MASS_LOGIT: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConditionStatus {
    Satisfied,
    Violated,
    /// Part of the verdict vocabulary; the bounded search never reports it,
    /// because a margin in [-tol, tol) is read as satisfied.
    Inconclusive,
}

/// Outcome of one bounded search for a violating distribution.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionVerdict {
    pub status: ConditionStatus,
    /// Smallest gap found, in bits.
    pub margin: f64,
    /// p(xr1) p(x2|xr1) p(v|x2,xr1) p(x1|v,x2,xr1) at the margin; the unit
    /// U axis of the factorization is trivial.
    pub witness: InnerFactorization,
    /// Seed of the restart that found the margin; `None` when the margin
    /// came from the point-mass distribution.
    pub witness_seed: Option<u64>,
    pub samples_used: u64,
    pub restarts: usize,
    pub card_v: usize,
}

/// Which gap a search minimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gap {
    /// I(V,X2;Y1|Xr1) - I(V,X2,Xr1;Y2).
    MoreCapable,
    /// I(X2;Y1|Xr1) - I(X2,Xr1;Y2).
    X2Term,
    /// I(V;Y1|X2,Xr1) - I(V;Y2|X2,Xr1).
    VTerm,
}

impl Gap {
    fn salt(self) -> u64 {
        match self {
            Gap::MoreCapable => 0x6d63,
            Gap::X2Term => 0x7832,
            Gap::VTerm => 0x7676,
        }
    }

    pub(crate) fn eval<E: EntropySource>(self, src: &mut E) -> Result<f64> {
        let s = |vars: &[VariableId]| VarSet::from(vars);
        Ok(match self {
            Gap::MoreCapable => {
                cmi_of(src, s(&[V, X2]), s(&[Y1]), s(&[Xr1]))?
                    - cmi_of(src, s(&[V, X2, Xr1]), s(&[Y2]), VarSet::default())?
            }
            Gap::X2Term => {
                cmi_of(src, s(&[X2]), s(&[Y1]), s(&[Xr1]))? - cmi_of(src, s(&[X2, Xr1]), s(&[Y2]), VarSet::default())?
            }
            Gap::VTerm => cmi_of(src, s(&[V]), s(&[Y1]), s(&[X2, Xr1]))? - cmi_of(src, s(&[V]), s(&[Y2]), s(&[X2, Xr1]))?,
        })
    }

    fn sets(self) -> Vec<VarSet> {
        let mut rec = Recorder::default();
        // The recorder answers zero everywhere, which no gap rejects.
        let _ = self.eval(&mut rec);
        rec.0
    }
}

/// Gap of the more-capable condition on one joint holding V, X2, Xr1, Y1
/// and Y2.
pub fn more_capable_gap(joint: &JointPmf) -> Result<f64> {
    gap_on(joint, Gap::MoreCapable)
}

fn gap_on(joint: &JointPmf, gap: Gap) -> Result<f64> {
    joint.require(VarSet::from([V, X2, Xr1, Y1, Y2]))?;
    gap.eval(&mut InfoCalc::new(joint))
}

/// Minimizes `gap` over p(v, x1, x2, xr1) on `law`.
pub fn minimize_gap(law: &ChannelLaw, gap: Gap, cfg: &SearchConfig) -> Result<ConditionVerdict> {
    cfg.validate()?;
    let card_v = cfg.aux_for(law.alphabets()).v;
    let aux = AuxCardinalities::new(1, card_v, 1)?;
    let problem = Problem::new(law, Target::Joint, aux).with_sets(&gap.sets());
    let neg_gap = |ws: &mut crate::search::Workspace, theta: &[f64]| -> f64 {
        if problem.load(ws, theta).is_err() {
            return f64::NEG_INFINITY;
        }
        gap.eval(&mut ws.info).map(|g| -g).unwrap_or(f64::NEG_INFINITY)
    };
    let best = multistart(&problem, cfg.budget(), gap.salt(), neg_gap);

    let fresh_gap = |theta: &[f64]| -> Result<f64> {
        let mut ws = problem.workspace();
        problem.load(&mut ws, theta)?;
        gap.eval(&mut ws.info)
    };
    let mut theta = best.theta;
    let mut margin = fresh_gap(&theta)?;
    let mut witness_seed = Some(best.witness_seed);

    // Point masses make every term vanish, so the minimum is never above 0.
    let point_mass = point_mass_theta(&problem);
    let at_point_mass = fresh_gap(&point_mass)?;
    if at_point_mass < margin {
        margin = at_point_mass;
        theta = point_mass;
        witness_seed = None;
    }

    let status = if margin < -CONDITION_TOL {
        ConditionStatus::Violated
    } else {
        ConditionStatus::Satisfied
    };
    Ok(ConditionVerdict {
        status,
        margin,
        witness: params_to_factorization(&theta, law.alphabets(), &aux)?,
        witness_seed,
        samples_used: (cfg.restarts * (cfg.local_steps + 1)) as u64,
        restarts: cfg.restarts,
        card_v,
    })
}

fn point_mass_theta(problem: &Problem<'_>) -> Vec<f64> {
    let mut theta = Vec::with_capacity(problem.layout().len());
    for &(rows, cols) in problem.layout().blocks() {
        for _ in 0..rows {
            theta.push(POINT_MASS_LOGIT);
            theta.extend(std::iter::repeat_n(-POINT_MASS_LOGIT, cols - 1));
        }
    }
    theta
}

/// Searches for a distribution under which Y2 learns more about (V, X2, Xr1)
/// than Y1 learns about (V, X2) given Xr1.
pub fn check_more_capable(law: &ChannelLaw, cfg: &SearchConfig) -> Result<ConditionVerdict> {
    minimize_gap(law, Gap::MoreCapable, cfg)
}

/// Verdicts for the two high-gain interference gaps, the X2 term first.
pub fn check_high_gain(law: &ChannelLaw, cfg: &SearchConfig) -> Result<(ConditionVerdict, ConditionVerdict)> {
    Ok((minimize_gap(law, Gap::X2Term, cfg)?, minimize_gap(law, Gap::VTerm, cfg)?))
}

/// |g_mc - g_x2 - g_v| on one joint. The more-capable gap splits into the
/// two high-gain gaps by the chain rule, so this is zero up to rounding for
/// every distribution, which is why high gain implies more capable.
pub fn high_gain_chain_rule_residual(joint: &JointPmf) -> Result<f64> {
    let total = gap_on(joint, Gap::MoreCapable)?;
    let x2 = gap_on(joint, Gap::X2Term)?;
    let v = gap_on(joint, Gap::VTerm)?;
    Ok((total - x2 - v).abs())
}

/// |H(Y2|V,T,X1,X2,Xr1) - H(Y2|X1,X2,Xr1)| for the outer joint of `witness`
/// on a semideterministic channel.
pub fn semidet_markov_collapse(law: &ChannelLaw, witness: &OuterWitness) -> Result<f64> {
    let verdict = classify_semideterministic(law, DEFAULT_CLASSIFY_TOL);
    if !verdict.semideterministic {
        return Err(Error::NotSemideterministic {
            deviation: verdict.max_deviation,
        });
    }
    let joint = build_outer_joint(witness, law)?;
    let mut calc = InfoCalc::new(&joint);
    let full = calc.conditional_entropy([Y2], [V, T, X1, X2, Xr1])?;
    let inputs = calc.conditional_entropy([Y2], [X1, X2, Xr1])?;
    Ok((full - inputs).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{build_inner_joint, sample_witness, Witness, WitnessKind};
    use crate::fixtures;
    use crate::info::Axis;

    fn quick() -> SearchConfig {
        SearchConfig {
            restarts: 4,
            local_steps: 150,
            ..SearchConfig::default()
        }
    }

    #[test]
    fn noiseless_channel_is_not_more_capable() {
        let v = check_more_capable(&fixtures::ch_noiseless(), &quick()).unwrap();
        assert_eq!(v.status, ConditionStatus::Violated);
        assert!((v.margin + 1.0).abs() < 1e-3, "{}", v.margin);
    }

    #[test]
    fn constant_y2_is_more_capable_and_high_gain() {
        let law = fixtures::y2_constant(&fixtures::ch_deg());
        let v = check_more_capable(&law, &quick()).unwrap();
        assert_eq!(v.status, ConditionStatus::Satisfied);
        assert!(v.margin.abs() <= CONDITION_TOL);
        let (x2, vt) = check_high_gain(&law, &quick()).unwrap();
        assert_eq!(x2.status, ConditionStatus::Satisfied);
        assert_eq!(vt.status, ConditionStatus::Satisfied);
    }

    #[test]
    fn high_gain_x2_term_fails_on_noiseless() {
        let (x2, _) = check_high_gain(&fixtures::ch_noiseless(), &quick()).unwrap();
        assert_eq!(x2.status, ConditionStatus::Violated);
        assert!((x2.margin + 1.0).abs() < 1e-3);
    }

    #[test]
    fn minimal_search_still_reports_the_point_mass() {
        let cfg = SearchConfig {
            restarts: 1,
            local_steps: 1,
            ..SearchConfig::default()
        };
        let law = fixtures::y2_constant(&fixtures::ch_noiseless());
        let v = check_more_capable(&law, &cfg).unwrap();
        assert!(v.margin <= 1e-12 && v.margin >= -CONDITION_TOL);
    }

    #[test]
    fn verdicts_are_deterministic() {
        let law = fixtures::random_binary_channel(2);
        let a = check_more_capable(&law, &quick()).unwrap();
        let b = check_more_capable(&law, &quick()).unwrap();
        assert_eq!(a.margin, b.margin);
        assert_eq!(a.witness, b.witness);
    }

    #[test]
    fn verdict_margin_matches_its_witness() {
        let law = fixtures::random_binary_channel(5);
        let v = check_more_capable(&law, &quick()).unwrap();
        let joint = build_inner_joint(&v.witness, &law).unwrap();
        assert!((more_capable_gap(&joint).unwrap() - v.margin).abs() < 1e-12);
    }

    #[test]
    fn chain_rule_residual_vanishes() {
        for seed in 0..50 {
            let law = fixtures::random_binary_channel(seed);
            let Witness::Inner(f) = sample_witness(
                WitnessKind::Inner,
                law.alphabets(),
                &AuxCardinalities::new(1, 3, 1).unwrap(),
                seed,
            ) else {
                unreachable!()
            };
            let joint = build_inner_joint(&f, &law).unwrap();
            assert!(high_gain_chain_rule_residual(&joint).unwrap() < 1e-12);
        }
        let axes = vec![
            Axis::new(V, 2),
            Axis::new(X1, 2),
            Axis::new(X2, 2),
            Axis::new(Xr1, 2),
            Axis::new(Y1, 2),
            Axis::new(Y2, 2),
        ];
        let uniform = JointPmf::uniform(axes.clone()).unwrap();
        assert!(high_gain_chain_rule_residual(&uniform).unwrap() < 1e-12);
        let point = JointPmf::point_mass(axes, &[1, 0, 1, 0, 1, 1]).unwrap();
        assert_eq!(high_gain_chain_rule_residual(&point).unwrap(), 0.0);
    }

    #[test]
    fn semideterministic_collapse_holds_and_is_gated() {
        let aux = AuxCardinalities::new(2, 3, 2).unwrap();
        for law in [fixtures::ch_sd(), fixtures::ch_noiseless()] {
            for seed in 0..20 {
                let Witness::Outer(w) = sample_witness(WitnessKind::Outer, law.alphabets(), &aux, seed)
                else {
                    unreachable!()
                };
                assert!(semidet_markov_collapse(&law, &w).unwrap() < 1e-9);
            }
        }
        let noisy = fixtures::random_binary_channel(1);
        let Witness::Outer(w) = sample_witness(WitnessKind::Outer, noisy.alphabets(), &aux, 0) else {
            unreachable!()
        };
        assert!(matches!(
            semidet_markov_collapse(&noisy, &w),
            Err(Error::NotSemideterministic { .. })
        ));
    }
}
