//! Right-hand sides of the outer bound, the inner bound and the
//! semideterministic capacity region, and their geometric form as
//! two-dimensional rate polytopes.
//!
//! The degraded-channel region uses exactly the inner-bound formulas; it is
//! reached through [`eval_degraded_t3`], which only adds the class gate.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::{classify_degraded, ChannelLaw, DEFAULT_CLASSIFY_TOL};
use crate::error::{Error, Result};
use crate::info::{
    cmi_of, conditional_entropy_of, EntropySource, InfoCalc, JointPmf, VarSet,
    VariableId,
};

use VariableId::{T, U, V, X1, X2, Xr1, Y1, Y2};

/// Largest H(Y1|X1,X2,Xr1) accepted by the semideterministic evaluator.
pub const SEMIDET_ENTROPY_TOL: f64 = 1e-9;

/// Entropy below which a variable counts as constant.
pub const DEGENERATE_ENTROPY_TOL: f64 = 1e-12;

/// Slack of the decode-forward collapse diagnostic.
pub const COLLAPSE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Theorem {
    /// Outer bound, any channel.
    T1,
    /// Inner bound, any channel.
    T2,
    /// Capacity region of degraded channels.
    T3,
    /// Capacity region of semideterministic more-capable channels.
    T4,
}

impl Theorem {
    pub const ALL: [Theorem; 4] = [Theorem::T1, Theorem::T2, Theorem::T3, Theorem::T4];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::T1 => "t1",
            Theorem::T2 => "t2",
            Theorem::T3 => "t3",
            Theorem::T4 => "t4",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown theorem {s:?}, expected t1..t4")))
    }
}

/// The six outer-bound terms, in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OuterBoundVector {
    /// I(X1;Y1|X2,Xr1)
    pub a: f64,
    /// I(V,X2,Xr1;Y2)
    pub b: f64,
    /// I(X1,X2,Xr1;Y2)
    pub c: f64,
    /// I(V,X2,Xr1;Y2) + I(X1;Y1|V,X2,Xr1)
    pub d: f64,
    /// I(T,X1,X2;Y1|Xr1) + I(V;Y2|T,Xr1) - I(V;Y1|T,Xr1); may be negative.
    pub e: f64,
    /// I(X1,X2;Y1,Y2|Xr1)
    pub f: f64,
}

/// The inner-bound terms, in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InnerBoundVector {
    /// I(X1;Y1|U,X2,Xr1)
    pub r1: f64,
    /// min of `r2_args`
    pub r2: f64,
    /// r2 + I(X1;Y1|U,V,X2,Xr1)
    pub sum: f64,
    /// (I(U,V,X2,Xr1;Y2), I(U,V,X2;Y1|Xr1)): what destination 2 and the
    /// decoding relay can each support.
    pub r2_args: [f64; 2],
}

/// The semideterministic capacity-region terms, in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SemidetBoundVector {
    /// H(Y1|X2,Xr1)
    pub r1: f64,
    /// I(V,X2,Xr1;Y2)
    pub r2: f64,
    /// I(V,X2,Xr1;Y2) + H(Y1|V,X2,Xr1)
    pub sum: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BoundVector {
    Outer(OuterBoundVector),
    Inner(InnerBoundVector),
    Semidet(SemidetBoundVector),
}

fn set<const N: usize>(vars: [VariableId; N]) -> VarSet {
    VarSet::from(vars)
}

fn cmi<E: EntropySource, A: Into<VarSet>, B: Into<VarSet>, G: Into<VarSet>>(
    src: &mut E,
    a: A,
    b: B,
    given: G,
) -> Result<f64> {
    cmi_of(src, a.into(), b.into(), given.into())
}

fn cond_h<E: EntropySource, A: Into<VarSet>, G: Into<VarSet>>(src: &mut E, a: A, given: G) -> Result<f64> {
    conditional_entropy_of(src, a.into(), given.into())
}

pub(crate) fn outer_terms<E: EntropySource>(src: &mut E) -> Result<OuterBoundVector> {
    let none = VarSet::EMPTY;
    let b = cmi(src, [V, X2, Xr1], Y2, none)?;
    let e = cmi(src, [T, X1, X2], Y1, Xr1)? + cmi(src, V, Y2, [T, Xr1])? - cmi(src, V, Y1, [T, Xr1])?;
    // e is a signed combination; only rounding-level negatives are zeroed.
    let e = if (-crate::info::NEGATIVE_SLACK..0.0).contains(&e) { 0.0 } else { e };
    Ok(OuterBoundVector {
        a: cmi(src, X1, Y1, [X2, Xr1])?,
        b,
        c: cmi(src, [X1, X2, Xr1], Y2, none)?,
        d: b + cmi(src, X1, Y1, [V, X2, Xr1])?,
        e,
        f: cmi(src, [X1, X2], [Y1, Y2], Xr1)?,
    })
}

pub(crate) fn inner_terms<E: EntropySource>(src: &mut E) -> Result<InnerBoundVector> {
    let r2_args = [
        cmi(src, [U, V, X2, Xr1], Y2, VarSet::EMPTY)?,
        cmi(src, [U, V, X2], Y1, Xr1)?,
    ];
    let r2 = r2_args[0].min(r2_args[1]);
    Ok(InnerBoundVector {
        r1: cmi(src, X1, Y1, [U, X2, Xr1])?,
        r2,
        sum: r2 + cmi(src, X1, Y1, [U, V, X2, Xr1])?,
        r2_args,
    })
}

pub(crate) fn semidet_terms<E: EntropySource>(src: &mut E) -> Result<SemidetBoundVector> {
    let r2 = cmi(src, [V, X2, Xr1], Y2, VarSet::EMPTY)?;
    Ok(SemidetBoundVector {
        r1: cond_h(src, Y1, [X2, Xr1])?,
        r2,
        sum: r2 + cond_h(src, Y1, [V, X2, Xr1])?,
    })
}

fn require(joint: &JointPmf, vars: VarSet) -> Result<()> {
    match vars.iter().find(|v| joint.card(*v).is_none()) {
        Some(v) => Err(Error::MissingAxis(v)),
        None => Ok(()),
    }
}

/// Outer-bound terms of a joint over (V, T, X1, X2, Xr1, Y1, Y2).
pub fn eval_outer_t1(joint: &JointPmf) -> Result<OuterBoundVector> {
    require(joint, set([V, T, X1, X2, Xr1, Y1, Y2]))?;
    outer_terms(&mut InfoCalc::new(joint))
}

/// Inner-bound terms of a joint over (U, V, X1, X2, Xr1, Y1, Y2).
pub fn eval_inner_t2(joint: &JointPmf) -> Result<InnerBoundVector> {
    require(joint, set([U, V, X1, X2, Xr1, Y1, Y2]))?;
    inner_terms(&mut InfoCalc::new(joint))
}

/// The degraded-channel region: inner-bound formulas, refused unless `law`
/// is degraded.
pub fn eval_degraded_t3(joint: &JointPmf, law: &ChannelLaw) -> Result<InnerBoundVector> {
    let verdict = classify_degraded(law, DEFAULT_CLASSIFY_TOL);
    if !verdict.degraded {
        return Err(Error::NotDegraded {
            deviation: verdict.max_deviation,
        });
    }
    eval_inner_t2(joint)
}

/// Semideterministic region terms of a joint over (V, X1, X2, Xr1, Y1, Y2);
/// extra axes such as U are ignored. Refused when Y1 is not a function of
/// the inputs under `joint`.
pub fn eval_semidet_t4(joint: &JointPmf) -> Result<SemidetBoundVector> {
    require(joint, set([V, X1, X2, Xr1, Y1, Y2]))?;
    let mut calc = InfoCalc::new(joint);
    let residual = calc.conditional_entropy(Y1, [X1, X2, Xr1])?;
    if residual > SEMIDET_ENTROPY_TOL {
        return Err(Error::NotSemideterministic { deviation: residual });
    }
    semidet_terms(&mut calc)
}

/// Specialization to the degraded relay broadcast channel: with V and
/// X2 constant the inner bound reads R1 <= I(X1;Y1|U,Xr1),
/// R2 <= min(I(U,Xr1;Y2), I(U;Y1|Xr1)), R1 + R2 <= R2 cap + I(X1;Y1|U,Xr1).
pub fn relay_bc_specialize(joint: &JointPmf) -> Result<InnerBoundVector> {
    require(joint, set([U, V, X1, X2, Xr1, Y1, Y2]))?;
    let mut calc = InfoCalc::new(joint);
    for var in [V, X2] {
        if calc.entropy(var)? > DEGENERATE_ENTROPY_TOL {
            return Err(Error::Precondition(format!(
                "relay broadcast specialization needs a constant {var}"
            )));
        }
    }
    let src = &mut calc;
    let r2_args = [cmi(src, [U, Xr1], Y2, VarSet::EMPTY)?, cmi(src, U, Y1, Xr1)?];
    let r2 = r2_args[0].min(r2_args[1]);
    let r1 = cmi(src, X1, Y1, [U, Xr1])?;
    Ok(InnerBoundVector {
        r1,
        r2,
        sum: r2 + r1,
        r2_args,
    })
}

/// How the decode-forward minimum behaves on one distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CollapseDiagnostic {
    /// I(V,X2,Xr1;Y2)
    pub destination_term: f64,
    /// I(V,X2;Y1|Xr1)
    pub relay_term: f64,
    /// min(destination_term, relay_term) - destination_term, never positive.
    pub difference: f64,
    /// The minimum does not select the destination term on this distribution.
    pub fails_here: bool,
    /// False only if the channel was declared more capable and yet the
    /// minimum failed to collapse.
    pub consistent: bool,
}

/// Checks that min{I(V,X2,Xr1;Y2), I(V,X2;Y1|Xr1)} = I(V,X2,Xr1;Y2) on
/// `joint`, which must hold whenever the channel is more capable.
pub fn check_decode_forward_collapse(joint: &JointPmf, more_capable: bool) -> Result<CollapseDiagnostic> {
    require(joint, set([V, X2, Xr1, Y1, Y2]))?;
    let mut calc = InfoCalc::new(joint);
    let destination_term = calc.mutual_information([V, X2, Xr1], Y2)?;
    let relay_term = calc.conditional_mutual_information([V, X2], Y1, Xr1)?;
    let difference = destination_term.min(relay_term) - destination_term;
    let fails_here = difference < -COLLAPSE_TOL;
    Ok(CollapseDiagnostic {
        destination_term,
        relay_term,
        difference,
        fails_here,
        consistent: !(more_capable && fails_here),
    })
}

/// R1 <= rhs, R2 <= rhs or R1 + R2 <= rhs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Halfspace {
    pub coeff_r1: f64,
    pub coeff_r2: f64,
    pub rhs: f64,
    /// Name of the bound term this halfspace comes from.
    pub label: &'static str,
}

/// Intersection of the halfspaces with R1 >= 0, R2 >= 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatePolytope {
    pub halfspaces: Vec<Halfspace>,
}

/// Tightest cap of each kind with the label of the term attaining it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Caps {
    pub r1: (f64, &'static str),
    pub r2: (f64, &'static str),
    pub sum: (f64, &'static str),
}

impl RatePolytope {
    fn cap(&self, c1: f64, c2: f64) -> (f64, &'static str) {
        self.halfspaces
            .iter()
            .filter(|h| h.coeff_r1 == c1 && h.coeff_r2 == c2)
            .fold((f64::INFINITY, ""), |best, h| if h.rhs < best.0 { (h.rhs, h.label) } else { best })
    }

    pub fn caps(&self) -> Caps {
        Caps {
            r1: self.cap(1.0, 0.0),
            r2: self.cap(0.0, 1.0),
            sum: self.cap(1.0, 1.0),
        }
    }

    /// Empty exactly when some cap is negative.
    pub fn is_empty(&self) -> bool {
        self.halfspaces.iter().any(|h| h.rhs < 0.0)
    }

    pub fn contains(&self, r1: f64, r2: f64, tol: f64) -> bool {
        r1 >= -tol
            && r2 >= -tol
            && self
                .halfspaces
                .iter()
                .all(|h| h.coeff_r1 * r1 + h.coeff_r2 * r2 <= h.rhs + tol)
    }
}

fn hs(coeff_r1: f64, coeff_r2: f64, rhs: f64, label: &'static str) -> Halfspace {
    Halfspace {
        coeff_r1,
        coeff_r2,
        rhs,
        label,
    }
}

pub fn bounds_to_polytope(vec: &BoundVector) -> RatePolytope {
    let halfspaces = match *vec {
        BoundVector::Outer(o) => vec![
            hs(1.0, 0.0, o.a, "a"),
            hs(0.0, 1.0, o.b, "b"),
            hs(0.0, 1.0, o.c, "c"),
            hs(1.0, 1.0, o.d, "d"),
            hs(1.0, 1.0, o.e, "e"),
            hs(1.0, 1.0, o.f, "f"),
        ],
        BoundVector::Inner(InnerBoundVector { r1, r2, sum, .. })
        | BoundVector::Semidet(SemidetBoundVector { r1, r2, sum }) => vec![
            hs(1.0, 0.0, r1, "r1"),
            hs(0.0, 1.0, r2, "r2"),
            hs(1.0, 1.0, sum, "sum"),
        ],
    };
    RatePolytope { halfspaces }
}

/// Hot-path version of the polytope caps, without building the polytope.
pub(crate) fn caps_of(vec: &BoundVector) -> Caps {
    match *vec {
        BoundVector::Outer(o) => {
            let r2 = if o.c < o.b { (o.c, "c") } else { (o.b, "b") };
            let mut sum = (o.d, "d");
            for (v, l) in [(o.e, "e"), (o.f, "f")] {
                if v < sum.0 {
                    sum = (v, l);
                }
            }
            Caps {
                r1: (o.a, "a"),
                r2,
                sum,
            }
        }
        BoundVector::Inner(InnerBoundVector { r1, r2, sum, .. })
        | BoundVector::Semidet(SemidetBoundVector { r1, r2, sum }) => Caps {
            r1: (r1, "r1"),
            r2: (r2, "r2"),
            sum: (sum, "sum"),
        },
    }
}
