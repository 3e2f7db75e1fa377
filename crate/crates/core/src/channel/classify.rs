use serde::Serialize;

use super::{extract_y1_law, ChannelLaw};
use crate::table::ConditionalTable;

/// Default tolerance of both structural classifiers.
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-9;

/// Whether Y1 is a deterministic function of (X1, X2, Xr1).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SemidetVerdict {
    pub semideterministic: bool,
    /// y1 as a function of the flat input index, present iff semideterministic.
    pub y1_map: Option<Vec<usize>>,
    /// Largest distance of an entry of p(y1|x1,x2,xr1) from {0, 1}.
    pub max_deviation: f64,
}

/// Whether p(y1,y2|x1,x2,xr1) = p(y1|x1,x2,xr1) q(y2|y1,xr1) for some kernel q.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegradedVerdict {
    pub degraded: bool,
    /// q(y2|y1,xr1) with row index `y1 * |Xr1| + xr1`, present iff degraded.
    pub kernel: Option<ConditionalTable>,
    /// Largest entrywise error of the best reconstruction p(y1|.) q(y2|y1,xr1).
    pub max_deviation: f64,
    /// Index [x1, x2, xr1, y1, y2] of the worst reconstruction error.
    pub witness: Option<[usize; 5]>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub semideterministic: bool,
    pub y1_map: Option<Vec<usize>>,
    pub degraded: bool,
    pub extracted_degrading_kernel: Option<ConditionalTable>,
    /// Maximum of the two classifiers' deviations.
    pub max_deviation: f64,
}

pub fn classify_semideterministic(law: &ChannelLaw, tol: f64) -> SemidetVerdict {
    let y1 = extract_y1_law(law);
    let mut max_deviation = 0.0f64;
    let mut map = Vec::with_capacity(y1.rows());
    for r in 0..y1.rows() {
        let row = y1.row(r);
        for &p in row {
            max_deviation = max_deviation.max(p.min(1.0 - p).max(0.0));
        }
        let (argmax, _) = row
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &p)| if p > best.1 { (i, p) } else { best });
        map.push(argmax);
    }
    let semideterministic = max_deviation <= tol;
    SemidetVerdict {
        semideterministic,
        y1_map: semideterministic.then_some(map),
        max_deviation,
    }
}

/// Constructive degradedness test.
///
/// For every (y1, xr1) the candidate kernel row is read off the input that
/// puts the most mass on y1; rows no input reaches are left uniform, since
/// they only ever multiply zero. The channel is degraded iff the product
/// p(y1|x) q(y2|y1,xr1) reproduces the tensor within `tol` everywhere.
pub fn classify_degraded(law: &ChannelLaw, tol: f64) -> DegradedVerdict {
    let a = law.alphabets();
    let y1 = extract_y1_law(law);
    let (cy1, cy2, cxr1) = (a.card_y1, a.card_y2, a.card_xr1);
    let mut kernel = vec![1.0 / cy2 as f64; cy1 * cxr1 * cy2];
    for y in 0..cy1 {
        for xr1 in 0..cxr1 {
            let best = (0..a.inputs())
                .filter(|&input| a.input_triple(input)[2] == xr1)
                .map(|input| (input, y1.get(input, y)))
                .filter(|(_, p)| *p > tol)
                .fold(None, |best: Option<(usize, f64)>, cur| match best {
                    Some(b) if b.1 >= cur.1 => Some(b),
                    _ => Some(cur),
                });
            if let Some((input, p_y1)) = best {
                let slice = law.slice(input);
                let row = &mut kernel[(y * cxr1 + xr1) * cy2..(y * cxr1 + xr1 + 1) * cy2];
                for (y2, q) in row.iter_mut().enumerate() {
                    *q = slice[y * cy2 + y2] / p_y1;
                }
            }
        }
    }

    let mut max_deviation = 0.0f64;
    let mut witness = None;
    for input in 0..a.inputs() {
        let [x1, x2, xr1] = a.input_triple(input);
        let slice = law.slice(input);
        for y in 0..cy1 {
            for y2 in 0..cy2 {
                let rebuilt = y1.get(input, y) * kernel[(y * cxr1 + xr1) * cy2 + y2];
                let dev = (slice[y * cy2 + y2] - rebuilt).abs();
                if dev > max_deviation {
                    max_deviation = dev;
                    witness = Some([x1, x2, xr1, y, y2]);
                }
            }
        }
    }
    let degraded = max_deviation <= tol;
    DegradedVerdict {
        degraded,
        kernel: degraded.then(|| ConditionalTable::from_raw(cy1 * cxr1, cy2, kernel)),
        max_deviation,
        witness,
    }
}

pub fn classify(law: &ChannelLaw, tol: f64) -> ClassificationReport {
    let sd = classify_semideterministic(law, tol);
    let dg = classify_degraded(law, tol);
    ClassificationReport {
        semideterministic: sd.semideterministic,
        y1_map: sd.y1_map,
        degraded: dg.degraded,
        extracted_degrading_kernel: dg.kernel,
        max_deviation: sd.max_deviation.max(dg.max_deviation),
    }
}
