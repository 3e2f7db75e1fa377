//! Discrete memoryless channel law p(y1,y2|x1,x2,xr1) and its structural
//! classification.

mod classify;
mod io;

pub use classify::{
    classify, classify_degraded, classify_semideterministic, ClassificationReport,
    DegradedVerdict, SemidetVerdict, DEFAULT_CLASSIFY_TOL,
};
pub use io::{channel_from_json, channel_to_json, load_channel, save_channel};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::table::ConditionalTable;

/// Default bound on the number of entries of the dense transition tensor.
pub const DEFAULT_TENSOR_LIMIT: usize = 4096;

/// Tolerance on the sum of each conditional output slice.
pub const SLICE_SUM_TOL: f64 = 1e-12;

/// Cardinalities of the five channel alphabets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphabetSpec {
    pub card_x1: usize,
    pub card_x2: usize,
    pub card_xr1: usize,
    pub card_y1: usize,
    pub card_y2: usize,
}

impl AlphabetSpec {
    pub fn new(x1: usize, x2: usize, xr1: usize, y1: usize, y2: usize) -> Result<Self> {
        Self::with_limit(x1, x2, xr1, y1, y2, DEFAULT_TENSOR_LIMIT)
    }

    pub fn with_limit(
        x1: usize,
        x2: usize,
        xr1: usize,
        y1: usize,
        y2: usize,
        limit: usize,
    ) -> Result<Self> {
        let spec = Self {
            card_x1: x1,
            card_x2: x2,
            card_xr1: xr1,
            card_y1: y1,
            card_y2: y2,
        };
        for (name, card) in spec.named() {
            if card == 0 {
                return Err(Error::EmptyAlphabet(name));
            }
        }
        let size = spec
            .named()
            .iter()
            .try_fold(1usize, |acc, (_, c)| acc.checked_mul(*c))
            .unwrap_or(usize::MAX);
        if size > limit {
            return Err(Error::AlphabetTooLarge { size, limit });
        }
        Ok(spec)
    }

    /// All five alphabets binary.
    pub fn binary() -> Self {
        Self::new(2, 2, 2, 2, 2).expect("binary alphabets are within limits")
    }

    pub fn named(&self) -> [(&'static str, usize); 5] {
        [
            ("x1", self.card_x1),
            ("x2", self.card_x2),
            ("xr1", self.card_xr1),
            ("y1", self.card_y1),
            ("y2", self.card_y2),
        ]
    }

    /// Number of input triples (x1, x2, xr1).
    pub fn inputs(&self) -> usize {
        self.card_x1 * self.card_x2 * self.card_xr1
    }

    /// Number of output pairs (y1, y2).
    pub fn outputs(&self) -> usize {
        self.card_y1 * self.card_y2
    }

    pub fn tensor_len(&self) -> usize {
        self.inputs() * self.outputs()
    }

    pub fn input_index(&self, x1: usize, x2: usize, xr1: usize) -> usize {
        (x1 * self.card_x2 + x2) * self.card_xr1 + xr1
    }

    /// Inverse of [`AlphabetSpec::input_index`].
    pub fn input_triple(&self, input: usize) -> [usize; 3] {
        let xr1 = input % self.card_xr1;
        let x2 = (input / self.card_xr1) % self.card_x2;
        let x1 = input / (self.card_xr1 * self.card_x2);
        [x1, x2, xr1]
    }
}

/// Result of [`validate_channel`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Validation {
    /// Largest |sum - 1| over all conditional slices.
    pub max_deviation: f64,
}

/// Checks that every slice p(.,.|x1,x2,xr1) of `transition` is a pmf.
pub fn validate_channel(alphabets: &AlphabetSpec, transition: &[f64]) -> Result<Validation> {
    if transition.len() != alphabets.tensor_len() {
        return Err(Error::DimensionMismatch {
            path: "transition".into(),
            expected: alphabets.tensor_len(),
            found: transition.len(),
        });
    }
    let outputs = alphabets.outputs();
    let mut worst: Option<([usize; 3], f64, f64)> = None;
    let mut max_deviation = 0.0f64;
    for (input, slice) in transition.chunks_exact(outputs).enumerate() {
        let [x1, x2, xr1] = alphabets.input_triple(input);
        for (k, &p) in slice.iter().enumerate() {
            if !(p >= 0.0) || !p.is_finite() {
                return Err(Error::NegativeEntry {
                    index: [x1, x2, xr1, k / alphabets.card_y2, k % alphabets.card_y2],
                    value: p,
                });
            }
        }
        let sum: f64 = slice.iter().sum();
        let deviation = (sum - 1.0).abs();
        if deviation > max_deviation {
            max_deviation = deviation;
            worst = Some(([x1, x2, xr1], sum, deviation));
        }
    }
    match worst {
        Some((index, sum, deviation)) if deviation > SLICE_SUM_TOL => Err(Error::SliceSum {
            index,
            sum,
            deviation,
        }),
        _ => Ok(Validation { max_deviation }),
    }
}

/// A validated channel law, dense tensor indexed `[x1][x2][xr1][y1][y2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelLaw {
    alphabets: AlphabetSpec,
    transition: Vec<f64>,
}

impl ChannelLaw {
    pub fn new(alphabets: AlphabetSpec, transition: Vec<f64>) -> Result<Self> {
        validate_channel(&alphabets, &transition)?;
        Ok(Self {
            alphabets,
            transition,
        })
    }

    /// Builds the tensor entry by entry from `p(x1, x2, xr1, y1, y2)`.
    pub fn from_fn(
        alphabets: AlphabetSpec,
        p: impl Fn(usize, usize, usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let a = alphabets;
        let mut transition = Vec::with_capacity(a.tensor_len());
        for x1 in 0..a.card_x1 {
            for x2 in 0..a.card_x2 {
                for xr1 in 0..a.card_xr1 {
                    for y1 in 0..a.card_y1 {
                        for y2 in 0..a.card_y2 {
                            transition.push(p(x1, x2, xr1, y1, y2));
                        }
                    }
                }
            }
        }
        Self::new(alphabets, transition)
    }

    /// Channel whose outputs are a deterministic function of the inputs.
    pub fn deterministic(
        alphabets: AlphabetSpec,
        f: impl Fn(usize, usize, usize) -> (usize, usize),
    ) -> Result<Self> {
        Self::from_fn(alphabets, |x1, x2, xr1, y1, y2| {
            if f(x1, x2, xr1) == (y1, y2) {
                1.0
            } else {
                0.0
            }
        })
    }

    pub fn alphabets(&self) -> &AlphabetSpec {
        &self.alphabets
    }

    pub fn transition(&self) -> &[f64] {
        &self.transition
    }

    pub fn prob(&self, x1: usize, x2: usize, xr1: usize, y1: usize, y2: usize) -> f64 {
        let a = &self.alphabets;
        self.transition[a.input_index(x1, x2, xr1) * a.outputs() + y1 * a.card_y2 + y2]
    }

    /// Output slice for one input triple, indexed `y1 * |Y2| + y2`.
    pub fn slice(&self, input: usize) -> &[f64] {
        let n = self.alphabets.outputs();
        &self.transition[input * n..(input + 1) * n]
    }
}

/// p(y1|x1,x2,xr1) as a table with one row per input triple.
pub fn extract_y1_law(law: &ChannelLaw) -> ConditionalTable {
    let a = law.alphabets();
    let mut data = Vec::with_capacity(a.inputs() * a.card_y1);
    for input in 0..a.inputs() {
        let slice = law.slice(input);
        for y1 in 0..a.card_y1 {
            data.push(slice[y1 * a.card_y2..(y1 + 1) * a.card_y2].iter().sum());
        }
    }
    ConditionalTable::from_raw(a.inputs(), a.card_y1, data)
}
