//! Canonical test channels.
//!
//! The JSON copies shipped under `fixtures/` are generated from these
//! constructors and checked against them in the test suite.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use crate::channel::{AlphabetSpec, ChannelLaw};

/// Binary everything; Y1 = X1 and Y2 = X2 without noise.
pub fn ch_noiseless() -> ChannelLaw {
    ChannelLaw::deterministic(AlphabetSpec::binary(), |x1, x2, _| (x1, x2))
        .expect("valid fixture")
}

/// Y1 = X1 xor X2 xor Xr1; Y2 is Y1 flipped with probability 0.1.
pub fn ch_deg() -> ChannelLaw {
    ChannelLaw::from_fn(AlphabetSpec::binary(), |x1, x2, xr1, y1, y2| {
        if y1 != x1 ^ x2 ^ xr1 {
            0.0
        } else if y2 == y1 {
            0.9
        } else {
            0.1
        }
    })
    .expect("valid fixture")
}

/// Quaternary Y1 = 2 (X1 xor X2) + X2; Y2 is (X2 xor Xr1) flipped with
/// probability 0.1.
pub fn ch_sd() -> ChannelLaw {
    let alphabets = AlphabetSpec::new(2, 2, 2, 4, 2).expect("valid alphabets");
    ChannelLaw::from_fn(alphabets, |x1, x2, xr1, y1, y2| {
        if y1 != 2 * (x1 ^ x2) + x2 {
            0.0
        } else if y2 == x2 ^ xr1 {
            0.9
        } else {
            0.1
        }
    })
    .expect("valid fixture")
}

/// `law` with Y2 replaced by the constant symbol 0.
pub fn y2_constant(law: &ChannelLaw) -> ChannelLaw {
    let a = *law.alphabets();
    let y1_law = crate::channel::extract_y1_law(law);
    ChannelLaw::from_fn(a, |x1, x2, xr1, y1, y2| {
        if y2 == 0 {
            y1_law.get(a.input_index(x1, x2, xr1), y1)
        } else {
            0.0
        }
    })
    .expect("marginal of a valid law")
}

fn dirichlet_row(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let draws: Vec<f64> = (0..len).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|d| d / total).collect()
}

/// Binary channel whose output slices are independent Dirichlet(1) draws.
pub fn random_binary_channel(seed: u64) -> ChannelLaw {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = AlphabetSpec::binary();
    let mut transition = Vec::with_capacity(a.tensor_len());
    for _ in 0..a.inputs() {
        let row = dirichlet_row(&mut rng, a.outputs());
        transition.extend(renormalized(row));
    }
    ChannelLaw::new(a, transition).expect("Dirichlet rows are pmfs")
}

/// Binary semideterministic channel: Y1 is a random function of the inputs
/// and Y2 mixes an input-independent law with weight `1 - coupling` and an
/// input-dependent one with weight `coupling`.
pub fn seeded_semideterministic(seed: u64, coupling: f64) -> ChannelLaw {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = AlphabetSpec::binary();
    let y1_map: Vec<usize> = (0..a.inputs()).map(|_| rng.random_range(0..2)).collect();
    let base = dirichlet_row(&mut rng, a.card_y2);
    let mut transition = Vec::with_capacity(a.tensor_len());
    for &y1 in &y1_map {
        let coupled = dirichlet_row(&mut rng, a.card_y2);
        let y2_law: Vec<f64> = base
            .iter()
            .zip(&coupled)
            .map(|(b, c)| (1.0 - coupling) * b + coupling * c)
            .collect();
        let y2_law = renormalized(y2_law);
        for y in 0..a.card_y1 {
            for p in &y2_law {
                transition.push(if y == y1 { *p } else { 0.0 });
            }
        }
    }
    ChannelLaw::new(a, transition).expect("valid construction")
}

/// Pushes rounding error of a row into its largest entry so the row sums to
/// one as exactly as f64 allows.
fn renormalized(mut row: Vec<f64>) -> Vec<f64> {
    let total: f64 = row.iter().sum();
    let (imax, _) = row
        .iter()
        .enumerate()
        .fold((0, f64::MIN), |b, (i, p)| if *p > b.1 { (i, *p) } else { b });
    row[imax] += 1.0 - total;
    row
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{channel_to_json, classify_semideterministic, DEFAULT_CLASSIFY_TOL};

    #[test]
    fn random_channels_are_seeded() {
        assert_eq!(random_binary_channel(3), random_binary_channel(3));
        assert_ne!(random_binary_channel(3), random_binary_channel(4));
    }

    #[test]
    fn seeded_semideterministic_is_semideterministic() {
        for seed in 0..5 {
            for coupling in [0.0, 0.3, 1.0] {
                let law = seeded_semideterministic(seed, coupling);
                assert!(classify_semideterministic(&law, DEFAULT_CLASSIFY_TOL).semideterministic);
            }
        }
    }

    #[test]
    fn zero_coupling_makes_y2_input_independent() {
        let law = seeded_semideterministic(11, 0.0);
        let a = law.alphabets();
        let y2 = |input: usize| -> Vec<f64> {
            let s = law.slice(input);
            (0..a.card_y2).map(|y2| (0..a.card_y1).map(|y| s[y * a.card_y2 + y2]).sum()).collect()
        };
        for input in 1..a.inputs() {
            assert_eq!(y2(input), y2(0));
        }
    }

    /// Shipped fixture files must match the constructors. Set
    /// `CICPC_REGEN_FIXTURES=1` to rewrite them.
    #[test]
    fn shipped_fixture_files_are_current() {
        let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
        let regen = std::env::var_os("CICPC_REGEN_FIXTURES").is_some();
        let y2c = y2_constant(&ch_noiseless());
        for (name, law) in [
            ("ch_noiseless.json", ch_noiseless()),
            ("ch_deg.json", ch_deg()),
            ("ch_sd.json", ch_sd()),
            ("ch_y2_constant.json", y2c),
        ] {
            let path = dir.join(name);
            let text = channel_to_json(&law);
            if regen {
                std::fs::write(&path, &text).unwrap();
            }
            let shipped = std::fs::read_to_string(&path).unwrap();
            assert_eq!(shipped, text, "{name} is stale");
        }
    }
}
