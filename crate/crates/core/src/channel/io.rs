//! Channel files.
//!
//! ```json
//! {
//!   "alphabets": {"x1": 2, "x2": 2, "xr1": 2, "y1": 2, "y2": 2},
//!   "transition": [ ...nested in index order x1, x2, xr1, y1, y2... ]
//! }
//! ```
//!
//! Probabilities are written with 17 significant digits, which round-trips
//! every `f64` exactly; the reader uses correctly rounded float parsing.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Deserialize;

use super::{AlphabetSpec, ChannelLaw};
use crate::error::{Error, Result};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelDoc {
    alphabets: AlphabetDoc,
    transition: Vec<Vec<Vec<Vec<Vec<f64>>>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AlphabetDoc {
    x1: usize,
    x2: usize,
    xr1: usize,
    y1: usize,
    y2: usize,
}

fn expect_len(path: &str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            path: path.to_string(),
            expected,
            found,
        })
    }
}

pub fn channel_from_json(text: &str) -> Result<ChannelLaw> {
    let doc: ChannelDoc = serde_json::from_str(text)?;
    let d = &doc.alphabets;
    let alphabets = AlphabetSpec::new(d.x1, d.x2, d.xr1, d.y1, d.y2)?;
    let mut flat = Vec::with_capacity(alphabets.tensor_len());
    expect_len("transition", d.x1, doc.transition.len())?;
    for (i, a) in doc.transition.iter().enumerate() {
        expect_len(&format!("transition[{i}]"), d.x2, a.len())?;
        for (j, b) in a.iter().enumerate() {
            expect_len(&format!("transition[{i}][{j}]"), d.xr1, b.len())?;
            for (k, c) in b.iter().enumerate() {
                expect_len(&format!("transition[{i}][{j}][{k}]"), d.y1, c.len())?;
                for (l, row) in c.iter().enumerate() {
                    expect_len(&format!("transition[{i}][{j}][{k}][{l}]"), d.y2, row.len())?;
                    flat.extend_from_slice(row);
                }
            }
        }
    }
    ChannelLaw::new(alphabets, flat)
}

fn sci17(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn channel_to_json(law: &ChannelLaw) -> String {
    let a = law.alphabets();
    let mut out = String::new();
    let _ = writeln!(out, "{{");
    let _ = writeln!(
        out,
        "  \"alphabets\": {{\"x1\": {}, \"x2\": {}, \"xr1\": {}, \"y1\": {}, \"y2\": {}}},",
        a.card_x1, a.card_x2, a.card_xr1, a.card_y1, a.card_y2
    );
    out.push_str("  \"transition\": [\n");
    for x1 in 0..a.card_x1 {
        out.push_str("    [\n");
        for x2 in 0..a.card_x2 {
            out.push_str("      [\n");
            for xr1 in 0..a.card_xr1 {
                let slice = law.slice(a.input_index(x1, x2, xr1));
                let rows: Vec<String> = slice
                    .chunks_exact(a.card_y2)
                    .map(|row| {
                        let cells: Vec<String> = row.iter().map(|p| sci17(*p)).collect();
                        format!("[{}]", cells.join(", "))
                    })
                    .collect();
                let sep = if xr1 + 1 < a.card_xr1 { "," } else { "" };
                let _ = writeln!(out, "        [{}]{sep}", rows.join(", "));
            }
            let sep = if x2 + 1 < a.card_x2 { "," } else { "" };
            let _ = writeln!(out, "      ]{sep}");
        }
        let sep = if x1 + 1 < a.card_x1 { "," } else { "" };
        let _ = writeln!(out, "    ]{sep}");
    }
    out.push_str("  ]\n}\n");
    out
}

pub fn load_channel(path: impl AsRef<Path>) -> Result<ChannelLaw> {
    channel_from_json(&fs::read_to_string(path)?)
}

pub fn save_channel(law: &ChannelLaw, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, channel_to_json(law))?;
    Ok(())
}
