use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use cicpc::region::Frontier;

pub const CSV_HEADER: &str = "mu,r1_bits,r2_bits,witness_seed,active_constraint";

const SIG_DIGITS: usize = 12;

/// `x` with 12 significant digits, plain decimal for moderate magnitudes and
/// scientific otherwise. Never locale dependent; `-0` prints as `0`.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.prec$e}", prec = SIG_DIGITS - 1);
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    if (-5..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

pub fn frontier_csv(frontier: &Frontier) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for p in &frontier.points {
        let mu = p.mu.map(sig12).unwrap_or_default();
        let seed = p.witness_seed.map(|s| s.to_string()).unwrap_or_default();
        let _ = writeln!(out, "{mu},{},{},{seed},{}", sig12(p.r1), sig12(p.r2), p.active);
    }
    out
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

pub fn sidecar(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Everything needed to rerun a command, plus digests of its input and output.
#[derive(Serialize)]
pub struct Manifest {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    argv: Vec<String>,
    channel_file: String,
    channel_sha256: String,
    config: serde_json::Value,
    threads: usize,
    result_sha256: String,
    wall_time_s: f64,
}

impl Manifest {
    pub fn new(
        command: &'static str,
        argv: Vec<String>,
        channel: &Path,
        channel_bytes: &[u8],
        config: serde_json::Value,
        body: &str,
        start: Instant,
    ) -> Self {
        Self {
            tool: "cicpc",
            version: env!("CARGO_PKG_VERSION"),
            command,
            argv,
            channel_file: channel.display().to_string(),
            channel_sha256: sha256_hex(channel_bytes),
            config,
            threads: rayon::current_num_threads(),
            result_sha256: sha256_hex(body.as_bytes()),
            wall_time_s: start.elapsed().as_secs_f64(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest is plain data");
        s.push('\n');
        s
    }
}
