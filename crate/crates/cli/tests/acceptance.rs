//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Run with `cargo test -p cicpc-cli --test acceptance`.

use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cicpc::bounds::{check_decode_forward_collapse, eval_degraded_t3, eval_inner_t2, relay_bc_specialize, Theorem};
use cicpc::channel::{save_channel, ChannelLaw};
use cicpc::conditions::{check_more_capable, high_gain_chain_rule_residual, semidet_markov_collapse, ConditionStatus};
use cicpc::distributions::{
    build_inner_joint, sample_witness, AuxCardinalities, InnerFactorization, Witness, WitnessKind,
};
use cicpc::fixtures;
use cicpc::info::{binary_entropy, conditional_mutual_information, entropy, mutual_information, Axis, JointPmf};
use cicpc::info::VariableId::{X1, X2, Xr1, Y1};
use cicpc::oracle::{compare_to_oracle, GridSpec};
use cicpc::region::{compute_frontier, frontier_gap, SearchConfig};
use cicpc::table::ConditionalTable;

const IDENTITY_TOL: f64 = 1e-9;
const FORMULA_TOL: f64 = 1e-12;
const COLLAPSE_TOL: f64 = 1e-10;
const INNER_OUTER_TOL: f64 = 1e-3;
const TIGHTNESS_TOL: f64 = 2e-2;
const ORACLE_TOL: f64 = 1e-6;
const PROPERTY_SLACK: f64 = 1e-10;
const BSC_01: f64 = 0.53100440642;

/// Channel on which the more-capable condition holds: Y1 a seeded function
/// of the inputs, Y2 independent of them.
fn certified_channel() -> ChannelLaw {
    fixtures::seeded_semideterministic(1, 0.0)
}

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn within(elapsed: Duration, limit_s: u64) -> bool {
    elapsed <= Duration::from_secs(limit_s)
}

fn inner_joint(law: &ChannelLaw, aux: AuxCardinalities, seed: u64) -> JointPmf {
    match sample_witness(WitnessKind::Inner, law.alphabets(), &aux, seed) {
        Witness::Inner(f) => build_inner_joint(&f, law).unwrap(),
        Witness::Outer(_) => unreachable!("inner witness requested"),
    }
}

fn random_pmf(rng: &mut ChaCha8Rng, axes: Vec<Axis>) -> JointPmf {
    let len: usize = axes.iter().map(|a| a.card).product();
    let raw: Vec<f64> = (0..len)
        .map(|_| if rng.random_bool(0.1) { 0.0 } else { rng.random::<f64>() })
        .collect();
    let total: f64 = raw.iter().sum::<f64>().max(f64::MIN_POSITIVE);
    JointPmf::new(axes, raw.into_iter().map(|w| w / total).collect()).unwrap()
}

fn random_row(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..len).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

fn high_gain_chain_rule() -> Outcome {
    let start = Instant::now();
    let aux = AuxCardinalities::new(2, 2, 1).unwrap();
    let pairs = 1000;
    let worst = (0..pairs)
        .map(|s| {
            let law = fixtures::random_binary_channel(s);
            high_gain_chain_rule_residual(&inner_joint(&law, aux, 10_000 + s)).unwrap()
        })
        .fold(0.0, f64::max);
    let t = start.elapsed();
    outcome(
        worst < IDENTITY_TOL && within(t, 10),
        format!("max |g_mc - g_x2 - g_v| = {worst:.3e} bits over {pairs} pairs, {t:.1?}"),
    )
}

fn semideterministic_collapse() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for law in [fixtures::ch_sd(), fixtures::ch_noiseless()] {
        let aux = AuxCardinalities::default_for(law.alphabets());
        for seed in 0..100 {
            let Witness::Outer(w) = sample_witness(WitnessKind::Outer, law.alphabets(), &aux, seed) else {
                unreachable!("outer witness requested")
            };
            worst = worst.max(semidet_markov_collapse(&law, &w).unwrap());
            count += 1;
        }
    }
    let t = start.elapsed();
    outcome(
        worst < IDENTITY_TOL && within(t, 10),
        format!("max |H(Y2|V,T,X1,X2,Xr1) - H(Y2|X1,X2,Xr1)| = {worst:.3e} over {count} witnesses, {t:.1?}"),
    )
}

fn inner_within_outer() -> Outcome {
    let start = Instant::now();
    let cfg = SearchConfig::default();
    let mut channels = vec![
        ("noiseless".to_string(), fixtures::ch_noiseless()),
        ("degraded".to_string(), fixtures::ch_deg()),
        ("semideterministic".to_string(), fixtures::ch_sd()),
    ];
    channels.extend((0..10).map(|s| (format!("random#{s}"), fixtures::random_binary_channel(s))));
    let mut worst = (f64::NEG_INFINITY, String::new());
    for (name, law) in &channels {
        let outer = compute_frontier(law, Theorem::T1, &cfg).unwrap();
        let inner = compute_frontier(law, Theorem::T2, &cfg).unwrap();
        let gap = frontier_gap(&inner, &outer);
        if gap > worst.0 {
            worst = (gap, name.clone());
        }
    }
    let t = start.elapsed();
    outcome(
        worst.0 <= INNER_OUTER_TOL && within(t, 300),
        format!("worst inner-over-outer support gap {:.3e} bits ({}), {} channels, {t:.1?}", worst.0, worst.1, channels.len()),
    )
}

fn cli(args: &[&str], threads: Option<&str>) -> std::process::Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cicpc"));
    cmd.args(args).env_remove("CICPC_THREADS");
    if let Some(t) = threads {
        cmd.env("CICPC_THREADS", t);
    }
    cmd.output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cicpc-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn degraded_formulas_agree() -> Outcome {
    let law = fixtures::ch_deg();
    let aux = AuxCardinalities::default_for(law.alphabets());
    let worst = (0..100)
        .map(|s| {
            let joint = inner_joint(&law, aux, s);
            let a = eval_degraded_t3(&joint, &law).unwrap();
            let b = eval_inner_t2(&joint).unwrap();
            [a.r1 - b.r1, a.r2 - b.r2, a.sum - b.sum, a.r2_args[0] - b.r2_args[0], a.r2_args[1] - b.r2_args[1]]
                .iter().map(|d| d.abs()).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);

    let deg = fixture("ch_deg.json");
    let noiseless = fixture("ch_noiseless.json");
    let csv = scratch("deg_t3.csv");
    let small = ["--mu-grid", "5", "--restarts", "4", "--local-steps", "100"];
    let mut args = vec!["frontier", deg.to_str().unwrap(), "--theorem", "t3", "--out", csv.to_str().unwrap()];
    args.extend(small);
    let on_deg = cli(&args, None).status.code();
    let on_noiseless = cli(&["frontier", noiseless.to_str().unwrap(), "--theorem", "t3"], None).status.code();
    outcome(
        worst <= FORMULA_TOL && on_deg == Some(0) && on_noiseless == Some(4),
        format!(
            "max |t3 - t2| = {worst:.3e} over 100 joints; cli t3 exit {on_deg:?} on degraded, {on_noiseless:?} on noiseless"
        ),
    )
}

fn semideterministic_tightness() -> Outcome {
    let start = Instant::now();
    let law = certified_channel();
    let check_cfg = SearchConfig {
        restarts: 256,
        ..SearchConfig::default()
    };
    let verdict = check_more_capable(&law, &check_cfg).unwrap();
    let certified = verdict.status == ConditionStatus::Satisfied && verdict.margin >= -IDENTITY_TOL;

    let cfg = SearchConfig::default();
    let t4 = compute_frontier(&law, Theorem::T4, &cfg).unwrap();
    let t1 = compute_frontier(&law, Theorem::T1, &cfg).unwrap();
    let above = frontier_gap(&t4, &t1);
    let below = frontier_gap(&t1, &t4);
    let t = start.elapsed();
    outcome(
        certified && above <= TIGHTNESS_TOL && below <= TIGHTNESS_TOL,
        format!(
            "more-capable margin {:.3e} bits ({:?}, 256 restarts); support(t4) - support(t1) in [{:.3e}, {above:.3e}], {t:.1?}",
            verdict.margin, verdict.status, -below + 0.0
        ),
    )
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let cfg = SearchConfig::default();
    let grid = GridSpec::new(4);
    let mut parts = Vec::new();
    let mut worst = f64::NEG_INFINITY;
    for (name, law) in [("noiseless", fixtures::ch_noiseless()), ("degraded", fixtures::ch_deg())] {
        for theorem in [Theorem::T1, Theorem::T2] {
            let gap = compare_to_oracle(&law, theorem, &cfg, &grid).unwrap();
            worst = worst.max(gap);
            parts.push(format!("{name}/{theorem} {gap:.2e}"));
        }
    }
    let t = start.elapsed();
    outcome(
        worst <= ORACLE_TOL && within(t, 600),
        format!("oracle minus optimizer support: {}; {t:.1?}", parts.join(", ")),
    )
}

fn information_measures() -> Outcome {
    let mut failures = Vec::new();
    let vars = [X1, X2, Xr1, Y1];
    for k in 1..=4 {
        let axes = vars[..k].iter().map(|&v| Axis::new(v, 2)).collect();
        let h = entropy(&JointPmf::uniform(axes).unwrap(), &vars[..k]).unwrap();
        if h != k as f64 {
            failures.push(format!("H(uniform 2^{k}) = {h}"));
        }
    }
    let pair = [Axis::new(X1, 2), Axis::new(Y1, 2)];
    let bsc = |eps: f64| JointPmf::from_fn(pair.to_vec(), |i| 0.5 * if i[0] == i[1] { 1.0 - eps } else { eps }).unwrap();
    let copy = mutual_information(&bsc(0.0), X1, Y1).unwrap();
    let useless = mutual_information(&bsc(0.5), X1, Y1).unwrap();
    let i01 = mutual_information(&bsc(0.1), X1, Y1).unwrap();
    if (copy - 1.0).abs() > PROPERTY_SLACK {
        failures.push(format!("noiseless copy I = {copy}"));
    }
    if useless.abs() > PROPERTY_SLACK {
        failures.push(format!("BSC(0.5) I = {useless}"));
    }
    if (i01 - BSC_01).abs() > IDENTITY_TOL || (i01 - (1.0 - binary_entropy(0.1))).abs() > IDENTITY_TOL {
        failures.push(format!("BSC(0.1) I = {i01}"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut chain, mut dpi) = (0.0_f64, f64::NEG_INFINITY);
    for _ in 0..1000 {
        let cards: Vec<usize> = (0..3).map(|_| rng.random_range(2..=3)).collect();
        let pmf = random_pmf(&mut rng, vec![Axis::new(X1, cards[0]), Axis::new(X2, cards[1]), Axis::new(Y1, cards[2])]);
        let whole = mutual_information(&pmf, X1, [X2, Y1]).unwrap();
        let first = mutual_information(&pmf, X1, X2).unwrap();
        let rest = conditional_mutual_information(&pmf, X1, Y1, X2).unwrap();
        chain = chain.max((whole - first - rest).abs());

        // A -> B -> C: I(A;C) <= I(A;B).
        let pa = random_row(&mut rng, cards[0]);
        let pb: Vec<Vec<f64>> = (0..cards[0]).map(|_| random_row(&mut rng, cards[1])).collect();
        let pc: Vec<Vec<f64>> = (0..cards[1]).map(|_| random_row(&mut rng, cards[2])).collect();
        let markov = JointPmf::from_fn(
            vec![Axis::new(X1, cards[0]), Axis::new(X2, cards[1]), Axis::new(Y1, cards[2])],
            |i| pa[i[0]] * pb[i[0]][i[1]] * pc[i[1]][i[2]],
        )
        .unwrap();
        let far = mutual_information(&markov, X1, Y1).unwrap();
        let near = mutual_information(&markov, X1, X2).unwrap();
        dpi = dpi.max(far - near);
    }
    if chain > PROPERTY_SLACK {
        failures.push(format!("chain rule residual {chain:.3e}"));
    }
    if dpi > PROPERTY_SLACK {
        failures.push(format!("data processing excess {dpi:.3e}"));
    }
    let pass = failures.is_empty();
    let detail = if pass {
        format!("BSC(0.1) I = {i01:.11}; chain residual {chain:.2e}, DPI excess {dpi:.2e} over 1000 pmfs")
    } else {
        failures.join("; ")
    };
    outcome(pass, detail)
}

fn decode_forward_collapse() -> Outcome {
    let law = certified_channel();
    let aux = AuxCardinalities::default_for(law.alphabets());
    let mut worst: f64 = 0.0;
    let mut consistent = true;
    for seed in 0..100 {
        let d = check_decode_forward_collapse(&inner_joint(&law, aux, seed), true).unwrap();
        worst = worst.max(d.difference.abs());
        consistent &= d.consistent;
    }

    // Noiseless channel, V = X2, independent uniform inputs.
    let noiseless = fixtures::ch_noiseless();
    let f = InnerFactorization::new(
        *noiseless.alphabets(),
        1,
        2,
        ConditionalTable::uniform(1, 2),
        ConditionalTable::uniform(2, 2),
        ConditionalTable::deterministic(4, 2, |row| row / 2),
        ConditionalTable::uniform(8, 2),
    )
    .unwrap();
    let control = check_decode_forward_collapse(&build_inner_joint(&f, &noiseless).unwrap(), false).unwrap();
    outcome(
        worst <= COLLAPSE_TOL && consistent && (control.difference + 1.0).abs() <= FORMULA_TOL,
        format!(
            "max |min - destination term| = {worst:.3e} over 100 factorizations; noiseless V = X2 control fails by {:.12}",
            -control.difference
        ),
    )
}

fn relay_broadcast_specialization() -> Outcome {
    let aux = AuxCardinalities::new(2, 1, 1).unwrap();
    let mut worst: f64 = 0.0;
    for seed in 0..100 {
        let law = fixtures::random_binary_channel(500 + seed);
        let Witness::Inner(f) = sample_witness(WitnessKind::Inner, law.alphabets(), &aux, seed) else {
            unreachable!("inner witness requested")
        };
        // Move all of X2's mass onto its first symbol, keeping p(u|xr1).
        let ux2 = f.f_ux2();
        let cx2 = law.alphabets().card_x2;
        let mut data = vec![0.0; ux2.data().len()];
        for r in 0..ux2.rows() {
            for c in 0..ux2.cols() {
                data[r * ux2.cols() + (c / cx2) * cx2] += ux2.get(r, c);
            }
        }
        let degenerate = InnerFactorization::new(
            *law.alphabets(),
            aux.u,
            aux.v,
            f.f_xr1().clone(),
            ConditionalTable::new(ux2.rows(), ux2.cols(), data).unwrap(),
            f.f_v().clone(),
            f.f_x1().clone(),
        )
        .unwrap();
        let joint = build_inner_joint(&degenerate, &law).unwrap();
        let r = relay_bc_specialize(&joint).unwrap();
        let i = eval_inner_t2(&joint).unwrap();
        worst = worst.max([r.r1 - i.r1, r.r2 - i.r2, r.sum - i.sum].iter().map(|d| d.abs()).fold(0.0, f64::max));
    }
    outcome(
        worst <= FORMULA_TOL,
        format!("max |relay broadcast - inner| = {worst:.3e} over 100 joints with constant V and X2"),
    )
}

fn cli_determinism() -> Outcome {
    let channel = scratch("random7.json");
    save_channel(&fixtures::random_binary_channel(7), &channel).unwrap();
    let run = |name: &str, threads: &str| -> Option<Vec<u8>> {
        let csv = scratch(name);
        let out = cli(
            &["frontier", channel.to_str().unwrap(), "--theorem", "t2", "--seed", "11", "--out", csv.to_str().unwrap()],
            Some(threads),
        );
        out.status.success().then(|| std::fs::read(&csv).unwrap())
    };
    let first = run("serial_a.csv", "1");
    let second = run("serial_b.csv", "1");
    let parallel = run("parallel.csv", "8");
    let ok = first.is_some() && first == second && first == parallel;
    let rows = first.as_ref().map_or(0, |b| b.iter().filter(|&&c| c == b'\n').count());
    outcome(
        ok,
        format!(
            "{rows} CSV lines; rerun identical: {}, CICPC_THREADS=8 identical to 1: {}",
            first.is_some() && first == second,
            first.is_some() && first == parallel
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("high-gain chain rule", high_gain_chain_rule),
        ("semideterministic collapse", semideterministic_collapse),
        ("inner within outer", inner_within_outer),
        ("degraded formulas agree", degraded_formulas_agree),
        ("semideterministic tightness", semideterministic_tightness),
        ("oracle equivalence", oracle_equivalence),
        ("information measures", information_measures),
        ("decode-forward collapse", decode_forward_collapse),
        ("relay broadcast specialization", relay_broadcast_specialization),
        ("cli determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let result = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !result.pass {
            failed += 1;
        }
        let tag = if result.pass { "PASS" } else { "FAIL" };
        println!("{tag} {:>2} {name}: {}", i + 1, result.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
