use cicpc::bounds::Theorem;
use cicpc::channel::{channel_from_json, channel_to_json};
use cicpc::fixtures;
use cicpc::region::{compute_frontier, frontier_gap, maximize_direction, SearchConfig};

fn small() -> SearchConfig {
    SearchConfig {
        mu_grid_size: 5,
        restarts: 4,
        local_steps: 120,
        ..SearchConfig::default()
    }
}

#[test]
fn frontiers_are_deterministic() {
    let law = fixtures::ch_sd();
    for theorem in [Theorem::T1, Theorem::T2, Theorem::T4] {
        let a = compute_frontier(&law, theorem, &small()).unwrap();
        let b = compute_frontier(&law, theorem, &small()).unwrap();
        assert_eq!(a, b, "{theorem}");
    }
}

#[test]
fn more_restarts_never_lower_the_support() {
    let law = fixtures::random_binary_channel(4);
    for theorem in [Theorem::T1, Theorem::T2] {
        for mu in [0.0, 0.3, 1.0] {
            let few = maximize_direction(&law, theorem, mu, &small()).unwrap();
            let many = maximize_direction(&law, theorem, mu, &SearchConfig { restarts: 8, ..small() }).unwrap();
            assert!(many.weighted(mu) >= few.weighted(mu) - 1e-12, "{theorem} mu {mu}");
        }
    }
}

#[test]
fn degraded_region_matches_inner_bound_search() {
    let law = fixtures::ch_deg();
    let t2 = compute_frontier(&law, Theorem::T2, &small()).unwrap();
    let t3 = compute_frontier(&law, Theorem::T3, &small()).unwrap();
    assert!(frontier_gap(&t3, &t2).abs() <= 1e-9);
    assert!(frontier_gap(&t2, &t3).abs() <= 1e-9);
}

#[test]
fn class_gates_reject_mismatched_channels() {
    let err = compute_frontier(&fixtures::ch_noiseless(), Theorem::T3, &small()).unwrap_err();
    assert!(err.is_class_mismatch());
    let err = compute_frontier(&fixtures::random_binary_channel(1), Theorem::T4, &small()).unwrap_err();
    assert!(err.is_class_mismatch());
}

#[test]
fn shipped_fixture_files_match_constructors() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for (file, law) in [
        ("ch_noiseless.json", fixtures::ch_noiseless()),
        ("ch_deg.json", fixtures::ch_deg()),
        ("ch_sd.json", fixtures::ch_sd()),
    ] {
        let text = std::fs::read_to_string(dir.join(file)).unwrap();
        assert_eq!(text, channel_to_json(&law), "{file}");
        assert_eq!(channel_from_json(&text).unwrap().transition(), law.transition());
    }
}
