macro_rules! example {
    ($name:ident) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", stringify!($name), ".rs"));
        }
    };
}

example!(synthesize_even);
example!(noon_plan);
example!(ideal_round_trip);
example!(full_simulation);
example!(dissipative);
example!(validate_device);
example!(sweep_grid);
example!(rabi_amplitudes);
example!(trajectory_dump);
example!(frame_comparison);
example!(special_functions);

#[test]
fn synthesize_even_lists_eight_pulses() {
    let out = synthesize_even::run_example().unwrap();
    assert!(out.contains("total 8.95"));
    assert!(out.contains("\"steps\""));
}

#[test]
fn noon_plan_counts() {
    let out = noon_plan::run_example().unwrap();
    assert!(out.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["5", "47", "19"]));
}

#[test]
fn ideal_round_trip_is_exact() {
    assert!(ideal_round_trip::run_example().unwrap() > 1.0 - 1e-9);
}

#[test]
fn full_simulation_small_cutoff() {
    let (f, drift) = full_simulation::run_example(3).unwrap();
    assert!(f > 0.5 && f <= 1.0);
    assert!(drift < 1e-7);
}

#[test]
fn dissipative_default() {
    let (f, drift) = dissipative::run_example(1, 2).unwrap();
    assert!(f > 0.5 && f < 1.0);
    assert!(drift < 1e-6);
}

#[test]
fn validate_device_flags_excluded_qubit() {
    let (reference, excluded) = validate_device::run_example().unwrap();
    assert!(reference.entries[0].pass);
    assert!(!excluded.entries[0].pass);
}

#[test]
fn sweep_grid_rows() {
    let csv = sweep_grid::run_example(2).unwrap();
    assert_eq!(csv.lines().count(), 5);
    assert_eq!(csv, sweep_grid::run_example(1).unwrap());
}

#[test]
fn rabi_amplitude_table() {
    assert_eq!(rabi_amplitudes::run_example().unwrap().lines().count(), 1 + 16);
}

#[test]
fn trajectory_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let rows = trajectory_dump::run_example(&path).unwrap();
    assert!(rows > 10);
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), rows + 1);
}

#[test]
fn frames_agree_on_fidelity() {
    let r = frame_comparison::run_example(4).unwrap();
    assert!((r[0].1 - r[1].1).abs() < 1e-6);
    assert!((r[0].1 - r[2].1).abs() < 1e-3);
}

#[test]
fn special_function_listing() {
    assert!(special_functions::run_example().contains("M_1^-1"));
}
