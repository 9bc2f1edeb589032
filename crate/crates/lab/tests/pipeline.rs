use std::fs;

use adscale_core::{PolicyKind, QualitySchedule};
use adscale_lab::config::describe;
use adscale_lab::output::{AGGREGATE_HEADER, RUNS_HEADER};
use adscale_lab::svg::render_svg;
use adscale_lab::{emit_csv, emit_svg, parse_config, parse_config_str, preset, run_experiment, ExperimentConfig};

fn small(policies: &[PolicyKind], runs: usize, horizon: u64, stride: u64) -> ExperimentConfig {
    let mut c = preset("fig1").unwrap().config;
    c.policies = policies.to_vec();
    c.runs = runs;
    c.horizon = horizon;
    c.checkpoint_stride = stride;
    c.master_seed = 7;
    c
}

fn data_rows(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).skip(1).collect()
}

#[test]
fn presets_restate_published_parameters() {
    let fig1 = preset("fig1").unwrap().config;
    assert_eq!(fig1.raw_means, [0.5, 0.8]);
    assert_eq!(fig1.runs, 100);
    assert_eq!(fig1.policies, PolicyKind::ALL);
    assert_eq!(preset("fig2").unwrap().config.raw_means, [0.005, 0.001]);
    let fig4 = preset("fig4").unwrap().config;
    assert_eq!(fig4.t0(), Some(25));
    assert_eq!(fig4.horizon, 30_000);
    assert_eq!(fig4.policies, [PolicyKind::Thompson, PolicyKind::Aaeas]);
    let fig3 = preset("fig3").unwrap().config;
    assert_eq!(fig3.t0(), Some(100_000));
    assert_eq!(fig3.horizon, 200_000);
    assert!(preset("fig5").is_err());
}

#[test]
fn describe_marks_defaults() {
    let p = preset("fig1").unwrap();
    let text = describe(&p.config, Some(p.stated));
    assert!(text.contains("theta = [0.5, 0.8]  (published)"), "{text}");
    assert!(text.lines().any(|l| l.starts_with("horizon = 100000") && l.ends_with("(default)")), "{text}");
}

#[test]
fn config_file_fills_defaults_from_preset() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("exp.cfg");
    fs::write(&path, "preset = fig1\n").unwrap();
    assert_eq!(parse_config(&path).unwrap(), preset("fig1").unwrap().config);

    fs::write(&path, "# core of fig1\ntheta = [0.5, 0.8]\nschedule = constant(1.0)\nhorizon = 100000\n").unwrap();
    let custom = parse_config(&path).unwrap();
    let fig1 = preset("fig1").unwrap().config;
    assert_eq!(custom.raw_means, fig1.raw_means);
    assert_eq!(custom.schedule, fig1.schedule);
    assert_eq!(custom.horizon, fig1.horizon);
    assert_eq!(custom.runs, fig1.runs);
}

#[test]
fn config_errors_name_the_line() {
    let err = parse_config_str("runs = 3\ntheta = [1.5]\n", "exp.cfg").unwrap_err().to_string();
    assert!(err.contains("exp.cfg:2"), "{err}");
    let err = parse_config_str("colour = blue\n", "exp.cfg").unwrap_err().to_string();
    assert!(err.contains("colour"), "{err}");
    let err = parse_config_str("preset = fig1\nruns = 0\n", "exp.cfg").unwrap_err().to_string();
    assert!(err.contains("runs"), "{err}");
    let missing = tempfile::tempdir().unwrap().path().join("nope.cfg");
    assert!(parse_config(&missing).is_err());
}

#[test]
fn cold_start_schedule_round_trips_through_the_parser() {
    let c = parse_config_str("preset = fig1\nschedule = cold_start(25, 1)\nhorizon = 30000\n", "x").unwrap();
    assert_eq!(c.schedule, QualitySchedule::cold_start(25, 1.0).unwrap());
    assert_eq!(c.t0(), Some(25));
}

#[test]
fn single_run_gives_one_row_per_policy_and_zero_stderr() {
    let config = small(&PolicyKind::ALL, 1, 100, 100);
    let result = run_experiment(&config, 1).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let (runs, agg) = emit_csv(&config, &result, dir.path()).unwrap();

    let agg = fs::read_to_string(agg).unwrap();
    assert!(agg.starts_with("# master_seed=7 rng="));
    assert_eq!(agg.lines().nth(1), Some(AGGREGATE_HEADER));
    let rows = data_rows(&agg);
    assert_eq!(rows.len(), PolicyKind::ALL.len());
    for (row, kind) in rows.iter().zip(PolicyKind::ALL) {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[0], "fig1");
        assert_eq!(cols[1], kind.id());
        assert_eq!(cols[2], "100");
        assert_eq!(cols[4], "0");
        assert_eq!(cols[5], "1");
    }

    let runs = fs::read_to_string(runs).unwrap();
    assert_eq!(runs.lines().nth(1), Some(RUNS_HEADER));
    let per_run = data_rows(&runs);
    for (row, agg_row) in per_run.iter().zip(&rows) {
        let mean = agg_row.split(',').nth(3).unwrap();
        assert_eq!(row.split(',').nth(5).unwrap(), mean);
    }
}

#[test]
fn csv_is_byte_identical_across_reruns_and_worker_counts() {
    let config = small(&[PolicyKind::Aaeas, PolicyKind::Thompson, PolicyKind::Tsallis], 6, 2_000, 250);
    let write = |workers| {
        let dir = tempfile::tempdir().unwrap();
        let result = run_experiment(&config, workers).unwrap();
        let (r, a) = emit_csv(&config, &result, dir.path()).unwrap();
        (fs::read(r).unwrap(), fs::read(a).unwrap())
    };
    let one = write(1);
    assert_eq!(one, write(1));
    assert_eq!(one, write(2));
    assert_eq!(one, write(4));
}

#[test]
fn svg_has_one_polyline_per_policy() {
    let config = small(&[PolicyKind::Ucb], 2, 200, 100);
    let result = run_experiment(&config, 1).unwrap();
    let curve = result.curve(PolicyKind::Ucb).unwrap();
    let svg = render_svg(&[curve], false, "one");
    assert_eq!(svg, render_svg(&[curve], false, "one"));

    let doc = roxmltree::Document::parse(&svg).unwrap();
    let lines: Vec<_> = doc.descendants().filter(|n| n.has_tag_name("polyline")).collect();
    assert_eq!(lines.len(), 1);
    let points = lines[0].attribute("points").unwrap();
    assert_eq!(points.split_whitespace().count(), 2);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("plots/regret.svg");
    emit_svg(&[curve], true, "log", &path).unwrap();
    roxmltree::Document::parse(&fs::read_to_string(&path).unwrap()).unwrap();
}

#[test]
fn svg_with_all_policies_is_well_formed() {
    let config = small(&PolicyKind::ALL, 2, 1_000, 100);
    let result = run_experiment(&config, 0).unwrap();
    let curves: Vec<_> = result.curves_in(&config.policies).collect();
    for log_x in [false, true] {
        let svg = render_svg(&curves, log_x, "a <title> & more");
        let doc = roxmltree::Document::parse(&svg).unwrap();
        assert_eq!(doc.descendants().filter(|n| n.has_tag_name("polyline")).count(), 7);
    }
}
