mod common;

use std::fs;

use resample_bench::bench::{normalized_times, run_bench, BenchConfig, BenchError, Method};
use tempfile::tempdir;

fn config(dataset: &std::path::Path, out: &std::path::Path) -> BenchConfig {
    BenchConfig {
        dataset_dir: Some(dataset.to_path_buf()),
        output_dir: out.to_path_buf(),
        ..BenchConfig::default()
    }
}

#[test]
fn identity_run_gives_one_infinite_record() {
    let data = tempdir().unwrap();
    let out = tempdir().unwrap();
    common::write_corpus(data.path(), 1, 3000);
    let cfg = BenchConfig {
        methods: vec![Method::UAfFft],
        rates: vec![1.0],
        ..config(data.path(), out.path())
    };
    let outcome = run_bench(&cfg).unwrap();
    assert_eq!(outcome.records.len(), 1);
    assert_eq!(outcome.records[0].snr_db, f64::INFINITY);
    let csv = common::read(&out.path().join("results.csv"));
    let row = csv.lines().nth(1).unwrap();
    assert!(row.starts_with("tone_0.wav,U-AF-FFT,1.000000,inf,"), "{row}");
    assert!(out.path().join("recovered/tone_0.U-AF-FFT.1.wav").is_file());
}

#[test]
fn full_grid_cardinality_and_artifacts() {
    let data = tempdir().unwrap();
    let out = tempdir().unwrap();
    common::write_corpus(data.path(), 2, 1500);
    let cfg = config(data.path(), out.path());
    let outcome = run_bench(&cfg).unwrap();
    assert_eq!(outcome.records.len(), 2 * 6 * 9);
    assert!(outcome.skipped.is_empty());

    let csv = common::read(&out.path().join("results.csv"));
    assert!(!csv.contains('\r'));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("file,method,rate,snr_db,elapsed_seconds,seed"));
    assert_eq!(lines.count(), 108);

    for m in Method::TABLE {
        let dat = common::read(&out.path().join("plots").join(format!("{}.dat", m.id())));
        let rows: Vec<&str> = dat.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(rows.len(), 9, "{m}");
        assert!(rows.iter().all(|r| r.split(' ').count() == 2));
    }
    assert_eq!(fs::read_dir(out.path().join("recovered")).unwrap().count(), 108);
    let summary = common::read(&out.path().join("summary.txt"));
    assert!(summary.contains("timing flatness"), "{summary}");

    let norm = normalized_times(&outcome.records);
    assert_eq!(norm.len(), 6);
    assert!(norm.iter().all(|(_, v)| *v > 0.0 && *v <= 1.0), "{norm:?}");
    assert!(norm.iter().any(|(_, v)| *v == 1.0));

    let mut sorted = outcome.records.clone();
    sorted.sort_by(|a, b| (&a.file, a.method).cmp(&(&b.file, b.method)).then(a.rate.total_cmp(&b.rate)));
    assert_eq!(sorted, outcome.records);
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let data = tempdir().unwrap();
    common::write_corpus(data.path(), 2, 2500);
    let mut csvs = Vec::new();
    for threads in [1, 4] {
        let out = tempdir().unwrap();
        let cfg = BenchConfig {
            no_timing: true,
            write_recovered: false,
            rates: vec![0.3, 0.7],
            ..config(data.path(), out.path())
        };
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| run_bench(&cfg)).unwrap();
        csvs.push(fs::read(out.path().join("results.csv")).unwrap());
    }
    assert_eq!(csvs[0], csvs[1]);
    let text = String::from_utf8(csvs.pop().unwrap()).unwrap();
    // elapsed column stays empty
    assert!(text.lines().skip(1).all(|l| l.contains(",,")), "{text}");
}

#[test]
fn bad_files_are_skipped_and_all_bad_fails() {
    let data = tempdir().unwrap();
    let out = tempdir().unwrap();
    fs::write(data.path().join("broken.wav"), b"RIFF\x04\0\0\0WAVE").unwrap();
    let cfg = BenchConfig {
        methods: vec![Method::UAfFftSp],
        rates: vec![0.5],
        ..config(data.path(), out.path())
    };
    assert!(matches!(run_bench(&cfg), Err(BenchError::AllFilesFailed)));

    common::write_corpus(data.path(), 1, 1024);
    let outcome = run_bench(&cfg).unwrap();
    assert_eq!(outcome.records.len(), 1);
    assert_eq!(outcome.skipped.len(), 1);
    assert_eq!(outcome.skipped[0].0, "broken.wav");
    assert!(common::read(&out.path().join("summary.txt")).contains("skipped: broken.wav"));
}

#[test]
fn empty_dataset_is_an_error() {
    let data = tempdir().unwrap();
    let out = tempdir().unwrap();
    assert!(matches!(
        run_bench(&config(data.path(), out.path())),
        Err(BenchError::EmptyDataset(_))
    ));
}

#[cfg(unix)]
#[test]
fn external_scorer_results_are_collected() {
    let data = tempdir().unwrap();
    let out = tempdir().unwrap();
    common::write_corpus(data.path(), 1, 1024);
    let cfg = BenchConfig {
        methods: vec![Method::UAfFftSp, Method::RSp],
        rates: vec![0.5],
        write_recovered: false,
        pesq_command: Some("echo score 3.25 for {deg}".into()),
        ..config(data.path(), out.path())
    };
    let outcome = run_bench(&cfg).unwrap();
    assert!(outcome.records.iter().all(|r| r.pesq == Some(3.25)));
    assert!(out.path().join("reference/tone_0.wav").is_file());
    let pesq = common::read(&out.path().join("pesq.csv"));
    assert_eq!(pesq.lines().count(), 3);
    assert!(pesq.lines().nth(1).unwrap().ends_with(",3.250000"));
}
