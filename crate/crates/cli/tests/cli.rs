use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn lesionseg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lesionseg"))
        .args(args)
        .env_remove("LESIONSEG_CONFIG")
        .output()
        .expect("binary runs")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn generate(dir: &Path, count: &str, seed: &str) {
    let out = lesionseg(&["generate", "--out", p(dir), "--count", count, "--seed", seed]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn generate_writes_pairs_deterministically() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    generate(a.path(), "5", "11");
    generate(b.path(), "5", "11");
    let mut names: Vec<_> = fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names.len(), 10);
    assert_eq!(names.iter().filter(|n| n.ends_with("_segmentation.png")).count(), 5);
    for n in &names {
        assert_eq!(fs::read(a.path().join(n)).unwrap(), fs::read(b.path().join(n)).unwrap());
    }
}

#[test]
fn segment_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), "1", "3");
    let img = dir.path().join("synth_000.png");
    let mask = dir.path().join("mask.png");
    let overlay = dir.path().join("overlay.png");
    let out = lesionseg(&[
        "segment", "--method", "watershed", "--in", p(&img), "--out", p(&mask),
        "--overlay", p(&overlay), "--truth", p(&dir.path().join("synth_000_segmentation.png")),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(mask.is_file() && overlay.is_file());
    assert!(out.stdout.is_empty());

    let missing = lesionseg(&["segment", "--method", "meanshift", "--in", p(&dir.path().join("nope.png")), "--out", p(&mask)]);
    assert_eq!(missing.status.code(), Some(2));

    let flat = dir.path().join("flat.ppm");
    let mut bytes = b"P6\n20 20\n255\n".to_vec();
    bytes.extend(std::iter::repeat_n([200u8, 170, 150], 400).flatten());
    fs::write(&flat, bytes).unwrap();
    let none = lesionseg(&["segment", "--method", "meanshift", "--in", p(&flat), "--out", p(&mask)]);
    assert_eq!(none.status.code(), Some(1));

    let bad_method = lesionseg(&["segment", "--method", "kmeans", "--in", p(&img), "--out", p(&mask)]);
    assert_eq!(bad_method.status.code(), Some(2));
    let bad_key = lesionseg(&["segment", "--method", "watershed", "--in", p(&img), "--out", p(&mask), "--set", "nope=1"]);
    assert_eq!(bad_key.status.code(), Some(2));
}

#[test]
fn evaluate_reports_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), "3", "5");
    let report = dir.path().join("r.csv");
    let out = lesionseg(&[
        "evaluate", "--method", "watershed", "--images", p(dir.path()), "--truth", p(dir.path()),
        "--report", p(&report), "--jobs", "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("mean IoU: ") && stdout.trim_end().ends_with('%'), "{stdout}");
    assert_eq!(stdout.lines().count(), 1);
    let csv = fs::read_to_string(&report).unwrap();
    assert_eq!(csv.lines().count(), 5);
    assert_eq!(csv.lines().next().unwrap(), "image_id,method,variant,iou,runtime_ms,error");
    assert!(csv.lines().last().unwrap().starts_with("MEAN,,,"));

    let empty = tempfile::tempdir().unwrap();
    let out = lesionseg(&[
        "evaluate", "--method", "watershed", "--images", p(empty.path()), "--truth", p(dir.path()),
        "--report", p(&report),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = lesionseg(&[
        "evaluate", "--method", "watershed", "--images", p(&dir.path().join("missing")),
        "--truth", p(dir.path()), "--report", p(&report),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failing_images_are_data_not_errors() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), "2", "9");
    fs::write(dir.path().join("broken.png"), b"garbage").unwrap();
    let report = dir.path().join("r.csv");
    let out = lesionseg(&[
        "evaluate", "--method", "meanshift", "--images", p(dir.path()), "--truth", p(dir.path()),
        "--report", p(&report),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(&report).unwrap();
    let broken = csv.lines().find(|l| l.starts_with("broken,")).unwrap();
    assert!(broken.starts_with("broken,meanshift,gray,0,,"), "{broken}");
}

#[test]
fn dump_config_reflects_overrides_and_files() {
    let out = lesionseg(&["--dump-config", "--set", "median_radius=4", "--set", "color_mode=color"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("median_radius = 4"));
    assert!(text.contains("color_mode = color"));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.conf");
    fs::write(&cfg, "# tuned\nspatial_bandwidth = 9\n").unwrap();
    let out = lesionseg(&["--dump-config", "--config", p(&cfg)]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("spatial_bandwidth = 9"));

    let out = Command::new(env!("CARGO_BIN_EXE_lesionseg"))
        .args(["--dump-config"])
        .env("LESIONSEG_CONFIG", &cfg)
        .output()
        .unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().contains("spatial_bandwidth = 9"));

    // Round trip: the dump is itself a valid config file.
    let dumped = dir.path().join("d.conf");
    fs::write(&dumped, lesionseg(&["--dump-config"]).stdout).unwrap();
    let again = lesionseg(&["--dump-config", "--config", p(&dumped)]);
    assert_eq!(again.stdout, lesionseg(&["--dump-config"]).stdout);

    fs::write(&cfg, "bogus_key = 1\n").unwrap();
    assert_eq!(lesionseg(&["--dump-config", "--config", p(&cfg)]).status.code(), Some(2));
}
