#![allow(dead_code)]

use std::path::PathBuf;

use archdam::benchmarks::{Benchmark, BenchmarkKind, FRONT_SAMPLES};

pub fn golden_path(kind: BenchmarkKind) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{}_front.csv", kind.name().to_lowercase()))
}

/// Frozen analytic front samples. Set `ARCHDAM_BLESS=1` to regenerate.
pub fn golden_front(kind: BenchmarkKind) -> Vec<[f64; 2]> {
    let path = golden_path(kind);
    if std::env::var_os("ARCHDAM_BLESS").is_some() {
        let mut text = String::from("f1,f2\n");
        for p in Benchmark::new(kind).analytic_front(FRONT_SAMPLES) {
            text.push_str(&format!("{:?},{:?}\n", p[0], p[1]));
        }
        std::fs::write(&path, text).expect("write golden front");
    }
    let text = std::fs::read_to_string(&path).expect("golden front file");
    text.lines()
        .skip(1)
        .map(|line| {
            let (a, b) = line.split_once(',').expect("two columns");
            [a.parse().expect("f1"), b.parse().expect("f2")]
        })
        .collect()
}
