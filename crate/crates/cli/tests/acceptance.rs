//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use archdam::benchmarks::{igd, Benchmark, BenchmarkKind};
use archdam::geometry::{CanyonProfile, ControlLevels, DamGeometry, DesignVector, LEVELS, MORROW_POINT_HEIGHT};
use archdam::mocss::{self, constrained_dominates, pareto_rank, Candidate, ChargedMemory, IterationRecord, RunConfig};
use archdam::mtdm::{rank_r, Scenario};
use archdam::problem::Fitness;
use archdam::willam_warnke::{calibration_states, PrincipalStress, StrengthParams, WillamWarnke};
use archdam::Config;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

// ---------------------------------------------------------------- oracles

/// Neville's algorithm, independent of the Lagrange basis code.
fn neville(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let mut p = ys.to_vec();
    let n = xs.len();
    for k in 1..n {
        for i in 0..n - k {
            p[i] = ((x - xs[i + k]) * p[i] + (xs[i] - x) * p[i + 1]) / (xs[i] - xs[i + k]);
        }
    }
    p[0]
}

/// Monte Carlo dam volume from the design variables alone.
fn monte_carlo_volume(d: &DesignVector, canyon: &CanyonProfile, samples: usize, seed: u64) -> f64 {
    let h = canyon.height();
    let depths: Vec<f64> = (0..LEVELS).map(|i| h * i as f64 / (LEVELS - 1) as f64).collect();
    let (wc, wb) = (canyon.crest_half_width(), canyon.base_half_width());
    let w = wc.max(wb);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    for _ in 0..samples {
        let z = rng.gen::<f64>() * h;
        let x = (2.0 * rng.gen::<f64>() - 1.0) * w;
        if x.abs() <= wc + (wb - wc) * z / h {
            let t = neville(&depths, &d.tc, z);
            let ru = neville(&depths, &d.ru, z);
            let rd = neville(&depths, &d.rd, z);
            sum += (t + 0.5 * x * x * (1.0 / rd - 1.0 / ru)).abs();
        }
    }
    2.0 * w * h * sum / samples as f64
}

fn brute_force_ranks(fits: &[Fitness]) -> Vec<usize> {
    let n = fits.len();
    let mut rank = vec![0; n];
    let mut level = 0;
    while rank.contains(&0) {
        level += 1;
        let open: Vec<usize> = (0..n).filter(|&i| rank[i] == 0).collect();
        let front: Vec<usize> = open
            .iter()
            .copied()
            .filter(|&i| !open.iter().any(|&j| constrained_dominates(&fits[j], &fits[i])))
            .collect();
        for i in front {
            rank[i] = level;
        }
    }
    rank
}

fn average_ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut r = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        for &k in &idx[i..=j] {
            r[k] = (i + j) as f64 / 2.0;
        }
        i = j + 1;
    }
    r
}

fn spearman(a: &[f64], b: &[f64]) -> f64 {
    let (ra, rb) = (average_ranks(a), average_ranks(b));
    let n = a.len() as f64;
    let (ma, mb) = (ra.iter().sum::<f64>() / n, rb.iter().sum::<f64>() / n);
    let cov: f64 = ra.iter().zip(&rb).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = ra.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = rb.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn golden_front(kind: BenchmarkKind) -> Vec<[f64; 2]> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/golden")
        .join(format!("{}_front.csv", kind.name().to_lowercase()));
    std::fs::read_to_string(&path)
        .expect("golden front file")
        .lines()
        .skip(1)
        .map(|l| {
            let (a, b) = l.split_once(',').expect("two columns");
            [a.parse().expect("f1"), b.parse().expect("f2")]
        })
        .collect()
}

/// Archive checks applied after every iteration of a run.
#[derive(Default)]
struct ArchiveAudit {
    iterations: usize,
    violations: Vec<String>,
    best: [Option<f64>; 2],
}

impl ArchiveAudit {
    fn observe(&mut self, label: &str, capacity: usize, rec: &IterationRecord, m: &ChargedMemory) {
        self.iterations += 1;
        if !m.is_pure() {
            self.violations.push(format!("{label} it {}: dominated member", rec.iter));
        }
        if m.len() > capacity {
            self.violations.push(format!("{label} it {}: {} > capacity", rec.iter, m.len()));
        }
        for (k, v) in [rec.fit1_min, rec.fit2_min].into_iter().enumerate() {
            match (self.best[k], v) {
                (Some(_), None) => self.violations.push(format!("{label} it {}: lost feasible extreme", rec.iter)),
                (Some(b), Some(v)) if v > b => {
                    self.violations.push(format!("{label} it {}: objective {} worsened", rec.iter, k + 1))
                }
                _ => {}
            }
            if v.is_some() {
                self.best[k] = v;
            }
        }
    }

    fn reset_run(&mut self) {
        self.best = [None, None];
    }
}

// ---------------------------------------------------------------- criteria

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut strengths = vec![StrengthParams::morrow_point()];
    for _ in 0..50 {
        let fc = rng.gen_range(10.0..80.0);
        strengths.push(StrengthParams::new(fc, rng.gen_range(0.03..0.12) * fc).unwrap());
    }
    let mut worst: f64 = 0.0;
    for p in &strengths {
        let ww = WillamWarnke::fit(*p).unwrap();
        for s in calibration_states(p) {
            worst = worst.max(ww.margin(&s).map_or(f64::INFINITY, f64::abs));
        }
    }
    let secs = t.elapsed().as_secs_f64();
    outcome(
        worst < 1e-9 && secs < 1.0,
        format!("{} strength sets, worst |criterion| {worst:.2e} (< 1e-9), {secs:.3} s (< 1 s)", strengths.len()),
    )
}

fn criterion_2() -> Outcome {
    let ww = WillamWarnke::fit(StrengthParams::morrow_point()).unwrap();
    let ft = ww.strength().ft;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let d = 1e-9;
    let mut jumps = [0.0_f64; 3];
    let mut worst_scale: f64 = 0.0;
    let mut skipped = 0;
    let gap = |lo: PrincipalStress, hi: PrincipalStress| match (ww.margin(&lo), ww.margin(&hi)) {
        (Ok(a), Ok(b)) => Some((a - b).abs()),
        _ => None,
    };
    for _ in 0..10_000 {
        let (c1, c2) = (rng.gen_range(-40.0..0.0), rng.gen_range(-40.0..0.0));
        let (t1, t2) = (rng.gen_range(0.0..ft), rng.gen_range(0.0..ft));
        let checks = [
            gap(PrincipalStress::new(-d, c1, c2), PrincipalStress::new(d, c1, c2)),
            gap(PrincipalStress::new(t1, -d, c1), PrincipalStress::new(t1, d, c1)),
            gap(PrincipalStress::new(t1, t2, -d), PrincipalStress::new(t1, t2, d)),
        ];
        for (k, c) in checks.into_iter().enumerate() {
            match c {
                Some(g) => jumps[k] = jumps[k].max(g),
                None => skipped += 1,
            }
        }
        let s = PrincipalStress::new(rng.gen_range(-40.0..ft), rng.gen_range(-40.0..ft), rng.gen_range(-40.0..ft));
        let lambda = 10f64.powf(rng.gen_range(-2.0..2.0));
        let scaled = WillamWarnke::fit(ww.strength().scaled(lambda)).unwrap();
        match (ww.margin(&s), scaled.margin(&s.scaled(lambda))) {
            (Ok(a), Ok(b)) => worst_scale = worst_scale.max((a - b).abs()),
            (Err(_), Err(_)) => skipped += 1,
            _ => worst_scale = f64::INFINITY,
        }
    }
    let pass = jumps.iter().all(|&j| j < 1e-6) && worst_scale < 1e-9;
    outcome(
        pass,
        format!(
            "max jump at sigma1=0 {:.2e}, sigma2=0 {:.2e}, sigma3=0 {:.2e} (< 1e-6); scaling {worst_scale:.2e} (< 1e-9); {skipped} undefined skipped",
            jumps[0], jumps[1], jumps[2]
        ),
    )
}

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let g = DamGeometry::new(
        DesignVector::morrow_point_reference(),
        ControlLevels::uniform(MORROW_POINT_HEIGHT, LEVELS - 1).unwrap(),
        CanyonProfile::morrow_point(),
    )
    .unwrap();
    let v32 = g.volume(32).unwrap();
    let v64 = g.volume(64).unwrap();
    let mc = monte_carlo_volume(g.design(), g.canyon(), 10_000_000, 3);
    let secs = t.elapsed().as_secs_f64();
    let (e_mc, e_ord) = (((v32 - mc) / mc).abs(), ((v64 - v32) / v32).abs());
    outcome(
        e_mc < 0.005 && e_ord < 0.001 && secs < 10.0,
        format!(
            "V = {v32:.1} m^3, Monte Carlo {mc:.1} (rel {e_mc:.2e} < 5e-3), order 64 rel {e_ord:.2e} (< 1e-3), {secs:.2} s (< 10 s)"
        ),
    )
}

fn criterion_4() -> Outcome {
    let lv = ControlLevels::uniform(MORROW_POINT_HEIGHT, LEVELS - 1).unwrap();
    let h = MORROW_POINT_HEIGHT;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for i in 0..LEVELS {
        for k in 0..LEVELS {
            let expect = if i == k { 1.0 } else { 0.0 };
            worst = worst.max((lv.basis(lv.depths()[k], i) - expect).abs());
        }
    }
    for _ in 0..100 {
        let z = rng.gen_range(0.0..h);
        worst = worst.max(((0..LEVELS).map(|i| lv.basis(z, i)).sum::<f64>() - 1.0).abs());
        let coef: [f64; 6] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
        let degree = rng.gen_range(0..6);
        let poly = |t: f64| coef[..=degree].iter().rev().fold(0.0, |acc, c| acc * (t / h) + c);
        let values: Vec<f64> = lv.depths().iter().map(|&d| poly(d)).collect();
        worst = worst.max((lv.interpolate(z, &values) - poly(z)).abs());
    }
    outcome(worst < 1e-9, format!("worst deviation {worst:.2e} over 100 depths (< 1e-9)"))
}

fn benchmark_campaign(kind: BenchmarkKind, audit: &mut ArchiveAudit) -> (Vec<f64>, f64) {
    let b = Benchmark::new(kind);
    let samples = golden_front(kind);
    let mut igds = Vec::new();
    let mut slowest: f64 = 0.0;
    for seed in 0..10 {
        let cfg = RunConfig {
            n_cps: 100,
            max_iters: 200,
            archive_capacity: 100,
            seed,
            ..RunConfig::default()
        };
        let t = Instant::now();
        audit.reset_run();
        let label = format!("{} seed {seed}", kind.name());
        let r = mocss::run_observed(&cfg, &b, |rec, m| audit.observe(&label, cfg.archive_capacity, rec, m)).unwrap();
        slowest = slowest.max(t.elapsed().as_secs_f64());
        let front: Vec<[f64; 2]> = r
            .memory
            .members()
            .iter()
            .map(|m| [m.fitness.objectives[0], m.fitness.objectives[1]])
            .collect();
        igds.push(igd(&front, &samples).unwrap());
    }
    (igds, slowest)
}

fn criterion_5(audit: &mut ArchiveAudit) -> Outcome {
    let (sch, t_sch) = benchmark_campaign(BenchmarkKind::Sch, audit);
    let (zdt, t_zdt) = benchmark_campaign(BenchmarkKind::Zdt1, audit);
    let (m_sch, m_zdt) = (median(sch), median(zdt));
    let slowest = t_sch.max(t_zdt);
    outcome(
        m_sch < 0.01 && m_zdt < 0.05 && slowest < 30.0,
        format!(
            "median IGD SCH {m_sch:.4} (< 0.01), ZDT1 {m_zdt:.4} (< 0.05); slowest run {slowest:.2} s (< 30 s)"
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut mismatches = 0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=30);
        let fits: Vec<Fitness> = (0..n)
            .map(|_| Fitness {
                objectives: vec![rng.gen_range(0..6) as f64, rng.gen_range(0..6) as f64],
                violation: if rng.gen_bool(1.0 / 3.0) {
                    0.5 * rng.gen_range(1..4) as f64
                } else {
                    0.0
                },
            })
            .collect();
        let refs: Vec<&Fitness> = fits.iter().collect();
        if pareto_rank(&refs) != brute_force_ranks(&fits) {
            mismatches += 1;
        }
    }
    outcome(mismatches == 0, format!("{mismatches} of 200 populations disagree with the O(n^2) oracle"))
}

fn criterion_8(audit: &mut ArchiveAudit) -> Outcome {
    let config = Config::default();
    let problem = config.dam_problem().unwrap();
    let cfg = RunConfig {
        n_cps: 30,
        max_iters: 50,
        parallel: false,
        ..config.mocss.clone()
    };
    let t = Instant::now();
    audit.reset_run();
    let r = mocss::run_observed(&cfg, &problem, |rec, m| audit.observe("dam", cfg.archive_capacity, rec, m)).unwrap();
    let secs = t.elapsed().as_secs_f64();
    let feasible: Vec<&Candidate> = r.memory.members().iter().filter(|c| c.fitness.is_feasible()).collect();
    let constraints_ok = feasible.iter().all(|c| {
        let e = problem.evaluate(&DesignVector::from_slice(&c.position).unwrap()).unwrap();
        e.feasible && e.diagnostics.constraints.iter().all(|k| k.value <= 0.0)
    });
    let mutually_nd = feasible.iter().all(|a| {
        feasible
            .iter()
            .all(|b| !archdam::mocss::pareto_dominates(&b.fitness.objectives, &a.fitness.objectives))
    });
    let f1: Vec<f64> = feasible.iter().map(|c| c.fitness.objectives[0]).collect();
    let f2: Vec<f64> = feasible.iter().map(|c| c.fitness.objectives[1]).collect();
    let rho = if feasible.len() >= 2 { spearman(&f1, &f2) } else { f64::NAN };
    outcome(
        secs < 60.0 && feasible.len() >= 20 && constraints_ok && mutually_nd && rho < -0.9,
        format!(
            "seed {}: {} feasible non-dominated designs (>= 20), constraints {}, Spearman {rho:.3} (< -0.9), {secs:.2} s (< 60 s)",
            cfg.seed,
            feasible.len(),
            if constraints_ok && mutually_nd { "hold" } else { "broken" },
        ),
    )
}

fn criterion_6(audit: &ArchiveAudit) -> Outcome {
    let detail = match audit.violations.first() {
        None => format!("{} iterations over 21 runs audited, no violations", audit.iterations),
        Some(v) => format!("{} violations, first: {v}", audit.violations.len()),
    };
    outcome(audit.violations.is_empty(), detail)
}

fn criterion_9() -> Outcome {
    let three = vec![vec![1.0, 3.0], vec![2.0, 2.0], vec![3.0, 1.0]];
    let c = Scenario::new("C", vec![0.5, 0.5]).unwrap();
    let mut r = rank_r(&three, &c).unwrap();
    let winner = r[0].index;
    r.sort_by_key(|x| x.index);
    let hand = r[0].r == 0.0 && (r[1].r - 0.5f64.sqrt()).abs() < 1e-12 && r[2].r == 0.0 && winner == 1;

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut transform_ok = 0;
    let mut sweep_ok = 0;
    for _ in 0..100 {
        let n = rng.gen_range(2..60);
        let mut xs: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        let set: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x, (1.0 - x).powf(1.5)]).collect();
        let warped: Vec<Vec<f64>> = set.iter().map(|f| vec![f[0].exp() * 4.0 - 1.0, f[1].powi(3) + 2.0]).collect();
        let w = rng.gen_range(0.05..0.95);
        let s = Scenario::new("s", vec![w, 1.0 - w]).unwrap();
        let order = |v: &[Vec<f64>]| rank_r(v, &s).unwrap().iter().map(|x| x.index).collect::<Vec<_>>();
        if order(&set) == order(&warped) {
            transform_ok += 1;
        }
        let picks: Vec<usize> = Scenario::sweep()
            .iter()
            .map(|sc| rank_r(&set, sc).unwrap()[0].index)
            .collect();
        if picks
            .windows(2)
            .all(|p| set[p[1]][0] >= set[p[0]][0] && set[p[1]][1] <= set[p[0]][1])
        {
            sweep_ok += 1;
        }
    }
    outcome(
        hand && transform_ok == 100 && sweep_ok == 100,
        format!(
            "3-point example {}, transform invariance {transform_ok}/100, A-E sweep monotone {sweep_ok}/100",
            if hand { "(0, 0.7071, 0)" } else { "wrong" }
        ),
    )
}

fn run_cli(dir: &Path, args: &[&str]) -> Result<Vec<u8>, String> {
    let o = Command::new(env!("CARGO_BIN_EXE_archdam"))
        .args(args)
        .current_dir(dir)
        .output()
        .map_err(|e| e.to_string())?;
    if !o.status.success() {
        return Err(format!("{args:?}: {}", String::from_utf8_lossy(&o.stderr)));
    }
    Ok(o.stdout)
}

fn criterion_10() -> Outcome {
    let d = tempfile::tempdir().unwrap();
    let dir = d.path();
    std::fs::write(dir.join("run.json"), r#"{"mocss": {"n_cps": 30, "max_iters": 20}}"#).unwrap();
    std::fs::write(dir.join("bench.json"), r#"{"mocss": {"n_cps": 40, "max_iters": 30}}"#).unwrap();
    let mut compared = 0;
    let mut differing = Vec::new();
    let mut errors = Vec::new();
    let runs: Vec<(&str, Vec<String>, Vec<&str>)> = vec![
        ("optimize", vec!["optimize", "--config", "run.json", "--seed", "7", "--out", "{o}"].into_iter().map(String::from).collect(), vec!["archive.csv", "iterations.jsonl"]),
        ("benchmark", ["benchmark", "--problem", "zdt1", "--config", "bench.json", "--seed", "3", "--out", "{o}"].map(String::from).to_vec(), vec!["front.csv", "metrics.json", "iterations.jsonl"]),
        ("evaluate", ["evaluate", "--config", "run.json", "--design", "reference"].map(String::from).to_vec(), vec![]),
        ("evaluate-geometry", ["evaluate-geometry", "--config", "run.json", "--design", "reference", "--out", "{o}/g.csv"].map(String::from).to_vec(), vec!["g.csv"]),
        ("stress-field", ["stress-field", "--config", "run.json", "--design", "reference", "--out", "{o}/s.csv"].map(String::from).to_vec(), vec!["s.csv"]),
        ("ww-surface", ["ww-surface", "--config", "run.json", "--out", "{o}/w.csv"].map(String::from).to_vec(), vec!["w.csv"]),
        ("decide", ["decide", "--archive", "optimize-a/archive.csv", "--out", "{o}/d.csv"].map(String::from).to_vec(), vec!["d.csv"]),
    ];
    for (name, args, files) in &runs {
        let mut outputs = Vec::new();
        for tag in ["a", "b"] {
            let o = format!("{name}-{tag}");
            std::fs::create_dir_all(dir.join(&o)).unwrap();
            let argv: Vec<String> = args.iter().map(|a| a.replace("{o}", &o)).collect();
            let argv: Vec<&str> = argv.iter().map(String::as_str).collect();
            match run_cli(dir, &argv) {
                Ok(stdout) => outputs.push((o, stdout)),
                Err(e) => errors.push(e),
            }
        }
        if outputs.len() != 2 {
            continue;
        }
        compared += 1;
        if *name == "evaluate" && outputs[0].1 != outputs[1].1 {
            differing.push(format!("{name} stdout"));
        }
        for f in files {
            let a = std::fs::read(dir.join(&outputs[0].0).join(f));
            let b = std::fs::read(dir.join(&outputs[1].0).join(f));
            match (a, b) {
                (Ok(a), Ok(b)) if a == b && !a.is_empty() => {}
                _ => differing.push(format!("{name}/{f}")),
            }
        }
    }
    outcome(
        errors.is_empty() && differing.is_empty() && compared == runs.len(),
        format!(
            "{compared}/{} subcommands rerun; differing artifacts {:?}; errors {:?}",
            runs.len(),
            differing,
            errors
        ),
    )
}

fn main() {
    let mut audit = ArchiveAudit::default();
    let mut results: Vec<(u8, &str, Outcome, f64)> = Vec::new();
    let mut timed = |n: u8, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = f();
        let secs = t.elapsed().as_secs_f64();
        println!("{} criterion {n:>2} {name}: {} [{secs:.2} s]", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push((n, name, o, secs));
    };
    timed(1, "criterion calibration", &mut criterion_1);
    timed(2, "criterion continuity and scaling", &mut criterion_2);
    timed(3, "volume oracle", &mut criterion_3);
    timed(4, "interpolation exactness", &mut criterion_4);
    timed(5, "benchmark fronts", &mut || criterion_5(&mut audit));
    timed(7, "dominance oracle", &mut criterion_7);
    timed(8, "end-to-end dam run", &mut || criterion_8(&mut audit));
    timed(6, "archive invariants", &mut || criterion_6(&audit));
    timed(9, "tournament ranking", &mut criterion_9);
    timed(10, "determinism", &mut criterion_10);
    let failed: Vec<u8> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    println!(
        "acceptance: {} of {} criteria pass{}",
        results.len() - failed.len(),
        results.len(),
        if failed.is_empty() {
            String::new()
        } else {
            format!("; failing: {failed:?}")
        }
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
