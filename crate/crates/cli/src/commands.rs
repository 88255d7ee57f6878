use std::path::{Path, PathBuf};
use std::str::FromStr;

use archdam::benchmarks::{hypervolume2d, igd, BenchmarkKind, FRONT_SAMPLES};
use archdam::config::ProblemKind;
use archdam::geometry::{sample_depths, DesignVector, DESIGN_LEN};
use archdam::mocss::{self, IterationRecord, RunConfig, RunResult};
use archdam::mtdm::{acceptable, rank_r, Scenario};
use archdam::objectives::ObjectiveError;
use archdam::problem::Problem;
use archdam::stress_model::StressEvaluator;
use archdam::willam_warnke::{classify_domain, PrincipalStress, WillamWarnke};
use archdam::{Benchmark, DamProblem};
use log::{debug, info};
use serde::Serialize;

use crate::artifacts::{
    archive_csv, digest_line, emit, fmt6, iteration_log, load_config, read_archive, read_bytes, sha256_hex, unix_ms,
    LoadedConfig, Manifest,
};
use crate::error::CliError;

/// Depths tabulated by `evaluate-geometry`.
const GEOMETRY_ROWS: usize = 50;

pub enum DesignSource {
    Inline(String),
    File(PathBuf),
}

fn parse_design(text: &str) -> Result<DesignVector, CliError> {
    let text = text.trim();
    if text == "reference" {
        return Ok(DesignVector::morrow_point_reference());
    }
    let values: Vec<f64> = if text.starts_with('[') {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("design: {e}")))?
    } else {
        text.split(',')
            .map(|s| {
                s.trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("design: `{}` is not a number", s.trim())))
            })
            .collect::<Result<_, _>>()?
    };
    if values.len() != DESIGN_LEN {
        return Err(CliError::Usage(format!(
            "design: expected {DESIGN_LEN} values, got {}",
            values.len()
        )));
    }
    DesignVector::from_slice(&values).map_err(|e| CliError::Usage(format!("design: {e}")))
}

impl DesignSource {
    fn load(&self) -> Result<DesignVector, CliError> {
        match self {
            DesignSource::Inline(text) => parse_design(text),
            DesignSource::File(path) => {
                let bytes = read_bytes(path)?;
                parse_design(&String::from_utf8_lossy(&bytes))
            }
        }
    }
}

/// One axis of the `ww-surface` grid: `lo:hi:n` or a single value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis {
    lo: f64,
    hi: f64,
    n: usize,
}

impl FromStr for GridAxis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |p: &str| p.trim().parse::<f64>().map_err(|_| format!("`{p}` is not a number"));
        let axis = match parts.as_slice() {
            [v] => {
                let v = num(v)?;
                GridAxis { lo: v, hi: v, n: 1 }
            }
            [lo, hi, n] => GridAxis {
                lo: num(lo)?,
                hi: num(hi)?,
                n: n.trim().parse().map_err(|_| format!("`{n}` is not a count"))?,
            },
            _ => return Err("expected `lo:hi:n` or a single value".into()),
        };
        if axis.n == 0 || !axis.lo.is_finite() || !axis.hi.is_finite() {
            return Err("axis needs finite ends and at least one point".into());
        }
        Ok(axis)
    }
}

impl GridAxis {
    fn values(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        (0..self.n)
            .map(|k| self.lo + (self.hi - self.lo) * k as f64 / (self.n - 1) as f64)
            .collect()
    }
}

fn dam_problem(cfg: &LoadedConfig) -> Result<DamProblem, CliError> {
    let source = cfg
        .path
        .as_ref()
        .map_or("default configuration".to_string(), |p| p.display().to_string());
    cfg.config.dam_problem().map_err(|e| CliError::config(&source, e))
}

fn run_config(cfg: &LoadedConfig, seed: Option<u64>, serial: bool) -> RunConfig {
    let mut run = cfg.config.mocss.clone();
    if let Some(s) = seed {
        run.seed = s;
    }
    if serial {
        run.parallel = false;
    }
    run
}

fn run_logged<P: Problem>(run: &RunConfig, problem: &P) -> Result<RunResult, CliError> {
    mocss::run_observed(run, problem, |rec: &IterationRecord, _| {
        debug!(
            "iteration {}: archive {}, fit1_min {:?}, fit2_min {:?}",
            rec.iter, rec.archive_size, rec.fit1_min, rec.fit2_min
        );
    })
    .map_err(|e| CliError::Usage(format!("mocss: {e}")))
}

pub fn optimize(config: &Path, seed: Option<u64>, out: Option<PathBuf>, serial: bool) -> Result<(), CliError> {
    let started = unix_ms();
    let cfg = load_config(Some(config))?;
    if cfg.config.problem.kind != ProblemKind::Dam {
        return Err(CliError::Usage(
            "problem.kind names a benchmark; use the `benchmark` subcommand".into(),
        ));
    }
    let problem = dam_problem(&cfg)?;
    let run = run_config(&cfg, seed, serial);
    info!("optimizing with {} particles for {} iterations", run.n_cps, run.max_iters);
    let result = run_logged(&run, &problem)?;
    let dir = out.unwrap_or_else(|| PathBuf::from(&cfg.config.output.directory));
    let members = result.memory.members();
    let feasible = members.iter().filter(|m| m.fitness.is_feasible()).count();
    let manifest = Manifest::new("optimize", &cfg, run.seed, started).write_all(
        &dir,
        &[
            ("archive.csv", archive_csv(&cfg.digest, members)),
            ("iterations.jsonl", iteration_log(&cfg.digest, run.seed, &result.log)),
        ],
    )?;
    println!(
        "{} archive designs ({feasible} feasible); manifest {}",
        members.len(),
        manifest.display()
    );
    Ok(())
}

pub fn evaluate(config: Option<&Path>, design: &DesignSource) -> Result<(), CliError> {
    let cfg = load_config(config)?;
    let problem = dam_problem(&cfg)?;
    let d = design.load()?;
    let eval = problem.evaluate(&d).map_err(|e| match e {
        ObjectiveError::OutOfBounds { .. } => CliError::Usage(format!("design: {e}")),
        e => CliError::Runtime(e.to_string()),
    })?;
    let mut text = serde_json::to_string_pretty(&eval).expect("evaluation serializes");
    text.push('\n');
    emit(None, &text)
}

pub fn evaluate_geometry(config: Option<&Path>, design: &DesignSource, out: Option<&Path>) -> Result<(), CliError> {
    let cfg = load_config(config)?;
    let problem = dam_problem(&cfg)?;
    let g = problem
        .geometry(design.load()?)
        .map_err(|e| CliError::Usage(format!("design: {e}")))?;
    let mut text = digest_line(&cfg.digest);
    text.push_str("z,tc,ru,rd,phi_deg,overhang_slope\n");
    for z in sample_depths(g.height(), GEOMETRY_ROWS) {
        let row = [
            z,
            g.thickness(z),
            g.radius_upstream(z),
            g.radius_downstream(z),
            g.central_angle_deg(z),
            g.overhang_slope_at(z),
        ];
        text.push_str(&row.map(fmt6).join(","));
        text.push('\n');
    }
    emit(out, &text)
}

pub fn stress_field(config: Option<&Path>, design: &DesignSource, out: Option<&Path>) -> Result<(), CliError> {
    let cfg = load_config(config)?;
    let problem = dam_problem(&cfg)?;
    let g = problem
        .geometry(design.load()?)
        .map_err(|e| CliError::Usage(format!("design: {e}")))?;
    let field = problem
        .evaluator()
        .evaluate(&g, problem.cases(), problem.grid())
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    let mut text = digest_line(&cfg.digest);
    text.push_str("x,z,face,load_case,s1,s2,s3,ww_margin\n");
    for (p, c, s) in field.iter() {
        let point = &field.points[p];
        let margin = problem.criterion().margin(s).map(fmt6).unwrap_or_default();
        text.push_str(&format!(
            "{},{},{},{},{},{},{},{margin}\n",
            fmt6(point.x),
            fmt6(point.z),
            point.face.as_str(),
            field.cases[c].kind.as_str(),
            fmt6(s.s1),
            fmt6(s.s2),
            fmt6(s.s3),
        ));
    }
    emit(out, &text)
}

pub fn ww_surface(config: Option<&Path>, axes: [GridAxis; 3], out: Option<&Path>) -> Result<(), CliError> {
    let cfg = load_config(config)?;
    let source = config.map_or("default configuration".to_string(), |p| p.display().to_string());
    let strength = cfg.config.strength.params().map_err(|e| CliError::config(&source, e))?;
    let ww = WillamWarnke::fit(strength).map_err(|e| CliError::Usage(format!("{source}: strength: {e}")))?;
    let mut text = digest_line(&cfg.digest);
    text.push_str("sigma1,sigma2,sigma3,domain,F_over_fc,S,margin\n");
    let [a1, a2, a3] = axes.map(|a| a.values());
    for &s1 in &a1 {
        for &s2 in &a2 {
            for &s3 in &a3 {
                let state = PrincipalStress::new(s1, s2, s3);
                let cells = match ww.assess(&state) {
                    Ok(a) => format!("{},{},{},{}", a.domain, fmt6(a.f_over_fc), fmt6(a.surface), fmt6(a.margin)),
                    Err(_) => format!("{},,,", classify_domain(&state)),
                };
                text.push_str(&format!("{},{},{},{cells}\n", fmt6(s1), fmt6(s2), fmt6(s3)));
            }
        }
    }
    emit(out, &text)
}

pub fn decide(archive: &Path, scenarios: Option<&Path>, no_filter: bool, out: Option<&Path>) -> Result<(), CliError> {
    let a = read_archive(archive)?;
    let (scenarios, scenarios_digest) = match scenarios {
        None => (Scenario::sweep(), None),
        Some(p) => {
            let bytes = read_bytes(p)?;
            let list: Vec<Scenario> = serde_json::from_slice(&bytes)
                .map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
            for s in &list {
                s.validate()
                    .map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
            }
            (list, Some(sha256_hex(&bytes)))
        }
    };
    let objectives: Vec<Vec<f64>> = a.rows.iter().map(|r| vec![r.fit1, r.fit2]).collect();
    let keep: Vec<usize> = if no_filter {
        (0..a.rows.len()).collect()
    } else {
        let feasible: Vec<bool> = a.rows.iter().map(|r| r.feasible).collect();
        acceptable(&objectives, &feasible)
    };
    let set: Vec<Vec<f64>> = keep.iter().map(|&i| objectives[i].clone()).collect();
    let mut text = a.digest.as_deref().map(digest_line).unwrap_or_default();
    if let Some(d) = scenarios_digest {
        text.push_str(&format!("# scenarios_sha256: {d}\n"));
    }
    text.push_str("scenario,position,row,fit1,fit2,R,selected\n");
    for s in &scenarios {
        let ranked = rank_r(&set, s).map_err(|e| CliError::Runtime(format!("scenario {}: {e}", s.name)))?;
        for (pos, r) in ranked.iter().enumerate() {
            let row = keep[r.index];
            text.push_str(&format!(
                "{},{},{row},{},{},{:.4},{}\n",
                s.name,
                pos + 1,
                fmt6(a.rows[row].fit1),
                fmt6(a.rows[row].fit2),
                r.r,
                pos == 0
            ));
        }
    }
    emit(out, &text)
}

#[derive(Serialize)]
struct Metrics<'a> {
    igd: f64,
    hypervolume: f64,
    seed: u64,
    problem: &'a str,
    front_size: usize,
    config_sha256: &'a str,
}

pub fn benchmark(
    name: Option<&str>,
    config: Option<&Path>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    serial: bool,
) -> Result<(), CliError> {
    let started = unix_ms();
    let cfg = load_config(config)?;
    let kind = match name {
        Some(n) => BenchmarkKind::parse(n).map_err(|e| CliError::Usage(e.to_string()))?,
        None => cfg.config.problem.kind.benchmark().ok_or_else(|| {
            CliError::Usage("no benchmark problem: pass --problem or set problem.kind".into())
        })?,
    };
    let bench = Benchmark::new(kind);
    let run = run_config(&cfg, seed, serial);
    let result = run_logged(&run, &bench)?;
    let mut front: Vec<[f64; 2]> = result
        .memory
        .members()
        .iter()
        .map(|m| [m.fitness.objectives[0], m.fitness.objectives[1]])
        .collect();
    front.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let samples = bench.analytic_front(FRONT_SAMPLES);
    let igd = igd(&front, &samples).map_err(|e| CliError::Runtime(e.to_string()))?;
    let reference = bench.hypervolume_reference();
    let inside: Vec<[f64; 2]> = front
        .iter()
        .copied()
        .filter(|p| p[0] < reference[0] && p[1] < reference[1])
        .collect();
    let hypervolume = if inside.is_empty() {
        0.0
    } else {
        hypervolume2d(&inside, reference).map_err(|e| CliError::Runtime(e.to_string()))?
    };
    let metrics = Metrics {
        igd,
        hypervolume,
        seed: run.seed,
        problem: kind.name(),
        front_size: front.len(),
        config_sha256: &cfg.digest,
    };
    let mut front_csv = digest_line(&cfg.digest);
    front_csv.push_str("f1,f2\n");
    for p in &front {
        front_csv.push_str(&format!("{},{}\n", fmt6(p[0]), fmt6(p[1])));
    }
    let mut metrics_json = serde_json::to_string_pretty(&metrics).expect("metrics serialize");
    metrics_json.push('\n');
    let dir = out.unwrap_or_else(|| PathBuf::from(&cfg.config.output.directory));
    Manifest::new("benchmark", &cfg, run.seed, started).write_all(
        &dir,
        &[
            ("front.csv", front_csv),
            ("metrics.json", metrics_json),
            ("iterations.jsonl", iteration_log(&cfg.digest, run.seed, &result.log)),
        ],
    )?;
    println!("{}: IGD {igd:.6}, hypervolume {hypervolume:.6}, {} points", kind.name(), front.len());
    Ok(())
}
