//! Subcommands of the `qgwalk` binary. Every command reads a [`RunConfig`],
//! builds its CSV outputs in memory and writes them atomically into `--out`.
//!
//! Exit codes: 0 success, 1 verification or matching failure, 2 invalid input.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;

use crate::config::{config_error, RunConfig};
use crate::dynamics::{finding_probability, WalkState};
use crate::error::Result;
use crate::graph::{enumerate_partitions, partition_count, ArcSpace, Graph, Partition, DEFAULT_PARTITION_CAP};
use crate::operator::{
    evolution, verify_a_to_a, verify_change_partition, verify_dual, verify_inverse, verify_severini, verify_thm1,
    CoinSet,
};
use crate::quantum_graph::{
    least_singular_state, proposition_equivalences, scan_roots, verify_boundary_conditions, wavefunction,
    CONDITION_TOL, DEFAULT_SAMPLES, ROOT_TOL,
};
use crate::szegedy::{compare_spectra, direct_spectrum, szegedy_spectrum, szegedy_walk};

pub const THREADS_ENV: &str = "QGWALK_THREADS";

#[derive(Debug, Parser)]
#[command(name = "qgwalk", version, about = "Coined quantum walks and quantum graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Seed for random partitions and coins; overrides the config's `seed`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Pass/fail tolerance for the checking commands.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Finding probabilities over time: distribution.csv
    Evolve,
    /// Operator identities: verify.csv
    Verify,
    /// Predicted vs direct Szegedy spectrum: spectrum.csv, match.csv
    Szegedy,
    /// Stationarity scan over k: scan.csv, roots.csv
    QgScan,
    /// Eigenfunction at a root: eigenfunction.csv, boundary.csv, proposition.csv
    QgEigenfunction,
    /// Count and list the partitions of the line digraph: partitions.csv
    Partitions,
}

/// Result of a command that ran to completion.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub passed: bool,
    pub files: Vec<PathBuf>,
    pub summary: String,
}

struct Csv {
    name: &'static str,
    body: String,
}

impl Csv {
    fn new(name: &'static str, header: &str) -> Self {
        Csv { name, body: format!("{header}\n") }
    }

    fn row(&mut self, fields: &[String]) {
        self.body.push_str(&fields.join(","));
        self.body.push('\n');
    }
}

/// 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_atomic(dir: &Path, files: &[Csv]) -> Result<Vec<PathBuf>> {
    let io = |e: std::io::Error| config_error("--out", e);
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut staged = Vec::with_capacity(files.len());
    for f in files {
        let tmp = dir.join(format!(".{}.tmp", f.name));
        std::fs::write(&tmp, &f.body).map_err(io)?;
        staged.push((tmp, dir.join(f.name)));
    }
    for (tmp, path) in &staged {
        std::fs::rename(tmp, path).map_err(io)?;
    }
    Ok(staged.into_iter().map(|(_, p)| p).collect())
}

struct Context<'a> {
    config: &'a RunConfig,
    graph: Graph,
    space: ArcSpace,
    seed: Option<u64>,
    tol: Option<f64>,
}

impl Context<'_> {
    fn walk_parts(&self, rng: &mut rand_chacha::ChaCha8Rng) -> Result<(Partition, CoinSet)> {
        let walk = self.config.walk()?;
        let p = walk.partition.build("walk.partition", &self.space, rng)?;
        let q = match &self.config.quantum_graph {
            Some(spec) => Some(spec.build(&self.graph)?),
            None => None,
        };
        let coins = walk.coin.build(&self.space, q.as_ref(), rng)?;
        Ok((p, coins))
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let path = cli.config.as_ref().ok_or_else(|| config_error("--config", "a config file is required"))?;
    let config = RunConfig::load(path)?;
    if let Some(tol) = cli.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(config_error("--tol", format!("must be positive, got {tol}")));
        }
    }
    let graph = config.build_graph()?;
    let space = ArcSpace::new(&graph);
    let ctx = Context { config: &config, graph, space, seed: cli.seed, tol: cli.tol };
    let (passed, summary, files) = match cli.command {
        Command::Evolve => cmd_evolve(&ctx)?,
        Command::Verify => cmd_verify(&ctx)?,
        Command::Szegedy => cmd_szegedy(&ctx)?,
        Command::QgScan => cmd_qg_scan(&ctx)?,
        Command::QgEigenfunction => cmd_qg_eigenfunction(&ctx)?,
        Command::Partitions => cmd_partitions(&ctx)?,
    };
    let files = write_atomic(&cli.out, &files)?;
    Ok(Outcome { passed, files, summary })
}

type Produced = (bool, String, Vec<Csv>);

fn cmd_evolve(ctx: &Context) -> Result<Produced> {
    let spec = ctx.config.evolve.as_ref().ok_or_else(|| config_error("evolve", "section is required"))?;
    let mut rng = ctx.config.rng(ctx.seed);
    let (p, coins) = ctx.walk_parts(&mut rng)?;
    let u = evolution(ctx.config.walk()?.kind.kind(), &ctx.space, &p, &coins)?;
    let init = &spec.initial;
    let mut state = match (init.arc, init.vertex, &init.phi) {
        (Some(arc), None, None) => WalkState::basis(&ctx.space, arc).map_err(|e| config_error("evolve.initial.arc", e))?,
        (None, Some(v), Some(phi)) => {
            let phi: Vec<Complex64> = phi.iter().map(|z| Complex64::new(z[0], z[1])).collect();
            WalkState::local(&ctx.space, v, &phi).map_err(|e| config_error("evolve.initial", e))?
        }
        _ => return Err(config_error("evolve.initial", "give either `arc` or both `vertex` and `phi`")),
    };
    let mut csv = Csv::new("distribution.csv", "time,vertex,probability");
    for t in 0..=spec.steps {
        if t > 0 {
            state = crate::dynamics::evolve(&u, &state, 1)?;
        }
        for (v, p) in ctx.graph.vertices().zip(finding_probability(&ctx.space, &state).0) {
            csv.row(&[t.to_string(), v.to_string(), num(p)]);
        }
    }
    Ok((true, format!("{} steps over {} vertices", spec.steps, ctx.graph.vertex_count()), vec![csv]))
}

fn cmd_verify(ctx: &Context) -> Result<Produced> {
    let tol = ctx.tol.unwrap_or(1e-10);
    let dual_steps = ctx.config.verify.as_ref().map_or(5, |v| v.dual_steps);
    let mut rng = ctx.config.rng(ctx.seed);
    let (p, coins) = ctx.walk_parts(&mut rng)?;
    let other = match ctx.config.verify.as_ref().and_then(|v| v.other_partition.as_ref()) {
        Some(spec) => spec.build("verify.other_partition", &ctx.space, &mut rng)?,
        None => Partition::random(&ctx.space, &mut rng),
    };
    let space = &ctx.space;
    let dual = (1..=dual_steps).map(|n| verify_dual(space, &p, &coins, n)).fold(0.0, f64::max);
    let severini = verify_severini(space, &p, &coins);
    let rows = [
        ("dual", dual),
        ("inverse", verify_inverse(space, &coins)),
        ("change-partition", verify_change_partition(space, &p, &other, &coins)),
        ("thm1", verify_thm1(space, &p, &coins)),
        ("a-to-a", verify_a_to_a(space, &p, &coins)),
        ("severini", if severini.passed() { 0.0 } else { 1.0 }),
    ];
    let mut csv = Csv::new("verify.csv", "identity,residual,passed");
    let mut summary = String::new();
    let mut all = true;
    for (name, r) in rows {
        let ok = r <= tol;
        all &= ok;
        csv.row(&[name.to_string(), num(r), ok.to_string()]);
        let _ = writeln!(summary, "{name:<17} {r:.3e} {}", if ok { "pass" } else { "FAIL" });
    }
    Ok((all, summary, vec![csv]))
}

fn cmd_szegedy(ctx: &Context) -> Result<Produced> {
    let tol = ctx.tol.unwrap_or(1e-8);
    let spec = ctx.config.szegedy.as_ref().ok_or_else(|| config_error("szegedy", "section is required"))?;
    let p = spec.transition.build("szegedy.transition", &ctx.space)?;
    let predicted = szegedy_spectrum(&ctx.space, &p)?;
    let direct = direct_spectrum(&szegedy_walk(&ctx.space, &p))?;
    let report = compare_spectra(&predicted.predicted(), &direct, tol)?;
    let lift = predicted.max_lift_residual();

    let mut spectrum = Csv::new("spectrum.csv", "source,real,imag,nu");
    for m in &predicted.mapped {
        spectrum.row(&["mapped".into(), num(m.value.re), num(m.value.im), num(m.nu)]);
    }
    for z in &predicted.leftover {
        spectrum.row(&["leftover".into(), num(z.re), num(z.im), String::new()]);
    }
    for z in &direct {
        spectrum.row(&["direct".into(), num(z.re), num(z.im), String::new()]);
    }
    let passed = report.passed() && lift <= tol;
    let mut matching = Csv::new("match.csv", "case,max_mismatch,unmatched,max_lift_residual,degenerate_lifts,tol,passed");
    matching.row(&[
        format!("{:?}", predicted.case).to_lowercase(),
        num(report.max_mismatch),
        report.unmatched.to_string(),
        num(lift),
        predicted.degenerate_count().to_string(),
        num(tol),
        passed.to_string(),
    ]);
    let summary = format!("max mismatch {:.3e}, max lift residual {lift:.3e}", report.max_mismatch);
    Ok((passed, summary, vec![spectrum, matching]))
}

fn cmd_qg_scan(ctx: &Context) -> Result<Produced> {
    let q = ctx.config.quantum_graph_params(&ctx.graph)?;
    let spec = ctx.config.scan.as_ref().ok_or_else(|| config_error("scan", "section is required"))?;
    let scan = scan_roots(&ctx.space, &q, &spec.options()).map_err(|e| config_error("scan", e))?;
    let mut grid = Csv::new("scan.csv", "k,indicator,det_real,det_imag");
    for ((k, ind), det) in scan.grid.iter().zip(&scan.indicator).zip(&scan.det) {
        grid.row(&[num(*k), num(*ind), num(det.re), num(det.im)]);
    }
    let mut roots = Csv::new("roots.csv", "k,multiplicity,residual");
    for r in &scan.roots {
        roots.row(&[num(r.k), r.multiplicity.to_string(), num(r.residual)]);
    }
    let summary = format!("{} roots: {:?}", scan.roots.len(), scan.roots.iter().map(|r| r.k).collect::<Vec<_>>());
    Ok((true, summary, vec![grid, roots]))
}

fn root_from_file(path: &str, index: usize) -> Result<f64> {
    let field = "eigenfunction.roots_file";
    let text = std::fs::read_to_string(path).map_err(|e| config_error(field, format!("cannot read {path}: {e}")))?;
    let line = text
        .lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .nth(index)
        .ok_or_else(|| config_error(field, format!("no root at index {index} in {path}")))?;
    line.split(',')
        .next()
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| config_error(field, format!("malformed row `{line}`")))
}

fn cmd_qg_eigenfunction(ctx: &Context) -> Result<Produced> {
    let tol = ctx.tol.unwrap_or(CONDITION_TOL);
    let q = ctx.config.quantum_graph_params(&ctx.graph)?;
    let spec =
        ctx.config.eigenfunction.as_ref().ok_or_else(|| config_error("eigenfunction", "section is required"))?;
    let k = match (spec.k, &spec.roots_file) {
        (Some(k), _) => k,
        (None, Some(path)) => root_from_file(path, spec.root_index)?,
        (None, None) => return Err(config_error("eigenfunction", "give `k` or `roots_file`")),
    };
    let v = least_singular_state(&ctx.space, &q, k).map_err(|e| config_error("eigenfunction.k", e))?;
    let samples = spec.samples.unwrap_or(DEFAULT_SAMPLES);
    let e = wavefunction(&ctx.space, &q, &v, samples).map_err(|e| config_error("eigenfunction.samples", e))?;
    let report = verify_boundary_conditions(&ctx.space, &q, &v, &e);
    let prop = proposition_equivalences(&ctx.space, &q, &v)?;

    let mut psi = Csv::new("eigenfunction.csv", "arc_origin,arc_terminus,x,re,im");
    for arc in &e.arcs {
        for (x, z) in arc.x.iter().zip(&arc.values) {
            psi.row(&[arc.arc.0.to_string(), arc.arc.1.to_string(), num(*x), num(z.re), num(z.im)]);
        }
    }
    let mut boundary = Csv::new("boundary.csv", "vertex,cond,residual");
    for r in &report.vertices {
        for (cond, val) in [("I", r.symmetry), ("II", r.continuity), ("III", r.flux)] {
            boundary.row(&[r.vertex.to_string(), cond.into(), num(val)]);
        }
    }
    let mut proposition = Csv::new("proposition.csv", "statement,residual");
    let names = ["A[H]a=a", "G[H+]a=a", "A[H+]b=b", "G[H]b=b"];
    for (name, r) in names.iter().zip(prop.residuals) {
        proposition.row(&[name.to_string(), num(r)]);
    }
    let is_root = v.residual <= ROOT_TOL;
    let passed = is_root && report.max_residual() <= tol;
    let summary = format!(
        "k = {k}: indicator {:.3e}{}, max vertex residual {:.3e}",
        v.residual,
        if is_root { "" } else { " (not a root)" },
        report.max_residual()
    );
    Ok((passed, summary, vec![psi, boundary, proposition]))
}

fn cmd_partitions(ctx: &Context) -> Result<Produced> {
    let spec = ctx.config.partitions.as_ref();
    let count = partition_count(&ctx.graph);
    let mut csv = Csv::new("partitions.csv", "partition,arc_origin,arc_terminus,successor");
    if !spec.is_some_and(|s| s.count_only) {
        let cap = spec.and_then(|s| s.cap).unwrap_or(DEFAULT_PARTITION_CAP);
        let all = enumerate_partitions(&ctx.space, cap).map_err(|e| config_error("partitions.cap", e))?;
        for (n, p) in all.iter().enumerate() {
            for (idx, &(i, j)) in ctx.space.arcs().iter().enumerate() {
                csv.row(&[n.to_string(), i.to_string(), j.to_string(), p.successors()[idx].to_string()]);
            }
        }
    }
    let summary = match count {
        Some(c) => format!("{c} partitions"),
        None => "partition count overflows u128".to_string(),
    };
    Ok((true, summary, vec![csv]))
}

fn thread_count() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(config_error(THREADS_ENV, format!("`{s}` is not a positive integer"))),
        },
    }
}

/// Runs a parsed command line and maps the result to an exit code.
pub fn execute(cli: &Cli) -> ExitCode {
    let result = thread_count().and_then(|threads| match threads {
        None => run(cli),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| config_error(THREADS_ENV, e))?
            .install(|| run(cli)),
    });
    match result {
        Ok(outcome) => {
            // stdout may already be closed by a pipe
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{}", outcome.summary.trim_end());
            for f in &outcome.files {
                let _ = writeln!(out, "wrote {}", f.display());
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

pub fn main() -> ExitCode {
    execute(&Cli::parse())
}
