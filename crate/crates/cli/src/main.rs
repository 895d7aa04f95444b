use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use imw_core::cache::Cache;
use imw_core::codes::{catalog_code, projector_from_spec, CodeSpec};
use imw_core::enumerators::{code_depth, detection_flags, enumerate_code, EnumeratorData};
use imw_core::lp::{
    build_lp, detected_below_depth, detected_indices, scan_max_d, scan_max_k,
    solve_with_uniqueness, LpResult, Verdict,
};
use imw_core::macwilliams::{
    macwilliams_from_sectors, verify_first_row, verify_weighted_orthogonality,
    MacWilliamsMatrix,
};
use imw_core::reproduce::{run_all, run_criterion, Context};
use imw_core::sdp::{build_sdp, solve_feasibility, DetectionMode, SdpResult, SdpVerdict};
use imw_core::{Error, IrrepLabel, RepSpec, Result};

#[derive(Parser, Debug)]
#[command(name = "imw", version, about = "Intrinsic MacWilliams transforms and LP/SDP code bounds")]
struct Cli {
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Recompute sector decompositions instead of reading the cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Cache directory (defaults to $IMW_CACHE_DIR or the system temp dir).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the MacWilliams matrix of a representation.
    Transform {
        #[command(flatten)]
        rep: RepArgs,
        /// Block transform on (sector, α, β) entries; implied when a
        /// sector has multiplicity.
        #[arg(long)]
        block: bool,
    },
    /// Enumerators, depth and detection flags of a code.
    Enumerate {
        #[command(flatten)]
        code: CodeArgs,
    },
    /// LP or SDP feasibility for one (K, detected set).
    Bound {
        #[command(flatten)]
        rep: RepArgs,
        #[arg(long = "K", value_name = "K")]
        k: usize,
        #[command(flatten)]
        det: DetectArgs,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Largest feasible K up to a limit.
    ScanK {
        #[command(flatten)]
        rep: RepArgs,
        #[command(flatten)]
        det: DetectArgs,
        #[arg(long = "K-max", value_name = "K", default_value_t = 0)]
        k_max: usize,
    },
    /// Largest feasible target depth d for a fixed K.
    ScanD {
        #[command(flatten)]
        rep: RepArgs,
        #[arg(long = "K", value_name = "K")]
        k: usize,
    },
    /// Run the reference checks.
    Reproduce {
        /// Include the SU(3) (2,2) SDP run.
        #[arg(long)]
        include_slow: bool,
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct RepArgs {
    /// Spin irrep, e.g. `2j=4`.
    #[arg(long, value_name = "2j=N")]
    su2: Option<String>,
    /// Symmetric power, e.g. `q=3 n=3`.
    #[arg(long, num_args = 2, value_names = ["q=Q", "n=N"])]
    sym: Option<Vec<String>>,
    /// Highest-weight irrep, e.g. `su3:2,2`.
    #[arg(long, value_name = "LABEL")]
    hw: Option<String>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct CodeArgs {
    /// Built-in code name.
    #[arg(long)]
    catalog: Option<String>,
    /// Code file in the CodeSpec JSON schema.
    #[arg(long)]
    code: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct DetectArgs {
    /// Detect every sector of depth below d.
    #[arg(long)]
    d: Option<usize>,
    /// Detected sector labels, e.g. `1,2` or `(1,1)`.
    #[arg(long, value_delimiter = ';')]
    detected: Option<Vec<String>>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Engine {
    Lp,
    Sdp,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Mode {
    Strict,
    Depth,
}

impl From<Mode> for DetectionMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Strict => DetectionMode::Strict,
            Mode::Depth => DetectionMode::Depth,
        }
    }
}

#[derive(Args, Debug)]
struct EngineArgs {
    #[arg(long, value_enum, default_value_t = Engine::Lp)]
    engine: Engine,
    #[arg(long, value_enum, default_value_t = Mode::Strict)]
    mode: Mode,
    /// SDP feasibility tolerance.
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
}

fn key_value(s: &str, key: &str) -> Result<usize> {
    s.strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .unwrap_or(s)
        .parse()
        .map_err(|_| Error::Parse(format!("expected {key}=<integer>, got `{s}`")))
}

impl RepArgs {
    fn spec(&self) -> Result<RepSpec> {
        if let Some(s) = &self.su2 {
            return Ok(RepSpec::Su2 {
                two_j: key_value(s, "2j")? as u32,
            });
        }
        if let Some(v) = &self.sym {
            let (mut q, mut n) = (None, None);
            for item in v {
                if item.starts_with("q=") {
                    q = Some(key_value(item, "q")?);
                } else if item.starts_with("n=") {
                    n = Some(key_value(item, "n")?);
                } else {
                    return Err(Error::Parse(format!("unknown --sym field `{item}`")));
                }
            }
            return match (q, n) {
                (Some(q), Some(n)) => Ok(RepSpec::Sym { q, n }),
                _ => Err(Error::Parse("--sym needs q=<Q> n=<N>".into())),
            };
        }
        let label: IrrepLabel = self.hw.as_deref().unwrap_or_default().parse()?;
        Ok(RepSpec::HighestWeight { label })
    }
}

struct Env {
    cache: Cache,
    json: bool,
}

impl Env {
    fn scalar(&self, spec: &RepSpec) -> Result<MacWilliamsMatrix> {
        macwilliams_from_sectors(&self.cache.decomposition(&spec.build()?)?)
    }

    fn emit<T: Serialize>(&self, value: &T, table: impl FnOnce() -> String) -> Result<()> {
        if self.json {
            println!("{}", serde_json::to_string_pretty(value)?);
        } else {
            print!("{}", table());
        }
        Ok(())
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn names(labels: &[IrrepLabel]) -> Vec<String> {
    labels.iter().map(ToString::to_string).collect()
}

fn sector_header(labels: &[String], depths: &[usize]) -> String {
    let cells: Vec<String> = labels
        .iter()
        .zip(depths)
        .map(|(l, d)| format!("{l}[d={d}]"))
        .collect();
    format!("sectors: {}\n", cells.join("  "))
}

fn transform(env: &Env, spec: &RepSpec, block: bool) -> Result<bool> {
    let dec = env.cache.decomposition(&spec.build()?)?;
    if block || !dec.is_multiplicity_free() {
        let bm = env.cache.block_macwilliams(&dec)?;
        let ok = bm.verify_weighted_orthogonality();
        env.emit(&bm, || {
            let labels = names(&bm.labels);
            let idx: Vec<String> = bm
                .index
                .iter()
                .map(|i| format!("{}:{}{}", labels[i.sector], i.alpha, i.beta))
                .collect();
            format!(
                "{spec}\n{}index: {}\nM =\n{}\nweighted orthogonality: {}\ncross-sector nonzeros: {}\n",
                sector_header(&labels, &bm.depths),
                idx.join("  "),
                bm.m,
                if ok { "verified" } else { "FAILED" },
                bm.cross_sector_nonzeros()
            )
        })?;
        return Ok(ok);
    }
    let m = macwilliams_from_sectors(&dec)?;
    let ok = verify_weighted_orthogonality(&m) && verify_first_row(&m);
    env.emit(&m, || {
        format!(
            "{spec}\n{}M =\n{}\nD = diag({})\nM D M^T = D: {}\nfirst row 1/N: {}\n",
            sector_header(&names(&m.labels), &m.depths),
            m.m,
            join(&m.dims),
            if verify_weighted_orthogonality(&m) { "verified" } else { "FAILED" },
            if verify_first_row(&m) { "verified" } else { "FAILED" },
        )
    })?;
    Ok(ok)
}

#[derive(Serialize)]
struct EnumerateReport {
    name: String,
    k: usize,
    depth: usize,
    detected: Vec<bool>,
    #[serde(flatten)]
    data: EnumeratorData,
}

fn enumerate(env: &Env, code: &CodeArgs) -> Result<bool> {
    let spec = match (&code.catalog, &code.code) {
        (Some(name), _) => catalog_code(name)?,
        (_, Some(path)) => CodeSpec::from_json(&std::fs::read_to_string(path)?)?,
        _ => unreachable!("clap enforces one source"),
    };
    let rep = spec.ambient.build()?;
    let dec = env.cache.decomposition(&rep)?;
    let p = projector_from_spec(&spec, &rep)?;
    let data = enumerate_code(&p, &dec)?;
    let report = EnumerateReport {
        name: spec.name.clone(),
        k: spec.k(),
        depth: code_depth(&p, &dec)?,
        detected: detection_flags(&p, &dec)?,
        data,
    };
    env.emit(&report, || {
        let mut out = format!(
            "{} in {} (K = {}), depth {}\n",
            report.name, spec.ambient, report.k, report.depth
        );
        match (report.data.a_tilde(), report.data.b_tilde()) {
            (Some(a), Some(b)) => {
                out += &format!("A~ = ({})\nB~ = ({})\n", join(&a), join(&b));
            }
            _ => {
                for s in &report.data.sectors {
                    out += &format!("{}: A =\n{}\nB =\n{}\n", s.sector_label, s.a, s.b);
                }
            }
        }
        let flags: Vec<String> = report
            .data
            .sectors
            .iter()
            .zip(&report.detected)
            .map(|(s, d)| format!("{}:{}", s.sector_label, if *d { "yes" } else { "no" }))
            .collect();
        out += &format!("detected: {}\n", flags.join("  "));
        out
    })?;
    Ok(true)
}

fn detected_set(labels: &[String], depths: &[usize], det: &DetectArgs) -> Result<Vec<usize>> {
    match (&det.d, &det.detected) {
        (Some(d), _) => Ok((1..labels.len()).filter(|&i| depths[i] < *d).collect()),
        (_, Some(ls)) => {
            let mut out = Vec::new();
            for l in ls.iter().flat_map(|s| split_labels(s)) {
                let i = labels
                    .iter()
                    .position(|x| *x == l)
                    .ok_or_else(|| Error::Parse(format!("unknown sector `{l}`")))?;
                if i != 0 {
                    out.push(i);
                }
            }
            Ok(out)
        }
        _ => unreachable!("clap enforces one detection argument"),
    }
}

/// Splits `1,2` into spins but keeps tuples like `(1,1)` whole.
fn split_labels(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0;
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if c == ',' && depth == 0 {
            out.push(std::mem::take(&mut cur).trim().to_string());
        } else {
            cur.push(c);
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

fn lp_table(r: &LpResult, labels: &[String]) -> String {
    let mut out = format!("K = {}, detected {{{}}}\n", r.k, r.detected.join(", "));
    match &r.verdict {
        Verdict::Feasible { point } => {
            out += "Feasible\n";
            if let Some(u) = r.unique {
                out += &format!("unique: {u}\n");
            }
            for (l, x) in labels.iter().zip(point) {
                out += &format!("  A~[{l}] = {x}\n");
            }
        }
        Verdict::Infeasible {
            eq_multipliers,
            ge_multipliers,
        } => {
            out += "Infeasible (Farkas certificate verified)\n";
            out += &format!("  y  = ({})\n  mu = ({})\n", join(eq_multipliers), join(ge_multipliers));
        }
    }
    out
}

fn sdp_table(r: &SdpResult) -> String {
    let mut out = format!("K = {}, mode {:?}, tol {:e}\n", r.k, r.mode, r.tol);
    match &r.verdict {
        SdpVerdict::ApproxFeasible {
            max_residual,
            min_eigenvalue,
            ..
        } => {
            out += &format!(
                "ApproxFeasible (min eigenvalue {min_eigenvalue:.3e}, residual {max_residual:.1e})\n"
            );
        }
        SdpVerdict::LikelyInfeasible { infeasibility } => {
            out += &format!("LikelyInfeasible (margin {infeasibility:.4e})\n");
        }
        SdpVerdict::Infeasible => out += "Infeasible (linear constraints inconsistent)\n",
    }
    out += &format!("iterations {}, converged {}\n", r.iterations, r.converged);
    out
}

fn bound(env: &Env, spec: &RepSpec, k: usize, det: &DetectArgs, eng: &EngineArgs) -> Result<bool> {
    let dec = env.cache.decomposition(&spec.build()?)?;
    match eng.engine {
        Engine::Lp => {
            let m = macwilliams_from_sectors(&dec)?;
            let labels = names(&m.labels);
            let detected = detected_set(&labels, &m.depths, det)?;
            let r = solve_with_uniqueness(&build_lp(&m, k, &detected)?)?;
            env.emit(&r, || lp_table(&r, &labels))?;
            Ok(true)
        }
        Engine::Sdp => {
            let bm = env.cache.block_macwilliams(&dec)?;
            let labels = names(&bm.labels);
            let detected = detected_set(&labels, &bm.depths, det)?;
            let p = build_sdp(&bm, k, &detected, eng.mode.into())?;
            let r = solve_feasibility(&p, eng.tol)?;
            env.emit(&r, || sdp_table(&r))?;
            Ok(r.converged)
        }
    }
}

#[derive(Serialize)]
struct Scan {
    rep: String,
    k: Option<usize>,
    detected: Option<Vec<String>>,
    max_k: Option<usize>,
    max_d: Option<usize>,
}

fn scan_k(env: &Env, spec: &RepSpec, det: &DetectArgs, k_max: usize) -> Result<bool> {
    let m = env.scalar(spec)?;
    let detected = match (&det.d, &det.detected) {
        (Some(d), _) => detected_below_depth(&m, *d),
        (_, Some(ls)) => {
            let flat: Vec<String> = ls.iter().flat_map(|s| split_labels(s)).collect();
            detected_indices(&m, &flat)?
        }
        _ => unreachable!(),
    };
    let top = if k_max == 0 { m.rep_dim() } else { k_max };
    let best = scan_max_k(&m, &detected, 1..=top)?;
    let scan = Scan {
        rep: spec.to_string(),
        k: None,
        detected: Some(detected.iter().map(|&i| m.labels[i].to_string()).collect()),
        max_k: Some(best),
        max_d: None,
    };
    env.emit(&scan, || format!("{spec}: largest feasible K = {best}\n"))?;
    Ok(true)
}

fn scan_d(env: &Env, spec: &RepSpec, k: usize) -> Result<bool> {
    let m = env.scalar(spec)?;
    let best = scan_max_d(&m, k)?;
    let scan = Scan {
        rep: spec.to_string(),
        k: Some(k),
        detected: None,
        max_k: None,
        max_d: Some(best),
    };
    env.emit(&scan, || format!("{spec}, K = {k}: largest feasible d = {best}\n"))?;
    Ok(true)
}

fn reproduce(env: &Env, include_slow: bool, only: &[u32], seed: u64) -> Result<bool> {
    let ctx = Context::new(env.cache.clone(), seed);
    let reports = if only.is_empty() {
        run_all(&ctx, include_slow)
    } else {
        only.iter().map(|&i| run_criterion(i, &ctx)).collect()
    };
    let ok = reports.iter().all(|r| r.passed);
    env.emit(&reports, || {
        let mut out: String = reports.iter().map(|r| format!("{r}\n")).collect();
        let passed = reports.iter().filter(|r| r.passed).count();
        out += &format!("{passed} of {} passed\n", reports.len());
        out
    })?;
    Ok(ok)
}

fn run(cli: &Cli) -> Result<bool> {
    let cache = if cli.no_cache {
        Cache::disabled()
    } else if let Some(dir) = &cli.cache_dir {
        Cache::at(dir)
    } else {
        Cache::from_env()
    };
    let env = Env {
        cache,
        json: cli.json,
    };
    match &cli.command {
        Command::Transform { rep, block } => transform(&env, &rep.spec()?, *block),
        Command::Enumerate { code } => enumerate(&env, code),
        Command::Bound { rep, k, det, engine } => bound(&env, &rep.spec()?, *k, det, engine),
        Command::ScanK { rep, det, k_max } => scan_k(&env, &rep.spec()?, det, *k_max),
        Command::ScanD { rep, k } => scan_d(&env, &rep.spec()?, *k),
        Command::Reproduce {
            include_slow,
            only,
            seed,
        } => reproduce(&env, *include_slow, only, *seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
