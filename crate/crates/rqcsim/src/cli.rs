//! The `rqcsim` command line.
//!
//! Every subcommand writes JSON-lines records (or CSV with `--format csv`) to
//! stdout or `-o FILE`. Failures print one JSON object
//! `{"error": {"kind": ..., "message": ...}}` on stderr and exit nonzero.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rqcsim_core::amplitude::{prepare_amplitude, AmplitudeOptions, CutMode};
use rqcsim_core::circuit::lattice::{self, LatticeKind};
use rqcsim_core::circuit::rqc::{generate_rqc_with, GateFamily, RqcOptions};
use rqcsim_core::circuit::{Circuit, CircuitGraph};
use rqcsim_core::network::{build_overlap_network, plan_cuts, slice_network, CutSpec};
use rqcsim_core::oracle::amplitude_oracle;
use rqcsim_core::path::{find_optimal_path, PathOptions};
use rqcsim_core::tns::two_sided_evolve;
use rqcsim_core::workload::{estimate_workload, ErrorModel};
use rqcsim_core::{Bitstring, Error, DEFAULT_SVD_TOLERANCE};
use serde_json::{json, Map, Value};

use crate::config;
use crate::driver::{self, AmplitudeRecord};
use crate::format::{parse_circuit, serialize_circuit, FormatError};
use crate::pathfile::parse_path;

#[derive(Debug, Parser)]
#[command(
    name = "rqcsim",
    version,
    about = "Single amplitudes of random quantum circuits via tensor network states"
)]
#[command(args_override_self = true)]
pub struct Cli {
    /// TOML file of preset flags (top level for all commands, tables per command).
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true, env = "RQCSIM_WORKERS")]
    pub workers: Option<usize>,
    #[arg(short = 'o', long = "output", global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random circuit file.
    Gen(GenArgs),
    /// Compute amplitudes <out|U|in>.
    Amplitude(AmplitudeArgs),
    /// Compare amplitudes of random bitstrings against the state-vector
    /// oracle (`--oracle`) or across split cycles.
    Verify(VerifyArgs),
    /// Find a contraction path for one amplitude network.
    Path(PathArgs),
    /// Fidelity and required sample count under a gate error model.
    EstimateWorkload(WorkloadArgs),
    /// Time amplitude computations.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LatticeArg {
    SycamoreLike,
    Square,
}

#[derive(Debug, Args)]
pub struct LatticeSpec {
    #[arg(long, value_enum, default_value_t = LatticeArg::SycamoreLike)]
    pub lattice: LatticeArg,
    /// Qubit count (sycamore-like: 53, 54, 104 or a multiple of 6; square: a perfect square).
    #[arg(long)]
    pub size: Option<usize>,
    #[arg(long, requires = "cols")]
    pub rows: Option<usize>,
    #[arg(long, requires = "rows")]
    pub cols: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RqcSpec {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// fsim, cz or iswap.
    #[arg(long, default_value = "fsim")]
    pub gate: String,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    pub theta: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_6)]
    pub phi: f64,
    /// Coupler-layer activation sequence, letters (ABCDCDAB) or indexes (0,1,2).
    #[arg(long)]
    pub pattern: Option<String>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct GenArgs {
    #[command(flatten)]
    pub lattice: LatticeSpec,
    #[arg(long)]
    pub depth: usize,
    #[command(flatten)]
    pub rqc: RqcSpec,
}

#[derive(Debug, Args)]
pub struct ContractionArgs {
    /// `auto`, `none`, or comma-separated edge ids.
    #[arg(long, default_value = "none")]
    pub cuts: String,
    /// JSON file with {"cut_edges": [...]}; overrides --cuts.
    #[arg(long, value_name = "FILE")]
    pub cuts_file: Option<PathBuf>,
    /// Rank cap for path search and automatic cuts.
    #[arg(long)]
    pub max_rank: Option<usize>,
    /// Cycles before this index evolve the input state (default depth/2).
    #[arg(long)]
    pub split_cycle: Option<usize>,
    /// Relative singular-value threshold.
    #[arg(long, default_value_t = DEFAULT_SVD_TOLERANCE)]
    pub tolerance: f64,
    /// Ceiling on search states per path search.
    #[arg(long, default_value_t = 4_000_000)]
    pub budget: usize,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct AmplitudeArgs {
    #[arg(short = 'c', long)]
    pub circuit: PathBuf,
    /// Input bitstring, character j is qubit j (default all zeros).
    #[arg(long = "in")]
    pub bits_in: Option<String>,
    /// Output bitstrings; repeat or separate with commas.
    #[arg(long = "out", required = true, value_delimiter = ',')]
    pub bits_out: Vec<String>,
    #[command(flatten)]
    pub contraction: ContractionArgs,
    /// Contraction order from a path file instead of searching.
    #[arg(long, value_name = "FILE")]
    pub path: Option<PathBuf>,
    /// Emit wall_time_ms as null so output is byte-stable.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct VerifyArgs {
    #[arg(short = 'c', long)]
    pub circuit: PathBuf,
    #[arg(long = "in")]
    pub bits_in: Option<String>,
    #[arg(long, default_value_t = 10)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Compare against the state-vector oracle; otherwise compare split
    /// cycles 0, depth/2 and depth against each other.
    #[arg(long)]
    pub oracle: bool,
    /// Largest accepted |difference|.
    #[arg(long, default_value_t = 1e-10)]
    pub threshold: f64,
    #[command(flatten)]
    pub contraction: ContractionArgs,
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct PathArgs {
    #[arg(short = 'c', long)]
    pub circuit: PathBuf,
    #[arg(long = "in")]
    pub bits_in: Option<String>,
    #[arg(long = "out")]
    pub bits_out: Option<String>,
    #[command(flatten)]
    pub contraction: ContractionArgs,
    /// Exact search: all seeds, no rank cap, no connectivity rule.
    #[arg(long)]
    pub unpruned: bool,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct WorkloadArgs {
    /// Circuit file; otherwise circuits are generated from the lattice flags.
    #[arg(short = 'c', long)]
    pub circuit: Option<PathBuf>,
    #[command(flatten)]
    pub lattice: LatticeSpec,
    /// Depths to generate: list (5,6,7), range (5..12) or inclusive range (5..=11).
    #[arg(long, default_value = "5..=11")]
    pub depths: String,
    #[command(flatten)]
    pub rqc: RqcSpec,
    #[arg(long, default_value_t = ErrorModel::SYCAMORE.e1)]
    pub e1: f64,
    #[arg(long, default_value_t = ErrorModel::SYCAMORE.e2)]
    pub e2: f64,
    #[arg(long, default_value_t = ErrorModel::SYCAMORE.eq)]
    pub eq: f64,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct BenchArgs {
    #[arg(short = 'c', long)]
    pub circuit: PathBuf,
    #[arg(long = "in")]
    pub bits_in: Option<String>,
    #[arg(long, default_value_t = 3)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub contraction: ContractionArgs,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{file}: {source}")]
    Format { file: String, source: FormatError },
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Config(#[from] config::ConfigError),
    #[error("{0}")]
    Verification(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Format { .. } => "format",
            CliError::Core(e) => match e {
                Error::Tensor(_) => "tensor",
                Error::Circuit(_) => "circuit",
                Error::Tns(_) => "tns",
                Error::Network(_) => "network",
                Error::Path(_) => "path",
                Error::Oracle(_) => "oracle",
                Error::Workload(_) => "workload",
            },
            CliError::Config(_) => "config",
            CliError::Verification(_) => "verification_failed",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn load_circuit(path: &Path) -> Result<Circuit, CliError> {
    parse_circuit(&read_file(path)?).map_err(|source| CliError::Format {
        file: path.display().to_string(),
        source,
    })
}

fn bits(text: Option<&str>, n: usize) -> Result<Bitstring, CliError> {
    let b = match text {
        None => Bitstring::zeros(n),
        Some(t) => t
            .parse::<Bitstring>()
            .map_err(|e| usage(format!("bitstring '{t}': {e}")))?,
    };
    if b.len() != n {
        return Err(usage(format!(
            "bitstring has {} bits, circuit has {n} qubits",
            b.len()
        )));
    }
    Ok(b)
}

fn graph_for(spec: &LatticeSpec) -> Result<CircuitGraph, CliError> {
    let kind = match spec.lattice {
        LatticeArg::SycamoreLike => LatticeKind::SycamoreLike,
        LatticeArg::Square => LatticeKind::Square,
    };
    let layout = match (spec.rows, spec.cols, spec.size) {
        (Some(r), Some(c), _) => lattice::layout(kind, r, c),
        (_, _, Some(n)) => {
            match kind {
                LatticeKind::SycamoreLike => lattice::sycamore_of_size(n),
                LatticeKind::Square => {
                    let side = (1..=n).find(|s| s * s >= n).unwrap_or(0);
                    if side * side != n {
                        return Err(usage(format!("square lattice size {n} is not a perfect square; give --rows and --cols")));
                    }
                    lattice::layout(kind, side, side)
                }
            }
        }
        _ => return Err(usage("give --size or --rows and --cols")),
    };
    Ok(layout.map_err(Error::from)?.graph)
}

fn rqc_options(spec: &RqcSpec) -> Result<RqcOptions, CliError> {
    let family: GateFamily = spec.gate.parse().map_err(Error::Circuit)?;
    let pattern = match &spec.pattern {
        None => None,
        Some(p) if p.chars().all(|c| c.is_ascii_uppercase()) => {
            Some(p.bytes().map(|b| (b - b'A') as usize).collect())
        }
        Some(p) => Some(
            p.split(',')
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|_| usage(format!("bad pattern entry '{s}'")))
                })
                .collect::<Result<Vec<_>, _>>()?,
        ),
    };
    Ok(RqcOptions {
        family,
        fsim_theta: spec.theta,
        fsim_phi: spec.phi,
        pattern,
        ..RqcOptions::default()
    })
}

fn parse_depths(text: &str) -> Result<Vec<usize>, CliError> {
    let num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| usage(format!("bad depth '{s}'")))
    };
    if let Some((a, b)) = text.split_once("..=") {
        Ok((num(a)?..=num(b)?).collect())
    } else if let Some((a, b)) = text.split_once("..") {
        Ok((num(a)?..num(b)?).collect())
    } else {
        text.split(',').map(num).collect()
    }
}

fn amplitude_options(c: &ContractionArgs) -> Result<AmplitudeOptions, CliError> {
    let cuts = if let Some(file) = &c.cuts_file {
        let v: Value = serde_json::from_str(&read_file(file)?).map_err(|e| CliError::Format {
            file: file.display().to_string(),
            source: e.into(),
        })?;
        let ids = v
            .get("cut_edges")
            .and_then(Value::as_array)
            .and_then(|a| {
                a.iter()
                    .map(|x| x.as_u64().map(|x| x as usize))
                    .collect::<Option<Vec<_>>>()
            })
            .ok_or_else(|| CliError::Format {
                file: file.display().to_string(),
                source: FormatError::Invalid {
                    at: "cut_edges".into(),
                    message: "expected a list of edge ids".into(),
                },
            })?;
        CutMode::Explicit(ids)
    } else {
        match c.cuts.trim() {
            "auto" => CutMode::Auto,
            "none" | "" => CutMode::None,
            list => CutMode::Explicit(
                list.split(',')
                    .map(|s| {
                        s.trim().parse::<usize>().map_err(|_| {
                            usage(format!("--cuts: '{s}' is not auto, none or an edge id"))
                        })
                    })
                    .collect::<Result<_, _>>()?,
            ),
        }
    };
    Ok(AmplitudeOptions {
        split_cycle: c.split_cycle,
        cuts,
        max_rank: c.max_rank,
        tolerance: c.tolerance,
        state_budget: Some(c.budget),
        path: None,
    })
}

fn c64_json(z: rqcsim_core::C64) -> Value {
    json!([z.re, z.im])
}

fn amplitude_json(r: &AmplitudeRecord, timing: bool) -> Value {
    let s = &r.result.stats;
    json!({
        "in": r.bits_in.to_string(),
        "out": r.bits_out.to_string(),
        "amplitude": c64_json(r.result.amplitude),
        "peak_rank": s.peak_rank,
        "multiplies": s.multiplies.to_string(),
        "slice_count": s.slice_count.to_string(),
        "cut_edges": s.cut_edges,
        "path": s.path,
        "path_score": s.path_score.to_string(),
        "max_rank": s.max_rank,
        "split_cycle": s.split_cycle,
        "max_bond": s.max_bond,
        "wall_time_ms": if timing { json!(r.wall_time_ms) } else { Value::Null },
    })
}

/// Writes records as JSON lines or CSV; a CSV header is emitted whenever
/// the field set changes.
pub struct RecordWriter<'a> {
    out: &'a mut dyn Write,
    format: OutputFormat,
    header: Option<Vec<String>>,
}

impl<'a> RecordWriter<'a> {
    pub fn new(out: &'a mut dyn Write, format: OutputFormat) -> Self {
        RecordWriter {
            out,
            format,
            header: None,
        }
    }

    pub fn write(&mut self, record: &Value) -> io::Result<()> {
        match self.format {
            OutputFormat::Json => writeln!(self.out, "{record}"),
            OutputFormat::Csv => {
                let empty = Map::new();
                let obj = record.as_object().unwrap_or(&empty);
                let keys: Vec<String> = obj.keys().cloned().collect();
                if self.header.as_ref() != Some(&keys) {
                    writeln!(self.out, "{}", keys.join(","))?;
                    self.header = Some(keys);
                }
                let cells: Vec<String> = obj
                    .values()
                    .map(|v| match v {
                        Value::String(s) => csv_cell(s),
                        Value::Null => String::new(),
                        Value::Array(_) | Value::Object(_) => csv_cell(&v.to_string()),
                        other => other.to_string(),
                    })
                    .collect();
                writeln!(self.out, "{}", cells.join(","))
            }
        }
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn random_bits(rng: &mut ChaCha8Rng, n: usize) -> Bitstring {
    Bitstring::from_bits((0..n).map(|_| rng.gen_range(0..2u8)).collect()).expect("bits are 0 or 1")
}

fn run_gen(args: &GenArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let graph = graph_for(&args.lattice)?;
    let circuit = generate_rqc_with(&graph, args.depth, args.rqc.seed, &rqc_options(&args.rqc)?)
        .map_err(Error::from)?;
    out.write_all(serialize_circuit(&circuit).as_bytes())
        .map_err(io_err)?;
    Ok(())
}

fn io_err(e: io::Error) -> CliError {
    CliError::Io {
        path: "output".into(),
        message: e.to_string(),
    }
}

fn run_amplitude(
    args: &AmplitudeArgs,
    workers: Option<usize>,
    w: &mut RecordWriter,
) -> Result<(), CliError> {
    let circuit = load_circuit(&args.circuit)?;
    let n = circuit.num_qubits();
    let bits_in = bits(args.bits_in.as_deref(), n)?;
    let outs = args
        .bits_out
        .iter()
        .map(|b| bits(Some(b), n))
        .collect::<Result<Vec<_>, _>>()?;
    let mut opts = amplitude_options(&args.contraction)?;
    if let Some(p) = &args.path {
        let text = read_file(p)?;
        opts.path = Some(
            parse_path(&text)
                .map_err(|source| CliError::Format {
                    file: p.display().to_string(),
                    source,
                })?
                .path,
        );
    }
    let pool = driver::thread_pool(workers).map_err(|e| usage(e.to_string()))?;
    for r in driver::amplitudes(&pool, &circuit, &bits_in, &outs, &opts) {
        w.write(&amplitude_json(&r?, !args.no_timing))
            .map_err(io_err)?;
    }
    Ok(())
}

fn run_verify(
    args: &VerifyArgs,
    workers: Option<usize>,
    w: &mut RecordWriter,
) -> Result<(), CliError> {
    let circuit = load_circuit(&args.circuit)?;
    let n = circuit.num_qubits();
    let bits_in = bits(args.bits_in.as_deref(), n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let outs: Vec<Bitstring> = (0..args.samples)
        .map(|_| random_bits(&mut rng, n))
        .collect();
    let opts = amplitude_options(&args.contraction)?;
    let pool = driver::thread_pool(workers).map_err(|e| usage(e.to_string()))?;
    let depth = circuit.depth();
    let mut worst: f64 = 0.0;
    for (out, r) in outs
        .iter()
        .zip(driver::amplitudes(&pool, &circuit, &bits_in, &outs, &opts))
    {
        let r = r?;
        let mut rec = amplitude_json(&r, !args.no_timing);
        let diff = if args.oracle {
            let want = amplitude_oracle(&circuit, &bits_in, out).map_err(Error::from)?;
            rec["reference"] = c64_json(want);
            (r.result.amplitude - want).norm()
        } else {
            let mut d: f64 = 0.0;
            let mut others = Vec::new();
            for split in [0, depth / 2, depth] {
                let o = AmplitudeOptions {
                    split_cycle: Some(split),
                    ..opts.clone()
                };
                let a = driver::amplitude_one(&circuit, &bits_in, out, &o)?
                    .result
                    .amplitude;
                d = d.max((a - r.result.amplitude).norm());
                others.push(json!({"split_cycle": split, "amplitude": c64_json(a)}));
            }
            rec["reference"] = Value::Array(others);
            d
        };
        rec["abs_diff"] = json!(diff);
        worst = worst.max(diff);
        w.write(&rec).map_err(io_err)?;
    }
    let pass = worst <= args.threshold;
    w.write(&json!({
        "samples": args.samples,
        "reference": if args.oracle { "oracle" } else { "split_cycles" },
        "max_abs_diff": worst,
        "threshold": args.threshold,
        "pass": pass,
    }))
    .map_err(io_err)?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "max |difference| {worst:e} exceeds {:e}",
            args.threshold
        )))
    }
}

fn run_path(args: &PathArgs, w: &mut RecordWriter) -> Result<(), CliError> {
    let circuit = load_circuit(&args.circuit)?;
    let n = circuit.num_qubits();
    let bits_in = bits(args.bits_in.as_deref(), n)?;
    let bits_out = bits(args.bits_out.as_deref(), n)?;
    let opts = amplitude_options(&args.contraction)?;
    let record = if args.unpruned {
        let split = opts.split_cycle.unwrap_or(circuit.depth() / 2);
        let fused = rqcsim_core::circuit::fuse_single_qubit_gates(&circuit);
        let ts = two_sided_evolve(&fused, &bits_in, &bits_out, split, opts.tolerance)
            .map_err(Error::from)?;
        let net = build_overlap_network(&ts.phi, &ts.psi).map_err(Error::from)?;
        let spec = match &opts.cuts {
            CutMode::Explicit(ids) => CutSpec::Explicit(ids.clone()),
            CutMode::None => CutSpec::None,
            CutMode::Auto => return Err(usage("--unpruned cannot be combined with --cuts auto")),
        };
        let plan = plan_cuts(&net, &spec).map_err(Error::from)?;
        let pn = slice_network(&net, &plan, 0)
            .map_err(Error::from)?
            .path_network()
            .map_err(Error::from)?;
        let search = PathOptions {
            state_budget: Some(args.contraction.budget),
            ..PathOptions::unpruned()
        };
        let r = find_optimal_path(&pn, &search).map_err(Error::from)?;
        json!({
            "path": r.path,
            "score": r.score.to_string(),
            "peak_rank": r.peak_rank,
            "max_rank": Value::Null,
            "slice_count": plan.slice_count.to_string(),
            "cut_edges": plan.cut_edges,
            "expanded": r.expanded,
        })
    } else {
        let p = prepare_amplitude(&circuit, &bits_in, &bits_out, &opts)?;
        let pn = slice_network(p.network(), p.plan(), 0)
            .map_err(Error::from)?
            .path_network()
            .map_err(Error::from)?;
        let (score, peak) = rqcsim_core::path::path_score(&pn, p.path()).map_err(Error::from)?;
        json!({
            "path": p.path(),
            "score": score.to_string(),
            "peak_rank": peak,
            "max_rank": opts.max_rank,
            "slice_count": p.slice_count().to_string(),
            "cut_edges": p.plan().cut_edges,
        })
    };
    w.write(&record).map_err(io_err)
}

fn run_workload(args: &WorkloadArgs, w: &mut RecordWriter) -> Result<(), CliError> {
    let model = ErrorModel {
        e1: args.e1,
        e2: args.e2,
        eq: args.eq,
    };
    let circuits: Vec<Circuit> = match &args.circuit {
        Some(p) => vec![load_circuit(p)?],
        None => {
            let graph = graph_for(&args.lattice)?;
            let opts = rqc_options(&args.rqc)?;
            parse_depths(&args.depths)?
                .into_iter()
                .map(|d| {
                    generate_rqc_with(&graph, d, args.rqc.seed, &opts)
                        .map_err(|e| CliError::Core(e.into()))
                })
                .collect::<Result<_, _>>()?
        }
    };
    for c in &circuits {
        let e = estimate_workload(c, &model).map_err(Error::from)?;
        w.write(&json!({
            "num_qubits": c.num_qubits(),
            "depth": c.depth(),
            "single_qubit_gates": e.single_qubit_gates,
            "two_qubit_gates": e.two_qubit_gates,
            "readouts": e.readouts,
            "fidelity": e.fidelity,
            "log_fidelity": e.log_fidelity,
            "samples_exact": e.samples_exact,
            "samples": e.samples,
            "log10_samples": e.samples.log10(),
            "sigma": e.sigma,
        }))
        .map_err(io_err)?;
    }
    Ok(())
}

fn run_bench(
    args: &BenchArgs,
    workers: Option<usize>,
    w: &mut RecordWriter,
) -> Result<(), CliError> {
    let circuit = load_circuit(&args.circuit)?;
    let n = circuit.num_qubits();
    let bits_in = bits(args.bits_in.as_deref(), n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let opts = amplitude_options(&args.contraction)?;
    let pool = driver::thread_pool(workers).map_err(|e| usage(e.to_string()))?;
    let mut times = Vec::with_capacity(args.samples);
    for _ in 0..args.samples {
        let out = random_bits(&mut rng, n);
        // one bitstring at a time so each timing covers a whole amplitude
        let r = pool.install(|| driver::amplitude_one(&circuit, &bits_in, &out, &opts))?;
        times.push(r.wall_time_ms);
        w.write(&amplitude_json(&r, true)).map_err(io_err)?;
    }
    if !times.is_empty() {
        let mean = times.iter().sum::<f64>() / times.len() as f64;
        let min = times.iter().copied().fold(f64::INFINITY, f64::min);
        let max = times.iter().copied().fold(0.0, f64::max);
        w.write(&json!({
            "samples": times.len(),
            "workers": pool.current_num_threads(),
            "mean_ms": mean,
            "min_ms": min,
            "max_ms": max,
        }))
        .map_err(io_err)?;
    }
    Ok(())
}

const SUBCOMMANDS: [&str; 6] = [
    "gen",
    "amplitude",
    "verify",
    "path",
    "estimate-workload",
    "bench",
];

/// Value of `--config` and the position of the subcommand token, found
/// without a full parse (required flags may only be in the config).
fn scan_config(args: &[OsString]) -> (Option<PathBuf>, Option<usize>) {
    let mut config = None;
    let mut sub = None;
    let mut i = 1;
    while i < args.len() {
        let a = args[i].to_string_lossy();
        if a == "--" {
            break;
        }
        if a == "--config" {
            config = args.get(i + 1).map(PathBuf::from);
            i += 2;
            continue;
        }
        if let Some(v) = a.strip_prefix("--config=") {
            config = Some(PathBuf::from(v));
        } else if sub.is_none() && SUBCOMMANDS.contains(&a.as_ref()) {
            sub = Some(i);
        }
        i += 1;
    }
    (config, sub)
}

/// Parses `args`, splicing in flags from `--config` right after the
/// subcommand so that explicit flags still win.
pub fn parse_args(args: Vec<OsString>) -> Result<Cli, clap::Error> {
    let (Some(path), Some(at)) = scan_config(&args) else {
        return Cli::try_parse_from(&args);
    };
    let name = args[at].to_string_lossy().into_owned();
    let text = fs::read_to_string(&path).map_err(|e| {
        clap::Error::raw(
            clap::error::ErrorKind::Io,
            format!("config {}: {e}\n", path.display()),
        )
    })?;
    let extra = config::flags_for(&text, &name).map_err(|e| {
        clap::Error::raw(
            clap::error::ErrorKind::InvalidValue,
            format!("config {}: {e}\n", path.display()),
        )
    })?;
    let mut merged: Vec<OsString> = args[..=at].to_vec();
    merged.extend(extra);
    merged.extend(args[at + 1..].iter().cloned());
    Cli::try_parse_from(merged)
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let mut file;
    let sink: &mut dyn Write = match &cli.output {
        Some(p) => {
            file = fs::File::create(p).map_err(|e| CliError::Io {
                path: p.display().to_string(),
                message: e.to_string(),
            })?;
            &mut file
        }
        None => out,
    };
    let mut w = RecordWriter::new(sink, cli.format);
    match &cli.command {
        Command::Gen(a) => run_gen(a, w.out),
        Command::Amplitude(a) => run_amplitude(a, cli.workers, &mut w),
        Command::Verify(a) => run_verify(a, cli.workers, &mut w),
        Command::Path(a) => run_path(a, &mut w),
        Command::EstimateWorkload(a) => run_workload(a, &mut w),
        Command::Bench(a) => run_bench(a, cli.workers, &mut w),
    }?;
    w.out.flush().map_err(io_err)
}

pub fn error_line(kind: &str, message: &str) -> String {
    json!({"error": {"kind": kind, "message": message}}).to_string()
}

/// Full program: returns the process exit code.
pub fn main_with_args(args: Vec<OsString>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match parse_args(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(
                e.kind(),
                ErrorKind::DisplayHelp
                    | ErrorKind::DisplayVersion
                    | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
            ) {
                let _ = write!(out, "{}", e.render());
                return if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                    2
                } else {
                    0
                };
            }
            let msg = e.render().to_string();
            let first = msg
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ")
                .to_string();
            let _ = writeln!(err, "{}", error_line("usage", &first));
            return 2;
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "{}", error_line(e.kind(), &e.to_string()));
            e.exit_code()
        }
    }
}
