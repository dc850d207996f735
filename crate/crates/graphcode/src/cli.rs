//! Argument parsing and command dispatch.
//!
//! Exit codes: 0 when the claim holds (or the search succeeded), 1 when it
//! fails (the JSON then carries a witness) or the search budget ran out, 2 on
//! usage or input errors.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use graphcode_core::detector::{configurations, detects, sweep, SweepOptions};
use graphcode_core::graph::{matrix19_code, tenfold_code, wheel_code, MATRIX19};
use graphcode_core::oracle::{
    build_isometry, kl_detects_with, within_cap, OracleConfig, DEFAULT_SIZE_CAP,
};
use graphcode_core::singleton::{
    graph_census, offdiag_subdets, restricted_bad_primes, search_weights, CensusPredicate,
    SearchOutcome, Skeleton,
};
use graphcode_core::zmod::IntMatrix;
use graphcode_core::{ErrorConfiguration, FiniteAbelianGroup, WeightedGraph};
use serde::Serialize;

use crate::format::{parse_graph, parse_raw, parse_vertex_list};
use crate::report::{
    matrix_json, primes_json, ClaimJson, ExportHeader, GraphInfo, OracleJson, RestrictedJson,
    SearchJson, SkeletonJson, SubdetsJson, SubdetsReportJson, SweepJson, VerdictJson,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CLAIM_FAILS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "graphcode",
    version,
    about = "Verify error detection and correction of graph codes over finite abelian groups"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether one error configuration is detected.
    Detect(DetectArgs),
    /// Check every configuration up to a size: `--detect T` or `--correct E`.
    Sweep(SweepArgs),
    /// Report the determinants of all off-diagonal square blocks.
    Subdets(SubdetsArgs),
    /// Randomized search for weights on a skeleton with all off-diagonal blocks invertible.
    Search(SearchArgs),
    /// Enumerate graphs on N vertices whose off-diagonal blocks are all unimodular.
    Census(CensusArgs),
    /// Write the coding isometry as CSV (row,col,re,im).
    Export(ExportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Builtin {
    /// Six vertices: input hub 0 joined to the output five-cycle 1-2-3-4-5-1.
    Wheel,
    /// Eleven vertices: input 0 and a ring of five output pairs {2i-1, 2i}.
    Tenfold,
    /// Eight vertices with a fixed integer weight matrix; inputs default to {0}.
    Matrix19,
}

impl Builtin {
    fn name(self) -> &'static str {
        match self {
            Builtin::Wheel => "wheel",
            Builtin::Tenfold => "tenfold",
            Builtin::Matrix19 => "matrix19",
        }
    }

    fn description(self) -> &'static str {
        match self {
            Builtin::Wheel => "input hub 0 joined to every vertex of the output five-cycle 1-2-3-4-5-1, unit weights",
            Builtin::Tenfold => {
                "input 0 and output pairs {1,2},{3,4},{5,6},{7,8},{9,10} on a five-cycle; each output is joined to 0, \
                 its partner and all four vertices of the two neighbouring pairs, unit weights"
            }
            Builtin::Matrix19 => {
                "eight vertices, fixed integer weights in [-2,2], four neighbours per vertex; every off-diagonal 4x4 block \
                 is invertible modulo any prime outside {2,3,5,11}"
            }
        }
    }

    fn graph(self, inputs: Option<&[usize]>) -> Result<WeightedGraph> {
        Ok(match (self, inputs) {
            (Builtin::Wheel, None) => wheel_code(),
            (Builtin::Tenfold, None) => tenfold_code(),
            (Builtin::Matrix19, None) => matrix19_code(&[0])?,
            (Builtin::Matrix19, Some(x)) => matrix19_code(x)?,
            (b, Some(x)) => b.graph(None)?.with_inputs(x)?,
        })
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Graph file (see the README for the format).
    #[arg(long, value_name = "FILE")]
    graph: Option<PathBuf>,
    /// One of the built-in example graphs.
    #[arg(long, value_enum)]
    builtin: Option<Builtin>,
}

#[derive(Debug, Args)]
struct GraphArgs {
    #[command(flatten)]
    source: Source,
    /// Replace the input vertex set, e.g. `0` or `0,1`.
    #[arg(long, value_name = "LIST")]
    inputs: Option<String>,
}

impl GraphArgs {
    fn load(&self) -> Result<(WeightedGraph, GraphInfo)> {
        let inputs = self
            .inputs
            .as_deref()
            .map(parse_vertex_list)
            .transpose()
            .map_err(anyhow::Error::msg)
            .context("invalid --inputs")?;
        match (&self.source.graph, self.source.builtin) {
            (Some(path), _) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                let mut g =
                    parse_graph(&text).with_context(|| format!("parsing {}", path.display()))?;
                if let Some(x) = &inputs {
                    g = g.with_inputs(x)?;
                }
                let info = GraphInfo::new(path.display().to_string(), "file", None, &g);
                Ok((g, info))
            }
            (None, Some(b)) => {
                let g = b.graph(inputs.as_deref())?;
                let info =
                    GraphInfo::new(b.name().to_string(), "builtin", Some(b.description()), &g);
                Ok((g, info))
            }
            (None, None) => bail!("one of --graph or --builtin is required"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct GroupSpec(Vec<u64>);

fn parse_group(text: &str) -> Result<GroupSpec, String> {
    let factors = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| format!("`{}` is not a cyclic order", t.trim()))
        })
        .collect::<Result<Vec<u64>, String>>()?;
    FiniteAbelianGroup::new(&factors).map_err(|e| e.to_string())?;
    Ok(GroupSpec(factors))
}

impl GroupSpec {
    fn group(&self) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(&self.0).expect("validated while parsing")
    }
}

#[derive(Debug, Args)]
struct DetectArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Orders of the cyclic factors, e.g. `2` or `2,4`. Defaults to 2, the qubit case.
    #[arg(long, default_value = "2", value_parser = parse_group)]
    group: GroupSpec,
    /// Error configuration: output vertices, e.g. `1,2,3`; empty for none.
    #[arg(long, value_name = "LIST")]
    config: String,
}

#[derive(Debug, Args)]
#[group(id = "claim", required = true, multiple = false)]
struct Claim {
    /// Check that every configuration of size at most T is detected.
    #[arg(long, value_name = "T")]
    detect: Option<usize>,
    /// Check that E errors are corrected, i.e. every configuration of size at most 2E is detected.
    #[arg(long, value_name = "E")]
    correct: Option<usize>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Orders of the cyclic factors, e.g. `2` or `2,4`. Defaults to 2, the qubit case.
    #[arg(long, default_value = "2", value_parser = parse_group)]
    group: GroupSpec,
    #[command(flatten)]
    claim: Claim,
    /// Cross-check each configuration against the dense Knill-Laflamme oracle.
    #[arg(long)]
    oracle: bool,
    /// Largest |G|^(|X|+|Y|) the oracle may build.
    #[arg(long, value_name = "N", default_value_t = DEFAULT_SIZE_CAP)]
    oracle_cap: u64,
    /// Check one configuration per orbit of the automorphisms fixing the inputs.
    #[arg(long)]
    orbit_reduction: bool,
}

#[derive(Debug, Args)]
struct SubdetsArgs {
    #[command(flatten)]
    source: Source,
    /// Also report bad primes restricted to partitions keeping these vertices together.
    #[arg(long, value_name = "LIST")]
    inputs: Option<String>,
}

#[derive(Debug, Args)]
#[group(id = "skeleton_source", required = true, multiple = false)]
struct SkeletonSource {
    /// Skeleton file: graph format, `inputs:` optional; nonzero edges mark admissible entries.
    #[arg(long, value_name = "FILE")]
    skeleton: Option<PathBuf>,
    /// Use the nonzero pattern of a built-in graph as the skeleton.
    #[arg(long, value_enum)]
    builtin: Option<Builtin>,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[command(flatten)]
    source: SkeletonSource,
    /// Weights are drawn from [-BOUND, BOUND] without 0.
    #[arg(long, default_value_t = 2)]
    bound: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Maximum number of attempts.
    #[arg(long, default_value_t = 100_000)]
    budget: u64,
}

#[derive(Debug, Args)]
struct CensusArgs {
    /// Number of vertices (even, at most 8).
    #[arg(long)]
    n: usize,
    /// Require invertibility modulo this prime instead of determinant ±1.
    #[arg(long, value_name = "P")]
    prime: Option<u64>,
}

#[derive(Debug, Args)]
struct ExportArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Orders of the cyclic factors, e.g. `2` or `2,4`. Defaults to 2, the qubit case.
    #[arg(long, default_value = "2", value_parser = parse_group)]
    group: GroupSpec,
    /// Write the CSV here and print the JSON header; without it the CSV goes to standard output.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Write the JSON header to this file.
    #[arg(long, value_name = "FILE")]
    header: Option<PathBuf>,
    /// Largest |G|^(|X|+|Y|) that may be built.
    #[arg(long, value_name = "N", default_value_t = DEFAULT_SIZE_CAP)]
    cap: u64,
}

/// Everything a command produces; `main` prints it and exits with `code`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn json<T: Serialize>(code: i32, value: &T) -> Result<Outcome> {
        let mut stdout = serde_json::to_string_pretty(value)?;
        stdout.push('\n');
        Ok(Outcome {
            code,
            stdout,
            stderr: String::new(),
        })
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    execute(cli).unwrap_or_else(|e| Outcome {
        code: EXIT_USAGE,
        stdout: String::new(),
        stderr: format!("error: {e:#}\n"),
    })
}

fn execute(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Detect(a) => cmd_detect(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Subdets(a) => cmd_subdets(a),
        Command::Search(a) => cmd_search(a),
        Command::Census(a) => cmd_census(a),
        Command::Export(a) => cmd_export(a),
    }
}

fn cmd_detect(a: DetectArgs) -> Result<Outcome> {
    let (graph, info) = a.graph.load()?;
    let group = a.group.group();
    let vertices = parse_vertex_list(&a.config)
        .map_err(anyhow::Error::msg)
        .context("invalid --config")?;
    let config = ErrorConfiguration::new(&graph, &vertices).context("invalid --config")?;
    let verdict = detects(&graph, &group, &config)?;
    let code = if verdict.is_detected() {
        EXIT_OK
    } else {
        EXIT_CLAIM_FAILS
    };
    Outcome::json(code, &VerdictJson::new(info, &group, &graph, &verdict))
}

fn cmd_sweep(a: SweepArgs) -> Result<Outcome> {
    let (graph, info) = a.graph.load()?;
    let group = a.group.group();
    let (claim, max_size) = match (a.claim.detect, a.claim.correct) {
        (Some(t), _) => (
            ClaimJson {
                kind: "detect",
                errors: t,
            },
            t,
        ),
        (None, Some(e)) => (
            ClaimJson {
                kind: "correct",
                errors: e,
            },
            2 * e,
        ),
        (None, None) => bail!("one of --detect or --correct is required"),
    };
    let options = SweepOptions {
        orbit_reduction: a.orbit_reduction,
    };
    let report = sweep(&graph, &group, max_size, options)?;
    let mut out = SweepJson::new(info, claim, &report, &group);
    let mut stderr = String::new();
    if a.oracle {
        let oracle = compare_with_oracle(&graph, &group, max_size, a.oracle_cap)?;
        if let Some(reason) = &oracle.reason {
            stderr.push_str(&format!("warning: oracle skipped: {reason}\n"));
        }
        out.oracle = Some(oracle);
    }
    let disagreements = out
        .oracle
        .as_ref()
        .is_some_and(|o| !o.disagreements.is_empty());
    let code = if out.holds && !disagreements {
        EXIT_OK
    } else {
        EXIT_CLAIM_FAILS
    };
    let mut outcome = Outcome::json(code, &out)?;
    outcome.stderr = stderr;
    Ok(outcome)
}

fn compare_with_oracle(
    graph: &WeightedGraph,
    group: &FiniteAbelianGroup,
    max_size: usize,
    cap: u64,
) -> Result<OracleJson> {
    if !within_cap(graph, group, cap) {
        return Ok(OracleJson {
            status: "skipped",
            compared: 0,
            disagreements: Vec::new(),
            reason: Some(format!(
                "|G|^(|X|+|Y|) exceeds the size cap {cap}; raise it with --oracle-cap"
            )),
        });
    }
    let config = OracleConfig {
        size_cap: cap,
        ..OracleConfig::default()
    };
    let v = build_isometry(graph, group, &config)?;
    let mut compared = 0;
    let mut disagreements = Vec::new();
    for size in 0..=max_size.min(graph.outputs().len()) {
        for c in configurations(graph, size) {
            let exact = detects(graph, group, &c)?.is_detected();
            let numeric = kl_detects_with(&v, graph, &c, config.tolerance)?;
            compared += 1;
            if exact != numeric {
                disagreements.push(c.vertices().to_vec());
            }
        }
    }
    Ok(OracleJson {
        status: "checked",
        compared,
        disagreements,
        reason: None,
    })
}

fn cmd_subdets(a: SubdetsArgs) -> Result<Outcome> {
    let graph_args = GraphArgs {
        source: a.source,
        inputs: None,
    };
    let (graph, info) = graph_args.load()?;
    let report = offdiag_subdets(graph.gamma())?;
    let restricted = match &a.inputs {
        Some(text) => {
            let inputs = parse_vertex_list(text)
                .map_err(anyhow::Error::msg)
                .context("invalid --inputs")?;
            let primes = restricted_bad_primes(graph.gamma(), &inputs)?;
            Some(RestrictedJson {
                inputs,
                bad_primes: primes_json(&primes),
            })
        }
        None => None,
    };
    Outcome::json(
        EXIT_OK,
        &SubdetsReportJson {
            graph: info,
            report: SubdetsJson::from(&report),
            restricted,
        },
    )
}

fn cmd_search(a: SearchArgs) -> Result<Outcome> {
    let (pattern, source) = match (&a.source.skeleton, a.source.builtin) {
        (Some(path), _) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let raw =
                parse_raw(&text, false).with_context(|| format!("parsing {}", path.display()))?;
            (raw.gamma, path.display().to_string())
        }
        (None, Some(Builtin::Matrix19)) => {
            (IntMatrix::from_rows(&MATRIX19)?, "matrix19".to_string())
        }
        (None, Some(b)) => (b.graph(None)?.gamma().clone(), b.name().to_string()),
        (None, None) => bail!("one of --skeleton or --builtin is required"),
    };
    let skeleton = Skeleton::from_matrix(&pattern)?;
    let mut out = SearchJson {
        skeleton: SkeletonJson {
            source,
            vertices: skeleton.size(),
            edges: skeleton.edges(),
        },
        bound: a.bound,
        seed: a.seed,
        budget: a.budget,
        status: "exhausted",
        attempts: 0,
        gamma: None,
        subdets: None,
        good_primes: None,
        block: None,
    };
    let code = match search_weights(&skeleton, a.bound, a.seed, a.budget)? {
        SearchOutcome::Found {
            gamma,
            attempts,
            report,
        } => {
            out.status = "found";
            out.attempts = attempts;
            out.gamma = Some(matrix_json(&gamma));
            out.good_primes = Some(report.good_primes(50));
            out.subdets = Some(SubdetsJson::from(&report));
            EXIT_OK
        }
        SearchOutcome::Exhausted { attempts } => {
            out.attempts = attempts;
            EXIT_CLAIM_FAILS
        }
        SearchOutcome::Infeasible { block } => {
            out.status = "infeasible";
            out.block = Some(block);
            EXIT_CLAIM_FAILS
        }
    };
    Outcome::json(code, &out)
}

fn cmd_census(a: CensusArgs) -> Result<Outcome> {
    let predicate = match a.prime {
        None => CensusPredicate::Unimodular,
        Some(p) if graphcode_core::singleton::is_prime(p) => CensusPredicate::InvertibleMod(p),
        Some(p) => bail!("{p} is not prime"),
    };
    let classes = graph_census(a.n, predicate)?;
    let mut stdout = String::new();
    for c in &classes {
        let edges: Vec<String> = c.edges().iter().map(|(u, v)| format!("{u}-{v}")).collect();
        stdout.push_str(&format!("{} {}\n", c.bitstring(), edges.join(" ")));
    }
    Ok(Outcome {
        code: EXIT_OK,
        stdout,
        stderr: format!("{} classes\n", classes.len()),
    })
}

fn cmd_export(a: ExportArgs) -> Result<Outcome> {
    let (graph, info) = a.graph.load()?;
    let group = a.group.group();
    let config = OracleConfig {
        size_cap: a.cap,
        ..OracleConfig::default()
    };
    let v = build_isometry(&graph, &group, &config)?;
    let mut csv = String::from("row,col,re,im\n");
    for r in 0..v.rows {
        for c in 0..v.cols {
            let z = v.entry(r, c);
            csv.push_str(&format!("{r},{c},{},{}\n", z.re, z.im));
        }
    }
    let header = ExportHeader {
        group: (&group).into(),
        graph: info,
        rows: v.rows,
        cols: v.cols,
        normalization: "counting",
        csv: a.out.as_ref().map(|p| p.display().to_string()),
    };
    let header_text = format!("{}\n", serde_json::to_string_pretty(&header)?);
    if let Some(path) = &a.header {
        fs::write(path, &header_text).with_context(|| format!("writing {}", path.display()))?;
    }
    let stdout = match &a.out {
        Some(path) => {
            fs::write(path, &csv).with_context(|| format!("writing {}", path.display()))?;
            header_text
        }
        None => csv,
    };
    Ok(Outcome {
        code: EXIT_OK,
        stdout,
        stderr: String::new(),
    })
}
