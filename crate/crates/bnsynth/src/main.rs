//! Command-line front end: validation, classification, feasibility checks,
//! synthesis, state-graph expansion, isomorphism testing and hardness
//! instance generation.
//!
//! Exit codes: 0 success / property holds, 1 property fails (infeasible,
//! not isomorphic, no model), 2 usage error (including out-of-scope types),
//! 3 invalid input file, 4 search budget exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use bnsynth::classify::{classify_type, ComplexityClass};
use bnsynth::feasibility::{decide_feasibility, FeasibilityError, Property, Strategy};
use bnsynth::hardness::{
    build_reduction, build_theorem2_ts, combine_witness, one_in_three_bruteforce, parse_cnf,
    theorem2_witness, Switch,
};
use bnsynth::interaction::NetType;
use bnsynth::net::{parse_net, serialize_net, state_graph};
use bnsynth::region::{serialize_region, OracleBudget, SolverError};
use bnsynth::synthesis::{synthesize, SynthesisError};
use bnsynth::ts::{parse_ts, serialize_ts, serialize_union, TransitionSystem};

const EXIT_OK: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_BUDGET: u8 = 4;

#[derive(Parser)]
#[command(name = "bnsynth", version, about = "Boolean net synthesis toolkit")]
struct Cli {
    /// Report format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for atom solving; output is canonical regardless.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a TS file (or a union file with --union).
    Validate {
        file: PathBuf,
        #[arg(long)]
        union: bool,
    },
    /// Print the synthesis-complexity class of a net type.
    Classify {
        #[arg(long = "type")]
        tau: String,
    },
    /// Synthesize a net whose state graph is isomorphic to the input TS.
    Synth {
        #[arg(long = "type")]
        tau: String,
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Re-expand the synthesized net and check the isomorphism.
        #[arg(long)]
        verify: bool,
        /// Write the defining region of every place to this file.
        #[arg(long)]
        sidecar: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Decide a separation property of the input TS.
    Check {
        #[arg(long = "type")]
        tau: String,
        #[arg(long, value_enum, default_value_t = PropertyArg::Feasibility)]
        property: PropertyArg,
        input: PathBuf,
        /// Write the witness regions to this file when the property holds.
        #[arg(long)]
        witness: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Expand the reachable markings of a net into a TS.
    Stategraph {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 1 << 20)]
        cap: usize,
    },
    /// Test two TSs for label-preserving isomorphism.
    Iso { a: PathBuf, b: PathBuf },
    /// Generate a hardness reduction instance from a CNF file.
    Reduce {
        /// sigma1..sigma6 or t2:<type> (e.g. t2:nop,inp,free).
        #[arg(long)]
        scheme: String,
        #[arg(long)]
        cnf: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Also write the un-joined union.
        #[arg(long)]
        union_out: Option<PathBuf>,
        /// Write a key-region witness for this type (defaults to the
        /// scheme's smallest type) after finding a model by brute force.
        #[arg(long)]
        witness: Option<PathBuf>,
        #[arg(long = "type")]
        tau: Option<String>,
        /// Model selection; only `auto` (brute force) is supported.
        #[arg(long, default_value = "auto")]
        model: String,
    },
    /// Generate the dedicated hardness TS for one of the seven extra
    /// classes.
    T2gen {
        #[arg(long = "type")]
        tau: String,
        #[arg(long)]
        cnf: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
    strategy: StrategyArg,
    #[arg(long, default_value_t = 10_000_000)]
    budget_nodes: u64,
    #[arg(long, default_value_t = 600)]
    budget_secs: u64,
}

impl SolverArgs {
    fn budget(&self) -> OracleBudget {
        OracleBudget {
            max_nodes: self.budget_nodes,
            max_time: Some(Duration::from_secs(self.budget_secs)),
        }
    }

    fn strategy(&self) -> Strategy {
        match self.strategy {
            StrategyArg::Auto => Strategy::Auto,
            StrategyArg::Oracle => Strategy::Oracle,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Auto,
    Oracle,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PropertyArg {
    Ssp,
    Essp,
    Feasibility,
}

impl PropertyArg {
    fn property(self) -> Property {
        match self {
            PropertyArg::Ssp => Property::Ssp,
            PropertyArg::Essp => Property::Essp,
            PropertyArg::Feasibility => Property::Feasibility,
        }
    }
}

/// A CLI failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

type CliResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs == 0 {
        eprintln!("error: --jobs must be at least 1");
        return ExitCode::from(EXIT_USAGE);
    }
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build_global();
    let format = cli.format;
    match run(cli.command, format) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| fail(EXIT_INPUT, format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, content: &str) -> Result<(), Failure> {
    std::fs::write(path, content)
        .map_err(|e| fail(EXIT_INPUT, format!("cannot write {}: {e}", path.display())))
}

fn parse_type(s: &str) -> Result<NetType, Failure> {
    s.parse()
        .map_err(|e| fail(EXIT_USAGE, format!("bad --type: {e}")))
}

fn load_ts(path: &Path) -> Result<TransitionSystem, Failure> {
    parse_ts(&read_file(path)?).map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn emit<T: Serialize>(format: Format, report: &T, text: String) {
    match format {
        Format::Text => println!("{text}"),
        Format::Json => {
            println!(
                "{}",
                serde_json::to_string_pretty(report).expect("report serializes")
            )
        }
    }
}

#[derive(Serialize)]
struct SchemaHeader {
    schema: &'static str,
    command: &'static str,
}

fn header(command: &'static str) -> SchemaHeader {
    SchemaHeader {
        schema: "v1",
        command,
    }
}

fn run(command: Command, format: Format) -> CliResult {
    match command {
        Command::Validate { file, union } => cmd_validate(format, &file, union),
        Command::Classify { tau } => cmd_classify(format, &tau),
        Command::Synth {
            tau,
            input,
            output,
            verify,
            sidecar,
            solver,
        } => cmd_synth(format, &tau, &input, &output, verify, sidecar.as_deref(), &solver),
        Command::Check {
            tau,
            property,
            input,
            witness,
            solver,
        } => cmd_check(format, &tau, property, &input, witness.as_deref(), &solver),
        Command::Stategraph { input, output, cap } => {
            cmd_stategraph(format, &input, output.as_deref(), cap)
        }
        Command::Iso { a, b } => cmd_iso(format, &a, &b),
        Command::Reduce {
            scheme,
            cnf,
            output,
            union_out,
            witness,
            tau,
            model,
        } => cmd_reduce(
            format,
            &scheme,
            &cnf,
            &output,
            union_out.as_deref(),
            witness.as_deref(),
            tau.as_deref(),
            &model,
        ),
        Command::T2gen { tau, cnf, output } => {
            cmd_reduce(format, &format!("t2:{tau}"), &cnf, &output, None, None, None, "auto")
        }
    }
}

#[derive(Serialize)]
struct ValidateReport {
    #[serde(flatten)]
    header: SchemaHeader,
    valid: bool,
    components: usize,
    states: usize,
    events: usize,
    arcs: usize,
    simple: bool,
    loop_free: bool,
    reduced: bool,
    modest: bool,
}

fn cmd_validate(format: Format, file: &Path, union: bool) -> CliResult {
    let text = read_file(file)?;
    let components: Vec<TransitionSystem> = if union {
        bnsynth::ts::parse_union(&text)
            .map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", file.display())))?
            .components()
            .to_vec()
    } else {
        vec![parse_ts(&text).map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", file.display())))?]
    };
    let states: usize = components.iter().map(|t| t.n_states()).sum();
    let events: usize = components.iter().map(|t| t.n_events()).sum();
    let arcs: usize = components.iter().map(|t| t.n_arcs()).sum();
    let modesty: Vec<_> = components.iter().map(|t| t.modesty()).collect();
    let all = |f: fn(&bnsynth::ts::ModestyReport) -> bool| modesty.iter().all(f);
    let report = ValidateReport {
        header: header("validate"),
        valid: true,
        components: components.len(),
        states,
        events,
        arcs,
        simple: all(|m| m.simple),
        loop_free: all(|m| m.loop_free),
        reduced: all(|m| m.reduced),
        modest: all(|m| m.modest),
    };
    let line = format!(
        "valid ({} component{}, {} states, {} events, {} arcs); simple={} loop_free={} reduced={} modest={}",
        report.components,
        if report.components == 1 { "" } else { "s" },
        report.states,
        report.events,
        report.arcs,
        report.simple,
        report.loop_free,
        report.reduced,
        report.modest
    );
    emit(format, &report, line);
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ClassifyReport {
    #[serde(flatten)]
    header: SchemaHeader,
    r#type: String,
    class: String,
    basis: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

fn cmd_classify(format: Format, tau: &str) -> CliResult {
    let tau = parse_type(tau)?;
    let c = classify_type(tau);
    let report = ClassifyReport {
        header: header("classify"),
        r#type: tau.to_string(),
        class: c.class.name().to_string(),
        basis: c.basis.to_string(),
        note: c.note.map(str::to_string),
    };
    let mut line = match c.class {
        ComplexityClass::OutOfScopeNopFree => c.class.name().to_string(),
        _ => format!("{} ({})", c.class.name(), c.basis),
    };
    if let Some(note) = c.note {
        line.push_str(&format!("; note: {note}"));
    }
    emit(format, &report, line);
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SynthReport {
    #[serde(flatten)]
    header: SchemaHeader,
    r#type: String,
    feasible: bool,
    places: usize,
    transitions: usize,
    verified: bool,
    output: String,
}

fn solver_failure(e: FeasibilityError) -> Failure {
    match e {
        FeasibilityError::OutOfScopeNopFree(t) => {
            fail(EXIT_USAGE, format!("type {{{t}}} has no nop; out of scope"))
        }
        FeasibilityError::Solver(SolverError::BudgetExceeded { nodes }) => {
            fail(EXIT_BUDGET, format!("search budget exceeded after {nodes} nodes"))
        }
        FeasibilityError::Solver(e) => fail(EXIT_USAGE, e.to_string()),
    }
}

fn cmd_synth(
    format: Format,
    tau: &str,
    input: &Path,
    output: &Path,
    verify: bool,
    sidecar: Option<&Path>,
    solver: &SolverArgs,
) -> CliResult {
    let tau = parse_type(tau)?;
    let ts = load_ts(input)?;
    match synthesize(&ts, tau, solver.strategy(), solver.budget(), verify) {
        Ok(result) => {
            write_file(output, &serialize_net(&result.net))?;
            if let Some(sidecar) = sidecar {
                let mut text = String::new();
                for (i, region) in result.regions.iter().enumerate() {
                    text.push_str(&format!("# place r{i}\n"));
                    text.push_str(&serialize_region(&ts, region));
                }
                write_file(sidecar, &text)?;
            }
            let report = SynthReport {
                header: header("synth"),
                r#type: tau.to_string(),
                feasible: true,
                places: result.net.n_places(),
                transitions: result.net.n_transitions(),
                verified: result.verified,
                output: output.display().to_string(),
            };
            let line = format!(
                "synthesized {} places / {} transitions{} -> {}",
                report.places,
                report.transitions,
                if verify { ", verified" } else { "" },
                output.display()
            );
            emit(format, &report, line);
            Ok(EXIT_OK)
        }
        Err(SynthesisError::Infeasible { witnesses, .. }) => Err(fail(
            EXIT_FAIL,
            format!("infeasible for {{{tau}}}; unsolvable: {}", witnesses.join(", ")),
        )),
        Err(SynthesisError::Feasibility(e)) => Err(solver_failure(e)),
        Err(e) => Err(fail(EXIT_USAGE, e.to_string())),
    }
}

#[derive(Serialize)]
struct CheckReport {
    #[serde(flatten)]
    header: SchemaHeader,
    r#type: String,
    property: String,
    holds: bool,
    regions: usize,
    unsolved: Vec<String>,
}

fn cmd_check(
    format: Format,
    tau: &str,
    property: PropertyArg,
    input: &Path,
    witness: Option<&Path>,
    solver: &SolverArgs,
) -> CliResult {
    let tau = parse_type(tau)?;
    let ts = load_ts(input)?;
    let report = decide_feasibility(
        &ts,
        tau,
        property.property(),
        solver.strategy(),
        solver.budget(),
    )
    .map_err(solver_failure)?;
    let unsolved: Vec<String> = report.unsolved.iter().map(|a| a.describe(&ts)).collect();
    let out = CheckReport {
        header: header("check"),
        r#type: tau.to_string(),
        property: match property {
            PropertyArg::Ssp => "ssp",
            PropertyArg::Essp => "essp",
            PropertyArg::Feasibility => "feasibility",
        }
        .to_string(),
        holds: report.feasible,
        regions: report.regions.len(),
        unsolved: unsolved.clone(),
    };
    if report.feasible {
        if let Some(path) = witness {
            let mut text = String::new();
            for region in &report.regions {
                text.push_str(&serialize_region(&ts, region));
            }
            write_file(path, &text)?;
        }
        emit(format, &out, format!("holds ({} witness regions)", report.regions.len()));
        Ok(EXIT_OK)
    } else {
        emit(format, &out, format!("fails; unsolvable: {}", unsolved.join(", ")));
        Ok(EXIT_FAIL)
    }
}

#[derive(Serialize)]
struct StategraphReport {
    #[serde(flatten)]
    header: SchemaHeader,
    states: usize,
    arcs: usize,
}

fn cmd_stategraph(format: Format, input: &Path, output: Option<&Path>, cap: usize) -> CliResult {
    let net = parse_net(&read_file(input)?)
        .map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", input.display())))?;
    let sg = state_graph(&net, cap).map_err(|e| fail(EXIT_BUDGET, e.to_string()))?;
    let text = serialize_ts(&sg);
    match output {
        Some(path) => {
            write_file(path, &text)?;
            let report = StategraphReport {
                header: header("stategraph"),
                states: sg.n_states(),
                arcs: sg.n_arcs(),
            };
            emit(
                format,
                &report,
                format!("{} states, {} arcs", sg.n_states(), sg.n_arcs()),
            );
        }
        None => print!("{text}"),
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct IsoReport {
    #[serde(flatten)]
    header: SchemaHeader,
    isomorphic: bool,
    mapping: Vec<(String, String)>,
}

fn cmd_iso(format: Format, a: &Path, b: &Path) -> CliResult {
    let ts_a = load_ts(a)?;
    let ts_b = load_ts(b)?;
    match bnsynth::net::check_isomorphic(&ts_a, &ts_b) {
        Some(pairs) => {
            let mut mapping: Vec<(String, String)> = pairs
                .into_iter()
                .map(|(x, y)| (ts_a.state_name(x).to_string(), ts_b.state_name(y).to_string()))
                .collect();
            mapping.sort();
            let report = IsoReport {
                header: header("iso"),
                isomorphic: true,
                mapping: mapping.clone(),
            };
            let lines: Vec<String> =
                mapping.iter().map(|(x, y)| format!("{x} -> {y}")).collect();
            emit(format, &report, format!("isomorphic\n{}", lines.join("\n")));
            Ok(EXIT_OK)
        }
        None => {
            let report = IsoReport {
                header: header("iso"),
                isomorphic: false,
                mapping: vec![],
            };
            emit(format, &report, "not isomorphic".to_string());
            Ok(EXIT_FAIL)
        }
    }
}

#[derive(Serialize)]
struct ReduceReport {
    #[serde(flatten)]
    header: SchemaHeader,
    scheme: String,
    components: usize,
    states: usize,
    events: usize,
    key_event: String,
    key_state: String,
    model: Option<Vec<String>>,
    witness_written: bool,
}

#[allow(clippy::too_many_arguments)]
fn cmd_reduce(
    format: Format,
    scheme: &str,
    cnf_path: &Path,
    output: &Path,
    union_out: Option<&Path>,
    witness: Option<&Path>,
    tau: Option<&str>,
    model_arg: &str,
) -> CliResult {
    if model_arg != "auto" {
        return Err(fail(EXIT_USAGE, "--model supports only `auto`"));
    }
    let cnf = parse_cnf(&read_file(cnf_path)?)
        .map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", cnf_path.display())))?;

    if let Some(t2_type) = scheme.strip_prefix("t2:") {
        let tau = parse_type(t2_type)?;
        let out = build_theorem2_ts(&cnf, tau).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
        write_file(output, &serialize_ts(&out.ts))?;
        let mut model_names: Option<Vec<String>> = None;
        let mut witness_written = false;
        if let Some(wpath) = witness {
            let model = one_in_three_bruteforce(&cnf)
                .map_err(|e| fail(EXIT_USAGE, e.to_string()))?
                .ok_or_else(|| fail(EXIT_FAIL, "instance has no one-in-three model"))?;
            let region =
                theorem2_witness(&cnf, tau, &model).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
            write_file(wpath, &serialize_region(&out.ts, &region))?;
            model_names = Some(model.iter().map(|&v| cnf.variable_name(v).to_string()).collect());
            witness_written = true;
        }
        let report = ReduceReport {
            header: header("reduce"),
            scheme: scheme.to_string(),
            components: 1,
            states: out.ts.n_states(),
            events: out.ts.n_events(),
            key_event: out.key_event.clone(),
            key_state: out.key_state.clone(),
            model: model_names,
            witness_written,
        };
        let line = format!(
            "wrote {} ({} states, {} events); key atom: event `{}` at state `{}`",
            output.display(),
            report.states,
            report.events,
            report.key_event,
            report.key_state
        );
        emit(format, &report, line);
        return Ok(EXIT_OK);
    }

    let sw: Switch = scheme.parse().map_err(|e: String| fail(EXIT_USAGE, e))?;
    let reduction = build_reduction(&cnf, sw).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    write_file(output, &serialize_ts(&reduction.joined))?;
    if let Some(upath) = union_out {
        write_file(upath, &serialize_union(&reduction.union))?;
    }
    let mut model_names: Option<Vec<String>> = None;
    let mut witness_written = false;
    if let Some(wpath) = witness {
        let tau = match tau {
            Some(t) => parse_type(t)?,
            None => sw.representative_type(),
        };
        let model = one_in_three_bruteforce(&cnf)
            .map_err(|e| fail(EXIT_USAGE, e.to_string()))?
            .ok_or_else(|| fail(EXIT_FAIL, "instance has no one-in-three model"))?;
        let region = combine_witness(&cnf, &reduction, tau, &model)
            .map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
        write_file(wpath, &serialize_region(&reduction.joined, &region))?;
        model_names = Some(model.iter().map(|&v| cnf.variable_name(v).to_string()).collect());
        witness_written = true;
    }
    let report = ReduceReport {
        header: header("reduce"),
        scheme: scheme.to_string(),
        components: reduction.union.len(),
        states: reduction.joined.n_states(),
        events: reduction.joined.n_events(),
        key_event: reduction.key_event.clone(),
        key_state: reduction.key_state.clone(),
        model: model_names,
        witness_written,
    };
    let line = format!(
        "wrote {} ({} components, {} states, {} events); key atom: event `{}` at state `{}`",
        output.display(),
        report.components,
        report.states,
        report.events,
        report.key_event,
        report.key_state
    );
    emit(format, &report, line);
    Ok(EXIT_OK)
}
