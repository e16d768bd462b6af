//! `magicsquare`: runs scenarios and verification sweeps, printing JSON on
//! stdout. Logs go to stderr.
//!
//! Exit codes: 0 success, 1 failed check or internal error, 2 usage or
//! parse error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use magicsquare_core::verifier::{mutated_model, DEFAULT_MAX_LEN};
use magicsquare_core::{
    assign_values, canonical_state, context_product, parse_scenarios, point_state,
    quantum_signature, verify_quantum_square, CanonicalStateName, ContextId, ContextOrders,
    EpistemicState, JointOnticState, MeasurementSetting, Model, NonLocalSetting, Observable, Sign,
    Trace, Verifier, NONCONTEXTUAL_BOUND,
};

const DEMO_STATE: &str = "(+,-,+)x(+,+,-)";

#[derive(Parser)]
#[command(
    name = "magicsquare",
    version,
    about = "Classical two-cube model of the magic square"
)]
struct Cli {
    /// Spaces per JSON indent level; 0 prints compact JSON.
    #[arg(long, global = true, default_value_t = 2)]
    json_indent: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a scenario file.
    Run {
        /// Scenario file, or `-` for stdin.
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        /// RNG seed for sample mode (defaults to 0 and is echoed).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Order-dependent values for the two orders of XX&YY and ZZ&YY.
    Fig7,
    /// Run the exhaustive verification suite.
    Verify {
        #[arg(long, default_value_t = DEFAULT_MAX_LEN)]
        max_len: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Fill in per-check wall-clock times (output is no longer byte-stable).
        #[arg(long)]
        timings: bool,
        /// Swap two post-states in the XX&YY row (negative control).
        #[arg(long, hide = true)]
        mutate_table: bool,
    },
    /// Context products for one or all initial point states.
    Square {
        /// Joint state literal such as `(+,-,+)x(+,+,-)`; all 64 if omitted.
        #[arg(long)]
        state: Option<String>,
        /// `;`-separated order for C3, e.g. `XX&YY;ZZ&YY`.
        #[arg(long)]
        direct: Option<String>,
        /// `;`-separated order for R3, e.g. `XY&YX;YX&ZZ`.
        #[arg(long)]
        swapped: Option<String>,
        /// Sweep all 6 x 6 two-setting orders.
        #[arg(long, conflicts_with_all = ["direct", "swapped"])]
        all_orders: bool,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Witness value over every initial state and order.
    Witness {
        #[arg(long, default_value_t = NONCONTEXTUAL_BOUND)]
        bound: i32,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Quantum operator square checks next to the classical signature.
    Quantum,
    /// List states, settings and observables.
    Enumerate {
        #[arg(value_enum, default_value_t = Listing::All)]
        what: Listing,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Sample,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Listing {
    All,
    States,
    Canonical,
    Settings,
    Observables,
    Contexts,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl From<magicsquare_core::Error> for CliError {
    fn from(e: magicsquare_core::Error) -> Self {
        match e {
            magicsquare_core::Error::Parse { .. } => CliError::Usage(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

/// JSON payload plus whether every check in it passed.
struct Output {
    value: Value,
    pass: bool,
}

impl Output {
    fn ok(value: Value) -> Self {
        Output { value, pass: true }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            if let Err(e) = writeln!(stdout, "{}", render(&out.value, cli.json_indent)) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("magicsquare: {e}");
                    return ExitCode::from(1);
                }
            }
            if out.pass {
                ExitCode::SUCCESS
            } else {
                eprintln!("magicsquare: one or more checks failed");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("magicsquare: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn render(value: &Value, indent: usize) -> String {
    if indent == 0 {
        return serde_json::to_string(value).expect("JSON values serialize");
    }
    let pad = vec![b' '; indent];
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(
        &mut buf,
        serde_json::ser::PrettyFormatter::with_indent(&pad),
    );
    value.serialize(&mut ser).expect("JSON values serialize");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn execute(command: Command) -> Result<Output, CliError> {
    match command {
        Command::Run { path, mode, seed } => run(path, mode, seed),
        Command::Fig7 => fig7(),
        Command::Verify {
            max_len,
            workers,
            timings,
            mutate_table,
        } => verify(max_len, workers, timings, mutate_table),
        Command::Square {
            state,
            direct,
            swapped,
            all_orders,
            workers,
        } => square(state, direct, swapped, all_orders, workers),
        Command::Witness { bound, workers } => {
            let summary = Verifier::default().with_workers(workers).witness(bound)?;
            Ok(Output::ok(to_value(summary)))
        }
        Command::Quantum => Ok(quantum()),
        Command::Enumerate { what } => Ok(Output::ok(enumerate(what))),
    }
}

fn read_input(path: &PathBuf) -> Result<String, CliError> {
    let read = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    };
    read.map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn state_json(state: &EpistemicState) -> Value {
    match state.label() {
        Some(label) => Value::String(label),
        None => to_value(state),
    }
}

fn trace_json(trace: &Trace) -> Value {
    let steps: Vec<Value> = trace
        .steps
        .iter()
        .map(|s| {
            json!({
                "setting": s.setting,
                "outcome": s.outcome,
                "probability": s.probability,
                "revealed": s.setting.revealed(s.outcome).map(|r| {
                    r.into_iter().map(|(o, v)| (o.to_string(), to_value(v))).collect::<serde_json::Map<_, _>>()
                }).ok(),
                "post": state_json(&s.post),
            })
        })
        .collect();
    json!({
        "probability": trace.probability,
        "steps": steps,
        "final": state_json(trace.final_state()),
    })
}

fn run(path: PathBuf, mode: Mode, seed: Option<u64>) -> Result<Output, CliError> {
    let text = read_input(&path)?;
    let scenarios =
        parse_scenarios(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    eprintln!(
        "magicsquare: {} scenario(s) from {}",
        scenarios.len(),
        path.display()
    );
    let seed = seed.unwrap_or(0);
    let mut out = Vec::new();
    for sc in &scenarios {
        let traces = match mode {
            Mode::Exact => magicsquare_core::run_exact(&sc.initial, &sc.settings)?,
            Mode::Sample => vec![magicsquare_core::run_sampled(
                &sc.initial,
                &sc.settings,
                seed,
            )?],
        };
        out.push(json!({
            "line": sc.line,
            "initial": sc.label,
            "settings": sc.settings,
            "traces": traces.iter().map(trace_json).collect::<Vec<_>>(),
        }));
    }
    let mut value = json!({
        "mode": match mode { Mode::Exact => "exact", Mode::Sample => "sample" },
        "scenarios": out,
    });
    if let Mode::Sample = mode {
        value["seed"] = json!(seed);
    }
    Ok(Output::ok(value))
}

fn parse_settings(list: &str) -> Result<Vec<MeasurementSetting>, CliError> {
    list.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(CliError::from))
        .collect()
}

fn fig7() -> Result<Output, CliError> {
    let initial = point_state(DEMO_STATE.parse()?);
    let mut orders = Vec::new();
    for order in ["XX&YY;ZZ&YY", "ZZ&YY;XX&YY"] {
        let settings = parse_settings(order)?;
        let traces = magicsquare_core::run_exact(&initial, &settings)?;
        let [trace] = traces.as_slice() else {
            return Err(CliError::Internal(format!(
                "{order}: expected a single deterministic trace"
            )));
        };
        let values = assign_values(ContextId::C3, trace)?;
        orders.push(json!({
            "order": settings,
            "values": values,
            "product": context_product(&values),
            "probability": trace.probability,
            "post": state_json(trace.final_state()),
        }));
    }
    Ok(Output::ok(
        json!({ "initial": DEMO_STATE, "context": ContextId::C3, "orders": orders }),
    ))
}

fn verify(max_len: usize, workers: usize, timings: bool, mutate: bool) -> Result<Output, CliError> {
    let model = if mutate {
        mutated_model()
    } else {
        Model::STANDARD
    };
    eprintln!("magicsquare: verifying with max length {max_len} on {workers} worker(s)");
    let reports = Verifier::new(model)
        .with_workers(workers)
        .with_timings(timings)
        .exhaustive_verify(max_len)?;
    let pass = reports.iter().all(|r| r.pass);
    for r in &reports {
        eprintln!(
            "  {} {} ({} cases)",
            if r.pass { "pass" } else { "FAIL" },
            r.check,
            r.universe_size
        );
    }
    Ok(Output {
        value: json!({
            "model": if mutate { "mutated" } else { "standard" },
            "max_len": max_len,
            "pass": pass,
            "reports": reports,
        }),
        pass,
    })
}

fn nonlocal_order(list: &str) -> Result<Vec<NonLocalSetting>, CliError> {
    parse_settings(list)?
        .into_iter()
        .map(|s| match s {
            MeasurementSetting::NonLocal(n) => Ok(n),
            other => Err(CliError::Usage(format!(
                "{other} is not a non-local setting"
            ))),
        })
        .collect()
}

fn square(
    state: Option<String>,
    direct: Option<String>,
    swapped: Option<String>,
    all_orders: bool,
    workers: usize,
) -> Result<Output, CliError> {
    let states: Vec<JointOnticState> = match state {
        Some(s) => vec![s.parse()?],
        None => JointOnticState::all().collect(),
    };
    let orders = if all_orders {
        ContextOrders::all_pairs()
    } else {
        let default = ContextOrders::default();
        let direct = direct.map_or(Ok(default.direct), |d| nonlocal_order(&d))?;
        let swapped = swapped.map_or(Ok(default.swapped), |s| nonlocal_order(&s))?;
        vec![ContextOrders::new(direct, swapped).map_err(|e| CliError::Usage(e.to_string()))?]
    };
    let verifier = Verifier::default().with_workers(workers);
    let mut results = Vec::with_capacity(states.len() * orders.len());
    for w in &states {
        for o in &orders {
            results.push(verifier.square_products(*w, o)?);
        }
    }
    Ok(Output::ok(to_value(results)))
}

fn quantum() -> Output {
    let report = verify_quantum_square();
    let quantum = quantum_signature();
    // Classical signature over every preparation and order; `None` in a
    // slot would mean it depends on the preparation.
    let classical = Verifier::default().all_square_results().map(|results| {
        (0..6)
            .map(|i| {
                let first = results[0].signature()[i];
                results
                    .iter()
                    .all(|r| r.signature()[i] == first)
                    .then_some(first)
            })
            .collect::<Vec<_>>()
    });
    let quantum_signs: Vec<Option<Sign>> = quantum.products.iter().map(|(_, s)| *s).collect();
    let agree = classical.as_ref().is_ok_and(|c| *c == quantum_signs);
    let square: Vec<Vec<String>> = magicsquare_core::quantum::quantum_square()
        .iter()
        .map(|row| row.iter().map(|c| c.to_string()).collect())
        .collect();
    let rows: Vec<Value> = ContextId::ALL
        .iter()
        .zip(&quantum_signs)
        .enumerate()
        .map(|(i, (c, q))| {
            json!({
                "context": c,
                "quantum": q,
                "classical": classical.as_ref().ok().and_then(|v| v[i]),
            })
        })
        .collect();
    Output {
        pass: report.pass && agree,
        value: json!({
            "square": square,
            "contexts": rows,
            "signatures_agree": agree,
            "report": report,
        }),
    }
}

fn enumerate(what: Listing) -> Value {
    let want = |l: Listing| what == Listing::All || what == l;
    let mut out = serde_json::Map::new();
    if want(Listing::States) {
        out.insert(
            "states".into(),
            JointOnticState::all()
                .map(|w| json!({ "index": w.index(), "state": w }))
                .collect(),
        );
    }
    if want(Listing::Canonical) {
        out.insert(
            "canonical".into(),
            CanonicalStateName::ALL
                .iter()
                .map(|&n| json!({ "name": n, "state": canonical_state(n) }))
                .collect(),
        );
    }
    if want(Listing::Settings) {
        let settings: Vec<MeasurementSetting> = MeasurementSetting::elementary_settings()
            .into_iter()
            .chain(MeasurementSetting::joint_settings())
            .collect();
        out.insert(
            "settings".into(),
            settings
                .iter()
                .map(|s| json!({ "setting": s, "observables": s.observables().iter().map(|o| o.to_string()).collect::<Vec<_>>() }))
                .collect(),
        );
    }
    if want(Listing::Observables) {
        out.insert(
            "observables".into(),
            Observable::CATALOG
                .iter()
                .map(|o| Value::String(o.to_string()))
                .collect(),
        );
    }
    if want(Listing::Contexts) {
        out.insert(
            "contexts".into(),
            ContextId::ALL
                .iter()
                .map(|&c| {
                    json!({
                        "context": c,
                        "observables": c.observables().iter().map(|o| o.to_string()).collect::<Vec<_>>(),
                        "settings": c.family_settings(),
                        "required_product": c.required_product(),
                    })
                })
                .collect(),
        );
    }
    Value::Object(out)
}
