//! `bargmann` command-line front end.
//!
//! Exit codes: 0 success, 1 negative verdict (nonmember, not PSD, value
//! outside the reachable set), 2 invalid input, 3 tolerance failure.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use bargmann_core::circulant::in_zn;
use bargmann_core::gram::{realize as realize_gram, GramMatrix};
use bargmann_core::harness::{self, Property};
use bargmann_core::io::{to_pair, CirculantSpecJson, GramMatrixJson, PlanJson, StateTupleJson};
use bargmann_core::linalg::{hermitian_eig, scaled_tol};
use bargmann_core::regions::{
    boundary_sample, in_bn_circ, max_imaginarity, principal_root, real_window,
};
use bargmann_core::states::{bargmann, StateTuple};
use bargmann_core::synth::{realize, realize_in_disk, realize_real};
use bargmann_core::{Error, DEFAULT_TOL};
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(
    name = "bargmann",
    version,
    about = "Bargmann invariants of pure-state tuples"
)]
struct Cli {
    /// Numerical tolerance for verdicts.
    #[arg(long, global = true, env = "BARGMANN_TOL", default_value_t = DEFAULT_TOL)]
    tol: f64,

    /// Write output to this file instead of standard output.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Invariant of a state tuple and its imaginarity verdict.
    Invariant {
        /// Tuple JSON file, `-` for standard input, or inline JSON.
        input: String,
    },
    /// Gram matrix operations.
    Gram {
        #[command(subcommand)]
        command: GramCommand,
    },
    /// Regions of reachable invariants.
    Region {
        #[command(subcommand)]
        command: RegionCommand,
    },
    /// Explicit qubit realizations.
    Synth {
        #[command(subcommand)]
        command: SynthCommand,
    },
    /// Seeded property suites.
    Harness {
        #[command(subcommand)]
        command: HarnessCommand,
    },
}

#[derive(Debug, Subcommand)]
enum GramCommand {
    /// PSD verdict, eigenvalues and rank.
    Check { input: String },
    /// A tuple of states with the given Gram matrix.
    Realize { input: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Polygon,
    Feasibility,
    Both,
}

#[derive(Debug, Subcommand)]
enum RegionCommand {
    /// Membership of an invariant value in the circulant set.
    Member {
        #[arg(long)]
        n: usize,
        /// Complex value as `re,im`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        z: Complex64,
        #[arg(long, value_enum, default_value_t = Method::Polygon)]
        method: Method,
    },
    /// Boundary curve samples as CSV.
    Boundary {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        samples: usize,
    },
    /// Largest imaginary part and where it is attained.
    Maximag {
        #[arg(long)]
        n: usize,
    },
    /// Real invariants reachable with real qubit states.
    Window {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Subcommand)]
enum SynthCommand {
    /// Qubit tuple for a member of the circulant set.
    Realize {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        z: Complex64,
    },
    /// Real qubit tuple for a real value in the window.
    Real {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        c: f64,
    },
    /// Shortest tuple for a point of the open unit disk.
    Disk {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        z: Complex64,
    },
}

#[derive(Debug, Subcommand)]
enum HarnessCommand {
    /// Run one property suite and print its report.
    Run {
        #[arg(long, value_parser = parse_property)]
        property: Property,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
    },
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s.split_once(',').ok_or("expected `re,im`")?;
    let part = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("'{p}': {e}"));
    Ok(Complex64::new(part(re)?, part(im)?))
}

fn parse_property(s: &str) -> Result<Property, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A failed command: exit code plus message.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotMember { .. }
            | Error::OutOfWindow { .. }
            | Error::OutsideClosure(_)
            | Error::NotPsd(_) => 1,
            Error::Tolerance(_) => 3,
            _ => 2,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

/// What a command produced, and the exit code that goes with it.
struct Output {
    body: String,
    code: u8,
}

impl Output {
    fn json(value: Value, code: u8) -> Self {
        let mut body =
            serde_json::to_string_pretty(&round_numbers(value)).expect("JSON values serialize");
        body.push('\n');
        Self { body, code }
    }
}

/// Rounds every float to 12 significant digits; integers pass through.
fn round_numbers(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            json!(round12(n.as_f64().expect("checked f64")))
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_numbers).collect()),
        Value::Object(o) => {
            Value::Object(o.into_iter().map(|(k, v)| (k, round_numbers(v))).collect())
        }
        other => other,
    }
}

fn round12(x: f64) -> f64 {
    format!("{x:.11e}").parse().expect("formatted float parses")
}

fn read_input(input: &str) -> Result<String, Failure> {
    if input == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::invalid(format!("reading standard input: {e}")))?;
        Ok(s)
    } else if input.trim_start().starts_with('{') {
        Ok(input.to_string())
    } else {
        fs::read_to_string(input).map_err(|e| Failure::invalid(format!("reading {input}: {e}")))
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(input: &str) -> Result<T, Failure> {
    serde_json::from_str(&read_input(input)?)
        .map_err(|e| Failure::invalid(format!("malformed JSON: {e}")))
}

fn run(cli: Cli) -> Result<Output, Failure> {
    let tol = cli.tol;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Failure::invalid(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    match cli.command {
        Command::Invariant { input } => {
            let t = StateTuple::try_from(parse_json::<StateTupleJson>(&input)?)?;
            let z = bargmann(&t);
            let imaginary = z.im.abs() > tol;
            Ok(Output::json(
                json!({
                    "n": t.len(),
                    "dim": t.dim(),
                    "value": to_pair(z),
                    "abs_imag": z.im.abs(),
                    "imaginary": imaginary,
                    "verdict": if imaginary { "basis-independent imaginary" } else { "real" },
                }),
                0,
            ))
        }
        Command::Gram { command } => gram(command, tol),
        Command::Region { command } => region(command),
        Command::Synth { command } => {
            let plan = match command {
                SynthCommand::Realize { n, z } => realize(z, n)?,
                SynthCommand::Real { n, c } => realize_real(c, n)?,
                SynthCommand::Disk { z } => realize_in_disk(z)?,
            };
            let v = serde_json::to_value(PlanJson::from(&plan)).expect("plans serialize");
            Ok(Output::json(v, 0))
        }
        Command::Harness {
            command:
                HarnessCommand::Run {
                    property,
                    trials,
                    seed,
                    n,
                    d,
                },
        } => {
            let mut cfg = harness::Config::new(property, trials, seed);
            if let Some(n) = n {
                cfg = cfg
                    .with_n(n)
                    .with_d(d.unwrap_or_else(|| property.default_d(n)));
            }
            if let Some(d) = d {
                cfg = cfg.with_d(d);
            }
            let report = harness::run(cfg)?;
            let code = if report.failures > 0 { 3 } else { 0 };
            Ok(Output::json(
                serde_json::to_value(&report).expect("reports serialize"),
                code,
            ))
        }
    }
}

fn gram(command: GramCommand, tol: f64) -> Result<Output, Failure> {
    match command {
        GramCommand::Check { input } => {
            let m = parse_json::<GramMatrixJson>(&input)?.to_matrix()?;
            // shape, Hermiticity and unit diagonal are input requirements
            match GramMatrix::new(m.clone()) {
                Ok(_) | Err(Error::NotPsd(_)) => {}
                Err(e) => return Err(e.into()),
            }
            let eig = hermitian_eig(&m)?.eigenvalues;
            let cut = scaled_tol(&eig, tol);
            let min = eig[0];
            let psd = min >= -cut;
            let rank = eig.iter().filter(|&&l| l > cut).count();
            Ok(Output::json(
                json!({ "psd": psd, "min_eigenvalue": min, "eigenvalues": eig, "rank": rank }),
                if psd { 0 } else { 1 },
            ))
        }
        GramCommand::Realize { input } => {
            let g = GramMatrix::try_from(parse_json::<GramMatrixJson>(&input)?)?;
            let t = realize_gram(&g)?;
            let v = serde_json::to_value(StateTupleJson::from(&t)).expect("tuples serialize");
            Ok(Output::json(v, 0))
        }
    }
}

fn region(command: RegionCommand) -> Result<Output, Failure> {
    match command {
        RegionCommand::Member { n, z, method } => {
            let mut out = serde_json::Map::new();
            out.insert("n".into(), json!(n));
            out.insert("z".into(), json!(to_pair(z)));
            let polygon = matches!(method, Method::Polygon | Method::Both)
                .then(|| in_bn_circ(z, n))
                .transpose()?;
            let feasible = matches!(method, Method::Feasibility | Method::Both)
                .then(|| in_zn(principal_root(z, n), n))
                .transpose()?;
            if let Some(p) = &polygon {
                out.insert(
                    "polygon".into(),
                    json!({ "member": p.member, "margin": p.margin, "boundary": p.boundary }),
                );
            }
            if let Some(f) = &feasible {
                let mut o = json!({
                    "member": f.member,
                    "max_min_eigenvalue": f.max_min_eigenvalue,
                    "boundary": f.boundary,
                });
                if let Some(spec) = &f.spec {
                    o["spec"] = serde_json::to_value(CirculantSpecJson::from(spec))
                        .expect("specs serialize");
                }
                out.insert("feasibility".into(), o);
            }
            let member = polygon
                .as_ref()
                .map(|p| p.member)
                .or(feasible.as_ref().map(|f| f.member));
            let mut code = if member == Some(true) { 0 } else { 1 };
            if let (Some(p), Some(f)) = (&polygon, &feasible) {
                let agree = p.member == f.member;
                out.insert("agree".into(), json!(agree));
                if !agree && !p.boundary && !f.boundary {
                    code = 3;
                }
            }
            out.insert("member".into(), json!(member == Some(true)));
            Ok(Output::json(Value::Object(out), code))
        }
        RegionCommand::Boundary { n, samples } => {
            if samples < 2 {
                return Err(Failure::invalid("need at least 2 samples"));
            }
            let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
            let csv_err = |e: csv::Error| Failure::invalid(e.to_string());
            w.write_record([
                "n",
                "t",
                "re(z1)",
                "im(z1)",
                "re(value)",
                "im(value)",
                "r",
                "phi",
            ])
            .map_err(csv_err)?;
            for i in 0..samples {
                let t = 1.0 - i as f64 / (samples - 1) as f64;
                let s = boundary_sample(n, t)?;
                let nums = [t, s.z1.re, s.z1.im, s.value.re, s.value.im, s.r, s.phi];
                let mut row = vec![n.to_string()];
                row.extend(nums.iter().map(|&x| format!("{:?}", round12(x))));
                w.write_record(&row).map_err(csv_err)?;
            }
            let bytes = w
                .into_inner()
                .map_err(|e| Failure::invalid(e.to_string()))?;
            Ok(Output {
                body: String::from_utf8(bytes).expect("CSV of numbers is UTF-8"),
                code: 0,
            })
        }
        RegionCommand::Maximag { n } => {
            let m = max_imaginarity(n)?;
            Ok(Output::json(
                serde_json::to_value(m).expect("serializes"),
                0,
            ))
        }
        RegionCommand::Window { n } => {
            let (lo, hi) = real_window(n)?;
            Ok(Output::json(json!({ "n": n, "lo": lo, "hi": hi }), 0))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.output.clone();
    match run(cli) {
        Ok(out) => {
            let written = match &output {
                Some(path) => fs::write(path, &out.body),
                None => io::stdout().lock().write_all(out.body.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: writing output: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
