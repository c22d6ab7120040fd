//! `lnd-lab`: command-line front end for lndlab.
//!
//! Exit codes: 0 verified, 1 not verified at the given bounds, 2 usage or
//! parse error, 3 internal invariant failure.

mod commands;
mod input;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{Map, Value};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

/// What a command hands back: its verdict and the report body.
pub struct Outcome {
    pub verdict: bool,
    pub body: Map<String, Value>,
}

#[derive(Parser, Debug)]
#[command(name = "lnd-lab", version, about = "Locally nilpotent derivations, overshears and flows on affine varieties")]
pub struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized sampling.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Input {
    /// Built-in bundle: cn:<n>, danielewski:p=<poly>:n=<k>, sl2, gl2, koras-russell.
    #[arg(long)]
    pub bundle: Option<String>,
    /// JSON spec file with a variety and named derivations.
    #[arg(long)]
    pub spec: Option<std::path::PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and print a polynomial in canonical form.
    Parse {
        poly: String,
        /// Variables, comma separated; inferred from the text when absent.
        #[arg(long, value_delimiter = ',')]
        vars: Option<Vec<String>>,
        #[command(flatten)]
        input: Input,
    },
    /// Reduced Gröbner basis of a variety's ideal or of explicit generators.
    Gb {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_delimiter = ',')]
        vars: Option<Vec<String>>,
        /// Generator polynomial; repeatable.
        #[arg(long = "gen")]
        gens: Vec<String>,
        /// grevlex or lex.
        #[arg(long, default_value = "grevlex")]
        order: String,
        /// Variable precedence, comma separated.
        #[arg(long, value_delimiter = ',')]
        precedence: Option<Vec<String>>,
    },
    /// Certify local nilpotency by iterating on generators.
    CheckLnd {
        #[command(flatten)]
        input: Input,
        /// Derivation name or comma-separated images.
        #[arg(long)]
        derivation: String,
        #[arg(long, default_value_t = 64)]
        max_iter: usize,
    },
    /// Lie bracket of two derivations.
    Bracket {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// The shear f·D of an LND D, requiring D(f) = 0.
    Shear {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        derivation: String,
        #[arg(long)]
        f: String,
    },
    /// The overshear f·D of an LND D, requiring D²(f) = 0.
    Overshear {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        derivation: String,
        #[arg(long)]
        f: String,
    },
    /// Flow of an LND, or of the overshear f·D when --f is given.
    Flow {
        #[command(flatten)]
        input: Input,
        /// Derivation or overshear-sample name, or comma-separated images.
        #[arg(long)]
        derivation: String,
        #[arg(long)]
        f: Option<String>,
        /// Exact rational (e.g. 1/2) or float time.
        #[arg(long)]
        time: Option<String>,
        /// Point to push along the flow, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// Rank of LND values against the tangent space at points.
    Flex {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        /// Derivation names, comma separated; all by default.
        #[arg(long, value_delimiter = ',')]
        derivations: Option<Vec<String>>,
        /// Additionally test this many random rational points (affine spaces only).
        #[arg(long, default_value_t = 0)]
        random: usize,
    },
    /// Lie-saturation of overshear generators up to degree and length bounds.
    Saturate {
        #[command(flatten)]
        input: Input,
        /// Degree bound for overshear multipliers.
        #[arg(long)]
        gen_deg: u32,
        #[arg(long)]
        target_deg: u32,
        /// Defaults to max(target-deg, gen-deg) + 1.
        #[arg(long)]
        work_deg: Option<u32>,
        #[arg(long)]
        max_len: usize,
        #[arg(long, value_delimiter = ',')]
        derivations: Option<Vec<String>>,
    },
    /// Check a compatible pair of LNDs up to a degree bound.
    Compat {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        theta: Option<String>,
        #[arg(long)]
        xi: Option<String>,
        /// Ideal generator; repeatable.
        #[arg(long = "ideal")]
        ideal: Vec<String>,
        #[arg(long, default_value_t = 2)]
        bound: u32,
    },
    /// Nonconstant units and whether the LNDs annihilate them.
    Unit {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        f: Option<String>,
        #[arg(long)]
        g: Option<String>,
    },
    /// Tame decomposition of a plane polynomial map.
    Decompose {
        /// Comma-separated images, e.g. "y, x + y^2".
        #[arg(long)]
        map: String,
        #[arg(long, value_delimiter = ',', default_value = "x,y")]
        vars: Vec<String>,
        #[arg(long, default_value_t = 64)]
        max_steps: usize,
    },
    /// Maximum deviation of two maps on a real grid.
    Compare {
        #[command(flatten)]
        input: Input,
        /// First map as comma-separated images.
        #[arg(long)]
        f: Option<String>,
        /// Use the flow of this derivation as the first map.
        #[arg(long)]
        flow: Option<String>,
        /// Overshear multiplier for --flow.
        #[arg(long)]
        mult: Option<String>,
        #[arg(long)]
        time: Option<String>,
        #[arg(long)]
        g: String,
        /// Variables when no --bundle/--spec is given.
        #[arg(long, value_delimiter = ',', default_value = "x,y")]
        vars: Vec<String>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        center: f64,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Finite-difference check of the bracket through the flow of an LND.
    BracketFd {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        theta: String,
        #[arg(long)]
        tilde: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long, default_value_t = 1e-4)]
        t: f64,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
    },
    /// List or show built-in bundles.
    Bundle {
        #[command(subcommand)]
        action: BundleAction,
    },
}

#[derive(Subcommand, Debug)]
pub enum BundleAction {
    List,
    Show { spec: String },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Parse { .. } => "parse",
            Command::Gb { .. } => "gb",
            Command::CheckLnd { .. } => "check-lnd",
            Command::Bracket { .. } => "bracket",
            Command::Shear { .. } => "shear",
            Command::Overshear { .. } => "overshear",
            Command::Flow { .. } => "flow",
            Command::Flex { .. } => "flex",
            Command::Saturate { .. } => "saturate",
            Command::Compat { .. } => "compat",
            Command::Unit { .. } => "unit",
            Command::Decompose { .. } => "decompose",
            Command::Compare { .. } => "compare",
            Command::BracketFd { .. } => "bracket-fd",
            Command::Bundle { .. } => "bundle",
        }
    }
}

fn init_threads() {
    if let Some(n) = std::env::var("LND_LAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // A second initialisation only fails if a pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn render_text(command: &str, out: &Outcome) -> String {
    let mut s = format!("{command}: {}\n", if out.verdict { "verified" } else { "not verified" });
    for (k, v) in &out.body {
        let shown = match v {
            Value::String(t) => t.clone(),
            other => other.to_string(),
        };
        s.push_str(&format!("  {k}: {shown}\n"));
    }
    s
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    init_threads();
    let name = cli.command.name();
    match commands::run(&cli) {
        Ok(out) => {
            if cli.json {
                let mut report = out.body.clone();
                report.insert("schema".into(), Value::from(1));
                report.insert("command".into(), Value::from(name));
                report.insert("verdict".into(), Value::from(out.verdict));
                report.insert("inputs".into(), serde_json::json!({ "argv": argv[1..].to_vec() }));
                println!("{}", serde_json::to_string_pretty(&Value::Object(report)).expect("serializable"));
            } else {
                print!("{}", render_text(name, &out));
            }
            ExitCode::from(if out.verdict { 0 } else { 1 })
        }
        Err(e) => {
            let msg = match &e {
                CliError::Usage(m) => format!("error: {m}"),
                CliError::Internal(m) => format!("internal error: {m}"),
            };
            eprintln!("{msg}");
            ExitCode::from(e.code())
        }
    }
}
