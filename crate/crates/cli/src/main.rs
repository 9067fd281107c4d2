use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use formdiag::form::{form_from_gram, gram_tensor, parse_form, parse_scalar, SymTensor};
use formdiag::{
    decompose_with, odeco_precheck, DecomposeOptions, Error, Field, FieldConfig, Form, Report,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "formdiag", version, about = "Decompose higher degree forms through their centers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a form and print its decomposition.
    Decompose(DecomposeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(clap::Args)]
struct DecomposeArgs {
    /// Homogeneous polynomial in x1..xn, e.g. "x1^4+x2^4+6*x1^2*x2^2".
    #[arg(required_unless_present = "tensor", conflicts_with = "tensor")]
    poly: Option<String>,
    /// JSON file with entries [{"index": [1, 1, 2], "value": "3/2"}, ...] (1-based sorted indices).
    #[arg(long)]
    tensor: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    /// Square root of this squarefree integer is adjoined to Q (repeatable).
    #[arg(long, allow_negative_numbers = true)]
    adjoin: Vec<i64>,
    /// Further square roots the splitter may adjoin on its own.
    #[arg(long, default_value_t = 2)]
    max_adjoin: usize,
    /// Zero threshold in float mode.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random elements tried per center.
    #[arg(long, default_value_t = 8)]
    retries: usize,
    #[arg(long, conflicts_with = "text")]
    json: bool,
    #[arg(long)]
    text: bool,
    /// Only run the commuting-slices screen for orthogonal decomposability.
    #[arg(long)]
    odeco_only: bool,
}

fn config(args: &DecomposeArgs) -> Result<FieldConfig, String> {
    let cfg = match args.mode {
        ModeArg::Exact => {
            if args.tol.is_some() {
                return Err("--tol only applies with --mode float".into());
            }
            FieldConfig::exact(&args.adjoin)
        }
        ModeArg::Float => {
            if !args.adjoin.is_empty() {
                return Err("--adjoin only applies with --mode exact".into());
            }
            let tol = args.tol.unwrap_or(formdiag::scalar::DEFAULT_TOLERANCE);
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(format!("tolerance must be positive, got {tol}"));
            }
            FieldConfig::float(tol)
        }
    };
    Ok(cfg.with_max_adjoin(args.max_adjoin))
}

fn read_tensor(path: &PathBuf, field: &Field) -> Result<Form, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let entries = value.as_array().ok_or("tensor file must hold a JSON list")?;
    let mut parsed = Vec::new();
    for (k, entry) in entries.iter().enumerate() {
        let index: Vec<usize> = entry
            .get("index")
            .and_then(Value::as_array)
            .ok_or(format!("entry {k}: missing \"index\" list"))?
            .iter()
            .map(|i| i.as_u64().filter(|&i| i >= 1).map(|i| i as usize - 1))
            .collect::<Option<_>>()
            .ok_or(format!("entry {k}: indices must be positive integers"))?;
        let value = match entry.get("value") {
            Some(Value::String(s)) => s.clone(),
            Some(Value::Number(x)) => x.to_string(),
            _ => return Err(format!("entry {k}: missing \"value\"")),
        };
        let value = parse_scalar(&value, field).map_err(|e| format!("entry {k}: {e}"))?;
        parsed.push((index, value));
    }
    let d = parsed.first().map(|(i, _)| i.len()).ok_or("tensor file has no entries")?;
    if parsed.iter().any(|(i, _)| i.len() != d) {
        return Err("all indices must have the same length".into());
    }
    if d < 3 {
        return Err(Error::DegreeTooLow(d as u32).to_string());
    }
    let n = parsed.iter().flat_map(|(i, _)| i.iter()).max().unwrap() + 1;
    let mut a = SymTensor::zero(n, d as u32, field);
    for (index, value) in parsed {
        a.set(&index, value).map_err(|e| e.to_string())?;
    }
    Ok(form_from_gram(&a))
}

fn run(args: &DecomposeArgs) -> Result<String, String> {
    let cfg = config(args)?;
    let field = cfg.field().map_err(|e| e.to_string())?;
    let (input, f) = match (&args.poly, &args.tensor) {
        (Some(text), _) => (text.clone(), parse_form(text, &field).map_err(|e| e.to_string())?),
        (None, Some(path)) => {
            let f = read_tensor(path, &field)?;
            (f.to_string(), f)
        }
        (None, None) => return Err("give a polynomial or --tensor".into()),
    };
    let start = Instant::now();
    let screen = match odeco_precheck(&gram_tensor(&f)) {
        Ok(b) => Some(b),
        Err(Error::NotReal) => None,
        Err(e) => return Err(e.to_string()),
    };
    if args.odeco_only {
        let report = json!({
            "input": input,
            "n": f.n(),
            "d": f.d(),
            "odeco_precheck": screen,
            "timing_ms": start.elapsed().as_secs_f64() * 1e3,
        });
        return Ok(if args.text {
            match screen {
                Some(b) => format!("odeco precheck: {b}"),
                None => "odeco precheck: not applicable (complex coefficients)".into(),
            }
        } else {
            serde_json::to_string_pretty(&report).expect("serializes")
        });
    }
    let opts = DecomposeOptions {
        retries: args.retries,
        seed: args.seed,
    };
    let dec = decompose_with(&f, &cfg, &opts).map_err(|e| e.to_string())?;
    let report = Report::new(&input, &f, &dec, screen, start.elapsed().as_secs_f64() * 1e3);
    Ok(if args.text { report.to_text() } else { report.to_json() })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Decompose(args) => match run(&args) {
            Ok(out) => {
                let _ = writeln!(std::io::stdout().lock(), "{out}");
                ExitCode::SUCCESS
            }
            Err(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
        },
    }
}
