//! `squeeze` command-line front end.
//!
//! Every command writes one document to standard output. Exit status is 0 on
//! success, 1 for malformed input or domain violations, and 2 when
//! certification itself fails.

use std::io::Read;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::bernoulli::{coeff_prefix, Family};
use crate::certifier::{verify_certificate, Certificate};
use crate::constants::{best_constant, certify_squeeze, max_error, scan};
use crate::error::Error;
use crate::kernel::{ExactRational, Rounding};
use crate::report::{
    coeffs_csv, scan_csv, CoeffRow, OutputDocument, DECIMAL_DIGITS, SCHEMA_VERSION,
};
use crate::settings::Settings;

#[derive(Parser, Debug)]
#[command(
    name = "squeeze",
    version,
    about = "Certified exponential bounds for cos x and x/tan x"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact series coefficients γ_1..γ_N.
    Coeffs {
        #[arg(long)]
        family: String,
        #[arg(long)]
        upto: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Enclosure of the best constant -log h(x0)/x0².
    Constant {
        #[arg(long)]
        family: String,
        #[arg(long)]
        x0: String,
        #[arg(long, default_value = "1e-7")]
        width: String,
    },
    /// Certify both sides of the squeeze inequality on (0, x0).
    Certify {
        #[arg(long)]
        family: String,
        #[arg(long)]
        x0: String,
        #[arg(long, default_value = "1e-7")]
        width: String,
    },
    /// Location t0 and size δ of the largest approximation error.
    Error {
        #[arg(long)]
        family: String,
        #[arg(long)]
        x0: String,
        #[arg(long, default_value = "1e-6")]
        tol: String,
    },
    /// Best constant, t0 and δ over a uniform grid of x0.
    Scan {
        #[arg(long)]
        family: String,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        steps: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Re-check certificates from a file (`-` for stdin).
    Verify {
        #[arg(long = "in")]
        input: String,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Coeffs { .. } => "coeffs",
            Command::Constant { .. } => "constant",
            Command::Certify { .. } => "certify",
            Command::Error { .. } => "error",
            Command::Scan { .. } => "scan",
            Command::Verify { .. } => "verify",
        }
    }
}

/// Exit status and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// A failed command: exit code plus reason.
struct Failure {
    code: i32,
    reason: String,
    results: Value,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_certification_failure() { 2 } else { 1 },
            reason: e.to_string(),
            results: Value::Null,
        }
    }
}

enum Payload {
    Json(Value),
    Text(String),
}

struct Invocation<'a> {
    inputs: Map<String, Value>,
    settings: Settings,
    stdin: &'a mut dyn Read,
}

impl Invocation<'_> {
    fn rational(&mut self, key: &str, text: &str) -> Result<ExactRational, Failure> {
        let r: ExactRational = text.parse()?;
        self.inputs
            .insert(key.to_string(), Value::String(r.to_string()));
        Ok(r)
    }

    fn family(&mut self, text: &str) -> Result<Family, Failure> {
        let f: Family = text.parse()?;
        self.inputs
            .insert("family".into(), Value::String(f.tag().into()));
        Ok(f)
    }

    fn positive(&mut self, key: &str, text: &str) -> Result<ExactRational, Failure> {
        let r = self.rational(key, text)?;
        if !r.is_positive() {
            return Err(Error::InvalidArgument(format!("--{key} must be positive")).into());
        }
        Ok(r)
    }

    fn execute(&mut self, command: Command) -> Result<Payload, Failure> {
        let st = self.settings;
        match command {
            Command::Coeffs {
                family,
                upto,
                format,
            } => {
                let fam = self.family(&family)?;
                self.inputs.insert("upto".into(), json!(upto));
                let rows: Vec<CoeffRow> = coeff_prefix(fam, upto)?
                    .into_iter()
                    .enumerate()
                    .map(|(i, c)| CoeffRow {
                        k: i + 1,
                        decimal: c.to_decimal_directed(DECIMAL_DIGITS, Rounding::Down),
                        coefficient: c,
                    })
                    .collect();
                Ok(match format {
                    Format::Csv => Payload::Text(coeffs_csv(&rows)),
                    Format::Json => Payload::Json(json!({ "family": fam, "rows": rows })),
                })
            }
            Command::Constant { family, x0, width } => {
                let fam = self.family(&family)?;
                let x0 = self.rational("x0", &x0)?;
                let width = self.positive("width", &width)?;
                let enc = best_constant(fam, &x0, &width, &st)?;
                Ok(Payload::Json(
                    json!({ "family": fam, "x0": x0, "best_constant": enc }),
                ))
            }
            Command::Certify { family, x0, width } => {
                let fam = self.family(&family)?;
                let x0 = self.rational("x0", &x0)?;
                let width = self.positive("width", &width)?;
                let result = certify_squeeze(fam, &x0, &width, &st)?;
                Ok(Payload::Json(to_value(&result)))
            }
            Command::Error { family, x0, tol } => {
                let fam = self.family(&family)?;
                let x0 = self.rational("x0", &x0)?;
                let tol = self.positive("tol", &tol)?;
                let report = max_error(fam, &x0, &tol, &st)?;
                Ok(Payload::Json(to_value(&report)))
            }
            Command::Scan {
                family,
                from,
                to,
                steps,
                format,
            } => {
                let fam = self.family(&family)?;
                let from = self.rational("from", &from)?;
                let to = self.rational("to", &to)?;
                self.inputs.insert("steps".into(), json!(steps));
                let rows = scan(fam, &from, &to, steps, &st)?;
                Ok(match format {
                    Format::Csv => Payload::Text(scan_csv(&rows)),
                    Format::Json => Payload::Json(json!({ "family": fam, "rows": rows })),
                })
            }
            Command::Verify { input } => {
                self.inputs
                    .insert("in".into(), Value::String(input.clone()));
                let text = self.read_input(&input)?;
                let doc: Value = serde_json::from_str(&text)
                    .map_err(|e| Error::InvalidArgument(format!("input is not JSON: {e}")))?;
                let certs = collect_certificates(&doc)?;
                let checks: Vec<Value> = certs
                    .iter()
                    .map(|(path, c)| {
                        let v = verify_certificate(c, &st);
                        json!({ "path": path, "kind": c.kind, "family": c.family, "valid": v.valid, "reasons": v.reasons })
                    })
                    .collect();
                let all_valid = checks.iter().all(|c| c["valid"] == Value::Bool(true));
                let results = json!({ "valid": all_valid, "certificates": checks });
                if all_valid {
                    Ok(Payload::Json(results))
                } else {
                    Err(Failure {
                        code: 2,
                        reason: "certificate verification failed".into(),
                        results,
                    })
                }
            }
        }
    }

    fn read_input(&mut self, path: &str) -> Result<String, Failure> {
        let mut text = String::new();
        let res = if path == "-" {
            self.stdin.read_to_string(&mut text).map(|_| ())
        } else {
            std::fs::read_to_string(path).map(|t| text = t)
        };
        res.map_err(|e| Error::InvalidArgument(format!("cannot read {path}: {e}")))?;
        Ok(text)
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

/// Certificates found in a `certify` document, a bare certificate, or a
/// list of certificates.
fn collect_certificates(doc: &Value) -> Result<Vec<(String, Certificate)>, Failure> {
    fn parse(path: &str, v: &Value) -> Result<(String, Certificate), Failure> {
        serde_json::from_value(v.clone())
            .map(|c| (path.to_string(), c))
            .map_err(|e| {
                Error::InvalidArgument(format!("{path}: malformed certificate: {e}")).into()
            })
    }
    let root = doc.get("results").unwrap_or(doc);
    let mut out = Vec::new();
    if root.get("kind").is_some() {
        out.push(parse("certificate", root)?);
    } else if let Some(items) = root.as_array() {
        for (i, v) in items.iter().enumerate() {
            out.push(parse(&format!("[{i}]"), v)?);
        }
    } else {
        for key in ["lower_cert", "upper_cert"] {
            if let Some(v) = root.get(key) {
                out.push(parse(key, v)?);
            }
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidArgument("no certificate found in input".into()).into());
    }
    Ok(out)
}

fn render(doc: &OutputDocument) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("document serializes");
    s.push('\n');
    s
}

/// Runs one invocation. `args[0]` is the program name.
pub fn run<I, S>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let guessed = args
        .get(1)
        .map(|a| a.to_string_lossy().into_owned())
        .unwrap_or_default();
    let error_doc = |command: String, inputs: Map<String, Value>, f: Failure| OutputDocument {
        schema_version: SCHEMA_VERSION.into(),
        command,
        inputs,
        results: f.results,
        status: "error".into(),
        error_reason: Some(f.reason),
    };

    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome {
                    code: 0,
                    stdout: e.to_string(),
                    stderr: String::new(),
                };
            }
            let reason = e.to_string();
            let doc = error_doc(
                guessed,
                Map::new(),
                Failure {
                    code: 1,
                    reason: reason.trim().to_string(),
                    results: Value::Null,
                },
            );
            return Outcome {
                code: 1,
                stdout: render(&doc),
                stderr: reason,
            };
        }
    };

    let command_name = cli.command.name().to_string();
    let settings = match Settings::from_env() {
        Ok(s) => s,
        Err(e) => {
            let msg = e.to_string();
            let doc = error_doc(command_name, Map::new(), e.into());
            return Outcome {
                code: 1,
                stdout: render(&doc),
                stderr: msg + "\n",
            };
        }
    };
    let mut inv = Invocation {
        inputs: Map::new(),
        settings,
        stdin,
    };
    match inv.execute(cli.command) {
        Ok(Payload::Text(text)) => Outcome {
            code: 0,
            stdout: text,
            stderr: String::new(),
        },
        Ok(Payload::Json(results)) => {
            let doc = OutputDocument {
                schema_version: SCHEMA_VERSION.into(),
                command: command_name,
                inputs: inv.inputs,
                results,
                status: "ok".into(),
                error_reason: None,
            };
            Outcome {
                code: 0,
                stdout: render(&doc),
                stderr: String::new(),
            }
        }
        Err(f) => {
            let code = f.code;
            let msg = format!("squeeze {command_name}: {}\n", f.reason);
            let doc = error_doc(command_name, inv.inputs, f);
            Outcome {
                code,
                stdout: render(&doc),
                stderr: msg,
            }
        }
    }
}
