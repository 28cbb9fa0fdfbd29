//! Command-line front end. [`main_with`] is the whole program minus process
//! plumbing, so it can be driven from tests.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use crate::classify::check_inductive;
use crate::engine::{run, AlbaResult, Status, TraceStepJson};
use crate::fol::{correspondent, FOSentence};
use crate::semantics::{correspondence_check, MAX_ENUMERATED_WORLDS};
use crate::syntax::{parse_inequality, Inequality};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_COUNTEREXAMPLE: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputKind {
    Fo,
    Quasi,
    Trace,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Compute first-order correspondents of inductive modal inequalities.
#[derive(Debug, Parser)]
#[command(name = "alba", version)]
pub struct RunConfig {
    /// Inequality such as "T <= box(box p -> p)"
    #[arg(required_unless_present = "file", conflicts_with = "file")]
    pub inequality: Option<String>,

    /// Read inequalities from a file, one per line (blank lines and lines
    /// starting with '#' are skipped)
    #[arg(long, value_name = "PATH")]
    pub file: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = OutputKind::Fo)]
    pub output: OutputKind,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Check the correspondent against the inequality on every frame with
    /// at most N worlds
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(1..=MAX_ENUMERATED_WORLDS as u64))]
    pub verify: Option<u64>,

    /// Print the raw standard translation
    #[arg(long)]
    pub no_simplify: bool,

    /// Only classify the input and print the certificate or failure as JSON
    #[arg(long)]
    pub check_inductive: bool,
}

pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    execute(&config, out, err)
}

pub fn execute(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let inputs: Vec<String> = match (&config.inequality, &config.file) {
        (Some(text), None) => vec![text.clone()],
        (None, Some(path)) => match std::fs::read_to_string(path) {
            Ok(content) => content
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(String::from)
                .collect(),
            Err(e) => {
                let _ = writeln!(err, "error: cannot read {}: {e}", path.display());
                return EXIT_USAGE;
            }
        },
        _ => {
            let _ = writeln!(err, "error: give exactly one of an inequality or --file");
            return EXIT_USAGE;
        }
    };
    let many = inputs.len() > 1;
    let mut code = EXIT_OK;
    for input in &inputs {
        if many && config.format == Format::Text {
            let _ = writeln!(out, "== {input}");
        }
        code = code.max(process(config, input, out, err));
    }
    code
}

fn process(config: &RunConfig, input: &str, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let ineq = match parse_inequality(input) {
        Ok(i) => i,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if config.format == Format::Json {
                emit_json(out, json!({"input": input, "status": "error", "error": e.to_string()}));
            }
            return EXIT_USAGE;
        }
    };
    if config.check_inductive {
        return classify_only(&ineq, input, out);
    }

    let result = run(&ineq);
    if result.status == Status::Failure {
        let reason = result.failure.as_ref().map(ToString::to_string).unwrap_or_default();
        match config.format {
            Format::Text => {
                let _ = writeln!(out, "failure: {reason}");
                if matches!(config.output, OutputKind::Trace | OutputKind::All) {
                    write_traces(out, &result);
                }
            }
            Format::Json => {
                let mut obj = json!({"input": input, "status": "failure", "failure": reason});
                if matches!(config.output, OutputKind::Trace | OutputKind::All) {
                    obj["traces"] = traces_json(&result);
                }
                emit_json(out, obj);
            }
        }
        return EXIT_FAILURE;
    }

    let sentence = correspondent(&result.quasis, !config.no_simplify).expect("successful runs produce pure quasi-inequalities");
    let report = config
        .verify
        .map(|n| correspondence_check(&ineq, &sentence, n as usize).expect("bound validated by the argument parser"));
    let code = match &report {
        Some(r) if !r.agrees() => EXIT_COUNTEREXAMPLE,
        _ => EXIT_OK,
    };
    let show = |k: OutputKind| config.output == k || config.output == OutputKind::All;

    match config.format {
        Format::Text => {
            if show(OutputKind::Quasi) {
                for q in &result.quasis {
                    let _ = writeln!(out, "{q}");
                }
            }
            if show(OutputKind::Trace) {
                write_traces(out, &result);
            }
            if show(OutputKind::Fo) {
                let _ = writeln!(out, "{sentence}");
            }
            if let Some(r) = &report {
                let _ = writeln!(out, "{r}");
            }
        }
        Format::Json => {
            let mut obj = json!({"input": input, "status": "success"});
            if show(OutputKind::Quasi) {
                obj["quasis"] = result.quasis.iter().map(|q| q.to_string()).collect();
            }
            if show(OutputKind::Trace) {
                obj["traces"] = traces_json(&result);
            }
            if show(OutputKind::Fo) {
                obj["fo"] = fo_json(&sentence);
            }
            if let Some(r) = &report {
                obj["verify"] = serde_json::to_value(r).expect("report serializes");
            }
            emit_json(out, obj);
        }
    }
    code
}

fn classify_only(ineq: &Inequality, input: &str, out: &mut dyn Write) -> i32 {
    let (obj, code) = match check_inductive(ineq) {
        Ok(cert) => (json!({"input": input, "inductive": true, "certificate": cert}), EXIT_OK),
        Err(reason) => (
            json!({"input": input, "inductive": false, "failure": reason, "message": reason.to_string()}),
            EXIT_FAILURE,
        ),
    };
    emit_json(out, obj);
    code
}

fn fo_json(s: &FOSentence) -> Value {
    json!({"text": s.to_string(), "ast": s})
}

fn traces_json(result: &AlbaResult) -> Value {
    result
        .systems
        .iter()
        .zip(&result.traces)
        .map(|(sys, trace)| {
            json!({
                "initial": sys.inequalities.iter().map(|i| i.to_string()).collect::<Vec<_>>(),
                "steps": trace.iter().map(TraceStepJson::from).collect::<Vec<_>>(),
            })
        })
        .collect()
}

fn write_traces(out: &mut dyn Write, result: &AlbaResult) {
    for (k, (sys, trace)) in result.systems.iter().zip(&result.traces).enumerate() {
        let initial: Vec<String> = sys.inequalities.iter().map(|i| i.to_string()).collect();
        let _ = writeln!(out, "system {k}: {}", initial.join(", "));
        for step in trace {
            let _ = writeln!(out, "  {step}");
        }
    }
}

fn emit_json(out: &mut dyn Write, value: Value) {
    let _ = writeln!(out, "{value}");
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("alba").chain(args.iter().copied());
        let code = main_with(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn worked_example_prints_correspondent() {
        let (code, out, _) = call(&["T <= box(box p -> p)", "--output", "fo"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out, "A i0. A i1. (R(i0,i1) -> R(i1,i1))\n");
    }

    #[test]
    fn quasi_output() {
        let (code, out, _) = call(&["T <= box(box p -> p)", "--output", "quasi"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out, "box m1 <= m0 & i1 -> m2 <= m1 & bdiam i1 <= m2 => i0 <= m0\n");
    }

    #[test]
    fn non_inductive_input_fails() {
        let (code, out, _) = call(&["p <= q"]);
        assert_eq!(code, EXIT_FAILURE);
        assert!(out.starts_with("failure: not an inductive inequality"), "{out}");
    }

    #[test]
    fn parse_errors_are_usage_errors() {
        let (code, out, err) = call(&["p <= "]);
        assert_eq!(code, EXIT_USAGE);
        assert!(out.is_empty());
        assert!(err.contains("parse error"));
        assert_eq!(call(&[]).0, EXIT_USAGE);
        assert_eq!(call(&["p <= p", "--verify", "0"]).0, EXIT_USAGE);
    }

    #[test]
    fn verification_success() {
        let (code, out, _) = call(&["box p <= p", "--verify", "3"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("A i0. R(i0,i0)"));
        assert!(out.contains("verified on all frames n<=3"));
    }

    #[test]
    fn check_inductive_emits_json() {
        let (code, out, _) = call(&["T <= box(box p -> p)", "--check-inductive"]);
        assert_eq!(code, EXIT_OK);
        let v: Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(v["inductive"], true);
        let (code, out, _) = call(&["p <= q", "--check-inductive"]);
        assert_eq!(code, EXIT_FAILURE);
        let v: Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(v["failure"]["reason"], "polarity");
    }

    #[test]
    fn json_output_has_requested_parts() {
        let (code, out, _) = call(&["box p <= p", "--output", "all", "--format", "json", "--verify", "2"]);
        assert_eq!(code, EXIT_OK);
        let v: Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(v["status"], "success");
        assert_eq!(v["fo"]["text"], "A i0. R(i0,i0)");
        assert_eq!(v["quasis"].as_array().unwrap().len(), 1);
        assert!(v["traces"][0]["steps"].is_array());
        assert_eq!(v["verify"]["counterexamples"], json!([]));
    }
}
