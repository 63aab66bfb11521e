//! The `anth` command-line front end.
//!
//! Every command builds one output document
//! `{command, inputs, result, version}`. `--json` prints it as JSON; the
//! default text form prints one `key: value` line per input and result field,
//! with the same values. Integers are always exact decimals.
//!
//! Exit codes: 0 success, 1 check failed, 2 usage or parse error.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_bigint::BigUint;
use num_rational::Ratio;
use serde_json::{json, Map, Number, Value};

use crate::anth::{
    anth_pair_bounded, canonical_expansion, euclid_anth, surd_anth_bounded, Expansion,
    ExpansionKind, DEFAULT_MAX_STEPS,
};
use crate::approximants::convergents;
use crate::dialectic::{dialectic_number_exp, dialectic_number_seq, remainder_classes, TermSequence};
use crate::division::{check_logos, parse_tree_bytes, render_tree};
use crate::literal::parse_surd;
use crate::surd::QuadraticSurd;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "anth", version, about = "Exact anthyphairesis of naturals and quadratic surds")]
struct Cli {
    /// Print the machine-readable document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Safety bound on expansion iterations.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_STEPS, value_name = "N")]
    max_steps: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Euclidean anthyphairesis of two positive integers.
    Gcd { a: String, b: String },
    /// Expand a surd literal such as `sqrt(2)`, `7/3` or `(1+1*sqrt(5))/2`.
    Expand {
        #[arg(allow_hyphen_values = true)]
        literal: String,
    },
    /// Decide whether a/b = c/d by comparing anthyphaireses.
    Prop {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(allow_hyphen_values = true)]
        c: String,
        #[arg(allow_hyphen_values = true)]
        d: String,
    },
    /// Convergents p/q of a surd literal.
    Convergents {
        #[arg(allow_hyphen_values = true)]
        literal: String,
        #[arg(short = 'n', long = "count", default_value_t = 10)]
        count: usize,
    },
    /// Dialectic number of an integer sequence, or of a surd's remainders.
    Dialectic {
        /// Finite terms, or the prefix when --cycle is given.
        terms: Vec<String>,
        /// Terms of a cycle repeated forever after the prefix.
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        cycle: Vec<String>,
        /// Factor applied to each repetition of the cycle, `p` or `p/q`.
        #[arg(long, requires = "cycle")]
        growth: Option<String>,
        /// Count remainder-ratio classes of a surd literal instead.
        #[arg(long, conflicts_with_all = ["terms", "cycle", "growth"], allow_hyphen_values = true)]
        surd: Option<String>,
    },
    /// Division trees with Logos declarations.
    Tree {
        #[command(subcommand)]
        action: TreeAction,
    },
}

#[derive(Debug, Subcommand)]
enum TreeAction {
    /// Validate the declarations and report period and dialectic number.
    Check { file: PathBuf },
    /// Print the canonical form of a tree file.
    Fmt { file: PathBuf },
}

/// What one invocation produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.to_string(),
    }
}

/// An exact integer as a JSON number of any size.
pub fn decimal(n: impl ToString) -> Value {
    let n: Number = n.to_string().parse().expect("integers are valid JSON numbers");
    Value::Number(n)
}

fn decimals<T: ToString>(v: &[T]) -> Value {
    Value::Array(v.iter().map(|x| decimal(x.to_string())).collect())
}

fn surd_fields(x: &QuadraticSurd) -> Value {
    json!({
        "a": decimal(x.a()),
        "b": decimal(x.b()),
        "c": decimal(x.c()),
        "d": decimal(x.radicand()),
    })
}

fn expansion_fields(e: &Expansion) -> Map<String, Value> {
    let mut m = Map::new();
    let kind = match e.kind() {
        ExpansionKind::Finite => "finite",
        ExpansionKind::Periodic => "periodic",
    };
    m.insert("kind".into(), kind.into());
    m.insert("preperiod".into(), decimals(e.preperiod()));
    m.insert("period".into(), decimals(e.period()));
    m
}

struct Document {
    command: String,
    inputs: Map<String, Value>,
    result: Map<String, Value>,
    code: i32,
    /// Replaces the `key: value` text rendering when set.
    text_override: Option<String>,
}

impl Document {
    fn new(command: &str) -> Self {
        Self {
            command: command.to_owned(),
            inputs: Map::new(),
            result: Map::new(),
            code: EXIT_OK,
            text_override: None,
        }
    }

    fn input(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.to_owned(), value.into());
        self
    }

    fn result(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.result.insert(key.to_owned(), value.into());
        self
    }

    fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": Value::Object(self.inputs.clone()),
            "result": Value::Object(self.result.clone()),
            "version": env!("CARGO_PKG_VERSION"),
        })
    }

    fn to_text(&self) -> String {
        if let Some(text) = &self.text_override {
            return text.clone();
        }
        let mut out = format!("command: {}\n", self.command);
        for (k, v) in self.inputs.iter().chain(self.result.iter()) {
            out.push_str(&format!("{k}: {}\n", text_value(v)));
        }
        out
    }
}

/// Strings print bare; everything else prints as compact JSON.
pub fn text_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn natural(arg: &str, what: &str) -> Result<BigUint, Failure> {
    let n: BigUint = arg
        .trim()
        .parse()
        .map_err(|_| usage(format!("{what}: `{arg}` is not a natural number")))?;
    Ok(n)
}

fn surd_arg(arg: &str) -> Result<QuadraticSurd, Failure> {
    parse_surd(arg).map_err(|e| usage(format!("`{arg}`: {e}")))
}

fn gcd_cmd(a: &str, b: &str) -> Result<Document, Failure> {
    let (x, y) = (natural(a, "a")?, natural(b, "b")?);
    let (quotients, g) = euclid_anth(&x, &y).map_err(usage)?;
    let mut doc = Document::new("gcd");
    doc.input("a", decimal(&x)).input("b", decimal(&y));
    doc.result("quotients", decimals(&quotients))
        .result("gcd", decimal(&g));
    Ok(doc)
}

fn expand_cmd(literal: &str, max_steps: u64) -> Result<Document, Failure> {
    let x = surd_arg(literal)?;
    let (e, trace) = surd_anth_bounded(&x, max_steps).map_err(usage)?;
    let mut doc = Document::new("expand");
    doc.input("literal", literal).input("value", surd_fields(&x));
    doc.result.extend(expansion_fields(&e));
    doc.result(
        "repeat_at",
        trace
            .repeat_at()
            .map_or(Value::Null, |(m, n)| json!([m, n])),
    )
    .result("commensurable", e.is_finite())
    .result("dialectic_number", dialectic_number_exp(&trace));
    Ok(doc)
}

fn prop_cmd(args: [&str; 4], max_steps: u64) -> Result<Document, Failure> {
    let [a, b, c, d] = args.map(surd_arg);
    let (a, b, c, d) = (a?, b?, c?, d?);
    let (left, _) = anth_pair_bounded(&a, &b, max_steps).map_err(usage)?;
    let (right, _) = anth_pair_bounded(&c, &d, max_steps).map_err(usage)?;
    let (left, right) = (canonical_expansion(&left), canonical_expansion(&right));
    let mut doc = Document::new("prop");
    for (key, lit) in ["a", "b", "c", "d"].iter().zip(args) {
        doc.input(key, lit);
    }
    doc.result("equal", left == right)
        .result("left", Value::Object(expansion_fields(&left)))
        .result("right", Value::Object(expansion_fields(&right)));
    Ok(doc)
}

fn convergents_cmd(literal: &str, count: usize, max_steps: u64) -> Result<Document, Failure> {
    let x = surd_arg(literal)?;
    let (e, _) = surd_anth_bounded(&x, max_steps).map_err(usage)?;
    let cs = convergents(&e, count).map_err(usage)?;
    let mut doc = Document::new("convergents");
    doc.input("literal", literal).input("count", count);
    doc.result("expansion", Value::Object(expansion_fields(&e)))
        .result(
            "convergents",
            Value::Array(
                cs.iter()
                    .map(|c| json!([decimal(&c.p), decimal(&c.q)]))
                    .collect(),
            ),
        );
    Ok(doc)
}

fn dialectic_cmd(
    terms: &[String],
    cycle: &[String],
    growth: Option<&str>,
    surd: Option<&str>,
    max_steps: u64,
) -> Result<Document, Failure> {
    let mut doc = Document::new("dialectic");
    if let Some(literal) = surd {
        let x = surd_arg(literal)?;
        let (_, trace) = surd_anth_bounded(&x, max_steps).map_err(usage)?;
        let classes = remainder_classes(&trace);
        doc.input("surd", literal);
        doc.result("dialectic_number", dialectic_number_exp(&trace))
            .result("classes", json!(classes.classes))
            .result(
                "cycle",
                classes.cycle.map_or(Value::Null, |(m, p)| json!([m, p])),
            );
        return Ok(doc);
    }
    let parse_all = |v: &[String], what: &str| -> Result<Vec<BigUint>, Failure> {
        v.iter().map(|t| natural(t, what)).collect()
    };
    let prefix = parse_all(terms, "term")?;
    let cycle_terms = parse_all(cycle, "cycle term")?;
    let growth_ratio = match growth {
        None => Ratio::from(BigUint::from(1u8)),
        Some(g) => match g.split_once('/') {
            Some((p, q)) => {
                let q = natural(q, "growth")?;
                if q == BigUint::from(0u8) {
                    return Err(usage("growth: denominator must be positive"));
                }
                Ratio::new(natural(p, "growth")?, q)
            }
            None => Ratio::from(natural(g, "growth")?),
        },
    };
    let seq = TermSequence::geometric(prefix.clone(), cycle_terms.clone(), growth_ratio.clone());
    let number = dialectic_number_seq(&seq).map_err(usage)?;
    doc.input("terms", decimals(&prefix));
    if !cycle_terms.is_empty() {
        doc.input("cycle", decimals(&cycle_terms)).input(
            "growth",
            json!([decimal(growth_ratio.numer()), decimal(growth_ratio.denom())]),
        );
    }
    doc.result("dialectic_number", number);
    Ok(doc)
}

fn read_tree(file: &PathBuf) -> Result<crate::division::DivisionTree, Failure> {
    let bytes = std::fs::read(file).map_err(|e| usage(format!("{}: {e}", file.display())))?;
    parse_tree_bytes(&bytes).map_err(|e| usage(format!("{}: {e}", file.display())))
}

fn tree_cmd(action: &TreeAction) -> Result<Document, Failure> {
    match action {
        TreeAction::Check { file } => {
            let tree = read_tree(file)?;
            let report = check_logos(&tree);
            let mut doc = Document::new("tree check");
            doc.input("file", file.display().to_string());
            let fields = serde_json::to_value(&report).expect("report serializes");
            if let Value::Object(m) = fields {
                doc.result.extend(m);
            }
            doc.result("steps", tree.step_count());
            if !report.valid {
                doc.code = EXIT_CHECK_FAILED;
            }
            Ok(doc)
        }
        TreeAction::Fmt { file } => {
            let tree = read_tree(file)?;
            let text = render_tree(&tree);
            let mut doc = Document::new("tree fmt");
            doc.input("file", file.display().to_string());
            doc.result("text", text.clone());
            doc.text_override = Some(text);
            Ok(doc)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Document, Failure> {
    let steps = cli.max_steps;
    match &cli.command {
        Command::Gcd { a, b } => gcd_cmd(a, b),
        Command::Expand { literal } => expand_cmd(literal, steps),
        Command::Prop { a, b, c, d } => prop_cmd([a, b, c, d], steps),
        Command::Convergents { literal, count } => convergents_cmd(literal, *count, steps),
        Command::Dialectic {
            terms,
            cycle,
            growth,
            surd,
        } => dialectic_cmd(terms, cycle, growth.as_deref(), surd.as_deref(), steps),
        Command::Tree { action } => tree_cmd(action),
    }
}

fn command_name(cli: &Cli) -> &'static str {
    match &cli.command {
        Command::Gcd { .. } => "gcd",
        Command::Expand { .. } => "expand",
        Command::Prop { .. } => "prop",
        Command::Convergents { .. } => "convergents",
        Command::Dialectic { .. } => "dialectic",
        Command::Tree {
            action: TreeAction::Check { .. },
        } => "tree check",
        Command::Tree {
            action: TreeAction::Fmt { .. },
        } => "tree fmt",
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let (stdout, stderr) = if code == 0 {
                (rendered, String::new())
            } else {
                (String::new(), rendered)
            };
            return Outcome {
                code,
                stdout,
                stderr,
            };
        }
    };
    match dispatch(&cli) {
        Ok(doc) => {
            let stdout = if cli.json {
                format!("{:#}\n", doc.to_json())
            } else {
                doc.to_text()
            };
            Outcome {
                code: doc.code,
                stdout,
                stderr: String::new(),
            }
        }
        Err(f) => {
            let stdout = if cli.json {
                let doc = json!({
                    "command": command_name(&cli),
                    "error": f.message,
                    "version": env!("CARGO_PKG_VERSION"),
                });
                format!("{doc:#}\n")
            } else {
                String::new()
            };
            Outcome {
                code: f.code,
                stdout,
                stderr: format!("error: {}\n", f.message),
            }
        }
    }
}
