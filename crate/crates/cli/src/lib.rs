//! Command-line front end for `torspan`: builds a manifold from parameters
//! and prints per-class bound tables as text, JSON or CSV.
//!
//! Everything goes through [`run`], which returns the would-be stdout,
//! stderr and exit code so the binary stays a thin shell and tests can call
//! the CLI in-process.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;
use torspan::{
    circular_span, class_reports, knot_report_with_cap, lens_torsion_with_cap, parse_rational, reduce_mod_1,
    ClassReport, LaurentPoly1, LaurentPoly2, LinkSurgery, Parity, QhsData, Verdict, DEFAULT_ENUMERATION_CAP,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

const ORIENTATION_NOTE: &str =
    "reversing orientation negates the linking form; circular spans are reflection invariant, so no bound changes";

#[derive(Debug, Parser)]
#[command(name = "torspan", version, about = "Exact torsion bounds for Theta on H_1 of 3-manifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lens space L(p, q) with H_1 = Z/p generated by t.
    Lens {
        #[arg(allow_negative_numbers = true)]
        p: i64,
        #[arg(allow_negative_numbers = true)]
        q: i64,
        /// Report only t^k (default: every class).
        #[arg(long, allow_negative_numbers = true, conflicts_with = "all")]
        class: Option<i64>,
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        common: Common,
    },
    /// p-surgery on a knot in S^3; the meridian class u generates Z/p.
    Knot {
        #[arg(allow_negative_numbers = true)]
        p: i64,
        /// Alexander polynomial as exponent:coefficient pairs, e.g. "-1:1,0:-1,1:1".
        #[arg(long, allow_hyphen_values = true)]
        alexander: String,
        /// Seifert genus; enables the upper bound and the fibred verdict.
        #[arg(long)]
        genus: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Surgery on a two-component link with framings p and 0, H_1 = Z/p u1 + Z u2.
    Link {
        #[arg(allow_negative_numbers = true)]
        p: i64,
        /// f(u1, u2) as e1,e2:coefficient terms separated by ';' or ','.
        #[arg(long = "f", allow_hyphen_values = true)]
        f: String,
        /// Report only u1^k (default: every k mod p).
        #[arg(long = "k", allow_negative_numbers = true, conflicts_with = "all")]
        k: Option<i64>,
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Length of the shortest arc of Q/Z containing the given fractions.
    Span {
        /// Fractions such as 2/5; put negative ones after `--`.
        #[arg(required = true)]
        fractions: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Largest torsion subgroup the exhaustive searches may walk.
    #[arg(long = "max-enumeration", default_value_t = DEFAULT_ENUMERATION_CAP)]
    pub max_enumeration: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] torspan::Error),
    #[error("{0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_internal() => 2,
            CliError::Core(_) => 1,
            CliError::Output(_) => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifold {
    pub construction: String,
    pub name: String,
    pub parameters: BTreeMap<String, String>,
}

/// One class, with every fraction as a lowest-terms string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRow {
    pub class: String,
    pub order: u64,
    pub q: Option<String>,
    pub k_residue: Option<String>,
    pub parity: Option<String>,
    pub correction: String,
    pub support: Vec<String>,
    pub lower_bound: String,
    pub upper_bound: Option<String>,
    pub verdict: Option<String>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputDocument {
    pub manifold: Manifold,
    pub group: String,
    pub torsion: Option<String>,
    pub classes: Vec<ClassRow>,
    pub version: String,
    pub orientation_note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanDocument {
    pub points: Vec<String>,
    pub span: String,
    pub version: String,
}

pub const CSV_HEADER: [&str; 11] = [
    "manifold",
    "class",
    "order",
    "q",
    "k_residue",
    "parity",
    "correction",
    "support",
    "lower_bound",
    "upper_bound",
    "verdict",
];

impl ClassRow {
    fn from_report(r: &ClassReport) -> Self {
        let group = r.correction.group();
        ClassRow {
            class: r.class_name.clone(),
            order: r.order,
            q: r.q_value.as_ref().map(|q| q.to_string()),
            k_residue: r.k_residue.map(|k| k.to_string()),
            parity: r.parity().map(|p| match p {
                Parity::Even => "even".to_string(),
                Parity::Odd => "odd".to_string(),
            }),
            correction: r.correction.to_string(),
            support: r.correction_support().iter().map(|h| group.render_element(h)).collect(),
            lower_bound: r.lower_bound.to_string(),
            upper_bound: r.upper_bound.as_ref().map(|u| u.to_string()),
            verdict: r.verdict.as_ref().map(|v| match v {
                Verdict::Equality(_) => "equality".to_string(),
                Verdict::BoundsOnly { .. } => "bounds only".to_string(),
            }),
            notes: r.notes.clone(),
        }
    }
}

impl OutputDocument {
    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Text => Ok(self.to_text()),
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        serde_json::to_string_pretty(self)
            .map(|s| s + "\n")
            .map_err(|e| CliError::Output(e.to_string()))
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let out = |e: csv::Error| CliError::Output(e.to_string());
        w.write_record(CSV_HEADER).map_err(out)?;
        for c in &self.classes {
            let order = c.order.to_string();
            let support = c.support.join(" ");
            w.write_record([
                self.manifold.name.as_str(),
                &c.class,
                &order,
                c.q.as_deref().unwrap_or(""),
                c.k_residue.as_deref().unwrap_or(""),
                c.parity.as_deref().unwrap_or(""),
                &c.correction,
                &support,
                &c.lower_bound,
                c.upper_bound.as_deref().unwrap_or(""),
                c.verdict.as_deref().unwrap_or(""),
            ])
            .map_err(out)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut line = |k: &str, v: &str| {
            let _ = if k.is_empty() { writeln!(s) } else { writeln!(s, "{k:<12}{v}") };
        };
        line("manifold", &self.manifold.name);
        line("group", &self.group);
        line("torsion", self.torsion.as_deref().unwrap_or("-"));
        line("version", &self.version);
        line("orientation", &self.orientation_note);
        for c in &self.classes {
            line("", "");
            line("class", &c.class);
            line("order", &c.order.to_string());
            line("q", c.q.as_deref().unwrap_or("-"));
            line("K", c.k_residue.as_deref().unwrap_or("-"));
            line("parity", c.parity.as_deref().unwrap_or("-"));
            line("correction", &c.correction);
            line("support", &c.support.join(", "));
            line("lower", &c.lower_bound);
            line("upper", c.upper_bound.as_deref().unwrap_or("-"));
            line("verdict", c.verdict.as_deref().unwrap_or("-"));
            for n in &c.notes {
                line("note", n);
            }
        }
        s
    }
}

/// Captured result of one CLI invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
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
                Outcome { stdout: String::new(), stderr: text, code: 1 }
            } else {
                Outcome { stdout: text, stderr: String::new(), code: 0 }
            };
        }
    };
    match execute(&cli.command) {
        Ok(stdout) => Outcome { stdout, stderr: String::new(), code: 0 },
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: e.exit_code() },
    }
}

pub fn execute(command: &Command) -> Result<String, CliError> {
    match command {
        Command::Lens { p, q, class, common, .. } => lens_document(*p, *q, *class, common.max_enumeration)?.render(common.format),
        Command::Knot { p, alexander, genus, common } => {
            knot_document(*p, alexander, *genus, common.max_enumeration)?.render(common.format)
        }
        Command::Link { p, f, k, common, .. } => link_document(*p, f, *k, common.max_enumeration)?.render(common.format),
        Command::Span { fractions, format } => span_output(fractions, *format),
    }
}

fn params<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn document(manifold: Manifold, data: Option<&QhsData>, group: String, classes: Vec<ClassRow>) -> OutputDocument {
    OutputDocument {
        manifold,
        group,
        torsion: data.map(|d| d.torsion_rep().to_string()),
        classes,
        version: VERSION.to_string(),
        orientation_note: ORIENTATION_NOTE.to_string(),
    }
}

pub fn lens_document(p: i64, q: i64, class: Option<i64>, cap: u64) -> Result<OutputDocument, CliError> {
    let data = lens_torsion_with_cap(p, q, cap)?;
    let reports = match class {
        Some(k) => {
            let u = data.group().pow(&data.group().generator(0), k);
            vec![torspan::class_report(&data, &u)?]
        }
        None => class_reports(&data)?,
    };
    let manifold = Manifold {
        construction: "lens".into(),
        name: data.provenance().to_string(),
        parameters: params([("p", p.to_string()), ("q", q.to_string())]),
    };
    let rows = reports.iter().map(ClassRow::from_report).collect();
    Ok(document(manifold, Some(&data), data.group().to_string(), rows))
}

pub fn knot_document(p: i64, alexander: &str, genus: Option<u64>, cap: u64) -> Result<OutputDocument, CliError> {
    let delta: LaurentPoly1 = alexander.parse()?;
    let (data, report) = knot_report_with_cap(p, &delta, genus, cap)?;
    let mut parameters = params([("p", p.to_string()), ("alexander", delta.to_spec())]);
    if let Some(g) = genus {
        parameters.insert("genus".into(), g.to_string());
    }
    let manifold = Manifold { construction: "knot-surgery".into(), name: format!("S^3_{p}(K), Delta = {delta}"), parameters };
    Ok(document(manifold, Some(&data), data.group().to_string(), vec![ClassRow::from_report(&report)]))
}

pub fn link_document(p: i64, f: &str, k: Option<i64>, cap: u64) -> Result<OutputDocument, CliError> {
    let f: LaurentPoly2 = f.parse()?;
    let link = LinkSurgery::new(p)?;
    let ks: Vec<i64> = match k {
        Some(k) => vec![k],
        None => {
            let n = link.group().enumerate_torsion(cap)?.len() as i64;
            (0..n).collect()
        }
    };
    let rows = ks
        .iter()
        .map(|&k| torspan::link_report(&link, &f, k).map(|r| ClassRow::from_report(&r)))
        .collect::<Result<Vec<_>, _>>()?;
    let manifold = Manifold {
        construction: "link-surgery".into(),
        name: format!("link surgery, framings ({p}, 0), f = {f}"),
        parameters: params([("p", p.to_string()), ("f", f.to_spec())]),
    };
    Ok(document(manifold, None, link.group().to_string(), rows))
}

pub fn span_document(fractions: &[String]) -> Result<SpanDocument, CliError> {
    let points = fractions
        .iter()
        .map(|s| parse_rational(s).map(|r| reduce_mod_1(&r)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SpanDocument {
        points: points.iter().map(|p| p.to_string()).collect(),
        span: circular_span(&points).to_string(),
        version: VERSION.to_string(),
    })
}

fn span_output(fractions: &[String], format: Format) -> Result<String, CliError> {
    let doc = span_document(fractions)?;
    Ok(match format {
        Format::Text => format!("{}\n", doc.span),
        Format::Json => serde_json::to_string_pretty(&doc).map_err(|e| CliError::Output(e.to_string()))? + "\n",
        Format::Csv => format!("span\n{}\n", doc.span),
    })
}
