//! `hlsym` command-line entrypoint.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hlsym::bases::{format_in_basis, parse_element, Basis, Converter};
use hlsym::functionals::HarmonicViolation;
use hlsym::graphs::{build_levels, GraphKind, GraphVariant};
use hlsym::partitions::Partition;
use hlsym::scalar::{self, Scalar};
use hlsym::serial::{
    coefficients_to_json, functional_to_json, graph_to_json, partition_to_json, scalar_to_json,
    structconst_rows, structconst_to_json, write_structconst_csv, MixMode, MixSpec, StructKind,
};
use hlsym::verify::{run_suite, RunConfig, SUITES};
use hlsym::{Error, Functional, PlancherelKind, Result};

#[derive(Debug, Parser)]
#[command(name = "hlsym", version)]
#[command(about = "Exact Hall-Littlewood computations and verification suites")]
struct Cli {
    /// HL parameter as an exact rational, e.g. `1/3`.
    #[arg(long, global = true, default_value = "1/3", allow_hyphen_values = true)]
    t: String,

    /// Degree cap. Each subcommand picks a default when omitted.
    #[arg(long, global = true)]
    cap: Option<usize>,

    /// Output format. Each subcommand picks a default when omitted.
    #[arg(long, global = true)]
    format: Option<Format>,

    /// Worker threads for parallel work; 0 uses all cores.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rewrite an element in another basis.
    Expand {
        /// Basis of the input: p, P, Q, Pt, Qt. Bare `[λ]` terms use it; labelled
        /// terms must agree with it. Defaults to p for bare terms.
        #[arg(long)]
        from: Option<String>,

        /// Target basis: p, P, Q, Pt, Qt.
        #[arg(long)]
        to: String,

        /// Element such as `3/2*p[2,1] - P[1]`.
        #[arg(allow_hyphen_values = true)]
        element: String,
    },

    /// Dump structure constants.
    Structconst {
        /// f, ftilde or fbar.
        #[arg(long, default_value = "f")]
        kind: String,

        /// First factor; dumps every pair within the cap when omitted.
        #[arg(long, requires = "nu")]
        mu: Option<String>,

        /// Second factor.
        #[arg(long, requires = "mu")]
        nu: Option<String>,
    },

    /// Dump a branching graph with edge weights and dimensions.
    Graph {
        /// standard, even or odd.
        #[arg(long, default_value = "standard")]
        kind: String,

        /// Number of levels above the root.
        #[arg(long, default_value_t = 4)]
        levels: usize,
    },

    /// Build a functional and print its value table.
    Functional {
        /// row, col, extreme, plancherel-a, plancherel-even, plancherel-odd, counit.
        #[arg(long)]
        kind: String,

        /// Comma-separated alpha parameters for `extreme`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        alpha: Vec<String>,

        /// Comma-separated beta parameters for `extreme`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        beta: Vec<String>,

        /// Push the functional (built at t²) through the even or odd embedding.
        #[arg(long)]
        embed: Option<Embed>,
    },

    /// Mix two functionals described by a JSON file.
    Mix { spec: PathBuf },

    /// Run a named verification suite.
    Verify { suite: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Embed {
    Even,
    Odd,
}

/// A command's result: text to emit and whether the run counts as a pass.
struct Outcome {
    text: String,
    passed: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, passed: true }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            if let Err(e) = emit(cli.out.as_ref(), &outcome.text) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> io::Result<()> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let t = scalar::parse(&cli.t)?;
    if cli.workers > 0 {
        // Ignore the error if a global pool already exists.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.workers)
            .build_global();
    }
    match &cli.command {
        Command::Expand { from, to, element } => {
            expand(cli, &t, from.as_deref(), to, element).map(Outcome::ok)
        }
        Command::Structconst { kind, mu, nu } => {
            structconst(cli, &t, kind, mu.as_deref(), nu.as_deref()).map(Outcome::ok)
        }
        Command::Graph { kind, levels } => graph(cli, &t, kind, *levels).map(Outcome::ok),
        Command::Functional {
            kind,
            alpha,
            beta,
            embed,
        } => functional(cli, &t, kind, alpha, beta, *embed).map(Outcome::ok),
        Command::Mix { spec } => mix(cli, &t, spec),
        Command::Verify { suite } => verify(cli, &t, suite),
    }
}

fn format_or(cli: &Cli, default: Format, allowed: &[Format]) -> Result<Format> {
    let format = cli.format.unwrap_or(default);
    if allowed.contains(&format) {
        Ok(format)
    } else {
        Err(Error::Parse(format!(
            "format `{}` is not available for this command",
            format
                .to_possible_value()
                .expect("no skipped variants")
                .get_name()
        )))
    }
}

fn to_json_text(v: &Value, format: Format) -> String {
    if format == Format::Pretty {
        serde_json::to_string_pretty(v).expect("json serialises")
    } else {
        serde_json::to_string(v).expect("json serialises")
    }
}

fn expand(cli: &Cli, t: &Scalar, from: Option<&str>, to: &str, element: &str) -> Result<String> {
    let format = format_or(cli, Format::Pretty, &[Format::Pretty, Format::Json])?;
    let from: Option<Basis> = from.map(str::parse).transpose()?;
    let to: Basis = to.parse()?;
    let terms = parse_element(element)?;
    if let Some(from) = from {
        if let Some(other) = terms
            .iter()
            .filter_map(|term| term.basis)
            .find(|b| *b != from)
        {
            return Err(Error::Parse(format!(
                "term in basis `{other}` does not match --from {from}"
            )));
        }
    }
    let from = from.unwrap_or(Basis::Power);
    let degree = terms
        .iter()
        .map(|term| term.partition.size())
        .max()
        .unwrap_or(0);
    let mut conv = Converter::new(t.clone(), cli.cap.unwrap_or(degree))?;
    let f = conv.element(&terms, from)?;
    let coeffs = conv.expand(&f, to)?;
    Ok(match format {
        Format::Json => to_json_text(
            &json!({"basis": to.symbol(), "t": scalar_to_json(t), "terms": coefficients_to_json(&coeffs)}),
            Format::Json,
        ),
        _ => format_in_basis(to, &coeffs),
    })
}

fn structconst(
    cli: &Cli,
    t: &Scalar,
    kind: &str,
    mu: Option<&str>,
    nu: Option<&str>,
) -> Result<String> {
    let format = format_or(
        cli,
        Format::Csv,
        &[Format::Csv, Format::Json, Format::Pretty],
    )?;
    let kind: StructKind = kind.parse()?;
    let pair = match (mu, nu) {
        (Some(mu), Some(nu)) => Some((mu.parse::<Partition>()?, nu.parse::<Partition>()?)),
        _ => None,
    };
    let cap = match (&pair, cli.cap) {
        (_, Some(c)) => c,
        (Some((mu, nu)), None) if kind == StructKind::Ftilde => 2 * mu.size() + nu.size(),
        (Some((mu, nu)), None) => mu.size() + nu.size(),
        (None, None) => 6,
    };
    let rows = structconst_rows(kind, t, cap, pair.as_ref().map(|(m, n)| (m, n)))?;
    match format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_structconst_csv(&rows, &mut buf)?;
            Ok(String::from_utf8(buf).expect("csv output is utf-8"))
        }
        f => Ok(to_json_text(&structconst_to_json(kind.name(), t, &rows), f)),
    }
}

fn graph(cli: &Cli, t: &Scalar, kind: &str, levels: usize) -> Result<String> {
    let format = format_or(cli, Format::Json, &[Format::Json, Format::Pretty])?;
    let variant: GraphVariant = kind.parse()?;
    let kind = GraphKind::new(variant, t.clone())?;
    let data = build_levels(&kind, levels)?;
    Ok(to_json_text(&graph_to_json(&kind, &data), format))
}

fn scalars(list: &[String]) -> Result<Vec<Scalar>> {
    list.iter().map(|s| scalar::parse(s)).collect()
}

fn functional(
    cli: &Cli,
    t: &Scalar,
    kind: &str,
    alpha: &[String],
    beta: &[String],
    embed: Option<Embed>,
) -> Result<String> {
    let format = format_or(cli, Format::Json, &[Format::Json, Format::Pretty])?;
    if !(alpha.is_empty() && beta.is_empty()) && kind != "extreme" {
        return Err(Error::Parse(
            "`--alpha` and `--beta` only apply to `extreme`".into(),
        ));
    }
    let cap = cli.cap.unwrap_or(8);
    let (base_t, base_cap) = match embed {
        None => (t.clone(), cap),
        Some(Embed::Even) => (t * t, cap / 2),
        Some(Embed::Odd) => (t * t, cap.saturating_sub(1) / 2),
    };
    let base = match kind {
        "row" => Functional::phi_row(base_cap),
        "col" => Functional::phi_col(&base_t, base_cap)?,
        "extreme" => Functional::extreme_phi(&scalars(alpha)?, &scalars(beta)?, &base_t, base_cap)?,
        "plancherel-a" => Functional::plancherel(PlancherelKind::A, base_cap),
        "plancherel-even" => Functional::plancherel(PlancherelKind::Even, base_cap),
        "plancherel-odd" => Functional::plancherel(PlancherelKind::Odd, base_cap),
        "counit" => Functional::counit(base_cap),
        other => return Err(Error::Parse(format!("unknown functional kind `{other}`"))),
    };
    let phi = match embed {
        None => base,
        Some(Embed::Even) => base.embed_even(t)?,
        Some(Embed::Odd) => base.embed_odd(t)?,
    };
    Ok(to_json_text(&functional_to_json(&phi), format))
}

fn violation_json(v: &Option<HarmonicViolation>) -> Value {
    match v {
        None => Value::Null,
        Some(v) => json!({
            "mu": partition_to_json(&v.mu),
            "shifted": scalar_to_json(&v.shifted),
            "original": scalar_to_json(&v.original),
        }),
    }
}

fn mix(cli: &Cli, t: &Scalar, path: &PathBuf) -> Result<Outcome> {
    let format = format_or(cli, Format::Json, &[Format::Json, Format::Pretty])?;
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    let spec = MixSpec::from_json_str(&text)?;
    let cap = cli.cap.unwrap_or(8);
    let mixed = spec.run(t, cap)?;
    let (name, step) = match spec.mode {
        MixMode::Standard => ("p1-harmonic", 1),
        MixMode::Twisted => ("p2-harmonic", 2),
    };
    let check_cap = mixed.cap().saturating_sub(step);
    let violation = match spec.mode {
        MixMode::Standard => mixed.check_p1_harmonic(check_cap)?,
        MixMode::Twisted => mixed.check_p2_harmonic(check_cap)?,
    };
    let mut out = functional_to_json(&mixed);
    out["checks"] = json!([{
        "name": name,
        "cap": check_cap,
        "passed": violation.is_none(),
        "violation": violation_json(&violation),
    }]);
    Ok(Outcome {
        text: to_json_text(&out, format),
        passed: violation.is_none(),
    })
}

fn verify(cli: &Cli, t: &Scalar, suite: &str) -> Result<Outcome> {
    let format = format_or(cli, Format::Json, &[Format::Json, Format::Pretty])?;
    if !SUITES.iter().any(|(name, _)| *name == suite) {
        return Err(Error::UnknownSuite(suite.to_string()));
    }
    let config = RunConfig {
        t: t.clone(),
        cap: cli.cap,
        workers: cli.workers,
    };
    let report = run_suite(suite, &config)?;
    let text = match format {
        Format::Pretty => {
            let mut line = format!(
                "{} {} t={} cap={} checked={} failures={} ({} ms)",
                if report.passed() { "PASS" } else { "FAIL" },
                report.suite,
                report.t,
                report.cap,
                report.checked,
                report.failure_count,
                report.elapsed_ms
            );
            for w in &report.warnings {
                line.push_str(&format!("\nwarning: {w}"));
            }
            if !report.observations.is_empty() {
                line.push_str(&format!("\nobservations: {}", report.observations.len()));
            }
            if let Some(w) = &report.witness {
                line.push_str(&format!("\nwitness: {w}"));
            }
            line
        }
        _ => to_json_text(&report.to_json(), Format::Json),
    };
    Ok(Outcome {
        text,
        passed: report.passed(),
    })
}
