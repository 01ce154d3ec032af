use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use delpezzo3::catalog::{id_alias, Catalog, ConcreteType, Family};
use delpezzo3::verifier::{graph_of, run_all, verify_distinctness, Report};
use delpezzo3::{realize, Level};

#[derive(Parser)]
#[command(name = "delpezzo3", version, about = "Check the catalog of index-three log del Pezzo surface types")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(clap::Args, Clone)]
struct Filter {
    /// Restrict to one family (median, tet-big, tet-nonbig, tet-trivial).
    #[arg(long)]
    family: Option<String>,
    /// Type id in bracket notation or its ASCII alias, e.g. "[2]_{1K}" or 2_1K.
    #[arg(long = "type")]
    type_id: Option<String>,
    /// Parameter values, e.g. --params c=2 d=1.
    #[arg(long, num_args = 1..)]
    params: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum StageArg {
    #[value(name = "X", alias = "x")]
    X,
    #[value(name = "Z", alias = "z")]
    Z,
    #[value(name = "M", alias = "m")]
    M,
}

#[derive(Subcommand)]
enum Verb {
    /// Print type ids.
    List {
        #[command(flatten)]
        filter: Filter,
        /// Print one line per parameter tuple instead of per entry.
        #[arg(long)]
        expand: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the number of concrete types per family.
    Count {
        #[command(flatten)]
        filter: Filter,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every check; exit status 1 if any fails.
    Verify {
        #[command(flatten)]
        filter: Filter,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print every check, not only failures.
        #[arg(long)]
        verbose: bool,
    },
    /// Emit the weighted dual graph of E on one level.
    Show {
        #[command(flatten)]
        filter: Filter,
        #[arg(long, value_enum, default_value = "M")]
        stage: StageArg,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Usage(String);

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool, Usage> {
    let catalog = Catalog::from_env().map_err(|e| Usage(e.to_string()))?;
    match cli.verb {
        Verb::List { filter, expand, out } => {
            let mut text = String::new();
            if expand {
                for t in select(&catalog, &filter)? {
                    text.push_str(&format!("{}\t{}\n", t.family, t.id));
                }
            } else {
                let family = family_filter(&filter)?;
                for spec in &catalog.types {
                    if family.is_none_or(|f| f == spec.family()) && id_matches(&filter, &spec.id) {
                        text.push_str(&format!("{}\t{}\t{}\n", spec.family(), spec.id, spec.tuples().len()));
                    }
                }
            }
            emit(out, &text)?;
            Ok(true)
        }
        Verb::Count { filter, format, out } => {
            let types = select(&catalog, &filter)?;
            let counts: Vec<(Family, usize)> = Family::ALL
                .into_iter()
                .filter(|f| filter.family.is_none() || Some(*f) == family_filter(&filter).ok().flatten())
                .map(|f| (f, types.iter().filter(|t| t.family == f).count()))
                .collect();
            let text = match format {
                Format::Json => {
                    let map: serde_json::Map<String, serde_json::Value> =
                        counts.iter().map(|(f, n)| (f.name().to_string(), (*n).into())).collect();
                    serde_json::to_string_pretty(&map).unwrap() + "\n"
                }
                _ => {
                    let parts: Vec<String> = counts.iter().map(|(f, n)| format!("{f}: {n}")).collect();
                    parts.join(", ") + "\n"
                }
            };
            emit(out, &text)?;
            Ok(true)
        }
        Verb::Verify { filter, format, out, verbose } => {
            let types = select(&catalog, &filter)?;
            let (reports, summary) = run_all(&types);
            let whole_family = filter.type_id.is_none() && filter.params.is_empty();
            let distinct = (whole_family && types.iter().any(|t| t.family == Family::TetTrivial))
                .then(|| verify_distinctness(&types));
            let ok = summary.failures.is_empty() && distinct.as_ref().is_none_or(|c| c.passed());
            let text = match format {
                Format::Json => {
                    let doc = serde_json::json!({ "reports": reports, "summary": summary, "distinctness": distinct });
                    serde_json::to_string_pretty(&doc).unwrap() + "\n"
                }
                Format::Text => {
                    let mut s = String::new();
                    for r in &reports {
                        write_report(&mut s, r, verbose);
                    }
                    if let Some(c) = &distinct {
                        s.push_str(&format!("{} distinct-ez: {}\n", if c.passed() { "PASS" } else { "FAIL" }, c.detail));
                    }
                    let fams: Vec<String> = summary.per_family.iter().map(|(f, n)| format!("{f}: {n}")).collect();
                    s.push_str(&format!("{}/{} types pass ({})\n", summary.passed, summary.total, fams.join(", ")));
                    s
                }
                Format::Dot => return Err(Usage("verify supports --format text or json".into())),
            };
            emit(out, &text)?;
            Ok(ok)
        }
        Verb::Show { filter, stage, format, out } => {
            let types = select(&catalog, &filter)?;
            let [t] = types.as_slice() else {
                let ids: Vec<&str> = types.iter().map(|t| t.id.as_str()).collect();
                return Err(Usage(format!("show needs exactly one type, got {}: {}", ids.len(), ids.join(", "))));
            };
            let level = match stage {
                StageArg::X => Level::X,
                StageArg::Z => Level::Z,
                StageArg::M => Level::M,
            };
            let r = realize(t).map_err(|e| Usage(format!("{}: {e}", t.id)))?;
            if level == Level::X && !t.family.is_tetrad() {
                return Err(Usage(format!("{} is a median entry and has no stage X", t.id)));
            }
            let g = graph_of(&r, level).map_err(|e| Usage(format!("{}: {e}", t.id)))?;
            let text = match format {
                Format::Dot => g.to_dot(&t.id),
                Format::Json => serde_json::to_string_pretty(&g).unwrap() + "\n",
                Format::Text => return Err(Usage("show supports --format dot or json".into())),
            };
            emit(out, &text)?;
            Ok(true)
        }
    }
}

fn write_report(s: &mut String, r: &Report, verbose: bool) {
    let computed = r.computed_em.as_ref().map(|c| c.to_string()).unwrap_or_else(|| "?".into());
    s.push_str(&format!("{} {} [{}] {}\n", if r.pass { "PASS" } else { "FAIL" }, r.type_id, r.family, computed));
    for c in &r.checks {
        if verbose || !c.passed() {
            s.push_str(&format!("    {} {}: {}\n", if c.passed() { "ok  " } else { "FAIL" }, c.id, c.detail));
        }
    }
}

fn family_filter(filter: &Filter) -> Result<Option<Family>, Usage> {
    filter
        .family
        .as_deref()
        .map(|f| Family::from_name(f).ok_or_else(|| Usage(format!("unknown family {f:?}"))))
        .transpose()
}

fn id_matches(filter: &Filter, id: &str) -> bool {
    filter.type_id.as_deref().is_none_or(|want| want == id || id_alias(want) == id_alias(id))
}

fn parse_params(filter: &Filter) -> Result<Vec<(String, i64)>, Usage> {
    filter
        .params
        .iter()
        .map(|p| {
            let (k, v) = p.split_once('=').ok_or_else(|| Usage(format!("bad parameter {p:?}, expected name=value")))?;
            let v = v.trim().parse().map_err(|_| Usage(format!("bad parameter value in {p:?}")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

/// Concrete types selected by the filter. A type id matches either the entry id or a concrete id.
fn select(catalog: &Catalog, filter: &Filter) -> Result<Vec<ConcreteType>, Usage> {
    let family = family_filter(filter)?;
    let params = parse_params(filter)?;
    let mut out = Vec::new();
    for spec in catalog.types.iter().filter(|s| family.is_none_or(|f| f == s.family())) {
        let spec_hit = id_matches(filter, &spec.id);
        for t in spec.expand().map_err(|e| Usage(e.to_string()))? {
            if !(spec_hit || id_matches(filter, &t.id)) {
                continue;
            }
            if params.iter().all(|(k, v)| t.env.get(k) == Some(v)) {
                out.push(t);
            }
        }
    }
    if out.is_empty() && (filter.type_id.is_some() || !params.is_empty()) {
        let what = filter.type_id.clone().unwrap_or_else(|| filter.params.join(" "));
        return Err(Usage(format!("unknown type id {what:?}")));
    }
    Ok(out)
}

fn emit(out: Option<PathBuf>, text: &str) -> Result<(), Usage> {
    match out {
        Some(p) => fs::write(&p, text).map_err(|e| Usage(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| Usage(e.to_string()))
        }
    }
}
