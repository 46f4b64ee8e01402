//! Subcommand bodies. Each returns the rendered output and an exit code;
//! errors carry their own code.

use crate::report::{CsvRow, DiagonalRecord, ReportRecord, TreeValue, WallcrossRecord, WindowSummary};
use crate::spec::{load_basis, parse_c, parse_lambda, parse_nus, resolve, Mode, QuerySpec, SweepSpec, WallcrossSpec};
use crate::{exit, CliError, CliResult};
use parchi::diagonal_trees::diagonal_transcript;
use parchi::euler_formulas::wallcross::{wall_crossing, Bundle};
use parchi::euler_formulas::{chi_line, chi_multi, chi_vector, chi_wedge2};
use parchi::rational::fmt_q;
use parchi::root_system::chamber_signature;
use parchi::verify::{run_suite, Suite, SuiteReport};
use parchi::{CoVector, DiagonalBasis, EvalOptions, WallSpec};
use rayon::prelude::*;
use serde::Serialize;
use std::path::Path;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Rendered output plus the exit code to finish with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rendered {
    pub text: String,
    pub code: i32,
}

fn ok(text: String) -> Rendered {
    Rendered { text, code: exit::OK }
}

fn json<T: Serialize + ?Sized>(v: &T) -> CliResult<String> {
    serde_json::to_string_pretty(v).map_err(|e| CliError::internal(e.to_string()))
}

fn csv_of<T: Serialize>(rows: impl IntoIterator<Item = T>, header: &[&str]) -> CliResult<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    let err = |e: csv::Error| CliError::internal(e.to_string());
    // explicit header so that an empty table still has one
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.serialize(r).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::internal(e.to_string()))
}

/// Tables only make sense for sweeps; every other command is JSON.
fn json_only(format: Format) -> CliResult<()> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(CliError::validation("csv output is only available for sweep")),
    }
}

const CSV_HEADER: [&str; 9] = ["mode", "r", "g", "k", "lambda", "nu", "c", "value", "elapsed_us"];

fn strings(c: &CoVector) -> Vec<String> {
    c.coords().iter().map(fmt_q).collect()
}

/// Evaluate one query.
pub fn evaluate(
    command: &str,
    spec: &QuerySpec,
    mode_flag: Option<Mode>,
    basis: &DiagonalBasis,
    timing: bool,
) -> CliResult<ReportRecord> {
    let start = Instant::now();
    let res = resolve(spec, mode_flag, basis)?;
    let opts = EvalOptions::default();
    let q = &res.query;
    let out = match res.mode {
        Mode::Line => chi_line(q, &opts),
        Mode::Vector => chi_vector(q, &opts),
        Mode::Multi => chi_multi(q, &opts),
        Mode::Wedge2 => chi_wedge2(q, &opts),
    }?;
    let elapsed = start.elapsed().as_micros() as u64;
    Ok(ReportRecord {
        command: command.to_string(),
        mode: res.mode.name().to_string(),
        r: q.rank(),
        g: q.g,
        k: q.k,
        lambda: q.lambda.coords().iter().map(|x| x.to_string()).collect(),
        nu: q.nus.iter().map(|n| n.coords().to_vec()).collect(),
        c: strings(&q.c),
        basis: basis.to_json(),
        chamber: chamber_signature(&q.c)?,
        value: fmt_q(&out.value),
        per_basis: out
            .per_basis
            .iter()
            .map(|b| TreeValue {
                tree: b.tree.clone(),
                value: fmt_q(&b.value),
            })
            .collect(),
        windows: out
            .plans
            .iter()
            .map(|p| WindowSummary {
                target_degree: p.target_degree,
                excess: p.excess,
                pole_orders: p.pole_orders.clone(),
                windows: p.windows.clone(),
            })
            .collect(),
        elapsed_us: timing.then_some(elapsed),
        engine_version: parchi::VERSION.to_string(),
    })
}

pub fn chi(doc: &str, mode: Option<Mode>, basis_file: Option<&Path>, format: Format, timing: bool) -> CliResult<Rendered> {
    let spec: QuerySpec = serde_json::from_str(doc)?;
    let basis = load_basis(spec.r, basis_file)?;
    json_only(format)?;
    let rec = evaluate("chi", &spec, mode, &basis, timing)?;
    Ok(ok(json(&rec)?))
}

/// Evaluate every cell of a sweep in parallel. Results keep the cell
/// order; the first failing cell in that order decides the error.
pub fn sweep(doc: &str, mode: Option<Mode>, basis_file: Option<&Path>, format: Format, timing: bool) -> CliResult<Rendered> {
    let spec: SweepSpec = serde_json::from_str(doc)?;
    let cells = spec.cells()?;
    let basis = load_basis(spec.r, basis_file)?;
    let results: Vec<CliResult<ReportRecord>> = cells
        .par_iter()
        .map(|c| evaluate("sweep", c, mode, &basis, timing))
        .collect();
    let records = results.into_iter().collect::<CliResult<Vec<_>>>()?;
    Ok(ok(match format {
        Format::Json => json(&records)?,
        Format::Csv => csv_of(records.iter().map(CsvRow::from), &CSV_HEADER)?,
    }))
}

pub fn wallcross(doc: &str, basis_file: Option<&Path>, format: Format) -> CliResult<Rendered> {
    json_only(format)?;
    let spec: WallcrossSpec = serde_json::from_str(doc)?;
    let r = spec.r;
    if r < 2 {
        return Err(CliError::validation(format!("invalid rank {r}: need r >= 2")));
    }
    let basis = load_basis(r, basis_file)?;
    let lambda = parse_lambda(r, &spec.lambda)?;
    let mode = if spec.nu.is_some() { Mode::Multi } else { Mode::Line };
    let nus = parse_nus(mode, r, &spec.nu)?;
    let bundle = if nus.is_empty() { Bundle::Line } else { Bundle::Vector(nus.clone()) };
    let wall = WallSpec::new(r, spec.wall.pi1.clone(), spec.wall.level)?;
    let c_plus = parse_c(r, &Some(spec.c_plus.clone()))?;
    let c_minus = match &spec.c_minus {
        Some(v) => Some(parse_c(r, &Some(v.clone()))?),
        None => None,
    };
    let w = wall_crossing(
        spec.g,
        spec.k,
        &lambda,
        &bundle,
        &wall,
        &c_plus,
        c_minus.as_ref(),
        &basis,
        &EvalOptions::default(),
    )?;
    let rec = WallcrossRecord {
        command: "wallcross".into(),
        r,
        g: spec.g,
        k: spec.k,
        lambda: lambda.coords().iter().map(|x| x.to_string()).collect(),
        nu: nus.iter().map(|n| n.coords().to_vec()).collect(),
        wall: w.wall.clone(),
        c_plus: strings(&w.c_plus),
        c_minus: strings(&w.c_minus),
        geometric: fmt_q(&w.geometric),
        residue: fmt_q(&w.residue),
        residue_product: fmt_q(&w.residue_product),
        equal: w.equal,
        engine_version: parchi::VERSION.to_string(),
    };
    let text = json(&rec)?;
    Ok(Rendered {
        text,
        code: if rec.equal { exit::OK } else { exit::CHECK_FAILED },
    })
}

/// Print a diagonal basis with its certificate. A supplied set that fails
/// the test is reported with exit 1 rather than rejected, so the transcript
/// shows why.
pub fn diagonal(r: usize, basis_file: Option<&Path>, format: Format) -> CliResult<Rendered> {
    json_only(format)?;
    if !(2..=5).contains(&r) {
        return Err(CliError::validation(format!("diagonal search supports 2 <= r <= 5, got {r}")));
    }
    let (trees, supplied) = match basis_file {
        None => (parchi::diagonal_trees::enumerate_diagonal(r)?.trees().to_vec(), false),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::validation(format!("cannot read {}: {e}", p.display())))?;
            let raw: Vec<Vec<[usize; 2]>> = serde_json::from_str(&text)?;
            let trees = raw
                .iter()
                .map(|t| {
                    let pairs: Vec<(usize, usize)> = t.iter().map(|e| (e[0], e[1])).collect();
                    parchi::OrderedTree::from_pairs(r, &pairs)
                })
                .collect::<parchi::Result<Vec<_>>>()?;
            (trees, true)
        }
    };
    let transcript = diagonal_transcript(&trees);
    let good = transcript.diagonal && transcript.trees.len() == transcript.required_size;
    let rec = DiagonalRecord {
        command: "diagonal".into(),
        r,
        supplied,
        basis: trees.iter().map(|t| t.pairs()).collect(),
        transcript,
        engine_version: parchi::VERSION.to_string(),
    };
    let text = json(&rec)?;
    Ok(Rendered {
        text,
        code: if good { exit::OK } else { exit::CHECK_FAILED },
    })
}

/// Run one suite or all of them. Instability outranks plain failure.
pub fn verify(which: &str, format: Format) -> CliResult<Rendered> {
    json_only(format)?;
    let suites: Vec<Suite> = if which == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![which.parse::<Suite>()?]
    };
    let opts = EvalOptions::default();
    let reports = suites
        .iter()
        .map(|s| run_suite(*s, &opts))
        .collect::<parchi::Result<Vec<SuiteReport>>>()?;
    let unstable = reports.iter().flat_map(|r| &r.records).any(|r| r.unstable);
    let failed = reports.iter().any(|r| !r.passed);
    let text = if reports.len() == 1 {
        json(&reports[0])?
    } else {
        json(&reports)?
    };
    let code = if unstable {
        exit::INSTABILITY
    } else if failed {
        exit::CHECK_FAILED
    } else {
        exit::OK
    };
    Ok(Rendered { text, code })
}
