//! Command-line front end. Every answer is a thin call into the library.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::arrangements::{
    build_a, build_b, characteristic_polynomial, count_regions_in_cone, localize, named_cone, Arrangement,
    Method, NamedCone,
};
use crate::bunches::{is_bunch, is_maximal_bunch, is_projective, phi_from_complex};
use crate::complexes::{count_max_biconnected, enumerate_max_biconnected, is_full, Complex};
use crate::error::Error;
use crate::hyper_cones::{census, census_summary, ResolutionRecord};
use crate::ratgeom::{parse_rational, RatVector};

pub const WORKERS_ENV: &str = "HYPERPOLY_WORKERS";

#[derive(Parser, Debug)]
#[command(name = "hyperpolygon", version, about = "Exact counts for hyperpolygon GIT problems")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads.
    #[arg(short = 'j', long = "jobs", global = true, env = WORKERS_ENV, default_value_t = 1,
          value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: u16,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Maximally biconnected complexes.
    #[command(subcommand)]
    Complexes(ComplexesCmd),
    /// Crepant resolutions, one per complex.
    #[command(subcommand)]
    Resolutions(ResolutionsCmd),
    /// Regions of hyperplane arrangements.
    #[command(subcommand)]
    Chambers(ChambersCmd),
    /// Bunches of polygon orbit cones.
    #[command(subcommand)]
    Bunches(BunchesCmd),
    /// Relations of the Cox ring presentation.
    #[command(subcommand)]
    Cox(CoxCmd),
    /// Closed forms against direct cone computations.
    #[command(subcommand)]
    Oracle(OracleCmd),
}

#[derive(Args, Debug)]
pub struct ComplexArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=9))]
    pub n: u8,
    /// Only complexes containing every singleton.
    #[arg(long)]
    pub full_only: bool,
}

#[derive(Subcommand, Debug)]
pub enum ComplexesCmd {
    Count(ComplexArgs),
    Enumerate(ComplexArgs),
}

#[derive(Subcommand, Debug)]
pub enum ResolutionsCmd {
    Census {
        #[arg(long, value_parser = clap::value_parser!(u8).range(3..=7))]
        n: u8,
        /// Stream one record per complex instead of the summary.
        #[arg(long)]
        records: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ArrangementKind {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConeArg {
    #[value(name = "F", alias = "f")]
    F,
    #[value(name = "C0", alias = "c0")]
    C0,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Enumerate,
    Charpoly,
}

#[derive(Subcommand, Debug)]
pub enum ChambersCmd {
    Count(ChambersArgs),
}

#[derive(Args, Debug)]
pub struct ChambersArgs {
    #[arg(long, value_enum, required_unless_present = "spec", conflicts_with = "spec")]
    pub arrangement: Option<ArrangementKind>,
    #[arg(long, required_unless_present = "spec")]
    pub n: Option<usize>,
    /// Subset size for the B arrangement.
    #[arg(long)]
    pub m: Option<usize>,
    /// Count only regions inside this cone.
    #[arg(long, value_enum, conflicts_with = "at_ray")]
    pub in_cone: Option<ConeArg>,
    /// Count regions whose closure contains this ray, given as comma-separated rationals.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub at_ray: Option<Vec<String>>,
    #[arg(long, value_enum, default_value_t = MethodArg::Enumerate)]
    pub method: MethodArg,
    /// JSON file with {"dim": d, "normals": [[...], ...]}.
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum BunchesCmd {
    Classify {
        #[arg(long, value_parser = clap::value_parser!(u8).range(3..=6))]
        n: u8,
        #[arg(long)]
        records: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum CoxCmd {
    Verify {
        #[arg(long, value_parser = clap::value_parser!(u8).range(5..=12))]
        n: u8,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum OracleCmd {
    Crosscheck {
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u8).range(3..=6))]
        n: u8,
    },
}

/// A failure with its exit status.
#[derive(Debug)]
struct Failure {
    code: i32,
    error: anyhow::Error,
}

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: 2,
        error: e.into(),
    }
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        let code = match error.downcast_ref::<Error>() {
            Some(Error::OutOfRange { .. } | Error::Parse(_) | Error::DimensionMismatch { .. }) => 2,
            _ => 1,
        };
        Failure { code, error }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

type Outcome = std::result::Result<(), Failure>;

fn cells(v: &Value) -> Vec<(String, String)> {
    let text = |x: &Value| match x {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    };
    match v {
        Value::Object(m) => m.iter().map(|(k, x)| (k.clone(), text(x))).collect(),
        other => vec![("value".into(), text(other))],
    }
}

struct Out<'a> {
    w: &'a mut (dyn Write + Send),
    format: Format,
    csv_header: bool,
}

impl Out<'_> {
    /// A single result object.
    fn summary<T: Serialize>(&mut self, v: &T) -> anyhow::Result<()> {
        let v = serde_json::to_value(v)?;
        match self.format {
            Format::Json => writeln!(self.w, "{v}")?,
            Format::Plain => {
                for (k, x) in cells(&v) {
                    writeln!(self.w, "{k}: {x}")?;
                }
            }
            Format::Csv => {
                self.csv_header = false;
                self.row(&v)?;
            }
        }
        Ok(())
    }

    /// One record of a stream.
    fn record<T: Serialize>(&mut self, v: &T) -> anyhow::Result<()> {
        let v = serde_json::to_value(v)?;
        match self.format {
            Format::Json => writeln!(self.w, "{v}")?,
            Format::Plain => {
                let line: Vec<String> = cells(&v).into_iter().map(|(_, x)| x).collect();
                writeln!(self.w, "{}", line.join("\t"))?;
            }
            Format::Csv => self.row(&v)?,
        }
        Ok(())
    }

    fn row(&mut self, v: &Value) -> anyhow::Result<()> {
        let c = cells(v);
        let mut wr = csv::WriterBuilder::new().from_writer(Vec::new());
        if !self.csv_header {
            wr.write_record(c.iter().map(|(k, _)| k))?;
            self.csv_header = true;
        }
        wr.write_record(c.iter().map(|(_, x)| x))?;
        self.w.write_all(&wr.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?)?;
        Ok(())
    }
}

#[derive(Serialize)]
struct ComplexCount {
    n: usize,
    full_only: bool,
    count: u64,
}

#[derive(Serialize)]
struct CensusOut {
    n: usize,
    total: u64,
    projective: u64,
    nonprojective: u64,
    full: u64,
    full_projective: u64,
}

#[derive(Serialize)]
struct ChamberOut {
    arrangement: String,
    dim: usize,
    hyperplanes: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    cone: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ray: Option<RatVector>,
    method: Method,
    count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    characteristic_polynomial: Option<Vec<String>>,
}

#[derive(Serialize)]
struct BunchRecord {
    complex: Complex,
    cones: usize,
    bunch: bool,
    maximal: bool,
    witness: Option<RatVector>,
}

#[derive(Serialize)]
struct BunchSummary {
    n: usize,
    full_complexes: u64,
    bunches: u64,
    maximal: u64,
    projective: u64,
}

#[derive(Serialize)]
struct OracleOut {
    n: usize,
    ok: bool,
    suites: Vec<crate::oracle::Agreement>,
}

fn complexes(cmd: &ComplexesCmd, out: &mut Out) -> Outcome {
    match cmd {
        ComplexesCmd::Count(a) => {
            let count = count_max_biconnected(a.n as usize, a.full_only)?;
            out.summary(&ComplexCount {
                n: a.n as usize,
                full_only: a.full_only,
                count,
            })?;
        }
        ComplexesCmd::Enumerate(a) => {
            for c in enumerate_max_biconnected(a.n as usize, a.full_only)? {
                out.record(&c)?;
            }
        }
    }
    Ok(())
}

fn resolutions(cmd: &ResolutionsCmd, out: &mut Out) -> Outcome {
    let ResolutionsCmd::Census { n, records } = cmd;
    let n = *n as usize;
    if *records {
        let mut c = census(n)?;
        loop {
            let batch: Vec<ResolutionRecord> = c.next_batch(4096);
            if batch.is_empty() {
                break;
            }
            for r in &batch {
                out.record(r)?;
            }
        }
        return Ok(());
    }
    let s = census_summary(n)?;
    out.summary(&CensusOut {
        n,
        total: s.total,
        projective: s.projective,
        nonprojective: s.non_projective,
        full: s.full,
        full_projective: s.full_projective,
    })?;
    Ok(())
}

fn chambers(cmd: &ChambersCmd, out: &mut Out) -> Outcome {
    let ChambersCmd::Count(a) = cmd;
    let (arr, name, n) = match (&a.spec, a.arrangement) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let arr: Arrangement = serde_json::from_str(&text)
                .map_err(|e| usage(anyhow::anyhow!("invalid arrangement file {}: {e}", path.display())))?;
            let d = arr.dim();
            (arr, "spec".to_string(), d)
        }
        (None, Some(ArrangementKind::A)) => {
            let n = a.n.expect("required by clap");
            if a.m.is_some() {
                return Err(usage(anyhow::anyhow!("--m only applies to the B arrangement")));
            }
            (build_a(n)?, format!("A({n})"), n)
        }
        (None, Some(ArrangementKind::B)) => {
            let n = a.n.expect("required by clap");
            let m = a.m.ok_or_else(|| usage(anyhow::anyhow!("the B arrangement needs --m")))?;
            (build_b(n, m)?, format!("B({n},{m})"), n)
        }
        (None, None) => unreachable!("clap requires --arrangement or --spec"),
    };
    let method = match a.method {
        MethodArg::Enumerate => Method::Enumerate,
        MethodArg::Charpoly => Method::Charpoly,
    };
    let ray = match &a.at_ray {
        Some(items) => {
            let v = items
                .iter()
                .map(|s| parse_rational(s.trim()))
                .collect::<crate::Result<Vec<_>>>()?;
            Some(RatVector(v))
        }
        None => None,
    };
    let target = match &ray {
        Some(r) => localize(&arr, r)?,
        None => arr.clone(),
    };
    let mut poly = None;
    let count = match (a.in_cone, method) {
        (Some(_), Method::Charpoly) => {
            return Err(usage(anyhow::anyhow!(
                "--in-cone needs --method enumerate; the charpoly method counts the whole space"
            )))
        }
        (Some(c), Method::Enumerate) => {
            if a.arrangement != Some(ArrangementKind::A) {
                return Err(usage(anyhow::anyhow!("--in-cone applies to the A arrangement")));
            }
            let which = match c {
                ConeArg::F => NamedCone::F,
                ConeArg::C0 => NamedCone::C0,
            };
            count_regions_in_cone(&target, &named_cone(n, which)?)?
        }
        (None, Method::Charpoly) => {
            let p = characteristic_polynomial(&target)?;
            poly = Some(p.coeffs.iter().map(|c| c.to_string()).collect());
            p.regions()?
        }
        (None, Method::Enumerate) => crate::arrangements::count_regions(&target, Method::Enumerate)?,
    };
    out.summary(&ChamberOut {
        arrangement: name,
        dim: arr.dim(),
        hyperplanes: target.len(),
        cone: a.in_cone.map(|c| match c {
            ConeArg::F => "F".into(),
            ConeArg::C0 => "C0".into(),
        }),
        ray,
        method,
        count,
        characteristic_polynomial: poly,
    })?;
    Ok(())
}

fn bunches(cmd: &BunchesCmd, out: &mut Out) -> Outcome {
    let BunchesCmd::Classify { n, records } = cmd;
    let n = *n as usize;
    let mut s = BunchSummary {
        n,
        full_complexes: 0,
        bunches: 0,
        maximal: 0,
        projective: 0,
    };
    for c in enumerate_max_biconnected(n, true)? {
        debug_assert!(is_full(&c));
        let b = phi_from_complex(&c)?;
        let bunch = is_bunch(&b);
        let maximal = bunch && is_maximal_bunch(&b)?;
        let witness = if maximal { is_projective(&b)? } else { None };
        s.full_complexes += 1;
        s.bunches += bunch as u64;
        s.maximal += maximal as u64;
        s.projective += witness.is_some() as u64;
        if *records {
            out.record(&BunchRecord {
                complex: c,
                cones: b.len(),
                bunch,
                maximal,
                witness,
            })?;
        }
    }
    if !*records {
        out.summary(&s)?;
    }
    Ok(())
}

fn cox(cmd: &CoxCmd, out: &mut Out) -> Outcome {
    let CoxCmd::Verify { n, samples, seed } = cmd;
    let r = crate::coxrelations::verify(*n as usize, *samples, *seed)?;
    out.summary(&r)?;
    if r.failures > 0 || r.identities != "ok" || !r.mutant_rejected {
        return Err(anyhow::anyhow!("verification failed").into());
    }
    Ok(())
}

fn oracle(cmd: &OracleCmd, out: &mut Out) -> Outcome {
    let OracleCmd::Crosscheck { n } = cmd;
    let suites = crate::oracle::crosscheck(*n as usize)?;
    let ok = suites.iter().all(|a| a.ok());
    match out.format {
        Format::Json => out.summary(&OracleOut {
            n: *n as usize,
            ok,
            suites,
        })?,
        _ => {
            for s in &suites {
                out.record(s)?;
            }
        }
    }
    if !ok {
        return Err(anyhow::anyhow!("closed forms disagree with direct computation").into());
    }
    Ok(())
}

fn dispatch(cli: &Cli, out: &mut Out) -> Outcome {
    match &cli.command {
        Command::Complexes(c) => complexes(c, out),
        Command::Resolutions(c) => resolutions(c, out),
        Command::Chambers(c) => chambers(c, out),
        Command::Bunches(c) => bunches(c, out),
        Command::Cox(c) => cox(c, out),
        Command::Oracle(c) => oracle(c, out),
    }
}

fn run_parsed(cli: &Cli, out: &mut Out) -> Outcome {
    #[cfg(feature = "parallel")]
    {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs as usize)
            .build()
            .map_err(|e| Failure {
                code: 1,
                error: e.into(),
            })?;
        pool.install(|| dispatch(cli, out))
    }
    #[cfg(not(feature = "parallel"))]
    {
        dispatch(cli, out)
    }
}

/// Parse `args`, run the command and return the exit status: 0 on success,
/// 1 when a computation fails, 2 on a usage error.
pub fn run<I, T>(args: I, stdout: &mut (dyn Write + Send), stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(stdout, "{text}")
            } else {
                write!(stderr, "{text}")
            };
            return code;
        }
    };
    let mut out = Out {
        w: stdout,
        format: cli.format,
        csv_header: false,
    };
    let result = run_parsed(&cli, &mut out);
    let _ = stdout.flush();
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(stderr, "error: {:#}", f.error);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut o = Vec::new();
        let mut e = Vec::new();
        let mut full = vec!["hyperpolygon"];
        full.extend_from_slice(args);
        let code = run(full, &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn counts_complexes() {
        let (code, out, _) = call(&["complexes", "count", "--n", "5"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), r#"{"n":5,"full_only":false,"count":81}"#);
        let (_, out, _) = call(&["complexes", "count", "--n", "5", "--full-only", "--format", "plain"]);
        assert!(out.contains("count: 76"));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(call(&["complexes", "count", "--n", "12"]).0, 2);
        assert_eq!(call(&["chambers", "count", "--arrangement", "B", "--n", "6"]).0, 2);
        assert_eq!(
            call(&["chambers", "count", "--arrangement", "A", "--n", "5", "--in-cone", "F", "--method", "charpoly"]).0,
            2
        );
        assert_eq!(call(&["chambers", "count", "--arrangement", "A", "--n", "5", "--at-ray", "1,x"]).0, 2);
        assert_eq!(call(&["bogus"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn csv_output() {
        let (code, out, _) = call(&["complexes", "count", "--n", "4", "--format", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(out, "n,full_only,count\n4,false,12\n");
    }
}
