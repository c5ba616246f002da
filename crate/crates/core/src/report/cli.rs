//! The `quadclass` command line.
//!
//! Exit status: 0 when every certificate holds and nothing failed
//! internally, 2 when a certificate is invalid or a theorem's conclusion is
//! contradicted, 1 for usage, configuration and internal errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::Signed;

use super::config::{OutputFormat, RunConfig, ENV_FACTORING_BUDGET, ENV_FORM_CAP, ENV_JOBS, ENV_THRESHOLD};
use super::persist::{load_kernel_cache, persist_records, sidecar_path};
use super::record::{self, error_record, Stamp, TorsionInput, VerificationRecord};
use crate::elliptic::{named_curve, nagell_lutz_scan, three_torsion_search, to_weierstrass};
use crate::error::Error;
use crate::families::{family_range, kernel_distinctness_scan, quadruple, quadruple_at, FamilyId, VerifyOptions};
use crate::forms::{imaginary_class_number, narrow_class_number, real_class_number, scholz_reflection, ClassNumberResult};
use crate::kishi::{kishi_certificate, HalfIntegralElement};
use crate::km::km_certificate;
use crate::number::field_from_radicand;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Ok = 0,
    Usage = 1,
    Invalid = 2,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Parser)]
#[command(name = "quadclass", version, about = "Certify and check 3-divisibility of class numbers of real quadratic fields")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

fn positive_u64(s: &str) -> Result<u64, String> {
    match s.parse::<u64>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn big(s: &str) -> Result<BigInt, String> {
    s.parse::<BigInt>().map_err(|e| e.to_string())
}

fn positive_big(s: &str) -> Result<BigInt, String> {
    let n = big(s)?;
    if n.is_positive() {
        Ok(n)
    } else {
        Err("must be positive".into())
    }
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// json-lines, csv or pretty
    #[arg(long, global = true, default_value = "json-lines")]
    format: OutputFormat,
    /// Append records to this json-lines file (deduplicated by subject key)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Omit timestamps and elapsed times so output is reproducible
    #[arg(long, global = true)]
    no_timestamps: bool,
    #[arg(long, global = true, env = ENV_JOBS, value_parser = positive_u64)]
    jobs: Option<u64>,
    /// Pollard rho iteration cap per factoring call
    #[arg(long, global = true, env = ENV_FACTORING_BUDGET, value_parser = positive_u64)]
    factoring_budget: Option<u64>,
    /// Maximum number of reduced forms enumerated per class number
    #[arg(long, global = true, env = ENV_FORM_CAP, value_parser = positive_u64)]
    form_cap: Option<u64>,
    /// Largest fundamental discriminant for direct class-number checks
    #[arg(long, global = true, env = ENV_THRESHOLD, value_parser = positive_u64)]
    threshold: Option<u64>,
}

impl GlobalArgs {
    fn config(&self) -> RunConfig {
        let mut c = RunConfig::default();
        c.output_format = self.format;
        c.timestamps = !self.no_timestamps;
        if let Some(j) = self.jobs {
            c.parallelism = j as usize;
        }
        if let Some(b) = self.factoring_budget {
            c.factoring_budget = b;
        }
        if let Some(f) = self.form_cap {
            c.form_count_cap = f;
        }
        if let Some(t) = self.threshold {
            c.direct_check_threshold = t;
        }
        c
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Certify a range of family members and check them directly when feasible
    VerifyFamily {
        family: FamilyId,
        #[arg(long, value_parser = positive_u64)]
        from: u64,
        #[arg(long, value_parser = positive_u64)]
        to: u64,
    },
    /// Assemble and certify the quadruple at D = C(k), or at an arbitrary D
    #[command(group = clap::ArgGroup::new("base").required(true).args(["k", "d"]))]
    VerifyQuadruple {
        #[arg(long, value_parser = positive_big)]
        k: Option<BigInt>,
        #[arg(long, value_parser = positive_big)]
        d: Option<BigInt>,
    },
    /// Class number of Q(√radicand) from reduced forms
    Classnumber {
        #[arg(long, allow_hyphen_values = true, value_parser = big)]
        radicand: BigInt,
        /// Report only the narrow class number
        #[arg(long)]
        narrow: bool,
    },
    /// Check 3 | h(Q(√d)) against 3 | h(Q(√−3d))
    ScholzCheck {
        #[arg(long, value_parser = positive_big)]
        d: BigInt,
    },
    /// Search for rational 3-torsion on E1, E2 or E3
    Torsion {
        #[arg(long, value_parser = ["E1", "E2", "E3"])]
        curve: String,
    },
    /// Squarefree kernels of family C radicands over a range
    ScanDistinct {
        #[arg(long, value_parser = positive_u64)]
        from: u64,
        #[arg(long, value_parser = positive_u64)]
        to: u64,
    },
    /// Check the cubic criterion for Z³ − uvZ − u²
    KmCertify {
        #[arg(long, allow_hyphen_values = true, value_parser = big)]
        u: BigInt,
        #[arg(long, allow_hyphen_values = true, value_parser = big)]
        v: BigInt,
    },
    /// Check the criterion for α = (a + b√m)/2 with cube norm
    KishiCertify {
        #[arg(long, allow_hyphen_values = true, value_parser = big)]
        a: BigInt,
        #[arg(long, allow_hyphen_values = true, value_parser = big)]
        b: BigInt,
        #[arg(long, allow_hyphen_values = true, value_parser = big)]
        m: BigInt,
    },
}

/// What a command produced.
#[derive(Debug)]
pub struct Outcome {
    pub status: ExitStatus,
    pub records: Vec<VerificationRecord>,
}

struct Usage(String);

impl From<Error> for Usage {
    fn from(e: Error) -> Self {
        Usage(e.to_string())
    }
}

fn range(from: u64, to: u64) -> Result<(), Usage> {
    if from > to {
        return Err(Usage(format!("empty range: --from {from} exceeds --to {to}")));
    }
    Ok(())
}

fn execute(command: &Command, opts: &VerifyOptions, stamp: Stamp) -> Result<Vec<VerificationRecord>, Usage> {
    Ok(match command {
        Command::VerifyFamily { family, from, to } => {
            range(*from, *to)?;
            family_range(*family, *from, *to, opts)
                .iter()
                .zip(*from..)
                .map(|(res, p)| match res {
                    Ok(inst) => record::family_record(inst, stamp),
                    Err(e) => record::family_error_record(*family, p, e, stamp),
                })
                .collect()
        }
        Command::VerifyQuadruple { k, d } => {
            let q = match (k, d) {
                (Some(k), _) => quadruple(k.clone(), opts),
                (None, Some(d)) => quadruple_at(d.clone(), opts),
                (None, None) => return Err(Usage("one of --k or --d is required".into())),
            };
            match q {
                Ok(q) => record::quadruple_records(&q, stamp),
                Err(e @ Error::NonPositiveParameter(_)) => return Err(e.into()),
                Err(e) => {
                    let (id, p) = match (k, d) {
                        (Some(k), _) => ("k", k.to_string()),
                        (_, d) => ("D", d.as_ref().map(|d| d.to_string()).unwrap_or_default()),
                    };
                    vec![error_record("quadruple", id, Some(p), &e, stamp)]
                }
            }
        }
        Command::Classnumber { radicand, narrow } => vec![classnumber(radicand, *narrow, opts, stamp)?],
        Command::ScholzCheck { d } => vec![scholz(d, opts, stamp)?],
        Command::Torsion { curve } => vec![torsion(curve, opts, stamp)?],
        Command::ScanDistinct { from, to } => {
            range(*from, *to)?;
            let report = kernel_distinctness_scan(*from, *to, opts)?;
            record::scan_records(&report, *from, *to, stamp)
        }
        Command::KmCertify { u, v } => vec![record::km_record(&km_certificate(u, v, &opts.budget), stamp)],
        Command::KishiCertify { a, b, m } => {
            let e = HalfIntegralElement::new(a.clone(), b.clone(), m.clone())?;
            vec![record::kishi_record(&kishi_certificate(&e), stamp)]
        }
    })
}

fn classnumber(radicand: &BigInt, narrow: bool, opts: &VerifyOptions, stamp: Stamp) -> Result<VerificationRecord, Usage> {
    let field = field_from_radicand(radicand, &opts.budget)?;
    let id = if narrow { "narrow" } else { "class" };
    let param = Some(radicand.to_string());
    if !field.complete {
        let e = Error::Internal(format!("squarefree kernel of {radicand} unknown within the factoring budget"));
        let mut r = error_record("classnumber", id, param, &e, stamp);
        r.status = record::RecordStatus::Incomplete;
        return Ok(r);
    }
    let Some(disc) = field.discriminant_i64() else {
        let e = Error::DiscriminantOutOfRange(field.fundamental_discriminant.clone());
        return Ok(error_record("classnumber", id, param, &e, stamp));
    };
    let result = if !field.is_real {
        imaginary_class_number(disc, opts.form_cap)
    } else if narrow {
        narrow_class_number(disc, opts.form_cap)
    } else {
        real_class_number(disc, opts.form_cap)
    };
    Ok(match result {
        Ok(r) => record::class_number_record(&field, &r, narrow, stamp),
        Err(e) => error_record("classnumber", id, param, &e, stamp),
    })
}

fn real_side(d: &BigInt, opts: &VerifyOptions) -> Option<ClassNumberResult> {
    let field = field_from_radicand(d, &opts.budget).ok()?;
    if !field.complete || field.fundamental_discriminant > BigInt::from(opts.direct_threshold) {
        return None;
    }
    real_class_number(field.discriminant_i64()?, opts.form_cap).ok()
}

fn scholz(d: &BigInt, opts: &VerifyOptions, stamp: Stamp) -> Result<VerificationRecord, Usage> {
    field_from_radicand(d, &opts.budget)?;
    let real = real_side(d, opts);
    Ok(match scholz_reflection(d, &opts.budget, opts.form_cap) {
        Ok(report) => record::scholz_record(&report, real.as_ref(), stamp),
        Err(e) => error_record("scholz", "reflection", Some(d.to_string()), &e, stamp),
    })
}

fn torsion(name: &str, opts: &VerifyOptions, stamp: Stamp) -> Result<VerificationRecord, Usage> {
    let curve = named_curve(name).ok_or_else(|| Usage(format!("unknown curve {name:?}")))?;
    let (model, scale) = to_weierstrass(&curve)?;
    let search = three_torsion_search(&model, &opts.budget);
    let scan = nagell_lutz_scan(&model, &opts.budget);
    Ok(record::torsion_record(
        &TorsionInput {
            name,
            curve: &curve,
            model: &model,
            scale: &scale,
            search: &search,
            scan: &scan,
        },
        stamp,
    ))
}

fn status_of(records: &[VerificationRecord]) -> ExitStatus {
    if records.iter().any(VerificationRecord::is_failure) {
        ExitStatus::Invalid
    } else if records.iter().any(VerificationRecord::is_error) {
        ExitStatus::Usage
    } else {
        ExitStatus::Ok
    }
}

fn write_csv(records: &[VerificationRecord], out: &mut dyn Write) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "subject_key",
        "kind",
        "id",
        "parameter",
        "status",
        "provenance",
        "certificate_valid",
        "direct_status",
        "narrow_h",
        "h",
        "notes",
    ])?;
    for r in records {
        let s = |v: &serde_json::Value| match v {
            serde_json::Value::Null => String::new(),
            serde_json::Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        let cert = r.certificate.as_ref().map(|c| s(&c["valid"])).unwrap_or_default();
        let (direct_status, narrow_h, h) = match &r.direct {
            Some(d) => (s(&d["status"]), s(&d["narrow_h"]), s(&d["h"])),
            None => Default::default(),
        };
        let provenance = serde_json::to_value(&r.provenance)
            .ok()
            .and_then(|v| v.as_array().map(|a| a.iter().map(&s).collect::<Vec<_>>().join("+")))
            .unwrap_or_default();
        w.write_record([
            r.subject_key.clone(),
            r.subject.kind.clone(),
            r.subject.id.clone(),
            r.subject.parameter.clone().unwrap_or_default(),
            s(&serde_json::to_value(r.status).unwrap_or_default()),
            provenance,
            cert,
            direct_status,
            narrow_h,
            h,
            r.notes.join("; "),
        ])?;
    }
    w.flush()
}

fn write_pretty(records: &[VerificationRecord], out: &mut dyn Write) -> std::io::Result<()> {
    for r in records {
        let status = serde_json::to_value(r.status).unwrap_or_default();
        write!(out, "{:<40} {}", r.subject_key, status.as_str().unwrap_or_default())?;
        if let Some(d) = &r.direct {
            match d["status"].as_str() {
                Some("computed") => write!(out, "  disc={} narrow_h={} h={}", d["discriminant"], d["narrow_h"], d["h"])?,
                _ => write!(out, "  direct: {}", d["reason"].as_str().unwrap_or("skipped"))?,
            }
        }
        writeln!(out)?;
        for n in &r.notes {
            writeln!(out, "    {n}")?;
        }
    }
    Ok(())
}

fn emit(records: &[VerificationRecord], config: &RunConfig, path: Option<&Path>, stdout: &mut dyn Write) -> Result<(), String> {
    if let (Some(path), OutputFormat::JsonLines) = (path, config.output_format) {
        return persist_records(records, path).map_err(|e| e.to_string());
    }
    let mut buf = Vec::new();
    let written = match config.output_format {
        OutputFormat::JsonLines => records.iter().try_for_each(|r| writeln!(buf, "{}", r.to_json_line())),
        OutputFormat::Csv => write_csv(records, &mut buf),
        OutputFormat::Pretty => write_pretty(records, &mut buf),
    };
    written.map_err(|e| e.to_string())?;
    match path {
        Some(path) => std::fs::write(path, &buf).map_err(|e| format!("{}: {e}", path.display())),
        None => stdout.write_all(&buf).map_err(|e| e.to_string()),
    }
}

/// Parses `argv` (including the program name), runs the command and writes
/// its records to `stdout` or to `--out`.
pub fn run_command<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let fail = |stderr: &mut dyn Write, msg: &str| {
        let _ = writeln!(stderr, "error: {msg}");
        Outcome {
            status: ExitStatus::Usage,
            records: Vec::new(),
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { ExitStatus::Usage } else { ExitStatus::Ok };
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return Outcome {
                status,
                records: Vec::new(),
            };
        }
    };
    let config = cli.global.config();
    if let Err(msg) = config.validate() {
        return fail(stderr, &msg);
    }
    let mut opts = config.verify_options();
    if let Some(out) = &cli.global.out {
        let sidecar = sidecar_path(out);
        if sidecar.exists() {
            match load_kernel_cache(&sidecar) {
                Ok(known) => opts.budget.known = Some(Arc::new(known)),
                Err(e) => return fail(stderr, &e.to_string()),
            }
        }
    }
    let stamp = Stamp { timing: config.timestamps };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(config.parallelism).build() {
        Ok(p) => p,
        Err(e) => return fail(stderr, &e.to_string()),
    };
    let records = match pool.install(|| execute(&cli.command, &opts, stamp)) {
        Ok(r) => r,
        Err(Usage(msg)) => return fail(stderr, &msg),
    };
    if let Err(msg) = emit(&records, &config, cli.global.out.as_deref(), stdout) {
        return fail(stderr, &msg);
    }
    Outcome {
        status: status_of(&records),
        records,
    }
}

/// Entry point for the binary: real process arguments and streams.
pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let outcome = run_command(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    outcome.status.code()
}
