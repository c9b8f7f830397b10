//! `etacert`: expand eta quotients, dissect them, run finite checks and
//! replay certificates from the command line.
//!
//! Exit codes: 0 success, 1 failed theorem or replay mismatch, 2 hypothesis
//! violation, 3 counterexample, 4 membership conditions unverified (strict
//! mode), 64 usage or parse error, 65 order cap exceeded, 74 I/O error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use etacert::dissect::dissect;
use etacert::eta::parse_pairs;
use etacert::finite_check::{
    replay_certificate, verify_instance, CertificateStatus, DeltaStarMode, FiniteCheckError,
    RsCertificate, RsInstance, VerifyOptions, Witness, DEFAULT_ORDER_CAP,
};
use etacert::pipelines::{default_order, run_theorem, ProofReport, StepStatus, TheoremId};
use etacert::{expand_eta_quotient, EtaQuotientSpec};
use serde_json::json;

const EXIT_FAIL: u8 = 1;
const EXIT_HYPOTHESIS: u8 = 2;
const EXIT_COUNTEREXAMPLE: u8 = 3;
const EXIT_DELTA_STAR: u8 = 4;
const EXIT_USAGE: u8 = 64;
const EXIT_ORDER_CAP: u8 = 65;
const EXIT_IO: u8 = 74;

#[derive(Parser, Debug)]
#[command(name = "etacert", version, about = "Exact eta-quotient expansions and certified congruence checks")]
struct Cli {
    /// Largest series order any command may expand to.
    #[arg(long, global = true, env = "ETA_CERT_ORDER_CAP", default_value_t = DEFAULT_ORDER_CAP)]
    order_cap: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the result here (atomically). Certificates and reports are
    /// always written as JSON.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the coefficients of an eta quotient.
    Expand {
        /// Comma-separated `delta:exponent` pairs, e.g. `1:-3,2:1`.
        #[arg(long, allow_hyphen_values = true)]
        spec: String,
        #[arg(long)]
        order: usize,
        /// Reduce coefficients modulo this number.
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
    /// Split an eta quotient by exponent class modulo `m`.
    Dissect {
        #[arg(long, allow_hyphen_values = true)]
        spec: String,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 100)]
        order: usize,
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
    /// Run the finite check for `c_r(m n + t') = 0 (mod u)` and emit a certificate.
    RsCheck {
        #[arg(long)]
        m: u64,
        /// Level of `r`.
        #[arg(long = "M")]
        eta_level: u64,
        /// Group level; `r'` is indexed by its divisors.
        #[arg(long = "N")]
        group_level: u64,
        #[arg(long)]
        t: u64,
        #[arg(long, allow_hyphen_values = true)]
        r: String,
        #[arg(long = "r-prime", allow_hyphen_values = true)]
        r_prime: String,
        #[arg(long)]
        u: u64,
        /// Record the membership conditions without failing on them.
        #[arg(long)]
        assume_delta_star: bool,
        /// Check `n` up to this bound instead of `floor(v)`.
        #[arg(long)]
        check_upto: Option<u64>,
    },
    /// Run a theorem pipeline: 1, 2, 3, 4 or `regressions`.
    VerifyTheorem {
        id: String,
        /// Scan depth for the empirical steps; defaults per theorem.
        #[arg(long)]
        order: Option<usize>,
    },
    /// Recompute a certificate and compare it field by field.
    Replay {
        #[arg(long)]
        certificate: PathBuf,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        Self::new(EXIT_USAGE, message)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    match &cli.command {
        Command::Expand { spec, order, modulus } => {
            check_order(*order, cli.order_cap)?;
            let spec = parse_spec(spec)?;
            let mut series = expand_eta_quotient(&spec, *order);
            if let Some(u) = modulus {
                series = series.reduce_mod(check_modulus(*u)?);
            }
            let coeffs: Vec<String> = series.coeffs().iter().map(|c| c.to_string()).collect();
            let body = match cli.format {
                Format::Json => pretty(&json!({
                    "spec": spec.to_string(),
                    "order": order,
                    "modulus": modulus,
                    "coeffs": coeffs,
                })),
                Format::Text => coeffs
                    .iter()
                    .enumerate()
                    .fold(String::new(), |mut s, (n, c)| {
                        let _ = writeln!(s, "{n} {c}");
                        s
                    }),
            };
            emit(cli, &body, &body)?;
            Ok(0)
        }
        Command::Dissect { spec, m, order, modulus } => {
            check_order(*order, cli.order_cap)?;
            if *m == 0 {
                return Err(Failure::usage("m must be at least 1"));
            }
            let spec = parse_spec(spec)?;
            let modulus = modulus.map(check_modulus).transpose()?;
            let split = dissect(&expand_eta_quotient(&spec, *order), *m);
            let vanishing = modulus.map(|u| split.vanishing_classes_mod(u));
            let classes: Vec<_> = split
                .classes()
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    json!({
                        "class": i,
                        "nonzero_terms": c.nonzero_count(),
                        "first_exponent": c.first_nonzero(),
                        "zero_mod_u": vanishing.as_ref().map(|v| v.contains(&i)),
                    })
                })
                .collect();
            let body = match cli.format {
                Format::Json => pretty(&json!({
                    "spec": spec.to_string(),
                    "m": m,
                    "order": order,
                    "modulus": modulus,
                    "classes": classes,
                    "empty_classes": split.empty_classes(),
                    "vanishing_classes": vanishing,
                })),
                Format::Text => {
                    let mut s = String::new();
                    for (i, c) in split.classes().iter().enumerate() {
                        let _ = write!(s, "class {i}: {} nonzero terms", c.nonzero_count());
                        if let Some(v) = &vanishing {
                            if v.contains(&i) {
                                let _ = write!(s, ", zero mod {}", modulus.expect("set with vanishing"));
                            }
                        }
                        s.push('\n');
                    }
                    let _ = writeln!(s, "empty classes: {:?}", split.empty_classes());
                    if let (Some(v), Some(u)) = (&vanishing, modulus) {
                        let _ = writeln!(s, "classes zero mod {u}: {v:?}");
                    }
                    s
                }
            };
            emit(cli, &body, &body)?;
            Ok(0)
        }
        Command::RsCheck {
            m,
            eta_level,
            group_level,
            t,
            r,
            r_prime,
            u,
            assume_delta_star,
            check_upto,
        } => {
            let r = parse_pairs(r).map_err(|e| Failure::usage(format!("--r: {e}")))?;
            let rp = parse_pairs(r_prime).map_err(|e| Failure::usage(format!("--r-prime: {e}")))?;
            let instance = RsInstance::new(*m, *eta_level, *group_level, *t, &r, &rp, *u)
                .map_err(|e| Failure::usage(e.to_string()))?;
            let options = VerifyOptions {
                delta_star: if *assume_delta_star {
                    DeltaStarMode::Assume
                } else {
                    DeltaStarMode::Strict
                },
                order_cap: cli.order_cap,
                check_upto: *check_upto,
            };
            let cert = verify_instance(&instance, &options).map_err(finite_check_failure)?;
            let json = cert.to_json();
            let text = match cli.format {
                Format::Json => json.clone(),
                Format::Text => certificate_text(&cert),
            };
            emit(cli, &text, &json)?;
            Ok(match cert.status {
                CertificateStatus::Verified => 0,
                CertificateStatus::HypothesisViolation => EXIT_HYPOTHESIS,
                CertificateStatus::Counterexample => EXIT_COUNTEREXAMPLE,
                CertificateStatus::DeltaStarUnverified => EXIT_DELTA_STAR,
            })
        }
        Command::VerifyTheorem { id, order } => {
            let theorem = TheoremId::parse(id).ok_or_else(|| {
                Failure::usage(format!("unknown theorem {id:?}; expected 1, 2, 3, 4 or regressions"))
            })?;
            let order = order.unwrap_or_else(|| default_order(theorem));
            check_order(order, cli.order_cap)?;
            let report = run_theorem(theorem, order).map_err(|e| match e {
                etacert::pipelines::PipelineError::FiniteCheck(fc) => finite_check_failure(fc),
                other => Failure::new(EXIT_FAIL, other.to_string()),
            })?;
            let json = report.to_json();
            let text = match cli.format {
                Format::Json => json.clone(),
                Format::Text => report_text(&report),
            };
            emit(cli, &text, &json)?;
            Ok(if report.overall() { 0 } else { EXIT_FAIL })
        }
        Command::Replay { certificate } => {
            let raw = fs::read_to_string(certificate)
                .map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", certificate.display())))?;
            let cert: RsCertificate = serde_json::from_str(&raw)
                .map_err(|e| Failure::usage(format!("{}: {e}", certificate.display())))?;
            match replay_certificate(&cert, cli.order_cap) {
                Ok(()) => {
                    let body = match cli.format {
                        Format::Json => pretty(&json!({ "replay": "match", "status": cert.status })),
                        Format::Text => format!("replay matches; status {:?}\n", cert.status),
                    };
                    emit(cli, &body, &body)?;
                    Ok(0)
                }
                Err(etacert::finite_check::ReplayError::Verify(e)) => Err(finite_check_failure(e)),
                Err(e) => Err(Failure::new(EXIT_FAIL, e.to_string())),
            }
        }
    }
}

fn parse_spec(text: &str) -> Result<EtaQuotientSpec, Failure> {
    text.parse().map_err(|e| Failure::usage(format!("--spec: {e}")))
}

fn check_order(order: usize, cap: usize) -> Result<(), Failure> {
    if order > cap {
        return Err(Failure::new(EXIT_ORDER_CAP, format!("order {order} exceeds the cap {cap}")));
    }
    Ok(())
}

fn check_modulus(u: u64) -> Result<u64, Failure> {
    if u == 0 {
        return Err(Failure::usage("--mod must be positive"));
    }
    Ok(u)
}

fn finite_check_failure(e: FiniteCheckError) -> Failure {
    let code = match e {
        FiniteCheckError::OrderCapExceeded { .. } => EXIT_ORDER_CAP,
        FiniteCheckError::InsufficientCheckRange { .. } => EXIT_USAGE,
        FiniteCheckError::HypothesisViolation { .. } => EXIT_HYPOTHESIS,
        FiniteCheckError::CoefficientNonzero { .. } => EXIT_COUNTEREXAMPLE,
        FiniteCheckError::DeltaStarUnverified { .. } => EXIT_DELTA_STAR,
        FiniteCheckError::InternalAssertion { .. } | FiniteCheckError::Overflow(_) => EXIT_FAIL,
    };
    Failure::new(code, e.to_string())
}

fn pretty(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json value serializes");
    s.push('\n');
    s
}

/// Prints `shown` on stdout, or writes `artifact` to `--output` when given.
fn emit(cli: &Cli, shown: &str, artifact: &str) -> Result<(), Failure> {
    match &cli.output {
        Some(path) => {
            let mut body = artifact.to_string();
            if !body.ends_with('\n') {
                body.push('\n');
            }
            write_atomic(path, &body).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))
        }
        None => {
            print!("{shown}");
            if !shown.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn write_atomic(path: &Path, body: &str) -> std::io::Result<()> {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp{}", std::process::id()));
    fs::write(&tmp, body)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

fn certificate_text(cert: &RsCertificate) -> String {
    let inst = &cert.instance;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "instance: m={} M={} N={} t={} r={} r'={} u={}",
        inst.m(),
        inst.eta_level(),
        inst.group_level(),
        inst.t(),
        inst.r(),
        inst.r_prime(),
        inst.u()
    );
    let _ = writeln!(s, "kappa: {}", cert.kappa);
    let _ = writeln!(s, "p_set: {:?}", cert.p_set);
    let _ = writeln!(s, "index: {}", cert.index);
    for row in &cert.cusp_table {
        let _ = writeln!(
            s,
            "cusp gamma_{}: p = {}/{}, p* = {}/{}",
            row.delta, row.p_min_num, row.p_min_den, row.p_star_num, row.p_star_den
        );
    }
    let _ = writeln!(s, "v: {}/{} (floor {})", cert.v.num, cert.v.den, cert.v.floor);
    if let Some(n) = cert.checked_upto {
        let _ = writeln!(s, "checked n <= {n} at order {}", cert.expansion_order.unwrap_or(0));
    }
    match cert.delta_star.holds {
        Some(h) => {
            let _ = writeln!(s, "membership conditions: {}", if h { "hold" } else { "fail" });
        }
        None => {
            let _ = writeln!(s, "membership conditions: assumed");
        }
    }
    match &cert.witness {
        Some(Witness::Cusp { delta, sum_num, sum_den }) => {
            let _ = writeln!(s, "witness: cusp sum {sum_num}/{sum_den} at gamma_{delta}");
        }
        Some(Witness::Coefficient { t_prime, n, exponent, residue }) => {
            let _ = writeln!(s, "witness: t'={t_prime} n={n} (q^{exponent}) residue {residue}");
        }
        None => {}
    }
    if let Some(h) = &cert.series_hash {
        let _ = writeln!(s, "series_hash: {h}");
    }
    let _ = writeln!(s, "status: {}", status_name(cert.status));
    s
}

fn status_name(status: CertificateStatus) -> &'static str {
    match status {
        CertificateStatus::Verified => "verified",
        CertificateStatus::HypothesisViolation => "hypothesis_violation",
        CertificateStatus::Counterexample => "counterexample",
        CertificateStatus::DeltaStarUnverified => "delta_star_unverified",
    }
}

fn report_text(report: &ProofReport) -> String {
    let mut s = String::new();
    for step in report.steps() {
        let mark = match step.status {
            StepStatus::Pass => "PASS",
            StepStatus::Fail => "FAIL",
        };
        let _ = write!(s, "{mark} {} (order {})", step.name, step.order);
        if let Some(note) = &step.note {
            let _ = write!(s, ": {note}");
        }
        s.push('\n');
        if let Some(w) = &step.witness {
            let _ = writeln!(s, "     witness q^{} = {}: {}", w.exponent, w.value, w.detail);
        }
    }
    let _ = writeln!(s, "overall: {}", if report.overall() { "pass" } else { "fail" });
    s
}
