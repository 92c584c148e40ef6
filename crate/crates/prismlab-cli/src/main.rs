//! `prismlab` — command-line front end for the prism/δ-ring toolkit.
//!
//! Every subcommand reads its input from a `prismlab-spec v1` file (or from
//! numeric flags for the purely arithmetic commands), runs one library
//! routine, and prints a report either as text or as a stable JSON envelope
//! (`--format json`).  Output is byte-identical across runs: all sampling is
//! seeded, all maps are ordered, and no timestamps are emitted.
//!
//! Exit codes: `0` verified / computed, `1` the property checked is false,
//! `2` the computation could not decide or the window was too small,
//! `64` usage error, `65` malformed input.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use prismlab::arith::{RingSpec, TruncSeries};
use prismlab::cohen::{
    build_presentation, correspondence_automorphism, small_base_check, CohenError,
    CohenPresentation,
};
use prismlab::koszul::{ht_filtration_table, lci_discreteness_check, VerdictScope};
use prismlab::kunzartin::{artin_build, frobenius_flat};
use prismlab::localring::{hilbert_samuel, regularity_verdict, RegularityStatus};
use prismlab::pdenv::{counterexample_report, PdError};
use prismlab::prism::{normalize_orientation, regseq_suite, verify_prism, PrismError, PrismKind};
use prismlab::reader::{load_spec, parse_expression, ReaderError, SpecFile};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "prismlab",
    version,
    about = "Exact verification of prisms, Frobenius flatness, and local-ring presentations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for parallel sections (0 keeps the library default).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the prism axioms for the orientation in the spec file.
    VerifyPrism {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Rewrite the orientation to the canonical shape p - f.
    Normalize {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Classify a verified prism as transversal or crystalline.
    Classify {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Evaluate the equivalent regular-sequence conditions for a prism.
    Regseq {
        #[arg(long)]
        spec: PathBuf,
        /// Largest Frobenius twist to include.
        #[arg(long, default_value_t = 3)]
        i_max: u32,
    },
    /// Three-valued regularity verdict for the presented quotient.
    Regularity {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Hilbert-Samuel lengths of the presented quotient.
    HilbertSamuel {
        #[arg(long)]
        spec: PathBuf,
        /// Deepest power of the maximal ideal to sample.
        #[arg(long, default_value_t = 6)]
        s_max: u32,
    },
    /// Kunz flatness test for Frobenius on the Artinian fiber algebra.
    KunzArtinian {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Hodge-Tate graded ranks and filtration totals.
    HodgeTate {
        /// Number of extra generators.
        #[arg(long)]
        rank_r: u32,
        /// Largest graded piece to tabulate.
        #[arg(long, default_value_t = 6)]
        j_max: u32,
    },
    /// Local-complete-intersection discreteness check on the fiber.
    LciCheck {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Verify the divided-power counterexample at a prime.
    Counterexample {
        #[arg(long, default_value_t = 2)]
        prime: u32,
        /// Coefficient precision (digits of p).
        #[arg(long, default_value_t = 2)]
        precision: u32,
        /// Divided-power window size (defaults to prime squared).
        #[arg(long)]
        pd_top: Option<usize>,
    },
    /// Verify change-of-basis data between two presentations.
    Correspond {
        #[arg(long)]
        spec: PathBuf,
        /// Second spec file over the same ring window.
        #[arg(long)]
        iprime: PathBuf,
        /// Matrix rows separated by ';', entries by ',' (expressions).
        #[arg(long)]
        matrix: String,
    },
    /// Sample the delta-ring axioms on random window elements.
    Axioms {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 64)]
        samples: u32,
        #[arg(long, default_value_t = 0x00A1_10CE)]
        seed: u64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::VerifyPrism { .. } => "verify-prism",
            Command::Normalize { .. } => "normalize",
            Command::Classify { .. } => "classify",
            Command::Regseq { .. } => "regseq",
            Command::Regularity { .. } => "regularity",
            Command::HilbertSamuel { .. } => "hilbert-samuel",
            Command::KunzArtinian { .. } => "kunz-artinian",
            Command::HodgeTate { .. } => "hodge-tate",
            Command::LciCheck { .. } => "lci-check",
            Command::Counterexample { .. } => "counterexample",
            Command::Correspond { .. } => "correspond",
            Command::Axioms { .. } => "axioms",
        }
    }
}

// ---------------------------------------------------------------------------
// Outcome plumbing
// ---------------------------------------------------------------------------

const EXIT_OK: i32 = 0;
const EXIT_FALSE: i32 = 1;
const EXIT_UNDECIDED: i32 = 2;
const EXIT_USAGE: i32 = 64;
const EXIT_DATA: i32 = 65;

/// A finished command: verdict, payload, rendered text, exit code.
struct Outcome {
    ok: bool,
    exit: i32,
    data: serde_json::Value,
    text: String,
}

impl Outcome {
    fn ok<T: Serialize>(data: &T, text: String) -> Self {
        Outcome {
            ok: true,
            exit: EXIT_OK,
            data: to_value(data),
            text,
        }
    }

    fn negative<T: Serialize>(data: &T, text: String) -> Self {
        Outcome {
            ok: false,
            exit: EXIT_FALSE,
            data: to_value(data),
            text,
        }
    }

    fn undecided<T: Serialize>(data: &T, text: String) -> Self {
        Outcome {
            ok: false,
            exit: EXIT_UNDECIDED,
            data: to_value(data),
            text,
        }
    }
}

fn to_value<T: Serialize>(data: &T) -> serde_json::Value {
    serde_json::to_value(data).expect("report serialization cannot fail")
}

/// A command that could not produce a verdict at all.
struct Failure {
    exit: i32,
    message: String,
}

impl Failure {
    fn data(message: impl Into<String>) -> Self {
        Failure {
            exit: EXIT_DATA,
            message: message.into(),
        }
    }

    fn compute(message: impl Into<String>) -> Self {
        Failure {
            exit: EXIT_UNDECIDED,
            message: message.into(),
        }
    }
}

impl From<ReaderError> for Failure {
    fn from(e: ReaderError) -> Self {
        Failure::data(e.to_string())
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };

    #[cfg(feature = "parallel")]
    if cli.threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }

    let name = cli.command.name();
    match run(&cli.command) {
        Ok(outcome) => {
            match cli.format {
                Format::Text => println!("{}", outcome.text),
                Format::Json => {
                    let envelope = serde_json::json!({
                        "schema_version": SCHEMA_VERSION,
                        "command": name,
                        "ok": outcome.ok,
                        "data": outcome.data,
                    });
                    println!("{}", serde_json::to_string_pretty(&envelope).unwrap());
                }
            }
            std::process::exit(outcome.exit);
        }
        Err(failure) => {
            match cli.format {
                Format::Text => eprintln!("error: {}", failure.message),
                Format::Json => {
                    let envelope = serde_json::json!({
                        "schema_version": SCHEMA_VERSION,
                        "command": name,
                        "ok": false,
                        "error": failure.message,
                    });
                    println!("{}", serde_json::to_string_pretty(&envelope).unwrap());
                }
            }
            std::process::exit(failure.exit);
        }
    }
}

fn run(command: &Command) -> Result<Outcome, Failure> {
    match command {
        Command::VerifyPrism { spec } => cmd_verify_prism(spec),
        Command::Normalize { spec } => cmd_normalize(spec),
        Command::Classify { spec } => cmd_classify(spec),
        Command::Regseq { spec, i_max } => cmd_regseq(spec, *i_max),
        Command::Regularity { spec } => cmd_regularity(spec),
        Command::HilbertSamuel { spec, s_max } => cmd_hilbert_samuel(spec, *s_max),
        Command::KunzArtinian { spec } => cmd_kunz_artinian(spec),
        Command::HodgeTate { rank_r, j_max } => cmd_hodge_tate(*rank_r, *j_max),
        Command::LciCheck { spec } => cmd_lci_check(spec),
        Command::Counterexample {
            prime,
            precision,
            pd_top,
        } => cmd_counterexample(*prime, *precision, *pd_top),
        Command::Correspond {
            spec,
            iprime,
            matrix,
        } => cmd_correspond(spec, iprime, matrix),
        Command::Axioms {
            spec,
            samples,
            seed,
        } => cmd_axioms(spec, *samples, *seed),
    }
}

// ---------------------------------------------------------------------------
// Shared input helpers
// ---------------------------------------------------------------------------

fn load(path: &Path) -> Result<SpecFile, Failure> {
    Ok(load_spec(path)?)
}

/// Prism commands work on a principal ideal: the single generator is the
/// orientation candidate.
fn single_orientation(spec: &SpecFile) -> Result<TruncSeries, Failure> {
    match spec.ideal_gens.len() {
        1 => Ok(spec.ideal_gens[0].clone()),
        n => Err(Failure::data(format!(
            "this command needs exactly one ideal generator (the orientation); found {n}"
        ))),
    }
}

/// Shared construction for the quotient-presentation commands: orient the
/// ideal and rewrite the remaining generators.
fn presentation(spec: &SpecFile) -> Result<CohenPresentation, Failure> {
    build_presentation(&spec.delta, &spec.ideal_gens).map_err(|e| match e {
        CohenError::NoOrientationFound { .. } => Failure::data(e.to_string()),
        other => Failure::compute(other.to_string()),
    })
}

fn kind_str(kind: PrismKind) -> &'static str {
    match kind {
        PrismKind::Transversal => "transversal",
        PrismKind::Crystalline => "crystalline",
    }
}

/// These orientation failures are verdicts ("this is not a prism"), not
/// computation failures.
fn prism_negative(e: &PrismError) -> bool {
    matches!(
        e,
        PrismError::NotInMaximalIdeal { .. }
            | PrismError::NotDistinguished { .. }
            | PrismError::MembershipFailed { .. }
            | PrismError::NormalizationFailed { .. }
    )
}

#[derive(Serialize)]
struct ReasonReport {
    reason: String,
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_verify_prism(path: &Path) -> Result<Outcome, Failure> {
    let spec = load(path)?;
    let d = single_orientation(&spec)?;
    match verify_prism(&spec.delta, &d) {
        Ok(prism) => {
            let cert = prism.certificate();
            let text = [
                "prism verified".to_string(),
                format!("kind: {}", kind_str(prism.kind())),
                format!("orientation: {}", prism.orientation()),
                format!("normalized: p - ({})", prism.normalized_f()),
                format!("delta(d) constant: {}", cert.delta_constant),
                format!(
                    "membership: p = a*d + b*phi(d) with a = {}",
                    cert.membership_a
                ),
                format!("            b = {}", cert.membership_b),
                format!("normalization unit: {}", cert.normalization_unit),
                format!("completeness: {}", cert.completeness),
            ]
            .join("\n");
            Ok(Outcome::ok(&prism, text))
        }
        Err(e) if prism_negative(&e) => {
            let report = ReasonReport {
                reason: e.to_string(),
            };
            Ok(Outcome::negative(&report, format!("not a prism: {e}")))
        }
        Err(e) => Err(Failure::compute(e.to_string())),
    }
}

fn cmd_normalize(path: &Path) -> Result<Outcome, Failure> {
    let spec = load(path)?;
    let d = single_orientation(&spec)?;
    match normalize_orientation(&spec.delta, &d) {
        Ok((f, u)) => {
            #[derive(Serialize)]
            struct NormalizeReport {
                orientation: String,
                f: String,
                unit: String,
            }
            let report = NormalizeReport {
                orientation: d.to_string(),
                f: f.to_string(),
                unit: u.to_string(),
            };
            let text = [
                format!("orientation: {d}"),
                format!("normalized: p - ({f})"),
                format!("unit u with u*(p - f) = d: {u}"),
            ]
            .join("\n");
            Ok(Outcome::ok(&report, text))
        }
        Err(e) if prism_negative(&e) => {
            let report = ReasonReport {
                reason: e.to_string(),
            };
            Ok(Outcome::negative(&report, format!("not normalizable: {e}")))
        }
        Err(e) => Err(Failure::compute(e.to_string())),
    }
}

fn cmd_classify(path: &Path) -> Result<Outcome, Failure> {
    let spec = load(path)?;
    let d = single_orientation(&spec)?;
    match verify_prism(&spec.delta, &d) {
        Ok(prism) => {
            #[derive(Serialize)]
            struct ClassifyReport {
                kind: PrismKind,
                orientation: String,
                normalized_f: String,
            }
            let report = ClassifyReport {
                kind: prism.classify(),
                orientation: d.to_string(),
                normalized_f: prism.normalized_f().to_string(),
            };
            Ok(Outcome::ok(
                &report,
                format!("kind: {}", kind_str(prism.classify())),
            ))
        }
        Err(e) if prism_negative(&e) => {
            let report = ReasonReport {
                reason: e.to_string(),
            };
            Ok(Outcome::negative(&report, format!("not a prism: {e}")))
        }
        Err(e) => Err(Failure::compute(e.to_string())),
    }
}

fn cmd_regseq(path: &Path, i_max: u32) -> Result<Outcome, Failure> {
    let spec = load(path)?;
    let d = single_orientation(&spec)?;
    let prism = match verify_prism(&spec.delta, &d) {
        Ok(p) => p,
        Err(e) if prism_negative(&e) => {
            let report = ReasonReport {
                reason: e.to_string(),
            };
            return Ok(Outcome::negative(&report, format!("not a prism: {e}")));
        }
        Err(e) => return Err(Failure::compute(e.to_string())),
    };
    let report = regseq_suite(&prism, i_max).map_err(|e| Failure::compute(e.to_string()))?;
    let mut lines = Vec::new();
    for c in &report.conditions {
        lines.push(format!(
            "[{}] ({}) {}: {}",
            if c.holds { "ok" } else { "FAIL" },
            c.index,
            c.condition,
            c.evidence
        ));
    }
    lines.push(format!(
        "conditions agree: {}; overall: {}",
        report.all_agree,
        if report.overall {
            "regular"
        } else {
            "not regular"
        }
    ));
    let text = lines.join("\n");
    if report.overall {
        Ok(Outcome::ok(&report, text))
    } else {
        Ok(Outcome::negative(&report, text))
    }
}

fn cmd_regularity(path: &Path) -> Result<Outcome, Failure> {
    let spec = load(path)?;
    let pres = presentation(&spec)?;
    let local = pres
        .local_presentation()
        .map_err(|e| Failure::compute(e.to_string()))?;
    let verdict = regularity_verdict(&local).map_err(|e| Failure::compute(e.to_string()))?;
    let small = small_base_check(&pres).map_err(|e| Failure::compute(e.to_string()))?;

    #[derive(Serialize)]
    struct RegularityReport {
        orientation_f: String,
        residual_gens: Vec<String>,
        verdict: prismlab::localring::RegularityVerdict,
        small_base: prismlab::cohen::SmallBaseReport,
    }
    let report = RegularityReport {
        orientation_f: pres.orientation_f().to_string(),
        residual_gens: pres.residual_gens().iter().map(|g| g.to_string()).collect(),
        verdict: verdict.clone(),
        small_base: small.clone(),
    };

    let mut lines = vec![
        format!("presentation: orientation p - ({})", pres.orientation_f()),
        format!(
            "residual generators: {}",
            if report.residual_gens.is_empty() {
                "(none)".to_string()
            } else {
                report.residual_gens.join(", ")
            }
        ),
        format!(
            "status: {}",
            match verdict.status {
                RegularityStatus::ProvenRegular => "proven regular",
                RegularityStatus::ProvenSingular => "proven singular",
                RegularityStatus::Undecided => "undecided",
            }
        ),
        format!(
            "dim: {}",
            verdict.dim.map_or("unknown".to_string(), |d| d.to_string())
        ),
        format!("emdim: {}", verdict.emdim),
    ];
    for c in &verdict.certificate {
        lines.push(format!("evidence: {c}"));
    }
    for b in &verdict.blockers {
        lines.push(format!("blocker: {b}"));
    }
    if !verdict.hilbert_samuel.is_empty() {
        let hs: Vec<String> = verdict.hilbert_samuel.iter().map(u64::to_string).collect();
        lines.push(format!("hilbert-samuel lengths: {}", hs.join(", ")));
    }
    lines.push(format!(
        "base: dim {} vs emdim+1 = {} -> {}",
        small.base_dim,
        small.emdim_plus_one,
        if small.minimal {
            "minimal"
        } else if small.small {
            "small"
        } else {
            "not small"
        }
    ));
    let text = lines.join("\n");

    match verdict.status {
        RegularityStatus::ProvenRegular => Ok(Outcome::ok(&report, text)),
        RegularityStatus::ProvenSingular => Ok(Outcome::negative(&report, text)),
        RegularityStatus::Undecided => Ok(Outcome::undecided(&report, text)),
    }
}

fn cmd_hilbert_samuel(path: &Path, s_max: u32) -> Result<Outcome, Failure> {
    let spec = load(path)?;
    let pres = presentation(&spec)?;
    let local = pres
        .local_presentation()
        .map_err(|e| Failure::compute(e.to_string()))?;
    let lengths = hilbert_samuel(&local, s_max).map_err(|e| Failure::compute(e.to_string()))?;

    #[derive(Serialize)]
    struct HsReport {
        s_max: u32,
        lengths: Vec<u64>,
    }
    let report = HsReport {
        s_max,
        lengths: lengths.clone(),
    };
    let mut lines = Vec::new();
    for (i, len) in lengths.iter().enumerate() {
        lines.push(format!("length of R/m^{}: {}", i + 1, len));
    }
    Ok(Outcome::ok(&report, lines.join("\n")))
}

fn cmd_kunz_artinian(path: &Path) -> Result<Outcome, Failure> {
    let spec = load(path)?;
    let fiber_gens: Vec<_> = spec
        .ideal_gens
        .iter()
        .map(TruncSeries::fiber_reduce)
        .collect();
    let algebra = artin_build(&fiber_gens).map_err(|e| Failure::data(e.to_string()))?;
    let cert = frobenius_flat(&algebra);

    #[derive(Serialize)]
    struct KunzReport {
        prime: u32,
        dim: usize,
        basis: Vec<String>,
        certificate: prismlab::kunzartin::FlatnessCertificate,
    }
    let report = KunzReport {
        prime: algebra.prime(),
        dim: algebra.dim(),
        basis: algebra.labels().to_vec(),
        certificate: cert.clone(),
    };
    let text = [
        format!("fiber algebra dimension: {}", algebra.dim()),
        format!("monomial basis: {}", algebra.labels().join(", ")),
        format!("Frobenius pushforward flat: {}", cert.flat),
        format!(
            "minimal generators g = {}, lengths: module {} vs g*ring {}",
            cert.generators_needed,
            cert.length_module,
            cert.generators_needed * cert.length_ring
        ),
        format!("reason: {}", cert.reason),
    ]
    .join("\n");
    if cert.flat {
        Ok(Outcome::ok(&report, text))
    } else {
        Ok(Outcome::negative(&report, text))
    }
}

fn cmd_hodge_tate(rank_r: u32, j_max: u32) -> Result<Outcome, Failure> {
    if rank_r + j_max > 66 {
        return Err(Failure::data(format!(
            "rank-r + j-max must be at most 66 to avoid rank overflow; got {}",
            rank_r + j_max
        )));
    }
    let table = ht_filtration_table(rank_r, j_max);
    let mut lines = vec![format!(
        "graded ranks for r = {} extra generators:",
        table.r
    )];
    for (i, rank) in table.ranks.iter().enumerate() {
        lines.push(format!(
            "  piece {} (twist {}): rank {}",
            i, table.twists[i], rank
        ));
    }
    let filt: Vec<String> = table.filtration.iter().map(u64::to_string).collect();
    lines.push(format!("filtration totals: {}", filt.join(", ")));
    Ok(Outcome::ok(&table, lines.join("\n")))
}

fn cmd_lci_check(path: &Path) -> Result<Outcome, Failure> {
    let spec = load(path)?;
    let pres = presentation(&spec)?;
    let local = pres
        .local_presentation()
        .map_err(|e| Failure::compute(e.to_string()))?;
    let verdict = lci_discreteness_check(&local).map_err(|e| Failure::compute(e.to_string()))?;
    let text = [
        format!("regular sequence: {}", verdict.holds),
        format!(
            "scope: {}",
            match verdict.scope {
                VerdictScope::CertifiedLocal => "certified at the origin",
                VerdictScope::GlobalOnly => "global semantics only",
            }
        ),
        format!(
            "dimension drop: ambient {} -> quotient {}",
            verdict.ambient_dim, verdict.quotient_dim
        ),
        format!("detail: {}", verdict.detail),
    ]
    .join("\n");
    if verdict.certified_true() {
        Ok(Outcome::ok(&verdict, text))
    } else if verdict.certified_false() {
        Ok(Outcome::negative(&verdict, text))
    } else {
        Ok(Outcome::undecided(&verdict, text))
    }
}

fn cmd_counterexample(
    prime: u32,
    precision: u32,
    pd_top: Option<usize>,
) -> Result<Outcome, Failure> {
    let top = pd_top.unwrap_or((prime as usize).saturating_mul(prime as usize));
    let report = counterexample_report(prime, precision, top).map_err(|e| match e {
        PdError::NotPrime(_) | PdError::WindowTooSmall { .. } | PdError::PrecisionTooLow { .. } => {
            Failure::data(e.to_string())
        }
        other => Failure::compute(other.to_string()),
    })?;
    let text = [
        format!(
            "divided-power window: prime {}, precision {}, top degree {}",
            report.p, report.precision, report.top
        ),
        format!("T nonzero in fiber: {}", report.t_nonzero_in_fiber),
        format!("T^p = 0 in fiber: {}", report.t_pth_power_zero),
        format!(
            "fiber Frobenius flat: {} (g = {}, lengths {} vs {})",
            report.fiber_flatness.flat,
            report.fiber_flatness.generators_needed,
            report.fiber_flatness.length_module,
            report.fiber_flatness.length_ring
        ),
        format!(
            "quotient regular: {} (dim {})",
            matches!(report.quotient_status, RegularityStatus::ProvenRegular),
            report
                .quotient_dim
                .map_or("unknown".to_string(), |d| d.to_string())
        ),
        format!(
            "base dim {} vs emdim+1 = {}: small base: {}",
            report.base_dim, report.emdim_plus_one, report.small_base
        ),
        format!(
            "counterexample verified: {}",
            if report.verdict { "yes" } else { "no" }
        ),
    ]
    .join("\n");
    if report.verdict {
        Ok(Outcome::ok(&report, text))
    } else {
        Ok(Outcome::negative(&report, text))
    }
}

fn cmd_correspond(path: &Path, iprime: &Path, matrix_arg: &str) -> Result<Outcome, Failure> {
    let spec = load(path)?;
    let other = load(iprime)?;
    if spec.ring != other.ring {
        return Err(Failure::data(
            "the two spec files must describe the same ring window".to_string(),
        ));
    }
    let gens_xprime: Vec<TruncSeries> = other
        .ideal_gens
        .iter()
        .map(|g| transplant(g, &spec.ring))
        .collect::<Result<_, _>>()?;
    let matrix = parse_matrix(matrix_arg, &spec.ring)?;
    match correspondence_automorphism(&spec.delta, &spec.ideal_gens, &gens_xprime, &matrix) {
        Ok(report) => {
            let mut lines = vec![format!(
                "matrix invertible modulo the maximal ideal: rank {}",
                report.rank_mod_m
            )];
            for (i, img) in report.variable_images.iter().enumerate() {
                lines.push(format!("  {} -> {}", spec.ring.vars()[i], img));
            }
            for w in &report.witnesses {
                lines.push(format!(
                    "generator {} maps to {} = [{}] . gens",
                    w.generator,
                    w.image,
                    w.coefficients.join(", ")
                ));
            }
            lines.push("correspondence verified".to_string());
            Ok(Outcome::ok(&report, lines.join("\n")))
        }
        Err(e @ (CohenError::NotInvertibleModM { .. } | CohenError::CommutationFailed { .. })) => {
            let report = ReasonReport {
                reason: e.to_string(),
            };
            Ok(Outcome::negative(
                &report,
                format!("no correspondence: {e}"),
            ))
        }
        Err(e @ (CohenError::BadMatrixShape { .. } | CohenError::RingMismatch)) => {
            Err(Failure::data(e.to_string()))
        }
        Err(e) => Err(Failure::compute(e.to_string())),
    }
}

fn cmd_axioms(path: &Path, samples: u32, seed: u64) -> Result<Outcome, Failure> {
    let spec = load(path)?;
    let report = spec.delta.check_delta_axioms(samples, seed);
    let mut lines = vec![
        format!("sampled {} element pairs (seed {})", report.samples, seed),
        format!("unit laws hold: {}", report.unit_laws_hold),
    ];
    if report.violations.is_empty() {
        lines.push("all delta-ring axioms hold on the sample".to_string());
    } else {
        for v in &report.violations {
            lines.push(format!(
                "violation of {}: a = {}, b = {}: {}",
                v.law, v.witness_a, v.witness_b, v.detail
            ));
        }
    }
    let text = lines.join("\n");
    if report.all_hold() {
        Ok(Outcome::ok(&report, text))
    } else {
        Ok(Outcome::negative(&report, text))
    }
}

// ---------------------------------------------------------------------------
// Correspond input plumbing
// ---------------------------------------------------------------------------

/// Rebuild a series over an equal-by-value ring so that pointer-identity
/// checks inside the library accept the pair.
fn transplant(series: &TruncSeries, ring: &Arc<RingSpec>) -> Result<TruncSeries, Failure> {
    let terms = series
        .terms()
        .map(|(m, c)| (m.clone(), c.value() as i128))
        .collect();
    TruncSeries::from_terms(ring, terms).map_err(|e| Failure::compute(e.to_string()))
}

/// Parse `--matrix "a, b; c, d"` entries as expressions over the ring.
fn parse_matrix(arg: &str, ring: &Arc<RingSpec>) -> Result<Vec<Vec<TruncSeries>>, Failure> {
    let mut rows = Vec::new();
    for (i, row) in arg.split(';').enumerate() {
        let mut entries = Vec::new();
        for (j, entry) in row.split(',').enumerate() {
            let series = parse_expression(entry.trim(), ring)
                .map_err(|e| Failure::data(format!("matrix entry ({},{}): {e}", i + 1, j + 1)))?;
            entries.push(series);
        }
        rows.push(entries);
    }
    Ok(rows)
}
