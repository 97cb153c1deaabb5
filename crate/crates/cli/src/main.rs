//! Command line interface: semilattice enumeration, exact Ψ/determinant
//! analysis of GCD-closed sets, squarefree realizations and certified
//! singular-exponent search.
//!
//! Exit codes: 0 on success, 1 on domain errors (bad sets, impossible
//! constructions), 2 on usage errors.

use clap::{Args, Parser, Subcommand, ValueEnum};
use lcmlat::alpha::{
    bisect_root, construct_singular_instance, find_sign_change, AlphaError, DEFAULT_GRID,
    DEFAULT_PRECISION, DEFAULT_RANGE, DEFAULT_R_MAX,
};
use lcmlat::certified::CertifiedReal;
use lcmlat::enumeration::pipeline;
use lcmlat::formats::{
    emit_dot, emit_int_set, emit_poset, parse_int_set, parse_poset, rational_string, Report,
};
use lcmlat::intsets::{
    dual_lcm_closed, is_factor_closed, is_gcd_closed, is_lcm_closed, odd_singular_nine_set_q,
    realize_squarefree, GcdClosedSet,
};
use lcmlat::matrices::{
    det_direct, dual_det_identity, is_singular_power_lcm, join_matrix, meet_matrix, Analysis,
    ArithFn, SingularityVerdict,
};
use lcmlat::poset::Poset;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rug::Float;
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "lcmlat", version, about = "Singularity of GCD and LCM matrices via meet semilattices")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Config {
    /// Working precision for certified evaluation, in bits
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    precision: u32,
    /// Width tolerance for isolated exponents
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Cap on the inflation power used by singular-instance construction
    #[arg(long, global = true, default_value_t = DEFAULT_R_MAX)]
    r_max: u32,
    /// Seed for randomized paths; current commands are deterministic and
    /// merely echo it into the report
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate meet semilattices and run the cover/Möbius filter pipeline
    Enumerate {
        /// Number of elements (1..=9)
        #[arg(short = 'n', long = "size")]
        n: usize,
        /// Also emit the surviving representatives in poset text format
        #[arg(long)]
        reps: bool,
    },
    /// Check the odd nine-element counterexample (optionally q-scaled)
    VerifyCounterexample {
        /// Integer exponent α
        #[arg(long, default_value_t = 1)]
        alpha: u32,
        /// Scale the two largest elements by this odd factor
        #[arg(long, default_value_t = 1)]
        q: u64,
        /// Also emit the LCM-closed dual and the dual determinant identity
        #[arg(long)]
        dual: bool,
    },
    /// Isolate a singular exponent α₀ for a set file, or construct a
    /// singular instance from a semilattice structure file
    FindAlpha {
        /// GCD-closed set, one integer per line
        #[arg(long, conflicts_with = "structure")]
        set: Option<PathBuf>,
        /// Poset structure file ('n <count>' header plus cover pairs)
        #[arg(long)]
        structure: Option<PathBuf>,
        /// Index whose Ψ value is scanned (default: the maximum element)
        #[arg(long)]
        index: Option<usize>,
        /// Lower end of the scanned exponent range
        #[arg(long, default_value_t = DEFAULT_RANGE.0)]
        range_lo: f64,
        /// Upper end of the scanned exponent range
        #[arg(long, default_value_t = DEFAULT_RANGE.1)]
        range_hi: f64,
        /// Number of grid intervals scanned for a sign change
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
    },
    /// Ψ vector, determinants and singularity verdict of a set file
    Analyze {
        /// GCD-closed set, one integer per line
        #[arg(long)]
        set: PathBuf,
        /// Integer exponent α
        #[arg(long, default_value_t = 1)]
        alpha: u32,
    },
    /// Realize a semilattice structure as a squarefree integer set
    Realize {
        /// Poset structure file
        #[arg(long)]
        structure: PathBuf,
        /// Comma-separated primes to assign (default: odd primes 3,5,7,...)
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
        /// Inflate element INDEX (0-based sorted position) by power R: "INDEX:R"
        #[arg(long)]
        inflate: Option<String>,
    },
}

struct DomainError(String);

impl<E: std::fmt::Display> From<E> for DomainError {
    fn from(e: E) -> Self {
        DomainError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(DomainError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<(), DomainError> {
    let out = match &cli.command {
        Command::Enumerate { n, reps } => cmd_enumerate(cli, *n, *reps)?,
        Command::VerifyCounterexample { alpha, q, dual } => {
            cmd_verify_counterexample(cli, *alpha, *q, *dual)?
        }
        Command::FindAlpha {
            set,
            structure,
            index,
            range_lo,
            range_hi,
            grid,
        } => cmd_find_alpha(cli, set.as_deref(), structure.as_deref(), *index, (*range_lo, *range_hi), *grid)?,
        Command::Analyze { set, alpha } => cmd_analyze(cli, set, *alpha)?,
        Command::Realize {
            structure,
            primes,
            inflate,
        } => cmd_realize(cli, structure, primes, inflate.as_deref())?,
    };
    match &cli.config.output {
        Some(path) => std::fs::write(path, out).map_err(|e| DomainError(e.to_string()))?,
        None => print!("{out}"),
    }
    Ok(())
}

fn read_file(path: &std::path::Path) -> Result<String, DomainError> {
    std::fs::read_to_string(path).map_err(|e| DomainError(format!("{}: {e}", path.display())))
}

fn load_set(path: &std::path::Path) -> Result<GcdClosedSet, DomainError> {
    let ints = parse_int_set(&read_file(path)?)?;
    GcdClosedSet::try_new(ints)
        .map_err(|e| DomainError(format!("{e}; run the set through a gcd closure first")))
    }

fn load_poset(path: &std::path::Path) -> Result<Poset, DomainError> {
    Ok(parse_poset(&read_file(path)?)?)
}

fn set_strings(s: &GcdClosedSet) -> Vec<String> {
    s.elems().iter().map(|x| x.to_string()).collect()
}

fn interval_json(c: &CertifiedReal) -> serde_json::Value {
    let (lo, hi) = c.to_decimal_strings();
    json!({ "lo": lo, "hi": hi, "precision": c.precision() })
}

/// Display form of an enclosure: enough digits to separate the endpoints.
fn interval_display(c: &CertifiedReal) -> (String, String) {
    (
        c.lo().to_string_radix(10, Some(15)),
        c.hi().to_string_radix(10, Some(15)),
    )
}

// ---------------------------------------------------------------------------
// enumerate
// ---------------------------------------------------------------------------

fn cmd_enumerate(cli: &Cli, n: usize, reps: bool) -> Result<String, DomainError> {
    let stats = pipeline(n)?;
    let tags: Vec<Option<&str>> = stats.tags.iter().map(|t| t.map(|c| c.tag())).collect();
    match cli.config.format {
        Format::Json => {
            let reps_text: Vec<String> = stats.class_reps.iter().map(emit_poset).collect();
            let report = Report::new(
                "enumerate",
                json!({ "n": n, "seed": cli.config.seed }),
                json!({
                    "total_posets": stats.total_posets,
                    "meet_semilattices": stats.meet_semilattices,
                    "after_cover_filter": stats.after_cover_filter,
                    "after_mobius_filter": stats.after_mobius_filter,
                    "class_tags": tags,
                    "class_reps": if reps { Some(reps_text) } else { None },
                }),
            );
            Ok(report.to_json_pretty())
        }
        Format::Dot => {
            let mut out = String::new();
            for p in &stats.class_reps {
                out.push_str(&emit_dot(p, None));
                out.push('\n');
            }
            Ok(out)
        }
        Format::Text => {
            let mut out = String::new();
            out.push_str(&format!("n = {n}\n"));
            out.push_str(&format!("poset classes:        {}\n", stats.total_posets));
            out.push_str(&format!("meet semilattices:    {}\n", stats.meet_semilattices));
            out.push_str(&format!("after cover filter:   {}\n", stats.after_cover_filter));
            out.push_str(&format!("after Möbius filter:  {}\n", stats.after_mobius_filter));
            if n == 8 {
                let mut names: Vec<&str> = tags.iter().flatten().copied().collect();
                names.sort_unstable();
                out.push_str(&format!("classes: {}\n", names.join(", ")));
            }
            if reps {
                for (idx, p) in stats.class_reps.iter().enumerate() {
                    let tag = tags[idx].map(|t| format!(" ({t})")).unwrap_or_default();
                    out.push_str(&format!("# representative {idx}{tag}\n"));
                    out.push_str(&emit_poset(p));
                }
            }
            Ok(out)
        }
    }
}

// ---------------------------------------------------------------------------
// verify-counterexample
// ---------------------------------------------------------------------------

fn cmd_verify_counterexample(cli: &Cli, alpha: u32, q: u64, dual: bool) -> Result<String, DomainError> {
    let s = odd_singular_nine_set_q(q)?;
    let analysis = Analysis::new(s.clone());
    let top = s.len() - 1;
    let psi_top = analysis.psi(alpha, top);
    let (summands, denominator) = analysis.psi_unit_summands(top);
    let verdict = is_singular_power_lcm(
        &s,
        &BigRational::from_integer(BigInt::from(alpha)),
        cli.config.precision,
        cli.config.precision * 16,
    );

    let dual_part = if dual {
        let dual_set = dual_lcm_closed(&s)?;
        let identity = dual_det_identity(&s, alpha)?;
        Some((dual_set, identity))
    } else {
        None
    };

    match cli.config.format {
        Format::Dot => Err(DomainError("verify-counterexample has no dot output".into())),
        Format::Json => {
            let results = json!({
                "psi_at_maximum": rational_string(&psi_top),
                "summands": summands.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "common_denominator": denominator.to_string(),
                "singular": verdict.is_singular(),
                "witnesses": match &verdict {
                    SingularityVerdict::Singular { witnesses } => witnesses.clone(),
                    _ => vec![],
                },
                "dual": dual_part.as_ref().map(|(ds, id)| json!({
                    "set": ds.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "lcm_closed": is_lcm_closed(ds),
                    "det_dual_join": rational_string(&id.dual_det),
                    "det_reciprocal_meet": rational_string(&id.reciprocal_meet_det),
                    "identity_power_n": id.holds_with_power_n,
                    "identity_power_n_alpha": id.holds_with_power_n_alpha,
                })),
            });
            let report = Report::new(
                "verify-counterexample",
                json!({ "alpha": alpha, "q": q, "set": set_strings(&s) }),
                results,
            );
            Ok(report.to_json_pretty())
        }
        Format::Text => {
            let mut out = String::new();
            out.push_str(&format!("set: {{{}}}\n", set_strings(&s).join(", ")));
            out.push_str(&format!(
                "Ψ(x_{top}) at α = {alpha}: {}\n",
                rational_string(&psi_top)
            ));
            out.push_str(&format!("summands over {denominator} (descending elements):\n"));
            for v in &summands {
                out.push_str(&format!("  {v}\n"));
            }
            out.push_str(&format!(
                "sum = {}\n",
                summands.iter().sum::<BigInt>()
            ));
            out.push_str(&format!(
                "power LCM matrix at α = {alpha}: {}\n",
                if verdict.is_singular() { "SINGULAR" } else { "nonsingular" }
            ));
            if let Some((ds, id)) = dual_part {
                out.push_str(&format!(
                    "dual set: {{{}}} (LCM closed: {})\n",
                    ds.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "),
                    is_lcm_closed(&ds)
                ));
                out.push_str(&format!(
                    "dual determinant identity: factor x_n^n {}, factor x_n^(n·α) {}\n",
                    if id.holds_with_power_n { "holds" } else { "fails" },
                    if id.holds_with_power_n_alpha { "holds" } else { "fails" },
                ));
            }
            Ok(out)
        }
    }
}

// ---------------------------------------------------------------------------
// find-alpha
// ---------------------------------------------------------------------------

fn cmd_find_alpha(
    cli: &Cli,
    set: Option<&std::path::Path>,
    structure: Option<&std::path::Path>,
    index: Option<usize>,
    (range_lo, range_hi): (f64, f64),
    grid: usize,
) -> Result<String, DomainError> {
    if cli.config.format == Format::Dot {
        return Err(DomainError("find-alpha has no dot output".into()));
    }
    let prec = cli.config.precision;
    let max_prec = prec.saturating_mul(64).min(1 << 14).max(prec);
    let tol = Float::with_val(64, cli.config.tol);
    match (set, structure) {
        (Some(path), None) => {
            let s = load_set(path)?;
            let i = index.unwrap_or(s.len() - 1);
            if i >= s.len() {
                return Err(DomainError(format!("index {i} out of range")));
            }
            let range = (Float::with_val(64, range_lo), Float::with_val(64, range_hi));
            let found = find_sign_change(&s, i, range, grid, prec, max_prec)?;
            match found {
                None => match cli.config.format {
                    Format::Json => {
                        let report = Report::new(
                            "find-alpha",
                            json!({ "set": set_strings(&s), "index": i,
                                    "range": [range_lo, range_hi], "grid": grid }),
                            json!({ "sign_change": false, "alpha0": null }),
                        );
                        Ok(report.to_json_pretty())
                    }
                    _ => Ok(format!(
                        "no sign change of Ψ(x_{i}) in ({range_lo}, {range_hi}); \
                         no singular exponent found in range\n"
                    )),
                },
                Some(bracket) => {
                    let (alpha0, iterations) = bisect_root(&s, i, &bracket, &tol, prec, max_prec)?;
                    match cli.config.format {
                        Format::Json => {
                            let report = Report::new(
                                "find-alpha",
                                json!({ "set": set_strings(&s), "index": i,
                                        "range": [range_lo, range_hi], "grid": grid }),
                                json!({
                                    "sign_change": true,
                                    "alpha0": interval_json(&alpha0),
                                    "iterations": iterations,
                                }),
                            );
                            Ok(report.to_json_pretty())
                        }
                        _ => {
                            let (lo, hi) = interval_display(&alpha0);
                            Ok(format!(
                                "singular exponent for Ψ(x_{i}):\n  α₀ ∈ [{lo}, {hi}]\n  (width ≤ {}, {iterations} bisection steps)\n",
                                cli.config.tol
                            ))
                        }
                    }
                }
            }
        }
        (None, Some(path)) => {
            let p = load_poset(path)?;
            let report = construct_singular_instance(&p, &tol, cli.config.r_max, prec)
                .map_err(|e| match e {
                    AlphaError::IsWedgeTree => DomainError(
                        "structure is a ∧-tree: every integer realization has a nonsingular \
                         power LCM matrix for all α > 0"
                            .into(),
                    ),
                    other => DomainError(other.to_string()),
                })?;
            match cli.config.format {
                Format::Json => {
                    let r = Report::new(
                        "find-alpha",
                        json!({ "structure": emit_poset(&p), "tol": cli.config.tol,
                                "r_max": cli.config.r_max }),
                        json!({
                            "set": set_strings(&report.set),
                            "i": report.i,
                            "k": report.k,
                            "alpha0": interval_json(&report.alpha0),
                            "r_used": report.r_used,
                            "iterations": report.iterations,
                        }),
                    );
                    Ok(r.to_json_pretty())
                }
                _ => {
                    let (lo, hi) = interval_display(&report.alpha0);
                    Ok(format!(
                        "singular instance:\n  set: {{{}}}\n  witness index: {} (paired with {})\n  \
                         inflation power: {}\n  α₀ ∈ [{lo}, {hi}] ({} bisection steps)\n",
                        set_strings(&report.set).join(", "),
                        report.i,
                        report.k,
                        report.r_used,
                        report.iterations,
                    ))
                }
            }
        }
        _ => Err(DomainError("pass exactly one of --set or --structure".into())),
    }
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

fn cmd_analyze(cli: &Cli, set: &std::path::Path, alpha: u32) -> Result<String, DomainError> {
    let s = load_set(set)?;
    let analysis = Analysis::new(s.clone());
    if cli.config.format == Format::Dot {
        let labels: Vec<String> = set_strings(&s);
        return Ok(emit_dot(analysis.poset(), Some(&labels)));
    }
    let psis = analysis.psi_vector(alpha);
    let det_prod = analysis.det_product(alpha);
    let recip = meet_matrix(&s, &ArithFn::reciprocal_power(alpha as i64))?;
    let det_recip = det_direct(&recip);
    let join = join_matrix(&s, &ArithFn::power(alpha as i64))?;
    let det_join = det_direct(&join);
    let witnesses: Vec<usize> = psis
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_zero())
        .map(|(i, _)| i)
        .collect();
    let singular = !witnesses.is_empty();
    let gcd_closed = is_gcd_closed(s.elems());
    let factor_closed = is_factor_closed(s.elems());

    match cli.config.format {
        Format::Json => {
            let report = Report::new(
                "analyze",
                json!({ "set": set_strings(&s), "alpha": alpha }),
                json!({
                    "psi": psis.iter().map(rational_string).collect::<Vec<_>>(),
                    "det_reciprocal_meet": rational_string(&det_recip),
                    "det_psi_product": rational_string(&det_prod),
                    "det_power_lcm": rational_string(&det_join),
                    "singular": singular,
                    "witnesses": witnesses,
                    "factor_closed": factor_closed,
                }),
            );
            Ok(report.to_json_pretty())
        }
        _ => {
            let mut out = String::new();
            out.push_str(&format!("set: {{{}}}\n", set_strings(&s).join(", ")));
            out.push_str(&format!(
                "gcd closed: {gcd_closed}, factor closed: {factor_closed}\n"
            ));
            out.push_str(&format!("α = {alpha}\n"));
            for (i, v) in psis.iter().enumerate() {
                out.push_str(&format!("Ψ(x_{i}) = {}\n", rational_string(v)));
            }
            out.push_str(&format!(
                "det (S)_1/N^α = {} (Ψ product {})\n",
                rational_string(&det_recip),
                rational_string(&det_prod)
            ));
            out.push_str(&format!("det [S]_N^α  = {}\n", rational_string(&det_join)));
            out.push_str(&format!(
                "power LCM matrix: {}{}\n",
                if singular { "SINGULAR" } else { "nonsingular" },
                if singular {
                    format!(" (witness indices {witnesses:?})")
                } else {
                    String::new()
                }
            ));
            Ok(out)
        }
    }
}

// ---------------------------------------------------------------------------
// realize
// ---------------------------------------------------------------------------

fn cmd_realize(
    cli: &Cli,
    structure: &std::path::Path,
    primes: &[u64],
    inflate: Option<&str>,
) -> Result<String, DomainError> {
    let p = load_poset(structure)?;
    let prime_ints: Vec<BigInt> = primes.iter().map(|&x| BigInt::from(x)).collect();
    let real = realize_squarefree(&p, if primes.is_empty() { None } else { Some(&prime_ints) })?;
    let final_set = match inflate {
        None => real.base.clone(),
        Some(spec) => {
            let (i, r) = spec
                .split_once(':')
                .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<u32>().ok()?)))
                .ok_or_else(|| DomainError(format!("bad --inflate '{spec}', expected INDEX:R")))?;
            real.inflate(i, r)?
        }
    };
    match cli.config.format {
        Format::Dot => {
            let labels = set_strings(&final_set);
            Ok(emit_dot(&final_set.divisibility_poset(), Some(&labels)))
        }
        Format::Json => {
            let report = Report::new(
                "realize",
                json!({ "structure": emit_poset(&p), "primes": primes,
                        "inflate": inflate }),
                json!({
                    "base": set_strings(&real.base),
                    "set": set_strings(&final_set),
                }),
            );
            Ok(report.to_json_pretty())
        }
        _ => Ok(emit_int_set(final_set.elems())),
    }
}
