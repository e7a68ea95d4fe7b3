use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::json;

use posethopf::algebra::{qbinom, PowerSeries, Scalar};
use posethopf::counting::{forest_partitions, num_templates};
use posethopf::error::{Error, Result};
use posethopf::growth::{
    grow_distribution, presets, solve_growth, Couplings, CouplingsJson, GrowthRule, GrowthSpec, Normalization,
};
use posethopf::hopf::{coproduct, PosetTermJson, PosetVector};
use posethopf::poset::{enumerate, enumerate_connected, LabelledPoset, Poset, PosetJson};
use posethopf::subhopf::{
    beta_variant, check_closure, first_order_beta, tp_beta, BetaVariant, ClosureStatus, ForestBetas,
};

/// Writes to stdout, exiting quietly once the reader has gone away.
macro_rules! out {
    ($($arg:tt)*) => {
        crate::cli::write_stdout(format_args!($($arg)*))
    };
}

macro_rules! outln {
    ($($arg:tt)*) => {
        crate::cli::write_stdout(format_args!("{}\n", format_args!($($arg)*)))
    };
}

pub fn write_stdout(args: std::fmt::Arguments) {
    use std::io::Write;
    if let Err(e) = std::io::stdout().lock().write_fmt(args) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        panic!("failed writing to stdout: {e}");
    }
}

pub const EXIT_NOT_CLOSED: u8 = 1;
pub const EXIT_SIZE: u8 = 2;
pub const EXIT_MODEL: u8 = 3;
pub const EXIT_USAGE: u8 = 64;

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::SizeExceeded { .. } => EXIT_SIZE,
        Error::Parse(_) | Error::CycleDetected | Error::DomainError(_) | Error::NotAForest | Error::SizeMismatch(_) => {
            EXIT_USAGE
        }
        _ => EXIT_MODEL,
    }
}

#[derive(Parser, Debug)]
#[command(name = "posethopf", version, about = "Growth models of finite posets and their coproducts")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,

    /// Seed for randomised checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    /// Generic classical sequential growth from --t / --couplings.
    Csg,
    Tp,
    Forest,
    Tree,
    Dust,
    Cm,
    Dse,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    Weights,
    Probabilities,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Forest,
    NormalisedForest,
    Tree,
    NormalisedTree,
    Cm,
    Tp,
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value_t = Model::Csg)]
    pub model: Model,
    /// JSON couplings file: {"t": [...], "s": [...], "normalization": ...}.
    #[arg(long)]
    pub couplings: Option<PathBuf>,
    /// Comma-separated couplings t0,t1,... (rationals or variables); for
    /// `tp` a single ratio t, for `forest` the pair t0,t1.
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
    /// Comma-separated spawn rates s0,s1,...; the last value repeats.
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<String>,
    /// Use symbolic couplings (q for tp, t0,t1 for forest, t0..t3 for csg).
    #[arg(long)]
    pub symbolic: bool,
    #[arg(long, value_enum)]
    pub normalization: Option<NormArg>,
    /// Parameter alpha of the dse series.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Parameter beta of the dse series.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// Explicit series coefficients f0,f1,... for dse.
    #[arg(long, allow_hyphen_values = true)]
    pub f: Option<String>,
    /// JSON file with the initial distribution for models whose couplings
    /// vanish below some N > 1: a list of {"poset": ..., "coeff": ...}.
    #[arg(long)]
    pub initial: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List every poset of a given size.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        connected: bool,
    },
    /// Number of natural labellings of a poset up to isomorphism.
    Psi { poset: String },
    /// Partitions of a forest into subforests.
    Partitions { poset: String },
    /// Coproduct of a poset.
    Coproduct {
        poset: String,
        /// Drop the terms with an empty factor.
        #[arg(long)]
        reduced: bool,
    },
    /// Distribution or weights of the grown poset.
    Grow {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Generators a_1..a_n of a growth equation.
    Solve {
        #[arg(long)]
        n_max: usize,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Check that generators span a sub-Hopf algebra up to a degree.
    CheckSubhopf {
        #[arg(long)]
        n_max: usize,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Closed-form structure coefficients.
    Beta {
        /// Left parts, comma separated.
        #[arg(long)]
        k: String,
        #[arg(long)]
        l: usize,
        #[arg(long, value_enum, default_value_t = VariantArg::Forest)]
        variant: VariantArg,
        /// Forest with trees of sizes `k` used in the recursion (default: corollas).
        #[arg(long)]
        witness: Option<String>,
    },
    /// Gaussian binomial coefficient in q.
    Qbinom {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Write the reference tables into a directory.
    Tables {
        #[arg(long, default_value = "tables")]
        out: PathBuf,
    },
    /// Run quick internal consistency checks.
    Selftest,
}

pub fn run(cli: &Cli) -> Result<u8> {
    let fmt = cli.format;
    match &cli.command {
        Command::Enumerate { n, connected } => {
            let list: Vec<Poset> = if *connected { enumerate_connected(*n)? } else { enumerate(*n)?.to_vec() };
            match fmt {
                Format::Text => list.iter().for_each(|p| outln!("{p}")),
                Format::Json => {
                    let v: Vec<PosetJson> = list.iter().map(PosetJson::from_poset).collect();
                    print_json(&json!(v));
                }
            }
        }
        Command::Psi { poset } => {
            let p = parse_poset(poset)?;
            let psi = num_templates(&p);
            match fmt {
                Format::Text => outln!("{psi}"),
                Format::Json => print_json(&json!({"poset": PosetJson::from_poset(&p), "psi": psi})),
            }
        }
        Command::Partitions { poset } => {
            let p = parse_poset(poset)?;
            let parts = forest_partitions(&p)?;
            match fmt {
                Format::Text => {
                    for pi in &parts {
                        let blocks: Vec<String> = pi.blocks.iter().map(Poset::to_text).collect();
                        let sizes: Vec<String> = pi.sizes().iter().map(usize::to_string).collect();
                        outln!("{{{}}}\tN = {}", blocks.join(" | "), sizes.join(","));
                    }
                }
                Format::Json => {
                    let v: Vec<_> = parts
                        .iter()
                        .map(|pi| {
                            json!({
                                "blocks": pi.blocks.iter().map(PosetJson::from_poset).collect::<Vec<_>>(),
                                "sizes": pi.sizes(),
                            })
                        })
                        .collect();
                    print_json(&json!(v));
                }
            }
        }
        Command::Coproduct { poset, reduced } => {
            let p = parse_poset(poset)?;
            let mut d = coproduct(&p);
            if *reduced {
                d = d.reduced();
            }
            match fmt {
                Format::Text => out!("{d}"),
                Format::Json => print_json(&json!(d.to_json())),
            }
        }
        Command::Grow { n, model } => {
            let v = grow(*n, model)?;
            match fmt {
                Format::Text => out!("{v}"),
                Format::Json => print_json(&json!(v.to_json())),
            }
        }
        Command::Solve { n_max, model } => {
            let series = generators(*n_max, model)?;
            print_series(&series, fmt);
        }
        Command::CheckSubhopf { n_max, model } => {
            let series = generators(*n_max, model)?;
            let report = check_closure(&series, *n_max)?;
            match fmt {
                Format::Text => {
                    let status = match report.status {
                        ClosureStatus::Closed => "closed",
                        ClosureStatus::NotClosed => "not closed",
                        ClosureStatus::Undetermined => "undetermined",
                    };
                    outln!("status: {status}");
                    outln!("checked_n: {}", report.checked_n);
                    for ((k, r), c) in &report.betas {
                        if !c.is_zero() {
                            outln!("beta {} | {}: {c}", join(k), join(r));
                        }
                    }
                    if let Some(w) = &report.witness {
                        outln!("witness: n = {}, {} (x) {} with coefficient {}", w.n, w.left, w.right, w.coeff);
                    }
                    if !report.rank_deficient.is_empty() {
                        let g: Vec<String> = report.rank_deficient.iter().map(|(k, l)| format!("({k},{l})")).collect();
                        outln!("linearly dependent products in gradings {}", g.join(" "));
                    }
                }
                Format::Json => print_json(&serde_json::to_value(report.to_json()).expect("serialisable")),
            }
            if report.status == ClosureStatus::NotClosed {
                return Ok(EXIT_NOT_CLOSED);
            }
        }
        Command::Beta { k, l, variant, witness } => {
            let parts: Vec<usize> = k
                .split(',')
                .map(|x| x.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad part `{x}`"))))
                .collect::<Result<_>>()?;
            let witness = witness.as_deref().map(str::parse::<Poset>).transpose()?;
            let value = beta(&parts, *l, *variant, witness.as_ref())?;
            match fmt {
                Format::Text => outln!("{value}"),
                Format::Json => print_json(&json!({"k": parts, "l": l, "coeff": value})),
            }
        }
        Command::Qbinom { n, k } => {
            let v = qbinom(*n, *k);
            match fmt {
                Format::Text => outln!("{v}"),
                Format::Json => print_json(&json!({"n": n, "k": k, "value": v.to_string()})),
            }
        }
        Command::Tables { out } => {
            let written = crate::tables::write_all(out)?;
            for f in written {
                outln!("{}", f.display());
            }
        }
        Command::Selftest => return selftest(cli.seed),
    }
    Ok(0)
}

pub fn beta(parts: &[usize], l: usize, variant: VariantArg, witness: Option<&Poset>) -> Result<String> {
    if parts.is_empty() || parts.contains(&0) || l == 0 {
        return Err(Error::DomainError("parts and l must be positive".into()));
    }
    if variant == VariantArg::Tp {
        return Ok(tp_beta(parts, l).to_string());
    }
    let base = match witness {
        Some(w) => ForestBetas::new().beta_with_witness(parts, l, w)?,
        None if parts.len() == 1 => first_order_beta(parts[0], l),
        None => ForestBetas::new().beta(parts, l)?,
    };
    let v = match variant {
        VariantArg::Forest => BetaVariant::Forest,
        VariantArg::NormalisedForest => BetaVariant::NormalisedForest,
        VariantArg::Tree => BetaVariant::Tree,
        VariantArg::NormalisedTree => BetaVariant::NormalisedTree,
        VariantArg::Cm => BetaVariant::Cm,
        VariantArg::Tp => unreachable!(),
    };
    Ok(beta_variant(&base, parts, l, v)?.to_string())
}

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn print_json(v: &serde_json::Value) {
    outln!("{}", serde_json::to_string_pretty(v).expect("serialisable"));
}

fn print_series(series: &[PosetVector], fmt: Format) {
    match fmt {
        Format::Text => {
            for (n, a) in series.iter().enumerate().skip(1) {
                outln!("a{n}:");
                out!("{a}");
            }
        }
        Format::Json => {
            let v: Vec<_> =
                series.iter().enumerate().skip(1).map(|(n, a)| json!({"n": n, "terms": a.to_json()})).collect();
            print_json(&json!(v));
        }
    }
}

fn parse_poset(s: &str) -> Result<Poset> {
    let l: LabelledPoset = s.parse()?;
    Ok(Poset::from_labelled(&l))
}

fn parse_list(s: &str) -> Result<Vec<Scalar>> {
    s.split(',').map(|x| x.trim().parse()).collect()
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let v: Scalar = s.parse()?;
    v.constant().ok_or_else(|| Error::Parse(format!("`{s}` is not a rational number")))
}

fn normalization(m: &ModelArgs, default: Normalization) -> Normalization {
    match m.normalization {
        Some(NormArg::Weights) => Normalization::Weights,
        Some(NormArg::Probabilities) => Normalization::Probabilities,
        None => default,
    }
}

/// The couplings of a classical growth model described by the flags.
fn csg_rule(m: &ModelArgs) -> Result<GrowthRule> {
    let c = match m.model {
        Model::Tp => {
            if m.symbolic {
                return presets::tp(None);
            }
            let t = match &m.t {
                Some(t) => parse_rational(t)?,
                None => BigRational::from_integer(1.into()),
            };
            let rule = presets::tp(Some(&t))?;
            return match (rule, m.normalization) {
                (GrowthRule::Csg(c), Some(_)) => {
                    Ok(GrowthRule::Csg(c.with_normalization(normalization(m, Normalization::Probabilities))?))
                }
                (r, _) => Ok(r),
            };
        }
        Model::Forest => {
            if m.symbolic {
                presets::forest(None)?
            } else {
                let t = parse_list(m.t.as_deref().unwrap_or("1,1"))?;
                if t.len() != 2 {
                    return Err(Error::Parse("forest takes --t t0,t1".into()));
                }
                Couplings::csg(t, normalization(m, Normalization::Probabilities))?
            }
        }
        Model::Tree => presets::tree()?.with_normalization(normalization(m, Normalization::Probabilities))?,
        Model::Dust => presets::dust()?.with_normalization(normalization(m, Normalization::Probabilities))?,
        Model::Csg => {
            if let Some(path) = &m.couplings {
                let text =
                    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                let j: CouplingsJson = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
                let c = j.to_couplings()?;
                match m.normalization {
                    Some(_) => c.with_normalization(normalization(m, c.normalization()))?,
                    None => c,
                }
            } else if let Some(t) = &m.t {
                let t = parse_list(t)?;
                let symbolic = t.iter().any(|x| !x.is_constant());
                let default = if symbolic { Normalization::Weights } else { Normalization::Probabilities };
                Couplings::csg(t, normalization(m, default))?
            } else if m.symbolic {
                Couplings::symbolic(3)?
            } else {
                return Err(Error::Parse("csg needs --t, --couplings or --symbolic".into()));
            }
        }
        Model::Cm | Model::Dse => unreachable!("handled by growth equations"),
    };
    Ok(GrowthRule::Csg(c))
}

fn read_initial(m: &ModelArgs) -> Result<Option<PosetVector>> {
    match &m.initial {
        None => Ok(None),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            let items: Vec<PosetTermJson> = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            Ok(Some(PosetVector::from_json(&items)?))
        }
    }
}

fn growth_spec(m: &ModelArgs, len: usize) -> Result<GrowthSpec> {
    match m.model {
        Model::Cm => presets::cm(),
        Model::Dse => {
            if let Some(f) = &m.f {
                presets::dse(PowerSeries::new(parse_list(f)?))
            } else {
                let alpha = parse_rational(m.alpha.as_deref().unwrap_or("1"))?;
                let beta = parse_rational(m.beta.as_deref().unwrap_or("1"))?;
                presets::dse_foissy(&alpha, &beta, len)
            }
        }
        _ => unreachable!("classical models grow directly"),
    }
}

fn grow(n: usize, m: &ModelArgs) -> Result<PosetVector> {
    match m.model {
        Model::Cm | Model::Dse => {
            let series = solve_growth(&growth_spec(m, n + 1)?, n)?;
            Ok(series[n].clone())
        }
        _ => {
            let rule = csg_rule(m)?;
            let initial = read_initial(m)?;
            grow_distribution(n, &rule, initial.as_ref())
        }
    }
}

/// Generators `a_0 = 0, a_1, ..., a_n` of the chosen model.
fn generators(n_max: usize, m: &ModelArgs) -> Result<Vec<PosetVector>> {
    match m.model {
        Model::Cm | Model::Dse => solve_growth(&growth_spec(m, n_max + 1)?, n_max),
        _ => {
            let rule = csg_rule(m)?;
            let initial = read_initial(m)?;
            let start = initial.as_ref().and_then(PosetVector::degree).unwrap_or(1);
            let mut out = vec![PosetVector::zero()];
            for n in 1..=n_max {
                if n < start {
                    out.push(PosetVector::zero());
                } else {
                    out.push(grow_distribution(n, &rule, initial.as_ref())?);
                }
            }
            Ok(out)
        }
    }
}

fn selftest(seed: u64) -> Result<u8> {
    let results = crate::tables::selftest(seed)?;
    let mut failed = 0;
    for (name, ok) in &results {
        outln!("{} {name}", if *ok { "ok  " } else { "FAIL" });
        if !ok {
            failed += 1;
        }
    }
    outln!("{} checks, {failed} failed", results.len());
    Ok(if failed == 0 { 0 } else { 1 })
}
