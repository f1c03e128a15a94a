//! The `jlab` command line.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::algebra::{ClosureOptions, Elem, FiniteAlgebra};
use crate::catalog;
use crate::chains::{
    full_reduction, thm22_chain, thm23_chain, thm43_chain, thm44_chain, validate_chain, validate_nln, ChainContext,
    ChainReport, Reading, WitnessChain, XChoice,
};
use crate::error::Error;
use crate::maltsev::{distributivity_level, find_terms, verify_system, DistributivityLevel, JonssonSystem, SystemFlavor};
use crate::relations::{all_congruences, is_congruence, Congruence};
use crate::verifier::{self, IdentityInstance, Start};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_FOUND: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;
pub const EXIT_FAILED: i32 = 5;

#[derive(Parser, Debug)]
#[command(name = "jlab", version, about = "Jónsson terms, witness chains and congruence identities on finite algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Input {
    /// Algebra JSON file.
    #[arg(long, value_name = "FILE")]
    algebra: Option<PathBuf>,
    /// Built-in generator, e.g. lattice-chain:3, lattice-prod:2x2, dualdisc3, z2.
    #[arg(long = "gen", value_name = "SPEC")]
    generator: Option<String>,
}

#[derive(Args, Debug)]
struct Triple {
    /// Congruence: index from `congruences`, block literal like "0 0 1", top, bottom, or a named kernel.
    #[arg(long)]
    alpha: String,
    #[arg(long)]
    beta: String,
    #[arg(long)]
    gamma: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Search for a term system.
    Terms {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = FlavorArg::Jonsson)]
        flavor: FlavorArg,
        /// System length; without it, the least n ≤ --n-max with Jónsson terms is reported.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
    },
    /// Build and validate a witness chain.
    Chain {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        triple: Triple,
        #[arg(long, value_enum)]
        construction: Construction,
        /// Element chain b_0,…,b_n (for the F-chains: a,b,c,d,e).
        #[arg(long, value_delimiter = ',', required = true)]
        elements: Vec<Elem>,
        /// Distributivity index for thm43 and thm44; chain length check for full-reduction.
        #[arg(long)]
        n: Option<usize>,
        /// System JSON file; searched for when absent.
        #[arg(long, value_name = "FILE")]
        system: Option<PathBuf>,
        /// Auxiliary element of the alvin prefix; searched for when absent.
        #[arg(long)]
        x: Option<Elem>,
        /// Auxiliary element of the mirrored alvin prefix.
        #[arg(long)]
        x_back: Option<Elem>,
        /// Which candidate formulas the reduction may use.
        #[arg(long = "reading", alias = "paper-reading", value_enum, default_value_t = ReadingArg::TryAll)]
        reading: ReadingArg,
        #[arg(long, value_enum, default_value_t = ChainFormat::Text)]
        format: ChainFormat,
    },
    /// Minimal right-hand length for every congruence triple.
    Spectrum {
        #[command(flatten)]
        input: Input,
        /// Left-hand factor counts.
        #[arg(long, value_delimiter = ',', default_value = "4")]
        m: Vec<usize>,
        /// Largest k tried (default 2·s²).
        #[arg(long)]
        k_max: Option<usize>,
        #[arg(long, value_enum, default_value_t = StartArg::Beta)]
        start: StartArg,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
    },
    /// List the congruences in canonical order.
    Congruences {
        #[command(flatten)]
        input: Input,
    },
    /// Check one inclusion α(β∘γ∘⋯ m) ⊆ αβ∘αγ∘⋯ k.
    Check {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        triple: Triple,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = StartArg::Beta)]
        start: StartArg,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FlavorArg {
    Jonsson,
    Alvin,
    Defective4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Construction {
    Thm22,
    Thm23,
    Thm43,
    Thm44,
    FullReduction,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReadingArg {
    Strict,
    TryAll,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ChainFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StartArg {
    Beta,
    Gamma,
}

impl From<StartArg> for Start {
    fn from(s: StartArg) -> Start {
        match s {
            StartArg::Beta => Start::Beta,
            StartArg::Gamma => Start::Gamma,
        }
    }
}

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NotFound(_) | Error::NoSuchX(_) => EXIT_NOT_FOUND,
        Error::ResourceLimit { .. } => EXIT_INCONCLUSIVE,
        Error::VerificationFailed(_) | Error::StepValidationFailed { .. } | Error::AmbiguousFormula(_) => EXIT_FAILED,
        _ => EXIT_USAGE,
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type Outcome = std::result::Result<i32, Failure>;

fn closure_cap() -> Result<usize, Failure> {
    match std::env::var("JLAB_CAP") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&c| c > 0)
            .ok_or_else(|| usage(format!("JLAB_CAP must be a positive integer, got `{v}`"))),
        Err(_) => Ok(ClosureOptions::default().cap),
    }
}

fn load(input: &Input) -> Result<catalog::Generated, Failure> {
    match (&input.algebra, &input.generator) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let algebra = FiniteAlgebra::from_json(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            Ok(catalog::Generated { algebra, named: Vec::new() })
        }
        (None, Some(spec)) => Ok(catalog::generate(spec)?),
        _ => Err(usage("exactly one of --algebra and --gen is required")),
    }
}

fn resolve_congruence(g: &catalog::Generated, cons: &[Congruence], text: &str) -> Result<Congruence, Failure> {
    let s = g.algebra.size();
    let t = text.trim();
    match t {
        "top" | "nabla" => return Ok(Congruence::nabla(s)),
        "bottom" | "delta" => return Ok(Congruence::delta(s)),
        _ => {}
    }
    if let Some((_, blocks)) = g.named.iter().find(|(name, _)| name == t) {
        return Ok(Congruence::from_blocks(blocks));
    }
    if let Ok(i) = t.parse::<usize>() {
        if !t.contains([' ', ',']) {
            return cons
                .get(i)
                .cloned()
                .ok_or_else(|| usage(format!("congruence index {i} out of range (0..{})", cons.len())));
        }
    }
    let c: Congruence = t.parse().map_err(|e: Error| usage(format!("congruence `{t}`: {e}")))?;
    if c.size() != s {
        return Err(usage(format!("congruence `{t}` has {} entries, the algebra has {s} elements", c.size())));
    }
    if !is_congruence(&g.algebra, c.blocks()) {
        return Err(usage(format!("`{t}` is not a congruence of {}", g.algebra.name())));
    }
    Ok(c)
}

fn triple(g: &catalog::Generated, t: &Triple) -> Result<(Congruence, Congruence, Congruence), Failure> {
    let cons = all_congruences(&g.algebra)?;
    Ok((
        resolve_congruence(g, &cons, &t.alpha)?,
        resolve_congruence(g, &cons, &t.beta)?,
        resolve_congruence(g, &cons, &t.gamma)?,
    ))
}

fn flavor_of(flavor: FlavorArg, n: usize) -> Result<SystemFlavor, Failure> {
    let f = match flavor {
        FlavorArg::Jonsson => SystemFlavor::Jonsson(n),
        FlavorArg::Alvin => SystemFlavor::Alvin(n),
        FlavorArg::Defective4 if n == 4 => SystemFlavor::Defective4,
        FlavorArg::Defective4 => return Err(usage("defective4 has n = 4")),
    };
    if f.n() < 2 {
        return Err(usage("n must be at least 2"));
    }
    Ok(f)
}

fn cmd_terms(out: &mut dyn Write, input: &Input, flavor: FlavorArg, n: Option<usize>, n_max: usize) -> Outcome {
    let g = load(input)?;
    let cap = closure_cap()?;
    let sys = match (flavor, n) {
        (FlavorArg::Jonsson, None) => match distributivity_level(&g.algebra, n_max, cap)? {
            DistributivityLevel::Found(_, sys) => sys,
            DistributivityLevel::NotFoundUpTo(k) => {
                return Err(Failure {
                    code: EXIT_NOT_FOUND,
                    message: format!("{} has no jonsson(n) terms for n ≤ {k}", g.algebra.name()),
                })
            }
        },
        (FlavorArg::Defective4, None) => find_terms(&g.algebra, SystemFlavor::Defective4, cap)?,
        (_, None) => return Err(usage("--n is required for this flavor")),
        (f, Some(n)) => find_terms(&g.algebra, flavor_of(f, n)?, cap)?,
    };
    let _ = writeln!(out, "{}", sys.to_json());
    Ok(EXIT_OK)
}

fn system_for(g: &catalog::Generated, path: Option<&PathBuf>, flavor: SystemFlavor) -> Result<JonssonSystem, Failure> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            let sys = JonssonSystem::from_json(&text).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            if sys.flavor() != flavor {
                return Err(usage(format!("{}: expected a {flavor} system, found {}", p.display(), sys.flavor())));
            }
            let report = verify_system(&g.algebra, &sys);
            if let Some(fail) = report.first_failure() {
                return Err(Failure {
                    code: EXIT_FAILED,
                    message: format!("{}: {fail}", p.display()),
                });
            }
            Ok(sys)
        }
        None => Ok(find_terms(&g.algebra, flavor, closure_cap()?)?),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_chain(
    out: &mut dyn Write,
    err: &mut dyn Write,
    input: &Input,
    t: &Triple,
    construction: Construction,
    elements: &[Elem],
    n: Option<usize>,
    system: Option<&PathBuf>,
    x: (Option<Elem>, Option<Elem>),
    reading: ReadingArg,
    format: ChainFormat,
) -> Outcome {
    let g = load(input)?;
    let (alpha, beta, gamma) = triple(&g, t)?;
    let ctx = ChainContext::new(&g.algebra, alpha.clone(), beta.clone(), gamma.clone(), elements.to_vec())?;
    let need_n = |what: &str| n.ok_or_else(|| usage(format!("--n is required for {what}")));
    let reading = match reading {
        ReadingArg::Strict => Reading::Strict,
        ReadingArg::TryAll => Reading::TryAll,
    };
    let choice = |e: Option<Elem>| e.map_or(XChoice::Search, XChoice::Given);

    let mut stages = Vec::new();
    let chain: WitnessChain = match construction {
        Construction::Thm22 => thm22_chain(&ctx, &system_for(&g, system, SystemFlavor::Jonsson(4))?)?,
        Construction::Thm23 => thm23_chain(&ctx, &system_for(&g, system, SystemFlavor::Defective4)?)?,
        Construction::Thm43 => {
            let n = need_n("thm43")?;
            thm43_chain(&ctx, &system_for(&g, system, SystemFlavor::Jonsson(n))?)?
        }
        Construction::Thm44 => {
            let n = need_n("thm44")?;
            let sys = system_for(&g, system, SystemFlavor::Alvin(n + 2))?;
            thm44_chain(&ctx, &sys, choice(x.0), choice(x.1))?
        }
        Construction::FullReduction => {
            if let Some(n) = n {
                if n != ctx.n() {
                    return Err(usage(format!("--n {n} but {} elements given", elements.len())));
                }
            }
            let red = full_reduction(&ctx, &system_for(&g, system, SystemFlavor::Jonsson(4))?, reading)?;
            stages = red.stages;
            red.chain
        }
    };
    let validation = validate_chain(&g.algebra, &chain, &alpha, &beta, &gamma);
    let mut report = ChainReport::new(&chain, &validation);
    for stage in &stages {
        let r = validate_nln(stage, ctx.a(), ctx.c(), &alpha, &beta, &gamma);
        report.push_invariant(format!("n-ℓ-n chain ℓ={}", stage.ell), r.ok(), r.failures.first().cloned());
    }
    if let Some(last) = stages.last() {
        report.readings = last.readings.clone();
        report.push_invariant(format!("final ℓ = {}", last.ell), true, None);
    }
    match format {
        ChainFormat::Text => {
            let _ = write!(out, "{}", report.to_text());
        }
        ChainFormat::Json => {
            let _ = writeln!(out, "{}", report.to_json());
        }
    }
    if report.ok() {
        Ok(EXIT_OK)
    } else {
        let _ = writeln!(err, "chain validation failed");
        Ok(EXIT_FAILED)
    }
}

fn cmd_spectrum(out: &mut dyn Write, input: &Input, m: &[usize], k_max: Option<usize>, start: StartArg, format: TableFormat) -> Outcome {
    let g = load(input)?;
    if m.is_empty() || m.contains(&0) {
        return Err(usage("--m values must be at least 1"));
    }
    let k_max = k_max.unwrap_or_else(|| verifier::default_k_max(g.algebra.size()));
    if k_max == 0 {
        return Err(usage("--k-max must be at least 1"));
    }
    let sp = verifier::spectrum(&g.algebra, m, k_max, start.into())?;
    let _ = match format {
        TableFormat::Csv => write!(out, "{}", sp.to_csv()),
        TableFormat::Json => writeln!(out, "{}", sp.to_json()),
    };
    Ok(EXIT_OK)
}

fn cmd_congruences(out: &mut dyn Write, input: &Input) -> Outcome {
    let g = load(input)?;
    let cons = all_congruences(&g.algebra)?;
    for (i, c) in cons.iter().enumerate() {
        let mut names = Vec::new();
        if c.is_nabla() {
            names.push("top");
        }
        if c.is_delta() {
            names.push("bottom");
        }
        names.extend(g.named.iter().filter(|(_, b)| Congruence::from_blocks(b) == *c).map(|(n, _)| n.as_str()));
        let suffix = if names.is_empty() { String::new() } else { format!("  ({})", names.join(", ")) };
        let _ = writeln!(out, "{i}: {c}{suffix}");
    }
    Ok(EXIT_OK)
}

fn cmd_check(out: &mut dyn Write, input: &Input, t: &Triple, m: usize, k: usize, start: StartArg) -> Outcome {
    let g = load(input)?;
    if m == 0 || k == 0 {
        return Err(usage("--m and --k must be at least 1"));
    }
    let (alpha, beta, gamma) = triple(&g, t)?;
    let inst = IdentityInstance { alpha: &alpha, beta: &beta, gamma: &gamma, m, k, rhs_start: start.into() };
    match inst.violation()? {
        None => {
            let _ = writeln!(out, "holds");
            Ok(EXIT_OK)
        }
        Some((x, y)) => {
            let _ = writeln!(out, "fails: ({x},{y}) is in the left side but not in the right side");
            Ok(EXIT_FAILED)
        }
    }
}

/// Runs the command line with the given arguments; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Terms { input, flavor, n, n_max } => cmd_terms(out, input, *flavor, *n, *n_max),
        Command::Chain {
            input,
            triple,
            construction,
            elements,
            n,
            system,
            x,
            x_back,
            reading,
            format,
        } => cmd_chain(
            out,
            err,
            input,
            triple,
            *construction,
            elements,
            *n,
            system.as_ref(),
            (*x, *x_back),
            *reading,
            *format,
        ),
        Command::Spectrum { input, m, k_max, start, format } => cmd_spectrum(out, input, m, *k_max, *start, *format),
        Command::Congruences { input } => cmd_congruences(out, input),
        Command::Check { input, triple, m, k, start } => cmd_check(out, input, triple, *m, *k, *start),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "jlab: {}", f.message);
            f.code
        }
    }
}
