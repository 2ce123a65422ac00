//! The `partcx` command line: argument parsing, dispatch to the library,
//! JSON/CSV reporting and the cache.
//!
//! Every invocation prints one [`RunReport`] as JSON on stdout, also when
//! the arguments do not parse. Exit codes: 0 when all checks pass, 1 when a
//! check fails, 2 for argument and precondition errors, 3 when a resource
//! bound is hit.

pub mod cache;
pub mod report;
pub mod suite;

use std::ffi::OsString;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::collapse::{collapse_report, young_fan};
use crate::error::{Error, Result};
use crate::fixed_points::{
    classify_action, cyclic_subgroup, elementary_abelian_free, fixed_point_betti, iterated_wreath,
    predicted_fixed_point_betti,
};
use crate::homology::{betti_numbers_over, BettiTable, DegreeRanks, Field};
use crate::lyndon::{lyndon_words, witt_count};
use crate::poset_core::{FiniteLattice, GroupAction};
use crate::predictions::{
    allowable_sequences, atom_sequences, bredon_euler_check, ehp_rank_identity, fk_basis, fk_dimension,
    predicted_atom_betti, predicted_multi_betti, predicted_quotient_betti, quotient_sequences, torsion_bound_check,
    wedge_of_spheres_classifier,
};
use crate::simplicial::{
    atom_model, nerve_model, orbit_chain_complex_with, ChainBasis, NerveEnds, DEFAULT_CHAIN_BOUND,
};

pub use cache::{Cache, CACHE_ENV};
pub use report::{compare, CheckFlag, Comparison, RunReport, Status, SCHEMA};

/// Largest number of Lyndon words the `lyndon` command lists or recounts.
pub const LYNDON_LIST_BOUND: u128 = 100_000;

#[derive(Parser, Debug)]
#[command(
    name = "partcx",
    version,
    about = "Homology of partition complexes and their quotients"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Cache directory; defaults to $PARTCX_CACHE_DIR, no cache if unset.
    #[arg(long, global = true, value_name = "DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Ignore the cache entirely.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Also write the Betti tables as CSV to this file.
    #[arg(long, global = true, value_name = "FILE")]
    pub csv: Option<PathBuf>,
    /// Report elapsed time as 0 so that reports are byte-identical.
    #[arg(long, global = true)]
    pub stable: bool,
    /// Largest number of orbit representatives a chain complex may have.
    #[arg(long, global = true, default_value_t = DEFAULT_CHAIN_BOUND)]
    pub bound: usize,
    /// Chain basis for orbit complexes: tensor or product.
    #[arg(long, global = true, default_value = "tensor", value_parser = parse_basis)]
    pub basis: ChainBasis,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Reduced Betti numbers of |Π_n|, or of its quotient by a group.
    Betti(BettiArgs),
    /// Reduced Betti numbers of |Π_n| modulo a Young subgroup.
    Quotient(QuotientArgs),
    /// Reduced Betti numbers of the atom Σ|Π_n|^◇ ∧ (S^ℓ)^{∧n} modulo Σ_n.
    Atom(AtomArgs),
    /// Reduced Betti numbers of the fixed points |Π_n^G|.
    Fixed(FixedArgs),
    /// Complementary-collapse matching of a Young fan.
    Collapse(CollapseArgs),
    /// Lyndon words of a given content.
    Lyndon(LyndonArgs),
    /// Closed-form predictions and the checks built on them.
    Predict(PredictArgs),
    /// Compare a computed table with a predicted one.
    Compare(CompareArgs),
    /// Run a named battery of checks: fast, full or extended.
    Suite(SuiteArgs),
}

#[derive(Args, Debug)]
pub struct BettiArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "q", value_parser = parse_field)]
    pub field: Field,
    /// Group generator in 1-based cycle notation; repeat for more.
    #[arg(long = "group", value_name = "PERM")]
    pub group: Vec<String>,
    /// Quotient by the Young subgroup of this composition instead.
    #[arg(long, value_parser = parse_composition, conflicts_with = "group")]
    pub young: Option<Composition>,
    /// Only enumerate chains up to this reported degree.
    #[arg(long, allow_negative_numbers = true)]
    pub degree_cap: Option<i64>,
}

#[derive(Args, Debug)]
pub struct QuotientArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_parser = parse_composition)]
    pub young: Composition,
    #[arg(long, default_value = "q", value_parser = parse_field)]
    pub field: Field,
    /// Compare with the closed-form prediction.
    #[arg(long)]
    pub compare: bool,
}

#[derive(Args, Debug)]
pub struct AtomArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub ell: usize,
    #[arg(long, default_value = "q", value_parser = parse_field)]
    pub field: Field,
    #[arg(long)]
    pub compare: bool,
}

#[derive(Args, Debug)]
pub struct FixedArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "q", value_parser = parse_field)]
    pub field: Field,
    /// Group generator in 1-based cycle notation; repeat for more.
    #[arg(long = "group", value_name = "PERM")]
    pub group: Vec<String>,
    /// `p,k,m`: F_p^k acting freely on m blocks of p^k points.
    #[arg(long, value_parser = parse_composition, conflicts_with_all = ["group", "wreath", "cycle_type"])]
    pub elementary: Option<Composition>,
    /// Iterated wreath product of symmetric groups on these block sizes.
    #[arg(long, value_parser = parse_composition, conflicts_with_all = ["group", "cycle_type"])]
    pub wreath: Option<Composition>,
    /// Cyclic group generated by consecutive cycles of these lengths.
    #[arg(long, value_parser = parse_composition, conflicts_with = "group")]
    pub cycle_type: Option<Composition>,
    /// With --elementary, compare with the predicted bouquet.
    #[arg(long)]
    pub compare: bool,
}

#[derive(Args, Debug)]
pub struct CollapseArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_parser = parse_composition)]
    pub young: Composition,
}

#[derive(Args, Debug)]
pub struct LyndonArgs {
    #[arg(long, value_parser = parse_composition)]
    pub composition: Composition,
    /// Report only the count.
    #[arg(long)]
    pub count: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PredictKind {
    Quotient,
    Atom,
    Multi,
    Fk,
    Euler,
    Ehp,
    Classify,
    Torsion,
}

#[derive(Args, Debug)]
pub struct PredictArgs {
    #[arg(long, value_enum)]
    pub kind: PredictKind,
    #[arg(long, default_value = "q", value_parser = parse_field)]
    pub field: Field,
    /// Young composition (quotient, classify, torsion) or multi-weight (multi).
    #[arg(long, value_parser = parse_composition)]
    pub composition: Option<Composition>,
    /// Sphere dimensions, one per weight entry (multi).
    #[arg(long, value_parser = parse_composition)]
    pub ells: Option<Composition>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub ell: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    /// EHP weight.
    #[arg(long)]
    pub d: Option<usize>,
    /// EHP sphere dimension.
    #[arg(long)]
    pub m: Option<usize>,
    /// Primes for the torsion check.
    #[arg(long, value_parser = parse_composition)]
    pub primes: Option<Composition>,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    /// JSON file holding a Betti table or a run report.
    #[arg(long)]
    pub computed: PathBuf,
    #[arg(long)]
    pub predicted: PathBuf,
}

#[derive(Args, Debug)]
pub struct SuiteArgs {
    pub name: String,
}

fn parse_field(s: &str) -> std::result::Result<Field, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_basis(s: &str) -> std::result::Result<ChainBasis, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A comma-separated list of non-negative integers such as `4,4`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(transparent)]
pub struct Composition(pub Vec<usize>);

impl std::ops::Deref for Composition {
    type Target = Vec<usize>;

    fn deref(&self) -> &Vec<usize> {
        &self.0
    }
}

pub fn parse_composition(s: &str) -> std::result::Result<Composition, String> {
    let parts: std::result::Result<Vec<usize>, _> = s.split(',').map(|x| x.trim().parse::<usize>()).collect();
    match parts {
        Ok(v) if !v.is_empty() => Ok(Composition(v)),
        _ => Err(format!(
            "expected a comma-separated list of non-negative integers, got {s:?}"
        )),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Betti(_) => "betti",
        Command::Quotient(_) => "quotient",
        Command::Atom(_) => "atom",
        Command::Fixed(_) => "fixed",
        Command::Collapse(_) => "collapse",
        Command::Lyndon(_) => "lyndon",
        Command::Predict(_) => "predict",
        Command::Compare(_) => "compare",
        Command::Suite(_) => "suite",
    }
}

/// What a run produced: the report, plus text to print instead of it for
/// `--help` and `--version`.
pub struct Outcome {
    pub report: Option<RunReport>,
    pub text: Option<String>,
    pub exit_code: i32,
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome {
                    report: None,
                    text: Some(e.to_string()),
                    exit_code: 0,
                };
            }
            let mut report = RunReport::new("");
            report.finish(Err(Error::arg(e.render().to_string().trim().to_string())));
            return Outcome {
                exit_code: report.exit_code(),
                report: Some(report),
                text: None,
            };
        }
    };
    let report = execute(&cli);
    Outcome {
        exit_code: report.exit_code(),
        report: Some(report),
        text: None,
    }
}

/// Runs a parsed command line and returns its finished report.
pub fn execute(cli: &Cli) -> RunReport {
    let start = Instant::now();
    let mut report = RunReport::new(command_name(&cli.command));
    let cache = Cache::configured(cli.global.cache_dir.as_deref(), cli.global.no_cache);
    let ctx = Context {
        global: &cli.global,
        cache,
    };
    let outcome = dispatch(&ctx, &cli.command, &mut report).and_then(|()| {
        if let Some(path) = &cli.global.csv {
            std::fs::write(path, report::betti_csv(&report))
                .map_err(|e| Error::arg(format!("cannot write {}: {e}", path.display())))?;
        }
        Ok(())
    });
    report.finish(outcome);
    report.elapsed_ms = if cli.global.stable {
        0
    } else {
        start.elapsed().as_millis() as u64
    };
    report
}

/// Entry point of the binary: runs, prints, and returns the exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let out = run(argv);
    if let Some(text) = &out.text {
        print!("{text}");
    }
    if let Some(report) = &out.report {
        if let Some(e) = &report.error {
            eprintln!("partcx: {}", e.message);
        }
        println!("{}", report.to_json());
    }
    out.exit_code
}

struct Context<'a> {
    global: &'a GlobalArgs,
    cache: Cache,
}

impl Context<'_> {
    /// Betti tables of a model over several fields from one integral
    /// complex, served from the cache when possible.
    fn cached_tables<F>(&self, report: &mut RunReport, request: &str, compute: F) -> Result<Vec<BettiTable>>
    where
        F: FnOnce() -> Result<Vec<BettiTable>>,
    {
        let full = format!("{request};basis={:?};bound={}", self.global.basis, self.global.bound);
        let (tables, hit) = self.cache.get_or_compute(&full, compute)?;
        if self.cache.is_enabled() {
            report
                .cache
                .insert(request.split(';').next().unwrap_or(request).to_string(), hit);
        }
        Ok(tables)
    }
}

fn dispatch(ctx: &Context, command: &Command, report: &mut RunReport) -> Result<()> {
    match command {
        Command::Betti(a) => run_betti(ctx, a, report),
        Command::Quotient(a) => run_quotient(ctx, a, report),
        Command::Atom(a) => run_atom(ctx, a, report),
        Command::Fixed(a) => run_fixed(ctx, a, report),
        Command::Collapse(a) => run_collapse(a, report),
        Command::Lyndon(a) => run_lyndon(a, report),
        Command::Predict(a) => run_predict(ctx, a, report),
        Command::Compare(a) => run_compare(a, report),
        Command::Suite(a) => run_suite(ctx, a, report),
    }
}

fn check_young(n: usize, young: &[usize]) -> Result<()> {
    if young.contains(&0) {
        return Err(Error::arg(format!("composition {young:?} must have positive parts")));
    }
    let sum: usize = young.iter().sum();
    if sum != n {
        return Err(Error::arg(format!("composition {young:?} sums to {sum}, not n = {n}")));
    }
    Ok(())
}

fn record_comparison(report: &mut RunReport, computed: &BettiTable, predicted: &BettiTable) -> Result<()> {
    report.predicted = Some(DegreeRanks::from(predicted));
    let c = compare(computed, predicted)?;
    report.check("prediction", c.flag);
    if let Some(note) = &c.note {
        report.notes.push(note.clone());
    }
    if !c.diff.is_empty() {
        report.set_payload(json!({ "diff": c.diff }))?;
    }
    Ok(())
}

fn run_betti(ctx: &Context, a: &BettiArgs, report: &mut RunReport) -> Result<()> {
    report.param("n", a.n);
    report.param("field", a.field);
    if a.n < 2 {
        return Err(Error::arg("|Π_n| needs n >= 2"));
    }
    let group = match &a.young {
        Some(y) => {
            check_young(a.n, y)?;
            report.param("young", y);
            Some(GroupAction::young(y))
        }
        None if !a.group.is_empty() => {
            report.param("group", &a.group);
            let gens: Vec<&str> = a.group.iter().map(String::as_str).collect();
            Some(GroupAction::parse(a.n, &gens)?)
        }
        None => None,
    };
    if let Some(cap) = a.degree_cap {
        report.param("degree_cap", cap);
    }
    let request = format!(
        "betti;n={};group={:?};cap={:?}",
        a.n,
        group.as_ref().map(|g| &g.generators),
        a.degree_cap
    );
    let field = a.field;
    let bound = ctx.global.bound;
    let basis = ctx.global.basis;
    let tables = ctx.cached_tables(report, &request, || {
        if a.n == 2 {
            return Ok(vec![BettiTable::from_pairs(field, &[(-1, 1)])]);
        }
        let l = Arc::new(FiniteLattice::partition_lattice(a.n)?);
        let mut model = nerve_model(l, NerveEnds::Open);
        if let Some(g) = &group {
            model = model.with_group(g)?;
        }
        if let Some(cap) = a.degree_cap {
            model = model.with_degree_cap(cap);
        }
        let complex = orbit_chain_complex_with(&model, Field::Rationals, basis, bound)?;
        Ok(vec![betti_numbers_over(&complex, field)])
    })?;
    let table = &tables[0];
    report.set_computed(table);
    if group.is_none() && field == Field::Rationals {
        let expected = BettiTable::from_pairs(field, &[(a.n as i64 - 3, factorial(a.n - 1))]);
        let c = compare(table, &expected)?;
        report.check("wedge_of_spheres", c.flag);
    }
    Ok(())
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn quotient_tables(ctx: &Context, report: &mut RunReport, young: &[usize], field: Field) -> Result<BettiTable> {
    let request = format!("quotient;young={young:?}");
    let bound = ctx.global.bound;
    let basis = ctx.global.basis;
    let n: usize = young.iter().sum();
    let tables = ctx.cached_tables(report, &format!("{request};field={field}"), || {
        if n == 2 {
            return Ok(vec![BettiTable::from_pairs(field, &[(-1, 1)])]);
        }
        let l = Arc::new(FiniteLattice::partition_lattice(n)?);
        let model = nerve_model(l, NerveEnds::Open).with_group(&GroupAction::young(young))?;
        let complex = orbit_chain_complex_with(&model, Field::Rationals, basis, bound)?;
        Ok(vec![betti_numbers_over(&complex, field)])
    })?;
    Ok(tables.into_iter().next().expect("one table"))
}

fn run_quotient(ctx: &Context, a: &QuotientArgs, report: &mut RunReport) -> Result<()> {
    report.param("n", a.n);
    report.param("young", &a.young);
    report.param("field", a.field);
    check_young(a.n, &a.young)?;
    if a.n < 2 {
        return Err(Error::arg("the quotient needs n >= 2"));
    }
    let computed = quotient_tables(ctx, report, &a.young, a.field)?;
    report.set_computed(&computed);
    if a.compare {
        let predicted = predicted_quotient_betti(&a.young, a.field)?;
        record_comparison(report, &computed, &predicted)?;
    }
    Ok(())
}

fn run_atom(ctx: &Context, a: &AtomArgs, report: &mut RunReport) -> Result<()> {
    report.param("n", a.n);
    report.param("ell", a.ell);
    report.param("field", a.field);
    let field = a.field;
    let bound = ctx.global.bound;
    let basis = ctx.global.basis;
    let request = format!("atom;n={};ell={};field={field}", a.n, a.ell);
    let tables = ctx.cached_tables(report, &request, || {
        let complex = orbit_chain_complex_with(&atom_model(a.n, a.ell)?, Field::Rationals, basis, bound)?;
        Ok(vec![betti_numbers_over(&complex, field)])
    })?;
    report.set_computed(&tables[0]);
    if a.compare {
        let predicted = predicted_atom_betti(field, a.ell, a.n)?;
        record_comparison(report, &tables[0], &predicted)?;
    }
    Ok(())
}

fn run_fixed(ctx: &Context, a: &FixedArgs, report: &mut RunReport) -> Result<()> {
    report.param("n", a.n);
    report.param("field", a.field);
    let group = if let Some(e) = &a.elementary {
        report.param("elementary", e);
        let [p, k, m] = e[..] else {
            return Err(Error::arg("--elementary takes p,k,m"));
        };
        let g = elementary_abelian_free(p as u64, k, m)?;
        if g.degree != a.n {
            return Err(Error::arg(format!(
                "F_{p}^{k} on {m} free orbits acts on {} points, not n = {}",
                g.degree, a.n
            )));
        }
        g
    } else if let Some(w) = &a.wreath {
        report.param("wreath", w);
        iterated_wreath(w, a.n)?
    } else if let Some(c) = &a.cycle_type {
        report.param("cycle_type", c);
        let g = cyclic_subgroup(c)?;
        if g.degree != a.n {
            return Err(Error::arg(format!(
                "cycle type {c:?} acts on {} points, not n = {}",
                g.degree, a.n
            )));
        }
        g
    } else {
        report.param("group", &a.group);
        let gens: Vec<&str> = a.group.iter().map(String::as_str).collect();
        GroupAction::parse(a.n, &gens)?
    };
    let field = a.field;
    let request = format!("fixed;n={};group={:?};field={field}", a.n, group.generators);
    let tables = ctx.cached_tables(report, &request, || Ok(vec![fixed_point_betti(a.n, &group, field)?]))?;
    report.set_computed(&tables[0]);
    report.set_payload(json!({ "action": classify_action(a.n, &group)? }))?;
    if a.compare {
        let Some(e) = &a.elementary else {
            return Err(Error::arg("--compare needs --elementary p,k,m"));
        };
        let predicted = predicted_fixed_point_betti(e[0] as u64, e[1], e[2], field)?;
        record_comparison(report, &tables[0], &predicted)?;
    }
    Ok(())
}

fn run_collapse(a: &CollapseArgs, report: &mut RunReport) -> Result<()> {
    report.param("n", a.n);
    report.param("young", &a.young);
    check_young(a.n, &a.young)?;
    let l = FiniteLattice::partition_lattice(a.n)?;
    let fan = young_fan(&l, &a.young)?;
    let r = collapse_report(&fan)?;
    let c = &r.checks;
    for (name, ok) in [
        ("perfect", c.perfect),
        ("fixed", c.fixed),
        ("equivariant", c.equivariant),
        ("acyclic", c.acyclic),
        ("euler", c.euler),
    ] {
        report.check(name, CheckFlag::from_bool(ok));
    }
    report.set_payload(r)
}

fn run_lyndon(a: &LyndonArgs, report: &mut RunReport) -> Result<()> {
    report.param("composition", &a.composition);
    if a.composition.iter().all(|&m| m == 0) {
        return Err(Error::arg("the content must have a positive entry"));
    }
    let count = witt_count(&a.composition);
    if count > LYNDON_LIST_BOUND {
        report.check("witt_matches_enumeration", CheckFlag::Skipped);
        report.notes.push(format!(
            "{count} words exceed the enumeration bound {LYNDON_LIST_BOUND}"
        ));
        return report.set_payload(json!({ "count": count }));
    }
    let words = lyndon_words(&a.composition);
    report.check(
        "witt_matches_enumeration",
        CheckFlag::from_bool(words.len() as u128 == count),
    );
    if a.count {
        report.set_payload(json!({ "count": count }))
    } else {
        let listed: Vec<String> = words.iter().map(|w| w.c_notation()).collect();
        report.set_payload(json!({ "count": count, "words": listed }))
    }
}

fn need<T: Copy>(v: Option<T>, flag: &str, kind: PredictKind) -> Result<T> {
    v.ok_or_else(|| Error::arg(format!("--kind {kind:?} needs --{flag}").to_lowercase()))
}

fn need_prime(field: Field, kind: PredictKind) -> Result<u64> {
    match field {
        Field::Prime(p) => Ok(p),
        Field::Rationals => Err(Error::arg(
            format!("--kind {kind:?} needs a prime field fp:P").to_lowercase(),
        )),
    }
}

fn run_predict(ctx: &Context, a: &PredictArgs, report: &mut RunReport) -> Result<()> {
    let kind = a.kind;
    report.param("kind", format!("{kind:?}").to_lowercase());
    report.param("field", a.field);
    let composition = || {
        a.composition
            .clone()
            .ok_or_else(|| Error::arg(format!("--kind {kind:?} needs --composition").to_lowercase()))
    };
    match kind {
        PredictKind::Quotient => {
            let c = composition()?;
            report.param("composition", &c);
            let seqs = quotient_sequences(&c, a.field)?;
            let t = predicted_quotient_betti(&c, a.field)?;
            report.field = Some(a.field);
            report.predicted = Some((&t).into());
            report.set_payload(json!({ "sequences": seqs }))
        }
        PredictKind::Multi => {
            let c = composition()?;
            let ells = a.ells.clone().ok_or_else(|| Error::arg("--kind multi needs --ells"))?;
            report.param("weight", &c);
            report.param("ells", &ells);
            let seqs = allowable_sequences(a.field, &ells, &c)?;
            let t = predicted_multi_betti(a.field, &ells, &c)?;
            report.field = Some(a.field);
            report.predicted = Some((&t).into());
            report.set_payload(json!({ "sequences": seqs }))
        }
        PredictKind::Atom => {
            let n = need(a.n, "n", kind)?;
            let ell = need(a.ell, "ell", kind)?;
            report.param("n", n);
            report.param("ell", ell);
            let t = predicted_atom_betti(a.field, ell, n)?;
            report.field = Some(a.field);
            report.predicted = Some((&t).into());
            match a.field {
                Field::Prime(p) => report.set_payload(json!({ "sequences": atom_sequences(p, ell, n)? })),
                Field::Rationals => {
                    report.set_payload(json!({ "sequences": allowable_sequences(a.field, &[ell], &[n])? }))
                }
            }
        }
        PredictKind::Fk => {
            let p = need_prime(a.field, kind)?;
            let k = need(a.k, "k", kind)?;
            let ell = need(a.ell, "ell", kind)?;
            report.param("k", k);
            report.param("ell", ell);
            let dims: std::collections::BTreeMap<String, u64> = fk_dimension(p, k, ell)?
                .into_iter()
                .map(|(d, r)| (d.to_string(), r))
                .collect();
            report.set_payload(json!({ "dimensions": dims, "basis": fk_basis(p, k, ell as u64)? }))
        }
        PredictKind::Euler => {
            let p = need_prime(a.field, kind)?;
            let k = need(a.k, "k", kind)?;
            let ell = need(a.ell, "ell", kind)?;
            report.param("k", k);
            report.param("ell", ell);
            let r = bredon_euler_check(p, ell, k)?;
            report.check("bredon_euler", CheckFlag::from_bool(r.matches));
            report.set_payload(r)
        }
        PredictKind::Ehp => {
            let d = need(a.d, "d", kind)?;
            let m = need(a.m, "m", kind)?;
            report.param("d", d);
            report.param("m", m);
            let r = ehp_rank_identity(a.field, d, m, ctx.global.bound)?;
            report.check("ehp_rank_identity", CheckFlag::from_bool(r.holds));
            report.set_payload(r)
        }
        PredictKind::Classify => {
            let c = composition()?;
            report.param("composition", &c);
            let v = wedge_of_spheres_classifier(&c)?;
            report.check("confirmed_by_predicted_torsion", CheckFlag::from_bool(v.confirmed));
            if v.wedge != v.corollary_wedge {
                report.notes.push(format!(
                    "the gcd criterion alone would answer wedge = {}, contradicted by the homology",
                    v.corollary_wedge
                ));
            }
            report.set_payload(v)
        }
        PredictKind::Torsion => {
            let c = composition()?;
            let primes: Vec<u64> = match &a.primes {
                Some(p) => p.iter().map(|&x| x as u64).collect(),
                None => vec![2, 3, 5, 7],
            };
            report.param("composition", &c);
            report.param("primes", &primes);
            let r = torsion_bound_check(&c, &primes, ctx.global.bound)?;
            report.check("torsion_bound", CheckFlag::from_bool(r.holds));
            report.field = Some(Field::Rationals);
            report.betti = Some((&r.rational).into());
            report.set_payload(r)
        }
    }
}

/// A Betti table from a JSON file holding either a table or a report.
fn read_table(path: &std::path::Path) -> Result<BettiTable> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::arg(format!("cannot read {}: {e}", path.display())))?;
    if let Ok(t) = serde_json::from_str::<BettiTable>(&text) {
        return Ok(t);
    }
    let r: RunReport = serde_json::from_str(&text).map_err(|e| {
        Error::arg(format!(
            "{} is neither a Betti table nor a run report: {e}",
            path.display()
        ))
    })?;
    let field = r
        .field
        .ok_or_else(|| Error::arg(format!("{} names no field", path.display())))?;
    let ranks = r
        .betti
        .or(r.predicted)
        .ok_or_else(|| Error::arg(format!("{} holds no Betti table", path.display())))?;
    let mut t = BettiTable::new(field);
    for (d, k) in ranks.0 {
        t.add(d, k);
    }
    Ok(t)
}

fn run_compare(a: &CompareArgs, report: &mut RunReport) -> Result<()> {
    report.param("computed", a.computed.display().to_string());
    report.param("predicted", a.predicted.display().to_string());
    let computed = read_table(&a.computed)?;
    let predicted = read_table(&a.predicted)?;
    report.set_computed(&computed);
    record_comparison(report, &computed, &predicted)
}

fn run_suite(ctx: &Context, a: &SuiteArgs, report: &mut RunReport) -> Result<()> {
    report.param("name", &a.name);
    let tier: suite::Tier = a.name.parse()?;
    let results = suite::run_tier(tier, ctx.global.bound);
    for r in &results {
        report.check(&r.id, r.flag);
    }
    report.set_payload(json!({ "fixtures": results }))
}
