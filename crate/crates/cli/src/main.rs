use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use superchar::gf::Theta;
use superchar::involution_group::{
    structural_checks, CheckOutcome, Family, GroupContext, GroupSpec, SpecFile, Springer,
};
use superchar::par::{configure_threads, Exec};
use superchar::sct::{
    axiom_checks, glambda_check, induction_report, intersection_check, left_multiplication_report, orbit_dump,
    scalar_independence, springer_independence, table_csv, table_json, theta_independence, Theory, TheoryKind,
    TheoryOptions,
};
use superchar::triangular::MirrorPoset;
use superchar::unitary::{
    a2ulambda_check, degree_audit, ennola_degree_check, enumerate_twisted, formula_grid, indexing_checks,
    product_check, render_degree_audit, UnitaryTables,
};
use superchar::Error;

const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Parser)]
#[command(name = "superchar", version, about = "Supercharacter tables of unipotent groups defined by anti-involutions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the superclass and supercharacter tables.
    Table(TableArgs),
    /// Run named verification checks and print PASS/FAIL per check.
    Verify(VerifyArgs),
    /// Dump superclass or dual orbits as JSON lines.
    Orbits(OrbitsArgs),
    /// Compare the unitary closed forms against brute-force tables.
    UnitaryCheck(UnitaryArgs),
    /// Count twisted set partitions.
    CountPartitions(CountArgs),
}

#[derive(Args)]
struct GroupArgs {
    /// JSON spec file with keys family, n, p, e, k and an optional poset path.
    #[arg(long, conflicts_with_all = ["family", "n", "p", "e", "k"])]
    spec: Option<PathBuf>,
    /// UT, UO, USp or UU.
    #[arg(long, value_parser = parse_family)]
    family: Option<Family>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<u32>,
    /// Base field F_q with q = p^e.
    #[arg(long)]
    e: Option<u32>,
    /// Matrix entries in F_{q^k}; defaults to 2 for UU and 1 otherwise.
    #[arg(long)]
    k: Option<u32>,
    /// Poset file: n on the first line, then one "i j" generator per line.
    #[arg(long)]
    poset: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum, default_value_t = SpringerArg::Cayley)]
    springer: SpringerArg,
    #[arg(long, value_enum, default_value_t = ThetaArg::Standard)]
    theta: ThetaArg,
    /// Worker threads; 1 runs the sequential kernels.
    #[arg(long, env = "SUPERCHAR_THREADS")]
    threads: Option<usize>,
    /// Skip the size guards.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Defaults to the extension of --output, else json.
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Skip the axiom checks after building.
    #[arg(long)]
    no_verify: bool,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Checks to run; repeatable. Defaults to every check that applies.
    #[arg(long = "check", value_enum)]
    checks: Vec<Check>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Add one to a table cell before the axiom checks.
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Args)]
struct OrbitsArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, value_enum, default_value_t = Side::Primal)]
    side: Side,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct UnitaryArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Print every partition as a JSON line.
    #[arg(long)]
    list: bool,
    /// Also count superclasses by orbit enumeration.
    #[arg(long)]
    compare: bool,
    #[arg(long)]
    force: bool,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpringerArg {
    Cayley,
    Log,
}

#[derive(Clone, Copy, ValueEnum)]
enum ThetaArg {
    Standard,
    Alternate,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Primal,
    Dual,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
enum Check {
    Structure,
    Axioms,
    Induction,
    Intersection,
    LeftMultiplication,
    SpringerIndependence,
    ThetaIndependence,
    ScalarIndependence,
    Glambda,
}

/// A failed run: message for stderr and the process exit code.
struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure { code: 1, msg: msg.into() }
    }
    fn io(path: &Path, err: std::io::Error) -> Self {
        Failure { code: 4, msg: format!("{}: {err}", path.display()) }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Verification(_) | Error::Cyclotomic(_) => 2,
            Error::Guard(_) => 3,
            Error::Field(_) | Error::Matrix(_) | Error::Spec(_) => 1,
        };
        Failure { code, msg: e.to_string() }
    }
}

type Run = Result<u8, Failure>;

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

fn read_poset(path: &Path) -> Result<MirrorPoset, Failure> {
    MirrorPoset::parse(&read(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

impl GroupArgs {
    fn resolve(&self, default_family: Option<Family>) -> Result<GroupSpec, Failure> {
        let mut poset = self.poset.as_deref().map(read_poset).transpose()?;
        let spec = if let Some(path) = &self.spec {
            let file: SpecFile =
                serde_json::from_str(&read(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            if poset.is_none() {
                if let Some(rel) = &file.poset {
                    let base = path.parent().unwrap_or(Path::new("."));
                    poset = Some(read_poset(&base.join(rel))?);
                }
            }
            file.to_spec(poset)?
        } else {
            let family =
                self.family.or(default_family).ok_or_else(|| Failure::usage("--family or --spec is required"))?;
            let n = self.n.ok_or_else(|| Failure::usage("--n is required"))?;
            let p = self.p.ok_or_else(|| Failure::usage("--p is required"))?;
            let k = self.k.unwrap_or(if family == Family::UU { 2 } else { 1 });
            let mut spec = GroupSpec::new(family, n, p, self.e.unwrap_or(1), k);
            if let Some(poset) = poset {
                spec = spec.with_poset(poset);
            }
            spec
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl RunArgs {
    fn options(&self) -> TheoryOptions {
        if let Some(t) = self.threads.filter(|&t| t > 0) {
            configure_threads(t);
        }
        TheoryOptions {
            springer: match self.springer {
                SpringerArg::Cayley => Springer::Cayley,
                SpringerArg::Log => Springer::Log,
            },
            theta: match self.theta {
                ThetaArg::Standard => Theta::Standard,
                ThetaArg::Alternate => Theta::Alternate,
            },
            exec: if self.threads == Some(1) { Exec::Sequential } else { Exec::Parallel },
            force: self.force,
        }
    }
}

fn context(spec: &GroupSpec, force: bool) -> Result<Arc<GroupContext>, Failure> {
    let ctx = GroupContext::new(spec)?;
    if !force {
        ctx.check_guards()?;
    }
    Ok(Arc::new(ctx))
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::io(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn report_line(out: &mut String, c: &CheckOutcome) -> bool {
    let status = if c.passed { "PASS" } else { "FAIL" };
    if c.detail.is_empty() {
        let _ = writeln!(out, "{status} {}", c.name);
    } else {
        let _ = writeln!(out, "{status} {}: {}", c.name, c.detail);
    }
    c.passed
}

fn cmd_table(a: &TableArgs) -> Run {
    let spec = a.group.resolve(None)?;
    let ext = a.output.as_ref().and_then(|p| p.extension()).and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
    let by_ext = match ext.as_deref() {
        Some("json") => Some(Format::Json),
        Some("csv") => Some(Format::Csv),
        _ => None,
    };
    let format = match (a.format, by_ext) {
        (Some(f), Some(g)) if f != g => return Err(Failure::usage("--format does not match the --output extension")),
        (f, g) => f.or(g).unwrap_or(Format::Json),
    };
    let opts = a.run.options();
    let theory = Theory::build(context(&spec, opts.force)?, opts)?;
    let (sc, mut ch) = theory.tables()?;
    if a.inject_fault {
        ch.inject_fault();
    }
    let text = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&table_json(&theory, &sc, &ch)).expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv => table_csv(&theory, &sc, &ch),
    };
    emit(a.output.as_deref(), &text)?;
    if a.no_verify {
        return Ok(0);
    }
    let failed: Vec<_> = axiom_checks(&theory, &sc, &ch, a.seed).into_iter().filter(|c| !c.passed).collect();
    for c in &failed {
        eprintln!("FAIL {}: {} (seed {:#x})", c.name, c.detail, a.seed);
    }
    Ok(if failed.is_empty() { 0 } else { 2 })
}

fn default_checks(theory: &Theory) -> Vec<Check> {
    let ctx = theory.ctx();
    let mut v = vec![Check::Structure, Check::Axioms, Check::Induction, Check::ThetaIndependence];
    match theory.kind() {
        TheoryKind::Involution => {
            v.extend([Check::Intersection, Check::LeftMultiplication]);
            if ctx.log_defined() {
                v.push(Check::SpringerIndependence);
            }
        }
        TheoryKind::AlgebraGroup => v.push(Check::Glambda),
    }
    if ctx.tower().q() != ctx.spec().p {
        v.push(Check::ScalarIndependence);
    }
    v.sort();
    v
}

fn cmd_verify(a: &VerifyArgs) -> Run {
    let spec = a.group.resolve(None)?;
    let opts = a.run.options();
    let ctx = context(&spec, opts.force)?;
    let theory = Theory::build(ctx.clone(), opts)?;
    let (sc, mut ch) = theory.tables()?;
    if a.inject_fault {
        ch.inject_fault();
    }
    let mut checks = if a.checks.is_empty() { default_checks(&theory) } else { a.checks.clone() };
    checks.dedup();
    let mut out = String::new();
    let _ = writeln!(out, "{}: {} superclasses, seed {:#x}", spec.label(), sc.classes.len(), a.seed);
    let mut ok = true;
    for check in checks {
        let results = match check {
            Check::Structure => structural_checks(&ctx, a.seed),
            Check::Axioms => axiom_checks(&theory, &sc, &ch, a.seed),
            Check::Induction => vec![induction_report(&theory, &sc, &ch, a.seed)],
            Check::Intersection => vec![intersection_check(&theory, &sc)?],
            Check::LeftMultiplication => vec![left_multiplication_report(&theory, a.seed)?],
            Check::SpringerIndependence => vec![springer_independence(&ctx, opts)?],
            Check::ThetaIndependence => vec![theta_independence(&ctx, opts)?],
            Check::ScalarIndependence => vec![scalar_independence(&ctx, opts)?],
            Check::Glambda => vec![glambda_check(&theory)?],
        };
        let group = check.to_possible_value().expect("not skipped").get_name().to_string();
        for c in &results {
            ok &=
                report_line(&mut out, &CheckOutcome::new(&format!("{group}: {}", c.name), c.passed, c.detail.clone()));
        }
    }
    emit(a.output.as_deref(), &out)?;
    Ok(if ok { 0 } else { 2 })
}

fn cmd_orbits(a: &OrbitsArgs) -> Run {
    let spec = a.group.resolve(None)?;
    let opts = a.run.options();
    let theory = Theory::build(context(&spec, opts.force)?, opts)?;
    let text = match a.side {
        Side::Primal => orbit_dump(theory.primal(), |i| theory.space().element(i).to_entries()),
        Side::Dual => {
            let codec = theory.dual().codec();
            orbit_dump(theory.dual(), |i| theory.functional(&codec.decode(i)).encodings())
        }
    };
    emit(a.output.as_deref(), &text)?;
    Ok(0)
}

fn unitary_spec(g: &GroupArgs) -> Result<GroupSpec, Failure> {
    let spec = g.resolve(Some(Family::UU))?;
    if spec.family != Family::UU {
        return Err(Failure::usage("this subcommand needs family UU"));
    }
    Ok(spec)
}

fn cmd_unitary_check(a: &UnitaryArgs) -> Run {
    let spec = unitary_spec(&a.group)?;
    let opts = a.run.options();
    let tables = UnitaryTables::build(context(&spec, opts.force)?, opts)?;
    let grid = formula_grid(&tables)?;
    let mut out = String::new();
    let _ = writeln!(out, "{}: {} twisted partitions", spec.label(), tables.partitions.len());
    let mut ok = report_line(
        &mut out,
        &CheckOutcome::new(
            "closed-form values",
            grid.passed(),
            format!(
                "{0}×{0} pairs, {1} failures, {2} zero mismatches, {3} degree mismatches",
                grid.size,
                grid.failures.len(),
                grid.zero_mismatches,
                grid.degree_mismatches.len()
            ),
        ),
    );
    out.push_str(&grid.render(&tables));
    let mut checks = indexing_checks(&tables);
    checks.push(product_check(&tables));
    checks.push(a2ulambda_check(&tables)?);
    checks.push(ennola_degree_check(&tables.characters, tables.ctx().tower().q() as u64));
    for c in &checks {
        ok &= report_line(&mut out, c);
    }
    out.push_str("degree formula audit\n");
    out.push_str(&render_degree_audit(&degree_audit(&tables)?));
    emit(a.output.as_deref(), &out)?;
    Ok(if ok { 0 } else { 2 })
}

fn cmd_count_partitions(a: &CountArgs) -> Run {
    let spec = unitary_spec(&a.group)?;
    let ctx = context(&spec, a.force)?;
    let parts = enumerate_twisted(spec.n, ctx.tower());
    let mut out = String::new();
    if a.list {
        for p in &parts {
            let _ = writeln!(out, "{}", p.to_json());
        }
    }
    let mut summary = json!({"n": spec.n, "q": ctx.tower().q(), "partitions": parts.len()});
    let mut code = 0;
    if a.compare {
        let classes = superchar::orbits::primal_orbits(&ctx, Exec::Parallel).len();
        summary["superclasses"] = json!(classes);
        if classes != parts.len() {
            code = 2;
        }
    }
    let _ = writeln!(out, "{summary}");
    emit(a.output.as_deref(), &out)?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            });
        }
    };
    let run = match &cli.command {
        Command::Table(a) => cmd_table(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Orbits(a) => cmd_orbits(a),
        Command::UnitaryCheck(a) => cmd_unitary_check(a),
        Command::CountPartitions(a) => cmd_count_partitions(a),
    };
    match run {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
