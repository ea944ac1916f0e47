//! The `mlcomp` command line.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{all_instructions, checked_pow, Transformation};
use crate::codes::{err, odd, shortened_hamming};
use crate::compiler::{exact_complexity, Complexity, Compiler};
use crate::error::{Error, Result};
use crate::formats::{
    build_machine, parse_descriptor, parse_schedule, parse_transformation, parse_transformations, print_descriptor,
    print_program, print_schedule, print_transformation, MachineDescriptor,
};
use crate::gray::{canonical_gray, doubling_gray, even_gray, product_gray, pseudo_gray};
use crate::machines::{
    all_diff_catalog, emit_compact, emit_complete, emit_elementary, emit_enumeration, emit_fast,
    emit_max, emit_qp, emit_simple, Emitted, MachineKind, UniversalMachine,
};
use crate::verify::{
    parallel_impossibility, theorem1_check, verify_sequential, Mode, VerificationReport,
    DEFAULT_BUDGET, DEFAULT_SEED,
};

#[derive(Parser, Debug)]
#[command(name = "mlcomp", version, about = "Memoryless computation and universal automata networks")]
struct Cli {
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compile a transformation file into an instruction program.
    Compile {
        #[arg(long, required_unless_present_any = ["all_targets", "sample"])]
        target: Option<PathBuf>,
        /// Compile and check every transformation of `A^n`.
        #[arg(long, conflicts_with = "target")]
        all_targets: bool,
        /// Compile and check this many seeded random transformations.
        #[arg(long, conflicts_with_all = ["target", "all_targets"])]
        sample: Option<usize>,
        /// Also report the minimal program length found by search.
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Print a Gray code.
    Gray {
        #[arg(long, default_value = "canonical")]
        kind: String,
        #[arg(long)]
        stats: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Check the shortened Hamming code with `--n` information bits.
    Code {
        #[command(flatten)]
        common: Common,
    },
    /// Write a machine descriptor.
    Build {
        #[command(flatten)]
        machine: MachineArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Emit a schedule and run it on sampled states.
    Simulate {
        #[command(flatten)]
        machine: MachineArgs,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Verify a machine on the selected targets.
    Verify {
        #[command(flatten)]
        machine: MachineArgs,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Check that no single transformation's induced instructions generate
    /// all singular transformations.
    #[command(name = "check-theorem1")]
    CheckTheorem1 {
        #[command(flatten)]
        common: Common,
    },
    /// Check that no transformation of `A^m` parallel-simulates two
    /// distinct constants of `A^n`.
    #[command(name = "check-parallel")]
    CheckParallel {
        /// Size of the simulating network (defaults to `n`).
        #[arg(long)]
        m: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Largest state count checked exhaustively.
    #[arg(long)]
    budget: Option<u128>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print reports as JSON.
    #[arg(long)]
    json: bool,
}

impl Common {
    fn q(&self) -> u32 {
        self.q.unwrap_or(2)
    }

    fn n(&self) -> usize {
        self.n.unwrap_or(2)
    }
}

#[derive(Args, Debug)]
struct MachineArgs {
    /// Machine kind, or a descriptor file written by `build`.
    #[arg(long)]
    machine: String,
    /// Catalog file for max-time and quasi-parallel machines, or a list of
    /// targets simulated in turn.
    #[arg(long)]
    targets: Option<PathBuf>,
    /// Number of generated catalog entries when no catalog file is given.
    #[arg(long, default_value_t = 2)]
    k: usize,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long, conflicts_with = "all_targets")]
    target: Option<PathBuf>,
    /// Every transformation of `A^n`.
    #[arg(long)]
    all_targets: bool,
    /// Catalog indices simulated in turn, comma separated.
    #[arg(long, value_delimiter = ',')]
    sequence: Option<Vec<usize>>,
    /// Passes over the enumeration.
    #[arg(long, default_value_t = 1)]
    repeat: usize,
    #[arg(long, conflicts_with = "sample")]
    exhaustive: bool,
    #[arg(long)]
    sample: Option<usize>,
    /// Check this schedule file against `--target` instead of emitting one.
    #[arg(long, requires = "target")]
    schedule: Option<PathBuf>,
}

/// Outcome of a subcommand: passed or a verification failure.
enum Outcome {
    Pass,
    Fail,
}

/// Parses `args` (program name first) and runs the subcommand, writing the
/// report to `out`. Returns the exit code.
pub fn dispatch<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    eprint!("{}", e.render());
                    2
                }
            };
        }
    };
    let mut buffer = Vec::new();
    let result = match cli.jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build() {
            Ok(pool) => pool.install(|| run(cli.command, &mut buffer)),
            Err(e) => Err(Error::Precondition(e.to_string())),
        },
        None => run(cli.command, &mut buffer),
    };
    if let Err(e) = out.write_all(&buffer) {
        eprintln!("error: {e}");
        return 2;
    }
    match result {
        Ok(Outcome::Pass) => 0,
        Ok(Outcome::Fail) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn run(command: Command, out: &mut dyn Write) -> Result<Outcome> {
    match command {
        Command::Compile {
            target: Some(target),
            oracle,
            common,
            ..
        } => compile(&target, oracle, &common, out),
        Command::Compile {
            all_targets,
            sample,
            common,
            ..
        } => compile_batch(all_targets, sample, &common, out),
        Command::Gray {
            kind,
            stats,
            common,
        } => gray(&kind, stats, &common, out),
        Command::Code { common } => code(&common, out),
        Command::Build { machine, common } => build(&machine, &common, out),
        Command::Simulate {
            machine,
            run,
            common,
        } => simulate(&machine, &run, &common, out),
        Command::Verify {
            machine,
            run,
            common,
        } => verify(&machine, &run, &common, out),
        Command::CheckTheorem1 { common } => {
            let report = theorem1_check(common.q(), common.n())?;
            emit_report(&report, &common, out)
        }
        Command::CheckParallel { m, common } => {
            let report = parallel_impossibility(common.q(), m.unwrap_or(common.n()), common.n())?;
            emit_report(&report, &common, out)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write_out(common: &Common, text: &str, out: &mut dyn Write) -> Result<()> {
    match &common.out {
        Some(path) => std::fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_report(report: &VerificationReport, common: &Common, out: &mut dyn Write) -> Result<Outcome> {
    if common.json {
        writeln!(out, "{}", report.to_json())?;
    } else {
        writeln!(out, "{report}")?;
    }
    Ok(if report.passed() {
        Outcome::Pass
    } else {
        Outcome::Fail
    })
}

fn check_shape(g: &Transformation, common: &Common) -> Result<()> {
    let mismatch = common.q.is_some_and(|q| q != g.q()) || common.n.is_some_and(|n| n != g.n());
    if mismatch {
        return Err(Error::Shape(format!(
            "file holds a transformation of [{}]^{}",
            g.q(),
            g.n()
        )));
    }
    Ok(())
}

fn compile(target: &Path, oracle: bool, common: &Common, out: &mut dyn Write) -> Result<Outcome> {
    let g = parse_transformation(&read(target)?)?;
    check_shape(&g, common)?;
    let report = Compiler::new(g.q(), g.n())?.transformation_program(&g)?;
    let mut text = print_program(&report.program);
    if common.out.is_some() {
        write_out(common, &text, out)?;
        text.clear();
    }
    text.push_str(&format!("# length: {}\n", report.length));
    let ok = report.verify(&g);
    if oracle {
        let found = exact_complexity(&g, &all_instructions(g.n(), g.q()), 1 << 20);
        match found {
            Complexity::Exact(k) => text.push_str(&format!("# optimal: {k}\n")),
            Complexity::Unknown => text.push_str("# optimal: unknown\n"),
        }
    }
    text.push_str(&format!("# verified: {}\n", if ok { "yes" } else { "no" }));
    out.write_all(text.as_bytes())?;
    Ok(if ok { Outcome::Pass } else { Outcome::Fail })
}

fn compile_batch(
    all: bool,
    sample: Option<usize>,
    common: &Common,
    out: &mut dyn Write,
) -> Result<Outcome> {
    let (q, n) = (common.q(), common.n());
    let size = checked_pow(q, n).ok_or_else(|| Error::Shape("q^n overflows".into()))?;
    let targets: Vec<Transformation> = if all {
        let total = checked_pow(size as u32, size)
            .filter(|&t| t <= 1 << 20)
            .ok_or_else(|| Error::Precondition("too many targets to enumerate".into()))?;
        (0..total)
            .map(|s| Transformation::from_enumeration_index(n, q, s as u128))
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
        (0..sample.unwrap_or(0))
            .map(|_| Transformation::from_images(n, q, (0..size).map(|_| rng.gen_range(0..size)).collect()))
            .collect::<Result<_>>()?
    };
    let compiler = Compiler::new(q, n)?;
    let results = targets
        .par_iter()
        .map(|g| {
            let report = compiler.transformation_program(g)?;
            Ok((report.length, report.verify(g)))
        })
        .collect::<Result<Vec<_>>>()?;
    let passed = results.iter().filter(|r| r.1).count();
    let longest = results.iter().map(|r| r.0).max().unwrap_or(0);
    writeln!(out, "q: {q}")?;
    writeln!(out, "n: {n}")?;
    writeln!(out, "seed: {}", common.seed)?;
    writeln!(out, "longest: {longest}")?;
    writeln!(out, "{passed}/{} compile and verify", results.len())?;
    Ok(if passed == results.len() {
        Outcome::Pass
    } else {
        Outcome::Fail
    })
}

fn gray(kind: &str, stats: bool, common: &Common, out: &mut dyn Write) -> Result<Outcome> {
    let (n, q) = (common.n(), common.q());
    let (order, delta, runs, redundancy) = match kind {
        "pseudo" => {
            let code = pseudo_gray(n, q)?;
            let r = code.redundancy();
            (code.order().to_vec(), code.delta().to_vec(), code.run_count(), r)
        }
        _ => {
            let code = match kind {
                "canonical" => canonical_gray(n, q)?,
                "doubling" => doubling_gray(n)?,
                "product" => product_gray(n)?,
                "even" => even_gray(n, q)?,
                other => return Err(Error::Precondition(format!("unknown Gray code kind {other:?}"))),
            };
            (code.order().to_vec(), code.delta().to_vec(), code.run_count(), 0)
        }
    };
    let q = order.first().map_or(q, |s| s.q());
    let mut text = format!("gray kind={kind} n={n} q={q}\n");
    for (s, d) in order.iter().zip(&delta) {
        let digits: Vec<String> = s.digits().iter().map(u32::to_string).collect();
        text.push_str(&format!("{} : {d}\n", digits.join(" ")));
    }
    write_out(common, &text, out)?;
    if stats {
        writeln!(out, "states: {}", order.len())?;
        writeln!(out, "runs: {runs}")?;
        writeln!(out, "redundancy: {redundancy}")?;
    }
    Ok(Outcome::Pass)
}

fn code(common: &Common, out: &mut dyn Write) -> Result<Outcome> {
    let k = common.n();
    let code = shortened_hamming(k)?;
    let n_hat = code.n_hat();
    writeln!(out, "k: {k}")?;
    writeln!(out, "r: {}", code.r())?;
    writeln!(out, "length: {n_hat}")?;
    if k <= 24 {
        writeln!(out, "distance: {}", code.minimum_distance())?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let u: Vec<u8> = (0..k).map(|_| rng.gen_range(0..2)).collect();
    let word = code.encode(&u)?;
    let mut located = 0;
    for e in 0..n_hat {
        let mut v = word.clone();
        v[e] ^= 1;
        located += usize::from(code.decode_error_position(&v)? == e + 1);
    }
    writeln!(out, "seed: {}", common.seed)?;
    writeln!(out, "single errors located: {located}/{n_hat}")?;
    let q = common.q();
    let flips = (0..q).filter(|&a| odd(err(a, q)) == 1 - odd(a)).count();
    writeln!(out, "parity flips (q={q}): {flips}/{q}")?;
    let ok = located == n_hat && flips == q as usize;
    writeln!(out, "result: {}", if ok { "pass" } else { "FAIL" })?;
    Ok(if ok { Outcome::Pass } else { Outcome::Fail })
}

/// A machine together with the catalog it was built from.
struct Built {
    machine: UniversalMachine,
    catalog: Vec<Transformation>,
}

fn default_catalog(kind: MachineKind, q: u32, n: usize, k: usize, seed: u64) -> Result<Vec<Transformation>> {
    match kind {
        MachineKind::MaxTime => Ok(all_diff_catalog(q, n, k)?.into_iter().flatten().collect()),
        MachineKind::QuasiParallel => {
            let size = checked_pow(q, n).ok_or_else(|| Error::Shape("q^n overflows".into()))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut cat: Vec<Transformation> = (1..k.max(1))
                .map(|_| {
                    let images = (0..size).map(|_| rng.gen_range(0..size)).collect();
                    Transformation::from_images(n, q, images)
                })
                .collect::<Result<_>>()?;
            cat.push(Transformation::identity(n, q));
            Ok(cat)
        }
        _ => Ok(Vec::new()),
    }
}

fn machine_of(args: &MachineArgs, common: &Common) -> Result<Built> {
    if let Ok(kind) = args.machine.parse::<MachineKind>() {
        let catalog = match (&args.targets, kind.has_catalog()) {
            (Some(path), true) => parse_transformations(&read(path)?)?,
            (None, true) => default_catalog(kind, common.q(), common.n(), args.k, common.seed)?,
            _ => Vec::new(),
        };
        let machine = build_machine(kind, common.q(), common.n(), catalog.clone())?;
        return Ok(Built { machine, catalog });
    }
    let path = Path::new(&args.machine);
    if !path.is_file() {
        return Err(Error::Precondition(format!(
            "{:?} is neither a machine kind nor a descriptor file",
            args.machine
        )));
    }
    let descriptor = parse_descriptor(&read(path)?)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let machine = descriptor.build(dir)?;
    Ok(Built {
        catalog: machine.catalog(),
        machine,
    })
}

fn build(args: &MachineArgs, common: &Common, out: &mut dyn Write) -> Result<Outcome> {
    let built = machine_of(args, common)?;
    let catalog = if built.machine.kind().has_catalog() {
        let text: String = built.catalog.iter().map(print_transformation).collect();
        let name = match &common.out {
            Some(path) => {
                let file = format!(
                    "{}.catalog.tf",
                    path.file_stem().and_then(|s| s.to_str()).unwrap_or("machine")
                );
                std::fs::write(path.with_file_name(&file), text)?;
                file
            }
            None => "catalog.tf".to_string(),
        };
        Some(name)
    } else {
        None
    };
    let d = MachineDescriptor::of(&built.machine, catalog.as_deref());
    write_out(common, &print_descriptor(&d), out)?;
    if common.out.is_some() {
        writeln!(out, "kind: {}", d.kind)?;
        writeln!(out, "m: {}", d.m)?;
    }
    Ok(Outcome::Pass)
}

/// The targets named by `--target`, `--targets` or `--all-targets`.
fn targets_of(args: &MachineArgs, run: &RunArgs, machine: &UniversalMachine) -> Result<Vec<Transformation>> {
    let (q, n) = (machine.q(), machine.n());
    let list = if let Some(path) = &run.target {
        vec![parse_transformation(&read(path)?)?]
    } else if run.all_targets {
        let size = checked_pow(q, n).ok_or_else(|| Error::Shape("q^n overflows".into()))?;
        let total = checked_pow(size as u32, size)
            .filter(|&t| t <= 1 << 16)
            .ok_or_else(|| Error::Precondition("too many targets to enumerate".into()))?;
        (0..total)
            .map(|s| Transformation::from_enumeration_index(n, q, s as u128))
            .collect()
    } else if let (Some(path), false) = (&args.targets, machine.kind().has_catalog()) {
        parse_transformations(&read(path)?)?
    } else {
        Vec::new()
    };
    if let Some(g) = list.iter().find(|g| g.q() != q || g.n() != n) {
        return Err(Error::Shape(format!(
            "target over [{}]^{}, machine over [{q}]^{n}",
            g.q(),
            g.n()
        )));
    }
    Ok(list)
}

/// Emissions to check: one per target for single-target machines, one in
/// total for machines that run through a sequence.
fn emissions(built: &Built, args: &MachineArgs, run: &RunArgs) -> Result<Vec<Emitted>> {
    let machine = &built.machine;
    let targets = targets_of(args, run, machine)?;
    let need_targets = || {
        if targets.is_empty() {
            Err(Error::Precondition(format!(
                "the {} machine needs --target, --targets or --all-targets",
                machine.kind()
            )))
        } else {
            Ok(())
        }
    };
    match machine.kind() {
        MachineKind::Compact | MachineKind::Simple | MachineKind::Fast => {
            need_targets()?;
            targets
                .iter()
                .map(|g| match machine.kind() {
                    MachineKind::Compact => emit_compact(machine, g),
                    MachineKind::Simple => emit_simple(machine, g),
                    _ => emit_fast(machine, g),
                })
                .collect()
        }
        MachineKind::Elementary => {
            need_targets()?;
            if run.all_targets {
                targets
                    .iter()
                    .map(|g| emit_elementary(machine, std::slice::from_ref(g)))
                    .collect()
            } else {
                Ok(vec![emit_elementary(machine, &targets)?])
            }
        }
        MachineKind::Complete => {
            need_targets()?;
            Ok(vec![emit_complete(machine, &targets)?])
        }
        MachineKind::MinTime => Ok(vec![emit_enumeration(machine, run.repeat)?]),
        MachineKind::MaxTime => {
            let rows = machine.catalog().len()
                / machine
                    .param("Q")
                    .and_then(|v| v.parse::<usize>().ok())
                    .unwrap_or(1)
                    .max(1);
            let sequence = run.sequence.clone().unwrap_or_else(|| (0..rows).collect());
            Ok(vec![emit_max(machine, &sequence)?])
        }
        MachineKind::QuasiParallel => Ok(vec![emit_qp(machine, run.repeat)?]),
    }
}

/// Exhaustive when asked for, or by default when the state space fits the
/// budget; sampled otherwise.
fn mode_of(run: &RunArgs, common: &Common, machine: &UniversalMachine) -> Mode {
    let budget = common.budget.unwrap_or(DEFAULT_BUDGET);
    let fits = checked_pow(machine.q(), machine.m()).is_some_and(|s| s as u128 <= budget);
    if run.exhaustive || (run.sample.is_none() && fits) {
        Mode::Exhaustive { budget }
    } else {
        Mode::Sampled {
            count: run.sample.unwrap_or(10_000),
            seed: common.seed,
        }
    }
}

fn simulate(args: &MachineArgs, run: &RunArgs, common: &Common, out: &mut dyn Write) -> Result<Outcome> {
    let built = machine_of(args, common)?;
    let emitted = emissions(&built, args, run)?;
    let [single] = emitted.as_slice() else {
        return Err(Error::Precondition(
            "simulate takes one schedule; use --targets for a sequence".into(),
        ));
    };
    write_out(common, &print_schedule(&single.schedule), out)?;
    let mode = mode_of(run, common, &built.machine);
    let report = verify_sequential(&built.machine, single, mode)?;
    writeln!(out, "machine: {} m={}", built.machine.kind(), built.machine.m())?;
    writeln!(out, "steps: {}", single.schedule.len())?;
    writeln!(out, "boundaries: {}", single.schedule.boundaries().len())?;
    emit_report(&report, common, out)
}

fn verify(args: &MachineArgs, run: &RunArgs, common: &Common, out: &mut dyn Write) -> Result<Outcome> {
    let built = machine_of(args, common)?;
    let emitted = match &run.schedule {
        Some(path) => {
            let mut schedule = parse_schedule(&read(path)?)?;
            if schedule.boundaries().is_empty() {
                schedule.mark(0);
            }
            vec![Emitted {
                schedule,
                targets: targets_of(args, run, &built.machine)?,
                blocks: Vec::new(),
            }]
        }
        None => emissions(&built, args, run)?,
    };
    let mode = mode_of(run, common, &built.machine);
    let mut total: Option<VerificationReport> = None;
    let mut passed = 0;
    for (i, e) in emitted.iter().enumerate() {
        if emitted.len() > 16 && i % 64 == 0 {
            eprintln!("verify: {i}/{}", emitted.len());
        }
        let report = verify_sequential(&built.machine, e, mode)?;
        passed += usize::from(report.passed());
        match &mut total {
            Some(t) => t.absorb(report),
            None => total = Some(report),
        }
    }
    let mut report = total.expect("at least one emission");
    let longest = emitted.iter().map(|e| e.schedule.len()).max().unwrap_or(0);
    report.lengths = vec![("schedule".into(), longest)];
    writeln!(out, "machine: {} m={}", built.machine.kind(), built.machine.m())?;
    if let Mode::Exhaustive { .. } = mode {
        writeln!(out, "seed: {}", common.seed)?;
    }
    let boundaries: usize = emitted.iter().map(|e| e.schedule.boundaries().len()).sum();
    writeln!(out, "boundaries: {boundaries}")?;
    writeln!(out, "{passed}/{} pass", emitted.len())?;
    emit_report(&report, common, out)
}
