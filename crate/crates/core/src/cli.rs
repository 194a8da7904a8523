//! Command-line front end: `check`, `normalize`, `validate` and `sweep`.
//!
//! Exit codes: `check` and `normalize` return 1 on unreadable or ill-formed
//! input and `normalize` returns 2 when fuel runs out. `validate` returns 0,
//! 1 or 2 for Certified, Refuted and Unknown, and 3 when it refuses the
//! input. `sweep` returns 0 iff the suite found nothing wrong. Usage errors
//! exit with 3.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;

use crate::basicsys::{height, load_basic_system, random_system, BasicSystem};
use crate::derivation::enumerate::Universe;
use crate::derivation::format::{parse_derivation, print_derivation, print_derivation_compact};
use crate::derivation::{check_derivation, Derivation, RuleId};
use crate::oracle::{heights_by_levels, soundness_sweep};
use crate::rewrite::sweep::{normalization_sweep, subject_reduction_sweep};
use crate::rewrite::{normalize_with, RuleSet, Strategy};
use crate::syntax::{Atom, Prop};
use crate::validity::{Budget, Certifier, Status, ValidityError};

pub const DEFAULT_FUEL: usize = 10_000;
pub const FUEL_ENV: &str = "BILAT_FUEL";

#[derive(Parser, Debug)]
#[command(
    name = "bilat",
    version,
    about = "Bilateral classical logic: check, normalize and certify derivations"
)]
pub struct Cli {
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a derivation and print its sequent.
    Check { deriv: PathBuf, basic: Option<PathBuf> },
    /// Normalize a derivation and print the normal form.
    Normalize {
        deriv: PathBuf,
        #[arg(long)]
        basic: Option<PathBuf>,
        #[arg(long, default_value = "innermost")]
        strategy: Strategy,
        #[arg(long)]
        fuel: Option<usize>,
        /// Write the reduction trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write the normal form here instead of standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(long = "literal-R")]
        literal_r: bool,
    },
    /// Certify validity and print a verdict line.
    Validate {
        deriv: PathBuf,
        basic: PathBuf,
        #[arg(long, default_value_t = 7)]
        size_bound: usize,
        #[arg(long)]
        fuel: Option<usize>,
        /// Minimum proposition size of the derivation universes.
        #[arg(long, default_value_t = 3)]
        prop_bound: usize,
        #[arg(long = "literal-R")]
        literal_r: bool,
    },
    /// Run an exhaustive or randomized suite.
    Sweep(SweepArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Soundness,
    Normalization,
    SubjectReduction,
    RulePreservation,
    Fixpoint,
    Heights,
}

#[derive(clap::Args, Debug)]
pub struct SweepArgs {
    #[arg(long)]
    pub suite: Suite,
    /// Derivation size bound; defaults to 6 for the enumeration suites and 5
    /// for rule-preservation and fixpoint.
    #[arg(long)]
    pub size_bound: Option<usize>,
    #[arg(long)]
    pub fuel: Option<usize>,
    /// Proposition size bound; defaults to 4 for the enumeration suites and
    /// 3 otherwise.
    #[arg(long)]
    pub prop_bound: Option<usize>,
    #[arg(long)]
    pub basic: Option<PathBuf>,
    /// Atoms added to those of the basic system.
    #[arg(long, default_value = "p,q")]
    pub atoms: String,
    /// Rule for rule-preservation (e.g. `+&I`, `raa`, `basic:0`); all rules
    /// when absent.
    #[arg(long)]
    pub rule: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of random systems for fixpoint and heights.
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long, default_value = "innermost")]
    pub strategy: Strategy,
    #[arg(long = "literal-R")]
    pub literal_r: bool,
}

/// Parses `args` (program name first) and runs the command.
pub fn run(args: impl IntoIterator<Item = OsString>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    if let Some(n) = cli.jobs {
        // fails only when a pool already exists, which is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let env_fuel = std::env::var(FUEL_ENV).ok().and_then(|v| v.trim().parse().ok());
    let fuel = |flag: Option<usize>| flag.or(env_fuel).unwrap_or(DEFAULT_FUEL);
    let result = match cli.command {
        Command::Check { deriv, basic } => cmd_check(&deriv, basic.as_deref(), out),
        Command::Normalize {
            deriv,
            basic,
            strategy,
            fuel: f,
            trace,
            output,
            literal_r,
        } => cmd_normalize(
            &deriv,
            basic.as_deref(),
            strategy,
            fuel(f),
            trace.as_deref(),
            output.as_deref(),
            rules(literal_r),
            out,
        ),
        Command::Validate {
            deriv,
            basic,
            size_bound,
            fuel: f,
            prop_bound,
            literal_r,
        } => cmd_validate(
            &deriv,
            &basic,
            Budget::new(size_bound, fuel(f)),
            prop_bound,
            rules(literal_r),
            out,
        ),
        Command::Sweep(args) => {
            let f = fuel(args.fuel);
            cmd_sweep(&args, f, out)
        }
    };
    match result {
        Ok(code) => code,
        Err(Failure { code, message }) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

fn rules(literal: bool) -> RuleSet {
    if literal {
        RuleSet::LITERAL
    } else {
        RuleSet::FULL
    }
}

/// A command that stopped early, with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

fn fail(code: i32) -> impl Fn(String) -> Failure {
    move |message| Failure { code, message }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_derivation(path: &Path) -> Result<Derivation, String> {
    parse_derivation(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_system(path: Option<&Path>) -> Result<BasicSystem, String> {
    match path {
        None => Ok(BasicSystem::empty()),
        Some(p) => load_basic_system(&read(p)?).map_err(|e| format!("{}: {e}", p.display())),
    }
}

fn io(e: std::io::Error) -> Failure {
    Failure {
        code: 3,
        message: e.to_string(),
    }
}

pub fn cmd_check(deriv: &Path, basic: Option<&Path>, out: &mut dyn Write) -> Result<i32, Failure> {
    let b = load_system(basic).map_err(fail(1))?;
    let d = load_derivation(deriv).map_err(fail(1))?;
    let seq = check_derivation(&d, &b).map_err(|e| fail(1)(format!("{}: {e}", deriv.display())))?;
    writeln!(out, "{seq}").map_err(io)?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_normalize(
    deriv: &Path,
    basic: Option<&Path>,
    strategy: Strategy,
    fuel: usize,
    trace: Option<&Path>,
    output: Option<&Path>,
    rules: RuleSet,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let b = load_system(basic).map_err(fail(1))?;
    let d = load_derivation(deriv).map_err(fail(1))?;
    check_derivation(&d, &b).map_err(|e| fail(1)(format!("{}: {e}", deriv.display())))?;
    let n = normalize_with(&d, strategy, fuel, rules);
    let text = print_derivation(&n.result);
    match output {
        Some(p) => fs::write(p, &text).map_err(|e| fail(1)(format!("{}: {e}", p.display())))?,
        None => out.write_all(text.as_bytes()).map_err(io)?,
    }
    if let Some(p) = trace {
        fs::write(p, n.trace.export()).map_err(|e| fail(1)(format!("{}: {e}", p.display())))?;
    }
    if n.exhausted {
        return Err(fail(2)(format!(
            "fuel exhausted after {} steps with redexes left",
            n.trace.steps.len()
        )));
    }
    Ok(0)
}

pub fn cmd_validate(
    deriv: &Path,
    basic: &Path,
    budget: Budget,
    prop_bound: usize,
    rules: RuleSet,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let b = load_system(Some(basic)).map_err(fail(3))?;
    let d = load_derivation(deriv).map_err(fail(3))?;
    let mut c = Certifier::new(&b, budget)
        .map_err(|e| fail(3)(format!("refusing to certify: {e}")))?
        .with_rules(rules)
        .with_prop_bound(prop_bound);
    let v = c
        .certify(&d)
        .map_err(|e: ValidityError| fail(3)(format!("{}: {e}", deriv.display())))?;
    writeln!(out, "{}", v.report_line(&deriv.display().to_string())).map_err(io)?;
    if v.vacuous {
        writeln!(out, "note: vacuous at this bound").map_err(io)?;
    }
    if let Some(n) = &v.note {
        if v.status != Status::Certified {
            writeln!(out, "note: {n}").map_err(io)?;
        }
    }
    Ok(match v.status {
        Status::Certified => 0,
        Status::Refuted => 1,
        Status::Unknown => 2,
    })
}

fn parse_rule(name: &str) -> Result<RuleId, String> {
    RuleId::from_name(name).ok_or_else(|| format!("unknown rule {name:?}"))
}

fn atoms_arg(list: &str) -> Result<Vec<Atom>, String> {
    if list.trim().is_empty() {
        return Ok(Vec::new());
    }
    crate::basicsys::parse_atom_list(list).ok_or_else(|| format!("bad atom list {list:?}"))
}

fn system_line(b: &BasicSystem) -> String {
    let s = b.save();
    let s = s.trim().replace('\n', " ");
    if s.is_empty() {
        "(empty)".into()
    } else {
        s
    }
}

pub fn cmd_sweep(args: &SweepArgs, fuel: usize, out: &mut dyn Write) -> Result<i32, Failure> {
    let b = load_system(args.basic.as_deref()).map_err(fail(3))?;
    let extra = atoms_arg(&args.atoms).map_err(fail(3))?;
    let mut atoms: Vec<Atom> = b.atoms().into_iter().collect();
    for a in extra {
        if !atoms.contains(&a) {
            atoms.push(a);
        }
    }
    let enum_size = args.size_bound.unwrap_or(6);
    let enum_props = args.prop_bound.unwrap_or(4);
    let rules = rules(args.literal_r);
    let mut w = Vec::<String>::new();
    let names: Vec<&str> = atoms.iter().map(Atom::as_str).collect();
    let header = |w: &mut Vec<String>, size: usize, props: usize| {
        w.push(format!("suite {}", suite_name(args.suite)));
        w.push(format!("system {}", system_line(&b)));
        w.push(format!("atoms {}", names.join(",")));
        w.push(format!("size_bound {size}"));
        w.push(format!("prop_bound {props}"));
    };
    let bad: usize = match args.suite {
        Suite::Soundness => {
            header(&mut w, enum_size, enum_props);
            let r = soundness_sweep(&b, &atoms, enum_size, enum_props);
            w.push(format!("checked {}", r.checked));
            w.push(format!("violations {}", r.violations.len()));
            for d in r.violations.iter().take(5) {
                w.push(format!("  {}", print_derivation_compact(d)));
            }
            r.violations.len()
        }
        Suite::Normalization => {
            header(&mut w, enum_size, enum_props);
            let u = Universe::new(atoms.clone(), enum_props);
            let r = normalization_sweep(&b, u, enum_size, args.strategy, fuel, rules);
            w.push(format!("fuel {fuel}"));
            w.push(format!("checked {}", r.checked));
            w.push(format!("exhausted {}", r.exhausted.len()));
            w.push(format!("max_steps {}", r.max_steps));
            if let Some(d) = &r.max_steps_witness {
                w.push(format!("  {}", print_derivation_compact(d)));
            }
            for d in r.exhausted.iter().take(5) {
                w.push(format!("  exhausted {}", print_derivation_compact(d)));
            }
            r.exhausted.len()
        }
        Suite::SubjectReduction => {
            header(&mut w, enum_size, enum_props);
            let u = Universe::new(atoms.clone(), enum_props);
            let r = subject_reduction_sweep(&b, u, enum_size, rules);
            w.push(format!("checked {}", r.checked));
            w.push(format!("redexes {}", r.redexes));
            w.push(format!("violations {}", r.violations.len()));
            for v in r.violations.iter().take(5) {
                w.push(format!(
                    "  {} at {}: {}",
                    print_derivation_compact(&v.derivation),
                    v.redex,
                    v.reason
                ));
            }
            r.violations.len()
        }
        Suite::RulePreservation => {
            let size = args.size_bound.unwrap_or(5);
            let props = args.prop_bound.unwrap_or(3);
            header(&mut w, size, props);
            let selected: Vec<RuleId> = match &args.rule {
                Some(name) => vec![parse_rule(name).map_err(fail(3))?],
                None => RuleId::SCHEMAS
                    .iter()
                    .cloned()
                    .chain((0..b.len()).map(RuleId::Basic))
                    .collect(),
            };
            let mut c = Certifier::new(&b, Budget::new(size, fuel))
                .map_err(|e| fail(3)(format!("refusing to certify: {e}")))?
                .with_rules(rules)
                .with_prop_bound(props);
            w.push(format!("fuel {fuel}"));
            w.push(crate::validity::PreservationReport::header());
            let mut refuted = 0;
            for r in &selected {
                let rep = c.check_rule_preservation(r, &atoms);
                w.push(rep.row());
                for d in rep.refuted.iter().take(3) {
                    w.push(format!("  refuted {}", print_derivation_compact(d)));
                }
                refuted += rep.refuted.len();
            }
            w.push(format!("refuted {refuted}"));
            refuted
        }
        Suite::Fixpoint => {
            let size = args.size_bound.unwrap_or(5);
            let props = args.prop_bound.unwrap_or(3);
            let count = args.count.unwrap_or(10);
            w.push("suite fixpoint".into());
            w.push(format!("seed {}", args.seed));
            w.push(format!("size_bound {size}"));
            w.push(format!("prop_bound {props}"));
            let mut rng = rand::rngs::StdRng::seed_from_u64(args.seed);
            let mut bad = 0;
            for i in 0..count {
                let sys = random_system(&mut rng, 4, 5, true);
                w.push(format!("system {i} {}", system_line(&sys)));
                let mut c = Certifier::new(&sys, Budget::new(size, fuel))
                    .map_err(|e| fail(3)(e.to_string()))?
                    .with_rules(rules)
                    .with_prop_bound(props);
                for k in 0..4 {
                    let a = Atom::new(&format!("a{k}")).expect("identifier");
                    let run = c.kleene(&Prop::Atom(a.clone()));
                    let it = &run.iteration;
                    let violations = it.monotonicity_violations().len();
                    let late = !it.converged || it.steps() > run.plus_universe.len() + 1;
                    bad += violations + usize::from(late);
                    w.push(format!(
                        "  {a} universe={}/{} steps={} plus={} minus={} monotonicity_violations={violations}{}",
                        run.plus_universe.len(),
                        run.minus_universe.len(),
                        it.steps(),
                        run.plus.len(),
                        run.minus.len(),
                        if late { " NOT-STABLE" } else { "" }
                    ));
                }
            }
            w.push(format!("violations {bad}"));
            bad
        }
        Suite::Heights => {
            let count = args.count.unwrap_or(20);
            w.push("suite heights".into());
            w.push(format!("seed {}", args.seed));
            let mut rng = rand::rngs::StdRng::seed_from_u64(args.seed);
            let mut mismatches = 0;
            let mut compared = 0;
            for i in 0..count {
                let sys = random_system(&mut rng, 6, 6, false);
                let reference = heights_by_levels(&sys);
                let mut row = Vec::new();
                for (a, want) in &reference {
                    let got = height(&sys, a).ok();
                    compared += 1;
                    if got != *want {
                        mismatches += 1;
                        row.push(format!("{a}:{got:?}!={want:?}"));
                    } else {
                        row.push(format!("{a}:{}", got.map_or("-".into(), |h| h.to_string())));
                    }
                }
                w.push(format!("system {i} {} | {}", system_line(&sys), row.join(" ")));
            }
            w.push(format!("compared {compared}"));
            w.push(format!("mismatches {mismatches}"));
            mismatches
        }
    };
    for line in w {
        writeln!(out, "{line}").map_err(io)?;
    }
    Ok(if bad == 0 { 0 } else { 1 })
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Soundness => "soundness",
        Suite::Normalization => "normalization",
        Suite::SubjectReduction => "subject-reduction",
        Suite::RulePreservation => "rule-preservation",
        Suite::Fixpoint => "fixpoint",
        Suite::Heights => "heights",
    }
}
