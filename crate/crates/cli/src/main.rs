//! `locality`: classify, construct and enumerate locality semigroups.
//!
//! Exit status: 0 on success or a true verdict, 1 on a false verdict, 2 on
//! usage, parse or domain errors.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use locality_core::check::{
    is_left_locality_ideal, is_locality_ideal, is_right_locality_ideal, is_sub_locality_semigroup, subset_member,
};
use locality_core::enumerate::{adjunction_preservation, sampled_census, MAX_EXHAUSTIVE};
use locality_core::fixtures::{self, FIXTURES};
use locality_core::predicate::{
    coprime_magma, coprime_with_zero, powerset_magma, sampled_classify, totient_hom_check, SetOp,
};
use locality_core::quiver::FreeExtension;
use locality_core::{
    adjoin_identity, adjoin_zero, census, classify, complete_to_semigroup_with_zero, find_witness,
    generated_sub_locality_semigroup, is_strong_semigroup_with_zero, verify_free_property, CensusOptions, ClassReport,
    ElementId, Error, FinitePartialMagma, FlagPattern, MagmaDocument, Quiver, SemigroupWithZero, Verdict,
};

#[derive(Parser)]
#[command(
    name = "locality",
    version,
    about = "Check, build and enumerate finite locality semigroups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report every class flag, witnesses, identities and zeros.
    Classify { file: PathBuf },
    /// Exit 0 if the magma belongs to CLASS, 1 with a witness otherwise.
    Check {
        file: PathBuf,
        #[arg(long, value_enum)]
        class: Class,
    },
    /// Left or right polar of a subset.
    Polar {
        file: PathBuf,
        #[command(flatten)]
        side: SideArg,
        /// Comma-separated labels; omit for the empty set.
        #[arg(long, default_value = "")]
        set: String,
    },
    /// Complete to a total semigroup by sending undefined products to a new zero.
    Complete {
        file: PathBuf,
        /// Label of the adjoined zero (default: the file's zero, else `0`).
        #[arg(long)]
        zero: Option<String>,
    },
    /// Check abc ≠ 0 ⇔ (ab ≠ 0 and bc ≠ 0) on a total table with a `zero:` line.
    StrongZero {
        file: PathBuf,
        #[arg(long)]
        zero: Option<String>,
    },
    /// Adjoin a new identity or zero.
    Adjoin {
        file: PathBuf,
        #[command(flatten)]
        unit: UnitArg,
    },
    /// Smallest subset containing SET and closed under defined products.
    Generate {
        file: PathBuf,
        #[arg(long)]
        set: String,
    },
    /// Sub-structure and ideal checks for a subset.
    Ideal {
        file: PathBuf,
        #[arg(long)]
        set: String,
        /// Which verdict decides the exit status.
        #[arg(long, value_enum, default_value_t = IdealSide::Both)]
        side: IdealSide,
    },
    /// Quiver paths and free extensions.
    #[command(subcommand)]
    Quiver(QuiverCommand),
    /// Exhaustive or sampled enumeration of small magmas.
    #[command(subcommand)]
    Enumerate(EnumerateCommand),
    /// Built-in infinite and parametrised structures.
    #[command(subcommand)]
    Builtin(BuiltinCommand),
    /// Print a shipped example file, or list them.
    Examples { name: Option<String> },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SideArg {
    #[arg(long)]
    left: bool,
    #[arg(long)]
    right: bool,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct UnitArg {
    #[arg(long, value_name = "LABEL")]
    identity: Option<String>,
    #[arg(long, value_name = "LABEL")]
    zero: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Class {
    Locality,
    Strong,
    Refined,
    Partial,
    Transitive,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IdealSide {
    Sub,
    Left,
    Right,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Union,
    Intersection,
}

#[derive(Subcommand)]
enum QuiverCommand {
    /// List paths up to a length.
    Paths {
        file: PathBuf,
        #[arg(long)]
        max_len: usize,
        /// Also classify the truncated path magma.
        #[arg(long)]
        classify: bool,
    },
    /// Extend an arrow map into a refined target and verify the free property.
    FreeExt {
        file: PathBuf,
        #[arg(long)]
        target: PathBuf,
        /// `arrow=element` pairs, comma separated.
        #[arg(long)]
        map: String,
        #[arg(long)]
        max_len: usize,
    },
}

#[derive(Subcommand)]
enum EnumerateCommand {
    /// Count magmas on SIZE elements by class pattern.
    Census {
        #[arg(long)]
        size: usize,
        /// Also count isomorphism classes.
        #[arg(long)]
        dedup: bool,
        /// Worker threads (default: available parallelism).
        #[arg(long)]
        jobs: Option<usize>,
        /// Sample random tables instead of enumerating; requires --samples.
        #[arg(long, requires = "samples")]
        seed: Option<u64>,
        #[arg(long, requires = "seed")]
        samples: Option<usize>,
    },
    /// First magma in enumeration order matching a flag pattern.
    Find {
        #[arg(long)]
        size: usize,
        /// e.g. `locality=yes,partial=no`
        #[arg(long, default_value = "")]
        flags: String,
    },
    /// Which classes survive adjoining an identity or a zero.
    AdjoinStats {
        #[arg(long)]
        size: usize,
    },
}

#[derive(Subcommand)]
enum BuiltinCommand {
    /// Positive integers related when coprime, under multiplication.
    Coprime {
        #[arg(long)]
        bound: u64,
        #[arg(long, value_enum)]
        check: Option<Class>,
        /// Use the naturals with 0 related to everything.
        #[arg(long)]
        with_zero: bool,
    },
    /// Subsets of {1..SIZE} related by inclusion.
    Powerset {
        #[arg(long)]
        size: usize,
        #[arg(long, value_enum)]
        op: Op,
    },
    /// Euler's totient on coprime pairs with product at most BOUND.
    Totient {
        #[arg(long)]
        bound: u64,
    },
}

type Outcome = Result<bool, Error>;

fn read(path: &FsPath) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Domain(format!("{}: {e}", path.display())))
}

fn load_document(path: &FsPath) -> Result<MagmaDocument, Error> {
    read(path)?
        .parse()
        .map_err(|e| Error::Domain(format!("{}: {e}", path.display())))
}

fn load_magma(path: &FsPath) -> Result<FinitePartialMagma, Error> {
    load_document(path).map(|d| d.magma)
}

fn load_quiver(path: &FsPath) -> Result<Quiver, Error> {
    read(path)?
        .parse()
        .map_err(|e| Error::Domain(format!("{}: {e}", path.display())))
}

fn labels(list: &str) -> Result<Vec<ElementId>, Error> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(ElementId::new)
        .collect()
}

fn set_string<'a>(xs: impl IntoIterator<Item = &'a ElementId>) -> String {
    let parts: Vec<&str> = xs.into_iter().map(ElementId::as_str).collect();
    format!("{{{}}}", parts.join(","))
}

fn verdict_line(name: &str, v: &Verdict) -> bool {
    match v.witness() {
        None => println!("{name}=yes"),
        Some(w) => println!("{name}=no witness={w:#}"),
    }
    v.holds()
}

fn class_verdict(report: &ClassReport, class: Class) -> (&'static str, &Verdict) {
    match class {
        Class::Locality => ("locality", &report.locality),
        Class::Strong => ("strong", &report.strong),
        Class::Refined => ("refined", &report.refined),
        Class::Partial => ("partial", &report.partial_semigroup),
        Class::Transitive => ("transitive", &report.transitive),
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Classify { file } => {
            print!("{}", classify(&load_magma(&file)?));
            Ok(true)
        }
        Command::Check { file, class } => {
            let report = classify(&load_magma(&file)?);
            let (name, v) = class_verdict(&report, class);
            Ok(verdict_line(name, v))
        }
        Command::Polar { file, side, set } => {
            let m = load_magma(&file)?;
            let u = labels(&set)?;
            let (name, polar) = if side.left {
                ("left", m.left_polar(&u)?)
            } else {
                ("right", m.right_polar(&u)?)
            };
            println!("POLAR {name} U={} = {}", set_string(&u), set_string(&polar));
            Ok(true)
        }
        Command::Complete { file, zero } => {
            let doc = load_document(&file)?;
            let zero = match zero {
                Some(z) => ElementId::new(&z)?,
                None => doc.zero.unwrap_or(ElementId::new("0")?),
            };
            let t = complete_to_semigroup_with_zero(&doc.magma, &zero)?;
            print!("{}", t.to_document());
            Ok(true)
        }
        Command::StrongZero { file, zero } => {
            let doc = load_document(&file)?;
            let zero = match (zero, doc.zero) {
                (Some(z), _) => ElementId::new(&z)?,
                (None, Some(z)) => z,
                (None, None) => return Err(Error::Domain("no zero given: add a `zero:` line or --zero".into())),
            };
            let t = SemigroupWithZero { table: doc.magma, zero };
            Ok(verdict_line("strong-zero", &is_strong_semigroup_with_zero(&t)?))
        }
        Command::Adjoin { file, unit } => {
            let m = load_magma(&file)?;
            let doc = match (unit.identity, unit.zero) {
                (Some(e), _) => MagmaDocument {
                    magma: adjoin_identity(&m, &ElementId::new(&e)?)?,
                    zero: None,
                },
                (None, Some(z)) => {
                    let z = ElementId::new(&z)?;
                    MagmaDocument {
                        magma: adjoin_zero(&m, &z)?,
                        zero: Some(z),
                    }
                }
                (None, None) => unreachable!("clap requires one of --identity or --zero"),
            };
            print!("{doc}");
            Ok(true)
        }
        Command::Generate { file, set } => {
            let m = load_magma(&file)?;
            let a = labels(&set)?;
            let b = generated_sub_locality_semigroup(&m, &a)?;
            println!("GENERATED {} = {}", set_string(&a), set_string(&b));
            Ok(true)
        }
        Command::Ideal { file, set, side } => {
            let m = load_magma(&file)?;
            let a = labels(&set)?;
            let verdicts = [
                (
                    IdealSide::Sub,
                    "sub",
                    is_sub_locality_semigroup(&m, subset_member(&m, &a)?)?,
                ),
                (
                    IdealSide::Left,
                    "left-ideal",
                    is_left_locality_ideal(&m, subset_member(&m, &a)?)?,
                ),
                (
                    IdealSide::Right,
                    "right-ideal",
                    is_right_locality_ideal(&m, subset_member(&m, &a)?)?,
                ),
                (IdealSide::Both, "ideal", is_locality_ideal(&m, subset_member(&m, &a)?)?),
            ];
            println!("SUBSET {}", set_string(&a));
            let mut decisive = true;
            for (s, name, v) in &verdicts {
                let holds = verdict_line(name, v);
                if *s == side {
                    decisive = holds;
                }
            }
            Ok(decisive)
        }
        Command::Quiver(QuiverCommand::Paths {
            file,
            max_len,
            classify: with_report,
        }) => {
            let q = load_quiver(&file)?;
            let pm = q.materialize(max_len)?;
            let mut paths: Vec<_> = pm.paths.values().collect();
            paths.sort_by_key(|p| (p.len(), (*p).clone()));
            for p in &paths {
                println!(
                    "PATH {} length={} source={} target={}",
                    q.path_label(p),
                    p.len(),
                    q.vertices()[q.source(p)],
                    q.vertices()[q.target(p)]
                );
            }
            println!("PATHS {} boundary-pairs={}", paths.len(), pm.boundary.len());
            if with_report {
                print!("{}", classify(&pm.magma));
            }
            Ok(true)
        }
        Command::Quiver(QuiverCommand::FreeExt {
            file,
            target,
            map,
            max_len,
        }) => {
            let q = load_quiver(&file)?;
            let s = load_magma(&target)?;
            let mut f = BTreeMap::new();
            for pair in map.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                let (a, b) = pair
                    .split_once('=')
                    .ok_or_else(|| Error::Domain(format!("expected `arrow=element`, got `{pair}`")))?;
                if f.insert(ElementId::new(a.trim())?, ElementId::new(b.trim())?).is_some() {
                    return Err(Error::Domain(format!("arrow `{}` mapped twice", a.trim())));
                }
            }
            let ext = FreeExtension::new(&q, &s, &f)?;
            for p in q.paths_up_to(max_len, locality_core::quiver::MAX_PATHS)? {
                if !p.is_trivial() {
                    println!("IMAGE {} -> {}", q.path_label(&p), ext.apply(&p)?);
                }
            }
            let report = verify_free_property(&q, &s, &f, max_len)?;
            println!("CHECKED paths={} pairs={}", report.paths_checked, report.pairs_checked);
            Ok(verdict_line("free-property", &report.verdict))
        }
        Command::Enumerate(EnumerateCommand::Census {
            size,
            dedup,
            jobs,
            seed,
            samples,
        }) => {
            let c = match (seed, samples) {
                (Some(seed), Some(samples)) => {
                    if dedup {
                        return Err(Error::Domain("--dedup is not available in sampling mode".into()));
                    }
                    sampled_census(size, samples, seed, jobs)?
                }
                _ if size > MAX_EXHAUSTIVE => {
                    return Err(Error::Domain(format!(
                        "size {size} is too large to enumerate exhaustively (limit {MAX_EXHAUSTIVE}); use --seed and --samples"
                    )))
                }
                _ => census(size, CensusOptions { jobs, dedup })?,
            };
            print!("{c}");
            Ok(true)
        }
        Command::Enumerate(EnumerateCommand::Find { size, flags }) => {
            let pattern: FlagPattern = flags.parse()?;
            match find_witness(&pattern, size)? {
                Some(m) => {
                    print!("{m}");
                    Ok(true)
                }
                None => {
                    println!("NOT-FOUND size={size}");
                    Ok(false)
                }
            }
        }
        Command::Enumerate(EnumerateCommand::AdjoinStats { size }) => {
            print!("{}", adjunction_preservation(size)?);
            Ok(true)
        }
        Command::Builtin(BuiltinCommand::Coprime {
            bound,
            check,
            with_zero,
        }) => {
            let p = if with_zero {
                coprime_with_zero()
            } else {
                coprime_magma()
            };
            let r = sampled_classify(&p, bound)?;
            print!("{r}");
            Ok(match check {
                Some(class) => class_verdict(&r.report, class).1.holds(),
                None => true,
            })
        }
        Command::Builtin(BuiltinCommand::Powerset { size, op }) => {
            let op = match op {
                Op::Union => SetOp::Union,
                Op::Intersection => SetOp::Intersection,
            };
            let m = powerset_magma(size, op)?;
            print!("{m}{}", classify(&m));
            Ok(true)
        }
        Command::Builtin(BuiltinCommand::Totient { bound }) => Ok(verdict_line(
            &format!("totient-homomorphism bound={bound}"),
            &totient_hom_check(bound)?,
        )),
        Command::Examples { name: None } => {
            let names: BTreeSet<&str> = FIXTURES.iter().map(|f| f.name).collect();
            for n in names {
                println!("{n}");
            }
            Ok(true)
        }
        Command::Examples { name: Some(name) } => {
            print!("{}", fixtures::fixture(&name)?.text);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ (Error::NotAssociative { .. } | Error::NotRefined(_) | Error::NotLocalityMap(_))) => {
            println!("FAILED {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
