//! `fincyc`: batch decisions on free-by-finite-cyclic groups.
//!
//! Exit codes: 0 decided positive, 2 decided negative, 3 unresolved,
//! 1 input error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fincyc::automorphism::{out_conjugate, outer_order, OrderSearch, OutConjugacy};
use fincyc::congruence::{verify_separation, QuotientFamily, SeparationOutcome, TorusAutomorphism};
use fincyc::mapping_torus::{mwh_precheck, torus_conjugate, Precheck, TorusConjugacy};
use fincyc::realization::{finite_order_catalog, CatalogBounds};
use fincyc::whitehead::{orbit_equivalent, OrbitVerdict, TupleClass};
use fincyc::witness::Witness;
use fincyc::{Alphabet, Budget, FreeAutomorphism, MappingTorus, TorusElement};

#[derive(Parser, Debug)]
#[command(name = "fincyc", version, about = "Decision procedures for free-by-finite-cyclic groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Power bound for outer-order searches.
    #[arg(long, global = true, default_value_t = 10_000)]
    bound: u32,
    /// Step budget for conjugator and orbit searches.
    #[arg(long, global = true, default_value_t = 20_000)]
    steps: u64,
    /// Optional wall-clock limit; verdicts may then depend on machine speed.
    #[arg(long, global = true)]
    budget_ms: Option<u64>,
    /// Largest finite quotient tried by the congruence search.
    #[arg(long, global = true, default_value_t = 48)]
    max_order: usize,
    /// Accepted for reproducible batch configs; every search is deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write a witness (or catalog) artifact here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Outer order of an automorphism with its certificate.
    Order { auto: PathBuf },
    /// Generator `t^k f0` of the center of the mapping torus.
    Center { auto: PathBuf },
    /// Conjugacy of two mapping-torus elements, written `t^p w`.
    TorusConj { auto: PathBuf, x: String, y: String },
    /// Conjugacy of two outer automorphism classes.
    OutConj { auto1: PathBuf, auto2: PathBuf },
    /// Automorphic equivalence of two tuples of cyclic words (`;` between
    /// entries, `,` inside a simultaneously conjugated group).
    Whitehead {
        t1: String,
        t2: String,
        /// Defaults to the largest generator that occurs.
        #[arg(long)]
        rank: Option<u32>,
    },
    /// Finite quotient on which each torus automorphism stays non-inner.
    Congruence { auto: PathBuf, automorphisms: Vec<PathBuf> },
    /// Finite-order outer classes realized by graph isometries.
    Catalog {
        m: usize,
        #[arg(long)]
        max_vertices: Option<usize>,
        #[arg(long)]
        max_edges: Option<usize>,
        #[arg(long)]
        no_subdivide: bool,
    },
    /// Shape and exponent check for two tuples of torus elements.
    MwhPrecheck { auto: PathBuf, p: String, q: String },
    /// Re-check a witness file.
    Verify { witness: PathBuf },
}

enum Verdict {
    Positive,
    Negative,
    Unresolved,
}

impl Verdict {
    fn code(self) -> ExitCode {
        ExitCode::from(match self {
            Verdict::Positive => 0,
            Verdict::Negative => 2,
            Verdict::Unresolved => 3,
        })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(v) => v.code(),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

type CliResult<T> = Result<T, String>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_auto(path: &Path) -> CliResult<FreeAutomorphism> {
    FreeAutomorphism::parse_text(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_torus(path: &Path, bound: u32) -> CliResult<MappingTorus> {
    MappingTorus::with_bound(load_auto(path)?, bound).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(cli: &Cli, w: Witness) -> CliResult<()> {
    if let Some(path) = &cli.out {
        fs::write(path, w.to_text()).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(())
}

fn budget(cli: &Cli) -> Budget {
    let b = Budget::steps(cli.steps);
    match cli.budget_ms {
        Some(ms) => b.with_millis(ms),
        None => b,
    }
}

fn run(cli: &Cli) -> CliResult<Verdict> {
    if cli.steps == 0 || cli.bound == 0 || cli.max_order == 0 || cli.budget_ms == Some(0) {
        return Err("budgets must be positive".into());
    }
    match &cli.command {
        Command::Order { auto } => {
            let phi = load_auto(auto)?;
            match outer_order(&phi, cli.bound) {
                OrderSearch::Found(cert) => {
                    println!("order {}, f0 = {}", cert.order, cert.f0);
                    emit(cli, Witness::Order { phi, certificate: cert })?;
                    Ok(Verdict::Positive)
                }
                OrderSearch::Exceeded { power } => {
                    println!("exceeded at power {power}");
                    Ok(Verdict::Negative)
                }
                OrderSearch::Absent { bound } => {
                    println!("absent up to bound {bound}");
                    Ok(Verdict::Negative)
                }
            }
        }
        Command::Center { auto } => {
            let phi = load_auto(auto)?;
            let Some(cert) = outer_order(&phi, cli.bound).certificate().cloned() else {
                println!("no finite outer order up to bound {}", cli.bound);
                return Ok(Verdict::Negative);
            };
            let torus = MappingTorus::with_certificate(phi.clone(), cert).map_err(|e| e.to_string())?;
            let center = torus.center().map_err(|e| e.to_string())?;
            println!("{center}");
            emit(cli, Witness::Center { phi, center })?;
            Ok(Verdict::Positive)
        }
        Command::TorusConj { auto, x, y } => {
            let torus = load_torus(auto, cli.bound)?;
            let parse = |s: &str| torus.parse_element(s).map_err(|e| format!("{s:?}: {e}"));
            let (x, y) = (parse(x)?, parse(y)?);
            let phi = torus.monodromy().clone();
            match torus_conjugate(&x, &y, &torus, budget(cli)) {
                TorusConjugacy::Conjugate(conjugator) => {
                    println!("CONJUGATE {conjugator}");
                    emit(cli, Witness::TorusConjugate { phi, x, y, conjugator })?;
                    Ok(Verdict::Positive)
                }
                TorusConjugacy::NotConjugate(certificate) => {
                    println!("NOT_CONJUGATE {certificate}");
                    emit(cli, Witness::TorusNotConjugate { phi, x, y, certificate })?;
                    Ok(Verdict::Negative)
                }
                TorusConjugacy::Unresolved => {
                    println!("UNRESOLVED");
                    Ok(Verdict::Unresolved)
                }
            }
        }
        Command::OutConj { auto1, auto2 } => {
            let (phi, psi) = (load_auto(auto1)?, load_auto(auto2)?);
            match out_conjugate(&phi, &psi, budget(cli)).map_err(|e| e.to_string())? {
                OutConjugacy::Conjugate(theta) => {
                    println!("CONJUGATE {theta}");
                    emit(cli, Witness::OutConjugate { phi, psi, theta })?;
                    Ok(Verdict::Positive)
                }
                OutConjugacy::Distinguished(field) => {
                    println!("NOT_CONJUGATE {field}");
                    emit(cli, Witness::OutDistinguished { phi, psi, field })?;
                    Ok(Verdict::Negative)
                }
                OutConjugacy::Unresolved => {
                    println!("UNRESOLVED");
                    Ok(Verdict::Unresolved)
                }
            }
        }
        Command::Whitehead { t1, t2, rank } => {
            let rank = rank.unwrap_or_else(|| inferred_rank(&[t1, t2]));
            let alphabet = Alphabet::new(rank).map_err(|e| e.to_string())?;
            let parse = |s: &str| TupleClass::parse(s, alphabet).map_err(|e| format!("{s:?}: {e}"));
            let (t1, t2) = (parse(t1)?, parse(t2)?);
            match orbit_equivalent(&t1, &t2, budget(cli)).map_err(|e| e.to_string())? {
                OrbitVerdict::Equivalent(alpha) => {
                    println!("EQUIVALENT {alpha}");
                    emit(cli, Witness::WhiteheadEquivalent { t1, t2, alpha })?;
                    Ok(Verdict::Positive)
                }
                OrbitVerdict::Inequivalent => {
                    println!("INEQUIVALENT");
                    emit(cli, Witness::WhiteheadInequivalent { t1, t2 })?;
                    Ok(Verdict::Negative)
                }
                OrbitVerdict::Unresolved => {
                    println!("UNRESOLVED");
                    Ok(Verdict::Unresolved)
                }
            }
        }
        Command::Congruence { auto, automorphisms } => {
            let torus = load_torus(auto, cli.bound)?;
            let mut autos = Vec::new();
            for path in automorphisms {
                let psi = TorusAutomorphism::parse_text(&read(path)?, &torus)
                    .map_err(|e| format!("{}: {e}", path.display()))?;
                let id = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into());
                autos.push((id, psi));
            }
            let family = QuotientFamily::build(&torus, cli.max_order);
            let w = verify_separation(&torus, family.quotients(), &autos, cli.bound).map_err(|e| e.to_string())?;
            match &w.quotient {
                Some(q) => println!("quotient {} order {}", q.label(), q.order()),
                None => println!("quotient none"),
            }
            for e in &w.entries {
                let line = match &e.outcome {
                    SeparationOutcome::Separated { .. } => "separated".to_string(),
                    SeparationOutcome::Trivial { conjugator } => format!("trivial {conjugator}"),
                    SeparationOutcome::NotApplicable { bound } => format!("not-applicable {bound}"),
                    SeparationOutcome::Unseparated { .. } => "unseparated".to_string(),
                };
                println!("{} {line}", e.id);
            }
            let verdict = if w.all_separated() { Verdict::Positive } else { Verdict::Unresolved };
            emit(cli, Witness::Congruence(w))?;
            Ok(verdict)
        }
        Command::Catalog {
            m,
            max_vertices,
            max_edges,
            no_subdivide,
        } => {
            let mut bounds = CatalogBounds::for_rank(*m);
            if let Some(v) = max_vertices {
                bounds.max_vertices = *v;
            }
            if let Some(e) = max_edges {
                bounds.max_edges = *e;
            }
            bounds.subdivide = !no_subdivide;
            let catalog = finite_order_catalog(*m, bounds, budget(cli)).map_err(|e| e.to_string())?;
            let orders: Vec<String> = catalog.orders().iter().map(ToString::to_string).collect();
            println!("orders {}", orders.join(" "));
            for (i, e) in catalog.entries.iter().enumerate() {
                println!("{i} order {} {} {}", e.order, e.graph, e.automorphism);
            }
            if let Some(path) = &cli.out {
                fs::write(path, catalog.to_text()).map_err(|e| format!("{}: {e}", path.display()))?;
            }
            Ok(if catalog.unresolved_pairs == 0 { Verdict::Positive } else { Verdict::Unresolved })
        }
        Command::MwhPrecheck { auto, p, q } => {
            let alphabet = load_auto(auto)?.alphabet();
            let (p, q) = (parse_tuples(p, alphabet)?, parse_tuples(q, alphabet)?);
            match mwh_precheck(&p, &q) {
                Precheck::Pass => {
                    println!("PASS");
                    Ok(Verdict::Positive)
                }
                Precheck::Fail(reason) => {
                    println!("FAIL {reason}");
                    Ok(Verdict::Negative)
                }
            }
        }
        Command::Verify { witness } => {
            let w = Witness::parse(&read(witness)?).map_err(|e| format!("{}: {e}", witness.display()))?;
            match w.verify() {
                Ok(()) => {
                    println!("VERIFIED {}", w.kind());
                    Ok(Verdict::Positive)
                }
                Err(e) => {
                    println!("FALSIFIED {e}");
                    Ok(Verdict::Negative)
                }
            }
        }
    }
}

/// Entries separated by `;`, elements inside an entry by `,`.
fn parse_tuples(s: &str, alphabet: Alphabet) -> CliResult<Vec<Vec<TorusElement>>> {
    s.split(';')
        .map(|entry| {
            entry
                .split(',')
                .map(|x| TorusElement::parse(x.trim(), alphabet).map_err(|e| format!("{x:?}: {e}")))
                .collect()
        })
        .collect()
}

fn inferred_rank(tuples: &[&String]) -> u32 {
    tuples
        .iter()
        .flat_map(|s| s.chars())
        .filter(char::is_ascii_alphabetic)
        .map(|c| (c.to_ascii_lowercase() as u8 - b'a') as u32 + 1)
        .max()
        .unwrap_or(1)
}
