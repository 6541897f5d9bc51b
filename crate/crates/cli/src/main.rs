use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use relforge_core::compact::{compact_decompose_search, DEFAULT_NODE_LIMIT};
use relforge_core::derived::derived_operator_system;
use relforge_core::format::{parse_expr, parse_monoid, parse_relation, print_expr, print_monoid, print_relation};
use relforge_core::impossibility::{default_target, impossibility_search_order2};
use relforge_core::laws::{check_laws, LawConfig};
use relforge_core::operator::{cyclic_function_set, operator_instantiation_demo};
use relforge_core::ops::{add, compose, extend_false, transform};
use relforge_core::solver::{brute_solve, pipeline_formula, pipeline_solve_default, Agreement};
use relforge_core::{
    decompose, DecomposeOptions, DecompositionResult, DoubleBranchesEquation, Monoid, Relation, TransformSpec,
};

const SEED_ENV: &str = "RELFORGE_SEED";

#[derive(Parser)]
#[command(name = "relforge", version, about = "Finite additive relations: algebra, decomposition and equation solving")]
struct Cli {
    /// Carrier monoid: `mod` (cyclic), `saturating` (min(a+b, order-1)) or a monoid file.
    #[arg(long, global = true, default_value = "mod")]
    monoid: String,
    /// Write the main output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a relation in canonical form.
    Show {
        file: PathBuf,
        /// Also print tuple and point-class counts.
        #[arg(long)]
        stats: bool,
    },
    /// Pointwise set-sum of two relations.
    Add { left: PathBuf, right: PathBuf },
    /// Compose a one-variable relation into argument INDEX (0 = value slot).
    Compose {
        relation: PathBuf,
        beta: PathBuf,
        #[arg(long)]
        index: usize,
    },
    /// Permute tuple positions; SPEC lists a position label (0 = value) per slot.
    Transform {
        relation: PathBuf,
        #[arg(long)]
        spec: TransformSpec,
    },
    /// Embed a relation into more variables.
    Extend {
        relation: PathBuf,
        #[arg(long)]
        arity: usize,
        /// Target position (1-based) of each original argument, comma-separated.
        #[arg(long, value_delimiter = ',', required = true)]
        positions: Vec<usize>,
    },
    /// Decompose a relation into a superposition of one-variable relations.
    Decompose {
        relation: PathBuf,
        #[arg(long, value_enum, default_value_t = DecomposeMethod::Trivial)]
        method: DecomposeMethod,
        /// Maximum term count for the compact search.
        #[arg(long, default_value_t = 4)]
        budget: usize,
        #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
        node_limit: u64,
        /// Drop terms for points whose value is {0}.
        #[arg(long)]
        prune_zero: bool,
        #[arg(long, value_enum, default_value_t = ExprFormat::Sexpr)]
        format: ExprFormat,
    },
    /// Evaluate an expression at a point, or tabulate it.
    EvalExpr {
        expr: PathBuf,
        /// Comma-separated point; the expression is tabulated when omitted.
        #[arg(long, value_delimiter = ',')]
        point: Option<Vec<usize>>,
        /// Number of variables when tabulating (default: highest variable used).
        #[arg(long)]
        arity: Option<usize>,
        /// Carrier order when the expression contains no relation.
        #[arg(long)]
        order: Option<usize>,
    },
    /// Solve (x R1 a) R3 (x R2 b) = c.
    SolveDb {
        r1: PathBuf,
        r2: PathBuf,
        r3: PathBuf,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        c: usize,
        #[arg(long, value_enum, default_value_t = SolveMethodArg::Both)]
        method: SolveMethodArg,
        /// Also print the explicit formula for the solution relation.
        #[arg(long)]
        formula: bool,
        #[arg(long, value_enum, default_value_t = ExprFormat::Sexpr)]
        format: ExprFormat,
    },
    /// Check the algebraic laws on seeded random instances.
    Laws {
        #[arg(long, default_value_t = 3)]
        order: usize,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.4)]
        density: f64,
        #[arg(long, default_value_t = 2)]
        arity: usize,
    },
    /// Generate a seeded random relation.
    Random {
        #[arg(long)]
        arity: usize,
        #[arg(long)]
        order: usize,
        #[arg(long, default_value_t = 0.4)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Single-valued and total.
        #[arg(long)]
        functional: bool,
    },
    /// Build the monoid of one-variable relations under addition.
    DerivedSystem {
        #[arg(long, default_value_t = 2)]
        order: usize,
        /// List every element with its label.
        #[arg(long)]
        elements: bool,
        /// Print the full addition table as a monoid file.
        #[arg(long)]
        table: bool,
        /// Run the operator-equation demo over the cyclic function set (order 3).
        #[arg(long)]
        operator_demo: bool,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exhaustive search for short representations of the order-2 singular relation.
    Impossibility {
        #[arg(long, default_value_t = 1)]
        max_terms: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DecomposeMethod {
    Trivial,
    Compact,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExprFormat {
    Sexpr,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolveMethodArg {
    Pipeline,
    Brute,
    Both,
}

/// A domain check that failed (exit 1), as opposed to an error (exit 2).
struct Verdict {
    output: String,
    ok: bool,
}

impl From<String> for Verdict {
    fn from(output: String) -> Self {
        Verdict { output, ok: true }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_relation(path: &Path) -> Result<Relation> {
    parse_relation(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn resolve_monoid(selector: &str, order: usize) -> Result<Monoid> {
    let m = match selector {
        "mod" => {
            if order == 0 {
                bail!("--monoid mod needs order >= 1");
            }
            Monoid::modular(order)
        }
        "saturating" => {
            if order == 0 {
                bail!("--monoid saturating needs order >= 1");
            }
            Monoid::saturating(order - 1)
        }
        path => {
            let path = Path::new(path);
            parse_monoid(&read(path)?).with_context(|| format!("in {}", path.display()))?
        }
    };
    if m.order() != order {
        bail!("--monoid has order {}, but the input has order {order}", m.order());
    }
    Ok(m)
}

fn seed(flag: u64) -> Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().with_context(|| format!("{SEED_ENV}={v:?} is not a u64")),
        Err(_) => Ok(flag),
    }
}

fn render(d: &DecompositionResult, format: ExprFormat) -> String {
    match format {
        ExprFormat::Sexpr => print_expr(&d.expr) + "\n",
        ExprFormat::Table => d.expr.to_table_notation() + "\n",
    }
}

fn run(cli: &Cli) -> Result<Verdict> {
    let sel = cli.monoid.as_str();
    Ok(match &cli.command {
        Command::Show { file, stats } => {
            let r = load_relation(file)?;
            let mut out = print_relation(&r);
            if *stats {
                let [undefined, single, many] = r.class_counts();
                writeln!(
                    out,
                    "tuples={} undefined={undefined} single={single} many={many} function={}",
                    r.tuple_count(),
                    r.is_function()
                )?;
            }
            out.into()
        }
        Command::Add { left, right } => {
            let (l, r) = (load_relation(left)?, load_relation(right)?);
            let m = resolve_monoid(sel, l.order())?;
            print_relation(&add(&l, &r, &m)?).into()
        }
        Command::Compose { relation, beta, index } => {
            let (r, b) = (load_relation(relation)?, load_relation(beta)?);
            print_relation(&compose(&r, *index, &b)?).into()
        }
        Command::Transform { relation, spec } => print_relation(&transform(&load_relation(relation)?, spec)?).into(),
        Command::Extend { relation, arity, positions } => {
            print_relation(&extend_false(&load_relation(relation)?, *arity, positions)?).into()
        }
        Command::Decompose { relation, method, budget, node_limit, prune_zero, format } => {
            let r = load_relation(relation)?;
            let m = resolve_monoid(sel, r.order())?;
            let d = match method {
                DecomposeMethod::Trivial => decompose(&r, &m, DecomposeOptions { prune_zero: *prune_zero })?,
                DecomposeMethod::Compact => compact_decompose_search(&r, &m, *budget, *node_limit)?,
            };
            eprintln!("method={} terms={} arity={} order={}", d.method.name(), d.term_count, d.arity, r.order());
            render(&d, *format).into()
        }
        Command::EvalExpr { expr, point, arity, order } => {
            let e = parse_expr(&read(expr)?).with_context(|| format!("in {}", expr.display()))?;
            let order = match (e.carrier_order()?, *order) {
                (Some(o), Some(given)) if o != given => bail!("--order {given} conflicts with expression order {o}"),
                (Some(o), _) | (None, Some(o)) => o,
                (None, None) => bail!("expression has no relations; pass --order"),
            };
            let m = resolve_monoid(sel, order)?;
            match point {
                Some(p) => {
                    e.validate(p.len(), order)?;
                    if let Some(&bad) = p.iter().find(|&&x| x >= order) {
                        bail!("--point coordinate {bad} is out of range for order {order}");
                    }
                    format!("{}\n", e.evaluate(p, &m)).into()
                }
                None => {
                    let arity = arity.unwrap_or_else(|| e.max_var());
                    print_relation(&e.to_relation(arity, &m)?).into()
                }
            }
        }
        Command::SolveDb { r1, r2, r3, a, b, c, method, formula, format } => {
            let (r1, r2, r3) = (load_relation(r1)?, load_relation(r2)?, load_relation(r3)?);
            let m = resolve_monoid(sel, r3.order())?;
            let eq = DoubleBranchesEquation::new(r1, r2, r3, *a, *b, *c)?;
            let mut out = String::new();
            let mut ok = true;
            let pipeline = if *method != SolveMethodArg::Brute || *formula {
                Some(pipeline_solve_default(&eq, &m)?)
            } else {
                None
            };
            let brute = (*method != SolveMethodArg::Pipeline).then(|| brute_solve(&eq));
            if let (Some(p), true) = (&pipeline, *method != SolveMethodArg::Brute) {
                writeln!(out, "pipeline: {:?}", p.solution_set)?;
            }
            if let Some(bs) = brute {
                writeln!(out, "brute: {bs:?}")?;
            }
            if let (SolveMethodArg::Both, Some(p), Some(bs)) = (method, &pipeline, brute) {
                let verdict = Agreement::compare(bs, p.solution_set);
                ok = verdict != Agreement::Mismatch;
                writeln!(out, "{}", verdict.label())?;
            }
            if *formula {
                let p = pipeline.as_ref().expect("computed when a formula is requested");
                let d = pipeline_formula(p, &m)?;
                eprintln!("formula: method={} terms={}", d.method.name(), d.term_count);
                write!(out, "formula: {}", render(&d, *format))?;
            }
            Verdict { output: out, ok }
        }
        Command::Laws { order, samples, seed: s, density, arity } => {
            let m = resolve_monoid(sel, *order)?;
            let cfg = LawConfig { samples: *samples, seed: seed(*s)?, density: *density, arity: *arity };
            let reports = check_laws(&m, &cfg)?;
            let mut out = String::new();
            for r in &reports {
                writeln!(out, "{r}")?;
            }
            Verdict { output: out, ok: reports.iter().all(|r| r.holds) }
        }
        Command::Random { arity, order, density, seed: s, functional } => {
            if !(0.0..=1.0).contains(density) {
                bail!("--density must be within [0, 1]");
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed(*s)?);
            let r = if *functional {
                Relation::random_function(&mut rng, *arity, *order)?
            } else {
                Relation::random(&mut rng, *arity, *order, *density)?
            };
            print_relation(&r).into()
        }
        Command::DerivedSystem { order, elements, table, operator_demo, samples, seed: s } => {
            let base = resolve_monoid(sel, *order)?;
            let sys = derived_operator_system(&base)?;
            let mut out = String::new();
            writeln!(out, "elements: {}", sys.monoid.order())?;
            writeln!(out, "faithfulness: {}", sys.monoid.faithfulness())?;
            if *elements {
                for (i, r) in sys.elements.iter().enumerate() {
                    let cells: Vec<String> = r.cells().iter().map(|c| c.to_string()).collect();
                    writeln!(out, "{i}: ({})", cells.join(","))?;
                }
            }
            if *table {
                out.push_str(&print_monoid(&sys.monoid));
            }
            let mut ok = true;
            if *operator_demo {
                let rep = operator_instantiation_demo(&base, &cyclic_function_set(), *samples, seed(*s)?)?;
                writeln!(out, "submonoid: {} elements", rep.submonoid.monoid.order())?;
                match &rep.isomorphism {
                    Some(phi) => writeln!(out, "isomorphism: {phi:?}")?,
                    None => writeln!(out, "isomorphism: none")?,
                }
                writeln!(
                    out,
                    "equations: {} checks: {} brute mismatches: {} pipeline mismatches: {}",
                    rep.equations, rep.checks, rep.brute_mismatches, rep.pipeline_mismatches
                )?;
                ok = rep.all_match();
                writeln!(out, "{}", if ok { "MATCH" } else { "MISMATCH" })?;
            }
            Verdict { output: out, ok }
        }
        Command::Impossibility { max_terms } => {
            let m = resolve_monoid(sel, 2)?;
            let rep = impossibility_search_order2(&m, &default_target(), *max_terms)?;
            let mut out = format!("{rep}\n");
            if let Some(w) = &rep.witness {
                writeln!(out, "witness: {}", print_expr(w))?;
            }
            out.into()
        }
    })
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|v| emit(&cli.out, &v.output).map(|()| v.ok));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
