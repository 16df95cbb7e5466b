use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fomc_core::bench::{run_bench, write_csv, BenchConfig, Family};
use fomc_core::gen::{
    random_chain, random_formula, random_structure, random_vocabulary, rng, FormulaParams, VocabParams,
};
use fomc_core::reach::{bfs_reach, ck_reach, diag_reach, savitch_reach, ReachReport, DEFAULT_UNIT_SCALE};
use fomc_core::reductions::{eliminate_functions, mc_to_stcon, stcon_to_mc, ConfigScope, StconInstance};
use fomc_core::textio::{
    parse_assignment, parse_digraph, parse_formula, parse_formula_infer, parse_structure, print_digraph, print_formula,
    print_structure, JsonReport, ReachJson,
};
use fomc_core::{classify, evaluate, Digraph, Engine, Formula, Structure, Vocabulary};
use serde_json::json;

/// `println!` that reports write failures instead of panicking.
macro_rules! say {
    ($($t:tt)*) => {
        writeln!(io::stdout(), $($t)*)?
    };
}

#[derive(Parser)]
#[command(
    name = "fomc",
    version,
    about = "Model checking for bounded-variable first-order logic"
)]
struct Cli {
    /// Print machine-readable JSON reports.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a structure satisfies a formula. Exit 0 on true, 1 on false.
    Eval {
        structure: PathBuf,
        /// A formula file, or the formula text itself.
        formula: String,
        #[arg(long, default_value = "auto")]
        engine: Engine,
        /// Values of the free variables, like `x=0,y=2`.
        #[arg(long, default_value = "")]
        assign: String,
    },
    /// Print the syntactic measures and quantifier-alternation levels as JSON.
    Classify {
        /// A formula file, or the formula text itself.
        formula: String,
    },
    /// Run one of the reductions and write its outputs.
    #[command(subcommand)]
    Reduce(Reduce),
    /// Bounded or unbounded s-t reachability. Exit 0 when reachable, 1 otherwise.
    Reach(ReachArgs),
    /// Random and structured instance generators.
    #[command(subcommand)]
    Gen(Gen),
    /// Run engines over an instance family and write CSV rows.
    Bench {
        #[arg(long, default_value = "chain")]
        family: Family,
        /// Comma-separated parameters, like `4,8,16`.
        #[arg(long, value_delimiter = ',', default_value = "4,8,16,32")]
        k: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "brute,dnc")]
        engines: Vec<Engine>,
        /// Graph vertices for chains, universe size for random instances.
        #[arg(long, default_value_t = 8)]
        universe: usize,
        /// Output file; standard output when absent.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Reduce {
    /// Reachability instance to a chain sentence: writes PREFIX.fos and PREFIX.fo.
    Stcon2mc {
        graph: PathBuf,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Existential sentence to its configuration graph: writes PREFIX.dg.
    Mc2stcon {
        structure: PathBuf,
        formula: String,
        #[arg(long, value_enum, default_value_t = Scope::Environment)]
        scope: Scope,
        #[arg(long)]
        out: PathBuf,
    },
    /// Replace function symbols by relations: writes PREFIX.fos and PREFIX.fo.
    Elimfun {
        structure: PathBuf,
        formula: String,
        /// Write the negation normal form instead of the raw translation.
        #[arg(long)]
        normalized: bool,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Scope {
    Environment,
    FreeVariables,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Bfs,
    Savitch,
    Ck,
    Diag,
}

#[derive(Args)]
struct ReachArgs {
    graph: PathBuf,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    t: usize,
    #[arg(long, value_enum, default_value_t = Algo::Bfs)]
    algo: Algo,
    /// Path-length bound. bfs is unbounded without it; savitch defaults to n-1.
    #[arg(long)]
    k: Option<usize>,
    /// Arity of the k-ary recursion.
    #[arg(long, default_value_t = 2)]
    kary: usize,
    #[arg(long, default_value_t = DEFAULT_UNIT_SCALE)]
    unit_scale: u64,
}

#[derive(Subcommand)]
enum Gen {
    /// Random structure over a random vocabulary.
    Structure {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[arg(long, default_value_t = 2)]
        relations: usize,
        #[arg(long, default_value_t = 2)]
        max_arity: usize,
        #[arg(long, default_value_t = 0)]
        constants: usize,
        #[arg(long, default_value_t = 0)]
        functions: usize,
        /// Permit a one-element universe.
        #[arg(long)]
        allow_singleton: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random sentence with an exact alternation level and size.
    Formula {
        /// Number of variables.
        #[arg(long)]
        s: usize,
        /// Alternation level.
        #[arg(long)]
        t: usize,
        #[arg(long)]
        norm: usize,
        /// Start with a universal block.
        #[arg(long)]
        pi: bool,
        /// Take relation, constant and function symbols from this structure.
        #[arg(long)]
        structure: Option<PathBuf>,
        #[arg(long, default_value_t = 0.0)]
        function_rate: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Chain sentence of parameter k with a random digraph: PREFIX.fos, PREFIX.fo, PREFIX.dg.
    Chain {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 8)]
        n: usize,
        /// Edge probability.
        #[arg(long, default_value_t = 0.2)]
        p: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        // A closed pipe downstream (`| head`) is not a failure.
        Err(e)
            if e.downcast_ref::<io::Error>()
                .is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) =>
        {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn verdict(answer: bool) -> ExitCode {
    if answer {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

/// Attaches the input name to a core error; parse errors already carry
/// `line:column`.
fn located(name: &str, e: fomc_core::Error) -> anyhow::Error {
    match e.span() {
        Some(_) => anyhow!("{name}:{e}"),
        None => anyhow!("{name}: {e}"),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_structure(path: &Path) -> Result<Structure> {
    parse_structure(&read(path)?).map_err(|e| located(&path.display().to_string(), e))
}

fn load_digraph(path: &Path) -> Result<Digraph> {
    parse_digraph(&read(path)?).map_err(|e| located(&path.display().to_string(), e))
}

/// Reads `arg` as a file when one exists, else as formula text.
fn formula_source(arg: &str) -> Result<(String, String)> {
    let path = Path::new(arg);
    if path.is_file() {
        Ok((arg.to_string(), read(path)?))
    } else {
        Ok(("<formula>".to_string(), arg.to_string()))
    }
}

fn load_formula(arg: &str, vocab: &Vocabulary) -> Result<Formula> {
    let (name, text) = formula_source(arg)?;
    parse_formula(&text, vocab).map_err(|e| located(&name, e))
}

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

/// Writes to `out` when given, else to standard output.
fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => write_file(p, text),
        None => Ok(io::stdout().write_all(text.as_bytes())?),
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Eval {
            structure,
            formula,
            engine,
            assign,
        } => {
            let a = load_structure(structure)?;
            let phi = load_formula(formula, a.vocabulary())?;
            let alpha = parse_assignment(assign).map_err(|e| located("--assign", e))?;
            let report = evaluate(&phi, &a, *engine, &alpha)?;
            if cli.json {
                let j = JsonReport::new(&report, &classify(&phi));
                say!("{}", serde_json::to_string_pretty(&j)?);
            } else {
                say!("{}", report.answer);
            }
            Ok(verdict(report.answer))
        }
        Command::Classify { formula } => {
            let (name, text) = formula_source(formula)?;
            let (phi, _) = parse_formula_infer(&text).map_err(|e| located(&name, e))?;
            say!("{}", serde_json::to_string_pretty(&classify(&phi))?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Reduce(r) => reduce(cli, r),
        Command::Reach(r) => reach(cli, r),
        Command::Gen(g) => generate(cli, g),
        Command::Bench {
            family,
            k,
            engines,
            universe,
            csv,
        } => {
            let cfg = BenchConfig {
                family: *family,
                ks: k.clone(),
                engines: engines.clone(),
                universe: *universe,
                seed: cli.seed,
            };
            let rows = run_bench(&cfg)?;
            let mut buf = Vec::new();
            write_csv(&mut buf, &rows)?;
            emit(csv.as_deref(), &String::from_utf8(buf)?)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn reduce(cli: &Cli, r: &Reduce) -> Result<ExitCode> {
    match r {
        Reduce::Stcon2mc { graph, s, t, k, out } => {
            let g = load_digraph(graph)?;
            let (a, phi) = stcon_to_mc(&StconInstance::new(g, *s, *t, *k)?)?;
            write_file(&with_ext(out, "fos"), &print_structure(&a))?;
            write_file(&with_ext(out, "fo"), &format!("{}\n", print_formula(&phi)))?;
        }
        Reduce::Mc2stcon {
            structure,
            formula,
            scope,
            out,
        } => {
            let a = load_structure(structure)?;
            let phi = load_formula(formula, a.vocabulary())?;
            let scope = match scope {
                Scope::Environment => ConfigScope::Environment,
                Scope::FreeVariables => ConfigScope::FreeVariables,
            };
            let cg = mc_to_stcon(&a, &phi, scope)?;
            let i = &cg.instance;
            write_file(&with_ext(out, "dg"), &print_digraph(&i.graph))?;
            if cli.json {
                let j = json!({
                    "vertices": i.graph.vertex_count(),
                    "edges": i.graph.edge_count(),
                    "s": i.s,
                    "t": i.t,
                    "k": i.k,
                });
                say!("{j}");
            } else {
                say!(
                    "vertices {} edges {} s {} t {} k {}",
                    i.graph.vertex_count(),
                    i.graph.edge_count(),
                    i.s,
                    i.t,
                    i.k
                );
            }
        }
        Reduce::Elimfun {
            structure,
            formula,
            normalized,
            out,
        } => {
            let a = load_structure(structure)?;
            let phi = load_formula(formula, a.vocabulary())?;
            let el = eliminate_functions(&a, &phi)?;
            let f = if *normalized { &el.normalized } else { &el.formula };
            write_file(&with_ext(out, "fos"), &print_structure(&el.extended.structure))?;
            write_file(&with_ext(out, "fo"), &format!("{}\n", print_formula(f)))?;
            if cli.json {
                say!("{}", serde_json::to_string_pretty(&el.normalized_classification)?);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn reach(cli: &Cli, r: &ReachArgs) -> Result<ExitCode> {
    let g = load_digraph(&r.graph)?;
    let start = Instant::now();
    let (name, report) = match r.algo {
        Algo::Bfs => {
            let answer = bfs_reach(&g, r.s, r.t, r.k)?;
            let report = ReachReport {
                answer,
                peak_depth: 0,
                accounted_units: 0,
                budget_used: None,
            };
            ("bfs", report)
        }
        Algo::Savitch => {
            let k = r.k.unwrap_or(g.vertex_count().saturating_sub(1));
            ("savitch", savitch_reach(&g, r.s, r.t, k)?)
        }
        Algo::Ck => {
            if r.k.is_some() {
                bail!("--k is not used by --algo ck; the recursion is unbounded");
            }
            ("ck", ck_reach(&g, r.s, r.t, r.kary)?)
        }
        Algo::Diag => ("diag", diag_reach(&g, r.s, r.t, r.unit_scale)?),
    };
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    if cli.json {
        say!(
            "{}",
            serde_json::to_string_pretty(&ReachJson::new(name, &report, wall_ms))?
        );
    } else {
        say!("{}", report.answer);
    }
    Ok(verdict(report.answer))
}

fn generate(cli: &Cli, g: &Gen) -> Result<ExitCode> {
    let mut r = rng(cli.seed);
    match g {
        Gen::Structure {
            n,
            density,
            relations,
            max_arity,
            constants,
            functions,
            allow_singleton,
            out,
        } => {
            if *n < 2 && !allow_singleton {
                bail!("universe size {n} is below 2; pass --allow-singleton to permit it");
            }
            let vp = VocabParams {
                relations: *relations,
                max_relation_arity: *max_arity,
                constants: *constants,
                functions: *functions,
                ..VocabParams::default()
            };
            let voc = random_vocabulary(&mut r, &vp)?;
            let a = random_structure(&mut r, &voc, *n, *density)?;
            emit(out.as_deref(), &print_structure(&a))?;
        }
        Gen::Formula {
            s,
            t,
            norm,
            pi,
            structure,
            function_rate,
            out,
        } => {
            let voc = match structure {
                Some(p) => load_structure(p)?.vocabulary().clone(),
                None => random_vocabulary(&mut r, &VocabParams::default())?,
            };
            let p = FormulaParams {
                pi: *pi,
                function_rate: *function_rate,
                ..FormulaParams::sentence(*s, *t, *norm)
            };
            let phi = random_formula(&mut r, &voc, &p)?;
            emit(out.as_deref(), &format!("{}\n", print_formula(&phi)))?;
        }
        Gen::Chain { k, n, p, out } => {
            let (inst, a, phi) = random_chain(&mut r, *n, *k, *p)?;
            match out {
                Some(prefix) => {
                    write_file(&with_ext(prefix, "fos"), &print_structure(&a))?;
                    write_file(&with_ext(prefix, "fo"), &format!("{}\n", print_formula(&phi)))?;
                    write_file(&with_ext(prefix, "dg"), &print_digraph(&inst.graph))?;
                }
                None => say!("{}", print_formula(&phi)),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
