use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use modlie::autos::{classify_restriction, demushkin_lift, CheckMode};
use modlie::cartan::{
    build_jacobson_witt, standard_generic_torus, standard_maximal_solvable, BorelConvention, DEFAULT_DIM_CAP,
};
use modlie::catalog::{build_with_cap, Built, Family, FamilyParams};
use modlie::io::AlgebraFile;
use modlie::restrict::{max_torus_search, SearchConfig, Torus, DEFAULT_PATIENCE, DEFAULT_RESTARTS, DEFAULT_SEED};
use modlie::suites::{run_suite, SuiteConfig};
use modlie::weights::{
    coverage_check, decompose, dimension_identity_check, equal_dims_check, verify_bracket_additivity,
    verify_weight_linearity, Module,
};
use modlie::wittemb::build_iota;
use modlie::{Error, FVector, LieAlgebra, Matrix, PrimeField};

#[derive(Parser)]
#[command(name = "modlie", version, about = "Exact computations with restricted Lie algebras over F_p")]
struct Cli {
    /// Characteristic of the ground field.
    #[arg(long, global = true, default_value_t = 5)]
    p: u32,
    /// Permit p = 2 and p = 3.
    #[arg(long, global = true)]
    allow_small_prime: bool,
    /// Seed for every randomized step.
    #[arg(long, global = true, env = "MODLIE_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Restarts for torus searches.
    #[arg(long, global = true, default_value_t = DEFAULT_RESTARTS)]
    restarts: usize,
    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct FamilyArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// Heights for w-m-n, comma separated.
    #[arg(long, value_delimiter = ',')]
    n_vec: Option<Vec<u32>>,
    /// Keep the center of gl_n when p divides n.
    #[arg(long)]
    allow_center: bool,
    /// Largest dimension that may be constructed.
    #[arg(long, default_value_t = DEFAULT_DIM_CAP)]
    dim_cap: usize,
}

impl FamilyArgs {
    fn params(&self) -> FamilyParams {
        FamilyParams {
            n: self.n,
            m: self.m,
            n_vec: self.n_vec.clone(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TorusChoice {
    Standard,
    Search,
}

#[derive(Subcommand)]
enum Command {
    /// Build a catalog algebra and write it as JSON.
    Construct {
        family: String,
        #[command(flatten)]
        params: FamilyArgs,
        /// Output file; without it the algebra is printed.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Check antisymmetry, Jacobi and restrictedness of an algebra file.
    Validate { path: PathBuf },
    /// Weight space decomposition with respect to a torus.
    Weights {
        /// Catalog family or path to an algebra file.
        #[arg(long)]
        algebra: String,
        #[command(flatten)]
        params: FamilyArgs,
        #[arg(long, value_enum, default_value = "standard")]
        torus: TorusChoice,
    },
    /// The embedding of W(m; n) into W(|n|; 1).
    Embed {
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        n_vec: Vec<u32>,
    },
    /// Lift a matrix of GL_n(F_p) to an automorphism of W(n;1).
    Lift {
        #[arg(long)]
        n: Option<usize>,
        /// Rows separated by ';', entries by ','.
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Run a named verification suite.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Randomized search for a torus of maximal dimension.
    TorusSearch {
        #[arg(long)]
        algebra: String,
        #[command(flatten)]
        params: FamilyArgs,
        #[arg(long, default_value_t = DEFAULT_PATIENCE)]
        patience: usize,
    },
}

enum Failure {
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<(Value, bool), Failure>;

fn field(cli: &Cli) -> Result<PrimeField, Error> {
    if cli.allow_small_prime {
        PrimeField::with_small_prime_override(cli.p)
    } else {
        PrimeField::new(cli.p)
    }
}

fn describe(a: &LieAlgebra, v: &FVector) -> String {
    let terms: Vec<String> = v.support().map(|(k, c)| format!("{c}*{}", a.labels()[k])).collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn build_family(cli: &Cli, name: &str, args: &FamilyArgs) -> Result<Built, Error> {
    let family = Family::parse(name, &args.params())?;
    build_with_cap(&family, field(cli)?, args.allow_center, args.dim_cap)
}

/// A catalog algebra, or an algebra loaded from a file when `name` names one.
fn load_algebra(cli: &Cli, name: &str, args: &FamilyArgs) -> Result<(LieAlgebra, Option<Built>), Error> {
    let path = PathBuf::from(name);
    if path.extension().is_some_and(|e| e == "json") {
        let file = AlgebraFile::load(&path)?;
        let a = file.to_algebra_unchecked(cli.allow_small_prime)?;
        let r = a.validate();
        if !r.is_valid() {
            return Err(Error::Format(format!("{} fails validation", path.display())));
        }
        return Ok((a, None));
    }
    let b = build_family(cli, name, args)?;
    Ok((b.algebra.clone(), Some(b)))
}

fn search_config(cli: &Cli, patience: usize) -> SearchConfig {
    SearchConfig {
        seed: cli.seed,
        restarts: cli.restarts,
        patience,
    }
}

fn torus_json(a: &LieAlgebra, t: &Torus) -> Value {
    json!({
        "dim": t.dim(),
        "basis": t.basis().iter().map(|v| describe(a, v)).collect::<Vec<_>>(),
    })
}

fn parse_matrix(field: PrimeField, s: &str) -> Result<Matrix, Error> {
    let rows: Vec<Vec<u32>> = s
        .split(';')
        .map(|r| {
            r.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<i64>()
                        .map(|v| field.from_i64(v))
                        .map_err(|_| Error::InvalidParameters(format!("bad matrix entry {x:?}")))
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidParameters("matrix is not square".into()));
    }
    Ok(Matrix::from_rows(field, &rows))
}

fn cmd_construct(cli: &Cli, family: &str, args: &FamilyArgs, out: &Option<PathBuf>) -> Outcome {
    let b = build_family(cli, family, args)?;
    let file = AlgebraFile::from_algebra(&b.algebra, b.meta());
    let grading = b.grading.as_ref().map(|g| g.range());
    log::info!("{} dim {} grading {:?}", family, b.algebra.dim(), grading);
    let summary = json!({
        "family": b.family.name(),
        "params": b.family.params_json(),
        "dim": b.algebra.dim(),
        "grading_range": grading,
        "restricted": b.algebra.is_restricted(),
    });
    match out {
        Some(path) => {
            file.save(path)?;
            let mut s = summary;
            s["path"] = json!(path.display().to_string());
            Ok((s, true))
        }
        None => Ok((serde_json::to_value(&file).expect("serializable"), true)),
    }
}

fn cmd_validate(cli: &Cli, path: &PathBuf) -> Outcome {
    let file = AlgebraFile::load(path)?;
    let a = file.to_algebra_unchecked(cli.allow_small_prime)?;
    let r = a.validate();
    Ok((
        json!({
            "path": path.display().to_string(),
            "p": a.field().p(),
            "dim": a.dim(),
            "restricted": a.is_restricted(),
            "valid": r.is_valid(),
            "report": r,
        }),
        r.is_valid(),
    ))
}

fn cmd_weights(cli: &Cli, algebra: &str, args: &FamilyArgs, choice: TorusChoice) -> Outcome {
    let (a, built) = load_algebra(cli, algebra, args)?;
    let t = match (choice, &built) {
        (TorusChoice::Standard, Some(b)) => b.standard_torus()?,
        (TorusChoice::Standard, None) => {
            return Err(Failure::Usage("an algebra file has no standard torus; use --torus search".into()))
        }
        (TorusChoice::Search, _) => max_torus_search(&a, search_config(cli, DEFAULT_PATIENCE))?.torus,
    };
    let wd = decompose(&a, &t, Module::Adjoint)?;
    let cov = coverage_check(&wd);
    let eq = equal_dims_check(&wd);
    let id = dimension_identity_check(&wd);
    let linear = verify_weight_linearity(&a, &wd);
    let additive = verify_bracket_additivity(&a, &wd);
    let partition = wd.table.values().sum::<usize>() + wd.zero_space.dim() == a.dim();
    Ok((
        json!({
            "algebra": algebra,
            "dim": a.dim(),
            "torus": torus_json(&a, &t),
            "table": wd.labelled_table(),
            "checks": {
                "coverage": {
                    "full": cov.full,
                    "present": cov.present,
                    "expected": cov.expected,
                    "missing": cov.missing.iter().map(|c| c.label()).collect::<Vec<_>>(),
                },
                "equal_dims": { "equal": eq.equal, "common": eq.common },
                "dimension_identity": id,
                "partition": partition,
                "weight_linearity": linear,
                "bracket_additivity": additive,
            },
        }),
        partition && linear && additive,
    ))
}

fn cmd_embed(cli: &Cli, m: Option<usize>, n_vec: &[u32]) -> Outcome {
    if let Some(m) = m {
        if m != n_vec.len() {
            return Err(Failure::Usage(format!("--m {m} disagrees with --n-vec of length {}", n_vec.len())));
        }
    }
    let e = build_iota(field(cli)?, n_vec)?;
    let d = e.check_d_expansion();
    let images: Vec<Value> = (0..e.source.algebra.dim())
        .map(|k| {
            let v = e.apply(&e.source.algebra.basis_vector(k));
            json!({ "source": e.source.algebra.labels()[k], "image": e.support_labels(&v) })
        })
        .collect();
    let env = e.envelope_in_target()?;
    let injective = e.is_injective();
    let brackets = e.first_bracket_failure();
    Ok((
        json!({
            "m": n_vec.len(),
            "n_vec": n_vec,
            "source_dim": e.source.algebra.dim(),
            "target_dim": e.target.algebra.dim(),
            "matrix": e.matrix.to_rows(),
            "images": images,
            "injective": injective,
            "first_bracket_failure": brackets,
            "d_expansion": d,
            "envelope_dim": env.dim(),
        }),
        injective && brackets.is_none() && d.all_match(),
    ))
}

fn cmd_lift(cli: &Cli, n: Option<usize>, matrix: &str) -> Outcome {
    let f = field(cli)?;
    let g = parse_matrix(f, matrix)?;
    if let Some(n) = n {
        if n != g.rows() {
            return Err(Failure::Usage(format!("--n {n} disagrees with a {0}x{0} matrix", g.rows())));
        }
    }
    if g.determinant() == 0 {
        return Err(Failure::Usage("matrix is not invertible".into()));
    }
    let w = build_jacobson_witt(f, g.rows())?;
    let t0 = standard_generic_torus(&w)?;
    let lift = demushkin_lift(&w, &g)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let check = lift.check(&w, CheckMode::Exhaustive, &mut rng);
    let restriction = lift.restriction_to_torus(&t0);
    let stabilizes_c = if w.n() >= 2 {
        Some(lift.stabilizes(&standard_maximal_solvable(&w, BorelConvention::Ascending)?))
    } else {
        None
    };
    let ok = check.passed() && restriction.is_ok();
    Ok((
        json!({
            "n": w.n(),
            "input": g.to_rows(),
            "automorphism": lift.matrix.to_rows(),
            "restriction_to_t0": restriction.as_ref().ok().map(|r| r.to_rows()),
            "convention": restriction.as_ref().ok().map(|r| classify_restriction(&g, r)),
            "checks": {
                "invertible": check.invertible,
                "bracket_preserving": check.bracket_preserving,
                "commutes_with_p_map": check.commutes_with_p_map,
                "normalizes_t0": restriction.is_ok(),
                "stabilizes_c": stabilizes_c,
            },
        }),
        ok,
    ))
}

fn cmd_verify(cli: &Cli, suite: &str, n: usize) -> Outcome {
    let cfg = SuiteConfig {
        p: cli.p,
        n,
        seed: cli.seed,
        restarts: cli.restarts,
        allow_small_prime: cli.allow_small_prime,
    };
    let report = run_suite(suite, &cfg, cli.jobs > 1)?;
    let passed = report.passed;
    Ok((serde_json::to_value(&report).expect("serializable"), passed))
}

fn cmd_torus_search(cli: &Cli, algebra: &str, args: &FamilyArgs, patience: usize) -> Outcome {
    let (a, _) = load_algebra(cli, algebra, args)?;
    let out = max_torus_search(&a, search_config(cli, patience))?;
    let tc = out.torus.check(&a)?;
    Ok((
        json!({
            "algebra": algebra,
            "dim": a.dim(),
            "seed": cli.seed,
            "torus": torus_json(&a, &out.torus),
            "restart": out.restart,
            "restart_dims": out.restart_dims,
            "self_centralizing": out.self_centralizing,
            "checks": tc,
        }),
        tc.passed(),
    ))
}

fn dispatch(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Construct { family, params, out } => cmd_construct(cli, family, params, out),
        Command::Validate { path } => cmd_validate(cli, path),
        Command::Weights { algebra, params, torus } => cmd_weights(cli, algebra, params, *torus),
        Command::Embed { m, n_vec } => cmd_embed(cli, *m, n_vec),
        Command::Lift { n, matrix } => cmd_lift(cli, *n, matrix),
        Command::Verify { suite, n } => cmd_verify(cli, suite, *n),
        Command::TorusSearch { algebra, params, patience } => cmd_torus_search(cli, algebra, params, *patience),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if cli.jobs == 0 {
        eprintln!("error: --jobs must be at least 1");
        return ExitCode::from(2);
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let outcome = pool.install(|| dispatch(&cli));
    match outcome {
        Ok((value, ok)) => {
            println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
