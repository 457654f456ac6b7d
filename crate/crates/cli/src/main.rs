use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::json;

use unimod::catalog::{Catalog, Witness};
use unimod::forms::{standard_form, FORMAT_VERSION};
use unimod::isometry::{orbit_invariance_check, random_automorphism};
use unimod::lattice::{classify, orthogonal_complement};
use unimod::lorentz::{
    build_frame, optimize_deformation, planar_isometry_check, sr_summand_identity, verify_lorentz_e8,
    verify_lorentz_leech, Mode, SweepOptions,
};
use unimod::reduction::{successive_minima, upper_bound_tripwire, SearchOptions};
use unimod::{Error, QForm, Rational, Scalar};

/// Exact tools for indefinite unimodular lattices.
#[derive(Parser, Debug)]
#[command(name = "unimod", version)]
struct Cli {
    /// Node budget per enumeration.
    #[arg(long, global = true, default_value_t = 10_000_000_000)]
    budget: u64,
    /// Worker threads for enumeration.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Also write the report as JSON to this file.
    #[arg(long, global = true, value_name = "OUT")]
    json: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Successive minima of a positive definite form.
    Minima {
        /// A form file, `catalog:NAME`, or `identity:N`.
        form: String,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Orthogonal complement of a primitive vector in I_{p,q}.
    Complement {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        /// Comma-separated integer coordinates.
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
        /// Write the induced Gram as a form file.
        #[arg(long, value_name = "FILE")]
        gram: Option<PathBuf>,
    },
    /// Complement, frame and deformation for a witness with q = −1.
    Pipeline {
        /// A witness file or `catalog:NAME`.
        witness: String,
        #[arg(long, value_enum, default_value_t = CliMode::Rational)]
        mode: CliMode,
        #[arg(long, default_value = "1/50")]
        epsilon: String,
    },
    /// Run a named verification suite.
    Verify {
        #[arg(value_enum)]
        target: Target,
        /// Also count the minimal vectors of the Leech complement.
        #[arg(long)]
        count_minimal: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CliMode {
    Rational,
    Quadext,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Target {
    Leech,
    E8,
    SrIdentity,
    Planar,
    Orbit,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_) | Error::Json(_) | Error::Io(_) | Error::InvalidParameter(_) => 2,
            Error::DimensionMismatch { .. } | Error::NotSquare | Error::NotSymmetric(..) | Error::EmptyForm => 2,
            Error::NotPositiveDefinite(_) | Error::NotIndexOne(_) => 3,
            Error::NotPrimitive { .. } | Error::ZeroVector => 4,
            Error::BudgetExceeded { .. } => 5,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = SearchOptions { budget: cli.budget, workers: cli.workers.max(1), ..SearchOptions::default() };
    let result = match &cli.command {
        Command::Minima { form, count } => minima(&cli, form, *count, &opts),
        Command::Complement { p, q, vector, gram } => complement(&cli, *p, *q, vector, gram.as_deref()),
        Command::Pipeline { witness, mode, epsilon } => pipeline(&cli, witness, *mode, epsilon, &opts),
        Command::Verify { target, count_minimal } => verify(&cli, *target, *count_minimal, &opts),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn write_json<T: Serialize>(cli: &Cli, report: &T) -> Outcome {
    if let Some(path) = &cli.json {
        let body = serde_json::to_string_pretty(report).map_err(Error::from)?;
        std::fs::write(path, body + "\n").map_err(|e| fail(2, format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn approx(x: &Scalar) -> String {
    match x.as_rational() {
        Some(r) if r.is_integer() => format!("{x}"),
        _ => format!("{x} ≈ {:.6}", x.to_f64()),
    }
}

fn load_form(spec: &str) -> Result<QForm, Failure> {
    if let Some(n) = spec.strip_prefix("identity:") {
        let n: usize = n.parse().map_err(|_| fail(2, format!("bad rank in {spec:?}")))?;
        return Ok(standard_form(n, 0)?);
    }
    if let Some(name) = spec.strip_prefix("catalog:") {
        return Ok(Catalog::open_default()?.form(name)?);
    }
    let bytes = std::fs::read(spec).map_err(|e| fail(2, format!("cannot read {spec}: {e}")))?;
    serde_json::from_slice(&bytes).map_err(|e| fail(2, format!("{spec}: {e}")))
}

fn load_witness(spec: &str) -> Result<Witness, Failure> {
    if let Some(name) = spec.strip_prefix("catalog:") {
        return Ok(Catalog::open_default()?.witness(name)?);
    }
    Witness::from_file(Path::new(spec)).map_err(|e| fail(2, format!("{spec}: {e}")))
}

fn parse_vector(s: &str) -> Result<Vec<BigInt>, Failure> {
    s.split(',')
        .map(|c| c.trim().parse().map_err(|_| fail(2, format!("bad coordinate {c:?}"))))
        .collect()
}

fn minima(cli: &Cli, spec: &str, count: usize, opts: &SearchOptions) -> Outcome {
    let form = load_form(spec)?;
    let report = successive_minima(&form, count, opts)?;
    let mut out = String::new();
    writeln!(out, "{:>3}  {:<28}  witness", "i", "λ_i²").unwrap();
    for (i, (m, w)) in report.minima_squared.iter().zip(&report.witnesses).enumerate() {
        let w: Vec<String> = w.iter().map(ToString::to_string).collect();
        writeln!(out, "{:>3}  {:<28}  ({})", i + 1, approx(m), w.join(", ")).unwrap();
    }
    writeln!(out, "radius {}, {} nodes", report.enumeration_radius, report.node_count).unwrap();
    print!("{out}");
    write_json(cli, &report)
}

fn complement(cli: &Cli, p: usize, q: usize, vector: &str, gram_out: Option<&Path>) -> Outcome {
    let ambient = standard_form(p, q)?;
    let v = parse_vector(vector)?;
    let c = orthogonal_complement(&ambient, &v)?;
    let class = classify(&c.induced_gram);
    println!("rank {}", c.rank());
    println!("parity {:?}", class.parity);
    println!("determinant {}", class.determinant);
    println!("unimodular {}", class.unimodular);
    println!("definiteness {:?}", class.definiteness);
    if let Some(path) = gram_out {
        let body = serde_json::to_string_pretty(&c.induced_gram).map_err(Error::from)?;
        std::fs::write(path, body + "\n").map_err(|e| fail(2, format!("cannot write {}: {e}", path.display())))?;
    }
    write_json(
        cli,
        &json!({ "format_version": FORMAT_VERSION, "class": class, "complement": c }),
    )
}

fn pipeline(cli: &Cli, spec: &str, mode: CliMode, epsilon: &str, opts: &SearchOptions) -> Outcome {
    let epsilon: Rational = epsilon.parse().map_err(|_| fail(2, format!("bad epsilon {epsilon:?}")))?;
    if epsilon.signum() <= 0 {
        return Err(fail(2, "epsilon must be positive"));
    }
    let witness = load_witness(spec)?;
    if witness.q != 1 {
        return Err(fail(2, "the pipeline needs a witness in I_{n,1}"));
    }
    let frame = build_frame(witness.p, &witness.vector, opts)?;
    let mode = match mode {
        CliMode::Rational => Mode::Rational,
        CliMode::Quadext => Mode::QuadExt,
    };
    let report = optimize_deformation(&frame, &epsilon, mode, &SweepOptions::default(), opts)?;
    let best = &report.best;
    println!("witness {} in I_{{{},1}}", witness.name, witness.p);
    println!("λ₂² before       {}", best.lambda2_before);
    println!("line ratio r     {}", approx(&best.ratio));
    println!("s²               {}", approx(&best.s_squared));
    println!("λ₁² deformed     {}", approx(&best.lambda1_squared));
    println!("proven bound     {}", approx(&best.guaranteed_bound_squared));
    println!("target (1−ε)√k   {}", approx(&report.target_squared));
    println!("certified        {}", best.certified);
    println!("target met       {}", report.target_met);
    write_json(cli, &report)?;
    if !best.certified {
        return Err(fail(5, "enumeration budget exhausted; the report is partial"));
    }
    upper_bound_tripwire(&best.deformed_gram, &best.lambda1_squared)?;
    if !report.target_met {
        return Err(fail(1, format!("λ₁² = {} is below the target {}", best.lambda1_squared, report.target_squared)));
    }
    Ok(())
}

#[derive(Serialize)]
struct Check {
    name: String,
    passed: bool,
    detail: String,
}

fn verify(cli: &Cli, target: Target, count_minimal: bool, opts: &SearchOptions) -> Outcome {
    let mut checks: Vec<Check> = Vec::new();
    let mut record = |name: String, r: Result<String, Error>| {
        let (passed, detail) = match r {
            Ok(d) => (true, d),
            Err(e) => (false, e.to_string()),
        };
        checks.push(Check { name, passed, detail });
    };
    match target {
        Target::Leech => {
            let catalog = Catalog::open_default()?;
            catalog.verify_all()?;
            let t = catalog.witness("leech")?;
            record(
                "leech complement".into(),
                verify_lorentz_leech(&t.vector, count_minimal, opts).map(|c| {
                    let kissing = c.minimal_vectors.map_or(String::new(), |k| format!(", {k} minimal vectors"));
                    format!("q(t) = {}, rank {}, det {}, minimum {}{kissing}", c.witness_norm, c.rank, c.class.determinant, c.minimum)
                }),
            );
        }
        Target::E8 => {
            let catalog = Catalog::open_default()?;
            catalog.verify_all()?;
            let v = catalog.witness("e8")?;
            let e8 = catalog.form("e8")?;
            record(
                "e8 complement".into(),
                verify_lorentz_e8(&v.vector, &e8, opts).map(|c| {
                    format!("minimum {}, {} roots, isometric to the catalog E8", c.minimum, c.minimal_vectors.unwrap_or(0))
                }),
            );
        }
        Target::SrIdentity => {
            let mut lattices: Vec<(String, QForm)> =
                (1..=6).map(|n| (format!("I_{n}"), standard_form(n, 0).expect("n ≥ 1"))).collect();
            lattices.push(("E8".into(), Catalog::open_default()?.form("e8")?));
            for (name, l) in lattices {
                record(
                    format!("SR({name} ⊕ I_{{0,1}}, e) ≅ {name} ⊕ I_{{1,0}}"),
                    sr_summand_identity(&l, opts).and_then(|o| match o.witness() {
                        Some(_) => Ok("witness found".into()),
                        None => Err(Error::Verification(format!("{o:?}"))),
                    }),
                );
            }
        }
        Target::Planar => {
            for s in ["1", "1/2", "2", "6/5", "10/7"] {
                let s: Rational = s.parse().expect("literal");
                record(
                    format!("planar isometry s = {s:?}"),
                    planar_isometry_check(&s).map(|c| format!("q_s(e₁ − e₂) = {}", c.qs_of_v)),
                );
            }
        }
        Target::Orbit => {
            let v = Catalog::open_default()?.witness("e8")?.vector;
            let expected = vec![Scalar::one(), Scalar::int(2)];
            for i in 0..20u64 {
                let seed = cli.seed.wrapping_add(i);
                let len = 1 + (seed % 10) as usize;
                let r = random_automorphism(8, seed, len)
                    .and_then(|m| orbit_invariance_check(8, &v, &m, 100, seed, opts));
                record(
                    format!("orbit seed {seed}, word length {len}"),
                    r.and_then(|rep| {
                        if rep.passed && rep.minima_before == expected {
                            Ok(format!("λ² = {:?} before and after", rep.minima_after))
                        } else {
                            Err(Error::Verification(format!("{rep:?}")))
                        }
                    }),
                );
            }
        }
    }
    let passed = checks.iter().all(|c| c.passed);
    for c in &checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    write_json(
        cli,
        &json!({ "format_version": FORMAT_VERSION, "target": format!("{target:?}"), "passed": passed, "checks": checks }),
    )?;
    if passed {
        Ok(())
    } else {
        let first = checks.iter().find(|c| !c.passed).expect("a failure");
        Err(fail(1, format!("{} failed: {}", first.name, first.detail)))
    }
}
