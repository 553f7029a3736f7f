use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use grq_core::arquiver::{
    block_census, explore_component, polynomial_part, schur_block_quiver, tau_shift, template_match, ArQuiver, Bounds,
    Identifier, QuiverError,
};
use grq_core::checks;
use grq_core::constructions::{split_degree, ConstructionError, Family, FamilyLabel};
use grq_core::gf::PrimeField;
use grq_core::grmod::{self, contravariant_dual, weyl_twist, AlgebraKind, GradedModule, ModuleError};
use grq_core::homological::{nakayama_shift, omega, tau, HomologicalError};
use grq_core::polynomial::{is_polynomial, quasi_hereditary_check, t_poly, u_poly};

#[derive(Parser)]
#[command(
    name = "grq",
    version,
    about = "Graded modules over restricted sl2 and truncated polynomial rings"
)]
struct Cli {
    /// characteristic, an odd prime
    #[arg(long, global = true, default_value_t = 3)]
    p: u32,
    /// seed for randomized searches (results are certified either way)
    #[arg(long, global = true, env = "GRQ_SEED", default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a module from a family label such as "W(6)" or "Vo(3)+(1,1)", or load a JSON file
    Module {
        spec: String,
        #[arg(long, value_enum, default_value_t = ModuleEmit::Summary)]
        emit: ModuleEmit,
    },
    /// Apply a functor and identify the result
    Functor {
        #[arg(value_enum)]
        op: FunctorOp,
        /// family label or JSON file
        input: String,
        #[arg(long, value_enum, default_value_t = ModuleEmit::Json)]
        emit: ModuleEmit,
    },
    /// Explore a bounded patch of the AR component of a module
    Ar {
        spec: String,
        #[arg(long, default_value_t = 2)]
        max_tau: i64,
        #[arg(long, default_value_t = 16)]
        max_dim: usize,
        #[arg(long, default_value_t = 6)]
        radius: usize,
        #[arg(long, value_enum, default_value_t = QuiverEmit::Summary)]
        emit: QuiverEmit,
    },
    /// AR quiver of a block of polynomial modules of degree d
    Schur {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        seed_label: Option<String>,
        #[arg(long, value_enum, default_value_t = QuiverEmit::Summary)]
        emit: QuiverEmit,
        /// delete projective-injective vertices and match against ZA_n / tau^n
        #[arg(long)]
        drop_projective_injective: bool,
    },
    /// Standard-module checks and the Nakayama shift for the Borel side
    Borel {
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long)]
        d: i64,
    },
    /// Run acceptance checks
    Check {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModuleEmit {
    Json,
    Summary,
}

#[derive(Clone, Copy, ValueEnum)]
enum QuiverEmit {
    Summary,
    Dot,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum FunctorOp {
    T,
    U,
    Dual,
    W0,
    Omega,
    Tau,
    Socle,
    Top,
}

enum CliError {
    Usage(String),
    Invariant(String),
    ChecksFailed,
}

impl From<ModuleError> for CliError {
    fn from(e: ModuleError) -> Self {
        match e {
            ModuleError::Decomposition(_) => CliError::Invariant(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<ConstructionError> for CliError {
    fn from(e: ConstructionError) -> Self {
        match e {
            ConstructionError::Domain(m) => CliError::Usage(m),
            ConstructionError::Module(m) => m.into(),
        }
    }
}

impl From<HomologicalError> for CliError {
    fn from(e: HomologicalError) -> Self {
        match e {
            HomologicalError::Module(m) => m.into(),
            HomologicalError::Construction(c) => c.into(),
            HomologicalError::Precondition(_) => CliError::Usage(e.to_string()),
            _ => CliError::Invariant(e.to_string()),
        }
    }
}

impl From<QuiverError> for CliError {
    fn from(e: QuiverError) -> Self {
        match e {
            QuiverError::Homological(h) => h.into(),
            QuiverError::Construction(c) => c.into(),
            QuiverError::Module(m) => m.into(),
            QuiverError::Precondition(_) | QuiverError::Patch(_) => CliError::Usage(e.to_string()),
        }
    }
}

type Res<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::ChecksFailed) => ExitCode::from(1),
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Invariant(m)) => {
            eprintln!("internal invariant violated: {m}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli) -> Res<()> {
    PrimeField::new(cli.p).map_err(|e| CliError::Usage(e.to_string()))?;
    let header = format!("seed={} p={}", cli.seed, cli.p);
    match &cli.cmd {
        Cmd::Module { spec, emit } => {
            let (label, m) = load(cli.p, spec)?;
            emit_module(&header, label, &m, *emit, cli.seed);
            Ok(())
        }
        Cmd::Functor { op, input, emit } => {
            let (_, m) = load(cli.p, input)?;
            let out = apply(*op, &m)?;
            let label = Identifier::new(cli.p, cli.seed).identify(&out);
            emit_module(&header, label, &out, *emit, cli.seed);
            if matches!(emit, ModuleEmit::Json) {
                match label {
                    Some(l) => println!("identified: {l}"),
                    None => println!("identified: none"),
                }
            }
            Ok(())
        }
        Cmd::Ar {
            spec,
            max_tau,
            max_dim,
            radius,
            emit,
        } => {
            let (_, m) = load(cli.p, spec)?;
            let bounds = Bounds {
                max_tau: *max_tau,
                max_dim: *max_dim,
                radius: *radius,
            };
            let q = explore_component(&m, bounds, cli.seed)?;
            match emit {
                QuiverEmit::Dot => print!("{}", q.to_dot(&header)),
                QuiverEmit::Json => println!("{}", quiver_json(&header, &q, None)),
                QuiverEmit::Summary => {
                    println!("# {header}");
                    print_vertices(&q);
                    match tau_shift(&q) {
                        Some(d) => println!("tau: shift by {d}"),
                        None => println!("tau: not a uniform shift"),
                    }
                    let part = polynomial_part(&q);
                    println!(
                        "polynomial part: {} vertices, connected: {}, shape: {}",
                        part.vertices.len(),
                        yes(part.connected),
                        serde_json::to_string(&part.shape).unwrap()
                    );
                    let mesh = q.mesh_violations();
                    println!("mesh violations: {}", mesh.len());
                }
            }
            Ok(())
        }
        Cmd::Schur {
            d,
            seed_label,
            emit,
            drop_projective_injective,
        } => schur(
            cli,
            &header,
            *d,
            seed_label.as_deref(),
            *emit,
            *drop_projective_injective,
        ),
        Cmd::Borel { r, d } => {
            if *r == 0 {
                return Err(CliError::Usage("r must be at least 1".into()));
            }
            let report = quasi_hereditary_check(cli.p, *r, *d)?;
            let alg = AlgebraKind::borel(cli.p, *r);
            let out = json!({
                "meta": { "seed": cli.seed, "p": cli.p },
                "nakayama_shift": nakayama_shift(alg),
                "quasi_hereditary": report,
            });
            println!("{out}");
            Ok(())
        }
        Cmd::Check { suite } => {
            let ids = checks::suite(suite)
                .ok_or_else(|| CliError::Usage(format!("unknown suite {suite}; use core, schur, borel or all")))?;
            let results = checks::run_many(&ids, cli.p, cli.seed);
            let passed = results.iter().all(|r| r.passed);
            let out = json!({
                "meta": { "seed": cli.seed, "p": cli.p, "suite": suite },
                "results": results,
                "passed": passed,
            });
            println!("{out}");
            if passed {
                Ok(())
            } else {
                Err(CliError::ChecksFailed)
            }
        }
    }
}

/// A family label, or a path to module JSON.
fn load(p: u32, spec: &str) -> Res<(Option<FamilyLabel>, GradedModule)> {
    if Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec).map_err(|e| CliError::Usage(format!("{spec}: {e}")))?;
        let m = GradedModule::from_json(text.trim_end())?;
        if m.p() != p {
            return Err(CliError::Usage(format!("{spec} is over p={}, but --p is {p}", m.p())));
        }
        return Ok((None, m));
    }
    let label: FamilyLabel = spec.parse().map_err(|e: grq_core::constructions::LabelError| {
        CliError::Usage(format!("{e}\n  {spec}\n  {}^", " ".repeat(e.pos)))
    })?;
    let m = label.build(p)?;
    Ok((Some(label), m))
}

fn apply(op: FunctorOp, m: &GradedModule) -> Res<GradedModule> {
    Ok(match op {
        FunctorOp::T => t_poly(m).0,
        FunctorOp::U => u_poly(m).0,
        FunctorOp::Dual => contravariant_dual(m)?,
        FunctorOp::W0 => weyl_twist(m)?,
        FunctorOp::Omega => omega(m)?,
        FunctorOp::Tau => tau(m)?,
        FunctorOp::Socle => grmod::socle(m).0,
        FunctorOp::Top => grmod::top(m).0,
    })
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn emit_module(header: &str, label: Option<FamilyLabel>, m: &GradedModule, emit: ModuleEmit, seed: u64) {
    match emit {
        ModuleEmit::Json => {
            eprintln!("# {header}");
            println!("{}", m.to_json());
        }
        ModuleEmit::Summary => {
            println!("# {header}");
            let label = label.or_else(|| Identifier::new(m.p(), seed).identify(m));
            if let Some(l) = label {
                println!("label: {l}");
            }
            println!("algebra: {}", m.algebra());
            println!("dim: {}", m.dim());
            let support: Vec<String> = grmod::support(m).iter().map(|w| w.to_string()).collect();
            println!("support: {}", support.join(" "));
            match m.degree() {
                Some(d) => println!("degree: {d}"),
                None => println!("degree: inhomogeneous"),
            }
            let v = is_polynomial(m);
            println!("polynomial: {}", yes(v.is_polynomial));
            if !v.is_polynomial {
                let off: Vec<String> = v.offending_weights.iter().map(|w| w.to_string()).collect();
                println!("offending weights: {}", off.join(" "));
            }
        }
    }
}

fn print_vertices(q: &ArQuiver) {
    println!("vertices: {}", q.len());
    for (i, v) in q.vertices.iter().enumerate() {
        let mut flags = Vec::new();
        if v.projective {
            flags.push("projective");
        }
        if v.injective {
            flags.push("injective");
        }
        if v.simple {
            flags.push("simple");
        }
        if v.polynomial {
            flags.push("polynomial");
        }
        let ql = q.ql.get(&i).map(|l| format!(" ql={l}")).unwrap_or_default();
        let tau = q
            .tau
            .get(&i)
            .map(|&t| format!(" tau={}", q.label(t)))
            .unwrap_or_default();
        println!("  {} dim={}{ql}{tau} [{}]", v.label, v.module.dim(), flags.join(","));
    }
    println!("arrows: {}", q.arrow_count());
    for (&(x, y), &k) in &q.arrows {
        let mult = if k > 1 { format!(" x{k}") } else { String::new() };
        println!("  {} -> {}{mult}", q.label(x), q.label(y));
    }
}

fn quiver_json(header: &str, q: &ArQuiver, template: Option<&str>) -> serde_json::Value {
    let mut v = json!({ "meta": header, "quiver": q.to_json() });
    if let Some(t) = template {
        v["template"] = json!(t);
    }
    v
}

fn default_seed_label(p: u32, d: i64) -> Option<FamilyLabel> {
    let pi = p as i64;
    if d < 0 {
        None
    } else if d < pi {
        Some(FamilyLabel::new(Family::L, d, Default::default()))
    } else if d % pi != pi - 1 {
        Some(FamilyLabel::new(Family::V, d, Default::default()))
    } else {
        None
    }
}

fn schur(cli: &Cli, header: &str, d: i64, seed_label: Option<&str>, emit: QuiverEmit, drop: bool) -> Res<()> {
    let p = cli.p;
    let label = match seed_label {
        Some(s) => s.parse::<FamilyLabel>().map_err(|e| CliError::Usage(e.to_string()))?,
        None => default_seed_label(p, d)
            .ok_or_else(|| CliError::Usage(format!("no default block seed in degree {d}; pass --seed-label")))?,
    };
    let block = schur_block_quiver(p, d, &label, cli.seed)?;
    let pi_count = block.projective_injective().len();
    let (q, verdict) = if drop {
        let stable = block.stable_part();
        let (s, _) = split_degree(p, d);
        let n = (2 * s + 1) as usize;
        let hit = template_match(&stable, n, n).is_some();
        let v = format!("template ℤ[A_{n}]/τ^{n}: {}", if hit { "MATCH" } else { "NO MATCH" });
        (stable, Some(v))
    } else {
        (block.quiver.clone(), None)
    };
    let semisimple = block.quiver.arrows.is_empty();
    match emit {
        QuiverEmit::Dot => {
            let mut h = header.to_string();
            if let Some(v) = &verdict {
                h.push('\n');
                h.push_str(v);
            }
            print!("{}", q.to_dot(&h));
        }
        QuiverEmit::Json => println!("{}", quiver_json(header, &q, verdict.as_deref())),
        QuiverEmit::Summary => {
            println!("# {header}");
            println!("block of {label} in degree {d}");
            if semisimple {
                let census = block_census(p, d)?;
                println!(
                    "semisimple block: {} simple vertices, no arrows ({} blocks in degree {d}, {} non-semisimple)",
                    block.quiver.len(),
                    census.blocks,
                    census.non_semisimple
                );
            }
            print_vertices(&q);
            println!("projective-injective vertices: {pi_count}");
            if drop {
                println!("stable vertices: {}", q.len());
            }
            let mesh = block.quiver.mesh_violations();
            println!("mesh violations: {}", mesh.len());
            if let Some(v) = verdict {
                println!("{v}");
            }
        }
    }
    Ok(())
}
