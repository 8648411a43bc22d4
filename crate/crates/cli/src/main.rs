use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use homprod::circuit::{factor_encoder, product_encoder, prune_encoder, verify_encoder};
use homprod::codes::{five_qubit_checks, steane_checks_gf4};
use homprod::complex::random_boundary;
use homprod::counting::{self, OracleQuery};
use homprod::css::code_from_complex;
use homprod::distance::{distance_upper_bound_with, distance_with, DEFAULT_BUDGET};
use homprod::experiments::{self, ExperimentReport, MonteCarloParams, ReproduceOptions};
use homprod::gf4::{self, Gf4Boundary};
use homprod::product::product;
use homprod::reduction::{default_max_steps, reduce_weights, Strategy};
use homprod::{io, BoundaryOperator, SearchOptions};

#[derive(Parser)]
#[command(name = "homprod", version, about = "Homological product codes over GF(2) and GF(4)")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, env = "HOMPROD_THREADS", default_value_t = 0)]
    threads: usize,
    /// RNG seed for randomized commands.
    #[arg(long, global = true, default_value_t = experiments::DEFAULT_SEED)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a random boundary operator with given M and H.
    GenRandom {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        h: usize,
        /// Resample until the operator is good at this M'.
        #[arg(long)]
        good: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Homological product of two boundary operators.
    Product {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// CSS code of a boundary operator.
    Code {
        op: PathBuf,
        /// Also compute d_Z and d_X.
        #[arg(long)]
        distance: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exact distance, or search for a logical of weight at most --bound.
    Distance {
        op: PathBuf,
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Exact counting formulas, optionally checked by brute force.
    Count {
        #[command(subcommand)]
        query: CountQuery,
        #[arg(long, global = true)]
        oracle: bool,
    },
    /// CNOT encoding circuit for a boundary operator (or the product of two).
    Encode {
        op: PathBuf,
        /// Second factor; encodes the product of `op` with it.
        #[arg(long)]
        with: Option<PathBuf>,
        #[arg(long)]
        verify: bool,
        /// Drop gates that do not change the encoded stabilizer group.
        #[arg(long)]
        prune: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Split checks until every check has weight at most --target.
    Reduce {
        code: PathBuf,
        #[arg(long)]
        target: usize,
        #[arg(long, value_enum, default_value_t = StrategyArg::Rr)]
        strategy: StrategyArg,
        #[arg(long)]
        max_steps: Option<usize>,
        /// Keep linearly dependent checks instead of dropping them first.
        #[arg(long)]
        keep_dependent: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// GF(4) counterparts of the GF(2) commands.
    Gf4 {
        #[command(subcommand)]
        command: Gf4Command,
    },
    /// Rerun a reference experiment and check its expected values.
    Reproduce {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(experiments::EXPERIMENTS))]
        name: String,
        #[arg(long, default_value_t = ReproduceOptions::default().sample_cap)]
        sample_cap: usize,
    },
    /// Sample random operators; repeat --m to check the trend across sizes.
    Montecarlo {
        #[arg(long, required = true)]
        m: Vec<usize>,
        #[arg(long)]
        h: usize,
        /// Defaults to M - 1; with several sizes the gap M - M' is kept.
        #[arg(long)]
        m_prime: Option<usize>,
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

#[derive(Subcommand)]
enum CountQuery {
    /// a × b matrices of rank r.
    Rank { a: usize, b: usize, r: usize },
    /// Extensions of a rank-r a × a block to cap_a × cap_a with rank cap_r.
    Ext {
        a: usize,
        r: usize,
        cap_a: usize,
        cap_r: usize,
    },
    /// Rank-r cycles of the product of canonical factors (L, H).
    Kernel { l: usize, h: usize, r: usize },
    /// Distinct M' × M' cycle blocks of rank R.
    Gamma {
        m: usize,
        h: usize,
        m_prime: usize,
        cap_r: usize,
    },
}

#[derive(Subcommand)]
enum Gf4Command {
    Distance {
        op: PathBuf,
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    Product {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Boundary operator of a reference code under a self-adjoint invertible U.
    Boundary {
        #[arg(long, value_enum)]
        code: RefCode,
        /// GF4 matrix file; identity when omitted.
        #[arg(long)]
        u: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// List every self-adjoint invertible m × m matrix.
    EnumSelfadjoint {
        #[arg(long)]
        m: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RefCode {
    Steane,
    FiveQubit,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Rr,
    RrPrefix,
    Rand,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_boundary(path: &Path) -> Result<BoundaryOperator> {
    io::parse_boundary(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_gf4_boundary(path: &Path) -> Result<Gf4Boundary> {
    io::parse_gf4_boundary(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Prints `value` as JSON, or `text` otherwise.
fn report(g: &Global, value: &Value, text: impl FnOnce() -> String) {
    if g.json {
        println!("{}", serde_json::to_string_pretty(value).expect("json"));
    } else {
        println!("{}", text());
    }
}

fn search_opts(g: &Global, budget: u128) -> SearchOptions {
    SearchOptions {
        budget,
        threads: g.threads,
    }
}

fn summary(r: &ExperimentReport) -> String {
    let mut s = format!(
        "{}: {} (seed {}, {} threads, {:.2}s)",
        r.name,
        if r.pass { "PASS" } else { "FAIL" },
        r.seed,
        r.threads,
        r.wall_time
    );
    for id in &r.failures {
        let statement = experiments::MANIFEST
            .iter()
            .find(|c| c.id == id)
            .map_or("", |c| c.statement);
        s.push_str(&format!("\n  failed {id}: {statement}"));
    }
    s
}

fn run(cli: Cli) -> Result<ExitCode> {
    let g = &cli.global;
    match cli.command {
        Command::GenRandom { m, h, good, output } => {
            let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
            let d = match good {
                Some(mp) => counting::random_good_boundary(m, h, mp, &mut rng, 10_000)?,
                None => random_boundary(m, h, &mut rng)?,
            };
            emit(output.as_deref(), &io::write_boundary(&d))?;
            if output.is_some() {
                report(g, &json!({ "m": m, "h": d.hom_dim(), "weight": d.weight() }), || {
                    format!("M={m} H={} weight={}", d.hom_dim(), d.weight())
                });
            }
        }
        Command::Product { a, b, output } => {
            let p = product(&load_boundary(&a)?, &load_boundary(&b)?);
            let op = p.operator();
            emit(output.as_deref(), &io::write_boundary(op))?;
            if output.is_some() {
                report(
                    g,
                    &json!({ "m": op.dim(), "h": op.hom_dim(), "weight": op.weight() }),
                    || format!("M={} H={} weight={}", op.dim(), op.hom_dim(), op.weight()),
                );
            }
        }
        Command::Code { op, distance, output } => {
            let d = load_boundary(&op)?;
            let mut code = code_from_complex(&d);
            if distance {
                let r = distance_with(&d, &search_opts(g, DEFAULT_BUDGET))?;
                code.d_z = Some(r.d_z);
                code.d_x = Some(r.d_x);
            }
            if let Some(p) = &output {
                emit(Some(p), &io::write_code(&code))?;
            }
            let params = code.params_json();
            report(g, &params, || {
                let d = |v: Option<usize>| v.map_or("?".to_string(), |x| x.to_string());
                format!(
                    "[[{},{},{}]] w={} (d_z={}, d_x={})",
                    code.n(),
                    code.k(),
                    d(code.d_z.zip(code.d_x).map(|(a, b)| a.min(b))),
                    code.stabilizer_weight(),
                    d(code.d_z),
                    d(code.d_x)
                )
            });
        }
        Command::Distance { op, bound, budget } => {
            let d = load_boundary(&op)?;
            let opts = search_opts(g, budget);
            match bound {
                Some(b) => {
                    let w = distance_upper_bound_with(&d, b, &opts)?;
                    let v = json!({ "bound": b, "found": w.is_some(), "witness": w.as_ref().map(|w| w.to_hex()) });
                    report(g, &v, || match &w {
                        Some(w) => format!("d_z <= {} (witness {})", w.weight(), w.to_hex()),
                        None => format!("d_z > {b}"),
                    });
                }
                None => {
                    let r = distance_with(&d, &opts)?;
                    report(g, &r.to_json(), || {
                        format!(
                            "d={} (d_z={}, d_x={}) in {:.3}s",
                            r.distance(),
                            r.d_z,
                            r.d_x,
                            r.wall_time.as_secs_f64()
                        )
                    });
                }
            }
        }
        Command::Count { query, oracle } => {
            let (label, exact, check) = count(&query, oracle, g.seed)?;
            let v = json!({
                "query": label,
                "value": exact.to_string(),
                "oracle": check.as_ref().map(ToString::to_string),
                "agree": check.as_ref().map(|c| *c == exact),
            });
            report(g, &v, || match &check {
                Some(c) => format!(
                    "{label} = {exact} (brute force {c}{})",
                    if *c == exact { "" } else { ", MISMATCH" }
                ),
                None => format!("{label} = {exact}"),
            });
            if check.is_some_and(|c| c != exact) {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Encode {
            op,
            with,
            verify,
            prune,
            output,
        } => {
            let d1 = load_boundary(&op)?;
            let (target, mut circuit) = match &with {
                Some(b) => {
                    let p = product(&d1, &load_boundary(b)?);
                    let c = product_encoder(&p);
                    (p.operator().clone(), c)
                }
                None => {
                    let c = factor_encoder(&d1);
                    (d1, c)
                }
            };
            if prune {
                circuit = prune_encoder(&circuit, &target)?;
            }
            let verified = if verify {
                Some(verify_encoder(&circuit, &target)?)
            } else {
                None
            };
            emit(output.as_deref(), &io::write_circuit(&circuit))?;
            if output.is_some() || verify {
                let v = json!({ "qubits": circuit.n_qubits, "gates": circuit.gate_count(), "verified": verified });
                report(g, &v, || {
                    let mut s = format!("{} qubits, {} CNOTs", circuit.n_qubits, circuit.gate_count());
                    if let Some(ok) = verified {
                        s.push_str(if ok { ", verified" } else { ", VERIFICATION FAILED" });
                    }
                    s
                });
            }
            if verified == Some(false) {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Reduce {
            code,
            target,
            strategy,
            max_steps,
            keep_dependent,
            output,
            trace,
        } => {
            let mut c = io::parse_code(&read(&code)?).with_context(|| format!("parsing {}", code.display()))?;
            if !keep_dependent {
                c = c.independent_checks();
            }
            let strategy = match strategy {
                StrategyArg::Rr => Strategy::RoundRobin,
                StrategyArg::RrPrefix => Strategy::RoundRobinPrefix,
                StrategyArg::Rand => Strategy::Random(g.seed),
            };
            let steps = max_steps.unwrap_or_else(|| default_max_steps(&c));
            let (reduced, t) = reduce_weights(&c, target, strategy, steps)?;
            if let Some(p) = &output {
                emit(Some(p), &io::write_code(&reduced))?;
            }
            if let Some(p) = &trace {
                emit(Some(p), &serde_json::to_string_pretty(&t)?)?;
            }
            let v = json!({
                "n": reduced.n(),
                "k": reduced.k(),
                "max_check_weight": reduced.max_check_weight(),
                "max_qubit_degree": reduced.max_qubit_degree(),
                "steps": t.steps.len(),
                "reached": t.reached,
            });
            report(g, &v, || {
                format!(
                    "n {} -> {}, check weight {} -> {} in {} splits{}",
                    c.n(),
                    reduced.n(),
                    c.max_check_weight(),
                    reduced.max_check_weight(),
                    t.steps.len(),
                    if t.reached { "" } else { " (target not reached)" }
                )
            });
            if !t.reached {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Gf4 { command } => return gf4_command(g, command),
        Command::Reproduce { name, sample_cap } => {
            let opts = ReproduceOptions {
                seed: g.seed,
                threads: g.threads,
                sample_cap,
            };
            let r = experiments::reproduce(&name, &opts)?;
            return Ok(finish_report(g, &r));
        }
        Command::Montecarlo {
            m,
            h,
            m_prime,
            c,
            samples,
        } => {
            let template = MonteCarloParams {
                m: m[0],
                h,
                m_prime: m_prime.unwrap_or(m[0].saturating_sub(1)),
                c,
                samples,
                seed: g.seed,
            };
            let r = if m.len() == 1 {
                experiments::montecarlo(&template, g.threads)?
            } else {
                experiments::montecarlo_trend(&m, &template, g.threads)?
            };
            return Ok(finish_report(g, &r));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn finish_report(g: &Global, r: &ExperimentReport) -> ExitCode {
    report(g, &serde_json::to_value(r).expect("report serializes"), || summary(r));
    if r.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

type Count = (String, num_bigint::BigUint, Option<num_bigint::BigUint>);

fn count(query: &CountQuery, oracle: bool, seed: u64) -> Result<Count> {
    let pick = |dist: Vec<num_bigint::BigUint>, r: usize| dist.get(r).cloned().unwrap_or_default();
    Ok(match *query {
        CountQuery::Rank { a, b, r } => (
            format!("rank({a}x{b}, r={r})"),
            counting::count_rank_matrices(a, b, r),
            oracle
                .then(|| counting::brute_count(&OracleQuery::RankMatrices { a, b }))
                .transpose()?
                .map(|d| pick(d, r)),
        ),
        CountQuery::Ext { a, r, cap_a, cap_r } => (
            format!("ext(a={a}, r={r}, A={cap_a}, R={cap_r})"),
            counting::count_extensions(a, r, cap_a, cap_r)?,
            if oracle {
                if r > a {
                    bail!("r={r} exceeds a={a}");
                }
                let x = homprod::BitMatrix::from_fn(a, a, |i, j| i == j && i < r);
                Some(pick(counting::brute_extensions(&x, cap_a)?, cap_r))
            } else {
                None
            },
        ),
        CountQuery::Kernel { l, h, r } => (
            format!("kernel(L={l}, H={h}, r={r})"),
            counting::count_kernel_by_rank(l, h, r),
            oracle
                .then(|| counting::brute_count(&OracleQuery::KernelCensus { l, h }))
                .transpose()?
                .map(|d| pick(d, r)),
        ),
        CountQuery::Gamma { m, h, m_prime, cap_r } => (
            format!("gamma(M={m}, H={h}, M'={m_prime}, R={cap_r})"),
            counting::count_reduced_cycles(m, h, m_prime, cap_r)?,
            if oracle {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let d1 = counting::random_good_boundary(m, h, m_prime, &mut rng, 10_000)?;
                let d2 = counting::random_good_boundary(m, h, m_prime, &mut rng, 10_000)?;
                Some(pick(counting::brute_reduced_census(&d1, &d2, m_prime)?, cap_r))
            } else {
                None
            },
        ),
    })
}

fn gf4_command(g: &Global, command: Gf4Command) -> Result<ExitCode> {
    match command {
        Gf4Command::Distance { op, bound, budget } => {
            let d = load_gf4_boundary(&op)?;
            let opts = search_opts(g, budget);
            match bound {
                Some(b) => {
                    let r = gf4::gf4_distance_upper_bound(&d, b, &opts)?;
                    let v = json!({
                        "bound": b,
                        "found": r.witness.is_some(),
                        "witness": r.witness.as_ref().map(ToString::to_string),
                        "method": r.method,
                        "steps": r.steps.to_string(),
                    });
                    report(g, &v, || match &r.witness {
                        Some(w) => format!("d <= {} (witness {w})", w.weight()),
                        None => format!("d > {b}"),
                    });
                }
                None => {
                    let r = gf4::gf4_distance_with(&d, &opts)?;
                    report(g, &r.to_json(), || {
                        format!("d={} (witness {}) in {:.3}s", r.d, r.witness, r.wall_time.as_secs_f64())
                    });
                }
            }
        }
        Gf4Command::Product { a, b, output } => {
            let p = gf4::gf4_product(&load_gf4_boundary(&a)?, &load_gf4_boundary(&b)?);
            emit(output.as_deref(), &io::write_gf4_boundary(&p))?;
            if output.is_some() {
                report(
                    g,
                    &json!({ "m": p.dim(), "h": p.hom_dim(), "weight": p.weight() }),
                    || format!("M={} H={} weight={}", p.dim(), p.hom_dim(), p.weight()),
                );
            }
        }
        Gf4Command::Boundary { code, u, output } => {
            let (n, checks) = match code {
                RefCode::Steane => (7, steane_checks_gf4()),
                RefCode::FiveQubit => (5, five_qubit_checks()),
            };
            let u = match &u {
                Some(p) => io::parse_gf4_matrix(&read(p)?).with_context(|| format!("parsing {}", p.display()))?,
                None => gf4::Gf4Matrix::identity(checks.len()),
            };
            let d = gf4::gf4_boundary_from_checks(n, &checks, &u)?;
            emit(output.as_deref(), &io::write_gf4_boundary(&d))?;
        }
        Gf4Command::EnumSelfadjoint { m } => {
            let all = gf4::enumerate_selfadjoint_invertible(m)?;
            if g.json {
                let v: Vec<Value> = all
                    .iter()
                    .map(|u| json!((0..u.rows()).map(|r| u.row(r).to_string()).collect::<Vec<_>>()))
                    .collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({ "m": m, "count": all.len(), "matrices": v }))?
                );
            } else {
                for u in &all {
                    println!("{}", io::write_gf4_matrix(u));
                }
                eprintln!("{} matrices", all.len());
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
