//! Command line front end: parses inputs, dispatches to the library and
//! emits machine-readable reports.
//!
//! Every run writes a single JSON document (or a TSV table for the flat
//! listings) to stdout. Runs are reproducible: identical arguments and seed
//! give byte-identical output. Exact rationals are always emitted as `p/q`
//! strings, never as floating point. Exit status: 0 on success, 1 when a
//! verification fails (a relation that should vanish does not, or a
//! certificate chain stays incomplete), 2 on usage errors.

mod io;
mod threads;

use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use exteria_core::comb::binomial;
use exteria_core::exterior::{compound, ExteriorPoint};
use exteria_core::invariants::{
    classify, f_v_eval, normal_form, same_fiber_high_rank, same_fiber_rank_t, small_rank,
    ClassifyOutcome, SmallRankStrategy,
};
use exteria_core::linalg::{self, random_matrix};
use exteria_core::localize::{verify_localize_with, LocalizeBounds, StepCertificate};
use exteria_core::relations::{
    self, degree3_catalog, genplu2_relation, is_zero, plucker_relation, pushforward_relation,
    twelve_term_relation, RelationExpr, ZeroMode, ZeroVerdict,
};
use exteria_core::scalar::DEFAULT_MODULUS;
use exteria_core::shapes::{self, admissible_pairs, orbit_rank, orbit_to_prime, OrbitClass, Shape};
use exteria_core::tangent::{relation_ideal_slice, sing_counting_check, tangent_dim_at};
use exteria_core::{Combination, DenseMatrix};

const SCHEMA: &str = "exteria/1";

#[derive(Parser)]
#[command(
    name = "exteria",
    version,
    about = "Exact computations with exterior powers of linear maps"
)]
struct Cli {
    /// Output format; TSV is available for the flat tables only.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Worker threads for the independent searches (env: EXTERIA_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Tsv,
}

#[derive(Args)]
struct Ambient {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    t: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Compound matrix of a matrix file.
    Compound {
        #[arg(long)]
        input: String,
        #[arg(long)]
        t: usize,
        /// Also write the bare point JSON to this path.
        #[arg(long)]
        output: Option<String>,
    },
    /// Small rank of a point.
    SmallRank {
        #[command(flatten)]
        ambient: Ambient,
        #[arg(long)]
        point: String,
        #[arg(long, value_enum, default_value_t = StrategyArg::Randomized)]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Invariant pair and orbit classification of a point.
    Classify {
        #[command(flatten)]
        ambient: Ambient,
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Diagonal orbit normal form.
    NormalForm {
        #[command(flatten)]
        ambient: Ambient,
        #[arg(long)]
        u: usize,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        output: Option<String>,
    },
    /// Values of the test functions f_v at a point.
    Testfn {
        #[command(flatten)]
        ambient: Ambient,
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Shape statistics and support membership.
    Shapes {
        /// Comma-separated non-increasing parts, e.g. 3,1.
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        t: usize,
        /// Row bound; enables the prime-membership table.
        #[arg(long)]
        m: Option<usize>,
    },
    /// The stable prime-ideal catalog with faces and orbit correspondence.
    Primes {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        t: usize,
        /// Column bound for orbit dimensions (defaults to m).
        #[arg(long)]
        n: Option<usize>,
    },
    /// Relation families: generate or verify.
    Relations {
        #[command(subcommand)]
        action: RelationsAction,
    },
    /// Localization certificates for every t-minor.
    Localize {
        #[command(flatten)]
        ambient: Ambient,
        #[arg(long, default_value_t = 3)]
        k_max: usize,
        /// Representation-degree bound (defaults to t + 2).
        #[arg(long)]
        deg_bound: Option<usize>,
    },
    /// Tangent-space bound at a point from a degree-limited relation slice.
    Tangent {
        #[command(flatten)]
        ambient: Ambient,
        #[arg(long, default_value_t = 3)]
        deg: usize,
        /// zero | rank1 | smooth | normal:u=..,k=.. | file:PATH | compound:PATH
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Fiber comparison of two maps under the compound.
    Fibers {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Counting check for the singular-locus argument.
    SingCount {
        #[command(flatten)]
        ambient: Ambient,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Randomized,
    Certificate,
}

#[derive(Subcommand)]
enum RelationsAction {
    /// Emit a relation family as JSON.
    Gen {
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Verify that a family expands (or evaluates) to zero.
    Verify {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_MODULUS)]
        modulus: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Probabilistic,
}

#[derive(Args)]
struct FamilyArgs {
    /// plucker | twelve-term | twelve-term-appended | genplu2 | degree3 | pushforward
    #[arg(long)]
    family: String,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    /// Degree-3 catalog member: 6a | 6b | 6c | 6d | 6e.
    #[arg(long)]
    which: Option<String>,
    /// Seed for the random data of the pushforward family.
    #[arg(long, default_value_t = 0)]
    family_seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn thread_count(flag: Option<usize>) -> usize {
    flag.or_else(|| std::env::var("EXTERIA_THREADS").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(1)
        .max(1)
}

fn emit(command: &str, params: Value, result: Value) -> String {
    serde_json::to_string(&json!({
        "schema": SCHEMA,
        "command": command,
        "params": params,
        "result": result,
    }))
    .expect("serializable")
}

/// Applies the `m <= n` convention by transposing when needed.
fn normalize_matrix(mat: DenseMatrix) -> (DenseMatrix, bool) {
    if mat.rows() > mat.cols() {
        (mat.transpose(), true)
    } else {
        (mat, false)
    }
}

fn check_ambient(a: &Ambient) -> Result<()> {
    if a.m > a.n {
        bail!("m = {} exceeds n = {}; present the transposed problem (m <= n)", a.m, a.n);
    }
    Ok(())
}

fn orbit_class(u: usize, k: Option<usize>) -> Result<OrbitClass> {
    Ok(match u {
        0 => OrbitClass::Zero,
        1 => OrbitClass::RankOne,
        u => OrbitClass::SmallRank {
            u,
            k: k.ok_or_else(|| anyhow!("--k is required for u >= 2"))?,
        },
    })
}

/// Resolves a point specifier against the ambient data.
fn resolve_point(spec: &str, m: usize, n: usize, t: usize, seed: u64) -> Result<ExteriorPoint> {
    if spec == "zero" {
        return ExteriorPoint::zero(m, n, t).map_err(|e| anyhow!(e));
    }
    if spec == "rank1" {
        return normal_form(OrbitClass::RankOne, m, n, t).map_err(|e| anyhow!(e));
    }
    if spec == "smooth" {
        // compound of a generic map of rank above t: a smooth sample
        let rank = m.min(t + 1);
        let b = random_matrix(m, n, rank, seed).map_err(|e| anyhow!(e))?;
        return compound(&b, t).map_err(|e| anyhow!(e));
    }
    if let Some(rest) = spec.strip_prefix("normal:") {
        let mut u = None;
        let mut k = None;
        for part in rest.split(',') {
            let (key, val) = part
                .split_once('=')
                .ok_or_else(|| anyhow!("normal form spec expects u=..,k=.."))?;
            match key {
                "u" => u = Some(val.parse::<usize>().context("parsing u")?),
                "k" => k = Some(val.parse::<usize>().context("parsing k")?),
                other => bail!("unknown normal-form key {other:?}"),
            }
        }
        let u = u.ok_or_else(|| anyhow!("normal form spec needs u"))?;
        return normal_form(orbit_class(u, k)?, m, n, t).map_err(|e| anyhow!(e));
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let x = io::read_point(path)?;
        if (x.m(), x.n(), x.t()) != (m, n, t) {
            bail!("point file has shape ({}, {}, {})", x.m(), x.n(), x.t());
        }
        return Ok(x);
    }
    if let Some(path) = spec.strip_prefix("compound:") {
        let mat = io::read_matrix(path)?;
        if (mat.rows(), mat.cols()) != (m, n) {
            bail!("matrix file is {}x{}, expected {m}x{n}", mat.rows(), mat.cols());
        }
        return compound(&mat, t).map_err(|e| anyhow!(e));
    }
    bail!("unknown point specifier {spec:?}")
}

fn relation_to_json(rel: &RelationExpr) -> Value {
    let terms: Vec<Value> = rel
        .terms()
        .iter()
        .map(|(c, factors)| {
            let f: Vec<Value> = factors
                .iter()
                .map(|s| json!([s.rows().indices(), s.cols().indices()]))
                .collect();
            json!({"coeff": c.to_string(), "factors": f})
        })
        .collect();
    json!({"terms": terms, "term_count": rel.terms().len()})
}

fn build_family(args: &FamilyArgs) -> Result<(RelationExpr, Value)> {
    let need_t = || args.t.ok_or_else(|| anyhow!("--t is required for this family"));
    match args.family.as_str() {
        "plucker" => {
            let t = need_t()?;
            if t < 1 {
                bail!("plucker needs t >= 1");
            }
            let a = Combination::new((1..=t - 1).collect(), 2 * t).map_err(|e| anyhow!(e))?;
            let b = Combination::new((t..=2 * t).collect(), 2 * t).map_err(|e| anyhow!(e))?;
            let rel = plucker_relation(&a, &b).map_err(|e| anyhow!(e))?;
            Ok((rel, json!({"family": "plucker", "t": t})))
        }
        "twelve-term" => Ok((twelve_term_relation(), json!({"family": "twelve-term"}))),
        "twelve-term-appended" => Ok((
            relations::append_index(&twelve_term_relation()),
            json!({"family": "twelve-term-appended"}),
        )),
        "genplu2" => {
            let t = need_t()?;
            let s = args.s.ok_or_else(|| anyhow!("--s is required for genplu2"))?;
            let rel = genplu2_relation(s, t).map_err(|e| anyhow!(e))?;
            Ok((rel, json!({"family": "genplu2", "s": s, "t": t})))
        }
        "degree3" => {
            let which = args.which.as_deref().unwrap_or("6d");
            let catalog = degree3_catalog().map_err(|e| anyhow!(e))?;
            let rel = catalog
                .into_iter()
                .find(|(name, _)| *name == which)
                .map(|(_, r)| r)
                .ok_or_else(|| anyhow!("unknown degree-3 member {which:?} (6a..6e)"))?;
            Ok((rel, json!({"family": "degree3", "which": which})))
        }
        "pushforward" => {
            let t = need_t()?;
            if t < 1 {
                bail!("pushforward needs t >= 1");
            }
            let a = Combination::new((1..=t - 1).collect(), 2 * t).map_err(|e| anyhow!(e))?;
            let b = Combination::new((t..=2 * t).collect(), 2 * t).map_err(|e| anyhow!(e))?;
            let base = plucker_relation(&a, &b).map_err(|e| anyhow!(e))?;
            let mut rng = linalg::rng_from_seed(args.family_seed);
            let cols = t + 2;
            let mat = linalg::random_full_rank(&mut rng, t, cols);
            let u = linalg::random_indices(&mut rng, cols, 2 * t);
            let rel = pushforward_relation(&base, &mat, &u).map_err(|e| anyhow!(e))?;
            Ok((
                rel,
                json!({
                    "family": "pushforward",
                    "t": t,
                    "seed": args.family_seed,
                    "matrix": io::format_matrix(&mat),
                    "multiset": u,
                }),
            ))
        }
        other => bail!("unknown relation family {other:?}"),
    }
}

fn step_cert_json(cert: &StepCertificate) -> Value {
    json!({
        "minor": [cert.minor.rows().indices(), cert.minor.cols().indices()],
        "k": cert.k,
        "rep": relation_to_json(&cert.rep),
    })
}

fn run(cli: Cli) -> Result<u8> {
    let threads = thread_count(cli.threads);
    let mut exit = 0u8;
    let doc = match &cli.command {
        Command::Compound { input, t, output } => {
            let (mat, transposed) = normalize_matrix(io::read_matrix(input)?);
            let point = compound(&mat, *t).map_err(|e| anyhow!(e))?;
            let pj = io::point_to_json(&point)?;
            if let Some(path) = output {
                std::fs::write(path, serde_json::to_string(&pj)? + "\n")
                    .with_context(|| format!("writing {path}"))?;
            }
            emit(
                "compound",
                json!({"input": input, "t": t, "transposed": transposed}),
                json!({"point": pj, "rank": point.rank()}),
            )
        }
        Command::SmallRank { ambient, point, strategy, seed, trials } => {
            check_ambient(ambient)?;
            let x = resolve_point(point, ambient.m, ambient.n, ambient.t, *seed)?;
            let strat = match strategy {
                StrategyArg::Randomized => SmallRankStrategy::Randomized,
                StrategyArg::Certificate => SmallRankStrategy::Certificate,
            };
            let sr = small_rank(&x, strat, *seed, *trials);
            emit(
                "small-rank",
                json!({
                    "m": ambient.m, "n": ambient.n, "t": ambient.t,
                    "point": point, "seed": seed, "trials": trials,
                    "strategy": match strategy {
                        StrategyArg::Randomized => "randomized",
                        StrategyArg::Certificate => "certificate",
                    },
                }),
                json!({"small_rank": sr, "rank": x.rank()}),
            )
        }
        Command::Classify { ambient, point, seed, trials } => {
            check_ambient(ambient)?;
            let x = resolve_point(point, ambient.m, ambient.n, ambient.t, *seed)?;
            let outcome = classify(&x, *seed, *trials).map_err(|e| anyhow!(e))?;
            let result = match outcome {
                ClassifyOutcome::Orbit(d) => json!({
                    "in_catalog": true,
                    "sr": d.small_rank,
                    "rank": d.rank,
                    "k": d.k,
                    "dim": d.dimension,
                    "prime": d.prime.label(),
                }),
                ClassifyOutcome::NotInVariety { small_rank, rank } => json!({
                    "in_catalog": false,
                    "verdict": "not-in-variety",
                    "sr": small_rank,
                    "rank": rank,
                }),
            };
            emit(
                "classify",
                json!({
                    "m": ambient.m, "n": ambient.n, "t": ambient.t,
                    "point": point, "seed": seed, "trials": trials,
                }),
                result,
            )
        }
        Command::NormalForm { ambient, u, k, output } => {
            check_ambient(ambient)?;
            let orbit = orbit_class(*u, *k)?;
            let d = normal_form(orbit, ambient.m, ambient.n, ambient.t).map_err(|e| anyhow!(e))?;
            let pj = io::point_to_json(&d)?;
            if let Some(path) = output {
                std::fs::write(path, serde_json::to_string(&pj)? + "\n")
                    .with_context(|| format!("writing {path}"))?;
            }
            emit(
                "normal-form",
                json!({"m": ambient.m, "n": ambient.n, "t": ambient.t, "u": u, "k": k}),
                json!({"point": pj, "rank": d.rank()}),
            )
        }
        Command::Testfn { ambient, point, seed } => {
            check_ambient(ambient)?;
            let x = resolve_point(point, ambient.m, ambient.n, ambient.t, *seed)?;
            let mut values = Vec::new();
            for v in 0..=ambient.t + 1 {
                let val = f_v_eval(&x, v).map_err(|e| anyhow!(e))?;
                values.push(json!({"v": v, "value": val.to_string(), "zero": val.is_zero()}));
            }
            emit(
                "testfn",
                json!({"m": ambient.m, "n": ambient.n, "t": ambient.t, "point": point, "seed": seed}),
                json!({"values": values}),
            )
        }
        Command::Shapes { lambda, t, m } => {
            let parts: Vec<usize> = lambda
                .split(',')
                .map(|w| w.trim().parse::<usize>().context("parsing lambda"))
                .collect::<Result<_>>()?;
            let shape = Shape::new(parts).map_err(|e| anyhow!(e))?;
            let bound = m.unwrap_or_else(|| shape.parts().first().copied().unwrap_or(1).max(*t));
            if shape.parts().first().copied().unwrap_or(0) > bound {
                bail!("lambda exceeds the bound m = {bound}");
            }
            let gamma: Vec<i64> = (1..=bound)
                .map(|j| shapes::gamma(&shape, j).map_err(|e| anyhow!(e)))
                .collect::<Result<_>>()?;
            let pi: Vec<String> = (1..=*t)
                .map(|j| shapes::pi(&shape, j, *t).map(|v| v.to_string()).map_err(|e| anyhow!(e)))
                .collect::<Result<_>>()?;
            let eps = shapes::epsilon(&shape, bound).map_err(|e| anyhow!(e))?;
            let in_support = shapes::in_at_support(&shape, *t).map_err(|e| anyhow!(e))?;
            let primes = if in_support && m.is_some() {
                let catalog = shapes::prime_catalog(bound, *t).map_err(|e| anyhow!(e))?;
                let rows: Vec<Value> = catalog
                    .iter()
                    .map(|p| -> Result<Value> {
                        let member =
                            shapes::shape_in_prime(&shape, p, *t).map_err(|e| anyhow!(e))?;
                        Ok(json!({"label": p.label(), "contains": member}))
                    })
                    .collect::<Result<_>>()?;
                Some(rows)
            } else {
                None
            };
            emit(
                "shapes",
                json!({"lambda": shape.parts(), "t": t, "m": m}),
                json!({
                    "boxes": shape.boxes(),
                    "gamma": gamma,
                    "pi": pi,
                    "epsilon": eps,
                    "in_support": in_support,
                    "primes": primes,
                }),
            )
        }
        Command::Primes { m, t, n } => {
            let n = n.unwrap_or(*m);
            if *m > n {
                bail!("m = {m} exceeds n = {n}");
            }
            let catalog = shapes::prime_catalog(*m, *t).map_err(|e| anyhow!(e))?;
            let mut orbit_of = std::collections::BTreeMap::new();
            for orbit in admissible_pairs(*m, *t) {
                let p = orbit_to_prime(orbit, *m, *t).map_err(|e| anyhow!(e))?;
                orbit_of.insert(p.label(), orbit);
            }
            let mut rows = Vec::new();
            for p in &catalog {
                let orbit = orbit_of.get(&p.label()).copied();
                let orbit_json = match orbit {
                    Some(OrbitClass::Zero) => json!({"kind": "zero"}),
                    Some(OrbitClass::RankOne) => json!({"kind": "rank-one"}),
                    Some(OrbitClass::SmallRank { u, k }) => {
                        json!({"kind": "small-rank", "u": u, "k": k})
                    }
                    None => Value::Null,
                };
                let dimension = match orbit {
                    Some(o) => Some(
                        exteria_core::invariants::orbit_dimension(o, *m, n, *t)
                            .map_err(|e| anyhow!(e))?,
                    ),
                    None => None,
                };
                rows.push(json!({
                    "label": p.label(),
                    "face": p.face.as_ref().map(|f| f.iter().copied().collect::<Vec<_>>()),
                    "orbit": orbit_json,
                    "orbit_rank": orbit.map(orbit_rank),
                    "orbit_dimension": dimension,
                }));
            }
            if cli.format == OutputFormat::Tsv {
                let mut out = String::from("label\tface\torbit\torbit_rank\torbit_dimension\n");
                for r in &rows {
                    let face = r["face"]
                        .as_array()
                        .map(|a| a.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
                        .unwrap_or_else(|| "-".into());
                    let orbit = match &r["orbit"] {
                        Value::Null => "-".to_string(),
                        v => v["kind"]
                            .as_str()
                            .map(|k| match k {
                                "small-rank" => format!("u={},k={}", v["u"], v["k"]),
                                other => other.to_string(),
                            })
                            .unwrap_or_default(),
                    };
                    out.push_str(&format!(
                        "{}\t{}\t{}\t{}\t{}\n",
                        r["label"].as_str().unwrap_or(""),
                        face,
                        orbit,
                        r["orbit_rank"],
                        r["orbit_dimension"],
                    ));
                }
                print!("{out}");
                return Ok(0);
            }
            emit(
                "primes",
                json!({"m": m, "t": t, "n": n}),
                json!({"count": catalog.len(), "ideals": rows}),
            )
        }
        Command::Relations { action } => match action {
            RelationsAction::Gen { family } => {
                let (rel, params) = build_family(family)?;
                emit("relations-gen", params, relation_to_json(&rel))
            }
            RelationsAction::Verify { family, mode, seed, trials, modulus } => {
                let (rel, params) = build_family(family)?;
                let verdict = match mode {
                    ModeArg::Exact => is_zero(&rel, ZeroMode::Exact),
                    ModeArg::Probabilistic => is_zero(
                        &rel,
                        ZeroMode::Probabilistic {
                            seed: *seed,
                            trials: *trials,
                            modulus: *modulus,
                        },
                    ),
                }
                .map_err(|e| anyhow!(e))?;
                let status = match &verdict {
                    ZeroVerdict::Zero => json!({"status": "zero"}),
                    ZeroVerdict::ProbablyZero { trials } => {
                        json!({"status": "probably-zero", "trials": trials})
                    }
                    ZeroVerdict::NonZero { witness, value } => json!({
                        "status": "nonzero",
                        "witness": io::format_matrix(witness),
                        "value": value.to_string(),
                    }),
                };
                if !verdict.is_zero() {
                    exit = 1;
                }
                emit(
                    "relations-verify",
                    json!({
                        "family": params,
                        "mode": match mode {
                            ModeArg::Exact => "exact",
                            ModeArg::Probabilistic => "probabilistic",
                        },
                        "seed": seed, "trials": trials, "modulus": modulus,
                    }),
                    status,
                )
            }
        },
        Command::Localize { ambient, k_max, deg_bound } => {
            check_ambient(ambient)?;
            let bounds = LocalizeBounds {
                k_max: *k_max,
                deg_bound: deg_bound.unwrap_or(ambient.t + 2),
                ..LocalizeBounds::default_for(ambient.t)
            };
            let runner = threads::ThreadedRunner { threads };
            let report = verify_localize_with(&runner, ambient.m, ambient.n, ambient.t, bounds)
                .map_err(|e| anyhow!(e))?;
            if !report.complete {
                exit = 1;
            }
            let minors: Vec<Value> = report
                .minors
                .iter()
                .map(|e| {
                    json!({
                        "minor": [e.minor.rows().indices(), e.minor.cols().indices()],
                        "level": e.level,
                        "k1": e.k1,
                        "k2": e.k2,
                        "k3": e.k3,
                        "f_power": e.f_power,
                        "step1": e.step1.as_ref().map(step_cert_json),
                    })
                })
                .collect();
            let step2: Vec<Value> = report.step2.values().map(step_cert_json).collect();
            let step3: Vec<Value> = report.step3.values().map(step_cert_json).collect();
            emit(
                "localize",
                json!({
                    "m": ambient.m, "n": ambient.n, "t": ambient.t,
                    "k_max": k_max, "deg_bound": bounds.deg_bound, "threads": threads,
                }),
                json!({
                    "phi0_size": report.phi0.members.len(),
                    "phi1_size": report.phi1.members.len(),
                    "phi2_size": report.phi2.members.len(),
                    "complete": report.complete,
                    "denominator_identity": relation_to_json(&report.denominator.representation),
                    "minors": minors,
                    "step2": step2,
                    "step3": step3,
                }),
            )
        }
        Command::Tangent { ambient, deg, point, seed } => {
            check_ambient(ambient)?;
            let x = resolve_point(point, ambient.m, ambient.n, ambient.t, *seed)?;
            let slice = relation_ideal_slice(ambient.m, ambient.n, ambient.t, *deg)
                .map_err(|e| anyhow!(e))?;
            let dim = tangent_dim_at(&x, &slice).map_err(|e| anyhow!(e))?;
            let variety_dim = ambient.m * ambient.n;
            let rank = x.rank();
            let verdict = if dim == variety_dim {
                "smooth-certified"
            } else if dim > variety_dim && rank <= 1 {
                "singularity-consistent"
            } else {
                "inconclusive"
            };
            emit(
                "tangent",
                json!({
                    "m": ambient.m, "n": ambient.n, "t": ambient.t,
                    "deg": deg, "point": point, "seed": seed,
                }),
                json!({
                    "ambient": binomial(ambient.m, ambient.t) * binomial(ambient.n, ambient.t),
                    "variety_dim": variety_dim,
                    "kernel_dim": slice.kernel_dimension(),
                    "point_rank": rank,
                    "tangent_dim": dim,
                    "verdict": verdict,
                }),
            )
        }
        Command::Fibers { t, left, right } => {
            let f = io::read_matrix(left)?;
            let g = io::read_matrix(right)?;
            if (f.rows(), f.cols()) != (g.rows(), g.cols()) {
                bail!("the two matrices have different shapes");
            }
            let rf = linalg::rank(&f);
            let rg = linalg::rank(&g);
            let result = if rf > *t && rg > *t {
                let equal = same_fiber_high_rank(&f, &g, *t).map_err(|e| anyhow!(e))?;
                json!({"case": "high-rank", "ranks": [rf, rg], "equal_compound": equal})
            } else if rf == *t && rg == *t {
                let fiber = same_fiber_rank_t(&f, &g, *t).map_err(|e| anyhow!(e))?;
                json!({
                    "case": "rank-t",
                    "ranks": [rf, rg],
                    "scalar_related": fiber.related(),
                    "scalar": fiber.scalar.as_ref().map(|s| s.to_string()),
                    "scalar_one": fiber.scalar_is_one(),
                })
            } else {
                bail!("ranks ({rf}, {rg}) do not match a fiber case for t = {t}");
            };
            emit("fibers", json!({"t": t, "left": left, "right": right}), result)
        }
        Command::SingCount { ambient } => {
            check_ambient(ambient)?;
            let report =
                sing_counting_check(ambient.m, ambient.n, ambient.t).map_err(|e| anyhow!(e))?;
            emit(
                "sing-count",
                json!({"m": ambient.m, "n": ambient.n, "t": ambient.t}),
                json!({
                    "enumerated": report.enumerated,
                    "closed_form": report.closed_form,
                    "ambient": report.ambient,
                    "consistent": report.consistent(),
                }),
            )
        }
    };
    println!("{doc}");
    Ok(exit)
}
