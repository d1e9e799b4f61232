//! `hopfkit`: classify abelian group descriptors, compute with finite abelian
//! groups, and run the verification suites.

mod literal;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hopfkit_core::arith::is_prime;
use hopfkit_core::harness::{run_suite, SuiteConfig, VerificationReport};
use hopfkit_core::{
    classify, enumerate_subgroups, for_each_hom, is_pure, quotient, ulm_of_descriptor,
    FiniteAbelianGroup, GroupDescriptor, GroupElement, Subgroup, SurjectivityTest,
};
use serde::Deserialize;
use serde_json::json;

use literal::{tuple, Literal};

#[derive(Parser)]
#[command(
    name = "hopfkit",
    version,
    about = "Hopfian-class classifier and finite abelian group toolkit"
)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// TOML file with defaults for `json`, `max-order`, `seed` and `size`; flags win.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide H, RH, WH and DF for a descriptor such as "Z(2^inf) + Q".
    Classify { descriptor: String },
    /// Ulm invariants f_0, f_1, ... and f_inf of a descriptor at a prime.
    Ulm {
        descriptor: String,
        #[arg(short = 'p', long = "prime")]
        prime: u64,
        /// Number of finite invariants to print (f_0 .. f_{K-1}).
        #[arg(long, value_name = "K")]
        upto: Option<u32>,
    },
    /// G/H for G given by cyclic orders ("4,2") and H by generators ("2,1;0,1").
    Quotient {
        factors: String,
        #[arg(long, value_name = "GENERATORS")]
        sub: String,
    },
    /// Homomorphisms A -> B, as images of the generators of A.
    Homs {
        a: String,
        b: String,
        #[arg(long)]
        surjective_only: bool,
        /// Print only the number of maps.
        #[arg(long)]
        count: bool,
    },
    /// Every subgroup of a finite group.
    Subgroups {
        factors: String,
        #[arg(long)]
        pure_only: bool,
    },
    /// Run a verification suite; exits 1 if any instance fails.
    Verify {
        suite: String,
        #[arg(long)]
        max_order: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        size: Option<usize>,
    },
}

#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct FileConfig {
    json: Option<bool>,
    max_order: Option<u64>,
    seed: Option<u64>,
    size: Option<usize>,
}

fn load_config(path: &Path) -> Result<FileConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    toml::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
}

/// Outcome of a command: success, or a verification failure.
enum Status {
    Ok,
    Failed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<Status, String> {
    let file = match &cli.config {
        Some(path) => load_config(path)?,
        None => FileConfig::default(),
    };
    let json = cli.json || file.json.unwrap_or(false);
    match cli.command {
        Command::Classify { descriptor } => classify_cmd(&descriptor, json),
        Command::Ulm {
            descriptor,
            prime,
            upto,
        } => ulm_cmd(&descriptor, prime, upto, json),
        Command::Quotient { factors, sub } => quotient_cmd(&factors, &sub, json),
        Command::Homs {
            a,
            b,
            surjective_only,
            count,
        } => homs_cmd(&a, &b, surjective_only, count, json),
        Command::Subgroups { factors, pure_only } => subgroups_cmd(&factors, pure_only, json),
        Command::Verify {
            suite,
            max_order,
            seed,
            size,
        } => {
            let config = SuiteConfig {
                max_order: max_order.or(file.max_order),
                seed: seed.or(file.seed),
                size: size.or(file.size),
            };
            verify_cmd(&suite, &config, json)
        }
    }
}

fn print_json(v: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("values serialize")
    );
}

fn parse_descriptor(text: &str) -> Result<GroupDescriptor, String> {
    GroupDescriptor::parse(text).map_err(|e| format!("{text:?}: {e}"))
}

fn classify_cmd(text: &str, json: bool) -> Result<Status, String> {
    let report = classify(&parse_descriptor(text)?);
    if json {
        print_json(&serde_json::to_value(&report).expect("reports serialize"));
    } else {
        print!("{report}");
    }
    Ok(Status::Ok)
}

fn ulm_cmd(text: &str, p: u64, upto: Option<u32>, json: bool) -> Result<Status, String> {
    if !is_prime(p) {
        return Err(format!("{p} is not a prime"));
    }
    let d = parse_descriptor(text)?;
    let u = ulm_of_descriptor(&d, p);
    let upto = upto.unwrap_or(u.values.len() as u32 + 1);
    let values: Vec<_> = (0..upto as usize).map(|k| u.f(k)).collect();
    if json {
        print_json(&json!({
            "descriptor": d.to_string(),
            "prime": p,
            "f": values,
            "f_beyond": { "from": u.values.len(), "value": u.beyond },
            "f_inf": u.f_inf,
        }));
    } else {
        println!("{d} at p = {p}");
        for (k, v) in values.iter().enumerate() {
            println!("f_{k} = {v}");
        }
        if values.len() > u.values.len() || u.values.is_empty() {
            println!("f_k = {} for every k >= {}", u.beyond, u.values.len());
        }
        println!("f_inf = {}", u.f_inf);
    }
    Ok(Status::Ok)
}

fn quotient_cmd(factors: &str, sub: &str, json: bool) -> Result<Status, String> {
    let g = Literal::parse(factors)?;
    let gens = g.parse_elements(sub)?;
    let h = Subgroup::generated_by(g.group(), &gens).map_err(|e| e.to_string())?;
    let (q, pi) = quotient(g.group(), &h).map_err(|e| e.to_string())?;
    let images: Vec<Vec<u64>> = (0..g.orders.len())
        .map(|j| {
            pi.apply(&g.generator(j))
                .expect("generator lies in G")
                .coords
        })
        .collect();
    if json {
        print_json(&json!({
            "group": g.orders,
            "invariant_factors": g.group().invariant_factors(),
            "subgroup_order": h.order(),
            "quotient": q.invariant_factors(),
            "quotient_order": q.order(),
            "projection": images,
        }));
    } else {
        println!("G = {} = {}", sum_name(&g.orders), g.group());
        println!("H = <{}>, order {}", sub.trim(), h.order());
        println!("G/H = {}, order {}", q, q.order());
        for (j, y) in images.iter().enumerate() {
            println!("  e{} -> {}", j + 1, tuple(y));
        }
    }
    Ok(Status::Ok)
}

fn sum_name(orders: &[u64]) -> String {
    if orders.is_empty() {
        return "0".into();
    }
    let parts: Vec<String> = orders.iter().map(|n| format!("Z({n})")).collect();
    parts.join(" + ")
}

fn apply(k: &FiniteAbelianGroup, images: &[GroupElement], x: &GroupElement) -> GroupElement {
    images
        .iter()
        .zip(&x.coords)
        .fold(k.zero(), |acc, (y, &c)| k.add(&acc, &k.scale(c, y)))
}

fn homs_cmd(
    a: &str,
    b: &str,
    surjective_only: bool,
    count_only: bool,
    json: bool,
) -> Result<Status, String> {
    let (a, b) = (Literal::parse(a)?, Literal::parse(b)?);
    let (ga, gb) = (a.group(), b.group());
    let generators: Vec<GroupElement> = (0..a.orders.len()).map(|j| a.generator(j)).collect();
    let mut onto = SurjectivityTest::new(gb);
    let mut count: u128 = 0;
    let mut listed: Vec<Vec<Vec<u64>>> = Vec::new();
    if !json && !count_only {
        println!(
            "Hom({}, {}), images of e1..e{}:",
            sum_name(&a.orders),
            sum_name(&b.orders),
            a.orders.len()
        );
    }
    for_each_hom::<()>(ga, gb, |images| {
        if surjective_only && !onto.generates(images) {
            return std::ops::ControlFlow::Continue(());
        }
        count += 1;
        if !count_only {
            let row: Vec<Vec<u64>> = generators
                .iter()
                .map(|x| b.lift(&apply(gb, images, x)))
                .collect();
            if json {
                listed.push(row);
            } else {
                let parts: Vec<String> = row.iter().map(|y| tuple(y)).collect();
                println!("  {}", parts.join(" "));
            }
        }
        std::ops::ControlFlow::Continue(())
    });
    if json {
        let mut v = json!({
            "domain": a.orders,
            "codomain": b.orders,
            "surjective_only": surjective_only,
            "count": count,
        });
        if !count_only {
            v["homomorphisms"] = json!(listed);
        }
        print_json(&v);
    } else {
        let kind = if surjective_only {
            "surjective homomorphisms"
        } else {
            "homomorphisms"
        };
        println!("{count} {kind}");
    }
    Ok(Status::Ok)
}

fn subgroups_cmd(factors: &str, pure_only: bool, json: bool) -> Result<Status, String> {
    let g = Literal::parse(factors)?;
    let mut rows = Vec::new();
    for h in enumerate_subgroups(g.group()).map_err(|e| e.to_string())? {
        let pure = is_pure(g.group(), &h).map_err(|e| e.to_string())?;
        if pure_only && !pure {
            continue;
        }
        let gens: Vec<Vec<u64>> = h.canonical_generators().iter().map(|y| g.lift(y)).collect();
        rows.push((h.order(), h.group(), pure, gens));
    }
    if json {
        let list: Vec<_> = rows
            .iter()
            .map(|(order, s, pure, gens)| {
                json!({
                    "order": order,
                    "structure": s.invariant_factors(),
                    "pure": pure,
                    "generators": gens,
                })
            })
            .collect();
        print_json(
            &json!({ "group": g.orders, "pure_only": pure_only, "count": list.len(), "subgroups": list }),
        );
    } else {
        println!("subgroups of {}:", sum_name(&g.orders));
        for (order, s, pure, gens) in &rows {
            let gens: Vec<String> = gens.iter().map(|y| tuple(y)).collect();
            let gens = if gens.is_empty() {
                "0".to_string()
            } else {
                gens.join(";")
            };
            let pure = if *pure { "pure" } else { "not pure" };
            println!(
                "  order {order:<5} {:<12} {pure:<9} <{gens}>",
                s.to_string()
            );
        }
        println!("{} subgroups", rows.len());
    }
    Ok(Status::Ok)
}

fn verify_cmd(suite: &str, config: &SuiteConfig, json: bool) -> Result<Status, String> {
    let report = run_suite(suite, config).map_err(|e| e.to_string())?;
    if json {
        println!("{}", report.to_json());
    } else {
        print_report(&report);
    }
    Ok(if report.passed {
        Status::Ok
    } else {
        Status::Failed
    })
}

fn print_report(r: &VerificationReport) {
    println!(
        "suite {}: {}",
        r.suite,
        if r.passed { "PASS" } else { "FAIL" }
    );
    println!("  instances checked: {}", r.instances_checked);
    println!("  failures: {}", r.failure_count);
    println!("  seed: {}", r.seed);
    let bounds: Vec<String> = r.bounds.iter().map(|(k, v)| format!("{k}={v}")).collect();
    println!("  bounds: {}", bounds.join(", "));
    println!("  elapsed: {:.2}s", r.elapsed_seconds);
    for c in &r.negative_controls {
        let state = if c.detected {
            "detected"
        } else {
            "NOT detected"
        };
        println!(
            "  negative control {}: {} ({state})",
            c.instance, c.observation
        );
    }
    for f in r.failures.iter().take(20) {
        println!(
            "  failed {}: expected {}, got {}",
            f.instance, f.expected, f.actual
        );
    }
    if r.failures.len() > 20 {
        println!(
            "  ... {} more (use --json for the recorded list)",
            r.failure_count - 20
        );
    }
}
