//! Command-line surface over the library: exact waiting times, generation
//! probabilities, lattice and chief-structure dumps, the bound suite,
//! certified constants, golden-table self-checks, degree scans, simulation,
//! and witness construction.

use std::time::Instant;

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use genwait::bounded::rational_decimal;
use genwait::bounds::{degree_scan, theorem_check};
use genwait::chief::{
    alpha_beta_stats, chief_series, factor_classes, gaschutz_dirichlet, supersoluble_witness,
};
use genwait::corpus::{BUILTIN_CORPUS, EXTREMAL_FAMILY_TABLE, SMALL_DEGREE_EXCEPTIONS};
use genwait::error::Result;
use genwait::groupspec::parse_group;
use genwait::lattice::{maximal_census, SubgroupLattice};
use genwait::montecarlo::estimate_e;
use genwait::perm::{FiniteGroup, DEFAULT_ORDER_CAP};
use genwait::series::{
    e_d_minus_d, kappa, kappa_tilde, omega, omega_limit, perm_extremal_e,
    POMERANCE_SIGMA_REFERENCE, PRIOR_ETA_REFERENCE,
};
use genwait::waiting::{
    expected_wait_exact, expected_wait_from_dirichlet, gen_probability, gen_probability_dirichlet,
};

#[derive(Parser)]
#[command(
    name = "genwait",
    version,
    about = "Expected number of random elements generating a finite group: exact values, bounds, constants, simulation"
)]
struct Cli {
    /// Emit the machine-readable report instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact expected waiting time e(G), with route cross-checks
    #[command(name = "e-exact")]
    EExact {
        #[arg(long)]
        group: String,
    },
    /// Exact generation probability P_G(k)
    Prob {
        #[arg(long)]
        group: String,
        #[arg(long)]
        k: u32,
    },
    /// Subgroup lattice: orders, Möbius values, maximal-subgroup census
    Lattice {
        #[arg(long)]
        group: String,
    },
    /// Chief series, factor statistics and the soluble product form
    Chief {
        #[arg(long)]
        group: String,
    },
    /// Inequality suite over a corpus ("builtin" or a file of expressions)
    #[command(name = "bounds-check")]
    BoundsCheck {
        #[arg(long, default_value = "builtin")]
        corpus: String,
    },
    /// Certified constants and reference literals
    Constants {
        /// kappa | kappa-tilde | omega-limit | omega | e-d | b | c |
        /// prior-eta | pomerance-sigma
        #[arg(long)]
        name: String,
        #[arg(long, default_value_t = 8)]
        digits: u32,
        /// m for omega
        #[arg(long, default_value_t = 4)]
        m: u32,
        /// eta for omega (0 or 1)
        #[arg(long, default_value_t = 0)]
        eta: u32,
        /// d for e-d
        #[arg(long, default_value_t = 1)]
        d: u32,
    },
    /// Recompute the small-degree exceptional table and diff it
    #[command(name = "table-sec5")]
    TableSec5,
    /// Recompute the extremal-family table and diff it
    #[command(name = "table-sec6")]
    TableSec6 {
        #[arg(long, default_value_t = 15)]
        max_n: u32,
    },
    /// Conjugacy classes of subgroups of Sym(n) with e above ⌊n/2⌋+1
    Scan {
        #[arg(long, default_value_t = 5)]
        max_n: u32,
    },
    /// Monte Carlo estimate of e(G)
    Simulate {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Supersoluble witness with its verified certificate
    Witness {
        #[arg(long)]
        group: String,
    },
}

fn order_cap() -> usize {
    std::env::var("GENWAIT_ORDER_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_ORDER_CAP)
}

fn rat_str(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn rat_approx(r: &BigRational) -> String {
    rational_decimal(r, 6)
}

fn build_group(spec: &str) -> Result<FiniteGroup> {
    parse_group(spec, order_cap())
}

fn main() {
    let cli = Cli::parse();
    let start = Instant::now();
    let command_name = command_label(&cli.command);
    match run(&cli.command) {
        Ok((human, results)) => {
            if cli.json {
                let report = json!({
                    "command": command_name,
                    "results": results,
                    "timing_ms": start.elapsed().as_millis() as u64,
                    "version": env!("CARGO_PKG_VERSION"),
                });
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            } else {
                println!("{human}");
            }
        }
        Err(e) => {
            let report = json!({
                "command": command_name,
                "error": e.to_string(),
                "version": env!("CARGO_PKG_VERSION"),
            });
            eprintln!("{}", serde_json::to_string_pretty(&report).unwrap());
            std::process::exit(1);
        }
    }
}

fn command_label(c: &Command) -> &'static str {
    match c {
        Command::EExact { .. } => "e-exact",
        Command::Prob { .. } => "prob",
        Command::Lattice { .. } => "lattice",
        Command::Chief { .. } => "chief",
        Command::BoundsCheck { .. } => "bounds-check",
        Command::Constants { .. } => "constants",
        Command::TableSec5 => "table-sec5",
        Command::TableSec6 { .. } => "table-sec6",
        Command::Scan { .. } => "scan",
        Command::Simulate { .. } => "simulate",
        Command::Witness { .. } => "witness",
    }
}

fn constant_report(
    name: &str,
    digits: u32,
    v: &genwait::bounded::ErrorBoundedReal,
) -> (String, Value) {
    (
        format!("{} ± {}", v.decimal(digits + 2), v.abs_err_decimal(digits)),
        json!({
            "name": name,
            "digits": digits,
            "value": v.decimal(digits + 2),
            "abs_error": v.abs_err_decimal(digits),
        }),
    )
}

fn run(command: &Command) -> Result<(String, Value)> {
    match command {
        Command::EExact { group } => {
            let g = build_group(group)?;
            let lattice = SubgroupLattice::build(&g)?;
            let e = expected_wait_exact(&g, &lattice)?;
            let dirichlet = expected_wait_from_dirichlet(&gen_probability_dirichlet(&g, &lattice))?;
            let gaschutz = gaschutz_dirichlet(&g)
                .ok()
                .map(|p| expected_wait_from_dirichlet(&p))
                .transpose()?;
            let mut results = json!({
                "group": group,
                "order": g.order(),
                "degree": g.degree(),
                "e": rat_str(&e),
                "e_mobius": rat_str(&e),
                "e_dirichlet": rat_str(&dirichlet),
            });
            if let Some(x) = &gaschutz {
                results["e_chief_product"] = Value::String(rat_str(x));
            }
            let human = format!(
                "e({group}) = {} (~{})\n  routes: mobius {}, dirichlet {}{}",
                rat_str(&e),
                rat_approx(&e),
                rat_str(&e),
                rat_str(&dirichlet),
                gaschutz
                    .map(|x| format!(", chief product {}", rat_str(&x)))
                    .unwrap_or_default()
            );
            Ok((human, results))
        }
        Command::Prob { group, k } => {
            let g = build_group(group)?;
            let lattice = SubgroupLattice::build(&g)?;
            let p = gen_probability(&g, &lattice, *k);
            let human = format!("P[{group}]({k}) = {} (~{})", rat_str(&p), rat_approx(&p));
            Ok((
                human,
                json!({ "group": group, "k": k, "probability": rat_str(&p) }),
            ))
        }
        Command::Lattice { group } => {
            let g = build_group(group)?;
            let lattice = SubgroupLattice::build(&g)?;
            let census = maximal_census(&g, &lattice)?;
            let subgroups: Vec<Value> = lattice
                .subgroups
                .iter()
                .zip(&lattice.mobius)
                .map(|(s, &mu)| json!({ "order": s.order(), "mobius": mu }))
                .collect();
            let census_json: Vec<Value> = census
                .m_n
                .iter()
                .map(|(&n, &m)| {
                    json!({
                        "index": n,
                        "m_n": m,
                        "m_n_A": census.m_n_a.get(&n).copied().unwrap_or(0),
                        "m_n_B": census.m_n_b.get(&n).copied().unwrap_or(0),
                    })
                })
                .collect();
            let human = format!(
                "{} subgroups of {group} (order {}); maximal census by index: {:?}",
                lattice.len(),
                g.order(),
                census.m_n
            );
            Ok((
                human,
                json!({
                    "group": group,
                    "order": g.order(),
                    "subgroup_count": lattice.len(),
                    "subgroups": subgroups,
                    "census": census_json,
                }),
            ))
        }
        Command::Chief { group } => {
            let g = build_group(group)?;
            let series = chief_series(&g)?;
            let stats = alpha_beta_stats(&g)?;
            let factors: Vec<Value> = series
                .factors
                .iter()
                .map(|f| {
                    json!({
                        "order": f.order,
                        "prime": f.prime,
                        "exponent": f.exponent,
                        "abelian": f.is_abelian(),
                        "complemented": f.complemented,
                    })
                })
                .collect();
            let mut results = json!({
                "group": group,
                "order": g.order(),
                "factors": factors,
                "alpha_pt": stats
                    .alpha_pt
                    .iter()
                    .map(|(&(p, t), &c)| json!({"p": p, "t": t, "count": c}))
                    .collect::<Vec<_>>(),
                "beta": stats.beta,
                "d_p": stats.d_p,
            });
            let mut human = format!(
                "chief series of {group}: factor orders {:?}, beta = {}",
                series.factors.iter().map(|f| f.order).collect::<Vec<_>>(),
                stats.beta
            );
            if series.is_soluble() {
                let classes = factor_classes(&g)?;
                let poly = gaschutz_dirichlet(&g)?;
                results["factor_classes"] = serde_json::to_value(&classes).unwrap();
                results["probability_monomials"] = Value::Array(
                    poly.monomials()
                        .iter()
                        .map(|(c, b)| json!({"coefficient": rat_str(c), "base": b.to_string()}))
                        .collect(),
                );
                human.push_str(&format!(
                    "\n  {} factor classes; P(k) has {} monomials",
                    classes.len(),
                    poly.monomials().len()
                ));
            }
            Ok((human, results))
        }
        Command::BoundsCheck { corpus } => {
            let specs: Vec<String> = if corpus == "builtin" {
                BUILTIN_CORPUS.iter().map(|s| s.to_string()).collect()
            } else {
                std::fs::read_to_string(corpus)
                    .map_err(|e| genwait::Error::BadArgument(format!("corpus file: {e}")))?
                    .lines()
                    .map(str::trim)
                    .filter(|l| !l.is_empty() && !l.starts_with('#'))
                    .map(str::to_string)
                    .collect()
            };
            use rayon::prelude::*;
            let reports: Vec<_> = specs
                .par_iter()
                .map(|spec| -> Result<_> {
                    let g = build_group(spec)?;
                    theorem_check(&g, spec)
                })
                .collect::<Result<Vec<_>>>()?;
            let all = reports.iter().all(|r| r.all_pass);
            let mut human = String::new();
            for r in &reports {
                human.push_str(&format!(
                    "{} {:40} order {:4} d={} e = {}\n",
                    if r.all_pass { "PASS" } else { "FAIL" },
                    r.group,
                    r.order,
                    r.d,
                    r.e_exact,
                ));
            }
            human.push_str(&format!(
                "{} of {} groups pass every applicable check",
                reports.iter().filter(|r| r.all_pass).count(),
                reports.len()
            ));
            Ok((
                human,
                json!({
                    "corpus_size": reports.len(),
                    "all_pass": all,
                    "reports": serde_json::to_value(&reports).unwrap(),
                }),
            ))
        }
        Command::Constants {
            name,
            digits,
            m,
            eta,
            d,
        } => {
            let (value_str, results) = match name.as_str() {
                "kappa" => constant_report(name, *digits, &kappa(*digits)?),
                "kappa-tilde" => constant_report(name, *digits, &kappa_tilde(*digits)?),
                "omega-limit" => constant_report(name, *digits, &omega_limit(*digits)?),
                "omega" => {
                    let (s, mut v) = constant_report(name, *digits, &omega(*m, *eta, *digits)?);
                    v["m"] = json!(m);
                    v["eta"] = json!(eta);
                    (format!("omega({m},{eta}) = {s}"), v)
                }
                "e-d" => {
                    let (s, mut v) = constant_report(name, *digits, &e_d_minus_d(*d, *digits)?);
                    v["d"] = json!(d);
                    (format!("e_{d} - {d} = {s}"), v)
                }
                "b" | "c" => {
                    let table = genwait::bounded::ZetaTable::build(
                        (*digits as f64 * 3.4) as u32 + 16,
                        2 * digits + 10,
                    )?;
                    let v = if name == "b" { table.b() } else { table.c() };
                    constant_report(name, *digits, v)
                }
                "prior-eta" => (
                    format!("{PRIOR_ETA_REFERENCE} (reference literal, not computed)"),
                    json!({"name": name, "value": PRIOR_ETA_REFERENCE, "reference_only": true}),
                ),
                "pomerance-sigma" => (
                    format!("{POMERANCE_SIGMA_REFERENCE} (reference literal, not computed)"),
                    json!({"name": name, "value": POMERANCE_SIGMA_REFERENCE, "reference_only": true}),
                ),
                other => {
                    return Err(genwait::Error::BadArgument(format!(
                        "unknown constant {other:?}"
                    )))
                }
            };
            Ok((format!("{name} = {value_str}"), results))
        }
        Command::TableSec5 => {
            let mut rows = Vec::new();
            let mut human = String::new();
            let mut all = true;
            for (degree, order, spec, num, den) in SMALL_DEGREE_EXCEPTIONS {
                let g = build_group(spec)?;
                let lattice = SubgroupLattice::build(&g)?;
                let e = expected_wait_exact(&g, &lattice)?;
                let expected = BigRational::new(num.into(), den.into());
                let ok = e == expected;
                all &= ok;
                human.push_str(&format!(
                    "{} degree {degree} {spec:24} e = {:16} expected {num}/{den}\n",
                    if ok { "PASS" } else { "FAIL" },
                    rat_str(&e),
                ));
                rows.push(json!({
                    "degree": degree,
                    "order": order,
                    "group": spec,
                    "computed": rat_str(&e),
                    "expected": format!("{num}/{den}"),
                    "match": ok,
                }));
            }
            human.push_str(if all {
                "table reproduced exactly"
            } else {
                "MISMATCH"
            });
            Ok((human, json!({ "rows": rows, "all_match": all })))
        }
        Command::TableSec6 { max_n } => {
            let mut rows = Vec::new();
            let mut human = String::new();
            let mut all = true;
            for n in 2..=*max_n {
                let e = perm_extremal_e(n)?;
                let expected = EXTREMAL_FAMILY_TABLE
                    .iter()
                    .find(|&&(m, _, _)| m == n)
                    .map(|&(_, num, den)| BigRational::new(num.into(), den.into()));
                let ok = expected.as_ref().map(|x| x == &e);
                all &= ok != Some(false);
                human.push_str(&format!(
                    "{} n={n:2} e(G_n) = {} (~{})\n",
                    match ok {
                        Some(true) => "PASS",
                        Some(false) => "FAIL",
                        None => "  --",
                    },
                    rat_str(&e),
                    rat_approx(&e),
                ));
                rows.push(json!({
                    "n": n,
                    "computed": rat_str(&e),
                    "expected": expected.map(|x| rat_str(&x)),
                    "match": ok,
                }));
            }
            Ok((human, json!({ "rows": rows, "all_match": all })))
        }
        Command::Scan { max_n } => {
            let mut human = String::new();
            let mut degrees = Vec::new();
            for n in 2..=*max_n {
                let entries = degree_scan(n)?;
                human.push_str(&format!(
                    "degree {n}: {} classes above floor(n/2)+1\n",
                    entries.len()
                ));
                for e in &entries {
                    human.push_str(&format!(
                        "  order {:3} support {} class-size {:3} e = {}/{} (~{})  <{}>\n",
                        e.order,
                        e.support,
                        e.class_size,
                        e.e_num,
                        e.e_den,
                        rat_approx(&e.e()),
                        e.generators
                    ));
                }
                degrees.push(json!({
                    "degree": n,
                    "entries": serde_json::to_value(&entries).unwrap(),
                }));
            }
            Ok((human, json!({ "degrees": degrees })))
        }
        Command::Simulate {
            group,
            trials,
            seed,
        } => {
            let g = build_group(group)?;
            let r = estimate_e(&g, *trials, *seed)?;
            let exact = SubgroupLattice::build(&g)
                .ok()
                .map(|l| expected_wait_exact(&g, &l))
                .transpose()?;
            let mut results = serde_json::to_value(&r).unwrap();
            if let Some(e) = &exact {
                results["exact"] = Value::String(rat_str(e));
                results["deviation_sigmas"] =
                    json!((r.mean - e.to_f64().unwrap_or(f64::NAN)).abs() / r.std_error);
            }
            let human = format!(
                "mean tau over {} trials (seed {}): {:.6} ± {:.6}{}",
                r.trials,
                r.seed,
                r.mean,
                r.std_error,
                exact
                    .map(|e| format!(", exact {} (~{})", rat_str(&e), rat_approx(&e)))
                    .unwrap_or_default()
            );
            Ok((human, results))
        }
        Command::Witness { group } => {
            let g = build_group(group)?;
            let (witness, certificate) = supersoluble_witness(&g, order_cap())?;
            let gens: Vec<String> = witness
                .generators()
                .iter()
                .map(|p| p.cycle_string())
                .collect();
            let human = format!(
                "witness of order {} (degree {}) for {group}; e(G) = {} <= e(H) = {}; cases: {:?}",
                witness.order(),
                witness.degree(),
                certificate.e_group,
                certificate.e_witness,
                certificate
                    .steps
                    .iter()
                    .map(|s| (s.prime, s.case))
                    .collect::<Vec<_>>()
            );
            Ok((
                human,
                json!({
                    "group": group,
                    "witness_order": witness.order(),
                    "witness_degree": witness.degree(),
                    "witness_generators": gens,
                    "certificate": serde_json::to_value(&certificate).unwrap(),
                }),
            ))
        }
    }
}
