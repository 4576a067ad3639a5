//! Command-line interface: scenario runner, singularity resolver, fiber
//! tables and double-cover construction on JSON configurations.

use clap::{Parser, Subcommand};
use k3calc::cyclic_sing::{cartier_index, discrepancies, BrieskornType};
use k3calc::double_cover::{canonical_resolution, BranchData, CoverCase, FiberDecl, PullbackRule};
use k3calc::emit::{emit, from_json, to_dot, to_json, EmitFormat};
use k3calc::fibration::{
    check_euler_sum, check_rank_bound, enumerate_pairs, fiber_data, prepare_fiber,
    rank_contribution,
};
use k3calc::scenarios::{list_scenarios, run_all, run_all_mutations, run_scenario, Report};
use k3calc::{Config, ConfigBuilder, CurveId, InvariantLedger, KodairaType};
use serde_json::json;
use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "k3calc",
    about = "Exact intersection-theory calculus for curve configurations on surfaces",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one named scenario and report every expectation.
    Run {
        scenario: String,
        /// Emit the report as JSON.
        #[arg(long)]
        json: bool,
        /// Write each artifact configuration as a DOT file into this directory.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Run every scenario and every registered mutation.
    VerifyPaper {
        #[arg(long)]
        json: bool,
    },
    /// List the registered scenarios.
    List,
    /// Resolve a cyclic quotient singularity C_{q,q1}: weight chain,
    /// discrepancies and Cartier index.
    Resolve { singularity: String },
    /// Kodaira fiber tables and admissible configurations.
    Fibers {
        #[command(subcommand)]
        cmd: FibersCmd,
    },
    /// Build a branched double cover and report its K3 certificate.
    Cover {
        /// Use the downstairs data of a named scenario.
        #[arg(long, conflicts_with_all = ["input", "branch"])]
        scenario: Option<String>,
        /// Downstairs configuration (JSON file).
        #[arg(long)]
        input: Option<PathBuf>,
        /// Comma-separated branch curve ids.
        #[arg(long)]
        branch: Option<String>,
        /// Declared fiber, repeatable: name:case:id1,id2,...
        /// (case one of alpha, beta, gamma, delta(n), epsilon(s)).
        #[arg(long = "fiber")]
        fibers: Vec<String>,
        /// Pullback annotation, repeatable: id=split or id=nonsplit.
        #[arg(long = "rule")]
        rules: Vec<String>,
    },
    /// Re-emit a configuration in another format.
    Convert {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "dot")]
        format: String,
    },
}

#[derive(Subcommand)]
enum FibersCmd {
    /// Admissible ramification pairs, or Euler-sum / rank checks of a fiber
    /// multiset when types are given.
    Enumerate {
        #[arg(long, default_value_t = 12)]
        euler: i64,
        #[arg(long = "max-rank", default_value_t = 8)]
        max_rank: i64,
        /// Optional fiber types, e.g. I9 I1 I1 I1.
        types: Vec<String>,
    },
    /// Blow a reference fiber up into its branch configuration and emit the
    /// resulting configuration as JSON.
    Prepare { fiber: String },
}

fn traced() -> bool {
    std::env::var("K3CALC_TRACE")
        .map(|v| v == "1")
        .unwrap_or(false)
}

fn print_report(r: &Report, as_json: bool) {
    if as_json {
        println!(
            "{}",
            serde_json::to_string_pretty(r).expect("report serializes")
        );
        return;
    }
    println!(
        "scenario {} [{}]: {}",
        r.scenario,
        r.anchor,
        if r.pass { "PASS" } else { "FAIL" }
    );
    for e in &r.expectations {
        println!(
            "  {} {}: expected {}, got {}",
            if e.pass { "ok  " } else { "FAIL" },
            e.name,
            e.expected,
            e.actual
        );
    }
    for n in &r.notes {
        println!("  note: {n}");
    }
}

fn write_dot_artifacts(r: &Report, dir: &Path) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for (name, cfg) in &r.artifacts {
        let file = dir.join(format!(
            "{}_{}.dot",
            r.scenario.replace(['(', ')', ','], "_"),
            name
        ));
        std::fs::write(&file, to_dot(cfg))?;
        eprintln!("wrote {}", file.display());
    }
    Ok(())
}

fn parse_fiber_arg(s: &str) -> Result<(FiberDecl, CoverCase), String> {
    let mut parts = s.splitn(3, ':');
    let name = parts.next().ok_or("missing fiber name")?.to_string();
    let case: CoverCase = parts
        .next()
        .ok_or("missing case")?
        .parse()
        .map_err(|e| format!("{e}"))?;
    let curves: Vec<CurveId> = parts
        .next()
        .ok_or("missing curve list")?
        .split(',')
        .map(|c| CurveId(c.trim().to_string()))
        .collect();
    Ok((FiberDecl { name, curves }, case))
}

fn run_cover_on_input(
    input: &Path,
    branch: &str,
    fiber_args: &[String],
    rule_args: &[String],
) -> Result<(), String> {
    let text = std::fs::read_to_string(input).map_err(|e| e.to_string())?;
    let cfg: Config = from_json(&text).map_err(|e| e.to_string())?;
    let branch_ids: BTreeSet<CurveId> = branch
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| CurveId(s.trim().to_string()))
        .collect();
    let bd = BranchData::new(cfg, branch_ids).map_err(|e| e.to_string())?;
    let mut fibers = Vec::new();
    for f in fiber_args {
        fibers.push(parse_fiber_arg(f)?);
    }
    let mut rules = BTreeMap::new();
    for r in rule_args {
        let (id, kind) = r.split_once('=').ok_or("rule must be id=split|nonsplit")?;
        let rule = match kind.trim().to_ascii_lowercase().as_str() {
            "split" => PullbackRule::Split,
            "nonsplit" | "non-split" => PullbackRule::NonSplit,
            other => return Err(format!("unknown rule `{other}`")),
        };
        rules.insert(CurveId(id.trim().to_string()), rule);
    }
    let res = canonical_resolution(&bd, &fibers, &rules).map_err(|e| e.to_string())?;
    let out = json!({
        "upstairs": serde_json::from_str::<serde_json::Value>(&to_json(&res.upstairs)).unwrap(),
        "report": {
            "euler_downstairs": res.report.euler_downstairs,
            "euler_branch": res.report.euler_branch,
            "euler_upstairs": res.report.euler_upstairs,
            "rho_downstairs": res.report.rho_downstairs,
            "k3_passes": res.report.k3.passes,
            "adjoint_square_times_four": res.report.k3.adjoint_square_times_four,
            "fixed_locus": { "m": res.report.fixed.m, "genera": res.report.fixed.genera },
            "fiber_types": res.report.fiber_types.iter()
                .map(|(n, t)| json!({"fiber": n, "upstairs_type": t.to_string()}))
                .collect::<Vec<_>>(),
            "enriques": res.report.enriques,
            "notes": res.report.notes,
        },
    });
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::Run {
            scenario,
            json,
            dot,
        } => {
            let r = run_scenario(&scenario).map_err(|e| e.to_string())?;
            print_report(&r, json);
            if traced() {
                for (name, cfg) in &r.artifacts {
                    eprintln!("--- artifact {name} ---");
                    eprintln!("{}", to_json(cfg));
                }
            }
            if let Some(dir) = dot {
                write_dot_artifacts(&r, &dir).map_err(|e| e.to_string())?;
            }
            Ok(if r.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Cmd::VerifyPaper { json } => {
            let reports = run_all();
            let mutations = run_all_mutations();
            let all_pass = reports.iter().all(|r| r.pass) && mutations.iter().all(|m| !m.pass);
            if json {
                let out = json!({
                    "scenarios": reports.iter().map(|r| json!({
                        "name": r.scenario, "anchor": r.anchor, "pass": r.pass,
                    })).collect::<Vec<_>>(),
                    "mutations": mutations.iter().map(|m| json!({
                        "name": m.scenario, "detected": !m.pass,
                    })).collect::<Vec<_>>(),
                    "pass": all_pass,
                });
                println!("{}", serde_json::to_string_pretty(&out).unwrap());
            } else {
                for r in &reports {
                    println!(
                        "{} {} [{}]",
                        if r.pass { "PASS" } else { "FAIL" },
                        r.scenario,
                        r.anchor
                    );
                }
                for m in &mutations {
                    println!(
                        "{} mutation {}",
                        if !m.pass { "DETECTED" } else { "MISSED  " },
                        m.scenario
                    );
                }
                println!(
                    "{}: {} scenarios, {} mutations",
                    if all_pass { "PASS" } else { "FAIL" },
                    reports.len(),
                    mutations.len()
                );
            }
            Ok(if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Cmd::List => {
            for (name, anchor) in list_scenarios() {
                println!("{name} [{anchor}]");
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Resolve { singularity } => {
            let b: BrieskornType = singularity.parse().map_err(|e| format!("{e}"))?;
            let weights = b.weights();
            let mut builder = ConfigBuilder::new(InvariantLedger::neutral());
            for (i, w) in weights.iter().enumerate() {
                builder.add(format!("B{}", i + 1).as_str(), -w, 0);
            }
            for i in 1..weights.len() {
                builder.meet(format!("B{i}").as_str(), format!("B{}", i + 1).as_str());
            }
            let chain = builder.build().map_err(|e| e.to_string())?;
            let d = discrepancies(&chain).map_err(|e| e.to_string())?;
            let index = cartier_index(&chain).map_err(|e| e.to_string())?;
            let out = json!({
                "type": b.to_string(),
                "q": b.q,
                "q1": b.q1,
                "weights": weights,
                "self_intersections": weights.iter().map(|w| -w).collect::<Vec<_>>(),
                "discrepancies": d.by_curve.iter()
                    .map(|(c, a)| json!({"curve": c.to_string(), "value": a.to_string()}))
                    .collect::<Vec<_>>(),
                "cartier_index": index.to_string(),
                "du_val": d.all_zero(),
                "discriminant": k3calc::cyclic_sing::gram_discriminant(&chain).to_string(),
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Fibers { cmd } => match cmd {
            FibersCmd::Enumerate {
                euler,
                max_rank,
                types,
            } => {
                if types.is_empty() {
                    let pairs = enumerate_pairs();
                    let out = json!({
                        "pairs": pairs,
                        "count": pairs.len(),
                        "euler_target": euler,
                        "max_rank": max_rank,
                    });
                    println!("{}", serde_json::to_string_pretty(&out).unwrap());
                    return Ok(ExitCode::SUCCESS);
                }
                let parsed: Result<Vec<KodairaType>, _> =
                    types.iter().map(|t| t.parse::<KodairaType>()).collect();
                let parsed = parsed.map_err(|e| e.to_string())?;
                let sum: i64 = parsed.iter().map(|t| fiber_data(*t).0.euler).sum();
                let rank = rank_contribution(&parsed);
                let ok = check_euler_sum(&parsed) && check_rank_bound(&parsed);
                let out = json!({
                    "types": parsed.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                    "euler_sum": sum,
                    "euler_ok": sum == euler,
                    "rank_contribution": rank,
                    "rank_ok": rank <= max_rank,
                    "admissible": ok,
                });
                println!("{}", serde_json::to_string_pretty(&out).unwrap());
                Ok(if ok {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::FAILURE
                })
            }
            FibersCmd::Prepare { fiber } => {
                let t: KodairaType = fiber.parse().map_err(|e: k3calc::K3Error| e.to_string())?;
                let p = prepare_fiber(t).map_err(|e| e.to_string())?;
                if traced() {
                    for (i, step) in p.trace.iter().enumerate() {
                        eprintln!("--- after blow-up {} ---", i + 1);
                        eprintln!("{}", to_json(step));
                    }
                }
                eprintln!(
                    "prepared {t} with {} blow-ups into case {}; branch curves: {}",
                    p.blow_ups,
                    p.case,
                    p.branch_curves
                        .iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                );
                println!("{}", to_json(&p.config));
                Ok(ExitCode::SUCCESS)
            }
        },
        Cmd::Cover {
            scenario,
            input,
            branch,
            fibers,
            rules,
        } => {
            if let Some(name) = scenario {
                let r = run_scenario(&name).map_err(|e| e.to_string())?;
                for (art, cfg) in &r.artifacts {
                    if art == "upstairs" {
                        println!("{}", to_json(cfg));
                    }
                }
                print_report(&r, false);
                return Ok(if r.pass {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::FAILURE
                });
            }
            let input = input.ok_or("cover needs --scenario or --input")?;
            let branch = branch.unwrap_or_default();
            run_cover_on_input(&input, &branch, &fibers, &rules)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Convert { input, format } => {
            let text = std::fs::read_to_string(&input).map_err(|e| e.to_string())?;
            let cfg = from_json(&text).map_err(|e| e.to_string())?;
            let f: EmitFormat = format.parse().map_err(|e: k3calc::K3Error| e.to_string())?;
            println!("{}", emit(&cfg, f));
            Ok(ExitCode::SUCCESS)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fiber_arg_parses() {
        let (decl, case) = parse_fiber_arg("F1:delta(2):D1,H1,D2,H2").unwrap();
        assert_eq!(decl.name, "F1");
        assert_eq!(case, CoverCase::Delta(2));
        assert_eq!(decl.curves.len(), 4);
    }

    #[test]
    fn resolve_pipeline_matches_chain_contraction() {
        use k3calc::birational::contract_chain;
        let b: BrieskornType = "C_{8,3}".parse().unwrap();
        assert_eq!(b.weights(), vec![3, 3]);
        let mut builder = ConfigBuilder::new(InvariantLedger::neutral());
        builder.add("B1", -3, 0).add("B2", -3, 0).meet("B1", "B2");
        let chain = builder.build().unwrap();
        let ids: Vec<CurveId> = vec!["B1".into(), "B2".into()];
        let c = contract_chain(&chain, &ids).unwrap();
        assert_eq!(c.outcome.to_string(), "C_{8,3}");
    }
}
