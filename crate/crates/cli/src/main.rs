//! `energy`: decide reachability and Büchi acceptance for energy automata.
//!
//! Exit status: 0 on TRUE or a valid file, 1 on FALSE, 2 on any error,
//! 3 when the oracle gives up.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use energy_core::json::{matrix_to_json, predicate_to_json};
use energy_core::oracle::default_cap;
use energy_core::value::{format_rational, parse_rational};
use energy_core::{
    coverable, iterate_buchi, iterate_reach, parse_automaton, Analysis, AutomatonFile, BuchiMethod, EnergyAutomaton,
    MultiDimAutomaton, Rational, Verdict,
};
use serde_json::json;

#[derive(Parser)]
#[command(name = "energy", version, about = "Reachability and Büchi acceptance for energy automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate an automaton file.
    Check {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print the closure T* (entry `j -> i` is the best energy from j to i).
    Closure {
        file: PathBuf,
        /// Also print the omega vector for the accepting states.
        #[arg(long)]
        omega: bool,
        #[arg(long)]
        accepting: Option<String>,
        /// Print the closure as JSON.
        #[arg(long, alias = "json")]
        dump_json: bool,
    },
    /// Can an accepting state be reached?
    Reach(Query),
    /// Is there a run visiting an accepting state infinitely often?
    Buchi {
        #[command(flatten)]
        query: Query,
        #[arg(long, value_enum, default_value_t = Method::Cycle)]
        method: Method,
    },
    /// Run the value-iteration oracle and print a witness path.
    Simulate {
        #[command(flatten)]
        query: Query,
        /// Decide Büchi acceptance instead of reachability.
        #[arg(long)]
        buchi: bool,
        /// Round limit; defaults to 16·n·(breakpoints + 1).
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Control-state reachability for integer multi-dimensional automata.
    Cover {
        file: PathBuf,
        #[arg(long)]
        from: Option<String>,
        /// Comma-separated natural energies, one per dimension.
        #[arg(long)]
        energy: String,
        #[arg(long)]
        accepting: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct Query {
    file: PathBuf,
    /// Initial state; defaults to the file's `initial:`.
    #[arg(long)]
    from: Option<String>,
    /// Initial energy, `p` or `p/q`.
    #[arg(long)]
    energy: String,
    /// Comma-separated accepting states, replacing the file's `accepting:`.
    #[arg(long)]
    accepting: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Cycle,
    Omega,
}

type Fallible<T> = Result<T, String>;

fn read(file: &PathBuf) -> Fallible<AutomatonFile> {
    let text = std::fs::read_to_string(file).map_err(|e| format!("{}: {e}", file.display()))?;
    parse_automaton(&text).map_err(|e| format!("{}:{e}", file.display()))
}

fn single(file: &PathBuf) -> Fallible<EnergyAutomaton> {
    read(file)?
        .into_single()
        .ok_or_else(|| format!("{}: expected a one-dimensional automaton", file.display()))
}

/// A state by name, or by 1-based index when no state has that name.
fn state(names: &[String], id: &str) -> Fallible<usize> {
    if let Some(i) = names.iter().position(|s| s == id) {
        return Ok(i);
    }
    match id.parse::<usize>() {
        Ok(k) if (1..=names.len()).contains(&k) => Ok(k - 1),
        _ => Err(format!("unknown state `{id}`")),
    }
}

fn states(names: &[String], list: &str) -> Fallible<Vec<usize>> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty()).map(|s| state(names, s)).collect()
}

struct Resolved {
    automaton: EnergyAutomaton,
    from: usize,
    energy: Rational,
    accepting: Vec<usize>,
}

fn resolve(q: &Query) -> Fallible<Resolved> {
    let automaton = single(&q.file)?;
    let from = match &q.from {
        Some(id) => state(&automaton.names, id)?,
        None => automaton.initial,
    };
    let energy = parse_rational(&q.energy).map_err(|e| format!("--energy: {e}"))?;
    if energy < Rational::from_integer(0.into()) {
        return Err(format!("--energy: {} is negative", q.energy));
    }
    let accepting = match &q.accepting {
        Some(list) => states(&automaton.names, list)?,
        None => automaton.accepting.clone(),
    };
    Ok(Resolved { automaton, from, energy, accepting })
}

fn verdict_code(v: bool) -> ExitCode {
    ExitCode::from(if v { 0 } else { 1 })
}

fn verdict_text(v: bool) -> &'static str {
    if v {
        "TRUE"
    } else {
        "FALSE"
    }
}

fn names_of(names: &[String], ids: &[usize]) -> Vec<String> {
    ids.iter().map(|&i| names[i].clone()).collect()
}

fn query_json(kind: &str, r: &Resolved) -> serde_json::Value {
    json!({
        "query": kind,
        "from": r.automaton.names[r.from],
        "energy": format_rational(&r.energy),
        "accepting": names_of(&r.automaton.names, &r.accepting),
    })
}

fn check(file: &PathBuf, as_json: bool) -> Fallible<ExitCode> {
    let (kind, dim, n, m) = match read(file)? {
        AutomatonFile::Single(a) => ("single", 1, a.state_count(), a.transitions.len()),
        AutomatonFile::Multi(a) => {
            if a.dim > 1 {
                a.validate().map_err(|e| format!("{}: {e}", file.display()))?;
            }
            ("multi", a.dim, a.state_count(), a.transitions.len())
        }
    };
    if as_json {
        println!("{}", json!({"valid": true, "kind": kind, "dim": dim, "states": n, "edges": m}));
    } else {
        println!("valid: {n} states, {m} edges, dimension {dim}");
    }
    Ok(ExitCode::SUCCESS)
}

fn closure(file: &PathBuf, omega: bool, accepting: Option<&str>, dump_json: bool) -> Fallible<ExitCode> {
    let a = single(file)?;
    let acc = match accepting {
        Some(list) => states(&a.names, list)?,
        None => a.accepting.clone(),
    };
    let an = Analysis::new(&a, &acc).map_err(|e| e.to_string())?;
    let t = an.closure();
    if dump_json {
        let mut out = json!({ "states": a.names, "closure": matrix_to_json(t) });
        if omega {
            out["accepting"] = json!(names_of(&a.names, &acc));
            out["omega"] = an.omega_vector().iter().map(predicate_to_json).collect();
        }
        println!("{}", serde_json::to_string_pretty(&out).expect("plain data"));
        return Ok(ExitCode::SUCCESS);
    }
    for j in 0..a.state_count() {
        for i in 0..a.state_count() {
            let f = t.get(i, j);
            if !f.is_bottom() {
                println!("{} -> {} : {f}", a.names[j], a.names[i]);
            }
        }
    }
    if omega {
        for (name, w) in a.names.iter().zip(an.omega_vector()) {
            println!("omega {name} : {w}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn reach(q: &Query) -> Fallible<ExitCode> {
    let r = resolve(q)?;
    let an = Analysis::new(&r.automaton, &r.accepting).map_err(|e| e.to_string())?;
    let v = an.reach(r.from, &r.energy).map_err(|e| e.to_string())?;
    if q.json {
        let mut out = query_json("reach", &r);
        out["verdict"] = json!(verdict_text(v));
        println!("{out}");
    } else {
        println!("{}", verdict_text(v));
    }
    Ok(verdict_code(v))
}

fn buchi(q: &Query, method: Method) -> Fallible<ExitCode> {
    let r = resolve(q)?;
    let an = Analysis::new(&r.automaton, &r.accepting).map_err(|e| e.to_string())?;
    let method = match method {
        Method::Cycle => BuchiMethod::Cycle,
        Method::Omega => BuchiMethod::Omega,
    };
    let ans = an.buchi(method, r.from, &r.energy).map_err(|e| e.to_string())?;
    let witness = ans.witness.map(|j| r.automaton.names[j].clone());
    if q.json {
        let mut out = query_json("buchi", &r);
        out["verdict"] = json!(verdict_text(ans.accepted));
        out["witness"] = json!(witness);
        println!("{out}");
    } else {
        println!("{}", verdict_text(ans.accepted));
        if let Some(w) = witness {
            println!("witness: {w}");
        }
    }
    Ok(verdict_code(ans.accepted))
}

fn simulate(q: &Query, buchi: bool, cap: Option<usize>) -> Fallible<ExitCode> {
    let r = resolve(q)?;
    let cap = cap.unwrap_or_else(|| default_cap(&r.automaton));
    let res = if buchi {
        iterate_buchi(&r.automaton, r.from, &r.accepting, &r.energy, cap)
    } else {
        iterate_reach(&r.automaton, r.from, &r.accepting, &r.energy, cap)
    };
    let names = &r.automaton.names;
    let steps: Vec<(String, String)> = res
        .witness
        .iter()
        .flat_map(|w| &w.steps)
        .map(|(s, e)| (names[*s].clone(), e.to_string()))
        .collect();
    let verdict = serde_json::to_value(res.verdict).expect("plain data");
    if q.json {
        let mut out = query_json(if buchi { "simulate-buchi" } else { "simulate" }, &r);
        out["verdict"] = verdict;
        out["rounds"] = json!(res.rounds);
        out["cap"] = json!(cap);
        out["witness"] = if res.witness.is_some() {
            steps.iter().map(|(s, e)| json!({"state": s, "energy": e})).collect()
        } else {
            serde_json::Value::Null
        };
        out["acceptingState"] = json!(res.accepting_state.map(|j| names[j].clone()));
        println!("{out}");
    } else {
        println!("{} after {} rounds", verdict.as_str().unwrap_or_default(), res.rounds);
        if !steps.is_empty() {
            let path: Vec<String> = steps.iter().map(|(s, e)| format!("{s} [{e}]")).collect();
            println!("witness: {}", path.join(" -> "));
        }
        if let Some(j) = res.accepting_state {
            println!("{}: {}", if buchi { "cycle through" } else { "reached" }, names[j]);
        }
    }
    Ok(match res.verdict {
        Verdict::True => ExitCode::SUCCESS,
        Verdict::False => ExitCode::from(1),
        Verdict::Inconclusive => ExitCode::from(3),
    })
}

fn cover(file: &PathBuf, from: Option<&str>, energy: &str, accepting: Option<&str>, as_json: bool) -> Fallible<ExitCode> {
    let mut a: MultiDimAutomaton = read(file)?.into_multi();
    let s0 = match from {
        Some(id) => state(&a.names, id)?,
        None => a.initial,
    };
    if let Some(list) = accepting {
        a.accepting = states(&a.names, list)?;
    }
    let x0: Vec<u64> = energy
        .split(',')
        .map(|s| s.trim().parse::<u64>().map_err(|_| format!("--energy: `{s}` is not a natural number")))
        .collect::<Fallible<_>>()?;
    let res = coverable(&a, s0, &x0).map_err(|e| e.to_string())?;
    if as_json {
        let basis: Vec<_> = res.basis.iter().map(|(s, x)| json!({"state": a.names[*s], "energy": x})).collect();
        println!(
            "{}",
            json!({
                "query": "cover",
                "from": a.names[s0],
                "energy": x0,
                "accepting": names_of(&a.names, &a.accepting),
                "verdict": verdict_text(res.covered),
                "basis": basis,
            })
        );
    } else {
        println!("{}", verdict_text(res.covered));
        println!("basis:");
        for (s, x) in &res.basis {
            let v: Vec<String> = x.iter().map(u64::to_string).collect();
            println!("  {} ({})", a.names[*s], v.join(", "));
        }
    }
    Ok(verdict_code(res.covered))
}

fn run(cli: Cli) -> Fallible<ExitCode> {
    match cli.command {
        Command::Check { file, json } => check(&file, json),
        Command::Closure { file, omega, accepting, dump_json } => closure(&file, omega, accepting.as_deref(), dump_json),
        Command::Reach(q) => reach(&q),
        Command::Buchi { query, method } => buchi(&query, method),
        Command::Simulate { query, buchi, cap } => simulate(&query, buchi, cap),
        Command::Cover { file, from, energy, accepting, json } => {
            cover(&file, from.as_deref(), &energy, accepting.as_deref(), json)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
