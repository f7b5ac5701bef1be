//! `msd`: boundary strata, smoothness and Betti numbers of genus-zero
//! multiscale differential moduli spaces from the command line.

mod dot;

use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use msd_core::cherry::{classify_smooth_full_with, classify_smooth_with, smooth_scan};
use msd_core::cohomology::{
    build_blowup_plan, h2_crosscheck_with, poincare_m0bar_bounded, poincare_multiscale_with, TieBreak,
    TowerOptions,
};
use msd_core::geometry::{census_with, intersection_profile_in, StrataIndex};
use msd_core::lattice::{ghost_group_order, prong_orbit_count, twist_data};
use msd_core::strata::{enumerate_strata_with, Options};
use msd_core::{EnhancedLevelGraph, Error, Result, Signature};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "msd", version, about = "Boundary strata of genus-zero multiscale differentials")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Largest number of marked points for exhaustive enumeration.
    #[arg(long, default_value_t = msd_core::tree::DEFAULT_MAX_N, global = true)]
    max_n: usize,
    /// Seed for the seeded tie-break of the blowup order.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Run batch loops on the calling thread only.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
    Dot,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum TieBreakArg {
    Canonical,
    Reverse,
    Seeded,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Stratum census, or the strata themselves with --codim / --exceptional / --all.
    Strata {
        #[arg(long, allow_hyphen_values = true)]
        mu: Signature,
        #[arg(long)]
        codim: Option<usize>,
        /// Only exceptional divisors.
        #[arg(long)]
        exceptional: bool,
        /// List every stratum.
        #[arg(long)]
        all: bool,
    },
    /// Smoothness verdict with witness and family tag.
    Smooth {
        #[arg(long, allow_hyphen_values = true)]
        mu: Signature,
        /// Decide by the full ghost scan only.
        #[arg(long)]
        full: bool,
    },
    /// Smoothness of every signature with entries in a box, one per multiset.
    SmoothScan {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true, default_value_t = -4)]
        min: i64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 4)]
        max: i64,
        /// Print only the smooth signatures.
        #[arg(long)]
        smooth_only: bool,
    },
    /// Ghost-group orders of strata (non-trivial ones unless --all).
    Ghost {
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<Signature>,
        #[arg(long)]
        all: bool,
        /// Read one graph as JSON from standard input instead.
        #[arg(long)]
        stdin: bool,
    },
    /// Prong-matching orbit counts of strata.
    Prongs {
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<Signature>,
        /// Read one graph as JSON from standard input instead.
        #[arg(long)]
        stdin: bool,
    },
    /// Resolve an intersection of divisors read as a JSON array of graphs from standard input.
    Profile {
        #[arg(long, allow_hyphen_values = true)]
        mu: Signature,
    },
    /// Betti numbers of the smooth coarse space via the blowup tower.
    Poincare {
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<Signature>,
        /// Betti numbers of the moduli of n-pointed rational curves instead.
        #[arg(long)]
        m0n: Option<usize>,
        #[arg(long)]
        experimental: bool,
        #[arg(long, value_enum, default_value_t = TieBreakArg::Canonical)]
        tie_break: TieBreakArg,
        /// Print the blowup plan rather than the polynomial.
        #[arg(long)]
        plan: bool,
        /// Print the second Betti number cross-check.
        #[arg(long)]
        h2: bool,
    },
    /// Render a graph read as JSON from standard input in DOT (always DOT).
    Dot,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn read_stdin() -> Result<String> {
    let mut s = String::new();
    std::io::stdin()
        .read_to_string(&mut s)
        .map_err(|e| Error::Precondition(format!("cannot read standard input: {e}")))?;
    Ok(s)
}

fn to_line(v: &Value) -> String {
    format!("{}\n", serde_json::to_string(v).expect("json"))
}

fn graphs_out(graphs: &[EnhancedLevelGraph], format: Format) -> String {
    match format {
        Format::Json => to_line(&serde_json::to_value(graphs).expect("json")),
        Format::Table => graphs
            .iter()
            .map(|g| format!("codim {}  {}\n", g.codim(), g))
            .collect(),
        Format::Dot => graphs
            .iter()
            .enumerate()
            .map(|(i, g)| dot::render(g, &format!("stratum{i}")))
            .collect(),
    }
}

fn run(cli: &Cli) -> Result<String> {
    let opts = Options {
        max_n: cli.max_n,
        parallelism: if cli.sequential {
            msd_core::par::Parallelism::Sequential
        } else {
            msd_core::par::Parallelism::default()
        },
    };
    let fmt = cli.format;
    match &cli.command {
        Command::Strata { mu, codim, exceptional, all } => {
            if *exceptional {
                let c = census_with(mu, &opts)?;
                return Ok(graphs_out(&c.exceptional_divisors, fmt));
            }
            if codim.is_some() || *all {
                return Ok(graphs_out(&enumerate_strata_with(mu, *codim, &opts)?, fmt));
            }
            let c = census_with(mu, &opts)?;
            Ok(match fmt {
                Format::Table => {
                    let mut s: String = c.counts.iter().map(|(k, v)| format!("codim {k}: {v}\n")).collect();
                    s.push_str(&format!("exceptional divisors: {}\n", c.exceptional_divisors.len()));
                    s
                }
                _ => to_line(&serde_json::to_value(&c).expect("json")),
            })
        }
        Command::Smooth { mu, full } => {
            let v = if *full { classify_smooth_full_with(mu, &opts)? } else { classify_smooth_with(mu, &opts)? };
            Ok(match fmt {
                Format::Table => format!(
                    "{mu}: {}{}\n",
                    if v.smooth { "smooth" } else { "singular" },
                    v.family.as_ref().map(|f| format!(" {f}")).unwrap_or_default()
                ),
                _ => to_line(&serde_json::to_value(&v).expect("json")),
            })
        }
        Command::SmoothScan { n, min, max, smooth_only } => {
            let rows = smooth_scan(*n, *min, *max, &opts)?;
            let rows: Vec<_> = rows.into_iter().filter(|(_, v)| v.smooth || !smooth_only).collect();
            Ok(match fmt {
                Format::Table => rows
                    .iter()
                    .map(|(mu, v)| {
                        format!(
                            "{mu} {}{}\n",
                            if v.smooth { "smooth" } else { "singular" },
                            v.family.as_ref().map(|f| format!(" {f}")).unwrap_or_default()
                        )
                    })
                    .collect(),
                _ => {
                    let arr: Vec<Value> = rows
                        .iter()
                        .map(|(mu, v)| {
                            let mut o = serde_json::to_value(v).expect("json");
                            o.as_object_mut().unwrap().insert("mu".into(), json!(mu.orders()));
                            o
                        })
                        .collect();
                    to_line(&Value::Array(arr))
                }
            })
        }
        Command::Ghost { mu, all, stdin } => {
            let graphs = input_graphs(mu.as_ref(), *stdin, &opts)?;
            let mut rows = Vec::new();
            let mut lines = String::new();
            for g in graphs.iter().filter(|g| g.num_levels_below() >= 1) {
                let r = ghost_group_order(&twist_data(g)?);
                if *all || *stdin || !r.is_trivial() {
                    lines.push_str(&format!("{}  {}\n", r.ghost_order, g));
                    let mut row = serde_json::to_value(&r).expect("json");
                    row.as_object_mut().unwrap().insert("graph".into(), serde_json::to_value(g).expect("json"));
                    rows.push(row);
                }
            }
            Ok(match fmt {
                Format::Table => lines,
                _ => to_line(&Value::Array(rows)),
            })
        }
        Command::Prongs { mu, stdin } => {
            let graphs = input_graphs(mu.as_ref(), *stdin, &opts)?;
            let mut rows = Vec::new();
            let mut lines = String::new();
            for g in graphs.iter().filter(|g| g.num_levels_below() >= 1) {
                let orbits = prong_orbit_count(&twist_data(g)?);
                lines.push_str(&format!("{orbits}  {g}\n"));
                let orbits: Value = match u64::try_from(&orbits) {
                    Ok(v) => json!(v),
                    Err(_) => json!(orbits.to_string()),
                };
                rows.push(json!({"graph": g, "orbits": orbits}));
            }
            Ok(match fmt {
                Format::Table => lines,
                _ => to_line(&Value::Array(rows)),
            })
        }
        Command::Profile { mu } => {
            let divisors: Vec<EnhancedLevelGraph> = serde_json::from_str(&read_stdin()?)?;
            let index = StrataIndex::build(mu, &opts)?;
            let report = intersection_profile_in(&index, &divisors)?;
            Ok(match (fmt, report) {
                (Format::Table, None) => "empty intersection\n".to_string(),
                (Format::Table, Some(r)) => {
                    let mut s = String::from("profile:\n");
                    for (i, d) in r.profile.iter().enumerate() {
                        s.push_str(&format!("  passage {}: {d}\n", i + 1));
                    }
                    for d in &r.horizontal {
                        s.push_str(&format!("  horizontal: {d}\n"));
                    }
                    s.push_str("realizations:\n");
                    for g in &r.realizations {
                        s.push_str(&format!("  {g}\n"));
                    }
                    s
                }
                (_, r) => to_line(&serde_json::to_value(&r).expect("json")),
            })
        }
        Command::Poincare { mu, m0n, experimental, tie_break, plan, h2 } => {
            let topts = TowerOptions {
                tie_break: match tie_break {
                    TieBreakArg::Canonical => TieBreak::Canonical,
                    TieBreakArg::Reverse => TieBreak::ReverseCanonical,
                    TieBreakArg::Seeded => TieBreak::Seeded(cli.seed),
                },
                experimental: *experimental,
                limits: opts,
            };
            let p = match (mu, m0n) {
                (_, Some(n)) => {
                    if *n < 3 {
                        return Err(Error::Precondition(format!("need n >= 3, got {n}")));
                    }
                    poincare_m0bar_bounded(*n, cli.max_n)?
                }
                (Some(mu), None) => {
                    if *plan {
                        let plan = build_blowup_plan(mu, &topts)?;
                        return Ok(match fmt {
                            Format::Table => plan
                                .steps
                                .iter()
                                .enumerate()
                                .map(|(i, s)| format!("{}: codim {}  {}\n", i + 1, s.codim, s.divisor))
                                .collect(),
                            _ => to_line(&serde_json::to_value(&plan).expect("json")),
                        });
                    }
                    if *h2 {
                        let (expected, computed) = h2_crosscheck_with(mu, &topts)?;
                        return Ok(to_line(&json!({"expected": expected, "computed": computed})));
                    }
                    poincare_multiscale_with(mu, &topts)?
                }
                (None, None) => return Err(Error::Precondition("give --mu or --m0n".into())),
            };
            Ok(match fmt {
                Format::Table => format!("{p}\n"),
                _ => to_line(&serde_json::to_value(&p).expect("json")),
            })
        }
        Command::Dot => {
            let g = EnhancedLevelGraph::from_json_str(&read_stdin()?)?;
            Ok(dot::render(&g, "stratum"))
        }
    }
}

fn input_graphs(mu: Option<&Signature>, stdin: bool, opts: &Options) -> Result<Vec<EnhancedLevelGraph>> {
    match (mu, stdin) {
        (_, true) => Ok(vec![EnhancedLevelGraph::from_json_str(&read_stdin()?)?]),
        (Some(mu), false) => enumerate_strata_with(mu, None, opts),
        (None, false) => Err(Error::Precondition("give --mu or --stdin".into())),
    }
}
