//! `treepack`: packing numbers, generalized connectivities, constructions
//! and census checks for small digraphs.
//!
//! Exit status: 0 success or property true, 1 property false, 2 usage or
//! input error.

mod report;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;
use treepack::constructions::{
    build_deletion_family, build_h1, build_h2, layered_cycle_digraph, tillson_decomposition,
    CyclePartition, JoinSpec,
};
use treepack::extremal::{
    degree_profile_scan, verify_characterization, write_records, Census, CharacterizationCase,
};
use treepack::format::{parse, to_text};
use treepack::{connectivity, is_min_gen, max_packing, Digraph, Error, Mode, SteinerInstance};

#[derive(Parser)]
#[command(
    name = "treepack",
    version,
    about = "Directed Steiner tree packing toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ModeFlag {
    /// Internally disjoint trees
    #[arg(long)]
    kappa: bool,
    /// Arc-disjoint trees
    #[arg(long)]
    lambda: bool,
}

impl ModeFlag {
    fn mode(&self) -> Mode {
        if self.kappa {
            Mode::Vertex
        } else {
            Mode::Arc
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// κ_k or λ_k of a digraph; prints the value
    Compute {
        #[command(flatten)]
        mode: ModeFlag,
        #[arg(short)]
        k: usize,
        /// Digraph file; stdin when absent or `-`
        file: Option<PathBuf>,
        /// Print argmin and witness trees
        #[arg(long)]
        report: bool,
        #[arg(long)]
        json: bool,
        /// Lift the order limit
        #[arg(long)]
        force: bool,
    },
    /// Maximum packing for one terminal set and root
    Pack {
        #[command(flatten)]
        mode: ModeFlag,
        /// Terminal set, comma separated
        #[arg(short = 'S', value_delimiter = ',', required = true)]
        terminals: Vec<usize>,
        #[arg(short)]
        r: usize,
        file: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Minimal generalized (k, l)-connectivity; exit 0 iff it holds
    CheckMinimal {
        #[command(flatten)]
        mode: ModeFlag,
        #[arg(short)]
        k: usize,
        #[arg(short)]
        l: usize,
        file: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Builds a digraph and prints it in the text format
    Construct {
        #[command(subcommand)]
        which: Construction,
    },
    /// Hamiltonian decompositions
    Decompose {
        #[command(subcommand)]
        which: Decomposition,
    },
    /// Extremal sizes of every (mode, k, l) cell of the census of order n
    Extremal {
        #[arg(short)]
        n: usize,
        /// Directory for record lines and witness files
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-table time budget in seconds; tables over budget are SKIPPED
        #[arg(long)]
        budget: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Checks the characterization cases against the census of order n
    Verify {
        #[arg(short)]
        n: usize,
        /// One of a, b, c, d; all when absent
        #[arg(long)]
        case: Option<CharacterizationCase>,
        /// Restrict to one k
        #[arg(short)]
        k: Option<usize>,
        /// Also scan degree profiles of every minimal class
        #[arg(long)]
        profiles: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum Construction {
    /// Complete digraph minus vertex-disjoint cycles
    DFamily {
        #[arg(short)]
        n: usize,
        /// Cycles as `0,1,2/3,4`
        #[arg(long)]
        cycles: String,
        /// The vertex left off every cycle
        #[arg(long)]
        uncovered: Option<usize>,
    },
    Complete {
        #[arg(short)]
        n: usize,
    },
    /// Union of l arc-disjoint Hamiltonian dicycles
    Layered {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        l: usize,
    },
    /// Symmetric join of K_l with n - l independent vertices
    H1 {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        l: usize,
    },
    /// Complete bipartite digraph K_{l, n-l}
    H2 {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        l: usize,
    },
}

#[derive(Subcommand)]
enum Decomposition {
    /// n - 1 Hamiltonian dicycles partitioning the complete digraph
    Tillson {
        #[arg(short)]
        n: usize,
    },
}

enum Outcome {
    Done(String),
    Property(bool, String),
}

fn read_digraph(file: &Option<PathBuf>) -> Result<Digraph, Error> {
    let text = match file {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?
        }
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Error::Io(e.to_string()))?;
            s
        }
    };
    parse(&text)
}

fn json_line(v: &Value) -> String {
    format!("{v}\n")
}

fn parse_cycles(spec: &str) -> Result<Vec<Vec<usize>>, Error> {
    spec.split('/')
        .map(|part| {
            part.split(',')
                .map(|t| {
                    t.trim().parse::<usize>().map_err(|_| {
                        Error::InvalidPartition(format!("bad vertex {t:?} in {spec:?}"))
                    })
                })
                .collect()
        })
        .collect()
}

fn case_k_range(n: usize, case: CharacterizationCase) -> Vec<usize> {
    match case {
        CharacterizationCase::D => {
            let mut ks = vec![2, n - 1, n];
            ks.dedup();
            ks
        }
        _ => (2..=n).collect(),
    }
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    match cli.command {
        Command::Compute {
            mode,
            k,
            file,
            report: verbose,
            json,
            force,
        } => {
            let d = read_digraph(&file)?;
            let r = if force {
                treepack::connectivity::connectivity_forced(&d, k, mode.mode())?
            } else {
                connectivity(&d, k, mode.mode())?
            };
            Ok(Outcome::Done(if json {
                json_line(&report::connectivity_json(&r))
            } else if verbose {
                report::connectivity_text(&r)
            } else {
                format!("{}\n", r.value)
            }))
        }
        Command::Pack {
            mode,
            terminals,
            r,
            file,
            json,
        } => {
            let d = read_digraph(&file)?;
            let inst = SteinerInstance::new(&terminals, r)?;
            let (_, p) = max_packing(&d, &inst, mode.mode())?;
            Ok(Outcome::Done(if json {
                json_line(&report::packing_json(&p))
            } else {
                report::packing_text(&p)
            }))
        }
        Command::CheckMinimal {
            mode,
            k,
            l,
            file,
            json,
        } => {
            let d = read_digraph(&file)?;
            let c = is_min_gen(&d, k, l, mode.mode())?;
            let text = if json {
                json_line(&report::certificate_json(&c))
            } else {
                report::certificate_text(&c)
            };
            Ok(Outcome::Property(c.holds, text))
        }
        Command::Construct { which } => {
            let d = match which {
                Construction::DFamily {
                    n,
                    cycles,
                    uncovered,
                } => build_deletion_family(&CyclePartition::new(
                    n,
                    parse_cycles(&cycles)?,
                    uncovered,
                )?)?,
                Construction::Complete { n } => Digraph::complete(n)?,
                Construction::Layered { n, l } => layered_cycle_digraph(n, l)?,
                Construction::H1 { n, l } => build_h1(&JoinSpec::new(n, l)?)?,
                Construction::H2 { n, l } => build_h2(&JoinSpec::new(n, l)?)?,
            };
            Ok(Outcome::Done(to_text(&d)))
        }
        Command::Decompose {
            which: Decomposition::Tillson { n },
        } => {
            let cycles = tillson_decomposition(n)?;
            Ok(Outcome::Done(
                cycles
                    .iter()
                    .map(|c| {
                        let vs: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                        format!("{}\n", vs.join(" "))
                    })
                    .collect(),
            ))
        }
        Command::Extremal {
            n,
            out,
            budget,
            json,
        } => {
            let census = Census::build(n, budget.map(Duration::from_secs_f64))?;
            let mut outcomes = Vec::new();
            for mode in Mode::BOTH {
                for k in 2..=n {
                    for l in 1..n {
                        outcomes.push(census.record(k, l, mode)?);
                    }
                }
            }
            if let Some(dir) = out {
                write_records(&dir, &outcomes)?;
            }
            Ok(Outcome::Done(
                outcomes
                    .iter()
                    .map(|o| {
                        if json {
                            json_line(&report::cell_json(o))
                        } else {
                            format!("{o}\n")
                        }
                    })
                    .collect(),
            ))
        }
        Command::Verify {
            n,
            case,
            k,
            profiles,
            json,
        } => {
            if n < 3 {
                return Err(Error::OutOfRange(format!("verify needs n >= 3, got {n}")));
            }
            let census = Census::build(n, None)?;
            let cases = match case {
                Some(c) => vec![c],
                None => vec![
                    CharacterizationCase::A,
                    CharacterizationCase::B,
                    CharacterizationCase::C,
                    CharacterizationCase::D,
                ],
            };
            let mut all_pass = true;
            let mut text = String::new();
            for c in cases {
                let ks = match k {
                    Some(k) => vec![k],
                    None => case_k_range(n, c),
                };
                for k in ks {
                    let r = verify_characterization(&census, k, c)?;
                    all_pass &= r.pass;
                    text.push_str(&if json {
                        json_line(&report::characterization_json(&r))
                    } else {
                        report::characterization_text(&r)
                    });
                }
            }
            if profiles {
                for mode in Mode::BOTH {
                    for k in 2..=n {
                        for l in 1..n {
                            let Some(scan) = degree_profile_scan(&census, k, l, mode)? else {
                                continue;
                            };
                            if json {
                                let rows: Vec<Value> = scan
                                    .iter()
                                    .map(|(c, p)| report::profile_json(c, p, l))
                                    .collect();
                                text.push_str(&json_line(&serde_json::json!({
                                    "mode": mode.name(), "n": n, "k": k, "l": l, "profiles": rows,
                                })));
                            } else {
                                let holds = |i: usize| scan.iter().all(|(_, p)| p.checks(l)[i]);
                                text.push_str(&format!(
                                    "profile {mode} n={n} k={k} l={l} classes={} out>0:{} in>0:{} out>l:{} in>l:{}\n",
                                    scan.len(),
                                    holds(0),
                                    holds(1),
                                    holds(2),
                                    holds(3)
                                ));
                            }
                        }
                    }
                }
            }
            Ok(Outcome::Property(all_pass, text))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Done(s)) => {
            print!("{s}");
            ExitCode::SUCCESS
        }
        Ok(Outcome::Property(ok, s)) => {
            print!("{s}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
