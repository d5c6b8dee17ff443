use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use linext::counting::{count, CountOptions, Strategy};
use linext::enumeration::enumerate_backtracking;
use linext::error::Error;
use linext::io::{
    network_doc, one_based_blocks, parse_network_spec, parse_partition, parse_poset,
    parse_reverse_set, reverse_set_doc, CountReportDoc,
};
use linext::modular::{
    find_inconsistent_pairs, find_modular_partition, is_graph_partition, is_poset_partition,
    skeleton_of, the_ones_resolution, JoinedStructure, Resolution,
};
use linext::netbuild::{assemble_network, verify_network, SearchLimits};
use linext::tournament::{three_way_counts, EquivLimits};

#[derive(Parser)]
#[command(name = "linext", version, about = "Count and enumerate linear extensions of finite posets")]
struct Cli {
    /// Worker threads for pivot sums and reverse-set searches (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Auto,
    Path,
    Necklace,
    Tree,
    Joined,
    Star,
    Modular,
    Dp,
    Brute,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Auto => Strategy::Auto,
            StrategyArg::Path => Strategy::Path,
            StrategyArg::Necklace => Strategy::Necklace,
            StrategyArg::Tree => Strategy::Tree,
            StrategyArg::Joined => Strategy::Joined,
            StrategyArg::Star => Strategy::Star,
            StrategyArg::Modular => Strategy::Modular,
            StrategyArg::Dp => Strategy::Dp,
            StrategyArg::Brute => Strategy::Brute,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Lines,
    Jsonl,
}

#[derive(Subcommand)]
enum Command {
    /// Count linear extensions and report how the count was obtained.
    Count {
        /// Poset JSON file, or - for stdin.
        poset: PathBuf,
        /// Partition JSON file to use instead of searching for one.
        #[arg(long)]
        partition: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "auto")]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 10)]
        brute_limit: usize,
        #[arg(long, default_value_t = 20)]
        dp_limit: usize,
    },
    /// Print linear extensions one per line; the total goes to stderr.
    Enumerate {
        poset: PathBuf,
        /// Stop after this many extensions.
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long, value_enum, default_value = "lines")]
        format: Format,
        /// Largest poset enumerated without --limit.
        #[arg(long, default_value_t = 12)]
        cap: usize,
    },
    /// Show the skeleton of a modular partition of the incomparability graph.
    Skeleton {
        poset: PathBuf,
        #[arg(long)]
        partition: Option<PathBuf>,
    },
    /// Check a partition against the graph and poset module conditions.
    Verify { poset: PathBuf, partition: PathBuf },
    /// Compare the three counts attached to a reverse-edge set.
    Equiv { reverse: PathBuf },
    /// Build a network with prescribed per-module tournament counts.
    Build {
        spec: PathBuf,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Shape(_)
        | Error::NotModular(_)
        | Error::Condition(_)
        | Error::NotTransitivelyOrientable(..)
        | Error::Mismatch(_) => 3,
        Error::Size(_) => 4,
        Error::Infeasible { .. } => 5,
        _ => 2,
    }
}

fn read_input(path: &PathBuf) -> Result<String, Error> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Parse(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string(value).expect("serialisable"));
}

fn run(cli: Cli) -> Result<(), Error> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Error::Parse(e.to_string()))?;
    }
    match cli.command {
        Command::Count {
            poset,
            partition,
            strategy,
            brute_limit,
            dp_limit,
        } => {
            let lp = parse_poset(&read_input(&poset)?)?;
            let partition = match partition {
                Some(path) => Some(parse_partition(&read_input(&path)?, lp.poset.n())?),
                None => None,
            };
            let options = CountOptions {
                strategy: strategy.into(),
                partition,
                brute_force_limit: brute_limit,
                dp_limit,
                ..CountOptions::default()
            };
            let report = count(&lp.poset, &options)?;
            print_json(&CountReportDoc::from(&report));
        }
        Command::Enumerate {
            poset,
            limit,
            format,
            cap,
        } => {
            let lp = parse_poset(&read_input(&poset)?)?;
            let n = lp.poset.n();
            let stream = match limit {
                Some(_) => enumerate_backtracking(&lp.poset, usize::MAX)?,
                None => enumerate_backtracking(&lp.poset, cap).map_err(|_| {
                    Error::Size(format!(
                        "{n} elements exceed the enumeration cap of {cap}; pass --limit or --cap"
                    ))
                })?,
            };
            let stdout = io::stdout();
            let mut out = BufWriter::new(stdout.lock());
            let mut total = 0usize;
            for ext in stream.take(limit.unwrap_or(usize::MAX)) {
                let labels: Vec<String> = ext.iter().map(|&x| lp.label(x)).collect();
                let line = match format {
                    Format::Lines => labels.join(" "),
                    Format::Jsonl => match &lp.labels {
                        Some(_) => json!({ "order": labels }).to_string(),
                        None => {
                            let order: Vec<usize> = ext.iter().map(|x| x + 1).collect();
                            json!({ "order": order }).to_string()
                        }
                    },
                };
                if writeln!(out, "{line}").is_err() {
                    return Ok(());
                }
                total += 1;
            }
            let _ = out.flush();
            eprintln!("total: {total}");
        }
        Command::Skeleton { poset, partition } => {
            let lp = parse_poset(&read_input(&poset)?)?;
            let p = &lp.poset;
            let ig = p.incomparability_graph();
            let blocks = match partition {
                Some(path) => parse_partition(&read_input(&path)?, p.n())?,
                None => find_modular_partition(&ig, CountOptions::default().search_budget)
                    .map(|m| m.into_blocks())
                    .unwrap_or_else(|| (0..p.n()).map(|x| vec![x]).collect()),
            };
            let sk = skeleton_of(&ig, &blocks)?;
            let edges: Vec<[usize; 2]> = sk.quotient.edges().map(|(a, b)| [a + 1, b + 1]).collect();
            let numbering: Vec<Option<usize>> =
                sk.shape.numbering.iter().map(|b| b.map(|i| i + 1)).collect();
            print_json(&json!({
                "blocks": one_based_blocks(&blocks),
                "block_sizes": sk.block_sizes,
                "quotient_edges": edges,
                "shape": sk.shape.kind.name(),
                "numbering": numbering,
            }));
        }
        Command::Verify { poset, partition } => {
            let lp = parse_poset(&read_input(&poset)?)?;
            let p = &lp.poset;
            let blocks = parse_partition(&read_input(&partition)?, p.n())?;
            let graph_modular = is_graph_partition(&p.incomparability_graph(), &blocks)?;
            let poset_modular = is_poset_partition(p, &blocks)?;
            let (pairs, resolution): (Option<Vec<[usize; 2]>>, Option<Resolution>) =
                if graph_modular {
                    let pairs = find_inconsistent_pairs(p, &blocks)?
                        .into_iter()
                        .map(|(i, j)| [i + 1, j + 1])
                        .collect();
                    let resolution = JoinedStructure::from_partition(p, &blocks)
                        .and_then(|js| the_ones_resolution(p, &js))
                        .ok();
                    (Some(pairs), resolution)
                } else {
                    (None, None)
                };
            #[derive(Serialize)]
            struct VerifyDoc {
                graph_modular: bool,
                poset_modular: bool,
                inconsistent_pairs: Option<Vec<[usize; 2]>>,
                resolution: Option<Resolution>,
            }
            print_json(&VerifyDoc {
                graph_modular,
                poset_modular,
                inconsistent_pairs: pairs,
                resolution,
            });
        }
        Command::Equiv { reverse } => {
            let r = parse_reverse_set(&read_input(&reverse)?)?;
            let three = three_way_counts(&r, EquivLimits::default())?;
            let equal = three.linear_extensions == three.tournaments
                && three.tournaments == three.permutations;
            let doc = reverse_set_doc(&r);
            print_json(&json!({
                "n": doc.n,
                "reverse": doc.reverse,
                "linear_extensions": three.linear_extensions.to_string(),
                "tournaments": three.tournaments.to_string(),
                "permutations": three.permutations.to_string(),
                "equal": equal,
            }));
            if !equal {
                return Err(Error::Mismatch("the three counts differ".into()));
            }
        }
        Command::Build { spec, out } => {
            let spec = parse_network_spec(&read_input(&spec)?)?;
            let net = assemble_network(&spec, SearchLimits::default())?;
            let achieved = verify_network(&net.digraph, &net.blocks)?;
            let text = serde_json::to_string(&network_doc(&net, &achieved)).expect("serialisable");
            match out {
                Some(path) => fs::write(&path, format!("{text}\n"))
                    .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?,
                None => println!("{text}"),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
