use std::fmt;
use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use tilegraph::graph_io::{generate_with, GeneratorParams};
use tilegraph::{LmGraph, StripeGraph};
use tilegraph_cli::bench::{self, BenchConfig, Method, Mode};
use tilegraph_cli::plot;
use tilegraph_cli::store::{self, Compressed};

#[derive(Parser)]
#[command(
    name = "tilegraph",
    version,
    about = "Compress and query web graphs with random access"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Lm,
    #[value(name = "2d")]
    TwoD,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Lm => Method::Lm,
            MethodArg::TwoD => Method::TwoD,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Succ,
    Pred,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Succ => Mode::Succ,
            ModeArg::Pred => Mode::Pred,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compress a text graph into .lmg (list merging) or .s2d (2D tiles).
    Compress {
        #[arg(long, value_enum)]
        method: MethodArg,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Chunk height for lm.
        #[arg(long)]
        h: Option<u32>,
        /// Tile side for 2d.
        #[arg(long)]
        tile: Option<u32>,
        /// Stripes per tile for 2d; 0 disables them.
        #[arg(long, default_value_t = 0)]
        stripes: u32,
        /// Compress the transposed graph, so that an .lmg answers predecessor queries.
        #[arg(long)]
        transpose: bool,
    },
    /// Write a compressed graph back out as canonical text.
    Decompress {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Print the successors or predecessors of one node.
    Query {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        node: u64,
        #[arg(long, value_enum, default_value = "succ")]
        mode: ModeArg,
    },
    /// Time random queries over a parameter grid and emit CSV.
    Bench {
        /// Text graph to compress and query.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        method: MethodArg,
        #[arg(long, value_delimiter = ',', default_value = "8,16,32,64,128")]
        h: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "128,256,512,1024,2048")]
        tile: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "0,32")]
        stripes: Vec<u32>,
        #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        /// Defaults to 10 for lm and 4 for 2d.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        runs: Option<u32>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value = "succ")]
        mode: ModeArg,
        /// Write CSV here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Render a bench CSV as an SVG scatter plot.
    Plot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Generate a synthetic web-like text graph.
    Gen {
        #[arg(long)]
        nodes: u64,
        #[arg(long)]
        avg_deg: f64,
        #[arg(long, default_value_t = 0.5)]
        copy_prob: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        output: PathBuf,
    },
}

/// Flag combinations clap cannot check on its own; reported with exit code 2.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(message: impl Into<String>) -> anyhow::Error {
    UsageError(message.into()).into()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<UsageError>() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Compress {
            method,
            input,
            output,
            h,
            tile,
            stripes,
            transpose,
        } => compress(method.into(), &input, &output, h, tile, stripes, transpose),
        Command::Decompress { input, output } => {
            let g = Compressed::open(&input)?.to_adjacency()?;
            store::write_text(&g, &output)
        }
        Command::Query { input, node, mode } => query(&input, node, mode.into()),
        Command::Bench {
            input,
            method,
            h,
            tile,
            stripes,
            samples,
            runs,
            seed,
            mode,
            csv,
        } => {
            let method = Method::from(method);
            let config = BenchConfig {
                method,
                chunk_heights: h,
                tile_sides: tile,
                stripe_counts: stripes,
                samples,
                runs: runs.unwrap_or(method.default_runs()),
                seed,
                mode: mode.into(),
            };
            let g = store::read_text(&input)?;
            let records = bench::run_bench(&g, &config)?;
            for r in &records {
                let param2 = r.param2.map(|k| format!(" K={k}")).unwrap_or_default();
                let bodies = r
                    .decoded_tile_bodies
                    .map(|b| format!(", {b} tile bodies/pass"))
                    .unwrap_or_default();
                eprintln!(
                    "{} {}{param2}: {:.4} bits/link, mean {:.4} us, min {:.4} us{bodies}",
                    r.method, r.param1, r.bits_per_link, r.mean_query_us, r.min_query_us
                );
            }
            match csv {
                Some(path) => bench::write_csv(&records, store::create(&path)?),
                None => bench::write_csv(&records, io::stdout().lock()),
            }
        }
        Command::Plot { input, output } => {
            let file =
                File::open(&input).with_context(|| format!("opening {}", input.display()))?;
            let svg = plot::render_svg(&plot::read_points(BufReader::new(file))?)?;
            std::fs::write(&output, svg).with_context(|| format!("writing {}", output.display()))
        }
        Command::Gen {
            nodes,
            avg_deg,
            copy_prob,
            seed,
            output,
        } => {
            let params = GeneratorParams::new(avg_deg, copy_prob);
            params.validate().map_err(|e| usage(e.to_string()))?;
            let g = generate_with(nodes, &params, seed)?;
            store::write_text(&g, &output)
        }
    }
}

fn compress(
    method: Method,
    input: &std::path::Path,
    output: &std::path::Path,
    h: Option<u32>,
    tile: Option<u32>,
    stripes: u32,
    transpose: bool,
) -> Result<()> {
    match method {
        Method::Lm if h.is_none() => return Err(usage("--method lm requires --h")),
        Method::Lm if tile.is_some() => return Err(usage("--tile applies to --method 2d only")),
        Method::TwoD if tile.is_none() => return Err(usage("--method 2d requires --tile")),
        Method::TwoD if h.is_some() => return Err(usage("--h applies to --method lm only")),
        Method::TwoD if transpose => return Err(usage("--transpose applies to --method lm only")),
        _ => {}
    }
    let mut g = store::read_text(input)?;
    if transpose {
        g = g.transpose();
    }
    let links = g.num_links();
    let start = Instant::now();
    let mut sink = store::create(output)?;
    let bytes = match method {
        Method::Lm => {
            let lm = LmGraph::compress(&g, h.unwrap_or_default())?;
            lm.save(&mut sink)?;
            lm.serialized_len()
        }
        Method::TwoD => {
            let sg = StripeGraph::compress(&g, tile.unwrap_or_default(), stripes)?;
            sg.save(&mut sink)?;
            sg.serialized_len()
        }
    };
    sink.flush()?;
    let elapsed = start.elapsed();
    let ratio = if links == 0 {
        "undefined (no links)".to_string()
    } else {
        format!("{:.4}", 8.0 * bytes as f64 / links as f64)
    };
    println!("bits/link: {ratio}");
    println!("compression time: {:.3} s", elapsed.as_secs_f64());
    Ok(())
}

fn query(input: &std::path::Path, node: u64, mode: Mode) -> Result<()> {
    let compressed = Compressed::open(input)?;
    if node >= compressed.num_nodes() {
        bail!(
            "node {node} out of range (graph has {} nodes)",
            compressed.num_nodes()
        );
    }
    let list: Vec<u32> = match (&compressed, mode) {
        (Compressed::Lm(g), Mode::Succ) => g.successors(node, &mut g.cursor())?.to_vec(),
        (Compressed::Lm(_), Mode::Pred) => bail!(
            "an .lmg file answers successor queries only; build one from the transposed graph \
             (compress --method lm --transpose) and query it with --mode succ"
        ),
        (Compressed::Stripes(g), Mode::Succ) => g.successors(node, &mut g.cursor())?.to_vec(),
        (Compressed::Stripes(g), Mode::Pred) => g.predecessors(node, &mut g.cursor())?.to_vec(),
    };
    let text: Vec<String> = list.iter().map(u32::to_string).collect();
    println!("{}", text.join(" "));
    Ok(())
}
