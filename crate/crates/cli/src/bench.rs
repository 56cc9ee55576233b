//! Random-access benchmark over a parameter grid.
//!
//! Each parameter point compresses the graph, warms a cursor up with one
//! untimed pass over the sample, then times `runs` full passes. Timing wraps
//! the whole pass; per-query timers would swamp microsecond-scale queries.

use std::hint::black_box;
use std::io::Write;
use std::time::{Duration, Instant};

use anyhow::{bail, ensure, Result};
use tilegraph::graph_io::XorShift64Star;
use tilegraph::{AdjacencyGraph, LmGraph, QueryCursor, StripeGraph};

pub const CSV_HEADER: [&str; 8] = [
    "method",
    "param1",
    "param2",
    "bits_per_link",
    "mean_us",
    "runs",
    "samples",
    "seed",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Lm,
    TwoD,
}

impl Method {
    pub fn default_runs(self) -> u32 {
        match self {
            Method::Lm => 10,
            Method::TwoD => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Succ,
    Pred,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub method: Method,
    /// Chunk heights for LM.
    pub chunk_heights: Vec<u32>,
    /// Tile sides and stripe counts for 2D; every combination is run.
    pub tile_sides: Vec<u32>,
    pub stripe_counts: Vec<u32>,
    pub samples: u64,
    pub runs: u32,
    pub seed: u64,
    pub mode: Mode,
}

impl BenchConfig {
    pub fn new(method: Method) -> Self {
        Self {
            method,
            chunk_heights: vec![8, 16, 32, 64, 128],
            tile_sides: vec![128, 256, 512, 1024, 2048],
            stripe_counts: vec![0, 32],
            samples: 100_000,
            runs: method.default_runs(),
            seed: 42,
            mode: Mode::Succ,
        }
    }

    fn validate(&self) -> Result<()> {
        ensure!(self.samples >= 1, "samples must be at least 1");
        ensure!(self.runs >= 1, "runs must be at least 1");
        match self.method {
            Method::Lm => ensure!(!self.chunk_heights.is_empty(), "no chunk heights given"),
            Method::TwoD => ensure!(
                !self.tile_sides.is_empty() && !self.stripe_counts.is_empty(),
                "no tile sides or stripe counts given"
            ),
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    /// `lm`, `2d` (no stripes) or `2d-stripes`.
    pub method: &'static str,
    pub param1: u32,
    pub param2: Option<u32>,
    pub bits_per_link: f64,
    pub mean_query_us: f64,
    pub min_query_us: f64,
    pub run_times: Vec<Duration>,
    pub samples: u64,
    pub seed: u64,
    /// Tile bodies decoded by one pass over the sample (2D only).
    pub decoded_tile_bodies: Option<u64>,
}

/// `samples` node ids drawn uniformly from `[0, n)` with replacement.
pub fn sample_nodes(n: u64, samples: u64, seed: u64) -> Vec<u64> {
    let mut rng = XorShift64Star::new(seed);
    (0..samples).map(|_| rng.below(n)).collect()
}

/// One compressed structure plus the query direction to run against it.
#[derive(Clone, Copy)]
pub enum QueryTarget<'a> {
    Lm(&'a LmGraph),
    Stripes(&'a StripeGraph, Mode),
}

impl QueryTarget<'_> {
    pub fn cursor(&self) -> QueryCursor {
        match self {
            QueryTarget::Lm(g) => g.cursor(),
            QueryTarget::Stripes(g, _) => g.cursor(),
        }
    }

    /// Runs every query in `nodes` and returns the total output length.
    pub fn pass(&self, nodes: &[u64], cursor: &mut QueryCursor) -> Result<u64> {
        let mut total = 0u64;
        for &u in nodes {
            let list = match *self {
                QueryTarget::Lm(g) => g.successors(u, cursor)?,
                QueryTarget::Stripes(g, Mode::Succ) => g.successors(u, cursor)?,
                QueryTarget::Stripes(g, Mode::Pred) => g.predecessors(u, cursor)?,
            };
            total += black_box(list).len() as u64;
        }
        Ok(total)
    }
}

fn time_point(target: QueryTarget<'_>, nodes: &[u64], runs: u32) -> Result<(Vec<Duration>, u64)> {
    let mut cursor = target.cursor();
    target.pass(nodes, &mut cursor)?;
    let bodies = cursor.counters().bodies_decoded;
    let mut times = Vec::with_capacity(runs as usize);
    for _ in 0..runs {
        let start = Instant::now();
        black_box(target.pass(nodes, &mut cursor)?);
        times.push(start.elapsed());
    }
    Ok((times, bodies))
}

fn per_query_us(times: &[Duration], samples: u64) -> (f64, f64) {
    let us: Vec<f64> = times
        .iter()
        .map(|t| t.as_secs_f64() * 1e6 / samples as f64)
        .collect();
    let mean = us.iter().sum::<f64>() / us.len() as f64;
    let min = us.iter().copied().fold(f64::INFINITY, f64::min);
    (mean, min)
}

/// Runs the whole grid in `config` against `g`. LM predecessor runs use an
/// LM file built from the transpose.
pub fn run_bench(g: &AdjacencyGraph, config: &BenchConfig) -> Result<Vec<BenchRecord>> {
    config.validate()?;
    if g.num_nodes() == 0 {
        bail!("cannot benchmark an empty graph");
    }
    let n = g.num_nodes() as u64;
    let nodes = sample_nodes(n, config.samples, config.seed);
    let record = |method, param1, param2, bits_per_link, times: Vec<Duration>, bodies| {
        let (mean_query_us, min_query_us) = per_query_us(&times, config.samples);
        BenchRecord {
            method,
            param1,
            param2,
            bits_per_link,
            mean_query_us,
            min_query_us,
            run_times: times,
            samples: config.samples,
            seed: config.seed,
            decoded_tile_bodies: bodies,
        }
    };
    let mut records = Vec::new();
    match config.method {
        Method::Lm => {
            let transposed;
            let source = match config.mode {
                Mode::Succ => g,
                Mode::Pred => {
                    transposed = g.transpose();
                    &transposed
                }
            };
            for &h in &config.chunk_heights {
                let lm = LmGraph::compress(source, h)?;
                let bits = bits_per_link(lm.serialized_len(), g.num_links())?;
                let (times, _) = time_point(QueryTarget::Lm(&lm), &nodes, config.runs)?;
                records.push(record("lm", h, None, bits, times, None));
            }
        }
        Method::TwoD => {
            for &side in &config.tile_sides {
                for &stripes in &config.stripe_counts {
                    let sg = StripeGraph::compress(g, side, stripes)?;
                    let bits = sg.stats()?.bits_per_link;
                    let target = QueryTarget::Stripes(&sg, config.mode);
                    let (times, bodies) = time_point(target, &nodes, config.runs)?;
                    let label = if stripes == 0 { "2d" } else { "2d-stripes" };
                    records.push(record(
                        label,
                        side,
                        Some(stripes),
                        bits,
                        times,
                        Some(bodies),
                    ));
                }
            }
        }
    }
    Ok(records)
}

fn bits_per_link(bytes: u64, links: u64) -> Result<f64> {
    if links == 0 {
        return Err(tilegraph::Error::UndefinedRatio.into());
    }
    Ok(8.0 * bytes as f64 / links as f64)
}

/// Writes `records` as CSV under [`CSV_HEADER`]. `mean_us` is the only
/// column that varies between runs with the same seed.
pub fn write_csv<W: Write>(records: &[BenchRecord], sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.method.to_string(),
            r.param1.to_string(),
            r.param2.map(|k| k.to_string()).unwrap_or_default(),
            format!("{:.6}", r.bits_per_link),
            format!("{:.6}", r.mean_query_us),
            r.run_times.len().to_string(),
            r.samples.to_string(),
            r.seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use tilegraph::graph_io::generate_graph;

    fn small_config(method: Method) -> BenchConfig {
        BenchConfig {
            chunk_heights: vec![8, 32],
            tile_sides: vec![128],
            stripe_counts: vec![0, 16],
            samples: 500,
            runs: 2,
            ..BenchConfig::new(method)
        }
    }

    #[test]
    fn sampling_is_seeded_and_in_range() {
        let a = sample_nodes(1000, 5000, 9);
        assert_eq!(a, sample_nodes(1000, 5000, 9));
        assert_ne!(a, sample_nodes(1000, 5000, 10));
        assert!(a.iter().all(|&u| u < 1000));
        assert!(sample_nodes(1, 10, 3).iter().all(|&u| u == 0));
    }

    #[test]
    fn sampling_is_roughly_uniform() {
        let mut hist = [0u32; 10];
        for u in sample_nodes(10, 100_000, 5) {
            hist[u as usize] += 1;
        }
        assert!(
            hist.iter().all(|&c| (9_000..11_000).contains(&c)),
            "{hist:?}"
        );
    }

    #[test]
    fn defaults() {
        let lm = BenchConfig::new(Method::Lm);
        assert_eq!((lm.runs, lm.samples), (10, 100_000));
        assert_eq!(BenchConfig::new(Method::TwoD).runs, 4);
    }

    #[test]
    fn records_cover_the_grid() {
        let g = generate_graph(2000, 6.0, 0.5, 4).unwrap();
        let lm = run_bench(&g, &small_config(Method::Lm)).unwrap();
        assert_eq!(
            lm.iter().map(|r| (r.method, r.param1)).collect::<Vec<_>>(),
            [("lm", 8), ("lm", 32)]
        );
        let two_d = run_bench(&g, &small_config(Method::TwoD)).unwrap();
        let labels: Vec<_> = two_d.iter().map(|r| (r.method, r.param2)).collect();
        assert_eq!(labels, [("2d", Some(0)), ("2d-stripes", Some(16))]);
        for r in lm.iter().chain(&two_d) {
            assert_eq!(r.run_times.len(), 2);
            assert!(r.min_query_us <= r.mean_query_us);
            assert!(r.bits_per_link > 0.0);
        }
        assert!(two_d[1].decoded_tile_bodies <= two_d[0].decoded_tile_bodies);
    }

    #[test]
    fn predecessor_mode_runs_for_both_methods() {
        let g = generate_graph(800, 5.0, 0.5, 2).unwrap();
        for method in [Method::Lm, Method::TwoD] {
            let config = BenchConfig {
                mode: Mode::Pred,
                ..small_config(method)
            };
            assert!(!run_bench(&g, &config).unwrap().is_empty());
        }
    }

    #[test]
    fn rejects_empty_graph_and_bad_config() {
        let empty = AdjacencyGraph::default();
        assert!(run_bench(&empty, &small_config(Method::Lm)).is_err());
        let g = generate_graph(100, 3.0, 0.5, 1).unwrap();
        assert!(run_bench(
            &g,
            &BenchConfig {
                runs: 0,
                ..small_config(Method::Lm)
            }
        )
        .is_err());
        assert!(run_bench(
            &g,
            &BenchConfig {
                samples: 0,
                ..small_config(Method::Lm)
            }
        )
        .is_err());
        let no_links = AdjacencyGraph::from_lists(vec![Vec::<u32>::new(); 5]).unwrap();
        assert!(run_bench(&no_links, &small_config(Method::TwoD)).is_err());
    }

    #[test]
    fn csv_layout() {
        let g = generate_graph(500, 4.0, 0.5, 6).unwrap();
        let records = run_bench(&g, &small_config(Method::TwoD)).unwrap();
        let mut out = Vec::new();
        write_csv(&records, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[0],
            "method,param1,param2,bits_per_link,mean_us,runs,samples,seed"
        );
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("2d,128,0,"));
        assert!(lines[2].starts_with("2d-stripes,128,16,"));
        assert!(lines[2].ends_with(",2,500,42"));
    }
}
