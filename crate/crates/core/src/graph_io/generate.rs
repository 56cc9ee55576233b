use super::{AdjacencyGraph, GraphBuilder, XorShift64Star};
use crate::error::{Error, Result};

/// Shape of the synthetic web-graph model.
///
/// Each node either copies its predecessor's list (dropping some members and
/// replacing them with fresh links) or draws a fresh list. Fresh links land in
/// a window around the source node with probability `locality`, otherwise
/// anywhere in the graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorParams {
    pub avg_degree: f64,
    pub copy_prob: f64,
    pub drop_prob: f64,
    pub locality: f64,
    /// Half-width of the locality window; `0` picks `max(16, 8 * avg_degree)`.
    pub window: u64,
}

impl GeneratorParams {
    pub fn new(avg_degree: f64, copy_prob: f64) -> Self {
        Self {
            avg_degree,
            copy_prob,
            drop_prob: 0.15,
            locality: 0.85,
            window: 0,
        }
    }

    /// Rejects degrees and probabilities outside their domains.
    pub fn validate(&self) -> Result<()> {
        if !self.avg_degree.is_finite() || self.avg_degree <= 0.0 {
            return Err(Error::Parameter(format!(
                "average degree must be positive, got {}",
                self.avg_degree
            )));
        }
        for (name, p) in [
            ("copy probability", self.copy_prob),
            ("drop probability", self.drop_prob),
            ("locality", self.locality),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Parameter(format!(
                    "{name} must lie in [0, 1], got {p}"
                )));
            }
        }
        Ok(())
    }
}

/// Deterministic synthetic graph with `n` nodes.
pub fn generate_graph(
    n: u64,
    avg_degree: f64,
    copy_prob: f64,
    seed: u64,
) -> Result<AdjacencyGraph> {
    generate_with(n, &GeneratorParams::new(avg_degree, copy_prob), seed)
}

pub fn generate_with(n: u64, params: &GeneratorParams, seed: u64) -> Result<AdjacencyGraph> {
    params.validate()?;
    if n > u32::MAX as u64 {
        return Err(Error::Parameter(format!("{n} nodes do not fit 32-bit ids")));
    }
    let mut rng = XorShift64Star::new(seed);
    let window = if params.window == 0 {
        16u64.max((8.0 * params.avg_degree) as u64)
    } else {
        params.window
    };
    let fresh = |rng: &mut XorShift64Star, u: u64| -> u32 {
        if rng.unit() < params.locality {
            let offset = rng.below(2 * window + 1) as i64 - window as i64;
            (u as i64 + offset).rem_euclid(n as i64) as u32
        } else {
            rng.below(n) as u32
        }
    };

    let mut builder = GraphBuilder::new();
    let mut prev: Vec<u32> = Vec::new();
    let mut row: Vec<u32> = Vec::new();
    for u in 0..n {
        row.clear();
        if u > 0 && !prev.is_empty() && rng.unit() < params.copy_prob {
            let mut dropped = 0;
            for &v in &prev {
                if rng.unit() < params.drop_prob {
                    dropped += 1;
                } else {
                    row.push(v);
                }
            }
            for _ in 0..dropped {
                row.push(fresh(&mut rng, u));
            }
        } else {
            let degree = (rng.unit() * (2.0 * params.avg_degree + 1.0)) as u64;
            for _ in 0..degree {
                row.push(fresh(&mut rng, u));
            }
        }
        builder.push_row(&mut row);
        std::mem::swap(&mut prev, &mut row);
    }
    builder.finish()
}
