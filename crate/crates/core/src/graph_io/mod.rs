//! Uncompressed graphs: the text format, transposition, and synthetic
//! generation.
//!
//! The text format has one line per node; line `i` lists the successors of
//! node `i` as base-10 integers, each followed by a space. An empty line is a
//! node without successors.

mod generate;
mod rng;
mod text;

pub use generate::{generate_graph, generate_with, GeneratorParams};
pub use rng::XorShift64Star;
pub use text::{
    parse_text_graph, parse_text_graph_with_buffer, write_text_graph, DEFAULT_READ_BUFFER,
};

use crate::error::{Error, Result};

/// A graph in CSR form with sorted, duplicate-free successor lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyGraph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Default for AdjacencyGraph {
    fn default() -> Self {
        GraphBuilder::new().finish_unchecked()
    }
}

impl AdjacencyGraph {
    /// Builds a graph from arbitrary per-node lists, sorting and
    /// de-duplicating each one.
    pub fn from_lists<L, I>(lists: L) -> Result<Self>
    where
        L: IntoIterator<Item = I>,
        I: IntoIterator<Item = u32>,
    {
        let mut builder = GraphBuilder::new();
        let mut row = Vec::new();
        for list in lists {
            row.clear();
            row.extend(list);
            builder.push_row(&mut row);
        }
        builder.finish()
    }

    pub fn num_nodes(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn num_links(&self) -> u64 {
        self.targets.len() as u64
    }

    /// Ground-truth successor list of `u`.
    pub fn successors(&self, u: u64) -> Result<&[u32]> {
        let n = self.num_nodes() as u64;
        if u >= n {
            return Err(Error::Index { node: u, n });
        }
        Ok(self.row(u as usize))
    }

    #[inline]
    pub(crate) fn row(&self, u: usize) -> &[u32] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[u32]> + '_ {
        self.offsets.windows(2).map(|w| &self.targets[w[0]..w[1]])
    }

    pub fn max_out_degree(&self) -> usize {
        self.offsets
            .windows(2)
            .map(|w| w[1] - w[0])
            .max()
            .unwrap_or(0)
    }

    /// Reverses every edge. Output lists come out sorted because sources are
    /// visited in increasing order.
    pub fn transpose(&self) -> Self {
        let n = self.num_nodes();
        let mut offsets = vec![0usize; n + 1];
        for &v in &self.targets {
            offsets[v as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0u32; self.targets.len()];
        for (u, row) in self.rows().enumerate() {
            for &v in row {
                targets[fill[v as usize]] = u as u32;
                fill[v as usize] += 1;
            }
        }
        Self { offsets, targets }
    }
}

/// Incremental CSR construction, one row at a time.
#[derive(Debug)]
pub struct GraphBuilder {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    max_id: Option<u32>,
}

impl Default for GraphBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self {
            offsets: vec![0],
            targets: Vec::new(),
            max_id: None,
        }
    }

    /// Appends the next node's successors. `row` is sorted and de-duplicated
    /// in place.
    pub fn push_row(&mut self, row: &mut Vec<u32>) {
        row.sort_unstable();
        row.dedup();
        if let Some(&last) = row.last() {
            self.max_id = Some(self.max_id.map_or(last, |m| m.max(last)));
        }
        self.targets.extend_from_slice(row);
        self.offsets.push(self.targets.len());
    }

    pub fn num_nodes(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Finishes the graph, checking every successor id is below the node count.
    pub fn finish(self) -> Result<AdjacencyGraph> {
        let n = self.num_nodes() as u64;
        if let Some(max) = self.max_id {
            if max as u64 >= n {
                let (node, _) = self
                    .offsets
                    .windows(2)
                    .enumerate()
                    .find(|(_, w)| {
                        self.targets[w[0]..w[1]]
                            .last()
                            .is_some_and(|&v| v as u64 >= n)
                    })
                    .expect("max id belongs to some row");
                return Err(Error::Validation {
                    node: node as u64,
                    successor: max as u64,
                    n,
                });
            }
        }
        Ok(self.finish_unchecked())
    }

    fn finish_unchecked(self) -> AdjacencyGraph {
        AdjacencyGraph {
            offsets: self.offsets,
            targets: self.targets,
        }
    }
}

#[cfg(test)]
pub(crate) fn g4() -> AdjacencyGraph {
    AdjacencyGraph::from_lists([vec![1, 2], vec![2], vec![], vec![0, 3]]).unwrap()
}
