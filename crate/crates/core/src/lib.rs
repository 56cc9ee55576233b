//! Random-access compressed web graphs.
//!
//! Two families of representations are provided:
//!
//! * [`lm_graph`]: list merging. Consecutive adjacency lists are grouped into
//!   chunks of `h` nodes whose successors are merged into one sorted residue
//!   list plus an `h`-bit membership bitmap per residue. Successor queries only.
//! * [`stripe_graph`]: the adjacency matrix cut into `B x B` tiles, each
//!   stored in the smallest of four encodings, optionally carrying `K`-band
//!   stripe bitmaps so queries can skip tiles with nothing in the requested
//!   row or column. Answers successor and predecessor queries from one file.

mod binio;
pub mod codec;
mod cursor;
mod error;
pub mod graph_io;
pub mod lm_graph;
pub mod stripe_graph;
pub mod tile;

pub use cursor::{DecodeCounters, QueryCursor};
pub use error::{Error, Result};
pub use graph_io::AdjacencyGraph;
pub use lm_graph::LmGraph;
pub use stripe_graph::{StripeGraph, StripeStats};
