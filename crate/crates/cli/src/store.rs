//! Opening compressed graph files without knowing their kind up front.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read};
use std::path::Path;

use anyhow::{bail, Context, Result};
use tilegraph::lm_graph::LM_MAGIC;
use tilegraph::stripe_graph::S2D_MAGIC;
use tilegraph::{AdjacencyGraph, LmGraph, StripeGraph};

pub enum Compressed {
    Lm(LmGraph),
    Stripes(StripeGraph),
}

impl Compressed {
    /// Loads a `.lmg` or `.s2d` file, dispatching on its magic bytes.
    pub fn open(path: &Path) -> Result<Self> {
        let mut reader = BufReader::new(
            File::open(path).with_context(|| format!("opening {}", path.display()))?,
        );
        let mut magic = [0u8; 4];
        reader
            .read_exact(&mut magic)
            .with_context(|| format!("{} is too short to be a compressed graph", path.display()))?;
        let source = (&magic[..]).chain(reader);
        let loaded = if &magic == LM_MAGIC {
            Compressed::Lm(LmGraph::load(source)?)
        } else if &magic == S2D_MAGIC {
            Compressed::Stripes(StripeGraph::load(source)?)
        } else {
            bail!("{} is neither an .lmg nor an .s2d file", path.display());
        };
        Ok(loaded)
    }

    pub fn num_nodes(&self) -> u64 {
        match self {
            Compressed::Lm(g) => g.num_nodes(),
            Compressed::Stripes(g) => g.num_nodes(),
        }
    }

    pub fn to_adjacency(&self) -> Result<AdjacencyGraph> {
        Ok(match self {
            Compressed::Lm(g) => g.to_adjacency()?,
            Compressed::Stripes(g) => g.to_adjacency()?,
        })
    }
}

pub fn read_text(path: &Path) -> Result<AdjacencyGraph> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    tilegraph::graph_io::parse_text_graph(file)
        .with_context(|| format!("parsing {}", path.display()))
}

pub fn write_text(g: &AdjacencyGraph, path: &Path) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    tilegraph::graph_io::write_text_graph(g, BufWriter::new(file))?;
    Ok(())
}

pub fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}
