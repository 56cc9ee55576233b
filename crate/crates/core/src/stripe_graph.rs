//! The adjacency matrix as a grid of compressed `B x B` tiles.
//!
//! Only non-empty tiles are stored, in row-major tile order. `offsets` holds
//! one entry per stored tile plus a sentinel; each entry carries the tile's
//! encoding in its top two bits and its byte offset into the payload in the
//! rest. `x_first[r]..x_first[r + 1]` is the index range of tile-row `r`;
//! `y_offsets` lists the same tiles column by column, and
//! `y_first[c]..y_first[c + 1]` selects tile-column `c` within it.
//!
//! File layout (`.s2d`, little-endian): `"S2D1" | u32 B | u32 K | u64 n |
//! u64 links | u64 T | u64 M | (M + 1) x u64 offsets | (T + 1) x u64 x_first |
//! M x u64 y_offsets | (T + 1) x u64 y_first | u64 payload_len | payload`.

use std::io::{Read, Write};

use crate::binio::{put_u32, put_u64, put_u64s, LeReader};
use crate::cursor::QueryCursor;
use crate::error::{Error, Result};
use crate::graph_io::{AdjacencyGraph, GraphBuilder};
use crate::tile::{
    TileBlob, TileEncoder, TileEncoding, TileParams, UncompressedTile, MAX_TILE_COORD,
};

pub const S2D_MAGIC: &[u8; 4] = b"S2D1";

const TAG_SHIFT: u32 = 62;
const OFFSET_MASK: u64 = (1 << TAG_SHIFT) - 1;

fn tagged(encoding: TileEncoding, offset: u64) -> u64 {
    (encoding.bits() as u64) << TAG_SHIFT | offset
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StripeGraph {
    params: TileParams,
    n: u64,
    links: u64,
    tiles_per_side: u64,
    offsets: Vec<u64>,
    x_first: Vec<u64>,
    y_offsets: Vec<u64>,
    y_first: Vec<u64>,
    payload: Vec<u8>,
}

/// Size and encoding summary of a [`StripeGraph`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripeStats {
    pub bits_per_link: f64,
    pub file_bytes: u64,
    /// Stored tiles per encoding id.
    pub tile_tag_histogram: [u64; 4],
    pub non_empty_tiles: u64,
    /// Bytes spent on stripe bitmaps across all tiles.
    pub stripe_overhead_bytes: u64,
}

/// Streams adjacency rows into a [`StripeGraph`], keeping only the current
/// band of `B` rows uncompressed.
pub struct StripeGraphBuilder {
    params: TileParams,
    n: u64,
    tiles_per_side: u64,
    next_node: u64,
    links: u64,
    band: Vec<UncompressedTile>,
    touched: Vec<u32>,
    encoder: TileEncoder,
    offsets: Vec<u64>,
    x_first: Vec<u64>,
    column_tiles: Vec<Vec<u64>>,
    payload: Vec<u8>,
}

impl StripeGraphBuilder {
    pub fn new(n: u64, side: u32, stripes: u32) -> Result<Self> {
        let params = TileParams::new(side, stripes)?;
        let tiles_per_side = n.div_ceil(side as u64);
        if tiles_per_side >= MAX_TILE_COORD as u64 {
            return Err(Error::Capacity(format!(
                "{tiles_per_side} tiles per side do not fit 3-byte tile coordinates"
            )));
        }
        if n > u32::MAX as u64 + 1 {
            return Err(Error::Capacity(format!("{n} nodes do not fit 32-bit ids")));
        }
        Ok(Self {
            params,
            n,
            tiles_per_side,
            next_node: 0,
            links: 0,
            band: (0..tiles_per_side)
                .map(|_| UncompressedTile::new(params))
                .collect(),
            touched: Vec::new(),
            encoder: TileEncoder::new(),
            offsets: Vec::new(),
            x_first: vec![0],
            column_tiles: vec![Vec::new(); tiles_per_side as usize],
            payload: Vec::new(),
        })
    }

    /// Adds the successors of the next node. They must be strictly
    /// increasing and below `n`.
    pub fn push_row(&mut self, successors: &[u32]) -> Result<()> {
        let u = self.next_node;
        if u >= self.n {
            return Err(Error::Precondition(format!(
                "more than {} rows pushed",
                self.n
            )));
        }
        let log = self.params.log_side();
        let mask = self.params.side() - 1;
        let y = (u as u32) & mask;
        let mut prev: Option<u32> = None;
        for &v in successors {
            if prev.is_some_and(|p| p >= v) || v as u64 >= self.n {
                return Err(Error::Precondition(format!(
                    "successors of node {u} must be strictly increasing and below {}",
                    self.n
                )));
            }
            prev = Some(v);
            let column = v >> log;
            let tile = &mut self.band[column as usize];
            if tile.is_empty() {
                self.touched.push(column);
            }
            tile.add_link(v & mask, y)?;
        }
        self.links += successors.len() as u64;
        self.next_node += 1;
        if self.next_node & mask as u64 == 0 || self.next_node == self.n {
            self.flush_band()?;
        }
        Ok(())
    }

    fn flush_band(&mut self) -> Result<()> {
        let band_row = ((self.next_node - 1) >> self.params.log_side()) as u32;
        self.touched.sort_unstable();
        for &column in &self.touched {
            let tile = &mut self.band[column as usize];
            let start = self.payload.len() as u64;
            if start > OFFSET_MASK {
                return Err(Error::Capacity("payload exceeds 2^62 bytes".into()));
            }
            let written = self
                .encoder
                .compress(tile, column, band_row, &mut self.payload)?;
            self.column_tiles[column as usize].push(self.offsets.len() as u64);
            self.offsets.push(tagged(written.encoding, start));
            tile.clear();
        }
        self.touched.clear();
        self.x_first.push(self.offsets.len() as u64);
        Ok(())
    }

    pub fn finish(mut self) -> Result<StripeGraph> {
        if self.next_node != self.n {
            return Err(Error::Precondition(format!(
                "{} of {} rows pushed",
                self.next_node, self.n
            )));
        }
        let stored = self.offsets.len() as u64;
        self.offsets.push(self.payload.len() as u64);
        let mut y_offsets = Vec::with_capacity(stored as usize);
        let mut y_first = Vec::with_capacity(self.tiles_per_side as usize + 1);
        y_first.push(0);
        for column in &self.column_tiles {
            y_offsets.extend_from_slice(column);
            y_first.push(y_offsets.len() as u64);
        }
        Ok(StripeGraph {
            params: self.params,
            n: self.n,
            links: self.links,
            tiles_per_side: self.tiles_per_side,
            offsets: self.offsets,
            x_first: self.x_first,
            y_offsets,
            y_first,
            payload: self.payload,
        })
    }
}

impl StripeGraph {
    /// Compresses `g` with tile side `side` and `stripes` stripes per tile
    /// (0 disables stripes).
    pub fn compress(g: &AdjacencyGraph, side: u32, stripes: u32) -> Result<Self> {
        let mut builder = StripeGraphBuilder::new(g.num_nodes() as u64, side, stripes)?;
        for row in g.rows() {
            builder.push_row(row)?;
        }
        builder.finish()
    }

    pub fn params(&self) -> TileParams {
        self.params
    }

    pub fn num_nodes(&self) -> u64 {
        self.n
    }

    pub fn num_links(&self) -> u64 {
        self.links
    }

    pub fn tiles_per_side(&self) -> u64 {
        self.tiles_per_side
    }

    pub fn num_tiles(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn offsets(&self) -> &[u64] {
        &self.offsets
    }

    pub fn x_first(&self) -> &[u64] {
        &self.x_first
    }

    pub fn y_offsets(&self) -> &[u64] {
        &self.y_offsets
    }

    pub fn y_first(&self) -> &[u64] {
        &self.y_first
    }

    pub fn payload(&self) -> &[u8] {
        &self.payload
    }

    /// A cursor whose scratch fits any tile body of this graph.
    pub fn cursor(&self) -> QueryCursor {
        QueryCursor::with_scratch(self.params.max_plain_body())
    }

    /// Stored tile `i` (row-major order).
    pub fn tile(&self, i: usize) -> Result<TileBlob<'_>> {
        let entry = self.offsets[i];
        let start = (entry & OFFSET_MASK) as usize;
        let end = (self.offsets[i + 1] & OFFSET_MASK) as usize;
        let encoding = TileEncoding::from_bits((entry >> TAG_SHIFT) as u8);
        TileBlob::new(&self.payload[start..end], encoding, self.params)
    }

    fn check_node(&self, node: u64) -> Result<()> {
        if node >= self.n {
            return Err(Error::Index { node, n: self.n });
        }
        Ok(())
    }

    /// Successors of `u`, in increasing order.
    pub fn successors<'c>(&self, u: u64, cursor: &'c mut QueryCursor) -> Result<&'c [u32]> {
        self.check_node(u)?;
        let log = self.params.log_side();
        let band = (u >> log) as usize;
        let row = (u as u32) & (self.params.side() - 1);
        let mut out = std::mem::take(&mut cursor.out);
        out.clear();
        let mut result = Ok(());
        for i in self.x_first[band]..self.x_first[band + 1] {
            result = self.tile(i as usize).and_then(|blob| {
                let base = blob.x_tile() << log;
                blob.decode_line(row, false, &mut cursor.decode, |col| out.push(base + col))
            });
            if result.is_err() {
                break;
            }
        }
        cursor.out = out;
        result.map(|()| &cursor.out[..])
    }

    /// Predecessors of `v`, in increasing order.
    pub fn predecessors<'c>(&self, v: u64, cursor: &'c mut QueryCursor) -> Result<&'c [u32]> {
        self.check_node(v)?;
        let log = self.params.log_side();
        let band = (v >> log) as usize;
        let col = (v as u32) & (self.params.side() - 1);
        let mut out = std::mem::take(&mut cursor.out);
        out.clear();
        let mut result = Ok(());
        for j in self.y_first[band]..self.y_first[band + 1] {
            result = self
                .tile(self.y_offsets[j as usize] as usize)
                .and_then(|blob| {
                    let base = blob.y_tile() << log;
                    blob.decode_line(col, true, &mut cursor.decode, |row| out.push(base + row))
                });
            if result.is_err() {
                break;
            }
        }
        cursor.out = out;
        result.map(|()| &cursor.out[..])
    }

    /// Decodes every tile once and rebuilds the adjacency lists.
    pub fn to_adjacency(&self) -> Result<AdjacencyGraph> {
        let side = self.params.side() as u64;
        let log = self.params.log_side();
        let mut cursor = self.cursor();
        let mut builder = GraphBuilder::new();
        let mut rows: Vec<Vec<u32>> = vec![Vec::new(); side as usize];
        for band in 0..self.tiles_per_side as usize {
            for i in self.x_first[band]..self.x_first[band + 1] {
                let blob = self.tile(i as usize)?;
                let base = blob.x_tile() << log;
                blob.for_each_edge(&mut cursor, |x, y| rows[y as usize].push(base + x))?;
            }
            let height = (self.n - band as u64 * side).min(side) as usize;
            for row in rows.iter_mut().take(height) {
                // Vertical bodies list a tile's edges column by column, which
                // still leaves each row's columns increasing.
                builder.push_row(row);
                row.clear();
            }
        }
        builder.finish()
    }

    pub fn serialized_len(&self) -> u64 {
        let tables =
            self.offsets.len() + self.x_first.len() + self.y_offsets.len() + self.y_first.len();
        4 + 4 + 4 + 8 * 4 + 8 * tables as u64 + 8 + self.payload.len() as u64
    }

    pub fn stats(&self) -> Result<StripeStats> {
        if self.links == 0 {
            return Err(Error::UndefinedRatio);
        }
        let mut tile_tag_histogram = [0u64; 4];
        for &entry in &self.offsets[..self.num_tiles()] {
            tile_tag_histogram[(entry >> TAG_SHIFT) as usize] += 1;
        }
        let file_bytes = self.serialized_len();
        let m = self.num_tiles() as u64;
        Ok(StripeStats {
            bits_per_link: 8.0 * file_bytes as f64 / self.links as f64,
            file_bytes,
            tile_tag_histogram,
            non_empty_tiles: m,
            stripe_overhead_bytes: 2 * self.params.strip_bytes() as u64 * m,
        })
    }

    pub fn save<W: Write>(&self, mut sink: W) -> Result<()> {
        sink.write_all(S2D_MAGIC)?;
        put_u32(&mut sink, self.params.side())?;
        put_u32(&mut sink, self.params.stripes())?;
        for v in [
            self.n,
            self.links,
            self.tiles_per_side,
            self.num_tiles() as u64,
        ] {
            put_u64(&mut sink, v)?;
        }
        put_u64s(&mut sink, &self.offsets)?;
        put_u64s(&mut sink, &self.x_first)?;
        put_u64s(&mut sink, &self.y_offsets)?;
        put_u64s(&mut sink, &self.y_first)?;
        put_u64(&mut sink, self.payload.len() as u64)?;
        sink.write_all(&self.payload)?;
        sink.flush()?;
        Ok(())
    }

    pub fn load<R: Read>(source: R) -> Result<Self> {
        let mut r = LeReader::new(source);
        if &r.bytes::<4>("magic")? != S2D_MAGIC {
            return Err(Error::format("not a 2D stripe graph (bad magic)"));
        }
        let side = r.u32("header")?;
        let stripes = r.u32("header")?;
        let params = TileParams::new(side, stripes).map_err(|e| Error::format(e.to_string()))?;
        let n = r.u64("header")?;
        let links = r.u64("header")?;
        let tiles_per_side = r.u64("header")?;
        let m = r.u64("header")?;
        if tiles_per_side != n.div_ceil(side as u64) {
            return Err(Error::format(format!(
                "{tiles_per_side} tiles per side recorded for {n} nodes and B = {side}"
            )));
        }
        if tiles_per_side >= MAX_TILE_COORD as u64 {
            return Err(Error::format("tile grid exceeds 3-byte coordinates"));
        }
        if m > tiles_per_side.saturating_mul(tiles_per_side) {
            return Err(Error::format(format!(
                "{m} tiles cannot fit a {tiles_per_side}-tile grid"
            )));
        }
        let offsets = r.u64_vec(m + 1, "tile offsets")?;
        let x_first = r.u64_vec(tiles_per_side + 1, "row table")?;
        let y_offsets = r.u64_vec(m, "column offsets")?;
        let y_first = r.u64_vec(tiles_per_side + 1, "column table")?;
        let payload_len = r.u64("payload length")?;
        let payload = r.byte_vec(payload_len, "payload")?;
        r.expect_end()?;
        let graph = Self {
            params,
            n,
            links,
            tiles_per_side,
            offsets,
            x_first,
            y_offsets,
            y_first,
            payload,
        };
        graph.validate()?;
        Ok(graph)
    }

    /// Checks every table invariant, including the tile coordinates recorded
    /// in each blob's trailer.
    fn validate(&self) -> Result<()> {
        let m = self.num_tiles();
        let t = self.tiles_per_side as usize;
        let sentinel = self.offsets[m];
        if sentinel != self.payload.len() as u64 {
            return Err(Error::format(
                "offset sentinel does not match the payload length",
            ));
        }
        let min_blob = self.params.trailer_len() as u64 + 1;
        for (i, w) in self.offsets.windows(2).enumerate() {
            let (a, b) = (w[0] & OFFSET_MASK, w[1] & OFFSET_MASK);
            if i == 0 && a != 0 {
                return Err(Error::format("first tile does not start the payload"));
            }
            if b < a + min_blob {
                return Err(Error::format(format!(
                    "tile {i} is shorter than its trailer"
                )));
            }
        }
        for (name, table) in [("row", &self.x_first), ("column", &self.y_first)] {
            if table[0] != 0 || table[t] != m as u64 || table.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::format(format!(
                    "{name} table must rise from 0 to the tile count {m}"
                )));
            }
        }
        for r in 0..t {
            let mut prev: Option<u32> = None;
            for i in self.x_first[r]..self.x_first[r + 1] {
                let blob = self.tile(i as usize)?;
                if blob.y_tile() as usize != r
                    || prev.is_some_and(|p| p >= blob.x_tile())
                    || blob.x_tile() as usize >= t
                {
                    return Err(Error::format(format!(
                        "tile {i} is out of place in tile-row {r}"
                    )));
                }
                prev = Some(blob.x_tile());
            }
        }
        let mut seen = vec![false; m];
        for c in 0..t {
            let mut prev: Option<u32> = None;
            for j in self.y_first[c]..self.y_first[c + 1] {
                let i = self.y_offsets[j as usize];
                if i >= m as u64 || std::mem::replace(&mut seen[i as usize], true) {
                    return Err(Error::format(format!(
                        "column entry {j} names an invalid tile"
                    )));
                }
                let blob = self.tile(i as usize)?;
                if blob.x_tile() as usize != c || prev.is_some_and(|p| p >= blob.y_tile()) {
                    return Err(Error::format(format!(
                        "tile {i} is out of place in tile-column {c}"
                    )));
                }
                prev = Some(blob.y_tile());
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_io::{g4, generate_graph};

    fn succ(sg: &StripeGraph, u: u64) -> Vec<u32> {
        sg.successors(u, &mut sg.cursor()).unwrap().to_vec()
    }

    fn pred(sg: &StripeGraph, v: u64) -> Vec<u32> {
        sg.predecessors(v, &mut sg.cursor()).unwrap().to_vec()
    }

    #[test]
    fn g4_single_tile() {
        let sg = StripeGraph::compress(&g4(), 4, 4).unwrap();
        assert_eq!(sg.num_tiles(), 1);
        assert_eq!(sg.x_first(), [0, 1]);
        assert_eq!(sg.y_first(), [0, 1]);
        assert_eq!(sg.y_offsets(), [0]);
        assert_eq!(
            sg.payload(),
            [0x02, 0x01, 0x04, 0x06, 0x03, 0x00, 0x0F, 0x0B, 0, 0, 0, 0, 0, 0]
        );
        assert_eq!(sg.offsets(), [0, 14]);
        assert_eq!(sg.num_links(), 5);
    }

    #[test]
    fn g4_single_tile_queries() {
        let sg = StripeGraph::compress(&g4(), 4, 4).unwrap();
        assert_eq!(succ(&sg, 3), [0, 3]);
        assert_eq!(succ(&sg, 0), [1, 2]);
        let mut cursor = sg.cursor();
        assert!(sg.successors(2, &mut cursor).unwrap().is_empty());
        assert_eq!(cursor.counters().bodies_decoded, 0);
        assert_eq!(pred(&sg, 2), [0, 1]);
        assert_eq!(pred(&sg, 1), [0]);
        assert_eq!(pred(&sg, 0), [3]);
        assert!(matches!(
            sg.successors(4, &mut cursor),
            Err(Error::Index { .. })
        ));
        assert!(matches!(
            sg.predecessors(9, &mut cursor),
            Err(Error::Index { .. })
        ));
    }

    #[test]
    fn g4_four_tiles() {
        let sg = StripeGraph::compress(&g4(), 2, 2).unwrap();
        assert_eq!(sg.num_tiles(), 4);
        assert_eq!(sg.x_first(), [0, 2, 4]);
        assert_eq!(sg.y_offsets(), [0, 2, 1, 3]);
        assert_eq!(sg.y_first(), [0, 2, 4]);
        let coords: Vec<(u32, u32)> = (0..4)
            .map(|i| {
                let b = sg.tile(i).unwrap();
                (b.x_tile(), b.y_tile())
            })
            .collect();
        assert_eq!(coords, [(0, 0), (1, 0), (0, 1), (1, 1)]);
        assert_eq!(succ(&sg, 0), [1, 2]);
        for u in 0..4 {
            assert_eq!(succ(&sg, u), g4().successors(u).unwrap());
            assert_eq!(pred(&sg, u), g4().transpose().successors(u).unwrap());
        }
    }

    #[test]
    fn empty_graph() {
        let sg = StripeGraph::compress(&AdjacencyGraph::default(), 128, 8).unwrap();
        assert_eq!(sg.num_tiles(), 0);
        assert_eq!(sg.x_first(), [0]);
        assert_eq!(sg.y_first(), [0]);
        assert!(sg.payload().is_empty());
        assert!(matches!(sg.stats(), Err(Error::UndefinedRatio)));
        assert_eq!(sg.to_adjacency().unwrap().num_nodes(), 0);
    }

    #[test]
    fn empty_tile_rows_have_empty_ranges() {
        let lists: Vec<Vec<u32>> = (0..40u32)
            .map(|u| if u < 8 { vec![u + 30] } else { vec![] })
            .collect();
        let g = AdjacencyGraph::from_lists(lists).unwrap();
        let sg = StripeGraph::compress(&g, 8, 0).unwrap();
        assert_eq!(sg.x_first(), [0, 2, 2, 2, 2, 2]);
        assert!(succ(&sg, 20).is_empty());
        assert_eq!(succ(&sg, 3), [33]);
    }

    #[test]
    fn builder_rejects_unsorted_rows_and_miscounts() {
        let mut b = StripeGraphBuilder::new(4, 4, 0).unwrap();
        assert!(b.push_row(&[2, 1]).is_err());
        let mut b = StripeGraphBuilder::new(4, 4, 0).unwrap();
        assert!(b.push_row(&[4]).is_err());
        let mut b = StripeGraphBuilder::new(4, 4, 0).unwrap();
        b.push_row(&[1]).unwrap();
        assert!(matches!(b.finish(), Err(Error::Precondition(_))));
    }

    #[test]
    fn ragged_border_tiles() {
        let g = generate_graph(1000, 6.0, 0.5, 21).unwrap();
        let t = g.transpose();
        let sg = StripeGraph::compress(&g, 128, 16).unwrap();
        assert_eq!(sg.tiles_per_side(), 8);
        let mut cursor = sg.cursor();
        for u in 0..1000 {
            assert_eq!(
                sg.successors(u, &mut cursor).unwrap(),
                g.successors(u).unwrap()
            );
            assert_eq!(
                sg.predecessors(u, &mut cursor).unwrap(),
                t.successors(u).unwrap()
            );
        }
        assert_eq!(sg.to_adjacency().unwrap(), g);
    }

    #[test]
    fn stats_and_overhead() {
        let g = generate_graph(3000, 8.0, 0.5, 3).unwrap();
        let plain = StripeGraph::compress(&g, 256, 0).unwrap();
        let striped = StripeGraph::compress(&g, 256, 32).unwrap();
        let (a, b) = (plain.stats().unwrap(), striped.stats().unwrap());
        assert_eq!(a.non_empty_tiles, b.non_empty_tiles);
        assert_eq!(a.tile_tag_histogram, b.tile_tag_histogram);
        assert_eq!(a.tile_tag_histogram.iter().sum::<u64>(), a.non_empty_tiles);
        assert_eq!(a.stripe_overhead_bytes, 0);
        assert_eq!(b.stripe_overhead_bytes, 8 * b.non_empty_tiles);
        assert_eq!(b.file_bytes - a.file_bytes, b.stripe_overhead_bytes);
        let expected = 8.0 * a.file_bytes as f64 / g.num_links() as f64;
        assert!((a.bits_per_link - expected).abs() < 1e-12);
    }

    fn saved(sg: &StripeGraph) -> Vec<u8> {
        let mut bytes = Vec::new();
        sg.save(&mut bytes).unwrap();
        bytes
    }

    #[test]
    fn save_load_round_trip() {
        let g = generate_graph(2500, 9.0, 0.5, 8).unwrap();
        let sg = StripeGraph::compress(&g, 256, 16).unwrap();
        let bytes = saved(&sg);
        assert_eq!(bytes.len() as u64, sg.serialized_len());
        let back = StripeGraph::load(&bytes[..]).unwrap();
        assert_eq!(back, sg);
        assert_eq!(saved(&back), bytes);
    }

    #[test]
    fn load_rejects_bad_headers() {
        let sg = StripeGraph::compress(&generate_graph(600, 5.0, 0.5, 1).unwrap(), 128, 8).unwrap();
        let bytes = saved(&sg);
        let m = sg.num_tiles();
        let t = sg.tiles_per_side() as usize;

        let mut bad = bytes.clone();
        bad[..4].copy_from_slice(b"LMG1");
        assert!(matches!(StripeGraph::load(&bad[..]), Err(Error::Format(_))));

        // K = 6 is neither 0 nor a power of two.
        let mut bad = bytes.clone();
        bad[8..12].copy_from_slice(&6u32.to_le_bytes());
        assert!(matches!(StripeGraph::load(&bad[..]), Err(Error::Format(_))));

        // x_first[T] != M.
        let mut bad = bytes.clone();
        let x_first_last = 44 + 8 * (m + 1) + 8 * t;
        bad[x_first_last..x_first_last + 8].copy_from_slice(&(m as u64 - 1).to_le_bytes());
        assert!(matches!(StripeGraph::load(&bad[..]), Err(Error::Format(_))));

        // Two column entries naming the same tile.
        let mut bad = bytes.clone();
        let y_offsets_at = 44 + 8 * (m + 1) + 8 * (t + 1);
        let first = bad[y_offsets_at..y_offsets_at + 8].to_vec();
        bad[y_offsets_at + 8..y_offsets_at + 16].copy_from_slice(&first);
        assert!(matches!(StripeGraph::load(&bad[..]), Err(Error::Format(_))));

        for cut in [2, 30, 44 + 8, bytes.len() - 1] {
            assert!(
                matches!(StripeGraph::load(&bytes[..cut]), Err(Error::Format(_))),
                "cut {cut}"
            );
        }
    }
}
