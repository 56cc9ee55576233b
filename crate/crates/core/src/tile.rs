//! One `B x B` block of the adjacency matrix.
//!
//! Inside a tile the edge at column `x`, row `y` has a horizontal index
//! `y * B + x` (row-major) and a vertical index `x * B + y` (column-major).
//! A tile is stored as the smallest of four bodies: the horizontal or
//! vertical delta list, each either plain or deflated. The two-bit encoding
//! id travels outside the blob, in the offset table. The blob itself is
//!
//! ```text
//! body | xStrip | yStrip | xTile (3 bytes LE) | yTile (3 bytes LE)
//! ```
//!
//! where the strips are `K`-bit presence maps over bands of `B / K` columns
//! and rows, absent when `K = 0`.

use crate::codec::{bit_is_set, delta_encode, scan_deltas, varbyte_encode, BitSet, Deflater};
use crate::cursor::{DecodeScratch, QueryCursor};
use crate::error::{Error, Result};

/// Tile coordinates are stored in three bytes.
pub const MAX_TILE_COORD: u32 = 1 << 24;

const MAX_TILE_SIDE: u32 = 2048;
const MAX_STRIPES: u32 = 1 << 16;

/// Which of the four bodies a tile was stored with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum TileEncoding {
    HorizontalPlain = 0,
    HorizontalDeflate = 1,
    VerticalPlain = 2,
    VerticalDeflate = 3,
}

impl TileEncoding {
    pub const ALL: [TileEncoding; 4] = [
        TileEncoding::HorizontalPlain,
        TileEncoding::HorizontalDeflate,
        TileEncoding::VerticalPlain,
        TileEncoding::VerticalDeflate,
    ];

    /// Preference among equally small bodies: plain before deflated, then
    /// horizontal before vertical.
    const TIE_ORDER: [TileEncoding; 4] = [
        TileEncoding::HorizontalPlain,
        TileEncoding::VerticalPlain,
        TileEncoding::HorizontalDeflate,
        TileEncoding::VerticalDeflate,
    ];

    pub fn from_bits(bits: u8) -> Self {
        Self::ALL[(bits & 3) as usize]
    }

    pub fn bits(self) -> u8 {
        self as u8
    }

    pub fn is_vertical(self) -> bool {
        self as u8 & 2 != 0
    }

    pub fn is_deflated(self) -> bool {
        self as u8 & 1 != 0
    }
}

/// Tile side `B` and stripe count `K`, both powers of two (`K = 0` disables
/// stripes).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TileParams {
    side: u32,
    log_side: u32,
    stripes: u32,
}

impl TileParams {
    pub fn new(side: u32, stripes: u32) -> Result<Self> {
        if !side.is_power_of_two() || side > MAX_TILE_SIDE {
            return Err(Error::Parameter(format!(
                "tile side must be a power of two no larger than {MAX_TILE_SIDE}, got {side}"
            )));
        }
        if stripes != 0 && (!stripes.is_power_of_two() || stripes > MAX_STRIPES) {
            return Err(Error::Parameter(format!(
                "stripe count must be 0 or a power of two no larger than {MAX_STRIPES}, got {stripes}"
            )));
        }
        Ok(Self {
            side,
            log_side: side.trailing_zeros(),
            stripes,
        })
    }

    pub fn side(&self) -> u32 {
        self.side
    }

    pub fn log_side(&self) -> u32 {
        self.log_side
    }

    pub fn stripes(&self) -> u32 {
        self.stripes
    }

    /// Bytes per stripe bitmap.
    pub fn strip_bytes(&self) -> usize {
        self.stripes.div_ceil(8) as usize
    }

    pub fn trailer_len(&self) -> usize {
        2 * self.strip_bytes() + 6
    }

    #[inline]
    pub fn stripe_of(&self, coord: u32) -> usize {
        ((coord as u64 * self.stripes as u64) >> self.log_side) as usize
    }

    /// Upper bound on a decoded body: every cell set, each delta in 3 bytes,
    /// plus the terminator.
    pub fn max_plain_body(&self) -> usize {
        3 * (self.side as usize).pow(2) + 1
    }
}

/// A tile under construction. Edges must arrive in row-major order.
#[derive(Debug, Clone)]
pub struct UncompressedTile {
    params: TileParams,
    /// Row-major deltas, varbyte coded as they arrive (no terminator yet).
    h_stream: Vec<u8>,
    v_indices: Vec<u32>,
    x_strip: BitSet,
    y_strip: BitSet,
    last_h: i64,
}

impl UncompressedTile {
    pub fn new(params: TileParams) -> Self {
        Self {
            params,
            h_stream: Vec::new(),
            v_indices: Vec::new(),
            x_strip: BitSet::new(params.stripes as usize),
            y_strip: BitSet::new(params.stripes as usize),
            last_h: -1,
        }
    }

    pub fn params(&self) -> &TileParams {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.v_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v_indices.is_empty()
    }

    pub fn x_strip(&self) -> &BitSet {
        &self.x_strip
    }

    pub fn y_strip(&self) -> &BitSet {
        &self.y_strip
    }

    pub fn vertical_indices(&self) -> &[u32] {
        &self.v_indices
    }

    /// The row-major delta stream gathered so far, without terminator.
    pub fn horizontal_stream(&self) -> &[u8] {
        &self.h_stream
    }

    /// Adds the edge at column `x`, row `y`.
    pub fn add_link(&mut self, x: u32, y: u32) -> Result<()> {
        let side = self.params.side;
        if x >= side || y >= side {
            return Err(Error::Precondition(format!(
                "cell ({x}, {y}) outside a {side}x{side} tile"
            )));
        }
        let h = ((y as i64) << self.params.log_side) + x as i64;
        if h <= self.last_h {
            return Err(Error::Precondition(format!(
                "cell ({x}, {y}) arrives out of row-major order or twice"
            )));
        }
        varbyte_encode((h - self.last_h) as u32, &mut self.h_stream)?;
        self.last_h = h;
        self.v_indices.push((x << self.params.log_side) + y);
        if self.params.stripes > 0 {
            self.x_strip.set(self.params.stripe_of(x));
            self.y_strip.set(self.params.stripe_of(y));
        }
        Ok(())
    }

    pub fn clear(&mut self) {
        self.h_stream.clear();
        self.v_indices.clear();
        self.x_strip.clear();
        self.y_strip.clear();
        self.last_h = -1;
    }
}

/// Outcome of [`TileEncoder::compress`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompressedTile {
    pub encoding: TileEncoding,
    pub bytes_written: usize,
    /// Body length of every candidate, indexed by encoding id.
    pub candidate_lens: [usize; 4],
}

/// Buffers reused across tile compressions.
#[derive(Default)]
pub struct TileEncoder {
    deflater: Deflater,
    candidates: [Vec<u8>; 4],
}

impl TileEncoder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Encodes `tile` at tile coordinates (`x_tile`, `y_tile`) and appends
    /// the chosen body and trailer to `out`.
    ///
    /// Sorts the tile's vertical indices in place; the tile should be
    /// cleared afterwards.
    pub fn compress(
        &mut self,
        tile: &mut UncompressedTile,
        x_tile: u32,
        y_tile: u32,
        out: &mut Vec<u8>,
    ) -> Result<CompressedTile> {
        if tile.is_empty() {
            return Err(Error::Precondition("empty tiles are never stored".into()));
        }
        if x_tile >= MAX_TILE_COORD || y_tile >= MAX_TILE_COORD {
            return Err(Error::Capacity(format!(
                "tile ({x_tile}, {y_tile}) does not fit 3-byte coordinates"
            )));
        }
        let [h_plain, h_zip, v_plain, v_zip] = &mut self.candidates;
        h_plain.clear();
        h_plain.extend_from_slice(&tile.h_stream);
        h_plain.push(0);
        h_zip.clear();
        self.deflater.deflate(h_plain, h_zip);

        tile.v_indices.sort_unstable();
        v_plain.clear();
        delta_encode(&tile.v_indices, v_plain)?;
        v_zip.clear();
        self.deflater.deflate(v_plain, v_zip);

        let candidate_lens = [h_plain.len(), h_zip.len(), v_plain.len(), v_zip.len()];
        let encoding = select_encoding(candidate_lens);

        let start = out.len();
        out.extend_from_slice(&self.candidates[encoding as usize]);
        out.extend_from_slice(tile.x_strip.as_bytes());
        out.extend_from_slice(tile.y_strip.as_bytes());
        out.extend_from_slice(&x_tile.to_le_bytes()[..3]);
        out.extend_from_slice(&y_tile.to_le_bytes()[..3]);
        Ok(CompressedTile {
            encoding,
            bytes_written: out.len() - start,
            candidate_lens,
        })
    }
}

/// Smallest body wins; ties go by [`TileEncoding::TIE_ORDER`].
pub fn select_encoding(lens: [usize; 4]) -> TileEncoding {
    let mut best = TileEncoding::TIE_ORDER[0];
    for &candidate in &TileEncoding::TIE_ORDER[1..] {
        if lens[candidate as usize] < lens[best as usize] {
            best = candidate;
        }
    }
    best
}

/// A stored tile: blob bytes plus the encoding id from its offset entry.
#[derive(Debug, Clone, Copy)]
pub struct TileBlob<'a> {
    bytes: &'a [u8],
    encoding: TileEncoding,
    params: TileParams,
}

impl<'a> TileBlob<'a> {
    pub fn new(bytes: &'a [u8], encoding: TileEncoding, params: TileParams) -> Result<Self> {
        if bytes.len() <= params.trailer_len() {
            return Err(Error::corrupt(format!(
                "tile blob of {} bytes has no room for a body",
                bytes.len()
            )));
        }
        Ok(Self {
            bytes,
            encoding,
            params,
        })
    }

    pub fn encoding(&self) -> TileEncoding {
        self.encoding
    }

    pub fn body(&self) -> &'a [u8] {
        &self.bytes[..self.bytes.len() - self.params.trailer_len()]
    }

    pub fn x_strip(&self) -> &'a [u8] {
        let sb = self.params.strip_bytes();
        let end = self.bytes.len() - 6 - sb;
        &self.bytes[end - sb..end]
    }

    pub fn y_strip(&self) -> &'a [u8] {
        let sb = self.params.strip_bytes();
        let end = self.bytes.len() - 6;
        &self.bytes[end - sb..end]
    }

    pub fn x_tile(&self) -> u32 {
        read_u24(&self.bytes[self.bytes.len() - 6..])
    }

    pub fn y_tile(&self) -> u32 {
        read_u24(&self.bytes[self.bytes.len() - 3..])
    }

    fn row_may_have_edges(&self, row: u32) -> bool {
        self.params.stripes == 0 || bit_is_set(self.y_strip(), self.params.stripe_of(row))
    }

    fn col_may_have_edges(&self, col: u32) -> bool {
        self.params.stripes == 0 || bit_is_set(self.x_strip(), self.params.stripe_of(col))
    }

    /// Emits the in-tile columns of the edges in `row`, in increasing order.
    pub fn decode_row(
        &self,
        row: u32,
        cursor: &mut QueryCursor,
        emit: impl FnMut(u32),
    ) -> Result<()> {
        self.decode_line(row, false, &mut cursor.decode, emit)
    }

    /// Emits the in-tile rows of the edges in `col`, in increasing order.
    pub fn decode_col(
        &self,
        col: u32,
        cursor: &mut QueryCursor,
        emit: impl FnMut(u32),
    ) -> Result<()> {
        self.decode_line(col, true, &mut cursor.decode, emit)
    }

    /// Shared row/column decoder. `by_column` selects predecessor mode.
    /// When the body's numbering matches the requested direction, the
    /// requested line is a contiguous value range and decoding stops once
    /// past it; otherwise every value is decoded and filtered.
    pub(crate) fn decode_line(
        &self,
        line: u32,
        by_column: bool,
        scratch: &mut DecodeScratch,
        mut emit: impl FnMut(u32),
    ) -> Result<()> {
        scratch.counters.tiles_visited += 1;
        let gated_in = if by_column {
            self.col_may_have_edges(line)
        } else {
            self.row_may_have_edges(line)
        };
        if !gated_in {
            return Ok(());
        }
        scratch.counters.bodies_decoded += 1;
        let body = if self.encoding.is_deflated() {
            scratch.inflate(self.body(), self.params.max_plain_body())?
        } else {
            self.body()
        };
        let log = self.params.log_side;
        let mask = self.params.side - 1;
        let cells = 1u32 << (2 * log);
        if self.encoding.is_vertical() == by_column {
            let lo = line << log;
            let hi = lo + self.params.side;
            scan_deltas(body, 0, |v| {
                if v >= lo && v < hi {
                    emit(v - lo);
                }
                v < hi
            })?;
        } else {
            let mut outside = None;
            scan_deltas(body, 0, |v| {
                if v >= cells {
                    outside = Some(v);
                    return false;
                }
                if v & mask == line {
                    emit(v >> log);
                }
                true
            })?;
            if let Some(v) = outside {
                return Err(Error::corrupt(format!("tile index {v} outside the tile")));
            }
        }
        Ok(())
    }

    /// Every edge of the tile as (column, row), in the body's native order.
    pub fn for_each_edge(
        &self,
        cursor: &mut QueryCursor,
        mut emit: impl FnMut(u32, u32),
    ) -> Result<()> {
        let scratch = &mut cursor.decode;
        let body = if self.encoding.is_deflated() {
            scratch.inflate(self.body(), self.params.max_plain_body())?
        } else {
            self.body()
        };
        let log = self.params.log_side;
        let mask = self.params.side - 1;
        let cells = 1u32 << (2 * log);
        let vertical = self.encoding.is_vertical();
        let mut outside = None;
        scan_deltas(body, 0, |v| {
            if v >= cells {
                outside = Some(v);
                return false;
            }
            let (major, minor) = (v >> log, v & mask);
            if vertical {
                emit(major, minor);
            } else {
                emit(minor, major);
            }
            true
        })?;
        match outside {
            Some(v) => Err(Error::corrupt(format!("tile index {v} outside the tile"))),
            None => Ok(()),
        }
    }
}

fn read_u24(b: &[u8]) -> u32 {
    b[0] as u32 | (b[1] as u32) << 8 | (b[2] as u32) << 16
}
