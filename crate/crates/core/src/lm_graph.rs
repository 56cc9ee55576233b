//! List merging: chunks of `h` consecutive adjacency lists stored as one
//! merged residue list plus a per-residue membership bitmap.
//!
//! A chunk decodes to
//!
//! ```text
//! delta_encode(residues) | flags(residue 0) | flags(residue 1) | ...
//! ```
//!
//! where each flags entry is `ceil(h / 8)` bytes and bit `k` (LSB-first) is
//! set when list `chunk_base + k` contains the residue. The whole chunk is
//! stored as one raw DEFLATE stream.
//!
//! File layout (`.lmg`, little-endian): `"LMG1" | u32 h | u64 n |
//! u64 chunks | u64 max_plain_chunk | (chunks + 1) x u64 offsets |
//! u64 payload_len | payload`.

use std::io::{Read, Write};
use std::ops::Range;

use crate::binio::{put_u32, put_u64, put_u64s, LeReader};
use crate::codec::{bit_is_set, delta_decode, delta_encode, Deflater};
use crate::cursor::QueryCursor;
use crate::error::{Error, Result};
use crate::graph_io::{AdjacencyGraph, GraphBuilder};

pub const LM_MAGIC: &[u8; 4] = b"LMG1";

const MAX_CHUNK_HEIGHT: u32 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LmGraph {
    h: u32,
    n: u64,
    max_plain_chunk: u64,
    offsets: Vec<u64>,
    payload: Vec<u8>,
}

fn check_height(h: u32) -> Result<()> {
    if !h.is_power_of_two() || h > MAX_CHUNK_HEIGHT {
        return Err(Error::Parameter(format!(
            "chunk height must be a power of two no larger than {MAX_CHUNK_HEIGHT}, got {h}"
        )));
    }
    Ok(())
}

/// Builds the decoded form of chunk `nodes` into `plain`.
fn encode_chunk(
    g: &AdjacencyGraph,
    nodes: Range<usize>,
    flag_bytes: usize,
    residues: &mut Vec<u32>,
    plain: &mut Vec<u8>,
) -> Result<()> {
    residues.clear();
    for u in nodes.clone() {
        residues.extend_from_slice(g.row(u));
    }
    residues.sort_unstable();
    residues.dedup();

    plain.clear();
    delta_encode(residues, plain).map_err(|e| match e {
        Error::Range { .. } => Error::Capacity(format!(
            "residue gap in nodes {}..{} exceeds the 22-bit varbyte range",
            nodes.start, nodes.end
        )),
        other => other,
    })?;
    let flags_start = plain.len();
    plain.resize(flags_start + residues.len() * flag_bytes, 0);
    let flags = &mut plain[flags_start..];
    for (k, u) in nodes.enumerate() {
        for v in g.row(u) {
            let idx = residues
                .binary_search(v)
                .expect("residue set is the union of the chunk rows");
            flags[idx * flag_bytes + (k >> 3)] |= 1 << (k & 7);
        }
    }
    Ok(())
}

impl LmGraph {
    /// Compresses `g` with chunk height `h` (a power of two).
    pub fn compress(g: &AdjacencyGraph, h: u32) -> Result<Self> {
        check_height(h)?;
        let n = g.num_nodes();
        let flag_bytes = h.div_ceil(8) as usize;
        let num_chunks = n.div_ceil(h as usize);
        let mut deflater = Deflater::new();
        let mut residues = Vec::new();
        let mut plain = Vec::new();
        let mut offsets = Vec::with_capacity(num_chunks + 1);
        let mut payload = Vec::new();
        let mut max_plain_chunk = 0;
        offsets.push(0);
        for c in 0..num_chunks {
            let base = c * h as usize;
            encode_chunk(
                g,
                base..n.min(base + h as usize),
                flag_bytes,
                &mut residues,
                &mut plain,
            )?;
            max_plain_chunk = max_plain_chunk.max(plain.len() as u64);
            deflater.deflate(&plain, &mut payload);
            offsets.push(payload.len() as u64);
        }
        Ok(Self {
            h,
            n: n as u64,
            max_plain_chunk,
            offsets,
            payload,
        })
    }

    pub fn chunk_height(&self) -> u32 {
        self.h
    }

    pub fn num_nodes(&self) -> u64 {
        self.n
    }

    pub fn num_chunks(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn offsets(&self) -> &[u64] {
        &self.offsets
    }

    pub fn payload(&self) -> &[u8] {
        &self.payload
    }

    pub fn max_plain_chunk(&self) -> u64 {
        self.max_plain_chunk
    }

    fn flag_bytes(&self) -> usize {
        self.h.div_ceil(8) as usize
    }

    /// A cursor with scratch sized for this graph's largest chunk.
    pub fn cursor(&self) -> QueryCursor {
        QueryCursor::with_scratch(self.max_plain_chunk as usize)
    }

    /// Inflates chunk `c` and splits it into residues (left in
    /// `cursor.values`) and the flag bytes, returned as a range into the
    /// cursor's scratch.
    fn open_chunk(&self, c: usize, cursor: &mut QueryCursor) -> Result<Range<usize>> {
        let (start, end) = (self.offsets[c] as usize, self.offsets[c + 1] as usize);
        cursor.decode.counters.bodies_decoded += 1;
        let plain = cursor
            .decode
            .inflate(&self.payload[start..end], self.max_plain_chunk as usize)?;
        let flags_at = delta_decode(plain, 0, &mut cursor.values)?;
        let flag_len = cursor.values.len() * self.flag_bytes();
        if plain.len() - flags_at != flag_len {
            return Err(Error::corrupt(format!(
                "chunk {c} carries {} flag bytes, expected {flag_len}",
                plain.len() - flags_at
            )));
        }
        Ok(flags_at..plain.len())
    }

    /// The decoded bytes of chunk `c`.
    pub fn plain_chunk(&self, c: usize) -> Result<Vec<u8>> {
        if c >= self.num_chunks() {
            return Err(Error::Index {
                node: c as u64,
                n: self.num_chunks() as u64,
            });
        }
        let mut cursor = self.cursor();
        let range = self.open_chunk(c, &mut cursor)?;
        Ok(cursor.decode.inflated[..range.end].to_vec())
    }

    /// Successors of `u`, in increasing order.
    pub fn successors<'c>(&self, u: u64, cursor: &'c mut QueryCursor) -> Result<&'c [u32]> {
        if u >= self.n {
            return Err(Error::Index { node: u, n: self.n });
        }
        let (c, row) = ((u / self.h as u64) as usize, (u % self.h as u64) as usize);
        let flags = self.open_chunk(c, cursor)?;
        let stride = self.flag_bytes();
        let flag_bytes = &cursor.decode.inflated[flags];
        cursor.out.clear();
        for (i, &residue) in cursor.values.iter().enumerate() {
            if bit_is_set(&flag_bytes[i * stride..], row) {
                cursor.out.push(residue);
            }
        }
        Ok(&cursor.out)
    }

    /// Decodes every chunk once and rebuilds the adjacency lists.
    pub fn to_adjacency(&self) -> Result<AdjacencyGraph> {
        let mut cursor = self.cursor();
        let mut builder = GraphBuilder::new();
        let stride = self.flag_bytes();
        let h = self.h as u64;
        let mut rows: Vec<Vec<u32>> = vec![Vec::new(); self.h as usize];
        for c in 0..self.num_chunks() {
            let flags = self.open_chunk(c, &mut cursor)?;
            let flag_bytes = &cursor.decode.inflated[flags];
            let height = (self.n - c as u64 * h).min(h) as usize;
            for (i, &residue) in cursor.values.iter().enumerate() {
                let entry = &flag_bytes[i * stride..(i + 1) * stride];
                for (k, row) in rows.iter_mut().enumerate().take(height) {
                    if bit_is_set(entry, k) {
                        row.push(residue);
                    }
                }
            }
            for row in rows.iter_mut().take(height) {
                builder.push_row(row);
                row.clear();
            }
        }
        builder.finish()
    }

    pub fn serialized_len(&self) -> u64 {
        4 + 4 + 8 * 3 + 8 * self.offsets.len() as u64 + 8 + self.payload.len() as u64
    }

    pub fn save<W: Write>(&self, mut sink: W) -> Result<()> {
        sink.write_all(LM_MAGIC)?;
        put_u32(&mut sink, self.h)?;
        put_u64(&mut sink, self.n)?;
        put_u64(&mut sink, self.num_chunks() as u64)?;
        put_u64(&mut sink, self.max_plain_chunk)?;
        put_u64s(&mut sink, &self.offsets)?;
        put_u64(&mut sink, self.payload.len() as u64)?;
        sink.write_all(&self.payload)?;
        sink.flush()?;
        Ok(())
    }

    pub fn load<R: Read>(source: R) -> Result<Self> {
        let mut r = LeReader::new(source);
        if &r.bytes::<4>("magic")? != LM_MAGIC {
            return Err(Error::format("not an LM graph (bad magic)"));
        }
        let h = r.u32("header")?;
        check_height(h).map_err(|_| Error::format(format!("invalid chunk height {h}")))?;
        let n = r.u64("header")?;
        let num_chunks = r.u64("header")?;
        if num_chunks != n.div_ceil(h as u64) {
            return Err(Error::format(format!(
                "{num_chunks} chunks recorded for {n} nodes of height {h}"
            )));
        }
        let max_plain_chunk = r.u64("header")?;
        let flag_bytes = h.div_ceil(8) as u64;
        // Every residue costs at most 3 varbyte bytes plus its flags.
        let plain_bound = n
            .saturating_add(1)
            .saturating_mul(3 + flag_bytes)
            .saturating_add(1);
        if max_plain_chunk > plain_bound {
            return Err(Error::format(format!(
                "implausible chunk bound {max_plain_chunk}"
            )));
        }
        let offsets = r.u64_vec(num_chunks + 1, "offset table")?;
        if offsets[0] != 0 || offsets.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::format("chunk offsets are not non-decreasing from 0"));
        }
        let payload_len = r.u64("payload length")?;
        if offsets[num_chunks as usize] != payload_len {
            return Err(Error::format(format!(
                "last offset {} does not match payload length {payload_len}",
                offsets[num_chunks as usize]
            )));
        }
        let payload = r.byte_vec(payload_len, "payload")?;
        r.expect_end()?;
        Ok(Self {
            h,
            n,
            max_plain_chunk,
            offsets,
            payload,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_io::{g4, generate_graph};

    #[test]
    fn g4_chunk_bytes() {
        let lm = LmGraph::compress(&g4(), 2).unwrap();
        assert_eq!(lm.num_chunks(), 2);
        assert_eq!(lm.plain_chunk(0).unwrap(), [0x02, 0x01, 0x00, 0x01, 0x03]);
        assert_eq!(lm.plain_chunk(1).unwrap(), [0x01, 0x03, 0x00, 0x02, 0x02]);
        assert_eq!(lm.offsets()[0], 0);
        assert_eq!(*lm.offsets().last().unwrap(), lm.payload().len() as u64);
    }

    #[test]
    fn g4_padded_to_sixteen() {
        let lm = LmGraph::compress(&g4(), 16).unwrap();
        assert_eq!(lm.num_chunks(), 1);
        assert_eq!(
            lm.plain_chunk(0).unwrap(),
            [1, 1, 1, 1, 0, 0x08, 0x00, 0x01, 0x00, 0x03, 0x00, 0x08, 0x00]
        );
    }

    #[test]
    fn g4_queries() {
        let lm = LmGraph::compress(&g4(), 2).unwrap();
        let mut cursor = lm.cursor();
        assert_eq!(lm.successors(0, &mut cursor).unwrap(), [1, 2]);
        assert_eq!(lm.successors(1, &mut cursor).unwrap(), [2]);
        assert!(lm.successors(2, &mut cursor).unwrap().is_empty());
        assert_eq!(lm.successors(3, &mut cursor).unwrap(), [0, 3]);
        assert!(matches!(
            lm.successors(4, &mut cursor),
            Err(Error::Index { node: 4, n: 4 })
        ));
    }

    #[test]
    fn empty_graph() {
        let lm = LmGraph::compress(&AdjacencyGraph::default(), 8).unwrap();
        assert_eq!(lm.num_chunks(), 0);
        assert!(lm.payload().is_empty());
        assert_eq!(lm.offsets(), [0]);
        assert_eq!(lm.to_adjacency().unwrap().num_nodes(), 0);
    }

    #[test]
    fn empty_lists_are_terminator_only() {
        let g = AdjacencyGraph::from_lists(vec![Vec::<u32>::new(); 20]).unwrap();
        let lm = LmGraph::compress(&g, 8).unwrap();
        for c in 0..lm.num_chunks() {
            assert_eq!(lm.plain_chunk(c).unwrap(), [0x00]);
        }
        let mut cursor = lm.cursor();
        assert!(lm.successors(19, &mut cursor).unwrap().is_empty());
    }

    #[test]
    fn bad_height() {
        assert!(matches!(
            LmGraph::compress(&g4(), 12),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            LmGraph::compress(&g4(), 0),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn partial_final_chunk() {
        let g = generate_graph(1000 + 37, 8.0, 0.5, 9).unwrap();
        for h in [8, 64, 128] {
            let lm = LmGraph::compress(&g, h).unwrap();
            let mut cursor = lm.cursor();
            for u in 1000..1037 {
                assert_eq!(
                    lm.successors(u, &mut cursor).unwrap(),
                    g.successors(u).unwrap()
                );
            }
            assert!(lm.successors(1037, &mut cursor).is_err());
            let last = lm.plain_chunk(lm.num_chunks() - 1).unwrap();
            let mut residues = Vec::new();
            let at = delta_decode(&last, 0, &mut residues).unwrap();
            let rows_in_chunk = 1037 % h as usize;
            for entry in last[at..].chunks(h as usize / 8) {
                for k in rows_in_chunk..h as usize {
                    assert!(!bit_is_set(entry, k));
                }
            }
        }
    }

    #[test]
    fn capacity_error_names_nodes() {
        let n = (1usize << 22) + 2;
        let g = AdjacencyGraph::from_lists((0..n).map(|u| {
            if u == 0 {
                vec![(n - 1) as u32]
            } else {
                vec![]
            }
        }))
        .unwrap();
        let err = LmGraph::compress(&g, 8).unwrap_err();
        assert!(
            matches!(&err, Error::Capacity(m) if m.contains("0..8")),
            "{err}"
        );
    }

    #[test]
    fn save_load_round_trip() {
        let g = generate_graph(3000, 10.0, 0.6, 1).unwrap();
        let lm = LmGraph::compress(&g, 32).unwrap();
        let mut bytes = Vec::new();
        lm.save(&mut bytes).unwrap();
        assert_eq!(bytes.len() as u64, lm.serialized_len());
        let back = LmGraph::load(&bytes[..]).unwrap();
        assert_eq!(back, lm);
        let mut again = Vec::new();
        back.save(&mut again).unwrap();
        assert_eq!(again, bytes);
    }

    #[test]
    fn load_rejects_bad_files() {
        let lm = LmGraph::compress(&generate_graph(100, 5.0, 0.5, 2).unwrap(), 8).unwrap();
        let mut bytes = Vec::new();
        lm.save(&mut bytes).unwrap();

        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(LmGraph::load(&bad[..]), Err(Error::Format(_))));

        // Last offset disagrees with the payload length.
        let mut bad = bytes.clone();
        let last_offset_at = 4 + 4 + 24 + 8 * lm.num_chunks();
        bad[last_offset_at] ^= 1;
        assert!(matches!(LmGraph::load(&bad[..]), Err(Error::Format(_))));

        for cut in [3, 20, bytes.len() - 1] {
            assert!(
                matches!(LmGraph::load(&bytes[..cut]), Err(Error::Format(_))),
                "cut {cut}"
            );
        }

        let mut bad = bytes.clone();
        bad.push(0);
        assert!(matches!(LmGraph::load(&bad[..]), Err(Error::Format(_))));
    }

    #[test]
    fn corrupt_payload_is_reported() {
        let g = generate_graph(200, 6.0, 0.5, 4).unwrap();
        let mut lm = LmGraph::compress(&g, 8).unwrap();
        let end = lm.offsets[1] as usize;
        for b in &mut lm.payload[..end] {
            *b = !*b;
        }
        let mut cursor = lm.cursor();
        assert!(lm.successors(0, &mut cursor).is_err());
    }
}
