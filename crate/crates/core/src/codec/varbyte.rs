//! Tagged variable-byte integers and the delta lists built on top of them.
//!
//! The two most significant bits of the first byte hold the length tag:
//!
//! | tag  | bytes | payload bits |
//! |------|-------|--------------|
//! | `00` | 1     | 6            |
//! | `01` | 2     | 14           |
//! | `10` | 3     | 22           |
//!
//! The payload is stored most significant group first, so a value below 64 is
//! its own encoding. Tag `11` is reserved. Its single legal use is the
//! three-byte escape `C0 00 00`, which stands for exactly `2^22`: a delta list
//! stores its first element as `value + 1`, and a 2048-wide tile can hold the
//! index `2^22 - 1`.

use crate::error::{Error, Result};

/// Largest value with a regular (tag `00`..`10`) encoding, plus one.
pub const VARBYTE_LIMIT: u32 = 1 << 22;

const TAG_MASK: u8 = 0xC0;
const ESCAPE: [u8; 3] = [0xC0, 0x00, 0x00];

/// Number of bytes `v` occupies once encoded.
#[inline]
pub fn varbyte_len(v: u32) -> usize {
    if v < 1 << 6 {
        1
    } else if v < 1 << 14 {
        2
    } else {
        3
    }
}

/// Appends the canonical encoding of `v` to `out`.
#[inline]
pub fn varbyte_encode(v: u32, out: &mut Vec<u8>) -> Result<()> {
    if v < 1 << 6 {
        out.push(v as u8);
    } else if v < 1 << 14 {
        out.extend_from_slice(&[0x40 | (v >> 8) as u8, v as u8]);
    } else if v < VARBYTE_LIMIT {
        out.extend_from_slice(&[0x80 | (v >> 16) as u8, (v >> 8) as u8, v as u8]);
    } else if v == VARBYTE_LIMIT {
        out.extend_from_slice(&ESCAPE);
    } else {
        return Err(Error::Range { value: v as u64 });
    }
    Ok(())
}

/// Decodes the integer starting at `pos`, returning it with the position just
/// past it.
#[inline]
pub fn varbyte_decode(bytes: &[u8], pos: usize) -> Result<(u32, usize)> {
    let first = *bytes
        .get(pos)
        .ok_or_else(|| Error::corrupt(format!("varbyte truncated at byte {pos}")))?;
    let len = match first & TAG_MASK {
        0x00 => return Ok((first as u32, pos + 1)),
        0x40 => 2,
        _ => 3,
    };
    let Some(tail) = bytes.get(pos + 1..pos + len) else {
        return Err(Error::corrupt(format!("varbyte truncated at byte {pos}")));
    };
    let payload = tail
        .iter()
        .fold((first & !TAG_MASK) as u32, |acc, &b| (acc << 8) | b as u32);
    if first & TAG_MASK == TAG_MASK {
        if first == ESCAPE[0] && payload == 0 {
            return Ok((VARBYTE_LIMIT, pos + 3));
        }
        return Err(Error::corrupt(format!(
            "reserved varbyte tag at byte {pos}"
        )));
    }
    Ok((payload, pos + len))
}

/// Appends a terminated delta list for the strictly increasing `values`.
///
/// The first element is stored as `values[0] + 1`, every later one as the gap
/// to its predecessor, and a `0` closes the list.
pub fn delta_encode(values: &[u32], out: &mut Vec<u8>) -> Result<()> {
    let mut last: i64 = -1;
    for (i, &v) in values.iter().enumerate() {
        let gap = v as i64 - last;
        if gap <= 0 {
            return Err(Error::Precondition(format!(
                "delta input not strictly increasing at index {i} ({v} after {last})"
            )));
        }
        if gap > VARBYTE_LIMIT as i64 {
            return Err(Error::Range { value: gap as u64 });
        }
        varbyte_encode(gap as u32, out)?;
        last = v as i64;
    }
    out.push(0);
    Ok(())
}

/// Decodes a terminated delta list starting at `pos` into `out` (which is
/// cleared first) and returns the position just past the terminator.
pub fn delta_decode(bytes: &[u8], pos: usize, out: &mut Vec<u32>) -> Result<usize> {
    out.clear();
    scan_deltas(bytes, pos, |v| {
        out.push(v);
        true
    })
}

/// Calls `visit` with each value of the delta list starting at `pos` until
/// the terminator or until `visit` returns `false`. Returns the position just
/// past the last byte read.
#[inline]
pub fn scan_deltas(
    bytes: &[u8],
    mut pos: usize,
    mut visit: impl FnMut(u32) -> bool,
) -> Result<usize> {
    let mut last = u64::MAX;
    loop {
        let gap = match bytes.get(pos..pos + 3) {
            // Branch-free for the three normal lengths: read three bytes and
            // shift away the ones that belong to the next value.
            Some(&[b0, b1, b2]) if b0 & TAG_MASK != TAG_MASK => {
                let tag = (b0 >> 6) as usize;
                let raw = ((b0 & !TAG_MASK) as u32) << 16 | (b1 as u32) << 8 | b2 as u32;
                pos += tag + 1;
                (raw >> (8 * (2 - tag))) as u64
            }
            // Escape, reserved tag, or fewer than three bytes left.
            _ => {
                let (gap, next) = long_gap(bytes, pos)?;
                pos = next;
                gap as u64
            }
        };
        if gap == 0 {
            return Ok(pos);
        }
        last = last.wrapping_add(gap);
        if last > u32::MAX as u64 {
            return Err(Error::corrupt("delta list overflows 32 bits"));
        }
        if !visit(last as u32) {
            return Ok(pos);
        }
    }
}

#[cold]
fn long_gap(bytes: &[u8], pos: usize) -> Result<(u32, usize)> {
    varbyte_decode(bytes, pos).map_err(|e| match e {
        Error::Corrupt(m) if m.starts_with("reserved") => Error::Corrupt(m),
        _ => Error::corrupt("delta list ends without a terminator"),
    })
}

/// Streaming decoder for one delta list, for callers that can stop early.
#[derive(Debug, Clone)]
pub struct DeltaReader<'a> {
    bytes: &'a [u8],
    pos: usize,
    last: i64,
}

impl<'a> DeltaReader<'a> {
    pub fn new(bytes: &'a [u8], pos: usize) -> Self {
        Self {
            bytes,
            pos,
            last: -1,
        }
    }

    /// Next value, or `None` once the terminator has been consumed.
    #[inline]
    pub fn next_value(&mut self) -> Result<Option<u32>> {
        // One-byte gaps dominate dense lists; skip the general decoder for them.
        let gap = match self.bytes.get(self.pos) {
            Some(&b) if b & TAG_MASK == 0 => {
                self.pos += 1;
                b as u32
            }
            _ => self.next_long_gap()?,
        };
        if gap == 0 {
            return Ok(None);
        }
        self.last += gap as i64;
        u32::try_from(self.last)
            .map(Some)
            .map_err(|_| Error::corrupt("delta list overflows 32 bits"))
    }

    fn next_long_gap(&mut self) -> Result<u32> {
        let (gap, next) = long_gap(self.bytes, self.pos)?;
        self.pos = next;
        Ok(gap)
    }

    pub fn position(&self) -> usize {
        self.pos
    }
}
