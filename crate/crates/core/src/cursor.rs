use crate::codec::Inflater;
use crate::error::Result;

/// Work counters accumulated by a [`QueryCursor`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DecodeCounters {
    /// Tiles whose row or column range was examined.
    pub tiles_visited: u64,
    /// Tile bodies (or LM chunks) actually decoded after stripe gating.
    pub bodies_decoded: u64,
    /// DEFLATE streams inflated.
    pub inflates: u64,
}

/// Per-query scratch space.
///
/// The compressed graphs are immutable; every mutable buffer a query needs
/// lives here, so any number of threads can query one graph as long as each
/// owns its cursor.
#[derive(Debug, Default)]
pub struct QueryCursor {
    pub(crate) decode: DecodeScratch,
    pub(crate) out: Vec<u32>,
    pub(crate) values: Vec<u32>,
}

#[derive(Debug, Default)]
pub(crate) struct DecodeScratch {
    pub(crate) inflated: Vec<u8>,
    pub(crate) inflater: Inflater,
    pub(crate) counters: DecodeCounters,
}

impl DecodeScratch {
    /// Inflates `input` into the scratch buffer, growing it to `bound` first
    /// if needed, and returns the decoded bytes.
    pub(crate) fn inflate(&mut self, input: &[u8], bound: usize) -> Result<&[u8]> {
        if self.inflated.len() < bound {
            self.inflated.resize(bound, 0);
        }
        self.counters.inflates += 1;
        let len = self
            .inflater
            .inflate_into(input, &mut self.inflated[..bound])?;
        Ok(&self.inflated[..len])
    }
}

impl QueryCursor {
    pub fn new() -> Self {
        Self::default()
    }

    /// A cursor whose inflate scratch is already `scratch_bytes` long.
    pub fn with_scratch(scratch_bytes: usize) -> Self {
        let mut cursor = Self::default();
        cursor.decode.inflated.resize(scratch_bytes, 0);
        cursor
    }

    pub fn counters(&self) -> DecodeCounters {
        self.decode.counters
    }

    pub fn reset_counters(&mut self) {
        self.decode.counters = DecodeCounters::default();
    }

    /// The list produced by the most recent query.
    pub fn last_output(&self) -> &[u32] {
        &self.out
    }
}
