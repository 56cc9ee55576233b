//! Byte-level encodings shared by the LM and 2D formats.

mod bitset;
mod deflate;
mod varbyte;

pub use bitset::{bit_is_set, BitSet};
pub use deflate::{deflate_block, inflate_block, Deflater, Inflater};
pub use varbyte::{
    delta_decode, delta_encode, scan_deltas, varbyte_decode, varbyte_encode, varbyte_len,
    DeltaReader, VARBYTE_LIMIT,
};
