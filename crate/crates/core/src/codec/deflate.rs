//! Raw DEFLATE (RFC 1951) blocks: no zlib header, no checksum, best level.

use flate2::{Compress, Compression, Decompress, FlushCompress, FlushDecompress, Status};

use crate::error::{Error, Result};

/// Reusable compressor. Building the level-9 state is far more expensive than
/// resetting it, and graph compression calls this once per chunk or tile.
pub struct Deflater {
    inner: Compress,
}

impl Default for Deflater {
    fn default() -> Self {
        Self::new()
    }
}

impl Deflater {
    pub fn new() -> Self {
        Self {
            inner: Compress::new(Compression::best(), false),
        }
    }

    /// Appends the raw DEFLATE stream of `input` to `out`.
    pub fn deflate(&mut self, input: &[u8], out: &mut Vec<u8>) {
        self.inner.reset();
        loop {
            if out.capacity() - out.len() < 64 {
                out.reserve(input.len() / 2 + 64);
            }
            let consumed = self.inner.total_in() as usize;
            let status = self
                .inner
                .compress_vec(&input[consumed..], out, FlushCompress::Finish)
                .expect("deflate on an in-memory buffer cannot fail");
            if status == Status::StreamEnd {
                return;
            }
        }
    }
}

/// Reusable decompressor writing into caller-owned scratch.
pub struct Inflater {
    inner: Decompress,
}

impl Default for Inflater {
    fn default() -> Self {
        Self::new()
    }
}

impl std::fmt::Debug for Inflater {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Inflater").finish_non_exhaustive()
    }
}

impl Inflater {
    pub fn new() -> Self {
        Self {
            inner: Decompress::new(false),
        }
    }

    /// Inflates `input` into `out`, returning the decoded length. Fails if the
    /// stream is malformed, truncated, or decodes to more than `out.len()` bytes.
    pub fn inflate_into(&mut self, input: &[u8], out: &mut [u8]) -> Result<usize> {
        self.inner.reset(false);
        loop {
            let (in_pos, out_pos) = (
                self.inner.total_in() as usize,
                self.inner.total_out() as usize,
            );
            let status = self
                .inner
                .decompress(
                    &input[in_pos..],
                    &mut out[out_pos..],
                    FlushDecompress::Finish,
                )
                .map_err(|e| Error::corrupt(format!("inflate: {e}")))?;
            let written = self.inner.total_out() as usize;
            if status == Status::StreamEnd {
                return Ok(written);
            }
            let progressed = self.inner.total_in() as usize != in_pos || written != out_pos;
            if !progressed {
                return Err(if written == out.len() {
                    Error::corrupt(format!("inflated data exceeds {} bytes", out.len()))
                } else {
                    Error::corrupt("deflate stream is truncated")
                });
            }
        }
    }
}

pub fn deflate_block(input: &[u8]) -> Vec<u8> {
    let mut out = Vec::new();
    Deflater::new().deflate(input, &mut out);
    out
}

pub fn inflate_block(input: &[u8], max_out: usize) -> Result<Vec<u8>> {
    let mut out = vec![0; max_out];
    let len = Inflater::new().inflate_into(input, &mut out)?;
    out.truncate(len);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zeros_compress_well() {
        let z = deflate_block(&[0; 4096]);
        assert!(z.len() < 64, "{}", z.len());
        assert_eq!(inflate_block(&z, 4096).unwrap(), vec![0; 4096]);
    }

    #[test]
    fn empty_round_trip() {
        let z = deflate_block(&[]);
        assert!(!z.is_empty());
        assert_eq!(inflate_block(&z, 0).unwrap(), Vec::<u8>::new());
        assert_eq!(inflate_block(&z, 10).unwrap(), Vec::<u8>::new());
    }

    #[test]
    fn exact_capacity_succeeds_and_one_short_fails() {
        let data: Vec<u8> = (0..5000u32).map(|i| (i * 7 % 251) as u8).collect();
        let z = deflate_block(&data);
        assert_eq!(inflate_block(&z, data.len()).unwrap(), data);
        assert!(matches!(
            inflate_block(&z, data.len() - 1),
            Err(Error::Corrupt(_))
        ));
    }

    #[test]
    fn truncated_stream_is_corrupt() {
        let data: Vec<u8> = (0..3000u32).map(|i| (i * 31 % 253) as u8).collect();
        let z = deflate_block(&data);
        for cut in [0, 1, z.len() / 2, z.len() - 1] {
            assert!(
                matches!(inflate_block(&z[..cut], data.len()), Err(Error::Corrupt(_))),
                "cut at {cut}"
            );
        }
    }

    #[test]
    fn garbage_is_corrupt() {
        assert!(inflate_block(&[0xFF, 0xFF, 0xFF, 0xFF], 100).is_err());
    }

    #[test]
    fn reuse_across_calls() {
        let mut d = Deflater::new();
        let mut i = Inflater::new();
        let mut scratch = vec![0; 1024];
        for round in 0..5u8 {
            let data = vec![round; 100 + round as usize];
            let mut z = Vec::new();
            d.deflate(&data, &mut z);
            let n = i.inflate_into(&z, &mut scratch).unwrap();
            assert_eq!(&scratch[..n], &data[..]);
        }
    }

    #[test]
    fn large_block_round_trip() {
        let mut x: u64 = 0x9E37_79B9_7F4A_7C15;
        let data: Vec<u8> = (0..1 << 20)
            .map(|i| {
                x ^= x << 13;
                x ^= x >> 7;
                x ^= x << 17;
                if i % 3 == 0 {
                    (x >> 56) as u8
                } else {
                    (i % 17) as u8
                }
            })
            .collect();
        let z = deflate_block(&data);
        assert_eq!(inflate_block(&z, data.len()).unwrap(), data);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn round_trip(data in proptest::collection::vec(any::<u8>(), 0..20_000)) {
            let z = deflate_block(&data);
            prop_assert_eq!(inflate_block(&z, data.len()).unwrap(), data);
        }
    }
}
