/// Fixed-length bit array, LSB-first within each byte.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BitSet {
    bytes: Vec<u8>,
    len: usize,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        Self {
            bytes: vec![0; len.div_ceil(8)],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Sets bit `i`. Panics if `i` is out of bounds.
    #[inline]
    pub fn set(&mut self, i: usize) {
        assert!(
            i < self.len,
            "bit {i} out of range for a {}-bit set",
            self.len
        );
        self.bytes[i >> 3] |= 1 << (i & 7);
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        i < self.len && bit_is_set(&self.bytes, i)
    }

    pub fn clear(&mut self) {
        self.bytes.fill(0);
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }
}

/// Reads bit `i` out of a raw LSB-first byte slice.
#[inline]
pub fn bit_is_set(bytes: &[u8], i: usize) -> bool {
    bytes[i >> 3] & (1 << (i & 7)) != 0
}
