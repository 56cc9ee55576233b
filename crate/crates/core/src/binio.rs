//! Little-endian helpers for the on-disk formats.

use std::io::{self, Read, Write};

use crate::error::{Error, Result};

pub(crate) struct LeReader<R> {
    inner: R,
}

impl<R: Read> LeReader<R> {
    pub(crate) fn new(inner: R) -> Self {
        Self { inner }
    }

    pub(crate) fn bytes<const N: usize>(&mut self, what: &str) -> Result<[u8; N]> {
        let mut buf = [0u8; N];
        self.inner
            .read_exact(&mut buf)
            .map_err(|e| truncated(e, what))?;
        Ok(buf)
    }

    pub(crate) fn u32(&mut self, what: &str) -> Result<u32> {
        self.bytes::<4>(what).map(u32::from_le_bytes)
    }

    pub(crate) fn u64(&mut self, what: &str) -> Result<u64> {
        self.bytes::<8>(what).map(u64::from_le_bytes)
    }

    /// Reads `count` u64 values. Memory grows with the data actually read,
    /// so a lying count fails at end of file instead of over-allocating.
    pub(crate) fn u64_vec(&mut self, count: u64, what: &str) -> Result<Vec<u64>> {
        let mut out = Vec::with_capacity(count.min(1 << 16) as usize);
        for _ in 0..count {
            out.push(self.u64(what)?);
        }
        Ok(out)
    }

    pub(crate) fn byte_vec(&mut self, len: u64, what: &str) -> Result<Vec<u8>> {
        let mut out = Vec::with_capacity(len.min(1 << 24) as usize);
        let got = (&mut self.inner).take(len).read_to_end(&mut out)?;
        if got as u64 != len {
            return Err(Error::format(format!("file truncated inside {what}")));
        }
        Ok(out)
    }

    /// Fails unless the source is exhausted.
    pub(crate) fn expect_end(&mut self) -> Result<()> {
        let mut probe = [0u8; 1];
        match self.inner.read(&mut probe)? {
            0 => Ok(()),
            _ => Err(Error::format("trailing bytes after payload")),
        }
    }
}

fn truncated(e: io::Error, what: &str) -> Error {
    if e.kind() == io::ErrorKind::UnexpectedEof {
        Error::format(format!("file truncated inside {what}"))
    } else {
        Error::Io(e)
    }
}

pub(crate) fn put_u32<W: Write>(w: &mut W, v: u32) -> io::Result<()> {
    w.write_all(&v.to_le_bytes())
}

pub(crate) fn put_u64<W: Write>(w: &mut W, v: u64) -> io::Result<()> {
    w.write_all(&v.to_le_bytes())
}

pub(crate) fn put_u64s<W: Write>(w: &mut W, vs: &[u64]) -> io::Result<()> {
    for &v in vs {
        put_u64(w, v)?;
    }
    Ok(())
}
