//! The block-enumeration bit stream and common-shift search.
//!
//! The stream lists every binary block of length 1, then every block of
//! length 2, and so on, each length in lexicographic order, with a separator
//! bit between consecutive blocks.

use crate::error::Error;

pub const MAX_PREFIX: usize = 24;
pub const MAX_BOUND: usize = 1_000_000;

#[derive(Debug, Clone)]
pub struct BinStream {
    sep: u8,
    bits: Vec<u8>,
    len: u32,
    block: u64,
}

impl BinStream {
    pub fn new(sep: u8) -> BinStream {
        assert!(sep <= 1, "separator must be a bit");
        BinStream { sep, bits: vec![], len: 1, block: 0 }
    }

    pub fn separator(&self) -> u8 {
        self.sep
    }

    fn push_block(&mut self) {
        if !self.bits.is_empty() {
            self.bits.push(self.sep);
        }
        for i in (0..self.len).rev() {
            self.bits.push(((self.block >> i) & 1) as u8);
        }
        self.block += 1;
        if self.block == 1 << self.len {
            self.block = 0;
            self.len += 1;
        }
    }

    /// The first `n` bits.
    pub fn prefix(&mut self, n: usize) -> &[u8] {
        while self.bits.len() < n {
            self.push_block();
        }
        &self.bits[..n]
    }
}

/// Least `N ≤ bound` such that both shifted streams start with `prefix`.
pub fn binstream_verify(prefix: &[u8], bound: usize) -> Result<Option<usize>, Error> {
    if prefix.len() > MAX_PREFIX {
        return Err(Error::Invalid(format!("prefix longer than {MAX_PREFIX} bits")));
    }
    if bound > MAX_BOUND {
        return Err(Error::Invalid(format!("search bound above {MAX_BOUND}")));
    }
    if prefix.iter().any(|&b| b > 1) {
        return Err(Error::Invalid("prefix must be bits".into()));
    }
    let n = prefix.len();
    let mut s0 = BinStream::new(0);
    let mut s1 = BinStream::new(1);
    let (a, b) = (s0.prefix(bound + n).to_vec(), s1.prefix(bound + n));
    Ok((0..=bound).find(|&i| a[i..i + n] == *prefix && b[i..i + n] == *prefix))
}
