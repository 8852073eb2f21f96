use crate::CubeError;
use std::fmt;
use std::str::FromStr;

/// One point of {-1,+1}^N, bit-packed: bit `i` set means coordinate `i` is +1.
///
/// Comparison and hashing use the packed words, so sorting a collection of
/// configurations gives a canonical, dimension-respecting order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinConfig {
    n: usize,
    words: Vec<u64>,
}

const WORD_BITS: usize = 64;

fn word_count(n: usize) -> usize {
    n.div_ceil(WORD_BITS)
}

impl SpinConfig {
    /// All coordinates +1.
    pub fn all_plus(n: usize) -> Self {
        assert!(n >= 1, "dimension must be at least 1");
        let mut words = vec![!0u64; word_count(n)];
        Self::mask_tail(n, &mut words);
        SpinConfig { n, words }
    }

    /// All coordinates -1.
    pub fn all_minus(n: usize) -> Self {
        assert!(n >= 1, "dimension must be at least 1");
        SpinConfig {
            n,
            words: vec![0u64; word_count(n)],
        }
    }

    /// Build from explicit signs; every entry must be +1 or -1.
    pub fn from_signs(signs: &[i8]) -> Result<Self, CubeError> {
        if signs.is_empty() {
            return Err(CubeError::Parse("empty sign list".into()));
        }
        let mut c = SpinConfig::all_minus(signs.len());
        for (i, &s) in signs.iter().enumerate() {
            match s {
                1 => c.set_plus(i),
                -1 => {}
                other => {
                    return Err(CubeError::Parse(format!(
                        "sign at index {i} must be +/-1, got {other}"
                    )))
                }
            }
        }
        Ok(c)
    }

    /// Parse a hex bitstring like "0x1a" with an explicit dimension. Bit `i`
    /// of the value (little-endian over the whole string) gives coordinate `i`.
    pub fn from_hex(s: &str, n: usize) -> Result<Self, CubeError> {
        let body = s
            .strip_prefix("0x")
            .or_else(|| s.strip_prefix("0X"))
            .ok_or_else(|| CubeError::Parse(format!("hex form must start with 0x: {s}")))?;
        if body.is_empty() {
            return Err(CubeError::Parse("empty hex body".into()));
        }
        if n == 0 {
            return Err(CubeError::Parse("dimension must be at least 1".into()));
        }
        let mut words = vec![0u64; word_count(n)];
        for (pos, ch) in body.chars().rev().enumerate() {
            let v = ch
                .to_digit(16)
                .ok_or_else(|| CubeError::Parse(format!("bad hex digit '{ch}'")))? as u64;
            let bit = pos * 4;
            if bit >= n && v != 0 {
                return Err(CubeError::Parse(format!(
                    "hex value has bits at or above dimension {n}"
                )));
            }
            if bit < words.len() * WORD_BITS {
                words[bit / WORD_BITS] |= v << (bit % WORD_BITS);
            }
        }
        // A digit may straddle the dimension boundary.
        let mut c = SpinConfig { n, words };
        let spill: u64 = {
            let mut w = c.words.clone();
            Self::mask_tail(n, &mut w);
            c.words
                .iter()
                .zip(w.iter())
                .map(|(a, b)| a ^ b)
                .fold(0, |acc, x| acc | x)
        };
        if spill != 0 {
            return Err(CubeError::Parse(format!(
                "hex value has bits at or above dimension {n}"
            )));
        }
        Self::mask_tail(n, &mut c.words);
        Ok(c)
    }

    fn mask_tail(n: usize, words: &mut [u64]) {
        let rem = n % WORD_BITS;
        if rem != 0 {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Dimension N.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Sign at coordinate `i`, returned as +1 or -1.
    pub fn sign(&self, i: usize) -> i8 {
        assert!(i < self.n, "coordinate {i} out of range 0..{}", self.n);
        if self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1 {
            1
        } else {
            -1
        }
    }

    pub fn set_plus(&mut self, i: usize) {
        assert!(i < self.n);
        self.words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
    }

    pub fn set_minus(&mut self, i: usize) {
        assert!(i < self.n);
        self.words[i / WORD_BITS] &= !(1 << (i % WORD_BITS));
    }

    /// Flip coordinate `i`.
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.n);
        self.words[i / WORD_BITS] ^= 1 << (i % WORD_BITS);
    }

    /// Flipped copy (one coordinate).
    pub fn flipped(&self, i: usize) -> Self {
        let mut c = self.clone();
        c.flip(i);
        c
    }

    /// Global sign flip -sigma.
    pub fn negated(&self) -> Self {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        Self::mask_tail(self.n, &mut words);
        SpinConfig { n: self.n, words }
    }

    /// Flip every coordinate selected by the mask words (packed like `self`).
    pub fn flipped_by_mask(&self, mask: &[u64]) -> Self {
        assert_eq!(mask.len(), self.words.len());
        let words: Vec<u64> = self
            .words
            .iter()
            .zip(mask.iter())
            .map(|(w, m)| w ^ m)
            .collect();
        SpinConfig { n: self.n, words }
    }

    /// Packed words (read-only view).
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Number of coordinates where the two configurations differ.
    pub fn hamming_dist(&self, other: &SpinConfig) -> usize {
        assert_eq!(
            self.n, other.n,
            "hamming distance needs equal dimensions ({} vs {})",
            self.n, other.n
        );
        self.words
            .iter()
            .zip(other.words.iter())
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Number of differing coordinates inside the coordinate set given by
    /// `mask` (packed words, same layout as `self`).
    pub fn hamming_dist_in(&self, other: &SpinConfig, mask: &[u64]) -> usize {
        assert_eq!(self.n, other.n);
        assert_eq!(mask.len(), self.words.len());
        self.words
            .iter()
            .zip(other.words.iter())
            .zip(mask.iter())
            .map(|((a, b), m)| ((a ^ b) & m).count_ones() as usize)
            .sum()
    }

    /// Iterate signs in coordinate order.
    pub fn signs(&self) -> impl Iterator<Item = i8> + '_ {
        (0..self.n).map(move |i| self.sign(i))
    }
}

impl fmt::Display for SpinConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            f.write_str(if self.sign(i) == 1 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for SpinConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SpinConfig({self})")
    }
}

impl FromStr for SpinConfig {
    type Err = CubeError;

    /// Parse the "+-+-" textual form. The hex form needs an explicit
    /// dimension; use [`SpinConfig::from_hex`] for it.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(CubeError::Parse("empty configuration string".into()));
        }
        if s.starts_with("0x") || s.starts_with("0X") {
            return Err(CubeError::Parse(
                "hex form requires an explicit dimension; use SpinConfig::from_hex".into(),
            ));
        }
        let mut c = SpinConfig::all_minus(s.chars().count());
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '+' => c.set_plus(i),
                '-' => {}
                other => {
                    return Err(CubeError::Parse(format!(
                        "configuration characters must be + or -, got '{other}'"
                    )))
                }
            }
        }
        Ok(c)
    }
}
