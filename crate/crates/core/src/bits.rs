//! Bit strings, codewords and gap arithmetic shared by every construction.
//!
//! Bit strings are big-endian: index 0 is the most significant bit. Codewords
//! are kept in their sparse canonical form, the blocklength `n` plus the
//! strictly increasing positions of the ones, since the weight is tiny
//! compared to `n`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::word::Word;

/// A finite big-endian string of bits.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn zeros(len: usize) -> Self {
        Self { bits: vec![false; len] }
    }

    pub fn ones(len: usize) -> Self {
        Self { bits: vec![true; len] }
    }

    /// The `len` low-order bits of `v`, most significant first.
    pub fn from_u64(v: u64, len: usize) -> Self {
        Self {
            bits: (0..len).rev().map(|i| i < 64 && (v >> i) & 1 == 1).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    pub fn into_vec(self) -> Vec<bool> {
        self.bits
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn extend_from(&mut self, other: &BitString) {
        self.bits.extend_from_slice(&other.bits);
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Decimal value of the whole string.
    pub fn dec<W: Word>(&self) -> Result<W> {
        dec(&self.bits)
    }

    /// Hex rendering: bits packed MSB-first into nibbles, the final nibble
    /// zero-padded on the right.
    pub fn to_hex(&self) -> String {
        self.bits
            .chunks(4)
            .map(|chunk| {
                let v = chunk
                    .iter()
                    .enumerate()
                    .fold(0u32, |acc, (i, &b)| acc | (u32::from(b) << (3 - i)));
                char::from_digit(v, 16).expect("nibble")
            })
            .collect()
    }

    /// Inverse of [`BitString::to_hex`] for a message of `len` bits. Padding
    /// bits must be zero.
    pub fn from_hex(s: &str, len: usize) -> Result<Self> {
        let s = s.trim();
        let digits = len.div_ceil(4);
        if s.len() != digits {
            return Err(Error::Parse(format!(
                "expected {digits} hex digits for a {len}-bit message, got {}",
                s.len()
            )));
        }
        let mut bits = Vec::with_capacity(digits * 4);
        for ch in s.chars() {
            let v = ch
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("invalid hex digit {ch:?}")))?;
            bits.extend((0..4).rev().map(|i| (v >> i) & 1 == 1));
        }
        if bits[len..].iter().any(|&b| b) {
            return Err(Error::Parse("nonzero padding bits after the message".into()));
        }
        bits.truncate(len);
        Ok(Self { bits })
    }
}

impl From<Vec<bool>> for BitString {
    fn from(bits: Vec<bool>) -> Self {
        Self { bits }
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("invalid bit {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString::new)
    }
}

/// Decimal value of a big-endian bit slice. The empty slice has value 0.
pub fn dec<W: Word>(bits: &[bool]) -> Result<W> {
    let limit = W::max_value() >> 1;
    let mut acc = W::zero();
    for &b in bits {
        if acc > limit {
            return Err(Error::Overflow {
                value: render_bits(bits),
                len: W::bits() as usize,
            });
        }
        acc = (acc << 1) | if b { W::one() } else { W::zero() };
    }
    Ok(acc)
}

/// `len`-bit big-endian representation of `v`.
pub fn from_dec<W: Word>(v: W, len: usize) -> Result<BitString> {
    let fits = len >= W::bits() as usize || v >> len < W::one();
    if !fits {
        return Err(Error::Overflow {
            value: v.to_string(),
            len,
        });
    }
    let bits = (0..len)
        .rev()
        .map(|i| i < W::bits() as usize && (v >> i) & W::one() == W::one())
        .collect();
    Ok(BitString { bits })
}

/// Writes `len` bits of `v` (already known to fit) onto the end of `out`.
pub(crate) fn push_value<W: Word>(out: &mut Vec<bool>, v: W, len: usize) {
    out.extend(
        (0..len)
            .rev()
            .map(|i| i < W::bits() as usize && (v >> i) & W::one() == W::one()),
    );
}

fn render_bits(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Cyclic gap from `a` to `b` in `Z_n`: `(b - a - 1) mod n`.
pub fn gap<W: Word>(a: W, b: W, n: W) -> Result<W> {
    if a >= n || b >= n {
        return Err(Error::Domain(format!("gap({a}, {b}) with n = {n}")));
    }
    Ok(gap_unchecked(a, b, n))
}

#[inline]
pub(crate) fn gap_unchecked<W: Word>(a: W, b: W, n: W) -> W {
    if b > a {
        b - a - W::one()
    } else {
        n - (a - b) - W::one()
    }
}

/// Left circular shift: `result[i] = g[(shift + i) mod len]`. Negative and
/// oversized shifts are reduced modulo the length.
pub fn cshift<T: Clone>(g: &[T], shift: i64) -> Vec<T> {
    if g.is_empty() {
        return Vec::new();
    }
    let s = shift.rem_euclid(g.len() as i64) as usize;
    let mut out = Vec::with_capacity(g.len());
    out.extend_from_slice(&g[s..]);
    out.extend_from_slice(&g[..s]);
    out
}

/// A binary word of length `n` stored as the ascending positions of its ones.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Codeword<W> {
    n: W,
    ones: Vec<W>,
}

impl<W: Word> Codeword<W> {
    /// Validates that `ones` is strictly increasing and below `n`.
    pub fn new(n: W, ones: Vec<W>) -> Result<Self> {
        if n == W::zero() {
            return Err(Error::Domain("blocklength must be positive".into()));
        }
        if let Some(&last) = ones.last() {
            if last >= n {
                return Err(Error::Domain(format!("position {last} with n = {n}")));
            }
        }
        if ones.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("one-positions must be strictly increasing".into()));
        }
        Ok(Self { n, ones })
    }

    pub(crate) fn from_sorted_unchecked(n: W, ones: Vec<W>) -> Self {
        debug_assert!(ones.windows(2).all(|w| w[0] < w[1]));
        Self { n, ones }
    }

    /// Builds a codeword from one-positions in any order; duplicates are rejected.
    pub fn from_positions(n: W, mut positions: Vec<W>) -> Result<Self> {
        positions.sort_unstable();
        Self::new(n, positions)
    }

    pub fn n(&self) -> W {
        self.n
    }

    pub fn ones(&self) -> &[W] {
        &self.ones
    }

    pub fn weight(&self) -> usize {
        self.ones.len()
    }

    pub fn into_ones(self) -> Vec<W> {
        self.ones
    }

    /// Bit at position `i`.
    pub fn bit(&self, i: W) -> bool {
        self.ones.binary_search(&i).is_ok()
    }

    /// Left rotation of the dense word by `shift`: bit `p` moves to `p - shift mod n`.
    pub fn rotate_left(&self, shift: W) -> Self {
        let s = shift % self.n;
        // Ones below `s` wrap to the top; they form a prefix of the sorted list.
        let split = self.ones.partition_point(|&p| p < s);
        let mut ones: Vec<W> = self
            .ones
            .iter()
            .map(|&p| if p >= s { p - s } else { self.n - (s - p) })
            .collect();
        ones.rotate_left(split);
        Self { n: self.n, ones }
    }

    /// Hamming distance to another codeword of the same blocklength.
    pub fn distance(&self, other: &Self) -> usize {
        let (mut i, mut j, mut common) = (0, 0, 0);
        while i < self.ones.len() && j < other.ones.len() {
            match self.ones[i].cmp(&other.ones[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    common += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        self.ones.len() + other.ones.len() - 2 * common
    }

    /// Dense `n`-character rendering of `0`/`1`.
    pub fn to_bits_string(&self) -> String {
        let n = self.n.as_usize();
        let mut out = vec![b'0'; n];
        for &p in &self.ones {
            out[p.as_usize()] = b'1';
        }
        String::from_utf8(out).expect("ascii")
    }

    /// Sparse rendering `n=<n>:<i0>,<i1>,...`.
    pub fn to_ones_string(&self) -> String {
        self.to_string()
    }

    /// Parses the dense `0`/`1` format; `n` is the string length.
    pub fn parse_bits(s: &str) -> Result<Self> {
        let s = s.trim();
        let n = W::narrow(s.len() as u128)
            .ok_or_else(|| Error::Parse(format!("blocklength {} too large for the word type", s.len())))?;
        let mut ones = Vec::new();
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => ones.push(W::narrow(i as u128).expect("index below n")),
                other => return Err(Error::Parse(format!("invalid bit {other:?}"))),
            }
        }
        Self::new(n, ones)
    }

    /// Parses the sparse `n=<n>:<i0>,<i1>,...` format.
    pub fn parse_ones(s: &str) -> Result<Self> {
        let s = s.trim();
        let rest = s
            .strip_prefix("n=")
            .ok_or_else(|| Error::Parse(format!("expected `n=<n>:...`, got {s:?}")))?;
        let (n_str, list) = rest
            .split_once(':')
            .ok_or_else(|| Error::Parse("missing ':' after blocklength".into()))?;
        let n = parse_word::<W>(n_str)?;
        let ones = if list.trim().is_empty() {
            Vec::new()
        } else {
            list.split(',').map(parse_word::<W>).collect::<Result<Vec<_>>>()?
        };
        Self::new(n, ones)
    }
}

fn parse_word<W: Word>(s: &str) -> Result<W> {
    let v: u128 = s
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("invalid integer {s:?}")))?;
    W::narrow(v).ok_or_else(|| Error::Parse(format!("{v} does not fit the word type")))
}

impl<W: Word> fmt::Display for Codeword<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}:", self.n)?;
        for (i, p) in self.ones.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl<W: Word> FromStr for Codeword<W> {
    type Err = Error;

    /// Accepts either text format.
    fn from_str(s: &str) -> Result<Self> {
        if s.trim_start().starts_with("n=") {
            Self::parse_ones(s)
        } else {
            Self::parse_bits(s)
        }
    }
}

/// Cyclic gaps between successive ones: `gaps[m]` counts the zeros in front
/// of the `m`-th one, wrapping around the end of the word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GapVector<W> {
    gaps: Vec<W>,
    n: W,
}

impl<W: Word> GapVector<W> {
    pub fn new(gaps: Vec<W>, n: W) -> Result<Self> {
        let total = gaps.iter().fold(gaps.len() as u128, |acc, g| acc + g.widen());
        if total != n.widen() {
            return Err(Error::Domain(format!(
                "gaps plus weight sum to {total}, blocklength is {n}"
            )));
        }
        Ok(Self { gaps, n })
    }

    pub fn as_slice(&self) -> &[W] {
        &self.gaps
    }

    pub fn len(&self) -> usize {
        self.gaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gaps.is_empty()
    }

    pub fn n(&self) -> W {
        self.n
    }
}

/// Gap vector of a codeword of weight at least one.
pub fn extract_gaps<W: Word>(c: &Codeword<W>) -> Result<GapVector<W>> {
    let ones = c.ones();
    let w = ones.len();
    if w == 0 {
        return Err(Error::EmptyCodeword);
    }
    let gaps = (0..w)
        .map(|m| gap_unchecked(ones[(m + w - 1) % w], ones[m], c.n()))
        .collect();
    Ok(GapVector { gaps, n: c.n() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn dec_examples() {
        assert_eq!(bs("1010").dec::<u64>().unwrap(), 10);
        assert_eq!(bs("000").dec::<u64>().unwrap(), 0);
        assert_eq!(bs("11").dec::<u64>().unwrap(), 3);
        assert_eq!(BitString::default().dec::<u64>().unwrap(), 0);
    }

    #[test]
    fn dec_overflow() {
        assert_eq!(bs("11111111").dec::<u8>().unwrap(), 255);
        assert!(bs("100000000").dec::<u8>().is_err());
        // leading zeros beyond the word width are harmless
        assert_eq!(bs("0000000011").dec::<u8>().unwrap(), 3);
    }

    #[test]
    fn from_dec_examples() {
        assert_eq!(from_dec(10u64, 4).unwrap(), bs("1010"));
        assert_eq!(from_dec(0u64, 3).unwrap(), bs("000"));
        assert_eq!(from_dec(64u64, 7).unwrap(), bs("1000000"));
        assert!(matches!(from_dec(8u64, 3), Err(Error::Overflow { .. })));
        assert_eq!(from_dec(1u8, 10).unwrap(), bs("0000000001"));
    }

    #[test]
    fn gap_examples() {
        assert_eq!(gap(127u32, 10, 128).unwrap(), 10);
        assert_eq!(gap(5u32, 6, 128).unwrap(), 0);
        assert_eq!(gap(26u32, 32, 128).unwrap(), 5);
        assert_eq!(gap(3u32, 3, 8).unwrap(), 7);
        assert!(matches!(gap(8u32, 3, 8), Err(Error::Domain(_))));
    }

    #[test]
    fn cshift_examples() {
        assert_eq!(cshift(&[1, 2, 3], 0), vec![1, 2, 3]);
        assert_eq!(cshift(&[1, 2, 3], 1), vec![2, 3, 1]);
        assert_eq!(cshift(&[5, 5, 5], 2), vec![5, 5, 5]);
        assert_eq!(cshift(&[1, 2, 3], 4), vec![2, 3, 1]);
        assert_eq!(cshift(&[1, 2, 3], -1), vec![3, 1, 2]);
    }

    #[test]
    fn extract_gaps_examples() {
        let c = Codeword::new(128u64, vec![10, 26, 32, 37, 64, 96, 127]).unwrap();
        assert_eq!(extract_gaps(&c).unwrap().as_slice(), &[10, 15, 5, 4, 26, 31, 30]);
        let c = Codeword::new(8u64, vec![0, 1, 2]).unwrap();
        assert_eq!(extract_gaps(&c).unwrap().as_slice(), &[5, 0, 0]);
        let c = Codeword::new(4u64, vec![0]).unwrap();
        assert_eq!(extract_gaps(&c).unwrap().as_slice(), &[3]);
        let c = Codeword::new(4u64, vec![]).unwrap();
        assert_eq!(extract_gaps(&c), Err(Error::EmptyCodeword));
    }

    #[test]
    fn codeword_validation() {
        assert!(Codeword::new(8u32, vec![1, 1]).is_err());
        assert!(Codeword::new(8u32, vec![3, 1]).is_err());
        assert!(Codeword::new(8u32, vec![8]).is_err());
        assert!(Codeword::new(0u32, vec![]).is_err());
        assert!(Codeword::from_positions(8u32, vec![3, 1]).is_ok());
    }

    #[test]
    fn text_formats() {
        let c = Codeword::new(16u64, vec![1, 2, 10, 14]).unwrap();
        assert_eq!(c.to_ones_string(), "n=16:1,2,10,14");
        assert_eq!(c.to_bits_string(), "0110000000100010");
        assert_eq!("n=16:1,2,10,14".parse::<Codeword<u64>>().unwrap(), c);
        assert_eq!("0110000000100010".parse::<Codeword<u64>>().unwrap(), c);
        assert_eq!("n=4:".parse::<Codeword<u64>>().unwrap().weight(), 0);
        assert!("n=16:1,x".parse::<Codeword<u64>>().is_err());
        assert!("n=16 1,2".parse::<Codeword<u64>>().is_err());
        assert!("01201".parse::<Codeword<u64>>().is_err());
    }

    #[test]
    fn hex_format() {
        let x = bs("101011100");
        assert_eq!(x.to_hex(), "ae0");
        assert_eq!(BitString::from_hex("ae0", 9).unwrap(), x);
        assert!(BitString::from_hex("ae4", 9).is_err());
        assert_eq!(BitString::from_hex("ae8", 9).unwrap(), bs("101011101"));
        assert!(BitString::from_hex("ae", 9).is_err());
    }

    #[test]
    fn rotation_and_distance() {
        let c = Codeword::new(16u64, vec![1, 2, 10, 14]).unwrap();
        assert_eq!(c.rotate_left(2).ones(), &[0, 8, 12, 15]);
        assert_eq!(c.rotate_left(0), c);
        assert_eq!(c.rotate_left(16), c);
        let d = Codeword::new(16u64, vec![1, 2, 10, 15]).unwrap();
        assert_eq!(c.distance(&d), 2);
    }

    proptest! {
        #[test]
        fn dec_round_trip(bits in proptest::collection::vec(any::<bool>(), 0..64)) {
            let x = BitString::new(bits);
            let v: u64 = x.dec().unwrap();
            prop_assert_eq!(from_dec(v, x.len()).unwrap(), x);
        }

        #[test]
        fn cshift_inverse(g in proptest::collection::vec(0u32..100, 1..20), s in -50i64..50) {
            let l = g.len() as i64;
            prop_assert_eq!(cshift(&cshift(&g, s), l - s), g);
        }

        #[test]
        fn gaps_sum_to_blocklength(
            set in proptest::collection::btree_set(0u32..256, 1..20),
            shift in 0u32..256,
        ) {
            let c = Codeword::new(256u32, set.into_iter().collect()).unwrap();
            let g = extract_gaps(&c).unwrap();
            let total: u32 = g.as_slice().iter().sum::<u32>() + c.weight() as u32;
            prop_assert_eq!(total, 256);

            // rotating the word rotates the gap vector
            let r = c.rotate_left(shift);
            prop_assert_eq!(r.weight(), c.weight());
            let gr = extract_gaps(&r).unwrap();
            let w = g.len();
            let matches = (0..w).any(|s| cshift(g.as_slice(), s as i64) == gr.as_slice());
            prop_assert!(matches);
        }

        #[test]
        fn text_round_trip(set in proptest::collection::btree_set(0u16..300, 0..12)) {
            let c = Codeword::new(300u16, set.into_iter().collect()).unwrap();
            prop_assert_eq!(Codeword::<u16>::parse_ones(&c.to_ones_string()).unwrap(), c.clone());
            prop_assert_eq!(Codeword::<u16>::parse_bits(&c.to_bits_string()).unwrap(), c);
        }
    }
}
