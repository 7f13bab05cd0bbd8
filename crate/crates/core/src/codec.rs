//! The gap encoder and its two decoders.
//!
//! Encoding walks a pointer around `Z_n`, starting at `−1` and advancing by
//! `1 + dec(x_j)` per block, setting a one at each stop. Decoding extracts the
//! cyclic gaps, locates the anchor (the first one written), and reads the
//! blocks back from the gaps that follow it.

use crate::bits::{extract_gaps, push_value, BitString, Codeword};
use crate::error::{Error, Result};
use crate::sequences::{delta, f_ell_r, gamma, CharSeq};
use crate::word::Word;

/// How decoders treat recovered values that do not fit their block.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum DecodeMode {
    /// Reject the word: it cannot have come from the encoder.
    #[default]
    Strict,
    /// Keep the low bits of each oversized value and carry on.
    Permissive,
}

/// Where the anchor sits in the sorted ones of a codeword.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnchorResult {
    pub anchor_index: usize,
    /// The gap vector matched the all-ones-message pattern.
    pub via_maximal_gap: bool,
    /// The selection rule had more than one equally good choice (never for valid codewords).
    pub tied: bool,
    /// Gap-vector entries read while locating the anchor.
    pub inspections: usize,
}

/// Reads `x` block by block (message order) and returns one-positions in the
/// order they are written. `first` overrides the start of the pointer walk:
/// `None` is the plain encoder (`pos = −1`, first stop at `dec(x_L)`),
/// `Some(p)` puts the first one at `p` and consumes the first block only there.
pub(crate) fn walk(x: &[bool], lens: &[u32], n: u128, first: Option<u128>) -> Result<Vec<u128>> {
    let mut out = Vec::with_capacity(lens.len());
    let mut at = 0usize;
    let mut pos: u128 = 0;
    for (j, &len) in lens.iter().enumerate() {
        let len = len as usize;
        let v = block_value(&x[at..at + len]);
        at += len;
        pos = match (j, first) {
            (0, None) => v % n,
            (0, Some(p)) => p % n,
            _ => (pos + 1 + v) % n,
        };
        out.push(pos);
    }
    Ok(out)
}

/// Big-endian value of a block of at most 127 bits.
pub(crate) fn block_value(bits: &[bool]) -> u128 {
    bits.iter().fold(0u128, |acc, &b| (acc << 1) | u128::from(b))
}

/// Turns write-order positions into a sorted codeword without materializing
/// the word. A valid walk wraps around `n` at most once, so a single rotation
/// sorts it; anything else falls back to sorting and a duplicate scan.
pub(crate) fn assemble<W: Word>(n: W, written: &[u128]) -> Result<Codeword<W>> {
    let narrow = |p: u128| W::narrow(p).expect("positions are below n, which fits in W");
    let descents: Vec<usize> = (1..written.len()).filter(|&i| written[i] < written[i - 1]).collect();
    let ones: Vec<W> = match descents.as_slice() {
        [] if written.windows(2).all(|w| w[0] < w[1]) => written.iter().map(|&p| narrow(p)).collect(),
        [d] if written.last() < written.first()
            && written.windows(2).enumerate().all(|(i, w)| i + 1 == *d || w[0] < w[1]) =>
        {
            written[*d..].iter().chain(&written[..*d]).map(|&p| narrow(p)).collect()
        }
        _ => {
            let mut sorted = written.to_vec();
            sorted.sort_unstable();
            if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::WeightCollision {
                    position: w[0].to_string(),
                });
            }
            sorted.into_iter().map(narrow).collect()
        }
    };
    Ok(Codeword::from_sorted_unchecked(n, ones))
}

pub(crate) fn blocklength<W: Word>(ell: u32) -> Result<W> {
    W::pow2(ell).ok_or_else(|| Error::Parameter(format!("2^{ell} does not fit a {}-bit position type", W::bits())))
}

pub(crate) fn check_len(x: &[bool], expected: u64) -> Result<()> {
    if x.len() as u64 != expected {
        return Err(Error::LengthMismatch {
            expected,
            got: x.len() as u64,
        });
    }
    Ok(())
}

pub(crate) fn check_shape<W: Word>(c: &Codeword<W>, n: W, weight: usize) -> Result<()> {
    if c.n() != n {
        return Err(Error::BlocklengthMismatch {
            expected: n.to_string(),
            got: c.n().to_string(),
        });
    }
    if c.weight() != weight {
        return Err(Error::WeightMismatch {
            expected: weight,
            got: c.weight(),
        });
    }
    Ok(())
}

/// Encodes `x` with characteristic sequence `s` into a word of length `2^ℓ`.
pub fn encode<W: Word>(x: &[bool], s: &CharSeq) -> Result<Codeword<W>> {
    check_len(x, s.k())?;
    let n: W = blocklength(s.ell())?;
    let lens: Vec<u32> = s.message_order().collect();
    let written = walk(x, &lens, n.widen(), None)?;
    assemble(n, &written)
}

/// Rebuilds the message from the anchor: the first block holds `lead`, block
/// `i` holds the gap `i` places after the anchor.
pub(crate) fn reconstruct<W: Word>(
    lead: u128,
    gaps: &[W],
    anchor: usize,
    lens: &[u32],
    mode: DecodeMode,
) -> Result<BitString> {
    let total: usize = lens.iter().map(|&l| l as usize).sum();
    let mut out = Vec::with_capacity(total);
    let l = gaps.len();
    for (i, &len) in lens.iter().enumerate() {
        let v = if i == 0 { lead } else { gaps[(anchor + i) % l].widen() };
        let v = fit(v, len, mode, i)?;
        push_value(&mut out, v, len as usize);
    }
    Ok(BitString::new(out))
}

fn fit(v: u128, len: u32, mode: DecodeMode, block: usize) -> Result<u128> {
    let cap = 1u128.checked_shl(len).unwrap_or(0);
    if cap == 0 || v < cap {
        return Ok(v);
    }
    match mode {
        DecodeMode::Strict => Err(Error::NotACodeword(format!(
            "value {v} after the anchor (block {block}) needs more than {len} bits"
        ))),
        DecodeMode::Permissive => Ok(v & (cap - 1)),
    }
}

/// Shift `n₀` with `cshift(g, n₀) = pattern`, if any; also returns entries read.
pub(crate) fn match_shift<W: Word>(g: &[W], pattern: &[u128]) -> (Option<usize>, usize) {
    let l = g.len();
    let mut reads = 0;
    if pattern.len() != l {
        return (None, 0);
    }
    for n0 in 0..l {
        let mut ok = true;
        for (i, &p) in pattern.iter().enumerate() {
            reads += 1;
            if g[(n0 + i) % l].widen() != p {
                ok = false;
                break;
            }
        }
        if ok {
            return (Some(n0), reads);
        }
    }
    (None, reads)
}

/// Shift match against `pattern` first, then the largest gap (lowest index on ties).
pub(crate) fn anchor_by_pattern_or_max<W: Word>(g: &[W], pattern: Option<&[u128]>) -> AnchorResult {
    let (hit, mut inspections) = match pattern {
        Some(p) => match_shift(g, p),
        None => (None, 0),
    };
    if let Some(n0) = hit {
        return AnchorResult {
            anchor_index: n0,
            via_maximal_gap: true,
            tied: false,
            inspections,
        };
    }
    let mut best = 0;
    let mut tied = false;
    for (m, v) in g.iter().enumerate().skip(1) {
        if *v > g[best] {
            best = m;
            tied = false;
        } else if *v == g[best] {
            tied = true;
        }
    }
    inspections += g.len();
    AnchorResult {
        anchor_index: best,
        via_maximal_gap: false,
        tied,
        inspections,
    }
}

/// Anchor of a gap vector produced with an anchor-decodable sequence `s`.
pub fn find_anchor<W: Word>(g: &[W], s: &CharSeq) -> AnchorResult {
    let pattern = gamma(s);
    anchor_by_pattern_or_max(g, pattern.as_deref())
}

/// Inverse of [`encode`] for anchor-decodable `s`.
pub fn decode<W: Word>(c: &Codeword<W>, s: &CharSeq, mode: DecodeMode) -> Result<BitString> {
    decode_traced(c, s, mode).map(|(x, _)| x)
}

/// [`decode`] that also reports how the anchor was found.
pub fn decode_traced<W: Word>(c: &Codeword<W>, s: &CharSeq, mode: DecodeMode) -> Result<(BitString, AnchorResult)> {
    check_shape(c, blocklength(s.ell())?, s.len())?;
    let g = extract_gaps(c)?;
    let a = find_anchor(g.as_slice(), s);
    let lens: Vec<u32> = s.message_order().collect();
    let x = reconstruct(
        c.ones()[a.anchor_index].widen(),
        g.as_slice(),
        a.anchor_index,
        &lens,
        mode,
    )?;
    Ok((x, a))
}

/// Anchor of a gap vector produced with `f_{ℓ,r}`: a gap of at least
/// `2^{ℓ−r−1}` is a candidate, and the anchor is the candidate preceded
/// cyclically by at least `2r−2` non-candidates.
pub fn find_anchor2<W: Word>(g: &[W], ell: u32, r: u32) -> Result<AnchorResult> {
    let s = f_ell_r(ell, r)?;
    let l = ell as usize;
    if g.len() != l {
        return Err(Error::WeightMismatch {
            expected: l,
            got: g.len(),
        });
    }
    let mut inspections = 0;
    if delta(ell, r) == 1 {
        let mut pattern = Vec::with_capacity(l);
        pattern.push((1u128 << (ell - r - 1)) - 1);
        pattern.extend((1..ell as usize).rev().map(|i| (1u128 << s.at(i)) - 1));
        let (hit, reads) = match_shift(g, &pattern);
        inspections += reads;
        if let Some(n0) = hit {
            return Ok(AnchorResult {
                anchor_index: n0,
                via_maximal_gap: true,
                tied: false,
                inspections,
            });
        }
    }
    let threshold = 1u128 << (ell - r - 1);
    let candidate: Vec<bool> = g.iter().map(|v| v.widen() >= threshold).collect();
    inspections += l;
    let m0 = candidate
        .iter()
        .position(|&c| c)
        .ok_or_else(|| Error::NotACodeword(format!("no gap reaches {threshold}")))?;
    let need = 2 * r as usize - 2;
    let mut run = 0usize;
    for step in 1..=l {
        let m = (m0 + step) % l;
        inspections += 1;
        if !candidate[m] {
            run += 1;
        } else if run >= need {
            return Ok(AnchorResult {
                anchor_index: m,
                via_maximal_gap: false,
                tied: false,
                inspections,
            });
        } else {
            run = 0;
        }
    }
    // No candidate had a long enough run in front of it.
    Ok(AnchorResult {
        anchor_index: m0,
        via_maximal_gap: false,
        tied: true,
        inspections,
    })
}

/// Inverse of [`encode`] with `s = f_{ℓ,r}`.
pub fn decode2<W: Word>(c: &Codeword<W>, ell: u32, r: u32, mode: DecodeMode) -> Result<BitString> {
    decode2_traced(c, ell, r, mode).map(|(x, _)| x)
}

/// [`decode2`] that also reports how the anchor was found.
pub fn decode2_traced<W: Word>(
    c: &Codeword<W>,
    ell: u32,
    r: u32,
    mode: DecodeMode,
) -> Result<(BitString, AnchorResult)> {
    let s = f_ell_r(ell, r)?;
    check_shape(c, blocklength(ell)?, s.len())?;
    let g = extract_gaps(c)?;
    let a = find_anchor2(g.as_slice(), ell, r)?;
    let lens: Vec<u32> = s.message_order().collect();
    let x = reconstruct(
        c.ones()[a.anchor_index].widen(),
        g.as_slice(),
        a.anchor_index,
        &lens,
        mode,
    )?;
    Ok((x, a))
}
