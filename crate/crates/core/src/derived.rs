//! Codes with other weights or blocklengths built on the gap encoder.
//!
//! - `C_t[ℓ]`: weight `t`, blocklength `2^ℓ`, sequence `f_ℓ^(t)`.
//! - `D_t[ℓ]`: weight `t`, blocklength `2^ℓ`; the first `ℓ−t` blocks of `f_ℓ`
//!   are forced to zero and their ones dropped, so only the top `t` blocks
//!   carry data.
//! - `B_t[ℓ]`: weight `ℓ`, blocklength `2^ℓ − 2^t + 1`; the lead block is
//!   scaled by `2^t` and `2^t − 1` zeros are cut after the last one written.

use crate::bits::{extract_gaps, BitString, Codeword};
use crate::codec::{
    self, anchor_by_pattern_or_max, assemble, check_len, check_shape, reconstruct, walk, AnchorResult, DecodeMode,
};
use crate::error::{Error, Result};
use crate::sequences::{f_ell, f_ell_t, CharSeq};
use crate::word::Word;

/// `C_t[ℓ]` encoder.
pub fn encode_ct<W: Word>(x: &[bool], ell: u32, t: u32) -> Result<Codeword<W>> {
    codec::encode(x, &f_ell_t(ell, t)?)
}

pub fn decode_ct<W: Word>(c: &Codeword<W>, ell: u32, t: u32, mode: DecodeMode) -> Result<BitString> {
    codec::decode(c, &f_ell_t(ell, t)?, mode)
}

/// The `t` top entries `f_ℓ(ℓ−t+1), …, f_ℓ(ℓ)` that `D_t[ℓ]` keeps.
pub fn dt_sequence(ell: u32, t: u32) -> Result<CharSeq> {
    let f = f_ell(ell)?;
    if t < 1 || t >= ell {
        return Err(Error::Parameter(format!(
            "t = {t} outside [1, {}] for ell = {ell}",
            ell - 1
        )));
    }
    CharSeq::new(f.entries()[(ell - t) as usize..].to_vec(), ell)
}

/// `D_t[ℓ]` encoder. The suppressed blocks would be written after the kept
/// ones, so stopping the walk early gives the same word as writing and erasing.
pub fn encode_dt<W: Word>(x: &[bool], ell: u32, t: u32) -> Result<Codeword<W>> {
    codec::encode(x, &dt_sequence(ell, t)?)
}

pub fn decode_dt<W: Word>(c: &Codeword<W>, ell: u32, t: u32, mode: DecodeMode) -> Result<BitString> {
    codec::decode(c, &dt_sequence(ell, t)?, mode)
}

/// Checks `1 ≤ t < f_ℓ(1)` and returns `f_ℓ`.
fn bt_base(ell: u32, t: u32) -> Result<CharSeq> {
    let f = f_ell(ell)?;
    if t < 1 || t >= f.at(1) {
        return Err(Error::Parameter(format!(
            "t = {t} needs 1 <= t < f_ell(1) = {} for ell = {ell}",
            f.at(1)
        )));
    }
    Ok(f)
}

/// `B_t[ℓ]` block lengths in message order: `ℓ−t, f(ℓ−1), …, f(2), f(1)−t`.
pub fn bt_block_lengths(ell: u32, t: u32) -> Result<Vec<u32>> {
    let f = bt_base(ell, t)?;
    let mut lens = Vec::with_capacity(ell as usize);
    lens.push(ell - t);
    lens.extend((2..ell as usize).rev().map(|i| f.at(i)));
    lens.push(f.at(1) - t);
    Ok(lens)
}

/// `2^ℓ − 2^t + 1`.
pub fn bt_blocklength(ell: u32, t: u32) -> u128 {
    (1u128 << ell) - (1u128 << t) + 1
}

/// `B_t[ℓ]` encoder.
pub fn encode_bt<W: Word>(x: &[bool], ell: u32, t: u32) -> Result<Codeword<W>> {
    let f = bt_base(ell, t)?;
    let lens = bt_block_lengths(ell, t)?;
    check_len(x, lens.iter().map(|&l| u64::from(l)).sum())?;
    let big = 1u128 << ell;
    let n = W::narrow(bt_blocklength(ell, t))
        .ok_or_else(|| Error::Parameter(format!("blocklength for ell = {ell} does not fit the position type")))?;
    let lead = codec::block_value(&x[..lens[0] as usize]);
    let start = lead << t;
    let written = walk(x, &lens, big, Some(start))?;

    let last = *written.last().expect("ell >= 3 blocks");
    let advance = (last + big - start) % big;
    // The walk never comes within 2^t of the anchor again, so the cut below
    // only removes zeros.
    assert!(
        advance <= big - (1u128 << f.at(ell as usize - 1)) - (1u128 << t),
        "cumulative increment {advance} leaves no room for the cut"
    );

    let cut_start = (last + 1) % big;
    let cut_len = (1u128 << t) - 1;
    let below = |p: u128| -> u128 {
        let end = cut_start + cut_len;
        if end <= big {
            p.saturating_sub(cut_start).min(cut_len)
        } else {
            p.min(end - big) + p.saturating_sub(cut_start).min(big - cut_start)
        }
    };
    let shifted: Vec<u128> = written.iter().map(|&p| p - below(p)).collect();
    assemble(n, &shifted)
}

/// The gap vector of `B_t[ℓ]` for a message whose non-lead blocks are all ones.
pub fn bt_maximal_gaps(ell: u32, t: u32) -> Result<Vec<u128>> {
    let f = bt_base(ell, t)?;
    let mid: u128 = (2..ell as usize).map(|i| 1u128 << f.at(i)).sum();
    let mut g = Vec::with_capacity(ell as usize);
    g.push((1u128 << ell) - (1u128 << t) - mid - (1u128 << (f.at(1) - t)));
    g.extend((2..ell as usize).rev().map(|i| (1u128 << f.at(i)) - 1));
    g.push((1u128 << (f.at(1) - t)) - 1);
    Ok(g)
}

/// Anchor of a `B_t[ℓ]` gap vector.
pub fn find_anchor_bt<W: Word>(g: &[W], ell: u32, t: u32) -> Result<AnchorResult> {
    let pattern = bt_maximal_gaps(ell, t)?;
    Ok(anchor_by_pattern_or_max(g, Some(&pattern)))
}

/// `B_t[ℓ]` decoder. The cut may pull the anchor back by up to `2^t − 1`,
/// which the rounding-up division absorbs.
pub fn decode_bt<W: Word>(c: &Codeword<W>, ell: u32, t: u32, mode: DecodeMode) -> Result<BitString> {
    let lens = bt_block_lengths(ell, t)?;
    let n = W::narrow(bt_blocklength(ell, t))
        .ok_or_else(|| Error::Parameter(format!("blocklength for ell = {ell} does not fit the position type")))?;
    check_shape(c, n, ell as usize)?;
    let g = extract_gaps(c)?;
    let a = find_anchor_bt(g.as_slice(), ell, t)?;
    let j = c.ones()[a.anchor_index].widen();
    let lead = j.div_ceil(1u128 << t);
    reconstruct(lead, g.as_slice(), a.anchor_index, &lens, mode)
}
