//! Characteristic sequences and the anchor-decodability test.
//!
//! A characteristic sequence `s` lists the message block lengths
//! `s(1), …, s(L)`; the encoder consumes the blocks in the order
//! `x_L ‖ x_{L−1} ‖ … ‖ x_1`. For the main constructions `L = ℓ`, the
//! blocklength is `2^ℓ` and the last entry equals `ℓ`. The weight-modified
//! sequences `f_ℓ^(t)` keep `2^ℓ` and the last entry `ℓ` but have length `t`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::word::{ceil_log2, floor_log2, Real};

/// Largest exponent a sequence may refer to; keeps `2^ℓ` inside `u128`.
pub const SEQ_MAX_ELL: u32 = 127;

/// A characteristic sequence together with the blocklength exponent `ℓ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharSeq {
    entries: Vec<u32>,
    ell: u32,
}

impl CharSeq {
    /// Builds a sequence over blocklength `2^ell`. Entries must be positive.
    pub fn new(entries: Vec<u32>, ell: u32) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Parameter("sequence must be non-empty".into()));
        }
        if ell == 0 || ell > SEQ_MAX_ELL {
            return Err(Error::Parameter(format!("ell = {ell} outside [1, {SEQ_MAX_ELL}]")));
        }
        if let Some(&bad) = entries.iter().find(|&&e| e == 0 || e > SEQ_MAX_ELL) {
            return Err(Error::Parameter(format!("entry {bad} outside [1, {SEQ_MAX_ELL}]")));
        }
        Ok(Self { entries, ell })
    }

    /// Sequence whose exponent is its last entry, as for every construction here.
    pub fn from_entries(entries: Vec<u32>) -> Result<Self> {
        let ell = *entries
            .last()
            .ok_or_else(|| Error::Parameter("sequence must be non-empty".into()))?;
        Self::new(entries, ell)
    }

    /// `s(i)` for `1 ≤ i ≤ len`.
    pub fn at(&self, i: usize) -> u32 {
        self.entries[i - 1]
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// Blocklength exponent: codewords have length `2^ell`.
    pub fn ell(&self) -> u32 {
        self.ell
    }

    /// Number of blocks, equal to the codeword weight.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Message length `k(s) = Σ s(i)`.
    pub fn k(&self) -> u64 {
        self.entries.iter().map(|&e| u64::from(e)).sum()
    }

    /// Block lengths in message order (`|x_L|, |x_{L−1}|, …, |x_1|`).
    pub fn message_order(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.iter().rev().copied()
    }

    pub fn is_anchor_decodable(&self) -> AnchorVerdict {
        is_anchor_decodable(self)
    }
}

impl fmt::Display for CharSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl FromStr for CharSeq {
    type Err = Error;

    /// Comma-separated positive integers, e.g. `1,2,2,4`.
    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("invalid sequence entry {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(entries)
    }
}

fn check_ell(ell: u32, max: u32) -> Result<()> {
    if ell < 3 || ell > max {
        return Err(Error::Parameter(format!("ell = {ell} outside [3, {max}]")));
    }
    Ok(())
}

/// `μ = 2^⌈log₂ℓ⌉ − ℓ`; zero when `ℓ` is a power of two.
pub fn mu(ell: u32) -> u32 {
    (1u32 << ceil_log2(u64::from(ell))) - ell
}

/// The optimal anchor-decodable sequence `f_ℓ`.
pub fn f_ell(ell: u32) -> Result<CharSeq> {
    check_ell(ell, SEQ_MAX_ELL)?;
    Ok(CharSeq {
        entries: weight_limited(ell, ell),
        ell,
    })
}

/// Shared shape of `f_ℓ` and `f_ℓ^(t)`: `t` blocks over blocklength `2^ℓ`.
fn weight_limited(ell: u32, t: u32) -> Vec<u32> {
    if t == 1 {
        return vec![ell];
    }
    let c = ceil_log2(u64::from(t));
    let mut s = Vec::with_capacity(t as usize);
    if t.is_power_of_two() {
        s.push(ell - c - 1);
        s.extend(std::iter::repeat_n(ell - c, t as usize - 2));
    } else {
        let m = (1u32 << c) - t;
        s.extend(std::iter::repeat_n(ell - c, (t - m) as usize));
        s.extend(std::iter::repeat_n(ell - c + 1, m as usize - 1));
    }
    s.push(ell);
    s
}

/// Largest admissible `r` for `f_{ℓ,r}`: `⌊(ℓ+3)/4⌋`.
pub fn r_max(ell: u32) -> u32 {
    ell.div_ceil(4)
}

/// `δ(ℓ, r)`: 1 when `ℓ > 2r + 2`, else 0.
pub fn delta(ell: u32, r: u32) -> u32 {
    u32::from(ell > 2 * r + 2)
}

/// The second-construction sequence `f_{ℓ,r}` (not anchor-decodable).
pub fn f_ell_r(ell: u32, r: u32) -> Result<CharSeq> {
    check_ell(ell, SEQ_MAX_ELL)?;
    if r < 1 || r > r_max(ell) {
        return Err(Error::Parameter(format!(
            "r = {r} outside [1, {}] for ell = {ell}",
            r_max(ell)
        )));
    }
    let d = delta(ell, r);
    let entries = (1..=ell)
        .map(|i| {
            if i == 1 {
                r + d
            } else if i == ell {
                ell
            } else if i + 2 * r < ell {
                r + i - 1
            } else {
                ell - 1 - (ell - i).div_ceil(2)
            }
        })
        .collect();
    Ok(CharSeq { entries, ell })
}

/// `f̂_ℓ = f_{ℓ, r_max}`.
pub fn f_hat(ell: u32) -> Result<CharSeq> {
    check_ell(ell, SEQ_MAX_ELL)?;
    f_ell_r(ell, r_max(ell))
}

/// Weight-`t` sequence `f_ℓ^(t)` over blocklength `2^ℓ`, for `log₂t < ℓ−1`.
pub fn f_ell_t(ell: u32, t: u32) -> Result<CharSeq> {
    check_ell(ell, SEQ_MAX_ELL)?;
    // log2(t) < ell - 1  <=>  t < 2^(ell-1)
    if t == 0 || u128::from(t) >= 1u128 << (ell - 1) {
        return Err(Error::Parameter(format!(
            "t = {t} needs 1 <= t < 2^(ell-1) = 2^{}",
            ell - 1
        )));
    }
    Ok(CharSeq {
        entries: weight_limited(ell, t),
        ell,
    })
}

/// `k_ℓ` from its closed form (no summation).
pub fn k_ell_closed_form(ell: u32) -> u64 {
    let l = u64::from(ell);
    let fl = u64::from(floor_log2(l));
    if ell.is_power_of_two() {
        l * l - l * fl + fl - 1
    } else {
        let cl = u64::from(ceil_log2(l));
        let m = u64::from(mu(ell));
        l * l - (m * fl + (l - m) * cl) + fl
    }
}

/// `k_{ℓ,r} = ℓ(ℓ−1)/2 + r(ℓ−r−1) + 1 + δ(ℓ,r)`.
pub fn k_ell_r_closed_form(ell: u32, r: u32) -> u64 {
    let (l, r64) = (u64::from(ell), u64::from(r));
    l * (l - 1) / 2 + r64 * (l - r64 - 1) + 1 + u64::from(delta(ell, r))
}

/// The printed closed form for `k̂_ℓ`:
/// `ℓ(ℓ−1)/2 + ⌊(ℓ+3)/4⌋(⌈3(ℓ−1)/4⌉ − 1) + δ_ℓ`.
///
/// It sits one below `Σ f̂_ℓ` for every `ℓ ≥ 3`; kept only so the bounds
/// table can show the difference. Use `f_hat(ell)?.k()` for the dimension.
pub fn k_hat_printed_form(ell: u32) -> u64 {
    let l = u64::from(ell);
    let d = u64::from(ell > 6);
    l * (l - 1) / 2 + u64::from(r_max(ell)) * ((3 * (l - 1)).div_ceil(4) - 1) + d
}

/// Lower bound on `k_ℓ` written with `ℓ = 2^a + b`.
pub fn k_lower_bound<F: Real>(ell: u32) -> F {
    let l = F::of(f64::from(ell));
    let lg = l.log2();
    let b = F::of(f64::from(ell - (1u32 << floor_log2(u64::from(ell)))));
    let base = l * l - l * lg + lg;
    if b == F::zero() {
        base - F::one()
    } else {
        let inv_ln2 = F::one() / F::LN_2();
        base - b * (F::of(2.0) - inv_ln2) - (b / l) * inv_ln2
    }
}

/// The uniform corollary `ℓ² − ℓlog₂ℓ + log₂ℓ − ℓ(1 − 1/(2ln2)) − 1/(2ln2)`.
pub fn k_corollary_bound<F: Real>(ell: u32) -> F {
    let l = F::of(f64::from(ell));
    let lg = l.log2();
    let h = F::one() / (F::of(2.0) * F::LN_2());
    l * l - l * lg + lg - l * (F::one() - h) - h
}

/// Which requirement a sequence fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Condition {
    /// Entries must be non-decreasing; `index` is the first 1-based `i` with `s(i) > s(i+1)`.
    NotNonDecreasing { index: usize },
    /// The last entry must equal the blocklength exponent.
    LastEntry { expected: u32, found: u32 },
    /// Condition 1: `2^ℓ − Σ_{i<L} 2^{s(i)} ≥ 2^{s(L−1)}`.
    Capacity { remaining: i128, required: u128 },
    /// Condition 2: the maximal-gap vector γ equals its shift by `shift`.
    ShiftInvariant { shift: usize },
}

impl Condition {
    /// Numbered condition of the definition (1 or 2); `None` for shape failures.
    pub fn number(&self) -> Option<u8> {
        match self {
            Condition::Capacity { .. } => Some(1),
            Condition::ShiftInvariant { .. } => Some(2),
            _ => None,
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::NotNonDecreasing { index } => {
                write!(f, "sequence decreases after entry {index}")
            }
            Condition::LastEntry { expected, found } => {
                write!(f, "last entry is {found}, expected {expected}")
            }
            Condition::Capacity { remaining, required } => write!(
                f,
                "condition 1: 2^ell - sum 2^s(i) = {remaining} < {required} = 2^s(L-1)"
            ),
            Condition::ShiftInvariant { shift } => {
                write!(f, "condition 2: gamma is invariant under cyclic shift by {shift}")
            }
        }
    }
}

/// Outcome of the anchor-decodability test, with the failing condition as witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnchorVerdict {
    pub failure: Option<Condition>,
    /// γ, when the capacity condition held and it could be formed.
    pub gamma: Option<Vec<u128>>,
}

impl AnchorVerdict {
    pub fn is_decodable(&self) -> bool {
        self.failure.is_none()
    }
}

/// `Σ_{i<L} 2^{s(i)}` over all but the last entry; `None` on overflow.
pub(crate) fn head_power_sum(s: &CharSeq) -> Option<u128> {
    s.entries[..s.len() - 1]
        .iter()
        .try_fold(0u128, |acc, &e| acc.checked_add(1u128.checked_shl(e)?))
}

/// Maximal-gap vector `γ = (2^ℓ − 1 − Σ_{i<L} 2^{s(i)}, 2^{s(L−1)} − 1, …, 2^{s(1)} − 1)`,
/// or `None` when its first entry would be negative.
pub fn gamma(s: &CharSeq) -> Option<Vec<u128>> {
    let n = 1u128 << s.ell;
    let head = head_power_sum(s)?;
    let first = n.checked_sub(1)?.checked_sub(head)?;
    let mut g = Vec::with_capacity(s.len());
    g.push(first);
    g.extend(s.entries[..s.len() - 1].iter().rev().map(|&e| (1u128 << e) - 1));
    Some(g)
}

/// Decides anchor-decodability. Sequences of any length `L ≥ 1` are accepted;
/// `L = ℓ` is the main case and `L = t` covers the weight-modified sequences.
pub fn is_anchor_decodable(s: &CharSeq) -> AnchorVerdict {
    let fail = |c| AnchorVerdict {
        failure: Some(c),
        gamma: None,
    };
    if let Some(i) = s.entries.windows(2).position(|w| w[0] > w[1]) {
        return fail(Condition::NotNonDecreasing { index: i + 1 });
    }
    let last = *s.entries.last().expect("non-empty");
    if last != s.ell {
        return fail(Condition::LastEntry {
            expected: s.ell,
            found: last,
        });
    }
    let l = s.len();
    let n = 1u128 << s.ell;
    if l >= 2 {
        let required = 1u128 << s.entries[l - 2];
        let remaining = match head_power_sum(s) {
            Some(h) if h <= n => (n - h) as i128,
            Some(h) => -((h - n).min(i128::MAX as u128) as i128),
            None => i128::MIN,
        };
        if remaining < required as i128 {
            return fail(Condition::Capacity { remaining, required });
        }
    }
    let g = gamma(s).expect("capacity condition implies a non-negative first entry");
    if let Some(shift) = (1..l).find(|&sh| (0..l).all(|i| g[(i + sh) % l] == g[i])) {
        return fail(Condition::ShiftInvariant { shift });
    }
    AnchorVerdict {
        failure: None,
        gamma: Some(g),
    }
}
