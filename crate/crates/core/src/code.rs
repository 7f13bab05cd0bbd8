//! Parameter resolution and one front end over every construction.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::bits::{BitString, Codeword};
use crate::codec::{self, DecodeMode};
use crate::derived;
use crate::error::{Error, Result};
use crate::sequences::{f_ell, f_ell_r, f_ell_t, r_max, CharSeq};
use crate::word::Word;

/// Largest supported `ℓ`. Codewords are handled sparsely, so this only bounds
/// the position type (`2^ℓ` must fit `u32` comfortably) and message sizes.
pub const MAX_ELL: u32 = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    /// `C[ℓ]`, sequence `f_ℓ`.
    C,
    /// `Ĉ[ℓ]`, sequence `f_{ℓ,r}` with `r = r_max` unless given.
    Chat,
    /// `C_t[ℓ]`, weight `t`.
    Ct,
    /// `D_t[ℓ]`, weight `t`, shortened message.
    Dt,
    /// `B_t[ℓ]`, shortened blocklength.
    Bt,
}

impl Construction {
    pub const ALL: [Construction; 5] = [Self::C, Self::Chat, Self::Ct, Self::Dt, Self::Bt];

    pub fn name(self) -> &'static str {
        match self {
            Self::C => "c",
            Self::Chat => "chat",
            Self::Ct => "ct",
            Self::Dt => "dt",
            Self::Bt => "bt",
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Construction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown construction {s:?} (c, chat, ct, dt, bt)")))
    }
}

/// Validated `(n, k, w)` of a construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CodeParams {
    pub construction: Construction,
    pub ell: u32,
    pub t: Option<u32>,
    pub r: Option<u32>,
    pub n: u64,
    pub k: u64,
    pub w: usize,
}

impl CodeParams {
    /// Checks the parameter combination and computes `(n, k, w)`.
    /// `t` is required for `ct`, `dt`, `bt` and rejected otherwise; `r` is
    /// only meaningful for `chat`.
    pub fn resolve(construction: Construction, ell: u32, t: Option<u32>, r: Option<u32>) -> Result<Self> {
        if !(3..=MAX_ELL).contains(&ell) {
            return Err(Error::Parameter(format!("ell = {ell} outside [3, {MAX_ELL}]")));
        }
        let needs_t = matches!(construction, Construction::Ct | Construction::Dt | Construction::Bt);
        match (needs_t, t) {
            (true, None) => return Err(Error::Parameter(format!("construction {construction} needs t"))),
            (false, Some(_)) => return Err(Error::Parameter(format!("construction {construction} takes no t"))),
            _ => {}
        }
        if r.is_some() && construction != Construction::Chat {
            return Err(Error::Parameter(format!("construction {construction} takes no r")));
        }
        let full = 1u64 << ell;
        let (n, k, w, r) = match construction {
            Construction::C => (full, f_ell(ell)?.k(), ell as usize, None),
            Construction::Chat => {
                let r = r.unwrap_or_else(|| r_max(ell));
                (full, f_ell_r(ell, r)?.k(), ell as usize, Some(r))
            }
            Construction::Ct => {
                let t = t.expect("checked");
                (full, f_ell_t(ell, t)?.k(), t as usize, None)
            }
            Construction::Dt => {
                let t = t.expect("checked");
                (full, derived::dt_sequence(ell, t)?.k(), t as usize, None)
            }
            Construction::Bt => {
                let t = t.expect("checked");
                let k = derived::bt_block_lengths(ell, t)?.iter().map(|&l| u64::from(l)).sum();
                (derived::bt_blocklength(ell, t) as u64, k, ell as usize, None)
            }
        };
        Ok(Self {
            construction,
            ell,
            t,
            r,
            n,
            k,
            w,
        })
    }

    /// Block lengths in the order they appear in a message.
    pub fn block_lengths(&self) -> Vec<u32> {
        match self.construction {
            Construction::Bt => derived::bt_block_lengths(self.ell, self.t.expect("resolved")).expect("resolved"),
            _ => self.sequence().expect("resolved").message_order().collect(),
        }
    }

    /// The characteristic sequence driving the encoder. For `bt` this is the
    /// base sequence `f_ℓ`; its first and last blocks are shortened by `t`.
    pub fn sequence(&self) -> Result<CharSeq> {
        match self.construction {
            Construction::C | Construction::Bt => f_ell(self.ell),
            Construction::Chat => f_ell_r(self.ell, self.r.unwrap_or_else(|| r_max(self.ell))),
            Construction::Ct => f_ell_t(self.ell, self.t.expect("resolved")),
            Construction::Dt => derived::dt_sequence(self.ell, self.t.expect("resolved")),
        }
    }
}

impl fmt::Display for CodeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[ell={}", self.construction, self.ell)?;
        if let Some(t) = self.t {
            write!(f, ", t={t}")?;
        }
        if let Some(r) = self.r {
            write!(f, ", r={r}")?;
        }
        write!(f, "]: n={}, k={}, w={}", self.n, self.k, self.w)
    }
}

/// A resolved code over position type `W`.
#[derive(Clone, Debug)]
pub struct Code<W> {
    params: CodeParams,
    seq: CharSeq,
    n: W,
}

impl<W: Word> Code<W> {
    pub fn new(params: CodeParams) -> Result<Self> {
        let n = W::narrow(u128::from(params.n)).ok_or_else(|| {
            Error::Parameter(format!(
                "n = {} does not fit a {}-bit position type",
                params.n,
                W::bits()
            ))
        })?;
        // 2^ell itself must also fit for the intermediate walk.
        if W::pow2(params.ell).is_none() {
            return Err(Error::Parameter(format!(
                "2^{} does not fit a {}-bit position type",
                params.ell,
                W::bits()
            )));
        }
        let seq = params.sequence()?;
        Ok(Self { params, seq, n })
    }

    pub fn resolve(construction: Construction, ell: u32, t: Option<u32>, r: Option<u32>) -> Result<Self> {
        Self::new(CodeParams::resolve(construction, ell, t, r)?)
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn sequence(&self) -> &CharSeq {
        &self.seq
    }

    pub fn n(&self) -> W {
        self.n
    }

    pub fn k(&self) -> u64 {
        self.params.k
    }

    pub fn weight(&self) -> usize {
        self.params.w
    }

    pub fn encode(&self, x: &[bool]) -> Result<Codeword<W>> {
        let p = &self.params;
        match p.construction {
            Construction::C | Construction::Chat | Construction::Ct | Construction::Dt => codec::encode(x, &self.seq),
            Construction::Bt => derived::encode_bt(x, p.ell, p.t.expect("resolved")),
        }
    }

    pub fn decode(&self, c: &Codeword<W>, mode: DecodeMode) -> Result<BitString> {
        let p = &self.params;
        match p.construction {
            Construction::C | Construction::Ct | Construction::Dt => codec::decode(c, &self.seq, mode),
            Construction::Chat => codec::decode2(c, p.ell, p.r.expect("resolved"), mode),
            Construction::Bt => derived::decode_bt(c, p.ell, p.t.expect("resolved"), mode),
        }
    }

    /// Encodes independent messages in parallel; results keep input order.
    pub fn encode_batch(&self, xs: &[BitString]) -> Vec<Result<Codeword<W>>> {
        xs.par_iter().map(|x| self.encode(x.as_slice())).collect()
    }

    /// Decodes independent codewords in parallel; results keep input order.
    pub fn decode_batch(&self, cs: &[Codeword<W>], mode: DecodeMode) -> Vec<Result<BitString>> {
        cs.par_iter().map(|c| self.decode(c, mode)).collect()
    }
}
