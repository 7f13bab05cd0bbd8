//! Binary constant-weight codes with low-complexity encoding and decoding.
//!
//! A message is cut into blocks whose lengths follow a *characteristic
//! sequence*; each block value becomes the number of zeros between two
//! successive ones of a word of length `2^ℓ`. Decoding reads the gaps back
//! once the *anchor* (the first one written) has been located, which never
//! requires a binomial coefficient.
//!
//! Module map:
//!
//! - [`bits`]: bit strings, sparse codewords, cyclic gaps and shifts.
//! - [`sequences`]: the characteristic sequences and the anchor-decodability test.
//! - [`codec`]: the gap encoder and the two anchor-finding decoders.
//! - [`derived`]: codes with other weights and blocklengths built on top.
//! - [`code`]: parameter resolution and a uniform interface over all constructions.
//! - [`analysis`]: exact bounds, necklace counts and the optimality search.
//! - [`oracle`]: lexicographic ranking and the verification drivers.
//!
//! Everything positional is generic over a [`Word`] type; the aliases below
//! fix the common choices.

pub mod analysis;
pub mod bits;
pub mod code;
pub mod codec;
pub mod derived;
pub mod error;
pub mod oracle;
pub mod sequences;
pub mod word;

pub use bits::{cshift, dec, extract_gaps, from_dec, gap, BitString, Codeword, GapVector};
pub use code::{Code, CodeParams, Construction, MAX_ELL};
pub use codec::{AnchorResult, DecodeMode};
pub use error::{Error, Result};
pub use sequences::{AnchorVerdict, CharSeq, Condition};
pub use word::{Real, Word};

/// Codeword with 16-bit positions (`ℓ ≤ 15`).
pub type Codeword16 = Codeword<u16>;
/// Codeword with 32-bit positions (`ℓ ≤ 31`).
pub type Codeword32 = Codeword<u32>;
/// Codeword with 64-bit positions; the default everywhere in the CLI.
pub type Codeword64 = Codeword<u64>;
pub type GapVector64 = GapVector<u64>;
pub type Code64 = Code<u64>;
pub type Code32 = Code<u32>;
