//! The unsigned machine word used for codeword positions and gap values.
//!
//! Every codec in this crate is generic over [`Word`]. A word type can hold a
//! blocklength `n = 2^ℓ` as long as `ℓ < BITS`, so `u16` covers `ℓ ≤ 15`,
//! `u32` covers `ℓ ≤ 31` and `u64` covers `ℓ ≤ 63`.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_traits::{Float, FloatConst, PrimInt, Unsigned};

/// Unsigned primitive integer usable as a position / gap type.
pub trait Word: PrimInt + Unsigned + Hash + Debug + Display + Default + Send + Sync + 'static {
    /// Width of the type in bits.
    fn bits() -> u32 {
        Self::zero().count_zeros()
    }

    /// `2^e`, or `None` when it does not fit.
    fn pow2(e: u32) -> Option<Self> {
        if e < Self::bits() {
            Some(Self::one() << e as usize)
        } else {
            None
        }
    }

    /// Lossless widening to `u128`.
    fn widen(self) -> u128 {
        self.to_u128().expect("unsigned primitive fits in u128")
    }

    /// Narrowing from `u128`; `None` when the value does not fit.
    fn narrow(v: u128) -> Option<Self> {
        Self::from(v)
    }

    fn as_usize(self) -> usize {
        self.to_usize().expect("word value fits in usize")
    }
}

impl<T> Word for T where T: PrimInt + Unsigned + Hash + Debug + Display + Default + Send + Sync + 'static {}

/// Floating-point type used by the real-valued bounds (`f32` or `f64`).
pub trait Real: Float + FloatConst + Debug + Display + Send + Sync + 'static {
    fn of(v: f64) -> Self {
        Self::from(v).expect("finite f64 converts")
    }
}

impl<T> Real for T where T: Float + FloatConst + Debug + Display + Send + Sync + 'static {}

/// `⌈log₂ x⌉` for `x ≥ 1`.
pub fn ceil_log2(x: u64) -> u32 {
    debug_assert!(x >= 1);
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

/// `⌊log₂ x⌋` for `x ≥ 1`.
pub fn floor_log2(x: u64) -> u32 {
    debug_assert!(x >= 1);
    63 - x.leading_zeros()
}
