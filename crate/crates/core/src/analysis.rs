//! Exact upper bounds on the dimension and the exhaustive optimality search.
//!
//! Every integer quantity is computed with arbitrary precision and every
//! `⌊log₂⌋` comes from a bit length, so comparisons against `k_ℓ` are exact.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sequences::{f_ell, f_hat, is_anchor_decodable, CharSeq};
use crate::word::Real;

/// Exact `C(n, w)`; zero when `w > n`.
pub fn binom(n: u64, w: u64) -> BigUint {
    if w > n {
        return BigUint::zero();
    }
    let w = w.min(n - w);
    let mut acc = BigUint::one();
    for i in 1..=w {
        // acc * (n - w + i) is divisible by i after i steps
        acc = acc * (n - w + i) / i;
    }
    acc
}

/// `⌊log₂ v⌋` of a positive big integer.
pub fn floor_log2_big(v: &BigUint) -> Result<u64> {
    if v.is_zero() {
        return Err(Error::Domain("log2 of zero".into()));
    }
    Ok(v.bits() - 1)
}

/// `⌊log₂ C(n, w)⌋`, exact.
pub fn floor_log2_binom(n: u64, w: u64) -> Result<u64> {
    floor_log2_big(&binom(n, w)).map_err(|_| Error::Domain(format!("C({n}, {w}) = 0")))
}

/// Stirling upper bound on `log₂ C(2^ℓ, ℓ)`: `log₂[(2^ℓ e/ℓ)^ℓ / √(2πℓ)]`
/// `= ℓ² − ℓlog₂ℓ + ℓ/ln2 − ½log₂ℓ − ln(2π)/(2ln2)`.
pub fn stirling_upper_bound<F: Real>(ell: u32) -> F {
    stirling_printed_form::<F>(ell) + (F::of(2.0) * F::PI()).ln() / (F::of(2.0) * F::LN_2())
}

/// The same expression with `ln(2π)/ln2` as the constant term, i.e. without
/// halving the `√(2π)` contribution. It drops below `⌊log₂ C(2^ℓ, ℓ)⌋` from
/// `ℓ = 5` on, so it is not a bound; kept for comparison only.
pub fn stirling_printed_form<F: Real>(ell: u32) -> F {
    let l = F::of(f64::from(ell));
    let lg = l.log2();
    let ln2 = F::LN_2();
    let two_pi = F::of(2.0) * F::PI();
    l * l - l * lg + l / ln2 - lg / F::of(2.0) - two_pi.ln() / ln2
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Möbius function.
pub fn moebius(mut n: u64) -> i8 {
    let mut sign = 1i8;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    let (mut m, mut out, mut p) = (n, n, 2);
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if m > 1 {
        out -= out / m;
    }
    out
}

/// Primitive binary necklaces of length `n` and weight `w`:
/// `(1/n) Σ_{d | gcd(n,w)} μ(d) C(n/d, w/d)`.
pub fn primitive_necklaces(n: u64, w: u64) -> BigUint {
    if n == 0 || w > n {
        return BigUint::zero();
    }
    let mut acc = BigInt::zero();
    for d in divisors(gcd(n, w)) {
        match moebius(d) {
            1 => acc += BigInt::from(binom(n / d, w / d)),
            -1 => acc -= BigInt::from(binom(n / d, w / d)),
            _ => {}
        }
    }
    (acc / BigInt::from(n)).to_biguint().expect("count is non-negative")
}

/// All necklaces (primitive or not) of length `d` and weight `j`: the
/// coefficient of `x^j y^{d−j}` in `(1/d) Σ_{e | d} φ(d/e) (x^{d/e} + y^{d/e})^e`.
pub fn necklaces(d: u64, j: u64) -> BigUint {
    if d == 0 || j > d {
        return BigUint::zero();
    }
    let mut acc = BigUint::zero();
    for e in divisors(d) {
        let step = d / e;
        if j.is_multiple_of(step) {
            acc += binom(e, j / step) * totient(step);
        }
    }
    acc / d
}

/// Primitive necklaces through the generating-function route:
/// `Σ_{d | n} μ(n/d) q(d, wd/n)` with `q` the necklace count at length `d`;
/// divisors with non-integer `wd/n` contribute nothing.
pub fn primitive_necklaces_by_generating_function(n: u64, w: u64) -> BigUint {
    if n == 0 || w > n {
        return BigUint::zero();
    }
    let mut acc = BigInt::zero();
    for d in divisors(n) {
        if !(w * d).is_multiple_of(n) {
            continue;
        }
        let q = BigInt::from(necklaces(d, w * d / n));
        match moebius(n / d) {
            1 => acc += q,
            -1 => acc -= q,
            _ => {}
        }
    }
    acc.to_biguint().expect("count is non-negative")
}

/// `ℓ + ⌊log₂ p(2^ℓ, ℓ)⌋`: every rotation class of a codeword is a primitive necklace.
pub fn necklace_bound(ell: u32) -> Result<u64> {
    let p = primitive_necklaces(1u64 << ell, u64::from(ell));
    Ok(u64::from(ell) + floor_log2_big(&p)?)
}

/// `(1 + 1/(2ln2))ℓ − 1.5log₂ℓ − ln(2π/e)/(2ln2)`, the linear bound on `Δ(ℓ)`.
pub fn delta_linear_bound<F: Real>(ell: u32) -> F {
    let l = F::of(f64::from(ell));
    let two_ln2 = F::of(2.0) * F::LN_2();
    let c = (F::of(2.0) * F::PI() / F::E()).ln() / two_ln2;
    (F::one() + F::one() / two_ln2) * l - F::of(1.5) * l.log2() - c
}

/// `Δ(ℓ) = ⌊log₂ C(2^ℓ, ℓ)⌋ − k_ℓ`, with whether it respects the linear bound.
pub fn delta_ell(ell: u32) -> Result<(u64, bool)> {
    let k = f_ell(ell)?.k();
    let ub = floor_log2_binom(1u64 << ell, u64::from(ell))?;
    let d = ub - k;
    Ok((d, (d as f64) <= delta_linear_bound::<f64>(ell)))
}

/// One row of the bounds table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsReport {
    pub ell: u32,
    pub k_ell: u64,
    pub k_hat_ell: u64,
    pub log2_binom_floor: u64,
    pub stirling_ub: f64,
    pub necklace_ub: u64,
    pub delta_ell: u64,
    pub delta_within_bound: bool,
}

impl BoundsReport {
    pub fn compute(ell: u32) -> Result<Self> {
        if !(3..=62).contains(&ell) {
            return Err(Error::Parameter(format!("ell = {ell} outside [3, 62]")));
        }
        let (delta_ell, delta_within_bound) = delta_ell(ell)?;
        Ok(Self {
            ell,
            k_ell: f_ell(ell)?.k(),
            k_hat_ell: f_hat(ell)?.k(),
            log2_binom_floor: floor_log2_binom(1u64 << ell, u64::from(ell))?,
            stirling_ub: stirling_upper_bound::<f64>(ell),
            necklace_ub: necklace_bound(ell)?,
            delta_ell,
            delta_within_bound,
        })
    }

    /// `k_ℓ ≤ ⌊log₂C⌋ ≤ Stirling`, `k_ℓ ≤` necklace bound, and the `Δ` bound.
    pub fn consistent(&self) -> bool {
        self.k_ell <= self.log2_binom_floor
            && (self.log2_binom_floor as f64) <= self.stirling_ub
            && self.k_ell <= self.necklace_ub
            && self.delta_within_bound
    }
}

/// Largest `ℓ` accepted by [`optimality_search`].
pub const SEARCH_MAX_ELL: u32 = 8;

/// Result of enumerating every anchor-decodable sequence for one `ℓ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptimalityReport {
    pub ell: u32,
    pub max_k: u64,
    pub maximizers: Vec<CharSeq>,
    /// Every `k(s)` attained by some anchor-decodable sequence.
    pub attained: BTreeSet<u64>,
    /// Sequences that survived the capacity pruning and were tested.
    pub examined: u64,
    pub decodable: u64,
}

/// Enumerates non-decreasing `s(1..ℓ−1)` with `s(ℓ) = ℓ`, pruning prefixes
/// that already break `Σ_{i<ℓ} 2^{s(i)} + 2^{s(ℓ−1)} ≤ 2^ℓ`, and keeps those
/// passing the anchor-decodability test.
pub fn optimality_search(ell: u32) -> Result<OptimalityReport> {
    if !(3..=SEARCH_MAX_ELL).contains(&ell) {
        return Err(Error::Parameter(format!("ell = {ell} outside [3, {SEARCH_MAX_ELL}]")));
    }
    let mut report = OptimalityReport {
        ell,
        max_k: 0,
        maximizers: Vec::new(),
        attained: BTreeSet::new(),
        examined: 0,
        decodable: 0,
    };
    let mut prefix = Vec::with_capacity(ell as usize);
    search(ell, 1, 0, &mut prefix, &mut report);
    Ok(report)
}

fn search(ell: u32, low: u32, used: u64, prefix: &mut Vec<u32>, report: &mut OptimalityReport) {
    let cap = 1u64 << ell;
    let left = (ell as usize - 1) - prefix.len();
    if left == 0 {
        report.examined += 1;
        let mut entries = prefix.clone();
        entries.push(ell);
        let s = CharSeq::new(entries, ell).expect("entries in range");
        if is_anchor_decodable(&s).is_decodable() {
            report.decodable += 1;
            let k = s.k();
            report.attained.insert(k);
            if k > report.max_k {
                report.max_k = k;
                report.maximizers.clear();
            }
            if k == report.max_k {
                report.maximizers.push(s);
            }
        }
        return;
    }
    for v in low..ell {
        // remaining entries are all >= v, and the capacity term adds one more 2^{s(ℓ−1)} >= 2^v
        if used + (left as u64 + 1) * (1u64 << v) > cap {
            break;
        }
        prefix.push(v);
        search(ell, v, used + (1u64 << v), prefix, report);
        prefix.pop();
    }
}
