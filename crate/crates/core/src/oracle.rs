//! Independent ground truth for the codecs.
//!
//! Lexicographic ranking of weight-`w` subsets is the classic
//! binomial-coefficient method; it shares nothing with the gap codec and is
//! used to enumerate whole weight classes. The verification drivers run
//! round trips over every message (when `2^k` fits the budget) or over a
//! seeded sample plus the boundary messages that exercise the special
//! anchor branches.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::binom;
use crate::bits::{from_dec, BitString, Codeword};
use crate::code::{Code, CodeParams};
use crate::codec::DecodeMode;
use crate::error::{Error, Result};
use crate::word::{ceil_log2, Word};

/// The `rank`-th `w`-subset of `{0, …, n−1}` in lexicographic order.
pub fn unrank_lex<W: Word>(rank: &BigUint, n: W, w: usize) -> Result<Codeword<W>> {
    let nn = n.widen() as u64;
    let total = binom(nn, w as u64);
    if rank >= &total {
        return Err(Error::Domain(format!("rank {rank} >= C({nn}, {w}) = {total}")));
    }
    let mut rank = rank.clone();
    let mut ones = Vec::with_capacity(w);
    let mut next = 0u64;
    for slot in 0..w as u64 {
        let left = w as u64 - slot - 1;
        loop {
            let with_next = binom(nn - next - 1, left);
            if rank < with_next {
                break;
            }
            rank -= with_next;
            next += 1;
        }
        ones.push(W::narrow(u128::from(next)).expect("below n"));
        next += 1;
    }
    Codeword::new(n, ones)
}

/// Number of `w`-subsets lexicographically smaller than the ones of `c`.
pub fn rank_lex<W: Word>(c: &Codeword<W>, w: usize) -> Result<BigUint> {
    if c.weight() != w {
        return Err(Error::WeightMismatch {
            expected: w,
            got: c.weight(),
        });
    }
    let n = c.n().widen() as u64;
    let mut rank = BigUint::zero();
    let mut from = 0u64;
    for (slot, p) in c.ones().iter().enumerate() {
        let p = p.widen() as u64;
        let left = (w - slot - 1) as u64;
        for v in from..p {
            rank += binom(n - v - 1, left);
        }
        from = p + 1;
    }
    Ok(rank)
}

/// Default exhaustive budget: `2^25` messages.
pub const DEFAULT_BUDGET_LOG2: u32 = 25;
/// Default census budget: `2^10` weight-`w` words, enough for `ℓ = 3` only.
pub const DEFAULT_CENSUS_BUDGET_LOG2: u32 = 10;
/// Failures kept verbatim in a report; the count keeps going.
pub const MAX_RECORDED_FAILURES: usize = 32;
const CHUNK: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureKind {
    EncodeError,
    WrongWeight,
    WrongLength,
    DecodeError,
    RoundTrip,
    Duplicate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub kind: FailureKind,
    pub message: String,
    pub codeword: Option<String>,
    pub decoded: Option<String>,
    pub detail: String,
}

/// Outcome of a verification run.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub params: CodeParams,
    pub method: &'static str,
    pub seed: Option<u64>,
    pub messages_checked: u64,
    pub failure_count: u64,
    pub failures: Vec<Failure>,
    /// Exhaustive runs only: the codebook has exactly `2^k` distinct words.
    pub codebook_distinct: Option<bool>,
    pub weight_ok: bool,
    pub length_ok: bool,
    #[serde(serialize_with = "as_millis")]
    pub elapsed: Duration,
}

fn as_millis<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1e3)
}

/// Equality ignores timing so reruns compare equal.
impl PartialEq for VerifyReport {
    fn eq(&self, o: &Self) -> bool {
        self.params == o.params
            && self.method == o.method
            && self.seed == o.seed
            && self.messages_checked == o.messages_checked
            && self.failure_count == o.failure_count
            && self.failures == o.failures
            && self.codebook_distinct == o.codebook_distinct
            && self.weight_ok == o.weight_ok
            && self.length_ok == o.length_ok
    }
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0 && self.codebook_distinct != Some(false)
    }

    /// Line-oriented summary followed by one line per recorded failure.
    pub fn render(&self) -> String {
        let mut s = format!(
            "{} {}: checked={} failures={} weight_ok={} length_ok={}",
            self.method, self.params, self.messages_checked, self.failure_count, self.weight_ok, self.length_ok
        );
        if let Some(d) = self.codebook_distinct {
            s += &format!(" distinct={d}");
        }
        if let Some(seed) = self.seed {
            s += &format!(" seed={seed}");
        }
        s += &format!(" elapsed_ms={:.1}\n", self.elapsed.as_secs_f64() * 1e3);
        for f in &self.failures {
            s += &format!("FAIL {:?} message={} detail={}\n", f.kind, f.message, f.detail);
        }
        s += if self.passed() { "PASS\n" } else { "FAIL\n" };
        s
    }
}

/// Partial tallies for one shard.
#[derive(Default)]
struct Tally {
    checked: u64,
    failure_count: u64,
    failures: Vec<Failure>,
    weight_ok: bool,
    length_ok: bool,
    keys: Vec<Key>,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Key {
    Packed(u128),
    Wide(Vec<u64>),
}

impl Tally {
    fn new() -> Self {
        Self {
            weight_ok: true,
            length_ok: true,
            ..Default::default()
        }
    }

    fn fail(&mut self, f: Failure) {
        self.failure_count += 1;
        if self.failures.len() < MAX_RECORDED_FAILURES {
            self.failures.push(f);
        }
    }

    fn merge(mut self, o: Tally) -> Tally {
        self.checked += o.checked;
        self.failure_count += o.failure_count;
        for f in o.failures {
            if self.failures.len() < MAX_RECORDED_FAILURES {
                self.failures.push(f);
            }
        }
        self.weight_ok &= o.weight_ok;
        self.length_ok &= o.length_ok;
        self.keys.extend(o.keys);
        self
    }
}

fn key_of(c: &Codeword<u64>, pos_bits: u32) -> Key {
    if c.weight() as u32 * pos_bits <= 128 {
        Key::Packed(c.ones().iter().fold(0u128, |acc, &p| (acc << pos_bits) | u128::from(p)))
    } else {
        Key::Wide(c.ones().to_vec())
    }
}

fn check_one(code: &Code<u64>, x: &[bool], mode: DecodeMode, tally: &mut Tally, keep_key: bool) {
    tally.checked += 1;
    let shown = || BitString::new(x.to_vec()).to_string();
    let c = match code.encode(x) {
        Ok(c) => c,
        Err(e) => {
            return tally.fail(Failure {
                kind: FailureKind::EncodeError,
                message: shown(),
                codeword: None,
                decoded: None,
                detail: e.to_string(),
            })
        }
    };
    let p = code.params();
    if c.weight() != p.w {
        tally.weight_ok = false;
        tally.fail(Failure {
            kind: FailureKind::WrongWeight,
            message: shown(),
            codeword: Some(c.to_string()),
            decoded: None,
            detail: format!("weight {} != {}", c.weight(), p.w),
        });
    }
    if c.n() != p.n {
        tally.length_ok = false;
        tally.fail(Failure {
            kind: FailureKind::WrongLength,
            message: shown(),
            codeword: Some(c.to_string()),
            decoded: None,
            detail: format!("length {} != {}", c.n(), p.n),
        });
    }
    match code.decode(&c, mode) {
        Ok(y) if y.as_slice() == x => {}
        Ok(y) => tally.fail(Failure {
            kind: FailureKind::RoundTrip,
            message: shown(),
            codeword: Some(c.to_string()),
            decoded: Some(y.to_string()),
            detail: "decoded message differs".into(),
        }),
        Err(e) => tally.fail(Failure {
            kind: FailureKind::DecodeError,
            message: shown(),
            codeword: Some(c.to_string()),
            decoded: None,
            detail: e.to_string(),
        }),
    }
    if keep_key {
        tally.keys.push(key_of(&c, ceil_log2(p.n)));
    }
}

/// Round-trips every message of the code; fails fast if `2^k` exceeds `2^budget_log2`.
pub fn verify_exhaustive(params: &CodeParams, mode: DecodeMode, budget_log2: u32) -> Result<VerifyReport> {
    if params.k > u64::from(budget_log2) {
        return Err(Error::Budget {
            needed_log2: params.k as u32,
            budget_log2,
        });
    }
    let start = Instant::now();
    let code = Code::<u64>::new(params.clone())?;
    let k = params.k as usize;
    let total = 1u64 << params.k;
    let chunks = total.div_ceil(CHUNK);
    let tally = (0..chunks)
        .into_par_iter()
        .map(|ci| {
            let mut t = Tally::new();
            for v in ci * CHUNK..((ci + 1) * CHUNK).min(total) {
                let x = from_dec(v, k).expect("v < 2^k").into_vec();
                check_one(&code, &x, mode, &mut t, true);
            }
            t
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Tally::new(), Tally::merge);

    let mut keys = tally.keys;
    keys.par_sort_unstable();
    let distinct = keys.windows(2).all(|w| w[0] != w[1]) && keys.len() as u64 == total;
    let mut report = VerifyReport {
        params: params.clone(),
        method: "exhaustive",
        seed: None,
        messages_checked: tally.checked,
        failure_count: tally.failure_count,
        failures: tally.failures,
        codebook_distinct: Some(distinct),
        weight_ok: tally.weight_ok,
        length_ok: tally.length_ok,
        elapsed: Duration::ZERO,
    };
    if !distinct {
        report.failure_count += 1;
        report.failures.push(Failure {
            kind: FailureKind::Duplicate,
            message: String::new(),
            codeword: None,
            decoded: None,
            detail: "two messages share a codeword".into(),
        });
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Messages whose non-lead blocks are all ones (the maximal-gap family),
/// plus the all-zero and all-ones messages.
pub fn boundary_messages(params: &CodeParams) -> Vec<Vec<bool>> {
    let lens = params.block_lengths();
    let k = params.k as usize;
    let lead = lens[0] as usize;
    let mut out = vec![vec![false; k], vec![true; k]];
    let tail = vec![true; k - lead];
    let top = if lead >= 64 { u64::MAX } else { (1u64 << lead) - 1 };
    let mut leads = vec![0u64, 1, top / 2, top.saturating_sub(1), top];
    leads.dedup();
    for v in leads {
        let mut x = BitString::from_u64(v, lead).into_vec();
        x.extend_from_slice(&tail);
        out.push(x);
    }
    out.dedup();
    out
}

/// Round-trips the boundary family and `samples` messages drawn from a
/// ChaCha8 stream per 4096-message chunk, all derived from `seed`.
pub fn verify_sampled(params: &CodeParams, samples: u64, seed: u64, mode: DecodeMode) -> Result<VerifyReport> {
    let start = Instant::now();
    let code = Code::<u64>::new(params.clone())?;
    let k = params.k as usize;

    let mut head = Tally::new();
    for x in boundary_messages(params) {
        check_one(&code, &x, mode, &mut head, false);
    }
    let chunks = samples.div_ceil(CHUNK);
    let tally = (0..chunks)
        .into_par_iter()
        .map(|ci| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(ci);
            let mut t = Tally::new();
            let mut x = vec![false; k];
            for _ in ci * CHUNK..((ci + 1) * CHUNK).min(samples) {
                for chunk in x.chunks_mut(64) {
                    let word: u64 = rng.gen();
                    for (i, b) in chunk.iter_mut().enumerate() {
                        *b = (word >> i) & 1 == 1;
                    }
                }
                check_one(&code, &x, mode, &mut t, false);
            }
            t
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(head, Tally::merge);

    Ok(VerifyReport {
        params: params.clone(),
        method: "sampled",
        seed: Some(seed),
        messages_checked: tally.checked,
        failure_count: tally.failure_count,
        failures: tally.failures,
        codebook_distinct: None,
        weight_ok: tally.weight_ok,
        length_ok: tally.length_ok,
        elapsed: start.elapsed(),
    })
}

/// How many words of the code's length and weight lie in its image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub params: CodeParams,
    pub words: u64,
    pub in_image: u64,
    /// The image itself, in lexicographic order.
    pub image: Vec<Codeword<u64>>,
}

impl Census {
    pub fn expected_image(&self) -> u64 {
        1u64 << self.params.k
    }
}

/// Enumerates every word of length `n` and weight `w` by unranking, and keeps
/// those that decode strictly to a message re-encoding to the same word.
pub fn coverage_census(params: &CodeParams, budget_log2: u32) -> Result<Census> {
    let total = binom(params.n, params.w as u64);
    let needed = total.bits() as u32;
    if total > BigUint::from(1u64) << budget_log2 {
        return Err(Error::Budget {
            needed_log2: needed,
            budget_log2,
        });
    }
    let total = total.to_u64().expect("within budget");
    let code = Code::<u64>::new(params.clone())?;
    let image: Vec<Codeword<u64>> = (0..total)
        .into_par_iter()
        .filter_map(|r| {
            let c = unrank_lex(&BigUint::from(r), params.n, params.w).expect("rank < total");
            let x = code.decode(&c, DecodeMode::Strict).ok()?;
            (code.encode(x.as_slice()).ok()? == c).then_some(c)
        })
        .collect();
    Ok(Census {
        params: params.clone(),
        words: total,
        in_image: image.len() as u64,
        image,
    })
}

/// Every codeword of the code, by encoding all `2^k` messages.
pub fn codebook(params: &CodeParams, budget_log2: u32) -> Result<HashSet<Codeword<u64>>> {
    if params.k > u64::from(budget_log2) {
        return Err(Error::Budget {
            needed_log2: params.k as u32,
            budget_log2,
        });
    }
    let code = Code::<u64>::new(params.clone())?;
    let k = params.k as usize;
    (0..1u64 << params.k)
        .into_par_iter()
        .map(|v| code.encode(from_dec(v, k).expect("v < 2^k").as_slice()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::Construction;

    fn params(c: Construction, ell: u32, t: Option<u32>) -> CodeParams {
        CodeParams::resolve(c, ell, t, None).unwrap()
    }

    #[test]
    fn unrank_examples() {
        let u = |r: u32| unrank_lex(&BigUint::from(r), 8u32, 3).unwrap().into_ones();
        assert_eq!(u(0), [0, 1, 2]);
        assert_eq!(u(1), [0, 1, 3]);
        assert_eq!(u(55), [5, 6, 7]);
        assert!(unrank_lex(&BigUint::from(56u32), 8u32, 3).is_err());
    }

    #[test]
    fn rank_unrank_inverse() {
        for (n, w) in [(8u64, 3usize), (16, 4), (12, 5)] {
            let total = binom(n, w as u64).to_u64().unwrap();
            let mut prev: Option<Vec<u64>> = None;
            for r in 0..total {
                let c = unrank_lex(&BigUint::from(r), n, w).unwrap();
                assert_eq!(rank_lex(&c, w).unwrap(), BigUint::from(r));
                if let Some(p) = &prev {
                    assert!(p.as_slice() < c.ones(), "lexicographic order");
                }
                prev = Some(c.into_ones());
            }
        }
        let c = Codeword::new(8u64, vec![1, 2]).unwrap();
        assert!(rank_lex(&c, 3).is_err());
    }

    #[test]
    fn exhaustive_reports() {
        let r = verify_exhaustive(&params(Construction::C, 3, None), DecodeMode::Strict, 25).unwrap();
        assert_eq!((r.messages_checked, r.failure_count), (32, 0));
        assert!(r.passed());
        let r = verify_exhaustive(&params(Construction::Chat, 5, None), DecodeMode::Strict, 25).unwrap();
        assert_eq!((r.messages_checked, r.failure_count), (32768, 0));
        assert!(matches!(
            verify_exhaustive(&params(Construction::C, 8, None), DecodeMode::Strict, 25),
            Err(Error::Budget {
                needed_log2: 42,
                budget_log2: 25
            })
        ));
    }

    #[test]
    fn sampled_is_deterministic() {
        let p = params(Construction::C, 10, None);
        let a = verify_sampled(&p, 10_000, 42, DecodeMode::Strict).unwrap();
        let b = verify_sampled(&p, 10_000, 42, DecodeMode::Strict).unwrap();
        assert_eq!(a, b);
        assert!(a.passed());
        assert_eq!(a.messages_checked, 10_000 + boundary_messages(&p).len() as u64);
    }

    #[test]
    fn boundary_family_hits_the_special_branch() {
        let p = params(Construction::C, 8, None);
        let s = p.sequence().unwrap();
        let code = Code::<u64>::new(p.clone()).unwrap();
        let msgs = boundary_messages(&p);
        let mut hits = 0;
        for x in &msgs {
            let c = code.encode(x).unwrap();
            let (_, a) = crate::codec::decode_traced(&c, &s, DecodeMode::Strict).unwrap();
            hits += usize::from(a.via_maximal_gap);
        }
        assert!(hits >= msgs.len() - 1);
        let r = verify_sampled(&p, 0, 1, DecodeMode::Strict).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn census_for_ell_3() {
        let p = params(Construction::C, 3, None);
        let census = coverage_census(&p, DEFAULT_CENSUS_BUDGET_LOG2).unwrap();
        assert_eq!((census.words, census.in_image), (56, 32));
        let book = codebook(&p, 25).unwrap();
        let image: HashSet<_> = census.image.iter().cloned().collect();
        assert_eq!(book, image);
        assert!(coverage_census(&params(Construction::C, 4, None), DEFAULT_CENSUS_BUDGET_LOG2).is_err());
    }
}
