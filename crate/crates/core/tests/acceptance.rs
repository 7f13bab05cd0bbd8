//! End-to-end acceptance checks. Runs without the libtest harness so the
//! criteria execute one after another (the timing check is not disturbed by
//! concurrent work) and each prints a single PASS/FAIL line.

use std::collections::HashSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use gapcode::analysis::{
    delta_ell, floor_log2_binom, optimality_search, primitive_necklaces, stirling_printed_form, BoundsReport,
};
use gapcode::codec::{decode2_traced, decode_traced, encode};
use gapcode::oracle::{codebook, verify_exhaustive, verify_sampled, DEFAULT_BUDGET_LOG2};
use gapcode::sequences::{f_ell, f_ell_r, f_hat, k_hat_printed_form};
use gapcode::{dec, extract_gaps, Code, CodeParams, Codeword, Construction, DecodeMode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn within(label: &str, elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed <= limit, || {
        format!("{label} took {:.1} ms, limit {:.0} ms", ms(elapsed), ms(limit))
    })
}

fn params(c: Construction, ell: u32, t: Option<u32>) -> CodeParams {
    CodeParams::resolve(c, ell, t, None).expect("valid parameters")
}

fn bits(s: &str) -> Vec<bool> {
    s.bytes().map(|b| b == b'1').collect()
}

fn fig1() -> Outcome {
    let s = f_ell(4).map_err(|e| e.to_string())?;
    let x = bits("101011100");
    let start = Instant::now();
    let c: Codeword<u64> = encode(&x, &s).map_err(|e| e.to_string())?;
    let (back, _) = decode_traced(&c, &s, DecodeMode::Strict).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(c.n() == 16 && c.ones() == [1, 2, 10, 14], || format!("encoded to {c}"))?;
    ensure(back.as_slice() == x.as_slice(), || format!("decoded to {back}"))?;
    within("encode+decode", elapsed, Duration::from_millis(1))?;
    Ok(format!(
        "ones {{1,2,10,14}} in n=16, round trip in {:.3} ms",
        ms(elapsed)
    ))
}

fn fig2() -> Outcome {
    let start = Instant::now();
    let c = Codeword::<u64>::new(128, vec![10, 26, 32, 37, 64, 96, 127]).map_err(|e| e.to_string())?;
    let g = extract_gaps(&c).map_err(|e| e.to_string())?;
    let (x, a) = decode2_traced(&c, 7, 2, DecodeMode::Strict).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(g.as_slice() == [10, 15, 5, 4, 26, 31, 30], || {
        format!("gaps {:?}", g.as_slice())
    })?;
    ensure(a.anchor_index == 4 && c.ones()[4] == 64, || format!("anchor {a:?}"))?;
    let lens: Vec<u32> = f_ell_r(7, 2).map_err(|e| e.to_string())?.message_order().collect();
    let mut values = Vec::new();
    let mut off = 0;
    for l in lens {
        values.push(dec::<u64>(&x.as_slice()[off..off + l as usize]).map_err(|e| e.to_string())?);
        off += l as usize;
    }
    ensure(values == [64, 31, 30, 10, 15, 5, 4], || {
        format!("block values {values:?}")
    })?;
    within("gaps+decode", elapsed, Duration::from_millis(1))?;
    Ok(format!(
        "gaps, anchor 4 (position 64) and block values match in {:.3} ms",
        ms(elapsed)
    ))
}

fn table1() -> Outcome {
    let golden = include_str!("../../cli/tests/golden/table_3_10.csv");
    let start = Instant::now();
    let mut csv = String::from("ell,f_ell,f_hat_ell,k_ell,k_hat_ell\n");
    for ell in 3..=10 {
        let (f, h) = (f_ell(ell).unwrap(), f_hat(ell).unwrap());
        csv += &format!("{ell},\"{f}\",\"{h}\",{},{}\n", f.k(), h.k());
    }
    let elapsed = start.elapsed();
    ensure(csv == golden, || format!("table differs:\n{csv}"))?;
    within("table", elapsed, Duration::from_secs(1))?;
    let off_by_one = (3..=10)
        .filter(|&l| k_hat_printed_form(l) != f_hat(l).unwrap().k())
        .count();
    Ok(format!(
        "rows 3..10 byte-exact; printed closed form for k_hat disagrees with the sum on {off_by_one}/8 rows"
    ))
}

fn exhaustive(c: Construction, ells: &[u32], t: Option<u32>, limit: Duration) -> Result<u64, String> {
    let mut total = 0;
    for &ell in ells {
        let p = params(c, ell, t);
        let start = Instant::now();
        let r = verify_exhaustive(&p, DecodeMode::Strict, DEFAULT_BUDGET_LOG2).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        ensure(r.passed() && r.weight_ok && r.length_ok, || r.render())?;
        ensure(r.codebook_distinct == Some(true), || {
            format!("{p}: codebook not distinct")
        })?;
        ensure(r.messages_checked == 1 << p.k, || {
            format!("{p}: checked {}", r.messages_checked)
        })?;
        within(&p.to_string(), elapsed, limit)?;
        total += r.messages_checked;
    }
    Ok(total)
}

fn thm1() -> Outcome {
    let n = exhaustive(Construction::C, &[3, 4, 5], None, Duration::from_secs(5))?;
    Ok(format!("{n} messages, zero failures, codebooks of size 2^k"))
}

fn thm3() -> Outcome {
    let n = exhaustive(Construction::Chat, &[3, 4, 5], None, Duration::from_secs(5))?;
    let mut sampled = 0;
    for ell in [7, 8] {
        let p = params(Construction::Chat, ell, None);
        let r = verify_sampled(&p, 1_000_000, 0x5eed, DecodeMode::Strict).map_err(|e| e.to_string())?;
        ensure(r.passed() && r.weight_ok && r.length_ok, || r.render())?;
        ensure(r.messages_checked >= 1_000_000, || {
            format!("{p}: only {}", r.messages_checked)
        })?;
        sampled += r.messages_checked;
    }
    Ok(format!(
        "{n} exhaustive, {sampled} sampled (with boundary family), zero failures"
    ))
}

fn derived_codes() -> Outcome {
    let start = Instant::now();
    let mut n = 0;
    for t in [2, 3, 4] {
        n += exhaustive(Construction::Ct, &[5], Some(t), Duration::from_secs(30))?;
    }
    for ell in [4, 5] {
        for t in 1..ell {
            n += exhaustive(Construction::Dt, &[ell], Some(t), Duration::from_secs(30))?;
        }
    }
    for (ell, t) in [(5, 1), (6, 1), (6, 2)] {
        n += exhaustive(Construction::Bt, &[ell], Some(t), Duration::from_secs(30))?;
    }
    for ell in 3..=6 {
        let d = codebook(&params(Construction::Dt, ell, Some(2)), DEFAULT_BUDGET_LOG2).map_err(|e| e.to_string())?;
        let c = codebook(&params(Construction::Ct, ell, Some(2)), DEFAULT_BUDGET_LOG2).map_err(|e| e.to_string())?;
        ensure(d == c, || {
            format!("D2[{ell}] != C2[{ell}] ({} vs {} words)", d.len(), c.len())
        })?;
    }
    within("derived codes", start.elapsed(), Duration::from_secs(30))?;
    Ok(format!(
        "{n} messages over Ct/Dt/Bt, zero failures; D2 = C2 for ell 3..6"
    ))
}

fn optimality() -> Outcome {
    let start = Instant::now();
    for ell in 3..=7 {
        let r = optimality_search(ell).map_err(|e| e.to_string())?;
        let f = f_ell(ell).unwrap();
        ensure(r.max_k == f.k(), || {
            format!("ell={ell}: max k {} vs k_ell {}", r.max_k, f.k())
        })?;
        ensure(r.maximizers.contains(&f), || {
            format!("ell={ell}: f_ell not among maximizers")
        })?;
    }
    let r8 = optimality_search(8).map_err(|e| e.to_string())?;
    let (l, lg) = (8u64, 3u64);
    let target = l * l - l * lg + lg;
    ensure(!r8.attained.contains(&target), || format!("ell=8 attains {target}"))?;
    ensure(r8.max_k < target, || format!("ell=8 max k {}", r8.max_k))?;
    within("search", start.elapsed(), Duration::from_secs(60))?;
    Ok(format!(
        "max k = k_ell for ell 3..7; ell=8 max {} < {target} over {} decodable sequences",
        r8.max_k, r8.decodable
    ))
}

fn bounds() -> Outcome {
    let start = Instant::now();
    ensure(delta_ell(3).unwrap().0 == 0, || "Delta(3) != 0".into())?;
    ensure(delta_ell(4).unwrap().0 == 1, || "Delta(4) != 1".into())?;
    let mut printed_fails = Vec::new();
    for ell in 3..=20 {
        let b = BoundsReport::compute(ell).map_err(|e| e.to_string())?;
        ensure(b.consistent(), || format!("{b:?}"))?;
        if (b.log2_binom_floor as f64) > stirling_printed_form::<f64>(ell) {
            printed_fails.push(ell);
        }
    }
    within("bounds", start.elapsed(), Duration::from_secs(5))?;
    Ok(format!(
        "all ell 3..20 consistent (Stirling with ln(2pi)/(2 ln 2)); the ln(2pi)/ln 2 form undercuts the floor at ell {:?}",
        printed_fails
    ))
}

/// Counts primitive necklaces of each weight by testing every word for a
/// proper period.
fn brute_necklaces(n: u32) -> Vec<u64> {
    let mask = (1u64 << n) - 1;
    let rot = |v: u64, s: u32| ((v << s) | (v >> (n - s))) & mask;
    let mut words = vec![0u64; n as usize + 1];
    for v in 0..=mask {
        if (1..n).filter(|s| n.is_multiple_of(*s)).all(|s| rot(v, s) != v) {
            words[v.count_ones() as usize] += 1;
        }
    }
    words.into_iter().map(|c| c / u64::from(n)).collect()
}

fn necklaces() -> Outcome {
    let start = Instant::now();
    for n in 1..=16u32 {
        for (w, expected) in brute_necklaces(n).into_iter().enumerate() {
            let got = primitive_necklaces(u64::from(n), w as u64);
            ensure(got == expected.into(), || format!("n={n} w={w}: {got} vs {expected}"))?;
        }
    }
    within("necklaces", start.elapsed(), Duration::from_secs(10))?;
    Ok("matches rotation-class enumeration for n <= 16, all w".into())
}

fn cyclic_closure() -> Outcome {
    let start = Instant::now();
    let code = Code::<u64>::resolve(Construction::C, 8, None, None).map_err(|e| e.to_string())?;
    let k = code.k() as usize;
    let lead = code.params().block_lengths()[0] as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..1000 {
        let x: Vec<bool> = (0..k).map(|_| rng.gen()).collect();
        let c = code.encode(&x).map_err(|e| e.to_string())?;
        let mut seen = HashSet::new();
        for s in 0..256 {
            let rc = c.rotate_left(s);
            let y = code
                .decode(&rc, DecodeMode::Strict)
                .map_err(|e| format!("rotation {s} of {c}: {e}"))?;
            ensure(y.as_slice()[lead..] == x[lead..], || {
                format!("rotation {s} of {c} changed the tail")
            })?;
            seen.insert(rc);
        }
        ensure(seen.len() == 256, || {
            format!("{c} has only {} distinct rotations", seen.len())
        })?;
    }
    within("closure", start.elapsed(), Duration::from_secs(10))?;
    Ok("1000 codewords x 256 rotations decode, distinct, tails unchanged".into())
}

fn c2_optimal() -> Outcome {
    for ell in 3..=16 {
        let p = params(Construction::Ct, ell, Some(2));
        let ub = floor_log2_binom(1 << ell, 2).map_err(|e| e.to_string())?;
        ensure(p.k == u64::from(2 * ell - 2) && p.k == ub, || {
            format!("ell={ell}: k={} floor={ub}", p.k)
        })?;
    }
    Ok("k = 2ell-2 = floor(log2 C(2^ell, 2)) for ell 3..16".into())
}

fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    (sxy / sxx, sxy * sxy / (sxx * syy))
}

fn complexity() -> Outcome {
    const N: usize = 100_000;
    const ROUNDS: usize = 11;
    let ells = [10u32, 14, 18, 20];
    let mut setups = Vec::new();
    for &ell in &ells {
        let code = Code::<u64>::resolve(Construction::C, ell, None, None).map_err(|e| e.to_string())?;
        let k = code.k() as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(u64::from(ell));
        let msgs: Vec<Vec<bool>> = (0..N).map(|_| (0..k).map(|_| rng.gen()).collect()).collect();
        setups.push((code, msgs));
    }
    // Rounds visit every ell in turn and each keeps its best time, so a slow
    // stretch of the machine does not land on one ell only.
    let mut best = vec![Duration::MAX; ells.len()];
    for _ in 0..ROUNDS {
        for ((code, msgs), b) in setups.iter().zip(&mut best) {
            let start = Instant::now();
            for x in msgs {
                std::hint::black_box(code.encode(x).expect("encodes"));
            }
            *b = (*b).min(start.elapsed());
        }
    }
    let ks: Vec<f64> = setups.iter().map(|(c, _)| c.k() as f64).collect();
    let times: Vec<f64> = best.iter().map(Duration::as_secs_f64).collect();
    let mut worst_ops = 0.0f64;
    for (&ell, (code, msgs)) in ells.iter().zip(&setups) {
        for x in msgs.iter().step_by(100) {
            let c = code.encode(x).map_err(|e| e.to_string())?;
            let (_, a) = decode_traced(&c, code.sequence(), DecodeMode::Strict).map_err(|e| e.to_string())?;
            let ops = (a.inspections + ell as usize) as f64;
            worst_ops = worst_ops.max(ops / f64::from(ell * ell));
        }
    }
    let (slope, r2) = linear_fit(&ks, &times);
    let per_bit: Vec<f64> = ks.iter().zip(&times).map(|(k, t)| t / k).collect();
    let growth = per_bit[3] / per_bit[0];
    ensure(slope > 0.0, || format!("slope {slope}"))?;
    ensure(r2 >= 0.8, || format!("R^2 {r2:.3}, times {times:?}"))?;
    ensure(growth <= 4.0, || {
        format!("per-bit cost grew {growth:.2}x from ell=10 to 20")
    })?;
    ensure(worst_ops <= 4.0, || {
        format!("decode anchor ops reached {worst_ops:.2} ell^2")
    })?;
    Ok(format!(
        "encode 1e5 msgs: {} ms at k={:?}; R^2={r2:.3}, per-bit growth {growth:.2}x; anchor ops <= {worst_ops:.2} ell^2",
        times.iter().map(|t| format!("{:.0}", t * 1e3)).collect::<Vec<_>>().join("/"),
        ks
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("1 warm-up golden (ell=4)", fig1),
        ("2 second-decoder golden (ell=7, r=2)", fig2),
        ("3 sequence table ell=3..10", table1),
        ("4 exhaustive C[ell], ell=3..5", thm1),
        ("5 exhaustive/sampled C_hat[ell]", thm3),
        ("6 derived codes Ct/Dt/Bt", derived_codes),
        ("7 optimality search", optimality),
        ("8 bound suite ell=3..20", bounds),
        ("9 primitive necklaces n<=16", necklaces),
        ("10 cyclic closure C[8]", cyclic_closure),
        ("11 weight-2 optimality ell=3..16", c2_optimal),
        ("12 complexity trend", complexity),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {name} ({secs:.2} s): {detail}"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {name} ({secs:.2} s): {why}");
            }
        }
    }
    println!("acceptance: {}/12 passed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
