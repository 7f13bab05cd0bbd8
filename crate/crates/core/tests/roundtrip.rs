use gapcode::oracle::{coverage_census, rank_lex, unrank_lex, verify_sampled};
use gapcode::{BitString, Code, CodeParams, Codeword, Construction, DecodeMode};
use num_bigint::BigUint;
use proptest::prelude::*;

fn any_params() -> impl Strategy<Value = CodeParams> {
    (3u32..=24).prop_flat_map(|ell| {
        prop_oneof![
            Just(CodeParams::resolve(Construction::C, ell, None, None).unwrap()),
            Just(CodeParams::resolve(Construction::Chat, ell, None, None).unwrap()),
            (1..ell).prop_map(move |t| CodeParams::resolve(Construction::Dt, ell, Some(t), None).unwrap()),
            (2u32..=ell.min(6)).prop_map(move |t| CodeParams::resolve(Construction::Ct, ell, Some(t), None).unwrap()),
            // B_t needs 1 <= t < f_ell(1), which first has room at ell = 5
            (1..gapcode::sequences::f_ell(ell.max(5)).unwrap().at(1)).prop_map(move |t| CodeParams::resolve(
                Construction::Bt,
                ell.max(5),
                Some(t),
                None
            )
            .unwrap()),
        ]
    })
}

fn params_and_message() -> impl Strategy<Value = (CodeParams, Vec<bool>)> {
    any_params().prop_flat_map(|p| {
        let k = p.k as usize;
        (Just(p), proptest::collection::vec(any::<bool>(), k))
    })
}

proptest! {
    #[test]
    fn every_construction_round_trips((p, x) in params_and_message()) {
        let code = Code::<u64>::new(p.clone()).unwrap();
        let c = code.encode(&x).unwrap();
        prop_assert_eq!(c.n(), p.n);
        prop_assert_eq!(c.weight(), p.w);
        prop_assert_eq!(code.decode(&c, DecodeMode::Strict).unwrap().into_vec(), x);
    }

    #[test]
    fn text_formats_round_trip((p, x) in params_and_message()) {
        let c = Code::<u64>::new(p).unwrap().encode(&x).unwrap();
        prop_assert_eq!(c.to_string().parse::<Codeword<u64>>().unwrap(), c.clone());
        prop_assert_eq!(Codeword::<u64>::parse_bits(&c.to_bits_string()).unwrap(), c);
        let b = BitString::new(x);
        prop_assert_eq!(b.to_string().parse::<BitString>().unwrap(), b);
    }

    #[test]
    fn narrow_words_agree_with_u64(x in proptest::collection::vec(any::<bool>(), 42)) {
        let wide = Code::<u64>::resolve(Construction::C, 8, None, None).unwrap().encode(&x).unwrap();
        let narrow = Code::<u16>::resolve(Construction::C, 8, None, None).unwrap().encode(&x).unwrap();
        let back: Vec<u64> = narrow.ones().iter().map(|&p| u64::from(p)).collect();
        prop_assert_eq!(wide.ones(), back.as_slice());
    }

    #[test]
    fn ranking_inverts_unranking(r in 0u64..14_950) {
        // C(26, 4) words of length 26 and weight 4
        let c = unrank_lex::<u64>(&BigUint::from(r), 26, 4).unwrap();
        prop_assert_eq!(c.weight(), 4);
        prop_assert_eq!(rank_lex(&c, 4).unwrap(), BigUint::from(r));
    }
}

#[test]
fn batch_matches_single() {
    let code = Code::<u64>::resolve(Construction::Bt, 9, Some(3), None).unwrap();
    let k = code.k() as usize;
    let xs: Vec<BitString> = (0..300u64)
        .map(|i| BitString::from_u64(i * 0x9e37_79b9 % (1 << 40), k))
        .collect();
    let cs: Vec<_> = code.encode_batch(&xs).into_iter().map(Result::unwrap).collect();
    for (x, c) in xs.iter().zip(&cs) {
        assert_eq!(&code.encode(x.as_slice()).unwrap(), c);
    }
    let back: Vec<_> = code
        .decode_batch(&cs, DecodeMode::Strict)
        .into_iter()
        .map(Result::unwrap)
        .collect();
    assert_eq!(back, xs);
}

#[test]
fn sampled_runs_are_reproducible() {
    let p = CodeParams::resolve(Construction::Chat, 12, None, None).unwrap();
    let a = verify_sampled(&p, 20_000, 42, DecodeMode::Strict).unwrap();
    let b = verify_sampled(&p, 20_000, 42, DecodeMode::Strict).unwrap();
    assert!(a.passed());
    assert_eq!(a, b);
}

#[test]
fn census_finds_exactly_the_codebook_at_ell_3() {
    let p = CodeParams::resolve(Construction::C, 3, None, None).unwrap();
    let census = coverage_census(&p, 10).unwrap();
    assert_eq!(census.words, 56);
    assert_eq!(census.in_image, census.expected_image());
}
