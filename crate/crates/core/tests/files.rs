mod common;

use rldc_core::codes::{enumerate_ball, Code};
use rldc_core::decoder::{canonicalize, LocalDecoder};
use rldc_core::files::{any_from_json, any_to_json, code_from_json, to_pretty, AnyDecoder};
use rldc_core::fixtures::load_fixture;
use rldc_core::transform::{
    amplify_ldc_majority, amplify_rldc_repeat, derive_ldc_decoder, tq_decoder, TiePolicy, DEFAULT_ENTRY_BUDGET,
};
use rldc_core::Error;
use serde_json::json;

use common::{all_fixtures, canonical_fixtures};

/// Emits, re-parses and re-emits; checks byte stability and equal output laws near every codeword.
fn assert_round_trip(code: &Code, dec: AnyDecoder, label: &str) {
    let text = to_pretty(&any_to_json(code, &dec));
    let back = any_from_json(code, &serde_json::from_str(&text).unwrap(), label).unwrap();
    assert_eq!(to_pretty(&any_to_json(code, &back)), text, "{label}: bytes differ");
    for c in code.codewords() {
        for (y, _) in enumerate_ball(c, 1, code.sigma()).unwrap() {
            for t in dec.targets() {
                assert_eq!(
                    dec.output_distribution(t, &y).unwrap(),
                    back.output_distribution(t, &y).unwrap(),
                    "{label}"
                );
            }
        }
    }
}

#[test]
fn emitted_decoders_reload_with_identical_behaviour() {
    for f in all_fixtures() {
        let (canon, _) = canonicalize(&f.code, &f.decoder).unwrap();
        assert_round_trip(&f.code, AnyDecoder::Relaxed(canon), &format!("{} canonical", f.name));
        let amp = amplify_rldc_repeat(&f.code, &f.decoder, 2, DEFAULT_ENTRY_BUDGET).unwrap();
        assert_round_trip(&f.code, AnyDecoder::Relaxed(amp), &format!("{} repeat", f.name));
    }
    for f in canonical_fixtures() {
        let d = derive_ldc_decoder(&f.code, &f.decoder, &f.bound_delta).unwrap();
        assert_round_trip(&f.code, AnyDecoder::Derived(d), &format!("{} derived", f.name));
        let tq = tq_decoder(&f.code, &f.decoder, &f.bound_delta, 2, TiePolicy::Lex).unwrap();
        assert_round_trip(&f.code, AnyDecoder::Derived(tq), &format!("{} tq", f.name));
    }
    let had4 = load_fixture("had4").unwrap();
    let maj = amplify_ldc_majority(&had4.code, &had4.decoder, 3, TiePolicy::Uniform, DEFAULT_ENTRY_BUDGET).unwrap();
    assert_round_trip(&had4.code, AnyDecoder::Relaxed(maj), "had4 majority");
}

#[test]
fn malformed_files_name_path_and_field() {
    let bad = json!({"sigma": ["0", "1"], "k": 1, "n": 3, "codebook": {"0": "000", "1": "111"}, "extra": 1});
    let err = code_from_json(&bad, "codes/rep3.json").unwrap_err();
    let text = err.to_string();
    assert!(text.contains("codes/rep3.json") && text.contains("extra"), "{text}");

    let f = load_fixture("rep3").unwrap();
    let dec = json!({"q": 2, "target_kind": "message", "rules": {"1": [{"weight": [1, 1], "query": [1, 2], "table": {"00": "0"}}]}});
    let err = any_from_json(&f.code, &dec, "dec.json").unwrap_err();
    match err {
        Error::PartialTable { target, query, view } => assert_eq!((target, query, view.as_str()), (1, vec![1, 2], "01")),
        other => panic!("unexpected {other}"),
    }
}
