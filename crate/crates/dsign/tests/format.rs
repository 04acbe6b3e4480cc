use dsign::format::{parse_instance, parse_instances, FormatError, InstanceRecord, Metadata};
use dsign_core::gen::{gen_random_indexed, share_vertex_k4, InstanceRng};
use dsign_core::graph::edge_count;
use dsign_core::{SignedCompleteGraph, F22};
use proptest::collection::vec;
use proptest::prelude::*;

fn record() -> impl Strategy<Value = InstanceRecord> {
    (1usize..=12)
        .prop_flat_map(|n| {
            (
                vec((0u8..4).prop_map(F22::from_bits), edge_count(n)),
                proptest::option::of("[a-z_][a-z0-9_()]{0,12}"),
                proptest::option::of(any::<u64>()),
            )
                .prop_map(move |(signs, name, seed)| {
                    let g = SignedCompleteGraph::from_edge_signs(n, signs).unwrap();
                    InstanceRecord::from_graph(&g, Metadata { name, seed, generator: None })
                })
        })
}

proptest! {
    #[test]
    fn text_and_json_round_trip(rec in record()) {
        prop_assert_eq!(parse_instance(&rec.to_text()).unwrap().record(), rec.clone());
        prop_assert_eq!(parse_instance(&rec.to_json()).unwrap().record(), rec);
    }
}

#[test]
fn ten_thousand_seeded_records_round_trip() {
    let mut rng = InstanceRng::new(17);
    for i in 0..10_000u64 {
        let n = 3 + rng.below(8);
        let g = gen_random_indexed(n, 5, i);
        let rec = InstanceRecord::from_graph(&g, Metadata { seed: Some(5), ..Metadata::default() });
        let back = parse_instance(&rec.to_text()).unwrap();
        assert_eq!(back.graph, g);
        assert_eq!(back.record(), rec);
        assert_eq!(parse_instance(&rec.to_json()).unwrap().record(), rec);
    }
}

#[test]
fn edge_order_and_orientation_are_free() {
    let text = "n=4\n4 3 a\n2 4 a\n3 2 e\n1 4 a\n3 1 c\n2 1 b\n";
    assert_eq!(parse_instance(text).unwrap().graph, share_vertex_k4());
}

#[test]
fn malformed_inputs_are_located() {
    let good = InstanceRecord::from_graph(&share_vertex_k4(), Metadata::default()).to_text();
    let missing: String = good.lines().filter(|l| *l != "2 3 e").map(|l| format!("{l}\n")).collect();
    let err = parse_instance(&missing).unwrap_err();
    assert_eq!(err, FormatError::MissingEdge { line: 1, u: 2, v: 3 });
    assert!(err.to_string().contains("missing edge 2 3"));

    let bad_sign = good.replace("2 3 e", "2 3 d");
    let err = parse_instance(&bad_sign).unwrap_err();
    assert_eq!(err, FormatError::BadSign { line: 5, token: "d".into() });
    assert!(err.to_string().starts_with("line 5"));

    assert!(matches!(parse_instance("n=four\n"), Err(FormatError::BadHeader { line: 1, .. })));
    assert!(matches!(parse_instance("# seed=x\nn=3\n"), Err(FormatError::BadMetadata { line: 1, .. })));
    assert!(matches!(parse_instance("{\"n\": 3, \"edges\": [}"), Err(FormatError::Json { .. })));
    let json_missing = "{\"n\":3,\"edges\":[{\"u\":1,\"v\":2,\"sign\":\"a\"}]}";
    assert!(matches!(parse_instance(json_missing), Err(FormatError::MissingEdge { u: 1, v: 3, .. })));
}

#[test]
fn exhaustive_stream_file_parses_back() {
    let text: String = dsign_core::gen::gen_exhaustive_normalized(4)
        .unwrap()
        .map(|g| InstanceRecord::from_graph(&g, Metadata::default()).to_text())
        .collect();
    let parsed = parse_instances(&text).unwrap();
    assert_eq!(parsed.len(), 64);
    assert_eq!(parsed[0].graph, SignedCompleteGraph::identity(4));
}
