//! Serialization round trips under arbitrary inputs.

use proptest::prelude::*;
use vspart::intfeas::Relation;
use vspart::jsonio::{type_from_json, type_to_json, TypeFile};
use vspart::partition::PartitionType;

fn arb_type() -> impl Strategy<Value = PartitionType> {
    (prop_oneof![Just(2u64), Just(3), Just(4), Just(5)], 1u32..7)
        .prop_flat_map(|(q, n)| {
            let counts = prop::collection::vec(0u64..40, n as usize);
            (Just(q), Just(n), counts)
        })
        .prop_filter_map("trailing zeros or empty", |(q, n, mut m)| {
            while m.last() == Some(&0) {
                m.pop();
            }
            if m.is_empty() {
                return None;
            }
            PartitionType::new(n, q, m).ok()
        })
}

proptest! {
    #[test]
    fn type_json_round_trips(ty in arb_type()) {
        let text = type_to_json(&ty).unwrap();
        let back = type_from_json(&text).unwrap();
        prop_assert_eq!(&back, &ty);
        let file = TypeFile::from_type(&ty);
        prop_assert_eq!(file.to_type().unwrap(), ty);
    }

    #[test]
    fn display_and_descending_agree(ty in arb_type()) {
        let shown = ty.to_string();
        let inner = shown.trim_start_matches('(').trim_end_matches(')');
        let desc: Vec<u64> = inner.split(',').map(|s| s.parse().unwrap()).collect();
        let back = PartitionType::from_descending(ty.n(), ty.q(), &desc).unwrap();
        prop_assert_eq!(back, ty);
    }

    #[test]
    fn relation_symbols_round_trip(which in 0u8..3) {
        let r = match which {
            0 => Relation::Eq,
            1 => Relation::Le,
            _ => Relation::Ge,
        };
        prop_assert_eq!(Relation::parse(r.as_str()).unwrap(), r);
    }
}
