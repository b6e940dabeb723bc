//! Agreement between the necessary-condition engine and the known
//! classification for q = 2.  Infeasible verdicts must never hit a
//! realizable type; in V(6,2) the engine is exact, and in V(7,2) the
//! only feasible-but-unrealizable type is the known survivor.

use vspart::derive::{classify, FeasibilityContext, FeasibleOptions, Judgment};
use vspart::partition::PartitionType;

fn survivor() -> PartitionType {
    PartitionType::from_descending(7, 2, &[1, 13, 6, 3]).unwrap()
}

#[test]
fn engine_is_exact_on_v62() {
    let ctx = FeasibilityContext::new(FeasibleOptions::default());
    let records = classify(6, 2, &ctx).unwrap();
    assert!(!records.is_empty());
    for r in &records {
        let published = r.published.expect("classification covers q = 2, n = 6");
        let feasible = r.verdict.judgment == Judgment::Feasible;
        assert_eq!(
            feasible, published,
            "{} judged {:?} against published {published}",
            r.verdict.ty, r.verdict.judgment
        );
    }
}

#[test]
#[ignore = "the full dimension-7 sweep runs for over an hour; invoke with --ignored"]
fn engine_misses_only_the_survivor_on_v72() {
    let ctx = FeasibilityContext::new(FeasibleOptions::default());
    let records = classify(7, 2, &ctx).unwrap();
    let mut gap = Vec::new();
    for r in &records {
        let published = r.published.expect("classification covers q = 2, n = 7");
        let feasible = r.verdict.judgment == Judgment::Feasible;
        if !feasible {
            assert!(!published, "{} excluded but realizable", r.verdict.ty);
        }
        if feasible && !published {
            gap.push(r.verdict.ty.clone());
        }
    }
    assert_eq!(gap, vec![survivor()]);
}
