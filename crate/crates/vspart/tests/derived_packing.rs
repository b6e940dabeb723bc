//! Whatever section column the polytope enumerates, the derived child
//! must satisfy the packing condition again.  Types are drawn by a
//! fixed-seed generator so a failure replays exactly.

use vspart::derive::derived_type;
use vspart::hyperplane::enumerate_hyperplane_types;
use vspart::partition::{check_first_packing, PartitionType};

struct Lcg(u64);

impl Lcg {
    fn next(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0 >> 33
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

fn random_type(rng: &mut Lcg) -> PartitionType {
    let (q, n): (u64, u32) = if rng.below(2) == 0 {
        (2, 4 + rng.below(5) as u32)
    } else {
        (3, 3 + rng.below(4) as u32)
    };
    let mut m = vec![0u64; n as usize - 1];
    let mut rest = q.pow(n) - 1;
    for d in (2..n).rev() {
        let piece = q.pow(d) - 1;
        let cap = rest / piece;
        if cap == 0 {
            continue;
        }
        let take = rng.below(cap + 1);
        m[d as usize - 1] = take;
        rest -= take * piece;
    }
    m[0] = rest / (q - 1);
    while m.last() == Some(&0) {
        m.pop();
    }
    let ty = PartitionType::new(n, q, m).unwrap();
    assert!(check_first_packing(&ty));
    ty
}

#[test]
fn derived_types_inherit_the_packing_condition() {
    let mut rng = Lcg(0x5eed);
    let mut sections = 0u64;
    for _ in 0..50 {
        let ty = random_type(&mut rng);
        let set = enumerate_hyperplane_types(&ty).unwrap();
        for b in set.entries() {
            let child = derived_type(&ty, b).unwrap();
            assert!(
                check_first_packing(&child),
                "section {:?} of {ty} derives non-packing {child}",
                b.counts()
            );
            assert_eq!(child.n(), ty.n() - 1);
            sections += 1;
        }
    }
    assert!(sections > 100, "generator produced too few section columns");
}
