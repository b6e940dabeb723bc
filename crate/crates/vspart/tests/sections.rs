//! Hyperplane sections of explicit partitions must land exactly where the
//! constraint machinery says they do: the census is a point of the
//! polytope, and the partition induced on each hyperplane has the derived
//! type of its census column.

use vspart::construct::{double_switch, field_spread, refine};
use vspart::derive::derived_type;
use vspart::gfq::{dot, projective_reps, Subspace};
use vspart::hyperplane::{build_polytope, hyperplane_census, HyperplaneType};
use vspart::partition::ExplicitPartition;

fn sample_partitions() -> Vec<ExplicitPartition> {
    let spread22 = field_spread(2, 2, 2).unwrap();
    let refined = refine(&spread22, 0, 1).unwrap();
    let twice = refine(&refined, 0, 1).unwrap();
    vec![
        spread22,
        refined,
        twice,
        field_spread(3, 2, 2).unwrap(),
        field_spread(2, 3, 1).unwrap(),
    ]
}

#[test]
fn census_is_a_point_of_the_polytope() {
    for p in sample_partitions() {
        let ty = p.observed_type().unwrap();
        let census = hyperplane_census(&p).unwrap();
        let sys = build_polytope(&ty, 2).unwrap();
        let point = sys.census_to_point(&census).unwrap();
        assert!(
            sys.check_census(&point),
            "census of {ty} violates its own polytope"
        );
    }
}

#[test]
fn double_switch_census_is_a_point_of_the_polytope() {
    let p = double_switch(2).unwrap();
    let ty = p.observed_type().unwrap();
    let census = hyperplane_census(&p).unwrap();
    let sys = build_polytope(&ty, 2).unwrap();
    let point = sys.census_to_point(&census).unwrap();
    assert!(sys.check_census(&point));
    for b in census.keys() {
        derived_type(&ty, &HyperplaneType::new(b.clone())).unwrap();
    }
}

#[test]
fn each_section_realizes_its_derived_type() {
    for p in sample_partitions() {
        let ty = p.observed_type().unwrap();
        let f = p.field().clone();
        let n = p.n();
        for normal in projective_reps(&f, n) {
            let inside: Vec<_> = Subspace::full(&f, n)
                .vectors(&f)
                .into_iter()
                .filter(|v| dot(&f, v, &normal).0 == 0)
                .collect();
            let hyperplane = Subspace::from_generators(&f, n, &inside);
            assert_eq!(hyperplane.dim(), n - 1);

            let mut b = vec![0u64; ty.max_dim() as usize];
            let mut induced_counts = vec![0u64; ty.max_dim() as usize];
            let mut covered = 0usize;
            for member in p.members() {
                if hyperplane.contains_subspace(&f, member) {
                    b[member.dim() - 1] += 1;
                }
                let cut = member.intersect(&f, &hyperplane);
                assert!(cut.dim() + 1 >= member.dim());
                if cut.dim() > 0 {
                    induced_counts[cut.dim() - 1] += 1;
                    covered += cut.nonzero_vectors(&f).len();
                }
            }
            let child = derived_type(&ty, &HyperplaneType::new(b)).unwrap();
            let mut expect = vec![0u64; child.max_dim() as usize];
            for d in 1..=child.max_dim() {
                expect[d as usize - 1] = child.count(d);
            }
            induced_counts.truncate(expect.len());
            assert_eq!(induced_counts, expect, "section of {ty} is not {child}");
            assert_eq!(covered, hyperplane.nonzero_vectors(&f).len());
        }
    }
}
