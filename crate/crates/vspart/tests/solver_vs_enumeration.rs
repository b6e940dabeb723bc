//! The branch-and-bound verdict must agree with exhaustive enumeration over
//! the integer box on a spread of small random systems.  The generator is a
//! fixed-seed LCG so failures replay exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use vspart::intfeas::{integer_point, RationalLP, Relation, Verdict};

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

fn q(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

struct SmallSystem {
    nvars: usize,
    bounds: Vec<i64>,
    rows: Vec<(Vec<i64>, Relation, i64)>,
}

impl SmallSystem {
    fn random(rng: &mut Lcg) -> SmallSystem {
        let nvars = 1 + rng.below(6) as usize;
        let bound_cap = if nvars <= 3 { 51 } else { 7 };
        let bounds: Vec<i64> = (0..nvars).map(|_| rng.below(bound_cap) as i64).collect();
        let nrows = 1 + rng.below(3) as usize;
        let mut rows = Vec::with_capacity(nrows);
        for _ in 0..nrows {
            let coeffs: Vec<i64> = (0..nvars).map(|_| rng.below(9) as i64 - 4).collect();
            let relation = match rng.below(3) {
                0 => Relation::Eq,
                1 => Relation::Le,
                _ => Relation::Ge,
            };
            let rhs = if rng.below(2) == 0 {
                // Anchor the row at a point of the box so feasible systems
                // appear often enough to exercise the witness path.
                let z: Vec<i64> = bounds.iter().map(|&b| rng.below(b as u64 + 1) as i64).collect();
                coeffs.iter().zip(&z).map(|(c, v)| c * v).sum()
            } else {
                rng.below(41) as i64 - 20
            };
            rows.push((coeffs, relation, rhs));
        }
        SmallSystem { nvars, bounds, rows }
    }

    fn to_lp(&self) -> RationalLP {
        let mut lp = RationalLP::new(self.nvars);
        for (coeffs, rel, rhs) in &self.rows {
            lp.push_row(coeffs.iter().map(|&c| q(c)).collect(), *rel, q(*rhs));
        }
        for (j, &b) in self.bounds.iter().enumerate() {
            lp.set_upper(j, q(b));
        }
        lp
    }

    fn point_ok(&self, x: &[i64]) -> bool {
        self.rows.iter().all(|(coeffs, rel, rhs)| {
            let lhs: i64 = coeffs.iter().zip(x).map(|(c, v)| c * v).sum();
            match rel {
                Relation::Eq => lhs == *rhs,
                Relation::Le => lhs <= *rhs,
                Relation::Ge => lhs >= *rhs,
            }
        })
    }

    fn brute_force_feasible(&self) -> bool {
        let mut x = vec![0i64; self.nvars];
        loop {
            if self.point_ok(&x) {
                return true;
            }
            let mut j = 0;
            loop {
                if j == self.nvars {
                    return false;
                }
                if x[j] < self.bounds[j] {
                    x[j] += 1;
                    break;
                }
                x[j] = 0;
                j += 1;
            }
        }
    }
}

#[test]
fn verdicts_match_brute_force_on_200_systems() {
    let mut rng = Lcg(0x5eed_cafe_f00d_0001);
    for case in 0..200 {
        let sys = SmallSystem::random(&mut rng);
        let expected = sys.brute_force_feasible();
        let result = integer_point(&sys.to_lp()).unwrap();
        match result.verdict {
            Verdict::Feasible(w) => {
                assert!(expected, "case {case}: solver found a point in an empty system");
                let x: Vec<i64> = w.iter().map(|v| i64::try_from(v).unwrap()).collect();
                assert!(sys.point_ok(&x), "case {case}: witness fails the rows");
                for (j, &v) in x.iter().enumerate() {
                    assert!(0 <= v && v <= sys.bounds[j], "case {case}: witness out of box");
                }
            }
            Verdict::Infeasible => {
                assert!(!expected, "case {case}: solver missed a feasible point");
            }
            Verdict::Unknown => panic!("case {case}: budget exhausted on a toy system"),
        }
    }
}

#[test]
fn repeat_runs_are_identical() {
    let mut rng = Lcg(0x0dd_ba11);
    for _ in 0..20 {
        let sys = SmallSystem::random(&mut rng);
        let lp = sys.to_lp();
        assert_eq!(integer_point(&lp).unwrap(), integer_point(&lp).unwrap());
    }
}
