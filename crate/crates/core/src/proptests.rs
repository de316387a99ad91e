//! Randomised invariants across the kernels.

use proptest::prelude::*;

use crate::geometry::{covering_radius_bracket, separation_radius, separation_radius_bruteforce};
use crate::pointgen::{digital_shift, from_digits, generate_points, to_digits};
use crate::poly::cf_expand;
use crate::separation::{criterion_check, is_c_separated_bruteforce, CriterionOutcome};
use crate::{Execution, FieldMatrix, NetPoints, NetSpec, Norm, PolyFb, ShiftVector};

const SEQ: Execution = Execution::Sequential;

fn net(b: u32, m: usize, d: usize, entries: &[u32]) -> NetSpec {
    let mats = (0..d)
        .map(|j| FieldMatrix::from_fn(b as u64, m, m, |r, c| entries[(j * m + r) * m + c] as u64 % b as u64).unwrap())
        .collect();
    NetSpec::custom(mats, "prop").unwrap()
}

fn shift_of(b: u32, m: usize, raw: &[u64]) -> ShiftVector {
    let scale = (b as u64).pow(m as u32);
    let values: Vec<u64> = raw.iter().map(|v| v % scale).collect();
    ShiftVector::from_values(b as u64, m, &values).unwrap()
}

fn negate(shift: &ShiftVector, b: u32, m: usize) -> ShiftVector {
    let values: Vec<u64> = shift
        .values()
        .iter()
        .map(|&v| from_digits(&to_digits(v, b, m).iter().map(|&x| (b - x) % b).collect::<Vec<_>>(), b))
        .collect();
    ShiftVector::from_values(b as u64, m, &values).unwrap()
}

fn case() -> impl Strategy<Value = (u32, usize, Vec<u32>, Vec<u64>)> {
    (prop_oneof![Just(2u32), Just(3)], 2usize..=5).prop_flat_map(|(b, m)| {
        (
            Just(b),
            Just(m),
            prop::collection::vec(0u32..b, 2 * m * m),
            prop::collection::vec(any::<u64>(), 2),
        )
    })
}

fn points_of(b: u32, m: usize, entries: &[u32], raw_shift: &[u64]) -> (NetSpec, ShiftVector, NetPoints) {
    let spec = net(b, m, 2, entries);
    let shift = shift_of(b, m, raw_shift);
    let pts = digital_shift(&generate_points(&spec, None, SEQ).unwrap(), &shift).unwrap();
    (spec, shift, pts)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shift_round_trip((b, m, entries, raw) in case()) {
        let (spec, shift, pts) = points_of(b, m, &entries, &raw);
        let base = generate_points(&spec, None, SEQ).unwrap();
        let back = digital_shift(&pts, &negate(&shift, b, m)).unwrap();
        prop_assert_eq!(back.coords(), base.coords());
    }

    #[test]
    fn sweep_matches_all_pairs((b, m, entries, raw) in case(), toroidal in any::<bool>()) {
        let (_, _, pts) = points_of(b, m, &entries, &raw);
        for norm in [Norm::Inf, Norm::L1, Norm::L2] {
            let fast = separation_radius(&pts, norm, toroidal, SEQ).unwrap();
            let slow = separation_radius_bruteforce(&pts, norm, toroidal, SEQ).unwrap();
            prop_assert_eq!(fast.q, slow.q);
        }
    }

    #[test]
    fn criterion_agrees_with_pairs((b, m, entries, raw) in case(), c0 in 0u32..6, c1 in 0u32..6, toroidal in any::<bool>()) {
        let (spec, shift, pts) = points_of(b, m, &entries, &raw);
        let c = [c0.min(m as u32), c1.min(m as u32)];
        let brute = is_c_separated_bruteforce(&pts, &c, toroidal, SEQ).unwrap();
        match criterion_check(&spec, &shift, &c, toroidal, SEQ).unwrap() {
            CriterionOutcome::Separated => prop_assert!(brute.is_none()),
            CriterionOutcome::Violated(v) => {
                prop_assert!(brute.is_some());
                prop_assert!(v.interval.contains(b, m, pts.point(v.pair.0)).unwrap());
                prop_assert!(v.interval.contains(b, m, pts.point(v.pair.1)).unwrap());
            }
            CriterionOutcome::Inapplicable(_) => {}
        }
    }

    #[test]
    fn covering_bracket_is_ordered((b, m, entries, raw) in case(), toroidal in any::<bool>()) {
        let (_, _, pts) = points_of(b, m, &entries, &raw);
        let r = (m as u32).min(4);
        let br = covering_radius_bracket(&pts, Norm::Inf, toroidal, r, SEQ).unwrap();
        prop_assert!(br.h_lower <= br.h_upper);
        let coarse = covering_radius_bracket(&pts, Norm::Inf, toroidal, r.saturating_sub(1).max(1), SEQ).unwrap();
        prop_assert!(coarse.h_lower <= br.h_upper && br.h_lower <= coarse.h_upper);
    }

    #[test]
    fn poly_division_identity(b in prop_oneof![Just(2u64), Just(3), Just(5)],
                              num in prop::collection::vec(0u64..5, 1..12),
                              den in prop::collection::vec(0u64..5, 1..8)) {
        let n = PolyFb::new(b, &num).unwrap();
        let d = PolyFb::new(b, &den).unwrap();
        prop_assume!(!d.is_zero());
        let (q, r) = n.divmod(&d).unwrap();
        prop_assert_eq!(q.mul(&d).unwrap().add(&r).unwrap(), n.clone());
        prop_assert!(r.is_zero() || r.degree() < d.degree());
        if !n.is_zero() && n.gcd(&d).unwrap().degree() == Some(0) {
            let cf = cf_expand(&n, &d).unwrap();
            let (rn, rd) = cf.reconstruct().unwrap();
            // equal as fractions: rn * d == n * rd
            prop_assert_eq!(rn.mul(&d).unwrap(), n.mul(&rd).unwrap());
        }
    }

    #[test]
    fn solve_affine_consistent(b in prop_oneof![Just(2u32), Just(3), Just(7)],
                               entries in prop::collection::vec(0u32..7, 20),
                               x in prop::collection::vec(0u32..7, 5)) {
        let a = FieldMatrix::from_fn(b as u64, 4, 5, |r, c| (entries[r * 5 + c] % b) as u64).unwrap();
        let x: Vec<u32> = x.iter().map(|v| v % b).collect();
        let rhs = a.mul_vec(&x);
        let sol = a.solve_affine(&rhs).unwrap();
        prop_assert!(sol.is_consistent());
        prop_assert_eq!(a.mul_vec(sol.representative().unwrap()), rhs);
        prop_assert_eq!(sol.nullity() + a.rank(), 5);
    }
}
