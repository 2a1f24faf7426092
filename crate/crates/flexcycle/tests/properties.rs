//! Property tests for the algebraic kernel and the scanners.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use proptest::prelude::*;

use flexcycle::exact::factor::factor;
use flexcycle::exact::{
    radical_from_square, radical_signed_sum, squarefree_decompose, Radical, Rat, Scalar,
};
use flexcycle::mobius::{ExtendedDistance, PointClass, ProjectivePoint};
use flexcycle::polyhedron::{octahedron, Edge, Realization};
use flexcycle::zero_sum::{edge_obstruction_report, zero_sum_assignment};
use flexcycle::SpineEdge;

fn rat_strategy() -> impl Strategy<Value = Rat> {
    (-60i64..=60, 1i64..=30).prop_map(|(n, d)| Rat::new(n.into(), d.into()))
}

fn pos_rat_strategy() -> impl Strategy<Value = Rat> {
    (1i64..=5000, 1i64..=500).prop_map(|(n, d)| Rat::new(n.into(), d.into()))
}

fn scalar_strategy() -> impl Strategy<Value = Scalar> {
    (rat_strategy(), rat_strategy()).prop_map(|(re, im)| Scalar::new(re, im))
}

fn point_strategy() -> impl Strategy<Value = [Rat; 3]> {
    [rat_strategy(), rat_strategy(), rat_strategy()]
}

fn radical_strategy() -> impl Strategy<Value = Radical> {
    prop::collection::vec((rat_strategy(), prop_oneof![Just(1u32), Just(2), Just(3), Just(5), Just(7)]), 0..3)
        .prop_map(|terms| {
            terms
                .into_iter()
                .fold(Radical::zero(), |acc, (c, s)| acc + Radical::term(c, s.into()))
        })
}

fn is_squarefree(n: &BigUint) -> bool {
    factor(n).unwrap().iter().all(|(_, e)| *e == 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn squarefree_decomposition_is_exact(q in pos_rat_strategy()) {
        let (coeff, core) = squarefree_decompose(&q).unwrap();
        prop_assert!(coeff > Rat::zero());
        prop_assert!(is_squarefree(&core));
        let core_rat = Rat::from_integer(num_bigint::BigInt::from(core));
        prop_assert_eq!(&coeff * &coeff * core_rat, q);
    }
}

proptest! {
    #[test]
    fn scalars_form_a_field(a in scalar_strategy(), b in scalar_strategy(), c in scalar_strategy()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, Scalar::zero());
        if !a.is_zero() {
            let inv = a.inv().unwrap();
            prop_assert_eq!(&a * &inv, Scalar::one());
        }
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!(Scalar::from_rat(a.norm()), &a * &a.conj());
    }

    #[test]
    fn radical_arithmetic_matches_float_oracle(a in radical_strategy(), b in radical_strategy()) {
        let (fa, fb) = (a.to_f64(), b.to_f64());
        let scale = 1.0 + fa.abs().max(fb.abs()).powi(2);
        prop_assert!(((&a + &b).to_f64() - (fa + fb)).abs() < 1e-9 * scale);
        prop_assert!(((&a - &b).to_f64() - (fa - fb)).abs() < 1e-9 * scale);
        prop_assert!(((&a * &b).to_f64() - fa * fb).abs() < 1e-9 * scale);
        // exact zero-testing agrees with the floats on non-cancelling input
        if a.is_zero() {
            prop_assert!(fa.abs() < 1e-9);
        }
    }

    #[test]
    fn radical_square_round_trips(q in pos_rat_strategy()) {
        let root = radical_from_square(&q).unwrap();
        prop_assert_eq!(root.square().as_rat(), Some(q));
    }

    #[test]
    fn embedded_distance_is_euclidean(u in point_strategy(), v in point_strategy()) {
        let d = ProjectivePoint::embed(&u).distance(&ProjectivePoint::embed(&v)).unwrap();
        let sq: Rat = u.iter().zip(&v).map(|(a, b)| (a - b) * (a - b)).sum();
        prop_assert_eq!(d, ExtendedDistance::Value(Scalar::from_rat(-sq / Rat::from_integer(2.into()))));
    }

    #[test]
    fn canonicalization_ignores_rescaling(u in point_strategy(), s in scalar_strategy()) {
        prop_assume!(!s.is_zero());
        let p = ProjectivePoint::embed(&u);
        let scaled = ProjectivePoint::new(p.coords().clone().map(|c| &c * &s)).unwrap();
        prop_assert_eq!(scaled, p);
    }
}

/// Random on-quadric points of all classes: embedded finite points,
/// cone directions at infinity, and omega itself.
fn on_quadric_strategy() -> impl Strategy<Value = ProjectivePoint> {
    prop_oneof![
        point_strategy().prop_map(|u| ProjectivePoint::embed(&u)),
        (rat_strategy(), rat_strategy(), rat_strategy()).prop_map(|(u, v, r)| {
            if u.is_zero() && v.is_zero() {
                return ProjectivePoint::omega_infinity();
            }
            ProjectivePoint::new([
                Scalar::new(Rat::zero(), &u * &u + &v * &v),
                Scalar::from_rat(&u * &u - &v * &v),
                Scalar::from_rat(Rat::from_integer(2.into()) * &u * &v),
                Scalar::from_rat(r),
                Scalar::zero(),
            ])
            .unwrap()
        }),
        Just(ProjectivePoint::omega_infinity()),
    ]
}

proptest! {
    #[test]
    fn tangency_trichotomy(p in on_quadric_strategy(), q in on_quadric_strategy()) {
        let form = p.bilinear_form(&q);
        let hh = p.h() * q.h();
        let d = p.distance(&q).unwrap();
        // tangency is symmetric: <p,q> = 0 says q lies on the tangent
        // hyperplane at p and vice versa
        prop_assert_eq!(&form, &q.bilinear_form(&p));
        match d {
            ExtendedDistance::Undefined => {
                prop_assert!(form.is_zero() && hh.is_zero());
            }
            ExtendedDistance::Infinity => {
                prop_assert!(!form.is_zero() && hh.is_zero());
            }
            ExtendedDistance::Value(v) => {
                prop_assert!(!hh.is_zero());
                prop_assert_eq!(v * hh, form);
            }
        }
    }

    #[test]
    fn restriction_lemma(u in 1i64..40, v in -40i64..40, r in rat_strategy(),
                         f1 in rat_strategy(), f2 in rat_strategy(),
                         g1 in rat_strategy(), g2 in rat_strategy()) {
        let (u, v) = (Rat::from_integer(u.into()), Rat::from_integer(v.into()));
        let p = ProjectivePoint::new([
            Scalar::new(Rat::zero(), &u * &u + &v * &v),
            Scalar::from_rat(&u * &u - &v * &v),
            Scalar::from_rat(Rat::from_integer(2.into()) * &u * &v),
            Scalar::from_rat(r),
            Scalar::zero(),
        ]).unwrap();
        prop_assert_eq!(p.classify(), PointClass::SimpleInfinite);
        let q1 = p.sample_fin_point([Scalar::from_rat(f1), Scalar::from_rat(f2)], 0).unwrap();
        let q2 = p.sample_fin_point([Scalar::from_rat(g1), Scalar::from_rat(g2)], 0).unwrap();
        prop_assert!(p.fin_contains(&q1).unwrap() && p.fin_contains(&q2).unwrap());
        let s1 = p.sigma_project(&q1).unwrap();
        let s2 = p.sigma_project(&q2).unwrap();
        let expected = (&s1 - &s2).square() * Scalar::new(Rat::new(1.into(), 2.into()), Rat::zero());
        prop_assert_eq!(q1.distance(&q2).unwrap(), ExtendedDistance::Value(expected));
    }
}

fn lengths_strategy() -> impl Strategy<Value = Vec<Radical>> {
    prop::collection::vec(
        (1i64..=6, 1i64..=3, prop_oneof![Just(1u32), Just(2), Just(3)]),
        2..=8,
    )
    .prop_map(|entries| {
        entries
            .into_iter()
            .map(|(n, d, core)| Radical::term(Rat::new(n.into(), d.into()), core.into()))
            .collect()
    })
}

proptest! {
    #[test]
    fn zero_sum_agrees_with_brute_force(lengths in lengths_strategy()) {
        let k = lengths.len();
        let mut oracle = None;
        'masks: for mask in 0u32..(1 << (k - 1)) {
            let mut signs = vec![1i8; k];
            for j in 1..k {
                if mask >> (k - 1 - j) & 1 == 1 {
                    signs[j] = -1;
                }
            }
            if radical_signed_sum(&lengths, &signs).is_zero() {
                oracle = Some(signs);
                break 'masks;
            }
        }
        prop_assert_eq!(zero_sum_assignment(&lengths), oracle);
    }

    #[test]
    fn witness_search_is_monotone_in_max_len(coords in prop::collection::vec(rat_strategy(), 18)) {
        let p = octahedron();
        let positions: BTreeMap<_, _> = p
            .vertices()
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, [coords[3 * i].clone(), coords[3 * i + 1].clone(), coords[3 * i + 2].clone()]))
            .collect();
        let rho = Realization { positions };
        let Ok(lambda) = rho.induced_lengths(&p) else {
            // coincident endpoints: nothing to scan
            return Ok(());
        };
        let spine = SpineEdge { w1: 1, w2: 2, s: 5, n: 6 };
        let small = edge_obstruction_report(&p, &lambda, &spine, 4);
        let large = edge_obstruction_report(&p, &lambda, &spine, p.vertices().len());
        if let Some(w) = &small.witness {
            prop_assert_eq!(Some(w), large.witness.as_ref());
        }
        prop_assert!(large.exhausted);
    }
}

#[test]
fn trivial_radical_identities() {
    assert!(Radical::zero().is_zero());
    let sqrt8 = radical_from_square(&Rat::from_integer(8.into())).unwrap();
    let sqrt2 = radical_from_square(&Rat::from_integer(2.into())).unwrap();
    assert_eq!(sqrt8, &sqrt2 * &Radical::from_int(2));
    assert!((sqrt8 - (Radical::from_int(2) * sqrt2)).is_zero());
    assert!(Rat::one() > Rat::zero());
    let witness = zero_sum_assignment(&[Radical::from_int(3)]);
    assert_eq!(witness, None);
    let _ = Edge::new(2, 1);
}
