//! Randomized engine invariants: confluence/associativity of the rewriter,
//! commutator algebra laws, the action oracle, series expansion, and the
//! parser round trip. Seeded, so failures reproduce.

mod common;

use common::{gen_multisite_op, gen_op, gen_poly, gen_scalar};
use proptest::prelude::*;
use qschrod::cli::parse_expr;
use qschrod::opalg::{faithfulness_witness, normalize, Atom, OperatorExpr, Rat};
use qschrod::scalar::Scalar;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn rewriter_is_confluent_across_associations() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..1000 {
        let a = gen_op(&mut rng, 2);
        let b = gen_op(&mut rng, 2);
        let c = gen_op(&mut rng, 2);
        let left = a.mul(&b).mul(&c);
        let right = a.mul(&b.mul(&c));
        assert_eq!(left, right, "case {case}");
    }
}

#[test]
fn normalize_agrees_with_folded_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let atoms = |rng: &mut ChaCha8Rng| -> Vec<(Atom, u8)> {
        (0..rng.gen_range(2..=6))
            .map(|_| {
                let atom = match rng.gen_range(0..7) {
                    0 => Atom::X,
                    1 => Atom::T,
                    2 => Atom::Dx,
                    3 => Atom::Dt,
                    4 => Atom::Sx(Rat::new(rng.gen_range(-2i64..=2), 1)),
                    5 => Atom::St(Rat::new(rng.gen_range(-2i64..=2), 1)),
                    _ => Atom::Coef(gen_scalar(rng)),
                };
                (atom, 0u8)
            })
            .collect()
    };
    for case in 0..500 {
        let seq = atoms(&mut rng);
        let folded = normalize(&seq);
        // Split product: normalize halves separately, then multiply.
        let mid = seq.len() / 2;
        let left = normalize(&seq[..mid]);
        let right = normalize(&seq[mid..]);
        assert_eq!(folded, left.mul(&right), "case {case}");
    }
}

#[test]
fn commutator_laws_and_jacobi() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for case in 0..1000 {
        let a = gen_op(&mut rng, 2);
        let b = gen_op(&mut rng, 2);
        // Antisymmetry.
        assert_eq!(a.commutator(&b), b.commutator(&a).neg(), "antisym case {case}");
        // Bilinearity in the first slot.
        let c = gen_op(&mut rng, 2);
        let s = gen_scalar(&mut rng);
        assert_eq!(
            a.scale(&s).add(&b).commutator(&c),
            a.commutator(&c).scale(&s).add(&b.commutator(&c)),
            "bilinear case {case}"
        );
        // Jacobi identity.
        let jac = a
            .commutator(&b)
            .commutator(&c)
            .add(&b.commutator(&c).commutator(&a))
            .add(&c.commutator(&a).commutator(&b));
        assert!(jac.is_zero(), "jacobi case {case}");
    }
}

#[test]
fn action_oracle_is_a_module_homomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for case in 0..1000 {
        let a = gen_op(&mut rng, 2);
        let b = gen_op(&mut rng, 2);
        let f = gen_poly(&mut rng);
        assert_eq!(
            a.mul(&b).apply(&f),
            a.apply(&b.apply(&f)),
            "case {case}"
        );
    }
}

#[test]
fn nonzero_normal_forms_act_nonzero_within_the_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for case in 0..1000 {
        let a = gen_op(&mut rng, 3);
        if a.is_zero() {
            continue;
        }
        assert!(
            faithfulness_witness(&a).is_some(),
            "no witness within the bound, case {case}: {a}"
        );
    }
}

#[test]
fn expansion_respects_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for case in 0..200 {
        let a = gen_op(&mut rng, 2);
        let b = gen_op(&mut rng, 2);
        let n = 3usize;
        let ab = a.mul(&b).expand_in_z(n as u32).unwrap();
        let ea = a.expand_in_z(n as u32).unwrap();
        let eb = b.expand_in_z(n as u32).unwrap();
        for k in 0..=n {
            let mut acc = OperatorExpr::zero();
            for i in 0..=k {
                acc = acc.add(&ea[i].mul(&eb[k - i]));
            }
            assert_eq!(ab[k], acc, "case {case}, coefficient of z^{k}");
        }
    }
}

#[test]
fn parser_round_trips_random_canonical_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for case in 0..1000 {
        let e = gen_multisite_op(&mut rng, 3);
        let text = format!("{e}");
        let back = parse_expr(&text).unwrap_or_else(|err| {
            panic!("case {case}: `{text}` fails to parse: {err}")
        });
        assert_eq!(back, e, "case {case}: `{text}`");
    }
}

proptest! {
    /// Scalar arithmetic is a field on random small fractions.
    #[test]
    fn scalar_field_laws(
        an in -6i64..=6, ad in 1i64..=4,
        bn in -6i64..=6, bd in 1i64..=4,
        zpow in 0u32..=2,
    ) {
        let a = Scalar::ratio(an, ad).mul(&Scalar::z().pow(zpow as i32).unwrap());
        let b = Scalar::ratio(bn, bd).add(&Scalar::m());
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.sub(&a), Scalar::zero());
        if !b.is_zero() {
            prop_assert_eq!(a.div(&b).unwrap().mul(&b), a);
        }
    }

    /// Scaling commutes with multiplication of operators.
    #[test]
    fn scaling_commutes_with_products(n in -4i64..=4, d in 1i64..=3, seed in 0u64..1024) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = gen_op(&mut rng, 2);
        let b = gen_op(&mut rng, 2);
        let s = Scalar::ratio(n, d);
        prop_assert_eq!(a.scale(&s).mul(&b), a.mul(&b).scale(&s));
        prop_assert_eq!(a.mul(&b.scale(&s)), a.mul(&b).scale(&s));
    }
}
