//! Random generators shared by the engine property suites and the
//! acceptance tests. Everything is seeded, so failures reproduce.

use qschrod::opalg::{OperatorExpr, PolyFunction, Rat};
use qschrod::scalar::Scalar;
use rand::Rng;

/// Small random scalar: rational, sometimes with a `z` or `m` factor.
pub fn gen_scalar<R: Rng>(rng: &mut R) -> Scalar {
    let n = loop {
        let n = rng.gen_range(-3i64..=3);
        if n != 0 {
            break n;
        }
    };
    let d = rng.gen_range(1i64..=3);
    let mut s = Scalar::ratio(n, d);
    match rng.gen_range(0..4) {
        0 => s = s.mul(&Scalar::z()),
        1 => s = s.mul(&Scalar::m()),
        _ => {}
    }
    s
}

/// Shift amount: small integer, occasionally a half-integer.
fn gen_shift<R: Rng>(rng: &mut R) -> Rat {
    if rng.gen_range(0..5) == 0 {
        Rat::new(rng.gen_range(-3i64..=3), 2)
    } else {
        Rat::new(rng.gen_range(-2i64..=2), 1)
    }
}

/// One random normal-ordered monomial on the given site.
fn gen_term<R: Rng>(rng: &mut R, site: u8) -> OperatorExpr {
    let mut acc = OperatorExpr::scalar(gen_scalar(rng));
    for _ in 0..rng.gen_range(0..=2) {
        acc = acc.mul(&OperatorExpr::x(site));
    }
    for _ in 0..rng.gen_range(0..=2) {
        acc = acc.mul(&OperatorExpr::t(site));
    }
    let sx = gen_shift(rng);
    if !num::traits::Zero::is_zero(&sx) {
        acc = acc.mul(&OperatorExpr::sx(site, sx));
    }
    let st = gen_shift(rng);
    if !num::traits::Zero::is_zero(&st) {
        acc = acc.mul(&OperatorExpr::st(site, st));
    }
    for _ in 0..rng.gen_range(0..=2) {
        acc = acc.mul(&OperatorExpr::dx(site));
    }
    for _ in 0..rng.gen_range(0..=2) {
        acc = acc.mul(&OperatorExpr::dt(site));
    }
    acc
}

/// Random operator with up to `max_terms` terms on site 0.
pub fn gen_op<R: Rng>(rng: &mut R, max_terms: usize) -> OperatorExpr {
    let mut acc = OperatorExpr::zero();
    for _ in 0..rng.gen_range(1..=max_terms) {
        acc = acc.add(&gen_term(rng, 0));
    }
    acc
}

/// Random operator spread over sites 0..=2 (for printer round trips).
pub fn gen_multisite_op<R: Rng>(rng: &mut R, max_terms: usize) -> OperatorExpr {
    let mut acc = OperatorExpr::zero();
    for _ in 0..rng.gen_range(1..=max_terms) {
        let mut term = OperatorExpr::scalar(gen_scalar(rng));
        for site in 0..=rng.gen_range(0u8..=2) {
            term = term.mul(&gen_term(rng, site));
        }
        acc = acc.add(&term);
    }
    acc
}

/// Random polynomial function of bounded degree on site 0.
pub fn gen_poly<R: Rng>(rng: &mut R) -> PolyFunction {
    let mut acc = PolyFunction::zero();
    for _ in 0..rng.gen_range(1..=3) {
        acc = acc.add(&PolyFunction::monomial(
            0,
            rng.gen_range(0..=3),
            rng.gen_range(0..=3),
            gen_scalar(rng),
        ));
    }
    acc
}
