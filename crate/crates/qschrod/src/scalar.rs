//! Exact scalar arithmetic: multivariate integer polynomials and their
//! fractions over the symbols `z`, `m`, `z1`, `z2`, `lambda`.
//!
//! Every coefficient in the operator algebra and the bialgebra layer is a
//! [`Scalar`]: a reduced fraction of two [`Poly`] values. Canonical form is
//! maintained on construction (polynomial gcd removed, shared integer content
//! removed, denominator leading coefficient positive), so equality of scalars
//! is plain structural equality. No floating point enters this module.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::traits::{One, Signed, Zero};
use num::Integer;
use thiserror::Error;

/// Number of formal symbols available to polynomials.
pub const SYMBOL_COUNT: usize = 5;

/// Formal symbols of the coefficient field.
///
/// `Z` is the deformation parameter, `M` the central charge value; `Z1`,
/// `Z2` and `Lambda` only occur in the bialgebra layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Z,
    M,
    Z1,
    Z2,
    Lambda,
}

impl Symbol {
    pub const ALL: [Symbol; SYMBOL_COUNT] = [Symbol::Z, Symbol::M, Symbol::Z1, Symbol::Z2, Symbol::Lambda];

    pub fn index(self) -> usize {
        match self {
            Symbol::Z => 0,
            Symbol::M => 1,
            Symbol::Z1 => 2,
            Symbol::Z2 => 3,
            Symbol::Lambda => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Symbol::Z => "z",
            Symbol::M => "m",
            Symbol::Z1 => "z1",
            Symbol::Z2 => "z2",
            Symbol::Lambda => "lambda",
        }
    }

    pub fn from_name(name: &str) -> Option<Symbol> {
        Symbol::ALL.iter().copied().find(|s| s.name() == name)
    }
}

/// Exponent vector, one entry per symbol in `Symbol::ALL` order.
pub type Exps = [u16; SYMBOL_COUNT];

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ScalarError {
    #[error("division by zero scalar")]
    DivisionByZero,
    #[error("denominator vanishes under the given bindings")]
    DenominatorVanishes,
}

/// Multivariate polynomial with exact integer coefficients.
///
/// Terms are kept in a `BTreeMap` keyed by exponent vector, which fixes the
/// monomial order used everywhere (printing, leading coefficients).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Exps, BigInt>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert([0; SYMBOL_COUNT], c);
        }
        Poly { terms }
    }

    pub fn from_i64(c: i64) -> Self {
        Poly::constant(BigInt::from(c))
    }

    pub fn symbol(s: Symbol) -> Self {
        let mut exps = [0; SYMBOL_COUNT];
        exps[s.index()] = 1;
        Poly::monomial(exps, BigInt::one())
    }

    pub fn monomial(exps: Exps, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    /// Returns the constant value if the polynomial has no symbol content.
    pub fn as_constant(&self) -> Option<&BigInt> {
        if self.terms.len() == 1 {
            self.terms.get(&[0; SYMBOL_COUNT])
        } else {
            None
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn insert_add(terms: &mut BTreeMap<Exps, BigInt>, exps: Exps, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            Self::insert_add(&mut terms, *e, c.clone());
        }
        Poly { terms }
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut terms = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut e = *ea;
                for (i, x) in eb.iter().enumerate() {
                    e[i] += x;
                }
                Self::insert_add(&mut terms, e, ca * cb);
            }
        }
        Poly { terms }
    }

    pub fn mul_bigint(&self, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect() }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Positive gcd of all coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn div_bigint_exact(&self, d: &BigInt) -> Poly {
        assert!(!d.is_zero());
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let (q, r) = c.div_rem(d);
                    assert!(r.is_zero(), "inexact integer division in polynomial");
                    (*e, q)
                })
                .collect(),
        }
    }

    /// Leading term under the fixed monomial order.
    pub fn leading(&self) -> Option<(&Exps, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn degree_in(&self, s: Symbol) -> u16 {
        self.terms.keys().map(|e| e[s.index()]).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, s: Symbol) -> u16 {
        self.terms.keys().map(|e| e[s.index()]).min().unwrap_or(0)
    }

    pub fn involves(&self, s: Symbol) -> bool {
        self.terms.keys().any(|e| e[s.index()] > 0)
    }

    /// Splits into coefficients of powers of `s` (each free of `s`).
    pub fn coeffs_in(&self, s: Symbol) -> BTreeMap<u16, Poly> {
        let mut out: BTreeMap<u16, Poly> = BTreeMap::new();
        let i = s.index();
        for (e, c) in &self.terms {
            let d = e[i];
            let mut e2 = *e;
            e2[i] = 0;
            let entry = out.entry(d).or_insert_with(Poly::zero);
            Self::insert_add(&mut entry.terms, e2, c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Exact polynomial division; `None` when `self` is not a multiple of `d`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut quo = Poly::zero();
        let (d_exp, d_c) = d.leading().unwrap();
        let d_exp = *d_exp;
        let d_c = d_c.clone();
        while !rem.is_zero() {
            let (r_exp, r_c) = rem.leading().unwrap();
            let mut q_exp = [0u16; SYMBOL_COUNT];
            for i in 0..SYMBOL_COUNT {
                if r_exp[i] < d_exp[i] {
                    return None;
                }
                q_exp[i] = r_exp[i] - d_exp[i];
            }
            let (q_c, r_c_rem) = r_c.div_rem(&d_c);
            if !r_c_rem.is_zero() {
                return None;
            }
            let q_term = Poly::monomial(q_exp, q_c);
            rem = rem.sub(&q_term.mul(d));
            quo = quo.add(&q_term);
        }
        Some(quo)
    }

    /// Substitutes a scalar value for a symbol, producing a scalar.
    pub fn substitute(&self, s: Symbol, value: &Scalar) -> Scalar {
        let parts = self.coeffs_in(s);
        let mut acc = Scalar::zero();
        for (d, coeff) in parts {
            let term = Scalar::from_poly(coeff)
                .mul(&value.pow_unsigned(u32::from(d)));
            acc = acc.add(&term);
        }
        acc
    }

    pub fn eval_f64(&self, vals: &[f64; SYMBOL_COUNT]) -> f64 {
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut t = bigint_to_f64(c);
            for i in 0..SYMBOL_COUNT {
                for _ in 0..e[i] {
                    t *= vals[i];
                }
            }
            acc += t;
        }
        acc
    }
}

fn bigint_to_f64(c: &BigInt) -> f64 {
    use num::ToPrimitive;
    c.to_f64().expect("coefficient exceeds f64 range")
}

/// Largest monomial dividing `p`.
fn monomial_part(p: &Poly) -> (Exps, BigInt) {
    let mut exps = [u16::MAX; SYMBOL_COUNT];
    for (e, _) in p.terms() {
        for i in 0..SYMBOL_COUNT {
            exps[i] = exps[i].min(e[i]);
        }
    }
    (exps, p.content())
}

/// Gcd of two multivariate polynomials (primitive PRS in the top variable).
pub fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return normalize_sign(b.clone());
    }
    if b.is_zero() {
        return normalize_sign(a.clone());
    }
    // Monomial fast path: the gcd against a monomial is a monomial.
    if a.num_terms() == 1 || b.num_terms() == 1 {
        let (ea, ca) = monomial_part(a);
        let (eb, cb) = monomial_part(b);
        let mut exps = [0u16; SYMBOL_COUNT];
        for i in 0..SYMBOL_COUNT {
            exps[i] = ea[i].min(eb[i]);
        }
        return Poly::monomial(exps, ca.gcd(&cb));
    }
    // Pick the highest symbol occurring in either operand.
    let var = Symbol::ALL
        .iter()
        .rev()
        .copied()
        .find(|s| a.involves(*s) || b.involves(*s));
    let var = match var {
        Some(v) => v,
        None => {
            // Both constants.
            let ca = a.as_constant().unwrap();
            let cb = b.as_constant().unwrap();
            return Poly::constant(ca.gcd(cb));
        }
    };

    let (cont_a, prim_a) = content_and_primitive(a, var);
    let (cont_b, prim_b) = content_and_primitive(b, var);
    let cont_gcd = poly_gcd(&cont_a, &cont_b);

    let mut g = prim_a;
    let mut h = prim_b;
    if g.degree_in(var) < h.degree_in(var) {
        std::mem::swap(&mut g, &mut h);
    }
    while !h.is_zero() {
        let r = pseudo_rem(&g, &h, var);
        g = h;
        h = content_and_primitive(&r, var).1;
    }
    normalize_sign(cont_gcd.mul(&g))
}

fn normalize_sign(p: Poly) -> Poly {
    match p.leading() {
        Some((_, c)) if c.is_negative() => p.neg(),
        _ => p,
    }
}

/// Content (gcd of the coefficients w.r.t. `var`) and primitive part.
fn content_and_primitive(p: &Poly, var: Symbol) -> (Poly, Poly) {
    if p.is_zero() {
        return (Poly::zero(), Poly::zero());
    }
    let coeffs = p.coeffs_in(var);
    let mut cont = Poly::zero();
    for c in coeffs.values() {
        cont = poly_gcd(&cont, c);
        if cont.is_one() {
            break;
        }
    }
    let prim = p
        .div_exact(&cont)
        .expect("content must divide the polynomial");
    (cont, prim)
}

/// Pseudo-remainder of `a` by `b` viewed as polynomials in `var`.
fn pseudo_rem(a: &Poly, b: &Poly, var: Symbol) -> Poly {
    let db = b.degree_in(var);
    let b_coeffs = b.coeffs_in(var);
    let lb = b_coeffs.get(&db).cloned().unwrap_or_else(Poly::zero);
    let var_poly = Poly::symbol(var);
    let mut r = a.clone();
    loop {
        if r.is_zero() {
            return r;
        }
        let dr = r.degree_in(var);
        if dr < db {
            return r;
        }
        let r_coeffs = r.coeffs_in(var);
        let lr = r_coeffs.get(&dr).cloned().unwrap_or_else(Poly::zero);
        // r <- lb*r - lr * var^(dr-db) * b
        r = lb.mul(&r).sub(&lr.mul(&var_poly.pow(u32::from(dr - db))).mul(b));
    }
}

/// Reduced fraction of integer polynomials: the working coefficient field.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Scalar {
    /// Builds and canonicalizes a fraction; errors when `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Result<Scalar, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: Poly, den: Poly) -> Scalar {
        if num.is_zero() {
            return Scalar { num: Poly::zero(), den: Poly::one() };
        }
        // Fast paths: unit denominators and constant/constant fractions
        // dominate in practice and need no polynomial gcd.
        if den.is_one() {
            return Scalar { num, den };
        }
        let g = if num.as_constant().is_some() && den.as_constant().is_some() {
            Poly::constant(num.content().gcd(&den.content()))
        } else {
            poly_gcd(&num, &den)
        };
        let mut num = if g.is_one() { num } else { num.div_exact(&g).expect("gcd divides numerator") };
        let mut den = if g.is_one() { den } else { den.div_exact(&g).expect("gcd divides denominator") };
        let ic = num.content().gcd(&den.content());
        if !ic.is_one() {
            num = num.div_bigint_exact(&ic);
            den = den.div_bigint_exact(&ic);
        }
        if den.leading().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            num = num.neg();
            den = den.neg();
        }
        Scalar { num, den }
    }

    pub fn from_poly(p: Poly) -> Scalar {
        Scalar::reduced(p, Poly::one())
    }

    pub fn zero() -> Scalar {
        Scalar::from_poly(Poly::zero())
    }

    pub fn one() -> Scalar {
        Scalar::from_poly(Poly::one())
    }

    pub fn int(c: i64) -> Scalar {
        Scalar::from_poly(Poly::from_i64(c))
    }

    pub fn ratio(n: i64, d: i64) -> Scalar {
        assert!(d != 0, "zero denominator literal");
        Scalar::reduced(Poly::from_i64(n), Poly::from_i64(d))
    }

    pub fn sym(s: Symbol) -> Scalar {
        Scalar::from_poly(Poly::symbol(s))
    }

    pub fn z() -> Scalar {
        Scalar::sym(Symbol::Z)
    }

    pub fn m() -> Scalar {
        Scalar::sym(Symbol::M)
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        Scalar::reduced(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        Scalar { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        Scalar::reduced(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        if other.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Scalar::reduced(self.num.mul(&other.den), self.den.mul(&other.num)))
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        Scalar::one().div(self)
    }

    fn pow_unsigned(&self, n: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn pow(&self, n: i32) -> Result<Scalar, ScalarError> {
        if n >= 0 {
            Ok(self.pow_unsigned(n as u32))
        } else {
            self.pow_unsigned(n.unsigned_abs()).inv()
        }
    }

    /// Substitutes a scalar for a symbol everywhere in the fraction.
    pub fn substitute(&self, s: Symbol, value: &Scalar) -> Result<Scalar, ScalarError> {
        let num = self.num.substitute(s, value);
        let den = self.den.substitute(s, value);
        if den.is_zero() {
            return Err(ScalarError::DenominatorVanishes);
        }
        num.div(&den)
    }

    pub fn eval_f64(&self, vals: &[f64; SYMBOL_COUNT]) -> Result<f64, ScalarError> {
        let d = self.den.eval_f64(vals);
        if d == 0.0 {
            return Err(ScalarError::DenominatorVanishes);
        }
        Ok(self.num.eval_f64(vals) / d)
    }

    pub fn involves(&self, s: Symbol) -> bool {
        self.num.involves(s) || self.den.involves(s)
    }

    /// True when the value is a plain rational number (no formal symbols).
    pub fn is_rational_const(&self) -> bool {
        Symbol::ALL.iter().all(|s| !self.involves(*s))
    }

    /// Laurent expansion in `z` around `z = 0`, up to and including
    /// `z^max_order`. Returns the exponent of the first coefficient and the
    /// coefficient list; every returned scalar is free of `z`.
    pub fn z_series(&self, max_order: i32) -> (i32, Vec<Scalar>) {
        if self.is_zero() {
            return (0, Vec::new());
        }
        let num_parts = self.num.coeffs_in(Symbol::Z);
        let den_parts = self.den.coeffs_in(Symbol::Z);
        let den_val = *den_parts.keys().next().expect("nonzero denominator");
        let num_val = *num_parts.keys().next().expect("nonzero numerator");
        let offset = i32::from(num_val) - i32::from(den_val);
        if offset > max_order {
            return (offset, Vec::new());
        }
        let take = (max_order - offset + 1) as usize;
        // Series coefficients of num and den relative to their valuations.
        let num_c: Vec<Scalar> = (0..take)
            .map(|k| {
                num_parts
                    .get(&(num_val + k as u16))
                    .cloned()
                    .map(Scalar::from_poly)
                    .unwrap_or_else(Scalar::zero)
            })
            .collect();
        let den_c: Vec<Scalar> = (0..take)
            .map(|k| {
                den_parts
                    .get(&(den_val + k as u16))
                    .cloned()
                    .map(Scalar::from_poly)
                    .unwrap_or_else(Scalar::zero)
            })
            .collect();
        let lead = den_c[0].clone();
        let mut out: Vec<Scalar> = Vec::with_capacity(take);
        for k in 0..take {
            let mut acc = num_c[k].clone();
            for j in 1..=k {
                acc = acc.sub(&den_c[j].mul(&out[k - j]));
            }
            out.push(acc.div(&lead).expect("leading denominator coefficient is nonzero"));
        }
        (offset, out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let has_vars = e.iter().any(|&x| x > 0);
            if !has_vars {
                write!(f, "{c}")?;
            } else {
                let mut started = false;
                if c.is_one() {
                    // omit unit coefficient
                } else if (-c).is_one() {
                    write!(f, "-")?;
                } else {
                    write!(f, "{c}")?;
                    started = true;
                }
                for (i, &p) in e.iter().enumerate() {
                    if p == 0 {
                        continue;
                    }
                    if started {
                        write!(f, "*")?;
                    }
                    started = true;
                    write!(f, "{}", Symbol::ALL[i].name())?;
                    if p > 1 {
                        write!(f, "^{p}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// A divisor can be printed bare only when `^` is the sole operator it
/// contains; anything with `*` or `+` must be parenthesized so that
/// `a/b` re-parses with the intended precedence.
fn divisor_needs_parens(p: &Poly) -> bool {
    if p.num_terms() != 1 {
        return true;
    }
    let (e, c) = p.terms().next().expect("single term");
    let vars = e.iter().filter(|&&x| x > 0).count();
    match vars {
        0 => false,
        1 => !c.is_one(),
        _ => true,
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num_simple = self.num.num_terms() <= 1;
        if self.den.is_one() {
            if num_simple {
                write!(f, "{}", self.num)
            } else {
                write!(f, "({})", self.num)
            }
        } else {
            if num_simple {
                write!(f, "{}/", self.num)?;
            } else {
                write!(f, "({})/", self.num)?;
            }
            if divisor_needs_parens(&self.den) {
                write!(f, "({})", self.den)
            } else {
                write!(f, "{}", self.den)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> Scalar {
        Scalar::z()
    }

    fn m() -> Scalar {
        Scalar::m()
    }

    #[test]
    fn fraction_reduction() {
        let a = Scalar::ratio(2, 4);
        assert_eq!(a, Scalar::ratio(1, 2));
        let b = z().mul(&m()).div(&z().mul(&Scalar::int(2))).unwrap();
        assert_eq!(b, m().mul(&Scalar::ratio(1, 2)));
    }

    #[test]
    fn polynomial_gcd_removes_common_factor() {
        // (z+m)*(z-m) / (z+m) reduces to z-m
        let zp = Poly::symbol(Symbol::Z);
        let mp = Poly::symbol(Symbol::M);
        let sum = zp.add(&mp);
        let diff = zp.sub(&mp);
        let s = Scalar::new(sum.mul(&diff), sum).unwrap();
        assert_eq!(s, Scalar::from_poly(diff));
    }

    #[test]
    fn denominator_sign_is_normalized() {
        let a = Scalar::new(Poly::from_i64(1), Poly::from_i64(-2)).unwrap();
        assert_eq!(a, Scalar::ratio(-1, 2));
    }

    #[test]
    fn field_laws_on_samples() {
        let samples = [
            Scalar::int(0),
            Scalar::int(3),
            Scalar::ratio(-2, 3),
            z(),
            m().add(&Scalar::int(1)),
            z().mul(&m()).sub(&Scalar::ratio(1, 2)),
            Scalar::new(Poly::symbol(Symbol::M), Poly::symbol(Symbol::Z)).unwrap(),
        ];
        for a in &samples {
            for b in &samples {
                assert_eq!(a.add(b), b.add(a));
                assert_eq!(a.mul(b), b.mul(a));
                for c in &samples {
                    assert_eq!(a.add(b).add(c), a.add(&b.add(c)));
                    assert_eq!(a.mul(b).mul(c), a.mul(&b.mul(c)));
                    assert_eq!(a.mul(&b.add(c)), a.mul(b).add(&a.mul(c)));
                }
                if !b.is_zero() {
                    let q = a.div(b).unwrap();
                    assert_eq!(q.mul(b), *a);
                }
            }
        }
    }

    #[test]
    fn substitution() {
        // (m*z) with m -> 1/2 gives z/2
        let s = m().mul(&z());
        let r = s.substitute(Symbol::M, &Scalar::ratio(1, 2)).unwrap();
        assert_eq!(r, z().mul(&Scalar::ratio(1, 2)));
        // 1/z with z -> 0 vanishes in the denominator
        let inv_z = z().inv().unwrap();
        assert_eq!(
            inv_z.substitute(Symbol::Z, &Scalar::zero()),
            Err(ScalarError::DenominatorVanishes)
        );
    }

    #[test]
    fn laurent_series() {
        // (1 - z^2) / z  =  z^-1 - z
        let s = Scalar::one().sub(&z().mul(&z())).div(&z()).unwrap();
        let (off, coeffs) = s.z_series(2);
        assert_eq!(off, -1);
        assert_eq!(coeffs.len(), 4);
        assert_eq!(coeffs[0], Scalar::one());
        assert_eq!(coeffs[1], Scalar::zero());
        assert_eq!(coeffs[2], Scalar::int(-1));
        assert_eq!(coeffs[3], Scalar::zero());
        // m / (2 + z): regular, starts at z^0 with m/2
        let t = m().div(&Scalar::int(2).add(&z())).unwrap();
        let (off, coeffs) = t.z_series(1);
        assert_eq!(off, 0);
        assert_eq!(coeffs[0], m().mul(&Scalar::ratio(1, 2)));
        assert_eq!(coeffs[1], m().mul(&Scalar::ratio(-1, 4)));
    }

    #[test]
    fn eval_f64_matches_exact() {
        let s = z().mul(&m()).add(&Scalar::ratio(1, 4));
        let v = s.eval_f64(&[2.0, 0.5, 0.0, 0.0, 0.0]).unwrap();
        assert!((v - 1.25).abs() < 1e-14);
    }
}
