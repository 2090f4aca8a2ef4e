//! Normal-ordered algebra of differential-difference operators.
//!
//! An operator is a linear combination of monomials
//! `c(z,m) * x^p t^q * Sx[a] St[b] * dx^e dt^f`, optionally spread over
//! several tensor sites. `Sx[a]` denotes the shift `exp(a*z*dx)` (translation
//! of `x` by `a*z`) and `St[b]` the analogous time shift; shift amounts are
//! exact rationals in units of the deformation parameter `z`.
//!
//! The normal order is fixed as coefficient polynomial, then shifts, then
//! derivatives. Multiplication rewrites any inverted pair at the boundary:
//!
//! - `dx * x   -> x*dx + 1` (and the Leibniz power rule in general),
//! - `Sx[a]*x  -> (x + a*z)*Sx[a]`,
//! - everything else commutes (`dx` with `Sx`, `x` with `t`, distinct
//!   sites, all cross pairs).
//!
//! Because shifts and derivatives commute with each other, each rewrite
//! strictly reduces the number of out-of-order adjacent pairs, so the normal
//! form is reached in finitely many steps and is unique; associativity is
//! exercised by randomized tests rather than assumed.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::rational::Rational64;
use num::traits::{One, Zero};
use thiserror::Error;

use crate::scalar::{Scalar, ScalarError, Symbol};

/// Exact rational shift amount (in units of `z`).
pub type Rat = Rational64;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum OpError {
    #[error("coefficient of z^{0} survives at z = 0; the limit diverges")]
    PoleAtZero(i32),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Normal-form factor data carried by one tensor site inside a monomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SiteOps {
    pub x_pow: u32,
    pub t_pow: u32,
    pub sx: Rat,
    pub st: Rat,
    pub dx_pow: u32,
    pub dt_pow: u32,
}

impl SiteOps {
    pub const IDENTITY: SiteOps = SiteOps {
        x_pow: 0,
        t_pow: 0,
        sx: Rat::new_raw(0, 1),
        st: Rat::new_raw(0, 1),
        dx_pow: 0,
        dt_pow: 0,
    };

    pub fn is_identity(&self) -> bool {
        *self == SiteOps::IDENTITY
    }
}

/// Monomial key: per-site factors, ordered by site, identity sites omitted.
pub type TermKey = Vec<(u8, SiteOps)>;

/// Canonical linear combination of normal-ordered monomials.
///
/// Invariants: no zero coefficients, no identity site factors inside keys,
/// deterministic term order (the `BTreeMap` order). The zero operator is the
/// empty term set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct OperatorExpr {
    terms: BTreeMap<TermKey, Scalar>,
}

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

fn binom(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn falling(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n - i);
    }
    acc
}

/// `a^n` for a rational shift amount, as an exact scalar.
fn rat_pow(a: Rat, n: u32) -> Scalar {
    if n == 0 {
        return Scalar::one();
    }
    if a.is_zero() {
        return Scalar::zero();
    }
    let num = BigInt::from(*a.numer()).pow(n);
    let den = BigInt::from(*a.denom()).pow(n);
    Scalar::new(crate::scalar::Poly::constant(num), crate::scalar::Poly::constant(den))
        .expect("nonzero denominator")
}

/// `(a*z)^n` as an exact scalar.
fn shift_step_pow(a: Rat, n: u32) -> Scalar {
    if n == 0 {
        return Scalar::one();
    }
    if a.is_zero() {
        return Scalar::zero();
    }
    rat_pow(a, n).mul(&Scalar::z().pow(n as i32).expect("positive power"))
}

fn bigint_scalar(c: BigInt) -> Scalar {
    Scalar::from_poly(crate::scalar::Poly::constant(c))
}

impl OperatorExpr {
    pub fn zero() -> Self {
        OperatorExpr::default()
    }

    pub fn one() -> Self {
        OperatorExpr::scalar(Scalar::one())
    }

    /// Scalar multiple of the identity.
    pub fn scalar(c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        OperatorExpr { terms }
    }

    fn from_site(site: u8, ops: SiteOps) -> Self {
        let key = if ops.is_identity() { Vec::new() } else { vec![(site, ops)] };
        let mut terms = BTreeMap::new();
        terms.insert(key, Scalar::one());
        OperatorExpr { terms }
    }

    pub fn x(site: u8) -> Self {
        Self::from_site(site, SiteOps { x_pow: 1, ..SiteOps::IDENTITY })
    }

    pub fn t(site: u8) -> Self {
        Self::from_site(site, SiteOps { t_pow: 1, ..SiteOps::IDENTITY })
    }

    pub fn dx(site: u8) -> Self {
        Self::from_site(site, SiteOps { dx_pow: 1, ..SiteOps::IDENTITY })
    }

    pub fn dt(site: u8) -> Self {
        Self::from_site(site, SiteOps { dt_pow: 1, ..SiteOps::IDENTITY })
    }

    /// Shift `exp(a*z*dx)` on the given site.
    pub fn sx(site: u8, a: Rat) -> Self {
        Self::from_site(site, SiteOps { sx: a, ..SiteOps::IDENTITY })
    }

    /// Shift `exp(a*z*dt)` on the given site.
    pub fn st(site: u8, a: Rat) -> Self {
        Self::from_site(site, SiteOps { st: a, ..SiteOps::IDENTITY })
    }

    pub fn sx_i(site: u8, a: i64) -> Self {
        Self::sx(site, rat(a, 1))
    }

    pub fn st_i(site: u8, a: i64) -> Self {
        Self::st(site, rat(a, 1))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &Scalar)> {
        self.terms.iter()
    }

    /// The scalar value when the operator is a multiple of the identity.
    pub fn as_scalar(&self) -> Option<Scalar> {
        if self.terms.is_empty() {
            return Some(Scalar::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&Vec::new()) {
                return Some(c.clone());
            }
        }
        None
    }

    fn insert_add(terms: &mut BTreeMap<TermKey, Scalar>, key: TermKey, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            Self::insert_add(&mut terms, k.clone(), c.clone());
        }
        OperatorExpr { terms }
    }

    pub fn neg(&self) -> Self {
        OperatorExpr { terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        OperatorExpr { terms: self.terms.iter().map(|(k, x)| (k.clone(), x.mul(c))).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let expanded = mul_keys(ka, kb);
                let c = ca.mul(cb);
                for (extra, key) in expanded {
                    Self::insert_add(&mut terms, key, c.mul(&extra));
                }
            }
        }
        OperatorExpr { terms }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitutes scalars for symbols inside every coefficient.
    pub fn substitute(&self, bindings: &[(Symbol, Scalar)]) -> Result<Self, ScalarError> {
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            let mut c = c.clone();
            for (s, v) in bindings {
                c = c.substitute(*s, v)?;
            }
            Self::insert_add(&mut terms, k.clone(), c);
        }
        Ok(OperatorExpr { terms })
    }

    /// Renames tensor sites; entries absent from `map` keep their site.
    pub fn relabel_sites(&self, map: &[(u8, u8)]) -> Self {
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            let mut key: TermKey = k
                .iter()
                .map(|(s, ops)| {
                    let ns = map.iter().find(|(from, _)| from == s).map(|(_, to)| *to).unwrap_or(*s);
                    (ns, *ops)
                })
                .collect();
            key.sort();
            Self::insert_add(&mut terms, key, c.clone());
        }
        OperatorExpr { terms }
    }

    pub fn max_dx_order(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|k| k.iter().map(|(_, o)| o.dx_pow))
            .max()
            .unwrap_or(0)
    }

    pub fn max_dt_order(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|k| k.iter().map(|(_, o)| o.dt_pow))
            .max()
            .unwrap_or(0)
    }

    pub fn distinct_sx_amounts(&self) -> usize {
        let mut set = std::collections::BTreeSet::new();
        for k in self.terms.keys() {
            for (_, o) in k {
                set.insert(o.sx);
            }
        }
        set.len()
    }

    pub fn distinct_st_amounts(&self) -> usize {
        let mut set = std::collections::BTreeSet::new();
        for k in self.terms.keys() {
            for (_, o) in k {
                set.insert(o.st);
            }
        }
        set.len()
    }

    /// Expands shifts as exponential series and collects the coefficients of
    /// `z^0 ..= z^order` as shift-free operators. Fails when a genuinely
    /// negative power of `z` survives the expansion.
    pub fn expand_in_z(&self, order: u32) -> Result<Vec<OperatorExpr>, OpError> {
        let order = order as i32;
        let mut by_power: BTreeMap<i32, OperatorExpr> = BTreeMap::new();
        for (key, coeff) in &self.terms {
            let (offset, series) = coeff.z_series(order);
            // Partial expansions: (z power, scalar, accumulated key).
            let base_key: TermKey = key
                .iter()
                .map(|(s, o)| (*s, SiteOps { sx: rat(0, 1), st: rat(0, 1), ..*o }))
                .filter(|(_, o)| !o.is_identity())
                .collect();
            let mut partials: Vec<(i32, Scalar, TermKey)> = series
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (offset + k as i32, c.clone(), base_key.clone()))
                .collect();
            for (site, ops) in key {
                if !ops.sx.is_zero() {
                    partials = expand_shift(partials, *site, ops.sx, true, order);
                }
                if !ops.st.is_zero() {
                    partials = expand_shift(partials, *site, ops.st, false, order);
                }
            }
            for (p, c, k) in partials {
                if p > order {
                    continue;
                }
                let mut single = BTreeMap::new();
                Self::insert_add(&mut single, k, c);
                let e = OperatorExpr { terms: single };
                let entry = by_power.entry(p).or_insert_with(OperatorExpr::zero);
                *entry = entry.add(&e);
            }
        }
        if let Some((p, _)) = by_power.iter().find(|(p, e)| **p < 0 && !e.is_zero()) {
            return Err(OpError::PoleAtZero(*p));
        }
        Ok((0..=order)
            .map(|p| by_power.get(&p).cloned().unwrap_or_else(OperatorExpr::zero))
            .collect())
    }
}

/// Multiplies the exponential series of one shift into partial expansions.
fn expand_shift(
    partials: Vec<(i32, Scalar, TermKey)>,
    site: u8,
    amount: Rat,
    is_x: bool,
    order: i32,
) -> Vec<(i32, Scalar, TermKey)> {
    let mut out = Vec::new();
    for (p, c, key) in partials {
        let mut n: i32 = 0;
        let mut step = Scalar::one();
        let mut fact = BigInt::one();
        while p + n <= order {
            // step = a^n, fact = n!; the z^n lives in the tracked power.
            let coeff = c.mul(&step.div(&bigint_scalar(fact.clone())).expect("factorial nonzero"));
            let mut key2 = key.clone();
            bump_derivative(&mut key2, site, is_x, n as u32);
            out.push((p + n, coeff, key2));
            n += 1;
            step = step.mul(&rat_pow(amount, 1));
            fact *= BigInt::from(n);
        }
    }
    out
}

fn bump_derivative(key: &mut TermKey, site: u8, is_x: bool, by: u32) {
    if by == 0 {
        return;
    }
    if let Some(entry) = key.iter_mut().find(|(s, _)| *s == site) {
        if is_x {
            entry.1.dx_pow += by;
        } else {
            entry.1.dt_pow += by;
        }
    } else {
        let mut ops = SiteOps::IDENTITY;
        if is_x {
            ops.dx_pow = by;
        } else {
            ops.dt_pow = by;
        }
        key.push((site, ops));
        key.sort();
    }
}

/// Expands the product of two monomial keys into normal form.
/// Returns `(extra scalar factor, key)` pairs.
fn mul_keys(a: &TermKey, b: &TermKey) -> Vec<(Scalar, TermKey)> {
    // Collect the union of sites.
    let mut sites: Vec<u8> = a.iter().chain(b.iter()).map(|(s, _)| *s).collect();
    sites.sort();
    sites.dedup();
    let mut partials: Vec<(Scalar, TermKey)> = vec![(Scalar::one(), Vec::new())];
    for site in sites {
        let fa = a.iter().find(|(s, _)| *s == site).map(|(_, o)| *o);
        let fb = b.iter().find(|(s, _)| *s == site).map(|(_, o)| *o);
        let expanded: Vec<(Scalar, SiteOps)> = match (fa, fb) {
            (Some(oa), Some(ob)) => combine_site(&oa, &ob),
            (Some(oa), None) => vec![(Scalar::one(), oa)],
            (None, Some(ob)) => vec![(Scalar::one(), ob)],
            (None, None) => unreachable!(),
        };
        let mut next = Vec::with_capacity(partials.len() * expanded.len());
        for (c, key) in &partials {
            for (ec, ops) in &expanded {
                let c2 = c.mul(ec);
                if c2.is_zero() {
                    continue;
                }
                let mut key2 = key.clone();
                if !ops.is_identity() {
                    key2.push((site, *ops));
                }
                next.push((c2, key2));
            }
        }
        partials = next;
    }
    partials
}

/// Normal-orders the product of two same-site factors.
fn combine_site(a: &SiteOps, b: &SiteOps) -> Vec<(Scalar, SiteOps)> {
    let mut out = Vec::new();
    // Move b's x^pb through a's dx^ea, then through a's Sx.
    let x_parts = slide_variable(a.dx_pow, a.sx, b.x_pow);
    let t_parts = slide_variable(a.dt_pow, a.st, b.t_pow);
    for (cx, jx, ix) in &x_parts {
        for (ct, jt, it) in &t_parts {
            let coeff = cx.mul(ct);
            if coeff.is_zero() {
                continue;
            }
            let ops = SiteOps {
                x_pow: a.x_pow + jx,
                t_pow: a.t_pow + jt,
                sx: a.sx + b.sx,
                st: a.st + b.st,
                dx_pow: a.dx_pow - ix + b.dx_pow,
                dt_pow: a.dt_pow - it + b.dt_pow,
            };
            out.push((coeff, ops));
        }
    }
    out
}

/// Rewrites `d^e S[a] v^p` (derivatives and one shift moving left past a
/// variable power) into terms `coeff * v^j * (e-i) remaining derivatives`.
/// Returns `(coeff, j, i)` triples.
fn slide_variable(deriv: u32, shift: Rat, var_pow: u32) -> Vec<(Scalar, u32, u32)> {
    let mut out = Vec::new();
    for i in 0..=deriv.min(var_pow) {
        let leibniz = binom(deriv, i) * falling(var_pow, i);
        let rem = var_pow - i;
        if shift.is_zero() {
            out.push((bigint_scalar(leibniz), rem, i));
            continue;
        }
        for j in 0..=rem {
            let c = bigint_scalar(leibniz.clone())
                .mul(&bigint_scalar(binom(rem, j)))
                .mul(&shift_step_pow(shift, rem - j));
            if !c.is_zero() {
                out.push((c, j, i));
            }
        }
    }
    out
}

/// Atomic factor accepted by [`normalize`].
#[derive(Clone, Debug, PartialEq)]
pub enum Atom {
    X,
    T,
    Dx,
    Dt,
    Sx(Rat),
    St(Rat),
    Coef(Scalar),
}

impl Atom {
    pub fn to_expr(&self, site: u8) -> OperatorExpr {
        match self {
            Atom::X => OperatorExpr::x(site),
            Atom::T => OperatorExpr::t(site),
            Atom::Dx => OperatorExpr::dx(site),
            Atom::Dt => OperatorExpr::dt(site),
            Atom::Sx(a) => OperatorExpr::sx(site, *a),
            Atom::St(a) => OperatorExpr::st(site, *a),
            Atom::Coef(c) => OperatorExpr::scalar(c.clone()),
        }
    }
}

/// Rewrites a product of atomic factors into the unique normal form.
pub fn normalize(factors: &[(Atom, u8)]) -> OperatorExpr {
    factors
        .iter()
        .fold(OperatorExpr::one(), |acc, (a, site)| acc.mul(&a.to_expr(*site)))
}

/// Finite sum of monomials `c * x^p t^q` (per site), the oracle function
/// class: closed under derivatives and shifts by multiples of `z`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PolyFunction {
    terms: BTreeMap<PfKey, Scalar>,
}

/// Per-site variable powers: `(site, x_pow, t_pow)`, sorted by site.
pub type PfKey = Vec<(u8, u32, u32)>;

impl PolyFunction {
    pub fn zero() -> Self {
        PolyFunction::default()
    }

    pub fn constant(c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        PolyFunction { terms }
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    /// `c * x^p t^q` on one site.
    pub fn monomial(site: u8, x_pow: u32, t_pow: u32, c: Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let key = if x_pow == 0 && t_pow == 0 { Vec::new() } else { vec![(site, x_pow, t_pow)] };
        let mut terms = BTreeMap::new();
        terms.insert(key, c);
        PolyFunction { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PfKey, &Scalar)> {
        self.terms.iter()
    }

    fn insert_add(terms: &mut BTreeMap<PfKey, Scalar>, key: PfKey, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            Self::insert_add(&mut terms, k.clone(), c.clone());
        }
        PolyFunction { terms }
    }

    pub fn neg(&self) -> Self {
        PolyFunction { terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        PolyFunction { terms: self.terms.iter().map(|(k, x)| (k.clone(), x.mul(c))).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let mut key = ka.clone();
                for (s, p, q) in kb {
                    if let Some(e) = key.iter_mut().find(|(s2, _, _)| s2 == s) {
                        e.1 += p;
                        e.2 += q;
                    } else {
                        key.push((*s, *p, *q));
                    }
                }
                key.sort();
                Self::insert_add(&mut terms, key, ca.mul(cb));
            }
        }
        PolyFunction { terms }
    }

    /// Evaluates at per-site points `(site, x, t)` (exact scalars).
    pub fn eval(&self, points: &[(u8, Scalar, Scalar)]) -> Scalar {
        let mut acc = Scalar::zero();
        for (key, c) in &self.terms {
            let mut term = c.clone();
            for (site, p, q) in key {
                let (x, t) = points
                    .iter()
                    .find(|(s, _, _)| s == site)
                    .map(|(_, x, t)| (x.clone(), t.clone()))
                    .expect("evaluation point missing for a site");
                term = term
                    .mul(&x.pow(*p as i32).expect("positive power"))
                    .mul(&t.pow(*q as i32).expect("positive power"));
            }
            acc = acc.add(&term);
        }
        acc
    }
}

impl OperatorExpr {
    /// Exact action on a polynomial function; the independent oracle for the
    /// normal-ordering product (acts factor by factor, never multiplies
    /// operators).
    pub fn apply(&self, f: &PolyFunction) -> PolyFunction {
        let mut out = PolyFunction::zero();
        for (key, c) in &self.terms {
            for (fkey, fc) in &f.terms {
                out = out.add(&apply_term(key, &c.mul(fc), fkey));
            }
        }
        out
    }
}

fn apply_term(key: &TermKey, coeff: &Scalar, fkey: &PfKey) -> PolyFunction {
    // Start with the function monomial's sites; operator factors act on the
    // matching site (absent sites mean x^0 t^0 there).
    let mut partials: Vec<(Scalar, PfKey)> = vec![(coeff.clone(), Vec::new())];
    let mut touched: Vec<u8> = Vec::new();
    for (site, ops) in key {
        touched.push(*site);
        let (p, q) = fkey
            .iter()
            .find(|(s, _, _)| s == site)
            .map(|(_, p, q)| (*p, *q))
            .unwrap_or((0, 0));
        let acted = act_site(ops, p, q);
        let mut next = Vec::with_capacity(partials.len() * acted.len());
        for (c, k) in &partials {
            for (ac, np, nq) in &acted {
                let c2 = c.mul(ac);
                if c2.is_zero() {
                    continue;
                }
                let mut k2 = k.clone();
                if *np > 0 || *nq > 0 {
                    k2.push((*site, *np, *nq));
                }
                next.push((c2, k2));
            }
        }
        partials = next;
        if partials.is_empty() {
            return PolyFunction::zero();
        }
    }
    // Pass through function factors on sites the operator does not touch.
    let rest: PfKey = fkey.iter().filter(|(s, _, _)| !touched.contains(s)).cloned().collect();
    let mut out = BTreeMap::new();
    for (c, mut k) in partials {
        k.extend(rest.iter().cloned());
        k.sort();
        PolyFunction::insert_add(&mut out, k, c);
    }
    PolyFunction { terms: out }
}

/// One site factor acting on `x^p t^q`: returns `(coeff, new_p, new_q)`.
fn act_site(ops: &SiteOps, p: u32, q: u32) -> Vec<(Scalar, u32, u32)> {
    if ops.dx_pow > p || ops.dt_pow > q {
        return Vec::new();
    }
    let base = bigint_scalar(falling(p, ops.dx_pow) * falling(q, ops.dt_pow));
    let p1 = p - ops.dx_pow;
    let q1 = q - ops.dt_pow;
    // Shift: (x + a z)^p1 expanded; then multiply by x^x_pow t^t_pow.
    let mut out = Vec::new();
    let x_parts = shift_expand(ops.sx, p1);
    let t_parts = shift_expand(ops.st, q1);
    for (cx, jx) in &x_parts {
        for (ct, jt) in &t_parts {
            let c = base.mul(cx).mul(ct);
            if !c.is_zero() {
                out.push((c, jx + ops.x_pow, jt + ops.t_pow));
            }
        }
    }
    out
}

/// `(v + a z)^p` expanded: pairs `(coeff, power of v)`.
fn shift_expand(a: Rat, p: u32) -> Vec<(Scalar, u32)> {
    if a.is_zero() {
        return vec![(Scalar::one(), p)];
    }
    (0..=p)
        .map(|j| {
            let c = bigint_scalar(binom(p, j)).mul(&shift_step_pow(a, p - j));
            (c, j)
        })
        .filter(|(c, _)| !c.is_zero())
        .collect()
}

/// Searches for a monomial `x^p t^q` (site 0) on which the operator acts
/// nonzero, inside the faithfulness bound. `None` means no witness exists in
/// the searched box, which for a nonzero normal form indicates a bug.
pub fn faithfulness_witness(a: &OperatorExpr) -> Option<(u32, u32)> {
    if a.is_zero() {
        return None;
    }
    let p_bound = a.max_dx_order() + a.distinct_sx_amounts() as u32 + 2;
    let q_bound = a.max_dt_order() + a.distinct_st_amounts() as u32 + 2;
    for p in 0..=p_bound {
        for q in 0..=q_bound {
            let f = PolyFunction::monomial(0, p, q, Scalar::one());
            if !a.apply(&f).is_zero() {
                return Some((p, q));
            }
        }
    }
    None
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (key, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            // Site tags are omitted only when the whole term lives on
            // site 0; otherwise every group is tagged so the text
            // re-parses unambiguously.
            let tag_all = key.iter().any(|(s, _)| *s != 0);
            for (site, ops) in key {
                write!(f, " *")?;
                if ops.x_pow > 0 {
                    write!(f, " x")?;
                    if ops.x_pow > 1 {
                        write!(f, "^{}", ops.x_pow)?;
                    }
                }
                if ops.t_pow > 0 {
                    write!(f, " t")?;
                    if ops.t_pow > 1 {
                        write!(f, "^{}", ops.t_pow)?;
                    }
                }
                if !ops.sx.is_zero() {
                    write!(f, " Sx[{}]", ops.sx)?;
                }
                if !ops.st.is_zero() {
                    write!(f, " St[{}]", ops.st)?;
                }
                if ops.dx_pow > 0 {
                    write!(f, " dx")?;
                    if ops.dx_pow > 1 {
                        write!(f, "^{}", ops.dx_pow)?;
                    }
                }
                if ops.dt_pow > 0 {
                    write!(f, " dt")?;
                    if ops.dt_pow > 1 {
                        write!(f, "^{}", ops.dt_pow)?;
                    }
                }
                if tag_all {
                    write!(f, " @{site}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    #[test]
    fn leibniz_rule() {
        // dx * x -> x*dx + 1
        let got = OperatorExpr::dx(0).mul(&OperatorExpr::x(0));
        let want = OperatorExpr::x(0).mul(&OperatorExpr::dx(0)).add(&OperatorExpr::one());
        assert_eq!(got, want);
        let via_normalize = normalize(&[(Atom::Dx, 0), (Atom::X, 0)]);
        assert_eq!(via_normalize, want);
    }

    #[test]
    fn shift_conjugation() {
        // Sx[1] * x -> (x + z) * Sx[1]
        let got = OperatorExpr::sx_i(0, 1).mul(&OperatorExpr::x(0));
        let want = OperatorExpr::x(0)
            .add(&OperatorExpr::scalar(Scalar::z()))
            .mul(&OperatorExpr::sx_i(0, 1));
        assert_eq!(got, want);
    }

    #[test]
    fn unit_and_inverse_shift() {
        let a = OperatorExpr::x(0).mul(&OperatorExpr::dt(0)).add(&OperatorExpr::sx_i(0, 2));
        assert_eq!(OperatorExpr::one().mul(&a), a);
        assert_eq!(a.mul(&OperatorExpr::one()), a);
        assert_eq!(
            OperatorExpr::sx_i(0, 1).mul(&OperatorExpr::sx_i(0, -1)),
            OperatorExpr::one()
        );
    }

    #[test]
    fn partials_commute() {
        assert!(OperatorExpr::dx(0).commutator(&OperatorExpr::dt(0)).is_zero());
        assert!(OperatorExpr::x(0).commutator(&OperatorExpr::t(0)).is_zero());
        assert!(OperatorExpr::dx(0).commutator(&OperatorExpr::sx_i(0, 3)).is_zero());
        // Distinct sites always commute.
        assert!(OperatorExpr::dx(1).commutator(&OperatorExpr::x(2)).is_zero());
    }

    #[test]
    fn divided_difference_on_x_squared() {
        // Dx = (1 - Sx[-1]) / z; Dx^2 applied to x^2 gives the constant 2.
        let dxop = OperatorExpr::one()
            .sub(&OperatorExpr::sx_i(0, -1))
            .scale(&Scalar::z().inv().unwrap());
        let f = PolyFunction::monomial(0, 2, 0, Scalar::one());
        let once = dxop.apply(&f);
        let twice = dxop.apply(&once);
        assert_eq!(twice, PolyFunction::constant(Scalar::int(2)));
        // Same result through the operator product.
        let composed = dxop.mul(&dxop).apply(&f);
        assert_eq!(composed, twice);
    }

    #[test]
    fn shift_action_on_polynomial() {
        // Sx[1] on x^2 -> x^2 + 2 z x + z^2
        let got = OperatorExpr::sx_i(0, 1).apply(&PolyFunction::monomial(0, 2, 0, Scalar::one()));
        let want = PolyFunction::monomial(0, 2, 0, Scalar::one())
            .add(&PolyFunction::monomial(0, 1, 0, Scalar::z().mul(&Scalar::int(2))))
            .add(&PolyFunction::constant(Scalar::z().mul(&Scalar::z())));
        assert_eq!(got, want);
    }

    #[test]
    fn action_is_a_homomorphism_on_samples() {
        let a = OperatorExpr::x(0).mul(&OperatorExpr::dx(0)).add(&OperatorExpr::sx_i(0, 1));
        let b = OperatorExpr::t(0).mul(&OperatorExpr::dt(0)).sub(&OperatorExpr::dx(0).scale(&s(1, 2)));
        let f = PolyFunction::monomial(0, 2, 1, s(3, 1)).add(&PolyFunction::monomial(0, 0, 2, s(-1, 2)));
        assert_eq!(a.mul(&b).apply(&f), a.apply(&b.apply(&f)));
    }

    #[test]
    fn expand_shift_series() {
        // Sx[1] to order 2: 1 + z dx + z^2 dx^2 / 2
        let parts = OperatorExpr::sx_i(0, 1).expand_in_z(2).unwrap();
        assert_eq!(parts[0], OperatorExpr::one());
        assert_eq!(parts[1], OperatorExpr::dx(0));
        assert_eq!(parts[2], OperatorExpr::dx(0).mul(&OperatorExpr::dx(0)).scale(&s(1, 2)));
    }

    #[test]
    fn expand_divided_difference() {
        // (1 - Sx[-1])/z -> dx at order 0
        let dxop = OperatorExpr::one()
            .sub(&OperatorExpr::sx_i(0, -1))
            .scale(&Scalar::z().inv().unwrap());
        let parts = dxop.expand_in_z(0).unwrap();
        assert_eq!(parts[0], OperatorExpr::dx(0));
    }

    #[test]
    fn expand_detects_pole() {
        // (1 - Sx[1]) / z^2 has a 1/z pole after expansion.
        let op = OperatorExpr::one()
            .sub(&OperatorExpr::sx_i(0, 1))
            .scale(&Scalar::z().pow(-2).unwrap());
        assert_eq!(op.expand_in_z(0), Err(OpError::PoleAtZero(-1)));
    }

    #[test]
    fn expand_respects_products() {
        let a = OperatorExpr::x(0).mul(&OperatorExpr::sx_i(0, 1));
        let b = OperatorExpr::dx(0).add(&OperatorExpr::sx_i(0, -2).scale(&s(1, 3)));
        let n = 3u32;
        let ab = a.mul(&b).expand_in_z(n).unwrap();
        let ea = a.expand_in_z(n).unwrap();
        let eb = b.expand_in_z(n).unwrap();
        for k in 0..=n as usize {
            let mut acc = OperatorExpr::zero();
            for i in 0..=k {
                acc = acc.add(&ea[i].mul(&eb[k - i]));
            }
            assert_eq!(ab[k], acc, "coefficient of z^{k}");
        }
    }

    #[test]
    fn substitution_on_operators() {
        let op = OperatorExpr::sx_i(0, 1).scale(&Scalar::m());
        let got = op.substitute(&[(Symbol::M, s(1, 2))]).unwrap();
        assert_eq!(got, OperatorExpr::sx_i(0, 1).scale(&s(1, 2)));
        let pole = OperatorExpr::one()
            .sub(&OperatorExpr::sx_i(0, 1))
            .scale(&Scalar::z().inv().unwrap());
        assert_eq!(
            pole.substitute(&[(Symbol::Z, Scalar::zero())]),
            Err(ScalarError::DenominatorVanishes)
        );
    }

    #[test]
    fn faithfulness_witness_exists_for_samples() {
        let samples = [
            OperatorExpr::dx(0),
            OperatorExpr::sx_i(0, 1).sub(&OperatorExpr::sx_i(0, -1)),
            OperatorExpr::x(0).mul(&OperatorExpr::dt(0)).sub(&OperatorExpr::one()),
        ];
        for a in &samples {
            assert!(faithfulness_witness(a).is_some(), "no witness for {a}");
        }
        assert!(faithfulness_witness(&OperatorExpr::zero()).is_none());
    }

    #[test]
    fn display_round_shape() {
        let op = OperatorExpr::x(0)
            .mul(&OperatorExpr::dx(0))
            .add(&OperatorExpr::sx(0, rat(-1, 2)).scale(&s(-1, 3)));
        assert_eq!(format!("{op}"), "-1/3 * Sx[-1/2] + 1 * x dx");
    }
}
