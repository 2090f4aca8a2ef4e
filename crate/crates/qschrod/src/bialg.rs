//! Finite-dimensional Lie bialgebra layer: classical r-matrices, Schouten
//! brackets, cocommutators, the cocycle and co-Jacobi conditions, the
//! three-parameter r-matrix family, and first-order consistency with the
//! quantum coproducts.
//!
//! The wedge convention is `a /\ b = a (x) b - b (x) a`, fixed globally;
//! bivectors store full antisymmetric coefficient matrices. The Schouten
//! bracket `[[r, r]]` is computed as the classical Yang-Baxter tensor
//! `[r12, r13] + [r12, r23] + [r13, r23]` and checked for total antisymmetry
//! before being returned.

use thiserror::Error;

use crate::scalar::{Scalar, ScalarError, Symbol};
use crate::tables::{coproduct, AbstractAtom, AlgCase, GenName, GroupKind, TableError};

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum BialgError {
    #[error("the r-matrix family diverges at this parameter point")]
    DivergentLimit,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("first-order term with more than one generator per tensor leg")]
    NonLinearFirstOrder,
}

/// One bracket table row: `[x, y] = sum of coeff * target`.
type BracketRow = (GenName, GenName, Vec<(Scalar, GenName)>);

/// Finite-dimensional Lie algebra given by structure constants
/// `[e_i, e_j] = sum_k c[i][j][k] e_k`. Antisymmetry and the Jacobi identity
/// are verified at construction.
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    pub names: Vec<GenName>,
    c: Vec<Vec<Vec<Scalar>>>,
}

impl LieAlgebra {
    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn index(&self, n: GenName) -> usize {
        self.names.iter().position(|x| *x == n).expect("generator belongs to the algebra")
    }

    /// Structure constant `c^k_{ij}`.
    pub fn sc(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.c[i][j][k]
    }

    fn from_brackets(names: Vec<GenName>, brackets: &[BracketRow]) -> Self {
        let dim = names.len();
        let mut c = vec![vec![vec![Scalar::zero(); dim]; dim]; dim];
        let idx = |n: GenName| names.iter().position(|x| *x == n).expect("known generator");
        for (x, y, rhs) in brackets {
            let (i, j) = (idx(*x), idx(*y));
            for (coeff, target) in rhs {
                let k = idx(*target);
                c[i][j][k] = c[i][j][k].add(coeff);
                c[j][i][k] = c[j][i][k].sub(coeff);
            }
        }
        let alg = LieAlgebra { names, c };
        alg.verify();
        alg
    }

    fn verify(&self) {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    assert_eq!(
                        self.c[i][j][k],
                        self.c[j][i][k].neg(),
                        "structure constants must be antisymmetric"
                    );
                }
            }
        }
        // Jacobi: sum over cyclic (i,j,k) of [e_i, [e_j, e_k]] = 0.
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut acc = Scalar::zero();
                        for m in 0..n {
                            acc = acc
                                .add(&self.c[j][k][m].mul(&self.c[i][m][l]))
                                .add(&self.c[k][i][m].mul(&self.c[j][m][l]))
                                .add(&self.c[i][j][m].mul(&self.c[k][m][l]));
                        }
                        assert!(acc.is_zero(), "Jacobi identity fails at ({i},{j},{k},{l})");
                    }
                }
            }
        }
    }

    /// The classical Schrodinger algebra in the basis `(M, P, H, K, D, C)`:
    /// the common `z -> 0` limit of both deformed commutator tables.
    pub fn schrodinger() -> Self {
        use GenName::*;
        let one = Scalar::one;
        Self::from_brackets(
            vec![M, P, H, K, D, C],
            &[
                (D, P, vec![(one().neg(), P)]),
                (D, K, vec![(one(), K)]),
                (K, P, vec![(one(), M)]),
                (D, H, vec![(Scalar::int(-2), H)]),
                (D, C, vec![(Scalar::int(2), C)]),
                (H, C, vec![(one(), D)]),
                (P, C, vec![(one().neg(), K)]),
                (K, H, vec![(one(), P)]),
            ],
        )
    }

    /// sl(2) in the basis `(J3, J+, J-)`.
    pub fn sl2() -> Self {
        use GenName::*;
        Self::from_brackets(
            vec![J3, Jp, Jm],
            &[
                (J3, Jp, vec![(Scalar::int(2), Jp)]),
                (J3, Jm, vec![(Scalar::int(-2), Jm)]),
                (Jp, Jm, vec![(Scalar::one(), J3)]),
            ],
        )
    }
}

/// Element of the second exterior power: antisymmetric coefficient matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Bivector {
    r: Vec<Vec<Scalar>>,
}

impl Bivector {
    pub fn zero(dim: usize) -> Self {
        Bivector { r: vec![vec![Scalar::zero(); dim]; dim] }
    }

    pub fn dim(&self) -> usize {
        self.r.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        &self.r[i][j]
    }

    pub fn is_zero(&self) -> bool {
        self.r.iter().all(|row| row.iter().all(Scalar::is_zero))
    }

    /// Builds from wedge components `coeff * a /\ b`.
    pub fn from_wedges(alg: &LieAlgebra, wedges: &[(GenName, GenName, Scalar)]) -> Self {
        let mut out = Self::zero(alg.dim());
        for (a, b, c) in wedges {
            let (i, j) = (alg.index(*a), alg.index(*b));
            out.r[i][j] = out.r[i][j].add(c);
            out.r[j][i] = out.r[j][i].sub(c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.dim();
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.r[i][j] = self.r[i][j].add(&other.r[i][j]);
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.dim();
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.r[i][j] = self.r[i][j].sub(&other.r[i][j]);
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Bivector { r: self.r.iter().map(|row| row.iter().map(|x| x.mul(c)).collect()).collect() }
    }

    pub fn substitute(&self, s: Symbol, v: &Scalar) -> Result<Self, ScalarError> {
        let mut out = Self::zero(self.dim());
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                out.r[i][j] = self.r[i][j].substitute(s, v)?;
            }
        }
        Ok(out)
    }

    /// Nonzero wedge components `(i, j, coeff)` with `i < j`.
    pub fn components(&self) -> Vec<(usize, usize, Scalar)> {
        let mut out = Vec::new();
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                if !self.r[i][j].is_zero() {
                    out.push((i, j, self.r[i][j].clone()));
                }
            }
        }
        out
    }
}

/// Element of the third exterior power: totally antisymmetric cube.
#[derive(Clone, Debug, PartialEq)]
pub struct Trivector {
    t: Vec<Vec<Vec<Scalar>>>,
}

impl Trivector {
    pub fn zero(dim: usize) -> Self {
        Trivector { t: vec![vec![vec![Scalar::zero(); dim]; dim]; dim] }
    }

    pub fn dim(&self) -> usize {
        self.t.len()
    }

    pub fn entry(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.t[i][j][k]
    }

    pub fn is_zero(&self) -> bool {
        self.t.iter().flatten().flatten().all(Scalar::is_zero)
    }

    /// Nonzero ordered components `(i, j, k, coeff)` with `i < j < k`.
    pub fn components(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if !self.t[i][j][k].is_zero() {
                        out.push((i, j, k, self.t[i][j][k].clone()));
                    }
                }
            }
        }
        out
    }
}

/// Schouten bracket `[[r, r]]`: the classical Yang-Baxter tensor. Vanishing
/// identically is the CYBE, i.e. triangularity of `r`.
pub fn schouten(alg: &LieAlgebra, r: &Bivector) -> Trivector {
    let n = alg.dim();
    let mut t = Trivector::zero(n);
    for a in 0..n {
        for b in 0..n {
            if r.r[a][b].is_zero() {
                continue;
            }
            for c in 0..n {
                for d in 0..n {
                    if r.r[c][d].is_zero() {
                        continue;
                    }
                    let rr = r.r[a][b].mul(&r.r[c][d]);
                    for e in 0..n {
                        // [r12, r13]: [e_a, e_c] (x) e_b (x) e_d
                        let s1 = alg.sc(a, c, e);
                        if !s1.is_zero() {
                            t.t[e][b][d] = t.t[e][b][d].add(&rr.mul(s1));
                        }
                        // [r12, r23]: e_a (x) [e_b, e_c] (x) e_d
                        let s2 = alg.sc(b, c, e);
                        if !s2.is_zero() {
                            t.t[a][e][d] = t.t[a][e][d].add(&rr.mul(s2));
                        }
                        // [r13, r23]: e_a (x) e_c (x) [e_b, e_d]
                        let s3 = alg.sc(b, d, e);
                        if !s3.is_zero() {
                            t.t[a][c][e] = t.t[a][c][e].add(&rr.mul(s3));
                        }
                    }
                }
            }
        }
    }
    // The bracket of an antisymmetric r lies in the third exterior power.
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                assert_eq!(t.t[i][j][k], t.t[j][i][k].neg(), "Schouten bracket not antisymmetric");
                assert_eq!(t.t[i][j][k], t.t[i][k][j].neg(), "Schouten bracket not antisymmetric");
            }
        }
    }
    t
}

/// Cocommutator family `delta(e_i) = [e_i (x) 1 + 1 (x) e_i, r]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cocommutator {
    pub deltas: Vec<Bivector>,
}

/// Computes the coboundary cocommutator of `r`:
/// `delta(e_i)^{jk} = sum_l (c^j_{il} r^{lk} - c^k_{il} r^{lj})`.
pub fn cocommutator_from_r(alg: &LieAlgebra, r: &Bivector) -> Cocommutator {
    let n = alg.dim();
    let mut deltas = Vec::with_capacity(n);
    for i in 0..n {
        let mut d = Bivector::zero(n);
        for j in 0..n {
            for k in 0..n {
                let mut acc = Scalar::zero();
                for l in 0..n {
                    acc = acc
                        .add(&alg.sc(i, l, j).mul(&r.r[l][k]))
                        .sub(&alg.sc(i, l, k).mul(&r.r[l][j]));
                }
                d.r[j][k] = acc;
            }
        }
        deltas.push(d);
    }
    Cocommutator { deltas }
}

/// Leg-wise adjoint action of basis element `i` on a bivector.
fn ad_bivector(alg: &LieAlgebra, i: usize, b: &Bivector) -> Bivector {
    let n = alg.dim();
    let mut out = Bivector::zero(n);
    for a in 0..n {
        for c in 0..n {
            let mut acc = Scalar::zero();
            for l in 0..n {
                acc = acc
                    .add(&alg.sc(i, l, a).mul(&b.r[l][c]))
                    .add(&alg.sc(i, l, c).mul(&b.r[a][l]));
            }
            out.r[a][c] = acc;
        }
    }
    out
}

/// Leg-wise adjoint action of basis element `i` on a trivector.
fn ad_trivector(alg: &LieAlgebra, i: usize, t: &Trivector) -> Trivector {
    let n = alg.dim();
    let mut out = Trivector::zero(n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let mut acc = Scalar::zero();
                for l in 0..n {
                    acc = acc
                        .add(&alg.sc(i, l, a).mul(&t.t[l][b][c]))
                        .add(&alg.sc(i, l, b).mul(&t.t[a][l][c]))
                        .add(&alg.sc(i, l, c).mul(&t.t[a][b][l]));
                }
                out.t[a][b][c] = acc;
            }
        }
    }
    out
}

/// Checks ad-invariance of a trivector under every basis element; for a
/// coboundary cocommutator this is equivalent to the co-Jacobi identity.
pub fn ad_invariant(alg: &LieAlgebra, t: &Trivector) -> bool {
    (0..alg.dim()).all(|i| ad_trivector(alg, i, t).is_zero())
}

/// Direct co-Jacobi check: the cyclic sum of `(delta (x) id) delta(x)`
/// vanishes for every basis element.
pub fn co_jacobi_check(alg: &LieAlgebra, delta: &Cocommutator) -> bool {
    let n = alg.dim();
    for i in 0..n {
        // B[a][b][k] = sum_j delta_i^{jk} delta_j^{ab}
        let mut b = Trivector::zero(n);
        for j in 0..n {
            for k in 0..n {
                let djk = &delta.deltas[i].r[j][k];
                if djk.is_zero() {
                    continue;
                }
                for a in 0..n {
                    for c in 0..n {
                        let v = djk.mul(&delta.deltas[j].r[a][c]);
                        b.t[a][c][k] = b.t[a][c][k].add(&v);
                    }
                }
            }
        }
        // Cyclic sum over the three tensor legs.
        for a in 0..n {
            for c in 0..n {
                for k in 0..n {
                    let total = b.t[a][c][k].add(&b.t[k][a][c]).add(&b.t[c][k][a]);
                    if !total.is_zero() {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// 1-cocycle condition: `delta([x, y]) = ad_x delta(y) - ad_y delta(x)`;
/// automatic for coboundary cocommutators, verified as an engine self-test.
pub fn cocycle_check(alg: &LieAlgebra, delta: &Cocommutator) -> bool {
    let n = alg.dim();
    for i in 0..n {
        for j in 0..n {
            // delta([e_i, e_j])
            let mut lhs = Bivector::zero(n);
            for k in 0..n {
                let c = alg.sc(i, j, k);
                if !c.is_zero() {
                    lhs = lhs.add(&delta.deltas[k].scale(c));
                }
            }
            let rhs = ad_bivector(alg, i, &delta.deltas[j]).sub(&ad_bivector(alg, j, &delta.deltas[i]));
            if !lhs.sub(&rhs).is_zero() {
                return false;
            }
        }
    }
    true
}

fn s(n: i64, d: i64) -> Scalar {
    Scalar::ratio(n, d)
}

/// Space-case classical r-matrix `z P /\ D'` in basis coordinates.
pub fn r_space(alg: &LieAlgebra) -> Bivector {
    use GenName::*;
    let z = Scalar::z;
    Bivector::from_wedges(
        alg,
        &[(P, D, z()), (P, M, z().mul(&s(1, 2)))],
    )
}

/// Time-case classical r-matrix `2z H /\ D'` in basis coordinates.
pub fn r_time(alg: &LieAlgebra) -> Bivector {
    use GenName::*;
    let z = Scalar::z;
    Bivector::from_wedges(
        alg,
        &[(H, D, z().mul(&s(2, 1))), (H, M, z())],
    )
}

/// Jordanian sl(2) r-matrix `(tau/2) J+ /\ J3 = -2z J+ /\ J3`.
pub fn r_sl2(alg: &LieAlgebra) -> Bivector {
    use GenName::*;
    Bivector::from_wedges(alg, &[(Jp, J3, Scalar::z().mul(&s(-2, 1)))])
}

/// `num / den`, treating a vanishing numerator as exactly zero and mapping
/// division by a vanishing denominator to [`BialgError::DivergentLimit`].
fn div_or_zero(num: Scalar, den: &Scalar) -> Result<Scalar, BialgError> {
    if num.is_zero() {
        return Ok(Scalar::zero());
    }
    num.div(den).map_err(|_| BialgError::DivergentLimit)
}

/// The three-parameter classical r-matrix family, built at the given
/// parameter values (symbolic or numeric). Requires `z1 != 0`; some
/// components also need `lambda != 0` unless their numerators vanish.
pub fn r_three_parameter(
    alg: &LieAlgebra,
    z1: &Scalar,
    z2: &Scalar,
    lambda: &Scalar,
) -> Result<Bivector, BialgError> {
    use GenName::*;
    if z1.is_zero() {
        return Err(BialgError::DivergentLimit);
    }
    let two = Scalar::int(2);
    let l2 = lambda.mul(lambda);
    let b2 = z2.mul(z2);
    let a2 = z1.mul(z1);
    let wedges = vec![
        // 2 z1 H /\ D' and z2 P /\ D'
        (H, D, z1.mul(&two)),
        (H, M, z1.clone()),
        (P, D, z2.clone()),
        (P, M, z2.mul(&s(1, 2))),
        // -lambda H /\ C
        (H, C, lambda.neg()),
        // -(lambda^2 / 8 z1) C /\ D
        (C, D, div_or_zero(l2.neg(), &z1.mul(&s(8, 1)))?),
        // -(2 z1 z2 / lambda) P /\ H
        (P, H, div_or_zero(z1.mul(z2).mul(&two).neg(), lambda)?),
        // (lambda z2 / 8 z1) K /\ D
        (K, D, div_or_zero(lambda.mul(z2), &z1.mul(&s(8, 1)))?),
        // -(lambda^2 z2 / 16 z1^2) K /\ C
        (K, C, div_or_zero(l2.mul(z2).neg(), &a2.mul(&s(16, 1)))?),
        // -(3 lambda z2 / 8 z1) P /\ C
        (P, C, div_or_zero(lambda.mul(z2).mul(&s(3, 1)).neg(), &z1.mul(&s(8, 1)))?),
        // (lambda/4 + 3 z2^2 / 16 z1) K /\ P
        (
            K,
            P,
            lambda
                .mul(&s(1, 4))
                .add(&div_or_zero(b2.mul(&s(3, 1)), &z1.mul(&s(16, 1)))?),
        ),
        // (3 lambda z2 / 16 z1 + z2^3 / 32 z1^2) K /\ M
        (
            K,
            M,
            div_or_zero(lambda.mul(z2).mul(&s(3, 1)), &z1.mul(&s(16, 1)))?
                .add(&div_or_zero(b2.mul(z2), &a2.mul(&s(32, 1)))?),
        ),
        // -(lambda^2 / 16 z1 + lambda z2^2 / 32 z1^2) M /\ C
        (
            M,
            C,
            div_or_zero(l2, &z1.mul(&s(16, 1)))?
                .add(&div_or_zero(lambda.mul(&b2), &a2.mul(&s(32, 1)))?)
                .neg(),
        ),
        // (lambda/4 + z2^2 / 16 z1) M /\ D
        (
            M,
            D,
            lambda.mul(&s(1, 4)).add(&div_or_zero(b2, &z1.mul(&s(16, 1)))?),
        ),
    ];
    Ok(Bivector::from_wedges(alg, &wedges))
}

/// Classification of a point of the three-parameter family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SaClass {
    /// `[[r, r]] = 0`: triangular, the non-standard branch.
    Triangular,
    /// `[[r, r]] != 0` but ad-invariant: the standard branch.
    Standard,
}

/// Full classification report for one parameter point.
#[derive(Clone, Debug)]
pub struct SaReport {
    pub class: SaClass,
    pub schouten: Trivector,
    pub schouten_ad_invariant: bool,
    pub cocycle_pass: bool,
    pub co_jacobi_pass: bool,
}

/// Builds the three-parameter r-matrix at the given point, computes its
/// Schouten bracket and classifies the point as triangular (non-standard)
/// or standard. Also verifies the coboundary-bialgebra conditions.
pub fn classify_sa(z1: &Scalar, z2: &Scalar, lambda: &Scalar) -> Result<SaReport, BialgError> {
    let alg = LieAlgebra::schrodinger();
    let r = r_three_parameter(&alg, z1, z2, lambda)?;
    let sch = schouten(&alg, &r);
    let class = if sch.is_zero() { SaClass::Triangular } else { SaClass::Standard };
    let delta = cocommutator_from_r(&alg, &r);
    Ok(SaReport {
        schouten_ad_invariant: ad_invariant(&alg, &sch),
        cocycle_pass: cocycle_check(&alg, &delta),
        co_jacobi_pass: co_jacobi_check(&alg, &delta),
        class,
        schouten: sch,
    })
}

/// Case selector for the first-order consistency check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FirstOrderCase {
    Space,
    Time,
    Sl2,
}

impl FirstOrderCase {
    pub const ALL: [FirstOrderCase; 3] =
        [FirstOrderCase::Space, FirstOrderCase::Time, FirstOrderCase::Sl2];

    pub fn label(self) -> &'static str {
        match self {
            FirstOrderCase::Space => "space",
            FirstOrderCase::Time => "time",
            FirstOrderCase::Sl2 => "sl2",
        }
    }

    fn algebra(self) -> LieAlgebra {
        match self {
            FirstOrderCase::Space | FirstOrderCase::Time => LieAlgebra::schrodinger(),
            FirstOrderCase::Sl2 => LieAlgebra::sl2(),
        }
    }

    fn coproduct_case(self) -> AlgCase {
        match self {
            FirstOrderCase::Space => AlgCase::Space,
            FirstOrderCase::Time => AlgCase::Time,
            FirstOrderCase::Sl2 => AlgCase::Sl2Mapped,
        }
    }

    fn r_matrix(self, alg: &LieAlgebra) -> Bivector {
        match self {
            FirstOrderCase::Space => r_space(alg),
            FirstOrderCase::Time => r_time(alg),
            FirstOrderCase::Sl2 => r_sl2(alg),
        }
    }

    /// Generator a group-like exponential contributes at first order.
    fn group_like_gen(self, kind: GroupKind) -> GenName {
        match (self, kind) {
            (FirstOrderCase::Sl2, GroupKind::H) => GenName::Jp,
            (_, GroupKind::P) => GenName::P,
            (_, GroupKind::H) => GenName::H,
        }
    }
}

/// Extracts the skew first-order part of the coproduct of each generator
/// and compares it with the cocommutator computed from the case's classical
/// r-matrix. Returns per-generator pass flags.
pub fn first_order_consistency(case: FirstOrderCase) -> Result<Vec<(GenName, bool)>, BialgError> {
    let alg = case.algebra();
    let alg_case = case.coproduct_case();
    let r = case.r_matrix(&alg);
    let delta = cocommutator_from_r(&alg, &r);
    let z = Scalar::z();
    let mut out = Vec::new();
    for gen in alg_case.generators() {
        let cop = coproduct(alg_case, *gen)?;
        // First-order contributions keyed by the generator words on the two
        // legs; anything that is not a single generator per leg must cancel
        // in the grand total.
        let mut collected: std::collections::BTreeMap<(Vec<GenName>, Vec<GenName>), Scalar> =
            std::collections::BTreeMap::new();
        for (coeff, legs) in cop.terms() {
            // Expand both leg words to order one in z: a generator is order
            // zero, a group-like is 1 + amount*z*(its generator).
            let la = expand_leg(case, &legs[0]);
            let lb = expand_leg(case, &legs[1]);
            for (ca, orda, gena) in &la {
                for (cb, ordb, genb) in &lb {
                    let word_order = orda + ordb;
                    if word_order > 1 {
                        continue;
                    }
                    let c = coeff.mul(ca).mul(cb);
                    // Coefficient of z^1 in c * z^word_order.
                    let (off, series) = c.z_series(1 - word_order);
                    let want = 1 - word_order - off;
                    if want < 0 {
                        continue;
                    }
                    let c1 = match series.get(want as usize) {
                        Some(v) if !v.is_zero() => v.clone(),
                        _ => continue,
                    };
                    let key = (gena.clone(), genb.clone());
                    let entry = collected.entry(key).or_insert_with(Scalar::zero);
                    *entry = entry.add(&c1);
                }
            }
        }
        let mut first_order = Bivector::zero(alg.dim());
        for ((gena, genb), total) in collected {
            if total.is_zero() {
                continue;
            }
            if gena.len() == 1 && genb.len() == 1 {
                let i = alg.index(gena[0]);
                let j = alg.index(genb[0]);
                first_order.r[i][j] = first_order.r[i][j].add(&total);
            } else {
                return Err(BialgError::NonLinearFirstOrder);
            }
        }
        // Skew-symmetrize and restore the z factor.
        let mut skew = Bivector::zero(alg.dim());
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                skew.r[i][j] = first_order.r[i][j].sub(&first_order.r[j][i]).mul(&z);
            }
        }
        let expected = &delta.deltas[alg.index(*gen)];
        out.push((*gen, skew == *expected));
    }
    Ok(out)
}

/// Expands one abstract word to first order: returns
/// `(coefficient, z-order, generators)` with at most order one kept.
fn expand_leg(case: FirstOrderCase, word: &crate::tables::Word) -> Vec<(Scalar, i32, Vec<GenName>)> {
    let mut acc: Vec<(Scalar, i32, Vec<GenName>)> = vec![(Scalar::one(), 0, Vec::new())];
    for atom in word {
        let choices: Vec<(Scalar, i32, Option<GenName>)> = match atom {
            AbstractAtom::Gen(g) => vec![(Scalar::one(), 0, Some(*g))],
            AbstractAtom::GroupLike(kind, a) => vec![
                (Scalar::one(), 0, None),
                (
                    Scalar::ratio(*a.numer(), *a.denom()),
                    1,
                    Some(case.group_like_gen(*kind)),
                ),
            ],
        };
        let mut next = Vec::new();
        for (c, ord, gens) in &acc {
            for (c2, ord2, gen) in &choices {
                let ord_total = ord + ord2;
                if ord_total > 1 {
                    continue;
                }
                let mut gens2 = gens.clone();
                if let Some(g) = gen {
                    gens2.push(*g);
                }
                next.push((c.mul(c2), ord_total, gens2));
            }
        }
        acc = next;
    }
    acc
}
