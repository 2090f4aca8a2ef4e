//! Nonlinear basis maps: the space map, the time map, and the jordanian
//! sl(2) map. Each map rewrites the deformed generators into a new basis
//! whose commutators are classical while the coproduct stays deformed.
//!
//! Maps are applied at the realized level: the map's abstract words are
//! evaluated in the old case's differential-difference realization and the
//! results are compared, in normal form, against the mapped realization
//! tables.

use thiserror::Error;

use crate::hopf::{check_coassociativity, check_homomorphism, HopfError};
use crate::opalg::OperatorExpr;
use crate::scalar::{Scalar, Symbol};
use crate::tables::{
    casimir_realized, realize_at, relation_rhs, AbstractExpr, AlgCase, GenName, TableError,
};

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum MapError {
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Hopf(#[from] HopfError),
    #[error("case {0} has no basis map")]
    NoMap(AlgCase),
}

/// Which of the three maps to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapCase {
    Space,
    Time,
    Sl2,
}

impl MapCase {
    pub const ALL: [MapCase; 3] = [MapCase::Space, MapCase::Time, MapCase::Sl2];

    pub fn label(self) -> &'static str {
        match self {
            MapCase::Space => "space",
            MapCase::Time => "time",
            MapCase::Sl2 => "sl2",
        }
    }

    pub fn from_label(s: &str) -> Option<MapCase> {
        MapCase::ALL.iter().copied().find(|c| c.label() == s)
    }

    /// Source case whose realization feeds the map.
    pub fn old_case(self) -> AlgCase {
        match self {
            MapCase::Space => AlgCase::Space,
            MapCase::Time => AlgCase::Time,
            MapCase::Sl2 => AlgCase::Sl2Deformed,
        }
    }

    /// Target case whose tables describe the mapped basis.
    pub fn new_case(self) -> AlgCase {
        match self {
            MapCase::Space => AlgCase::ClassicalSpace,
            MapCase::Time => AlgCase::ClassicalTime,
            MapCase::Sl2 => AlgCase::Sl2Mapped,
        }
    }
}

/// Basis map: target generator -> abstract expression in old generators and
/// group-likes. The deformation parameter aliases are fixed at construction
/// (`sigma = -z` for the space map, `tau = -4z` for the time and sl(2)
/// maps), so the stored words involve `z` only.
#[derive(Clone, Debug)]
pub struct BasisMap {
    pub case: MapCase,
    pub entries: Vec<(GenName, AbstractExpr)>,
}

fn s(n: i64, d: i64) -> Scalar {
    Scalar::ratio(n, d)
}

fn z() -> Scalar {
    Scalar::z()
}

fn inv_z() -> Scalar {
    Scalar::z().inv().expect("z is nonzero")
}

fn g(n: GenName) -> AbstractExpr {
    AbstractExpr::gen(n)
}

fn glp(a: i64) -> AbstractExpr {
    AbstractExpr::group_like(crate::tables::GroupKind::P, a)
}

fn glh(a: i64) -> AbstractExpr {
    AbstractExpr::group_like(crate::tables::GroupKind::H, a)
}

fn dprime() -> AbstractExpr {
    g(GenName::D).add(&g(GenName::M).scale(&s(1, 2)))
}

/// Builds the abstract basis map for a case.
pub fn basis_map(case: MapCase) -> BasisMap {
    use GenName::*;
    let entries = match case {
        MapCase::Space => vec![
            (H, g(H)),
            // (1 - e^{-zP})/z
            (P, AbstractExpr::one().sub(&glp(-1)).scale(&inv_z())),
            (M, g(M)),
            // D + (1 - e^{zP})/2
            (D, g(D).add(&AbstractExpr::one().sub(&glp(1)).scale(&s(1, 2)))),
            // -2K - z M e^{zP}
            (K, g(K).scale(&s(-2, 1)).sub(&g(M).mul(&glp(1)).scale(&z()))),
            // C - (z/2) K D' + (z/2) K e^{zP} - (z^2/8) M e^{2zP}
            (
                C,
                g(C).sub(&g(K).mul(&dprime()).scale(&z().mul(&s(1, 2))))
                    .add(&g(K).mul(&glp(1)).scale(&z().mul(&s(1, 2))))
                    .sub(&g(M).mul(&glp(2)).scale(&z().mul(&z()).mul(&s(1, 8)))),
            ),
        ],
        MapCase::Time => vec![
            // (1 - e^{-4zH})/(4z)
            (H, AbstractExpr::one().sub(&glh(-4)).scale(&inv_z().mul(&s(1, 4)))),
            (P, g(P)),
            (M, g(M)),
            // D + 2(1 - e^{4zH})
            (D, g(D).add(&AbstractExpr::one().sub(&glh(4)).scale(&s(2, 1)))),
            // -2K - 8z P e^{4zH}
            (K, g(K).scale(&s(-2, 1)).sub(&g(P).mul(&glh(4)).scale(&z().mul(&s(8, 1))))),
            // C + z D'^2 - 4z D e^{4zH}
            (
                C,
                g(C).add(&dprime().mul(&dprime()).scale(&z()))
                    .sub(&g(D).mul(&glh(4)).scale(&z().mul(&s(4, 1)))),
            ),
        ],
        // The sl(2) map is the time map at vanishing central charge, with
        // J3 = -D_new, J+ = H_new, J- = -C_new.
        MapCase::Sl2 => vec![
            (Jp, AbstractExpr::one().sub(&glh(-4)).scale(&inv_z().mul(&s(1, 4)))),
            (
                J3,
                g(D).add(&AbstractExpr::one().sub(&glh(4)).scale(&s(2, 1))).neg(),
            ),
            (
                Jm,
                g(C).add(&g(D).mul(&g(D)).scale(&z()))
                    .sub(&g(D).mul(&glh(4)).scale(&z().mul(&s(4, 1))))
                    .neg(),
            ),
        ],
    };
    BasisMap { case, entries }
}

/// Applies the map: realizes every target generator through the old case's
/// realization. Returns `(generator, mapped operator)` pairs.
pub fn apply_map(case: MapCase) -> Result<Vec<(GenName, OperatorExpr)>, MapError> {
    let map = basis_map(case);
    let old = case.old_case();
    map.entries
        .iter()
        .map(|(gen, expr)| {
            let op = crate::tables::realize_abstract(expr, old, 0)?;
            Ok((*gen, op))
        })
        .collect()
}

/// Per-generator comparison of the mapped operators against the target
/// case's realization table. All differences must be empty.
pub fn verify_map_soundness(case: MapCase) -> Result<Vec<(GenName, OperatorExpr)>, MapError> {
    let mapped = apply_map(case)?;
    let new = case.new_case();
    mapped
        .into_iter()
        .map(|(gen, op)| {
            let table = realize_at(gen, new, 0)?;
            Ok((gen, op.sub(&table)))
        })
        .collect()
}

/// Residual of one classical commutator check: the pair and the difference.
pub type PairResidual = ((GenName, GenName), OperatorExpr);

/// Verifies that the mapped generators obey the classical commutation
/// table of the target case, pair by pair. Returns residuals.
pub fn verify_classicalization(case: MapCase) -> Result<Vec<PairResidual>, MapError> {
    let mapped = apply_map(case)?;
    let new = case.new_case();
    let lookup = |n: GenName| -> &OperatorExpr {
        &mapped.iter().find(|(g, _)| *g == n).expect("generator mapped").1
    };
    let mut out = Vec::new();
    for (x, y) in new.pairs() {
        let lhs = lookup(x).commutator(lookup(y));
        // Realize the classical right-hand side through the mapped set.
        let rhs_abs = relation_rhs(new, x, y)?;
        let mut rhs = OperatorExpr::zero();
        for (c, w) in rhs_abs.terms() {
            let mut term = OperatorExpr::scalar(c.clone());
            for atom in w {
                let factor = match atom {
                    crate::tables::AbstractAtom::Gen(n) => lookup(*n).clone(),
                    other => crate::tables::realize_atom(other, new, 0)?,
                };
                term = term.mul(&factor);
            }
            rhs = rhs.add(&term);
        }
        out.push(((x, y), lhs.sub(&rhs)));
    }
    Ok(out)
}

/// Casimir transport under the map, two exact statements per case:
///
/// 1. substituting the map into the classical Casimir `P^2 - 2 M H`
///    reproduces the deformed Casimir of the old case;
/// 2. the classical Casimir of the mapped generators equals the discrete
///    Schrodinger operator assembled directly from divided differences.
pub fn verify_casimir_map(case: MapCase) -> Result<(OperatorExpr, OperatorExpr), MapError> {
    if case == MapCase::Sl2 {
        return Err(MapError::NoMap(AlgCase::Sl2Mapped));
    }
    let mapped = apply_map(case)?;
    let lookup = |n: GenName| -> &OperatorExpr {
        &mapped.iter().find(|(g, _)| *g == n).expect("generator mapped").1
    };
    let p = lookup(GenName::P);
    let m_op = lookup(GenName::M);
    let h = lookup(GenName::H);
    let classical = p.mul(p).sub(&m_op.mul(h).scale(&Scalar::int(2)));
    // 1. Against the old case's deformed Casimir.
    let deformed = casimir_realized(case.old_case())?;
    let first = classical.sub(&deformed);
    // 2. Against the discrete equation operator built from raw shifts.
    let direct = match case {
        MapCase::Space => {
            let dxop = OperatorExpr::one()
                .sub(&OperatorExpr::sx_i(0, -1))
                .scale(&inv_z());
            dxop.mul(&dxop)
                .sub(&OperatorExpr::dt(0).scale(&Scalar::m().mul(&Scalar::int(2))))
        }
        MapCase::Time => {
            let dtop = OperatorExpr::one()
                .sub(&OperatorExpr::st_i(0, -4))
                .scale(&inv_z().mul(&s(1, 4)));
            OperatorExpr::dx(0)
                .mul(&OperatorExpr::dx(0))
                .sub(&dtop.scale(&Scalar::m().mul(&Scalar::int(2))))
        }
        MapCase::Sl2 => unreachable!(),
    };
    let second = classical.sub(&direct);
    Ok((first, second))
}

/// Outcome of the sl(2) transformed-coproduct verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2CoproductReport {
    pub homomorphism_pass: bool,
    pub coassociativity_pass: bool,
    pub cocommutative_limit_pass: bool,
}

/// Runs the Hopf checks for the jordanian coproduct against the classical
/// sl(2) relations, plus the cocommutative limit at order zero.
pub fn verify_sl2_coproduct() -> Result<Sl2CoproductReport, MapError> {
    let case = AlgCase::Sl2Mapped;
    let mut hom = true;
    for (x, y) in case.pairs() {
        hom &= check_homomorphism(case, x, y)?.pass;
    }
    let mut coassoc = true;
    for g in case.generators() {
        coassoc &= check_coassociativity(case, *g)?.pass;
    }
    let mut limit = true;
    for g in case.generators() {
        let t = crate::hopf::realize_tensor(&crate::tables::coproduct(case, *g)?, case)?;
        let flipped = t.relabel_sites(&[(1, 2), (2, 1)]);
        let parts = t
            .sub(&flipped)
            .substitute(&[(Symbol::M, Scalar::zero())])
            .expect("no division by zero")
            .expand_in_z(0)
            .expect("coproduct legs are regular at z = 0");
        limit &= parts[0].is_zero();
    }
    Ok(Sl2CoproductReport {
        homomorphism_pass: hom,
        coassociativity_pass: coassoc,
        cocommutative_limit_pass: limit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_soundness_space_and_time() {
        for case in [MapCase::Space, MapCase::Time, MapCase::Sl2] {
            for (gen, diff) in verify_map_soundness(case).unwrap() {
                assert!(diff.is_zero(), "map {} generator {gen}: {diff}", case.label());
            }
        }
    }

    #[test]
    fn mapped_p_is_divided_difference() {
        let mapped = apply_map(MapCase::Space).unwrap();
        let p = &mapped.iter().find(|(g, _)| *g == GenName::P).unwrap().1;
        let want = OperatorExpr::one()
            .sub(&OperatorExpr::sx_i(0, -1))
            .scale(&inv_z());
        assert_eq!(*p, want);
        let mapped = apply_map(MapCase::Time).unwrap();
        let h = &mapped.iter().find(|(g, _)| *g == GenName::H).unwrap().1;
        let want = OperatorExpr::one()
            .sub(&OperatorExpr::st_i(0, -4))
            .scale(&inv_z().mul(&s(1, 4)));
        assert_eq!(*h, want);
    }

    #[test]
    fn sl2_map_d_entry() {
        // J3 = -(D + 2(1 - e^{4zH})) realized in the m = 0 time realization.
        let mapped = apply_map(MapCase::Sl2).unwrap();
        let j3 = &mapped.iter().find(|(g, _)| *g == GenName::J3).unwrap().1;
        let direct = realize_at(GenName::J3, AlgCase::Sl2Mapped, 0).unwrap();
        assert_eq!(*j3, direct);
    }

    #[test]
    fn classicalization_holds() {
        for case in MapCase::ALL {
            for ((x, y), r) in verify_classicalization(case).unwrap() {
                assert!(r.is_zero(), "map {} pair ({x},{y})", case.label());
            }
        }
    }

    #[test]
    fn casimir_mapping() {
        for case in [MapCase::Space, MapCase::Time] {
            let (a, b) = verify_casimir_map(case).unwrap();
            assert!(a.is_zero(), "map {}: classical Casimir vs deformed", case.label());
            assert!(b.is_zero(), "map {}: realized Casimir vs discrete operator", case.label());
        }
        assert!(verify_casimir_map(MapCase::Sl2).is_err());
    }

    #[test]
    fn sl2_coproduct_report() {
        let r = verify_sl2_coproduct().unwrap();
        assert!(r.homomorphism_pass);
        assert!(r.coassociativity_pass);
        assert!(r.cocommutative_limit_pass);
    }
}
