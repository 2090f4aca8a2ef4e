//! Check-suite runners shared by the command-line binary and the
//! acceptance tests. Each runner returns deterministic records; independent
//! checks within a suite run in parallel (capped by `QSCHROD_THREADS`).

use rayon::prelude::*;

use super::report::CheckRecord;
use crate::bialg::{
    classify_sa, cocommutator_from_r, co_jacobi_check, cocycle_check, first_order_consistency,
    r_sl2, r_space, r_three_parameter, r_time, schouten, ad_invariant, FirstOrderCase,
    LieAlgebra, SaClass,
};
use crate::hopf::{
    check_coassociativity, check_group_like_law, check_homomorphism, composed_symmetry_check,
};
use crate::lattice::{
    apply_symmetry, residual, symbolic_kernel, sampled_kernel, symmetry_factor_check_exact,
    symmetry_factor_check_numeric, DispersionSolution, Family, Grid, GridFunction, NumFun,
};
use crate::maps::{
    verify_casimir_map, verify_classicalization, verify_map_soundness, verify_sl2_coproduct,
    MapCase,
};
use crate::opalg::{OperatorExpr, PolyFunction, Rat};
use crate::scalar::{Scalar, Symbol};
use crate::tables::{
    casimir_realized, realize_at, relation_rhs, realize_abstract, symmetry_factor, AlgCase,
    GenName,
};

/// Caps the rayon pool according to `QSCHROD_THREADS` (ignored when the
/// global pool is already built).
pub fn configure_threads() {
    if let Ok(v) = std::env::var("QSCHROD_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

/// Commutator-table suite: every pair of the case realizes its table row.
pub fn relations_suite(cases: &[AlgCase]) -> Vec<CheckRecord> {
    let mut units = Vec::new();
    for case in cases {
        for (x, y) in case.pairs() {
            units.push((*case, x, y));
        }
    }
    units
        .par_iter()
        .map(|(case, x, y)| {
            let id = format!("relations/{case}/{x},{y}");
            let subject = format!("commutator [{x},{y}] in the {case} case");
            let run = || -> Result<usize, crate::tables::TableError> {
                let lhs = realize_at(*x, *case, 0)?.commutator(&realize_at(*y, *case, 0)?);
                let rhs = realize_abstract(&relation_rhs(*case, *x, *y)?, *case, 0)?;
                Ok(lhs.sub(&rhs).num_terms())
            };
            match run() {
                Ok(n) => CheckRecord::exact("tables", id, subject, n),
                Err(e) => CheckRecord::error("tables", id, subject, e),
            }
        })
        .collect()
}

/// Casimir suite: `[E, X] = L X` with the tabulated symmetry factors.
pub fn casimir_suite() -> Vec<CheckRecord> {
    let mut units = Vec::new();
    for case in AlgCase::SCHRODINGER {
        for gen in case.generators() {
            units.push((case, *gen));
        }
    }
    units
        .par_iter()
        .map(|(case, gen)| {
            let id = format!("casimir/{case}/{gen}");
            let subject = format!("[E, {gen}] = factor * E in the {case} case");
            let run = || -> Result<usize, crate::tables::TableError> {
                let e = casimir_realized(*case)?;
                let x = realize_at(*gen, *case, 0)?;
                let factor = symmetry_factor(*case, *gen)?;
                Ok(e.commutator(&x).sub(&factor.mul(&e)).num_terms())
            };
            match run() {
                Ok(n) => CheckRecord::exact("tables", id, subject, n),
                Err(e) => CheckRecord::error("tables", id, subject, e),
            }
        })
        .collect()
}

/// Hopf suite: homomorphism and coassociativity for the given cases, plus
/// group-like laws and composed-system checks for the mapped cases.
pub fn hopf_suite(cases: &[AlgCase]) -> Vec<CheckRecord> {
    let mut hom_units = Vec::new();
    let mut coassoc_units = Vec::new();
    for case in cases {
        for (x, y) in case.pairs() {
            hom_units.push((*case, x, y));
        }
        for gen in case.generators() {
            coassoc_units.push((*case, *gen));
        }
    }
    let mut records: Vec<CheckRecord> = hom_units
        .par_iter()
        .map(|(case, x, y)| {
            let id = format!("hopf/hom/{case}/{x},{y}");
            let subject = format!("coproduct respects [{x},{y}] in the {case} case");
            match check_homomorphism(*case, *x, *y) {
                Ok(o) => CheckRecord::exact("hopf", id, subject, o.residual_terms),
                Err(e) => CheckRecord::error("hopf", id, subject, e),
            }
        })
        .collect();
    records.par_extend(coassoc_units.par_iter().map(|(case, gen)| {
        let id = format!("hopf/coassoc/{case}/{gen}");
        let subject = format!("coassociativity of the coproduct of {gen} ({case})");
        match check_coassociativity(*case, *gen) {
            Ok(o) => CheckRecord::exact("hopf", id, subject, o.residual_terms),
            Err(e) => CheckRecord::error("hopf", id, subject, e),
        }
    }));
    for case in [AlgCase::ClassicalSpace, AlgCase::ClassicalTime] {
        if !cases.contains(&case) {
            continue;
        }
        for a in [-2i32, -1, 1, 2] {
            let id = format!("hopf/group-like/{case}/a={a}");
            let subject = format!("group-like law at exponent {a} ({case})");
            let rec = match check_group_like_law(case, a) {
                Ok(o) => CheckRecord::exact("hopf", id, subject, o.residual_terms),
                Err(e) => CheckRecord::error("hopf", id, subject, e),
            };
            records.push(rec);
        }
        for gen in [GenName::P, GenName::H, GenName::K, GenName::M, GenName::D] {
            let id = format!("hopf/composed/{case}/{gen}");
            let subject = format!("two-site composed system keeps {gen} as a symmetry ({case})");
            let rec = match composed_symmetry_check(case, gen) {
                Ok(o) => CheckRecord::exact("hopf", id, subject, o.residual_terms),
                Err(e) => CheckRecord::error("hopf", id, subject, e),
            };
            records.push(rec);
        }
    }
    records
}

/// Map suite: soundness, classicalization, Casimir transport, and the
/// jordanian coproduct verification.
pub fn maps_suite(cases: &[MapCase]) -> Vec<CheckRecord> {
    let mut records = Vec::new();
    for case in cases {
        let label = case.label();
        match verify_map_soundness(*case) {
            Ok(diffs) => {
                for (gen, diff) in diffs {
                    records.push(CheckRecord::exact(
                        "maps",
                        format!("maps/{label}/soundness/{gen}"),
                        format!("{label} map sends {gen} to its tabulated realization"),
                        diff.num_terms(),
                    ));
                }
            }
            Err(e) => records.push(CheckRecord::error(
                "maps",
                format!("maps/{label}/soundness"),
                format!("{label} map soundness"),
                e,
            )),
        }
        match verify_classicalization(*case) {
            Ok(pairs) => {
                for ((x, y), r) in pairs {
                    records.push(CheckRecord::exact(
                        "maps",
                        format!("maps/{label}/classical/{x},{y}"),
                        format!("mapped generators satisfy the classical [{x},{y}]"),
                        r.num_terms(),
                    ));
                }
            }
            Err(e) => records.push(CheckRecord::error(
                "maps",
                format!("maps/{label}/classical"),
                format!("{label} classicalization"),
                e,
            )),
        }
        if matches!(case, MapCase::Space | MapCase::Time) {
            match verify_casimir_map(*case) {
                Ok((deformed, discrete)) => {
                    records.push(CheckRecord::exact(
                        "maps",
                        format!("maps/{label}/casimir/deformed"),
                        format!("{label} map turns the classical Casimir into the deformed one"),
                        deformed.num_terms(),
                    ));
                    records.push(CheckRecord::exact(
                        "maps",
                        format!("maps/{label}/casimir/discrete"),
                        format!("mapped Casimir equals the discrete equation operator ({label})"),
                        discrete.num_terms(),
                    ));
                }
                Err(e) => records.push(CheckRecord::error(
                    "maps",
                    format!("maps/{label}/casimir"),
                    format!("{label} Casimir transport"),
                    e,
                )),
            }
        }
        if *case == MapCase::Sl2 {
            match verify_sl2_coproduct() {
                Ok(r) => {
                    records.push(CheckRecord::flag(
                        "maps",
                        "maps/sl2/coproduct/hom",
                        "jordanian coproduct is an algebra homomorphism",
                        r.homomorphism_pass,
                    ));
                    records.push(CheckRecord::flag(
                        "maps",
                        "maps/sl2/coproduct/coassoc",
                        "jordanian coproduct is coassociative",
                        r.coassociativity_pass,
                    ));
                    records.push(CheckRecord::flag(
                        "maps",
                        "maps/sl2/coproduct/limit",
                        "jordanian coproduct is cocommutative at order zero",
                        r.cocommutative_limit_pass,
                    ));
                }
                Err(e) => records.push(CheckRecord::error(
                    "maps",
                    "maps/sl2/coproduct",
                    "jordanian coproduct verification",
                    e,
                )),
            }
        }
    }
    records
}

/// Which r-matrix the bialgebra suite examines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RChoice {
    Rs,
    Rt,
    Sl2,
    Sa,
}

impl RChoice {
    pub fn from_label(s: &str) -> Option<RChoice> {
        match s {
            "rs" => Some(RChoice::Rs),
            "rt" => Some(RChoice::Rt),
            "sl2" => Some(RChoice::Sl2),
            "sa" => Some(RChoice::Sa),
            _ => None,
        }
    }
}

/// Bialgebra suite for one r-matrix choice. `params` overrides the
/// three-parameter family's `(z1, z2, lambda)` (symbolic when `None`).
pub fn bialg_suite(choice: RChoice, params: Option<(Scalar, Scalar, Scalar)>) -> Vec<CheckRecord> {
    let mut records = Vec::new();
    match choice {
        RChoice::Rs | RChoice::Rt | RChoice::Sl2 => {
            let (alg, r, label, focase) = match choice {
                RChoice::Rs => {
                    let alg = LieAlgebra::schrodinger();
                    let r = r_space(&alg);
                    (alg, r, "rs", FirstOrderCase::Space)
                }
                RChoice::Rt => {
                    let alg = LieAlgebra::schrodinger();
                    let r = r_time(&alg);
                    (alg, r, "rt", FirstOrderCase::Time)
                }
                RChoice::Sl2 => {
                    let alg = LieAlgebra::sl2();
                    let r = r_sl2(&alg);
                    (alg, r, "sl2", FirstOrderCase::Sl2)
                }
                RChoice::Sa => unreachable!(),
            };
            let sch = schouten(&alg, &r);
            records.push(CheckRecord::flag(
                "bialg",
                format!("bialg/{label}/schouten"),
                format!("Schouten bracket of {label} vanishes (classical Yang-Baxter)"),
                sch.is_zero(),
            ));
            let delta = cocommutator_from_r(&alg, &r);
            records.push(CheckRecord::flag(
                "bialg",
                format!("bialg/{label}/cocycle"),
                format!("cocommutator of {label} satisfies the cocycle condition"),
                cocycle_check(&alg, &delta),
            ));
            records.push(CheckRecord::flag(
                "bialg",
                format!("bialg/{label}/co-jacobi"),
                format!("cocommutator of {label} satisfies co-Jacobi"),
                co_jacobi_check(&alg, &delta),
            ));
            match first_order_consistency(focase) {
                Ok(results) => {
                    for (gen, pass) in results {
                        records.push(CheckRecord::flag(
                            "bialg",
                            format!("bialg/{label}/first-order/{gen}"),
                            format!("skew first-order coproduct of {gen} matches {label}"),
                            pass,
                        ));
                    }
                }
                Err(e) => records.push(CheckRecord::error(
                    "bialg",
                    format!("bialg/{label}/first-order"),
                    "first-order consistency",
                    e,
                )),
            }
        }
        RChoice::Sa => {
            let symbolic = params.is_none();
            let (z1, z2, lambda) = params.unwrap_or_else(|| {
                (
                    Scalar::sym(Symbol::Z1),
                    Scalar::sym(Symbol::Z2),
                    Scalar::sym(Symbol::Lambda),
                )
            });
            match classify_sa(&z1, &z2, &lambda) {
                Ok(report) => {
                    let class = match report.class {
                        SaClass::Triangular => "triangular (non-standard)",
                        SaClass::Standard => "standard",
                    };
                    records.push(CheckRecord {
                        module: "bialg",
                        check_id: "bialg/sa/classify".into(),
                        subject: format!(
                            "three-parameter family at z1={z1}, z2={z2}, lambda={lambda}"
                        ),
                        status: super::report::Status::Pass,
                        residual_terms: report.schouten.components().len(),
                        detail: Some(format!(
                            "{class}; {} nonzero Schouten components",
                            report.schouten.components().len()
                        )),
                    });
                    records.push(CheckRecord::flag(
                        "bialg",
                        "bialg/sa/cocycle",
                        "three-parameter cocommutator satisfies the cocycle condition",
                        report.cocycle_pass,
                    ));
                    records.push(CheckRecord::flag(
                        "bialg",
                        "bialg/sa/co-jacobi",
                        "three-parameter cocommutator satisfies co-Jacobi",
                        report.co_jacobi_pass,
                    ));
                    records.push(CheckRecord::flag(
                        "bialg",
                        "bialg/sa/ad-invariance",
                        "Schouten bracket of the family is ad-invariant",
                        report.schouten_ad_invariant,
                    ));
                }
                Err(e) => records.push(CheckRecord::error(
                    "bialg",
                    "bialg/sa/classify",
                    "three-parameter family construction",
                    e,
                )),
            }
            // Structural checks of the family run only at symbolic values.
            if symbolic {
                records.extend(sa_family_structure());
            }
        }
    }
    records
}

/// Symbolic structural checks of the three-parameter family: triangularity
/// exactly on the critical surface, the time-case limit, divergence at
/// `z1 = 0`.
fn sa_family_structure() -> Vec<CheckRecord> {
    let mut records = Vec::new();
    let alg = LieAlgebra::schrodinger();
    let z1 = Scalar::sym(Symbol::Z1);
    let z2 = Scalar::sym(Symbol::Z2);
    let crit = z2
        .mul(&z2)
        .neg()
        .div(&z1.mul(&Scalar::int(4)))
        .expect("z1 is a nonzero symbol");
    match classify_sa(&z1, &z2, &crit) {
        Ok(report) => {
            records.push(CheckRecord::flag(
                "bialg",
                "bialg/sa/critical-lambda",
                "family is triangular exactly at lambda = -z2^2/(4 z1)",
                report.class == SaClass::Triangular,
            ));
        }
        Err(e) => records.push(CheckRecord::error(
            "bialg",
            "bialg/sa/critical-lambda",
            "critical lambda classification",
            e,
        )),
    }
    match classify_sa(&z1, &z2, &Scalar::sym(Symbol::Lambda)) {
        Ok(report) => records.push(CheckRecord::flag(
            "bialg",
            "bialg/sa/generic-standard",
            "family is standard (nonzero Schouten bracket) at generic lambda",
            report.class == SaClass::Standard,
        )),
        Err(e) => records.push(CheckRecord::error(
            "bialg",
            "bialg/sa/generic-standard",
            "generic classification",
            e,
        )),
    }
    let limit_ok = (|| {
        let r = r_three_parameter(&alg, &z1, &z2, &Scalar::sym(Symbol::Lambda)).ok()?;
        let r = r
            .substitute(Symbol::Z2, &Scalar::zero())
            .ok()?
            .substitute(Symbol::Lambda, &Scalar::zero())
            .ok()?;
        let want = r_time(&alg).substitute(Symbol::Z, &z1).ok()?;
        Some(r == want)
    })()
    .unwrap_or(false);
    records.push(CheckRecord::flag(
        "bialg",
        "bialg/sa/time-limit",
        "z2 -> 0 then lambda -> 0 reduces the family to the time r-matrix",
        limit_ok,
    ));
    let diverges = r_three_parameter(&alg, &Scalar::zero(), &z2, &Scalar::sym(Symbol::Lambda))
        .is_err();
    records.push(CheckRecord::flag(
        "bialg",
        "bialg/sa/z1-divergence",
        "z1 = 0 raises the divergent-limit error",
        diverges,
    ));
    // The generic Schouten bracket must still be ad-invariant (coboundary).
    match r_three_parameter(&alg, &z1, &z2, &Scalar::sym(Symbol::Lambda)) {
        Ok(r) => {
            let sch = schouten(&alg, &r);
            records.push(CheckRecord::flag(
                "bialg",
                "bialg/sa/generic-ad-invariance",
                "generic Schouten bracket is ad-invariant",
                ad_invariant(&alg, &sch),
            ));
        }
        Err(e) => records.push(CheckRecord::error(
            "bialg",
            "bialg/sa/generic-ad-invariance",
            "generic ad-invariance",
            e,
        )),
    }
    records
}

/// Configuration of one lattice run.
#[derive(Clone, Copy, Debug)]
pub struct LatticeConfig {
    pub family: Family,
    pub nx: usize,
    pub nt: usize,
    pub sigma: f64,
    pub tau: f64,
    pub m: f64,
    pub tol: f64,
}

impl LatticeConfig {
    pub fn defaults(family: Family) -> LatticeConfig {
        LatticeConfig {
            family,
            nx: 16,
            nt: 12,
            sigma: 0.25,
            tau: match family {
                Family::SpaceDiscrete => 0.0,
                _ => 0.2,
            },
            m: 0.5,
            tol: 1e-9,
        }
    }
}

const DISPERSION_TOL: f64 = 1e-12;

fn dispersion_set(cfg: &LatticeConfig, grid: &Grid) -> Vec<DispersionSolution> {
    match cfg.family {
        Family::SpaceDiscrete => [1.25, 0.8, 1.5]
            .iter()
            .map(|mu| DispersionSolution::space_discrete(grid, cfg.m, *mu))
            .collect(),
        Family::TimeDiscrete => [0.6, -0.4, 1.0]
            .iter()
            .map(|k| DispersionSolution::time_discrete(grid, cfg.m, *k))
            .collect(),
        Family::FullyDiscrete => [1.2, 0.75, 1.4]
            .iter()
            .map(|mu| DispersionSolution::fully_discrete(grid, cfg.m, *mu))
            .collect(),
    }
}

/// Exact equation operator of the family with symbolic `z`, `m`; for the
/// fully discrete family the time step enters through the rational ratio
/// `tau/sigma`.
fn exact_equation_operator(family: Family, step_ratio: Option<Rat>) -> Option<OperatorExpr> {
    let inv_z = Scalar::z().inv().expect("z nonzero");
    let two_m = Scalar::m().mul(&Scalar::int(2));
    match family {
        Family::SpaceDiscrete => Some(casimir_realized(AlgCase::ClassicalSpace).expect("casimir")),
        Family::TimeDiscrete => Some(casimir_realized(AlgCase::ClassicalTime).expect("casimir")),
        Family::FullyDiscrete => {
            let rho = step_ratio?;
            let dxop = OperatorExpr::one().sub(&OperatorExpr::sx_i(0, -1)).scale(&inv_z);
            let rho_scalar = Scalar::ratio(*rho.numer(), *rho.denom());
            let dtop = OperatorExpr::one()
                .sub(&OperatorExpr::st(0, -rho))
                .scale(&inv_z.div(&rho_scalar).ok()?);
            Some(dxop.mul(&dxop).sub(&dtop.scale(&two_m)))
        }
    }
}

/// Exact polynomial solutions of the family's equation (symbolic `z`, `m`).
fn exact_polynomial_solutions(family: Family) -> Vec<(&'static str, PolyFunction)> {
    let one = Scalar::one();
    let three_over_m = Scalar::int(3).div(&Scalar::m()).expect("m nonzero");
    let mut out = vec![
        ("constant", PolyFunction::one()),
        ("linear-x", PolyFunction::monomial(0, 1, 0, one.clone())),
    ];
    // Cubic kernel element: x^3 + (3/m) x t + (3 sigma / m) t, sigma = -z.
    let cubic = PolyFunction::monomial(0, 3, 0, one)
        .add(&PolyFunction::monomial(0, 1, 1, three_over_m.clone()));
    let cubic = match family {
        Family::TimeDiscrete => cubic,
        Family::SpaceDiscrete | Family::FullyDiscrete => cubic.add(&PolyFunction::monomial(
            0,
            0,
            1,
            three_over_m.mul(&Scalar::z()).neg(),
        )),
    };
    out.push(("cubic-kernel", cubic));
    out
}

fn float_probes() -> Vec<(&'static str, NumFun)> {
    vec![
        (
            "cubic-plus-wave",
            NumFun::poly(3, 0).add(&NumFun::exp_wave(0.4.into(), 0.16.into())),
        ),
        (
            "mixed-poly-wave",
            NumFun::poly(2, 1).add(&NumFun::exp_wave((-0.3).into(), 0.2.into())),
        ),
    ]
}

fn exact_probes() -> Vec<(&'static str, PolyFunction)> {
    vec![
        ("x^3", PolyFunction::monomial(0, 3, 0, Scalar::one())),
        ("x^2 t", PolyFunction::monomial(0, 2, 1, Scalar::one())),
        ("x t^2", PolyFunction::monomial(0, 1, 2, Scalar::one())),
    ]
}

/// Lattice suite for one family configuration.
pub fn lattice_suite(cfg: &LatticeConfig) -> Vec<CheckRecord> {
    let flabel = cfg.family.label();
    let mut records = Vec::new();
    let grid = match Grid::new(cfg.nx, cfg.nt, cfg.sigma, cfg.tau, 0.3, 0.7) {
        Ok(g) => g,
        Err(e) => {
            records.push(CheckRecord::error(
                "lattice",
                format!("lattice/{flabel}/grid"),
                "grid construction",
                e,
            ));
            return records;
        }
    };
    // Dispersion solutions.
    for (i, sol) in dispersion_set(cfg, &grid).iter().enumerate() {
        let id = format!("lattice/{flabel}/dispersion/{i}");
        let subject = format!("dispersion solution {i} solves the {flabel} equation");
        match sol.grid_function(grid).and_then(|f| residual(cfg.family, &f, cfg.m)) {
            Ok(r) => records.push(CheckRecord::numeric(
                "lattice",
                id,
                subject,
                r.relative(),
                DISPERSION_TOL,
            )),
            Err(e) => records.push(CheckRecord::error("lattice", id, subject, e)),
        }
    }
    // Exact polynomial solutions through the symbolic action oracle.
    let ratio = Rat::approximate_float(cfg.tau / cfg.sigma);
    if let Some(e_op) = exact_equation_operator(cfg.family, ratio) {
        for (name, poly) in exact_polynomial_solutions(cfg.family) {
            let id = format!("lattice/{flabel}/poly-solution/{name}");
            let subject = format!("polynomial {name} solves the {flabel} equation exactly");
            let r = e_op.apply(&poly);
            records.push(CheckRecord::exact("lattice", id, subject, r.num_terms()));
        }
    }
    // Symmetry application and factor checks per matching algebra case.
    let solutions: Vec<GridFunction> = dispersion_set(cfg, &grid)
        .iter()
        .filter_map(|s| s.grid_function(grid).ok())
        .collect();
    for case in cfg.family.symmetry_cases() {
        for gen in case.generators() {
            let op = match realize_at(*gen, *case, 0) {
                Ok(op) => op,
                Err(e) => {
                    records.push(CheckRecord::error(
                        "lattice",
                        format!("lattice/{flabel}/apply/{case}/{gen}"),
                        "realization",
                        e,
                    ));
                    continue;
                }
            };
            for (i, sol) in solutions.iter().enumerate() {
                let id = format!("lattice/{flabel}/apply/{case}/{gen}/sol{i}");
                let subject =
                    format!("{gen} ({case}) maps dispersion solution {i} to a solution");
                match apply_symmetry(cfg.family, &op, sol, cfg.m)
                    .and_then(|f| residual(cfg.family, &f, cfg.m))
                {
                    Ok(r) => records.push(CheckRecord::numeric(
                        "lattice",
                        id,
                        subject,
                        r.relative(),
                        cfg.tol,
                    )),
                    Err(e) => records.push(CheckRecord::error("lattice", id, subject, e)),
                }
            }
            let factor = match symmetry_factor(*case, *gen) {
                Ok(f) => f,
                Err(e) => {
                    records.push(CheckRecord::error(
                        "lattice",
                        format!("lattice/{flabel}/factor/{case}/{gen}"),
                        "symmetry factor",
                        e,
                    ));
                    continue;
                }
            };
            for (name, probe) in exact_probes() {
                let id = format!("lattice/{flabel}/factor/{case}/{gen}/exact/{name}");
                let subject = format!(
                    "operator identity E({gen} f) - {gen}(E f) - factor (E f) = 0 on {name}"
                );
                match symmetry_factor_check_exact(*case, *gen, &probe) {
                    Ok(pass) => records.push(CheckRecord::flag("lattice", id, subject, pass)),
                    Err(e) => records.push(CheckRecord::error("lattice", id, subject, e)),
                }
            }
            for (name, probe) in float_probes() {
                let id = format!("lattice/{flabel}/factor/{case}/{gen}/float/{name}");
                let subject = format!(
                    "operator identity E({gen} f) - {gen}(E f) - factor (E f) = 0 on {name}"
                );
                match symmetry_factor_check_numeric(cfg.family, &op, &factor, &probe, &grid, cfg.m)
                {
                    Ok(r) => records.push(CheckRecord::numeric(
                        "lattice",
                        id,
                        subject,
                        r.relative(),
                        cfg.tol,
                    )),
                    Err(e) => records.push(CheckRecord::error("lattice", id, subject, e)),
                }
            }
        }
    }
    // Kernel-rank agreement for the families with realized operators.
    let kernel_case = match cfg.family {
        Family::SpaceDiscrete => Some((AlgCase::ClassicalSpace, -cfg.sigma)),
        Family::TimeDiscrete => Some((AlgCase::ClassicalTime, -cfg.tau / 4.0)),
        Family::FullyDiscrete => None,
    };
    if let Some((case, z_num)) = kernel_case {
        let id = format!("lattice/{flabel}/kernel-rank");
        let subject = "cubic polynomial kernel: sampled rank equals symbolic rank".to_string();
        match Rat::approximate_float(z_num) {
            Some(zr) => {
                let z_scalar = Scalar::ratio(*zr.numer(), *zr.denom());
                let m_scalar = Rat::approximate_float(cfg.m)
                    .map(|r| Scalar::ratio(*r.numer(), *r.denom()))
                    .unwrap_or_else(|| Scalar::ratio(1, 2));
                let run = || -> Result<bool, crate::lattice::LatticeError> {
                    let (sr, sd) = symbolic_kernel(case)?;
                    let (nr, nd) = sampled_kernel(case, &z_scalar, &m_scalar)?;
                    Ok(sr == nr && sd == nd)
                };
                match run() {
                    Ok(pass) => records.push(CheckRecord::flag("lattice", id, subject, pass)),
                    Err(e) => records.push(CheckRecord::error("lattice", id, subject, e)),
                }
            }
            None => records.push(CheckRecord::error(
                "lattice",
                id,
                subject,
                "step is not a small rational",
            )),
        }
    }
    // Continuum consistency for the space-discrete family.
    if cfg.family == Family::SpaceDiscrete {
        let id = format!("lattice/{flabel}/continuum");
        let subject = "heat-kernel residual decreases at first order as sigma shrinks".to_string();
        let run = || -> Result<bool, crate::lattice::LatticeError> {
            let mut prev = f64::INFINITY;
            for sigma in [0.2, 0.1, 0.05, 0.025] {
                let r = crate::lattice::heat_kernel_residual(cfg.m, sigma)?;
                if r >= prev * 0.7 {
                    return Ok(false);
                }
                prev = r;
            }
            Ok(true)
        };
        match run() {
            Ok(pass) => records.push(CheckRecord::flag("lattice", id, subject, pass)),
            Err(e) => records.push(CheckRecord::error("lattice", id, subject, e)),
        }
    }
    // Sample-path agreement for the fully discrete family.
    if cfg.family == Family::FullyDiscrete {
        let id = format!("lattice/{flabel}/sample-path");
        let subject = "sampled residual agrees with the closed-form residual".to_string();
        let run = || -> Result<bool, crate::lattice::LatticeError> {
            let sol = dispersion_set(cfg, &grid)[0].grid_function(grid)?;
            let closed = residual(cfg.family, &sol, cfg.m)?;
            let sampled =
                GridFunction::from_samples(grid, sol.values.clone()).and_then(|f| residual(cfg.family, &f, cfg.m))?;
            Ok((closed.relative() - sampled.relative()).abs() < 1e-10)
        };
        match run() {
            Ok(pass) => records.push(CheckRecord::flag("lattice", id, subject, pass)),
            Err(e) => records.push(CheckRecord::error("lattice", id, subject, e)),
        }
    }
    records
}

/// Dumps the first dispersion solution of a configuration as grid records.
pub fn lattice_dump(cfg: &LatticeConfig) -> Result<String, crate::lattice::LatticeError> {
    let grid = Grid::new(cfg.nx, cfg.nt, cfg.sigma, cfg.tau, 0.3, 0.7)?;
    let sol = dispersion_set(cfg, &grid)[0];
    let f = sol.grid_function(grid)?;
    Ok(f.dump_records())
}

/// Runs every suite with default settings.
pub fn run_all() -> Vec<CheckRecord> {
    configure_threads();
    let mut records = relations_suite(&AlgCase::ALL);
    records.extend(casimir_suite());
    records.extend(hopf_suite(&AlgCase::ALL));
    records.extend(maps_suite(&MapCase::ALL));
    for choice in [RChoice::Rs, RChoice::Rt, RChoice::Sl2, RChoice::Sa] {
        records.extend(bialg_suite(choice, None));
    }
    for family in Family::ALL {
        records.extend(lattice_suite(&LatticeConfig::defaults(family)));
    }
    records
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations_space_emits_15_pass_records() {
        let records = relations_suite(&[AlgCase::Space]);
        assert_eq!(records.len(), 15);
        assert!(records.iter().all(|r| r.passed()));
    }

    #[test]
    fn sa_suite_at_the_documented_point() {
        // z1 = 1, z2 = 2, lambda = -1 sits on the critical surface.
        let records = bialg_suite(
            RChoice::Sa,
            Some((Scalar::int(1), Scalar::int(2), Scalar::int(-1))),
        );
        let classify = records
            .iter()
            .find(|r| r.check_id == "bialg/sa/classify")
            .expect("classification record");
        assert!(classify.detail.as_deref().unwrap_or("").contains("triangular"));
    }

    #[test]
    fn report_is_deterministic() {
        let a = super::super::report::Report::from_checks(relations_suite(&[AlgCase::Time]));
        let b = super::super::report::Report::from_checks(relations_suite(&[AlgCase::Time]));
        assert_eq!(
            serde_json::to_string(&a.checks).unwrap(),
            serde_json::to_string(&b.checks).unwrap()
        );
    }
}
