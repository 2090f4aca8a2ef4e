//! Numeric validation on uniform grids: explicit solutions of the discrete
//! Schrodinger equations and checks that the realized symmetry operators map
//! solutions to solutions.
//!
//! Strategy is mixed exact/float. Polynomial probes run through the exact
//! action oracle of [`crate::opalg`] with fully symbolic `z` and `m`, so
//! their residuals are exact zeros. Exponential probes are closed forms of
//! the shape `sum c x^p t^q exp(lx x + lt t)` over complex doubles; this
//! class is closed under every operation a realized operator performs
//! (multiplication by `x`/`t`, derivatives, shifts), so operators are applied
//! function-by-function and never composed symbolically — the numeric path
//! stays independent of the normal-ordering engine it validates.
//!
//! Boundary policy: residuals are evaluated only on interior points every
//! stencil shift can reach; there is no ghost-point extrapolation.

use num::complex::Complex64;
use thiserror::Error;

use crate::opalg::{OperatorExpr, PolyFunction};
use crate::scalar::{Scalar, Symbol};
use crate::tables::{casimir_realized, realize_at, symmetry_factor, AlgCase, GenName, TableError};

#[derive(Debug, Error, PartialEq, Clone)]
pub enum LatticeError {
    #[error("grid too small or steps invalid: {0}")]
    InvalidGrid(String),
    #[error("stencil reaches outside the sampled grid")]
    StencilOutOfRange,
    #[error("an analytic derivative is required but the function is samples-only")]
    ClosedFormRequired,
    #[error("family {0} carries no symmetry operators")]
    NoSymmetryOperators(&'static str),
    #[error(transparent)]
    Table(#[from] TableError),
}

/// Discrete equation family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Space-discrete equation: second divided difference in `x`,
    /// continuous time derivative.
    SpaceDiscrete,
    /// Time-discrete equation: continuous `x` derivatives, divided
    /// difference in `t`.
    TimeDiscrete,
    /// Fully discrete equation: divided differences in both directions.
    FullyDiscrete,
}

impl Family {
    pub const ALL: [Family; 3] =
        [Family::SpaceDiscrete, Family::TimeDiscrete, Family::FullyDiscrete];

    pub fn label(self) -> &'static str {
        match self {
            Family::SpaceDiscrete => "bk",
            Family::TimeDiscrete => "ci",
            Family::FullyDiscrete => "za",
        }
    }

    pub fn from_label(s: &str) -> Option<Family> {
        Family::ALL.iter().copied().find(|f| f.label() == s)
    }

    /// Algebra cases whose realized generators are symmetries of this
    /// family's equation (deformed and mapped variants share the equation).
    pub fn symmetry_cases(self) -> &'static [AlgCase] {
        match self {
            Family::SpaceDiscrete => &[AlgCase::Space, AlgCase::ClassicalSpace],
            Family::TimeDiscrete => &[AlgCase::Time, AlgCase::ClassicalTime],
            Family::FullyDiscrete => &[],
        }
    }

    /// Value of the deformation parameter `z` matching the grid steps.
    pub fn z_value(self, grid: &Grid) -> f64 {
        match self {
            Family::SpaceDiscrete => -grid.sigma,
            Family::TimeDiscrete => -grid.tau / 4.0,
            Family::FullyDiscrete => f64::NAN,
        }
    }
}

/// Uniform rectangular grid. `tau == 0` codes "continuous time": the
/// equation uses analytic time derivatives and the time sampling spacing
/// falls back to `sigma`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub nx: usize,
    pub nt: usize,
    pub sigma: f64,
    pub tau: f64,
    pub x0: f64,
    pub t0: f64,
}

impl Grid {
    pub fn new(nx: usize, nt: usize, sigma: f64, tau: f64, x0: f64, t0: f64) -> Result<Grid, LatticeError> {
        if nx < 8 || nt < 8 {
            return Err(LatticeError::InvalidGrid(format!("need nx, nt >= 8, got {nx} x {nt}")));
        }
        if sigma <= 0.0 || tau < 0.0 || !sigma.is_finite() || !tau.is_finite() {
            return Err(LatticeError::InvalidGrid(format!("bad steps sigma={sigma}, tau={tau}")));
        }
        Ok(Grid { nx, nt, sigma, tau, x0, t0 })
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x0 + j as f64 * self.sigma
    }

    /// Time sampling spacing (falls back to `sigma` in continuous-t mode).
    pub fn t_step(&self) -> f64 {
        if self.tau > 0.0 {
            self.tau
        } else {
            self.sigma
        }
    }

    pub fn t(&self, n: usize) -> f64 {
        self.t0 + n as f64 * self.t_step()
    }
}

/// One closed-form term `c * x^p * t^q * exp(lx x + lt t)`.
#[derive(Clone, Copy, Debug)]
struct NumTerm {
    c: Complex64,
    xp: u32,
    tp: u32,
    lx: Complex64,
    lt: Complex64,
}

/// Closed-form function: finite sum of polynomial-exponential terms.
#[derive(Clone, Debug, Default)]
pub struct NumFun {
    terms: Vec<NumTerm>,
}

impl NumFun {
    pub fn zero() -> Self {
        NumFun::default()
    }

    pub fn constant(c: f64) -> Self {
        NumFun { terms: vec![NumTerm { c: c.into(), xp: 0, tp: 0, lx: 0.0.into(), lt: 0.0.into() }] }
    }

    /// `x^p t^q`.
    pub fn poly(xp: u32, tp: u32) -> Self {
        NumFun { terms: vec![NumTerm { c: 1.0.into(), xp, tp, lx: 0.0.into(), lt: 0.0.into() }] }
    }

    /// `exp(lx x + lt t)`.
    pub fn exp_wave(lx: Complex64, lt: Complex64) -> Self {
        NumFun { terms: vec![NumTerm { c: 1.0.into(), xp: 0, tp: 0, lx, lt }] }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().copied());
        NumFun { terms }.compact()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale((-1.0).into()))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        NumFun { terms: self.terms.iter().map(|t| NumTerm { c: t.c * c, ..*t }).collect() }
    }

    fn compact(mut self) -> Self {
        use std::collections::BTreeMap;
        let mut map: BTreeMap<(u32, u32, u64, u64, u64, u64), Complex64> = BTreeMap::new();
        for t in self.terms.drain(..) {
            let key = (t.xp, t.tp, t.lx.re.to_bits(), t.lx.im.to_bits(), t.lt.re.to_bits(), t.lt.im.to_bits());
            *map.entry(key).or_insert_with(|| 0.0.into()) += t.c;
        }
        NumFun {
            terms: map
                .into_iter()
                .filter(|(_, c)| c.norm() != 0.0)
                .map(|((xp, tp, a, b, c2, d), c)| NumTerm {
                    c,
                    xp,
                    tp,
                    lx: Complex64::new(f64::from_bits(a), f64::from_bits(b)),
                    lt: Complex64::new(f64::from_bits(c2), f64::from_bits(d)),
                })
                .collect(),
        }
    }

    pub fn mul_x_pow(&self, p: u32) -> Self {
        NumFun { terms: self.terms.iter().map(|t| NumTerm { xp: t.xp + p, ..*t }).collect() }
    }

    pub fn mul_t_pow(&self, q: u32) -> Self {
        NumFun { terms: self.terms.iter().map(|t| NumTerm { tp: t.tp + q, ..*t }).collect() }
    }

    pub fn dx(&self) -> Self {
        let mut terms = Vec::new();
        for t in &self.terms {
            if t.xp > 0 {
                terms.push(NumTerm { c: t.c * t.xp as f64, xp: t.xp - 1, ..*t });
            }
            if t.lx.norm() != 0.0 {
                terms.push(NumTerm { c: t.c * t.lx, ..*t });
            }
        }
        NumFun { terms }.compact()
    }

    pub fn dt(&self) -> Self {
        let mut terms = Vec::new();
        for t in &self.terms {
            if t.tp > 0 {
                terms.push(NumTerm { c: t.c * t.tp as f64, tp: t.tp - 1, ..*t });
            }
            if t.lt.norm() != 0.0 {
                terms.push(NumTerm { c: t.c * t.lt, ..*t });
            }
        }
        NumFun { terms }.compact()
    }

    pub fn shift_x(&self, s: f64) -> Self {
        let mut terms = Vec::new();
        for t in &self.terms {
            let phase = (t.lx * s).exp();
            // (x + s)^p expanded binomially.
            for j in (0..=t.xp).rev() {
                let coeff = binom_f(t.xp, j) * s.powi((t.xp - j) as i32);
                terms.push(NumTerm { c: t.c * phase * coeff, xp: j, ..*t });
            }
        }
        NumFun { terms }.compact()
    }

    pub fn shift_t(&self, s: f64) -> Self {
        let mut terms = Vec::new();
        for t in &self.terms {
            let phase = (t.lt * s).exp();
            for j in (0..=t.tp).rev() {
                let coeff = binom_f(t.tp, j) * s.powi((t.tp - j) as i32);
                terms.push(NumTerm { c: t.c * phase * coeff, tp: j, ..*t });
            }
        }
        NumFun { terms }.compact()
    }

    pub fn eval(&self, x: f64, t: f64) -> Complex64 {
        let mut acc = Complex64::from(0.0);
        for term in &self.terms {
            acc += term.c
                * x.powi(term.xp as i32)
                * t.powi(term.tp as i32)
                * (term.lx * x + term.lt * t).exp();
        }
        acc
    }
}

fn binom_f(n: u32, k: u32) -> f64 {
    let mut acc = 1.0;
    for i in 0..k.min(n - k) {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    if k > n {
        0.0
    } else {
        acc
    }
}

/// Closed-form tag of a grid function.
#[derive(Clone, Debug)]
pub enum ClosedForm {
    /// Polynomial-exponential class, closed under all operator actions.
    PolyExp(NumFun),
    /// Continuum heat kernel `sqrt(m/(2 pi t)) exp(-m x^2 / (2 t))`;
    /// supports evaluation and analytic first/second derivatives only.
    HeatKernel { m: f64 },
}

impl ClosedForm {
    pub fn eval(&self, x: f64, t: f64) -> Complex64 {
        match self {
            ClosedForm::PolyExp(f) => f.eval(x, t),
            ClosedForm::HeatKernel { m } => {
                Complex64::from((m / (2.0 * std::f64::consts::PI * t)).sqrt() * (-m * x * x / (2.0 * t)).exp())
            }
        }
    }

    fn dt_eval(&self, x: f64, t: f64) -> Complex64 {
        match self {
            ClosedForm::PolyExp(f) => f.dt().eval(x, t),
            ClosedForm::HeatKernel { m } => {
                self.eval(x, t) * (-1.0 / (2.0 * t) + m * x * x / (2.0 * t * t))
            }
        }
    }

    fn dxx_eval(&self, x: f64, t: f64) -> Complex64 {
        match self {
            ClosedForm::PolyExp(f) => f.dx().dx().eval(x, t),
            ClosedForm::HeatKernel { m } => {
                self.eval(x, t) * (m * m * x * x / (t * t) - m / t)
            }
        }
    }
}

/// Function sampled on a grid, optionally carrying its closed form.
#[derive(Clone, Debug)]
pub struct GridFunction {
    pub grid: Grid,
    pub values: Vec<Complex64>,
    pub closed: Option<ClosedForm>,
}

impl GridFunction {
    pub fn from_closed(grid: Grid, closed: ClosedForm) -> Result<GridFunction, LatticeError> {
        let mut values = Vec::with_capacity(grid.nx * grid.nt);
        for n in 0..grid.nt {
            for j in 0..grid.nx {
                let v = closed.eval(grid.x(j), grid.t(n));
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(LatticeError::InvalidGrid(format!(
                        "closed form not finite at ({}, {})",
                        grid.x(j),
                        grid.t(n)
                    )));
                }
                values.push(v);
            }
        }
        Ok(GridFunction { grid, values, closed: Some(closed) })
    }

    pub fn from_samples(grid: Grid, values: Vec<Complex64>) -> Result<GridFunction, LatticeError> {
        if values.len() != grid.nx * grid.nt {
            return Err(LatticeError::InvalidGrid("sample count mismatch".into()));
        }
        Ok(GridFunction { grid, values, closed: None })
    }

    pub fn value(&self, j: usize, n: usize) -> Complex64 {
        self.values[n * self.grid.nx + j]
    }

    /// Structured text dump: one record per point, `j n x t re im`.
    pub fn dump_records(&self) -> String {
        let mut out = String::new();
        for n in 0..self.grid.nt {
            for j in 0..self.grid.nx {
                let v = self.value(j, n);
                out.push_str(&format!(
                    "{} {} {:.12e} {:.12e} {:.12e} {:.12e}\n",
                    j,
                    n,
                    self.grid.x(j),
                    self.grid.t(n),
                    v.re,
                    v.im
                ));
            }
        }
        out
    }
}

/// Explicit separated solution with its dispersion data.
///
/// Families and their relations (`s` = sigma, `T` = tau):
/// space-discrete `((mu-1)/s)^2 = 2 m omega`, time-discrete
/// `k^2 = 2 m (nu-1)/T`, fully discrete `((mu-1)/s)^2 = 2 m (nu-1)/T`.
#[derive(Clone, Copy, Debug)]
pub struct DispersionSolution {
    pub family: Family,
    /// Growth factor per space step (or `exp(k*sigma)` where `x` stays
    /// continuous).
    pub mu: f64,
    /// Growth factor per time step; for continuous time this is
    /// `exp(omega * t_step)`.
    pub nu: f64,
    lx: f64,
    lt: f64,
}

impl DispersionSolution {
    /// Space-discrete family: choose `mu`, solve for the time rate.
    pub fn space_discrete(grid: &Grid, m: f64, mu: f64) -> DispersionSolution {
        let omega = ((mu - 1.0) / grid.sigma).powi(2) / (2.0 * m);
        DispersionSolution {
            family: Family::SpaceDiscrete,
            mu,
            nu: (omega * grid.t_step()).exp(),
            lx: mu.ln() / grid.sigma,
            lt: omega,
        }
    }

    /// Time-discrete family: choose the spatial rate `k`, solve for `nu`.
    pub fn time_discrete(grid: &Grid, m: f64, k: f64) -> DispersionSolution {
        let nu = 1.0 + grid.tau * k * k / (2.0 * m);
        DispersionSolution {
            family: Family::TimeDiscrete,
            mu: (k * grid.sigma).exp(),
            nu,
            lx: k,
            lt: nu.ln() / grid.tau,
        }
    }

    /// Fully discrete family: choose `mu`, solve for `nu`.
    pub fn fully_discrete(grid: &Grid, m: f64, mu: f64) -> DispersionSolution {
        let nu = 1.0 + grid.tau * ((mu - 1.0) / grid.sigma).powi(2) / (2.0 * m);
        DispersionSolution {
            family: Family::FullyDiscrete,
            mu,
            nu,
            lx: mu.ln() / grid.sigma,
            lt: nu.ln() / grid.tau,
        }
    }

    pub fn closed_form(&self) -> ClosedForm {
        ClosedForm::PolyExp(NumFun::exp_wave(self.lx.into(), self.lt.into()))
    }

    pub fn grid_function(&self, grid: Grid) -> Result<GridFunction, LatticeError> {
        GridFunction::from_closed(grid, self.closed_form())
    }
}

/// Relative residual summary.
#[derive(Clone, Copy, Debug)]
pub struct Residual {
    pub max_abs: f64,
    pub scale: f64,
}

impl Residual {
    pub fn relative(&self) -> f64 {
        self.max_abs / self.scale.max(1e-300)
    }
}

fn interior_margin(family: Family) -> (usize, usize) {
    match family {
        Family::SpaceDiscrete => (2, 0),
        Family::TimeDiscrete => (0, 2),
        Family::FullyDiscrete => (2, 2),
    }
}

/// Max-norm residual of the family's equation over interior grid points.
/// Exact polynomial probes should use [`symmetry_check_exact`]-style exact
/// paths; this is the float path for closed forms and sampled functions.
pub fn residual(family: Family, f: &GridFunction, m: f64) -> Result<Residual, LatticeError> {
    let grid = &f.grid;
    match family {
        Family::TimeDiscrete | Family::FullyDiscrete if grid.tau <= 0.0 => {
            return Err(LatticeError::InvalidGrid("family needs a positive time step".into()));
        }
        _ => {}
    }
    let (mx, mt) = interior_margin(family);
    if grid.nx <= mx + 1 || grid.nt <= mt + 1 {
        return Err(LatticeError::StencilOutOfRange);
    }
    let mut max_abs = 0.0f64;
    let mut scale = 0.0f64;
    for n in 0..grid.nt - mt {
        for j in 0..grid.nx - mx {
            let (x, t) = (grid.x(j), grid.t(n));
            let space_part = match family {
                Family::SpaceDiscrete | Family::FullyDiscrete => {
                    // Second forward divided difference in x.
                    let (f0, f1, f2) = match &f.closed {
                        Some(cf) => (
                            cf.eval(x, t),
                            cf.eval(x + grid.sigma, t),
                            cf.eval(x + 2.0 * grid.sigma, t),
                        ),
                        None => (f.value(j, n), f.value(j + 1, n), f.value(j + 2, n)),
                    };
                    (f2 - 2.0 * f1 + f0) / (grid.sigma * grid.sigma)
                }
                Family::TimeDiscrete => match &f.closed {
                    Some(cf) => cf.dxx_eval(x, t),
                    None => return Err(LatticeError::ClosedFormRequired),
                },
            };
            let time_part = match family {
                Family::SpaceDiscrete => match &f.closed {
                    Some(cf) => cf.dt_eval(x, t),
                    None => return Err(LatticeError::ClosedFormRequired),
                },
                Family::TimeDiscrete | Family::FullyDiscrete => {
                    let (g0, g1) = match &f.closed {
                        Some(cf) => (cf.eval(x, t), cf.eval(x, t + grid.tau)),
                        None => (f.value(j, n), f.value(j, n + 1)),
                    };
                    (g1 - g0) / grid.tau
                }
            };
            let r = space_part - 2.0 * m * time_part;
            max_abs = max_abs.max(r.norm());
            scale = scale.max(space_part.norm()).max((2.0 * m * time_part).norm());
        }
    }
    Ok(Residual { max_abs, scale: scale.max(1.0) })
}

/// Applies a realized symmetry operator to a closed-form grid function.
/// The deformation parameter is bound to the grid step of the family.
pub fn apply_symmetry(
    family: Family,
    op: &OperatorExpr,
    f: &GridFunction,
    m: f64,
) -> Result<GridFunction, LatticeError> {
    if family == Family::FullyDiscrete {
        return Err(LatticeError::NoSymmetryOperators(family.label()));
    }
    let nf = match &f.closed {
        Some(ClosedForm::PolyExp(nf)) => nf,
        _ => return Err(LatticeError::ClosedFormRequired),
    };
    let z = family.z_value(&f.grid);
    let out = apply_operator_num(op, z, m, nf)?;
    GridFunction::from_closed(f.grid, ClosedForm::PolyExp(out))
}

/// Numeric application of a normal-ordered operator to a closed form.
fn apply_operator_num(
    op: &OperatorExpr,
    z: f64,
    m: f64,
    f: &NumFun,
) -> Result<NumFun, LatticeError> {
    let vals = [z, m, 0.0, 0.0, 0.0];
    let mut acc = NumFun::zero();
    for (key, coeff) in op.terms() {
        let c = coeff
            .eval_f64(&vals)
            .map_err(|_| LatticeError::InvalidGrid("coefficient diverges at the bound parameters".into()))?;
        let mut g = f.clone();
        for (site, ops) in key {
            if *site != 0 {
                return Err(LatticeError::InvalidGrid("multi-site operator on a single grid".into()));
            }
            for _ in 0..ops.dx_pow {
                g = g.dx();
            }
            for _ in 0..ops.dt_pow {
                g = g.dt();
            }
            if !num::traits::Zero::is_zero(&ops.sx) {
                let a = *ops.sx.numer() as f64 / *ops.sx.denom() as f64;
                g = g.shift_x(a * z);
            }
            if !num::traits::Zero::is_zero(&ops.st) {
                let a = *ops.st.numer() as f64 / *ops.st.denom() as f64;
                g = g.shift_t(a * z);
            }
            g = g.mul_x_pow(ops.x_pow).mul_t_pow(ops.t_pow);
        }
        acc = acc.add(&g.scale(c.into()));
    }
    Ok(acc)
}

/// Applies the family's equation operator to a closed form.
fn apply_equation(family: Family, grid: &Grid, m: f64, f: &NumFun) -> NumFun {
    let space = match family {
        Family::SpaceDiscrete | Family::FullyDiscrete => {
            let d1 = f.shift_x(grid.sigma).sub(f).scale((1.0 / grid.sigma).into());
            d1.shift_x(grid.sigma).sub(&d1).scale((1.0 / grid.sigma).into())
        }
        Family::TimeDiscrete => f.dx().dx(),
    };
    let time = match family {
        Family::SpaceDiscrete => f.dt(),
        Family::TimeDiscrete | Family::FullyDiscrete => {
            f.shift_t(grid.tau).sub(f).scale((1.0 / grid.tau).into())
        }
    };
    space.sub(&time.scale((2.0 * m).into()))
}

/// Float symmetry-factor check on a non-solution probe:
/// `E(X phi) - X(E phi) - L(E phi)` must vanish relative to the sizes of the
/// three terms.
pub fn symmetry_factor_check_numeric(
    family: Family,
    op: &OperatorExpr,
    factor: &OperatorExpr,
    probe: &NumFun,
    grid: &Grid,
    m: f64,
) -> Result<Residual, LatticeError> {
    if family == Family::FullyDiscrete {
        return Err(LatticeError::NoSymmetryOperators(family.label()));
    }
    let z = family.z_value(grid);
    let e_phi = apply_equation(family, grid, m, probe);
    let x_phi = apply_operator_num(op, z, m, probe)?;
    let a = apply_equation(family, grid, m, &x_phi);
    let b = apply_operator_num(op, z, m, &e_phi)?;
    let c = apply_operator_num(factor, z, m, &e_phi)?;
    let r = a.sub(&b).sub(&c);
    let (mx, mt) = (3usize, 3usize);
    if grid.nx <= 2 * mx || grid.nt <= 2 * mt {
        return Err(LatticeError::StencilOutOfRange);
    }
    let mut max_abs = 0.0f64;
    let mut scale = 1.0f64;
    for n in mt..grid.nt - mt {
        for j in mx..grid.nx - mx {
            let (x, t) = (grid.x(j), grid.t(n));
            max_abs = max_abs.max(r.eval(x, t).norm());
            scale = scale
                .max(a.eval(x, t).norm())
                .max(b.eval(x, t).norm())
                .max(c.eval(x, t).norm());
        }
    }
    Ok(Residual { max_abs, scale })
}

/// Exact symmetry-factor check on a polynomial probe, with `z` and `m` kept
/// fully symbolic. Uses only the action oracle, never operator products.
pub fn symmetry_factor_check_exact(
    case: AlgCase,
    gen: GenName,
    probe: &PolyFunction,
) -> Result<bool, LatticeError> {
    let e = casimir_realized(case)?;
    let x = realize_at(gen, case, 0)?;
    let factor = symmetry_factor(case, gen)?;
    let e_phi = e.apply(probe);
    let r = e
        .apply(&x.apply(probe))
        .sub(&x.apply(&e_phi))
        .sub(&factor.apply(&e_phi));
    Ok(r.is_zero())
}

/// Rank of an exact scalar matrix by Gaussian elimination.
fn scalar_rank(mut m: Vec<Vec<Scalar>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let pivot = (row..rows).find(|&r| !m[r][col].is_zero());
        let p = match pivot {
            Some(p) => p,
            None => continue,
        };
        m.swap(row, p);
        let inv = m[row][col].inv().expect("pivot nonzero");
        for r in row + 1..rows {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].mul(&inv);
            let pivot_row: Vec<Scalar> = m[row][col..].to_vec();
            for (c2, p) in pivot_row.iter().enumerate() {
                let sub = p.mul(&factor);
                m[r][col + c2] = m[r][col + c2].sub(&sub);
            }
        }
        row += 1;
        rank += 1;
    }
    rank
}

/// Total-degree <= 3 monomial basis used for the kernel comparison.
fn cubic_basis() -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for p in 0..=3u32 {
        for q in 0..=3u32 {
            if p + q <= 3 {
                out.push((p, q));
            }
        }
    }
    out
}

/// Kernel of the case's equation operator on polynomials of total degree
/// <= 3, computed symbolically: returns `(rank, kernel dimension)`.
pub fn symbolic_kernel(case: AlgCase) -> Result<(usize, usize), LatticeError> {
    let e = casimir_realized(case)?;
    let basis = cubic_basis();
    // Collect coefficient rows: image monomial -> column vector.
    let mut keys: std::collections::BTreeSet<crate::opalg::PfKey> = std::collections::BTreeSet::new();
    let mut images = Vec::new();
    for (p, q) in &basis {
        let img = e.apply(&PolyFunction::monomial(0, *p, *q, Scalar::one()));
        for (k, _) in img.terms() {
            keys.insert(k.clone());
        }
        images.push(img);
    }
    let keys: Vec<_> = keys.into_iter().collect();
    let mut matrix = vec![vec![Scalar::zero(); basis.len()]; keys.len()];
    for (col, img) in images.iter().enumerate() {
        for (k, c) in img.terms() {
            let row = keys.iter().position(|x| x == k).expect("key recorded");
            matrix[row][col] = c.clone();
        }
    }
    let rank = scalar_rank(matrix);
    Ok((rank, basis.len() - rank))
}

/// Same kernel computed "on the grid": the equation operator is bound to
/// rational parameter values, the image polynomials are evaluated at exact
/// rational grid points, and the rank is taken over the sampled values.
pub fn sampled_kernel(
    case: AlgCase,
    z_value: &Scalar,
    m_value: &Scalar,
) -> Result<(usize, usize), LatticeError> {
    let e = casimir_realized(case)?
        .substitute(&[(Symbol::Z, z_value.clone()), (Symbol::M, m_value.clone())])
        .map_err(|_| LatticeError::InvalidGrid("parameter binding divides by zero".into()))?;
    let basis = cubic_basis();
    // 5 x 5 rational sample points: x = j*sigma, t = n*sigma with
    // sigma = -z (space) / step derived from z; any distinct abscissas work.
    let step = z_value.neg();
    let mut rows = Vec::new();
    for j in 0..5i64 {
        for n in 0..5i64 {
            let x = step.mul(&Scalar::int(j));
            let t = step.mul(&Scalar::int(n)).add(&Scalar::one());
            let mut row = Vec::with_capacity(basis.len());
            for (p, q) in &basis {
                let img = e.apply(&PolyFunction::monomial(0, *p, *q, Scalar::one()));
                row.push(img.eval(&[(0, x.clone(), t.clone())]));
            }
            rows.push(row);
        }
    }
    let rank = scalar_rank(rows);
    Ok((rank, basis.len() - rank))
}

/// Max residual of the continuum heat kernel against the space-discrete
/// equation on a window away from the kernel's singularity.
pub fn heat_kernel_residual(m: f64, sigma: f64) -> Result<f64, LatticeError> {
    let grid = Grid::new(16, 8, sigma, 0.125, -1.0, 1.0)?;
    let f = GridFunction::from_closed(grid, ClosedForm::HeatKernel { m })?;
    let r = residual(Family::SpaceDiscrete, &f, m)?;
    Ok(r.relative())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_bk() -> Grid {
        Grid::new(16, 12, 0.25, 0.0, 0.3, 0.7).unwrap()
    }

    fn grid_ci() -> Grid {
        Grid::new(16, 12, 0.25, 0.2, 0.3, 0.7).unwrap()
    }

    fn grid_za() -> Grid {
        Grid::new(16, 12, 0.25, 0.2, 0.3, 0.7).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(Grid::new(4, 12, 0.25, 0.0, 0.0, 0.0).is_err());
        assert!(Grid::new(16, 12, -1.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn constants_and_linear_solve_space_discrete() {
        let g = grid_bk();
        for f in [NumFun::constant(1.0), NumFun::poly(1, 0)] {
            let gf = GridFunction::from_closed(g, ClosedForm::PolyExp(f)).unwrap();
            let r = residual(Family::SpaceDiscrete, &gf, 0.5).unwrap();
            assert!(r.max_abs < 1e-13, "residual {}", r.max_abs);
        }
    }

    #[test]
    fn dispersion_solutions_have_tiny_residuals() {
        let m = 0.5;
        let g = grid_bk();
        let s = DispersionSolution::space_discrete(&g, m, 1.25);
        let gf = s.grid_function(g).unwrap();
        assert!(residual(Family::SpaceDiscrete, &gf, m).unwrap().relative() < 1e-12);

        let g = grid_ci();
        let s = DispersionSolution::time_discrete(&g, m, 0.8);
        let gf = s.grid_function(g).unwrap();
        assert!(residual(Family::TimeDiscrete, &gf, m).unwrap().relative() < 1e-12);

        let g = grid_za();
        let s = DispersionSolution::fully_discrete(&g, m, 1.2);
        let gf = s.grid_function(g).unwrap();
        assert!(residual(Family::FullyDiscrete, &gf, m).unwrap().relative() < 1e-12);
        // The sample path (no closed form) agrees for the fully discrete family.
        let gf2 = GridFunction::from_samples(g, gf.values.clone()).unwrap();
        assert!(residual(Family::FullyDiscrete, &gf2, m).unwrap().relative() < 1e-12);
    }

    #[test]
    fn symmetry_operators_map_solutions_to_solutions() {
        let m = 0.5;
        let g = grid_bk();
        let sol = DispersionSolution::space_discrete(&g, m, 1.25).grid_function(g).unwrap();
        for case in Family::SpaceDiscrete.symmetry_cases() {
            for gen in case.generators() {
                let op = realize_at(*gen, *case, 0).unwrap();
                let mapped = apply_symmetry(Family::SpaceDiscrete, &op, &sol, m).unwrap();
                let r = residual(Family::SpaceDiscrete, &mapped, m).unwrap();
                assert!(
                    r.relative() < 1e-9,
                    "case {case} gen {gen}: rel {}",
                    r.relative()
                );
            }
        }
        let g = grid_ci();
        let sol = DispersionSolution::time_discrete(&g, m, 0.6).grid_function(g).unwrap();
        for case in Family::TimeDiscrete.symmetry_cases() {
            for gen in case.generators() {
                let op = realize_at(*gen, *case, 0).unwrap();
                let mapped = apply_symmetry(Family::TimeDiscrete, &op, &sol, m).unwrap();
                let r = residual(Family::TimeDiscrete, &mapped, m).unwrap();
                assert!(
                    r.relative() < 1e-9,
                    "case {case} gen {gen}: rel {}",
                    r.relative()
                );
            }
        }
    }

    #[test]
    fn samples_only_requires_closed_form() {
        let g = grid_bk();
        let gf = GridFunction::from_samples(g, vec![Complex64::from(1.0); g.nx * g.nt]).unwrap();
        assert_eq!(
            residual(Family::SpaceDiscrete, &gf, 0.5).unwrap_err(),
            LatticeError::ClosedFormRequired
        );
        let op = realize_at(GenName::D, AlgCase::ClassicalSpace, 0).unwrap();
        assert_eq!(
            apply_symmetry(Family::SpaceDiscrete, &op, &gf, 0.5).unwrap_err(),
            LatticeError::ClosedFormRequired
        );
    }

    #[test]
    fn exact_symmetry_factor_checks() {
        // Dilation on x^2 t in the mapped space case.
        let probe = PolyFunction::monomial(0, 2, 1, Scalar::one());
        assert!(symmetry_factor_check_exact(AlgCase::ClassicalSpace, GenName::D, &probe).unwrap());
        // Conformal generator on x^3 in the deformed space case.
        let probe = PolyFunction::monomial(0, 3, 0, Scalar::one());
        assert!(symmetry_factor_check_exact(AlgCase::Space, GenName::C, &probe).unwrap());
        // Central generator on anything.
        let probe = PolyFunction::monomial(0, 2, 2, Scalar::one());
        for case in AlgCase::SCHRODINGER {
            assert!(symmetry_factor_check_exact(case, GenName::M, &probe).unwrap());
        }
    }

    #[test]
    fn float_symmetry_factor_checks() {
        let m = 0.5;
        let g = grid_bk();
        let probe = NumFun::poly(3, 0).add(&NumFun::exp_wave(0.4.into(), 0.16.into()));
        for case in Family::SpaceDiscrete.symmetry_cases() {
            for gen in case.generators() {
                let op = realize_at(*gen, *case, 0).unwrap();
                let factor = symmetry_factor(*case, *gen).unwrap();
                let r = symmetry_factor_check_numeric(
                    Family::SpaceDiscrete,
                    &op,
                    &factor,
                    &probe,
                    &g,
                    m,
                )
                .unwrap();
                assert!(r.relative() < 1e-9, "case {case} gen {gen}: {}", r.relative());
            }
        }
    }

    #[test]
    fn kernel_ranks_agree() {
        for (case, z) in [
            (AlgCase::ClassicalSpace, Scalar::ratio(-1, 4)),
            (AlgCase::ClassicalTime, Scalar::ratio(-1, 20)),
        ] {
            let (sym_rank, sym_dim) = symbolic_kernel(case).unwrap();
            let (num_rank, num_dim) = sampled_kernel(case, &z, &Scalar::ratio(1, 2)).unwrap();
            assert_eq!(sym_rank, num_rank, "case {case}");
            assert_eq!(sym_dim, num_dim, "case {case}");
            assert_eq!(sym_dim, 4, "case {case}");
        }
    }

    #[test]
    fn heat_kernel_residual_shrinks_first_order() {
        let m = 0.5;
        let mut prev = f64::INFINITY;
        for sigma in [0.2, 0.1, 0.05, 0.025] {
            let r = heat_kernel_residual(m, sigma).unwrap();
            assert!(r < prev * 0.7, "sigma {sigma}: {r} vs prev {prev}");
            prev = r;
        }
    }

    #[test]
    fn dump_has_one_record_per_point() {
        let g = grid_bk();
        let gf = GridFunction::from_closed(g, ClosedForm::PolyExp(NumFun::poly(1, 1))).unwrap();
        let dump = gf.dump_records();
        assert_eq!(dump.lines().count(), g.nx * g.nt);
    }
}
