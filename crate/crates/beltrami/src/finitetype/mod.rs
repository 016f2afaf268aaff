//! Finite-type analysis of the Gauss map under the second-form operator:
//! iterate sample matrices, numerical rank, annihilating-polynomial search,
//! symbolic pole growth, and the registry of formula claims.

pub mod claims;

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::Rng;
use serde::Serialize;

use crate::error::{EngineError, Result};
use crate::frames::FrameVec;
use crate::geometry::{self, FormKind, SurfaceChart};
use crate::numeric::{fd_laplacian_ambient, ChartEvaluator, V3};
use crate::operator::BeltramiOp;
use crate::symexpr::numeric::seeded_rng;

/// Relative pivot threshold for rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;
/// Annihilator residuals below this count as finite-type evidence.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-6;
/// Largest iterate order served fully symbolically.
pub const K_MAX_SYMBOLIC: usize = 5;
/// Largest iterate order when stacked differencing may take over.
pub const K_MAX_NUMERIC: usize = 8;

/// Options shared by the sampling-based entry points.
#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    /// Requested sample points; raised to the 10 * (k + 1) floor.
    pub points: usize,
    pub seed: u64,
    pub budget: usize,
    pub rank_tol: f64,
    pub residual_tol: f64,
    /// Allow finite differences to extend past the symbolic budget.
    pub allow_numeric: bool,
    /// Fixed vector subtracted from the Gauss map in column zero.
    pub center: Option<V3>,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            points: 0,
            seed: 0,
            budget: crate::operator::DEFAULT_BUDGET,
            rank_tol: DEFAULT_RANK_TOL,
            residual_tol: DEFAULT_RESIDUAL_TOL,
            allow_numeric: false,
            center: None,
        }
    }
}

/// Stratified admissible sample points: five distinct spine parameters, and
/// angles drawn from [0.1, pi/2 - 0.1] and [pi/2 + 0.1, pi - 0.1] in
/// alternation, so both sign regimes of cos phi are always represented.
/// Points where the chart degenerates (small delta) are rejected.
pub fn stratified_points(ev: &ChartEvaluator, count: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = seeded_rng(seed);
    let us: Vec<f64> = (0..5).map(|_| rng.gen_range(0.3..6.0)).collect();
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    let mut slot = 0usize;
    while out.len() < count && attempts < 1000 * count.max(1) {
        attempts += 1;
        let u = us[(slot / 2) % 5];
        let upper = slot % 2 == 1;
        let phi = if upper {
            rng.gen_range((PI / 2.0 + 0.1)..(PI - 0.1))
        } else {
            rng.gen_range(0.1..(PI / 2.0 - 0.1))
        };
        if ev.delta(u, phi) < 0.08 {
            continue;
        }
        slot += 1;
        out.push((u, phi));
    }
    out
}

/// Sampled iterate columns of the Gauss map. Row layout stacks the three
/// ambient components of every sample point; column j holds the j-th
/// operator iterate (column zero is the Gauss map minus the chosen center).
#[derive(Debug, Clone)]
pub struct IterateMatrix {
    pub matrix: DMatrix<f64>,
    pub points: Vec<(f64, f64)>,
    pub k: usize,
    /// Iterate orders that were produced by stacked differencing.
    pub numeric_orders: Vec<usize>,
}

/// Symbolic iterates of the Gauss map up to order `k` (capped at
/// K_MAX_SYMBOLIC), paired with the worst (delta, cos phi) pole orders of
/// each iterate. The walk stays in canonical scalars between steps, so the
/// pole orders come straight off the denominators; it stops early on a
/// budget overflow when the caller allows a numeric continuation.
fn iterate_fields_with_poles(
    chart: &SurfaceChart,
    k: usize,
    budget: usize,
    allow_numeric: bool,
) -> Result<(Vec<FrameVec>, Vec<(u8, u8)>)> {
    let op = BeltramiOp::new(chart, FormKind::Second)?.with_budget(budget);
    let n = geometry::gauss_map_frame(chart)?;
    let mut rv = n.to_rvec()?;
    let mut fields = vec![n];
    let mut poles = Vec::new();
    for _ in 1..=k.min(K_MAX_SYMBOLIC) {
        match op.lap_rvec(&rv) {
            Ok(next) => {
                let mut worst = (0u8, 0u8);
                for comp in [&next.t, &next.h, &next.b] {
                    let (d, c, _, _) = comp.pole_orders();
                    worst.0 = worst.0.max(d);
                    worst.1 = worst.1.max(c);
                }
                poles.push(worst);
                fields.push(next.to_frame_vec());
                rv = next;
            }
            Err(EngineError::ExpressionBudgetExceeded { .. }) if allow_numeric => break,
            Err(e) => return Err(e),
        }
    }
    Ok((fields, poles))
}

/// Symbolic iterates of the Gauss map, stopping early on a budget overflow
/// when the caller allows a numeric continuation.
fn iterate_fields(
    chart: &SurfaceChart,
    k: usize,
    budget: usize,
    allow_numeric: bool,
) -> Result<Vec<FrameVec>> {
    Ok(iterate_fields_with_poles(chart, k, budget, allow_numeric)?.0)
}

/// Evaluator for iterate orders past the symbolic budget: the deepest
/// symbolic field is differenced through the operator, one level per missing
/// order, with all grid values memoized per sample point.
struct StackedEval<'a> {
    ev: &'a ChartEvaluator,
    base: &'a FrameVec,
    h: f64,
    cache: RefCell<BTreeMap<(usize, u64, u64), V3>>,
}

impl<'a> StackedEval<'a> {
    fn value(&self, depth: usize, u: f64, phi: f64) -> Result<V3> {
        let key = (depth, u.to_bits(), phi.to_bits());
        if let Some(v) = self.cache.borrow().get(&key) {
            return Ok(*v);
        }
        let v = if depth == 0 {
            self.ev.eval_frame_field(self.base, u, phi)?
        } else {
            let field =
                |uu: f64, pp: f64| -> Result<V3> { self.value(depth - 1, uu, pp) };
            fd_laplacian_ambient(self.ev, FormKind::Second, &field, u, phi, self.h, false)?
        };
        self.cache.borrow_mut().insert(key, v);
        Ok(v)
    }
}

/// Rejects iterate orders outside the supported range.
fn validate_order(k: usize, allow_numeric: bool) -> Result<()> {
    if k == 0 {
        return Err(EngineError::InvalidArgument(
            "iterate order must be at least 1".into(),
        ));
    }
    let cap = if allow_numeric {
        K_MAX_NUMERIC
    } else {
        K_MAX_SYMBOLIC
    };
    if k > cap {
        return Err(EngineError::InvalidArgument(format!(
            "iterate order {k} exceeds the supported maximum {cap}"
        )));
    }
    Ok(())
}

/// Builds the stacked iterate sample matrix with 3 * points rows and k + 1
/// columns. At least 10 * (k + 1) points are used regardless of the request.
pub fn iterate_matrix(
    chart: &SurfaceChart,
    k: usize,
    opts: &AnalysisOptions,
) -> Result<IterateMatrix> {
    validate_order(k, opts.allow_numeric)?;
    let fields = iterate_fields(chart, k, opts.budget, opts.allow_numeric)?;
    iterate_matrix_from_fields(chart, &fields, k, opts)
}

/// Sample-matrix construction over precomputed symbolic iterates.
fn iterate_matrix_from_fields(
    chart: &SurfaceChart,
    fields: &[FrameVec],
    k: usize,
    opts: &AnalysisOptions,
) -> Result<IterateMatrix> {
    let j_sym = fields.len() - 1;
    if k > j_sym + 3 {
        return Err(EngineError::InvalidArgument(format!(
            "order {k} needs {} stacked difference levels past the symbolic \
             budget; at most 3 stay numerically meaningful",
            k - j_sym
        )));
    }
    let ev = ChartEvaluator::new(chart)?;
    let pcount = opts.points.max(10 * (k + 1));
    let points = stratified_points(&ev, pcount, opts.seed);
    if points.len() < pcount {
        return Err(EngineError::IllConditionedSamples);
    }
    let mut matrix = DMatrix::zeros(3 * points.len(), k + 1);
    let center = opts.center.unwrap_or([0.0; 3]);
    for (p, &(u, phi)) in points.iter().enumerate() {
        let stacked = StackedEval {
            ev: &ev,
            base: &fields[j_sym],
            h: 2e-3,
            cache: RefCell::new(BTreeMap::new()),
        };
        for j in 0..=k {
            let mut val = if j <= j_sym {
                ev.eval_frame_field(&fields[j], u, phi)?
            } else {
                stacked.value(j - j_sym, u, phi)?
            };
            if j == 0 {
                for (vi, ci) in val.iter_mut().zip(center.iter()) {
                    *vi -= ci;
                }
            }
            for comp in 0..3 {
                matrix[(3 * p + comp, j)] = val[comp];
            }
        }
    }
    Ok(IterateMatrix {
        matrix,
        points,
        k,
        numeric_orders: ((j_sym + 1)..=k).collect(),
    })
}

/// Numerical rank from a column-pivoted QR factorization: pivots at least
/// `tol` times the largest count. Columns are normalized first, because
/// deep-pole iterates span many orders of magnitude and raw scales would
/// drown genuinely independent directions. A vanishing largest pivot means
/// the samples carry no information at all.
pub fn independence_rank(m: &DMatrix<f64>, tol: f64) -> Result<usize> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(0);
    }
    let mut scaled = m.clone();
    for mut col in scaled.column_iter_mut() {
        let norm = col.norm();
        if norm > 0.0 {
            col *= 1.0 / norm;
        }
    }
    let qr = scaled.col_piv_qr();
    let r = qr.r();
    let n = r.nrows().min(r.ncols());
    let mut largest = 0.0f64;
    for i in 0..n {
        largest = largest.max(r[(i, i)].abs());
    }
    if largest < 1e-12 {
        return Err(EngineError::IllConditionedSamples);
    }
    Ok((0..n).filter(|&i| r[(i, i)].abs() >= tol * largest).count())
}

/// Best monic annihilating polynomial of a fixed order, fitted by least
/// squares over the sampled iterates.
#[derive(Debug, Clone, Serialize)]
pub struct Annihilator {
    pub k: usize,
    /// Coefficients sigma_1 .. sigma_k of the monic polynomial.
    pub sigma: Vec<f64>,
    /// Center recovered from the constant block when sigma_k is nonzero.
    pub center: [f64; 3],
    /// Polynomial roots (re, im): the candidate eigenvalues.
    pub eigenvalues: Vec<(f64, f64)>,
    /// Relative least-squares residual of the fit.
    pub residual: f64,
}

/// Fits L^k n + sigma_1 L^{k-1} n + ... + sigma_k (n - c) = 0 in the least
/// squares sense. The unknown center enters through the substitution
/// d = sigma_k * c, which keeps the system linear; d occupies three extra
/// free columns aligned with the ambient components.
pub fn annihilator_search(im: &IterateMatrix, k: usize) -> Result<Annihilator> {
    if k == 0 || k > im.k {
        return Err(EngineError::InvalidArgument(format!(
            "annihilator order {k} is outside the sampled range 1..={}",
            im.k
        )));
    }
    let rows = im.matrix.nrows();
    let mut a = DMatrix::zeros(rows, k + 3);
    for j in 1..=k {
        for row in 0..rows {
            a[(row, j - 1)] = -im.matrix[(row, k - j)];
        }
    }
    for p in 0..rows / 3 {
        for comp in 0..3 {
            a[(3 * p + comp, k + comp)] = 1.0;
        }
    }
    let mut b = im.matrix.column(k).into_owned();
    // Equilibrate rows: each row is one scalar instance of the homogeneous
    // relation, so scaling it changes nothing exactly, but it stops the few
    // sample points nearest the singular set from dominating the fit.
    for row in 0..rows {
        let mut scale = b[row].abs();
        for col in 0..k + 3 {
            scale = scale.max(a[(row, col)].abs());
        }
        if scale > 0.0 {
            let w = 1.0 / scale;
            b[row] *= w;
            for col in 0..k + 3 {
                a[(row, col)] *= w;
            }
        }
    }
    let svd = nalgebra::SVD::new(a.clone(), true, true);
    let theta = svd
        .solve(&b, 1e-14)
        .map_err(|_| EngineError::IllConditionedSamples)?;
    let residual = (&a * &theta - &b).norm() / b.norm().max(f64::MIN_POSITIVE);
    let sigma: Vec<f64> = (0..k).map(|i| theta[i]).collect();
    let sk = sigma[k - 1];
    let center = if sk.abs() > 1e-12 {
        [theta[k] / sk, theta[k + 1] / sk, theta[k + 2] / sk]
    } else {
        [0.0; 3]
    };
    let mut companion = DMatrix::zeros(k, k);
    for i in 1..k {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..k {
        companion[(i, k - 1)] = -sigma[k - 1 - i];
    }
    let mut eigenvalues: Vec<(f64, f64)> = companion
        .complex_eigenvalues()
        .iter()
        .map(|z| (z.re, z.im))
        .collect();
    eigenvalues.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(Annihilator {
        k,
        sigma,
        center,
        eigenvalues,
        residual,
    })
}

/// Symbolic (delta, cos phi) pole orders of the first `k_max` iterates of
/// the Gauss map, maximized over the frame components. Tube charts grow as
/// (3k - 1, 3k - 2); circular spines as (2k - 1, 2k - 1). Stops quietly at
/// whatever order the budget still admits.
pub fn pole_growth(chart: &SurfaceChart, k_max: usize, budget: usize) -> Result<Vec<(u8, u8)>> {
    Ok(iterate_fields_with_poles(chart, k_max, budget, true)?.1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum TypeVerdict {
    /// Some order admitted an annihilator within the residual tolerance.
    FiniteTypeCandidate(usize),
    /// Every attempted order left a large residual with full column rank.
    InfiniteTypeEvidence,
}

/// Rank, residual, and pole evidence collected over iterate orders 1..=k.
#[derive(Debug, Clone, Serialize)]
pub struct TypeEvidence {
    pub chart: String,
    pub k_max: usize,
    /// ranks[k-1]: numerical rank of the first k + 1 iterate columns.
    pub ranks: Vec<usize>,
    /// residuals[k-1]: best annihilator residual at order k.
    pub residuals: Vec<f64>,
    /// Annihilator of the first order meeting the tolerance, if any.
    pub annihilator: Option<Annihilator>,
    /// Symbolic pole orders while the budget admits them (may be shorter
    /// than k_max).
    pub pole_orders: Vec<(u8, u8)>,
    pub verdict: TypeVerdict,
}

/// Runs the full sampling analysis on one chart: one symbolic walk feeds
/// both the sample matrix and the pole audit, then orders k = 1..=k_max are
/// scanned for rank growth and annihilators.
pub fn finite_type_analysis(
    chart: &SurfaceChart,
    k_max: usize,
    opts: &AnalysisOptions,
) -> Result<TypeEvidence> {
    validate_order(k_max, opts.allow_numeric)?;
    let (fields, pole_orders) =
        iterate_fields_with_poles(chart, k_max, opts.budget, opts.allow_numeric)?;
    let im = iterate_matrix_from_fields(chart, &fields, k_max, opts)?;
    let mut ranks = Vec::with_capacity(k_max);
    let mut residuals = Vec::with_capacity(k_max);
    let mut annihilator = None;
    for k in 1..=k_max {
        let sub = im.matrix.columns(0, k + 1).into_owned();
        ranks.push(independence_rank(&sub, opts.rank_tol)?);
        let ann = annihilator_search(&im, k)?;
        residuals.push(ann.residual);
        if ann.residual < opts.residual_tol && annihilator.is_none() {
            annihilator = Some(ann);
        }
    }
    let verdict = match &annihilator {
        Some(a) => TypeVerdict::FiniteTypeCandidate(a.k),
        None => TypeVerdict::InfiniteTypeEvidence,
    };
    Ok(TypeEvidence {
        chart: chart.kind.name().to_string(),
        k_max,
        ranks,
        residuals,
        annihilator,
        pole_orders,
        verdict,
    })
}
