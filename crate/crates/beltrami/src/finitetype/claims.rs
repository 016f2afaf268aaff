//! Registry of displayed-formula claims. Every claim hard-codes a published
//! display form, derives the engine counterpart from first principles, and
//! issues a subtraction-based verdict: the difference must fit the remainder
//! shape stated next to the display (bounds on the delta and cos phi pole
//! orders). Mismatch reports always carry an engine-derived difference.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{EngineError, Result};
use crate::frames::{AnyVec, FrameVec};
use crate::geometry::{
    self, make_anchor_ring, make_sphere, make_tube, FormKind, Orientation, Position, SurfaceChart,
};
use crate::operator::{verify_identity_eq4, BeltramiOp};
use crate::report::{ClaimReport, Details, Verdict};
use crate::symexpr::poly::{V_COS, V_DELTA, V_R};
use crate::symexpr::{canonicalize, equal, eval, leading_term, Expr, NumericProfile, Symbol};

use super::{annihilator_search, iterate_matrix, AnalysisOptions};

/// Claim identifiers with their human-readable anchors, in registry order.
const CLAIMS: &[(&str, &str)] = &[
    ("I-tube", "first fundamental form of the tube chart"),
    ("II-tube", "second fundamental form of the tube chart"),
    ("K-eq7", "Gauss curvature of the tube chart"),
    ("op-eq8", "expanded second-form operator on the tube chart"),
    ("gaussmap-eq9", "Gauss map of the tube chart"),
    ("dII-n-eq10", "first iterate of the tube Gauss map"),
    (
        "dII2-n-eq12",
        "second iterate of the tube Gauss map: tangent lead and remainder shape",
    ),
    (
        "dII3-n-eq13",
        "third iterate of the tube Gauss map: tangent lead and remainder shape",
    ),
    (
        "lemma1",
        "one-step recursion for scaled singular powers on the tube",
    ),
    ("I-ring", "first fundamental form of the anchor ring chart"),
    ("II-ring", "second fundamental form of the anchor ring chart"),
    ("op-eq17", "expanded second-form operator on the anchor ring chart"),
    ("dII-n-eq16/18", "first iterate of the ring Gauss map"),
    (
        "dII2-n-ring",
        "second iterate of the ring Gauss map: normal lead and remainder shape",
    ),
    (
        "eq19",
        "one application of the ring operator to sin^m / (delta cos)^n",
    ),
    (
        "eq20-k",
        "k-th iterate of the ring Gauss map: lead and remainder shape",
    ),
    ("hlambda", "product form of the tube iterate lead polynomials"),
    (
        "identity-eq4",
        "position Laplacian identity: L(x) = -(1/2K) grad3(K, n) - 2n",
    ),
    (
        "sphere-T1",
        "sphere position is a single eigenvector of the operator",
    ),
    (
        "sphere-T2",
        "sphere Gauss map is a single eigenvector of the operator",
    ),
];

/// Claims whose mismatch against the displayed form is analyzed and accepted
/// as a documented discrepancy: the engine derivation stands, the display
/// does not. These do not fail a verification run unless strict checking is
/// requested.
pub const DOCUMENTED_DISCREPANCIES: &[&str] = &[
    "dII3-n-eq13",
    "lemma1",
    "dII2-n-ring",
    "eq19",
    "eq20-k",
    "hlambda",
];

pub fn claim_ids() -> Vec<&'static str> {
    CLAIMS.iter().map(|(id, _)| *id).collect()
}

pub fn claim_anchor(id: &str) -> Option<&'static str> {
    CLAIMS.iter().find(|(cid, _)| *cid == id).map(|(_, a)| *a)
}

pub fn is_documented_discrepancy(id: &str) -> bool {
    DOCUMENTED_DISCREPANCIES.contains(&id)
}

/// Knobs shared by claim executions.
#[derive(Debug, Clone)]
pub struct ClaimOptions {
    pub seed: u64,
    pub budget: usize,
}

impl Default for ClaimOptions {
    fn default() -> Self {
        ClaimOptions {
            seed: 0,
            budget: crate::operator::DEFAULT_BUDGET,
        }
    }
}

/// Runs a single claim. Unknown identifiers and budget overflows surface as
/// errors so callers can map them to their own exit conventions; anything
/// else is captured in the report itself.
pub fn run_claim(id: &str, opts: &ClaimOptions) -> Result<ClaimReport> {
    let anchor = claim_anchor(id).ok_or_else(|| EngineError::UnknownClaim(id.to_string()))?;
    let out = match id {
        "I-tube" => claim_first_form_tube(),
        "II-tube" => claim_second_form_tube(),
        "K-eq7" => claim_gauss_curvature(),
        "op-eq8" => claim_tube_operator(),
        "gaussmap-eq9" => claim_gauss_map(),
        "dII-n-eq10" => claim_first_iterate_tube(opts),
        "dII2-n-eq12" => claim_second_iterate_tube(opts),
        "dII3-n-eq13" => claim_third_iterate_tube(opts),
        "lemma1" => claim_lemma_grid(opts),
        "I-ring" => claim_first_form_ring(),
        "II-ring" => claim_second_form_ring(),
        "op-eq17" => claim_ring_operator(),
        "dII-n-eq16/18" => claim_first_iterate_ring(opts),
        "dII2-n-ring" => claim_second_iterate_ring(opts),
        "eq19" => claim_ring_recurrence_grid(opts),
        "eq20-k" => claim_ring_iterate_leads(opts),
        "hlambda" => h_lambda_check(4),
        "identity-eq4" => Ok(claim_identity()),
        "sphere-T1" => claim_sphere_position(),
        "sphere-T2" => claim_sphere_gauss_map(opts),
        _ => unreachable!("anchored ids are dispatched"),
    };
    match out {
        Ok(rep) => Ok(rep),
        Err(e @ EngineError::ExpressionBudgetExceeded { .. }) => Err(e),
        Err(e) => Ok(ClaimReport::error(id, anchor, &e)),
    }
}

/// Runs every registered claim in order; failures of any kind are captured
/// per report so the sweep never aborts.
pub fn claim_registry_run(opts: &ClaimOptions) -> Vec<ClaimReport> {
    CLAIMS
        .iter()
        .map(|(id, anchor)| match run_claim(id, opts) {
            Ok(rep) => rep,
            Err(e) => ClaimReport::error(id, anchor, &e),
        })
        .collect()
}

fn report(
    id: &str,
    verdict: Verdict,
    expected: String,
    computed: String,
    details: Details,
) -> ClaimReport {
    ClaimReport {
        claim_id: id.into(),
        anchor: claim_anchor(id).expect("registered id").into(),
        verdict,
        expected,
        computed,
        details,
    }
}

fn frame_display(v: &FrameVec) -> Result<String> {
    Ok(format!(
        "t: {} | h: {} | b: {}",
        canonicalize(&v.a_t)?,
        canonicalize(&v.a_h)?,
        canonicalize(&v.a_b)?
    ))
}

fn form_display(g11: &Expr, g12: &Expr, g22: &Expr) -> Result<String> {
    Ok(format!(
        "g11 = {}; g12 = {}; g22 = {}",
        canonicalize(g11)?,
        canonicalize(g12)?,
        canonicalize(g22)?
    ))
}

/// Pole-order bounds of a stated remainder shape. `kappa: None` leaves the
/// curvature pole unconstrained (constant-spine charts keep kappa in the
/// coefficient ring).
struct Shape {
    delta: u8,
    cos: u8,
    kappa: Option<u8>,
}

fn shape_violation(e: &Expr, shape: &Shape) -> Result<Option<String>> {
    let canon = canonicalize(e)?;
    let (d, c, k, _) = canon.denominator_exponents();
    let mut bad = Vec::new();
    if d > shape.delta {
        bad.push(format!("delta pole {d} exceeds bound {}", shape.delta));
    }
    if c > shape.cos {
        bad.push(format!("cos pole {c} exceeds bound {}", shape.cos));
    }
    if let Some(kb) = shape.kappa {
        if k > kb {
            bad.push(format!("kappa pole {k} exceeds bound {kb}"));
        }
    }
    if bad.is_empty() {
        Ok(None)
    } else {
        Ok(Some(bad.join(", ")))
    }
}

fn vec_shape_violation(v: &FrameVec, shape: &Shape) -> Result<Option<String>> {
    for (name, comp) in [("t", &v.a_t), ("h", &v.a_h), ("b", &v.a_b)] {
        if let Some(msg) = shape_violation(comp, shape)? {
            return Ok(Some(format!("{name} component: {msg}")));
        }
    }
    Ok(None)
}

/// Iterates of the Gauss map under the second-form operator on a chart.
fn gauss_iterates(chart: &SurfaceChart, k: usize, budget: usize) -> Result<Vec<FrameVec>> {
    let op = BeltramiOp::new(chart, FormKind::Second)?.with_budget(budget);
    let n = geometry::gauss_map_frame(chart)?;
    op.iterate(&AnyVec::Frame(n), k)?
        .into_iter()
        .map(|v| match v {
            AnyVec::Frame(f) => Ok(f),
            AnyVec::Ambient(_) => unreachable!("frame input stays frame"),
        })
        .collect()
}

/// Coefficient of the deepest tied (delta, cos) pole layer of a reduced
/// form: the numerator monomials carrying zero exponents in both atoms.
/// Returns the rational, the effective r pole of that layer, and the
/// denominator (delta, cos) orders, provided the layer is a plain constant
/// times a power of r.
fn tied_layer(e: &Expr) -> Result<Option<(BigRational, i16, (u8, u8))>> {
    let canon = canonicalize(e)?;
    if canon.is_zero() {
        return Ok(None);
    }
    let rat = &canon.rat;
    let (dp, cp, _, rp) = rat.pole_orders();
    let mut found: Option<(BigRational, i16)> = None;
    for (mono, coeff) in rat.num.terms() {
        if mono[V_DELTA] != 0 || mono[V_COS] != 0 {
            continue;
        }
        if mono
            .iter()
            .enumerate()
            .any(|(v, ex)| *ex != 0 && v != V_R)
        {
            return Ok(None);
        }
        let r_pole = rp as i16 - mono[V_R] as i16;
        match &mut found {
            None => found = Some((coeff.clone(), r_pole)),
            Some(_) => return Ok(None),
        }
    }
    Ok(found.map(|(q, r_pole)| (q, r_pole, (dp, cp))))
}

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

// -------------------------------------------------------------------------
// tube chart claims

fn claim_form(
    id: &str,
    chart: &SurfaceChart,
    which: FormKind,
    expected: (Expr, Expr, Expr),
) -> Result<ClaimReport> {
    let form = match which {
        FormKind::First => geometry::first_form(chart)?,
        FormKind::Second => geometry::second_form(chart)?,
        FormKind::Third => geometry::third_form(chart)?,
    };
    let ok = equal(&form.g11, &expected.0)?
        && equal(&form.g12, &expected.1)?
        && equal(&form.g22, &expected.2)?;
    let expected_s = form_display(&expected.0, &expected.1, &expected.2)?;
    let computed_s = form_display(&form.g11, &form.g12, &form.g22)?;
    let mut details = Details::default();
    let verdict = if ok {
        Verdict::Pass
    } else {
        details.difference = Some(form_display(
            &(form.g11.clone() - expected.0),
            &(form.g12.clone() - expected.1),
            &(form.g22.clone() - expected.2),
        )?);
        Verdict::Mismatch
    };
    Ok(report(id, verdict, expected_s, computed_s, details))
}

fn claim_first_form_tube() -> Result<ClaimReport> {
    let d = Expr::delta();
    let r = Expr::radius();
    let tau = Expr::tau(0);
    claim_form(
        "I-tube",
        &make_tube(),
        FormKind::First,
        (
            d.clone() * d + r.clone() * r.clone() * tau.clone() * tau.clone(),
            r.clone() * r.clone() * tau,
            r.clone() * r,
        ),
    )
}

fn claim_second_form_tube() -> Result<ClaimReport> {
    let d = Expr::delta();
    let r = Expr::radius();
    let c = Expr::cos_phi();
    let k = Expr::kappa(0);
    let tau = Expr::tau(0);
    claim_form(
        "II-tube",
        &make_tube(),
        FormKind::Second,
        (
            -(k * d * c) + r.clone() * tau.clone() * tau.clone(),
            r.clone() * tau,
            r,
        ),
    )
}

fn claim_gauss_curvature() -> Result<ClaimReport> {
    let tube = make_tube();
    let expected = -(Expr::kappa(0) * Expr::cos_phi()) * (Expr::radius() * Expr::delta()).recip();
    let computed = geometry::gauss_curvature(&tube)?;
    let ok = equal(&computed, &expected)?;
    let profile = NumericProfile::constant_spine(1.0, 0.5, std::f64::consts::PI / 3.0);
    let spot = eval(&computed, &profile)?;
    let residual = (spot + 4.0 / 3.0).abs();
    let mut details = Details::note(format!(
        "spot value at (kappa, r, phi) = (1, 1/2, pi/3): {spot:.15} against -4/3"
    ));
    details.residual = Some(residual);
    let verdict = if ok && residual < 1e-12 {
        Verdict::Pass
    } else {
        details.difference = Some(format!("{}", canonicalize(&(computed.clone() - expected.clone()))?));
        Verdict::Mismatch
    };
    Ok(report(
        "K-eq7",
        verdict,
        format!("{}", canonicalize(&expected)?),
        format!("{}", canonicalize(&computed)?),
        details,
    ))
}

fn claim_tube_operator() -> Result<ClaimReport> {
    let op = BeltramiOp::new(&make_tube(), FormKind::Second)?;
    let d = Expr::delta;
    let c = Expr::cos_phi;
    let s = Expr::sin_phi;
    let r = Expr::radius;
    let k = || Expr::kappa(0);
    let tau = || Expr::tau(0);
    let two = Expr::from_int(2);
    let pre = (k() * d() * c()).recip();
    let exp_cuu = pre.clone();
    let exp_cuphi = -(two.clone() * tau()) * pre.clone();
    let exp_cphiphi = (tau() * tau() - k() * d() * c() * r().recip()) * pre.clone();
    let exp_cu = (Expr::one() - two.clone() * d())
        * Expr::beta()
        * (two.clone() * (k() * d() * c()).powi(2)).recip();
    let exp_cphi = pre.clone()
        * (-Expr::tau(1)
            + tau() * Expr::beta() * (two.clone() * d() - Expr::one())
                * (two.clone() * k() * d() * c()).recip()
            + k() * (two.clone() * d() - Expr::one()) * s() * (two.clone() * r()).recip());
    let pairs = [
        ("c_uu", &op.drift.c_uu, &exp_cuu),
        ("c_uphi", &op.drift.c_uphi, &exp_cuphi),
        ("c_phiphi", &op.drift.c_phiphi, &exp_cphiphi),
        ("c_u", &op.drift.c_u, &exp_cu),
        ("c_phi", &op.drift.c_phi, &exp_cphi),
    ];
    let mut bad = Vec::new();
    for (name, got, want) in &pairs {
        if !equal(got, want)? {
            bad.push(format!(
                "{name}: engine {} vs displayed {}",
                canonicalize(got)?,
                canonicalize(want)?
            ));
        }
    }
    let expected_s = format!(
        "c_uu = {}; c_uphi = {}; c_phiphi = {}; c_u = {}; c_phi = {}",
        canonicalize(&exp_cuu)?,
        canonicalize(&exp_cuphi)?,
        canonicalize(&exp_cphiphi)?,
        canonicalize(&exp_cu)?,
        canonicalize(&exp_cphi)?
    );
    let computed_s = format!(
        "c_uu = {}; c_uphi = {}; c_phiphi = {}; c_u = {}; c_phi = {}",
        canonicalize(&op.drift.c_uu)?,
        canonicalize(&op.drift.c_uphi)?,
        canonicalize(&op.drift.c_phiphi)?,
        canonicalize(&op.drift.c_u)?,
        canonicalize(&op.drift.c_phi)?
    );
    let mut details = Details::default();
    let verdict = if bad.is_empty() {
        Verdict::Pass
    } else {
        details.difference = Some(bad.join("; "));
        Verdict::Mismatch
    };
    Ok(report("op-eq8", verdict, expected_s, computed_s, details))
}

fn claim_gauss_map() -> Result<ClaimReport> {
    let tube = make_tube();
    let n = geometry::gauss_map_frame(&tube)?;
    let expected = FrameVec::new(Expr::zero(), -Expr::cos_phi(), -Expr::sin_phi());
    let ok = n.sub(&expected).is_zero()?;
    let lambda = geometry::orientation_factor(&tube)?;
    let lambda_expected = Expr::radius() * Expr::delta();
    let lambda_ok = equal(&lambda, &lambda_expected)?;
    let mut details = Details::note(format!(
        "cross(x_u, x_phi) = lambda n with lambda = {}",
        canonicalize(&lambda)?
    ));
    let verdict = if ok && lambda_ok {
        Verdict::Pass
    } else {
        details.difference = Some(frame_display(&n.sub(&expected))?);
        Verdict::Mismatch
    };
    Ok(report(
        "gaussmap-eq9",
        verdict,
        frame_display(&expected)?,
        frame_display(&n)?,
        details,
    ))
}

/// Displayed first iterate on the tube: the exact three components.
fn tube_first_iterate_display() -> FrameVec {
    let d = Expr::delta;
    let c = Expr::cos_phi;
    let s = Expr::sin_phi;
    let r = Expr::radius;
    let two = Expr::from_int(2);
    let t = Expr::beta() * (two.clone() * Expr::kappa(0) * d().powi(2) * c()).recip();
    let h = s().powi(2) * (two.clone() * r() * d() * c()).recip()
        + c() * (r() * d()).recip()
        - two.clone() * c() * r().recip();
    let b = (Expr::one() - Expr::from_int(4) * d()) * s() * (two * r() * d()).recip();
    FrameVec::new(t, h, b)
}

fn claim_first_iterate_tube(opts: &ClaimOptions) -> Result<ClaimReport> {
    let iters = gauss_iterates(&make_tube(), 1, opts.budget)?;
    let computed = &iters[0];
    let expected = tube_first_iterate_display();
    let diff = computed.sub(&expected);
    let ok = diff.is_zero()?;
    let mut details = Details::default();
    let verdict = if ok {
        Verdict::Pass
    } else {
        details.difference = Some(frame_display(&diff)?);
        Verdict::Mismatch
    };
    Ok(report(
        "dII-n-eq10",
        verdict,
        frame_display(&expected)?,
        frame_display(computed)?,
        details,
    ))
}

/// Displayed tangent lead of the second tube iterate.
fn tube_second_lead() -> Expr {
    let d = Expr::delta;
    (Expr::from_int(3) * d() - Expr::from_int(2))
        * (Expr::from_int(12) * d() - Expr::from_int(7))
        * Expr::beta().powi(3)
        * (Expr::from_int(4) * Expr::kappa(0).powi(4) * d().powi(5) * Expr::cos_phi().powi(4))
            .recip()
}

fn claim_second_iterate_tube(opts: &ClaimOptions) -> Result<ClaimReport> {
    let iters = gauss_iterates(&make_tube(), 2, opts.budget)?;
    let v = &iters[1];
    let lead = tube_second_lead();
    let rem = FrameVec::new(v.a_t.clone() - lead, v.a_h.clone(), v.a_b.clone());
    let shape = Shape {
        delta: 4,
        cos: 4,
        kappa: Some(4),
    };
    let violation = vec_shape_violation(&rem, &shape)?;
    let expected_s = "t lead (3 delta - 2)(12 delta - 7) beta^3 / (4 kappa^4 delta^5 cos^4) \
                      plus a remainder vector within (kappa delta cos)^-4"
        .to_string();
    let computed_s = format!(
        "deepest delta layer of the t component (pole {}): {}",
        canonicalize(&v.a_t)?.denominator_exponents().0,
        canonicalize(&leading_term(&v.a_t, Symbol::Delta)?)?
    );
    let mut details = Details::default();
    let verdict = match violation {
        None => {
            details
                .notes
                .push("subtracting the displayed lead drops the t pole to the stated bound".into());
            Verdict::Pass
        }
        Some(msg) => {
            details.difference = Some(format!(
                "{msg}; deepest delta layer of the difference: {}",
                canonicalize(&leading_term(&rem.a_t, Symbol::Delta)?)?
            ));
            Verdict::Mismatch
        }
    };
    Ok(report("dII2-n-eq12", verdict, expected_s, computed_s, details))
}

/// Displayed tangent lead of the third tube iterate, with its factor
/// (9 delta - 7), and the corrected factor the one-step recursion produces.
fn tube_third_lead(nine_delta_term: i64) -> Expr {
    let d = Expr::delta;
    (Expr::from_int(3) * d() - Expr::from_int(2))
        * (Expr::from_int(12) * d() - Expr::from_int(7))
        * (Expr::from_int(9) * d() - Expr::from_int(nine_delta_term))
        * (Expr::from_int(24) * d() - Expr::from_int(13))
        * Expr::beta().powi(5)
        * (Expr::from_int(8) * Expr::kappa(0).powi(7) * d().powi(8) * Expr::cos_phi().powi(7))
            .recip()
}

fn claim_third_iterate_tube(opts: &ClaimOptions) -> Result<ClaimReport> {
    let iters = gauss_iterates(&make_tube(), 3, opts.budget)?;
    let v = &iters[2];
    let shape = Shape {
        delta: 7,
        cos: 7,
        kappa: Some(7),
    };
    let printed = tube_third_lead(7);
    let rem_printed = FrameVec::new(
        v.a_t.clone() - printed.clone(),
        v.a_h.clone(),
        v.a_b.clone(),
    );
    let violation = vec_shape_violation(&rem_printed, &shape)?;
    let corrected = tube_third_lead(5);
    let rem_corrected = FrameVec::new(
        v.a_t.clone() - corrected.clone(),
        v.a_h.clone(),
        v.a_b.clone(),
    );
    let corrected_fits = vec_shape_violation(&rem_corrected, &shape)?.is_none();
    let expected_s = "t lead (3 delta - 2)(12 delta - 7)(9 delta - 7)(24 delta - 13) beta^5 \
                      / (8 kappa^7 delta^8 cos^7) plus a remainder vector within \
                      (kappa delta cos)^-7"
        .to_string();
    let computed_s = format!(
        "deepest delta layer of the t component (pole {}): {}",
        canonicalize(&v.a_t)?.denominator_exponents().0,
        canonicalize(&leading_term(&v.a_t, Symbol::Delta)?)?
    );
    let mut details = Details::default();
    if corrected_fits {
        details.notes.push(
            "replacing the factor (9 delta - 7) by (9 delta - 5) makes the remainder fit the \
             stated shape; the recursion produces (9 delta - 5)"
                .into(),
        );
    }
    let verdict = match violation {
        None => Verdict::Pass,
        Some(msg) => {
            details.difference = Some(format!(
                "{msg}; deepest delta layer of the difference: {}",
                canonicalize(&leading_term(&rem_printed.a_t, Symbol::Delta)?)?
            ));
            Verdict::Mismatch
        }
    };
    Ok(report("dII3-n-eq13", verdict, expected_s, computed_s, details))
}

/// Output polynomial of the one-step recursion for h(delta).
fn lemma_tilde(n: u32, h: &Expr) -> Expr {
    let d = Expr::delta;
    (Expr::from_int(2 * n as i64 - 1) * d() - Expr::from_int(n as i64))
        * (Expr::from_int(4 * (n as i64 + 1)) * d() - Expr::from_int(2 * n as i64 + 3))
        * h.clone()
}

/// One lemma case: applies the tube operator to
/// h(delta) beta^m / (delta^n (kappa cos)^(n-1)) and compares against the
/// displayed output -htilde beta^(m+2) / (2 delta^(n+3) (kappa cos)^(n+2)),
/// where the remainder must stay within (kappa delta cos)^-(n+2).
/// Returns the printed-form violation, whether the sign-corrected output
/// fits, and a one-line summary.
fn lemma_case(
    op: &BeltramiOp,
    m: u32,
    n: u32,
    h: &Expr,
) -> Result<(Option<String>, bool, String, Expr)> {
    let d = Expr::delta;
    let kc = || Expr::kappa(0) * Expr::cos_phi();
    let field = h.clone()
        * Expr::beta().powi(m as i32)
        * (d().powi(n as i32) * kc().powi(n as i32 - 1)).recip();
    let computed = op.laplacian(&field)?;
    let tilde = lemma_tilde(n, h);
    let out = |sign: i64| {
        Expr::from_int(sign)
            * tilde.clone()
            * Expr::beta().powi(m as i32 + 2)
            * (Expr::from_int(2) * d().powi(n as i32 + 3) * kc().powi(n as i32 + 2)).recip()
    };
    let shape = Shape {
        delta: n as u8 + 2,
        cos: n as u8 + 2,
        kappa: Some(n as u8 + 2),
    };
    let rem_printed = computed.clone() - out(-1);
    let printed_violation = shape_violation(&rem_printed, &shape)?;
    let rem_corrected = computed.clone() - out(1);
    let corrected_fits = shape_violation(&rem_corrected, &shape)?.is_none();
    let line = format!(
        "m={m} n={n} h={}: printed output {}, sign-corrected output {}",
        canonicalize(h)?,
        if printed_violation.is_none() {
            "fits"
        } else {
            "leaves the stated shape"
        },
        if corrected_fits { "fits" } else { "does not fit" },
    );
    Ok((printed_violation, corrected_fits, line, rem_printed))
}

/// Checks one instance of the recursion lemma as a standalone claim.
pub fn lemma1_check(m: u32, n: u32, h: &Expr) -> Result<ClaimReport> {
    if m == 0 || n == 0 {
        return Err(EngineError::InvalidArgument(
            "lemma indices start at 1".into(),
        ));
    }
    let op = BeltramiOp::new(&make_tube(), FormKind::Second)?;
    let (violation, corrected_fits, line, rem) = lemma_case(&op, m, n, h)?;
    let expected_s = format!(
        "L(h beta^{m} / (delta^{n} (kappa cos)^{})) = -htilde beta^{} / (2 delta^{} (kappa cos)^{}) \
         + remainder within (kappa delta cos)^-{}, htilde = ((2n-1) delta - n)(4(n+1) delta - (2n+3)) h",
        n - 1,
        m + 2,
        n + 3,
        n + 2,
        n + 2
    );
    let mut details = Details::note(line);
    if corrected_fits {
        details.notes.push(
            "the engine derives the opposite sign: +htilde beta^(m+2) / (2 delta^(n+3) (kappa cos)^(n+2))"
                .into(),
        );
    }
    let verdict = match violation {
        None => Verdict::Pass,
        Some(msg) => {
            details.difference = Some(format!(
                "{msg}; deepest delta layer of (computed - printed): {}",
                canonicalize(&leading_term(&rem, Symbol::Delta)?)?
            ));
            Verdict::Mismatch
        }
    };
    Ok(report(
        "lemma1",
        verdict,
        expected_s,
        "operator output of the scaled singular power".into(),
        details,
    ))
}

fn claim_lemma_grid(_opts: &ClaimOptions) -> Result<ClaimReport> {
    let op = BeltramiOp::new(&make_tube(), FormKind::Second)?;
    let mut cases: Vec<(u32, u32, Expr)> = Vec::new();
    for m in 1..=3u32 {
        for n in 1..=3u32 {
            cases.push((m, n, Expr::one()));
        }
    }
    cases.push((1, 2, Expr::delta()));
    let mut details = Details::default();
    let mut first_difference = None;
    let mut all_printed_ok = true;
    let mut all_corrected_ok = true;
    for (m, n, h) in &cases {
        let (violation, corrected_fits, line, rem) = lemma_case(&op, *m, *n, h)?;
        details.notes.push(line);
        if let Some(msg) = violation {
            all_printed_ok = false;
            if first_difference.is_none() {
                first_difference = Some(format!(
                    "m={m} n={n}: {msg}; deepest delta layer of (computed - printed): {}",
                    canonicalize(&leading_term(&rem, Symbol::Delta)?)?
                ));
            }
        }
        all_corrected_ok &= corrected_fits;
    }
    if all_corrected_ok {
        details.notes.push(
            "every case fits after flipping the printed output sign to +htilde / (2 ...)".into(),
        );
    }
    let verdict = if all_printed_ok {
        Verdict::Pass
    } else {
        details.difference = first_difference;
        Verdict::Mismatch
    };
    Ok(report(
        "lemma1",
        verdict,
        "printed recursion output -htilde beta^(m+2) / (2 delta^(n+3) (kappa cos)^(n+2)) \
         with remainder within (kappa delta cos)^-(n+2)"
            .into(),
        "operator outputs over m, n in 1..=3 and a degree-one h".into(),
        details,
    ))
}

// -------------------------------------------------------------------------
// anchor ring claims

fn claim_first_form_ring() -> Result<ClaimReport> {
    let d = Expr::delta();
    let r = Expr::radius();
    claim_form(
        "I-ring",
        &make_anchor_ring(),
        FormKind::First,
        (d.clone() * d, Expr::zero(), r.clone() * r),
    )
}

fn claim_second_form_ring() -> Result<ClaimReport> {
    claim_form(
        "II-ring",
        &make_anchor_ring(),
        FormKind::Second,
        (
            -(Expr::kappa(0) * Expr::delta() * Expr::cos_phi()),
            Expr::zero(),
            Expr::radius(),
        ),
    )
}

fn claim_ring_operator() -> Result<ClaimReport> {
    let op = BeltramiOp::new(&make_anchor_ring(), FormKind::Second)?;
    let d = Expr::delta;
    let c = Expr::cos_phi;
    let two = Expr::from_int(2);
    let pre = (Expr::kappa(0) * d() * c()).recip();
    let exp_cuu = pre.clone();
    let exp_cphiphi = -Expr::radius().recip();
    let exp_cphi = pre
        * Expr::kappa(0)
        * (two.clone() * d() - Expr::one())
        * Expr::sin_phi()
        * (two * Expr::radius()).recip();
    let pairs = [
        ("c_uu", &op.drift.c_uu, &exp_cuu),
        ("c_uphi", &op.drift.c_uphi, &Expr::zero()),
        ("c_phiphi", &op.drift.c_phiphi, &exp_cphiphi),
        ("c_u", &op.drift.c_u, &Expr::zero()),
        ("c_phi", &op.drift.c_phi, &exp_cphi),
    ];
    let mut bad = Vec::new();
    for (name, got, want) in &pairs {
        if !equal(got, want)? {
            bad.push(format!(
                "{name}: engine {} vs displayed {}",
                canonicalize(got)?,
                canonicalize(want)?
            ));
        }
    }
    let expected_s = format!(
        "c_uu = {}; c_uphi = 0; c_phiphi = {}; c_u = 0; c_phi = {}",
        canonicalize(&exp_cuu)?,
        canonicalize(&exp_cphiphi)?,
        canonicalize(&exp_cphi)?
    );
    let computed_s = format!(
        "c_uu = {}; c_uphi = {}; c_phiphi = {}; c_u = {}; c_phi = {}",
        canonicalize(&op.drift.c_uu)?,
        canonicalize(&op.drift.c_uphi)?,
        canonicalize(&op.drift.c_phiphi)?,
        canonicalize(&op.drift.c_u)?,
        canonicalize(&op.drift.c_phi)?
    );
    let mut details = Details::default();
    let verdict = if bad.is_empty() {
        Verdict::Pass
    } else {
        details.difference = Some(bad.join("; "));
        Verdict::Mismatch
    };
    Ok(report("op-eq17", verdict, expected_s, computed_s, details))
}

fn claim_first_iterate_ring(opts: &ClaimOptions) -> Result<ClaimReport> {
    let iters = gauss_iterates(&make_anchor_ring(), 1, opts.budget)?;
    let v = &iters[0];
    let display = tube_first_iterate_display();
    // the ring display drops the tangential component (beta vanishes)
    let expected = FrameVec::new(Expr::zero(), display.a_h, display.a_b);
    let diff = v.sub(&expected);
    let ok = diff.is_zero()?;
    // lead form: sin^2 / (2 r delta cos) on h with remainder F_1 / delta
    let lead = Expr::sin_phi().powi(2)
        * (Expr::from_int(2) * Expr::radius() * Expr::delta() * Expr::cos_phi()).recip();
    let rem = FrameVec::new(
        v.a_t.clone(),
        v.a_h.clone() - lead,
        v.a_b.clone(),
    );
    let lead_violation = vec_shape_violation(
        &rem,
        &Shape {
            delta: 1,
            cos: 0,
            kappa: None,
        },
    )?;
    let mut details = Details::default();
    match &lead_violation {
        None => details
            .notes
            .push("after removing the h lead the remainder fits F_1 / delta".into()),
        Some(msg) => details.notes.push(format!("lead remainder check: {msg}")),
    }
    let verdict = if ok && lead_violation.is_none() {
        Verdict::Pass
    } else {
        details.difference = Some(frame_display(&diff)?);
        Verdict::Mismatch
    };
    Ok(report(
        "dII-n-eq16/18",
        verdict,
        frame_display(&expected)?,
        frame_display(v)?,
        details,
    ))
}

/// Printed lead of the k-th ring iterate on the h component.
fn ring_printed_lead(k: u32) -> Expr {
    let sign = if k % 2 == 1 { 1 } else { -1 };
    let coeff = sign * 3i64.pow(k - 1);
    Expr::from_int(coeff)
        * Expr::sin_phi().powi(2 * k as i32)
        * ((Expr::from_int(2) * Expr::radius()).powi(k as i32)
            * (Expr::delta() * Expr::cos_phi()).powi(2 * k as i32 - 1))
        .recip()
}

fn ring_remainder_shape(k: u32) -> Shape {
    Shape {
        delta: 2 * k as u8 - 1,
        cos: 2 * k as u8 - 2,
        kappa: None,
    }
}

fn claim_second_iterate_ring(opts: &ClaimOptions) -> Result<ClaimReport> {
    let iters = gauss_iterates(&make_anchor_ring(), 2, opts.budget)?;
    let v = &iters[1];
    let lead = ring_printed_lead(2);
    let rem = FrameVec::new(v.a_t.clone(), v.a_h.clone() - lead, v.a_b.clone());
    let violation = vec_shape_violation(&rem, &ring_remainder_shape(2))?;
    let mut details = Details::default();
    if let Some((q, rp, poles)) = tied_layer(&v.a_h)? {
        let a2 = q.clone() * big(4);
        details.notes.push(format!(
            "deepest tied layer of the h component: coefficient {q} over r^{rp} (delta cos)^{}; \
             lead scale a_2 = {a2} against printed -3",
            poles.0
        ));
    }
    let expected_s = "h lead -3 sin^4 / (4 r^2 (delta cos)^3) plus a remainder vector within \
                      delta^-3 cos^-2"
        .to_string();
    let computed_s = frame_display(v)?;
    let verdict = match violation {
        None => Verdict::Pass,
        Some(msg) => {
            details.difference = Some(format!(
                "{msg}; deepest cos layer of the h difference: {}",
                canonicalize(&leading_term(&rem.a_h, Symbol::CosPhi)?)?
            ));
            Verdict::Mismatch
        }
    };
    Ok(report("dII2-n-ring", verdict, expected_s, computed_s, details))
}

/// One application of the ring operator to sin^m phi / (delta cos phi)^n,
/// checked against the printed output 3 sin^(m+2) / (2 r (delta cos)^(n+2))
/// with remainder within (delta cos)^-(n+1).
pub fn eq13_check(m: u32, n: u32) -> Result<ClaimReport> {
    if m == 0 || n == 0 {
        return Err(EngineError::InvalidArgument(
            "power indices start at 1".into(),
        ));
    }
    let op = BeltramiOp::new(&make_anchor_ring(), FormKind::Second)?;
    let (violation, line, rem, engine_coeff) = eq13_case(&op, m, n)?;
    let expected_s = format!(
        "L(sin^{m} / (delta cos)^{n}) = 3 sin^{} / (2 r (delta cos)^{}) + remainder within \
         (delta cos)^-{}",
        m + 2,
        n + 2,
        n + 1
    );
    let mut details = Details::note(line);
    details.notes.push(format!(
        "engine lead coefficient -n(2n+1)/(2 r) = {engine_coeff}/(2 r) verified by subtraction"
    ));
    let verdict = match violation {
        None => Verdict::Pass,
        Some(msg) => {
            details.difference = Some(format!(
                "{msg}; deepest delta layer of (computed - printed): {}",
                canonicalize(&leading_term(&rem, Symbol::Delta)?)?
            ));
            Verdict::Mismatch
        }
    };
    Ok(report(
        "eq19",
        verdict,
        expected_s,
        "ring operator output of the power field".into(),
        details,
    ))
}

fn eq13_case(
    op: &BeltramiOp,
    m: u32,
    n: u32,
) -> Result<(Option<String>, String, Expr, i64)> {
    let dc = || Expr::delta() * Expr::cos_phi();
    let field = Expr::sin_phi().powi(m as i32) * dc().powi(-(n as i32));
    let computed = op.laplacian(&field)?;
    let printed = Expr::from_int(3)
        * Expr::sin_phi().powi(m as i32 + 2)
        * (Expr::from_int(2) * Expr::radius() * dc().powi(n as i32 + 2)).recip();
    let shape = Shape {
        delta: n as u8 + 1,
        cos: n as u8 + 1,
        kappa: None,
    };
    let rem_printed = computed.clone() - printed;
    let violation = shape_violation(&rem_printed, &shape)?;
    let coeff = -((n as i64) * (2 * n as i64 + 1));
    let engine_lead = Expr::from_int(coeff)
        * Expr::sin_phi().powi(m as i32 + 2)
        * (Expr::from_int(2) * Expr::radius() * dc().powi(n as i32 + 2)).recip();
    let engine_fits = shape_violation(&(computed - engine_lead), &shape)?.is_none();
    let line = format!(
        "m={m} n={n}: printed coefficient 3 {}, engine coefficient {coeff} {}",
        if violation.is_none() {
            "fits"
        } else {
            "leaves the stated shape"
        },
        if engine_fits { "fits" } else { "does not fit" },
    );
    Ok((violation, line, rem_printed, coeff))
}

fn claim_ring_recurrence_grid(_opts: &ClaimOptions) -> Result<ClaimReport> {
    let op = BeltramiOp::new(&make_anchor_ring(), FormKind::Second)?;
    let mut details = Details::default();
    let mut first_difference = None;
    let mut all_ok = true;
    for m in 1..=4u32 {
        for n in 1..=4u32 {
            let (violation, line, rem, _) = eq13_case(&op, m, n)?;
            details.notes.push(line);
            if let Some(msg) = violation {
                all_ok = false;
                if first_difference.is_none() {
                    first_difference = Some(format!(
                        "m={m} n={n}: {msg}; deepest delta layer of (computed - printed): {}",
                        canonicalize(&leading_term(&rem, Symbol::Delta)?)?
                    ));
                }
            }
        }
    }
    details.notes.push(
        "engine lead coefficients over n = 1..4: -3, -10, -21, -36 (all over 2 r), \
         against the printed constant 3"
            .into(),
    );
    let verdict = if all_ok {
        Verdict::Pass
    } else {
        details.difference = first_difference;
        Verdict::Mismatch
    };
    Ok(report(
        "eq19",
        verdict,
        "printed output 3 sin^(m+2) / (2 r (delta cos)^(n+2)) for all m, n in 1..=4".into(),
        "ring operator outputs over the same grid".into(),
        details,
    ))
}

/// Exact lead scales a_k of the ring iterates: the deepest tied
/// (delta cos)^(2k-1) layer of the h component carries a_k / (2 r)^k.
pub fn ring_lead_sequence(k_max: u32, budget: usize) -> Result<Vec<BigRational>> {
    let iters = gauss_iterates(&make_anchor_ring(), k_max as usize, budget)?;
    let mut out = Vec::with_capacity(k_max as usize);
    for (i, v) in iters.iter().enumerate() {
        let k = i as u32 + 1;
        let (q, rp, poles) = tied_layer(&v.a_h)?.ok_or_else(|| {
            EngineError::InternalConsistency(format!(
                "ring iterate {k} lost its tied lead layer"
            ))
        })?;
        if rp != k as i16 || poles != (2 * k as u8 - 1, 2 * k as u8 - 1) {
            return Err(EngineError::InternalConsistency(format!(
                "ring iterate {k} lead sits at r^{rp} (delta, cos)^{poles:?}"
            )));
        }
        out.push(q * BigRational::from_integer(BigInt::from(1i64) << k));
    }
    Ok(out)
}

fn claim_ring_iterate_leads(opts: &ClaimOptions) -> Result<ClaimReport> {
    let iters = gauss_iterates(&make_anchor_ring(), 4, opts.budget)?;
    let leads = ring_lead_sequence(4, opts.budget)?;
    let mut details = Details::default();
    let mut first_difference = None;
    let mut all_ok = true;
    for k in 1..=4u32 {
        let v = &iters[k as usize - 1];
        let sign: i64 = if k % 2 == 1 { 1 } else { -1 };
        let printed_coeff = sign * 3i64.pow(k - 1);
        let lead = ring_printed_lead(k);
        let rem = FrameVec::new(v.a_t.clone(), v.a_h.clone() - lead, v.a_b.clone());
        let violation = vec_shape_violation(&rem, &ring_remainder_shape(k))?;
        let a_k = &leads[k as usize - 1];
        details.notes.push(format!(
            "k={k}: engine lead scale {a_k}, printed {printed_coeff}; remainder {}",
            match &violation {
                None => "fits the stated shape".to_string(),
                Some(msg) => msg.clone(),
            }
        ));
        if violation.is_some() || *a_k != big(printed_coeff) {
            all_ok = false;
            if first_difference.is_none() {
                let msg = violation.unwrap_or_else(|| "lead scale differs".into());
                first_difference = Some(format!(
                    "k={k}: {msg}; deepest cos layer of the h difference: {}",
                    canonicalize(&leading_term(&rem.a_h, Symbol::CosPhi)?)?
                ));
            }
        }
    }
    let engine_seq = leads
        .iter()
        .map(|q| q.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    let verdict = if all_ok {
        Verdict::Pass
    } else {
        details.difference = first_difference;
        Verdict::Mismatch
    };
    Ok(report(
        "eq20-k",
        verdict,
        "h leads (-1)^(k-1) 3^(k-1) sin^2k / ((2r)^k (delta cos)^(2k-1)) with remainders \
         within delta^-(2k-1) cos^-(2k-2), k = 1..4: scales 1, -3, 9, -27"
            .into(),
        format!("engine lead scales over the same layers: {engine_seq}"),
        details,
    ))
}

// -------------------------------------------------------------------------
// lead polynomial products, identity, sphere claims

/// Constant term of the product chain the recursion actually generates.
fn chain_constant(lambda: u32) -> BigRational {
    let mut acc = big(1);
    for j in 1..lambda as i64 {
        acc *= big(-(3 * j - 1)) * big(-(6 * j + 1));
    }
    acc
}

fn chain_product(lambda: u32) -> Expr {
    let d = Expr::delta;
    let mut acc = Expr::one();
    for j in 1..lambda as i64 {
        acc = acc
            * (Expr::from_int(6 * j - 3) * d() - Expr::from_int(3 * j - 1))
            * (Expr::from_int(12 * j) * d() - Expr::from_int(6 * j + 1));
    }
    acc
}

fn printed_product(lambda: u32) -> Expr {
    let mut acc = Expr::one();
    for j in 1..lambda as i64 {
        acc = acc * Expr::from_int(12 * j) * Expr::delta() * Expr::from_int(4 * j - 5);
    }
    acc
}

/// Compares the printed product form of the iterate lead polynomials with
/// the chain the one-step recursion generates, and verifies the chain
/// against the symbolic iterates while they stay affordable.
pub fn h_lambda_check(lambda_max: u32) -> Result<ClaimReport> {
    if lambda_max == 0 {
        return Err(EngineError::InvalidArgument(
            "the product index starts at 1".into(),
        ));
    }
    let engine_max = lambda_max.min(3);
    let iters = gauss_iterates(&make_tube(), engine_max as usize, crate::operator::DEFAULT_BUDGET)?;
    let mut details = Details::default();
    let mut products_agree = true;
    let mut first_difference = None;
    for lambda in 1..=lambda_max {
        let chain = chain_product(lambda);
        let printed = printed_product(lambda);
        let same = equal(&chain, &printed)?;
        if !same {
            products_agree = false;
        }
        let mut line = format!(
            "lambda={lambda}: chain constant term {}, printed product {}",
            chain_constant(lambda),
            if same { "matches" } else { "differs" }
        );
        if lambda <= engine_max {
            let v = &iters[lambda as usize - 1];
            let d = Expr::delta;
            let kc = Expr::kappa(0) * Expr::cos_phi();
            let denom = Expr::from_int(1i64 << lambda)
                * d().powi(3 * lambda as i32 - 1)
                * kc.powi(3 * lambda as i32 - 2);
            let shape = Shape {
                delta: 3 * lambda as u8 - 2,
                cos: 3 * lambda as u8 - 2,
                kappa: Some(3 * lambda as u8 - 2),
            };
            let rem_chain = v.a_t.clone()
                - chain.clone() * Expr::beta().powi(2 * lambda as i32 - 1) * denom.clone().recip();
            let chain_fits = shape_violation(&rem_chain, &shape)?.is_none();
            let rem_printed = v.a_t.clone()
                - printed.clone() * Expr::beta().powi(2 * lambda as i32 - 1) * denom.recip();
            let printed_violation = shape_violation(&rem_printed, &shape)?;
            line.push_str(&format!(
                "; chain {} the iterate, printed product {}",
                if chain_fits { "matches" } else { "does not match" },
                if printed_violation.is_none() {
                    "matches".to_string()
                } else {
                    "does not match".to_string()
                }
            ));
            if printed_violation.is_some() && first_difference.is_none() {
                first_difference = Some(format!(
                    "lambda={lambda}: deepest delta layer of (iterate t - printed lead): {}",
                    canonicalize(&leading_term(&rem_printed, Symbol::Delta)?)?
                ));
            }
        }
        details.notes.push(line);
    }
    details.notes.push(
        "the printed product carries a bare delta factor, so it vanishes at delta = 0 and \
         contradicts its own nonvanishing claim; the recursion chain gives constant terms \
         1, 14, 910, 138320"
            .into(),
    );
    let verdict = if products_agree && first_difference.is_none() {
        Verdict::Pass
    } else {
        details.difference = first_difference;
        Verdict::Mismatch
    };
    Ok(report(
        "hlambda",
        verdict,
        "lead polynomials equal the product of 12 j delta (4 j - 5) over j < lambda, \
         nonvanishing for every positive lambda"
            .into(),
        "lead polynomials generated by the one-step recursion".into(),
        details,
    ))
}

fn verdict_severity(v: &Verdict) -> u8 {
    match v {
        Verdict::Pass => 0,
        Verdict::NumericOnlyPass => 1,
        Verdict::Mismatch => 2,
        Verdict::Error => 3,
    }
}

fn claim_identity() -> ClaimReport {
    let charts = [
        ("tube", make_tube()),
        ("anchor-ring", make_anchor_ring()),
        ("sphere", make_sphere(Orientation::Inward)),
    ];
    let mut details = Details::default();
    let mut worst = Verdict::Pass;
    for (name, chart) in &charts {
        let rep = verify_identity_eq4(chart);
        if verdict_severity(&rep.verdict) > verdict_severity(&worst) {
            worst = rep.verdict.clone();
        }
        if let Some(r) = rep.details.residual {
            details.residual = Some(details.residual.unwrap_or(0.0).max(r));
        }
        details.notes.push(format!("{name}: {}", rep.verdict));
        if let Some(diff) = rep.details.difference {
            details.difference = Some(format!("{name}: {diff}"));
        }
    }
    report(
        "identity-eq4",
        worst,
        "L(x) + (1/2K) grad3(K, n) + 2 n = 0 on the tube, anchor ring, and sphere charts".into(),
        "per-chart residuals of the identity".into(),
        details,
    )
}

fn claim_sphere_position() -> Result<ClaimReport> {
    let sph = make_sphere(Orientation::Inward);
    let op = BeltramiOp::new(&sph, FormKind::Second)?;
    let x = match &sph.position {
        Position::FrameSpan(v) => v.clone(),
        _ => unreachable!("sphere charts span the frame"),
    };
    let lap = match op.laplacian_position()? {
        AnyVec::Frame(v) => v,
        AnyVec::Ambient(_) => unreachable!("sphere charts are frame charts"),
    };
    let two_over_r = Expr::from_int(2) * Expr::radius().recip();
    let diff = lap.sub(&x.scale(&two_over_r));
    let ok = diff.is_zero()?;
    let mut details = Details::note("eigenvalue 2 / radius; the position needs one eigenvector");
    let verdict = if ok {
        Verdict::Pass
    } else {
        details.difference = Some(frame_display(&diff)?);
        Verdict::Mismatch
    };
    Ok(report(
        "sphere-T1",
        verdict,
        "L(x) = (2/r) x".into(),
        frame_display(&lap)?,
        details,
    ))
}

fn claim_sphere_gauss_map(opts: &ClaimOptions) -> Result<ClaimReport> {
    let sph = make_sphere(Orientation::Inward);
    let op = BeltramiOp::new(&sph, FormKind::Second)?;
    let n = geometry::gauss_map_frame(&sph)?;
    let lap = match op.laplacian_vec(&AnyVec::Frame(n.clone()))? {
        AnyVec::Frame(v) => v,
        AnyVec::Ambient(_) => unreachable!("frame input stays frame"),
    };
    let two_over_r = Expr::from_int(2) * Expr::radius().recip();
    let diff = lap.sub(&n.scale(&two_over_r));
    let ok = diff.is_zero()?;
    let aopts = AnalysisOptions {
        seed: opts.seed,
        budget: opts.budget,
        ..AnalysisOptions::default()
    };
    let im = iterate_matrix(&sph, 1, &aopts)?;
    let ann = annihilator_search(&im, 1)?;
    let radius = sph.params.radius_f64();
    let eig = ann.eigenvalues[0];
    let eig_err = (eig.0 - 2.0 / radius).abs().max(eig.1.abs());
    let mut details = Details::note(format!(
        "sampled annihilator of order one: eigenvalue {:.12} (target {:.12}), residual {:.3e}",
        eig.0,
        2.0 / radius,
        ann.residual
    ));
    details.residual = Some(ann.residual);
    let verdict = if ok && eig_err < 1e-8 && ann.residual < 1e-6 {
        Verdict::Pass
    } else if ok {
        details
            .notes
            .push("symbolic eigenvector relation holds; sampling disagrees".into());
        Verdict::Mismatch
    } else {
        details.difference = Some(frame_display(&diff)?);
        Verdict::Mismatch
    };
    Ok(report(
        "sphere-T2",
        verdict,
        "L(n) = (2/r) n with a single sampled eigenvalue at 2/r".into(),
        frame_display(&lap)?,
        details,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_covers_all_ids_in_order() {
        let ids = claim_ids();
        assert_eq!(ids.len(), 20);
        assert_eq!(ids[0], "I-tube");
        assert_eq!(ids[19], "sphere-T2");
        assert!(claim_anchor("dII-n-eq16/18").is_some());
        assert!(claim_anchor("nope").is_none());
    }

    #[test]
    fn unknown_claims_are_rejected() {
        let err = run_claim("eq99", &ClaimOptions::default()).unwrap_err();
        assert!(matches!(err, EngineError::UnknownClaim(_)));
    }

    #[test]
    fn cheap_claims_give_frozen_verdicts() {
        let opts = ClaimOptions::default();
        for (id, want) in [
            ("I-tube", Verdict::Pass),
            ("II-tube", Verdict::Pass),
            ("K-eq7", Verdict::Pass),
            ("op-eq8", Verdict::Pass),
            ("gaussmap-eq9", Verdict::Pass),
            ("dII-n-eq10", Verdict::Pass),
            ("I-ring", Verdict::Pass),
            ("II-ring", Verdict::Pass),
            ("op-eq17", Verdict::Pass),
            ("dII-n-eq16/18", Verdict::Pass),
            ("sphere-T1", Verdict::Pass),
        ] {
            let rep = run_claim(id, &opts).unwrap();
            assert_eq!(
                verdict_severity(&rep.verdict),
                verdict_severity(&want),
                "claim {id}: {:?}",
                rep
            );
        }
    }

    #[test]
    fn ring_recurrence_disagrees_with_display() {
        let rep = eq13_check(1, 1).unwrap();
        assert!(matches!(rep.verdict, Verdict::Mismatch));
        assert!(rep.details.difference.is_some());
        let rep = eq13_check(2, 3).unwrap();
        assert!(matches!(rep.verdict, Verdict::Mismatch));
    }

    #[test]
    fn ring_lead_sequence_matches_the_recursion() {
        let leads = ring_lead_sequence(3, crate::operator::DEFAULT_BUDGET).unwrap();
        assert_eq!(leads, vec![big(1), big(-3), big(63)]);
    }

    #[test]
    fn lemma_sign_is_flipped_in_the_display() {
        let rep = lemma1_check(1, 2, &Expr::one()).unwrap();
        assert!(matches!(rep.verdict, Verdict::Mismatch));
        assert!(rep
            .details
            .notes
            .iter()
            .any(|n| n.contains("opposite sign")));
    }

    #[test]
    fn chain_constants_match_the_recursion_values() {
        assert_eq!(chain_constant(1), big(1));
        assert_eq!(chain_constant(2), big(14));
        assert_eq!(chain_constant(3), big(910));
        assert_eq!(chain_constant(4), big(138320));
    }
}
