//! Parametric surfaces over the chart (u, phi): the tube around a generic
//! spine, the anchor ring (circular spine), the round sphere, and generic
//! ambient charts. Fundamental forms I/II/III, Gauss map, and curvatures.
//!
//! For the built-in kinds the unit normal has a closed rational form, so no
//! radical ever enters the symbolic layer. Generic ambient charts get numeric
//! normals only.

use crate::error::{EngineError, Result};
use crate::frames::{AmbientVec, AnyVec, FrameContext, FrameVec, RVec};
use crate::symexpr::rat::{self, RatForm};
use crate::symexpr::{rat_to_expr, Expr};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartKind {
    Tube,
    AnchorRing,
    Sphere,
    Generic,
}

impl ChartKind {
    pub fn name(self) -> &'static str {
        match self {
            ChartKind::Tube => "tube",
            ChartKind::AnchorRing => "anchor-ring",
            ChartKind::Sphere => "sphere",
            ChartKind::Generic => "generic",
        }
    }
}

/// Normal orientation for kinds where both choices are meaningful. Inward
/// means toward the spine (tube) or toward the center (sphere).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Inward,
    Outward,
}

/// How the position vector is anchored.
#[derive(Debug, Clone)]
pub enum Position {
    /// x = rho(u) + (frame components); d/du picks up the spine tangent t.
    SpineOffset(FrameVec),
    /// x = frame components only; the spine enters through the frame.
    FrameSpan(FrameVec),
    /// x in a fixed ambient basis.
    Ambient(AmbientVec),
}

/// Numeric chart parameters. The symbolic layer keeps r and kappa symbolic;
/// these values pin them during numeric evaluation and sampling.
#[derive(Debug, Clone)]
pub struct ChartParams {
    pub radius: Option<BigRational>,
    pub kappa: Option<BigRational>,
    /// Numeric spine selection for sampling: "smooth" (analytic towers) or
    /// "jet" (random towers).
    pub profile: ProfileChoice,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileChoice {
    Smooth,
    Jet,
}

impl Default for ChartParams {
    fn default() -> Self {
        ChartParams {
            radius: None,
            kappa: None,
            profile: ProfileChoice::Smooth,
        }
    }
}

impl ChartParams {
    pub fn radius_f64(&self) -> f64 {
        self.radius
            .as_ref()
            .map(rat::rat_to_f64)
            .unwrap_or(1.0 / 3.0)
    }

    pub fn kappa_f64(&self) -> f64 {
        self.kappa.as_ref().map(rat::rat_to_f64).unwrap_or(1.0)
    }
}

#[derive(Debug, Clone)]
pub struct SurfaceChart {
    pub kind: ChartKind,
    pub position: Position,
    pub ctx: FrameContext,
    pub orientation: Orientation,
    pub params: ChartParams,
}

/// Tube of radius r about a generic unit-speed spine:
/// x = rho + r cos(phi) h + r sin(phi) b.
pub fn make_tube() -> SurfaceChart {
    let offset = FrameVec::new(
        Expr::zero(),
        Expr::radius() * Expr::cos_phi(),
        Expr::radius() * Expr::sin_phi(),
    );
    SurfaceChart {
        kind: ChartKind::Tube,
        position: Position::SpineOffset(offset),
        ctx: FrameContext::generic_spine(),
        orientation: Orientation::Inward,
        params: ChartParams::default(),
    }
}

/// Tube about a plane circle: constant kappa, tau = 0, substituted at
/// construction so iterated operators stay small.
pub fn make_anchor_ring() -> SurfaceChart {
    let mut chart = make_tube();
    chart.kind = ChartKind::AnchorRing;
    chart.ctx = FrameContext::circular_spine();
    chart
}

/// Round sphere of radius r centered at the origin, charted over the frame of
/// its equator circle: x = -r cos(phi) h + r sin(phi) b.
pub fn make_sphere(orientation: Orientation) -> SurfaceChart {
    let span = FrameVec::new(
        Expr::zero(),
        -(Expr::radius() * Expr::cos_phi()),
        Expr::radius() * Expr::sin_phi(),
    );
    SurfaceChart {
        kind: ChartKind::Sphere,
        position: Position::FrameSpan(span),
        ctx: FrameContext::sphere_spine(),
        orientation,
        params: ChartParams::default(),
    }
}

/// Generic chart from an ambient position vector.
pub fn make_generic(position: AmbientVec) -> SurfaceChart {
    SurfaceChart {
        kind: ChartKind::Generic,
        position: Position::Ambient(position),
        ctx: FrameContext::generic_spine(),
        orientation: Orientation::Outward,
        params: ChartParams::default(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    First,
    Second,
    Third,
}

impl FormKind {
    pub fn name(self) -> &'static str {
        match self {
            FormKind::First => "I",
            FormKind::Second => "II",
            FormKind::Third => "III",
        }
    }
}

/// Symmetric fundamental form g11 du^2 + 2 g12 du dphi + g22 dphi^2.
#[derive(Debug, Clone)]
pub struct FundForm {
    pub which: FormKind,
    pub g11: Expr,
    pub g12: Expr,
    pub g22: Expr,
}

impl FundForm {
    pub fn det(&self) -> Expr {
        self.g11.clone() * self.g22.clone() - self.g12.clone() * self.g12.clone()
    }
}

#[derive(Debug, Clone)]
pub struct Curvatures {
    pub gauss: Expr,
    pub mean: Expr,
}

/// Internal: form components as canonical scalars.
#[derive(Debug, Clone)]
pub(crate) struct FormRats {
    pub g11: RatForm,
    pub g12: RatForm,
    pub g22: RatForm,
}

impl FormRats {
    pub fn det(&self) -> RatForm {
        self.g11.mul(&self.g22).sub(&self.g12.mul(&self.g12))
    }

    fn into_form(self, which: FormKind) -> FundForm {
        FundForm {
            which,
            g11: rat_to_expr(&self.g11),
            g12: rat_to_expr(&self.g12),
            g22: rat_to_expr(&self.g22),
        }
    }
}

pub(crate) fn frame_position(chart: &SurfaceChart) -> Result<RVec> {
    match &chart.position {
        Position::SpineOffset(v) | Position::FrameSpan(v) => v.to_rvec(),
        Position::Ambient(_) => Err(EngineError::NonRationalStructure(
            "ambient chart has no frame position".into(),
        )),
    }
}

/// First derivative in u, with the spine tangent added for offset charts.
pub(crate) fn x_u(chart: &SurfaceChart) -> Result<RVec> {
    let v = frame_position(chart)?;
    let mut d = v.d_du(&chart.ctx);
    if matches!(chart.position, Position::SpineOffset(_)) {
        d.t = d.t.add(&RatForm::one());
    }
    Ok(d)
}

pub(crate) fn x_phi(chart: &SurfaceChart) -> Result<RVec> {
    Ok(frame_position(chart)?.d_dphi())
}

/// Closed-form unit normal for the built-in kinds.
pub(crate) fn normal_rvec(chart: &SurfaceChart) -> Result<RVec> {
    let inward = match chart.kind {
        ChartKind::Tube | ChartKind::AnchorRing => RVec {
            t: RatForm::zero(),
            h: rat::cos_phi().neg(),
            b: rat::sin_phi().neg(),
        },
        ChartKind::Sphere => RVec {
            t: RatForm::zero(),
            h: rat::cos_phi(),
            b: rat::sin_phi().neg(),
        },
        ChartKind::Generic => {
            return Err(EngineError::NonRationalStructure(
                "generic charts have numeric normals only".into(),
            ))
        }
    };
    Ok(match chart.orientation {
        Orientation::Inward => inward,
        Orientation::Outward => inward.neg(),
    })
}

pub(crate) fn first_form_rats(chart: &SurfaceChart) -> Result<FormRats> {
    match &chart.position {
        Position::Ambient(p) => {
            let pu = p.d_du();
            let pphi = p.d_dphi();
            Ok(FormRats {
                g11: pu.dot(&pu).to_rat()?,
                g12: pu.dot(&pphi).to_rat()?,
                g22: pphi.dot(&pphi).to_rat()?,
            })
        }
        _ => {
            let xu = x_u(chart)?;
            let xp = x_phi(chart)?;
            Ok(FormRats {
                g11: xu.dot(&xu),
                g12: xu.dot(&xp),
                g22: xp.dot(&xp),
            })
        }
    }
}

pub(crate) fn second_form_rats(chart: &SurfaceChart) -> Result<FormRats> {
    let n = normal_rvec(chart)?;
    let xu = x_u(chart)?;
    let xp = x_phi(chart)?;
    let xuu = xu.d_du(&chart.ctx);
    let xup = xu.d_dphi();
    let xpp = xp.d_dphi();
    Ok(FormRats {
        g11: xuu.dot(&n),
        g12: xup.dot(&n),
        g22: xpp.dot(&n),
    })
}

pub(crate) fn third_form_rats(chart: &SurfaceChart) -> Result<FormRats> {
    let n = normal_rvec(chart)?;
    let nu = n.d_du(&chart.ctx);
    let np = n.d_dphi();
    Ok(FormRats {
        g11: nu.dot(&nu),
        g12: nu.dot(&np),
        g22: np.dot(&np),
    })
}

fn check_nondegenerate(f: &FormRats) -> Result<()> {
    if f.det().is_zero() {
        Err(EngineError::DegenerateForm)
    } else {
        Ok(())
    }
}

pub fn first_form(chart: &SurfaceChart) -> Result<FundForm> {
    let f = first_form_rats(chart)?;
    check_nondegenerate(&f)?;
    Ok(f.into_form(FormKind::First))
}

pub fn second_form(chart: &SurfaceChart) -> Result<FundForm> {
    let f = second_form_rats(chart)?;
    check_nondegenerate(&f)?;
    Ok(f.into_form(FormKind::Second))
}

pub fn third_form(chart: &SurfaceChart) -> Result<FundForm> {
    let f = third_form_rats(chart)?;
    check_nondegenerate(&f)?;
    Ok(f.into_form(FormKind::Third))
}

/// Unit normal field. For frame kinds this is the closed form; generic
/// ambient charts are rejected (their normal involves a radical).
pub fn gauss_map(chart: &SurfaceChart) -> Result<AnyVec> {
    Ok(AnyVec::Frame(normal_rvec(chart)?.to_frame_vec()))
}

/// Gauss map as a frame vector; errors for ambient charts.
pub fn gauss_map_frame(chart: &SurfaceChart) -> Result<FrameVec> {
    Ok(normal_rvec(chart)?.to_frame_vec())
}

pub fn gauss_curvature(chart: &SurfaceChart) -> Result<Expr> {
    let one = first_form_rats(chart)?;
    let two = second_form_rats(chart)?;
    check_nondegenerate(&one)?;
    let k = two.det().div(&one.det())?;
    Ok(rat_to_expr(&k))
}

pub fn mean_curvature(chart: &SurfaceChart) -> Result<Expr> {
    let one = first_form_rats(chart)?;
    let two = second_form_rats(chart)?;
    check_nondegenerate(&one)?;
    let num = one
        .g11
        .mul(&two.g22)
        .sub(&one.g12.mul(&two.g12).scale_int(2))
        .add(&one.g22.mul(&two.g11));
    let h = num.div(&one.det().scale_int(2))?;
    Ok(rat_to_expr(&h))
}

pub fn curvatures(chart: &SurfaceChart) -> Result<Curvatures> {
    Ok(Curvatures {
        gauss: gauss_curvature(chart)?,
        mean: mean_curvature(chart)?,
    })
}

/// The scalar lambda with cross(x_u, x_phi) = lambda * n and
/// lambda^2 = det(I); its sign records how the chart orientation relates to
/// the chosen normal.
pub fn orientation_factor(chart: &SurfaceChart) -> Result<Expr> {
    let n = normal_rvec(chart)?;
    let c = x_u(chart)?.cross(&x_phi(chart)?);
    let lambda = c.dot(&n);
    let residual = c.sub(&n.scale(&lambda));
    if !residual.is_zero() {
        return Err(EngineError::InternalConsistency(
            "cross(x_u, x_phi) is not proportional to the chart normal".into(),
        ));
    }
    let det1 = first_form_rats(chart)?.det();
    if !lambda.mul(&lambda).sub(&det1).is_zero() {
        return Err(EngineError::InternalConsistency(
            "normalization factor does not square to det(I)".into(),
        ));
    }
    Ok(rat_to_expr(&lambda))
}

/// Parses integers, decimals, and `p/q` fractions to exact rationals.
pub fn parse_exact_number(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || EngineError::ParseError(format!("invalid number: {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let neg = int_part.trim_start().starts_with('-');
        let int_digits = if int_part.is_empty() || int_part == "-" {
            "0".to_string()
        } else {
            int_part.trim_start_matches('-').to_string()
        };
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let int = BigInt::from_str(&int_digits).map_err(|_| bad())?;
        let frac = BigInt::from_str(frac_part).map_err(|_| bad())?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let mut value = BigRational::new(int * &scale + frac, scale);
        if neg {
            value = -value;
        }
        return Ok(value);
    }
    let n = BigInt::from_str(s).map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

/// Parses a chart document: one `key = value` pair per line, `#` comments.
/// Keys: kind (required: tube | anchor-ring | sphere), r (exact number),
/// kappa (anchor ring only), orientation (sphere only: inward | outward),
/// profile (smooth | jet).
pub fn parse_chart_document(text: &str) -> Result<SurfaceChart> {
    let mut kind: Option<String> = None;
    let mut radius: Option<BigRational> = None;
    let mut kappa: Option<BigRational> = None;
    let mut orientation: Option<Orientation> = None;
    let mut profile: Option<ProfileChoice> = None;

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            EngineError::ParseError(format!("line {}: expected key = value", lineno + 1))
        })?;
        let key = key.trim();
        let value = value.trim();
        match key {
            "kind" => kind = Some(value.to_string()),
            "r" | "radius" => radius = Some(parse_exact_number(value)?),
            "kappa" => kappa = Some(parse_exact_number(value)?),
            "orientation" => {
                orientation = Some(match value {
                    "inward" => Orientation::Inward,
                    "outward" => Orientation::Outward,
                    _ => {
                        return Err(EngineError::ParseError(format!(
                            "line {}: orientation must be inward or outward",
                            lineno + 1
                        )))
                    }
                })
            }
            "profile" => {
                profile = Some(match value {
                    "smooth" => ProfileChoice::Smooth,
                    "jet" => ProfileChoice::Jet,
                    _ => {
                        return Err(EngineError::ParseError(format!(
                            "line {}: profile must be smooth or jet",
                            lineno + 1
                        )))
                    }
                })
            }
            _ => {
                return Err(EngineError::ParseError(format!(
                    "line {}: unknown key {key:?}",
                    lineno + 1
                )))
            }
        }
    }

    let kind = kind.ok_or_else(|| EngineError::ParseError("missing kind".into()))?;
    let mut chart = match kind.as_str() {
        "tube" => make_tube(),
        "anchor-ring" => make_anchor_ring(),
        "sphere" => make_sphere(orientation.unwrap_or(Orientation::Inward)),
        other => {
            return Err(EngineError::ParseError(format!(
                "unknown kind {other:?} (expected tube, anchor-ring, or sphere)"
            )))
        }
    };
    if let Some(r) = &radius {
        if *r <= BigRational::zero() {
            return Err(EngineError::ParseError("r must be positive".into()));
        }
    }
    if chart.kind != ChartKind::AnchorRing && kappa.is_some() {
        return Err(EngineError::ParseError(
            "kappa is only meaningful for anchor-ring charts".into(),
        ));
    }
    if chart.kind != ChartKind::Sphere && orientation.is_some() {
        return Err(EngineError::ParseError(
            "orientation is only meaningful for sphere charts".into(),
        ));
    }
    chart.params.radius = radius;
    chart.params.kappa = kappa;
    if let Some(p) = profile {
        chart.params.profile = p;
    }
    Ok(chart)
}

/// Builds a chart from a builtin name or, failing that, treats the argument
/// as a path to a chart document.
pub fn resolve_chart(arg: &str) -> Result<SurfaceChart> {
    match arg {
        "tube" => Ok(make_tube()),
        "anchor-ring" => Ok(make_anchor_ring()),
        "sphere" => Ok(make_sphere(Orientation::Inward)),
        "sphere-outward" => Ok(make_sphere(Orientation::Outward)),
        path => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                EngineError::ParseError(format!(
                    "{arg:?} is not a builtin chart and could not be read as a file: {e}"
                ))
            })?;
            parse_chart_document(&text)
        }
    }
}

pub fn builtin_chart_names() -> &'static [&'static str] {
    &["tube", "anchor-ring", "sphere", "sphere-outward"]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::{equal, is_zero};

    #[test]
    fn tube_tangents_match_closed_forms() {
        let tube = make_tube();
        let xu = x_u(&tube).unwrap().to_frame_vec();
        assert!(equal(&xu.a_t, &Expr::delta()).unwrap());
        assert!(equal(
            &xu.a_h,
            &(-(Expr::radius() * Expr::tau(0) * Expr::sin_phi()))
        )
        .unwrap());
        assert!(equal(
            &xu.a_b,
            &(Expr::radius() * Expr::tau(0) * Expr::cos_phi())
        )
        .unwrap());
        let xp = x_phi(&tube).unwrap().to_frame_vec();
        assert!(is_zero(&xp.a_t).unwrap());
        assert!(equal(
            &xp.a_h,
            &(-(Expr::radius() * Expr::sin_phi()))
        )
        .unwrap());
        let g22 = x_phi(&tube).unwrap().dot(&x_phi(&tube).unwrap());
        assert!(equal(
            &rat_to_expr(&g22),
            &(Expr::radius() * Expr::radius())
        )
        .unwrap());
    }

    #[test]
    fn tube_forms_match_displayed_matrices() {
        let tube = make_tube();
        let one = first_form(&tube).unwrap();
        let r = Expr::radius;
        let tau = || Expr::tau(0);
        assert!(equal(
            &one.g11,
            &(Expr::delta().powi(2) + r() * r() * tau() * tau())
        )
        .unwrap());
        assert!(equal(&one.g12, &(r() * r() * tau())).unwrap());
        assert!(equal(&one.g22, &(r() * r())).unwrap());

        let two = second_form(&tube).unwrap();
        assert!(equal(
            &two.g11,
            &(-(Expr::kappa(0) * Expr::delta() * Expr::cos_phi()) + r() * tau() * tau())
        )
        .unwrap());
        assert!(equal(&two.g12, &(r() * tau())).unwrap());
        assert!(equal(&two.g22, &r()).unwrap());
    }

    #[test]
    fn tube_gauss_curvature_matches() {
        let tube = make_tube();
        let k = gauss_curvature(&tube).unwrap();
        let expected = -(Expr::kappa(0) * Expr::cos_phi())
            * (Expr::radius() * Expr::delta()).powi(-1);
        assert!(equal(&k, &expected).unwrap());
        // spot value at r=1/2, kappa=1, phi=pi/3: K = -(1/2)/( (1/2)(3/4) ) = -4/3
        let p = crate::symexpr::NumericProfile::constant_spine(
            1.0,
            0.5,
            std::f64::consts::FRAC_PI_3,
        );
        let v = crate::symexpr::eval(&k, &p).unwrap();
        assert!((v - (-4.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn anchor_ring_forms_reduce() {
        let ring = make_anchor_ring();
        let one = first_form(&ring).unwrap();
        assert!(equal(&one.g11, &Expr::delta().powi(2)).unwrap());
        assert!(is_zero(&one.g12).unwrap());
        assert!(equal(&one.g22, &(Expr::radius() * Expr::radius())).unwrap());
        let two = second_form(&ring).unwrap();
        assert!(equal(
            &two.g11,
            &(-(Expr::kappa(0) * Expr::delta() * Expr::cos_phi()))
        )
        .unwrap());
        assert!(is_zero(&two.g12).unwrap());
        assert!(equal(&two.g22, &Expr::radius()).unwrap());
    }

    #[test]
    fn sphere_forms_and_curvatures() {
        let sph = make_sphere(Orientation::Inward);
        let one = first_form(&sph).unwrap();
        assert!(equal(&one.g11, &Expr::cos_phi().powi(2)).unwrap());
        assert!(is_zero(&one.g12).unwrap());
        assert!(equal(&one.g22, &Expr::radius().powi(2)).unwrap());
        let two = second_form(&sph).unwrap();
        // II = I / r with the inward normal
        assert!(equal(
            &two.g11,
            &(Expr::cos_phi().powi(2) * Expr::radius().recip())
        )
        .unwrap());
        assert!(equal(&two.g22, &Expr::radius()).unwrap());
        let k = gauss_curvature(&sph).unwrap();
        assert!(equal(&k, &Expr::radius().powi(-2)).unwrap());
        let h = mean_curvature(&sph).unwrap();
        assert!(equal(&h, &Expr::radius().recip()).unwrap());
    }

    #[test]
    fn third_form_identity_holds() {
        for chart in [make_tube(), make_sphere(Orientation::Inward)] {
            let one = first_form(&chart).unwrap();
            let two = second_form(&chart).unwrap();
            let three = third_form(&chart).unwrap();
            let h = mean_curvature(&chart).unwrap();
            let k = gauss_curvature(&chart).unwrap();
            for (a, b, c) in [
                (&three.g11, &two.g11, &one.g11),
                (&three.g12, &two.g12, &one.g12),
                (&three.g22, &two.g22, &one.g22),
            ] {
                let residual = a.clone()
                    - (Expr::from_int(2) * h.clone() * b.clone() - k.clone() * c.clone());
                assert!(is_zero(&residual).unwrap());
            }
        }
    }

    #[test]
    fn gauss_map_is_unit_and_normal() {
        for chart in [make_tube(), make_anchor_ring(), make_sphere(Orientation::Inward)] {
            let n = gauss_map_frame(&chart).unwrap();
            let unit = n.dot(&n) - Expr::one();
            assert!(is_zero(&unit).unwrap());
            let xu = x_u(&chart).unwrap().to_frame_vec();
            let xp = x_phi(&chart).unwrap().to_frame_vec();
            assert!(is_zero(&n.dot(&xu)).unwrap());
            assert!(is_zero(&n.dot(&xp)).unwrap());
        }
    }

    #[test]
    fn orientation_factor_for_tube_is_r_delta() {
        let lambda = orientation_factor(&make_tube()).unwrap();
        assert!(equal(&lambda, &(Expr::radius() * Expr::delta())).unwrap());
        // sphere with inward normal: lambda = -r cos(phi)
        let lam_s = orientation_factor(&make_sphere(Orientation::Inward)).unwrap();
        assert!(equal(&lam_s, &(-(Expr::radius() * Expr::cos_phi()))).unwrap());
    }

    #[test]
    fn chart_document_round_trip() {
        let doc = "# anchor ring\nkind = anchor-ring\nr = 0.25\nkappa = 1/2\nprofile = jet\n";
        let chart = parse_chart_document(doc).unwrap();
        assert_eq!(chart.kind, ChartKind::AnchorRing);
        assert_eq!(
            chart.params.radius.as_ref().unwrap(),
            &BigRational::new(BigInt::from(1), BigInt::from(4))
        );
        assert_eq!(chart.params.profile, ProfileChoice::Jet);
        assert!(parse_chart_document("kind = cone\n").is_err());
        assert!(parse_chart_document("r = 1\n").is_err());
        assert!(parse_chart_document("kind = tube\norientation = inward\n").is_err());
    }
}
