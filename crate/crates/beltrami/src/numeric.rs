//! Floating-point geometry and finite-difference cross-validation.
//!
//! Everything here is an independent numerical path: positions come from an
//! integrated (or closed-form) Frenet frame, fundamental forms from hand-coded
//! closed formulas, and operator applications from nested central differences
//! through the radical divergence form. The symbolic layer is never consulted
//! except to evaluate the expressions under test.

use crate::error::{EngineError, Result};
use crate::frames::{AnyVec, FrameVec};
use crate::geometry::{self, ChartKind, FormKind, Orientation, SurfaceChart};
use crate::operator::BeltramiOp;
use crate::symexpr::{self, numeric::seeded_rng, NumericProfile};
use rand::Rng;
use std::cell::RefCell;
use std::collections::BTreeMap;

pub type V3 = [f64; 3];

pub fn add3(a: V3, b: V3) -> V3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub3(a: V3, b: V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn scale3(a: V3, s: f64) -> V3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn dot3(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross3(a: V3, b: V3) -> V3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn norm3(a: V3) -> f64 {
    dot3(a, a).sqrt()
}

/// Spine point with its Frenet frame in ambient coordinates.
#[derive(Debug, Clone)]
pub struct FrenetState {
    pub rho: V3,
    pub t: V3,
    pub h: V3,
    pub b: V3,
}

fn frenet_rhs(kappa: f64, tau: f64, y: &[f64; 12]) -> [f64; 12] {
    let t = [y[3], y[4], y[5]];
    let h = [y[6], y[7], y[8]];
    let b = [y[9], y[10], y[11]];
    let dt = scale3(h, kappa);
    let dh = add3(scale3(t, -kappa), scale3(b, tau));
    let db = scale3(h, -tau);
    [
        t[0], t[1], t[2], dt[0], dt[1], dt[2], dh[0], dh[1], dh[2], db[0], db[1], db[2],
    ]
}

/// Integrates the Frenet system rho' = t, t' = kappa h, h' = -kappa t + tau b,
/// b' = -tau h from the identity frame at u = 0 with classical fourth-order
/// steps. The grid is fixed (full steps of 2e-4 plus one partial step), so
/// nearby endpoints share a bit-identical step prefix and the integration
/// error cancels cleanly inside finite-difference stencils over u.
pub fn integrate_frenet(kappa: &dyn Fn(f64) -> f64, tau: &dyn Fn(f64) -> f64, u: f64) -> FrenetState {
    let mut y: [f64; 12] = [
        0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0,
    ];
    const GRID: f64 = 2e-4;
    let full = (u.abs() / GRID).floor() as usize;
    let step = GRID * u.signum();
    let mut s = 0.0;
    for i in 0..=full {
        let hstep = if i < full { step } else { u - s };
        let k1 = frenet_rhs(kappa(s), tau(s), &y);
        let mut y2 = y;
        for i in 0..12 {
            y2[i] = y[i] + 0.5 * hstep * k1[i];
        }
        let k2 = frenet_rhs(kappa(s + 0.5 * hstep), tau(s + 0.5 * hstep), &y2);
        let mut y3 = y;
        for i in 0..12 {
            y3[i] = y[i] + 0.5 * hstep * k2[i];
        }
        let k3 = frenet_rhs(kappa(s + 0.5 * hstep), tau(s + 0.5 * hstep), &y3);
        let mut y4 = y;
        for i in 0..12 {
            y4[i] = y[i] + hstep * k3[i];
        }
        let k4 = frenet_rhs(kappa(s + hstep), tau(s + hstep), &y4);
        for j in 0..12 {
            y[j] += hstep / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        s += hstep;
    }
    FrenetState {
        rho: [y[0], y[1], y[2]],
        t: [y[3], y[4], y[5]],
        h: [y[6], y[7], y[8]],
        b: [y[9], y[10], y[11]],
    }
}

/// Closed-form frame of the circular helix with constant curvature and
/// torsion, arc-length parametrized, started from the identity frame at
/// u = 0 (same initial data as the integrator). Exact oracle for both the
/// integrator and the connection.
pub fn helix_frame(kappa0: f64, tau0: f64, u: f64) -> FrenetState {
    // The frame satisfies a constant-coefficient rotation equation; the
    // solution is the Rodrigues rotation about (-tau, 0, -kappa)/w by angle
    // w*u, with w^2 = kappa^2 + tau^2.
    let w2 = kappa0 * kappa0 + tau0 * tau0;
    let w = w2.sqrt();
    let theta = w * u;
    let (s, c) = theta.sin_cos();
    let k2 = kappa0 * kappa0 / w2;
    let t2 = tau0 * tau0 / w2;
    let kt = kappa0 * tau0 / w2;
    let t = [1.0 - (1.0 - c) * k2, kappa0 / w * s, kt * (1.0 - c)];
    let h = [-kappa0 / w * s, c, tau0 / w * s];
    let b = [kt * (1.0 - c), -tau0 / w * s, 1.0 - (1.0 - c) * t2];
    let rho = [
        u - k2 * (u - s / w),
        kappa0 / w2 * (1.0 - c),
        kt * (u - s / w),
    ];
    FrenetState { rho, t, h, b }
}

/// Numeric view of a built-in chart: ambient positions, frames, closed-form
/// fundamental forms, and profile construction for symbolic evaluation.
pub struct ChartEvaluator {
    pub kind: ChartKind,
    pub orientation: Orientation,
    pub r: f64,
    pub kappa0: f64,
    frame_cache: RefCell<BTreeMap<u64, FrenetState>>,
}

impl ChartEvaluator {
    pub fn new(chart: &SurfaceChart) -> Result<ChartEvaluator> {
        if chart.kind == ChartKind::Generic {
            return Err(EngineError::NonRationalStructure(
                "generic charts have no built-in numeric model".into(),
            ));
        }
        let r = chart.params.radius_f64();
        let kappa0 = match chart.kind {
            ChartKind::Sphere => 1.0 / r,
            _ => chart.params.kappa_f64(),
        };
        Ok(ChartEvaluator {
            kind: chart.kind,
            orientation: chart.orientation,
            r,
            kappa0,
            frame_cache: RefCell::new(BTreeMap::new()),
        })
    }

    /// Spine curvature and torsion at u. The tube uses the analytic smooth
    /// profile kappa = 2 + sin u, tau = cos u; circle spines are constant.
    pub fn kappa_tau(&self, u: f64) -> (f64, f64) {
        match self.kind {
            ChartKind::Tube => (2.0 + u.sin(), u.cos()),
            _ => (self.kappa0, 0.0),
        }
    }

    pub fn frame(&self, u: f64) -> FrenetState {
        if let Some(st) = self.frame_cache.borrow().get(&u.to_bits()) {
            return st.clone();
        }
        let st = match self.kind {
            ChartKind::Tube => integrate_frenet(&|s| 2.0 + s.sin(), &|s| s.cos(), u),
            ChartKind::Generic => unreachable!("rejected at construction"),
            _ => {
                // plane circle of curvature kappa0 in the xy-plane
                let a = 1.0 / self.kappa0;
                let (sin, cos) = (u / a).sin_cos();
                FrenetState {
                    rho: [a * sin, a * (1.0 - cos), 0.0],
                    t: [cos, sin, 0.0],
                    h: [-sin, cos, 0.0],
                    b: [0.0, 0.0, 1.0],
                }
            }
        };
        self.frame_cache.borrow_mut().insert(u.to_bits(), st.clone());
        st
    }

    pub fn position(&self, u: f64, phi: f64) -> V3 {
        let st = self.frame(u);
        let (c, s) = (phi.cos(), phi.sin());
        match self.kind {
            ChartKind::Sphere => add3(
                scale3(st.h, -self.r * c),
                scale3(st.b, self.r * s),
            ),
            _ => add3(
                st.rho,
                add3(scale3(st.h, self.r * c), scale3(st.b, self.r * s)),
            ),
        }
    }

    /// Closed-form unit normal in ambient coordinates.
    pub fn normal(&self, u: f64, phi: f64) -> V3 {
        let st = self.frame(u);
        let (c, s) = (phi.cos(), phi.sin());
        let inward = match self.kind {
            ChartKind::Sphere => add3(scale3(st.h, c), scale3(st.b, -s)),
            _ => add3(scale3(st.h, -c), scale3(st.b, -s)),
        };
        match self.orientation {
            Orientation::Inward => inward,
            Orientation::Outward => scale3(inward, -1.0),
        }
    }

    pub fn delta(&self, u: f64, phi: f64) -> f64 {
        let (k, _) = self.kappa_tau(u);
        1.0 - self.r * k * phi.cos()
    }

    /// Profile assigning the chart's numeric spine data at (u, phi).
    pub fn profile_at(&self, u: f64, phi: f64) -> NumericProfile {
        match self.kind {
            ChartKind::Tube => NumericProfile::smooth(u, phi, self.r),
            _ => {
                let mut p = NumericProfile::constant_spine(self.kappa0, self.r, phi);
                p.u = u;
                p
            }
        }
    }

    /// Closed-form components (g11, g12, g22) of the chosen form.
    pub fn form_components(&self, which: FormKind, u: f64, phi: f64) -> [f64; 3] {
        let c = phi.cos();
        let r = self.r;
        let sign = match self.orientation {
            Orientation::Inward => 1.0,
            Orientation::Outward => -1.0,
        };
        match self.kind {
            ChartKind::Sphere => match which {
                FormKind::First => [c * c, 0.0, r * r],
                FormKind::Second => [sign * c * c / r, 0.0, sign * r],
                FormKind::Third => [c * c / (r * r), 0.0, 1.0],
            },
            _ => {
                let (k, tau) = self.kappa_tau(u);
                let d = 1.0 - r * k * c;
                match which {
                    FormKind::First => {
                        [d * d + r * r * tau * tau, r * r * tau, r * r]
                    }
                    FormKind::Second => [
                        sign * (-k * d * c + r * tau * tau),
                        sign * r * tau,
                        sign * r,
                    ],
                    FormKind::Third => [k * k * c * c + tau * tau, tau, 1.0],
                }
            }
        }
    }

    pub fn gauss_curvature(&self, u: f64, phi: f64) -> f64 {
        let [a, b, c] = self.form_components(FormKind::Second, u, phi);
        let [e, f, g] = self.form_components(FormKind::First, u, phi);
        (a * c - b * b) / (e * g - f * f)
    }

    /// Ambient value of a frame-coefficient field at (u, phi).
    pub fn eval_frame_field(&self, v: &FrameVec, u: f64, phi: f64) -> Result<V3> {
        let [at, ah, ab] = self.eval_frame_coeffs(v, u, phi)?;
        let st = self.frame(u);
        Ok(add3(
            add3(scale3(st.t, at), scale3(st.h, ah)),
            scale3(st.b, ab),
        ))
    }

    /// Frame coefficients of a field at (u, phi).
    pub fn eval_frame_coeffs(&self, v: &FrameVec, u: f64, phi: f64) -> Result<V3> {
        let p = self.profile_at(u, phi);
        Ok([
            symexpr::eval(&v.a_t, &p)?,
            symexpr::eval(&v.a_h, &p)?,
            symexpr::eval(&v.a_b, &p)?,
        ])
    }
}

/// Inverse components of a symmetric 2x2 form.
fn invert_form(g: [f64; 3]) -> Result<[f64; 4]> {
    let det = g[0] * g[2] - g[1] * g[1];
    if det.abs() < 1e-14 {
        return Err(EngineError::DegenerateForm);
    }
    Ok([g[2] / det, -g[1] / det, g[0] / det, det])
}

/// Second-order Laplace operator of the chosen form applied to a scalar
/// field, evaluated by nested central differences of the radical divergence
/// form with step h.
pub fn fd_laplacian(
    ev: &ChartEvaluator,
    which: FormKind,
    f: &dyn Fn(f64, f64) -> Result<f64>,
    u: f64,
    phi: f64,
    h: f64,
) -> Result<f64> {
    let flux = |uu: f64, pp: f64, second: bool| -> Result<f64> {
        let g = ev.form_components(which, uu, pp);
        let [b11, b12, b22, det] = invert_form(g)?;
        let sq = det.abs().sqrt();
        let fu = (f(uu + h, pp)? - f(uu - h, pp)?) / (2.0 * h);
        let fp = (f(uu, pp + h)? - f(uu, pp - h)?) / (2.0 * h);
        Ok(if second {
            sq * (b12 * fu + b22 * fp)
        } else {
            sq * (b11 * fu + b12 * fp)
        })
    };
    let g0 = ev.form_components(which, u, phi);
    let det0 = g0[0] * g0[2] - g0[1] * g0[1];
    if det0.abs() < 1e-14 {
        return Err(EngineError::DegenerateForm);
    }
    let sq0 = det0.abs().sqrt();
    let div = (flux(u + h, phi, false)? - flux(u - h, phi, false)?) / (2.0 * h)
        + (flux(u, phi + h, true)? - flux(u, phi - h, true)?) / (2.0 * h);
    Ok(-div / sq0)
}

/// Step-halving Richardson extrapolation of `fd_laplacian` (fourth order).
pub fn fd_laplacian_richardson(
    ev: &ChartEvaluator,
    which: FormKind,
    f: &dyn Fn(f64, f64) -> Result<f64>,
    u: f64,
    phi: f64,
    h: f64,
) -> Result<f64> {
    let coarse = fd_laplacian(ev, which, f, u, phi, h)?;
    let fine = fd_laplacian(ev, which, f, u, phi, h / 2.0)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Componentwise FD Laplacian of an ambient vector field.
pub fn fd_laplacian_ambient(
    ev: &ChartEvaluator,
    which: FormKind,
    field: &dyn Fn(f64, f64) -> Result<V3>,
    u: f64,
    phi: f64,
    h: f64,
    richardson: bool,
) -> Result<V3> {
    let mut out = [0.0; 3];
    for (i, slot) in out.iter_mut().enumerate() {
        let comp = |uu: f64, pp: f64| -> Result<f64> { Ok(field(uu, pp)?[i]) };
        *slot = if richardson {
            fd_laplacian_richardson(ev, which, &comp, u, phi, h)?
        } else {
            fd_laplacian(ev, which, &comp, u, phi, h)?
        };
    }
    Ok(out)
}

/// Deterministic admissible sample points: |cos phi| and delta both kept
/// at least 0.1 so FD stencils stay inside the guard band.
pub fn sample_points(ev: &ChartEvaluator, count: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = seeded_rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let u: f64 = rng.gen_range(0.3..6.0);
        let phi: f64 = rng.gen_range(0.12..(std::f64::consts::PI - 0.12));
        if phi.cos().abs() < 0.1 {
            continue;
        }
        if ev.delta(u, phi) < 0.1 {
            continue;
        }
        out.push((u, phi));
    }
    out
}

/// Maximum relative deviation between the k-th symbolic iterate of the Gauss
/// map and a finite-difference application of the operator to the (k-1)-th
/// symbolic iterate, over `points` admissible samples.
pub fn fd_iterate_deviation(
    chart: &SurfaceChart,
    k: usize,
    points: usize,
    seed: u64,
) -> Result<f64> {
    if k == 0 {
        return Err(EngineError::InvalidArgument("k must be at least 1".into()));
    }
    let ev = ChartEvaluator::new(chart)?;
    let op = BeltramiOp::new(chart, FormKind::Second)?;
    let n = geometry::gauss_map_frame(chart)?;
    let iters = op.iterate(&AnyVec::Frame(n.clone()), k)?;
    let frame_of = |v: &AnyVec| -> FrameVec {
        match v {
            AnyVec::Frame(f) => f.clone(),
            AnyVec::Ambient(_) => unreachable!("frame input stays frame"),
        }
    };
    let prev = if k == 1 {
        n
    } else {
        frame_of(&iters[k - 2])
    };
    let target = frame_of(&iters[k - 1]);
    let mut worst: f64 = 0.0;
    for (u, phi) in sample_points(&ev, points, seed) {
        let field = |uu: f64, pp: f64| -> Result<V3> { ev.eval_frame_field(&prev, uu, pp) };
        let fd = fd_laplacian_ambient(&ev, FormKind::Second, &field, u, phi, 1e-4, false)?;
        let direct = ev.eval_frame_field(&target, u, phi)?;
        let scale = norm3(direct).max(1.0);
        let dev = norm3(sub3(fd, direct)) / scale;
        worst = worst.max(dev);
    }
    Ok(worst)
}

/// Numeric residual of the position identity
/// L(x) + (1/2K) grad3(K, n) + 2n = 0 at `count` profiles: the left side is a
/// Richardson FD Laplacian of the ambient position, the right side uses
/// closed-form K, n and single-level differences.
pub fn identity_eq4_max_residual(chart: &SurfaceChart, count: usize) -> Result<f64> {
    let ev = ChartEvaluator::new(chart)?;
    let mut worst: f64 = 0.0;
    let hs = 1e-5;
    for (u, phi) in sample_points(&ev, count, 0x1DE44) {
        let pos = |uu: f64, pp: f64| -> Result<V3> { Ok(ev.position(uu, pp)) };
        let lhs = fd_laplacian_ambient(&ev, FormKind::Second, &pos, u, phi, 2e-3, true)?;
        let k0 = ev.gauss_curvature(u, phi);
        let ku = (ev.gauss_curvature(u + hs, phi) - ev.gauss_curvature(u - hs, phi)) / (2.0 * hs);
        let kp = (ev.gauss_curvature(u, phi + hs) - ev.gauss_curvature(u, phi - hs)) / (2.0 * hs);
        let nu = scale3(
            sub3(ev.normal(u + hs, phi), ev.normal(u - hs, phi)),
            1.0 / (2.0 * hs),
        );
        let np = scale3(
            sub3(ev.normal(u, phi + hs), ev.normal(u, phi - hs)),
            1.0 / (2.0 * hs),
        );
        let [e11, e12, e22, _] = invert_form(ev.form_components(FormKind::Third, u, phi))?;
        let grad = add3(
            scale3(nu, e11 * ku + e12 * kp),
            scale3(np, e12 * ku + e22 * kp),
        );
        let rhs = sub3(
            scale3(grad, -1.0 / (2.0 * k0)),
            scale3(ev.normal(u, phi), 2.0),
        );
        let scale = norm3(lhs).max(1.0);
        worst = worst.max(norm3(sub3(lhs, rhs)) / scale);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_anchor_ring, make_sphere, make_tube};

    #[test]
    fn integrator_matches_helix_closed_form() {
        let kappa0 = 1.3;
        let tau0 = 0.7;
        let u = 2.5;
        let num = integrate_frenet(&|_| kappa0, &|_| tau0, u);
        let exact = helix_frame(kappa0, tau0, u);
        // the closed form is normalized to the same initial frame
        assert!(norm3(sub3(num.t, exact.t)) < 1e-9);
        assert!(norm3(sub3(num.h, exact.h)) < 1e-9);
        assert!(norm3(sub3(num.b, exact.b)) < 1e-9);
        assert!(norm3(sub3(num.rho, exact.rho)) < 1e-9);
    }

    #[test]
    fn closed_forms_match_position_differences() {
        // hand-coded I and II agree with finite differences of the ambient
        // position for all three builtin kinds
        for chart in [make_tube(), make_anchor_ring(), make_sphere(Orientation::Inward)] {
            let ev = ChartEvaluator::new(&chart).unwrap();
            let h = 1e-5;
            for (u, phi) in sample_points(&ev, 5, 99) {
                let xu = scale3(
                    sub3(ev.position(u + h, phi), ev.position(u - h, phi)),
                    1.0 / (2.0 * h),
                );
                let xp = scale3(
                    sub3(ev.position(u, phi + h), ev.position(u, phi - h)),
                    1.0 / (2.0 * h),
                );
                let [e, f, g] = ev.form_components(FormKind::First, u, phi);
                assert!((dot3(xu, xu) - e).abs() < 1e-7);
                assert!((dot3(xu, xp) - f).abs() < 1e-7);
                assert!((dot3(xp, xp) - g).abs() < 1e-7);

                let n = ev.normal(u, phi);
                assert!((norm3(n) - 1.0).abs() < 1e-12);
                assert!(dot3(n, xu).abs() < 1e-7);
                // wider step: a second difference amplifies rounding by 1/h^2
                let h2 = 1e-4;
                let xuu = scale3(
                    add3(
                        sub3(ev.position(u + h2, phi), scale3(ev.position(u, phi), 2.0)),
                        ev.position(u - h2, phi),
                    ),
                    1.0 / (h2 * h2),
                );
                let [b11, _, _] = ev.form_components(FormKind::Second, u, phi);
                assert!((dot3(xuu, n) - b11).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn sphere_identity_residual_is_small() {
        let res = identity_eq4_max_residual(&make_sphere(Orientation::Inward), 10).unwrap();
        assert!(res < 1e-8, "sphere identity residual {res:e}");
    }

    #[test]
    fn ring_identity_residual_is_small() {
        let res = identity_eq4_max_residual(&make_anchor_ring(), 10).unwrap();
        assert!(res < 1e-8, "ring identity residual {res:e}");
    }
}
