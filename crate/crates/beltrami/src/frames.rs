//! Vector algebra over the moving Frenet frame of the spine curve, plus
//! fixed-basis ambient vectors.
//!
//! A `FrameVec` stores coefficients over {t, h, b}. Differentiation in u
//! applies the Frenet-Serret connection (t' = kappa h, h' = -kappa t + tau b,
//! b' = -tau h) exactly once per frame vector; differentiation in phi is
//! componentwise because the frame depends on u only.

use crate::error::{EngineError, Result};
use crate::symexpr::rat::{self, RatForm};
use crate::symexpr::{diff_phi, diff_u, rat_to_expr, Expr};

/// Spine data threaded through every connection derivative: the curvature and
/// torsion as canonical scalars, and whether the spine has constant invariants
/// (circle spines), which makes every scalar u-constant.
#[derive(Debug, Clone)]
pub struct FrameContext {
    pub kappa: RatForm,
    pub tau: RatForm,
    pub constant_spine: bool,
}

impl FrameContext {
    /// Generic arc-length spine: kappa(u), tau(u) stay symbolic with full
    /// derivative towers.
    pub fn generic_spine() -> Self {
        FrameContext {
            kappa: rat::kappa(0),
            tau: rat::tau(0),
            constant_spine: false,
        }
    }

    /// Circle spine: kappa constant (kept symbolic), tau identically zero.
    pub fn circular_spine() -> Self {
        FrameContext {
            kappa: rat::kappa(0),
            tau: RatForm::zero(),
            constant_spine: true,
        }
    }

    /// Equator circle of a radius-r sphere: kappa = 1/r, tau = 0.
    pub fn sphere_spine() -> Self {
        let one = RatForm::one();
        let kappa = one.div(&rat::radius()).expect("r is invertible");
        FrameContext {
            kappa,
            tau: RatForm::zero(),
            constant_spine: true,
        }
    }

    pub(crate) fn diff_u_scalar(&self, f: &RatForm) -> RatForm {
        f.diff_u(self.constant_spine)
    }
}

/// Internal frame vector over canonical scalars. All heavy iteration happens
/// here; the public `FrameVec` converts at the boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct RVec {
    pub t: RatForm,
    pub h: RatForm,
    pub b: RatForm,
}

impl RVec {
    pub fn is_zero(&self) -> bool {
        self.t.is_zero() && self.h.is_zero() && self.b.is_zero()
    }

    pub fn d_du(&self, ctx: &FrameContext) -> RVec {
        let cs = ctx.constant_spine;
        RVec {
            t: self.t.diff_u(cs).sub(&ctx.kappa.mul(&self.h)),
            h: self
                .h
                .diff_u(cs)
                .add(&ctx.kappa.mul(&self.t))
                .sub(&ctx.tau.mul(&self.b)),
            b: self.b.diff_u(cs).add(&ctx.tau.mul(&self.h)),
        }
    }

    pub fn d_dphi(&self) -> RVec {
        RVec {
            t: self.t.diff_phi(),
            h: self.h.diff_phi(),
            b: self.b.diff_phi(),
        }
    }

    pub fn dot(&self, o: &RVec) -> RatForm {
        self.t
            .mul(&o.t)
            .add(&self.h.mul(&o.h))
            .add(&self.b.mul(&o.b))
    }

    pub fn cross(&self, o: &RVec) -> RVec {
        RVec {
            t: self.h.mul(&o.b).sub(&self.b.mul(&o.h)),
            h: self.b.mul(&o.t).sub(&self.t.mul(&o.b)),
            b: self.t.mul(&o.h).sub(&self.h.mul(&o.t)),
        }
    }

    pub fn scale(&self, f: &RatForm) -> RVec {
        RVec {
            t: self.t.mul(f),
            h: self.h.mul(f),
            b: self.b.mul(f),
        }
    }

    pub fn add(&self, o: &RVec) -> RVec {
        RVec {
            t: self.t.add(&o.t),
            h: self.h.add(&o.h),
            b: self.b.add(&o.b),
        }
    }

    pub fn sub(&self, o: &RVec) -> RVec {
        RVec {
            t: self.t.sub(&o.t),
            h: self.h.sub(&o.h),
            b: self.b.sub(&o.b),
        }
    }

    pub fn neg(&self) -> RVec {
        RVec {
            t: self.t.neg(),
            h: self.h.neg(),
            b: self.b.neg(),
        }
    }

    pub fn max_term_count(&self) -> usize {
        self.t
            .num
            .num_terms()
            .max(self.h.num.num_terms())
            .max(self.b.num.num_terms())
    }

    pub fn to_frame_vec(&self) -> FrameVec {
        FrameVec {
            a_t: rat_to_expr(&self.t),
            a_h: rat_to_expr(&self.h),
            a_b: rat_to_expr(&self.b),
        }
    }
}

/// Vector field written over the Frenet frame {t, h, b}.
#[derive(Debug, Clone)]
pub struct FrameVec {
    pub a_t: Expr,
    pub a_h: Expr,
    pub a_b: Expr,
}

impl FrameVec {
    pub fn new(a_t: Expr, a_h: Expr, a_b: Expr) -> Self {
        FrameVec { a_t, a_h, a_b }
    }

    pub fn zero() -> Self {
        FrameVec::new(Expr::zero(), Expr::zero(), Expr::zero())
    }

    /// The unit tangent.
    pub fn t() -> Self {
        FrameVec::new(Expr::one(), Expr::zero(), Expr::zero())
    }

    /// The principal normal.
    pub fn h() -> Self {
        FrameVec::new(Expr::zero(), Expr::one(), Expr::zero())
    }

    /// The binormal.
    pub fn b() -> Self {
        FrameVec::new(Expr::zero(), Expr::zero(), Expr::one())
    }

    pub(crate) fn to_rvec(&self) -> Result<RVec> {
        Ok(RVec {
            t: self.a_t.to_rat()?,
            h: self.a_h.to_rat()?,
            b: self.a_b.to_rat()?,
        })
    }

    /// Connection derivative in u: componentwise diff_u plus the
    /// Frenet-Serret action.
    pub fn d_du(&self, ctx: &FrameContext) -> Result<FrameVec> {
        Ok(self.to_rvec()?.d_du(ctx).to_frame_vec())
    }

    /// Componentwise derivative in phi; the frame is phi-constant.
    pub fn d_dphi(&self) -> FrameVec {
        FrameVec::new(
            diff_phi(&self.a_t),
            diff_phi(&self.a_h),
            diff_phi(&self.a_b),
        )
    }

    pub fn dot(&self, o: &FrameVec) -> Expr {
        self.a_t.clone() * o.a_t.clone()
            + self.a_h.clone() * o.a_h.clone()
            + self.a_b.clone() * o.a_b.clone()
    }

    /// Right-handed cross product: cross(t, h) = b.
    pub fn cross(&self, o: &FrameVec) -> FrameVec {
        FrameVec::new(
            self.a_h.clone() * o.a_b.clone() - self.a_b.clone() * o.a_h.clone(),
            self.a_b.clone() * o.a_t.clone() - self.a_t.clone() * o.a_b.clone(),
            self.a_t.clone() * o.a_h.clone() - self.a_h.clone() * o.a_t.clone(),
        )
    }

    pub fn scale(&self, f: &Expr) -> FrameVec {
        FrameVec::new(
            f.clone() * self.a_t.clone(),
            f.clone() * self.a_h.clone(),
            f.clone() * self.a_b.clone(),
        )
    }

    pub fn add(&self, o: &FrameVec) -> FrameVec {
        FrameVec::new(
            self.a_t.clone() + o.a_t.clone(),
            self.a_h.clone() + o.a_h.clone(),
            self.a_b.clone() + o.a_b.clone(),
        )
    }

    pub fn sub(&self, o: &FrameVec) -> FrameVec {
        FrameVec::new(
            self.a_t.clone() - o.a_t.clone(),
            self.a_h.clone() - o.a_h.clone(),
            self.a_b.clone() - o.a_b.clone(),
        )
    }

    pub fn neg(&self) -> FrameVec {
        FrameVec::new(
            -self.a_t.clone(),
            -self.a_h.clone(),
            -self.a_b.clone(),
        )
    }

    pub fn is_zero(&self) -> Result<bool> {
        Ok(crate::symexpr::is_zero(&self.a_t)?
            && crate::symexpr::is_zero(&self.a_h)?
            && crate::symexpr::is_zero(&self.a_b)?)
    }
}

/// Vector field written in a fixed orthonormal ambient basis. Differentiation
/// is componentwise; no connection applies.
#[derive(Debug, Clone)]
pub struct AmbientVec {
    pub x: Expr,
    pub y: Expr,
    pub z: Expr,
}

impl AmbientVec {
    pub fn new(x: Expr, y: Expr, z: Expr) -> Self {
        AmbientVec { x, y, z }
    }

    pub fn d_du(&self) -> AmbientVec {
        AmbientVec::new(diff_u(&self.x), diff_u(&self.y), diff_u(&self.z))
    }

    pub fn d_dphi(&self) -> AmbientVec {
        AmbientVec::new(diff_phi(&self.x), diff_phi(&self.y), diff_phi(&self.z))
    }

    pub fn dot(&self, o: &AmbientVec) -> Expr {
        self.x.clone() * o.x.clone()
            + self.y.clone() * o.y.clone()
            + self.z.clone() * o.z.clone()
    }

    pub fn cross(&self, o: &AmbientVec) -> AmbientVec {
        AmbientVec::new(
            self.y.clone() * o.z.clone() - self.z.clone() * o.y.clone(),
            self.z.clone() * o.x.clone() - self.x.clone() * o.z.clone(),
            self.x.clone() * o.y.clone() - self.y.clone() * o.x.clone(),
        )
    }

    pub fn scale(&self, f: &Expr) -> AmbientVec {
        AmbientVec::new(
            f.clone() * self.x.clone(),
            f.clone() * self.y.clone(),
            f.clone() * self.z.clone(),
        )
    }

    pub fn add(&self, o: &AmbientVec) -> AmbientVec {
        AmbientVec::new(
            self.x.clone() + o.x.clone(),
            self.y.clone() + o.y.clone(),
            self.z.clone() + o.z.clone(),
        )
    }
}

/// A vector of either kind. Binary operations require matching kinds.
#[derive(Debug, Clone)]
pub enum AnyVec {
    Frame(FrameVec),
    Ambient(AmbientVec),
}

impl AnyVec {
    pub fn dot(&self, o: &AnyVec) -> Result<Expr> {
        match (self, o) {
            (AnyVec::Frame(a), AnyVec::Frame(b)) => Ok(a.dot(b)),
            (AnyVec::Ambient(a), AnyVec::Ambient(b)) => Ok(a.dot(b)),
            _ => Err(EngineError::MixedFrames),
        }
    }

    pub fn cross(&self, o: &AnyVec) -> Result<AnyVec> {
        match (self, o) {
            (AnyVec::Frame(a), AnyVec::Frame(b)) => Ok(AnyVec::Frame(a.cross(b))),
            (AnyVec::Ambient(a), AnyVec::Ambient(b)) => Ok(AnyVec::Ambient(a.cross(b))),
            _ => Err(EngineError::MixedFrames),
        }
    }

    pub fn add(&self, o: &AnyVec) -> Result<AnyVec> {
        match (self, o) {
            (AnyVec::Frame(a), AnyVec::Frame(b)) => Ok(AnyVec::Frame(a.add(b))),
            (AnyVec::Ambient(a), AnyVec::Ambient(b)) => Ok(AnyVec::Ambient(a.add(b))),
            _ => Err(EngineError::MixedFrames),
        }
    }

    pub fn scale(&self, f: &Expr) -> AnyVec {
        match self {
            AnyVec::Frame(v) => AnyVec::Frame(v.scale(f)),
            AnyVec::Ambient(v) => AnyVec::Ambient(v.scale(f)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::{equal, is_zero};

    fn ctx() -> FrameContext {
        FrameContext::generic_spine()
    }

    #[test]
    fn frenet_rules() {
        let dt = FrameVec::t().d_du(&ctx()).unwrap();
        assert!(is_zero(&(dt.a_t.clone())).unwrap());
        assert!(equal(&dt.a_h, &Expr::kappa(0)).unwrap());
        assert!(is_zero(&dt.a_b).unwrap());

        let dh = FrameVec::h().d_du(&ctx()).unwrap();
        assert!(equal(&dh.a_t, &(-Expr::kappa(0))).unwrap());
        assert!(is_zero(&dh.a_h).unwrap());
        assert!(equal(&dh.a_b, &Expr::tau(0)).unwrap());

        let db = FrameVec::b().d_du(&ctx()).unwrap();
        assert!(is_zero(&db.a_t).unwrap());
        assert!(equal(&db.a_h, &(-Expr::tau(0))).unwrap());
        assert!(is_zero(&db.a_b).unwrap());
    }

    #[test]
    fn dphi_is_componentwise() {
        // the inward tube normal: -cos(phi) h - sin(phi) b
        let n = FrameVec::new(Expr::zero(), -Expr::cos_phi(), -Expr::sin_phi());
        let dn = n.d_dphi();
        assert!(equal(&dn.a_h, &Expr::sin_phi()).unwrap());
        assert!(equal(&dn.a_b, &(-Expr::cos_phi())).unwrap());
        let dt = FrameVec::t().d_dphi();
        assert!(dt.is_zero().unwrap());
        let dh = FrameVec::h().scale(&Expr::delta()).d_dphi();
        assert!(equal(
            &dh.a_h,
            &(Expr::radius() * Expr::kappa(0) * Expr::sin_phi())
        )
        .unwrap());
    }

    #[test]
    fn cross_is_right_handed_and_orthogonal() {
        let b = FrameVec::t().cross(&FrameVec::h());
        assert!(equal(&b.a_b, &Expr::one()).unwrap());
        assert!(is_zero(&b.a_t).unwrap() && is_zero(&b.a_h).unwrap());

        let mut rng = crate::symexpr::numeric::seeded_rng(11);
        for _ in 0..5 {
            let v = random_vec(&mut rng);
            let w = random_vec(&mut rng);
            let c = v.cross(&w);
            assert!(is_zero(&c.dot(&v)).unwrap());
            assert!(is_zero(&c.dot(&w)).unwrap());
            let anti = c.add(&w.cross(&v));
            assert!(anti.is_zero().unwrap());
        }
    }

    #[test]
    fn connection_satisfies_leibniz_and_preserves_norms() {
        let mut rng = crate::symexpr::numeric::seeded_rng(12);
        for _ in 0..4 {
            let v = random_vec(&mut rng);
            let w = random_vec(&mut rng);
            let lhs = crate::symexpr::diff_u(&v.dot(&w));
            let rhs = v.d_du(&ctx()).unwrap().dot(&w) + v.dot(&w.d_du(&ctx()).unwrap());
            assert!(is_zero(&(lhs - rhs)).unwrap());
        }
        // constant coefficients: |v|^2 has zero u-derivative
        let v = FrameVec::new(Expr::from_int(2), Expr::from_int(-1), Expr::from_int(3));
        let d = v.d_du(&ctx()).unwrap().dot(&v);
        assert!(is_zero(&(d.clone() + d)).unwrap());
    }

    #[test]
    fn mixed_kinds_are_rejected() {
        let f = AnyVec::Frame(FrameVec::t());
        let a = AnyVec::Ambient(AmbientVec::new(Expr::one(), Expr::zero(), Expr::zero()));
        assert!(matches!(f.dot(&a), Err(EngineError::MixedFrames)));
        assert!(matches!(f.cross(&a), Err(EngineError::MixedFrames)));
        assert!(matches!(a.add(&f), Err(EngineError::MixedFrames)));
    }

    fn random_vec(rng: &mut impl rand::Rng) -> FrameVec {
        FrameVec::new(
            crate::symexpr::sample::random_expr(rng, 2),
            crate::symexpr::sample::random_expr(rng, 2),
            crate::symexpr::sample::random_expr(rng, 2),
        )
    }
}
