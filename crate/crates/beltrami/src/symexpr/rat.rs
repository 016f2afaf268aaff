//! Rational forms: a normalized polynomial numerator over a monomial
//! denominator delta^a cos^b kappa^c r^d.
//!
//! This is the engine's canonical representation. Reduction removes common
//! monomial factors and trades numerator factors of (1 - delta) against
//! denominator powers of cos, kappa, r (the rewrite image of that product),
//! which makes the form unique and pole orders well-defined.

use super::poly::{
    rational_to_f64, v_kappa, Mono, Poly, MONO_ONE, NVARS, V_COS, V_DELTA, V_R, V_SIN,
};
use crate::error::{EngineError, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Denominator exponents of the canonical monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Den {
    pub delta: u8,
    pub cos: u8,
    pub kappa: u8,
    pub r: u8,
}

impl Den {
    pub fn is_one(&self) -> bool {
        self.delta == 0 && self.cos == 0 && self.kappa == 0 && self.r == 0
    }

    fn max(self, other: Den) -> Den {
        Den {
            delta: self.delta.max(other.delta),
            cos: self.cos.max(other.cos),
            kappa: self.kappa.max(other.kappa),
            r: self.r.max(other.r),
        }
    }

    fn add(self, other: Den) -> Den {
        Den {
            delta: self.delta.checked_add(other.delta).expect("pole overflow"),
            cos: self.cos.checked_add(other.cos).expect("pole overflow"),
            kappa: self.kappa.checked_add(other.kappa).expect("pole overflow"),
            r: self.r.checked_add(other.r).expect("pole overflow"),
        }
    }

    /// Monomial lifting the difference other/self into a numerator factor.
    fn diff_mono(self, larger: Den) -> Mono {
        let mut m = MONO_ONE;
        m[V_DELTA] = larger.delta - self.delta;
        m[V_COS] = larger.cos - self.cos;
        m[v_kappa(0)] = larger.kappa - self.kappa;
        m[V_R] = larger.r - self.r;
        m
    }

    pub fn as_mono(&self) -> Mono {
        let mut m = MONO_ONE;
        m[V_DELTA] = self.delta;
        m[V_COS] = self.cos;
        m[v_kappa(0)] = self.kappa;
        m[V_R] = self.r;
        m
    }
}

/// Canonical rational form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatForm {
    pub num: Poly,
    pub den: Den,
}

impl RatForm {
    pub fn zero() -> Self {
        RatForm { num: Poly::zero(), den: Den::default() }
    }

    pub fn one() -> Self {
        RatForm { num: Poly::one(), den: Den::default() }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatForm { num: p, den: Den::default() }.reduced()
    }

    pub fn from_rational(c: BigRational) -> Self {
        RatForm { num: Poly::constant(c), den: Den::default() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn var(v: usize) -> Self {
        RatForm { num: Poly::var(v, 1), den: Den::default() }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Applies the two reduction passes to fixpoint: common-factor
    /// cancellation per variable, and the (1 - delta) trade.
    pub fn reduced(mut self) -> Self {
        if self.num.is_zero() {
            self.den = Den::default();
            return self;
        }
        loop {
            let mut changed = false;

            let pairs: [(usize, &mut u8); 4] = [
                (V_DELTA, &mut self.den.delta),
                (V_COS, &mut self.den.cos),
                (v_kappa(0), &mut self.den.kappa),
                (V_R, &mut self.den.r),
            ];
            for (var, exp) in pairs {
                if *exp == 0 {
                    continue;
                }
                let t = self.num.min_exp(var).min(*exp);
                if t > 0 {
                    self.num = self.num.shift_down(var, t);
                    *exp -= t;
                    changed = true;
                }
            }

            if self.den.cos > 0 || self.den.kappa > 0 || self.den.r > 0 {
                if let Some(q) = self.num.div_one_minus_delta() {
                    // (1 - delta) equals r*kappa*cos, so one factor cancels a
                    // power of each variable the denominator still carries and
                    // reintroduces the rest into the numerator.
                    let mut extra = MONO_ONE;
                    if self.den.cos > 0 {
                        self.den.cos -= 1;
                    } else {
                        extra[V_COS] += 1;
                    }
                    if self.den.kappa > 0 {
                        self.den.kappa -= 1;
                    } else {
                        extra[v_kappa(0)] += 1;
                    }
                    if self.den.r > 0 {
                        self.den.r -= 1;
                    } else {
                        extra[V_R] += 1;
                    }
                    self.num = q.mul_mono(&extra);
                    changed = true;
                }
            }

            if !changed {
                return self;
            }
        }
    }

    pub fn add(&self, other: &RatForm) -> RatForm {
        let den = self.den.max(other.den);
        let a = self.num.mul_mono(&self.den.diff_mono(den));
        let b = other.num.mul_mono(&other.den.diff_mono(den));
        RatForm { num: a.add(&b), den }.reduced()
    }

    /// n-ary sum with a single denominator unification and one reduction at
    /// the end; a left fold of `add` would redo both per summand.
    pub fn sum(parts: Vec<RatForm>) -> RatForm {
        let mut den = Den::default();
        for p in &parts {
            if !p.num.is_zero() {
                den = den.max(p.den);
            }
        }
        let mut num = Poly::zero();
        for p in parts {
            if p.num.is_zero() {
                continue;
            }
            let lift = p.den.diff_mono(den);
            if lift == MONO_ONE {
                num.absorb(p.num);
            } else {
                num.absorb(p.num.mul_mono(&lift));
            }
        }
        RatForm { num: num.normalize(), den }.reduced()
    }

    pub fn sub(&self, other: &RatForm) -> RatForm {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatForm {
        RatForm { num: self.num.neg(), den: self.den }
    }

    pub fn scale(&self, c: &BigRational) -> RatForm {
        if c.is_zero() {
            return RatForm::zero();
        }
        RatForm { num: self.num.scale(c), den: self.den }
    }

    pub fn scale_int(&self, n: i64) -> RatForm {
        self.scale(&BigRational::from_integer(BigInt::from(n)))
    }

    pub fn mul(&self, other: &RatForm) -> RatForm {
        RatForm { num: self.num.mul(&other.num), den: self.den.add(other.den) }.reduced()
    }

    /// Inverse of forms whose numerator is a monomial times a power of delta
    /// times a power of (1 - delta); everything the closed tube/ring/sphere
    /// computations produce in denominator position has this shape.
    pub fn inv(&self) -> Result<RatForm> {
        if self.num.is_zero() {
            return Err(EngineError::NonRationalStructure(
                "reciprocal of the zero expression".into(),
            ));
        }
        let g = self.num.common_mono();
        let mut core = self.num.clone();
        for v in 0..NVARS {
            if g[v] > 0 {
                core = core.shift_down(v, g[v]);
            }
        }
        // Only pole-capable variables may move into the denominator.
        for v in 0..NVARS {
            if g[v] > 0 && ![V_DELTA, V_COS, v_kappa(0), V_R].contains(&v) {
                return Err(EngineError::NonRationalStructure(format!(
                    "denominator carries non-pole symbol {}",
                    super::poly::var_name(v)
                )));
            }
        }
        let mut one_minus_power: u8 = 0;
        loop {
            if core.num_terms() == 1 {
                break;
            }
            match core.div_one_minus_delta() {
                Some(q) if !q.is_zero() => {
                    core = q;
                    one_minus_power += 1;
                }
                _ => break,
            }
        }
        let (m, q) = core.as_monomial().ok_or_else(|| {
            EngineError::NonRationalStructure(
                "denominator is not a monomial times powers of delta and (1 - delta)".into(),
            )
        })?;
        if (0..NVARS).any(|v| v != V_DELTA && m[v] > 0) {
            return Err(EngineError::NonRationalStructure(
                "denominator core contains symbols other than delta".into(),
            ));
        }
        let den = Den {
            delta: g[V_DELTA] + m[V_DELTA],
            cos: g[V_COS] + one_minus_power,
            kappa: g[v_kappa(0)] + one_minus_power,
            r: g[V_R] + one_minus_power,
        };
        let num = Poly::constant(BigRational::one() / q).mul_mono(&self.den.as_mono());
        Ok(RatForm { num, den }.reduced())
    }

    pub fn div(&self, other: &RatForm) -> Result<RatForm> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn powi(&self, n: i32) -> Result<RatForm> {
        if n == 0 {
            return Ok(RatForm::one());
        }
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut acc = base.clone();
        for _ in 1..n.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Chart derivative in phi.
    pub fn diff_phi(&self) -> RatForm {
        let a = self.den.delta;
        let b = self.den.cos;
        if self.num.is_zero() {
            return RatForm::zero();
        }
        // d/dphi (N / (delta^a cos^b ...)) multiplied through by delta*cos.
        let mut dc = MONO_ONE;
        dc[V_DELTA] = 1;
        dc[V_COS] = 1;
        let part1 = self.num.diff_phi().mul_mono(&dc);
        let mut correction = Poly::zero();
        if a > 0 {
            let mut m = MONO_ONE;
            m[V_R] = 1;
            m[v_kappa(0)] = 1;
            m[V_SIN] = 1;
            m[V_COS] = 1;
            correction.add_term(m, -BigRational::from_integer(BigInt::from(a)));
        }
        if b > 0 {
            let mut m = MONO_ONE;
            m[V_SIN] = 1;
            m[V_DELTA] = 1;
            correction.add_term(m, BigRational::from_integer(BigInt::from(b)));
        }
        let part2 = self.num.mul(&correction.normalize());
        let den = Den { delta: self.den.delta + 1, cos: self.den.cos + 1, ..self.den };
        RatForm { num: part1.add(&part2), den }.reduced()
    }

    /// Chart derivative in u. With `constant_spine` every scalar is
    /// u-independent and the derivative vanishes identically.
    pub fn diff_u(&self, constant_spine: bool) -> RatForm {
        if constant_spine || self.num.is_zero() {
            return RatForm::zero();
        }
        let a = self.den.delta;
        let e = self.den.kappa;
        let mut dk = MONO_ONE;
        dk[V_DELTA] = 1;
        dk[v_kappa(0)] = 1;
        let part1 = self.num.diff_u(false).mul_mono(&dk);
        let mut correction = Poly::zero();
        if a > 0 {
            let mut m = MONO_ONE;
            m[V_R] = 1;
            m[v_kappa(1)] = 1;
            m[V_COS] = 1;
            m[v_kappa(0)] = 1;
            correction.add_term(m, BigRational::from_integer(BigInt::from(a)));
        }
        if e > 0 {
            let mut m = MONO_ONE;
            m[v_kappa(1)] = 1;
            m[V_DELTA] = 1;
            correction.add_term(m, -BigRational::from_integer(BigInt::from(e)));
        }
        let part2 = self.num.mul(&correction.normalize());
        let den = Den { delta: self.den.delta + 1, kappa: self.den.kappa + 1, ..self.den };
        RatForm { num: part1.add(&part2), den }.reduced()
    }

    /// Pole orders as (delta, cos, kappa, r) denominator exponents.
    pub fn pole_orders(&self) -> (u8, u8, u8, u8) {
        (self.den.delta, self.den.cos, self.den.kappa, self.den.r)
    }

    /// The delta-free layer of the numerator together with the denominator:
    /// the coefficient of the deepest delta-pole.
    pub fn delta_lead(&self) -> RatForm {
        RatForm {
            num: self.num.delta_free_part(),
            den: Den { delta: 0, ..self.den },
        }
    }

    pub fn eval(&self, value_of: &dyn Fn(usize) -> Option<f64>) -> Result<f64> {
        let num = self.num.eval(value_of)?;
        if self.den.is_one() {
            return Ok(num);
        }
        let mut den = 1.0f64;
        for (v, e) in [
            (V_DELTA, self.den.delta),
            (V_COS, self.den.cos),
            (v_kappa(0), self.den.kappa),
            (V_R, self.den.r),
        ] {
            if e > 0 {
                let base = value_of(v)
                    .ok_or_else(|| EngineError::MissingSymbol(super::poly::var_name(v)))?;
                den *= base.powi(e as i32);
            }
        }
        if den.abs() < 1e-300 {
            return Err(EngineError::DivisionNearZero);
        }
        Ok(num / den)
    }
}

pub fn rat_to_f64(c: &BigRational) -> f64 {
    rational_to_f64(c)
}

/// Scalars treated as constants for an anchor ring or sphere chart: the
/// spine's curvature is constant and its torsion vanishes, so the entire
/// u-dependence sits in the frame rotation.
pub fn delta() -> RatForm {
    RatForm::var(V_DELTA)
}

pub fn cos_phi() -> RatForm {
    RatForm::var(V_COS)
}

pub fn sin_phi() -> RatForm {
    RatForm::var(V_SIN)
}

pub fn radius() -> RatForm {
    RatForm::var(V_R)
}

pub fn kappa(order: usize) -> RatForm {
    RatForm::var(v_kappa(order))
}

pub fn tau(order: usize) -> RatForm {
    RatForm::var(super::poly::v_tau(order))
}

/// The combination kappa'*cos + kappa*tau*sin that controls every tube lead.
pub fn beta() -> RatForm {
    kappa(1).mul(&cos_phi()).add(&kappa(0).mul(&tau(0)).mul(&sin_phi()))
}
