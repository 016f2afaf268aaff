//! Exact symbolic scalars in the two chart variables.
//!
//! `Expr` is an immutable expression tree over exact rational constants and
//! the symbols cos(phi), sin(phi), delta, r, kappa^(i), tau^(i).
//! `canonicalize` maps a tree to the unique `CanonForm`: a normalized
//! polynomial numerator over a monomial denominator in the pole-capable
//! symbols. Equality of canonical forms is equality of expressions modulo the
//! defining rewrite delta = 1 - r*kappa*cos(phi).

pub mod numeric;
pub mod poly;
pub mod rat;
pub mod sample;

use crate::error::{EngineError, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use poly::{v_kappa, v_tau, Poly, NVARS, V_COS, V_DELTA, V_R, V_SIN};
use rat::{Den, RatForm};
use std::fmt;
use std::sync::Arc;

pub use numeric::NumericProfile;

/// Atomic symbols of the expression language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    CosPhi,
    SinPhi,
    /// The regularity factor, related to the others only through the
    /// registered rewrite delta -> 1 - r*kappa*cos(phi).
    Delta,
    Radius,
    /// Spine curvature derivative tower; order 0 is kappa itself.
    Kappa(usize),
    /// Spine torsion derivative tower; order 0 is tau itself.
    Tau(usize),
}

impl Symbol {
    pub(crate) fn var_index(self) -> usize {
        match self {
            Symbol::CosPhi => V_COS,
            Symbol::SinPhi => V_SIN,
            Symbol::Delta => V_DELTA,
            Symbol::Radius => V_R,
            Symbol::Kappa(i) => v_kappa(i),
            Symbol::Tau(i) => v_tau(i),
        }
    }

    pub fn name(self) -> String {
        poly::var_name(self.var_index())
    }
}

pub(crate) fn symbol_of_var(v: usize) -> Symbol {
    match v {
        V_COS => Symbol::CosPhi,
        V_SIN => Symbol::SinPhi,
        V_DELTA => Symbol::Delta,
        V_R => Symbol::Radius,
        _ => {
            if v < 4 + poly::MAX_DERIV {
                Symbol::Kappa(v - 4)
            } else {
                Symbol::Tau(v - 4 - poly::MAX_DERIV)
            }
        }
    }
}

#[derive(Debug)]
enum Node {
    Const(BigRational),
    Sym(Symbol),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Expr, i32),
}

/// Immutable expression tree. Cloning is cheap (shared nodes).
#[derive(Debug, Clone)]
pub struct Expr(Arc<Node>);

impl Expr {
    pub fn rational(num: i64, den: i64) -> Expr {
        assert!(den != 0, "zero denominator in rational constant");
        Expr(Arc::new(Node::Const(BigRational::new(
            BigInt::from(num),
            BigInt::from(den),
        ))))
    }

    pub fn from_int(n: i64) -> Expr {
        Expr(Arc::new(Node::Const(BigRational::from_integer(BigInt::from(n)))))
    }

    pub fn from_big_rational(c: BigRational) -> Expr {
        Expr(Arc::new(Node::Const(c)))
    }

    pub fn sym(s: Symbol) -> Expr {
        Expr(Arc::new(Node::Sym(s)))
    }

    pub fn zero() -> Expr {
        Expr::from_int(0)
    }

    pub fn one() -> Expr {
        Expr::from_int(1)
    }

    pub fn cos_phi() -> Expr {
        Expr::sym(Symbol::CosPhi)
    }

    pub fn sin_phi() -> Expr {
        Expr::sym(Symbol::SinPhi)
    }

    pub fn delta() -> Expr {
        Expr::sym(Symbol::Delta)
    }

    pub fn radius() -> Expr {
        Expr::sym(Symbol::Radius)
    }

    pub fn kappa(order: usize) -> Expr {
        Expr::sym(Symbol::Kappa(order))
    }

    pub fn tau(order: usize) -> Expr {
        Expr::sym(Symbol::Tau(order))
    }

    /// kappa'*cos(phi) + kappa*tau*sin(phi), the recurring lead combination.
    pub fn beta() -> Expr {
        Expr::kappa(1) * Expr::cos_phi() + Expr::kappa(0) * Expr::tau(0) * Expr::sin_phi()
    }

    pub fn powi(&self, n: i32) -> Expr {
        Expr(Arc::new(Node::Pow(self.clone(), n)))
    }

    pub fn recip(&self) -> Expr {
        self.powi(-1)
    }

    fn add_of(terms: Vec<Expr>) -> Expr {
        Expr(Arc::new(Node::Add(terms)))
    }

    fn mul_of(factors: Vec<Expr>) -> Expr {
        Expr(Arc::new(Node::Mul(factors)))
    }

    pub(crate) fn to_rat(&self) -> Result<RatForm> {
        match &*self.0 {
            Node::Const(c) => Ok(RatForm::from_rational(c.clone())),
            Node::Sym(s) => Ok(RatForm::var(s.var_index())),
            Node::Add(ts) => {
                let mut parts = Vec::with_capacity(ts.len());
                for t in ts {
                    parts.push(t.to_rat()?);
                }
                Ok(RatForm::sum(parts))
            }
            Node::Mul(fs) => {
                let mut acc = RatForm::one();
                for f in fs {
                    acc = acc.mul(&f.to_rat()?);
                }
                Ok(acc)
            }
            Node::Pow(b, n) => b.to_rat()?.powi(*n),
        }
    }
}

impl std::ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::add_of(vec![self, rhs])
    }
}

impl std::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::add_of(vec![self, -rhs])
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::mul_of(vec![self, rhs])
    }
}

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::from_int(-1) * self
    }
}

/// Canonical form: normalized numerator over the monomial denominator
/// delta^a cos^b kappa^c r^d. Structural equality coincides with equality of
/// the underlying expressions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonForm {
    pub(crate) rat: RatForm,
}

impl CanonForm {
    pub(crate) fn from_rat(rat: RatForm) -> Self {
        CanonForm { rat }
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero()
    }

    pub fn numerator_term_count(&self) -> usize {
        self.rat.num.num_terms()
    }

    /// Denominator exponents (delta, cos, kappa, r).
    pub fn denominator_exponents(&self) -> (u8, u8, u8, u8) {
        self.rat.pole_orders()
    }

    /// Highest sin-degree of the numerator; the normal form keeps this <= 1.
    pub fn sin_degree(&self) -> u8 {
        self.rat.num.max_exp(V_SIN)
    }

    pub fn to_expr(&self) -> Expr {
        rat_to_expr(&self.rat)
    }
}

pub(crate) fn rat_to_expr(rat: &RatForm) -> Expr {
    if rat.is_zero() {
        return Expr::zero();
    }
    let mut terms: Vec<Expr> = Vec::new();
    for (m, c) in rat.num.terms() {
        let mut factors: Vec<Expr> = vec![Expr::from_big_rational(c.clone())];
        for v in 0..NVARS {
            if m[v] > 0 {
                let s = Expr::sym(symbol_of_var(v));
                factors.push(if m[v] == 1 { s } else { s.powi(m[v] as i32) });
            }
        }
        terms.push(Expr::mul_of(factors));
    }
    let num = if terms.len() == 1 { terms.pop().unwrap() } else { Expr::add_of(terms) };
    let (d, c, k, r) = rat.pole_orders();
    if d == 0 && c == 0 && k == 0 && r == 0 {
        return num;
    }
    let mut factors = vec![num];
    for (sym, e) in [
        (Symbol::Delta, d),
        (Symbol::CosPhi, c),
        (Symbol::Kappa(0), k),
        (Symbol::Radius, r),
    ] {
        if e > 0 {
            factors.push(Expr::sym(sym).powi(-(e as i32)));
        }
    }
    Expr::mul_of(factors)
}

/// Partial derivative in the angular chart variable phi.
pub fn diff_phi(e: &Expr) -> Expr {
    match &*e.0 {
        Node::Const(_) => Expr::zero(),
        Node::Sym(s) => match s {
            Symbol::CosPhi => -Expr::sin_phi(),
            Symbol::SinPhi => Expr::cos_phi(),
            Symbol::Delta => Expr::radius() * Expr::kappa(0) * Expr::sin_phi(),
            Symbol::Radius | Symbol::Kappa(_) | Symbol::Tau(_) => Expr::zero(),
        },
        Node::Add(ts) => Expr::add_of(ts.iter().map(diff_phi).collect()),
        Node::Mul(fs) => {
            let mut terms = Vec::with_capacity(fs.len());
            for i in 0..fs.len() {
                let mut prod: Vec<Expr> = Vec::with_capacity(fs.len());
                for (j, f) in fs.iter().enumerate() {
                    prod.push(if i == j { diff_phi(f) } else { f.clone() });
                }
                terms.push(Expr::mul_of(prod));
            }
            Expr::add_of(terms)
        }
        Node::Pow(b, n) => {
            if *n == 0 {
                Expr::zero()
            } else {
                Expr::from_int(*n as i64) * b.powi(n - 1) * diff_phi(b)
            }
        }
    }
}

/// Partial derivative in the spine parameter u.
pub fn diff_u(e: &Expr) -> Expr {
    match &*e.0 {
        Node::Const(_) => Expr::zero(),
        Node::Sym(s) => match s {
            Symbol::Kappa(i) => Expr::kappa(i + 1),
            Symbol::Tau(i) => Expr::tau(i + 1),
            Symbol::Delta => -(Expr::radius() * Expr::kappa(1) * Expr::cos_phi()),
            Symbol::CosPhi | Symbol::SinPhi | Symbol::Radius => Expr::zero(),
        },
        Node::Add(ts) => Expr::add_of(ts.iter().map(diff_u).collect()),
        Node::Mul(fs) => {
            let mut terms = Vec::with_capacity(fs.len());
            for i in 0..fs.len() {
                let mut prod: Vec<Expr> = Vec::with_capacity(fs.len());
                for (j, f) in fs.iter().enumerate() {
                    prod.push(if i == j { diff_u(f) } else { f.clone() });
                }
                terms.push(Expr::mul_of(prod));
            }
            Expr::add_of(terms)
        }
        Node::Pow(b, n) => {
            if *n == 0 {
                Expr::zero()
            } else {
                Expr::from_int(*n as i64) * b.powi(n - 1) * diff_u(b)
            }
        }
    }
}

/// Reduces an expression to its unique canonical form.
pub fn canonicalize(e: &Expr) -> Result<CanonForm> {
    Ok(CanonForm::from_rat(e.to_rat()?))
}

/// Symbolic zero test with a mandatory numeric cross-check: a symbolically
/// zero expression must also vanish (|value| < 1e-9) at 20 deterministic
/// random profiles, otherwise the engine reports an internal inconsistency.
pub fn is_zero(e: &Expr) -> Result<bool> {
    let canon = e.to_rat()?;
    if !canon.is_zero() {
        return Ok(false);
    }
    let mut rng = numeric::seeded_rng(0xBE17_A41);
    for _ in 0..20 {
        let p = NumericProfile::jet(&mut rng);
        let v = canon.eval(&|var| p.var_value(var))?;
        if v.abs() >= 1e-9 {
            return Err(EngineError::InternalConsistency(format!(
                "canonical zero evaluates to {v:e} at a random profile"
            )));
        }
    }
    Ok(true)
}

/// Floating-point evaluation of the expression tree under a profile.
pub fn eval(e: &Expr, p: &NumericProfile) -> Result<f64> {
    match &*e.0 {
        Node::Const(c) => Ok(poly::rational_to_f64(c)),
        Node::Sym(s) => p
            .value(*s)
            .ok_or_else(|| EngineError::MissingSymbol(s.name())),
        Node::Add(ts) => {
            let mut acc = 0.0;
            for t in ts {
                acc += eval(t, p)?;
            }
            Ok(acc)
        }
        Node::Mul(fs) => {
            let mut acc = 1.0;
            for f in fs {
                acc *= eval(f, p)?;
            }
            Ok(acc)
        }
        Node::Pow(b, n) => {
            let base = eval(b, p)?;
            if *n < 0 {
                let den = base.powi(-n);
                if den.abs() < 1e-300 {
                    return Err(EngineError::DivisionNearZero);
                }
                Ok(1.0 / den)
            } else {
                Ok(base.powi(*n))
            }
        }
    }
}

fn require_pole_atom(atom: Symbol) -> Result<usize> {
    match atom {
        Symbol::Delta => Ok(V_DELTA),
        Symbol::CosPhi => Ok(V_COS),
        _ => Err(EngineError::InvalidArgument(
            "pole bookkeeping is defined for the delta and cos(phi) atoms".into(),
        )),
    }
}

/// Exponent of `atom` in the canonical denominator monomial.
pub fn pole_order(e: &Expr, atom: Symbol) -> Result<u8> {
    let v = require_pole_atom(atom)?;
    let canon = e.to_rat()?;
    let (d, c, _, _) = canon.pole_orders();
    Ok(match v {
        V_DELTA => d,
        _ => c,
    })
}

/// Coefficient of the deepest pole in `atom`: the part of the canonical
/// numerator free of `atom`, divided by the remaining denominator. For pole
/// order 0 this is the whole expression.
pub fn leading_term(e: &Expr, atom: Symbol) -> Result<Expr> {
    let v = require_pole_atom(atom)?;
    let canon = e.to_rat()?;
    let (d, c, k, r) = canon.pole_orders();
    let b = if v == V_DELTA { d } else { c };
    if b == 0 {
        return Ok(rat_to_expr(&canon));
    }
    let mut lead_num = Poly::zero();
    for (m, coeff) in canon.num.terms() {
        if m[v] == 0 {
            lead_num.add_term(*m, coeff.clone());
        }
    }
    let den = if v == V_DELTA {
        Den { delta: 0, cos: c, kappa: k, r }
    } else {
        Den { delta: d, cos: 0, kappa: k, r }
    };
    Ok(rat_to_expr(&RatForm { num: lead_num, den }))
}

/// Pins the radius and spine-curvature atoms to exact rationals, leaving
/// delta, the angle atoms, and the derivative towers symbolic. Charts with
/// concrete parameters use this so displays show numbers where the user gave
/// numbers.
pub fn specialize(
    e: &Expr,
    radius: Option<&BigRational>,
    kappa0: Option<&BigRational>,
) -> Result<Expr> {
    fn pow(v: &BigRational, e: u8) -> BigRational {
        let mut acc = BigRational::one();
        for _ in 0..e {
            acc *= v;
        }
        acc
    }
    let rat = e.to_rat()?;
    let vk = v_kappa(0);
    let mut num = Poly::zero();
    for (mono, coeff) in rat.num.terms() {
        let mut m = *mono;
        let mut c = coeff.clone();
        if let Some(r) = radius {
            c *= pow(r, m[V_R]);
            m[V_R] = 0;
        }
        if let Some(k) = kappa0 {
            c *= pow(k, m[vk]);
            m[vk] = 0;
        }
        num.add_term(m, c);
    }
    let mut den = rat.den;
    let mut scale = BigRational::one();
    if let Some(r) = radius {
        scale *= pow(r, den.r);
        den.r = 0;
    }
    if let Some(k) = kappa0 {
        scale *= pow(k, den.kappa);
        den.kappa = 0;
    }
    if scale.is_zero() {
        return Err(EngineError::DivisionNearZero);
    }
    let num = num.scale(&scale.recip());
    Ok(rat_to_expr(&RatForm { num, den }))
}

impl fmt::Display for CanonForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rat.is_zero() {
            return write!(f, "0");
        }
        let num = format_poly(&self.rat.num);
        let (d, c, k, r) = self.rat.pole_orders();
        if d == 0 && c == 0 && k == 0 && r == 0 {
            return write!(f, "{num}");
        }
        let mut den_parts: Vec<String> = Vec::new();
        for (name, e) in [("delta", d), ("cos(phi)", c), ("kappa", k), ("r", r)] {
            match e {
                0 => {}
                1 => den_parts.push(name.to_string()),
                _ => den_parts.push(format!("{name}^{e}")),
            }
        }
        let needs_paren = self.rat.num.num_terms() > 1;
        if needs_paren {
            write!(f, "({num}) / ({})", den_parts.join("*"))
        } else {
            write!(f, "{num} / ({})", den_parts.join("*"))
        }
    }
}

pub(crate) fn format_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut parts: Vec<String> = Vec::new();
    for (m, c) in p.terms() {
        let mut factors: Vec<String> = Vec::new();
        let one = BigRational::one();
        let minus_one = -BigRational::one();
        let is_bare = (0..NVARS).all(|v| m[v] == 0);
        if is_bare || (*c != one && *c != minus_one) {
            factors.push(format_rational(c));
        } else if *c == minus_one {
            factors.push("-".into());
        }
        for v in 0..NVARS {
            if m[v] > 0 {
                let name = poly::var_name(v);
                factors.push(if m[v] == 1 {
                    name
                } else {
                    format!("{name}^{}", m[v])
                });
            }
        }
        let joined = factors
            .iter()
            .enumerate()
            .map(|(i, s)| {
                if i == 0 || factors[0] == "-" && i == 1 {
                    s.clone()
                } else {
                    format!("*{s}")
                }
            })
            .collect::<String>();
        parts.push(joined);
    }
    parts.join(" + ")
}

fn format_rational(c: &BigRational) -> String {
    if c.denom().is_one() {
        format!("{}", c.numer())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_rat() {
            Ok(rat) => write!(f, "{}", CanonForm::from_rat(rat)),
            Err(_) => write!(f, "<non-canonical expression>"),
        }
    }
}

/// True when the difference of two expressions is identically zero.
pub fn equal(a: &Expr, b: &Expr) -> Result<bool> {
    is_zero(&(a.clone() - b.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pythagorean_identity_is_zero() {
        let e = Expr::sin_phi() * Expr::sin_phi() + Expr::cos_phi() * Expr::cos_phi()
            - Expr::one();
        assert!(is_zero(&e).unwrap());
    }

    #[test]
    fn delta_rewrite_closes() {
        let e = Expr::delta() - Expr::one()
            + Expr::radius() * Expr::kappa(0) * Expr::cos_phi();
        assert!(is_zero(&e).unwrap());
        assert!(!is_zero(&Expr::delta()).unwrap());
    }

    #[test]
    fn canonical_form_is_idempotent() {
        let e = Expr::beta().powi(2)
            * (Expr::delta() * Expr::kappa(0) * Expr::cos_phi()).powi(-3);
        let c1 = canonicalize(&e).unwrap();
        let c2 = canonicalize(&c1.to_expr()).unwrap();
        assert_eq!(c1, c2);
    }

    #[test]
    fn pole_orders_match_denominator() {
        let e = Expr::beta() * (Expr::delta().powi(2) * Expr::cos_phi()).powi(-1);
        assert_eq!(pole_order(&e, Symbol::Delta).unwrap(), 2);
        // beta = kappa'*cos + kappa*tau*sin has a cos factor only in one term,
        // so the cos pole survives reduction.
        assert_eq!(pole_order(&e, Symbol::CosPhi).unwrap(), 1);
        let e2 = Expr::cos_phi() * Expr::cos_phi() * Expr::cos_phi().powi(-2);
        assert_eq!(pole_order(&e2, Symbol::CosPhi).unwrap(), 0);
    }

    #[test]
    fn leading_term_splits_costail() {
        // sin^2/(2 r delta cos) + cos/(r delta): the cos-pole-1 coefficient is
        // 1/(2 r delta) once sin^2 is eliminated (equivalently sin^2/(2 r
        // delta) modulo a multiple of cos^2).
        let e = Expr::sin_phi().powi(2)
            * (Expr::from_int(2) * Expr::radius() * Expr::delta() * Expr::cos_phi()).powi(-1)
            + Expr::cos_phi() * (Expr::radius() * Expr::delta()).powi(-1);
        let lead = leading_term(&e, Symbol::CosPhi).unwrap();
        let display = Expr::sin_phi().powi(2)
            * (Expr::from_int(2) * Expr::radius() * Expr::delta()).powi(-1);
        let diff = canonicalize(&(lead.clone() - display)).unwrap();
        // difference is a multiple of cos^2: no cos pole and cos divides the
        // numerator
        let (_, c, _, _) = diff.denominator_exponents();
        assert_eq!(c, 0);
        assert!(diff.to_expr().to_rat().unwrap().num.min_exp(V_COS) >= 2);
    }

    #[test]
    fn eval_matches_hand_value() {
        // delta at r=1/2, kappa=1, phi=pi/3 is 1 - 1/2*1*1/2 = 3/4
        let mut p = NumericProfile::constant_spine(1.0, 0.5, std::f64::consts::FRAC_PI_3);
        p.u = 0.0;
        let v = eval(&Expr::delta(), &p).unwrap();
        assert!((v - 0.75).abs() < 1e-15);
    }
}
