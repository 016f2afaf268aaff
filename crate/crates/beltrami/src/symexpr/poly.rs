//! Exact multivariate polynomials over the chart variables.
//!
//! Variables are indexed into a fixed exponent vector:
//! delta, cos(phi), sin(phi), r, then the derivative towers kappa^(0..),
//! tau^(0..). Two rewrite rules keep polynomials in a unique normal form:
//!
//! * `sin^2(phi) -> 1 - cos^2(phi)`, so sin-degree never exceeds 1;
//! * `r * kappa * cos(phi) -> 1 - delta`, applied to fixpoint, so that the
//!   regularity factor delta absorbs every occurrence of that product.
//!
//! The second rule makes equality-mod-delta-definition a structural equality
//! of normal forms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// Highest derivative order carried by the kappa/tau towers.
pub const MAX_DERIV: usize = 16;
/// Total number of exponent slots in a monomial.
pub const NVARS: usize = 4 + 2 * MAX_DERIV;

pub const V_DELTA: usize = 0;
pub const V_COS: usize = 1;
pub const V_SIN: usize = 2;
pub const V_R: usize = 3;

#[inline]
pub const fn v_kappa(order: usize) -> usize {
    4 + order
}

#[inline]
pub const fn v_tau(order: usize) -> usize {
    4 + MAX_DERIV + order
}

/// Exponent vector of a single monomial.
pub type Mono = [u8; NVARS];

pub const MONO_ONE: Mono = [0u8; NVARS];

#[inline]
pub fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    let mut out = *a;
    for i in 0..NVARS {
        out[i] = out[i].checked_add(b[i]).expect("monomial exponent overflow");
    }
    out
}

#[inline]
pub fn mono_of(var: usize, exp: u8) -> Mono {
    let mut m = MONO_ONE;
    m[var] = exp;
    m
}

/// Normalized sparse polynomial with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Mono, BigRational>,
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Poly::default();
        if !c.is_zero() {
            p.terms.insert(MONO_ONE, c);
        }
        p
    }

    pub fn from_int(n: i64) -> Self {
        Poly::constant(BigRational::from_integer(BigInt::from(n)))
    }

    /// Single variable raised to a power; already in normal form for exp <= 1
    /// of sin and for monomials that do not contain the full r*kappa*cos
    /// product, which `var^exp` never does on its own except sin powers.
    pub fn var(v: usize, exp: u8) -> Self {
        let mut p = Poly::default();
        p.terms.insert(mono_of(v, exp), BigRational::one());
        p.normalize()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &BigRational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: Mono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    /// Adds `other` into self, consuming it.
    pub fn absorb(&mut self, other: Poly) {
        for (m, c) in other.terms {
            self.add_term(m, c);
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            out.terms.insert(*m, -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut out = Poly::default();
        for (m, k) in &self.terms {
            out.terms.insert(*m, k * c);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(mono_mul(ma, mb), ca * cb);
            }
        }
        out.normalize()
    }

    pub fn mul_mono(&self, m: &Mono) -> Poly {
        let mut out = Poly::default();
        for (ma, ca) in &self.terms {
            out.terms.insert(mono_mul(ma, m), ca.clone());
        }
        out.normalize()
    }

    /// Applies both rewrite rules to fixpoint.
    pub fn normalize(self) -> Poly {
        self.sin_reduce().product_reduce()
    }

    /// sin^2 -> 1 - cos^2 until sin-degree <= 1.
    fn sin_reduce(self) -> Poly {
        if self
            .terms
            .keys()
            .all(|m| m[V_SIN] < 2)
        {
            return self;
        }
        let mut out = Poly::default();
        for (m, c) in self.terms {
            let s = m[V_SIN] as usize;
            if s < 2 {
                out.add_term(m, c);
                continue;
            }
            let half = s / 2;
            let rem = (s % 2) as u8;
            for i in 0..=half {
                let mut mm = m;
                mm[V_SIN] = rem;
                mm[V_COS] = mm[V_COS]
                    .checked_add((2 * i) as u8)
                    .expect("monomial exponent overflow");
                let mut coeff = BigRational::from_integer(binomial(half, i)) * &c;
                if i % 2 == 1 {
                    coeff = -coeff;
                }
                out.add_term(mm, coeff);
            }
        }
        out
    }

    /// r*kappa*cos -> 1 - delta until no monomial contains the full product.
    fn product_reduce(self) -> Poly {
        let needs = |m: &Mono| m[V_R] >= 1 && m[v_kappa(0)] >= 1 && m[V_COS] >= 1;
        if !self.terms.keys().any(needs) {
            return self;
        }
        let mut cur = self;
        loop {
            let mut out = Poly::default();
            let mut changed = false;
            for (m, c) in cur.terms {
                if needs(&m) {
                    changed = true;
                    let mut base = m;
                    base[V_R] -= 1;
                    base[v_kappa(0)] -= 1;
                    base[V_COS] -= 1;
                    out.add_term(base, c.clone());
                    let mut with_delta = base;
                    with_delta[V_DELTA] = with_delta[V_DELTA]
                        .checked_add(1)
                        .expect("monomial exponent overflow");
                    out.add_term(with_delta, -c);
                } else {
                    out.add_term(m, c);
                }
            }
            if !changed {
                return out;
            }
            cur = out;
        }
    }

    /// Derivative in phi: cos' = -sin, sin' = cos, delta' = r*kappa*sin.
    pub fn diff_phi(&self) -> Poly {
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            if m[V_COS] > 0 {
                let mut mm = *m;
                mm[V_COS] -= 1;
                mm[V_SIN] += 1;
                out.add_term(mm, -(c * BigRational::from_integer(BigInt::from(m[V_COS]))));
            }
            if m[V_SIN] > 0 {
                let mut mm = *m;
                mm[V_SIN] -= 1;
                mm[V_COS] += 1;
                out.add_term(mm, c * BigRational::from_integer(BigInt::from(m[V_SIN])));
            }
            if m[V_DELTA] > 0 {
                let mut mm = *m;
                mm[V_DELTA] -= 1;
                mm[V_R] += 1;
                mm[v_kappa(0)] += 1;
                mm[V_SIN] += 1;
                out.add_term(mm, c * BigRational::from_integer(BigInt::from(m[V_DELTA])));
            }
        }
        out.normalize()
    }

    /// Derivative in u: each tower symbol steps one order up and
    /// delta' = -r*kappa'*cos. `constant_spine` treats every scalar as
    /// u-independent (anchor ring and sphere charts).
    pub fn diff_u(&self, constant_spine: bool) -> Poly {
        if constant_spine {
            return Poly::zero();
        }
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            for i in 0..MAX_DERIV - 1 {
                let vk = v_kappa(i);
                if m[vk] > 0 {
                    let mut mm = *m;
                    mm[vk] -= 1;
                    mm[v_kappa(i + 1)] += 1;
                    out.add_term(mm, c * BigRational::from_integer(BigInt::from(m[vk])));
                }
                let vt = v_tau(i);
                if m[vt] > 0 {
                    let mut mm = *m;
                    mm[vt] -= 1;
                    mm[v_tau(i + 1)] += 1;
                    out.add_term(mm, c * BigRational::from_integer(BigInt::from(m[vt])));
                }
            }
            assert!(
                m[v_kappa(MAX_DERIV - 1)] == 0 && m[v_tau(MAX_DERIV - 1)] == 0,
                "derivative tower exhausted"
            );
            if m[V_DELTA] > 0 {
                let mut mm = *m;
                mm[V_DELTA] -= 1;
                mm[V_R] += 1;
                mm[v_kappa(1)] += 1;
                mm[V_COS] += 1;
                out.add_term(mm, -(c * BigRational::from_integer(BigInt::from(m[V_DELTA]))));
            }
        }
        out.normalize()
    }

    /// Minimum exponent of `var` across all monomials (0 for the zero poly).
    pub fn min_exp(&self, var: usize) -> u8 {
        self.terms.keys().map(|m| m[var]).min().unwrap_or(0)
    }

    pub fn max_exp(&self, var: usize) -> u8 {
        self.terms.keys().map(|m| m[var]).max().unwrap_or(0)
    }

    /// Divides every monomial by var^exp; caller must ensure divisibility.
    pub fn shift_down(&self, var: usize, exp: u8) -> Poly {
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            debug_assert!(m[var] >= exp);
            let mut mm = *m;
            mm[var] -= exp;
            out.terms.insert(mm, c.clone());
        }
        out
    }

    /// Exact division by (1 - delta), if possible.
    ///
    /// Works layer by layer in the delta-degree: a running partial sum of the
    /// delta-stripped layers gives the quotient coefficients, and the division
    /// is exact precisely when the final running sum is empty.
    pub fn div_one_minus_delta(&self) -> Option<Poly> {
        if self.terms.is_empty() {
            return Some(Poly::zero());
        }
        let top = self.max_exp(V_DELTA);
        let mut layers: BTreeMap<u8, Vec<(Mono, BigRational)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut mm = *m;
            let d = mm[V_DELTA];
            mm[V_DELTA] = 0;
            layers.entry(d).or_default().push((mm, c.clone()));
        }
        let mut running: BTreeMap<Mono, BigRational> = BTreeMap::new();
        let mut quotient = Poly::default();
        for j in 0..=top {
            if let Some(layer) = layers.get(&j) {
                for (mm, c) in layer {
                    let e = running.entry(*mm).or_insert_with(BigRational::zero);
                    *e += c;
                    if e.is_zero() {
                        running.remove(mm);
                    }
                }
            }
            if j < top {
                for (mm, c) in &running {
                    let mut q = *mm;
                    q[V_DELTA] = j;
                    quotient.terms.insert(q, c.clone());
                }
            }
        }
        if running.is_empty() {
            Some(quotient)
        } else {
            None
        }
    }

    /// True when every monomial avoids all variables outside `allowed`.
    pub fn only_uses(&self, allowed: &[usize]) -> bool {
        self.terms
            .keys()
            .all(|m| (0..NVARS).all(|v| m[v] == 0 || allowed.contains(&v)))
    }

    /// The single (monomial, coefficient) pair, if this is a monomial.
    pub fn as_monomial(&self) -> Option<(Mono, BigRational)> {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            Some((*m, c.clone()))
        } else {
            None
        }
    }

    /// Componentwise gcd of exponent vectors: the largest monomial dividing
    /// every term.
    pub fn common_mono(&self) -> Mono {
        let mut g = match self.terms.keys().next() {
            Some(m) => *m,
            None => return MONO_ONE,
        };
        for m in self.terms.keys() {
            for i in 0..NVARS {
                g[i] = g[i].min(m[i]);
            }
        }
        g
    }

    /// Groups terms by delta-degree, returning (degree, delta-stripped layer)
    /// pairs in increasing degree order.
    pub fn delta_layers(&self) -> Vec<(u8, Poly)> {
        let mut by: BTreeMap<u8, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut mm = *m;
            let d = mm[V_DELTA];
            mm[V_DELTA] = 0;
            by.entry(d).or_default().add_term(mm, c.clone());
        }
        by.into_iter().collect()
    }

    /// Substitutes delta = 0 (keeps only delta-free monomials).
    pub fn delta_free_part(&self) -> Poly {
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            if m[V_DELTA] == 0 {
                out.terms.insert(*m, c.clone());
            }
        }
        out
    }

    pub fn contains_var(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m[var] > 0)
    }

    /// Floating-point evaluation with per-variable values.
    pub fn eval(&self, value_of: &dyn Fn(usize) -> Option<f64>) -> crate::error::Result<f64> {
        let mut acc = 0.0f64;
        for (m, c) in &self.terms {
            let mut term = rational_to_f64(c);
            for v in 0..NVARS {
                if m[v] > 0 {
                    let base = value_of(v).ok_or_else(|| {
                        crate::error::EngineError::MissingSymbol(var_name(v))
                    })?;
                    term *= base.powi(m[v] as i32);
                }
            }
            acc += term;
        }
        Ok(acc)
    }
}

pub fn rational_to_f64(c: &BigRational) -> f64 {
    let num = c.numer();
    let den = c.denom();
    let fnum = bigint_to_f64(num);
    let fden = bigint_to_f64(den);
    fnum / fden
}

fn bigint_to_f64(n: &BigInt) -> f64 {
    // Exact for |n| < 2^53; falls back to string conversion for larger values.
    if let Some(v) = n.to_string().parse::<f64>().ok() {
        v
    } else if n.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    }
}

pub fn var_name(v: usize) -> String {
    match v {
        V_DELTA => "delta".into(),
        V_COS => "cos(phi)".into(),
        V_SIN => "sin(phi)".into(),
        V_R => "r".into(),
        _ => {
            if v < 4 + MAX_DERIV {
                tower_name("kappa", v - 4)
            } else {
                tower_name("tau", v - 4 - MAX_DERIV)
            }
        }
    }
}

fn tower_name(base: &str, order: usize) -> String {
    match order {
        0 => base.to_string(),
        1 => format!("{base}'"),
        2 => format!("{base}''"),
        k => format!("{base}^({k})"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn sin_squared_reduces() {
        let s2 = Poly::var(V_SIN, 2);
        let expected = Poly::one().sub(&Poly::var(V_COS, 2));
        assert_eq!(s2, expected);
    }

    #[test]
    fn product_rewrite_hits_fixpoint() {
        // r^2 kappa^2 cos^2 -> (1 - delta)^2
        let mut m = MONO_ONE;
        m[V_R] = 2;
        m[v_kappa(0)] = 2;
        m[V_COS] = 2;
        let mut p = Poly::default();
        p.add_term(m, BigRational::one());
        let p = p.normalize();
        let one_minus = Poly::one().sub(&Poly::var(V_DELTA, 1));
        assert_eq!(p, one_minus.mul(&one_minus));
    }

    #[test]
    fn delta_division_is_exact() {
        let one_minus = Poly::one().sub(&Poly::var(V_DELTA, 1));
        let q = Poly::var(V_COS, 3).add(&Poly::var(v_tau(1), 2)).scale(&rat(7, 3));
        let prod = one_minus.mul(&q);
        assert_eq!(prod.div_one_minus_delta().unwrap(), q);
        assert!(Poly::var(V_DELTA, 1).div_one_minus_delta().is_none());
    }

    #[test]
    fn diff_phi_of_delta() {
        let d = Poly::var(V_DELTA, 1).diff_phi();
        let mut m = MONO_ONE;
        m[V_R] = 1;
        m[v_kappa(0)] = 1;
        m[V_SIN] = 1;
        let mut expected = Poly::default();
        expected.add_term(m, BigRational::one());
        assert_eq!(d, expected);
    }

    #[test]
    fn diff_u_steps_towers() {
        let k = Poly::var(v_kappa(0), 1).diff_u(false);
        assert_eq!(k, Poly::var(v_kappa(1), 1));
        assert!(Poly::var(v_kappa(0), 1).diff_u(true).is_zero());
    }
}
