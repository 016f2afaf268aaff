//! Floating-point sample points for cross-checking symbolic results.
//!
//! A profile assigns values to the chart variables and to the full derivative
//! towers of the spine curvature and torsion. The regularity factor delta is
//! never assigned independently: it is always computed from r, kappa and
//! cos(phi), so a profile can never violate the defining rewrite.

use super::poly::{v_kappa, v_tau, MAX_DERIV, V_COS, V_DELTA, V_R, V_SIN};
use super::Symbol;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone)]
pub struct NumericProfile {
    pub u: f64,
    pub phi: f64,
    pub r: f64,
    /// kappa and its u-derivatives; index is the derivative order.
    pub kappa: Vec<f64>,
    /// tau and its u-derivatives; index is the derivative order.
    pub tau: Vec<f64>,
}

impl NumericProfile {
    /// Analytic spine with kappa(u) = 2 + sin(u), tau(u) = cos(u); both
    /// derivative towers are exact.
    pub fn smooth(u: f64, phi: f64, r: f64) -> Self {
        let mut kappa = Vec::with_capacity(MAX_DERIV);
        let mut tau = Vec::with_capacity(MAX_DERIV);
        for i in 0..MAX_DERIV {
            let shifted = u + (i as f64) * std::f64::consts::FRAC_PI_2;
            let base = shifted.sin();
            kappa.push(if i == 0 { 2.0 + base } else { base });
            tau.push(shifted.cos());
        }
        NumericProfile { u, phi, r, kappa, tau }
    }

    /// Constant curvature, zero torsion: the circular-spine and sphere cases.
    pub fn constant_spine(kappa0: f64, r: f64, phi: f64) -> Self {
        let mut kappa = vec![0.0; MAX_DERIV];
        kappa[0] = kappa0;
        NumericProfile {
            u: 0.0,
            phi,
            r,
            kappa,
            tau: vec![0.0; MAX_DERIV],
        }
    }

    /// Random jet: tower entries drawn from [-2,-0.1] u [0.1,2], radius from
    /// [0.05,0.3], angle kept away from the cos(phi) = 0 band. With these
    /// ranges delta >= 1 - 0.3*2 = 0.4, so samples stay admissible.
    pub fn jet<R: Rng>(rng: &mut R) -> Self {
        let mut kappa = Vec::with_capacity(MAX_DERIV);
        let mut tau = Vec::with_capacity(MAX_DERIV);
        for _ in 0..MAX_DERIV {
            kappa.push(signed_magnitude(rng));
            tau.push(signed_magnitude(rng));
        }
        let r = rng.gen_range(0.05..=0.3);
        let phi = loop {
            let cand = rng.gen_range(0.0..std::f64::consts::PI);
            if cand.cos().abs() >= 0.05 {
                break cand;
            }
        };
        let u = rng.gen_range(0.0..std::f64::consts::TAU);
        NumericProfile { u, phi, r, kappa, tau }
    }

    pub fn delta(&self) -> f64 {
        1.0 - self.r * self.kappa[0] * self.phi.cos()
    }

    pub fn value(&self, s: Symbol) -> Option<f64> {
        match s {
            Symbol::CosPhi => Some(self.phi.cos()),
            Symbol::SinPhi => Some(self.phi.sin()),
            Symbol::Delta => Some(self.delta()),
            Symbol::Radius => Some(self.r),
            Symbol::Kappa(i) => self.kappa.get(i).copied(),
            Symbol::Tau(i) => self.tau.get(i).copied(),
        }
    }

    pub(crate) fn var_value(&self, v: usize) -> Option<f64> {
        match v {
            V_DELTA => Some(self.delta()),
            V_COS => Some(self.phi.cos()),
            V_SIN => Some(self.phi.sin()),
            V_R => Some(self.r),
            _ => {
                if v < 4 + MAX_DERIV {
                    debug_assert_eq!(v, v_kappa(v - 4));
                    self.kappa.get(v - 4).copied()
                } else {
                    debug_assert_eq!(v, v_tau(v - 4 - MAX_DERIV));
                    self.tau.get(v - 4 - MAX_DERIV).copied()
                }
            }
        }
    }
}

fn signed_magnitude<R: Rng>(rng: &mut R) -> f64 {
    let m = rng.gen_range(0.1..=2.0);
    if rng.gen_bool(0.5) {
        m
    } else {
        -m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_tower_is_consistent() {
        // finite difference of kappa^(1) should match kappa^(2)
        let h = 1e-6;
        let a = NumericProfile::smooth(0.7 - h, 1.0, 0.2);
        let b = NumericProfile::smooth(0.7 + h, 1.0, 0.2);
        let mid = NumericProfile::smooth(0.7, 1.0, 0.2);
        let fd = (b.kappa[1] - a.kappa[1]) / (2.0 * h);
        assert!((fd - mid.kappa[2]).abs() < 1e-8);
    }

    #[test]
    fn jet_profiles_are_admissible_and_deterministic() {
        let mut rng = seeded_rng(7);
        let p = NumericProfile::jet(&mut rng);
        assert!(p.delta() >= 0.3);
        assert!(p.phi.cos().abs() >= 0.05);
        assert!(p.r >= 0.05 && p.r <= 0.3);
        let mut rng2 = seeded_rng(7);
        let q = NumericProfile::jet(&mut rng2);
        assert_eq!(p.u, q.u);
        assert_eq!(p.kappa, q.kappa);
    }
}
