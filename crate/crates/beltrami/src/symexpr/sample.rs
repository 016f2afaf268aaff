//! Seeded random expression trees for self-tests and cross-validation.

use super::Expr;
use rand::Rng;

/// Random polynomial-flavoured expression of bounded depth. Atoms cover the
/// chart variables and low-order tower entries; combiners are sum, product,
/// difference, rational scaling and small powers. No negative powers, so the
/// result always canonicalizes.
pub fn random_expr<R: Rng>(rng: &mut R, depth: usize) -> Expr {
    if depth == 0 {
        return random_atom(rng);
    }
    match rng.gen_range(0..6u8) {
        0 => random_expr(rng, depth - 1) + random_expr(rng, depth - 1),
        1 => random_expr(rng, depth - 1) * random_expr(rng, depth - 1),
        2 => random_expr(rng, depth - 1) - random_expr(rng, depth - 1),
        3 => {
            let num = rng.gen_range(-4i64..=4);
            let den = rng.gen_range(1i64..=4);
            Expr::rational(num, den) * random_expr(rng, depth - 1)
        }
        4 => random_expr(rng, depth - 1).powi(2),
        _ => random_atom(rng),
    }
}

/// A `random_expr` divided by a random admissible pole monomial.
pub fn random_pole_expr<R: Rng>(rng: &mut R, depth: usize) -> Expr {
    let base = random_expr(rng, depth);
    let a = rng.gen_range(0..=2i32);
    let b = rng.gen_range(0..=2i32);
    let mut e = base;
    if a > 0 {
        e = e * Expr::delta().powi(-a);
    }
    if b > 0 {
        e = e * Expr::cos_phi().powi(-b);
    }
    e
}

fn random_atom<R: Rng>(rng: &mut R) -> Expr {
    match rng.gen_range(0..9u8) {
        0 => Expr::from_int(rng.gen_range(-3i64..=3)),
        1 => Expr::cos_phi(),
        2 => Expr::sin_phi(),
        3 => Expr::delta(),
        4 => Expr::radius(),
        5 => Expr::kappa(0),
        6 => Expr::kappa(rng.gen_range(1..=2)),
        7 => Expr::tau(0),
        _ => Expr::tau(rng.gen_range(1..=2)),
    }
}

#[cfg(test)]
mod tests {
    use super::super::numeric::seeded_rng;
    use super::*;

    #[test]
    fn generated_trees_canonicalize() {
        let mut rng = seeded_rng(99);
        for _ in 0..50 {
            let e = random_pole_expr(&mut rng, 4);
            e.to_rat().expect("random tree must canonicalize");
        }
    }
}
