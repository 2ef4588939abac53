//! Schur–Cohn test: exact location of roots relative to the unit circle.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::poly::{IntPoly, RatPoly};

/// True iff every complex root of `p` lies strictly inside the unit circle.
pub fn roots_inside_unit_circle(p: &RatPoly) -> bool {
    let mut p = p.clone();
    loop {
        let Some(n) = p.degree() else { return false };
        if n == 0 {
            return true;
        }
        let a0 = p.coeff(0);
        let an = p.lc().unwrap().clone();
        if a0.abs() >= an.abs() {
            return false;
        }
        // (a_n p - a_0 p*) / X has the same number of roots inside the circle
        // as p, minus the root at the origin.
        let q = &p.scale(&an) - &p.reverse_full(n).scale(&a0);
        debug_assert!(q.coeff(0).is_zero());
        p = RatPoly::new(q.coeffs()[1..].to_vec());
    }
}

/// True iff every complex root of `f` has modulus strictly greater than one.
pub fn roots_outside_unit_circle(f: &IntPoly) -> bool {
    if f.coeff(0).is_zero() {
        return false;
    }
    roots_inside_unit_circle(&f.reverse().to_rat())
}

impl RatPoly {
    /// `X^n · p(1/X)` for a declared degree `n >= deg p`.
    fn reverse_full(&self, n: usize) -> RatPoly {
        RatPoly::new(
            (0..=n)
                .map(|i| {
                    self.coeffs()
                        .get(n - i)
                        .cloned()
                        .unwrap_or_else(BigRational::zero)
                })
                .collect(),
        )
    }
}
