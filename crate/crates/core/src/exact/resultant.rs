//! Resultants and discriminants by the subresultant polynomial remainder
//! sequence (Collins / Brown), exact over ℤ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};

use super::poly::IntPoly;
use crate::error::{Error, Result};

fn pow(b: &BigInt, e: usize) -> BigInt {
    Pow::pow(b, e as u32)
}

/// `Res(p, q)`.
///
/// A zero argument against a nonzero one gives 0; two nonzero constants
/// give `p^deg q · q^deg p = 1`.
pub fn resultant(p: &IntPoly, q: &IntPoly) -> Result<BigInt> {
    if p.is_zero() && q.is_zero() {
        return Err(Error::BothZero);
    }
    if p.is_zero() || q.is_zero() {
        return Ok(BigInt::zero());
    }
    let (mut a, mut b) = (p.clone(), q.clone());
    let mut sign = BigInt::one();
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
        if a.degree().unwrap() % 2 == 1 && b.degree().unwrap() % 2 == 1 {
            sign = -sign;
        }
    }
    let db = b.degree().unwrap();
    if db == 0 {
        return Ok(sign * pow(b.lc().unwrap(), a.degree().unwrap()));
    }
    let ca = a.content();
    let cb = b.content();
    let da0 = a.degree().unwrap();
    let t = pow(&ca, db) * pow(&cb, da0);
    a = IntPoly::new(a.coeffs().iter().map(|c| c / &ca).collect());
    b = IntPoly::new(b.coeffs().iter().map(|c| c / &cb).collect());
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let da = a.degree().unwrap();
        let db = b.degree().unwrap();
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign = -sign;
        }
        let r = a.pseudo_rem(&b);
        a = b;
        let divisor = &g * pow(&h, delta);
        b = IntPoly::new(r.coeffs().iter().map(|c| c / &divisor).collect());
        g = a.lc().unwrap().clone();
        // h <- g^delta / h^(delta - 1)
        h = if delta == 0 {
            h.clone()
        } else {
            pow(&g, delta) / pow(&h, delta - 1)
        };
        match b.degree() {
            None => return Ok(BigInt::zero()),
            Some(0) => {
                let da = a.degree().unwrap();
                let lb = b.lc().unwrap();
                let hh = if da == 0 {
                    h.clone()
                } else {
                    pow(lb, da) / pow(&h, da - 1)
                };
                return Ok(sign * t * hh);
            }
            Some(_) => {}
        }
    }
}

/// `(−1)^{d(d−1)/2} · Res(f, f′) / lc(f)`.
pub fn discriminant(f: &IntPoly) -> Result<BigInt> {
    let d = f.degree().unwrap_or(0);
    if d < 2 {
        return Err(Error::DegreeTooLow(d));
    }
    let r = resultant(f, &f.derivative())?;
    let (q, rem) = r.div_rem(f.lc().unwrap());
    debug_assert!(rem.is_zero());
    Ok(if (d * (d - 1) / 2) % 2 == 1 { -q } else { q })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::matrix::IntMatrix;

    fn p(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64s(cs)
    }

    /// Sylvester-matrix determinant, an independent route to `Res(p, q)`.
    fn sylvester(p: &IntPoly, q: &IntPoly) -> BigInt {
        let m = p.degree().unwrap();
        let n = q.degree().unwrap();
        let size = m + n;
        if size == 0 {
            return BigInt::one();
        }
        let mut rows = Vec::new();
        for i in 0..n {
            let mut row = vec![BigInt::zero(); size];
            for (k, c) in p.coeffs().iter().rev().enumerate() {
                row[i + k] = c.clone();
            }
            rows.push(row);
        }
        for i in 0..m {
            let mut row = vec![BigInt::zero(); size];
            for (k, c) in q.coeffs().iter().rev().enumerate() {
                row[i + k] = c.clone();
            }
            rows.push(row);
        }
        IntMatrix::from_rows(rows).det()
    }

    #[test]
    fn resultant_examples() {
        assert_eq!(resultant(&p(&[1, 0, 1]), &p(&[-1, 1])).unwrap(), 2.into());
        assert_eq!(
            resultant(&p(&[-1, 0, 1]), &p(&[-4, 0, 1])).unwrap(),
            9.into()
        );
        assert_eq!(resultant(&p(&[-1, -1, 0, 1]), &p(&[2])).unwrap(), 8.into());
        assert_eq!(resultant(&p(&[]), &p(&[])), Err(Error::BothZero));
        assert_eq!(resultant(&p(&[]), &p(&[1, 1])).unwrap(), 0.into());
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(discriminant(&p(&[-1, -1, 1])).unwrap(), 5.into());
        assert_eq!(discriminant(&p(&[1, 0, 1])).unwrap(), (-4).into());
        assert_eq!(discriminant(&p(&[-1, -1, 0, 1])).unwrap(), (-23).into());
        assert_eq!(discriminant(&p(&[-1, -1, 0, 0, 1])).unwrap(), (-283).into());
        assert_eq!(discriminant(&p(&[1, 1])), Err(Error::DegreeTooLow(1)));
        // non-monic: 2x^2 + 3x + 1 -> 9 - 8
        assert_eq!(discriminant(&p(&[1, 3, 2])).unwrap(), 1.into());
    }

    #[test]
    fn agrees_with_sylvester_on_fixed_cases() {
        let cases = [
            (p(&[3, 0, -2, 5, 1]), p(&[1, 4, 0, 2])),
            (p(&[2, 4, 2]), p(&[1, 1])),
            (p(&[6, 0, 0, 0, 0, 3]), p(&[0, 0, 9])),
            (p(&[-7, 2, 0, 0, 1, 0, 2]), p(&[5, -3, 0, 4, 6])),
        ];
        for (a, b) in &cases {
            assert_eq!(resultant(a, b).unwrap(), sylvester(a, b), "{a} / {b}");
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn poly_strategy() -> impl Strategy<Value = IntPoly> {
            prop::collection::vec(-6i64..=6, 2..=7)
                .prop_map(|cs| IntPoly::from_i64s(&cs))
                .prop_filter("nonconstant", |p| p.degree().unwrap_or(0) >= 1)
        }

        proptest! {
            #[test]
            fn matches_sylvester(a in poly_strategy(), b in poly_strategy()) {
                prop_assert_eq!(resultant(&a, &b).unwrap(), sylvester(&a, &b));
            }

            #[test]
            fn antisymmetry(a in poly_strategy(), b in poly_strategy()) {
                let da = a.degree().unwrap();
                let db = b.degree().unwrap();
                let r1 = resultant(&a, &b).unwrap();
                let r2 = resultant(&b, &a).unwrap();
                if (da * db) % 2 == 1 {
                    prop_assert_eq!(r1, -r2);
                } else {
                    prop_assert_eq!(r1, r2);
                }
            }

            #[test]
            fn discriminant_zero_iff_repeated_root(a in poly_strategy()) {
                prop_assume!(a.degree().unwrap() >= 2);
                let disc = discriminant(&a).unwrap();
                let g = a.to_rat().gcd(&a.derivative().to_rat());
                prop_assert_eq!(disc.is_zero(), g.degree().unwrap_or(0) > 0);
            }
        }
    }
}
