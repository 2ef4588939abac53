//! Irreducibility over ℚ for desk-scale degrees.
//!
//! Three stages: a rational-root screen, a distinct-degree screen over
//! small primes (the possible factor degrees must be subset sums of every
//! modular factorization pattern), and finally Kronecker's exhaustive
//! factor search for the degrees that survive.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{IntPoly, RatPoly};
use crate::error::{Error, Result};

pub const DEFAULT_DEGREE_CAP: usize = 8;

const SCREEN_PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

pub fn is_irreducible_q(f: &IntPoly) -> Result<bool> {
    is_irreducible_q_capped(f, DEFAULT_DEGREE_CAP)
}

pub fn is_irreducible_q_capped(f: &IntPoly, cap: usize) -> Result<bool> {
    let d = f.degree().unwrap_or(0);
    if d < 1 {
        return Err(Error::DegreeTooLow(d));
    }
    if d > cap {
        return Err(Error::DegreeTooHigh { degree: d, cap });
    }
    let f = f.primitive_part();
    if d == 1 {
        return Ok(true);
    }
    if f.coeff(0).is_zero() {
        return Ok(false);
    }
    if has_rational_root(&f) {
        return Ok(false);
    }
    if d <= 3 {
        return Ok(true);
    }
    let mut possible: BTreeSet<usize> = (1..d).collect();
    for &p in &SCREEN_PRIMES {
        let Some(pattern) = modular_pattern(&f, p) else {
            continue;
        };
        let sums = subset_sums(&pattern);
        possible.retain(|k| sums.contains(k));
        if possible.is_empty() {
            return Ok(true);
        }
    }
    for k in 2..=d / 2 {
        if !possible.contains(&k) && !possible.contains(&(d - k)) {
            continue;
        }
        if kronecker_factor(&f, k).is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn small_divisors(n: &BigInt) -> Option<Vec<u64>> {
    let n = n.abs().to_u64()?;
    if n == 0 {
        return None;
    }
    let mut out = Vec::new();
    let mut i = 1u64;
    while i.saturating_mul(i) <= n {
        if n % i == 0 {
            out.push(i);
            if i != n / i {
                out.push(n / i);
            }
        }
        i += 1;
        if i > 5_000_000 {
            return None;
        }
    }
    out.sort_unstable();
    Some(out)
}

fn has_rational_root(f: &IntPoly) -> bool {
    let a0 = f.coeff(0);
    let an = f.lc().unwrap().clone();
    let (Some(ps), Some(qs)) = (small_divisors(&a0), small_divisors(&an)) else {
        // Fall back on the linear case of the Kronecker search.
        return kronecker_factor(f, 1).is_some();
    };
    let fr = f.to_rat();
    for &p in &ps {
        for &q in &qs {
            if BigInt::from(p).gcd(&BigInt::from(q)) != BigInt::one() {
                continue;
            }
            for s in [1i64, -1] {
                let r = BigRational::new(BigInt::from(p) * s, BigInt::from(q));
                if fr.eval(&r).is_zero() {
                    return true;
                }
            }
        }
    }
    false
}

fn subset_sums(parts: &[usize]) -> BTreeSet<usize> {
    let mut sums = BTreeSet::from([0]);
    for &p in parts {
        let next: Vec<usize> = sums.iter().map(|s| s + p).collect();
        sums.extend(next);
    }
    sums
}

/// Degrees of the irreducible factors of `f mod p`, or `None` when `p`
/// divides the leading coefficient or `f mod p` is not squarefree.
fn modular_pattern(f: &IntPoly, p: u64) -> Option<Vec<usize>> {
    let fp = fp::reduce(f, p);
    if fp.len() != f.coeffs().len() {
        return None;
    }
    let fp = fp::monic(&fp, p);
    let df = fp::derivative(&fp, p);
    if fp::degree(&fp::gcd(&fp, &df, p)) != Some(0) {
        return None;
    }
    Some(fp::distinct_degree(&fp, p))
}

/// Find a factor of exact degree `k` by Kronecker's method.
pub(crate) fn kronecker_factor(f: &IntPoly, k: usize) -> Option<IntPoly> {
    let d = f.degree()?;
    if k == 0 || k >= d {
        return None;
    }
    // Evaluation points with few divisors.
    let mut candidates: Vec<(usize, i64, Vec<u64>)> = Vec::new();
    for x in -12i64..=12 {
        let v = f.eval(&BigInt::from(x));
        if v.is_zero() {
            // A rational (integer) root: X - x divides f.
            let lin = IntPoly::from_i64s(&[-x, 1]);
            if k == 1 {
                return Some(lin);
            }
            continue;
        }
        if let Some(divs) = small_divisors(&v) {
            candidates.push((divs.len(), x, divs));
        }
    }
    candidates.sort();
    if candidates.len() < k + 1 {
        return None;
    }
    let pts: Vec<(i64, Vec<u64>)> = candidates
        .into_iter()
        .take(k + 1)
        .map(|(_, x, d)| (x, d))
        .collect();
    let lc_f = f.lc().unwrap().clone();
    let mut idx = vec![0usize; k + 1];
    let mut signs = vec![1i64; k + 1];
    loop {
        let values: Vec<(BigRational, BigRational)> = pts
            .iter()
            .enumerate()
            .map(|(i, (x, divs))| {
                (
                    BigRational::from_integer((*x).into()),
                    BigRational::from_integer(BigInt::from(divs[idx[i]]) * signs[i]),
                )
            })
            .collect();
        let g = RatPoly::interpolate(&values);
        if g.degree() == Some(k) {
            if let Some(gi) = g.to_int() {
                if (&lc_f % gi.lc().unwrap()).is_zero() && f.div_exact(&gi).is_some() {
                    return Some(gi);
                }
            }
        }
        // Odometer over divisor choices and signs; the first value keeps a
        // positive sign since g and -g are interchangeable.
        let mut pos = 0;
        loop {
            if pos == k + 1 {
                return None;
            }
            if pos > 0 && signs[pos] == 1 {
                signs[pos] = -1;
                break;
            }
            if pos > 0 {
                signs[pos] = 1;
            }
            idx[pos] += 1;
            if idx[pos] < pts[pos].1.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Dense polynomials over 𝔽_p, constant term first, trimmed.
pub(crate) mod fp {
    use super::IntPoly;
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::ToPrimitive;

    pub type P = Vec<u64>;

    fn trim(mut a: P) -> P {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn degree(a: &P) -> Option<usize> {
        a.len().checked_sub(1)
    }

    pub fn reduce(f: &IntPoly, p: u64) -> P {
        let pb = BigInt::from(p);
        trim(
            f.coeffs()
                .iter()
                .map(|c| c.mod_floor(&pb).to_u64().unwrap())
                .collect(),
        )
    }

    pub fn inv(a: u64, p: u64) -> u64 {
        pow(a, p - 2, p)
    }

    pub fn pow(mut b: u64, mut e: u64, p: u64) -> u64 {
        let mut acc = 1u64;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        acc
    }

    pub fn monic(a: &P, p: u64) -> P {
        let Some(&lc) = a.last() else {
            return a.clone();
        };
        let i = inv(lc, p);
        a.iter().map(|&c| c * i % p).collect()
    }

    pub fn derivative(a: &P, p: u64) -> P {
        trim(
            a.iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| (i as u64 % p) * c % p)
                .collect(),
        )
    }

    pub fn sub(a: &P, b: &P, p: u64) -> P {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| {
                    let x = a.get(i).copied().unwrap_or(0);
                    let y = b.get(i).copied().unwrap_or(0);
                    (x + p - y) % p
                })
                .collect(),
        )
    }

    pub fn mul(a: &P, b: &P, p: u64) -> P {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(out)
    }

    pub fn div_rem(a: &P, b: &P, p: u64) -> (P, P) {
        let db = degree(b).expect("division by zero");
        let il = inv(*b.last().unwrap(), p);
        let mut r = a.clone();
        let mut q = vec![0u64; a.len().saturating_sub(db)];
        while let Some(dr) = degree(&r) {
            if dr < db {
                break;
            }
            let c = r[dr] * il % p;
            q[dr - db] = c;
            for (j, &bj) in b.iter().enumerate() {
                let idx = dr - db + j;
                r[idx] = (r[idx] + p - c * bj % p) % p;
            }
            r = trim(r);
        }
        (trim(q), r)
    }

    pub fn gcd(a: &P, b: &P, p: u64) -> P {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_empty() {
            let r = div_rem(&x, &y, p).1;
            x = y;
            y = r;
        }
        monic(&x, p)
    }

    fn powmod(base: &P, mut e: u64, m: &P, p: u64) -> P {
        let mut acc = vec![1u64];
        let mut b = div_rem(base, m, p).1;
        while e > 0 {
            if e & 1 == 1 {
                acc = div_rem(&mul(&acc, &b, p), m, p).1;
            }
            b = div_rem(&mul(&b, &b, p), m, p).1;
            e >>= 1;
        }
        acc
    }

    /// Degrees of the irreducible factors of a monic squarefree polynomial.
    pub fn distinct_degree(f: &P, p: u64) -> Vec<usize> {
        let mut out = Vec::new();
        let mut rest = f.clone();
        let x = vec![0u64, 1];
        let mut h = x.clone();
        let mut i = 1;
        while degree(&rest).unwrap_or(0) >= 2 * i {
            h = powmod(&h, p, &rest, p);
            let g = gcd(&sub(&h, &x, p), &rest, p);
            let dg = degree(&g).unwrap_or(0);
            if dg > 0 {
                out.extend(std::iter::repeat_n(i, dg / i));
                rest = div_rem(&rest, &g, p).0;
                h = div_rem(&h, &rest, p).1;
            }
            i += 1;
        }
        if let Some(dr) = degree(&rest) {
            if dr > 0 {
                out.push(dr);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64s(cs)
    }

    #[test]
    fn examples() {
        assert!(!is_irreducible_q(&p(&[-1, 0, 0, 0, 1])).unwrap());
        assert!(is_irreducible_q(&p(&[-1, -1, 0, 1])).unwrap());
        assert!(is_irreducible_q(&p(&[-1, -1, 0, 0, 1])).unwrap());
    }

    #[test]
    fn products_of_quadratics_are_reducible() {
        // (x^2 + x + 1)(x^2 + 2): no rational roots.
        let f = &p(&[1, 1, 1]) * &p(&[2, 0, 1]);
        assert!(!is_irreducible_q(&f).unwrap());
        // x^4 + 4 = (x^2 + 2x + 2)(x^2 - 2x + 2), reducible mod every prime.
        assert!(!is_irreducible_q(&p(&[4, 0, 0, 0, 1])).unwrap());
        // degree 8 product of two quartics
        let g = &p(&[-1, -1, 0, 0, 1]) * &p(&[1, 0, -1, 0, 1]);
        assert!(!is_irreducible_q(&g).unwrap());
    }

    #[test]
    fn cyclotomic_and_swinnerton_dyer() {
        // x^4 - x^2 + 1 (12th cyclotomic) reduces mod every prime.
        assert!(is_irreducible_q(&p(&[1, 0, -1, 0, 1])).unwrap());
        // x^4 - 10x^2 + 1, minimal polynomial of sqrt2 + sqrt3
        assert!(is_irreducible_q(&p(&[1, 0, -10, 0, 1])).unwrap());
    }

    #[test]
    fn errors() {
        let nine = IntPoly::monomial(BigInt::one(), 9) - IntPoly::from_i64s(&[2]);
        assert_eq!(
            is_irreducible_q(&nine),
            Err(Error::DegreeTooHigh { degree: 9, cap: 8 })
        );
        assert_eq!(is_irreducible_q(&p(&[3])), Err(Error::DegreeTooLow(0)));
    }

    #[test]
    fn modular_patterns() {
        // x^4 - x - 1 mod 2 is irreducible
        assert_eq!(modular_pattern(&p(&[-1, -1, 0, 0, 1]), 2), Some(vec![4]));
        // x^2 - 1 mod 3 = (x-1)(x+1)
        assert_eq!(modular_pattern(&p(&[-1, 0, 1]), 3), Some(vec![1, 1]));
    }
}
