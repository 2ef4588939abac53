//! Certified complex root isolation for squarefree integer polynomials.
//!
//! Approximations come from Aberth iteration in `f64`, are polished by
//! Newton steps at the working precision, and are then certified with
//! Smith's bound: for approximations `zᵢ` of the roots of `f` of degree `n`,
//! every connected component of `⋃ D(zᵢ, n·|Wᵢ|)` made of `m` disks holds
//! exactly `m` roots, where `Wᵢ = f(zᵢ) / (lc·∏_{j≠i}(zᵢ − zⱼ))`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use super::ball::Ball;
use crate::exact::IntPoly;

fn horner_f64(cs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for &c in cs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Aberth–Ehrlich approximations to all roots of `f`.
pub(crate) fn aberth(f: &IntPoly) -> Vec<Complex64> {
    let n = f.degree().unwrap_or(0);
    let lc = f.coeff(n).to_f64().unwrap_or(f64::NAN);
    let cs: Vec<f64> = f
        .coeffs()
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::NAN) / lc)
        .collect();
    let bound = 1.0 + cs[..n].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let r = bound.min(1e6) * 0.7;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(r, 0.4 + std::f64::consts::TAU * k as f64 / n as f64))
        .collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let (p, dp) = horner_f64(&cs, z[k]);
            if p == Complex64::zero() {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[k] -= w;
                moved = moved.max(w.norm() / (1.0 + z[k].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn eval(coeffs: &[Ball], z: &Ball) -> Ball {
    let mut acc = Ball::from_integer(&BigInt::zero(), z.prec());
    for c in coeffs.iter().rev() {
        acc = acc.mul(z).add(c);
    }
    acc
}

fn newton(f: &[Ball], df: &[Ball], start: Ball) -> Ball {
    let mut z = start;
    for _ in 0..64 {
        let Ok(step) = eval(f, &z).mid().div(&eval(df, &z).mid()) else {
            break;
        };
        let step = step.mid();
        z = z.sub(&step).mid();
        if step.raw_re().bits() <= 1 && step.raw_im().bits() <= 1 {
            break;
        }
    }
    z
}

/// Certified disks for all roots at precision `prec`, or `None` if the
/// approximations cannot be certified at this precision.
pub(crate) fn certified_roots(f: &IntPoly, approx: &[Complex64], prec: u32) -> Option<Vec<Ball>> {
    let n = f.degree()?;
    let coeffs: Vec<Ball> = f
        .coeffs()
        .iter()
        .map(|c| Ball::from_integer(c, prec))
        .collect();
    let dcoeffs: Vec<Ball> = f
        .derivative()
        .coeffs()
        .iter()
        .map(|c| Ball::from_integer(c, prec))
        .collect();
    let z: Vec<Ball> = approx
        .iter()
        .map(|a| newton(&coeffs, &dcoeffs, Ball::from_f64(a.re, a.im, prec)))
        .collect();

    let lc = Ball::from_integer(&f.coeff(n), prec);
    let mut disks = Vec::with_capacity(n);
    for i in 0..n {
        let mut den = lc.clone();
        for j in (0..n).filter(|&j| j != i) {
            den = den.mul(&z[i].sub(&z[j]));
        }
        let w = eval(&coeffs, &z[i]).div(&den).ok()?;
        let r = w.abs_upper() * BigInt::from(n);
        disks.push(z[i].with_radius(r));
    }
    for i in 0..n {
        for j in i + 1..n {
            if disks[i].overlaps(&disks[j]) {
                return None;
            }
        }
    }
    Some(symmetrize(disks))
}

/// Uses that non-real roots come in conjugate pairs: a disk whose mirror
/// image meets only itself holds a real root, and a disk whose mirror meets
/// only one other disk holds the conjugate of that disk's root.
fn symmetrize(mut disks: Vec<Ball>) -> Vec<Ball> {
    let n = disks.len();
    for i in 0..n {
        let mirror = disks[i].conj();
        let hits: Vec<usize> = (0..n).filter(|&j| mirror.overlaps(&disks[j])).collect();
        if hits.len() != 1 {
            continue;
        }
        let j = hits[0];
        if j == i {
            let re = disks[i].raw_re().clone();
            let rad = disks[i].raw_rad().clone();
            disks[i] = Ball::from_raw(re, BigInt::zero(), disks[i].prec()).with_radius(rad);
        } else if i < j {
            disks[j] = disks[i].conj();
        }
    }
    disks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aberth_finds_cube_roots_of_two() {
        let f = IntPoly::from_i64s(&[-2, 0, 0, 1]);
        let z = aberth(&f);
        for r in &z {
            assert!((r.powu(3) - 2.0).norm() < 1e-12);
        }
    }

    #[test]
    fn real_roots_land_on_the_axis() {
        let f = IntPoly::from_i64s(&[-1, -1, 0, 1]);
        let disks = certified_roots(&f, &aberth(&f), 64).unwrap();
        assert_eq!(disks.iter().filter(|b| b.is_real_point()).count(), 1);
    }
}
