//! Complex disks with fixed-point dyadic midpoints.
//!
//! A ball at precision `p` is the closed disk with centre `(re + i·im)/2^p`
//! and radius `rad/2^p`. Every operation returns a disk that contains all
//! results of the exact operation applied to points of the inputs.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    re: BigInt,
    im: BigInt,
    rad: BigInt,
    prec: u32,
}

fn isqrt_floor(n: &BigInt) -> BigInt {
    n.sqrt()
}

fn isqrt_ceil(n: &BigInt) -> BigInt {
    let s = n.sqrt();
    if &s * &s < *n {
        s + 1
    } else {
        s
    }
}

/// `⌈n / 2^k⌉` for `n ≥ 0`.
fn shr_ceil(n: &BigInt, k: u32) -> BigInt {
    -((-n) >> k as usize)
}

fn ceil_div(n: &BigInt, d: &BigInt) -> BigInt {
    n.div_ceil(d)
}

/// Floor division plus a flag for an inexact result.
fn floor_div(n: &BigInt, d: &BigInt) -> (BigInt, bool) {
    let (q, r) = n.div_mod_floor(d);
    (q, !r.is_zero())
}

impl Ball {
    pub fn from_integer(n: &BigInt, prec: u32) -> Self {
        Ball {
            re: n << prec as usize,
            im: BigInt::zero(),
            rad: BigInt::zero(),
            prec,
        }
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        let (re, inexact) = floor_div(&(q.numer() << prec as usize), q.denom());
        Ball {
            re,
            im: BigInt::zero(),
            rad: BigInt::from(inexact as u8),
            prec,
        }
    }

    /// The point `(re + i·im)/2^prec` with radius zero.
    pub fn from_raw(re: BigInt, im: BigInt, prec: u32) -> Self {
        Ball {
            re,
            im,
            rad: BigInt::zero(),
            prec,
        }
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        let scale = |x: f64| -> BigInt {
            let q = BigRational::from_float(x).unwrap_or_else(BigRational::zero);
            (q.numer() << prec as usize).div_floor(q.denom())
        };
        Ball::from_raw(scale(re), scale(im), prec)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn raw_re(&self) -> &BigInt {
        &self.re
    }

    pub fn raw_im(&self) -> &BigInt {
        &self.im
    }

    pub fn raw_rad(&self) -> &BigInt {
        &self.rad
    }

    pub fn mid(&self) -> Self {
        Ball {
            rad: BigInt::zero(),
            ..self.clone()
        }
    }

    pub fn conj(&self) -> Self {
        Ball {
            im: -&self.im,
            ..self.clone()
        }
    }

    pub fn with_radius(&self, rad: BigInt) -> Self {
        Ball {
            rad,
            ..self.clone()
        }
    }

    pub fn is_real_point(&self) -> bool {
        self.im.is_zero()
    }

    /// The same disk (or a superset of it) at precision `p`.
    pub fn with_prec(&self, p: u32) -> Self {
        match p.cmp(&self.prec) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let k = (p - self.prec) as usize;
                Ball {
                    re: &self.re << k,
                    im: &self.im << k,
                    rad: &self.rad << k,
                    prec: p,
                }
            }
            Ordering::Less => {
                let k = self.prec - p;
                Ball {
                    re: &self.re >> k as usize,
                    im: &self.im >> k as usize,
                    rad: shr_ceil(&self.rad, k) + 2,
                    prec: p,
                }
            }
        }
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.prec, other.prec, "balls at different precisions");
    }

    fn norm_sq(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Upper bound for `|mid|` in units of `2^-p`.
    fn abs_mid_upper(&self) -> BigInt {
        isqrt_ceil(&self.norm_sq())
    }

    /// Upper bound for every `|z|` in the disk, in units of `2^-p`.
    pub fn abs_upper(&self) -> BigInt {
        self.abs_mid_upper() + &self.rad
    }

    pub fn contains_zero(&self) -> bool {
        self.norm_sq() <= &self.rad * &self.rad
    }

    /// The disks intersect.
    pub fn overlaps(&self, other: &Self) -> bool {
        let p = self.prec.max(other.prec);
        let (a, b) = (self.with_prec(p), other.with_prec(p));
        let d = a.sub(&b.mid());
        let r = &a.rad + &b.rad;
        d.mid().norm_sq() <= &r * &r
    }

    pub fn contains(&self, re: &BigRational, im: &BigRational) -> bool {
        let den = re.denom() * im.denom();
        let scale = BigInt::one() << self.prec as usize;
        let x = &self.re * &den - re.numer() * im.denom() * &scale;
        let y = &self.im * &den - im.numer() * re.denom() * &scale;
        let r = &self.rad * &den;
        &x * &x + &y * &y <= &r * &r
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        self.contains(q, &BigRational::zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        Ball {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
            rad: &self.rad + &other.rad,
            prec: self.prec,
        }
    }

    pub fn neg(&self) -> Self {
        Ball {
            re: -&self.re,
            im: -&self.im,
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let p = self.prec as usize;
        let re2 = &self.re * &other.re - &self.im * &other.im;
        let im2 = &self.re * &other.im + &self.im * &other.re;
        let one = BigInt::one() << p;
        let (re, e1) = floor_div(&re2, &one);
        let (im, e2) = floor_div(&im2, &one);
        let spread = self.abs_mid_upper() * &other.rad
            + other.abs_mid_upper() * &self.rad
            + &self.rad * &other.rad;
        let rad = shr_ceil(&spread, self.prec) + (e1 as u8 + e2 as u8);
        Ball {
            re,
            im,
            rad,
            prec: self.prec,
        }
    }

    pub fn mul_int(&self, n: &BigInt) -> Self {
        Ball {
            re: &self.re * n,
            im: &self.im * n,
            rad: &self.rad * n.abs(),
            prec: self.prec,
        }
    }

    pub fn div_int(&self, n: &BigInt) -> Result<Self> {
        if n.is_zero() {
            return Err(Error::ZeroDivision);
        }
        let (re, e1) = floor_div(&self.re, n);
        let (im, e2) = floor_div(&self.im, n);
        Ok(Ball {
            re,
            im,
            rad: ceil_div(&self.rad, &n.abs()) + (e1 as u8 + e2 as u8),
            prec: self.prec,
        })
    }

    /// Fails when the disk contains zero.
    pub fn inv(&self) -> Result<Self> {
        let n2 = self.norm_sq();
        let lo = isqrt_floor(&n2);
        if lo <= self.rad {
            return Err(Error::ZeroDivision);
        }
        let shift = 2 * self.prec as usize;
        let (re, e1) = floor_div(&(&self.re << shift), &n2);
        let (im, e2) = floor_div(&(-&self.im << shift), &n2);
        let rad = if self.rad.is_zero() {
            BigInt::zero()
        } else {
            ceil_div(&(&self.rad << shift), &((&lo - &self.rad) * &lo))
        };
        Ok(Ball {
            re,
            im,
            rad: rad + (e1 as u8 + e2 as u8),
            prec: self.prec,
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn sqr(&self) -> Self {
        self.mul(self)
    }

    /// Lexicographic order on `(re, im)` of the midpoints.
    pub fn cmp_mid(&self, other: &Self) -> Ordering {
        self.check(other);
        (&self.re, &self.im).cmp(&(&other.re, &other.im))
    }

    pub fn re_f64(&self) -> f64 {
        scaled_to_f64(&self.re, self.prec)
    }

    pub fn im_f64(&self) -> f64 {
        scaled_to_f64(&self.im, self.prec)
    }

    /// Smallest `k` with `radius ≤ 2^k`, or `None` for an exact point.
    pub fn radius_exponent(&self) -> Option<i64> {
        if self.rad.is_zero() {
            return None;
        }
        let mut k = self.rad.bits() as i64;
        if (&self.rad - BigInt::one()).bits() < self.rad.bits() {
            k -= 1;
        }
        Some(k - self.prec as i64)
    }

    pub fn report(&self) -> BallReport {
        let den = BigInt::one() << self.prec as usize;
        BallReport {
            re: sig_digits(&BigRational::new(self.re.clone(), den.clone()), 30),
            im: sig_digits(&BigRational::new(self.im.clone(), den), 30),
            rad_exp: self.radius_exponent(),
        }
    }
}

fn scaled_to_f64(n: &BigInt, prec: u32) -> f64 {
    let drop = prec.saturating_sub(60);
    let m = (n >> drop as usize).to_f64().unwrap_or(f64::NAN);
    m * 2f64.powi(drop as i32 - prec as i32)
}

/// Midpoint as decimal strings plus the binary exponent of the radius.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BallReport {
    pub re: String,
    pub im: String,
    pub rad_exp: Option<i64>,
}

/// `q` in scientific notation with `digits` significant digits.
pub fn sig_digits(q: &BigRational, digits: u32) -> String {
    if q.is_zero() {
        return "0".into();
    }
    let sign = if q.is_negative() { "-" } else { "" };
    let a = q.abs();
    let ten = BigRational::from_integer(BigInt::from(10));
    let mut e: i64 = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    loop {
        let lo = pow10(&ten, e);
        if a < lo {
            e -= 1;
        } else if a >= &lo * &ten {
            e += 1;
        } else {
            break;
        }
    }
    let scaled = &a * pow10(&ten, digits as i64 - 1 - e);
    let mut m = scaled.round().to_integer();
    if m.to_string().len() > digits as usize {
        m /= 10;
        e += 1;
    }
    let s = m.to_string();
    let (head, tail) = s.split_at(1);
    let tail = tail.trim_end_matches('0');
    if tail.is_empty() {
        format!("{sign}{head}e{e}")
    } else {
        format!("{sign}{head}.{tail}e{e}")
    }
}

fn pow10(ten: &BigRational, e: i64) -> BigRational {
    let p = num_traits::pow(ten.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn sig_digit_formatting() {
        assert_eq!(sig_digits(&q(3, 2), 30), "1.5e0");
        assert_eq!(sig_digits(&q(-1, 3), 5), "-3.3333e-1");
        assert_eq!(sig_digits(&q(99999, 1), 3), "1e5");
        assert_eq!(sig_digits(&q(0, 1), 3), "0");
    }

    #[test]
    fn inverse_of_exact_rational() {
        let b = Ball::from_rational(&q(3, 1), 64);
        let inv = b.inv().unwrap();
        assert!(inv.contains_rational(&q(1, 3)));
        assert!(!inv.contains_rational(&(q(1, 3) + q(1, 1 << 40))));
    }

    #[test]
    fn zero_disk_has_no_inverse() {
        let b = Ball::from_integer(&0.into(), 32).with_radius(1.into());
        assert_eq!(b.inv(), Err(Error::ZeroDivision));
    }

    fn arb_point() -> impl Strategy<Value = (i64, i64, i64, i64)> {
        (-50i64..50, 1i64..20, -50i64..50, 1i64..20)
    }

    proptest! {
        // Exact complex rationals stay inside the computed disks.
        #[test]
        fn arithmetic_encloses((a, b, c, d) in arb_point(), (e, f, g, h) in arb_point()) {
            let p = 48;
            let x = Ball::from_rational(&q(a, b), p).add(&Ball::from_rational(&q(c, d), p).mul(&Ball::from_raw(0.into(), BigInt::one() << p, p)));
            let y = Ball::from_rational(&q(e, f), p).add(&Ball::from_rational(&q(g, h), p).mul(&Ball::from_raw(0.into(), BigInt::one() << p, p)));
            let (xr, xi, yr, yi) = (q(a, b), q(c, d), q(e, f), q(g, h));
            let pr = &xr * &yr - &xi * &yi;
            let pi = &xr * &yi + &xi * &yr;
            prop_assert!(x.mul(&y).contains(&pr, &pi));
            prop_assert!(x.add(&y).contains(&(&xr + &yr), &(&xi + &yi)));
            if !(yr.is_zero() && yi.is_zero()) {
                let n = &yr * &yr + &yi * &yi;
                let qr = (&xr * &yr + &xi * &yi) / &n;
                let qi = (&xi * &yr - &xr * &yi) / &n;
                if let Ok(z) = x.div(&y) {
                    prop_assert!(z.contains(&qr, &qi));
                }
            }
        }

        #[test]
        fn lowering_precision_encloses(a in -1000i64..1000, b in 1i64..1000) {
            let x = Ball::from_rational(&q(a, b), 80);
            prop_assert!(x.with_prec(20).contains_rational(&q(a, b)));
        }
    }
}
