//! Canonical number systems in ℤ[α] for a monic integer polynomial `f`.
//!
//! Elements are integer vectors on the basis `1, α, …, α^{d−1}`. The digit
//! map sends `z` to `(z − a)/α` with `a ≡ z₀ (mod N)`, `0 ≤ a < N`,
//! `N = |f(0)|`.
//!
//! The decision procedure is a Brunotte-type closure. With
//! `T(z) = (z − a(z))/α` one has `T(x + y) = T(x) + T(y + εN)` for some
//! `ε ∈ {0, 1}`, so if a set `E` contains `±1, ±α, …` and is closed under
//! `y ↦ T(y)` and `y ↦ T(y + N)`, then every orbit reaches 0 as soon as
//! every orbit starting in `E` does.

use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::stability::roots_outside_unit_circle;
use crate::exact::IntPoly;
use crate::numfield::FieldElement;
use crate::orders::{z_equivalence, OrderLattice};

pub const DEFAULT_CLOSURE_CAP: usize = 1_000_000;
pub const DEFAULT_EXPANSION_CAP: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitSystem {
    f: IntPoly,
    base_norm: BigInt,
}

impl DigitSystem {
    pub fn new(f: &IntPoly) -> Result<Self> {
        if f.degree().unwrap_or(0) == 0 || !f.is_monic() {
            return Err(Error::PreconditionFailed(format!(
                "{f} must be monic of positive degree"
            )));
        }
        let base_norm = f.coeff(0).abs();
        if base_norm < BigInt::from(2) {
            return Err(Error::PreconditionFailed(format!(
                "|{f}(0)| must be at least 2"
            )));
        }
        Ok(DigitSystem {
            f: f.clone(),
            base_norm,
        })
    }

    pub fn poly(&self) -> &IntPoly {
        &self.f
    }

    pub fn base_norm(&self) -> &BigInt {
        &self.base_norm
    }

    pub fn degree(&self) -> usize {
        self.f.degree().unwrap()
    }

    /// `α·z` on coordinates.
    pub fn mul_alpha(&self, z: &[BigInt]) -> Vec<BigInt> {
        let d = self.degree();
        let top = &z[d - 1];
        (0..d)
            .map(|k| {
                let shifted = if k == 0 {
                    BigInt::zero()
                } else {
                    z[k - 1].clone()
                };
                shifted - self.f.coeff(k) * top
            })
            .collect()
    }

    /// `Σ aᵢ αⁱ` for a least-significant-first digit list.
    pub fn evaluate(&self, digits: &[BigInt]) -> Vec<BigInt> {
        let mut acc = vec![BigInt::zero(); self.degree()];
        for a in digits.iter().rev() {
            acc = self.mul_alpha(&acc);
            acc[0] += a;
        }
        acc
    }
}

/// One backward division: `z = digit + α·z′`.
pub fn digit_step(ds: &DigitSystem, z: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    let d = ds.degree();
    assert_eq!(z.len(), d, "coordinate vector has the wrong length");
    let digit = z[0].mod_floor(&ds.base_norm);
    let c0 = ds.f.coeff(0);
    let w0 = &z[0] - &digit;
    let top = -(w0 / &c0);
    let mut out = vec![BigInt::zero(); d];
    for k in 1..d {
        out[k - 1] = &z[k] + ds.f.coeff(k) * &top;
    }
    out[d - 1] = top;
    (digit, out)
}

fn is_zero(z: &[BigInt]) -> bool {
    z.iter().all(Zero::is_zero)
}

fn show(z: &[BigInt]) -> Vec<String> {
    z.iter().map(ToString::to_string).collect()
}

/// Digits least significant first; empty for `z = 0`.
pub fn expand_digits(ds: &DigitSystem, z: &[BigInt], cap: usize) -> Result<Vec<BigInt>> {
    let mut seen = HashSet::new();
    let mut z = z.to_vec();
    let mut digits = Vec::new();
    while !is_zero(&z) {
        if digits.len() >= cap {
            return Err(Error::IterationCap(cap));
        }
        if !seen.insert(z.clone()) {
            return Err(Error::CycleDetected { state: show(&z) });
        }
        let (a, next) = digit_step(ds, &z);
        digits.push(a);
        z = next;
    }
    Ok(digits)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CnsReport {
    pub poly: String,
    pub is_cns: bool,
    pub reason: String,
    /// Size of the closure set, when it was built.
    pub closure_size: Option<usize>,
    /// A nonzero periodic orbit, when one was found.
    pub cycle: Option<Vec<Vec<String>>>,
}

pub fn cns_check(f: &IntPoly) -> Result<CnsReport> {
    cns_check_capped(f, DEFAULT_CLOSURE_CAP)
}

pub fn cns_check_capped(f: &IntPoly, cap: usize) -> Result<CnsReport> {
    let report = |is_cns: bool, reason: &str, size, cycle| CnsReport {
        poly: f.to_string(),
        is_cns,
        reason: reason.into(),
        closure_size: size,
        cycle,
    };
    if f.degree().unwrap_or(0) == 0 || !f.is_monic() {
        return Err(Error::PreconditionFailed(format!(
            "{f} must be monic of positive degree"
        )));
    }
    if f.coeff(0).abs() < BigInt::from(2) {
        return Ok(report(false, "|f(0)| < 2", None, None));
    }
    if !roots_outside_unit_circle(f) {
        return Ok(report(
            false,
            "a root lies in the closed unit disk",
            None,
            None,
        ));
    }
    let ds = DigitSystem::new(f)?;
    let d = ds.degree();

    let mut closure: HashSet<Vec<BigInt>> = HashSet::new();
    let mut queue = VecDeque::new();
    for i in 0..d {
        for s in [1, -1] {
            let mut e = vec![BigInt::zero(); d];
            e[i] = BigInt::from(s);
            if closure.insert(e.clone()) {
                queue.push_back(e);
            }
        }
    }
    while let Some(y) = queue.pop_front() {
        let mut shifted = y.clone();
        shifted[0] += &ds.base_norm;
        for z in [&y, &shifted] {
            let (_, t) = digit_step(&ds, z);
            if !closure.contains(&t) {
                if closure.len() >= cap {
                    return Err(Error::ClosureOverflow(cap));
                }
                closure.insert(t.clone());
                queue.push_back(t);
            }
        }
    }

    // The closure is T-invariant, so every orbit from it stays inside.
    let mut reaches: HashMap<Vec<BigInt>, bool> = HashMap::new();
    let mut starts: Vec<&Vec<BigInt>> = closure.iter().collect();
    starts.sort();
    for start in starts {
        let mut path = Vec::new();
        let mut on_path = HashSet::new();
        let mut z = start.clone();
        let verdict = loop {
            if is_zero(&z) {
                break true;
            }
            if let Some(&v) = reaches.get(&z) {
                break v;
            }
            if !on_path.insert(z.clone()) {
                let from = path.iter().position(|p| *p == z).unwrap();
                let cycle = path[from..].iter().map(|p: &Vec<BigInt>| show(p)).collect();
                return Ok(report(
                    false,
                    "nonzero periodic orbit",
                    Some(closure.len()),
                    Some(cycle),
                ));
            }
            path.push(z.clone());
            z = digit_step(&ds, &z).1;
        };
        for p in path {
            reaches.insert(p, verdict);
        }
    }
    Ok(report(
        true,
        "every closure orbit reaches 0",
        Some(closure.len()),
        None,
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KTimesReport {
    /// Candidates generating the order with a CNS minimal polynomial.
    pub accepted: Vec<String>,
    /// Indices into `accepted`, one class per ℤ-equivalence class.
    pub classes: Vec<Vec<usize>>,
    pub k: usize,
}

pub fn k_times_cns_witness(
    order: &OrderLattice,
    candidates: &[FieldElement],
) -> Result<KTimesReport> {
    let mut accepted: Vec<&FieldElement> = Vec::new();
    for c in candidates {
        if !c.is_integral() {
            return Err(Error::NotIntegral);
        }
        if !c.is_generator() || !OrderLattice::from_generator(c)?.try_eq(order)? {
            continue;
        }
        let f = c.char_poly_int().ok_or(Error::NotIntegral)?;
        if cns_check(&f)?.is_cns {
            accepted.push(c);
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, c) in accepted.iter().enumerate() {
        let mut placed = false;
        for class in classes.iter_mut() {
            if z_equivalence(accepted[class[0]], c)?.is_some() {
                class.push(i);
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push(vec![i]);
        }
    }
    Ok(KTimesReport {
        accepted: accepted.iter().map(|c| c.to_string()).collect(),
        k: classes.len(),
        classes,
    })
}

/// First shift `s` in the order `0, −1, 1, −2, 2, …` with `|s| ≤ window`
/// such that `α + s` is a CNS basis.
///
/// Only a bounded search; finding nothing says nothing about larger shifts.
pub fn cns_translate(alpha: &FieldElement, window: u32) -> Result<Option<i64>> {
    let w = window as i64;
    let shifts = std::iter::once(0).chain((1..=w).flat_map(|a| [-a, a]));
    for s in shifts {
        let t = alpha + &FieldElement::from_integer(alpha.field(), s);
        let f = t.char_poly_int().ok_or(Error::NotIntegral)?;
        if cns_check(&f)?.is_cns {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::NumberField;
    use proptest::prelude::*;

    fn poly(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64s(cs)
    }

    fn v(cs: &[i64]) -> Vec<BigInt> {
        cs.iter().map(|&c| BigInt::from(c)).collect()
    }

    /// Every `z` in `[−r, r]^d` reaches 0 under the digit map.
    fn orbit_oracle(f: &IntPoly, r: i64) -> bool {
        let d = f.degree().unwrap();
        if f.coeff(0).abs() < BigInt::from(2) {
            return false;
        }
        let ds = DigitSystem::new(f).unwrap();
        let side = (2 * r + 1) as usize;
        for idx in 0..side.pow(d as u32) {
            let mut z = Vec::with_capacity(d);
            let mut k = idx;
            for _ in 0..d {
                z.push(BigInt::from((k % side) as i64 - r));
                k /= side;
            }
            if expand_digits(&ds, &z, 10_000).is_err() {
                return false;
            }
        }
        true
    }

    #[test]
    fn digit_step_examples() {
        let ds = DigitSystem::new(&poly(&[2, 2, 1])).unwrap();
        assert_eq!(digit_step(&ds, &v(&[1, 0])), (BigInt::from(1), v(&[0, 0])));
        assert_eq!(digit_step(&ds, &v(&[0, 0])), (BigInt::from(0), v(&[0, 0])));
        let (a, z) = digit_step(&ds, &v(&[-1, 0]));
        assert_eq!((a.clone(), z.clone()), (BigInt::from(1), v(&[2, 1])));
        let mut back = ds.mul_alpha(&z);
        back[0] += a;
        assert_eq!(back, v(&[-1, 0]));
    }

    #[test]
    fn check_examples() {
        let gauss = cns_check(&poly(&[2, 2, 1])).unwrap();
        assert!(gauss.is_cns);
        let bad = cns_check(&poly(&[2, -2, 1])).unwrap();
        assert!(!bad.is_cns);
        assert!(bad.cycle.is_some());
        assert!(cns_check(&poly(&[2, 1])).unwrap().is_cns);
        assert!(!cns_check(&poly(&[-2, 1])).unwrap().is_cns);
        assert!(!cns_check(&poly(&[1, 0, 1])).unwrap().is_cns);
    }

    #[test]
    fn expansion_examples() {
        let ds = DigitSystem::new(&poly(&[2, 1])).unwrap();
        assert_eq!(expand_digits(&ds, &v(&[3]), 100).unwrap(), v(&[1, 1, 1]));
        assert!(expand_digits(&ds, &v(&[0]), 100).unwrap().is_empty());
        let ds = DigitSystem::new(&poly(&[2, -2, 1])).unwrap();
        assert!(matches!(
            expand_digits(&ds, &v(&[-1, 0]), 100),
            Err(Error::CycleDetected { .. })
        ));
    }

    #[test]
    fn closure_overflow_is_loud() {
        assert_eq!(
            cns_check_capped(&poly(&[3, 3, 3, 1]), 4).unwrap_err(),
            Error::ClosureOverflow(4)
        );
    }

    /// Quadratic CNS polynomials are exactly `x² + bx + c` with `c ≥ 2`,
    /// `−1 ≤ b ≤ c`.
    #[test]
    fn quadratic_characterisation() {
        for b in -6i64..=8 {
            for c in -3i64..=7 {
                let expected = c >= 2 && -1 <= b && b <= c;
                let got = cns_check(&poly(&[c, b, 1])).unwrap().is_cns;
                assert_eq!(got, expected, "x^2 + {b}x + {c}");
            }
        }
    }

    #[test]
    fn agrees_with_orbit_oracle() {
        let corpus: &[&[i64]] = &[
            &[2, 1],
            &[3, 1],
            &[-3, 1],
            &[2, 2, 1],
            &[2, -2, 1],
            &[3, 3, 1],
            &[5, 0, 1],
            &[2, 0, 0, 1],
            &[3, 2, 2, 1],
            &[2, -1, 0, 1],
            &[3, 1, 0, 1],
        ];
        for cs in corpus {
            let f = poly(cs);
            let r = if f.degree().unwrap() <= 2 { 20 } else { 6 };
            assert_eq!(cns_check(&f).unwrap().is_cns, orbit_oracle(&f, r), "{f}");
        }
    }

    #[test]
    fn k_times_examples() {
        let k = NumberField::from_i64s(&[2, 2, 1]).unwrap();
        let a = FieldElement::generator(&k);
        let o = OrderLattice::from_generator(&a).unwrap();
        let conj = &(-&a) - &FieldElement::from_integer(&k, 2);
        let r = k_times_cns_witness(&o, &[a.clone(), conj]).unwrap();
        assert_eq!((r.accepted.len(), r.k), (2, 1));
        let r = k_times_cns_witness(&o, &[a.clone(), &a + &FieldElement::one(&k)]).unwrap();
        assert!(r.k <= 1);
        assert_eq!(k_times_cns_witness(&o, &[]).unwrap().k, 0);
    }

    #[test]
    fn translates_become_cns() {
        let k = NumberField::from_i64s(&[2, -2, 1]).unwrap();
        let a = FieldElement::generator(&k);
        assert_eq!(cns_translate(&a, 20).unwrap(), Some(-2));
    }

    proptest! {
        #[test]
        fn expansions_round_trip(x in -500i64..500, y in -500i64..500) {
            let ds = DigitSystem::new(&poly(&[2, 2, 1])).unwrap();
            let z = v(&[x, y]);
            let digits = expand_digits(&ds, &z, DEFAULT_EXPANSION_CAP).unwrap();
            prop_assert_eq!(ds.evaluate(&digits), z);
            prop_assert!(digits.iter().all(|a| !a.is_negative() && a < ds.base_norm()));
            prop_assert!(digits.last().is_none_or(|a| !a.is_zero()));
        }
    }
}
