//! Certified complex conjugates and the quantities built from them.
//!
//! Balls are used only for one-sided certificates: an identity residual
//! containing zero, or a quantity excluding zero. Equality decisions are
//! left to the exact modules.

mod ball;
mod roots;

use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::IntPoly;
use crate::numfield::{same_field, FieldElement, NumberField};
use crate::orders::{element_discriminant, same_order, z_equivalence};

pub use ball::{sig_digits, Ball, BallReport};

pub const PRECISION_LADDER: [u32; 4] = [64, 128, 256, 512];
pub const MAX_PRECISION: u32 = 512;

fn ladder_from(prec: u32) -> Vec<u32> {
    let mut out = vec![prec];
    let mut p = prec;
    while p < MAX_PRECISION {
        p = (2 * p).min(MAX_PRECISION);
        out.push(p);
    }
    out
}

/// Disjoint certified disks around the roots of a squarefree polynomial,
/// ordered by `(re, im)` of their midpoints at the first precision reached.
#[derive(Clone, Debug)]
pub struct EmbeddingSet {
    poly: IntPoly,
    prec: u32,
    roots: Vec<Ball>,
    approx: Vec<Complex64>,
}

pub fn isolate_roots(f: &IntPoly, prec: u32) -> Result<EmbeddingSet> {
    let d = f.degree().unwrap_or(0);
    if d == 0 {
        return Err(Error::DegreeTooLow(0));
    }
    if !f.to_rat().is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    let approx = roots::aberth(f);
    for p in ladder_from(prec) {
        if let Some(mut roots) = roots::certified_roots(f, &approx, p) {
            roots.sort_by(|a, b| a.cmp_mid(b));
            return Ok(EmbeddingSet {
                poly: f.clone(),
                prec: p,
                roots,
                approx,
            });
        }
    }
    Err(Error::PrecisionExhausted(MAX_PRECISION.max(prec)))
}

impl EmbeddingSet {
    pub fn for_field(field: &Arc<NumberField>, prec: u32) -> Result<Self> {
        isolate_roots(field.min_poly(), prec)
    }

    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn roots(&self) -> &[Ball] {
        &self.roots
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    /// The same roots, in the same order, at precision at least `prec`.
    pub fn refine(&self, prec: u32) -> Result<Self> {
        if prec <= self.prec {
            return Ok(self.clone());
        }
        for p in ladder_from(prec) {
            let Some(fresh) = roots::certified_roots(&self.poly, &self.approx, p) else {
                continue;
            };
            let mut ordered = Vec::with_capacity(fresh.len());
            for old in &self.roots {
                let hits: Vec<&Ball> = fresh.iter().filter(|b| b.overlaps(old)).collect();
                match hits.as_slice() {
                    [one] => ordered.push((*one).clone()),
                    _ => {
                        return Err(Error::AssertionFailed(
                            "refined roots do not match the base disks".into(),
                        ))
                    }
                }
            }
            return Ok(EmbeddingSet {
                poly: self.poly.clone(),
                prec: p,
                roots: ordered,
                approx: self.approx.clone(),
            });
        }
        Err(Error::PrecisionExhausted(MAX_PRECISION.max(prec)))
    }

    /// `x^{(1)}, …, x^{(d)}` under the fixed root ordering.
    pub fn conjugates(&self, x: &FieldElement) -> Result<Vec<Ball>> {
        if x.field().min_poly() != &self.poly {
            return Err(Error::FieldMismatch);
        }
        self.roots
            .iter()
            .map(|r| {
                let mut acc = Ball::from_integer(&BigInt::from(0), self.prec);
                for c in x.numerators().iter().rev() {
                    acc = acc.mul(r).add(&Ball::from_integer(c, self.prec));
                }
                acc.div_int(x.denominator())
            })
            .collect()
    }

    pub fn report(&self) -> Vec<BallReport> {
        self.roots.iter().map(Ball::report).collect()
    }
}

fn pairwise_disjoint(bs: &[Ball]) -> bool {
    (0..bs.len()).all(|i| (i + 1..bs.len()).all(|j| !bs[i].overlaps(&bs[j])))
}

/// Conjugates of `x`, refining until they are certified distinct.
fn distinct_conjugates(x: &FieldElement, e: &EmbeddingSet) -> Result<(EmbeddingSet, Vec<Ball>)> {
    for p in ladder_from(e.prec) {
        let e = e.refine(p)?;
        let c = e.conjugates(x)?;
        if pairwise_disjoint(&c) {
            return Ok((e, c));
        }
    }
    Err(Error::ConjugatesCollide(MAX_PRECISION.max(e.prec)))
}

fn require_generator(x: &FieldElement) -> Result<()> {
    if x.degree() < 2 {
        return Err(Error::DegreeTooLow(x.degree()));
    }
    if !x.is_generator() {
        return Err(Error::NotAGenerator);
    }
    Ok(())
}

/// `((α⁽³⁾−α⁽¹⁾)/(α⁽²⁾−α⁽¹⁾), …, (α⁽ᵈ⁾−α⁽¹⁾)/(α⁽²⁾−α⁽¹⁾))`.
pub fn tau_tuple(alpha: &FieldElement, e: &EmbeddingSet) -> Result<Vec<Ball>> {
    require_generator(alpha)?;
    let (_, c) = distinct_conjugates(alpha, e)?;
    let base = c[1].sub(&c[0]);
    c[2..].iter().map(|x| x.sub(&c[0]).div(&base)).collect()
}

/// Every coordinate pair overlaps: the numeric shadow of `τ(α) = τ(β)`.
pub fn tau_overlap(a: &[Ball], b: &[Ball]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.overlaps(y))
}

/// `ε_ij = (α⁽ⁱ⁾ − α⁽ʲ⁾)/(β⁽ⁱ⁾ − β⁽ʲ⁾)` for all `i ≠ j`.
#[derive(Clone, Debug)]
pub struct EpsilonSystem {
    pub alpha: FieldElement,
    pub beta: FieldElement,
    pub prec: u32,
    pub alpha_conj: Vec<Ball>,
    pub beta_conj: Vec<Ball>,
    eps: Vec<Vec<Option<Ball>>>,
}

impl EpsilonSystem {
    pub fn degree(&self) -> usize {
        self.eps.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &Ball {
        self.eps[i][j].as_ref().expect("ε_ii is undefined")
    }

    /// `∏_{i<j} ε_ij²`, which equals `D(α)/D(β)`.
    pub fn square_product(&self) -> Ball {
        let d = self.degree();
        let mut acc = Ball::from_integer(&BigInt::from(1), self.prec);
        for i in 0..d {
            for j in i + 1..d {
                acc = acc.mul(&self.get(i, j).sqr());
            }
        }
        acc
    }

    /// Upper-triangular entries as reports, row by row.
    pub fn report(&self) -> Vec<(usize, usize, BallReport)> {
        let d = self.degree();
        let mut out = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                out.push((i + 1, j + 1, self.get(i, j).report()));
            }
        }
        out
    }
}

pub fn epsilon_system(
    alpha: &FieldElement,
    beta: &FieldElement,
    e: &EmbeddingSet,
) -> Result<EpsilonSystem> {
    if !same_field(alpha.field(), beta.field()) {
        return Err(Error::FieldMismatch);
    }
    require_generator(alpha)?;
    require_generator(beta)?;
    let mut e = e.clone();
    for _ in 0..PRECISION_LADDER.len() + 1 {
        let (ea, a) = distinct_conjugates(alpha, &e)?;
        let (eb, b) = distinct_conjugates(beta, &ea)?;
        if eb.prec != ea.prec {
            e = eb;
            continue;
        }
        let d = a.len();
        let mut eps = vec![vec![None; d]; d];
        for i in 0..d {
            for j in i + 1..d {
                let v = a[i].sub(&a[j]).div(&b[i].sub(&b[j]))?;
                eps[j][i] = Some(v.clone());
                eps[i][j] = Some(v);
            }
        }
        return Ok(EpsilonSystem {
            alpha: alpha.clone(),
            beta: beta.clone(),
            prec: eb.prec,
            alpha_conj: a,
            beta_conj: b,
            eps,
        });
    }
    Err(Error::ConjugatesCollide(MAX_PRECISION))
}

/// Index tuples (1-based) at which an identity residual excluded zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub instances: usize,
    pub failures: Vec<Vec<usize>>,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityCheck {
    /// The exact layer does not certify the hypotheses.
    Skipped { reason: String },
    /// `ε_ij/ε_ik − 1` excludes zero for every distinct triple. The Galois
    /// hypothesis on the normal closure is assumed, not checked.
    Certified {
        instances: usize,
        prec: u32,
        galois_assumed: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EpsReport {
    pub prec: u32,
    pub triangle: IdentityCheck,
    pub quadrilateral: Option<IdentityCheck>,
    pub distinct_ratios: InequalityCheck,
}

impl EpsReport {
    pub fn holds(&self) -> bool {
        self.triangle.holds() && self.quadrilateral.as_ref().is_none_or(|c| c.holds())
    }
}

fn one(prec: u32) -> Ball {
    Ball::from_integer(&BigInt::from(1), prec)
}

/// `ε_xy/ε_zw − 1`.
fn ratio_m1(s: &EpsilonSystem, x: (usize, usize), y: (usize, usize)) -> Result<Ball> {
    Ok(s.get(x.0, x.1).div(s.get(y.0, y.1))?.sub(&one(s.prec)))
}

fn distinct_tuples(d: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..d)
                    .filter(|i| !t.contains(i))
                    .map(|i| {
                        let mut u = t.clone();
                        u.push(i);
                        u
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    out
}

fn triangle(s: &EpsilonSystem) -> Result<IdentityCheck> {
    let b = &s.beta_conj;
    let mut out = IdentityCheck::default();
    for t in distinct_tuples(s.degree(), 3) {
        let (i, j, k) = (t[0], t[1], t[2]);
        let lhs = ratio_m1(s, (i, k), (j, k))?;
        let factor = b[i].sub(&b[j]).div(&b[i].sub(&b[k]))?;
        let rhs = factor.mul(&ratio_m1(s, (i, j), (j, k))?);
        out.instances += 1;
        if !lhs.sub(&rhs).contains_zero() {
            out.failures.push(t.iter().map(|x| x + 1).collect());
        }
    }
    Ok(out)
}

fn quadrilateral(s: &EpsilonSystem) -> Result<IdentityCheck> {
    let mut out = IdentityCheck::default();
    for t in distinct_tuples(s.degree(), 4) {
        let (i, j, k, l) = (t[0], t[1], t[2], t[3]);
        let lhs = ratio_m1(s, (i, k), (j, k))?
            .mul(&ratio_m1(s, (i, l), (k, l))?)
            .mul(&ratio_m1(s, (i, j), (j, l))?);
        let rhs = ratio_m1(s, (i, j), (j, k))?
            .mul(&ratio_m1(s, (i, k), (k, l))?)
            .mul(&ratio_m1(s, (i, l), (j, l))?);
        out.instances += 1;
        if !lhs.sub(&rhs).contains_zero() {
            out.failures.push(t.iter().map(|x| x + 1).collect());
        }
    }
    Ok(out)
}

fn distinct_ratios(s: &EpsilonSystem, e: &EmbeddingSet) -> Result<InequalityCheck> {
    let skip = |r: &str| Ok(InequalityCheck::Skipped { reason: r.into() });
    if s.degree() < 4 {
        return skip("degree below 4");
    }
    if !s.alpha.is_integral() || !s.beta.is_integral() {
        return skip("not both integral");
    }
    if !same_order(&s.alpha, &s.beta)? {
        return skip("orders differ");
    }
    if z_equivalence(&s.alpha, &s.beta)?.is_some() {
        return skip("pair is Z-equivalent");
    }
    let triples = distinct_tuples(s.degree(), 3);
    let mut sys = s.clone();
    for p in ladder_from(s.prec) {
        if p > sys.prec {
            sys = epsilon_system(&s.alpha, &s.beta, &e.refine(p)?)?;
        }
        let mut decided = true;
        for t in &triples {
            if ratio_m1(&sys, (t[0], t[1]), (t[0], t[2]))?.contains_zero() {
                decided = false;
                break;
            }
        }
        if decided {
            return Ok(InequalityCheck::Certified {
                instances: triples.len(),
                prec: sys.prec,
                galois_assumed: true,
            });
        }
    }
    Err(Error::PrecisionExhausted(MAX_PRECISION))
}

/// The triangle identity for all distinct `(i, j, k)`, the four-index
/// product identity when `d ≥ 4`, and `ε_ij ≠ ε_ik` when the exact layer
/// certifies equal orders and ℤ-inequivalence.
pub fn check_eps_identities(sys: &EpsilonSystem, e: &EmbeddingSet) -> Result<EpsReport> {
    Ok(EpsReport {
        prec: sys.prec,
        triangle: triangle(sys)?,
        quadrilateral: if sys.degree() >= 4 {
            Some(quadrilateral(sys)?)
        } else {
            None
        },
        distinct_ratios: distinct_ratios(sys, e)?,
    })
}

/// `D(α)/D(β)` as an exact rational, for cross-checking [`EpsilonSystem::square_product`].
pub fn exact_disc_ratio(alpha: &FieldElement, beta: &FieldElement) -> Result<BigRational> {
    Ok(BigRational::new(
        element_discriminant(alpha)?,
        element_discriminant(beta)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orders::l_equivalence;
    use num_traits::{One, Signed};

    fn field(cs: &[i64]) -> Arc<NumberField> {
        NumberField::from_i64s(cs).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn sqrt_two() {
        let e = isolate_roots(&IntPoly::from_i64s(&[-2, 0, 1]), 64).unwrap();
        assert_eq!(e.degree(), 2);
        assert!(e.roots().iter().all(Ball::is_real_point));
        assert!(e.roots()[0].re_f64() < 0.0);
        assert!((e.roots()[1].re_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert!(e.roots()[1].report().re.starts_with("1.414213562373095048"));
        // bracket by exact rationals
        let lo = rat(14142135623, 10000000000);
        let hi = rat(14142135624, 10000000000);
        let r = &e.roots()[1];
        assert!(!r.contains_rational(&lo) && !r.contains_rational(&hi));
    }

    #[test]
    fn imaginary_unit() {
        let e = isolate_roots(&IntPoly::from_i64s(&[1, 0, 1]), 64).unwrap();
        assert!(e.roots()[0].contains(&rat(0, 1), &rat(-1, 1)));
        assert!(e.roots()[1].contains(&rat(0, 1), &rat(1, 1)));
        assert_eq!(e.roots()[0], e.roots()[1].conj());
    }

    #[test]
    fn root_count_is_degree() {
        for cs in [
            &[-1, -1, 0, 1][..],
            &[1, 0, -1, 0, 1],
            &[5, -3, 0, 2, 0, 1],
            &[-3, 0, 0, 0, 0, 0, 1],
            &[1, 1, 1, 1, 1, 1, 1, 1, 1],
        ] {
            let f = IntPoly::from_i64s(cs);
            let e = isolate_roots(&f, 64).unwrap();
            assert_eq!(e.degree(), f.degree().unwrap());
            assert!(pairwise_disjoint(e.roots()));
        }
    }

    #[test]
    fn rejects_repeated_roots() {
        let f = IntPoly::from_i64s(&[1, -2, 1]);
        assert_eq!(isolate_roots(&f, 64).unwrap_err(), Error::NotSquarefree);
    }

    #[test]
    fn refinement_shrinks_and_keeps_order() {
        let e = isolate_roots(&IntPoly::from_i64s(&[-1, -1, 0, 1]), 64).unwrap();
        let f = e.refine(128).unwrap();
        let g = f.refine(256).unwrap();
        for ((a, b), c) in e.roots().iter().zip(f.roots()).zip(g.roots()) {
            assert!(a.overlaps(b) && b.overlaps(c));
            assert!(b.radius_exponent() < a.radius_exponent());
            assert!(c.radius_exponent() < b.radius_exponent());
        }
    }

    #[test]
    fn tau_length_and_translation() {
        let k = field(&[-1, -1, 0, 1]);
        let e = EmbeddingSet::for_field(&k, 64).unwrap();
        let a = FieldElement::generator(&k);
        let b = &FieldElement::from_integer(&k, 3) - &a;
        let ta = tau_tuple(&a, &e).unwrap();
        let tb = tau_tuple(&b, &e).unwrap();
        assert_eq!(ta.len(), 1);
        assert!(tau_overlap(&ta, &tb));
        assert!(l_equivalence(&a, &b).unwrap().is_some());

        let sq = &a * &a;
        assert!(!tau_overlap(&ta, &tau_tuple(&sq, &e).unwrap()));
        assert!(l_equivalence(&a, &sq).unwrap().is_none());
    }

    #[test]
    fn tau_needs_generator() {
        let k = field(&[-2, 0, 0, 0, 1]);
        let e = EmbeddingSet::for_field(&k, 64).unwrap();
        let a = FieldElement::generator(&k);
        assert_eq!(tau_tuple(&(&a * &a), &e).unwrap_err(), Error::NotAGenerator);
    }

    #[test]
    fn epsilon_affine_pairs() {
        let k = field(&[-2, 0, 0, 0, 1]);
        let e = EmbeddingSet::for_field(&k, 64).unwrap();
        let a = FieldElement::generator(&k);
        let s = epsilon_system(&a, &a, &e).unwrap();
        let b = &(&a * &FieldElement::from_integer(&k, 2)) + &FieldElement::from_integer(&k, 5);
        let t = epsilon_system(&a, &b, &e).unwrap();
        for i in 0..4 {
            for j in (0..4).filter(|&j| j != i) {
                assert!(s.get(i, j).contains_rational(&BigRational::one()));
                assert!(t.get(i, j).contains_rational(&rat(1, 2)));
                assert!(!t
                    .get(i, j)
                    .contains_rational(&(rat(1, 2) + rat(1, 1 << 30))));
                assert_eq!(t.get(i, j), t.get(j, i));
            }
        }
    }

    #[test]
    fn unit_and_inverse_square_product() {
        let k = field(&[-1, -1, 0, 1]);
        let e = EmbeddingSet::for_field(&k, 64).unwrap();
        let u = FieldElement::generator(&k);
        let v = u.inv().unwrap();
        let s = epsilon_system(&u, &v, &e).unwrap();
        let q = exact_disc_ratio(&u, &v).unwrap();
        assert!(q.abs().is_one());
        assert!(s.square_product().contains_rational(&q));
        let report = check_eps_identities(&s, &e).unwrap();
        assert!(report.holds());
        assert_eq!(report.triangle.instances, 6);
        assert!(report.quadrilateral.is_none());
    }

    #[test]
    fn quartic_type_two_identities() {
        let fam = crate::families::type2_setup(0, 1).unwrap();
        let m = crate::families::type2_member(&fam, 0).unwrap();
        let e = EmbeddingSet::for_field(&fam.field, 64).unwrap();
        let s = epsilon_system(&m.alpha, &m.beta, &e).unwrap();
        let report = check_eps_identities(&s, &e).unwrap();
        assert!(report.holds());
        assert_eq!(report.quadrilateral.as_ref().unwrap().instances, 24);
        assert!(matches!(
            report.distinct_ratios,
            InequalityCheck::Certified { .. }
        ));
        assert!(s
            .square_product()
            .contains_rational(&exact_disc_ratio(&m.alpha, &m.beta).unwrap()));
    }

    #[test]
    fn z_equivalent_pair_skips_inequality() {
        let k = field(&[1, 0, 0, 1, 1]);
        let e = EmbeddingSet::for_field(&k, 64).unwrap();
        let a = FieldElement::generator(&k);
        let b = &a + &FieldElement::one(&k);
        let s = epsilon_system(&a, &b, &e).unwrap();
        let r = check_eps_identities(&s, &e).unwrap();
        assert!(matches!(r.distinct_ratios, InequalityCheck::Skipped { .. }));
    }
}
