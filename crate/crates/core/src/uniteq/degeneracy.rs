//! Degeneracy witnesses: exponent vectors `c` with
//! `f(x1·T^c1, …, xn·T^cn) ≡ 0`, and the two-sided product identities
//! `∏(1 − xᵢT^cᵢ) ≡ z·T^e·∏(1 − yⱼT^dⱼ)`.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap};
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::ShellIter;
use crate::error::{Error, Result};
use crate::numfield::{same_field, FieldElement, NumberField};

/// Sparse polynomial over K in `nvars` variables.
#[derive(Clone, Debug)]
pub struct MultiPoly {
    field: Arc<NumberField>,
    nvars: usize,
    terms: Vec<(Vec<u32>, FieldElement)>,
}

impl MultiPoly {
    /// Collects like monomials and drops zero coefficients.
    pub fn new(
        field: &Arc<NumberField>,
        nvars: usize,
        terms: Vec<(Vec<u32>, FieldElement)>,
    ) -> Result<Self> {
        let mut acc: BTreeMap<Vec<u32>, FieldElement> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::PreconditionFailed("exponent length mismatch".into()));
            }
            if !same_field(field, c.field()) {
                return Err(Error::FieldMismatch);
            }
            let slot = acc.entry(e).or_insert_with(|| FieldElement::zero(field));
            *slot = &*slot + &c;
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(MultiPoly {
            field: field.clone(),
            nvars,
            terms,
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Vec<u32>, FieldElement)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `X_i − X_j` (0-based indices).
    pub fn difference(field: &Arc<NumberField>, nvars: usize, i: usize, j: usize) -> Result<Self> {
        let mut a = vec![0; nvars];
        a[i] = 1;
        let mut b = vec![0; nvars];
        b[j] = 1;
        Self::new(
            field,
            nvars,
            vec![
                (a, FieldElement::one(field)),
                (b, -&FieldElement::one(field)),
            ],
        )
    }

    /// `Σ aᵢ·Xᵢ − 1`.
    pub fn linear(field: &Arc<NumberField>, a: &[FieldElement]) -> Result<Self> {
        let n = a.len();
        let mut terms: Vec<(Vec<u32>, FieldElement)> = a
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut e = vec![0; n];
                e[i] = 1;
                (e, c.clone())
            })
            .collect();
        terms.push((vec![0; n], -&FieldElement::one(field)));
        Self::new(field, n, terms)
    }

    /// `(X1−1)(X2−1)(X3−1) − (X4−1)(X5−1)(X6−1)`.
    pub fn sextic(field: &Arc<NumberField>) -> Self {
        let one = FieldElement::one(field);
        let mut terms = Vec::new();
        for side in 0..2 {
            let sign = if side == 0 { one.clone() } else { -&one };
            for mask in 0u32..8 {
                let mut e = vec![0u32; 6];
                let mut c = sign.clone();
                for b in 0..3 {
                    if mask >> b & 1 == 1 {
                        e[3 * side + b] = 1;
                    } else {
                        c = -&c;
                    }
                }
                terms.push((e, c));
            }
        }
        Self::new(field, 6, terms).expect("well-formed")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegeneracyWitness {
    pub c: Vec<i64>,
}

/// First `c` in the search order with `f(xᵢ·T^cᵢ) ≡ 0`, or `None` in the box.
///
/// Search order: max-norm shells `1..=B`, then simplest entries first,
/// first nonzero entry positive (`c` and `−c` are equivalent).
pub fn detect_degeneracy(
    f: &MultiPoly,
    point: &[FieldElement],
    bound: u32,
) -> Result<Option<DegeneracyWitness>> {
    if f.is_zero() {
        return Err(Error::PreconditionFailed("f is zero".into()));
    }
    if point.len() != f.nvars {
        return Err(Error::PreconditionFailed(
            "point has wrong dimension".into(),
        ));
    }
    if point.iter().any(|x| x.is_zero()) {
        return Err(Error::PreconditionFailed(
            "point has a zero coordinate".into(),
        ));
    }
    // Each term's value at the point is independent of c.
    let values: Vec<FieldElement> = f
        .terms
        .iter()
        .map(|(e, c)| {
            e.iter().zip(point).fold(c.clone(), |acc, (&k, x)| {
                &acc * &x.pow(k as i64).expect("nonzero")
            })
        })
        .collect();
    let exps: Vec<Vec<i64>> = f
        .terms
        .iter()
        .map(|(e, _)| e.iter().map(|&k| k as i64).collect())
        .collect();
    let nt = exps.len();
    let mut degs = vec![0i64; nt];
    for s in 1..=bound {
        for c in ShellIter::new(f.nvars, s, true) {
            for (d, e) in degs.iter_mut().zip(&exps) {
                *d = e.iter().zip(&c).map(|(a, b)| a * b).sum();
            }
            // Every term must share its T-degree with another one.
            let paired = (0..nt).all(|t| (0..nt).any(|u| u != t && degs[u] == degs[t]));
            if !paired {
                continue;
            }
            let mut groups: BTreeMap<i64, FieldElement> = BTreeMap::new();
            for (d, v) in degs.iter().zip(&values) {
                let slot = groups
                    .entry(*d)
                    .or_insert_with(|| FieldElement::zero(&f.field));
                *slot = &*slot + v;
            }
            if groups.values().all(FieldElement::is_zero) {
                return Ok(Some(DegeneracyWitness { c }));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma62Witness {
    pub c: Vec<i64>,
    pub d: Vec<i64>,
    pub e: i64,
}

/// Laurent polynomial as exponent → nonzero coefficient.
type Laurent = BTreeMap<i64, FieldElement>;

fn binomial_product(xs: &[FieldElement], cs: &[i64], field: &Arc<NumberField>) -> Laurent {
    let mut p: Laurent = BTreeMap::from([(0, FieldElement::one(field))]);
    for (x, &c) in xs.iter().zip(cs) {
        let mut next = p.clone();
        for (k, v) in &p {
            let slot = next
                .entry(k + c)
                .or_insert_with(|| FieldElement::zero(field));
            *slot = &*slot - &(v * x);
        }
        next.retain(|_, v| !v.is_zero());
        p = next;
    }
    p
}

/// `(lowest coefficient, lowest exponent, p / (coef·T^exp))`.
struct Normalized {
    lead: FieldElement,
    shift: i64,
    shape: Vec<(i64, FieldElement)>,
    hash: u64,
}

fn normalize(p: &Laurent) -> Normalized {
    let (&shift, lead) = p.iter().next().expect("nonzero product");
    let inv = lead.inv().expect("nonzero");
    let shape: Vec<(i64, FieldElement)> = p.iter().map(|(k, v)| (k - shift, v * &inv)).collect();
    let mut h = DefaultHasher::new();
    shape.hash(&mut h);
    Normalized {
        lead: lead.clone(),
        shift,
        hash: h.finish(),
        shape,
    }
}

/// Exponent vectors with every entry in `[−B, B] \ {0}`, in odometer order.
fn all_nonzero(n: usize, bound: i64) -> Vec<Vec<i64>> {
    let vals: Vec<i64> = (-bound..=bound).filter(|&v| v != 0).collect();
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                vals.iter().map(move |&x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Witness `(c, d, e)` with all `cᵢ, dⱼ` nonzero and
/// `∏(1 − xᵢT^cᵢ) ≡ z·T^e·∏(1 − yⱼT^dⱼ)`, given that
/// `∏(1 − xᵢ) = z·∏(1 − yⱼ)` holds.
pub fn lemma62_witness(
    x: &[FieldElement],
    y: &[FieldElement],
    z: &FieldElement,
    bound: u32,
) -> Result<Option<Lemma62Witness>> {
    let field = z.field().clone();
    if x.is_empty() && y.is_empty() {
        return Err(Error::PreconditionFailed("m + n must be positive".into()));
    }
    if x.iter().chain(y).any(|v| !same_field(&field, v.field())) {
        return Err(Error::FieldMismatch);
    }
    let one = FieldElement::one(&field);
    let lhs = x.iter().fold(one.clone(), |acc, v| &acc * &(&one - v));
    let rhs = y.iter().fold(z.clone(), |acc, v| &acc * &(&one - v));
    if lhs != rhs {
        return Err(Error::PreconditionFailed(
            "(1-x1)...(1-xm) != z(1-y1)...(1-yn)".into(),
        ));
    }
    let b = bound as i64;
    let left: HashMap<Vec<i64>, Normalized> = all_nonzero(x.len(), b)
        .into_iter()
        .map(|c| {
            let n = normalize(&binomial_product(x, &c, &field));
            (c, n)
        })
        .collect();
    let right: HashMap<Vec<i64>, Normalized> = all_nonzero(y.len(), b)
        .into_iter()
        .map(|d| {
            let n = normalize(&binomial_product(y, &d, &field));
            (d, n)
        })
        .collect();
    let m = x.len();
    for s in 1..=bound {
        for cd in ShellIter::new(m + y.len(), s, false) {
            let (c, d) = cd.split_at(m);
            let l = &left[c];
            let r = &right[d];
            if l.hash != r.hash || l.shape != r.shape {
                continue;
            }
            if &l.lead.try_div(&r.lead)? == z {
                return Ok(Some(Lemma62Witness {
                    c: c.to_vec(),
                    d: d.to_vec(),
                    e: l.shift - r.shift,
                }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::IntPoly;

    fn zeta12() -> Arc<NumberField> {
        NumberField::new(IntPoly::from_i64s(&[1, 0, -1, 0, 1])).unwrap()
    }

    /// (u⁶, iu³, −iu³) and (u⁴, ρu⁴, ρ²u⁴) in ℚ(ζ₁₂) with i = ζ³, ρ = ζ⁴.
    fn family_point(u: i64) -> (Vec<FieldElement>, Vec<FieldElement>) {
        let k = zeta12();
        let z = FieldElement::generator(&k);
        let i = z.pow(3).unwrap();
        let rho = z.pow(4).unwrap();
        let u = FieldElement::from_integer(&k, u);
        let u3 = u.pow(3).unwrap();
        let u4 = u.pow(4).unwrap();
        let x = vec![u.pow(6).unwrap(), &i * &u3, -&(&i * &u3)];
        let y = vec![u4.clone(), &rho * &u4, &(&rho * &rho) * &u4];
        (x, y)
    }

    #[test]
    fn difference_witness() {
        let k = NumberField::new(IntPoly::from_i64s(&[-2, 0, 1])).unwrap();
        let x = FieldElement::from_i64s(&k, &[3, 1]);
        let f = MultiPoly::difference(&k, 2, 0, 1).unwrap();
        let w = detect_degeneracy(&f, &[x.clone(), x], 3).unwrap();
        assert_eq!(w, Some(DegeneracyWitness { c: vec![1, 1] }));
    }

    #[test]
    fn sextic_family_witness() {
        let (x, y) = family_point(2);
        let k = x[0].field().clone();
        let point: Vec<FieldElement> = x.iter().chain(&y).cloned().collect();
        let w = detect_degeneracy(&MultiPoly::sextic(&k), &point, 6).unwrap();
        assert_eq!(
            w,
            Some(DegeneracyWitness {
                c: vec![6, 3, 3, 4, 4, 4]
            })
        );
        assert_eq!(
            detect_degeneracy(&MultiPoly::sextic(&k), &point, 5).unwrap(),
            None
        );
    }

    #[test]
    fn golden_linear_point_is_nondegenerate() {
        let k = NumberField::new(IntPoly::from_i64s(&[-1, -1, 1])).unwrap();
        let phi = FieldElement::generator(&k);
        let one = FieldElement::one(&k);
        let f = MultiPoly::linear(&k, &[one.clone(), one]).unwrap();
        let point = [phi.clone(), -&phi.inv().unwrap()];
        assert_eq!(detect_degeneracy(&f, &point, 6).unwrap(), None);
    }

    #[test]
    fn witness_monotone_in_box() {
        let (x, y) = family_point(3);
        let k = x[0].field().clone();
        let point: Vec<FieldElement> = x.iter().chain(&y).cloned().collect();
        let f = MultiPoly::sextic(&k);
        let w6 = detect_degeneracy(&f, &point, 6).unwrap();
        let w7 = detect_degeneracy(&f, &point, 7).unwrap();
        assert!(w6.is_some());
        assert_eq!(w6, w7);
    }

    #[test]
    fn lemma62_examples() {
        let k = zeta12();
        let one = FieldElement::one(&k);
        let a = FieldElement::from_integer(&k, 2);
        let b = FieldElement::from_i64s(&k, &[0, 1, 0, 0]);
        let c = FieldElement::from_integer(&k, -5);
        let w = lemma62_witness(
            &[a.clone(), b.clone(), c.clone()],
            &[c.clone(), a.clone(), b.clone()],
            &one,
            2,
        )
        .unwrap();
        assert_eq!(
            w,
            Some(Lemma62Witness {
                c: vec![1, 1, 1],
                d: vec![1, 1, 1],
                e: 0
            })
        );

        let (x, y) = family_point(2);
        let w = lemma62_witness(&x, &y, &one, 6).unwrap();
        assert_eq!(
            w,
            Some(Lemma62Witness {
                c: vec![6, 3, 3],
                d: vec![4, 4, 4],
                e: 0
            })
        );

        let q = NumberField::rationals();
        let two = FieldElement::from_integer(&q, 2);
        let m1 = FieldElement::from_integer(&q, -1);
        assert_eq!(
            lemma62_witness(std::slice::from_ref(&two), &[], &m1, 6).unwrap(),
            None
        );
        assert!(matches!(
            lemma62_witness(&[two], &[], &FieldElement::one(&q), 2),
            Err(Error::PreconditionFailed(_))
        ));
    }
}
