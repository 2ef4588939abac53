//! Box-bounded unit equations over a finitely generated group Γ ⊂ K*.
//!
//! Every search here is complete only inside its exponent box; nothing is
//! claimed about solutions outside it.

mod degeneracy;
mod sextic;
mod shell;

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numfield::{same_field, FieldElement, NumberField};

pub use degeneracy::{
    detect_degeneracy, lemma62_witness, DegeneracyWitness, Lemma62Witness, MultiPoly,
};
pub use sextic::{solve_sextic, SexticReport, SexticSolution};
pub use shell::ShellIter;

pub const DEFAULT_ELEMENT_CAP: usize = 200_000;

/// Γ given by explicit generators; torsion must be listed among them.
#[derive(Clone, Debug)]
pub struct UnitGroup {
    field: Arc<NumberField>,
    generators: Vec<FieldElement>,
}

impl UnitGroup {
    pub fn new(field: &Arc<NumberField>, generators: Vec<FieldElement>) -> Result<Self> {
        for g in &generators {
            if !same_field(field, g.field()) {
                return Err(Error::FieldMismatch);
            }
            if g.is_zero() {
                return Err(Error::ZeroDivision);
            }
        }
        Ok(UnitGroup {
            field: field.clone(),
            generators,
        })
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn generators(&self) -> &[FieldElement] {
        &self.generators
    }
}

/// A group element with the exponent vector that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    pub value: FieldElement,
    pub exponents: Vec<i64>,
}

fn l1(v: &[i64]) -> u64 {
    v.iter().map(|x| x.unsigned_abs()).sum()
}

/// All products `∏ gᵢ^{eᵢ}` with `|eᵢ| ≤ B`, one per distinct value.
///
/// The exponent vector kept for a value is the one of least ℓ¹ norm, ties
/// broken lexicographically; the output is sorted lexicographically by
/// these vectors.
pub fn group_enumerate(g: &UnitGroup, bound: u32, cap: usize) -> Result<Vec<GroupElement>> {
    let n = g.generators.len();
    let side = 2 * bound as u128 + 1;
    let size = side.checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > cap as u128 {
        return Err(Error::BoxTooLarge { size, cap });
    }
    let b = bound as i64;
    let powers: Vec<Vec<FieldElement>> = g
        .generators
        .iter()
        .map(|x| (-b..=b).map(|e| x.pow(e)).collect::<Result<_>>())
        .collect::<Result<_>>()?;

    // Build products generator by generator; prefix order is lexicographic.
    let mut layer = vec![(FieldElement::one(&g.field), Vec::<i64>::new())];
    for (i, pw) in powers.iter().enumerate() {
        let mut next = Vec::with_capacity(layer.len() * pw.len());
        for (val, exps) in &layer {
            for (k, p) in pw.iter().enumerate() {
                let mut e = exps.clone();
                e.push(k as i64 - b);
                next.push((val * p, e));
            }
        }
        layer = next;
        debug_assert_eq!(layer.first().map(|x| x.1.len()), Some(i + 1));
    }

    let mut best: HashMap<FieldElement, Vec<i64>> = HashMap::new();
    for (val, exps) in layer {
        match best.get_mut(&val) {
            Some(cur) => {
                if l1(&exps) < l1(cur) {
                    *cur = exps;
                }
            }
            None => {
                best.insert(val, exps);
            }
        }
    }
    let mut out: Vec<GroupElement> = best
        .into_iter()
        .map(|(value, exponents)| GroupElement { value, exponents })
        .collect();
    out.sort_by(|a, b| a.exponents.cmp(&b.exponents));
    Ok(out)
}

/// Solutions `(x, y)` of `a1·x + a2·y = 1` with `x, y` in the box.
pub fn solve_linear_unit_eq(
    a1: &FieldElement,
    a2: &FieldElement,
    g: &UnitGroup,
    bound: u32,
    cap: usize,
) -> Result<Vec<(GroupElement, GroupElement)>> {
    if a1.is_zero() || a2.is_zero() {
        return Err(Error::PreconditionFailed(
            "coefficients must be nonzero".into(),
        ));
    }
    if !same_field(a1.field(), &g.field) || !same_field(a2.field(), &g.field) {
        return Err(Error::FieldMismatch);
    }
    let elems = group_enumerate(g, bound, cap)?;
    let index: HashMap<&FieldElement, usize> = elems
        .iter()
        .enumerate()
        .map(|(i, e)| (&e.value, i))
        .collect();
    let one = FieldElement::one(&g.field);
    let a2_inv = a2.inv()?;
    let mut out = Vec::new();
    for x in &elems {
        let y = &(&one - &(a1 * &x.value)) * &a2_inv;
        if let Some(&j) = index.get(&y) {
            out.push((x.clone(), elems[j].clone()));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::IntPoly;

    pub(crate) fn golden() -> (Arc<NumberField>, UnitGroup) {
        let k = NumberField::new(IntPoly::from_i64s(&[-1, -1, 1])).unwrap();
        let phi = FieldElement::generator(&k);
        let g = UnitGroup::new(&k, vec![FieldElement::from_integer(&k, -1), phi]).unwrap();
        (k, g)
    }

    #[test]
    fn enumerate_examples() {
        let (_, g) = golden();
        assert_eq!(
            group_enumerate(&g, 2, DEFAULT_ELEMENT_CAP).unwrap().len(),
            10
        );

        let q = NumberField::rationals();
        let g = UnitGroup::new(
            &q,
            vec![
                FieldElement::from_integer(&q, 2),
                FieldElement::from_integer(&q, 3),
            ],
        )
        .unwrap();
        assert_eq!(
            group_enumerate(&g, 1, DEFAULT_ELEMENT_CAP).unwrap().len(),
            9
        );

        let m1 = FieldElement::from_integer(&q, -1);
        let g = UnitGroup::new(&q, vec![m1.clone(), m1]).unwrap();
        let e = group_enumerate(&g, 1, DEFAULT_ELEMENT_CAP).unwrap();
        let vals: Vec<String> = e.iter().map(|x| x.value.to_string()).collect();
        assert_eq!(vals, ["-1", "1"]);
        assert_eq!(e[1].exponents, [0, 0]);
    }

    #[test]
    fn box_cap() {
        let (_, g) = golden();
        assert!(matches!(
            group_enumerate(&g, 10, 100),
            Err(Error::BoxTooLarge {
                size: 441,
                cap: 100
            })
        ));
    }

    #[test]
    fn linear_golden_ratio() {
        let (k, g) = golden();
        let one = FieldElement::one(&k);
        let sols = solve_linear_unit_eq(&one, &one, &g, 3, DEFAULT_ELEMENT_CAP).unwrap();
        assert_eq!(sols.len(), 6);
        let phi = FieldElement::generator(&k);
        let pinv = phi.inv().unwrap();
        let expected = [
            (phi.clone(), -&pinv),
            (-&pinv, phi.clone()),
            (pinv.clone(), &pinv * &pinv),
            (&pinv * &pinv, pinv.clone()),
            (&phi * &phi, -&phi),
            (-&phi, &phi * &phi),
        ];
        for (x, y) in &expected {
            assert!(sols.iter().any(|(a, b)| &a.value == x && &b.value == y));
        }
        for (x, y) in &sols {
            assert!((&x.value + &y.value).is_one());
        }
    }

    #[test]
    fn linear_torsion_only() {
        let q = NumberField::rationals();
        let g = UnitGroup::new(&q, vec![FieldElement::from_integer(&q, -1)]).unwrap();
        let one = FieldElement::one(&q);
        assert!(solve_linear_unit_eq(&one, &one, &g, 1, 10)
            .unwrap()
            .is_empty());
        let two = FieldElement::from_integer(&q, 2);
        let three = FieldElement::from_integer(&q, 3);
        let sols = solve_linear_unit_eq(&two, &three, &g, 1, 10).unwrap();
        assert_eq!(sols.len(), 1);
        assert_eq!(sols[0].0.value.to_string(), "-1");
        assert_eq!(sols[0].1.value.to_string(), "1");
    }

    /// Naive double loop over the box.
    #[test]
    fn linear_matches_naive() {
        let (k, g) = golden();
        let a1 = FieldElement::from_i64s(&k, &[2, 1]);
        let a2 = FieldElement::from_i64s(&k, &[-1, 1]);
        for b in 1..=4 {
            let elems = group_enumerate(&g, b, DEFAULT_ELEMENT_CAP).unwrap();
            let mut naive = Vec::new();
            for x in &elems {
                for y in &elems {
                    if (&(&a1 * &x.value) + &(&a2 * &y.value)).is_one() {
                        naive.push((x.clone(), y.clone()));
                    }
                }
            }
            let fast = solve_linear_unit_eq(&a1, &a2, &g, b, DEFAULT_ELEMENT_CAP).unwrap();
            assert_eq!(fast, naive, "B = {b}");
        }
    }

    #[test]
    fn linear_stable_under_box_growth() {
        let (k, g) = golden();
        let one = FieldElement::one(&k);
        let small = solve_linear_unit_eq(&one, &one, &g, 3, DEFAULT_ELEMENT_CAP).unwrap();
        let large = solve_linear_unit_eq(&one, &one, &g, 8, DEFAULT_ELEMENT_CAP).unwrap();
        let vals = |s: &[(GroupElement, GroupElement)]| {
            s.iter()
                .map(|(x, y)| (x.value.clone(), y.value.clone()))
                .collect::<Vec<_>>()
        };
        assert_eq!(vals(&small), vals(&large));
    }
}
