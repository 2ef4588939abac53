//! JSON documents for polynomials, field elements and orders.
//!
//! * polynomial: array of decimal strings, constant term first;
//! * element: `{"field": <polynomial>, "coords": ["a" | "a/b", …]}`;
//! * order: `{"min_poly": <polynomial>, "den": "n", "hnf_basis": [[…], …]}`.
//!
//! Integers are also accepted as bare JSON numbers. Unknown fields are
//! rejected.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{IntMatrix, IntPoly};
use crate::numfield::{FieldElement, NumberField};
use crate::orders::OrderLattice;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Text(String),
    Int(i64),
}

impl Num {
    fn text(&self) -> String {
        match self {
            Num::Text(s) => s.trim().to_string(),
            Num::Int(n) => n.to_string(),
        }
    }

    pub fn to_int(&self) -> Result<BigInt> {
        let s = self.text();
        s.parse()
            .map_err(|_| Error::Parse(format!("{s:?} is not an integer")))
    }

    pub fn to_rational(&self) -> Result<BigRational> {
        let s = self.text();
        let bad = || Error::Parse(format!("{s:?} is not a rational number"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(BigRational::new(n, d))
            }
            None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
        }
    }
}

fn int_str(n: &BigInt) -> Num {
    Num::Text(n.to_string())
}

fn rat_str(q: &BigRational) -> Num {
    if q.is_integer() {
        Num::Text(q.numer().to_string())
    } else {
        Num::Text(format!("{}/{}", q.numer(), q.denom()))
    }
}

pub fn poly_doc(f: &IntPoly) -> Vec<Num> {
    f.coeffs().iter().map(int_str).collect()
}

pub fn poly_from_doc(doc: &[Num]) -> Result<IntPoly> {
    Ok(IntPoly::new(
        doc.iter().map(Num::to_int).collect::<Result<_>>()?,
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementDoc {
    pub field: Vec<Num>,
    pub coords: Vec<Num>,
}

impl ElementDoc {
    pub fn of(x: &FieldElement) -> Self {
        ElementDoc {
            field: poly_doc(x.field().min_poly()),
            coords: x.coords().iter().map(rat_str).collect(),
        }
    }

    /// Builds the element in `field` if given, else in a fresh field.
    pub fn to_element(&self, field: Option<&Arc<NumberField>>) -> Result<FieldElement> {
        let f = poly_from_doc(&self.field)?;
        let k = match field {
            Some(k) if k.min_poly() == &f => k.clone(),
            Some(_) => return Err(Error::FieldMismatch),
            None => NumberField::new(f)?,
        };
        let coords: Vec<BigRational> = self
            .coords
            .iter()
            .map(Num::to_rational)
            .collect::<Result<_>>()?;
        if coords.len() != k.degree() {
            return Err(Error::Parse(format!(
                "expected {} coordinates, got {}",
                k.degree(),
                coords.len()
            )));
        }
        FieldElement::new(&k, &coords)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderDoc {
    pub min_poly: Vec<Num>,
    pub den: Num,
    pub hnf_basis: Vec<Vec<Num>>,
}

impl OrderDoc {
    pub fn of(o: &OrderLattice) -> Self {
        OrderDoc {
            min_poly: poly_doc(o.field().min_poly()),
            den: int_str(o.den()),
            hnf_basis: o
                .basis()
                .to_rows()
                .iter()
                .map(|r| r.iter().map(int_str).collect())
                .collect(),
        }
    }

    /// The lattice spanned by the given rows; they need not be in normal form.
    pub fn to_order(&self, field: Option<&Arc<NumberField>>) -> Result<OrderLattice> {
        let f = poly_from_doc(&self.min_poly)?;
        let k = match field {
            Some(k) if k.min_poly() == &f => k.clone(),
            Some(_) => return Err(Error::FieldMismatch),
            None => NumberField::new(f)?,
        };
        let d = k.degree();
        let den = self.den.to_int()?;
        if !den.is_positive() {
            return Err(Error::Parse("den must be positive".into()));
        }
        if self.hnf_basis.len() != d || self.hnf_basis.iter().any(|r| r.len() != d) {
            return Err(Error::Parse(format!("hnf_basis must be {d}x{d}")));
        }
        let rows: Vec<Vec<BigInt>> = self
            .hnf_basis
            .iter()
            .map(|r| r.iter().map(Num::to_int).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        if IntMatrix::from_rows(rows.clone()).det().is_zero() {
            return Err(Error::Parse("hnf_basis is singular".into()));
        }
        let elems: Vec<FieldElement> = rows
            .iter()
            .map(|r| {
                let coords: Vec<BigRational> = r
                    .iter()
                    .map(|x| BigRational::new(x.clone(), den.clone()))
                    .collect();
                FieldElement::new(&k, &coords)
            })
            .collect::<Result<_>>()?;
        Ok(OrderLattice::from_spanning_set(&k, &elems))
    }
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_round_trip() {
        let k = NumberField::from_i64s(&[-1, -1, 0, 1]).unwrap();
        let x = FieldElement::new(
            &k,
            &[
                BigRational::new(1.into(), 2.into()),
                BigRational::from_integer((-3).into()),
                BigRational::zero(),
            ],
        )
        .unwrap();
        let doc = ElementDoc::of(&x);
        let s = serde_json::to_string(&doc).unwrap();
        assert_eq!(
            s,
            r#"{"field":["-1","-1","0","1"],"coords":["1/2","-3","0"]}"#
        );
        let back: ElementDoc = parse_json(&s).unwrap();
        assert_eq!(back.to_element(Some(&k)).unwrap(), x);
    }

    #[test]
    fn order_round_trip() {
        let k = NumberField::from_i64s(&[-1, -1, 0, 1]).unwrap();
        let a = FieldElement::from_i64s(&k, &[0, 2, 1]);
        let o = OrderLattice::from_generator(&a).unwrap();
        let s = serde_json::to_string(&OrderDoc::of(&o)).unwrap();
        let back: OrderDoc = parse_json(&s).unwrap();
        assert_eq!(back.to_order(None).unwrap(), o);
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(
            parse_json::<OrderDoc>(r#"{"min_poly":[1],"den":1,"hnf_basis":[],"x":1}"#).is_err()
        );
        assert!(parse_json::<OrderDoc>("{").is_err());
        let doc: OrderDoc = parse_json(
            r#"{"min_poly":["-2","0","1"],"den":"1","hnf_basis":[["1","0"],["2","0"]]}"#,
        )
        .unwrap();
        assert!(doc.to_order(None).is_err());
        let doc: ElementDoc = parse_json(r#"{"field":[-2,0,1],"coords":["1/0","1"]}"#).unwrap();
        assert!(doc.to_element(None).is_err());
    }
}
