//! Exact arithmetic in K = ℚ[X]/(f) for a monic irreducible integer `f`.
//!
//! Elements are stored as an integer coordinate vector on the power basis
//! `1, θ, …, θ^{d−1}` over a common positive denominator, kept in lowest
//! terms. Because `f` is monic with integer coefficients, reduction of an
//! integer polynomial modulo `f` stays integral, so multiplication never
//! touches rationals until the final normalisation.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::matrix::{solve_left, IntMatrix};
use crate::exact::{is_irreducible_q, IntPoly, RatPoly};

#[derive(Debug, PartialEq, Eq, Hash)]
pub struct NumberField {
    min_poly: IntPoly,
    degree: usize,
}

impl NumberField {
    /// Validate `f` (monic, irreducible over ℚ) and build the field.
    ///
    /// Degree one is accepted only for `f = x`, which gives ℚ itself.
    pub fn new(f: IntPoly) -> Result<Arc<NumberField>> {
        let d = f.degree().unwrap_or(0);
        if d == 0 {
            return Err(Error::InvalidField("constant polynomial".into()));
        }
        if !f.is_monic() {
            return Err(Error::InvalidField(format!("{f} is not monic")));
        }
        if d == 1 {
            if !f.coeff(0).is_zero() {
                return Err(Error::InvalidField(
                    "use x as the defining polynomial of Q".into(),
                ));
            }
        } else if !is_irreducible_q(&f)? {
            return Err(Error::InvalidField(format!("{f} is reducible over Q")));
        }
        Ok(Arc::new(NumberField {
            min_poly: f,
            degree: d,
        }))
    }

    pub fn from_i64s(cs: &[i64]) -> Result<Arc<NumberField>> {
        Self::new(IntPoly::from_i64s(cs))
    }

    /// ℚ as the degree-one field ℚ[X]/(X).
    pub fn rationals() -> Arc<NumberField> {
        Arc::new(NumberField {
            min_poly: IntPoly::x(),
            degree: 1,
        })
    }

    pub fn min_poly(&self) -> &IntPoly {
        &self.min_poly
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Reduce an integer coefficient vector modulo the monic minimal polynomial.
    fn reduce_int(&self, mut v: Vec<BigInt>) -> Vec<BigInt> {
        let d = self.degree;
        let f = self.min_poly.coeffs();
        while v.len() > d {
            let top = v.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let shift = v.len() - d;
            for (i, fi) in f.iter().take(d).enumerate() {
                v[shift + i] -= &top * fi;
            }
        }
        v.resize(d, BigInt::zero());
        v
    }
}

impl fmt::Display for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[x]/({})", self.min_poly)
    }
}

#[derive(Clone, Debug)]
pub struct FieldElement {
    field: Arc<NumberField>,
    num: Vec<BigInt>,
    den: BigInt,
}

pub fn same_field(a: &Arc<NumberField>, b: &Arc<NumberField>) -> bool {
    Arc::ptr_eq(a, b) || a.min_poly == b.min_poly
}

impl FieldElement {
    fn normalized(field: Arc<NumberField>, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        debug_assert!(!den.is_zero());
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -std::mem::take(c);
            }
        }
        let g = num.iter().fold(den.clone(), |g, c| g.gcd(c));
        if !g.is_one() {
            for c in num.iter_mut() {
                *c = &*c / &g;
            }
            den /= &g;
        }
        FieldElement { field, num, den }
    }

    pub fn new(field: &Arc<NumberField>, coords: &[BigRational]) -> Result<Self> {
        if coords.len() != field.degree {
            return Err(Error::PreconditionFailed(format!(
                "expected {} coordinates, got {}",
                field.degree,
                coords.len()
            )));
        }
        let den = coords.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let num = coords
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Ok(Self::normalized(field.clone(), num, den))
    }

    pub fn from_int_coords(field: &Arc<NumberField>, coords: &[BigInt]) -> Self {
        let mut num = coords.to_vec();
        num.resize(field.degree, BigInt::zero());
        Self::from_int_poly(field, &IntPoly::new(num))
    }

    pub fn from_i64s(field: &Arc<NumberField>, coords: &[i64]) -> Self {
        let cs: Vec<BigInt> = coords.iter().map(|&c| c.into()).collect();
        Self::from_int_coords(field, &cs)
    }

    /// Image of an integer polynomial under X ↦ θ.
    pub fn from_int_poly(field: &Arc<NumberField>, p: &IntPoly) -> Self {
        let num = field.reduce_int(p.coeffs().to_vec());
        Self::normalized(field.clone(), num, BigInt::one())
    }

    /// Image of a rational polynomial under X ↦ θ.
    pub fn from_rat_poly(field: &Arc<NumberField>, p: &RatPoly) -> Self {
        let den = p.denominator_lcm();
        let ints: Vec<BigInt> = p
            .coeffs()
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let num = field.reduce_int(ints);
        Self::normalized(field.clone(), num, den)
    }

    pub fn from_rational(field: &Arc<NumberField>, q: &BigRational) -> Self {
        let mut num = vec![BigInt::zero(); field.degree];
        num[0] = q.numer().clone();
        Self::normalized(field.clone(), num, q.denom().clone())
    }

    pub fn from_integer(field: &Arc<NumberField>, n: impl Into<BigInt>) -> Self {
        Self::from_rational(field, &BigRational::from_integer(n.into()))
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        Self::from_integer(field, 0)
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::from_integer(field, 1)
    }

    /// The class θ of X.
    pub fn generator(field: &Arc<NumberField>) -> Self {
        Self::from_int_poly(field, &IntPoly::x())
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.field.degree
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn coords(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    /// Coordinates if they are all integers.
    pub fn int_coords(&self) -> Option<&[BigInt]> {
        self.den.is_one().then_some(&self.num[..])
    }

    pub fn to_poly(&self) -> RatPoly {
        RatPoly::new(self.coords())
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// The rational value if the element lies in ℚ.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.num[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| BigRational::new(self.num[0].clone(), self.den.clone()))
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if same_field(&self.field, &other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let den = &self.den * &other.den;
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| a * &other.den + b * &self.den)
            .collect();
        Ok(Self::normalized(self.field.clone(), num, den))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let d = self.field.degree;
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let num = self.field.reduce_int(prod);
        Ok(Self::normalized(
            self.field.clone(),
            num,
            &self.den * &other.den,
        ))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let num = self.num.iter().map(|c| c * q.numer()).collect();
        Self::normalized(self.field.clone(), num, &self.den * q.denom())
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// the minimal polynomial.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDivision);
        }
        let f = self.field.min_poly.to_rat();
        let (g, s, _) = self.to_poly().ext_gcd(&f);
        debug_assert_eq!(g, RatPoly::one());
        Ok(Self::from_rat_poly(&self.field, &s))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        self.try_mul(&other.inv()?)
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Self::one(&self.field);
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &b;
            }
            k >>= 1;
            if k > 0 {
                b = &b * &b;
            }
        }
        Ok(acc)
    }

    /// Evaluate a rational polynomial at this element.
    pub fn eval_poly(&self, p: &RatPoly) -> Self {
        p.coeffs()
            .iter()
            .rev()
            .fold(Self::zero(&self.field), |acc, c| {
                &(&acc * self) + &Self::from_rational(&self.field, c)
            })
    }

    /// Integer matrix of multiplication by the numerator vector; row `j`
    /// holds the coordinates of `num · θ^j`.
    fn numerator_mul_matrix(&self) -> IntMatrix {
        let d = self.field.degree;
        let mut rows = Vec::with_capacity(d);
        let mut cur = self.num.clone();
        for _ in 0..d {
            rows.push(cur.clone());
            let mut shifted = vec![BigInt::zero()];
            shifted.extend(cur);
            cur = self.field.reduce_int(shifted);
        }
        IntMatrix::from_rows(rows)
    }

    /// Characteristic polynomial of multiplication by `self` on K as a
    /// ℚ-vector space (Faddeev–LeVerrier on the integer numerator matrix,
    /// then rescaled by the denominator).
    pub fn char_poly(&self) -> RatPoly {
        let m = self.numerator_mul_matrix();
        let c = faddeev_leverrier(&m);
        let d = self.field.degree;
        let coeffs = c
            .into_iter()
            .enumerate()
            .map(|(i, ci)| {
                let scale: BigInt = Pow::pow(&self.den, (d - i) as u32);
                BigRational::new(ci, scale)
            })
            .collect();
        RatPoly::new(coeffs)
    }

    /// Characteristic polynomial if it has integer coefficients.
    pub fn char_poly_int(&self) -> Option<IntPoly> {
        self.char_poly().to_int()
    }

    pub fn norm(&self) -> BigRational {
        let n = self.numerator_mul_matrix().det();
        let d = self.field.degree;
        BigRational::new(n, Pow::pow(&self.den, d as u32))
    }

    pub fn trace(&self) -> BigRational {
        let m = self.numerator_mul_matrix();
        let t = (0..m.rows()).fold(BigInt::zero(), |acc, i| acc + &m[(i, i)]);
        BigRational::new(t, self.den.clone())
    }

    /// True iff the element is an algebraic integer.
    pub fn is_integral(&self) -> bool {
        if self.den.is_one() {
            return true;
        }
        self.char_poly().to_int().is_some()
    }

    /// True iff ℚ(self) = K, tested by squarefreeness of the characteristic
    /// polynomial.
    pub fn is_generator(&self) -> bool {
        self.char_poly().is_squarefree()
    }

    /// The unique `F` of degree < d with `F(alpha) = self`.
    pub fn express_in_powers(&self, alpha: &Self) -> Result<RatPoly> {
        self.check_field(alpha)?;
        if !alpha.is_generator() {
            return Err(Error::NotAGenerator);
        }
        let d = self.field.degree;
        let mut rows = Vec::with_capacity(d);
        let mut cur = Self::one(&self.field);
        for _ in 0..d {
            rows.push(cur.coords());
            cur = &cur * alpha;
        }
        let sol = solve_left(&rows, &self.coords()).ok_or(Error::NotAGenerator)?;
        Ok(RatPoly::new(sol))
    }
}

/// Coefficients (constant first) of `det(X·I − A)` for an integer matrix.
pub(crate) fn faddeev_leverrier(a: &IntMatrix) -> Vec<BigInt> {
    let n = a.rows();
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut mk = IntMatrix::zeros(n, n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = mat_mul(a, &mk);
        for i in 0..n {
            next[(i, i)] += &c[n - k + 1];
        }
        mk = next;
        let am = mat_mul(a, &mk);
        let tr = (0..n).fold(BigInt::zero(), |acc, i| acc + &am[(i, i)]);
        let (q, r) = (-tr).div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero());
        c[n - k] = q;
    }
    c
}

fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.rows();
    let mut out = IntMatrix::zeros(n, b.cols());
    for i in 0..n {
        for k in 0..a.cols() {
            let aik = &a[(i, k)];
            if aik.is_zero() {
                continue;
            }
            for j in 0..b.cols() {
                out[(i, j)] += aik * &b[(k, j)];
            }
        }
    }
    out
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.den == other.den && self.num == other.num && same_field(&self.field, &other.field)
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

// Operator forms panic on mixed fields; use the `try_*` methods where the
// operands are not known to share a field.
impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.try_add(rhs).expect("field mismatch")
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.try_sub(rhs).expect("field mismatch")
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.try_mul(rhs).expect("field mismatch")
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = IntPoly::new(self.num.clone());
        if self.den.is_one() {
            write!(f, "{p}")
        } else if p.is_constant() {
            write!(f, "{}/{}", p.coeff(0), self.den)
        } else {
            write!(f, "({p})/{}", self.den)
        }
    }
}
