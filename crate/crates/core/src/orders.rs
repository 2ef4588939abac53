//! Orders ℤ[α] as lattices, and the equality / equivalence / Möbius tests
//! between two generators of the same order.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::matrix::{nullspace, IntMatrix};
use crate::exact::{discriminant, RatPoly};
use crate::numfield::{same_field, FieldElement, NumberField};

/// A full-rank ℤ-lattice in K stored as `(1/den) · rowspan(basis)` with the
/// basis in Hermite normal form and `den` minimal.
#[derive(Clone, Debug)]
pub struct OrderLattice {
    field: Arc<NumberField>,
    den: BigInt,
    basis: IntMatrix,
}

impl OrderLattice {
    /// ℤ[α] for an integral generator α.
    pub fn from_generator(alpha: &FieldElement) -> Result<Self> {
        if !alpha.is_integral() {
            return Err(Error::NotIntegral);
        }
        if !alpha.is_generator() {
            return Err(Error::NotAGenerator);
        }
        let field = alpha.field().clone();
        let mut powers = Vec::with_capacity(field.degree());
        let mut cur = FieldElement::one(&field);
        for _ in 0..field.degree() {
            powers.push(cur.clone());
            cur = &cur * alpha;
        }
        Ok(Self::from_spanning_set(&field, &powers))
    }

    /// The ℤ-span of the given elements, which must have full rank.
    pub fn from_spanning_set(field: &Arc<NumberField>, elems: &[FieldElement]) -> Self {
        let den = elems
            .iter()
            .fold(BigInt::one(), |l, e| l.lcm(e.denominator()));
        let rows = elems
            .iter()
            .map(|e| {
                let k = &den / e.denominator();
                e.numerators().iter().map(|c| c * &k).collect()
            })
            .collect();
        let mut basis = IntMatrix::from_rows(rows).hnf();
        let d = field.degree();
        let mut rows = basis.to_rows();
        rows.truncate(d);
        basis = IntMatrix::from_rows(rows);
        let g = (0..d)
            .flat_map(|i| basis.row(i).to_vec())
            .fold(den.clone(), |g, x| g.gcd(&x));
        let (den, basis) = if g.is_one() {
            (den, basis)
        } else {
            let rows = basis
                .to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(|x| x / &g).collect())
                .collect();
            (den / &g, IntMatrix::from_rows(rows))
        };
        OrderLattice {
            field: field.clone(),
            den,
            basis,
        }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Basis elements as field elements.
    pub fn basis_elements(&self) -> Vec<FieldElement> {
        (0..self.field.degree())
            .map(|i| {
                let coords: Vec<BigRational> = self
                    .basis
                    .row(i)
                    .iter()
                    .map(|x| BigRational::new(x.clone(), self.den.clone()))
                    .collect();
                FieldElement::new(&self.field, &coords).expect("degree matches")
            })
            .collect()
    }

    /// Covolume relative to the power basis of θ: `det(basis) / den^d`.
    pub fn covolume(&self) -> BigRational {
        let d = self.field.degree() as u32;
        BigRational::new(self.basis.det(), num_traits::Pow::pow(&self.den, d))
    }

    pub fn contains(&self, x: &FieldElement) -> Result<bool> {
        if !same_field(&self.field, x.field()) {
            return Err(Error::FieldMismatch);
        }
        let mut v = Vec::with_capacity(self.field.degree());
        for c in x.numerators() {
            let scaled = c * &self.den;
            let (q, r) = scaled.div_rem(x.denominator());
            if !r.is_zero() {
                return Ok(false);
            }
            v.push(q);
        }
        Ok(self.basis.solve_upper_integral(&v).is_some())
    }

    pub fn try_eq(&self, other: &Self) -> Result<bool> {
        if !same_field(&self.field, &other.field) {
            return Err(Error::FieldMismatch);
        }
        Ok(self.den == other.den && self.basis == other.basis)
    }

    /// Ring check: 1 lies in the lattice and products of basis vectors do.
    pub fn is_ring(&self) -> bool {
        let one = FieldElement::one(&self.field);
        if !self.contains(&one).unwrap_or(false) {
            return false;
        }
        let b = self.basis_elements();
        b.iter().enumerate().all(|(i, x)| {
            b[i..]
                .iter()
                .all(|y| self.contains(&(x * y)).unwrap_or(false))
        })
    }
}

impl PartialEq for OrderLattice {
    fn eq(&self, other: &Self) -> bool {
        self.try_eq(other).unwrap_or(false)
    }
}

impl Eq for OrderLattice {}

impl fmt::Display for OrderLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(1/{}) * {}", self.den, self.basis)
    }
}

/// `ℤ[α] = ℤ[β]`.
pub fn same_order(alpha: &FieldElement, beta: &FieldElement) -> Result<bool> {
    OrderLattice::from_generator(alpha)?.try_eq(&OrderLattice::from_generator(beta)?)
}

fn check_generators(alpha: &FieldElement, beta: &FieldElement) -> Result<()> {
    if !same_field(alpha.field(), beta.field()) {
        return Err(Error::FieldMismatch);
    }
    if !alpha.is_generator() || !beta.is_generator() {
        return Err(Error::NotAGenerator);
    }
    Ok(())
}

/// β expressed as a polynomial of degree ≤ 1 in α, if it is one.
fn affine_relation(
    alpha: &FieldElement,
    beta: &FieldElement,
) -> Result<Option<(BigRational, BigRational)>> {
    check_generators(alpha, beta)?;
    let f = beta.express_in_powers(alpha)?;
    Ok(match f.degree() {
        Some(1) => Some((f.coeff(1), f.coeff(0))),
        _ => None,
    })
}

/// Witness `(u, a)` with `β = u·α + a`, `u = ±1`, `a ∈ ℤ`.
pub fn z_equivalence(
    alpha: &FieldElement,
    beta: &FieldElement,
) -> Result<Option<(BigInt, BigInt)>> {
    Ok(affine_relation(alpha, beta)?.and_then(|(u, a)| {
        (u.is_integer() && u.abs().is_one() && a.is_integer())
            .then(|| (u.to_integer(), a.to_integer()))
    }))
}

/// Witness `(u, a)` with `β = u·α + a`, `u ∈ ℚ*`, `a ∈ ℚ`.
pub fn l_equivalence(
    alpha: &FieldElement,
    beta: &FieldElement,
) -> Result<Option<(BigRational, BigRational)>> {
    affine_relation(alpha, beta)
}

/// `β = (a1·α + a2) / (a3·α + a4)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoebiusMatrix {
    pub a: [BigRational; 4],
}

impl MoebiusMatrix {
    pub fn from_ints(a: [i64; 4]) -> Self {
        MoebiusMatrix {
            a: a.map(|x| BigRational::from_integer(x.into())),
        }
    }

    pub fn det(&self) -> BigRational {
        &self.a[0] * &self.a[3] - &self.a[1] * &self.a[2]
    }

    /// Scale so that the first nonzero entry is 1.
    pub fn normalized(&self) -> Self {
        let lead = self
            .a
            .iter()
            .find(|x| !x.is_zero())
            .cloned()
            .unwrap_or_else(BigRational::one);
        MoebiusMatrix {
            a: self.a.clone().map(|x| x / &lead),
        }
    }

    /// The unique primitive integer multiple with first nonzero entry positive.
    pub fn primitive_integer(&self) -> [BigInt; 4] {
        let n = self.normalized();
        let l = n.a.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let ints =
            n.a.map(|x| (x * BigRational::from_integer(l.clone())).to_integer());
        let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        ints.map(|x| x / &g)
    }

    /// Image of α.
    pub fn apply(&self, alpha: &FieldElement) -> Result<FieldElement> {
        let k = alpha.field();
        let c = |x: &BigRational| FieldElement::from_rational(k, x);
        let num = &(&c(&self.a[0]) * alpha) + &c(&self.a[1]);
        let den = &(&c(&self.a[2]) * alpha) + &c(&self.a[3]);
        num.try_div(&den)
    }
}

impl fmt::Display for MoebiusMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a1, a2, a3, a4] = &self.a;
        write!(f, "({a1}, {a2}; {a3}, {a4})")
    }
}

/// Solve `β·(a3·α + a4) = a1·α + a2` in K for a matrix of nonzero determinant.
pub fn moebius_find(alpha: &FieldElement, beta: &FieldElement) -> Result<Option<MoebiusMatrix>> {
    check_generators(alpha, beta)?;
    let k = alpha.field();
    let columns = [
        (-alpha).coords(),
        (-&FieldElement::one(k)).coords(),
        (beta * alpha).coords(),
        beta.coords(),
    ];
    let d = k.degree();
    let system: Vec<Vec<BigRational>> = (0..d)
        .map(|i| columns.iter().map(|c| c[i].clone()).collect())
        .collect();
    let basis = nullspace(&system);
    let to_matrix = |v: &[BigRational]| MoebiusMatrix {
        a: [v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()],
    };
    let mut candidates: Vec<MoebiusMatrix> = basis.iter().map(|v| to_matrix(v)).collect();
    // A larger solution space may have singular basis vectors but regular
    // combinations; small integer combinations of pairs suffice in practice.
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            if i == j {
                continue;
            }
            for t in 1..=3 {
                let t = BigRational::from_integer(t.into());
                let v: Vec<BigRational> = basis[i]
                    .iter()
                    .zip(&basis[j])
                    .map(|(x, y)| x + y * &t)
                    .collect();
                candidates.push(to_matrix(&v));
            }
        }
    }
    Ok(candidates
        .into_iter()
        .find(|m| !m.det().is_zero())
        .map(|m| m.normalized()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma71Report {
    pub det: BigInt,
    pub holds: bool,
}

/// For ℤ[α] = ℤ[β] with β the Möbius image of α under a primitive integer
/// matrix with a3 ≠ 0, check that the matrix lies in GL(2, ℤ).
pub fn lemma71_verify(
    alpha: &FieldElement,
    beta: &FieldElement,
    m: &[BigInt; 4],
) -> Result<Lemma71Report> {
    let g = m.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_one() {
        return Err(Error::PreconditionFailed(
            "matrix entries are not coprime".into(),
        ));
    }
    if m[2].is_zero() {
        return Err(Error::PreconditionFailed("a3 = 0".into()));
    }
    if !same_order(alpha, beta)? {
        return Err(Error::PreconditionFailed("Z[alpha] != Z[beta]".into()));
    }
    let k = alpha.field();
    let c = |x: &BigInt| FieldElement::from_integer(k, x.clone());
    let lhs = beta * &(&(&c(&m[2]) * alpha) + &c(&m[3]));
    let rhs = &(&c(&m[0]) * alpha) + &c(&m[1]);
    if lhs != rhs {
        return Err(Error::PreconditionFailed(
            "beta is not the Moebius image of alpha".into(),
        ));
    }
    let det = &m[0] * &m[3] - &m[1] * &m[2];
    let holds = det.abs().is_one();
    Ok(Lemma71Report { det, holds })
}

/// Discriminant of an integral generator, from its characteristic polynomial.
pub fn element_discriminant(x: &FieldElement) -> Result<BigInt> {
    let f = x.char_poly_int().ok_or(Error::NotIntegral)?;
    if x.degree() < 2 {
        return Ok(BigInt::one());
    }
    discriminant(&f)
}

/// `disc(β) / disc(α)`, which must be a unit of ℤ when the orders agree.
pub fn disc_ratio_check(alpha: &FieldElement, beta: &FieldElement) -> Result<i32> {
    if !same_order(alpha, beta)? {
        return Err(Error::PreconditionFailed("Z[alpha] != Z[beta]".into()));
    }
    let da = element_discriminant(alpha)?;
    let db = element_discriminant(beta)?;
    if db == da {
        Ok(1)
    } else if db == -&da {
        Ok(-1)
    } else {
        Err(Error::AssertionFailed(format!(
            "discriminant ratio {db}/{da} is not a unit"
        )))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    /// β is the image of α under a GL(2, ℤ) matrix with a3 ≠ 0.
    TypeI([BigInt; 4]),
    /// β = a0·α² + a1·α + a2 and α = b0·β² + b1·β + b2.
    TypeII {
        a: [BigInt; 3],
        b: [BigInt; 3],
    },
    Plain,
}

/// Two generators of one order, with the clauses that were checked.
#[derive(Clone, Debug)]
pub struct MonogenicPair {
    pub alpha: FieldElement,
    pub beta: FieldElement,
    pub order: OrderLattice,
    pub disc_alpha: BigInt,
    pub disc_beta: BigInt,
    pub relation: Relation,
    pub verified: Vec<String>,
}

impl MonogenicPair {
    /// Check `ℤ[α] = ℤ[β]`, the discriminant ratio, and the relation.
    pub fn verify(alpha: FieldElement, beta: FieldElement, relation: Relation) -> Result<Self> {
        let order = OrderLattice::from_generator(&alpha)?;
        let order_beta = OrderLattice::from_generator(&beta)?;
        if !order.try_eq(&order_beta)? {
            return Err(Error::AssertionFailed("Z[alpha] != Z[beta]".into()));
        }
        let mut verified = vec!["Z[alpha] = Z[beta]".to_string()];
        let ratio = disc_ratio_check(&alpha, &beta)?;
        verified.push(format!("disc(beta)/disc(alpha) = {ratio}"));
        match &relation {
            Relation::TypeI(m) => {
                let image = MoebiusMatrix {
                    a: m.clone().map(BigRational::from_integer),
                }
                .apply(&alpha)?;
                if image != beta {
                    return Err(Error::AssertionFailed("Moebius relation fails".into()));
                }
                verified.push("beta = (a1*alpha + a2)/(a3*alpha + a4)".into());
                let report = lemma71_verify(&alpha, &beta, m)?;
                if !report.holds {
                    return Err(Error::AssertionFailed(format!(
                        "det = {} is not a unit",
                        report.det
                    )));
                }
                verified.push(format!("det = {}", report.det));
            }
            Relation::TypeII { a, b } => {
                if !check_quadratic_relation(&alpha, &beta, a) {
                    return Err(Error::AssertionFailed(
                        "beta = a0*alpha^2 + a1*alpha + a2 fails".into(),
                    ));
                }
                if !check_quadratic_relation(&beta, &alpha, b) {
                    return Err(Error::AssertionFailed(
                        "alpha = b0*beta^2 + b1*beta + b2 fails".into(),
                    ));
                }
                verified.push("beta = a0*alpha^2 + a1*alpha + a2".into());
                verified.push("alpha = b0*beta^2 + b1*beta + b2".into());
            }
            Relation::Plain => {}
        }
        if z_equivalence(&alpha, &beta)?.is_none() {
            verified.push("alpha, beta not Z-equivalent".into());
        }
        Ok(MonogenicPair {
            disc_alpha: element_discriminant(&alpha)?,
            disc_beta: element_discriminant(&beta)?,
            alpha,
            beta,
            order,
            relation,
            verified,
        })
    }
}

/// `y = c0·x² + c1·x + c2`.
pub fn check_quadratic_relation(x: &FieldElement, y: &FieldElement, c: &[BigInt; 3]) -> bool {
    let p = RatPoly::new(
        [&c[2], &c[1], &c[0]]
            .iter()
            .map(|v| BigRational::from_integer((*v).clone()))
            .collect(),
    );
    &x.eval_poly(&p) == y
}
