//! The two infinite families of two-times monogenic orders: Möbius images
//! of units (type I) and the quartic resolvent construction (type II).

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{discriminant, is_irreducible_q, resultant, IntPoly, RatPoly};
use crate::numfield::{FieldElement, NumberField};
use crate::orders::{
    element_discriminant, lemma71_verify, moebius_find, same_order, MoebiusMatrix, MonogenicPair,
    Relation,
};

/// Units of ℤ[θ] with power-basis coordinates in `[−B, B]^d`, in
/// lexicographic order of their coordinate vectors.
pub fn unit_search(f: &IntPoly, bound: i64) -> Result<Vec<FieldElement>> {
    let k = NumberField::new(f.clone())?;
    let d = k.degree();
    let mut out = Vec::new();
    let mut coords = vec![-bound; d];
    loop {
        let x = FieldElement::from_i64s(&k, &coords);
        if !x.is_zero() && x.norm().abs().is_one() {
            out.push(x);
        }
        // odometer with the last coordinate fastest
        let mut i = d;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if coords[i] < bound {
                coords[i] += 1;
                break;
            }
            coords[i] = -bound;
        }
    }
}

/// Unit test for an element of ℤ[θ]: integer coordinates and norm ±1.
pub fn is_unit(u: &FieldElement) -> bool {
    u.int_coords().is_some() && u.norm().abs().is_one()
}

/// A verified type I pair together with the polynomial certificates
/// `β = P(α)` and `α = Q(β)`.
#[derive(Clone, Debug)]
pub struct Type1Pair {
    pub pair: MonogenicPair,
    pub matrix: [BigInt; 4],
    pub unit: FieldElement,
    pub beta_in_alpha: IntPoly,
    pub alpha_in_beta: IntPoly,
}

/// `α = (u − a4)/a3`, `β = (a1·α + a2)/(a3·α + a4)` for a unit `u`.
pub fn type1_construct(f: &IntPoly, m: &[BigInt; 4], u: &FieldElement) -> Result<Type1Pair> {
    let d = f.degree().unwrap_or(0);
    if d < 3 {
        return Err(Error::PreconditionFailed(format!(
            "degree {d} < 3; type I needs degree at least 3"
        )));
    }
    if u.field().min_poly() != f {
        return Err(Error::FieldMismatch);
    }
    let [a1, a2, a3, a4] = m;
    if a3.is_zero() {
        return Err(Error::InvalidMatrix("a3 = 0".into()));
    }
    let det = a1 * a4 - a2 * a3;
    if !det.abs().is_one() {
        return Err(Error::InvalidMatrix(format!("det = {det}")));
    }
    if !is_unit(u) {
        return Err(Error::NotAUnit);
    }
    if !u.is_generator() {
        return Err(Error::NotAGenerator);
    }
    let k = u.field();
    let c = |x: &BigInt| FieldElement::from_integer(k, x.clone());
    let alpha = (u - &c(a4)).scale(&BigRational::new(BigInt::one(), a3.clone()));
    if !alpha.is_integral() {
        return Err(Error::CongruenceFail(format!("u is not {a4} mod {a3}")));
    }
    // a3·α + a4 = u, so β = (a1·α + a2)·u⁻¹ with u⁻¹ a polynomial in u.
    let u_inv = unit_inverse_poly(u)?;
    let beta = &(&(&c(a1) * &alpha) + &c(a2)) * &u.eval_poly(&u_inv.to_rat());

    let beta_in_alpha = integral_expression(&beta, &alpha)?;
    let alpha_in_beta = integral_expression(&alpha, &beta)?;

    let pair = MonogenicPair::verify(alpha.clone(), beta.clone(), Relation::TypeI(m.clone()))?;
    let found = moebius_find(&alpha, &beta)?
        .ok_or_else(|| Error::AssertionFailed("no Moebius matrix recovered".into()))?;
    let given = MoebiusMatrix {
        a: m.clone().map(BigRational::from_integer),
    };
    if found != given.normalized() {
        return Err(Error::AssertionFailed(format!(
            "recovered matrix {found} differs from {given}"
        )));
    }
    if !lemma71_verify(&alpha, &beta, &found.primitive_integer())?.holds {
        return Err(Error::AssertionFailed(
            "recovered matrix not in GL(2, Z)".into(),
        ));
    }
    if !pair.verified.iter().any(|v| v.contains("not Z-equivalent")) {
        return Err(Error::AssertionFailed(
            "alpha and beta are Z-equivalent".into(),
        ));
    }
    let mut pair = pair;
    pair.verified
        .push(format!("beta = P(alpha), P = {beta_in_alpha}"));
    pair.verified
        .push(format!("alpha = Q(beta), Q = {alpha_in_beta}"));
    pair.verified.push(format!("moebius_find recovers {found}"));
    Ok(Type1Pair {
        pair,
        matrix: m.clone(),
        unit: u.clone(),
        beta_in_alpha,
        alpha_in_beta,
    })
}

/// `g` with integer coefficients and `u⁻¹ = g(u)`, read off the
/// characteristic polynomial of the unit `u`.
fn unit_inverse_poly(u: &FieldElement) -> Result<IntPoly> {
    let chi = u.char_poly_int().ok_or(Error::NotAUnit)?;
    let c0 = chi.coeff(0);
    if !c0.abs().is_one() {
        return Err(Error::NotAUnit);
    }
    // χ(u) = 0 ⇒ u·(χ(u) − c0)/u = −c0 ⇒ u⁻¹ = −c0⁻¹ · (χ(X) − c0)/X at X = u.
    let tail = IntPoly::new(chi.coeffs()[1..].to_vec());
    Ok(tail.scale(&-c0))
}

/// `y` as an integer polynomial in `x`, or an assertion failure if `y ∉ ℤ[x]`.
fn integral_expression(y: &FieldElement, x: &FieldElement) -> Result<IntPoly> {
    y.express_in_powers(x)?
        .to_int()
        .ok_or_else(|| Error::AssertionFailed(format!("{y} is not in Z[{x}]")))
}

#[derive(Clone, Debug)]
pub struct Type2Family {
    pub r: BigInt,
    pub s: BigInt,
    pub f: IntPoly,
    pub c: IntPoly,
    pub t: u32,
    pub field: Arc<NumberField>,
}

pub fn type2_quartic(r: &BigInt, s: &BigInt) -> IntPoly {
    IntPoly::new(vec![
        r * r - s,
        BigInt::from(-1),
        -2 * r,
        BigInt::zero(),
        BigInt::one(),
    ])
}

pub fn type2_resolvent(r: &BigInt, s: &BigInt) -> IntPoly {
    IntPoly::new(vec![BigInt::from(-1), 4 * s, -4 * r, BigInt::one()])
}

/// `f = (X² − r)² − X − s` with its resolvent `X³ − 4rX² + 4sX − 1`,
/// certified irreducible with Galois group S₄.
pub fn type2_setup(r: i64, s: i64) -> Result<Type2Family> {
    let (r, s) = (BigInt::from(r), BigInt::from(s));
    let f = type2_quartic(&r, &s);
    if !is_irreducible_q(&f)? {
        return Err(Error::Reducible(format!("{f}")));
    }
    let c = type2_resolvent(&r, &s);
    if !is_irreducible_q(&c)? {
        return Err(Error::NotS4(format!("resolvent {c} is reducible")));
    }
    let disc = discriminant(&f)?;
    if !disc.is_negative() && disc.sqrt().pow(2) == disc {
        return Err(Error::NotS4(format!("disc(f) = {disc} is a square")));
    }
    let t = compute_t(&c)?;
    let field = NumberField::new(f.clone())?;
    Ok(Type2Family {
        r,
        s,
        f,
        c,
        t,
        field,
    })
}

pub const T_SEARCH_CAP: u32 = 64;

/// Least `t ≥ 1` with `Y^t ≡ 1` in `(ℤ/4)[Y]/(c)` for monic `c`.
pub fn compute_t(c: &IntPoly) -> Result<u32> {
    let n = c.degree().unwrap_or(0);
    if n == 0 || !c.is_monic() {
        return Err(Error::PreconditionFailed(
            "need a monic nonconstant polynomial".into(),
        ));
    }
    let cm: Vec<i64> = c
        .coeffs()
        .iter()
        .map(|x| x.mod_floor(&BigInt::from(4)).try_into().unwrap())
        .collect();
    let mut y = vec![0i64; n];
    y[0] = 1;
    for t in 1..=T_SEARCH_CAP {
        // y <- Y·y mod c
        let top = y[n - 1];
        for i in (1..n).rev() {
            y[i] = y[i - 1];
        }
        y[0] = 0;
        for i in 0..n {
            y[i] = (y[i] - top * cm[i]).rem_euclid(4);
        }
        if y[0] == 1 && y[1..].iter().all(|&v| v == 0) {
            return Ok(t);
        }
    }
    Err(Error::NoTFound(T_SEARCH_CAP as usize))
}

#[derive(Clone, Debug)]
pub struct Type2Member {
    pub m: u32,
    pub exponent: u32,
    pub alpha: FieldElement,
    pub beta: FieldElement,
    pub r_m: BigInt,
    pub s_m: BigInt,
    pub disc: BigInt,
    pub pair: MonogenicPair,
}

/// Power sums `p_0..=p_k` of the roots of `Z³ − e1·Z² + e2·Z − e3`, by
/// Newton's identities, in any commutative ring given by the closures.
fn power_sums<T: Clone>(
    e: [&T; 3],
    k: usize,
    three: T,
    add: impl Fn(&T, &T) -> T,
    sub: impl Fn(&T, &T) -> T,
    mul: impl Fn(&T, &T) -> T,
    double: impl Fn(&T) -> T,
) -> Vec<T> {
    let [e1, e2, e3] = e;
    let mut p = vec![three];
    if k >= 1 {
        p.push(e1.clone());
    }
    if k >= 2 {
        p.push(sub(&mul(e1, &p[1]), &double(e2)));
    }
    for n in 3..=k {
        let v = add(
            &sub(&mul(e1, &p[n - 1]), &mul(e2, &p[n - 2])),
            &mul(e3, &p[n - 3]),
        );
        p.push(v);
    }
    p
}

fn int_power_sum(e1: &BigInt, e2: &BigInt, e3: &BigInt, k: usize) -> BigInt {
    power_sums(
        [e1, e2, e3],
        k,
        BigInt::from(3),
        |a, b| a + b,
        |a, b| a - b,
        |a, b| a * b,
        |a| a * 2,
    )
    .pop()
    .unwrap()
}

fn elt_power_sum(e: [&FieldElement; 3], k: usize) -> FieldElement {
    let field = e[0].field().clone();
    power_sums(
        e,
        k,
        FieldElement::from_integer(&field, 3),
        |a, b| a + b,
        |a, b| a - b,
        |a, b| a * b,
        |a| a + a,
    )
    .pop()
    .unwrap()
}

fn quarter(x: BigInt, what: &str) -> Result<BigInt> {
    let (q, r) = x.div_rem(&BigInt::from(4));
    if r.is_zero() {
        Ok(q)
    } else {
        Err(Error::AssertionFailed(format!(
            "{what} = {x}/4 is not an integer"
        )))
    }
}

/// Member `m` of the family: the pair `(α_m, β_m)` with exponent `1 + 2mt`.
pub fn type2_member(family: &Type2Family, m: u32) -> Result<Type2Member> {
    let k = family.field.clone();
    let exponent = 1 + 2 * m * family.t;
    let n = exponent as usize;
    let alpha = FieldElement::generator(&k);
    let two = FieldElement::from_integer(&k, 2);
    let r = FieldElement::from_integer(&k, family.r.clone());
    let one = FieldElement::one(&k);

    // √η₁, √η₂, √η₃ are the roots of Z³ − 2α·Z² + (2α² − 2r)·Z − 1.
    let e1 = &two * &alpha;
    let e2 = &two * &(&(&alpha * &alpha) - &r);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let alpha_m = elt_power_sum([&e1, &e2, &one], n).scale(&half);
    // Their inverses are the roots of the reversed cubic.
    let beta_m = elt_power_sum([&e2, &e1, &one], n).scale(&half);

    let four_r = 4 * &family.r;
    let four_s = 4 * &family.s;
    let r_m = quarter(int_power_sum(&four_r, &four_s, &BigInt::one(), n), "r_m")?;
    let s_m = quarter(int_power_sum(&four_s, &four_r, &BigInt::one(), n), "s_m")?;

    if !alpha_m.is_generator() {
        return Err(Error::DegenerateMember(format!(
            "alpha_{m} has a repeated conjugate"
        )));
    }
    let relation = Relation::TypeII {
        a: [BigInt::one(), BigInt::zero(), -&r_m],
        b: [BigInt::one(), BigInt::zero(), -&s_m],
    };
    let pair = MonogenicPair::verify(alpha_m.clone(), beta_m.clone(), relation)?;
    if !same_order(&alpha_m, &beta_m)? {
        return Err(Error::AssertionFailed("orders differ".into()));
    }
    let disc = element_discriminant(&alpha_m)?;
    Ok(Type2Member {
        m,
        exponent,
        alpha: alpha_m,
        beta: beta_m,
        r_m,
        s_m,
        disc,
        pair,
    })
}

/// The cubic whose roots are `(αᵢ + αⱼ)²` over the three pairings of the
/// roots of a monic quartic with no cubic term, computed by elimination:
/// `Res_X(f(X), f(Y − X)) = 16·f(Y/2) · S(Y)²` with `S(Y) = C(Y²)`.
pub fn resolvent_by_elimination(f: &IntPoly) -> Result<IntPoly> {
    if f.degree() != Some(4) || !f.is_monic() || !f.coeff(3).is_zero() {
        return Err(Error::PreconditionFailed(
            "need a monic quartic without cubic term".into(),
        ));
    }
    let points: Vec<(BigRational, BigRational)> = (0..=16i64)
        .map(|y| {
            let y = BigInt::from(y);
            let shifted = f.compose(&IntPoly::new(vec![y.clone(), BigInt::from(-1)]));
            let res = resultant(f, &shifted)?;
            Ok((BigRational::from_integer(y), BigRational::from_integer(res)))
        })
        .collect::<Result<_>>()?;
    let full = RatPoly::interpolate(&points)
        .to_int()
        .ok_or_else(|| Error::AssertionFailed("non-integral elimination polynomial".into()))?;
    // 16·f(Y/2)
    let diag = IntPoly::new(
        f.coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| c * BigInt::from(1u32 << (4 - i)))
            .collect(),
    );
    let square = full
        .div_exact(&diag)
        .ok_or_else(|| Error::AssertionFailed("16 f(Y/2) does not divide".into()))?;
    let s = square
        .sqrt_exact()
        .ok_or_else(|| Error::AssertionFailed("cofactor is not a square".into()))?;
    if s.coeffs().iter().skip(1).step_by(2).any(|c| !c.is_zero()) {
        return Err(Error::AssertionFailed("S(Y) is not even".into()));
    }
    Ok(IntPoly::new(
        s.coeffs().iter().step_by(2).cloned().collect(),
    ))
}
