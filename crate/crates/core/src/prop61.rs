//! Classification of sextic solutions and the binomial-product identity
//! `(T^a1 − u1)(T^a2 − u2)(T^a3 − u3) ≡ (T^b1 − v1)(T^b2 − v2)(T^b3 − v3)`.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numfield::{same_field, FieldElement, NumberField};

const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// `y_i = x_{σ(i)}^{η_i}` (0-based σ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationFlag {
    pub sigma: [usize; 3],
    pub eta: [i8; 3],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootKind {
    MinusOne,
    PrimitiveCubeRoot,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootOfUnityHit {
    /// e.g. `x2/x3` or `y1*y2` (1-based).
    pub quantity: String,
    pub kind: RootKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SexticClassification {
    pub satisfies_sextic: bool,
    pub permutation: Option<PermutationFlag>,
    /// All hits, in the order x-products, x-ratios, y-products, y-ratios.
    pub roots_of_unity: Vec<RootOfUnityHit>,
    /// Listed products/ratios that are roots of unity of order dividing 18,
    /// with their exact order.
    pub small_roots: Vec<(String, u32)>,
}

impl SexticClassification {
    pub fn is_neither(&self) -> bool {
        self.permutation.is_none() && self.roots_of_unity.is_empty()
    }
}

fn is_primitive_cube_root(v: &FieldElement) -> bool {
    (&(&(v * v) + v) + &FieldElement::one(v.field())).is_zero()
}

fn root_order_dividing_18(v: &FieldElement) -> Option<u32> {
    let mut p = v.clone();
    for k in 1..=18u32 {
        if p.is_one() {
            return (18 % k == 0).then_some(k);
        }
        p = &p * v;
    }
    None
}

/// The 12 quantities `x_i x_j, x_i/x_j, y_i y_j, y_i/y_j` (i < j).
fn listed_quantities(x: &[FieldElement; 3], y: &[FieldElement; 3]) -> Vec<(String, FieldElement)> {
    let mut out = Vec::with_capacity(12);
    for (name, t) in [("x", x), ("y", y)] {
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            out.push((format!("{name}{}*{name}{}", i + 1, j + 1), &t[i] * &t[j]));
        }
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let r = t[i].try_div(&t[j]).expect("nonzero");
            out.push((format!("{name}{}/{name}{}", i + 1, j + 1), r));
        }
    }
    out
}

pub fn classify_solution(
    x: &[FieldElement; 3],
    y: &[FieldElement; 3],
) -> Result<SexticClassification> {
    let field = x[0].field();
    if x.iter().chain(y).any(|v| !same_field(field, v.field())) {
        return Err(Error::FieldMismatch);
    }
    if x.iter().chain(y).any(FieldElement::is_zero) {
        return Err(Error::PreconditionFailed(
            "all six entries must be nonzero".into(),
        ));
    }
    let one = FieldElement::one(field);
    let side = |t: &[FieldElement; 3]| t.iter().fold(one.clone(), |acc, v| &acc * &(v - &one));
    let satisfies_sextic = side(x) == side(y);

    let inv: Vec<FieldElement> = x.iter().map(|v| v.inv().expect("nonzero")).collect();
    let mut permutation = None;
    'outer: for sigma in PERMS {
        for mask in 0..8u8 {
            let eta = [0, 1, 2].map(|i| if mask >> (2 - i) & 1 == 1 { -1i8 } else { 1 });
            let ok = (0..3).all(|i| {
                let xi = if eta[i] == 1 {
                    &x[sigma[i]]
                } else {
                    &inv[sigma[i]]
                };
                &y[i] == xi
            });
            if ok {
                permutation = Some(PermutationFlag { sigma, eta });
                break 'outer;
            }
        }
    }

    let mut roots_of_unity = Vec::new();
    let mut small_roots = Vec::new();
    for (name, v) in listed_quantities(x, y) {
        if (&v + &one).is_zero() {
            roots_of_unity.push(RootOfUnityHit {
                quantity: name.clone(),
                kind: RootKind::MinusOne,
            });
        } else if is_primitive_cube_root(&v) {
            roots_of_unity.push(RootOfUnityHit {
                quantity: name.clone(),
                kind: RootKind::PrimitiveCubeRoot,
            });
        }
        if let Some(k) = root_order_dividing_18(&v) {
            small_roots.push((name, k));
        }
    }
    Ok(SexticClassification {
        satisfies_sextic,
        permutation,
        roots_of_unity,
        small_roots,
    })
}

/// Dense polynomial over K, constant term first, trimmed.
pub type KPoly = Vec<FieldElement>;

fn kpoly_trim(mut p: KPoly) -> KPoly {
    while p.last().is_some_and(FieldElement::is_zero) {
        p.pop();
    }
    p
}

pub fn kpoly_mul(a: &[FieldElement], b: &[FieldElement]) -> KPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let field = a[0].field();
    let mut out = vec![FieldElement::zero(field); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
    }
    kpoly_trim(out)
}

/// `T^a − u`.
pub fn binomial(a: u32, u: &FieldElement) -> KPoly {
    let field = u.field();
    let mut p = vec![FieldElement::zero(field); a as usize + 1];
    p[0] = -u;
    p[a as usize] = FieldElement::one(field);
    kpoly_trim(p)
}

pub fn binomial_product(parts: &[(u32, FieldElement)]) -> KPoly {
    let field = parts[0].1.field();
    parts
        .iter()
        .fold(vec![FieldElement::one(field)], |acc, (a, u)| {
            kpoly_mul(&acc, &binomial(*a, u))
        })
}

pub fn format_kpoly(p: &[FieldElement]) -> String {
    let mut terms = Vec::new();
    for (k, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match k {
            0 => String::new(),
            1 => "T".to_string(),
            _ => format!("T^{k}"),
        };
        let coef = c.to_string();
        terms.push(match (c.is_one(), mono.is_empty()) {
            (true, false) => mono,
            (_, true) => format!("({coef})"),
            _ => format!("({coef})*{mono}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Exponent pattern of a triple sorted into non-increasing order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pattern {
    /// a1 > a2 > a3
    Distinct,
    /// a1 = a2 > a3
    TopPair,
    /// a1 > a2 = a3
    BottomPair,
    /// a1 = a2 = a3
    AllEqual,
}

impl Pattern {
    pub fn of(a: &[u32; 3]) -> Pattern {
        let mut s = *a;
        s.sort_by(|x, y| y.cmp(x));
        match (s[0] == s[1], s[1] == s[2]) {
            (false, false) => Pattern::Distinct,
            (true, false) => Pattern::TopPair,
            (false, true) => Pattern::BottomPair,
            (true, true) => Pattern::AllEqual,
        }
    }
}

/// The ten cases of the proof, indexed by the unordered pair of patterns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CaseLabel {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    VIII,
    IX,
    X,
}

impl CaseLabel {
    pub const ALL: [CaseLabel; 10] = [
        CaseLabel::I,
        CaseLabel::II,
        CaseLabel::III,
        CaseLabel::IV,
        CaseLabel::V,
        CaseLabel::VI,
        CaseLabel::VII,
        CaseLabel::VIII,
        CaseLabel::IX,
        CaseLabel::X,
    ];

    pub fn from_patterns(p: Pattern, q: Pattern) -> CaseLabel {
        use Pattern::*;
        let (p, q) = if p <= q { (p, q) } else { (q, p) };
        match (p, q) {
            (Distinct, Distinct) => CaseLabel::I,
            (Distinct, TopPair) => CaseLabel::II,
            (Distinct, BottomPair) => CaseLabel::III,
            (Distinct, AllEqual) => CaseLabel::IV,
            (TopPair, TopPair) => CaseLabel::V,
            (TopPair, BottomPair) => CaseLabel::VI,
            (TopPair, AllEqual) => CaseLabel::VII,
            (BottomPair, BottomPair) => CaseLabel::VIII,
            (BottomPair, AllEqual) => CaseLabel::IX,
            (AllEqual, AllEqual) => CaseLabel::X,
            _ => unreachable!("pair is ordered"),
        }
    }

    pub fn of(a: &[u32; 3], b: &[u32; 3]) -> CaseLabel {
        Self::from_patterns(Pattern::of(a), Pattern::of(b))
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = ["i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x"][*self as usize];
        write!(f, "({s})")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdentityVerdict {
    Holds {
        /// No `u_i + u_j` and no `v_i + v_j` vanishes.
        separated: bool,
        /// v is a permutation of u.
        permutation: bool,
        /// Some `u_i/u_j` or `v_i/v_j` is a primitive cube root of unity.
        cube_root: bool,
        case: CaseLabel,
        expanded: KPoly,
    },
    Fails {
        lhs: KPoly,
        rhs: KPoly,
    },
}

fn is_separated(t: &[FieldElement; 3]) -> bool {
    [(0, 1), (0, 2), (1, 2)]
        .iter()
        .all(|&(i, j)| !(&t[i] + &t[j]).is_zero())
}

fn is_permutation_of(u: &[FieldElement; 3], v: &[FieldElement; 3]) -> bool {
    PERMS.iter().any(|s| (0..3).all(|i| v[i] == u[s[i]]))
}

fn has_cube_root_ratio(t: &[FieldElement; 3]) -> bool {
    [(0, 1), (0, 2), (1, 2)].iter().any(|&(i, j)| {
        t[i].try_div(&t[j])
            .map(|r| is_primitive_cube_root(&r))
            .unwrap_or(false)
    })
}

/// Compare both sides by exact expansion; when they agree and the triples
/// are separated, at least one of the two conclusions must hold.
pub fn match_identity(
    u: &[FieldElement; 3],
    v: &[FieldElement; 3],
    a: &[u32; 3],
    b: &[u32; 3],
) -> Result<IdentityVerdict> {
    if a.iter().chain(b).any(|&e| e == 0) {
        return Err(Error::PreconditionFailed(
            "exponents must be positive".into(),
        ));
    }
    let field = u[0].field();
    if u.iter().chain(v).any(|x| !same_field(field, x.field())) {
        return Err(Error::FieldMismatch);
    }
    let pair = |t: &[FieldElement; 3], e: &[u32; 3]| -> Vec<(u32, FieldElement)> {
        (0..3).map(|i| (e[i], t[i].clone())).collect()
    };
    let lhs = binomial_product(&pair(u, a));
    let rhs = binomial_product(&pair(v, b));
    if lhs != rhs {
        return Ok(IdentityVerdict::Fails { lhs, rhs });
    }
    let separated = is_separated(u) && is_separated(v);
    let permutation = is_permutation_of(u, v);
    let cube_root = has_cube_root_ratio(u) || has_cube_root_ratio(v);
    if separated && !permutation && !cube_root {
        return Err(Error::AssertionFailed(format!(
            "separated identity with neither conclusion: u = ({}, {}, {}), v = ({}, {}, {})",
            u[0], u[1], u[2], v[0], v[1], v[2]
        )));
    }
    Ok(IdentityVerdict::Holds {
        separated,
        permutation,
        cube_root,
        case: CaseLabel::of(a, b),
        expanded: lhs,
    })
}

/// Nonzero elements with integer power-basis coordinates in `[−h, h]`,
/// in lexicographic coordinate order.
pub fn test_set(field: &Arc<NumberField>, height: i64) -> Vec<FieldElement> {
    let d = field.degree();
    let mut out = Vec::new();
    let mut c = vec![-height; d];
    loop {
        let x = FieldElement::from_i64s(field, &c);
        if !x.is_zero() {
            out.push(x);
        }
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if c[i] < height {
                c[i] += 1;
                break;
            }
            c[i] = -height;
        }
    }
}

/// All ways to write `P = ∏ (T^{bᵢ} − vᵢ)` with `parts` factors,
/// `bᵢ ≤ max_exponent`, and every `vᵢ` in the test set of the given height.
/// Each factorization is reported once, sorted by exponent descending and
/// then by test-set position.
pub fn search_factorizations(
    p: &[FieldElement],
    max_exponent: u32,
    height: i64,
    parts: usize,
) -> Result<Vec<Vec<(u32, FieldElement)>>> {
    let Some(lead) = p.last() else {
        return Err(Error::PreconditionFailed("P is zero".into()));
    };
    if !lead.is_one() {
        return Err(Error::PreconditionFailed("P must be monic".into()));
    }
    if p[0].is_zero() {
        return Err(Error::PreconditionFailed("P(0) must be nonzero".into()));
    }
    if parts == 0 {
        return Err(Error::PreconditionFailed("parts must be positive".into()));
    }
    let field = lead.field().clone();
    let deg = p.len() as u32 - 1;
    let tests = test_set(&field, height);
    let index: HashMap<&FieldElement, usize> =
        tests.iter().enumerate().map(|(i, v)| (v, i)).collect();
    // (−1)^parts ∏ vᵢ = P(0)
    let target = if parts.is_multiple_of(2) {
        p[0].clone()
    } else {
        -&p[0]
    };

    let mut out = Vec::new();
    for exps in exponent_partitions(deg, parts, max_exponent) {
        // choose v_1..v_{parts−1}; the last is forced by the constant term
        let mut idx = vec![0usize; parts - 1];
        loop {
            let ordered = (1..parts - 1).all(|i| exps[i] != exps[i - 1] || idx[i] >= idx[i - 1]);
            if ordered {
                let prod = idx
                    .iter()
                    .fold(FieldElement::one(&field), |acc, &i| &acc * &tests[i]);
                let last = target.try_div(&prod)?;
                if let Some(&li) = index.get(&last) {
                    let last_ok =
                        parts == 1 || exps[parts - 1] != exps[parts - 2] || li >= idx[parts - 2];
                    if last_ok {
                        let mut factors: Vec<(u32, FieldElement)> = idx
                            .iter()
                            .zip(&exps)
                            .map(|(&i, &e)| (e, tests[i].clone()))
                            .collect();
                        factors.push((exps[parts - 1], last));
                        if binomial_product(&factors) == p {
                            out.push(factors);
                        }
                    }
                }
            }
            let mut i = idx.len();
            let carry = loop {
                if i == 0 {
                    break true;
                }
                i -= 1;
                idx[i] += 1;
                if idx[i] < tests.len() {
                    break false;
                }
                idx[i] = 0;
            };
            if carry {
                break;
            }
        }
    }
    Ok(out)
}

/// Non-increasing sequences of `parts` positive integers ≤ `max` summing to `total`.
fn exponent_partitions(total: u32, parts: usize, max: u32) -> Vec<Vec<u32>> {
    fn go(total: u32, parts: usize, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 0 {
            if total == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for e in (1..=max.min(total)).rev() {
            prefix.push(e);
            go(total - e, parts - 1, e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(total, parts, max, &mut Vec::new(), &mut out);
    out
}

/// Result of checking every identity between distinct triples of binomials
/// `T^a − u` with `a ≤ max_exponent` and `u` in a test set.
#[derive(Clone, Debug, Default)]
pub struct SweepReport {
    pub triples: usize,
    /// Unordered pairs of distinct triples with equal products.
    pub identities: usize,
    /// Those whose two triples are both separated.
    pub separated: usize,
    pub permutation: usize,
    pub cube_root: usize,
    pub per_case: BTreeMap<CaseLabel, usize>,
    /// Separated identities with neither conclusion; must stay empty.
    pub violations: Vec<String>,
}

pub fn identity_sweep(field: &Arc<NumberField>, max_exponent: u32, height: i64) -> SweepReport {
    let tests = test_set(field, height);
    let atoms: Vec<(u32, &FieldElement)> = (1..=max_exponent)
        .flat_map(|a| tests.iter().map(move |u| (a, u)))
        .collect();
    let n = atoms.len();
    let mut buckets: HashMap<u64, Vec<([usize; 3], KPoly)>> = HashMap::new();
    let mut triples = 0;
    for i in 0..n {
        let pi = binomial(atoms[i].0, atoms[i].1);
        for j in i..n {
            let pij = kpoly_mul(&pi, &binomial(atoms[j].0, atoms[j].1));
            for (k, atom) in atoms.iter().enumerate().skip(j) {
                let p = kpoly_mul(&pij, &binomial(atom.0, atom.1));
                let mut h = DefaultHasher::new();
                p.hash(&mut h);
                buckets.entry(h.finish()).or_default().push(([i, j, k], p));
                triples += 1;
            }
        }
    }
    let mut report = SweepReport {
        triples,
        per_case: CaseLabel::ALL.iter().map(|&c| (c, 0)).collect(),
        ..Default::default()
    };
    let mut keys: Vec<&u64> = buckets.keys().collect();
    keys.sort();
    for key in keys {
        let bucket = &buckets[key];
        for (p, (t1, p1)) in bucket.iter().enumerate() {
            for (t2, p2) in &bucket[p + 1..] {
                if p1 != p2 {
                    continue;
                }
                report.identities += 1;
                let u = t1.map(|i| atoms[i].1.clone());
                let a = t1.map(|i| atoms[i].0);
                let v = t2.map(|i| atoms[i].1.clone());
                let b = t2.map(|i| atoms[i].0);
                if !(is_separated(&u) && is_separated(&v)) {
                    continue;
                }
                report.separated += 1;
                match match_identity(&u, &v, &a, &b) {
                    Ok(IdentityVerdict::Holds {
                        permutation,
                        cube_root,
                        case,
                        ..
                    }) => {
                        report.permutation += permutation as usize;
                        report.cube_root += cube_root as usize;
                        *report.per_case.entry(case).or_default() += 1;
                    }
                    Ok(IdentityVerdict::Fails { .. }) => report
                        .violations
                        .push(format!("expansion mismatch for {t1:?} / {t2:?}")),
                    Err(e) => report.violations.push(e.to_string()),
                }
            }
        }
    }
    report
}
