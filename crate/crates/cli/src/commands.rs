use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Deserialize;
use serde_json::{json, Value};

use monolab::cns::{cns_check_capped, expand_digits, k_times_cns_witness, DigitSystem};
use monolab::embeddings::{
    check_eps_identities, epsilon_system, exact_disc_ratio, tau_overlap, tau_tuple, Ball,
    EmbeddingSet, InequalityCheck,
};
use monolab::exact::{discriminant, IntPoly};
use monolab::families::{type1_construct, type2_member, type2_setup, unit_search};
use monolab::json::{parse_json, poly_from_doc, ElementDoc, Num, OrderDoc};
use monolab::numfield::{FieldElement, NumberField};
use monolab::orders::{
    l_equivalence, lemma71_verify, moebius_find, same_order, z_equivalence, MonogenicPair,
    OrderLattice,
};
use monolab::parse::{parse_element, parse_int_poly, parse_range, parse_rat_poly};
use monolab::prop61::{
    classify_solution, format_kpoly, identity_sweep, match_identity, search_factorizations,
    IdentityVerdict, RootKind,
};
use monolab::uniteq::{
    detect_degeneracy, solve_linear_unit_eq, solve_sextic, MultiPoly, UnitGroup,
    DEFAULT_ELEMENT_CAP,
};
use monolab::{Error, Result};

use crate::report::Report;
use crate::{CnsCmd, Command, Global, OrderCmd, Prop61Cmd, UniteqCmd};

const DEFAULT_UNIT_BOX: u32 = 4;
const DEFAULT_GROUP_BOX: u32 = 3;

pub fn run(cmd: Command, g: &Global) -> Result<Report> {
    match cmd {
        Command::Disc { poly } => disc(&poly),
        Command::Order(c) => order(c),
        Command::Equiv {
            kind,
            poly,
            alpha,
            beta,
        } => equiv(&kind, &poly, &alpha, &beta),
        Command::Moebius { poly, alpha, beta } => moebius(&poly, &alpha, &beta),
        Command::Type1 { poly, matrix, unit } => type1(&poly, &matrix, unit.as_deref(), g),
        Command::Type2 { r, s, m } => type2(r, s, &m),
        Command::Uniteq(c) => uniteq(c, g),
        Command::Prop61(c) => prop61(c),
        Command::Tau { poly, alpha, beta } => tau(&poly, &alpha, beta.as_deref(), g),
        Command::Eps { poly, alpha, beta } => eps(&poly, &alpha, &beta, g),
        Command::Cns(c) => cns(c, g),
    }
}

fn field(poly: &str) -> Result<Arc<NumberField>> {
    NumberField::new(parse_int_poly(poly)?)
}

/// Inline JSON, or a path to a JSON file.
fn read_doc(arg: &str) -> Result<String> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(arg).map_err(|e| Error::Parse(format!("{arg}: {e}")))
}

fn int_list(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

fn ball(b: &Ball) -> Value {
    serde_json::to_value(b.report()).unwrap()
}

fn pair_value(p: &MonogenicPair) -> Value {
    json!({
        "alpha": p.alpha.to_string(),
        "beta": p.beta.to_string(),
        "disc_alpha": p.disc_alpha.to_string(),
        "disc_beta": p.disc_beta.to_string(),
        "verified": p.verified,
    })
}

fn disc(poly: &str) -> Result<Report> {
    let f = parse_int_poly(poly)?;
    let mut r = Report::new();
    r.put("poly", f.to_string())
        .put("disc", discriminant(&f)?.to_string());
    Ok(r)
}

fn order(c: OrderCmd) -> Result<Report> {
    let mut r = Report::new();
    match c {
        OrderCmd::From { poly, alpha } => {
            let k = field(&poly)?;
            let a = parse_element(&k, &alpha)?;
            let o = OrderLattice::from_generator(&a)?;
            r.put("alpha", a.to_string())
                .put("order", serde_json::to_value(OrderDoc::of(&o)).unwrap())
                .put("covolume", o.covolume().to_string())
                .put("is_ring", o.is_ring());
        }
        OrderCmd::Contains { order, element } => {
            let o = parse_json::<OrderDoc>(&read_doc(&order)?)?.to_order(None)?;
            let x = parse_json::<ElementDoc>(&read_doc(&element)?)?.to_element(Some(o.field()))?;
            r.put("element", x.to_string())
                .put("contains", o.contains(&x)?);
        }
        OrderCmd::Eq { left, right } => {
            let a = parse_json::<OrderDoc>(&read_doc(&left)?)?.to_order(None)?;
            let b = parse_json::<OrderDoc>(&read_doc(&right)?)?.to_order(Some(a.field()))?;
            r.put("left", serde_json::to_value(OrderDoc::of(&a)).unwrap())
                .put("right", serde_json::to_value(OrderDoc::of(&b)).unwrap())
                .put("equal", a.try_eq(&b)?);
        }
    }
    Ok(r)
}

fn equiv(kind: &str, poly: &str, alpha: &str, beta: &str) -> Result<Report> {
    let k = field(poly)?;
    let a = parse_element(&k, alpha)?;
    let b = parse_element(&k, beta)?;
    let mut r = Report::new();
    r.put("alpha", a.to_string()).put("beta", b.to_string());
    let witness = if kind == "z" {
        z_equivalence(&a, &b)?.map(|(u, c)| (u.to_string(), c.to_string()))
    } else {
        l_equivalence(&a, &b)?.map(|(u, c)| (u.to_string(), c.to_string()))
    };
    r.put("equivalent", witness.is_some());
    if let Some((u, c)) = witness {
        r.put("witness", format!("beta = {u}*alpha + {c}"));
    }
    Ok(r)
}

fn moebius(poly: &str, alpha: &str, beta: &str) -> Result<Report> {
    let k = field(poly)?;
    let a = parse_element(&k, alpha)?;
    let b = parse_element(&k, beta)?;
    let mut r = Report::new();
    r.put("alpha", a.to_string()).put("beta", b.to_string());
    match moebius_find(&a, &b)? {
        None => {
            r.put("matrix", Value::Null);
        }
        Some(m) => {
            let ints = m.primitive_integer();
            r.put("matrix", m.to_string())
                .put("primitive", int_list(&ints));
            if !ints[2].is_zero() && a.is_integral() && b.is_integral() && same_order(&a, &b)? {
                let rep = lemma71_verify(&a, &b, &ints)?;
                r.put("det", rep.det.to_string())
                    .put("det_is_unit", rep.holds);
                if !rep.holds {
                    return Err(Error::AssertionFailed(format!(
                        "equal orders but det = {} is not a unit",
                        rep.det
                    )));
                }
            }
        }
    }
    Ok(r)
}

fn type1(poly: &str, matrix: &[i64], unit: Option<&str>, g: &Global) -> Result<Report> {
    let f = parse_int_poly(poly)?;
    let k = NumberField::new(f.clone())?;
    if matrix.len() != 4 {
        return Err(Error::Parse("--matrix takes a1,a2,a3,a4".into()));
    }
    let m: [BigInt; 4] = [0, 1, 2, 3].map(|i| BigInt::from(matrix[i]));
    let units = match unit {
        Some(u) => vec![parse_element(&k, u)?],
        None => unit_search(&f, g.bound.unwrap_or(DEFAULT_UNIT_BOX) as i64)?
            .into_iter()
            .map(|u| FieldElement::from_int_poly(&k, &u.to_poly().to_int().unwrap()))
            .collect(),
    };
    let mut pairs = Vec::new();
    let mut skipped = 0usize;
    for u in &units {
        match type1_construct(&f, &m, u) {
            Ok(p) => pairs.push(json!({
                "unit": p.unit.to_string(),
                "pair": pair_value(&p.pair),
                "P": p.beta_in_alpha.to_string(),
                "Q": p.alpha_in_beta.to_string(),
            })),
            Err(e) if unit.is_none() && !e.is_assertion() => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    let mut r = Report::new();
    r.put("poly", f.to_string())
        .put("matrix", int_list(&m))
        .put("units_tried", units.len())
        .put("skipped", skipped)
        .put("pairs", pairs);
    Ok(r)
}

fn type2(r: i64, s: i64, m: &str) -> Result<Report> {
    let (lo, hi) = parse_range(m)?;
    let fam = type2_setup(r, s)?;
    let mut rows = Vec::new();
    for i in lo..=hi {
        let mem = type2_member(&fam, i)?;
        rows.push(json!({
            "m": mem.m,
            "exponent": mem.exponent,
            "r_m": mem.r_m.to_string(),
            "s_m": mem.s_m.to_string(),
            "D_m": mem.disc.to_string(),
            "alpha": mem.alpha.to_string(),
            "beta": mem.beta.to_string(),
            "verified": mem.pair.verified,
        }));
    }
    let mut rep = Report::new();
    rep.put("f", fam.f.to_string())
        .put("resolvent", fam.c.to_string())
        .put("t", fam.t)
        .put("members", rows);
    Ok(rep)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PolySpec {
    Coeffs(Vec<Num>),
    Expr(String),
}

impl PolySpec {
    fn field(&self) -> Result<Arc<NumberField>> {
        match self {
            PolySpec::Coeffs(c) => NumberField::new(poly_from_doc(c)?),
            PolySpec::Expr(s) => field(s),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LinearJob {
    min_poly: PolySpec,
    generators: Vec<String>,
    #[serde(rename = "B")]
    bound: Option<u32>,
    a1: Option<String>,
    a2: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SexticJob {
    min_poly: PolySpec,
    generators: Vec<String>,
    #[serde(rename = "B")]
    bound: Option<u32>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DegeneracyJob {
    min_poly: PolySpec,
    point: Vec<String>,
    #[serde(rename = "B")]
    bound: Option<u32>,
    a: Option<Vec<String>>,
}

fn elems(k: &Arc<NumberField>, xs: &[String]) -> Result<Vec<FieldElement>> {
    xs.iter().map(|s| parse_element(k, s)).collect()
}

fn group(k: &Arc<NumberField>, gens: &[String]) -> Result<UnitGroup> {
    UnitGroup::new(k, elems(k, gens)?)
}

fn box_of(job: Option<u32>, g: &Global) -> u32 {
    job.or(g.bound).unwrap_or(DEFAULT_GROUP_BOX)
}

fn cap_of(g: &Global) -> usize {
    g.cap.map(|c| c as usize).unwrap_or(DEFAULT_ELEMENT_CAP)
}

fn uniteq(c: UniteqCmd, g: &Global) -> Result<Report> {
    let mut r = Report::new();
    match c {
        UniteqCmd::Linear { job } => {
            let job: LinearJob = parse_json(&read_doc(&job)?)?;
            let k = job.min_poly.field()?;
            let grp = group(&k, &job.generators)?;
            let a1 = parse_element(&k, job.a1.as_deref().unwrap_or("1"))?;
            let a2 = parse_element(&k, job.a2.as_deref().unwrap_or("1"))?;
            let b = box_of(job.bound, g);
            let sols = solve_linear_unit_eq(&a1, &a2, &grp, b, cap_of(g))?;
            let rows: Vec<Value> = sols
                .iter()
                .map(|(x, y)| {
                    json!({"x": x.value.to_string(), "x_exp": x.exponents,
                           "y": y.value.to_string(), "y_exp": y.exponents})
                })
                .collect();
            r.put("equation", format!("({a1})*x + ({a2})*y = 1"))
                .put("B", b)
                .put("count", sols.len())
                .put("solutions", rows);
        }
        UniteqCmd::Sextic { job } => {
            let job: SexticJob = parse_json(&read_doc(&job)?)?;
            let k = job.min_poly.field()?;
            let grp = group(&k, &job.generators)?;
            let b = box_of(job.bound, g);
            let rep = solve_sextic(&grp, b, cap_of(g))?;
            let name = |i: usize| rep.elements[i].value.to_string();
            let rows: Vec<Value> = rep
                .solutions
                .iter()
                .map(|s| {
                    json!({"x": s.x.map(name), "y": s.y.map(name), "value": s.value.to_string()})
                })
                .collect();
            r.put("B", b)
                .put("elements", rep.elements.len())
                .put(
                    "trivial_families",
                    "{y} = {x} as multisets; some x_i = 1 and some y_j = 1",
                )
                .put("count", rows.len())
                .put("solutions", rows);
        }
        UniteqCmd::Degeneracy { job } => {
            let job: DegeneracyJob = parse_json(&read_doc(&job)?)?;
            let k = job.min_poly.field()?;
            let point = elems(&k, &job.point)?;
            let f = match &job.a {
                Some(a) => MultiPoly::linear(&k, &elems(&k, a)?)?,
                None => MultiPoly::sextic(&k),
            };
            let b = box_of(job.bound, g);
            let w = detect_degeneracy(&f, &point, b)?;
            r.put(
                "point",
                point.iter().map(ToString::to_string).collect::<Vec<_>>(),
            )
            .put("B", b)
            .put("degenerate", w.is_some())
            .put(
                "witness",
                w.map(|w| Value::from(w.c)).unwrap_or(Value::Null),
            );
        }
    }
    Ok(r)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassifyJob {
    min_poly: PolySpec,
    x: [String; 3],
    y: [String; 3],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatchJob {
    min_poly: PolySpec,
    u: [String; 3],
    v: [String; 3],
    a: [u32; 3],
    b: [u32; 3],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SearchJob {
    min_poly: PolySpec,
    p: Option<Vec<String>>,
    max_exponent: u32,
    height: i64,
    parts: Option<usize>,
}

fn triple(k: &Arc<NumberField>, t: &[String; 3]) -> Result<[FieldElement; 3]> {
    Ok([
        parse_element(k, &t[0])?,
        parse_element(k, &t[1])?,
        parse_element(k, &t[2])?,
    ])
}

fn prop61(c: Prop61Cmd) -> Result<Report> {
    let mut r = Report::new();
    match c {
        Prop61Cmd::Classify { job } => {
            let job: ClassifyJob = parse_json(&read_doc(&job)?)?;
            let k = job.min_poly.field()?;
            let (x, y) = (triple(&k, &job.x)?, triple(&k, &job.y)?);
            let cl = classify_solution(&x, &y)?;
            let verdict = if cl.permutation.is_some() {
                "PERMUTATION"
            } else if !cl.roots_of_unity.is_empty() {
                "ROOT_OF_UNITY"
            } else {
                "NEITHER"
            };
            r.put("satisfies_sextic", cl.satisfies_sextic)
                .put("verdict", verdict);
            if let Some(p) = &cl.permutation {
                let sigma: Vec<usize> = p.sigma.iter().map(|i| i + 1).collect();
                r.put("sigma", sigma).put("eta", p.eta.to_vec());
            }
            let hits: Vec<Value> = cl
                .roots_of_unity
                .iter()
                .map(|h| {
                    let kind = match h.kind {
                        RootKind::MinusOne => "-1",
                        RootKind::PrimitiveCubeRoot => "primitive cube root of 1",
                    };
                    json!({"quantity": h.quantity, "value": kind})
                })
                .collect();
            let small: Vec<Value> = cl
                .small_roots
                .iter()
                .map(|(q, o)| json!({"quantity": q, "order": o}))
                .collect();
            r.put("roots_of_unity", hits).put("small_roots", small);
        }
        Prop61Cmd::Match { job } => {
            let job: MatchJob = parse_json(&read_doc(&job)?)?;
            let k = job.min_poly.field()?;
            let (u, v) = (triple(&k, &job.u)?, triple(&k, &job.v)?);
            match match_identity(&u, &v, &job.a, &job.b)? {
                IdentityVerdict::Holds {
                    separated,
                    permutation,
                    cube_root,
                    case,
                    expanded,
                } => {
                    r.put("verdict", "HOLDS")
                        .put("case", case.to_string())
                        .put("separated", separated)
                        .put("permutation", permutation)
                        .put("cube_root", cube_root)
                        .put("expanded", format_kpoly(&expanded));
                }
                IdentityVerdict::Fails { lhs, rhs } => {
                    r.put("verdict", "FAILS")
                        .put("lhs", format_kpoly(&lhs))
                        .put("rhs", format_kpoly(&rhs));
                }
            }
        }
        Prop61Cmd::Search { job } => {
            let job: SearchJob = parse_json(&read_doc(&job)?)?;
            let k = job.min_poly.field()?;
            match &job.p {
                Some(p) => {
                    let p = elems(&k, p)?;
                    let found = search_factorizations(
                        &p,
                        job.max_exponent,
                        job.height,
                        job.parts.unwrap_or(3),
                    )?;
                    let rows: Vec<Value> = found
                        .iter()
                        .map(|fs| {
                            Value::from(
                                fs.iter()
                                    .map(|(b, v)| format!("(T^{b} - ({v}))"))
                                    .collect::<Vec<_>>()
                                    .join(""),
                            )
                        })
                        .collect();
                    r.put("P", format_kpoly(&p))
                        .put("count", rows.len())
                        .put("factorizations", rows);
                }
                None => {
                    let s = identity_sweep(&k, job.max_exponent, job.height);
                    let per_case: serde_json::Map<String, Value> = s
                        .per_case
                        .iter()
                        .map(|(c, n)| (c.to_string(), Value::from(*n)))
                        .collect();
                    r.put("triples", s.triples)
                        .put("identities", s.identities)
                        .put("separated", s.separated)
                        .put("permutation", s.permutation)
                        .put("cube_root", s.cube_root)
                        .put("per_case", Value::Object(per_case))
                        .put("violations", s.violations.clone());
                    if !s.violations.is_empty() {
                        return Err(Error::AssertionFailed(s.violations.join("; ")));
                    }
                }
            }
        }
    }
    Ok(r)
}

fn tau(poly: &str, alpha: &str, beta: Option<&str>, g: &Global) -> Result<Report> {
    let k = field(poly)?;
    let e = EmbeddingSet::for_field(&k, g.precision_bits)?;
    let a = parse_element(&k, alpha)?;
    let ta = tau_tuple(&a, &e)?;
    let mut r = Report::new();
    r.put("precision_bits", e.prec())
        .put("roots", serde_json::to_value(e.report()).unwrap())
        .put("tau_alpha", ta.iter().map(ball).collect::<Vec<_>>());
    if let Some(beta) = beta {
        let b = parse_element(&k, beta)?;
        let tb = tau_tuple(&b, &e)?;
        let overlap = tau_overlap(&ta, &tb);
        let equivalent = l_equivalence(&a, &b)?.is_some();
        r.put("tau_beta", tb.iter().map(ball).collect::<Vec<_>>())
            .put("overlap", overlap)
            .put("l_equivalent", equivalent);
        if equivalent && !overlap {
            return Err(Error::AssertionFailed(
                "L-equivalent pair with separated tau tuples".into(),
            ));
        }
    }
    Ok(r)
}

fn eps(poly: &str, alpha: &str, beta: &str, g: &Global) -> Result<Report> {
    let k = field(poly)?;
    let e = EmbeddingSet::for_field(&k, g.precision_bits)?;
    let a = parse_element(&k, alpha)?;
    let b = parse_element(&k, beta)?;
    let sys = epsilon_system(&a, &b, &e)?;
    let eps_rows: Vec<Value> = sys
        .report()
        .into_iter()
        .map(|(i, j, v)| json!({"i": i, "j": j, "eps": v}))
        .collect();
    let rep = check_eps_identities(&sys, &e)?;
    let mut r = Report::new();
    r.put("alpha", a.to_string())
        .put("beta", b.to_string())
        .put("precision_bits", sys.prec)
        .put("eps", eps_rows);
    if a.is_integral() && b.is_integral() {
        let q = exact_disc_ratio(&a, &b)?;
        let prod = sys.square_product();
        let ok = prod.contains_rational(&q);
        r.put("disc_ratio", q.to_string())
            .put("eps_square_product", ball(&prod))
            .put("product_contains_disc_ratio", ok);
        if !ok {
            return Err(Error::AssertionFailed(
                "product of eps^2 misses D(alpha)/D(beta)".into(),
            ));
        }
    }
    r.put(
        "triangle_identity",
        serde_json::to_value(&rep.triangle).unwrap(),
    )
    .put(
        "four_index_identity",
        serde_json::to_value(&rep.quadrilateral).unwrap(),
    )
    .put(
        "distinct_ratios",
        serde_json::to_value(&rep.distinct_ratios).unwrap(),
    );
    if let InequalityCheck::Certified {
        galois_assumed: true,
        ..
    } = rep.distinct_ratios
    {
        r.put(
            "note",
            "eps_ij != eps_ik assumes the Galois hypothesis on the normal closure",
        );
    }
    if !rep.holds() {
        return Err(Error::AssertionFailed(
            "an epsilon identity residual excludes 0".into(),
        ));
    }
    Ok(r)
}

/// Integer coordinates of an expression reduced modulo `f`.
fn reduce_int(f: &IntPoly, expr: &str) -> Result<Vec<BigInt>> {
    let p = parse_rat_poly(expr)?.rem(&f.to_rat());
    let p = p
        .to_int()
        .ok_or_else(|| Error::Parse(format!("{expr}: coordinates must be integers")))?;
    let d = f.degree().unwrap_or(0);
    Ok((0..d).map(|i| p.coeff(i)).collect())
}

fn cns(c: CnsCmd, g: &Global) -> Result<Report> {
    let cap = g
        .cap
        .map(|c| c as usize)
        .unwrap_or(monolab::cns::DEFAULT_CLOSURE_CAP);
    let mut r = Report::new();
    match c {
        CnsCmd::Check { poly } => {
            let f = parse_int_poly(&poly)?;
            let rep = cns_check_capped(&f, cap)?;
            r.put("poly", rep.poly.clone())
                .put("CNS", rep.is_cns)
                .put("reason", rep.reason.clone());
            if let Some(n) = rep.closure_size {
                r.put("closure_size", n);
            }
            if let Some(cyc) = &rep.cycle {
                r.put("cycle", serde_json::to_value(cyc).unwrap());
            }
        }
        CnsCmd::Expand { poly, element } => {
            let f = parse_int_poly(&poly)?;
            let ds = DigitSystem::new(&f)?;
            let z = reduce_int(&f, &element)?;
            let digits = expand_digits(&ds, &z, cap)?;
            if ds.evaluate(&digits) != z {
                return Err(Error::AssertionFailed(
                    "expansion does not evaluate back".into(),
                ));
            }
            r.put("poly", f.to_string())
                .put("element", int_list(&z))
                .put("digits", int_list(&digits))
                .put("round_trip", true);
        }
        CnsCmd::Ktimes { poly, candidates } => {
            let k = field(&poly)?;
            let o = OrderLattice::from_generator(&FieldElement::generator(&k))?;
            let cands = elems(&k, &candidates)?;
            let rep = k_times_cns_witness(&o, &cands)?;
            r.put("order", serde_json::to_value(OrderDoc::of(&o)).unwrap())
                .put("accepted", rep.accepted.clone())
                .put("classes", serde_json::to_value(&rep.classes).unwrap())
                .put("k", rep.k);
        }
    }
    Ok(r)
}
