//! End-to-end acceptance suite. Runs without the libtest harness so that
//! every criterion prints exactly one PASS/FAIL line.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use monolab::cns::{cns_check, expand_digits, DigitSystem};
use monolab::embeddings::{
    check_eps_identities, epsilon_system, tau_overlap, tau_tuple, EmbeddingSet,
};
use monolab::exact::{discriminant, is_irreducible_q, IntPoly};
use monolab::families::{
    resolvent_by_elimination, type1_construct, type2_member, type2_setup, unit_search,
};
use monolab::numfield::{FieldElement, NumberField};
use monolab::orders::{
    disc_ratio_check, l_equivalence, lemma71_verify, moebius_find, same_order, z_equivalence,
};
use monolab::prop61::{classify_solution, identity_sweep, match_identity, IdentityVerdict};
use monolab::uniteq::{detect_degeneracy, solve_linear_unit_eq, MultiPoly, UnitGroup};

type Outcome = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn k(cs: &[i64]) -> Arc<NumberField> {
    NumberField::from_i64s(cs).unwrap()
}

fn int(k: &Arc<NumberField>, n: i64) -> FieldElement {
    FieldElement::from_integer(k, n)
}

/// A pair `(α, β)` with `ℤ[α] = ℤ[β]`, labelled by where it came from.
struct Pair {
    label: String,
    alpha: FieldElement,
    beta: FieldElement,
}

fn resolvent_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut seen = 0;
    let mut draws = 0;
    while seen < 50 {
        draws += 1;
        ensure!(draws < 10_000, "too few irreducible quartics");
        let r: i64 = rng.gen_range(-10..=10);
        let s: i64 = rng.gen_range(-10..=10);
        // (X² − r)² − X − s
        let f = IntPoly::from_i64s(&[r * r - s, -1, -2 * r, 0, 1]);
        if !ok(is_irreducible_q(&f))? {
            continue;
        }
        let got = ok(resolvent_by_elimination(&f))?;
        let want = IntPoly::from_i64s(&[-1, 4 * s, -4 * r, 1]);
        ensure!(got == want, "(r, s) = ({r}, {s}): {got} != {want}");
        seen += 1;
    }
    Ok(format!("50 quartics from {draws} draws"))
}

fn type2_pairs() -> std::result::Result<Vec<Pair>, String> {
    let fam = ok(type2_setup(0, 1))?;
    ensure!(fam.t == 3, "t = {}", fam.t);
    let mut out = Vec::new();
    let mut last: Option<BigInt> = None;
    for m in 0..=3 {
        let mem = ok(type2_member(&fam, m))?;
        let (a, b) = (&mem.alpha, &mem.beta);
        ensure!(a.is_integral() && b.is_integral(), "m = {m}: not integral");
        let r = FieldElement::from_integer(&fam.field, mem.r_m.clone());
        let s = FieldElement::from_integer(&fam.field, mem.s_m.clone());
        ensure!(*b == &(a * a) - &r, "m = {m}: beta != alpha^2 - r_m");
        ensure!(*a == &(b * b) - &s, "m = {m}: alpha != beta^2 - s_m");
        ensure!(ok(same_order(a, b))?, "m = {m}: orders differ");
        ensure!(ok(z_equivalence(a, b))?.is_none(), "m = {m}: Z-equivalent");
        let d = ok(discriminant(&a.char_poly_int().unwrap()))?;
        ensure!(d == mem.disc, "m = {m}: D_m mismatch");
        if let Some(prev) = &last {
            ensure!(d.abs() > prev.abs(), "m = {m}: |D_m| not increasing");
        }
        if m == 0 {
            ensure!(
                *a == FieldElement::generator(&fam.field),
                "alpha_0 != alpha"
            );
            ensure!(
                mem.r_m == 0.into() && mem.s_m == 1.into(),
                "(r_0, s_0) != (0, 1)"
            );
        }
        last = Some(d);
        out.push(Pair {
            label: format!("type II m={m}"),
            alpha: a.clone(),
            beta: b.clone(),
        });
    }
    Ok(out)
}

const TYPE1_MATRICES: [[i64; 4]; 6] = [
    [1, 0, 1, 1],
    [1, 0, -1, 1],
    [0, 1, -1, 1],
    [0, -1, 1, 1],
    [2, 1, 1, 1],
    [1, 1, 2, 1],
];

fn type1_pairs() -> std::result::Result<Vec<Pair>, String> {
    let f = IntPoly::from_i64s(&[-1, -1, 0, 1]);
    let units = ok(unit_search(&f, 4))?;
    let mut out = Vec::new();
    for m in TYPE1_MATRICES {
        let mb = m.map(BigInt::from);
        for u in &units {
            let Ok(p) = type1_construct(&f, &mb, u) else {
                continue;
            };
            let (a, b) = (&p.pair.alpha, &p.pair.beta);
            // β·(a3·α + a4) = a1·α + a2
            let lhs = b * &(&(&int(a.field(), m[2]) * a) + &int(a.field(), m[3]));
            let rhs = &(&int(a.field(), m[0]) * a) + &int(a.field(), m[1]);
            ensure!(lhs == rhs, "{m:?}, u = {u}: not a Moebius image");
            ensure!(ok(same_order(a, b))?, "{m:?}, u = {u}: orders differ");
            ensure!(
                ok(z_equivalence(a, b))?.is_none(),
                "{m:?}, u = {u}: Z-equivalent"
            );
            let found = ok(moebius_find(a, b))?.ok_or("no matrix recovered")?;
            let prim = found.primitive_integer();
            let neg = mb.clone().map(|x| -x);
            ensure!(prim == mb || prim == neg, "{m:?}: recovered {prim:?}");
            let l71 = ok(lemma71_verify(a, b, &prim))?;
            ensure!(l71.det.abs() == 1.into(), "{m:?}: det {}", l71.det);
            out.push(Pair {
                label: format!("type I {m:?} u={u}"),
                alpha: a.clone(),
                beta: b.clone(),
            });
        }
    }
    ensure!(out.len() >= 10, "only {} type I instances", out.len());
    Ok(out)
}

fn disc_ratios(pairs: &[Pair]) -> Outcome {
    for p in pairs {
        let r = ok(disc_ratio_check(&p.alpha, &p.beta))?;
        let da = ok(discriminant(&p.alpha.char_poly_int().unwrap()))?;
        let db = ok(discriminant(&p.beta.char_poly_int().unwrap()))?;
        ensure!(r == 1 || r == -1, "{}: ratio {r}", p.label);
        ensure!(
            db == &da * BigInt::from(r),
            "{}: ratio disagrees with discriminants",
            p.label
        );
    }
    Ok(format!("{} pairs", pairs.len()))
}

fn sextic_family() -> Outcome {
    let k = k(&[1, 0, -1, 0, 1]);
    let z = FieldElement::generator(&k);
    let pw = |x: &FieldElement, e: i64| x.pow(e).unwrap();
    let i = pw(&z, 3);
    let rho = pw(&z, 4);
    let one = int(&k, 1);
    let side = |t: &[FieldElement]| t.iter().fold(one.clone(), |acc, x| &acc * &(x - &one));
    let mut count = 0;
    for e in [1, 2] {
        for j in 0..10 {
            let u = &pw(&z, j) * &pw(&int(&k, 2), e);
            let (u3, u4) = (pw(&u, 3), pw(&u, 4));
            let x = [pw(&u, 6), &i * &u3, -&(&i * &u3)];
            let y = [u4.clone(), &rho * &u4, &(&rho * &rho) * &u4];
            let (l, r) = (side(&x), side(&y));
            ensure!(l == r, "u = {u}: sides differ");
            if j == 0 && e == 1 {
                ensure!(l == int(&k, 4095), "u = 2: {l} != 4095");
                let point: Vec<FieldElement> = x.iter().chain(&y).cloned().collect();
                let w = ok(detect_degeneracy(&MultiPoly::sextic(&k), &point, 6))?;
                ensure!(
                    w.as_ref().map(|w| w.c.clone()) == Some(vec![6, 3, 3, 4, 4, 4]),
                    "witness {w:?}"
                );
            }
            let cl = ok(classify_solution(&x, &y))?;
            ensure!(cl.satisfies_sextic, "u = {u}: classifier rejects");
            ensure!(
                cl.permutation.is_none() && !cl.roots_of_unity.is_empty(),
                "u = {u}: not ROOT_OF_UNITY"
            );
            count += 1;
        }
    }
    Ok(format!("{count} elements, witness (6,3,3,4,4,4)"))
}

fn case_oracle() -> Outcome {
    let k = k(&[1, 1, 1]);
    let w = FieldElement::generator(&k);
    let w2 = &w * &w;
    let u = [int(&k, 1), -&w, -&w2];
    let v = [w2.clone(), w.clone(), int(&k, 1)];
    let (a, b) = ([3, 2, 1], [4, 1, 1]);
    // Both products agree at seven integer points, hence as degree-6
    // polynomials in T.
    for t in 2..9i64 {
        let ev = |xs: &[FieldElement; 3], es: &[u32; 3]| {
            xs.iter()
                .zip(es)
                .fold(int(&k, 1), |acc, (x, &e)| &acc * &(&int(&k, t.pow(e)) - x))
        };
        ensure!(
            ev(&u, &a) == ev(&v, &b),
            "explicit instance differs at T = {t}"
        );
    }
    match ok(match_identity(&u, &v, &a, &b))? {
        IdentityVerdict::Holds {
            cube_root: true, ..
        } => {}
        other => return Err(format!("explicit instance: {other:?}")),
    }
    let s = identity_sweep(&k, 4, 2);
    ensure!(s.violations.is_empty(), "violations: {:?}", s.violations);
    ensure!(s.separated > 0, "no separated identities");
    let cases: Vec<String> = s.per_case.iter().map(|(c, n)| format!("{c}={n}")).collect();
    Ok(format!(
        "{} identities, {} separated, {} permutation, {} cube root; {}",
        s.identities,
        s.separated,
        s.permutation,
        s.cube_root,
        cases.join(" ")
    ))
}

/// `x + y = 1` with `x, y ∈ {±φⁿ : |n| ≤ B}`, by direct search.
fn golden_oracle(k: &Arc<NumberField>, bound: i64) -> BTreeSet<(i64, i64, i64, i64)> {
    let phi = FieldElement::generator(k);
    let one = int(k, 1);
    let elems: Vec<(i64, i64, FieldElement)> = (-bound..=bound)
        .flat_map(|n| {
            let p = phi.pow(n).unwrap();
            [(0, n, p.clone()), (1, n, -&p)]
        })
        .collect();
    let mut out = BTreeSet::new();
    for (s1, n1, x) in &elems {
        for (s2, n2, y) in &elems {
            if x + y == one {
                out.insert((*s1, *n1, *s2, *n2));
            }
        }
    }
    out
}

fn unit_equation() -> Outcome {
    let k = k(&[-1, -1, 1]);
    let g = ok(UnitGroup::new(
        &k,
        vec![int(&k, -1), FieldElement::generator(&k)],
    ))?;
    let one = int(&k, 1);
    let solve = |b: u32| -> std::result::Result<BTreeSet<(i64, i64, i64, i64)>, String> {
        let sols = ok(solve_linear_unit_eq(&one, &one, &g, b, 1 << 20))?;
        Ok(sols
            .iter()
            .map(|(x, y)| {
                let sign = |e: i64| e.rem_euclid(2);
                (
                    sign(x.exponents[0]),
                    x.exponents[1],
                    sign(y.exponents[0]),
                    y.exponents[1],
                )
            })
            .collect())
    };
    let s3 = solve(3)?;
    let s8 = solve(8)?;
    ensure!(s3.len() == 6, "{} solutions at B = 3", s3.len());
    ensure!(s3 == s8, "solution set changes between B = 3 and B = 8");
    ensure!(
        s3 == golden_oracle(&k, 3),
        "solver disagrees with direct search at B = 3"
    );
    ensure!(
        s8 == golden_oracle(&k, 8),
        "solver disagrees with direct search at B = 8"
    );
    Ok("6 solutions, stable from B = 3 to B = 8".into())
}

/// `(z − a)/α` for monic `f`, with `a = z₀ mod |f(0)|`.
fn oracle_step(f: &[i64], z: &[i64]) -> Vec<i64> {
    let d = z.len();
    let n = f[0].abs();
    let a = z[0].rem_euclid(n);
    let q = (z[0] - a) / f[0];
    (0..d)
        .map(|i| z.get(i + 1).copied().unwrap_or(0) - q * f[i + 1])
        .collect()
}

/// Every element with coordinates in `[−R, R]^d` reaches 0 within the
/// step budget.
fn orbit_oracle(f: &[i64]) -> bool {
    const R: i64 = 6;
    const STEPS: usize = 400;
    let d = f.len() - 1;
    if f[0].abs() < 2 {
        return false;
    }
    let mut z = vec![-R; d];
    loop {
        let mut w = z.clone();
        let mut reached = false;
        for _ in 0..STEPS {
            if w.iter().all(|&c| c == 0) {
                reached = true;
                break;
            }
            w = oracle_step(f, &w);
        }
        if !reached {
            return false;
        }
        let mut i = d;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if z[i] < R {
                z[i] += 1;
                break;
            }
            z[i] = -R;
        }
    }
}

fn cns_oracle() -> Outcome {
    let mut polys: Vec<Vec<i64>> = Vec::new();
    for a in -3..=3 {
        for b in 1..=4 {
            polys.push(vec![b, a, 1]);
        }
    }
    polys.push(vec![2, 1]);
    polys.push(vec![2, 2, 1]);
    polys.push(vec![2, -2, 1]);
    let mut cns = 0;
    let mut expansions = 0;
    for cs in &polys {
        let f = IntPoly::from_i64s(cs);
        let rep = ok(cns_check(&f))?;
        ensure!(
            rep.is_cns == orbit_oracle(cs),
            "{f}: check says {}",
            rep.is_cns
        );
        if !rep.is_cns {
            continue;
        }
        cns += 1;
        let ds = ok(DigitSystem::new(&f))?;
        let d = cs.len() - 1;
        for n in 0..(9i64.pow(d as u32)) {
            let z: Vec<BigInt> = (0..d)
                .map(|i| BigInt::from((n / 9i64.pow(i as u32)) % 9 - 4))
                .collect();
            let digits = ok(expand_digits(&ds, &z, 10_000))?;
            ensure!(
                ds.evaluate(&digits) == z,
                "{f}: expansion of {z:?} does not round-trip"
            );
            expansions += 1;
        }
    }
    let verdict = |cs: &[i64]| cns_check(&IntPoly::from_i64s(cs)).unwrap().is_cns;
    ensure!(
        verdict(&[2, 1]) && verdict(&[2, 2, 1]),
        "x+2 or x^2+2x+2 rejected"
    );
    ensure!(!verdict(&[2, -2, 1]), "x^2-2x+2 accepted");
    Ok(format!(
        "{} polynomials, {cns} CNS, {expansions} expansions round-trip",
        polys.len()
    ))
}

fn numeric_agreement(pairs: &[Pair]) -> Outcome {
    for p in pairs {
        let e = ok(EmbeddingSet::for_field(p.alpha.field(), 128))?;
        let sys = ok(epsilon_system(&p.alpha, &p.beta, &e))?;
        let rep = ok(check_eps_identities(&sys, &e))?;
        ensure!(
            rep.triangle.holds(),
            "{}: triangle identity excludes 0",
            p.label
        );
        if let Some(q) = &rep.quadrilateral {
            ensure!(q.holds(), "{}: four-index identity excludes 0", p.label);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let fields = [k(&[-1, -1, 0, 1]), k(&[-1, -1, 0, 0, 1])];
    let embeddings: Vec<EmbeddingSet> = fields
        .iter()
        .map(|f| EmbeddingSet::for_field(f, 128).unwrap())
        .collect();
    let (mut agree, mut equivalent) = (0, 0);
    while agree < 50 {
        let fi = rng.gen_range(0..2);
        let (kk, e) = (&fields[fi], &embeddings[fi]);
        let coords: Vec<i64> = (0..kk.degree()).map(|_| rng.gen_range(-3..=3)).collect();
        let a = FieldElement::from_i64s(kk, &coords);
        if !a.is_generator() {
            continue;
        }
        let b = if rng.gen_bool(0.5) {
            let num = rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 };
            let q = BigRational::new(num.into(), rng.gen_range(1..=4).into());
            let c = BigRational::new(rng.gen_range(-5..=5).into(), rng.gen_range(1..=3).into());
            &a.scale(&q) + &FieldElement::from_rational(kk, &c)
        } else {
            let coords: Vec<i64> = (0..kk.degree()).map(|_| rng.gen_range(-3..=3)).collect();
            FieldElement::from_i64s(kk, &coords)
        };
        if !b.is_generator() || b.is_zero() {
            continue;
        }
        let exact = ok(l_equivalence(&a, &b))?.is_some();
        let ta = ok(tau_tuple(&a, e))?;
        let tb = ok(tau_tuple(&b, e))?;
        ensure!(
            tau_overlap(&ta, &tb) == exact,
            "alpha = {a}, beta = {b}: tau disagrees"
        );
        equivalent += exact as usize;
        agree += 1;
    }
    ensure!(
        equivalent > 0 && equivalent < 50,
        "random pairs are one-sided"
    );
    Ok(format!(
        "{} pairs certified at 128 bits; tau agrees on 50 random pairs ({equivalent} equivalent)",
        pairs.len()
    ))
}

fn main() -> ExitCode {
    let mut pairs: Vec<Pair> = Vec::new();
    let mut failures = 0;
    let mut run = |n: usize, name: &str, limit: u64, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let res = match res {
            Ok(_) if took > Duration::from_secs(limit) => {
                Err(format!("took {took:.1?}, limit {limit} s"))
            }
            r => r,
        };
        match &res {
            Ok(detail) => println!("criterion {n} PASS {name} ({took:.2?}): {detail}"),
            Err(why) => {
                failures += 1;
                println!("criterion {n} FAIL {name} ({took:.2?}): {why}");
            }
        }
    };
    run(1, "resolvent identity", 10, &mut resolvent_identity);
    run(2, "type II family", 60, &mut || {
        let p = type2_pairs()?;
        pairs.extend(p);
        Ok("m = 0..3 verified, |D_m| strictly increasing".into())
    });
    run(3, "type I family", 30, &mut || {
        let p = type1_pairs()?;
        let n = p.len();
        pairs.extend(p);
        Ok(format!("{n} instances"))
    });
    run(4, "discriminant ratio", 30, &mut || disc_ratios(&pairs));
    run(5, "sextic root-of-unity family", 10, &mut sextic_family);
    run(6, "binomial identity case analysis", 120, &mut case_oracle);
    run(7, "unit equation over <-1, phi>", 10, &mut unit_equation);
    run(8, "canonical number systems", 60, &mut cns_oracle);
    run(9, "numeric and exact agreement", 60, &mut || {
        numeric_agreement(&pairs)
    });
    if failures == 0 {
        println!("acceptance: 9/9 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} of 9 criteria fail");
        ExitCode::FAILURE
    }
}
