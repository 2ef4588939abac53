//! `(x1−1)(x2−1)(x3−1) = (y1−1)(y2−1)(y3−1)` over a box of Γ.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::hash::{Hash, Hasher};

use super::{group_enumerate, GroupElement, UnitGroup};
use crate::error::{Error, Result};
use crate::numfield::FieldElement;

/// A solution up to the obvious symmetries: `x` and `y` are sorted index
/// triples into [`SexticReport::elements`], `x < y`, and the common value
/// is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SexticSolution {
    pub x: [usize; 3],
    pub y: [usize; 3],
    pub value: FieldElement,
}

/// Solutions in a box, split into the two trivial families and the rest.
///
/// Trivial families, not listed individually:
/// * `{y} = {x}` as multisets;
/// * some `xᵢ = 1` and some `yⱼ = 1`, so both sides vanish.
#[derive(Clone, Debug)]
pub struct SexticReport {
    pub bound: u32,
    pub elements: Vec<GroupElement>,
    /// Index of 1 in `elements`.
    pub one: usize,
    pub solutions: Vec<SexticSolution>,
}

fn hash_of(x: &FieldElement) -> u64 {
    let mut h = DefaultHasher::new();
    x.hash(&mut h);
    h.finish()
}

/// Cap on the number of unordered triples, as a multiple of the element cap.
const TRIPLE_FACTOR: u128 = 20;

pub fn solve_sextic(g: &UnitGroup, bound: u32, cap: usize) -> Result<SexticReport> {
    let elements = group_enumerate(g, bound, cap)?;
    let one = elements
        .iter()
        .position(|e| e.value.is_one())
        .expect("the identity is in every box");
    let shifted: Vec<Option<FieldElement>> = elements
        .iter()
        .map(|e| {
            let v = &e.value - &FieldElement::one(g.field());
            (!v.is_zero()).then_some(v)
        })
        .collect();
    let live: Vec<usize> = (0..elements.len())
        .filter(|&i| shifted[i].is_some())
        .collect();
    let n = live.len() as u128;
    let triples = n * (n + 1) * (n + 2) / 6;
    if triples > TRIPLE_FACTOR * cap as u128 {
        return Err(Error::BoxTooLarge {
            size: triples,
            cap: (TRIPLE_FACTOR * cap as u128) as usize,
        });
    }

    let for_each_triple = |f: &mut dyn FnMut([usize; 3], FieldElement)| {
        for (a, &i) in live.iter().enumerate() {
            let si = shifted[i].as_ref().unwrap();
            for (b, &j) in live.iter().enumerate().skip(a) {
                let sij = si * shifted[j].as_ref().unwrap();
                for &k in &live[b..] {
                    f([i, j, k], &sij * shifted[k].as_ref().unwrap());
                }
            }
        }
    };

    // Pass 1: count hashes. Pass 2: keep triples whose hash repeats.
    let mut counts: HashMap<u64, u32> = HashMap::new();
    for_each_triple(&mut |_, v| *counts.entry(hash_of(&v)).or_default() += 1);
    counts.retain(|_, c| *c > 1);
    let mut buckets: HashMap<u64, Vec<([usize; 3], FieldElement)>> = HashMap::new();
    for_each_triple(&mut |t, v| {
        let h = hash_of(&v);
        if counts.contains_key(&h) {
            buckets.entry(h).or_default().push((t, v));
        }
    });

    let mut solutions = Vec::new();
    for bucket in buckets.into_values() {
        for (p, (tx, vx)) in bucket.iter().enumerate() {
            for (ty, vy) in &bucket[p + 1..] {
                if vx == vy {
                    let (x, y) = if tx < ty { (*tx, *ty) } else { (*ty, *tx) };
                    solutions.push(SexticSolution {
                        x,
                        y,
                        value: vx.clone(),
                    });
                }
            }
        }
    }
    solutions.sort_by_key(|s| (s.x, s.y));
    Ok(SexticReport {
        bound,
        elements,
        one,
        solutions,
    })
}

fn orderings(t: [usize; 3]) -> BTreeSet<[usize; 3]> {
    let [a, b, c] = t;
    [
        [a, b, c],
        [a, c, b],
        [b, a, c],
        [b, c, a],
        [c, a, b],
        [c, b, a],
    ]
    .into_iter()
    .collect()
}

impl SexticReport {
    pub fn values(&self, t: &[usize]) -> Vec<&FieldElement> {
        t.iter().map(|&i| &self.elements[i].value).collect()
    }

    /// Every ordered 6-tuple of element indices solving the equation.
    /// Intended for tiny boxes.
    pub fn expand(&self) -> HashSet<[usize; 6]> {
        let n = self.elements.len();
        let mut out = HashSet::new();
        let join = |x: &[usize; 3], y: &[usize; 3]| [x[0], x[1], x[2], y[0], y[1], y[2]];
        for s in &self.solutions {
            for x in orderings(s.x) {
                for y in orderings(s.y) {
                    out.insert(join(&x, &y));
                    out.insert(join(&y, &x));
                }
            }
        }
        let mut ordered = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    ordered.push([i, j, k]);
                }
            }
        }
        let has_one = |t: &[usize; 3]| t.contains(&self.one);
        for x in &ordered {
            if has_one(x) {
                for y in ordered.iter().filter(|y| has_one(y)) {
                    out.insert(join(x, y));
                }
            } else {
                let mut sorted = *x;
                sorted.sort();
                for y in orderings(sorted) {
                    out.insert(join(x, &y));
                }
            }
        }
        out
    }
}
