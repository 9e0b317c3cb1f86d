//! Diagonal abelian subgroups G ⊂ SL(3,ℂ) described by fermionic shifts.
//!
//! An element acting by `diag(e^{2πi F⁰}, e^{2πi F¹}, e^{2πi F²})` is stored as
//! its shift triple `(F⁰,F¹,F²) ∈ [0,1)³`. Elements are ordered
//! lexicographically by shift triple, so the identity always has index 0.

use std::collections::HashMap;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::scalar::{frac, q, qi};
use crate::{Error, Result, Q};

/// Default bound on |G|.
pub const DEFAULT_MAX_GROUP: usize = 10_000;

/// Environment variable overriding [`DEFAULT_MAX_GROUP`].
pub const MAX_GROUP_ENV: &str = "ORBIVERTEX_MAX_GROUP";

/// A cyclic generator `diag(ζⁿ^{w₀}, ζⁿ^{w₁}, ζⁿ^{w₂})` with ζₙ = e^{2πi/n}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub order: u64,
    pub weights: [i64; 3],
}

impl Generator {
    /// Shorthand constructor.
    pub fn new(order: u64, weights: [i64; 3]) -> Self {
        Generator { order, weights }
    }

    fn shifts(&self) -> [Q; 3] {
        let n = self.order as i64;
        self.weights.map(|w| q(w.rem_euclid(n), n))
    }
}

/// One group element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    /// Position in the canonical (lexicographic) order.
    pub index: usize,
    /// Fermionic shifts in `[0,1)`.
    pub shifts: [Q; 3],
    /// Order of the element.
    pub order: u64,
    /// Human-readable name in terms of the input generators, e.g. `2g1+g2`.
    pub label: String,
}

impl GroupElement {
    /// The age F⁰+F¹+F², an integer in {0,1,2}.
    pub fn age(&self) -> u8 {
        let s = &self.shifts[0] + &self.shifts[1] + &self.shifts[2];
        s.to_integer().to_u8().expect("age is a small integer")
    }

    /// True when no shift vanishes (the point lies in the interior of the junior triangle).
    pub fn all_shifts_nonzero(&self) -> bool {
        self.shifts.iter().all(|s| !s.is_zero())
    }
}

/// The abelian group together with its canonical presentation.
#[derive(Clone, Debug)]
pub struct GroupModel {
    /// Input generators (weights already rotated if a coordinate permutation was applied).
    pub generators: Vec<Generator>,
    /// All elements, lexicographically ordered by shift triple.
    pub elements: Vec<GroupElement>,
    /// |G₀|, |G₁|, |G₂| where G_j is the stabilizer of the j-th coordinate axis direction.
    pub iso_orders: [usize; 3],
    /// Index of α (F¹_α = 1/|G/G₁|).
    pub alpha: usize,
    /// Index of β (generator of G₁).
    pub beta: usize,
    /// Integers (a,b,c): F⁰_β = a/|G₁|, F⁰_α = b/|G/G₀|, F²_α = c/|G/G₂|.
    pub abc: (i64, i64, i64),
    /// Age-one elements in canonical order.
    pub small: Vec<usize>,
    /// Number of cyclic coordinate rotations `(z₀,z₁,z₂) ↦ (z₁,z₂,z₀)` applied to make G/G₁ nontrivial.
    pub rotation: u8,
    lookup: HashMap<[Q; 3], usize>,
}

fn max_group() -> usize {
    std::env::var(MAX_GROUP_ENV)
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_MAX_GROUP)
}

fn add_shifts(a: &[Q; 3], b: &[Q; 3]) -> [Q; 3] {
    [frac(&(&a[0] + &b[0])), frac(&(&a[1] + &b[1])), frac(&(&a[2] + &b[2]))]
}

fn element_order(s: &[Q; 3]) -> u64 {
    s.iter()
        .map(|x| x.denom().to_u64().expect("small denominator"))
        .fold(1, |a, d| a.lcm(&d))
}

fn rotate(s: &[Q; 3], k: u8) -> [Q; 3] {
    let k = k as usize;
    [s[k % 3].clone(), s[(k + 1) % 3].clone(), s[(k + 2) % 3].clone()]
}

fn label(counter: &[u64]) -> String {
    let parts: Vec<String> = counter
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| if k == 1 { format!("g{}", i + 1) } else { format!("{k}g{}", i + 1) })
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}

/// Builds the group generated by `generators` and its canonical presentation.
pub fn build_group(generators: &[Generator]) -> Result<GroupModel> {
    if generators.is_empty() {
        return Err(Error::TrivialGroup);
    }
    for g in generators {
        if g.order == 0 {
            return Err(Error::Parse("generator order must be at least 1".into()));
        }
        let s: i64 = g.weights.iter().sum();
        if s.rem_euclid(g.order as i64) != 0 {
            return Err(Error::NonSL(format!(
                "weights {:?} sum to {s}, not 0 mod {}",
                g.weights, g.order
            )));
        }
    }
    let cap = max_group();
    let declared: u128 = generators.iter().map(|g| g.order as u128).product();
    if declared > (cap as u128).saturating_mul(1024) {
        return Err(Error::GroupTooLarge { order: declared.min(usize::MAX as u128) as usize, cap });
    }

    // Mixed-radix sweep over all generator powers, first generator fastest.
    let gens: Vec<[Q; 3]> = generators.iter().map(Generator::shifts).collect();
    let mut seen: HashMap<[Q; 3], String> = HashMap::new();
    let mut counter = vec![0u64; generators.len()];
    let zero = [Q::zero(), Q::zero(), Q::zero()];
    let mut current = zero.clone();
    loop {
        seen.entry(current.clone()).or_insert_with(|| label(&counter));
        // increment the counter
        let mut i = 0;
        loop {
            if i == counter.len() {
                break;
            }
            counter[i] += 1;
            current = add_shifts(&current, &gens[i]);
            if counter[i] < generators[i].order {
                break;
            }
            counter[i] = 0;
            i += 1;
        }
        if i == counter.len() {
            break;
        }
    }

    if seen.len() == 1 {
        return Err(Error::TrivialGroup);
    }
    if (seen.len() as u128) < declared {
        return Err(Error::Ineffective(format!(
            "{} declared generator powers give only {} distinct actions",
            declared,
            seen.len()
        )));
    }
    if seen.len() > cap {
        return Err(Error::GroupTooLarge { order: seen.len(), cap });
    }
    for s in seen.keys() {
        let a = &s[0] + &s[1] + &s[2];
        if !a.is_integer() {
            return Err(Error::NonSL(format!("element with shifts {s:?} has non-integral age")));
        }
    }

    // Make G/G₁ nontrivial by rotating coordinates if needed.
    let rotation: u8 = if seen.keys().all(|s| s[1].is_zero()) { 1 } else { 0 };
    let mut elems: Vec<([Q; 3], String)> =
        seen.into_iter().map(|(s, l)| (rotate(&s, rotation), l)).collect();
    elems.sort();
    let elements: Vec<GroupElement> = elems
        .into_iter()
        .enumerate()
        .map(|(index, (shifts, label))| GroupElement {
            index,
            order: element_order(&shifts),
            shifts,
            label,
        })
        .collect();
    let lookup = elements.iter().map(|e| (e.shifts.clone(), e.index)).collect();
    let generators = generators
        .iter()
        .map(|g| {
            let w = g.weights;
            let r = rotation as usize;
            Generator::new(g.order, [w[r % 3], w[(r + 1) % 3], w[(r + 2) % 3]])
        })
        .collect();

    let n = elements.len();
    let iso_orders = [0, 1, 2].map(|j| elements.iter().filter(|e| e.shifts[j].is_zero()).count());
    let quot = iso_orders.map(|o| n / o);

    let target_alpha = q(1, quot[1] as i64);
    let alpha = elements
        .iter()
        .find(|e| e.shifts[1] == target_alpha)
        .map(|e| e.index)
        .ok_or_else(|| Error::InternalInconsistency("no element with F¹ = 1/|G/G₁|".into()))?;
    let g1 = iso_orders[1];
    let target_beta = if g1 == 1 { Q::zero() } else { q(1, g1 as i64) };
    let beta = elements
        .iter()
        .filter(|e| e.shifts[1].is_zero() && e.shifts[2] == target_beta)
        .min_by(|a, b| a.shifts[0].cmp(&b.shifts[0]))
        .map(|e| e.index)
        .ok_or_else(|| Error::InternalInconsistency("no generator β of G₁".into()))?;
    let to_int = |x: Q| -> Result<i64> {
        if x.is_integer() {
            Ok(x.to_integer().to_i64().expect("small"))
        } else {
            Err(Error::InternalInconsistency(format!("non-integral presentation constant {x}")))
        }
    };
    let a = to_int(&elements[beta].shifts[0] * qi(g1 as i64))?;
    let b = to_int(&elements[alpha].shifts[0] * qi(quot[0] as i64))?;
    let c = to_int(&elements[alpha].shifts[2] * qi(quot[2] as i64))?;
    let small = elements.iter().filter(|e| e.age() == 1).map(|e| e.index).collect();

    Ok(GroupModel {
        generators,
        elements,
        iso_orders,
        alpha,
        beta,
        abc: (a, b, c),
        small,
        rotation,
        lookup,
    })
}

impl GroupModel {
    /// |G|.
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// |G/G_j|.
    pub fn quotient_order(&self, j: usize) -> usize {
        self.order() / self.iso_orders[j]
    }

    /// The element with index `i`.
    pub fn element(&self, i: usize) -> &GroupElement {
        &self.elements[i]
    }

    /// Shifts of element `i`.
    pub fn shifts(&self, i: usize) -> &[Q; 3] {
        &self.elements[i].shifts
    }

    /// Index of the element with the given shifts, if any.
    pub fn index_of(&self, shifts: &[Q; 3]) -> Option<usize> {
        self.lookup.get(shifts).copied()
    }

    /// Index of the element with the given label (e.g. `g1`, `2g1`, `g1+g2`).
    pub fn by_label(&self, label: &str) -> Option<usize> {
        self.elements.iter().find(|e| e.label == label).map(|e| e.index)
    }

    /// Group law.
    pub fn add(&self, i: usize, j: usize) -> usize {
        let s = add_shifts(self.shifts(i), self.shifts(j));
        self.lookup[&s]
    }

    /// Inverse element.
    pub fn neg(&self, i: usize) -> usize {
        let s = self.shifts(i).clone().map(|x| frac(&-x));
        self.lookup[&s]
    }

    /// k·α + l·β.
    pub fn combination(&self, k: usize, l: usize) -> usize {
        let mut x = 0;
        for _ in 0..k {
            x = self.add(x, self.alpha);
        }
        for _ in 0..l {
            x = self.add(x, self.beta);
        }
        x
    }

    /// Age of element `i`.
    pub fn age(&self, i: usize) -> u8 {
        self.elements[i].age()
    }

    /// The small part G_s: all age-one elements in canonical order.
    pub fn small_part(&self) -> &[usize] {
        &self.small
    }

    /// s = |G_s|.
    pub fn s(&self) -> usize {
        self.small.len()
    }

    /// An age-one h with F⁰_h = 1/|G/G₀|, found by exhaustive search.
    pub fn find_age_one_with_min_shift(&self) -> Result<usize> {
        if self.iso_orders[0] == self.order() {
            return Err(Error::NotApplicable("|G| = |G₀|: the group fixes z₀".into()));
        }
        let target = q(1, self.quotient_order(0) as i64);
        self.small
            .iter()
            .copied()
            .find(|&h| self.shifts(h)[0] == target)
            .ok_or_else(|| Error::InternalInconsistency("no age-one element with minimal F⁰".into()))
    }

    /// Shifts predicted by the (α,β) presentation for kα+lβ.
    pub fn presentation_shifts(&self, k: usize, l: usize) -> [Q; 3] {
        let (a, b, c) = self.abc;
        let (k, l) = (k as i64, l as i64);
        let g1 = self.iso_orders[1] as i64;
        [
            frac(&(q(k * b, self.quotient_order(0) as i64) + q(l * a, g1))),
            q(k, self.quotient_order(1) as i64),
            frac(&(q(k * c, self.quotient_order(2) as i64) + q(l, g1))),
        ]
    }

    /// Element ids by age.
    pub fn by_age(&self, age: u8) -> Vec<usize> {
        self.elements.iter().filter(|e| e.age() == age).map(|e| e.index).collect()
    }

    /// Human-readable name of element `i`.
    pub fn label(&self, i: usize) -> &str {
        &self.elements[i].label
    }

    /// Checks F¹_α, F²_β, F¹_β and the bijection (k,l) ↦ kα+lβ.
    pub fn check_presentation(&self) -> Result<()> {
        let g1 = self.iso_orders[1];
        let quot1 = self.quotient_order(1);
        let e = |m: &str| Err(Error::InternalInconsistency(m.to_string()));
        if self.shifts(self.alpha)[1] != q(1, quot1 as i64) {
            return e("F¹_α ≠ 1/|G/G₁|");
        }
        let want = if g1 == 1 { Q::zero() } else { q(1, g1 as i64) };
        if self.shifts(self.beta)[2] != want || !self.shifts(self.beta)[1].is_zero() {
            return e("β is not the distinguished generator of G₁");
        }
        let mut hit = vec![false; self.order()];
        for k in 0..quot1 {
            for l in 0..g1 {
                let x = self.combination(k, l);
                if hit[x] {
                    return e("(k,l) ↦ kα+lβ is not injective");
                }
                hit[x] = true;
                if self.shifts(x) != &self.presentation_shifts(k, l) {
                    return e("shift formulas disagree with the group law");
                }
            }
        }
        if hit.iter().all(|&h| h) {
            Ok(())
        } else {
            e("(k,l) ↦ kα+lβ is not surjective")
        }
    }
}
