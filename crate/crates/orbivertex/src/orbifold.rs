//! Orbifold side: torus weights, the disc function, the closed mirror map
//! X_h(x⃗) and the orbifold disc potential 𝓕₀,₁ in the B-model variables (x⃗, x₀).
//!
//! Series live in the variables `x_g` (g ∈ G_s, canonical order) followed by `x0`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::gamma::{falling_factorial, gamma_ratio, sign_pow};
use crate::group::GroupModel;
use crate::lattice::TrianglePoints;
use crate::resolution::{compositions_up_to, Potential, Side};
use crate::scalar::{floor_i64, frac, qi};
use crate::{Error, Result, Series, Q};

/// Torus weights (λ₀, λ₁, λ₂) = (1/|G/G₀|, −a, a − 1/|G/G₀|).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusWeights {
    #[serde(with = "crate::io::q_serde")]
    pub a: Q,
    #[serde(with = "crate::io::qvec_serde")]
    pub lambda: Vec<Q>,
}

impl TorusWeights {
    /// Builds the weights, checking a ∈ (1/|G|)ℤ. Every Γ-argument difference in the
    /// orbifold formulas is an integer for such a; the framing correspondence always
    /// lands in this set.
    pub fn new(g: &GroupModel, a: Q) -> Result<Self> {
        if !(&a * qi(g.order() as i64)).is_integer() {
            return Err(Error::WeightNotAdmissible(crate::scalar::fmt_q(&a)));
        }
        let l0 = qi(g.quotient_order(0) as i64).recip();
        let lambda = vec![l0.clone(), -a.clone(), a.clone() - l0];
        Ok(TorusWeights { a, lambda })
    }

    /// Whether a ∈ (1/|G/G₀|)ℤ, the range where the x₀-recursion has integral length.
    pub fn is_coarse(&self, g: &GroupModel) -> bool {
        (&self.a * qi(g.quotient_order(0) as i64)).is_integer()
    }

    /// λ_j.
    pub fn l(&self, j: usize) -> &Q {
        &self.lambda[j]
    }
}

/// Variable names `x_<label>` for G_s.
pub fn x_vars(g: &GroupModel) -> Vec<String> {
    g.small_part().iter().map(|&h| format!("x_{}", g.label(h))).collect()
}

/// Variable names `x_<label>…, x0`.
pub fn x_vars_open(g: &GroupModel) -> Vec<String> {
    let mut v = x_vars(g);
    v.push("x0".into());
    v
}

/// |G₀| as a rational.
fn g0_order(g: &GroupModel) -> Q {
    qi(g.iso_orders[0] as i64)
}

/// The disc function D_k(d,a) for an element index `k` and winding d ≥ 1.
pub fn disc_function(g: &GroupModel, k: usize, d: i64, w: &TorusWeights) -> Result<Q> {
    if d < 1 {
        return Err(Error::NotApplicable(format!("disc function needs d ≥ 1, got {d}")));
    }
    TorusWeights::new(g, w.a.clone())?;
    let f = g.shifts(k);
    let dq = qi(d);
    if f[0] != frac(&(w.l(0) * &dq)) {
        return Ok(Q::zero());
    }
    let age = g.age(k) as i32;
    let mut v = dq.pow(-age) / g0_order(g);
    let n0 = Q::one() + w.l(0) * &dq - &f[0];
    v *= crate::gamma::inv_gamma_one_plus::<Q>(integer(&(n0 - Q::one()))?);
    v *= gamma_ratio(&(-(w.l(2) * &dq) + &f[2]), &(Q::one() + w.l(1) * &dq - &f[1]))?;
    Ok(v)
}

fn integer(x: &Q) -> Result<i64> {
    if !x.is_integer() {
        return Err(Error::InternalInconsistency(format!("expected an integer, got {x}")));
    }
    Ok(floor_i64(x))
}

/// Σ_g k_g F_g^{(j)} for j = 0,1,2.
fn shift_sums(g: &GroupModel, k: &[i64]) -> [Q; 3] {
    let mut s = [Q::zero(), Q::zero(), Q::zero()];
    for (&h, &kh) in g.small_part().iter().zip(k) {
        for (j, sj) in s.iter_mut().enumerate() {
            *sj += &g.shifts(h)[j] * qi(kh);
        }
    }
    s
}

/// The group element Σ_g k_g·g.
pub fn element_of(g: &GroupModel, k: &[i64]) -> usize {
    let s = shift_sums(g, k);
    let sh = [frac(&s[0]), frac(&s[1]), frac(&s[2])];
    g.index_of(&sh).expect("shift sums of group elements are group elements")
}

/// The closed orbifold mirror map: X_h(x⃗) for each h ∈ G_s.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbifoldMirror {
    pub x_map: Vec<Series>,
    /// Formal phase p with X₀ = (−1)^p x₀, namely 1 + λ₂.
    pub x0_phase: Q,
}

fn factorials_inv(k: &[i64]) -> Q {
    k.iter().fold(Q::one(), |acc, &x| acc * crate::gamma::inv_gamma_one_plus::<Q>(x))
}

/// X_h = −Σ_{Σk_g g = h} ∏_j Γ(Σk_gF_g^{(j)})/Γ(F_h^{(j)}) ∏ (−x_g)^{k_g}/k_g!, to total degree D.
pub fn orbifold_mirror_map(g: &GroupModel, w: &TorusWeights, d: i64) -> Result<OrbifoldMirror> {
    let s = g.s();
    let vars = x_vars(g);
    let mut x_map = vec![Series::zero(vars, qi(d)); s];
    for k in compositions_up_to(s, d).into_iter().filter(|k| k.iter().any(|&x| x > 0)) {
        let h = element_of(g, &k);
        let Some(pos) = g.small_part().iter().position(|&x| x == h) else { continue };
        let sums = shift_sums(g, &k);
        let mut v = -factorials_inv(&k) * sign_pow::<Q>(k.iter().sum());
        for (j, sj) in sums.iter().enumerate() {
            v *= gamma_ratio(sj, &g.shifts(h)[j])?;
        }
        x_map[pos].add_int_term(&k, v);
    }
    Ok(OrbifoldMirror { x_map, x0_phase: Q::one() + w.l(2) })
}

/// C(k⃗;d) without the formal x₀ phase, or `None` when the twisted-sector constraint
/// ⟨Σk_gF_g^{(0)}⟩ = ⟨λ₀d⟩ fails.
pub fn disc_coefficient(g: &GroupModel, w: &TorusWeights, k: &[i64], d: i64) -> Result<Option<Q>> {
    let sums = shift_sums(g, k);
    let dq = qi(d);
    let l = |j: usize| w.l(j) * &dq;
    if frac(&sums[0]) != frac(&l(0)) {
        return Ok(None);
    }
    let mut v = sign_pow::<Q>(floor_i64(&sums[2])) / g0_order(g) / &dq * factorials_inv(k);
    v *= crate::gamma::inv_gamma_one_plus::<Q>(integer(&(l(0) - &sums[0]))?);
    v *= gamma_ratio(&(&sums[2] - l(2)), &(Q::one() - &sums[1] + l(1)))?;
    Ok(Some(v))
}

/// 𝓕₀,₁ over the box k_g ≤ kmax[g], 1 ≤ d ≤ dmax, with x₀^d carrying the formal phase
/// (1+λ₂)d. The truncation is Σ kmax + dmax.
pub fn orbifold_disc_potential_box(g: &GroupModel, w: &TorusWeights, kmax: &[i64], dmax: i64) -> Result<Potential> {
    let s = g.s();
    let trunc = kmax.iter().sum::<i64>() + dmax;
    let mut f = Series::zero(x_vars_open(g), qi(trunc));
    let phase0 = Q::one() + w.l(2);
    let mut k = vec![0i64; s];
    loop {
        for d in 1..=dmax {
            if let Some(c) = disc_coefficient(g, w, &k, d)? {
                let mut e: Vec<Q> = k.iter().map(|&x| qi(x)).collect();
                e.push(qi(d));
                f.add_term(e, &(&phase0 * qi(d)), c);
            }
        }
        // odometer over the box
        let mut i = 0;
        while i < s && k[i] == kmax[i] {
            k[i] = 0;
            i += 1;
        }
        if i == s {
            break;
        }
        k[i] += 1;
    }
    Ok(Potential { series: f, side: Side::Orbifold, framing: None, weight_a: Some(w.a.clone()) })
}

/// 𝓕₀,₁ to total degree D in (x⃗, x₀).
pub fn orbifold_disc_potential(g: &GroupModel, w: &TorusWeights, d: i64) -> Result<Potential> {
    let s = g.s();
    let mut p = orbifold_disc_potential_box(g, w, &vec![d; s], d)?;
    p.series = p.series.truncate(qi(d));
    Ok(p)
}

/// Orbifold charge vectors l̂^{(g)} and l̂^{(0)} over (z₀,z₁,z₂, z_g…, z₊, z₋).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbifoldCharges {
    #[serde(with = "crate::io::qmat_serde")]
    pub closed: Vec<Vec<Q>>,
    #[serde(with = "crate::io::qvec_serde")]
    pub open: Vec<Q>,
}

/// l̂^{(g)} = (−n_gF_g, n_g e_g, 0, 0) and l̂^{(0)} = |G/G₀|(λ₀,λ₁,λ₂,0…,1,−1); the closed
/// vectors are checked to be relations among the ṽ's.
pub fn orbifold_charge_vectors(g: &GroupModel, t: &TrianglePoints, w: &TorusWeights) -> Result<OrbifoldCharges> {
    let s = g.s();
    let mut closed = Vec::with_capacity(s);
    for (l, &h) in g.small_part().iter().enumerate() {
        let n = qi(g.element(h).order as i64);
        let mut v: Vec<Q> = g.shifts(h).iter().map(|f| -(f * &n)).collect();
        v.extend((0..s).map(|k| if k == l { n.clone() } else { Q::zero() }));
        v.extend([Q::zero(), Q::zero()]);
        for c in 0..3 {
            let r: Q = (0..3 + s).map(|i| &v[i] * qi(t.vtilde[i][c])).sum();
            if !r.is_zero() {
                return Err(Error::InternalInconsistency(format!("l̂ for {} is not a relation", g.label(h))));
            }
        }
        closed.push(v);
    }
    let n0 = qi(g.quotient_order(0) as i64);
    let mut open: Vec<Q> = w.lambda.iter().map(|x| x * &n0).collect();
    open.extend((0..s).map(|_| Q::zero()));
    open.extend([n0.clone(), -n0]);
    Ok(OrbifoldCharges { closed, open })
}

/// Checks both recursion relations of C(k⃗;d) at a given index; requires λ₁ ≥ 0.
/// Returns false on the first violated relation.
pub fn check_recursions(g: &GroupModel, w: &TorusWeights, k: &[i64], d: i64) -> Result<bool> {
    if *w.l(1) < Q::zero() || !w.is_coarse(g) {
        return Err(Error::NotApplicable("recursions need λ₁ ≥ 0 and a ∈ (1/|G/G₀|)ℤ".into()));
    }
    let Some(c) = disc_coefficient(g, w, k, d)? else { return Ok(true) };
    let sums = shift_sums(g, k);
    let dq = qi(d);
    let len = |x: Q| -> Result<u32> { Ok(integer(&x)? as u32) };
    for (l, &h) in g.small_part().iter().enumerate() {
        let n = g.element(h).order as i64;
        let mut k2 = k.to_vec();
        k2[l] += n;
        let c2 = disc_coefficient(g, w, &k2, d)?.expect("same twisted sector");
        let lhs = falling_factorial(&qi(k2[l]), n as u32) * c2;
        let mut rhs = c.clone();
        for j in 0..3 {
            let x = -sums[j].clone() + w.l(j) * &dq;
            rhs *= falling_factorial(&x, len(&g.shifts(h)[j] * qi(n))?);
        }
        if lhs != rhs {
            return Ok(false);
        }
    }
    let n0 = g.quotient_order(0) as i64;
    let d2 = d + n0;
    let d2q = qi(d2);
    let c2 = disc_coefficient(g, w, k, d2)?.expect("same twisted sector");
    // the x₀ phase (1+λ₂)n₀ between the two windings is an integer sign
    let phase = integer(&((Q::one() + w.l(2)) * qi(n0)))?;
    let mut lhs = falling_factorial(&d2q, n0 as u32) * c2 * sign_pow::<Q>(phase);
    for j in 0..2 {
        let x = -sums[j].clone() + w.l(j) * &d2q;
        lhs *= falling_factorial(&x, len(w.l(j) * qi(n0))?);
    }
    let m = len(-(w.l(2) * qi(n0)))?;
    let rhs = falling_factorial(&-dq.clone(), n0 as u32)
        * falling_factorial(&(-sums[2].clone() + w.l(2) * &dq), m)
        * c;
    Ok(lhs == rhs)
}
