//! Resolution side: Frobenius coefficients, the open-closed mirror map,
//! the superpotential W and Picard–Fuchs checks.
//!
//! Series live in the variables `q_g` (g ∈ G_s, canonical order) followed by `q0`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::charges::ChargeSystem;
use crate::gamma::{falling_factorial, gamma_ratio, gamma_ratio_strict, inv_gamma_one_plus, sign_pow};
use crate::group::GroupModel;
use crate::scalar::{qi, Dual, Scalar};
use crate::series::{total_degree, Monomial};
use crate::{Error, Result, Series, Q};

/// All m ∈ ℤ^s_{≥0} with Σm ≤ max, in lexicographic order.
pub fn compositions_up_to(s: usize, max: i64) -> Vec<Vec<i64>> {
    fn rec(k: usize, s: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if k == s {
            out.push(cur.clone());
            return;
        }
        for x in 0..=left {
            cur.push(x);
            rec(k + 1, s, left - x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if max >= 0 {
        rec(0, s, max, &mut Vec::new(), &mut out);
    }
    out
}

/// Variable names `q_<label>` for G_s.
pub fn q_vars(g: &GroupModel) -> Vec<String> {
    g.small_part().iter().map(|&h| format!("q_{}", g.label(h))).collect()
}

/// Variable names `q_<label>…, q0`.
pub fn q_vars_open(g: &GroupModel) -> Vec<String> {
    let mut v = q_vars(g);
    v.push("q0".into());
    v
}

/// ⟨m, l_i⟩ = Σ_g m_g l_i^{(g)} for every i ∈ 𝒮.
pub fn pairings(cs: &ChargeSystem, m: &[i64]) -> Vec<i64> {
    let n = cs.l0.len();
    (0..n).map(|i| cs.charges.iter().zip(m).map(|(l, mk)| l[i] * mk).sum()).collect()
}

/// The Frobenius coefficient A_{m,m₀}(r,r₀), generic over the scalar so it can be
/// differentiated in r with dual numbers.
pub fn frobenius_coefficient<T: Scalar>(cs: &ChargeSystem, m: &[i64], m0: i64, r: &[T], r0: &T) -> Result<T> {
    let n = cs.l0.len();
    let mut acc = T::one();
    for i in 0..n {
        let base = cs
            .charges
            .iter()
            .zip(r)
            .fold(r0.clone() * T::int(cs.l0[i]), |s, (l, rk)| s + rk.clone() * T::int(l[i]));
        let z1 = T::one() + base.clone();
        let shift = m0 * cs.l0[i] + cs.charges.iter().zip(m).map(|(l, mk)| l[i] * mk).sum::<i64>();
        let z2 = z1.clone() + T::int(shift);
        acc = acc * gamma_ratio(&z1, &z2)?;
    }
    let one_p = T::one() + r0.clone();
    acc = acc * gamma_ratio(&one_p, &(one_p.clone() + T::int(m0)))?;
    let one_m = T::one() - r0.clone();
    acc = acc * gamma_ratio(&one_m, &(one_m.clone() - T::int(m0)))?;
    Ok(acc)
}

/// ∂A/∂r_l at r = 0 (index `l` over G_s, or `None` for r₀), computed with dual numbers.
pub fn frobenius_derivative(cs: &ChargeSystem, m: &[i64], m0: i64, l: Option<usize>) -> Result<Q> {
    let s = cs.s();
    let r: Vec<Dual<Q>> = (0..s)
        .map(|k| if Some(k) == l { Dual::variable(Q::zero()) } else { Dual::constant(Q::zero()) })
        .collect();
    let r0 = if l.is_none() { Dual::variable(Q::zero()) } else { Dual::constant(Q::zero()) };
    Ok(frobenius_coefficient(cs, m, m0, &r, &r0)?.eps)
}

/// The kernel (−1)^{⟨m,l_h⟩}Γ(−⟨m,l_h⟩)/∏_{i≠h}Γ(1+⟨m,l_i⟩) for ⟨m,l_h⟩ < 0 (else 0).
fn correction_kernel(p: &[i64], h: usize) -> Q {
    if p[h] >= 0 {
        return Q::zero();
    }
    let mut v: Q = sign_pow::<Q>(p[h]) / inv_gamma_one_plus::<Q>(-p[h] - 1);
    for (i, &pi) in p.iter().enumerate() {
        if i != h {
            v *= inv_gamma_one_plus::<Q>(pi);
            if v.is_zero() {
                break;
            }
        }
    }
    v
}

/// Quantum corrections 𝒞_g (g ∈ G_s) and 𝒞₀ of the open-closed mirror map.
#[derive(Clone, Debug, PartialEq)]
pub struct MirrorMap {
    pub corrections: Vec<Series>,
    pub c0: Series,
}

/// 𝒞_l and 𝒞₀ up to total degree `d` in q⃗.
pub fn mirror_corrections(g: &GroupModel, cs: &ChargeSystem, d: i64) -> MirrorMap {
    let s = cs.s();
    let vars = q_vars(g);
    let mut corrections = vec![Series::zero(vars.clone(), qi(d)); s];
    let mut c0 = Series::zero(vars, qi(d));
    for m in compositions_up_to(s, d).into_iter().filter(|m| m.iter().any(|&x| x > 0)) {
        let p = pairings(cs, &m);
        for k in 0..s {
            let h = 3 + k;
            let kern = correction_kernel(&p, h);
            if kern.is_zero() {
                continue;
            }
            for (l, c) in corrections.iter_mut().enumerate() {
                c.add_int_term(&m, -qi(cs.charges[l][h]) * &kern);
            }
            c0.add_int_term(&m, -qi(cs.l0[h]) * &kern);
        }
    }
    MirrorMap { corrections, c0 }
}

/// Which side a potential belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Resolution,
    Orbifold,
}

/// A disc potential with its provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct Potential {
    pub series: Series,
    pub side: Side,
    /// Integer framing f (resolution side).
    pub framing: Option<i64>,
    /// Torus-weight parameter a (orbifold side).
    pub weight_a: Option<Q>,
}

fn superpotential_domain(cs: &ChargeSystem, m: &[i64], m0: i64) -> Option<Vec<i64>> {
    let p = pairings(cs, m);
    let n: Vec<i64> = p.iter().zip(&cs.l0).map(|(pi, l0)| m0 * l0 + pi).collect();
    let ok = n.iter().zip(&cs.l0).all(|(ni, l0)| if *l0 >= 0 { *ni >= 0 } else { *ni < 0 });
    ok.then_some(n)
}

/// The general-framing coefficient of q⃗^m q₀^{m₀} in W (zero outside the summation domain).
pub fn superpotential_general_coefficient(cs: &ChargeSystem, m: &[i64], m0: i64) -> Q {
    let Some(n) = superpotential_domain(cs, m, m0) else { return Q::zero() };
    let mut v: Q = sign_pow::<Q>(m0) / qi(m0);
    for (ni, l0) in n.iter().zip(&cs.l0) {
        if *l0 < 0 {
            v *= sign_pow::<Q>(*ni) / inv_gamma_one_plus::<Q>(-ni - 1);
        } else {
            v *= inv_gamma_one_plus::<Q>(*ni);
        }
    }
    v
}

/// The coefficient of q⃗^m q₀^{m₀} from the framing-specific closed form
/// (the f ≥ 0 form for f ≥ 0 and the f < 0 form otherwise).
pub fn superpotential_printed_coefficient(cs: &ChargeSystem, m: &[i64], m0: i64) -> Result<Q> {
    let (i0, i1, i2) = cs.brane;
    let f = cs.framing;
    let p = pairings(cs, m);
    let mut v = Q::one();
    for (i, &pi) in p.iter().enumerate() {
        if i != i0 && i != i1 && i != i2 {
            v *= inv_gamma_one_plus::<Q>(pi);
        }
    }
    if v.is_zero() {
        return Ok(v);
    }
    v *= inv_gamma_one_plus::<Q>(m0 + p[i0]);
    let signs = |idx: usize| -> i64 { cs.charges.iter().zip(m).map(|(l, mk)| l[idx] * mk).sum() };
    if f >= 0 {
        if (f + 1) * m0 <= p[i2] {
            return Ok(Q::zero());
        }
        v *= gamma_ratio_strict(&qi((f + 1) * m0 - p[i2]), &qi(1 + f * m0 + p[i1]))?;
        v *= sign_pow::<Q>(f * m0 + signs(i2));
    } else {
        if f * m0 + p[i1] >= 0 {
            return Ok(Q::zero());
        }
        v *= gamma_ratio_strict(&qi(-f * m0 - p[i1]), &qi(1 - m0 * (f + 1) + p[i2]))?;
        v *= sign_pow::<Q>((f + 1) * m0 + signs(i1));
    }
    Ok(v / qi(m0))
}

/// W(q⃗,q₀;f) up to total degree `d`, from the framing-specific closed form.
pub fn superpotential(g: &GroupModel, cs: &ChargeSystem, d: i64) -> Result<Potential> {
    let s = cs.s();
    let mut w = Series::zero(q_vars_open(g), qi(d));
    for m0 in 1..=d {
        for m in compositions_up_to(s, d - m0) {
            let c = superpotential_printed_coefficient(cs, &m, m0)?;
            if !c.is_zero() {
                let mut e = m.clone();
                e.push(m0);
                w.add_int_term(&e, c);
            }
        }
    }
    Ok(Potential { series: w, side: Side::Resolution, framing: Some(cs.framing), weight_a: None })
}

/// W from the general-framing form (reference for [`superpotential`]).
pub fn superpotential_general(g: &GroupModel, cs: &ChargeSystem, d: i64) -> Series {
    let s = cs.s();
    let mut w = Series::zero(q_vars_open(g), qi(d));
    for m0 in 1..=d {
        for m in compositions_up_to(s, d - m0) {
            let c = superpotential_general_coefficient(cs, &m, m0);
            let mut e = m.clone();
            e.push(m0);
            w.add_int_term(&e, c);
        }
    }
    w
}

/// A solution candidate Σ_h c_h log q_h + S(q⃗,q₀) for the Picard–Fuchs system.
#[derive(Clone, Debug, PartialEq)]
pub struct LogSeries {
    /// Coefficients of log q_g (g ∈ G_s) and finally of log q₀.
    pub logs: Vec<Q>,
    pub series: Series,
}

/// A Θ-polynomial term: coefficient × product of falling factorials of linear forms,
/// applied after multiplication by the monomial `shift`.
#[derive(Clone, Debug)]
pub struct ThetaTerm {
    pub coeff: Q,
    /// Factors (linear form over (Θ_{q_g}…, Θ_{q0}), falling-factorial length).
    pub factors: Vec<(Vec<i64>, u32)>,
    /// Exponent shift q^{shift} multiplying the result.
    pub shift: Vec<i64>,
}

/// A Picard–Fuchs operator as a sum of [`ThetaTerm`]s.
#[derive(Clone, Debug)]
pub struct PfOperator {
    pub name: String,
    pub terms: Vec<ThetaTerm>,
}

fn linear_form(cs: &ChargeSystem, i: usize) -> Vec<i64> {
    let mut v: Vec<i64> = cs.charges.iter().map(|l| l[i]).collect();
    v.push(cs.l0[i]);
    v
}

/// The operators 𝒟_l (l = 1..s) and 𝒟₀ built from the extended charge vectors.
pub fn pf_operators(g: &GroupModel, cs: &ChargeSystem) -> Vec<PfOperator> {
    let s = cs.s();
    let n = cs.l0.len();
    let unit = |k: usize| -> Vec<i64> { (0..=s).map(|j| i64::from(j == k)).collect() };
    let mut ops = Vec::new();
    for (l, charge) in cs.charges.iter().enumerate() {
        let pos = (0..n).filter(|&i| charge[i] > 0).map(|i| (linear_form(cs, i), charge[i] as u32)).collect();
        let neg = (0..n).filter(|&i| charge[i] < 0).map(|i| (linear_form(cs, i), (-charge[i]) as u32)).collect();
        ops.push(PfOperator {
            name: format!("D_{}", g.label(g.small_part()[l])),
            terms: vec![
                ThetaTerm { coeff: Q::one(), factors: pos, shift: vec![0; s + 1] },
                ThetaTerm { coeff: -Q::one(), factors: neg, shift: unit(l) },
            ],
        });
    }
    let theta0 = (unit(s), 1u32);
    let mut pos = vec![theta0.clone()];
    pos.extend((0..n).filter(|&i| cs.l0[i] > 0).map(|i| (linear_form(cs, i), cs.l0[i] as u32)));
    let mut neg = vec![theta0];
    neg.extend((0..n).filter(|&i| cs.l0[i] < 0).map(|i| (linear_form(cs, i), (-cs.l0[i]) as u32)));
    ops.push(PfOperator {
        name: "D_0".into(),
        terms: vec![
            ThetaTerm { coeff: Q::one(), factors: pos, shift: vec![0; s + 1] },
            ThetaTerm { coeff: Q::one(), factors: neg, shift: unit(s) },
        ],
    });
    ops
}

fn eval_factors<T: Scalar>(factors: &[(Vec<i64>, u32)], theta: &[T]) -> T {
    factors.iter().fold(T::one(), |acc, (form, len)| {
        let x = form.iter().zip(theta).fold(T::zero(), |s, (c, t)| s + t.clone() * T::int(*c));
        acc * falling_factorial(&x, *len)
    })
}

/// Applies an operator to Σ c_h log q_h + S; fails if a logarithm survives.
pub fn apply_operator(op: &PfOperator, f: &LogSeries) -> Result<Series> {
    let nv = f.logs.len();
    let mut out = Series::zero(f.series.vars().to_vec(), f.series.truncation().clone() + qi(1));
    for t in &op.terms {
        let shift: Vec<Q> = t.shift.iter().map(|&x| qi(x)).collect();
        let mut part = f.series.map_coeffs(|e, v| v * eval_factors::<Q>(&t.factors, e)).shift(&shift);
        // P(Θ) log q_h = P(0) log q_h + ∂_h P(0).
        for (h, c) in f.logs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let theta: Vec<Dual<Q>> = (0..nv)
                .map(|k| if k == h { Dual::variable(Q::zero()) } else { Dual::constant(Q::zero()) })
                .collect();
            let val = eval_factors(&t.factors, &theta);
            if !val.re.is_zero() {
                return Err(Error::InternalInconsistency(format!(
                    "{}: log q_{h} survives the operator",
                    op.name
                )));
            }
            let mut k = Series::zero(f.series.vars().to_vec(), part.truncation().clone());
            k.add_term(shift.clone(), &Q::zero(), c * &val.eps);
            part = part.add(&k)?;
        }
        out = out.add(&part.scalar_mul(&t.coeff))?;
    }
    Ok(out)
}

/// Outcome of a Picard–Fuchs check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PfReport {
    pub checks: Vec<PfCheck>,
}

/// One (operator, function) pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PfCheck {
    pub operator: String,
    pub function: String,
    pub residual_terms: usize,
    /// First nonvanishing residual coefficient, if any (exponents, value).
    pub first_failure: Option<(Vec<String>, String)>,
}

impl PfReport {
    /// True when every residual vanished.
    pub fn all_vanish(&self) -> bool {
        self.checks.iter().all(|c| c.residual_terms == 0)
    }
}

/// The functions Ω_g = log q_g + 𝒞_g and Ω₀ = log q₀ + 𝒞₀ as log-series in (q⃗,q₀).
pub fn mirror_solutions(g: &GroupModel, cs: &ChargeSystem, d: i64) -> Result<Vec<(String, LogSeries)>> {
    let s = cs.s();
    let mm = mirror_corrections(g, cs, d);
    let vars = q_vars_open(g);
    let lift = |c: &Series| -> Result<Series> {
        let subs: Vec<Monomial> = (0..s)
            .map(|k| Monomial::new((0..=s).map(|j| qi(i64::from(j == k))).collect()))
            .collect();
        c.monomial_substitute(&subs, vars.clone(), qi(d))
    };
    let mut out = Vec::new();
    for (l, c) in mm.corrections.iter().enumerate() {
        let mut logs = vec![Q::zero(); s + 1];
        logs[l] = Q::one();
        out.push((format!("Omega_{}", g.label(g.small_part()[l])), LogSeries { logs, series: lift(c)? }));
    }
    let mut logs = vec![Q::zero(); s + 1];
    logs[s] = Q::one();
    out.push(("Omega_0".into(), LogSeries { logs, series: lift(&mm.c0)? }));
    Ok(out)
}

/// Applies every 𝒟 to the mirror-map solutions and checks all residual coefficients of
/// total degree ≤ `d` vanish.
pub fn pf_annihilation_check(g: &GroupModel, cs: &ChargeSystem, d: i64) -> Result<PfReport> {
    let mut checks = Vec::new();
    let fns = mirror_solutions(g, cs, d)?;
    for op in pf_operators(g, cs) {
        for (name, f) in &fns {
            let r = apply_operator(&op, f)?;
            let (bad, _) = r.partition(|e, _| total_degree(e) <= qi(d));
            let first_failure = bad.iter().next().map(|((e, _), v)| {
                (e.iter().map(crate::scalar::fmt_q).collect(), crate::scalar::fmt_q(v))
            });
            checks.push(PfCheck {
                operator: op.name.clone(),
                function: name.clone(),
                residual_terms: bad.len(),
                first_failure,
            });
        }
    }
    Ok(PfReport { checks })
}

/// Flat coordinates Q_g = q_g e^{𝒞_g}, Q₀ = q₀ e^{𝒞₀} inverted order by order, and W
/// re-expanded in (Q⃗,Q₀): the generating series of disc invariants.
pub fn disc_invariants(g: &GroupModel, cs: &ChargeSystem, d: i64) -> Result<Series> {
    let s = cs.s();
    let mm = mirror_corrections(g, cs, d);
    let qv = q_vars_open(g);
    let big: Vec<String> = qv.iter().map(|v| v.replacen('q', "Q", 1)).collect();
    let identity = |k: usize| -> Series {
        let mut x = Series::zero(big.clone(), qi(d));
        x.add_int_term(&(0..=s).map(|j| i64::from(j == k)).collect::<Vec<_>>(), Q::one());
        x
    };
    let mut corr = mm.corrections.clone();
    corr.push(mm.c0.clone());
    // Iterate q = Q·exp(−𝒞(q)); each pass fixes one more order.
    let mut q: Vec<Series> = (0..=s).map(identity).collect();
    for _ in 0..d {
        let closed: Vec<Series> = q[..s].to_vec();
        let next: Vec<Series> = (0..=s)
            .map(|k| {
                let c = corr[k].compose(&closed)?;
                identity(k).mul(&c.scalar_mul(&-Q::one()).exp()?)
            })
            .collect::<Result<_>>()?;
        if next == q {
            break;
        }
        q = next;
    }
    superpotential(g, cs, d)?.series.compose(&q)
}
