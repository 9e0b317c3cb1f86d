//! Comparison of the resolution superpotential W with the orbifold disc potential 𝓕₀,₁:
//! the b-matrix, the framing correspondence, the change of variables, the analytic
//! part, sign resolution and the effective-case inverse-matrix conjecture.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::charges::ChargeSystem;
use crate::group::GroupModel;
use crate::linalg::{inverse, mat_mul, to_q};
use crate::orbifold::{orbifold_disc_potential_box, TorusWeights};
use crate::resolution::{q_vars_open, superpotential};
use crate::scalar::{floor_i64, fmt_q, qi};
use crate::series::{total_degree, Monomial};
use crate::{Error, Result, Series, Q};

/// The s×s block (l^{(h)}_{g})_{h,g ∈ G_s} of the charge matrix.
pub fn small_block(cs: &ChargeSystem) -> Vec<Vec<i64>> {
    cs.charges.iter().map(|l| l[3..].to_vec()).collect()
}

/// b with Σ_h b_{g₁h} l^{(h)}_{g₂} = δ_{g₁g₂}, i.e. the inverse of the small block.
pub fn b_matrix(cs: &ChargeSystem) -> Result<Vec<Vec<Q>>> {
    let m = to_q(&small_block(cs));
    let b = inverse(&m).map_err(|_| Error::InternalInconsistency("charge block is singular".into()))?;
    let id: Vec<Vec<Q>> = (0..m.len())
        .map(|i| (0..m.len()).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect();
    if mat_mul(&b, &m) != id || mat_mul(&m, &b) != id {
        return Err(Error::InternalInconsistency("b is not a two-sided inverse".into()));
    }
    Ok(b)
}

/// The framing parameter a = −(l₁^{(0)} + Σ_g l_g^{(0)} F_g^{(1)}).
pub fn framing_correspondence(g: &GroupModel, cs: &ChargeSystem) -> Result<Q> {
    let mut s = qi(cs.l0[1]);
    for (k, &h) in g.small_part().iter().enumerate() {
        s += qi(cs.l0[3 + k]) * &g.shifts(h)[1];
    }
    let a = -s;
    if !(&a * qi(g.order() as i64)).is_integer() {
        return Err(Error::InternalInconsistency(format!("framing a = {} is not in (1/|G|)Z", fmt_q(&a))));
    }
    Ok(a)
}

/// Substitution monomials in (q⃗, q₀): x_g = ∏_h q_h^{b_{gh}} for g ∈ G_s and
/// x₀ = (−1)^{−(f+1+λ₂)} q₀ ∏_g q_g^{−Σ_h l_h^{(0)} b_{hg}}.
///
/// The x₀ phase is stored with the sign that cancels the (−1)^{1+λ₂} carried by x₀ in
/// 𝓕₀,₁, so a substituted term keeps only the integer sign (−1)^{f·d}.
pub fn change_of_variables(cs: &ChargeSystem, w: &TorusWeights, b: &[Vec<Q>]) -> Vec<Monomial> {
    let s = cs.s();
    let mut subs: Vec<Monomial> = b
        .iter()
        .map(|row| {
            let mut e = row.clone();
            e.push(Q::zero());
            Monomial::new(e)
        })
        .collect();
    let mut e: Vec<Q> = (0..s)
        .map(|gi| -(0..s).map(|h| qi(cs.l0[3 + h]) * &b[h][gi]).sum::<Q>())
        .collect();
    e.push(Q::one());
    let phase = -(qi(cs.framing) + Q::one() + w.l(2));
    subs.push(Monomial { exps: e, phase });
    subs
}

/// Checks that the substitution reproduces the orbifold GLSM coordinates on z-monomials:
/// q_h = ∏_i z_i^{l_i^{(h)}}, q₀ = ∏_i z_i^{l_i^{(0)}}·z₊/z₋ must give
/// x_g = z_g ∏_j z_j^{−F_g^{(j)}} and x₀ = ∏_j z_j^{λ_j}·z₊/z₋.
pub fn substitution_consistent(g: &GroupModel, cs: &ChargeSystem, w: &TorusWeights, subs: &[Monomial]) -> bool {
    let s = cs.s();
    let n = 3 + s;
    // z-exponents (over 𝒮 plus z₊, z₋) of a q-monomial
    let z_of = |m: &Monomial| -> Vec<Q> {
        let mut z = vec![Q::zero(); n + 2];
        for (h, eh) in m.exps[..s].iter().enumerate() {
            for (i, zi) in z.iter_mut().take(n).enumerate() {
                *zi += eh * qi(cs.charges[h][i]);
            }
        }
        let e0 = &m.exps[s];
        for (i, zi) in z.iter_mut().take(n).enumerate() {
            *zi += e0 * qi(cs.l0[i]);
        }
        z[n] += e0;
        z[n + 1] -= e0;
        z
    };
    for (k, &h) in g.small_part().iter().enumerate() {
        let mut want = vec![Q::zero(); n + 2];
        for j in 0..3 {
            want[j] = -g.shifts(h)[j].clone();
        }
        want[3 + k] = Q::one();
        if z_of(&subs[k]) != want {
            return false;
        }
    }
    let mut want = vec![Q::zero(); n + 2];
    for j in 0..3 {
        want[j] = w.l(j).clone();
    }
    want[n] = Q::one();
    want[n + 1] = -Q::one();
    z_of(&subs[s]) == want
}

/// Which comparison theorem applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseTag {
    /// |G₀| = 1.
    Effective,
    /// |G₀| ≥ 2 with i₁ = v₁ and f < 0.
    IneffectiveI1,
    /// |G₀| ≥ 2 with i₂ = v₂ and f ≥ 0.
    IneffectiveI2,
    /// Any other ineffective placement: no equality is asserted.
    Disjoint,
}

/// The case tag of a charge system.
pub fn case_tag(g: &GroupModel, cs: &ChargeSystem) -> CaseTag {
    let (_, i1, i2) = cs.brane;
    if g.iso_orders[0] == 1 {
        CaseTag::Effective
    } else if i1 == 1 && cs.framing < 0 {
        CaseTag::IneffectiveI1
    } else if i2 == 2 && cs.framing >= 0 {
        CaseTag::IneffectiveI2
    } else {
        CaseTag::Disjoint
    }
}

/// Whether the sign-twist search is run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignMode {
    Auto,
    None,
}

/// Overall outcome of a comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// Coefficientwise equality.
    Match,
    /// Equality after q_i ↦ ±q_i for the reported twist.
    MatchWithSignTwist,
    /// Equality up to a sign depending only on the winding m₀.
    MatchUpToWindingSign,
    /// No theorem applies; both series are reported.
    Disjoint,
    Mismatch,
}

/// One exponent where the two sides differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub exps: Vec<String>,
    pub w: String,
    pub f: String,
}

/// Observed and predicted winding sign for one m₀.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindingSign {
    pub m0: i64,
    pub observed: i8,
    pub predicted: i8,
}

/// Everything a comparison produces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrespondenceReport {
    pub framing: i64,
    #[serde(with = "crate::io::q_serde")]
    pub a: Q,
    pub a_overridden: bool,
    #[serde(with = "crate::io::qmat_serde")]
    pub b: Vec<Vec<Q>>,
    pub variables: Vec<String>,
    /// x_g(q⃗) followed by x₀(q⃗,q₀).
    pub substitution: Vec<Monomial>,
    pub case: CaseTag,
    pub g0_order: usize,
    pub degree: i64,
    pub status: Status,
    pub compared_terms: usize,
    /// Number of substituted terms of degree ≤ D with non-natural exponents.
    pub dropped_terms: usize,
    pub dropped_sample: Vec<Vec<String>>,
    pub sign_twist: Option<Vec<i8>>,
    pub winding_signs: Vec<WindingSign>,
    pub winding_prediction_holds: Option<bool>,
    pub first_discrepancy: Option<Discrepancy>,
    #[serde(skip)]
    pub w_series: Option<Series>,
    #[serde(skip)]
    pub f_series: Option<Series>,
}

fn is_natural(e: &Q) -> bool {
    e.is_integer() && *e >= Q::zero()
}

/// Keeps the terms with nonnegative integer exponents; returns (analytic, dropped).
pub fn analytic_part(p: &Series) -> (Series, Series) {
    p.partition(|e, _| e.iter().all(is_natural))
}

/// The predicted winding sign: (−1)^{⌊(f+1+λ₂)m₀⌋}, times −1 when f < 0. It is the
/// integer part of the formal x₀ phase that the phase cancellation discards.
pub fn predicted_winding_sign(cs: &ChargeSystem, w: &TorusWeights, m0: i64) -> i8 {
    let p = (qi(cs.framing) + Q::one() + w.l(2)) * qi(m0);
    let e = floor_i64(&p) + i64::from(cs.framing < 0);
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn twist(series: &Series, signs: &[i8]) -> Series {
    series.map_coeffs(|e, v| {
        let odd = e
            .iter()
            .zip(signs)
            .filter(|(_, &s)| s < 0)
            .fold(0i64, |acc, (x, _)| acc + floor_i64(x))
            .rem_euclid(2);
        if odd == 1 {
            -v.clone()
        } else {
            v.clone()
        }
    })
}

fn first_difference(w: &Series, f: &Series) -> Option<Discrepancy> {
    let keys: std::collections::BTreeSet<_> = w.iter().map(|(k, _)| k.clone()).chain(f.iter().map(|(k, _)| k.clone())).collect();
    keys.into_iter().find_map(|(e, p)| {
        let (a, b) = (w.extract(&e, &p), f.extract(&e, &p));
        (a != b).then(|| Discrepancy { exps: e.iter().map(fmt_q).collect(), w: fmt_q(&a), f: fmt_q(&b) })
    })
}

/// Signs W/F grouped by the last exponent (m₀), if every ratio is ±1 and constant in m₀.
fn winding_ratio(w: &Series, f: &Series) -> Option<BTreeMap<i64, i8>> {
    let keys: std::collections::BTreeSet<_> = w.iter().map(|(k, _)| k.clone()).chain(f.iter().map(|(k, _)| k.clone())).collect();
    let mut out = BTreeMap::new();
    for (e, p) in keys {
        let (a, b) = (w.extract(&e, &p), f.extract(&e, &p));
        let sign = if a == b {
            1
        } else if a == -b.clone() {
            -1
        } else {
            return None;
        };
        let m0 = floor_i64(e.last().expect("q0 exponent"));
        if *out.entry(m0).or_insert(sign) != sign {
            return None;
        }
    }
    Some(out)
}

/// Compares W(q⃗,q₀;f) with |G₀|·analytic part of 𝓕₀,₁(x(q)) coefficientwise up to total
/// degree `d`. `a_override` replaces the framing correspondence.
pub fn compare(
    g: &GroupModel,
    cs: &ChargeSystem,
    d: i64,
    signs: SignMode,
    a_override: Option<Q>,
) -> Result<CorrespondenceReport> {
    let s = cs.s();
    let b = b_matrix(cs)?;
    let a = match &a_override {
        Some(a) => a.clone(),
        None => framing_correspondence(g, cs)?,
    };
    let w = TorusWeights::new(g, a.clone())?;
    let subs = change_of_variables(cs, &w, &b);
    if a_override.is_none() && !substitution_consistent(g, cs, &w, &subs) {
        return Err(Error::InternalInconsistency("change of variables disagrees with the GLSM coordinates".into()));
    }
    // Every (m⃗,m₀) of degree ≤ D has k_h = m₀l_h^{(0)} + ⟨m⃗,l_h⟩ inside this box.
    let kmax: Vec<i64> = (0..s)
        .map(|k| {
            let top = cs.charges.iter().map(|l| l[3 + k]).chain([cs.l0[3 + k], 0]).max().expect("nonempty");
            d * top
        })
        .collect();
    let f = orbifold_disc_potential_box(g, &w, &kmax, d)?.series;
    let vars = q_vars_open(g);
    let big = qi(1i64 << 40);
    let sub = f.monomial_substitute(&subs, vars.clone(), big)?;
    sub.require_real()?;
    let (analytic, dropped) = analytic_part(&sub);
    let g0 = g.iso_orders[0];
    let fa = analytic.truncate(qi(d)).scalar_mul(&qi(g0 as i64));
    let dropped_low: Vec<Vec<String>> = dropped
        .iter()
        .filter(|((e, _), _)| total_degree(e) <= qi(d))
        .map(|((e, _), _)| e.iter().map(fmt_q).collect())
        .collect();
    let wser = superpotential(g, cs, d)?.series;
    let case = case_tag(g, cs);
    let mut report = CorrespondenceReport {
        framing: cs.framing,
        a,
        a_overridden: a_override.is_some(),
        b,
        variables: vars,
        substitution: subs,
        case,
        g0_order: g0,
        degree: d,
        status: Status::Mismatch,
        compared_terms: wser.len().max(fa.len()),
        dropped_terms: dropped_low.len(),
        dropped_sample: dropped_low.into_iter().take(8).collect(),
        sign_twist: None,
        winding_signs: Vec::new(),
        winding_prediction_holds: None,
        first_discrepancy: first_difference(&wser, &fa),
        w_series: Some(wser.clone()),
        f_series: Some(fa.clone()),
    };
    if report.first_discrepancy.is_none() {
        report.status = Status::Match;
    } else if case == CaseTag::Disjoint {
        report.status = Status::Disjoint;
    } else {
        if let Some(ratio) = winding_ratio(&wser, &fa) {
            report.winding_signs = ratio
                .into_iter()
                .map(|(m0, observed)| WindingSign { m0, observed, predicted: predicted_winding_sign(cs, &w, m0) })
                .collect();
            report.winding_prediction_holds = Some(report.winding_signs.iter().all(|x| x.observed == x.predicted));
            report.status = Status::MatchUpToWindingSign;
        }
        if signs == SignMode::Auto {
            for mask in 1u32..(1 << (s + 1)) {
                let tw: Vec<i8> = (0..=s).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
                if first_difference(&wser, &twist(&fa, &tw)).is_none() {
                    report.status = Status::MatchWithSignTwist;
                    report.sign_twist = Some(tw);
                    break;
                }
            }
        }
    }
    Ok(report)
}

/// Result of the effective-case inverse-matrix check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    /// Element labels in row/column order (i₀ first).
    pub order: Vec<String>,
    pub matrix: Vec<Vec<i64>>,
    #[serde(with = "crate::io::qmat_serde")]
    pub inverse: Vec<Vec<Q>>,
    pub integral: bool,
    pub nonnegative: bool,
}

/// Builds the (s+1)×(s+1) matrix with rows l^{(g)} restricted to (G_s with i₀ first, vertex 0)
/// and a last row (1,0,…,0), and inspects its inverse.
pub fn conjecture_check(g: &GroupModel, cs: &ChargeSystem) -> Result<ConjectureReport> {
    if g.iso_orders[0] != 1 {
        return Err(Error::NotEffective);
    }
    let s = cs.s();
    let i0 = cs.brane.0;
    if i0 < 3 {
        return Err(Error::InternalInconsistency("i₀ is not an exceptional point".into()));
    }
    let mut order: Vec<usize> = vec![i0 - 3];
    order.extend((0..s).filter(|&k| k != i0 - 3));
    let matrix: Vec<Vec<i64>> = order
        .iter()
        .map(|&h| {
            let l = &cs.charges[h];
            let mut row: Vec<i64> = order.iter().map(|&k| l[3 + k]).collect();
            row.push(l[0]);
            row
        })
        .chain(std::iter::once((0..=s).map(|j| i64::from(j == 0)).collect()))
        .collect();
    let inv = inverse(&to_q(&matrix))?;
    let integral = inv.iter().flatten().all(|x| x.is_integer());
    let nonnegative = inv.iter().flatten().all(|x| *x >= Q::zero());
    Ok(ConjectureReport {
        order: order.iter().map(|&k| g.label(g.small_part()[k]).to_string()).collect(),
        matrix,
        inverse: inv,
        integral,
        nonnegative,
    })
}
