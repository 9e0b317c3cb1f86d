//! Truncated multivariate Puiseux series with a formal phase per coefficient.
//!
//! A term is `value · (−1)^phase · ∏ x_i^{e_i}` with rational exponents `e_i`
//! and a rational phase. Phases are normalized into `[0,1)`; the integer part
//! is folded into the sign of `value`. Terms are keyed by (exponents, phase), so
//! contributions with incompatible phases are never merged. A series keeps
//! only terms of total degree (sum of exponents) at most its truncation `D`.

use std::collections::BTreeMap;
use std::fmt::Display;

use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::scalar::{fmt_q, parse_q, qi, Scalar};
use crate::{Error, Result, Q};

/// A monomial `(−1)^phase · ∏ x_i^{exps_i}` used as a substitution target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monomial {
    #[serde(with = "crate::io::qvec_serde")]
    pub exps: Vec<Q>,
    #[serde(with = "crate::io::q_serde")]
    pub phase: Q,
}

impl Monomial {
    /// The monomial with the given exponents and no phase.
    pub fn new(exps: Vec<Q>) -> Self {
        Monomial { exps, phase: Q::zero() }
    }
}

/// Splits a phase r into (r mod 1, whether ⌊r⌋ is odd).
pub fn normalize_phase(r: &Q) -> (Q, bool) {
    let fl = r.floor();
    let odd = fl.to_integer() % 2u8 != num_bigint::BigInt::zero();
    (r - fl, odd)
}

/// Key of a term: exponent vector and normalized phase.
pub type TermKey = (Vec<Q>, Q);

/// A truncated series with coefficients in `T`.
#[derive(Clone, Debug, PartialEq)]
pub struct QSeries<T> {
    vars: Vec<String>,
    terms: BTreeMap<TermKey, T>,
    trunc: Q,
}

/// Sum of an exponent vector.
pub fn total_degree(exps: &[Q]) -> Q {
    exps.iter().fold(Q::zero(), |a, e| a + e)
}

impl<T: Scalar> QSeries<T> {
    /// The zero series in the given variables with truncation `trunc`.
    pub fn zero(vars: Vec<String>, trunc: Q) -> Self {
        QSeries { vars, terms: BTreeMap::new(), trunc }
    }

    /// Variable names.
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Truncation bound on total degree.
    pub fn truncation(&self) -> &Q {
        &self.trunc
    }

    /// Number of stored (nonzero) terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True when no term is stored.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates over `((exponents, phase), value)` in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&TermKey, &T)> {
        self.terms.iter()
    }

    /// Adds `value · (−1)^phase · x^exps` in place, respecting the truncation.
    pub fn add_term(&mut self, exps: Vec<Q>, phase: &Q, value: T) {
        assert_eq!(exps.len(), self.vars.len(), "exponent vector has wrong length");
        if value.is_zero() || total_degree(&exps) > self.trunc {
            return;
        }
        let (ph, odd) = normalize_phase(phase);
        let value = if odd { -value } else { value };
        let key = (exps, ph);
        let merged = match self.terms.remove(&key) {
            Some(v) => v + value,
            None => value,
        };
        if !merged.is_zero() {
            self.terms.insert(key, merged);
        }
    }

    /// Convenience: adds a real term with integer exponents.
    pub fn add_int_term(&mut self, exps: &[i64], value: T) {
        self.add_term(exps.iter().map(|&e| qi(e)).collect(), &Q::zero(), value);
    }

    /// Coefficient at `exps` for the given phase class (phase taken mod 1 with sign folded).
    pub fn extract(&self, exps: &[Q], phase: &Q) -> T {
        let (ph, odd) = normalize_phase(phase);
        let v = self
            .terms
            .get(&(exps.to_vec(), ph))
            .cloned()
            .unwrap_or_else(T::zero);
        if odd {
            -v
        } else {
            v
        }
    }

    /// Coefficient of a real term with integer exponents.
    pub fn coeff(&self, exps: &[i64]) -> T {
        let e: Vec<Q> = exps.iter().map(|&x| qi(x)).collect();
        self.extract(&e, &Q::zero())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::TruncationMismatch(format!(
                "variables {:?} vs {:?}",
                self.vars, other.vars
            )));
        }
        Ok(())
    }

    /// Sum; the result is truncated at the smaller bound.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let trunc = self.trunc.clone().min(other.trunc.clone());
        let mut out = QSeries::zero(self.vars.clone(), trunc);
        for ((e, p), v) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(e.clone(), p, v.clone());
        }
        Ok(out)
    }

    /// Difference; the result is truncated at the smaller bound.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scalar_mul(&-T::one()))
    }

    /// Multiplication by a scalar.
    pub fn scalar_mul(&self, c: &T) -> Self {
        let mut out = QSeries::zero(self.vars.clone(), self.trunc.clone());
        for ((e, p), v) in &self.terms {
            out.add_term(e.clone(), p, v.clone() * c.clone());
        }
        out
    }

    /// Product; the result is truncated at the smaller bound.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let trunc = self.trunc.clone().min(other.trunc.clone());
        let mut out = QSeries::zero(self.vars.clone(), trunc);
        for ((e1, p1), v1) in &self.terms {
            for ((e2, p2), v2) in &other.terms {
                let e: Vec<Q> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, &(p1 + p2), v1.clone() * v2.clone());
            }
        }
        Ok(out)
    }

    /// exp(s) for a series whose terms all have positive total degree.
    pub fn exp(&self) -> Result<Self> {
        if let Some(((e, _), _)) = self.terms.iter().find(|((e, _), _)| total_degree(e) <= Q::zero()) {
            return Err(Error::NotApplicable(format!(
                "exp needs positive-degree terms; found exponent {e:?}"
            )));
        }
        let zero_exp = vec![Q::zero(); self.vars.len()];
        let mut out = QSeries::zero(self.vars.clone(), self.trunc.clone());
        out.add_term(zero_exp.clone(), &Q::zero(), T::one());
        let mut power = out.clone();
        let mut n: i64 = 1;
        loop {
            power = power.mul(self)?.scalar_mul(&(T::one() / T::int(n)));
            if power.is_empty() {
                break;
            }
            out = out.add(&power)?;
            n += 1;
        }
        Ok(out)
    }

    /// Substitutes `vars[i] ↦ subs[i]` (monomials in `new_vars`) and truncates at `new_trunc`.
    pub fn monomial_substitute(
        &self,
        subs: &[Monomial],
        new_vars: Vec<String>,
        new_trunc: Q,
    ) -> Result<Self> {
        if subs.len() != self.vars.len() {
            return Err(Error::TruncationMismatch(format!(
                "{} substitutions for {} variables",
                subs.len(),
                self.vars.len()
            )));
        }
        if let Some(m) = subs.iter().find(|m| m.exps.len() != new_vars.len()) {
            return Err(Error::TruncationMismatch(format!(
                "substitution monomial {m:?} has wrong arity"
            )));
        }
        let mut out = QSeries::zero(new_vars.clone(), new_trunc);
        for ((e, p), v) in &self.terms {
            let mut ne = vec![Q::zero(); new_vars.len()];
            let mut ph = p.clone();
            for (ei, m) in e.iter().zip(subs) {
                for (acc, me) in ne.iter_mut().zip(&m.exps) {
                    *acc += ei * me;
                }
                ph += ei * &m.phase;
            }
            out.add_term(ne, &ph, v.clone());
        }
        Ok(out)
    }

    /// Keeps the terms satisfying `keep`, returning (kept, dropped).
    pub fn partition(&self, keep: impl Fn(&[Q], &Q) -> bool) -> (Self, Self) {
        let mut a = QSeries::zero(self.vars.clone(), self.trunc.clone());
        let mut b = QSeries::zero(self.vars.clone(), self.trunc.clone());
        for ((e, p), v) in &self.terms {
            if keep(e, p) {
                a.add_term(e.clone(), p, v.clone());
            } else {
                b.add_term(e.clone(), p, v.clone());
            }
        }
        (a, b)
    }

    /// Re-truncates at a smaller bound.
    pub fn truncate(&self, trunc: Q) -> Self {
        let mut out = QSeries::zero(self.vars.clone(), trunc);
        for ((e, p), v) in &self.terms {
            out.add_term(e.clone(), p, v.clone());
        }
        out
    }

    /// True when every stored term has phase 0 (a real series).
    pub fn is_real(&self) -> bool {
        self.terms.keys().all(|(_, p)| p.is_zero())
    }

    /// Fails with [`Error::NonIntegralPhaseInComparison`] unless the series is real.
    pub fn require_real(&self) -> Result<()> {
        match self.terms.keys().find(|(_, p)| !p.is_zero()) {
            None => Ok(()),
            Some((e, _)) => Err(Error::NonIntegralPhaseInComparison(
                e.iter().map(fmt_q).collect::<Vec<_>>().join(","),
            )),
        }
    }

    /// Applies `f(exps, value)` to every coefficient (e.g. a Θ-operator eigenvalue).
    pub fn map_coeffs(&self, f: impl Fn(&[Q], &T) -> T) -> Self {
        let mut out = QSeries::zero(self.vars.clone(), self.trunc.clone());
        for ((e, p), v) in &self.terms {
            out.add_term(e.clone(), p, f(e, v));
        }
        out
    }

    /// Multiplies by the monomial x^shift (exponent shift, no phase).
    pub fn shift(&self, shift: &[Q]) -> Self {
        let mut out = QSeries::zero(self.vars.clone(), self.trunc.clone() + total_degree(shift));
        for ((e, p), v) in &self.terms {
            let ne = e.iter().zip(shift).map(|(a, b)| a + b).collect();
            out.add_term(ne, p, v.clone());
        }
        out
    }
}

impl QSeries<Q> {
    /// Substitutes `vars[i] ↦ subs[i]` where each substitute is a series in common new
    /// variables. Every stored exponent must be a non-negative integer and every
    /// phase zero; the result keeps the substitutes' (smallest) truncation.
    pub fn compose(&self, subs: &[QSeries<Q>]) -> Result<Self> {
        if subs.len() != self.vars.len() || subs.is_empty() {
            return Err(Error::TruncationMismatch("compose needs one substitute per variable".into()));
        }
        let new_vars = subs[0].vars.clone();
        let trunc = subs.iter().map(|s| s.trunc.clone()).min().expect("nonempty");
        let mut one = QSeries::zero(new_vars.clone(), trunc.clone());
        one.add_term(vec![Q::zero(); new_vars.len()], &Q::zero(), Q::one());
        let mut powers: Vec<Vec<QSeries<Q>>> = subs.iter().map(|_| vec![one.clone()]).collect();
        let mut out = QSeries::zero(new_vars, trunc);
        for ((e, p), v) in &self.terms {
            if !p.is_zero() {
                return Err(Error::NonIntegralPhaseInComparison("compose on a phased term".into()));
            }
            let mut term = one.scalar_mul(v);
            for (i, ei) in e.iter().enumerate() {
                if !ei.is_integer() || *ei < Q::zero() {
                    return Err(Error::NotApplicable(format!("compose needs natural exponents, got {ei}")));
                }
                let k = ei.to_integer().to_usize().expect("small exponent");
                while powers[i].len() <= k {
                    let next = powers[i].last().expect("nonempty").mul(&subs[i])?;
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][k])?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Applies the logarithmic derivative Θ_{x_i} = x_i ∂/∂x_i.
    pub fn theta(&self, i: usize) -> Self {
        self.map_coeffs(|e, v| v * &e[i])
    }

    /// JSON representation with exact fraction strings.
    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            vars: self.vars.clone(),
            truncation: fmt_q(&self.trunc),
            terms: self
                .terms
                .iter()
                .map(|((e, p), v)| TermJson {
                    exp: e.iter().map(fmt_q).collect(),
                    coef: fmt_q(v),
                    phase: fmt_q(p),
                })
                .collect(),
        }
    }

    /// Rebuilds a series from its JSON representation.
    pub fn from_json(j: &SeriesJson) -> Result<Self> {
        let mut out = QSeries::zero(j.vars.clone(), parse_q(&j.truncation)?);
        for t in &j.terms {
            let e = t.exp.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>>>()?;
            if e.len() != j.vars.len() {
                return Err(Error::Parse(format!("term arity mismatch: {:?}", t.exp)));
            }
            out.add_term(e, &parse_q(&t.phase)?, parse_q(&t.coef)?);
        }
        Ok(out)
    }
}

impl<T: Scalar + Display> Display for QSeries<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((e, p), v) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({v})")?;
            if !p.is_zero() {
                write!(f, "·(−1)^({})", fmt_q(p))?;
            }
            for (name, ex) in self.vars.iter().zip(e) {
                if !ex.is_zero() {
                    if ex.is_one() {
                        write!(f, "·{name}")?;
                    } else {
                        write!(f, "·{name}^({})", fmt_q(ex))?;
                    }
                }
            }
        }
        write!(f, " + O(deg > {})", fmt_q(&self.trunc))
    }
}

/// Serialized form of one term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<String>,
    pub coef: String,
    pub phase: String,
}

/// Serialized form of a series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub vars: Vec<String>,
    pub truncation: String,
    pub terms: Vec<TermJson>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn v1() -> Vec<String> {
        vec!["q".into()]
    }

    #[test]
    fn one_plus_q_times_one_minus_q() {
        let mut a = QSeries::<Q>::zero(v1(), qi(2));
        a.add_int_term(&[0], qi(1));
        a.add_int_term(&[1], qi(1));
        let mut b = QSeries::<Q>::zero(v1(), qi(2));
        b.add_int_term(&[0], qi(1));
        b.add_int_term(&[1], qi(-1));
        let c = a.mul(&b).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.coeff(&[0]), qi(1));
        assert_eq!(c.coeff(&[1]), qi(0));
        assert_eq!(c.coeff(&[2]), qi(-1));
    }

    #[test]
    fn exp_of_linear_term() {
        let mut c = QSeries::<Q>::zero(v1(), qi(1));
        c.add_int_term(&[1], qi(-6));
        c.add_int_term(&[2], qi(45));
        let e = c.exp().unwrap();
        assert_eq!(e.coeff(&[0]), qi(1));
        assert_eq!(e.coeff(&[1]), qi(-6));
        assert_eq!(e.len(), 2);
    }

    #[test]
    fn substitution_rescales() {
        let mut s = QSeries::<Q>::zero(v1(), qi(2));
        s.add_int_term(&[2], qi(1));
        let z = s
            .monomial_substitute(&[Monomial::new(vec![qi(3)])], vec!["z".into()], qi(10))
            .unwrap();
        assert_eq!(z.coeff(&[6]), qi(1));
        assert_eq!(z.len(), 1);
    }

    #[test]
    fn phases_fold_integer_parts_into_sign() {
        let mut s = QSeries::<Q>::zero(v1(), qi(3));
        s.add_term(vec![qi(1)], &q(5, 3), qi(2));
        assert_eq!(s.extract(&[qi(1)], &q(2, 3)), qi(-2));
        assert_eq!(s.extract(&[qi(1)], &q(5, 3)), qi(2));
        assert!(!s.is_real());
        // (−1)^{−1/3} is the same class as (−1)^{5/3}
        s.add_term(vec![qi(1)], &q(-1, 3), qi(2));
        assert_eq!(s.extract(&[qi(1)], &q(5, 3)), qi(4));
        s.add_term(vec![qi(1)], &q(2, 3), qi(4));
        assert!(s.is_empty(), "4·(−1)^{{5/3}} + 4·(−1)^{{2/3}} cancel: {s}");
    }

    #[test]
    fn json_round_trip() {
        let mut s = QSeries::<Q>::zero(vec!["a".into(), "b".into()], qi(4));
        s.add_term(vec![q(1, 3), qi(2)], &q(1, 2), q(-7, 5));
        s.add_int_term(&[1, 0], qi(3));
        let j = s.to_json();
        let text = serde_json::to_string(&j).unwrap();
        let back: SeriesJson = serde_json::from_str(&text).unwrap();
        assert_eq!(QSeries::from_json(&back).unwrap(), s);
    }
}
