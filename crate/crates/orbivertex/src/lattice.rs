//! The lattice of invariant monomials, the dual cone generators ṽ₀,ṽ₁,ṽ₂ and
//! the lattice points of the junior triangle Δ = conv(v₀,v₁,v₂).
//!
//! Points are indexed by 𝒮: indices 0,1,2 are the vertices and `3+i` is the
//! i-th element of the small part G_s.

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::group::GroupModel;
use crate::linalg::{det, inverse, mat_vec, to_q};
use crate::scalar::{q, qi};
use crate::{Error, Result, Q};

/// Integral basis ε₀,ε₁,ε₂ of the invariant lattice M.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantBasis {
    /// Columns ε₀,ε₁,ε₂ stored as `epsilon[j]` = ε_j.
    pub epsilon: [[i64; 3]; 3],
    pub m1_star: i64,
    pub m2_star: i64,
    pub det: i64,
}

/// Where a point of 𝒮 sits in Δ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointKind {
    Vertex,
    Boundary,
    Interior,
}

/// The lattice points of Δ with their cone generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrianglePoints {
    /// ṽ_i for i ∈ 𝒮; the last coordinate is always 1.
    pub vtilde: Vec<[i64; 3]>,
    /// Group element of each point (`None` for the vertices).
    pub element: Vec<Option<usize>>,
    pub kind: Vec<PointKind>,
    /// s = |G_s|.
    pub s: usize,
    /// Human-readable point names (`0`,`1`,`2`, then element labels).
    pub names: Vec<String>,
}

impl TrianglePoints {
    /// Number of points, 3 + s.
    pub fn len(&self) -> usize {
        self.vtilde.len()
    }

    /// Always false: Δ has at least its three vertices.
    pub fn is_empty(&self) -> bool {
        self.vtilde.is_empty()
    }

    /// The 2D projection v_i.
    pub fn v(&self, i: usize) -> [i64; 2] {
        [self.vtilde[i][0], self.vtilde[i][1]]
    }

    /// Index in 𝒮 of a named point.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Point index of group element `g`, if it lies in G_s.
    pub fn point_of_element(&self, g: usize) -> Option<usize> {
        self.element.iter().position(|&e| e == Some(g))
    }

    /// Twice the signed area of the triangle (a,b,c).
    pub fn cross(&self, a: usize, b: usize, c: usize) -> i64 {
        let (pa, pb, pc) = (self.v(a), self.v(b), self.v(c));
        (pb[0] - pa[0]) * (pc[1] - pa[1]) - (pb[1] - pa[1]) * (pc[0] - pa[0])
    }
}

/// Solves A·m₁* + B·m₂* = 1 with A = |G₁|/g, B = c|G₂|, canonicalized to 0 ≤ m₁* < B.
fn m_stars(g1: i64, cg2: i64) -> (i64, i64) {
    let g = g1.gcd(&cg2);
    let a = g1 / g;
    let b = cg2;
    if b == 0 {
        return (1, 0);
    }
    let e = a.extended_gcd(&b);
    debug_assert_eq!(e.gcd, 1);
    let m1 = e.x.rem_euclid(b);
    let m2 = (1 - a * m1) / b;
    (m1, m2)
}

/// The integral basis of the invariant lattice.
pub fn invariant_basis(g: &GroupModel) -> Result<InvariantBasis> {
    let n = g.order() as i64;
    let [_, g1, g2] = g.iso_orders.map(|x| x as i64);
    let c = g.abc.2;
    let gg = g1.gcd(&(c * g2));
    let (m1, m2) = m_stars(g1, c * g2);
    let epsilon = [[0, m1 * n / gg, m2 * n], [0, -c * g2, g1], [1, 1, 1]];
    // rows of the 3×3 matrix [ε₀ ε₁ ε₂]
    let mat: Vec<Vec<i64>> = (0..3).map(|i| (0..3).map(|j| epsilon[j][i]).collect()).collect();
    let d = det(&to_q(&mat));
    if d.abs() != qi(n) {
        return Err(Error::InternalInconsistency(format!("basis determinant {d} ≠ ±{n}")));
    }
    for e in &g.elements {
        for eps in &epsilon {
            let pairing = (0..3).fold(Q::zero(), |s, j| s + &e.shifts[j] * qi(eps[j]));
            if !pairing.is_integer() {
                return Err(Error::InternalInconsistency(format!(
                    "basis vector {eps:?} is not invariant under {}",
                    e.label
                )));
            }
        }
    }
    Ok(InvariantBasis { epsilon, m1_star: m1, m2_star: m2, det: d.to_integer().to_i64().expect("small") })
}

impl InvariantBasis {
    /// Coordinates of an invariant exponent vector n in the ε-basis (explicit inverse).
    pub fn coordinates(&self, g: &GroupModel, nvec: [i64; 3]) -> [Q; 3] {
        let n = g.order() as i64;
        let [_, g1, g2] = g.iso_orders.map(|x| x as i64);
        let c = g.abc.2;
        let gg = g1.gcd(&(c * g2));
        let (u, w) = (nvec[1] - nvec[0], nvec[2] - nvec[0]);
        [
            q(g1 * u + c * g2 * w, n),
            qi(-self.m2_star * u) + q(self.m1_star * w, gg),
            qi(nvec[0]),
        ]
    }

    /// Coordinates by generic rational elimination (reference for [`Self::coordinates`]).
    pub fn coordinates_by_solve(&self, nvec: [i64; 3]) -> Result<Vec<Q>> {
        let mat: Vec<Vec<i64>> = (0..3).map(|i| (0..3).map(|j| self.epsilon[j][i]).collect()).collect();
        let inv = inverse(&to_q(&mat))?;
        Ok(mat_vec(&inv, &nvec.map(qi)))
    }
}

/// The cone generators and all lattice points of Δ.
pub fn triangle_points(g: &GroupModel, b: &InvariantBasis) -> Result<TrianglePoints> {
    let n = g.order() as i64;
    let [_, g1, _] = g.iso_orders.map(|x| x as i64);
    let gg = g1.gcd(&(g.abc.2 * g.iso_orders[2] as i64));
    let v0 = [0, 0, 1];
    let v1 = [b.m1_star * n / gg, b.epsilon[1][1], 1];
    let v2 = [b.m2_star * n, g1, 1];
    let corners = [v0, v1, v2];
    let mut vtilde = corners.to_vec();
    let mut element = vec![None, None, None];
    let mut kind = vec![PointKind::Vertex; 3];
    let mut names: Vec<String> = vec!["0".into(), "1".into(), "2".into()];
    for &h in g.small_part() {
        let f = g.shifts(h);
        let mut p = [0i64; 3];
        for (k, pk) in p.iter_mut().enumerate() {
            let x = (0..3).fold(Q::zero(), |s, j| s + &f[j] * qi(corners[j][k]));
            if !x.is_integer() {
                return Err(Error::InternalInconsistency(format!(
                    "ṽ of {} is not integral",
                    g.label(h)
                )));
            }
            *pk = x.to_integer().to_i64().expect("small");
        }
        vtilde.push(p);
        element.push(Some(h));
        kind.push(if g.element(h).all_shifts_nonzero() { PointKind::Interior } else { PointKind::Boundary });
        names.push(g.label(h).to_string());
    }
    let t = TrianglePoints { vtilde, element, kind, s: g.s(), names };
    check_points(&t, n)?;
    Ok(t)
}

fn check_points(t: &TrianglePoints, order: i64) -> Result<()> {
    let bad = |m: String| Err(Error::InternalInconsistency(m));
    let area2 = t.cross(0, 1, 2);
    if area2 != order {
        return bad(format!("twice the area of Δ is {area2}, expected {order}"));
    }
    for i in 0..t.len() {
        for j in 0..i {
            if t.vtilde[i] == t.vtilde[j] {
                return bad(format!("points {} and {} coincide", t.names[i], t.names[j]));
            }
        }
    }
    // Count all lattice points of Δ directly.
    let xs = (0..3).map(|i| t.v(i)[0]);
    let ys = (0..3).map(|i| t.v(i)[1]);
    let (xmin, xmax) = (xs.clone().min().unwrap(), xs.max().unwrap());
    let (ymin, ymax) = (ys.clone().min().unwrap(), ys.max().unwrap());
    let mut count = 0usize;
    let v = [t.v(0), t.v(1), t.v(2)];
    let side = |a: [i64; 2], b: [i64; 2], p: [i64; 2]| (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
    for x in xmin..=xmax {
        for y in ymin..=ymax {
            let p = [x, y];
            if side(v[0], v[1], p) >= 0 && side(v[1], v[2], p) >= 0 && side(v[2], v[0], p) >= 0 {
                count += 1;
                if !(0..t.len()).any(|i| t.v(i) == p) {
                    return bad(format!("lattice point {p:?} of Δ is not listed"));
                }
            }
        }
    }
    if count != t.len() {
        return bad(format!("Δ has {count} lattice points, listed {}", t.len()));
    }
    Ok(())
}

/// Result of the Pick audit: interior count, boundary count, area.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PickAudit {
    pub interior: usize,
    pub boundary: usize,
    pub area: Q,
}

/// Computes area by the shoelace formula and by Pick's theorem (A = i + b/2 − 1) and cross-checks.
pub fn pick_audit(t: &TrianglePoints) -> Result<PickAudit> {
    let interior = t.kind.iter().filter(|k| **k == PointKind::Interior).count();
    let boundary = t.len() - interior;
    let shoelace = q(t.cross(0, 1, 2), 2);
    let pick = qi(interior as i64) + q(boundary as i64, 2) - qi(1);
    if shoelace != pick {
        return Err(Error::InternalInconsistency(format!("shoelace {shoelace} ≠ Pick {pick}")));
    }
    Ok(PickAudit { interior, boundary, area: shoelace })
}
