//! Intersection numbers, curve relations, charge bases and the brane-extended
//! charge vector of a triangulated junior triangle.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::group::GroupModel;
use crate::lattice::TrianglePoints;
use crate::linalg::{hnf, integer_kernel, inverse, rank, to_big, to_q};
use crate::scalar::{q, qi};
use crate::triangulate::{edge_relation, side_points, Edge, Triangulation};
use crate::{Error, Result, Q};

/// The dual graph: one node per triangle, a finite edge per compact curve and a
/// half-edge per noncompact curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualGraph {
    pub nodes: Vec<[usize; 3]>,
    /// Finite edges `(node, node, curve)` where `curve` is the triangulation edge.
    pub finite: Vec<(usize, usize, (usize, usize))>,
    /// Half-edges `(node, curve)`.
    pub half: Vec<(usize, (usize, usize))>,
    /// For each point, the triangles of its star and whether the star polygon is closed.
    pub stars: Vec<(Vec<usize>, bool)>,
}

/// Builds the dual graph of a triangulation.
pub fn dual_graph(t: &TrianglePoints, tr: &Triangulation) -> DualGraph {
    let nodes = tr.triangles.clone();
    let node_of = |a: usize, b: usize, apex: usize| {
        nodes
            .iter()
            .position(|tri| tri.contains(&a) && tri.contains(&b) && tri.contains(&apex))
            .expect("edge apex belongs to a triangle")
    };
    let mut finite = Vec::new();
    let mut half = Vec::new();
    for e in tr.edges() {
        if e.is_interior() {
            finite.push((node_of(e.a, e.b, e.apexes[0]), node_of(e.a, e.b, e.apexes[1]), (e.a, e.b)));
        } else {
            half.push((node_of(e.a, e.b, e.apexes[0]), (e.a, e.b)));
        }
    }
    let stars = (0..t.len())
        .map(|i| {
            let tris: Vec<usize> = (0..nodes.len()).filter(|&k| nodes[k].contains(&i)).collect();
            let closed = tr.edges().iter().filter(|e| e.a == i || e.b == i).all(Edge::is_interior);
            (tris, closed)
        })
        .collect();
    DualGraph { nodes, finite, half, stars }
}

impl DualGraph {
    /// DOT rendering with divisor labels on the curves.
    pub fn to_dot(&self, t: &TrianglePoints) -> String {
        let mut s = String::from("graph dual {\n");
        for (k, tri) in self.nodes.iter().enumerate() {
            let names: Vec<&str> = tri.iter().map(|&i| t.names[i].as_str()).collect();
            let _ = writeln!(s, "  n{k} [label=\"{}\"];", names.join(","));
        }
        for (x, y, (a, b)) in &self.finite {
            let _ = writeln!(s, "  n{x} -- n{y} [label=\"D{}·D{}\"];", t.names[*a], t.names[*b]);
        }
        for (k, (x, (a, b))) in self.half.iter().enumerate() {
            let _ = writeln!(s, "  h{k} [shape=point];");
            let _ = writeln!(s, "  n{x} -- h{k} [style=dashed, label=\"D{}·D{}\"];", t.names[*a], t.names[*b]);
        }
        s.push_str("}\n");
        s
    }
}

/// Relation vector of the compact curve on edge {a,b}: apex coefficients 1.
pub fn curve_relation(t: &TrianglePoints, tr: &Triangulation, a: usize, b: usize) -> Result<Vec<i64>> {
    let e = tr.edge(a, b).ok_or(Error::NotCompact(a, b))?;
    edge_relation(t, &e)
}

/// C·D_a computed from the linear equivalence Σ⟨m,ṽ_i⟩D_i ~ 0 with m dual to ṽ_a in the
/// unimodular basis (ṽ_a, ṽ_b, ṽ_c).
pub fn self_intersection_by_linear_equivalence(t: &TrianglePoints, e: &Edge, endpoint: usize) -> Result<i64> {
    if !e.is_interior() {
        return Err(Error::NotCompact(e.a, e.b));
    }
    let other = if endpoint == e.a { e.b } else { e.a };
    let (c, d) = (e.apexes[0], e.apexes[1]);
    let basis = [t.vtilde[endpoint], t.vtilde[other], t.vtilde[c]];
    // Rows of B are the basis vectors; the dual basis is the columns of B⁻¹.
    let bm: Vec<Vec<i64>> = basis.iter().map(|v| v.to_vec()).collect();
    let inv = inverse(&to_q(&bm))?;
    let w: Vec<Q> = (0..3).map(|r| inv[r][0].clone()).collect();
    let pairing = (0..3).fold(Q::zero(), |s, r| s + &w[r] * qi(t.vtilde[d][r]));
    Ok(-pairing.to_integer().to_i64().expect("small"))
}

/// One row of the intersection table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionRow {
    pub curve: (usize, usize),
    pub numbers: Vec<i64>,
}

/// C·D_i for every compact curve C, with the endpoint entries cross-checked by linear equivalence.
pub fn intersection_table(t: &TrianglePoints, tr: &Triangulation) -> Result<Vec<IntersectionRow>> {
    tr.interior_edges()
        .iter()
        .map(|e| {
            let numbers = edge_relation(t, e)?;
            for end in [e.a, e.b] {
                let via = self_intersection_by_linear_equivalence(t, e, end)?;
                if via != numbers[end] {
                    return Err(Error::InternalInconsistency(format!(
                        "C·D_{} = {} by relation but {via} by linear equivalence",
                        t.names[end], numbers[end]
                    )));
                }
            }
            Ok(IntersectionRow { curve: (e.a, e.b), numbers })
        })
        .collect()
}

/// A ℤ-basis of the relation lattice 𝕃 = {l : Σ l_i ṽ_i = 0}.
pub fn relation_lattice_basis(t: &TrianglePoints) -> Vec<Vec<i64>> {
    let m: Vec<Vec<i64>> = (0..3).map(|r| t.vtilde.iter().map(|v| v[r]).collect()).collect();
    integer_kernel(&m)
}

/// The natural ℚ-basis (−n_g F_g, n_g e_g) of 𝕃 scaled to integer vectors.
pub fn rational_basis_rows(g: &GroupModel, t: &TrianglePoints) -> Vec<Vec<i64>> {
    g.small_part()
        .iter()
        .enumerate()
        .map(|(k, &h)| {
            let n = g.element(h).order as i64;
            let mut row = vec![0i64; t.len()];
            for j in 0..3 {
                let x = -(qi(n) * &g.shifts(h)[j]);
                row[j] = x.to_integer().to_i64().expect("small");
            }
            row[3 + k] = n;
            row
        })
        .collect()
}

/// True when every row satisfies Σ l_i ṽ_i = 0.
pub fn in_relation_lattice(t: &TrianglePoints, rows: &[Vec<i64>]) -> bool {
    rows.iter().all(|l| (0..3).all(|r| l.iter().zip(&t.vtilde).map(|(x, v)| x * v[r]).sum::<i64>() == 0))
}

fn same_lattice(rows: &[Vec<i64>], reference: &[Vec<BigInt>]) -> bool {
    hnf(&to_big(rows)) == reference
}

/// The selected charge vectors l⁽ᵍ⁾, one per g ∈ G_s, with the curve chosen for each.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChargeBasis {
    pub charges: Vec<Vec<i64>>,
    pub curves: Vec<(usize, usize)>,
}

type Candidates = Vec<Vec<(usize, usize, Vec<i64>)>>;

/// Star edges of each v_g (g ∈ G_s) with their relation vectors, ordered by the
/// neighbouring point: small-part neighbours first, then by index.
fn star_candidates(t: &TrianglePoints, tr: &Triangulation) -> Result<Candidates> {
    let edges = tr.interior_edges();
    (0..t.s)
        .map(|k| {
            let p = 3 + k;
            let mut c: Vec<(usize, Vec<i64>)> = edges
                .iter()
                .filter(|e| e.a == p || e.b == p)
                .map(|e| {
                    let nb = if e.a == p { e.b } else { e.a };
                    edge_relation(t, e).map(|l| (nb, l))
                })
                .collect::<Result<_>>()?;
            c.sort_by_key(|(nb, _)| (*nb < 3, *nb));
            Ok(c.into_iter().map(|(nb, l)| (p.min(nb), p.max(nb), l)).collect())
        })
        .collect()
}

/// Depth-first search over star-edge choices; calls `found` on every choice whose
/// vectors form a ℤ-basis of 𝕃 and stops as soon as it returns `true`.
fn search_star_bases(
    t: &TrianglePoints,
    tr: &Triangulation,
    mut found: impl FnMut(ChargeBasis) -> bool,
) -> Result<()> {
    fn dfs(
        cands: &Candidates,
        chosen: &mut Vec<usize>,
        reference: &[Vec<BigInt>],
        found: &mut dyn FnMut(ChargeBasis) -> bool,
    ) -> bool {
        let rows: Vec<Vec<i64>> = chosen.iter().enumerate().map(|(i, &c)| cands[i][c].2.clone()).collect();
        if rank(&to_q(&rows)) < rows.len() {
            return false;
        }
        if chosen.len() == cands.len() {
            if !same_lattice(&rows, reference) {
                return false;
            }
            let curves = chosen.iter().enumerate().map(|(i, &c)| (cands[i][c].0, cands[i][c].1)).collect();
            return found(ChargeBasis { charges: rows, curves });
        }
        for c in 0..cands[chosen.len()].len() {
            chosen.push(c);
            let stop = dfs(cands, chosen, reference, found);
            chosen.pop();
            if stop {
                return true;
            }
        }
        false
    }

    let reference = hnf(&to_big(&relation_lattice_basis(t)));
    let candidates = star_candidates(t, tr)?;
    dfs(&candidates, &mut Vec::new(), &reference, &mut found);
    Ok(())
}

/// Chooses one compact curve from the star of each v_g (g ∈ G_s) so the relation
/// vectors form a ℤ-basis of 𝕃.
///
/// Elements are visited in canonical order; candidate curves are ordered by the
/// neighbouring point, small-part neighbours before vertices, and the search
/// backtracks until the Hermite normal form matches that of 𝕃.
pub fn charge_basis(t: &TrianglePoints, tr: &Triangulation) -> Result<ChargeBasis> {
    let mut first = None;
    search_star_bases(t, tr, |b| {
        first = Some(b);
        true
    })?;
    first.ok_or(Error::NoBasisFound)
}

/// Every star-edge choice whose relation vectors form a ℤ-basis of 𝕃, in search order
/// (the first one is [`charge_basis`]).
pub fn star_bases(t: &TrianglePoints, tr: &Triangulation) -> Result<Vec<ChargeBasis>> {
    let mut all = Vec::new();
    search_star_bases(t, tr, |b| {
        all.push(b);
        false
    })?;
    Ok(all)
}

/// Resolution charges together with the brane data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChargeSystem {
    /// l⁽ᵍ⁾ for the k-th element of G_s, indexed by 𝒮.
    pub charges: Vec<Vec<i64>>,
    pub chosen_curves: Vec<(usize, usize)>,
    /// (i₀, i₁, i₂).
    pub brane: (usize, usize, usize),
    pub framing: i64,
    /// ℓ⁽⁰⁾ indexed by 𝒮.
    pub l0: Vec<i64>,
    pub triangulation: String,
}

impl ChargeSystem {
    /// s = |G_s|.
    pub fn s(&self) -> usize {
        self.charges.len()
    }
}

/// The brane segment used when none is given: the edge of the triangulation on v₁v₂
/// containing the midpoint of v₁v₂, or the segment ending at v₂ when that is ambiguous.
pub fn default_segment(t: &TrianglePoints) -> (usize, usize) {
    let side = side_points(t, 1, 2);
    let (p1, p2) = (t.v(1), t.v(2));
    let mid2 = [p1[0] + p2[0], p1[1] + p2[1]];
    let containing: Vec<(usize, usize)> = side
        .windows(2)
        .filter(|w| {
            let (a, b) = (t.v(w[0]), t.v(w[1]));
            // midpoint m lies on [a,b] ⇔ 2a ≤ 2m ≤ 2b along the side direction
            let d = [p2[0] - p1[0], p2[1] - p1[1]];
            let proj = |p: [i64; 2]| p[0] * d[0] + p[1] * d[1];
            let m = mid2[0] * d[0] + mid2[1] * d[1];
            2 * proj(a) <= m && m <= 2 * proj(b)
        })
        .map(|w| (w[0], w[1]))
        .collect();
    if containing.len() == 1 {
        containing[0]
    } else {
        let n = side.len();
        (side[n - 2], side[n - 1])
    }
}

/// Extends the charge basis by ℓ⁽⁰⁾ for a brane on the segment (i₁,i₂) ⊂ v₁v₂ with framing f.
pub fn brane_extension(
    g: &GroupModel,
    t: &TrianglePoints,
    tr: &Triangulation,
    basis: &ChargeBasis,
    segment: (usize, usize),
    f: i64,
) -> Result<ChargeSystem> {
    let side = side_points(t, 1, 2);
    let pos = |p: usize| side.iter().position(|&x| x == p);
    let (i1, i2) = match (pos(segment.0), pos(segment.1)) {
        (Some(x), Some(y)) if y == x + 1 => (segment.0, segment.1),
        (Some(x), Some(y)) if x == y + 1 => (segment.1, segment.0),
        _ => return Err(Error::NotOnV1V2(segment.0, segment.1)),
    };
    let i0 = tr
        .apex_left_of(i1, i2)
        .ok_or_else(|| Error::InternalInconsistency("no triangle over the brane segment".into()))?;
    let check = |m: &str| Err(Error::InternalInconsistency(m.to_string()));
    if !(i0 == 0 || i0 >= 3) || !(i1 == 1 || i1 >= 3) || !(i2 == 2 || i2 >= 3) {
        return check("brane indices outside {0,1,2} ∪ G_s pattern");
    }
    if i0 != 0 {
        let h = t.element[i0].expect("small-part point");
        if g.shifts(h)[0] != q(g.iso_orders[0] as i64, g.order() as i64) {
            return check("F⁰ of i₀ differs from |G₀|/|G|");
        }
    }
    let mut l0 = vec![0i64; t.len()];
    l0[i0] += 1;
    l0[i1] += f;
    l0[i2] += -f - 1;
    Ok(ChargeSystem {
        charges: basis.charges.clone(),
        chosen_curves: basis.curves.clone(),
        brane: (i0, i1, i2),
        framing: f,
        l0,
        triangulation: tr.id.clone(),
    })
}

/// Checks the Calabi–Yau and shift identities and the nondegeneracy conditions of a charge system.
pub fn check_charge_system(g: &GroupModel, t: &TrianglePoints, cs: &ChargeSystem) -> Result<()> {
    let bad = |m: String| Err(Error::InternalInconsistency(m));
    if !in_relation_lattice(t, &cs.charges) {
        return bad("charge vector outside the relation lattice".into());
    }
    for (k, l) in cs.charges.iter().enumerate() {
        if l.iter().sum::<i64>() != 0 {
            return bad(format!("charge {k} violates the Calabi–Yau condition"));
        }
        for j in 0..3 {
            let s = g
                .small_part()
                .iter()
                .enumerate()
                .fold(qi(l[j]), |acc, (m, &h)| acc + &g.shifts(h)[j] * qi(l[3 + m]));
            if !s.is_zero() {
                return bad(format!("charge {k} violates the shift identity in coordinate {j}"));
            }
        }
    }
    let small_block: Vec<Vec<i64>> = cs.charges.iter().map(|l| l[3..].to_vec()).collect();
    if rank(&to_q(&small_block)) != cs.s() {
        return bad("charges restricted to G_s are not a basis".into());
    }
    let (i0, i1, i2) = cs.brane;
    let cols: Vec<usize> = (0..t.len()).filter(|i| ![i0, i1, i2].contains(i)).collect();
    let reduced: Vec<Vec<i64>> = cs.charges.iter().map(|l| cols.iter().map(|&c| l[c]).collect()).collect();
    if rank(&to_q(&reduced)) != cs.s() {
        return bad("charges off the brane indices are degenerate".into());
    }
    Ok(())
}
