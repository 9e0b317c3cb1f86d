//! Fine unimodular triangulations of the junior triangle, flops between them,
//! and a regularity test.
//!
//! Enumeration is an advancing-front search: the front is the set of directed
//! edges whose left side is still uncovered; the least front edge is closed by
//! every admissible unimodular triangle in turn. Because the pivot edge is a
//! function of the partial triangulation, every triangulation is reached by
//! exactly one path.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::lattice::TrianglePoints;
use crate::linalg::{feasible_point, solve, Feasibility};
use crate::scalar::qi;
use crate::{Error, Result, Q};

/// Default bound on search nodes.
pub const DEFAULT_NODE_BUDGET: usize = 2_000_000;

/// An edge of a triangulation with the apexes of its incident triangles.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    /// Endpoints, `a < b`.
    pub a: usize,
    pub b: usize,
    /// Apex of each incident triangle (one for boundary edges, two for interior edges).
    pub apexes: Vec<usize>,
}

impl Edge {
    /// True for compact curves (edges shared by two triangles).
    pub fn is_interior(&self) -> bool {
        self.apexes.len() == 2
    }
}

/// A fine unimodular triangulation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triangulation {
    /// Anticlockwise triangles, each rotated to start at its least index, sorted.
    pub triangles: Vec<[usize; 3]>,
    /// Canonical identifier (hex FNV-1a digest of the triangle list).
    pub id: String,
}

fn canonical_triangle(t: [usize; 3]) -> [usize; 3] {
    let k = (0..3).min_by_key(|&i| t[i]).expect("three entries");
    [t[k], t[(k + 1) % 3], t[(k + 2) % 3]]
}

fn fnv1a(data: &[usize]) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &x in data {
        for byte in (x as u64).to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    format!("{h:016x}")
}

impl Triangulation {
    /// Builds the canonical form from any list of anticlockwise triangles.
    pub fn new(triangles: impl IntoIterator<Item = [usize; 3]>) -> Self {
        let mut ts: Vec<[usize; 3]> = triangles.into_iter().map(canonical_triangle).collect();
        ts.sort();
        let flat: Vec<usize> = ts.iter().flatten().copied().collect();
        let id = fnv1a(&flat);
        Triangulation { triangles: ts, id }
    }

    /// All edges with their apexes, sorted by endpoints.
    pub fn edges(&self) -> Vec<Edge> {
        let mut m: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (x, y, z) = (t[k], t[(k + 1) % 3], t[(k + 2) % 3]);
                m.entry((x.min(y), x.max(y))).or_default().push(z);
            }
        }
        m.into_iter()
            .map(|((a, b), mut apexes)| {
                apexes.sort();
                Edge { a, b, apexes }
            })
            .collect()
    }

    /// Interior (compact) edges.
    pub fn interior_edges(&self) -> Vec<Edge> {
        self.edges().into_iter().filter(Edge::is_interior).collect()
    }

    /// The edge with endpoints {a,b}, if present.
    pub fn edge(&self, a: usize, b: usize) -> Option<Edge> {
        let (a, b) = (a.min(b), a.max(b));
        self.edges().into_iter().find(|e| e.a == a && e.b == b)
    }

    /// The triangle containing the directed edge (a,b) in anticlockwise order, returned as its apex.
    pub fn apex_left_of(&self, a: usize, b: usize) -> Option<usize> {
        self.triangles.iter().find_map(|t| {
            (0..3).find(|&k| t[k] == a && t[(k + 1) % 3] == b).map(|k| t[(k + 2) % 3])
        })
    }

    /// Set of interior edges as endpoint pairs (useful to identify phases).
    pub fn interior_edge_set(&self) -> BTreeSet<(usize, usize)> {
        self.interior_edges().into_iter().map(|e| (e.a, e.b)).collect()
    }

    /// Number of distinct vertices used.
    pub fn vertex_count(&self) -> usize {
        self.triangles.iter().flatten().collect::<BTreeSet<_>>().len()
    }
}

fn project(t: &TrianglePoints, tri: [usize; 3], axis: [i64; 2]) -> (i64, i64) {
    let vals = tri.map(|i| {
        let p = t.v(i);
        p[0] * axis[0] + p[1] * axis[1]
    });
    (*vals.iter().min().unwrap(), *vals.iter().max().unwrap())
}

/// True when two triangles share interior points (separating-axis test).
fn interiors_overlap(t: &TrianglePoints, x: [usize; 3], y: [usize; 3]) -> bool {
    for tri in [x, y] {
        for k in 0..3 {
            let (p, q) = (t.v(tri[k]), t.v(tri[(k + 1) % 3]));
            let axis = [q[1] - p[1], p[0] - q[0]];
            let (a0, a1) = project(t, x, axis);
            let (b0, b1) = project(t, y, axis);
            if a1 <= b0 || b1 <= a0 {
                return false;
            }
        }
    }
    true
}

struct Search<'a> {
    t: &'a TrianglePoints,
    budget: usize,
    nodes: usize,
    out: BTreeMap<String, Triangulation>,
}

impl Search<'_> {
    fn run(&mut self, tris: &mut Vec<[usize; 3]>, front: &mut BTreeSet<(usize, usize)>) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::TooLarge(self.budget));
        }
        let Some(&(a, b)) = front.iter().next() else {
            let tr = Triangulation::new(tris.iter().copied());
            self.out.insert(tr.id.clone(), tr);
            return Ok(());
        };
        for c in 0..self.t.len() {
            if self.t.cross(a, b, c) != 1 {
                continue;
            }
            let cand = [a, b, c];
            if tris.iter().any(|&other| interiors_overlap(self.t, cand, other)) {
                continue;
            }
            let mut changes: Vec<((usize, usize), bool)> = vec![((a, b), false)];
            // The triangle covers the left side of each of its directed edges;
            // an edge not yet on the front exposes its other side instead.
            for (x, y) in [(b, c), (c, a)] {
                if front.contains(&(x, y)) {
                    changes.push(((x, y), false));
                } else {
                    changes.push(((y, x), true));
                }
            }
            for (e, add) in &changes {
                if *add {
                    front.insert(*e);
                } else {
                    front.remove(e);
                }
            }
            tris.push(cand);
            let r = self.run(tris, front);
            tris.pop();
            for (e, add) in &changes {
                if *add {
                    front.remove(e);
                } else {
                    front.insert(*e);
                }
            }
            r?;
        }
        Ok(())
    }
}

/// Boundary segments of Δ in anticlockwise order (consecutive lattice points on each side).
pub fn boundary_segments(t: &TrianglePoints) -> Vec<(usize, usize)> {
    let mut segs = Vec::new();
    for (p, q) in [(0, 1), (1, 2), (2, 0)] {
        let side = side_points(t, p, q);
        segs.extend(side.windows(2).map(|w| (w[0], w[1])));
    }
    segs
}

/// Lattice points on the closed side from vertex `p` to vertex `q`, ordered from p to q.
pub fn side_points(t: &TrianglePoints, p: usize, q: usize) -> Vec<usize> {
    let (vp, vq) = (t.v(p), t.v(q));
    let dir = [vq[0] - vp[0], vq[1] - vp[1]];
    let mut pts: Vec<(i64, usize)> = (0..t.len())
        .filter(|&i| t.cross(p, q, i) == 0)
        .map(|i| {
            let v = t.v(i);
            ((v[0] - vp[0]) * dir[0] + (v[1] - vp[1]) * dir[1], i)
        })
        .collect();
    pts.sort();
    pts.into_iter().map(|(_, i)| i).collect()
}

/// All fine unimodular triangulations, ordered by id.
pub fn enumerate_triangulations(t: &TrianglePoints) -> Result<Vec<Triangulation>> {
    enumerate_with_budget(t, DEFAULT_NODE_BUDGET)
}

/// As [`enumerate_triangulations`] with an explicit node budget.
pub fn enumerate_with_budget(t: &TrianglePoints, budget: usize) -> Result<Vec<Triangulation>> {
    let mut front: BTreeSet<(usize, usize)> = boundary_segments(t).into_iter().collect();
    let mut s = Search { t, budget, nodes: 0, out: BTreeMap::new() };
    s.run(&mut Vec::new(), &mut front)?;
    let out: Vec<Triangulation> = s.out.into_values().collect();
    for tr in &out {
        check_triangulation(t, tr)?;
    }
    Ok(out)
}

/// Verifies unimodularity, orientation, area sum, fineness and V − E + F = 1.
pub fn check_triangulation(t: &TrianglePoints, tr: &Triangulation) -> Result<()> {
    let bad = |m: String| Err(Error::InternalInconsistency(m));
    if tr.triangles.iter().any(|tri| t.cross(tri[0], tri[1], tri[2]) != 1) {
        return bad("triangle not anticlockwise unimodular".into());
    }
    let area2: i64 = tr.triangles.len() as i64;
    if area2 != t.cross(0, 1, 2) {
        return bad(format!("{area2} triangles do not tile Δ"));
    }
    for (i, x) in tr.triangles.iter().enumerate() {
        for y in &tr.triangles[..i] {
            if interiors_overlap(t, *x, *y) {
                return bad(format!("triangles {x:?} and {y:?} overlap"));
            }
        }
    }
    let v = tr.vertex_count();
    if v != t.len() {
        return bad(format!("triangulation uses {v} of {} points", t.len()));
    }
    let e = tr.edges().len();
    if v as i64 - e as i64 + tr.triangles.len() as i64 != 1 {
        return bad("Euler characteristic is not 1".into());
    }
    Ok(())
}

/// Flop adjacency between triangulations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlopGraph {
    pub nodes: Vec<String>,
    /// Pairs of node positions, `i < j`, with the flipped diagonal (old, new).
    pub arcs: Vec<FlopArc>,
}

/// One flop: triangulations `i` and `j` differ by swapping diagonal `from` for `to`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlopArc {
    pub i: usize,
    pub j: usize,
    pub from: (usize, usize),
    pub to: (usize, usize),
}

fn flop_between(t: &TrianglePoints, x: &Triangulation, y: &Triangulation) -> Option<((usize, usize), (usize, usize))> {
    let sx: BTreeSet<_> = x.triangles.iter().collect();
    let sy: BTreeSet<_> = y.triangles.iter().collect();
    let only_x: Vec<_> = sx.difference(&sy).copied().collect();
    let only_y: Vec<_> = sy.difference(&sx).copied().collect();
    if only_x.len() != 2 || only_y.len() != 2 {
        return None;
    }
    let vx: BTreeSet<usize> = only_x.iter().flat_map(|t| t.iter().copied()).collect();
    let vy: BTreeSet<usize> = only_y.iter().flat_map(|t| t.iter().copied()).collect();
    if vx.len() != 4 || vx != vy {
        return None;
    }
    let shared = |a: &[usize; 3], b: &[usize; 3]| -> (usize, usize) {
        let s: Vec<usize> = a.iter().filter(|v| b.contains(v)).copied().collect();
        (s[0].min(s[1]), s[0].max(s[1]))
    };
    let dx = shared(only_x[0], only_x[1]);
    let dy = shared(only_y[0], only_y[1]);
    // The four points form a parallelogram: the two diagonals share a midpoint.
    let mid = |(a, b): (usize, usize)| {
        let (p, q) = (t.v(a), t.v(b));
        [p[0] + q[0], p[1] + q[1]]
    };
    (mid(dx) == mid(dy)).then_some((dx, dy))
}

/// Flop graph over an enumeration; connectivity is asserted.
pub fn flop_graph(t: &TrianglePoints, ts: &[Triangulation]) -> Result<FlopGraph> {
    let mut arcs = Vec::new();
    for j in 0..ts.len() {
        for i in 0..j {
            if let Some((from, to)) = flop_between(t, &ts[i], &ts[j]) {
                arcs.push(FlopArc { i, j, from, to });
            }
        }
    }
    let g = FlopGraph { nodes: ts.iter().map(|x| x.id.clone()).collect(), arcs };
    if !g.is_connected() {
        return Err(Error::InternalInconsistency("flop graph is disconnected".into()));
    }
    Ok(g)
}

impl FlopGraph {
    /// Breadth-first connectivity test.
    pub fn is_connected(&self) -> bool {
        if self.nodes.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for a in &self.arcs {
                for (x, y) in [(a.i, a.j), (a.j, a.i)] {
                    if x == u && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// DOT rendering.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph flops {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let _ = writeln!(s, "  t{i} [label=\"{n}\"];");
        }
        for a in &self.arcs {
            let _ = writeln!(s, "  t{} -- t{} [label=\"{:?}→{:?}\"];", a.i, a.j, a.from, a.to);
        }
        s.push_str("}\n");
        s
    }
}

/// The unique relation Σ l_j ṽ_j = 0 supported on an interior edge (a,b) and its
/// apexes (c,d), with l_c = l_d = 1. Returned as a full vector over 𝒮.
pub fn edge_relation(t: &TrianglePoints, e: &Edge) -> Result<Vec<i64>> {
    if !e.is_interior() {
        return Err(Error::NotCompact(e.a, e.b));
    }
    let (a, b, c, d) = (e.a, e.b, e.apexes[0], e.apexes[1]);
    // Columns ṽ_a, ṽ_b as unknown coefficients; solve on the ℚ-span and verify integrality.
    let cols = [t.vtilde[a], t.vtilde[b], t.vtilde[c]];
    let m: Vec<Vec<Q>> = (0..3).map(|r| (0..3).map(|k| qi(cols[k][r])).collect()).collect();
    let rhs: Vec<Q> = (0..3).map(|r| qi(-t.vtilde[d][r])).collect();
    let sol = solve(&m, &rhs)?;
    // −ṽ_d = x ṽ_a + y ṽ_b + z ṽ_c with z = 1 for a unimodular flop configuration.
    if sol[2] != Q::one() {
        return Err(Error::InternalInconsistency(format!(
            "edge ({a},{b}) does not separate its apexes"
        )));
    }
    let mut l = vec![0i64; t.len()];
    for (idx, val) in [(a, &sol[0]), (b, &sol[1])] {
        if !val.is_integer() {
            return Err(Error::InternalInconsistency(format!("non-integral relation on ({a},{b})")));
        }
        l[idx] = val.to_integer().to_i64().expect("small");
    }
    l[c] += 1;
    l[d] += 1;
    Ok(l)
}

/// Whether a strictly convex piecewise-linear lifting exists, with a witness height vector.
pub fn regularity_witness(t: &TrianglePoints, tr: &Triangulation) -> Result<Option<Vec<Q>>> {
    let rows: Vec<Vec<Q>> = tr
        .interior_edges()
        .iter()
        .map(|e| edge_relation(t, e).map(|l| l.into_iter().map(qi).collect()))
        .collect::<Result<_>>()?;
    if rows.is_empty() {
        return Ok(Some(vec![Q::from_integer(0.into()); t.len()]));
    }
    let rhs = vec![Q::one(); rows.len()];
    Ok(match feasible_point(&rows, &rhs) {
        Feasibility::Feasible(h) => Some(h),
        Feasibility::Infeasible => None,
    })
}

/// True iff the triangulation is regular.
pub fn is_regular(t: &TrianglePoints, tr: &Triangulation) -> Result<bool> {
    Ok(regularity_witness(t, tr)?.is_some())
}

/// DOT rendering of the triangulation as a planar graph with fixed positions.
pub fn triangulation_dot(t: &TrianglePoints, tr: &Triangulation) -> String {
    let mut s = String::from("graph triangulation {\n");
    for i in 0..t.len() {
        let v = t.v(i);
        let _ = writeln!(s, "  p{i} [label=\"{}\", pos=\"{},{}!\"];", t.names[i], v[0], v[1]);
    }
    for e in tr.edges() {
        let style = if e.is_interior() { "solid" } else { "bold" };
        let _ = writeln!(s, "  p{} -- p{} [style={style}];", e.a, e.b);
    }
    s.push_str("}\n");
    s
}
