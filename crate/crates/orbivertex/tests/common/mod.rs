//! Shared fixture data and the criterion checks used by the fixture tests and the
//! acceptance harness. Every check returns a [`Verdict`]; callers decide whether to
//! assert or print.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};

use orbivertex::charges::{
    brane_extension, charge_basis, default_segment, intersection_table, star_bases, ChargeBasis, ChargeSystem,
};
use orbivertex::correspondence::{compare, conjecture_check, CaseTag, CorrespondenceReport, SignMode, Status};
use orbivertex::gamma::{gamma_ratio, psi_gamma_limit};
use orbivertex::group::{build_group, Generator, GroupModel};
use orbivertex::lattice::{invariant_basis, pick_audit, triangle_points, TrianglePoints};
use orbivertex::orbifold::{orbifold_disc_potential, TorusWeights};
use orbivertex::resolution::{compositions_up_to, mirror_corrections, pf_annihilation_check, superpotential};
use orbivertex::scalar::{q, qi, Dual};
use orbivertex::triangulate::{enumerate_triangulations, Triangulation};
use orbivertex::Q;

/// Outcome of one criterion: `pass` is the literal criterion, `detail` a one-line summary.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub pass: bool,
    pub detail: String,
    /// For criteria whose literal form fails for an understood reason: whether the
    /// observed outcome is exactly the analysed one.
    pub analysed: Option<bool>,
}

impl Verdict {
    fn ok(detail: impl Into<String>) -> Self {
        Verdict { pass: true, detail: detail.into(), analysed: None }
    }

    fn from_errors(errors: Vec<String>, ok_detail: impl Into<String>) -> Self {
        if errors.is_empty() {
            Verdict::ok(ok_detail)
        } else {
            Verdict { pass: false, detail: errors.join("; "), analysed: None }
        }
    }
}

/// A group with its lattice points and triangulations.
pub struct Setup {
    pub g: GroupModel,
    pub t: TrianglePoints,
    pub trs: Vec<Triangulation>,
}

pub fn setup(gens: &[Generator]) -> Setup {
    let g = build_group(gens).unwrap();
    let t = triangle_points(&g, &invariant_basis(&g).unwrap()).unwrap();
    let trs = enumerate_triangulations(&t).unwrap();
    Setup { g, t, trs }
}

impl Setup {
    /// Charge system on triangulation `tr` with the brane on `seg` (point names) or the default.
    pub fn system(&self, tr: usize, seg: Option<(&str, &str)>, f: i64) -> ChargeSystem {
        let tri = &self.trs[tr];
        let seg = match seg {
            Some((a, b)) => (self.t.index_of(a).unwrap(), self.t.index_of(b).unwrap()),
            None => default_segment(&self.t),
        };
        let basis = charge_basis(&self.t, tri).unwrap();
        brane_extension(&self.g, &self.t, tri, &basis, seg, f).unwrap()
    }

    fn pair(&self, a: usize, b: usize) -> (String, String) {
        let (x, y) = (self.t.names[a].clone(), self.t.names[b].clone());
        if x <= y {
            (x, y)
        } else {
            (y, x)
        }
    }

    /// A vector indexed by points, rearranged into the column order `cols` (point names).
    pub fn in_order(&self, row: &[i64], cols: &[&str]) -> Vec<i64> {
        cols.iter().map(|c| row[self.t.index_of(c).unwrap()]).collect()
    }

    /// Intersection table of triangulation `tr` keyed by the unordered pair of point
    /// names, with columns in the order `cols`.
    pub fn table(&self, tr: usize, cols: &[&str]) -> BTreeMap<(String, String), Vec<i64>> {
        intersection_table(&self.t, &self.trs[tr])
            .unwrap()
            .into_iter()
            .map(|r| (self.pair(r.curve.0, r.curve.1), self.in_order(&r.numbers, cols)))
            .collect()
    }

    /// Position in G_s of the element labelled `label`.
    pub fn small_index(&self, label: &str) -> usize {
        let h = self.g.by_label(label).unwrap();
        self.g.small_part().iter().position(|&x| x == h).unwrap()
    }
}

pub const Z6_COLUMNS: [&str; 7] = ["0", "1", "2", "g1", "2g1", "3g1", "4g1"];
pub const SMALL_COLUMNS: [&str; 5] = ["0", "1", "2", "g1", "2g1"];

pub fn z3() -> Vec<Generator> {
    vec![Generator::new(3, [1, 1, 1])]
}
pub fn z4() -> Vec<Generator> {
    vec![Generator::new(4, [2, 1, 1])]
}
pub fn z5() -> Vec<Generator> {
    vec![Generator::new(5, [3, 1, 1])]
}
pub fn z6() -> Vec<Generator> {
    vec![Generator::new(6, [1, 2, 3])]
}
pub fn z2z2() -> Vec<Generator> {
    vec![Generator::new(2, [1, 0, 1]), Generator::new(2, [1, 1, 0])]
}

fn key(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

/// Reference data for one triangulation: table rows and the chosen curve/charge per element.
pub struct PhaseFixture {
    pub name: &'static str,
    pub table: Vec<(&'static str, &'static str, [i64; 7])>,
    pub curves: [(&'static str, &'static str); 4],
    pub charges: [[i64; 7]; 4],
    pub matrix: Option<[[i64; 5]; 5]>,
    pub inverse: [[i64; 5]; 5],
}

/// The five crepant resolutions of C³/ℤ₆(1,2,3). Columns: 0, 1, 2, g1, 2g1, 3g1, 4g1.
pub fn z6_phases() -> Vec<PhaseFixture> {
    vec![
        PhaseFixture {
            name: "I",
            table: vec![
                ("g1", "0", [-1, 0, 0, -1, 0, 1, 1]),
                ("g1", "1", [0, 0, 1, -2, 1, 0, 0]),
                ("g1", "2", [0, 1, 1, -3, 0, 1, 0]),
                ("g1", "2g1", [0, 1, 0, 0, -2, 0, 1]),
                ("g1", "3g1", [1, 0, 1, 0, 0, -2, 0]),
                ("g1", "4g1", [1, 0, 0, 0, 1, 0, -2]),
            ],
            curves: [("g1", "0"), ("g1", "2g1"), ("g1", "3g1"), ("g1", "4g1")],
            charges: [
                [-1, 0, 0, -1, 0, 1, 1],
                [0, 1, 0, 0, -2, 0, 1],
                [1, 0, 1, 0, 0, -2, 0],
                [1, 0, 0, 0, 1, 0, -2],
            ],
            matrix: None,
            inverse: [[0, 0, 0, 0, 1], [2, 0, 1, 1, 2], [3, 1, 1, 2, 3], [4, 1, 2, 2, 4], [6, 2, 3, 4, 6]],
        },
        PhaseFixture {
            name: "II",
            table: vec![
                ("3g1", "4g1", [1, 0, 0, 1, 0, -1, -1]),
                ("g1", "1", [0, 0, 1, -2, 1, 0, 0]),
                ("g1", "2", [0, 1, 1, -3, 0, 1, 0]),
                ("g1", "2g1", [0, 1, 0, 0, -2, 0, 1]),
                ("g1", "3g1", [0, 0, 1, -1, 0, -1, 1]),
                ("g1", "4g1", [0, 0, 0, -1, 1, 1, -1]),
            ],
            curves: [("g1", "3g1"), ("g1", "2g1"), ("3g1", "4g1"), ("4g1", "g1")],
            charges: [
                [0, 0, 1, -1, 0, -1, 1],
                [0, 1, 0, 0, -2, 0, 1],
                [1, 0, 0, 1, 0, -1, -1],
                [0, 0, 0, -1, 1, 1, -1],
            ],
            matrix: Some([[-1, 0, -1, 1, 0], [0, -2, 0, 1, 0], [1, 0, -1, -1, 1], [-1, 1, 1, -1, 0], [1, 0, 0, 0, 0]]),
            inverse: [[0, 0, 0, 0, 1], [1, 0, 0, 1, 2], [1, 1, 0, 2, 3], [2, 1, 0, 2, 4], [3, 2, 1, 4, 6]],
        },
        PhaseFixture {
            name: "III",
            table: vec![
                ("3g1", "4g1", [1, 0, 1, 0, 0, -2, 0]),
                ("g1", "1", [0, 0, 1, -2, 1, 0, 0]),
                ("g1", "2", [0, 1, 2, -4, 0, 0, 1]),
                ("g1", "2g1", [0, 1, 0, 0, -2, 0, 1]),
                ("4g1", "2", [0, 0, -1, 1, 0, 1, -1]),
                ("g1", "4g1", [0, 0, 1, -2, 1, 0, 0]),
            ],
            curves: [("g1", "4g1"), ("g1", "2g1"), ("3g1", "4g1"), ("4g1", "2")],
            charges: [
                [0, 0, 1, -2, 1, 0, 0],
                [0, 1, 0, 0, -2, 0, 1],
                [1, 0, 1, 0, 0, -2, 0],
                [0, 0, -1, 1, 0, 1, -1],
            ],
            matrix: Some([[-2, 1, 0, 0, 0], [0, -2, 0, 1, 0], [0, 0, -2, 0, 1], [1, 0, 1, -1, 0], [1, 0, 0, 0, 0]]),
            inverse: [[0, 0, 0, 0, 1], [1, 0, 0, 0, 2], [2, 1, 0, 1, 3], [2, 1, 0, 0, 4], [4, 2, 1, 2, 6]],
        },
        PhaseFixture {
            name: "IV",
            table: vec![
                ("3g1", "4g1", [1, 0, 0, 0, 1, 0, -2]),
                ("g1", "1", [0, 0, 1, -2, 1, 0, 0]),
                ("g1", "2", [0, 1, 1, -3, 0, 1, 0]),
                ("g1", "2g1", [0, 1, 0, -1, -1, 1, 0]),
                ("g1", "3g1", [0, 0, 1, -2, 1, 0, 0]),
                ("2g1", "3g1", [0, 0, 0, 1, -1, -1, 1]),
            ],
            curves: [("g1", "2g1"), ("2g1", "3g1"), ("3g1", "g1"), ("4g1", "3g1")],
            charges: [
                [0, 1, 0, -1, -1, 1, 0],
                [0, 0, 0, 1, -1, -1, 1],
                [0, 0, 1, -2, 1, 0, 0],
                [1, 0, 0, 0, 1, 0, -2],
            ],
            matrix: Some([[-1, -1, 1, 0, 0], [1, -1, -1, 1, 0], [-2, 1, 0, 0, 0], [0, 1, 0, -2, 1], [1, 0, 0, 0, 0]]),
            inverse: [[0, 0, 0, 0, 1], [0, 0, 1, 0, 2], [1, 0, 1, 0, 3], [1, 1, 2, 0, 4], [2, 2, 3, 1, 6]],
        },
        PhaseFixture {
            name: "V",
            table: vec![
                ("3g1", "4g1", [1, 0, 0, 0, 1, 0, -2]),
                ("g1", "1", [0, 1, 1, -3, 0, 1, 0]),
                ("g1", "2", [0, 1, 1, -3, 0, 1, 0]),
                ("3g1", "1", [0, -1, 0, 1, 1, -1, 0]),
                ("g1", "3g1", [0, 1, 1, -3, 0, 1, 0]),
                ("2g1", "3g1", [0, 1, 0, 0, -2, 0, 1]),
            ],
            curves: [("g1", "3g1"), ("2g1", "3g1"), ("3g1", "1"), ("4g1", "3g1")],
            charges: [
                [0, 1, 1, -3, 0, 1, 0],
                [0, 1, 0, 0, -2, 0, 1],
                [0, -1, 0, 1, 1, -1, 0],
                [1, 0, 0, 0, 1, 0, -2],
            ],
            matrix: Some([[-3, 0, 1, 0, 0], [0, -2, 0, 1, 0], [1, 1, -1, 0, 0], [0, 1, 0, -2, 1], [1, 0, 0, 0, 0]]),
            inverse: [[0, 0, 0, 0, 1], [1, 0, 1, 0, 2], [1, 0, 0, 0, 3], [2, 1, 2, 0, 4], [3, 2, 3, 1, 6]],
        },
    ]
}

/// Finds the triangulation whose intersection table equals the fixture table.
pub fn locate_phase(s: &Setup, p: &PhaseFixture) -> Option<usize> {
    let want: BTreeMap<(String, String), Vec<i64>> =
        p.table.iter().map(|(a, b, row)| (key(a, b), row.to_vec())).collect();
    (0..s.trs.len()).find(|&k| s.table(k, &Z6_COLUMNS) == want)
}

/// Single-triangulation fixtures: group, table rows and the charge of each element
/// (g1, then 2g1), with columns 0, 1, 2, g1, 2g1.
pub struct SmallFixture {
    pub name: &'static str,
    pub gens: Vec<Generator>,
    pub table: Vec<(&'static str, &'static str, Vec<i64>)>,
    pub charges: Vec<Vec<i64>>,
}

pub fn small_fixtures() -> Vec<SmallFixture> {
    vec![
        SmallFixture {
            name: "Z3(1,1,1)",
            gens: z3(),
            table: vec![
                ("g1", "0", vec![1, 1, 1, -3]),
                ("g1", "1", vec![1, 1, 1, -3]),
                ("g1", "2", vec![1, 1, 1, -3]),
            ],
            charges: vec![vec![1, 1, 1, -3]],
        },
        SmallFixture {
            name: "Z4(2,1,1)",
            gens: z4(),
            table: vec![
                ("g1", "0", vec![2, 1, 1, -4, 0]),
                ("g1", "1", vec![1, 0, 0, -2, 1]),
                ("g1", "2", vec![1, 0, 0, -2, 1]),
                ("g1", "2g1", vec![0, 1, 1, 0, -2]),
            ],
            charges: vec![vec![1, 0, 0, -2, 1], vec![0, 1, 1, 0, -2]],
        },
        SmallFixture {
            name: "Z5(3,1,1)",
            gens: z5(),
            table: vec![
                ("g1", "0", vec![3, 1, 1, -5, 0]),
                ("g1", "1", vec![1, 0, 0, -2, 1]),
                ("g1", "2", vec![1, 0, 0, -2, 1]),
                ("g1", "2g1", vec![0, 1, 1, 1, -3]),
                ("2g1", "1", vec![0, 1, 1, 1, -3]),
                ("2g1", "2", vec![0, 1, 1, 1, -3]),
            ],
            charges: vec![vec![1, 0, 0, -2, 1], vec![0, 1, 1, 1, -3]],
        },
    ]
}

// ---------------------------------------------------------------- criterion 1

pub fn criterion_1() -> Verdict {
    let mut errors = Vec::new();
    let s = setup(&z3());
    let eps = invariant_basis(&s.g).unwrap().epsilon;
    if eps != [[0, 0, 3], [0, -1, 1], [1, 1, 1]] {
        errors.push(format!("Z3 basis columns {eps:?}"));
    }
    if s.t.v(3) != [1, 0] {
        errors.push(format!("Z3 v_g1 = {:?}", s.t.v(3)));
    }
    let mut counts = Vec::new();
    for (name, gens, want) in
        [("Z3", z3(), 1), ("Z4", z4(), 1), ("Z5", z5(), 1), ("Z2xZ2", z2z2(), 4), ("Z6", z6(), 5)]
    {
        let n = setup(&gens).trs.len();
        counts.push(format!("{name}:{n}"));
        if n != want {
            errors.push(format!("{name} has {n} triangulations, expected {want}"));
        }
    }
    Verdict::from_errors(errors, format!("basis and v_g1 for Z3; triangulation counts {}", counts.join(" ")))
}

// ---------------------------------------------------------------- criterion 2

pub fn criterion_2() -> Verdict {
    let mut errors = Vec::new();
    for fx in small_fixtures() {
        let s = setup(&fx.gens);
        let cols = &SMALL_COLUMNS[..s.t.len()];
        let want: BTreeMap<_, _> = fx.table.iter().map(|(a, b, r)| (key(a, b), r.clone())).collect();
        let got = s.table(0, cols);
        if got != want {
            errors.push(format!("{} table {got:?}", fx.name));
        }
        let basis = charge_basis(&s.t, &s.trs[0]).unwrap();
        for (label, want) in ["g1", "2g1"].iter().zip(&fx.charges) {
            let got = s.in_order(&basis.charges[s.small_index(label)], cols);
            if got != *want {
                errors.push(format!("{} charge of {label}: {got:?}", fx.name));
            }
        }
    }
    let s = setup(&z6());
    let mut seen = Vec::new();
    for p in z6_phases() {
        let Some(k) = locate_phase(&s, &p) else {
            errors.push(format!("Z6 phase {} table not produced", p.name));
            continue;
        };
        seen.push(k);
        let basis = charge_basis(&s.t, &s.trs[k]).unwrap();
        for (j, label) in Z6_COLUMNS[3..].iter().enumerate() {
            let i = s.small_index(label);
            let (a, b) = basis.curves[i];
            if s.pair(a, b) != key(p.curves[j].0, p.curves[j].1) {
                errors.push(format!("Z6 phase {} curve of {label}: {:?}", p.name, s.pair(a, b)));
            }
            if s.in_order(&basis.charges[i], &Z6_COLUMNS) != p.charges[j] {
                errors.push(format!("Z6 phase {} charge of {label}: {:?}", p.name, basis.charges[i]));
            }
        }
    }
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != 5 {
        errors.push(format!("Z6 phases matched {} distinct triangulations", seen.len()));
    }
    Verdict::from_errors(errors, "Z3, Z4, Z5 tables and charges; all five Z6 phase tables, curve choices and charges")
}

// ---------------------------------------------------------------- criterion 3

/// Groups used by the property checks.
pub fn test_groups() -> Vec<(String, Vec<Generator>)> {
    let mut v = vec![
        ("Z3(1,1,1)".to_string(), z3()),
        ("Z4(2,1,1)".to_string(), z4()),
        ("Z5(3,1,1)".to_string(), z5()),
        ("Z6(1,2,3)".to_string(), z6()),
        ("Z2xZ2".to_string(), z2z2()),
    ];
    for (n, w) in [(5, [1, 1, 3]), (7, [1, 2, 4]), (8, [1, 2, 5]), (9, [1, 2, 6]), (10, [1, 3, 6])] {
        v.push((format!("Z{n}({},{},{})", w[0], w[1], w[2]), vec![Generator::new(n, w)]));
    }
    v.push(("Z3xZ3".to_string(), vec![Generator::new(3, [1, 2, 0]), Generator::new(3, [0, 1, 2])]));
    v
}

pub fn criterion_3() -> Verdict {
    let mut errors = Vec::new();
    let mut checked = 0;
    for (name, gens) in test_groups() {
        let s = setup(&gens);
        let n = s.g.order() as i64;
        let pick = pick_audit(&s.t).unwrap();
        if pick.area != q(n, 2) {
            errors.push(format!("{name}: area {}", pick.area));
        }
        for (k, tr) in s.trs.iter().enumerate() {
            checked += 1;
            if tr.triangles.len() as i64 != n {
                errors.push(format!("{name} t{k}: {} triangles", tr.triangles.len()));
            }
            for tri in &tr.triangles {
                if s.t.cross(tri[0], tri[1], tri[2]).abs() != 1 {
                    errors.push(format!("{name} t{k}: triangle {tri:?} not unimodular"));
                }
            }
        }
    }
    Verdict::from_errors(errors, format!("{} groups, {checked} triangulations", test_groups().len()))
}

// ---------------------------------------------------------------- criterion 4

pub fn fact(n: i64) -> Q {
    (1..=n).fold(Q::one(), |acc, k| acc * qi(k))
}

/// 1/n!, zero for n < 0.
pub fn inv_fact(n: i64) -> Q {
    if n < 0 {
        Q::zero()
    } else {
        fact(n).recip()
    }
}

fn sgn(n: i64) -> Q {
    if n.rem_euclid(2) == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

/// Closed-form mirror-map corrections (C_g…, C_0) at exponent `m`.
fn closed_form_corrections(group: &str, m: &[i64], f: i64) -> (Vec<Q>, Q) {
    match group {
        "Z3" => {
            let k = fact(3 * m[0] - 1) * inv_fact(m[0]).pow(3) * sgn(m[0]);
            (vec![qi(3) * &k], -k)
        }
        "Z4" => {
            let (a, b) = (m[0], m[1]);
            let ka = if a > 0 { fact(2 * a - 1) * inv_fact(a) * inv_fact(b).pow(2) * inv_fact(a - 2 * b) } else { Q::zero() };
            let kb = if a == 0 && b > 0 { fact(2 * b - 1) * inv_fact(b).pow(2) } else { Q::zero() };
            (vec![qi(2) * &ka - &kb, qi(2) * &kb], -ka - qi(f) * kb)
        }
        "Z5" => {
            let (a, b) = (m[0], m[1]);
            let ka = if 2 * a > b {
                fact(2 * a - b - 1) * inv_fact(a) * inv_fact(b).pow(2) * inv_fact(a - 3 * b) * sgn(b)
            } else {
                Q::zero()
            };
            let kb = if 3 * b > a {
                fact(3 * b - a - 1) * inv_fact(a) * inv_fact(b).pow(2) * inv_fact(b - 2 * a) * sgn(a + b)
            } else {
                Q::zero()
            };
            (vec![qi(2) * &ka - &kb, -ka.clone() + qi(3) * &kb], -kb)
        }
        _ => unreachable!(),
    }
}

pub fn criterion_4() -> Verdict {
    let d = 8;
    let mut errors = Vec::new();
    let mut compared = 0;
    for (name, gens, seg) in [("Z3", z3(), None), ("Z4", z4(), Some(("2g1", "2"))), ("Z5", z5(), None)] {
        let s = setup(&gens);
        for f in 0..=2 {
            let cs = s.system(0, seg, f);
            let mm = mirror_corrections(&s.g, &cs, d);
            // closed forms are written in the element order g1, 2g1
            let perm: Vec<usize> = ["g1", "2g1"][..cs.s()].iter().map(|l| s.small_index(l)).collect();
            for mp in compositions_up_to(cs.s(), d).into_iter().filter(|m| m.iter().any(|&x| x > 0)) {
                let mut m = vec![0; cs.s()];
                for (p, &i) in perm.iter().enumerate() {
                    m[i] = mp[p];
                }
                let (cg, c0) = closed_form_corrections(name, &mp, f);
                for (l, want) in cg.iter().enumerate() {
                    compared += 1;
                    let got = mm.corrections[perm[l]].coeff(&m);
                    if got != *want {
                        errors.push(format!("{name} f={f} C_{l} at {mp:?}: {got} vs {want}"));
                    }
                }
                compared += 1;
                if mm.c0.coeff(&m) != c0 {
                    errors.push(format!("{name} f={f} C_0 at {m:?}: {} vs {c0}", mm.c0.coeff(&m)));
                }
            }
        }
    }
    errors.truncate(5);
    Verdict::from_errors(errors, format!("{compared} coefficients of C_g and C_0 to degree {d} (Z3, Z4, Z5; f = 0,1,2)"))
}

// ---------------------------------------------------------------- criterion 5

pub fn criterion_5() -> Verdict {
    let d = 6;
    let mut errors = Vec::new();
    let mut slowest = Duration::ZERO;
    for (name, gens, seg) in [("Z3", z3(), None), ("Z4", z4(), Some(("2g1", "2"))), ("Z5", z5(), None)] {
        let s = setup(&gens);
        for f in [0, 1] {
            let cs = s.system(0, seg, f);
            let start = Instant::now();
            let report = pf_annihilation_check(&s.g, &cs, d).unwrap();
            let took = start.elapsed();
            slowest = slowest.max(took);
            if !report.all_vanish() {
                errors.push(format!("{name} f={f}: {:?}", report.checks.iter().find(|c| c.first_failure.is_some())));
            }
            if took > Duration::from_secs(60) {
                errors.push(format!("{name} f={f}: took {took:?}"));
            }
        }
    }
    Verdict::from_errors(errors, format!("all operators annihilate all solutions at D={d}; slowest {slowest:.2?}"))
}

// ---------------------------------------------------------------- criteria 6, 7

fn analysed_ok(r: &CorrespondenceReport) -> bool {
    r.status == Status::MatchUpToWindingSign && r.winding_prediction_holds == Some(true)
}

fn theorem_verdict(cases: Vec<(String, CorrespondenceReport)>, extra: impl Fn(&CorrespondenceReport) -> bool) -> Verdict {
    let literal = cases.iter().all(|(_, r)| r.status == Status::Match);
    let analysed = cases.iter().all(|(_, r)| analysed_ok(r) && extra(r));
    let summary: Vec<String> = cases
        .iter()
        .map(|(n, r)| {
            let signs: Vec<String> = r.winding_signs.iter().map(|w| format!("{}:{:+}", w.m0, w.observed)).collect();
            format!("{n} {:?} dropped={} signs[{}]", r.status, r.dropped_terms, signs.join(","))
        })
        .collect();
    Verdict { pass: literal, detail: summary.join("; "), analysed: Some(analysed) }
}

pub fn criterion_6() -> Verdict {
    let mut cases = Vec::new();
    for (name, gens, fs) in [("Z3", z3(), vec![0, 1, 2]), ("Z5", z5(), vec![0, 1])] {
        let s = setup(&gens);
        for f in fs {
            let cs = s.system(0, None, f);
            let r = compare(&s.g, &cs, 6, SignMode::None, None).unwrap();
            cases.push((format!("{name} f={f}"), r));
        }
    }
    theorem_verdict(cases, |r| r.case == CaseTag::Effective && r.dropped_terms == 0)
}

pub fn criterion_7() -> Verdict {
    let s = setup(&z4());
    let mut cases = Vec::new();
    for f in [0, 1] {
        let cs = s.system(0, Some(("2g1", "2")), f);
        let r = compare(&s.g, &cs, 6, SignMode::None, None).unwrap();
        cases.push((format!("Z4 (2g1,2) f={f}"), r));
    }
    theorem_verdict(cases, |r| r.case == CaseTag::IneffectiveI2 && r.g0_order == 2 && r.dropped_terms > 0)
}

// ---------------------------------------------------------------- criterion 8

fn to_q_rows(m: &[[i64; 5]; 5]) -> Vec<Vec<Q>> {
    m.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect()
}

/// Effective cyclic groups ℤₙ(1,b,c) with n ≤ `max_order` acting in SL(3).
pub fn effective_cyclic_groups(max_order: u64) -> Vec<(String, Vec<Generator>)> {
    let mut out = Vec::new();
    for n in 2..=max_order {
        for b in 1..n as i64 {
            let c = (-1 - b).rem_euclid(n as i64);
            if c < b {
                continue; // (1,b,c) and (1,c,b) are the same up to swapping z₁,z₂
            }
            let gens = vec![Generator::new(n, [1, b, c])];
            if let Ok(g) = build_group(&gens) {
                if g.iso_orders[0] == 1 {
                    out.push((format!("Z{n}(1,{b},{c})"), gens));
                }
            }
        }
    }
    out
}

/// Outcome of the survey over effective cyclic groups.
#[derive(Clone, Debug, Default)]
pub struct Survey {
    pub checked: usize,
    /// Triangulations where the default star-edge basis gives a non-integral or negative inverse.
    pub default_failures: Vec<String>,
    /// Of those, the ones where the inverse is not even integral.
    pub non_integral: Vec<String>,
    /// Triangulations where no star-edge basis at all gives an integral nonnegative inverse.
    pub counterexamples: Vec<String>,
    /// Triangulations where no choice of one star edge per exceptional divisor is a ℤ-basis.
    pub no_star_basis: Vec<String>,
}

fn conjecture_holds(s: &Setup, tr: &Triangulation, basis: &ChargeBasis) -> (bool, bool) {
    let cs = brane_extension(&s.g, &s.t, tr, basis, default_segment(&s.t), 0).unwrap();
    let r = conjecture_check(&s.g, &cs).unwrap();
    (r.integral, r.integral && r.nonnegative)
}

/// Runs the inverse-matrix checker on every triangulation of every effective cyclic
/// group up to order `max_order`, first with the default star-edge basis and, where
/// that fails, with every other star-edge basis.
pub fn conjecture_survey(max_order: u64) -> Survey {
    let mut out = Survey::default();
    for (name, gens) in effective_cyclic_groups(max_order) {
        let s = setup(&gens);
        for (k, tr) in s.trs.iter().enumerate() {
            let tag = format!("{name} t{k}");
            let Ok(basis) = charge_basis(&s.t, tr) else {
                out.no_star_basis.push(tag);
                continue;
            };
            out.checked += 1;
            let (integral, holds) = conjecture_holds(&s, tr, &basis);
            if holds {
                continue;
            }
            if !integral {
                out.non_integral.push(tag.clone());
            }
            out.default_failures.push(tag.clone());
            let any = star_bases(&s.t, tr).unwrap().iter().any(|b| conjecture_holds(&s, tr, b).1);
            if !any {
                out.counterexamples.push(tag);
            }
        }
    }
    out
}

pub fn criterion_8() -> Verdict {
    let mut errors = Vec::new();
    let s = setup(&z6());
    for p in z6_phases() {
        let Some(k) = locate_phase(&s, &p) else {
            errors.push(format!("phase {} not found", p.name));
            continue;
        };
        let r = conjecture_check(&s.g, &s.system(k, None, 0)).unwrap();
        if let Some(m) = &p.matrix {
            if r.matrix.iter().zip(m.iter()).any(|(a, b)| a.as_slice() != b.as_slice()) {
                errors.push(format!("phase {} matrix {:?}", p.name, r.matrix));
            }
        }
        if r.inverse != to_q_rows(&p.inverse) {
            errors.push(format!("phase {} inverse differs", p.name));
        }
        if !(r.integral && r.nonnegative) {
            errors.push(format!("phase {} flags integral={} nonnegative={}", p.name, r.integral, r.nonnegative));
        }
    }
    let survey = conjecture_survey(12);
    Verdict::from_errors(
        errors,
        format!(
            "five Z6 inverses match, integral and nonnegative; survey |G| <= 12 (finding, not a failure): \
             {} triangulations checked, default star-edge basis fails on {} ({} non-integral), \
             no star-edge basis satisfies it on {} [{}]; no star-edge Z-basis exists on {} [{}]",
            survey.checked,
            survey.default_failures.len(),
            survey.non_integral.len(),
            survey.counterexamples.len(),
            survey.counterexamples.join(", "),
            survey.no_star_basis.len(),
            survey.no_star_basis.join(", ")
        ),
    )
}

// ---------------------------------------------------------------- criterion 9

pub fn criterion_9() -> Verdict {
    let mut errors = Vec::new();
    // Γ(1+n')/Γ(−n) = (−1)^{n+n'+1} Γ(1+n)/Γ(−n') for n ≥ 0.
    for n in 0..=20i64 {
        for np in -20..=20i64 {
            let lhs = gamma_ratio(&qi(1 + np), &qi(-n)).unwrap();
            let rhs = sgn(n + np + 1) * gamma_ratio(&qi(1 + n), &qi(-np)).unwrap();
            if lhs != rhs {
                errors.push(format!("n={n} n'={np}: {lhs} vs {rhs}"));
            }
        }
        // 1/Γ(−n) = 0, as Γ(1)/Γ(−n).
        let z = gamma_ratio(&qi(1), &qi(-n)).unwrap();
        if !z.is_zero() {
            errors.push(format!("1/Γ(-{n}) = {z}"));
        }
    }
    // lim Ψ/Γ(x−n) = (−1)^{n+1} n!: −d/dx of 1/Γ(x−n), evaluated as Γ(1+x)/Γ(x−n) to first order.
    for n in 0..=10u32 {
        let r = gamma_ratio(&Dual::variable(qi(1)), &Dual::variable(qi(-(n as i64)))).unwrap();
        let limit = -r.eps;
        let formula = sgn(n as i64 + 1) * fact(n as i64);
        if limit != formula || psi_gamma_limit::<Q>(n) != formula {
            errors.push(format!("Ψ/Γ at -{n}: {limit} vs {formula}"));
        }
    }
    Verdict::from_errors(errors, "reflection identity |n|,|n'| <= 20, zeros of 1/Γ, Ψ/Γ limits n <= 10")
}

// ---------------------------------------------------------------- criterion 10

/// Brute-force W coefficient for ℤ₃(1,1,1), written out from its closed form.
pub fn z3_w_brute(f: i64, m: i64, m0: i64) -> Q {
    if f < 0 || (f + 1) * m0 <= m {
        return Q::zero();
    }
    inv_fact(m) * inv_fact(m0 - 3 * m) * fact(m0 * (f + 1) - m - 1) * inv_fact(m0 * f + m) * sgn(m) * sgn(f * m0)
        / qi(m0)
}

/// Γ(z₁)/Γ(z₂) for integers by factorials, with the value 0 when only the denominator has a pole.
fn int_gamma_ratio(z1: i64, z2: i64) -> Q {
    assert!(z1 > 0, "numerator pole not expected");
    if z2 <= 0 {
        Q::zero()
    } else {
        fact(z1 - 1) / fact(z2 - 1)
    }
}

/// Brute-force orbifold coefficient of x^k x₀^d for ℤ₃(1,1,1) at a = −f − 1/3, without the x₀ phase.
pub fn z3_f_brute(f: i64, k: i64, d: i64) -> Option<Q> {
    if (k - d).rem_euclid(3) != 0 {
        return None;
    }
    let a = qi(-f) - q(1, 3);
    let (l1, l2) = (-a.clone(), a - q(1, 3));
    let z1 = q(k, 3) - &l2 * qi(d);
    let z2 = Q::one() - q(k, 3) + &l1 * qi(d);
    assert!(z1.is_integer() && z2.is_integer());
    let num = z1.to_integer().try_into().unwrap();
    let den = z2.to_integer().try_into().unwrap();
    Some(sgn(k.div_euclid(3)) * inv_fact((d - k) / 3) * int_gamma_ratio(num, den) * inv_fact(k) / qi(d))
}

pub fn criterion_10() -> Verdict {
    let d = 4;
    let s = setup(&z3());
    let mut errors = Vec::new();
    let mut compared = 0;
    for f in 0..=2 {
        let cs = s.system(0, None, f);
        let w = superpotential(&s.g, &cs, d).unwrap().series;
        let mut nonzero = 0;
        for m0 in 1..=d {
            for m in 0..=(d - m0) {
                let want = z3_w_brute(f, m, m0);
                nonzero += usize::from(!want.is_zero());
                compared += 1;
                if w.coeff(&[m, m0]) != want {
                    errors.push(format!("W f={f} at ({m},{m0}): {} vs {want}", w.coeff(&[m, m0])));
                }
            }
        }
        if w.len() != nonzero {
            errors.push(format!("W f={f}: {} terms vs {nonzero}", w.len()));
        }
        let weights = TorusWeights::new(&s.g, qi(-f) - q(1, 3)).unwrap();
        let fp = orbifold_disc_potential(&s.g, &weights, d).unwrap().series;
        let phase = Q::one() + weights.l(2);
        let mut nonzero = 0;
        for dd in 1..=d {
            for k in 0..=(d - dd) {
                let want = z3_f_brute(f, k, dd).unwrap_or_else(Q::zero);
                nonzero += usize::from(!want.is_zero());
                compared += 1;
                let got = fp.extract(&[qi(k), qi(dd)], &(&phase * qi(dd)));
                if got != want {
                    errors.push(format!("F f={f} at ({k},{dd}): {got} vs {want}"));
                }
            }
        }
        if fp.len() != nonzero {
            errors.push(format!("F f={f}: {} terms vs {nonzero}", fp.len()));
        }
    }
    Verdict::from_errors(errors, format!("{compared} coefficients of W and F for Z3 at D={d}, f = 0,1,2"))
}
