//! Input parsing, JSON artifacts and DOT export.

/// Serde adapter storing a rational as a `"p/q"` string.
pub mod q_serde {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::scalar::{fmt_q, parse_q};
    use crate::Q;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter storing a rational vector as `"p/q"` strings.
pub mod qvec_serde {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::scalar::{fmt_q, parse_q};
    use crate::Q;

    pub fn serialize<S: Serializer>(x: &[Q], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(x.iter().map(fmt_q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|s| parse_q(s).map_err(serde::de::Error::custom)).collect()
    }
}

/// Serde adapter storing a rational matrix as rows of `"p/q"` strings.
pub mod qmat_serde {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::scalar::{fmt_q, parse_q};
    use crate::Q;

    pub fn serialize<S: Serializer>(x: &[Vec<Q>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(x.iter().map(|r| r.iter().map(fmt_q).collect::<Vec<_>>()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Q>>, D::Error> {
        let v = Vec::<Vec<String>>::deserialize(d)?;
        v.iter()
            .map(|r| r.iter().map(|s| parse_q(s).map_err(serde::de::Error::custom)).collect())
            .collect()
    }
}

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::charges::{ChargeSystem, IntersectionRow};
use crate::correspondence::ConjectureReport;
use crate::group::{Generator, GroupModel};
use crate::lattice::{InvariantBasis, TrianglePoints};
use crate::series::SeriesJson;
use crate::triangulate::Edge;
use crate::{Error, Result};

/// A group specification as stored on disk: a list of cyclic generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub generators: Vec<Generator>,
}

/// Parses the shorthand `Zn(a,b,c)` or a product `Zn(a,b,c)xZm(d,e,f)`.
pub fn parse_shorthand(s: &str) -> Result<Vec<Generator>> {
    let bad = || Error::Parse(format!("cannot read group shorthand {s:?}"));
    let mut gens = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let body = rest.strip_prefix('Z').or_else(|| rest.strip_prefix('z')).ok_or_else(bad)?;
        let open = body.find('(').ok_or_else(bad)?;
        let close = body.find(')').ok_or_else(bad)?;
        let order: u64 = body[..open].trim().parse().map_err(|_| bad())?;
        let w: Vec<i64> = body[open + 1..close]
            .split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let weights: [i64; 3] = w.try_into().map_err(|_| bad())?;
        gens.push(Generator::new(order, weights));
        rest = body[close + 1..].trim_start();
        if let Some(r) = rest.strip_prefix(['x', '×', '*']) {
            rest = r.trim_start();
            if rest.is_empty() {
                return Err(bad());
            }
        } else if !rest.is_empty() {
            return Err(bad());
        }
    }
    if gens.is_empty() {
        return Err(bad());
    }
    Ok(gens)
}

/// Reads a group from a JSON file (`{"generators": [...]}` or a bare generator list),
/// or from shorthand when `arg` is not an existing path.
pub fn load_group_spec(arg: &str) -> Result<Vec<Generator>> {
    let path = Path::new(arg);
    if !path.exists() {
        return parse_shorthand(arg);
    }
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{arg}: {e}")))?;
    if let Ok(spec) = serde_json::from_str::<GroupSpec>(&text) {
        return Ok(spec.generators);
    }
    serde_json::from_str::<Vec<Generator>>(&text).map_err(|e| Error::Parse(format!("{arg}: {e}")))
}

/// Pretty JSON with a trailing newline; key order follows the struct definitions, so
/// identical inputs give byte-identical output.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Parses an artifact previously written by [`to_json_string`].
pub fn from_json_str<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// One group element in an artifact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub label: String,
    pub shifts: Vec<String>,
    pub order: u64,
    pub age: u8,
}

/// The `group` artifact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupArtifact {
    pub generators: Vec<Generator>,
    pub order: usize,
    /// |G₀|, |G₁|, |G₂|.
    pub isotropy_orders: [usize; 3],
    pub alpha: String,
    pub beta: String,
    pub abc: (i64, i64, i64),
    /// Number of cyclic coordinate rotations applied (0 or 1).
    pub rotation: u8,
    pub elements: Vec<ElementJson>,
    pub small_part: Vec<String>,
}

impl GroupArtifact {
    pub fn new(g: &GroupModel) -> Self {
        GroupArtifact {
            generators: g.generators.clone(),
            order: g.order(),
            isotropy_orders: g.iso_orders,
            alpha: g.label(g.alpha).to_string(),
            beta: g.label(g.beta).to_string(),
            abc: g.abc,
            rotation: g.rotation,
            elements: g
                .elements
                .iter()
                .map(|e| ElementJson {
                    label: e.label.clone(),
                    shifts: e.shifts.iter().map(crate::scalar::fmt_q).collect(),
                    order: e.order,
                    age: e.age(),
                })
                .collect(),
            small_part: g.small_part().iter().map(|&h| g.label(h).to_string()).collect(),
        }
    }
}

/// The `lattice` artifact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeArtifact {
    pub basis: InvariantBasis,
    pub points: TrianglePoints,
    pub interior_points: usize,
    pub boundary_points: usize,
    #[serde(with = "q_serde")]
    pub area: crate::Q,
}

/// One triangulation with its curves and intersection numbers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationArtifact {
    pub index: usize,
    pub id: String,
    pub triangles: Vec<[usize; 3]>,
    pub compact_curves: Vec<Edge>,
    pub regular: bool,
    pub intersections: Vec<IntersectionRow>,
}

/// The `charges` artifact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChargesArtifact {
    pub triangulation: String,
    /// Point names in 𝒮 order.
    pub points: Vec<String>,
    pub charges: Vec<Vec<i64>>,
    pub curves: Vec<(usize, usize)>,
    pub l0: Vec<i64>,
    pub i0i1i2: (usize, usize, usize),
    pub framing: i64,
    pub intersections: Vec<IntersectionRow>,
}

impl ChargesArtifact {
    pub fn new(t: &TrianglePoints, cs: &ChargeSystem, intersections: Vec<IntersectionRow>) -> Self {
        ChargesArtifact {
            triangulation: cs.triangulation.clone(),
            points: t.names.clone(),
            charges: cs.charges.clone(),
            curves: cs.chosen_curves.clone(),
            l0: cs.l0.clone(),
            i0i1i2: cs.brane,
            framing: cs.framing,
            intersections,
        }
    }
}

/// A named series in an artifact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedSeries {
    pub name: String,
    pub series: SeriesJson,
}

/// The `mirror-map` artifact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MirrorMapArtifact {
    pub triangulation: String,
    pub degree: i64,
    pub corrections: Vec<NamedSeries>,
    pub pf_all_vanish: bool,
    pub pf: crate::resolution::PfReport,
}

/// The `superpotential` and `orbifold-potential` artifacts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PotentialArtifact {
    pub side: crate::resolution::Side,
    pub framing: Option<i64>,
    pub a: Option<String>,
    pub degree: i64,
    pub series: SeriesJson,
}

impl PotentialArtifact {
    pub fn new(p: &crate::resolution::Potential, degree: i64) -> Self {
        PotentialArtifact {
            side: p.side,
            framing: p.framing,
            a: p.weight_a.as_ref().map(crate::scalar::fmt_q),
            degree,
            series: p.series.to_json(),
        }
    }
}

/// The `conjecture` artifact: one report per triangulation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureArtifact {
    pub triangulation: String,
    pub report: ConjectureReport,
}
