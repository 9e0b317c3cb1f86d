//! Job configuration and the per-subcommand pipelines that produce artifacts.
//!
//! Every runner returns its artifacts as (file name, contents) pairs; the binary
//! decides whether to write them to a directory or print them.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::charges::{brane_extension, charge_basis, default_segment, dual_graph, intersection_table, ChargeSystem};
use crate::correspondence::{compare, conjecture_check, SignMode, Status};
use crate::group::{build_group, Generator, GroupModel};
use crate::io::{
    to_json_string, ChargesArtifact, ConjectureArtifact, GroupArtifact, LatticeArtifact, MirrorMapArtifact,
    NamedSeries, PotentialArtifact, TriangulationArtifact,
};
use crate::lattice::{invariant_basis, pick_audit, triangle_points, InvariantBasis, TrianglePoints};
use crate::orbifold::{orbifold_disc_potential, TorusWeights};
use crate::resolution::{mirror_corrections, pf_annihilation_check, superpotential};
use crate::triangulate::{enumerate_triangulations, flop_graph, is_regular, triangulation_dot, Triangulation};
use crate::{Error, Result, Q};

/// Which triangulations a job runs on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TriangulationSelector {
    Index(usize),
    All,
    RegularOnly,
}

/// Everything a subcommand needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobConfig {
    pub generators: Vec<Generator>,
    pub triangulation: TriangulationSelector,
    /// Brane segment as point names (or indices) on v₁v₂; `None` picks the default.
    pub segment: Option<(String, String)>,
    pub framing: i64,
    pub degree: i64,
    pub dot: bool,
    pub signs: SignMode,
    pub framing_a: Option<Q>,
}

impl JobConfig {
    /// A configuration with the defaults of the command line.
    pub fn new(generators: Vec<Generator>) -> Self {
        JobConfig {
            generators,
            triangulation: TriangulationSelector::All,
            segment: None,
            framing: 0,
            degree: 6,
            dot: false,
            signs: SignMode::Auto,
            framing_a: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.degree < 1 {
            return Err(Error::Parse(format!("degree must be at least 1, got {}", self.degree)));
        }
        Ok(())
    }
}

/// The subcommands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subcommand {
    Group,
    Lattice,
    Triangulate,
    Charges,
    MirrorMap,
    Superpotential,
    OrbifoldPotential,
    Compare,
    Conjecture,
    All,
}

/// Artifacts and exit status of a run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutput {
    pub artifacts: Vec<(String, String)>,
    /// 0, or 2 when a comparison ended in a mismatch.
    pub exit_code: i32,
}

/// Group, lattice data and all triangulations, computed once per job.
#[derive(Clone, Debug)]
pub struct Model {
    pub group: GroupModel,
    pub basis: InvariantBasis,
    pub points: TrianglePoints,
    pub triangulations: Vec<Triangulation>,
}

impl Model {
    pub fn build(generators: &[Generator]) -> Result<Self> {
        let group = build_group(generators)?;
        let basis = invariant_basis(&group)?;
        let points = triangle_points(&group, &basis)?;
        let triangulations = enumerate_triangulations(&points)?;
        Ok(Model { group, basis, points, triangulations })
    }

    /// The selected triangulations with their indices.
    pub fn selected(&self, sel: &TriangulationSelector) -> Result<Vec<(usize, &Triangulation)>> {
        match sel {
            TriangulationSelector::Index(k) => self
                .triangulations
                .get(*k)
                .map(|t| vec![(*k, t)])
                .ok_or_else(|| Error::Parse(format!("triangulation {k} out of range 0..{}", self.triangulations.len()))),
            TriangulationSelector::All => Ok(self.triangulations.iter().enumerate().collect()),
            TriangulationSelector::RegularOnly => {
                let mut out = Vec::new();
                for (k, t) in self.triangulations.iter().enumerate() {
                    if is_regular(&self.points, t)? {
                        out.push((k, t));
                    }
                }
                Ok(out)
            }
        }
    }

    fn point(&self, name: &str) -> Result<usize> {
        self.points
            .index_of(name)
            .or_else(|| name.parse::<usize>().ok().filter(|&i| i < self.points.len()))
            .ok_or_else(|| Error::Parse(format!("unknown point {name:?}")))
    }

    /// The charge system of triangulation `tr` with the configured brane.
    pub fn charge_system(&self, tr: &Triangulation, cfg: &JobConfig) -> Result<ChargeSystem> {
        let seg = match &cfg.segment {
            Some((a, b)) => (self.point(a)?, self.point(b)?),
            None => default_segment(&self.points),
        };
        let basis = charge_basis(&self.points, tr)?;
        brane_extension(&self.group, &self.points, tr, &basis, seg, cfg.framing)
    }
}

fn tag(k: usize) -> String {
    format!("t{k}")
}

/// Runs one subcommand.
pub fn run(cmd: Subcommand, cfg: &JobConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let m = Model::build(&cfg.generators)?;
    let mut out = RunOutput { artifacts: Vec::new(), exit_code: 0 };
    let push = |out: &mut RunOutput, name: String, text: String| out.artifacts.push((name, text));
    let g = &m.group;
    let t = &m.points;
    let d = cfg.degree;
    let wants = |c: Subcommand| cmd == c || cmd == Subcommand::All;

    if wants(Subcommand::Group) {
        push(&mut out, "group.json".into(), to_json_string(&GroupArtifact::new(g))?);
    }
    if wants(Subcommand::Lattice) {
        let pick = pick_audit(t)?;
        let art = LatticeArtifact {
            basis: m.basis.clone(),
            points: t.clone(),
            interior_points: pick.interior,
            boundary_points: pick.boundary,
            area: pick.area,
        };
        push(&mut out, "lattice.json".into(), to_json_string(&art)?);
    }
    let selected = m.selected(&cfg.triangulation)?;
    if wants(Subcommand::Triangulate) {
        for &(k, tr) in &selected {
            let art = TriangulationArtifact {
                index: k,
                id: tr.id.clone(),
                triangles: tr.triangles.clone(),
                compact_curves: tr.interior_edges(),
                regular: is_regular(t, tr)?,
                intersections: intersection_table(t, tr)?,
            };
            push(&mut out, format!("triangulation_{}.json", tag(k)), to_json_string(&art)?);
            if cfg.dot {
                push(&mut out, format!("triangulation_{}.dot", tag(k)), triangulation_dot(t, tr));
                push(&mut out, format!("dual_{}.dot", tag(k)), dual_graph(t, tr).to_dot(t));
            }
        }
        if cfg.dot {
            push(&mut out, "flops.dot".into(), flop_graph(t, &m.triangulations)?.to_dot());
        }
    }
    for &(k, tr) in &selected {
        let needs_cs = [
            Subcommand::Charges,
            Subcommand::MirrorMap,
            Subcommand::Superpotential,
            Subcommand::Compare,
            Subcommand::Conjecture,
        ]
        .iter()
        .any(|&c| wants(c));
        if !needs_cs {
            break;
        }
        let cs = m.charge_system(tr, cfg)?;
        if wants(Subcommand::Charges) {
            let art = ChargesArtifact::new(t, &cs, intersection_table(t, tr)?);
            push(&mut out, format!("charges_{}.json", tag(k)), to_json_string(&art)?);
        }
        if wants(Subcommand::MirrorMap) {
            let mm = mirror_corrections(g, &cs, d);
            let mut corrections: Vec<NamedSeries> = mm
                .corrections
                .iter()
                .zip(g.small_part())
                .map(|(c, &h)| NamedSeries { name: format!("C_{}", g.label(h)), series: c.to_json() })
                .collect();
            corrections.push(NamedSeries { name: "C_0".into(), series: mm.c0.to_json() });
            let pf = pf_annihilation_check(g, &cs, d)?;
            let art = MirrorMapArtifact {
                triangulation: tr.id.clone(),
                degree: d,
                corrections,
                pf_all_vanish: pf.all_vanish(),
                pf,
            };
            push(&mut out, format!("mirror_map_{}.json", tag(k)), to_json_string(&art)?);
        }
        if wants(Subcommand::Superpotential) {
            let w = superpotential(g, &cs, d)?;
            push(&mut out, format!("superpotential_{}.json", tag(k)), to_json_string(&PotentialArtifact::new(&w, d))?);
        }
        if wants(Subcommand::Compare) {
            let r = compare(g, &cs, d, cfg.signs, cfg.framing_a.clone())?;
            if r.status == Status::Mismatch {
                out.exit_code = 2;
            }
            push(&mut out, format!("compare_{}.json", tag(k)), to_json_string(&r)?);
        }
        if wants(Subcommand::Conjecture) {
            match conjecture_check(g, &cs) {
                Ok(report) => {
                    let art = ConjectureArtifact { triangulation: tr.id.clone(), report };
                    push(&mut out, format!("conjecture_{}.json", tag(k)), to_json_string(&art)?);
                }
                Err(Error::NotEffective) if cmd == Subcommand::All => {}
                Err(e) => return Err(e),
            }
        }
    }
    if wants(Subcommand::OrbifoldPotential) {
        let a = match &cfg.framing_a {
            Some(a) => a.clone(),
            None => {
                let (_, tr) = *selected.first().ok_or_else(|| Error::Parse("no triangulation selected".into()))?;
                crate::correspondence::framing_correspondence(g, &m.charge_system(tr, cfg)?)?
            }
        };
        let w = TorusWeights::new(g, a)?;
        let f = orbifold_disc_potential(g, &w, d)?;
        push(&mut out, "orbifold_potential.json".into(), to_json_string(&PotentialArtifact::new(&f, d))?);
    }
    Ok(out)
}

/// Writes artifacts into `dir`, creating it if needed.
pub fn write_artifacts(dir: &Path, artifacts: &[(String, String)]) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    for (name, text) in artifacts {
        let p = dir.join(name);
        std::fs::write(&p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

/// Structured error body printed by the binary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub error: String,
    pub kind: String,
}

impl From<&Error> for ErrorReport {
    fn from(e: &Error) -> Self {
        let kind = format!("{e:?}");
        let kind = kind.split(['(', ' ', '{']).next().unwrap_or("Error").to_string();
        ErrorReport { error: e.to_string(), kind }
    }
}
