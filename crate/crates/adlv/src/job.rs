//! Batch front end: job specifications, dispatch, and machine-readable
//! reports.
//!
//! A job is one classification or oracle run. Jobs come from command-line
//! flags or from a JSON job file; reports are JSON documents with stable,
//! sorted field names (identical jobs produce byte-identical reports), or a
//! short text rendering.

use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::classify::{self, ClassificationReport, Pi0Kind};
use crate::isocrystal::{SigmaClass, SlopeBlock};
use crate::oracle::{
    count_points, enumerate_window, reduce_to_j, shift_lattice, EnumerateSpec, Field, FrobTwist,
    Lattice, Window, WinVec,
};
use crate::rootdata::{CartanType, Coweight, Isogeny, RationalCoweight, RootDatum};
use crate::{Error, Rat, Result};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum JobKind {
    #[serde(rename = "classify")]
    Classify,
    #[serde(rename = "mu-min")]
    MuMin,
    #[serde(rename = "dim")]
    Dim,
    #[serde(rename = "oracle-enumerate")]
    OracleEnumerate,
    #[serde(rename = "oracle-reduce")]
    OracleReduce,
    #[serde(rename = "oracle-count")]
    OracleCount,
    #[serde(rename = "verify-gl5")]
    VerifyGl5,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Format {
    #[serde(rename = "json")]
    #[default]
    Json,
    #[serde(rename = "text")]
    Text,
}

/// Group specification: Cartan factors plus isogeny.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub cartan: Vec<(String, usize)>,
    pub isogeny: String,
}

impl GroupSpec {
    /// Parse the compact form "GL:5", "PGL:4", "SL:2", "B:3:adjoint".
    pub fn parse_compact(s: &str) -> Result<GroupSpec> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::InvalidInput(format!("unrecognized group spec '{s}'"));
        match parts.as_slice() {
            ["GL", n] => {
                let n: usize = n.parse().map_err(|_| bad())?;
                if n < 1 {
                    return Err(bad());
                }
                Ok(GroupSpec { cartan: vec![("A".into(), n - 1)], isogeny: "GL".into() })
            }
            ["PGL", n] => {
                let n: usize = n.parse().map_err(|_| bad())?;
                if n < 2 {
                    return Err(bad());
                }
                Ok(GroupSpec { cartan: vec![("A".into(), n - 1)], isogeny: "adjoint".into() })
            }
            ["SL", n] => {
                let n: usize = n.parse().map_err(|_| bad())?;
                if n < 2 {
                    return Err(bad());
                }
                Ok(GroupSpec { cartan: vec![("A".into(), n - 1)], isogeny: "sc".into() })
            }
            [t, r, iso] => {
                let r: usize = r.parse().map_err(|_| bad())?;
                Ok(GroupSpec { cartan: vec![((*t).into(), r)], isogeny: (*iso).into() })
            }
            _ => Err(bad()),
        }
    }

    pub fn build(&self) -> Result<RootDatum> {
        let cartan: Vec<(CartanType, usize)> = self
            .cartan
            .iter()
            .map(|(t, r)| {
                let ty = match t.as_str() {
                    "A" => CartanType::A,
                    "B" => CartanType::B,
                    "C" => CartanType::C,
                    "D" => CartanType::D,
                    "E6" => CartanType::E6,
                    "E7" => CartanType::E7,
                    "E8" => CartanType::E8,
                    "F4" => CartanType::F4,
                    "G2" => CartanType::G2,
                    other => return Err(Error::InvalidInput(format!("unknown Cartan type '{other}'"))),
                };
                Ok((ty, *r))
            })
            .collect::<Result<_>>()?;
        let isogeny = match self.isogeny.as_str() {
            "GL" => Isogeny::GlProduct,
            "sc" | "simply-connected" => Isogeny::SimplyConnected,
            "adjoint" => Isogeny::Adjoint,
            other => return Err(Error::InvalidInput(format!("unknown isogeny '{other}'"))),
        };
        RootDatum::new(&cartan, isogeny)
    }
}

/// Sigma-conjugacy class specification: slope blocks, or Newton point plus
/// Kottwitz point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BSpec {
    Blocks { blocks: Vec<(i64, i64)> },
    Invariants { newton: Vec<String>, kappa: Vec<i64> },
}

impl BSpec {
    /// Parse the compact form "blocks:1/2,1/3" (each block m/h).
    pub fn parse_compact(s: &str) -> Result<BSpec> {
        let bad = || Error::InvalidInput(format!("unrecognized b spec '{s}'"));
        let rest = s.strip_prefix("blocks:").ok_or_else(bad)?;
        let blocks = rest
            .split(',')
            .map(|part| {
                let (m, h) = part.split_once('/').ok_or_else(bad)?;
                Ok((m.trim().parse().map_err(|_| bad())?, h.trim().parse().map_err(|_| bad())?))
            })
            .collect::<Result<Vec<(i64, i64)>>>()?;
        Ok(BSpec::Blocks { blocks })
    }

    pub fn blocks(&self) -> Result<Vec<SlopeBlock>> {
        match self {
            BSpec::Blocks { blocks } => blocks.iter().map(|&(m, h)| SlopeBlock::new(m, h)).collect(),
            BSpec::Invariants { .. } => {
                Err(Error::InvalidInput("this operation needs an explicit block decomposition".into()))
            }
        }
    }

    /// Build the class, against an optional explicit group.
    pub fn build(&self, group: Option<&GroupSpec>) -> Result<SigmaClass> {
        match self {
            BSpec::Blocks { blocks } => {
                let blocks: Vec<SlopeBlock> =
                    blocks.iter().map(|&(m, h)| SlopeBlock::new(m, h)).collect::<Result<_>>()?;
                let cls = SigmaClass::from_gl_blocks(&blocks)?;
                if let Some(g) = group {
                    let datum = g.build()?;
                    if datum.dim != cls.datum.dim || datum.gl_sizes().is_none() {
                        return Err(Error::InvalidInput(format!(
                            "group has ambient rank {} but the blocks span {}",
                            datum.dim, cls.datum.dim
                        )));
                    }
                    if datum.gl_sizes() != cls.datum.gl_sizes() {
                        return SigmaClass::new(datum, cls.newton.clone(), cls.kappa.clone());
                    }
                }
                Ok(cls)
            }
            BSpec::Invariants { newton, kappa } => {
                let group = group
                    .ok_or_else(|| Error::InvalidInput("newton/kappa b spec requires a group".into()))?;
                let datum = group.build()?;
                let coords: Vec<Rat> = newton
                    .iter()
                    .map(|s| {
                        Rat::from_str(s)
                            .map_err(|_| Error::InvalidInput(format!("bad rational '{s}' in newton")))
                    })
                    .collect::<Result<_>>()?;
                SigmaClass::new(datum, RationalCoweight(coords), kappa.clone())
            }
        }
    }
}

/// A fully described job.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Job {
    pub kind: JobKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<BSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<i64>>,
    #[serde(default)]
    pub closed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub s: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<(i32, i32)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<Vec<i32>>,
    #[serde(default)]
    pub format: Format,
}

impl Job {
    pub fn budget(&self) -> u64 {
        self.budget
            .or_else(|| std::env::var("ADLV_BUDGET").ok().and_then(|v| v.parse().ok()))
            .unwrap_or(DEFAULT_BUDGET)
    }

    fn mu(&self) -> Result<Coweight> {
        let mu = self.mu.clone().ok_or_else(|| Error::InvalidInput("job requires --mu".into()))?;
        Ok(Coweight(mu))
    }

    fn class(&self) -> Result<SigmaClass> {
        let b = self.b.as_ref().ok_or_else(|| Error::InvalidInput("job requires --b".into()))?;
        b.build(self.group.as_ref())
    }

    fn validated_mu(&self, cls: &SigmaClass) -> Result<Coweight> {
        let mu = self.mu()?;
        if mu.0.len() != cls.datum.dim {
            return Err(Error::InvalidInput(format!(
                "mu has length {} but the group has ambient rank {}",
                mu.0.len(),
                cls.datum.dim
            )));
        }
        Ok(mu)
    }

    fn oracle_setup(&self) -> Result<(Field, FrobTwist, EnumerateSpec)> {
        let blocks = self
            .b
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("oracle jobs require --b".into()))?
            .blocks()?;
        let b = FrobTwist::new(&blocks)?;
        let q = self.q.ok_or_else(|| Error::InvalidInput("oracle jobs require --q".into()))?;
        let s = *self.s.first().unwrap_or(&1);
        let field = Field::new(q, s)?;
        let (lo, hi) =
            self.window.ok_or_else(|| Error::InvalidInput("oracle jobs require --window LO:HI".into()))?;
        let region = Window::new(lo, hi)?;
        let mu = self.mu()?;
        if mu.0.len() != b.n() {
            return Err(Error::InvalidInput(format!(
                "mu has length {} but the blocks span {}",
                mu.0.len(),
                b.n()
            )));
        }
        let kappa =
            self.kappa.ok_or_else(|| Error::InvalidInput("oracle jobs require --kappa".into()))?;
        let spec = EnumerateSpec {
            region,
            mu,
            closed: self.closed,
            kappa,
            profile: self.profile.clone(),
            budget: self.budget(),
        };
        Ok((field, b, spec))
    }
}

fn pi0_json(kind: &Pi0Kind) -> Value {
    match kind {
        Pi0Kind::Pi1Torsor { free_rank, torsion } => {
            json!({"kind": "PI1_TORSOR", "pi1": {"free_rank": free_rank, "torsion": torsion}})
        }
        Pi0Kind::Discrete => json!({"kind": "DISCRETE"}),
        Pi0Kind::Reduced { levi, inner } => {
            json!({"kind": "REDUCED", "levi": levi, "inner": pi0_json(inner)})
        }
        Pi0Kind::PerFactor { factors } => {
            json!({"kind": "PER_FACTOR", "factors": factors.iter().map(pi0_json).collect::<Vec<_>>()})
        }
    }
}

pub fn report_json(report: &ClassificationReport) -> Value {
    json!({
        "nonempty": report.nonempty,
        "indecomposable": report.indecomposable,
        "hn_trace": report.hn_trace,
        "pi0": report.pi0.as_ref().map(pi0_json),
        "zero_dimensional": report.zero_dimensional,
        "dimension": report.dimension,
        "notes": report.notes,
    })
}

fn lattice_json(lat: &Lattice) -> Value {
    // canonical generator matrix trimmed to its support: per column,
    // coefficient vectors indexed by t-exponent
    let mut lo = *lat.pivots.iter().min().unwrap();
    let hi = *lat.pivots.iter().max().unwrap() + 1;
    for col in &lat.cols {
        for (d, _, _) in col.iter_nonzero() {
            lo = lo.min(d);
        }
    }
    let cols: Vec<Value> = lat
        .cols
        .iter()
        .map(|col| {
            let per_exp: Vec<Vec<u16>> =
                (lo..hi).map(|d| (0..lat.n).map(|i| col.get(d, i)).collect()).collect();
            json!(per_exp)
        })
        .collect();
    json!({
        "window": [lo, hi],
        "pivots": lat.pivots,
        "kappa": lat.kappa(),
        "cols": cols,
    })
}

fn rat_strings(v: &[Rat]) -> Vec<String> {
    v.iter().map(|r| r.to_string()).collect()
}

/// Execute a job, producing the JSON report document.
pub fn execute_job(job: &Job) -> Result<Value> {
    match job.kind {
        JobKind::Classify => {
            let cls = job.class()?;
            let mu = job.validated_mu(&cls)?;
            let report = classify::classify(&mu, &cls)?;
            Ok(json!({
                "kind": "classify",
                "group_rank": cls.datum.dim,
                "newton": rat_strings(&cls.newton.0),
                "kappa": cls.kappa,
                "mu": mu.0,
                "report": report_json(&report),
            }))
        }
        JobKind::MuMin => {
            let cls = job.class()?;
            let mu_min = cls.mu_min()?;
            Ok(json!({
                "kind": "mu-min",
                "newton": rat_strings(&cls.newton.0),
                "kappa": cls.kappa,
                "mu_min": mu_min.0,
            }))
        }
        JobKind::Dim => {
            let blocks = job
                .b
                .as_ref()
                .ok_or_else(|| Error::InvalidInput("dim requires --b".into()))?
                .blocks()?;
            if blocks.len() != 1 {
                return Err(Error::InvalidInput("dim requires a single superbasic block".into()));
            }
            let mu = job.mu()?;
            let d = classify::dim_superbasic(&mu, blocks[0])?;
            Ok(json!({
                "kind": "dim",
                "block": [blocks[0].m(), blocks[0].h()],
                "mu": mu.0,
                "dimension": d,
            }))
        }
        JobKind::OracleEnumerate => {
            let (field, b, spec) = job.oracle_setup()?;
            let members = enumerate_window(&field, &b, &spec)?;
            Ok(json!({
                "kind": "oracle-enumerate",
                "q": field.q(),
                "s": field.s(),
                "region": [spec.region.low, spec.region.high],
                "mu": spec.mu.0,
                "closed": spec.closed,
                "kappa": spec.kappa,
                "count": members.len(),
                "members": members.iter().map(lattice_json).collect::<Vec<_>>(),
            }))
        }
        JobKind::OracleReduce => {
            let (field, b, mut spec) = job.oracle_setup()?;
            spec.closed = true;
            let members = enumerate_window(&field, &b, &spec)?;
            let mut runs = Vec::new();
            for lat in &members {
                let out = reduce_to_j(&field, lat, &b, &spec.mu)?;
                runs.push(json!({
                    "start": lattice_json(lat),
                    "deltas": out.deltas,
                    "path_length": out.path.len(),
                    "terminal_shift": out.terminal_shift,
                }));
            }
            Ok(json!({
                "kind": "oracle-reduce",
                "q": field.q(),
                "s": field.s(),
                "mu": spec.mu.0,
                "kappa": spec.kappa,
                "count": runs.len(),
                "runs": runs,
            }))
        }
        JobKind::OracleCount => {
            let blocks = job
                .b
                .as_ref()
                .ok_or_else(|| Error::InvalidInput("oracle jobs require --b".into()))?
                .blocks()?;
            let b = FrobTwist::new(&blocks)?;
            let q = job.q.ok_or_else(|| Error::InvalidInput("oracle-count requires --q".into()))?;
            let degrees = if job.s.is_empty() { vec![1, 2] } else { job.s.clone() };
            let (lo, hi) = job
                .window
                .ok_or_else(|| Error::InvalidInput("oracle jobs require --window LO:HI".into()))?;
            let mu = job.mu()?;
            let kappa =
                job.kappa.ok_or_else(|| Error::InvalidInput("oracle jobs require --kappa".into()))?;
            let spec = EnumerateSpec {
                region: Window::new(lo, hi)?,
                mu,
                closed: job.closed,
                kappa,
                profile: job.profile.clone(),
                budget: job.budget(),
            };
            let report = count_points(q, &degrees, &b, &spec)?;
            Ok(json!({
                "kind": "oracle-count",
                "q": report.q,
                "counts": report.counts,
                "exponent": report.exponent,
                "mu": spec.mu.0,
                "kappa": spec.kappa,
            }))
        }
        JobKind::VerifyGl5 => {
            let qs: Vec<u32> = if let Some(q) = job.q { vec![q] } else { vec![2, 3] };
            let mut results = Vec::new();
            let mut pass = true;
            for q in qs {
                let v = verify_gl5(q, job.budget())?;
                pass &= v.pass();
                results.push(json!({
                    "q": v.q,
                    "patch_count": v.patch_count,
                    "patch_closed_members": v.patch_closed_members,
                    "patch_positions_match": v.patch_positions_match,
                    "enumerated": v.enumerated,
                    "translates_in_region": v.translates_in_region,
                    "members_match_translates": v.members_match_translates,
                    "closed_patch_count": v.closed_patch_count,
                }));
            }
            let cls = SigmaClass::from_gl_blocks(&[SlopeBlock::new(1, 2)?, SlopeBlock::new(1, 3)?])?;
            let report = classify::classify(&Coweight(vec![2, 0, 0, 0, 0]), &cls)?;
            let torsor_over_z =
                report.pi0 == Some(Pi0Kind::Pi1Torsor { free_rank: 1, torsion: vec![] });
            pass &= report.nonempty && report.indecomposable == Some(true) && torsor_over_z;
            Ok(json!({
                "kind": "verify-gl5",
                "classification": report_json(&report),
                "pi0_is_free_of_rank_one": torsor_over_z,
                "oracle": results,
                "pass": pass,
            }))
        }
    }
}

/// The analyzed GL_5 datum: blocks (1,2), (1,3) with mu = (2,0,0,0,0).
pub fn gl5_blocks() -> Vec<SlopeBlock> {
    vec![SlopeBlock::new(1, 2).unwrap(), SlopeBlock::new(1, 3).unwrap()]
}

/// The parametrized lattice of the GL_5 family: spanned by
/// e_{1,0} + a0 e_{2,0} + a1 e_{2,1}, e_{1,1} + a0^sigma e_{2,1}, and all
/// e_{i,j} with j >= 2.
pub fn gl5_patch_lattice(field: &Field, win: Window, a0: u16, a1: u16) -> Result<Lattice> {
    // basis order: e_{1,0}, e_{1,1}, e_{2,0}, e_{2,1}, e_{2,2}
    let n = 5;
    let mut v0 = WinVec::zero(n, win);
    v0.set(0, 0, 1)?;
    v0.set(0, 2, a0)?;
    v0.set(0, 3, a1)?;
    let mut v1 = WinVec::zero(n, win);
    v1.set(0, 1, 1)?;
    v1.set(0, 3, field.frob(a0))?;
    // e_{2,2} and the t-multiples of every basis vector
    let mut rest = Vec::new();
    let mut e22 = WinVec::zero(n, win);
    e22.set(0, 4, 1)?;
    rest.push(e22);
    for i in 0..4 {
        let mut v = WinVec::zero(n, win);
        v.set(1, i, 1)?;
        rest.push(v);
    }
    let mut gens = vec![v0, v1];
    gens.extend(rest);
    Lattice::canonicalize(field, n, win, &gens)
}

/// Outcome of the canned GL_5 verification at one q.
///
/// The parametrized lattices all lie in the closed stratum; the relative
/// position is exactly mu when a0 is a unit and drops to mu_min = (1,1,0,0,0)
/// on the a0 = 0 boundary. The strict members found in the region are
/// exactly the shift-translates of the unit-a0 lattices.
#[derive(Debug, Clone)]
pub struct Gl5Verification {
    pub q: u32,
    /// number of patch lattices tested (q^2)
    pub patch_count: usize,
    /// every patch lattice lies in the closed stratum
    pub patch_closed_members: bool,
    /// patch position is mu exactly when a0 != 0, mu_min otherwise
    pub patch_positions_match: bool,
    /// members enumerated in the test region at kappa = 2
    pub enumerated: usize,
    /// shift-translates of strict (a0 != 0) patch lattices in the region
    pub translates_in_region: usize,
    /// the enumerated member set equals the translate set
    pub members_match_translates: bool,
    /// closed-patch point count on the pivot profile (q^2)
    pub closed_patch_count: usize,
}

impl Gl5Verification {
    pub fn pass(&self) -> bool {
        self.patch_closed_members
            && self.patch_positions_match
            && self.members_match_translates
            && self.closed_patch_count == (self.q * self.q) as usize
    }
}

/// Oracle verification of the GL_5 family at extension degree 1.
pub fn verify_gl5(q: u32, budget: u64) -> Result<Gl5Verification> {
    let field = Field::new(q, 1)?;
    let blocks = gl5_blocks();
    let b = FrobTwist::new(&blocks)?;
    let mu = Coweight(vec![2, 0, 0, 0, 0]);
    let mu_min = Coweight(vec![1, 1, 0, 0, 0]);
    let region = Window::new(-1, 2)?;
    let win = crate::oracle::padded_window(region, &b, &mu);

    let mut patch_strict: Vec<Lattice> = Vec::new();
    let mut patch_closed_members = true;
    let mut patch_positions_match = true;
    let mut patch_count = 0usize;
    for a0 in field.elements() {
        for a1 in field.elements() {
            let lat = gl5_patch_lattice(&field, win, a0, a1)?;
            patch_count += 1;
            patch_closed_members &= crate::oracle::member(&field, &lat, &b, &mu, true)?;
            let strict = crate::oracle::member(&field, &lat, &b, &mu, false)?;
            if a0 != 0 {
                patch_positions_match &= strict;
                patch_strict.push(lat);
            } else {
                patch_positions_match &=
                    !strict && crate::oracle::member(&field, &lat, &b, &mu_min, false)?;
            }
        }
    }

    // every strict member in the region at kappa = 2 is a shift-translate
    // of a strict patch lattice
    let spec =
        EnumerateSpec { region, mu: mu.clone(), closed: false, kappa: 2, profile: None, budget };
    let members = enumerate_window(&field, &b, &spec)?;
    let mut translates = Vec::new();
    for base in &patch_strict {
        for a in -4i64..=4 {
            let Ok(shifted) = shift_lattice(&field, base, &blocks, &[a, -a]) else { continue };
            if shifted.pivots.iter().all(|&p| region.low <= p && p < region.high)
                && !translates.contains(&shifted)
            {
                translates.push(shifted);
            }
        }
    }
    let members_match_translates =
        members.len() == translates.len() && members.iter().all(|m| translates.contains(m));

    // the closed stratum on the patch profile is the full q^2 family
    let closed_spec = EnumerateSpec {
        region,
        mu,
        closed: true,
        kappa: 2,
        profile: Some(vec![0, 0, 1, 1, 0]),
        budget,
    };
    let closed_patch = enumerate_window(&field, &b, &closed_spec)?;

    Ok(Gl5Verification {
        q,
        patch_count,
        patch_closed_members,
        patch_positions_match,
        enumerated: members.len(),
        translates_in_region: translates.len(),
        members_match_translates,
        closed_patch_count: closed_patch.len(),
    })
}

/// Human-readable rendering of a report document.
pub fn render_text(doc: &Value) -> String {
    let mut out = String::new();
    render_text_inner(doc, 0, &mut out);
    out
}

fn render_text_inner(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match val {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text_inner(val, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {val}\n")),
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match item {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}-\n"));
                        render_text_inner(item, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}- {item}\n")),
                }
            }
        }
        other => out.push_str(&format!("{pad}{other}\n")),
    }
}

/// Exit code for an error, per the interface contract.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::PrecisionInsufficient(_) => 3,
        Error::BudgetExceeded { .. } => 4,
        _ => 2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compact_group_specs() {
        let g = GroupSpec::parse_compact("GL:5").unwrap();
        assert_eq!(g.cartan, vec![("A".into(), 4)]);
        let datum = g.build().unwrap();
        assert_eq!(datum.dim, 5);
        let g = GroupSpec::parse_compact("PGL:4").unwrap();
        assert_eq!(g.build().unwrap().fundamental_group().invariant_factors(), &[4]);
        let g = GroupSpec::parse_compact("B:3:adjoint").unwrap();
        assert_eq!(g.build().unwrap().fundamental_group().invariant_factors(), &[2]);
        assert!(GroupSpec::parse_compact("XX:1").is_err());
    }

    #[test]
    fn compact_b_specs() {
        let b = BSpec::parse_compact("blocks:1/2,1/3").unwrap();
        assert_eq!(b, BSpec::Blocks { blocks: vec![(1, 2), (1, 3)] });
        let cls = b.build(None).unwrap();
        assert_eq!(cls.datum.dim, 5);
        assert!(BSpec::parse_compact("1/2").is_err());
        assert!(BSpec::parse_compact("blocks:2/4").unwrap().build(None).is_err());
    }

    #[test]
    fn job_json_roundtrip() {
        let text = r#"{"kind":"oracle-enumerate","q":2,"s":[1],"window":[-2,3],
            "b":{"blocks":[[1,2]]},"mu":[1,0],"closed":false,"kappa":0,"budget":1000000}"#;
        let job: Job = serde_json::from_str(text).unwrap();
        assert_eq!(job.kind, JobKind::OracleEnumerate);
        let rendered = serde_json::to_string(&job).unwrap();
        let again: Job = serde_json::from_str(&rendered).unwrap();
        assert_eq!(job, again);
    }

    #[test]
    fn job_length_mismatch_diagnostic() {
        let job = Job {
            kind: JobKind::Classify,
            group: Some(GroupSpec::parse_compact("GL:5").unwrap()),
            b: Some(BSpec::parse_compact("blocks:1/2,1/3").unwrap()),
            mu: Some(vec![2, 0, 0, 0]),
            closed: false,
            kappa: None,
            q: None,
            s: vec![],
            window: None,
            budget: None,
            profile: None,
            format: Format::Json,
        };
        let err = execute_job(&job).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
        assert_eq!(exit_code(&err), 2);
    }

    #[test]
    fn classify_job_gl5() {
        let job = Job {
            kind: JobKind::Classify,
            group: Some(GroupSpec::parse_compact("GL:5").unwrap()),
            b: Some(BSpec::parse_compact("blocks:1/2,1/3").unwrap()),
            mu: Some(vec![2, 0, 0, 0, 0]),
            closed: false,
            kappa: None,
            q: None,
            s: vec![],
            window: None,
            budget: None,
            profile: None,
            format: Format::Json,
        };
        let doc = execute_job(&job).unwrap();
        assert_eq!(doc["report"]["nonempty"], Value::Bool(true));
        assert_eq!(doc["report"]["pi0"]["kind"], Value::String("PI1_TORSOR".into()));
        assert_eq!(doc["report"]["pi0"]["pi1"]["free_rank"], serde_json::json!(1));
        assert_eq!(doc["report"]["dimension"], Value::Null);
        // determinism: identical jobs produce byte-identical reports
        let doc2 = execute_job(&job).unwrap();
        assert_eq!(serde_json::to_string(&doc).unwrap(), serde_json::to_string(&doc2).unwrap());
    }

    #[test]
    fn dim_job_gl3() {
        let job = Job {
            kind: JobKind::Dim,
            group: None,
            b: Some(BSpec::parse_compact("blocks:4/3").unwrap()),
            mu: Some(vec![3, 1, 0]),
            closed: false,
            kappa: None,
            q: None,
            s: vec![],
            window: None,
            budget: None,
            profile: None,
            format: Format::Json,
        };
        let doc = execute_job(&job).unwrap();
        assert_eq!(doc["dimension"], serde_json::json!(2));
    }

    #[test]
    fn newton_kappa_b_spec() {
        let job_text = r#"{"kind":"classify","group":{"cartan":[["A",1]],"isogeny":"GL"},
            "b":{"newton":["1/2","1/2"],"kappa":[1]},"mu":[1,0]}"#;
        let job: Job = serde_json::from_str(job_text).unwrap();
        let doc = execute_job(&job).unwrap();
        assert_eq!(doc["report"]["nonempty"], Value::Bool(true));
        assert_eq!(doc["report"]["zero_dimensional"], Value::Bool(true));
    }
}
