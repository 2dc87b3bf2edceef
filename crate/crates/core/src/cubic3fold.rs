//! The degeneration of a cubic threefold into four components, built from a
//! declarative scenario document, together with its verification driver.

use std::cell::OnceCell;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::chowvariety::{
    blowup, kunneth, proj_bundle_rank2, socle_with_divisor, solve_unknown_pullback, swap_factors,
    ChowError, Class, ExceptionalIdentification, Inclusion, PushforwardData, RingHom, VarietyRing,
};
use crate::exactlin::{is_prime, rank_mod_p, IntMatrix};
use crate::gradedring::{parse_poly, GradedPoly, SoclePoly, VarSpec};
use crate::prelogcx::{
    compute_prelog, saturate_prelog, verify_prelog_cycles, Component, Cycle, CycleReport,
    PairData, PrelogError, PrelogResult, SaturationResult, SncConfig, TripleData,
};

/// The built-in scenario document.
pub const BUILTIN_SCENARIO: &str = include_str!("../data/cubic_threefold.json");

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("scenario document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("`{item}`: {source}")]
    Build { item: String, source: ChowError },
    #[error(transparent)]
    Prelog(#[from] PrelogError),
    #[error("unknown ring `{0}`")]
    UnknownRing(String),
    #[error("unknown map `{0}`")]
    UnknownMap(String),
    #[error("`{0}` defined twice")]
    Duplicate(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, ScenarioError>;

fn at<T>(item: &str, r: std::result::Result<T, impl Into<ChowError>>) -> Result<T> {
    r.map_err(|e| ScenarioError::Build {
        item: item.to_string(),
        source: e.into(),
    })
}

// ---------------------------------------------------------------------------
// Document

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioDoc {
    pub id: String,
    pub degree: u32,
    pub rings: Vec<RingSpec>,
    pub maps: Vec<MapSpec>,
    pub components: Vec<ComponentSpec>,
    pub pairs: Vec<PairSpec>,
    #[serde(default)]
    pub triples: Vec<TripleSpec>,
    #[serde(default)]
    pub cycles: Vec<CycleSpec>,
    #[serde(default)]
    pub rederivations: Vec<RederivationSpec>,
    #[serde(default)]
    pub expectations: Vec<Expectation>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RingSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(flatten)]
    pub kind: RingKind,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RingKind {
    Socle {
        dim: u32,
        vars: Vec<VarSpec>,
        socle: String,
        #[serde(default)]
        linear: bool,
    },
    Renamed {
        from: String,
        map: BTreeMap<String, String>,
    },
    Kunneth {
        factors: [String; 2],
        #[serde(default)]
        force: bool,
    },
    ProjBundle {
        base: String,
        fiber: String,
        relation: String,
    },
    Blowup {
        ambient: String,
        exceptional: String,
        zeta: String,
        center_pullback: BTreeMap<String, String>,
    },
    Swap {
        from: String,
        pairs: Vec<(String, String)>,
        /// Images of the renamed exceptional generators in the original
        /// exceptional ring.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        exceptional_map: Option<BTreeMap<String, String>>,
        /// Registers the swapped ambient under this name.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ambient_name: Option<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapSpec {
    pub name: String,
    #[serde(flatten)]
    pub kind: MapKind,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapKind {
    Socle {
        source: String,
        target: String,
        pullback: BTreeMap<String, String>,
        pushforward: Vec<(String, String)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        solve: Option<SolveSpec>,
    },
    Section {
        bundle: String,
        sigma: String,
    },
    Exceptional {
        target: String,
    },
    StrictTransform {
        target: String,
        ambient_map: String,
        center_map: String,
        sigma: String,
    },
}

/// Pullback of `var` left open and determined from the projection formula.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveSpec {
    pub var: String,
    pub ansatz: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentSpec {
    pub index: usize,
    pub ring: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairSpec {
    pub i: usize,
    pub j: usize,
    pub ring: String,
    pub to_i: String,
    pub to_j: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TripleSpec {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub ring: String,
    pub to_ij: String,
    pub to_ik: String,
    pub to_jk: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleSpec {
    pub name: String,
    pub entries: Vec<EntrySpec>,
}

/// A class on one component: a plain polynomial, or a blow-up class split
/// into its pulled-back and exceptional parts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntrySpec {
    Plain(String),
    Split {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pullback: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        exceptional: Option<String>,
    },
}

/// Rebuilds a published socle from a forced product, a divisor ring and a
/// self-intersection number.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RederivationSpec {
    pub ring: String,
    pub factors: [String; 2],
    pub divisor: String,
    pub divisor_ring: String,
    pub divisor_pullback: BTreeMap<String, String>,
    pub self_intersection: DegreeProbe,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeProbe {
    pub ring: String,
    pub class: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Probe {
    Degree { ring: String, class: String },
    Rank { ring: String, degree: u32 },
}

/// A published constant with the place it comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Expectation {
    pub id: String,
    pub description: String,
    pub expected: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<Probe>,
    pub citation: String,
    /// Reported but never failed.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub informational: bool,
}

// ---------------------------------------------------------------------------
// Built scenario

#[derive(Clone, Debug)]
pub struct SolvedPullback {
    pub map: String,
    pub var: String,
    pub image: GradedPoly,
    pub coefficients: Vec<BigInt>,
}

#[derive(Clone, Debug)]
pub struct Rederivation {
    pub ring: String,
    pub socle: SoclePoly,
    /// Monomials whose coefficients differ: (monomial, rederived, published).
    pub mismatches: Vec<(String, BigInt, BigInt)>,
}

impl Rederivation {
    pub fn matches(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub struct Scenario {
    doc: ScenarioDoc,
    rings: Vec<(String, VarietyRing)>,
    maps: Vec<(String, Arc<Inclusion>)>,
    cfg: SncConfig,
    cycles: Vec<Cycle>,
    solved: Vec<SolvedPullback>,
    rederivations: Vec<Rederivation>,
}

impl std::fmt::Debug for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Scenario")
            .field("id", &self.doc.id)
            .field("rings", &self.rings.len())
            .field("maps", &self.maps.len())
            .finish()
    }
}

fn pairs_of(map: &BTreeMap<String, String>) -> Vec<(&str, &str)> {
    map.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect()
}

impl Scenario {
    pub fn builtin() -> Result<Self> {
        Self::from_json(BUILTIN_SCENARIO)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_doc(serde_json::from_str(text)?)
    }

    pub fn from_doc(doc: ScenarioDoc) -> Result<Self> {
        let mut sc = Scenario {
            doc: doc.clone(),
            rings: Vec::new(),
            maps: Vec::new(),
            cfg: SncConfig::new(Vec::new(), Vec::new(), Vec::new())?,
            cycles: Vec::new(),
            solved: Vec::new(),
            rederivations: Vec::new(),
        };
        for spec in &doc.rings {
            sc.add_ring(spec)?;
        }
        for spec in &doc.maps {
            sc.add_map(spec)?;
        }
        sc.cfg = sc.build_config()?;
        sc.cycles = doc
            .cycles
            .iter()
            .map(|c| sc.build_cycle(c))
            .collect::<Result<_>>()?;
        sc.rederivations = doc
            .rederivations
            .iter()
            .map(|r| sc.rederive(r))
            .collect::<Result<_>>()?;
        Ok(sc)
    }

    pub fn id(&self) -> &str {
        &self.doc.id
    }

    /// Degree of the prelog group under study.
    pub fn degree(&self) -> u32 {
        self.doc.degree
    }

    pub fn doc(&self) -> &ScenarioDoc {
        &self.doc
    }

    pub fn rings(&self) -> impl Iterator<Item = (&str, &VarietyRing)> {
        self.rings.iter().map(|(n, r)| (n.as_str(), r))
    }

    pub fn maps(&self) -> impl Iterator<Item = (&str, &Arc<Inclusion>)> {
        self.maps.iter().map(|(n, m)| (n.as_str(), m))
    }

    pub fn ring(&self, name: &str) -> Result<&VarietyRing> {
        self.rings
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, r)| r)
            .ok_or_else(|| ScenarioError::UnknownRing(name.into()))
    }

    pub fn map(&self, name: &str) -> Result<&Arc<Inclusion>> {
        self.maps
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| m)
            .ok_or_else(|| ScenarioError::UnknownMap(name.into()))
    }

    pub fn config(&self) -> &SncConfig {
        &self.cfg
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn expectations(&self) -> &[Expectation] {
        &self.doc.expectations
    }

    pub fn solved_pullbacks(&self) -> &[SolvedPullback] {
        &self.solved
    }

    pub fn rederivations(&self) -> &[Rederivation] {
        &self.rederivations
    }

    pub fn prelog(&self) -> Result<PrelogResult> {
        Ok(compute_prelog(&self.cfg, self.doc.degree)?)
    }

    /// The expectation registry as a plain-text table.
    pub fn expectation_table(&self) -> String {
        let mut out = String::new();
        let w = self.doc.expectations.iter().map(|e| e.id.len()).max().unwrap_or(2);
        for e in &self.doc.expectations {
            let flag = if e.informational { " (info)" } else { "" };
            let _ = writeln!(out, "{:<w$}  {:<14}  {}{}", e.id, e.expected.to_string(), e.citation, flag);
        }
        out
    }

    fn register_ring(&mut self, name: &str, ring: VarietyRing) -> Result<()> {
        if self.rings.iter().any(|(n, _)| n == name) {
            return Err(ScenarioError::Duplicate(name.into()));
        }
        self.rings.push((name.to_string(), ring));
        Ok(())
    }

    fn add_ring(&mut self, spec: &RingSpec) -> Result<()> {
        let name = spec.name.as_str();
        let mut ring = match &spec.kind {
            RingKind::Socle {
                dim,
                vars,
                socle,
                linear,
            } => at(name, VarietyRing::parse_socle(name, vars.clone(), *dim, socle, *linear))?,
            RingKind::Renamed { from, map } => at(name, self.ring(from)?.renamed(name, map))?,
            RingKind::Kunneth { factors, force } => {
                let (a, b) = (self.ring(&factors[0])?, self.ring(&factors[1])?);
                at(name, kunneth(name, a, b, *force))?
            }
            RingKind::ProjBundle {
                base,
                fiber,
                relation,
            } => {
                let base = self.ring(base)?;
                let mut vars = base.vars().to_vec();
                vars.push(VarSpec::new(fiber.clone(), 1));
                let rel = at(name, parse_poly(relation, &vars))?;
                at(name, proj_bundle_rank2(name, base, fiber, &rel))?
            }
            RingKind::Blowup {
                ambient,
                exceptional,
                zeta,
                center_pullback,
            } => {
                let ambient = self.ring(ambient)?;
                let ex = self.ring(exceptional)?;
                let base = ex
                    .bundle()
                    .ok_or_else(|| ScenarioError::Invalid(format!("`{}` is not a bundle", ex.name())))?
                    .base
                    .clone();
                let hom = at(name, RingHom::parse(name, &pairs_of(center_pullback), base.vars()))?;
                let zeta = at(name, parse_poly(zeta, ex.vars()))?;
                at(name, blowup(name, ambient, hom, ex, zeta))?
            }
            RingKind::Swap {
                from,
                pairs,
                exceptional_map,
                ambient_name,
            } => {
                let original = self.ring(from)?.clone();
                let ident = match (exceptional_map, original.blowup()) {
                    (Some(images), Some(b)) => {
                        let target = b.exceptional.clone();
                        let images = images
                            .iter()
                            .map(|(k, v)| Ok((k.clone(), at(name, parse_poly(v, target.vars()))?)))
                            .collect::<Result<_>>()?;
                        Some(ExceptionalIdentification { target, images })
                    }
                    (Some(_), None) => {
                        return Err(ScenarioError::Invalid(format!(
                            "`{name}`: exceptional_map needs a blow-up"
                        )))
                    }
                    (None, _) => None,
                };
                let swapped = at(name, swap_factors(name, &original, pairs, ident.as_ref()))?;
                if let Some(amb) = ambient_name {
                    let b = swapped.ring.blowup().ok_or_else(|| {
                        ScenarioError::Invalid(format!("`{name}`: ambient_name needs a blow-up"))
                    })?;
                    self.register_ring(amb, b.ambient.clone())?;
                }
                swapped.ring
            }
        };
        if let Some(note) = &spec.note {
            ring = ring.with_note(note.clone());
        }
        self.register_ring(name, ring)
    }

    fn add_map(&mut self, spec: &MapSpec) -> Result<()> {
        let name = spec.name.as_str();
        if self.maps.iter().any(|(n, _)| n == name) {
            return Err(ScenarioError::Duplicate(name.into()));
        }
        let incl = match &spec.kind {
            MapKind::Socle {
                source,
                target,
                pullback,
                pushforward,
                solve,
            } => {
                let (src, tgt) = (self.ring(source)?, self.ring(target)?);
                let hom = at(name, RingHom::parse(name, &pairs_of(pullback), src.vars()))?;
                let gens: Vec<(&str, &str)> =
                    pushforward.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
                let push = at(name, PushforwardData::parse(&gens, src.vars(), tgt.vars()))?;
                let incl = at(name, Inclusion::socle(name, src, tgt, hom, push))?;
                match solve {
                    None => incl,
                    Some(s) => {
                        let ansatz = s
                            .ansatz
                            .iter()
                            .map(|t| at(name, parse_poly(t, src.vars())))
                            .collect::<Result<Vec<_>>>()?;
                        let sol = at(name, solve_unknown_pullback(&incl, &s.var, &ansatz))?;
                        let incl = at(name, incl.with_pullback_image(&s.var, sol.image.clone()))?;
                        self.solved.push(SolvedPullback {
                            map: name.to_string(),
                            var: s.var.clone(),
                            image: sol.image,
                            coefficients: sol.coefficients,
                        });
                        incl
                    }
                }
            }
            MapKind::Section { bundle, sigma } => {
                let bundle = self.ring(bundle)?;
                let sigma = at(name, parse_poly(sigma, bundle.vars()))?;
                at(name, Inclusion::section(name, bundle, sigma))?
            }
            MapKind::Exceptional { target } => at(name, Inclusion::exceptional(name, self.ring(target)?))?,
            MapKind::StrictTransform {
                target,
                ambient_map,
                center_map,
                sigma,
            } => {
                let blown_up = self.ring(target)?;
                let ex = blown_up
                    .blowup()
                    .ok_or_else(|| ScenarioError::Invalid(format!("`{target}` is not a blow-up")))?
                    .exceptional
                    .clone();
                let sigma = at(name, parse_poly(sigma, ex.vars()))?;
                at(
                    name,
                    Inclusion::strict_transform(
                        name,
                        blown_up,
                        self.map(ambient_map)?.clone(),
                        self.map(center_map)?.clone(),
                        sigma,
                    ),
                )?
            }
        };
        self.maps.push((name.to_string(), Arc::new(incl)));
        Ok(())
    }

    fn build_config(&self) -> Result<SncConfig> {
        let d = &self.doc;
        let components = d
            .components
            .iter()
            .map(|c| {
                Ok(Component {
                    index: c.index,
                    ring: self.ring(&c.ring)?.clone(),
                })
            })
            .collect::<Result<_>>()?;
        let pairs = d
            .pairs
            .iter()
            .map(|p| {
                Ok(PairData {
                    i: p.i,
                    j: p.j,
                    ring: self.ring(&p.ring)?.clone(),
                    to_i: self.map(&p.to_i)?.clone(),
                    to_j: self.map(&p.to_j)?.clone(),
                })
            })
            .collect::<Result<_>>()?;
        let triples = d
            .triples
            .iter()
            .map(|t| {
                Ok(TripleData {
                    i: t.i,
                    j: t.j,
                    k: t.k,
                    ring: self.ring(&t.ring)?.clone(),
                    to_ij: self.map(&t.to_ij)?.clone(),
                    to_ik: self.map(&t.to_ik)?.clone(),
                    to_jk: self.map(&t.to_jk)?.clone(),
                })
            })
            .collect::<Result<_>>()?;
        Ok(SncConfig::new(components, pairs, triples)?)
    }

    fn build_cycle(&self, spec: &CycleSpec) -> Result<Cycle> {
        let comps = self.cfg.components();
        if spec.entries.len() != comps.len() {
            return Err(ScenarioError::Invalid(format!(
                "cycle `{}` has {} entries for {} components",
                spec.name,
                spec.entries.len(),
                comps.len()
            )));
        }
        let item = format!("cycle {}", spec.name);
        let entries = comps
            .iter()
            .zip(&spec.entries)
            .map(|(c, e)| match e {
                EntrySpec::Plain(text) => at(&item, c.ring.parse(text)),
                EntrySpec::Split {
                    pullback,
                    exceptional,
                } => {
                    let a = match pullback {
                        Some(t) => at(&item, c.ring.parse(t))?,
                        None => Class::zero(),
                    };
                    let b = match exceptional {
                        Some(t) => at(&item, c.ring.parse_exceptional(t))?,
                        None => Class::zero(),
                    };
                    Ok(a.add(&b))
                }
            })
            .collect::<Result<_>>()?;
        Ok(Cycle {
            name: spec.name.clone(),
            entries,
        })
    }

    fn rederive(&self, spec: &RederivationSpec) -> Result<Rederivation> {
        let item = format!("rederivation of {}", spec.ring);
        let published = self.ring(&spec.ring)?;
        let target_socle = published
            .socle()
            .ok_or_else(|| ScenarioError::Invalid(format!("{item}: not socle-presented")))?;
        let (a, b) = (self.ring(&spec.factors[0])?, self.ring(&spec.factors[1])?);
        let product = at(&item, kunneth(&format!("{}-product", spec.ring), a, b, true))?;
        let mut vars = product.vars().to_vec();
        let dvar = published
            .vars()
            .iter()
            .find(|v| v.name == spec.divisor)
            .ok_or_else(|| ScenarioError::Invalid(format!("{item}: no generator `{}`", spec.divisor)))?;
        vars.push(dvar.clone());
        let dring = self.ring(&spec.divisor_ring)?;
        let hom = at(&item, RingHom::parse(&item, &pairs_of(&spec.divisor_pullback), dring.vars()))?;
        let probe_ring = self.ring(&spec.self_intersection.ring)?;
        let d2 = probe_ring.degree_of(&at(&item, probe_ring.parse(&spec.self_intersection.class))?);
        let socle = at(
            &item,
            socle_with_divisor(&vars, product.socle().expect("product of socle rings"), &spec.divisor, dring, &hom, &d2),
        )?;
        let mut mismatches = Vec::new();
        let mut monos: Vec<_> = socle.as_poly().terms().map(|(m, _)| m.clone()).collect();
        monos.extend(target_socle.as_poly().terms().map(|(m, _)| m.clone()));
        monos.sort();
        monos.dedup();
        for m in monos {
            let (x, y) = (socle.value(&m), target_socle.value(&m));
            if x != y {
                mismatches.push((m.render(published.vars(), true), x, y));
            }
        }
        Ok(Rederivation {
            ring: spec.ring.clone(),
            socle,
            mismatches,
        })
    }
}

// ---------------------------------------------------------------------------
// Verification

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Info,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub description: String,
    pub citation: String,
    pub expected: Value,
    pub computed: Value,
    pub status: CheckStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub prelog_rank: Option<usize>,
    /// Invariant factors of `δ` greater than one.
    pub invariant_factors: Vec<Value>,
    pub saturation_index: Option<Value>,
    pub generator_count: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verification {
    pub scenario_id: String,
    pub checks: Vec<Check>,
    pub summary: GroupSummary,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Check ids or id prefixes (`saturation` selects `saturation.*`).
    pub only: Vec<String>,
    /// Extra characteristic in which the ranks of `δ` and `ρ` are checked.
    pub char_probe: Option<u64>,
}

impl VerifyOptions {
    pub fn selects(&self, id: &str) -> bool {
        self.only.is_empty()
            || self.only.iter().any(|f| {
                id == f || id.strip_prefix(f.as_str()).is_some_and(|rest| rest.starts_with('.'))
            })
    }
}

/// Integers within the 53-bit safe range become JSON numbers, larger ones
/// decimal strings.
pub fn int_value(x: &BigInt) -> Value {
    const SAFE: u64 = (1 << 53) - 1;
    match x.to_i64() {
        Some(i) if i.unsigned_abs() <= SAFE => json!(i),
        _ => Value::String(x.to_string()),
    }
}

fn ints_value(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(int_value).collect())
}

fn as_int(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

/// Equality of JSON values with integers compared by value whatever their
/// encoding.
pub fn values_match(expected: &Value, computed: &Value) -> bool {
    match (expected, computed) {
        (Value::Array(a), Value::Array(b)) => {
            a.len() == b.len() && a.iter().zip(b).all(|(x, y)| values_match(x, y))
        }
        _ => match (as_int(expected), as_int(computed)) {
            (Some(x), Some(y)) => x == y,
            _ => expected == computed,
        },
    }
}

struct Outcome {
    computed: Value,
    /// `None` compares `computed` with the expectation.
    passed: Option<bool>,
}

impl Outcome {
    fn value(computed: Value) -> Self {
        Outcome {
            computed,
            passed: None,
        }
    }

    fn judged(computed: Value, passed: bool) -> Self {
        Outcome {
            computed,
            passed: Some(passed),
        }
    }
}

type Eval<T> = std::result::Result<T, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

struct Verifier<'a> {
    sc: &'a Scenario,
    prelog: OnceCell<Eval<PrelogResult>>,
    cycles: OnceCell<Eval<CycleReport>>,
    saturation: OnceCell<Eval<SaturationResult>>,
}

impl<'a> Verifier<'a> {
    fn prelog(&self) -> Eval<&PrelogResult> {
        self.prelog
            .get_or_init(|| self.sc.prelog().map_err(err))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn cycles(&self) -> Eval<&CycleReport> {
        self.cycles
            .get_or_init(|| {
                let r = self.prelog()?;
                verify_prelog_cycles(&self.sc.cfg, r, &self.sc.cycles).map_err(err)
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    fn saturation(&self) -> Eval<&SaturationResult> {
        self.saturation
            .get_or_init(|| saturate_prelog(self.cycles()?).map_err(err))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn probe(&self, p: &Probe) -> Eval<Outcome> {
        match p {
            Probe::Degree { ring, class } => {
                let r = self.sc.ring(ring).map_err(err)?;
                let c = r.parse(class).map_err(err)?;
                Ok(Outcome::value(int_value(&r.degree_of(&c))))
            }
            Probe::Rank { ring, degree } => {
                let r = self.sc.ring(ring).map_err(err)?;
                Ok(Outcome::value(json!(r.rank(*degree).map_err(err)?)))
            }
        }
    }

    fn rank_sum(&self, what: &str, degree: &str) -> Eval<Outcome> {
        let k: u32 = degree
            .strip_prefix("deg")
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| format!("bad degree `{degree}`"))?;
        let cfg = &self.sc.cfg;
        let rings: Vec<&VarietyRing> = match what {
            "components" => cfg.components().iter().map(|c| &c.ring).collect(),
            "pairs" => cfg.pairs().iter().map(|p| &p.ring).collect(),
            "triples" => cfg.triples().iter().map(|t| &t.ring).collect(),
            _ => return Err(format!("unknown stratum `{what}`")),
        };
        let mut total = 0;
        for r in rings {
            total += r.rank(k).map_err(err)?;
        }
        Ok(Outcome::value(json!(total)))
    }

    fn matrix_check(&self, which: &str, field: &str) -> Eval<Outcome> {
        let r = self.prelog()?;
        let profile = if which == "delta" {
            &r.delta_profile
        } else {
            &r.rho_profile
        };
        if let Some(p) = field.strip_prefix("rank_mod_") {
            let p: u64 = p.parse().map_err(err)?;
            let rk = match profile.rank_mod(p) {
                Some(rk) => rk,
                None => {
                    let m = if which == "delta" { &r.delta.matrix } else { &r.rho.matrix };
                    rank_mod_p(m, p).map_err(err)?
                }
            };
            return Ok(Outcome::value(json!(rk)));
        }
        match field {
            "shape" => Ok(Outcome::value(json!([profile.rows, profile.cols]))),
            "rank" => Ok(Outcome::value(json!(profile.rank))),
            "invariant_factors" => Ok(Outcome::value(ints_value(&profile.nontrivial_factors()))),
            _ => Err(format!("unknown field `{field}`")),
        }
    }

    fn evaluate(&self, e: &Expectation) -> Eval<Outcome> {
        if let Some(p) = &e.probe {
            return self.probe(p);
        }
        let parts: Vec<&str> = e.id.splitn(3, '.').collect();
        match parts.as_slice() {
            ["y1", "rederivation"] | [_, "rederivation"] => {
                let ring = if parts[0] == "y1" { "Y1" } else { parts[0] };
                let r = self
                    .sc
                    .rederivations
                    .iter()
                    .find(|r| r.ring.eq_ignore_ascii_case(ring))
                    .ok_or_else(|| format!("no rederivation of {ring}"))?;
                let computed = if r.matches() {
                    json!(true)
                } else {
                    json!({
                        "matches": false,
                        "mismatches": r.mismatches.iter().map(|(m, x, y)| json!({
                            "monomial": m, "rederived": int_value(x), "published": int_value(y)
                        })).collect::<Vec<_>>()
                    })
                };
                Ok(Outcome::judged(computed, r.matches() == (e.expected == json!(true))))
            }
            ["ranks", what, degree] => self.rank_sum(what, degree),
            [which @ ("delta" | "rho"), field] => self.matrix_check(which, field),
            ["coker", "free_rank"] => Ok(Outcome::value(json!(self.prelog()?.coker.free_rank))),
            ["coker", "torsion"] => {
                let t: Vec<BigInt> = self
                    .prelog()?
                    .coker
                    .invariant_factors
                    .iter()
                    .filter(|d| !d.is_one())
                    .cloned()
                    .collect();
                Ok(Outcome::value(ints_value(&t)))
            }
            ["kernel", "rank"] => Ok(Outcome::value(json!(self.prelog()?.kernel.cols()))),
            ["commutativity"] => {
                let c = &self.prelog()?.commutativity;
                let computed = if c.holds {
                    json!(true)
                } else {
                    json!({"holds": false, "discrepancies": c.discrepancies})
                };
                Ok(Outcome::judged(computed, c.holds == (e.expected == json!(true))))
            }
            ["prelog", "M", "shape"] => {
                let m = &self.prelog()?.m;
                Ok(Outcome::value(json!([m.rows(), m.cols()])))
            }
            ["prelog", "rank"] => Ok(Outcome::value(json!(self.prelog()?.prelog_rank))),
            ["cycles", "prelog"] => Ok(Outcome::value(json!(self.cycles()?.all_prelog))),
            ["cycles", "basis"] => Ok(Outcome::value(json!(self.cycles()?.is_basis()))),
            ["cycles", name, "prelog"] => {
                let c = self
                    .cycles()?
                    .cycles
                    .iter()
                    .find(|c| c.name == *name)
                    .ok_or_else(|| format!("no cycle `{name}`"))?;
                Ok(Outcome::value(json!(c.prelog)))
            }
            ["pullback", var, map] => {
                let s = self
                    .sc
                    .solved
                    .iter()
                    .find(|s| s.var == *var && s.map == *map)
                    .ok_or_else(|| format!("no solved pullback of {var} along `{map}`"))?;
                let src = self.sc.map(map).map_err(err)?.source().clone();
                let text = e.expected.as_str().ok_or("expected a polynomial")?;
                let want = parse_poly(text, src.vars()).map_err(err)?;
                Ok(Outcome::judged(json!(s.image.render(src.vars())), s.image == want))
            }
            ["sections", map] => {
                let incl = self.sc.map(map).map_err(err)?;
                let target = incl.target();
                let fundamental = incl.push(&Class::from_poly(GradedPoly::one())).map_err(err)?;
                let text = e.expected.as_str().ok_or("expected a polynomial")?;
                let want = target.parse(text).map_err(err)?;
                Ok(Outcome::judged(json!(target.render(&fundamental)), fundamental == want))
            }
            ["maps", "projection_formula"] => {
                let mut failing = Vec::new();
                for (name, incl) in self.sc.maps() {
                    for d in 0..=incl.source().dim() {
                        let v = incl.check_projection_formula(d).map_err(err)?;
                        if !v.is_empty() {
                            failing.push(json!({"map": name, "degree": d, "violations": v.len()}));
                        }
                    }
                }
                let ok = failing.is_empty();
                let computed = if ok { json!(true) } else { Value::Array(failing) };
                Ok(Outcome::judged(computed, ok == (e.expected == json!(true))))
            }
            ["saturation", field] => {
                let s = self.saturation()?;
                let v = match *field {
                    "gcd_minors" => int_value(&s.gcd_maximal_minors),
                    "rank_mod_2" => json!(s.ranks_mod_p.iter().find(|(p, _)| *p == 2).map(|x| x.1)),
                    "kernel_mod_2" => json!(s.kernel_mod_2),
                    "index" => int_value(&s.index),
                    "rank" => json!(s.saturated.cols()),
                    "half_sum" => json!(s.half_sum_saturates),
                    _ => return Err(format!("unknown field `{field}`")),
                };
                Ok(Outcome::value(v))
            }
            _ => Err("no computation registered for this id".into()),
        }
    }

    fn check(&self, e: &Expectation) -> Check {
        let (computed, passed) = match self.evaluate(e) {
            Ok(o) => {
                let passed = o.passed.unwrap_or_else(|| values_match(&e.expected, &o.computed));
                (o.computed, passed)
            }
            Err(msg) => (json!({ "error": msg }), false),
        };
        let status = match (e.informational, passed) {
            (true, _) => CheckStatus::Info,
            (false, true) => CheckStatus::Pass,
            (false, false) => CheckStatus::Fail,
        };
        Check {
            id: e.id.clone(),
            description: e.description.clone(),
            citation: e.citation.clone(),
            expected: e.expected.clone(),
            computed,
            status,
        }
    }

    /// Ranks of `δ` and `ρ` in one extra characteristic; the expectation is
    /// the mod-2 entry for `p = 2` and the rational rank otherwise.
    fn char_probe(&self, p: u64) -> Vec<Check> {
        ["delta", "rho"]
            .iter()
            .map(|which| {
                let source_id = if p == 2 {
                    format!("{which}.rank_mod_2")
                } else {
                    format!("{which}.rank")
                };
                let base = self.sc.expectations().iter().find(|e| e.id == source_id);
                let e = Expectation {
                    id: format!("{which}.rank_char_{p}"),
                    description: format!("rank of {which} in characteristic {p}"),
                    expected: base.map_or(Value::Null, |b| b.expected.clone()),
                    probe: None,
                    citation: base.map_or_else(String::new, |b| b.citation.clone()),
                    informational: false,
                };
                if !is_prime(p) {
                    return Check {
                        computed: json!({"error": format!("{p} is not prime")}),
                        status: CheckStatus::Fail,
                        id: e.id,
                        description: e.description,
                        citation: e.citation,
                        expected: e.expected,
                    };
                }
                let mut c = self.check(&Expectation {
                    id: format!("{which}.rank_mod_{p}"),
                    ..e.clone()
                });
                c.id = e.id;
                c
            })
            .collect()
    }

    fn summary(&self) -> GroupSummary {
        GroupSummary {
            prelog_rank: self.prelog().ok().map(|r| r.prelog_rank),
            invariant_factors: self
                .prelog()
                .map(|r| r.delta_profile.nontrivial_factors().iter().map(int_value).collect())
                .unwrap_or_default(),
            saturation_index: self.saturation().ok().map(|s| int_value(&s.index)),
            generator_count: self.sc.cycles.len(),
        }
    }
}

/// Evaluates every selected expectation. Failures become report entries.
pub fn run_verification(sc: &Scenario, opts: &VerifyOptions) -> Verification {
    let v = Verifier {
        sc,
        prelog: OnceCell::new(),
        cycles: OnceCell::new(),
        saturation: OnceCell::new(),
    };
    let mut checks: Vec<Check> = sc
        .expectations()
        .iter()
        .filter(|e| opts.selects(&e.id))
        .map(|e| v.check(e))
        .collect();
    if let Some(p) = opts.char_probe {
        checks.extend(v.char_probe(p));
    }
    Verification {
        scenario_id: sc.id().to_string(),
        summary: v.summary(),
        checks,
    }
}

/// Coordinates of the cycles' images as a matrix, for examples and tests.
pub fn generator_matrix(sc: &Scenario) -> Result<IntMatrix> {
    let r = sc.prelog()?;
    Ok(verify_prelog_cycles(&sc.cfg, &r, &sc.cycles)?.generator_matrix())
}
