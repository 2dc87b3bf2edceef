//! Numerical Chow rings of smooth projective varieties and the maps between
//! them.
//!
//! A [`VarietyRing`] is either presented by a dual socle generator or as a
//! blow-up whose classes are formal sums `π*(a) + j_*(γ)`. Each graded piece
//! is the image lattice of a Gram matrix of top intersection numbers, so all
//! groups are torsion-free from the start. [`Inclusion`] turns pullbacks and
//! pushforwards into integer matrices in lattice coordinates.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactlin::{
    row_lattice_basis, solve_in_row_basis, solve_integer, IntMatrix, LinAlgError,
};
use crate::gradedring::{
    mono_basis, parse_poly, validate_vars, GradedError, GradedPoly, Monomial, SoclePoly, VarSpec,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChowError {
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error("degree {degree} out of range 0..={dim} for `{ring}`")]
    DegreeOutOfRange { ring: String, degree: i64, dim: u32 },
    #[error("class is not homogeneous on `{0}`")]
    Inhomogeneous(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("Künneth formula unavailable for {0}: neither factor is linear")]
    NotLinear(String),
    #[error("bad bundle relation: {0}")]
    BadRelation(String),
    #[error("bad section class: {0}")]
    BadSection(String),
    #[error("map `{map}` has no image for `{var}`")]
    MissingImage { map: String, var: String },
    #[error("{class} is not expressible over the module generators of `{map}`")]
    NotExpressible { map: String, class: String },
    #[error("class is not in the lattice of `{ring}` in degree {degree}")]
    NotInLattice { ring: String, degree: u32 },
    #[error("no integer solution: {0}")]
    NoSolution(String),
    #[error("solution is not unique: {0}")]
    NonUnique(String),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, ChowError>;

/// A class `π*(ambient) + j_*(exceptional)`. On socle-presented rings the
/// exceptional part is always zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Class {
    pub ambient: GradedPoly,
    pub exceptional: GradedPoly,
}

impl Class {
    pub fn zero() -> Self {
        Class::default()
    }

    pub fn from_poly(p: GradedPoly) -> Self {
        Class {
            ambient: p,
            exceptional: GradedPoly::zero(),
        }
    }

    pub fn exceptional(g: GradedPoly) -> Self {
        Class {
            ambient: GradedPoly::zero(),
            exceptional: g,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.ambient.is_zero() && self.exceptional.is_zero()
    }

    pub fn add(&self, other: &Class) -> Class {
        Class {
            ambient: &self.ambient + &other.ambient,
            exceptional: &self.exceptional + &other.exceptional,
        }
    }

    pub fn sub(&self, other: &Class) -> Class {
        Class {
            ambient: &self.ambient - &other.ambient,
            exceptional: &self.exceptional - &other.exceptional,
        }
    }

    pub fn scale(&self, k: &BigInt) -> Class {
        Class {
            ambient: self.ambient.scale(k),
            exceptional: self.exceptional.scale(k),
        }
    }
}

impl From<GradedPoly> for Class {
    fn from(p: GradedPoly) -> Self {
        Class::from_poly(p)
    }
}

/// Ring map on generators: each source generator goes to a polynomial in the
/// target generators. Used for pullbacks, so "source" is the larger variety.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingHom {
    pub name: String,
    pub images: BTreeMap<String, GradedPoly>,
}

impl RingHom {
    pub fn new(name: impl Into<String>, images: BTreeMap<String, GradedPoly>) -> Self {
        RingHom {
            name: name.into(),
            images,
        }
    }

    /// Builds a map from `(variable, polynomial text)` pairs, parsing the
    /// images in `target_vars`.
    pub fn parse(name: &str, pairs: &[(&str, &str)], target_vars: &[VarSpec]) -> Result<Self> {
        let mut images = BTreeMap::new();
        for (v, text) in pairs {
            images.insert(v.to_string(), parse_poly(text, target_vars)?);
        }
        Ok(RingHom::new(name, images))
    }

    pub fn identity_on(name: &str, vars: &[VarSpec]) -> Self {
        RingHom::new(
            name,
            vars.iter()
                .map(|v| (v.name.clone(), GradedPoly::var(&v.name)))
                .collect(),
        )
    }

    pub fn image(&self, var: &str) -> Option<&GradedPoly> {
        self.images.get(var)
    }

    pub fn has_image(&self, m: &Monomial) -> bool {
        m.iter().all(|(n, _)| self.images.contains_key(n))
    }

    pub fn apply(&self, p: &GradedPoly) -> Result<GradedPoly> {
        let mut missing = None;
        let out = p.substitute(|n| {
            let img = self.images.get(n).cloned();
            if img.is_none() && missing.is_none() {
                missing = Some(n.to_string());
            }
            img
        });
        match (out, missing) {
            (_, Some(var)) => Err(ChowError::MissingImage {
                map: self.name.clone(),
                var,
            }),
            (r, None) => Ok(r?),
        }
    }

    pub fn with_image(&self, var: &str, image: GradedPoly) -> RingHom {
        let mut images = self.images.clone();
        images.insert(var.to_string(), image);
        RingHom::new(self.name.clone(), images)
    }

    /// Checks that every image is homogeneous of the generator's degree.
    pub fn check_degrees(&self, source_vars: &[VarSpec], target_vars: &[VarSpec]) -> Result<()> {
        for (v, img) in &self.images {
            let want = source_vars
                .iter()
                .find(|s| &s.name == v)
                .ok_or_else(|| GradedError::UnknownVariable(v.clone()))?
                .degree;
            if let Some(d) = img.homogeneous_degree(target_vars)? {
                if d != want {
                    return Err(ChowError::Inconsistent(format!(
                        "`{}` sends {} (degree {}) to {} (degree {})",
                        self.name,
                        v,
                        want,
                        img.render(target_vars),
                        d
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Data of a rank-2 projective bundle `ξ² + a·ξ + b = 0` over a base ring.
#[derive(Clone, Debug)]
pub struct BundleInfo {
    pub base: VarietyRing,
    pub fiber: String,
    pub linear_coeff: GradedPoly,
    pub constant_coeff: GradedPoly,
}

impl BundleInfo {
    /// Writes `p = c·ξ + d` with `c`, `d` in base variables.
    pub fn reduce(&self, p: &GradedPoly) -> (GradedPoly, GradedPoly) {
        let top = p
            .terms()
            .map(|(m, _)| m.exponent(&self.fiber))
            .max()
            .unwrap_or(0);
        // powers[k] = (c_k, d_k) with ξ^k = c_k ξ + d_k
        let mut powers = vec![(GradedPoly::zero(), GradedPoly::one())];
        for k in 1..=top as usize {
            let (c, d) = &powers[k - 1];
            let next_c = d - &c.mul(&self.linear_coeff);
            let next_d = -&c.mul(&self.constant_coeff);
            powers.push((next_c, next_d));
        }
        let fiber_mono = Monomial::var(&self.fiber);
        let mut c_out = GradedPoly::zero();
        let mut d_out = GradedPoly::zero();
        for (m, coeff) in p.terms() {
            let k = m.exponent(&self.fiber);
            let mut base_part = m.clone();
            for _ in 0..k {
                base_part = base_part.divide(&fiber_mono).expect("exponent counted");
            }
            let beta = GradedPoly::monomial(base_part, coeff.clone());
            let (c, d) = &powers[k as usize];
            c_out = &c_out + &c.mul(&beta);
            d_out = &d_out + &d.mul(&beta);
        }
        (c_out, d_out)
    }

    /// Pushforward to the base: the `ξ`-coefficient after reduction.
    pub fn push_down(&self, p: &GradedPoly) -> GradedPoly {
        self.reduce(p).0
    }

    /// Validates `Σ = ξ + (base class of degree 1)`.
    pub fn check_section(&self, sigma: &GradedPoly, vars: &[VarSpec]) -> Result<()> {
        if sigma.homogeneous_degree(vars)? != Some(1)
            || sigma.coefficient(&Monomial::var(&self.fiber)) != BigInt::one()
        {
            return Err(ChowError::BadSection(format!(
                "{} is not of the form {} + (base divisor)",
                sigma.render(vars),
                self.fiber
            )));
        }
        Ok(())
    }
}

/// A blow-up `Bl_Z X` with exceptional divisor a rank-2 projective bundle
/// over `Z`.
#[derive(Clone, Debug)]
pub struct BlowupPresentation {
    pub ambient: VarietyRing,
    /// `i*` from the ambient to the center, in center variables.
    pub center_pullback: RingHom,
    pub exceptional: VarietyRing,
    /// The class `ζ` in the rule `j_*γ · j_*δ = −j_*(γδζ)`.
    pub zeta: GradedPoly,
}

impl BlowupPresentation {
    pub fn center(&self) -> &VarietyRing {
        &self
            .exceptional
            .bundle()
            .expect("exceptional ring is a bundle")
            .base
    }

    /// `π_E^* i^*(a)` as a polynomial on the exceptional divisor.
    fn restrict(&self, a: &GradedPoly) -> GradedPoly {
        self.center_pullback
            .apply(a)
            .expect("center pullback validated at construction")
    }
}

#[derive(Clone, Debug)]
pub enum Presentation {
    Socle(SoclePoly),
    Blowup(Box<BlowupPresentation>),
}

/// One graded piece `Num^d` as a lattice.
#[derive(Clone, Debug)]
pub struct GradedPiece {
    pub degree: u32,
    pub spanning: Vec<Class>,
    pub labels: Vec<String>,
    /// Rows: `spanning`; columns: spanning set in complementary degree.
    pub gram: IntMatrix,
    /// Row-style HNF basis of the row lattice of `gram`.
    pub basis: IntMatrix,
    /// `combos · gram = basis`; row `k` writes basis vector `k` over `spanning`.
    pub combos: IntMatrix,
    pub rank: usize,
}

impl GradedPiece {
    /// A representative class of lattice basis vector `k`.
    pub fn basis_class(&self, k: usize) -> Class {
        self.combos
            .row(k)
            .iter()
            .zip(&self.spanning)
            .filter(|(c, _)| !c.is_zero())
            .fold(Class::zero(), |acc, (c, s)| acc.add(&s.scale(c)))
    }

    /// Lattice coordinates of a pairing vector.
    pub fn coordinates_of_pairing(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        if self.rank == 0 {
            return v.iter().all(Zero::is_zero).then(Vec::new);
        }
        solve_in_row_basis(&self.basis, v)
    }
}

struct RingInner {
    name: String,
    dim: u32,
    vars: Vec<VarSpec>,
    presentation: Presentation,
    note: String,
    linear: bool,
    bundle: Option<BundleInfo>,
    pieces: Vec<OnceLock<GradedPiece>>,
}

/// Numerical Chow ring of a smooth projective variety. Cheap to clone;
/// graded pieces are computed once and cached.
#[derive(Clone)]
pub struct VarietyRing(Arc<RingInner>);

impl fmt::Debug for VarietyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VarietyRing")
            .field("name", &self.0.name)
            .field("dim", &self.0.dim)
            .field("vars", &self.0.vars)
            .finish()
    }
}

impl VarietyRing {
    fn build(
        name: String,
        dim: u32,
        vars: Vec<VarSpec>,
        presentation: Presentation,
        note: String,
        linear: bool,
        bundle: Option<BundleInfo>,
    ) -> Self {
        VarietyRing(Arc::new(RingInner {
            name,
            dim,
            vars,
            presentation,
            note,
            linear,
            bundle,
            pieces: (0..=dim).map(|_| OnceLock::new()).collect(),
        }))
    }

    /// Ring presented by a dual socle generator; `linear` marks varieties for
    /// which a Künneth formula holds against any factor.
    pub fn from_socle(
        name: impl Into<String>,
        vars: Vec<VarSpec>,
        socle: SoclePoly,
        linear: bool,
    ) -> Result<Self> {
        validate_vars(&vars)?;
        for n in socle.as_poly().variables() {
            if !vars.iter().any(|v| v.name == n) {
                return Err(GradedError::UnknownVariable(n).into());
            }
        }
        let dim = socle.top_degree();
        Ok(Self::build(
            name.into(),
            dim,
            vars,
            Presentation::Socle(socle),
            String::new(),
            linear,
            None,
        ))
    }

    /// Parses the socle text in inverse notation.
    pub fn parse_socle(
        name: impl Into<String>,
        vars: Vec<VarSpec>,
        dim: u32,
        socle_text: &str,
        linear: bool,
    ) -> Result<Self> {
        let socle = crate::gradedring::parse_socle(socle_text, &vars, dim)?;
        Self::from_socle(name, vars, socle, linear)
    }

    pub fn with_note(&self, note: impl Into<String>) -> VarietyRing {
        let inner = &self.0;
        Self::build(
            inner.name.clone(),
            inner.dim,
            inner.vars.clone(),
            inner.presentation.clone(),
            note.into(),
            inner.linear,
            inner.bundle.clone(),
        )
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn dim(&self) -> u32 {
        self.0.dim
    }

    /// Generators; for a blow-up, the ambient generators pulled back.
    pub fn vars(&self) -> &[VarSpec] {
        &self.0.vars
    }

    pub fn note(&self) -> &str {
        &self.0.note
    }

    pub fn is_linear(&self) -> bool {
        self.0.linear
    }

    pub fn presentation(&self) -> &Presentation {
        &self.0.presentation
    }

    pub fn socle(&self) -> Option<&SoclePoly> {
        match &self.0.presentation {
            Presentation::Socle(s) => Some(s),
            Presentation::Blowup(_) => None,
        }
    }

    pub fn blowup(&self) -> Option<&BlowupPresentation> {
        match &self.0.presentation {
            Presentation::Socle(_) => None,
            Presentation::Blowup(b) => Some(b),
        }
    }

    pub fn bundle(&self) -> Option<&BundleInfo> {
        self.0.bundle.as_ref()
    }

    fn require_socle(&self) -> Result<&SoclePoly> {
        self.socle().ok_or_else(|| {
            ChowError::Unsupported(format!("`{}` is not socle-presented", self.name()))
        })
    }

    /// Variables of the exceptional divisor, empty for socle rings.
    pub fn exceptional_vars(&self) -> &[VarSpec] {
        self.blowup().map_or(&[], |b| b.exceptional.vars())
    }

    pub fn parse(&self, text: &str) -> Result<Class> {
        Ok(Class::from_poly(parse_poly(text, self.vars())?))
    }

    pub fn parse_exceptional(&self, text: &str) -> Result<Class> {
        if self.blowup().is_none() {
            return Err(ChowError::Unsupported(format!(
                "`{}` has no exceptional divisor",
                self.name()
            )));
        }
        Ok(Class::exceptional(parse_poly(text, self.exceptional_vars())?))
    }

    /// The common degree of a class, `None` for zero.
    pub fn class_degree(&self, c: &Class) -> Result<Option<u32>> {
        let a = c.ambient.homogeneous_degree(self.vars())?;
        let g = if c.exceptional.is_zero() {
            None
        } else {
            match self.blowup() {
                None => return Err(ChowError::Inhomogeneous(self.name().into())),
                Some(b) => c
                    .exceptional
                    .homogeneous_degree(b.exceptional.vars())?
                    .map(|d| d + 1),
            }
        };
        match (a, g) {
            (Some(x), Some(y)) if x != y => Err(ChowError::Inhomogeneous(self.name().into())),
            (x, y) => Ok(x.or(y)),
        }
    }

    pub fn mul(&self, x: &Class, y: &Class) -> Class {
        match &self.0.presentation {
            Presentation::Socle(_) => Class::from_poly(x.ambient.mul(&y.ambient)),
            Presentation::Blowup(b) => {
                let ambient = x.ambient.mul(&y.ambient);
                let mut ex = GradedPoly::zero();
                if !y.exceptional.is_zero() {
                    ex = &ex + &b.restrict(&x.ambient).mul(&y.exceptional);
                }
                if !x.exceptional.is_zero() {
                    ex = &ex + &b.restrict(&y.ambient).mul(&x.exceptional);
                    if !y.exceptional.is_zero() {
                        ex = &ex - &x.exceptional.mul(&y.exceptional).mul(&b.zeta);
                    }
                }
                Class {
                    ambient,
                    exceptional: ex,
                }
            }
        }
    }

    /// Degree of the top-dimensional part of a class.
    pub fn degree_of(&self, c: &Class) -> BigInt {
        match &self.0.presentation {
            Presentation::Socle(s) => s.evaluate(&c.ambient),
            Presentation::Blowup(b) => {
                b.ambient.degree_of(&Class::from_poly(c.ambient.clone()))
                    + b.exceptional.degree_of(&Class::from_poly(c.exceptional.clone()))
            }
        }
    }

    /// `deg(x · y)`.
    pub fn pairing(&self, x: &Class, y: &Class) -> BigInt {
        self.degree_of(&self.mul(x, y))
    }

    fn spanning(&self, d: u32) -> (Vec<Class>, Vec<String>) {
        match &self.0.presentation {
            Presentation::Socle(_) => mono_basis(self.vars(), d)
                .into_iter()
                .map(|m| {
                    let label = m.render(self.vars(), false);
                    (Class::from_poly(GradedPoly::monomial(m, 1)), label)
                })
                .unzip(),
            Presentation::Blowup(b) => {
                let mut classes = Vec::new();
                let mut labels = Vec::new();
                for m in mono_basis(self.vars(), d) {
                    labels.push(format!("pi*({})", m.render(self.vars(), false)));
                    classes.push(Class::from_poly(GradedPoly::monomial(m, 1)));
                }
                if d >= 1 {
                    let ev = b.exceptional.vars();
                    for m in mono_basis(ev, d - 1) {
                        labels.push(format!("j*({})", m.render(ev, false)));
                        classes.push(Class::exceptional(GradedPoly::monomial(m, 1)));
                    }
                }
                (classes, labels)
            }
        }
    }

    fn check_degree(&self, d: i64) -> Result<u32> {
        if d < 0 || d > self.dim() as i64 {
            return Err(ChowError::DegreeOutOfRange {
                ring: self.name().into(),
                degree: d,
                dim: self.dim(),
            });
        }
        Ok(d as u32)
    }

    /// `Num^d` as the image lattice of the Gram matrix.
    pub fn graded_piece(&self, d: u32) -> Result<&GradedPiece> {
        let d = self.check_degree(d as i64)?;
        Ok(self.0.pieces[d as usize].get_or_init(|| {
            let (spanning, labels) = self.spanning(d);
            let (dual, _) = self.spanning(self.dim() - d);
            let mut gram = IntMatrix::zeros(spanning.len(), dual.len());
            for (i, x) in spanning.iter().enumerate() {
                for (j, y) in dual.iter().enumerate() {
                    gram.set(i, j, self.pairing(x, y));
                }
            }
            let (basis, combos) = row_lattice_basis(&gram);
            let rank = basis.rows();
            GradedPiece {
                degree: d,
                spanning,
                labels,
                gram,
                basis,
                combos,
                rank,
            }
        }))
    }

    pub fn rank(&self, d: u32) -> Result<usize> {
        Ok(self.graded_piece(d)?.rank)
    }

    /// Intersection numbers of a class of degree `d` against the spanning
    /// set in degree `dim - d`.
    pub fn pairing_vector(&self, c: &Class, d: u32) -> Result<Vec<BigInt>> {
        let d = self.check_degree(d as i64)?;
        let dual = &self.graded_piece(self.dim() - d)?.spanning;
        Ok(dual.iter().map(|y| self.pairing(c, y)).collect())
    }

    /// Coordinates of a homogeneous class in the lattice basis of its piece.
    pub fn coordinates(&self, c: &Class, d: u32) -> Result<Vec<BigInt>> {
        if let Some(cd) = self.class_degree(c)? {
            if cd != d {
                return Err(ChowError::Inhomogeneous(format!(
                    "{}: class of degree {} read in degree {}",
                    self.name(),
                    cd,
                    d
                )));
            }
        }
        let v = self.pairing_vector(c, d)?;
        self.graded_piece(d)?
            .coordinates_of_pairing(&v)
            .ok_or_else(|| ChowError::NotInLattice {
                ring: self.name().into(),
                degree: d,
            })
    }

    /// Text form; blow-up classes read `pi*(…) + j*(…)`.
    pub fn render(&self, c: &Class) -> String {
        match self.blowup() {
            None => c.ambient.render(self.vars()),
            Some(b) => {
                let mut parts = Vec::new();
                if !c.ambient.is_zero() {
                    parts.push(format!("pi*({})", c.ambient.render(self.vars())));
                }
                if !c.exceptional.is_zero() {
                    parts.push(format!("j*({})", c.exceptional.render(b.exceptional.vars())));
                }
                if parts.is_empty() {
                    "0".into()
                } else {
                    parts.join(" + ")
                }
            }
        }
    }

    /// Same ring up to the cache: name, generators and presentation data.
    pub fn same_as(&self, other: &VarietyRing) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        self.name() == other.name()
            && self.dim() == other.dim()
            && self.vars() == other.vars()
            && match (self.presentation(), other.presentation()) {
                (Presentation::Socle(a), Presentation::Socle(b)) => a == b,
                (Presentation::Blowup(a), Presentation::Blowup(b)) => {
                    a.ambient.same_as(&b.ambient)
                        && a.exceptional.same_as(&b.exceptional)
                        && a.center_pullback.images == b.center_pullback.images
                        && a.zeta == b.zeta
                }
                _ => false,
            }
    }

    /// Copy of a socle ring with generators renamed; bundle data follows.
    pub fn renamed(&self, name: impl Into<String>, map: &BTreeMap<String, String>) -> Result<Self> {
        let socle = self.require_socle()?;
        let vars = rename_vars(self.vars(), map);
        validate_vars(&vars)?;
        let socle = SoclePoly::new(socle.as_poly().rename(map), &vars, socle.top_degree())?;
        let bundle = match self.bundle() {
            None => None,
            Some(info) => Some(BundleInfo {
                base: info.base.renamed(format!("{}~", info.base.name()), map)?,
                fiber: map.get(&info.fiber).cloned().unwrap_or_else(|| info.fiber.clone()),
                linear_coeff: info.linear_coeff.rename(map),
                constant_coeff: info.constant_coeff.rename(map),
            }),
        };
        Ok(Self::build(
            name.into(),
            self.dim(),
            vars,
            Presentation::Socle(socle),
            format!("{} with renamed generators", self.name()),
            self.is_linear(),
            bundle,
        ))
    }
}

fn rename_vars(vars: &[VarSpec], map: &BTreeMap<String, String>) -> Vec<VarSpec> {
    vars.iter()
        .map(|v| VarSpec::new(map.get(&v.name).cloned().unwrap_or_else(|| v.name.clone()), v.degree))
        .collect()
}

/// Product ring with socle the product of socles. One factor must be linear
/// unless `force` is set. Generators of `w` that clash with `v` get a prime.
pub fn kunneth(name: &str, v: &VarietyRing, w: &VarietyRing, force: bool) -> Result<VarietyRing> {
    if !force && !v.is_linear() && !w.is_linear() {
        return Err(ChowError::NotLinear(format!("{} × {}", v.name(), w.name())));
    }
    let sv = v.require_socle()?;
    let sw = w.require_socle()?;
    let taken: BTreeSet<&str> = v.vars().iter().map(|x| x.name.as_str()).collect();
    let map: BTreeMap<String, String> = w
        .vars()
        .iter()
        .filter(|x| taken.contains(x.name.as_str()))
        .map(|x| {
            let mut n = format!("{}'", x.name);
            while taken.contains(n.as_str()) {
                n.push('\'');
            }
            (x.name.clone(), n)
        })
        .collect();
    let mut vars = v.vars().to_vec();
    vars.extend(rename_vars(w.vars(), &map));
    let socle = sv.product(&sw.rename(&map));
    let ring = VarietyRing::from_socle(name, vars, socle, v.is_linear() && w.is_linear())?;
    Ok(ring.with_note(format!("{} × {}", v.name(), w.name())))
}

/// Projective bundle of a rank-2 bundle over `base` with relation
/// `fiber² + a·fiber + b = 0`, given as a polynomial in base variables and
/// `fiber`.
pub fn proj_bundle_rank2(
    name: &str,
    base: &VarietyRing,
    fiber: &str,
    relation: &GradedPoly,
) -> Result<VarietyRing> {
    let base_socle = base.require_socle()?;
    let mut vars = base.vars().to_vec();
    vars.push(VarSpec::new(fiber, 1));
    validate_vars(&vars)?;
    if relation.homogeneous_degree(&vars)? != Some(2) {
        return Err(ChowError::BadRelation(format!(
            "{} is not homogeneous of degree 2",
            relation.render(&vars)
        )));
    }
    let fm = Monomial::var(fiber);
    let mut a = GradedPoly::zero();
    let mut b = GradedPoly::zero();
    for (m, c) in relation.terms() {
        match m.exponent(fiber) {
            0 => b.add_term(m.clone(), c.clone()),
            1 => a.add_term(m.divide(&fm).expect("exponent 1"), c.clone()),
            2 if c.is_one() => {}
            _ => {
                return Err(ChowError::BadRelation(format!(
                    "{} is not monic quadratic in {}",
                    relation.render(&vars),
                    fiber
                )))
            }
        }
    }
    if relation.coefficient(&fm.mul(&fm)) != BigInt::one() {
        return Err(ChowError::BadRelation(format!(
            "{} is not monic quadratic in {}",
            relation.render(&vars),
            fiber
        )));
    }
    let info = BundleInfo {
        base: base.clone(),
        fiber: fiber.to_string(),
        linear_coeff: a,
        constant_coeff: b,
    };
    let dim = base.dim() + 1;
    let mut socle = GradedPoly::zero();
    for m in mono_basis(&vars, dim) {
        let value = base_socle.evaluate(&info.push_down(&GradedPoly::monomial(m.clone(), 1)));
        socle.add_term(m, value);
    }
    let socle = SoclePoly::new(socle, &vars, dim)?;
    let note = format!(
        "P^1-bundle over {} with {}",
        base.name(),
        relation.render(&vars)
    );
    Ok(VarietyRing::build(
        name.into(),
        dim,
        vars,
        Presentation::Socle(socle),
        note,
        false,
        Some(info),
    ))
}

/// Blow-up of a socle-presented `ambient` along a center whose projectivized
/// normal bundle is `exceptional`.
pub fn blowup(
    name: &str,
    ambient: &VarietyRing,
    center_pullback: RingHom,
    exceptional: &VarietyRing,
    zeta: GradedPoly,
) -> Result<VarietyRing> {
    ambient.require_socle()?;
    let info = exceptional.bundle().ok_or_else(|| {
        ChowError::Unsupported(format!("`{}` is not a projective bundle", exceptional.name()))
    })?;
    let center = &info.base;
    if center.dim() + 2 != ambient.dim() {
        return Err(ChowError::Inconsistent(format!(
            "center `{}` must have codimension 2 in `{}`",
            center.name(),
            ambient.name()
        )));
    }
    for v in ambient.vars() {
        if center_pullback.image(&v.name).is_none() {
            return Err(ChowError::MissingImage {
                map: center_pullback.name.clone(),
                var: v.name.clone(),
            });
        }
    }
    center_pullback.check_degrees(ambient.vars(), center.vars())?;
    if zeta.homogeneous_degree(exceptional.vars())? != Some(1) {
        return Err(ChowError::Inconsistent("zeta must be a divisor class".into()));
    }
    let pres = BlowupPresentation {
        ambient: ambient.clone(),
        center_pullback,
        exceptional: exceptional.clone(),
        zeta,
    };
    let note = format!("blow-up of {} along {}", ambient.name(), center.name());
    Ok(VarietyRing::build(
        name.into(),
        ambient.dim(),
        ambient.vars().to_vec(),
        Presentation::Blowup(Box::new(pres)),
        note,
        false,
        None,
    ))
}

/// Identification of a renamed exceptional divisor with an existing bundle
/// ring: images of the renamed generators in `target`.
#[derive(Clone, Debug)]
pub struct ExceptionalIdentification {
    pub target: VarietyRing,
    pub images: BTreeMap<String, GradedPoly>,
}

/// Result of exchanging the two factors of a product-built ring.
#[derive(Clone, Debug)]
pub struct Swapped {
    pub ring: VarietyRing,
    ambient_map: BTreeMap<String, String>,
    exceptional_map: Option<RingHom>,
}

impl Swapped {
    /// Transports a class of the original ring to the swapped ring.
    pub fn transport(&self, c: &Class) -> Result<Class> {
        let ambient = c.ambient.rename(&self.ambient_map);
        let exceptional = match &self.exceptional_map {
            None => c.exceptional.rename(&self.ambient_map),
            Some(h) => h.apply(&c.exceptional)?,
        };
        Ok(Class {
            ambient,
            exceptional,
        })
    }
}

fn involution(pairs: &[(String, String)]) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (a, b) in pairs {
        for (x, y) in [(a, b), (b, a)] {
            if map.insert(x.clone(), y.clone()).is_some() {
                return Err(ChowError::Inconsistent(format!("`{x}` swapped twice")));
            }
        }
    }
    Ok(map)
}

/// Checks a generator map between two socle rings preserves all top
/// intersection numbers.
pub fn check_isometry(from: &VarietyRing, to: &VarietyRing, map: &RingHom) -> Result<()> {
    if from.dim() != to.dim() {
        return Err(ChowError::Inconsistent("dimensions differ".into()));
    }
    for m in mono_basis(from.vars(), from.dim()) {
        let lhs = from.degree_of(&Class::from_poly(GradedPoly::monomial(m.clone(), 1)));
        let rhs = to.degree_of(&Class::from_poly(map.apply(&GradedPoly::monomial(m.clone(), 1))?));
        if lhs != rhs {
            return Err(ChowError::Inconsistent(format!(
                "`{}` does not preserve deg({}): {} vs {}",
                map.name,
                m.render(from.vars(), false),
                lhs,
                rhs
            )));
        }
    }
    Ok(())
}

/// Exchanges the factors of a product-built ring by the involution `pairs`.
/// For blow-ups, the renamed exceptional divisor is identified with an
/// existing bundle ring through `ident`, which must fix base generators.
pub fn swap_factors(
    name: &str,
    ring: &VarietyRing,
    pairs: &[(String, String)],
    ident: Option<&ExceptionalIdentification>,
) -> Result<Swapped> {
    let map = involution(pairs)?;
    match ring.presentation() {
        Presentation::Socle(_) => Ok(Swapped {
            ring: ring.renamed(name, &map)?,
            ambient_map: map,
            exceptional_map: None,
        }),
        Presentation::Blowup(b) => {
            let ambient = b
                .ambient
                .renamed(format!("{}~", b.ambient.name()), &map)?;
            let renamed_ex = b
                .exceptional
                .renamed(format!("{}~", b.exceptional.name()), &map)?;
            let images: BTreeMap<String, GradedPoly> = b
                .center_pullback
                .images
                .iter()
                .map(|(k, v)| (map.get(k).cloned().unwrap_or_else(|| k.clone()), v.rename(&map)))
                .collect();
            let (exceptional, ex_hom) = match ident {
                None => (renamed_ex.clone(), None),
                Some(id) => {
                    let target_info = id.target.bundle().ok_or_else(|| {
                        ChowError::Unsupported(format!("`{}` is not a bundle", id.target.name()))
                    })?;
                    let mut hom_images = id.images.clone();
                    for v in renamed_ex.vars() {
                        hom_images
                            .entry(v.name.clone())
                            .or_insert_with(|| GradedPoly::var(&v.name));
                    }
                    for v in target_info.base.vars() {
                        if hom_images.get(&v.name) != Some(&GradedPoly::var(&v.name)) {
                            return Err(ChowError::Inconsistent(format!(
                                "identification must fix base generator `{}`",
                                v.name
                            )));
                        }
                    }
                    let hom = RingHom::new(format!("{}~ -> {}", b.exceptional.name(), id.target.name()), hom_images);
                    check_isometry(&renamed_ex, &id.target, &hom)?;
                    (id.target.clone(), Some(hom))
                }
            };
            let zeta_renamed = b.zeta.rename(&map);
            let (zeta, transport_hom) = match &ex_hom {
                None => (zeta_renamed, None),
                Some(h) => {
                    let composite = RingHom::new(
                        h.name.clone(),
                        b.exceptional
                            .vars()
                            .iter()
                            .map(|v| {
                                let renamed = GradedPoly::var(map.get(&v.name).unwrap_or(&v.name));
                                Ok((v.name.clone(), h.apply(&renamed)?))
                            })
                            .collect::<Result<_>>()?,
                    );
                    (h.apply(&zeta_renamed)?, Some(composite))
                }
            };
            let center_pullback = RingHom::new(format!("{}~", b.center_pullback.name), images);
            let swapped = blowup(name, &ambient, center_pullback, &exceptional, zeta)?;
            let transport_hom = transport_hom.unwrap_or_else(|| {
                RingHom::new(
                    "rename",
                    b.exceptional
                        .vars()
                        .iter()
                        .map(|v| {
                            (
                                v.name.clone(),
                                GradedPoly::var(map.get(&v.name).unwrap_or(&v.name)),
                            )
                        })
                        .collect(),
                )
            });
            Ok(Swapped {
                ring: swapped,
                ambient_map: map,
                exceptional_map: Some(transport_hom),
            })
        }
    }
}

/// Module generators of the source over the pullback image, with their
/// pushforwards.
#[derive(Clone, Debug)]
pub struct PushforwardData {
    pub generators: Vec<(GradedPoly, GradedPoly)>,
}

impl PushforwardData {
    pub fn parse(pairs: &[(&str, &str)], source_vars: &[VarSpec], target_vars: &[VarSpec]) -> Result<Self> {
        let generators = pairs
            .iter()
            .map(|(g, img)| Ok((parse_poly(g, source_vars)?, parse_poly(img, target_vars)?)))
            .collect::<Result<_>>()?;
        Ok(PushforwardData { generators })
    }
}

#[derive(Clone, Debug)]
pub enum InclusionKind {
    /// Map of socle rings given by generator pullbacks and pushforwards of
    /// module generators.
    Socle {
        pullback: RingHom,
        push: PushforwardData,
    },
    /// Section of a bundle ring cut out by the divisor `sigma`.
    Section { sigma: GradedPoly },
    /// Exceptional divisor of a blow-up.
    Exceptional,
    /// Strict transform of a divisor `Y` of the ambient that contains the
    /// center as a divisor. `ambient` is `Y → X`, `center` is `Z → Y`, and
    /// `sigma` the section of normal directions inside `Y`.
    StrictTransform {
        ambient: Arc<Inclusion>,
        center: Arc<Inclusion>,
        sigma: GradedPoly,
    },
}

struct PushSolver {
    candidates: Vec<GradedPoly>,
    matrix: IntMatrix,
}

/// Closed embedding `source → target` with pullback and pushforward.
pub struct Inclusion {
    name: String,
    source: VarietyRing,
    target: VarietyRing,
    kind: InclusionKind,
    push_cache: Vec<OnceLock<std::result::Result<PushSolver, ChowError>>>,
}

impl fmt::Debug for Inclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Inclusion")
            .field("name", &self.name)
            .field("source", &self.source.name())
            .field("target", &self.target.name())
            .finish()
    }
}

impl Inclusion {
    fn build(name: String, source: VarietyRing, target: VarietyRing, kind: InclusionKind) -> Self {
        let n = source.dim() as usize + 1;
        Inclusion {
            name,
            source,
            target,
            kind,
            push_cache: (0..n).map(|_| OnceLock::new()).collect(),
        }
    }

    /// Socle-ring map. The pullback may omit generators whose images are
    /// unknown; they can be filled in with [`Inclusion::with_pullback_image`].
    pub fn socle(
        name: &str,
        source: &VarietyRing,
        target: &VarietyRing,
        pullback: RingHom,
        push: PushforwardData,
    ) -> Result<Self> {
        source.require_socle()?;
        target.require_socle()?;
        pullback.check_degrees(target.vars(), source.vars())?;
        let codim = target.dim() as i64 - source.dim() as i64;
        if codim < 0 {
            return Err(ChowError::Inconsistent(format!("`{name}` increases dimension")));
        }
        for (g, img) in &push.generators {
            let dg = g.homogeneous_degree(source.vars())?;
            let di = img.homogeneous_degree(target.vars())?;
            if let (Some(a), Some(b)) = (dg, di) {
                if b as i64 != a as i64 + codim {
                    return Err(ChowError::Inconsistent(format!(
                        "`{}`: generator {} of degree {} pushes to degree {}",
                        name,
                        g.render(source.vars()),
                        a,
                        b
                    )));
                }
            }
        }
        Ok(Self::build(
            name.into(),
            source.clone(),
            target.clone(),
            InclusionKind::Socle { pullback, push },
        ))
    }

    /// Identity map of a socle ring.
    pub fn identity(ring: &VarietyRing) -> Result<Self> {
        Self::socle(
            &format!("id_{}", ring.name()),
            ring,
            ring,
            RingHom::identity_on("id", ring.vars()),
            PushforwardData {
                generators: vec![(GradedPoly::one(), GradedPoly::one())],
            },
        )
    }

    /// Section of `bundle` over its base, cut out by `sigma`.
    pub fn section(name: &str, bundle: &VarietyRing, sigma: GradedPoly) -> Result<Self> {
        let info = bundle.bundle().ok_or_else(|| {
            ChowError::Unsupported(format!("`{}` is not a bundle", bundle.name()))
        })?;
        info.check_section(&sigma, bundle.vars())?;
        Ok(Self::build(
            name.into(),
            info.base.clone(),
            bundle.clone(),
            InclusionKind::Section { sigma },
        ))
    }

    pub fn exceptional(name: &str, blown_up: &VarietyRing) -> Result<Self> {
        let b = blown_up.blowup().ok_or_else(|| {
            ChowError::Unsupported(format!("`{}` is not a blow-up", blown_up.name()))
        })?;
        Ok(Self::build(
            name.into(),
            b.exceptional.clone(),
            blown_up.clone(),
            InclusionKind::Exceptional,
        ))
    }

    pub fn strict_transform(
        name: &str,
        blown_up: &VarietyRing,
        ambient: Arc<Inclusion>,
        center: Arc<Inclusion>,
        sigma: GradedPoly,
    ) -> Result<Self> {
        let b = blown_up.blowup().ok_or_else(|| {
            ChowError::Unsupported(format!("`{}` is not a blow-up", blown_up.name()))
        })?;
        let check = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(ChowError::Inconsistent(format!("`{name}`: {what}")))
            }
        };
        check(ambient.target.same_as(&b.ambient), "ambient map must land in the blown-up variety")?;
        check(center.target.same_as(&ambient.source), "center map must land in the strict transform")?;
        check(
            center.source.vars() == b.center().vars() && center.source.socle() == b.center().socle(),
            "center map must start at the blow-up center",
        )?;
        check(ambient.source.dim() + 1 == ambient.target.dim(), "strict transform must be a divisor")?;
        b.exceptional.bundle().unwrap().check_section(&sigma, b.exceptional.vars())?;
        Ok(Self::build(
            name.into(),
            ambient.source.clone(),
            blown_up.clone(),
            InclusionKind::StrictTransform {
                ambient,
                center,
                sigma,
            },
        ))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &VarietyRing {
        &self.source
    }

    pub fn target(&self) -> &VarietyRing {
        &self.target
    }

    pub fn kind(&self) -> &InclusionKind {
        &self.kind
    }

    pub fn codim(&self) -> u32 {
        self.target.dim() - self.source.dim()
    }

    /// Pullback ring map for socle-kind maps.
    pub fn ring_hom(&self) -> Option<&RingHom> {
        match &self.kind {
            InclusionKind::Socle { pullback, .. } => Some(pullback),
            _ => None,
        }
    }

    /// Same map with one more generator pullback.
    pub fn with_pullback_image(&self, var: &str, image: GradedPoly) -> Result<Self> {
        match &self.kind {
            InclusionKind::Socle { pullback, push } => Self::socle(
                &self.name,
                &self.source,
                &self.target,
                pullback.with_image(var, image),
                push.clone(),
            ),
            _ => Err(ChowError::Unsupported(format!(
                "`{}` has no generator pullback table",
                self.name
            ))),
        }
    }

    pub fn pull(&self, x: &Class) -> Result<Class> {
        match &self.kind {
            InclusionKind::Socle { pullback, .. } => {
                Ok(Class::from_poly(pullback.apply(&x.ambient)?))
            }
            InclusionKind::Section { sigma } => {
                let info = self.target.bundle().expect("section of a bundle");
                Ok(Class::from_poly(info.push_down(&x.ambient.mul(sigma))))
            }
            InclusionKind::Exceptional => {
                let b = self.target.blowup().expect("exceptional of a blow-up");
                let r = b.restrict(&x.ambient);
                Ok(Class::from_poly(&r - &x.exceptional.mul(&b.zeta)))
            }
            InclusionKind::StrictTransform {
                ambient,
                center,
                sigma,
            } => {
                let b = self.target.blowup().expect("strict transform in a blow-up");
                let info = b.exceptional.bundle().expect("bundle");
                let restricted = ambient.pull(&Class::from_poly(x.ambient.clone()))?;
                let along_section = Class::from_poly(info.push_down(&x.exceptional.mul(sigma)));
                Ok(restricted.add(&center.push(&along_section)?))
            }
        }
    }

    pub fn push(&self, y: &Class) -> Result<Class> {
        match &self.kind {
            InclusionKind::Socle { .. } => self.push_socle(y),
            InclusionKind::Section { sigma } => Ok(Class::from_poly(y.ambient.mul(sigma))),
            InclusionKind::Exceptional => Ok(Class::exceptional(y.ambient.clone())),
            InclusionKind::StrictTransform { ambient, center, .. } => {
                let pushed = ambient.push(y)?;
                let restricted = center.pull(y)?;
                Ok(Class {
                    ambient: pushed.ambient,
                    exceptional: -&restricted.ambient,
                })
            }
        }
    }

    fn push_solver(&self, d: u32) -> Result<&PushSolver> {
        let (pullback, push) = match &self.kind {
            InclusionKind::Socle { pullback, push } => (pullback, push),
            _ => unreachable!("push solver only for socle maps"),
        };
        let slot = self
            .push_cache
            .get(d as usize)
            .ok_or(ChowError::DegreeOutOfRange {
                ring: self.source.name().into(),
                degree: d as i64,
                dim: self.source.dim(),
            })?;
        slot.get_or_init(|| {
            let src = &self.source;
            let mut candidates = Vec::new();
            let mut columns = Vec::new();
            for (g, img) in &push.generators {
                let Some(dg) = g.homogeneous_degree(src.vars())? else {
                    continue;
                };
                if dg > d {
                    continue;
                }
                for m in mono_basis(self.target.vars(), d - dg) {
                    if !pullback.has_image(&m) {
                        continue;
                    }
                    let mono = GradedPoly::monomial(m, 1);
                    let pulled = pullback.apply(&mono)?.mul(g);
                    columns.push(src.pairing_vector(&Class::from_poly(pulled), d)?);
                    candidates.push(mono.mul(img));
                }
            }
            let rows = src.graded_piece(src.dim() - d)?.spanning.len();
            let matrix = IntMatrix::from_columns(columns, rows)?;
            Ok(PushSolver { candidates, matrix })
        })
        .as_ref()
        .map_err(Clone::clone)
    }

    fn push_socle(&self, y: &Class) -> Result<Class> {
        let Some(d) = self.source.class_degree(y)? else {
            return Ok(Class::zero());
        };
        let solver = self.push_solver(d)?;
        let v = self.source.pairing_vector(y, d)?;
        let not_expressible = || ChowError::NotExpressible {
            map: self.name.clone(),
            class: self.source.render(y),
        };
        if solver.candidates.is_empty() {
            return if v.iter().all(Zero::is_zero) {
                Ok(Class::zero())
            } else {
                Err(not_expressible())
            };
        }
        let sol = solve_integer(&solver.matrix, &v)?.ok_or_else(not_expressible)?;
        let mut out = GradedPoly::zero();
        for (c, cand) in sol.x.iter().zip(&solver.candidates) {
            if !c.is_zero() {
                out = &out + &cand.scale(c);
            }
        }
        Ok(Class::from_poly(out))
    }

    /// `Num^d(target) → Num^d(source)` in lattice coordinates (columns are
    /// images of target basis vectors).
    pub fn pullback_matrix(&self, d: u32) -> Result<IntMatrix> {
        let tp = self.target.graded_piece(d)?;
        let sp = self.source.graded_piece(d)?;
        let cols = (0..tp.rank)
            .map(|k| self.source.coordinates(&self.pull(&tp.basis_class(k))?, d))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntMatrix::from_columns(cols, sp.rank)?)
    }

    /// `Num^d(source) → Num^{d+codim}(target)` in lattice coordinates.
    pub fn pushforward_matrix(&self, d: u32) -> Result<IntMatrix> {
        let sp = self.source.graded_piece(d)?;
        let td = d + self.codim();
        let tp = self.target.graded_piece(td)?;
        let cols = (0..sp.rank)
            .map(|k| self.target.coordinates(&self.push(&sp.basis_class(k))?, td))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntMatrix::from_columns(cols, tp.rank)?)
    }

    /// Checks `deg_X(x · push(y)) = deg_Y(pull(x) · y)` for all spanning
    /// classes `y` of degree `d` on the source and complementary `x`.
    pub fn check_projection_formula(&self, d: u32) -> Result<Vec<ProjectionViolation>> {
        let src = &self.source;
        let tgt = &self.target;
        let ys = &src.graded_piece(d)?.spanning;
        let xd = src.dim().checked_sub(d).ok_or(ChowError::DegreeOutOfRange {
            ring: src.name().into(),
            degree: d as i64,
            dim: src.dim(),
        })?;
        let xs = &tgt.graded_piece(xd)?.spanning;
        let pushed: Vec<Class> = ys.iter().map(|y| self.push(y)).collect::<Result<_>>()?;
        let pulled: Vec<Class> = xs.iter().map(|x| self.pull(x)).collect::<Result<_>>()?;
        let mut out = Vec::new();
        for (y, py) in ys.iter().zip(&pushed) {
            for (x, px) in xs.iter().zip(&pulled) {
                let lhs = tgt.pairing(x, py);
                let rhs = src.pairing(px, y);
                if lhs != rhs {
                    out.push(ProjectionViolation {
                        target_class: tgt.render(x),
                        source_class: src.render(y),
                        via_push: lhs,
                        via_pull: rhs,
                    });
                }
            }
        }
        Ok(out)
    }

    /// Checks the pullback kills numerically trivial classes in degree `d`.
    pub fn check_pullback_well_defined(&self, d: u32) -> Result<bool> {
        let tp = self.target.graded_piece(d)?;
        let kernel = crate::exactlin::kernel_saturated(&tp.gram.transpose());
        for col in kernel.column_vectors() {
            let c = col
                .iter()
                .zip(&tp.spanning)
                .fold(Class::zero(), |acc, (k, s)| acc.add(&s.scale(k)));
            let v = self.source.pairing_vector(&self.pull(&c)?, d)?;
            if v.iter().any(|x| !x.is_zero()) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// One failure of the projection formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionViolation {
    pub target_class: String,
    pub source_class: String,
    pub via_push: BigInt,
    pub via_pull: BigInt,
}

/// Outcome of [`solve_unknown_pullback`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PullbackSolution {
    pub coefficients: Vec<BigInt>,
    pub image: GradedPoly,
}

/// Determines the pullback of generator `var` of the target as an integer
/// combination of `ansatz`, from the projection formula
/// `deg(var · push(y)) = deg(pull(var) · y)` over all spanning `y`.
pub fn solve_unknown_pullback(
    incl: &Inclusion,
    var: &str,
    ansatz: &[GradedPoly],
) -> Result<PullbackSolution> {
    let src = incl.source();
    let tgt = incl.target();
    let x = Class::from_poly(GradedPoly::var(var));
    let d = tgt
        .class_degree(&x)?
        .ok_or_else(|| ChowError::Inconsistent("zero class".into()))?;
    for a in ansatz {
        if a.homogeneous_degree(src.vars())?.is_some_and(|e| e != d) {
            return Err(ChowError::Inconsistent(format!(
                "ansatz term {} has the wrong degree",
                a.render(src.vars())
            )));
        }
    }
    let yd = src.dim() - d;
    let ys = &src.graded_piece(yd)?.spanning;
    let mut a = IntMatrix::zeros(ys.len(), ansatz.len());
    let mut b = Vec::with_capacity(ys.len());
    for (i, y) in ys.iter().enumerate() {
        b.push(tgt.pairing(&x, &incl.push(y)?));
        for (j, t) in ansatz.iter().enumerate() {
            a.set(i, j, src.pairing(&Class::from_poly(t.clone()), y));
        }
    }
    let what = format!("pullback of {} along `{}`", var, incl.name());
    let sol = solve_integer(&a, &b)?.ok_or_else(|| ChowError::NoSolution(what.clone()))?;
    if !sol.unique {
        return Err(ChowError::NonUnique(what));
    }
    let image = sol
        .x
        .iter()
        .zip(ansatz)
        .fold(GradedPoly::zero(), |acc, (c, t)| &acc + &t.scale(c));
    Ok(PullbackSolution {
        coefficients: sol.x,
        image,
    })
}

/// Socle of a product `V × V` enlarged by a divisor class `D` supported over
/// a diagonal: monomials `m · D^c` are evaluated by the product socle for
/// `c = 0`, on the divisor's own ring through `divisor_pullback` for
/// `c = 1`, and by `self_intersection` for `D²` when `2·deg D = dim`.
pub fn socle_with_divisor(
    vars: &[VarSpec],
    product: &SoclePoly,
    divisor: &str,
    divisor_ring: &VarietyRing,
    divisor_pullback: &RingHom,
    self_intersection: &BigInt,
) -> Result<SoclePoly> {
    let dim = product.top_degree();
    let dmono = Monomial::var(divisor);
    let mut out = GradedPoly::zero();
    for m in mono_basis(vars, dim) {
        let value = match m.exponent(divisor) {
            0 => product.value(&m),
            1 => {
                let rest = m.divide(&dmono).expect("exponent 1");
                let pulled = divisor_pullback.apply(&GradedPoly::monomial(rest, 1))?;
                divisor_ring.degree_of(&Class::from_poly(pulled))
            }
            2 => {
                let rest = m.divide(&dmono.mul(&dmono)).expect("exponent 2");
                if !rest.is_one() {
                    return Err(ChowError::Unsupported(format!(
                        "no data for {}",
                        m.render(vars, false)
                    )));
                }
                self_intersection.clone()
            }
            _ => {
                return Err(ChowError::Unsupported(format!(
                    "no data for {}",
                    m.render(vars, false)
                )))
            }
        };
        out.add_term(m, value);
    }
    Ok(SoclePoly::new(out, vars, dim)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradedring::parse_socle;

    fn v(specs: &[(&str, u32)]) -> Vec<VarSpec> {
        specs.iter().map(|(n, d)| VarSpec::new(*n, *d)).collect()
    }

    fn s_ring(a: &str, b: &str) -> VarietyRing {
        VarietyRing::parse_socle("S", v(&[(a, 1), (b, 1)]), 2, &format!("{a}^-1*{b}^-1"), true)
            .unwrap()
    }

    fn lc() -> VarietyRing {
        VarietyRing::parse_socle(
            "LC",
            v(&[("H", 1), ("E", 1), ("F", 2)]),
            3,
            "H^-3 - 6*H^-1*E^-2 - 30*E^-3 - E^-1*F^-1",
            false,
        )
        .unwrap()
    }

    fn q() -> VarietyRing {
        VarietyRing::parse_socle("Q", v(&[("S", 1), ("L", 2)]), 3, "2*S^-3 + S^-1*L^-1", true)
            .unwrap()
    }

    fn ss() -> VarietyRing {
        kunneth("SS", &s_ring("r1", "r2"), &s_ring("R1", "R2"), false).unwrap()
    }

    fn n_bundle() -> VarietyRing {
        let ss = ss();
        let mut vars = ss.vars().to_vec();
        vars.push(VarSpec::new("xi", 1));
        let rel = parse_poly("(xi - r1 - r2)*(xi + R1 + R2)", &vars).unwrap();
        proj_bundle_rank2("N", &ss, "xi", &rel).unwrap()
    }

    fn class(r: &VarietyRing, t: &str) -> Class {
        r.parse(t).unwrap()
    }

    #[test]
    fn socle_ring_pieces() {
        let lc = lc();
        assert_eq!(lc.rank(1).unwrap(), 2);
        assert_eq!(lc.rank(2).unwrap(), 2);
        assert_eq!(lc.rank(0).unwrap(), 1);
        assert_eq!(s_ring("R1", "R2").rank(2).unwrap(), 1);
        assert!(lc.graded_piece(4).is_err());
    }

    #[test]
    fn kunneth_products() {
        let ss = ss();
        assert_eq!(ss.socle().unwrap().render(ss.vars()), "r1^-1*r2^-1*R1^-1*R2^-1");
        let qq = kunneth("QQ", &q(), &q(), false).unwrap();
        assert_eq!(qq.vars()[2].name, "S'");
        let lcq = kunneth("LCxQ", &lc(), &q(), false).unwrap();
        assert_eq!(lcq.dim(), 6);
        assert!(matches!(
            kunneth("LCxLC", &lc(), &lc(), false),
            Err(ChowError::NotLinear(_))
        ));
        assert!(kunneth("LCxLC", &lc(), &lc(), true).is_ok());
    }

    #[test]
    fn bundle_socle() {
        let n = n_bundle();
        assert_eq!(n.degree_of(&class(&n, "xi*r1*r2*R1*R2")), BigInt::one());
        // ξ² = ξ(r1+r2−R1−R2) + (r1+r2)(R1+R2)
        let lhs = n.degree_of(&class(&n, "xi^2*r2*R1*R2"));
        let rhs = n.degree_of(&class(&n, "(xi*(r1+r2-R1-R2) + (r1+r2)*(R1+R2))*r2*R1*R2"));
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, BigInt::one());
        assert_eq!(n.rank(2).unwrap(), 10);
        assert_eq!(n.rank(3).unwrap(), 10);
        let s = s_ring("r1", "r2");
        let mut vars = s.vars().to_vec();
        vars.push(VarSpec::new("xi", 1));
        let trivial = proj_bundle_rank2("P", &s, "xi", &parse_poly("xi^2", &vars).unwrap()).unwrap();
        assert_eq!(
            trivial.socle().unwrap(),
            &parse_socle("xi^-1*r1^-1*r2^-1", &vars, 3).unwrap()
        );
        assert!(proj_bundle_rank2("P", &s, "xi", &parse_poly("2*xi^2", &vars).unwrap()).is_err());
    }

    #[test]
    fn restriction_tables_of_s() {
        let s = s_ring("R1", "R2");
        let incl = Inclusion::socle(
            "S->LC",
            &s,
            &lc(),
            RingHom::parse("S->LC", &[("H", "R1+R2"), ("E", "3*(R1+R2)"), ("F", "R1*R2")], s.vars())
                .unwrap(),
            PushforwardData::parse(
                &[("1", "2*H-E"), ("R1", "H^2-3*F"), ("R2", "H^2-3*F"), ("R1*R2", "H^3")],
                s.vars(),
                lc().vars(),
            )
            .unwrap(),
        )
        .unwrap();
        for d in 0..=2 {
            assert!(incl.check_projection_formula(d).unwrap().is_empty());
        }
        let pushed = incl.push(&class(&s, "R1")).unwrap();
        assert_eq!(
            lc().pairing_vector(&pushed, 2).unwrap(),
            lc().pairing_vector(&class(&lc(), "H^2-3*F"), 2).unwrap()
        );
        assert!(incl.check_pullback_well_defined(1).unwrap());
        let id = Inclusion::identity(&lc()).unwrap();
        assert_eq!(id.pullback_matrix(1).unwrap(), IntMatrix::identity(2));
        assert_eq!(id.pushforward_matrix(2).unwrap(), IntMatrix::identity(2));
    }

    #[test]
    fn sections_of_n() {
        let n = n_bundle();
        let sigma = parse_poly("xi + R1 + R2", n.vars()).unwrap();
        let sec = Inclusion::section("sec", &n, sigma.clone()).unwrap();
        assert_eq!(sec.push(&Class::from_poly(GradedPoly::one())).unwrap().ambient, sigma);
        let base = sec.source().clone();
        for m in ["r1", "R2", "r1*R1", "r1*r2*R1"] {
            let z = class(&base, m);
            assert_eq!(sec.pull(&z).unwrap(), z);
        }
        for d in 0..=4 {
            assert!(sec.check_projection_formula(d).unwrap().is_empty());
        }
        assert!(Inclusion::section("bad", &n, parse_poly("2*xi", n.vars()).unwrap()).is_err());
    }

    fn y2() -> VarietyRing {
        let lc_low = lc()
            .renamed(
                "LC",
                &[("H", "h"), ("E", "e"), ("F", "f")]
                    .iter()
                    .map(|(a, b)| (a.to_string(), b.to_string()))
                    .collect(),
            )
            .unwrap();
        let lcq = kunneth("LCxQ", &lc_low, &q(), false).unwrap();
        let n = n_bundle();
        let pull = RingHom::parse(
            "SS->LCxQ",
            &[
                ("h", "r1+r2"),
                ("e", "3*(r1+r2)"),
                ("f", "r1*r2"),
                ("S", "R1+R2"),
                ("L", "R1*R2"),
            ],
            ss().vars(),
        )
        .unwrap();
        blowup("Y2", &lcq, pull, &n, GradedPoly::var("xi")).unwrap()
    }

    #[test]
    fn blowup_rules() {
        let y2 = y2();
        let n = n_bundle();
        let amb = class(&y2, "h^3*S*L");
        assert_eq!(y2.degree_of(&amb), BigInt::one());
        let g = n.parse("r1*r2").unwrap().ambient;
        let dl = n.parse("R1*R2").unwrap().ambient;
        let prod = y2.mul(&Class::exceptional(g.clone()), &Class::exceptional(dl.clone()));
        let direct = -n.degree_of(&Class::from_poly(g.mul(&dl).mul(&GradedPoly::var("xi"))));
        assert_eq!(y2.degree_of(&prod), direct);
        for d in 0..=6 {
            assert_eq!(y2.rank(d).unwrap(), y2.rank(6 - d).unwrap());
        }
        let ex = Inclusion::exceptional("N->Y2", &y2).unwrap();
        for d in 0..=5 {
            assert!(ex.check_projection_formula(d).unwrap().is_empty());
        }
    }

    #[test]
    fn swap_double_is_identity() {
        let y2 = y2();
        let pairs: Vec<(String, String)> = [("h", "H"), ("e", "E"), ("f", "F"), ("S", "s"), ("L", "l"), ("r1", "R1"), ("r2", "R2")]
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        let n = y2.blowup().unwrap().exceptional.clone();
        let ident = ExceptionalIdentification {
            target: n.clone(),
            images: [("xi".to_string(), parse_poly("xi - r1 - r2 + R1 + R2", n.vars()).unwrap())]
                .into_iter()
                .collect(),
        };
        let y3 = swap_factors("Y3", &y2, &pairs, Some(&ident)).unwrap();
        assert_eq!(
            y3.ring.blowup().unwrap().zeta,
            parse_poly("xi - r1 - r2 + R1 + R2", n.vars()).unwrap()
        );
        let back = swap_factors("Y2", &y3.ring, &pairs, Some(&ident)).unwrap();
        let b = back.ring.blowup().unwrap();
        let a = y2.blowup().unwrap();
        assert_eq!(b.zeta, a.zeta);
        assert_eq!(b.center_pullback.images, a.center_pullback.images);
        assert_eq!(b.ambient.socle(), a.ambient.socle());
        for d in 0..=6 {
            assert_eq!(y3.ring.rank(d).unwrap(), y2.rank(d).unwrap());
        }
        let c = Class {
            ambient: GradedPoly::var("h").pow(3),
            exceptional: parse_poly("xi*r1", n.vars()).unwrap(),
        };
        let t = y3.transport(&c).unwrap();
        assert_eq!(y2.degree_of(&y2.mul(&c, &c)), y3.ring.degree_of(&y3.ring.mul(&t, &t)));
    }

    #[test]
    fn unknown_pullback_recovered() {
        let s = s_ring("R1", "R2");
        let incl = Inclusion::socle(
            "S->LC",
            &s,
            &lc(),
            RingHom::parse("S->LC", &[("E", "3*(R1+R2)"), ("F", "R1*R2")], s.vars()).unwrap(),
            PushforwardData::parse(
                &[("1", "2*H-E"), ("R1", "H^2-3*F"), ("R2", "H^2-3*F"), ("R1*R2", "H^3")],
                s.vars(),
                lc().vars(),
            )
            .unwrap(),
        )
        .unwrap();
        let ansatz = vec![
            parse_poly("R1+R2", s.vars()).unwrap(),
            parse_poly("R1-R2", s.vars()).unwrap(),
        ];
        let sol = solve_unknown_pullback(&incl, "H", &ansatz).unwrap();
        assert_eq!(sol.image, parse_poly("R1+R2", s.vars()).unwrap());
        let dup = vec![ansatz[0].clone(), ansatz[0].clone()];
        assert!(matches!(
            solve_unknown_pullback(&incl, "H", &dup),
            Err(ChowError::NonUnique(_))
        ));
    }
}
