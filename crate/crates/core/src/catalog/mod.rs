//! Spectral descriptors of minimal submanifolds of spheres.
//!
//! Built-in families are generated from closed forms or lattice enumeration;
//! user descriptors are read from TOML documents (see [`file`]). Families
//! whose spectra are not known in closed form are *facts-only*: they carry
//! dimension data, `λ₁`, `S` and flags, and anything that needs a full
//! spectrum reports [`Error::InsufficientData`].

pub mod file;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{frac, int, Bound, Rational};
use crate::spectrum::Spectrum;

pub use file::{load_descriptor, save_descriptor};

/// A spectrum that may not be available for a descriptor.
#[derive(Clone, Debug, PartialEq)]
pub enum SpectralData {
    Full(Spectrum),
    /// Facts-only: the reason names what is missing.
    Unavailable(String),
}

impl SpectralData {
    pub fn full(&self) -> Option<&Spectrum> {
        match self {
            SpectralData::Full(s) => Some(s),
            SpectralData::Unavailable(_) => None,
        }
    }

    /// The spectrum, or `InsufficientData` carrying the recorded reason.
    pub fn require(&self) -> Result<&Spectrum> {
        match self {
            SpectralData::Full(s) => Ok(s),
            SpectralData::Unavailable(reason) => Err(Error::InsufficientData(reason.clone())),
        }
    }
}

/// Squared length of the second fundamental form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SValue {
    Constant(Rational),
    /// Only the average over the manifold is known.
    Average(Rational),
    Unknown,
}

impl SValue {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            SValue::Constant(r) | SValue::Average(r) => Some(r),
            SValue::Unknown => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, SValue::Constant(_))
    }
}

/// Geometric predicates. `None` means unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flags {
    pub minimal: bool,
    pub totally_geodesic: Option<bool>,
    pub full: Option<bool>,
    pub orientable: Option<bool>,
    pub flat_normal_bundle: Option<bool>,
    pub parallel_mean_curvature: Option<bool>,
    pub by_first_eigenfunctions: Option<bool>,
}

impl Flags {
    fn minimal() -> Self {
        Flags {
            minimal: true,
            totally_geodesic: None,
            full: None,
            orientable: None,
            flat_normal_bundle: None,
            // a minimal immersion has H = 0, which is trivially parallel
            parallel_mean_curvature: Some(true),
            by_first_eigenfunctions: None,
        }
    }
}

/// Three-valued conjunction: false dominates, then unknown.
pub fn tri_and(a: Option<bool>, b: Option<bool>) -> Option<bool> {
    match (a, b) {
        (Some(false), _) | (_, Some(false)) => Some(false),
        (Some(true), Some(true)) => Some(true),
        _ => None,
    }
}

/// Numeric descriptor fields that carry provenance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fact {
    Laplace,
    Jacobi,
    S,
    Index,
    Nullity,
    Lambda1,
}

impl Fact {
    pub fn key(self) -> &'static str {
        match self {
            Fact::Laplace => "laplace",
            Fact::Jacobi => "jacobi",
            Fact::S => "s",
            Fact::Index => "index",
            Fact::Nullity => "nullity",
            Fact::Lambda1 => "lambda1",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    ClosedForm,
    SpectralComposition,
    CatalogBuiltin,
    UserFile,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::ClosedForm => "closed-form",
            Source::SpectralComposition => "spectral-composition",
            Source::CatalogBuiltin => "catalog",
            Source::UserFile => "user-file",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactProvenance {
    pub source: Source,
    pub detail: String,
}

impl FactProvenance {
    pub fn new(source: Source, detail: impl Into<String>) -> Self {
        FactProvenance {
            source,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for FactProvenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.detail.is_empty() {
            write!(f, "{}", self.source)
        } else {
            write!(f, "{}: {}", self.source, self.detail)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ManifoldDescriptor {
    pub name: String,
    /// Dimension `n`.
    pub dim: u32,
    /// Codimension `p`; the ambient sphere is `S^{n+p}`.
    pub codim: u32,
    pub flags: Flags,
    pub laplace: SpectralData,
    pub jacobi: SpectralData,
    pub s: SValue,
    pub known_index: Option<u64>,
    pub known_nullity: Option<u64>,
    pub lambda1: Option<Rational>,
    pub provenance: BTreeMap<Fact, FactProvenance>,
}

impl ManifoldDescriptor {
    pub fn dim_rational(&self) -> Rational {
        int(self.dim as i64)
    }

    pub fn provenance_of(&self, fact: Fact) -> Option<&FactProvenance> {
        self.provenance.get(&fact)
    }

    fn set(&mut self, fact: Fact, source: Source, detail: impl Into<String>) {
        self.provenance.insert(fact, FactProvenance::new(source, detail));
    }

    /// Equality of every mathematical field, ignoring provenance.
    pub fn same_facts(&self, other: &ManifoldDescriptor) -> bool {
        let strip = |d: &ManifoldDescriptor| ManifoldDescriptor {
            provenance: BTreeMap::new(),
            ..d.clone()
        };
        strip(self) == strip(other)
    }

    /// Checks the structural invariants every descriptor must satisfy.
    pub fn validate(&self) -> Result<()> {
        let violation = |msg: String| Err(Error::InvariantViolation(format!("{}: {msg}", self.name)));
        let n = self.dim_rational();
        if self.dim == 0 {
            return violation("dimension must be positive".into());
        }
        if !self.flags.minimal {
            return violation("only minimal submanifolds are supported".into());
        }
        if let Some(l1) = &self.lambda1 {
            if !l1.is_positive() {
                return violation(format!("λ₁ = {l1} must be positive"));
            }
            if *l1 > n {
                return violation(format!("λ₁ = {l1} exceeds the dimension {n} of a minimal submanifold"));
            }
        }
        if self.flags.by_first_eigenfunctions == Some(true) {
            if let Some(l1) = &self.lambda1 {
                if *l1 != n {
                    return violation(format!("immersed by first eigenfunctions but λ₁ = {l1} ≠ {n}"));
                }
            }
        }
        if self.flags.by_first_eigenfunctions == Some(false) && self.lambda1.as_ref() == Some(&n) {
            return violation("λ₁ = n contradicts by_first_eigenfunctions = false".into());
        }
        if let SpectralData::Full(lap) = &self.laplace {
            if lap.entries().iter().any(|(v, _)| v.is_negative()) {
                return violation("Laplace spectrum has a negative entry".into());
            }
            if lap.bound().covers(&Rational::zero()) && lap.entries().first() != Some(&(Rational::zero(), 1)) {
                return violation("Laplace spectrum must contain 0 with multiplicity 1".into());
            }
            if self.flags.full == Some(true) && lap.bound().covers(&n) {
                let need = (self.dim + self.codim + 1) as u64;
                let have = lap.multiplicity_at(&n)?;
                if have < need {
                    return violation(format!(
                        "full submanifold needs eigenvalue {n} with multiplicity ≥ {need}, found {have}"
                    ));
                }
            }
            if let Some(l1) = &self.lambda1 {
                match lap.first_positive() {
                    Some((v, _)) if v != l1 => {
                        return violation(format!("λ₁ = {l1} but the Laplace spectrum starts at {v}"))
                    }
                    None if lap.bound().covers(l1) => {
                        return violation(format!("λ₁ = {l1} missing from the Laplace spectrum"))
                    }
                    _ => {}
                }
            }
        }
        if self.flags.totally_geodesic == Some(true) {
            if let Some(s) = self.s.value() {
                if !s.is_zero() {
                    return violation(format!("totally geodesic but S = {s}"));
                }
            }
            if self.codim == 0 {
                if let SpectralData::Full(j) = &self.jacobi {
                    if !j.is_empty_bundle() {
                        return violation("codimension 0 requires the empty Jacobi spectrum".into());
                    }
                }
            }
        }
        if let Some(s) = self.s.value() {
            if s.is_negative() {
                return violation(format!("S = {s} is negative"));
            }
        }
        if let SpectralData::Full(jac) = &self.jacobi {
            let zero = Rational::zero();
            if jac.bound().covers(&zero) {
                let index = jac.count_below(&zero, true)?;
                let nullity = jac.multiplicity_at(&zero)?;
                if self.known_index.is_some_and(|k| k != index) {
                    return violation(format!("known index disagrees with the Jacobi spectrum ({index})"));
                }
                if self.known_nullity.is_some_and(|k| k != nullity) {
                    return violation(format!("known nullity disagrees with the Jacobi spectrum ({nullity})"));
                }
            }
        }
        let known = [
            (Fact::Laplace, self.laplace.full().is_some()),
            (Fact::Jacobi, self.jacobi.full().is_some()),
            (Fact::S, self.s.value().is_some()),
            (Fact::Index, self.known_index.is_some()),
            (Fact::Nullity, self.known_nullity.is_some()),
            (Fact::Lambda1, self.lambda1.is_some()),
        ];
        for (fact, present) in known {
            if present != self.provenance.contains_key(&fact) {
                return violation(format!("provenance mismatch for field `{}`", fact.key()));
            }
        }
        Ok(())
    }
}

/// How deep a caller needs each spectrum; `None` means not at all.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Demand {
    pub laplace: Option<Rational>,
    pub jacobi: Option<Rational>,
}

impl Demand {
    pub fn none() -> Self {
        Demand::default()
    }

    pub fn uniform(bound: &Rational) -> Self {
        Demand {
            laplace: Some(bound.clone()),
            jacobi: Some(bound.clone()),
        }
    }
}

/// Minimal Lawson surfaces and the bipolar Lawson Klein bottle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedSurface {
    Lawson { m: u32, k: u32 },
    BipolarTau31,
}

/// Recipes for the built-in families; a recipe can be re-evaluated at any
/// completeness bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    Sphere { dim: u32, codim: u32 },
    FlatTorus { k: u32 },
    Veronese,
    Isoparametric { dim: u32, g: u32 },
    OtfkmFocal { k: u32 },
    Named(NamedSurface),
}

impl Builtin {
    pub fn dim(&self) -> u32 {
        match *self {
            Builtin::Sphere { dim, .. } | Builtin::Isoparametric { dim, .. } => dim,
            Builtin::FlatTorus { .. } | Builtin::Veronese | Builtin::Named(_) => 2,
            Builtin::OtfkmFocal { k } => k + 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Builtin::Sphere { dim: 0, .. } => Err(Error::InvalidParameter("sphere dimension must be ≥ 1".into())),
            Builtin::FlatTorus { k } if k < 2 => Err(Error::InvalidParameter(format!("torus needs k ≥ 2, got {k}"))),
            Builtin::Isoparametric { dim: 0, .. } => {
                Err(Error::InvalidParameter("hypersurface dimension must be ≥ 1".into()))
            }
            Builtin::Isoparametric { g, .. } if !matches!(g, 1 | 2 | 3 | 4 | 6) => Err(Error::InvalidG(g)),
            Builtin::OtfkmFocal { k: 0 } => Err(Error::InvalidParameter("otfkm needs k ≥ 1".into())),
            Builtin::Named(NamedSurface::Lawson { m, k }) if m == 0 || k == 0 => {
                Err(Error::InvalidParameter("lawson needs m, k ≥ 1".into()))
            }
            _ => Ok(()),
        }
    }

    /// Descriptor whose spectra are complete at least up to the demanded
    /// bounds (where the family has spectra at all).
    pub fn describe(&self, demand: &Demand) -> Result<ManifoldDescriptor> {
        self.validate()?;
        match *self {
            Builtin::Sphere { dim, codim } => {
                let m = int(dim as i64);
                let mut bound = m.clone();
                if let Some(l) = &demand.laplace {
                    bound = bound.max(l.clone());
                }
                if let Some(j) = &demand.jacobi {
                    bound = bound.max(j + &m);
                }
                sphere(dim, codim, &bound)
            }
            Builtin::FlatTorus { k } => flat_torus(k, &demand.laplace.clone().unwrap_or_else(|| int(2))),
            Builtin::Veronese => veronese(&demand.laplace.clone().unwrap_or_else(|| int(2))),
            Builtin::Isoparametric { dim, g } => isoparametric_hypersurface(dim, g),
            Builtin::OtfkmFocal { k } => otfkm_focal(k),
            Builtin::Named(which) => named_surface(which),
        }
    }

    /// Every built-in with the given parameter ranges, for listings and tests.
    pub fn listing() -> Vec<Builtin> {
        vec![
            Builtin::Sphere { dim: 2, codim: 0 },
            Builtin::Sphere { dim: 2, codim: 2 },
            Builtin::FlatTorus { k: 2 },
            Builtin::Veronese,
            Builtin::Isoparametric { dim: 4, g: 2 },
            Builtin::OtfkmFocal { k: 3 },
            Builtin::Named(NamedSurface::Lawson { m: 2, k: 3 }),
            Builtin::Named(NamedSurface::BipolarTau31),
        ]
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Builtin::Sphere { dim, codim: 0 } => write!(f, "sphere({dim})"),
            Builtin::Sphere { dim, codim } => write!(f, "sphere({dim}, codim={codim})"),
            Builtin::FlatTorus { k } => write!(f, "torus(k={k})"),
            Builtin::Veronese => f.write_str("veronese()"),
            Builtin::Isoparametric { dim, g } => write!(f, "isoparametric({dim}, g={g})"),
            Builtin::OtfkmFocal { k } => write!(f, "otfkm(k={k})"),
            Builtin::Named(NamedSurface::Lawson { m, k }) => write!(f, "lawson({m}, {k})"),
            Builtin::Named(NamedSurface::BipolarTau31) => f.write_str("bipolar_tau31()"),
        }
    }
}

fn facts_only(name: String, dim: u32, codim: u32, flags: Flags) -> ManifoldDescriptor {
    ManifoldDescriptor {
        laplace: SpectralData::Unavailable(format!("Laplace spectrum of {name} unavailable")),
        jacobi: SpectralData::Unavailable(format!("Jacobi spectrum of {name} unavailable")),
        name,
        dim,
        codim,
        flags,
        s: SValue::Unknown,
        known_index: None,
        known_nullity: None,
        lambda1: None,
        provenance: BTreeMap::new(),
    }
}

/// Dimension of degree-`k` spherical harmonics on `S^m`:
/// `C(m+k, k) − C(m+k−2, k−2)`.
pub fn harmonic_dimension(m: u32, k: u32) -> u64 {
    let (m, k) = (m as u64, k as u64);
    let top = binomial(m + k, k);
    let lower = if k >= 2 { binomial(m + k - 2, k - 2) } else { 0 };
    top - lower
}

/// Totally geodesic `S^m ⊂ S^{m+p}` with Laplace spectrum `k(k+m−1)` and
/// Jacobi spectrum `k(k+m−1) − m` (multiplicity times `p`), both certified
/// through the degree whose Laplace eigenvalue is at most `bound`.
pub fn sphere(m: u32, p: u32, bound: &Rational) -> Result<ManifoldDescriptor> {
    Builtin::Sphere { dim: m, codim: p }.validate()?;
    let mi = m as i64;
    let mut laplace = Vec::new();
    let mut jacobi = Vec::new();
    for k in 0u32.. {
        let ki = k as i64;
        let value = int(ki * (ki + mi - 1));
        if value > *bound {
            break;
        }
        let mult = harmonic_dimension(m, k);
        if p > 0 {
            jacobi.push((&value - int(mi), mult * p as u64));
        }
        laplace.push((value, mult));
    }
    let lap_bound = Bound::Finite(bound.clone());
    let jacobi = if p == 0 {
        Spectrum::empty()
    } else {
        Spectrum::new(jacobi, lap_bound.shift(&int(-mi)))?
    };
    let name = if p == 0 {
        format!("S^{m}")
    } else {
        format!("S^{m} in S^{}", m + p)
    };
    let mut d = ManifoldDescriptor {
        name,
        dim: m,
        codim: p,
        flags: Flags {
            totally_geodesic: Some(true),
            full: Some(p == 0),
            orientable: Some(true),
            flat_normal_bundle: Some(true),
            by_first_eigenfunctions: Some(true),
            ..Flags::minimal()
        },
        laplace: SpectralData::Full(Spectrum::new(laplace, lap_bound)?),
        jacobi: SpectralData::Full(jacobi),
        s: SValue::Constant(Rational::zero()),
        known_index: Some(p as u64),
        known_nullity: Some((m as u64 + 1) * p as u64),
        lambda1: Some(int(mi)),
        provenance: BTreeMap::new(),
    };
    d.set(Fact::Laplace, Source::CatalogBuiltin, "spherical harmonics k(k+m-1)");
    d.set(Fact::Jacobi, Source::CatalogBuiltin, "normal Laplacian minus m on the trivial normal bundle");
    d.set(Fact::S, Source::CatalogBuiltin, "totally geodesic");
    d.set(Fact::Index, Source::ClosedForm, "totally geodesic sphere: index = codimension");
    d.set(Fact::Nullity, Source::ClosedForm, "totally geodesic sphere: nullity = (m+1)p");
    d.set(Fact::Lambda1, Source::CatalogBuiltin, "first spherical harmonics");
    Ok(d)
}

/// Eigenvalues `[a²(4k²−1) + (2b−a)²] / (2k²)` of the flat minimal torus in
/// `S^5`, enumerated over the exact window that certifies every value up to
/// `bound`.
pub fn flat_torus_eigenvalues(k: u32, bound: &Rational) -> Vec<(Rational, u64)> {
    let k = k as i64;
    let c = 4 * k * k - 1;
    let denom = 2 * k * k;
    // a²c + (2b−a)² ≤ q
    let q = bound * int(denom);
    if q.is_negative() {
        return Vec::new();
    }
    let q_floor: BigInt = q.floor().to_integer();
    let mut acc: BTreeMap<Rational, u64> = BTreeMap::new();
    let a_max = (&q_floor / BigInt::from(c)).sqrt().to_i64().expect("window fits i64");
    for a in -a_max..=a_max {
        let rest = &q_floor - BigInt::from(a * a * c);
        if rest.is_negative() {
            continue;
        }
        let w = rest.sqrt().to_i64().expect("window fits i64");
        // |2b − a| ≤ w
        let lo = (a - w).div_euclid(2) + i64::from((a - w).rem_euclid(2) != 0);
        let hi = (a + w).div_euclid(2);
        for b in lo..=hi {
            let t = 2 * b - a;
            *acc.entry(frac(a * a * c + t * t, denom)).or_insert(0) += 1;
        }
    }
    acc.into_iter().collect()
}

/// The embedded flat minimal torus in `S^5` indexed by `k ≥ 2`, with induced
/// metric `2k²/(4k²−1) (du² + dv²)`.
pub fn flat_torus(k: u32, bound: &Rational) -> Result<ManifoldDescriptor> {
    Builtin::FlatTorus { k }.validate()?;
    let laplace = Spectrum::new(flat_torus_eigenvalues(k, bound), Bound::Finite(bound.clone()))?;
    // eigenvalue 2 is always present, so enumerating to 2 finds λ₁
    let lambda1 = flat_torus_eigenvalues(k, &int(2))
        .into_iter()
        .map(|(v, _)| v)
        .find(|v| v.is_positive())
        .expect("2 is an eigenvalue");
    let flags = Flags {
        totally_geodesic: Some(false),
        full: Some(true),
        orientable: Some(true),
        by_first_eigenfunctions: Some(lambda1 == int(2)),
        ..Flags::minimal()
    };
    let mut d = facts_only(format!("torus(k={k})"), 2, 3, flags);
    d.laplace = SpectralData::Full(laplace);
    d.lambda1 = Some(lambda1);
    d.set(Fact::Laplace, Source::CatalogBuiltin, "dual-lattice enumeration");
    d.set(Fact::Lambda1, Source::CatalogBuiltin, "dual-lattice enumeration");
    Ok(d)
}

/// Veronese surface in `S^4`: even-degree harmonics of the curvature-1/3
/// sphere, `S = 4/3`.
pub fn veronese(bound: &Rational) -> Result<ManifoldDescriptor> {
    let mut entries = Vec::new();
    for k in (0i64..).step_by(2) {
        let value = frac(k * (k + 1), 3);
        if value > *bound {
            break;
        }
        entries.push((value, (2 * k + 1) as u64));
    }
    let flags = Flags {
        totally_geodesic: Some(false),
        full: Some(true),
        orientable: Some(false),
        flat_normal_bundle: Some(false),
        by_first_eigenfunctions: Some(true),
        ..Flags::minimal()
    };
    let mut d = facts_only("veronese".into(), 2, 2, flags);
    d.laplace = SpectralData::Full(Spectrum::new(entries, Bound::Finite(bound.clone()))?);
    d.s = SValue::Constant(frac(4, 3));
    d.lambda1 = Some(int(2));
    d.set(Fact::Laplace, Source::CatalogBuiltin, "even harmonics, curvature 1/3");
    d.set(Fact::S, Source::CatalogBuiltin, "Veronese surface S = 4/3");
    d.set(Fact::Lambda1, Source::CatalogBuiltin, "degree-2 harmonics");
    Ok(d)
}

/// Facts-only minimal isoparametric hypersurface with `g` principal
/// curvatures: `S = (g−1)n`, `λ₁ = n`.
pub fn isoparametric_hypersurface(n: u32, g: u32) -> Result<ManifoldDescriptor> {
    Builtin::Isoparametric { dim: n, g }.validate()?;
    let flags = Flags {
        totally_geodesic: Some(g == 1),
        full: Some(g != 1),
        orientable: Some(true),
        flat_normal_bundle: Some(true),
        by_first_eigenfunctions: Some(true),
        ..Flags::minimal()
    };
    let mut d = facts_only(format!("isoparametric(n={n},g={g})"), n, 1, flags);
    d.s = SValue::Constant(int((g as i64 - 1) * n as i64));
    d.lambda1 = Some(int(n as i64));
    d.set(Fact::S, Source::ClosedForm, "isoparametric S = (g-1)n");
    d.set(Fact::Lambda1, Source::ClosedForm, "isoparametric hypersurfaces are immersed by first eigenfunctions");
    Ok(d)
}

/// Facts-only OT-FKM focal submanifold `M₂` with `(m₁, m₂) = (1, k)`:
/// `n = k+2`, `p = k+1`, `λ₁ = min(4, k+2)`.
pub fn otfkm_focal(k: u32) -> Result<ManifoldDescriptor> {
    Builtin::OtfkmFocal { k }.validate()?;
    let n = k + 2;
    let lambda1 = int(4.min(n as i64));
    let flags = Flags {
        totally_geodesic: Some(false),
        by_first_eigenfunctions: Some(lambda1 == int(n as i64)),
        ..Flags::minimal()
    };
    let mut d = facts_only(format!("otfkm(k={k})"), n, k + 1, flags);
    d.lambda1 = Some(lambda1);
    d.set(Fact::Lambda1, Source::ClosedForm, "OT-FKM focal submanifold λ₁ = min(4, k+2)");
    Ok(d)
}

/// Facts-only named minimal surfaces immersed by first eigenfunctions.
pub fn named_surface(which: NamedSurface) -> Result<ManifoldDescriptor> {
    Builtin::Named(which).validate()?;
    let (name, codim, orientable, flat) = match which {
        NamedSurface::Lawson { m, k } => (format!("lawson({m},{k})"), 1, true, Some(true)),
        NamedSurface::BipolarTau31 => ("bipolar_tau31".to_string(), 2, false, None),
    };
    let flags = Flags {
        totally_geodesic: Some(false),
        full: Some(true),
        orientable: Some(orientable),
        flat_normal_bundle: flat,
        by_first_eigenfunctions: Some(true),
        ..Flags::minimal()
    };
    let mut d = facts_only(name, 2, codim, flags);
    d.lambda1 = Some(int(2));
    d.set(Fact::Lambda1, Source::ClosedForm, "immersed by first eigenfunctions");
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_spectra() {
        let s3 = sphere(3, 0, &int(8)).unwrap();
        let lap = s3.laplace.full().unwrap();
        assert_eq!(lap.entries(), &[(int(0), 1), (int(3), 4), (int(8), 9)]);
        assert!(s3.jacobi.full().unwrap().is_empty_bundle());
        s3.validate().unwrap();

        let s2 = sphere(2, 2, &int(6)).unwrap();
        assert_eq!(s2.known_index, Some(2));
        assert_eq!(s2.known_nullity, Some(6));
        let jac = s2.jacobi.full().unwrap();
        assert_eq!(jac.entries(), &[(int(-2), 2), (int(0), 6), (int(4), 10)]);
        assert_eq!(jac.bound(), &Bound::Finite(int(4)));
        s2.validate().unwrap();
    }

    #[test]
    fn sphere_index_and_nullity_match_jacobi() {
        for m in 1..=5 {
            for p in 0..=3 {
                let d = sphere(m, p, &int(3 * m as i64)).unwrap();
                let jac = d.jacobi.full().unwrap();
                if p == 0 {
                    assert!(jac.is_empty_bundle());
                    continue;
                }
                assert_eq!(jac.count_below(&int(0), true).unwrap(), p as u64);
                assert_eq!(jac.multiplicity_at(&int(0)).unwrap(), (m as u64 + 1) * p as u64);
            }
        }
    }

    #[test]
    fn flat_torus_first_eigenvalues() {
        let t = flat_torus(2, &int(3)).unwrap();
        t.validate().unwrap();
        assert_eq!(t.lambda1, Some(frac(1, 2)));
        let lap = t.laplace.full().unwrap();
        assert_eq!(lap.multiplicity_at(&int(0)).unwrap(), 1);
        assert!(lap.multiplicity_at(&frac(1, 2)).unwrap() >= 2);
        assert_eq!(lap.multiplicity_at(&int(2)).unwrap(), 6);
        assert_eq!(t.flags.by_first_eigenfunctions, Some(false));
    }

    #[test]
    fn veronese_facts() {
        let v = veronese(&int(7)).unwrap();
        v.validate().unwrap();
        assert_eq!(v.s, SValue::Constant(frac(4, 3)));
        let lap = v.laplace.full().unwrap();
        assert_eq!(lap.entries(), &[(int(0), 1), (int(2), 5), (frac(20, 3), 9)]);
        assert!(v.jacobi.full().is_none());
    }

    #[test]
    fn isoparametric_facts() {
        assert_eq!(isoparametric_hypersurface(4, 2).unwrap().s, SValue::Constant(int(4)));
        assert_eq!(isoparametric_hypersurface(3, 1).unwrap().s, SValue::Constant(int(0)));
        assert_eq!(isoparametric_hypersurface(4, 5).unwrap_err(), Error::InvalidG(5));
    }

    #[test]
    fn otfkm_facts() {
        let d = otfkm_focal(3).unwrap();
        assert_eq!((d.dim, d.codim), (5, 4));
        assert_eq!(d.lambda1, Some(int(4)));
        assert_eq!(d.flags.by_first_eigenfunctions, Some(false));
        let d = otfkm_focal(1).unwrap();
        assert_eq!(d.lambda1, Some(int(3)));
        assert_eq!(d.flags.by_first_eigenfunctions, Some(true));
        let d = otfkm_focal(2).unwrap();
        assert_eq!(d.lambda1, Some(int(4)));
        assert_eq!(d.flags.by_first_eigenfunctions, Some(true));
        assert_eq!(d.flags.orientable, None);
    }

    #[test]
    fn named_surfaces() {
        let l = named_surface(NamedSurface::Lawson { m: 2, k: 3 }).unwrap();
        assert_eq!((l.dim, l.codim, l.lambda1.clone()), (2, 1, Some(int(2))));
        assert_eq!(l.flags.by_first_eigenfunctions, Some(true));
        let b = named_surface(NamedSurface::BipolarTau31).unwrap();
        assert_eq!(b.flags.orientable, Some(false));
        assert_eq!(b.codim, 2);
        assert!(named_surface(NamedSurface::Lawson { m: 1, k: 1 })
            .unwrap()
            .flags
            .by_first_eigenfunctions
            .unwrap());
    }

    #[test]
    fn every_builtin_is_valid() {
        for b in Builtin::listing() {
            b.describe(&Demand::uniform(&int(6))).unwrap().validate().unwrap();
        }
    }

    #[test]
    fn validation_rejects_large_lambda1() {
        let mut d = named_surface(NamedSurface::Lawson { m: 1, k: 1 }).unwrap();
        d.lambda1 = Some(int(5));
        d.flags.by_first_eigenfunctions = None;
        assert!(matches!(d.validate(), Err(Error::InvariantViolation(_))));
    }
}
