//! Index, nullity, eigenvalue rules, lower bounds and curvature analyses.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::catalog::{Builtin, ManifoldDescriptor, SValue};
use crate::composer::{self, ProductExpression};
use crate::error::{Error, Result};
use crate::rational::{frac, int, Bound, Rational};
use crate::spectrum::Spectrum;

/// Morse index: the number of negative Jacobi eigenvalues.
pub fn index(d: &ManifoldDescriptor) -> Result<u64> {
    jacobi_count(d, d.known_index, |j, zero| j.count_below(zero, true))
}

/// Dimension of the space of Jacobi fields.
pub fn nullity(d: &ManifoldDescriptor) -> Result<u64> {
    jacobi_count(d, d.known_nullity, |j, zero| j.multiplicity_at(zero))
}

/// Counts on a Jacobi spectrum certified through 0, falling back to a
/// recorded value.
fn jacobi_count<F>(d: &ManifoldDescriptor, known: Option<u64>, count: F) -> Result<u64>
where
    F: Fn(&Spectrum, &Rational) -> Result<u64>,
{
    let zero = Rational::zero();
    match (d.jacobi.full(), known) {
        (Some(j), _) if j.bound().covers(&zero) => count(j, &zero),
        (_, Some(k)) => Ok(k),
        (Some(j), None) => count(j, &zero),
        (None, None) => Err(d.jacobi.require().expect_err("unavailable")),
    }
}

/// Least Jacobi eigenvalue, `None` for a trivial normal bundle.
pub fn mu1(d: &ManifoldDescriptor) -> Result<Option<Rational>> {
    let j = d.jacobi.require()?;
    if j.is_empty_bundle() {
        return Ok(None);
    }
    j.min_value()
        .cloned()
        .map(Some)
        .ok_or_else(|| Error::InsufficientData(format!("μ₁ of {} lies above the certified bound {}", d.name, j.bound())))
}

/// The six block counts of a binary minimal product together with the
/// factor indices and nullities they are added to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Breakdown {
    pub factor_index: [u64; 2],
    pub factor_nullity: [u64; 2],
    /// Negative eigenvalues on the `η` line, besides the constant section.
    pub i0: u64,
    /// Negative eigenvalues on the first normal bundle not coming from the
    /// first factor's own index.
    pub i1: u64,
    pub ihat1: u64,
    pub n0: u64,
    pub n1: u64,
    pub nhat1: u64,
}

impl Breakdown {
    pub fn index(&self) -> u64 {
        self.factor_index[0] + self.factor_index[1] + 1 + self.i0 + self.i1 + self.ihat1
    }

    pub fn nullity(&self) -> u64 {
        self.factor_nullity[0] + self.factor_nullity[1] + self.n0 + self.n1 + self.nhat1
    }
}

fn factor_counts(d: &ManifoldDescriptor) -> Result<(u64, u64)> {
    let j = d.jacobi.require()?;
    let zero = Rational::zero();
    Ok((j.count_below(&zero, true)?, j.multiplicity_at(&zero)?))
}

/// Splits the index and nullity of a binary product by Jacobi block.
///
/// The zero Laplace eigenvalue contributions are subtracted from each block
/// count rather than excluded during enumeration.
pub fn counting_breakdown(d1: &ManifoldDescriptor, d2: &ManifoldDescriptor) -> Result<Breakdown> {
    let zero = Rational::zero();
    let blocks = composer::jacobi_blocks(d1, d2, &zero)?;
    let (ind1, null1) = factor_counts(d1)?;
    let (ind2, null2) = factor_counts(d2)?;
    let below = |s: &Spectrum| s.count_below(&zero, true);
    let at = |s: &Spectrum| s.multiplicity_at(&zero);
    let excess = |total: u64, own: u64, what: &str| {
        total.checked_sub(own).ok_or_else(|| {
            Error::InvariantViolation(format!("{what} block count {total} is below the factor's own {own}"))
        })
    };
    Ok(Breakdown {
        factor_index: [ind1, ind2],
        factor_nullity: [null1, null2],
        i0: excess(below(&blocks.normal_line)?, 1, "η-line")?,
        i1: excess(below(&blocks.first)?, ind1, "first normal")?,
        ihat1: excess(below(&blocks.second)?, ind2, "second normal")?,
        n0: at(&blocks.normal_line)?,
        n1: excess(at(&blocks.first)?, null1, "first normal")?,
        nhat1: excess(at(&blocks.second)?, null2, "second normal")?,
    })
}

/// `μ₁ = min(−2n, (n/n₁)μ₁, (n/n̂₁)μ̂₁)`, omitting a factor with trivial
/// normal bundle.
pub fn mu1_rule(d1: &ManifoldDescriptor, d2: &ManifoldDescriptor) -> Result<Rational> {
    let n = int(d1.dim as i64 + d2.dim as i64);
    let mut value = int(-2) * &n;
    for d in [d1, d2] {
        if let Some(m) = mu1(d)? {
            value = value.min(&n / d.dim_rational() * m);
        }
    }
    Ok(value)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lambda1Rule {
    pub value: Rational,
    /// Whether the product is immersed by its first eigenfunctions.
    pub by_first_eigenfunctions: bool,
}

pub fn lambda1_rule(d1: &ManifoldDescriptor, d2: &ManifoldDescriptor) -> Result<Lambda1Rule> {
    let value = composer::product_lambda1(d1, d2)?;
    let by_first_eigenfunctions = value == int(d1.dim as i64 + d2.dim as i64);
    Ok(Lambda1Rule {
        value,
        by_first_eigenfunctions,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CliffordCounts {
    pub index: u64,
    pub nullity: u64,
    pub killing_dim: u64,
}

fn pair_sum(dims: &[u32]) -> u64 {
    let mut total = 0;
    for (i, &a) in dims.iter().enumerate() {
        for &b in &dims[i + 1..] {
            total += (a as u64 + 1) * (b as u64 + 1);
        }
    }
    total
}

/// Dimension of the Killing fields of a product of great spheres.
pub fn killing_dimension(dims: &[u32]) -> u64 {
    let n: u64 = dims.iter().map(|&d| d as u64).sum();
    let k = dims.len() as u64;
    (n + k) * (n + k - 1) / 2 - dims.iter().map(|&d| d as u64 * (d as u64 + 1) / 2).sum::<u64>()
}

/// Closed forms for the minimal product of great spheres `S^{n_1} × … × S^{n_k}`.
pub fn clifford_closed_form(dims: &[u32]) -> Result<CliffordCounts> {
    if dims.len() < 2 || dims.contains(&0) {
        return Err(Error::InvalidParameter(
            "closed forms need at least two positive sphere dimensions".into(),
        ));
    }
    let n: u64 = dims.iter().map(|&d| d as u64).sum();
    let k = dims.len() as u64;
    Ok(CliffordCounts {
        index: (k - 1) * (n + k + 1),
        nullity: (k - 1) * pair_sum(dims),
        killing_dim: killing_dimension(dims),
    })
}

/// Whether Jacobi fields exceed Killing fields; only decided for products of
/// great spheres.
pub fn degenerate(expr: &ProductExpression, nullity: u64) -> Option<bool> {
    let dims = expr.clifford_dims()?;
    Some(nullity > killing_dimension(&dims))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundOutcome {
    Checked { satisfied: bool },
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundCheck {
    pub name: String,
    /// The right-hand side, when its inputs are known.
    pub required: Option<u64>,
    pub actual: Option<u64>,
    pub outcome: BoundOutcome,
}

impl BoundCheck {
    fn evaluate(name: &str, required: Option<u64>, actual: Result<u64>, skip: Option<String>) -> BoundCheck {
        let actual_value = actual.as_ref().ok().copied();
        let outcome = match (skip, &required, actual) {
            (Some(reason), _, _) => BoundOutcome::Skipped(reason),
            (None, None, _) => BoundOutcome::Skipped("inputs unknown".into()),
            (None, Some(_), Err(e)) => BoundOutcome::Skipped(e.to_string()),
            (None, Some(r), Ok(a)) => BoundOutcome::Checked { satisfied: a >= *r },
        };
        BoundCheck {
            name: name.to_string(),
            required,
            actual: actual_value,
            outcome,
        }
    }

    pub fn satisfied(&self) -> Option<bool> {
        match self.outcome {
            BoundOutcome::Checked { satisfied } => Some(satisfied),
            BoundOutcome::Skipped(_) => None,
        }
    }
}

fn not_totally_geodesic(d: &ManifoldDescriptor) -> Option<String> {
    match d.flags.totally_geodesic {
        Some(false) => None,
        Some(true) => Some(format!("{} is totally geodesic", d.name)),
        None => Some(format!("whether {} is totally geodesic is unknown", d.name)),
    }
}

fn full_and_curved(d: &ManifoldDescriptor) -> Option<String> {
    match d.flags.full {
        Some(true) => not_totally_geodesic(d),
        Some(false) => Some(format!("{} is not full", d.name)),
        None => Some(format!("whether {} is full is unknown", d.name)),
    }
}

/// Lower bounds on index and nullity that apply to `d`, and, given its
/// factors, those for a product of full non-geodesic submanifolds.
pub fn lower_bounds(d: &ManifoldDescriptor, factors: Option<(&ManifoldDescriptor, &ManifoldDescriptor)>) -> Vec<BoundCheck> {
    let (n, p) = (d.dim as u64, d.codim as u64);
    let own = not_totally_geodesic(d);
    let mut checks = vec![
        BoundCheck::evaluate("index ≥ n + p + 1", Some(n + p + 1), index(d), own.clone()),
        BoundCheck::evaluate(
            "mult(−n) ≥ n + p + 1",
            Some(n + p + 1),
            d.jacobi.require().and_then(|j| j.multiplicity_at(&-d.dim_rational())),
            own,
        ),
    ];
    if let Some((d1, d2)) = factors {
        let skip = full_and_curved(d1).or_else(|| full_and_curved(d2));
        let spread = |f: &ManifoldDescriptor| f.dim as u64 + f.codim as u64 + 1;
        let ind = index(d1).ok().zip(index(d2).ok());
        let null = nullity(d1).ok().zip(nullity(d2).ok());
        checks.push(BoundCheck::evaluate(
            "index ≥ Ind₁ + Ind₂ + n + p + 2",
            ind.map(|(a, b)| a + b + n + p + 2),
            index(d),
            skip.clone(),
        ));
        checks.push(BoundCheck::evaluate(
            "nullity ≥ Null₁ + Null₂ + 3(n₁+p₁+1)(n̂₁+p̂₁+1)",
            null.map(|(a, b)| a + b + 3 * spread(d1) * spread(d2)),
            nullity(d),
            skip,
        ));
    }
    checks
}

/// Average of `S` over the flattened leaves of an expression, compared with
/// the lower bound `(k−1)n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AverageS {
    pub value: SValue,
    pub lower_bound: Rational,
    /// Equality holds exactly for products of great spheres.
    pub equality: Option<bool>,
}

pub fn average_s_identity(expr: &ProductExpression) -> Result<AverageS> {
    let leaves = expr.leaves();
    let k = leaves.len() as i64;
    let n = int(expr.dim() as i64);
    let lower_bound = int(k - 1) * &n;
    let value = composer::second_fundamental(expr)?;
    let equality = match value.value() {
        Some(s) => {
            if *s < lower_bound {
                return Err(Error::InvariantViolation(format!("average S = {s} is below (k−1)n = {lower_bound}")));
            }
            Some(*s == lower_bound)
        }
        None => None,
    };
    Ok(AverageS {
        value,
        lower_bound,
        equality,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SClass {
    /// `S = n`: a product of great spheres.
    Clifford,
    /// `S = 5n/3`: a great sphere times the Veronese surface.
    VeroneseGap,
    /// `S > 5n/3`.
    Other,
}

impl fmt::Display for SClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SClass::Clifford => "clifford",
            SClass::VeroneseGap => "veronese-gap",
            SClass::Other => "other",
        })
    }
}

/// Classifies a binary product with constant `S`.
pub fn constant_s_classify(d1: &ManifoldDescriptor, d2: &ManifoldDescriptor) -> Result<(SClass, Rational)> {
    for d in [d1, d2] {
        match d.s {
            SValue::Constant(_) => {}
            SValue::Average(_) => return Err(Error::NotConstant(format!("only the average of S is known for {}", d.name))),
            SValue::Unknown => return Err(Error::InsufficientData(format!("S of {} unknown", d.name))),
        }
    }
    let s1 = d1.s.value().expect("constant");
    let s2 = d2.s.value().expect("constant");
    let n = int(d1.dim as i64 + d2.dim as i64);
    let s = &n * (int(1) + s1 / d1.dim_rational() + s2 / d2.dim_rational());
    let gap = frac(5, 3) * &n;
    let class = if s == n {
        SClass::Clifford
    } else if s == gap {
        SClass::VeroneseGap
    } else if s > gap {
        SClass::Other
    } else {
        return Err(Error::InvariantViolation(format!(
            "constant S = {s} lies in the forbidden range ({n}, {gap}) or below n"
        )));
    };
    Ok((class, s))
}

/// Families of minimal products with constant `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// `r` Veronese surfaces and great spheres of the given dimensions.
    Veronese { r: u32, sphere_dims: Vec<u32> },
    /// Isoparametric hypersurfaces `(n_j, g_j)`.
    Isoparametric(Vec<(u32, u32)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyValue {
    pub dim: u32,
    pub codim: u32,
    pub s: Rational,
}

pub fn constant_s_family(family: &Family) -> Result<FamilyValue> {
    match family {
        Family::Veronese { r, sphere_dims } => {
            let k = sphere_dims.len() as u32;
            if r + k == 0 || sphere_dims.contains(&0) {
                return Err(Error::InvalidParameter("family needs at least one factor of positive dimension".into()));
            }
            let dim = 2 * r + sphere_dims.iter().sum::<u32>();
            let s = int(dim as i64) * (frac(5 * *r as i64, 3) + int(k as i64) - int(1));
            Ok(FamilyValue {
                dim,
                codim: 3 * r + k - 1,
                s,
            })
        }
        Family::Isoparametric(members) => {
            if members.is_empty() {
                return Err(Error::InvalidParameter("family needs at least one hypersurface".into()));
            }
            for &(dim, g) in members {
                Builtin::Isoparametric { dim, g }.validate()?;
            }
            let dim: u32 = members.iter().map(|m| m.0).sum();
            let g_total: u32 = members.iter().map(|m| m.1).sum();
            Ok(FamilyValue {
                dim,
                codim: 2 * members.len() as u32 - 1,
                s: int(dim as i64) * int(g_total as i64 - 1),
            })
        }
    }
}

/// The index predicted for a product of factors immersed by first
/// eigenfunctions whose spectra have the gaps below.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapFormula {
    /// Jacobi eigenvalues of each factor below `−n_j`, with multiplicity.
    pub alpha: [u64; 2],
    pub first_multiplicity: [u64; 2],
    pub predicted_index: u64,
    /// Laplace gaps `(n_j, 2n_j)` are certified only up to this bound.
    pub verified_up_to: Bound,
}

fn gap_data(d: &ManifoldDescriptor) -> Result<(u64, u64, Bound)> {
    let n = d.dim_rational();
    if d.lambda1.as_ref() != Some(&n) {
        return Err(Error::InsufficientData(format!("{} is not known to be immersed by first eigenfunctions", d.name)));
    }
    let j = d.jacobi.require()?;
    let l = d.laplace.require()?;
    let alpha = if j.is_empty_bundle() {
        0
    } else {
        if j.multiplicity_at(&-&n)? == 0 {
            return Err(Error::InsufficientData(format!("−{n} is not a Jacobi eigenvalue of {}", d.name)));
        }
        j.count_below(&-&n, true)?
    };
    let first = l.multiplicity_at(&n)?;
    let two_n = int(2) * &n;
    if let Some((v, _)) = l.entries().iter().find(|(v, _)| *v > n && *v < two_n) {
        return Err(Error::InsufficientData(format!("Laplace eigenvalue {v} of {} lies in ({n}, {two_n})", d.name)));
    }
    let verified = Bound::Finite(two_n).min(l.bound().clone());
    Ok((alpha, first, verified))
}

/// Checks the hypotheses of the first-eigenfunction gap formula and returns
/// its index prediction.
pub fn first_eigenfunction_gap(d1: &ManifoldDescriptor, d2: &ManifoldDescriptor) -> Result<GapFormula> {
    let (a1, m1, b1) = gap_data(d1)?;
    let (a2, m2, b2) = gap_data(d2)?;
    let ind1 = index(d1)?;
    let ind2 = index(d2)?;
    Ok(GapFormula {
        alpha: [a1, a2],
        first_multiplicity: [m1, m2],
        predicted_index: ind1 + ind2 + 1 + (1 + a2) * m1 + (1 + a1) * m2,
        verified_up_to: b1.min(b2),
    })
}

/// A number with the rule or computation that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sourced<T> {
    pub value: T,
    pub provenance: String,
}

impl<T> Sourced<T> {
    fn new(value: T, provenance: impl Into<String>) -> Self {
        Sourced {
            value,
            provenance: provenance.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisReport {
    pub expression: String,
    pub dim: u32,
    pub codim: u32,
    pub index: Option<Sourced<u64>>,
    pub nullity: Option<Sourced<u64>>,
    pub mu1: Option<Sourced<Rational>>,
    pub lambda1: Option<Sourced<Rational>>,
    pub by_first_eigenfunctions: Option<bool>,
    pub breakdown: Option<Breakdown>,
    pub bounds: Vec<BoundCheck>,
    pub s: Option<Sourced<Rational>>,
    /// Whether `s` is constant on the manifold or only an average.
    pub s_constant: Option<bool>,
    pub r: Option<Sourced<Rational>>,
    pub killing_dim: Option<Sourced<u64>>,
    pub degenerate: Option<bool>,
    pub classification: Option<SClass>,
    /// Facts that could not be determined, keyed by field.
    pub missing: BTreeMap<String, String>,
}

const SPECTRAL: &str = "spectral-composition";

/// Every analysis applicable to `expr`, with Jacobi data certified through 0.
pub fn analyze(expr: &ProductExpression) -> Result<AnalysisReport> {
    let zero = Rational::zero();
    let d = composer::evaluate(
        expr,
        &crate::catalog::Demand {
            laplace: None,
            jacobi: Some(zero.clone()),
        },
    )?;
    let factors = composer::factor_pair(expr, &zero)?;
    let pair = factors.as_ref().map(|(a, b)| (a, b));
    let mut missing = BTreeMap::new();
    let mut note = |field: &str, e: &Error| {
        missing.insert(field.to_string(), e.to_string());
    };
    let source = |d: &ManifoldDescriptor, fact| {
        d.provenance_of(fact)
            .map_or_else(|| SPECTRAL.to_string(), |p| p.to_string())
    };
    let leaf = matches!(expr, ProductExpression::Leaf(_));

    let idx = match index(&d) {
        Ok(v) => Some(Sourced::new(v, if leaf { source(&d, crate::catalog::Fact::Index) } else { format!("{SPECTRAL}: negative Jacobi eigenvalues") })),
        Err(e) => {
            note("index", &e);
            None
        }
    };
    let nul = match nullity(&d) {
        Ok(v) => Some(Sourced::new(v, if leaf { source(&d, crate::catalog::Fact::Nullity) } else { format!("{SPECTRAL}: zero Jacobi eigenvalues") })),
        Err(e) => {
            note("nullity", &e);
            None
        }
    };
    let mu = match mu1(&d) {
        Ok(Some(v)) => Some(Sourced::new(v, format!("{SPECTRAL}: least Jacobi eigenvalue"))),
        Ok(None) => None,
        Err(e) => {
            note("mu1", &e);
            None
        }
    };
    let lambda1 = match &d.lambda1 {
        Some(v) => Some(Sourced::new(v.clone(), source(&d, crate::catalog::Fact::Lambda1))),
        None => {
            missing.insert("lambda1".into(), format!("λ₁ of {} unknown", d.name));
            None
        }
    };
    let breakdown = match pair {
        Some((d1, d2)) => match counting_breakdown(d1, d2) {
            Ok(b) => Some(b),
            Err(e) => {
                missing.insert("breakdown".into(), e.to_string());
                None
            }
        },
        None => None,
    };
    let bounds = lower_bounds(&d, pair);
    let s = d.s.value().map(|v| Sourced::new(v.clone(), source(&d, crate::catalog::Fact::S)));
    if s.is_none() {
        missing.insert("S".into(), format!("S of {} unknown", d.name));
    }
    let r = composer::scalar_curvature(&d).map(|v| Sourced::new(v, "closed-form: R = n(n-1) - S"));
    let clifford = expr.clifford_dims();
    let killing_dim = clifford
        .as_ref()
        .map(|dims| Sourced::new(killing_dimension(dims), "closed-form: (n+k)(n+k-1)/2 - sum n_j(n_j+1)/2"));
    let degenerate = nul.as_ref().and_then(|v| degenerate(expr, v.value));
    let classification = pair.and_then(|(d1, d2)| constant_s_classify(d1, d2).ok()).map(|(c, _)| c);

    Ok(AnalysisReport {
        expression: expr.to_string(),
        dim: d.dim,
        codim: d.codim,
        index: idx,
        nullity: nul,
        mu1: mu,
        lambda1,
        by_first_eigenfunctions: d.flags.by_first_eigenfunctions,
        breakdown,
        bounds,
        s_constant: match d.s {
            SValue::Constant(_) => Some(true),
            SValue::Average(_) => Some(false),
            SValue::Unknown => None,
        },
        s,
        r,
        killing_dim,
        degenerate,
        classification,
        missing,
    })
}
