//! Minimal products of minimal submanifolds.
//!
//! For factors of dimensions `n₁, n̂₁` the minimal product carries the
//! weights `c² = n₁/n, ĉ² = n̂₁/n`. Its Laplacian is `(n/n₁)Δ₁ + (n/n̂₁)Δ̂₁`, and
//! its Jacobi operator splits over the normal bundle into three blocks:
//!
//! * the `η` line: `(n/n₁)λ + (n/n̂₁)λ̂ − 2n`,
//! * the first factor's normal bundle: `(n/n₁)μ + (n/n̂₁)λ̂`,
//! * the second factor's normal bundle: `(n/n̂₁)μ̂ + (n/n₁)λ`,
//!
//! where `λ, λ̂` range over full Laplace spectra (zero included) and `μ, μ̂`
//! over the factor Jacobi spectra. k-ary products are left folds of binary
//! ones.
//!
//! Evaluation is demand-driven: callers say how far each spectrum must be
//! certified and the composer derives the depth it needs from each factor.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_traits::Zero;

use crate::catalog::{
    load_descriptor, tri_and, Builtin, Demand, Fact, FactProvenance, Flags, ManifoldDescriptor, SValue, Source,
    SpectralData,
};
use crate::error::{Error, Result};
use crate::parse::{Expr, Leaf};
use crate::rational::{int, Bound, Rational};
use crate::spectrum::Spectrum;

/// Descriptors loaded from user files, addressable by name.
#[derive(Clone, Debug, Default)]
pub struct UserCatalog {
    entries: BTreeMap<String, ManifoldDescriptor>,
}

impl UserCatalog {
    pub fn new() -> Self {
        UserCatalog::default()
    }

    pub fn insert(&mut self, d: ManifoldDescriptor) {
        self.entries.insert(d.name.clone(), d);
    }

    /// Loads a descriptor file and registers it under its `name`.
    pub fn load_file(&mut self, path: &Path) -> Result<String> {
        let d = read_descriptor_file(path)?;
        let name = d.name.clone();
        self.insert(d);
        Ok(name)
    }

    pub fn get(&self, name: &str) -> Option<&ManifoldDescriptor> {
        self.entries.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &ManifoldDescriptor> {
        self.entries.values()
    }
}

pub fn read_descriptor_file(path: &Path) -> Result<ManifoldDescriptor> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    load_descriptor(&text)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Factor {
    Builtin(Builtin),
    Descriptor { label: String, descriptor: Box<ManifoldDescriptor> },
}

impl Factor {
    pub fn dim(&self) -> u32 {
        match self {
            Factor::Builtin(b) => b.dim(),
            Factor::Descriptor { descriptor, .. } => descriptor.dim,
        }
    }

    pub fn describe(&self, demand: &Demand) -> Result<ManifoldDescriptor> {
        match self {
            Factor::Builtin(b) => b.describe(demand),
            Factor::Descriptor { descriptor, .. } => Ok((**descriptor).clone()),
        }
    }

    /// Whether this factor is a great sphere `S^m ⊂ S^m`.
    pub fn is_great_sphere(&self) -> bool {
        match self {
            Factor::Builtin(Builtin::Sphere { codim, .. }) => *codim == 0,
            _ => false,
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Builtin(b) => write!(f, "{b}"),
            Factor::Descriptor { label, .. } => f.write_str(label),
        }
    }
}

/// A tree of catalog leaves combined by k-ary minimal products.
#[derive(Clone, Debug, PartialEq)]
pub enum ProductExpression {
    Leaf(Factor),
    Product(Vec<ProductExpression>),
}

impl ProductExpression {
    pub fn leaf(b: Builtin) -> Self {
        ProductExpression::Leaf(Factor::Builtin(b))
    }

    pub fn product(children: Vec<ProductExpression>) -> Result<Self> {
        if children.len() < 2 {
            return Err(Error::InvalidParameter("a product needs at least two factors".into()));
        }
        Ok(ProductExpression::Product(children))
    }

    /// Product of great spheres of the given dimensions.
    pub fn clifford(dims: &[u32]) -> Result<Self> {
        ProductExpression::product(
            dims.iter()
                .map(|&dim| ProductExpression::leaf(Builtin::Sphere { dim, codim: 0 }))
                .collect(),
        )
    }

    /// Resolves file and named leaves of a parsed expression.
    pub fn resolve(expr: &Expr, catalog: &UserCatalog) -> Result<Self> {
        match expr {
            Expr::Leaf(Leaf::Builtin(b)) => {
                b.validate()?;
                Ok(ProductExpression::leaf(*b))
            }
            Expr::Leaf(leaf @ Leaf::File(path)) => Ok(ProductExpression::Leaf(Factor::Descriptor {
                label: leaf.to_string(),
                descriptor: Box::new(read_descriptor_file(Path::new(path))?),
            })),
            Expr::Leaf(Leaf::Named(name)) => {
                let d = catalog
                    .get(name)
                    .ok_or_else(|| Error::InvalidParameter(format!("unknown descriptor `{name}`")))?;
                Ok(ProductExpression::Leaf(Factor::Descriptor {
                    label: name.clone(),
                    descriptor: Box::new(d.clone()),
                }))
            }
            Expr::Product(children) => ProductExpression::product(
                children
                    .iter()
                    .map(|c| ProductExpression::resolve(c, catalog))
                    .collect::<Result<_>>()?,
            ),
        }
    }

    pub fn dim(&self) -> u32 {
        match self {
            ProductExpression::Leaf(f) => f.dim(),
            ProductExpression::Product(children) => children.iter().map(ProductExpression::dim).sum(),
        }
    }

    /// Leaves in order, with nested products flattened.
    pub fn leaves(&self) -> Vec<&Factor> {
        match self {
            ProductExpression::Leaf(f) => vec![f],
            ProductExpression::Product(children) => children.iter().flat_map(ProductExpression::leaves).collect(),
        }
    }

    /// Dimensions of the flattened leaves when every leaf is a great sphere.
    pub fn clifford_dims(&self) -> Option<Vec<u32>> {
        let leaves = self.leaves();
        if leaves.len() < 2 || !leaves.iter().all(|f| f.is_great_sphere()) {
            return None;
        }
        Some(leaves.iter().map(|f| f.dim()).collect())
    }

    /// The two factors of the outermost binary product in the left fold.
    pub fn binary_factors(&self) -> Option<(ProductExpression, ProductExpression)> {
        match self {
            ProductExpression::Leaf(_) => None,
            ProductExpression::Product(children) => {
                let (last, init) = children.split_last()?;
                let left = if init.len() == 1 {
                    init[0].clone()
                } else {
                    ProductExpression::Product(init.to_vec())
                };
                Some((left, last.clone()))
            }
        }
    }
}

impl fmt::Display for ProductExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProductExpression::Leaf(leaf) => write!(f, "{leaf}"),
            ProductExpression::Product(children) => {
                f.write_str("product(")?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Squared minimal weights `c_j² = n_j / n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductWeights {
    pub squared: Vec<Rational>,
}

pub fn minimal_weights(dims: &[u32]) -> Result<ProductWeights> {
    if dims.len() < 2 || dims.contains(&0) {
        return Err(Error::InvalidParameter(
            "minimal weights need at least two positive dimensions".into(),
        ));
    }
    let n: i64 = dims.iter().map(|&d| d as i64).sum();
    Ok(ProductWeights {
        squared: dims.iter().map(|&d| Rational::new(d.into(), n.into())).collect(),
    })
}

/// Scale factors `n/n₁` and `n/n̂₁` of a binary product.
fn ratios(d1: &ManifoldDescriptor, d2: &ManifoldDescriptor) -> (Rational, Rational, Rational) {
    let n = int(d1.dim as i64 + d2.dim as i64);
    let r1 = &n / d1.dim_rational();
    let r2 = &n / d2.dim_rational();
    (n, r1, r2)
}

fn pair_label(d1: &ManifoldDescriptor, d2: &ManifoldDescriptor) -> String {
    format!("{} × {}", d1.name, d2.name)
}

/// Laplace spectrum of the minimal product, certified through `bound`.
pub fn product_laplace(d1: &ManifoldDescriptor, d2: &ManifoldDescriptor, bound: &Rational) -> Result<Spectrum> {
    let full = natural_laplace(d1, d2)?;
    if !full.bound().covers(bound) {
        let (_, r1, r2) = ratios(d1, d2);
        return Err(Error::bound_exceeded(
            format!(
                "Laplace spectrum of {} needs factor bounds {} and {}",
                pair_label(d1, d2),
                bound / r1,
                bound / r2
            ),
            bound,
            full.bound(),
        ));
    }
    Ok(full.truncate(&Bound::Finite(bound.clone())))
}

/// Product Laplace spectrum over the whole range the factors certify.
fn natural_laplace(d1: &ManifoldDescriptor, d2: &ManifoldDescriptor) -> Result<Spectrum> {
    let (_, r1, r2) = ratios(d1, d2);
    let l1 = d1.laplace.require()?.scale(&r1)?;
    let l2 = d2.laplace.require()?.scale(&r2)?;
    Ok(l1.minkowski_sum(&l2))
}

/// The three invariant blocks of the product Jacobi operator.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiBlocks {
    /// Sections along the distinguished normal `η`.
    pub normal_line: Spectrum,
    /// Sections of the first factor's normal bundle.
    pub first: Spectrum,
    /// Sections of the second factor's normal bundle.
    pub second: Spectrum,
}

impl JacobiBlocks {
    pub fn merged(&self) -> Spectrum {
        self.normal_line.merge(&self.first).merge(&self.second)
    }

    fn bound(&self) -> Bound {
        self.normal_line
            .bound()
            .clone()
            .min(self.first.bound().clone())
            .min(self.second.bound().clone())
    }

    fn truncate(&self, bound: &Bound) -> JacobiBlocks {
        JacobiBlocks {
            normal_line: self.normal_line.truncate(bound),
            first: self.first.truncate(bound),
            second: self.second.truncate(bound),
        }
    }
}

/// Factor completeness needed to certify the product Jacobi spectrum up to
/// a target value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Requirements {
    pub laplace: [Rational; 2],
    pub jacobi: [Rational; 2],
}

fn floor_of(s: &Spectrum) -> Option<Rational> {
    if s.is_empty_bundle() {
        return None;
    }
    Some(match s.min_value() {
        Some(v) => v.clone(),
        None => s.bound().finite().cloned().expect("finite bound"),
    })
}

/// Solves the Minkowski bound identity backwards for a target `t`.
pub fn jacobi_requirements(d1: &ManifoldDescriptor, d2: &ManifoldDescriptor, t: &Rational) -> Result<Requirements> {
    let (n, r1, r2) = ratios(d1, d2);
    let j1 = d1.jacobi.require()?;
    let j2 = d2.jacobi.require()?;
    let zero = Rational::zero();
    let normal = (t + int(2) * &n).max(zero.clone());
    // the other factor's Jacobi block pairs with this Laplacian
    let need = |r: &Rational, other: Option<Rational>, r_other: &Rational| {
        let mut need = &normal / r;
        if let Some(f) = other {
            need = need.max((t - r_other * f) / r);
        }
        need.max(zero.clone())
    };
    Ok(Requirements {
        laplace: [need(&r1, floor_of(j2), &r2), need(&r2, floor_of(j1), &r1)],
        jacobi: [t / &r1, t / &r2],
    })
}

fn natural_blocks(d1: &ManifoldDescriptor, d2: &ManifoldDescriptor) -> Result<JacobiBlocks> {
    let (n, r1, r2) = ratios(d1, d2);
    let l1 = d1.laplace.require()?.scale(&r1)?;
    let l2 = d2.laplace.require()?.scale(&r2)?;
    let j1 = d1.jacobi.require()?.scale(&r1)?;
    let j2 = d2.jacobi.require()?.scale(&r2)?;
    Ok(JacobiBlocks {
        normal_line: l1.minkowski_sum(&l2).shift(&(int(-2) * n)),
        first: j1.minkowski_sum(&l2),
        second: j2.minkowski_sum(&l1),
    })
}

fn requirement_error(d1: &ManifoldDescriptor, d2: &ManifoldDescriptor, t: &Rational, have: &Bound) -> Error {
    let context = match jacobi_requirements(d1, d2, t) {
        Ok(req) => format!(
            "Jacobi spectrum of {} needs laplace bounds ({}, {}) and jacobi bounds ({}, {})",
            pair_label(d1, d2),
            req.laplace[0],
            req.laplace[1],
            req.jacobi[0],
            req.jacobi[1]
        ),
        Err(e) => e.to_string(),
    };
    Error::bound_exceeded(context, t, have)
}

/// The three Jacobi blocks, each certified through `bound`.
pub fn jacobi_blocks(d1: &ManifoldDescriptor, d2: &ManifoldDescriptor, bound: &Rational) -> Result<JacobiBlocks> {
    let blocks = natural_blocks(d1, d2)?;
    let have = blocks.bound();
    if !have.covers(bound) {
        return Err(requirement_error(d1, d2, bound, &have));
    }
    Ok(blocks.truncate(&Bound::Finite(bound.clone())))
}

/// Jacobi spectrum of the minimal product, certified through `bound`.
pub fn product_jacobi(d1: &ManifoldDescriptor, d2: &ManifoldDescriptor, bound: &Rational) -> Result<Spectrum> {
    Ok(jacobi_blocks(d1, d2, bound)?.merged())
}

/// First eigenvalue of the product: `n · min(λ₁/n₁, λ̂₁/n̂₁)`.
pub fn product_lambda1(d1: &ManifoldDescriptor, d2: &ManifoldDescriptor) -> Result<Rational> {
    let missing = |d: &ManifoldDescriptor| Error::InsufficientData(format!("λ₁ of {} unknown", d.name));
    let l1 = d1.lambda1.as_ref().ok_or_else(|| missing(d1))?;
    let l2 = d2.lambda1.as_ref().ok_or_else(|| missing(d2))?;
    let (_, r1, r2) = ratios(d1, d2);
    Ok((&r1 * l1).min(&r2 * l2))
}

/// `S = n(k − 1 + Σ S_j/n_j)` over already-known factor values.
fn combine_s(parts: &[(u32, &SValue)]) -> SValue {
    let n: i64 = parts.iter().map(|(d, _)| *d as i64).sum();
    let mut total = int(parts.len() as i64 - 1);
    for (dim, s) in parts {
        match s.value() {
            Some(v) => total += v / int(*dim as i64),
            None => return SValue::Unknown,
        }
    }
    let value = int(n) * total;
    if parts.iter().all(|(_, s)| s.is_constant()) {
        SValue::Constant(value)
    } else {
        SValue::Average(value)
    }
}

/// Squared length of the second fundamental form of an expression.
pub fn second_fundamental(expr: &ProductExpression) -> Result<SValue> {
    match expr {
        ProductExpression::Leaf(f) => Ok(f.describe(&Demand::none())?.s),
        ProductExpression::Product(children) => {
            let values = children
                .iter()
                .map(|c| Ok((c.dim(), second_fundamental(c)?)))
                .collect::<Result<Vec<_>>>()?;
            let parts: Vec<_> = values.iter().map(|(d, s)| (*d, s)).collect();
            Ok(combine_s(&parts))
        }
    }
}

/// `R = n(n−1) − S` (an average when `S` is).
pub fn scalar_curvature(d: &ManifoldDescriptor) -> Option<Rational> {
    let n = d.dim_rational();
    d.s.value().map(|s| &n * (&n - int(1)) - s)
}

/// Checks `R/n = R₁/n₁ + R̂₁/n̂₁` for a binary product; `None` when a scalar
/// curvature is unknown.
pub fn scalar_ratio_identity(
    product: &ManifoldDescriptor,
    d1: &ManifoldDescriptor,
    d2: &ManifoldDescriptor,
) -> Option<bool> {
    let r = scalar_curvature(product)?;
    let r1 = scalar_curvature(d1)?;
    let r2 = scalar_curvature(d2)?;
    Some(r / product.dim_rational() == r1 / d1.dim_rational() + r2 / d2.dim_rational())
}

/// A product expression evaluated as the left fold of its children.
#[derive(Clone, Copy)]
enum Node<'a> {
    Expr(&'a ProductExpression),
    Prefix(&'a [ProductExpression]),
}

impl<'a> Node<'a> {
    fn dim(self) -> u32 {
        match self {
            Node::Expr(e) => e.dim(),
            Node::Prefix(children) => children.iter().map(ProductExpression::dim).sum(),
        }
    }

    fn evaluate(self, demand: &Demand) -> Result<ManifoldDescriptor> {
        match self {
            Node::Expr(ProductExpression::Leaf(f)) => f.describe(demand),
            Node::Expr(ProductExpression::Product(children)) => Node::Prefix(children).evaluate(demand),
            Node::Prefix([only]) => Node::Expr(only).evaluate(demand),
            Node::Prefix(children) => {
                let (last, init) = children.split_last().expect("non-empty product");
                combine(Node::Prefix(init), Node::Expr(last), demand)
            }
        }
    }
}

fn max_opt(a: Option<Rational>, b: Option<Rational>) -> Option<Rational> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    }
}

fn laplace_bound(d: &ManifoldDescriptor) -> Option<&Bound> {
    d.laplace.full().map(Spectrum::bound)
}

fn combine(left: Node<'_>, right: Node<'_>, demand: &Demand) -> Result<ManifoldDescriptor> {
    let n = int(left.dim() as i64 + right.dim() as i64);
    let ratio = |node: Node<'_>| &n / int(node.dim() as i64);
    let (r1, r2) = (ratio(left), ratio(right));
    let child_demand = |r: &Rational| {
        let for_laplace = demand.laplace.as_ref().map(|l| l / r);
        let for_jacobi = demand
            .jacobi
            .as_ref()
            .map(|t| ((t + int(2) * &n) / r).max(Rational::zero()));
        Demand {
            laplace: max_opt(for_laplace, for_jacobi),
            jacobi: demand.jacobi.as_ref().map(|t| t / r),
        }
    };
    let (mut dem1, mut dem2) = (child_demand(&r1), child_demand(&r2));
    let mut d1 = left.evaluate(&dem1)?;
    let mut d2 = right.evaluate(&dem2)?;

    if let Some(t) = &demand.jacobi {
        if let Ok(req) = jacobi_requirements(&d1, &d2, t) {
            let [need1, need2] = req.laplace;
            if laplace_bound(&d1).is_some_and(|b| !b.covers(&need1)) {
                dem1.laplace = max_opt(dem1.laplace, Some(need1));
                let again = left.evaluate(&dem1)?;
                d1 = again;
            }
            if laplace_bound(&d2).is_some_and(|b| !b.covers(&need2)) {
                dem2.laplace = max_opt(dem2.laplace, Some(need2));
                d2 = right.evaluate(&dem2)?;
            }
        }
    }
    let label = match (left, right) {
        (Node::Prefix(init), Node::Expr(last)) => {
            let mut children = init.to_vec();
            children.push(last.clone());
            ProductExpression::Product(children).to_string()
        }
        _ => pair_label(&d1, &d2),
    };
    assemble(label, &d1, &d2, demand)
}

/// Degrades insufficient data to an unavailable spectrum; other errors
/// propagate.
fn spectral<F>(compute: F) -> Result<SpectralData>
where
    F: FnOnce() -> Result<Spectrum>,
{
    match compute() {
        Ok(s) => Ok(SpectralData::Full(s)),
        Err(Error::InsufficientData(reason)) => Ok(SpectralData::Unavailable(reason)),
        Err(e) => Err(e),
    }
}

fn assemble(
    name: String,
    d1: &ManifoldDescriptor,
    d2: &ManifoldDescriptor,
    demand: &Demand,
) -> Result<ManifoldDescriptor> {
    let n = d1.dim + d2.dim;
    let composed = |detail: &str| FactProvenance::new(Source::SpectralComposition, detail);
    let mut provenance = BTreeMap::new();

    let laplace = spectral(|| match &demand.laplace {
        Some(b) => product_laplace(d1, d2, b),
        None => natural_laplace(d1, d2),
    })?;
    let jacobi = spectral(|| match &demand.jacobi {
        Some(t) => product_jacobi(d1, d2, t),
        None => Ok(natural_blocks(d1, d2)?.merged()),
    })?;
    if laplace.full().is_some() {
        provenance.insert(Fact::Laplace, composed("sum of scaled factor Laplace spectra"));
    }
    let (mut known_index, mut known_nullity) = (None, None);
    if let Some(j) = jacobi.full() {
        provenance.insert(Fact::Jacobi, composed("three-block Jacobi decomposition"));
        let zero = Rational::zero();
        if j.bound().covers(&zero) {
            known_index = Some(j.count_below(&zero, true)?);
            known_nullity = Some(j.multiplicity_at(&zero)?);
            provenance.insert(Fact::Index, composed("negative Jacobi eigenvalues"));
            provenance.insert(Fact::Nullity, composed("zero Jacobi eigenvalues"));
        }
    }

    let s = combine_s(&[(d1.dim, &d1.s), (d2.dim, &d2.s)]);
    if s.value().is_some() {
        provenance.insert(
            Fact::S,
            FactProvenance::new(Source::ClosedForm, "S = n(k-1 + sum S_j/n_j)"),
        );
    }
    let lambda1 = product_lambda1(d1, d2).ok();
    let by_first = match &lambda1 {
        Some(l1) => Some(*l1 == int(n as i64)),
        None => tri_and(d1.flags.by_first_eigenfunctions, d2.flags.by_first_eigenfunctions),
    };
    if lambda1.is_some() {
        provenance.insert(
            Fact::Lambda1,
            FactProvenance::new(Source::ClosedForm, "λ₁ = n·min(λ₁/n₁, λ̂₁/n̂₁)"),
        );
    }
    let and = |f: fn(&Flags) -> Option<bool>| tri_and(f(&d1.flags), f(&d2.flags));
    let descriptor = ManifoldDescriptor {
        name,
        dim: n,
        codim: d1.codim + d2.codim + 1,
        flags: Flags {
            minimal: true,
            // S ≥ n > 0 for every minimal product
            totally_geodesic: Some(false),
            full: and(|f| f.full),
            orientable: and(|f| f.orientable),
            flat_normal_bundle: and(|f| f.flat_normal_bundle),
            parallel_mean_curvature: and(|f| f.parallel_mean_curvature),
            by_first_eigenfunctions: by_first,
        },
        laplace,
        jacobi,
        s,
        known_index,
        known_nullity,
        lambda1,
        provenance,
    };
    Ok(descriptor)
}

/// Evaluates an expression with spectra certified at least as deep as
/// `demand` asks.
pub fn evaluate(expr: &ProductExpression, demand: &Demand) -> Result<ManifoldDescriptor> {
    Node::Expr(expr).evaluate(demand)
}

/// Descriptor of the minimal product with both spectra certified through
/// `bound`.
pub fn product_descriptor(expr: &ProductExpression, bound: &Rational) -> Result<ManifoldDescriptor> {
    evaluate(expr, &Demand::uniform(bound))
}

/// Evaluates the two factors of the outermost binary product with enough
/// depth for a Jacobi spectrum certified through `t`.
pub fn factor_pair(expr: &ProductExpression, t: &Rational) -> Result<Option<(ManifoldDescriptor, ManifoldDescriptor)>> {
    let Some((left, right)) = expr.binary_factors() else {
        return Ok(None);
    };
    let n = int(expr.dim() as i64);
    let demand_for = |node: &ProductExpression| {
        let r = &n / int(node.dim() as i64);
        Demand {
            laplace: Some(((t + int(2) * &n) / &r).max(Rational::zero())),
            jacobi: Some(t / &r),
        }
    };
    let (mut dem1, mut dem2) = (demand_for(&left), demand_for(&right));
    let mut d1 = evaluate(&left, &dem1)?;
    let mut d2 = evaluate(&right, &dem2)?;
    if let Ok(req) = jacobi_requirements(&d1, &d2, t) {
        let [need1, need2] = req.laplace;
        if laplace_bound(&d1).is_some_and(|b| !b.covers(&need1)) {
            dem1.laplace = Some(need1);
            d1 = evaluate(&left, &dem1)?;
        }
        if laplace_bound(&d2).is_some_and(|b| !b.covers(&need2)) {
            dem2.laplace = Some(need2);
            d2 = evaluate(&right, &dem2)?;
        }
    }
    Ok(Some((d1, d2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{sphere, veronese};
    use crate::rational::frac;

    fn s(dim: u32) -> ProductExpression {
        ProductExpression::leaf(Builtin::Sphere { dim, codim: 0 })
    }

    #[test]
    fn weights() {
        assert_eq!(minimal_weights(&[1, 1]).unwrap().squared, vec![frac(1, 2), frac(1, 2)]);
        assert_eq!(minimal_weights(&[2, 3]).unwrap().squared, vec![frac(2, 5), frac(3, 5)]);
        let w = minimal_weights(&[1, 1, 1]).unwrap().squared;
        assert_eq!(w, vec![frac(1, 3); 3]);
        assert_eq!(w.iter().sum::<Rational>(), int(1));
        assert!(minimal_weights(&[3]).is_err());
    }

    #[test]
    fn circle_circle_laplace() {
        let c = sphere(1, 0, &int(4)).unwrap();
        let lap = product_laplace(&c, &c, &int(4)).unwrap();
        let want = Spectrum::new([(int(0), 1), (int(2), 4), (int(4), 4)], Bound::Finite(int(4))).unwrap();
        assert_eq!(lap, want);
    }

    #[test]
    fn laplace_bound_too_shallow() {
        let c = sphere(1, 0, &int(1)).unwrap();
        assert!(matches!(product_laplace(&c, &c, &int(4)), Err(Error::BoundExceeded { .. })));
    }

    #[test]
    fn clifford_torus_jacobi() {
        let c = sphere(1, 0, &int(4)).unwrap();
        let jac = product_jacobi(&c, &c, &int(0)).unwrap();
        let want = Spectrum::new([(int(-4), 1), (int(-2), 4), (int(0), 4)], Bound::Finite(int(0))).unwrap();
        assert_eq!(jac, want);
    }

    #[test]
    fn shallow_factors_name_the_requirement() {
        let c = sphere(1, 0, &int(1)).unwrap();
        let err = product_jacobi(&c, &c, &int(0)).unwrap_err();
        match err {
            Error::BoundExceeded { context, .. } => assert!(context.contains("laplace bounds (2, 2)"), "{context}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn veronese_product_has_no_jacobi() {
        let expr = ProductExpression::product(vec![ProductExpression::leaf(Builtin::Veronese), s(3)]).unwrap();
        let d = product_descriptor(&expr, &int(0)).unwrap();
        assert_eq!(d.jacobi, SpectralData::Unavailable("Jacobi spectrum of veronese unavailable".into()));
        assert_eq!(d.s, SValue::Constant(frac(5 * 5, 3)));
        let _ = veronese(&int(2)).unwrap();
    }

    #[test]
    fn three_circles() {
        let expr = ProductExpression::clifford(&[1, 1, 1]).unwrap();
        let d = product_descriptor(&expr, &int(0)).unwrap();
        assert_eq!((d.dim, d.codim), (3, 2));
        assert_eq!(d.lambda1, Some(int(3)));
        assert_eq!(d.known_index, Some(14));
        assert_eq!(d.known_nullity, Some(24));
        assert_eq!(d.s, SValue::Constant(int(6)));
        assert_eq!(d.flags.by_first_eigenfunctions, Some(true));
        assert_eq!(d.flags.flat_normal_bundle, Some(true));
        assert_eq!(d.name, "product(sphere(1), sphere(1), sphere(1))");
        d.validate().unwrap();
    }

    #[test]
    fn curvature_rules() {
        let clifford = ProductExpression::clifford(&[1, 1, 1]).unwrap();
        assert_eq!(second_fundamental(&clifford).unwrap(), SValue::Constant(int(6)));
        let d = product_descriptor(&ProductExpression::clifford(&[1, 1]).unwrap(), &int(0)).unwrap();
        assert_eq!(scalar_curvature(&d), Some(int(0)));
        let s2 = sphere(2, 1, &int(2)).unwrap();
        assert_eq!(scalar_curvature(&s2), Some(int(2)));
    }

    #[test]
    fn demand_driven_nested_product() {
        // the left factor is itself a product; its Laplacian must be
        // certified far enough for the outer Jacobi block.
        let inner = ProductExpression::clifford(&[1, 2]).unwrap();
        let expr = ProductExpression::product(vec![inner, s(2)]).unwrap();
        let d = evaluate(&expr, &Demand { laplace: None, jacobi: Some(int(0)) }).unwrap();
        assert_eq!(d.known_index, Some((3 - 1) * (5 + 3 + 1)));
    }
}
