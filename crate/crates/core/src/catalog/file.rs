//! TOML descriptor documents.
//!
//! ```toml
//! name = "S^2"
//! dim = 2
//! codim = 0
//! lambda1 = [2, 1]          # rationals are [numerator, denominator]
//! known_index = 0
//! known_nullity = 0
//!
//! [s]
//! kind = "constant"         # or "average"
//! value = [0, 1]
//!
//! [flags]
//! minimal = true
//! totally_geodesic = true   # omitted flags are unknown
//!
//! [laplace]
//! bound = [6, 1]            # or "inf"
//! entries = [[0, 1, 1], [2, 1, 3], [6, 1, 5]]   # [num, den, multiplicity]
//!
//! [jacobi]
//! bound = "inf"
//! entries = []
//! ```
//!
//! Omitting `laplace` or `jacobi` makes that spectrum unavailable. Every
//! field read from a file gets user-file provenance.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Fact, FactProvenance, Flags, ManifoldDescriptor, SValue, Source, SpectralData};
use crate::error::{Error, Result};
use crate::rational::{from_pair, to_pair, Bound, Rational};
use crate::spectrum::Spectrum;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DescriptorDoc {
    name: String,
    dim: u32,
    codim: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lambda1: Option<[i64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    known_index: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    known_nullity: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    s: Option<SDoc>,
    #[serde(default)]
    flags: FlagsDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    laplace: Option<SpectrumDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    jacobi: Option<SpectrumDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum SKind {
    Constant,
    Average,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SDoc {
    kind: SKind,
    value: [i64; 2],
}

fn yes() -> bool {
    true
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FlagsDoc {
    #[serde(default = "yes")]
    minimal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    totally_geodesic: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    full: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    orientable: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    flat_normal_bundle: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    parallel_mean_curvature: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    by_first_eigenfunctions: Option<bool>,
}

impl Default for FlagsDoc {
    fn default() -> Self {
        FlagsDoc {
            minimal: true,
            totally_geodesic: None,
            full: None,
            orientable: None,
            flat_normal_bundle: None,
            parallel_mean_curvature: None,
            by_first_eigenfunctions: None,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum BoundDoc {
    Finite([i64; 2]),
    Word(String),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectrumDoc {
    bound: BoundDoc,
    entries: Vec<[i64; 3]>,
}

fn rational_in(pair: [i64; 2], what: &str) -> Result<Rational> {
    from_pair(pair[0].into(), pair[1].into()).ok_or_else(|| Error::Schema(format!("{what}: zero denominator")))
}

fn rational_out(r: &Rational, what: &str) -> Result<[i64; 2]> {
    to_pair(r)
        .map(|(n, d)| [n, d])
        .ok_or_else(|| Error::Schema(format!("{what}: {r} does not fit 64-bit integers")))
}

fn spectrum_in(doc: SpectrumDoc, what: &str) -> Result<Spectrum> {
    let bound = match doc.bound {
        BoundDoc::Finite(pair) => Bound::Finite(rational_in(pair, what)?),
        BoundDoc::Word(w) if w == "inf" => Bound::Infinite,
        BoundDoc::Word(w) => return Err(Error::Schema(format!("{what}: bound must be [num, den] or \"inf\", got {w:?}"))),
    };
    let mut entries = Vec::with_capacity(doc.entries.len());
    for [num, den, mult] in doc.entries {
        let value = rational_in([num, den], what)?;
        let mult = u64::try_from(mult)
            .ok()
            .filter(|m| *m > 0)
            .ok_or_else(|| Error::Schema(format!("{what}: multiplicity of {value} must be positive")))?;
        entries.push((value, mult));
    }
    Spectrum::new(entries, bound).map_err(|e| Error::Schema(format!("{what}: {e}")))
}

fn spectrum_out(s: &Spectrum, what: &str) -> Result<SpectrumDoc> {
    let bound = match s.bound() {
        Bound::Finite(b) => BoundDoc::Finite(rational_out(b, what)?),
        Bound::Infinite => BoundDoc::Word("inf".into()),
    };
    let entries = s
        .entries()
        .iter()
        .map(|(v, m)| {
            let [n, d] = rational_out(v, what)?;
            let m = i64::try_from(*m).map_err(|_| Error::Schema(format!("{what}: multiplicity overflow")))?;
            Ok([n, d, m])
        })
        .collect::<Result<_>>()?;
    Ok(SpectrumDoc { bound, entries })
}

/// Parses and validates a descriptor document.
pub fn load_descriptor(document: &str) -> Result<ManifoldDescriptor> {
    let doc: DescriptorDoc = toml::from_str(document).map_err(|e| Error::Schema(e.to_string()))?;
    let name = doc.name;
    let from_file = |fact: Fact| (fact, FactProvenance::new(Source::UserFile, name.clone()));
    let mut provenance = BTreeMap::new();

    let laplace = match doc.laplace {
        Some(s) => {
            provenance.extend([from_file(Fact::Laplace)]);
            SpectralData::Full(spectrum_in(s, "laplace")?)
        }
        None => SpectralData::Unavailable(format!("Laplace spectrum of {name} unavailable")),
    };
    let jacobi = match doc.jacobi {
        Some(s) => {
            provenance.extend([from_file(Fact::Jacobi)]);
            SpectralData::Full(spectrum_in(s, "jacobi")?)
        }
        None => SpectralData::Unavailable(format!("Jacobi spectrum of {name} unavailable")),
    };
    let s = match doc.s {
        Some(SDoc { kind, value }) => {
            provenance.extend([from_file(Fact::S)]);
            let value = rational_in(value, "s")?;
            match kind {
                SKind::Constant => SValue::Constant(value),
                SKind::Average => SValue::Average(value),
            }
        }
        None => SValue::Unknown,
    };
    let lambda1 = doc.lambda1.map(|p| rational_in(p, "lambda1")).transpose()?;
    for (fact, present) in [
        (Fact::Lambda1, lambda1.is_some()),
        (Fact::Index, doc.known_index.is_some()),
        (Fact::Nullity, doc.known_nullity.is_some()),
    ] {
        if present {
            provenance.extend([from_file(fact)]);
        }
    }
    let f = doc.flags;
    let descriptor = ManifoldDescriptor {
        name: name.clone(),
        dim: doc.dim,
        codim: doc.codim,
        flags: Flags {
            minimal: f.minimal,
            totally_geodesic: f.totally_geodesic,
            full: f.full,
            orientable: f.orientable,
            flat_normal_bundle: f.flat_normal_bundle,
            parallel_mean_curvature: f.parallel_mean_curvature,
            by_first_eigenfunctions: f.by_first_eigenfunctions,
        },
        laplace,
        jacobi,
        s,
        known_index: doc.known_index,
        known_nullity: doc.known_nullity,
        lambda1,
        provenance,
    };
    descriptor.validate()?;
    Ok(descriptor)
}

/// Serializes a descriptor; [`load_descriptor`] reads it back with the same
/// facts.
pub fn save_descriptor(d: &ManifoldDescriptor) -> Result<String> {
    let doc = DescriptorDoc {
        name: d.name.clone(),
        dim: d.dim,
        codim: d.codim,
        lambda1: d.lambda1.as_ref().map(|r| rational_out(r, "lambda1")).transpose()?,
        known_index: d.known_index,
        known_nullity: d.known_nullity,
        s: match &d.s {
            SValue::Constant(v) => Some(SDoc {
                kind: SKind::Constant,
                value: rational_out(v, "s")?,
            }),
            SValue::Average(v) => Some(SDoc {
                kind: SKind::Average,
                value: rational_out(v, "s")?,
            }),
            SValue::Unknown => None,
        },
        flags: FlagsDoc {
            minimal: d.flags.minimal,
            totally_geodesic: d.flags.totally_geodesic,
            full: d.flags.full,
            orientable: d.flags.orientable,
            flat_normal_bundle: d.flags.flat_normal_bundle,
            parallel_mean_curvature: d.flags.parallel_mean_curvature,
            by_first_eigenfunctions: d.flags.by_first_eigenfunctions,
        },
        laplace: d.laplace.full().map(|s| spectrum_out(s, "laplace")).transpose()?,
        jacobi: d.jacobi.full().map(|s| spectrum_out(s, "jacobi")).transpose()?,
    };
    toml::to_string(&doc).map_err(|e| Error::Schema(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{sphere, Builtin, Demand};
    use crate::rational::int;

    #[test]
    fn sphere_document_round_trips() {
        let s2 = sphere(2, 0, &int(6)).unwrap();
        let text = save_descriptor(&s2).unwrap();
        let back = load_descriptor(&text).unwrap();
        assert!(back.same_facts(&s2));
        assert!(back.provenance.values().all(|p| p.source == Source::UserFile));
    }

    #[test]
    fn builtins_survive_their_own_serialization() {
        for b in Builtin::listing() {
            let d = b.describe(&Demand::uniform(&int(5))).unwrap();
            let back = load_descriptor(&save_descriptor(&d).unwrap()).unwrap();
            assert!(back.same_facts(&d), "{b}");
        }
    }

    #[test]
    fn rejects_lambda1_above_dimension() {
        let doc = r#"
            name = "bad"
            dim = 2
            codim = 1
            lambda1 = [5, 1]
        "#;
        assert!(matches!(load_descriptor(doc), Err(Error::InvariantViolation(_))));
    }

    #[test]
    fn missing_jacobi_is_facts_only() {
        let doc = r#"
            name = "circle"
            dim = 1
            codim = 0
            [laplace]
            bound = [4, 1]
            entries = [[0, 1, 1], [1, 1, 2], [4, 1, 2]]
        "#;
        let d = load_descriptor(doc).unwrap();
        assert!(d.laplace.full().is_some());
        assert!(matches!(d.jacobi, SpectralData::Unavailable(_)));
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(load_descriptor("name = 3"), Err(Error::Schema(_))));
        let doc = r#"
            name = "x"
            dim = 1
            codim = 0
            [laplace]
            bound = [1, 0]
            entries = []
        "#;
        assert!(matches!(load_descriptor(doc), Err(Error::Schema(_))));
        let doc = r#"
            name = "x"
            dim = 1
            codim = 0
            [laplace]
            bound = [1, 1]
            entries = [[0, 1, 1], [3, 1, 1]]
        "#;
        assert!(matches!(load_descriptor(doc), Err(Error::Schema(_))));
    }
}
