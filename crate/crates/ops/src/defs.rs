//! JSON definition files for multicategories, their symmetries, and monoids.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use nabla_core::interval::{IntervalError, IntervalMorphism, Point};
use nabla_core::multicat::{validate_gsym, validate_multicat, FinMulticategory, GSymAction, MultiId, MulticatBuilder};
use nabla_core::segal::FinMonoid;
use nabla_core::{GroupOperad, Permutation};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DefError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: line {line}, column {column}: {msg}")]
    Syntax { path: String, line: usize, column: usize, msg: String },
    #[error("{path}: {field}: {msg}")]
    Field { path: String, field: String, msg: String },
    #[error("{path}: validation failed: {witness}")]
    Invalid { path: String, witness: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismEntry {
    pub name: String,
    pub inputs: Vec<String>,
    pub output: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompositionEntry {
    pub outer: String,
    pub inners: Vec<String>,
    pub result: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymmetryEntry {
    pub morphism: String,
    pub perm: Vec<usize>,
    pub result: String,
}

/// Composites with an identity on either side and the identity permutation are implied.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MulticatFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Defaults to the largest arity present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arity_bound: Option<usize>,
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismEntry>,
    pub identities: BTreeMap<String, String>,
    #[serde(default)]
    pub compositions: Vec<CompositionEntry>,
    #[serde(default)]
    pub symmetry: Vec<SymmetryEntry>,
}

impl MulticatFile {
    /// Drop everything of arity above `bound`.
    pub fn truncate(&self, bound: usize) -> MulticatFile {
        let arity: BTreeMap<&str, usize> = self.morphisms.iter().map(|m| (m.name.as_str(), m.inputs.len())).collect();
        let keep = |f: &str| arity.get(f).is_none_or(|&k| k <= bound);
        MulticatFile {
            arity_bound: Some(bound),
            morphisms: self.morphisms.iter().filter(|m| m.inputs.len() <= bound).cloned().collect(),
            compositions: self
                .compositions
                .iter()
                .filter(|c| keep(&c.outer) && keep(&c.result) && c.inners.iter().all(|g| keep(g)))
                .cloned()
                .collect(),
            symmetry: self.symmetry.iter().filter(|e| keep(&e.morphism) && keep(&e.result)).cloned().collect(),
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoidFile {
    pub elements: Vec<String>,
    pub unit: String,
    pub table: BTreeMap<String, BTreeMap<String, String>>,
}

/// A parsed and validated multicategory with its symmetry table, keyed by one-line permutations.
pub struct MulticatDef {
    pub multicat: Arc<FinMulticategory>,
    symmetry: BTreeMap<(MultiId, Vec<usize>), MultiId>,
    path: String,
}

impl MulticatDef {
    /// The action of `𝒢` through `𝒢 → 𝔖`, validated; every non-identity image must be listed.
    pub fn action<G: GroupOperad>(&self, g: &Arc<G>) -> Result<GSymAction<G>, DefError> {
        let m = &self.multicat;
        let mut missing = None;
        let a = GSymAction::from_fn(g, m, |f, x| {
            let perm = g.to_perm(x).one_line();
            if perm.iter().enumerate().all(|(i, &v)| v == i + 1) {
                return Some(f);
            }
            let h = self.symmetry.get(&(f, perm.clone())).copied();
            if h.is_none() && missing.is_none() {
                missing = Some(format!("{}^{perm:?}", m.label(f)));
            }
            h
        });
        if let Some(w) = missing {
            return Err(DefError::Field { path: self.path.clone(), field: "symmetry".into(), msg: format!("no entry for {w}") });
        }
        let r = validate_gsym(m, &a);
        match r.failure {
            None => Ok(a),
            Some(w) => Err(DefError::Invalid { path: self.path.clone(), witness: w }),
        }
    }
}

fn read(path: &Path) -> Result<String, DefError> {
    std::fs::read_to_string(path).map_err(|source| DefError::Io { path: path.display().to_string(), source })
}

fn decode<T: for<'de> Deserialize<'de>>(path: &str, text: &str) -> Result<T, DefError> {
    serde_json::from_str(text).map_err(|e| DefError::Syntax {
        path: path.into(),
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })
}

pub fn parse_multicat(path: &Path) -> Result<MulticatDef, DefError> {
    parse_multicat_upto(path, None)
}

/// As [`parse_multicat`], keeping only arities up to `bound` when the file declares more.
pub fn parse_multicat_upto(path: &Path, bound: Option<usize>) -> Result<MulticatDef, DefError> {
    let origin = path.display().to_string();
    let file: MulticatFile = decode(&origin, &read(path)?)?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let declared = file.arity_bound.unwrap_or_else(|| file.morphisms.iter().map(|m| m.inputs.len()).max().unwrap_or(0));
    match bound {
        Some(b) if b < declared => multicat_from_file(&origin, &file.truncate(b), &name),
        _ => multicat_from_file(&origin, &file, &name),
    }
}

/// Parse from text; `origin` names the source in errors, `default_name` is used when the file has no name.
pub fn multicat_from_str(origin: &str, text: &str, default_name: &str) -> Result<MulticatDef, DefError> {
    let file: MulticatFile = decode(origin, text)?;
    multicat_from_file(origin, &file, default_name)
}

pub fn multicat_from_file(origin: &str, file: &MulticatFile, default_name: &str) -> Result<MulticatDef, DefError> {
    let field = |field: String, msg: String| DefError::Field { path: origin.into(), field, msg };
    let bound = file.arity_bound.unwrap_or_else(|| file.morphisms.iter().map(|m| m.inputs.len()).max().unwrap_or(0));
    let mut b = MulticatBuilder::new(file.name.clone().unwrap_or_else(|| default_name.into()), bound);
    let mut objects = BTreeMap::new();
    for (i, o) in file.objects.iter().enumerate() {
        if objects.insert(o.as_str(), b.add_object(o.as_str())).is_some() {
            return Err(field(format!("objects[{i}]"), format!("duplicate object {o:?}")));
        }
    }
    let obj = |at: String, o: &str| objects.get(o).copied().ok_or_else(|| field(at, format!("unknown object {o:?}")));
    let mut mors = BTreeMap::new();
    let mut inputs: Vec<usize> = Vec::new();
    for (i, m) in file.morphisms.iter().enumerate() {
        let ins = m
            .inputs
            .iter()
            .enumerate()
            .map(|(j, o)| obj(format!("morphisms[{i}].inputs[{j}]"), o))
            .collect::<Result<Vec<_>, _>>()?;
        let out = obj(format!("morphisms[{i}].output"), &m.output)?;
        if ins.len() > bound {
            return Err(field(format!("morphisms[{i}].inputs"), format!("arity {} exceeds the bound {bound}", ins.len())));
        }
        let id = b.add_morphism(&ins, out, m.name.as_str());
        inputs.push(ins.len());
        if mors.insert(m.name.as_str(), id).is_some() {
            return Err(field(format!("morphisms[{i}].name"), format!("duplicate morphism {:?}", m.name)));
        }
    }
    let mor = |at: String, f: &str| mors.get(f).copied().ok_or_else(|| field(at, format!("unknown morphism {f:?}")));
    let mut identity = vec![None; file.objects.len()];
    for (o, f) in &file.identities {
        let oi = obj(format!("identities.{o}"), o)?;
        let fi = mor(format!("identities.{o}"), f)?;
        b.set_identity(oi, fi);
        identity[oi] = Some(fi);
    }
    if let Some(o) = identity.iter().position(Option::is_none) {
        return Err(field("identities".into(), format!("no identity for {:?}", file.objects[o])));
    }
    let ids: Vec<MultiId> = identity.into_iter().flatten().collect();
    let mut table: BTreeMap<(MultiId, Vec<MultiId>), MultiId> = BTreeMap::new();
    for (i, c) in file.compositions.iter().enumerate() {
        let outer = mor(format!("compositions[{i}].outer"), &c.outer)?;
        let inners = c
            .inners
            .iter()
            .enumerate()
            .map(|(j, g)| mor(format!("compositions[{i}].inners[{j}]"), g))
            .collect::<Result<Vec<_>, _>>()?;
        let result = mor(format!("compositions[{i}].result"), &c.result)?;
        if let Some(prev) = table.insert((outer, inners), result) {
            if prev != result {
                return Err(field(format!("compositions[{i}]"), "conflicts with an earlier entry".into()));
            }
        }
    }
    let mut missing = None;
    let multicat = b
        .build(|f, gs| {
            if let Some(&h) = table.get(&(f, gs.to_vec())) {
                return Some(h);
            }
            if ids.contains(&f) {
                return Some(gs[0]);
            }
            if gs.iter().all(|g| ids.contains(g)) {
                return Some(f);
            }
            missing.get_or_insert((f, gs.to_vec()));
            None
        })
        .map_err(|e| match &missing {
            Some((f, gs)) => {
                let names: Vec<&str> = gs.iter().map(|&g| file.morphisms[g].name.as_str()).collect();
                field("compositions".into(), format!("no entry for {}({})", file.morphisms[*f].name, names.join(", ")))
            }
            None => DefError::Invalid { path: origin.into(), witness: e.to_string() },
        })?;
    let r = validate_multicat(&multicat);
    if let Some(w) = r.failure {
        return Err(DefError::Invalid { path: origin.into(), witness: w });
    }
    let mut symmetry = BTreeMap::new();
    for (i, s) in file.symmetry.iter().enumerate() {
        let f = mor(format!("symmetry[{i}].morphism"), &s.morphism)?;
        let h = mor(format!("symmetry[{i}].result"), &s.result)?;
        if Permutation::from_one_line(&s.perm).is_none() || s.perm.len() != inputs[f] {
            return Err(field(format!("symmetry[{i}].perm"), format!("{:?} is not a permutation of arity {}", s.perm, inputs[f])));
        }
        symmetry.insert((f, s.perm.clone()), h);
    }
    Ok(MulticatDef { multicat: Arc::new(multicat), symmetry, path: origin.into() })
}

/// The definition file of a multicategory with an action, listing every non-unit composite and
/// every non-identity symmetry.
pub fn multicat_to_file<G: GroupOperad>(m: &FinMulticategory, a: Option<&GSymAction<G>>) -> MulticatFile {
    let ids: Vec<MultiId> = (0..m.object_count()).map(|o| m.identity(o)).collect();
    let label = |f: MultiId| m.label(f).to_string();
    let compositions = m
        .composition_entries()
        .filter(|((f, gs), _)| !ids.contains(f) && !gs.iter().all(|g| ids.contains(g)))
        .map(|((f, gs), &h)| CompositionEntry { outer: label(*f), inners: gs.iter().map(|&g| label(g)).collect(), result: label(h) })
        .collect();
    let symmetry = a
        .map(|a| {
            let g = a.operad();
            a.entries()
                .map(|((f, x), &h)| SymmetryEntry { morphism: label(*f), perm: g.to_perm(x).one_line(), result: label(h) })
                .filter(|s| s.perm.iter().enumerate().any(|(i, &v)| v != i + 1))
                .collect()
        })
        .unwrap_or_default();
    MulticatFile {
        name: Some(m.name().to_string()),
        arity_bound: Some(m.arity_bound()),
        objects: (0..m.object_count()).map(|o| m.object_label(o).to_string()).collect(),
        morphisms: m
            .morphisms()
            .map(|f| MorphismEntry {
                name: label(f),
                inputs: m.inputs(f).iter().map(|&o| m.object_label(o).to_string()).collect(),
                output: m.object_label(m.output(f)).to_string(),
            })
            .collect(),
        identities: (0..m.object_count()).map(|o| (m.object_label(o).to_string(), label(ids[o]))).collect(),
        compositions,
        symmetry,
    }
}

pub fn parse_monoid(path: &Path) -> Result<FinMonoid, DefError> {
    monoid_from_str(&path.display().to_string(), &read(path)?)
}

pub fn monoid_from_str(origin: &str, text: &str) -> Result<FinMonoid, DefError> {
    let file: MonoidFile = decode(origin, text)?;
    let field = |field: String, msg: String| DefError::Field { path: origin.into(), field, msg };
    let index: BTreeMap<&str, usize> = file.elements.iter().enumerate().map(|(i, x)| (x.as_str(), i)).collect();
    if index.len() != file.elements.len() {
        return Err(field("elements".into(), "duplicate element".into()));
    }
    let elt = |at: String, x: &str| index.get(x).copied().ok_or_else(|| field(at, format!("unknown element {x:?}")));
    let unit = elt("unit".into(), &file.unit)?;
    let mut table = vec![vec![usize::MAX; file.elements.len()]; file.elements.len()];
    for (x, row) in &file.table {
        let i = elt(format!("table.{x}"), x)?;
        for (y, xy) in row {
            table[i][elt(format!("table.{x}.{y}"), y)?] = elt(format!("table.{x}.{y}"), xy)?;
        }
    }
    for (i, row) in table.iter().enumerate() {
        if let Some(j) = row.iter().position(|&v| v == usize::MAX) {
            return Err(field(format!("table.{}.{}", file.elements[i], file.elements[j]), "missing product".into()));
        }
    }
    FinMonoid::new(file.elements.clone(), unit, table).map_err(|e| DefError::Invalid { path: origin.into(), witness: e.to_string() })
}

/// `φ` as the array `[φ(1), …, φ(m)]` of `"-inf"`, `"+inf"` and integers.
pub fn interval_to_json(phi: &IntervalMorphism) -> serde_json::Value {
    let point = |p: Point| match p {
        Point::NegInf => serde_json::Value::from("-inf"),
        Point::PosInf => serde_json::Value::from("+inf"),
        Point::Fin(j) => serde_json::Value::from(j),
    };
    phi.values().into_iter().map(point).collect()
}

#[derive(Debug, Error)]
pub enum IntervalJsonError {
    #[error("expected an array of \"-inf\", \"+inf\" or positive integers")]
    Shape,
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

/// Inverse of [`interval_to_json`]; the codomain is not recoverable from the values alone.
pub fn interval_from_json(v: &serde_json::Value, cod: usize) -> Result<IntervalMorphism, IntervalJsonError> {
    let arr = v.as_array().ok_or(IntervalJsonError::Shape)?;
    let points = arr
        .iter()
        .map(|x| match (x.as_str(), x.as_u64()) {
            (Some("-inf"), _) => Ok(Point::NegInf),
            (Some("+inf"), _) => Ok(Point::PosInf),
            (_, Some(j)) if j > 0 => Ok(Point::Fin(j as usize)),
            _ => Err(IntervalJsonError::Shape),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IntervalMorphism::new(points.len(), cod, &points)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nabla_core::multicat::samples::{involution, terminal, two_object};
    use nabla_core::Symmetric;

    #[test]
    fn samples_survive_a_round_trip() {
        let g = Arc::new(Symmetric::new(3));
        for m in [terminal(3), two_object(3, true), involution(3)] {
            let a = GSymAction::positional(&g, &m);
            let text = serde_json::to_string_pretty(&multicat_to_file(&m, Some(&a))).unwrap();
            let def = multicat_from_str("mem", &text, "x").unwrap();
            let back = &def.multicat;
            assert_eq!(back.name(), m.name());
            assert_eq!(back.morphism_count(), m.morphism_count());
            let m_entries: Vec<_> = m.composition_entries().collect();
            let b_entries: Vec<_> = back.composition_entries().collect();
            assert_eq!(m_entries, b_entries);
            let b = def.action(&g).unwrap();
            assert!(a.entries().eq(b.entries()));
        }
    }

    #[test]
    fn truncation_drops_high_arities() {
        let g = Arc::new(Symmetric::new(2));
        let m = two_object(3, true);
        let file = multicat_to_file(&m, Some(&GSymAction::positional(&Arc::new(Symmetric::new(3)), &m)));
        let def = multicat_from_file("mem", &file.truncate(2), "x").unwrap();
        assert_eq!(def.multicat.arity_bound(), 2);
        assert_eq!(def.multicat.morphism_count(), two_object(2, true).morphism_count());
        assert!(def.action(&g).is_ok());
    }

    #[test]
    fn unknown_object_names_the_field() {
        let text = r#"{"objects":["a"],"morphisms":[{"name":"id","inputs":["a"],"output":"c"}],"identities":{"a":"id"}}"#;
        let e = multicat_from_str("bad.json", text, "bad").err().unwrap().to_string();
        assert!(e.contains("morphisms[0].output") && e.contains("\"c\""), "{e}");
    }

    #[test]
    fn syntax_errors_carry_the_line() {
        let e = multicat_from_str("bad.json", "{\n\"objects\": [,]}", "bad").err().unwrap();
        assert!(matches!(e, DefError::Syntax { line: 2, .. }), "{e}");
    }

    #[test]
    fn monoids() {
        let text = r#"{"elements":["e","a","b"],"unit":"e",
            "table":{"e":{"e":"e","a":"a","b":"b"},"a":{"e":"a","a":"a","b":"a"},"b":{"e":"b","a":"b","b":"b"}}}"#;
        let m = monoid_from_str("lz", text).unwrap();
        assert_eq!(m.noncommuting_pair(), FinMonoid::left_zero().noncommuting_pair());
        let bad = text.replace(r#""a":{"e":"a","a":"a","b":"a"}"#, r#""a":{"e":"a","a":"b","b":"a"}"#);
        assert!(matches!(monoid_from_str("bad", &bad), Err(DefError::Invalid { .. })));
    }

    #[test]
    fn interval_json() {
        for phi in IntervalMorphism::enumerate_upto(3) {
            let v = interval_to_json(&phi);
            assert_eq!(interval_from_json(&v, phi.cod()).unwrap(), phi);
        }
        let rho = IntervalMorphism::rho(2, 1);
        assert_eq!(interval_to_json(&rho).to_string(), r#"[1,"+inf"]"#);
    }
}
