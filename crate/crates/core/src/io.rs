//! JSON workspaces: algebras, modules, complexes, maps and chain maps keyed
//! by string ids.
//!
//! Output is canonical: keys sorted, two-space indentation, integer leaves
//! only, trailing newline. Loading rejects unknown fields, reports schema
//! errors with a JSON pointer, and validates every object.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{Algebra, AlgebraRef};
use crate::complex::{ChainComplex, ChainMap, Homotopy};
use crate::error::{Error, Result};
use crate::linalg::FpMatrix;
use crate::module::{ModuleMap, ModuleRep};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    /// Row-major residues.
    pub entries: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraJson {
    pub p: u32,
    pub dim: usize,
    pub labels: Vec<String>,
    /// `c[i][j][k]`: coefficient of `e_k` in `e_i e_j`.
    pub c: Vec<Vec<Vec<u32>>>,
    pub unit: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleJson {
    pub algebra_id: String,
    pub mdim: usize,
    pub action: Vec<MatrixJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapJson {
    pub src: String,
    pub dst: String,
    pub matrix: MatrixJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    pub algebra_id: String,
    pub lo: i64,
    pub hi: i64,
    pub terms: Vec<ModuleJson>,
    /// `d_{lo+1}, ..., d_{hi}`.
    pub diffs: Vec<MatrixJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainMapJson {
    pub src: String,
    pub dst: String,
    /// One component per degree of the source window.
    pub components: Vec<MatrixJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    pub seed: u64,
    pub tool_version: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceFile {
    pub algebras: BTreeMap<String, AlgebraJson>,
    pub modules: BTreeMap<String, ModuleJson>,
    pub complexes: BTreeMap<String, ComplexJson>,
    pub maps: BTreeMap<String, MapJson>,
    pub chain_maps: BTreeMap<String, ChainMapJson>,
    pub metadata: Metadata,
}

pub fn matrix_to_json(m: &FpMatrix) -> MatrixJson {
    MatrixJson {
        rows: m.rows(),
        cols: m.cols(),
        entries: m.entries().to_vec(),
    }
}

fn invalid(pointer: &str, message: impl ToString) -> Error {
    Error::Invalid {
        pointer: pointer.to_string(),
        message: message.to_string(),
    }
}

pub fn matrix_from_json(p: u32, m: &MatrixJson, pointer: &str) -> Result<FpMatrix> {
    if let Some(bad) = m.entries.iter().find(|&&e| e >= p) {
        return Err(invalid(pointer, format!("entry {bad} is not a residue mod {p}")));
    }
    FpMatrix::new(p, m.rows, m.cols, m.entries.clone()).map_err(|e| invalid(pointer, e))
}

pub fn algebra_to_json(a: &Algebra) -> AlgebraJson {
    AlgebraJson {
        p: a.p(),
        dim: a.dim(),
        labels: a.labels().to_vec(),
        c: a.table(),
        unit: a.unit().to_vec(),
    }
}

pub fn algebra_from_json(a: &AlgebraJson, pointer: &str) -> Result<Algebra> {
    let residue = |v: u32| {
        if v < a.p {
            Ok(i64::from(v))
        } else {
            Err(invalid(pointer, format!("entry {v} is not a residue mod {}", a.p)))
        }
    };
    if a.c.len() != a.dim {
        return Err(invalid(pointer, format!("dim {} but {} structure-constant slices", a.dim, a.c.len())));
    }
    let table = a
        .c
        .iter()
        .map(|row| {
            row.iter()
                .map(|col| col.iter().map(|&v| residue(v)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let unit = a.unit.iter().map(|&v| residue(v)).collect::<Result<Vec<_>>>()?;
    Algebra::new(a.p, a.labels.clone(), &table, &unit).map_err(|e| invalid(pointer, e))
}

pub fn module_to_json(m: &ModuleRep, algebra_id: &str) -> ModuleJson {
    ModuleJson {
        algebra_id: algebra_id.to_string(),
        mdim: m.dim(),
        action: m.action().iter().map(matrix_to_json).collect(),
    }
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, id: &str, pointer: &str) -> Result<&'a T> {
    map.get(id)
        .ok_or_else(|| invalid(pointer, format!("unknown id `{id}`")))
}

pub fn module_from_json(m: &ModuleJson, algebras: &BTreeMap<String, AlgebraRef>, pointer: &str) -> Result<ModuleRep> {
    let alg = lookup(algebras, &m.algebra_id, &format!("{pointer}/algebra_id"))?;
    let action = m
        .action
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let at = format!("{pointer}/action/{i}");
            let mat = matrix_from_json(alg.p(), a, &at)?;
            if mat.rows() != m.mdim || mat.cols() != m.mdim {
                return Err(invalid(&at, format!("expected a {0}x{0} matrix", m.mdim)));
            }
            Ok(mat)
        })
        .collect::<Result<Vec<_>>>()?;
    let module = ModuleRep::new(Arc::clone(alg), action).map_err(|e| invalid(pointer, e))?;
    if module.dim() != m.mdim {
        return Err(invalid(pointer, "mdim disagrees with the action matrices"));
    }
    Ok(module)
}

pub fn complex_to_json(x: &ChainComplex, algebra_id: &str) -> ComplexJson {
    ComplexJson {
        algebra_id: algebra_id.to_string(),
        lo: x.lo(),
        hi: x.hi(),
        terms: x.terms().iter().map(|t| module_to_json(t, algebra_id)).collect(),
        diffs: x.diffs().iter().map(matrix_to_json).collect(),
    }
}

pub fn complex_from_json(
    c: &ComplexJson,
    algebras: &BTreeMap<String, AlgebraRef>,
    pointer: &str,
) -> Result<ChainComplex> {
    let alg = lookup(algebras, &c.algebra_id, &format!("{pointer}/algebra_id"))?;
    if c.hi - c.lo + 1 != c.terms.len() as i64 {
        return Err(invalid(pointer, format!("window [{}, {}] needs {} terms", c.lo, c.hi, c.hi - c.lo + 1)));
    }
    let terms = c
        .terms
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let at = format!("{pointer}/terms/{i}");
            if t.algebra_id != c.algebra_id {
                return Err(invalid(&at, "term over a different algebra"));
            }
            module_from_json(t, algebras, &at)
        })
        .collect::<Result<Vec<_>>>()?;
    let diffs = c
        .diffs
        .iter()
        .enumerate()
        .map(|(i, d)| matrix_from_json(alg.p(), d, &format!("{pointer}/diffs/{i}")))
        .collect::<Result<Vec<_>>>()?;
    ChainComplex::new(Arc::clone(alg), c.lo, terms, diffs).map_err(|e| invalid(pointer, e))
}

pub fn matrix_value(m: &FpMatrix) -> Value {
    serde_json::to_value(matrix_to_json(m)).expect("matrices serialize")
}

pub fn module_value(m: &ModuleRep, algebra_id: &str) -> Value {
    serde_json::to_value(module_to_json(m, algebra_id)).expect("modules serialize")
}

pub fn complex_value(x: &ChainComplex, algebra_id: &str) -> Value {
    serde_json::to_value(complex_to_json(x, algebra_id)).expect("complexes serialize")
}

/// A module map with both modules inlined.
pub fn module_map_value(f: &ModuleMap, algebra_id: &str) -> Value {
    json!({
        "src": module_value(f.src(), algebra_id),
        "dst": module_value(f.dst(), algebra_id),
        "matrix": matrix_value(f.matrix()),
    })
}

/// A chain map with both complexes inlined.
pub fn chain_map_value(f: &ChainMap, algebra_id: &str) -> Value {
    json!({
        "src": complex_value(f.src(), algebra_id),
        "dst": complex_value(f.dst(), algebra_id),
        "components": f.components().iter().map(matrix_value).collect::<Vec<_>>(),
    })
}

pub fn homotopy_value(s: &Homotopy) -> Value {
    json!({ "components": s.components().iter().map(matrix_value).collect::<Vec<_>>() })
}

/// Canonical text of a JSON value: sorted keys, pretty, trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    // serde_json's map is ordered by key unless `preserve_order` is enabled
    let mut s = serde_json::to_string_pretty(&sort_keys(v)).expect("values serialize");
    s.push('\n');
    s
}

fn sort_keys(v: &Value) -> Value {
    match v {
        Value::Object(m) => {
            let sorted: BTreeMap<String, Value> = m.iter().map(|(k, v)| (k.clone(), sort_keys(v))).collect();
            Value::Object(sorted.into_iter().collect())
        }
        Value::Array(a) => Value::Array(a.iter().map(sort_keys).collect()),
        other => other.clone(),
    }
}

/// Parses arbitrary JSON text and re-emits it canonically.
pub fn canonicalize(text: &str) -> Result<String> {
    let v: Value = serde_json::from_str(text)?;
    Ok(to_canonical_string(&v))
}

fn pointer_of(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    out
}

/// A validated workspace. The file form is kept verbatim so saving is
/// lossless; the resolved objects are built once on load or insert.
#[derive(Clone, Debug)]
pub struct Workspace {
    file: WorkspaceFile,
    algebras: BTreeMap<String, AlgebraRef>,
    modules: BTreeMap<String, ModuleRep>,
    complexes: BTreeMap<String, ChainComplex>,
    maps: BTreeMap<String, ModuleMap>,
    chain_maps: BTreeMap<String, ChainMap>,
}

impl Workspace {
    pub fn new(seed: u64) -> Self {
        Self {
            file: WorkspaceFile {
                algebras: BTreeMap::new(),
                modules: BTreeMap::new(),
                complexes: BTreeMap::new(),
                maps: BTreeMap::new(),
                chain_maps: BTreeMap::new(),
                metadata: Metadata {
                    seed,
                    tool_version: TOOL_VERSION.to_string(),
                },
            },
            algebras: BTreeMap::new(),
            modules: BTreeMap::new(),
            complexes: BTreeMap::new(),
            maps: BTreeMap::new(),
            chain_maps: BTreeMap::new(),
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let file: WorkspaceFile = serde_path_to_error::deserialize(de).map_err(|e| Error::Schema {
            pointer: pointer_of(e.path()),
            message: e.inner().to_string(),
        })?;
        Self::from_file(file)
    }

    pub fn from_file(file: WorkspaceFile) -> Result<Self> {
        let mut algebras = BTreeMap::new();
        for (id, a) in &file.algebras {
            let alg = algebra_from_json(a, &format!("/algebras/{id}"))?;
            algebras.insert(id.clone(), Arc::new(alg));
        }
        let mut modules = BTreeMap::new();
        for (id, m) in &file.modules {
            modules.insert(id.clone(), module_from_json(m, &algebras, &format!("/modules/{id}"))?);
        }
        let mut complexes = BTreeMap::new();
        for (id, c) in &file.complexes {
            complexes.insert(id.clone(), complex_from_json(c, &algebras, &format!("/complexes/{id}"))?);
        }
        let mut maps = BTreeMap::new();
        for (id, m) in &file.maps {
            let at = format!("/maps/{id}");
            let src = lookup(&modules, &m.src, &format!("{at}/src"))?;
            let dst = lookup(&modules, &m.dst, &format!("{at}/dst"))?;
            let mat = matrix_from_json(src.p(), &m.matrix, &format!("{at}/matrix"))?;
            let f = ModuleMap::new(src.clone(), dst.clone(), mat).map_err(|e| invalid(&at, e))?;
            maps.insert(id.clone(), f);
        }
        let mut chain_maps = BTreeMap::new();
        for (id, m) in &file.chain_maps {
            let at = format!("/chain_maps/{id}");
            let src: &ChainComplex = lookup(&complexes, &m.src, &format!("{at}/src"))?;
            let dst: &ChainComplex = lookup(&complexes, &m.dst, &format!("{at}/dst"))?;
            let comps = m
                .components
                .iter()
                .enumerate()
                .map(|(i, c)| matrix_from_json(src.p(), c, &format!("{at}/components/{i}")))
                .collect::<Result<Vec<_>>>()?;
            let f = ChainMap::new(src.clone(), dst.clone(), comps).map_err(|e| invalid(&at, e))?;
            chain_maps.insert(id.clone(), f);
        }
        Ok(Self {
            file,
            algebras,
            modules,
            complexes,
            maps,
            chain_maps,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json_string(&self) -> String {
        to_canonical_string(&serde_json::to_value(&self.file).expect("workspaces serialize"))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json_string())?;
        Ok(())
    }

    pub fn file(&self) -> &WorkspaceFile {
        &self.file
    }
    pub fn metadata(&self) -> &Metadata {
        &self.file.metadata
    }

    pub fn algebra(&self, id: &str) -> Result<&AlgebraRef> {
        self.algebras.get(id).ok_or_else(|| Error::UnknownId(id.to_string()))
    }
    pub fn module(&self, id: &str) -> Result<&ModuleRep> {
        self.modules.get(id).ok_or_else(|| Error::UnknownId(id.to_string()))
    }
    pub fn complex(&self, id: &str) -> Result<&ChainComplex> {
        self.complexes.get(id).ok_or_else(|| Error::UnknownId(id.to_string()))
    }
    pub fn map(&self, id: &str) -> Result<&ModuleMap> {
        self.maps.get(id).ok_or_else(|| Error::UnknownId(id.to_string()))
    }
    pub fn chain_map(&self, id: &str) -> Result<&ChainMap> {
        self.chain_maps.get(id).ok_or_else(|| Error::UnknownId(id.to_string()))
    }

    pub fn module_algebra_id(&self, id: &str) -> Result<&str> {
        Ok(&self.file.modules.get(id).ok_or_else(|| Error::UnknownId(id.to_string()))?.algebra_id)
    }
    pub fn complex_algebra_id(&self, id: &str) -> Result<&str> {
        Ok(&self.file.complexes.get(id).ok_or_else(|| Error::UnknownId(id.to_string()))?.algebra_id)
    }

    pub fn algebra_ids(&self) -> impl Iterator<Item = &String> {
        self.file.algebras.keys()
    }
    pub fn module_ids(&self) -> impl Iterator<Item = &String> {
        self.file.modules.keys()
    }
    pub fn complex_ids(&self) -> impl Iterator<Item = &String> {
        self.file.complexes.keys()
    }
    pub fn map_ids(&self) -> impl Iterator<Item = &String> {
        self.file.maps.keys()
    }
    pub fn chain_map_ids(&self) -> impl Iterator<Item = &String> {
        self.file.chain_maps.keys()
    }

    pub fn insert_algebra(&mut self, id: &str, a: &Algebra) {
        self.file.algebras.insert(id.to_string(), algebra_to_json(a));
        self.algebras.insert(id.to_string(), Arc::new(a.clone()));
    }

    fn algebra_id_for(&self, a: &AlgebraRef) -> Result<String> {
        self.algebras
            .iter()
            .find(|(_, b)| *b == a)
            .map(|(id, _)| id.clone())
            .ok_or_else(|| Error::InvalidInput("object over an algebra missing from the workspace".into()))
    }

    pub fn insert_module(&mut self, id: &str, m: &ModuleRep) -> Result<()> {
        let alg_id = self.algebra_id_for(m.algebra())?;
        self.file.modules.insert(id.to_string(), module_to_json(m, &alg_id));
        self.modules.insert(id.to_string(), m.clone());
        Ok(())
    }

    pub fn insert_complex(&mut self, id: &str, x: &ChainComplex) -> Result<()> {
        let alg_id = self.algebra_id_for(x.algebra())?;
        self.file.complexes.insert(id.to_string(), complex_to_json(x, &alg_id));
        self.complexes.insert(id.to_string(), x.clone());
        Ok(())
    }

    /// Inserts a map between two modules already present under the given ids.
    pub fn insert_map(&mut self, id: &str, src: &str, dst: &str, f: &ModuleMap) -> Result<()> {
        if self.module(src)? != f.src() || self.module(dst)? != f.dst() {
            return Err(Error::InvalidInput(format!("map `{id}` does not match its endpoints")));
        }
        self.file.maps.insert(
            id.to_string(),
            MapJson {
                src: src.to_string(),
                dst: dst.to_string(),
                matrix: matrix_to_json(f.matrix()),
            },
        );
        self.maps.insert(id.to_string(), f.clone());
        Ok(())
    }

    pub fn insert_chain_map(&mut self, id: &str, src: &str, dst: &str, f: &ChainMap) -> Result<()> {
        if self.complex(src)? != f.src() || self.complex(dst)? != f.dst() {
            return Err(Error::InvalidInput(format!("chain map `{id}` does not match its endpoints")));
        }
        self.file.chain_maps.insert(
            id.to_string(),
            ChainMapJson {
                src: src.to_string(),
                dst: dst.to_string(),
                components: f.components().iter().map(matrix_to_json).collect(),
            },
        );
        self.chain_maps.insert(id.to_string(), f.clone());
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Workspace {
        let mut w = Workspace::new(3);
        let a = Algebra::quotient_poly(2, &[0, 0, 1]).unwrap();
        w.insert_algebra("f2x2", &a);
        let a = Arc::clone(w.algebra("f2x2").unwrap());
        let r = ModuleRep::regular(Arc::clone(&a));
        w.insert_module("R", &r).unwrap();
        w.insert_complex("disk_R", &ChainComplex::disk(&r, 0)).unwrap();
        w.insert_map("id_R", "R", "R", &ModuleMap::identity(&r)).unwrap();
        let d = w.complex("disk_R").unwrap().clone();
        w.insert_chain_map("id_disk", "disk_R", "disk_R", &ChainMap::identity(&d)).unwrap();
        w
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let text = sample().to_json_string();
        let back = Workspace::from_json_str(&text).unwrap();
        assert_eq!(back.to_json_string(), text);
        assert_eq!(canonicalize(&text).unwrap(), text);
    }

    #[test]
    fn keys_are_sorted() {
        let text = sample().to_json_string();
        let a = text.find("\"algebras\"").unwrap();
        let c = text.find("\"chain_maps\"").unwrap();
        let m = text.find("\"metadata\"").unwrap();
        assert!(a < c && c < m);
    }

    #[test]
    fn schema_errors_carry_a_pointer() {
        let text = sample().to_json_string().replace("\"mdim\": 2", "\"mdim\": 2.5");
        match Workspace::from_json_str(&text) {
            Err(Error::Schema { pointer, .. }) => assert!(pointer.starts_with("/complexes/disk_R/terms/0/mdim") || pointer.starts_with("/modules/R/mdim"), "{pointer}"),
            other => panic!("expected a schema error, got {other:?}"),
        }
        let text = sample().to_json_string().replace("\"seed\": 3", "\"seed\": 3, \"extra\": 1");
        assert!(matches!(Workspace::from_json_str(&text), Err(Error::Schema { .. })));
    }

    #[test]
    fn bad_complex_names_the_degree() {
        let mut v: Value = serde_json::from_str(&sample().to_json_string()).unwrap();
        // x * identity is not d∘d-safe once a third term is added
        let c = v["complexes"]["disk_R"].as_object_mut().unwrap();
        c["hi"] = json!(2);
        let term = c["terms"][0].clone();
        c["terms"].as_array_mut().unwrap().push(term);
        c["diffs"].as_array_mut().unwrap().push(json!({"rows": 2, "cols": 2, "entries": [1, 0, 0, 1]}));
        v["chain_maps"] = json!({});
        let err = Workspace::from_json_str(&v.to_string()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("/complexes/disk_R") && msg.contains("degree 2"), "{msg}");
    }

    #[test]
    fn unreduced_entries_are_rejected() {
        let text = sample().to_json_string().replacen("\"entries\": [\n          1", "\"entries\": [\n          3", 1);
        assert!(Workspace::from_json_str(&text).is_err());
    }
}
