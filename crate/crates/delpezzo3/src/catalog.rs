//! Catalog entries: JSON loading, parameter expansion and realization as towers.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blowup::{eliminate, BlowupError, ChainPoint, ClusterSpec, Level, Residual, Stage, Tower};
use crate::dualgraph::{parse_symbol, GraphError, SingSymbol};
use crate::expr::{interpolate, Env, Expr, ExprError};
use crate::lattice::{BaseSurface, CurveKind, DivClass, SymbolicCurve};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "median")]
    Median,
    #[serde(rename = "tet-big")]
    TetBig,
    #[serde(rename = "tet-nonbig")]
    TetNonbig,
    #[serde(rename = "tet-trivial")]
    TetTrivial,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Median, Family::TetBig, Family::TetNonbig, Family::TetTrivial];

    pub fn name(self) -> &'static str {
        match self {
            Family::Median => "median",
            Family::TetBig => "tet-big",
            Family::TetNonbig => "tet-nonbig",
            Family::TetTrivial => "tet-trivial",
        }
    }

    pub fn from_name(s: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == s)
    }

    pub fn is_tetrad(self) -> bool {
        self != Family::Median
    }

    fn file_name(self) -> String {
        format!("{}.json", self.name())
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("{path}: {msg}")]
    Schema { path: String, msg: String },
    #[error("duplicate type id {0}")]
    Duplicate(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{ty}: {source}")]
    Expr { ty: String, source: ExprError },
    #[error("{ty}: {msg}")]
    Template { ty: String, msg: String },
    #[error("{ty}: {source}")]
    Symbol { ty: String, source: GraphError },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    fn expr(&self) -> Result<Expr, ExprError> {
        match self {
            Num::Int(n) => Ok(Expr::Num(*n)),
            Num::Text(s) => Expr::parse(s),
        }
    }

    fn eval(&self, env: &Env) -> Result<i64, ExprError> {
        self.expr()?.eval(env)
    }
}

impl Default for Num {
    fn default() -> Self {
        Num::Int(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseJson {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
}

impl BaseJson {
    pub fn surface(&self) -> Option<BaseSurface> {
        match (self.kind.as_str(), self.n) {
            ("P2", None) => Some(BaseSurface::ProjectivePlane),
            ("F", Some(n)) => Some(BaseSurface::Hirzebruch(n)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentJson {
    pub id: String,
    pub class: ClassJson,
    pub kind: CurveKind,
    pub coeff: i64,
}

/// Branch data of one curve along a chain: a prefix length, or an explicit vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BranchJson {
    Explicit(Vec<u32>),
    Prefix(Num),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClusterJson {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub locus: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub avoid: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at: Option<String>,
    #[serde(default)]
    pub length: Num,
    /// Number of copies at distinct nominal points; `{i}` in ids is the copy index.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<Num>,
    #[serde(default)]
    pub branch: BTreeMap<String, BranchJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResidualJson {
    pub curves: [String; 2],
    #[serde(default)]
    pub mult: Num,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<Num>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsJson {
    pub names: Vec<String>,
    pub domain: Vec<Vec<i64>>,
}

/// One catalog entry, possibly parameterized.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeSpec {
    pub id: String,
    #[serde(skip)]
    pub family: Option<Family>,
    pub base: BaseJson,
    pub components: Vec<ComponentJson>,
    #[serde(rename = "clustersX", default)]
    pub clusters_x: Vec<ClusterJson>,
    #[serde(rename = "clustersZ", default)]
    pub clusters_z: Vec<ClusterJson>,
    #[serde(default)]
    pub residual: Vec<ResidualJson>,
    #[serde(default)]
    pub params: Vec<ParamsJson>,
    #[serde(rename = "expectedEM")]
    pub expected_em: String,
    #[serde(rename = "expectedEZ", default, skip_serializing_if = "Option::is_none")]
    pub expected_ez: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogFile {
    pub version: u32,
    pub family: Family,
    pub types: Vec<TypeSpec>,
}

/// A type with every parameter fixed.
#[derive(Debug, Clone)]
pub struct ConcreteType {
    pub id: String,
    pub family: Family,
    pub spec_id: String,
    pub env: Env,
    pub base: BaseSurface,
    pub curves: Vec<SymbolicCurve>,
    pub clusters: Vec<ClusterSpec>,
    pub residual: Vec<Residual>,
    pub expected_em: SingSymbol,
    pub expected_ez: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Catalog {
    pub types: Vec<TypeSpec>,
}

pub const CATALOG_ENV: &str = "DELPEZZO3_CATALOG";

const BUILTIN: [(Family, &str); 4] = [
    (Family::Median, include_str!("../../../catalog/median.json")),
    (Family::TetBig, include_str!("../../../catalog/tet-big.json")),
    (Family::TetNonbig, include_str!("../../../catalog/tet-nonbig.json")),
    (Family::TetTrivial, include_str!("../../../catalog/tet-trivial.json")),
];

pub fn parse_catalog_file(text: &str, path: &str) -> Result<CatalogFile, CatalogError> {
    if text.trim().is_empty() {
        return Err(CatalogError::Schema { path: path.into(), msg: "empty file".into() });
    }
    let mut file: CatalogFile =
        serde_json::from_str(text).map_err(|e| CatalogError::Schema { path: path.into(), msg: e.to_string() })?;
    for t in &mut file.types {
        t.family = Some(file.family);
    }
    Ok(file)
}

impl Catalog {
    pub fn from_files(files: Vec<CatalogFile>) -> Result<Catalog, CatalogError> {
        let types: Vec<TypeSpec> = files.into_iter().flat_map(|f| f.types).collect();
        let mut seen = HashSet::new();
        for t in &types {
            if !seen.insert(t.id.clone()) {
                return Err(CatalogError::Duplicate(t.id.clone()));
            }
            t.validate()?;
        }
        Ok(Catalog { types })
    }

    /// The catalog compiled into the library.
    pub fn builtin() -> Result<Catalog, CatalogError> {
        let files = BUILTIN
            .iter()
            .map(|(fam, text)| parse_catalog_file(text, &fam.file_name()))
            .collect::<Result<Vec<_>, _>>()?;
        Catalog::from_files(files)
    }

    /// Loads `<family>.json` files from a directory, or a single catalog file.
    pub fn load(path: &Path) -> Result<Catalog, CatalogError> {
        let read = |p: PathBuf| {
            let display = p.display().to_string();
            let text = std::fs::read_to_string(&p).map_err(|source| CatalogError::Io { path: display.clone(), source })?;
            parse_catalog_file(&text, &display)
        };
        let files = if path.is_dir() {
            let mut files = Vec::new();
            for fam in Family::ALL {
                let p = path.join(fam.file_name());
                if p.exists() {
                    files.push(read(p)?);
                }
            }
            if files.is_empty() {
                return Err(CatalogError::Schema { path: path.display().to_string(), msg: "no catalog files".into() });
            }
            files
        } else {
            vec![read(path.to_path_buf())?]
        };
        Catalog::from_files(files)
    }

    /// The directory named by `DELPEZZO3_CATALOG`, else the builtin catalog.
    pub fn from_env() -> Result<Catalog, CatalogError> {
        match std::env::var_os(CATALOG_ENV) {
            Some(dir) => Catalog::load(Path::new(&dir)),
            None => Catalog::builtin(),
        }
    }

    pub fn expand_all(&self) -> Result<Vec<ConcreteType>, CatalogError> {
        let mut out = Vec::new();
        for t in &self.types {
            out.extend(t.expand()?);
        }
        Ok(out)
    }

    pub fn counts(&self) -> Result<BTreeMap<Family, usize>, CatalogError> {
        let mut counts: BTreeMap<Family, usize> = Family::ALL.iter().map(|f| (*f, 0)).collect();
        for t in &self.types {
            *counts.entry(t.family()).or_default() += t.tuples().len();
        }
        Ok(counts)
    }
}

/// Normalized spelling used to match type ids typed on a command line.
pub fn id_alias(id: &str) -> String {
    id.chars()
        .filter(|c| !matches!(c, '[' | ']' | '{' | '}' | ' ' | '"' | '\''))
        .map(|c| match c {
            '⟨' => '<',
            '⟩' => '>',
            c => c,
        })
        .collect()
}

impl TypeSpec {
    pub fn family(&self) -> Family {
        self.family.unwrap_or(Family::Median)
    }

    fn err(&self, msg: impl Into<String>) -> CatalogError {
        CatalogError::Template { ty: self.id.clone(), msg: msg.into() }
    }

    fn expr_err(&self, source: ExprError) -> CatalogError {
        CatalogError::Expr { ty: self.id.clone(), source }
    }

    pub fn surface(&self) -> Result<BaseSurface, CatalogError> {
        self.base.surface().ok_or_else(|| self.err(format!("bad base {:?}", self.base)))
    }

    fn param_names(&self) -> Vec<String> {
        self.params.iter().flat_map(|p| p.names.clone()).collect()
    }

    /// Cartesian product of the parameter blocks.
    pub fn tuples(&self) -> Vec<Env> {
        let mut out = vec![Env::new()];
        for block in &self.params {
            let mut next = Vec::new();
            for env in &out {
                for row in &block.domain {
                    let mut e = env.clone();
                    for (n, v) in block.names.iter().zip(row) {
                        e.insert(n.clone(), *v);
                    }
                    next.push(e);
                }
            }
            out = next;
        }
        out
    }

    fn validate(&self) -> Result<(), CatalogError> {
        self.surface()?;
        if self.family() == Family::Median && !self.clusters_x.is_empty() {
            return Err(self.err("median entries have no stage-X clusters"));
        }
        for p in &self.params {
            if p.domain.iter().any(|row| row.len() != p.names.len()) {
                return Err(self.err("parameter tuple width differs from the names"));
            }
            if p.domain.is_empty() {
                return Err(self.err("empty parameter domain"));
            }
        }
        let names: HashSet<String> = self.param_names().into_iter().collect();
        let mut exprs: Vec<Expr> = Vec::new();
        for c in self.clusters_x.iter().chain(&self.clusters_z) {
            exprs.push(c.length.expr().map_err(|e| self.expr_err(e))?);
            if let Some(n) = &c.count {
                exprs.push(n.expr().map_err(|e| self.expr_err(e))?);
            }
            for b in c.branch.values() {
                if let BranchJson::Prefix(n) = b {
                    exprs.push(n.expr().map_err(|e| self.expr_err(e))?);
                }
            }
        }
        for r in &self.residual {
            exprs.push(r.mult.expr().map_err(|e| self.expr_err(e))?);
            if let Some(n) = &r.count {
                exprs.push(n.expr().map_err(|e| self.expr_err(e))?);
            }
        }
        for e in &exprs {
            let mut vars = Vec::new();
            e.vars(&mut vars);
            if let Some(v) = vars.iter().find(|v| !names.contains(*v) && v.as_str() != "i") {
                return Err(self.err(format!("unknown parameter {v}")));
            }
        }
        for env in self.tuples() {
            self.expected_symbol(&env)?;
        }
        Ok(())
    }

    /// Concrete id: parameters inside the trailing `(…)` and `⟨…⟩` groups are substituted.
    pub fn concrete_id(&self, env: &Env) -> String {
        let mut out = String::new();
        let mut depth = 0;
        for ch in self.id.chars() {
            match ch {
                '(' | '⟨' => depth += 1,
                ')' | '⟩' => depth -= 1,
                _ => {}
            }
            if depth > 0 && ch.is_ascii_lowercase() {
                if let Some(v) = env.get(&ch.to_string()) {
                    out.push_str(&v.to_string());
                    continue;
                }
            }
            out.push(ch);
        }
        out
    }

    fn symbol_text(&self, template: &str, env: &Env) -> Result<String, CatalogError> {
        // symbol subscripts are written A_{expr}; evaluate each braced group
        let mut out = String::new();
        let mut rest = template;
        while let Some(open) = rest.find('{') {
            let close = rest[open..].find('}').ok_or_else(|| self.err("unclosed '{' in symbol"))? + open;
            out.push_str(&rest[..open]);
            let v = Expr::parse(&rest[open + 1..close]).and_then(|e| e.eval(env)).map_err(|e| self.expr_err(e))?;
            out.push_str(&v.to_string());
            rest = &rest[close + 1..];
        }
        out.push_str(rest);
        Ok(out)
    }

    pub fn expected_symbol(&self, env: &Env) -> Result<SingSymbol, CatalogError> {
        let text = self.symbol_text(&self.expected_em, env)?;
        parse_symbol(&text).map_err(|source| CatalogError::Symbol { ty: self.id.clone(), source })
    }

    pub fn expand(&self) -> Result<Vec<ConcreteType>, CatalogError> {
        self.tuples().into_iter().map(|env| self.instantiate(env)).collect()
    }

    pub fn instantiate(&self, env: Env) -> Result<ConcreteType, CatalogError> {
        let base = self.surface()?;
        let curves = self
            .components
            .iter()
            .map(|c| {
                let cls = match (base, &c.class) {
                    (BaseSurface::ProjectivePlane, ClassJson { d: Some(d), a: None, b: None }) => DivClass::plane(*d),
                    (BaseSurface::Hirzebruch(_), ClassJson { d: None, a: Some(a), b: Some(b) }) => DivClass::hirz(*a, *b),
                    _ => return Err(self.err(format!("class of {} does not fit the base", c.id))),
                };
                Ok(SymbolicCurve { id: c.id.clone(), cls, kind: c.kind, coefficient: c.coeff })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut clusters = Vec::new();
        for (stage, list) in [(Stage::X, &self.clusters_x), (Stage::Z, &self.clusters_z)] {
            for c in list {
                clusters.extend(self.instantiate_cluster(c, stage, &env)?);
            }
        }
        let mut residual = Vec::new();
        for r in &self.residual {
            let mult = r.mult.eval(&env).map_err(|e| self.expr_err(e))?;
            let count = match &r.count {
                Some(n) => n.eval(&env).map_err(|e| self.expr_err(e))?,
                None => 1,
            };
            if mult < 0 || count < 0 {
                return Err(self.err("negative residual"));
            }
            if mult == 0 {
                continue;
            }
            for _ in 0..count {
                residual.push(Residual { curves: r.curves.clone(), mult: mult as u32 });
            }
        }
        Ok(ConcreteType {
            id: self.concrete_id(&env),
            family: self.family(),
            spec_id: self.id.clone(),
            expected_em: self.expected_symbol(&env)?,
            expected_ez: match &self.expected_ez {
                Some(t) => Some(interpolate(t, &env).map_err(|e| self.expr_err(e))?),
                None => None,
            },
            env,
            base,
            curves,
            clusters,
            residual,
        })
    }

    fn instantiate_cluster(&self, c: &ClusterJson, stage: Stage, env: &Env) -> Result<Vec<ClusterSpec>, CatalogError> {
        let count = match &c.count {
            Some(n) => n.eval(env).map_err(|e| self.expr_err(e))?,
            None => 1,
        };
        let mut out = Vec::new();
        for i in 1..=count.max(0) {
            let mut env = env.clone();
            env.insert("i".into(), i);
            let name = |s: &str| interpolate(s, &env).map_err(|e| self.expr_err(e));
            let k = c.length.eval(&env).map_err(|e| self.expr_err(e))?;
            if k < 0 {
                return Err(self.err(format!("cluster {} has negative length", c.id)));
            }
            if k == 0 {
                continue;
            }
            let k = k as usize;
            let mut id = name(&c.id)?;
            if c.count.is_some() && !c.id.contains('{') {
                id = format!("{id}.{i}");
            }
            let mut chain: Vec<ChainPoint> = (1..=k).map(|j| ChainPoint { j, branch: BTreeMap::new() }).collect();
            for (curve, b) in &c.branch {
                let curve = name(curve)?;
                let vector: Vec<u32> = match b {
                    BranchJson::Explicit(v) => v.clone(),
                    BranchJson::Prefix(n) => {
                        let p = n.eval(&env).map_err(|e| self.expr_err(e))?;
                        if p < 0 {
                            return Err(self.err(format!("negative branch prefix for {curve} in {id}")));
                        }
                        vec![1; p as usize]
                    }
                };
                if vector.len() > k {
                    return Err(self.err(format!("branch of {curve} is longer than cluster {id}")));
                }
                for (j, v) in vector.iter().enumerate() {
                    if *v > 0 {
                        chain[j].branch.insert(curve.clone(), *v);
                    }
                }
            }
            let locus = match &c.locus {
                Some(l) => l.iter().map(|s| name(s)).collect::<Result<Vec<_>, _>>()?,
                None => chain[0].branch.keys().cloned().collect(),
            };
            let avoid = c.avoid.iter().map(|s| name(s)).collect::<Result<Vec<_>, _>>()?;
            let at = c.at.as_ref().map(|s| name(s)).transpose()?;
            out.push(ClusterSpec { id, stage, locus, avoid, at, chain });
        }
        Ok(out)
    }
}

/// A concrete type realized as a two-stage tower with all transforms.
#[derive(Debug, Clone)]
pub struct Realization {
    pub id: String,
    pub family: Family,
    pub tower: Tower,
    /// Empty for median entries, whose base already is Z.
    pub e_x: Vec<(String, i64)>,
    pub e_z: Vec<(String, i64)>,
    pub e_m: Vec<(String, i64)>,
    pub e_x_class: Option<DivClass>,
    pub e_z_class: DivClass,
    pub e_m_class: DivClass,
    pub l_x: Option<DivClass>,
    pub l_z: DivClass,
    pub l_m: DivClass,
    pub deg_x: i64,
    pub deg_z: i64,
}

#[derive(Debug, Error)]
pub enum RealizeError {
    #[error(transparent)]
    Blowup(#[from] BlowupError),
    #[error("median entry carries stage-X clusters")]
    MedianWithX,
}

impl Realization {
    /// E on the given level as weighted components.
    pub fn divisor(&self, level: Level) -> &[(String, i64)] {
        match level {
            Level::X => &self.e_x,
            Level::Z => &self.e_z,
            Level::M => &self.e_m,
        }
    }

    /// The lowest level of the tower that carries E as given data.
    pub fn bottom(&self) -> Level {
        if self.family.is_tetrad() {
            Level::X
        } else {
            Level::Z
        }
    }
}

pub fn realize(t: &ConcreteType) -> Result<Realization, RealizeError> {
    if t.family == Family::Median && t.clusters.iter().any(|c| c.stage == Stage::X) {
        return Err(RealizeError::MedianWithX);
    }
    let tower = eliminate(t.base, t.curves.clone(), t.clusters.clone(), t.residual.clone())?;
    let base_divisor: Vec<(String, i64)> =
        t.curves.iter().filter(|c| c.coefficient > 0).map(|c| (c.id.clone(), c.coefficient)).collect();
    let base_class = base_divisor.iter().fold(DivClass::zero(), |acc, (id, m)| &acc + &(*m * &tower.curve(id).unwrap().cls));
    let k_x = tower.lattice(Level::X).canonical_class();
    let base_l = &(-3 * &k_x) - &base_class;

    let (e_x, e_x_class, l_x, e_z, e_z_class, l_z) = if t.family.is_tetrad() {
        let ez = tower.transform_with_s(&base_divisor, Stage::X, 1)?;
        let l_z = tower.twist_class(&base_l, Stage::X, 2);
        (base_divisor.clone(), Some(base_class), Some(base_l), ez.components, ez.class, l_z)
    } else {
        (Vec::new(), None, None, base_divisor.clone(), base_class, base_l)
    };
    let em = tower.transform_with_s(&e_z, Stage::Z, 2)?;
    let l_m = tower.twist_class(&l_z, Stage::Z, 1);
    Ok(Realization {
        id: t.id.clone(),
        family: t.family,
        deg_x: tower.degree(Stage::X),
        deg_z: tower.degree(Stage::Z),
        tower,
        e_x,
        e_z,
        e_m: em.components,
        e_x_class,
        e_z_class,
        e_m_class: em.class,
        l_x,
        l_z,
        l_m,
    })
}
