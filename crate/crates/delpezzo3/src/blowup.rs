//! Eliminations of (ν1)-clusters: chains of infinitely near points blown up
//! in two stages, with strict, total and twisted transforms.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{BaseSurface, CurveKind, DivClass, Lattice, LatticeError, SymbolicCurve};

/// Which elimination a cluster feeds: `X` is blown up first (X → Z), `Z` second (Z → M).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Stage {
    X,
    Z,
}

/// The three surfaces of a tower.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Level {
    X,
    Z,
    M,
}

impl Level {
    /// Whether the clusters of `stage` have already been blown up on this surface.
    pub fn after(self, stage: Stage) -> bool {
        match stage {
            Stage::X => self >= Level::Z,
            Stage::Z => self == Level::M,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Level::X => "X",
            Level::Z => "Z",
            Level::M => "M",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainPoint {
    pub j: usize,
    pub branch: BTreeMap<String, u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterSpec {
    pub id: String,
    pub stage: Stage,
    /// Curves through the base point.
    pub locus: Vec<String>,
    /// Curves the base point is declared to avoid.
    pub avoid: Vec<String>,
    /// Nominal name of the base point; defaults to the cluster id.
    pub at: Option<String>,
    pub chain: Vec<ChainPoint>,
}

impl ClusterSpec {
    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    pub fn branch(&self, j: usize, curve: &str) -> u32 {
        self.chain.get(j - 1).and_then(|p| p.branch.get(curve)).copied().unwrap_or(0)
    }

    /// Σ_j b_j over the chain, i.e. the degree this cluster contributes on `curve`.
    pub fn branch_degree(&self, curve: &str) -> i64 {
        self.chain.iter().map(|p| p.branch.get(curve).copied().unwrap_or(0) as i64).sum()
    }

    /// Σ_j b_j(u)·b_j(v), the local intersection the cluster absorbs.
    pub fn shared(&self, u: &str, v: &str) -> i64 {
        self.chain
            .iter()
            .map(|p| {
                let a = p.branch.get(u).copied().unwrap_or(0) as i64;
                let b = p.branch.get(v).copied().unwrap_or(0) as i64;
                a * b
            })
            .sum()
    }

    pub fn point_name(&self) -> &str {
        self.at.as_deref().unwrap_or(&self.id)
    }
}

/// A declared intersection point between two curves outside every cluster.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Residual {
    pub curves: [String; 2],
    pub mult: u32,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BlowupError {
    #[error("cluster {cluster} references unknown curve {curve}")]
    UnknownCurve { cluster: String, curve: String },
    #[error("duplicate cluster id {0}")]
    DuplicateCluster(String),
    #[error("clusters of one stage share the base point {0}")]
    SharedBasePoint(String),
    #[error("cluster {0} has an empty chain")]
    EmptyChain(String),
    #[error("cluster {cluster}: {reason}")]
    BadBranch { cluster: String, reason: String },
    #[error("residual references unknown curve {0}")]
    UnknownResidualCurve(String),
    #[error("negative coefficient {coeff} on {curve}")]
    NegativeCoefficient { curve: String, coeff: i64 },
    #[error("unknown curve {0}")]
    Unknown(String),
    #[error("curve {curve} does not exist on {level}")]
    NotOnLevel { curve: String, level: Level },
    #[error("intersection of {0} and {1} is not accounted for by declared points ({2})")]
    Unaccounted(String, String, String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Id of the j-th exceptional chain curve over a cluster.
pub fn chain_curve_id(cluster: &str, j: usize) -> String {
    format!("Γ:{cluster}:{j}")
}

/// Splits a chain curve id into (cluster, j).
pub fn parse_chain_curve_id(id: &str) -> Option<(&str, usize)> {
    let rest = id.strip_prefix("Γ:")?;
    let (c, j) = rest.rsplit_once(':')?;
    Some((c, j.parse().ok()?))
}

/// The exceptional basis label of the j-th blowup over a cluster.
pub fn exc_label(cluster: &str, j: usize) -> String {
    format!("e:{cluster}:{j}")
}

/// Result of a twisted transform `ψ*E − s·K_rel`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Twisted {
    pub class: DivClass,
    /// Components with positive coefficient, base curves first, then chain curves.
    pub components: Vec<(String, i64)>,
    /// Induced coefficients of every chain curve of the stage, zeros included.
    pub chain_coefficients: Vec<(String, i64)>,
}

/// A blowup tower over a base surface with stage-X clusters followed by stage-Z clusters.
#[derive(Debug, Clone)]
pub struct Tower {
    pub base: BaseSurface,
    pub curves: Vec<SymbolicCurve>,
    pub clusters: Vec<ClusterSpec>,
    pub residual: Vec<Residual>,
    offsets: Vec<usize>,
    by_id: HashMap<String, usize>,
    curve_index: HashMap<String, usize>,
}

/// Realize the clusters as blowups. Stage-X clusters come first in the exceptional basis.
pub fn eliminate(
    base: BaseSurface,
    curves: Vec<SymbolicCurve>,
    clusters: Vec<ClusterSpec>,
    residual: Vec<Residual>,
) -> Result<Tower, BlowupError> {
    let mut ordered: Vec<ClusterSpec> = clusters.iter().filter(|c| c.stage == Stage::X).cloned().collect();
    ordered.extend(clusters.iter().filter(|c| c.stage == Stage::Z).cloned());

    let curve_index: HashMap<String, usize> = curves.iter().enumerate().map(|(i, c)| (c.id.clone(), i)).collect();
    let mut by_id = HashMap::new();
    let mut points: BTreeSet<(Stage, String)> = BTreeSet::new();
    let mut offsets = Vec::with_capacity(ordered.len());
    let mut next = 0;
    for (idx, c) in ordered.iter().enumerate() {
        if by_id.insert(c.id.clone(), idx).is_some() {
            return Err(BlowupError::DuplicateCluster(c.id.clone()));
        }
        if !points.insert((c.stage, c.point_name().to_string())) {
            return Err(BlowupError::SharedBasePoint(c.point_name().to_string()));
        }
        if c.chain.is_empty() {
            return Err(BlowupError::EmptyChain(c.id.clone()));
        }
        offsets.push(next);
        next += c.chain.len();
    }

    let known = |cluster: &ClusterSpec, id: &str| -> bool {
        if curve_index.contains_key(id) {
            return true;
        }
        match (cluster.stage, parse_chain_curve_id(id)) {
            (Stage::Z, Some((cid, j))) => by_id
                .get(cid)
                .map(|&i| ordered[i].stage == Stage::X && j >= 1 && j <= ordered[i].chain.len())
                .unwrap_or(false),
            _ => false,
        }
    };

    for c in &ordered {
        let bad = |reason: String| BlowupError::BadBranch { cluster: c.id.clone(), reason };
        for id in c.locus.iter().chain(&c.avoid) {
            if !known(c, id) {
                return Err(BlowupError::UnknownCurve { cluster: c.id.clone(), curve: id.clone() });
            }
        }
        for (pos, p) in c.chain.iter().enumerate() {
            if p.j != pos + 1 {
                return Err(bad(format!("chain point {} out of order", p.j)));
            }
            for (curve, &b) in &p.branch {
                if !known(c, curve) {
                    return Err(BlowupError::UnknownCurve { cluster: c.id.clone(), curve: curve.clone() });
                }
                let kind = curve_index.get(curve).map(|&i| curves[i].kind).unwrap_or(CurveKind::Smooth);
                let limit = if p.j == 1 && kind != CurveKind::Smooth { 2 } else { 1 };
                if b > limit {
                    return Err(bad(format!("branch {b} of {curve} at point {}", p.j)));
                }
                if pos > 0 && b > c.chain[pos - 1].branch.get(curve).copied().unwrap_or(0) {
                    return Err(bad(format!("branch of {curve} increases at point {}", p.j)));
                }
            }
        }
        let through: BTreeSet<&String> =
            c.chain[0].branch.iter().filter(|(_, &b)| b > 0).map(|(k, _)| k).collect();
        let locus: BTreeSet<&String> = c.locus.iter().collect();
        if through != locus {
            return Err(bad(format!("curves through the base point {through:?} differ from the locus {locus:?}")));
        }
        if let Some(a) = c.avoid.iter().find(|a| locus.contains(a)) {
            return Err(bad(format!("{a} is both in the locus and avoided")));
        }
    }

    for r in &residual {
        for id in &r.curves {
            if !curve_index.contains_key(id) {
                return Err(BlowupError::UnknownResidualCurve(id.clone()));
            }
        }
    }

    Ok(Tower { base, curves, clusters: ordered, residual, offsets, by_id, curve_index })
}

impl Tower {
    pub fn stage_count(&self, stage: Stage) -> usize {
        self.clusters.iter().filter(|c| c.stage == stage).map(|c| c.chain.len()).sum()
    }

    /// deg Δ of a stage: the sum of chain lengths.
    pub fn degree(&self, stage: Stage) -> i64 {
        self.stage_count(stage) as i64
    }

    pub fn lattice(&self, level: Level) -> Lattice {
        let blowups = match level {
            Level::X => 0,
            Level::Z => self.stage_count(Stage::X),
            Level::M => self.stage_count(Stage::X) + self.stage_count(Stage::Z),
        };
        Lattice::new(self.base, blowups)
    }

    pub fn cluster(&self, id: &str) -> Option<&ClusterSpec> {
        self.by_id.get(id).map(|&i| &self.clusters[i])
    }

    pub fn curve(&self, id: &str) -> Option<&SymbolicCurve> {
        self.curve_index.get(id).map(|&i| &self.curves[i])
    }

    pub fn clusters_of(&self, stage: Stage) -> impl Iterator<Item = &ClusterSpec> {
        self.clusters.iter().filter(move |c| c.stage == stage)
    }

    /// Index of the j-th blowup of a cluster in the exceptional basis.
    pub fn exc_index(&self, cluster: &str, j: usize) -> Option<usize> {
        let &i = self.by_id.get(cluster)?;
        (j >= 1 && j <= self.clusters[i].chain.len()).then(|| self.offsets[i] + j - 1)
    }

    pub fn exc_labels(&self) -> Vec<String> {
        self.clusters.iter().flat_map(|c| (1..=c.chain.len()).map(move |j| exc_label(&c.id, j))).collect()
    }

    /// Γ_{P,j} on the surface right after its own stage: e_j − e_{j+1}, or e_k at the end.
    pub fn chain_class(&self, cluster: &str, j: usize) -> Option<DivClass> {
        let c = self.cluster(cluster)?;
        let i = self.exc_index(cluster, j)?;
        Some(if j < c.chain.len() { DivClass::e(i) - DivClass::e(i + 1) } else { DivClass::e(i) })
    }

    /// K of the stage's blowup: the sum of its exceptional total transforms.
    pub fn relative_canonical(&self, stage: Stage) -> DivClass {
        let mut k = DivClass::zero();
        for c in self.clusters_of(stage) {
            for j in 1..=c.chain.len() {
                k = &k + &DivClass::e(self.exc_index(&c.id, j).unwrap());
            }
        }
        k
    }

    /// The level on which a curve first exists.
    pub fn birth(&self, id: &str) -> Option<Level> {
        if self.curve_index.contains_key(id) {
            return Some(Level::X);
        }
        let (cid, j) = parse_chain_curve_id(id)?;
        let c = self.cluster(cid)?;
        if j < 1 || j > c.chain.len() {
            return None;
        }
        Some(match c.stage {
            Stage::X => Level::Z,
            Stage::Z => Level::M,
        })
    }

    pub fn is_base_curve(&self, id: &str) -> bool {
        self.curve_index.contains_key(id)
    }

    /// Class of the strict transform of a base or chain curve on `level`.
    pub fn class_on(&self, id: &str, level: Level) -> Result<DivClass, BlowupError> {
        let birth = self.birth(id).ok_or_else(|| BlowupError::Unknown(id.to_string()))?;
        if birth > level {
            return Err(BlowupError::NotOnLevel { curve: id.to_string(), level });
        }
        let mut cls = match parse_chain_curve_id(id) {
            Some((cid, j)) if !self.curve_index.contains_key(id) => self.chain_class(cid, j).unwrap(),
            _ => self.curve(id).unwrap().cls.clone(),
        };
        for c in &self.clusters {
            if !level.after(c.stage) {
                continue;
            }
            for j in 1..=c.chain.len() {
                let b = c.branch(j, id) as i64;
                if b != 0 {
                    cls = &cls - &(b * DivClass::e(self.exc_index(&c.id, j).unwrap()));
                }
            }
        }
        Ok(cls)
    }

    pub fn strict_transform(&self, curve: &SymbolicCurve) -> Result<DivClass, BlowupError> {
        self.class_on(&curve.id, Level::M)
    }

    /// Multiplicity of a weighted divisor at the j-th point of a cluster.
    pub fn mult_at(&self, cluster: &ClusterSpec, j: usize, divisor: &[(String, i64)]) -> i64 {
        divisor.iter().map(|(id, m)| m * cluster.branch(j, id) as i64).sum()
    }

    /// `ψ*E − s·K_rel` for the blowup of `stage`, returned as a class and as components.
    ///
    /// The components of `divisor` must live on the source surface of the stage.
    pub fn transform_with_s(&self, divisor: &[(String, i64)], stage: Stage, s: i64) -> Result<Twisted, BlowupError> {
        let (source, target) = match stage {
            Stage::X => (Level::X, Level::Z),
            Stage::Z => (Level::Z, Level::M),
        };
        let mut pulled = DivClass::zero();
        let mut components = Vec::new();
        let mut from_components = DivClass::zero();
        for (id, m) in divisor {
            if *m < 0 {
                return Err(BlowupError::NegativeCoefficient { curve: id.clone(), coeff: *m });
            }
            if *m == 0 {
                continue;
            }
            pulled = &pulled + &(*m * &self.class_on(id, source)?);
            from_components = &from_components + &(*m * &self.class_on(id, target)?);
            components.push((id.clone(), *m));
        }
        let class = &pulled - &(s * &self.relative_canonical(stage));
        let mut chain_coefficients = Vec::new();
        for c in self.clusters_of(stage) {
            let mut running = 0;
            for j in 1..=c.chain.len() {
                running += self.mult_at(c, j, divisor);
                let coeff = running - s * j as i64;
                let id = chain_curve_id(&c.id, j);
                chain_coefficients.push((id.clone(), coeff));
                if coeff < 0 {
                    return Err(BlowupError::NegativeCoefficient { curve: id, coeff });
                }
                if coeff > 0 {
                    from_components = &from_components + &(coeff * &self.class_on(&id, target)?);
                    components.push((id, coeff));
                }
            }
        }
        debug_assert_eq!(from_components, class, "component expansion disagrees with the class");
        Ok(Twisted { class, components, chain_coefficients })
    }

    /// `ψ*L − s·K_rel` for a bare class.
    pub fn twist_class(&self, class: &DivClass, stage: Stage, s: i64) -> DivClass {
        class - &(s * &self.relative_canonical(stage))
    }

    /// deg(Δ_stage ∩ C): the branch sum of C over the stage's clusters.
    pub fn branch_degree(&self, stage: Stage, curve: &str) -> i64 {
        self.clusters_of(stage).map(|c| c.branch_degree(curve)).sum()
    }

    /// Whether the singular point of a nodal or cuspidal curve is blown up by `level`.
    pub fn is_resolved(&self, curve: &str, level: Level) -> bool {
        self.clusters.iter().any(|c| level.after(c.stage) && c.branch(1, curve) == 2)
    }

    pub fn kind_on(&self, id: &str, level: Level) -> CurveKind {
        match self.curve(id) {
            Some(c) if c.kind != CurveKind::Smooth && !self.is_resolved(id, level) => c.kind,
            _ => CurveKind::Smooth,
        }
    }

    /// Local intersection multiplicities of the points where `u` and `v` meet on `level`.
    ///
    /// Points come from declared residuals, from clusters not yet blown up whose locus holds
    /// both curves, and, when a chain curve is involved, from the tower structure itself.
    pub fn points_between(&self, u: &str, v: &str, level: Level) -> Result<Vec<i64>, BlowupError> {
        let lat = self.lattice(level);
        let total = lat.intersection(&self.class_on(u, level)?, &self.class_on(v, level)?)?;
        let mut pts: Vec<i64> = Vec::new();
        for r in &self.residual {
            if (r.curves[0] == u && r.curves[1] == v) || (r.curves[0] == v && r.curves[1] == u) {
                pts.push(r.mult as i64);
            }
        }
        for c in &self.clusters {
            if level.after(c.stage) {
                continue;
            }
            if c.locus.iter().any(|x| x == u) && c.locus.iter().any(|x| x == v) {
                pts.push(c.shared(u, v));
            }
        }
        let declared: i64 = pts.iter().sum();
        let rest = total - declared;
        let detail = || format!("lattice {total}, declared {declared}");
        if rest < 0 || (rest > 0 && self.is_base_curve(u) && self.is_base_curve(v)) {
            return Err(BlowupError::Unaccounted(u.to_string(), v.to_string(), detail()));
        }
        if rest > 0 {
            if self.cusp_contact(u, v) || self.cusp_contact(v, u) {
                pts.push(rest);
            } else {
                pts.extend(std::iter::repeat_n(1, rest as usize));
            }
        }
        Ok(pts)
    }

    /// A cuspidal curve blown up once at its cusp touches the first chain curve at one point.
    fn cusp_contact(&self, curve: &str, other: &str) -> bool {
        let Some(c) = self.curve(curve) else { return false };
        if c.kind != CurveKind::Cuspidal {
            return false;
        }
        match parse_chain_curve_id(other) {
            Some((cid, 1)) => self.cluster(cid).map(|cl| cl.branch(1, curve) == 2 && cl.branch(2, curve) == 0).unwrap_or(false),
            _ => false,
        }
    }
}

/// A single cluster with the given per-curve prefix lengths, handy for tests and tools.
pub fn simple_cluster(id: &str, stage: Stage, k: usize, prefixes: &[(&str, usize)]) -> ClusterSpec {
    let chain = (1..=k)
        .map(|j| ChainPoint {
            j,
            branch: prefixes.iter().filter(|(_, p)| j <= *p).map(|(c, _)| (c.to_string(), 1)).collect(),
        })
        .collect();
    ClusterSpec {
        id: id.to_string(),
        stage,
        locus: prefixes.iter().filter(|(_, p)| *p > 0).map(|(c, _)| c.to_string()).collect(),
        avoid: Vec::new(),
        at: None,
        chain,
    }
}
