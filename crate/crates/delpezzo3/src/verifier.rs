//! Mechanical checks on realized catalog entries.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::blowup::{Level, Stage};
use crate::catalog::{realize, Catalog, CatalogError, ConcreteType, Family, Realization};
use crate::dualgraph::{build_dual_graph, canonical_form, classify_symbol_sum, GraphError, SingSymbol, WeightedDualGraph};
use crate::lattice::{BaseSurface, CurveKind, DivClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: &'static str,
    pub status: Status,
    pub detail: String,
    pub cite: &'static str,
}

impl Check {
    fn new(id: &'static str, ok: bool, detail: impl Into<String>) -> Check {
        Check { id, status: if ok { Status::Pass } else { Status::Fail }, detail: detail.into(), cite: cite(id) }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// The condition each check id stands for.
pub fn cite(id: &str) -> &'static str {
    match id {
        "realize" => "elimination of the clusters with nonnegative induced coefficients",
        "fundamental" => "L = -3K - E on every level",
        "nef" => "nefness of K+L (median) or 2K+L (tetrad) on the base surface",
        "positivity" => "(K+L.L) > 0 (median) or (K+L.L) > 2 deg Delta_X (tetrad)",
        "coeff" => "coefficients of E_M lie in {1,2}",
        "snc" => "Supp E_M is simple normal crossing and every intersection is accounted for",
        "orthogonal" => "(L_M.E0) = 0 for every component of E_M",
        "nonzero" => "E_M is a nonzero effective divisor",
        "degree-z" => "(L_Z.E_Z) = 2 deg Delta_Z",
        "degree-x" => "(L_X.E_X) = 2(deg Delta_X + deg Delta_Z)",
        "component-degree-z" => "(L_Z.E0) = deg(Delta_Z on E0)",
        "component-degree-x" => "(L_X.E0) = deg(Delta_Z on E0^Z) + 2 deg(Delta_X on E0)",
        "mult-window-z" => "2 <= mult_Q E_Z <= 4 at every point of Delta_Z",
        "mult-window-x" => "1 <= mult_P E_X <= 3 at every point of Delta_X",
        "two-curve" => "(C1.C2) >= k1 + k2 - k for smooth components",
        "genus-drop" => "(C^2) - (C'^2) - (K_rel.C') = 2p_a(C) - 2p_a(C')",
        "adjunction" => "arithmetic genus matches the curve kind; E_M components are smooth rational",
        "sigma-avoid" => "Delta avoids the negative section when the adjoint class is not big",
        "section-coeff" => "a section D in E_Z forces sigma in E_Z with coeff >= coeff_D, and n+(D^2) >= deg(Delta_Z on D) on ties",
        "symbol-em" => "weighted dual graph of E_M has the tabulated symbol",
        "graph-ez" => "weighted dual graph of E_Z matches the tabulated graph",
        _ => "",
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    #[serde(rename = "typeId")]
    pub type_id: String,
    pub family: Family,
    pub pass: bool,
    #[serde(rename = "computedEM")]
    pub computed_em: Option<SingSymbol>,
    #[serde(rename = "expectedEM")]
    pub expected_em: SingSymbol,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

fn dot(r: &Realization, level: Level, a: &DivClass, b: &DivClass) -> i64 {
    r.tower.lattice(level).intersection(a, b).expect("classes live on the tower")
}

fn class(r: &Realization, id: &str, level: Level) -> DivClass {
    r.tower.class_on(id, level).expect("component exists on its level")
}

fn bottom_lattice_k(r: &Realization) -> DivClass {
    r.tower.lattice(r.bottom()).canonical_class()
}

/// Nefness, positivity and the defining axioms on M.
pub fn verify_axioms(r: &Realization) -> Vec<Check> {
    let mut out = Vec::new();
    let bottom = r.bottom();
    let lat = r.tower.lattice(bottom);
    let k = bottom_lattice_k(r);

    // fundamental relation on every level present
    let mut fund = Vec::new();
    if let (Some(lx), Some(ex)) = (&r.l_x, &r.e_x_class) {
        let kx = r.tower.lattice(Level::X).canonical_class();
        if *lx != &(-3 * &kx) - ex {
            fund.push("X");
        }
    }
    let kz = r.tower.lattice(Level::Z).canonical_class();
    if r.l_z != &(-3 * &kz) - &r.e_z_class {
        fund.push("Z");
    }
    let km = r.tower.lattice(Level::M).canonical_class();
    if r.l_m != &(-3 * &km) - &r.e_m_class {
        fund.push("M");
    }
    out.push(Check::new("fundamental", fund.is_empty(), if fund.is_empty() { "holds".to_string() } else { format!("fails on {fund:?}") }));

    if r.family.is_tetrad() {
        let l = r.l_x.as_ref().unwrap();
        let adj = &(2 * &k) + l;
        let nef = lat.is_nef_on_base(&adj).unwrap_or(false);
        out.push(Check::new("nef", nef, format!("2K_X+L_X = {}", lat.format(&adj))));
        let kl = &k + l;
        let v = dot(r, Level::X, &kl, l);
        out.push(Check::new("positivity", v > 2 * r.deg_x, format!("(K_X+L_X.L_X) = {v}, 2 deg Delta_X = {}", 2 * r.deg_x)));
    } else {
        let adj = &k + &r.l_z;
        let nef = lat.is_nef_on_base(&adj).unwrap_or(false);
        out.push(Check::new("nef", nef, format!("K_Z+L_Z = {}", lat.format(&adj))));
        let v = dot(r, Level::Z, &adj, &r.l_z);
        out.push(Check::new("positivity", v > 0, format!("(K_Z+L_Z.L_Z) = {v}")));
    }

    let bad: Vec<String> = r.e_m.iter().filter(|(_, c)| !(1..=2).contains(c)).map(|(id, c)| format!("{id}:{c}")).collect();
    out.push(Check::new("coeff", bad.is_empty(), if bad.is_empty() { "all in {1,2}".into() } else { bad.join(", ") }));

    match build_dual_graph(&r.e_m, &r.tower, Level::M) {
        Ok(g) => {
            let mut issues = Vec::new();
            for v in &g.vertices {
                if v.kind != CurveKind::Smooth {
                    issues.push(format!("{} is singular", v.id));
                }
            }
            for e in &g.edges {
                if e.u != e.v && e.mults.iter().any(|&m| m != 1) {
                    issues.push(format!("{}-{} meet with boxes {:?}", g.vertices[e.u].id, g.vertices[e.v].id, e.mults));
                }
            }
            out.push(Check::new("snc", issues.is_empty(), if issues.is_empty() { "transverse".into() } else { issues.join("; ") }));
        }
        Err(e) => out.push(Check::new("snc", false, e.to_string())),
    }

    let bad: Vec<String> = r
        .e_m
        .iter()
        .filter_map(|(id, _)| {
            let v = dot(r, Level::M, &r.l_m, &class(r, id, Level::M));
            (v != 0).then(|| format!("{id}:{v}"))
        })
        .collect();
    out.push(Check::new("orthogonal", bad.is_empty(), if bad.is_empty() { "L_M orthogonal to E_M".into() } else { bad.join(", ") }));

    out.push(Check::new("nonzero", !r.e_m.is_empty(), format!("{} components", r.e_m.len())));

    // adjunction on the bottom level and smooth rationality on M
    let mut issues = Vec::new();
    for c in &r.tower.curves {
        let g = lat.arithmetic_genus(&c.cls).unwrap_or(-1);
        if g != c.kind.genus() {
            issues.push(format!("{} has p_a {g}", c.id));
        }
    }
    let lat_m = r.tower.lattice(Level::M);
    for (id, _) in &r.e_m {
        let g = lat_m.arithmetic_genus(&class(r, id, Level::M)).unwrap_or(-1);
        if g != 0 {
            issues.push(format!("{id} on M has p_a {g}"));
        }
    }
    out.push(Check::new("adjunction", issues.is_empty(), if issues.is_empty() { "consistent".into() } else { issues.join("; ") }));

    // Delta misses the negative section when K+L (resp. 2K+L) is not big
    if r.tower.base.n().is_some_and(|n| n > 0) {
        let adj = if r.family.is_tetrad() { &(2 * &k) + r.l_x.as_ref().unwrap() } else { &k + &r.l_z };
        let not_big = lat.self_intersection(&adj).unwrap_or(1) == 0;
        let applies = match r.family {
            Family::Median => not_big,
            Family::TetNonbig => true,
            _ => false,
        };
        if applies {
            let stage = if r.family == Family::Median { Stage::Z } else { Stage::X };
            let touching: Vec<String> = r
                .tower
                .clusters_of(stage)
                .filter(|c| c.locus.iter().any(|id| r.tower.curve(id).map(|cv| cv.cls == DivClass::hirz(1, 0)).unwrap_or(false)))
                .map(|c| c.id.clone())
                .collect();
            out.push(Check::new(
                "sigma-avoid",
                touching.is_empty(),
                if touching.is_empty() { "no cluster on the negative section".into() } else { touching.join(", ") },
            ));
        }
    }
    if let Some(n) = r.tower.base.n() {
        let not_big = lat.self_intersection(&(&k + &r.l_z)).unwrap_or(1) == 0;
        if r.family == Family::Median && not_big {
            out.push(section_check(r, n));
        }
    }
    out
}

/// Sections of the ruling inside E_Z of a non-big median entry.
fn section_check(r: &Realization, n: i64) -> Check {
    let lat = r.tower.lattice(Level::Z);
    let sigma = DivClass::hirz(1, 0);
    let coeff_sigma = r.tower.curves.iter().filter(|c| c.cls == sigma).map(|c| c.coefficient).max();
    let mut bad = Vec::new();
    for c in r.tower.curves.iter().filter(|c| c.cls.base[0] == 1 && c.cls != sigma) {
        let Some(cs) = coeff_sigma else {
            bad.push(format!("{} is a section but sigma is not in E_Z", c.id));
            continue;
        };
        if cs < c.coefficient {
            bad.push(format!("coeff of {} exceeds that of sigma", c.id));
        } else if cs == c.coefficient {
            let d2 = lat.self_intersection(&c.cls).unwrap_or(i64::MIN);
            let deg: i64 = r.tower.clusters_of(Stage::Z).map(|cl| cl.branch_degree(&c.id)).sum();
            if n + d2 < deg {
                bad.push(format!("{}: n+(D^2) = {} < {deg}", c.id, n + d2));
            }
        }
    }
    Check::new("section-coeff", bad.is_empty(), if bad.is_empty() { "holds".into() } else { bad.join("; ") })
}

fn smooth_components<'a>(r: &'a Realization, divisor: &'a [(String, i64)], level: Level) -> impl Iterator<Item = &'a String> + 'a {
    divisor.iter().map(|(id, _)| id).filter(move |id| r.tower.kind_on(id, level) == CurveKind::Smooth)
}

/// Degree, component-degree, multiplicity-window, two-curve and genus-drop identities.
pub fn verify_identities(r: &Realization) -> Vec<Check> {
    let mut out = Vec::new();
    let t = &r.tower;

    let v = dot(r, Level::Z, &r.l_z, &r.e_z_class);
    out.push(Check::new("degree-z", v == 2 * r.deg_z, format!("(L_Z.E_Z) = {v}, deg Delta_Z = {}", r.deg_z)));

    let mut bad = Vec::new();
    for id in smooth_components(r, &r.e_z, Level::Z) {
        let v = dot(r, Level::Z, &r.l_z, &class(r, id, Level::Z));
        let d = t.branch_degree(Stage::Z, id);
        if v != d {
            bad.push(format!("{id}: {v} vs {d}"));
        }
    }
    out.push(Check::new("component-degree-z", bad.is_empty(), if bad.is_empty() { "holds".into() } else { bad.join(", ") }));

    let mut bad = Vec::new();
    for c in t.clusters_of(Stage::Z) {
        let m = t.mult_at(c, 1, &r.e_z);
        if !(2..=4).contains(&m) {
            bad.push(format!("{}: {m}", c.id));
        }
    }
    out.push(Check::new("mult-window-z", bad.is_empty(), if bad.is_empty() { "holds".into() } else { bad.join(", ") }));

    if let (Some(lx), Some(ex)) = (&r.l_x, &r.e_x_class) {
        let v = dot(r, Level::X, lx, ex);
        out.push(Check::new(
            "degree-x",
            v == 2 * (r.deg_x + r.deg_z),
            format!("(L_X.E_X) = {v}, deg Delta_X = {}, deg Delta_Z = {}", r.deg_x, r.deg_z),
        ));
        let mut bad = Vec::new();
        for id in smooth_components(r, &r.e_x, Level::X) {
            let v = dot(r, Level::X, lx, &class(r, id, Level::X));
            let d = t.branch_degree(Stage::Z, id) + 2 * t.branch_degree(Stage::X, id);
            if v != d {
                bad.push(format!("{id}: {v} vs {d}"));
            }
        }
        out.push(Check::new("component-degree-x", bad.is_empty(), if bad.is_empty() { "holds".into() } else { bad.join(", ") }));
        let mut bad = Vec::new();
        for c in t.clusters_of(Stage::X) {
            let m = t.mult_at(c, 1, &r.e_x);
            if !(1..=3).contains(&m) {
                bad.push(format!("{}: {m}", c.id));
            }
        }
        out.push(Check::new("mult-window-x", bad.is_empty(), if bad.is_empty() { "holds".into() } else { bad.join(", ") }));
    }

    // two-curve bound on each level that carries a Delta
    let mut bad = Vec::new();
    let mut levels = vec![(Level::Z, Stage::Z, &r.e_z)];
    if r.family.is_tetrad() {
        levels.push((Level::X, Stage::X, &r.e_x));
    }
    for (level, stage, divisor) in levels {
        let k = t.degree(stage);
        let ids: Vec<&String> = smooth_components(r, divisor, level).collect();
        for (i, a) in ids.iter().enumerate() {
            for b in &ids[i + 1..] {
                let v = dot(r, level, &class(r, a, level), &class(r, b, level));
                let bound = t.branch_degree(stage, a) + t.branch_degree(stage, b) - k;
                if v < bound {
                    bad.push(format!("{a}.{b} = {v} < {bound} on {level}"));
                }
            }
        }
    }
    out.push(Check::new("two-curve", bad.is_empty(), if bad.is_empty() { "holds".into() } else { bad.join(", ") }));

    // genus drop for every curve carried to M
    let mut bad = Vec::new();
    let lat_m = t.lattice(Level::M);
    for (id, _) in &r.e_z {
        let birth = t.birth(id).unwrap();
        let lat0 = t.lattice(birth);
        let c0 = class(r, id, birth);
        let cm = class(r, id, Level::M);
        let k_rel = &lat_m.canonical_class() - &lat0.canonical_class();
        let lhs = dot(r, birth, &c0, &c0) - dot(r, Level::M, &cm, &cm) - dot(r, Level::M, &k_rel, &cm);
        let (Ok(g0), Ok(gm)) = (lat0.arithmetic_genus(&c0), lat_m.arithmetic_genus(&cm)) else {
            bad.push(format!("{id}: non-integral genus"));
            continue;
        };
        if lhs != 2 * g0 - 2 * gm {
            bad.push(format!("{id}: {lhs} vs {}", 2 * g0 - 2 * gm));
        }
    }
    bad.dedup();
    out.push(Check::new("genus-drop", bad.is_empty(), if bad.is_empty() { "holds".into() } else { bad.join(", ") }));
    out
}

/// Parses the compact graph notation used for tabulated E_Z graphs.
///
/// Items are separated by `;`. `name:s(w)` declares a vertex, optionally followed by
/// `nodal` or `cusp`. `name*N:s(w)` declares a path `name1 … nameN`. Declaring a single
/// smooth vertex under an existing name relabels it, which lets a path end in differently
/// labelled vertices. `a-b` adds a transverse point and `a-b[m]` a point with box m.
pub fn parse_graph(text: &str) -> Result<WeightedDualGraph, GraphError> {
    let bad = || GraphError::BadSymbol(text.to_string());
    let mut g = WeightedDualGraph::default();
    let mut names: BTreeMap<String, usize> = BTreeMap::new();
    for item in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((name, label)) = item.split_once(':') {
            let open = label.find('(').ok_or_else(bad)?;
            let close = label.find(')').ok_or_else(bad)?;
            let s: i64 = label[..open].trim().parse().map_err(|_| bad())?;
            let w: i64 = label[open + 1..close].trim().parse().map_err(|_| bad())?;
            let kind = match label[close + 1..].trim() {
                "" => CurveKind::Smooth,
                "nodal" => CurveKind::Nodal,
                "cusp" => CurveKind::Cuspidal,
                _ => return Err(bad()),
            };
            let (stem, count) = match name.split_once('*') {
                Some((stem, n)) => (stem.trim(), Some(n.trim().parse::<usize>().map_err(|_| bad())?)),
                None => (name.trim(), None),
            };
            let labels: Vec<String> = match count {
                Some(n) => (1..=n).map(|i| format!("{stem}{i}")).collect(),
                None => vec![stem.to_string()],
            };
            if count.is_none() && kind == CurveKind::Smooth {
                if let Some(&v) = names.get(stem) {
                    g.vertices[v].selfint = s;
                    g.vertices[v].weight = w;
                    continue;
                }
            }
            let mut prev = None;
            for l in labels {
                let v = g.add_vertex(l.clone(), s, w);
                g.vertices[v].kind = kind;
                match kind {
                    CurveKind::Nodal => g.add_edge(v, v, vec![1]),
                    CurveKind::Cuspidal => g.add_edge(v, v, vec![2]),
                    CurveKind::Smooth => {}
                }
                if names.insert(l, v).is_some() {
                    return Err(bad());
                }
                if let Some(p) = prev {
                    g.add_edge(p, v, vec![1]);
                }
                if count.is_some() {
                    prev = Some(v);
                }
            }
        } else {
            let (a, rest) = item.split_once('-').ok_or_else(bad)?;
            let (b, m) = match rest.split_once('[') {
                Some((b, m)) => (b, m.strip_suffix(']').ok_or_else(bad)?.parse::<i64>().map_err(|_| bad())?),
                None => (rest, 1),
            };
            let u = *names.get(a.trim()).ok_or_else(bad)?;
            let v = *names.get(b.trim()).ok_or_else(bad)?;
            g.add_edge(u, v, vec![m]);
        }
    }
    Ok(g)
}

pub fn graph_of(r: &Realization, level: Level) -> Result<WeightedDualGraph, String> {
    build_dual_graph(r.divisor(level), &r.tower, level).map_err(|e| e.to_string())
}

/// Compares the E_M symbol with the table, and the E_Z graph for entries that tabulate it.
pub fn verify_symbols(r: &Realization, t: &ConcreteType) -> (Vec<Check>, Option<SingSymbol>) {
    let mut out = Vec::new();
    let computed = graph_of(r, Level::M).and_then(|g| classify_symbol_sum(&g).map_err(|e| e.to_string()));
    let sym = match &computed {
        Ok(s) => {
            out.push(Check::new("symbol-em", *s == t.expected_em, format!("computed {s}, expected {}", t.expected_em)));
            Some(s.clone())
        }
        Err(e) => {
            out.push(Check::new("symbol-em", false, e.clone()));
            None
        }
    };
    if let Some(text) = &t.expected_ez {
        let detail;
        let ok = match (graph_of(r, Level::Z), parse_graph(text)) {
            (Ok(g), Ok(want)) => {
                let (a, b) = (canonical_form(&g), canonical_form(&want));
                detail = format!("computed {}, expected {}", a.clone().unwrap_or_default(), b.clone().unwrap_or_default());
                a.is_ok() && a == b
            }
            (Err(e), _) => {
                detail = e;
                false
            }
            (_, Err(e)) => {
                detail = e.to_string();
                false
            }
        };
        out.push(Check::new("graph-ez", ok, detail));
    }
    (out, sym)
}

pub fn verify_type(t: &ConcreteType) -> Report {
    let (checks, computed) = match realize(t) {
        Ok(r) => {
            let mut checks = vec![Check::new("realize", true, format!("deg Delta_X = {}, deg Delta_Z = {}", r.deg_x, r.deg_z))];
            checks.extend(verify_axioms(&r));
            checks.extend(verify_identities(&r));
            let (sym_checks, sym) = verify_symbols(&r, t);
            checks.extend(sym_checks);
            (checks, sym)
        }
        Err(e) => (vec![Check::new("realize", false, e.to_string())], None),
    };
    Report {
        type_id: t.id.clone(),
        family: t.family,
        pass: checks.iter().all(Check::passed),
        computed_em: computed,
        expected_em: t.expected_em.clone(),
        checks,
    }
}

/// Groups tet-trivial entries over P² by their part before the `(c,d)` tuple and checks that
/// the E_Z graphs agree inside a group and differ across groups. Entries over P¹×P¹ and F₂
/// have no tabulated graph and are skipped.
pub fn verify_distinctness(types: &[ConcreteType]) -> Check {
    let mut groups: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut problems = Vec::new();
    for t in types.iter().filter(|t| t.family == Family::TetTrivial && t.base == BaseSurface::ProjectivePlane) {
        let form = realize(t)
            .map_err(|e| e.to_string())
            .and_then(|r| graph_of(&r, Level::Z))
            .and_then(|g| canonical_form(&g).map_err(|e| e.to_string()));
        match form {
            Ok(f) => groups.entry(median_part(&t.id)).or_default().push(f),
            Err(e) => problems.push(format!("{}: {e}", t.id)),
        }
    }
    let mut seen: BTreeMap<String, String> = BTreeMap::new();
    for (part, forms) in &groups {
        if forms.iter().any(|f| *f != forms[0]) {
            problems.push(format!("{part}: E_Z graph depends on (c,d)"));
        }
        if let Some(other) = seen.insert(forms[0].clone(), part.clone()) {
            problems.push(format!("{part} and {other} share an E_Z graph"));
        }
    }
    Check::new(
        "distinct-ez",
        problems.is_empty() && !groups.is_empty(),
        if problems.is_empty() { format!("{} median parts, pairwise distinct", groups.len()) } else { problems.join("; ") },
    )
}

/// The type id with a trailing `(c,d)` tuple removed.
pub fn median_part(id: &str) -> String {
    match id.rfind('(') {
        Some(i) if id.ends_with(')') && id[i..].contains(',') => id[..i].to_string(),
        _ => id.to_string(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub per_family: BTreeMap<String, usize>,
    pub failures: Vec<String>,
}

pub fn run_all(types: &[ConcreteType]) -> (Vec<Report>, Summary) {
    let mut reports: Vec<Report> = types.par_iter().map(verify_type).collect();
    reports.sort_by(|a, b| (a.family, &a.type_id).cmp(&(b.family, &b.type_id)));
    let mut per_family = BTreeMap::new();
    for r in &reports {
        *per_family.entry(r.family.name().to_string()).or_insert(0) += 1;
    }
    let failures: Vec<String> = reports.iter().filter(|r| !r.pass).map(|r| r.type_id.clone()).collect();
    let summary = Summary { total: reports.len(), passed: reports.len() - failures.len(), per_family, failures };
    (reports, summary)
}

pub fn run_catalog(catalog: &Catalog) -> Result<(Vec<Report>, Summary), CatalogError> {
    Ok(run_all(&catalog.expand_all()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_notation() {
        let g = parse_graph("C:1(1)nodal").unwrap();
        assert_eq!(g.edges.len(), 1);
        let g = parse_graph("a:-1(1); b:-1(1); a-b; a-b").unwrap();
        assert_eq!(g.edges[0].mults, vec![1, 1]);
        let g = parse_graph("p*3:-2(2); q:-1(1); p3-q[2]").unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(g.edges.len(), 3);
        assert!(parse_graph("a-b").is_err());
        let g = parse_graph("g*3:-2(2); g1:-1(2); g3:-2(1)").unwrap();
        assert_eq!((g.vertices[0].selfint, g.vertices[2].weight), (-1, 1));
        assert_eq!(g.edges.len(), 2);
    }

    #[test]
    fn median_parts() {
        assert_eq!(median_part("[3]_{2B1}⟨1⟩(1,2)"), "[3]_{2B1}⟨1⟩");
        assert_eq!(median_part("[3]_{KB}⟨4⟩"), "[3]_{KB}⟨4⟩");
        assert_eq!(median_part("[1;4,5]_K(3)"), "[1;4,5]_K(3)");
    }

    #[test]
    fn empty_run() {
        let (reports, summary) = run_all(&[]);
        assert!(reports.is_empty());
        assert_eq!(summary.total, 0);
    }
}
