//! Weighted dual graphs, canonical forms and the index-three singularity grammar.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::blowup::{BlowupError, Level, Tower};
use crate::lattice::CurveKind;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Vertex {
    pub id: String,
    pub selfint: i64,
    pub weight: i64,
    pub kind: CurveKind,
}

/// All intersection points between two vertices; `u == v` records the singular point of a
/// nodal (box 1) or cuspidal (box 2) curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub mults: Vec<i64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct WeightedDualGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph has {0} vertices, more than the canonicalization cap of 32")]
    TooLarge(usize),
    #[error("component is not connected")]
    Disconnected,
    #[error("no weighted dual graph template matches {0}")]
    NoTemplate(String),
    #[error("malformed symbol {0:?}")]
    BadSymbol(String),
}

pub const MAX_CANONICAL_VERTICES: usize = 32;

impl WeightedDualGraph {
    pub fn add_vertex(&mut self, id: impl Into<String>, selfint: i64, weight: i64) -> usize {
        self.vertices.push(Vertex { id: id.into(), selfint, weight, kind: CurveKind::Smooth });
        self.vertices.len() - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize, mults: Vec<i64>) {
        let (u, v) = if u <= v { (u, v) } else { (v, u) };
        if let Some(e) = self.edges.iter_mut().find(|e| e.u == u && e.v == v) {
            e.mults.extend(mults);
            e.mults.sort_unstable();
        } else {
            let mut mults = mults;
            mults.sort_unstable();
            self.edges.push(Edge { u, v, mults });
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    fn neighbours(&self) -> Vec<Vec<(usize, Vec<i64>)>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            if e.u != e.v {
                adj[e.u].push((e.v, e.mults.clone()));
                adj[e.v].push((e.u, e.mults.clone()));
            }
        }
        adj
    }

    fn loops(&self, v: usize) -> Vec<i64> {
        let mut out: Vec<i64> = self.edges.iter().filter(|e| e.u == v && e.v == v).flat_map(|e| e.mults.clone()).collect();
        out.sort_unstable();
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.u != e.v && (e.u == v || e.v == v)).map(|e| e.mults.len()).sum()
    }

    /// Vertex sets of the connected components, each sorted, in order of smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.neighbours();
        let mut seen = vec![false; self.vertices.len()];
        let mut out = Vec::new();
        for s in 0..self.vertices.len() {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < comp.len() {
                for (w, _) in &adj[comp[i]] {
                    if !seen[*w] {
                        seen[*w] = true;
                        comp.push(*w);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn induced(&self, keep: &[usize]) -> WeightedDualGraph {
        let pos: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let vertices = keep.iter().map(|&v| self.vertices[v].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter_map(|e| Some(Edge { u: *pos.get(&e.u)?, v: *pos.get(&e.v)?, mults: e.mults.clone() }))
            .collect();
        WeightedDualGraph { vertices, edges }
    }

    /// Same graph with vertices permuted: new index of old vertex i is `perm[i]`.
    pub fn relabeled(&self, perm: &[usize]) -> WeightedDualGraph {
        let mut vertices = self.vertices.clone();
        for (i, v) in self.vertices.iter().enumerate() {
            vertices[perm[i]] = v.clone();
        }
        let mut g = WeightedDualGraph { vertices, edges: Vec::new() };
        for e in &self.edges {
            g.add_edge(perm[e.u], perm[e.v], e.mults.clone());
        }
        g
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("graph \"{}\" {{\n", name.replace('"', "\\\""));
        for (i, v) in self.vertices.iter().enumerate() {
            let tag = match v.kind {
                CurveKind::Smooth => String::new(),
                CurveKind::Nodal => " nodal".into(),
                CurveKind::Cuspidal => " cuspidal".into(),
            };
            out.push_str(&format!(
                "  v{i} [label=\"{}\\n({}, {}){tag}\"];\n",
                v.id.replace('"', "\\\""),
                v.selfint,
                v.weight
            ));
        }
        let mut edges = self.edges.clone();
        edges.sort_by_key(|e| (e.u, e.v));
        for e in &edges {
            for m in &e.mults {
                if *m > 1 {
                    out.push_str(&format!("  v{} -- v{} [label=\"{}\"];\n", e.u, e.v, m));
                } else {
                    out.push_str(&format!("  v{} -- v{};\n", e.u, e.v));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// The weighted dual graph of `Σ coeff·C` on a level of the tower.
pub fn build_dual_graph(components: &[(String, i64)], tower: &Tower, level: Level) -> Result<WeightedDualGraph, BlowupError> {
    let lat = tower.lattice(level);
    let mut g = WeightedDualGraph::default();
    for (id, coeff) in components {
        let cls = tower.class_on(id, level)?;
        let v = g.add_vertex(id.clone(), lat.self_intersection(&cls)?, *coeff);
        let kind = tower.kind_on(id, level);
        g.vertices[v].kind = kind;
        match kind {
            CurveKind::Nodal => g.add_edge(v, v, vec![1]),
            CurveKind::Cuspidal => g.add_edge(v, v, vec![2]),
            CurveKind::Smooth => {}
        }
    }
    for i in 0..components.len() {
        for j in i + 1..components.len() {
            let pts = tower.points_between(&components[i].0, &components[j].0, level)?;
            if !pts.is_empty() {
                g.add_edge(i, j, pts);
            }
        }
    }
    Ok(g)
}

fn kind_code(k: CurveKind) -> u8 {
    match k {
        CurveKind::Smooth => 0,
        CurveKind::Nodal => 1,
        CurveKind::Cuspidal => 2,
    }
}

type Sig = (i64, i64, u8, Vec<i64>);

fn refine(colors: &mut [usize], adj: &[Vec<(usize, Vec<i64>)>]) {
    loop {
        let classes_before = colors.iter().collect::<BTreeSet<_>>().len();
        let sigs: Vec<(usize, Vec<(usize, Vec<i64>)>)> = (0..colors.len())
            .map(|v| {
                let mut nb: Vec<(usize, Vec<i64>)> = adj[v].iter().map(|(w, m)| (colors[*w], m.clone())).collect();
                nb.sort();
                (colors[v], nb)
            })
            .collect();
        let ranked: BTreeSet<&(usize, Vec<(usize, Vec<i64>)>)> = sigs.iter().collect();
        let rank: BTreeMap<&(usize, Vec<(usize, Vec<i64>)>), usize> =
            ranked.into_iter().enumerate().map(|(i, s)| (s, i)).collect();
        for v in 0..colors.len() {
            colors[v] = rank[&sigs[v]];
        }
        if colors.iter().collect::<BTreeSet<_>>().len() == classes_before {
            return;
        }
    }
}

fn leaf_string(g: &WeightedDualGraph, colors: &[usize], base: &[Sig]) -> String {
    let mut order: Vec<usize> = (0..colors.len()).collect();
    order.sort_by_key(|&v| colors[v]);
    let pos: BTreeMap<usize, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut out = String::new();
    for &v in &order {
        let (s, w, k, l) = &base[v];
        out.push_str(&format!("({s},{w},{k},{l:?})"));
    }
    let mut edges: Vec<(usize, usize, Vec<i64>)> = g
        .edges
        .iter()
        .filter(|e| e.u != e.v)
        .map(|e| {
            let (a, b) = (pos[&e.u], pos[&e.v]);
            (a.min(b), a.max(b), e.mults.clone())
        })
        .collect();
    edges.sort();
    for (a, b, m) in edges {
        out.push_str(&format!("{a}-{b}{m:?};"));
    }
    out
}

fn search(g: &WeightedDualGraph, adj: &[Vec<(usize, Vec<i64>)>], base: &[Sig], colors: Vec<usize>, best: &mut Option<String>) {
    let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (v, &c) in colors.iter().enumerate() {
        cells.entry(c).or_default().push(v);
    }
    let Some((_, cell)) = cells.iter().find(|(_, vs)| vs.len() > 1) else {
        let s = leaf_string(g, &colors, base);
        if best.as_ref().is_none_or(|b| s < *b) {
            *best = Some(s);
        }
        return;
    };
    for &pick in cell {
        let mut next: Vec<usize> = colors.iter().map(|&c| 2 * c + 1).collect();
        next[pick] -= 1;
        refine(&mut next, adj);
        search(g, adj, base, next, best);
    }
}

fn canonical_connected(g: &WeightedDualGraph) -> String {
    let base: Vec<Sig> =
        (0..g.len()).map(|v| (g.vertices[v].selfint, g.vertices[v].weight, kind_code(g.vertices[v].kind), g.loops(v))).collect();
    let ranked: BTreeSet<&Sig> = base.iter().collect();
    let rank: BTreeMap<&Sig, usize> = ranked.into_iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut colors: Vec<usize> = base.iter().map(|s| rank[s]).collect();
    let adj = g.neighbours();
    refine(&mut colors, &adj);
    let mut best = None;
    search(g, &adj, &base, colors, &mut best);
    best.unwrap_or_default()
}

/// A string equal for two graphs iff they are isomorphic as weighted graphs.
pub fn canonical_form(g: &WeightedDualGraph) -> Result<String, GraphError> {
    if g.len() > MAX_CANONICAL_VERTICES {
        return Err(GraphError::TooLarge(g.len()));
    }
    if g.is_empty() {
        return Ok("∅".into());
    }
    let mut parts: Vec<String> = g.components().iter().map(|c| canonical_connected(&g.induced(c))).collect();
    parts.sort();
    Ok(parts.join(" | "))
}

/// One singularity type: `A_t(l,m)` with `l ≤ m`, or `D_t(m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Atom {
    A { t: u32, l: u8, m: u8 },
    D { t: u32, m: u8 },
}

impl Atom {
    pub fn a(t: u32, l: u8, m: u8) -> Atom {
        Atom::A { t, l: l.min(m), m: l.max(m) }
    }

    pub fn vertices(&self) -> u32 {
        match *self {
            Atom::A { t, .. } | Atom::D { t, .. } => t,
        }
    }

    fn sort_key(&self) -> (u8, std::cmp::Reverse<u32>, u8, u8) {
        match *self {
            Atom::D { t, m } => (0, std::cmp::Reverse(t), m, 0),
            Atom::A { t, l, m } => (1, std::cmp::Reverse(t), l, m),
        }
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

fn subscript(n: u32) -> String {
    n.to_string().chars().map(|c| char::from_u32(0x2080 + c.to_digit(10).unwrap()).unwrap()).collect()
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Atom::A { t: 1, l, m } if l == m => write!(f, "A₁({l})"),
            Atom::A { t, l, m } => write!(f, "A{}({l},{m})", subscript(t)),
            Atom::D { t, m } => write!(f, "D{}({m})", subscript(t)),
        }
    }
}

/// A multiset of atoms, kept sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SingSymbol(pub Vec<Atom>);

impl SingSymbol {
    pub fn new(mut atoms: Vec<Atom>) -> Self {
        atoms.sort();
        SingSymbol(atoms)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for SingSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.0.len() {
            let run = self.0[i..].iter().take_while(|a| **a == self.0[i]).count();
            if !first {
                f.write_str("+")?;
            }
            if run > 1 {
                write!(f, "{run}")?;
            }
            write!(f, "{}", self.0[i])?;
            first = false;
            i += run;
        }
        Ok(())
    }
}

impl Serialize for SingSymbol {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The template graph of an atom, or `None` when the grammar has no such entry.
///
/// Vertex labels are `(−c, w)`. Chains read left to right; forks hang two `(−2, 1)` leaves.
pub fn template(atom: Atom) -> Option<WeightedDualGraph> {
    let chain: Vec<(i64, i64)> = match atom {
        Atom::A { t: 0, .. } | Atom::D { t: 0..=3, .. } => return None,
        Atom::A { l, m, .. } if l > m || l == 0 || m > 2 => return None,
        Atom::D { m, .. } if m == 0 || m > 2 => return None,
        Atom::A { t: 1, l, m } => match (l, m) {
            (1, 1) => vec![(3, 1)],
            (2, 2) => vec![(6, 2)],
            _ => return None,
        },
        Atom::A { t: 2, l, m } => match (l, m) {
            (1, 2) => vec![(2, 1), (5, 2)],
            (2, 2) => vec![(4, 2), (4, 2)],
            _ => return None,
        },
        Atom::A { t: 3, l, m } => match (l, m) {
            (1, 1) => vec![(2, 1), (4, 2), (2, 1)],
            (1, 2) => vec![(2, 1), (3, 2), (4, 2)],
            _ => vec![(4, 2), (2, 2), (4, 2)],
        },
        Atom::A { t, l, m } => {
            let t = t as usize;
            let mut v = vec![(2, 2); t];
            match (l, m) {
                (1, 1) => {
                    v[0] = (2, 1);
                    v[1] = (3, 2);
                    v[t - 2] = (3, 2);
                    v[t - 1] = (2, 1);
                }
                (1, 2) => {
                    v[0] = (2, 1);
                    v[1] = (3, 2);
                    v[t - 1] = (4, 2);
                }
                _ => {
                    v[0] = (4, 2);
                    v[t - 1] = (4, 2);
                }
            }
            v
        }
        Atom::D { t: 4, m: 1 } => {
            return Some(fork(&[(3, 2)], &[(2, 1)]));
        }
        Atom::D { t, m } => {
            let t = t as usize;
            // the long arm, ending at the fork vertex
            let mut arm = vec![(2, 2); t - 2];
            if m == 1 {
                arm[0] = (2, 1);
                arm[1] = (3, 2);
            } else {
                arm[0] = (4, 2);
            }
            return Some(fork(&arm, &[]));
        }
    };
    let mut g = WeightedDualGraph::default();
    for (i, (c, w)) in chain.iter().enumerate() {
        g.add_vertex(format!("v{i}"), -c, *w);
        if i > 0 {
            g.add_edge(i - 1, i, vec![1]);
        }
    }
    Some(g)
}

/// A chain whose last vertex carries two extra `(−2, 1)` leaves (plus `extra` leaves before them).
fn fork(arm: &[(i64, i64)], extra: &[(i64, i64)]) -> WeightedDualGraph {
    let mut g = WeightedDualGraph::default();
    for (i, (c, w)) in arm.iter().enumerate() {
        g.add_vertex(format!("v{i}"), -c, *w);
        if i > 0 {
            g.add_edge(i - 1, i, vec![1]);
        }
    }
    let hub = arm.len() - 1;
    for (c, w) in extra.iter().chain([(2, 1), (2, 1)].iter()) {
        let v = g.add_vertex(format!("v{}", g.len()), -c, *w);
        g.add_edge(hub, v, vec![1]);
    }
    g
}

/// Match a connected graph against the grammar templates.
pub fn classify_component(g: &WeightedDualGraph) -> Result<Atom, GraphError> {
    if g.is_empty() || g.components().len() != 1 {
        return Err(GraphError::Disconnected);
    }
    let t = g.len() as u32;
    let target = canonical_form(g)?;
    let mut candidates = vec![Atom::a(t, 1, 1), Atom::a(t, 1, 2), Atom::a(t, 2, 2)];
    if t >= 4 {
        candidates.extend([Atom::D { t, m: 1 }, Atom::D { t, m: 2 }]);
    }
    for atom in candidates {
        if let Some(tpl) = template(atom) {
            if canonical_form(&tpl)? == target {
                return Ok(atom);
            }
        }
    }
    Err(GraphError::NoTemplate(target))
}

pub fn classify_symbol_sum(g: &WeightedDualGraph) -> Result<SingSymbol, GraphError> {
    let atoms = g.components().iter().map(|c| classify_component(&g.induced(c))).collect::<Result<Vec<_>, _>>()?;
    Ok(SingSymbol::new(atoms))
}

/// Parses a formatted symbol such as `D₄(1)+3A₁(1)` or `A_3(1,1)+2A_1(1)`.
pub fn parse_symbol(s: &str) -> Result<SingSymbol, GraphError> {
    let bad = || GraphError::BadSymbol(s.to_string());
    let norm: String = s
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c as u32 {
            0x2080..=0x2089 => char::from_digit(c as u32 - 0x2080, 10).unwrap(),
            _ => c,
        })
        .collect();
    if norm == "0" || norm.is_empty() {
        return Ok(SingSymbol::default());
    }
    let mut atoms = Vec::new();
    for item in norm.split('+') {
        let letter_at = item.find(['A', 'D']).ok_or_else(bad)?;
        let count: usize = if letter_at == 0 { 1 } else { item[..letter_at].parse().map_err(|_| bad())? };
        let rest = &item[letter_at + 1..];
        let rest = rest.strip_prefix('_').unwrap_or(rest);
        let open = rest.find('(').ok_or_else(bad)?;
        let t: u32 = rest[..open].trim_matches(['{', '}']).parse().map_err(|_| bad())?;
        let inner = rest[open + 1..].strip_suffix(')').ok_or_else(bad)?;
        let ws: Vec<u8> = inner.split(',').map(|w| w.parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
        let atom = match (&item[letter_at..=letter_at], ws.as_slice()) {
            ("A", [w]) => Atom::a(t, *w, *w),
            ("A", [l, m]) => Atom::a(t, *l, *m),
            ("D", [m]) => Atom::D { t, m: *m },
            _ => return Err(bad()),
        };
        atoms.extend(std::iter::repeat_n(atom, count));
    }
    Ok(SingSymbol::new(atoms))
}
