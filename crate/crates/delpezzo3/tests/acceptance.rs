//! End-to-end acceptance run over the shipped catalog.
//!
//! Prints one PASS/FAIL line per criterion and fails if any criterion fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use delpezzo3::blowup::simple_cluster;
use delpezzo3::dualgraph::template;
use delpezzo3::verifier::{graph_of, verify_distinctness};
use delpezzo3::{
    canonical_form, classify_component, eliminate, realize, run_all, verify_type, Atom, BaseSurface, Catalog,
    ConcreteType, CurveKind, DivClass, Family, Level, Residual, Stage, WeightedDualGraph,
};
use rand::rngs::StdRng;
use rand::seq::{IndexedMutRandom, IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn all_types() -> Vec<ConcreteType> {
    Catalog::builtin().unwrap().expand_all().unwrap()
}

fn counts() -> Outcome {
    let start = Instant::now();
    let types = all_types();
    let mut by: BTreeMap<Family, usize> = BTreeMap::new();
    for t in &types {
        *by.entry(t.family).or_default() += 1;
    }
    let elapsed = start.elapsed();
    let want = [(Family::Median, 77), (Family::TetBig, 45), (Family::TetNonbig, 115), (Family::TetTrivial, 63)];
    let ok = want.iter().all(|(f, n)| by.get(f) == Some(n)) && elapsed < Duration::from_secs(1);
    let got: Vec<String> = want.iter().map(|(f, _)| format!("{f}: {}", by.get(f).copied().unwrap_or(0))).collect();
    outcome(ok, format!("{} in {elapsed:.2?}", got.join(", ")))
}

fn full_verification() -> Outcome {
    let types = all_types();
    let start = Instant::now();
    let (_, summary) = run_all(&types);
    let elapsed = start.elapsed();
    let ok = summary.total == 300 && summary.failures.is_empty() && elapsed < Duration::from_secs(5);
    outcome(ok, format!("{}/{} pass in {elapsed:.2?}; failures: {:?}", summary.passed, summary.total, summary.failures))
}

fn symbols() -> Outcome {
    let mut bad = Vec::new();
    for t in all_types() {
        let r = verify_type(&t);
        match &r.computed_em {
            Some(s) if *s == t.expected_em => {}
            other => bad.push(format!("{}: {:?} vs {}", t.id, other.as_ref().map(|s| s.to_string()), t.expected_em)),
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "300 symbols match".into() } else { bad.join("; ") })
}

/// Orthogonality of L = -3K - E against a smooth rational component of E, written on the graph:
/// (3 - w)·c = 6 - Σ w_neighbour, where the component is a (-c)-curve of weight w.
fn local_equation(g: &WeightedDualGraph) -> bool {
    (0..g.len()).all(|v| {
        let c = -g.vertices[v].selfint;
        let w = g.vertices[v].weight;
        let nbr: i64 = g
            .edges
            .iter()
            .filter(|e| e.u != e.v && (e.u == v || e.v == v))
            .map(|e| {
                let other = if e.u == v { e.v } else { e.u };
                g.vertices[other].weight * e.mults.iter().sum::<i64>()
            })
            .sum();
        (3 - w) * c == 6 - nbr
    })
}

fn is_simple_tree(g: &WeightedDualGraph) -> bool {
    let simple = g.edges.iter().all(|e| e.u != e.v && e.mults == [1]);
    simple && g.edges.len() + 1 == g.len() && g.components().len() == 1
}

fn random_graph(rng: &mut StdRng) -> WeightedDualGraph {
    let n = rng.random_range(1..=8);
    let mut g = WeightedDualGraph::default();
    for i in 0..n {
        g.add_vertex(format!("v{i}"), -rng.random_range(1..=6), rng.random_range(1..=2));
        if i > 0 {
            let p = rng.random_range(0..i);
            g.add_edge(p, i, vec![1]);
        }
    }
    if n > 2 && rng.random_bool(0.2) {
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        if a != b {
            g.add_edge(a, b, vec![rng.random_range(1..=2)]);
        }
    }
    g
}

/// A grammar template with one label nudged or one extra leaf.
fn near_miss(rng: &mut StdRng, atoms: &[Atom]) -> WeightedDualGraph {
    let mut g = template(*atoms.choose(rng).unwrap()).unwrap();
    let v = rng.random_range(0..g.len());
    match rng.random_range(0..3) {
        0 => g.vertices[v].selfint += if rng.random_bool(0.5) { 1 } else { -1 },
        1 => g.vertices[v].weight = 3 - g.vertices[v].weight,
        _ => {
            let leaf = g.add_vertex("x", -rng.random_range(2..=4), rng.random_range(1..=2));
            g.add_edge(v, leaf, vec![1]);
        }
    }
    g
}

fn grammar() -> Outcome {
    let mut atoms = Vec::new();
    for t in 1..=12u32 {
        for (l, m) in [(1, 1), (1, 2), (2, 2)] {
            atoms.push(Atom::a(t, l, m));
        }
        if t >= 4 {
            atoms.push(Atom::D { t, m: 1 });
            atoms.push(Atom::D { t, m: 2 });
        }
    }
    atoms.retain(|a| template(*a).is_some());
    let mut problems = Vec::new();
    for a in &atoms {
        if !local_equation(&template(*a).unwrap()) {
            problems.push(format!("template {a} breaks the local equation"));
        }
    }

    let mut components = 0;
    for t in all_types() {
        let g = realize(&t).map_err(|e| e.to_string()).and_then(|r| graph_of(&r, Level::M));
        match g {
            Ok(g) => {
                for c in g.components() {
                    components += 1;
                    if let Err(e) = classify_component(&g.induced(&c)) {
                        problems.push(format!("{}: {e}", t.id));
                    }
                }
            }
            Err(e) => problems.push(format!("{}: {e}", t.id)),
        }
    }

    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut rejected = 0;
    let mut tries = 0;
    while rejected < 1000 && tries < 100_000 {
        tries += 1;
        let g = if tries % 2 == 0 { random_graph(&mut rng) } else { near_miss(&mut rng, &atoms) };
        if is_simple_tree(&g) && local_equation(&g) {
            continue;
        }
        if let Ok(a) = classify_component(&g) {
            problems.push(format!("out-of-grammar graph accepted as {a}: {}", canonical_form(&g).unwrap()));
        }
        rejected += 1;
    }
    if rejected < 1000 {
        problems.push(format!("only {rejected} fuzz graphs generated"));
    }
    outcome(
        problems.is_empty(),
        if problems.is_empty() {
            format!("{components} E_M components match templates; {rejected} fuzzed graphs rejected")
        } else {
            problems.join("; ")
        },
    )
}

fn chains() -> Outcome {
    let mut bad = Vec::new();
    for k in 1..=8usize {
        let tower = eliminate(BaseSurface::ProjectivePlane, vec![], vec![simple_cluster("P", Stage::X, k, &[])], vec![]).unwrap();
        let lat = tower.lattice(Level::Z);
        let canon = lat.canonical_class();
        let mut k_rel = DivClass::zero();
        for j in 1..=k {
            // Γ_j = e_j − e_{j+1}, Γ_k = e_k, written directly in the exceptional basis
            let want = if j < k { DivClass::e(j - 1) - DivClass::e(j) } else { DivClass::e(j - 1) };
            let got = tower.chain_class("P", j).unwrap();
            if got != want {
                bad.push(format!("k={k}: Γ_{j} is {got:?}"));
            }
            let s = lat.self_intersection(&got).unwrap();
            if s != if j < k { -2 } else { -1 } {
                bad.push(format!("k={k}: Γ_{j}² = {s}"));
            }
            let minus_k = -lat.intersection(&canon, &got).unwrap();
            if minus_k != i64::from(j == k) {
                bad.push(format!("k={k}: -K·Γ_{j} = {minus_k}"));
            }
            k_rel = &k_rel + &(j as i64 * &got);
        }
        if k_rel != tower.relative_canonical(Stage::X) {
            bad.push(format!("k={k}: K_rel is not Σ j·Γ_j"));
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "k = 1..8 straight chains".into() } else { bad.join("; ") })
}

fn degrees() -> Outcome {
    let mut bad = Vec::new();
    for t in all_types() {
        let Ok(r) = realize(&t) else {
            bad.push(format!("{}: not realizable", t.id));
            continue;
        };
        let lz = r.tower.lattice(Level::Z);
        let deg_z = r.tower.degree(Stage::Z);
        if lz.intersection(&r.l_z, &r.e_z_class).unwrap() != 2 * deg_z {
            bad.push(format!("{}: (L_Z.E_Z) != 2 deg Δ_Z", t.id));
        }
        if let (Some(lx), Some(ex)) = (&r.l_x, &r.e_x_class) {
            let deg_x = r.tower.degree(Stage::X);
            if r.tower.lattice(Level::X).intersection(lx, ex).unwrap() != 2 * (deg_x + deg_z) {
                bad.push(format!("{}: (L_X.E_X) != 2(deg Δ_X + deg Δ_Z)", t.id));
            }
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "both identities on every entry".into() } else { bad.join("; ") })
}

fn genus_drop() -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    for t in all_types() {
        let r = realize(&t).unwrap();
        let bottom = r.bottom();
        let lb = r.tower.lattice(bottom);
        let lm = r.tower.lattice(Level::M);
        // K_M minus the pullback of K on the bottom level
        let k_rel = &lm.canonical_class() - &lb.canonical_class();
        for (id, _) in r.divisor(bottom) {
            let c = r.tower.class_on(id, bottom).unwrap();
            let c_m = r.tower.class_on(id, Level::M).unwrap();
            let pa = |lat: &delpezzo3::Lattice, d: &DivClass| {
                let s = lat.self_intersection(d).unwrap();
                let kd = lat.intersection(&lat.canonical_class(), d).unwrap();
                (s + kd) / 2 + 1
            };
            let lhs = lb.self_intersection(&c).unwrap() - lm.self_intersection(&c_m).unwrap() - lm.intersection(&k_rel, &c_m).unwrap();
            if lhs != 2 * pa(&lb, &c) - 2 * pa(&lm, &c_m) {
                bad.push(format!("{}: {id}", t.id));
            }
            if r.tower.curve(id).is_some_and(|cv| cv.kind != CurveKind::Smooth) && pa(&lb, &c) != 1 {
                bad.push(format!("{}: singular {id} is not of genus one", t.id));
            }
            checked += 1;
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { format!("{checked} strict transforms") } else { bad.join("; ") })
}

fn distinctness() -> Outcome {
    let types = all_types();
    let check = verify_distinctness(&types);
    let ez = |id: &str| {
        let t = types.iter().find(|t| t.id == id).unwrap();
        canonical_form(&graph_of(&realize(t).unwrap(), Level::Z).unwrap()).unwrap()
    };
    let pairs_ok = ez("[3]_{NA}") != ez("[3]_{CA}") && ez("[3]_{2G1}") != ez("[3]_{2G2}");
    outcome(check.passed() && pairs_ok, check.detail)
}

#[derive(Clone, Copy, Debug)]
enum Fault {
    Coefficient,
    ChainLength,
    BranchBit,
    ResidualMult,
}

/// Applies a unit perturbation, or returns None when the entry has nothing to perturb.
fn perturb(t: &ConcreteType, fault: Fault, rng: &mut StdRng) -> Option<ConcreteType> {
    let mut t = t.clone();
    match fault {
        Fault::Coefficient => {
            let idx: Vec<usize> = (0..t.curves.len()).filter(|&i| t.curves[i].coefficient > 0).collect();
            let c = &mut t.curves[*idx.choose(rng)?];
            c.coefficient = if c.coefficient == 1 { 2 } else { c.coefficient - 1 };
        }
        Fault::ChainLength => {
            let c = t.clusters.choose_mut(rng)?;
            let j = c.chain.len() + 1;
            c.chain.push(delpezzo3::ChainPoint { j, branch: BTreeMap::new() });
        }
        Fault::BranchBit => {
            let candidates: Vec<(usize, String)> = t
                .clusters
                .iter()
                .enumerate()
                .flat_map(|(i, c)| c.chain[0].branch.keys().map(move |k| (i, k.clone())))
                .collect();
            let (i, curve) = candidates.choose(rng)?.clone();
            let c = &mut t.clusters[i];
            let last = (1..=c.chain.len()).rev().find(|&j| c.branch(j, &curve) > 0).unwrap();
            let b = c.chain[last - 1].branch.get_mut(&curve).unwrap();
            if *b > 1 {
                *b -= 1;
            } else {
                c.chain[last - 1].branch.remove(&curve);
                if last == 1 {
                    c.locus.retain(|x| *x != curve);
                }
            }
        }
        Fault::ResidualMult => {
            if let Some(r) = t.residual.choose_mut(rng) {
                r.mult += 1;
            } else {
                let ids: Vec<String> = t.curves.iter().map(|c| c.id.clone()).collect();
                if ids.len() < 2 {
                    return None;
                }
                let pick: Vec<&String> = ids.choose_multiple(rng, 2).collect();
                t.residual.push(Residual { curves: [pick[0].clone(), pick[1].clone()], mult: 1 });
            }
        }
    }
    Some(t)
}

fn fault_injection() -> Outcome {
    let types = all_types();
    let mut rng = StdRng::seed_from_u64(20);
    let mut lines = Vec::new();
    let mut ok = true;
    for fault in [Fault::Coefficient, Fault::ChainLength, Fault::BranchBit, Fault::ResidualMult] {
        let mut order: Vec<&ConcreteType> = types.iter().collect();
        order.shuffle(&mut rng);
        let (mut sampled, mut flipped) = (0, 0);
        let mut survivors = Vec::new();
        for t in order {
            if sampled == 25 {
                break;
            }
            let Some(bad) = perturb(t, fault, &mut rng) else { continue };
            sampled += 1;
            if verify_type(&bad).pass {
                survivors.push(t.id.clone());
            } else {
                flipped += 1;
            }
        }
        ok &= sampled >= 20 && flipped == sampled;
        lines.push(format!("{fault:?} {flipped}/{sampled}{}", if survivors.is_empty() { String::new() } else { format!(" survivors {survivors:?}") }));
    }
    outcome(ok, lines.join(", "))
}

fn canonicalization() -> Outcome {
    let mut rng = StdRng::seed_from_u64(10);
    let mut bad = Vec::new();
    let mut graphs = 0;
    for t in all_types() {
        let g = graph_of(&realize(&t).unwrap(), Level::M).unwrap();
        let want = canonical_form(&g).unwrap();
        let mut perm: Vec<usize> = (0..g.len()).collect();
        for _ in 0..100 {
            perm.shuffle(&mut rng);
            if canonical_form(&g.relabeled(&perm)).unwrap() != want {
                bad.push(t.id.clone());
                break;
            }
        }
        graphs += 1;
    }
    outcome(bad.is_empty(), if bad.is_empty() { format!("{graphs} graphs x 100 relabelings") } else { bad.join(", ") })
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("catalog counts", counts),
        ("full verification", full_verification),
        ("symbol tables", symbols),
        ("grammar closure", grammar),
        ("elimination chains", chains),
        ("degree identities", degrees),
        ("genus drop", genus_drop),
        ("E_Z distinctness", distinctness),
        ("fault injection", fault_injection),
        ("canonicalization", canonicalization),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        println!("{} criterion {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
        if !o.pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
