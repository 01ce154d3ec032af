use delpezzo3::blowup::simple_cluster;
use delpezzo3::{canonical_form, eliminate, BaseSurface, DivClass, Lattice, Level, Stage, SymbolicCurve, WeightedDualGraph};
use proptest::prelude::*;

fn surface() -> impl Strategy<Value = BaseSurface> {
    prop_oneof![Just(BaseSurface::ProjectivePlane), (0u32..=7).prop_map(BaseSurface::Hirzebruch)]
}

fn class_on(base: BaseSurface, blowups: usize) -> impl Strategy<Value = DivClass> {
    let plane = base == BaseSurface::ProjectivePlane;
    (-6i64..=6, -6i64..=6, prop::collection::vec(-3i64..=3, blowups)).prop_map(move |(a, b, exc)| DivClass {
        base: [a, if plane { 0 } else { b }],
        exc,
    })
}

fn setting() -> impl Strategy<Value = (Lattice, DivClass, DivClass, DivClass)> {
    (surface(), 0usize..=9).prop_flat_map(|(base, k)| {
        (Just(Lattice::new(base, k)), class_on(base, k), class_on(base, k), class_on(base, k))
    })
}

proptest! {
    #[test]
    fn intersection_is_symmetric_and_bilinear((lat, a, b, c) in setting(), m in -4i64..=4) {
        let ab = lat.intersection(&a, &b).unwrap();
        prop_assert_eq!(ab, lat.intersection(&b, &a).unwrap());
        let lhs = lat.intersection(&(&(m * &a) + &b), &c).unwrap();
        let rhs = m * lat.intersection(&a, &c).unwrap() + lat.intersection(&b, &c).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn canonical_degree_drops_by_one_per_blowup(base in surface(), k in 0usize..=12) {
        let lat = Lattice::new(base, k);
        let kk = lat.self_intersection(&lat.canonical_class()).unwrap();
        prop_assert_eq!(kk, base.canonical_degree() - k as i64);
    }

    #[test]
    fn genus_is_integral((lat, a, _, _) in setting()) {
        // C² + C·K is always even on these lattices
        prop_assert!(lat.arithmetic_genus(&a).is_ok());
    }

    #[test]
    fn exceptional_curves_are_minus_one_rational(base in surface(), k in 1usize..=9, i in 0usize..9) {
        let i = i % k;
        let lat = Lattice::new(base, k);
        let e = DivClass::e(i);
        prop_assert_eq!(lat.self_intersection(&e).unwrap(), -1);
        prop_assert_eq!(lat.arithmetic_genus(&e).unwrap(), 0);
        prop_assert_eq!(lat.intersection(&lat.canonical_class(), &e).unwrap(), -1);
    }

    #[test]
    fn strict_transform_drops_self_intersection(d in 1i64..=4, k in 1usize..=6, through in 0usize..=6) {
        // a curve of degree d through the first `through` points of a chain of length k
        let p = through.min(k);
        let curve = SymbolicCurve { id: "C".into(), cls: DivClass::plane(d), kind: delpezzo3::CurveKind::Smooth, coefficient: 1 };
        let tower = eliminate(BaseSurface::ProjectivePlane, vec![curve], vec![simple_cluster("P", Stage::X, k, &[("C", p)])], vec![]).unwrap();
        let lat = tower.lattice(Level::Z);
        let c = tower.class_on("C", Level::Z).unwrap();
        prop_assert_eq!(lat.self_intersection(&c).unwrap(), d * d - p as i64);
        let total: i64 = (1..=k).map(|j| lat.intersection(&c, &tower.chain_class("P", j).unwrap()).unwrap()).sum();
        // the strict transform meets the chain exactly once when it passes through the cluster
        prop_assert_eq!(total, i64::from(p > 0));
    }

    #[test]
    fn canonical_form_ignores_labels(
        labels in prop::collection::vec((-6i64..=-1, 1i64..=2), 1..=9),
        parents in prop::collection::vec(0usize..9, 9),
        seed in any::<u64>(),
    ) {
        let mut g = WeightedDualGraph::default();
        for (i, (s, w)) in labels.iter().enumerate() {
            g.add_vertex(format!("v{i}"), *s, *w);
            if i > 0 {
                g.add_edge(parents[i] % i, i, vec![1]);
            }
        }
        let n = g.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut x = seed;
        for i in (1..n).rev() {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (x >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(canonical_form(&g).unwrap(), canonical_form(&g.relabeled(&perm)).unwrap());
    }
}
