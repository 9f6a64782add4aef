use ilab_core::combinatorics::enumerate_ksubsets;
use ilab_core::trees::{branch, derivatives, intertwine, telescoping_defect, tree_decomposition};
use ilab_core::{Cut, MapRule, Point, PointMap, Space, Tree, Window};

fn w(lo: u32, hi: u32) -> Window {
    Window::range(lo, hi).unwrap()
}

// Frozen from an exact rational computation (iterated means, e_1 fallback).
const A1: f64 = 16109.0 / 20580.0;
const A2: f64 = 322873.0 / 617400.0;
const RESIDUALS: [f64; 28] = [
    0.4068082743301402,
    0.26011341724898573,
    0.11093880636154689,
    0.15685069492649667,
    0.07439261418853256,
    0.15183083437456615,
    0.31443744504604565,
    0.22411859982088073,
    0.12218646982602564,
    0.092093670801654,
    0.08887269193391642,
    0.19590164637283486,
    0.33647285104518,
    0.2759475218658892,
    0.29310968853291824,
    0.30852602274530777,
    0.29310968853291824,
    0.3933531202509767,
    0.28955296404276,
    0.28955296404276,
    0.28955296404276,
    0.2977349172838265,
    0.13597959867613987,
    0.19348817280316752,
    0.14757628423821773,
    0.17745383867832848,
    0.17745383867832848,
    0.5229559442824749,
];

#[test]
fn summing_sup_decomposition_matches_frozen_values() {
    let f = PointMap::summing(w(1, 8), 2, Space::sup(8).unwrap()).unwrap();
    let d = tree_decomposition(&f).unwrap();
    assert!((d.a0 - 2.0).abs() <= 1e-12);
    assert!((d.coefficients[0] - A1).abs() <= 1e-12);
    assert!((d.coefficients[1] - A2).abs() <= 1e-12);
    assert_eq!(d.residuals.len(), 28);
    for ((n, got), want) in d.residuals.iter().zip(RESIDUALS) {
        assert!((got - want).abs() <= 1e-12, "{n}: {got} vs {want}");
    }
    assert!((d.residual_stats.max - 0.5229559442824749).abs() <= 1e-12);
    assert!((d.residual_stats.min - 0.07439261418853256).abs() <= 1e-12);
    assert!((d.residual_stats.mean - 0.23644162660619925).abs() <= 1e-12);
    assert!(d.node_residual_max <= 1e-9);
    assert!(d.tree.is_normalized());
}

fn corpus() -> Vec<PointMap> {
    let mut maps = Vec::new();
    for k in 1..=3 {
        let win = w(1, 8);
        maps.push(PointMap::summing(win.clone(), k, Space::sup(8).unwrap()).unwrap());
        for p in [1.0, 2.0, f64::INFINITY] {
            maps.push(PointMap::disjoint(win.clone(), k, Space::lp(p, 8).unwrap()).unwrap());
        }
        let c = Point::Vector(vec![1.0, -2.0, 0.5]);
        maps.push(PointMap::constant(win.clone(), k, Space::lp(2.0, 3).unwrap(), c).unwrap());
        maps.push(
            PointMap::from_fn(win, k, Space::lp(2.0, 2).unwrap(), MapRule::Custom, |n| {
                let s = if n.last() % 2 == 0 { 1.0 } else { -1.0 };
                Ok(Point::Vector(vec![3.0, s]))
            })
            .unwrap(),
        );
    }
    maps
}

#[test]
fn telescoping_reconstruction_on_corpus() {
    for f in corpus() {
        let levels = derivatives(&f).unwrap();
        assert!(telescoping_defect(&f, &levels).unwrap() <= 1e-9);
        let d = tree_decomposition(&f).unwrap();
        assert!(d.node_residual_max <= 1e-9, "{:?}", f.rule());
    }
}

#[test]
fn intertwining_routes_positions() {
    let space = Space::lp(2.0, 8).unwrap();
    for k in 2..=5 {
        for l in 1..k {
            let s = Tree::disjoint_coded(w(1, 8), l, space.clone()).unwrap();
            let t = Tree::summing_coded(w(1, 8), k - l, space.clone()).unwrap();
            for p in Cut::all(k, l) {
                let u = intertwine(&s, &t, &p).unwrap();
                for n in enumerate_ksubsets(&w(1, 8), k).unwrap() {
                    let b = branch(&u, &n).unwrap();
                    let inside: Vec<u32> =
                        p.members().iter().map(|&i| n.as_slice()[i - 1]).collect();
                    let outside: Vec<u32> = p
                        .complement()
                        .iter()
                        .map(|&i| n.as_slice()[i - 1])
                        .collect();
                    for (j, &i) in p.members().iter().enumerate() {
                        assert_eq!(&b[i - 1], s.get(&inside[..=j]).unwrap());
                    }
                    for (j, &i) in p.complement().iter().enumerate() {
                        assert_eq!(&b[i - 1], t.get(&outside[..=j]).unwrap());
                    }
                }
            }
        }
    }
}
