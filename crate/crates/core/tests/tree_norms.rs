use ilab_core::trees::branch_norm_range;
use ilab_core::{Point, Space, Tree, Window};

const COEFFS: &[&[f64]] = &[
    &[1.0, -1.0],
    &[3.0, 4.0],
    &[2.0, -1.0, 1.0],
    &[0.5, -2.0, 3.0],
    &[1.0, 2.0, 3.0, 4.0],
];

/// Bases supported off the coordinates the tree uses.
fn bases(dim: usize) -> Vec<Point> {
    let mut out = vec![Point::zeros(dim)];
    for scale in [0.5, -3.0] {
        let mut v = vec![0.0; dim];
        for (i, x) in v.iter_mut().enumerate().skip(8) {
            *x = scale * (i as f64 - 7.0);
        }
        out.push(Point::Vector(v));
    }
    out
}

#[test]
fn disjoint_trees_have_monotone_projections() {
    let window = Window::range(1, 8).unwrap();
    for p in [1.0, 2.0, f64::INFINITY] {
        let space = Space::lp(p, 16).unwrap();
        for coeffs in COEFFS {
            let k = coeffs.len();
            let tree = Tree::disjoint_coded(window.clone(), k, space.clone()).unwrap();
            for base in bases(16) {
                let (_, full) = branch_norm_range(&tree, coeffs, Some(&base)).unwrap();
                for j in 0..k {
                    let mut head = coeffs.to_vec();
                    head[j..].iter_mut().for_each(|a| *a = 0.0);
                    let (_, partial) = branch_norm_range(&tree, &head, Some(&base)).unwrap();
                    assert!(
                        partial <= full,
                        "p={p} {coeffs:?} j={j}: {partial} > {full}"
                    );
                }
                let (_, bare) = branch_norm_range(&tree, coeffs, None).unwrap();
                assert!(bare <= 2.0 * full);
            }
        }
    }
}

#[test]
fn disjoint_branch_norms_do_not_depend_on_the_branch() {
    let tree =
        Tree::disjoint_coded(Window::range(1, 8).unwrap(), 3, Space::lp(2.0, 8).unwrap()).unwrap();
    let (lo, hi) = branch_norm_range(&tree, &[2.0, -1.0, 2.0], None).unwrap();
    assert_eq!((lo, hi), (3.0, 3.0));
}
