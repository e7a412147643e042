//! Property tests for the algebraic invariants the pipeline relies on.

use num_complex::Complex64;
use proptest::prelude::*;
use tubekit::groups::{AbelianGroup, GroupElement};
use tubekit::modular::{compare_reference, reference, verlinde, MatchOptions};
use tubekit::numerics::{csum, gcd, root_of_unity, snap_root_of_unity, CMatrix, Precision};
use tubekit::tube::{Tube, TubeElement};

fn twod2() -> &'static Tube {
    // The tube caches products in a `RefCell`, so each test thread builds its own.
    thread_local! {
        static TUBE: &'static Tube = {
            let p = tubekit::ghdata::preset("twod2").unwrap();
            Box::leak(Box::new(Tube::new(&p.data, &p.extension).unwrap()))
        };
    }
    TUBE.with(|t| *t)
}

fn z4() -> &'static Tube {
    thread_local! {
        static TUBE: &'static Tube = {
            let p = tubekit::ghdata::preset("z4").unwrap();
            Box::leak(Box::new(Tube::new(&p.data, &p.extension).unwrap()))
        };
    }
    TUBE.with(|t| *t)
}

/// Three composable basis labels `a: x -> y`, `b: y -> z`, `c: z -> w`,
/// picked from `seeds`.
fn composable(tube: &Tube, seeds: [usize; 3]) -> [usize; 3] {
    let a = seeds[0] % tube.len();
    let from_b = tube.labels_from(tube.label(a).target as usize);
    let b = from_b[seeds[1] % from_b.len()];
    let from_c = tube.labels_from(tube.label(b).target as usize);
    let c = from_c[seeds[2] % from_c.len()];
    [a, b, c]
}

fn group_strategy() -> impl Strategy<Value = AbelianGroup> {
    prop::collection::vec(2u32..6, 1..3).prop_map(|orders| AbelianGroup::new(orders).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_laws(g in group_strategy(), i in 0usize..64, j in 0usize..64, k in 0usize..64) {
        let n = g.order();
        let (a, b, c) = (GroupElement(i % n), GroupElement(j % n), GroupElement(k % n));
        prop_assert_eq!(g.add(a, b), g.add(b, a));
        prop_assert_eq!(g.add(g.add(a, b), c), g.add(a, g.add(b, c)));
        prop_assert_eq!(g.add(a, g.neg(a)), g.zero());
        prop_assert_eq!(g.sub(a, b), g.add(a, g.neg(b)));
        prop_assert_eq!(g.element(&g.coords(a)), a);
    }

    #[test]
    fn characters_are_homomorphisms(g in group_strategy(), i in 0usize..64, j in 0usize..64) {
        let n = g.order();
        let (a, b) = (GroupElement(i % n), GroupElement(j % n));
        for chi in g.characters() {
            let lhs = chi.eval(g.add(a, b));
            prop_assert!((lhs - chi.eval(a) * chi.eval(b)).norm() < 1e-12);
        }
    }

    #[test]
    fn roots_of_unity_snap_back(q in 1u64..400, p in 0u64..400) {
        let p = p % q;
        let g = gcd(p, q);
        let (p, q) = (p / g, q / g);
        let r = snap_root_of_unity(root_of_unity(p as i64, q), 400, 1e-9).unwrap();
        prop_assert_eq!((r.p, r.q), (p, q));
        prop_assert_eq!(r.to_string().parse::<tubekit::numerics::RootOfUnity>().unwrap(), r);
    }

    #[test]
    fn compensated_sum_agrees(xs in prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 0..200)) {
        let zs: Vec<Complex64> = xs.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
        let plain = csum(Precision::Standard, zs.iter().copied());
        let comp = csum(Precision::Compensated, zs.iter().copied());
        prop_assert!((plain - comp).norm() <= 1e-9 * (1.0 + zs.len() as f64));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tube_product_is_associative(seeds in any::<[usize; 3]>(), big in any::<bool>()) {
        let tube = if big { z4() } else { twod2() };
        let [a, b, c] = composable(tube, seeds);
        let (x, y, z) = (TubeElement::basis(a), TubeElement::basis(b), TubeElement::basis(c));
        let left = tube.product(&tube.product(&x, &y).unwrap(), &z).unwrap();
        let right = tube.product(&x, &tube.product(&y, &z).unwrap()).unwrap();
        prop_assert!(left.distance(&right) < 1e-9, "labels {a} {b} {c}: {}", left.distance(&right));
    }

    #[test]
    fn adjoint_reverses_products(seeds in any::<[usize; 3]>()) {
        let tube = twod2();
        let [a, b, _] = composable(tube, seeds);
        let (x, y) = (TubeElement::basis(a), TubeElement::basis(b));
        let lhs = tube.adjoint(&tube.product(&x, &y).unwrap()).unwrap();
        let rhs = tube.product(&tube.adjoint(&y).unwrap(), &tube.adjoint(&x).unwrap()).unwrap();
        prop_assert!(lhs.distance(&rhs) < 1e-9);
        let back = tube.adjoint(&tube.adjoint(&x).unwrap()).unwrap();
        prop_assert!(back.distance(&x) < 1e-12);
    }

    #[test]
    fn units_act_trivially(seed in any::<usize>()) {
        let tube = z4();
        let a = seed % tube.len();
        let l = tube.label(a);
        let x = TubeElement::basis(a);
        let left = TubeElement::basis(tube.unit_of(l.source as usize));
        let right = TubeElement::basis(tube.unit_of(l.target as usize));
        prop_assert!(tube.product(&left, &x).unwrap().distance(&x) < 1e-12);
        prop_assert!(tube.product(&x, &right).unwrap().distance(&x) < 1e-12);
    }

    #[test]
    fn reference_matching_recovers_permutations(rest in Just((1..10usize).collect::<Vec<_>>()).prop_shuffle()) {
        // Index 0 is the unit by convention, so only the other objects move.
        let perm: Vec<usize> = std::iter::once(0).chain(rest).collect();
        let md = reference("twod2").unwrap();
        let mut shuffled = md.clone();
        shuffled.s = CMatrix::from_fn(10, 10, |i, j| md.s[(perm[i], perm[j])]);
        shuffled.t = perm.iter().map(|&i| md.t[i]).collect();
        shuffled.t_snap = perm.iter().map(|&i| md.t_snap[i]).collect();
        shuffled.qdims = perm.iter().map(|&i| md.qdims[i]).collect();
        let cmp = compare_reference(&shuffled, &md, &MatchOptions::default());
        prop_assert!(cmp.matched);
        prop_assert!(cmp.max_ds < 1e-12);
        let f = verlinde(&md, 1e-6).unwrap();
        let g = verlinde(&shuffled, 1e-6).unwrap();
        for i in 0..10 {
            for j in 0..10 {
                for k in 0..10 {
                    prop_assert_eq!(g.get(i, j, k), f.get(perm[i], perm[j], perm[k]));
                }
            }
        }
    }
}
