//! Hom dimensions: invariance under reduction, shifts and translation,
//! vanishing outside the scan window, and Serre symmetry.

use chainfact::chain::ChainPolynomial;
use chainfact::homcalc::{
    closed_form_hom, hom_dim, hom_dim_p, scan_bounds, scan_window, serre_symmetry_check, HomTable,
};
use chainfact::mf::{MatrixFactorization, Ring, RingRef};
use chainfact::verify::build_collection;
use proptest::prelude::*;

const CHAINS: [&str; 6] = ["2", "3", "2,2", "3,2", "2,3", "2,2,2"];

fn setup(chain: &str) -> (RingRef, Vec<MatrixFactorization>) {
    let ring = Ring::new(&chain.parse::<ChainPolynomial>().unwrap()).unwrap();
    let (_, objs) = build_collection(&ring, 0).unwrap();
    (ring, objs)
}

fn case() -> impl Strategy<Value = (usize, usize, usize, i64, i64, u8)> {
    (0..CHAINS.len(), 0usize..16, 0usize..16, -3i64..=3, -2i64..=2, 0u8..2)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn invariant_under_trivial_summands_and_reduce((c, i, j, k, fj, parity) in case()) {
        let (ring, objs) = setup(CHAINS[c]);
        let g = ring.group();
        let (a, b) = (&objs[i % objs.len()], &objs[j % objs.len()]);
        let l = g.add(&g.scale(k, &g.x(0)), &g.scale(fj, &g.f()));
        let base = hom_dim(a, b, &l, parity).unwrap();
        let padded = b.direct_sum(&MatrixFactorization::trivial(&ring, &g.scale(k, &g.x(0)))).unwrap();
        prop_assert_eq!(hom_dim(a, &padded, &l, parity).unwrap(), base);
        prop_assert_eq!(hom_dim(a, &padded.reduce(), &l, parity).unwrap(), base);
        let padded_src = a.direct_sum(&MatrixFactorization::trivial(&ring, &g.f())).unwrap();
        prop_assert_eq!(hom_dim(&padded_src, b, &l, parity).unwrap(), base);
    }

    #[test]
    fn invariant_under_shift_and_translation((c, i, j, k, fj, parity) in case()) {
        let (ring, objs) = setup(CHAINS[c]);
        let g = ring.group();
        let (a, b) = (&objs[i % objs.len()], &objs[j % objs.len()]);
        let l = g.add(&g.scale(k, &g.x(0)), &g.scale(fj, &g.f()));
        let base = hom_dim(a, b, &l, parity).unwrap();
        let s = g.add(&g.x(g.n() - 1), &g.scale(-k, &g.x(0)));
        prop_assert_eq!(hom_dim(&a.shift(&s), &b.shift(&s), &l, parity).unwrap(), base);
        prop_assert_eq!(hom_dim(&a.translate(), &b.translate(), &l, parity).unwrap(), base);
        // Hom(A, T^p B(l)) = Hom(A(-l), T^p B).
        prop_assert_eq!(hom_dim(&a.shift(&g.neg(&l)), b, &g.zero(), parity).unwrap(), base);
        // Moving the parity into the target.
        prop_assert_eq!(hom_dim(a, &b.translate(), &l, 1 - parity).unwrap(),
            if parity == 0 { hom_dim(a, b, &g.add(&l, &g.f()), 0).unwrap() } else { base });
    }
}

#[test]
fn translation_degree_agrees_with_parity_and_f() {
    for chain in CHAINS {
        let (ring, objs) = setup(chain);
        let g = ring.group();
        for a in &objs {
            for b in &objs {
                for p in -4i64..=4 {
                    let l = g.scale(p.div_euclid(2), &g.f());
                    assert_eq!(hom_dim_p(a, b, p).unwrap(), hom_dim(a, b, &l, p.rem_euclid(2) as u8).unwrap());
                }
            }
        }
    }
}

#[test]
fn nothing_outside_the_scan_window() {
    for chain in CHAINS {
        let (_, objs) = setup(chain);
        for a in &objs {
            for b in &objs {
                let (lo, hi) = scan_bounds(a, b).unwrap();
                let window = scan_window(a, b);
                for p in lo.min(hi) - 6..=lo.max(hi) + 6 {
                    let d = hom_dim_p(a, b, p).unwrap();
                    let inside = window.is_some_and(|(lo, hi)| (lo..=hi).contains(&p));
                    assert!(inside || d == 0, "{chain}: dim {d} at p = {p} outside {window:?}");
                }
            }
        }
    }
}

#[test]
fn margin_does_not_change_the_table() {
    for chain in ["2,2", "3,2", "2,2,2"] {
        let (_, objs) = setup(chain);
        let small = HomTable::compute(&objs, 0).unwrap();
        let wide = HomTable::compute(&objs, 4).unwrap();
        assert_eq!(small.euler_pairing(), wide.euler_pairing());
        for e in &wide.entries {
            assert_eq!(small.dim(e.i, e.j, e.p).unwrap_or(0), e.dim, "{chain}: {e:?}");
        }
    }
}

#[test]
fn serre_symmetry_on_every_table() {
    for chain in CHAINS {
        let (_, objs) = setup(chain);
        let table = HomTable::compute(&objs, 3).unwrap();
        let bad = serre_symmetry_check(&objs, &table).unwrap();
        assert!(bad.is_empty(), "{chain}: {bad:?}");
    }
}

#[test]
fn diagonal_matches_quotient_algebra_for_shifted_objects() {
    for chain in ["3", "2,2", "2,2,2"] {
        let (ring, objs) = setup(chain);
        let g = ring.group();
        let e = objs.last().unwrap();
        for parity in 0..2u8 {
            for (d, want) in closed_form_hom(g, parity) {
                assert_eq!(hom_dim(e, e, &d, parity).unwrap(), want, "{chain} parity {parity}");
            }
        }
    }
}
