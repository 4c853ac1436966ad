mod common;

use heiscount::cxhyp::{busemann, busemann_inf, SiegelPt};
use heiscount::heis::{canonical_triple, cygan, cygan_second, shear};
use heiscount::picard::{canonical_column, diag_unit, heis_to_matrix, Column};
use heiscount::quadint::reduce_mod_sublattice;
use heiscount::{make_field, FieldSpec, HeisIntElem, HeisPt, Triple};
use proptest::prelude::*;

const DISCS: [i64; 5] = [-3, -4, -7, -8, -15];

fn field() -> impl Strategy<Value = FieldSpec> {
    prop::sample::select(DISCS.to_vec()).prop_map(|d| make_field(d).unwrap())
}

fn heis_pt() -> impl Strategy<Value = HeisPt> {
    (-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64).prop_map(|(x, y, u)| HeisPt::new(x, y, u))
}

/// `(w₀, w)` with `w` arbitrary and `w₀` the lift plus a vertical multiple,
/// when `w` lies in `Π`; otherwise `w` is doubled into `Π` first.
fn heis_elem(f: &FieldSpec, wx: i64, wy: i64, k: i64) -> HeisIntElem {
    let mut w = f.elt(wx, wy);
    if f.trace_lift(&w.norm()).is_err() {
        w = f.elt(2 * wx, 2 * wy);
    }
    let base = HeisIntElem::with_lift(f, w).unwrap();
    let vertical = HeisIntElem::new(f.imaginary_generator().scale(&k.into()), f.zero()).unwrap();
    base.mul(&vertical)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn norm_is_multiplicative(f in field(), a in (-30i64..30, -30i64..30), b in (-30i64..30, -30i64..30)) {
        let (x, y) = (f.elt(a.0, a.1), f.elt(b.0, b.1));
        prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
        prop_assert_eq!(x.conj().conj(), x.clone());
        prop_assert_eq!(&x + &x.conj(), f.elt_big(x.trace(), 0.into()));
    }

    #[test]
    fn sublattice_reduction_is_a_projection(f in field(), z in (-60i64..60, -60i64..60), c in (-6i64..6, -6i64..6)) {
        let c = f.elt(c.0, c.1);
        prop_assume!(!c.is_zero());
        let lat = f.pi_lattice().scaled(&c);
        let z = f.elt(z.0, z.1);
        let r = reduce_mod_sublattice(&z, &lat).unwrap();
        prop_assert!(lat.contains(&(&z - &r)));
        prop_assert_eq!(reduce_mod_sublattice(&r, &lat).unwrap(), r);
    }

    #[test]
    fn canonical_triple_is_a_shear_invariant(
        f in field(),
        c in (-5i64..5, -5i64..5),
        al in (-9i64..9, -9i64..9),
        g in (-4i64..4, -4i64..4, -3i64..3),
    ) {
        let c = f.elt(c.0, c.1);
        prop_assume!(!c.is_zero());
        let alpha = f.elt(al.0, al.1);
        let a = common::solve_trace(&f, &alpha, &c);
        prop_assume!(a.is_some());
        let t = Triple::new(a.unwrap(), alpha, c).unwrap();
        let canon = canonical_triple(&f, &t).unwrap();
        let moved = shear(&heis_elem(&f, g.0, g.1, g.2), &t);
        prop_assert_eq!(canonical_triple(&f, &moved).unwrap(), canon.clone());
        prop_assert_eq!(canonical_triple(&f, &canon).unwrap(), canon);
    }

    #[test]
    fn canonical_column_is_cusp_invariant(
        f in field(),
        v in prop::array::uniform6(-12i64..12),
        g in (-4i64..4, -4i64..4, -3i64..3),
        unit in 0usize..6,
    ) {
        let col: Column = [f.elt(v[0], v[1]), f.elt(v[2], v[3]), f.elt(v[4], v[5])];
        prop_assume!(!col[2].is_zero());
        let u = &f.units()[unit % f.unit_count()];
        let gamma = diag_unit(&f, u).unwrap().mul(&heis_to_matrix(&heis_elem(&f, g.0, g.1, g.2)));
        prop_assert_eq!(
            canonical_column(&f, &gamma.apply(&col)).unwrap(),
            canonical_column(&f, &col).unwrap()
        );
    }

    #[test]
    fn cygan_is_a_left_invariant_metric(p in heis_pt(), q in heis_pt(), r in heis_pt()) {
        let (dpq, dqr, dpr) = (cygan(&p, &q), cygan(&q, &r), cygan(&p, &r));
        prop_assert!((dpq - cygan(&q, &p)).abs() < 1e-12);
        prop_assert!(dpr <= dpq + dqr + 1e-9);
        prop_assert!((cygan(&r.mul(&p), &r.mul(&q)) - dpq).abs() < 1e-9 * (1.0 + dpq));
    }

    #[test]
    fn second_distance_is_sandwiched(p in heis_pt(), q in heis_pt()) {
        let (d, d2) = (cygan(&p, &q), cygan_second(&p, &q));
        prop_assert!(d / 2f64.sqrt() <= d2 + 1e-12 && d2 <= d + 1e-12);
    }

    #[test]
    fn dilation_scales_distance(p in heis_pt(), q in heis_pt(), l in 0.1..10.0f64) {
        let d = cygan(&p.dilate(l).unwrap(), &q.dilate(l).unwrap());
        prop_assert!((d - l * cygan(&p, &q)).abs() < 1e-9 * (1.0 + d));
    }

    #[test]
    fn busemann_is_a_cocycle(xi in heis_pt(), a in heis_pt(), b in heis_pt(), c in heis_pt(), t in prop::array::uniform3(0.1..4.0f64)) {
        let pt = |p: HeisPt, t: f64| SiegelPt::new(p.zeta.re, p.zeta.im, p.u, t).unwrap();
        let (x, y, z) = (pt(a, t[0]), pt(b, t[1]), pt(c, t[2]));
        let r = busemann(&xi, &x, &y).unwrap() + busemann(&xi, &y, &z).unwrap() - busemann(&xi, &x, &z).unwrap();
        prop_assert!(r.abs() < 1e-9);
        let ri = busemann_inf(&x, &y).unwrap() + busemann_inf(&y, &z).unwrap() - busemann_inf(&x, &z).unwrap();
        prop_assert!(ri.abs() < 1e-12);
    }
}
