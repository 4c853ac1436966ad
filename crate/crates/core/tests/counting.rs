mod common;

use std::collections::BTreeSet;

use heiscount::counting::{
    chain_centers, chain_count, cubic_count, equidist_counts, finite_group_orders, loglog_slope,
    rational_points_in_window, Box3,
};
use heiscount::picard::{default_generators, find_loxodromic_witness};
use heiscount::quadint::is_coprime_triple;
use heiscount::{make_field, ZLattice2};

/// Direct scan for the primitive triples whose point `(a/c, α/c)` lies in `window`.
fn window_oracle(d: i64, s: i64, window: &Box3) -> BTreeSet<[(i64, i64); 3]> {
    let f = make_field(d).unwrap();
    let mut out = BTreeSet::new();
    for (cx, cy) in common::small_norm_elements(&f, s) {
        let c = f.elt(cx, cy);
        let ce = c.embed();
        let nc: i64 = c.norm().try_into().unwrap();
        let r = 4 * nc + 16;
        for ay in -r..=r {
            for ax in -r..=r {
                let alpha = f.elt(ax, ay);
                let w = alpha.embed() / ce;
                if !(window.lo[1] <= w.re
                    && w.re < window.hi[1]
                    && window.lo[2] <= w.im
                    && w.im < window.hi[2])
                {
                    continue;
                }
                let cb = c.conj();
                let ac: i64 = cb.trace().try_into().unwrap();
                let bc: i64 = (&f.omega() * &cb).trace().try_into().unwrap();
                let n: i64 = alpha.norm().try_into().unwrap();
                for y in -r..=r {
                    let x = if ac != 0 {
                        let rest = n - y * bc;
                        if rest % ac != 0 {
                            continue;
                        }
                        rest / ac
                    } else {
                        // tr(a c̄) depends on y alone; scan x instead.
                        if y * bc != n {
                            continue;
                        }
                        for x in -r..=r {
                            let a = f.elt(x, y);
                            let im = (a.embed() / ce).im;
                            if window.lo[0] <= im
                                && im < window.hi[0]
                                && is_coprime_triple(&a, &alpha, &c)
                            {
                                out.insert([(x, y), (ax, ay), (cx, cy)]);
                            }
                        }
                        continue;
                    };
                    let a = f.elt(x, y);
                    let im = (a.embed() / ce).im;
                    if window.lo[0] <= im && im < window.hi[0] && is_coprime_triple(&a, &alpha, &c)
                    {
                        out.insert([(x, y), (ax, ay), (cx, cy)]);
                    }
                }
            }
        }
    }
    out
}

#[test]
fn window_points_match_direct_scan() {
    let window = Box3::new([-0.5, -0.25, 0.1], [0.4, 0.6, 0.7]).unwrap();
    for d in [-4, -3] {
        let f = make_field(d).unwrap();
        let got: BTreeSet<[(i64, i64); 3]> = rational_points_in_window(&f, 12, &window)
            .unwrap()
            .into_iter()
            .map(|(_, t)| {
                let p = |z: &heiscount::QuadInt| z.to_i64_pair().unwrap();
                [p(t.a()), p(t.alpha()), p(t.c())]
            })
            .collect();
        assert_eq!(got, window_oracle(d, 12, &window), "D = {d}");
        let counts = equidist_counts(&f, 12, &[window]).unwrap();
        assert_eq!(counts[0] as usize, got.len());
    }
}

#[test]
fn masses_are_symmetric_under_rotation() {
    // ζ ↦ iζ is induced by a diagonal unit, so boxes related by it carry
    // the same number of points.
    // Irrational edges keep rational points off the box boundaries.
    let f = make_field(-4).unwrap();
    let (e1, e2, e3) = (
        0.1 * 2f64.sqrt(),
        0.2 * 3f64.sqrt(),
        0.9 * 5f64.sqrt() / 2.0,
    );
    let b1 = Box3::new([0.0, e1, e2], [0.5, e2, e3]).unwrap();
    let b2 = Box3::new([0.0, -e3, e1], [0.5, -e2, e2]).unwrap();
    let c = equidist_counts(&f, 200, &[b1, b2]).unwrap();
    assert_eq!(c[0], c[1]);
}

#[test]
fn word_search_is_inside_coset_search() {
    let f = make_field(-4).unwrap();
    let gens = default_generators(&f).unwrap();
    let eps = [1.0, 0.5];
    let coset = chain_count(&f, None, &eps, 200).unwrap();
    let words = chain_count(&f, Some(&gens), &eps, 6).unwrap();
    for (w, c) in words.rows.iter().zip(&coset.rows) {
        assert!(w.count <= c.count);
    }
    assert!(coset.rows.iter().all(|r| r.saturated));
}

#[test]
fn chain_counts_are_monotone_in_eps() {
    let f = make_field(-4).unwrap();
    let r = chain_count(&f, None, &[1.0, 0.7, 0.5, 0.35, 0.25], 500).unwrap();
    assert!(r.rows.windows(2).all(|w| w[0].count <= w[1].count));
    assert!(!r.caveat.is_empty());
}

#[test]
fn chain_centres_lie_in_window() {
    let f = make_field(-4).unwrap();
    let window = Box3::new([-1.0, -1.0, -1.0], [1.0, 1.0, 1.0]).unwrap();
    let c = chain_centers(&f, 0.5, &window, 200).unwrap();
    assert!(!c.centers.is_empty());
    assert!(c.centers.iter().all(|p| window.contains(*p)));
    assert!(c.centers.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn cubic_counts_grow() {
    let f = make_field(-4).unwrap();
    let gens = default_generators(&f).unwrap();
    let (_, g0) = find_loxodromic_witness(&f, &gens, 4).unwrap();
    let r = cubic_count(&f, &g0, &[1.0, 1.5, 2.0], 100).unwrap();
    assert!(r.saturated);
    assert!(r.rows.windows(2).all(|w| w[0].count <= w[1].count));
    assert!(r.rows[2].count > r.rows[0].count);
}

#[test]
fn group_orders_of_trivial_and_prime_ideals() {
    let f = make_field(-4).unwrap();
    let o = finite_group_orders(&f, &ZLattice2::full(-4)).unwrap();
    assert_eq!((o.su_q, o.b_q), (1, 1));
    let o = finite_group_orders(&f, &ZLattice2::from_hnf_checked(-4, 2, 1, 1).unwrap()).unwrap();
    assert_eq!(o.su_q % o.b_q, 0);
}

#[test]
fn slope_recovers_exponent() {
    let xs = [1.0, 2.0, 4.0, 8.0];
    let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powi(4)).collect();
    assert!((loglog_slope(&xs, &ys).unwrap() - 4.0).abs() < 1e-12);
}
