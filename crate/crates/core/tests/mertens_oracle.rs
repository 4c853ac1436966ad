mod common;

use std::collections::BTreeMap;

use heiscount::counting::{mertens_count, mertens_counts, mertens_per_c};
use heiscount::{make_field, ZLattice2};

fn per_c_map(d: i64, s: u64) -> BTreeMap<(i64, i64), u64> {
    let f = make_field(d).unwrap();
    mertens_per_c(&f, &ZLattice2::full(d), s)
        .unwrap()
        .into_iter()
        .map(|(c, _, n)| (c, n))
        .collect()
}

#[test]
fn per_c_counts_match_oracle() {
    for d in [-3, -4, -7] {
        let f = make_field(d).unwrap();
        let oracle = common::mertens_oracle(&f, 50, 1);
        assert_eq!(per_c_map(d, 50), oracle, "D = {d}");
    }
}

#[test]
fn oracle_is_stable_under_wider_search() {
    for d in [-3, -4, -7] {
        let f = make_field(d).unwrap();
        assert_eq!(
            common::mertens_oracle(&f, 12, 1),
            common::mertens_oracle(&f, 12, 2)
        );
    }
}

#[test]
fn cumulative_counts_for_every_small_s() {
    for d in [-3, -4, -7] {
        let f = make_field(d).unwrap();
        let oracle = common::mertens_oracle(&f, 50, 1);
        let s_values: Vec<u64> = (1..=50).collect();
        let r = mertens_counts(&f, &ZLattice2::full(d), &s_values).unwrap();
        for (s, got) in s_values.iter().zip(&r.counts) {
            let want: u64 = oracle
                .iter()
                .filter(|((x, y), _)| f.elt(*x, *y).norm() <= (*s).into())
                .map(|(_, n)| n)
                .sum();
            assert_eq!(*got, want, "D = {d}, s = {s}");
        }
    }
}

#[test]
fn hand_checked_values() {
    let f = make_field(-4).unwrap();
    assert_eq!(mertens_count(&f, &ZLattice2::full(-4), 1).unwrap(), 4);
    // c = 1 carries exactly the orbit of (0, 0, 1).
    assert_eq!(per_c_map(-4, 1)[&(1, 0)], 1);
    let f3 = make_field(-3).unwrap();
    assert_eq!(mertens_count(&f3, &ZLattice2::full(-3), 1).unwrap(), 6);
}

#[test]
fn rejects_zero_height() {
    let f = make_field(-4).unwrap();
    assert!(mertens_count(&f, &ZLattice2::full(-4), 0).is_err());
}

#[test]
fn congruence_counts_are_bounded_by_full_counts() {
    let f = make_field(-4).unwrap();
    let m = ZLattice2::from_hnf_checked(-4, 2, 1, 1).unwrap();
    let sub = mertens_count(&f, &m, 40).unwrap();
    let full = mertens_count(&f, &ZLattice2::full(-4), 40).unwrap();
    assert!(sub > 0 && sub < full);
}
