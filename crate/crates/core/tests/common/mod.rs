//! Independent brute-force oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use heiscount::heis::canonical_triple;
use heiscount::quadint::is_coprime_triple;
use heiscount::{FieldSpec, QuadInt, Triple};

/// Every `c` with `0 < n(c) ≤ s`, found by scanning a box in `(1, ω)` coordinates.
pub fn small_norm_elements(f: &FieldSpec, s: i64) -> Vec<(i64, i64)> {
    let ad = f.disc().unsigned_abs() as f64;
    let ymax = (2.0 * (s as f64 / ad).sqrt()).ceil() as i64 + 1;
    let xmax = (s as f64).sqrt().ceil() as i64 + ymax + 1;
    let mut out = Vec::new();
    for y in -ymax..=ymax {
        for x in -xmax..=xmax {
            let n = f.elt(x, y).norm();
            if n > 0.into() && n <= s.into() {
                out.push((x, y));
            }
        }
    }
    out
}

/// Orbit counts per `c`, obtained by listing explicit triples and
/// deduplicating their canonical forms. `reach` scales the window in which
/// solutions of the trace equation are searched.
pub fn mertens_oracle(f: &FieldSpec, s: i64, reach: i64) -> BTreeMap<(i64, i64), u64> {
    let omega = f.omega();
    let mut out = BTreeMap::new();
    for (cx, cy) in small_norm_elements(f, s) {
        let c = f.elt(cx, cy);
        let nc: i64 = c.norm().try_into().unwrap();
        let cb = c.conj();
        let a_coef: i64 = cb.trace().try_into().unwrap();
        let b_coef: i64 = (&omega * &cb).trace().try_into().unwrap();
        let r = reach * (4 * nc + 8);
        let reps = f.pi_lattice().scaled(&c).coset_representatives().unwrap();
        let mut seen: HashSet<Triple> = HashSet::new();
        for alpha in reps {
            let n: i64 = alpha.norm().try_into().unwrap();
            let mut sols: Vec<(i64, i64)> = Vec::new();
            if a_coef != 0 {
                for y in -r..=r {
                    let rest = n - y * b_coef;
                    if rest % a_coef == 0 {
                        sols.push((rest / a_coef, y));
                    }
                }
            } else if n % b_coef == 0 {
                for x in -r..=r {
                    sols.push((x, n / b_coef));
                }
            }
            for (x, y) in sols {
                let a = f.elt(x, y);
                if !is_coprime_triple(&a, &alpha, &c) {
                    continue;
                }
                let t = Triple::new(a, alpha.clone(), c.clone()).unwrap();
                seen.insert(canonical_triple(f, &t).unwrap());
            }
        }
        out.insert((cx, cy), seen.len() as u64);
    }
    out
}

/// A solution `a` of `tr(a c̄) = n(α)`, if any, by scanning.
pub fn solve_trace(f: &FieldSpec, alpha: &QuadInt, c: &QuadInt) -> Option<QuadInt> {
    let cb = c.conj();
    let a_coef: i64 = cb.trace().try_into().ok()?;
    let b_coef: i64 = (&f.omega() * &cb).trace().try_into().ok()?;
    let n: i64 = alpha.norm().try_into().ok()?;
    let r = 4 * i64::try_from(c.norm()).ok()? + 8;
    for y in -r..=r {
        if a_coef != 0 {
            let rest = n - y * b_coef;
            if rest % a_coef == 0 {
                return Some(f.elt(rest / a_coef, y));
            }
        } else if b_coef != 0 && n % b_coef == 0 {
            return Some(f.elt(y, n / b_coef));
        }
    }
    None
}
