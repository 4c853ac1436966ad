//! Exact enumeration behind the counting and equidistribution statements:
//! the orbit count `Ψ_m(s)`, rational points of `Heis₃` in boxes, chains
//! modulo the cusp stabiliser, and cubic points.

mod chains;
mod cubic;
mod equidist;
mod groups;
mod mertens;

pub use chains::{
    chain_centers, chain_count, chain_orbit_vectors, ChainCenters, ChainCountReport, ChainCountRow,
    ChainOrbit, CHAIN_CAVEAT,
};
pub use cubic::{complexity, cubic_count, CubicReport, CubicRow};
pub use equidist::{
    equidist_counts, equidist_statistic, grid_boxes, rational_points_in_window, Box3,
    EquidistReport,
};
pub use groups::{finite_group_orders, su_q_closure_order, GroupOrders};
pub use mertens::{mertens_count, mertens_counts, mertens_per_c, MertensReport};

use crate::error::{Error, Result};
use crate::quadint::{FieldSpec, ZLattice2};
use crate::small::{self, Z2};

/// Least-squares slope of `ln y` against `ln x` over the points with `y > 0`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Machine-integer HNF of an ideal lattice, after checking it is a nonzero ideal.
pub(crate) fn ideal_small(f: &FieldSpec, m: &ZLattice2) -> Result<(i64, i64, i64)> {
    if m.disc() != f.disc() {
        return Err(Error::FieldMismatch(f.disc(), m.disc()));
    }
    if m.index() == 0.into() {
        return Err(Error::ZeroLattice);
    }
    let [[h11, h12], [_, h22]] = m.hnf();
    let conv = |b: &num_bigint::BigInt| {
        i64::try_from(b).map_err(|_| Error::GuardExceeded("ideal HNF exceeds i64".into()))
    };
    let h = (conv(&h11)?, conv(&h12)?, conv(&h22)?);
    let ring = small::Ring::new(f.disc());
    if small::ideal_hnf(ring, &[(h.0, 0), (h.1, h.2)]) != h {
        return Err(Error::InvalidInput(format!(
            "lattice ({}, {}, {}) is not an ideal",
            h.0, h.1, h.2
        )));
    }
    Ok(h)
}

/// Nonzero elements of norm at most `s`, in a fixed order.
pub(crate) fn norm_ball(disc: i64, s: i64) -> Vec<Z2> {
    use num_integer::Roots;
    let ring = small::Ring::new(disc);
    let ad = disc.abs();
    let mut out = Vec::new();
    if s <= 0 {
        return out;
    }
    // 4·n(x + yω) = (2x + ty)² + |D|y²
    let ymax = ((4 * s) / ad).sqrt();
    for y in -ymax..=ymax {
        let rem = 4 * s - ad * y * y;
        if rem < 0 {
            continue;
        }
        let r = rem.sqrt();
        let lo = (-r - ring.t * y + 1).div_euclid(2);
        let hi = (r - ring.t * y).div_euclid(2);
        for x in lo..=hi {
            if (x, y) != (0, 0) {
                debug_assert!(ring.norm((x, y)) <= s);
                out.push((x, y));
            }
        }
    }
    out
}
