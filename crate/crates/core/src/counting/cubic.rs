//! Cubic points in the orbit of a loxodromic element's fixed-point pair.
//!
//! A node is a conjugate `M = gγ₀g⁻¹` modulo conjugation by `Γ_∞` and
//! inversion; its two isotropic fixed points are the Galois conjugates of
//! the cubic point. Children are `σTMT⁻¹σ` for Heisenberg translations
//! `T`, restricted to those that can keep the complexity under the bound:
//! since `σ` rescales Cygan distances by `2/(|p||q|)` and `d'' ≤ d`, a
//! child of complexity `≤ P` needs `|Tξ₁|·|Tξ₂| ≤ 2P·d(ξ₁, ξ₂)`.

use std::collections::HashSet;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::loglog_slope;
use crate::error::{Error, Result};
use crate::heis::{cygan, cygan_second, shear_reduce, HeisIntElem, HeisPt};
use crate::picard::{
    classify, diag_unit, fixed_boundary_points, heis_to_matrix, is_k_irreducible, sigma,
    translation_length, Classification, FixedPt, SUqMat,
};
use crate::quadint::{FieldSpec, QuadInt};
use crate::small::SmallField;

/// `c = 1/d''(ξ₁, ξ₂)`
pub fn complexity(p: &HeisPt, q: &HeisPt) -> f64 {
    1.0 / cygan_second(p, q)
}

type Key = [[QuadInt; 3]; 3];

/// Conjugates `m` by the unique Heisenberg translation that shear-reduces
/// the conjugated reversed bottom row.
fn conj_reduce(f: &FieldSpec, m: &SUqMat) -> Result<SUqMat> {
    let e = m.entries();
    let col = [e[2][2].conj(), e[2][1].conj(), e[2][0].conj()];
    let (g, _) = shear_reduce(f, [&col[0], &col[1], &col[2]])?;
    let t_inv = heis_to_matrix(&HeisIntElem::new(g.w0().conj(), g.w().clone())?);
    Ok(t_inv.inverse().mul(m).mul(&t_inv))
}

/// Representative of `{γMγ⁻¹, γM⁻¹γ⁻¹ : γ ∈ Γ_∞}`.
fn node_key(f: &FieldSpec, m: &SUqMat) -> Result<Key> {
    let mut best: Option<Key> = None;
    for x in [m.clone(), m.inverse()] {
        for u in f.units() {
            let d = diag_unit(f, u)?;
            let y = conj_reduce(f, &d.mul(&x).mul(&d.inverse()))?;
            let k = y.entries().clone();
            if best.as_ref().map_or(true, |b| k < *b) {
                best = Some(k);
            }
        }
    }
    Ok(best.expect("units nonempty"))
}

fn finite(p: FixedPt) -> Result<HeisPt> {
    match p {
        FixedPt::Finite(h) => Ok(h),
        FixedPt::Infinity => Err(Error::Reducible("fixed point at infinity".into())),
    }
}

/// `σ` on boundary points: `(w₀, w) ↦ (1/w₀, −w/w₀)`.
fn sigma_pt(p: &HeisPt) -> HeisPt {
    let (w0, w) = p.to_siegel_boundary();
    HeisPt::from_siegel_boundary(Complex64::new(1.0, 0.0) / w0, -w / w0)
}

#[derive(Clone)]
struct Node {
    m: SUqMat,
    xi: [HeisPt; 2],
    c: f64,
}

fn children(f: &FieldSpec, sf: &SmallField, node: &Node, bound: f64, sig: &SUqMat) -> Vec<Node> {
    let r = sf.ring;
    let [x1, x2] = node.xi;
    let d12 = cygan(&x1, &x2);
    let pd = 2.0 * bound * d12;
    let rho = (d12 + (d12 * d12 + 4.0 * pd).sqrt()) / 2.0 * (1.0 + 1e-9) + 1e-12;
    let t_k = f.t_k();
    let mut buf = Vec::new();
    sf.pi_points_in_disc(-x1.zeta, rho, &mut buf);
    let mut out = Vec::new();
    for &w in &buf {
        let we = sf.embed(w);
        if (we + x2.zeta).norm() > rho {
            continue;
        }
        let w0 = sf.trace_lift(r.norm(w));
        let ub = -2.0 * sf.embed(w0).im;
        // u-coordinate of T·ξ is ub − k·t_K + uᵢ + 2 Im(w ξ̄ᵢ); keep |·| ≤ ρ².
        let range = |x: &HeisPt| {
            let base = ub + x.u + 2.0 * (we * x.zeta.conj()).im;
            let rr = rho * rho;
            ((base - rr) / t_k, (base + rr) / t_k)
        };
        let (a1, b1) = range(&x1);
        let (a2, b2) = range(&x2);
        let k_lo = a1.max(a2).floor() as i64 - 1;
        let k_hi = b1.min(b2).ceil() as i64 + 1;
        for k in k_lo..=k_hi {
            let w0k = crate::small::add(w0, crate::small::scale(k, sf.nu));
            let g = HeisIntElem::new(
                QuadInt::from_i64(f.disc(), w0k.0, w0k.1),
                QuadInt::from_i64(f.disc(), w.0, w.1),
            )
            .expect("lifted translation");
            let tp = g.to_point();
            let ys = [sigma_pt(&tp.mul(&x1)), sigma_pt(&tp.mul(&x2))];
            let c = complexity(&ys[0], &ys[1]);
            if !(c <= bound) {
                continue;
            }
            let t = heis_to_matrix(&g);
            let m = sig.mul(&t).mul(&node.m).mul(&t.inverse()).mul(sig);
            out.push(Node { m, xi: ys, c });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CubicRow {
    pub s: f64,
    pub count: u64,
    /// `count / s⁴`
    pub leading_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CubicReport {
    pub disc: i64,
    /// `|λ|` of the seed and the translation length `ln|λ|`.
    pub lambda_abs: f64,
    pub ln_lambda: f64,
    pub seed_complexity: f64,
    pub rows: Vec<CubicRow>,
    pub slope: Option<f64>,
    pub saturated: bool,
    pub nodes: usize,
    pub depth_reached: usize,
}

const NODE_GUARD: usize = 2_000_000;

/// Counts `Γ_∞`-classes of the orbit of `γ₀`'s cubic point with complexity
/// at most `s` for each `s` in the grid. The orbit is taken under the group
/// generated by `Γ_∞` and `σ`.
pub fn cubic_count(
    f: &FieldSpec,
    gamma0: &SUqMat,
    s_grid: &[f64],
    max_depth: usize,
) -> Result<CubicReport> {
    if gamma0.disc() != f.disc() {
        return Err(Error::FieldMismatch(f.disc(), gamma0.disc()));
    }
    if s_grid.is_empty() || s_grid.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
        return Err(Error::InvalidInput(
            "complexity bounds must be positive".into(),
        ));
    }
    let lambda = match classify(gamma0) {
        Classification::Loxodromic { lambda } => lambda,
        other => return Err(Error::NotLoxodromic(format!("{other:?}"))),
    };
    if !is_k_irreducible(f, gamma0) {
        return Err(Error::Reducible(
            "characteristic polynomial has a root in K".into(),
        ));
    }
    let ln_lambda = translation_length(gamma0)?;
    let bound = s_grid.iter().copied().fold(0.0, f64::max);
    let sf = SmallField::new(f);
    let sig = sigma(f);

    let (pts, _) = fixed_boundary_points(gamma0)?;
    let xi = [finite(pts[0])?, finite(pts[1])?];
    let root = Node {
        m: gamma0.clone(),
        xi,
        c: complexity(&xi[0], &xi[1]),
    };
    let seed_complexity = root.c;
    let mut seen: HashSet<Key> = HashSet::new();
    seen.insert(node_key(f, &root.m)?);
    let mut complexities = vec![root.c];
    let mut frontier = vec![root];
    let mut depth = 0;
    while !frontier.is_empty() && depth < max_depth {
        depth += 1;
        let cands: Vec<(Key, Node)> = frontier
            .par_iter()
            .flat_map_iter(|n| children(f, &sf, n, bound, &sig))
            .map(|n| node_key(f, &n.m).map(|k| (k, n)))
            .collect::<Result<Vec<_>>>()?;
        let mut next = Vec::new();
        for (k, n) in cands {
            if seen.insert(k) {
                complexities.push(n.c);
                next.push(n);
            }
        }
        if seen.len() > NODE_GUARD {
            return Err(Error::GuardExceeded(format!(
                "more than {NODE_GUARD} cubic classes below complexity {bound}"
            )));
        }
        frontier = next;
    }
    let saturated = frontier.is_empty();
    let rows: Vec<CubicRow> = s_grid
        .iter()
        .map(|&s| {
            let count = complexities.iter().filter(|&&c| c <= s).count() as u64;
            CubicRow {
                s,
                count,
                leading_ratio: count as f64 / s.powi(4),
            }
        })
        .collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter(|r| r.count > 0)
        .map(|r| (r.s, r.count as f64))
        .unzip();
    Ok(CubicReport {
        disc: f.disc(),
        lambda_abs: lambda.norm(),
        ln_lambda,
        seed_complexity,
        slope: loglog_slope(&xs, &ys),
        rows,
        saturated,
        nodes: seen.len(),
        depth_reached: depth,
    })
}
