//! Chains in the orbit of the seed chain, modulo the cusp stabiliser.
//!
//! The group generated by `Γ_∞` and `σ` acts on polar vectors; a class
//! `Γ_∞·v` has the children `Γ_∞·σTv` for Heisenberg translations `T`.
//! Only children whose third coordinate has norm at most the bound are
//! kept, so the search runs to exhaustion. Whether that pruning loses
//! classes is checked by repeating the search with a doubled bound.

use std::collections::{HashMap, HashSet};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::equidist::Box3;
use super::loglog_slope;
use crate::error::{Error, Result};
#[cfg(test)]
use crate::heis::HeisPt;
use crate::picard::{self, Keying, SUqMat};
use crate::quadint::FieldSpec;
use crate::small::{self, col_from_big, Col, SmallField, Z2};
use crate::zeta;

pub const CHAIN_CAVEAT: &str = "counts cover the orbit under the group generated by the cusp \
stabiliser and the involution sigma; the predicted constant assumes this is the full Picard \
group, so the ratio may be off by a subgroup index";

/// Result of a pruned search: Γ_∞-classes (projective keys) of orbit vectors.
#[derive(Debug, Clone)]
pub struct ChainOrbit {
    pub bound: i64,
    /// Canonical key ↦ (norm of the third coordinate, first depth).
    pub classes: HashMap<Col, (i64, usize)>,
    pub exhausted: bool,
    pub depth_reached: usize,
}

impl ChainOrbit {
    /// Finite chains with `0 < n(z₂) ≤ n`.
    pub fn count_up_to(&self, n: i64) -> u64 {
        self.classes
            .values()
            .filter(|(k, _)| *k > 0 && *k <= n)
            .count() as u64
    }
}

fn children(sf: &SmallField, v: &Col, bound: i64, buf: &mut Vec<Z2>, out: &mut Vec<Col>) {
    let r = sf.ring;
    let [z0, z1, z2] = *v;
    let bf = bound as f64;
    if z2 == (0, 0) {
        // T·v = (z₀ + w̄z₁, z₁, 0); σ swaps the outer slots.
        let n1 = r.norm(z1) as f64;
        let centre = -(sf.embed(z0) / sf.embed(z1)).conj();
        // |z₀ + w̄z₁|² ≤ P  ⇔  |w − centre|² ≤ P/n(z₁)
        sf.pi_points_in_disc(centre, (bf / n1).sqrt() * (1.0 + 1e-12) + 1e-9, buf);
        for &w in buf.iter() {
            let z0b = small::add(z0, r.mul(r.conj(w), z1));
            if r.norm(z0b) <= bound {
                out.push([(0, 0), small::scale(-1, z1), z0b]);
            }
        }
        return;
    }
    let n2 = r.norm(z2) as f64;
    let q = sf.qform(v) as f64;
    let zeta = sf.embed(z1) / sf.embed(z2);
    let lim = (bf / n2).sqrt();
    let rad = (q / n2 + 2.0 * lim).sqrt() * (1.0 + 1e-12) + 1e-9;
    sf.pi_points_in_disc(-zeta, rad, buf);
    let nuz2 = r.mul(sf.nu, z2);
    let im_nu = sf.embed(sf.nu).im;
    for &w in buf.iter() {
        let w0 = sf.trace_lift(r.norm(w));
        let z0b0 = small::add(small::add(z0, r.mul(r.conj(w), z1)), r.mul(w0, z2));
        let z1n = small::add(z1, r.mul(w, z2));
        let im0 = (sf.embed(z0b0) / sf.embed(z2)).im;
        let k_lo = ((-lim - im0) / im_nu).floor() as i64 - 1;
        let k_hi = ((lim - im0) / im_nu).ceil() as i64 + 1;
        for k in k_lo..=k_hi {
            let z0b = small::add(z0b0, small::scale(k, nuz2));
            if r.norm(z0b) <= bound {
                out.push([z2, small::scale(-1, z1n), z0b]);
            }
        }
    }
}

const NODE_GUARD: usize = 20_000_000;

/// Breadth-first search over `Γ_∞`-classes of `⟨Γ_∞, σ⟩·seed` with
/// `n(z₂) ≤ bound` at every step.
pub(crate) fn coset_bfs(
    sf: &SmallField,
    seed: &Col,
    bound: i64,
    max_depth: usize,
) -> Result<ChainOrbit> {
    let mut classes: HashMap<Col, (i64, usize)> = HashMap::new();
    let seed_key = sf.canonical_projective(seed);
    classes.insert(seed_key, (sf.ring.norm(seed[2]), 0));
    let mut frontier = vec![seed_key];
    let mut depth = 0;
    while !frontier.is_empty() && depth < max_depth {
        depth += 1;
        let mut next: Vec<Col> = frontier
            .par_iter()
            .flat_map_iter(|v| {
                let (mut buf, mut out) = (Vec::new(), Vec::new());
                children(sf, v, bound, &mut buf, &mut out);
                out.into_iter().map(|c| sf.canonical_projective(&c))
            })
            .collect();
        next.sort_unstable();
        next.dedup();
        next.retain(|k| !classes.contains_key(k));
        for k in &next {
            classes.insert(*k, (sf.ring.norm(k[2]), depth));
        }
        if classes.len() > NODE_GUARD {
            return Err(Error::GuardExceeded(format!(
                "more than {NODE_GUARD} chain classes below bound {bound}"
            )));
        }
        frontier = next;
    }
    Ok(ChainOrbit {
        bound,
        exhausted: frontier.is_empty(),
        classes,
        depth_reached: depth,
    })
}

/// `ε ↦ ⌊4q/ε²⌋`, the largest admissible `n(z₂)` for diameter `≥ ε`.
fn norm_threshold(q: i64, eps: f64) -> i64 {
    let t = 4.0 * q as f64 / (eps * eps);
    // Guard against 4q/ε² landing a hair below an integer.
    (t * (1.0 + 1e-12)).floor() as i64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainCountRow {
    pub eps: f64,
    pub count: u64,
    pub saturated: bool,
    /// `ψ(ε)·ε⁴ / c` when a predicted constant exists.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainCountReport {
    pub disc: i64,
    pub rows: Vec<ChainCountRow>,
    /// Slope of `ln ψ` against `ln(1/ε)` over the saturated rows.
    pub slope: Option<f64>,
    pub predicted_constant: Option<f64>,
    pub search_bound: i64,
    pub depth_reached: usize,
    pub classes_found: usize,
    pub caveat: &'static str,
}

fn check_eps(eps_grid: &[f64]) -> Result<f64> {
    if eps_grid.is_empty() || eps_grid.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
        return Err(Error::InvalidInput("ε values must be positive".into()));
    }
    Ok(eps_grid.iter().copied().fold(f64::INFINITY, f64::min))
}

/// `ψ(ε)` for the seed chain `P₀ = (0, 1, 0)`.
///
/// With `gens = None` the orbit under `⟨Γ_∞, σ⟩` is searched by cosets and
/// a count is saturated when doubling the pruning bound leaves it
/// unchanged. With explicit generators the word search of
/// [`picard::orbit_bfs`] is used and saturation is its own flag.
pub fn chain_count(
    f: &FieldSpec,
    gens: Option<&[SUqMat]>,
    eps_grid: &[f64],
    max_depth: usize,
) -> Result<ChainCountReport> {
    let eps_min = check_eps(eps_grid)?;
    let seed = crate::chains::seed_chain(f);
    let q = 1i64;
    let n_max = norm_threshold(q, eps_min);
    let predicted = zeta::constants(f).chain_c;

    let (counts, saturated, bound, depth_reached, found): (Vec<u64>, Vec<bool>, i64, usize, usize) =
        match gens {
            None => {
                let sf = SmallField::new(f);
                let seed = col_from_big(seed.vector()).expect("small seed");
                let lo = coset_bfs(&sf, &seed, n_max, max_depth)?;
                let hi = coset_bfs(&sf, &seed, 2 * n_max, max_depth)?;
                let mut counts = Vec::new();
                let mut sat = Vec::new();
                for &e in eps_grid {
                    let n = norm_threshold(q, e);
                    let (a, b) = (lo.count_up_to(n), hi.count_up_to(n));
                    counts.push(b);
                    sat.push(a == b && lo.exhausted && hi.exhausted);
                }
                (counts, sat, 2 * n_max, hi.depth_reached, hi.classes.len())
            }
            Some(gens) => {
                let set = picard::orbit_bfs(
                    f,
                    seed.vector(),
                    gens,
                    max_depth,
                    &n_max.into(),
                    Keying::Projective,
                    NODE_GUARD,
                )?;
                let counts: Vec<u64> = eps_grid
                    .iter()
                    .map(|&e| set.count_up_to(&norm_threshold(q, e).into()) as u64)
                    .collect();
                let sat = vec![set.saturated; eps_grid.len()];
                (counts, sat, n_max, set.depth_reached, set.entries.len())
            }
        };

    let rows: Vec<ChainCountRow> = eps_grid
        .iter()
        .zip(counts.iter().zip(&saturated))
        .map(|(&eps, (&count, &saturated))| ChainCountRow {
            eps,
            count,
            saturated,
            ratio: predicted.map(|c| count as f64 * eps.powi(4) / c),
        })
        .collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter(|r| r.saturated)
        .map(|r| (1.0 / r.eps, r.count as f64))
        .unzip();
    Ok(ChainCountReport {
        disc: f.disc(),
        slope: loglog_slope(&xs, &ys),
        rows,
        predicted_constant: predicted,
        search_bound: bound,
        depth_reached,
        classes_found: found,
        caveat: CHAIN_CAVEAT,
    })
}

/// Representatives (projective, modulo `Γ_∞`) of the orbit vectors of
/// chains with diameter at least `eps`, sorted.
pub fn chain_orbit_vectors(
    f: &FieldSpec,
    eps: f64,
    max_depth: usize,
) -> Result<Vec<picard::Column>> {
    check_eps(&[eps])?;
    let sf = SmallField::new(f);
    let seed = col_from_big(crate::chains::seed_chain(f).vector()).expect("small seed");
    let n_max = norm_threshold(1, eps);
    let orbit = coset_bfs(&sf, &seed, n_max, max_depth)?;
    let mut reps: Vec<Col> = orbit
        .classes
        .iter()
        .filter(|(_, (n, _))| *n > 0 && *n <= n_max)
        .map(|(k, _)| *k)
        .collect();
    reps.sort_unstable();
    Ok(reps
        .iter()
        .map(|v| small::col_to_big(f.disc(), v))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainCenters {
    pub disc: i64,
    pub eps: f64,
    pub window: Box3,
    /// Centres in the window, sorted.
    pub centers: Vec<[f64; 3]>,
    /// Multiplier of `count` giving the Haar-normalised mass (Gaussian field only).
    pub normalisation: Option<f64>,
    pub saturated: bool,
}

/// `Γ_∞`-translates of the counted chains whose centres lie in `window`
/// (coordinates `(Im w₀, Re w, Im w)`), one per distinct chain.
pub fn chain_centers(
    f: &FieldSpec,
    eps: f64,
    window: &Box3,
    max_depth: usize,
) -> Result<ChainCenters> {
    check_eps(&[eps])?;
    let sf = SmallField::new(f);
    let r = sf.ring;
    let seed = col_from_big(crate::chains::seed_chain(f).vector()).expect("small seed");
    let n_max = norm_threshold(1, eps);
    let orbit = coset_bfs(&sf, &seed, n_max, max_depth)?;
    let im_nu = sf.embed(sf.nu).im;

    let reps: Vec<Col> = {
        let mut v: Vec<Col> = orbit
            .classes
            .iter()
            .filter(|(_, (n, _))| *n > 0 && *n <= n_max)
            .map(|(k, _)| *k)
            .collect();
        v.sort_unstable();
        v
    };
    let found: HashSet<Col> = reps
        .par_iter()
        .flat_map_iter(|rep| {
            let mut out = Vec::new();
            let mut buf = Vec::new();
            for &a1 in &sf.units {
                let a1b = r.conj(a1);
                let d = [a1, r.mul(a1b, a1b), a1];
                let v: Col = std::array::from_fn(|i| r.mul(d[i], rep[i]));
                let (z0, z1, z2) = (sf.embed(v[0]), sf.embed(v[1]), sf.embed(v[2]));
                let zeta = z1 / z2;
                let u = -2.0 * (z0 / z2).im;
                // ζ + w must land in the horizontal rectangle.
                let mid = Complex64::new(
                    (window.lo[1] + window.hi[1]) / 2.0,
                    (window.lo[2] + window.hi[2]) / 2.0,
                );
                let half = Complex64::new(window.hi[1] - window.lo[1], window.hi[2] - window.lo[2])
                    .norm()
                    / 2.0;
                sf.pi_points_in_disc(mid - zeta, half + 1e-9, &mut buf);
                for &w in &buf {
                    let we = sf.embed(w);
                    let zn = zeta + we;
                    if !(window.lo[1] <= zn.re
                        && zn.re < window.hi[1]
                        && window.lo[2] <= zn.im
                        && zn.im < window.hi[2])
                    {
                        continue;
                    }
                    let w0 = sf.trace_lift(r.norm(w));
                    let ub = -2.0 * sf.embed(w0).im + u + 2.0 * (we * zeta.conj()).im;
                    // u' = ub − 2k·Im ν ; need −u'/2 ∈ [lo₀, hi₀)
                    let k_lo = ((2.0 * window.lo[0] + ub) / (2.0 * im_nu)).floor() as i64 - 1;
                    let k_hi = ((2.0 * window.hi[0] + ub) / (2.0 * im_nu)).ceil() as i64 + 1;
                    for k in k_lo..=k_hi {
                        let w0k = small::add(w0, small::scale(k, sf.nu));
                        let tv: Col = [
                            small::add(small::add(v[0], r.mul(r.conj(w), v[1])), r.mul(w0k, v[2])),
                            small::add(v[1], r.mul(w, v[2])),
                            v[2],
                        ];
                        let c = center_of(&sf, &tv);
                        if window.contains(c) {
                            out.push(projective_min(&sf, &tv));
                        }
                    }
                }
            }
            out.into_iter()
        })
        .collect();
    let mut centers: Vec<[f64; 3]> = found.iter().map(|v| center_of(&sf, v)).collect();
    centers.sort_by(|a, b| a.partial_cmp(b).expect("finite centres"));
    let normalisation = (f.disc() == -4).then(|| {
        let c = zeta::constants(f);
        // n₀ = 4, Covol = π/3 for the seed chain over Z[i]
        let n0 = 4.0;
        let covol = std::f64::consts::PI / 3.0;
        n0 * 4f64.powf(2.5) * c.zeta_k3 / (1024.0 * c.zeta3 * covol) * eps.powi(4)
    });
    Ok(ChainCenters {
        disc: f.disc(),
        eps,
        window: *window,
        centers,
        normalisation,
        saturated: orbit.exhausted,
    })
}

/// `(Im w₀, Re w, Im w)` of the centre `(z₁/z₂, −2 Im(z₀/z₂))`.
fn center_of(sf: &SmallField, v: &Col) -> [f64; 3] {
    let (z0, z1, z2) = (sf.embed(v[0]), sf.embed(v[1]), sf.embed(v[2]));
    let zeta = z1 / z2;
    [(z0 / z2).im, zeta.re, zeta.im]
}

fn projective_min(sf: &SmallField, v: &Col) -> Col {
    sf.units
        .iter()
        .map(|&u| v.map(|z| sf.ring.mul(u, z)))
        .min()
        .expect("units nonempty")
}

#[cfg(test)]
pub(crate) fn center_heis(sf: &SmallField, v: &Col) -> HeisPt {
    let c = center_of(sf, v);
    HeisPt::new(c[1], c[2], -2.0 * c[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadint::make_field;

    #[test]
    fn large_eps_has_no_finite_chains() {
        let f = make_field(-4).unwrap();
        // diam ≤ 2√q = 2, so nothing reaches ε = 2.5
        let r = chain_count(&f, None, &[2.5], 50).unwrap();
        assert_eq!(r.rows[0].count, 0);
    }

    #[test]
    fn children_preserve_q() {
        let f = make_field(-4).unwrap();
        let sf = SmallField::new(&f);
        let mut frontier = vec![[(0, 0), (1, 0), (0, 0)]];
        for _ in 0..2 {
            let mut next = Vec::new();
            for v in &frontier {
                let (mut buf, mut out) = (Vec::new(), Vec::new());
                children(&sf, v, 20, &mut buf, &mut out);
                for c in out {
                    assert_eq!(sf.qform(&c), 1);
                    assert!(sf.ring.norm(c[2]) <= 20);
                    next.push(c);
                }
            }
            frontier = next;
        }
        assert!(!frontier.is_empty());
    }

    #[test]
    fn center_matches_chain_module() {
        let f = make_field(-4).unwrap();
        let sf = SmallField::new(&f);
        let v: Col = [(1, 1), (-1, 0), (1, -1)];
        assert_eq!(sf.qform(&v), 1);
        let p = crate::chains::PolarPoint::new(small::col_to_big(-4, &v)).unwrap();
        let a = crate::chains::chain_center(&p).unwrap();
        let b = center_heis(&sf, &v);
        assert!((a.zeta - b.zeta).norm() < 1e-12 && (a.u - b.u).abs() < 1e-12);
    }

    fn d_of(r: small::Ring) -> i64 {
        r.t * r.t - 4 * r.n
    }

    /// All `Γ_∞`-classes of vectors with `q = 1` and `0 < n(z₂) ≤ x`.
    fn all_unit_vectors(sf: &SmallField, x: i64) -> HashSet<Col> {
        let r = sf.ring;
        let mut out = HashSet::new();
        for z2 in crate::counting::norm_ball(d_of(r), x) {
            let (h11, _, h22) = sf.c_pi(z2);
            let a_coef = r.trace(z2);
            let b_coef = r.trace(r.mul((0, 1), r.conj(z2)));
            let (g, sa, sb) = small::egcd(a_coef, b_coef);
            let kappa = (b_coef / g, -a_coef / g);
            let nuc = r.mul(sf.nu, z2);
            let j = if kappa.0 != 0 {
                nuc.0 / kappa.0
            } else {
                nuc.1 / kappa.1
            };
            for y in 0..h22 {
                for x1 in 0..h11 {
                    let z1 = (x1, y);
                    let t = r.norm(z1) - 1;
                    if t % g != 0 {
                        continue;
                    }
                    let z0s = small::scale(t / g, (sa, sb));
                    for i in 0..j.abs() {
                        let v = [small::add(z0s, small::scale(i, kappa)), z1, z2];
                        debug_assert_eq!(sf.qform(&v), 1);
                        out.insert(sf.canonical_projective(&v));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn orbit_inside_all_unit_vectors() {
        for (d, full) in [(-4, false), (-3, true)] {
            let f = make_field(d).unwrap();
            let sf = SmallField::new(&f);
            let all = all_unit_vectors(&sf, 32);
            let o = coset_bfs(&sf, &[(0, 0), (1, 0), (0, 0)], 64, 10_000).unwrap();
            let found: Vec<&Col> = o
                .classes
                .keys()
                .filter(|k| k[2] != (0, 0) && sf.ring.norm(k[2]) <= 32)
                .collect();
            assert!(found.iter().all(|k| all.contains(*k)));
            // Every unimodular vector is reached for the Eisenstein integers;
            // for the Gaussian integers the orbit of P₀ is a proper part.
            assert_eq!(found.len() == all.len(), full, "D = {d}");
        }
    }
}
