//! Rational points `(a/c, α/c)` of `Heis₃` and their box statistics.
//!
//! Boxes live in the coordinates `(Im w₀, Re w, Im w)` in which the Haar
//! measure is Lebesgue; they are half-open, `lo ≤ x < hi`.

use rayon::prelude::*;
use serde::Serialize;

use super::norm_ball;
use crate::error::{Error, Result};
use crate::heis::{HeisPt, Triple};
use crate::quadint::FieldSpec;
use crate::small::{self, SmallField, Z2};
use crate::zeta;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Box3 {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
}

impl Box3 {
    pub fn new(lo: [f64; 3], hi: [f64; 3]) -> Result<Self> {
        for i in 0..3 {
            if !(lo[i].is_finite() && hi[i].is_finite()) {
                return Err(Error::InvalidInput("box must be bounded".into()));
            }
            if lo[i] >= hi[i] {
                return Err(Error::InvalidInput(format!(
                    "empty box side {i}: [{}, {})",
                    lo[i], hi[i]
                )));
            }
        }
        Ok(Box3 { lo, hi })
    }

    /// Unit cube `[c − ½, c + ½)³`.
    pub fn unit_at(c: [f64; 3]) -> Self {
        Box3 {
            lo: c.map(|x| x - 0.5),
            hi: c.map(|x| x + 0.5),
        }
    }

    pub fn volume(&self) -> f64 {
        (0..3).map(|i| self.hi[i] - self.lo[i]).product()
    }

    #[inline]
    pub fn contains(&self, p: [f64; 3]) -> bool {
        (0..3).all(|i| self.lo[i] <= p[i] && p[i] < self.hi[i])
    }

    fn hull(boxes: &[Box3]) -> Option<Box3> {
        let first = boxes.first()?;
        let mut h = *first;
        for b in boxes {
            for i in 0..3 {
                h.lo[i] = h.lo[i].min(b.lo[i]);
                h.hi[i] = h.hi[i].max(b.hi[i]);
            }
        }
        Some(h)
    }
}

/// `k × k × k` subdivision of a box.
pub fn grid_boxes(window: &Box3, k: usize) -> Vec<Box3> {
    let step: Vec<f64> = (0..3)
        .map(|i| (window.hi[i] - window.lo[i]) / k as f64)
        .collect();
    let mut out = Vec::with_capacity(k * k * k);
    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                let idx = [i, j, l];
                let lo: [f64; 3] = std::array::from_fn(|d| window.lo[d] + idx[d] as f64 * step[d]);
                let hi: [f64; 3] = std::array::from_fn(|d| {
                    if idx[d] + 1 == k {
                        window.hi[d]
                    } else {
                        window.lo[d] + (idx[d] + 1) as f64 * step[d]
                    }
                });
                out.push(Box3 { lo, hi });
            }
        }
    }
    out
}

/// Calls `emit(a, α, coords)` for every primitive triple with third entry
/// `c` whose point lies in `window`.
fn visit_c<F: FnMut(Z2, Z2, [f64; 3])>(sf: &SmallField, c: Z2, window: &Box3, mut emit: F) {
    let r = sf.ring;
    let nc = r.norm(c);
    let ncf = nc as f64;
    let cb = r.conj(c);
    let cc = sf.embed(c);
    let h = sf.half_sqrt_d;
    let t_half = r.t as f64 / 2.0;

    // α = w·c for w in the horizontal rectangle: bounding box of its image.
    let corners = [
        (window.lo[1], window.lo[2]),
        (window.lo[1], window.hi[2]),
        (window.hi[1], window.lo[2]),
        (window.hi[1], window.hi[2]),
    ];
    let imgs: Vec<num_complex::Complex64> = corners
        .iter()
        .map(|&(x, y)| num_complex::Complex64::new(x, y) * cc)
        .collect();
    let re_lo = imgs.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    let re_hi = imgs.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let im_lo = imgs.iter().map(|z| z.im).fold(f64::INFINITY, f64::min);
    let im_hi = imgs.iter().map(|z| z.im).fold(f64::NEG_INFINITY, f64::max);

    let a_coef = r.trace(c);
    let b_coef = r.trace(r.mul((0, 1), cb));
    let (g, sa, sb) = small::egcd(a_coef, b_coef);
    let kappa = (b_coef / g, -a_coef / g);
    // Im(κ c̄)/n(c): vertical step between consecutive solutions a.
    let step = r.mul(kappa, cb).1 as f64 * h / ncf;

    let y_lo = (im_lo / h).floor() as i64 - 1;
    let y_hi = (im_hi / h).ceil() as i64 + 1;
    for ay in y_lo..=y_hi {
        let x_lo = (re_lo - ay as f64 * t_half).floor() as i64 - 1;
        let x_hi = (re_hi - ay as f64 * t_half).ceil() as i64 + 1;
        for ax in x_lo..=x_hi {
            let alpha = (ax, ay);
            let ac = r.mul(alpha, cb);
            let re_w = (ac.0 as f64 + ac.1 as f64 * t_half) / ncf;
            let im_w = ac.1 as f64 * h / ncf;
            if !(window.lo[1] <= re_w
                && re_w < window.hi[1]
                && window.lo[2] <= im_w
                && im_w < window.hi[2])
            {
                continue;
            }
            let n = r.norm(alpha);
            if n % g != 0 {
                continue;
            }
            let ideal = small::ideal_hnf(r, &[alpha, c]);
            let coprime = ideal == (1, 0, 1);
            let a_star = small::scale(n / g, (sa, sb));
            let im0 = r.mul(a_star, cb).1 as f64 * h / ncf;
            // im0 + i·step ∈ [lo, hi)
            let (b1, b2) = ((window.lo[0] - im0) / step, (window.hi[0] - im0) / step);
            let (i_lo, i_hi) = (b1.min(b2).floor() as i64 - 1, b1.max(b2).ceil() as i64 + 1);
            for i in i_lo..=i_hi {
                let a = small::add(a_star, small::scale(i, kappa));
                let im_w0 = r.mul(a, cb).1 as f64 * h / ncf;
                if !(window.lo[0] <= im_w0 && im_w0 < window.hi[0]) {
                    continue;
                }
                if !coprime && !small::generates_with(r, small::reduce(a, ideal), ideal) {
                    continue;
                }
                emit(a, alpha, [im_w0, re_w, im_w]);
            }
        }
    }
}

fn check_s(s: u64) -> Result<i64> {
    if s == 0 {
        return Err(Error::InvalidInput("s must be at least 1".into()));
    }
    if s > 1 << 24 {
        return Err(Error::GuardExceeded(format!(
            "s = {s} is beyond the enumeration guard"
        )));
    }
    Ok(s as i64)
}

const POINT_GUARD: usize = 5_000_000;

/// Every primitive triple with `0 < n(c) ≤ s` and `tr(a c̄) = n(α)` whose
/// point lies in `window`, with the point. Not taken modulo shears.
pub fn rational_points_in_window(
    f: &FieldSpec,
    s: u64,
    window: &Box3,
) -> Result<Vec<(HeisPt, Triple)>> {
    let s = check_s(s)?;
    let sf = SmallField::new(f);
    let cs = norm_ball(f.disc(), s);
    let per_c: Vec<Vec<(Z2, Z2, Z2, [f64; 3])>> = cs
        .par_iter()
        .map(|&c| {
            let mut v = Vec::new();
            visit_c(&sf, c, window, |a, alpha, p| v.push((a, alpha, c, p)));
            v
        })
        .collect();
    let total: usize = per_c.iter().map(Vec::len).sum();
    if total > POINT_GUARD {
        return Err(Error::GuardExceeded(format!(
            "{total} points in window; use equidist_counts for large windows"
        )));
    }
    let d = f.disc();
    per_c
        .into_iter()
        .flatten()
        .map(|(a, alpha, c, p)| {
            let t = Triple::new(
                crate::QuadInt::from_i64(d, a.0, a.1),
                crate::QuadInt::from_i64(d, alpha.0, alpha.1),
                crate::QuadInt::from_i64(d, c.0, c.1),
            )?;
            let pt = HeisPt::new(p[1], p[2], -2.0 * p[0]);
            Ok((pt, t))
        })
        .collect()
}

/// Point counts per box without materialising the points.
pub fn equidist_counts(f: &FieldSpec, s: u64, boxes: &[Box3]) -> Result<Vec<u64>> {
    let s = check_s(s)?;
    let Some(hull) = Box3::hull(boxes) else {
        return Ok(Vec::new());
    };
    let sf = SmallField::new(f);
    let cs = norm_ball(f.disc(), s);
    Ok(cs
        .par_iter()
        .map(|&c| {
            let mut counts = vec![0u64; boxes.len()];
            visit_c(&sf, c, &hull, |_, _, p| {
                for (k, b) in boxes.iter().enumerate() {
                    if b.contains(p) {
                        counts[k] += 1;
                    }
                }
            });
            counts
        })
        .reduce(
            || vec![0u64; boxes.len()],
            |mut x, y| {
                for (a, b) in x.iter_mut().zip(y) {
                    *a += b;
                }
                x
            },
        ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquidistReport {
    pub disc: i64,
    pub s: u64,
    /// Normalising constant multiplying `s⁻²·count`.
    pub constant: f64,
    pub boxes: Vec<Box3>,
    pub counts: Vec<u64>,
    pub masses: Vec<f64>,
    pub volumes: Vec<f64>,
    /// `max |mass − volume|` over the boxes.
    pub discrepancy: f64,
}

impl EquidistReport {
    pub fn from_counts(f: &FieldSpec, s: u64, boxes: &[Box3], counts: Vec<u64>) -> Self {
        let constant = zeta::constants(f).equidist_c;
        let scale = constant / (s as f64).powi(2);
        let masses: Vec<f64> = counts.iter().map(|&n| n as f64 * scale).collect();
        let volumes: Vec<f64> = boxes.iter().map(Box3::volume).collect();
        let discrepancy = masses
            .iter()
            .zip(&volumes)
            .map(|(m, v)| (m - v).abs())
            .fold(0.0, f64::max);
        EquidistReport {
            disc: f.disc(),
            s,
            constant,
            boxes: boxes.to_vec(),
            counts,
            masses,
            volumes,
            discrepancy,
        }
    }
}

/// Normalised box masses of a point list produced at parameter `s`.
pub fn equidist_statistic(
    f: &FieldSpec,
    s: u64,
    points: &[(HeisPt, Triple)],
    boxes: &[Box3],
) -> EquidistReport {
    let counts = boxes
        .iter()
        .map(|b| {
            points
                .iter()
                .filter(|(p, _)| b.contains([-p.u / 2.0, p.zeta.re, p.zeta.im]))
                .count() as u64
        })
        .collect();
    EquidistReport::from_counts(f, s, boxes, counts)
}
