//! Chains of the hypersphere, described by their polar points.

use std::f64::consts::{PI, SQRT_2};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::heis::HeisPt;
use crate::picard::{qform, Column};
use crate::quadint::{FieldSpec, QuadInt};

/// A `q`-positive vector; the chain is the set of isotropic points
/// `q`-orthogonal to it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolarPoint {
    v: Column,
    qval: BigInt,
}

impl PolarPoint {
    pub fn new(v: Column) -> Result<Self> {
        let qval = qform(&v);
        if !qval.is_positive() {
            return Err(Error::NotAChain(qval.to_string()));
        }
        Ok(PolarPoint { v, qval })
    }

    pub fn vector(&self) -> &Column {
        &self.v
    }

    pub fn qval(&self) -> &BigInt {
        &self.qval
    }

    fn complex(&self) -> [Complex64; 3] {
        std::array::from_fn(|i| self.v[i].embed())
    }
}

/// `P₀ = (0, 1, 0)`, polar to the line `z₁ = 0`.
pub fn seed_chain(f: &FieldSpec) -> PolarPoint {
    PolarPoint {
        v: [f.zero(), f.one(), f.zero()],
        qval: 1.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainGeom {
    #[serde(serialize_with = "ser_heis")]
    pub center: HeisPt,
    pub r: f64,
    pub diam: f64,
    pub diam_prime: f64,
    pub diam_second: f64,
    /// Heisenberg translation taking the chain to the standard one centred at the origin.
    #[serde(serialize_with = "ser_heis")]
    pub translation: HeisPt,
}

fn ser_heis<S: serde::Serializer>(p: &HeisPt, s: S) -> std::result::Result<S::Ok, S::Error> {
    [p.zeta.re, p.zeta.im, p.u].serialize(s)
}

/// `R² = q(P)/n(z₂)` as a float, square-rooted once.
fn radius(p: &PolarPoint) -> Result<f64> {
    let c = &p.v[2];
    if c.is_zero() {
        return Err(Error::InfiniteChain);
    }
    let q = p.qval.to_f64().unwrap_or(f64::NAN);
    let n = c.norm().to_f64().unwrap_or(f64::NAN);
    Ok((q / n).sqrt())
}

/// Centre via the reducing translation: `(z₁/z₂, −2 Im(z₀/z₂))`.
pub fn chain_center(p: &PolarPoint) -> Result<HeisPt> {
    if p.v[2].is_zero() {
        return Err(Error::InfiniteChain);
    }
    let [z0, z1, z2] = p.complex();
    Ok(HeisPt {
        zeta: z1 / z2,
        u: -2.0 * (z0 / z2).im,
    })
}

/// The reflexion `x ↦ x − 2 B(x, P)/B(P, P) · P` fixing the projective line polar to `P`.
pub fn reflexion(p: &PolarPoint, x: &[Complex64; 3]) -> [Complex64; 3] {
    let pc = p.complex();
    let pairing = |a: &[Complex64; 3], b: &[Complex64; 3]| {
        a[1] * b[1].conj() - a[0] * b[2].conj() - a[2] * b[0].conj()
    };
    let coef = 2.0 * pairing(x, &pc) / pairing(&pc, &pc);
    std::array::from_fn(|i| x[i] - coef * pc[i])
}

/// Centre as the image of `∞ = [1:0:0]` under the reflexion.
pub fn chain_center_by_reflexion(p: &PolarPoint) -> Result<HeisPt> {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let img = reflexion(p, &[one, zero, zero]);
    if img[2].norm() == 0.0 {
        return Err(Error::InfiniteChain);
    }
    Ok(HeisPt::from_siegel_boundary(
        img[0] / img[2],
        img[1] / img[2],
    ))
}

pub fn chain_from_polar(p: &PolarPoint) -> Result<ChainGeom> {
    let r = radius(p)?;
    let center = chain_center(p)?;
    Ok(ChainGeom {
        center,
        r,
        diam: 2.0 * r,
        diam_prime: 2.0 * SQRT_2 * r,
        diam_second: SQRT_2 * r,
        translation: center.inv(),
    })
}

/// `k` points `cen·(R e^{2πij/k}, 0)` of the chain.
pub fn sample_chain(p: &PolarPoint, k: usize) -> Result<Vec<HeisPt>> {
    if k < 3 {
        return Err(Error::InvalidInput(format!(
            "need at least 3 samples, got {k}"
        )));
    }
    let g = chain_from_polar(p)?;
    Ok((0..k)
        .map(|j| {
            let th = 2.0 * PI * j as f64 / k as f64;
            g.center.mul(&HeisPt {
                zeta: Complex64::from_polar(g.r, th),
                u: 0.0,
            })
        })
        .collect())
}

/// Isotropic lift `[w₀ : w : 1]` of a boundary point.
pub fn lift(p: &HeisPt) -> [Complex64; 3] {
    let (w0, w) = p.to_siegel_boundary();
    [w0, w, Complex64::new(1.0, 0.0)]
}

/// `|B(x, P)| / (|x||P|)` — zero iff `x` lies on the chain's projective line.
pub fn line_residual(p: &PolarPoint, x: &[Complex64; 3]) -> f64 {
    let pc = p.complex();
    let b = x[1] * pc[1].conj() - x[0] * pc[2].conj() - x[2] * pc[0].conj();
    let n = |v: &[Complex64; 3]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    b.norm() / (n(x) * n(&pc))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainExport {
    pub polar: [[i64; 2]; 3],
    pub qval: i64,
    #[serde(rename = "R")]
    pub r: f64,
    pub center: [f64; 3],
    pub samples: Vec<[f64; 3]>,
}

pub fn export_chain(p: &PolarPoint, k: usize) -> Result<ChainExport> {
    let g = chain_from_polar(p)?;
    let pair = |z: &QuadInt| -> Result<[i64; 2]> {
        z.to_i64_pair()
            .map(|(x, y)| [x, y])
            .ok_or_else(|| Error::GuardExceeded("coordinate exceeds i64".into()))
    };
    Ok(ChainExport {
        polar: [pair(&p.v[0])?, pair(&p.v[1])?, pair(&p.v[2])?],
        qval: p
            .qval
            .to_i64()
            .ok_or_else(|| Error::GuardExceeded("q(P) exceeds i64".into()))?,
        r: g.r,
        center: [g.center.zeta.re, g.center.zeta.im, g.center.u],
        samples: sample_chain(p, k)?
            .iter()
            .map(|s| [s.zeta.re, s.zeta.im, s.u])
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadint::make_field;

    #[test]
    fn unit_chain() {
        let f = make_field(-4).unwrap();
        // [−1/2 : 0 : 1] scaled to integers
        let p = PolarPoint::new([f.elt(-1, 0), f.zero(), f.elt(2, 0)]).unwrap();
        let g = chain_from_polar(&p).unwrap();
        assert!((g.r - 1.0).abs() < 1e-15);
        assert!((g.diam - 2.0).abs() < 1e-15);
        assert!((g.diam_prime - 2.0 * SQRT_2).abs() < 1e-15);
        assert!((g.diam_second - SQRT_2).abs() < 1e-15);
        assert!(g.center.zeta.norm() < 1e-15 && g.center.u.abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_polars() {
        let f = make_field(-4).unwrap();
        assert!(matches!(
            PolarPoint::new([f.one(), f.zero(), f.one()]),
            Err(Error::NotAChain(_))
        ));
        let p0 = seed_chain(&f);
        assert_eq!(p0.qval(), &BigInt::from(1));
        assert_eq!(chain_from_polar(&p0), Err(Error::InfiniteChain));
    }

    #[test]
    fn four_samples() {
        let f = make_field(-4).unwrap();
        let p = PolarPoint::new([f.elt(-1, 0), f.zero(), f.elt(2, 0)]).unwrap();
        let s = sample_chain(&p, 4).unwrap();
        let expect = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)];
        for (pt, (x, y)) in s.iter().zip(expect) {
            assert!((pt.zeta - Complex64::new(x, y)).norm() < 1e-15 && pt.u == 0.0);
        }
        assert!(sample_chain(&p, 2).is_err());
    }
}
