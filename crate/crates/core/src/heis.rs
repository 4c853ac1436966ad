//! The Heisenberg group `Heis₃`, its integral points, the shear action on
//! triples and the Cygan-type gauges.

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::quadint::{reduce_mod_sublattice, FieldSpec, QuadInt, ZLattice2};

/// A point `(ζ, u)` of `Heis₃ = C × R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeisPt {
    pub zeta: Complex64,
    pub u: f64,
}

impl HeisPt {
    pub const ORIGIN: HeisPt = HeisPt {
        zeta: Complex64::new(0.0, 0.0),
        u: 0.0,
    };

    pub fn new(re: f64, im: f64, u: f64) -> Self {
        HeisPt {
            zeta: Complex64::new(re, im),
            u,
        }
    }

    /// `(ζ, u)(ζ', u') = (ζ + ζ', u + u' + 2 Im ζ·conj(ζ'))`
    pub fn mul(&self, q: &HeisPt) -> HeisPt {
        HeisPt {
            zeta: self.zeta + q.zeta,
            u: self.u + q.u + 2.0 * (self.zeta * q.zeta.conj()).im,
        }
    }

    pub fn inv(&self) -> HeisPt {
        HeisPt {
            zeta: -self.zeta,
            u: -self.u,
        }
    }

    /// `(|ζ|⁴ + u²)^{1/4}`
    pub fn gauge(&self) -> f64 {
        let r2 = self.zeta.norm_sqr();
        (r2 * r2 + self.u * self.u).sqrt().sqrt()
    }

    /// `((|ζ|⁴ + u²)^{1/2} + |ζ|²)^{1/2}`
    pub fn gauge_prime(&self) -> f64 {
        let r2 = self.zeta.norm_sqr();
        ((r2 * r2 + self.u * self.u).sqrt() + r2).sqrt()
    }

    /// `(ζ, u) ↦ (λζ, λ²u)`
    pub fn dilate(&self, lambda: f64) -> Result<HeisPt> {
        if !(lambda > 0.0) {
            return Err(Error::InvalidInput(format!(
                "dilation factor must be positive, got {lambda}"
            )));
        }
        Ok(HeisPt {
            zeta: self.zeta * lambda,
            u: self.u * lambda * lambda,
        })
    }

    /// `(w₀, w) = ((|ζ|² − iu)/2, ζ)`
    pub fn to_siegel_boundary(&self) -> (Complex64, Complex64) {
        (
            Complex64::new(self.zeta.norm_sqr() / 2.0, -self.u / 2.0),
            self.zeta,
        )
    }

    pub fn from_siegel_boundary(w0: Complex64, w: Complex64) -> HeisPt {
        HeisPt {
            zeta: w,
            u: -2.0 * w0.im,
        }
    }
}

pub fn heis_mul(p: &HeisPt, q: &HeisPt) -> HeisPt {
    p.mul(q)
}

pub fn heis_inv(p: &HeisPt) -> HeisPt {
    p.inv()
}

/// Cygan distance `d(p, q) = gauge(p⁻¹q)`.
pub fn cygan(p: &HeisPt, q: &HeisPt) -> f64 {
    p.inv().mul(q).gauge()
}

/// Modified Cygan distance `d'`.
pub fn cygan_prime(p: &HeisPt, q: &HeisPt) -> f64 {
    p.inv().mul(q).gauge_prime()
}

/// `d'' = d² / d'` (zero on the diagonal).
pub fn cygan_second(p: &HeisPt, q: &HeisPt) -> f64 {
    let g = p.inv().mul(q);
    let dp = g.gauge_prime();
    if dp == 0.0 {
        0.0
    } else {
        let d = g.gauge();
        d * d / dp
    }
}

pub fn dilate(p: &HeisPt, lambda: f64) -> Result<HeisPt> {
    p.dilate(lambda)
}

/// An element `(w₀, w)` of `Heis₃(O_K)`: `tr w₀ = n w`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HeisIntElem {
    w0: QuadInt,
    w: QuadInt,
}

impl HeisIntElem {
    pub fn new(w0: QuadInt, w: QuadInt) -> Result<Self> {
        if w0.disc() != w.disc() {
            return Err(Error::FieldMismatch(w0.disc(), w.disc()));
        }
        if w0.trace() != w.norm() {
            return Err(Error::Constraint(format!(
                "tr(w0) = {} but n(w) = {}",
                w0.trace(),
                w.norm()
            )));
        }
        Ok(HeisIntElem { w0, w })
    }

    pub fn identity(f: &FieldSpec) -> Self {
        HeisIntElem {
            w0: f.zero(),
            w: f.zero(),
        }
    }

    /// The unique element `(w₀, w)` with `w₀` chosen by [`FieldSpec::trace_lift`].
    pub fn with_lift(f: &FieldSpec, w: QuadInt) -> Result<Self> {
        let w0 = f.trace_lift(&w.norm())?;
        HeisIntElem::new(w0, w)
    }

    pub fn w0(&self) -> &QuadInt {
        &self.w0
    }

    pub fn w(&self) -> &QuadInt {
        &self.w
    }

    /// `(w₀, w)(w₀', w') = (w₀ + w₀' + w'·conj(w), w + w')`
    pub fn try_mul(&self, o: &HeisIntElem) -> Result<HeisIntElem> {
        let w0 = self
            .w0
            .try_add(&o.w0)?
            .try_add(&o.w.try_mul(&self.w.conj())?)?;
        Ok(HeisIntElem {
            w0,
            w: self.w.try_add(&o.w)?,
        })
    }

    pub fn mul(&self, o: &HeisIntElem) -> HeisIntElem {
        self.try_mul(o).expect("mixed-field Heisenberg product")
    }

    pub fn inv(&self) -> HeisIntElem {
        HeisIntElem {
            w0: self.w0.conj(),
            w: -&self.w,
        }
    }

    pub fn to_point(&self) -> HeisPt {
        HeisPt::from_siegel_boundary(self.w0.embed(), self.w.embed())
    }
}

/// A triple `(a, α, c)` with `tr(a·conj c) = n(α)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    a: QuadInt,
    alpha: QuadInt,
    c: QuadInt,
}

impl Triple {
    pub fn new(a: QuadInt, alpha: QuadInt, c: QuadInt) -> Result<Self> {
        for z in [&alpha, &c] {
            if z.disc() != a.disc() {
                return Err(Error::FieldMismatch(a.disc(), z.disc()));
            }
        }
        let lhs = (&a * &c.conj()).trace();
        if lhs != alpha.norm() {
            return Err(Error::Constraint(format!(
                "tr(a·c̄) = {lhs} but n(α) = {}",
                alpha.norm()
            )));
        }
        Ok(Triple { a, alpha, c })
    }

    pub fn a(&self) -> &QuadInt {
        &self.a
    }

    pub fn alpha(&self) -> &QuadInt {
        &self.alpha
    }

    pub fn c(&self) -> &QuadInt {
        &self.c
    }

    pub fn into_parts(self) -> (QuadInt, QuadInt, QuadInt) {
        (self.a, self.alpha, self.c)
    }

    /// The rational point `(a/c, α/c)` of `Heis₃`, or `None` when `c = 0`.
    pub fn to_point(&self) -> Option<HeisPt> {
        if self.c.is_zero() {
            return None;
        }
        let c = self.c.embed();
        Some(HeisPt::from_siegel_boundary(
            self.a.embed() / c,
            self.alpha.embed() / c,
        ))
    }
}

/// `(a + conj(w)·α + w₀·c, α + w·c, c)`, without any constraint on the column.
pub(crate) fn shear_column(g: &HeisIntElem, v: [&QuadInt; 3]) -> [QuadInt; 3] {
    let [a, alpha, c] = v;
    [
        a + &(&g.w.conj() * alpha) + &g.w0 * c,
        alpha + &(&g.w * c),
        c.clone(),
    ]
}

pub fn shear(g: &HeisIntElem, t: &Triple) -> Triple {
    let [a, alpha, c] = shear_column(g, [&t.a, &t.alpha, &t.c]);
    Triple { a, alpha, c }
}

/// The lattice `Π` together with coset representatives of `O_K / Π`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiLattice {
    pub lattice: ZLattice2,
    pub reps: Vec<QuadInt>,
}

impl PiLattice {
    pub fn new(f: &FieldSpec) -> Self {
        let lattice = f.pi_lattice();
        let reps = if f.pi_index() == 1 {
            vec![f.zero()]
        } else {
            vec![f.zero(), f.one()]
        };
        PiLattice { lattice, reps }
    }
}

/// Shear-reduces an arbitrary column with `c ≠ 0`; returns the element used
/// and the reduced column. The result depends only on the `Heis₃(O_K)`-orbit.
pub(crate) fn shear_reduce(f: &FieldSpec, v: [&QuadInt; 3]) -> Result<(HeisIntElem, [QuadInt; 3])> {
    let [a, alpha, c] = v;
    for z in v {
        if z.disc() != f.disc() {
            return Err(Error::FieldMismatch(f.disc(), z.disc()));
        }
    }
    if c.is_zero() {
        return Err(Error::ZeroThirdCoordinate("shear reduction needs c ≠ 0"));
    }
    let lattice = f.pi_lattice().scaled(c);
    let alpha_red = reduce_mod_sublattice(alpha, &lattice)?;
    let w = (&alpha_red - alpha)
        .div_exact(c)
        .expect("α' − α lies in c·Π by construction");
    let g = HeisIntElem::with_lift(f, w)?;
    let [a1, _, _] = shear_column(&g, [a, alpha, c]);

    // a ↦ a − kνc shifts Im(a·c̄) by −k·(t_K/2)·n(c).
    let nc = c.norm();
    let y = (&a1 * &c.conj()).y().clone();
    let k = y.div_floor(&(nc * f.t_k_multiple()));
    let nu = f.imaginary_generator();
    let g = if k.is_zero() {
        g
    } else {
        let shift = nu.scale(&k);
        HeisIntElem {
            w0: &g.w0 - &shift,
            w: g.w,
        }
    };
    let out = shear_column(&g, [a, alpha, c]);
    Ok((g, out))
}

/// Canonical representative of the `Heis₃(O_K)`-orbit of a triple with `c ≠ 0`.
pub fn canonical_triple(f: &FieldSpec, t: &Triple) -> Result<Triple> {
    let (_, [a, alpha, c]) = shear_reduce(f, [&t.a, &t.alpha, &t.c])?;
    Ok(Triple { a, alpha, c })
}
