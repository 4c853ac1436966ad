//! Exact arithmetic in the ring of integers of an imaginary quadratic field.
//!
//! Elements are stored as `x + y·ω` in the integral basis
//!
//! * `ω = i√|D|/2` when `D ≡ 0 (mod 4)`,
//! * `ω = (1 + i√|D|)/2` when `D ≡ 1 (mod 4)`,
//!
//! so that `ω² = t·ω − n` with `(t, n) = (0, |D|/4)` or `(1, (1 − D)/4)`.
//! Z-submodules of the ring (ideals, the lattice `c·Π`, ...) are kept in
//! column Hermite normal form.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which integral basis the field uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisCase {
    ZeroMod4,
    OneMod4,
}

/// Metadata of an imaginary quadratic field `K = Q(√D)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    disc: i64,
    basis_case: BasisCase,
    units: Vec<QuadInt>,
    /// `t_K = t_k_multiple · √|D|`.
    t_k_multiple: i64,
    pi_index: i64,
}

fn is_squarefree(mut m: i64) -> bool {
    m = m.abs();
    let mut p = 2i64;
    while p * p <= m {
        if m % (p * p) == 0 {
            return false;
        }
        if m % p == 0 {
            m /= p;
        }
        p += 1;
    }
    true
}

/// Builds the field metadata for a negative fundamental discriminant.
pub fn make_field(disc: i64) -> Result<FieldSpec> {
    let bad = |reason| Err(Error::InvalidDiscriminant { disc, reason });
    if disc >= 0 {
        return bad("discriminant must be negative");
    }
    let case = match disc.rem_euclid(4) {
        1 => {
            if !is_squarefree(disc) {
                return bad("D ≡ 1 mod 4 but D is not squarefree");
            }
            BasisCase::OneMod4
        }
        0 => {
            let m = disc / 4;
            if !matches!(m.rem_euclid(4), 2 | 3) {
                return bad("D = 4m requires m ≡ 2 or 3 mod 4");
            }
            if !is_squarefree(m) {
                return bad("D = 4m requires m squarefree");
            }
            BasisCase::ZeroMod4
        }
        _ => return bad("D must be congruent to 0 or 1 mod 4"),
    };
    let elt = |x: i64, y: i64| QuadInt::from_i64(disc, x, y);
    let mut units = vec![elt(1, 0), elt(-1, 0)];
    match disc {
        -4 => units.extend([elt(0, 1), elt(0, -1)]),
        // ω = e^{iπ/3}; ω − 1 = e^{2iπ/3}
        -3 => units.extend([elt(0, 1), elt(0, -1), elt(-1, 1), elt(1, -1)]),
        _ => {}
    }
    let (t_k_multiple, pi_index) = match case {
        BasisCase::ZeroMod4 => (1, 2),
        BasisCase::OneMod4 => (2, 1),
    };
    Ok(FieldSpec {
        disc,
        basis_case: case,
        units,
        t_k_multiple,
        pi_index,
    })
}

impl FieldSpec {
    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn basis_case(&self) -> BasisCase {
        self.basis_case
    }

    pub fn units(&self) -> &[QuadInt] {
        &self.units
    }

    pub fn unit_count(&self) -> usize {
        self.units.len()
    }

    /// `t_K / √|D|`, either 1 or 2.
    pub fn t_k_multiple(&self) -> i64 {
        self.t_k_multiple
    }

    /// Minimal positive vertical translation length of `Heis₃(O_K)`.
    pub fn t_k(&self) -> f64 {
        self.t_k_multiple as f64 * self.sqrt_abs_disc()
    }

    /// Index `[O_K : Π]` of the horizontal projection lattice.
    pub fn pi_index(&self) -> i64 {
        self.pi_index
    }

    pub fn sqrt_abs_disc(&self) -> f64 {
        (self.disc.unsigned_abs() as f64).sqrt()
    }

    /// Trace of ω.
    pub fn omega_trace(&self) -> i64 {
        omega_params(self.disc).0
    }

    /// Norm of ω.
    pub fn omega_norm(&self) -> i64 {
        omega_params(self.disc).1
    }

    pub fn elt(&self, x: i64, y: i64) -> QuadInt {
        QuadInt::from_i64(self.disc, x, y)
    }

    pub fn elt_big(&self, x: BigInt, y: BigInt) -> QuadInt {
        QuadInt {
            disc: self.disc,
            x,
            y,
        }
    }

    pub fn zero(&self) -> QuadInt {
        self.elt(0, 0)
    }

    pub fn one(&self) -> QuadInt {
        self.elt(1, 0)
    }

    pub fn omega(&self) -> QuadInt {
        self.elt(0, 1)
    }

    pub fn is_unit(&self, z: &QuadInt) -> bool {
        z.disc == self.disc && z.norm().is_one()
    }

    /// Generator `ν` of the trace-zero submodule `{z : tr z = 0}`; `ν = i·t_K/2`.
    pub fn imaginary_generator(&self) -> QuadInt {
        match self.basis_case {
            BasisCase::ZeroMod4 => self.elt(0, 1),
            BasisCase::OneMod4 => self.elt(-1, 2),
        }
    }

    /// The sublattice `Π = n⁻¹(tr O_K)` of elements that occur as horizontal
    /// parts of integral Heisenberg elements.
    pub fn pi_lattice(&self) -> ZLattice2 {
        match self.basis_case {
            BasisCase::OneMod4 => ZLattice2::full(self.disc),
            BasisCase::ZeroMod4 => {
                let m = -self.disc / 4;
                if m % 2 == 0 {
                    // x even
                    ZLattice2::from_hnf(self.disc, 2.into(), 0.into(), 1.into())
                } else {
                    // x ≡ y mod 2
                    ZLattice2::from_hnf(self.disc, 2.into(), 1.into(), 1.into())
                }
            }
        }
    }

    /// A deterministic `w₀` with `tr(w₀) = n` for an integer `n` in the trace
    /// group: `(n/2, 0)` for even `n`, else `((n − 1)/2, 1)` (odd `n` only
    /// occurs when `D ≡ 1 mod 4`).
    pub fn trace_lift(&self, n: &BigInt) -> Result<QuadInt> {
        let two = BigInt::from(2);
        if n.is_even() {
            Ok(self.elt_big(n / &two, BigInt::zero()))
        } else if self.basis_case == BasisCase::OneMod4 {
            Ok(self.elt_big((n - 1) / &two, BigInt::one()))
        } else {
            Err(Error::Constraint(format!(
                "odd trace {n} is impossible when D ≡ 0 mod 4"
            )))
        }
    }
}

/// `(tr ω, n ω)` for a discriminant.
pub(crate) fn omega_params(disc: i64) -> (i64, i64) {
    if disc.rem_euclid(4) == 0 {
        (0, -disc / 4)
    } else {
        (1, (1 - disc) / 4)
    }
}

/// An element `x + y·ω` of `O_K`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadInt {
    disc: i64,
    x: BigInt,
    y: BigInt,
}

impl fmt::Debug for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}ω)", self.x, self.y)
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl QuadInt {
    pub fn from_i64(disc: i64, x: i64, y: i64) -> Self {
        QuadInt {
            disc,
            x: x.into(),
            y: y.into(),
        }
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    /// Coordinates as machine integers, when they fit.
    pub fn to_i64_pair(&self) -> Option<(i64, i64)> {
        Some((self.x.to_i64()?, self.y.to_i64()?))
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    fn check_same(&self, other: &QuadInt) -> Result<()> {
        if self.disc == other.disc {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.disc, other.disc))
        }
    }

    pub fn try_add(&self, other: &QuadInt) -> Result<QuadInt> {
        self.check_same(other)?;
        Ok(QuadInt {
            disc: self.disc,
            x: &self.x + &other.x,
            y: &self.y + &other.y,
        })
    }

    pub fn try_sub(&self, other: &QuadInt) -> Result<QuadInt> {
        self.check_same(other)?;
        Ok(QuadInt {
            disc: self.disc,
            x: &self.x - &other.x,
            y: &self.y - &other.y,
        })
    }

    pub fn try_mul(&self, other: &QuadInt) -> Result<QuadInt> {
        self.check_same(other)?;
        let (t, n) = omega_params(self.disc);
        let yy = &self.y * &other.y;
        Ok(QuadInt {
            disc: self.disc,
            x: &self.x * &other.x - &yy * n,
            y: &self.x * &other.y + &other.x * &self.y + yy * t,
        })
    }

    /// Complex conjugate; `conj(ω) = tr(ω) − ω`.
    pub fn conj(&self) -> QuadInt {
        let (t, _) = omega_params(self.disc);
        QuadInt {
            disc: self.disc,
            x: &self.x + &self.y * t,
            y: -&self.y,
        }
    }

    pub fn trace(&self) -> BigInt {
        let (t, _) = omega_params(self.disc);
        &self.x * 2 + &self.y * t
    }

    pub fn norm(&self) -> BigInt {
        let (t, n) = omega_params(self.disc);
        &self.x * &self.x + &self.x * &self.y * t + &self.y * &self.y * n
    }

    /// Coordinate of `Im(z)` in units of `√|D|/2`; equals `y`.
    pub fn imag_units(&self) -> &BigInt {
        &self.y
    }

    pub fn scale(&self, k: &BigInt) -> QuadInt {
        QuadInt {
            disc: self.disc,
            x: &self.x * k,
            y: &self.y * k,
        }
    }

    /// `self / d` when the quotient lies in `O_K`.
    pub fn div_exact(&self, d: &QuadInt) -> Option<QuadInt> {
        if d.is_zero() || self.disc != d.disc {
            return None;
        }
        let num = self.try_mul(&d.conj()).ok()?;
        let n = d.norm();
        if (&num.x % &n).is_zero() && (&num.y % &n).is_zero() {
            Some(QuadInt {
                disc: self.disc,
                x: num.x / &n,
                y: num.y / &n,
            })
        } else {
            None
        }
    }

    /// Complex embedding.
    pub fn embed(&self) -> Complex64 {
        let (t, _) = omega_params(self.disc);
        let s = (self.disc.unsigned_abs() as f64).sqrt() / 2.0;
        let x = self.x.to_f64().unwrap_or(f64::NAN);
        let y = self.y.to_f64().unwrap_or(f64::NAN);
        Complex64::new(x + y * t as f64 / 2.0, y * s)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a> $tr<&'a QuadInt> for &'a QuadInt {
            type Output = QuadInt;
            fn $method(self, rhs: &'a QuadInt) -> QuadInt {
                self.$checked(rhs).expect("mixed-field arithmetic")
            }
        }
        impl $tr<QuadInt> for QuadInt {
            type Output = QuadInt;
            fn $method(self, rhs: QuadInt) -> QuadInt {
                (&self).$checked(&rhs).expect("mixed-field arithmetic")
            }
        }
        impl<'a> $tr<&'a QuadInt> for QuadInt {
            type Output = QuadInt;
            fn $method(self, rhs: &'a QuadInt) -> QuadInt {
                (&self).$checked(rhs).expect("mixed-field arithmetic")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt {
            disc: self.disc,
            x: -&self.x,
            y: -&self.y,
        }
    }
}

impl Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        -&self
    }
}

/// An element of `K` written as `num / den` with `den > 0` and
/// `gcd(num.x, num.y, den) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KNum {
    num: QuadInt,
    den: BigInt,
}

impl KNum {
    pub fn new(num: QuadInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        let (mut num, mut den) = (num, den);
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        let g = num.x.gcd(&num.y).gcd(&den);
        if !g.is_one() {
            num.x /= &g;
            num.y /= &g;
            den /= &g;
        }
        Ok(KNum { num, den })
    }

    /// The quotient `a / c` of two integers, `c ≠ 0`.
    pub fn ratio(a: &QuadInt, c: &QuadInt) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::InvalidInput("division by zero".into()));
        }
        KNum::new(a.try_mul(&c.conj())?, c.norm())
    }

    pub fn num(&self) -> &QuadInt {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn embed(&self) -> Complex64 {
        self.num.embed() / self.den.to_f64().unwrap_or(f64::NAN)
    }
}

/// A Z-submodule of `O_K ≅ Z²` in column Hermite normal form.
///
/// The basis columns are `b₁ = (h11, 0)` and `b₂ = (h12, h22)` in
/// `(1, ω)` coordinates, with `h22 ≥ 0` and `0 ≤ h12 < h11` whenever
/// `h11 > 0`. Full-rank lattices have `h11, h22 > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZLattice2 {
    disc: i64,
    h11: BigInt,
    h12: BigInt,
    h22: BigInt,
}

impl ZLattice2 {
    pub fn full(disc: i64) -> Self {
        Self::from_hnf(disc, BigInt::one(), BigInt::zero(), BigInt::one())
    }

    pub fn zero(disc: i64) -> Self {
        Self::from_hnf(disc, BigInt::zero(), BigInt::zero(), BigInt::zero())
    }

    pub(crate) fn from_hnf(disc: i64, h11: BigInt, h12: BigInt, h22: BigInt) -> Self {
        ZLattice2 {
            disc,
            h11,
            h12,
            h22,
        }
    }

    /// HNF of the Z-span of the given elements.
    pub fn from_generators(disc: i64, gens: &[QuadInt]) -> Self {
        let vecs: Vec<(BigInt, BigInt)> = gens.iter().map(|g| (g.x.clone(), g.y.clone())).collect();
        let (h11, h12, h22) = hnf_columns(&vecs);
        ZLattice2 {
            disc,
            h11,
            h12,
            h22,
        }
    }

    /// Interprets the four integers `h11, h12, h22` (and checks shape).
    pub fn from_hnf_checked(disc: i64, h11: i64, h12: i64, h22: i64) -> Result<Self> {
        if h11 <= 0 || h22 <= 0 || h12 < 0 || h12 >= h11 {
            return Err(Error::InvalidInput(format!(
                "({h11}, {h12}, {h22}) is not a full-rank HNF"
            )));
        }
        Ok(Self::from_hnf(disc, h11.into(), h12.into(), h22.into()))
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    /// `[[h11, h12], [0, h22]]`.
    pub fn hnf(&self) -> [[BigInt; 2]; 2] {
        [
            [self.h11.clone(), self.h12.clone()],
            [BigInt::zero(), self.h22.clone()],
        ]
    }

    pub fn basis(&self) -> [QuadInt; 2] {
        [
            QuadInt {
                disc: self.disc,
                x: self.h11.clone(),
                y: BigInt::zero(),
            },
            QuadInt {
                disc: self.disc,
                x: self.h12.clone(),
                y: self.h22.clone(),
            },
        ]
    }

    pub fn is_zero(&self) -> bool {
        self.h11.is_zero() && self.h12.is_zero() && self.h22.is_zero()
    }

    /// Index in `O_K`, or zero for lattices of rank < 2.
    pub fn index(&self) -> BigInt {
        &self.h11 * &self.h22
    }

    /// Image of the lattice under multiplication by `c`.
    pub fn scaled(&self, c: &QuadInt) -> Self {
        let gens: Vec<QuadInt> = self.basis().iter().map(|b| b * c).collect();
        ZLattice2::from_generators(self.disc, &gens)
    }

    pub fn contains(&self, z: &QuadInt) -> bool {
        match reduce_mod_sublattice(z, self) {
            Ok(r) => r.is_zero(),
            Err(_) => z.is_zero() && self.is_zero(),
        }
    }

    /// Enumerates one representative per coset of the lattice in `O_K`
    /// (the box `[0, h11) × [0, h22)` in `(1, ω)` coordinates).
    pub fn coset_representatives(&self) -> Result<Vec<QuadInt>> {
        if self.index().is_zero() {
            return Err(Error::ZeroLattice);
        }
        let h11 = self
            .h11
            .to_i64()
            .ok_or_else(|| Error::GuardExceeded("lattice index too large".into()))?;
        let h22 = self
            .h22
            .to_i64()
            .ok_or_else(|| Error::GuardExceeded("lattice index too large".into()))?;
        let mut out = Vec::with_capacity((h11 * h22) as usize);
        for y in 0..h22 {
            for x in 0..h11 {
                out.push(QuadInt::from_i64(self.disc, x, y));
            }
        }
        Ok(out)
    }
}

/// Column HNF of a list of integer vectors: returns `(h11, h12, h22)`.
pub(crate) fn hnf_columns(vecs: &[(BigInt, BigInt)]) -> (BigInt, BigInt, BigInt) {
    let mut pivot: Option<(BigInt, BigInt)> = None;
    let mut horizontal = BigInt::zero();
    for (x, y) in vecs {
        if y.is_zero() {
            horizontal = horizontal.gcd(x);
            continue;
        }
        match pivot.take() {
            None => pivot = Some((x.clone(), y.clone())),
            Some((px, py)) => {
                let eg = py.extended_gcd(y);
                let g = eg.gcd;
                let nx = &eg.x * &px + &eg.y * x;
                // (y/g)·pivot − (py/g)·v has zero second coordinate.
                let hx = (y / &g) * &px - (&py / &g) * x;
                horizontal = horizontal.gcd(&hx);
                pivot = Some((nx, g));
            }
        }
    }
    let h11 = horizontal.abs();
    match pivot {
        None => (h11, BigInt::zero(), BigInt::zero()),
        Some((mut px, mut py)) => {
            if py.is_negative() {
                px = -px;
                py = -py;
            }
            if !h11.is_zero() {
                px = px.mod_floor(&h11);
            }
            (h11, px, py)
        }
    }
}

/// HNF of the ideal generated by `gens` (the Z-span of `g` and `g·ω`).
pub fn ideal_span(gens: &[QuadInt]) -> ZLattice2 {
    let disc = gens.first().map(|g| g.disc).unwrap_or(-4);
    let omega = QuadInt::from_i64(disc, 0, 1);
    let mut all = Vec::with_capacity(2 * gens.len());
    for g in gens {
        all.push(g.clone());
        all.push(g * &omega);
    }
    ZLattice2::from_generators(disc, &all)
}

/// True when `⟨a, α, c⟩ = O_K`.
pub fn is_coprime_triple(a: &QuadInt, alpha: &QuadInt, c: &QuadInt) -> bool {
    ideal_span(&[a.clone(), alpha.clone(), c.clone()])
        .index()
        .is_one()
}

/// Representative of `z` modulo `L` whose coordinates in the HNF basis of `L`
/// lie in `[0, 1)`.
pub fn reduce_mod_sublattice(z: &QuadInt, lattice: &ZLattice2) -> Result<QuadInt> {
    let det = lattice.index();
    if det.is_zero() {
        return Err(Error::ZeroLattice);
    }
    // z = u·b₁ + v·b₂ with real (u, v); subtract their integer parts.
    let v = z.y.div_floor(&lattice.h22);
    let u = (&z.x * &lattice.h22 - &z.y * &lattice.h12).div_floor(&det);
    Ok(QuadInt {
        disc: z.disc,
        x: &z.x - &u * &lattice.h11 - &v * &lattice.h12,
        y: &z.y - &v * &lattice.h22,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_metadata() {
        let f = make_field(-4).unwrap();
        assert_eq!(f.unit_count(), 4);
        assert!((f.t_k() - 2.0).abs() < 1e-15);
        assert_eq!(f.pi_index(), 2);

        let f = make_field(-3).unwrap();
        assert_eq!(f.unit_count(), 6);
        assert!((f.t_k() - 2.0 * 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(f.pi_index(), 1);

        let f = make_field(-8).unwrap();
        assert_eq!(f.unit_count(), 2);
        assert!((f.t_k() - 2.0 * 2f64.sqrt()).abs() < 1e-15);
        for u in f.units() {
            assert!(f.is_unit(u));
        }
    }

    #[test]
    fn rejects_non_fundamental() {
        for d in [0, 5, -1, -2, -12, -16, -27, -36] {
            assert!(make_field(d).is_err(), "D = {d}");
        }
        for d in [-3, -4, -7, -8, -11, -15, -19, -20, -23, -24, -43, -163] {
            assert!(make_field(d).is_ok(), "D = {d}");
        }
    }

    #[test]
    fn ring_examples() {
        let f = make_field(-4).unwrap();
        assert_eq!(f.elt(1, 1).norm(), 2.into());

        let f = make_field(-3).unwrap();
        let w = f.omega();
        assert_eq!(w.trace(), 1.into());
        assert_eq!(w.norm(), 1.into());
        // the units of Z[ω] are the sixth roots of unity
        for u in f.units() {
            let z = u.embed();
            assert!((z.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn conj_is_involution() {
        for d in [-3, -4, -7, -8] {
            let f = make_field(d).unwrap();
            let z = f.elt(3, -5);
            assert_eq!(z.conj().conj(), z);
            assert_eq!(z.conj().trace(), z.trace());
            assert_eq!(&z + &z.conj(), f.elt_big(z.trace(), 0.into()));
            assert_eq!(&z * &z.conj(), f.elt_big(z.norm(), 0.into()));
        }
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = QuadInt::from_i64(-4, 1, 1);
        let b = QuadInt::from_i64(-3, 1, 1);
        assert_eq!(a.try_mul(&b), Err(Error::FieldMismatch(-4, -3)));
        assert!(a.try_add(&b).is_err());
    }

    #[test]
    fn coprimality_examples() {
        let f = make_field(-4).unwrap();
        assert!(is_coprime_triple(&f.zero(), &f.zero(), &f.one()));
        // ⟨2, 1 + i⟩ = ⟨1 + i⟩ has index 2
        let l = ideal_span(&[f.elt(2, 0), f.elt(1, 1), f.zero()]);
        assert_eq!(l.index(), 2.into());
        assert!(!is_coprime_triple(&f.elt(2, 0), &f.elt(1, 1), &f.zero()));
        assert!(is_coprime_triple(&f.elt(2, 1), &f.elt(2, -1), &f.zero()));
    }

    #[test]
    fn ideal_span_zero() {
        let f = make_field(-7).unwrap();
        let l = ideal_span(&[f.zero(), f.zero()]);
        assert!(l.is_zero());
        assert_eq!(reduce_mod_sublattice(&f.one(), &l), Err(Error::ZeroLattice));
    }

    #[test]
    fn reduction_examples() {
        let f = make_field(-4).unwrap();
        let l = ZLattice2::from_generators(-4, &[f.elt(2, 0), f.elt(0, 2)]);
        assert_eq!(
            reduce_mod_sublattice(&f.elt(3, 1), &l).unwrap(),
            f.elt(1, 1)
        );
        assert!(reduce_mod_sublattice(&f.elt(4, -6), &l).unwrap().is_zero());
        let r = reduce_mod_sublattice(&f.elt(-7, 5), &l).unwrap();
        assert_eq!(reduce_mod_sublattice(&r, &l).unwrap(), r);
    }

    #[test]
    fn imaginary_generators() {
        let f = make_field(-4).unwrap();
        assert_eq!(f.imaginary_generator(), f.omega());
        let f = make_field(-3).unwrap();
        let nu = f.imaginary_generator();
        assert_eq!(nu, f.elt(-1, 2));
        assert_eq!(nu.trace(), 0.into());
        assert!((nu.embed() - Complex64::new(0.0, 3f64.sqrt())).norm() < 1e-14);
        let f = make_field(-8).unwrap();
        assert_eq!(f.imaginary_generator(), f.omega());
        for d in [-3, -4, -7, -8, -11, -15, -24] {
            let f = make_field(d).unwrap();
            let nu = f.imaginary_generator();
            assert_eq!(nu.trace(), 0.into());
            assert!((nu.embed().im - f.t_k() / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn pi_lattice_is_preimage_of_trace_group() {
        for d in [-3, -4, -7, -8, -24, -40] {
            let f = make_field(d).unwrap();
            let pi = f.pi_lattice();
            assert_eq!(pi.index(), BigInt::from(f.pi_index()));
            let tr_step: BigInt = if f.basis_case() == BasisCase::ZeroMod4 {
                2.into()
            } else {
                1.into()
            };
            for x in -6..6 {
                for y in -6..6 {
                    let z = f.elt(x, y);
                    let in_pi = (z.norm() % &tr_step).is_zero();
                    assert_eq!(pi.contains(&z), in_pi, "D={d} z={z}");
                }
            }
        }
    }
}
