//! The Picard modular group `SU_q(O_K)`: exact matrices, generators,
//! canonical forms modulo the cusp stabiliser `Γ_∞`, orbit enumeration and
//! spectral classification.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heis::{shear_reduce, HeisIntElem, HeisPt};
use crate::quadint::{reduce_mod_sublattice, FieldSpec, QuadInt};

pub type Column = [QuadInt; 3];

/// `q(z) = −z₀z̄₂ − z₂z̄₀ + |z₁|²`
pub fn qform(v: &Column) -> BigInt {
    v[1].norm() - (&v[0] * &v[2].conj()).trace()
}

/// Hermitian polarisation `B(x, y) = y* J x` of `q` (so `B(x, x) = q(x)`).
pub fn hermitian_pairing(x: &Column, y: &Column) -> QuadInt {
    let t0 = &x[0] * &y[2].conj();
    let t1 = &x[1] * &y[1].conj();
    let t2 = &x[2] * &y[0].conj();
    t1 - t0 - t2
}

/// A 3×3 matrix over `O_K` preserving `q`, with determinant 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SUqMat {
    m: [[QuadInt; 3]; 3],
}

fn mat_mul(a: &[[QuadInt; 3]; 3], b: &[[QuadInt; 3]; 3]) -> [[QuadInt; 3]; 3] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut s = &a[i][0] * &b[0][j];
            for k in 1..3 {
                s = s + &a[i][k] * &b[k][j];
            }
            s
        })
    })
}

fn conj_transpose(a: &[[QuadInt; 3]; 3]) -> [[QuadInt; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i].conj()))
}

fn j_matrix(disc: i64) -> [[QuadInt; 3]; 3] {
    let e = |v: i64| QuadInt::from_i64(disc, v, 0);
    [[e(0), e(0), e(-1)], [e(0), e(1), e(0)], [e(-1), e(0), e(0)]]
}

fn det3(m: &[[QuadInt; 3]; 3]) -> QuadInt {
    let minor = |a: &QuadInt, b: &QuadInt, c: &QuadInt, d: &QuadInt| a * b - c * d;
    let t0 = &m[0][0] * &minor(&m[1][1], &m[2][2], &m[1][2], &m[2][1]);
    let t1 = &m[0][1] * &minor(&m[1][0], &m[2][2], &m[1][2], &m[2][0]);
    let t2 = &m[0][2] * &minor(&m[1][0], &m[2][1], &m[1][1], &m[2][0]);
    t0 - t1 + t2
}

fn same_field(m: &[[QuadInt; 3]; 3]) -> Option<i64> {
    let d = m[0][0].disc();
    m.iter().flatten().all(|z| z.disc() == d).then_some(d)
}

/// Exact test of `M*JM = J` and `det M = 1`.
pub fn check_membership(m: &[[QuadInt; 3]; 3]) -> bool {
    let Some(disc) = same_field(m) else {
        return false;
    };
    let j = j_matrix(disc);
    mat_mul(&mat_mul(&conj_transpose(m), &j), m) == j && det3(m) == QuadInt::from_i64(disc, 1, 0)
}

impl SUqMat {
    pub fn new(m: [[QuadInt; 3]; 3]) -> Result<Self> {
        if same_field(&m).is_none() {
            return Err(Error::FieldMismatch(m[0][0].disc(), m[2][2].disc()));
        }
        if !check_membership(&m) {
            return Err(Error::Constraint(
                "matrix does not preserve q or has determinant ≠ 1".into(),
            ));
        }
        Ok(SUqMat { m })
    }

    pub fn identity(f: &FieldSpec) -> Self {
        let e = |v| f.elt(v, 0);
        SUqMat {
            m: [[e(1), e(0), e(0)], [e(0), e(1), e(0)], [e(0), e(0), e(1)]],
        }
    }

    pub fn disc(&self) -> i64 {
        self.m[0][0].disc()
    }

    pub fn entries(&self) -> &[[QuadInt; 3]; 3] {
        &self.m
    }

    pub fn mul(&self, o: &SUqMat) -> SUqMat {
        SUqMat {
            m: mat_mul(&self.m, &o.m),
        }
    }

    /// `M⁻¹ = J M* J`
    pub fn inverse(&self) -> SUqMat {
        let j = j_matrix(self.disc());
        SUqMat {
            m: mat_mul(&mat_mul(&j, &conj_transpose(&self.m)), &j),
        }
    }

    pub fn trace(&self) -> QuadInt {
        &(&self.m[0][0] + &self.m[1][1]) + &self.m[2][2]
    }

    pub fn apply(&self, v: &Column) -> Column {
        std::array::from_fn(|i| {
            &(&(&self.m[i][0] * &v[0]) + &(&self.m[i][1] * &v[1])) + &(&self.m[i][2] * &v[2])
        })
    }

    pub fn to_complex(&self) -> [[Complex64; 3]; 3] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.m[i][j].embed()))
    }

    /// Entries as `[[x, y]; 3]; 3]` integer pairs (for JSON export).
    pub fn to_pairs(&self) -> Option<[[[i64; 2]; 3]; 3]> {
        let mut out = [[[0i64; 2]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let (x, y) = self.m[i][j].to_i64_pair()?;
                out[i][j] = [x, y];
            }
        }
        Some(out)
    }
}

/// `(w₀, w) ↦ [[1, w̄, w₀], [0, 1, w], [0, 0, 1]]`
pub fn heis_to_matrix(g: &HeisIntElem) -> SUqMat {
    let d = g.w().disc();
    let e = |v| QuadInt::from_i64(d, v, 0);
    SUqMat {
        m: [
            [e(1), g.w().conj(), g.w0().clone()],
            [e(0), e(1), g.w().clone()],
            [e(0), e(0), e(1)],
        ],
    }
}

/// `diag(a₁, ā₁², a₁)` for a unit `a₁` (so that `a₃ = 1/ā₁`, `a₂ = 1/(a₁a₃)`).
pub fn diag_unit(f: &FieldSpec, a1: &QuadInt) -> Result<SUqMat> {
    if !f.is_unit(a1) {
        return Err(Error::NotAUnit(a1.to_string()));
    }
    let z = f.zero();
    let a1b = a1.conj();
    Ok(SUqMat {
        m: [
            [a1.clone(), z.clone(), z.clone()],
            [z.clone(), &a1b * &a1b, z.clone()],
            [z.clone(), z, a1.clone()],
        ],
    })
}

/// `σ: (z₀, z₁, z₂) ↦ (z₂, −z₁, z₀)`
pub fn sigma(f: &FieldSpec) -> SUqMat {
    let e = |v| f.elt(v, 0);
    SUqMat {
        m: [[e(0), e(0), e(1)], [e(0), e(-1), e(0)], [e(1), e(0), e(0)]],
    }
}

/// Heisenberg translations `(1, 1+i)`, `(1, 1−i)`, `(i, 0)`, the involution
/// `σ` and `diag(i, −1, i)`, followed by their inverses.
pub fn default_generators(f: &FieldSpec) -> Result<Vec<SUqMat>> {
    if f.disc() != -4 {
        return Err(Error::Unsupported(format!(
            "no built-in generators for D = {}; supply a generator file",
            f.disc()
        )));
    }
    let h = |w0: (i64, i64), w: (i64, i64)| -> Result<SUqMat> {
        Ok(heis_to_matrix(&HeisIntElem::new(
            f.elt(w0.0, w0.1),
            f.elt(w.0, w.1),
        )?))
    };
    let base = vec![
        h((1, 0), (1, 1))?,
        h((1, 0), (1, -1))?,
        h((0, 1), (0, 0))?,
        sigma(f),
        diag_unit(f, &f.elt(0, 1))?,
    ];
    let inv: Vec<SUqMat> = base.iter().map(SUqMat::inverse).collect();
    Ok(base.into_iter().chain(inv).collect())
}

#[derive(Debug, Serialize, Deserialize)]
struct GeneratorFile {
    disc: i64,
    generators: Vec<[[[i64; 2]; 3]; 3]>,
}

/// Reads `{"disc": D, "generators": [[[[x, y] ×3] ×3], …]}`; every matrix is
/// checked for membership.
pub fn load_generators(json: &str) -> Result<(i64, Vec<SUqMat>)> {
    let file: GeneratorFile = serde_json::from_str(json)
        .map_err(|e| Error::InvalidInput(format!("generator file: {e}")))?;
    let gens = file
        .generators
        .iter()
        .enumerate()
        .map(|(k, m)| {
            let entries = std::array::from_fn(|i| {
                std::array::from_fn(|j| QuadInt::from_i64(file.disc, m[i][j][0], m[i][j][1]))
            });
            SUqMat::new(entries).map_err(|e| Error::InvalidInput(format!("generator {k}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((file.disc, gens))
}

pub fn generators_to_json(disc: i64, gens: &[SUqMat]) -> Result<String> {
    let generators = gens
        .iter()
        .map(|g| {
            g.to_pairs()
                .ok_or_else(|| Error::GuardExceeded("matrix entry exceeds i64".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    serde_json::to_string_pretty(&GeneratorFile { disc, generators })
        .map_err(|e| Error::InvalidInput(e.to_string()))
}

// ---------------------------------------------------------------------------
// Canonical forms

/// Scalars acting trivially on the projective plane inside `SU_q`: the cube
/// roots of unity in `O_K`.
fn cube_roots(f: &FieldSpec) -> Vec<QuadInt> {
    if f.disc() == -3 {
        vec![f.one(), f.elt(-1, 1), f.elt(0, -1)]
    } else {
        vec![f.one()]
    }
}

fn scaled_diag(mu: &QuadInt, a1: &QuadInt, v: &Column) -> Column {
    let a1b = a1.conj();
    [
        &(mu * a1) * &v[0],
        &(&(mu * &a1b) * &a1b) * &v[1],
        &(mu * a1) * &v[2],
    ]
}

fn minimise_over(f: &FieldSpec, scalars: &[QuadInt], v: &Column) -> Result<Column> {
    let mut best: Option<Column> = None;
    for mu in scalars {
        for a1 in f.units() {
            let w = scaled_diag(mu, a1, v);
            let cand = if w[2].is_zero() {
                reduce_at_infinity(f, &w)?
            } else {
                shear_reduce(f, [&w[0], &w[1], &w[2]])?.1
            };
            if best.as_ref().map_or(true, |b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    Ok(best.expect("unit group is nonempty"))
}

/// For `z₂ = 0` the unipotent part acts by `z₀ ↦ z₀ + w̄z₁`, `w ∈ Π`.
fn reduce_at_infinity(f: &FieldSpec, v: &Column) -> Result<Column> {
    if v[1].is_zero() {
        return Ok(v.clone());
    }
    let lattice = f.pi_lattice().scaled(&v[1]);
    Ok([
        reduce_mod_sublattice(&v[0], &lattice)?,
        v[1].clone(),
        v[2].clone(),
    ])
}

/// Representative of the `Γ_∞`-orbit of a column with nonzero third entry:
/// shear reduction, minimised over diagonal units (and, for `D = −3`, over
/// the scalar cube roots of unity).
pub fn canonical_column(f: &FieldSpec, v: &Column) -> Result<Column> {
    if v[2].is_zero() {
        return Err(Error::ZeroThirdCoordinate("canonical_column"));
    }
    minimise_over(f, &cube_roots(f), v)
}

/// Like [`canonical_column`] but also quotienting by every unit scalar, so
/// that the result only depends on the projective point. Accepts `z₂ = 0`.
pub fn canonical_projective(f: &FieldSpec, v: &Column) -> Result<Column> {
    if v.iter().all(QuadInt::is_zero) {
        return Err(Error::InvalidInput("zero vector".into()));
    }
    minimise_over(f, f.units(), v)
}

// ---------------------------------------------------------------------------
// Orbit enumeration by generator words

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keying {
    /// Modulo `Γ_∞` (and the scalar kernel of `SU_q → PSU_q`).
    Column,
    /// Modulo `Γ_∞` and every unit scalar: classes of projective points.
    Projective,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitEntry {
    pub norm_c: BigInt,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitSet {
    /// Canonical vectors with `0 < n(z₂) ≤ bound`.
    pub entries: BTreeMap<Column, OrbitEntry>,
    /// The last three levels added nothing under the bound (or the orbit was exhausted).
    pub saturated: bool,
    /// The raw-vector guard was hit; the set is partial.
    pub truncated: bool,
    pub depth_reached: usize,
    pub raw_vectors: usize,
}

impl OrbitSet {
    pub fn count_up_to(&self, bound: &BigInt) -> usize {
        self.entries.values().filter(|e| &e.norm_c <= bound).count()
    }
}

fn key_of(f: &FieldSpec, keying: Keying, v: &Column) -> Result<Column> {
    match keying {
        Keying::Column => canonical_column(f, v),
        Keying::Projective => canonical_projective(f, v),
    }
}

/// Breadth-first enumeration of `g·seed` over words in `gens`, collecting
/// canonical forms with `0 < n(z₂) ≤ norm_bound`. Raw vectors are
/// deduplicated exactly; at most `guard` of them are stored.
pub fn orbit_bfs(
    f: &FieldSpec,
    seed: &Column,
    gens: &[SUqMat],
    max_depth: usize,
    norm_bound: &BigInt,
    keying: Keying,
    guard: usize,
) -> Result<OrbitSet> {
    let mut seen: HashSet<Column> = HashSet::new();
    seen.insert(seed.clone());
    let mut frontier = vec![seed.clone()];
    let mut entries = BTreeMap::new();
    let admit =
        |v: &Column, depth: usize, entries: &mut BTreeMap<Column, OrbitEntry>| -> Result<bool> {
            if v[2].is_zero() {
                return Ok(false);
            }
            let n = v[2].norm();
            if &n > norm_bound {
                return Ok(false);
            }
            let key = key_of(f, keying, v)?;
            if entries.contains_key(&key) {
                return Ok(false);
            }
            entries.insert(key, OrbitEntry { norm_c: n, depth });
            Ok(true)
        };
    admit(seed, 0, &mut entries)?;
    let mut empty_streak = 0usize;
    let mut truncated = false;
    let mut depth = 0usize;
    while depth < max_depth && !frontier.is_empty() {
        depth += 1;
        let mut next: Vec<Column> = frontier
            .par_iter()
            .flat_map_iter(|v| gens.iter().map(move |g| g.apply(v)))
            .collect();
        next.sort();
        next.dedup();
        next.retain(|v| !seen.contains(v));
        let mut added = 0usize;
        for v in &next {
            if admit(v, depth, &mut entries)? {
                added += 1;
            }
        }
        if added == 0 {
            empty_streak += 1;
        } else {
            empty_streak = 0;
        }
        seen.extend(next.iter().cloned());
        frontier = next;
        if seen.len() > guard {
            truncated = true;
            break;
        }
    }
    Ok(OrbitSet {
        entries,
        saturated: !truncated && (frontier.is_empty() || empty_streak >= 3),
        truncated,
        depth_reached: depth,
        raw_vectors: seen.len(),
    })
}

// ---------------------------------------------------------------------------
// Spectral classification

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Classification {
    /// `λ` is the eigenvalue of modulus > 1.
    Loxodromic { lambda: Complex64 },
    /// Elliptic, parabolic or the identity; all eigenvalues have modulus 1.
    Other { eigenvalues: [Complex64; 3] },
}

/// `n(τ)² − 4 tr(τ³) + 18 n(τ) − 27`, positive exactly for loxodromic elements.
pub fn goldman_discriminant(m: &SUqMat) -> BigInt {
    let tau = m.trace();
    let n = tau.norm();
    let cube = &(&tau * &tau) * &tau;
    &n * &n - cube.trace() * 4 + n * 18 - 27
}

fn eval_char(tau: Complex64, x: Complex64) -> (Complex64, Complex64) {
    let p = ((x - tau) * x + tau.conj()) * x - 1.0;
    let dp = (3.0 * x - 2.0 * tau) * x + tau.conj();
    (p, dp)
}

/// Roots of `x³ − τx² + τ̄x − 1`, sorted by decreasing modulus.
pub fn eigenvalues(m: &SUqMat) -> [Complex64; 3] {
    let tau = m.trace().embed();
    // Weierstrass–Durand–Kerner iteration, then Newton polishing.
    let mut z = [
        Complex64::new(0.4, 0.9),
        Complex64::new(0.4, 0.9).powu(2),
        Complex64::new(0.4, 0.9).powu(3),
    ];
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for i in 0..3 {
            let (p, _) = eval_char(tau, z[i]);
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..3 {
                if j != i {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                continue;
            }
            let step = p / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval_char(tau, *zi);
            if dp.norm() > 1e-300 {
                let step = p / dp;
                if step.is_finite() {
                    *zi -= step;
                }
            }
        }
    }
    z.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    z
}

pub fn classify(m: &SUqMat) -> Classification {
    let ev = eigenvalues(m);
    if goldman_discriminant(m).is_positive() {
        Classification::Loxodromic { lambda: ev[0] }
    } else {
        Classification::Other { eigenvalues: ev }
    }
}

/// `ℓ = ln|λ|` for loxodromic elements.
pub fn translation_length(m: &SUqMat) -> Result<f64> {
    match classify(m) {
        Classification::Loxodromic { lambda } => Ok(lambda.norm().ln()),
        Classification::Other { eigenvalues } => Err(Error::NotLoxodromic(format!(
            "eigenvalue moduli {:.6}, {:.6}, {:.6}",
            eigenvalues[0].norm(),
            eigenvalues[1].norm(),
            eigenvalues[2].norm()
        ))),
    }
}

/// True when the characteristic polynomial has no root in `K`. Roots in `K`
/// of this monic polynomial with unit constant term are units of `O_K`.
pub fn is_k_irreducible(f: &FieldSpec, m: &SUqMat) -> bool {
    let tau = m.trace();
    f.units().iter().all(|u| {
        let u2 = u * u;
        let p = &(&(&u2 * u) - &(&tau * &u2)) + &(&tau.conj() * u) - f.one();
        !p.is_zero()
    })
}

/// A boundary fixed point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FixedPt {
    Finite(HeisPt),
    Infinity,
}

fn cross(a: [Complex64; 3], b: [Complex64; 3]) -> [Complex64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Kernel vector of `M − μI` by the largest cross product of two rows.
pub(crate) fn eigenvector(m: &[[Complex64; 3]; 3], mu: Complex64) -> [Complex64; 3] {
    let mut a = *m;
    for (i, row) in a.iter_mut().enumerate() {
        row[i] -= mu;
    }
    let cands = [cross(a[0], a[1]), cross(a[0], a[2]), cross(a[1], a[2])];
    let norm = |v: &[Complex64; 3]| v.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let best = cands
        .iter()
        .max_by(|x, y| norm(x).total_cmp(&norm(y)))
        .expect("three candidates");
    let s = norm(best).sqrt();
    [best[0] / s, best[1] / s, best[2] / s]
}

/// Relative `q`-isotropy residual of a complex vector.
pub fn isotropy_residual(v: &[Complex64; 3]) -> f64 {
    let q = v[1].norm_sqr() - 2.0 * (v[0] * v[2].conj()).re;
    let n: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    q.abs() / n
}

pub(crate) fn to_fixed_point(v: &[Complex64; 3]) -> FixedPt {
    let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if v[2].norm() <= 1e-14 * scale {
        FixedPt::Infinity
    } else {
        FixedPt::Finite(HeisPt::from_siegel_boundary(v[0] / v[2], v[1] / v[2]))
    }
}

/// Attracting and repelling fixed points of a loxodromic element, with the
/// isotropic eigenvectors they come from.
pub fn fixed_boundary_points(m: &SUqMat) -> Result<([FixedPt; 2], [[Complex64; 3]; 2])> {
    let lambda = match classify(m) {
        Classification::Loxodromic { lambda } => lambda,
        Classification::Other { .. } => {
            return Err(Error::NotLoxodromic("no isotropic eigenline pair".into()))
        }
    };
    let mc = m.to_complex();
    let va = eigenvector(&mc, lambda);
    let vr = eigenvector(&mc, 1.0 / lambda.conj());
    Ok(([to_fixed_point(&va), to_fixed_point(&vr)], [va, vr]))
}

/// First word (by length, then lexicographic generator index) of length ≤
/// `max_len` that is loxodromic and K-irreducible.
pub fn find_loxodromic_witness(
    f: &FieldSpec,
    gens: &[SUqMat],
    max_len: usize,
) -> Option<(Vec<usize>, SUqMat)> {
    let mut level: Vec<(Vec<usize>, SUqMat)> = vec![(vec![], SUqMat::identity(f))];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(level.len() * gens.len());
        for (w, m) in &level {
            for (i, g) in gens.iter().enumerate() {
                let mut w2 = w.clone();
                w2.push(i);
                let m2 = m.mul(g);
                if goldman_discriminant(&m2).is_positive() && is_k_irreducible(f, &m2) {
                    return Some((w2, m2));
                }
                next.push((w2, m2));
            }
        }
        level = next;
    }
    None
}
