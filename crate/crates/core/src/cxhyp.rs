//! Complex hyperbolic plane in horospherical coordinates `(ζ, u, t)` on the
//! Siegel domain, and numerical checks of the measure computations used by
//! the counting constants.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::heis::HeisPt;
use crate::quadint::QuadInt;

/// Horospherical coordinates; `t = 0` is the boundary `Heis₃`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiegelPt {
    pub zeta: Complex64,
    pub u: f64,
    pub t: f64,
}

impl SiegelPt {
    pub fn new(re: f64, im: f64, u: f64, t: f64) -> Result<Self> {
        if !(t >= 0.0) {
            return Err(Error::InvalidInput(format!("height t = {t} is negative")));
        }
        Ok(SiegelPt {
            zeta: Complex64::new(re, im),
            u,
            t,
        })
    }

    /// `(w₀, w) = ((|ζ|² + t − iu)/2, ζ)`
    pub fn to_w(&self) -> (Complex64, Complex64) {
        (
            Complex64::new((self.zeta.norm_sqr() + self.t) / 2.0, -self.u / 2.0),
            self.zeta,
        )
    }

    /// Inverse of [`SiegelPt::to_w`]: `(w, −2 Im w₀, 2 Re w₀ − |w|²)`.
    pub fn from_w(w0: Complex64, w: Complex64) -> SiegelPt {
        SiegelPt {
            zeta: w,
            u: -2.0 * w0.im,
            t: 2.0 * w0.re - w.norm_sqr(),
        }
    }

    pub fn boundary(&self) -> HeisPt {
        HeisPt {
            zeta: self.zeta,
            u: self.u,
        }
    }

    /// Left translation by a Heisenberg element (preserves `t`).
    pub fn translate(&self, g: &HeisPt) -> SiegelPt {
        let b = g.mul(&self.boundary());
        SiegelPt {
            zeta: b.zeta,
            u: b.u,
            t: self.t,
        }
    }
}

impl From<HeisPt> for SiegelPt {
    fn from(p: HeisPt) -> Self {
        SiegelPt {
            zeta: p.zeta,
            u: p.u,
            t: 0.0,
        }
    }
}

/// Extended Cygan distance on the closed Siegel domain.
pub fn cygan_siegel(x: &SiegelPt, y: &SiegelPt) -> f64 {
    let dz = x.zeta - y.zeta;
    let im = x.u - y.u + 2.0 * (x.zeta * y.zeta.conj()).im;
    Complex64::new(dz.norm_sqr() + (x.t - y.t).abs(), im)
        .norm()
        .sqrt()
}

/// Busemann cocycle `β_ξ(x, y)` at a finite boundary point `ξ`.
pub fn busemann(xi: &HeisPt, x: &SiegelPt, y: &SiegelPt) -> Result<f64> {
    let xi = SiegelPt::from(*xi);
    let dx = cygan_siegel(x, &xi);
    let dy = cygan_siegel(y, &xi);
    if dx == 0.0 || dy == 0.0 || x.t <= 0.0 || y.t <= 0.0 {
        return Err(Error::Degenerate(
            "Busemann function needs interior points distinct from ξ".into(),
        ));
    }
    Ok(0.5 * ((y.t * dx.powi(4)) / (x.t * dy.powi(4))).ln())
}

/// `β_∞(x, y) = ½ ln(t_y / t_x)`
pub fn busemann_inf(x: &SiegelPt, y: &SiegelPt) -> Result<f64> {
    if x.t <= 0.0 || y.t <= 0.0 {
        return Err(Error::Degenerate(
            "Busemann function needs interior points".into(),
        ));
    }
    Ok(0.5 * (y.t / x.t).ln())
}

/// The involution `(w₀, w) ↦ (1/w₀, w/w₀)` exchanging `0` and `∞`.
pub fn involution(x: &SiegelPt) -> Result<SiegelPt> {
    let (w0, w) = x.to_w();
    if w0.norm() == 0.0 {
        return Err(Error::Degenerate(
            "involution undefined at the origin".into(),
        ));
    }
    Ok(SiegelPt::from_w(w0.inv(), w / w0))
}

/// Orthogonal projection of a boundary point onto the vertical geodesic
/// through the origin: `(ζ, u) ↦ (0, 0, (|ζ|⁴ + u²)^{1/2})`.
pub fn project_to_vertical_geodesic(p: &HeisPt) -> Result<SiegelPt> {
    let r2 = p.zeta.norm_sqr();
    let rho = (r2 * r2 + p.u * p.u).sqrt();
    if rho == 0.0 {
        return Err(Error::Degenerate(
            "the origin is an endpoint of the geodesic".into(),
        ));
    }
    Ok(SiegelPt {
        zeta: Complex64::new(0.0, 0.0),
        u: 0.0,
        t: rho,
    })
}

/// Length `ln|c| − ln 2` of the common perpendicular of `H₁` and `g·H₁`.
pub fn common_perp_length(c: &QuadInt) -> Result<f64> {
    if c.is_zero() {
        return Err(Error::Degenerate(
            "c = 0: the element fixes ∞ and the horoballs are not disjoint".into(),
        ));
    }
    let n = c.norm().to_f64().unwrap_or(f64::INFINITY);
    Ok(0.5 * n.ln() - 2f64.ln())
}

/// Distance between the horospheres `t = 1` and `t = s`.
pub fn horoball_gap(s: f64) -> Result<f64> {
    if !(s >= 1.0) {
        return Err(Error::InvalidInput(format!("horoball height {s} < 1")));
    }
    Ok(0.5 * s.ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeomConstants {
    pub n: u32,
    pub c_horo_horo: f64,
    pub c_horo_geod: f64,
    pub c_horo_cxgeod: f64,
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

pub fn geometric_constants(n: u32) -> Result<GeomConstants> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "dimension n = {n} must be ≥ 2"
        )));
    }
    let nf = f64::from(n);
    let four_n = 4f64.powi(n as i32);
    let fact = factorial(n);
    Ok(GeomConstants {
        n,
        c_horo_horo: four_n * fact / ((2.0 * nf - 1.0) * PI.powi(n as i32)),
        c_horo_geod: four_n * fact * fact / (factorial(2 * n) * (2.0 * nf - 1.0) * PI),
        c_horo_cxgeod: 4.0 * (nf - 1.0) / ((2.0 * nf - 1.0) * PI),
    })
}

// ---------------------------------------------------------------------------
// Quadrature

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
const G_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One 15-point Kronrod panel: `(estimate, |K15 − G7|)`.
fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * GK_WEIGHTS[7];
    let mut g = fc * G_WEIGHTS[3];
    for i in 0..7 {
        let x = h * GK_NODES[i];
        let s = f(c - x) + f(c + x);
        k += GK_WEIGHTS[i] * s;
        if i % 2 == 1 {
            g += G_WEIGHTS[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Globally adaptive Gauss–Kronrod integration; returns `(value, error)`.
pub(crate) fn integrate<F: FnMut(f64) -> f64>(mut f: F, breaks: &[f64], tol: f64) -> (f64, f64) {
    let mut panels: Vec<(f64, f64, f64, f64)> = breaks
        .windows(2)
        .map(|w| {
            let (v, e) = gk15(&mut f, w[0], w[1]);
            (w[0], w[1], v, e)
        })
        .collect();
    for _ in 0..5000 {
        let err: f64 = panels.iter().map(|p| p.3).sum();
        if err <= tol {
            break;
        }
        let (i, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("at least one panel");
        let (a, b, _, _) = panels.swap_remove(i);
        let m = 0.5 * (a + b);
        let (v1, e1) = gk15(&mut f, a, m);
        let (v2, e2) = gk15(&mut f, m, b);
        panels.push((a, m, v1, e1));
        panels.push((m, b, v2, e2));
    }
    // Sum small panels first.
    panels.sort_by(|x, y| x.2.abs().total_cmp(&y.2.abs()));
    (
        panels.iter().map(|p| p.2).sum(),
        panels.iter().map(|p| p.3).sum(),
    )
}

/// Result of a numerical identity check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadCheck {
    pub numeric: f64,
    pub closed: f64,
    /// Quadrature error estimate plus truncation bound.
    pub error_estimate: f64,
}

impl QuadCheck {
    pub fn residual(&self) -> f64 {
        (self.numeric - self.closed).abs()
    }
}

fn geometric_breaks(r: f64) -> Vec<f64> {
    let mut b = vec![0.0, 0.25, 0.5, 1.0];
    let mut x = 2.0;
    while x < r {
        b.push(x);
        x *= 2.0;
    }
    b.push(r);
    b
}

/// `2∫₀^∞∫₀^∞ s^{n−2} / ((s + 1)² + r²)ⁿ ds dr` against `(2n−1)π / (2^{2n−1}(n−1))`.
pub fn verify_mu_integral(n: u32) -> Result<QuadCheck> {
    if !(2..=4).contains(&n) {
        return Err(Error::Unsupported(format!("n = {n}; only 2 ≤ n ≤ 4")));
    }
    let ni = n as i32;
    let nf = f64::from(n);
    // Outside [0, R]² the integrand is below 2s^{n−2}/(s² + r²)ⁿ, whose
    // integral over the complement of the quarter disc of radius R is π/(nRⁿ).
    let tail_target = 1e-10;
    let big_r = (PI / (nf * tail_target)).powf(1.0 / nf);
    let tail = PI / (nf * big_r.powi(ni));
    let breaks = geometric_breaks(big_r);
    let (value, err) = integrate(
        |r| {
            let (inner, _) = integrate(
                |s| 2.0 * s.powi(ni - 2) / ((s + 1.0).powi(2) + r * r).powi(ni),
                &breaks,
                1e-13,
            );
            inner
        },
        &breaks,
        1e-11,
    );
    let closed = (2.0 * nf - 1.0) * PI / (2f64.powi(2 * ni - 1) * (nf - 1.0));
    let total_err = err + tail;
    if total_err > 1e-6 {
        return Err(Error::Quadrature {
            achieved: total_err,
            target: 1e-6,
        });
    }
    Ok(QuadCheck {
        numeric: value,
        closed,
        error_estimate: total_err,
    })
}

/// Exact value of the integral in [`verify_mu_integral`]:
/// `√π (n−2)! Γ(n − ½) / (2n−2)! = π / (4^{n−1}(n−1))`.
///
/// The inner `r`-integral is `√π Γ(n−½) / (2Γ(n)) · (s+1)^{1−2n}` and the
/// remaining `s`-integral is a beta integral. This differs from the
/// `(2n−1)π / (2^{2n−1}(n−1))` that [`verify_mu_integral`] checks against by
/// the factor `(2n−1)/2`.
pub fn mu_integral_exact(n: u32) -> f64 {
    PI / (4f64.powi(n as i32 - 1) * (f64::from(n) - 1.0))
}

/// Closed form `2^{1−n}√π n! / ((n−1)Γ(n + ½)) = 2^{n+1}(n!)² / ((n−1)(2n)!)`.
pub fn cprime_closed(n: u32) -> f64 {
    let f = factorial(n);
    2f64.powi(n as i32 + 1) * f * f / ((f64::from(n) - 1.0) * factorial(2 * n))
}

/// `∫_{−π/2}^{π/2} cos^{n−2}θ / (1 + cos θ)ⁿ dθ` against [`cprime_closed`].
pub fn verify_cprime(n: u32) -> Result<QuadCheck> {
    if !(2..=4).contains(&n) {
        return Err(Error::Unsupported(format!("n = {n}; only 2 ≤ n ≤ 4")));
    }
    let ni = n as i32;
    let (value, err) = integrate(
        |th| th.cos().powi(ni - 2) / (1.0 + th.cos()).powi(ni),
        &[-PI / 2.0, -PI / 4.0, 0.0, PI / 4.0, PI / 2.0],
        1e-14,
    );
    if err > 1e-9 {
        return Err(Error::Quadrature {
            achieved: err,
            target: 1e-9,
        });
    }
    Ok(QuadCheck {
        numeric: value,
        closed: cprime_closed(n),
        error_estimate: err,
    })
}

/// The map `(ξ, r, s) ↦ (ζ, u, t)` as `R⁴ → R⁴`.
pub fn map_f(p: [f64; 4]) -> [f64; 4] {
    let xi = Complex64::new(p[0], p[1]);
    let (r, s) = (p[2], p[3]);
    let w = Complex64::new(xi.norm_sqr(), -r);
    let e = (2.0 * s).exp();
    let den = Complex64::new(1.0, 0.0) + w * e;
    let zeta = xi / den;
    let u = -(w / den).im;
    let t = e * (xi.norm_sqr().powi(2) + r * r) / den.norm_sqr();
    [zeta.re, zeta.im, u, t]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JacobianReport {
    /// Absolute value of the Jacobian determinant.
    pub det: f64,
    pub du_ds: f64,
    pub dt_dr: f64,
    /// Difference between the Richardson estimate and the plain central one.
    pub richardson_gap: f64,
}

fn det4(mut m: [[f64; 4]; 4]) -> f64 {
    let mut det = 1.0;
    for col in 0..4 {
        let piv = (col..4)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .expect("nonempty range");
        if m[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        det *= m[col][col];
        for row in col + 1..4 {
            let factor = m[row][col] / m[col][col];
            for k in col..4 {
                m[row][k] -= factor * m[col][k];
            }
        }
    }
    det
}

/// Finite-difference Jacobian of [`map_f`] at `(ξ, r, s) = (0, 1, 0)`.
pub fn jacobian_of_f() -> Result<JacobianReport> {
    let x0 = [0.0, 0.0, 1.0, 0.0];
    let h = 1e-5;
    let central = |j: usize, h: f64| -> [f64; 4] {
        let (mut a, mut b) = (x0, x0);
        a[j] += h;
        b[j] -= h;
        let (fa, fb) = (map_f(a), map_f(b));
        std::array::from_fn(|i| (fa[i] - fb[i]) / (2.0 * h))
    };
    // jac[i][j] = ∂F_i/∂x_j
    let mut jac = [[0.0; 4]; 4];
    let mut gap = 0.0f64;
    for j in 0..4 {
        let d1 = central(j, h);
        let d2 = central(j, h / 2.0);
        for i in 0..4 {
            jac[i][j] = (4.0 * d2[i] - d1[i]) / 3.0;
            gap = gap.max((jac[i][j] - d2[i]).abs());
        }
    }
    let det = det4(jac).abs();
    if !det.is_finite() {
        return Err(Error::Degenerate(
            "finite differences produced a non-finite Jacobian".into(),
        ));
    }
    Ok(JacobianReport {
        det,
        du_ds: jac[2][3],
        dt_dr: jac[3][2],
        richardson_gap: gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn siegel_cygan_examples() {
        let x = SiegelPt::new(0.0, 0.0, 0.0, 1.0).unwrap();
        let o = SiegelPt::from(HeisPt::ORIGIN);
        assert!((cygan_siegel(&x, &o) - 1.0).abs() < 1e-15);
        assert_eq!(cygan_siegel(&x, &x), 0.0);
    }

    #[test]
    fn w_coordinates_round_trip() {
        let x = SiegelPt::new(0.3, -1.2, 0.7, 2.5).unwrap();
        let (w0, w) = x.to_w();
        let y = SiegelPt::from_w(w0, w);
        assert!((x.zeta - y.zeta).norm() < 1e-14);
        assert!((x.u - y.u).abs() < 1e-14 && (x.t - y.t).abs() < 1e-14);
    }

    #[test]
    fn horoball_busemann() {
        let x = SiegelPt::new(0.0, 0.0, 0.0, 1.0).unwrap();
        for s in [1.0, 2.0, 7.5] {
            let y = SiegelPt::new(0.0, 0.0, 0.0, s).unwrap();
            assert_eq!(busemann_inf(&x, &y).unwrap(), 0.5 * f64::ln(s));
            assert_eq!(horoball_gap(s).unwrap(), 0.5 * f64::ln(s));
        }
        assert_eq!(horoball_gap(1.0).unwrap(), 0.0);
        assert!(horoball_gap(0.5).is_err());
        assert_eq!(busemann_inf(&x, &x).unwrap(), 0.0);
    }

    #[test]
    fn projection_examples() {
        let p = project_to_vertical_geodesic(&HeisPt::new(1.0, 0.0, 0.0)).unwrap();
        assert_eq!((p.zeta.norm(), p.u, p.t), (0.0, 0.0, 1.0));
        let p = project_to_vertical_geodesic(&HeisPt::new(0.0, 0.0, -3.0)).unwrap();
        assert_eq!(p.t, 3.0);
        assert!(project_to_vertical_geodesic(&HeisPt::ORIGIN).is_err());
    }

    #[test]
    fn constants_n2() {
        let g = geometric_constants(2).unwrap();
        assert!((g.c_horo_horo - 32.0 / (3.0 * PI * PI)).abs() < 1e-14);
        assert!((g.c_horo_geod - 16.0 * 4.0 / (24.0 * 3.0 * PI)).abs() < 1e-14);
        assert!((g.c_horo_cxgeod - 4.0 / (3.0 * PI)).abs() < 1e-14);
        assert!(geometric_constants(1).is_err());
    }

    #[test]
    fn perpendicular_length() {
        assert_eq!(
            common_perp_length(&QuadInt::from_i64(-4, 2, 0)).unwrap(),
            0.0
        );
        assert!(common_perp_length(&QuadInt::from_i64(-4, 0, 0)).is_err());
    }

    #[test]
    fn mu_quadrature_matches_exact_value() {
        for n in 2..=4 {
            let q = verify_mu_integral(n).unwrap();
            assert!((q.numeric - mu_integral_exact(n)).abs() < 1e-9, "n = {n}");
            let factor = q.closed / q.numeric;
            assert!((factor - (2.0 * f64::from(n) - 1.0) / 2.0).abs() < 1e-8);
        }
    }

    #[test]
    fn cprime_values() {
        assert!((cprime_closed(2) - 4.0 / 3.0).abs() < 1e-15);
        assert!((cprime_closed(3) - 0.4).abs() < 1e-15);
        assert!((cprime_closed(4) - 16.0 / 105.0).abs() < 1e-15);
    }

    #[test]
    fn gk_polynomial_exact() {
        let (v, _) = integrate(|x| x.powi(5) - 3.0 * x, &[0.0, 2.0], 1e-14);
        assert!((v - (64.0 / 6.0 - 6.0)).abs() < 1e-13);
    }
}
