//! `ζ(3)`, `L(3, χ_D)` and the closed-form constants of the counting and
//! volume formulas. Nothing here depends on the enumeration code.

use std::f64::consts::PI;

use serde::Serialize;

use crate::quadint::FieldSpec;

/// Kronecker symbol `(D/n)` for `n ≥ 1`.
pub fn kronecker_chi(d: i64, n: u64) -> i8 {
    assert!(n >= 1, "kronecker_chi needs n ≥ 1");
    let mut n = n;
    let mut sign = 1i8;
    while n % 2 == 0 {
        n /= 2;
        let chi2 = match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
        if chi2 == 0 {
            return 0;
        }
        sign *= chi2;
    }
    sign * jacobi(d.rem_euclid(n as i64) as u64, n)
}

/// Jacobi symbol `(a/n)` for odd `n`.
fn jacobi(mut a: u64, mut n: u64) -> i8 {
    let mut t = 1i8;
    a %= n;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

const L_SERIES_TERMS: u64 = 1_000_000;

/// `L(3, χ_D)` by direct summation; the tail beyond `N` is below `2|D|/N³`.
pub fn dirichlet_l3(d: i64) -> f64 {
    // Summed from the small end upward in blocks to limit rounding.
    let mut total = 0.0f64;
    let mut comp = 0.0f64;
    for n in 1..=L_SERIES_TERMS {
        let chi = kronecker_chi(d, n);
        if chi == 0 {
            continue;
        }
        let nf = n as f64;
        let term = chi as f64 / (nf * nf * nf);
        // Kahan summation
        let y = term - comp;
        let s = total + y;
        comp = (s - total) - y;
        total = s;
    }
    total
}

/// `ζ(3)`: direct sum below `N` plus the Euler–Maclaurin tail.
pub fn zeta3() -> f64 {
    let n = 1000u64;
    let mut s = 0.0f64;
    for k in (1..n).rev() {
        let kf = k as f64;
        s += 1.0 / (kf * kf * kf);
    }
    let nf = n as f64;
    let n2 = nf * nf;
    s + 1.0 / (2.0 * n2) + 1.0 / (2.0 * n2 * nf) + 1.0 / (4.0 * n2 * n2)
        - 1.0 / (12.0 * n2 * n2 * n2)
}

/// The constants attached to one field.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantBundle {
    pub zeta3: f64,
    pub l_chi_3: f64,
    pub zeta_k3: f64,
    /// Leading coefficient of the count of rational points of height `≤ s`.
    pub mertens_c: f64,
    /// Normalisation turning point counts into Haar mass.
    pub equidist_c: f64,
    pub cusp_volume: f64,
    pub picard_covolume: f64,
    /// Chain-count constant of the Gaussian example; only defined for `D = −4`.
    pub chain_c: Option<f64>,
}

pub fn constants(f: &FieldSpec) -> ConstantBundle {
    let d = f.disc();
    let ad = d.unsigned_abs() as f64;
    let z3 = zeta3();
    let l3 = dirichlet_l3(d);
    let zk3 = z3 * l3;
    let delta = if d == -3 { 1.0 } else { 0.0 };
    ConstantBundle {
        zeta3: z3,
        l_chi_3: l3,
        zeta_k3: zk3,
        mertens_c: z3 / (2.0 * PI * ad.sqrt() * zk3),
        equidist_c: PI * ad.powf(1.5) * zk3 / z3,
        cusp_volume: (1.0 + 2.0 * delta) * ad / (8.0 * f.unit_count() as f64),
        picard_covolume: (1.0 + 2.0 * delta) * ad.powf(2.5) * zk3 / (48.0 * PI * z3),
        chain_c: (d == -4).then(|| 16.0 * PI * z3 / (3.0 * zk3)),
    }
}
