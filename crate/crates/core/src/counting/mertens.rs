//! `Ψ_m(s)`: `Heis₃(O_K)`-orbits of primitive `(a, α, c) ∈ O_K × m × m`
//! with `tr(a c̄) = n(α)` and `0 < n(c) ≤ s`.
//!
//! For fixed `c` the orbits are parametrised by `α` modulo `c·Π` and, for
//! each admissible `α`, by the solutions `a` of the trace equation modulo
//! `Z·νc`. Both quotients are finite and enumerated directly.

use rayon::prelude::*;
use serde::Serialize;

use super::{ideal_small, norm_ball};
use crate::error::{Error, Result};
use crate::quadint::{FieldSpec, ZLattice2};
use crate::small::{self, SmallField, Z2};
use crate::zeta;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MertensReport {
    pub disc: i64,
    /// HNF `(h11, h12, h22)` of `m`.
    pub ideal: [i64; 3],
    pub s_values: Vec<u64>,
    pub counts: Vec<u64>,
    /// Leading coefficient the counts are compared with.
    pub constant: f64,
    /// `count / (constant · s²)`
    pub ratios: Vec<f64>,
    /// `(|SU_q(O_K/m)|, |B_q(O_K/m)|)` when they entered the constant.
    pub group_orders: Option<(u64, u64)>,
}

/// Number of orbits with third entry exactly `c`.
pub(crate) fn count_for_c(sf: &SmallField, m: Option<(i64, i64, i64)>, c: Z2) -> u64 {
    let r = sf.ring;
    let (h11, _, h22) = sf.c_pi(c);
    // tr(a c̄) = x·A + y·B for a = x + yω
    let a_coef = r.trace(c);
    let b_coef = r.trace(r.mul((0, 1), r.conj(c)));
    let (g, sa, sb) = small::egcd(a_coef, b_coef);
    // Generator of the kernel of a ↦ tr(a c̄), and νc as a multiple of it.
    let kappa = (b_coef / g, -a_coef / g);
    let nuc = r.mul(sf.nu, c);
    let j = if kappa.0 != 0 {
        nuc.0 / kappa.0
    } else {
        nuc.1 / kappa.1
    };
    debug_assert_eq!(small::scale(j, kappa), nuc);
    let classes = j.unsigned_abs();

    let mut total = 0u64;
    for ay in 0..h22 {
        for ax in 0..h11 {
            let alpha = (ax, ay);
            if let Some(m) = m {
                if !small::contains(alpha, m) {
                    continue;
                }
            }
            let n = r.norm(alpha);
            if n % g != 0 {
                continue;
            }
            let ideal = small::ideal_hnf(r, &[alpha, c]);
            if ideal == (1, 0, 1) {
                total += classes;
                continue;
            }
            let a_star = small::reduce(small::scale(n / g, (sa, sb)), ideal);
            for i in 0..classes as i64 {
                let a = small::reduce(small::add(a_star, small::scale(i, kappa)), ideal);
                if small::generates_with(r, a, ideal) {
                    total += 1;
                }
            }
        }
    }
    total
}

/// Per-`c` orbit counts for every admissible `c` with `0 < n(c) ≤ s`, as
/// `(c, n(c), count)`, in a deterministic order.
pub fn mertens_per_c(f: &FieldSpec, m: &ZLattice2, s: u64) -> Result<Vec<((i64, i64), u64, u64)>> {
    let mh = ideal_small(f, m)?;
    let s_i = i64::try_from(s).map_err(|_| Error::GuardExceeded("s exceeds i64".into()))?;
    if s_i > 1 << 24 {
        return Err(Error::GuardExceeded(format!(
            "s = {s} is beyond the enumeration guard"
        )));
    }
    let sf = SmallField::new(f);
    let mopt = (mh != (1, 0, 1)).then_some(mh);
    let cs: Vec<Z2> = norm_ball(f.disc(), s_i)
        .into_iter()
        .filter(|&c| mopt.map_or(true, |m| small::contains(c, m)))
        .collect();
    Ok(cs
        .par_iter()
        .map(|&c| (c, sf.ring.norm(c) as u64, count_for_c(&sf, mopt, c)))
        .collect())
}

pub fn mertens_count(f: &FieldSpec, m: &ZLattice2, s: u64) -> Result<u64> {
    if s == 0 {
        return Err(Error::InvalidInput("s must be at least 1".into()));
    }
    Ok(mertens_per_c(f, m, s)?.iter().map(|e| e.2).sum())
}

/// `Ψ_m(s)` for every `s` in the list, from a single enumeration up to the largest.
pub fn mertens_counts(f: &FieldSpec, m: &ZLattice2, s_values: &[u64]) -> Result<MertensReport> {
    if s_values.is_empty() || s_values.contains(&0) {
        return Err(Error::InvalidInput("s values must be positive".into()));
    }
    let smax = *s_values.iter().max().expect("nonempty");
    let per_c = mertens_per_c(f, m, smax)?;
    let counts: Vec<u64> = s_values
        .iter()
        .map(|&s| per_c.iter().filter(|e| e.1 <= s).map(|e| e.2).sum())
        .collect();
    let mh = ideal_small(f, m)?;
    let base = zeta::constants(f).mertens_c;
    let (constant, group_orders) = if mh == (1, 0, 1) {
        (base, None)
    } else {
        match super::finite_group_orders(f, m) {
            Ok(o) => (base * o.b_q as f64 / o.su_q as f64, Some((o.su_q, o.b_q))),
            Err(_) => (base, None),
        }
    };
    let ratios = s_values
        .iter()
        .zip(&counts)
        .map(|(&s, &n)| n as f64 / (constant * (s as f64).powi(2)))
        .collect();
    Ok(MertensReport {
        disc: f.disc(),
        ideal: [mh.0, mh.1, mh.2],
        s_values: s_values.to_vec(),
        counts,
        constant,
        ratios,
        group_orders,
    })
}
