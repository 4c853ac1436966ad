//! Orders of `SU_q(O_K/m)` and its upper triangular subgroup `B_q(O_K/m)`.

use std::collections::HashSet;

use num_integer::Integer;
use serde::Serialize;

use super::ideal_small;
use crate::error::{Error, Result};
use crate::heis::HeisIntElem;
use crate::picard::{diag_unit, heis_to_matrix, sigma, SUqMat};
use crate::quadint::{FieldSpec, ZLattice2};
use crate::small::{self, Ring, Z2};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupOrders {
    pub ring_size: u64,
    pub su_q: u64,
    pub b_q: u64,
    /// How `su_q` was obtained: `"trivial"`, `"brute-force"` or `"closure"`.
    pub su_q_method: &'static str,
    /// A closure order is only a lower bound when reduction of the
    /// generators is not surjective.
    pub su_q_lower_bound: bool,
}

const B_GUARD: u64 = 20_000_000;
const CLOSURE_GUARD: usize = 3_000_000;

type Mat = [[Z2; 3]; 3];

struct Quotient {
    ring: Ring,
    m: (i64, i64, i64),
}

impl Quotient {
    fn red(&self, z: Z2) -> Z2 {
        small::reduce(z, self.m)
    }

    fn elements(&self) -> Vec<Z2> {
        let (h11, _, h22) = self.m;
        let mut v = Vec::with_capacity((h11 * h22) as usize);
        for y in 0..h22 {
            for x in 0..h11 {
                v.push(self.red((x, y)));
            }
        }
        v
    }

    fn mul(&self, a: &Mat, b: &Mat) -> Mat {
        let r = self.ring;
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let mut s = (0, 0);
                for k in 0..3 {
                    s = small::add(s, r.mul(a[i][k], b[k][j]));
                }
                self.red(s)
            })
        })
    }

    fn det(&self, a: &Mat) -> Z2 {
        let r = self.ring;
        let m3 = |x: Z2, y: Z2, z: Z2| r.mul(r.mul(x, y), z);
        let pos = [
            m3(a[0][0], a[1][1], a[2][2]),
            m3(a[0][1], a[1][2], a[2][0]),
            m3(a[0][2], a[1][0], a[2][1]),
        ];
        let neg = [
            m3(a[0][2], a[1][1], a[2][0]),
            m3(a[0][0], a[1][2], a[2][1]),
            m3(a[0][1], a[1][0], a[2][2]),
        ];
        let mut s = (0, 0);
        for p in pos {
            s = small::add(s, p);
        }
        for n in neg {
            s = small::sub(s, n);
        }
        self.red(s)
    }

    /// `M* J M ≡ J` and `det M ≡ 1`.
    fn is_member(&self, a: &Mat) -> bool {
        let r = self.ring;
        let zero = self.red((0, 0));
        let one = self.red((1, 0));
        let minus_one = self.red((-1, 0));
        // (M* J M)_{ij} = Σ_{k,l} conj(M_{ki}) J_{kl} M_{lj}
        for i in 0..3 {
            for j in 0..3 {
                let mut s = r.mul(r.conj(a[1][i]), a[1][j]);
                s = small::sub(s, r.mul(r.conj(a[0][i]), a[2][j]));
                s = small::sub(s, r.mul(r.conj(a[2][i]), a[0][j]));
                let want = match (i, j) {
                    (1, 1) => one,
                    (0, 2) | (2, 0) => minus_one,
                    _ => zero,
                };
                if self.red(s) != want {
                    return false;
                }
            }
        }
        self.det(a) == one
    }

    fn reduce_mat(&self, m: &SUqMat) -> Mat {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let z = &m.entries()[i][j];
                let h = self.m;
                // Reduce the BigInt coordinates modulo the box period first.
                let period = num_bigint::BigInt::from(h.0 * h.2);
                let x = i64::try_from(z.x().mod_floor(&period)).expect("reduced");
                let y = i64::try_from(z.y().mod_floor(&period)).expect("reduced");
                self.red((x, y))
            })
        })
    }
}

/// Heisenberg translations along a basis of `Π`, the vertical translation,
/// the diagonal units and `σ`.
fn standard_generators(f: &FieldSpec) -> Result<Vec<SUqMat>> {
    let mut gens = Vec::new();
    for b in f.pi_lattice().basis() {
        gens.push(heis_to_matrix(&HeisIntElem::with_lift(f, b)?));
    }
    gens.push(heis_to_matrix(&HeisIntElem::new(
        f.imaginary_generator(),
        f.zero(),
    )?));
    for u in f.units() {
        gens.push(diag_unit(f, u)?);
    }
    gens.push(sigma(f));
    Ok(gens)
}

fn brute_force_order(q: &Quotient, els: &[Z2]) -> u64 {
    let k = els.len() as u64;
    let mut n = 0u64;
    for code in 0..k.pow(9) {
        let mat: Mat = std::array::from_fn(|i| {
            std::array::from_fn(|j| els[((code / k.pow((3 * i + j) as u32)) % k) as usize])
        });
        if q.is_member(&mat) {
            n += 1;
        }
    }
    n
}

fn closure_order(f: &FieldSpec, q: &Quotient) -> Result<u64> {
    let gens: Vec<Mat> = standard_generators(f)?
        .iter()
        .map(|g| q.reduce_mat(g))
        .collect();
    let zero = q.red((0, 0));
    let id: Mat =
        std::array::from_fn(|i| std::array::from_fn(|j| if i == j { q.red((1, 0)) } else { zero }));
    let mut seen: HashSet<Mat> = HashSet::from([id]);
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for x in &frontier {
            for g in &gens {
                let y = q.mul(x, g);
                if seen.insert(y) {
                    next.push(y);
                }
            }
        }
        if seen.len() > CLOSURE_GUARD {
            return Err(Error::GuardExceeded("SU_q closure exceeds guard".into()));
        }
        frontier = next;
    }
    Ok(seen.len() as u64)
}

/// Order of the subgroup of `SU_q(O_K/m)` generated by the reductions of
/// the standard generators.
pub fn su_q_closure_order(f: &FieldSpec, m: &ZLattice2) -> Result<u64> {
    let mh = ideal_small(f, m)?;
    closure_order(
        f,
        &Quotient {
            ring: Ring::new(f.disc()),
            m: mh,
        },
    )
}

/// `(|SU_q(O_K/m)|, |B_q(O_K/m)|)`. Requires `m̄ = m`; small rings only.
pub fn finite_group_orders(f: &FieldSpec, m: &ZLattice2) -> Result<GroupOrders> {
    let mh = ideal_small(f, m)?;
    let ring = Ring::new(f.disc());
    let size = (mh.0 * mh.2) as u64;
    if size == 1 {
        return Ok(GroupOrders {
            ring_size: 1,
            su_q: 1,
            b_q: 1,
            su_q_method: "trivial",
            su_q_lower_bound: false,
        });
    }
    for b in [(mh.0, 0), (mh.1, mh.2)] {
        if !small::contains(ring.conj(b), mh) {
            return Err(Error::InvalidInput(
                "the ideal is not stable under conjugation".into(),
            ));
        }
    }
    if size.saturating_pow(6) > B_GUARD {
        return Err(Error::GuardExceeded(format!(
            "|O_K/m| = {size} is too large for direct enumeration"
        )));
    }
    let q = Quotient { ring, m: mh };
    let els = q.elements();
    let zero = q.red((0, 0));

    let mut b_q = 0u64;
    for &a in &els {
        for &d in &els {
            for &e3 in &els {
                for &b in &els {
                    for &c in &els {
                        for &e in &els {
                            let mat = [[a, b, c], [zero, d, e], [zero, zero, e3]];
                            if q.is_member(&mat) {
                                b_q += 1;
                            }
                        }
                    }
                }
            }
        }
    }

    let (su_q, method, lower) = if size == 2 {
        (brute_force_order(&q, &els), "brute-force", false)
    } else {
        (closure_order(f, &q)?, "closure", true)
    };

    Ok(GroupOrders {
        ring_size: size,
        su_q,
        b_q,
        su_q_method: method,
        su_q_lower_bound: lower,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadint::make_field;

    #[test]
    fn trivial_ideal() {
        let f = make_field(-4).unwrap();
        let o = finite_group_orders(&f, &ZLattice2::full(-4)).unwrap();
        assert_eq!((o.su_q, o.b_q), (1, 1));
    }

    #[test]
    fn ring_of_size_two() {
        let f = make_field(-4).unwrap();
        // (1 + i)
        let m = ZLattice2::from_hnf_checked(-4, 2, 1, 1).unwrap();
        let o = finite_group_orders(&f, &m).unwrap();
        assert_eq!(o.ring_size, 2);
        assert_eq!(o.su_q_method, "brute-force");
        assert_eq!(o.su_q % o.b_q, 0);
        assert_eq!(su_q_closure_order(&f, &m).unwrap(), o.su_q);
    }
}
