//! Machine-integer twin of the exact ring arithmetic, for the enumeration
//! hot loops. Coordinates stay far below `i64` range for every bound the
//! counting code accepts; intermediate products go through `i128`.

use num_integer::Integer;

pub(crate) type Z2 = (i64, i64);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Ring {
    /// `ω² = t·ω − n`
    pub t: i64,
    pub n: i64,
}

impl Ring {
    pub fn new(disc: i64) -> Self {
        let (t, n) = crate::quadint::omega_params(disc);
        Ring { t, n }
    }

    #[inline]
    pub fn mul(self, a: Z2, b: Z2) -> Z2 {
        let yy = a.1 * b.1;
        (a.0 * b.0 - self.n * yy, a.0 * b.1 + a.1 * b.0 + self.t * yy)
    }

    #[inline]
    pub fn conj(self, a: Z2) -> Z2 {
        (a.0 + self.t * a.1, -a.1)
    }

    #[inline]
    pub fn norm(self, a: Z2) -> i64 {
        a.0 * a.0 + self.t * a.0 * a.1 + self.n * a.1 * a.1
    }

    #[inline]
    pub fn trace(self, a: Z2) -> i64 {
        2 * a.0 + self.t * a.1
    }
}

#[inline]
pub(crate) fn add(a: Z2, b: Z2) -> Z2 {
    (a.0 + b.0, a.1 + b.1)
}

#[inline]
pub(crate) fn sub(a: Z2, b: Z2) -> Z2 {
    (a.0 - b.0, a.1 - b.1)
}

#[inline]
pub(crate) fn scale(k: i64, a: Z2) -> Z2 {
    (k * a.0, k * a.1)
}

/// Extended gcd: `(g, s, t)` with `s·a + t·b = g ≥ 0`.
#[inline]
pub(crate) fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Column HNF `(h11, h12, h22)`; see [`crate::quadint::ZLattice2`].
pub(crate) fn hnf(vecs: &[Z2]) -> (i64, i64, i64) {
    let mut pivot: Option<Z2> = None;
    let mut horizontal = 0i64;
    for &(x, y) in vecs {
        if y == 0 {
            horizontal = horizontal.gcd(&x);
            continue;
        }
        match pivot {
            None => pivot = Some((x, y)),
            Some((px, py)) => {
                let (g, s, t) = egcd(py, y);
                let nx = (s as i128 * px as i128 + t as i128 * x as i128) as i64;
                let hx = ((y / g) as i128 * px as i128 - (py / g) as i128 * x as i128) as i64;
                horizontal = horizontal.gcd(&hx);
                pivot = Some((nx, g));
            }
        }
    }
    let h11 = horizontal.abs();
    match pivot {
        None => (h11, 0, 0),
        Some((mut px, mut py)) => {
            if py < 0 {
                px = -px;
                py = -py;
            }
            if h11 != 0 {
                px = px.rem_euclid(h11);
            }
            (h11, px, py)
        }
    }
}

/// HNF of the ideal generated by `gens`.
pub(crate) fn ideal_hnf(ring: Ring, gens: &[Z2]) -> (i64, i64, i64) {
    let mut v = Vec::with_capacity(2 * gens.len());
    for &g in gens {
        v.push(g);
        v.push(ring.mul(g, (0, 1)));
    }
    hnf(&v)
}

/// `z` reduced into the half-open HNF parallelogram of a full-rank lattice.
#[inline]
pub(crate) fn reduce(z: Z2, h: (i64, i64, i64)) -> Z2 {
    let (h11, h12, h22) = h;
    let v = z.1.div_euclid(h22);
    let det = h11 * h22;
    let u = (z.0 as i128 * h22 as i128 - z.1 as i128 * h12 as i128).div_euclid(det as i128) as i64;
    (z.0 - u * h11 - v * h12, z.1 - v * h22)
}

#[inline]
pub(crate) fn contains(z: Z2, h: (i64, i64, i64)) -> bool {
    reduce(z, h) == (0, 0)
}

/// True when `⟨extra, I⟩ = O_K`, where `I` is given by its HNF.
pub(crate) fn generates_with(ring: Ring, extra: Z2, ideal: (i64, i64, i64)) -> bool {
    let (h11, h12, h22) = ideal;
    let w = ring.mul(extra, (0, 1));
    let (a, _, c) = hnf(&[(h11, 0), (h12, h22), extra, w]);
    a == 1 && c == 1
}

/// Field data needed by the enumeration kernels.
#[derive(Debug, Clone)]
pub(crate) struct SmallField {
    pub ring: Ring,
    /// HNF of `Π`.
    pub pi: (i64, i64, i64),
    pub k_t: i64,
    pub nu: Z2,
    pub units: Vec<Z2>,
    /// `√|D|/2`
    pub half_sqrt_d: f64,
}

pub(crate) type Col = [Z2; 3];

impl SmallField {
    pub fn new(f: &crate::quadint::FieldSpec) -> Self {
        let pair = |z: &crate::quadint::QuadInt| z.to_i64_pair().expect("small field constant");
        let pi = f.pi_lattice();
        let [b1, b2] = pi.basis();
        SmallField {
            ring: Ring::new(f.disc()),
            pi: (pair(&b1).0, pair(&b2).0, pair(&b2).1),
            k_t: f.t_k_multiple(),
            nu: pair(&f.imaginary_generator()),
            units: f.units().iter().map(pair).collect(),
            half_sqrt_d: f.sqrt_abs_disc() / 2.0,
        }
    }

    #[inline]
    pub fn embed(&self, z: Z2) -> num_complex::Complex64 {
        num_complex::Complex64::new(
            z.0 as f64 + z.1 as f64 * self.ring.t as f64 / 2.0,
            z.1 as f64 * self.half_sqrt_d,
        )
    }

    /// HNF of `c·Π`.
    pub fn c_pi(&self, c: Z2) -> (i64, i64, i64) {
        let (h11, h12, h22) = self.pi;
        hnf(&[self.ring.mul(c, (h11, 0)), self.ring.mul(c, (h12, h22))])
    }

    /// The `w₀` with `tr w₀ = n` used by the canonical forms.
    #[inline]
    pub fn trace_lift(&self, n: i64) -> Z2 {
        if n % 2 == 0 {
            (n / 2, 0)
        } else {
            ((n - 1) / 2, 1)
        }
    }

    /// `q(z) = n(z₁) − tr(z₀ z̄₂)`
    #[inline]
    pub fn qform(&self, v: &Col) -> i64 {
        self.ring.norm(v[1]) - self.ring.trace(self.ring.mul(v[0], self.ring.conj(v[2])))
    }

    /// Machine-integer twin of the shear reduction in `heis`.
    pub fn shear_reduce(&self, v: &Col) -> Col {
        let r = self.ring;
        let [a, alpha, c] = *v;
        let lat = self.c_pi(c);
        let alpha_red = reduce(alpha, lat);
        let nc = r.norm(c);
        let num = r.mul(sub(alpha_red, alpha), r.conj(c));
        let w = (num.0 / nc, num.1 / nc);
        let w0 = self.trace_lift(r.norm(w));
        let a1 = add(add(a, r.mul(r.conj(w), alpha)), r.mul(w0, c));
        let y = r.mul(a1, r.conj(c)).1;
        let k = y.div_euclid(self.k_t * nc);
        let a2 = sub(a1, scale(k, r.mul(self.nu, c)));
        [a2, alpha_red, c]
    }

    fn reduce_at_infinity(&self, v: &Col) -> Col {
        if v[1] == (0, 0) {
            return *v;
        }
        [reduce(v[0], self.c_pi(v[1])), v[1], v[2]]
    }

    /// Machine-integer twin of `picard::canonical_projective`.
    pub fn canonical_projective(&self, v: &Col) -> Col {
        let r = self.ring;
        let mut best: Option<Col> = None;
        for &mu in &self.units {
            for &a1 in &self.units {
                let e = r.mul(mu, a1);
                let a1b = r.conj(a1);
                let m = r.mul(r.mul(mu, a1b), a1b);
                let w = [r.mul(e, v[0]), r.mul(m, v[1]), r.mul(e, v[2])];
                let cand = if w[2] == (0, 0) {
                    self.reduce_at_infinity(&w)
                } else {
                    self.shear_reduce(&w)
                };
                if best.map_or(true, |b| cand < b) {
                    best = Some(cand);
                }
            }
        }
        best.expect("unit group is nonempty")
    }

    /// Elements of `Π` whose embeddings lie in the closed disc `|z − centre| ≤ rad`.
    pub fn pi_points_in_disc(&self, centre: num_complex::Complex64, rad: f64, out: &mut Vec<Z2>) {
        out.clear();
        if !(rad >= 0.0) {
            return;
        }
        let s = self.half_sqrt_d;
        let t = self.ring.t as f64 / 2.0;
        let y_lo = ((centre.im - rad) / s).ceil() as i64;
        let y_hi = ((centre.im + rad) / s).floor() as i64;
        for y in y_lo..=y_hi {
            let dy = y as f64 * s - centre.im;
            let h2 = rad * rad - dy * dy;
            if h2 < 0.0 {
                continue;
            }
            let h = h2.sqrt();
            let x_lo = (centre.re - h - y as f64 * t).ceil() as i64;
            let x_hi = (centre.re + h - y as f64 * t).floor() as i64;
            for x in x_lo..=x_hi {
                if contains((x, y), self.pi) {
                    out.push((x, y));
                }
            }
        }
    }
}

/// Converts an exact column to machine integers when every coordinate fits.
pub(crate) fn col_from_big(v: &[crate::quadint::QuadInt; 3]) -> Option<Col> {
    Some([
        v[0].to_i64_pair()?,
        v[1].to_i64_pair()?,
        v[2].to_i64_pair()?,
    ])
}

pub(crate) fn col_to_big(disc: i64, v: &Col) -> [crate::quadint::QuadInt; 3] {
    std::array::from_fn(|i| crate::quadint::QuadInt::from_i64(disc, v[i].0, v[i].1))
}
