//! Independent oracles for the integration suites.
//!
//! Nothing here calls the closed-form integral routines, the Slater–Condon
//! code or the partial-trace machinery of the library; values are produced
//! by brute-force quadrature, first-quantized matrix algebra and explicit
//! Jordan–Wigner operators instead.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector, Vector3};

use entcorr::detci::{CiWavefunction, Determinant};
use entcorr::integrals::EriTensor;

// ---------------------------------------------------------------------------
// Gauss–Legendre quadrature
// ---------------------------------------------------------------------------

/// Nodes and weights on [-1, 1] by Newton iteration on the Legendre
/// polynomial.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// P_n(x) and P_n'(x) via the recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let pk = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = pk;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn gl_on(a: f64, b: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        xs.iter().map(|x| mid + half * x).collect(),
        ws.iter().map(|w| w * half).collect(),
    )
}

// ---------------------------------------------------------------------------
// Quadrature oracles for s-Gaussian integrals
// ---------------------------------------------------------------------------

/// A contracted s function for quadrature purposes: primitives carry final
/// coefficients, so the function value is Σ c_k exp(−α_k |r−R|²).
#[derive(Clone)]
pub struct QuadFn {
    pub center: Vector3<f64>,
    pub prims: Vec<(f64, f64)>, // (exponent, coefficient)
}

impl QuadFn {
    pub fn prim(alpha: f64, center: Vector3<f64>) -> Self {
        Self {
            center,
            prims: vec![(alpha, 1.0)],
        }
    }

    pub fn value(&self, r: &Vector3<f64>) -> f64 {
        let d2 = (r - self.center).norm_squared();
        self.prims.iter().map(|&(a, c)| c * (-a * d2).exp()).sum()
    }

    pub fn gradient(&self, r: &Vector3<f64>) -> Vector3<f64> {
        let dr = r - self.center;
        let d2 = dr.norm_squared();
        let scale: f64 = self
            .prims
            .iter()
            .map(|&(a, c)| -2.0 * a * c * (-a * d2).exp())
            .sum();
        dr * scale
    }

    fn widest(&self) -> f64 {
        self.prims
            .iter()
            .map(|&(a, _)| a)
            .fold(f64::INFINITY, f64::min)
    }
}

fn assert_on_axis(f: &QuadFn) {
    assert!(
        f.center.x.abs() < 1e-12 && f.center.y.abs() < 1e-12,
        "quadrature oracles require centers on the z axis"
    );
}

/// Iterate primitive products of two contracted functions: yields the
/// combined coefficient and the two primitives.
fn prim_pairs<'a>(
    f: &'a QuadFn,
    g: &'a QuadFn,
) -> impl Iterator<Item = (f64, (f64, Vector3<f64>), (f64, Vector3<f64>))> + 'a {
    f.prims.iter().flat_map(move |&(a, ca)| {
        g.prims
            .iter()
            .map(move |&(b, cb)| (ca * cb, (a, f.center), (b, g.center)))
    })
}

/// ∫ F(ρ, z)·2πρ dρ dz over one primitive product, with an integrand that
/// already contains both Gaussian factors. Axially symmetric systems only.
fn cylinder_quad(
    a: f64,
    za: f64,
    b: f64,
    zb: f64,
    integrand: impl Fn(&Vector3<f64>) -> f64,
) -> f64 {
    let p = a + b;
    let z_center = (a * za + b * zb) / p;
    let extent = 9.0 / p.sqrt();
    let (zs, wz) = gl_on(z_center - extent, z_center + extent, 64);
    let (rhos, wrho) = gl_on(0.0, extent, 64);
    let mut total = 0.0;
    for (iz, &z) in zs.iter().enumerate() {
        for (ir, &rho) in rhos.iter().enumerate() {
            let point = Vector3::new(rho, 0.0, z);
            total += wz[iz] * wrho[ir] * 2.0 * std::f64::consts::PI * rho * integrand(&point);
        }
    }
    total
}

/// ∫ f g d³r, one tight cylindrical grid per primitive product.
pub fn overlap_quad(f: &QuadFn, g: &QuadFn) -> f64 {
    assert_on_axis(f);
    assert_on_axis(g);
    let mut total = 0.0;
    for (coef, (a, ra), (b, rb)) in prim_pairs(f, g) {
        total += coef
            * cylinder_quad(a, ra.z, b, rb.z, |r| {
                (-a * (r - ra).norm_squared()).exp() * (-b * (r - rb).norm_squared()).exp()
            });
    }
    total
}

/// Kinetic energy as (1/2) ∫ ∇f·∇g d³r.
pub fn kinetic_quad(f: &QuadFn, g: &QuadFn) -> f64 {
    assert_on_axis(f);
    assert_on_axis(g);
    let mut total = 0.0;
    for (coef, (a, ra), (b, rb)) in prim_pairs(f, g) {
        total += coef
            * cylinder_quad(a, ra.z, b, rb.z, |r| {
                let da = r - ra;
                let db = r - rb;
                let ga = da * (-2.0 * a * (-a * da.norm_squared()).exp());
                let gb = db * (-2.0 * b * (-b * db.norm_squared()).exp());
                0.5 * ga.dot(&gb)
            });
    }
    total
}

/// Axially symmetric volume integral ∫ G d³r in spherical coordinates
/// around an on-axis origin; the r² Jacobian tames a 1/r singularity there.
fn axial_spherical_quad(
    z_origin: f64,
    r_max: f64,
    nr: usize,
    ntheta: usize,
    g: impl Fn(&Vector3<f64>, f64) -> f64,
) -> f64 {
    let (rs, wr) = gl_on(0.0, r_max, nr);
    let (cts, wt) = gl_on(-1.0, 1.0, ntheta);
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut total = 0.0;
    for (ir, &r) in rs.iter().enumerate() {
        let mut ring = 0.0;
        for (it, &ct) in cts.iter().enumerate() {
            let st = (1.0 - ct * ct).sqrt();
            let point = Vector3::new(r * st, 0.0, z_origin + r * ct);
            ring += wt[it] * g(&point, r);
        }
        total += wr[ir] * r * r * two_pi * ring;
    }
    total
}

/// ∫ f g / |r−C| d³r with the nucleus C on the z axis.
pub fn nuclear_attraction_quad(f: &QuadFn, g: &QuadFn, c: &Vector3<f64>) -> f64 {
    assert_on_axis(f);
    assert_on_axis(g);
    assert!(c.x.abs() < 1e-12 && c.y.abs() < 1e-12);
    let mut total = 0.0;
    for (coef, (a, ra), (b, rb)) in prim_pairs(f, g) {
        let p = a + b;
        let z_center = (a * ra.z + b * rb.z) / p;
        let r_max = (z_center - c.z).abs() + 9.0 / p.sqrt();
        total += coef
            * axial_spherical_quad(c.z, r_max, 128, 96, |point, r| {
                (-a * (point - ra).norm_squared()).exp()
                    * (-b * (point - rb).norm_squared()).exp()
                    / r.max(1e-300)
            });
    }
    total
}

/// Electrostatic potential at distance `s` from a unit-amplitude spherical
/// Gaussian exp(−q u²): inner radial quadrature plus the elementary
/// closed-form tail — no error function anywhere.
fn gaussian_potential(q: f64, s: f64) -> f64 {
    let four_pi = 4.0 * std::f64::consts::PI;
    let cutoff = 12.0 / q.sqrt();
    let inner_top = s.min(cutoff);
    let mut inner = 0.0;
    if inner_top > 0.0 {
        let (us, ws) = gl_on(0.0, inner_top, 64);
        for (i, &u) in us.iter().enumerate() {
            inner += ws[i] * (-q * u * u).exp() * u * u;
        }
    }
    // ∫_s^∞ e^{−qu²} u du = e^{−q s²}/(2q), negligible past the cutoff
    let tail = if s < cutoff {
        (-q * s * s).exp() / (2.0 * q)
    } else {
        0.0
    };
    four_pi * (inner / s.max(1e-300) + tail)
}

/// (fg|hk) by integrating the first product density against the
/// quadrature-built potential of the second. The ket pair is combined into
/// displaced spherical Gaussians by completing the square in the exponent
/// (exp(−a|r−C|²)·exp(−b|r−D|²) = K·exp(−(a+b)|r−P|²), elementary algebra);
/// each spherical potential then comes from 1D quadrature. All centers must
/// lie on the z axis.
pub fn eri_quad(f: &QuadFn, g: &QuadFn, h: &QuadFn, k: &QuadFn) -> f64 {
    for func in [f, g, h, k] {
        assert_on_axis(func);
    }
    let mut total = 0.0;
    for (bra_coef, (a, ra), (b, rb)) in prim_pairs(f, g) {
        let p = a + b;
        let zp = (a * ra.z + b * rb.z) / p;
        for &(qa, ca) in &h.prims {
            for &(qb, cb) in &k.prims {
                let q = qa + qb;
                let zq = (qa * h.center.z + qb * k.center.z) / q;
                let kfac = (-(qa * qb / q) * (h.center - k.center).norm_squared()).exp();
                let amp = bra_coef * ca * cb * kfac;
                if amp.abs() < 1e-280 {
                    continue;
                }
                let r_max = (zp - zq).abs() + 9.0 / p.sqrt();
                // potential depends on the radius only: one evaluation per shell
                let (rs, wr) = gl_on(0.0, r_max, 128);
                let (cts, wt) = gl_on(-1.0, 1.0, 96);
                let two_pi = 2.0 * std::f64::consts::PI;
                let mut pair_total = 0.0;
                for (ir, &r) in rs.iter().enumerate() {
                    let pot = gaussian_potential(q, r);
                    if pot == 0.0 {
                        continue;
                    }
                    let mut ring = 0.0;
                    for (it, &ct) in cts.iter().enumerate() {
                        let st = (1.0 - ct * ct).sqrt();
                        let point = Vector3::new(r * st, 0.0, zq + r * ct);
                        ring += wt[it]
                            * (-a * (point - ra).norm_squared()).exp()
                            * (-b * (point - rb).norm_squared()).exp();
                    }
                    pair_total += wr[ir] * r * r * two_pi * pot * ring;
                }
                total += amp * pair_total;
            }
        }
    }
    total
}

/// Adaptive Simpson quadrature of ∫₀¹ exp(−x t²) dt, the Boys F0 integral
/// representation.
pub fn boys_f0_quad(x: f64) -> f64 {
    fn simpson(
        f: &impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        eps: f64,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if (left + right - whole).abs() < 15.0 * eps {
            left + right + (left + right - whole) / 15.0
        } else {
            simpson(f, a, m, fa, flm, fm, eps / 2.0) + simpson(f, m, b, fm, frm, fb, eps / 2.0)
        }
    }
    let f = move |t: f64| (-x * t * t).exp();
    simpson(&f, 0.0, 1.0, f(0.0), f(0.5), f(1.0), 1e-14)
}

// ---------------------------------------------------------------------------
// First-quantized two-electron Hamiltonian
// ---------------------------------------------------------------------------

/// ⟨d1|H|d2⟩ for two-electron determinants by expanding each determinant as
/// an antisymmetrized product state in the (2m)²-dimensional two-particle
/// space and sandwiching the explicit h(1) + h(2) + 1/r₁₂ matrix.
pub struct FirstQuantized {
    m: usize,
    h_one: DMatrix<f64>, // 2m x 2m over interleaved spin orbitals
    eri: EriTensor,      // spatial, chemists'
}

impl FirstQuantized {
    pub fn new(h: &DMatrix<f64>, eri: &EriTensor) -> Self {
        let m = h.nrows();
        let mut h_one = DMatrix::zeros(2 * m, 2 * m);
        for i in 0..2 * m {
            for j in 0..2 * m {
                if i % 2 == j % 2 {
                    h_one[(i, j)] = h[(i / 2, j / 2)];
                }
            }
        }
        Self {
            m,
            h_one,
            eri: eri.clone(),
        }
    }

    /// ⟨i(1) j(2)| 1/r₁₂ |k(1) l(2)⟩ = (ik|jl) in chemists' notation.
    fn g_spin(&self, i: usize, k: usize, j: usize, l: usize) -> f64 {
        if i % 2 != k % 2 || j % 2 != l % 2 {
            return 0.0;
        }
        self.eri.get(i / 2, k / 2, j / 2, l / 2)
    }

    fn pair(&self, d: &Determinant) -> (usize, usize) {
        let occ = d.interleaved(self.m);
        assert_eq!(occ.count_ones(), 2);
        (
            occ.trailing_zeros() as usize,
            (63 - occ.leading_zeros()) as usize,
        )
    }

    pub fn element(&self, d1: &Determinant, d2: &Determinant) -> f64 {
        let (a1, b1) = self.pair(d1);
        let (a2, b2) = self.pair(d2);
        let inv = 1.0 / 2.0_f64.sqrt();
        // antisymmetrized vectors (|a b⟩ − |b a⟩)/√2 in the product space
        let bra = [(a1, b1, inv), (b1, a1, -inv)];
        let ket = [(a2, b2, inv), (b2, a2, -inv)];
        let mut total = 0.0;
        for &(i, j, bc) in &bra {
            for &(k, l, kc) in &ket {
                let mut v = 0.0;
                if j == l {
                    v += self.h_one[(i, k)];
                }
                if i == k {
                    v += self.h_one[(j, l)];
                }
                v += self.g_spin(i, k, j, l);
                total += bc * kc * v;
            }
        }
        total
    }
}

// ---------------------------------------------------------------------------
// Jordan–Wigner Fock-space operators
// ---------------------------------------------------------------------------

/// Dense creation/annihilation operators over `modes` fermionic modes,
/// big-endian occupation indexing (mode 0 is the most significant bit).
pub struct JordanWigner {
    pub modes: usize,
}

impl JordanWigner {
    pub fn new(modes: usize) -> Self {
        assert!(modes <= 14, "dense JW oracle limited to 14 modes");
        Self { modes }
    }

    pub fn dim(&self) -> usize {
        1 << self.modes
    }

    fn bit(&self, state: usize, mode: usize) -> bool {
        state >> (self.modes - 1 - mode) & 1 == 1
    }

    /// Sign (−1)^{number of occupied modes before `mode`}.
    fn string_sign(&self, state: usize, mode: usize) -> f64 {
        let mut count = 0;
        for k in 0..mode {
            if self.bit(state, k) {
                count += 1;
            }
        }
        if count % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn creation(&self, mode: usize) -> DMatrix<f64> {
        let dim = self.dim();
        let mut op = DMatrix::zeros(dim, dim);
        for state in 0..dim {
            if !self.bit(state, mode) {
                let target = state | 1 << (self.modes - 1 - mode);
                op[(target, state)] = self.string_sign(state, mode);
            }
        }
        op
    }

    pub fn annihilation(&self, mode: usize) -> DMatrix<f64> {
        self.creation(mode).transpose()
    }

    /// State vector of a CI wavefunction built by operator application:
    /// ascending creation operators acting on the vacuum.
    pub fn state_vector(&self, wf: &CiWavefunction) -> DVector<f64> {
        let dim = self.dim();
        let mut psi = DVector::zeros(dim);
        for (i, det) in wf.dets.iter().enumerate() {
            let occ = det.interleaved(wf.m);
            let mut v: DVector<f64> = DVector::zeros(dim);
            v[0] = wf.coeffs[i]; // vacuum = all modes empty = index 0
            for mode in (0..self.modes).rev() {
                if occ >> mode & 1 == 1 {
                    v = self.creation(mode) * v;
                }
            }
            psi += v;
        }
        psi
    }

    /// ⟨ψ| a†_p a_q |ψ⟩.
    pub fn one_body_expectation(&self, psi: &DVector<f64>, p: usize, q: usize) -> f64 {
        let op = self.creation(p) * self.annihilation(q);
        (psi.transpose() * op * psi)[(0, 0)]
    }
}

// ---------------------------------------------------------------------------
// Symmetry-adapted H2 minimal-basis solutions
// ---------------------------------------------------------------------------

/// RHF and FCI energies of a homonuclear two-function system from raw AO
/// integrals, via the gerade/ungerade combinations — no SCF iteration and
/// no determinant machinery.
pub struct MinimalH2Oracle {
    pub e_rhf: f64,
    pub e_fci: f64,
    /// FCI weights of the σg² and σu² configurations.
    pub c0: f64,
    pub c_double: f64,
}

pub fn minimal_h2_oracle(
    s12: f64,
    h: &DMatrix<f64>,
    eri: &EriTensor,
    core_energy: f64,
) -> MinimalH2Oracle {
    let cg = 1.0 / (2.0 * (1.0 + s12)).sqrt();
    let cu = 1.0 / (2.0 * (1.0 - s12)).sqrt();
    let coeff = |mo: usize, ao: usize| -> f64 {
        match (mo, ao) {
            (0, 0) | (0, 1) => cg,
            (1, 0) => cu,
            (1, 1) => -cu,
            _ => unreachable!(),
        }
    };
    let h_mo = |p: usize, q: usize| -> f64 {
        let mut v = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                v += coeff(p, a) * coeff(q, b) * h[(a, b)];
            }
        }
        v
    };
    let g_mo = |p: usize, q: usize, r: usize, s: usize| -> f64 {
        let mut v = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for d in 0..2 {
                        v += coeff(p, a)
                            * coeff(q, b)
                            * coeff(r, c)
                            * coeff(s, d)
                            * eri.get(a, b, c, d);
                    }
                }
            }
        }
        v
    };
    let e_rhf = 2.0 * h_mo(0, 0) + g_mo(0, 0, 0, 0) + core_energy;
    // 2x2 CI over {σg², σu²}
    let h11 = 2.0 * h_mo(0, 0) + g_mo(0, 0, 0, 0);
    let h22 = 2.0 * h_mo(1, 1) + g_mo(1, 1, 1, 1);
    let h12 = g_mo(0, 1, 0, 1);
    let mean = 0.5 * (h11 + h22);
    let diff = 0.5 * (h11 - h22);
    let lowest = mean - (diff * diff + h12 * h12).sqrt();
    // ground eigenvector of [[h11, h12], [h12, h22]] from the first row,
    // phase-fixed so the σg² weight is non-negative
    let (c0, c_double) = if h12.abs() < 1e-300 {
        (1.0, 0.0)
    } else {
        let v = (h12, lowest - h11);
        let n = (v.0 * v.0 + v.1 * v.1).sqrt();
        if v.0 >= 0.0 {
            (v.0 / n, v.1 / n)
        } else {
            (-v.0 / n, -v.1 / n)
        }
    };
    MinimalH2Oracle {
        e_rhf,
        e_fci: lowest + core_energy,
        c0,
        c_double,
    }
}
