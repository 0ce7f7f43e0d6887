//! Determinant-basis configuration interaction in the molecular-orbital basis.
//!
//! Spin orbitals are ordered orbital-major with α before β within a spatial
//! orbital (n₁↑, n₁↓, n₂↑, n₂↓, …); a determinant is defined by applying
//! creation operators in ascending spin-orbital order. All Slater–Condon
//! phases below are relative to that convention.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::integrals::{EriTensor, IntegralSet};
use crate::scf::{eigh_sorted, ScfKind, ScfResult};

/// Occupation bitstrings over m spatial orbitals, one per spin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Determinant {
    pub alpha: u64,
    pub beta: u64,
}

impl Determinant {
    /// Aufbau determinant: the lowest `n_alpha`/`n_beta` orbitals occupied.
    pub fn reference(n_alpha: usize, n_beta: usize) -> Self {
        Self {
            alpha: low_bits(n_alpha),
            beta: low_bits(n_beta),
        }
    }

    pub fn n_alpha(&self) -> usize {
        self.alpha.count_ones() as usize
    }

    pub fn n_beta(&self) -> usize {
        self.beta.count_ones() as usize
    }

    pub fn n_electrons(&self) -> usize {
        self.n_alpha() + self.n_beta()
    }

    /// Number of spin-orbital substitutions relative to `other`.
    pub fn excitation_degree(&self, other: &Self) -> usize {
        (((self.alpha ^ other.alpha).count_ones() + (self.beta ^ other.beta).count_ones()) / 2)
            as usize
    }

    /// Occupation mask over interleaved spin orbitals (bit 2p = pα, 2p+1 = pβ).
    pub fn interleaved(&self, m: usize) -> u64 {
        let mut mask = 0u64;
        for p in 0..m {
            if self.alpha >> p & 1 == 1 {
                mask |= 1 << (2 * p);
            }
            if self.beta >> p & 1 == 1 {
                mask |= 1 << (2 * p + 1);
            }
        }
        mask
    }
}

fn low_bits(k: usize) -> u64 {
    if k == 0 {
        0
    } else {
        u64::MAX >> (64 - k)
    }
}

/// All m-bit masks with `k` bits set, ascending (Gosper's hack).
fn masks_with_popcount(m: usize, k: usize) -> Vec<u64> {
    if k > m {
        return Vec::new();
    }
    if k == 0 {
        return vec![0];
    }
    let limit = 1u64 << m;
    let mut v = low_bits(k);
    let mut out = Vec::new();
    while v < limit {
        out.push(v);
        let c = v & v.wrapping_neg();
        let r = v + c;
        v = r | (((v ^ r) >> 2) / c);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CiMode {
    Fci,
    Cisd,
}

/// Enumerate the determinant space: the reference first, then the remaining
/// determinants in ascending (alpha, beta) bitstring order. CISD keeps only
/// determinants within two substitutions of the reference.
///
/// Panics if the occupation counts do not fit in `m` orbitals or the
/// reference has different counts.
pub fn enumerate_determinants(
    m: usize,
    n_alpha: usize,
    n_beta: usize,
    mode: CiMode,
    reference: &Determinant,
) -> Vec<Determinant> {
    assert!(m <= 32, "orbital count {m} exceeds the 32-orbital limit");
    assert!(n_alpha <= m && n_beta <= m, "occupation exceeds orbital count");
    assert_eq!(
        (reference.n_alpha(), reference.n_beta()),
        (n_alpha, n_beta),
        "reference occupation does not match requested electron counts"
    );
    let mut dets = vec![*reference];
    for &a in &masks_with_popcount(m, n_alpha) {
        for &b in &masks_with_popcount(m, n_beta) {
            let d = Determinant { alpha: a, beta: b };
            if d == *reference {
                continue;
            }
            if mode == CiMode::Cisd && d.excitation_degree(reference) > 2 {
                continue;
            }
            dets.push(d);
        }
    }
    dets
}

/// One- and two-electron integrals in the molecular-orbital basis.
///
/// Restricted results carry one spatial-orbital block; unrestricted results
/// keep αα/ββ/αβ blocks separately. ERIs are in chemists' notation.
#[derive(Debug, Clone)]
pub enum MoIntegrals {
    Restricted {
        n: usize,
        h: DMatrix<f64>,
        eri: EriTensor,
    },
    Unrestricted {
        n: usize,
        h_alpha: DMatrix<f64>,
        h_beta: DMatrix<f64>,
        eri_aa: EriTensor,
        eri_bb: EriTensor,
        /// (pq|rs) with pq in the α set and rs in the β set.
        eri_ab: EriTensor,
    },
}

impl MoIntegrals {
    pub fn n(&self) -> usize {
        match self {
            Self::Restricted { n, .. } | Self::Unrestricted { n, .. } => *n,
        }
    }

    fn h_block(&self, beta: bool) -> &DMatrix<f64> {
        match self {
            Self::Restricted { h, .. } => h,
            Self::Unrestricted { h_alpha, h_beta, .. } => {
                if beta {
                    h_beta
                } else {
                    h_alpha
                }
            }
        }
    }

    /// One-electron element over interleaved spin orbitals.
    fn h_so(&self, i: usize, j: usize) -> f64 {
        if i % 2 != j % 2 {
            return 0.0;
        }
        self.h_block(i % 2 == 1)[(i / 2, j / 2)]
    }

    /// Chemists' (ij|kl) over interleaved spin orbitals.
    fn g_so(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        if i % 2 != j % 2 || k % 2 != l % 2 {
            return 0.0;
        }
        let (p, q, r, s) = (i / 2, j / 2, k / 2, l / 2);
        match self {
            Self::Restricted { eri, .. } => eri.get(p, q, r, s),
            Self::Unrestricted {
                eri_aa,
                eri_bb,
                eri_ab,
                ..
            } => match (i % 2 == 1, k % 2 == 1) {
                (false, false) => eri_aa.get(p, q, r, s),
                (true, true) => eri_bb.get(p, q, r, s),
                (false, true) => eri_ab.get(p, q, r, s),
                (true, false) => eri_ab.get(r, s, p, q),
            },
        }
    }
}

/// Quarter-transform the AO ERI tensor: first electron with `c1`, second
/// with `c2`.
fn transform_eri(eri: &EriTensor, c1: &DMatrix<f64>, c2: &DMatrix<f64>) -> EriTensor {
    let n = eri.n();
    let mut t1 = EriTensor::zeros(n);
    for p in 0..n {
        for nu in 0..n {
            for la in 0..n {
                for si in 0..n {
                    let mut v = 0.0;
                    for mu in 0..n {
                        v += c1[(mu, p)] * eri.get(mu, nu, la, si);
                    }
                    t1.set(p, nu, la, si, v);
                }
            }
        }
    }
    let mut t2 = EriTensor::zeros(n);
    for p in 0..n {
        for q in 0..n {
            for la in 0..n {
                for si in 0..n {
                    let mut v = 0.0;
                    for nu in 0..n {
                        v += c1[(nu, q)] * t1.get(p, nu, la, si);
                    }
                    t2.set(p, q, la, si, v);
                }
            }
        }
    }
    let mut t3 = EriTensor::zeros(n);
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for si in 0..n {
                    let mut v = 0.0;
                    for la in 0..n {
                        v += c2[(la, r)] * t2.get(p, q, la, si);
                    }
                    t3.set(p, q, r, si, v);
                }
            }
        }
    }
    let mut out = EriTensor::zeros(n);
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let mut v = 0.0;
                    for si in 0..n {
                        v += c2[(si, s)] * t3.get(p, q, r, si);
                    }
                    out.set(p, q, r, s, v);
                }
            }
        }
    }
    out
}

/// AO→MO four-index transform. Unconverged SCF references are rejected
/// unless `allow_unconverged` is set.
pub fn mo_transform(
    ints: &IntegralSet,
    scf: &ScfResult,
    allow_unconverged: bool,
) -> Result<MoIntegrals> {
    if !scf.converged && !allow_unconverged {
        return Err(Error::UnconvergedReference);
    }
    let h_ao = ints.core_hamiltonian();
    match scf.kind {
        ScfKind::Rhf => {
            let c = &scf.coeffs_alpha;
            Ok(MoIntegrals::Restricted {
                n: ints.n,
                h: c.transpose() * &h_ao * c,
                eri: transform_eri(&ints.eri, c, c),
            })
        }
        ScfKind::Uhf => {
            let ca = &scf.coeffs_alpha;
            let cb = &scf.coeffs_beta;
            Ok(MoIntegrals::Unrestricted {
                n: ints.n,
                h_alpha: ca.transpose() * &h_ao * ca,
                h_beta: cb.transpose() * &h_ao * cb,
                eri_aa: transform_eri(&ints.eri, ca, ca),
                eri_bb: transform_eri(&ints.eri, cb, cb),
                eri_ab: transform_eri(&ints.eri, ca, cb),
            })
        }
    }
}

#[inline]
fn mask_below(i: usize) -> u64 {
    (1u64 << i) - 1
}

fn parity(count: u32) -> f64 {
    if count % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn occupied_list(mask: u64) -> Vec<usize> {
    let mut v = Vec::with_capacity(mask.count_ones() as usize);
    let mut rest = mask;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        v.push(i);
        rest &= rest - 1;
    }
    v
}

/// ⟨d1|H|d2⟩ by the Slater–Condon rules, with the fermionic phase from the
/// interleaved creation-operator ordering. Zero beyond two substitutions.
pub fn hamiltonian_element(d1: &Determinant, d2: &Determinant, mo: &MoIntegrals) -> Result<f64> {
    if d1.n_alpha() + d1.n_beta() != d2.n_alpha() + d2.n_beta() {
        return Err(Error::ElectronCountMismatch);
    }
    let m = mo.n();
    let o1 = d1.interleaved(m);
    let o2 = d2.interleaved(m);
    let only1 = o1 & !o2;
    let only2 = o2 & !o1;
    match only1.count_ones() {
        0 => {
            let occ = occupied_list(o1);
            let mut e = 0.0;
            for &i in &occ {
                e += mo.h_so(i, i);
            }
            for &i in &occ {
                for &j in &occ {
                    e += 0.5 * (mo.g_so(i, i, j, j) - mo.g_so(i, j, j, i));
                }
            }
            Ok(e)
        }
        1 => {
            let i = only1.trailing_zeros() as usize;
            let a = only2.trailing_zeros() as usize;
            let phase = parity(
                (o1 & mask_below(i)).count_ones() + (o2 & mask_below(a)).count_ones(),
            );
            let mut v = mo.h_so(i, a);
            for &j in &occupied_list(o1 & o2) {
                v += mo.g_so(i, a, j, j) - mo.g_so(i, j, j, a);
            }
            Ok(phase * v)
        }
        2 => {
            let i = only1.trailing_zeros() as usize;
            let j = 63 - only1.leading_zeros() as usize;
            let a = only2.trailing_zeros() as usize;
            let b = 63 - only2.leading_zeros() as usize;
            let swaps = (o1 & mask_below(i)).count_ones()
                + (o2 & mask_below(a)).count_ones()
                + ((o1 & !(1 << i)) & mask_below(j)).count_ones()
                + ((o2 & !(1 << a)) & mask_below(b)).count_ones();
            Ok(parity(swaps) * (mo.g_so(i, a, j, b) - mo.g_so(i, b, j, a)))
        }
        _ => Ok(0.0),
    }
}

/// A CI eigenstate over an explicit determinant list.
#[derive(Debug, Clone)]
pub struct CiWavefunction {
    pub dets: Vec<Determinant>,
    /// Unit-norm coefficients, phase-fixed so the reference coefficient
    /// is non-negative.
    pub coeffs: DVector<f64>,
    pub reference_index: usize,
    /// Total energy including the core (nuclear-repulsion) energy.
    pub energy: f64,
    /// Spatial-orbital count of the underlying MO basis.
    pub m: usize,
}

impl CiWavefunction {
    pub fn n_alpha(&self) -> usize {
        self.dets[self.reference_index].n_alpha()
    }

    pub fn n_beta(&self) -> usize {
        self.dets[self.reference_index].n_beta()
    }

    pub fn n_electrons(&self) -> usize {
        self.n_alpha() + self.n_beta()
    }
}

/// Assemble the dense Hamiltonian over `dets` and return the lowest
/// eigenpair. Degenerate ground states resolve to the eigenvector with the
/// largest reference coefficient, ties to the one whose first nonzero
/// coefficient comes earliest.
pub fn solve_ci(
    dets: &[Determinant],
    mo: &MoIntegrals,
    core_energy: f64,
) -> Result<CiWavefunction> {
    if dets.is_empty() {
        return Err(Error::EmptyDeterminantList);
    }
    let n = dets.len();
    let mut h = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = hamiltonian_element(&dets[i], &dets[j], mo)?;
            h[(i, j)] = v;
            h[(j, i)] = v;
        }
    }
    let (vals, vecs) = eigh_sorted(&h)?;

    let reference_index = 0;
    let ground = vals[0];
    let mut best: Option<usize> = None;
    for k in 0..n {
        if vals[k] > ground + 1e-10 {
            break;
        }
        let better = match best {
            None => true,
            Some(cur) => {
                let c_cur = vecs[(reference_index, cur)].abs();
                let c_new = vecs[(reference_index, k)].abs();
                if (c_new - c_cur).abs() > 1e-12 {
                    c_new > c_cur
                } else {
                    first_nonzero(&vecs.column(k).into_owned())
                        < first_nonzero(&vecs.column(cur).into_owned())
                }
            }
        };
        if better {
            best = Some(k);
        }
    }
    let k = best.unwrap();
    let mut coeffs = vecs.column(k).into_owned();
    coeffs /= coeffs.norm();
    let anchor = if coeffs[reference_index].abs() > 1e-12 {
        coeffs[reference_index]
    } else {
        coeffs[first_nonzero(&coeffs)]
    };
    if anchor < 0.0 {
        coeffs = -coeffs;
    }

    Ok(CiWavefunction {
        dets: dets.to_vec(),
        coeffs,
        reference_index,
        energy: vals[k] + core_energy,
        m: mo.n(),
    })
}

fn first_nonzero(v: &DVector<f64>) -> usize {
    v.iter()
        .position(|c| c.abs() > 1e-12)
        .unwrap_or(v.len() - 1)
}

/// Spin blocks of the one-particle reduced density matrix.
#[derive(Debug, Clone)]
pub struct OneRdm {
    pub alpha_block: DMatrix<f64>,
    pub beta_block: DMatrix<f64>,
}

/// γ^σ_pq = ⟨Ψ| a†_pσ a_qσ |Ψ⟩ with interleaved-ordering phases.
pub fn one_rdm(wf: &CiWavefunction) -> OneRdm {
    let m = wf.m;
    let index: HashMap<Determinant, usize> =
        wf.dets.iter().enumerate().map(|(i, &d)| (d, i)).collect();
    let mut gamma_a = DMatrix::zeros(m, m);
    let mut gamma_b = DMatrix::zeros(m, m);

    for (i_det, det) in wf.dets.iter().enumerate() {
        let ci = wf.coeffs[i_det];
        if ci == 0.0 {
            continue;
        }
        // diagonal occupations
        for p in 0..m {
            if det.alpha >> p & 1 == 1 {
                gamma_a[(p, p)] += ci * ci;
            }
            if det.beta >> p & 1 == 1 {
                gamma_b[(p, p)] += ci * ci;
            }
        }
        let occ = det.interleaved(m);
        // single substitutions q -> p within each spin
        for q in 0..m {
            for p in 0..m {
                if p == q {
                    continue;
                }
                // alpha
                if det.alpha >> q & 1 == 1 && det.alpha >> p & 1 == 0 {
                    let target = Determinant {
                        alpha: det.alpha & !(1 << q) | (1 << p),
                        beta: det.beta,
                    };
                    if let Some(&j_det) = index.get(&target) {
                        let occ2 = target.interleaved(m);
                        let phase = parity(
                            (occ & mask_below(2 * q)).count_ones()
                                + (occ2 & mask_below(2 * p)).count_ones(),
                        );
                        gamma_a[(p, q)] += phase * wf.coeffs[j_det] * ci;
                    }
                }
                // beta
                if det.beta >> q & 1 == 1 && det.beta >> p & 1 == 0 {
                    let target = Determinant {
                        alpha: det.alpha,
                        beta: det.beta & !(1 << q) | (1 << p),
                    };
                    if let Some(&j_det) = index.get(&target) {
                        let occ2 = target.interleaved(m);
                        let phase = parity(
                            (occ & mask_below(2 * q + 1)).count_ones()
                                + (occ2 & mask_below(2 * p + 1)).count_ones(),
                        );
                        gamma_b[(p, q)] += phase * wf.coeffs[j_det] * ci;
                    }
                }
            }
        }
    }
    OneRdm {
        alpha_block: gamma_a,
        beta_block: gamma_b,
    }
}
