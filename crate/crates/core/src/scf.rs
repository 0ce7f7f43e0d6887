//! Restricted and unrestricted Hartree–Fock solvers.
//!
//! Roothaan fixed-point iteration from a core-Hamiltonian guess, accelerated
//! by Pulay DIIS over Fock matrices (error vector FDS−SDF expressed in the
//! Löwdin-orthonormal basis). A plain damped mode is selectable; it trades
//! speed for a monotonically non-increasing energy sequence.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::integrals::{EriTensor, IntegralSet};

/// Overlap eigenvalues below this are treated as linear dependence.
const LINDEP_THRESHOLD: f64 = 1e-10;

/// SCF convergence and acceleration settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScfOptions {
    /// Energy-change threshold (hartree).
    pub e_tol: f64,
    /// Density-change and orbital-gradient threshold (max-abs element).
    pub d_tol: f64,
    pub max_iter: usize,
    pub accel: Acceleration,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Acceleration {
    /// Pulay DIIS with the given subspace size, activated after `start_iter`
    /// plain iterations.
    Diis { subspace: usize, start_iter: usize },
    /// Fock damping F ← (1−factor)·F_new + factor·F_old; no extrapolation.
    Damping { factor: f64 },
}

impl Default for ScfOptions {
    fn default() -> Self {
        Self {
            e_tol: 1e-10,
            d_tol: 1e-8,
            max_iter: 200,
            accel: Acceleration::Diis {
                subspace: 6,
                start_iter: 2,
            },
        }
    }
}

/// Spin treatment of a converged (or abandoned) SCF solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScfKind {
    Rhf,
    Uhf,
}

/// Converged orbitals, energies and diagnostics from one SCF run.
#[derive(Debug, Clone)]
pub struct ScfResult {
    pub kind: ScfKind,
    /// MO coefficients, one column per orbital, ascending orbital energy.
    pub coeffs_alpha: DMatrix<f64>,
    /// Equal to `coeffs_alpha` for RHF.
    pub coeffs_beta: DMatrix<f64>,
    pub orbital_energies_alpha: DVector<f64>,
    pub orbital_energies_beta: DVector<f64>,
    pub n_alpha: usize,
    pub n_beta: usize,
    pub total_energy: f64,
    pub electronic_energy: f64,
    pub iterations: usize,
    pub converged: bool,
    /// ⟨S²⟩ of the single determinant (exact value for RHF).
    pub spin_contamination: f64,
    /// Total energy after each iteration, for convergence diagnostics.
    pub energy_history: Vec<f64>,
}

/// Sorted symmetric eigendecomposition; ties broken by original column
/// index so degenerate spectra order deterministically.
pub fn eigh_sorted(m: &DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let eig = m
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 10_000)
        .ok_or_else(|| Error::EigensolverFailure(format!("{}x{} matrix", m.nrows(), m.ncols())))?;
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[i]
            .total_cmp(&eig.eigenvalues[j])
            .then(i.cmp(&j))
    });
    let values = DVector::from_iterator(order.len(), order.iter().map(|&i| eig.eigenvalues[i]));
    let vectors = DMatrix::from_columns(
        &order
            .iter()
            .map(|&i| eig.eigenvectors.column(i).into_owned())
            .collect::<Vec<_>>(),
    );
    Ok((values, vectors))
}

/// Löwdin symmetric orthogonalizer X = S^{−1/2}.
///
/// Fails with a linear-dependence error naming the offending eigenvalue if
/// any overlap eigenvalue drops below 1e-10.
pub fn symmetric_orthogonalizer(s: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (vals, vecs) = eigh_sorted(s)?;
    if let Some(&lmin) = vals.iter().find(|&&l| l < LINDEP_THRESHOLD) {
        return Err(Error::LinearDependence(lmin));
    }
    let inv_sqrt = DMatrix::from_diagonal(&vals.map(|l| l.sqrt().recip()));
    Ok(&vecs * inv_sqrt * vecs.transpose())
}

fn density(coeffs: &DMatrix<f64>, n_occ: usize, scale: f64) -> DMatrix<f64> {
    let occ = coeffs.columns(0, n_occ);
    scale * occ * occ.transpose()
}

/// G_μν = Σ_λσ P_λσ [(μν|σλ) − ½(μλ|σν)] for the closed-shell Fock matrix.
fn rhf_g_matrix(p: &DMatrix<f64>, eri: &EriTensor) -> DMatrix<f64> {
    let n = p.nrows();
    let mut g = DMatrix::zeros(n, n);
    for mu in 0..n {
        for nu in mu..n {
            let mut val = 0.0;
            for la in 0..n {
                for si in 0..n {
                    val += p[(la, si)]
                        * (eri.get(mu, nu, si, la) - 0.5 * eri.get(mu, la, si, nu));
                }
            }
            g[(mu, nu)] = val;
            g[(nu, mu)] = val;
        }
    }
    g
}

/// Coulomb and exchange pieces of the spin-resolved Fock matrices.
fn uhf_fock(
    h: &DMatrix<f64>,
    p_same: &DMatrix<f64>,
    p_total: &DMatrix<f64>,
    eri: &EriTensor,
) -> DMatrix<f64> {
    let n = h.nrows();
    let mut f = h.clone();
    for mu in 0..n {
        for nu in mu..n {
            let mut val = 0.0;
            for la in 0..n {
                for si in 0..n {
                    val += p_total[(la, si)] * eri.get(mu, nu, si, la)
                        - p_same[(la, si)] * eri.get(mu, la, si, nu);
                }
            }
            f[(mu, nu)] += val;
            if nu != mu {
                f[(nu, mu)] += val;
            }
        }
    }
    f
}

/// Orbital-gradient matrix FDS − SDF in the orthonormal basis.
fn diis_error(
    f: &DMatrix<f64>,
    p: &DMatrix<f64>,
    s: &DMatrix<f64>,
    x: &DMatrix<f64>,
) -> DMatrix<f64> {
    let fps = f * p * s;
    let comm = &fps - fps.transpose();
    x.transpose() * comm * x
}

struct DiisState {
    focks: VecDeque<Vec<DMatrix<f64>>>,
    errors: VecDeque<DVector<f64>>,
    subspace: usize,
}

impl DiisState {
    fn new(subspace: usize) -> Self {
        Self {
            focks: VecDeque::new(),
            errors: VecDeque::new(),
            subspace,
        }
    }

    fn push(&mut self, focks: Vec<DMatrix<f64>>, errors: &[DMatrix<f64>]) {
        let flat: Vec<f64> = errors.iter().flat_map(|e| e.iter().copied()).collect();
        self.focks.push_back(focks);
        self.errors.push_back(DVector::from_vec(flat));
        while self.focks.len() > self.subspace {
            self.focks.pop_front();
            self.errors.pop_front();
        }
    }

    /// Solve the Pulay equations; on a singular system drop the oldest
    /// entry and retry. Returns one extrapolated Fock per spin channel.
    fn extrapolate(&mut self) -> Option<Vec<DMatrix<f64>>> {
        while self.focks.len() >= 2 {
            let k = self.focks.len();
            let mut b = DMatrix::zeros(k + 1, k + 1);
            for i in 0..k {
                for j in 0..k {
                    b[(i, j)] = self.errors[i].dot(&self.errors[j]);
                }
                b[(i, k)] = -1.0;
                b[(k, i)] = -1.0;
            }
            let mut rhs = DVector::zeros(k + 1);
            rhs[k] = -1.0;
            let sol = b.full_piv_lu().solve(&rhs);
            if let Some(c) = sol {
                if c.iter().all(|v| v.is_finite()) {
                    let channels = self.focks[0].len();
                    let mut out = Vec::with_capacity(channels);
                    for ch in 0..channels {
                        let mut f = DMatrix::zeros(
                            self.focks[0][ch].nrows(),
                            self.focks[0][ch].ncols(),
                        );
                        for i in 0..k {
                            f += &self.focks[i][ch] * c[i];
                        }
                        out.push(f);
                    }
                    return Some(out);
                }
            }
            self.focks.pop_front();
            self.errors.pop_front();
        }
        None
    }
}

/// Restricted Hartree–Fock for an even number of electrons.
pub fn run_rhf(ints: &IntegralSet, n_electrons: usize, opts: &ScfOptions) -> Result<ScfResult> {
    if n_electrons == 0 || n_electrons % 2 != 0 {
        return Err(Error::BadElectronCount(format!(
            "RHF requires an even positive electron count, got {n_electrons}"
        )));
    }
    let n_occ = n_electrons / 2;
    if n_occ > ints.n {
        return Err(Error::BadElectronCount(format!(
            "{n_electrons} electrons do not fit in {} basis functions",
            ints.n
        )));
    }

    let s = &ints.overlap;
    let h = ints.core_hamiltonian();
    let x = symmetric_orthogonalizer(s)?;

    // core-Hamiltonian guess
    let (_, cprime) = eigh_sorted(&(x.transpose() * &h * &x))?;
    let mut coeffs = &x * cprime;
    let mut p = density(&coeffs, n_occ, 2.0);
    let mut energies = DVector::zeros(ints.n);

    let mut diis = DiisState::new(match opts.accel {
        Acceleration::Diis { subspace, .. } => subspace,
        _ => 0,
    });
    let mut f_damped: Option<DMatrix<f64>> = None;

    let mut e_prev = f64::INFINITY;
    let mut history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    for iter in 1..=opts.max_iter.max(1) {
        iterations = iter;
        let f = &h + rhf_g_matrix(&p, &ints.eri);
        let e_elec = 0.5 * (&p * (&h + &f)).trace();
        history.push(e_elec + ints.core_energy);

        let err = diis_error(&f, &p, s, &x);
        let comm_max = err.abs().max();

        let f_use = match opts.accel {
            Acceleration::Diis {
                subspace: _,
                start_iter,
            } => {
                diis.push(vec![f.clone()], &[err]);
                if iter > start_iter {
                    diis.extrapolate()
                        .map(|mut v| v.pop().unwrap())
                        .unwrap_or_else(|| f.clone())
                } else {
                    f.clone()
                }
            }
            Acceleration::Damping { factor } => {
                let mixed = match &f_damped {
                    Some(prev) => prev * factor + &f * (1.0 - factor),
                    None => f.clone(),
                };
                f_damped = Some(mixed.clone());
                mixed
            }
        };

        let (e_orb, cprime) = eigh_sorted(&(x.transpose() * &f_use * &x))?;
        coeffs = &x * cprime;
        energies = e_orb;
        let p_new = density(&coeffs, n_occ, 2.0);

        let de = (e_elec + ints.core_energy - e_prev).abs();
        let dp = (&p_new - &p).abs().max();
        e_prev = e_elec + ints.core_energy;
        p = p_new;

        if de < opts.e_tol && dp < opts.d_tol && comm_max < opts.d_tol {
            converged = true;
            break;
        }
    }

    let electronic_energy = e_prev - ints.core_energy;
    Ok(ScfResult {
        kind: ScfKind::Rhf,
        coeffs_beta: coeffs.clone(),
        coeffs_alpha: coeffs,
        orbital_energies_beta: energies.clone(),
        orbital_energies_alpha: energies,
        n_alpha: n_occ,
        n_beta: n_occ,
        total_energy: e_prev,
        electronic_energy,
        iterations,
        converged,
        spin_contamination: 0.0,
        energy_history: history,
    })
}

/// Mixing angle used to break α/β symmetry in the UHF initial guess.
const UHF_MIX_ANGLE_DEG: f64 = 30.0;

fn mix_homo_lumo(coeffs: &mut DMatrix<f64>, n_occ: usize) {
    let n = coeffs.ncols();
    if n_occ == 0 || n_occ >= n {
        return;
    }
    let theta = UHF_MIX_ANGLE_DEG.to_radians();
    let homo = coeffs.column(n_occ - 1).into_owned();
    let lumo = coeffs.column(n_occ).into_owned();
    coeffs.set_column(n_occ - 1, &(&homo * theta.cos() + &lumo * theta.sin()));
    coeffs.set_column(n_occ, &(&homo * -theta.sin() + &lumo * theta.cos()));
}

/// Unrestricted Hartree–Fock with fixed-angle HOMO/LUMO symmetry breaking
/// in the α channel; reports ⟨S²⟩ of the converged determinant.
pub fn run_uhf(
    ints: &IntegralSet,
    n_alpha: usize,
    n_beta: usize,
    opts: &ScfOptions,
) -> Result<ScfResult> {
    if n_alpha + n_beta == 0 {
        return Err(Error::BadElectronCount(
            "UHF requires at least one electron".into(),
        ));
    }
    if n_alpha > ints.n || n_beta > ints.n {
        return Err(Error::BadElectronCount(format!(
            "occupation ({n_alpha}α, {n_beta}β) does not fit in {} basis functions",
            ints.n
        )));
    }

    let s = &ints.overlap;
    let h = ints.core_hamiltonian();
    let x = symmetric_orthogonalizer(s)?;

    let (_, cprime) = eigh_sorted(&(x.transpose() * &h * &x))?;
    let guess = &x * cprime;
    let mut ca = guess.clone();
    let mut cb = guess;
    mix_homo_lumo(&mut ca, n_alpha);

    let mut pa = density(&ca, n_alpha, 1.0);
    let mut pb = density(&cb, n_beta, 1.0);
    let mut ea_orb = DVector::zeros(ints.n);
    let mut eb_orb = DVector::zeros(ints.n);

    let mut diis = DiisState::new(match opts.accel {
        Acceleration::Diis { subspace, .. } => subspace,
        _ => 0,
    });
    let mut damped: Option<(DMatrix<f64>, DMatrix<f64>)> = None;

    let mut e_prev = f64::INFINITY;
    let mut history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    for iter in 1..=opts.max_iter.max(1) {
        iterations = iter;
        let p_total = &pa + &pb;
        let fa = uhf_fock(&h, &pa, &p_total, &ints.eri);
        let fb = uhf_fock(&h, &pb, &p_total, &ints.eri);
        let e_elec = 0.5
            * ((&p_total * &h).trace() + (&pa * &fa).trace() + (&pb * &fb).trace());
        history.push(e_elec + ints.core_energy);

        let err_a = diis_error(&fa, &pa, s, &x);
        let err_b = diis_error(&fb, &pb, s, &x);
        let comm_max = err_a.abs().max().max(err_b.abs().max());

        let (fa_use, fb_use) = match opts.accel {
            Acceleration::Diis {
                subspace: _,
                start_iter,
            } => {
                diis.push(vec![fa.clone(), fb.clone()], &[err_a, err_b]);
                if iter > start_iter {
                    match diis.extrapolate() {
                        Some(mut v) => {
                            let fb_x = v.pop().unwrap();
                            let fa_x = v.pop().unwrap();
                            (fa_x, fb_x)
                        }
                        None => (fa.clone(), fb.clone()),
                    }
                } else {
                    (fa.clone(), fb.clone())
                }
            }
            Acceleration::Damping { factor } => {
                let mixed = match &damped {
                    Some((da, db)) => {
                        (da * factor + &fa * (1.0 - factor), db * factor + &fb * (1.0 - factor))
                    }
                    None => (fa.clone(), fb.clone()),
                };
                damped = Some(mixed.clone());
                mixed
            }
        };

        let (ea, ca_prime) = eigh_sorted(&(x.transpose() * &fa_use * &x))?;
        let (eb, cb_prime) = eigh_sorted(&(x.transpose() * &fb_use * &x))?;
        ca = &x * ca_prime;
        cb = &x * cb_prime;
        ea_orb = ea;
        eb_orb = eb;
        let pa_new = density(&ca, n_alpha, 1.0);
        let pb_new = density(&cb, n_beta, 1.0);

        let de = (e_elec + ints.core_energy - e_prev).abs();
        let dp = (&pa_new - &pa).abs().max().max((&pb_new - &pb).abs().max());
        e_prev = e_elec + ints.core_energy;
        pa = pa_new;
        pb = pb_new;

        if de < opts.e_tol && dp < opts.d_tol && comm_max < opts.d_tol {
            converged = true;
            break;
        }
    }

    let s2 = spin_expectation(&ca, &cb, s, n_alpha, n_beta);
    let electronic_energy = e_prev - ints.core_energy;
    Ok(ScfResult {
        kind: ScfKind::Uhf,
        coeffs_alpha: ca,
        coeffs_beta: cb,
        orbital_energies_alpha: ea_orb,
        orbital_energies_beta: eb_orb,
        n_alpha,
        n_beta,
        total_energy: e_prev,
        electronic_energy,
        iterations,
        converged,
        spin_contamination: s2,
        energy_history: history,
    })
}

/// ⟨S²⟩ = Sz(Sz+1) + N_β − Σ_{ij} |⟨φᵅ_i|φᵝ_j⟩|² over occupied pairs.
fn spin_expectation(
    ca: &DMatrix<f64>,
    cb: &DMatrix<f64>,
    s: &DMatrix<f64>,
    n_alpha: usize,
    n_beta: usize,
) -> f64 {
    let sz = (n_alpha as f64 - n_beta as f64) / 2.0;
    let mut overlap_sq = 0.0;
    if n_alpha > 0 && n_beta > 0 {
        let cross = ca.columns(0, n_alpha).transpose() * s * cb.columns(0, n_beta);
        overlap_sq = cross.iter().map(|v| v * v).sum();
    }
    sz * (sz + 1.0) + n_beta as f64 - overlap_sq
}
