//! Entropy and correlation measures: occupation-basis density matrices, the
//! general fermionic partial trace with its two-level closed forms, reduced
//! and natural-spin-orbital entropies, and correlation-energy bookkeeping.
//!
//! Mode ordering is everywhere the interleaved spin-orbital order
//! (n₁↑, n₁↓, n₂↑, n₂↓, …); Fock-space basis states are indexed big-endian
//! in that order, so |n₁↑ n₁↓⟩ = |10⟩ maps to index 2 in a two-mode space.

use nalgebra::{DMatrix, DVector};

use crate::detci::{CiWavefunction, OneRdm};
use crate::error::{Error, Result};

/// Eigenvalues at or below this contribute 0·log 0 = 0 to entropies.
const ENTROPY_EIGENVALUE_FLOOR: f64 = 1e-12;

/// One spin-orbital site in the occupation-number representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeLabel {
    /// Spatial-orbital index, 0-based.
    pub orbital: usize,
    /// false = ↑ (α), true = ↓ (β).
    pub down: bool,
}

impl ModeLabel {
    pub fn up(orbital: usize) -> Self {
        Self {
            orbital,
            down: false,
        }
    }

    pub fn down(orbital: usize) -> Self {
        Self {
            orbital,
            down: true,
        }
    }

    /// Position in the interleaved spin-orbital ordering.
    pub fn index(&self) -> usize {
        2 * self.orbital + usize::from(self.down)
    }

    pub fn from_index(i: usize) -> Self {
        Self {
            orbital: i / 2,
            down: i % 2 == 1,
        }
    }
}

impl std::fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "n{}{}",
            self.orbital + 1,
            if self.down { "↓" } else { "↑" }
        )
    }
}

/// Antisymmetric two-electron amplitude matrix ω over 2m spin orbitals.
///
/// ω_{a,b} = −ω_{b,a}, ω_{a,a} = 0; a normalized CI vector maps onto it
/// with 2·Σ_{a,b} ω_{a,b}² = 1.
#[derive(Debug, Clone)]
pub struct AmplitudeMatrix {
    omega: DMatrix<f64>,
}

impl AmplitudeMatrix {
    pub fn omega(&self) -> &DMatrix<f64> {
        &self.omega
    }

    /// ω over 1-based spin-orbital indices, matching the two-level
    /// bookkeeping (ω₁₂ = `get(1, 2)`).
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.omega[(a - 1, b - 1)]
    }
}

/// Distribute each determinant coefficient c over its (a,b)/(b,a) amplitude
/// pair as ±c/2. Only defined for two-electron wavefunctions.
pub fn omega_from_ci(wf: &CiWavefunction) -> Result<AmplitudeMatrix> {
    if wf.n_electrons() != 2 {
        return Err(Error::NotTwoElectron(wf.n_electrons()));
    }
    let dim = 2 * wf.m;
    let mut omega = DMatrix::zeros(dim, dim);
    for (i, det) in wf.dets.iter().enumerate() {
        let occ = det.interleaved(wf.m);
        let a = occ.trailing_zeros() as usize;
        let b = (63 - occ.leading_zeros()) as usize;
        let half = 0.5 * wf.coeffs[i];
        omega[(a, b)] += half;
        omega[(b, a)] -= half;
    }
    Ok(AmplitudeMatrix { omega })
}

/// A density operator over an explicit list of spin-orbital modes.
#[derive(Debug, Clone)]
pub struct FockDensityMatrix {
    matrix: DMatrix<f64>,
    mode_labels: Vec<ModeLabel>,
}

impl FockDensityMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn mode_labels(&self) -> &[ModeLabel] {
        &self.mode_labels
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }
}

/// The pure-state projector |Ψ⟩⟨Ψ| in the full 2^(2m)-dimensional Fock
/// space. Guarded at 2^(2m) ≤ 2^16.
pub fn fock_density(wf: &CiWavefunction) -> Result<FockDensityMatrix> {
    let n_modes = 2 * wf.m;
    if n_modes > 16 {
        return Err(Error::FockSpaceTooLarge { exponent: n_modes });
    }
    let dim = 1usize << n_modes;
    let mut psi: DVector<f64> = DVector::zeros(dim);
    for (i, det) in wf.dets.iter().enumerate() {
        let occ = det.interleaved(wf.m);
        let mut idx = 0usize;
        for mode in 0..n_modes {
            if occ >> mode & 1 == 1 {
                idx |= 1 << (n_modes - 1 - mode);
            }
        }
        psi[idx] += wf.coeffs[i];
    }
    let matrix = &psi * psi.transpose();
    Ok(FockDensityMatrix {
        matrix,
        mode_labels: (0..n_modes).map(ModeLabel::from_index).collect(),
    })
}

/// Trace out every mode not in `keep`, with the fermionic reordering signs
/// that make kept-mode observables consistent with the full state.
///
/// `keep` may come in any order; the result is over the kept modes in
/// ascending interleaved order. Trace and positive semidefiniteness are
/// preserved.
pub fn partial_trace(rho: &FockDensityMatrix, keep: &[ModeLabel]) -> Result<FockDensityMatrix> {
    if keep.is_empty() {
        return Err(Error::BadKeepSet("empty".into()));
    }
    let mut kept: Vec<ModeLabel> = keep.to_vec();
    kept.sort();
    kept.dedup();
    if kept.len() != keep.len() {
        return Err(Error::BadKeepSet("contains duplicates".into()));
    }
    // positions of kept/traced modes within rho's own label list
    let mut keep_pos = Vec::with_capacity(kept.len());
    for label in &kept {
        match rho.mode_labels.iter().position(|l| l == label) {
            Some(p) => keep_pos.push(p),
            None => {
                return Err(Error::BadKeepSet(format!(
                    "mode {label} is not part of this density matrix"
                )))
            }
        }
    }
    let trace_pos: Vec<usize> = (0..rho.mode_labels.len())
        .filter(|p| !keep_pos.contains(p))
        .collect();

    let l_total = rho.mode_labels.len();
    let n_keep = keep_pos.len();
    let n_trace = trace_pos.len();
    let dim_out = 1usize << n_keep;

    // Assemble the full-space index and the kept/traced crossing parity for
    // one (kept pattern, traced pattern) pair.
    let compose = |k: usize, t: usize| -> (usize, f64) {
        let mut idx = 0usize;
        let mut crossings = 0usize;
        for (bit, &pos) in keep_pos.iter().enumerate() {
            if k >> (n_keep - 1 - bit) & 1 == 1 {
                idx |= 1 << (l_total - 1 - pos);
                for (tbit, &tpos) in trace_pos.iter().enumerate() {
                    if t >> (n_trace - 1 - tbit) & 1 == 1 && tpos < pos {
                        crossings += 1;
                    }
                }
            }
        }
        for (tbit, &tpos) in trace_pos.iter().enumerate() {
            if t >> (n_trace - 1 - tbit) & 1 == 1 {
                idx |= 1 << (l_total - 1 - tpos);
            }
        }
        let sign = if crossings % 2 == 0 { 1.0 } else { -1.0 };
        (idx, sign)
    };

    let mut out = DMatrix::zeros(dim_out, dim_out);
    for k_row in 0..dim_out {
        for k_col in 0..dim_out {
            let mut acc = 0.0;
            for t in 0..1usize << n_trace {
                let (i, si) = compose(k_row, t);
                let (j, sj) = compose(k_col, t);
                acc += si * sj * rho.matrix[(i, j)];
            }
            out[(k_row, k_col)] = acc;
        }
    }
    Ok(FockDensityMatrix {
        matrix: out,
        mode_labels: kept,
    })
}

/// The two diagonal entries of the reduced density matrix over the n₁↑
/// occupation, accumulated per excitation class of the CI expansion.
#[derive(Debug, Clone, Copy)]
pub struct Rho1Cisd {
    /// (P(n₁↑ = 0), P(n₁↑ = 1)) after renormalization to unit trace.
    pub diag: [f64; 2],
    /// Trace of the raw class sums before renormalization; a deficit from 1
    /// means the CI vector has weight outside the listed configurations.
    pub raw_trace: f64,
}

impl Rho1Cisd {
    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&DVector::from_row_slice(&self.diag))
    }
}

/// Closed-form ρ₁ for a two-electron expansion from the |1α 1β⟩ reference:
/// the unoccupied entry collects the α singles and the doubles, the occupied
/// entry the reference and the β singles.
pub fn rho1_cisd_closed_form(wf: &CiWavefunction) -> Result<Rho1Cisd> {
    if wf.n_electrons() != 2 {
        return Err(Error::NotTwoElectron(wf.n_electrons()));
    }
    let reference = &wf.dets[wf.reference_index];
    if reference.alpha != 1 || reference.beta != 1 {
        return Err(Error::BadReferenceOccupation);
    }
    let mut unoccupied = 0.0;
    let mut occupied = 0.0;
    for (i, det) in wf.dets.iter().enumerate() {
        let w = wf.coeffs[i] * wf.coeffs[i];
        let alpha_on_ref = det.alpha & 1 == 1;
        let beta_on_ref = det.beta & 1 == 1;
        match (alpha_on_ref, beta_on_ref) {
            (true, true) => occupied += w,  // c0
            (true, false) => occupied += w, // beta single c_2^{2i+2}
            (false, true) => unoccupied += w, // alpha single c_1^{2i+1}
            (false, false) => unoccupied += w, // double c_{1,2}^{2i+1,2j+2}
        }
    }
    let raw_trace = unoccupied + occupied;
    Ok(Rho1Cisd {
        diag: [unoccupied / raw_trace, occupied / raw_trace],
        raw_trace,
    })
}

/// S(ρ) = −Σ λ log₂ λ over the eigenvalues of a unit-trace symmetric PSD
/// matrix, in bits. Eigenvalues below 1e-12 contribute zero.
pub fn von_neumann_entropy(rho: &DMatrix<f64>) -> Result<f64> {
    if !rho.is_square() {
        return Err(Error::InvalidDensity(format!(
            "matrix is {}x{}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    let trace = rho.trace();
    if (trace - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidDensity(format!("trace is {trace}")));
    }
    if (rho - rho.transpose()).abs().max() > 1e-8 {
        return Err(Error::InvalidDensity("matrix is not symmetric".into()));
    }
    let eigenvalues = rho
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 10_000)
        .ok_or_else(|| Error::EigensolverFailure("density matrix".into()))?
        .eigenvalues;
    let mut s = 0.0;
    for &l in eigenvalues.iter() {
        if l < -1e-8 {
            return Err(Error::InvalidDensity(format!("eigenvalue {l} < 0")));
        }
        if l > ENTROPY_EIGENVALUE_FLOOR {
            s -= l * l.log2();
        }
    }
    Ok(s.max(0.0))
}

/// Natural-spin-orbital entropy: −(1/2)(Σ αᵢ log₂ αᵢ + Σ βᵢ log₂ βᵢ) over
/// the eigenvalues of the two RDM blocks, used as occupations (trace equals
/// the electron count, not 1).
pub fn nso_entropy(rdm: &OneRdm) -> Result<f64> {
    let mut s = 0.0;
    for block in [&rdm.alpha_block, &rdm.beta_block] {
        let eigenvalues = block
            .clone()
            .try_symmetric_eigen(f64::EPSILON, 10_000)
            .ok_or_else(|| Error::EigensolverFailure("one-particle RDM".into()))?
            .eigenvalues;
        for &l in eigenvalues.iter() {
            if l > ENTROPY_EIGENVALUE_FLOOR {
                s -= l * l.log2();
            }
        }
    }
    Ok((0.5 * s).max(0.0))
}

/// Signed correlation energy E_exact − E_HF.
pub fn correlation_energy(e_exact: f64, e_hf: f64) -> f64 {
    e_exact - e_hf
}

/// Energies and entropies for one geometry, with enough labeling to compare
/// reports across systems.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyReport {
    pub basis: String,
    /// Canonical comma-joined method list, e.g. "RHF,UHF,FCI".
    pub methods: String,
    pub e_hf_rhf: Option<f64>,
    pub e_hf_uhf: Option<f64>,
    pub e_fci: Option<f64>,
    pub e_c_rhf: Option<f64>,
    pub e_c_uhf: Option<f64>,
    /// Reduced-density-matrix entropy of the CI expansion; two-electron
    /// systems only.
    pub s_rho1_cisd: Option<f64>,
    pub s_nso: Option<f64>,
    /// Raw trace of the closed-form ρ₁ before renormalization.
    pub rho1_raw_trace: Option<f64>,
    pub rhf_converged: Option<bool>,
    pub uhf_converged: Option<bool>,
    pub spin_contamination: Option<f64>,
}

impl EntropyReport {
    /// UHF-referenced correlation energy when available, RHF otherwise.
    pub fn preferred_correlation(&self) -> Option<f64> {
        self.e_c_uhf.or(self.e_c_rhf)
    }

    pub fn all_converged(&self) -> bool {
        self.rhf_converged.unwrap_or(true) && self.uhf_converged.unwrap_or(true)
    }
}

/// Interaction correlation energy and interaction electron entanglement of
/// a compound system relative to two isolated copies of one fragment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteractionQuantities {
    pub e_c_int: f64,
    pub s_int: f64,
}

/// e_c_int = E_c[dimer] − 2·E_c[monomer] and s_int = S[dimer] − 2·S[monomer],
/// both signed. The two reports must come from the same basis and method
/// settings.
pub fn interaction_quantities(
    dimer: &EntropyReport,
    monomer: &EntropyReport,
) -> Result<InteractionQuantities> {
    if dimer.basis != monomer.basis {
        return Err(Error::ReportMismatch(format!(
            "basis {} vs {}",
            dimer.basis, monomer.basis
        )));
    }
    if dimer.methods != monomer.methods {
        return Err(Error::ReportMismatch(format!(
            "methods {} vs {}",
            dimer.methods, monomer.methods
        )));
    }
    let (ec_d, ec_m) = match (dimer.preferred_correlation(), monomer.preferred_correlation()) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::ReportMismatch(
                "correlation energy missing from a report".into(),
            ))
        }
    };
    let (s_d, s_m) = match (dimer.s_nso, monomer.s_nso) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::ReportMismatch(
                "natural-spin-orbital entropy missing from a report".into(),
            ))
        }
    };
    Ok(InteractionQuantities {
        e_c_int: ec_d - 2.0 * ec_m,
        s_int: s_d - 2.0 * s_m,
    })
}
