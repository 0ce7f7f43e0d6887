//! Scan orchestration: dissociation curves, two-fragment distance/rotation
//! scans, the shared single-point pipeline, and the file interfaces
//! (FCIDUMP in/out, CSV out).

pub mod csv;
pub mod fcidump;

pub use csv::write_csv;
pub use fcidump::{read_fcidump, write_fcidump, FcidumpMetadata};

use std::path::PathBuf;

use nalgebra::Vector3;

use crate::detci::{
    enumerate_determinants, hamiltonian_element, mo_transform, one_rdm, solve_ci, CiMode,
    Determinant, MoIntegrals,
};
use crate::entanglement::{
    correlation_energy, interaction_quantities, nso_entropy, rho1_cisd_closed_form,
    von_neumann_entropy, EntropyReport,
};
use crate::error::{Error, Result};
use crate::geom_basis::{build_basis, BasisName, Molecule};
use crate::integrals::build_integrals;
use crate::scf::{run_rhf, run_uhf, ScfOptions, ScfResult};

/// Methods requested for a scan or single point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MethodSet {
    pub rhf: bool,
    pub uhf: bool,
    pub fci: bool,
    pub cisd: bool,
}

impl Default for MethodSet {
    fn default() -> Self {
        Self {
            rhf: true,
            uhf: true,
            fci: true,
            cisd: false,
        }
    }
}

impl MethodSet {
    pub fn parse(s: &str) -> Result<Self> {
        let mut set = Self {
            rhf: false,
            uhf: false,
            fci: false,
            cisd: false,
        };
        for item in s.split(',') {
            match item.trim().to_ascii_lowercase().as_str() {
                "rhf" => set.rhf = true,
                "uhf" => set.uhf = true,
                "fci" => set.fci = true,
                "cisd" => set.cisd = true,
                "" => {}
                other => {
                    return Err(Error::InvalidConfig(format!(
                        "unknown method '{other}' (expected RHF, UHF, FCI or CISD)"
                    )))
                }
            }
        }
        Ok(set)
    }

    /// Canonical label used to compare reports.
    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        if self.rhf {
            parts.push("RHF");
        }
        if self.uhf {
            parts.push("UHF");
        }
        if self.fci {
            parts.push("FCI");
        }
        if self.cisd {
            parts.push("CISD");
        }
        parts.join(",")
    }

    pub fn has_hf(&self) -> bool {
        self.rhf || self.uhf
    }

    /// FCI wins when both CI variants are requested.
    pub fn ci_mode(&self) -> Option<CiMode> {
        if self.fci {
            Some(CiMode::Fci)
        } else if self.cisd {
            Some(CiMode::Cisd)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanMode {
    Dissociation,
    Fragments,
    Fcidump,
}

/// Full description of a scan run.
#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub mode: ScanMode,
    /// Diatomic template (dissociation) or fragment geometry (fragments).
    pub template: Molecule,
    /// Optional explicit second fragment; must be identical to `template`.
    pub fragment_b: Option<Molecule>,
    pub basis: BasisName,
    pub r_values: Vec<f64>,
    /// Rotation angles in degrees, fragment mode only.
    pub theta_values: Vec<f64>,
    pub methods: MethodSet,
    pub scf: ScfOptions,
    pub output_path: Option<PathBuf>,
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        if self.r_values.is_empty() {
            return Err(Error::InvalidConfig("r_values is empty".into()));
        }
        for w in self.r_values.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::InvalidConfig(
                    "r_values must be strictly increasing".into(),
                ));
            }
        }
        if self.r_values[0] <= 0.0 {
            return Err(Error::InvalidConfig("r_values must be positive".into()));
        }
        for &t in &self.theta_values {
            if !(0.0..360.0).contains(&t) {
                return Err(Error::InvalidConfig(format!(
                    "theta {t}° outside [0°, 360°)"
                )));
            }
        }
        if !self.methods.has_hf() || self.methods.ci_mode().is_none() {
            return Err(Error::InvalidConfig(
                "methods must include at least one HF variant and one CI variant".into(),
            ));
        }
        match self.mode {
            ScanMode::Dissociation => {
                if self.template.atoms().len() != 2 {
                    return Err(Error::InvalidConfig(
                        "dissociation mode needs a diatomic template".into(),
                    ));
                }
            }
            ScanMode::Fragments => {
                if self.template.multiplicity() != 1 {
                    return Err(Error::InvalidConfig(
                        "fragment scans require closed-shell fragments".into(),
                    ));
                }
                if self.theta_values.is_empty() {
                    return Err(Error::InvalidConfig("theta_values is empty".into()));
                }
                if let Some(b) = &self.fragment_b {
                    if !fragments_identical(&self.template, b) {
                        return Err(Error::InvalidConfig(
                            "the two fragments are not identical; interaction quantities \
                             presume identical fragments"
                                .into(),
                        ));
                    }
                }
            }
            ScanMode::Fcidump => {}
        }
        Ok(())
    }
}

/// Same atom list and same internal geometry relative to the centroid.
fn fragments_identical(a: &Molecule, b: &Molecule) -> bool {
    if a.atoms().len() != b.atoms().len() {
        return false;
    }
    let ca = a.centroid();
    let cb = b.centroid();
    a.atoms().iter().zip(b.atoms()).all(|(x, y)| {
        x.atomic_number == y.atomic_number
            && ((x.position - ca) - (y.position - cb)).norm() < 1e-10
    })
}

/// One scan point; energy fields live in the embedded report.
#[derive(Debug, Clone)]
pub struct ScanRow {
    pub mode: ScanMode,
    pub r: f64,
    pub theta: Option<f64>,
    pub report: EntropyReport,
    pub s_int: Option<f64>,
    pub e_c_int: Option<f64>,
    pub converged: bool,
    /// Failure description for points that errored out, kept off the CSV.
    pub note: Option<String>,
}

fn empty_report(basis: BasisName, methods: &MethodSet) -> EntropyReport {
    EntropyReport {
        basis: basis.to_string(),
        methods: methods.label(),
        e_hf_rhf: None,
        e_hf_uhf: None,
        e_fci: None,
        e_c_rhf: None,
        e_c_uhf: None,
        s_rho1_cisd: None,
        s_nso: None,
        rho1_raw_trace: None,
        rhf_converged: None,
        uhf_converged: None,
        spin_contamination: None,
    }
}

/// Run the full pipeline on one geometry: integrals, the requested SCF
/// variants, CI in the best available MO basis, and all entropy/correlation
/// measures.
pub fn single_point(
    mol: &Molecule,
    basis_name: BasisName,
    methods: &MethodSet,
    scf_opts: &ScfOptions,
) -> Result<EntropyReport> {
    let basis = build_basis(mol, basis_name)?;
    let ints = build_integrals(mol, &basis);
    let mut report = empty_report(basis_name, methods);

    let mut rhf_result: Option<ScfResult> = None;
    if methods.rhf {
        if mol.n_electrons() % 2 != 0 || mol.multiplicity() != 1 {
            return Err(Error::InvalidConfig(format!(
                "RHF requested for an open-shell system ({} electrons, multiplicity {})",
                mol.n_electrons(),
                mol.multiplicity()
            )));
        }
        let res = run_rhf(&ints, mol.n_electrons(), scf_opts)?;
        report.e_hf_rhf = Some(res.total_energy);
        report.rhf_converged = Some(res.converged);
        rhf_result = Some(res);
    }

    let mut uhf_result: Option<ScfResult> = None;
    if methods.uhf {
        let res = run_uhf(&ints, mol.n_alpha(), mol.n_beta(), scf_opts)?;
        report.e_hf_uhf = Some(res.total_energy);
        report.uhf_converged = Some(res.converged);
        report.spin_contamination = Some(res.spin_contamination);
        uhf_result = Some(res);
    }

    if let Some(ci_mode) = methods.ci_mode() {
        // CI is orbital-invariant in FCI mode; prefer the restricted MOs so
        // the CI-expansion entropy is taken in the symmetric reference.
        let source = rhf_result.as_ref().or(uhf_result.as_ref());
        if let Some(scf) = source {
            if scf.converged {
                let mo = mo_transform(&ints, scf, false)?;
                let reference = Determinant::reference(mol.n_alpha(), mol.n_beta());
                let dets = enumerate_determinants(
                    ints.n,
                    mol.n_alpha(),
                    mol.n_beta(),
                    ci_mode,
                    &reference,
                );
                let wf = solve_ci(&dets, &mo, ints.core_energy)?;
                report.e_fci = Some(wf.energy);
                if let Some(e_rhf) = report.e_hf_rhf {
                    report.e_c_rhf = Some(correlation_energy(wf.energy, e_rhf));
                }
                if let Some(e_uhf) = report.e_hf_uhf {
                    report.e_c_uhf = Some(correlation_energy(wf.energy, e_uhf));
                }
                let rdm = one_rdm(&wf);
                report.s_nso = Some(nso_entropy(&rdm)?);
                if mol.n_alpha() == 1 && mol.n_beta() == 1 {
                    let rho1 = rho1_cisd_closed_form(&wf)?;
                    report.s_rho1_cisd = Some(von_neumann_entropy(&rho1.matrix())?);
                    report.rho1_raw_trace = Some(rho1.raw_trace);
                }
            }
        }
    }

    Ok(report)
}

/// Place the diatomic template along z at separation `r` (bohr).
fn diatomic_at(template: &Molecule, r: f64) -> Result<Molecule> {
    let atoms = template.atoms();
    let placed = vec![
        crate::geom_basis::Atom {
            atomic_number: atoms[0].atomic_number,
            position: Vector3::zeros(),
        },
        crate::geom_basis::Atom {
            atomic_number: atoms[1].atomic_number,
            position: Vector3::new(0.0, 0.0, r),
        },
    ];
    Molecule::new(placed, template.net_charge(), template.multiplicity())
}

/// Dissociation scan: one row per internuclear distance, in R order.
/// Per-point failures are recorded in the row, not raised.
pub fn run_dissociation_scan(cfg: &ScanConfig) -> Result<Vec<ScanRow>> {
    if cfg.mode != ScanMode::Dissociation {
        return Err(Error::InvalidConfig("config mode is not dissociation".into()));
    }
    cfg.validate()?;
    let mut rows = Vec::with_capacity(cfg.r_values.len());
    for &r in &cfg.r_values {
        let row = match diatomic_at(&cfg.template, r)
            .and_then(|mol| single_point(&mol, cfg.basis, &cfg.methods, &cfg.scf))
        {
            Ok(report) => ScanRow {
                mode: ScanMode::Dissociation,
                r,
                theta: None,
                converged: report.all_converged(),
                report,
                s_int: None,
                e_c_int: None,
                note: None,
            },
            Err(e) => ScanRow {
                mode: ScanMode::Dissociation,
                r,
                theta: None,
                report: empty_report(cfg.basis, &cfg.methods),
                s_int: None,
                e_c_int: None,
                converged: false,
                note: Some(e.to_string()),
            },
        };
        rows.push(row);
    }
    Ok(rows)
}

/// Compound geometry for one fragment-scan point: fragment A as given,
/// fragment B rotated by θ about the z axis through its centroid and
/// shifted by R along z.
pub fn place_fragments(template: &Molecule, r: f64, theta_deg: f64) -> Result<Molecule> {
    let rotated = template.rotated_about_z(theta_deg.to_radians(), template.centroid());
    let moved = rotated.translated(Vector3::new(0.0, 0.0, r));
    let mut atoms = template.atoms().to_vec();
    atoms.extend_from_slice(moved.atoms());
    Molecule::new(atoms, 2 * template.net_charge(), 1)
}

/// Two-fragment scan over (R, θ). The monomer is evaluated once; every row
/// carries the interaction quantities relative to it.
pub fn run_fragment_scan(cfg: &ScanConfig) -> Result<Vec<ScanRow>> {
    if cfg.mode != ScanMode::Fragments {
        return Err(Error::InvalidConfig("config mode is not fragments".into()));
    }
    cfg.validate()?;

    let monomer = single_point(&cfg.template, cfg.basis, &cfg.methods, &cfg.scf)?;
    let mut thetas = cfg.theta_values.clone();
    thetas.sort_by(f64::total_cmp);

    let mut rows = Vec::with_capacity(cfg.r_values.len() * thetas.len());
    for &r in &cfg.r_values {
        for &theta in &thetas {
            let point = place_fragments(&cfg.template, r, theta)
                .and_then(|mol| single_point(&mol, cfg.basis, &cfg.methods, &cfg.scf));
            let row = match point {
                Ok(report) => {
                    let iq = interaction_quantities(&report, &monomer).ok();
                    ScanRow {
                        mode: ScanMode::Fragments,
                        r,
                        theta: Some(theta),
                        converged: report.all_converged() && monomer.all_converged(),
                        report,
                        s_int: iq.map(|q| q.s_int),
                        e_c_int: iq.map(|q| q.e_c_int),
                        note: None,
                    }
                }
                Err(e) => ScanRow {
                    mode: ScanMode::Fragments,
                    r,
                    theta: Some(theta),
                    report: empty_report(cfg.basis, &cfg.methods),
                    s_int: None,
                    e_c_int: None,
                    converged: false,
                    note: Some(e.to_string()),
                },
            };
            rows.push(row);
        }
    }
    Ok(rows)
}

/// CI and entropies from externally supplied MO integrals. The reference
/// determinant expectation value stands in for the HF energy, which is exact
/// when the dump is in canonical HF orbitals.
pub fn fcidump_report(
    mo: &MoIntegrals,
    meta: &FcidumpMetadata,
    methods: &MethodSet,
) -> Result<EntropyReport> {
    if (meta.n_elec as i64 + meta.ms2 as i64) % 2 != 0 {
        return Err(Error::InvalidConfig(format!(
            "NELEC={} and MS2={} have inconsistent parity",
            meta.n_elec, meta.ms2
        )));
    }
    let n_alpha = ((meta.n_elec as i64 + meta.ms2 as i64) / 2) as usize;
    let n_beta = meta.n_elec - n_alpha;
    if n_alpha > mo.n() || n_beta > mo.n() {
        return Err(Error::InvalidConfig(format!(
            "{} electrons do not fit in NORB={}",
            meta.n_elec,
            mo.n()
        )));
    }
    let ci_mode = methods.ci_mode().ok_or_else(|| {
        Error::InvalidConfig("fcidump mode needs a CI method (FCI or CISD)".into())
    })?;

    let reference = Determinant::reference(n_alpha, n_beta);
    let e_ref = hamiltonian_element(&reference, &reference, mo)? + meta.core_energy;
    let dets = enumerate_determinants(mo.n(), n_alpha, n_beta, ci_mode, &reference);
    let wf = solve_ci(&dets, mo, meta.core_energy)?;
    let rdm = one_rdm(&wf);

    let mut report = empty_report(BasisName::Sto3g, methods);
    report.basis = "fcidump".into();
    report.e_hf_rhf = Some(e_ref);
    report.rhf_converged = Some(true);
    report.e_fci = Some(wf.energy);
    report.e_c_rhf = Some(correlation_energy(wf.energy, e_ref));
    report.s_nso = Some(nso_entropy(&rdm)?);
    if n_alpha == 1 && n_beta == 1 {
        let rho1 = rho1_cisd_closed_form(&wf)?;
        report.s_rho1_cisd = Some(von_neumann_entropy(&rho1.matrix())?);
        report.rho1_raw_trace = Some(rho1.raw_trace);
    }
    Ok(report)
}
