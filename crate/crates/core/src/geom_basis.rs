//! Molecular geometries and contracted s-type Gaussian basis sets.
//!
//! Internal units are the bohr and the hartree everywhere; ångström appears
//! only at the XYZ boundary.

use nalgebra::Vector3;

use crate::error::{Error, Result};

/// 1 Å in bohr.
pub const ANGSTROM_TO_BOHR: f64 = 1.8897259886;

const MIN_ATOM_SEPARATION: f64 = 1e-8;

const ELEMENTS: &[(&str, u32)] = &[
    ("H", 1),
    ("He", 2),
    ("Li", 3),
    ("Be", 4),
    ("B", 5),
    ("C", 6),
    ("N", 7),
    ("O", 8),
    ("F", 9),
    ("Ne", 10),
    ("Na", 11),
    ("Mg", 12),
    ("Al", 13),
    ("Si", 14),
    ("P", 15),
    ("S", 16),
    ("Cl", 17),
    ("Ar", 18),
];

fn element_number(symbol: &str) -> Option<u32> {
    ELEMENTS
        .iter()
        .find(|(s, _)| s.eq_ignore_ascii_case(symbol))
        .map(|&(_, z)| z)
}

fn element_symbol(z: u32) -> &'static str {
    ELEMENTS
        .iter()
        .find(|&&(_, n)| n == z)
        .map(|&(s, _)| s)
        .unwrap_or("X")
}

/// A nucleus: atomic number and position in bohr.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub atomic_number: u32,
    pub position: Vector3<f64>,
}

/// A molecular geometry with net charge and spin multiplicity.
///
/// Immutable after construction; `new` enforces the type invariants
/// (distinct nuclear positions, at least one electron, consistent
/// electron-count/multiplicity parity).
#[derive(Debug, Clone, PartialEq)]
pub struct Molecule {
    atoms: Vec<Atom>,
    net_charge: i32,
    multiplicity: u32,
}

impl Molecule {
    pub fn new(atoms: Vec<Atom>, net_charge: i32, multiplicity: u32) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMolecule("no atoms".into()));
        }
        for i in 0..atoms.len() {
            for j in (i + 1)..atoms.len() {
                let d = (atoms[i].position - atoms[j].position).norm();
                if d <= MIN_ATOM_SEPARATION {
                    return Err(Error::InvalidMolecule(format!(
                        "atoms {i} and {j} coincide (separation {d:.3e} bohr)"
                    )));
                }
            }
        }
        let z_total: i64 = atoms.iter().map(|a| a.atomic_number as i64).sum();
        let n_electrons = z_total - net_charge as i64;
        if n_electrons < 1 {
            return Err(Error::InvalidMolecule(format!(
                "electron count {n_electrons} < 1"
            )));
        }
        if multiplicity < 1 {
            return Err(Error::InvalidMolecule("multiplicity must be >= 1".into()));
        }
        let unpaired = multiplicity as i64 - 1;
        let paired = n_electrons - unpaired;
        if paired < 0 || paired % 2 != 0 {
            return Err(Error::InvalidMolecule(format!(
                "multiplicity {multiplicity} inconsistent with {n_electrons} electrons"
            )));
        }
        Ok(Self {
            atoms,
            net_charge,
            multiplicity,
        })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn net_charge(&self) -> i32 {
        self.net_charge
    }

    pub fn multiplicity(&self) -> u32 {
        self.multiplicity
    }

    pub fn n_electrons(&self) -> usize {
        let z: i64 = self.atoms.iter().map(|a| a.atomic_number as i64).sum();
        (z - self.net_charge as i64) as usize
    }

    /// Alpha-electron count under the aufbau spin assignment.
    pub fn n_alpha(&self) -> usize {
        (self.n_electrons() + self.multiplicity as usize - 1) / 2
    }

    pub fn n_beta(&self) -> usize {
        self.n_electrons() - self.n_alpha()
    }

    pub fn centroid(&self) -> Vector3<f64> {
        let sum: Vector3<f64> = self.atoms.iter().map(|a| a.position).sum();
        sum / self.atoms.len() as f64
    }

    /// A copy with every nucleus shifted by `dr` (bohr).
    pub fn translated(&self, dr: Vector3<f64>) -> Self {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom {
                atomic_number: a.atomic_number,
                position: a.position + dr,
            })
            .collect();
        Self {
            atoms,
            ..self.clone()
        }
    }

    /// A copy rotated by `theta_rad` about the z axis through `center`.
    pub fn rotated_about_z(&self, theta_rad: f64, center: Vector3<f64>) -> Self {
        let (s, c) = theta_rad.sin_cos();
        let atoms = self
            .atoms
            .iter()
            .map(|a| {
                let r = a.position - center;
                Atom {
                    atomic_number: a.atomic_number,
                    position: center + Vector3::new(c * r.x - s * r.y, s * r.x + c * r.y, r.z),
                }
            })
            .collect();
        Self {
            atoms,
            ..self.clone()
        }
    }

    /// Serialize to XYZ (coordinates in ångström).
    pub fn to_xyz(&self) -> String {
        let mut out = format!("{}\n\n", self.atoms.len());
        for a in &self.atoms {
            let p = a.position / ANGSTROM_TO_BOHR;
            out.push_str(&format!(
                "{} {:.14} {:.14} {:.14}\n",
                element_symbol(a.atomic_number),
                p.x,
                p.y,
                p.z
            ));
        }
        out
    }
}

/// Parse standard XYZ text: count line, comment line, then one
/// `element x y z` line per atom with coordinates in ångström.
///
/// The returned molecule is neutral; multiplicity defaults to singlet
/// for an even electron count and doublet otherwise.
pub fn parse_xyz(text: &str) -> Result<Molecule> {
    let mut lines = text.lines().enumerate();
    let (_, count_line) = lines.next().ok_or_else(|| Error::XyzParse {
        line: 1,
        msg: "empty input".into(),
    })?;
    let n_atoms: usize = count_line.trim().parse().map_err(|_| Error::XyzParse {
        line: 1,
        msg: format!("malformed atom count '{}'", count_line.trim()),
    })?;
    if n_atoms == 0 {
        return Err(Error::XyzParse {
            line: 1,
            msg: "atom count must be positive".into(),
        });
    }
    lines.next(); // comment line

    let mut atoms = Vec::with_capacity(n_atoms);
    for _ in 0..n_atoms {
        let (idx, line) = lines.next().ok_or_else(|| Error::XyzParse {
            line: n_atoms + 2,
            msg: format!("expected {n_atoms} atom lines, input ended early"),
        })?;
        let line_no = idx + 1;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::XyzParse {
                line: line_no,
                msg: format!("expected 'element x y z', got '{}'", line.trim()),
            });
        }
        let z = element_number(fields[0]).ok_or_else(|| Error::UnknownElement {
            symbol: fields[0].to_string(),
            line: line_no,
        })?;
        let mut xyz = [0.0; 3];
        for (k, f) in fields[1..].iter().enumerate() {
            xyz[k] = f.parse().map_err(|_| Error::XyzParse {
                line: line_no,
                msg: format!("cannot parse coordinate '{f}'"),
            })?;
        }
        atoms.push(Atom {
            atomic_number: z,
            position: Vector3::new(xyz[0], xyz[1], xyz[2]) * ANGSTROM_TO_BOHR,
        });
    }

    let z_total: i64 = atoms.iter().map(|a| a.atomic_number as i64).sum();
    let multiplicity = if z_total % 2 == 0 { 1 } else { 2 };
    Molecule::new(atoms, 0, multiplicity)
}

/// Σ_{i<j} Z_i Z_j / |R_i − R_j| in hartree.
pub fn nuclear_repulsion(mol: &Molecule) -> f64 {
    let atoms = mol.atoms();
    let mut e = 0.0;
    for i in 0..atoms.len() {
        for j in (i + 1)..atoms.len() {
            let zz = (atoms[i].atomic_number * atoms[j].atomic_number) as f64;
            e += zz / (atoms[i].position - atoms[j].position).norm();
        }
    }
    e
}

/// One of the three built-in s-only hydrogen basis sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisName {
    Sto3g,
    Pople321g,
    Pople631g,
}

impl BasisName {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sto-3g" | "sto3g" => Ok(Self::Sto3g),
            "3-21g" | "321g" => Ok(Self::Pople321g),
            "6-31g" | "631g" => Ok(Self::Pople631g),
            _ => Err(Error::UnknownBasis(s.to_string())),
        }
    }
}

impl std::fmt::Display for BasisName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Sto3g => write!(f, "STO-3G"),
            Self::Pople321g => write!(f, "3-21G"),
            Self::Pople631g => write!(f, "6-31G"),
        }
    }
}

/// One primitive s Gaussian exp(−α r²) with its contraction coefficient.
///
/// Coefficients here are final: primitive normalization and the overall
/// contraction rescaling are already folded in, so integral code can use
/// them without further bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive {
    pub exponent: f64,
    pub coefficient: f64,
}

/// A contracted s function attached to one atomic center.
#[derive(Debug, Clone, PartialEq)]
pub struct Shell {
    pub center: usize,
    pub primitives: Vec<Primitive>,
}

/// A basis set instantiated over a particular molecule.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisSetInstance {
    pub name: BasisName,
    pub shells: Vec<Shell>,
}

impl BasisSetInstance {
    /// Number of contracted functions.
    pub fn len(&self) -> usize {
        self.shells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shells.is_empty()
    }
}

// Published exponents/coefficients for hydrogen (Basis Set Exchange values);
// the listed coefficients are for normalized primitives.
const H_STO3G: &[(f64, f64)] = &[
    (3.425250914, 0.1543289673),
    (0.6239137298, 0.5353281423),
    (0.168855404, 0.4446345422),
];
const H_321G_INNER: &[(f64, f64)] = &[(5.447178, 0.156285), (0.824547, 0.904691)];
const H_321G_OUTER: &[(f64, f64)] = &[(0.183192, 1.0)];
const H_631G_INNER: &[(f64, f64)] = &[
    (18.73113696, 0.03349460434),
    (2.825394365, 0.2347269535),
    (0.6401216923, 0.8137573261),
];
const H_631G_OUTER: &[(f64, f64)] = &[(0.1612777588, 1.0)];

fn hydrogen_shells(name: BasisName) -> Vec<&'static [(f64, f64)]> {
    match name {
        BasisName::Sto3g => vec![H_STO3G],
        BasisName::Pople321g => vec![H_321G_INNER, H_321G_OUTER],
        BasisName::Pople631g => vec![H_631G_INNER, H_631G_OUTER],
    }
}

/// Normalize a shell: scale published coefficients by the primitive s-Gaussian
/// norms, then rescale so the contracted self-overlap is exactly 1.
fn normalized_shell(center: usize, data: &[(f64, f64)]) -> Shell {
    use std::f64::consts::PI;
    let mut prims: Vec<Primitive> = data
        .iter()
        .map(|&(alpha, c)| Primitive {
            exponent: alpha,
            coefficient: c * (2.0 * alpha / PI).powf(0.75),
        })
        .collect();
    let mut self_overlap = 0.0;
    for a in &prims {
        for b in &prims {
            self_overlap +=
                a.coefficient * b.coefficient * (PI / (a.exponent + b.exponent)).powf(1.5);
        }
    }
    let scale = self_overlap.sqrt().recip();
    for p in &mut prims {
        p.coefficient *= scale;
    }
    Shell {
        center,
        primitives: prims,
    }
}

/// Instantiate one of the built-in hydrogen bases over `mol`.
///
/// STO-3G yields one contracted function per atom; 3-21G and 6-31G yield
/// two (inner + outer). Non-hydrogen atoms are rejected.
pub fn build_basis(mol: &Molecule, name: BasisName) -> Result<BasisSetInstance> {
    let mut shells = Vec::new();
    for (i, atom) in mol.atoms().iter().enumerate() {
        if atom.atomic_number != 1 {
            return Err(Error::UnsupportedElement(atom.atomic_number));
        }
        for data in hydrogen_shells(name) {
            shells.push(normalized_shell(i, data));
        }
    }
    Ok(BasisSetInstance { name, shells })
}
