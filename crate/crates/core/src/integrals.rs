//! Closed-form one- and two-electron integrals over contracted s Gaussians.
//!
//! Everything follows from the Gaussian product theorem plus the F0 Boys
//! function for Coulomb-type integrals. The ERI tensor is stored densely in
//! chemists' notation (ab|cd).

use std::f64::consts::PI;

use nalgebra::{DMatrix, Vector3};

use crate::error::{Error, Result};
use crate::geom_basis::{nuclear_repulsion, BasisSetInstance, Molecule, Shell};

/// Series branch threshold for F0; below this the erf form is 0/0-prone.
const BOYS_SERIES_CUTOFF: f64 = 1e-6;

/// Boys function F0(x) = (1/2)√(π/x)·erf(√x), with F0(0) = 1.
///
/// For x < 1e-6 the two-term series 1 − x/3 is used; its error at the
/// branch point is below 1e-13.
pub fn boys_f0(x: f64) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::NegativeBoysArgument(x));
    }
    if x < BOYS_SERIES_CUTOFF {
        Ok(1.0 - x / 3.0)
    } else {
        Ok(0.5 * (PI / x).sqrt() * libm::erf(x.sqrt()))
    }
}

fn f0(x: f64) -> f64 {
    if x < BOYS_SERIES_CUTOFF {
        1.0 - x / 3.0
    } else {
        0.5 * (PI / x).sqrt() * libm::erf(x.sqrt())
    }
}

/// Overlap of two unnormalized primitives exp(−a(r−A)²), exp(−b(r−B)²).
pub fn overlap_prim(a: f64, ra: &Vector3<f64>, b: f64, rb: &Vector3<f64>) -> f64 {
    let p = a + b;
    let mu = a * b / p;
    (PI / p).powf(1.5) * (-mu * (ra - rb).norm_squared()).exp()
}

/// Kinetic-energy integral between two primitives.
pub fn kinetic_prim(a: f64, ra: &Vector3<f64>, b: f64, rb: &Vector3<f64>) -> f64 {
    let p = a + b;
    let mu = a * b / p;
    let r2 = (ra - rb).norm_squared();
    mu * (3.0 - 2.0 * mu * r2) * overlap_prim(a, ra, b, rb)
}

/// Attraction of the primitive pair to a unit positive charge at `rc`
/// (multiply by −Z for a nucleus).
pub fn nuclear_prim(
    a: f64,
    ra: &Vector3<f64>,
    b: f64,
    rb: &Vector3<f64>,
    rc: &Vector3<f64>,
) -> f64 {
    let p = a + b;
    let mu = a * b / p;
    let rp = (ra * a + rb * b) / p;
    let r2 = (ra - rb).norm_squared();
    2.0 * PI / p * (-mu * r2).exp() * f0(p * (rp - rc).norm_squared())
}

/// Primitive (ab|cd) in chemists' notation.
pub fn eri_prim(
    a: f64,
    ra: &Vector3<f64>,
    b: f64,
    rb: &Vector3<f64>,
    c: f64,
    rc: &Vector3<f64>,
    d: f64,
    rd: &Vector3<f64>,
) -> f64 {
    let p = a + b;
    let q = c + d;
    let rp = (ra * a + rb * b) / p;
    let rq = (rc * c + rd * d) / q;
    let kab = (-(a * b / p) * (ra - rb).norm_squared()).exp();
    let kcd = (-(c * d / q) * (rc - rd).norm_squared()).exp();
    let t = p * q / (p + q) * (rp - rq).norm_squared();
    2.0 * PI.powf(2.5) / (p * q * (p + q).sqrt()) * kab * kcd * f0(t)
}

/// Dense n⁴ ERI tensor in chemists' notation.
#[derive(Debug, Clone, PartialEq)]
pub struct EriTensor {
    n: usize,
    data: Vec<f64>,
}

impl EriTensor {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n * n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.data[((a * self.n + b) * self.n + c) * self.n + d]
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize, c: usize, d: usize, v: f64) {
        self.data[((a * self.n + b) * self.n + c) * self.n + d] = v;
    }
}

/// All AO-basis operator matrices for one geometry/basis pair.
#[derive(Debug, Clone)]
pub struct IntegralSet {
    pub n: usize,
    pub overlap: DMatrix<f64>,
    pub kinetic: DMatrix<f64>,
    pub nuclear_attraction: DMatrix<f64>,
    pub eri: EriTensor,
    /// Nuclear repulsion energy of the underlying geometry.
    pub core_energy: f64,
}

impl IntegralSet {
    pub fn core_hamiltonian(&self) -> DMatrix<f64> {
        &self.kinetic + &self.nuclear_attraction
    }
}

fn contracted_pair(
    sa: &Shell,
    sb: &Shell,
    centers: &[Vector3<f64>],
    prim: impl Fn(f64, &Vector3<f64>, f64, &Vector3<f64>) -> f64,
) -> f64 {
    let ra = &centers[sa.center];
    let rb = &centers[sb.center];
    let mut total = 0.0;
    for pa in &sa.primitives {
        for pb in &sb.primitives {
            total += pa.coefficient * pb.coefficient * prim(pa.exponent, ra, pb.exponent, rb);
        }
    }
    total
}

/// Compute overlap, kinetic, nuclear-attraction and ERI integrals over the
/// contracted basis, plus the nuclear repulsion energy.
pub fn build_integrals(mol: &Molecule, basis: &BasisSetInstance) -> IntegralSet {
    let centers: Vec<Vector3<f64>> = mol.atoms().iter().map(|a| a.position).collect();
    let n = basis.len();
    let shells = &basis.shells;

    let mut overlap = DMatrix::zeros(n, n);
    let mut kinetic = DMatrix::zeros(n, n);
    let mut nuclear = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let s = contracted_pair(&shells[i], &shells[j], &centers, overlap_prim);
            let t = contracted_pair(&shells[i], &shells[j], &centers, kinetic_prim);
            let mut v = 0.0;
            for atom in mol.atoms() {
                let z = atom.atomic_number as f64;
                v -= z * contracted_pair(&shells[i], &shells[j], &centers, |a, ra, b, rb| {
                    nuclear_prim(a, ra, b, rb, &atom.position)
                });
            }
            overlap[(i, j)] = s;
            overlap[(j, i)] = s;
            kinetic[(i, j)] = t;
            kinetic[(j, i)] = t;
            nuclear[(i, j)] = v;
            nuclear[(j, i)] = v;
        }
    }

    // Unique (ab|cd) with ab ≤ cd as compound pairs, mirrored over the
    // 8-fold permutational symmetry.
    let mut eri = EriTensor::zeros(n);
    for a in 0..n {
        for b in 0..=a {
            for c in 0..=a {
                let d_max = if c == a { b } else { c };
                for d in 0..=d_max {
                    let mut val = 0.0;
                    for pa in &shells[a].primitives {
                        for pb in &shells[b].primitives {
                            for pc in &shells[c].primitives {
                                for pd in &shells[d].primitives {
                                    val += pa.coefficient
                                        * pb.coefficient
                                        * pc.coefficient
                                        * pd.coefficient
                                        * eri_prim(
                                            pa.exponent,
                                            &centers[shells[a].center],
                                            pb.exponent,
                                            &centers[shells[b].center],
                                            pc.exponent,
                                            &centers[shells[c].center],
                                            pd.exponent,
                                            &centers[shells[d].center],
                                        );
                                }
                            }
                        }
                    }
                    for &(p, q, r, s) in &[
                        (a, b, c, d),
                        (b, a, c, d),
                        (a, b, d, c),
                        (b, a, d, c),
                        (c, d, a, b),
                        (d, c, a, b),
                        (c, d, b, a),
                        (d, c, b, a),
                    ] {
                        eri.set(p, q, r, s, val);
                    }
                }
            }
        }
    }

    IntegralSet {
        n,
        overlap,
        kinetic,
        nuclear_attraction: nuclear,
        eri,
        core_energy: nuclear_repulsion(mol),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom_basis::{build_basis, parse_xyz, Atom, BasisName};

    fn h2(r: f64) -> Molecule {
        Molecule::new(
            vec![
                Atom {
                    atomic_number: 1,
                    position: Vector3::zeros(),
                },
                Atom {
                    atomic_number: 1,
                    position: Vector3::new(0.0, 0.0, r),
                },
            ],
            0,
            1,
        )
        .unwrap()
    }

    #[test]
    fn boys_limit_and_series() {
        assert_eq!(boys_f0(0.0).unwrap(), 1.0);
        // continuity across the series/erf branch point
        let lo = boys_f0(BOYS_SERIES_CUTOFF * 0.999).unwrap();
        let hi = boys_f0(BOYS_SERIES_CUTOFF * 1.001).unwrap();
        assert!((lo - hi).abs() < 1e-9);
        assert!(boys_f0(-1e-12).is_err());
    }

    #[test]
    fn boys_reference_values() {
        // frozen from adaptive quadrature of ∫₀¹ exp(−x t²) dt
        assert!((boys_f0(1.0).unwrap() - 0.746824132812427).abs() < 1e-12);
        assert!((boys_f0(30.0).unwrap() - 0.161802159379609).abs() < 1e-12);
    }

    #[test]
    fn h2_sto3g_overlap() {
        let mol = h2(1.4);
        let basis = build_basis(&mol, BasisName::Sto3g).unwrap();
        let ints = build_integrals(&mol, &basis);
        assert!((ints.overlap[(0, 0)] - 1.0).abs() < 1e-12);
        assert!((ints.overlap[(0, 1)] - 0.6593).abs() < 1e-4);
        assert!((ints.core_energy - 1.0 / 1.4).abs() < 1e-13);
    }

    #[test]
    fn single_function_overlap_is_one() {
        let mol = parse_xyz("1\n\nH 0 0 0\n").unwrap();
        let basis = build_basis(&mol, BasisName::Sto3g).unwrap();
        let ints = build_integrals(&mol, &basis);
        assert_eq!(ints.n, 1);
        assert!((ints.overlap[(0, 0)] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distant_atoms_have_vanishing_overlap() {
        let mol = h2(50.0);
        let basis = build_basis(&mol, BasisName::Sto3g).unwrap();
        let ints = build_integrals(&mol, &basis);
        assert!(ints.overlap[(0, 1)].abs() < 1e-12);
    }

    #[test]
    fn matrices_symmetric_and_overlap_positive_definite() {
        let mol = h2(1.4);
        let basis = build_basis(&mol, BasisName::Pople321g).unwrap();
        let ints = build_integrals(&mol, &basis);
        for m in [&ints.overlap, &ints.kinetic, &ints.nuclear_attraction] {
            assert!((m - m.transpose()).abs().max() < 1e-12);
        }
        let eigs = ints.overlap.clone().symmetric_eigenvalues();
        assert!(eigs.iter().all(|&l| l > 0.0));
        for i in 0..ints.n {
            assert!((ints.overlap[(i, i)] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn eri_eightfold_symmetry() {
        let mol = h2(1.7);
        let basis = build_basis(&mol, BasisName::Pople321g).unwrap();
        let ints = build_integrals(&mol, &basis);
        let n = ints.n;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let v = ints.eri.get(a, b, c, d);
                        for w in [
                            ints.eri.get(b, a, c, d),
                            ints.eri.get(a, b, d, c),
                            ints.eri.get(b, a, d, c),
                            ints.eri.get(c, d, a, b),
                            ints.eri.get(d, c, a, b),
                            ints.eri.get(c, d, b, a),
                            ints.eri.get(d, c, b, a),
                        ] {
                            assert!((v - w).abs() < 1e-12);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn integrals_invariant_under_rigid_translation() {
        let mol = h2(1.4);
        let shifted = mol.translated(Vector3::new(0.3, -1.1, 2.5));
        let b0 = build_basis(&mol, BasisName::Pople321g).unwrap();
        let b1 = build_basis(&shifted, BasisName::Pople321g).unwrap();
        let i0 = build_integrals(&mol, &b0);
        let i1 = build_integrals(&shifted, &b1);
        assert!((&i0.overlap - &i1.overlap).abs().max() < 1e-12);
        assert!((&i0.kinetic - &i1.kinetic).abs().max() < 1e-12);
        assert!(
            (&i0.nuclear_attraction - &i1.nuclear_attraction)
                .abs()
                .max()
                < 1e-12
        );
        for a in 0..i0.n {
            for b in 0..i0.n {
                for c in 0..i0.n {
                    for d in 0..i0.n {
                        assert!((i0.eri.get(a, b, c, d) - i1.eri.get(a, b, c, d)).abs() < 1e-12);
                    }
                }
            }
        }
    }
}
