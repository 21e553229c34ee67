//! Unitaries: Haar sampling, dense application and local gates on qubit
//! registers.

use alloc::vec::Vec;

use crate::limits::check_unitary_dim;
use crate::matrix::SquareMatrix;
use crate::state::qubits_of;
use crate::{Error, Result, RngStream, StateVector, APPLY_TOL, C64};

/// A `d x d` unitary matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Unitary {
    matrix: SquareMatrix,
}

impl Unitary {
    /// Checks `U^dagger U = I` to within [`APPLY_TOL`] entrywise.
    pub fn new(matrix: SquareMatrix) -> Result<Self> {
        if matrix.dim() == 0 {
            return Err(Error::InvalidDimension(0));
        }
        check_unitary_dim(matrix.dim())?;
        let defect = matrix.unitarity_defect();
        if !(defect <= APPLY_TOL) {
            return Err(Error::NotUnitary(defect));
        }
        Ok(Unitary { matrix })
    }

    pub fn from_row_major(dim: usize, entries: Vec<C64>) -> Result<Self> {
        Unitary::new(SquareMatrix::from_row_major(dim, entries)?)
    }

    pub fn identity(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        check_unitary_dim(dim)?;
        Ok(Unitary {
            matrix: SquareMatrix::identity(dim),
        })
    }

    /// Pauli X.
    pub fn pauli_x() -> Self {
        let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        Unitary {
            matrix: SquareMatrix::from_fn(2, |r, c| if r != c { o } else { z }),
        }
    }

    /// `exp(-i theta Y / 2)`; takes `|0>` to `cos(theta/2)|0> + sin(theta/2)|1>`.
    pub fn rotation_y(theta: f64) -> Self {
        let (c, s) = (libm::cos(theta / 2.0), libm::sin(theta / 2.0));
        let m = SquareMatrix::from_fn(2, |r, col| match (r, col) {
            (0, 0) | (1, 1) => C64::new(c, 0.0),
            (0, 1) => C64::new(-s, 0.0),
            _ => C64::new(s, 0.0),
        });
        Unitary { matrix: m }
    }

    /// Permutation matrix sending basis vector `j` to `perm[j]`.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let d = perm.len();
        let mut m = SquareMatrix::zeros(d);
        for (j, &i) in perm.iter().enumerate() {
            if i >= d {
                return Err(Error::InvalidDimension(i));
            }
            m[(i, j)] = C64::new(1.0, 0.0);
        }
        Unitary::new(m)
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.matrix
    }

    pub fn entry(&self, r: usize, c: usize) -> C64 {
        self.matrix[(r, c)]
    }

    pub fn adjoint(&self) -> Unitary {
        Unitary {
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn compose(&self, rhs: &Unitary) -> Result<Unitary> {
        Ok(Unitary {
            matrix: self.matrix.matmul(&rhs.matrix)?,
        })
    }

    pub fn kron(&self, rhs: &Unitary) -> Result<Unitary> {
        let d = self.dim() * rhs.dim();
        check_unitary_dim(d)?;
        Ok(Unitary {
            matrix: self.matrix.kron(&rhs.matrix),
        })
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.matrix.unitarity_defect()
    }
}

/// Haar-random unitary.
///
/// A Ginibre matrix is QR-factorized with Householder reflections and the
/// columns of `Q` are multiplied by the phases of `diag(R)`, which makes the
/// factorization unique and the result exactly Haar distributed.
pub fn haar_unitary(d: usize, rng: &mut RngStream) -> Result<Unitary> {
    if d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    check_unitary_dim(d)?;
    let mut a = SquareMatrix::from_fn(d, |_, _| rng.complex_gaussian());
    let mut reflectors: Vec<Vec<C64>> = Vec::with_capacity(d);
    let mut r_phase: Vec<C64> = Vec::with_capacity(d);

    for k in 0..d {
        let norm = libm::sqrt((k..d).map(|i| a[(i, k)].norm_sqr()).sum::<f64>());
        let x0 = a[(k, k)];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let alpha = -phase * norm;
        let mut v: Vec<C64> = (k..d).map(|i| a[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 > 0.0 {
            let scale = 2.0 / vnorm2;
            for j in k..d {
                let s: C64 = v.iter().enumerate().map(|(i, vi)| vi.conj() * a[(k + i, j)]).sum();
                let s = s * scale;
                for (i, vi) in v.iter().enumerate() {
                    a[(k + i, j)] -= s * vi;
                }
            }
            r_phase.push(if norm > 0.0 { -phase } else { C64::new(1.0, 0.0) });
        } else {
            // column already zero below the diagonal
            r_phase.push(phase);
        }
        reflectors.push(v);
    }

    // Q = H_0 H_1 ... H_{d-1}, applied right-to-left to the identity
    let mut q = SquareMatrix::identity(d);
    for k in (0..d).rev() {
        let v = &reflectors[k];
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let scale = 2.0 / vnorm2;
        for j in 0..d {
            let s: C64 = v.iter().enumerate().map(|(i, vi)| vi.conj() * q[(k + i, j)]).sum();
            let s = s * scale;
            for (i, vi) in v.iter().enumerate() {
                q[(k + i, j)] -= s * vi;
            }
        }
    }
    for r in 0..d {
        for (c, ph) in r_phase.iter().enumerate() {
            q[(r, c)] *= ph;
        }
    }
    Ok(Unitary { matrix: q })
}

/// Dense `U |psi>`.
pub fn apply(u: &Unitary, psi: &StateVector) -> Result<StateVector> {
    let out = u.matrix.mul_vec(psi.amplitudes())?;
    Ok(StateVector::from_raw(out))
}

/// Apply a gate on `targets` of an `n`-qubit register without building the
/// full `2^n x 2^n` operator.
///
/// Qubit 0 is the most significant bit of the amplitude index, and
/// `targets[0]` is the most significant bit of the gate's local index.
pub fn apply_local(u: &Unitary, targets: &[usize], psi: &StateVector) -> Result<StateVector> {
    let mut amps = psi.amplitudes().to_vec();
    apply_local_in_place(u, targets, &mut amps)?;
    Ok(StateVector::from_raw(amps))
}

pub(crate) fn apply_local_in_place(u: &Unitary, targets: &[usize], amps: &mut [C64]) -> Result<()> {
    let n = qubits_of(amps.len())?;
    let m = targets.len();
    if u.dim() != 1 << m {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: 1 << m,
        });
    }
    let mut target_mask = 0usize;
    for &t in targets {
        if t >= n {
            return Err(Error::QubitOutOfRange { index: t, qubits: n });
        }
        let bit = 1 << (n - 1 - t);
        if target_mask & bit != 0 {
            return Err(Error::DuplicateTarget(t));
        }
        target_mask |= bit;
    }
    // offsets[a] = index bits contributed by local index a
    let offsets: Vec<usize> = (0..1usize << m)
        .map(|a| {
            targets.iter().enumerate().fold(0, |acc, (pos, &t)| {
                if a >> (m - 1 - pos) & 1 == 1 {
                    acc | 1 << (n - 1 - t)
                } else {
                    acc
                }
            })
        })
        .collect();
    let local = 1usize << m;
    let mut buf = alloc::vec![C64::new(0.0, 0.0); local];
    for base in 0..amps.len() {
        if base & target_mask != 0 {
            continue;
        }
        for (b, off) in buf.iter_mut().zip(&offsets) {
            *b = amps[base | off];
        }
        for (r, off) in offsets.iter().enumerate() {
            let row = u.matrix.row(r);
            amps[base | off] = row.iter().zip(&buf).map(|(x, y)| x * y).sum();
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{haar_state, overlap_sq};

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = RngStream::new(3, 0);
        for d in [1, 2, 3, 8, 31, 64] {
            let u = haar_unitary(d, &mut rng).unwrap();
            assert!(u.unitarity_defect() < 1e-9, "d={d}");
        }
    }

    #[test]
    fn haar_unitary_d1_is_phase() {
        let mut rng = RngStream::new(3, 1);
        let u = haar_unitary(1, &mut rng).unwrap();
        assert!((u.entry(0, 0).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn haar_unitary_errors() {
        let mut rng = RngStream::new(3, 1);
        assert_eq!(haar_unitary(0, &mut rng), Err(Error::InvalidDimension(0)));
        assert!(matches!(
            haar_unitary((1 << 11) + 1, &mut rng),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn haar_unitary_diagonal_phase_is_uniform() {
        // Without the phase correction U_00 of a 2x2 QR has a biased phase.
        let mut rng = RngStream::new(21, 0);
        let n = 20_000;
        let mut mean = C64::new(0.0, 0.0);
        for _ in 0..n {
            let u = haar_unitary(2, &mut rng).unwrap();
            let z = u.entry(0, 0);
            mean += z / z.norm();
        }
        assert!((mean / n as f64).norm() < 0.03);
    }

    #[test]
    fn apply_identity_and_permutation() {
        let mut rng = RngStream::new(4, 0);
        let psi = haar_state(4, &mut rng).unwrap();
        let id = Unitary::identity(4).unwrap();
        assert_eq!(apply(&id, &psi).unwrap(), psi);
        let swap = Unitary::permutation(&[1, 0, 2, 3]).unwrap();
        let e1 = StateVector::basis(4, 0).unwrap();
        assert_eq!(apply(&swap, &e1).unwrap(), StateVector::basis(4, 1).unwrap());
    }

    #[test]
    fn apply_preserves_norm() {
        let mut rng = RngStream::new(4, 1);
        let u = haar_unitary(50, &mut rng).unwrap();
        let psi = haar_state(50, &mut rng).unwrap();
        let out = apply(&u, &psi).unwrap();
        assert!((out.norm_sqr() - 1.0).abs() < 1e-9);
        let wrong = haar_state(7, &mut rng).unwrap();
        assert!(apply(&u, &wrong).is_err());
    }

    #[test]
    fn local_bit_flip() {
        let zero = StateVector::basis(4, 0).unwrap();
        let out = apply_local(&Unitary::pauli_x(), &[0], &zero).unwrap();
        assert_eq!(out, StateVector::basis(4, 2).unwrap());
        let out = apply_local(&Unitary::pauli_x(), &[1], &zero).unwrap();
        assert_eq!(out, StateVector::basis(4, 1).unwrap());
    }

    #[test]
    fn local_identity() {
        let mut rng = RngStream::new(8, 0);
        let psi = haar_state(8, &mut rng).unwrap();
        for t in 0..3 {
            let out = apply_local(&Unitary::identity(2).unwrap(), &[t], &psi).unwrap();
            assert_eq!(out, psi);
        }
    }

    #[test]
    fn local_errors() {
        let psi = StateVector::basis(8, 0).unwrap();
        let x = Unitary::pauli_x();
        assert_eq!(
            apply_local(&x, &[3], &psi),
            Err(Error::QubitOutOfRange { index: 3, qubits: 3 })
        );
        let two = Unitary::identity(4).unwrap();
        assert_eq!(apply_local(&two, &[1, 1], &psi), Err(Error::DuplicateTarget(1)));
        assert!(matches!(
            apply_local(&two, &[1], &psi),
            Err(Error::DimensionMismatch { .. })
        ));
        let odd = StateVector::basis(6, 0).unwrap();
        assert_eq!(apply_local(&x, &[0], &odd), Err(Error::NotPowerOfTwo(6)));
    }

    #[test]
    fn rotation_y_overlap() {
        let zero = StateVector::basis(2, 0).unwrap();
        let a = apply(&Unitary::rotation_y(0.3), &zero).unwrap();
        let b = apply(&Unitary::rotation_y(1.1), &zero).unwrap();
        let expect = libm::cos(0.4) * libm::cos(0.4);
        assert!((overlap_sq(&a, &b).unwrap() - expect).abs() < 1e-14);
    }
}
