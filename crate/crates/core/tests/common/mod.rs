//! Oracles shared by the integration tests. None of these go through the
//! library's own reduction or tensor-product code paths.

#![allow(dead_code)]

use quasiortho::decoherence::BranchSet;
use quasiortho::C64;

/// Dense state `sum_i c_i |i> (x) |E_i>` flattened with the system index slow,
/// then `rho_ij = sum_e psi[i, e] conj(psi[j, e])`.
pub fn dense_partial_trace(coefficients: &[C64], branches: &BranchSet) -> Vec<Vec<C64>> {
    let k = coefficients.len();
    let d = branches.branches()[0].dim();
    let mut full = vec![C64::new(0.0, 0.0); k * d];
    for (i, (c, b)) in coefficients.iter().zip(branches.branches()).enumerate() {
        for (e, a) in b.amplitudes().iter().enumerate() {
            full[i * d + e] += c * a;
        }
    }
    let mut rho = vec![vec![C64::new(0.0, 0.0); k]; k];
    for i in 0..k {
        for j in 0..k {
            for e in 0..d {
                rho[i][j] += full[i * d + e] * full[j * d + e].conj();
            }
        }
    }
    rho
}

pub fn binomial(n: u64, k: u64) -> u64 {
    (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
}

/// Two-qubit dense operator on an `n`-qubit register built from explicit
/// Kronecker products: `U = sum_{a,b} U_ab |a><b|` with each `|a_t><b_t|`
/// placed on its target and identities elsewhere.
pub fn dense_embedding(u: &quasiortho::Unitary, targets: &[usize], n: usize) -> Vec<Vec<C64>> {
    let m = targets.len();
    let dim = 1usize << n;
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let mut total = vec![vec![zero; dim]; dim];
    for a in 0..1usize << m {
        for b in 0..1usize << m {
            let coeff = u.entry(a, b);
            if coeff == zero {
                continue;
            }
            let mut op = vec![vec![one]];
            for q in 0..n {
                let factor = match targets.iter().position(|&t| t == q) {
                    Some(pos) => {
                        let ab = (a >> (m - 1 - pos)) & 1;
                        let bb = (b >> (m - 1 - pos)) & 1;
                        let mut f = vec![vec![zero; 2]; 2];
                        f[ab][bb] = one;
                        f
                    }
                    None => vec![vec![one, zero], vec![zero, one]],
                };
                op = kron(&op, &factor);
            }
            for r in 0..dim {
                for c in 0..dim {
                    total[r][c] += coeff * op[r][c];
                }
            }
        }
    }
    total
}

fn kron(a: &[Vec<C64>], b: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let (p, q) = (a.len(), b.len());
    let mut out = vec![vec![C64::new(0.0, 0.0); p * q]; p * q];
    for r in 0..p * q {
        for c in 0..p * q {
            out[r][c] = a[r / q][c / q] * b[r % q][c % q];
        }
    }
    out
}

pub fn mat_vec(m: &[Vec<C64>], v: &[C64]) -> Vec<C64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, x)| a * x).sum())
        .collect()
}
