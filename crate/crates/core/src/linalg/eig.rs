//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` and then applies
//! a real Givens rotation, so every step is a 2×2 unitary acting on rows and
//! columns `p, q`. Iteration stops once the off-diagonal Frobenius mass drops
//! below `1e-14 · ‖H‖_F`.

use num_complex::Complex64;

use super::{c, inner, ComplexMatrix, DEFAULT_TOL, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;
const OFF_DIAG_REL: f64 = 1e-14;

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Sorted descending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, aligned with `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }

    /// `V diag(λ) V†`
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        ComplexMatrix::from_fn(n, n, |i, j| {
            self.eigenvalues
                .iter()
                .enumerate()
                .map(|(k, &l)| v[(i, k)] * v[(j, k)].conj() * l)
                .sum()
        })
    }
}

pub fn hermitian_eig(h: &ComplexMatrix) -> Result<HermitianEigen> {
    hermitian_eig_with_tol(h, DEFAULT_TOL)
}

pub fn hermitian_eig_with_tol(h: &ComplexMatrix, tol: f64) -> Result<HermitianEigen> {
    h.ensure_hermitian(tol)?;
    let n = h.rows();
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    let threshold = OFF_DIAG_REL * scale;

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= threshold {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off });
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));

    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors: Vec<Vec<Complex64>> = order.iter().map(|&i| v.column(i)).collect();

    reorthonormalize_degenerate(&eigenvalues, &mut vectors, scale);
    for vec in &mut vectors {
        fix_phase(vec);
    }

    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors: ComplexMatrix::from_columns(&vectors),
    })
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(h: &ComplexMatrix) -> Result<f64> {
    let eig = hermitian_eig(h)?;
    Ok(*eig.eigenvalues.last().expect("matrix has at least one row"))
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let n = a.rows();
    let alpha = a[(p, p)].re;
    let beta = a[(q, q)].re;
    // phase making the pivot real: e^{-iθ} with a_pq = g e^{iθ}
    let ph = apq.conj() / g;

    let tau = (beta - alpha) / (2.0 * g);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let cs = 1.0 / (1.0 + t * t).sqrt();
    let sn = t * cs;

    // G restricted to (p, q): [[c, s], [-s·ph, c·ph]]
    let gpp = c(cs, 0.0);
    let gpq = c(sn, 0.0);
    let gqp = ph * (-sn);
    let gqq = ph * cs;

    // A ← A G
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * gpp + akq * gqp;
        a[(k, q)] = akp * gpq + akq * gqq;
    }
    // A ← G† A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
        a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = c(a[(p, p)].re, 0.0);
    a[(q, q)] = c(a[(q, q)].re, 0.0);

    // V ← V G
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * gpp + vkq * gqp;
        v[(k, q)] = vkp * gpq + vkq * gqq;
    }
}

/// Modified Gram-Schmidt inside each cluster of (nearly) equal eigenvalues.
fn reorthonormalize_degenerate(values: &[f64], vectors: &mut [Vec<Complex64>], scale: f64) {
    let gap = 1e-12 * scale.max(1.0);
    let mut start = 0;
    while start < values.len() {
        let mut end = start + 1;
        while end < values.len() && (values[end - 1] - values[end]).abs() <= gap {
            end += 1;
        }
        if end - start > 1 {
            for i in start..end {
                for j in start..i {
                    let (head, tail) = vectors.split_at_mut(i);
                    let proj = inner(&head[j], &tail[0]);
                    for (x, y) in tail[0].iter_mut().zip(&head[j]) {
                        *x -= proj * y;
                    }
                }
                let norm = super::vec_norm(&vectors[i]);
                for x in vectors[i].iter_mut() {
                    *x /= norm;
                }
            }
        }
        start = end;
    }
}

/// Makes the largest-magnitude component real and positive. Ties within
/// `1e-12` resolve to the lowest index.
fn fix_phase(v: &mut [Complex64]) {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let k = v
        .iter()
        .position(|z| z.norm() >= max - 1e-12)
        .expect("maximum exists");
    let ph = v[k].conj() / v[k].norm();
    for z in v.iter_mut() {
        *z *= ph;
    }
    v[k] = c(v[k].re, 0.0);
}
