//! System-environment couplings and the unitaries they generate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eig, kron, pauli_basis, swap_operator, ComplexMatrix, DEFAULT_TOL, ONE};

/// How the composite unitary `U(t)` is obtained. `t` is always the value
/// passed on the command line; for the qubit coupling it is `2ωt`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Interaction {
    /// `∏_j [cos(ωt) 1⊗1 − i sin(ωt) σ^j⊗σ^j]` on two qubits.
    QubitHeisenberg,
    /// `exp(−i H t)`
    Hamiltonian { matrix: ComplexMatrix },
    /// A fixed unitary, independent of `t`.
    Unitary { matrix: ComplexMatrix },
    /// `exp(−i t SWAP)`, needs equal system and environment dimensions.
    Swap,
    /// `exp(−i t X⊗X)` with `X = shift + shift†`.
    XCoupling,
}

impl Interaction {
    /// Default coupling for a system of dimension `n` and environment `dim_e`.
    pub fn default_for(n: usize, dim_e: usize) -> Self {
        if n == dim_e {
            Interaction::Swap
        } else {
            Interaction::XCoupling
        }
    }

    pub fn unitary(&self, t: f64, n: usize, dim_e: usize) -> Result<ComplexMatrix> {
        if !t.is_finite() {
            return Err(Error::NonFinite);
        }
        let side = n * dim_e;
        let u = match self {
            Interaction::QubitHeisenberg => {
                if (n, dim_e) != (2, 2) {
                    return Err(Error::InvalidSpec(
                        "qubit-heisenberg coupling needs a qubit system and a qubit environment".into(),
                    ));
                }
                qubit_unitary(t / 2.0)
            }
            Interaction::Hamiltonian { matrix } => {
                check_side(matrix, side)?;
                expm_hermitian(matrix, t)?
            }
            Interaction::Unitary { matrix } => {
                check_side(matrix, side)?;
                matrix.ensure_unitary(DEFAULT_TOL)?;
                matrix.clone()
            }
            Interaction::Swap => {
                if n != dim_e {
                    return Err(Error::InvalidSpec("swap coupling needs equal system and environment dimensions".into()));
                }
                expm_hermitian(&swap_operator(n), t)?
            }
            Interaction::XCoupling => {
                let h = kron(&shift_sum(n), &shift_sum(dim_e));
                expm_hermitian(&h, t)?
            }
        };
        Ok(u)
    }
}

fn check_side(m: &ComplexMatrix, side: usize) -> Result<()> {
    if m.dims() != (side, side) {
        return Err(Error::Dimension(format!(
            "interaction matrix is {}x{}, composite space has dimension {side}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// `shift + shift†` on `C^n`; `σ_x` for a qubit, zero for `n = 1`.
fn shift_sum(n: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    if n < 2 {
        return m;
    }
    for k in 0..n {
        let j = (k + 1) % n;
        m[(j, k)] += ONE;
        m[(k, j)] += ONE;
    }
    if n == 2 {
        m = m.scale_re(0.5);
    }
    m
}

/// `exp(−i H t)` for Hermitian `H`.
pub fn expm_hermitian(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(h)?;
    let v = &eig.eigenvectors;
    let n = h.rows();
    let phases: Vec<_> = eig.eigenvalues.iter().map(|&l| c(0.0, -l * t).exp()).collect();
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        phases
            .iter()
            .enumerate()
            .map(|(k, ph)| v[(i, k)] * v[(j, k)].conj() * ph)
            .sum()
    }))
}

/// Product form `∏_{j=1..3} [cos(ωt) 1⊗1 − i sin(ωt) σ^j⊗σ^j]`.
pub fn qubit_unitary(omega_t: f64) -> ComplexMatrix {
    let (cs, sn) = (omega_t.cos(), omega_t.sin());
    let paulis = pauli_basis();
    let mut u = ComplexMatrix::identity(4);
    for s in &paulis[1..] {
        let factor = &ComplexMatrix::identity(4).scale_re(cs) + &kron(s, s).scale(c(0.0, -sn));
        u = u.dot(&factor);
    }
    u
}

/// Compact form `C 1⊗1 − (i/2) S Σ_{j=0..3} σ^j⊗σ^j` with `C = cos 2ωt`,
/// `S = sin 2ωt`; equals [`qubit_unitary`] up to a global phase.
pub fn qubit_unitary_compact(omega_t: f64) -> ComplexMatrix {
    let (cs, sn) = ((2.0 * omega_t).cos(), (2.0 * omega_t).sin());
    let mut u = ComplexMatrix::identity(4).scale_re(cs);
    for s in pauli_basis() {
        u += &kron(&s, &s).scale(c(0.0, -0.5 * sn));
    }
    u
}

/// Multiplies by the conjugate phase of the largest-magnitude entry (first
/// one on ties within `1e-12`).
pub fn phase_normalized(m: &ComplexMatrix) -> ComplexMatrix {
    let max = m.max_abs();
    if max == 0.0 {
        return m.clone();
    }
    let z = m
        .data()
        .iter()
        .find(|z| z.norm() >= max - 1e-12)
        .copied()
        .expect("maximum exists");
    m.scale(z.conj() / z.norm())
}

/// `‖phase_normalized(a) − phase_normalized(b)‖_F`
pub fn phase_aligned_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    crate::linalg::frobenius_distance(&phase_normalized(a), &phase_normalized(b))
}
