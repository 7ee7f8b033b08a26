//! Seeded random generators for matrices, states and class specifications.
//!
//! Used by the property suites and the acceptance harness; every generator
//! takes an explicit RNG so runs are reproducible.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::linalg::{basis_vector, c, inner, normalize, vec_norm, CVector, ComplexMatrix};
use crate::states::{CorrelatedClassSpec, DensityMatrix, NonOrthogonalDecomposition, OrthogonalDecomposition};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn ginibre(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn state_vector(n: usize, rng: &mut impl Rng) -> CVector {
    loop {
        let v: CVector = (0..n).map(|_| gaussian(rng)).collect();
        if let Some(u) = normalize(&v) {
            return u;
        }
    }
}

/// Haar-random unitary: Gram-Schmidt on a Ginibre matrix.
pub fn unitary(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let cols = orthonormal_columns(n, n, rng);
    ComplexMatrix::from_columns(&cols)
}

/// `rows × cols` isometry (`V†V = 1`), `cols ≤ rows`.
pub fn isometry(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    assert!(cols <= rows, "isometry needs cols <= rows");
    ComplexMatrix::from_columns(&orthonormal_columns(rows, cols, rng))
}

fn orthonormal_columns(dim: usize, count: usize, rng: &mut impl Rng) -> Vec<CVector> {
    let mut out: Vec<CVector> = Vec::with_capacity(count);
    while out.len() < count {
        let mut v: CVector = (0..dim).map(|_| gaussian(rng)).collect();
        for _ in 0..2 {
            for u in &out {
                let ov = inner(u, &v);
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= ov * y;
                }
            }
        }
        if vec_norm(&v) > 1e-8 {
            out.push(normalize(&v).expect("nonzero"));
        }
    }
    out
}

pub fn hermitian(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ginibre(n, n, rng).hermitian_part()
}

/// Random density matrix of the given rank, `G G† / tr`.
pub fn density_matrix(n: usize, rank: usize, rng: &mut impl Rng) -> DensityMatrix {
    let g = ginibre(n, rank.clamp(1, n), rng);
    let m = g.dot(&g.adjoint());
    let tr = m.trace().re;
    DensityMatrix::new(m.scale_re(1.0 / tr).hermitian_part()).expect("valid by construction")
}

/// Uniform point on the probability simplex.
pub fn probabilities(k: usize, rng: &mut impl Rng) -> Vec<f64> {
    let e: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(Exp1) + 1e-3).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

/// Random orthogonal decomposition supported on the given orthonormal vectors.
pub fn orthogonal_decomposition(vectors: Vec<CVector>, rng: &mut impl Rng) -> OrthogonalDecomposition {
    let w = probabilities(vectors.len(), rng);
    OrthogonalDecomposition::new(w, vectors).expect("valid by construction")
}

/// Non-orthogonal decomposition of the same operator, obtained by running
/// the GHJW relation backwards: pick an `r × m` isometry `V` and set
/// `√μ_k ψ_k = Σ_j V_kj √w_j φ_j`.
pub fn nonorthogonal_from(ortho: &OrthogonalDecomposition, r: usize, rng: &mut impl Rng) -> NonOrthogonalDecomposition {
    let m = ortho.len();
    assert!(r >= m, "need r >= number of orthogonal components");
    let v = isometry(r, m, rng);
    let n = ortho.dim();
    let mut weights = Vec::with_capacity(r);
    let mut vectors = Vec::with_capacity(r);
    for k in 0..r {
        let mut t = vec![c(0.0, 0.0); n];
        for j in 0..m {
            let coef = v[(k, j)] * ortho.weights()[j].sqrt();
            for (x, y) in t.iter_mut().zip(&ortho.vectors()[j]) {
                *x += coef * y;
            }
        }
        let mu = vec_norm(&t).powi(2);
        weights.push(mu);
        vectors.push(normalize(&t).unwrap_or_else(|| basis_vector(n, 0)));
    }
    NonOrthogonalDecomposition::new(weights, vectors).expect("valid by construction")
}

/// Shape of a random class specification.
#[derive(Debug, Clone, Copy)]
pub struct SpecShape {
    pub n: usize,
    pub d: usize,
    /// Number of orthogonal components of `W`; at most `n − d + 1`.
    pub m: usize,
    /// Number of non-orthogonal components (class II); `0` builds class I.
    pub r: usize,
    pub dim_e: usize,
}

pub fn class_spec(shape: SpecShape, rng: &mut impl Rng) -> CorrelatedClassSpec {
    let SpecShape { n, d, m, r, dim_e } = shape;
    assert!(d >= 1 && d <= n && m >= 1 && m <= n - d + 1);
    let basis = unitary(n, rng);
    let cols: Vec<CVector> = (0..n).map(|j| basis.column(j)).collect();
    let phi = cols[..d - 1].to_vec();
    let w_vectors = cols[d - 1..d - 1 + m].to_vec();
    let ortho = orthogonal_decomposition(w_vectors, rng);
    let p = probabilities(d, rng);
    let rho_env: Vec<DensityMatrix> = (0..d - 1)
        .map(|_| density_matrix(dim_e, dim_e, rng))
        .collect();
    if r == 0 {
        let varrho = (0..m).map(|_| density_matrix(dim_e, dim_e, rng)).collect();
        CorrelatedClassSpec::class_i(p, phi, ortho, rho_env, varrho).expect("valid by construction")
    } else {
        let psi = nonorthogonal_from(&ortho, r.max(m), rng);
        let varrho = (0..psi.len()).map(|_| density_matrix(dim_e, dim_e, rng)).collect();
        CorrelatedClassSpec::new(p, phi, ortho, Some(psi), rho_env, varrho).expect("valid by construction")
    }
}
