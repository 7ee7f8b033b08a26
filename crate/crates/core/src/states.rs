//! Density operators, correlated state classes and the GHJW link.
//!
//! A [`CorrelatedClassSpec`] fixes the system states `{Π_φ1, …, Π_φ(d−1), W}`
//! together with environment states. Without a non-orthogonal block it
//! describes class I,
//!
//! `ρ_SE = Σ_{i<d} p_i Π_φi ⊗ ρ^i_E + p_d Σ_j w_j Π_φj ⊗ ϱ^j_E`,
//!
//! and with one (`W = Σ_k μ_k |ψ_k⟩⟨ψ_k|`) it describes class II,
//!
//! `ρ_SE = Σ_{i<d} p_i Π_φi ⊗ ρ^i_E + p_d Σ_k μ_k Π_ψk ⊗ ϱ^k_E`.
//!
//! Both classes share the compatibility domain `Σ_{i<d} p_i Π_φi + p_d W`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    complete_basis, frobenius_distance, gram, hermitian_eig_with_tol, inner, kron, vec_norm, CVector,
    ComplexMatrix, DEFAULT_TOL,
};

/// Eigenvalues below this are treated as zero when decomposing `W`.
pub const ZERO_WEIGHT: f64 = 1e-12;

const SUM_TOL: f64 = 1e-12;

/// Validated statistical operator.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        Self::with_tol(mat, DEFAULT_TOL)
    }

    /// Checks Hermiticity (relative), unit trace and `λ_min ≥ −tol`.
    pub fn with_tol(mat: ComplexMatrix, tol: f64) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::InvalidState(format!(
                "density matrix must be square, got {}x{}",
                mat.rows(),
                mat.cols()
            )));
        }
        mat.ensure_hermitian(tol)
            .map_err(|e| Error::InvalidState(e.to_string()))?;
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidState(format!(
                "trace is {:.12}{:+.3e}i, expected 1",
                tr.re, tr.im
            )));
        }
        let eig = hermitian_eig_with_tol(&mat, tol)?;
        let min = *eig.eigenvalues.last().expect("nonempty");
        if min < -tol {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite: minimum eigenvalue {min:.3e}"
            )));
        }
        Ok(DensityMatrix { mat })
    }

    pub fn pure(v: &[num_complex::Complex64]) -> Result<Self> {
        Self::new(ComplexMatrix::projector(v))
    }

    pub fn maximally_mixed(n: usize) -> Self {
        DensityMatrix {
            mat: ComplexMatrix::identity(n).scale_re(1.0 / n as f64),
        }
    }

    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::diag(probs))
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }
}

impl TryFrom<ComplexMatrix> for DensityMatrix {
    type Error = Error;

    fn try_from(m: ComplexMatrix) -> Result<Self> {
        DensityMatrix::new(m)
    }
}

impl From<DensityMatrix> for ComplexMatrix {
    fn from(d: DensityMatrix) -> Self {
        d.mat
    }
}

impl AsRef<ComplexMatrix> for DensityMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.mat
    }
}

impl std::fmt::Debug for DensityMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DensityMatrix({:?})", self.mat)
    }
}

fn mixture(weights: &[f64], vectors: &[CVector], n: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(n, n);
    for (w, v) in weights.iter().zip(vectors) {
        out += &ComplexMatrix::projector(v).scale_re(*w);
    }
    out
}

fn check_probabilities(p: &[f64], what: &str) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidProbabilities(format!("{what}: empty")));
    }
    if let Some(x) = p.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return Err(Error::InvalidProbabilities(format!("{what}: entry {x} is negative or not finite")));
    }
    let s: f64 = p.iter().sum();
    if (s - 1.0).abs() > SUM_TOL * p.len().max(1) as f64 {
        return Err(Error::InvalidProbabilities(format!("{what}: sum is {s}, expected 1")));
    }
    Ok(())
}

fn common_dim(vectors: &[CVector], what: &str) -> Result<usize> {
    let n = vectors
        .first()
        .map(Vec::len)
        .ok_or_else(|| Error::InvalidDecomposition(format!("{what}: no vectors")))?;
    if n == 0 || vectors.iter().any(|v| v.len() != n) {
        return Err(Error::InvalidDecomposition(format!("{what}: vectors of unequal length")));
    }
    Ok(n)
}

/// `W = Σ_j w_j |φ_j⟩⟨φ_j|` with orthonormal `φ_j` and `w_j > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalDecomposition {
    weights: Vec<f64>,
    vectors: Vec<CVector>,
}

impl OrthogonalDecomposition {
    pub fn new(weights: Vec<f64>, vectors: Vec<CVector>) -> Result<Self> {
        if weights.len() != vectors.len() {
            return Err(Error::InvalidDecomposition(format!(
                "{} weights for {} vectors",
                weights.len(),
                vectors.len()
            )));
        }
        common_dim(&vectors, "orthogonal decomposition")?;
        check_probabilities(&weights, "orthogonal weights")?;
        if weights.iter().any(|&w| w <= 0.0) {
            return Err(Error::InvalidDecomposition("orthogonal weights must be strictly positive".into()));
        }
        let g = gram(&vectors);
        let defect = frobenius_distance(&g, &ComplexMatrix::identity(vectors.len()))?;
        if defect > DEFAULT_TOL {
            return Err(Error::InvalidDecomposition(format!(
                "vectors are not orthonormal (Gram defect {defect:.3e})"
            )));
        }
        Ok(OrthogonalDecomposition { weights, vectors })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn assemble(&self) -> ComplexMatrix {
        mixture(&self.weights, &self.vectors, self.dim())
    }
}

/// `W = Σ_k μ_k |ψ_k⟩⟨ψ_k|` with normalized, generally non-orthogonal `ψ_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct NonOrthogonalDecomposition {
    weights: Vec<f64>,
    vectors: Vec<CVector>,
}

impl NonOrthogonalDecomposition {
    pub fn new(weights: Vec<f64>, vectors: Vec<CVector>) -> Result<Self> {
        if weights.len() != vectors.len() {
            return Err(Error::InvalidDecomposition(format!(
                "{} weights for {} vectors",
                weights.len(),
                vectors.len()
            )));
        }
        common_dim(&vectors, "non-orthogonal decomposition")?;
        check_probabilities(&weights, "non-orthogonal weights")?;
        if let Some(v) = vectors.iter().find(|v| (vec_norm(v) - 1.0).abs() > SUM_TOL) {
            return Err(Error::InvalidDecomposition(format!(
                "vector has norm {}, expected 1",
                vec_norm(v)
            )));
        }
        Ok(NonOrthogonalDecomposition { weights, vectors })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn assemble(&self) -> ComplexMatrix {
        mixture(&self.weights, &self.vectors, self.dim())
    }
}

/// Spectral resolution of `w`, dropping eigenvalues below [`ZERO_WEIGHT`].
pub fn spectral_decompose(w: &DensityMatrix) -> Result<OrthogonalDecomposition> {
    spectral_decompose_matrix(w.matrix())
}

pub(crate) fn spectral_decompose_matrix(w: &ComplexMatrix) -> Result<OrthogonalDecomposition> {
    let eig = hermitian_eig_with_tol(w, DEFAULT_TOL)?;
    let mut weights = Vec::new();
    let mut vectors = Vec::new();
    for (k, &l) in eig.eigenvalues.iter().enumerate() {
        if l >= ZERO_WEIGHT {
            weights.push(l);
            vectors.push(eig.vector(k));
        }
    }
    if weights.is_empty() {
        return Err(Error::InvalidState("operator has no positive eigenvalue".into()));
    }
    let s: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= s;
    }
    OrthogonalDecomposition::new(weights, vectors)
}

/// Isometry linking an orthogonal and a non-orthogonal decomposition of the
/// same operator: `U_kj = √(μ_k/w_j) ⟨φ_j|ψ_k⟩`, `λ_kj = |U_kj|²`.
#[derive(Debug, Clone)]
pub struct GhjwLink {
    u: ComplexMatrix,
    lambda: Vec<Vec<f64>>,
}

impl GhjwLink {
    /// `r × m` block, rows indexed by `k`, columns by `j`.
    pub fn u(&self) -> &ComplexMatrix {
        &self.u
    }

    /// `λ[k][j]`
    pub fn lambda(&self) -> &[Vec<f64>] {
        &self.lambda
    }

    /// `‖U†U − 1_m‖_F`
    pub fn isometry_defect(&self) -> f64 {
        let m = self.u.cols();
        (&self.u.adjoint().dot(&self.u) - &ComplexMatrix::identity(m)).frobenius_norm()
    }

    /// `max_k |μ_k − Σ_j λ_kj w_j|`
    pub fn link_defect(&self, ortho: &OrthogonalDecomposition, nonortho: &NonOrthogonalDecomposition) -> f64 {
        self.lambda
            .iter()
            .zip(nonortho.weights())
            .map(|(row, mu)| {
                let s: f64 = row.iter().zip(ortho.weights()).map(|(l, w)| l * w).sum();
                (mu - s).abs()
            })
            .fold(0.0, f64::max)
    }

    /// `max_j |Σ_k λ_kj − 1|`
    pub fn column_sum_defect(&self) -> f64 {
        let m = self.u.cols();
        (0..m)
            .map(|j| (self.lambda.iter().map(|row| row[j]).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

pub fn ghjw_link(ortho: &OrthogonalDecomposition, nonortho: &NonOrthogonalDecomposition) -> Result<GhjwLink> {
    if ortho.dim() != nonortho.dim() {
        return Err(Error::Dimension(format!(
            "decompositions live in dimensions {} and {}",
            ortho.dim(),
            nonortho.dim()
        )));
    }
    let dist = frobenius_distance(&ortho.assemble(), &nonortho.assemble())?;
    if dist > DEFAULT_TOL {
        return Err(Error::DecompositionMismatch(dist));
    }
    if let Some(w) = ortho.weights().iter().find(|w| **w <= 0.0) {
        return Err(Error::InvalidDecomposition(format!("orthogonal weight {w} is not positive")));
    }
    if nonortho.len() < ortho.len() {
        return Err(Error::InvalidDecomposition(format!(
            "{} non-orthogonal components cannot span {} orthogonal ones",
            nonortho.len(),
            ortho.len()
        )));
    }
    let (r, m) = (nonortho.len(), ortho.len());
    let u = ComplexMatrix::from_fn(r, m, |k, j| {
        inner(&ortho.vectors()[j], &nonortho.vectors()[k]) * (nonortho.weights()[k] / ortho.weights()[j]).sqrt()
    });
    let lambda = (0..r).map(|k| (0..m).map(|j| u[(k, j)].norm_sqr()).collect()).collect();
    let link = GhjwLink { u, lambda };

    let iso = link.isometry_defect();
    if iso > DEFAULT_TOL {
        return Err(Error::Construction(format!("GHJW isometry defect {iso:.3e}")));
    }
    let ld = link.link_defect(ortho, nonortho);
    if ld > DEFAULT_TOL {
        return Err(Error::Construction(format!("GHJW link defect {ld:.3e}")));
    }
    Ok(link)
}

/// A class `C^I_SE` (no `psi_block`) or `C^II_SE` of correlated states.
#[derive(Debug, Clone)]
pub struct CorrelatedClassSpec {
    n: usize,
    p: Vec<f64>,
    phi: Vec<CVector>,
    w_block: OrthogonalDecomposition,
    psi_block: Option<NonOrthogonalDecomposition>,
    rho_env: Vec<DensityMatrix>,
    varrho_env: Vec<DensityMatrix>,
}

impl CorrelatedClassSpec {
    /// Full constructor. `varrho_env` pairs with the `psi_block` components
    /// for class II and with the `w_block` components for class I.
    pub fn new(
        p: Vec<f64>,
        phi: Vec<CVector>,
        w_block: OrthogonalDecomposition,
        psi_block: Option<NonOrthogonalDecomposition>,
        rho_env: Vec<DensityMatrix>,
        varrho_env: Vec<DensityMatrix>,
    ) -> Result<Self> {
        let n = w_block.dim();
        let d = p.len();
        check_probabilities(&p, "class probabilities")?;
        if d > n {
            return Err(Error::InvalidSpec(format!("d = {d} exceeds system dimension {n}")));
        }
        if phi.len() != d - 1 {
            return Err(Error::InvalidSpec(format!(
                "{} projector vectors for d = {d}, expected {}",
                phi.len(),
                d - 1
            )));
        }
        if phi.iter().any(|v| v.len() != n) {
            return Err(Error::InvalidSpec("projector vectors have wrong dimension".into()));
        }
        if !phi.is_empty() {
            let defect = frobenius_distance(&gram(&phi), &ComplexMatrix::identity(phi.len()))?;
            if defect > DEFAULT_TOL {
                return Err(Error::InvalidSpec(format!(
                    "projector vectors are not orthonormal (Gram defect {defect:.3e})"
                )));
            }
        }
        for f in &phi {
            for v in w_block.vectors() {
                let ov = inner(f, v).norm();
                if ov > DEFAULT_TOL {
                    return Err(Error::InvalidSpec(format!(
                        "W support is not orthogonal to the projectors (overlap {ov:.3e})"
                    )));
                }
            }
        }
        if d - 1 + w_block.len() > n {
            return Err(Error::InvalidSpec("projectors and W support exceed the system dimension".into()));
        }
        if let Some(psi) = &psi_block {
            if psi.dim() != n {
                return Err(Error::InvalidSpec("psi block has wrong dimension".into()));
            }
            let dist = frobenius_distance(&psi.assemble(), &w_block.assemble())?;
            if dist > DEFAULT_TOL {
                return Err(Error::InvalidSpec(format!(
                    "psi block and w block describe different W (distance {dist:.3e})"
                )));
            }
            if psi.len() < w_block.len() {
                return Err(Error::InvalidSpec("psi block has fewer components than the rank of W".into()));
            }
        }
        if rho_env.len() != d - 1 {
            return Err(Error::InvalidSpec(format!(
                "{} environment states rho_env, expected {}",
                rho_env.len(),
                d - 1
            )));
        }
        let expected = psi_block.as_ref().map_or(w_block.len(), |p| p.len());
        if varrho_env.len() != expected {
            return Err(Error::InvalidSpec(format!(
                "{} environment states varrho_env, expected {expected}",
                varrho_env.len()
            )));
        }
        let dim_e = varrho_env[0].dim();
        if rho_env.iter().chain(&varrho_env).any(|r| r.dim() != dim_e) {
            return Err(Error::InvalidSpec("environment states have unequal dimensions".into()));
        }
        Ok(CorrelatedClassSpec {
            n,
            p,
            phi,
            w_block,
            psi_block,
            rho_env,
            varrho_env,
        })
    }

    pub fn class_i(
        p: Vec<f64>,
        phi: Vec<CVector>,
        w_block: OrthogonalDecomposition,
        rho_env: Vec<DensityMatrix>,
        varrho_env: Vec<DensityMatrix>,
    ) -> Result<Self> {
        Self::new(p, phi, w_block, None, rho_env, varrho_env)
    }

    /// Class II spec; the orthogonal block is the spectral resolution of `W`.
    pub fn class_ii(
        p: Vec<f64>,
        phi: Vec<CVector>,
        psi_block: NonOrthogonalDecomposition,
        rho_env: Vec<DensityMatrix>,
        varrho_env: Vec<DensityMatrix>,
    ) -> Result<Self> {
        let w = spectral_decompose_matrix(&psi_block.assemble())?;
        Self::new(p, phi, w, Some(psi_block), rho_env, varrho_env)
    }

    /// Class I sibling sharing `W` (hence the compatibility domain).
    pub fn class_i_sibling(&self, varrho_env: Vec<DensityMatrix>) -> Result<Self> {
        Self::class_i(
            self.p.clone(),
            self.phi.clone(),
            self.w_block.clone(),
            self.rho_env.clone(),
            varrho_env,
        )
    }

    /// Same class, different mixing probabilities.
    pub fn with_probabilities(&self, p: Vec<f64>) -> Result<Self> {
        Self::new(
            p,
            self.phi.clone(),
            self.w_block.clone(),
            self.psi_block.clone(),
            self.rho_env.clone(),
            self.varrho_env.clone(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.p.len()
    }

    pub fn dim_e(&self) -> usize {
        self.varrho_env[0].dim()
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn phi(&self) -> &[CVector] {
        &self.phi
    }

    pub fn w_block(&self) -> &OrthogonalDecomposition {
        &self.w_block
    }

    pub fn psi_block(&self) -> Option<&NonOrthogonalDecomposition> {
        self.psi_block.as_ref()
    }

    pub fn rho_env(&self) -> &[DensityMatrix] {
        &self.rho_env
    }

    pub fn varrho_env(&self) -> &[DensityMatrix] {
        &self.varrho_env
    }

    pub fn is_class_ii(&self) -> bool {
        self.psi_block.is_some()
    }

    pub fn w_matrix(&self) -> ComplexMatrix {
        self.w_block.assemble()
    }

    /// Orthonormal basis `φ_1 … φ_n`: the projector vectors, then the
    /// support of `W`, then a completion of the kernel of `W`.
    pub fn full_basis(&self) -> Vec<CVector> {
        let mut v = self.phi.clone();
        v.extend(self.w_block.vectors().iter().cloned());
        complete_basis(&v, self.n)
    }

    /// Environment state attached to each vector of [`full_basis`](Self::full_basis).
    /// Class I only; kernel directions of `W` get the maximally mixed state.
    pub fn full_basis_env(&self) -> Result<Vec<DensityMatrix>> {
        self.require_class_i()?;
        let mut env = self.rho_env.clone();
        env.extend(self.varrho_env.iter().cloned());
        while env.len() < self.n {
            env.push(DensityMatrix::maximally_mixed(self.dim_e()));
        }
        Ok(env)
    }

    pub(crate) fn require_class_i(&self) -> Result<()> {
        if self.is_class_ii() {
            return Err(Error::WrongClass(
                "class-II spec given; use build_phi_ii_kraus for discordant classes".into(),
            ));
        }
        Ok(())
    }

    pub(crate) fn require_class_ii(&self) -> Result<()> {
        if !self.is_class_ii() {
            return Err(Error::WrongClass(
                "class-I spec given; use build_phi1_kraus or build_phi2_kraus".into(),
            ));
        }
        Ok(())
    }
}

/// The class member with the spec's own probabilities.
pub fn assemble_composite(spec: &CorrelatedClassSpec) -> Result<DensityMatrix> {
    class_member(spec, spec.p())
}

/// Class member for arbitrary mixing probabilities `probs` (length `d`).
pub fn class_member(spec: &CorrelatedClassSpec, probs: &[f64]) -> Result<DensityMatrix> {
    check_domain_probs(spec, probs)?;
    let n = spec.n();
    let de = spec.dim_e();
    let d = spec.d();
    let mut out = ComplexMatrix::zeros(n * de, n * de);
    for ((phi, env), &p) in spec.phi().iter().zip(spec.rho_env()).zip(probs) {
        out += &kron(&ComplexMatrix::projector(phi), env.matrix()).scale_re(p);
    }
    let pd = probs[d - 1];
    let (weights, vectors) = match spec.psi_block() {
        Some(psi) => (psi.weights(), psi.vectors()),
        None => (spec.w_block().weights(), spec.w_block().vectors()),
    };
    for ((w, v), env) in weights.iter().zip(vectors).zip(spec.varrho_env()) {
        out += &kron(&ComplexMatrix::projector(v), env.matrix()).scale_re(pd * w);
    }
    DensityMatrix::new(out.hermitian_part())
}

/// `Σ_{i<d} p_i Π_φi + p_d W`
pub fn marginal(spec: &CorrelatedClassSpec) -> DensityMatrix {
    domain_member(spec, spec.p()).expect("spec probabilities are valid")
}

/// Compatibility-domain element `Σ_{i<d} probs_i Π_φi + probs_d W`.
pub fn domain_member(spec: &CorrelatedClassSpec, probs: &[f64]) -> Result<DensityMatrix> {
    check_domain_probs(spec, probs)?;
    let d = spec.d();
    let mut out = spec.w_matrix().scale_re(probs[d - 1]);
    for (i, f) in spec.phi().iter().enumerate() {
        out += &ComplexMatrix::projector(f).scale_re(probs[i]);
    }
    DensityMatrix::new(out.hermitian_part())
}

fn check_domain_probs(spec: &CorrelatedClassSpec, probs: &[f64]) -> Result<()> {
    if probs.len() != spec.d() {
        return Err(Error::InvalidProbabilities(format!(
            "expected {} probabilities, got {}",
            spec.d(),
            probs.len()
        )));
    }
    check_probabilities(probs, "domain probabilities")
}
