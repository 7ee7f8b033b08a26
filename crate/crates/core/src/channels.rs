//! Kraus constructions for the reduced maps.
//!
//! * `Φ^II(t)`: class-II spec; operators `√λ_α ⟨γ|U|α_i⟩ Π_φi` for the pure
//!   projectors and `√η_β ⟨γ|U|β_k⟩ K_jk` for the discordant block, with
//!   `K_jk = √λ_kj |ψ_k⟩⟨φ_j|` from the GHJW link.
//! * `Φ₁(t)`: class-I spec, `Tr_E ∘ U ∘ A₁`, one projector per basis vector.
//! * `Φ₂(t)`: class-I spec, `Tr_E ∘ U ∘ A₂`, where `A₂` keeps the
//!   coherences between projector blocks through `√ρ^j_E √ρ^k_E`.
//!
//! Kernel directions of `W` carry no weight on the compatibility domain.
//! They get a projector paired with the maximally mixed environment so that
//! every Kraus set stays trace preserving.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    basis_vector, frobenius_distance, hermitian_eig, inner, kron, partial_trace_env, CVector, ComplexMatrix,
    DEFAULT_TOL, ZERO,
};
use crate::states::{
    ghjw_link, marginal, spectral_decompose, CorrelatedClassSpec, DensityMatrix, GhjwLink,
    NonOrthogonalDecomposition, OrthogonalDecomposition,
};

/// Which construction produced a [`KrausSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KrausLabel {
    #[serde(rename = "phiI")]
    PhiI,
    #[serde(rename = "phiII")]
    PhiII,
    #[serde(rename = "phi1")]
    Phi1,
    #[serde(rename = "phi2")]
    Phi2,
    #[serde(rename = "custom")]
    Custom,
}

impl std::fmt::Display for KrausLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            KrausLabel::PhiI => "phiI",
            KrausLabel::PhiII => "phiII",
            KrausLabel::Phi1 => "phi1",
            KrausLabel::Phi2 => "phi2",
            KrausLabel::Custom => "custom",
        };
        f.write_str(s)
    }
}

/// Trace-preserving family of `n×n` Kraus operators at one time.
#[derive(Debug, Clone, Serialize)]
pub struct KrausSet {
    label: KrausLabel,
    time_tag: f64,
    operators: Vec<ComplexMatrix>,
}

#[derive(Deserialize)]
struct KrausSetRepr {
    label: KrausLabel,
    time_tag: f64,
    operators: Vec<ComplexMatrix>,
}

impl<'de> Deserialize<'de> for KrausSet {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let r = KrausSetRepr::deserialize(de)?;
        KrausSet::new(r.operators, r.label, r.time_tag).map_err(serde::de::Error::custom)
    }
}

impl KrausSet {
    pub fn new(operators: Vec<ComplexMatrix>, label: KrausLabel, time_tag: f64) -> Result<Self> {
        Self::with_tol(operators, label, time_tag, DEFAULT_TOL)
    }

    /// Rejects sets with `‖Σ M†M − 1‖_F > tol`.
    pub fn with_tol(operators: Vec<ComplexMatrix>, label: KrausLabel, time_tag: f64, tol: f64) -> Result<Self> {
        let n = operators
            .first()
            .map(ComplexMatrix::rows)
            .ok_or_else(|| Error::Construction("empty Kraus set".into()))?;
        if operators.iter().any(|m| m.dims() != (n, n)) {
            return Err(Error::Dimension("Kraus operators must all be n×n".into()));
        }
        let ks = KrausSet {
            label,
            time_tag,
            operators,
        };
        let defect = ks.tp_defect();
        if defect > tol {
            return Err(Error::Construction(format!(
                "Kraus set is not trace preserving (defect {defect:.3e})"
            )));
        }
        Ok(ks)
    }

    pub fn identity(n: usize) -> Self {
        KrausSet {
            label: KrausLabel::Custom,
            time_tag: 0.0,
            operators: vec![ComplexMatrix::identity(n)],
        }
    }

    pub fn label(&self) -> KrausLabel {
        self.label
    }

    pub fn time_tag(&self) -> f64 {
        self.time_tag
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.operators[0].rows()
    }

    /// `‖Σ M†M − 1‖_F`
    pub fn tp_defect(&self) -> f64 {
        let n = self.dim();
        let mut s = ComplexMatrix::zeros(n, n);
        for m in &self.operators {
            s += &m.adjoint().dot(m);
        }
        (&s - &ComplexMatrix::identity(n)).frobenius_norm()
    }

    /// `Σ M X M†` for an arbitrary operator `X`.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.dim();
        if x.dims() != (n, n) {
            return Err(Error::Dimension(format!(
                "channel acts on {n}x{n}, got {}x{}",
                x.rows(),
                x.cols()
            )));
        }
        let mut out = ComplexMatrix::zeros(n, n);
        for m in &self.operators {
            out += &m.sandwich(x);
        }
        Ok(out)
    }
}

pub fn apply_kraus(ks: &KrausSet, rho: &DensityMatrix) -> Result<DensityMatrix> {
    DensityMatrix::new(ks.apply(rho.matrix())?.hermitian_part())
}

/// One `K_jk = √λ_kj |ψ_k⟩⟨φ_j|`.
#[derive(Debug, Clone)]
pub struct KOperator {
    pub j: usize,
    pub k: usize,
    pub coefficient: f64,
    pub op: ComplexMatrix,
}

/// The POVM `{Π_φi, K†_jk K_jk}` fixed by a class-II spec, whose instrument
/// leaves the compatibility domain invariant.
#[derive(Debug, Clone)]
pub struct InvariantPovm {
    projectors: Vec<ComplexMatrix>,
    kraus_k: Vec<KOperator>,
}

impl InvariantPovm {
    /// Projectors first, then `K†K` in `(k, j)` order.
    pub fn effects(&self) -> Vec<ComplexMatrix> {
        let mut out = self.projectors.clone();
        out.extend(self.kraus_k.iter().map(|k| k.op.adjoint().dot(&k.op)));
        out
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    pub fn kraus_k(&self) -> &[KOperator] {
        &self.kraus_k
    }

    pub fn k(&self, j: usize, k: usize) -> Option<&KOperator> {
        self.kraus_k.iter().find(|o| o.j == j && o.k == k)
    }

    /// `‖Σ effects − 1‖_F`
    pub fn completeness_defect(&self) -> f64 {
        let effects = self.effects();
        let n = effects[0].rows();
        let mut s = ComplexMatrix::zeros(n, n);
        for e in &effects {
            s += e;
        }
        (&s - &ComplexMatrix::identity(n)).frobenius_norm()
    }

    /// `Σ Π ρ Π + Σ K ρ K†`
    pub fn instrument(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(rho.rows(), rho.cols());
        for p in &self.projectors {
            out += &p.sandwich(rho);
        }
        for k in &self.kraus_k {
            out += &k.op.sandwich(rho);
        }
        out
    }

    /// `Σ_{jk} K_jk ρ K†_jk` without the projector part.
    pub fn k_channel(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(rho.rows(), rho.cols());
        for k in &self.kraus_k {
            out += &k.op.sandwich(rho);
        }
        out
    }

    /// `‖instrument(ρ) − ρ‖_F`
    pub fn invariance_defect(&self, rho: &ComplexMatrix) -> f64 {
        (&self.instrument(rho) - rho).frobenius_norm()
    }
}

/// `K_jk = √λ_kj |ψ_k⟩⟨φ_j|` together with the projectors on the remaining
/// basis directions.
pub fn build_k_operators(
    link: &GhjwLink,
    nonortho: &NonOrthogonalDecomposition,
    ortho: &OrthogonalDecomposition,
    projector_vectors: &[CVector],
) -> Result<InvariantPovm> {
    let (r, m) = (nonortho.len(), ortho.len());
    if link.u().dims() != (r, m) {
        return Err(Error::Dimension(format!(
            "GHJW link is {}x{}, decompositions need {r}x{m}",
            link.u().rows(),
            link.u().cols()
        )));
    }
    let mut kraus_k = Vec::with_capacity(r * m);
    for k in 0..r {
        for j in 0..m {
            let coefficient = link.lambda()[k][j].sqrt();
            let op = ComplexMatrix::outer(&nonortho.vectors()[k], &ortho.vectors()[j]).scale_re(coefficient);
            kraus_k.push(KOperator { j, k, coefficient, op });
        }
    }
    let projectors = projector_vectors.iter().map(|v| ComplexMatrix::projector(v)).collect();
    let povm = InvariantPovm { projectors, kraus_k };
    let defect = povm.completeness_defect();
    if defect > DEFAULT_TOL {
        return Err(Error::Construction(format!("POVM completeness defect {defect:.3e}")));
    }
    Ok(povm)
}

/// Directions of `H_S` orthogonal to the projectors and the support of `W`.
fn kernel_vectors(spec: &CorrelatedClassSpec) -> Vec<CVector> {
    let basis = spec.full_basis();
    basis[spec.d() - 1 + spec.w_block().len()..].to_vec()
}

/// POVM of a class-II spec, checked against the spec's marginal:
/// `Σ_j K_jk ρ_S(0) K†_jk = p_d μ_k |ψ_k⟩⟨ψ_k|` for every `k`.
pub fn invariant_povm(spec: &CorrelatedClassSpec) -> Result<(GhjwLink, InvariantPovm)> {
    spec.require_class_ii()?;
    let psi = spec.psi_block().expect("class II");
    let link = ghjw_link(spec.w_block(), psi)?;
    let mut proj = spec.phi().to_vec();
    proj.extend(kernel_vectors(spec));
    let povm = build_k_operators(&link, psi, spec.w_block(), &proj)?;

    let rho = marginal(spec);
    let pd = spec.p()[spec.d() - 1];
    for (k, (mu, v)) in psi.weights().iter().zip(psi.vectors()).enumerate() {
        let mut s = ComplexMatrix::zeros(spec.n(), spec.n());
        for op in povm.kraus_k.iter().filter(|o| o.k == k) {
            s += &op.op.sandwich(rho.matrix());
        }
        let target = ComplexMatrix::projector(v).scale_re(pd * mu);
        let defect = frobenius_distance(&s, &target)?;
        if defect > DEFAULT_TOL {
            return Err(Error::Construction(format!("K operators violate invariance for k = {k} ({defect:.3e})")));
        }
    }
    Ok((link, povm))
}

fn env_block(u: &ComplexMatrix, dim_s: usize, gamma: &[Complex64], alpha: &[Complex64]) -> ComplexMatrix {
    let de = gamma.len();
    ComplexMatrix::from_fn(dim_s, dim_s, |s, sp| {
        let mut acc = ZERO;
        for (e, g) in gamma.iter().enumerate() {
            if *g == ZERO {
                continue;
            }
            let row = s * de + e;
            let mut inner_sum = ZERO;
            for (ep, a) in alpha.iter().enumerate() {
                inner_sum += u[(row, sp * de + ep)] * a;
            }
            acc += g.conj() * inner_sum;
        }
        acc
    })
}

/// System operator `⟨γ|U|α⟩` with entries `⟨s,γ|U|s′,α⟩`.
pub fn env_sandwich(u: &ComplexMatrix, gamma: &[Complex64], alpha: &[Complex64]) -> Result<ComplexMatrix> {
    let de = gamma.len();
    if de == 0 || alpha.len() != de || !u.is_square() || !u.rows().is_multiple_of(de) {
        return Err(Error::Dimension(format!(
            "cannot sandwich a {}x{} operator with environment vectors of length {} and {}",
            u.rows(),
            u.cols(),
            gamma.len(),
            alpha.len()
        )));
    }
    Ok(env_block(u, u.rows() / de, gamma, alpha))
}

/// Computational basis of `C^n` as the columns of the identity.
pub fn computational_basis(n: usize) -> Vec<CVector> {
    (0..n).map(|k| basis_vector(n, k)).collect()
}

fn check_unitary(u: &ComplexMatrix, n: usize, de: usize) -> Result<()> {
    if u.dims() != (n * de, n * de) {
        return Err(Error::Dimension(format!(
            "composite unitary is {}x{}, expected {}x{}",
            u.rows(),
            u.cols(),
            n * de,
            n * de
        )));
    }
    u.ensure_unitary(DEFAULT_TOL)
}

fn check_env_basis(basis: &[CVector], de: usize) -> Result<()> {
    if basis.len() != de || basis.iter().any(|v| v.len() != de) {
        return Err(Error::Dimension(format!("environment basis must have {de} vectors of length {de}")));
    }
    let g = crate::linalg::gram(basis);
    let defect = frobenius_distance(&g, &ComplexMatrix::identity(de))?;
    if defect > DEFAULT_TOL {
        return Err(Error::InvalidParams(format!(
            "environment basis is not orthonormal (defect {defect:.3e})"
        )));
    }
    Ok(())
}

/// Appends `√λ_α ⟨γ|U|α⟩ · right` for every eigenpair of `env` and every `γ`.
fn push_env_terms(
    out: &mut Vec<ComplexMatrix>,
    u: &ComplexMatrix,
    n: usize,
    gammas: &[CVector],
    env: &DensityMatrix,
    right: &ComplexMatrix,
) -> Result<()> {
    let eig = spectral_decompose(env)?;
    for (lam, alpha) in eig.weights().iter().zip(eig.vectors()) {
        for g in gammas {
            let block = env_block(u, n, g, alpha);
            out.push(block.dot(right).scale_re(lam.sqrt()));
        }
    }
    Ok(())
}

pub fn build_phi_ii_kraus(spec: &CorrelatedClassSpec, u: &ComplexMatrix, t_tag: f64) -> Result<KrausSet> {
    build_phi_ii_kraus_in_basis(spec, u, t_tag, &computational_basis(spec.dim_e()))
}

/// `Φ^II` with the environment trace taken in the orthonormal basis `gammas`.
pub fn build_phi_ii_kraus_in_basis(
    spec: &CorrelatedClassSpec,
    u: &ComplexMatrix,
    t_tag: f64,
    gammas: &[CVector],
) -> Result<KrausSet> {
    spec.require_class_ii()?;
    let (n, de) = (spec.n(), spec.dim_e());
    check_unitary(u, n, de)?;
    check_env_basis(gammas, de)?;
    let (_, povm) = invariant_povm(spec)?;

    let mut ops = Vec::new();
    for (f, env) in spec.phi().iter().zip(spec.rho_env()) {
        push_env_terms(&mut ops, u, n, gammas, env, &ComplexMatrix::projector(f))?;
    }
    for kop in povm.kraus_k() {
        if kop.coefficient == 0.0 {
            continue;
        }
        push_env_terms(&mut ops, u, n, gammas, &spec.varrho_env()[kop.k], &kop.op)?;
    }
    let mixed = DensityMatrix::maximally_mixed(de);
    for v in kernel_vectors(spec) {
        push_env_terms(&mut ops, u, n, gammas, &mixed, &ComplexMatrix::projector(&v))?;
    }
    KrausSet::new(ops, KrausLabel::PhiII, t_tag)
}

/// `Φ^II` with the alternative operators `K′_jk = √μ_k |ψ_k⟩⟨χ_j|`.
///
/// `chis` must resolve the identity on the support of `W`; the invariance
/// relation is re-checked on the spec's marginal.
pub fn build_phi_ii_kraus_custom(
    spec: &CorrelatedClassSpec,
    u: &ComplexMatrix,
    t_tag: f64,
    chis: &[CVector],
) -> Result<KrausSet> {
    spec.require_class_ii()?;
    let (n, de) = (spec.n(), spec.dim_e());
    check_unitary(u, n, de)?;
    if chis.is_empty() || chis.iter().any(|v| v.len() != n) {
        return Err(Error::Dimension(format!("extension vectors must have length {n}")));
    }
    let mut frame = ComplexMatrix::zeros(n, n);
    for chi in chis {
        frame += &ComplexMatrix::projector(chi);
    }
    let w_support = {
        let mut p = ComplexMatrix::zeros(n, n);
        for v in spec.w_block().vectors() {
            p += &ComplexMatrix::projector(v);
        }
        p
    };
    let defect = frobenius_distance(&frame, &w_support)?;
    if defect > DEFAULT_TOL {
        return Err(Error::InvalidParams(format!(
            "extension vectors do not resolve the identity on the support of W (defect {defect:.3e})"
        )));
    }

    let psi = spec.psi_block().expect("class II");
    let rho = marginal(spec);
    let pd = spec.p()[spec.d() - 1];
    let gammas = computational_basis(de);
    let mut ops = Vec::new();
    for (f, env) in spec.phi().iter().zip(spec.rho_env()) {
        push_env_terms(&mut ops, u, n, &gammas, env, &ComplexMatrix::projector(f))?;
    }
    for (k, (mu, v)) in psi.weights().iter().zip(psi.vectors()).enumerate() {
        let ks: Vec<ComplexMatrix> = chis
            .iter()
            .map(|chi| ComplexMatrix::outer(v, chi).scale_re(mu.sqrt()))
            .collect();
        let mut s = ComplexMatrix::zeros(n, n);
        for kk in &ks {
            s += &kk.sandwich(rho.matrix());
        }
        let d = frobenius_distance(&s, &ComplexMatrix::projector(v).scale_re(pd * mu))?;
        if d > DEFAULT_TOL {
            return Err(Error::Construction(format!("extension violates invariance for k = {k} ({d:.3e})")));
        }
        for kk in &ks {
            push_env_terms(&mut ops, u, n, &gammas, &spec.varrho_env()[k], kk)?;
        }
    }
    let mixed = DensityMatrix::maximally_mixed(de);
    for v in kernel_vectors(spec) {
        push_env_terms(&mut ops, u, n, &gammas, &mixed, &ComplexMatrix::projector(&v))?;
    }
    KrausSet::new(ops, KrausLabel::Custom, t_tag)
}

fn class_i_parts(spec: &CorrelatedClassSpec, u: &ComplexMatrix) -> Result<(Vec<CVector>, Vec<DensityMatrix>)> {
    spec.require_class_i()?;
    check_unitary(u, spec.n(), spec.dim_e())?;
    Ok((spec.full_basis(), spec.full_basis_env()?))
}

fn phi1_operators(spec: &CorrelatedClassSpec, u: &ComplexMatrix, gammas: &[CVector]) -> Result<Vec<ComplexMatrix>> {
    let (basis, envs) = class_i_parts(spec, u)?;
    let mut ops = Vec::new();
    for (f, env) in basis.iter().zip(&envs) {
        push_env_terms(&mut ops, u, spec.n(), gammas, env, &ComplexMatrix::projector(f))?;
    }
    Ok(ops)
}

/// `Φ₁(t)`: `M_γαi = √λ_αi ⟨γ|U|α_i⟩ Π_φi` for `i = 1…n`.
pub fn build_phi1_kraus(spec: &CorrelatedClassSpec, u: &ComplexMatrix, t_tag: f64) -> Result<KrausSet> {
    let ops = phi1_operators(spec, u, &computational_basis(spec.dim_e()))?;
    KrausSet::new(ops, KrausLabel::Phi1, t_tag)
}

/// Class-I analogue of `Φ^II`; the same operators as `Φ₁`.
pub fn build_phi_i_kraus(spec: &CorrelatedClassSpec, u: &ComplexMatrix, t_tag: f64) -> Result<KrausSet> {
    let ops = phi1_operators(spec, u, &computational_basis(spec.dim_e()))?;
    KrausSet::new(ops, KrausLabel::PhiI, t_tag)
}

/// Square root of a density matrix through its spectral resolution.
fn sqrt_density(rho: &DensityMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(rho.matrix())?;
    let n = rho.dim();
    let v = &eig.eigenvectors;
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        eig.eigenvalues
            .iter()
            .enumerate()
            .map(|(k, &l)| v[(i, k)] * v[(j, k)].conj() * l.max(0.0).sqrt())
            .sum()
    }))
}

/// `Φ₂(t)`: `M_γβ = Σ_i ⟨γ|U (1 ⊗ √ρ^i_E)|β⟩ Π_φi`.
///
/// Expanding `√ρ^i_E|β⟩ = Σ_α √λ_αi ⟨α_i|β⟩ |α_i⟩` shows this is the sum of
/// the `Φ₁` operators over `i`; when every `ρ^i_E` is diagonal in `{|β⟩}` it
/// is exactly `Σ_i M_γαi` with a shared index `α`.
pub fn build_phi2_kraus(spec: &CorrelatedClassSpec, u: &ComplexMatrix, t_tag: f64) -> Result<KrausSet> {
    build_phi2_kraus_in_basis(spec, u, t_tag, &computational_basis(spec.dim_e()))
}

pub fn build_phi2_kraus_in_basis(
    spec: &CorrelatedClassSpec,
    u: &ComplexMatrix,
    t_tag: f64,
    gammas: &[CVector],
) -> Result<KrausSet> {
    let (basis, envs) = class_i_parts(spec, u)?;
    let (n, de) = (spec.n(), spec.dim_e());
    check_env_basis(gammas, de)?;
    let roots = envs.iter().map(sqrt_density).collect::<Result<Vec<_>>>()?;
    let betas = computational_basis(de);
    let mut ops = Vec::with_capacity(de * de);
    for g in gammas {
        for b in &betas {
            let mut m = ComplexMatrix::zeros(n, n);
            for (f, root) in basis.iter().zip(&roots) {
                let a = root.mat_vec(b);
                m += &env_block(u, n, g, &a).dot(&ComplexMatrix::projector(f));
            }
            ops.push(m);
        }
    }
    KrausSet::new(ops, KrausLabel::Phi2, t_tag)
}

/// `A₁[σ] = Σ_j Π_φj σ Π_φj ⊗ ρ^j_E`
pub fn assignment_a1(spec: &CorrelatedClassSpec, sigma: &ComplexMatrix) -> Result<ComplexMatrix> {
    spec.require_class_i()?;
    check_system_operator(spec, sigma)?;
    let basis = spec.full_basis();
    let envs = spec.full_basis_env()?;
    let de = spec.dim_e();
    let mut out = ComplexMatrix::zeros(spec.n() * de, spec.n() * de);
    for (f, env) in basis.iter().zip(&envs) {
        let p = ComplexMatrix::projector(f);
        out += &kron(&p.dot(sigma).dot(&p), env.matrix());
    }
    Ok(out)
}

/// `A₂[σ] = Σ_jk Π_φj σ Π_φk ⊗ √ρ^j_E √ρ^k_E`
pub fn assignment_a2(spec: &CorrelatedClassSpec, sigma: &ComplexMatrix) -> Result<ComplexMatrix> {
    spec.require_class_i()?;
    check_system_operator(spec, sigma)?;
    let basis = spec.full_basis();
    let envs = spec.full_basis_env()?;
    let roots = envs.iter().map(sqrt_density).collect::<Result<Vec<_>>>()?;
    let projectors: Vec<ComplexMatrix> = basis.iter().map(|f| ComplexMatrix::projector(f)).collect();
    let de = spec.dim_e();
    let mut out = ComplexMatrix::zeros(spec.n() * de, spec.n() * de);
    for (pj, rj) in projectors.iter().zip(&roots) {
        for (pk, rk) in projectors.iter().zip(&roots) {
            out += &kron(&pj.dot(sigma).dot(pk), &rj.dot(rk));
        }
    }
    Ok(out)
}

/// `Φ_d[w] = Σ_j Π_φj w Π_φj` over the spec's full basis.
pub fn diagonalizing_projection(spec: &CorrelatedClassSpec, w: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_system_operator(spec, w)?;
    Ok(pinch(&spec.full_basis(), w))
}

/// Pinching in an orthonormal basis.
pub fn pinch(basis: &[CVector], w: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(w.rows(), w.cols());
    for f in basis {
        let wf = w.mat_vec(f);
        let coef = inner(f, &wf);
        out += &ComplexMatrix::projector(f).scale(coef);
    }
    out
}

fn check_system_operator(spec: &CorrelatedClassSpec, sigma: &ComplexMatrix) -> Result<()> {
    let n = spec.n();
    if sigma.dims() != (n, n) {
        return Err(Error::Dimension(format!(
            "system operator is {}x{}, expected {n}x{n}",
            sigma.rows(),
            sigma.cols()
        )));
    }
    Ok(())
}

/// Ground truth `Tr_E[U ρ_SE U†]`.
pub fn oracle_reduced(rho_se: &DensityMatrix, u: &ComplexMatrix, dim_s: usize) -> Result<DensityMatrix> {
    let side = rho_se.dim();
    if dim_s == 0 || !side.is_multiple_of(dim_s) {
        return Err(Error::Dimension(format!("composite dimension {side} is not a multiple of {dim_s}")));
    }
    let de = side / dim_s;
    check_unitary(u, dim_s, de)?;
    let evolved = u.sandwich(rho_se.matrix());
    DensityMatrix::new(partial_trace_env(&evolved, dim_s, de)?.hermitian_part())
}

/// `Tr_E[U X U†]` for a composite operator that need not be a state.
pub fn evolve_and_trace(x: &ComplexMatrix, u: &ComplexMatrix, dim_s: usize) -> Result<ComplexMatrix> {
    let de = x.rows() / dim_s.max(1);
    partial_trace_env(&u.sandwich(x), dim_s, de)
}
