//! Worked examples and their closed-form oracles.
//!
//! The qubit scenario couples a qubit to a qubit environment through
//! [`qubit_unitary`]; the initial state is `Σ_i p_i Π^i ⊗ ρ^i_E` with `Π^i`
//! the `σ_y` eigenprojectors and `ρ^i_E = diag(λ₊ᵢ, λ₋ᵢ)`. Every analytic
//! matrix here takes the dimensionless time `2ωt`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analysis::{rep_from_kraus, rep_from_map, ChannelRep};
use crate::channels::{
    build_phi1_kraus, build_phi2_kraus, build_phi_ii_kraus, diagonalizing_projection, KrausSet,
};
use crate::error::{Error, Result};
use crate::interaction::Interaction;
pub use crate::interaction::{phase_aligned_distance, phase_normalized, qubit_unitary, qubit_unitary_compact};
use crate::linalg::{basis_vector, c, CVector, ComplexMatrix};
use crate::states::{
    domain_member, marginal, CorrelatedClassSpec, DensityMatrix, NonOrthogonalDecomposition,
    OrthogonalDecomposition,
};

const H: f64 = std::f64::consts::FRAC_1_SQRT_2;
const EIG_SUM_TOL: f64 = 1e-12;

/// `|+y⟩ = (|0⟩ + i|1⟩)/√2`
pub fn plus_y() -> CVector {
    vec![c(H, 0.0), c(0.0, H)]
}

/// `|−y⟩ = (|0⟩ − i|1⟩)/√2`
pub fn minus_y() -> CVector {
    vec![c(H, 0.0), c(0.0, -H)]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitScenarioParams {
    pub omega: f64,
    pub p1: f64,
    pub p2: f64,
    pub lam_plus_1: f64,
    pub lam_minus_1: f64,
    pub lam_plus_2: f64,
    pub lam_minus_2: f64,
}

impl QubitScenarioParams {
    /// `ω = 1`, `p₂ = 1 − p₁`, `λ₋ᵢ = 1 − λ₊ᵢ`.
    pub fn new(p1: f64, lam_plus_1: f64, lam_plus_2: f64) -> Result<Self> {
        let p = QubitScenarioParams {
            omega: 1.0,
            p1,
            p2: 1.0 - p1,
            lam_plus_1,
            lam_minus_1: 1.0 - lam_plus_1,
            lam_plus_2,
            lam_minus_2: 1.0 - lam_plus_2,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.omega,
            self.p1,
            self.p2,
            self.lam_plus_1,
            self.lam_minus_1,
            self.lam_plus_2,
            self.lam_minus_2,
        ];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let unit = |x: f64| (0.0..=1.0).contains(&x);
        if !unit(self.p1) || !unit(self.p2) || (self.p1 + self.p2 - 1.0).abs() > EIG_SUM_TOL {
            return Err(Error::InvalidParams(format!(
                "probabilities ({}, {}) are not a distribution",
                self.p1, self.p2
            )));
        }
        for (lp, lm) in [(self.lam_plus_1, self.lam_minus_1), (self.lam_plus_2, self.lam_minus_2)] {
            if !unit(lp) || !unit(lm) || (lp + lm - 1.0).abs() > EIG_SUM_TOL {
                return Err(Error::InvalidParams(format!(
                    "environment eigenvalues ({lp}, {lm}) must lie in [0, 1] and sum to 1"
                )));
            }
        }
        Ok(())
    }

    /// Class-I spec with `φ₁ = |+y⟩` and `W = |−y⟩⟨−y|`.
    pub fn spec(&self) -> Result<CorrelatedClassSpec> {
        self.validate()?;
        CorrelatedClassSpec::class_i(
            vec![self.p1, self.p2],
            vec![plus_y()],
            OrthogonalDecomposition::new(vec![1.0], vec![minus_y()])?,
            vec![DensityMatrix::diagonal(&[self.lam_plus_1, self.lam_minus_1])?],
            vec![DensityMatrix::diagonal(&[self.lam_plus_2, self.lam_minus_2])?],
        )
    }

    /// `U(t)` in physical time, i.e. [`qubit_unitary`] at `ωt`.
    pub fn unitary_at(&self, time: f64) -> ComplexMatrix {
        qubit_unitary(self.omega * time)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedConstants {
    pub sigma_plus: f64,
    pub sigma_minus: f64,
    pub delta_plus: f64,
    pub delta_minus: f64,
    /// `ϰ± = Σ±Δ±`
    pub kappa_script_plus: f64,
    pub kappa_script_minus: f64,
    pub mu_plus: f64,
    pub mu_minus: f64,
    pub chi_plus: f64,
    pub chi_minus: f64,
    pub kappa_plus: f64,
    pub kappa_minus: f64,
}

impl DerivedConstants {
    /// `|μ₊ + μ₋ − 1|` and `|χ₊ + κ₊ − 1|`
    pub fn constraint_defects(&self) -> (f64, f64) {
        (
            (self.mu_plus + self.mu_minus - 1.0).abs(),
            (self.chi_plus + self.kappa_plus - 1.0).abs(),
        )
    }
}

pub fn derived_constants(p: &QubitScenarioParams) -> DerivedConstants {
    let (a1, a2) = (p.lam_plus_1.sqrt(), p.lam_plus_2.sqrt());
    let (b1, b2) = (p.lam_minus_1.sqrt(), p.lam_minus_2.sqrt());
    let sigma_plus = (a1 + a2) / 2.0;
    let sigma_minus = (b1 + b2) / 2.0;
    let delta_plus = (a1 - a2) / 2.0;
    let delta_minus = (b1 - b2) / 2.0;
    DerivedConstants {
        sigma_plus,
        sigma_minus,
        delta_plus,
        delta_minus,
        kappa_script_plus: sigma_plus * delta_plus,
        kappa_script_minus: sigma_minus * delta_minus,
        mu_plus: sigma_plus.powi(2) + delta_plus.powi(2),
        mu_minus: sigma_minus.powi(2) + delta_minus.powi(2),
        chi_plus: sigma_plus.powi(2) + sigma_minus.powi(2),
        chi_minus: sigma_plus.powi(2) - sigma_minus.powi(2),
        kappa_plus: delta_plus.powi(2) + delta_minus.powi(2),
        kappa_minus: delta_plus.powi(2) - delta_minus.powi(2),
    }
}

fn cs(two_omega_t: f64) -> (f64, f64) {
    (two_omega_t.cos(), two_omega_t.sin())
}

fn matrix4(rows: [[num_complex::Complex64; 4]; 4]) -> ComplexMatrix {
    ComplexMatrix::from_fn(4, 4, |i, j| rows[i][j])
}

/// Closed-form matrix of `Φ₂` in the printed layout, which is the transpose
/// of [`ChannelRep::lambda`].
pub fn analytic_lambda_phi2(p: &QubitScenarioParams, two_omega_t: f64) -> ComplexMatrix {
    let k = derived_constants(p);
    let (cc, s) = cs(two_omega_t);
    let r = |x: f64| c(x, 0.0);
    let i = |x: f64| c(0.0, x);
    let sc = s * cc * (k.kappa_script_minus - k.kappa_script_plus);
    matrix4([
        [
            r(cc * cc * k.chi_plus + s * s * k.mu_plus),
            r(sc),
            r(sc),
            r(cc * cc * k.kappa_plus + s * s * k.mu_minus),
        ],
        [
            i(2.0 * s * s * k.kappa_script_plus),
            c(cc * cc * k.chi_plus, -cc * s * k.chi_minus),
            c(-cc * cc * k.kappa_plus, -cc * s * k.kappa_minus),
            i(2.0 * s * s * k.kappa_script_minus),
        ],
        [
            i(-2.0 * s * s * k.kappa_script_plus),
            c(-cc * cc * k.kappa_plus, cc * s * k.kappa_minus),
            c(cc * cc * k.chi_plus, cc * s * k.chi_minus),
            i(-2.0 * s * s * k.kappa_script_minus),
        ],
        [
            r(cc * cc * k.kappa_plus + s * s * k.mu_plus),
            r(sc),
            r(sc),
            r(cc * cc * k.chi_plus + s * s * k.mu_minus),
        ],
    ])
}

/// Closed-form matrix of `Φ₁`, printed layout.
pub fn analytic_lambda_phi1(p: &QubitScenarioParams, two_omega_t: f64) -> ComplexMatrix {
    let k = derived_constants(p);
    let (cc, s) = cs(two_omega_t);
    let r = |x: f64| c(0.5 * x, 0.0);
    let i = |x: f64| c(0.0, 0.5 * x);
    let d = k.mu_plus - k.mu_minus;
    let off = 2.0 * s * cc * (k.kappa_script_minus - k.kappa_script_plus);
    matrix4([
        [
            r(cc * cc + 2.0 * s * s * k.mu_plus),
            r(off),
            r(off),
            r(cc * cc + 2.0 * s * s * k.mu_minus),
        ],
        [
            i(4.0 * s * s * k.kappa_script_plus),
            c(0.5 * cc * cc, -0.5 * cc * s * d),
            c(-0.5 * cc * cc, -0.5 * cc * s * d),
            i(4.0 * s * s * k.kappa_script_minus),
        ],
        [
            i(-4.0 * s * s * k.kappa_script_plus),
            c(-0.5 * cc * cc, 0.5 * cc * s * d),
            c(0.5 * cc * cc, 0.5 * cc * s * d),
            i(-4.0 * s * s * k.kappa_script_minus),
        ],
        [
            r(cc * cc + 2.0 * s * s * k.mu_plus),
            r(off),
            r(off),
            r(cc * cc + 2.0 * s * s * k.mu_minus),
        ],
    ])
}

/// Closed-form Choi matrix of `Φ₁`, including its global `½`.
pub fn analytic_choi_phi1(p: &QubitScenarioParams, two_omega_t: f64) -> ComplexMatrix {
    let k = derived_constants(p);
    let (cc, s) = cs(two_omega_t);
    let r = |x: f64| c(0.5 * x, 0.0);
    let i = |x: f64| c(0.0, 0.5 * x);
    let d = k.mu_plus - k.mu_minus;
    let off = 2.0 * s * cc * (k.kappa_script_minus - k.kappa_script_plus);
    matrix4([
        [
            r(cc * cc + 2.0 * s * s * k.mu_plus),
            r(off),
            i(4.0 * s * s * k.kappa_script_plus),
            c(0.5 * cc * cc, -0.5 * cc * s * d),
        ],
        [
            r(off),
            r(cc * cc + 2.0 * s * s * k.mu_minus),
            c(-0.5 * cc * cc, -0.5 * cc * s * d),
            i(4.0 * s * s * k.kappa_script_minus),
        ],
        [
            i(-4.0 * s * s * k.kappa_script_plus),
            c(-0.5 * cc * cc, 0.5 * cc * s * d),
            r(cc * cc + 2.0 * s * s * k.mu_plus),
            r(off),
        ],
        [
            c(0.5 * cc * cc, 0.5 * cc * s * d),
            i(-4.0 * s * s * k.kappa_script_minus),
            r(off),
            r(cc * cc + 2.0 * s * s * k.mu_minus),
        ],
    ])
}

pub fn analytic_choi_phi2(p: &QubitScenarioParams, two_omega_t: f64) -> ComplexMatrix {
    let k = derived_constants(p);
    let (cc, s) = cs(two_omega_t);
    let r = |x: f64| c(x, 0.0);
    let i = |x: f64| c(0.0, x);
    let sc = s * cc * (k.kappa_script_minus - k.kappa_script_plus);
    matrix4([
        [
            r(cc * cc * k.chi_plus + s * s * k.mu_plus),
            r(sc),
            i(2.0 * s * s * k.kappa_script_plus),
            c(cc * cc * k.chi_plus, -cc * s * k.chi_minus),
        ],
        [
            r(sc),
            r(cc * cc * k.kappa_plus + s * s * k.mu_minus),
            c(-cc * cc * k.kappa_plus, -cc * s * k.kappa_minus),
            i(2.0 * s * s * k.kappa_script_minus),
        ],
        [
            i(-2.0 * s * s * k.kappa_script_plus),
            c(-cc * cc * k.kappa_plus, cc * s * k.kappa_minus),
            r(cc * cc * k.kappa_plus + s * s * k.mu_plus),
            r(sc),
        ],
        [
            c(cc * cc * k.chi_plus, cc * s * k.chi_minus),
            i(-2.0 * s * s * k.kappa_script_minus),
            r(sc),
            r(cc * cc * k.chi_plus + s * s * k.mu_minus),
        ],
    ])
}

/// Parameters of `ρ_SE = ¼[1⊗1 + y σ_y⊗1 − χ σ_y⊗σ_z]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JpaParams {
    pub y: f64,
    pub chi: f64,
    pub a_plus: f64,
    pub a_minus: f64,
    pub b: f64,
}

impl JpaParams {
    /// Requires `|y| < 1` and `|y| + |χ| ≤ 1`; the latter is positivity of
    /// the state and implies `χ² ≤ 1 − y²`.
    pub fn new(y: f64, chi: f64) -> Result<Self> {
        if !y.is_finite() || !chi.is_finite() {
            return Err(Error::NonFinite);
        }
        if y.abs() >= 1.0 {
            return Err(Error::InvalidParams(format!("|y| = {} must be below 1", y.abs())));
        }
        if chi * chi > 1.0 - y * y {
            return Err(Error::InvalidParams(format!("chi^2 = {} exceeds 1 - y^2 = {}", chi * chi, 1.0 - y * y)));
        }
        if y.abs() + chi.abs() > 1.0 + 1e-15 {
            return Err(Error::InvalidParams(format!(
                "|y| + |chi| = {} exceeds 1, the state is not positive",
                y.abs() + chi.abs()
            )));
        }
        let r = 1.0 - y * y;
        let root_p = ((1.0 - (y + chi).powi(2)) / r).max(0.0).sqrt();
        let root_m = ((1.0 - (y - chi).powi(2)) / r).max(0.0).sqrt();
        Ok(JpaParams {
            y,
            chi,
            a_plus: 0.5 * (root_p + root_m),
            a_minus: 0.5 * (root_p - root_m),
            b: chi / r,
        })
    }

    /// `p₁ = (1+y)/2`, `λ₊₁ = ½(1 − χ/(1+y))`, `λ₊₂ = ½(1 + χ/(1−y))`.
    pub fn scenario_params(&self) -> Result<QubitScenarioParams> {
        let (y, chi) = (self.y, self.chi);
        QubitScenarioParams::new(0.5 * (1.0 + y), 0.5 * (1.0 - chi / (1.0 + y)), 0.5 * (1.0 + chi / (1.0 - y)))
    }

    /// `¼[1⊗1 + y σ_y⊗1 − χ σ_y⊗σ_z]`
    pub fn composite_state(&self) -> Result<DensityMatrix> {
        use crate::linalg::{kron, pauli_y, pauli_z};
        let id = ComplexMatrix::identity(2);
        let mut m = ComplexMatrix::identity(4);
        m += &kron(&pauli_y(), &id).scale_re(self.y);
        m += &kron(&pauli_y(), &pauli_z()).scale_re(-self.chi);
        DensityMatrix::new(m.scale_re(0.25))
    }
}

/// Closed-form Choi matrix of `Φ₂` in terms of `y`, `χ`.
pub fn jpa_choi(j: &JpaParams, two_omega_t: f64) -> ComplexMatrix {
    let (cc, s) = cs(two_omega_t);
    let (y, ap, am, b) = (j.y, j.a_plus, j.a_minus, j.b);
    let h = |re: f64, im: f64| c(0.5 * re, 0.5 * im);
    let c2 = cc * cc;
    let s2 = s * s;
    let scb = s * cc * b;
    matrix4([
        [
            h(c2 * (1.0 + ap) + s2 * (1.0 + y * b), 0.0),
            h(scb, 0.0),
            h(0.0, -s2 * b),
            h(c2 * (1.0 + ap), -cc * s * (y * b - am)),
        ],
        [
            h(scb, 0.0),
            h(c2 * (1.0 - ap) + s2 * (1.0 - y * b), 0.0),
            h(-c2 * (1.0 - ap), -cc * s * (y * b + am)),
            h(0.0, s2 * b),
        ],
        [
            h(0.0, s2 * b),
            h(-c2 * (1.0 - ap), cc * s * (y * b + am)),
            h(c2 * (1.0 - ap) + s2 * (1.0 + y * b), 0.0),
            h(scb, 0.0),
        ],
        [
            h(c2 * (1.0 + ap), cc * s * (y * b - am)),
            h(0.0, -s2 * b),
            h(scb, 0.0),
            h(c2 * (1.0 + ap) + s2 * (1.0 - y * b), 0.0),
        ],
    ])
}

/// Discordant class on `C^n`: projectors on `|0⟩ … |n−3⟩`, and
/// `ψ = (|n−2⟩, |n−1⟩, (|n−2⟩+|n−1⟩)/√2)` with weights `mu` on the last two
/// dimensions. Probabilities are uniform and the environment is a qubit with
/// distinct diagonal states.
pub fn discordant_spec(n: usize, mu: &[f64]) -> Result<CorrelatedClassSpec> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("discordant example needs n >= 2, got {n}")));
    }
    if mu.len() != 3 {
        return Err(Error::InvalidProbabilities(format!("expected 3 weights, got {}", mu.len())));
    }
    let (a, b) = (basis_vector(n, n - 2), basis_vector(n, n - 1));
    let plus: CVector = a.iter().zip(&b).map(|(x, y)| (x + y) * H).collect();
    let psi = NonOrthogonalDecomposition::new(mu.to_vec(), vec![a, b, plus])?;
    let d = n - 1;
    let phi: Vec<CVector> = (0..n - 2).map(|k| basis_vector(n, k)).collect();
    let diag = |x: f64| DensityMatrix::diagonal(&[x, 1.0 - x]);
    let rho_env = (0..n - 2).map(|i| diag(1.0 / (i as f64 + 3.0))).collect::<Result<Vec<_>>>()?;
    let varrho_env = [0.9, 0.6, 0.15].iter().map(|&x| diag(x)).collect::<Result<Vec<_>>>()?;
    CorrelatedClassSpec::class_ii(vec![1.0 / d as f64; d], phi, psi, rho_env, varrho_env)
}

/// Reduced map selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    Phi1,
    Phi2,
    PhiII,
}

impl FromStr for MapKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "phi1" => Ok(MapKind::Phi1),
            "phi2" => Ok(MapKind::Phi2),
            "phiII" => Ok(MapKind::PhiII),
            other => Err(Error::InvalidParams(format!("unknown map '{other}', expected phi1, phi2 or phiII"))),
        }
    }
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MapKind::Phi1 => "phi1",
            MapKind::Phi2 => "phi2",
            MapKind::PhiII => "phiII",
        })
    }
}

pub const CASE_NAMES: [&str; 4] = ["cesar", "jpa", "figure", "discordant-uniform"];

/// A class spec together with its coupling and, for the qubit cases, the
/// parameters feeding the closed-form oracles.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub spec: CorrelatedClassSpec,
    pub interaction: Interaction,
    pub qubit: Option<QubitScenarioParams>,
    pub jpa: Option<JpaParams>,
}

impl Scenario {
    pub fn new(name: impl Into<String>, spec: CorrelatedClassSpec, interaction: Option<Interaction>) -> Self {
        let interaction = interaction.unwrap_or_else(|| Interaction::default_for(spec.n(), spec.dim_e()));
        Scenario {
            name: name.into(),
            spec,
            interaction,
            qubit: None,
            jpa: None,
        }
    }

    pub fn qubit(name: &str, params: QubitScenarioParams) -> Result<Self> {
        Ok(Scenario {
            name: name.into(),
            spec: params.spec()?,
            interaction: Interaction::QubitHeisenberg,
            qubit: Some(params),
            jpa: None,
        })
    }

    pub fn jpa_case(name: &str, j: JpaParams) -> Result<Self> {
        let mut s = Scenario::qubit(name, j.scenario_params()?)?;
        s.jpa = Some(j);
        Ok(s)
    }

    pub fn named(name: &str) -> Result<Self> {
        match name {
            "cesar" => Scenario::qubit(name, QubitScenarioParams::new(0.6, 0.3, 0.8)?),
            "jpa" => Scenario::jpa_case(name, JpaParams::new(0.5, 0.25)?),
            "figure" => Scenario::jpa_case(name, JpaParams::new(0.2, -0.4)?),
            "discordant-uniform" => {
                let spec = discordant_spec(3, &[1.0 / 3.0; 3])?;
                Ok(Scenario::new(name, spec, None))
            }
            other => Err(Error::InvalidParams(format!(
                "unknown case '{other}', expected one of {}",
                CASE_NAMES.join(", ")
            ))),
        }
    }

    pub fn unitary(&self, t: f64) -> Result<ComplexMatrix> {
        self.interaction.unitary(t, self.spec.n(), self.spec.dim_e())
    }

    pub fn kraus(&self, map: MapKind, t: f64) -> Result<KrausSet> {
        let u = self.unitary(t)?;
        match map {
            MapKind::Phi1 => build_phi1_kraus(&self.spec, &u, t),
            MapKind::Phi2 => build_phi2_kraus(&self.spec, &u, t),
            MapKind::PhiII => build_phi_ii_kraus(&self.spec, &u, t),
        }
    }

    pub fn rep(&self, map: MapKind, t: f64) -> Result<ChannelRep> {
        Ok(rep_from_kraus(&self.kraus(map, t)?))
    }

    /// Map matching the class of the spec: `Φ^II` for class II, `Φ₂` otherwise.
    pub fn default_map(&self) -> MapKind {
        if self.spec.is_class_ii() {
            MapKind::PhiII
        } else {
            MapKind::Phi2
        }
    }

    /// Extreme points of the compatibility domain plus the marginal. Maps
    /// are linear, so agreement on these implies agreement on the domain.
    pub fn domain_samples(&self) -> Result<Vec<DensityMatrix>> {
        let d = self.spec.d();
        let mut out = Vec::with_capacity(d + 1);
        for k in 0..d {
            let mut e = vec![0.0; d];
            e[k] = 1.0;
            out.push(domain_member(&self.spec, &e)?);
        }
        out.push(marginal(&self.spec));
        Ok(out)
    }

    /// Representation of the pinching `Φ_d` over the spec's full basis.
    pub fn pinching_rep(&self) -> Result<ChannelRep> {
        rep_from_map(self.spec.n(), |w| diagonalizing_projection(&self.spec, w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::channel_distance;
    use crate::channels::{apply_kraus, invariant_povm};
    use crate::linalg::{frobenius_distance, hermitian_eig, min_eigenvalue};
    use crate::states::assemble_composite;

    #[test]
    fn equal_environments_zero_deltas() {
        let p = QubitScenarioParams::new(0.4, 0.3, 0.3).unwrap();
        let k = derived_constants(&p);
        assert_eq!(k.delta_plus, 0.0);
        assert_eq!(k.kappa_script_minus, 0.0);
        assert_eq!(k.kappa_plus, 0.0);
        assert!((k.mu_plus - 0.3).abs() < 1e-15);
    }

    #[test]
    fn figure_constants() {
        let j = JpaParams::new(0.2, -0.4).unwrap();
        let p = j.scenario_params().unwrap();
        assert!((p.lam_plus_1 - 2.0 / 3.0).abs() < 1e-15);
        assert!((p.lam_plus_2 - 0.25).abs() < 1e-15);
        let k = derived_constants(&p);
        let (a, b) = k.constraint_defects();
        assert!(a < 1e-15 && b < 1e-15);
        let s = ((2.0f64 / 3.0).sqrt() + 0.5) / 2.0;
        assert!((k.sigma_plus - s).abs() < 1e-15);
        assert!((j.b + 5.0 / 12.0).abs() < 1e-15);
        assert!((j.a_plus - 0.5 * (1.0 + 2.0 / 6f64.sqrt())).abs() < 1e-15);
        assert!((j.a_minus - 0.5 * (1.0 - 2.0 / 6f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn jpa_limits_and_errors() {
        let j = JpaParams::new(0.3, 0.0).unwrap();
        assert_eq!((j.b, j.a_plus, j.a_minus), (0.0, 1.0, 0.0));
        assert!(JpaParams::new(1.0, 0.0).is_err());
        assert!(JpaParams::new(0.5, 0.9).is_err());
        assert!(JpaParams::new(-0.5, 0.7).is_err());
        assert!(QubitScenarioParams::new(1.2, 0.5, 0.5).is_err());
        assert!(QubitScenarioParams::new(0.5, -0.1, 0.5).is_err());
    }

    #[test]
    fn jpa_state_matches_class_assembly() {
        let j = JpaParams::new(0.2, -0.4).unwrap();
        let spec = j.scenario_params().unwrap().spec().unwrap();
        let a = assemble_composite(&spec).unwrap();
        let b = j.composite_state().unwrap();
        assert!(frobenius_distance(a.matrix(), b.matrix()).unwrap() < 1e-15);
    }

    #[test]
    fn analytic_matches_numeric_at_one_time() {
        let p = QubitScenarioParams::new(0.6, 0.3, 0.8).unwrap();
        let s = Scenario::qubit("cesar", p).unwrap();
        let t = 0.83;
        let r2 = s.rep(MapKind::Phi2, t).unwrap();
        let r1 = s.rep(MapKind::Phi1, t).unwrap();
        assert!(frobenius_distance(&r2.lambda().transpose(), &analytic_lambda_phi2(&p, t)).unwrap() < 1e-14);
        assert!(frobenius_distance(&r1.lambda().transpose(), &analytic_lambda_phi1(&p, t)).unwrap() < 1e-14);
        assert!(frobenius_distance(r2.choi(), &analytic_choi_phi2(&p, t)).unwrap() < 1e-14);
        assert!(frobenius_distance(r1.choi(), &analytic_choi_phi1(&p, t)).unwrap() < 1e-14);
    }

    #[test]
    fn choi_at_zero_time() {
        let p = QubitScenarioParams::new(0.6, 0.3, 0.8).unwrap();
        let m = analytic_choi_phi1(&p, 0.0);
        let expect = ComplexMatrix::from_real_rows(&[
            &[1.0, 0.0, 0.0, 1.0],
            &[0.0, 1.0, -1.0, 0.0],
            &[0.0, -1.0, 1.0, 0.0],
            &[1.0, 0.0, 0.0, 1.0],
        ])
        .scale_re(0.5);
        assert!(frobenius_distance(&m, &expect).unwrap() < 1e-15);
        for t in [0.0, 0.4, 1.3, 2.9] {
            assert!((analytic_choi_phi1(&p, t).trace().re - 2.0).abs() < 1e-14);
            assert!((analytic_choi_phi2(&p, t).trace().re - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn jpa_equals_phi2_choi() {
        for (y, chi) in [(0.2, -0.4), (0.5, 0.3), (-0.3, 0.6), (0.0, 0.9)] {
            let j = JpaParams::new(y, chi).unwrap();
            let p = j.scenario_params().unwrap();
            for t in [0.0, 0.74, 2.2] {
                let d = frobenius_distance(&jpa_choi(&j, t), &analytic_choi_phi2(&p, t)).unwrap();
                assert!(d < 1e-14, "{y} {chi} {t}: {d}");
                assert!(min_eigenvalue(&jpa_choi(&j, t)).unwrap() > -1e-12);
            }
        }
    }

    #[test]
    fn uniform_w_eigendata() {
        let spec = discordant_spec(2, &[1.0 / 3.0; 3]).unwrap();
        let w = spec.w_matrix();
        let expect = ComplexMatrix::from_real_rows(&[&[0.5, 1.0 / 6.0], &[1.0 / 6.0, 0.5]]);
        assert!(frobenius_distance(&w, &expect).unwrap() < 1e-15);
        let e = hermitian_eig(&w).unwrap();
        assert!((e.eigenvalues[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((e.eigenvalues[1] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_and_orthogonal_weights() {
        let spec = discordant_spec(3, &[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(spec.w_block().len(), 1);
        let (_, povm) = invariant_povm(&spec).unwrap();
        assert!(povm.completeness_defect() < 1e-12);
        let s = Scenario::new("x", spec, None);
        let ks = s.kraus(MapKind::PhiII, 0.7).unwrap();
        let lhs = apply_kraus(&ks, &marginal(&s.spec)).unwrap();
        let rhs = crate::channels::oracle_reduced(&assemble_composite(&s.spec).unwrap(), &s.unitary(0.7).unwrap(), 3)
            .unwrap();
        assert!(frobenius_distance(lhs.matrix(), rhs.matrix()).unwrap() < 1e-12);

        let spec = discordant_spec(2, &[0.5, 0.5, 0.0]).unwrap();
        let (link, _) = invariant_povm(&spec).unwrap();
        for row in link.lambda().iter().take(2) {
            let ones = row.iter().filter(|x| (**x - 1.0).abs() < 1e-12).count();
            let zeros = row.iter().filter(|x| x.abs() < 1e-12).count();
            assert_eq!((ones, zeros), (1, 1));
        }
        assert!(discordant_spec(1, &[1.0, 0.0, 0.0]).is_err());
        assert!(discordant_spec(3, &[0.5, 0.6, 0.0]).is_err());
    }

    #[test]
    fn named_cases_build() {
        for name in CASE_NAMES {
            let s = Scenario::named(name).unwrap();
            let ks = s.kraus(s.default_map(), 0.5).unwrap();
            assert!(ks.tp_defect() < 1e-12);
        }
        assert!(Scenario::named("nope").is_err());
        assert!("phi3".parse::<MapKind>().is_err());
        assert_eq!("phiII".parse::<MapKind>().unwrap(), MapKind::PhiII);
    }

    #[test]
    fn phi1_and_phi2_split_off_domain() {
        let s = Scenario::named("figure").unwrap();
        let t = 0.9;
        let a = s.rep(MapKind::Phi1, t).unwrap();
        let b = s.rep(MapKind::Phi2, t).unwrap();
        let dom = s.domain_samples().unwrap();
        assert!(channel_distance(&a, &b, Some(&dom)).unwrap() < 1e-12);
        assert!(channel_distance(&a, &b, None).unwrap() > 1e-3);
        let composed = b.compose(&s.pinching_rep().unwrap()).unwrap();
        assert!(channel_distance(&a, &composed, None).unwrap() < 1e-12);
    }
}
