//! Matrix representation, Choi matrix and diagnostics of channels.
//!
//! Conventions, for an `n`-level channel `Φ`:
//!
//! * `Λ[(i·n+j), (k·n+l)] = ⟨i|Φ[|k⟩⟨l|]|j⟩`, so `vec(Φ[X]) = Λ vec(X)` with
//!   row-major `vec`, and composition of channels is the matrix product.
//! * `Choi[(k·n+i), (l·n+j)] = Λ[(i·n+j), (k·n+l)]`, i.e.
//!   `Choi = Σ_kl |k⟩⟨l| ⊗ Φ[|k⟩⟨l|]` with the input factor first.
//!
//! The second map is not its own inverse, so [`lambda_from_choi`] is the
//! explicit inverse of [`choi_from_lambda`].

use serde::{Deserialize, Serialize};

use crate::channels::KrausSet;
use crate::error::{Error, Result};
use crate::linalg::{
    c, frobenius_distance, hermitian_eig_with_tol, partial_trace_env, pauli_x, pauli_y, pauli_z, ComplexMatrix,
    ONE,
};
use crate::states::DensityMatrix;

pub const DEFAULT_BLOCH_SAMPLES: usize = 400;

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRep {
    n: usize,
    lambda: ComplexMatrix,
    choi: ComplexMatrix,
}

impl ChannelRep {
    pub fn from_lambda(lambda: ComplexMatrix) -> Result<Self> {
        let n = side_root(&lambda)?;
        let choi = choi_from_lambda(&lambda)?;
        Ok(ChannelRep { n, lambda, choi })
    }

    pub fn from_choi(choi: ComplexMatrix) -> Result<Self> {
        let n = side_root(&choi)?;
        let lambda = lambda_from_choi(&choi)?;
        Ok(ChannelRep { n, lambda, choi })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> &ComplexMatrix {
        &self.lambda
    }

    pub fn choi(&self) -> &ComplexMatrix {
        &self.choi
    }

    /// `Φ[X]` through `Λ`.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.n;
        if x.dims() != (n, n) {
            return Err(Error::Dimension(format!(
                "channel acts on {n}x{n}, got {}x{}",
                x.rows(),
                x.cols()
            )));
        }
        let out = self.lambda.mat_vec(x.data());
        ComplexMatrix::new(n, n, out)
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &ChannelRep) -> Result<ChannelRep> {
        if self.n != other.n {
            return Err(Error::Dimension(format!("cannot compose {}-level and {}-level channels", self.n, other.n)));
        }
        ChannelRep::from_lambda(self.lambda.dot(&other.lambda))
    }
}

fn side_root(m: &ComplexMatrix) -> Result<usize> {
    let side = m.rows();
    let n = (side as f64).sqrt().round() as usize;
    if !m.is_square() || n * n != side {
        return Err(Error::Dimension(format!(
            "channel matrices must be n²×n², got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(n)
}

pub fn choi_from_lambda(lambda: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = side_root(lambda)?;
    let mut out = ComplexMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    out[(k * n + i, l * n + j)] = lambda[(i * n + j, k * n + l)];
                }
            }
        }
    }
    Ok(out)
}

pub fn lambda_from_choi(choi: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = side_root(choi)?;
    let mut out = ComplexMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    out[(i * n + j, k * n + l)] = choi[(k * n + i, l * n + j)];
                }
            }
        }
    }
    Ok(out)
}

/// Representation of an arbitrary linear map given by its action on
/// operators.
pub fn rep_from_map(n: usize, f: impl Fn(&ComplexMatrix) -> Result<ComplexMatrix>) -> Result<ChannelRep> {
    if n == 0 {
        return Err(Error::Dimension("channel dimension must be positive".into()));
    }
    let mut lambda = ComplexMatrix::zeros(n * n, n * n);
    for k in 0..n {
        for l in 0..n {
            let mut e = ComplexMatrix::zeros(n, n);
            e[(k, l)] = ONE;
            let out = f(&e)?;
            if out.dims() != (n, n) {
                return Err(Error::Dimension("map must preserve the operator dimension".into()));
            }
            for i in 0..n {
                for j in 0..n {
                    lambda[(i * n + j, k * n + l)] = out[(i, j)];
                }
            }
        }
    }
    ChannelRep::from_lambda(lambda)
}

pub fn rep_from_kraus(ks: &KrausSet) -> ChannelRep {
    rep_from_map(ks.dim(), |x| ks.apply(x)).expect("Kraus operators are square")
}

/// Λ of `σ ↦ σᵀ`
pub fn transpose_rep(n: usize) -> ChannelRep {
    rep_from_map(n, |x| Ok(x.transpose())).expect("n > 0")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CpReport {
    pub min_choi_eig: f64,
    pub tp_defect: f64,
    pub is_cp: bool,
    pub tol: f64,
}

/// Minimum Choi eigenvalue and `‖Tr_out(Choi) − 1‖_F`.
///
/// The Choi matrix of a Hermiticity-preserving map is Hermitian; its
/// Hermitian part is used so that rounding noise does not block the check.
pub fn cp_report(rep: &ChannelRep, tol: f64) -> Result<CpReport> {
    let n = rep.n;
    let choi = rep.choi();
    let eig = hermitian_eig_with_tol(choi, 1e-8_f64.max(tol))?;
    let min_choi_eig = *eig.eigenvalues.last().expect("nonempty");
    let reduced = partial_trace_env(choi, n, n)?;
    let tp_defect = frobenius_distance(&reduced, &ComplexMatrix::identity(n))?;
    Ok(CpReport {
        min_choi_eig,
        tp_defect,
        is_cp: min_choi_eig >= -tol,
        tol,
    })
}

/// `‖Λ_a − Λ_b‖_F`, or the largest output distance over `domain` when given.
pub fn channel_distance(a: &ChannelRep, b: &ChannelRep, domain: Option<&[DensityMatrix]>) -> Result<f64> {
    if a.n != b.n {
        return Err(Error::Dimension(format!("channels act on {} and {} levels", a.n, b.n)));
    }
    match domain {
        None => frobenius_distance(&a.lambda, &b.lambda),
        Some(states) => {
            let mut worst: f64 = 0.0;
            for rho in states {
                let d = frobenius_distance(&a.apply(rho.matrix())?, &b.apply(rho.matrix())?)?;
                worst = worst.max(d);
            }
            Ok(worst)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochSample {
    pub input: [f64; 3],
    pub output: [f64; 3],
}

impl BlochSample {
    pub fn output_radius(&self) -> f64 {
        self.output.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// `samples` points of a Fibonacci lattice on the unit sphere.
pub fn fibonacci_sphere(samples: usize) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..samples)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / samples as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

/// `½(1 + x σ_x + y σ_y + z σ_z)`
pub fn bloch_state(v: [f64; 3]) -> ComplexMatrix {
    let mut m = ComplexMatrix::identity(2);
    m += &pauli_x().scale_re(v[0]);
    m += &pauli_y().scale_re(v[1]);
    m += &pauli_z().scale_re(v[2]);
    m.scale(c(0.5, 0.0))
}

pub fn bloch_vector(rho: &ComplexMatrix) -> [f64; 3] {
    [pauli_x(), pauli_y(), pauli_z()].map(|s| s.dot(rho).trace().re)
}

/// Images of pure states sampled on the Bloch sphere.
pub fn bloch_image(rep: &ChannelRep, samples: usize) -> Result<Vec<BlochSample>> {
    if rep.n != 2 {
        return Err(Error::Dimension(format!("Bloch images need a qubit channel, got n = {}", rep.n)));
    }
    fibonacci_sphere(samples)
        .into_iter()
        .map(|input| {
            let out = rep.apply(&bloch_state(input))?;
            Ok(BlochSample {
                input,
                output: bloch_vector(&out),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{KrausLabel, KrausSet};
    use crate::linalg::swap_operator;
    use crate::random;

    #[test]
    fn identity_rep() {
        let rep = rep_from_kraus(&KrausSet::identity(2));
        assert_eq!(rep.lambda(), &ComplexMatrix::identity(4));
        let mut corners = ComplexMatrix::zeros(4, 4);
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            corners[(i, j)] = ONE;
        }
        assert_eq!(rep.choi(), &corners);
        let report = cp_report(&rep, 1e-10).unwrap();
        assert!(report.min_choi_eig.abs() < 1e-15 && report.is_cp);
        assert!(report.tp_defect < 1e-15);
        let eig = crate::linalg::hermitian_eig(rep.choi()).unwrap();
        assert!((eig.eigenvalues[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn transpose_is_not_cp() {
        let report = cp_report(&transpose_rep(2), 1e-10).unwrap();
        assert!((report.min_choi_eig + 1.0).abs() < 1e-14);
        assert!(!report.is_cp);
        assert!(report.tp_defect < 1e-15);
    }

    #[test]
    fn reshuffle_roundtrip_and_non_square_input() {
        let mut rng = random::seeded(2);
        let m = random::ginibre(9, 9, &mut rng);
        let back = lambda_from_choi(&choi_from_lambda(&m).unwrap()).unwrap();
        assert_eq!(back, m);
        let back = choi_from_lambda(&lambda_from_choi(&m).unwrap()).unwrap();
        assert_eq!(back, m);
        assert!(choi_from_lambda(&ComplexMatrix::zeros(3, 3)).is_err());
        assert!(ChannelRep::from_lambda(ComplexMatrix::zeros(4, 2)).is_err());
    }

    #[test]
    fn composition_is_matrix_product() {
        let mut rng = random::seeded(8);
        let u = random::unitary(3, &mut rng);
        let v = random::unitary(3, &mut rng);
        let ku = KrausSet::new(vec![u.clone()], KrausLabel::Custom, 0.0).unwrap();
        let kv = KrausSet::new(vec![v.clone()], KrausLabel::Custom, 0.0).unwrap();
        let kuv = KrausSet::new(vec![u.dot(&v)], KrausLabel::Custom, 0.0).unwrap();
        let composed = rep_from_kraus(&ku).compose(&rep_from_kraus(&kv)).unwrap();
        assert!(channel_distance(&composed, &rep_from_kraus(&kuv), None).unwrap() < 1e-13);
    }

    #[test]
    fn rep_apply_matches_kraus() {
        let mut rng = random::seeded(4);
        let u = random::unitary(6, &mut rng);
        let ops: Vec<ComplexMatrix> = (0..2)
            .map(|g| crate::channels::env_sandwich(&u, &crate::linalg::basis_vector(2, g), &crate::linalg::basis_vector(2, 0)).unwrap())
            .collect();
        let ks = KrausSet::new(ops, KrausLabel::Custom, 0.0).unwrap();
        let rep = rep_from_kraus(&ks);
        let rho = random::density_matrix(3, 2, &mut rng);
        let a = rep.apply(rho.matrix()).unwrap();
        let b = ks.apply(rho.matrix()).unwrap();
        assert!(frobenius_distance(&a, &b).unwrap() < 1e-14);
        let report = cp_report(&rep, 1e-10).unwrap();
        assert!(report.is_cp && report.tp_defect < 1e-12);
        assert!((rep.choi().trace().re - 3.0).abs() < 1e-12);
        assert!(rep.choi().hermiticity_defect() < 1e-12);
    }

    #[test]
    fn distances() {
        let id = rep_from_kraus(&KrausSet::identity(2));
        assert_eq!(channel_distance(&id, &id, None).unwrap(), 0.0);
        let t = transpose_rep(2);
        assert!((channel_distance(&id, &t, None).unwrap() - 2.0).abs() < 1e-15);
        // transpose fixes real symmetric states
        let real = [DensityMatrix::diagonal(&[0.2, 0.8]).unwrap()];
        assert_eq!(channel_distance(&id, &t, Some(&real)).unwrap(), 0.0);
        assert!(channel_distance(&id, &transpose_rep(3), None).is_err());
    }

    #[test]
    fn bloch_unitary_depolarizing_and_pinching() {
        let h = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, -1.0]]).scale_re(std::f64::consts::FRAC_1_SQRT_2);
        let ks = KrausSet::new(vec![h], KrausLabel::Custom, 0.0).unwrap();
        for s in bloch_image(&rep_from_kraus(&ks), 50).unwrap() {
            assert!((s.output_radius() - 1.0).abs() < 1e-12);
            assert!((s.output[0] - s.input[2]).abs() < 1e-12);
        }

        let dep = rep_from_map(2, |x| Ok(ComplexMatrix::identity(2).scale(x.trace() * 0.5))).unwrap();
        for s in bloch_image(&dep, 30).unwrap() {
            assert!(s.output_radius() < 1e-15);
        }

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let basis = vec![vec![c(h, 0.0), c(0.0, h)], vec![c(h, 0.0), c(0.0, -h)]];
        let pinch = rep_from_map(2, |x| Ok(crate::channels::pinch(&basis, x))).unwrap();
        for s in bloch_image(&pinch, 40).unwrap() {
            assert!(s.output[0].abs() < 1e-15 && s.output[2].abs() < 1e-15);
            assert!((s.output[1] - s.input[1]).abs() < 1e-15);
        }
        let three = rep_from_kraus(&KrausSet::identity(3));
        assert!(bloch_image(&three, 10).is_err());
    }

    #[test]
    fn fibonacci_points_are_unit() {
        let pts = fibonacci_sphere(DEFAULT_BLOCH_SAMPLES);
        assert_eq!(pts.len(), 400);
        for p in pts {
            let r: f64 = p.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((r - 1.0).abs() < 1e-14);
        }
        let centroid: f64 = fibonacci_sphere(400).iter().map(|p| p[2]).sum();
        assert!(centroid.abs() < 1e-9);
    }

    #[test]
    fn swap_channel_traces_out() {
        // Tr_E[SWAP (ρ⊗σ) SWAP] = σ
        let sigma = DensityMatrix::diagonal(&[0.25, 0.75]).unwrap();
        let rep = rep_from_map(2, |x| {
            let big = crate::linalg::kron(x, sigma.matrix());
            crate::channels::evolve_and_trace(&big, &swap_operator(2), 2)
        })
        .unwrap();
        for s in bloch_image(&rep, 20).unwrap() {
            assert!((s.output[2] + 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn report_json_shape() {
        let r = CpReport {
            min_choi_eig: 0.0,
            tp_defect: 0.0,
            is_cp: true,
            tol: 1e-10,
        };
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, r#"{"min_choi_eig":0.0,"tp_defect":0.0,"is_cp":true,"tol":1e-10}"#);
    }
}
