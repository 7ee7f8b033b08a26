//! Verification suites, time sweeps and golden reproductions over a
//! [`Scenario`].

use serde::Serialize;

use crate::analysis::{bloch_image, channel_distance, cp_report, ChannelRep, DEFAULT_BLOCH_SAMPLES};
use crate::channels::{apply_kraus, invariant_povm, oracle_reduced};
use crate::error::{Error, Result};
use crate::io::{to_json_string, write_bloch_csv, SweepRow};
use crate::linalg::{frobenius_distance, ComplexMatrix, DEFAULT_TOL};
use crate::scenarios::{
    analytic_choi_phi1, analytic_choi_phi2, analytic_lambda_phi1, analytic_lambda_phi2, jpa_choi, MapKind,
    Scenario,
};
use crate::states::{class_member, domain_member, marginal};

/// Tolerance for analytic-versus-numeric matrix comparisons.
pub const GOLDEN_TOL: f64 = 1e-9;

/// Values of `2ωt` at which reproductions are written.
pub const FIGURE_TIMES: [f64; 5] = [
    0.0,
    std::f64::consts::FRAC_PI_8,
    std::f64::consts::FRAC_PI_4,
    3.0 * std::f64::consts::FRAC_PI_8,
    std::f64::consts::FRAC_PI_2,
];

/// Times used by `verify` when none is given.
pub const VERIFY_TIMES: [f64; 5] = [0.0, 0.3, 0.9, std::f64::consts::FRAC_PI_2, 2.0];

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            value,
            threshold,
            pass: value.is_finite() && value <= threshold,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub scenario: String,
    pub tol: f64,
    pub checks: Vec<Check>,
    pub pass: bool,
}

/// Largest entrywise modulus of `a − b`.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.dims() != b.dims() {
        return Err(Error::Dimension("matrices differ in shape".into()));
    }
    Ok((a - b).max_abs())
}

fn map_checks(s: &Scenario, map: MapKind, t: f64, tol: f64, out: &mut Vec<Check>) -> Result<ChannelRep> {
    let ks = s.kraus(map, t)?;
    let rep = crate::analysis::rep_from_kraus(&ks);
    let report = cp_report(&rep, tol)?;
    out.push(Check::at_most(format!("{map} t={t} tp_defect"), ks.tp_defect(), tol));
    out.push(Check::at_most(format!("{map} t={t} choi_negativity"), (-report.min_choi_eig).max(0.0), tol));
    let u = s.unitary(t)?;
    let mut worst: f64 = 0.0;
    for k in 0..s.spec.d() {
        let mut e = vec![0.0; s.spec.d()];
        e[k] = 1.0;
        let rho_se = class_member(&s.spec, &e)?;
        let lhs = apply_kraus(&ks, &domain_member(&s.spec, &e)?)?;
        let rhs = oracle_reduced(&rho_se, &u, s.spec.n())?;
        worst = worst.max(frobenius_distance(lhs.matrix(), rhs.matrix())?);
    }
    out.push(Check::at_most(format!("{map} t={t} oracle_equivalence"), worst, tol));
    Ok(rep)
}

/// Trace preservation, complete positivity, oracle equivalence on the
/// extreme points of the compatibility domain, POVM and GHJW checks for
/// class II, the composition identity for class I and, for the qubit cases,
/// agreement with the closed-form matrices.
pub fn verify(s: &Scenario, tol: f64, times: &[f64]) -> Result<VerifyReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParams(format!("tolerance must be positive, got {tol}")));
    }
    let mut checks = Vec::new();
    let spec = &s.spec;
    let rho = marginal(spec);
    let composite = crate::states::assemble_composite(spec)?;
    let traced = crate::linalg::partial_trace_env(composite.matrix(), spec.n(), spec.dim_e())?;
    checks.push(Check::at_most("marginal_consistency", frobenius_distance(&traced, rho.matrix())?, tol));

    if spec.is_class_ii() {
        let (link, povm) = invariant_povm(spec)?;
        let psi = spec.psi_block().expect("class II");
        checks.push(Check::at_most("ghjw_isometry_defect", link.isometry_defect(), tol));
        checks.push(Check::at_most("ghjw_link_defect", link.link_defect(spec.w_block(), psi), tol));
        checks.push(Check::at_most("povm_completeness", povm.completeness_defect(), tol));
        checks.push(Check::at_most("povm_invariance_marginal", povm.invariance_defect(rho.matrix()), tol));
        let w = spec.w_matrix();
        checks.push(Check::at_most("w_invariance", frobenius_distance(&povm.k_channel(&w), &w)?, tol));
        for &t in times {
            map_checks(s, MapKind::PhiII, t, tol, &mut checks)?;
        }
    } else {
        let dom = s.domain_samples()?;
        let pinch = s.pinching_rep()?;
        for &t in times {
            let r1 = map_checks(s, MapKind::Phi1, t, tol, &mut checks)?;
            let r2 = map_checks(s, MapKind::Phi2, t, tol, &mut checks)?;
            checks.push(Check::at_most(
                format!("phi1_vs_phi2 t={t} domain_distance"),
                channel_distance(&r1, &r2, Some(&dom))?,
                tol,
            ));
            let composed = r2.compose(&pinch)?;
            checks.push(Check::at_most(
                format!("composition t={t}"),
                channel_distance(&r1, &composed, None)?,
                tol,
            ));
            if let Some(p) = &s.qubit {
                let golden = [
                    ("lambda_phi1", r1.lambda().transpose(), analytic_lambda_phi1(p, t)),
                    ("lambda_phi2", r2.lambda().transpose(), analytic_lambda_phi2(p, t)),
                    ("choi_phi1", r1.choi().clone(), analytic_choi_phi1(p, t)),
                    ("choi_phi2", r2.choi().clone(), analytic_choi_phi2(p, t)),
                ];
                for (name, numeric, analytic) in golden {
                    checks.push(Check::at_most(
                        format!("golden {name} t={t}"),
                        max_abs_diff(&numeric, &analytic)?,
                        tol,
                    ));
                }
            }
            if let Some(j) = &s.jpa {
                checks.push(Check::at_most(
                    format!("golden choi_jpa t={t}"),
                    max_abs_diff(r2.choi(), &jpa_choi(j, t))?,
                    tol,
                ));
            }
        }
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(VerifyReport {
        scenario: s.name.clone(),
        tol,
        checks,
        pass,
    })
}

/// Evenly spaced times `t_k = t_max·k/(steps−1)`.
pub fn time_grid(t_max: f64, steps: usize) -> Result<Vec<f64>> {
    if t_max.is_nan() || t_max <= 0.0 || !t_max.is_finite() {
        return Err(Error::InvalidParams(format!("t-max must be positive, got {t_max}")));
    }
    if steps < 2 {
        return Err(Error::InvalidParams(format!("steps must be at least 2, got {steps}")));
    }
    Ok((0..steps).map(|k| t_max * k as f64 / (steps - 1) as f64).collect())
}

/// `Φ₁` against `Φ₂` along a time grid; class-I scenarios only.
pub fn sweep(s: &Scenario, t_max: f64, steps: usize) -> Result<Vec<SweepRow>> {
    if s.spec.is_class_ii() {
        return Err(Error::WrongClass("sweep compares phi1 and phi2 and needs a class-I scenario".into()));
    }
    let grid = time_grid(t_max, steps)?;
    let dom = s.domain_samples()?;
    grid.into_iter()
        .map(|t| {
            let r1 = s.rep(MapKind::Phi1, t)?;
            let r2 = s.rep(MapKind::Phi2, t)?;
            let c1 = cp_report(&r1, DEFAULT_TOL)?;
            let c2 = cp_report(&r2, DEFAULT_TOL)?;
            Ok(SweepRow {
                t,
                min_choi_eig_phi1: c1.min_choi_eig,
                min_choi_eig_phi2: c2.min_choi_eig,
                tp_defect_phi1: c1.tp_defect,
                tp_defect_phi2: c2.tp_defect,
                dist_domain: channel_distance(&r1, &r2, Some(&dom))?,
                dist_full: channel_distance(&r1, &r2, None)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct DiffEntry {
    pub name: String,
    pub t: Option<f64>,
    pub max_abs_diff: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiffReport {
    pub case: String,
    pub entries: Vec<DiffEntry>,
    pub pass: bool,
}

/// Named output files and the diff report of a reproduction.
#[derive(Debug, Clone)]
pub struct Reproduction {
    pub files: Vec<(String, String)>,
    pub report: DiffReport,
}

#[derive(Serialize)]
struct LabelledMatrix<'a> {
    label: String,
    matrix: &'a ComplexMatrix,
}

fn diff(entries: &mut Vec<DiffEntry>, name: &str, t: Option<f64>, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    let d = max_abs_diff(a, b)?;
    entries.push(DiffEntry {
        name: name.into(),
        t,
        max_abs_diff: d,
        tol: GOLDEN_TOL,
        pass: d <= GOLDEN_TOL,
    });
    Ok(())
}

/// Closed-form matrices next to their numerical counterparts.
pub fn reproduce(case: &str) -> Result<Reproduction> {
    let s = Scenario::named(case)?;
    let mut files = vec![("scenario.json".to_string(), crate::io::scenario_to_json(&s)?)];
    let mut entries = Vec::new();

    if let Some(p) = s.qubit {
        files.push(("times.json".into(), to_json_string(&FIGURE_TIMES)?));
        for (k, &t) in FIGURE_TIMES.iter().enumerate() {
            let r1 = s.rep(MapKind::Phi1, t)?;
            let r2 = s.rep(MapKind::Phi2, t)?;
            let pairs = [
                ("lambda_phi1", r1.lambda().transpose(), analytic_lambda_phi1(&p, t)),
                ("lambda_phi2", r2.lambda().transpose(), analytic_lambda_phi2(&p, t)),
                ("choi_phi1", r1.choi().clone(), analytic_choi_phi1(&p, t)),
                ("choi_phi2", r2.choi().clone(), analytic_choi_phi2(&p, t)),
            ];
            for (name, numeric, analytic) in &pairs {
                diff(&mut entries, name, Some(t), numeric, analytic)?;
                files.push((format!("{name}_numeric_t{k}.json"), to_json_string(numeric)?));
                files.push((format!("{name}_analytic_t{k}.json"), to_json_string(analytic)?));
            }
            if let Some(j) = &s.jpa {
                let analytic = jpa_choi(j, t);
                diff(&mut entries, "choi_jpa", Some(t), r2.choi(), &analytic)?;
                files.push((format!("choi_jpa_analytic_t{k}.json"), to_json_string(&analytic)?));
            }
            if case == "figure" {
                for (map, rep) in [("phi1", &r1), ("phi2", &r2)] {
                    let mut buf = Vec::new();
                    write_bloch_csv(&mut buf, &bloch_image(rep, DEFAULT_BLOCH_SAMPLES)?)?;
                    files.push((format!("bloch_{map}_t{k}.csv"), String::from_utf8(buf).expect("ascii")));
                }
            }
        }
    } else {
        let (link, povm) = invariant_povm(&s.spec)?;
        let analytic = uniform_k_operators();
        let mut numeric = Vec::new();
        let mut printed = Vec::new();
        for (label, j, k, m) in &analytic {
            let op = &povm.k(*j, *k).expect("3x2 link").op;
            diff(&mut entries, &format!("K_{label}"), None, op, m)?;
            numeric.push(LabelledMatrix {
                label: label.clone(),
                matrix: op,
            });
            printed.push(LabelledMatrix {
                label: label.clone(),
                matrix: m,
            });
        }
        files.push(("k_operators_numeric.json".into(), to_json_string(&numeric)?));
        files.push(("k_operators_analytic.json".into(), to_json_string(&printed)?));
        files.push(("ghjw_lambda.json".into(), to_json_string(link.lambda())?));
        let w = s.spec.w_matrix();
        let inv = frobenius_distance(&povm.k_channel(&w), &w)?;
        entries.push(DiffEntry {
            name: "w_invariance".into(),
            t: None,
            max_abs_diff: inv,
            tol: GOLDEN_TOL,
            pass: inv <= GOLDEN_TOL,
        });
    }
    let pass = entries.iter().all(|e| e.pass);
    let report = DiffReport {
        case: case.into(),
        entries,
        pass,
    };
    files.push(("diff_report.json".into(), to_json_string(&report)?));
    Ok(Reproduction { files, report })
}

/// `K_{jk} = √λ_kj |ψ_k⟩⟨φ_j|` for the uniform discordant case embedded in
/// `C^3`, with `φ = (|+⟩, |−⟩)` and `ψ = (|0⟩, |1⟩, |+⟩)` on the last two
/// levels.
fn uniform_k_operators() -> Vec<(String, usize, usize, ComplexMatrix)> {
    use crate::linalg::{basis_vector, c};
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let zero = basis_vector(3, 1);
    let one = basis_vector(3, 2);
    let plus = vec![c(0.0, 0.0), c(h, 0.0), c(h, 0.0)];
    let minus = vec![c(0.0, 0.0), c(h, 0.0), c(-h, 0.0)];
    let op = |coef: f64, ket: &[num_complex::Complex64], bra: &[num_complex::Complex64]| {
        ComplexMatrix::outer(ket, bra).scale_re(coef)
    };
    let (q, hf) = (0.25f64.sqrt(), 0.5f64.sqrt());
    vec![
        ("+0".into(), 0, 0, op(q, &zero, &plus)),
        ("+1".into(), 0, 1, op(q, &one, &plus)),
        ("++".into(), 0, 2, op(hf, &plus, &plus)),
        ("-0".into(), 1, 0, op(hf, &zero, &minus)),
        ("-1".into(), 1, 1, op(hf, &one, &minus)),
        ("-+".into(), 1, 2, ComplexMatrix::zeros(3, 3)),
    ]
}
