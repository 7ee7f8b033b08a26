//! Acceptance criteria 1–10. Each criterion prints one PASS/FAIL line; the
//! reference values below are written out independently of the library.

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::{Duration, Instant};

use cpmaps::analysis::{channel_distance, cp_report, rep_from_kraus, rep_from_map};
use cpmaps::channels::{
    apply_kraus, build_phi2_kraus, build_phi2_kraus_in_basis, build_phi_ii_kraus, build_phi_ii_kraus_in_basis,
    invariant_povm,
};
use cpmaps::linalg::{kron, min_eigenvalue, ComplexMatrix};
use cpmaps::random::{self, SpecShape};
use cpmaps::scenarios::{
    discordant_spec, phase_aligned_distance, qubit_unitary, qubit_unitary_compact, MapKind, QubitScenarioParams,
    Scenario,
};
use cpmaps::states::{ghjw_link, marginal, CorrelatedClassSpec, DensityMatrix};
use num_complex::Complex64;
use rand::Rng;

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);
type KRow<'a> = (usize, usize, f64, &'a [Complex64], &'a [Complex64]);

fn z(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn m4(rows: [[Complex64; 4]; 4]) -> ComplexMatrix {
    ComplexMatrix::from_fn(4, 4, |i, j| rows[i][j])
}

fn max_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.dims(), b.dims());
    let mut worst: f64 = 0.0;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            worst = worst.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    worst
}

fn fro(a: &ComplexMatrix) -> f64 {
    let mut s = 0.0;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            s += a[(i, j)].norm_sqr();
        }
    }
    s.sqrt()
}

fn sub(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)] - b[(i, j)])
}

fn outer(a: &[Complex64], b: &[Complex64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(a.len(), b.len(), |i, j| a[i] * b[j].conj())
}

/// `Tr_E[U ρ U†]` by explicit index contraction.
fn reduced_oracle(rho: &ComplexMatrix, u: &ComplexMatrix, ds: usize, de: usize) -> ComplexMatrix {
    let evolved = u.dot(rho).dot(&u.adjoint());
    ComplexMatrix::from_fn(ds, ds, |a, b| (0..de).map(|e| evolved[(a * de + e, b * de + e)]).sum())
}

/// `Σ_{i<d} p_i |φ_i⟩⟨φ_i| ⊗ ρ_i + p_d Σ_k μ_k |ψ_k⟩⟨ψ_k| ⊗ ϱ_k`
fn composite_oracle(spec: &CorrelatedClassSpec) -> ComplexMatrix {
    let d = spec.d();
    let mut acc = ComplexMatrix::zeros(spec.n() * spec.dim_e(), spec.n() * spec.dim_e());
    let mut add = |w: f64, v: &[Complex64], env: &DensityMatrix| {
        acc += &kron(&outer(v, v), env.matrix()).scale_re(w);
    };
    for i in 0..d - 1 {
        add(spec.p()[i], &spec.phi()[i], &spec.rho_env()[i]);
    }
    let pd = spec.p()[d - 1];
    match spec.psi_block() {
        Some(psi) => {
            for (k, (mu, v)) in psi.weights().iter().zip(psi.vectors()).enumerate() {
                add(pd * mu, v, &spec.varrho_env()[k]);
            }
        }
        None => {
            let w = spec.w_block();
            for (k, (mu, v)) in w.weights().iter().zip(w.vectors()).enumerate() {
                add(pd * mu, v, &spec.varrho_env()[k]);
            }
        }
    }
    acc
}

/// Constants of the qubit scenario built from the environment eigenvalues.
struct Consts {
    mu_p: f64,
    mu_m: f64,
    chi_p: f64,
    chi_m: f64,
    ka_p: f64,
    ka_m: f64,
    vk_p: f64,
    vk_m: f64,
}

fn consts(lp1: f64, lp2: f64) -> Consts {
    let (lm1, lm2) = (1.0 - lp1, 1.0 - lp2);
    let sp = (lp1.sqrt() + lp2.sqrt()) / 2.0;
    let sm = (lm1.sqrt() + lm2.sqrt()) / 2.0;
    let dp = (lp1.sqrt() - lp2.sqrt()) / 2.0;
    let dm = (lm1.sqrt() - lm2.sqrt()) / 2.0;
    Consts {
        mu_p: sp * sp + dp * dp,
        mu_m: sm * sm + dm * dm,
        chi_p: sp * sp + sm * sm,
        chi_m: sp * sp - sm * sm,
        ka_p: dp * dp + dm * dm,
        ka_m: dp * dp - dm * dm,
        vk_p: sp * dp,
        vk_m: sm * dm,
    }
}

fn golden_l2(k: &Consts, t: f64) -> ComplexMatrix {
    let (c, s) = (t.cos(), t.sin());
    let sc = s * c * (k.vk_m - k.vk_p);
    m4([
        [z(c * c * k.chi_p + s * s * k.mu_p, 0.0), z(sc, 0.0), z(sc, 0.0), z(c * c * k.ka_p + s * s * k.mu_m, 0.0)],
        [
            z(0.0, 2.0 * s * s * k.vk_p),
            z(c * c * k.chi_p, -c * s * k.chi_m),
            z(-c * c * k.ka_p, -c * s * k.ka_m),
            z(0.0, 2.0 * s * s * k.vk_m),
        ],
        [
            z(0.0, -2.0 * s * s * k.vk_p),
            z(-c * c * k.ka_p, c * s * k.ka_m),
            z(c * c * k.chi_p, c * s * k.chi_m),
            z(0.0, -2.0 * s * s * k.vk_m),
        ],
        [z(c * c * k.ka_p + s * s * k.mu_p, 0.0), z(sc, 0.0), z(sc, 0.0), z(c * c * k.chi_p + s * s * k.mu_m, 0.0)],
    ])
}

fn golden_l1(k: &Consts, t: f64) -> ComplexMatrix {
    let (c, s) = (t.cos(), t.sin());
    let off = 2.0 * s * c * (k.vk_m - k.vk_p);
    let dmu = k.mu_p - k.mu_m;
    let m = m4([
        [z(c * c + 2.0 * s * s * k.mu_p, 0.0), z(off, 0.0), z(off, 0.0), z(c * c + 2.0 * s * s * k.mu_m, 0.0)],
        [
            z(0.0, 4.0 * s * s * k.vk_p),
            z(c * c, -c * s * dmu),
            z(-c * c, -c * s * dmu),
            z(0.0, 4.0 * s * s * k.vk_m),
        ],
        [
            z(0.0, -4.0 * s * s * k.vk_p),
            z(-c * c, c * s * dmu),
            z(c * c, c * s * dmu),
            z(0.0, -4.0 * s * s * k.vk_m),
        ],
        [z(c * c + 2.0 * s * s * k.mu_p, 0.0), z(off, 0.0), z(off, 0.0), z(c * c + 2.0 * s * s * k.mu_m, 0.0)],
    ]);
    m.scale_re(0.5)
}

fn golden_choi1(k: &Consts, t: f64) -> ComplexMatrix {
    let (c, s) = (t.cos(), t.sin());
    let off = 2.0 * s * c * (k.vk_m - k.vk_p);
    let dmu = k.mu_p - k.mu_m;
    let m = m4([
        [
            z(c * c + 2.0 * s * s * k.mu_p, 0.0),
            z(off, 0.0),
            z(0.0, 4.0 * s * s * k.vk_p),
            z(c * c, -c * s * dmu),
        ],
        [
            z(off, 0.0),
            z(c * c + 2.0 * s * s * k.mu_m, 0.0),
            z(-c * c, -c * s * dmu),
            z(0.0, 4.0 * s * s * k.vk_m),
        ],
        [
            z(0.0, -4.0 * s * s * k.vk_p),
            z(-c * c, c * s * dmu),
            z(c * c + 2.0 * s * s * k.mu_p, 0.0),
            z(off, 0.0),
        ],
        [
            z(c * c, c * s * dmu),
            z(0.0, -4.0 * s * s * k.vk_m),
            z(off, 0.0),
            z(c * c + 2.0 * s * s * k.mu_m, 0.0),
        ],
    ]);
    m.scale_re(0.5)
}

fn golden_choi2(k: &Consts, t: f64) -> ComplexMatrix {
    let (c, s) = (t.cos(), t.sin());
    let sc = s * c * (k.vk_m - k.vk_p);
    m4([
        [
            z(c * c * k.chi_p + s * s * k.mu_p, 0.0),
            z(sc, 0.0),
            z(0.0, 2.0 * s * s * k.vk_p),
            z(c * c * k.chi_p, -c * s * k.chi_m),
        ],
        [
            z(sc, 0.0),
            z(c * c * k.ka_p + s * s * k.mu_m, 0.0),
            z(-c * c * k.ka_p, -c * s * k.ka_m),
            z(0.0, 2.0 * s * s * k.vk_m),
        ],
        [
            z(0.0, -2.0 * s * s * k.vk_p),
            z(-c * c * k.ka_p, c * s * k.ka_m),
            z(c * c * k.ka_p + s * s * k.mu_p, 0.0),
            z(sc, 0.0),
        ],
        [
            z(c * c * k.chi_p, c * s * k.chi_m),
            z(0.0, -2.0 * s * s * k.vk_m),
            z(sc, 0.0),
            z(c * c * k.chi_p + s * s * k.mu_m, 0.0),
        ],
    ])
}

fn golden_jpa(y: f64, chi: f64, t: f64) -> ComplexMatrix {
    let (c, s) = (t.cos(), t.sin());
    let r = 1.0 - y * y;
    let sp = ((1.0 - (y + chi).powi(2)) / r).sqrt();
    let sm = ((1.0 - (y - chi).powi(2)) / r).sqrt();
    let (ap, am) = ((sp + sm) / 2.0, (sp - sm) / 2.0);
    let b = chi / r;
    let (c2, s2) = (c * c, s * s);
    let m = m4([
        [
            z(c2 * (1.0 + ap) + s2 * (1.0 + y * b), 0.0),
            z(s * c * b, 0.0),
            z(0.0, -s2 * b),
            z(c2 * (1.0 + ap), -c * s * (y * b - am)),
        ],
        [
            z(s * c * b, 0.0),
            z(c2 * (1.0 - ap) + s2 * (1.0 - y * b), 0.0),
            z(-c2 * (1.0 - ap), -c * s * (y * b + am)),
            z(0.0, s2 * b),
        ],
        [
            z(0.0, s2 * b),
            z(-c2 * (1.0 - ap), c * s * (y * b + am)),
            z(c2 * (1.0 - ap) + s2 * (1.0 + y * b), 0.0),
            z(s * c * b, 0.0),
        ],
        [
            z(c2 * (1.0 + ap), c * s * (y * b - am)),
            z(0.0, -s2 * b),
            z(s * c * b, 0.0),
            z(c2 * (1.0 + ap) + s2 * (1.0 - y * b), 0.0),
        ],
    ]);
    m.scale_re(0.5)
}

fn times(count: usize) -> Vec<f64> {
    (0..count).map(|k| 2.0 * PI * k as f64 / count as f64).collect()
}

fn within(elapsed: Duration, limit_s: f64, what: &str) -> std::result::Result<(), String> {
    // Budgets are stated for optimized builds.
    let limit = if cfg!(debug_assertions) { 20.0 * limit_s } else { limit_s };
    if elapsed.as_secs_f64() > limit {
        return Err(format!("{what} took {:.2}s, budget {limit}s", elapsed.as_secs_f64()));
    }
    Ok(())
}

fn random_class_ii_shape(rng: &mut impl Rng) -> SpecShape {
    loop {
        let n = rng.gen_range(2..=4);
        let d = rng.gen_range(1..=3);
        if d > n {
            continue;
        }
        let m = rng.gen_range(1..=n - d + 1);
        let r = rng.gen_range(m..=4.max(m));
        if r > 4 {
            continue;
        }
        let dim_e = rng.gen_range(1..=3);
        return SpecShape { n, d, m, r, dim_e };
    }
}

fn random_class_i_shape(rng: &mut impl Rng) -> SpecShape {
    let n = rng.gen_range(2..=4);
    let d = rng.gen_range(1..=n.min(3));
    let m = rng.gen_range(1..=n - d + 1);
    SpecShape {
        n,
        d,
        m,
        r: 0,
        dim_e: rng.gen_range(1..=3),
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = random::seeded(101);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let shape = random_class_ii_shape(&mut rng);
        let spec = random::class_spec(shape, &mut rng);
        let u = random::unitary(shape.n * shape.dim_e, &mut rng);
        let ks = build_phi_ii_kraus(&spec, &u, 0.0).map_err(|e| e.to_string())?;
        let out = apply_kraus(&ks, &marginal(&spec)).map_err(|e| e.to_string())?;
        let oracle = reduced_oracle(&composite_oracle(&spec), &u, shape.n, shape.dim_e);
        worst = worst.max(fro(&sub(out.matrix(), &oracle)));
    }
    within(start.elapsed(), 10.0, "oracle sweep")?;
    if worst <= 1e-10 {
        Ok(format!("max Frobenius defect {worst:.3e} over 100 specs"))
    } else {
        Err(format!("defect {worst:.3e}"))
    }
}

fn qubit_draws(count: usize, seed: u64) -> Vec<QubitScenarioParams> {
    let mut rng = random::seeded(seed);
    (0..count)
        .map(|_| QubitScenarioParams::new(rng.gen(), rng.gen(), rng.gen()).expect("unit draws"))
        .collect()
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for p in qubit_draws(20, 202) {
        let s = Scenario::qubit("draw", p).map_err(|e| e.to_string())?;
        let k = consts(p.lam_plus_1, p.lam_plus_2);
        for t in times(50) {
            // The printed layout is indexed (output, input) the other way round.
            let l1 = s.rep(MapKind::Phi1, t).map_err(|e| e.to_string())?.lambda().transpose();
            let l2 = s.rep(MapKind::Phi2, t).map_err(|e| e.to_string())?.lambda().transpose();
            worst = worst.max(max_diff(&l1, &golden_l1(&k, t))).max(max_diff(&l2, &golden_l2(&k, t)));
        }
    }
    within(start.elapsed(), 5.0, "golden lambda grid")?;
    if worst <= 1e-10 {
        Ok(format!("max entrywise deviation {worst:.3e}"))
    } else {
        Err(format!("deviation {worst:.3e}"))
    }
}

fn criterion_3() -> Outcome {
    let (mut worst, mut trace_dev, mut min_eig) = (0.0f64, 0.0f64, f64::INFINITY);
    for p in qubit_draws(20, 202) {
        let s = Scenario::qubit("draw", p).map_err(|e| e.to_string())?;
        let k = consts(p.lam_plus_1, p.lam_plus_2);
        for t in times(50) {
            for (map, golden) in [(MapKind::Phi1, golden_choi1(&k, t)), (MapKind::Phi2, golden_choi2(&k, t))] {
                let choi = s.rep(map, t).map_err(|e| e.to_string())?.choi().clone();
                worst = worst.max(max_diff(&choi, &golden));
                let tr: Complex64 = (0..4).map(|i| choi[(i, i)]).sum();
                trace_dev = trace_dev.max((tr - 2.0).norm());
                min_eig = min_eig.min(min_eigenvalue(&choi).map_err(|e| e.to_string())?);
            }
        }
    }
    let msg = format!("deviation {worst:.3e}, trace defect {trace_dev:.3e}, min eigenvalue {min_eig:.3e}");
    if worst <= 1e-9 && trace_dev <= 1e-10 && min_eig >= -1e-10 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_4() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut points = 0;
    for a in 0..10 {
        let y = -0.9 + 1.8 * a as f64 / 9.0;
        for b in 0..10 {
            let chi = (1.0 - y.abs()) * (-0.95 + 1.9 * b as f64 / 9.0);
            assert!(chi * chi <= 1.0 - y * y);
            let lp1 = 0.5 * (1.0 - chi / (1.0 + y));
            let lp2 = 0.5 * (1.0 + chi / (1.0 - y));
            let p = QubitScenarioParams::new(0.5, lp1, lp2).map_err(|e| e.to_string())?;
            let s = Scenario::qubit("jpa-grid", p).map_err(|e| e.to_string())?;
            for t in times(25) {
                let choi = s.rep(MapKind::Phi2, t).map_err(|e| e.to_string())?.choi().clone();
                worst = worst.max(max_diff(&choi, &golden_jpa(y, chi, t)));
            }
            points += 1;
        }
    }
    if worst <= 1e-9 {
        Ok(format!("max deviation {worst:.3e} over {points} (y, chi) points x 25 times"))
    } else {
        Err(format!("deviation {worst:.3e}"))
    }
}

fn pinching_oracle(spec: &CorrelatedClassSpec) -> impl Fn(&ComplexMatrix) -> cpmaps::Result<ComplexMatrix> + '_ {
    move |w| {
        let n = spec.n();
        let mut acc = ComplexMatrix::zeros(n, n);
        for v in spec.full_basis() {
            let p = outer(&v, &v);
            acc += &p.dot(w).dot(&p);
        }
        Ok(acc)
    }
}

fn criterion_5() -> Outcome {
    let mut rng = random::seeded(505);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let spec = random::class_spec(random_class_i_shape(&mut rng), &mut rng);
        let s = Scenario::new("composition", spec, None);
        let t = rng.gen_range(0.0..2.0 * PI);
        let l1 = s.rep(MapKind::Phi1, t).map_err(|e| e.to_string())?;
        let l2 = s.rep(MapKind::Phi2, t).map_err(|e| e.to_string())?;
        let ld = rep_from_map(s.spec.n(), pinching_oracle(&s.spec)).map_err(|e| e.to_string())?;
        let product = l2.lambda().dot(ld.lambda());
        worst = worst.max(fro(&sub(l1.lambda(), &product)));
    }
    if worst <= 1e-10 {
        Ok(format!("max Frobenius defect {worst:.3e} over 50 specs"))
    } else {
        Err(format!("defect {worst:.3e}"))
    }
}

fn criterion_6() -> Outcome {
    let mut rng = random::seeded(606);
    let (mut iso, mut link_def) = (0.0f64, 0.0f64);
    for _ in 0..500 {
        let n = rng.gen_range(2..=5);
        let m = rng.gen_range(1..=n);
        let r = m + rng.gen_range(0..=2);
        let basis = random::unitary(n, &mut rng);
        let w = random::orthogonal_decomposition((0..m).map(|j| basis.column(j)).collect(), &mut rng);
        let psi = random::nonorthogonal_from(&w, r, &mut rng);
        let link = ghjw_link(&w, &psi).map_err(|e| e.to_string())?;
        iso = iso.max(link.isometry_defect());
        link_def = link_def.max(link.link_defect(&w, &psi));
    }
    let spec = discordant_spec(3, &[1.0 / 3.0; 3]).map_err(|e| e.to_string())?;
    let link = ghjw_link(spec.w_block(), spec.psi_block().expect("class II")).map_err(|e| e.to_string())?;
    let expected = [[0.25, 0.5], [0.25, 0.5], [0.5, 0.0]];
    let mut uniform: f64 = 0.0;
    for (row, exp) in link.lambda().iter().zip(expected) {
        for (x, e) in row.iter().zip(exp) {
            uniform = uniform.max((x - e).abs());
        }
    }
    let msg = format!("isometry {iso:.3e}, link {link_def:.3e}, uniform lambda {uniform:.3e}");
    if iso <= 1e-10 && link_def <= 1e-10 && uniform <= 1e-12 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_7() -> Outcome {
    let spec = discordant_spec(3, &[1.0 / 3.0; 3]).map_err(|e| e.to_string())?;
    let (_, povm) = invariant_povm(&spec).map_err(|e| e.to_string())?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let zero = [z(0.0, 0.0), z(1.0, 0.0), z(0.0, 0.0)];
    let one = [z(0.0, 0.0), z(0.0, 0.0), z(1.0, 0.0)];
    let plus = [z(0.0, 0.0), z(h, 0.0), z(h, 0.0)];
    let minus = [z(0.0, 0.0), z(h, 0.0), z(-h, 0.0)];
    // (j, k, coefficient, ket, bra) with j = ± and k = 0, 1, +
    let table: [KRow; 6] = [
        (0, 0, 0.25f64.sqrt(), &zero, &plus),
        (0, 1, 0.25f64.sqrt(), &one, &plus),
        (0, 2, 0.5f64.sqrt(), &plus, &plus),
        (1, 0, 0.5f64.sqrt(), &zero, &minus),
        (1, 1, 0.5f64.sqrt(), &one, &minus),
        (1, 2, 0.0, &plus, &minus),
    ];
    let (mut coef, mut ops) = (0.0f64, 0.0f64);
    for (j, k, c, ket, bra) in table {
        let got = povm.k(j, k).ok_or(format!("missing K_{j}{k}"))?;
        coef = coef.max((got.coefficient - c).abs());
        ops = ops.max(phase_aligned_distance(&got.op, &outer(ket, bra).scale_re(c)).map_err(|e| e.to_string())?);
    }
    let w = spec.w_matrix();
    let mut image = ComplexMatrix::zeros(3, 3);
    for op in povm.kraus_k() {
        image += &op.op.dot(&w).dot(&op.op.adjoint());
    }
    let inv = fro(&sub(&image, &w));
    let complete = povm.completeness_defect();
    let msg = format!("coefficients {coef:.3e}, operators {ops:.3e}, W invariance {inv:.3e}, completeness {complete:.3e}");
    if coef <= 1e-12 && ops <= 1e-12 && inv <= 1e-12 && complete <= 1e-10 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

/// Full-space distance between `Φ₁` and `Φ₂` for the figure case at
/// `2ωt = π/4`, from the first oracle run.
const FIGURE_FULL_DISTANCE: f64 = 0.643_864_949_050_626_5;

fn criterion_8() -> Outcome {
    let s = Scenario::named("figure").map_err(|e| e.to_string())?;
    let samples = s.domain_samples().map_err(|e| e.to_string())?;
    let mut on_domain: f64 = 0.0;
    let mut smallest_interior = f64::INFINITY;
    for k in 0..=40 {
        let t = PI * k as f64 / 40.0;
        let a = s.rep(MapKind::Phi1, t).map_err(|e| e.to_string())?;
        let b = s.rep(MapKind::Phi2, t).map_err(|e| e.to_string())?;
        on_domain = on_domain.max(channel_distance(&a, &b, Some(&samples)).map_err(|e| e.to_string())?);
        if k % 20 != 0 {
            smallest_interior = smallest_interior.min(fro(&sub(a.lambda(), b.lambda())));
        }
    }
    let a = s.rep(MapKind::Phi1, PI / 4.0).map_err(|e| e.to_string())?;
    let b = s.rep(MapKind::Phi2, PI / 4.0).map_err(|e| e.to_string())?;
    let frozen = fro(&sub(a.lambda(), b.lambda()));
    let msg = format!(
        "on-domain {on_domain:.3e}, smallest interior full distance {smallest_interior:.6e}, at pi/4 {frozen:.17e}"
    );
    if on_domain <= 1e-10 && smallest_interior > 1e-6 && (frozen - FIGURE_FULL_DISTANCE).abs() <= 1e-12 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn pauli(k: usize) -> ComplexMatrix {
    let e = match k {
        0 => [[z(1.0, 0.0), z(0.0, 0.0)], [z(0.0, 0.0), z(1.0, 0.0)]],
        1 => [[z(0.0, 0.0), z(1.0, 0.0)], [z(1.0, 0.0), z(0.0, 0.0)]],
        2 => [[z(0.0, 0.0), z(0.0, -1.0)], [z(0.0, 1.0), z(0.0, 0.0)]],
        _ => [[z(1.0, 0.0), z(0.0, 0.0)], [z(0.0, 0.0), z(-1.0, 0.0)]],
    };
    ComplexMatrix::from_fn(2, 2, |i, j| e[i][j])
}

fn product_form(wt: f64) -> ComplexMatrix {
    let mut u = ComplexMatrix::identity(4);
    for j in 1..4 {
        let f = &ComplexMatrix::identity(4).scale_re(wt.cos()) + &kron(&pauli(j), &pauli(j)).scale(z(0.0, -wt.sin()));
        u = u.dot(&f);
    }
    u
}

fn compact_form(wt: f64) -> ComplexMatrix {
    let mut u = ComplexMatrix::identity(4).scale_re((2.0 * wt).cos());
    for j in 0..4 {
        u += &kron(&pauli(j), &pauli(j)).scale(z(0.0, -0.5 * (2.0 * wt).sin()));
    }
    u
}

fn criterion_9() -> Outcome {
    let mut rng = random::seeded(909);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let wt = rng.gen_range(-2.0 * PI..2.0 * PI);
        let d = |a: &ComplexMatrix, b: &ComplexMatrix| phase_aligned_distance(a, b).map_err(|e| e.to_string());
        worst = worst
            .max(d(&product_form(wt), &compact_form(wt))?)
            .max(d(&qubit_unitary(wt), &compact_form(wt))?)
            .max(d(&qubit_unitary_compact(wt), &product_form(wt))?);
    }
    let mut swap = ComplexMatrix::zeros(4, 4);
    for (a, b) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
        swap[(a, b)] = z(1.0, 0.0);
    }
    let at_swap = phase_aligned_distance(&qubit_unitary(FRAC_PI_2 / 2.0), &swap).map_err(|e| e.to_string())?;
    let at_swap_scenario = {
        let s = Scenario::named("cesar").map_err(|e| e.to_string())?;
        phase_aligned_distance(&s.unitary(FRAC_PI_2).map_err(|e| e.to_string())?, &swap).map_err(|e| e.to_string())?
    };
    let msg = format!("form mismatch {worst:.3e}, SWAP mismatch {:.3e}", at_swap.max(at_swap_scenario));
    if worst <= 1e-12 && at_swap <= 1e-12 && at_swap_scenario <= 1e-12 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_10() -> Outcome {
    let mut rng = random::seeded(1010);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let class_ii = i % 2 == 0;
        let mut shape = if class_ii {
            random_class_ii_shape(&mut rng)
        } else {
            random_class_i_shape(&mut rng)
        };
        shape.dim_e = rng.gen_range(2..=3);
        let spec = random::class_spec(shape, &mut rng);
        let u = random::unitary(shape.n * shape.dim_e, &mut rng);
        let basis = random::unitary(shape.dim_e, &mut rng);
        let gammas: Vec<_> = (0..shape.dim_e).map(|k| basis.column(k)).collect();
        let (a, b) = if class_ii {
            (
                build_phi_ii_kraus(&spec, &u, 0.0),
                build_phi_ii_kraus_in_basis(&spec, &u, 0.0, &gammas),
            )
        } else {
            (build_phi2_kraus(&spec, &u, 0.0), build_phi2_kraus_in_basis(&spec, &u, 0.0, &gammas))
        };
        let ra = rep_from_kraus(&a.map_err(|e| e.to_string())?);
        let rb = rep_from_kraus(&b.map_err(|e| e.to_string())?);
        worst = worst.max(fro(&sub(ra.lambda(), rb.lambda())));
        let report = cp_report(&rb, 1e-10).map_err(|e| e.to_string())?;
        if !report.is_cp {
            return Err(format!("rotated-basis build not CP (min eig {:.3e})", report.min_choi_eig));
        }
    }
    if worst <= 1e-10 {
        Ok(format!("max Lambda distance {worst:.3e} over 50 specs"))
    } else {
        Err(format!("distance {worst:.3e}"))
    }
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 10] = [
        ("oracle equivalence", criterion_1),
        ("golden Lambda matrices", criterion_2),
        ("golden Choi matrices", criterion_3),
        ("JPA reproduction", criterion_4),
        ("composition identity", criterion_5),
        ("GHJW", criterion_6),
        ("discordant example", criterion_7),
        ("non-uniqueness witness", criterion_8),
        ("unitary-form agreement", criterion_9),
        ("basis independence", criterion_10),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                println!("FAIL {:>2} {name}: {detail}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
