//! Scenario files, deterministic JSON and CSV output.
//!
//! Every float written by this module uses 17 significant digits in
//! scientific notation with a lowercase `e`, so identical inputs produce
//! byte-identical files.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::analysis::BlochSample;
use crate::channels::KrausSet;
use crate::error::{Error, Result};
use crate::interaction::Interaction;
use crate::linalg::{c, CVector, ComplexMatrix};
use crate::scenarios::Scenario;
use crate::states::{CorrelatedClassSpec, DensityMatrix, NonOrthogonalDecomposition, OrthogonalDecomposition};

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Pretty JSON with floats through [`fmt_f64`].
struct SciFormatter<'a> {
    inner: PrettyFormatter<'a>,
}

impl Formatter for SciFormatter<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_value(w)
    }
}

pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let fmt = SciFormatter {
        inner: PrettyFormatter::with_indent(b"  "),
    };
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, fmt);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json_string(value)?)?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DecompositionFile {
    weights: Vec<f64>,
    vectors: Vec<Vec<[f64; 2]>>,
}

/// On-disk form of a scenario. `w_block` may be omitted for class II, in
/// which case it is the spectral resolution of the `psi_block` operator.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    n: usize,
    d: usize,
    p: Vec<f64>,
    #[serde(default)]
    phi: Vec<Vec<[f64; 2]>>,
    #[serde(default)]
    w_block: Option<DecompositionFile>,
    #[serde(default)]
    psi_block: Option<DecompositionFile>,
    #[serde(default)]
    rho_env: Vec<ComplexMatrix>,
    varrho_env: Vec<ComplexMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    interaction: Option<Interaction>,
}

fn to_vector(v: &[[f64; 2]]) -> CVector {
    v.iter().map(|&[re, im]| c(re, im)).collect()
}

fn from_vector(v: &[num_complex::Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn states(ms: Vec<ComplexMatrix>, what: &str) -> Result<Vec<DensityMatrix>> {
    ms.into_iter()
        .enumerate()
        .map(|(i, m)| DensityMatrix::new(m).map_err(|e| Error::InvalidSpec(format!("{what}[{i}]: {e}"))))
        .collect()
}

fn check_vectors(vs: &[Vec<[f64; 2]>], n: usize, what: &str) -> Result<()> {
    if let Some(v) = vs.iter().find(|v| v.len() != n) {
        return Err(Error::InvalidSpec(format!("{what}: vector of length {}, expected n = {n}", v.len())));
    }
    if vs.iter().flatten().flatten().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

impl ScenarioFile {
    fn into_scenario(self) -> Result<Scenario> {
        let n = self.n;
        if self.p.len() != self.d {
            return Err(Error::InvalidSpec(format!("d = {} but {} probabilities given", self.d, self.p.len())));
        }
        check_vectors(&self.phi, n, "phi")?;
        let phi: Vec<CVector> = self.phi.iter().map(|v| to_vector(v)).collect();
        let rho_env = states(self.rho_env, "rho_env")?;
        let varrho_env = states(self.varrho_env, "varrho_env")?;
        let w = match self.w_block {
            Some(w) => {
                check_vectors(&w.vectors, n, "w_block")?;
                Some(OrthogonalDecomposition::new(w.weights, w.vectors.iter().map(|v| to_vector(v)).collect())?)
            }
            None => None,
        };
        let psi = match self.psi_block {
            Some(p) => {
                check_vectors(&p.vectors, n, "psi_block")?;
                Some(NonOrthogonalDecomposition::new(p.weights, p.vectors.iter().map(|v| to_vector(v)).collect())?)
            }
            None => None,
        };
        let spec = match (w, psi) {
            (Some(w), psi) => CorrelatedClassSpec::new(self.p, phi, w, psi, rho_env, varrho_env)?,
            (None, Some(psi)) => CorrelatedClassSpec::class_ii(self.p, phi, psi, rho_env, varrho_env)?,
            (None, None) => return Err(Error::InvalidSpec("scenario needs w_block, psi_block or both".into())),
        };
        if spec.n() != n {
            return Err(Error::InvalidSpec(format!("n = {n} but vectors have length {}", spec.n())));
        }
        Ok(Scenario::new(self.name.unwrap_or_else(|| "scenario".into()), spec, self.interaction))
    }

    fn from_scenario(s: &Scenario) -> Self {
        let spec = &s.spec;
        let decomposition = |w: &[f64], v: &[CVector]| DecompositionFile {
            weights: w.to_vec(),
            vectors: v.iter().map(|x| from_vector(x)).collect(),
        };
        ScenarioFile {
            name: Some(s.name.clone()),
            n: spec.n(),
            d: spec.d(),
            p: spec.p().to_vec(),
            phi: spec.phi().iter().map(|v| from_vector(v)).collect(),
            w_block: Some(decomposition(spec.w_block().weights(), spec.w_block().vectors())),
            psi_block: spec.psi_block().map(|p| decomposition(p.weights(), p.vectors())),
            rho_env: spec.rho_env().iter().map(|r| r.matrix().clone()).collect(),
            varrho_env: spec.varrho_env().iter().map(|r| r.matrix().clone()).collect(),
            interaction: Some(s.interaction.clone()),
        }
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let file: ScenarioFile = serde_json::from_str(text)?;
    file.into_scenario()
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    parse_scenario(&fs::read_to_string(path)?)
}

/// Parses and validates a Kraus set file.
pub fn parse_kraus_set(text: &str) -> Result<KrausSet> {
    Ok(serde_json::from_str(text)?)
}

pub fn scenario_to_json(s: &Scenario) -> Result<String> {
    to_json_string(&ScenarioFile::from_scenario(s))
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Io(io::Error::other(format!("{other:?}"))),
    }
}

fn write_rows<W: Write>(out: W, header: &[&str], rows: impl Iterator<Item = Vec<f64>>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header).map_err(csv_error)?;
    for row in rows {
        w.write_record(row.iter().map(|x| fmt_f64(*x))).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub const BLOCH_HEADER: [&str; 6] = ["in_x", "in_y", "in_z", "out_x", "out_y", "out_z"];

pub fn write_bloch_csv<W: Write>(out: W, samples: &[BlochSample]) -> Result<()> {
    write_rows(
        out,
        &BLOCH_HEADER,
        samples.iter().map(|s| s.input.iter().chain(&s.output).copied().collect()),
    )
}

/// One grid point of a time sweep comparing `Φ₁` and `Φ₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub t: f64,
    pub min_choi_eig_phi1: f64,
    pub min_choi_eig_phi2: f64,
    pub tp_defect_phi1: f64,
    pub tp_defect_phi2: f64,
    pub dist_domain: f64,
    pub dist_full: f64,
}

pub const SWEEP_HEADER: [&str; 7] = [
    "t",
    "min_choi_eig_phi1",
    "min_choi_eig_phi2",
    "tp_defect_phi1",
    "tp_defect_phi2",
    "dist_domain",
    "dist_full",
];

pub fn write_sweep_csv<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    write_rows(
        out,
        &SWEEP_HEADER,
        rows.iter().map(|r| {
            vec![
                r.t,
                r.min_choi_eig_phi1,
                r.min_choi_eig_phi2,
                r.tp_defect_phi1,
                r.tp_defect_phi2,
                r.dist_domain,
                r.dist_full,
            ]
        }),
    )
}
