//! File formats: model and fit JSON, ACF / spectrum / path CSV tables and the
//! path metadata sidecar. Numbers are written in shortest round-trip form.

use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use carfima_core::acf::{AcfMethod, AcfTable};
use carfima_core::estimate::FitResult;
use carfima_core::model::CarfimaModel;
use carfima_core::simulate::{PathMethod, SamplePath};
use carfima_core::spectrum::{SpectrumKind, SpectrumTable};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File { path: PathBuf, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Model(#[from] carfima_core::Error),
}

pub type IoResult<T> = Result<T, IoError>;

fn format_err<T>(msg: impl Into<String>) -> IoResult<T> {
    Err(IoError::Format(msg.into()))
}

/// On-disk model representation; field names are fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelJson {
    pub p: usize,
    pub q: usize,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    #[serde(rename = "H")]
    pub hurst: f64,
    pub sigma: f64,
}

impl From<&CarfimaModel> for ModelJson {
    fn from(m: &CarfimaModel) -> Self {
        Self {
            p: m.p(),
            q: m.q(),
            alpha: m.alpha().to_vec(),
            beta: m.beta().to_vec(),
            hurst: m.hurst(),
            sigma: m.sigma(),
        }
    }
}

impl ModelJson {
    pub fn to_model(&self) -> IoResult<CarfimaModel> {
        if self.alpha.len() != self.p + 1 {
            return format_err(format!("alpha has {} entries, expected p + 1 = {}", self.alpha.len(), self.p + 1));
        }
        if self.beta.len() != self.q {
            return format_err(format!("beta has {} entries, expected q = {}", self.beta.len(), self.q));
        }
        Ok(CarfimaModel::new(self.alpha.clone(), self.beta.clone(), self.hurst, self.sigma)?)
    }
}

fn open(path: &Path) -> IoResult<File> {
    File::open(path).map_err(|source| IoError::File {
        path: path.to_path_buf(),
        source,
    })
}

fn create(path: &Path) -> IoResult<File> {
    File::create(path).map_err(|source| IoError::File {
        path: path.to_path_buf(),
        source,
    })
}

pub fn model_from_json(text: &str) -> IoResult<CarfimaModel> {
    serde_json::from_str::<ModelJson>(text)?.to_model()
}

pub fn model_to_json(model: &CarfimaModel) -> String {
    serde_json::to_string_pretty(&ModelJson::from(model)).expect("model serializes")
}

pub fn read_model(path: &Path) -> IoResult<CarfimaModel> {
    let mut text = String::new();
    open(path)?.read_to_string(&mut text).map_err(|source| IoError::File {
        path: path.to_path_buf(),
        source,
    })?;
    model_from_json(&text)
}

pub fn write_model(path: &Path, model: &CarfimaModel) -> IoResult<()> {
    write_text(path, &model_to_json(model))
}

fn write_text(path: &Path, text: &str) -> IoResult<()> {
    let mut f = create(path)?;
    writeln!(f, "{text}").map_err(|source| IoError::File {
        path: path.to_path_buf(),
        source,
    })
}

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn parse_num(s: &str, what: &str) -> IoResult<f64> {
    s.trim().parse::<f64>().map_err(|_| IoError::Format(format!("cannot parse {what} value {s:?}")))
}

fn check_header(reader: &mut csv::Reader<impl Read>, expected: &[&str]) -> IoResult<()> {
    let header = reader.headers()?;
    if header.iter().map(str::trim).ne(expected.iter().copied()) {
        return format_err(format!("expected header {:?}, found {:?}", expected.join(","), header.iter().collect::<Vec<_>>().join(",")));
    }
    Ok(())
}

pub fn write_acf_csv<W: Write>(out: W, table: &AcfTable) -> IoResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["lag", "gamma", "method"])?;
    for (lag, g) in table.lags.iter().zip(&table.values) {
        w.write_record([num(*lag), num(*g), table.method.as_str().to_string()])?;
    }
    w.flush().map_err(|e| IoError::Format(e.to_string()))?;
    Ok(())
}

/// Rows of an ACF table as `(lag, gamma, method)`.
pub fn read_acf_csv<R: Read>(input: R) -> IoResult<Vec<(f64, f64, AcfMethod)>> {
    let mut r = csv::Reader::from_reader(input);
    check_header(&mut r, &["lag", "gamma", "method"])?;
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let method = AcfMethod::parse(&rec[2]).ok_or_else(|| IoError::Format(format!("unknown method {:?}", &rec[2])))?;
        rows.push((parse_num(&rec[0], "lag")?, parse_num(&rec[1], "gamma")?, method));
    }
    Ok(rows)
}

pub fn write_spectrum_csv<W: Write>(out: W, table: &SpectrumTable) -> IoResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["omega", "f", "kind", "h", "K"])?;
    let h = table.step_h.map(num).unwrap_or_default();
    let k = table.truncation_k.map(|k| k.to_string()).unwrap_or_default();
    for (o, f) in table.omegas.iter().zip(&table.values) {
        w.write_record([num(*o), num(*f), table.kind.as_str().to_string(), h.clone(), k.clone()])?;
    }
    w.flush().map_err(|e| IoError::Format(e.to_string()))?;
    Ok(())
}

pub fn read_spectrum_csv<R: Read>(input: R) -> IoResult<SpectrumTable> {
    let mut r = csv::Reader::from_reader(input);
    check_header(&mut r, &["omega", "f", "kind", "h", "K"])?;
    let mut table = SpectrumTable {
        omegas: Vec::new(),
        values: Vec::new(),
        kind: SpectrumKind::Continuous,
        step_h: None,
        truncation_k: None,
    };
    for rec in r.records() {
        let rec = rec?;
        table.omegas.push(parse_num(&rec[0], "omega")?);
        table.values.push(parse_num(&rec[1], "f")?);
        table.kind = SpectrumKind::parse(&rec[2]).ok_or_else(|| IoError::Format(format!("unknown kind {:?}", &rec[2])))?;
        if !rec[3].is_empty() {
            table.step_h = Some(parse_num(&rec[3], "h")?);
        }
        if !rec[4].is_empty() {
            table.truncation_k = Some(rec[4].parse().map_err(|_| IoError::Format(format!("bad K {:?}", &rec[4])))?);
        }
    }
    Ok(table)
}

pub fn write_path_csv<W: Write>(out: W, path: &SamplePath) -> IoResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "y"])?;
    for (t, y) in path.times().zip(&path.values) {
        w.write_record([num(t), num(*y)])?;
    }
    w.flush().map_err(|e| IoError::Format(e.to_string()))?;
    Ok(())
}

/// Reads `t,y` rows; the step is taken from the time column, which must be
/// a regular grid starting anywhere.
pub fn read_path_csv<R: Read>(input: R) -> IoResult<SamplePath> {
    let mut r = csv::Reader::from_reader(input);
    check_header(&mut r, &["t", "y"])?;
    let mut times = Vec::new();
    let mut values = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        times.push(parse_num(&rec[0], "t")?);
        values.push(parse_num(&rec[1], "y")?);
    }
    if times.len() < 2 {
        return format_err("path needs at least two rows");
    }
    let step = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    for (i, t) in times.iter().enumerate() {
        if (t - times[0] - i as f64 * step).abs() > 1e-9 * step.abs().max(t.abs()) {
            return format_err(format!("time column is not regularly spaced at row {}", i + 1));
        }
    }
    Ok(SamplePath::from_values(values, step)?)
}

/// Metadata written next to a simulated path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSidecar {
    pub model: ModelJson,
    pub h: f64,
    pub n: usize,
    pub seed: u64,
    pub method: String,
}

impl PathSidecar {
    pub fn new(model: &CarfimaModel, path: &SamplePath) -> Self {
        Self {
            model: model.into(),
            h: path.step_h,
            n: path.len(),
            seed: path.seed,
            method: path.method.as_str().to_string(),
        }
    }

    pub fn method(&self) -> Option<PathMethod> {
        PathMethod::parse(&self.method)
    }
}

/// `out.csv` -> `out.json`.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

pub fn write_path_files(csv_path: &Path, model: &CarfimaModel, path: &SamplePath) -> IoResult<()> {
    write_path_csv(create(csv_path)?, path)?;
    let meta = serde_json::to_string_pretty(&PathSidecar::new(model, path))?;
    write_text(&sidecar_path(csv_path), &meta)
}

pub fn read_path_file(csv_path: &Path) -> IoResult<SamplePath> {
    read_path_csv(open(csv_path)?)
}

pub fn write_table_file<F>(path: &Path, write: F) -> IoResult<()>
where
    F: FnOnce(File) -> IoResult<()>,
{
    write(create(path)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitJson {
    pub model: ModelJson,
    pub objective: f64,
    pub converged: bool,
    pub iterations: usize,
    pub stationarity_ok: bool,
    pub invertible: bool,
}

impl From<&FitResult> for FitJson {
    fn from(r: &FitResult) -> Self {
        Self {
            model: (&r.model_hat).into(),
            objective: r.objective_value,
            converged: r.converged,
            iterations: r.iterations,
            stationarity_ok: r.stationarity_ok,
            invertible: r.invertible,
        }
    }
}

pub fn fit_to_json(r: &FitResult) -> String {
    serde_json::to_string_pretty(&FitJson::from(r)).expect("fit serializes")
}

pub fn write_fit(path: &Path, r: &FitResult) -> IoResult<()> {
    write_text(path, &fit_to_json(r))
}
