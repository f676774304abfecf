use carfima::core::acf::{AcfMethod, AcfTable};
use carfima::core::estimate::FitResult;
use carfima::core::model::CarfimaModel;
use carfima::core::simulate::{ExactSimulator, PathMethod};
use carfima::core::spectrum::{AliasOptions, SpectrumKind, SpectrumTable};
use carfima::io::*;

fn model() -> CarfimaModel {
    CarfimaModel::new(vec![0.5, -2.0, -3.0], vec![0.5], 0.3, 1.25).unwrap()
}

#[test]
fn model_json_field_names() {
    let text = model_to_json(&model());
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort();
    assert_eq!(keys, ["H", "alpha", "beta", "p", "q", "sigma"]);
    assert_eq!(model_from_json(&text).unwrap(), model());
}

#[test]
fn model_json_rejects_inconsistent_orders() {
    let bad = r#"{"p": 2, "q": 0, "alpha": [0, -1], "beta": [], "H": 0.3, "sigma": 1}"#;
    assert!(matches!(model_from_json(bad), Err(IoError::Format(_))));
    let bad = r#"{"p": 1, "q": 0, "alpha": [0, -1], "beta": [], "H": 1.3, "sigma": 1}"#;
    assert!(matches!(model_from_json(bad), Err(IoError::Model(_))));
    let unknown = r#"{"p": 1, "q": 0, "alpha": [0, -1], "beta": [], "H": 0.3, "sigma": 1, "x": 0}"#;
    assert!(model_from_json(unknown).is_err());
}

#[test]
fn acf_csv_round_trip_is_lossless() {
    let lags: Vec<f64> = (0..40).map(|k| k as f64 * 0.37).collect();
    let table = AcfTable::compute(&model(), &lags, None).unwrap();
    let mut buf = Vec::new();
    write_acf_csv(&mut buf, &table).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.starts_with("lag,gamma,method\n"));
    let rows = read_acf_csv(buf.as_slice()).unwrap();
    for ((l, g, m), (l0, g0)) in rows.iter().zip(table.lags.iter().zip(&table.values)) {
        assert_eq!(l.to_bits(), l0.to_bits());
        assert_eq!(g.to_bits(), g0.to_bits());
        assert_eq!(*m, AcfMethod::ClosedForm);
    }
}

#[test]
fn spectrum_csv_round_trip_is_lossless() {
    let omegas: Vec<f64> = (1..30).map(|k| k as f64 * 0.1).collect();
    for table in [
        SpectrumTable::continuous(&model(), &omegas).unwrap(),
        SpectrumTable::aliased(&model(), &omegas, 0.5, &AliasOptions::default()).unwrap(),
    ] {
        let mut buf = Vec::new();
        write_spectrum_csv(&mut buf, &table).unwrap();
        assert!(buf.starts_with(b"omega,f,kind,h,K\n"));
        assert_eq!(read_spectrum_csv(buf.as_slice()).unwrap(), table);
    }
    let t = SpectrumTable::aliased(&model(), &omegas, 0.5, &AliasOptions::default()).unwrap();
    assert_eq!(t.kind, SpectrumKind::Aliased);
}

#[test]
fn path_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("path.csv");
    let m = model();
    let path = ExactSimulator::new(&m, 100, 0.25).unwrap().sample(17, 0);
    write_path_files(&csv, &m, &path).unwrap();
    let back = read_path_file(&csv).unwrap();
    assert_eq!(back.values, path.values);
    assert_eq!(back.step_h, 0.25);
    let meta: PathSidecar = serde_json::from_str(&std::fs::read_to_string(sidecar_path(&csv)).unwrap()).unwrap();
    assert_eq!(meta.n, 100);
    assert_eq!(meta.seed, 17);
    assert_eq!(meta.h, 0.25);
    assert_eq!(meta.method(), Some(PathMethod::ExactGaussian));
    assert_eq!(meta.model.to_model().unwrap(), m);
}

#[test]
fn path_csv_rejects_irregular_grid() {
    let text = "t,y\n0,1\n1,2\n2.5,3\n";
    assert!(matches!(read_path_csv(text.as_bytes()), Err(IoError::Format(_))));
    assert!(read_path_csv("x,y\n0,1\n1,2\n".as_bytes()).is_err());
}

#[test]
fn fit_json_fields() {
    let r = FitResult {
        model_hat: model(),
        objective_value: -12.5,
        converged: true,
        iterations: 42,
        stationarity_ok: true,
        invertible: true,
    };
    let v: serde_json::Value = serde_json::from_str(&fit_to_json(&r)).unwrap();
    for key in ["model", "objective", "converged", "iterations"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["iterations"], 42);
}
