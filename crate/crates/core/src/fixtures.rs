//! The bundled example corpus: spec files with known solutions, each run
//! through the same path as `fermat-kit verify`.

use rayon::prelude::*;
use serde::Serialize;

use crate::cli::{execute, EXIT_PASS};
use crate::spec_file::parse_spec;

pub struct Fixture {
    pub name: &'static str,
    pub source: &'static str,
}

macro_rules! fixture {
    ($name:literal) => {
        Fixture {
            name: $name,
            source: include_str!(concat!("../fixtures/", $name, ".json")),
        }
    };
}

pub fn corpus() -> Vec<Fixture> {
    vec![
        fixture!("example2_1"),
        fixture!("example2_2"),
        fixture!("example2_3_i"),
        fixture!("example2_3_ii"),
        fixture!("example2_3_iii"),
        fixture!("example2_3_iv"),
        fixture!("example2_5_tau1"),
        fixture!("example2_5_tau2"),
        fixture!("example3_1"),
        fixture!("example3_2"),
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixtureResult {
    pub name: String,
    pub backend: Option<String>,
    pub passed: bool,
    pub symbolic_pass: Option<bool>,
    pub sample_max_abs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

pub fn run_fixture(fx: &Fixture, eps: Option<f64>) -> FixtureResult {
    let spec = match parse_spec(fx.source.as_bytes()) {
        Ok(s) => s,
        Err(e) => {
            return FixtureResult {
                name: fx.name.into(),
                backend: None,
                passed: false,
                symbolic_pass: None,
                sample_max_abs: None,
                error: Some(e.to_string()),
            }
        }
    };
    let report = execute(&spec, eps);
    let body = &report.body;
    FixtureResult {
        name: fx.name.into(),
        backend: Some(spec.backend.to_string()),
        passed: report.code == EXIT_PASS,
        symbolic_pass: body["symbolic_pass"].as_bool(),
        sample_max_abs: body["sample_max_abs"].as_f64(),
        error: body["message"].as_str().map(String::from),
    }
}

/// Runs the corpus in parallel; results keep the corpus order.
pub fn run_all(eps: Option<f64>) -> Vec<FixtureResult> {
    corpus().par_iter().map(|fx| run_fixture(fx, eps)).collect()
}
