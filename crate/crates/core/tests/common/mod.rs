#![allow(dead_code)]

use std::path::PathBuf;

use spectral_rff::specfun::{self, Status};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

/// Rows of a fixture CSV as f64 columns (comment and header lines skipped).
pub fn load_fixture(name: &str) -> Vec<Vec<f64>> {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture readable");
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').map(|c| c.trim().parse::<f64>().expect("numeric fixture cell")).collect())
        .collect()
}

/// Outcome of checking one special function against its reference table.
#[derive(Debug)]
pub struct FixtureCheck {
    pub name: &'static str,
    pub points: usize,
    pub worst: f64,
    pub worst_row: Vec<f64>,
    pub tolerance: f64,
}

impl FixtureCheck {
    pub fn passed(&self) -> bool {
        self.points >= 200 && self.worst <= self.tolerance
    }
}

fn rel_err(got: f64, expected: f64) -> f64 {
    ((got - expected) / expected).abs()
}

/// Relative error of a value, or of the log when the reference lies outside
/// the normal f64 range (|d ln v| equals the relative error to first order).
fn value_or_log_err(got: specfun::SpecValue<f64>, expected: f64, ln_expected: f64, ln_got: impl Fn() -> f64) -> f64 {
    if expected.is_normal() && got.status == Status::Ok {
        rel_err(got.value, expected)
    } else {
        (ln_got() - ln_expected).abs()
    }
}

fn track(check: &mut FixtureCheck, err: f64, row: &[f64]) {
    check.points += 1;
    if !(err <= check.worst) {
        check.worst = err;
        check.worst_row = row.to_vec();
    }
}

fn new_check(name: &'static str, tolerance: f64) -> FixtureCheck {
    FixtureCheck { name, points: 0, worst: 0.0, worst_row: vec![], tolerance }
}

pub fn check_gamma() -> FixtureCheck {
    let mut check = new_check("gamma_fn", 1e-12);
    for row in load_fixture("gamma.csv") {
        let got = specfun::gamma_fn(row[0]).unwrap();
        let err = rel_err(got.value, row[1]);
        track(&mut check, err, &row);
    }
    check
}

/// log B(a, b) is compared relative to max(|log B|, 1): when B is close to 1
/// the log is close to 0 and a pure relative error is meaningless.
pub fn check_log_beta() -> FixtureCheck {
    let mut check = new_check("log_beta", 1e-12);
    for row in load_fixture("log_beta.csv") {
        let got = specfun::log_beta(row[0], row[1]).unwrap();
        let err = (got - row[2]).abs() / row[2].abs().max(1.0);
        track(&mut check, err, &row);
    }
    check
}

pub fn check_bessel_k() -> FixtureCheck {
    let mut check = new_check("bessel_k", 1e-8);
    for row in load_fixture("bessel_k.csv") {
        let got = specfun::bessel_k(row[0], row[1]).unwrap();
        let err = value_or_log_err(got, row[2], row[3], || got.value.ln());
        track(&mut check, err, &row);
    }
    check
}

pub fn check_kummer_m() -> FixtureCheck {
    let mut check = new_check("kummer_m", 1e-8);
    for row in load_fixture("kummer_m.csv") {
        let got = specfun::kummer_m(row[0], row[1], row[2]).unwrap();
        let err = value_or_log_err(got, row[3], row[4], || got.value.ln());
        track(&mut check, err, &row);
    }
    check
}

pub fn check_tricomi_u() -> FixtureCheck {
    let mut check = new_check("tricomi_u", 1e-8);
    for row in load_fixture("tricomi_u.csv") {
        let got = specfun::tricomi_u(row[0], row[1], row[2]).unwrap();
        let err = value_or_log_err(got, row[3], row[4], || got.value.ln());
        track(&mut check, err, &row);
    }
    check
}

pub fn all_fixture_checks() -> Vec<FixtureCheck> {
    vec![check_gamma(), check_log_beta(), check_bessel_k(), check_kummer_m(), check_tricomi_u()]
}

pub mod oracles;
