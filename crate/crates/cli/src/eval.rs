use num_complex::Complex64;
use serde::Serialize;
use sphmult_core::groups::{params_for, GroupFamily, RankOneGroup, SpectralParameter};
use sphmult_core::specfun::QuadratureSpec;
use sphmult_core::spherical::{asymptotic_switch, cb_norm_lorentz, phi_by_method, Method};

use crate::config::{Format, RunConfig};
use crate::{emit, Failure};

const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Serialize)]
struct MethodValue {
    method: &'static str,
    re: f64,
    im: f64,
}

#[derive(Debug, Serialize)]
struct RadiusReport {
    r: f64,
    values: Vec<MethodValue>,
    /// Largest relative difference between the exact methods.
    spread: f64,
}

#[derive(Debug, Serialize)]
struct Report {
    group: String,
    s: [f64; 2],
    tolerance: f64,
    cb_norm: Option<f64>,
    evaluations: Vec<RadiusReport>,
}

fn methods_for(group: RankOneGroup, s: SpectralParameter, r: f64) -> Vec<Method> {
    let mut methods = vec![Method::HypergeometricStable, Method::HypergeometricDirect];
    if group.family == GroupFamily::SO0 {
        methods.push(Method::IntegralQuadrature);
    }
    if asymptotic_switch(s).is_some_and(|switch| r.abs() >= switch) {
        methods.push(Method::Asymptotic);
    }
    methods
}

fn evaluate(group: RankOneGroup, s: SpectralParameter, r: f64, spec: &QuadratureSpec) -> Result<RadiusReport, Failure> {
    let mut values = Vec::new();
    let mut exact: Vec<Complex64> = Vec::new();
    let mut last_error = None;
    for method in methods_for(group, s, r) {
        match phi_by_method(group, s, r, method, spec) {
            Ok(v) => {
                if method != Method::Asymptotic {
                    exact.push(v.value);
                }
                values.push(MethodValue {
                    method: method.name(),
                    re: v.value.re,
                    im: v.value.im,
                });
            }
            Err(e) => {
                eprintln!("warning: {} at r = {r}: {e}", method.name());
                last_error = Some(e);
            }
        }
    }
    if values.is_empty() {
        return Err(last_error.map(Failure::from).unwrap_or_else(|| Failure::config("no method applies")));
    }
    let mut spread = 0.0f64;
    for a in &exact {
        for b in &exact {
            spread = spread.max((a - b).norm() / b.norm().max(f64::MIN_POSITIVE));
        }
    }
    Ok(RadiusReport { r, values, spread })
}

fn to_csv(report: &Report) -> String {
    let mut out = String::from("quantity,r,re,im\n");
    for ev in &report.evaluations {
        for v in &ev.values {
            out.push_str(&format!("{},{:.16e},{:.16e},{:.16e}\n", v.method, ev.r, v.re, v.im));
        }
        out.push_str(&format!("spread,{:.16e},{:.16e},{:.16e}\n", ev.r, ev.spread, 0.0));
    }
    if let Some(norm) = report.cb_norm {
        out.push_str(&format!("cb_norm,,{norm:.16e},{:.16e}\n", 0.0));
    }
    out
}

pub fn run(cfg: &RunConfig) -> Result<u8, Failure> {
    let group = params_for(cfg.family, cfg.n)?;
    let s = SpectralParameter::from(cfg.s);
    let tolerance = cfg.tol.unwrap_or(DEFAULT_TOLERANCE);
    let spec = QuadratureSpec::new(tolerance, 1e-15)?;
    let cb_norm = if group.family == GroupFamily::SO0 {
        match cb_norm_lorentz(group.m, s) {
            Ok(v) => Some(v),
            Err(sphmult_core::Error::NotAMultiplier { .. }) => None,
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    let evaluations = cfg
        .r
        .iter()
        .map(|&r| evaluate(group, s, r, &spec))
        .collect::<Result<Vec<_>, _>>()?;
    let report = Report {
        group: group.to_string(),
        s: [s.sigma, s.t],
        tolerance,
        cb_norm,
        evaluations,
    };
    let text = match cfg.format {
        Format::Csv => to_csv(&report),
        Format::Json => {
            serde_json::to_string_pretty(&report).map_err(|e| Failure::config(e.to_string()))? + "\n"
        }
    };
    emit(cfg, &text)?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn methods_agree_for_lorentz() {
        let group = params_for(GroupFamily::SO0, 3).unwrap();
        let spec = QuadratureSpec::new(1e-10, 1e-15).unwrap();
        let rep = evaluate(group, SpectralParameter::new(0.5, 1.0), 1.0, &spec).unwrap();
        assert_eq!(rep.values.len(), 3);
        assert!(rep.spread < 1e-9, "{}", rep.spread);
    }

    #[test]
    fn constant_cases() {
        let spec = QuadratureSpec::default();
        let su = params_for(GroupFamily::SU, 2).unwrap();
        let rep = evaluate(su, SpectralParameter::real(2.0), 0.0, &spec).unwrap();
        assert!(rep.values.iter().all(|v| (v.re - 1.0).abs() < 1e-14 && v.im.abs() < 1e-14));
        let f4 = params_for(GroupFamily::F4, 0).unwrap();
        let rep = evaluate(f4, SpectralParameter::real(11.0), 3.0, &spec).unwrap();
        assert!(rep.values.iter().all(|v| (v.re - 1.0).abs() < 1e-12), "{:?}", rep.values);
    }
}
