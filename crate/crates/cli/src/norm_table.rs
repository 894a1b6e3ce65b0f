use rayon::prelude::*;
use serde::Serialize;
use sphmult_core::groups::{classify, params_for, GroupFamily, SpectralParameter, StripPosition};
use sphmult_core::spherical::cb_norm_lorentz;

use crate::config::{Format, RunConfig};
use crate::{emit, Failure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Interior,
    BoundaryConstant,
    NotMultiplier,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Self::Interior => "INTERIOR",
            Self::BoundaryConstant => "BOUNDARY_CONSTANT",
            Self::NotMultiplier => "NOT_MULTIPLIER",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub sigma: f64,
    pub t: f64,
    pub norm: Option<f64>,
    pub status: Status,
}

fn row(m: u32, sigma: f64, t: f64) -> Result<Row, Failure> {
    let s = SpectralParameter::new(sigma, t);
    let (norm, status) = match classify(s, m) {
        StripPosition::Interior => (Some(cb_norm_lorentz(m, s)?), Status::Interior),
        StripPosition::BoundaryConstant => (Some(1.0), Status::BoundaryConstant),
        StripPosition::BoundaryNontrivial | StripPosition::Exterior => (None, Status::NotMultiplier),
    };
    Ok(Row { sigma, t, norm, status })
}

/// Rows in σ-major order.
pub fn table(m: u32, sigmas: &[f64], ts: &[f64]) -> Result<Vec<Row>, Failure> {
    let grid: Vec<(f64, f64)> = sigmas
        .iter()
        .flat_map(|&sigma| ts.iter().map(move |&t| (sigma, t)))
        .collect();
    grid.par_iter().map(|&(sigma, t)| row(m, sigma, t)).collect()
}

pub fn to_csv(rows: &[Row]) -> String {
    let mut out = String::from("sigma,t,norm,status\n");
    for r in rows {
        let norm = r.norm.map(|v| format!("{v:.16e}")).unwrap_or_default();
        out.push_str(&format!(
            "{:.16e},{:.16e},{norm},{}\n",
            r.sigma,
            r.t,
            r.status.label()
        ));
    }
    out
}

pub fn run(cfg: &RunConfig) -> Result<u8, Failure> {
    if cfg.family != GroupFamily::SO0 {
        return Err(Failure::config(format!(
            "norm-table supports the so0 family only, got {}",
            cfg.family
        )));
    }
    let group = params_for(cfg.family, cfg.n)?;
    let rows = table(group.m, &cfg.sigma.points(), &cfg.t.points())?;
    let text = match cfg.format {
        Format::Csv => to_csv(&rows),
        Format::Json => {
            serde_json::to_string_pretty(&rows).map_err(|e| Failure::config(e.to_string()))? + "\n"
        }
    };
    emit(cfg, &text)?;
    Ok(0)
}
