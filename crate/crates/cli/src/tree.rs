use std::fmt::Write as _;

use num_rational::Rational64;
use serde::Serialize;
use sphmult_core::tree_radial::{
    bz_counts, enumerate_ball, radial_convolve, sphere_size, ConvolutionTable, FreeProductSpec,
    RadialFn, SPHERE_CAP,
};

use crate::config::{Format, RunConfig};
use crate::{emit, Failure};

/// Largest ball whose pairs are all checked for pair-count constancy.
const PAIR_RADIUS: u32 = 3;

#[derive(Debug, Serialize)]
struct SphereRow {
    n: u32,
    enumerated: u64,
    expected: u64,
}

#[derive(Debug, Serialize)]
struct ConvolutionRow {
    i: usize,
    j: usize,
    shells: Vec<String>,
}

#[derive(Debug, Serialize)]
struct PairCounts {
    ball_radius: u32,
    pairs_checked: u64,
    constant: bool,
}

#[derive(Debug, Serialize)]
struct Report {
    involutions: u16,
    free: u16,
    q: u64,
    sphere_sizes: Vec<SphereRow>,
    convolution: Vec<ConvolutionRow>,
    pair_counts: PairCounts,
}

fn build(spec: FreeProductSpec, radius: u32) -> Result<Report, Failure> {
    let ball = enumerate_ball(&spec, radius, SPHERE_CAP)?;
    let sphere_sizes = ball
        .iter()
        .enumerate()
        .map(|(n, words)| SphereRow {
            n: n as u32,
            enumerated: words.len() as u64,
            expected: sphere_size(&spec, n as u32),
        })
        .collect();

    let table = ConvolutionTable::new(spec, radius)?;
    let half = radius as usize / 2;
    let mut convolution = Vec::new();
    for i in 0..=half {
        for j in i..=half {
            let f = RadialFn::<Rational64>::shell_indicator(i);
            let g = RadialFn::<Rational64>::shell_indicator(j);
            let h = radial_convolve(&f, &g, &table)?;
            convolution.push(ConvolutionRow {
                i,
                j,
                shells: (0..=i + j).map(|k| h.shell(k).to_string()).collect(),
            });
        }
    }

    let pair_radius = radius.min(PAIR_RADIUS);
    let words: Vec<_> = ball.iter().take(pair_radius as usize + 1).flatten().collect();
    let mut pairs_checked = 0;
    let mut constant = true;
    for x in &words {
        for y in &words {
            let counts = bz_counts(&spec, x, y, 2 * pair_radius)?;
            let mut values = counts.values();
            let first = values.next().copied();
            constant &= values.all(|v| Some(*v) == first);
            pairs_checked += 1;
        }
    }
    Ok(Report {
        involutions: spec.involutions,
        free: spec.free,
        q: spec.q(),
        sphere_sizes,
        convolution,
        pair_counts: PairCounts {
            ball_radius: pair_radius,
            pairs_checked,
            constant,
        },
    })
}

fn to_text(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# free product M={} N={} q={}", report.involutions, report.free, report.q);
    out.push_str("n,sphere_size,expected\n");
    for row in &report.sphere_sizes {
        let _ = writeln!(out, "{},{},{}", row.n, row.enumerated, row.expected);
    }
    out.push_str("\ni,j,shell_values\n");
    for row in &report.convolution {
        let _ = writeln!(out, "{},{},{}", row.i, row.j, row.shells.join(" "));
    }
    let pc = &report.pair_counts;
    let _ = writeln!(
        out,
        "\npair_counts ball_radius={} pairs={} constant={}",
        pc.ball_radius, pc.pairs_checked, pc.constant
    );
    out
}

pub fn run(cfg: &RunConfig) -> Result<u8, Failure> {
    let spec = FreeProductSpec::new(cfg.involutions, cfg.free)?;
    let report = build(spec, cfg.radius)?;
    let text = match cfg.format {
        Format::Csv => to_text(&report),
        Format::Json => {
            serde_json::to_string_pretty(&report).map_err(|e| Failure::config(e.to_string()))? + "\n"
        }
    };
    emit(cfg, &text)?;
    let sizes_ok = report.sphere_sizes.iter().all(|r| r.enumerated == r.expected);
    Ok(if sizes_ok && report.pair_counts.constant { 0 } else { Failure::VERIFICATION })
}
