//! Output shaping for the CLI: text, JSON, and CSV views of analyses,
//! simulations, and sweeps.

use std::io::Write;

use serde::Serialize;

use crate::protocol::{AnalysisReport, ProtocolConfig, SimulationStats};
use crate::qmath::Scalar;
use crate::states::NmeBasis;

/// Formats a float with 12 significant digits, trailing zeros trimmed.
/// Magnitudes outside `[1e-4, 1e12)` switch to scientific notation.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    let s = if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.11e}")
    };
    trim_zeros(s)
}

fn trim_zeros(s: String) -> String {
    if let Some(epos) = s.find(['e', 'E']) {
        let (mantissa, tail) = s.split_at(epos);
        let trimmed = trim_zeros(mantissa.to_string());
        return format!("{trimmed}{tail}");
    }
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    t.to_string()
}

fn fmt_complex(z: Scalar) -> String {
    if z.im == 0.0 {
        fmt_sig(z.re)
    } else if z.re == 0.0 {
        format!("{}i", fmt_sig(z.im))
    } else if z.im < 0.0 {
        format!("{}-{}i", fmt_sig(z.re), fmt_sig(-z.im))
    } else {
        format!("{}+{}i", fmt_sig(z.re), fmt_sig(z.im))
    }
}

#[derive(Serialize)]
struct JsonConfig {
    d: usize,
    #[serde(rename = "D")]
    resource_dim: usize,
    spectrum: Vec<f64>,
    trials: Option<u64>,
    seed: Option<u64>,
}

#[derive(Serialize)]
struct JsonSimulation {
    trials: u64,
    conclusive: u64,
    success_rate: f64,
    stderr: f64,
    decode_errors: u64,
    stage1_counts: Vec<u64>,
}

/// The stable-keyed machine-readable report shared by `analyze` and
/// `simulate`.
#[derive(Serialize)]
struct JsonReport {
    config: JsonConfig,
    entropy_ebits: f64,
    gram_spectrum: Vec<f64>,
    paper_bound: f64,
    achievable_gamma: f64,
    simulation: Option<JsonSimulation>,
}

pub fn write_report_json(
    out: &mut dyn Write,
    config: &ProtocolConfig,
    report: &AnalysisReport,
    sim: Option<&SimulationStats>,
) -> std::io::Result<()> {
    let doc = JsonReport {
        config: JsonConfig {
            d: config.d,
            resource_dim: config.resource_dim,
            spectrum: config.spectrum.clone(),
            trials: sim.map(|s| s.trials),
            seed: sim.map(|_| config.seed),
        },
        entropy_ebits: report.entropy_ebits,
        gram_spectrum: report.gram_spectrum.clone(),
        paper_bound: report.paper_bound,
        achievable_gamma: report.achievable_gamma,
        simulation: sim.map(|s| JsonSimulation {
            trials: s.trials,
            conclusive: s.conclusive,
            success_rate: s.success_rate,
            stderr: s.stderr,
            decode_errors: s.decode_errors,
            stage1_counts: s.stage1_counts.clone(),
        }),
    };
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(&doc).expect("serializable")
    )
}

pub fn write_report_text(
    out: &mut dyn Write,
    config: &ProtocolConfig,
    report: &AnalysisReport,
    sim: Option<&SimulationStats>,
) -> std::io::Result<()> {
    let spectrum: Vec<String> = config.spectrum.iter().map(|&p| fmt_sig(p)).collect();
    writeln!(
        out,
        "d = {}, D = {}, spectrum = [{}]",
        config.d,
        config.resource_dim,
        spectrum.join(", ")
    )?;
    writeln!(
        out,
        "entanglement entropy : {} ebits",
        fmt_sig(report.entropy_ebits)
    )?;
    let gram: Vec<String> = report.gram_spectrum.iter().map(|&v| fmt_sig(v)).collect();
    writeln!(out, "gram spectrum        : [{}]", gram.join(", "))?;
    writeln!(
        out,
        "linearly independent : {}",
        report.linearly_independent
    )?;
    writeln!(
        out,
        "paper bound          : {}",
        fmt_sig(report.paper_bound)
    )?;
    writeln!(
        out,
        "achievable gamma     : {}",
        fmt_sig(report.achievable_gamma)
    )?;
    writeln!(
        out,
        "subspace gamma       : {}",
        fmt_sig(report.subspace_gamma[0])
    )?;
    writeln!(
        out,
        "residual probability : {}",
        fmt_sig(report.residual_probability)
    )?;
    if let Some(s) = sim {
        writeln!(
            out,
            "trials               : {} (seed {})",
            s.trials, config.seed
        )?;
        writeln!(
            out,
            "conclusive           : {} (rate {}, stderr {})",
            s.conclusive,
            fmt_sig(s.success_rate),
            fmt_sig(s.stderr)
        )?;
        writeln!(out, "decode errors        : {}", s.decode_errors)?;
        writeln!(
            out,
            "rate - achievable    : {}",
            fmt_sig(s.success_rate - report.achievable_gamma)
        )?;
    }
    Ok(())
}

pub fn write_report_csv(
    out: &mut dyn Write,
    config: &ProtocolConfig,
    report: &AnalysisReport,
    sim: Option<&SimulationStats>,
) -> std::io::Result<()> {
    writeln!(
        out,
        "d,D,entropy_ebits,paper_bound,achievable_gamma,residual_probability,mc_rate,mc_stderr,trials,seed"
    )?;
    let (rate, err, trials, seed) = match sim {
        Some(s) => (
            fmt_sig(s.success_rate),
            fmt_sig(s.stderr),
            s.trials.to_string(),
            config.seed.to_string(),
        ),
        None => (String::new(), String::new(), "0".to_string(), String::new()),
    };
    writeln!(
        out,
        "{},{},{},{},{},{},{},{},{},{}",
        config.d,
        config.resource_dim,
        fmt_sig(report.entropy_ebits),
        fmt_sig(report.paper_bound),
        fmt_sig(report.achievable_gamma),
        fmt_sig(report.residual_probability),
        rate,
        err,
        trials,
        seed
    )
}

/// Header of the sweep stream; column order is part of the interface.
pub const SWEEP_HEADER: &str =
    "axis_value,entropy_ebits,paper_bound,achievable_gamma,mc_rate,mc_stderr,trials,seed";

pub fn write_sweep_row(
    out: &mut dyn Write,
    axis_value: f64,
    report: &AnalysisReport,
    sim: Option<&SimulationStats>,
    seed: u64,
) -> std::io::Result<()> {
    let (rate, err, trials) = match sim {
        Some(s) => (fmt_sig(s.success_rate), fmt_sig(s.stderr), s.trials),
        None => (String::new(), String::new(), 0),
    };
    writeln!(
        out,
        "{},{},{},{},{},{},{},{}",
        fmt_sig(axis_value),
        fmt_sig(report.entropy_ebits),
        fmt_sig(report.paper_bound),
        fmt_sig(report.achievable_gamma),
        rate,
        err,
        trials,
        seed
    )
}

#[derive(Serialize)]
struct JsonBasis {
    ell: [f64; 2],
    p: [f64; 2],
    vectors: Vec<Vec<[f64; 2]>>,
    max_cross_overlap: f64,
    completeness_residual: f64,
    entropies_ebits: Vec<f64>,
}

pub fn write_basis_json(
    out: &mut dyn Write,
    basis: &NmeBasis,
    entropies: &[f64; 4],
) -> std::io::Result<()> {
    let doc = JsonBasis {
        ell: [basis.ell.re, basis.ell.im],
        p: [basis.p.re, basis.p.im],
        vectors: basis
            .vectors()
            .iter()
            .map(|v| v.amps().iter().map(|a| [a.re, a.im]).collect())
            .collect(),
        max_cross_overlap: basis.max_cross_overlap(),
        completeness_residual: basis.completeness_residual(),
        entropies_ebits: entropies.to_vec(),
    };
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(&doc).expect("serializable")
    )
}

pub fn write_basis_text(
    out: &mut dyn Write,
    basis: &NmeBasis,
    entropies: &[f64; 4],
) -> std::io::Result<()> {
    writeln!(
        out,
        "ell = {}, p = {}",
        fmt_complex(basis.ell),
        fmt_complex(basis.p)
    )?;
    let kets = ["|00>", "|01>", "|10>", "|11>"];
    for (i, v) in basis.vectors().iter().enumerate() {
        let terms: Vec<String> = v
            .amps()
            .iter()
            .zip(kets)
            .filter(|(a, _)| a.norm() > 1e-14)
            .map(|(a, k)| format!("({}) {}", fmt_complex(*a), k))
            .collect();
        writeln!(out, "psi{} = {}", i + 1, terms.join(" + "))?;
    }
    writeln!(
        out,
        "max cross overlap    : {}",
        fmt_sig(basis.max_cross_overlap())
    )?;
    writeln!(
        out,
        "completeness residual: {}",
        fmt_sig(basis.completeness_residual())
    )?;
    let es: Vec<String> = entropies.iter().map(|&e| fmt_sig(e)).collect();
    writeln!(out, "entropies (ebits)    : [{}]", es.join(", "))
}
