//! CSV output. Comma separated, LF line endings, one header row, floats at
//! nine significant digits.

use qgan_core::{measurement_axis, state_bloch, BlochVector, GameTrace, PlayerParams};

use crate::error::{CliError, CliResult};

/// Version of every CSV and JSON layout written by this crate.
pub const SCHEMA_VERSION: u32 = 1;

pub const TRAJECTORY_HEADER: &str = "step,round,turn,r,theta,phi,beta,gamma,p_rho_hat,p_sigma_hat,d_hat,fidelity";
pub const TRACKING_HEADER: &str = "step,p_sigma_hat,p_rho_hat,d_hat,fidelity";
pub const SNAPSHOT_HEADER: &str = "step,rho_x,rho_y,rho_z,sigma_x,sigma_y,sigma_z,m_x,m_y,m_z";
pub const CDF_HEADER: &str = "value,cumulative_probability";

/// `%.9g`: nine significant digits, trailing zeros dropped, exponent form
/// outside `1e-4 ≤ |x| < 1e9`.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        trim_zeros(format!("{:.*}", (8 - exp) as usize, x))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_string()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn render(header: &str, rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn floats(values: &[f64]) -> impl Iterator<Item = String> + '_ {
    values.iter().map(|&v| format_float(v))
}

pub fn trajectory_csv(trace: &GameTrace) -> String {
    render(
        TRAJECTORY_HEADER,
        trace.steps.iter().map(|s| {
            let g = s.params_after.generator;
            let m = s.params_after.measurement;
            let e = s.estimate;
            let mut row = vec![s.step_index.to_string(), s.round_index.to_string(), s.turn.label().to_string()];
            row.extend(floats(&[g.r, g.theta, g.phi, m.beta, m.gamma, e.p_rho_hat, e.p_sigma_hat, e.d_hat, s.fidelity_ideal]));
            row
        }),
    )
}

pub fn tracking_csv(trace: &GameTrace) -> String {
    render(
        TRACKING_HEADER,
        trace.steps.iter().map(|s| {
            let e = s.estimate;
            let mut row = vec![s.step_index.to_string()];
            row.extend(floats(&[e.p_sigma_hat, e.p_rho_hat, e.d_hat, s.fidelity_ideal]));
            row
        }),
    )
}

/// Step 0 and the last step of every turn.
pub fn turn_boundary_steps(trace: &GameTrace) -> Vec<u64> {
    let mut out = vec![0];
    for (i, s) in trace.steps.iter().enumerate() {
        let next = trace.steps.get(i + 1);
        if next.is_none_or(|n| n.turn != s.turn || n.round_index != s.round_index) {
            out.push(s.step_index);
        }
    }
    out
}

fn params_at(trace: &GameTrace, step: u64) -> Option<PlayerParams> {
    if step == 0 {
        return Some(trace.initial);
    }
    trace.steps.iter().find(|s| s.step_index == step).map(|s| s.params_after)
}

/// Generated state, true state and measurement axis at each requested step;
/// step 0 is the initial configuration.
pub fn snapshot_csv(trace: &GameTrace, steps: &[u64]) -> CliResult<String> {
    let sigma = trace.sigma.to_bloch();
    let mut rows = Vec::with_capacity(steps.len());
    for &step in steps {
        let params = params_at(trace, step)
            .ok_or_else(|| CliError::config(format!("steps: trace has no step {step}")))?;
        let rho = state_bloch(&params.generator)?;
        let m: BlochVector = measurement_axis(&params.measurement);
        let mut row = vec![step.to_string()];
        row.extend(floats(&[rho.x, rho.y, rho.z, sigma.x, sigma.y, sigma.z, m.x, m.y, m.z]));
        rows.push(row);
    }
    Ok(render(SNAPSHOT_HEADER, rows))
}

pub fn cdf_csv(pairs: &[(f64, f64)]) -> String {
    render(CDF_HEADER, pairs.iter().map(|&(v, p)| floats(&[v, p]).collect()))
}
