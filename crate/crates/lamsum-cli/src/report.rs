//! The JSON report: a faithful, reproducible record of one run.
//!
//! Reals serialize with shortest-round-trip formatting (17 significant
//! digits at most), so identical runs produce identical bytes and reports
//! parse back to the exact binary values.

use lamsum::engine::{InvariantCheck, StopReason, SumDecomposition, VerifyReport};
use lamsum::torus::TorusConfig;
use serde::Serialize;

use crate::Inputs;

#[derive(Serialize, Debug)]
pub struct RunReport {
    pub tool_version: String,
    pub config: ConfigEcho,
    pub stop: StopEcho,
    pub components: Vec<ComponentEcho>,
    pub tail: Option<TailEcho>,
    /// dual of the boundary axis in the original coordinates
    pub boundary_axis: [f64; 3],
    pub trace: Vec<StepEcho>,
    pub verify: VerifyEcho,
    pub invariants: Vec<InvariantEcho>,
    pub oracle: Option<OracleEcho>,
}

#[derive(Serialize, Debug)]
pub struct ConfigEcho {
    pub l: f64,
    pub m: f64,
    pub theta: f64,
    pub c: f64,
    pub d: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub swapped: bool,
    pub word_bound: usize,
}

#[derive(Serialize, Debug)]
pub struct StopEcho {
    pub kind: String,
    pub step: Option<usize>,
    pub detail: Option<String>,
}

#[derive(Serialize, Debug)]
pub struct ComponentEcho {
    pub word: String,
    pub weight: f64,
}

#[derive(Serialize, Debug)]
pub struct TailEcho {
    pub alpha_weight: f64,
    pub c: f64,
    pub d: f64,
    pub gamma_word: String,
    pub delta_word: String,
}

#[derive(Serialize, Debug)]
pub struct StepEcho {
    pub k: usize,
    pub gamma_word: String,
    pub delta_word: String,
    pub a: f64,
    pub c: f64,
    pub d: f64,
    pub r: Option<f64>,
    pub theta: f64,
    pub len_gamma: f64,
    pub len_delta: f64,
    pub b: Option<f64>,
    pub a_step: Option<f64>,
    pub residual: Option<f64>,
    /// axis duals in the original coordinates, for rendering
    pub axis_gamma: [f64; 3],
    pub axis_delta: [f64; 3],
}

#[derive(Serialize, Debug)]
pub struct VerifyEcho {
    pub per_step: Vec<f64>,
    pub accumulated: f64,
    pub direct: Option<f64>,
}

#[derive(Serialize, Debug)]
pub struct InvariantEcho {
    pub name: String,
    pub pass: bool,
    pub worst: f64,
}

#[derive(Serialize, Debug)]
pub struct OracleEcho {
    pub bound: usize,
    pub max_table_deviation: f64,
    pub failures: Vec<String>,
}

pub fn build_report(
    cfg: &TorusConfig<f64>,
    inputs: &Inputs,
    dec: &SumDecomposition<f64>,
    verify: &VerifyReport<f64>,
    invariants: &[InvariantCheck],
    oracle: Option<OracleEcho>,
) -> RunReport {
    let stop = match &dec.stop {
        StopReason::TerminatedExact { step } => StopEcho {
            kind: "terminated_exact".into(),
            step: Some(*step),
            detail: None,
        },
        StopReason::MaxIterations => StopEcho {
            kind: "max_iterations".into(),
            step: None,
            detail: None,
        },
        StopReason::Overflow { step, length } => StopEcho {
            kind: "overflow".into(),
            step: Some(*step),
            detail: Some(format!("translation length {length}")),
        },
        StopReason::NumericalBreakdown { step, reason } => StopEcho {
            kind: "numerical_breakdown".into(),
            step: Some(*step),
            detail: Some(reason.clone()),
        },
    };
    RunReport {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config: ConfigEcho {
            l: cfg.params.l,
            m: cfg.params.m,
            theta: cfg.params.theta,
            c: cfg.params.c,
            d: cfg.params.d,
            tol: inputs.tol,
            max_iter: inputs.max_iter,
            swapped: cfg.swapped,
            word_bound: cfg.word_bound,
        },
        stop,
        components: dec
            .components
            .iter()
            .map(|c| ComponentEcho {
                word: c.word.to_string(),
                weight: c.weight,
            })
            .collect(),
        tail: dec.tail.as_ref().map(|t| TailEcho {
            alpha_weight: t.alpha_weight,
            c: t.c,
            d: t.d,
            gamma_word: t.gamma_word.to_string(),
            delta_word: t.delta_word.to_string(),
        }),
        boundary_axis: [cfg.x_alpha.x0, cfg.x_alpha.x1, cfg.x_alpha.x2],
        trace: dec
            .trace
            .iter()
            .map(|s| StepEcho {
                k: s.k,
                gamma_word: s.gamma_word.to_string(),
                delta_word: s.delta_word.to_string(),
                a: s.a,
                c: s.c,
                d: s.d,
                r: s.r,
                theta: s.theta,
                len_gamma: s.len_gamma,
                len_delta: s.len_delta,
                b: s.b,
                a_step: s.a_step,
                residual: s.residual,
                axis_gamma: [s.axis_gamma.x0, s.axis_gamma.x1, s.axis_gamma.x2],
                axis_delta: [s.axis_delta.x0, s.axis_delta.x1, s.axis_delta.x2],
            })
            .collect(),
        verify: VerifyEcho {
            per_step: verify.per_step.clone(),
            accumulated: verify.accumulated,
            direct: verify.direct,
        },
        invariants: invariants
            .iter()
            .map(|i| InvariantEcho {
                name: i.name.to_string(),
                pass: i.pass,
                worst: i.worst,
            })
            .collect(),
        oracle,
    }
}
