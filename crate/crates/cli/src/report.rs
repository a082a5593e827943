//! Serialization of measurement and convex-roof results. Field names follow
//! the in-memory report types exactly; absent (pure-state-only) fields are
//! omitted rather than written as null.

use serde::Serialize;

use quent_core::measures::{MeasureReport, PptClass};
use quent_core::roof::RoofResult;

#[derive(Serialize)]
pub struct MeasureReportDoc {
    pub dims: [usize; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schmidt: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub concurrence: Option<f64>,
    pub negativity_trace_norm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub negativity_rescaled: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_expectations: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariants: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chen_gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qutrit_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrit_residual_corrected: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrit_residual_paper: Option<f64>,
    pub ppt_class: &'static str,
}

pub fn ppt_label(class: PptClass) -> &'static str {
    match class {
        PptClass::Ppt => "PPT",
        PptClass::Npt => "NPT",
    }
}

impl From<&MeasureReport> for MeasureReportDoc {
    fn from(r: &MeasureReport) -> Self {
        MeasureReportDoc {
            dims: [r.dims.m(), r.dims.n()],
            schmidt: r.schmidt.as_ref().map(|k| k.coefficients().to_vec()),
            concurrence: r.concurrence,
            negativity_trace_norm: r.negativity_trace_norm,
            negativity_rescaled: r.negativity_rescaled,
            x_expectations: r.x_expectations.clone(),
            invariants: r.invariants.as_ref().map(|i| i.values().to_vec()),
            chen_gap: r.chen_gap,
            qutrit_residual: r.qutrit_residual,
            quadrit_residual_corrected: r.quadrit_residual_corrected,
            quadrit_residual_paper: r.quadrit_residual_paper,
            ppt_class: ppt_label(r.ppt_class),
        }
    }
}

impl MeasureReportDoc {
    /// Two-column field,value layout; list-valued fields join their entries
    /// with spaces.
    pub fn to_csv(&self) -> String {
        let mut rows = vec![(
            "dims".to_string(),
            format!("{}x{}", self.dims[0], self.dims[1]),
        )];
        let join = |v: &[f64]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        if let Some(k) = &self.schmidt {
            rows.push(("schmidt".into(), join(k)));
        }
        if let Some(c) = self.concurrence {
            rows.push(("concurrence".into(), c.to_string()));
        }
        rows.push((
            "negativity_trace_norm".into(),
            self.negativity_trace_norm.to_string(),
        ));
        if let Some(n) = self.negativity_rescaled {
            rows.push(("negativity_rescaled".into(), n.to_string()));
        }
        if let Some(x) = &self.x_expectations {
            rows.push(("x_expectations".into(), join(x)));
        }
        if let Some(i) = &self.invariants {
            rows.push(("invariants".into(), join(i)));
        }
        if let Some(g) = self.chen_gap {
            rows.push(("chen_gap".into(), g.to_string()));
        }
        if let Some(q) = self.qutrit_residual {
            rows.push(("qutrit_residual".into(), q.to_string()));
        }
        if let Some(q) = self.quadrit_residual_corrected {
            rows.push(("quadrit_residual_corrected".into(), q.to_string()));
        }
        if let Some(q) = self.quadrit_residual_paper {
            rows.push(("quadrit_residual_paper".into(), q.to_string()));
        }
        rows.push(("ppt_class".into(), self.ppt_class.to_string()));

        let mut out = String::from("field,value\n");
        for (field, value) in rows {
            out.push_str(&field);
            out.push(',');
            out.push_str(&value);
            out.push('\n');
        }
        out
    }
}

#[derive(Serialize)]
pub struct EnsembleMemberDoc {
    pub p: f64,
    pub amplitudes: Vec<[f64; 2]>,
}

#[derive(Serialize)]
pub struct RoofDoc {
    pub measure: String,
    pub dims: [usize; 2],
    pub value: f64,
    pub converged: bool,
    pub restarts_used: usize,
    /// Wootters closed form, reported on 2⊗2 inputs (for the negativity
    /// roof it applies through the two-qubit equality of the measures).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_gap: Option<f64>,
    pub ensemble: Vec<EnsembleMemberDoc>,
}

impl RoofDoc {
    pub fn new(
        measure: &str,
        dims: [usize; 2],
        result: &RoofResult,
        oracle_value: Option<f64>,
    ) -> Self {
        RoofDoc {
            measure: measure.to_string(),
            dims,
            value: result.value,
            converged: result.converged,
            restarts_used: result.restarts_used,
            oracle_value,
            oracle_gap: oracle_value.map(|o| (result.value - o).abs()),
            ensemble: result
                .ensemble
                .members()
                .iter()
                .map(|(p, psi)| EnsembleMemberDoc {
                    p: *p,
                    amplitudes: psi.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
                })
                .collect(),
        }
    }
}
