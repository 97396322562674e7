use std::fmt;
use std::sync::Arc;

use super::{Form, FrameSpace};
use crate::error::Result;
use crate::scalar::Symbol;

/// Outcome of the `d² = 0` checks on a frame. Each failure records the
/// offending object and the nonzero residual.
#[derive(Debug, Clone, Default)]
pub struct ConsistencyReport {
    pub basis_failures: Vec<(String, Form)>,
    pub coordinate_failures: Vec<(String, Form)>,
    pub relation_failures: Vec<(String, Form)>,
}

impl ConsistencyReport {
    pub fn is_consistent(&self) -> bool {
        self.basis_failures.is_empty()
            && self.coordinate_failures.is_empty()
            && self.relation_failures.is_empty()
    }
}

impl fmt::Display for ConsistencyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_consistent() {
            return f.write_str("consistent");
        }
        let mut first = true;
        let groups = [
            ("d(d ", &self.basis_failures),
            ("d(d ", &self.coordinate_failures),
            ("d(relation ", &self.relation_failures),
        ];
        for (label, list) in groups {
            for (name, residual) in list.iter() {
                if !first {
                    f.write_str("; ")?;
                }
                first = false;
                write!(f, "{label}{name}) = {residual}")?;
            }
        }
        Ok(())
    }
}

/// Checks `d(d e) = 0` for every basis form, `d(d s) = 0` for every fiber
/// coordinate, and that the differential of each relation vanishes modulo
/// the relations.
pub fn check_frame_consistency(frame: &Arc<FrameSpace>) -> Result<ConsistencyReport> {
    let mut report = ConsistencyReport::default();
    for name in frame.basis_names() {
        let dd = frame.d_of(name)?.d();
        if !dd.is_zero()? {
            report.basis_failures.push((name.to_string(), dd.reduce()?));
        }
    }
    let fibers: Vec<Symbol> = frame.fiber_coordinates().collect();
    for s in fibers {
        let dd = frame.differential(s).expect("fiber").d();
        if !dd.is_zero()? {
            report.coordinate_failures.push((s.name().to_string(), dd.reduce()?));
        }
    }
    for rule in frame.relations().rules() {
        let lhs = crate::Scalar::from_polynomial(rule.lead_polynomial());
        let rel = &lhs - &crate::Scalar::from_polynomial(rule.replacement().clone());
        let d = Form::scalar(frame, rel.clone()).d();
        if !d.is_zero()? {
            report.relation_failures.push((format!("{rel}"), d.reduce()?));
        }
    }
    Ok(report)
}
