use std::sync::Arc;

use flagcalc_core::flag::{
    bianchi_checks, check_cr_reality, curvature_coefficients, curvature_invariants, embed_to_connection,
    invariant_integrand, reduce_pseudo_flag, verify_structure_equations, CurvatureCoefficients,
    CurvatureInvariants, EmbeddingData, PseudoFlagStructure, ReductionOutput,
};
use flagcalc_core::matrix::{assemble_pi, verify_gauge_covariance, SLOT_NAMES};
use flagcalc_core::{check_frame_consistency, FrameSpace};
use sha2::{Digest, Sha256};

use crate::document::{parse, scalar_argument, InputDocument};
use crate::report::{
    CrSection, ErrorSection, FrameSection, GaugeSection, IntegrandSection, Ordered, ReportDocument, StageRecord,
    Status,
};
use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    /// Frame consistency, plus the structure equations when a
    /// `[pseudoflag]` section is present.
    Check,
    Reduce,
    Curvature,
    Invariant {
        kill_fiber: bool,
        volume: Option<String>,
    },
    Gauge,
    Cr,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Reduce => "reduce",
            Command::Curvature => "curvature",
            Command::Invariant { .. } => "invariant",
            Command::Gauge => "gauge",
            Command::Cr => "cr",
        }
    }
}

/// Runs `cmd` on the document text. Failures end up in the report's
/// `error` section; the exit code is [`ReportDocument::exit_code`].
pub fn run(cmd: &Command, input: &str) -> ReportDocument {
    let digest = hex::encode(Sha256::digest(input.as_bytes()));
    let mut rep = ReportDocument::new(cmd.name(), digest);
    if let Err(e) = execute(cmd, input, &mut rep) {
        rep.status = match e.exit_code() {
            crate::EXIT_FAILURE => Status::Fail,
            _ => Status::Error,
        };
        rep.error = Some(ErrorSection {
            kind: e.kind(),
            message: e.to_string(),
            exit_code: e.exit_code(),
        });
    }
    rep
}

/// Report for input that could not be read at all.
pub fn io_failure(cmd: &Command, err: CliError) -> ReportDocument {
    let mut rep = ReportDocument::new(cmd.name(), String::new());
    rep.status = Status::Error;
    rep.error = Some(ErrorSection {
        kind: err.kind(),
        message: err.to_string(),
        exit_code: err.exit_code(),
    });
    rep
}

fn stage<T>(
    rep: &mut ReportDocument,
    name: &'static str,
    f: impl FnOnce(&mut ReportDocument) -> Result<T, CliError>,
) -> Result<T, CliError> {
    let out = f(rep);
    rep.stages.push(StageRecord {
        name,
        status: if out.is_ok() { "ok" } else { "failed" },
        detail: out.as_ref().err().map(|e| e.to_string()),
    });
    out
}

struct Pipeline {
    p: PseudoFlagStructure,
    r: ReductionOutput,
    k: CurvatureCoefficients,
    e: EmbeddingData,
}

fn structure_input(doc: &InputDocument, rep: &mut ReportDocument) -> Result<PseudoFlagStructure, CliError> {
    let frame = stage(rep, "frame", |_| doc.frame(true))?;
    stage(rep, "pseudoflag", |_| doc.pseudoflag(frame))
}

/// Reduction, curvature coefficients, embedding and the structure
/// equations, filling the corresponding sections.
fn pipeline(p: PseudoFlagStructure, rep: &mut ReportDocument, sections: bool) -> Result<Pipeline, CliError> {
    let r = stage(rep, "reduce", |rep| {
        let r = reduce_pseudo_flag(&p)?;
        if sections {
            rep.reduction = Some(reduction_section(&r));
        }
        Ok(r)
    })?;
    let k = stage(rep, "curvature", |rep| {
        let k = curvature_coefficients(&r)?;
        if sections {
            let mut o = Ordered::default();
            for (name, v) in k.named() {
                o.push(name, v);
            }
            rep.curvature = Some(o);
        }
        Ok(k)
    })?;
    let e = stage(rep, "embed", |rep| {
        let e = embed_to_connection(&r, &k)?;
        if sections {
            let mut o = Ordered::default();
            o.push("c", &e.c);
            o.push("E1", &e.e1);
            o.push("E2", &e.e2);
            o.push("G", &e.g);
            for (name, f) in SLOT_NAMES.iter().zip(e.connection.slots()) {
                o.push(*name, f);
            }
            rep.embedding = Some(o);
        }
        Ok(e)
    })?;
    stage(rep, "structure", |rep| {
        let s = verify_structure_equations(&e.connection)?;
        let mut o = Ordered::default();
        for res in &s.residuals {
            o.push(res.label, &res.residual);
        }
        rep.structure = Some(o);
        let failure = s
            .failures()
            .next()
            .map(|bad| CliError::verification(bad.label, format!("residual {}", bad.residual)));
        failure.map_or(Ok(()), Err)
    })?;
    Ok(Pipeline { p, r, k, e })
}

fn reduction_section(r: &ReductionOutput) -> Ordered {
    let mut o = Ordered::default();
    o.push("theta11", &r.theta11);
    o.push("tau1", &r.tau1);
    o.push("tau2", &r.tau2);
    o.push("tau1_2", &r.tau1_2);
    o.push("tau2_1", &r.tau2_1);
    let z = &r.z;
    for (k, v) in [
        ("z1_12", &z.z1_12),
        ("z1_10", &z.z1_10),
        ("z1_20", &z.z1_20),
        ("z2_12", &z.z2_12),
        ("z2_10", &z.z2_10),
        ("z2_20", &z.z2_20),
    ] {
        o.push(k, v);
    }
    o
}

fn invariants(pl: &Pipeline, rep: &mut ReportDocument) -> Result<CurvatureInvariants, CliError> {
    stage(rep, "invariants", |rep| {
        let inv = curvature_invariants(&pl.e.connection, &pl.k)?;
        let mut o = Ordered::default();
        o.push("Q1", &inv.q1);
        o.push("Q2", &inv.q2);
        o.push("U1", &inv.u1);
        o.push("U2", &inv.u2);
        o.push("Phi1", &inv.phi1);
        o.push("Phi2", &inv.phi2);
        o.push("Psi", &inv.psi);
        rep.invariants = Some(o);
        rep.flat = Some(inv.is_flat());
        Ok(inv)
    })
}

fn integrand(
    pl: &Pipeline,
    doc: &InputDocument,
    rep: &mut ReportDocument,
    pullback: bool,
    volume: Option<&str>,
) -> Result<(), CliError> {
    stage(rep, "integrand", |rep| {
        let i = invariant_integrand(&pl.r, &pl.k, &pl.e)?;
        let mut sec = IntegrandSection {
            form: i.form.to_string(),
            transcendental_factor: i.transcendental_factor,
            base_form: None,
            volume_form: None,
            coefficient: None,
            volume: None,
            integral: None,
        };
        if pullback || volume.is_some() {
            let (t1, t2) = pl.p.lifted_names();
            sec.base_form = Some(i.base_form.to_string());
            sec.volume_form = Some(format!("{}^{t1}^{t2}", pl.p.contact()));
            sec.coefficient = Some(i.volume_coefficient.to_string());
        }
        if let Some(text) = volume {
            let v = scalar_argument(text, doc, pl.p.frame())?;
            let total = (&i.volume_coefficient * &v).reduce(pl.r.frame.relations())?;
            sec.volume = Some(v.to_string());
            sec.integral = Some(total.to_string());
        }
        rep.integrand = Some(sec);
        Ok(())
    })
}

fn frame_section(doc: &InputDocument, frame: &Arc<FrameSpace>) -> Result<FrameSection, CliError> {
    let report = check_frame_consistency(frame)?;
    let mut residuals = Ordered::default();
    let lookup = |list: &[(String, flagcalc_core::Form)], name: &str| {
        list.iter().find(|(n, _)| n == name).map(|(_, f)| f.to_string()).unwrap_or_else(|| "0".into())
    };
    for name in &doc.basis {
        residuals.push(format!("d(d {name})"), lookup(&report.basis_failures, name));
    }
    for name in &doc.coordinates {
        residuals.push(format!("d(d {name})"), lookup(&report.coordinate_failures, name));
    }
    for (name, f) in &report.relation_failures {
        residuals.push(format!("d({name})"), f);
    }
    Ok(FrameSection {
        consistent: report.is_consistent(),
        residuals,
    })
}

fn execute(cmd: &Command, input: &str, rep: &mut ReportDocument) -> Result<(), CliError> {
    let doc = stage(rep, "parse", |_| Ok(parse(input)?))?;
    match cmd {
        Command::Check => {
            let frame = stage(rep, "frame", |rep| {
                let frame = doc.frame(false)?;
                let sec = frame_section(&doc, &frame)?;
                let first = sec.residuals.0.iter().find(|(_, v)| v != "0").cloned();
                rep.frame = Some(sec);
                match first {
                    Some((k, v)) => Err(CliError::verification(format!("{k} = 0"), format!("residual {v}"))),
                    None => Ok(frame),
                }
            })?;
            if doc.pseudoflag.is_some() {
                let p = stage(rep, "pseudoflag", |_| doc.pseudoflag(frame))?;
                pipeline(p, rep, false)?;
            }
        }
        Command::Reduce => {
            let p = structure_input(&doc, rep)?;
            stage(rep, "reduce", |rep| {
                rep.reduction = Some(reduction_section(&reduce_pseudo_flag(&p)?));
                Ok(())
            })?;
        }
        Command::Curvature => {
            let pl = pipeline(structure_input(&doc, rep)?, rep, true)?;
            let inv = invariants(&pl, rep)?;
            stage(rep, "bianchi", |rep| {
                let b = bianchi_checks(&pl.e.connection, &inv)?;
                let mut o = Ordered::default();
                for (k, v) in [
                    ("S1", &b.s1),
                    ("T1", &b.t1),
                    ("S2", &b.s2),
                    ("T2", &b.t2),
                    ("A", &b.a),
                    ("B", &b.b),
                    ("C", &b.c),
                    ("D", &b.d),
                    ("E", &b.e),
                    ("U2_check", &b.u2_check),
                    ("U1_check", &b.u1_check),
                    ("C_check", &b.c_check),
                ] {
                    o.push(k, v);
                }
                rep.bianchi = Some(o);
                let checks = [("U2", &b.u2_check), ("U1", &b.u1_check), ("C", &b.c_check)];
                match checks.iter().find(|(_, v)| !v.is_trivially_zero()) {
                    Some((k, v)) => Err(CliError::verification(
                        format!("Bianchi identity for {k}"),
                        format!("residual {v}"),
                    )),
                    None => Ok(()),
                }
            })?;
            integrand(&pl, &doc, rep, true, None)?;
        }
        Command::Invariant { kill_fiber, volume } => {
            let pl = pipeline(structure_input(&doc, rep)?, rep, false)?;
            invariants(&pl, rep)?;
            integrand(&pl, &doc, rep, *kill_fiber, volume.as_deref())?;
        }
        Command::Gauge => {
            let pl = pipeline(structure_input(&doc, rep)?, rep, false)?;
            stage(rep, "gauge", |rep| {
                let h = doc.gauge(pl.p.frame())?;
                let frame = pl.e.connection.frame().clone();
                h.check_invertible(frame.relations())?;
                let pi = assemble_pi(&pl.e.connection)?;
                let g = verify_gauge_covariance(&pi, &h)?;
                let mut element = Ordered::default();
                for (k, v) in [
                    ("alpha", &h.alpha),
                    ("beta", &h.beta),
                    ("gamma", &h.gamma),
                    ("delta", &h.delta),
                    ("epsilon", &h.epsilon),
                ] {
                    element.push(k, v);
                }
                let mut slots = Ordered::default();
                for (k, f) in &g.slot_residuals {
                    slots.push(*k, f);
                }
                let pair = |q1: &flagcalc_core::Scalar, q2: &flagcalc_core::Scalar| {
                    let mut o = Ordered::default();
                    o.push("Q1", q1);
                    o.push("Q2", q2);
                    o
                };
                let passed = g.passed();
                rep.gauge = Some(GaugeSection {
                    element,
                    passed,
                    slot_residuals: slots,
                    q1_residual: g.q1_residual.to_string(),
                    q2_residual: g.q2_residual.to_string(),
                    original: pair(&g.original.q1, &g.original.q2),
                    transformed: pair(&g.transformed.q1, &g.transformed.q2),
                });
                if let Some((k, f)) = g.slot_residuals.iter().find(|(_, f)| !f.is_trivially_zero()) {
                    return Err(CliError::verification(format!("gauge law for {k}"), format!("residual {f}")));
                }
                if !g.q1_residual.is_trivially_zero() {
                    return Err(CliError::verification("Q1 scaling", format!("residual {}", g.q1_residual)));
                }
                if !g.q2_residual.is_trivially_zero() {
                    return Err(CliError::verification("Q2 scaling", format!("residual {}", g.q2_residual)));
                }
                Ok(())
            })?;
        }
        Command::Cr => {
            let pl = pipeline(structure_input(&doc, rep)?, rep, false)?;
            let inv = invariants(&pl, rep)?;
            stage(rep, "cr", |rep| {
                let spec = doc.conjugation(pl.p.frame())?;
                let c = check_cr_reality(&pl.p, &pl.r, &pl.e.connection, &inv, &spec)?;
                let conditions = c.conditions.as_ref().map(|k| {
                    let mut o = Ordered::default();
                    o.push("omega11", &k.omega11);
                    o.push("psi", &k.psi);
                    o.push("Q", &k.q);
                    o.push("U", &k.u);
                    o
                });
                rep.cr = Some(CrSection {
                    passed: c.passed(),
                    premise: c.premise.to_string(),
                    d_incompatible: c.d_incompatible.clone(),
                    conditions: conditions.clone(),
                });
                if !c.premise.is_trivially_zero() {
                    return Err(CliError::verification("reality premise", format!("residual {}", c.premise)));
                }
                if !c.d_incompatible.is_empty() {
                    return Err(CliError::verification(
                        "reality premise",
                        format!("conjugation does not commute with d on {}", c.d_incompatible.join(", ")),
                    ));
                }
                if let Some(bad) = conditions.and_then(|o| o.0.into_iter().find(|(_, v)| v != "0")) {
                    return Err(CliError::verification(
                        format!("reality condition for {}", bad.0),
                        format!("residual {}", bad.1),
                    ));
                }
                Ok(())
            })?;
        }
    }
    Ok(())
}
