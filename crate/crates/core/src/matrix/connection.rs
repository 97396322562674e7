use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exterior::{Form, FrameBuilder, FrameSpace};
use crate::scalar::Scalar;

/// Slot names in the order used by [`ConnectionForms::slots`].
pub const SLOT_NAMES: [&str; 8] = ["omega", "omega1", "omega2", "phi", "omega11", "phi1", "phi2", "psi"];

/// The eight connection 1-forms on a shared frame.
#[derive(Clone, Debug)]
pub struct ConnectionForms {
    pub omega: Form,
    pub omega1: Form,
    pub omega2: Form,
    pub phi: Form,
    pub omega11: Form,
    pub phi1: Form,
    pub phi2: Form,
    pub psi: Form,
}

impl ConnectionForms {
    /// Slots in [`SLOT_NAMES`] order.
    pub fn new(slots: [Form; 8]) -> Result<ConnectionForms> {
        let frame = slots[0].frame().clone();
        for f in &slots {
            if !f.frame().same_frame(&frame) {
                return Err(Error::FrameMismatch);
            }
            if f.degree() != 1 && !f.is_trivially_zero() {
                return Err(Error::DegreeMismatch {
                    expected: 1,
                    found: f.degree(),
                });
            }
        }
        let [omega, omega1, omega2, phi, omega11, phi1, phi2, psi] = slots;
        Ok(ConnectionForms {
            omega,
            omega1,
            omega2,
            phi,
            omega11,
            phi1,
            phi2,
            psi,
        })
    }

    /// The eight slots as independent basis 1-forms of a closed frame named
    /// after [`SLOT_NAMES`]; useful for purely algebraic identities.
    pub fn abstract_generators() -> Result<ConnectionForms> {
        let frame = FrameBuilder::new(&SLOT_NAMES)?.build_unchecked();
        let forms = frame.basis_forms();
        ConnectionForms::new(forms.try_into().expect("eight generators"))
    }

    pub fn frame(&self) -> &Arc<FrameSpace> {
        self.omega.frame()
    }

    pub fn slots(&self) -> [&Form; 8] {
        [
            &self.omega,
            &self.omega1,
            &self.omega2,
            &self.phi,
            &self.omega11,
            &self.phi1,
            &self.phi2,
            &self.psi,
        ]
    }

    pub fn map(&self, f: impl Fn(&Form) -> Result<Form>) -> Result<ConnectionForms> {
        let s = self.slots();
        ConnectionForms::new([
            f(s[0])?,
            f(s[1])?,
            f(s[2])?,
            f(s[3])?,
            f(s[4])?,
            f(s[5])?,
            f(s[6])?,
            f(s[7])?,
        ])
    }

    /// Reads the slots back from a connection matrix (inverse of
    /// [`assemble_pi`] on traceless matrices of that shape).
    pub fn from_matrix(pi: &MatrixForm) -> Result<ConnectionForms> {
        if pi.degree() != 1 {
            return Err(Error::DegreeMismatch {
                expected: 1,
                found: pi.degree(),
            });
        }
        let e = |i, j| pi.entry(i, j).clone();
        let half = Scalar::ratio(1, 2);
        ConnectionForms::new([
            e(2, 0).scale(&half),
            e(1, 0),
            e(2, 1).scale(&half),
            &e(2, 2) - &e(0, 0),
            e(1, 1).scale(&Scalar::ratio(3, 2)),
            e(1, 2).scale(&Scalar::from_int(2)),
            -&e(0, 1),
            e(0, 2).scale(&Scalar::from_int(-4)),
        ])
    }
}

/// Square matrix (3×3) of forms of one degree on one frame.
#[derive(Clone)]
pub struct MatrixForm {
    frame: Arc<FrameSpace>,
    degree: usize,
    entries: [[Form; 3]; 3],
}

impl MatrixForm {
    pub fn new(entries: [[Form; 3]; 3]) -> Result<MatrixForm> {
        let frame = entries[0][0].frame().clone();
        let mut degree = None;
        for row in &entries {
            for f in row {
                if !f.frame().same_frame(&frame) {
                    return Err(Error::FrameMismatch);
                }
                if f.is_trivially_zero() {
                    continue;
                }
                match degree {
                    None => degree = Some(f.degree()),
                    Some(d) if d != f.degree() => {
                        return Err(Error::DegreeMismatch {
                            expected: d,
                            found: f.degree(),
                        })
                    }
                    _ => {}
                }
            }
        }
        let degree = degree.unwrap_or(entries[0][0].degree());
        Ok(MatrixForm {
            frame,
            degree,
            entries,
        })
    }

    pub fn zero(frame: &Arc<FrameSpace>, degree: usize) -> MatrixForm {
        MatrixForm {
            frame: frame.clone(),
            degree,
            entries: std::array::from_fn(|_| std::array::from_fn(|_| Form::zero(frame, degree))),
        }
    }

    /// Matrix of 0-forms.
    pub fn from_scalars(frame: &Arc<FrameSpace>, m: [[Scalar; 3]; 3]) -> MatrixForm {
        let entries = m.map(|row| row.map(|s| Form::scalar(frame, s)));
        MatrixForm {
            frame: frame.clone(),
            degree: 0,
            entries,
        }
    }

    pub fn identity(frame: &Arc<FrameSpace>) -> MatrixForm {
        MatrixForm::from_scalars(
            frame,
            std::array::from_fn(|i| {
                std::array::from_fn(|j| if i == j { Scalar::one() } else { Scalar::zero() })
            }),
        )
    }

    pub fn frame(&self) -> &Arc<FrameSpace> {
        &self.frame
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Zero-based entry.
    pub fn entry(&self, i: usize, j: usize) -> &Form {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[[Form; 3]; 3] {
        &self.entries
    }

    pub fn trace(&self) -> Form {
        &(&self.entries[0][0] + &self.entries[1][1]) + &self.entries[2][2]
    }

    pub fn d(&self) -> MatrixForm {
        MatrixForm {
            frame: self.frame.clone(),
            degree: self.degree + 1,
            entries: std::array::from_fn(|i| std::array::from_fn(|j| self.entries[i][j].d())),
        }
    }

    /// `(A∧B)ᵢⱼ = Σₖ Aᵢₖ∧Bₖⱼ`.
    pub fn wedge(&self, other: &MatrixForm) -> Result<MatrixForm> {
        if !self.frame.same_frame(&other.frame) {
            return Err(Error::FrameMismatch);
        }
        let degree = self.degree + other.degree;
        let mut out = MatrixForm::zero(&self.frame, degree);
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = Form::zero(&self.frame, degree);
                for k in 0..3 {
                    acc = acc.try_add(&self.entries[i][k].try_wedge(&other.entries[k][j])?)?;
                }
                out.entries[i][j] = acc;
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &MatrixForm) -> Result<MatrixForm> {
        self.zip(other, |a, b| a.try_add(b))
    }

    pub fn try_sub(&self, other: &MatrixForm) -> Result<MatrixForm> {
        self.zip(other, |a, b| a.try_sub(b))
    }

    fn zip(&self, other: &MatrixForm, f: impl Fn(&Form, &Form) -> Result<Form>) -> Result<MatrixForm> {
        if !self.frame.same_frame(&other.frame) {
            return Err(Error::FrameMismatch);
        }
        let mut out = self.clone();
        for i in 0..3 {
            for j in 0..3 {
                out.entries[i][j] = f(&self.entries[i][j], &other.entries[i][j])?;
            }
        }
        out.degree = if self.is_trivially_zero() { other.degree } else { self.degree };
        Ok(out)
    }

    fn is_trivially_zero(&self) -> bool {
        self.entries.iter().flatten().all(|f| f.is_trivially_zero())
    }

    pub fn is_zero(&self) -> Result<bool> {
        for f in self.entries.iter().flatten() {
            if !f.is_zero()? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Applies `f` entrywise; the result lives on the frame of the new entries.
    pub fn map(&self, f: impl Fn(&Form) -> Result<Form>) -> Result<MatrixForm> {
        let mut entries = self.entries.clone();
        for i in 0..3 {
            for j in 0..3 {
                entries[i][j] = f(&self.entries[i][j])?;
            }
        }
        MatrixForm::new(entries)
    }

    pub fn reduce(&self) -> Result<MatrixForm> {
        self.map(|f| f.reduce())
    }
}

impl fmt::Display for MatrixForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for MatrixForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Curvature 2-forms `Φ¹ = Q¹ω∧ω²`, `Φ² = Q²ω∧ω¹`, `Ψ = (U₁ω¹ + U₂ω²)∧ω`
/// with their coefficients.
#[derive(Clone, Debug)]
pub struct CurvatureComponents {
    pub phi1: Form,
    pub phi2: Form,
    pub psi: Form,
    pub q1: Scalar,
    pub q2: Scalar,
    pub u1: Scalar,
    pub u2: Scalar,
}

/// The connection matrix `π`.
pub fn assemble_pi(c: &ConnectionForms) -> Result<MatrixForm> {
    let q = |f: &Form, p, r| f.scale(&Scalar::ratio(p, r));
    let third = |f: &Form| q(f, 1, 3);
    MatrixForm::new([
        [
            &(-&q(&c.phi, 1, 2)) - &third(&c.omega11),
            -&c.phi2,
            q(&c.psi, -1, 4),
        ],
        [c.omega1.clone(), q(&c.omega11, 2, 3), q(&c.phi1, 1, 2)],
        [
            q(&c.omega, 2, 1),
            q(&c.omega2, 2, 1),
            &q(&c.phi, 1, 2) - &third(&c.omega11),
        ],
    ])
}

/// `Π = dπ + π∧π`.
pub fn curvature(pi: &MatrixForm) -> Result<MatrixForm> {
    pi.d().try_add(&pi.wedge(pi)?)
}

/// Reads `Φ¹ = 2Π₂₃`, `Φ² = −Π₁₂`, `Ψ = −4Π₁₃` (one-based) and their
/// coefficients against the connection `c`. Every other entry of `Π` must
/// vanish.
pub fn extract_components(curv: &MatrixForm, c: &ConnectionForms) -> Result<CurvatureComponents> {
    for (i, j) in [(0, 0), (1, 1), (2, 2), (1, 0), (2, 0), (2, 1)] {
        let e = curv.entry(i, j);
        if !e.is_zero()? {
            return Err(Error::shape(
                format!("curvature entry ({}, {})", i + 1, j + 1),
                format!("expected 0, found {}", e.reduce()?),
            ));
        }
    }
    let phi1 = curv.entry(1, 2).scale(&Scalar::from_int(2));
    let phi2 = -curv.entry(0, 1);
    let psi = curv.entry(0, 2).scale(&Scalar::from_int(-4));

    let q1 = single_coefficient(&phi1, &c.omega.try_wedge(&c.omega2)?, "Phi1 = Q1 omega^omega2")?;
    let q2 = single_coefficient(&phi2, &c.omega.try_wedge(&c.omega1)?, "Phi2 = Q2 omega^omega1")?;
    let (coeffs, residual) = psi.decompose(&[c.omega1.try_wedge(&c.omega)?, c.omega2.try_wedge(&c.omega)?])?;
    if !residual.is_trivially_zero() {
        return Err(Error::shape(
            "Psi = (U1 omega1 + U2 omega2)^omega",
            format!("residual {residual}"),
        ));
    }
    let [u1, u2]: [Scalar; 2] = coeffs.try_into().expect("two coefficients");
    Ok(CurvatureComponents {
        phi1,
        phi2,
        psi,
        q1,
        q2,
        u1,
        u2,
    })
}

pub(crate) fn single_coefficient(target: &Form, generator: &Form, label: &str) -> Result<Scalar> {
    let (coeffs, residual) = target.decompose(std::slice::from_ref(generator))?;
    if !residual.is_trivially_zero() {
        return Err(Error::shape(label, format!("residual {residual}")));
    }
    Ok(coeffs.into_iter().next().expect("one coefficient"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_is_traceless_and_round_trips() {
        let c = ConnectionForms::abstract_generators().unwrap();
        let pi = assemble_pi(&c).unwrap();
        assert!(pi.trace().is_zero().unwrap());
        assert!(pi.entry(2, 0).equals(&c.omega.scale(&Scalar::from_int(2))).unwrap());
        let back = ConnectionForms::from_matrix(&pi).unwrap();
        for (a, b) in back.slots().iter().zip(c.slots()) {
            assert!(a.equals(b).unwrap());
        }
    }

    #[test]
    fn matrix_wedge_of_identity() {
        let c = ConnectionForms::abstract_generators().unwrap();
        let pi = assemble_pi(&c).unwrap();
        let id = MatrixForm::identity(c.frame());
        let p = id.wedge(&pi).unwrap();
        assert!(p.try_sub(&pi).unwrap().is_zero().unwrap());
    }
}
