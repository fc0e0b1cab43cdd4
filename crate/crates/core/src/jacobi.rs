//! Quantum brackets on three-dimensional algebras with operator-valued
//! structure constants, and their Jacobi operator.

use std::array;

use crate::bianchi::{family_mu, BianchiType, FamilyParams, TableSet};
use crate::operad::{MultiOp, OperadError};
use crate::report::{Check, VerificationReport};
use crate::scalars::{inv_2p0, inv_sqrt_2p0_cubed, p0, ScalarPoly, Symbol};
use crate::weyl::{Generator, Mode, OperatorExpr, WeylError};

/// Components of a vector in the three-dimensional algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vec3(pub [ScalarPoly; 3]);

impl Vec3 {
    pub fn unit(i: usize) -> Vec3 {
        Vec3(array::from_fn(|k| if k == i { ScalarPoly::one() } else { ScalarPoly::zero() }))
    }

    pub fn symbolic_x() -> Vec3 {
        Vec3([Symbol::X1, Symbol::X2, Symbol::X3].map(ScalarPoly::symbol))
    }

    pub fn symbolic_y() -> Vec3 {
        Vec3([Symbol::Y1, Symbol::Y2, Symbol::Y3].map(ScalarPoly::symbol))
    }

    pub fn symbolic_z() -> Vec3 {
        Vec3([Symbol::Z1, Symbol::Z2, Symbol::Z3].map(ScalarPoly::symbol))
    }

    pub fn scale(&self, c: &ScalarPoly) -> Vec3 {
        Vec3(array::from_fn(|k| &self.0[k] * c))
    }

    pub fn add(&self, other: &Vec3) -> Vec3 {
        Vec3(array::from_fn(|k| &self.0[k] + &other.0[k]))
    }
}

pub type JacobiTriple = [OperatorExpr; 3];

pub fn det3(x: &Vec3, y: &Vec3, z: &Vec3) -> ScalarPoly {
    let (x, y, z) = (&x.0, &y.0, &z.0);
    let minor = |a: usize, b: usize| &(&y[a] * &z[b]) - &(&y[b] * &z[a]);
    &(&(&x[0] * &minor(1, 2)) + &(&x[1] * &minor(2, 0))) + &(&x[2] * &minor(0, 1))
}

fn check_shape(mu: &MultiOp) -> Result<(), OperadError> {
    if mu.dim() != 3 || mu.degree() != 2 {
        return Err(OperadError::Shape { expected: 2, dim: 3, degree: mu.degree(), found_dim: mu.dim() });
    }
    Ok(())
}

/// `[x, y]` with scalar components absorbed into the coefficients.
pub fn qbracket(x: &Vec3, y: &Vec3, mu: &MultiOp) -> Result<JacobiTriple, OperadError> {
    check_shape(mu)?;
    Ok(array::from_fn(|i| {
        let mut acc = OperatorExpr::zero(mu.mode());
        for j in 0..3 {
            for k in 0..3 {
                let c = &x.0[j] * &y.0[k];
                if !c.is_zero() {
                    acc = &acc + &mu.get(i, &[j, k]).scale(&c);
                }
            }
        }
        acc
    }))
}

/// `[x, w]` where `w` has operator components; the structure operator
/// multiplies `w` from the left.
fn outer_bracket(x: &Vec3, w: &JacobiTriple, mu: &MultiOp) -> Result<JacobiTriple, WeylError> {
    let mut out: JacobiTriple = array::from_fn(|_| OperatorExpr::zero(mu.mode()));
    for (i, slot) in out.iter_mut().enumerate() {
        for j in 0..3 {
            if x.0[j].is_zero() {
                continue;
            }
            for (k, wk) in w.iter().enumerate() {
                let m = mu.get(i, &[j, k]);
                if m.is_zero() || wk.is_zero() {
                    continue;
                }
                let term = m.try_mul(wk)?.scale(&x.0[j]);
                *slot = slot.try_add(&term)?;
            }
        }
    }
    Ok(out)
}

/// `[x,[y,z]] + [y,[z,x]] + [z,[x,y]]`.
pub fn jacobi_op(x: &Vec3, y: &Vec3, z: &Vec3, mu: &MultiOp) -> Result<JacobiTriple, OperadError> {
    let mut total: JacobiTriple = array::from_fn(|_| OperatorExpr::zero(mu.mode()));
    for (a, b, c) in [(x, y, z), (y, z, x), (z, x, y)] {
        let inner = qbracket(b, c, mu)?;
        let outer = outer_bracket(a, &inner, mu)?;
        for k in 0..3 {
            total[k] = total[k].try_add(&outer[k])?;
        }
    }
    Ok(total)
}

/// `xi+ = beta w qh Ah- + gamma (ph - p0) Ah+`, `xi- = beta w qh Ah+ - gamma (ph + p0) Ah-`.
pub fn xi(params: &FamilyParams) -> [OperatorExpr; 2] {
    let m = Mode::Quantum;
    let g = |g| OperatorExpr::gen(m, g);
    let p0 = OperatorExpr::scalar(m, p0());
    let bw = &params.beta * &ScalarPoly::symbol(Symbol::Omega);
    let plus = &(&g(Generator::Q) * &g(Generator::Am)).scale(&bw)
        + &(&(&g(Generator::P) - &p0) * &g(Generator::Ap)).scale(&params.gamma);
    let minus = &(&g(Generator::Q) * &g(Generator::Ap)).scale(&bw)
        - &(&(&g(Generator::P) + &p0) * &g(Generator::Am)).scale(&params.gamma);
    [plus, minus]
}

/// Closed form of the Jacobi operator of the four-parameter family.
pub fn closed_form_jacobi(x: &Vec3, y: &Vec3, z: &Vec3, params: &FamilyParams) -> JacobiTriple {
    let m = Mode::Quantum;
    let d = det3(x, y, z);
    let [xp, xm] = xi(params);
    let lead = -&(&(&params.a * &d) * &inv_sqrt_2p0_cubed());
    let comm = OperatorExpr::gen(m, Generator::Ap)
        .commutator(&OperatorExpr::gen(m, Generator::Am))
        .expect("same mode");
    let j3 = comm.scale(&(&(&params.a.powi(2) * &d) * &(&inv_2p0() * &ScalarPoly::int(2))));
    [xp.scale(&lead), xm.scale(&lead), j3]
}

/// Treatment of the Planck constant in quantum checks.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum Hbar {
    #[default]
    Symbolic,
    Zero,
}

impl Hbar {
    pub fn apply(self, e: &OperatorExpr) -> OperatorExpr {
        match self {
            Hbar::Symbolic => e.clone(),
            Hbar::Zero => e.subst_symbol(Symbol::Hbar, &ScalarPoly::zero()).expect("hbar has no negative powers"),
        }
    }

    pub fn apply3(self, t: &JacobiTriple) -> JacobiTriple {
        array::from_fn(|k| self.apply(&t[k]))
    }
}

fn sub3(a: &JacobiTriple, b: &JacobiTriple) -> JacobiTriple {
    array::from_fn(|k| &a[k] - &b[k])
}

fn subst3(t: &JacobiTriple, sym: Symbol, v: &ScalarPoly) -> JacobiTriple {
    array::from_fn(|k| t[k].subst_symbol(sym, v).expect("polynomial in the symbol"))
}

fn symbolic_xyz() -> (Vec3, Vec3, Vec3) {
    (Vec3::symbolic_x(), Vec3::symbolic_y(), Vec3::symbolic_z())
}

const REF_CLOSED: &str = "closed-form Jacobi operator of the four-parameter family";
const REF_QLIE: &str = "quantum counterparts of I, II, VII, VI, IX, VIII are Lie algebras";
const REF_CLIE: &str = "classical Bianchi algebras satisfy the Jacobi identity";

/// Symbolic check of the closed form, including independence of `b`.
pub fn verify_closed_form(hbar: Hbar) -> Result<VerificationReport, OperadError> {
    let (x, y, z) = symbolic_xyz();
    let params = FamilyParams::symbolic();
    let j = hbar.apply3(&jacobi_op(&x, &y, &z, &family_mu(&params))?);
    let closed = closed_form_jacobi(&x, &y, &z, &params);
    let residual = sub3(&j, &closed);
    let mut report = VerificationReport::new();
    for k in 0..3 {
        report.push(Check::residual(
            format!("closed-form.J{}", k + 1),
            REF_CLOSED,
            &residual[k],
            format!("{} terms", j[k].num_terms()),
        ));
    }
    let at0 = subst3(&j, Symbol::B, &ScalarPoly::zero());
    let at1 = subst3(&j, Symbol::B, &ScalarPoly::one());
    report.push(Check::residual("closed-form.no-b", REF_CLOSED, &sub3(&j, &at0), "J - J|b=0"));
    report.push(Check::residual("closed-form.b-independent", REF_CLOSED, &sub3(&at0, &at1), "J|b=0 - J|b=1"));
    Ok(report)
}

/// The closed form specialized to each family member, against the Jacobi
/// operator of its stored quantum row.
pub fn verify_closed_form_specializations(tables: &TableSet, hbar: Hbar) -> Result<VerificationReport, OperadError> {
    let (x, y, z) = symbolic_xyz();
    let mut report = VerificationReport::new();
    for kind in BianchiType::FAMILY {
        let row = tables.row(kind);
        let params = FamilyParams::for_type(kind).expect("family member");
        let j = hbar.apply3(&jacobi_op(&x, &y, &z, &row.quantum_op())?);
        let closed = closed_form_jacobi(&x, &y, &z, &params);
        report.push(Check::residual(
            format!("closed-form.specialization.{kind}"),
            REF_CLOSED,
            &sub3(&j, &closed),
            format!("J3 = {}", j[2].render_factored()),
        ));
    }
    // V collapses to the commutator term alone
    let v = closed_form_jacobi(&x, &y, &z, &FamilyParams::for_type(BianchiType::V).expect("family member"));
    let m = Mode::Quantum;
    let comm = OperatorExpr::gen(m, Generator::Ap).commutator(&OperatorExpr::gen(m, Generator::Am))?;
    let factor = &det3(&x, &y, &z) * &(&inv_2p0() * &ScalarPoly::int(2));
    let expect = [OperatorExpr::zero(m), OperatorExpr::zero(m), comm.scale(&factor)];
    report.push(Check::residual("closed-form.specialization.V.closed", REF_CLOSED, &sub3(&v, &expect), ""));
    Ok(report)
}

pub fn verify_quantum_lie_types(tables: &TableSet, hbar: Hbar) -> Result<VerificationReport, OperadError> {
    let (x, y, z) = symbolic_xyz();
    let mut report = VerificationReport::new();
    for kind in BianchiType::QUANTUM_LIE {
        let j = hbar.apply3(&jacobi_op(&x, &y, &z, &tables.row(kind).quantum_op())?);
        report.push(Check::residual(format!("jacobi-quantum.{kind}"), REF_QLIE, &j, ""));
    }
    Ok(report)
}

pub fn verify_classical_lie(tables: &TableSet) -> Result<VerificationReport, OperadError> {
    let (x, y, z) = symbolic_xyz();
    let mut report = VerificationReport::new();
    for tr in &tables.rows {
        let j = jacobi_op(&x, &y, &z, &tr.row.initial_op())?;
        report.push(Check::residual(format!("jacobi-classical.{}", tr.row.kind), REF_CLIE, &j, ""));
    }
    Ok(report)
}
