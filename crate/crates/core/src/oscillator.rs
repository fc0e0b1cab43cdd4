//! Harmonic oscillator dynamics as a formal derivation, the 3x3 matrix Lax
//! pair, and the binary operadic Lax pair built from nine constants `C1..C9`.
//!
//! Time never appears explicitly. Evolution is the derivation [`ddt`] with
//! `q' = p`, `p' = -w^2 q`, `A+' = -(w/2) A-`, `A-' = (w/2) A+`.
//! The `A±` rules come from differentiating `A+^2 - A-^2 = 2p` and
//! `A+ A- = w q` and solving for `(A+', A-')`.

use std::array;

use crate::operad::{g_bracket, MultiOp, OperadError};
use crate::report::{Check, VerificationReport};
use crate::scalars::{inv_2p0, inv_sqrt_2p0, p0, GaussRat, ScalarPoly, Symbol};
use crate::weyl::{Generator, Mode, OperatorExpr, WeylError};

pub type Matrix3 = [[OperatorExpr; 3]; 3];

/// Slots `(i, j, k)` of `mu_{ij}^k`, one-based, in table column order.
pub const TABLE_SLOTS: [(usize, usize, usize); 9] = [
    (1, 2, 1),
    (1, 2, 2),
    (1, 2, 3),
    (2, 3, 1),
    (2, 3, 2),
    (2, 3, 3),
    (3, 1, 1),
    (3, 1, 2),
    (3, 1, 3),
];

/// `"12^1"`-style label of a table slot.
pub fn slot_label(slot: usize) -> String {
    let (i, j, k) = TABLE_SLOTS[slot];
    format!("{i}{j}^{k}")
}

/// Reads the nine table slots of a binary operation.
pub fn table_entries(mu: &MultiOp) -> [OperatorExpr; 9] {
    array::from_fn(|n| {
        let (i, j, k) = TABLE_SLOTS[n];
        mu.get(k - 1, &[i - 1, j - 1]).clone()
    })
}

/// Antisymmetric binary operation on a 3D space from its nine table slots.
pub fn from_table_entries(entries: &[OperatorExpr; 9], mode: Mode) -> MultiOp {
    let mut mu = MultiOp::zero(3, 2, mode).expect("nonempty shape");
    for (n, v) in entries.iter().enumerate() {
        let (i, j, k) = TABLE_SLOTS[n];
        mu.set_antisymmetric(k - 1, i - 1, j - 1, v.clone());
    }
    mu
}

fn cl(g: Generator) -> OperatorExpr {
    OperatorExpr::gen(Mode::Classical, g)
}

fn cs(c: ScalarPoly) -> OperatorExpr {
    OperatorExpr::scalar(Mode::Classical, c)
}

fn omega() -> ScalarPoly {
    ScalarPoly::symbol(Symbol::Omega)
}

fn half_omega() -> ScalarPoly {
    omega().scale(&GaussRat::ratio(1, 2))
}

/// `H = (p^2 + w^2 q^2) / 2`.
pub fn hamiltonian() -> OperatorExpr {
    let p = cl(Generator::P);
    let q = cl(Generator::Q);
    let w2 = omega().powi(2);
    (&(&p * &p) + &(&q * &q).scale(&w2)).scale(&ScalarPoly::ratio(1, 2))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaxPair {
    pub l: Matrix3,
    pub m: Matrix3,
}

/// `L = [[p, wq, 0], [wq, -p, 0], [0, 0, 1]]`, `M = (w/2) [[0, -1, 0], [1, 0, 0], [0, 0, 0]]`.
pub fn lax_pair() -> LaxPair {
    let zero = || OperatorExpr::zero(Mode::Classical);
    let p = cl(Generator::P);
    let wq = cl(Generator::Q).scale(&omega());
    let hw = cs(half_omega());
    LaxPair {
        l: [
            [p.clone(), wq.clone(), zero()],
            [wq, -&p, zero()],
            [zero(), zero(), OperatorExpr::one(Mode::Classical)],
        ],
        m: [[zero(), -&hw, zero()], [hw, zero(), zero()], [zero(), zero(), zero()]],
    }
}

pub fn mat_mul(a: &Matrix3, b: &Matrix3) -> Matrix3 {
    array::from_fn(|r| {
        array::from_fn(|c| {
            (0..3).fold(OperatorExpr::zero(a[0][0].mode()), |acc, k| &acc + &(&a[r][k] * &b[k][c]))
        })
    })
}

pub fn trace(a: &Matrix3) -> OperatorExpr {
    &(&a[0][0] + &a[1][1]) + &a[2][2]
}

/// Cofactor expansion along the first row (commutative entries).
pub fn det(a: &Matrix3) -> OperatorExpr {
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| &(&a[r1][c1] * &a[r2][c2]) - &(&a[r1][c2] * &a[r2][c1]);
    let t0 = &a[0][0] * &minor(1, 2, 1, 2);
    let t1 = &a[0][1] * &minor(1, 2, 0, 2);
    let t2 = &a[0][2] * &minor(1, 2, 0, 1);
    &(&t0 - &t1) + &t2
}

fn ddt_generator(g: Generator) -> OperatorExpr {
    match g {
        Generator::Q => cl(Generator::P),
        Generator::P => cl(Generator::Q).scale(&-omega().powi(2)),
        Generator::Ap => cl(Generator::Am).scale(&-half_omega()),
        Generator::Am => cl(Generator::Ap).scale(&half_omega()),
    }
}

/// Time derivative along the oscillator flow, extended by linearity and the
/// Leibniz rule; parameters are constant.
pub fn ddt(e: &OperatorExpr) -> Result<OperatorExpr, WeylError> {
    if e.mode() != Mode::Classical {
        return Err(WeylError::WrongMode { expected: Mode::Classical, found: e.mode() });
    }
    let mut out = OperatorExpr::zero(Mode::Classical);
    for (word, c) in e.terms() {
        for pos in 0..word.len() {
            let mut acc = cs(c.clone());
            for (n, g) in word.0.iter().enumerate() {
                let factor = if n == pos { ddt_generator(*g) } else { cl(*g) };
                acc = &acc * &factor;
            }
            out = &out + &acc;
        }
    }
    Ok(out)
}

fn ddt_matrix(a: &Matrix3) -> Matrix3 {
    array::from_fn(|r| array::from_fn(|c| ddt(&a[r][c]).expect("classical matrix")))
}

const LAX_REF: &str = "matrix Lax equation dL/dt = ML - LM";

/// Checks the matrix Lax equation entrywise plus the isospectral invariants.
pub fn verify_matrix_lax() -> VerificationReport {
    let LaxPair { l, m } = lax_pair();
    let dl = ddt_matrix(&l);
    let ml = mat_mul(&m, &l);
    let lm = mat_mul(&l, &m);
    let mut report = VerificationReport::new();
    for r in 0..3 {
        for c in 0..3 {
            let residual = &dl[r][c] - &(&ml[r][c] - &lm[r][c]);
            report.push(Check::residual(
                format!("matrix-lax.entry({},{})", r + 1, c + 1),
                LAX_REF,
                &residual,
                format!("dL/dt = {}", dl[r][c]),
            ));
        }
    }
    let det_l = det(&l);
    let l2 = mat_mul(&l, &l);
    let checks = [
        ("matrix-lax.ddt-det", "conservation of det L", ddt(&det_l).unwrap(), format!("det L = {det_l}")),
        ("matrix-lax.ddt-trace", "conservation of tr L", ddt(&trace(&l)).unwrap(), "tr L = 1".to_string()),
        ("matrix-lax.ddt-trace-square", "conservation of tr L^2", ddt(&trace(&l2)).unwrap(), format!("tr L^2 = {}", trace(&l2))),
        ("matrix-lax.det-plus-2H", "det L = -2H", &det_l + &hamiltonian().scale(&ScalarPoly::int(2)), String::new()),
        ("matrix-lax.ddt-hamiltonian", "energy conservation dH/dt = 0", ddt(&hamiltonian()).unwrap(), format!("H = {}", hamiltonian())),
    ];
    for (id, reference, residual, detail) in checks {
        report.push(Check::residual(id, reference, &residual, detail));
    }
    report
}

/// `A+^2 - A-^2 - 2p` and `A+ A- - w q`, the quasi-canonical relations.
pub fn quasi_canonical_relations() -> [OperatorExpr; 2] {
    let ap = cl(Generator::Ap);
    let am = cl(Generator::Am);
    let r1 = &(&(&ap * &ap) - &(&am * &am)) - &cl(Generator::P).scale(&ScalarPoly::int(2));
    let r2 = &(&ap * &am) - &cl(Generator::Q).scale(&omega());
    [r1, r2]
}

/// The derivation maps the ideal of the quasi-canonical relations into itself:
/// `d(r1)/dt = -2w r2` and `d(r2)/dt = (w/2) r1`.
pub fn verify_derivation_ideal() -> VerificationReport {
    let [r1, r2] = quasi_canonical_relations();
    let reference = "quasi-canonical coordinates A+^2 - A-^2 = 2p, A+ A- = wq";
    let d1 = ddt(&r1).unwrap();
    let d2 = ddt(&r2).unwrap();
    let e1 = r2.scale(&omega().scale(&GaussRat::int(-2)));
    let e2 = r1.scale(&half_omega());
    let mut report = VerificationReport::new();
    report.push(Check::residual("derivation.ideal(A+^2-A-^2-2p)", reference, &(&d1 - &e1), format!("d/dt = {d1}")));
    report.push(Check::residual("derivation.ideal(A+A- - wq)", reference, &(&d2 - &e2), format!("d/dt = {d2}")));
    report
}

/// The nine constants `C1..C9`; `self.0[0]` is `C1`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CVec(pub [ScalarPoly; 9]);

impl CVec {
    /// One-based accessor, `c(1)` is `C1`.
    pub fn c(&self, nu: usize) -> &ScalarPoly {
        &self.0[nu - 1]
    }
}

/// Binary antisymmetric operation with structure functions linear in
/// `p, wq, A+, A-` and the constants `C`.
pub fn build_mu(c: &CVec) -> MultiOp {
    let p = cl(Generator::P);
    let wq = cl(Generator::Q).scale(&omega());
    let ap = cl(Generator::Ap);
    let am = cl(Generator::Am);
    let k = |nu: usize| c.c(nu);
    let lin = |a: &OperatorExpr, ca: &ScalarPoly, b: &OperatorExpr, cb: &ScalarPoly| &a.scale(ca) + &b.scale(cb);
    let neg = |x: &ScalarPoly| -x;

    let mut mu = MultiOp::zero(3, 2, Mode::Classical).expect("nonempty shape");
    let set = |mu: &mut MultiOp, (i, j, kk): (usize, usize, usize), v: OperatorExpr| {
        mu.set_antisymmetric(kk - 1, i - 1, j - 1, v)
    };
    set(&mut mu, (2, 3, 1), &lin(&p, k(2), &wq, &neg(k(3))) - &cs(k(4).clone()));
    set(&mut mu, (1, 3, 2), &lin(&p, k(2), &wq, &neg(k(3))) + &cs(k(4).clone()));
    set(&mut mu, (3, 1, 1), &lin(&wq, k(2), &p, k(3)) - &cs(k(1).clone()));
    set(&mut mu, (2, 3, 2), &lin(&wq, k(2), &p, k(3)) + &cs(k(1).clone()));
    set(&mut mu, (1, 2, 1), lin(&ap, k(5), &am, k(6)));
    set(&mut mu, (1, 2, 2), lin(&am, k(5), &ap, &neg(k(6))));
    set(&mut mu, (1, 3, 3), lin(&ap, k(7), &am, k(8)));
    set(&mut mu, (2, 3, 3), lin(&am, k(7), &ap, &neg(k(8))));
    set(&mut mu, (1, 2, 3), cs(k(9).clone()));
    mu
}

/// Constants matching initial structure constants at `q = 0`, `p = p0`,
/// `A+ = sqrt(2 p0)`, `A- = 0`. `mu0` is in [`TABLE_SLOTS`] order.
pub fn solve_coefficients(mu0: &[ScalarPoly; 9]) -> CVec {
    let m = |i: usize, j: usize, k: usize| -> ScalarPoly {
        let n = TABLE_SLOTS.iter().position(|&s| s == (i, j, k));
        match n {
            Some(n) => mu0[n].clone(),
            None => {
                let n = TABLE_SLOTS.iter().position(|&s| s == (j, i, k)).expect("slot");
                -&mu0[n]
            }
        }
    };
    let half = ScalarPoly::ratio(1, 2);
    let c1 = &half * &(&m(2, 3, 2) - &m(3, 1, 1));
    let c2 = &inv_2p0() * &(&m(1, 3, 2) + &m(2, 3, 1));
    let c3 = &inv_2p0() * &(&m(2, 3, 2) + &m(3, 1, 1));
    let c4 = &half * &(&m(1, 3, 2) - &m(2, 3, 1));
    let c5 = &inv_sqrt_2p0() * &m(1, 2, 1);
    let c6 = -&(&inv_sqrt_2p0() * &m(1, 2, 2));
    let c7 = &inv_sqrt_2p0() * &m(1, 3, 3);
    let c8 = -&(&inv_sqrt_2p0() * &m(2, 3, 3));
    let c9 = m(1, 2, 3);
    CVec([c1, c2, c3, c4, c5, c6, c7, c8, c9])
}

/// `C2^2 + C3^2 + C5^2 + C6^2 + C7^2 + C8^2 != 0` as a polynomial.
pub fn nondegenerate(c: &CVec) -> bool {
    let sum = [2, 3, 5, 6, 7, 8]
        .iter()
        .fold(ScalarPoly::zero(), |acc, &nu| &acc + &c.c(nu).powi(2));
    !sum.is_zero()
}

/// Generator values at `t = 0` on the `p0 > 0` branch.
pub fn initial_value(g: Generator) -> ScalarPoly {
    match g {
        Generator::Q | Generator::Am => ScalarPoly::zero(),
        Generator::P => p0(),
        Generator::Ap => ScalarPoly::symbol(Symbol::S),
    }
}

/// Substitutes `q -> 0`, `p -> p0`, `A+ -> sqrt(2 p0)`, `A- -> 0`.
pub fn at_initial(e: &OperatorExpr) -> Result<OperatorExpr, WeylError> {
    if e.mode() != Mode::Classical {
        return Err(WeylError::WrongMode { expected: Mode::Classical, found: e.mode() });
    }
    e.map_generators(Mode::Classical, |g| cs(initial_value(g)))
}

/// `M` lifted to a degree-one operation.
pub fn lax_m_operation() -> MultiOp {
    let LaxPair { m, .. } = lax_pair();
    let rows: Vec<Vec<OperatorExpr>> = m.iter().map(|r| r.to_vec()).collect();
    MultiOp::from_matrix(&rows, Mode::Classical).expect("3x3 matrix")
}

const OPERADIC_REF: &str = "operadic Lax equation dmu/dt = [M, mu]";

/// Checks `d(mu)/dt = [M, mu]` on all 27 entries, using the Gerstenhaber bracket.
pub fn verify_operadic_lax(mu: &MultiOp, label: &str) -> Result<VerificationReport, OperadError> {
    if mu.mode() != Mode::Classical {
        return Err(OperadError::ModeMismatch(Mode::Classical, mu.mode()));
    }
    if mu.dim() != 3 || mu.degree() != 2 {
        return Err(OperadError::Shape { expected: 2, dim: 3, degree: mu.degree(), found_dim: mu.dim() });
    }
    let bracket = g_bracket(&lax_m_operation(), mu)?;
    let mut report = VerificationReport::new();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let lhs = ddt(mu.get(k, &[i, j]))?;
                let rhs = bracket.get(k, &[i, j]);
                report.push(Check::residual(
                    format!("operadic-lax.{label}.mu_{}{}^{}", i + 1, j + 1, k + 1),
                    OPERADIC_REF,
                    &(&lhs - rhs),
                    format!("dmu/dt = {lhs}"),
                ));
            }
        }
    }
    Ok(report)
}
