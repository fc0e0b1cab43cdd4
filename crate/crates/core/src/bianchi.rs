//! The Bianchi data set: the eleven 3D real Lie algebras, their dynamical
//! deformations over the oscillator, the quantum counterparts, and the
//! four-parameter family covering types V, IV, VII_a, III_{a=1}, VI_{a!=1}.
//!
//! The stored tables are transcriptions; everything else is derived and
//! compared against them by [`check_tables_consistency`].

use std::array;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::operad::{MultiOp, OperadError};
use crate::oscillator::{
    at_initial, build_mu, nondegenerate, from_table_entries, initial_value, slot_label, solve_coefficients,
    table_entries,
};
use crate::report::{Check, VerificationReport};
use crate::scalars::{inv_2p0, inv_sqrt_2p0, p0, ScalarPoly, Symbol};
use crate::syntax::{parse_operator, parse_scalar, ParseError};
use crate::weyl::{Generator, Mode, OperatorExpr};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BianchiType {
    I,
    II,
    VII,
    VI,
    IX,
    VIII,
    V,
    IV,
    VIIa,
    IIIa1,
    VIa,
}

impl BianchiType {
    /// Table order.
    pub const ALL: [BianchiType; 11] = [
        BianchiType::I,
        BianchiType::II,
        BianchiType::VII,
        BianchiType::VI,
        BianchiType::IX,
        BianchiType::VIII,
        BianchiType::V,
        BianchiType::IV,
        BianchiType::VIIa,
        BianchiType::IIIa1,
        BianchiType::VIa,
    ];

    /// Types whose quantum counterparts are Lie algebras.
    pub const QUANTUM_LIE: [BianchiType; 6] = [
        BianchiType::I,
        BianchiType::II,
        BianchiType::VII,
        BianchiType::VI,
        BianchiType::IX,
        BianchiType::VIII,
    ];

    /// Types described by the four-parameter family.
    pub const FAMILY: [BianchiType; 5] = [
        BianchiType::V,
        BianchiType::IV,
        BianchiType::VIIa,
        BianchiType::IIIa1,
        BianchiType::VIa,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BianchiType::I => "I",
            BianchiType::II => "II",
            BianchiType::VII => "VII",
            BianchiType::VI => "VI",
            BianchiType::IX => "IX",
            BianchiType::VIII => "VIII",
            BianchiType::V => "V",
            BianchiType::IV => "IV",
            BianchiType::VIIa => "VII_a",
            BianchiType::IIIa1 => "III_a=1",
            BianchiType::VIa => "VI_a!=1",
        }
    }
}

impl fmt::Display for BianchiType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown Bianchi type `{0}`")]
pub struct UnknownType(pub String);

impl FromStr for BianchiType {
    type Err = UnknownType;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(t) = BianchiType::ALL.iter().find(|t| t.name() == s) {
            return Ok(*t);
        }
        match s {
            "VIIa" | "VII_{a}" => Ok(BianchiType::VIIa),
            "III" | "III_{a=1}" | "IIIa1" => Ok(BianchiType::IIIa1),
            "VI_a" | "VIa" | "VI_{a!=1}" => Ok(BianchiType::VIa),
            _ => Err(UnknownType(s.to_string())),
        }
    }
}

/// One Bianchi type with its parameters and initial structure constants in
/// [`TABLE_SLOTS`] order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BianchiRow {
    pub kind: BianchiType,
    pub alpha: ScalarPoly,
    pub n: [ScalarPoly; 3],
    pub mu0: [ScalarPoly; 9],
}

/// Structure constants of `[e1,e2] = -alpha e2 + n3 e3`, `[e2,e3] = n1 e1`,
/// `[e3,e1] = n2 e2 + alpha e3`.
pub fn structure_constants(alpha: &ScalarPoly, n: &[ScalarPoly; 3]) -> [ScalarPoly; 9] {
    let z = ScalarPoly::zero;
    [
        z(),
        -alpha,
        n[2].clone(),
        n[0].clone(),
        z(),
        z(),
        z(),
        n[1].clone(),
        alpha.clone(),
    ]
}

impl BianchiRow {
    /// Difference between the stored constants and those implied by `(alpha, n)`.
    pub fn structure_residual(&self) -> [ScalarPoly; 9] {
        let expect = structure_constants(&self.alpha, &self.n);
        array::from_fn(|k| &self.mu0[k] - &expect[k])
    }

    /// The constant-coefficient classical operation.
    pub fn initial_op(&self) -> MultiOp {
        let entries = self.mu0.clone().map(|c| OperatorExpr::scalar(Mode::Classical, c));
        from_table_entries(&entries, Mode::Classical)
    }
}

fn int(n: i64) -> ScalarPoly {
    ScalarPoly::int(n)
}

fn sym_a() -> ScalarPoly {
    ScalarPoly::symbol(Symbol::A)
}

/// Transcription of the classification table.
pub fn bianchi_rows() -> Vec<BianchiRow> {
    use BianchiType::*;
    let row = |kind, alpha: ScalarPoly, n: [i64; 3], mu0: [ScalarPoly; 9]| {
        let r = BianchiRow { kind, alpha, n: n.map(int), mu0 };
        debug_assert!(r.structure_residual().iter().all(ScalarPoly::is_zero), "{kind}");
        r
    };
    let c = |v: [i64; 9]| v.map(int);
    let a = sym_a;
    let z = ScalarPoly::zero;
    vec![
        row(I, int(0), [0, 0, 0], c([0, 0, 0, 0, 0, 0, 0, 0, 0])),
        row(II, int(0), [1, 0, 0], c([0, 0, 0, 1, 0, 0, 0, 0, 0])),
        row(VII, int(0), [1, 1, 0], c([0, 0, 0, 1, 0, 0, 0, 1, 0])),
        row(VI, int(0), [1, -1, 0], c([0, 0, 0, 1, 0, 0, 0, -1, 0])),
        row(IX, int(0), [1, 1, 1], c([0, 0, 1, 1, 0, 0, 0, 1, 0])),
        row(VIII, int(0), [1, 1, -1], c([0, 0, -1, 1, 0, 0, 0, 1, 0])),
        row(V, int(1), [0, 0, 0], c([0, -1, 0, 0, 0, 0, 0, 0, 1])),
        row(IV, int(1), [0, 0, 1], c([0, -1, 1, 0, 0, 0, 0, 0, 1])),
        row(VIIa, a(), [0, 1, 1], [z(), -a(), int(1), z(), z(), z(), z(), int(1), a()]),
        row(IIIa1, int(1), [0, 1, -1], c([0, -1, -1, 0, 0, 0, 0, 1, 1])),
        row(VIa, a(), [0, 1, -1], [z(), -a(), int(-1), z(), z(), z(), z(), int(1), a()]),
    ]
}

/// Transcription of the time-evolved structure functions (classical mode).
pub fn dynamical_entries(kind: BianchiType) -> [OperatorExpr; 9] {
    use BianchiType::*;
    let m = Mode::Classical;
    let zero = || OperatorExpr::zero(m);
    let one = || OperatorExpr::int(m, 1);
    let p = OperatorExpr::gen(m, Generator::P);
    let wq = OperatorExpr::gen(m, Generator::Q).scale(&ScalarPoly::symbol(Symbol::Omega));
    let ap = OperatorExpr::gen(m, Generator::Ap);
    let am = OperatorExpr::gen(m, Generator::Am);
    let p0 = OperatorExpr::scalar(m, p0());
    let over_2p0 = |e: &OperatorExpr| e.scale(&inv_2p0());
    let over_p0 = |e: &OperatorExpr| e.scale(&(&inv_2p0() * &int(2)));
    let over_sqrt = |e: &OperatorExpr| e.scale(&inv_sqrt_2p0());
    let p_plus = over_2p0(&(&p + &p0));
    let p_minus_neg = -over_2p0(&(&p - &p0));
    let a = sym_a();
    let a_am = over_sqrt(&am.scale(&a));
    let a_ap = over_sqrt(&ap.scale(&a));
    match kind {
        I => array::from_fn(|_| zero()),
        II => [zero(), zero(), zero(), p_plus.clone(), over_2p0(&wq), zero(), over_2p0(&wq), p_minus_neg, zero()],
        VII => [zero(), zero(), zero(), one(), zero(), zero(), zero(), one(), zero()],
        VI => [zero(), zero(), zero(), over_p0(&p), over_p0(&wq), zero(), over_p0(&wq), -over_p0(&p), zero()],
        IX => [zero(), zero(), one(), one(), zero(), zero(), zero(), one(), zero()],
        VIII => [zero(), zero(), -one(), one(), zero(), zero(), zero(), one(), zero()],
        V => [over_sqrt(&am), -over_sqrt(&ap), zero(), zero(), zero(), -over_sqrt(&am), zero(), zero(), over_sqrt(&ap)],
        IV => [over_sqrt(&am), -over_sqrt(&ap), one(), zero(), zero(), -over_sqrt(&am), zero(), zero(), over_sqrt(&ap)],
        VIIa | IIIa1 | VIa => {
            let (a_am, a_ap) = if kind == IIIa1 { (over_sqrt(&am), over_sqrt(&ap)) } else { (a_am, a_ap) };
            let c3 = if kind == VIIa { one() } else { -one() };
            let neg_wq = -over_2p0(&wq);
            [a_am.clone(), -&a_ap, c3, p_minus_neg, neg_wq.clone(), -&a_am, neg_wq, p_plus, a_ap]
        }
    }
}

/// Transcription of the quantum table as expression text.
pub fn quantum_entries_text(kind: BianchiType) -> [&'static str; 9] {
    use BianchiType::*;
    const P_PLUS: &str = "(ph + 1/2*s^2) * s^-2";
    const P_MINUS_NEG: &str = "-(ph - 1/2*s^2) * s^-2";
    const WQ: &str = "w*qh * s^-2";
    const NEG_WQ: &str = "-w*qh * s^-2";
    match kind {
        I => ["0"; 9],
        II => ["0", "0", "0", P_PLUS, WQ, "0", WQ, P_MINUS_NEG, "0"],
        VII => ["0", "0", "0", "1", "0", "0", "0", "1", "0"],
        VI => ["0", "0", "0", "ph * 2*s^-2", "w*qh * 2*s^-2", "0", "w*qh * 2*s^-2", "-ph * 2*s^-2", "0"],
        IX => ["0", "0", "1", "1", "0", "0", "0", "1", "0"],
        VIII => ["0", "0", "-1", "1", "0", "0", "0", "1", "0"],
        V => ["Ah- * s^-1", "-Ah+ * s^-1", "0", "0", "0", "-Ah- * s^-1", "0", "0", "Ah+ * s^-1"],
        IV => ["Ah- * s^-1", "-Ah+ * s^-1", "1", "0", "0", "-Ah- * s^-1", "0", "0", "Ah+ * s^-1"],
        VIIa => ["a*Ah- * s^-1", "-a*Ah+ * s^-1", "1", P_MINUS_NEG, NEG_WQ, "-a*Ah- * s^-1", NEG_WQ, P_PLUS, "a*Ah+ * s^-1"],
        IIIa1 => ["Ah- * s^-1", "-Ah+ * s^-1", "-1", P_MINUS_NEG, NEG_WQ, "-Ah- * s^-1", NEG_WQ, P_PLUS, "Ah+ * s^-1"],
        VIa => ["a*Ah- * s^-1", "-a*Ah+ * s^-1", "-1", P_MINUS_NEG, NEG_WQ, "-a*Ah- * s^-1", NEG_WQ, P_PLUS, "a*Ah+ * s^-1"],
    }
}

/// Parameters of the four-parameter quantum family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyParams {
    pub beta: ScalarPoly,
    pub gamma: ScalarPoly,
    pub a: ScalarPoly,
    pub b: ScalarPoly,
}

impl FamilyParams {
    pub fn symbolic() -> Self {
        FamilyParams {
            beta: ScalarPoly::symbol(Symbol::Beta),
            gamma: ScalarPoly::symbol(Symbol::Gamma),
            a: sym_a(),
            b: ScalarPoly::symbol(Symbol::B),
        }
    }

    pub fn bindings(&self) -> BTreeMap<Symbol, ScalarPoly> {
        BTreeMap::from([
            (Symbol::Beta, self.beta.clone()),
            (Symbol::Gamma, self.gamma.clone()),
            (Symbol::A, self.a.clone()),
            (Symbol::B, self.b.clone()),
        ])
    }

    /// Parameter values per type. `III_a=1` uses `b = -1` so that it agrees
    /// with its quantum table row; the printed parameter table lists `b = 1`.
    pub fn for_type(kind: BianchiType) -> Option<FamilyParams> {
        let v = |beta: i64, gamma: i64, a: ScalarPoly, b: i64| FamilyParams {
            beta: int(beta),
            gamma: int(gamma),
            a,
            b: int(b),
        };
        match kind {
            BianchiType::V => Some(v(0, 0, int(1), 0)),
            BianchiType::IV => Some(v(0, 0, int(1), 1)),
            BianchiType::VIIa => Some(v(1, 1, sym_a(), 1)),
            BianchiType::IIIa1 => Some(v(1, 1, int(1), -1)),
            BianchiType::VIa => Some(v(1, 1, sym_a(), -1)),
            _ => None,
        }
    }
}

/// `b` as printed in the parameter table for `III_a=1`.
pub const PRINTED_B_III: i64 = 1;

/// Quantum structure operators of the four-parameter family.
pub fn family_mu(params: &FamilyParams) -> MultiOp {
    let m = Mode::Quantum;
    let FamilyParams { beta, gamma, a, b } = params;
    let p = OperatorExpr::gen(m, Generator::P);
    let q = OperatorExpr::gen(m, Generator::Q);
    let ap = OperatorExpr::gen(m, Generator::Ap).scale(&(a * &inv_sqrt_2p0()));
    let am = OperatorExpr::gen(m, Generator::Am).scale(&(a * &inv_sqrt_2p0()));
    let p0 = OperatorExpr::scalar(m, p0());
    let beta_wq = q.scale(&(&(beta * &ScalarPoly::symbol(Symbol::Omega)) * &inv_2p0()));
    let gamma_minus = (&p - &p0).scale(&(gamma * &inv_2p0()));
    let gamma_plus = (&p + &p0).scale(&(gamma * &inv_2p0()));
    let entries = [
        am.clone(),
        -&ap,
        OperatorExpr::scalar(m, b.clone()),
        -gamma_minus,
        -&beta_wq,
        -am,
        -beta_wq,
        gamma_plus,
        ap,
    ];
    from_table_entries(&entries, m)
}

/// `q -> qh`, `p -> ph`, `A± -> Ah±`, coefficients unchanged.
pub fn quantize(mu: &MultiOp) -> Result<MultiOp, OperadError> {
    if mu.mode() != Mode::Classical {
        return Err(OperadError::ModeMismatch(Mode::Classical, mu.mode()));
    }
    mu.try_map(Mode::Quantum, |e| e.with_mode(Mode::Quantum))
}

/// The initial-value substitution applied to a quantum expression.
pub fn at_initial_quantum(e: &OperatorExpr) -> Result<OperatorExpr, crate::weyl::WeylError> {
    e.map_generators(Mode::Classical, |g| OperatorExpr::scalar(Mode::Classical, initial_value(g)))
}

/// Time-evolved structure functions derived from the initial constants.
pub fn derive_dynamical(row: &BianchiRow) -> MultiOp {
    build_mu(&solve_coefficients(&row.mu0))
}

/// All table data for one type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub row: BianchiRow,
    pub dynamical: [OperatorExpr; 9],
    pub quantum: [OperatorExpr; 9],
    pub family: Option<FamilyParams>,
}

impl TableRow {
    pub fn dynamical_op(&self) -> MultiOp {
        from_table_entries(&self.dynamical, Mode::Classical)
    }

    pub fn quantum_op(&self) -> MultiOp {
        from_table_entries(&self.quantum, Mode::Quantum)
    }
}

#[derive(Debug, Error)]
pub enum TableError {
    #[error("malformed table JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("row {row}, field {field}: {source}")]
    Parse { row: String, field: String, source: ParseError },
    #[error(transparent)]
    UnknownType(#[from] UnknownType),
    #[error("missing row {0}")]
    MissingRow(BianchiType),
    #[error("row {row}: missing slot {slot} in {field}")]
    MissingSlot { row: String, field: String, slot: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableSet {
    pub rows: Vec<TableRow>,
}

#[derive(Serialize, Deserialize)]
struct FamilyJson {
    beta: String,
    gamma: String,
    a: String,
    b: String,
}

#[derive(Serialize, Deserialize)]
struct RowJson {
    alpha: String,
    n: [String; 3],
    initial: BTreeMap<String, String>,
    dynamical: BTreeMap<String, String>,
    quantum: BTreeMap<String, String>,
    family: Option<FamilyJson>,
}

#[derive(Serialize, Deserialize)]
struct TablesJson {
    rows: serde_json::Map<String, serde_json::Value>,
}

fn slots_json<T: fmt::Display>(values: &[T; 9]) -> BTreeMap<String, String> {
    (0..9).map(|n| (slot_label(n), values[n].to_string())).collect()
}

impl TableSet {
    /// The transcribed tables.
    pub fn reference() -> TableSet {
        let rows = bianchi_rows()
            .into_iter()
            .map(|row| {
                let kind = row.kind;
                let quantum = quantum_entries_text(kind).map(|t| parse_operator(t, Mode::Quantum).expect("table text parses"));
                TableRow { dynamical: dynamical_entries(kind), quantum, family: FamilyParams::for_type(kind), row }
            })
            .collect();
        TableSet { rows }
    }

    pub fn row(&self, kind: BianchiType) -> &TableRow {
        self.rows.iter().find(|r| r.row.kind == kind).expect("every type is present")
    }

    pub fn row_mut(&mut self, kind: BianchiType) -> &mut TableRow {
        self.rows.iter_mut().find(|r| r.row.kind == kind).expect("every type is present")
    }

    /// Deterministic JSON export, rows in table order, entries in canonical text.
    pub fn to_json(&self) -> String {
        let mut rows = serde_json::Map::new();
        for r in &self.rows {
            let rj = RowJson {
                alpha: r.row.alpha.to_string(),
                n: r.row.n.clone().map(|v| v.to_string()),
                initial: slots_json(&r.row.mu0),
                dynamical: slots_json(&r.dynamical),
                quantum: slots_json(&r.quantum),
                family: r.family.as_ref().map(|f| FamilyJson {
                    beta: f.beta.to_string(),
                    gamma: f.gamma.to_string(),
                    a: f.a.to_string(),
                    b: f.b.to_string(),
                }),
            };
            rows.insert(r.row.kind.name().to_string(), serde_json::to_value(rj).expect("row serializes"));
        }
        let mut out = serde_json::to_string_pretty(&TablesJson { rows }).expect("tables serialize");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<TableSet, TableError> {
        let doc: TablesJson = serde_json::from_str(text)?;
        let mut parsed: BTreeMap<BianchiType, TableRow> = BTreeMap::new();
        for (name, value) in doc.rows {
            let kind: BianchiType = name.parse()?;
            let rj: RowJson = serde_json::from_value(value)?;
            let ctx = |field: &str| {
                let (row, field) = (name.clone(), field.to_string());
                move |source| TableError::Parse { row, field, source }
            };
            let scalar = |field: &str, text: &str| parse_scalar(text).map_err(ctx(field));
            let slots = |field: &str, map: &BTreeMap<String, String>| -> Result<[String; 9], TableError> {
                let mut out: [String; 9] = Default::default();
                for (n, slot) in out.iter_mut().enumerate() {
                    let label = slot_label(n);
                    *slot = map.get(&label).cloned().ok_or_else(|| TableError::MissingSlot {
                        row: name.clone(),
                        field: field.to_string(),
                        slot: label,
                    })?;
                }
                Ok(out)
            };
            let alpha = scalar("alpha", &rj.alpha)?;
            let n = [scalar("n", &rj.n[0])?, scalar("n", &rj.n[1])?, scalar("n", &rj.n[2])?];
            let init = slots("initial", &rj.initial)?;
            let mut mu0: [ScalarPoly; 9] = Default::default();
            for k in 0..9 {
                mu0[k] = scalar("initial", &init[k])?;
            }
            let dyn_text = slots("dynamical", &rj.dynamical)?;
            let q_text = slots("quantum", &rj.quantum)?;
            let mut dynamical: [OperatorExpr; 9] = array::from_fn(|_| OperatorExpr::zero(Mode::Classical));
            let mut quantum: [OperatorExpr; 9] = array::from_fn(|_| OperatorExpr::zero(Mode::Quantum));
            for k in 0..9 {
                dynamical[k] = parse_operator(&dyn_text[k], Mode::Classical).map_err(ctx("dynamical"))?;
                quantum[k] = parse_operator(&q_text[k], Mode::Quantum).map_err(ctx("quantum"))?;
            }
            let family = match rj.family {
                None => None,
                Some(f) => Some(FamilyParams {
                    beta: scalar("family", &f.beta)?,
                    gamma: scalar("family", &f.gamma)?,
                    a: scalar("family", &f.a)?,
                    b: scalar("family", &f.b)?,
                }),
            };
            parsed.insert(kind, TableRow { row: BianchiRow { kind, alpha, n, mu0 }, dynamical, quantum, family });
        }
        let mut rows = Vec::with_capacity(11);
        for kind in BianchiType::ALL {
            rows.push(parsed.remove(&kind).ok_or(TableError::MissingRow(kind))?);
        }
        Ok(TableSet { rows })
    }
}

const REF_STRUCTURE: &str = "Bianchi structure equations of 3D real Lie algebras";
const REF_DYNAMICAL: &str = "dynamical deformations from the C-parameterized solution";
const REF_INITIAL: &str = "initial conditions q = 0, p = p0, A+ = sqrt(2 p0), A- = 0";
const REF_QUANTIZE: &str = "quantum counterparts via q -> qh, p -> ph, A± -> Ah±";
const REF_FAMILY: &str = "four-parameter quantum family (beta, gamma, a, b)";

fn entry_checks<F>(report: &mut VerificationReport, prefix: &str, kind: BianchiType, reference: &str, mut residual: F)
where
    F: FnMut(usize) -> (OperatorExpr, String),
{
    for n in 0..9 {
        let (res, detail) = residual(n);
        report.push(Check::residual(
            format!("tables.{prefix}.{kind}.mu_{}", slot_label(n)),
            reference,
            &res,
            detail,
        ));
    }
}

/// Cross-checks all stored tables against each other and against the
/// derivations.
pub fn check_tables_consistency(tables: &TableSet) -> VerificationReport {
    let mut report = VerificationReport::new();
    for tr in &tables.rows {
        let kind = tr.row.kind;
        let structure = tr.row.structure_residual().map(|c| OperatorExpr::scalar(Mode::Classical, c));
        report.push(Check::residual(
            format!("tables.structure.{kind}"),
            REF_STRUCTURE,
            &structure,
            "initial constants agree with (alpha, n)",
        ));

        let c = solve_coefficients(&tr.row.mu0);
        let derived = table_entries(&build_mu(&c));
        entry_checks(&mut report, "dynamical", kind, REF_DYNAMICAL, |n| {
            (&derived[n] - &tr.dynamical[n], format!("derived {}", derived[n]))
        });
        let holds = nondegenerate(&c);
        let c_text: Vec<String> = c.0.iter().map(|v| v.to_string()).collect();
        report.push(Check::note(
            format!("tables.nondegenerate.{kind}"),
            "nondegeneracy condition on C2, C3, C5..C8 (advisory)",
            format!("C = ({}); condition holds: {holds}", c_text.join(", ")),
        ));

        entry_checks(&mut report, "initial", kind, REF_INITIAL, |n| {
            let at = at_initial(&tr.dynamical[n]).expect("classical entry");
            let init = OperatorExpr::scalar(Mode::Classical, tr.row.mu0[n].clone());
            (&at - &init, format!("at t=0: {at}"))
        });

        entry_checks(&mut report, "quantum", kind, REF_QUANTIZE, |n| {
            let q = tr.dynamical[n].with_mode(Mode::Quantum).expect("mode change");
            (&q - &tr.quantum[n], format!("quantized {q}"))
        });

        entry_checks(&mut report, "initial-commutes", kind, REF_QUANTIZE, |n| {
            let lhs = at_initial_quantum(&tr.quantum[n]).expect("substitution");
            let rhs = at_initial(&tr.dynamical[n]).expect("classical entry");
            (&lhs - &rhs, String::new())
        });

        if let Some(params) = &tr.family {
            let fam = table_entries(&family_mu(params));
            entry_checks(&mut report, "family", kind, REF_FAMILY, |n| {
                (&fam[n] - &tr.quantum[n], format!("family {}", fam[n]))
            });
        }
    }
    report.push(Check::note(
        "tables.family.III_a=1.b-discrepancy",
        REF_FAMILY,
        format!(
            "parameter table prints b = {PRINTED_B_III} for III_a=1 but its quantum row has mu_12^3 = -1; using b = -1"
        ),
    ));
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bianchi_rows_are_lie_data() {
        let t = bianchi_rows();
        assert_eq!(t.len(), 11);
        let ix = &t[4];
        assert_eq!(ix.kind, BianchiType::IX);
        assert_eq!(ix.mu0.clone().map(|c| c.to_string()), ["0", "0", "1", "1", "0", "0", "0", "1", "0"]);
        assert!(t[0].mu0.iter().all(ScalarPoly::is_zero));
        let vi = &t[10];
        assert_eq!(vi.mu0.clone().map(|c| c.to_string()), ["0", "-a", "-1", "0", "0", "0", "0", "1", "a"]);
        for r in &t {
            assert!(r.structure_residual().iter().all(ScalarPoly::is_zero), "{}", r.kind);
        }
    }

    #[test]
    fn type_names_round_trip() {
        for t in BianchiType::ALL {
            assert_eq!(t.name().parse::<BianchiType>().unwrap(), t);
        }
        assert_eq!("III".parse::<BianchiType>().unwrap(), BianchiType::IIIa1);
        assert!("X".parse::<BianchiType>().is_err());
    }

    #[test]
    fn derive_type_two() {
        let tables = TableSet::reference();
        let mu = derive_dynamical(&tables.row(BianchiType::II).row);
        let m = Mode::Classical;
        let p = OperatorExpr::gen(m, Generator::P);
        let expect = &p.scale(&inv_2p0()) + &OperatorExpr::scalar(m, ScalarPoly::ratio(1, 2));
        assert_eq!(mu.get(0, &[1, 2]), &expect);
        assert_eq!(table_entries(&mu), tables.row(BianchiType::II).dynamical);
    }

    #[test]
    fn derive_type_seven_and_five() {
        let tables = TableSet::reference();
        let vii = table_entries(&derive_dynamical(&tables.row(BianchiType::VII).row));
        assert_eq!(vii.clone().map(|e| e.to_string()), ["0", "0", "0", "1", "0", "0", "0", "1", "0"]);
        let v = table_entries(&derive_dynamical(&tables.row(BianchiType::V).row));
        assert_eq!(v[0].to_string(), "s^-1 * A-");
        assert_eq!(v[1].to_string(), "-s^-1 * A+");
        assert_eq!(v[5].to_string(), "-s^-1 * A-");
        assert_eq!(v[8].to_string(), "s^-1 * A+");
    }

    #[test]
    fn quantize_examples() {
        let tables = TableSet::reference();
        let q = quantize(&tables.row(BianchiType::II).dynamical_op()).unwrap();
        assert_eq!(q.get(0, &[1, 2]).to_string(), "1/2 + s^-2 * ph");
        let ix = tables.row(BianchiType::IX);
        assert_eq!(table_entries(&quantize(&ix.dynamical_op()).unwrap()), ix.quantum);
        let v = quantize(&tables.row(BianchiType::V).dynamical_op()).unwrap();
        assert_eq!(v.get(0, &[0, 1]).to_string(), "s^-1 * Ah-");
        assert!(quantize(&v).is_err());
    }

    #[test]
    fn family_specializations() {
        let tables = TableSet::reference();
        for kind in BianchiType::FAMILY {
            let params = FamilyParams::for_type(kind).unwrap();
            assert_eq!(table_entries(&family_mu(&params)), tables.row(kind).quantum, "{kind}");
        }
        // the printed b = 1 for III_a=1 disagrees with its quantum row
        let mut printed = FamilyParams::for_type(BianchiType::IIIa1).unwrap();
        printed.b = int(PRINTED_B_III);
        assert_ne!(table_entries(&family_mu(&printed)), tables.row(BianchiType::IIIa1).quantum);
        // V has all beta/gamma entries zero
        let v = family_mu(&FamilyParams::for_type(BianchiType::V).unwrap());
        assert!(v.get(0, &[1, 2]).is_zero() && v.get(1, &[2, 0]).is_zero());
    }

    #[test]
    fn reference_tables_are_consistent() {
        let report = check_tables_consistency(&TableSet::reference());
        assert!(report.all_passed(), "{}", report.to_text());
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let t = TableSet::reference();
        let text = t.to_json();
        let back = TableSet::from_json(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn json_import_errors() {
        let t = TableSet::reference();
        let text = t.to_json();
        assert!(matches!(TableSet::from_json("{"), Err(TableError::Json(_))));
        let bad = text.replacen("\"1/2 + s^-2 * p\"", "\"1/2 + s^-2 * qh\"", 1);
        assert!(matches!(TableSet::from_json(&bad), Err(TableError::Parse { .. })));
        let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
        v["rows"].as_object_mut().unwrap().remove("IX");
        assert!(matches!(TableSet::from_json(&v.to_string()), Err(TableError::MissingRow(BianchiType::IX))));
    }

    #[test]
    fn corrupted_table_fails_consistency() {
        let mut t = TableSet::reference();
        t.row_mut(BianchiType::VI).dynamical[3] = OperatorExpr::int(Mode::Classical, 1);
        let report = check_tables_consistency(&t);
        assert!(!report.all_passed());
        assert!(!report.get("tables.dynamical.VI.mu_23^1").unwrap().passed());
    }
}
