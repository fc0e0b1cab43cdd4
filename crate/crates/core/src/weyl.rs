//! Operator expressions over four generators.
//!
//! In classical mode everything commutes and words are sorted. In quantum mode
//! the only relation is the CCR, applied as the rewrite `P Q -> Q P - i*hbar`;
//! `Ah+` and `Ah-` are free, and `Q`, `P` never move across them.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::scalars::{join_signed, render_term, GaussRat, ScalarPoly, SubstError, Symbol};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    Q,
    P,
    Ap,
    Am,
}

impl Generator {
    pub const ALL: [Generator; 4] = [Generator::Q, Generator::P, Generator::Ap, Generator::Am];

    pub fn name(self, mode: Mode) -> &'static str {
        match (mode, self) {
            (Mode::Classical, Generator::Q) => "q",
            (Mode::Classical, Generator::P) => "p",
            (Mode::Classical, Generator::Ap) => "A+",
            (Mode::Classical, Generator::Am) => "A-",
            (Mode::Quantum, Generator::Q) => "qh",
            (Mode::Quantum, Generator::P) => "ph",
            (Mode::Quantum, Generator::Ap) => "Ah+",
            (Mode::Quantum, Generator::Am) => "Ah-",
        }
    }

    pub fn from_name(name: &str) -> Option<(Generator, Mode)> {
        Mode::ALL.iter().find_map(|&m| {
            Generator::ALL
                .iter()
                .find(|g| g.name(m) == name)
                .map(|&g| (g, m))
        })
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    Classical,
    Quantum,
}

impl Mode {
    pub const ALL: [Mode; 2] = [Mode::Classical, Mode::Quantum];
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Classical => "classical",
            Mode::Quantum => "quantum",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("mode mismatch: {0} vs {1}")]
    ModeMismatch(Mode, Mode),
    #[error("expected {expected} operator expression, got {found}")]
    WrongMode { expected: Mode, found: Mode },
    #[error(transparent)]
    Subst(#[from] SubstError),
}

/// A word over the generators, ordered by length first, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Generator>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn render(&self, mode: Mode) -> String {
        self.0.iter().map(|g| g.name(mode)).collect::<Vec<_>>().join(" ")
    }

    /// Positions `k` with `P` at `k` and `Q` at `k+1`.
    pub fn ccr_redexes(&self) -> Vec<usize> {
        self.0
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0] == Generator::P && w[1] == Generator::Q)
            .map(|(k, _)| k)
            .collect()
    }

    fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `-i*hbar`, the scalar produced by one CCR swap.
fn ccr_scalar() -> ScalarPoly {
    ScalarPoly::symbol(Symbol::Hbar).scale(&-GaussRat::i())
}

/// One rewrite step at position `k`: `u P Q v -> u Q P v - i*hbar u v`.
pub fn rewrite_at(word: &Word, k: usize) -> [(Word, ScalarPoly); 2] {
    debug_assert!(word.0[k] == Generator::P && word.0[k + 1] == Generator::Q);
    let mut swapped = word.0.clone();
    swapped.swap(k, k + 1);
    let mut contracted = word.0.clone();
    contracted.drain(k..k + 2);
    [(Word(swapped), ScalarPoly::one()), (Word(contracted), ccr_scalar())]
}

/// Normalizes `coeff * word` with a caller-chosen redex at every step. The
/// chooser receives the list of available redex positions (never empty) and
/// returns one of them.
pub fn normalize_word_with(
    word: &Word,
    coeff: &ScalarPoly,
    mode: Mode,
    mut choose: impl FnMut(&[usize]) -> usize,
) -> OperatorExpr {
    let mut out = OperatorExpr::zero(mode);
    if coeff.is_zero() {
        return out;
    }
    if mode == Mode::Classical {
        let mut w = word.0.clone();
        w.sort();
        out.add_term(Word(w), coeff.clone());
        return out;
    }
    let mut work = vec![(word.clone(), coeff.clone())];
    while let Some((w, c)) = work.pop() {
        let redexes = w.ccr_redexes();
        if redexes.is_empty() {
            out.add_term(w, c);
            continue;
        }
        let k = choose(&redexes);
        for (nw, nc) in rewrite_at(&w, k) {
            let c2 = &c * &nc;
            if !c2.is_zero() {
                work.push((nw, c2));
            }
        }
    }
    out
}

/// Canonical linear combination of words with scalar coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OperatorExpr {
    mode: Mode,
    terms: BTreeMap<Word, ScalarPoly>,
}

impl OperatorExpr {
    pub fn zero(mode: Mode) -> Self {
        OperatorExpr { mode, terms: BTreeMap::new() }
    }

    pub fn one(mode: Mode) -> Self {
        OperatorExpr::scalar(mode, ScalarPoly::one())
    }

    pub fn scalar(mode: Mode, c: ScalarPoly) -> Self {
        let mut e = OperatorExpr::zero(mode);
        e.add_term(Word::empty(), c);
        e
    }

    pub fn int(mode: Mode, n: i64) -> Self {
        OperatorExpr::scalar(mode, ScalarPoly::int(n))
    }

    pub fn gen(mode: Mode, g: Generator) -> Self {
        let mut e = OperatorExpr::zero(mode);
        e.add_term(Word(vec![g]), ScalarPoly::one());
        e
    }

    /// Builds the normal form of an arbitrary list of `(word, coefficient)`
    /// pairs, rewriting leftmost redexes first.
    pub fn normalize<I>(mode: Mode, raw: I) -> Self
    where
        I: IntoIterator<Item = (Vec<Generator>, ScalarPoly)>,
    {
        let mut out = OperatorExpr::zero(mode);
        for (w, c) in raw {
            let n = normalize_word_with(&Word(w), &c, mode, |r| r[0]);
            out.add_assign_expr(&n);
        }
        out
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &ScalarPoly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The coefficient of a (normal-form) word.
    pub fn coeff(&self, word: &[Generator]) -> ScalarPoly {
        self.terms.get(&Word(word.to_vec())).cloned().unwrap_or_default()
    }

    /// `Some(c)` when the expression has no generators.
    pub fn as_scalar(&self) -> Option<ScalarPoly> {
        match self.terms.len() {
            0 => Some(ScalarPoly::zero()),
            1 => self.terms.get(&Word::empty()).cloned(),
            _ => None,
        }
    }

    pub fn contains_symbol(&self, sym: Symbol) -> bool {
        self.terms.values().any(|c| c.contains_symbol(sym))
    }

    pub fn contains_generator(&self, g: Generator) -> bool {
        self.terms.keys().any(|w| w.0.contains(&g))
    }

    fn add_term(&mut self, w: Word, c: ScalarPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn add_assign_expr(&mut self, other: &OperatorExpr) {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c.clone());
        }
    }

    fn check_mode(&self, other: &OperatorExpr) -> Result<(), WeylError> {
        if self.mode == other.mode {
            Ok(())
        } else {
            Err(WeylError::ModeMismatch(self.mode, other.mode))
        }
    }

    pub fn try_add(&self, other: &OperatorExpr) -> Result<OperatorExpr, WeylError> {
        self.check_mode(other)?;
        let mut out = self.clone();
        out.add_assign_expr(other);
        Ok(out)
    }

    pub fn try_sub(&self, other: &OperatorExpr) -> Result<OperatorExpr, WeylError> {
        self.try_add(&-other)
    }

    /// Concatenates words, multiplies coefficients and renormalizes.
    pub fn try_mul(&self, other: &OperatorExpr) -> Result<OperatorExpr, WeylError> {
        self.check_mode(other)?;
        let mut out = OperatorExpr::zero(self.mode);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let w = w1.concat(w2);
                let c = c1 * c2;
                let needs_rewrite = match self.mode {
                    Mode::Classical => true,
                    Mode::Quantum => {
                        // Both halves are already normal; only the seam can hold a redex.
                        matches!((w1.0.last(), w2.0.first()), (Some(Generator::P), Some(Generator::Q)))
                    }
                };
                if needs_rewrite {
                    out.add_assign_expr(&normalize_word_with(&w, &c, self.mode, |r| r[0]));
                } else {
                    out.add_term(w, c);
                }
            }
        }
        Ok(out)
    }

    /// `u v - v u`.
    pub fn commutator(&self, other: &OperatorExpr) -> Result<OperatorExpr, WeylError> {
        let uv = self.try_mul(other)?;
        let vu = other.try_mul(self)?;
        uv.try_sub(&vu)
    }

    pub fn scale(&self, c: &ScalarPoly) -> OperatorExpr {
        let mut out = OperatorExpr::zero(self.mode);
        for (w, k) in &self.terms {
            out.add_term(w.clone(), k * c);
        }
        out
    }

    /// Applies a scalar substitution to every coefficient.
    pub fn subst_scalars(&self, bindings: &BTreeMap<Symbol, ScalarPoly>) -> Result<OperatorExpr, WeylError> {
        let mut out = OperatorExpr::zero(self.mode);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c.subst(bindings)?);
        }
        Ok(out)
    }

    pub fn subst_symbol(&self, sym: Symbol, val: &ScalarPoly) -> Result<OperatorExpr, WeylError> {
        self.subst_scalars(&BTreeMap::from([(sym, val.clone())]))
    }

    /// Replaces every generator occurrence by an expression in `target` mode,
    /// multiplying out each normal-form word left to right.
    pub fn map_generators(
        &self,
        target: Mode,
        mut image: impl FnMut(Generator) -> OperatorExpr,
    ) -> Result<OperatorExpr, WeylError> {
        let images: Vec<OperatorExpr> = Generator::ALL.iter().map(|&g| image(g)).collect();
        for img in &images {
            if img.mode != target {
                return Err(WeylError::WrongMode { expected: target, found: img.mode });
            }
        }
        let mut out = OperatorExpr::zero(target);
        for (w, c) in &self.terms {
            let mut acc = OperatorExpr::scalar(target, c.clone());
            for g in &w.0 {
                acc = acc.try_mul(&images[*g as usize])?;
                if acc.is_zero() {
                    break;
                }
            }
            out.add_assign_expr(&acc);
        }
        Ok(out)
    }

    /// Same words, other mode. Valid because sorted classical words are
    /// already CCR-normal.
    pub fn with_mode(&self, target: Mode) -> Result<OperatorExpr, WeylError> {
        self.map_generators(target, |g| OperatorExpr::gen(target, g))
    }

    /// Flattened `(word, coefficient, monomial)` terms in render order.
    fn flat_terms(&self) -> Vec<(bool, String, &Word)> {
        let mut out = Vec::new();
        for (w, c) in &self.terms {
            for (e, k) in c.terms() {
                let (neg, text) = render_term(k, e);
                out.push((neg, text, w));
            }
        }
        out
    }

    /// Factored rendering `c * (w1 - w2 ...)` when all flattened terms share
    /// the same scalar up to sign; otherwise the canonical rendering.
    pub fn render_factored(&self) -> String {
        let flat = self.flat_terms();
        if flat.len() < 2 || flat.iter().any(|(_, t, _)| *t != flat[0].1) {
            return self.to_string();
        }
        let lead_neg = flat[0].0;
        let inner: Vec<(bool, String)> = flat
            .iter()
            .map(|(neg, _, w)| {
                let text = if w.is_empty() { "1".to_string() } else { w.render(self.mode) };
                (*neg != lead_neg, text)
            })
            .collect();
        let sign = if lead_neg { "-" } else { "" };
        format!("{sign}{} * ({})", flat[0].1, join_signed(&inner))
    }
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rendered: Vec<(bool, String)> = self
            .flat_terms()
            .into_iter()
            .map(|(neg, text, w)| {
                if w.is_empty() {
                    (neg, text)
                } else if text == "1" {
                    (neg, w.render(self.mode))
                } else {
                    (neg, format!("{text} * {}", w.render(self.mode)))
                }
            })
            .collect();
        f.write_str(&join_signed(&rendered))
    }
}

// Operator impls panic on mode mismatch; the `try_*` methods report it.

impl<'a> Add<&'a OperatorExpr> for &'a OperatorExpr {
    type Output = OperatorExpr;
    fn add(self, rhs: &OperatorExpr) -> OperatorExpr {
        self.try_add(rhs).expect("operator modes must match")
    }
}

impl<'a> Sub<&'a OperatorExpr> for &'a OperatorExpr {
    type Output = OperatorExpr;
    fn sub(self, rhs: &OperatorExpr) -> OperatorExpr {
        self.try_sub(rhs).expect("operator modes must match")
    }
}

impl<'a> Mul<&'a OperatorExpr> for &'a OperatorExpr {
    type Output = OperatorExpr;
    fn mul(self, rhs: &OperatorExpr) -> OperatorExpr {
        self.try_mul(rhs).expect("operator modes must match")
    }
}

impl Neg for &OperatorExpr {
    type Output = OperatorExpr;
    fn neg(self) -> OperatorExpr {
        OperatorExpr {
            mode: self.mode,
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

impl Neg for OperatorExpr {
    type Output = OperatorExpr;
    fn neg(self) -> OperatorExpr {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr<OperatorExpr> for OperatorExpr {
            type Output = OperatorExpr;
            fn $m(self, rhs: OperatorExpr) -> OperatorExpr { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a OperatorExpr> for OperatorExpr {
            type Output = OperatorExpr;
            fn $m(self, rhs: &OperatorExpr) -> OperatorExpr { (&self).$m(rhs) }
        }
        impl<'a> $tr<OperatorExpr> for &'a OperatorExpr {
            type Output = OperatorExpr;
            fn $m(self, rhs: OperatorExpr) -> OperatorExpr { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

#[cfg(test)]
mod tests {
    use super::*;
    use Generator::*;

    fn hbar_i(k: i64) -> ScalarPoly {
        // k * i * hbar
        ScalarPoly::symbol(Symbol::Hbar).scale(&GaussRat::i()).scale(&GaussRat::int(k))
    }

    #[test]
    fn ccr_single_swap() {
        let e = OperatorExpr::normalize(Mode::Quantum, [(vec![P, Q], ScalarPoly::one())]);
        assert_eq!(e.coeff(&[Q, P]), ScalarPoly::one());
        assert_eq!(e.coeff(&[]), hbar_i(-1));
        assert_eq!(e.num_terms(), 2);
    }

    #[test]
    fn ccr_two_p_one_q() {
        // P P Q = P (Q P - i hbar) = (Q P - i hbar) P - i hbar P = Q P P - 2 i hbar P
        let e = OperatorExpr::normalize(Mode::Quantum, [(vec![P, P, Q], ScalarPoly::one())]);
        assert_eq!(e.coeff(&[Q, P, P]), ScalarPoly::one());
        assert_eq!(e.coeff(&[P]), hbar_i(-2));
        assert_eq!(e.num_terms(), 2);
    }

    #[test]
    fn free_generators_are_untouched() {
        let e = OperatorExpr::normalize(Mode::Quantum, [(vec![Ap, Am], ScalarPoly::one())]);
        assert_eq!(e.coeff(&[Ap, Am]), ScalarPoly::one());
        assert_eq!(e.num_terms(), 1);
        let f = OperatorExpr::normalize(Mode::Quantum, [(vec![P, Ap, Q], ScalarPoly::one())]);
        assert_eq!(f.coeff(&[P, Ap, Q]), ScalarPoly::one());
        assert_eq!(f.num_terms(), 1);
    }

    #[test]
    fn classical_mode_sorts() {
        let e = OperatorExpr::normalize(Mode::Classical, [(vec![Am, P, Q], ScalarPoly::one())]);
        assert_eq!(e.coeff(&[Q, P, Am]), ScalarPoly::one());
        assert_eq!(e.num_terms(), 1);
    }

    #[test]
    fn coefficient_extraction_in_products() {
        let m = Mode::Classical;
        let wq = OperatorExpr::gen(m, Q).scale(&ScalarPoly::symbol(Symbol::Omega));
        let am = OperatorExpr::gen(m, Am).scale(&ScalarPoly::pow(Symbol::S, -1));
        let prod = &wq * &am;
        let expect = &ScalarPoly::symbol(Symbol::Omega) * &ScalarPoly::pow(Symbol::S, -1);
        assert_eq!(prod.coeff(&[Q, Am]), expect);
        assert_eq!(prod.num_terms(), 1);
        assert!((&OperatorExpr::zero(m) * &wq).is_zero());
    }

    #[test]
    fn quantum_product_keeps_order() {
        let m = Mode::Quantum;
        let shifted = &OperatorExpr::gen(m, P) - &OperatorExpr::scalar(m, crate::scalars::p0());
        let prod = &shifted * &OperatorExpr::gen(m, Ap);
        assert_eq!(prod.coeff(&[P, Ap]), ScalarPoly::one());
        assert!(prod.coeff(&[Ap, P]).is_zero());
    }

    #[test]
    fn commutators() {
        let m = Mode::Quantum;
        let c = OperatorExpr::gen(m, P).commutator(&OperatorExpr::gen(m, Q)).unwrap();
        assert_eq!(c, OperatorExpr::scalar(m, hbar_i(-1)));
        assert!(OperatorExpr::gen(m, Q).commutator(&OperatorExpr::gen(m, Q)).unwrap().is_zero());
        let a = OperatorExpr::gen(m, Ap).commutator(&OperatorExpr::gen(m, Am)).unwrap();
        assert_eq!(a.coeff(&[Ap, Am]), ScalarPoly::one());
        assert_eq!(a.coeff(&[Am, Ap]), ScalarPoly::int(-1));
    }

    #[test]
    fn mode_mismatch_is_rejected() {
        let a = OperatorExpr::gen(Mode::Quantum, P);
        let b = OperatorExpr::gen(Mode::Classical, P);
        assert_eq!(a.try_mul(&b), Err(WeylError::ModeMismatch(Mode::Quantum, Mode::Classical)));
        assert!(a.try_add(&b).is_err());
        assert!(a.commutator(&b).is_err());
    }

    #[test]
    fn rendering() {
        let m = Mode::Quantum;
        let c = OperatorExpr::gen(m, Ap)
            .commutator(&OperatorExpr::gen(m, Am))
            .unwrap()
            .scale(&ScalarPoly::term(GaussRat::int(2), crate::scalars::Exponents::of(Symbol::S, -2)));
        assert_eq!(c.to_string(), "2*s^-2 * Ah+ Ah- - 2*s^-2 * Ah- Ah+");
        assert_eq!(c.render_factored(), "2*s^-2 * (Ah+ Ah- - Ah- Ah+)");
        let pq = OperatorExpr::normalize(m, [(vec![P, Q], ScalarPoly::one())]);
        assert_eq!(pq.to_string(), "-i*hbar + qh ph");
        assert_eq!(OperatorExpr::zero(m).to_string(), "0");
    }
}
